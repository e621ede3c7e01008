use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &str) {
    pyo3::append_to_inittab!(twozeta_py);
    Python::attach(|py| {
        let globals = PyDict::new(py);
        let code = std::ffi::CString::new(code).unwrap();
        py.run(&code, Some(&globals), None).unwrap_or_else(|e| {
            e.print(py);
            panic!("python code failed");
        });
    });
}

use twozeta_py::twozeta_py;

#[test]
fn bindings_from_python() {
    run(r#"
import json
import twozeta_py as tz

c = tz.Curve("p=3; f=x^3+x")
assert c.genus == 1 and c.q == 3
assert c.l_polynomial() == [1, 0, 3]
assert c.class_number() == 4
assert c.strata() == [[3, 1]]
assert c.numerator_text() == "T^2*u-T*u+3*T+1"
els = c.jacobian()
assert len(els) == 4
for a in els:
    assert (a + (-a)).is_identity()
    assert (4 * a).is_identity()
pts = c.place_classes(1)
assert len(pts) == 4 and sum(p.is_identity() for p in pts) == 1

assert tz.abs_factor_count([(0, 0, 1), (1, 0, 3), (1, 1, -1), (2, 1, 1)]) == 1
assert tz.abs_factor_count([(0, 2, 1), (2, 0, -1)]) == 2
assert not tz.is_squarefree([(0, 0, 1), (1, 0, -2), (2, 0, 1)])

report = json.loads(tz.analyze("p=3; f=x^3+x", base_change=2))
assert report["class_number"] == "16"
assert tz.verify("p=3; f=x^3+x") == 0
assert tz.verify("p=3; f=x^3") == 2
try:
    tz.Curve("p=4; f=x^3+x")
    raise AssertionError("expected ValueError")
except ValueError:
    pass
"#);
}
