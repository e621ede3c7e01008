"""Smoke test for the twozeta_py extension module.

Build first, e.g. `maturin develop -m crates/python/Cargo.toml`, or
`cargo build -p twozeta-py --release --features extension-module` and copy
target/release/libtwozeta_py.so next to this script as twozeta_py.so.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import twozeta_py as tz


def main():
    curve = tz.Curve("p=3; f=x^3+x")
    assert curve.l_polynomial() == [1, 0, 3]
    assert curve.class_number() == 4
    assert curve.numerator_text() == "T^2*u-T*u+3*T+1"

    elements = curve.jacobian()
    assert len(elements) == 4
    assert all((a + (-a)).is_identity() for a in elements)

    genus2 = tz.Curve("p=3; f=x^5+1")
    order = genus2.class_number()
    assert len(genus2.jacobian()) == order
    assert all((order * a).is_identity() for a in genus2.place_classes(1))

    assert tz.abs_factor_count([(0, 0, 1), (1, 0, -1), (1, 1, -1), (2, 1, 1)]) == 2

    report = json.loads(tz.analyze("p=3; f=x^3+x", base_change=2))
    assert report["all_passed"] and report["class_number"] == "16"
    assert tz.verify("p=3; f=x^3") == 2
    print("smoke test passed")


if __name__ == "__main__":
    main()
