//! End-to-end analysis runs and their reports.
//!
//! The machine format is JSON with sorted keys, every exact number written
//! as a string, and two-space indentation; parsing a report and emitting it
//! again reproduces the same bytes.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abs_irr::{abs_factor_count, squarefree_check, verify_irreducibility_criterion};
use crate::bipoly::BiPoly;
use crate::check::CheckReport;
use crate::curve::HyperellipticModel;
use crate::error::{Error, Result};
use crate::jacobian::jacobian_elements;
use crate::measure::{base_change_data, parse_measure_table, Measure};
use crate::parse::parse_curve_spec;
use crate::places::enumerate_places;
use crate::qpoly::Rational;
use crate::zeta_one::{class_number, effective_divisor_counts, symmetric_product_counts};
use crate::zeta_two::{kapranov_identity_check, numerator_p, specialize_u, verify_functional_equation, TwoVarZeta};

pub const DEFAULT_MAX_WORK: u64 = 2_000_000_000;

/// Where the measure comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Curve(String),
    MeasureTable { path: PathBuf, genus: usize },
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: Input,
    /// Degree of the constant-field extension; 1 means none.
    pub base_change: u32,
    /// Highest divisor degree compared against the symmetric products;
    /// `None` means `2g + 2`.
    pub series_order: Option<usize>,
    pub max_work: u64,
    pub timing: bool,
}

impl RunConfig {
    pub fn curve(spec: impl Into<String>) -> Self {
        RunConfig {
            input: Input::Curve(spec.into()),
            base_change: 1,
            series_order: None,
            max_work: DEFAULT_MAX_WORK,
            timing: false,
        }
    }

    pub fn table(path: impl Into<PathBuf>, genus: usize) -> Self {
        RunConfig {
            input: Input::MeasureTable {
                path: path.into(),
                genus,
            },
            ..RunConfig::curve("")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceInfo {
    pub kind: String,
    pub spec: Option<String>,
    pub path: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityInfo {
    pub abs_factor_count: Option<usize>,
    pub squarefree: bool,
    /// Two polynomials whose product is `P`, when a rational split exists.
    pub witnesses: Option<Vec<String>>,
    pub checks: CheckReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub source: SourceInfo,
    pub base_change: u32,
    pub genus: usize,
    pub field_order: Option<String>,
    /// `a_1 .. a_2g` over the (possibly extended) field.
    pub point_counts: Option<Vec<String>>,
    pub l_polynomial: Option<Vec<String>>,
    pub class_number: String,
    pub lefschetz: Option<String>,
    /// Rows `n = 0..2g-2`, columns `nu = 0..g`.
    pub stratum_table: Vec<Vec<String>>,
    /// Coefficient of `T^i u^j` at `[i][j]`.
    pub numerator: Vec<Vec<String>>,
    pub numerator_text: String,
    pub series_order: Option<usize>,
    pub structure: CheckReport,
    pub irreducibility: IrreducibilityInfo,
    pub divisor_identity: Option<CheckReport>,
    pub consistency: Option<CheckReport>,
    pub all_passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl AnalysisReport {
    pub fn to_machine(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn from_machine(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn check_reports(&self) -> Vec<(&'static str, &CheckReport)> {
        let mut out = vec![("structure", &self.structure), ("irreducibility", &self.irreducibility.checks)];
        if let Some(r) = &self.divisor_identity {
            out.push(("divisor_identity", r));
        }
        if let Some(r) = &self.consistency {
            out.push(("consistency", r));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let src = self.source.spec.as_deref().or(self.source.path.as_deref()).unwrap_or("");
        let _ = writeln!(s, "input: {} ({})", src, self.source.kind);
        if self.base_change > 1 {
            let _ = writeln!(s, "base change: degree {}", self.base_change);
        }
        let _ = writeln!(s, "genus: {}", self.genus);
        if let Some(q) = &self.field_order {
            let _ = writeln!(s, "field order: {q}");
        }
        if let Some(a) = &self.point_counts {
            let _ = writeln!(s, "point counts: {}", a.join(", "));
        }
        if let Some(l) = &self.l_polynomial {
            let _ = writeln!(s, "L coefficients: {}", l.join(", "));
        }
        let _ = writeln!(s, "class number: {}", self.class_number);
        if !self.stratum_table.is_empty() {
            let _ = writeln!(s, "strata (row n, column nu):");
            for (n, row) in self.stratum_table.iter().enumerate() {
                let _ = writeln!(s, "  {n}: {}", row.join(" "));
            }
        }
        let _ = writeln!(s, "P(T,u) = {}", self.numerator_text);
        match self.irreducibility.abs_factor_count {
            Some(n) => {
                let _ = writeln!(s, "absolute factors: {n}");
            }
            None => {
                let _ = writeln!(s, "absolute factors: not computed (not squarefree)");
            }
        }
        for (section, report) in self.check_reports() {
            if report.not_applicable {
                let _ = writeln!(s, "[n/a ] {section}");
            }
            for c in &report.checks {
                let mark = if c.passed { "pass" } else { "FAIL" };
                let _ = writeln!(s, "[{mark}] {section}.{}: {}", c.name, c.detail);
            }
        }
        let _ = writeln!(s, "overall: {}", if self.all_passed { "pass" } else { "FAIL" });
        if let Some(t) = &self.timing {
            let _ = writeln!(s, "time: {} ms", t.total_ms);
        }
        s
    }
}

fn strs<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn numerator_matrix(p: &BiPoly) -> Vec<Vec<String>> {
    p.matrix().iter().map(|row| strs(row)).collect()
}

fn irreducibility_info(z: &TwoVarZeta, measure: &Measure) -> Result<IrreducibilityInfo> {
    let p = z.numerator();
    let squarefree = squarefree_check(p);
    let (count, witnesses) = if squarefree {
        let rep = abs_factor_count(p)?;
        (Some(rep.abs_factor_count), rep.witnesses.map(|(a, b)| vec![a.to_string(), b.to_string()]))
    } else {
        (None, None)
    };
    let checks = verify_irreducibility_criterion(z, measure)?;
    Ok(IrreducibilityInfo {
        abs_factor_count: count,
        squarefree,
        witnesses,
        checks,
    })
}

fn curve_report(spec_text: &str, cfg: &RunConfig) -> Result<AnalysisReport> {
    if cfg.base_change == 0 {
        return Err(Error::InvalidArgument("base change degree must be at least 1".into()));
    }
    let spec = parse_curve_spec(spec_text)?;
    let base = HyperellipticModel::from_spec(&spec, cfg.max_work)?;
    let data = base_change_data(&base, cfg.base_change, cfg.max_work)?;
    let model = &data.model;
    let g = model.genus();
    let order = cfg.series_order.unwrap_or(2 * g + 2);
    let z = numerator_p(&data.measure)?;
    let structure = verify_functional_equation(&z, &data.measure);
    let irreducibility = irreducibility_info(&z, &data.measure)?;
    let divisor_identity = kapranov_identity_check(&data.strata, &data.l, order)?;

    let mut consistency = CheckReport::new();
    let q = Rational::from_integer(BigInt::from(model.q()));
    let spec_l = specialize_u(&z, &q);
    consistency.push(
        "counting_specialization",
        spec_l == data.l.to_qpoly(),
        format!("P(T,{}) = {}", model.q(), spec_l.to_string_in("T")),
    );
    let places = enumerate_places(model, order.max(2 * g), cfg.max_work)?;
    let places_ok = places.verify_against_counts(model, cfg.max_work);
    consistency.push(
        "place_counts",
        places_ok.is_ok(),
        match places_ok {
            Ok(()) => format!("sum_(d|m) d N_d = a_m for m <= {}", places.max_degree()),
            Err(e) => e.to_string(),
        },
    );
    let effective = effective_divisor_counts(&places, order)?;
    let symmetric = symmetric_product_counts(&data.l, order)?;
    consistency.push(
        "effective_divisor_counts",
        effective == symmetric,
        format!("effective divisors of degree 0..={order}: {}", strs(&effective).join(", ")),
    );
    let elements = jacobian_elements(model, cfg.max_work)?;
    let h = class_number(&data.l);
    consistency.push(
        "jacobian_order",
        BigInt::from(elements.len()) == h,
        format!("{} reduced pairs, L(1) = {h}", elements.len()),
    );
    let duality = data.strata.check_class_duality(&elements, model);
    consistency.push(
        "class_duality",
        duality.is_ok(),
        match duality {
            Ok(()) => "h0(K-D) = h0(D) - deg D + g - 1 for every class".to_string(),
            Err(e) => e.to_string(),
        },
    );
    let strata_ok = data.strata.check_invariants();
    consistency.push(
        "strata_invariants",
        strata_ok.is_ok(),
        match strata_ok {
            Ok(()) => "row sums, zero section, duality, vanishing".to_string(),
            Err(e) => e.to_string(),
        },
    );

    let all_passed = structure.all_passed()
        && irreducibility.checks.all_passed()
        && divisor_identity.all_passed()
        && consistency.all_passed();
    Ok(AnalysisReport {
        source: SourceInfo {
            kind: "curve".into(),
            spec: Some(spec.to_string()),
            path: None,
        },
        base_change: cfg.base_change,
        genus: g,
        field_order: Some(model.q().to_string()),
        point_counts: Some(strs(&data.l.point_counts(2 * g))),
        l_polynomial: Some(strs(data.l.coeffs())),
        class_number: data.measure.pic0().to_string(),
        lefschetz: data.measure.lefschetz().map(ToString::to_string),
        stratum_table: data.strata.rows().iter().map(|r| strs(r)).collect(),
        numerator: numerator_matrix(z.numerator()),
        numerator_text: z.numerator().to_string(),
        series_order: Some(order),
        structure,
        irreducibility,
        divisor_identity: Some(divisor_identity),
        consistency: Some(consistency),
        all_passed,
        timing: None,
    })
}

fn table_report(path: &PathBuf, genus: usize, cfg: &RunConfig) -> Result<AnalysisReport> {
    if cfg.base_change != 1 {
        return Err(Error::InvalidArgument("base change applies to curves, not measure tables".into()));
    }
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let measure = parse_measure_table(&text)?;
    if measure.genus() != genus {
        return Err(Error::InvalidArgument(format!(
            "--genus {genus} disagrees with the table header g={}",
            measure.genus()
        )));
    }
    let z = numerator_p(&measure)?;
    let structure = verify_functional_equation(&z, &measure);
    let irreducibility = irreducibility_info(&z, &measure)?;
    let all_passed = structure.all_passed() && irreducibility.checks.all_passed();
    Ok(AnalysisReport {
        source: SourceInfo {
            kind: "measure_table".into(),
            spec: None,
            path: Some(path.display().to_string()),
        },
        base_change: 1,
        genus,
        field_order: None,
        point_counts: None,
        l_polynomial: None,
        class_number: measure.pic0().to_string(),
        lefschetz: measure.lefschetz().map(ToString::to_string),
        stratum_table: measure.values().iter().map(|r| strs(r)).collect(),
        numerator: numerator_matrix(z.numerator()),
        numerator_text: z.numerator().to_string(),
        series_order: None,
        structure,
        irreducibility,
        divisor_identity: None,
        consistency: None,
        all_passed,
        timing: None,
    })
}

/// Run the whole pipeline for one input.
pub fn run_analyze(cfg: &RunConfig) -> Result<AnalysisReport> {
    let start = Instant::now();
    let mut report = match &cfg.input {
        Input::Curve(spec) => curve_report(spec, cfg)?,
        Input::MeasureTable { path, genus } => table_report(path, *genus, cfg)?,
    };
    if cfg.timing {
        report.timing = Some(Timing {
            total_ms: start.elapsed().as_millis().to_u64().unwrap_or(u64::MAX),
        });
    }
    Ok(report)
}

/// Exit status of a verification run: 0 when every check passes.
pub fn run_verify(cfg: &RunConfig) -> i32 {
    match run_analyze(cfg) {
        Ok(r) if r.all_passed => 0,
        Ok(_) => 4,
        Err(e) => e.exit_code(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchEntry {
    pub line: usize,
    pub spec: String,
    /// `pass`, `fail` or `error`.
    pub status: String,
    pub exit_code: i32,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchReport {
    pub entries: Vec<BatchEntry>,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

impl BatchReport {
    /// 0 when everything passed, otherwise the largest per-curve code.
    pub fn exit_code(&self) -> i32 {
        self.entries.iter().map(|e| e.exit_code).max().unwrap_or(0)
    }

    pub fn to_machine(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = write!(s, "line {}: {} {}", e.line, e.status, e.spec);
            if !e.message.is_empty() {
                let _ = write!(s, " ({})", e.message);
            }
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "total {}: {} passed, {} failed, {} errors",
            self.total, self.passed, self.failed, self.errors
        );
        s
    }
}

/// One curve spec per line; blank lines and `#` comments are skipped.
/// Curves run in parallel, results keep input order.
pub fn run_batch(text: &str, template: &RunConfig) -> BatchReport {
    let jobs: Vec<(usize, String)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let entries: Vec<BatchEntry> = jobs
        .into_par_iter()
        .map(|(line, spec)| {
            let cfg = RunConfig {
                input: Input::Curve(spec.clone()),
                timing: false,
                ..template.clone()
            };
            let (status, exit_code, message) = match run_analyze(&cfg) {
                Ok(r) if r.all_passed => ("pass", 0, String::new()),
                Ok(r) => {
                    let failed: Vec<String> = r
                        .check_reports()
                        .iter()
                        .flat_map(|(sec, rep)| rep.failures().map(move |c| format!("{sec}.{}", c.name)))
                        .collect();
                    ("fail", 4, failed.join(", "))
                }
                Err(e) => ("error", e.exit_code(), e.to_string()),
            };
            BatchEntry {
                line,
                spec,
                status: status.into(),
                exit_code,
                message,
            }
        })
        .collect();
    let count = |s: &str| entries.iter().filter(|e| e.status == s).count();
    BatchReport {
        total: entries.len(),
        passed: count("pass"),
        failed: count("fail"),
        errors: count("error"),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_one_example() {
        let r = run_analyze(&RunConfig::curve("p=3; f=x^3+x")).unwrap();
        assert!(r.all_passed, "{}", r.to_text());
        assert_eq!(r.class_number, "4");
        assert_eq!(r.stratum_table, vec![vec!["3".to_string(), "1".to_string()]]);
        assert_eq!(r.numerator_text, BiPoly::from_terms(&[(0, 0, 1), (1, 0, 3), (1, 1, -1), (2, 1, 1)]).to_string());
        assert_eq!(r.irreducibility.abs_factor_count, Some(1));
    }

    #[test]
    fn machine_round_trip() {
        let r = run_analyze(&RunConfig::curve("p=5; f=x^5+x+1")).unwrap();
        let text = r.to_machine();
        let back = AnalysisReport::from_machine(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_machine(), text);
        let keys: Vec<&str> = text.lines().filter(|l| l.starts_with("  \"")).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn base_change_report() {
        let mut cfg = RunConfig::curve("p=3; f=x^3+x");
        cfg.base_change = 2;
        let r = run_analyze(&cfg).unwrap();
        assert!(r.all_passed);
        assert_eq!(r.class_number, "16");
        assert_eq!(r.l_polynomial, Some(vec!["1".into(), "6".into(), "9".into()]));
    }

    #[test]
    fn errors_carry_exit_codes() {
        assert_eq!(run_verify(&RunConfig::curve("p=4; f=x^3+x")), 2);
        assert_eq!(run_verify(&RunConfig::curve("p=3; f=x^3")), 2);
        assert_eq!(run_verify(&RunConfig::curve("p=3; f=x^3+x")), 0);
        let mut tight = RunConfig::curve("p=3; f=x^3+x");
        tight.max_work = 2;
        assert_eq!(run_verify(&tight), 3);
    }

    #[test]
    fn batch_keeps_order_and_continues() {
        let rep = run_batch("p=3; f=x^3+x\n\n# comment\np=3; f=x^3\np=5; f=x^3+x\n", &RunConfig::curve(""));
        assert_eq!(rep.total, 3);
        assert_eq!(rep.passed, 2);
        assert_eq!(rep.errors, 1);
        assert_eq!(rep.entries[1].line, 4);
        assert_eq!(rep.exit_code(), 2);
        let empty = run_batch("", &RunConfig::curve(""));
        assert_eq!((empty.total, empty.exit_code()), (0, 0));
    }

    #[test]
    fn timing_is_optional() {
        let mut cfg = RunConfig::curve("p=3; f=x^3+x");
        cfg.timing = true;
        let r = run_analyze(&cfg).unwrap();
        assert!(r.to_machine().contains("total_ms"));
        cfg.timing = false;
        assert!(!run_analyze(&cfg).unwrap().to_machine().contains("total_ms"));
    }
}
