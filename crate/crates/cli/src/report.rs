//! Reports: a JSON document for machines and a plain-text table for people.
//!
//! Every float in the JSON form is written as `{:.16e}` (17 significant
//! digits), so `parse_report(&emit_report(r)) == r` holds exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use ssb_core::breaking::SpectrumResult;
use ssb_core::linalg::CVec;

#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Bound {
    Below { tol: f64 },
    Within { lo: f64, hi: f64 },
    Near { target: f64, tol: f64 },
}

impl Bound {
    pub fn holds(&self, value: f64) -> bool {
        match *self {
            Bound::Below { tol } => value < tol,
            Bound::Within { lo, hi } => value >= lo && value <= hi,
            Bound::Near { target, tol } => (value - target).abs() <= tol,
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, bound: Bound) -> Self {
        Check {
            name: name.into(),
            value,
            passed: bound.holds(value),
            bound,
        }
    }

    pub fn below(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check::new(name, value, Bound::Below { tol })
    }

    pub fn near(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Check::new(name, value, Bound::Near { target, tol })
    }

    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Check::new(name, value, Bound::Within { lo, hi })
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Row {
    pub label: String,
    pub values: Vec<f64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            title: title.into(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(mut self, label: impl Into<String>, values: Vec<f64>) -> Self {
        self.rows.push(Row {
            label: label.into(),
            values,
        });
        self
    }
}

/// Mirror of [`SpectrumResult`] in plain numbers.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub n: usize,
    pub r: usize,
    pub goldstone_count: usize,
    pub unbroken_dim: usize,
    pub is_vacuum: bool,
    pub vacuum: Vec<[f64; 2]>,
    pub vacuum_norm: f64,
    pub boson_masses: Vec<f64>,
    pub higgs_masses: Vec<f64>,
    pub higgs_mass_squared: Vec<f64>,
    pub unbroken_basis: Vec<Vec<f64>>,
    pub broken_basis: Vec<Vec<f64>>,
    pub mass_form: Vec<Vec<f64>>,
}

pub fn complex_pairs(v: &CVec) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

impl SpectrumReport {
    pub fn from_result(spec: &SpectrumResult, r: usize) -> Self {
        let m = spec.mass_form.matrix();
        SpectrumReport {
            n: spec.vacuum.len(),
            r,
            goldstone_count: spec.d,
            unbroken_dim: spec.unbroken_basis.len(),
            is_vacuum: spec.is_vacuum,
            vacuum: complex_pairs(&spec.vacuum),
            vacuum_norm: spec.vacuum.norm(),
            boson_masses: spec.boson_masses.clone(),
            higgs_masses: spec.higgs_masses.clone(),
            higgs_mass_squared: spec.higgs_mass_squared.clone(),
            unbroken_basis: spec.unbroken_basis.iter().map(|x| x.coeffs().iter().copied().collect()).collect(),
            broken_basis: spec.broken_basis.iter().map(|x| x.coeffs().iter().copied().collect()).collect(),
            mass_form: (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect(),
        }
    }
}

/// Closed-form electroweak quantities next to their numerical counterparts.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ElectroweakReport {
    pub g: f64,
    pub gp: f64,
    pub mu: f64,
    pub lambda: f64,
    pub weinberg_angle: f64,
    pub elementary_charge: f64,
    pub m_w: f64,
    pub m_z: f64,
    pub m_gamma: f64,
    pub m_h: f64,
    /// Electric charges (in units of `e`) per multiplet.
    pub charges: BTreeMap<String, Vec<f64>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub summary: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub electroweak: Option<ElectroweakReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: Option<u64>) -> Self {
        Report {
            command: command.into(),
            seed,
            summary: Vec::new(),
            spectrum: None,
            electroweak: None,
            tables: Vec::new(),
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn check(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }
}

/// Pretty JSON with floats written at 17 significant digits.
struct FullPrecision<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident $(, $arg:ident : $ty:ty)*);* $(;)?) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl Formatter for FullPrecision<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    delegate! {
        begin_array;
        end_array;
        begin_array_value, first: bool;
        end_array_value;
        begin_object;
        end_object;
        begin_object_key, first: bool;
        begin_object_value;
        end_object_value;
    }
}

pub fn emit_report(report: &Report) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision(PrettyFormatter::with_indent(b"  ")));
    report.serialize(&mut ser).expect("reports contain only serialisable data");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

pub fn parse_report(text: &str) -> serde_json::Result<Report> {
    serde_json::from_str(text)
}

fn num(x: f64) -> String {
    format!("{x:.10e}")
}

fn bound_text(b: &Bound) -> String {
    match b {
        Bound::Below { tol } => format!("< {}", num(*tol)),
        Bound::Within { lo, hi } => format!("in [{lo}, {hi}]"),
        Bound::Near { target, tol } => format!("= {} +- {}", num(*target), num(*tol)),
    }
}

/// Human-readable rendering of a report.
pub fn render_table(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "== {} ==", report.command);
    if let Some(seed) = report.seed {
        let _ = writeln!(s, "seed: {seed}");
    }
    for line in &report.summary {
        let _ = writeln!(s, "{line}");
    }
    if let Some(sp) = &report.spectrum {
        let _ = writeln!(s, "\n-- spectrum --");
        let _ = writeln!(s, "n = {}, r = {}, d = {}, dim h = {}, vacuum: {}", sp.n, sp.r, sp.goldstone_count, sp.unbroken_dim, sp.is_vacuum);
        let _ = writeln!(s, "|v0| = {}", num(sp.vacuum_norm));
        for (i, m) in sp.boson_masses.iter().enumerate() {
            let _ = writeln!(s, "  gauge boson {i:<3} M = {}", num(*m));
        }
        for (i, m) in sp.higgs_masses.iter().enumerate() {
            let _ = writeln!(s, "  Higgs boson {i:<3} m = {}", num(*m));
        }
    }
    if let Some(ew) = &report.electroweak {
        let _ = writeln!(s, "\n-- electroweak (closed form) --");
        for (k, v) in [
            ("theta_W", ew.weinberg_angle),
            ("e", ew.elementary_charge),
            ("m_W", ew.m_w),
            ("m_Z", ew.m_z),
            ("m_gamma", ew.m_gamma),
            ("m_H", ew.m_h),
        ] {
            let _ = writeln!(s, "  {k:<8} {}", num(v));
        }
        for (name, q) in &ew.charges {
            let qs: Vec<String> = q.iter().map(|x| format!("{x:+.6}")).collect();
            let _ = writeln!(s, "  charges of {name}: {}", qs.join(", "));
        }
    }
    for t in &report.tables {
        let _ = writeln!(s, "\n-- {} --", t.title);
        let width = t.rows.iter().map(|r| r.label.len()).max().unwrap_or(0).max(5);
        let _ = write!(s, "{:width$}", "");
        for c in &t.columns {
            let _ = write!(s, "  {c:>17}");
        }
        let _ = writeln!(s);
        for r in &t.rows {
            let _ = write!(s, "{:width$}", r.label);
            for v in &r.values {
                let _ = write!(s, "  {:>17}", num(*v));
            }
            let _ = writeln!(s);
        }
    }
    let _ = writeln!(s, "\n-- checks --");
    for c in &report.checks {
        let _ = writeln!(
            s,
            "  [{}] {}: {} ({})",
            if c.passed { "pass" } else { "FAIL" },
            c.name,
            num(c.value),
            bound_text(&c.bound)
        );
    }
    let _ = writeln!(s, "\nresult: {}", if report.passed { "PASS" } else { "FAIL" });
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", Some(7));
        r.note("broken: d = 3");
        r.check(Check::below("tiny", 1e-17, 1e-12));
        r.check(Check::within("order", 1.9999999999999998, 1.9, 2.1));
        r.check(Check::near("sqrt2", std::f64::consts::SQRT_2, 2f64.sqrt(), 1e-12));
        r.tables.push(Table::new("t", &["a", "b"]).row("x", vec![0.1, -0.0]).row("y", vec![1.0 / 3.0, 5e300]));
        r
    }

    #[test]
    fn floats_carry_17_significant_digits() {
        let text = emit_report(&sample());
        assert!(text.contains("1.4142135623730951e0"), "{text}");
        assert!(text.contains("3.3333333333333331e-1"));
        assert!(text.contains("1.9999999999999998e0"));
    }

    #[test]
    fn round_trips_exactly() {
        let r = sample();
        assert_eq!(parse_report(&emit_report(&r)).unwrap(), r);
    }

    #[test]
    fn failing_check_fails_report() {
        let mut r = sample();
        assert!(r.passed);
        r.check(Check::below("big", 1.0, 1e-3));
        assert!(!r.passed);
        assert!(render_table(&r).contains("[FAIL] big"));
    }
}
