//! Rendering of distance reports as CSV, JSON and text tables.

use std::fmt::Write as _;

use qdefinetti::scalar::format_f64;
use qdefinetti::{DistanceReport, Mode, Scalar};
use serde_json::{json, Value};

pub const CSV_HEADER: &str = "n,k,n1,q,distance,upper,lower,dist_over_qn";

fn float_field<S: Scalar>(x: &S) -> String {
    format_f64(x.to_f64())
}

fn csv_fields<S: Scalar>(r: &DistanceReport<S>, q_label: &str) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.n,
        r.k,
        r.n1,
        q_label,
        float_field(&r.distance),
        float_field(&r.upper),
        r.lower.as_ref().map(float_field).unwrap_or_default(),
        float_field(&r.dist_over_qn()),
    )
}

/// CSV rows for every report, followed by one `VIOLATION` row per report
/// outside its bounds. Returns the text and whether every report passed.
pub fn render_csv<S: Scalar>(reports: &[DistanceReport<S>], q_label: &str) -> (String, bool) {
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for r in reports {
        writeln!(out, "{}", csv_fields(r, q_label)).unwrap();
    }
    let mut all_pass = true;
    for r in reports.iter().filter(|r| !r.passes()) {
        all_pass = false;
        writeln!(out, "VIOLATION,{}", csv_fields(r, q_label)).unwrap();
    }
    (out, all_pass)
}

/// Exact values as `"p/r"` strings, floats as JSON numbers.
pub fn scalar_json<S: Scalar>(x: &S) -> Value {
    match S::MODE {
        Mode::Exact => Value::String(x.to_string()),
        Mode::Float => json!(x.to_f64()),
    }
}

pub fn report_json<S: Scalar>(r: &DistanceReport<S>, q_label: &str) -> Value {
    json!({
        "n": r.n,
        "k": r.k,
        "n1": r.n1,
        "q": q_label,
        "mode": r.mode().to_string(),
        "distance": scalar_json(&r.distance),
        "upper": scalar_json(&r.upper),
        "lower": r.lower.as_ref().map(scalar_json),
        "dist_over_qn": scalar_json(&r.dist_over_qn()),
        "upper_ok": r.upper_ok(),
        "lower_ok": r.lower_ok(),
        "pass": r.passes(),
    })
}

pub fn render_json<S: Scalar>(reports: &[DistanceReport<S>], q_label: &str) -> String {
    let rows: Vec<Value> = reports.iter().map(|r| report_json(r, q_label)).collect();
    serde_json::to_string_pretty(&rows).expect("values serialize") + "\n"
}

fn cell<S: Scalar>(x: &S) -> String {
    match S::MODE {
        Mode::Exact => format!("{x} (~{})", float_field(x)),
        Mode::Float => float_field(x),
    }
}

pub fn render_table<S: Scalar>(reports: &[DistanceReport<S>]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:>4} {:>3} {:>4}  {:>24}  {:>24}  {:>24}  check",
        "n", "k", "n1", "distance", "upper", "lower"
    )
    .unwrap();
    for r in reports {
        writeln!(
            out,
            "{:>4} {:>3} {:>4}  {:>24}  {:>24}  {:>24}  {}",
            r.n,
            r.k,
            r.n1,
            float_field(&r.distance),
            float_field(&r.upper),
            r.lower
                .as_ref()
                .map(float_field)
                .unwrap_or_else(|| "-".into()),
            if r.passes() { "PASS" } else { "FAIL" }
        )
        .unwrap();
    }
    out
}

/// Multi-line description of a single report.
pub fn render_report<S: Scalar>(r: &DistanceReport<S>, q_label: &str) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "q = {q_label}, n = {}, n1 = {}, k = {} ({})",
        r.n,
        r.n1,
        r.k,
        r.mode()
    )
    .unwrap();
    writeln!(out, "D            = {}", cell(&r.distance)).unwrap();
    writeln!(out, "c_k q^n      = {}", cell(&r.upper)).unwrap();
    match &r.lower {
        Some(l) => writeln!(out, "c~_k q^n     = {}", cell(l)).unwrap(),
        None => writeln!(out, "c~_k q^n     = - (needs n1 >= k >= 1)").unwrap(),
    }
    let flag = |ok: bool| if ok { "PASS" } else { "FAIL" };
    writeln!(out, "upper bound  : {}", flag(r.upper_ok())).unwrap();
    if r.lower.is_some() {
        writeln!(out, "lower bound  : {}", flag(r.lower_ok())).unwrap();
    }
    writeln!(out, "{}", flag(r.passes())).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qdefinetti::{distance_report, QParam, Rational};

    fn report(distance: Rational) -> DistanceReport<Rational> {
        let q = QParam::parse("1/2").unwrap();
        DistanceReport {
            n: 2,
            k: 1,
            n1: 1,
            q,
            distance,
            upper: Rational::ratio(1, 1),
            lower: Some(Rational::ratio(1, 8)),
        }
    }

    #[test]
    fn csv_layout() {
        let (csv, ok) = render_csv(&[report(Rational::ratio(1, 3))], "1/2");
        assert!(ok);
        assert_eq!(
            csv,
            "n,k,n1,q,distance,upper,lower,dist_over_qn\n\
             2,1,1,1/2,3.3333333333333331e-1,1.0000000000000000e0,1.2500000000000000e-1,1.3333333333333333e0\n"
        );
    }

    #[test]
    fn violations_get_their_own_row() {
        let (csv, ok) = render_csv(
            &[report(Rational::ratio(1, 3)), report(Rational::ratio(2, 1))],
            "1/2",
        );
        assert!(!ok);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("VIOLATION,2,1,1,1/2,2.0000000000000000e0,"));
    }

    #[test]
    fn lower_field_empty_when_absent() {
        let q = QParam::<Rational>::parse("1/2").unwrap();
        let r = distance_report(6, 0, 3, &q).unwrap();
        let (csv, _) = render_csv(&[r], "1/2");
        let row = csv.lines().nth(1).unwrap();
        assert_eq!(row.split(',').nth(6), Some(""));
        assert!(row.starts_with("6,3,0,1/2,0.0000000000000000e0,"));
    }

    #[test]
    fn json_uses_exact_strings() {
        let v = report_json(&report(Rational::ratio(1, 3)), "1/2");
        assert_eq!(v["distance"], "1/3");
        assert_eq!(v["lower"], "1/8");
        assert_eq!(v["mode"], "exact");
        let qf = QParam::<f64>::parse("1/2").unwrap();
        let r = distance_report(2, 1, 1, &qf).unwrap();
        let v = report_json(&r, "1/2");
        assert!(v["distance"].is_number());
    }
}
