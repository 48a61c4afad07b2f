//! Rendering study reports as a table, CSV or JSON.

use std::fmt::Write as _;

use crate::analysis::StabilityCase;
use crate::study::{Norm, OutputFormat, StudyReport};

/// Scientific notation with 6 significant digits and a two-digit signed
/// exponent, e.g. `1.88664e-03`.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.5e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn format_co(x: f64) -> String {
    format!("{x:.3}")
}

fn format_h(n: usize) -> String {
    format!("1/{n}")
}

/// Serializes `report` in the requested format.
pub fn emit_report(report: &StudyReport, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Table => emit_table(report).into_bytes(),
        OutputFormat::Csv => emit_csv(report).into_bytes(),
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("report is always serializable");
            out.push(b'\n');
            out
        }
    }
}

/// Parses a JSON report produced by [`emit_report`].
pub fn parse_report(bytes: &[u8]) -> serde_json::Result<StudyReport> {
    serde_json::from_slice(bytes)
}

fn emit_csv(report: &StudyReport) -> String {
    let mut out = String::from("h,err_l2,co_l2,err_c,co_c\n");
    for (j, row) in report.rows.iter().enumerate() {
        let co = |v: &[f64]| if j == 0 { String::new() } else { format_co(v[j - 1]) };
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_h(row.n),
            format_sci(row.err_l2),
            co(&report.co_l2),
            format_sci(row.err_c),
            co(&report.co_c),
        );
    }
    out
}

fn emit_table(report: &StudyReport) -> String {
    let cfg = &report.config;
    let show_l2 = cfg.norms.contains(&Norm::L2);
    let show_c = cfg.norms.contains(&Norm::C);
    let mut out = String::new();

    let _ = writeln!(
        out,
        "nu = {}, alpha = {}, beta = {}, gamma = {}, T = {}{}",
        cfg.nu,
        cfg.alpha,
        cfg.beta,
        cfg.gamma,
        cfg.horizon,
        if cfg.equal_steps { ", h = tau" } else { "" }
    );

    let mut header = format!("{:<12}", "h");
    if !cfg.equal_steps {
        let _ = write!(header, "{:<12}", "tau");
    }
    if show_l2 {
        let _ = write!(header, "{:<20}{:<16}", "max_n |[z^n]|_0", "CO in |[.]|_0");
    }
    if show_c {
        let _ = write!(header, "{:<16}{:<16}", "||z||_C", "CO in ||.||_C");
    }
    let rule = "-".repeat(header.trim_end().len());
    let _ = writeln!(out, "{rule}\n{}\n{rule}", header.trim_end());

    for (j, row) in report.rows.iter().enumerate() {
        let co = |v: &[f64]| if j == 0 { String::new() } else { format_co(v[j - 1]) };
        let mut line = format!("{:<12}", format_h(row.n));
        if !cfg.equal_steps {
            let _ = write!(line, "{:<12}", format_sci(row.tau));
        }
        if show_l2 {
            let _ = write!(line, "{:<20}{:<16}", format_sci(row.err_l2), co(&report.co_l2));
        }
        if show_c {
            let _ = write!(line, "{:<16}{:<16}", format_sci(row.err_c), co(&report.co_c));
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let _ = writeln!(out, "{rule}");

    let st = &report.stability;
    let case = match st.case {
        StabilityCase::Direct => "alpha = beta != 1, gamma <= 0",
        StabilityCase::Case1 => "|alpha| < 1, |beta| < 1, gamma <= 0",
        StabilityCase::Case2 => "|alpha| > 1, |beta| > 1, alpha*beta*gamma <= 0",
        StabilityCase::NoGuarantee => "no stability guarantee",
    };
    let _ = write!(out, "stability: {:?} ({case})", st.case);
    if let (Some(d), Some(a1), Some(g1)) = (st.delta, st.alpha1, st.gamma1) {
        let _ = write!(out, "; delta = {d:.6}, alpha1 = beta1 = {a1:.6}, gamma1 = {g1:.6}");
    }
    out.push('\n');

    if !report.warnings.is_empty() {
        out.push_str("warnings:\n");
        for w in &report.warnings {
            let _ = writeln!(out, "  - {w}");
        }
    }
    out
}
