//! CSV emission. Column order is fixed; floats use six significant digits.

use std::fmt::Write as _;

use crate::experiments::runner::ErrorReport;
use crate::stability::StabilityReport;

pub const ERROR_HEADER: &str = "M,case,scheme,kappa,N,max_courant,error,eoc,sweeps,residual";
pub const STABILITY_HEADER: &str = "s,C,D,max_abs_s,stable";

fn sci(v: f64) -> String {
    format!("{v:.5e}")
}

/// One row per report, in the given order. A missing EOC is an empty field.
pub fn emit_table(reports: &[ErrorReport]) -> String {
    let mut out = String::from(ERROR_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.m,
            r.case,
            r.scheme,
            r.kappa,
            r.n,
            sci(r.max_courant),
            sci(r.error),
            r.eoc.map(sci).unwrap_or_default(),
            r.sweeps,
            sci(r.residual),
        );
    }
    out
}

/// One stability sample along a Courant path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityRow {
    pub s: f64,
    pub c: f64,
    pub d: f64,
    pub report: StabilityReport,
}

pub fn emit_stability(rows: &[StabilityRow]) -> String {
    let mut out = String::from(STABILITY_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            sci(r.s),
            sci(r.c),
            sci(r.d),
            sci(r.report.max_abs_s),
            r.report.stable
        );
    }
    out
}
