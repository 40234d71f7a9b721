//! Time loop of one benchmark run and grid-convergence studies.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::cases::{ExperimentCase, Metric, Reference};
use super::metrics::{eoc, error_against_reference, l1_error, MaxInTime};
use crate::boundary::BoundaryFn;
use crate::domain::ImplicitDomain;
use crate::error::{Error, Result};
use crate::grid::{sample_field, Field, VelocityField};
use crate::operator::StepOperator;
use crate::schemes2d::{SchemeFamily, SchemeSpec};
use crate::solver::{fast_sweep_solve, SweepPolicy};

/// Number of time steps as a function of `M`: `N = num M / den`, or fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepRule {
    Fixed(usize),
    Ratio { num: usize, den: usize },
}

impl StepRule {
    pub fn steps(&self, m: usize) -> Result<usize> {
        let n = match *self {
            StepRule::Fixed(n) => n,
            StepRule::Ratio { num, den } => {
                if (num * m) % den != 0 {
                    return Err(Error::InvalidArgument(format!(
                        "{self} gives no whole step count for M = {m}"
                    )));
                }
                num * m / den
            }
        };
        if n == 0 {
            return Err(Error::InvalidArgument(format!(
                "{self} gives zero steps for M = {m}"
            )));
        }
        Ok(n)
    }
}

impl fmt::Display for StepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StepRule::Fixed(n) => write!(f, "{n}"),
            StepRule::Ratio { num, den } => {
                if num != 1 {
                    write!(f, "{num}")?;
                }
                write!(f, "M")?;
                if den != 1 {
                    write!(f, "/{den}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for StepRule {
    type Err = Error;

    /// `200`, `M`, `5M/4`, `M/10`, `2M`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("step rule {s:?}; expected e.g. 200 or 5M/4"));
        let s = s.trim();
        let Some(pos) = s.find('M') else {
            return match s.parse() {
                Ok(0) | Err(_) => Err(bad()),
                Ok(n) => Ok(StepRule::Fixed(n)),
            };
        };
        let num = match &s[..pos] {
            "" => 1,
            t => t.parse().map_err(|_| bad())?,
        };
        let den = match &s[pos + 1..] {
            "" => 1,
            t => t
                .strip_prefix('/')
                .ok_or_else(bad)?
                .parse()
                .map_err(|_| bad())?,
        };
        if num == 0 || den == 0 {
            return Err(bad());
        }
        Ok(StepRule::Ratio { num, den })
    }
}

/// Outcome of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub case: String,
    pub scheme: String,
    pub kappa: String,
    pub m: usize,
    pub n: usize,
    /// Largest `max(|C|, |D|)` over solved nodes.
    pub max_courant: f64,
    /// Same, with cut rows scaled by `1 / (cut fraction)`.
    pub max_effective_courant: f64,
    pub error: f64,
    /// Order against the next coarser run of a study.
    pub eoc: Option<f64>,
    /// Largest sweep count of any step.
    pub sweeps: usize,
    /// Largest final residual of any step.
    pub residual: f64,
    pub converged: bool,
    pub measured_nodes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    pub policy: SweepPolicy,
    /// Keep every `k`-th level (and the last) in [`RunOutput::stored`].
    pub store_stride: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            policy: SweepPolicy::FixedSweeps(1),
            store_stride: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: ErrorReport,
    pub final_field: Field,
    /// `(t^n, U^n)` at the stored levels, starting with `n = 0`.
    pub stored: Vec<(f64, Field)>,
}

fn scheme_names(spec: &SchemeSpec) -> (String, String) {
    let fam = match spec.family {
        SchemeFamily::Ctu { theta } => format!("ctu({theta})"),
        f => f.name().to_string(),
    };
    let kappa = if spec.kappa_x == spec.kappa_y {
        spec.kappa_x.label()
    } else {
        format!("{}/{}", spec.kappa_x.label(), spec.kappa_y.label())
    };
    (fam, kappa)
}

/// Values prescribed on the boundary of an implicit domain: the exact
/// solution where known, otherwise the initial data.
fn domain_data(case: &ExperimentCase) -> BoundaryFn {
    match case.exact() {
        Some(f) => f.clone(),
        None => {
            let u0 = case.initial.clone();
            Arc::new(move |x, y, _| u0(x, y))
        }
    }
}

/// Runs `case` with `n` steps on the grid with `m` cells. Cases with a
/// reference solution report `error = NaN`; see [`convergence_study`].
pub fn run_experiment(
    case: &ExperimentCase,
    spec: &SchemeSpec,
    m: usize,
    n: usize,
    options: &RunOptions,
) -> Result<RunOutput> {
    case.validate()?;
    spec.validate()?;
    options.policy.validate()?;
    if spec.dim() != case.dim {
        return Err(Error::InvalidArgument(format!(
            "scheme {} does not match the dimension of case {}",
            spec.label(),
            case.name
        )));
    }
    if n == 0 || options.store_stride == Some(0) {
        return Err(Error::InvalidArgument(
            "step count and stride must be positive".into(),
        ));
    }
    let grid = case.grid(m)?;
    let velocity = {
        let v = case.velocity.clone();
        VelocityField::sample(&grid, move |x, y| v(x, y))?
    };
    let domain = match &case.domain {
        Some(phi) => {
            let phi = phi.clone();
            Some(ImplicitDomain::new(
                &grid,
                move |x, y| phi(x, y),
                domain_data(case),
            )?)
        }
        None => None,
    };
    let tau = case.final_time / n as f64;
    let op = StepOperator::new(spec, &velocity, tau, &case.boundary, domain.as_ref())?;
    let measured: Vec<bool> = (0..grid.len()).map(|q| op.is_measured(q)).collect();

    let mut u = {
        let u0 = case.initial.clone();
        sample_field(&grid, move |x, y| u0(x, y))?
    };
    let mut stored = Vec::new();
    if options.store_stride.is_some() {
        stored.push((0.0, u.clone()));
    }
    let mut acc = MaxInTime::default();
    let (mut sweeps, mut residual, mut converged) = (0, 0.0f64, true);
    for step in 1..=n {
        let (t_old, t_new) = ((step - 1) as f64 * tau, step as f64 * tau);
        let system = op.linear_step(&u, t_old, t_new)?;
        let out = fast_sweep_solve(&system, &u, options.policy)?;
        sweeps = sweeps.max(out.sweeps);
        residual = residual.max(out.residual);
        converged &= out.converged;
        u = out.solution;
        u.check_finite()?;
        if let (Metric::MaxInTime, Some(exact)) = (case.metric, case.exact()) {
            acc.push(l1_error(&u, |x, y| exact(x, y, t_new), |q| measured[q]));
        }
        if let Some(k) = options.store_stride {
            if step % k == 0 || step == n {
                stored.push((t_new, u.clone()));
            }
        }
    }
    let error = match (case.metric, case.exact()) {
        (Metric::MaxInTime, Some(_)) => acc.value,
        (Metric::FinalTime, Some(exact)) => {
            let t = case.final_time;
            l1_error(&u, |x, y| exact(x, y, t), |q| measured[q])
        }
        (_, None) => f64::NAN,
    };
    let (scheme, kappa) = scheme_names(spec);
    let report = ErrorReport {
        case: case.name.clone(),
        scheme,
        kappa,
        m,
        n,
        max_courant: op.max_courant(),
        max_effective_courant: op.max_effective_courant(),
        error,
        eoc: None,
        sweeps,
        residual,
        converged,
        measured_nodes: measured.iter().filter(|&&b| b).count(),
    };
    Ok(RunOutput {
        report,
        final_field: u,
        stored,
    })
}

/// Runs `case` over the ascending grid list `ms` with steps from `rule` and
/// fills in the orders. Reference cases first compute their reference
/// solution with the same scheme and rule.
pub fn convergence_study(
    case: &ExperimentCase,
    spec: &SchemeSpec,
    ms: &[usize],
    rule: StepRule,
    policy: SweepPolicy,
) -> Result<Vec<ErrorReport>> {
    if ms.is_empty() || ms.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!(
            "grid list {ms:?} must be non-empty and ascending"
        )));
    }
    let options = RunOptions {
        policy,
        store_stride: None,
    };
    let reference = match case.reference {
        Reference::Refined { m_ref } => {
            if let Some(m) = ms.iter().find(|&&m| m_ref % m != 0) {
                return Err(Error::InvalidArgument(format!(
                    "reference resolution {m_ref} is not a multiple of {m}"
                )));
            }
            Some(run_experiment(case, spec, m_ref, rule.steps(m_ref)?, &options)?.final_field)
        }
        Reference::Exact(_) => None,
    };
    let mut reports: Vec<ErrorReport> = Vec::with_capacity(ms.len());
    for &m in ms {
        let out = run_experiment(case, spec, m, rule.steps(m)?, &options)?;
        let mut report = out.report;
        if let Some(r) = &reference {
            report.error = error_against_reference(&out.final_field, r)?;
        }
        if let Some(prev) = reports.last() {
            if prev.m * 2 == m {
                report.eoc = eoc(prev.error, report.error).ok();
            }
        }
        reports.push(report);
    }
    Ok(reports)
}
