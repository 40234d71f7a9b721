//! Flat `key=value` run configuration.
//!
//! ```text
//! # rotation on the circle, smooth data
//! case=rotation_euclid
//! scheme=si2d
//! kappa=k3
//! M=40,80,160
//! N=5M/4
//! ```

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::experiments::cases::{builtin_case, Reference, BUILTIN_CASES};
use crate::experiments::runner::StepRule;
use crate::schemes1d::KappaChoice;
use crate::schemes2d::{parse_family, SchemeFamily, SchemeSpec};
use crate::solver::SweepPolicy;

pub const KEYS: [&str; 11] = [
    "case",
    "scheme",
    "kappa",
    "theta",
    "M",
    "N",
    "sweeps",
    "tol",
    "m_ref",
    "output",
    "dump_stride",
];

/// Text printed with configuration errors.
pub const SCHEMA: &str = "\
one key=value per line, # starts a comment
  case=        rotation_euclid | rotation_maxdist | exp_velocity | zalesak | vortex
               | quadratic | cubic | gauss1d                                (required)
  scheme=      si1d | si2d | fi1d | ctu                                      (required)
  kappa=       kp | km | k0 | k3 | im3rd | number in [-1, 1]          (default k3)
  theta=       CTU blend in [0, 1], ctu only                          (default 1)
  M=           ascending grid list, e.g. 40,80,160                           (required)
  N=           steps: integer or rule like 5M/4, M/10                        (required)
  sweeps=      sweeps per step, or the sweep cap when tol is set       (default 1)
  tol=         residual tolerance of each solve
  m_ref=       reference grid of reference-solution cases             (default 640)
  output=      output directory (default: stdout)
  dump_stride= dump every k-th time level";

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub case: String,
    pub family: SchemeFamily,
    pub kappa: KappaChoice,
    pub ms: Vec<usize>,
    pub steps: StepRule,
    pub sweeps: SweepPolicy,
    pub m_ref: Option<usize>,
    pub output: Option<PathBuf>,
    pub dump_stride: Option<usize>,
}

impl RunConfig {
    pub fn scheme(&self) -> Result<SchemeSpec> {
        SchemeSpec::new(self.family, self.kappa)
    }

    /// Re-serializes in key order; parsing the result gives an equal config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "case={}", self.case);
        let _ = writeln!(s, "scheme={}", self.family.name());
        let _ = writeln!(s, "kappa={}", self.kappa.label());
        if let SchemeFamily::Ctu { theta } = self.family {
            let _ = writeln!(s, "theta={theta:?}");
        }
        let ms: Vec<String> = self.ms.iter().map(|m| m.to_string()).collect();
        let _ = writeln!(s, "M={}", ms.join(","));
        let _ = writeln!(s, "N={}", self.steps);
        match self.sweeps {
            SweepPolicy::FixedSweeps(n) => {
                let _ = writeln!(s, "sweeps={n}");
            }
            SweepPolicy::Tolerance { tol, max_sweeps } => {
                let _ = writeln!(s, "sweeps={max_sweeps}");
                let _ = writeln!(s, "tol={tol:?}");
            }
        }
        if let Some(m) = self.m_ref {
            let _ = writeln!(s, "m_ref={m}");
        }
        if let Some(p) = &self.output {
            let _ = writeln!(s, "output={}", p.display());
        }
        if let Some(k) = self.dump_stride {
            let _ = writeln!(s, "dump_stride={k}");
        }
        s
    }
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| config_err(line, format!("{key}: malformed number {v:?}")))
}

fn positive(line: usize, key: &str, v: &str) -> Result<usize> {
    match number::<usize>(line, key, v)? {
        0 => Err(config_err(line, format!("{key} must be positive"))),
        n => Ok(n),
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut seen: Vec<(&str, usize, &str)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| config_err(line, format!("expected key=value, got {content:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let key = KEYS.iter().find(|&&k| k == key).ok_or_else(|| {
            config_err(
                line,
                format!("unknown key {key:?}; known: {}", KEYS.join(", ")),
            )
        })?;
        if let Some(&(_, first, _)) = seen.iter().find(|(k2, _, _)| k2 == key) {
            return Err(config_err(line, format!("{key} repeats line {first}")));
        }
        seen.push((key, line, value));
    }
    let get = |key: &str| {
        seen.iter()
            .find(|(k, _, _)| *k == key)
            .map(|&(_, l, v)| (l, v))
    };
    let last_line = text.lines().count().max(1);
    let required =
        |key: &str| get(key).ok_or_else(|| config_err(last_line, format!("missing key {key}")));

    let (l, case) = required("case")?;
    let parsed_case = builtin_case(case).map_err(|_| {
        config_err(
            l,
            format!("unknown case {case:?}; known: {}", BUILTIN_CASES.join(", ")),
        )
    })?;

    let theta = match get("theta") {
        Some((l, v)) => Some((l, number::<f64>(l, "theta", v)?)),
        None => None,
    };
    let (l, scheme) = required("scheme")?;
    let family = parse_family(scheme, theta.map(|t| t.1)).ok_or_else(|| match theta {
        Some((tl, _)) if ["si1d", "si2d", "fi1d"].contains(&scheme) => config_err(
            tl,
            format!("theta applies to scheme=ctu only, not {scheme}"),
        ),
        _ => config_err(
            l,
            format!("unknown scheme {scheme:?}; known: si1d, si2d, fi1d, ctu"),
        ),
    })?;
    if let (SchemeFamily::Ctu { theta }, Some((tl, _))) = (family, theta) {
        if !(0.0..=1.0).contains(&theta) {
            return Err(config_err(tl, format!("theta = {theta} is outside [0, 1]")));
        }
    }
    if family.dim() != parsed_case.dim {
        return Err(config_err(
            l,
            format!("scheme {scheme} does not fit the dimension of case {case}"),
        ));
    }

    let kappa = match get("kappa") {
        Some((l, v)) => KappaChoice::parse(v).ok_or_else(|| {
            config_err(
                l,
                format!(
                    "unknown kappa {v:?}; known: kp, km, k0, k3, im3rd, or a number in [-1, 1]"
                ),
            )
        })?,
        None => KappaChoice::ThirdOrderSemiImplicit,
    };

    let (l, m_text) = required("M")?;
    let ms = m_text
        .split(',')
        .map(|v| positive(l, "M", v.trim()))
        .collect::<Result<Vec<_>>>()?;
    if ms.windows(2).any(|w| w[0] >= w[1]) {
        return Err(config_err(l, "M must be strictly ascending"));
    }

    let (l, n_text) = required("N")?;
    let steps: StepRule = n_text
        .parse()
        .map_err(|e: Error| config_err(l, e.to_string()))?;
    for &m in &ms {
        steps.steps(m).map_err(|e| config_err(l, e.to_string()))?;
    }

    let max_sweeps = match get("sweeps") {
        Some((l, v)) => positive(l, "sweeps", v)?,
        None => 1,
    };
    let sweeps = match get("tol") {
        Some((l, v)) => {
            let tol: f64 = number(l, "tol", v)?;
            if !(tol > 0.0) {
                return Err(config_err(l, "tol must be positive"));
            }
            SweepPolicy::Tolerance { tol, max_sweeps }
        }
        None => SweepPolicy::FixedSweeps(max_sweeps),
    };

    let m_ref = match get("m_ref") {
        Some((l, v)) => {
            if !matches!(parsed_case.reference, Reference::Refined { .. }) {
                return Err(config_err(
                    l,
                    format!("case {case} has an exact solution; m_ref does not apply"),
                ));
            }
            let m = positive(l, "m_ref", v)?;
            if let Some(bad) = ms.iter().find(|&&c| m % c != 0) {
                return Err(config_err(
                    l,
                    format!("m_ref = {m} is not a multiple of M = {bad}"),
                ));
            }
            Some(m)
        }
        None => None,
    };
    let output = get("output").map(|(_, v)| PathBuf::from(v));
    let dump_stride = match get("dump_stride") {
        Some((l, v)) => Some(positive(l, "dump_stride", v)?),
        None => None,
    };
    Ok(RunConfig {
        case: case.to_string(),
        family,
        kappa,
        ms,
        steps,
        sweeps,
        m_ref,
        output,
        dump_stride,
    })
}
