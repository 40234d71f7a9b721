//! Benchmark cases: velocity, initial data, boundary data and the exact
//! solution or reference recipe.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::zalesak::zalesak_signed_distance;
use crate::boundary::{Boundary, BoundaryFn, EdgeCondition};
use crate::error::{Error, Result};
use crate::grid::{Dim, Grid};

pub type ScalarFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(f64, f64) -> (f64, f64) + Send + Sync>;

/// How errors of a case are measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// `h^d max_n sum |U^n - u(t^n)|` over measured nodes.
    MaxInTime,
    /// `h^d sum |U^N - u(T)|` over all nodes, final time only.
    FinalTime,
}

#[derive(Clone)]
pub enum Reference {
    Exact(BoundaryFn),
    /// Numerical solution on a grid with `m_ref` cells, compared at the
    /// final time on the coarse nodes.
    Refined {
        m_ref: usize,
    },
}

#[derive(Clone)]
pub struct ExperimentCase {
    pub name: String,
    pub dim: Dim,
    pub bounds: (f64, f64),
    pub velocity: VectorFn,
    pub initial: ScalarFn,
    pub reference: Reference,
    /// Level-set function of an implicit computational domain `{phi < 0}`.
    pub domain: Option<ScalarFn>,
    pub boundary: Boundary,
    pub final_time: f64,
    pub metric: Metric,
}

impl fmt::Debug for ExperimentCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExperimentCase")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("final_time", &self.final_time)
            .field("domain", &self.domain.is_some())
            .field("metric", &self.metric)
            .finish()
    }
}

impl ExperimentCase {
    pub fn grid(&self, m: usize) -> Result<Grid> {
        match self.dim {
            Dim::One => Grid::line(self.bounds.0, self.bounds.1, m),
            Dim::Two => Grid::square(self.bounds.0, self.bounds.1, m),
        }
    }

    pub fn exact(&self) -> Option<&BoundaryFn> {
        match &self.reference {
            Reference::Exact(f) => Some(f),
            Reference::Refined { .. } => None,
        }
    }

    /// Copy of a reference-solution case with another reference grid.
    pub fn with_reference_grid(mut self, m_ref: usize) -> Result<Self> {
        match self.reference {
            Reference::Refined { .. } => {
                self.reference = Reference::Refined { m_ref };
                Ok(self)
            }
            Reference::Exact(_) => Err(Error::InvalidArgument(format!(
                "case {} has an exact solution",
                self.name
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.final_time > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "final time {} must be positive",
                self.final_time
            )));
        }
        if self.domain.is_some() && self.dim != Dim::Two {
            return Err(Error::InvalidArgument(
                "implicit domains need a 2D case".into(),
            ));
        }
        Ok(())
    }
}

pub const BUILTIN_CASES: [&str; 8] = [
    "rotation_euclid",
    "rotation_maxdist",
    "exp_velocity",
    "zalesak",
    "vortex",
    "quadratic",
    "cubic",
    "gauss1d",
];

pub fn builtin_case(name: &str) -> Result<ExperimentCase> {
    match name {
        "rotation_euclid" => Ok(rotation_case(name, |x, y| x.hypot(y - 0.5), true)),
        "rotation_maxdist" => Ok(rotation_case(
            name,
            |x, y| (x + 0.5).abs().max(y.abs()),
            true,
        )),
        "zalesak" => {
            let mut c = rotation_case(name, zalesak_signed_distance, false);
            c.metric = Metric::FinalTime;
            Ok(c)
        }
        "exp_velocity" => Ok(exp_velocity_case()),
        "vortex" => Ok(vortex_case()),
        "quadratic" => Ok(polynomial_case(
            name,
            |x, y| 0.3 + 0.7 * x - 0.4 * y + 0.9 * x * x - 0.6 * x * y + 0.25 * y * y,
            (0.8, -0.55),
        )),
        "cubic" => Ok(polynomial_case(
            name,
            |x, y| {
                0.2 - 0.5 * x + 0.3 * y + 0.4 * x * x * x - 0.7 * x * x * y
                    + 0.6 * x * y * y
                    + 0.35 * y * y * y
            },
            (0.8, -0.55),
        )),
        "gauss1d" => Ok(gauss1d_case()),
        _ => Err(Error::UnknownCase(format!(
            "{name} (known: {})",
            BUILTIN_CASES.join(", ")
        ))),
    }
}

/// `u(x, y, t)` rotated back by `2 pi t` around the origin.
fn rotated(u0: ScalarFn) -> BoundaryFn {
    Arc::new(move |x, y, t| {
        let (s, c) = (2.0 * PI * t).sin_cos();
        u0(x * c + y * s, y * c - x * s)
    })
}

fn rotation_case<F>(name: &str, u0: F, circle: bool) -> ExperimentCase
where
    F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
{
    let u0: ScalarFn = Arc::new(u0);
    let exact = rotated(u0.clone());
    let domain: Option<ScalarFn> = if circle {
        Some(Arc::new(|x: f64, y: f64| x.hypot(y) - 1.0))
    } else {
        None
    };
    ExperimentCase {
        name: name.into(),
        dim: Dim::Two,
        bounds: (-1.0, 1.0),
        velocity: Arc::new(|x, y| (-2.0 * PI * y, 2.0 * PI * x)),
        initial: u0,
        reference: Reference::Exact(exact.clone()),
        domain,
        boundary: Boundary::uniform(EdgeCondition::Exact(exact)),
        final_time: 1.0,
        metric: Metric::MaxInTime,
    }
}

/// Distance to `(-1, -1)`, carried along the diagonal by a speed constant on
/// each characteristic `y - x = const`, with the initial values kept on the
/// inflow edges `x = -1` and `y = -1`.
pub fn exp_velocity_exact(x: f64, y: f64, t: f64) -> f64 {
    let s = (t * (2.0 * (y - x)).exp()).min(x + 1.0).min(y + 1.0);
    (x - s + 1.0).hypot(y - s + 1.0)
}

fn exp_velocity_case() -> ExperimentCase {
    let u0: ScalarFn = Arc::new(|x: f64, y: f64| (x + 1.0).hypot(y + 1.0));
    let fixed = u0.clone();
    let inflow = EdgeCondition::dirichlet(move |x, y, _| fixed(x, y));
    ExperimentCase {
        name: "exp_velocity".into(),
        dim: Dim::Two,
        bounds: (-1.0, 1.0),
        velocity: Arc::new(|x, y| {
            let v = (2.0 * (y - x)).exp();
            (v, v)
        }),
        initial: u0,
        reference: Reference::Exact(Arc::new(exp_velocity_exact)),
        domain: None,
        boundary: Boundary {
            west: inflow.clone(),
            east: EdgeCondition::Extrapolate,
            south: inflow,
            north: EdgeCondition::Extrapolate,
        },
        final_time: 0.4,
        metric: Metric::MaxInTime,
    }
}

pub fn vortex_velocity(x: f64, y: f64) -> (f64, f64) {
    let (a, b) = (0.5 * PI * (x + 1.0), 0.5 * PI * (y + 1.0));
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    (-4.0 * sa * sa * sb * cb, 4.0 * sb * sb * sa * ca)
}

fn vortex_case() -> ExperimentCase {
    let u0: ScalarFn = Arc::new(|x: f64, y: f64| x.hypot(y - 0.5) - 0.3);
    let fixed = u0.clone();
    ExperimentCase {
        name: "vortex".into(),
        dim: Dim::Two,
        bounds: (-1.0, 1.0),
        velocity: Arc::new(vortex_velocity),
        initial: u0,
        reference: Reference::Refined { m_ref: 640 },
        domain: None,
        boundary: Boundary::uniform(EdgeCondition::dirichlet(move |x, y, _| fixed(x, y))),
        final_time: 2.5,
        metric: Metric::FinalTime,
    }
}

/// Constant velocity `(v, w)` transporting `u0`; every edge takes exact
/// values.
pub fn polynomial_case<F>(name: &str, u0: F, velocity: (f64, f64)) -> ExperimentCase
where
    F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
{
    let u0: ScalarFn = Arc::new(u0);
    let f = u0.clone();
    let (v, w) = velocity;
    let exact: BoundaryFn = Arc::new(move |x, y, t| f(x - v * t, y - w * t));
    ExperimentCase {
        name: name.into(),
        dim: Dim::Two,
        bounds: (-1.0, 1.0),
        velocity: Arc::new(move |_, _| (v, w)),
        initial: u0,
        reference: Reference::Exact(exact.clone()),
        domain: None,
        boundary: Boundary::exact(move |x, y, t| exact(x, y, t)),
        final_time: 0.5,
        metric: Metric::MaxInTime,
    }
}

fn gauss1d_case() -> ExperimentCase {
    let bump = |x: f64| (-20.0 * (x + 0.4) * (x + 0.4)).exp();
    let exact: BoundaryFn = Arc::new(move |x, _, t| bump(x - t));
    ExperimentCase {
        name: "gauss1d".into(),
        dim: Dim::One,
        bounds: (-1.0, 1.0),
        velocity: Arc::new(|_, _| (1.0, 0.0)),
        initial: Arc::new(move |x, _| bump(x)),
        reference: Reference::Exact(exact.clone()),
        domain: None,
        boundary: Boundary::exact(move |x, y, t| exact(x, y, t)),
        final_time: 0.8,
        metric: Metric::MaxInTime,
    }
}
