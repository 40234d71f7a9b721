//! Computational domains given implicitly as `{phi < 0}` on the background
//! grid, and the cut-cell substitutions used next to their boundary.
//!
//! For a crossing between an inside node `x_i` and an outside neighbour
//! `x_{i+1}` the boundary point is `x_{i+gamma} = gamma x_i + (1 - gamma) x_{i+1}`,
//! so `gamma` is the fraction of the cell measured from the outside node.

use crate::boundary::BoundaryFn;
use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::stencil::{Offset, StencilRow};

/// Crossings are kept at least this fraction of `h` away from both nodes.
pub const GAMMA_MIN: f64 = 1e-6;

#[derive(Clone)]
pub struct ImplicitDomain {
    phi: Field,
    analytic: Option<std::sync::Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>>,
    dirichlet: BoundaryFn,
}

impl std::fmt::Debug for ImplicitDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ImplicitDomain")
            .field("inside_nodes", &self.inside_count())
            .field("analytic", &self.analytic.is_some())
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeClass {
    Outside,
    InteriorFull,
    NearBoundary,
}

impl ImplicitDomain {
    /// Samples `phi` on the grid. `dirichlet` gives `u^D(x, y, t)` on the
    /// boundary of the domain.
    pub fn new<P>(grid: &Grid, phi: P, dirichlet: BoundaryFn) -> Result<Self>
    where
        P: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        let values = crate::grid::sample_field(grid, &phi)?;
        let domain = Self {
            phi: values,
            analytic: Some(std::sync::Arc::new(phi)),
            dirichlet,
        };
        if domain.inside_count() == 0 {
            return Err(Error::InvalidArgument(
                "implicit domain {phi < 0} has no grid node".into(),
            ));
        }
        Ok(domain)
    }

    pub fn phi(&self) -> &Field {
        &self.phi
    }

    pub fn phi_at(&self, node: usize) -> f64 {
        self.phi.values()[node]
    }

    pub fn dirichlet(&self) -> &BoundaryFn {
        &self.dirichlet
    }

    pub fn is_inside(&self, node: usize) -> bool {
        self.phi_at(node) < 0.0
    }

    /// Nodes whose values may be referenced by rows: `phi <= 0`.
    pub fn is_available(&self, node: usize) -> bool {
        self.phi_at(node) <= 0.0
    }

    pub fn inside_count(&self) -> usize {
        self.phi.values().iter().filter(|&&p| p < 0.0).count()
    }

    /// `gamma` of every crossing between an inside node and an outside axis
    /// neighbour, as `(inside node, outside node, gamma)`.
    pub fn crossings(&self) -> Vec<(usize, usize, f64)> {
        let grid = self.phi.grid();
        let phi = self.phi.values();
        let mut out = Vec::new();
        for p in 0..grid.len() {
            if phi[p] >= 0.0 {
                continue;
            }
            let (i, j) = grid.coords(p);
            for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                if let Some(q) = grid.checked_index(i as isize + di, j as isize + dj) {
                    if phi[q] > 0.0 {
                        let gamma = phi[q] / (phi[q] - phi[p]);
                        out.push((p, q, gamma));
                    }
                }
            }
        }
        out
    }

    /// Smallest cut fraction `1 - gamma` over all crossings.
    pub fn min_cut_fraction(&self) -> Option<f64> {
        self.crossings()
            .into_iter()
            .map(|(_, _, g)| cut_fraction(g))
            .min_by(f64::total_cmp)
    }
}

/// Classifies node `(i, j)` against the offsets a row touches. Offsets
/// leaving the grid are ignored; they are handled by the edge conditions.
pub fn classify_node<I>(grid: &Grid, phi: &[f64], i: usize, j: usize, footprint: I) -> NodeClass
where
    I: IntoIterator<Item = Offset>,
{
    if phi[grid.index(i, j)] >= 0.0 {
        return NodeClass::Outside;
    }
    let blocked = footprint.into_iter().any(|o| {
        grid.checked_index(i as isize + o.di as isize, j as isize + o.dj as isize)
            .is_some_and(|q| phi[q] > 0.0)
    });
    if blocked {
        NodeClass::NearBoundary
    } else {
        NodeClass::InteriorFull
    }
}

/// `gamma = phi_out / (phi_out - phi_in)`, clamped to
/// `[GAMMA_MIN, 1 - GAMMA_MIN]`.
pub fn boundary_gamma(phi_in: f64, phi_out: f64) -> Result<f64> {
    if !(phi_in < 0.0 && phi_out > 0.0) {
        return Err(Error::NoSignChange { phi_in, phi_out });
    }
    let g = phi_out / (phi_out - phi_in);
    Ok(g.clamp(GAMMA_MIN, 1.0 - GAMMA_MIN))
}

/// Fraction of the cell between the inside node and the crossing.
pub fn cut_fraction(gamma: f64) -> f64 {
    1.0 - gamma
}

/// Replaces the implicit reference to the outside node at `offset` by
/// `U_out = (u^D - gamma U_ij) / (1 - gamma)`.
pub fn apply_inflow_substitution(
    row: &mut StencilRow,
    offset: Offset,
    gamma: f64,
    u_d: f64,
) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidGamma(gamma));
    }
    let a = row.implicit.take(offset);
    row.implicit.add(Offset::ZERO, -a * gamma / (1.0 - gamma));
    row.rhs_extra += -a * u_d / (1.0 - gamma);
    Ok(())
}

/// Ghost value `U_out = 2 U_ij - U_back`, or `U_ij` when the node behind is
/// unavailable.
pub fn outflow_extrapolate(u_center: f64, u_back: Option<f64>) -> f64 {
    match u_back {
        Some(b) => 2.0 * u_center - b,
        None => u_center,
    }
}
