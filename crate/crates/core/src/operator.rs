//! Assembly of the per-step linear system.
//!
//! Velocities are time independent, so the implicit and explicit
//! coefficients are assembled once into compressed rows over grid nodes.
//! Each step then only contracts the explicit part against `U^n` and
//! evaluates boundary data at the old and new time levels.

use crate::boundary::{axis_weights, ghost_edges, Boundary, BoundaryFn, EdgeCondition, Pin};
use crate::domain::{boundary_gamma, classify_node, cut_fraction, ImplicitDomain, NodeClass};
use crate::error::{Error, Result};
use crate::grid::{courant_numbers, Dim, Field, Grid, VelocityField};
use crate::schemes1d::upwind;
use crate::schemes2d::SchemeSpec;
use crate::stencil::{Offset, StencilRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Old,
    New,
}

/// `coef * f(x, y, t)` added to a row's right-hand side.
#[derive(Clone)]
struct BoundaryTerm {
    coef: f64,
    f: BoundaryFn,
    x: f64,
    y: f64,
    level: Level,
}

/// Node counts by role.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NodeCounts {
    pub interior_full: usize,
    pub near_boundary: usize,
    pub pinned: usize,
    pub outside: usize,
}

impl NodeCounts {
    pub fn solved(&self) -> usize {
        self.interior_full + self.near_boundary
    }
}

pub struct StepOperator {
    grid: Grid,
    spec: SchemeSpec,
    row_of_node: Vec<usize>,
    nodes: Vec<usize>,
    diag: Vec<f64>,
    imp_ptr: Vec<usize>,
    imp: Vec<(usize, f64)>,
    exp_ptr: Vec<usize>,
    exp: Vec<(usize, f64)>,
    bnd_ptr: Vec<usize>,
    bnd: Vec<BoundaryTerm>,
    class: Vec<Option<NodeClass>>,
    counts: NodeCounts,
    max_courant: f64,
    max_effective_courant: f64,
    min_cut_fraction: Option<f64>,
}

pub const NO_ROW: usize = usize::MAX;

impl std::fmt::Debug for StepOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StepOperator")
            .field("scheme", &self.spec.label())
            .field("rows", &self.nodes.len())
            .field("counts", &self.counts)
            .field("max_courant", &self.max_courant)
            .finish()
    }
}

/// Sparse accumulator for one row, keyed by node.
#[derive(Default)]
struct RowAcc(Vec<(usize, f64)>);

impl RowAcc {
    fn add(&mut self, node: usize, v: f64) {
        if v == 0.0 {
            return;
        }
        match self.0.iter_mut().find(|(n, _)| *n == node) {
            Some((_, a)) => *a += v,
            None => self.0.push((node, v)),
        }
    }
}

impl StepOperator {
    /// Assembles the operator for a run with time step `tau`.
    pub fn new(
        spec: &SchemeSpec,
        velocity: &VelocityField,
        tau: f64,
        boundary: &Boundary,
        domain: Option<&ImplicitDomain>,
    ) -> Result<Self> {
        spec.validate()?;
        let grid = *velocity.grid();
        if spec.dim() != grid.dim() {
            return Err(Error::InvalidScheme(format!(
                "scheme {} needs a {:?} grid",
                spec.label(),
                spec.dim()
            )));
        }
        if domain.is_some() && grid.dim() != Dim::Two {
            return Err(Error::InvalidArgument(
                "implicit domains need a 2D grid".into(),
            ));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "time step {tau} is not positive"
            )));
        }
        boundary.validate(velocity)?;

        let courant = courant_numbers(velocity, tau, grid.h());
        let fallback = SchemeSpec::upwind_sign_2d();
        let n = grid.len();
        let mut op = Self {
            grid,
            spec: *spec,
            row_of_node: vec![NO_ROW; n],
            nodes: Vec::with_capacity(n),
            diag: Vec::with_capacity(n),
            imp_ptr: vec![0],
            imp: Vec::new(),
            exp_ptr: vec![0],
            exp: Vec::new(),
            bnd_ptr: vec![0],
            bnd: Vec::new(),
            class: vec![None; n],
            counts: NodeCounts::default(),
            max_courant: 0.0,
            max_effective_courant: 0.0,
            min_cut_fraction: None,
        };

        for node in 0..n {
            let (i, j) = grid.coords(node);
            let (x, y) = grid.point(node);
            let mut imp = RowAcc::default();
            let mut exp = RowAcc::default();
            let mut bnd: Vec<BoundaryTerm> = Vec::new();

            if let Some(d) = domain {
                let phi = d.phi_at(node);
                if phi > 0.0 {
                    op.counts.outside += 1;
                    op.class[node] = Some(NodeClass::Outside);
                    continue;
                }
                op.max_courant = op.max_courant.max(courant[node].max_abs());
                if phi == 0.0 {
                    imp.add(node, 1.0);
                    bnd.push(BoundaryTerm {
                        coef: 1.0,
                        f: d.dirichlet().clone(),
                        x,
                        y,
                        level: Level::New,
                    });
                    op.counts.pinned += 1;
                    op.push_row(node, imp, exp, bnd)?;
                    continue;
                }
            } else {
                op.max_courant = op.max_courant.max(courant[node].max_abs());
            }

            match boundary.pin(&grid, i, j) {
                Some(Pin::Edge(edge)) => {
                    let f = match boundary.edge(edge) {
                        EdgeCondition::Exact(f) | EdgeCondition::Dirichlet(f) => f.clone(),
                        _ => unreachable!("pins come from Exact or Dirichlet edges"),
                    };
                    imp.add(node, 1.0);
                    bnd.push(BoundaryTerm {
                        coef: 1.0,
                        f,
                        x,
                        y,
                        level: Level::New,
                    });
                    op.counts.pinned += 1;
                    op.push_row(node, imp, exp, bnd)?;
                    continue;
                }
                Some(Pin::Frozen) => {
                    imp.add(node, 1.0);
                    exp.add(node, 1.0);
                    op.counts.pinned += 1;
                    op.push_row(node, imp, exp, bnd)?;
                    continue;
                }
                _ => {}
            }

            let cn = courant[node];
            let up = i as isize + upwind(cn.c) as isize;
            let c_upwind = grid
                .checked_index(up, j as isize)
                .map_or(cn.c, |q| courant[q].c);
            let mut row = spec.row((i, j), cn.c, cn.d, c_upwind);
            let mut class = NodeClass::InteriorFull;
            if let Some(d) = domain {
                class = classify_node(&grid, d.phi().values(), i, j, row.footprint());
                if class == NodeClass::NearBoundary {
                    row = fallback.row((i, j), cn.c, cn.d, cn.c);
                }
            }
            match class {
                NodeClass::NearBoundary => op.counts.near_boundary += 1,
                _ => op.counts.interior_full += 1,
            }
            op.class[node] = Some(class);

            let mut effective = cn.max_abs();
            op.resolve_row(
                &row,
                boundary,
                domain,
                &mut imp,
                &mut exp,
                &mut bnd,
                |axis_c, frac| effective = effective.max(axis_c.abs() / frac),
                &courant,
            )?;
            op.max_effective_courant = op.max_effective_courant.max(effective);
            op.push_row(node, imp, exp, bnd)?;
        }
        op.max_effective_courant = op.max_effective_courant.max(op.max_courant);
        Ok(op)
    }

    #[allow(clippy::too_many_arguments)]
    fn resolve_row<F: FnMut(f64, f64)>(
        &mut self,
        row: &StencilRow,
        boundary: &Boundary,
        domain: Option<&ImplicitDomain>,
        imp: &mut RowAcc,
        exp: &mut RowAcc,
        bnd: &mut Vec<BoundaryTerm>,
        mut on_cut: F,
        courant: &[crate::grid::Courant],
    ) -> Result<()> {
        let grid = self.grid;
        let (i, j) = row.center;
        let node = grid.index(i, j);
        let at = |o: Offset| (i as isize + o.di as isize, j as isize + o.dj as isize);
        let blocked = |q: usize| domain.is_some_and(|d| !d.is_available(q));
        let unclosed = |q: usize| {
            let (qi, qj) = grid.coords(q);
            Error::UnclosedRow { i, j, qi, qj }
        };

        for (o, a) in row.implicit.iter() {
            let (qi, qj) = at(o);
            match grid.checked_index(qi, qj) {
                Some(q) if blocked(q) => {
                    // inflow through the implicit boundary
                    let d = domain.expect("blocked implies a domain");
                    if o.di.abs() + o.dj.abs() != 1 {
                        return Err(unclosed(q));
                    }
                    let gamma = boundary_gamma(d.phi_at(node), d.phi_at(q))?;
                    let (xp, yp) = grid.point(node);
                    let (xq, yq) = grid.point(q);
                    let xc = gamma * xp + (1.0 - gamma) * xq;
                    let yc = gamma * yp + (1.0 - gamma) * yq;
                    imp.add(node, -a * gamma / (1.0 - gamma));
                    bnd.push(BoundaryTerm {
                        coef: -a / (1.0 - gamma),
                        f: d.dirichlet().clone(),
                        x: xc,
                        y: yc,
                        level: Level::New,
                    });
                    let frac = cut_fraction(gamma);
                    self.min_cut_fraction =
                        Some(self.min_cut_fraction.map_or(frac, |m| m.min(frac)));
                    let axis_c = if o.di != 0 {
                        courant[node].c
                    } else {
                        courant[node].d
                    };
                    on_cut(axis_c, frac);
                }
                Some(q) => imp.add(q, a),
                None => self.resolve_ghost(qi, qj, a, boundary, imp, bnd, Level::New),
            }
        }

        for (o, b) in row.explicit.iter() {
            let (qi, qj) = at(o);
            match grid.checked_index(qi, qj) {
                Some(q) if blocked(q) => {
                    // outflow through the implicit boundary
                    let back = grid
                        .checked_index(i as isize - o.di as isize, j as isize - o.dj as isize)
                        .filter(|&k| !blocked(k));
                    if o.di.abs() + o.dj.abs() != 1 {
                        return Err(unclosed(q));
                    }
                    match back {
                        Some(k) => {
                            exp.add(node, 2.0 * b);
                            exp.add(k, -b);
                        }
                        None => exp.add(node, b),
                    }
                }
                Some(q) => exp.add(q, b),
                None => self.resolve_ghost(qi, qj, b, boundary, exp, bnd, Level::Old),
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn resolve_ghost(
        &self,
        gi: isize,
        gj: isize,
        coef: f64,
        boundary: &Boundary,
        acc: &mut RowAcc,
        bnd: &mut Vec<BoundaryTerm>,
        level: Level,
    ) {
        let grid = self.grid;
        let exact = ghost_edges(&grid, gi, gj)
            .into_iter()
            .find_map(|e| match boundary.edge(e) {
                EdgeCondition::Exact(f) => Some(f.clone()),
                _ => None,
            });
        if let Some(f) = exact {
            // implicit ghosts move to the right-hand side
            let sign = if level == Level::New { -1.0 } else { 1.0 };
            bnd.push(BoundaryTerm {
                coef: sign * coef,
                f,
                x: grid.x(gi),
                y: grid.y(gj),
                level,
            });
            return;
        }
        let wx = axis_weights(gi, grid.nx());
        let wy = axis_weights(gj, grid.ny());
        for (ix, ax) in wx {
            for (jy, ay) in wy {
                acc.add(grid.index(ix, jy), coef * ax * ay);
            }
        }
    }

    fn push_row(
        &mut self,
        node: usize,
        imp: RowAcc,
        exp: RowAcc,
        bnd: Vec<BoundaryTerm>,
    ) -> Result<()> {
        let diag = imp
            .0
            .iter()
            .find(|(q, _)| *q == node)
            .map_or(0.0, |(_, v)| *v);
        if diag == 0.0 || !diag.is_finite() {
            return Err(Error::ZeroDiagonal { node });
        }
        self.row_of_node[node] = self.nodes.len();
        self.nodes.push(node);
        self.diag.push(diag);
        self.imp
            .extend(imp.0.into_iter().filter(|(q, v)| *q != node && *v != 0.0));
        self.imp_ptr.push(self.imp.len());
        self.exp
            .extend(exp.0.into_iter().filter(|(_, v)| *v != 0.0));
        self.exp_ptr.push(self.exp.len());
        self.bnd.extend(bnd);
        self.bnd_ptr.push(self.bnd.len());
        Ok(())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn spec(&self) -> &SchemeSpec {
        &self.spec
    }

    /// Number of rows (solved and pinned nodes).
    pub fn rows(&self) -> usize {
        self.nodes.len()
    }

    pub fn row_node(&self, r: usize) -> usize {
        self.nodes[r]
    }

    /// Row of `node`, or `None` for nodes outside an implicit domain.
    pub fn row_of(&self, node: usize) -> Option<usize> {
        match self.row_of_node[node] {
            NO_ROW => None,
            r => Some(r),
        }
    }

    pub fn diagonal(&self, r: usize) -> f64 {
        self.diag[r]
    }

    /// Off-diagonal implicit entries `(node, coefficient)` of row `r`.
    pub fn off_diagonal(&self, r: usize) -> &[(usize, f64)] {
        &self.imp[self.imp_ptr[r]..self.imp_ptr[r + 1]]
    }

    /// Explicit entries `(node, coefficient)` of row `r`.
    pub fn explicit(&self, r: usize) -> &[(usize, f64)] {
        &self.exp[self.exp_ptr[r]..self.exp_ptr[r + 1]]
    }

    pub fn class(&self, node: usize) -> Option<NodeClass> {
        self.class[node]
    }

    pub fn counts(&self) -> NodeCounts {
        self.counts
    }

    /// Largest `max(|C|, |D|)` over the nodes of the computational domain.
    pub fn max_courant(&self) -> f64 {
        self.max_courant
    }

    /// Like [`max_courant`](Self::max_courant) but with the Courant numbers
    /// of cut rows divided by their cut fraction.
    pub fn max_effective_courant(&self) -> f64 {
        self.max_effective_courant
    }

    /// Smallest distance (in units of `h`) from a solved node to a crossing
    /// it substitutes.
    pub fn min_cut_fraction(&self) -> Option<f64> {
        self.min_cut_fraction
    }

    /// Whether node values enter error sums: solved nodes inside the
    /// domain (all nodes without a domain).
    pub fn is_measured(&self, node: usize) -> bool {
        match self.class[node] {
            Some(NodeClass::Outside) => false,
            _ => self.row_of_node[node] != NO_ROW,
        }
    }

    /// Right-hand side of the step `t_old -> t_new` from `U^n`.
    pub fn linear_step(&self, field: &Field, t_old: f64, t_new: f64) -> Result<LinearStep<'_>> {
        if field.grid() != &self.grid {
            return Err(Error::InvalidArgument("field lives on another grid".into()));
        }
        let u = field.values();
        let rhs = (0..self.rows())
            .map(|r| {
                let e: f64 = self.explicit(r).iter().map(|&(q, b)| b * u[q]).sum();
                let g: f64 = self.bnd[self.bnd_ptr[r]..self.bnd_ptr[r + 1]]
                    .iter()
                    .map(|t| {
                        let time = match t.level {
                            Level::Old => t_old,
                            Level::New => t_new,
                        };
                        t.coef * (t.f)(t.x, t.y, time)
                    })
                    .sum();
                e + g
            })
            .collect::<Vec<_>>();
        if let Some(r) = rhs.iter().position(|v| !v.is_finite()) {
            let (i, j) = self.grid.coords(self.nodes[r]);
            return Err(Error::NonFinite {
                i,
                j,
                value: rhs[r],
            });
        }
        Ok(LinearStep { op: self, rhs })
    }
}

/// One step's linear system: the operator's implicit rows with a right-hand
/// side.
pub struct LinearStep<'a> {
    op: &'a StepOperator,
    rhs: Vec<f64>,
}

impl<'a> LinearStep<'a> {
    pub fn operator(&self) -> &'a StepOperator {
        self.op
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// `sum_q a_rq U_q - rhs_r` for row `r`.
    #[inline]
    pub fn row_residual(&self, r: usize, u: &[f64]) -> f64 {
        let node = self.op.nodes[r];
        let s: f64 = self.op.off_diagonal(r).iter().map(|&(q, a)| a * u[q]).sum();
        self.op.diag[r] * u[node] + s - self.rhs[r]
    }

    /// Gauss-Seidel update of row `r` in place.
    #[inline]
    pub(crate) fn relax(&self, r: usize, u: &mut [f64]) {
        let node = self.op.nodes[r];
        let s: f64 = self.op.off_diagonal(r).iter().map(|&(q, a)| a * u[q]).sum();
        u[node] = (self.rhs[r] - s) / self.op.diag[r];
    }
}
