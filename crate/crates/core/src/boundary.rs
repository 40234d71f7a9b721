//! Boundary conditions on the edges of the rectangular grid.
//!
//! Every edge carries one [`EdgeCondition`]. Edge nodes are either pinned
//! (their new value is known) or solved with the scheme row, in which case
//! stencil offsets leaving the grid are resolved into ghost values.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Dim, Grid, VelocityField};

/// `u(x, y, t)`.
pub type BoundaryFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Edge {
    West,
    East,
    South,
    North,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::West, Edge::East, Edge::South, Edge::North];

    pub fn name(&self) -> &'static str {
        match self {
            Edge::West => "west",
            Edge::East => "east",
            Edge::South => "south",
            Edge::North => "north",
        }
    }

    /// Velocity component along the outward normal.
    fn outward(&self, v: f64, w: f64) -> f64 {
        match self {
            Edge::West => -v,
            Edge::East => v,
            Edge::South => -w,
            Edge::North => w,
        }
    }
}

#[derive(Clone)]
pub enum EdgeCondition {
    /// Outflow: the edge nodes are solved and ghosts are linear
    /// extrapolations `U_{-k} = (1 + k) U_0 - k U_1`.
    Extrapolate,
    /// Zero normal velocity: the edge nodes keep their initial value.
    Frozen,
    /// Inflow: the edge nodes take `u^D(x, y, t^{n+1})`.
    Dirichlet(BoundaryFn),
    /// A known solution: edge nodes and every ghost beyond the edge take its
    /// values. Used for manufactured and benchmark runs.
    Exact(BoundaryFn),
}

impl fmt::Debug for EdgeCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeCondition::Extrapolate => write!(f, "Extrapolate"),
            EdgeCondition::Frozen => write!(f, "Frozen"),
            EdgeCondition::Dirichlet(_) => write!(f, "Dirichlet(..)"),
            EdgeCondition::Exact(_) => write!(f, "Exact(..)"),
        }
    }
}

impl EdgeCondition {
    pub fn dirichlet<F>(f: F) -> Self
    where
        F: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    {
        EdgeCondition::Dirichlet(Arc::new(f))
    }

    pub fn exact<F>(f: F) -> Self
    where
        F: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    {
        EdgeCondition::Exact(Arc::new(f))
    }

    fn pin_rank(&self) -> u8 {
        match self {
            EdgeCondition::Exact(_) => 3,
            EdgeCondition::Dirichlet(_) => 2,
            EdgeCondition::Frozen => 1,
            EdgeCondition::Extrapolate => 0,
        }
    }
}

/// Conditions on the four grid edges. In 1D only `west` and `east` apply.
#[derive(Clone, Debug)]
pub struct Boundary {
    pub west: EdgeCondition,
    pub east: EdgeCondition,
    pub south: EdgeCondition,
    pub north: EdgeCondition,
}

/// How a pinned node obtains its new value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pin {
    Edge(Edge),
    Frozen,
}

impl Boundary {
    pub fn uniform(condition: EdgeCondition) -> Self {
        Self {
            west: condition.clone(),
            east: condition.clone(),
            south: condition.clone(),
            north: condition,
        }
    }

    /// Exact values on every edge.
    pub fn exact<F>(f: F) -> Self
    where
        F: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self::uniform(EdgeCondition::exact(f))
    }

    pub fn edge(&self, edge: Edge) -> &EdgeCondition {
        match edge {
            Edge::West => &self.west,
            Edge::East => &self.east,
            Edge::South => &self.south,
            Edge::North => &self.north,
        }
    }

    /// Edges that node `(i, j)` lies on.
    pub fn edges_of(grid: &Grid, i: usize, j: usize) -> impl Iterator<Item = Edge> {
        let m = grid.cells();
        let two_d = grid.dim() == Dim::Two;
        [
            (i == 0, Edge::West),
            (i == m, Edge::East),
            (two_d && j == 0, Edge::South),
            (two_d && j == m, Edge::North),
        ]
        .into_iter()
        .filter(|(on, _)| *on)
        .map(|(_, e)| e)
    }

    /// Pin of node `(i, j)`, if any. At corners the strongest condition wins:
    /// Exact, then Dirichlet, then Frozen.
    pub fn pin(&self, grid: &Grid, i: usize, j: usize) -> Option<Pin> {
        let edge = Self::edges_of(grid, i, j).max_by_key(|e| self.edge(*e).pin_rank())?;
        match self.edge(edge) {
            EdgeCondition::Exact(_) | EdgeCondition::Dirichlet(_) => Some(Pin::Edge(edge)),
            EdgeCondition::Frozen => Some(Pin::Frozen),
            EdgeCondition::Extrapolate => None,
        }
    }

    /// Checks that each unpinned edge node sees a velocity compatible with
    /// its condition: Dirichlet needs inflow or rest, Extrapolate needs
    /// outflow or rest, Frozen needs rest. Exact edges accept anything.
    pub fn validate(&self, velocity: &VelocityField) -> Result<()> {
        let grid = velocity.grid();
        let tol = 1e-10 * (1.0 + velocity.max_component());
        for node in 0..grid.len() {
            let (i, j) = grid.coords(node);
            let pinned = self.pin(grid, i, j).is_some();
            let (v, w) = velocity.at(node);
            for edge in Self::edges_of(grid, i, j) {
                let out = edge.outward(v, w);
                let reason = match self.edge(edge) {
                    EdgeCondition::Dirichlet(_) if out > tol => {
                        Some("Dirichlet data on an outflow edge")
                    }
                    EdgeCondition::Frozen if out.abs() > tol => {
                        Some("frozen edge with nonzero normal velocity")
                    }
                    EdgeCondition::Extrapolate if !pinned && out < -tol => {
                        Some("extrapolation on an inflow edge")
                    }
                    _ => None,
                };
                if let Some(reason) = reason {
                    return Err(Error::BoundaryMismatch {
                        edge: edge.name(),
                        i,
                        j,
                        reason,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Weights of the linear extrapolation along one axis: the index `k` of a
/// grid with `n` nodes is expressed through in-grid nodes.
pub(crate) fn axis_weights(k: isize, n: usize) -> [(usize, f64); 2] {
    let last = n as isize - 1;
    if k < 0 {
        let d = -k as f64;
        [(0, 1.0 + d), (1, -d)]
    } else if k > last {
        let d = (k - last) as f64;
        [(last as usize, 1.0 + d), (last as usize - 1, -d)]
    } else {
        [(k as usize, 1.0), (k as usize, 0.0)]
    }
}

/// First edge crossed by the ghost index `(gi, gj)`, preferring the x edges.
pub(crate) fn ghost_edges(grid: &Grid, gi: isize, gj: isize) -> Vec<Edge> {
    let mut out = Vec::with_capacity(2);
    if gi < 0 {
        out.push(Edge::West);
    } else if gi >= grid.nx() as isize {
        out.push(Edge::East);
    }
    if gj < 0 {
        out.push(Edge::South);
    } else if gj >= grid.ny() as isize {
        out.push(Edge::North);
    }
    out
}

/// Boundary description of a 1D problem, one condition per end.
#[derive(Clone)]
pub enum EndCondition {
    DirichletInflow(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    Frozen,
    OutflowExtrapolate,
}

impl fmt::Debug for EndCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndCondition::DirichletInflow(_) => write!(f, "DirichletInflow(..)"),
            EndCondition::Frozen => write!(f, "Frozen"),
            EndCondition::OutflowExtrapolate => write!(f, "OutflowExtrapolate"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoundarySpec1D {
    pub left: EndCondition,
    pub right: EndCondition,
}

impl BoundarySpec1D {
    pub fn to_boundary(&self) -> Boundary {
        let convert = |c: &EndCondition| match c {
            EndCondition::DirichletInflow(f) => {
                let f = f.clone();
                EdgeCondition::dirichlet(move |_, _, t| f(t))
            }
            EndCondition::Frozen => EdgeCondition::Frozen,
            EndCondition::OutflowExtrapolate => EdgeCondition::Extrapolate,
        };
        Boundary {
            west: convert(&self.left),
            east: convert(&self.right),
            south: EdgeCondition::Frozen,
            north: EdgeCondition::Frozen,
        }
    }
}
