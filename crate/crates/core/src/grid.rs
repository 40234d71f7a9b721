//! Uniform Cartesian grids, nodal fields and sampled velocities.
//!
//! Nodes are stored row-major with `j` as the outer index, so the linear
//! index of node `(i, j)` is `j * nx + i`. A one-dimensional grid is the
//! degenerate case with a single `j` row.

use crate::error::{Error, Result};

/// Smallest number of cells accepted per axis.
pub const MIN_CELLS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dim {
    One,
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    cells: usize,
    h: f64,
    dim: Dim,
}

impl Grid {
    /// Builds a grid with `cells` uniform cells per axis.
    ///
    /// In 2D both axes must have the same length, since every scheme here
    /// uses a single spacing `h`. In 1D the `y` bounds are ignored.
    pub fn new(x: (f64, f64), y: (f64, f64), cells: usize, dim: Dim) -> Result<Self> {
        if cells < MIN_CELLS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_CELLS} cells per axis, got {cells}"
            )));
        }
        if !(x.0.is_finite() && x.1.is_finite()) || x.0 >= x.1 {
            return Err(Error::InvalidGrid(format!(
                "x bounds {x:?} are not ordered"
            )));
        }
        let h = (x.1 - x.0) / cells as f64;
        let (y_min, y_max) = match dim {
            Dim::One => (0.0, 0.0),
            Dim::Two => {
                if !(y.0.is_finite() && y.1.is_finite()) || y.0 >= y.1 {
                    return Err(Error::InvalidGrid(format!(
                        "y bounds {y:?} are not ordered"
                    )));
                }
                let hy = (y.1 - y.0) / cells as f64;
                if (hy - h).abs() > 1e-12 * h {
                    return Err(Error::InvalidGrid(format!(
                        "axes must share one spacing (hx = {h}, hy = {hy})"
                    )));
                }
                y
            }
        };
        Ok(Self {
            x_min: x.0,
            x_max: x.1,
            y_min,
            y_max,
            cells,
            h,
            dim,
        })
    }

    pub fn square(lo: f64, hi: f64, cells: usize) -> Result<Self> {
        Self::new((lo, hi), (lo, hi), cells, Dim::Two)
    }

    pub fn line(lo: f64, hi: f64, cells: usize) -> Result<Self> {
        Self::new((lo, hi), (0.0, 0.0), cells, Dim::One)
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn x_bounds(&self) -> (f64, f64) {
        (self.x_min, self.x_max)
    }

    pub fn y_bounds(&self) -> (f64, f64) {
        (self.y_min, self.y_max)
    }

    pub fn nx(&self) -> usize {
        self.cells + 1
    }

    pub fn ny(&self) -> usize {
        match self.dim {
            Dim::One => 1,
            Dim::Two => self.cells + 1,
        }
    }

    pub fn len(&self) -> usize {
        self.nx() * self.ny()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx() + i
    }

    #[inline]
    pub fn coords(&self, node: usize) -> (usize, usize) {
        (node % self.nx(), node / self.nx())
    }

    /// Coordinate of the (possibly ghost) index `i`.
    #[inline]
    pub fn x(&self, i: isize) -> f64 {
        self.x_min + i as f64 * self.h
    }

    #[inline]
    pub fn y(&self, j: isize) -> f64 {
        match self.dim {
            Dim::One => self.y_min,
            Dim::Two => self.y_min + j as f64 * self.h,
        }
    }

    pub fn point(&self, node: usize) -> (f64, f64) {
        let (i, j) = self.coords(node);
        (self.x(i as isize), self.y(j as isize))
    }

    pub fn contains(&self, i: isize, j: isize) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.nx() && (j as usize) < self.ny()
    }

    /// Linear index of `(i, j)` when it lies on the grid.
    pub fn checked_index(&self, i: isize, j: isize) -> Option<usize> {
        self.contains(i, j)
            .then(|| self.index(i as usize, j as usize))
    }
}

/// Nodal scalar values on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
    time_level: usize,
}

impl Field {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
            time_level: 0,
        }
    }

    pub fn from_values(grid: Grid, values: Vec<f64>, time_level: usize) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        let field = Self {
            grid,
            values,
            time_level,
        };
        field.check_finite()?;
        Ok(field)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn time_level(&self) -> usize {
        self.time_level
    }

    pub fn set_time_level(&mut self, n: usize) {
        self.time_level = n;
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(node) => {
                let (i, j) = self.grid.coords(node);
                Err(Error::NonFinite {
                    i,
                    j,
                    value: self.values[node],
                })
            }
        }
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// Samples `f` at every node; the result is time level 0.
pub fn sample_field<F>(grid: &Grid, f: F) -> Result<Field>
where
    F: Fn(f64, f64) -> f64,
{
    let values = (0..grid.len())
        .map(|node| {
            let (x, y) = grid.point(node);
            f(x, y)
        })
        .collect();
    Field::from_values(*grid, values, 0)
}

/// Nodal velocity components `(V_ij, W_ij)`. In 1D `vy` is all zero.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityField {
    grid: Grid,
    vx: Vec<f64>,
    vy: Vec<f64>,
}

impl VelocityField {
    pub fn sample<F>(grid: &Grid, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> (f64, f64),
    {
        let mut vx = Vec::with_capacity(grid.len());
        let mut vy = Vec::with_capacity(grid.len());
        for node in 0..grid.len() {
            let (x, y) = grid.point(node);
            let (v, w) = f(x, y);
            let w = if grid.dim() == Dim::One { 0.0 } else { w };
            if !v.is_finite() || !w.is_finite() {
                let (i, j) = grid.coords(node);
                return Err(Error::NonFinite {
                    i,
                    j,
                    value: if v.is_finite() { w } else { v },
                });
            }
            vx.push(v);
            vy.push(w);
        }
        Ok(Self {
            grid: *grid,
            vx,
            vy,
        })
    }

    pub fn constant(grid: &Grid, v: f64, w: f64) -> Result<Self> {
        Self::sample(grid, |_, _| (v, w))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn at(&self, node: usize) -> (f64, f64) {
        (self.vx[node], self.vy[node])
    }

    pub fn vx(&self) -> &[f64] {
        &self.vx
    }

    pub fn vy(&self) -> &[f64] {
        &self.vy
    }

    pub fn max_component(&self) -> f64 {
        self.vx
            .iter()
            .chain(&self.vy)
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Signed grid Courant numbers `(C_ij, D_ij)` of one node.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Courant {
    pub c: f64,
    pub d: f64,
}

impl Courant {
    pub fn new(c: f64, d: f64) -> Self {
        Self { c, d }
    }

    pub fn along(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.c,
            Axis::Y => self.d,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.c.abs().max(self.d.abs())
    }
}

/// `C_ij = tau V_ij / h`, `D_ij = tau W_ij / h` at every node.
pub fn courant_numbers(velocity: &VelocityField, tau: f64, h: f64) -> Vec<Courant> {
    let r = tau / h;
    velocity
        .vx
        .iter()
        .zip(&velocity.vy)
        .map(|(&v, &w)| Courant::new(r * v, r * w))
        .collect()
}

/// Uniform time stepping with `steps * tau == t_final`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeStepping {
    tau: f64,
    t_final: f64,
    steps: usize,
}

impl TimeStepping {
    pub fn new(t_final: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !(t_final > 0.0) || !t_final.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "time stepping needs T > 0 and N >= 1 (T = {t_final}, N = {steps})"
            )));
        }
        Ok(Self {
            tau: t_final / steps as f64,
            t_final,
            steps,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `t^n`; the last level is pinned to `T` exactly.
    pub fn time(&self, n: usize) -> f64 {
        if n == self.steps {
            self.t_final
        } else {
            n as f64 * self.tau
        }
    }
}
