//! Error measures and convergence orders.

use crate::error::{Error, Result};
use crate::grid::{Dim, Field};

/// `h^d`, the cell measure in the error sums.
pub fn cell_measure(field: &Field) -> f64 {
    let h = field.grid().h();
    match field.grid().dim() {
        Dim::One => h,
        Dim::Two => h * h,
    }
}

/// `h^d sum |U - u|` over the nodes accepted by `measured`.
pub fn l1_error<E, M>(field: &Field, exact: E, measured: M) -> f64
where
    E: Fn(f64, f64) -> f64,
    M: Fn(usize) -> bool,
{
    let grid = field.grid();
    let sum: f64 = field
        .values()
        .iter()
        .enumerate()
        .filter(|&(node, _)| measured(node))
        .map(|(node, &u)| {
            let (x, y) = grid.point(node);
            (u - exact(x, y)).abs()
        })
        .sum();
    cell_measure(field) * sum
}

/// Running maximum over time levels of [`l1_error`]; levels can be pushed as
/// they are computed, so the series never has to be stored.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MaxInTime {
    pub value: f64,
    pub levels: usize,
}

impl MaxInTime {
    pub fn push(&mut self, level_error: f64) {
        self.value = self.value.max(level_error);
        self.levels += 1;
    }
}

/// `E = h^d max_n sum |U^n - u(t^n)|` over stored levels `(t^n, U^n)`.
pub fn error_max_in_time<E, M>(levels: &[(f64, Field)], exact: E, measured: M) -> f64
where
    E: Fn(f64, f64, f64) -> f64,
    M: Fn(usize) -> bool + Copy,
{
    let mut acc = MaxInTime::default();
    for (t, u) in levels {
        acc.push(l1_error(u, |x, y| exact(x, y, *t), measured));
    }
    acc.value
}

/// `e = h^d sum |U - U_ref|` over all coarse nodes, the reference being
/// sampled at the coincident nodes of its finer grid.
pub fn error_against_reference(field: &Field, reference: &Field) -> Result<f64> {
    let (g, r) = (field.grid(), reference.grid());
    let (m, m_ref) = (g.cells(), r.cells());
    if g.dim() != r.dim() || g.x_bounds() != r.x_bounds() || g.y_bounds() != r.y_bounds() {
        return Err(Error::InvalidArgument(
            "reference grid covers another domain".into(),
        ));
    }
    if m_ref % m != 0 {
        return Err(Error::InvalidArgument(format!(
            "reference resolution {m_ref} is not a multiple of {m}"
        )));
    }
    let k = m_ref / m;
    let sum: f64 = (0..g.len())
        .map(|node| {
            let (i, j) = g.coords(node);
            (field.values()[node] - reference.at(i * k, j * k)).abs()
        })
        .sum();
    Ok(cell_measure(field) * sum)
}

/// `log2(coarse / fine)` for a halved grid step.
pub fn eoc(coarse: f64, fine: f64) -> Result<f64> {
    if !(coarse > 0.0 && fine > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "orders need positive errors, got {coarse} and {fine}"
        )));
    }
    Ok((coarse / fine).log2())
}
