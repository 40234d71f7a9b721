//! Matrix-free stencil rows.
//!
//! A row encodes one node's equation
//!
//! ```text
//! sum_k a_k U^{n+1}_{p+k} = sum_k b_k U^n_{p+k} + rhs_extra
//! ```
//!
//! where the implicit map `a` already contains the unit diagonal and the
//! explicit map `b` contains the unit `U^n_p` term.

use crate::grid::Axis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Offset {
    pub di: i32,
    pub dj: i32,
}

impl Offset {
    pub const ZERO: Offset = Offset { di: 0, dj: 0 };

    pub const fn new(di: i32, dj: i32) -> Self {
        Self { di, dj }
    }

    pub const fn along(axis: Axis, k: i32) -> Self {
        match axis {
            Axis::X => Self { di: k, dj: 0 },
            Axis::Y => Self { di: 0, dj: k },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.di == 0 && self.dj == 0
    }
}

/// Sparse offset -> coefficient map with merged duplicates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Coefficients(Vec<(Offset, f64)>);

impl Coefficients {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn add(&mut self, offset: Offset, value: f64) {
        match self.0.iter_mut().find(|(o, _)| *o == offset) {
            Some((_, v)) => *v += value,
            None => self.0.push((offset, value)),
        }
    }

    pub fn get(&self, offset: Offset) -> f64 {
        self.0
            .iter()
            .find(|(o, _)| *o == offset)
            .map_or(0.0, |(_, v)| *v)
    }

    /// Removes the entry at `offset`, returning its coefficient.
    pub fn take(&mut self, offset: Offset) -> f64 {
        match self.0.iter().position(|(o, _)| *o == offset) {
            Some(k) => self.0.swap_remove(k).1,
            None => 0.0,
        }
    }

    /// Drops exact zeros left over from cancellation.
    pub fn prune(&mut self) {
        self.0.retain(|(_, v)| *v != 0.0);
        self.0.sort_by_key(|(o, _)| (o.dj, o.di));
    }

    pub fn iter(&self) -> impl Iterator<Item = (Offset, f64)> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().map(|(_, v)| v).sum()
    }

    pub fn scale(&mut self, s: f64) {
        for (_, v) in &mut self.0 {
            *v *= s;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StencilRow {
    pub center: (usize, usize),
    pub implicit: Coefficients,
    pub explicit: Coefficients,
    pub rhs_extra: f64,
}

impl StencilRow {
    /// `U^{n+1}_p = U^n_p`.
    pub fn identity(center: (usize, usize)) -> Self {
        let mut implicit = Coefficients::new();
        implicit.add(Offset::ZERO, 1.0);
        let mut explicit = Coefficients::new();
        explicit.add(Offset::ZERO, 1.0);
        Self {
            center,
            implicit,
            explicit,
            rhs_extra: 0.0,
        }
    }

    pub fn diagonal(&self) -> f64 {
        self.implicit.get(Offset::ZERO)
    }

    /// Offsets with a nonzero coefficient in either part.
    pub fn footprint(&self) -> impl Iterator<Item = Offset> + '_ {
        self.implicit
            .iter()
            .chain(self.explicit.iter())
            .filter(|(_, v)| *v != 0.0)
            .map(|(o, _)| o)
    }

    pub fn prune(&mut self) {
        self.implicit.prune();
        self.explicit.prune();
    }

    /// Evaluates `sum_k a_k f(p+k)` and `sum_k b_k g(p+k)` for callers that
    /// hold plain closures over offsets.
    pub fn apply<F, G>(&self, new: F, old: G) -> (f64, f64)
    where
        F: Fn(Offset) -> f64,
        G: Fn(Offset) -> f64,
    {
        let lhs = self.implicit.iter().map(|(o, a)| a * new(o)).sum();
        let rhs = self.explicit.iter().map(|(o, b)| b * old(o)).sum::<f64>() + self.rhs_extra;
        (lhs, rhs)
    }
}
