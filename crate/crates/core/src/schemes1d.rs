//! One-dimensional kappa-gradients and the row assembly of the fully
//! implicit and semi-implicit kappa-schemes.
//!
//! Both schemes are written in terms of the signed Courant number
//! `C = tau V / h`. For `C > 0` the upwind neighbour is `i - 1`, for
//! `C < 0` it is `i + 1`. With the parametric gradient
//!
//! ```text
//! 2 h d^k U_i = (1 - k) (U_i - U_{i-1}) + (1 + k) (U_{i+1} - U_i)
//! ```
//!
//! the semi-implicit row reads
//!
//! ```text
//! U_i^{n+1} + C (d^-+ U_i^{n+1} - 0.5 d^k U_{i-+1}^{n+1}) h = U_i^n - 0.5 C h d^k U_i^n
//! ```
//!
//! and needs only the local velocity, while the fully implicit row also
//! reads the velocity at the upwind neighbour.

use crate::grid::Axis;
use crate::stencil::{Coefficients, Offset, StencilRow};

/// `sign(0) = 0`, unlike `f64::signum`.
#[inline]
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Rule for the kappa parameter of a gradient, evaluated per node and axis
/// from the local signed Courant number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KappaChoice {
    Constant(f64),
    /// `kappa = sign(C)`: inflow implicit / outflow explicit, smallest stencil.
    UpwindSign,
    /// `kappa = -sign(C)`.
    DownwindSign,
    /// `kappa = 0`, central gradient.
    Central,
    /// `kappa = sign(C) (1 + 2|C|) / 3`, third order for the fully implicit scheme.
    ThirdOrderImplicit,
    /// `kappa = sign(C) (1 - |C|) / 3`, third order for the semi-implicit scheme.
    ThirdOrderSemiImplicit,
}

impl KappaChoice {
    pub fn value(&self, c: f64) -> f64 {
        match *self {
            KappaChoice::Constant(k) => k,
            KappaChoice::UpwindSign => sign(c),
            KappaChoice::DownwindSign => -sign(c),
            KappaChoice::Central => 0.0,
            KappaChoice::ThirdOrderImplicit => sign(c) * (1.0 + 2.0 * c.abs()) / 3.0,
            KappaChoice::ThirdOrderSemiImplicit => sign(c) * (1.0 - c.abs()) / 3.0,
        }
    }

    /// Short label used in tables and configs (`kp`, `km`, `k0`, `k3`, ...).
    pub fn label(&self) -> String {
        match *self {
            KappaChoice::Constant(k) => format!("{k}"),
            KappaChoice::UpwindSign => "kp".into(),
            KappaChoice::DownwindSign => "km".into(),
            KappaChoice::Central => "k0".into(),
            KappaChoice::ThirdOrderImplicit => "im3rd".into(),
            KappaChoice::ThirdOrderSemiImplicit => "k3".into(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "kp" | "upwind" => Some(KappaChoice::UpwindSign),
            "km" | "downwind" => Some(KappaChoice::DownwindSign),
            "k0" | "central" => Some(KappaChoice::Central),
            "k3" | "kappasi" => Some(KappaChoice::ThirdOrderSemiImplicit),
            "im3rd" => Some(KappaChoice::ThirdOrderImplicit),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|k| (-1.0..=1.0).contains(k))
                .map(KappaChoice::Constant),
        }
    }

    /// Whether `kappa(-C) = -kappa(C)` for every `C`.
    pub fn is_sign_symmetric(&self) -> bool {
        !matches!(self, KappaChoice::Constant(k) if *k != 0.0)
    }
}

/// The kappa approximation of `du/dx` at a node from its two neighbours.
pub fn kappa_gradient(u_left: f64, u_center: f64, u_right: f64, h: f64, kappa: f64) -> f64 {
    ((1.0 - kappa) * (u_center - u_left) + (1.0 + kappa) * (u_right - u_center)) / (2.0 * h)
}

/// Adds `weight * h d^k U` taken at offset `at` along `axis`.
pub(crate) fn add_gradient(
    coeffs: &mut Coefficients,
    axis: Axis,
    at: i32,
    weight: f64,
    kappa: f64,
) {
    coeffs.add(Offset::along(axis, at - 1), -weight * 0.5 * (1.0 - kappa));
    coeffs.add(Offset::along(axis, at), -weight * kappa);
    coeffs.add(Offset::along(axis, at + 1), weight * 0.5 * (1.0 + kappa));
}

/// Upwind offset: `-1` for `C > 0`, `+1` for `C < 0`, `0` when at rest.
#[inline]
pub(crate) fn upwind(c: f64) -> i32 {
    -(sign(c) as i32)
}

/// Adds one axis of the semi-implicit scheme to `row`.
pub(crate) fn add_semi_implicit_axis(row: &mut StencilRow, axis: Axis, c: f64, kappa: f64) {
    if c == 0.0 {
        return;
    }
    let u = upwind(c);
    // C h d^-+ U_i = |C| (U_i - U_{i+u})
    row.implicit.add(Offset::ZERO, c.abs());
    row.implicit.add(Offset::along(axis, u), -c.abs());
    add_gradient(&mut row.implicit, axis, u, -0.5 * c, kappa);
    add_gradient(&mut row.explicit, axis, 0, -0.5 * c, kappa);
}

/// Row of the semi-implicit kappa-scheme at node `center`.
pub fn semi_implicit_row_1d(center: usize, c: f64, kappa: KappaChoice) -> StencilRow {
    let mut row = StencilRow::identity((center, 0));
    add_semi_implicit_axis(&mut row, Axis::X, c, kappa.value(c));
    row.prune();
    row
}

/// Row of the fully implicit kappa-scheme at node `center`.
///
/// `c_upwind` is the Courant number at the upwind neighbour, which enters
/// through the discrete `d(V d^k U)` term. Kappa is evaluated from the
/// local `c` and used for both gradients.
pub fn fully_implicit_row_1d(
    center: usize,
    c: f64,
    c_upwind: f64,
    kappa: KappaChoice,
) -> StencilRow {
    let mut row = StencilRow::identity((center, 0));
    row.explicit = {
        let mut e = Coefficients::new();
        e.add(Offset::ZERO, 1.0);
        e
    };
    let k = kappa.value(c);
    let imp = &mut row.implicit;
    let x = Axis::X;
    if c > 0.0 {
        // C [(U_i - U_{i-1}) + 0.5 (g_i - g_{i-1})] + 0.5 C (C_i g_i - C_{i-1} g_{i-1})
        imp.add(Offset::ZERO, c);
        imp.add(Offset::along(x, -1), -c);
        add_gradient(imp, x, 0, 0.5 * c + 0.5 * c * c, k);
        add_gradient(imp, x, -1, -0.5 * c - 0.5 * c * c_upwind, k);
    } else if c < 0.0 {
        // C [(U_{i+1} - U_i) - 0.5 (g_{i+1} - g_i)] + 0.5 C (C_{i+1} g_{i+1} - C_i g_i)
        imp.add(Offset::along(x, 1), c);
        imp.add(Offset::ZERO, -c);
        add_gradient(imp, x, 1, -0.5 * c + 0.5 * c * c_upwind, k);
        add_gradient(imp, x, 0, 0.5 * c - 0.5 * c * c, k);
    }
    row.prune();
    row
}
