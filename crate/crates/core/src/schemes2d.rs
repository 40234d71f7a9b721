//! The dimension-by-dimension semi-implicit scheme and its corner transport
//! upwind (CTU) extension.
//!
//! The 2D semi-implicit row is the sum of the 1D rows of both axes sharing
//! one diagonal. CTU adds the implicit corner group
//!
//! ```text
//! |C D| / 6 (U_ij + U_{i-+1 j-+1} - U_{i-+1 j} - U_{i j-+1})^{n+1}
//! ```
//!
//! and one of two explicit corner groups of weight `|C D| / 12`, blended
//! with `theta` (1 gives the first variant, 0 the second).

use crate::error::{Error, Result};
use crate::grid::{Axis, Dim};
use crate::schemes1d::{
    add_semi_implicit_axis, fully_implicit_row_1d, semi_implicit_row_1d, sign, KappaChoice,
};
use crate::stencil::{Offset, StencilRow};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SchemeFamily {
    FullyImplicit1D,
    SemiImplicit1D,
    SemiImplicit2D,
    Ctu { theta: f64 },
}

impl SchemeFamily {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeFamily::FullyImplicit1D => "fi1d",
            SchemeFamily::SemiImplicit1D => "si1d",
            SchemeFamily::SemiImplicit2D => "si2d",
            SchemeFamily::Ctu { .. } => "ctu",
        }
    }

    pub fn dim(&self) -> Dim {
        match self {
            SchemeFamily::FullyImplicit1D | SchemeFamily::SemiImplicit1D => Dim::One,
            _ => Dim::Two,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeSpec {
    pub family: SchemeFamily,
    pub kappa_x: KappaChoice,
    pub kappa_y: KappaChoice,
}

impl SchemeSpec {
    pub fn new(family: SchemeFamily, kappa: KappaChoice) -> Result<Self> {
        let spec = Self {
            family,
            kappa_x: kappa,
            kappa_y: kappa,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if let SchemeFamily::Ctu { theta } = self.family {
            if !(0.0..=1.0).contains(&theta) {
                return Err(Error::InvalidScheme(format!(
                    "CTU blend theta = {theta} is outside [0, 1]"
                )));
            }
        }
        for k in [self.kappa_x, self.kappa_y] {
            if let KappaChoice::Constant(v) = k {
                if !v.is_finite() {
                    return Err(Error::InvalidScheme(format!("kappa = {v} is not finite")));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> Dim {
        self.family.dim()
    }

    /// `(si2d)` with `kappa = sign` on both axes, the fallback next to
    /// implicit-domain boundaries.
    pub fn upwind_sign_2d() -> Self {
        Self {
            family: SchemeFamily::SemiImplicit2D,
            kappa_x: KappaChoice::UpwindSign,
            kappa_y: KappaChoice::UpwindSign,
        }
    }

    /// Row at a node with Courant numbers `(c, d)`. `c_upwind` is the x
    /// Courant number at the upwind neighbour and is read only by the fully
    /// implicit scheme.
    pub fn row(&self, center: (usize, usize), c: f64, d: f64, c_upwind: f64) -> StencilRow {
        match self.family {
            SchemeFamily::FullyImplicit1D => {
                let mut r = fully_implicit_row_1d(center.0, c, c_upwind, self.kappa_x);
                r.center = center;
                r
            }
            SchemeFamily::SemiImplicit1D => {
                let mut r = semi_implicit_row_1d(center.0, c, self.kappa_x);
                r.center = center;
                r
            }
            SchemeFamily::SemiImplicit2D => {
                semi_implicit_row_2d(center, c, d, self.kappa_x, self.kappa_y)
            }
            SchemeFamily::Ctu { theta } => ctu_row(center, c, d, self.kappa_x, self.kappa_y, theta),
        }
    }

    /// Human readable label, e.g. `si2d/k3` or `ctu(1)/k3`.
    pub fn label(&self) -> String {
        let fam = match self.family {
            SchemeFamily::Ctu { theta } => format!("ctu({theta})"),
            f => f.name().to_string(),
        };
        if self.kappa_x == self.kappa_y {
            format!("{fam}/{}", self.kappa_x.label())
        } else {
            format!("{fam}/{},{}", self.kappa_x.label(), self.kappa_y.label())
        }
    }

    /// Named presets: `siLW1d`, `siF1d`, `siQ1d`, `fiQ1d`, `siLW2d`,
    /// `siF2d`, `siQ2d`, `ctuQ` (CTU, theta = 1, third-order kappa).
    pub fn preset(name: &str) -> Option<Self> {
        use KappaChoice::*;
        let (family, kappa) = match name {
            "siLW1d" => (SchemeFamily::SemiImplicit1D, UpwindSign),
            "siF1d" => (SchemeFamily::SemiImplicit1D, Central),
            "siQ1d" => (SchemeFamily::SemiImplicit1D, ThirdOrderSemiImplicit),
            "fiQ1d" => (SchemeFamily::FullyImplicit1D, ThirdOrderImplicit),
            "siLW2d" => (SchemeFamily::SemiImplicit2D, UpwindSign),
            "siF2d" => (SchemeFamily::SemiImplicit2D, Central),
            "siQ2d" => (SchemeFamily::SemiImplicit2D, ThirdOrderSemiImplicit),
            "ctuQ" => (SchemeFamily::Ctu { theta: 1.0 }, ThirdOrderSemiImplicit),
            _ => return None,
        };
        Some(Self {
            family,
            kappa_x: kappa,
            kappa_y: kappa,
        })
    }

    pub const PRESETS: [&'static str; 8] = [
        "siLW1d", "siF1d", "siQ1d", "fiQ1d", "siLW2d", "siF2d", "siQ2d", "ctuQ",
    ];
}

/// Parses a family name as used in configs: `si1d`, `si2d`, `fi1d`, `ctu`.
pub fn parse_family(name: &str, theta: Option<f64>) -> Option<SchemeFamily> {
    match (name, theta) {
        ("si1d", None) => Some(SchemeFamily::SemiImplicit1D),
        ("si2d", None) => Some(SchemeFamily::SemiImplicit2D),
        ("fi1d", None) => Some(SchemeFamily::FullyImplicit1D),
        ("ctu", t) => Some(SchemeFamily::Ctu {
            theta: t.unwrap_or(1.0),
        }),
        _ => None,
    }
}

pub fn semi_implicit_row_2d(
    center: (usize, usize),
    c: f64,
    d: f64,
    kappa_x: KappaChoice,
    kappa_y: KappaChoice,
) -> StencilRow {
    let mut row = StencilRow::identity(center);
    add_semi_implicit_axis(&mut row, Axis::X, c, kappa_x.value(c));
    add_semi_implicit_axis(&mut row, Axis::Y, d, kappa_y.value(d));
    row.prune();
    row
}

pub fn ctu_row(
    center: (usize, usize),
    c: f64,
    d: f64,
    kappa_x: KappaChoice,
    kappa_y: KappaChoice,
    theta: f64,
) -> StencilRow {
    let mut row = semi_implicit_row_2d(center, c, d, kappa_x, kappa_y);
    let a = (c * d).abs();
    if a == 0.0 {
        return row;
    }
    let (sx, sy) = (sign(c) as i32, sign(d) as i32);
    let (ux, uy) = (-sx, -sy);
    for (o, v) in [
        (Offset::ZERO, 1.0),
        (Offset::new(ux, uy), 1.0),
        (Offset::new(ux, 0), -1.0),
        (Offset::new(0, uy), -1.0),
    ] {
        row.implicit.add(o, a / 6.0 * v);
    }
    let cross = [
        Offset::new(1, 0),
        Offset::new(0, 1),
        Offset::new(-1, 0),
        Offset::new(0, -1),
    ];
    let w1 = theta * a / 12.0;
    if w1 != 0.0 {
        row.explicit.add(Offset::ZERO, 2.0 * w1);
        row.explicit.add(Offset::new(sx, sy), w1);
        row.explicit.add(Offset::new(-sx, -sy), w1);
        for o in cross {
            row.explicit.add(o, -w1);
        }
    }
    let w2 = (1.0 - theta) * a / 12.0;
    if w2 != 0.0 {
        row.explicit.add(Offset::ZERO, -2.0 * w2);
        row.explicit.add(Offset::new(-sx, sy), -w2);
        row.explicit.add(Offset::new(sx, -sy), -w2);
        for o in cross {
            row.explicit.add(o, w2);
        }
    }
    row.prune();
    row
}
