//! Signed distance to the slotted disc.

use std::f64::consts::PI;

pub const CENTER: (f64, f64) = (0.0, 0.5);
pub const RADIUS: f64 = 0.3;
pub const SLOT_HALF_WIDTH: f64 = 0.05;
pub const SLOT_HEIGHT: f64 = 0.5;

/// Bottom of the slot. Its corners lie on the circle.
pub fn slot_bottom() -> f64 {
    CENTER.1 - (RADIUS * RADIUS - SLOT_HALF_WIDTH * SLOT_HALF_WIDTH).sqrt()
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

/// The slot, continued downwards through the thin circular segment under
/// its bottom chord.
fn in_slot(x: f64, y: f64) -> bool {
    x.abs() < SLOT_HALF_WIDTH && y < slot_bottom() + SLOT_HEIGHT
}

/// Negative inside the slotted disc, positive outside; the magnitude is the
/// Euclidean distance to its boundary.
pub fn zalesak_signed_distance(x: f64, y: f64) -> f64 {
    let yr = slot_bottom();
    let top = yr + SLOT_HEIGHT;
    let (px, py) = (x - CENTER.0, y - CENTER.1);
    let r = px.hypot(py);

    // the arc misses the bottom piece between the slot corners
    let gap = (SLOT_HALF_WIDTH / RADIUS).asin();
    let angle = py.atan2(px);
    let corner_l = (-SLOT_HALF_WIDTH, yr);
    let corner_r = (SLOT_HALF_WIDTH, yr);
    let arc = if r > 0.0 && (angle + 0.5 * PI).abs() > gap {
        (r - RADIUS).abs()
    } else {
        segment_distance((x, y), corner_l, corner_l).min(segment_distance(
            (x, y),
            corner_r,
            corner_r,
        ))
    };
    let walls = segment_distance((x, y), corner_l, (-SLOT_HALF_WIDTH, top))
        .min(segment_distance((x, y), corner_r, (SLOT_HALF_WIDTH, top)))
        .min(segment_distance(
            (x, y),
            (-SLOT_HALF_WIDTH, top),
            (SLOT_HALF_WIDTH, top),
        ));
    let d = arc.min(walls);
    let inside = r < RADIUS && !in_slot(x, y);
    if inside {
        -d
    } else {
        d
    }
}
