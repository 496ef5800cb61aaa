//! Bounds relating the point counts of curves linked by coverings.

use crate::error::{invalid, Result};

fn check_genus(name: &str, g: f64) -> Result<()> {
    if g.is_finite() && g >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!(
            "{name} must be finite and nonnegative, got {g}"
        )))
    }
}

/// `|#X(F_q) - #Y(F_q)| <= 2(g_X - g_Y)√q` for a covering `X → Y`.
pub fn relative_weil(q: u64, gx: f64, gy: f64) -> Result<f64> {
    check_genus("gX", gx)?;
    check_genus("gY", gy)?;
    if gx < gy {
        return Err(invalid(format!(
            "a covering needs gX >= gY, got gX = {gx}, gY = {gy}"
        )));
    }
    Ok(2.0 * (gx - gy) * (q as f64).sqrt())
}

/// Upper bound on `#X(F_{q²}) - #Y(F_{q²})` given
/// `dn1 = #X(F_q) - #Y(F_q)`: `2(g_X - g_Y)q - dn1²/(g_X - g_Y)`.
pub fn relative_order2(q: u64, gx: f64, gy: f64, dn1: f64) -> Result<f64> {
    check_genus("gX", gx)?;
    check_genus("gY", gy)?;
    if gx <= gy {
        return Err(invalid(format!("need gX > gY, got gX = {gx}, gY = {gy}")));
    }
    if !dn1.is_finite() {
        return Err(invalid("point count difference must be finite"));
    }
    let dg = gx - gy;
    Ok(2.0 * dg * q as f64 - dn1 * dn1 / dg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberProductBound {
    pub value: f64,
    /// Set when `value < 0`: no curve can satisfy the smoothness hypothesis
    /// with these genera.
    pub hypothesis_violated: bool,
}

/// `2(g_X - g_{Y_1} - g_{Y_2} + g_Z)√q` for a cartesian square of
/// coverings `X → Y_i → Z`.
pub fn fiber_product_bound(
    q: u64,
    gx: f64,
    gy1: f64,
    gy2: f64,
    gz: f64,
) -> Result<FiberProductBound> {
    for (name, g) in [("gX", gx), ("gY1", gy1), ("gY2", gy2), ("gZ", gz)] {
        check_genus(name, g)?;
    }
    let value = 2.0 * (gx - gy1 - gy2 + gz) * (q as f64).sqrt();
    Ok(FiberProductBound {
        value,
        hypothesis_violated: value < 0.0,
    })
}

impl FiberProductBound {
    pub fn warning(&self) -> Option<String> {
        self.hypothesis_violated.then(|| {
            format!(
                "right-hand side {} is negative: the smoothness hypothesis cannot hold",
                self.value
            )
        })
    }
}
