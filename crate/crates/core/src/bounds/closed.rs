//! Closed-form bounds of orders 1, 2 and 3.

use super::{Inapplicable, OrderBound};
use crate::domain::real_bound_from_mu;

/// `g_2 = √q(√q - 1)/2`, genus above which the order-2 bound applies.
pub fn g2(q: u64) -> f64 {
    let s = (q as f64).sqrt();
    s * (s - 1.0) / 2.0
}

/// `g_3 = √q(q - 1)/√2`.
pub fn g3(q: u64) -> f64 {
    let qf = q as f64;
    qf.sqrt() * (qf - 1.0) / std::f64::consts::SQRT_2
}

fn mu_from_real(q: u64, g: f64, real: f64) -> f64 {
    let qf = q as f64;
    (qf + 1.0 - real) / (2.0 * g * qf.sqrt())
}

/// Weil bound `q + 1 + 2g√q`.
pub fn weil_order1(q: u64, g: f64) -> OrderBound {
    let qf = q as f64;
    let real = qf + 1.0 + 2.0 * g * qf.sqrt();
    OrderBound::applicable(1, -1.0, real, true)
}

/// Ihara bound `q + 1 + (√((8q+1)g² + 4q(q-1)g) - g)/2`, for `g >= g_2`.
pub fn ihara_order2(q: u64, g: f64) -> OrderBound {
    if g.is_nan() || g <= 0.0 || g < g2(q) {
        return OrderBound::not_applicable(2, Inapplicable::BelowThreshold);
    }
    let qf = q as f64;
    let disc = (8.0 * qf + 1.0) * g * g + 4.0 * qf * (qf - 1.0) * g;
    let real = qf + 1.0 + (disc.sqrt() - g) / 2.0;
    OrderBound::applicable(2, mu_from_real(q, g, real), real, true)
}

/// Coefficients of `(1 + 2α)x² + bx + c = 0`, whose negative root is `μ_3`.
///
/// Expanded from `(x + αx + (q-1)/2g)² = (1 + x)(1 + α²x + (q²-1)/(2g√q))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order3Quadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Order3Quadratic {
    pub fn new(q: u64, g: f64) -> Self {
        let qf = q as f64;
        let alpha = 1.0 / qf.sqrt();
        let k = (qf * qf - 1.0) / (2.0 * g * qf.sqrt());
        Self {
            a: 1.0 + 2.0 * alpha,
            b: (qf - 1.0) * (1.0 + alpha) / g - (1.0 + alpha * alpha) - k,
            c: (qf - 1.0).powi(2) / (4.0 * g * g) - 1.0 - k,
        }
    }

    /// The `g → ∞` limit `(1 + 2α)x² - (1 + α²)x - 1`.
    pub fn limit(q: u64) -> Self {
        let alpha = 1.0 / (q as f64).sqrt();
        Self {
            a: 1.0 + 2.0 * alpha,
            b: -(1.0 + alpha * alpha),
            c: -1.0,
        }
    }

    pub fn negative_root(&self) -> f64 {
        let disc = self.b * self.b - 4.0 * self.a * self.c;
        // c < 0 keeps the discriminant positive; the form below avoids
        // cancellation when b > 0.
        if self.b > 0.0 {
            (-self.b - disc.sqrt()) / (2.0 * self.a)
        } else {
            2.0 * self.c / (-self.b + disc.sqrt())
        }
    }
}

/// Order-3 bound from the quadratic above, for `g >= g_3`.
pub fn order3_closed(q: u64, g: f64) -> OrderBound {
    if g.is_nan() || g <= 0.0 || g < g3(q) * (1.0 - 1e-12) {
        return OrderBound::not_applicable(3, Inapplicable::BelowThreshold);
    }
    let mu = Order3Quadratic::new(q, g).negative_root();
    OrderBound::applicable(3, mu, real_bound_from_mu(q, g, mu), true)
}

/// The coefficients `a(q), b(q), c(q), d(q)` of the radical form of the
/// order-3 bound, transcribed literally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order3Coefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Order3Coefficients {
    pub fn new(q: u64) -> Self {
        let qf = q as f64;
        let s = qf.sqrt();
        Self {
            a: 5.0 + 8.0 / s - 1.0 / (qf * qf),
            b: (qf - 1.0) / (qf * s) * (qf * qf - 4.0 * qf * s + 2.0 * qf + 4.0 * s - 1.0),
            c: (qf - 1.0) / (4.0 * qf)
                * (qf.powi(3) - 5.0 * qf * qf - 8.0 * qf * s - 5.0 * qf - 8.0 * s + 1.0),
            d: 2.0 * s * (qf - 1.0).powi(2) / qf,
        }
    }

    fn radical(&self, g: f64) -> f64 {
        (self.a + self.b / g + self.c / (g * g)).sqrt()
    }
}

/// `μ_3` from the printed radical formula. Disagrees with the quadratic;
/// kept only for comparison (at `q = 2, g = 1` it gives about `-1.459`).
pub fn order3_mu_as_printed(q: u64, g: f64) -> f64 {
    let qf = q as f64;
    let k = Order3Coefficients::new(q);
    ((qf - 1.0) / qf - 2.0 * qf.sqrt() * (qf - 1.0).powi(2) / (g * qf) - k.radical(g)) / 2.0
}

/// Real bound from the printed radical formula, `q + 1 + (√(a + b/g + c/g²) - 1 + 1/q + d/g) g√q`.
pub fn order3_bound_as_printed(q: u64, g: f64) -> f64 {
    let qf = q as f64;
    let k = Order3Coefficients::new(q);
    qf + 1.0 + (k.radical(g) - 1.0 + 1.0 / qf + k.d / g) * g * qf.sqrt()
}
