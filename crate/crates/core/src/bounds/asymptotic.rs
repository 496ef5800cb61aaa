//! Upper bounds on Ihara's constant `A(q) = limsup #X(F_q)/g`, and the
//! Tsfasman defect of a tower.

use super::closed::{Order3Coefficients, Order3Quadratic};
use crate::error::{invalid, Result};
use crate::optimizer::{mu_infinity, SolverOptions};

/// `-2√q μ_n^∞`, the order-`n` upper bound on `A(q)`.
pub fn asymptotic_order_bound(q: u64, n: usize, opts: &SolverOptions) -> Result<f64> {
    if n == 0 {
        return Err(invalid("order must be at least 1"));
    }
    let s = (q as f64).sqrt();
    if n == 1 {
        return Ok(2.0 * s);
    }
    Ok(-2.0 * s * mu_infinity(q, n, opts)?)
}

/// `(√(8q+1) - 1)/2`.
pub fn ihara_asymptotic(q: u64) -> f64 {
    ((8.0 * q as f64 + 1.0).sqrt() - 1.0) / 2.0
}

/// Order-3 asymptotic bound from the limiting quadratic.
pub fn order3_asymptotic(q: u64) -> f64 {
    -2.0 * (q as f64).sqrt() * Order3Quadratic::limit(q).negative_root()
}

/// `(√(5 + 8/√q - 1/q²) - 1 + 1/q)√q`, the printed order-3 asymptotic
/// formula. Larger than [`ihara_asymptotic`] for every `q`; kept for
/// comparison only.
pub fn printed_asymptotic_order3(q: u64) -> f64 {
    let qf = q as f64;
    (Order3Coefficients::new(q).a.sqrt() - 1.0 + 1.0 / qf) * qf.sqrt()
}

/// Drinfeld–Vlăduţ bound `√q - 1`.
pub fn drinfeld_vladut(q: u64) -> f64 {
    (q as f64).sqrt() - 1.0
}

/// Asymptotic point-count profile of a tower: `β_r = lim B_r/g` where `B_r`
/// counts the degree-`r` places.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerSpec {
    q: u64,
    betas: Vec<f64>,
}

impl TowerSpec {
    pub fn new(q: u64, betas: Vec<f64>) -> Result<Self> {
        if q < 2 {
            return Err(invalid(format!("field size must be at least 2, got {q}")));
        }
        if betas.is_empty() {
            return Err(invalid("at least one beta is required"));
        }
        if let Some(b) = betas.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
            return Err(invalid(format!(
                "betas must be finite and nonnegative, got {b}"
            )));
        }
        Ok(Self { q, betas })
    }

    /// The tower meeting Drinfeld–Vlăduţ: `β_1 = √q - 1`, all others zero.
    pub fn optimal(q: u64) -> Result<Self> {
        Self::new(q, vec![drinfeld_vladut(q)])
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `β_1, …, β_R`.
    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    fn degrees(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.betas.iter().enumerate().map(|(i, &b)| (i + 1, b))
    }
}

/// `δ = 1 - Σ r β_r/(q^{r/2} - 1)`. Negative exactly when the spec
/// violates Tsfasman's bound.
pub fn tsfasman_defect(t: &TowerSpec) -> f64 {
    let s = (t.q as f64).sqrt();
    1.0 - t
        .degrees()
        .map(|(r, b)| r as f64 * b / (s.powi(r as i32) - 1.0))
        .sum::<f64>()
}

/// Truncation `1 - Σ_{rs <= m-1} (1 - rs/m) r β_r q^{-rs/2}`, which tends
/// to the defect as `m → ∞`.
pub fn tsfasman_partial(t: &TowerSpec, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    let s = (t.q as f64).sqrt();
    let mf = m as f64;
    let mut sum = 0.0;
    for (r, beta) in t.degrees().filter(|&(r, _)| r < m) {
        let inner: f64 = (1..=(m - 1) / r)
            .map(|k| {
                let rs = (r * k) as f64;
                (1.0 - rs / mf) * s.powf(-rs)
            })
            .sum();
        sum += r as f64 * beta * inner;
    }
    Ok(1.0 - sum)
}

/// Whether the spec breaks `Σ r β_r/(q^{r/2} - 1) <= 1`.
pub fn violates_tsfasman(t: &TowerSpec) -> bool {
    tsfasman_defect(t) < 0.0
}
