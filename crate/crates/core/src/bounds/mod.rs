//! Upper bounds on `#X(F_q)` for a curve of genus `g`, order by order, and
//! the selection of the best one.

mod asymptotic;
mod closed;
mod relative;

pub use asymptotic::{
    asymptotic_order_bound, drinfeld_vladut, ihara_asymptotic, order3_asymptotic,
    printed_asymptotic_order3, tsfasman_defect, tsfasman_partial, violates_tsfasman, TowerSpec,
};
pub use closed::{
    g2, g3, ihara_order2, order3_bound_as_printed, order3_closed, order3_mu_as_printed,
    weil_order1, Order3Coefficients, Order3Quadratic,
};
pub use relative::{fiber_product_bound, relative_order2, relative_weil, FiberProductBound};

use std::fmt;

use crate::domain::{count_bound_from_mu, real_bound_from_mu};
use crate::error::{invalid, Result};
use crate::optimizer::{mu_n, SolverOptions};

/// Default highest order tried by [`best_bound`].
pub const DEFAULT_MAX_ORDER: usize = 12;

/// Slack used when comparing real bounds for the best order.
pub const TIE_TOL: f64 = 1e-9;

/// Why an order gives no bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inapplicable {
    /// Genus below the order's threshold (closed forms).
    BelowThreshold,
    /// The Ihara line misses the closed Weil domain.
    NoFeasiblePoint,
    /// The line enters the domain through `G_n^+ = 0`.
    PositiveSheet,
    /// The minimizer has `x_1 >= 0`.
    NonNegativeMinimum,
    /// The optimality criteria fail at the minimizer.
    CriteriaFailed,
}

impl fmt::Display for Inapplicable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Inapplicable::BelowThreshold => "genus below threshold",
            Inapplicable::NoFeasiblePoint => "no feasible point",
            Inapplicable::PositiveSheet => "boundary reached on G+ sheet",
            Inapplicable::NonNegativeMinimum => "nonnegative minimum",
            Inapplicable::CriteriaFailed => "criteria failed",
        })
    }
}

/// The order-`n` bound. `mu`, `real_bound` and `int_bound` are filled
/// whenever a minimizer was located, even if the order is not applicable.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderBound {
    pub n: usize,
    pub mu: Option<f64>,
    pub real_bound: Option<f64>,
    pub int_bound: Option<i64>,
    pub applicable: bool,
    pub certified: bool,
    pub reason: Option<Inapplicable>,
}

impl OrderBound {
    pub(crate) fn applicable(n: usize, mu: f64, real: f64, certified: bool) -> Self {
        Self {
            n,
            mu: Some(mu),
            real_bound: Some(real),
            int_bound: Some((real + 1e-9).floor() as i64),
            applicable: true,
            certified,
            reason: None,
        }
    }

    pub(crate) fn not_applicable(n: usize, reason: Inapplicable) -> Self {
        Self {
            n,
            mu: None,
            real_bound: None,
            int_bound: None,
            applicable: false,
            certified: false,
            reason: Some(reason),
        }
    }
}

/// Order-`n` bound from the numerical minimization of `x_1`.
pub fn order_n_bound(q: u64, g: f64, n: usize, opts: &SolverOptions) -> Result<OrderBound> {
    if n == 0 {
        return Err(invalid("order must be at least 1"));
    }
    let Some(m) = mu_n(q, g, n, opts)? else {
        return Ok(OrderBound::not_applicable(n, Inapplicable::NoFeasiblePoint));
    };
    let reason = if !m.on_minus_sheet {
        Some(Inapplicable::PositiveSheet)
    } else if m.mu >= 0.0 {
        Some(Inapplicable::NonNegativeMinimum)
    } else if !m.report.certified {
        Some(Inapplicable::CriteriaFailed)
    } else {
        None
    };
    Ok(OrderBound {
        n,
        mu: Some(m.mu),
        real_bound: Some(real_bound_from_mu(q, g, m.mu)),
        int_bound: Some(count_bound_from_mu(q, g, m.mu)),
        applicable: reason.is_none(),
        certified: m.report.certified,
        reason,
    })
}

/// All orders `1..=n_max` for one `(q, g)` and the best of them.
#[derive(Debug, Clone, PartialEq)]
pub struct BestBoundReport {
    pub q: u64,
    pub g: f64,
    pub per_order: Vec<OrderBound>,
    /// Smallest integer bound over applicable orders.
    pub best_int: i64,
    /// Smallest order whose real bound is within [`TIE_TOL`] of the minimum.
    pub best_order: usize,
}

impl BestBoundReport {
    pub fn order(&self, n: usize) -> Option<&OrderBound> {
        self.per_order.get(n.checked_sub(1)?)
    }

    /// Real bound of the best order.
    pub fn best_real(&self) -> f64 {
        self.order(self.best_order)
            .and_then(|b| b.real_bound)
            .unwrap_or(f64::NAN)
    }
}

/// Evaluates orders `1..=n_max` and picks the best applicable one.
pub fn best_bound(q: u64, g: f64, n_max: usize, opts: &SolverOptions) -> Result<BestBoundReport> {
    if n_max == 0 {
        return Err(invalid("maximal order must be at least 1"));
    }
    let per_order = (1..=n_max)
        .map(|n| order_n_bound(q, g, n, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(select_best(q, g, per_order))
}

/// Builds the report from already computed orders. Order 1 must be present
/// and applicable.
pub fn select_best(q: u64, g: f64, per_order: Vec<OrderBound>) -> BestBoundReport {
    let usable = || per_order.iter().filter(|b| b.applicable);
    let best_int = usable()
        .filter_map(|b| b.int_bound)
        .min()
        .unwrap_or(i64::MAX);
    let min_real = usable()
        .filter_map(|b| b.real_bound)
        .fold(f64::INFINITY, f64::min);
    let best_order = usable()
        .find(|b| b.real_bound.is_some_and(|r| r <= min_real + TIE_TOL))
        .map_or(1, |b| b.n);
    BestBoundReport {
        q,
        g,
        per_order,
        best_int,
        best_order,
    }
}
