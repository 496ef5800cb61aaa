//! Generalized Weil bounds for the number of rational points of curves over
//! finite fields.
//!
//! A curve `X/F_q` of genus `g` with `N_i = #X(F_{q^i})` gives the point
//! `x = (x_1, …, x_n)`, `x_i = (q^i + 1 - N_i)/(2g q^{i/2})`. The Toeplitz
//! matrix `T(1, x_1, …, x_n)` is positive semidefinite, and `N_i >= N_1`
//! puts `x` on one side of hyperplanes through the Ihara line. Minimizing
//! `x_1` over both constraints bounds `N_1` from above:
//!
//! ```
//! use weil_core::{best_bound, SolverOptions, DEFAULT_MAX_ORDER};
//!
//! let r = best_bound(2, 14.0, DEFAULT_MAX_ORDER, &SolverOptions::default()).unwrap();
//! assert_eq!(r.best_int, 16);
//! assert_eq!(r.best_order, 6);
//! ```

pub mod bounds;
pub mod domain;
pub mod error;
pub mod gram;
pub mod optimizer;

pub use bounds::{best_bound, order_n_bound, BestBoundReport, OrderBound, DEFAULT_MAX_ORDER};
pub use domain::{Genus, IharaLine};
pub use error::{Result, WeilError};
pub use gram::GramPoint;
pub use optimizer::{mu_infinity, mu_n, threshold_genus, SolverOptions};
