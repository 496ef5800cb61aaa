//! The Weil domain (positive semidefinite normalized Toeplitz matrices), the
//! Ihara half-spaces and lines, and conversions between point counts and
//! Gram coordinates.

use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::gram::{leading_minors_raw, toeplitz_normalized, GramPoint, SquareMatrix};

/// Default strict-positivity margin for the open domain test.
pub const DEFAULT_OPEN_TOL: f64 = 1e-12;
/// Default eigenvalue slack for the closed domain test.
pub const DEFAULT_CLOSED_TOL: f64 = 1e-9;

/// Genus of the curves under consideration. `Infinite` is the limit line
/// on which the additive Ihara terms vanish exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Genus {
    Finite(f64),
    Infinite,
}

impl Genus {
    pub fn finite(self) -> Option<f64> {
        match self {
            Genus::Finite(g) => Some(g),
            Genus::Infinite => None,
        }
    }

    fn validate(self) -> Result<()> {
        match self {
            Genus::Finite(g) if !(g.is_finite() && g > 0.0) => Err(invalid(format!(
                "genus must be a positive finite number, got {g}"
            ))),
            _ => Ok(()),
        }
    }
}

impl From<f64> for Genus {
    fn from(g: f64) -> Self {
        Genus::Finite(g)
    }
}

/// The line `h_i(x_1, x_i) = 0, 2 <= i <= n`, parametrized by `x_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IharaLine {
    q: u64,
    genus: Genus,
    n: usize,
    alpha: f64,
    /// `α^{i-1}` for `i = 1..=n`.
    slope: Vec<f64>,
    /// Additive term of coordinate `i`; zero for `i = 1` and infinite genus.
    offset: Vec<f64>,
}

impl IharaLine {
    pub fn new(q: u64, genus: impl Into<Genus>, n: usize) -> Result<Self> {
        let genus = genus.into();
        if q < 2 {
            return Err(invalid(format!("field size must be at least 2, got {q}")));
        }
        if n == 0 {
            return Err(invalid("order must be at least 1"));
        }
        genus.validate()?;
        let qf = q as f64;
        let sqrt_q = qf.sqrt();
        let alpha = 1.0 / sqrt_q;
        let slope = (0..n).map(|k| alpha.powi(k as i32)).collect();
        let offset = (1..=n)
            .map(|i| match (i, genus) {
                (1, _) | (_, Genus::Infinite) => 0.0,
                (_, Genus::Finite(g)) => {
                    (qf.powi(i as i32 - 1) - 1.0) / (2.0 * g * sqrt_q.powi(i as i32 - 2))
                }
            })
            .collect();
        Ok(Self {
            q,
            genus,
            n,
            alpha,
            slope,
            offset,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// `α = 1/√q`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Direction vector `(1, α, ..., α^{n-1})`.
    pub fn direction(&self) -> &[f64] {
        &self.slope
    }

    pub(crate) fn coords(&self, x1: f64) -> Vec<f64> {
        self.slope
            .iter()
            .zip(&self.offset)
            .map(|(s, o)| s * x1 + o)
            .collect()
    }

    /// The point of the line with first coordinate `x1`.
    pub fn point(&self, x1: f64) -> Result<GramPoint> {
        GramPoint::new(self.coords(x1))
    }

    /// `h_i(x_1, x_i)` for `i = 2..=n`; the point is in the Ihara domain when
    /// all of them are `<= 0`.
    pub fn slacks(&self, point: &GramPoint) -> Result<Vec<f64>> {
        if point.order() != self.n {
            return Err(invalid(format!(
                "point has order {} but the line has order {}",
                point.order(),
                self.n
            )));
        }
        let x = point.coords();
        Ok((1..self.n)
            .map(|k| x[k] - self.slope[k] * x[0] - self.offset[k])
            .collect())
    }
}

/// The point of `line` with first coordinate `x1`.
pub fn ihara_point(line: &IharaLine, x1: f64) -> Result<GramPoint> {
    line.point(x1)
}

pub fn ihara_slacks(line: &IharaLine, point: &GramPoint) -> Result<Vec<f64>> {
    line.slacks(point)
}

/// Point counts `N_i = #X(F_{q^i})`, `i = 1..=n`, of a curve of genus `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveCounts {
    pub q: u64,
    pub g: u64,
    pub counts: Vec<u64>,
}

impl CurveCounts {
    pub fn new(q: u64, g: u64, counts: Vec<u64>) -> Result<Self> {
        if q < 2 {
            return Err(invalid(format!("field size must be at least 2, got {q}")));
        }
        if counts.is_empty() {
            return Err(invalid("at least one point count is required"));
        }
        Ok(Self { q, g, counts })
    }

    /// Extension degrees `i >= 2` with `N_i < N_1`, which no curve satisfies.
    pub fn ihara_violations(&self) -> Vec<usize> {
        let n1 = self.counts[0];
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &ni)| ni < n1)
            .map(|(k, _)| k + 1)
            .collect()
    }
}

/// `x_i = (q^i + 1 - N_i) / (2 g q^{i/2})`.
pub fn point_from_counts(c: &CurveCounts) -> Result<GramPoint> {
    if c.g == 0 {
        return Err(invalid("genus 0 cannot be normalized"));
    }
    let q = c.q as f64;
    let g = c.g as f64;
    let x = c
        .counts
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let i = k as i32 + 1;
            (q.powi(i) + 1.0 - n as f64) / (2.0 * g * q.sqrt().powi(i))
        })
        .collect();
    GramPoint::new(x)
}

/// Integer upper bound `floor(q + 1 - 2 g √q μ + 1e-9)` on `#X(F_q)`.
///
/// The `1e-9` guard absorbs rounding when the real bound is an exact integer.
pub fn count_bound_from_mu(q: u64, g: f64, mu: f64) -> i64 {
    (real_bound_from_mu(q, g, mu) + 1e-9).floor() as i64
}

/// `q + 1 - 2 g √q μ`.
pub fn real_bound_from_mu(q: u64, g: f64, mu: f64) -> f64 {
    let qf = q as f64;
    qf + 1.0 - 2.0 * g * qf.sqrt() * mu
}

/// Upper bound for `#X(F_{q^2})` given `N_1 = #X(F_q)`:
/// `q^2 + 1 + 2 g q - (N_1 - (q + 1))^2 / g`. Requires `g >= 1`.
pub fn second_extension_bound(q: u64, g: f64, n1: f64) -> f64 {
    let qf = q as f64;
    qf * qf + 1.0 + 2.0 * g * qf - (n1 - (qf + 1.0)).powi(2) / g
}

/// Membership of a point in the open and closed Weil domains.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainVerdict {
    pub inside_open: bool,
    pub inside_closed: bool,
    pub minors: Vec<f64>,
    pub min_eigenvalue: f64,
}

fn verdict(point: &GramPoint, open_tol: f64, closed_tol: f64) -> DomainVerdict {
    let minors = leading_minors_raw(point.coords());
    let min_eigenvalue = min_eigenvalue(&point.toeplitz());
    let inside_open = minors.iter().all(|&m| m > open_tol);
    let inside_closed = inside_open || min_eigenvalue >= -closed_tol;
    DomainVerdict {
        inside_open,
        inside_closed,
        minors,
        min_eigenvalue,
    }
}

/// Open domain: every leading minor `G_i` exceeds `tol`.
pub fn in_open_domain(point: &GramPoint, tol: f64) -> DomainVerdict {
    verdict(point, tol, DEFAULT_CLOSED_TOL)
}

/// Closed domain: the smallest eigenvalue of `T_{n+1}(1, x)` is `>= -tol`.
pub fn in_closed_domain(point: &GramPoint, tol: f64) -> DomainVerdict {
    verdict(point, DEFAULT_OPEN_TOL, tol)
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &SquareMatrix) -> f64 {
    let n = m.size();
    DMatrix::from_row_slice(n, n, m.entries())
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `λ_min(m) >= -tol`, decided by attempting a Cholesky factorization of
/// `m + tol·I` (positive definite exactly when `λ_min(m) > -tol`).
pub fn is_positive_semidefinite(m: &SquareMatrix, tol: f64) -> bool {
    let n = m.size();
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = m[(j, j)] + tol;
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    true
}

/// Fast closed-domain membership for raw coordinates.
pub(crate) fn closed_contains(x: &[f64], tol: f64) -> bool {
    is_positive_semidefinite(&toeplitz_normalized(x), tol)
}

/// Closed-domain membership by enumerating every principal minor of
/// `T_{n+1}(1, x)` (`2^{n+1} - 1` of them). Exponential; meant for small `n`.
pub fn closed_by_principal_minors(point: &GramPoint, tol: f64) -> bool {
    let t = point.toeplitz();
    let size = t.size();
    (1u32..(1 << size)).all(|mask| {
        let keep: Vec<usize> = (0..size).filter(|&i| mask & (1 << i) != 0).collect();
        t.principal_submatrix(&keep).det() >= -tol
    })
}
