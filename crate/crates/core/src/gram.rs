//! Normalized symmetric Toeplitz matrices and the factorization of their
//! determinants.
//!
//! A point `x = (x_1, ..., x_n)` stands for the Gram matrix of the
//! normalized Frobenius classes, which is the symmetric Toeplitz matrix
//! `T_{n+1}(1, x_1, ..., x_n)`. Its determinant `G_n` splits as
//! `G_n = G_n^- * G_n^+`, each factor being the determinant of a smaller
//! Toeplitz-plus-Hankel block.
//!
//! Index conventions: coordinates are 1-indexed in the math (`x_1` first) and
//! stored 0-indexed. Inside this module the helper vector
//! `v = (1, x_1, ..., x_n)` is used so that `v[k] = x_k` and `v[0] = 1`.
//!
//! * `n + 1 = 2m` (n odd): `G_n^±` is the determinant of the `m × m` matrix
//!   with entries `v[|i-j|] ± v[n-(i+j)]`.
//! * `n + 1 = 2m + 1` (n even): `G_n^+` is the `m × m` determinant with
//!   entries `v[|i-j|] - v[n-(i+j)]`; `G_n^-` is the `(m+1) × (m+1)`
//!   determinant whose leading `m × m` block has entries
//!   `v[|i-j|] + v[n-(i+j)]`, whose last column is `v[m-i]`, whose last row
//!   is `2 v[m-j]` and whose corner is `1`.

use std::fmt;
use std::ops::Index;

use crate::error::{invalid, Result};

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl SquareMatrix {
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(f(i, j));
            }
        }
        Self { size, entries }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.size, |i, j| self[(j, i)])
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Principal submatrix keeping the rows and columns listed in `keep`.
    pub fn principal_submatrix(&self, keep: &[usize]) -> Self {
        Self::from_fn(keep.len(), |i, j| self[(keep[i], keep[j])])
    }

    /// Submatrix with one row and one column removed.
    fn without(&self, row: usize, col: usize) -> Self {
        let size = self.size - 1;
        Self::from_fn(size, |i, j| {
            let r = if i < row { i } else { i + 1 };
            let c = if j < col { j } else { j + 1 };
            self[(r, c)]
        })
    }

    /// Matrix of signed cofactors `(-1)^{i+j} det(M without row i, col j)`.
    ///
    /// Computed entry by entry, so it stays meaningful when `M` is singular
    /// (unlike `det(M) * M^{-1}`).
    pub fn cofactors(&self) -> Self {
        if self.size == 1 {
            return Self::identity(1);
        }
        Self::from_fn(self.size, |i, j| {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            sign * self.without(i, j).det()
        })
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    /// Sizes 0, 1 and 2 use the closed forms.
    pub fn det(&self) -> f64 {
        match self.size {
            0 => return 1.0,
            1 => return self.entries[0],
            2 => return self.entries[0] * self.entries[3] - self.entries[1] * self.entries[2],
            _ => {}
        }
        let n = self.size;
        let mut a = self.entries.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut pivot = col;
            let mut best = a[col * n + col].abs();
            for row in col + 1..n {
                let v = a[row * n + col].abs();
                if v > best {
                    best = v;
                    pivot = row;
                }
            }
            if best == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for row in col + 1..n {
                let factor = a[row * n + col] / p;
                if factor == 0.0 {
                    continue;
                }
                for k in col + 1..n {
                    a[row * n + k] -= factor * a[col * n + k];
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.size + j]
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            let row: Vec<String> = (0..self.size)
                .map(|j| format!("{:>10.6}", self[(i, j)]))
                .collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Determinant of a square matrix.
pub fn det(m: &SquareMatrix) -> f64 {
    m.det()
}

/// Symmetric Toeplitz matrix with `entry(i, j) = values[|i - j|]`.
pub fn toeplitz(values: &[f64]) -> Result<SquareMatrix> {
    if values.is_empty() {
        return Err(invalid("toeplitz: empty value sequence"));
    }
    check_finite(values)?;
    Ok(SquareMatrix::from_fn(values.len(), |i, j| {
        values[i.abs_diff(j)]
    }))
}

/// Hankel matrix with `entry(i, j) = values[i + j]`; `values` must have odd
/// length `2m - 1`.
pub fn hankel(values: &[f64]) -> Result<SquareMatrix> {
    if values.len().is_multiple_of(2) {
        return Err(invalid(format!(
            "hankel: expected an odd-length sequence, got {} values",
            values.len()
        )));
    }
    check_finite(values)?;
    let m = values.len().div_ceil(2);
    Ok(SquareMatrix::from_fn(m, |i, j| values[i + j]))
}

fn check_finite(values: &[f64]) -> Result<()> {
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(invalid(format!("non-finite entry {bad}")));
    }
    Ok(())
}

/// Coordinates `(x_1, ..., x_n)` of normalized Frobenius scalar products.
#[derive(Debug, Clone, PartialEq)]
pub struct GramPoint {
    x: Vec<f64>,
}

impl GramPoint {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(invalid("a Gram point needs at least one coordinate"));
        }
        check_finite(&x)?;
        Ok(Self { x })
    }

    /// The order `n`.
    pub fn order(&self) -> usize {
        self.x.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.x
    }

    /// 1-based coordinate access: `x(1)` is `x_1`.
    pub fn x(&self, i: usize) -> f64 {
        self.x[i - 1]
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.x
    }

    /// The first `k` coordinates.
    pub fn truncated(&self, k: usize) -> Option<GramPoint> {
        (1..=self.x.len()).contains(&k).then(|| GramPoint {
            x: self.x[..k].to_vec(),
        })
    }

    /// `T_{n+1}(1, x_1, ..., x_n)`.
    pub fn toeplitz(&self) -> SquareMatrix {
        toeplitz_normalized(&self.x)
    }
}

/// The two factors of `G_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorPair {
    pub g_minus: f64,
    pub g_plus: f64,
}

impl FactorPair {
    pub fn product(&self) -> f64 {
        self.g_minus * self.g_plus
    }
}

pub(crate) fn toeplitz_normalized(x: &[f64]) -> SquareMatrix {
    SquareMatrix::from_fn(x.len() + 1, |i, j| match i.abs_diff(j) {
        0 => 1.0,
        k => x[k - 1],
    })
}

/// An entry of a block matrix written as `Σ coeff · v[index]`.
type AffineEntry = Vec<(usize, f64)>;

/// A square matrix whose entries are affine in `v = (1, x_1, ..., x_n)`.
struct AffineBlock {
    size: usize,
    entries: Vec<AffineEntry>,
}

impl AffineBlock {
    fn evaluate(&self, x: &[f64]) -> SquareMatrix {
        let v = |k: usize| if k == 0 { 1.0 } else { x[k - 1] };
        SquareMatrix::from_fn(self.size, |i, j| {
            self.entries[i * self.size + j]
                .iter()
                .map(|&(k, c)| c * v(k))
                .sum()
        })
    }

    /// Gradient of `det` with respect to `x_1..x_n` by Jacobi's formula
    /// `∂ det M = Σ_ij cof(M)_ij ∂M_ij`.
    fn det_gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut grad = vec![0.0; x.len()];
        if self.size == 0 {
            return grad;
        }
        let cof = self.evaluate(x).cofactors();
        for i in 0..self.size {
            for j in 0..self.size {
                for &(k, c) in &self.entries[i * self.size + j] {
                    if k > 0 {
                        grad[k - 1] += c * cof[(i, j)];
                    }
                }
            }
        }
        grad
    }
}

/// Toeplitz-plus-or-minus-Hankel block of size `m` for order `n`:
/// entries `v[|i-j|] + sign · v[n-(i+j)]`.
fn toeplitz_hankel_entries(n: usize, m: usize, sign: f64) -> Vec<AffineEntry> {
    let mut entries = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            entries.push(vec![(i.abs_diff(j), 1.0), (n - (i + j), sign)]);
        }
    }
    entries
}

fn g_minus_block(n: usize) -> AffineBlock {
    if n % 2 == 1 {
        let m = n.div_ceil(2);
        return AffineBlock {
            size: m,
            entries: toeplitz_hankel_entries(n, m, 1.0),
        };
    }
    let m = n / 2;
    let size = m + 1;
    let inner = toeplitz_hankel_entries(n, m, 1.0);
    let mut entries = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            let e = match (i < m, j < m) {
                (true, true) => inner[i * m + j].clone(),
                (true, false) => vec![(m - i, 1.0)],
                (false, true) => vec![(m - j, 2.0)],
                (false, false) => vec![(0, 1.0)],
            };
            entries.push(e);
        }
    }
    AffineBlock { size, entries }
}

fn g_plus_block(n: usize) -> AffineBlock {
    let m = if n % 2 == 1 { n.div_ceil(2) } else { n / 2 };
    AffineBlock {
        size: m,
        entries: toeplitz_hankel_entries(n, m, -1.0),
    }
}

/// `G_n^-` at raw coordinates; `G_0^- = 1`.
pub(crate) fn g_minus_raw(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 1.0;
    }
    g_minus_block(x.len()).evaluate(x).det()
}

/// `G_n^+` at raw coordinates; `G_0^+ = 1`.
pub(crate) fn g_plus_raw(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 1.0;
    }
    g_plus_block(x.len()).evaluate(x).det()
}

pub(crate) fn grad_g_minus_raw(x: &[f64]) -> Vec<f64> {
    g_minus_block(x.len()).det_gradient(x)
}

/// `G_n = det T_{n+1}(1, x_1, ..., x_n)`.
pub fn gram_det(point: &GramPoint) -> f64 {
    point.toeplitz().det()
}

pub fn g_minus(point: &GramPoint) -> f64 {
    g_minus_raw(&point.x)
}

pub fn g_plus(point: &GramPoint) -> f64 {
    g_plus_raw(&point.x)
}

/// Both factors of `G_n`, built from the Toeplitz ± Hankel blocks.
pub fn factors(point: &GramPoint) -> FactorPair {
    FactorPair {
        g_minus: g_minus(point),
        g_plus: g_plus(point),
    }
}

/// The Toeplitz ± Hankel block whose determinant is `G_n^-`.
pub fn g_minus_matrix(point: &GramPoint) -> SquareMatrix {
    g_minus_block(point.order()).evaluate(&point.x)
}

/// The Toeplitz − Hankel block whose determinant is `G_n^+`
/// (empty for `n = 0`, so never for a valid point).
pub fn g_plus_matrix(point: &GramPoint) -> SquareMatrix {
    g_plus_block(point.order()).evaluate(&point.x)
}

/// `(G_1(x_1), G_2(x_1, x_2), ..., G_n(x_1, ..., x_n))`.
pub fn leading_minors(point: &GramPoint) -> Vec<f64> {
    leading_minors_raw(&point.x)
}

pub(crate) fn leading_minors_raw(x: &[f64]) -> Vec<f64> {
    (1..=x.len())
        .map(|k| toeplitz_normalized(&x[..k]).det())
        .collect()
}

/// `(∂_1 G_n^-, ..., ∂_n G_n^-)` from the cofactors of the `G_n^-` block.
pub fn grad_g_minus(point: &GramPoint) -> Vec<f64> {
    grad_g_minus_raw(&point.x)
}

/// Central finite-difference gradient of `G_n^-` with the given step.
pub fn grad_g_minus_fd(point: &GramPoint, step: f64) -> Vec<f64> {
    let mut x = point.x.clone();
    (0..x.len())
        .map(|k| {
            let orig = x[k];
            x[k] = orig + step;
            let up = g_minus_raw(&x);
            x[k] = orig - step;
            let down = g_minus_raw(&x);
            x[k] = orig;
            (up - down) / (2.0 * step)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: &[f64]) -> GramPoint {
        GramPoint::new(x.to_vec()).unwrap()
    }

    #[test]
    fn toeplitz_examples() {
        let t = toeplitz(&[1.0, 0.3]).unwrap();
        assert_eq!(t.entries(), &[1.0, 0.3, 0.3, 1.0]);
        assert_eq!(toeplitz(&[1.0]).unwrap().entries(), &[1.0]);
        assert_eq!(
            toeplitz(&[1.0, 0.0, 0.0, 0.0]).unwrap(),
            SquareMatrix::identity(4)
        );
        assert!(toeplitz(&[]).is_err());
        assert!(toeplitz(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn hankel_examples() {
        let h = hankel(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(h.entries(), &[1.0, 2.0, 2.0, 3.0]);
        assert_eq!(hankel(&[7.0]).unwrap().entries(), &[7.0]);
        assert!(hankel(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn g2_minus_block_matches_display() {
        // [[1 + x2, x1], [2 x1, 1]]
        let m = g_minus_matrix(&pt(&[0.3, -0.2]));
        assert_eq!(m.entries(), &[0.8, 0.3, 0.6, 1.0]);
        // Hankel part of the odd-size factorization: H_1(x_2).
        let h = hankel(&[-0.2]).unwrap();
        assert_eq!(h[(0, 0)] + 1.0, m[(0, 0)]);
    }

    #[test]
    fn det_examples() {
        assert_eq!(SquareMatrix::identity(5).det(), 1.0);
        assert!((toeplitz(&[1.0, 0.5]).unwrap().det() - 0.75).abs() < 1e-15);
        let p = pt(&[0.2, 0.1, 0.05]);
        let f = factors(&p);
        assert!((toeplitz(&[1.0, 0.2, 0.1, 0.05]).unwrap().det() - f.product()).abs() < 1e-14);
    }

    #[test]
    fn det_singular_is_zero() {
        let m = SquareMatrix::from_fn(3, |i, j| (i + j) as f64);
        assert!(m.det().abs() < 1e-12);
        let z = SquareMatrix::from_fn(4, |_, _| 0.0);
        assert_eq!(z.det(), 0.0);
    }

    #[test]
    fn gram_det_examples() {
        assert!((gram_det(&pt(&[0.3])) - 0.91).abs() < 1e-15);
        assert!((gram_det(&pt(&[0.0, 0.0])) - 1.0).abs() < 1e-15);
        assert!(gram_det(&pt(&[-1.0, 1.0])).abs() < 1e-15);
    }

    #[test]
    fn low_order_factors_match_closed_forms() {
        let (x1, x2, x3) = (0.31, -0.47, 0.12);
        let f1 = factors(&pt(&[x1]));
        assert!((f1.g_minus - (1.0 + x1)).abs() < 1e-15);
        assert!((f1.g_plus - (1.0 - x1)).abs() < 1e-15);

        let f2 = factors(&pt(&[x1, x2]));
        assert!((f2.g_minus - (1.0 + x2 - 2.0 * x1 * x1)).abs() < 1e-15);
        assert!((f2.g_plus - (1.0 - x2)).abs() < 1e-15);

        let f3 = factors(&pt(&[x1, x2, x3]));
        let gm = (1.0 + x3) * (1.0 + x1) - (x1 + x2).powi(2);
        let gp = (1.0 - x3) * (1.0 - x1) - (x1 - x2).powi(2);
        assert!((f3.g_minus - gm).abs() < 1e-15);
        assert!((f3.g_plus - gp).abs() < 1e-15);
    }

    #[test]
    fn leading_minor_examples() {
        assert_eq!(leading_minors(&pt(&[0.0, 0.0, 0.0])), vec![1.0, 1.0, 1.0]);
        for m in leading_minors(&pt(&[-1.0, 1.0, -1.0])) {
            assert!(m.abs() < 1e-14);
        }
        let m = leading_minors(&pt(&[0.5, 0.0]));
        assert!((m[0] - 0.75).abs() < 1e-15);
        assert!((m[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gradient_low_orders() {
        let (x1, x2, x3) = (-0.4, 0.25, 0.6);
        let g2 = grad_g_minus(&pt(&[x1, x2]));
        assert!((g2[0] + 4.0 * x1).abs() < 1e-14);
        assert!((g2[1] - 1.0).abs() < 1e-14);

        // Differentiating (1 + x3)(1 + x1) - (x1 + x2)^2 directly.
        let g3 = grad_g_minus(&pt(&[x1, x2, x3]));
        assert!((g3[0] - ((1.0 + x3) - 2.0 * (x1 + x2))).abs() < 1e-14);
        assert!((g3[1] + 2.0 * (x1 + x2)).abs() < 1e-14);
        assert!((g3[2] - (1.0 + x1)).abs() < 1e-14);
    }

    #[test]
    fn gradient_at_origin_matches_finite_differences() {
        for n in 1..=10 {
            let p = pt(&vec![0.0; n]);
            let a = grad_g_minus(&p);
            let fd = grad_g_minus_fd(&p, 1e-6);
            for (u, v) in a.iter().zip(&fd) {
                assert!((u - v).abs() < 1e-8, "n={n}: {u} vs {v}");
            }
        }
    }

    #[test]
    fn cofactors_of_singular_matrix() {
        // rank one: cofactors vanish for size >= 3, adjugate is nonzero for size 2
        let m = SquareMatrix::from_fn(2, |_, _| 1.0);
        assert_eq!(m.cofactors().entries(), &[1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn truncation() {
        let p = pt(&[0.1, 0.2, 0.3]);
        assert_eq!(p.truncated(2).unwrap().coords(), &[0.1, 0.2]);
        assert!(p.truncated(0).is_none());
        assert!(p.truncated(4).is_none());
        assert_eq!(p.x(3), 0.3);
    }
}
