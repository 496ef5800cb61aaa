//! Minimization of `x_1` over the intersection of the closed Weil domain with
//! the Ihara domain.
//!
//! The minimizer is searched on the Ihara line: the closed domain cuts it in a
//! segment `[A, B]` (convexity), found by a grid scan followed by bisection of
//! both ends. The left end is then polished as a root of `t ↦ G_n^-(P(t))`
//! and certified with the first-order criteria:
//!
//! 1. `G_n^-(P) = 0`,
//! 2. `∂_i G_n^-(P) >= 0` for `2 <= i <= n`,
//! 3. `Σ_i α^{i-1} ∂_i G_n^-(P) > 0`.
//!
//! When the grid misses a very short segment (the genus sits right at the
//! threshold and the line only touches the domain), the smallest eigenvalue
//! along the line, which is concave in `x_1`, is maximized by golden-section
//! search instead.

use crate::domain::{closed_contains, min_eigenvalue, Genus, IharaLine};
use crate::error::{invalid, Result, WeilError};
use crate::gram::{g_minus_raw, g_plus_raw, grad_g_minus_raw, toeplitz_normalized, GramPoint};

/// Tunable tolerances of the solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Number of grid intervals on `[-1, 1]`.
    pub grid: usize,
    /// Final width of the bisection brackets around the segment ends.
    pub segment_tol: f64,
    /// Eigenvalue slack of the closed-domain test.
    pub psd_tol: f64,
    /// Target `|G_n^-|` of the polished endpoint.
    pub polish_tol: f64,
    /// `|G_n^-|` accepted without a sign change (tangent contact).
    pub tangency_tol: f64,
    /// Slack on the sign of the partial derivatives.
    pub criteria_tol: f64,
    pub max_polish_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            grid: 4096,
            segment_tol: 1e-13,
            psd_tol: 1e-9,
            polish_tol: 1e-12,
            tangency_tol: 1e-9,
            criteria_tol: 1e-9,
            max_polish_iter: 200,
        }
    }
}

/// `x_1`-range of the intersection of an Ihara line with the closed domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibleSegment {
    pub x1_lo: f64,
    pub x1_hi: f64,
    pub found: bool,
}

impl FeasibleSegment {
    const EMPTY: Self = Self {
        x1_lo: f64::NAN,
        x1_hi: f64::NAN,
        found: false,
    };
}

/// Outcome of the optimality criteria at a candidate minimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaReport {
    pub g_minus_value: f64,
    /// `|G_n^-| <= tangency_tol`.
    pub on_surface: bool,
    /// `∂_i G_n^- >= -criteria_tol` for `i = 2..=n`.
    pub partials_ok: bool,
    /// Derivative of `G_n^-` along the line direction.
    pub directional_derivative: f64,
    pub directional_ok: bool,
    pub certified: bool,
}

/// A located and checked minimizer of `x_1` on one Ihara line.
#[derive(Debug, Clone, PartialEq)]
pub struct LineMinimum {
    pub mu: f64,
    pub point: GramPoint,
    pub segment: FeasibleSegment,
    /// Whether the left end of the segment lies on `G_n^- = 0` rather than
    /// on the `G_n^+ = 0` sheet of the boundary.
    pub on_minus_sheet: bool,
    pub report: CriteriaReport,
}

/// Threshold genus `g_n` with its final bisection bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    pub n: usize,
    pub q: u64,
    pub g_n: f64,
    pub bracket: (f64, f64),
}

fn grid_point(k: usize, grid: usize) -> f64 {
    -1.0 + 2.0 * k as f64 / grid as f64
}

/// Closed-domain indicator at the `grid + 1` equally spaced abscissae of `[-1, 1]`.
pub fn feasibility_profile(line: &IharaLine, grid: usize, psd_tol: f64) -> Vec<bool> {
    (0..=grid)
        .map(|k| closed_contains(&line.coords(grid_point(k, grid)), psd_tol))
        .collect()
}

fn line_min_eigenvalue(line: &IharaLine, t: f64) -> f64 {
    min_eigenvalue(&toeplitz_normalized(&line.coords(t)))
}

/// Maximum of a concave function on `[a, b]` by golden-section search.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// Shrinks `[outside, inside]` onto the domain boundary; returns the inside end.
fn bisect_boundary(
    line: &IharaLine,
    mut outside: f64,
    mut inside: f64,
    opts: &SolverOptions,
) -> f64 {
    while (inside - outside).abs() > opts.segment_tol {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if closed_contains(&line.coords(mid), opts.psd_tol) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// Intersection of the line with the closed Weil domain, as an `x_1`-segment.
pub fn feasible_segment(line: &IharaLine, opts: &SolverOptions) -> FeasibleSegment {
    let grid = opts.grid.max(64);
    let profile = feasibility_profile(line, grid, opts.psd_tol);
    let first = profile.iter().position(|&f| f);
    let last = profile.iter().rposition(|&f| f);
    if let (Some(first), Some(last)) = (first, last) {
        let x1_lo = if first == 0 {
            -1.0
        } else {
            bisect_boundary(
                line,
                grid_point(first - 1, grid),
                grid_point(first, grid),
                opts,
            )
        };
        let x1_hi = if last == grid {
            1.0
        } else {
            bisect_boundary(
                line,
                grid_point(last + 1, grid),
                grid_point(last, grid),
                opts,
            )
        };
        return FeasibleSegment {
            x1_lo,
            x1_hi,
            found: true,
        };
    }

    let (peak, lam) = golden_max(|t| line_min_eigenvalue(line, t), -1.0, 1.0, 1e-14);
    if lam < -opts.psd_tol {
        return FeasibleSegment::EMPTY;
    }
    if !closed_contains(&line.coords(peak), opts.psd_tol) {
        return FeasibleSegment {
            x1_lo: peak,
            x1_hi: peak,
            found: true,
        };
    }
    FeasibleSegment {
        x1_lo: bisect_boundary(line, -1.0, peak, opts),
        x1_hi: bisect_boundary(line, 1.0, peak, opts),
        found: true,
    }
}

/// `t ↦ G_n^-(P(t))` and its derivative `Σ α^{i-1} ∂_i G_n^-`.
fn phi(line: &IharaLine, t: f64) -> f64 {
    g_minus_raw(&line.coords(t))
}

fn phi_prime(line: &IharaLine, t: f64) -> f64 {
    let grad = grad_g_minus_raw(&line.coords(t));
    grad.iter().zip(line.direction()).map(|(g, d)| g * d).sum()
}

/// Which factor vanishes at a boundary point: `true` for `G_n^-`. A point
/// accepted within tolerance may sit just outside, where the violated
/// factor is the negative one (both vanish at a corner of the boundary).
fn on_minus_sheet(x: &[f64]) -> bool {
    let (minus, plus) = (g_minus_raw(x), g_plus_raw(x));
    if minus < 0.0 {
        true
    } else if plus < 0.0 {
        false
    } else {
        minus <= plus
    }
}

/// Root of `phi` in `[a, b]` with `phi(a) < 0 < phi(b)`: Newton steps kept
/// inside the bracket, bisection otherwise.
fn polish_root(line: &IharaLine, mut a: f64, mut b: f64, opts: &SolverOptions) -> Result<f64> {
    let mut t = 0.5 * (a + b);
    let mut value = phi(line, t);
    for _ in 0..opts.max_polish_iter {
        if value.abs() <= opts.polish_tol || b - a <= 4.0 * f64::EPSILON * t.abs().max(1.0) {
            return Ok(t);
        }
        if value < 0.0 {
            a = t;
        } else {
            b = t;
        }
        let slope = phi_prime(line, t);
        let newton = t - value / slope;
        t = if slope.is_finite() && slope != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        value = phi(line, t);
    }
    if value.abs() <= opts.polish_tol {
        return Ok(t);
    }
    Err(WeilError::NumericalFailure {
        stage: "endpoint polish",
        iterations: opts.max_polish_iter,
        residual: value,
        lo: a,
        hi: b,
    })
}

/// Refines the left end `lo` of the segment onto `G_n^- = 0`.
fn polish_left_end(line: &IharaLine, seg: &FeasibleSegment, opts: &SolverOptions) -> Result<f64> {
    let lo = seg.x1_lo;
    let width = seg.x1_hi - seg.x1_lo;
    let inner = if width > 0.0 {
        vec![lo + (0.5 * width).min(1e-3)]
    } else {
        Vec::new()
    };
    let right = inner
        .into_iter()
        .chain([1e-12, 1e-10, 1e-8, 1e-6].into_iter().map(|d| lo + d))
        .find(|&t| phi(line, t) > 0.0);
    let left = [1e-12, 1e-10, 1e-8, 1e-6, 1e-4]
        .into_iter()
        .map(|d| lo - d)
        .find(|&t| phi(line, t) < 0.0);
    if let (Some(a), Some(b)) = (left, right) {
        let root = polish_root(line, a, b, opts)?;
        if closed_contains(&line.coords(root), opts.psd_tol) {
            return Ok(root);
        }
    }
    Ok(lo)
}

/// Checks the optimality criteria at a point of the line.
pub fn criteria(line: &IharaLine, point: &GramPoint, opts: &SolverOptions) -> CriteriaReport {
    let x = point.coords();
    let g_minus_value = g_minus_raw(x);
    let grad = grad_g_minus_raw(x);
    let on_surface = g_minus_value.abs() <= opts.tangency_tol;
    let partials_ok = grad.iter().skip(1).all(|&d| d >= -opts.criteria_tol);
    let directional_derivative: f64 = grad.iter().zip(line.direction()).map(|(g, d)| g * d).sum();
    let directional_ok = directional_derivative > 0.0;
    CriteriaReport {
        g_minus_value,
        on_surface,
        partials_ok,
        directional_derivative,
        directional_ok,
        certified: on_surface && partials_ok && directional_ok,
    }
}

/// Minimum of `x_1` on the line within the closed domain, with its
/// certificate. `None` when the line misses the domain.
pub fn minimize_on_line(line: &IharaLine, opts: &SolverOptions) -> Result<Option<LineMinimum>> {
    if line.order() == 1 {
        let point = line.point(-1.0)?;
        let report = criteria(line, &point, opts);
        return Ok(Some(LineMinimum {
            mu: -1.0,
            point,
            segment: FeasibleSegment {
                x1_lo: -1.0,
                x1_hi: 1.0,
                found: true,
            },
            on_minus_sheet: true,
            report,
        }));
    }
    let segment = feasible_segment(line, opts);
    if !segment.found {
        return Ok(None);
    }
    let minus_sheet = on_minus_sheet(&line.coords(segment.x1_lo));
    let mu = if minus_sheet {
        polish_left_end(line, &segment, opts)?
    } else {
        segment.x1_lo
    };
    let point = line.point(mu)?;
    let report = criteria(line, &point, opts);
    Ok(Some(LineMinimum {
        mu,
        point,
        segment,
        on_minus_sheet: minus_sheet,
        report,
    }))
}

/// `μ_n = min x_1` over the closed Weil domain intersected with the Ihara
/// domain of genus `g`, when the line meets the domain.
pub fn mu_n(
    q: u64,
    g: impl Into<Genus>,
    n: usize,
    opts: &SolverOptions,
) -> Result<Option<LineMinimum>> {
    minimize_on_line(&IharaLine::new(q, g, n)?, opts)
}

/// Infinite-genus limit `μ_n^∞`.
pub fn mu_infinity(q: u64, n: usize, opts: &SolverOptions) -> Result<f64> {
    let line = IharaLine::new(q, Genus::Infinite, n)?;
    match minimize_on_line(&line, opts)? {
        Some(m) => Ok(m.mu),
        None => Err(WeilError::NumericalFailure {
            stage: "infinite-genus segment search",
            iterations: opts.grid,
            residual: f64::NAN,
            lo: -1.0,
            hi: 1.0,
        }),
    }
}

/// Whether the order-`n` line of genus `g` meets the closed domain with its
/// left end on `G_n^- = 0` and `x_1 < 0`.
pub fn order_applicable(q: u64, g: f64, n: usize, opts: &SolverOptions) -> Result<bool> {
    let line = IharaLine::new(q, g, n)?;
    let seg = feasible_segment(&line, opts);
    Ok(seg.found && seg.x1_lo < 0.0 && on_minus_sheet(&line.coords(seg.x1_lo)))
}

/// Threshold genus `g_n` above which the order-`n` bound applies, to
/// relative tolerance `rel_tol`, by bisection on `u = 1/g`.
pub fn threshold_genus(
    q: u64,
    n: usize,
    rel_tol: f64,
    opts: &SolverOptions,
) -> Result<ThresholdResult> {
    if n < 2 {
        return Err(invalid("threshold genus is defined for orders n >= 2"));
    }
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(invalid(format!(
            "tolerance must be positive, got {rel_tol}"
        )));
    }
    let applicable = |g: f64| order_applicable(q, g, n, opts);
    let overflow = |stage| WeilError::NumericalFailure {
        stage,
        iterations: 80,
        residual: f64::NAN,
        lo: 0.0,
        hi: f64::INFINITY,
    };

    let mut g_high = 1.0;
    let mut steps = 0;
    while !applicable(g_high)? {
        g_high *= 2.0;
        steps += 1;
        if steps > 80 {
            return Err(overflow("threshold upper bracket"));
        }
    }
    let mut g_low = g_high / 2.0;
    steps = 0;
    while applicable(g_low)? {
        g_high = g_low;
        g_low /= 2.0;
        steps += 1;
        if steps > 80 {
            return Err(overflow("threshold lower bracket"));
        }
    }

    let (mut u_feasible, mut u_infeasible) = (1.0 / g_high, 1.0 / g_low);
    while 1.0 / u_feasible - 1.0 / u_infeasible > rel_tol / u_feasible {
        let u = 0.5 * (u_feasible + u_infeasible);
        if u == u_feasible || u == u_infeasible {
            break;
        }
        if applicable(1.0 / u)? {
            u_feasible = u;
        } else {
            u_infeasible = u;
        }
    }
    let (lo, hi) = (1.0 / u_infeasible, 1.0 / u_feasible);
    Ok(ThresholdResult {
        n,
        q,
        g_n: 0.5 * (lo + hi),
        bracket: (lo, hi),
    })
}
