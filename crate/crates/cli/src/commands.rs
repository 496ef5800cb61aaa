//! Subcommand implementations. Each returns a [`Report`] for rendering.

use rayon::prelude::*;

use weil_core::bounds::{
    asymptotic_order_bound, best_bound, drinfeld_vladut, fiber_product_bound, order_n_bound,
    printed_asymptotic_order3, relative_order2, relative_weil, tsfasman_defect, tsfasman_partial,
    violates_tsfasman, BestBoundReport, OrderBound, TowerSpec,
};
use weil_core::domain::{
    ihara_slacks, in_closed_domain, point_from_counts, second_extension_bound, CurveCounts,
    IharaLine, DEFAULT_CLOSED_TOL,
};
use weil_core::{threshold_genus, SolverOptions, WeilError};

use crate::output::{Field, Report};
use crate::primes::prime_power;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<WeilError> for CliError {
    fn from(e: WeilError) -> Self {
        match e {
            WeilError::InvalidArgument(_) => CliError::Usage(e.to_string()),
            WeilError::NumericalFailure { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

pub type CmdResult = Result<Report, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn check_field_size(q: u64) -> Result<(), CliError> {
    match prime_power(q) {
        Some(_) => Ok(()),
        None => Err(usage(format!("q = {q} is not a prime power"))),
    }
}

fn check_genus(g: u64) -> Result<(), CliError> {
    if g == 0 {
        Err(usage("genus must be at least 1"))
    } else {
        Ok(())
    }
}

/// Solver settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Settings {
    pub opts: SolverOptions,
    pub verbose: bool,
}

impl Settings {
    pub fn new(tol: Option<f64>, verbose: bool) -> Result<Self, CliError> {
        let mut opts = SolverOptions::default();
        if let Some(t) = tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(usage(format!("tolerance must be positive, got {t}")));
            }
            opts.psd_tol = t;
            opts.tangency_tol = t;
        }
        Ok(Self { opts, verbose })
    }

    fn closed_tol(&self) -> f64 {
        self.opts.psd_tol
    }
}

fn bound_columns(max_order: usize, verbose: bool) -> Vec<String> {
    let mut cols: Vec<String> = ["q", "g", "best_bound", "best_order", "best_real"]
        .map(String::from)
        .into();
    cols.extend((1..=max_order).map(|n| format!("bound_{n}")));
    if verbose {
        for n in 1..=max_order {
            cols.extend([
                format!("real_{n}"),
                format!("mu_{n}"),
                format!("status_{n}"),
            ]);
        }
    }
    cols
}

fn status(b: &OrderBound) -> Field {
    match b.reason {
        None => "ok".into(),
        Some(r) => r.to_string().into(),
    }
}

fn bound_row(r: &BestBoundReport, verbose: bool) -> Vec<Field> {
    let mut row = vec![
        r.q.into(),
        (r.g as u64).into(),
        r.best_int.into(),
        r.best_order.into(),
        r.best_real().into(),
    ];
    row.extend(r.per_order.iter().map(|b| {
        if b.applicable {
            b.int_bound.into()
        } else {
            Field::Empty
        }
    }));
    if verbose {
        for b in &r.per_order {
            row.extend([b.real_bound.into(), b.mu.into(), status(b)]);
        }
    }
    row
}

fn check_max_order(max_order: usize) -> Result<(), CliError> {
    if (1..=64).contains(&max_order) {
        Ok(())
    } else {
        Err(usage(format!(
            "max order must lie in 1..=64, got {max_order}"
        )))
    }
}

pub fn bound(s: &Settings, q: u64, g: u64, max_order: usize) -> CmdResult {
    table(s, &[q], g, g, max_order)
}

pub fn table(s: &Settings, qs: &[u64], g_min: u64, g_max: u64, max_order: usize) -> CmdResult {
    check_max_order(max_order)?;
    check_genus(g_min)?;
    if qs.is_empty() {
        return Err(usage("at least one q is required"));
    }
    for &q in qs {
        check_field_size(q)?;
    }
    let jobs: Vec<(u64, u64)> = qs
        .iter()
        .flat_map(|&q| (g_min..=g_max).map(move |g| (q, g)))
        .collect();
    let reports = jobs
        .par_iter()
        .map(|&(q, g)| best_bound(q, g as f64, max_order, &s.opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Report::new(bound_columns(max_order, s.verbose));
    for r in &reports {
        out.push(bound_row(r, s.verbose));
    }
    Ok(out)
}

pub fn threshold(s: &Settings, q: u64, orders: &[usize], rel_tol: f64) -> CmdResult {
    check_field_size(q)?;
    let results = orders
        .par_iter()
        .map(|&n| threshold_genus(q, n, rel_tol, &s.opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Report::new(["q", "n", "g_n", "bracket_lo", "bracket_hi"]);
    for t in results {
        out.push(vec![
            t.q.into(),
            t.n.into(),
            t.g_n.into(),
            t.bracket.0.into(),
            t.bracket.1.into(),
        ]);
    }
    Ok(out)
}

pub fn asymptotic(s: &Settings, q: u64, max_order: usize) -> CmdResult {
    check_field_size(q)?;
    check_max_order(max_order)?;
    let values = (1..=max_order)
        .into_par_iter()
        .map(|n| asymptotic_order_bound(q, n, &s.opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Report::new(["q", "order", "bound", "as_printed"]);
    for (n, v) in (1..).zip(values) {
        let printed = if n == 3 {
            printed_asymptotic_order3(q).into()
        } else {
            Field::Empty
        };
        out.push(vec![q.into(), Field::Str(n.to_string()), v.into(), printed]);
    }
    out.push(vec![
        q.into(),
        "DV".into(),
        drinfeld_vladut(q).into(),
        Field::Empty,
    ]);
    Ok(out)
}

pub fn defect(q: u64, betas: Vec<f64>, m: Option<usize>) -> CmdResult {
    check_field_size(q)?;
    let t = TowerSpec::new(q, betas)?;
    let mut out = Report::new(["q", "defect", "tsfasman_violated", "m", "partial"]);
    let (m_field, partial) = match m {
        Some(m) => (m.into(), tsfasman_partial(&t, m)?.into()),
        None => (Field::Empty, Field::Empty),
    };
    out.push(vec![
        q.into(),
        tsfasman_defect(&t).into(),
        violates_tsfasman(&t).into(),
        m_field,
        partial,
    ]);
    Ok(out)
}

pub fn relative(q: u64, gx: f64, gy: f64, dn1: Option<f64>) -> CmdResult {
    check_field_size(q)?;
    let weil = relative_weil(q, gx, gy)?;
    let order2 = match dn1 {
        Some(d) => relative_order2(q, gx, gy, d)?.into(),
        None => Field::Empty,
    };
    let mut out = Report::new(["q", "gx", "gy", "dn1", "relative_weil", "relative_order2"]);
    out.push(vec![
        q.into(),
        gx.into(),
        gy.into(),
        dn1.into(),
        weil.into(),
        order2,
    ]);
    Ok(out)
}

pub fn fiber(
    q: u64,
    gx: f64,
    gy1: f64,
    gy2: f64,
    gz: f64,
) -> Result<(Report, Option<String>), CliError> {
    check_field_size(q)?;
    let b = fiber_product_bound(q, gx, gy1, gy2, gz)?;
    let mut out = Report::new([
        "q",
        "gx",
        "gy1",
        "gy2",
        "gz",
        "bound",
        "hypothesis_violated",
    ]);
    out.push(vec![
        q.into(),
        gx.into(),
        gy1.into(),
        gy2.into(),
        gz.into(),
        b.value.into(),
        b.hypothesis_violated.into(),
    ]);
    Ok((out, b.warning()))
}

pub fn audit(s: &Settings, q: u64, g: u64, counts: Vec<u64>) -> CmdResult {
    check_field_size(q)?;
    check_genus(g)?;
    if counts.is_empty() {
        return Err(usage("at least one point count is required"));
    }
    let c = CurveCounts::new(q, g, counts)?;
    let point = point_from_counts(&c)?;
    let line = IharaLine::new(q, g as f64, point.order())?;
    let verdict = in_closed_domain(&point, s.closed_tol());
    let slacks = ihara_slacks(&line, &point)?;
    let violations = c.ihara_violations();

    let mut reasons = Vec::new();
    if point.x(1) < -1.0 - s.closed_tol() || point.x(1) > 1.0 + s.closed_tol() {
        reasons.push(format!(
            "|x1| > 1 (Weil bound violated, x1 = {:.6})",
            point.x(1)
        ));
    }
    if !violations.is_empty() {
        let degrees: Vec<String> = violations.iter().map(|d| d.to_string()).collect();
        reasons.push(format!(
            "N_i < N_1 at degree {} (Ihara constraint)",
            degrees.join(",")
        ));
    }
    if !verdict.inside_closed {
        reasons.push(format!(
            "outside the Weil domain (min eigenvalue {:.3e})",
            verdict.min_eigenvalue
        ));
    }
    let n2_max =
        (c.counts.len() >= 2).then(|| second_extension_bound(q, g as f64, c.counts[0] as f64));
    if let Some(max) = n2_max {
        if c.counts[1] as f64 > max + DEFAULT_CLOSED_TOL {
            reasons.push(format!("N_2 = {} exceeds {max:.6}", c.counts[1]));
        }
    }
    let on_boundary = verdict.inside_closed && verdict.min_eigenvalue.abs() <= s.closed_tol();
    let verdict_text = if reasons.is_empty() {
        "consistent".to_string()
    } else {
        format!("infeasible ({})", reasons.join("; "))
    };

    let join = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:?}"))
            .collect::<Vec<_>>()
            .join(";")
    };
    let mut out = Report::new([
        "q",
        "g",
        "x",
        "ihara_slacks",
        "min_eigenvalue",
        "in_closed_domain",
        "on_boundary",
        "n2_max",
        "verdict",
    ]);
    out.push(vec![
        q.into(),
        g.into(),
        join(point.coords()).into(),
        if slacks.is_empty() {
            Field::Empty
        } else {
            join(&slacks).into()
        },
        verdict.min_eigenvalue.into(),
        verdict.inside_closed.into(),
        on_boundary.into(),
        n2_max.into(),
        verdict_text.into(),
    ]);
    Ok(out)
}

pub fn plotdata(s: &Settings, q: u64, g_min: u64, g_max: u64, orders: &[usize]) -> CmdResult {
    check_field_size(q)?;
    check_genus(g_min)?;
    if orders.is_empty() || orders.iter().any(|&n| !(1..=12).contains(&n)) {
        return Err(usage("orders must be a nonempty subset of 1..=12"));
    }
    let jobs: Vec<(u64, usize)> = (g_min..=g_max)
        .flat_map(|g| orders.iter().map(move |&n| (g, n)))
        .collect();
    let bounds = jobs
        .par_iter()
        .map(|&(g, n)| order_n_bound(q, g as f64, n, &s.opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut cols = vec!["g".to_string()];
    cols.extend(orders.iter().map(|n| format!("order_{n}")));
    let mut out = Report::new(cols);
    for (g, chunk) in (g_min..=g_max).zip(bounds.chunks(orders.len())) {
        let mut row = vec![Field::from(g)];
        row.extend(chunk.iter().map(|b| {
            if b.applicable {
                b.real_bound.into()
            } else {
                Field::Empty
            }
        }));
        out.push(row);
    }
    Ok(out)
}
