//! `weilbound`: generalized Weil bounds from the command line.

use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use weil_cli::commands::{self, CliError, Settings};
use weil_cli::output::Report;

#[derive(Parser)]
#[command(
    name = "weilbound",
    version,
    about = "Upper bounds for the number of rational points of curves over finite fields"
)]
struct Cli {
    /// Output format; `plotdata` defaults to csv, everything else to table.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Eigenvalue slack of the closed-domain test.
    #[arg(long, global = true, env = "WEILBOUND_TOL")]
    tol: Option<f64>,
    /// Include per-order diagnostics.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

/// Inclusive range `a..b`, or a single value `a`.
#[derive(Clone, Copy, Debug)]
struct Span {
    lo: u64,
    hi: u64,
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad integer {t:?}: {e}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => (parse(s)?, parse(s)?),
        };
        if lo > hi {
            return Err(format!("empty range {s}"));
        }
        Ok(Span { lo, hi })
    }
}

/// Comma-separated values and inclusive ranges, e.g. `1,2,5..7`.
fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let span: Span = part.parse()?;
        out.extend(span.lo..=span.hi);
    }
    Ok(out)
}

fn parse_orders(s: &str) -> Result<Vec<usize>, String> {
    Ok(parse_list(s)?.into_iter().map(|n| n as usize).collect())
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number {t:?}: {e}"))
        })
        .collect()
}

#[derive(Subcommand)]
enum Command {
    /// Best bound for one (q, g), with the bound of every order.
    Bound {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        g: u64,
        #[arg(long, default_value_t = weil_core::DEFAULT_MAX_ORDER)]
        max_order: usize,
    },
    /// Best bounds over a range of genera, for one or more q.
    Table {
        #[arg(long, value_parser = parse_list, required = true)]
        q: Vec<Vec<u64>>,
        #[arg(long, alias = "g-range", default_value = "1..52")]
        g: Span,
        #[arg(long, default_value_t = weil_core::DEFAULT_MAX_ORDER)]
        max_order: usize,
    },
    /// Genus g_n from which the order-n bound applies.
    Threshold {
        #[arg(long)]
        q: u64,
        /// Orders, e.g. `3` or `2..6`.
        #[arg(long, alias = "orders", value_parser = parse_orders, default_value = "2..5")]
        n: Vec<Vec<usize>>,
        /// Relative accuracy of g_n.
        #[arg(long, default_value_t = 1e-9)]
        rel_tol: f64,
    },
    /// Upper bounds on Ihara's constant A(q) per order.
    Asymptotic {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 8)]
        max_order: usize,
    },
    /// Tsfasman defect of a tower given beta_1, beta_2, ...
    Defect {
        #[arg(long)]
        q: u64,
        #[arg(long, value_parser = parse_floats, required = true)]
        betas: Vec<Vec<f64>>,
        /// Also evaluate the truncated sum of this length.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Bounds for a covering X -> Y.
    Relative {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        gx: f64,
        #[arg(long)]
        gy: f64,
        /// #X(F_q) - #Y(F_q), enabling the second-extension bound.
        #[arg(long, allow_hyphen_values = true)]
        dn1: Option<f64>,
    },
    /// Bound for a cartesian square X -> Y1, Y2 -> Z.
    Fiber {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        gx: f64,
        #[arg(long)]
        gy1: f64,
        #[arg(long)]
        gy2: f64,
        #[arg(long)]
        gz: f64,
    },
    /// Check point counts N_1, N_2, ... against the constraints.
    Audit {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        g: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        counts: Vec<u64>,
    },
    /// Real-valued bounds per order over a genus range, for plotting.
    Plotdata {
        #[arg(long)]
        q: u64,
        #[arg(long, alias = "g-range", default_value = "1..60")]
        g: Span,
        #[arg(long, value_parser = parse_orders, default_value = "1..5")]
        orders: Vec<Vec<usize>>,
    },
}

fn flatten<T>(v: Vec<Vec<T>>) -> Vec<T> {
    v.into_iter().flatten().collect()
}

fn run(cli: Cli) -> Result<(Report, Format), CliError> {
    let settings = Settings::new(cli.tol, cli.verbose)?;
    let fmt = cli.format;
    let (report, default) = match cli.command {
        Command::Bound { q, g, max_order } => {
            (commands::bound(&settings, q, g, max_order)?, Format::Table)
        }
        Command::Table { q, g, max_order } => (
            commands::table(&settings, &flatten(q), g.lo, g.hi, max_order)?,
            Format::Table,
        ),
        Command::Threshold { q, n, rel_tol } => (
            commands::threshold(&settings, q, &flatten(n), rel_tol)?,
            Format::Table,
        ),
        Command::Asymptotic { q, max_order } => (
            commands::asymptotic(&settings, q, max_order)?,
            Format::Table,
        ),
        Command::Defect { q, betas, m } => (commands::defect(q, flatten(betas), m)?, Format::Table),
        Command::Relative { q, gx, gy, dn1 } => {
            (commands::relative(q, gx, gy, dn1)?, Format::Table)
        }
        Command::Fiber {
            q,
            gx,
            gy1,
            gy2,
            gz,
        } => {
            let (report, warning) = commands::fiber(q, gx, gy1, gy2, gz)?;
            if let Some(w) = warning {
                eprintln!("warning: {w}");
            }
            (report, Format::Table)
        }
        Command::Audit { q, g, counts } => {
            (commands::audit(&settings, q, g, counts)?, Format::Table)
        }
        Command::Plotdata { q, g, orders } => (
            commands::plotdata(&settings, q, g.lo, g.hi, &flatten(orders))?,
            Format::Csv,
        ),
    };
    Ok((report, fmt.unwrap_or(default)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, fmt)) => {
            let text = match fmt {
                Format::Table => report.to_text(),
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json(),
            };
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
