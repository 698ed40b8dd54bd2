//! `nahm-forge`: command-line front end for the verification engine.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage
//! errors and violated input invariants.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nahm_forge::modular::{check_transformation, EvalConfig, ModularReport, Relation, Tau};
use nahm_forge::nahm::{nahm_sum, NahmInput, NahmQuadruple};
use nahm_forge::rat::{fmt_big, fmt_r64, int, parse_r64};
use nahm_forge::recognize::{hunt, RecognizeConfig};
use nahm_forge::registry::{verify, verify_all, Outcome, Status, SuiteOrders, VerifyReport};
use nahm_forge::{par, Error, Exp};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "nahm-forge", version, about = "Exact q-series identity verification for generalized Nahm sums")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify one registry identity.
    Verify {
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 200)]
        order: i64,
        #[arg(long)]
        json: bool,
    },
    /// Verify every registry identity, optionally filtered by status.
    VerifyAll {
        #[arg(long, default_value_t = 200)]
        order: i64,
        /// Comma-separated statuses: theorem, known, conjecture.
        #[arg(long, value_delimiter = ',', value_parser = parse_status)]
        status_filter: Vec<Status>,
        #[command(flatten)]
        jobs: Jobs,
        #[arg(long)]
        json: bool,
    },
    /// Expand a (possibly restricted) Nahm sum.
    Nahm {
        #[command(flatten)]
        quad: QuadArgs,
        #[arg(long, default_value = "20", value_parser = parse_exp)]
        order: Exp,
        /// Residue constraints mod 2, e.g. `0:1` or `0:1,1:0`.
        #[arg(long)]
        parity: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the dual quadruple as JSON.
    Dual {
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Search a grid of b vectors for product-form Nahm sums.
    Hunt {
        /// Matrix rows separated by `;`, entries by `,`, e.g. `2,1;2,2`.
        #[arg(long = "A", value_parser = parse_matrix, allow_hyphen_values = true)]
        a: Matrix,
        #[arg(long, value_delimiter = ',')]
        d: Vec<i64>,
        /// One range `lo:hi[:step]` or value per coordinate, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        b_grid: String,
        #[arg(long, default_value = "120", value_parser = parse_exp)]
        order: Exp,
        #[arg(long, default_value_t = 4)]
        max_exp: i64,
        #[arg(long, default_value_t = 3)]
        min_repeats: usize,
        #[arg(long, default_value_t = 4)]
        cofactor_degree: usize,
        #[command(flatten)]
        jobs: Jobs,
        #[arg(long)]
        json: bool,
    },
    /// Numerically check vector-valued modular transformation laws.
    ModularCheck {
        /// Relation id; all relations when omitted.
        #[arg(long)]
        relation: Option<String>,
        /// `RE,IM`; the default sample points when omitted.
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Jobs {
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "NAHM_FORGE_JOBS", default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct QuadArgs {
    /// Quadruple JSON file `{"A", "b", "c", "d", "parity"}`.
    #[arg(long, conflicts_with_all = ["a", "b", "c", "d"])]
    quadruple: Option<PathBuf>,
    #[arg(long = "A", value_parser = parse_matrix, allow_hyphen_values = true)]
    a: Option<Matrix>,
    #[arg(long, value_delimiter = ',', value_parser = parse_exp, allow_hyphen_values = true)]
    b: Vec<Exp>,
    #[arg(long, value_parser = parse_exp, allow_hyphen_values = true)]
    c: Option<Exp>,
    #[arg(long, value_delimiter = ',')]
    d: Vec<i64>,
}

/// A failure and the exit code it maps to.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TailTooLarge { .. } => Failure(1, e.to_string()),
            _ => Failure(2, e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

fn parse_status(s: &str) -> Result<Status, String> {
    Status::parse(s).ok_or_else(|| format!("unknown status `{s}` (theorem, known, conjecture)"))
}

fn parse_exp(s: &str) -> Result<Exp, String> {
    parse_r64(s).map_err(|e| e.to_string())
}

/// Matrix flag value: rows separated by `;`, entries by `,`.
#[derive(Clone)]
struct Matrix(Vec<Vec<Exp>>);

fn parse_matrix(s: &str) -> Result<Matrix, String> {
    s.split(';').map(|row| row.split(',').map(parse_exp).collect()).collect::<Result<_, _>>().map(Matrix)
}

fn parse_parity(s: &str, rank: usize) -> Result<Vec<Option<u8>>, Failure> {
    let mut mask = vec![None; rank];
    for item in s.split(',').filter(|x| !x.trim().is_empty()) {
        let bad = || usage(format!("invalid parity item `{item}`, expected INDEX:RESIDUE"));
        let (i, r) = item.split_once(':').ok_or_else(bad)?;
        let i: usize = i.trim().parse().map_err(|_| bad())?;
        let r: u8 = r.trim().parse().map_err(|_| bad())?;
        if i >= rank || r > 1 {
            return Err(bad());
        }
        mask[i] = Some(r);
    }
    Ok(mask)
}

fn parse_tau(s: &str) -> Result<Tau, Failure> {
    let bad = || usage(format!("invalid tau `{s}`, expected RE,IM"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    Ok(Tau::new(re, im)?)
}

/// Cartesian product of per-coordinate ranges, last coordinate fastest.
fn parse_grid(spec: &str) -> Result<Vec<Vec<Exp>>, Failure> {
    let mut axes = Vec::new();
    for part in spec.split(',') {
        let fields: Vec<&str> = part.split(':').collect();
        let vals = |i: usize| parse_r64(fields[i]).map_err(Failure::from);
        let axis = match fields.len() {
            1 => vec![vals(0)?],
            2 | 3 => {
                let (lo, hi) = (vals(0)?, vals(1)?);
                let step = if fields.len() == 3 { vals(2)? } else { int(1) };
                if step <= int(0) {
                    return Err(usage(format!("grid step must be positive in `{part}`")));
                }
                let mut v = Vec::new();
                let mut x = lo;
                while x <= hi {
                    v.push(x);
                    x += step;
                }
                v
            }
            _ => return Err(usage(format!("invalid grid axis `{part}`"))),
        };
        axes.push(axis);
    }
    let mut grid: Vec<Vec<Exp>> = vec![vec![]];
    for axis in axes {
        grid = grid.iter().flat_map(|p| axis.iter().map(move |x| [p.clone(), vec![*x]].concat())).collect();
    }
    Ok(grid)
}

fn load_quad(q: &QuadArgs) -> Result<NahmInput, Failure> {
    if let Some(path) = &q.quadruple {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        return serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())));
    }
    let a = q.a.clone().map(|m| m.0).ok_or_else(|| usage("give --quadruple FILE or --A, --b and --d"))?;
    let b = if q.b.is_empty() { vec![int(0); a.len()] } else { q.b.clone() };
    let d = if q.d.is_empty() { vec![1; a.len()] } else { q.d.clone() };
    Ok(NahmInput { quad: NahmQuadruple::new(a, b, q.c.unwrap_or_default(), d), parity: None })
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn report_line(r: &VerifyReport) -> String {
    let result = match r.result {
        Outcome::Pass => "pass",
        Outcome::Fail => "FAIL",
        Outcome::ConjecturePass => "conjecture_pass",
    };
    let mut line = format!("{:<28} {:<10} order {:<4} {:<16} {} ms", r.id, r.status.as_str(), r.order, result, r.ms);
    if let Some(m) = &r.first_mismatch {
        line += &format!("  first mismatch at q^{}: {} vs {}", m.exp, m.lhs, m.rhs);
    }
    line
}

#[derive(Serialize)]
struct SeriesOut {
    order: String,
    terms: Vec<[String; 2]>,
}

/// Runs a command and returns its output and whether every check passed.
fn run(cmd: Cmd) -> Result<(String, bool), Failure> {
    match cmd {
        Cmd::Verify { id, order, json: as_json } => {
            let r = verify(&id, order)?;
            let ok = r.passed();
            Ok((if as_json { json(&r) } else { report_line(&r) }, ok))
        }
        Cmd::VerifyAll { order, status_filter, jobs, json: as_json } => {
            if order <= 0 {
                return Err(Error::OrderTooSmall(order.to_string()).into());
            }
            let filter = (!status_filter.is_empty()).then_some(status_filter.as_slice());
            let results = par::with_jobs(jobs.jobs, || verify_all(SuiteOrders::uniform(order), filter));
            let mut reports = Vec::new();
            for r in results {
                reports.push(r?);
            }
            let ok = reports.iter().all(VerifyReport::passed);
            let out = if as_json {
                json(&reports)
            } else {
                let fails = reports.iter().filter(|r| !r.passed()).count();
                let mut lines: Vec<String> = reports.iter().map(report_line).collect();
                lines.push(format!("{} identities, {fails} failing", reports.len()));
                lines.join("\n")
            };
            Ok((out, ok))
        }
        Cmd::Nahm { quad, order, parity, json: as_json } => {
            let input = load_quad(&quad)?;
            let rank = input.quad.rank();
            let mask = match (&parity, input.parity) {
                (Some(p), _) => parse_parity(p, rank)?,
                (None, Some(m)) => m,
                (None, None) => vec![None; rank],
            };
            let s = nahm_sum(&input.quad, &mask, order)?;
            let terms: Vec<[String; 2]> = s.terms().iter().map(|(e, c)| [fmt_r64(*e), fmt_big(c)]).collect();
            let out = if as_json {
                json(&SeriesOut { order: fmt_r64(order), terms })
            } else {
                let mut lines: Vec<String> = terms.iter().map(|[e, c]| format!("{e} {c}")).collect();
                lines.push(format!("+ O(q^{})", fmt_r64(order)));
                lines.join("\n")
            };
            Ok((out, true))
        }
        Cmd::Dual { quad } => {
            let input = load_quad(&quad)?;
            let dual = input.quad.dual()?;
            Ok((json(&dual), true))
        }
        Cmd::Hunt { a: Matrix(a), d, b_grid, order, max_exp, min_repeats, cofactor_degree, jobs, json: as_json } => {
            if a.is_empty() || a.len() != d.len() {
                return Err(usage("--A and --d must have the same, nonzero rank"));
            }
            let grid = parse_grid(&b_grid)?;
            if grid.iter().any(|b| b.len() != a.len()) {
                return Err(usage(format!("--b-grid has {} axes, rank is {}", grid[0].len(), a.len())));
            }
            // Validate once up front so an invalid matrix is a usage error.
            NahmQuadruple::new(a.clone(), grid[0].clone(), int(0), d.clone()).validate()?;
            let cfg = RecognizeConfig { max_exp, min_repeats, cofactor_degree, ..RecognizeConfig::default() };
            let hits = par::with_jobs(jobs.jobs, || hunt(&a, &d, &grid, order, &cfg))?;
            let rows: Vec<_> = hits.iter().map(|h| h.row()).collect();
            let out = if as_json {
                json(&rows)
            } else {
                let mut lines: Vec<String> = rows
                    .iter()
                    .map(|r| {
                        format!(
                            "b=({}) delta={} const={} period={} residues={:?} cofactor={:?} checked to {}",
                            r.b.join(","),
                            r.delta,
                            r.constant,
                            r.period,
                            r.residue_exponents,
                            r.cofactor,
                            r.order_checked
                        )
                    })
                    .collect();
                lines.push(format!("{} hits on {} grid points", rows.len(), grid.len()));
                lines.join("\n")
            };
            Ok((out, true))
        }
        Cmd::ModularCheck { relation, tau, tol, json: as_json } => {
            if !(tol > 0.0) {
                return Err(usage("--tol must be positive"));
            }
            let rels = match &relation {
                Some(r) => vec![Relation::parse(r)?],
                None => Relation::ALL.to_vec(),
            };
            let taus = match &tau {
                Some(t) => vec![parse_tau(t)?],
                None => Tau::default_points(),
            };
            let cfg = EvalConfig::default();
            let mut reports: Vec<ModularReport> = Vec::new();
            for rel in rels {
                for &t in &taus {
                    reports.push(check_transformation(rel, t, tol, &cfg)?);
                }
            }
            let ok = reports.iter().all(|r| r.pass);
            let out = if as_json {
                json(&reports)
            } else {
                reports
                    .iter()
                    .map(|r| {
                        format!(
                            "{:<22} tau=({}, {}) max_dev={:.3e} tail_bound={:.3e} {}",
                            r.theorem,
                            r.tau[0],
                            r.tau[1],
                            r.max_dev,
                            r.tail_bound,
                            if r.pass { "pass" } else { "FAIL" }
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Ok((out, ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((out, ok)) => {
            let written = match &cli.output {
                Some(p) => fs::write(p, out + "\n"),
                None => writeln!(std::io::stdout(), "{out}"),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
