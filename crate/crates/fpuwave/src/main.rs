use clap::{Args, Parser, Subcommand};
use fpu_core::wave::{self, Profile};
use fpu_core::{Executor, Sequential};
use fpuwave::pipeline::{self, failing_clauses, MAX_HALVINGS, RESIDUAL_LIMIT};
use fpuwave::report::{self, SUMMARY_HEADER};
use fpuwave::{catalog, parse_guess, read_config, read_solution, write_solution, Solution, Threads};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Traveling waves of FPU lattices: solve, certify and sample.
#[derive(Parser)]
#[command(name = "fpuwave", version)]
struct Cli {
    /// Worker threads (default: FPUWAVE_WORKERS or the available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Newton-solve a catalog row or a configuration file.
    Solve {
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        label: Option<u32>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Initial guess, e.g. `bump:0:1.3` or `-1:1.4;1:1.4`.
        #[arg(long)]
        guess: Option<String>,
        /// Output solution file [default: row<label>.sol or solution.sol].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a stored solution.
    Certify {
        file: PathBuf,
        /// Fixed parameter-interval radius; without it the default radius is
        /// halved on failure.
        #[arg(long)]
        mu_radius: Option<f64>,
    },
    /// Sample v on a grid as CSV (x, v_mid, v_rad).
    Sample {
        file: PathBuf,
        #[command(flatten)]
        grid: Grid,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the extrema of v above 1/64, one record per line.
    Extrema {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct u as CSV (x, u_mid, u_rad).
    Wave {
        file: PathBuf,
        /// Single evaluation point (overrides the grid).
        #[arg(long, allow_negative_numbers = true)]
        at: Option<f64>,
        #[command(flatten)]
        grid: Grid,
        /// Truncation tolerance of the lattice sums.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve, certify and check catalog rows: `all` or a list such as `3,4,8`.
    Table {
        rows: String,
        /// Only run the solve-tier checks.
        #[arg(long)]
        no_certify: bool,
    },
}

#[derive(Args)]
struct Grid {
    /// `a:b`
    #[arg(long, default_value = "-10:10", allow_hyphen_values = true)]
    range: String,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
}

impl Grid {
    fn points(&self) -> Result<Vec<f64>, String> {
        let (a, b) = self.range.split_once(':').ok_or("range must be a:b")?;
        let a: f64 = a.trim().parse().map_err(|_| "bad range start")?;
        let b: f64 = b.trim().parse().map_err(|_| "bad range end")?;
        if !(self.step > 0.0) || !(a <= b) || !a.is_finite() || !b.is_finite() {
            return Err("need a <= b and a positive step".into());
        }
        Ok(report::grid(a, b, self.step))
    }
}

/// Stdout writes ignore errors so a closed pipe ends output quietly.
macro_rules! say {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

fn put(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

enum Failure {
    /// A rigorous or numerical check failed.
    Check(String),
    /// Usage, parse or IO problem.
    Usage(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn load(path: &Path) -> Result<Solution, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    read_solution(&text).map_err(|e| usage(format!("parse error in {}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            put(text);
            Ok(())
        }
    }
}

fn cmd_solve(label: Option<u32>, config: Option<PathBuf>, guess: Option<String>, out: Option<PathBuf>, exec: &dyn Executor) -> Outcome {
    let (label, cfg, default_guess) = match (label, config) {
        (Some(l), _) => {
            let e = catalog::entry(l).map_err(usage)?;
            (Some(l), e.config(), e.guess)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let rc = read_config(&text).map_err(usage)?;
            let g = rc.guess.as_deref().map(parse_guess).transpose().map_err(usage)?;
            (rc.label, rc.config, g.unwrap_or_else(|| vec![fpu_core::Bump { center: 0.0, amplitude: 1.0 }]))
        }
        (None, None) => return Err(usage("need --label or --config")),
    };
    let bumps = match guess {
        Some(g) => parse_guess(&g).map_err(usage)?,
        None => default_guess,
    };
    let solved = pipeline::solve(cfg, &bumps, exec).map_err(|e| Failure::Check(format!("reason=solve-failed {e}")))?;
    let st = &solved.state;
    say!("residual={:e}", st.residual);
    say!("iterations={}", st.iterations);
    say!("converged={}", st.converged);
    say!("unknowns={}", st.jacobian_dim);
    let cs = solved.problem.space();
    let decay = wave::decay_report(cs, &st.w);
    say!("decay_constant={:e}", decay.c);
    say!("site norm ratio");
    for (j, n) in cs.site_norms(&st.w).iter().enumerate() {
        let q = if j == 0 { f64::NAN } else { decay.ratios[j - 1] };
        say!("{j} {n:.3e} {q:.3e}");
    }
    let path = out.unwrap_or_else(|| PathBuf::from(label.map_or("solution.sol".to_string(), |l| format!("row{l}.sol"))));
    let sol = Solution { label, config: solved.problem.config().clone(), w: st.w.clone() };
    std::fs::write(&path, write_solution(&sol)).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    say!("written={}", path.display());
    if st.residual < RESIDUAL_LIMIT {
        Ok(())
    } else {
        Err(Failure::Check(format!("reason=residual {:e} not below {RESIDUAL_LIMIT:e}", st.residual)))
    }
}

fn cmd_certify(file: &Path, mu_radius: Option<f64>, exec: &dyn Executor) -> Outcome {
    let sol = load(file)?;
    let problem = sol.problem().map_err(usage)?;
    let expect = sol.label.and_then(|l| catalog::entry(l).ok()).map(|e| pipeline::expectation(&e));
    let (start, halvings) = match mu_radius {
        Some(r) if r >= 0.0 && r.is_finite() => (r, 0),
        Some(_) => return Err(usage("mu radius must be finite and nonnegative")),
        None => (problem.config().mu_radius, MAX_HALVINGS),
    };
    let c = pipeline::certify_halving(&problem, &sol.w, start, halvings, exec, expect.as_ref()).map_err(|e| Failure::Check(format!("failed=error {e}")))?;
    put(&report::certificate_report(sol.label, &sol.config, &c));
    if c.certificate.pass {
        Ok(())
    } else {
        Err(Failure::Check(format!("failed clause: {}", failing_clauses(&c.certificate))))
    }
}

fn cmd_table(rows: &str, certify: bool, workers: usize) -> Outcome {
    let all = catalog::catalog();
    let picked: Vec<_> = if rows.trim() == "all" {
        all
    } else {
        let labels = rows
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<u32>().map_err(|_| usage(format!("bad label `{s}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        labels.into_iter().map(|l| catalog::entry(l).map_err(usage)).collect::<Result<Vec<_>, _>>()?
    };
    if picked.is_empty() {
        return Err(usage("empty row selection"));
    }
    let outcomes: Vec<_> = if workers > 1 && picked.len() > 1 {
        // rows in parallel, each row sequential inside
        let mut out: Vec<_> = Vec::new();
        for chunk in picked.chunks(workers) {
            let done: Vec<_> = std::thread::scope(|s| {
                let hs: Vec<_> = chunk.iter().map(|e| s.spawn(move || pipeline::run_row(e, certify, &Sequential))).collect();
                hs.into_iter().map(|h| h.join().expect("row worker panicked")).collect()
            });
            out.extend(done);
        }
        out
    } else {
        picked.iter().map(|e| pipeline::run_row(e, certify, &Threads::new(workers))).collect()
    };
    say!("{SUMMARY_HEADER}");
    for o in &outcomes {
        say!("{}", report::summary_line(o));
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.pass()).map(|o| o.entry.label.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("failing rows: {}", failed.join(","))))
    }
}

fn run(cli: Cli) -> Outcome {
    let threads = cli.workers.map_or_else(Threads::from_env, Threads::new);
    match cli.cmd {
        Cmd::Solve { label, config, guess, out } => cmd_solve(label, config, guess, out, &threads),
        Cmd::Certify { file, mu_radius } => cmd_certify(&file, mu_radius, &threads),
        Cmd::Sample { file, grid, out } => {
            let sol = load(&file)?;
            let problem = sol.problem().map_err(usage)?;
            let xs = grid.points().map_err(usage)?;
            let p = Profile::new(problem.space(), &sol.w, sol.config.kappa);
            emit(&out, &report::sample_v(&p, &xs))
        }
        Cmd::Extrema { file, out } => {
            let sol = load(&file)?;
            let problem = sol.problem().map_err(usage)?;
            let p = Profile::new(problem.space(), &sol.w, sol.config.kappa);
            let recs = wave::find_extrema(&p, wave::EXTREMUM_THRESHOLD);
            emit(&out, &report::extrema_records(&recs))
        }
        Cmd::Wave { file, at, grid, tol, out } => {
            if !(tol > 0.0) {
                return Err(usage("tol must be positive"));
            }
            let sol = load(&file)?;
            let problem = sol.problem().map_err(usage)?;
            let xs = match at {
                Some(x) => vec![x],
                None => grid.points().map_err(usage)?,
            };
            let p = Profile::new(problem.space(), &sol.w, sol.config.kappa);
            emit(&out, &report::sample_u(&p, &xs, tol))
        }
        Cmd::Table { rows, no_certify } => cmd_table(&rows, !no_certify, threads.workers()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
