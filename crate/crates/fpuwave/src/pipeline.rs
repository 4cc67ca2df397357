//! Solve, certify and check one catalog row.

use crate::catalog::CatalogEntry;
use fpu_core::validate::{certify_with, check_profile, ProfileVerdict};
use fpu_core::wave::{self, DiagramVerdict, ExtremumRecord, Profile, EXTREMUM_THRESHOLD};
use fpu_core::{Bump, Certificate, CertifyError, Clause, Executor, NewtonState, Problem, ProfileExpect, SolveConfig, SolveError};

/// Solve-tier residual requirement.
pub const RESIDUAL_LIMIT: f64 = 1e-9;
/// How often the parameter interval may be halved after a failure.
pub const MAX_HALVINGS: usize = 10;

#[derive(Clone, Debug)]
pub struct Solved {
    pub problem: Problem,
    pub state: NewtonState,
}

pub fn solve(config: SolveConfig, guess: &[Bump], exec: &dyn Executor) -> Result<Solved, SolveError> {
    let problem = Problem::new(config)?;
    let state = problem.newton_solve(problem.make_guess(guess), exec)?;
    Ok(Solved { problem, state })
}

#[derive(Clone, Debug)]
pub struct Certified {
    pub certificate: Certificate,
    /// Parameter-interval radius of the reported certificate.
    pub mu_radius: f64,
    pub attempts: usize,
}

/// Certifies at `start`, halving the parameter radius while the
/// certificate fails and the residual bound keeps shrinking. A contraction
/// failure whose `K` does not drop by a tenth also ends the search.
pub fn certify_halving(
    problem: &Problem,
    w: &fpu_core::Chain<f64>,
    start: f64,
    halvings: usize,
    exec: &dyn Executor,
    expect: Option<&ProfileExpect>,
) -> Result<Certified, CertifyError> {
    let m = problem.build_m(w, problem.mu_bar(), exec)?;
    let mut radius = start;
    let mut attempts = 1;
    let mut cert = certify_with(problem, w, &m, radius, exec, expect)?;
    while !cert.pass && attempts <= halvings && cert.failures.iter().any(|&c| c != Clause::Profile) {
        let next = certify_with(problem, w, &m, radius * 0.5, exec, expect)?;
        attempts += 1;
        // a narrower interval mainly shrinks eps; K barely moves with it
        let k_stuck = next.failures.contains(&Clause::Contraction) && next.k > 0.9 * cert.k;
        let stalled = next.eps > 0.9 * cert.eps || k_stuck;
        radius *= 0.5;
        cert = next;
        if stalled {
            break;
        }
    }
    Ok(Certified { certificate: cert, mu_radius: radius, attempts })
}

pub fn expectation(entry: &CatalogEntry) -> ProfileExpect {
    ProfileExpect { extrema: entry.extrema, sup_base: entry.sup_base }
}

/// Extrema of `v` above the threshold, indeterminate ones excluded.
pub fn extrema(problem: &Problem, w: &fpu_core::Chain<f64>) -> Vec<ExtremumRecord> {
    let p = Profile::new(problem.space(), w, problem.config().kappa);
    wave::find_extrema(&p, EXTREMUM_THRESHOLD).into_iter().filter(|e| !e.indeterminate).collect()
}

#[derive(Debug)]
pub struct RowOutcome {
    pub entry: CatalogEntry,
    pub solved: Result<Solved, SolveError>,
    /// Solve-tier profile checks on the numerical solution.
    pub profile: Option<ProfileVerdict>,
    pub diagram: Option<DiagramVerdict>,
    /// `None` when certification was not requested.
    pub certified: Option<Result<Certified, CertifyError>>,
    certify: bool,
}

impl RowOutcome {
    pub fn residual(&self) -> Option<f64> {
        self.solved.as_ref().ok().map(|s| s.state.residual)
    }

    pub fn solve_pass(&self) -> bool {
        self.residual().is_some_and(|r| r < RESIDUAL_LIMIT) && self.profile.as_ref().is_some_and(|p| p.pass)
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certified.as_ref().and_then(|c| c.as_ref().ok()).map(|c| &c.certificate)
    }

    /// Solve tier, plus the certificate where it is binding and requested.
    pub fn pass(&self) -> bool {
        let cert_ok = !self.certify || !self.entry.certificate_binding() || self.certificate().is_some_and(|c| c.pass);
        self.solve_pass() && cert_ok
    }
}

pub fn run_row(entry: &CatalogEntry, certify: bool, exec: &dyn Executor) -> RowOutcome {
    run_row_inner(entry, certify.then_some(MAX_HALVINGS), exec)
}

/// `run_row` with certification and a bounded number of halvings.
pub fn run_row_with(entry: &CatalogEntry, halvings: usize, exec: &dyn Executor) -> RowOutcome {
    run_row_inner(entry, Some(halvings), exec)
}

fn run_row_inner(entry: &CatalogEntry, halvings: Option<usize>, exec: &dyn Executor) -> RowOutcome {
    let certify = halvings.is_some();
    let solved = solve(entry.config(), &entry.guess, exec);
    let (mut profile, mut diagram, mut certified) = (None, None, None);
    if let Ok(s) = &solved {
        let expect = expectation(entry);
        profile = Some(check_profile(&s.problem, &s.state.w, 0.0, &expect));
        diagram = Some(wave::match_diagram(&extrema(&s.problem, &s.state.w), &entry.diagram));
        if let (Some(halvings), true) = (halvings, s.state.residual < RESIDUAL_LIMIT) {
            let start = s.problem.config().mu_radius;
            certified = Some(certify_halving(&s.problem, &s.state.w, start, halvings, exec, Some(&expect)));
        }
    }
    RowOutcome { entry: entry.clone(), solved, profile, diagram, certified, certify }
}

/// Comma-separated names of the failing clauses.
pub fn failing_clauses(c: &Certificate) -> String {
    if c.failures.is_empty() {
        return "none".to_string();
    }
    c.failures.iter().map(|f| f.name()).collect::<Vec<_>>().join(",")
}
