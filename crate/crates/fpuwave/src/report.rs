//! Text outputs: certificate reports, summary rows, extrema records and
//! sampled profiles.

use crate::pipeline::{failing_clauses, Certified, RowOutcome};
use fpu_core::wave::{build_u, ExtremumRecord, Profile};
use fpu_core::SolveConfig;
use serde_json::json;
use std::fmt::Write as _;

fn config_echo(out: &mut String, label: Option<u32>, c: &SolveConfig) {
    if let Some(l) = label {
        let _ = writeln!(out, "label={l}");
    }
    let _ = writeln!(out, "m={}", c.m);
    let _ = writeln!(out, "mu_bar={}", c.mu_bar);
    let _ = writeln!(out, "sigma={}", c.sigma);
    let _ = writeln!(out, "r={}", c.r);
    let _ = writeln!(out, "k={}", c.k);
    let _ = writeln!(out, "kappa={}", c.kappa);
    let _ = writeln!(out, "rho={}", c.rho);
    let _ = writeln!(out, "degree={}", c.degree);
    let _ = writeln!(out, "sites={}", c.sites);
}

/// `key=value` lines; every bound is a decimal upper bound.
pub fn certificate_report(label: Option<u32>, config: &SolveConfig, c: &Certified) -> String {
    let cert = &c.certificate;
    let mut out = String::new();
    config_echo(&mut out, label, config);
    let _ = writeln!(out, "mu_radius={:e}", c.mu_radius);
    let _ = writeln!(out, "mu_lower={:e}", cert.mu.lower());
    let _ = writeln!(out, "mu_upper={:e}", cert.mu.upper());
    let _ = writeln!(out, "attempts={}", c.attempts);
    let _ = writeln!(out, "eps={:e}", cert.eps);
    let _ = writeln!(out, "K={:e}", cert.k);
    let _ = writeln!(out, "delta={:e}", cert.delta);
    let _ = writeln!(out, "lambda_norm={:e}", cert.lambda_norm);
    let _ = writeln!(out, "delta_prime={:e}", cert.delta_prime);
    let _ = writeln!(out, "mode_sets={}", cert.bounds.len());
    if let Some((set, b)) = cert.worst() {
        let _ = writeln!(out, "worst_set={set}");
        let _ = writeln!(out, "worst_bound={b:e}");
    }
    if let Some(p) = &cert.profile {
        let _ = writeln!(out, "extrema_found={}", p.extrema_found);
        let _ = writeln!(out, "extrema_certified={}", p.extrema_certified);
        let _ = writeln!(out, "sup_lower={:e}", p.sup.lower);
        let _ = writeln!(out, "sup_upper={:e}", p.sup.upper);
        let _ = writeln!(out, "sup_window={}", p.sup_ok);
        let _ = writeln!(out, "decay={}", p.decay_ok);
    }
    let _ = writeln!(out, "failed={}", failing_clauses(cert));
    let _ = writeln!(out, "pass={}", cert.pass);
    out
}

pub const SUMMARY_HEADER: &str = "label m residual eps K delta pass E_found E sup_window diagram";

fn sci(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"))
}

/// One whitespace-separated summary row.
pub fn summary_line(o: &RowOutcome) -> String {
    let cert = o.certificate();
    let found = o.profile.as_ref().map_or("-".to_string(), |p| p.extrema_found.to_string());
    let window = o.profile.as_ref().map_or("-", |p| if p.sup_ok { "in" } else { "out" });
    let diagram = match &o.diagram {
        Some(d) if d.verbatim => "verbatim",
        Some(d) if d.geometric => "geometric",
        Some(_) => "mismatch",
        None => "-",
    };
    let advisory = !o.entry.certificate_binding() && o.certificate().is_some_and(|c| !c.pass);
    let pass = match (o.pass(), advisory) {
        (true, true) => "pass(cert-advisory)",
        (true, false) => "pass",
        (false, _) => "FAIL",
    };
    format!(
        "{} {} {} {} {} {} {} {} {} {} {}",
        o.entry.label,
        o.entry.m,
        sci(o.residual()),
        sci(cert.map(|c| c.eps)),
        sci(cert.map(|c| c.k)),
        sci(cert.map(|c| c.delta)),
        pass,
        found,
        o.entry.extrema,
        window,
        diagram,
    )
}

/// One JSON record per line.
pub fn extrema_records(records: &[ExtremumRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let v = json!({
            "position": r.position,
            "value_mid": r.value.mid(),
            "value_rad": r.value.rad(),
            "kind": r.kind.name(),
            "indeterminate": r.indeterminate,
        });
        let _ = writeln!(out, "{v}");
    }
    out
}

/// Grid `a, a + h, ...` up to `b` (inclusive within rounding).
pub fn grid(a: f64, b: f64, h: f64) -> Vec<f64> {
    let n = ((b - a) / h + 1e-9).floor() as usize;
    (0..=n).map(|i| a + i as f64 * h).collect()
}

/// CSV with columns `x,v_mid,v_rad`.
pub fn sample_v(p: &Profile<'_>, xs: &[f64]) -> String {
    let mut out = String::from("x,v_mid,v_rad\n");
    for &x in xs {
        let v = p.eval(x);
        let _ = writeln!(out, "{x},{:e},{:e}", v.mid(), v.rad());
    }
    out
}

/// CSV with columns `x,u_mid,u_rad`.
pub fn sample_u(p: &Profile<'_>, xs: &[f64], tol: f64) -> String {
    let mut out = String::from("x,u_mid,u_rad\n");
    for &x in xs {
        let u = build_u(p, x, tol);
        let _ = writeln!(out, "{x},{:e},{:e}", u.mid(), u.rad());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        assert_eq!(grid(-10.0, 10.0, 0.05).len(), 401);
        assert_eq!(grid(0.0, 1.0, 0.25), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(grid(0.0, 0.0, 0.1), vec![0.0]);
    }
}
