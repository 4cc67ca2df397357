//! Line-oriented solution files and `key value` configuration files.
//!
//! ```text
//! fpuwave-solution 1
//! label 3
//! m 3
//! mu_bar 0/1
//! ...
//! site 0 <c_0> ... <c_D>
//! tail_coeff <W_0> ... <W_D>
//! tail_band <b_0> ... <b_D+2>
//! end
//! ```
//!
//! Reals are written in shortest round-trip exponent form, so reading a
//! written file gives back the identical bits.

use fpu_core::{Arc, Chain, Problem, Rational, SolveConfig, TailWeight};
use std::fmt::Write as _;
use std::str::FromStr;
use thiserror::Error;

pub const MAGIC: &str = "fpuwave-solution";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `{0}`")]
    Missing(&'static str),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("truncated file")]
    Truncated,
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// A solved chain together with the configuration it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub label: Option<u32>,
    pub config: SolveConfig,
    pub w: Chain<f64>,
}

impl Solution {
    pub fn problem(&self) -> Result<Problem, FormatError> {
        Problem::new(self.config.clone()).map_err(|e| FormatError::Config(e.to_string()))
    }
}

fn push_reals(out: &mut String, key: &str, xs: &[f64]) {
    out.push_str(key);
    for x in xs {
        let _ = write!(out, " {x:e}");
    }
    out.push('\n');
}

fn write_config(out: &mut String, c: &SolveConfig) {
    let _ = writeln!(out, "m {}", c.m);
    let _ = writeln!(out, "mu_bar {}", c.mu_bar);
    let _ = writeln!(out, "sigma {}", c.sigma);
    let _ = writeln!(out, "r {}", c.r);
    let _ = writeln!(out, "k {}", c.k);
    let _ = writeln!(out, "kappa {}", c.kappa);
    let _ = writeln!(out, "rho {}", c.rho);
    let _ = writeln!(out, "degree {}", c.degree);
    let _ = writeln!(out, "sites {}", c.sites);
    let _ = writeln!(out, "newton_tol {:e}", c.newton_tol);
    let _ = writeln!(out, "max_iter {}", c.max_iter);
    let _ = writeln!(out, "mu_radius {:e}", c.mu_radius);
}

pub fn write_solution(s: &Solution) -> String {
    let mut out = format!("{MAGIC} {VERSION}\n");
    if let Some(l) = s.label {
        let _ = writeln!(out, "label {l}");
    }
    write_config(&mut out, &s.config);
    for (j, a) in s.w.center.iter().enumerate() {
        push_reals(&mut out, &format!("site {j}"), &a.coeff);
    }
    push_reals(&mut out, "tail_coeff", &s.w.tail.coeff);
    push_reals(&mut out, "tail_band", &s.w.tail.band);
    out.push_str("end\n");
    out
}

/// Header keys shared by solution and configuration files.
#[derive(Default)]
struct Header {
    label: Option<u32>,
    m: Option<u32>,
    mu_bar: Option<Rational>,
    sigma: Option<u8>,
    r: Option<Rational>,
    k: Option<usize>,
    kappa: Option<usize>,
    rho: Option<Rational>,
    degree: Option<usize>,
    sites: Option<usize>,
    newton_tol: Option<f64>,
    max_iter: Option<usize>,
    mu_radius: Option<f64>,
    sup: Option<f64>,
}

fn val<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T, FormatError> {
    v.trim().parse().map_err(|_| syntax(line, format!("bad value for `{key}`")))
}

impl Header {
    /// Returns `false` for unknown keys.
    fn set(&mut self, line: usize, key: &str, v: &str) -> Result<bool, FormatError> {
        match key {
            "label" => self.label = Some(val(line, key, v)?),
            "m" => self.m = Some(val(line, key, v)?),
            "mu_bar" | "mu" => self.mu_bar = Some(val(line, key, v)?),
            "sigma" => self.sigma = Some(val(line, key, v)?),
            "r" => self.r = Some(val(line, key, v)?),
            "k" => self.k = Some(val(line, key, v)?),
            "kappa" => self.kappa = Some(val(line, key, v)?),
            "rho" => self.rho = Some(val(line, key, v)?),
            "degree" => self.degree = Some(val(line, key, v)?),
            "sites" => self.sites = Some(val(line, key, v)?),
            "newton_tol" => self.newton_tol = Some(val(line, key, v)?),
            "max_iter" => self.max_iter = Some(val(line, key, v)?),
            "mu_radius" => self.mu_radius = Some(val(line, key, v)?),
            "sup" => self.sup = Some(val(line, key, v)?),
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn config(&self) -> Result<SolveConfig, FormatError> {
        let mut c = SolveConfig::new(
            self.m.ok_or(FormatError::Missing("m"))?,
            self.mu_bar.ok_or(FormatError::Missing("mu_bar"))?,
            self.sigma.ok_or(FormatError::Missing("sigma"))?,
            self.r.ok_or(FormatError::Missing("r"))?,
            self.k.ok_or(FormatError::Missing("k"))?,
            self.kappa.ok_or(FormatError::Missing("kappa"))?,
            self.sup.unwrap_or(2.0),
        );
        if let Some(x) = self.rho {
            c.rho = x;
        }
        if let Some(x) = self.degree {
            c.degree = x;
        }
        if let Some(x) = self.sites {
            c.sites = x;
        }
        if let Some(x) = self.newton_tol {
            c.newton_tol = x;
        }
        if let Some(x) = self.max_iter {
            c.max_iter = x;
        }
        if let Some(x) = self.mu_radius {
            c.mu_radius = x;
        }
        c.validate().map_err(|e| FormatError::Config(e.to_string()))?;
        Ok(c)
    }
}

fn reals(line: usize, fields: &[&str], n: usize) -> Result<Vec<f64>, FormatError> {
    if fields.len() != n {
        return Err(syntax(line, format!("expected {n} values, found {}", fields.len())));
    }
    fields.iter().map(|f| val::<f64>(line, "coefficient", f)).collect()
}

fn split_key(text: &str) -> (&str, &str) {
    let t = text.trim();
    match t.split_once(|c: char| c.is_whitespace() || c == '=') {
        Some((k, v)) => (k.trim(), v.trim().trim_start_matches('=').trim()),
        None => (t, ""),
    }
}

pub fn read_solution(text: &str) -> Result<Solution, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    let (n0, first) = lines.next().ok_or(FormatError::Truncated)?;
    match first.split_whitespace().collect::<Vec<_>>()[..] {
        [MAGIC, v] if v == VERSION.to_string() => {}
        [MAGIC, v] => return Err(syntax(n0, format!("unsupported version {v}"))),
        _ => return Err(syntax(n0, "not a solution file")),
    }
    let mut h = Header::default();
    let mut sites: Vec<Option<Vec<f64>>> = Vec::new();
    let mut tail_coeff = None;
    let mut tail_band = None;
    let mut done = false;
    let mut config: Option<SolveConfig> = None;
    for (n, l) in lines {
        if done {
            return Err(syntax(n, "content after `end`"));
        }
        let fields: Vec<&str> = l.split_whitespace().collect();
        let key = fields[0];
        if key == "end" {
            done = true;
            continue;
        }
        if key == "site" || key == "tail_coeff" || key == "tail_band" {
            let cfg = match &config {
                Some(c) => c,
                None => {
                    config = Some(h.config()?);
                    sites = vec![None; config.as_ref().map_or(0, |c| c.sites)];
                    config.as_ref().expect("just set")
                }
            };
            let d = cfg.degree;
            match key {
                "site" => {
                    let j: usize = fields.get(1).ok_or_else(|| syntax(n, "missing site index"))?.parse().map_err(|_| syntax(n, "bad site index"))?;
                    let slot = sites.get_mut(j).ok_or_else(|| syntax(n, "site index out of range"))?;
                    if slot.is_some() {
                        return Err(syntax(n, "duplicate site"));
                    }
                    *slot = Some(reals(n, &fields[2..], d + 1)?);
                }
                "tail_coeff" => tail_coeff = Some(reals(n, &fields[1..], d + 1)?),
                _ => tail_band = Some(reals(n, &fields[1..], d + 3)?),
            }
            continue;
        }
        if config.is_some() {
            return Err(syntax(n, "header key after coefficients"));
        }
        let (k, v) = split_key(l);
        if !h.set(n, k, v)? {
            return Err(syntax(n, format!("unknown key `{k}`")));
        }
    }
    if !done {
        return Err(FormatError::Truncated);
    }
    let config = config.ok_or(FormatError::Truncated)?;
    let d = config.degree;
    let center = sites
        .into_iter()
        .map(|c| c.map(|coeff| Arc { coeff, band: vec![0.0; d + 3] }).ok_or(FormatError::Truncated))
        .collect::<Result<Vec<_>, _>>()?;
    let w = Chain {
        parity: config.tau(),
        center,
        tail: TailWeight { coeff: tail_coeff.ok_or(FormatError::Truncated)?, band: tail_band.ok_or(FormatError::Truncated)? },
    };
    Ok(Solution { label: h.label, config, w })
}

/// A run configuration: the solution header keys plus optional `sup`
/// (sizes the center when `sites` is absent) and `guess`. Accepts
/// `key value` or `key = value`; `#` starts a comment.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub label: Option<u32>,
    pub config: SolveConfig,
    pub guess: Option<String>,
}

pub fn read_config(text: &str) -> Result<RunConfig, FormatError> {
    let mut h = Header::default();
    let mut guess = None;
    for (i, l) in text.lines().enumerate() {
        let l = l.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let (k, v) = split_key(l);
        if k == "guess" {
            guess = Some(v.to_string());
        } else if !h.set(i + 1, k, v)? {
            return Err(syntax(i + 1, format!("unknown key `{k}`")));
        }
    }
    Ok(RunConfig { label: h.label, config: h.config()?, guess })
}
