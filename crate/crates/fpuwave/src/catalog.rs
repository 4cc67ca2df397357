//! The shipped parameter catalog and bump guess specs.

use fpu_core::{Bump, Rational, SolveConfig};
use thiserror::Error;

const CATALOG: &str = include_str!("../data/catalog.txt");

#[derive(Debug, Error, PartialEq)]
pub enum CatalogError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown label {0}")]
    UnknownLabel(u32),
    #[error("bad guess `{0}`")]
    Guess(String),
}

/// One catalog row.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub label: u32,
    pub m: u32,
    pub mu_bar: Rational,
    pub sigma: u8,
    /// One-decimal base of the sup-norm of `v`.
    pub sup_base: f64,
    /// Number of extrema above the threshold.
    pub extrema: usize,
    /// Glyph heights, left to right.
    pub diagram: Vec<f64>,
    pub r: Rational,
    pub k: usize,
    pub kappa: usize,
    pub guess: Vec<Bump>,
}

impl CatalogEntry {
    /// Default solve configuration; the center is sized from the stated sup-norm.
    pub fn config(&self) -> SolveConfig {
        SolveConfig::new(self.m, self.mu_bar, self.sigma, self.r, self.k, self.kappa, self.sup_base + 0.1)
    }

    /// Rows with `r <= 3/2` are solved but their certificates are advisory.
    pub fn certificate_binding(&self) -> bool {
        self.r.num() * 2 > self.r.den() * 3
    }
}

/// Parses `c:a;c:a;...` (also accepts `bump:c:a` and `,` separators).
pub fn parse_guess(s: &str) -> Result<Vec<Bump>, CatalogError> {
    let bad = || CatalogError::Guess(s.to_string());
    s.split([';', ','])
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let t = t.trim();
            let t = t.strip_prefix("bump:").unwrap_or(t);
            let (c, a) = t.split_once(':').ok_or_else(bad)?;
            let center: f64 = c.trim().parse().map_err(|_| bad())?;
            let amplitude: f64 = a.trim().parse().map_err(|_| bad())?;
            if !center.is_finite() || !amplitude.is_finite() {
                return Err(bad());
            }
            Ok(Bump { center, amplitude })
        })
        .collect()
}

fn parse_line(line: usize, text: &str) -> Result<CatalogEntry, CatalogError> {
    let err = |msg: &str| CatalogError::Syntax { line, msg: msg.to_string() };
    let f: Vec<&str> = text.split_whitespace().collect();
    if f.len() != 11 {
        return Err(err("expected 11 columns"));
    }
    let int = |i: usize, name: &str| f[i].parse::<u64>().map_err(|_| err(name));
    let rat = |i: usize, name: &str| f[i].parse::<Rational>().map_err(|_| err(name));
    let diagram = f[6]
        .split(',')
        .map(|g| g.parse::<f64>().map_err(|_| err("diagram")))
        .collect::<Result<Vec<_>, _>>()?;
    let entry = CatalogEntry {
        label: int(0, "label")? as u32,
        m: int(1, "m")? as u32,
        mu_bar: rat(2, "mu_bar")?,
        sigma: int(3, "sigma")? as u8,
        sup_base: f[4].parse().map_err(|_| err("sup"))?,
        extrema: int(5, "E")? as usize,
        diagram,
        r: rat(7, "r")?,
        k: int(8, "k")? as usize,
        kappa: int(9, "kappa")? as usize,
        guess: parse_guess(f[10]).map_err(|_| err("guess"))?,
    };
    if entry.diagram.len() != entry.extrema {
        return Err(err("diagram length differs from E"));
    }
    Ok(entry)
}

/// Parses catalog text: whitespace columns, `#` comments.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| parse_line(i + 1, l))
        .collect()
}

/// The built-in catalog.
pub fn catalog() -> Vec<CatalogEntry> {
    parse_catalog(CATALOG).expect("shipped catalog parses")
}

pub fn entry(label: u32) -> Result<CatalogEntry, CatalogError> {
    catalog().into_iter().find(|e| e.label == label).ok_or(CatalogError::UnknownLabel(label))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_rows() {
        let c = catalog();
        assert_eq!(c.len(), 22);
        for (i, e) in c.iter().enumerate() {
            assert_eq!(e.label as usize, i + 1);
            e.config().validate().unwrap();
        }
        let r9 = &c[8];
        assert_eq!(r9.mu_bar, Rational::new(-1, 256).unwrap());
        assert_eq!(r9.r, Rational::new(3, 2).unwrap());
        assert_eq!(c[0].m, 2);
        assert_eq!(c[21].r, Rational::new(9, 8).unwrap());
    }

    #[test]
    fn binding_rows() {
        let advisory: Vec<u32> = catalog().iter().filter(|e| !e.certificate_binding()).map(|e| e.label).collect();
        assert_eq!(advisory, [5, 9, 10, 16, 20, 21, 22]);
    }

    #[test]
    fn guesses() {
        assert_eq!(parse_guess("bump:0:1.0").unwrap(), vec![Bump { center: 0.0, amplitude: 1.0 }]);
        assert_eq!(parse_guess("-1:2;1:-2").unwrap().len(), 2);
        assert!(parse_guess("0").is_err());
        assert!(parse_guess("0:x").is_err());
        assert_eq!(entry(99), Err(CatalogError::UnknownLabel(99)));
    }
}
