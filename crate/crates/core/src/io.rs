//! System files: a header line `QQ n m [N]`, `QQ[[v]] n m N` or
//! `GF(p) n 0`, then one polynomial per line. Blank lines and lines
//! starting with `#` are skipped.

use std::path::Path;

use crate::error::{Error, Result};
use crate::hensel::DeformedSystem;
use crate::polynomials::{deformation_names, parse_polynomial, variable_names, Polynomial, VarTable};
use crate::scalars::{is_prime, Field, Fp, MAX_PRIME, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Prime(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemFile {
    pub field: FieldKind,
    pub nvars: usize,
    pub ndeform: usize,
    pub precision: Option<u32>,
    /// Polynomials in `nvars + ndeform` variables, deformation variables last.
    pub polynomials: Vec<Polynomial<Q>>,
}

fn header_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_header(text: &str, line: usize) -> Result<(FieldKind, usize, usize, Option<u32>)> {
    let tokens: Vec<(usize, &str)> = text
        .split_whitespace()
        .map(|t| (t.as_ptr() as usize - text.as_ptr() as usize + 1, t))
        .collect();
    let Some(&(_, kind)) = tokens.first() else {
        return Err(header_error(line, 1, "missing header"));
    };
    let field = if kind == "QQ" || (kind.starts_with("QQ[[") && kind.ends_with("]]")) {
        FieldKind::Rational
    } else if let Some(p) = kind.strip_prefix("GF(").and_then(|s| s.strip_suffix(')')) {
        let p: u32 = p.parse().map_err(|_| header_error(line, 4, "invalid modulus"))?;
        if !is_prime(p) || p >= MAX_PRIME {
            return Err(header_error(line, 4, format!("{p} is not a supported prime")));
        }
        FieldKind::Prime(p)
    } else {
        return Err(header_error(line, 1, format!("unknown field `{kind}`")));
    };
    let number = |k: usize, what: &str| -> Result<u32> {
        let &(col, tok) = tokens
            .get(k)
            .ok_or_else(|| header_error(line, text.len() + 1, format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| header_error(line, col, format!("invalid {what} `{tok}`")))
    };
    let nvars = number(1, "variable count")? as usize;
    let ndeform = number(2, "deformation count")? as usize;
    let precision = if tokens.len() > 3 {
        Some(number(3, "precision")?)
    } else {
        None
    };
    if let Some(&(col, tok)) = tokens.get(4) {
        return Err(header_error(line, col, format!("unexpected `{tok}`")));
    }
    if nvars == 0 {
        return Err(header_error(line, tokens[1].0, "need at least one variable"));
    }
    if kind.starts_with("QQ[[") && ndeform == 0 {
        return Err(header_error(line, 1, "series coefficients need a deformation variable"));
    }
    if matches!(field, FieldKind::Prime(_)) && ndeform > 0 {
        return Err(header_error(
            line,
            tokens[2].0,
            "deformations are only supported over QQ",
        ));
    }
    Ok((field, nvars, ndeform, precision))
}

pub fn parse_system(text: &str) -> Result<SystemFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (hline, htext) = lines.next().ok_or_else(|| header_error(1, 1, "empty system file"))?;
    let (field, nvars, ndeform, precision) = parse_header(htext, hline)?;
    let vars = VarTable::new(nvars, ndeform);
    let polynomials = lines
        .map(|(ln, l)| parse_polynomial(l, &vars, ln))
        .collect::<Result<Vec<_>>>()?;
    if polynomials.is_empty() {
        return Err(header_error(hline + 1, 1, "system has no polynomials"));
    }
    if let FieldKind::Prime(p) = field {
        for (k, poly) in polynomials.iter().enumerate() {
            if poly.terms().any(|(_, c)| Fp::from_rational(&p, &c.0).is_none()) {
                return Err(Error::InvalidInput(format!(
                    "polynomial {} has a coefficient with denominator divisible by {p}",
                    k + 1
                )));
            }
        }
    }
    Ok(SystemFile {
        field,
        nvars,
        ndeform,
        precision,
        polynomials,
    })
}

pub fn read_system(path: &Path) -> Result<SystemFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_system(&text)
}

impl SystemFile {
    fn names(&self) -> Vec<String> {
        let mut names = variable_names(self.nvars);
        if self.ndeform > 0 {
            names.extend(deformation_names(self.ndeform));
        }
        names
    }

    /// Canonical text; parsing it back gives the same system.
    pub fn to_text(&self) -> String {
        let mut out = match self.field {
            FieldKind::Rational if self.ndeform > 0 => {
                format!(
                    "QQ[[{}]] {} {}",
                    deformation_names(self.ndeform).join(","),
                    self.nvars,
                    self.ndeform
                )
            }
            FieldKind::Rational => format!("QQ {} {}", self.nvars, self.ndeform),
            FieldKind::Prime(p) => format!("GF({p}) {} {}", self.nvars, self.ndeform),
        };
        if let Some(n) = self.precision {
            out.push_str(&format!(" {n}"));
        }
        out.push('\n');
        let names = self.names();
        for p in &self.polynomials {
            out.push_str(&p.to_text_with(&names));
            out.push('\n');
        }
        out
    }

    pub fn field_name(&self) -> String {
        match self.field {
            FieldKind::Rational => "QQ".into(),
            FieldKind::Prime(p) => format!("GF({p})"),
        }
    }

    fn require_undeformed(&self) -> Result<()> {
        if self.ndeform > 0 {
            return Err(Error::InvalidInput(
                "expected a system without deformation variables".into(),
            ));
        }
        Ok(())
    }

    /// The system over ℚ; fails on deformed or modular files.
    pub fn rational(&self) -> Result<Vec<Polynomial<Q>>> {
        self.require_undeformed()?;
        match self.field {
            FieldKind::Rational => Ok(self.polynomials.clone()),
            FieldKind::Prime(_) => Err(Error::InvalidInput("expected a system over QQ".into())),
        }
    }

    /// The system reduced modulo `p`.
    pub fn modular(&self, p: u32) -> Result<Vec<Polynomial<Fp>>> {
        self.require_undeformed()?;
        Ok(self
            .polynomials
            .iter()
            .map(|poly| poly.map_coeffs(&p, |c| Fp::from_rational(&p, &c.0).expect("checked while parsing")))
            .collect())
    }

    /// The deformed system at `precision`, falling back to the header value.
    pub fn deformed(&self, precision: Option<u32>) -> Result<DeformedSystem<Q>> {
        if self.field != FieldKind::Rational {
            return Err(Error::InvalidInput("deformed systems must be over QQ".into()));
        }
        if self.ndeform == 0 {
            return Err(Error::InvalidInput("system has no deformation variables".into()));
        }
        let n = precision
            .or(self.precision)
            .ok_or_else(|| Error::InvalidInput("no precision given in the header or on the command line".into()))?;
        DeformedSystem::from_flat(&self.polynomials, self.nvars, self.ndeform, n, ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_file() {
        let s = parse_system("QQ 2 0\nx^2\ny^2\n").unwrap();
        assert_eq!(s.nvars, 2);
        assert_eq!(s.rational().unwrap().len(), 2);
        assert_eq!(s.to_text(), "QQ 2 0\nx^2\ny^2\n");
    }

    #[test]
    fn deformed_file() {
        let text = "QQ[[v]] 1 1 8\nx^2 - x^3 - v\n";
        let s = parse_system(text).unwrap();
        let d = s.deformed(None).unwrap();
        assert_eq!(d.precision(), 8);
        assert_eq!(d.ndeform(), 1);
        assert_eq!(s.to_text(), "QQ[[v]] 1 1 8\n-x^3 + x^2 - v\n");
        assert_eq!(parse_system(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn bad_exponent_location() {
        let e = parse_system("QQ 1 0\n# comment\nx^-1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, column: 3, .. }), "{e:?}");
    }

    #[test]
    fn header_errors() {
        assert!(matches!(
            parse_system("ZZ 1 0\nx"),
            Err(Error::Parse { line: 1, column: 1, .. })
        ));
        assert!(matches!(
            parse_system("QQ two 0\nx"),
            Err(Error::Parse { line: 1, column: 4, .. })
        ));
        assert!(matches!(parse_system("GF(4) 1 0\nx"), Err(Error::Parse { .. })));
        assert!(matches!(parse_system("QQ 1 0\n"), Err(Error::Parse { .. })));
        assert!(parse_system("QQ 1 1\nx^2 - v").unwrap().deformed(None).is_err());
    }

    #[test]
    fn modular_file() {
        let s = parse_system("GF(7) 2 0\nx^2 - 1/2*y\ny^2").unwrap();
        let f = s.modular(7).unwrap();
        assert_eq!(f[0].to_string(), "x^2 + 3*y");
        assert!(parse_system("GF(7) 1 0\n1/7*x").is_err());
    }
}
