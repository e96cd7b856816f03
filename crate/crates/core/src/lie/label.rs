use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A root written in the e_i coordinates, stored sparsely as (index, coefficient)
/// pairs with 0-based indices, sorted and without zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(Vec<(usize, i32)>);

impl Root {
    pub fn from_dense(coords: &[i32]) -> Self {
        Root(coords.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect())
    }

    pub fn to_dense(&self, rank: usize) -> Vec<i32> {
        let mut v = vec![0; rank];
        for &(i, c) in &self.0 {
            if i < rank {
                v[i] = c;
            }
        }
        v
    }

    pub fn terms(&self) -> &[(usize, i32)] {
        &self.0
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (n, &(i, c)) in self.0.iter().enumerate() {
            let sign = if c < 0 { "-" } else if n > 0 { "+" } else { "" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}e{}", i + 1)?;
            } else {
                write!(f, "{sign}{mag}e{}", i + 1)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Root {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("malformed root '{s}'"));
        let mut terms = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body[1..].find(['+', '-']).map_or(body.len(), |p| p + 1);
            let term = &body[..end];
            let epos = term.find('e').ok_or_else(bad)?;
            let coeff: i32 = if epos == 0 { 1 } else { term[..epos].parse().map_err(|_| bad())? };
            let idx: usize = term[epos + 1..].parse().map_err(|_| bad())?;
            if idx == 0 || coeff == 0 {
                return Err(bad());
            }
            terms.push((idx - 1, sign * coeff));
            rest = &body[end..];
        }
        terms.sort();
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(bad());
        }
        Ok(Root(terms))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    One,
    I,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    Z,
    CartanH(Root),
    RootX(Root),
    RootY(Root),
    Monomial { exponents: Vec<u32>, phase: Phase },
    Generic(String),
}

impl BasisLabel {
    pub fn monomial(exponents: Vec<u32>, phase: Phase) -> Self {
        BasisLabel::Monomial { exponents, phase }
    }

    pub fn generic(name: impl Into<String>) -> Self {
        BasisLabel::Generic(name.into())
    }

    pub fn is_root_vector(&self) -> bool {
        matches!(self, BasisLabel::RootX(_) | BasisLabel::RootY(_))
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Z => write!(f, "Z"),
            BasisLabel::CartanH(r) => write!(f, "H[{r}]"),
            BasisLabel::RootX(r) => write!(f, "X[{r}]"),
            BasisLabel::RootY(r) => write!(f, "Y[{r}]"),
            BasisLabel::Monomial { exponents, phase } => {
                let e: Vec<String> = exponents.iter().map(|x| x.to_string()).collect();
                let suffix = if *phase == Phase::I { "i" } else { "" };
                write!(f, "p[{}]{suffix}", e.join(","))
            }
            BasisLabel::Generic(name) => write!(f, "{name}"),
        }
    }
}

impl FromStr for BasisLabel {
    type Err = Error;
    /// Inverse of `Display`; text that matches none of the structured forms is a generic name.
    fn from_str(s: &str) -> Result<Self> {
        if s == "Z" {
            return Ok(BasisLabel::Z);
        }
        let bracketed = |prefix: &str| s.strip_prefix(prefix).and_then(|r| r.strip_suffix(']'));
        if let Some(inner) = bracketed("H[") {
            if let Ok(r) = inner.parse() {
                return Ok(BasisLabel::CartanH(r));
            }
        }
        if let Some(inner) = bracketed("X[") {
            if let Ok(r) = inner.parse() {
                return Ok(BasisLabel::RootX(r));
            }
        }
        if let Some(inner) = bracketed("Y[") {
            if let Ok(r) = inner.parse() {
                return Ok(BasisLabel::RootY(r));
            }
        }
        if let Some(body) = s.strip_prefix("p[") {
            let (inner, phase) = if let Some(b) = body.strip_suffix("]i") {
                (Some(b), Phase::I)
            } else {
                (body.strip_suffix(']'), Phase::One)
            };
            if let Some(inner) = inner {
                let exps: std::result::Result<Vec<u32>, _> = inner.split(',').map(str::parse).collect();
                if let Ok(exponents) = exps {
                    return Ok(BasisLabel::Monomial { exponents, phase });
                }
            }
        }
        if s.is_empty() {
            return Err(Error::Invalid("empty basis label".into()));
        }
        Ok(BasisLabel::Generic(s.to_string()))
    }
}
