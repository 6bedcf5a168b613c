//! Rational linear combinations of named real constants.
//!
//! Every real period the engine manipulates exactly is a vector of rational
//! coefficients over a [`BasisConstants`] list whose first symbol is `one`.
//! The symbols are assumed linearly independent over Q; that assumption is
//! declared by the user, never inferred.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constant {
    pub name: String,
    pub value: f64,
    /// Declared rationally independent from every other declared symbol.
    pub independent: bool,
}

/// Ordered list of basis symbols. Index 0 is always `one` (value 1).
#[derive(Debug, Clone, PartialEq)]
pub struct BasisConstants {
    constants: Vec<Constant>,
}

impl BasisConstants {
    /// Builds a basis from user symbols; `one` is prepended when absent.
    pub fn new(extra: Vec<Constant>) -> Result<Arc<Self>> {
        let mut constants = vec![Constant { name: "one".to_string(), value: 1.0, independent: true }];
        for c in extra {
            if c.name == "one" {
                if c.value != 1.0 {
                    return Err(Error::Invalid("symbol `one` must have value 1".into()));
                }
                continue;
            }
            if !is_symbol(&c.name) {
                return Err(Error::Invalid(format!("invalid symbol name `{}`", c.name)));
            }
            if !c.value.is_finite() || c.value == 0.0 {
                return Err(Error::Invalid(format!("symbol `{}` must have a finite nonzero value", c.name)));
            }
            if constants.iter().any(|k| k.name == c.name) {
                return Err(Error::Invalid(format!("duplicate symbol `{}`", c.name)));
            }
            constants.push(c);
        }
        Ok(Arc::new(BasisConstants { constants }))
    }

    pub fn standard() -> Arc<Self> {
        BasisConstants::new(Vec::new()).expect("`one` alone is a valid basis")
    }

    pub fn len(&self) -> usize {
        self.constants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty()
    }

    pub fn constants(&self) -> &[Constant] {
        &self.constants
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c.name == name)
    }

    /// Returns a new basis with `fresh` appended. Values expressed over `self`
    /// can be moved onto the result with [`ExactReal::rebase`].
    pub fn extended(&self, fresh: Vec<Constant>) -> Result<Arc<Self>> {
        let extra = self.constants[1..].iter().cloned().chain(fresh).collect();
        BasisConstants::new(extra)
    }

    /// True when `other` starts with exactly the symbols of `self`.
    pub fn is_prefix_of(&self, other: &BasisConstants) -> bool {
        other.constants.len() >= self.constants.len()
            && self.constants.iter().zip(&other.constants).all(|(a, b)| a == b)
    }
}

fn is_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn same_basis(a: &Arc<BasisConstants>, b: &Arc<BasisConstants>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A real number `Σ coeff_k · symbol_k` with exact rational coefficients.
#[derive(Clone)]
pub struct ExactReal {
    basis: Arc<BasisConstants>,
    coeffs: Vec<BigRational>,
}

impl ExactReal {
    pub fn zero(basis: &Arc<BasisConstants>) -> Self {
        ExactReal { basis: basis.clone(), coeffs: vec![BigRational::zero(); basis.len()] }
    }

    pub fn rational(basis: &Arc<BasisConstants>, q: BigRational) -> Self {
        let mut r = ExactReal::zero(basis);
        r.coeffs[0] = q;
        r
    }

    pub fn integer(basis: &Arc<BasisConstants>, n: i64) -> Self {
        ExactReal::rational(basis, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(basis: &Arc<BasisConstants>, p: i64, q: i64) -> Self {
        ExactReal::rational(basis, BigRational::new(p.into(), q.into()))
    }

    pub fn symbol(basis: &Arc<BasisConstants>, name: &str) -> Result<Self> {
        let idx = basis.index_of(name).ok_or_else(|| Error::Parse(format!("unknown symbol `{name}`")))?;
        let mut r = ExactReal::zero(basis);
        r.coeffs[idx] = BigRational::one();
        Ok(r)
    }

    /// The exact dyadic rational equal to `v`, as a multiple of `one`.
    ///
    /// Used for quadrature output that did not snap to a declared value.
    pub fn from_f64(basis: &Arc<BasisConstants>, v: f64) -> Result<Self> {
        let q = BigRational::from_float(v).ok_or_else(|| Error::Invalid(format!("non-finite value {v}")))?;
        Ok(ExactReal::rational(basis, q))
    }

    pub fn from_coeffs(basis: &Arc<BasisConstants>, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), got: coeffs.len() });
        }
        Ok(ExactReal { basis: basis.clone(), coeffs })
    }

    pub fn basis(&self) -> &Arc<BasisConstants> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Float rendering `Σ coeff · value`.
    pub fn value(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(self.basis.constants())
            .filter(|(q, _)| !q.is_zero())
            .map(|(q, c)| rational_to_f64(q) * c.value)
            .sum()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        ExactReal { basis: self.basis.clone(), coeffs: self.coeffs.iter().map(|q| q * k).collect() }
    }

    pub fn neg(&self) -> Self {
        ExactReal { basis: self.basis.clone(), coeffs: self.coeffs.iter().map(|q| -q).collect() }
    }

    pub fn try_add(&self, other: &ExactReal) -> Result<Self> {
        self.check_basis(other)?;
        Ok(ExactReal {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &ExactReal) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn check_basis(&self, other: &ExactReal) -> Result<()> {
        if same_basis(&self.basis, &other.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    /// Moves the value onto a basis that extends the current one.
    pub fn rebase(&self, basis: &Arc<BasisConstants>) -> Result<Self> {
        if !self.basis.is_prefix_of(basis) {
            return Err(Error::BasisMismatch);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(basis.len(), BigRational::zero());
        Ok(ExactReal { basis: basis.clone(), coeffs })
    }

    /// If `self = q · other` for a rational `q`, returns `q`.
    pub fn ratio_to(&self, other: &ExactReal) -> Option<BigRational> {
        let pivot = other.coeffs.iter().position(|q| !q.is_zero())?;
        let q = &self.coeffs[pivot] / &other.coeffs[pivot];
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| *a == b * &q).then_some(q)
    }

    /// Parses `"2/3*s1 - alpha + 1/2"`-style linear combinations.
    pub fn parse(basis: &Arc<BasisConstants>, text: &str) -> Result<Self> {
        let mut out = ExactReal::zero(basis);
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let bytes: Vec<char> = s.chars().collect();
        let mut i = 0;
        let mut first = true;
        while i < bytes.len() {
            let mut sign = BigRational::one();
            if bytes[i] == '+' || bytes[i] == '-' {
                if bytes[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            } else if !first {
                return Err(Error::Parse(format!("expected `+` or `-` in `{text}`")));
            }
            first = false;
            let start = i;
            while i < bytes.len() && bytes[i] != '+' && bytes[i] != '-' {
                i += 1;
            }
            let term: String = bytes[start..i].iter().collect();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in `{text}`")));
            }
            let (coef, sym) = parse_term(&term)?;
            let idx = match sym {
                Some(name) => {
                    basis.index_of(&name).ok_or_else(|| Error::Parse(format!("unknown symbol `{name}` in `{text}`")))?
                }
                None => 0,
            };
            out.coeffs[idx] += sign * coef;
        }
        Ok(out)
    }
}

fn parse_term(term: &str) -> Result<(BigRational, Option<String>)> {
    let (num, sym) = match term.split_once('*') {
        Some((n, s)) => (n.to_string(), Some(s.to_string())),
        None => {
            if term.starts_with(|c: char| c.is_ascii_digit()) {
                (term.to_string(), None)
            } else {
                ("1".to_string(), Some(term.to_string()))
            }
        }
    };
    if let Some(s) = &sym {
        if !is_symbol(s) {
            return Err(Error::Parse(format!("invalid symbol `{s}`")));
        }
    }
    Ok((parse_rational(&num)?, sym))
}

/// Parses `"p/q"` or an integer.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational `{text}`"));
    let t = text.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 can give up on huge numerators; fall back to a split.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl PartialEq for ExactReal {
    fn eq(&self, other: &Self) -> bool {
        same_basis(&self.basis, &other.basis) && self.coeffs == other.coeffs
    }
}

impl Eq for ExactReal {}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (q, c) in self.coeffs.iter().zip(self.basis.constants()) {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let mag = q.abs();
            if wrote {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let is_one = c.name == "one";
            match (is_one, mag.is_one()) {
                (true, _) => f.write_str(&format_rational(&mag))?,
                (false, true) => f.write_str(&c.name)?,
                (false, false) => write!(f, "{}*{}", format_rational(&mag), c.name)?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactReal({self} ≈ {})", self.value())
    }
}
