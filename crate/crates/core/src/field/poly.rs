use std::cmp::Ordering;

use super::{Field, Scalar};
use crate::error::{Error, Result};

/// A polynomial over F_q with coefficients stored low-to-high.
///
/// Invariant: the coefficient vector has no trailing zeros, so the zero
/// polynomial is the empty vector and equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

/// Degree first, then coefficient codes compared from the constant term up.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![Scalar::ONE] }
    }

    pub fn x() -> Poly {
        Poly { coeffs: vec![Scalar::ZERO, Scalar::ONE] }
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// `x - a`
    pub fn linear(a: Scalar, f: &Field) -> Poly {
        Poly::from_coeffs(vec![f.neg(a), Scalar::ONE])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).copied().unwrap_or(Scalar::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().copied().unwrap_or(Scalar::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Scalar::ONE
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: Scalar, f: &Field) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, k: usize, f: &Field) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self, f))
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn divrem(&self, d: &Poly, f: &Field) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero { q: f.q() })?;
        let lead_inv = f.inv(d.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Scalar::ZERO; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dd], lead_inv);
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &b) in d.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn divisible_by(&self, d: &Poly, f: &Field) -> bool {
        matches!(self.divrem(d, f), Ok((_, r)) if r.is_zero())
    }

    /// The quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Poly, f: &Field) -> Option<Poly> {
        match self.divrem(d, f) {
            Ok((quot, r)) if r.is_zero() => Some(quot),
            _ => None,
        }
    }

    pub fn eval(&self, x: Scalar, f: &Field) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Text form such as `x^2+2x+1`, or `g^3*x+g` over extension fields.
    pub fn to_text(&self, f: &Field) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let coef = f.format_scalar(c);
            terms.push(match (i, c == Scalar::ONE) {
                (0, _) => coef,
                (_, true) => mono,
                _ if f.is_prime() => format!("{coef}{mono}"),
                _ => format!("{coef}*{mono}"),
            });
        }
        terms.join("+")
    }

    /// Parses the text form, also accepting `-`, `*` and residue tuples.
    pub fn parse(s: &str, f: &Field) -> Result<Poly> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut cur = Cursor::new(&compact);
        let mut acc: Vec<Scalar> = Vec::new();
        let mut first = true;
        while !cur.done() {
            let negate = match cur.peek() {
                Some('+') => {
                    cur.bump();
                    false
                }
                Some('-') => {
                    cur.bump();
                    true
                }
                _ if first => false,
                Some(c) => return Err(Error::Parse(format!("unexpected '{c}' in '{s}'"))),
                None => unreachable!(),
            };
            first = false;
            let (c, deg) = cur.term(f)?;
            let c = if negate { f.neg(c) } else { c };
            if acc.len() <= deg {
                acc.resize(deg + 1, Scalar::ZERO);
            }
            acc[deg] = f.add(acc[deg], c);
        }
        Ok(Poly::from_coeffs(acc))
    }
}

/// Tiny recursive-descent reader shared by scalar and polynomial parsing.
pub(crate) struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, src }
    }

    pub(crate) fn done(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in '{}'", self.pos, self.src))
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| self.err("number too large"))
    }

    fn exponent(&mut self) -> Result<u64> {
        if self.peek() == Some('^') {
            self.bump();
            self.integer()
        } else {
            Ok(1)
        }
    }

    /// An unsigned scalar literal: integer, `g`, `g^k` or `(c0,c1,..)`.
    pub(crate) fn scalar(&mut self, f: &Field) -> Result<Scalar> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(f.from_int((n % f.p() as u64) as i64))
            }
            Some('g') => {
                self.bump();
                let k = self.exponent()?;
                f.gen_pow(k)
            }
            Some('(') => {
                self.bump();
                let mut parts = Vec::new();
                loop {
                    let neg = self.peek() == Some('-');
                    if neg {
                        self.bump();
                    }
                    let v = self.integer()? as i64;
                    parts.push(if neg { -v } else { v });
                    match self.peek() {
                        Some(',') => self.bump(),
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        _ => return Err(self.err("expected ',' or ')'")),
                    }
                }
                f.from_residue(&parts)
            }
            _ => Err(self.err("expected a scalar")),
        }
    }

    fn term(&mut self, f: &Field) -> Result<(Scalar, usize)> {
        let coef = if self.peek() == Some('x') {
            Scalar::ONE
        } else {
            let c = self.scalar(f)?;
            if self.peek() == Some('*') {
                self.bump();
                if self.peek() != Some('x') {
                    return Err(self.err("expected 'x' after '*'"));
                }
            }
            c
        };
        if self.peek() == Some('x') {
            self.bump();
            let k = self.exponent()?;
            Ok((coef, k as usize))
        } else {
            Ok((coef, 0))
        }
    }
}
