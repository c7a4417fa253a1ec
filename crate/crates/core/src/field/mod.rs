//! Arithmetic in F_q for prime powers q <= 16, plus univariate polynomials
//! over F_q.
//!
//! Elements are stored as a single byte: the residue `c_0 + c_1 x + ... +
//! c_{e-1} x^{e-1}` modulo the field's defining polynomial is encoded as the
//! base-p integer `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. All arithmetic goes
//! through precomputed tables, so equality of [`Scalar`]s is structural.

mod poly;

use std::sync::{OnceLock, RwLock};

pub use poly::Poly;

use crate::error::{Error, Result};

/// An element of F_q, encoded as described in the module docs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(u8);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Defining polynomials (low-to-high over F_p) for the extension fields.
/// These are the Conway polynomials, so `x` is a primitive element.
const MODULI: &[(u32, u32, &[u8])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
];

/// The finite field F_q together with its arithmetic tables.
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    /// `exp[k]` is `g^k` for the generator used in text output.
    exp: Vec<u8>,
    log: Vec<u32>,
    irreducibles: RwLock<Vec<Vec<Poly>>>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl Field {
    /// Builds F_q. Only prime powers up to 16 are supported.
    pub fn new(q: u32) -> Result<Field> {
        let (p, e) = prime_power(q).ok_or(Error::UnsupportedField(q))?;
        if q > 16 {
            return Err(Error::UnsupportedField(q));
        }
        let modulus: Vec<u8> = if e == 1 {
            vec![0, 1]
        } else {
            MODULI
                .iter()
                .find(|(pp, ee, _)| *pp == p && *ee == e)
                .map(|(_, _, m)| m.to_vec())
                .ok_or(Error::UnsupportedField(q))?
        };

        let n = q as usize;
        let digits = |code: usize| -> Vec<u32> {
            let mut c = code as u32;
            (0..e)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect()
        };
        let encode = |ds: &[u32]| -> u8 {
            ds.iter().rev().fold(0u32, |acc, &d| acc * p + d) as u8
        };

        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            let da = digits(a);
            for b in 0..n {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * n + b] = encode(&sum);

                // schoolbook product, then reduce by the monic modulus
                let mut prod = vec![0u32; 2 * e as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for deg in (e as usize..prod.len()).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    let shift = deg - e as usize;
                    for (k, &m) in modulus.iter().enumerate() {
                        let idx = shift + k;
                        prod[idx] = (prod[idx] + p * p - (c * m as u32) % p) % p;
                    }
                }
                mul[a * n + b] = encode(&prod[..e as usize]);
            }
        }
        let mut neg = vec![0u8; n];
        let mut inv = vec![0u8; n];
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] == 0 {
                    neg[a] = b as u8;
                }
                if mul[a * n + b] == 1 {
                    inv[a] = b as u8;
                }
            }
        }

        // generator: x for extensions, smallest primitive root for prime fields
        let order_of = |g: usize| -> usize {
            let mut k = 1;
            let mut acc = g;
            while acc != 1 {
                acc = mul[acc * n + g] as usize;
                k += 1;
            }
            k
        };
        let gen = if e > 1 {
            p as usize
        } else {
            (1..n).find(|&g| order_of(g) == n - 1).unwrap_or(1)
        };
        let mut exp = vec![1u8; n - 1];
        let mut log = vec![0u32; n];
        for k in 1..n - 1 {
            exp[k] = mul[exp[k - 1] as usize * n + gen];
        }
        for (k, &v) in exp.iter().enumerate() {
            log[v as usize] = k as u32;
        }

        Ok(Field {
            p,
            e,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            exp,
            log,
            irreducibles: RwLock::new(Vec::new()),
        })
    }

    /// Process-wide shared instance of F_q.
    pub fn get(q: u32) -> Result<&'static Field> {
        static CACHE: [OnceLock<Field>; 17] = [const { OnceLock::new() }; 17];
        if !(2..=16).contains(&q) {
            return Err(Error::UnsupportedField(q));
        }
        let slot = &CACHE[q as usize];
        if let Some(f) = slot.get() {
            return Ok(f);
        }
        let f = Field::new(q)?;
        Ok(slot.get_or_init(|| f))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_prime(&self) -> bool {
        self.e == 1
    }

    /// The defining polynomial over F_p, low-to-high.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    #[inline]
    fn idx(&self, a: Scalar, b: Scalar) -> usize {
        a.0 as usize * self.q as usize + b.0 as usize
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.add[self.idx(a, b)])
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        Scalar(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.mul[self.idx(a, b)])
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::DivisionByZero { q: self.q });
        }
        Ok(Scalar(self.inv[a.0 as usize]))
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Scalar, mut k: u64) -> Scalar {
        let mut base = a;
        let mut acc = Scalar::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// The image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> Scalar {
        Scalar(n.rem_euclid(self.p as i64) as u8)
    }

    /// Element with the given code; panics if out of range.
    pub fn from_code(&self, code: u8) -> Scalar {
        assert!((code as u32) < self.q, "code {code} out of range for F_{}", self.q);
        Scalar(code)
    }

    /// All elements in code order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        (0..self.q as u8).map(Scalar)
    }

    /// Nonzero elements in code order.
    pub fn units(&self) -> impl Iterator<Item = Scalar> + '_ {
        (1..self.q as u8).map(Scalar)
    }

    /// Coefficient vector (length e, low-to-high) of the residue.
    pub fn residue(&self, a: Scalar) -> Vec<u8> {
        let mut c = a.0 as u32;
        (0..self.e)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d as u8
            })
            .collect()
    }

    pub fn from_residue(&self, coeffs: &[i64]) -> Result<Scalar> {
        if coeffs.len() > self.e as usize {
            return Err(Error::Parse(format!(
                "coefficient tuple of length {} for an extension of degree {}",
                coeffs.len(),
                self.e
            )));
        }
        let p = self.p as i64;
        let code = coeffs
            .iter()
            .rev()
            .fold(0i64, |acc, &c| acc * p + c.rem_euclid(p));
        Ok(Scalar(code as u8))
    }

    /// The generator `g` used in text form: the class of x for extension
    /// fields, the least primitive root for prime fields.
    pub fn generator(&self) -> Scalar {
        Scalar(self.exp[1.min(self.exp.len() - 1)])
    }

    /// Text form: integers for prime fields, `g^k` for extension fields.
    pub fn format_scalar(&self, a: Scalar) -> String {
        if self.e == 1 || a.0 <= 1 {
            return a.0.to_string();
        }
        match self.log[a.0 as usize] {
            1 => "g".to_string(),
            k => format!("g^{k}"),
        }
    }

    /// Parses `3`, `-1`, `g`, `g^5` or a residue tuple `(1,0,1)`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.as_str()),
        };
        let mut cur = poly::Cursor::new(body);
        let v = cur.scalar(self)?;
        if !cur.done() {
            return Err(Error::Parse(format!("trailing input in scalar '{s}'")));
        }
        Ok(if neg { self.neg(v) } else { v })
    }

    /// `g^k` for the text generator.
    pub(crate) fn gen_pow(&self, k: u64) -> Result<Scalar> {
        if self.e == 1 {
            return Err(Error::Parse("g^k notation is only for extension fields".into()));
        }
        Ok(self.exp[(k % (self.q as u64 - 1)) as usize].into())
    }

    /// Monic irreducible polynomials of exactly degree `d`, sorted.
    pub fn irreducibles_of_degree(&self, d: usize) -> Vec<Poly> {
        if d == 0 {
            return Vec::new();
        }
        if let Some(list) = self.irreducibles.read().unwrap().get(d) {
            if d == 0 || !list.is_empty() {
                return list.clone();
            }
        }
        let lower: Vec<Poly> = (1..=d / 2).flat_map(|k| self.irreducibles_of_degree(k)).collect();
        let q = self.q as u64;
        let mut out = Vec::new();
        for idx in 0..q.pow(d as u32) {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut c = idx;
            for _ in 0..d {
                coeffs.push(Scalar((c % q) as u8));
                c /= q;
            }
            coeffs.push(Scalar::ONE);
            let cand = Poly::from_coeffs(coeffs);
            if lower.iter().all(|g| !cand.divisible_by(g, self)) {
                out.push(cand);
            }
        }
        out.sort();
        let mut cache = self.irreducibles.write().unwrap();
        if cache.len() <= d {
            cache.resize(d + 1, Vec::new());
        }
        cache[d] = out.clone();
        out
    }

    /// Monic irreducibles of degree 1..=d in canonical order, optionally
    /// without `x` itself.
    pub fn irreducibles_up_to(&self, d: usize, exclude_x: bool) -> Vec<Poly> {
        let x = Poly::x();
        (1..=d)
            .flat_map(|k| self.irreducibles_of_degree(k))
            .filter(|f| !(exclude_x && *f == x))
            .collect()
    }

    pub fn is_irreducible(&self, f: &Poly) -> bool {
        let Some(n) = f.degree() else { return false };
        if n == 0 {
            return false;
        }
        let lead = f.leading();
        let monic = match self.inv(lead) {
            Ok(il) => f.scale(il, self),
            Err(_) => return false,
        };
        (1..=n / 2)
            .flat_map(|k| self.irreducibles_of_degree(k))
            .all(|g| !monic.divisible_by(&g, self))
    }

    /// Factors a monic polynomial of degree >= 1 into monic irreducibles with
    /// multiplicities, sorted by the canonical polynomial order.
    pub fn factor_monic(&self, f: &Poly) -> Result<Vec<(Poly, usize)>> {
        match f.degree() {
            None | Some(0) => {
                return Err(Error::InvalidInput("factor_monic needs degree >= 1".into()))
            }
            _ if f.leading() != Scalar::ONE => {
                return Err(Error::InvalidInput("factor_monic needs a monic polynomial".into()))
            }
            _ => {}
        }
        let mut rest = f.clone();
        let mut out = Vec::new();
        let mut d = 1;
        while 2 * d <= rest.degree().unwrap_or(0) {
            for g in self.irreducibles_of_degree(d) {
                let mut k = 0;
                while let Some(quot) = rest.exact_div(&g, self) {
                    rest = quot;
                    k += 1;
                }
                if k > 0 {
                    out.push((g, k));
                }
            }
            d += 1;
        }
        if rest.degree().unwrap_or(0) >= 1 {
            out.push((rest, 1));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }
}

impl From<u8> for Scalar {
    fn from(v: u8) -> Self {
        Scalar(v)
    }
}
