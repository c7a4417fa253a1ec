//! Full-rank counts of unipotent-type classes as polynomials in the
//! single-block generators.
//!
//! For `B = B_{λ,μ}` the decomposition into full-rank pieces reads
//! `btil_B = btil_fr_B + sum_{ν ∈ N_μ} btil_fr_{B_{λ,ν}}`, where `N_μ` is the
//! multiset of Jordan types of the compressions `C_Ω` over nonzero invariant
//! `Ω`. Together with `btil_B = prod_i (1 + x_1 + .. + x_{μ_i})`, where
//! `x_t = btil_fr_{B_{λ,(t)}}`, this determines a polynomial `p_μ` with
//! `btil_fr_B = p_μ(x_1, .., x_{μ_1})`. Its coefficients are fitted as
//! integer polynomials in `q`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::{compress, stable_subspaces, subspace_count, DEFAULT_MAX_SUBSPACES};
use crate::error::{Error, Result};
use crate::exact;
use crate::field::{Field, Scalar};
use crate::matspace::{representative, ClassLabel, MatFq, Partition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanSpec {
    pub lambda: Scalar,
    pub mu: Partition,
}

impl JordanSpec {
    pub fn new(lambda: Scalar, mu: Partition) -> Result<JordanSpec> {
        if lambda.is_zero() {
            return Err(Error::InvalidInput("eigenvalue must be nonzero".into()));
        }
        Ok(JordanSpec { lambda, mu })
    }

    /// `B_{λ,μ}`.
    pub fn matrix(&self, f: &Field) -> Result<MatFq> {
        Ok(representative(&ClassLabel::jordan(self.lambda, self.mu.clone(), f)?, f))
    }

    /// `B_μ = B_{λ,μ} - λI`.
    pub fn nilpotent(&self, f: &Field) -> Result<MatFq> {
        let b = self.matrix(f)?;
        Ok(b.sub(&MatFq::scalar(b.rows(), self.lambda), f))
    }
}

/// Largest `|μ|` handled per field size.
pub fn max_mu_size(q: u32) -> usize {
    match q {
        2 => 5,
        3..=7 => 4,
        _ => 3,
    }
}

/// Jordan type of a nilpotent matrix from its rank sequence:
/// `μ'_j = rk(T^{j-1}) - rk(T^j)`.
pub fn nilpotent_partition(t: &MatFq, f: &Field) -> Result<Partition> {
    let n = t.rows();
    let mut cols = Vec::new();
    let mut prev_rank = n;
    let mut power = MatFq::identity(n);
    for _ in 0..n {
        power = power.mul(t, f);
        let r = power.rank(f);
        cols.push(prev_rank - r);
        prev_rank = r;
        if r == 0 {
            return Ok(Partition::from_unsorted(cols).conjugate());
        }
    }
    if n == 0 {
        return Ok(Partition::empty());
    }
    Err(Error::InvalidInput("matrix is not nilpotent".into()))
}

/// `N_{λ,μ}`: Jordan types of `C_Ω - λI` over nonzero `Ω` with `Ω B_μ ⊆ Ω`,
/// as `(ν, multiplicity)`.
pub fn nmultiset(spec: &JordanSpec, f: &Field) -> Result<BTreeMap<Partition, u64>> {
    let size = spec.mu.size();
    let limit = max_mu_size(f.q());
    if size > limit {
        return Err(Error::bound("|μ| for the multiset of quotient types", size as u128, limit as u128));
    }
    let b = spec.matrix(f)?;
    let nil = spec.nilpotent(f)?;
    let bound = subspace_count(size, f.q()).max(DEFAULT_MAX_SUBSPACES);
    let mut out = BTreeMap::new();
    for omega in stable_subspaces(&nil, f, bound)? {
        if omega.dim() == 0 {
            continue;
        }
        let c = compress(&b, &omega, f)?.c;
        let k = c.rows();
        let nu = nilpotent_partition(&c.sub(&MatFq::scalar(k, spec.lambda), f), f)?;
        *out.entry(nu).or_insert(0) += 1;
    }
    Ok(out)
}

/// Exponent vector over `x_1, x_2, ..`, trailing zeros trimmed.
pub type Monomial = Vec<u32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, e) in a.iter().enumerate() {
        out[i] += e;
    }
    for (i, e) in b.iter().enumerate() {
        out[i] += e;
    }
    trim(out)
}

/// `sum_t t·e_t` and `sum_t e_t`.
fn weight_and_degree(m: &Monomial) -> (usize, usize) {
    m.iter().enumerate().fold((0, 0), |(w, d), (i, &e)| (w + (i + 1) * e as usize, d + e as usize))
}

/// An integer polynomial in the `x_t` for one fixed `q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiPolyInt(pub BTreeMap<Monomial, BigInt>);

impl MultiPolyInt {
    pub fn one() -> MultiPolyInt {
        MultiPolyInt(BTreeMap::from([(Vec::new(), BigInt::one())]))
    }

    pub fn var(t: usize) -> MultiPolyInt {
        let mut m = vec![0; t];
        m[t - 1] = 1;
        MultiPolyInt(BTreeMap::from([(m, BigInt::one())]))
    }

    fn add_scaled(&mut self, other: &MultiPolyInt, c: &BigInt) {
        for (m, v) in &other.0 {
            *self.0.entry(m.clone()).or_default() += v * c;
        }
        self.0.retain(|_, v| !v.is_zero());
    }

    fn mul(&self, other: &MultiPolyInt) -> MultiPolyInt {
        let mut out = MultiPolyInt::default();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                *out.0.entry(mono_mul(a, b)).or_default() += x * y;
            }
        }
        out.0.retain(|_, v| !v.is_zero());
        out
    }

    /// Largest total degree.
    pub fn degree(&self) -> usize {
        self.0.keys().map(|m| weight_and_degree(m).1).max().unwrap_or(0)
    }

    /// Evaluates at `x_t = xs[t-1]`.
    pub fn eval(&self, xs: &[i128]) -> Result<i128> {
        let mut total = BigInt::zero();
        for (m, c) in &self.0 {
            let mut term = c.clone();
            for (i, &e) in m.iter().enumerate() {
                let x = xs.get(i).ok_or_else(|| Error::InvalidInput(format!("no value for x{}", i + 1)))?;
                term *= BigInt::from(*x).pow(e);
            }
            total += term;
        }
        i128::try_from(total).map_err(|_| Error::Overflow("polynomial value"))
    }
}

/// `p_μ` for one `q` (independent of `λ`; computed at `λ = 1`), memoized
/// over sub-partitions.
pub fn p_mu_at_q(mu: &Partition, f: &Field) -> Result<MultiPolyInt> {
    let mut memo = HashMap::new();
    p_mu_rec(mu, f, &mut memo)
}

fn p_mu_rec(mu: &Partition, f: &Field, memo: &mut HashMap<Partition, MultiPolyInt>) -> Result<MultiPolyInt> {
    if let Some(p) = memo.get(mu) {
        return Ok(p.clone());
    }
    let p = if mu.is_empty() {
        MultiPolyInt::one()
    } else if mu.len() == 1 {
        MultiPolyInt::var(mu.part(0))
    } else {
        let mut prod = MultiPolyInt::one();
        for &row in mu.parts() {
            let mut factor = MultiPolyInt::one();
            for t in 1..=row {
                factor.add_scaled(&MultiPolyInt::var(t), &BigInt::one());
            }
            prod = prod.mul(&factor);
        }
        let spec = JordanSpec::new(Scalar::ONE, mu.clone())?;
        for (nu, k) in nmultiset(&spec, f)? {
            let pn = p_mu_rec(&nu, f, memo)?;
            prod.add_scaled(&pn, &-BigInt::from(k));
        }
        prod
    };
    memo.insert(mu.clone(), p.clone());
    Ok(p)
}

/// Integer polynomial in `q`, low-to-high.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PolyQ(pub Vec<BigIntText>);

/// A big integer serialized as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigIntText(pub BigInt);

impl Serialize for BigIntText {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl PolyQ {
    pub fn from_ints(coeffs: Vec<BigInt>) -> PolyQ {
        let mut c: Vec<BigIntText> = coeffs.into_iter().map(BigIntText).collect();
        while c.last().is_some_and(|x| x.0.is_zero()) {
            c.pop();
        }
        PolyQ(c)
    }

    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = &BigInt> + ExactSizeIterator {
        self.0.iter().map(|c| &c.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, q: u32) -> BigInt {
        self.coeffs().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    fn negate(&self) -> PolyQ {
        PolyQ::from_ints(self.coeffs().map(|c| -c).collect())
    }

    fn leading_negative(&self) -> bool {
        self.0.last().is_some_and(|c| c.0.is_negative())
    }

    fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    /// Compact text such as `q^2+q`, `2*q-1`, `-3`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            let var = match i {
                0 => String::new(),
                1 => "q".into(),
                _ => format!("q^{i}"),
            };
            if var.is_empty() {
                let _ = write!(s, "{mag}");
            } else if mag.is_one() {
                s.push_str(&var);
            } else {
                let _ = write!(s, "{mag}*{var}");
            }
        }
        s
    }
}

/// Polynomial in the `x_t` with coefficients in `Z[q]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiPolyQ(pub BTreeMap<Monomial, PolyQ>);

fn mono_text(m: &Monomial) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
        .collect();
    parts.join("*")
}

impl MultiPolyQ {
    pub fn specialize(&self, q: u32) -> MultiPolyInt {
        let mut out = MultiPolyInt::default();
        for (m, c) in &self.0 {
            let v = c.eval(q);
            if !v.is_zero() {
                out.0.insert(m.clone(), v);
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.0.keys().map(|m| weight_and_degree(m).1).max().unwrap_or(0)
    }

    /// Terms by descending degree, then descending exponents, e.g.
    /// `x1^2 - (q-1)*x1`.
    pub fn to_text(&self) -> String {
        let mut terms: Vec<(&Monomial, &PolyQ)> = self.0.iter().collect();
        terms.sort_by(|a, b| {
            let (da, db) = (weight_and_degree(a.0).1, weight_and_degree(b.0).1);
            db.cmp(&da).then_with(|| {
                let pad = |m: &Monomial| {
                    let mut v = m.clone();
                    v.resize(8, 0);
                    v.reverse();
                    v
                };
                pad(b.0).cmp(&pad(a.0))
            })
        });
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.leading_negative();
            let mag = if neg { c.negate() } else { c.clone() };
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            let mono = mono_text(m);
            let coeff = mag.to_text();
            if mono.is_empty() {
                if mag.is_constant() {
                    s.push_str(&coeff);
                } else {
                    let _ = write!(s, "({coeff})");
                }
            } else if coeff == "1" {
                s.push_str(&mono);
            } else if mag.is_constant() {
                let _ = write!(s, "{coeff}*{mono}");
            } else {
                let _ = write!(s, "({coeff})*{mono}");
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .0
            .iter()
            .map(|(m, c)| {
                serde_json::json!({
                    "monomial": m,
                    "q_coefficients": c.coeffs().map(|x| x.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({ "text": self.to_text(), "terms": terms })
    }
}

/// Exact interpolation through `(q, v_q)` with an integrality check.
fn fit_integer_poly(qs: &[u32], values: &[BigInt], what: &str) -> Result<PolyQ> {
    let xs: Vec<BigRational> = qs.iter().map(|&q| exact::rat(q as i128)).collect();
    let ys: Vec<BigRational> = values.iter().map(|v| BigRational::from_integer(v.clone())).collect();
    let coeffs = exact::interpolate(&xs, &ys);
    let mut ints = Vec::new();
    for c in coeffs {
        if !c.is_integer() {
            return Err(Error::FitFailure(format!("{what}: coefficient {c} is not an integer")));
        }
        ints.push(c.to_integer());
    }
    Ok(PolyQ::from_ints(ints))
}

/// `p_μ` with coefficients fitted over `qs` and checked at every `holdout`.
pub fn p_mu_fit(mu: &Partition, qs: &[u32], holdout: &[u32]) -> Result<MultiPolyQ> {
    if qs.is_empty() {
        return Err(Error::InvalidInput("need at least one q to fit".into()));
    }
    let fields = qs.iter().chain(holdout).map(|&q| Field::get(q)).collect::<Result<Vec<_>>>()?;
    let polys = fields.par_iter().map(|f| p_mu_at_q(mu, f)).collect::<Result<Vec<_>>>()?;
    let (sample, held) = polys.split_at(qs.len());
    let monomials: std::collections::BTreeSet<&Monomial> = sample.iter().flat_map(|p| p.0.keys()).collect();
    let mut out = MultiPolyQ::default();
    for m in monomials {
        let values: Vec<BigInt> = sample.iter().map(|p| p.0.get(m).cloned().unwrap_or_default()).collect();
        let c = fit_integer_poly(qs, &values, &format!("coefficient of {}", mono_text(m)))?;
        if !c.is_zero() {
            out.0.insert(m.clone(), c);
        }
    }
    for (q, p) in holdout.iter().zip(held) {
        if &out.specialize(*q) != p {
            return Err(Error::FitFailure(format!("fitted polynomial for {mu} fails at held-out q = {q}")));
        }
    }
    if out.degree() != mu.len() {
        return Err(Error::FitFailure(format!("degree {} differs from {} rows", out.degree(), mu.len())));
    }
    if let Some(m) = out.0.keys().find(|m| weight_and_degree(m).0 > mu.size()) {
        return Err(Error::FitFailure(format!("monomial {} exceeds weight {}", mono_text(m), mu.size())));
    }
    Ok(out)
}

/// Multiplicities of `N_μ` fitted as integer polynomials in `q`, checked at
/// every `holdout`.
pub fn multiplicity_fit(mu: &Partition, qs: &[u32], holdout: &[u32]) -> Result<BTreeMap<Partition, PolyQ>> {
    let all: Vec<u32> = qs.iter().chain(holdout).copied().collect();
    let sets = all
        .par_iter()
        .map(|&q| {
            let f = Field::get(q)?;
            nmultiset(&JordanSpec::new(Scalar::ONE, mu.clone())?, f)
        })
        .collect::<Result<Vec<_>>>()?;
    let (sample, held) = sets.split_at(qs.len());
    let keys: std::collections::BTreeSet<&Partition> = sets.iter().flat_map(|s| s.keys()).collect();
    let mut out = BTreeMap::new();
    for nu in keys {
        let values: Vec<BigInt> = sample.iter().map(|s| BigInt::from(s.get(nu).copied().unwrap_or(0))).collect();
        let poly = fit_integer_poly(qs, &values, &format!("multiplicity of {nu}"))?;
        for (q, s) in holdout.iter().zip(held) {
            if poly.eval(*q) != BigInt::from(s.get(nu).copied().unwrap_or(0)) {
                return Err(Error::FitFailure(format!("multiplicity of {nu} fails at held-out q = {q}")));
            }
        }
        out.insert(nu.clone(), poly);
    }
    Ok(out)
}

/// Whether `N_{λ,μ}` is the same multiset for every `λ ∈ F_q^*`.
pub fn lambda_independent(mu: &Partition, f: &Field) -> Result<bool> {
    let sets = f
        .units()
        .map(|l| nmultiset(&JordanSpec::new(l, mu.clone())?, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(sets.windows(2).all(|w| w[0] == w[1]))
}

/// A nilpotent `T` on `V = W ⊕ <v, vT, .., vT^{s-1}>`, where `T|_W` has Jordan
/// type `ν` in the basis `w_k T^p`, and `vT^s = sum c_{k,p} w_k T^p`.
pub fn extension_matrix(nu: &Partition, s: usize, combo: &[((usize, usize), Scalar)], f: &Field) -> Result<MatFq> {
    let w_dim = nu.size();
    let n = w_dim + s;
    let offset: Vec<usize> = nu.parts().iter().scan(0, |acc, &p| Some(std::mem::replace(acc, *acc + p))).collect();
    let mut t = MatFq::zeros(n, n);
    for (k, &len) in nu.parts().iter().enumerate() {
        for p in 0..len.saturating_sub(1) {
            t.set(offset[k] + p, offset[k] + p + 1, Scalar::ONE);
        }
    }
    for i in 0..s.saturating_sub(1) {
        t.set(w_dim + i, w_dim + i + 1, Scalar::ONE);
    }
    if s == 0 {
        return Err(Error::InvalidInput("the quotient must be nonzero".into()));
    }
    for &((k, p), c) in combo {
        if k >= nu.len() || p >= nu.part(k) {
            return Err(Error::InvalidInput(format!("w_{k} T^{p} is not a basis vector")));
        }
        t.set(w_dim + s - 1, offset[k] + p, f.add(t.get(w_dim + s - 1, offset[k] + p), c));
    }
    Ok(t)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionReport {
    pub q: u32,
    pub trials: usize,
    pub dimension_failures: usize,
    pub direct_sum_failures: usize,
    pub support_failures: usize,
    pub pass: bool,
}

/// Random instances of the extension lemma: two coefficient choices on the
/// same support give the same Jordan type, and the empty support gives `ν`
/// plus a part `s`.
pub fn extension_property(q: u32, trials: usize, max_dim: usize, seed: u64) -> Result<ExtensionReport> {
    let f = Field::get(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let units: Vec<Scalar> = f.units().collect();
    let mut report =
        ExtensionReport { q, trials, dimension_failures: 0, direct_sum_failures: 0, support_failures: 0, pass: true };
    for _ in 0..trials {
        let w_dim = rng.gen_range(0..max_dim);
        let s = rng.gen_range(1..=max_dim - w_dim);
        let parts = Partition::all(w_dim);
        let nu = parts[rng.gen_range(0..parts.len())].clone();
        let basis: Vec<(usize, usize)> =
            (0..nu.len()).flat_map(|k| (0..nu.part(k)).map(move |p| (k, p))).collect();
        let support: Vec<(usize, usize)> = basis.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        let pick = |rng: &mut ChaCha8Rng| -> Vec<((usize, usize), Scalar)> {
            support.iter().map(|&b| (b, units[rng.gen_range(0..units.len())])).collect()
        };
        let (c1, c2) = (pick(&mut rng), pick(&mut rng));
        let mu1 = nilpotent_partition(&extension_matrix(&nu, s, &c1, f)?, f)?;
        let mu2 = nilpotent_partition(&extension_matrix(&nu, s, &c2, f)?, f)?;
        report.dimension_failures += (mu1.size() != w_dim + s) as usize;
        report.support_failures += (mu1 != mu2 || !mu1.contains(&nu)) as usize;
        if support.is_empty() {
            let mut parts = nu.parts().to_vec();
            parts.push(s);
            report.direct_sum_failures += (mu1 != Partition::from_unsorted(parts)) as usize;
        }
    }
    report.pass = report.dimension_failures + report.direct_sum_failures + report.support_failures == 0;
    Ok(report)
}
