//! The ring of stable class functions of GL_N(q) in four bases:
//!
//! * `R`: the counts `btil(B, ·)`,
//! * `Rfr`: the full-rank counts `btil_fr(B, ·)`,
//! * `P`: parabolic inductions `χ∘1` of irreducibles of GL_m(q),
//! * `I`: stable irreducible characters `χ_{μ[N]}`.
//!
//! [`StableRing`] owns every cache (class lists, enumerated groups,
//! character tables, inductions) for one `q`; all caches are idempotent and
//! safe to fill from several threads.

mod basis;
mod muvec;
mod verify;

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use basis::{Basis, BasisLabel, StableFunction};
pub use muvec::{add_horizontal_strip, pieri_expand, remove_horizontal_strip, CuspidalLabel, MuVec};
pub use verify::{FamilyReport, FiltrationReport, PieriReport};

use crate::chartab::{self, CharacterTable, ParabolicHistogram};
use crate::classfn::{self, ClassFunction};
use crate::counting::{Counter, DEFAULT_MAX_SUBSPACES};
use crate::error::{Error, Result};
use crate::exact;
use crate::field::Field;
use crate::matspace::{ClassLabel, EnumeratedGroup, GroupClasses, Partition};

/// Bounds and numerics for a [`StableRing`].
#[derive(Clone, Debug)]
pub struct RingConfig {
    /// Largest |GL_N(q)| that may be enumerated element by element.
    pub max_group_order: u128,
    /// Largest total number of subspaces of F_q^m examined per matrix.
    pub max_subspaces: u128,
    /// Largest `‖μ‖` for which irreducibles are matched to stable labels.
    pub max_level: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for RingConfig {
    fn default() -> Self {
        RingConfig {
            max_group_order: 25_000,
            max_subspaces: DEFAULT_MAX_SUBSPACES,
            max_level: 2,
            tol: 1e-8,
            seed: 1,
        }
    }
}

/// Matching between `MuVec`s of norm `m` and rows of the table of GL_m(q).
#[derive(Clone, Debug)]
pub struct Identification {
    pub m: usize,
    pub by_mu: BTreeMap<MuVec, usize>,
    pub by_row: Vec<MuVec>,
}

type Cache<K, V> = RwLock<HashMap<K, Arc<V>>>;

fn cached<K: Eq + Hash + Clone, V>(cache: &Cache<K, V>, key: &K, make: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
    if let Some(v) = cache.read().expect("poisoned").get(key) {
        return Ok(v.clone());
    }
    let v = Arc::new(make()?);
    Ok(cache.write().expect("poisoned").entry(key.clone()).or_insert(v).clone())
}

pub struct StableRing {
    field: &'static Field,
    config: RingConfig,
    counter: Counter,
    classes: Cache<usize, GroupClasses>,
    groups: Cache<usize, EnumeratedGroup>,
    tables: Cache<usize, CharacterTable>,
    hists: Cache<(usize, usize), ParabolicHistogram>,
    cuspidals: Cache<usize, Vec<usize>>,
    idents: Cache<usize, Identification>,
    inductions: Cache<(usize, usize, usize), ClassFunction<Complex64>>,
    stable_irr: Cache<(MuVec, usize), ClassFunction<Complex64>>,
}

impl StableRing {
    pub fn new(q: u32, config: RingConfig) -> Result<StableRing> {
        Ok(StableRing {
            field: Field::get(q)?,
            counter: Counter::with_bound(q, config.max_subspaces)?,
            config,
            classes: RwLock::default(),
            groups: RwLock::default(),
            tables: RwLock::default(),
            hists: RwLock::default(),
            cuspidals: RwLock::default(),
            idents: RwLock::default(),
            inductions: RwLock::default(),
            stable_irr: RwLock::default(),
        })
    }

    pub fn with_defaults(q: u32) -> Result<StableRing> {
        StableRing::new(q, RingConfig::default())
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn config(&self) -> &RingConfig {
        &self.config
    }

    pub fn counter(&self) -> &Counter {
        &self.counter
    }

    pub fn classes(&self, n: usize) -> Result<Arc<GroupClasses>> {
        cached(&self.classes, &n, || GroupClasses::new(n, self.field))
    }

    pub fn group(&self, n: usize) -> Result<Arc<EnumeratedGroup>> {
        cached(&self.groups, &n, || EnumeratedGroup::new(n, self.field, self.config.max_group_order))
    }

    pub fn table(&self, n: usize) -> Result<Arc<CharacterTable>> {
        cached(&self.tables, &n, || CharacterTable::new(&*self.group(n)?, self.config.seed, self.config.tol))
    }

    /// Parabolic histogram for `P_{m, n-m}` inside GL_n.
    pub fn histogram(&self, n: usize, m: usize) -> Result<Arc<ParabolicHistogram>> {
        if m > n {
            return Err(Error::InvalidInput(format!("block size {m} exceeds {n}")));
        }
        cached(&self.hists, &(n, m), || {
            ParabolicHistogram::new(&*self.group(n)?, &*self.group(m)?, &*self.group(n - m)?)
        })
    }

    /// `btil(B, ·)` on the classes of GL_n.
    pub fn btil_fn(&self, b: &ClassLabel, n: usize) -> Result<ClassFunction<i128>> {
        chartab::btil_function(b, &*self.classes(n)?, &self.counter)
    }

    /// `btil_fr(B, ·)` on the classes of GL_n.
    pub fn btil_fr_fn(&self, b: &ClassLabel, n: usize) -> Result<ClassFunction<i128>> {
        chartab::btil_fr_function(b, &*self.classes(n)?, &self.counter)
    }

    /// `χ∘1` from row `row` of the table of GL_m to GL_n, by the
    /// Fourier-type formula in the full-rank counts.
    pub fn chi_circ_one(&self, m: usize, row: usize, n: usize) -> Result<Arc<ClassFunction<Complex64>>> {
        if m > n {
            return Err(Error::TooSmallN { n, min: m });
        }
        cached(&self.inductions, &(m, row, n), || {
            let table = self.table(m)?;
            let chi = table.values.get(row).ok_or_else(|| {
                Error::InvalidInput(format!("GL_{m}({}) has no irreducible number {row}", self.q()))
            })?;
            chartab::chi_circ_one(chi, &table.classes, &*self.classes(n)?, &self.counter)
        })
    }

    /// `χ∘1` by summing over the parabolic subgroup of an enumerated GL_n.
    pub fn induce_direct(&self, m: usize, row: usize, n: usize) -> Result<ClassFunction<Complex64>> {
        let table = self.table(m)?;
        let hist = self.histogram(n, m)?;
        let big = self.group(n)?;
        Ok(chartab::induce_direct(&table.values[row], &hist, &big.classes))
    }

    /// `χ ∘ ψ` for rows of GL_a and GL_b, by direct summation in GL_{a+b}.
    pub fn induce_pair(&self, a: usize, chi: usize, b: usize, psi: usize) -> Result<Vec<Complex64>> {
        let hist = self.histogram(a + b, a)?;
        let (ta, tb) = (self.table(a)?, self.table(b)?);
        let big = self.group(a + b)?;
        Ok(hist.induce(&ta.values[chi], &tb.values[psi], &big.classes))
    }

    /// Table rows of the cuspidal irreducibles of GL_n(q), `n <= 2`.
    pub fn cuspidal_rows(&self, n: usize) -> Result<Arc<Vec<usize>>> {
        if n == 0 || n > 2 {
            return Err(Error::bound("cuspidal block size", n as u128, 2));
        }
        cached(&self.cuspidals, &n, || {
            let table = self.table(n)?;
            if n == 1 {
                return Ok((0..table.len()).collect());
            }
            let t1 = self.table(1)?;
            let mut seen = vec![false; table.len()];
            for a in 0..t1.len() {
                for b in 0..t1.len() {
                    let ind = self.induce_pair(1, a, 1, b)?;
                    for (row, c) in table.decompose(&ind).iter().enumerate() {
                        if c.norm() >= 0.5 {
                            seen[row] = true;
                        }
                    }
                }
            }
            Ok((0..table.len()).filter(|&r| !seen[r]).collect())
        })
    }

    pub fn cuspidals(&self, n: usize) -> Result<Vec<CuspidalLabel>> {
        Ok((0..self.cuspidal_rows(n)?.len()).map(|index| CuspidalLabel { n, index }).collect())
    }

    fn cuspidal_row(&self, rho: CuspidalLabel) -> Result<usize> {
        self.cuspidal_rows(rho.n)?
            .get(rho.index)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("no cuspidal {rho} for q = {}", self.q())))
    }

    /// Constituents of a character of GL_m as `(row, multiplicity)`.
    fn constituents(&self, m: usize, f: &[Complex64]) -> Result<Vec<(usize, i64)>> {
        let table = self.table(m)?;
        let mut out = Vec::new();
        for (row, c) in table.decompose(f).iter().enumerate() {
            let k = c.re.round();
            if (c - Complex64::new(k, 0.0)).norm() > 1e-6 {
                return Err(Error::NumericalFailure(format!("multiplicity {c} is not an integer")));
            }
            if k != 0.0 {
                out.push((row, k as i64));
            }
        }
        Ok(out)
    }

    /// Matches the irreducibles of GL_m(q), `m <= 2`, with `MuVec`s of norm `m`.
    pub fn identification(&self, m: usize) -> Result<Arc<Identification>> {
        if m > self.config.max_level.min(2) {
            return Err(Error::bound("level of the stable-label identification", m as u128, self.config.max_level.min(2) as u128));
        }
        cached(&self.idents, &m, || self.build_identification(m))
    }

    fn build_identification(&self, m: usize) -> Result<Identification> {
        let table = self.table(m)?;
        let mut by_mu: BTreeMap<MuVec, usize> = BTreeMap::new();
        let p = |s: &str| Partition::parse(s).expect("literal partition");
        match m {
            0 => {
                by_mu.insert(MuVec::empty(), 0);
            }
            1 => {
                for (i, rho) in self.cuspidals(1)?.into_iter().enumerate() {
                    by_mu.insert(MuVec::from_pairs([(rho, p("1"))]), self.cuspidal_rows(1)?[i]);
                }
            }
            _ => {
                let c1 = self.cuspidals(1)?;
                let q = self.q() as u64;
                let pick = |rows: &[(usize, i64)], deg: u64, what: &str| -> Result<usize> {
                    let hits: Vec<usize> =
                        rows.iter().filter(|(r, k)| *k == 1 && table.degrees[*r] == deg).map(|(r, _)| *r).collect();
                    match hits.as_slice() {
                        [r] => Ok(*r),
                        _ => Err(Error::UnidentifiedIrrep(format!(
                            "{what}: {} candidates of degree {deg}",
                            hits.len()
                        ))),
                    }
                };
                for (i, &rho) in c1.iter().enumerate() {
                    let rrow = self.cuspidal_row(rho)?;
                    let cons = self.constituents(2, &self.induce_pair(1, rrow, 1, rrow)?)?;
                    if cons.len() != 2 {
                        return Err(Error::UnidentifiedIrrep(format!("{rho}∘{rho} has {} constituents", cons.len())));
                    }
                    by_mu.insert(MuVec::from_pairs([(rho, p("2"))]), pick(&cons, 1, "row for (2)")?);
                    by_mu.insert(MuVec::from_pairs([(rho, p("1,1"))]), pick(&cons, q, "row for (1,1)")?);
                    for &sigma in &c1[i + 1..] {
                        let srow = self.cuspidal_row(sigma)?;
                        let cons = self.constituents(2, &self.induce_pair(1, rrow, 1, srow)?)?;
                        match cons.as_slice() {
                            [(r, 1)] => {
                                by_mu.insert(MuVec::from_pairs([(rho, p("1")), (sigma, p("1"))]), *r);
                            }
                            _ => {
                                return Err(Error::UnidentifiedIrrep(format!("{rho}∘{sigma} is not irreducible")))
                            }
                        }
                    }
                }
                for rho in self.cuspidals(2)? {
                    by_mu.insert(MuVec::from_pairs([(rho, p("1"))]), self.cuspidal_row(rho)?);
                }
            }
        }
        let mut by_row = vec![None; table.len()];
        for (mu, &row) in &by_mu {
            if by_row[row].replace(mu.clone()).is_some() {
                return Err(Error::UnidentifiedIrrep(format!("row {row} of GL_{m} matched twice")));
            }
        }
        let by_row = by_row
            .into_iter()
            .enumerate()
            .map(|(r, mu)| mu.ok_or_else(|| Error::UnidentifiedIrrep(format!("row {r} of GL_{m} unmatched"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Identification { m, by_mu, by_row })
    }

    /// Table row of `χ_μ` in GL_{‖μ‖}.
    pub fn row_of(&self, mu: &MuVec) -> Result<usize> {
        let ident = self.identification(mu.norm())?;
        ident
            .by_mu
            .get(mu)
            .copied()
            .ok_or_else(|| Error::UnidentifiedIrrep(format!("{mu} is not a label for q = {}", self.q())))
    }

    /// The terms `ν` with `μ ~ ν + s`, `s >= 1`.
    pub fn strip_predecessors(mu: &MuVec) -> Vec<MuVec> {
        let lam = mu.trivial_part();
        (1..=lam.size())
            .flat_map(|s| remove_horizontal_strip(&lam, s))
            .map(|nu| mu.with(CuspidalLabel::TRIVIAL, nu))
            .collect()
    }

    /// `χ_{μ[N]} = χ_μ∘1 - sum_{s >= 1, μ ~ ν + s} χ_{ν[N]}` on the classes of GL_N.
    pub fn stable_irr_char(&self, mu: &MuVec, n: usize) -> Result<Arc<ClassFunction<Complex64>>> {
        mu.at_n(n)?;
        cached(&self.stable_irr, &(mu.clone(), n), || {
            let mut out = (*self.chi_circ_one(mu.norm(), self.row_of(mu)?, n)?).clone();
            for nu in Self::strip_predecessors(mu) {
                out.add_scaled(&*self.stable_irr_char(&nu, n)?, Complex64::new(-1.0, 0.0));
            }
            Ok(out)
        })
    }

    /// `dim χ_{μ[N]}` exactly, by the same recursion on dimensions with
    /// `dim(χ∘1) = dim χ · [GL_N : P_{m,N-m}]`. Defined as a polynomial
    /// value for every `N >= ‖μ‖`.
    pub fn stable_dim(&self, mu: &MuVec, n: usize) -> Result<BigInt> {
        let m = mu.norm();
        if n < m {
            return Err(Error::TooSmallN { n, min: m });
        }
        let table = self.table(m)?;
        let deg = BigInt::from(table.degrees[self.row_of(mu)?]);
        let mut out = deg * gaussian_binomial_big(n, m, self.q());
        for nu in Self::strip_predecessors(mu) {
            out -= self.stable_dim(&nu, n)?;
        }
        Ok(out)
    }

    /// Coefficients (low-to-high in `x = q^N`) of the dimension polynomial of
    /// `χ_{μ[N]}`, fitted exactly on `deg + 1` values of N and checked on
    /// `holdout` further values.
    pub fn dim_polynomial(&self, mu: &MuVec, holdout: usize) -> Result<Vec<BigRational>> {
        let deg = mu.norm();
        let start = mu.norm();
        let point = |n: usize| -> Result<(BigRational, BigRational)> {
            let x = BigRational::from_integer(BigInt::from(self.q()).pow(n as u32));
            Ok((x, BigRational::from_integer(self.stable_dim(mu, n)?)))
        };
        let pts = (start..=start + deg).map(point).collect::<Result<Vec<_>>>()?;
        let (xs, ys): (Vec<_>, Vec<_>) = pts.into_iter().unzip();
        let coeffs = exact::interpolate(&xs, &ys);
        if coeffs.len() > deg + 1 {
            return Err(Error::FitFailure(format!("dimension polynomial of {mu} has degree > {deg}")));
        }
        for n in start + deg + 1..=start + deg + holdout {
            let (x, y) = point(n)?;
            if exact::eval(&coeffs, &x) != y {
                return Err(Error::FitFailure(format!("dimension polynomial of {mu} fails at N = {n}")));
            }
        }
        Ok(coeffs)
    }

    /// Exact `E_N[f] = sum_c f(c) / |C(g_c)|` for an integer class function.
    pub fn exact_expectation(&self, f: &ClassFunction<i128>) -> Result<BigRational> {
        let classes = self.classes(f.n)?;
        Ok(f.values
            .iter()
            .zip(&classes.centralizers)
            .map(|(&v, &z)| BigRational::new(BigInt::from(v), BigInt::from(z)))
            .fold(BigRational::zero(), |a, b| a + b))
    }

    pub fn expectation(&self, f: &ClassFunction<Complex64>) -> Result<Complex64> {
        Ok(classfn::expectation(&f.values, &*self.classes(f.n)?))
    }

    pub fn inner(&self, a: &ClassFunction<Complex64>, b: &ClassFunction<Complex64>) -> Result<Complex64> {
        if a.n != b.n {
            return Err(Error::InvalidInput("class functions on different groups".into()));
        }
        Ok(classfn::inner_product(&a.values, &b.values, &*self.classes(a.n)?))
    }

    /// Number of lines fixed by `g`: `(q-1)^{-1} sum_λ (btil((λ), g) - 1)`,
    /// the permutation character on the points of projective space.
    pub fn fixed_lines(&self, n: usize) -> Result<ClassFunction<Complex64>> {
        let f = self.field;
        let len = self.classes(n)?.len();
        let mut out = ClassFunction::zero(self.q(), n, len);
        let w = 1.0 / (self.q() - 1) as f64;
        for lambda in f.units() {
            let b = ClassLabel::jordan(lambda, Partition::single_row(1), f)?;
            let bt = self.btil_fn(&b, n)?.to_complex();
            for (o, v) in out.values.iter_mut().zip(&bt.values) {
                *o += (v - 1.0) * w;
            }
        }
        Ok(out)
    }

    /// `χ^P = fixed_lines - 1`.
    pub fn chi_p(&self, n: usize) -> Result<ClassFunction<Complex64>> {
        let mut out = self.fixed_lines(n)?;
        out.values.iter_mut().for_each(|v| *v -= 1.0);
        Ok(out)
    }

    /// The fixed-vector count `btil((1), g) = q^{dim ker(g - 1)}` on GL_n.
    pub fn fixed_vectors(&self, n: usize) -> Result<ClassFunction<i128>> {
        let one = ClassLabel::jordan(crate::field::Scalar::ONE, Partition::single_row(1), self.field)?;
        self.btil_fn(&one, n)
    }
}

/// `[n choose k]_q` as a big integer.
pub fn gaussian_binomial_big(n: usize, k: usize, q: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let q = BigInt::from(q);
    let (mut num, mut den) = (BigInt::one(), BigInt::one());
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unip(s: &str) -> MuVec {
        MuVec::unipotent(Partition::parse(s).unwrap())
    }

    #[test]
    fn cuspidal_counts() {
        let r2 = StableRing::with_defaults(2).unwrap();
        assert_eq!(r2.cuspidals(1).unwrap().len(), 1);
        let c2 = r2.cuspidal_rows(2).unwrap();
        assert_eq!(c2.len(), 1);
        assert_eq!(r2.table(2).unwrap().degrees[c2[0]], 1);
        let r3 = StableRing::with_defaults(3).unwrap();
        assert_eq!(r3.cuspidals(1).unwrap().len(), 2);
        // (q^2 - q) / 2 cuspidals of degree q - 1
        let c2 = r3.cuspidal_rows(2).unwrap();
        assert_eq!(c2.len(), 3);
        assert!(c2.iter().all(|&r| r3.table(2).unwrap().degrees[r] == 2));
    }

    #[test]
    fn identification_is_a_bijection() {
        for q in [2, 3, 4, 5] {
            let ring = StableRing::with_defaults(q).unwrap();
            for m in 0..=2 {
                let id = ring.identification(m).unwrap();
                assert_eq!(id.by_mu.len(), ring.table(m).unwrap().len(), "q={q} m={m}");
                assert!(id.by_mu.keys().all(|mu| mu.norm() == m));
            }
        }
    }

    #[test]
    fn stable_irr_examples() {
        let ring = StableRing::with_defaults(3).unwrap();
        let triv = ring.stable_irr_char(&MuVec::empty(), 3).unwrap();
        assert!(triv.values.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-9));
        let chi_p = ring.stable_irr_char(&unip("1"), 2).unwrap();
        let id = ring.classes(2).unwrap().identity_index();
        assert!((chi_p.values[id] - Complex64::new(3.0, 0.0)).norm() < 1e-9);
        assert!(chi_p.max_diff(&ring.chi_p(2).unwrap()) < 1e-9);
        let ring2 = StableRing::with_defaults(2).unwrap();
        let u = ring2.stable_irr_char(&unip("2"), 4).unwrap();
        assert!((ring2.inner(&u, &u).unwrap() - 1.0).norm() < 1e-6);
    }

    #[test]
    fn dimension_polynomials() {
        for q in [2u32, 3] {
            let ring = StableRing::with_defaults(q).unwrap();
            assert_eq!(ring.dim_polynomial(&MuVec::empty(), 2).unwrap(), vec![exact::rat(1)]);
            // (x - q) / (q - 1)
            let h = ring.dim_polynomial(&unip("1"), 2).unwrap();
            let qm1 = BigInt::from(q - 1);
            assert_eq!(
                h,
                vec![
                    BigRational::new(BigInt::from(-(q as i64)), qm1.clone()),
                    BigRational::new(BigInt::one(), qm1)
                ]
            );
            assert_eq!(ring.dim_polynomial(&unip("2"), 2).unwrap().len(), 3);
        }
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial_big(4, 2, 2), BigInt::from(35));
        assert_eq!(gaussian_binomial_big(3, 1, 3), BigInt::from(13));
    }
}
