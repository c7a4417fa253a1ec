//! Solution counts of `Mg = BM`: all solutions (`btil`) and full-rank
//! solutions (`btil_fr`), plus the invariant-subspace machinery that links
//! them.
//!
//! `btil_fr` is computed by the recursion
//! `btil_fr(B, g) = btil(B, g) - sum_{Ω != 0, ΩB = Ω} btil_fr(C_Ω, g)`,
//! where `C_Ω = S B T` is the action of `B` on `F^m / Ω`.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matspace::{class_label, representative, ClassLabel, MatFq};

/// Default cap on the total number of subspaces of F_q^m examined.
pub const DEFAULT_MAX_SUBSPACES: u128 = 4000;

fn q_pow(q: u32, e: usize) -> Result<i128> {
    (q as i128).checked_pow(e as u32).ok_or(Error::Overflow("power of q"))
}

/// Dimension of the solution space of `Mg = BM` in the `mN` entries of `M`.
pub fn btil_exponent(b: &MatFq, g: &MatFq, f: &Field) -> Result<usize> {
    if !b.is_invertible(f) || !g.is_invertible(f) {
        return Err(Error::SingularMatrix);
    }
    let (m, n) = (b.rows(), g.rows());
    if m == 0 || n == 0 {
        return Ok(0);
    }
    // unknown x_{ij} sits at column i*n + j; equation (i,k) at row i*n + k
    let mut sys = MatFq::zeros(m * n, m * n);
    for i in 0..m {
        for k in 0..n {
            let row = i * n + k;
            for j in 0..n {
                let v = f.add(sys.get(row, i * n + j), g.get(j, k));
                sys.set(row, i * n + j, v);
            }
            for l in 0..m {
                let v = f.sub(sys.get(row, l * n + k), b.get(i, l));
                sys.set(row, l * n + k, v);
            }
        }
    }
    Ok(m * n - sys.rank(f))
}

/// Number of `m x N` matrices `M` over F_q with `Mg = BM`.
pub fn btil(b: &MatFq, g: &MatFq, f: &Field) -> Result<i128> {
    q_pow(f.q(), btil_exponent(b, g, f)?)
}

/// A subspace of F_q^m given by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: MatFq,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(m: usize) -> Subspace {
        Subspace { basis: MatFq::zeros(0, m), pivots: Vec::new() }
    }

    /// Row span of the given vectors, canonicalized.
    pub fn span(vectors: &[Vec<Scalar>], m: usize, f: &Field) -> Result<Subspace> {
        if vectors.is_empty() {
            return Ok(Subspace::zero(m));
        }
        let (r, pivots) = MatFq::from_rows(vectors)?.rref(f);
        if r.cols() != m {
            return Err(Error::InvalidInput("vectors of the wrong length".into()));
        }
        let rows: Vec<usize> = (0..pivots.len()).collect();
        let cols: Vec<usize> = (0..m).collect();
        Ok(Subspace { basis: r.submatrix(&rows, &cols), pivots })
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &MatFq {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Scalar], f: &Field) -> bool {
        let mut rows = self.basis.row_vectors();
        rows.push(v.to_vec());
        MatFq::from_rows(&rows).expect("rectangular").rank(f) == self.dim()
    }

    /// `ΩB ⊆ Ω`
    pub fn is_stable_under(&self, b: &MatFq, f: &Field) -> bool {
        (0..self.dim()).all(|i| self.contains(&MatFq::vec_mul(self.basis.row(i), b, f), f))
    }
}

/// Gaussian binomial coefficient `[m choose k]_q`.
pub fn gaussian_binomial(m: usize, k: usize, q: u32) -> u128 {
    if k > m {
        return 0;
    }
    let q = q as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= q.pow((m - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Total number of subspaces of F_q^m.
pub fn subspace_count(m: usize, q: u32) -> u128 {
    (0..=m).map(|k| gaussian_binomial(m, k, q)).sum()
}

/// All `k`-dimensional subspaces of F_q^m, one RREF basis each.
pub fn subspaces_of_dim(m: usize, k: usize, f: &Field) -> Vec<Subspace> {
    fn choose(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            choose(m, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut pivot_sets = Vec::new();
    choose(m, k, 0, &mut Vec::new(), &mut pivot_sets);
    let q = f.q() as usize;
    let mut out = Vec::new();
    for pivots in pivot_sets {
        // free entries: row r, column c > pivots[r], c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| ((pivots[r] + 1)..m).map(move |c| (r, c)))
            .filter(|(_, c)| !pivots.contains(c))
            .collect();
        for idx in 0..q.pow(free.len() as u32) {
            let mut basis = MatFq::zeros(k, m);
            for (r, &p) in pivots.iter().enumerate() {
                basis.set(r, p, Scalar::ONE);
            }
            let mut c = idx;
            for &(r, col) in &free {
                basis.set(r, col, f.from_code((c % q) as u8));
                c /= q;
            }
            out.push(Subspace { basis, pivots: pivots.clone() });
        }
    }
    out
}

/// Every subspace `Ω ≤ F_q^m` with `ΩB ⊆ Ω`, including `0` and `F_q^m`.
pub fn stable_subspaces(b: &MatFq, f: &Field, max_subspaces: u128) -> Result<Vec<Subspace>> {
    let m = b.rows();
    let total = subspace_count(m, f.q());
    if total > max_subspaces {
        return Err(Error::bound("number of subspaces of F_q^m", total, max_subspaces));
    }
    Ok((0..=m)
        .flat_map(|k| subspaces_of_dim(m, k, f))
        .filter(|w| w.is_stable_under(b, f))
        .collect())
}

/// Invariant subspaces of an invertible `B` (for which `ΩB ⊆ Ω` forces `ΩB = Ω`).
pub fn invariant_subspaces(b: &MatFq, f: &Field, max_subspaces: u128) -> Result<Vec<Subspace>> {
    if !b.is_invertible(f) {
        return Err(Error::SingularMatrix);
    }
    stable_subspaces(b, f, max_subspaces)
}

/// `S` selects the coordinates in `A`; `T` rebuilds every row of an `L` with
/// `ΩL = 0` from the rows in `A`. `C = SBT` is the induced action on `F^m/Ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compression {
    pub a: Vec<usize>,
    pub s: MatFq,
    pub t: MatFq,
    pub c: MatFq,
}

/// The pair `(S, T)` for a complement index set `A` of size `m - dim Ω`.
pub fn compression_pair(omega: &Subspace, a: &[usize], f: &Field) -> Result<(MatFq, MatFq)> {
    let m = omega.ambient();
    let k = m - omega.dim();
    if a.len() != k || a.iter().any(|&i| i >= m) || a.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!("index set {a:?} is not a sorted {k}-subset of 0..{m}")));
    }
    let rest: Vec<usize> = (0..m).filter(|i| !a.contains(i)).collect();
    // normalize the basis so that it is the identity on the columns outside A
    let w = omega.basis();
    let all_rows: Vec<usize> = (0..omega.dim()).collect();
    let w_rest = w.submatrix(&all_rows, &rest);
    let w_norm = w_rest.inverse(f).map_err(|_| {
        Error::InvalidInput(format!("coordinates {a:?} do not complement the subspace"))
    })?;
    let w_norm = w_norm.mul(w, f);

    let mut s = MatFq::zeros(k, m);
    let mut t = MatFq::zeros(m, k);
    for (pos, &i) in a.iter().enumerate() {
        s.set(pos, i, Scalar::ONE);
        t.set(i, pos, Scalar::ONE);
    }
    for (r, &i) in rest.iter().enumerate() {
        for (pos, &j) in a.iter().enumerate() {
            t.set(i, pos, f.neg(w_norm.get(r, j)));
        }
    }
    Ok((s, t))
}

/// Compression with a caller-chosen index set `A`.
pub fn compress_with_indices(b: &MatFq, omega: &Subspace, a: &[usize], f: &Field) -> Result<Compression> {
    if b.rows() != omega.ambient() {
        return Err(Error::InvalidInput("subspace and matrix sizes differ".into()));
    }
    if !omega.is_stable_under(b, f) {
        return Err(Error::NotInvariant);
    }
    let (s, t) = compression_pair(omega, a, f)?;
    let c = s.mul(b, f).mul(&t, f);
    Ok(Compression { a: a.to_vec(), s, t, c })
}

/// Compression with `A` the non-pivot coordinates of Ω's echelon basis.
pub fn compress(b: &MatFq, omega: &Subspace, f: &Field) -> Result<Compression> {
    let a: Vec<usize> = (0..omega.ambient()).filter(|i| !omega.pivots().contains(i)).collect();
    compress_with_indices(b, omega, &a, f)
}

/// The multiset `{label(C_Ω)}` over all invariant Ω, sorted by label.
pub fn decompose_full_rank(b: &MatFq, f: &Field, max_subspaces: u128) -> Result<Vec<(ClassLabel, usize)>> {
    let mut counts: BTreeMap<ClassLabel, usize> = BTreeMap::new();
    for omega in invariant_subspaces(b, f, max_subspaces)? {
        let comp = compress(b, &omega, f)?;
        *counts.entry(class_label(&comp.c, f)?).or_default() += 1;
    }
    Ok(counts.into_iter().collect())
}

/// `|ker f(g)|` where `f` is the characteristic polynomial of `B`, valid
/// as a count of `Mg = BM` when `B` is a single generalized Jordan block.
pub fn kernel_count(b: &MatFq, g: &MatFq, f: &Field) -> Result<i128> {
    let label = class_label(b, f)?;
    if !g.is_invertible(f) {
        return Err(Error::SingularMatrix);
    }
    if b.rows() > 0 && !label.is_single_block() {
        return Err(Error::NotSingleBlock(label.to_text(f)));
    }
    let cp = b.charpoly(f);
    let rank = g.poly_eval(&cp, f).rank(f);
    q_pow(f.q(), g.rows() - rank)
}

/// Memoizing evaluator of `btil` and `btil_fr` on class labels over one field.
pub struct Counter {
    field: &'static Field,
    max_subspaces: u128,
    fr_memo: RwLock<HashMap<(ClassLabel, ClassLabel), i128>>,
    decomp_memo: RwLock<HashMap<ClassLabel, Vec<(ClassLabel, usize)>>>,
}

impl Counter {
    pub fn new(q: u32) -> Result<Counter> {
        Counter::with_bound(q, DEFAULT_MAX_SUBSPACES)
    }

    pub fn with_bound(q: u32, max_subspaces: u128) -> Result<Counter> {
        Ok(Counter {
            field: Field::get(q)?,
            max_subspaces,
            fr_memo: RwLock::new(HashMap::new()),
            decomp_memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn btil(&self, b: &ClassLabel, g: &ClassLabel) -> Result<i128> {
        let f = self.field;
        btil(&representative(b, f), &representative(g, f), f)
    }

    /// `decompose_full_rank` of the class representative, cached.
    pub fn decomposition(&self, b: &ClassLabel) -> Result<Vec<(ClassLabel, usize)>> {
        if let Some(d) = self.decomp_memo.read().expect("poisoned").get(b) {
            return Ok(d.clone());
        }
        let d = decompose_full_rank(&representative(b, self.field), self.field, self.max_subspaces)?;
        self.decomp_memo.write().expect("poisoned").insert(b.clone(), d.clone());
        Ok(d)
    }

    pub fn btil_fr(&self, b: &ClassLabel, g: &ClassLabel) -> Result<i128> {
        if b.n() == 0 {
            return Ok(1);
        }
        if b.n() > g.n() {
            return Ok(0);
        }
        let key = (b.clone(), g.clone());
        if let Some(&v) = self.fr_memo.read().expect("poisoned").get(&key) {
            return Ok(v);
        }
        let mut v = self.btil(b, g)?;
        for (c, mult) in self.decomposition(b)? {
            if c != *b {
                v -= mult as i128 * self.btil_fr(&c, g)?;
            }
        }
        self.fr_memo.write().expect("poisoned").insert(key, v);
        Ok(v)
    }

    /// `btil_fr` on arbitrary matrices, via their class labels.
    pub fn btil_fr_matrix(&self, b: &MatFq, g: &MatFq) -> Result<i128> {
        let f = self.field;
        self.btil_fr(&class_label(b, f)?, &class_label(g, f)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::{enumerate_classes, Partition};
    use crate::field::Poly;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn jordan(lambda: i64, t: usize, f: &Field) -> MatFq {
        let l = ClassLabel::jordan(f.from_int(lambda), Partition::single_row(t), f).unwrap();
        representative(&l, f)
    }

    fn fix(g: &MatFq, f: &Field) -> i128 {
        let id = MatFq::identity(g.rows());
        q_pow(f.q(), g.rows() - g.sub(&id, f).rank(f)).unwrap()
    }

    #[test]
    fn btil_examples() {
        let f2 = Field::get(2).unwrap();
        let empty = MatFq::zeros(0, 0);
        let g = jordan(1, 3, f2);
        assert_eq!(btil(&empty, &g, f2).unwrap(), 1);
        assert_eq!(btil(&MatFq::identity(2), &MatFq::identity(3), f2).unwrap(), 64);
        assert_eq!(btil(&MatFq::zeros(1, 1), &g, f2), Err(Error::SingularMatrix));
    }

    #[test]
    fn cyclic_permutation_counts_fixed_points_of_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [2, 3] {
            let f = Field::get(q).unwrap();
            for m in 1..=3 {
                let mut perm = MatFq::zeros(m, m);
                for i in 0..m {
                    perm.set(i, (i + 1) % m, Scalar::ONE);
                }
                for _ in 0..5 {
                    let g = MatFq::random_invertible(3, f, &mut rng);
                    assert_eq!(btil(&perm, &g, f).unwrap(), fix(&g.pow(m as u64, f), f));
                }
            }
        }
    }

    #[test]
    fn two_by_two_jordan_counts_kernel_of_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = Field::get(3).unwrap();
        for lambda in [1, 2] {
            let b = MatFq::from_ints(&[&[lambda, 0], &[1, lambda]], f).unwrap();
            for _ in 0..10 {
                let g = MatFq::random_invertible(3, f, &mut rng);
                let shifted = g.sub(&MatFq::scalar(3, f.from_int(lambda)), f);
                let sq = shifted.mul(&shifted, f);
                assert_eq!(btil(&b, &g, f).unwrap(), q_pow(3, 3 - sq.rank(f)).unwrap());
            }
        }
    }

    #[test]
    fn btil_fr_examples() {
        let f = Field::get(3).unwrap();
        let counter = Counter::new(3).unwrap();
        for n in 0..=3 {
            for g in enumerate_classes(n, f) {
                let rep = representative(&g, f);
                assert_eq!(counter.btil_fr(&ClassLabel::empty(), &g).unwrap(), 1);
                let one = ClassLabel::jordan(Scalar::ONE, Partition::single_row(1), f).unwrap();
                assert_eq!(counter.btil_fr(&one, &g).unwrap(), fix(&rep, f) - 1);
                let big = ClassLabel::jordan(Scalar::ONE, Partition::single_row(n + 1), f).unwrap();
                assert_eq!(counter.btil_fr(&big, &g).unwrap(), 0);
            }
        }
    }

    #[test]
    fn invariant_subspace_examples() {
        for q in [2, 3] {
            let f = Field::get(q).unwrap();
            for t in 1..=4 {
                let b = jordan(1, t, f);
                let subs = invariant_subspaces(&b, f, DEFAULT_MAX_SUBSPACES).unwrap();
                assert_eq!(subs.len(), t + 1);
                for (j, w) in subs.iter().enumerate() {
                    assert_eq!(w.pivots(), (0..j).collect::<Vec<_>>().as_slice());
                }
            }
        }
        let f2 = Field::get(2).unwrap();
        assert_eq!(invariant_subspaces(&MatFq::identity(2), f2, 100).unwrap().len(), 5);
        let c = MatFq::from_ints(&[&[0, 1], &[1, 1]], f2).unwrap();
        let dims: Vec<usize> = invariant_subspaces(&c, f2, 100).unwrap().iter().map(|w| w.dim()).collect();
        assert_eq!(dims, [0, 2]);
        assert!(matches!(
            invariant_subspaces(&MatFq::identity(4), Field::get(7).unwrap(), 100),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        for q in [2, 3, 4] {
            let f = Field::get(q).unwrap();
            for m in 0..=4 {
                for k in 0..=m {
                    let subs = subspaces_of_dim(m, k, f);
                    assert_eq!(subs.len() as u128, gaussian_binomial(m, k, q));
                    let distinct: std::collections::HashSet<_> = subs.iter().collect();
                    assert_eq!(distinct.len(), subs.len());
                }
            }
        }
    }

    #[test]
    fn compress_trivial_and_worked_example() {
        let f = Field::get(5).unwrap();
        let b = jordan(2, 3, f);
        let comp = compress(&b, &Subspace::zero(3), f).unwrap();
        assert_eq!((comp.s.clone(), comp.t.clone(), comp.c), (MatFq::identity(3), MatFq::identity(3), b));

        let omega = Subspace::span(
            &[vec![0, 1, 0, 0], vec![1, 0, 2, -1]]
                .iter()
                .map(|v| v.iter().map(|&x| f.from_int(x)).collect())
                .collect::<Vec<_>>(),
            4,
            f,
        )
        .unwrap();
        let (s, t) = compression_pair(&omega, &[0, 2], f).unwrap();
        assert_eq!(s, MatFq::from_ints(&[&[1, 0, 0, 0], &[0, 0, 1, 0]], f).unwrap());
        assert_eq!(t, MatFq::from_ints(&[&[1, 0], &[0, 0], &[0, 1], &[1, 2]], f).unwrap());
        assert_eq!(s.mul(&t, f), MatFq::identity(2));
    }

    #[test]
    fn single_block_quotients_are_shorter_blocks() {
        // Ω_j = span(e_1..e_j) gives the block of size t - j
        for q in [2, 3] {
            let f = Field::get(q).unwrap();
            for lambda in f.units() {
                for t in 1..=4 {
                    let l = ClassLabel::jordan(lambda, Partition::single_row(t), f).unwrap();
                    let b = representative(&l, f);
                    for (j, omega) in invariant_subspaces(&b, f, 1000).unwrap().iter().enumerate() {
                        let c = compress(&b, omega, f).unwrap().c;
                        let expect = ClassLabel::jordan(lambda, Partition::single_row(t - j), f).unwrap();
                        assert_eq!(class_label(&c, f).unwrap(), expect);
                        if t > j {
                            assert_eq!(c, representative(&expect, f));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn not_invariant_is_rejected() {
        let f = Field::get(2).unwrap();
        let b = jordan(1, 2, f);
        let omega = Subspace::span(&[vec![Scalar::ZERO, Scalar::ONE]], 2, f).unwrap();
        assert_eq!(compress(&b, &omega, f), Err(Error::NotInvariant));
    }

    #[test]
    fn decompose_identity_two() {
        let f = Field::get(2).unwrap();
        let d = decompose_full_rank(&MatFq::identity(2), f, 100).unwrap();
        let text: Vec<(String, usize)> = d.iter().map(|(l, k)| (l.to_text(f), *k)).collect();
        assert_eq!(text, [("{}".to_string(), 1), ("{x+1:1}".to_string(), 3), ("{x+1:1,1}".to_string(), 1)]);
    }

    #[test]
    fn kernel_count_examples() {
        let f = Field::get(2).unwrap();
        assert_eq!(kernel_count(&jordan(1, 2, f), &MatFq::identity(3), f).unwrap(), 8);
        assert!(matches!(
            kernel_count(&MatFq::identity(2), &MatFq::identity(3), f),
            Err(Error::NotSingleBlock(_))
        ));
        let f3 = Field::get(3).unwrap();
        let g = jordan(2, 3, f3);
        let b = MatFq::from_ints(&[&[2]], f3).unwrap();
        let eig = g.sub(&MatFq::scalar(3, f3.from_int(2)), f3).left_kernel(f3).len();
        assert_eq!(kernel_count(&b, &g, f3).unwrap(), q_pow(3, eig).unwrap());
    }

    proptest! {
        #[test]
        fn kernel_count_matches_btil(qi in 0usize..2, deg_sel in 0usize..8, n in 1usize..=4, seed in any::<u64>()) {
            let q = [2, 3][qi];
            let f = Field::get(q).unwrap();
            let polys = f.irreducibles_up_to(2, true);
            let p: &Poly = &polys[deg_sel % polys.len()];
            let t = if p.degree() == Some(1) { 1 + seed as usize % 3 } else { 1 };
            let b = representative(&ClassLabel::single(p.clone(), Partition::single_row(t), f).unwrap(), f);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = MatFq::random_invertible(n, f, &mut rng);
            prop_assert_eq!(kernel_count(&b, &g, f).unwrap(), btil(&b, &g, f).unwrap());
        }

        #[test]
        fn btil_is_conjugation_invariant(m in 1usize..=3, n in 1usize..=3, seed in any::<u64>()) {
            let f = Field::get(3).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = MatFq::random_invertible(m, f, &mut rng);
            let g = MatFq::random_invertible(n, f, &mut rng);
            let x = MatFq::random_invertible(m, f, &mut rng);
            let y = MatFq::random_invertible(n, f, &mut rng);
            let b2 = x.mul(&b, f).mul(&x.inverse(f).unwrap(), f);
            let g2 = y.mul(&g, f).mul(&y.inverse(f).unwrap(), f);
            prop_assert_eq!(btil(&b, &g, f).unwrap(), btil(&b2, &g2, f).unwrap());
        }
    }
}
