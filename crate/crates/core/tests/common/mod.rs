//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use scfq::field::{Field, Scalar};
use scfq::matspace::{ClassLabel, MatFq};

/// `sum_f deg f · sum_{i,j} min(λ_i, μ_j)` over irreducible factors shared by
/// the labels of `B` and `g`: the dimension of `Hom` between the two modules.
pub fn closed_form_exponent(b: &ClassLabel, g: &ClassLabel) -> usize {
    let mut e = 0;
    for (p, lam) in b.parts() {
        for (p2, mu) in g.parts() {
            if p == p2 {
                let d = p.degree().unwrap();
                for &x in lam.parts() {
                    for &y in mu.parts() {
                        e += d * x.min(y);
                    }
                }
            }
        }
    }
    e
}

fn all_vectors(len: usize, f: &Field) -> Vec<Vec<Scalar>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|v| f.elements().map(move |x| {
            let mut w = v.clone();
            w.push(x);
            w
        })).collect();
    }
    out
}

/// `(#{M : Mg = BM}, #{M : Mg = BM, rank M = m})` by enumerating every
/// `m x N` matrix.
pub fn brute_counts(b: &MatFq, g: &MatFq, f: &Field) -> (u64, u64) {
    let (m, n) = (b.rows(), g.rows());
    let mut total = 0;
    let mut full = 0;
    for data in all_vectors(m * n, f) {
        let mm = MatFq::new(m, n, data).unwrap();
        if mm.mul(g, f) == b.mul(&mm, f) {
            total += 1;
            if mm.rank(f) == m {
                full += 1;
            }
        }
    }
    (total, full)
}

/// Nullity of `{M : Mg = BM, ω M = 0 for ω in omega}`.
fn constrained_nullity(b: &MatFq, g: &MatFq, omega: &[Vec<Scalar>], f: &Field) -> usize {
    let (m, n) = (b.rows(), g.rows());
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    // (Mg - BM)_{ik} = sum_j M_ij g_jk - sum_l B_il M_lk
    for i in 0..m {
        for k in 0..n {
            let mut r = vec![Scalar::ZERO; m * n];
            for j in 0..n {
                r[i * n + j] = f.add(r[i * n + j], g.get(j, k));
            }
            for l in 0..m {
                r[l * n + k] = f.sub(r[l * n + k], b.get(i, l));
            }
            rows.push(r);
        }
    }
    for w in omega {
        for k in 0..n {
            let mut r = vec![Scalar::ZERO; m * n];
            for i in 0..m {
                r[i * n + k] = w[i];
            }
            rows.push(r);
        }
    }
    if rows.is_empty() {
        return m * n;
    }
    m * n - MatFq::from_rows(&rows).unwrap().rank(f)
}

/// All subspaces of F_q^m as reduced echelon bases, by spanning every tuple.
pub fn all_subspaces(m: usize, f: &Field) -> Vec<Vec<Vec<Scalar>>> {
    let vecs = all_vectors(m, f);
    let mut seen = HashSet::new();
    let mut out = vec![vec![]];
    seen.insert(Vec::<Vec<Scalar>>::new());
    let mut frontier = vec![Vec::<Vec<Scalar>>::new()];
    while let Some(basis) = frontier.pop() {
        for v in &vecs {
            let mut rows = basis.clone();
            rows.push(v.clone());
            let (r, _) = MatFq::from_rows(&rows).unwrap().rref(f);
            let red: Vec<Vec<Scalar>> = r.row_vectors().into_iter().filter(|x| x.iter().any(|c| !c.is_zero())).collect();
            if red.len() == basis.len() + 1 && seen.insert(red.clone()) {
                out.push(red.clone());
                frontier.push(red);
            }
        }
    }
    out
}

/// `btil_fr(B, g)` by Möbius inversion over the full subspace lattice:
/// `sum_Ω (-1)^k q^{k(k-1)/2} #{M : Mg = BM, Ω ⊆ ker M}`, `k = dim Ω`.
pub fn mobius_btil_fr(b: &MatFq, g: &MatFq, f: &Field) -> i128 {
    let q = f.q() as i128;
    let mut total = 0i128;
    for omega in all_subspaces(b.rows(), f) {
        let k = omega.len() as u32;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let nullity = constrained_nullity(b, g, &omega, f) as u32;
        total += sign * q.pow(k * k.saturating_sub(1) / 2) * q.pow(nullity);
    }
    total
}
