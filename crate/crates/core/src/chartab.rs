//! Complex character tables of small GL_n(q) and parabolic induction.
//!
//! Tables come from the class-sum algebra: the central characters
//! `ω_χ(K_j) = |C_j| χ(g_j) / χ(1)` are the common eigenvectors of the
//! structure-constant matrices. A random real combination of those
//! matrices, rescaled by `diag(sqrt|C_k|)`, is normal, so its complex Schur
//! vectors are the eigenvectors as long as the eigenvalues are separated.

use std::collections::HashMap;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::classfn::ClassFunction;
use crate::counting::Counter;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matspace::{EnumeratedGroup, GroupClasses};

const MAX_ATTEMPTS: usize = 8;
const EIGEN_GAP: f64 = 1e-6;

/// Irreducible characters of GL_n(q), rows sorted by degree and then by
/// descending value tuples; row 0 is the trivial character.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub classes: GroupClasses,
    pub values: Vec<Vec<Complex64>>,
    pub degrees: Vec<u64>,
    pub tol: f64,
}

/// `a[k][j][i] = #{(x, y) : x ∈ C_j, y ∈ C_i, xy = g_k}` for class reps `g_k`.
fn structure_constants(g: &EnumeratedGroup, f: &Field) -> Vec<Vec<Vec<u64>>> {
    let r = g.classes.len();
    (0..r)
        .into_par_iter()
        .map(|k| {
            let gk = &g.classes.reps[k];
            let mut a = vec![vec![0u64; r]; r];
            for (x, &xi) in g.inverses.iter().enumerate() {
                let y = g.elements[xi].mul(gk, f);
                a[g.class_of[x]][g.class_of[g.index_of(&y)]] += 1;
            }
            a
        })
        .collect()
}

impl CharacterTable {
    pub fn new(group: &EnumeratedGroup, seed: u64, tol: f64) -> Result<CharacterTable> {
        let f = Field::get(group.classes.q)?;
        let classes = group.classes.clone();
        let r = classes.len();
        let order = classes.order as f64;
        let sizes: Vec<f64> = (0..r).map(|i| classes.class_size(i) as f64).collect();
        let id = classes.identity_index();
        if r == 1 {
            return Ok(CharacterTable {
                classes,
                values: vec![vec![Complex64::new(1.0, 0.0)]],
                degrees: vec![1],
                tol,
            });
        }
        let consts = structure_constants(group, f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut last_err = String::new();
        for _ in 0..MAX_ATTEMPTS {
            let coeffs: Vec<f64> = (0..r).map(|_| rng.gen_range(-1.0..1.0)).collect();
            // M[i][k] = sum_j c_j a_{jik} / |C_j|, then conjugate by diag(sqrt|C|)
            let m = DMatrix::from_fn(r, r, |i, k| {
                let v: f64 = (0..r).map(|j| coeffs[j] * consts[k][j][i] as f64 / sizes[j]).sum();
                Complex64::new(v * (sizes[k] / sizes[i]).sqrt(), 0.0)
            });
            let Some(schur) = Schur::try_new(m, 1e-14, 10_000) else {
                last_err = "Schur iteration did not converge".into();
                continue;
            };
            let (qmat, tmat) = schur.unpack();
            let eig: Vec<Complex64> = (0..r).map(|i| tmat[(i, i)]).collect();
            let gap = (0..r)
                .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
                .map(|(i, j)| (eig[i] - eig[j]).norm())
                .fold(f64::INFINITY, f64::min);
            if gap < EIGEN_GAP {
                last_err = format!("eigenvalue gap {gap:.2e} below {EIGEN_GAP:.0e}");
                continue;
            }
            let mut values = Vec::with_capacity(r);
            let mut degrees = Vec::with_capacity(r);
            let mut ok = true;
            for col in 0..r {
                let w: Vec<Complex64> = (0..r).map(|k| qmat[(k, col)] * sizes[k].sqrt()).collect();
                let w_id = w[id];
                if w_id.norm() < 1e-12 {
                    ok = false;
                    break;
                }
                let w: Vec<Complex64> = w.iter().map(|x| x / w_id).collect();
                let s: f64 = (0..r).map(|k| w[k].norm_sqr() / sizes[k]).sum();
                let deg = (order / s).sqrt();
                let rounded = deg.round();
                if (deg - rounded).abs() > tol.max(1e-6) * rounded.max(1.0) {
                    last_err = format!("degree {deg} is not an integer");
                    ok = false;
                    break;
                }
                degrees.push(rounded as u64);
                values.push((0..r).map(|k| w[k] * rounded / sizes[k]).collect::<Vec<_>>());
            }
            if !ok {
                continue;
            }
            let mut table = CharacterTable { classes: classes.clone(), values, degrees, tol };
            table.sort_rows();
            let err = table.orthogonality_error();
            if err > tol {
                last_err = format!("orthogonality error {err:.2e}");
                continue;
            }
            return Ok(table);
        }
        Err(Error::NumericalFailure(format!(
            "character table of GL_{}({}): {last_err}",
            group.classes.n, group.classes.q
        )))
    }

    fn sort_rows(&mut self) {
        let quant = |v: &Vec<Complex64>| -> Vec<(i64, i64)> {
            v.iter().map(|c| ((c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64)).collect()
        };
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| {
            self.degrees[a].cmp(&self.degrees[b]).then_with(|| quant(&self.values[b]).cmp(&quant(&self.values[a])))
        });
        self.values = idx.iter().map(|&i| self.values[i].clone()).collect();
        self.degrees = idx.iter().map(|&i| self.degrees[i]).collect();
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n(&self) -> usize {
        self.classes.n
    }

    pub fn q(&self) -> u32 {
        self.classes.q
    }

    pub fn row(&self, i: usize) -> ClassFunction<Complex64> {
        ClassFunction::new(self.q(), self.n(), self.values[i].clone())
    }

    /// Maximum deviation from row and column orthogonality.
    pub fn orthogonality_error(&self) -> f64 {
        let r = self.len();
        let z: Vec<f64> = self.classes.centralizers.iter().map(|&c| c as f64).collect();
        let mut err: f64 = 0.0;
        for i in 0..r {
            for j in 0..r {
                let row: Complex64 = (0..r).map(|k| self.values[i][k] * self.values[j][k].conj() / z[k]).sum();
                let col: Complex64 = (0..r).map(|c| self.values[c][i] * self.values[c][j].conj()).sum();
                let delta = if i == j { 1.0 } else { 0.0 };
                err = err.max((row - delta).norm()).max((col / z[i].sqrt() / z[j].sqrt() - delta).norm());
            }
        }
        err
    }

    /// Multiplicities `<f, χ_i>` for every row.
    pub fn decompose(&self, f: &[Complex64]) -> Vec<Complex64> {
        self.values.iter().map(|row| crate::classfn::inner_product(f, row, &self.classes)).collect()
    }

    pub fn to_json(&self, field: &Field) -> serde_json::Value {
        let classes: Vec<_> = (0..self.classes.len())
            .map(|i| {
                json!({
                    "label": self.classes.labels[i].to_text(field),
                    "size": self.classes.class_size(i).to_string(),
                })
            })
            .collect();
        let irreps: Vec<_> = self
            .values
            .iter()
            .zip(&self.degrees)
            .map(|(row, d)| {
                json!({
                    "degree": d,
                    "values": row.iter().map(|c| [round(c.re), round(c.im)]).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "q": self.q(), "n": self.n(), "classes": classes, "irreps": irreps })
    }

    pub fn to_csv(&self, field: &Field) -> String {
        let mut out = String::from("irrep,degree");
        for l in &self.classes.labels {
            out.push_str(&format!(",\"{}\"", l.to_text(field)));
        }
        out.push('\n');
        out.push_str(",size");
        for i in 0..self.classes.len() {
            out.push_str(&format!(",{}", self.classes.class_size(i)));
        }
        out.push('\n');
        for (i, (row, d)) in self.values.iter().zip(&self.degrees).enumerate() {
            out.push_str(&format!("{i},{d}"));
            for c in row {
                out.push_str(&format!(",{}", fmt_complex(*c)));
            }
            out.push('\n');
        }
        out
    }
}

/// Rounds to 10 decimals so printed values are stable across platforms.
pub fn round(x: f64) -> f64 {
    let r = (x * 1e10).round() / 1e10;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn fmt_complex(c: Complex64) -> String {
    let (re, im) = (round(c.re), round(c.im));
    if im == 0.0 {
        format!("{re}")
    } else if im > 0.0 {
        format!("{re}+{im}i")
    } else {
        format!("{re}{im}i")
    }
}

/// For each class `c` of G_N, how many elements of the parabolic subgroup
/// `P_{m,N-m}` lie in `c`, split by the classes of their diagonal blocks.
#[derive(Clone, Debug)]
pub struct ParabolicHistogram {
    pub n: usize,
    pub m: usize,
    pub parabolic_order: u128,
    /// `counts[c]` maps `(class of g11 in G_m, class of g22 in G_r)` to a count.
    pub counts: Vec<HashMap<(usize, usize), u64>>,
}

impl ParabolicHistogram {
    pub fn new(
        big: &EnumeratedGroup,
        top: &EnumeratedGroup,
        bottom: &EnumeratedGroup,
    ) -> Result<ParabolicHistogram> {
        let n = big.classes.n;
        let m = top.classes.n;
        if bottom.classes.n + m != n {
            return Err(Error::InvalidInput(format!(
                "block sizes {m} + {} do not add up to {n}",
                bottom.classes.n
            )));
        }
        let top_rows: Vec<usize> = (0..m).collect();
        let bot_rows: Vec<usize> = (m..n).collect();
        let mut counts = vec![HashMap::new(); big.classes.len()];
        let mut parabolic_order = 0u128;
        for (h, &c) in big.elements.iter().zip(&big.class_of) {
            if bot_rows.iter().any(|&i| top_rows.iter().any(|&j| !h.get(i, j).is_zero())) {
                continue;
            }
            parabolic_order += 1;
            let b11 = h.submatrix(&top_rows, &top_rows);
            let b22 = h.submatrix(&bot_rows, &bot_rows);
            let key = (top.class_of[top.index_of(&b11)], bottom.class_of[bottom.index_of(&b22)]);
            *counts[c].entry(key).or_insert(0) += 1;
        }
        Ok(ParabolicHistogram { n, m, parabolic_order, counts })
    }

    /// `(χ ∘ ψ)(g_c) = |C(g_c)| / |P| * sum_{h ∈ c ∩ P} χ(h11) ψ(h22)`.
    pub fn induce(&self, chi: &[Complex64], psi: &[Complex64], big: &GroupClasses) -> Vec<Complex64> {
        self.counts
            .iter()
            .zip(&big.centralizers)
            .map(|(hist, &z)| {
                let s: Complex64 = hist.iter().map(|(&(i, j), &k)| chi[i] * psi[j] * k as f64).sum();
                s * (z as f64 / self.parabolic_order as f64)
            })
            .collect()
    }
}

/// `χ∘1` evaluated by summing over the group G_N directly.
pub fn induce_direct(chi: &[Complex64], hist: &ParabolicHistogram, big: &GroupClasses) -> ClassFunction<Complex64> {
    let r_classes = hist
        .counts
        .iter()
        .flat_map(|h| h.keys().map(|k| k.1))
        .max()
        .map_or(1, |x| x + 1);
    let one = vec![Complex64::new(1.0, 0.0); r_classes];
    ClassFunction::new(big.q, big.n, hist.induce(chi, &one, big))
}

/// `χ∘1 = sum_c χ(c) / |C_{G_m}(c)| * btil_fr(rep_c, ·)` on the classes of G_N.
pub fn chi_circ_one(
    chi: &[Complex64],
    small: &GroupClasses,
    big: &GroupClasses,
    counter: &Counter,
) -> Result<ClassFunction<Complex64>> {
    let mut out = ClassFunction::zero(big.q, big.n, big.len());
    for (c, label) in small.labels.iter().enumerate() {
        let weight = chi[c] / small.centralizers[c] as f64;
        let fr = btil_fr_function(label, big, counter)?;
        out.add_scaled(&fr.to_complex(), weight);
    }
    Ok(out)
}

/// `btil_fr(B, ·)` as an exact class function on G_N.
pub fn btil_fr_function(
    b: &crate::matspace::ClassLabel,
    big: &GroupClasses,
    counter: &Counter,
) -> Result<ClassFunction<i128>> {
    let values =
        big.labels.par_iter().map(|g| counter.btil_fr(b, g)).collect::<Result<Vec<_>>>()?;
    Ok(ClassFunction::new(big.q, big.n, values))
}

/// `btil(B, ·)` as an exact class function on G_N.
pub fn btil_function(
    b: &crate::matspace::ClassLabel,
    big: &GroupClasses,
    counter: &Counter,
) -> Result<ClassFunction<i128>> {
    let values = big.labels.par_iter().map(|g| counter.btil(b, g)).collect::<Result<Vec<_>>>()?;
    Ok(ClassFunction::new(big.q, big.n, values))
}

/// `btil_fr(B, ·) = sum_χ conj(χ(B)) χ∘1`, given the inductions of every row.
pub fn btil_fr_via_p(
    b_class: usize,
    table: &CharacterTable,
    inductions: &[ClassFunction<Complex64>],
) -> ClassFunction<Complex64> {
    let first = &inductions[0];
    let mut out = ClassFunction::zero(first.q, first.n, first.values.len());
    for (row, ind) in table.values.iter().zip(inductions) {
        out.add_scaled(ind, row[b_class].conj());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(q: u32, n: usize) -> CharacterTable {
        let f = Field::get(q).unwrap();
        let g = EnumeratedGroup::new(n, f, 25_000).unwrap();
        CharacterTable::new(&g, 1, 1e-8).unwrap()
    }

    #[test]
    fn small_tables() {
        let t = table(2, 1);
        assert_eq!(t.degrees, [1]);
        let t = table(2, 2);
        assert_eq!(t.degrees, [1, 1, 2]);
        let t = table(3, 2);
        assert_eq!(t.degrees, [1, 1, 2, 2, 2, 3, 3, 4]);
        assert!(t.values[0].iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-9));
        let t = table(4, 1);
        assert_eq!(t.len(), 3);
        assert!(t.orthogonality_error() < 1e-10);
    }

    #[test]
    fn seeds_agree_on_sorted_table() {
        let f = Field::get(3).unwrap();
        let g = EnumeratedGroup::new(2, f, 25_000).unwrap();
        let a = CharacterTable::new(&g, 1, 1e-8).unwrap();
        let b = CharacterTable::new(&g, 99, 1e-8).unwrap();
        for (ra, rb) in a.values.iter().zip(&b.values) {
            for (x, y) in ra.iter().zip(rb) {
                assert!((x - y).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn induced_dimensions() {
        let f = Field::get(3).unwrap();
        let g2 = EnumeratedGroup::new(2, f, 25_000).unwrap();
        let g1 = EnumeratedGroup::new(1, f, 25_000).unwrap();
        let t1 = CharacterTable::new(&g1, 1, 1e-8).unwrap();
        let t2 = CharacterTable::new(&g2, 1, 1e-8).unwrap();
        let hist = ParabolicHistogram::new(&g2, &g1, &g1).unwrap();
        let id = g2.classes.identity_index();
        // the nontrivial character of G_1(3) induces an irreducible of degree (9-1)/(3-1)
        let ind = induce_direct(&t1.values[1], &hist, &g2.classes);
        assert!((ind.values[id] - Complex64::new(4.0, 0.0)).norm() < 1e-9);
        let mult = t2.decompose(&ind.values);
        let total: f64 = mult.iter().map(|c| c.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}
