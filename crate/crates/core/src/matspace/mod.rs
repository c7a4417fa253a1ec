//! Dense matrices over F_q, conjugacy-class labels of GL_N(q) and the
//! brute-force group enumeration used as an oracle at small sizes.
//!
//! Vectors are rows and act on the left (`v -> vM`); kernels are left
//! kernels unless stated otherwise.

mod classes;
mod group;
mod partition;

pub use classes::{
    centralizer_order, class_label, enumerate_classes, gl_order, representative, ClassLabel, GroupClasses,
};
pub use group::EnumeratedGroup;
pub use partition::Partition;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, Poly, Scalar};

/// A `rows x cols` matrix over F_q in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatFq {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl MatFq {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<MatFq> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(MatFq { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> MatFq {
        MatFq { rows, cols, data: vec![Scalar::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> MatFq {
        let mut m = MatFq::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::ONE);
        }
        m
    }

    /// `c * I_n`
    pub fn scalar(n: usize, c: Scalar) -> MatFq {
        let mut m = MatFq::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<MatFq> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(MatFq { rows: rows.len(), cols, data: rows.concat() })
    }

    /// Builds a matrix from integer entries, reduced into F_p.
    pub fn from_ints(rows: &[&[i64]], f: &Field) -> Result<MatFq> {
        let conv: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&v| f.from_int(v)).collect()).collect();
        MatFq::from_rows(&conv)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn transpose(&self) -> MatFq {
        let mut t = MatFq::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &MatFq, f: &Field) -> MatFq {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = MatFq::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(v: &[Scalar], m: &MatFq, f: &Field) -> Vec<Scalar> {
        assert_eq!(v.len(), m.rows, "vector-matrix dimension mismatch");
        let mut out = vec![Scalar::ZERO; m.cols];
        for (k, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, m.get(k, j)));
            }
        }
        out
    }

    pub fn add(&self, other: &MatFq, f: &Field) -> MatFq {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        MatFq { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &MatFq, f: &Field) -> MatFq {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        MatFq { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: Scalar, f: &Field) -> MatFq {
        MatFq { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn pow(&self, mut k: u64, f: &Field) -> MatFq {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = MatFq::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            k >>= 1;
        }
        acc
    }

    /// `p(self)` by Horner's rule.
    pub fn poly_eval(&self, p: &Poly, f: &Field) -> MatFq {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = MatFq::zeros(n, n);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(self, f).add(&MatFq::scalar(n, c), f);
        }
        acc
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self, f: &Field) -> (MatFq, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let inv = f.inv(a.get(r, c)).expect("pivot is nonzero");
            for j in c..a.cols {
                let v = f.mul(a.get(r, j), inv);
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                let t = a.get(i, c);
                if i == r || t.is_zero() {
                    continue;
                }
                for j in c..a.cols {
                    let v = f.sub(a.get(i, j), f.mul(t, a.get(r, j)));
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of `{x : self * x = 0}` (column vectors, returned as slices).
    pub fn right_nullspace(&self, f: &Field) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![Scalar::ZERO; self.cols];
                x[fc] = Scalar::ONE;
                for (i, &pc) in pivots.iter().enumerate() {
                    x[pc] = f.neg(r.get(i, fc));
                }
                x
            })
            .collect()
    }

    /// Basis of the left kernel `{v : v * self = 0}`.
    pub fn left_kernel(&self, f: &Field) -> Vec<Vec<Scalar>> {
        self.transpose().right_nullspace(f)
    }

    /// Rank together with a left-kernel basis; `rank + kernel.len() == rows`.
    pub fn rank_kernel(&self, f: &Field) -> (usize, Vec<Vec<Scalar>>) {
        let k = self.left_kernel(f);
        (self.rows - k.len(), k)
    }

    pub fn inverse(&self, f: &Field) -> Result<MatFq> {
        if !self.is_square() {
            return Err(Error::InvalidInput("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let mut aug = MatFq::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Scalar::ONE);
        }
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(r.submatrix(&rows, &cols))
    }

    pub fn is_invertible(&self, f: &Field) -> bool {
        self.is_square() && self.rank(f) == self.rows
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> MatFq {
        let mut out = MatFq::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    pub fn block_diag(blocks: &[&MatFq]) -> MatFq {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = MatFq::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Characteristic polynomial `det(xI - self)` via Hessenberg reduction.
    pub fn charpoly(&self, f: &Field) -> Poly {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        // similarity transforms to upper Hessenberg form
        for m in 1..n.saturating_sub(1) {
            let Some(piv) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
                continue;
            };
            if piv != m {
                h.swap_rows(piv, m);
                for i in 0..n {
                    h.data.swap(i * n + piv, i * n + m);
                }
            }
            let inv = f.inv(h.get(m, m - 1)).expect("pivot is nonzero");
            for i in m + 1..n {
                let t = f.mul(h.get(i, m - 1), inv);
                if t.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub(h.get(i, j), f.mul(t, h.get(m, j)));
                    h.set(i, j, v);
                }
                for k in 0..n {
                    let v = f.add(h.get(k, m), f.mul(t, h.get(k, i)));
                    h.set(k, m, v);
                }
            }
        }
        // p_k = (x - h_kk) p_{k-1} - sum_i h_{k-i,k} (prod h_{j,j-1}) p_{k-i-1}
        let mut p: Vec<Poly> = vec![Poly::one()];
        for k in 0..n {
            let mut next = Poly::linear(h.get(k, k), f).mul(&p[k], f);
            let mut prod = Scalar::ONE;
            for i in 1..=k {
                prod = f.mul(prod, h.get(k - i + 1, k - i));
                let c = f.mul(h.get(k - i, k), prod);
                if !c.is_zero() {
                    next = next.sub(&p[k - i].scale(c, f), f);
                }
            }
            p.push(next);
        }
        p.pop().expect("nonempty")
    }

    /// Injective base-q encoding, used as a hash key during enumeration.
    pub fn key(&self, q: u32) -> u128 {
        assert!(
            (q as f64).log2().ceil() as usize * self.data.len() <= 128,
            "matrix too large for a u128 key"
        );
        self.data.iter().rev().fold(0u128, |acc, c| acc * q as u128 + c.code() as u128)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, f: &Field, rng: &mut R) -> MatFq {
        let data = (0..rows * cols).map(|_| f.from_code(rng.gen_range(0..f.q()) as u8)).collect();
        MatFq { rows, cols, data }
    }

    pub fn random_invertible<R: Rng + ?Sized>(n: usize, f: &Field, rng: &mut R) -> MatFq {
        loop {
            let m = MatFq::random(n, n, f, rng);
            if m.is_invertible(f) {
                return m;
            }
        }
    }

    /// Text form `[[a,b],[c,d]]` with scalars in field notation.
    pub fn to_text(&self, f: &Field) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|&c| f.format_scalar(c)).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }

    /// Parses a JSON array of rows whose entries are integers or scalar strings.
    pub fn parse_json(text: &str, f: &Field) -> Result<MatFq> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
        let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be a JSON array".into()))?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_array().ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
            let mut row = Vec::with_capacity(r.len());
            for e in r {
                row.push(match e {
                    serde_json::Value::Number(n) => {
                        f.from_int(n.as_i64().ok_or_else(|| Error::Parse(format!("bad entry {n}")))?)
                    }
                    serde_json::Value::String(s) => f.parse_scalar(s)?,
                    other => return Err(Error::Parse(format!("bad matrix entry {other}"))),
                });
            }
            out.push(row);
        }
        MatFq::from_rows(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_kernel_examples() {
        let f2 = Field::get(2).unwrap();
        let (r, k) = MatFq::identity(3).rank_kernel(f2);
        assert_eq!((r, k.len()), (3, 0));
        let (r, k) = MatFq::zeros(2, 3).rank_kernel(f2);
        assert_eq!((r, k.len()), (0, 2));
        // det = 1 - 4 = -3 = 0 mod 3
        let f3 = Field::get(3).unwrap();
        let m = MatFq::from_ints(&[&[1, 2], &[2, 1]], f3).unwrap();
        let (r, k) = m.rank_kernel(f3);
        assert_eq!(r, 1);
        assert!(MatFq::vec_mul(&k[0], &m, f3).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2, 3, 4, 5, 9] {
            let f = Field::get(q).unwrap();
            for n in 1..=4 {
                let g = MatFq::random_invertible(n, f, &mut rng);
                assert_eq!(g.mul(&g.inverse(f).unwrap(), f), MatFq::identity(n));
            }
        }
        let f = Field::get(2).unwrap();
        assert_eq!(MatFq::zeros(2, 2).inverse(f), Err(Error::SingularMatrix));
    }

    #[test]
    fn charpoly_cayley_hamilton_and_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2, 3, 4, 7] {
            let f = Field::get(q).unwrap();
            for n in 1..=5 {
                for _ in 0..10 {
                    let a = MatFq::random(n, n, f, &mut rng);
                    let p = a.charpoly(f);
                    assert_eq!(p.degree(), Some(n));
                    assert!(p.is_monic());
                    assert!(a.poly_eval(&p, f).is_zero());
                    let trace = (0..n).fold(Scalar::ZERO, |acc, i| f.add(acc, a.get(i, i)));
                    assert_eq!(p.coeff(n - 1), f.neg(trace));
                }
            }
        }
    }

    #[test]
    fn charpoly_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Field::get(5).unwrap();
        for _ in 0..20 {
            let a = MatFq::random(4, 4, f, &mut rng);
            let x = MatFq::random_invertible(4, f, &mut rng);
            let b = x.mul(&a, f).mul(&x.inverse(f).unwrap(), f);
            assert_eq!(a.charpoly(f), b.charpoly(f));
        }
    }

    #[test]
    fn json_and_text() {
        let f = Field::get(4).unwrap();
        let m = MatFq::parse_json(r#"[[1,"g"],[0,"g^2"]]"#, f).unwrap();
        assert_eq!(m.to_text(f), "[[1,g],[0,g^2]]");
        assert!(MatFq::parse_json("[[1,2],[3]]", f).is_err());
    }
}
