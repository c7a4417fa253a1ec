use std::collections::HashMap;

use super::{MatFq, Partition};
use crate::error::{Error, Result};
use crate::field::{Field, Poly};

/// Canonical name of a conjugacy class of GL_n(q): a partition for each
/// monic irreducible `f != x`, keys sorted, `sum deg(f) |λ_f| = n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ClassLabel {
    n: usize,
    parts: Vec<(Poly, Partition)>,
}

impl ClassLabel {
    /// The unique class of GL_0.
    pub fn empty() -> ClassLabel {
        ClassLabel::default()
    }

    pub fn new(mut parts: Vec<(Poly, Partition)>, f: &Field) -> Result<ClassLabel> {
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        if parts.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInput("repeated polynomial in class label".into()));
        }
        let mut n = 0;
        for (p, lam) in &parts {
            if !p.is_monic() || !f.is_irreducible(p) || *p == Poly::x() {
                return Err(Error::InvalidInput(format!(
                    "{} is not a monic irreducible other than x",
                    p.to_text(f)
                )));
            }
            if lam.is_empty() {
                return Err(Error::InvalidInput("empty partition in class label".into()));
            }
            n += p.degree().unwrap_or(0) * lam.size();
        }
        Ok(ClassLabel { n, parts })
    }

    pub fn single(p: Poly, lam: Partition, f: &Field) -> Result<ClassLabel> {
        ClassLabel::new(vec![(p, lam)], f)
    }

    /// Label of the Jordan-type class `{x - λ : μ}`.
    pub fn jordan(lambda: crate::field::Scalar, mu: Partition, f: &Field) -> Result<ClassLabel> {
        if mu.is_empty() {
            return Ok(ClassLabel::empty());
        }
        ClassLabel::single(Poly::linear(lambda, f), mu, f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[(Poly, Partition)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The label of the block-diagonal sum of two classes.
    pub fn direct_sum(&self, other: &ClassLabel) -> ClassLabel {
        let mut map: std::collections::BTreeMap<Poly, Vec<usize>> = std::collections::BTreeMap::new();
        for (p, lam) in self.parts.iter().chain(&other.parts) {
            map.entry(p.clone()).or_default().extend_from_slice(lam.parts());
        }
        ClassLabel {
            n: self.n + other.n,
            parts: map.into_iter().map(|(p, v)| (p, Partition::from_unsorted(v))).collect(),
        }
    }

    /// Characteristic polynomial of the class.
    pub fn charpoly(&self, f: &Field) -> Poly {
        self.parts
            .iter()
            .fold(Poly::one(), |acc, (p, lam)| acc.mul(&p.pow(lam.size(), f), f))
    }

    /// Whether the class is a single generalized Jordan block.
    pub fn is_single_block(&self) -> bool {
        self.parts.len() == 1 && self.parts[0].1.len() == 1
    }

    /// Text form `{x+1:2|x^2+x+1:1}`.
    pub fn to_text(&self, f: &Field) -> String {
        let body: Vec<String> =
            self.parts.iter().map(|(p, lam)| format!("{}:{}", p.to_text(f), lam.to_text())).collect();
        format!("{{{}}}", body.join("|"))
    }

    pub fn parse(s: &str, f: &Field) -> Result<ClassLabel> {
        let s = s.trim();
        let body = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("class label '{s}' must be wrapped in braces")))?;
        if body.trim().is_empty() {
            return Ok(ClassLabel::empty());
        }
        let mut parts = Vec::new();
        for item in body.split('|') {
            let (p, lam) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("class label entry '{item}' lacks ':'")))?;
            let lam = Partition::parse(lam)?;
            if lam.is_empty() {
                return Err(Error::Parse(format!("empty partition in '{item}'")));
            }
            parts.push((Poly::parse(p, f)?, lam));
        }
        ClassLabel::new(parts, f).map_err(|e| match e {
            Error::InvalidInput(m) => Error::Parse(m),
            other => other,
        })
    }
}

/// The generalized Jordan form label of an invertible matrix.
///
/// For each irreducible factor `f` of multiplicity `k`, the conjugate
/// partition has column lengths `(rk f(g)^{j-1} - rk f(g)^j) / deg f`.
pub fn class_label(g: &MatFq, f: &Field) -> Result<ClassLabel> {
    if !g.is_square() {
        return Err(Error::InvalidInput("class_label needs a square matrix".into()));
    }
    let n = g.rows();
    if n == 0 {
        return Ok(ClassLabel::empty());
    }
    let cp = g.charpoly(f);
    if cp.coeff(0).is_zero() {
        return Err(Error::SingularMatrix);
    }
    let mut parts = Vec::new();
    for (p, k) in f.factor_monic(&cp)? {
        let d = p.degree().unwrap_or(1);
        let pg = g.poly_eval(&p, f);
        let mut power = MatFq::identity(n);
        let mut prev_rank = n;
        let mut cols = Vec::new();
        let mut total = 0;
        while total < k {
            power = power.mul(&pg, f);
            let r = power.rank(f);
            let c = (prev_rank - r) / d;
            debug_assert!(c > 0, "rank sequence stalled before reaching the multiplicity");
            if c == 0 {
                return Err(Error::NumericalFailure("rank sequence stalled".into()));
            }
            cols.push(c);
            total += c;
            prev_rank = r;
        }
        parts.push((p, Partition::from_unsorted(cols).conjugate()));
    }
    Ok(ClassLabel { n, parts })
}

/// Companion matrix with ones on the subdiagonal and `-a` in the last column.
fn companion(p: &Poly, f: &Field) -> MatFq {
    let d = p.degree().expect("nonzero polynomial");
    let mut c = MatFq::zeros(d, d);
    for i in 1..d {
        c.set(i, i - 1, crate::field::Scalar::ONE);
    }
    for i in 0..d {
        c.set(i, d - 1, f.neg(p.coeff(i)));
    }
    c
}

/// One generalized Jordan block: `C_f` on the diagonal, and below it a
/// block whose only nonzero entry is a 1 in its upper-right corner.
pub(crate) fn jordan_block(p: &Poly, t: usize, f: &Field) -> MatFq {
    let d = p.degree().expect("nonzero polynomial");
    let c = companion(p, f);
    let mut m = MatFq::block_diag(&vec![&c; t]);
    for b in 1..t {
        m.set(b * d, (b - 1) * d + d - 1, crate::field::Scalar::ONE);
    }
    m
}

/// Canonical representative: block-diagonal sum of generalized Jordan blocks.
pub fn representative(label: &ClassLabel, f: &Field) -> MatFq {
    let blocks: Vec<MatFq> = label
        .parts
        .iter()
        .flat_map(|(p, lam)| lam.parts().iter().map(move |&t| (p, t)))
        .map(|(p, t)| jordan_block(p, t, f))
        .collect();
    MatFq::block_diag(&blocks.iter().collect::<Vec<_>>())
}

fn checked_pow(base: u128, exp: usize) -> Result<u128> {
    base.checked_pow(exp as u32).ok_or(Error::Overflow("group order"))
}

/// `|GL_n(q)| = prod_{i<n} (q^n - q^i)`.
pub fn gl_order(n: usize, q: u32) -> Result<u128> {
    let qn = checked_pow(q as u128, n)?;
    (0..n).try_fold(1u128, |acc, i| {
        let term = qn - checked_pow(q as u128, i)?;
        acc.checked_mul(term).ok_or(Error::Overflow("group order"))
    })
}

/// Order of the centralizer of any element of the class.
pub fn centralizer_order(label: &ClassLabel, q: u32) -> Result<u128> {
    let mut total = 1u128;
    for (p, lam) in &label.parts {
        let big_q = checked_pow(q as u128, p.degree().unwrap_or(1))?;
        let conj = lam.conjugate();
        let mult = lam.multiplicities();
        let sq: usize = conj.parts().iter().map(|c| c * c).sum();
        let tri: usize = mult.iter().map(|m| m * (m + 1) / 2).sum();
        let mut c = checked_pow(big_q, sq - tri)?;
        for &m in &mult {
            for k in 1..=m {
                c = c.checked_mul(checked_pow(big_q, k)? - 1).ok_or(Error::Overflow("centralizer order"))?;
            }
        }
        total = total.checked_mul(c).ok_or(Error::Overflow("centralizer order"))?;
    }
    Ok(total)
}

/// All class labels of GL_n(q), sorted.
pub fn enumerate_classes(n: usize, f: &Field) -> Vec<ClassLabel> {
    fn rec(
        polys: &[Poly],
        start: usize,
        remaining: usize,
        cur: &mut Vec<(Poly, Partition)>,
        out: &mut Vec<ClassLabel>,
        n: usize,
    ) {
        if remaining == 0 {
            out.push(ClassLabel { n, parts: cur.clone() });
            return;
        }
        for i in start..polys.len() {
            let d = polys[i].degree().unwrap_or(1);
            for s in 1..=remaining / d {
                for lam in Partition::all(s) {
                    cur.push((polys[i].clone(), lam));
                    rec(polys, i + 1, remaining - d * s, cur, out, n);
                    cur.pop();
                }
            }
        }
    }
    let polys = f.irreducibles_up_to(n.max(1), true);
    let mut out = Vec::new();
    rec(&polys, 0, n, &mut Vec::new(), &mut out, n);
    out.sort();
    out
}

/// Classes of GL_n(q) with representatives and centralizer orders.
#[derive(Clone, Debug)]
pub struct GroupClasses {
    pub q: u32,
    pub n: usize,
    pub labels: Vec<ClassLabel>,
    pub reps: Vec<MatFq>,
    pub centralizers: Vec<u128>,
    pub order: u128,
    index: HashMap<ClassLabel, usize>,
}

impl GroupClasses {
    pub fn new(n: usize, f: &Field) -> Result<GroupClasses> {
        let labels = enumerate_classes(n, f);
        let reps = labels.iter().map(|l| representative(l, f)).collect();
        let centralizers = labels.iter().map(|l| centralizer_order(l, f.q())).collect::<Result<Vec<_>>>()?;
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Ok(GroupClasses { q: f.q(), n, labels, reps, centralizers, order: gl_order(n, f.q())?, index })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &ClassLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// `|G| / |C_G(g)|` for class `i`.
    pub fn class_size(&self, i: usize) -> u128 {
        self.order / self.centralizers[i]
    }

    /// Index of the identity class.
    pub fn identity_index(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        let f = Field::get(self.q).expect("valid q");
        let id = ClassLabel {
            n: self.n,
            parts: vec![(Poly::linear(crate::field::Scalar::ONE, f), Partition::from_unsorted(vec![1; self.n]))],
        };
        self.index_of(&id).expect("identity class is enumerated")
    }
}
