use std::collections::HashMap;

use super::{class_label, gl_order, GroupClasses, MatFq};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Every element of a small GL_n(q), with class membership found by brute
/// force conjugation orbits (not by the label algorithm).
pub struct EnumeratedGroup {
    pub classes: GroupClasses,
    pub elements: Vec<MatFq>,
    pub inverses: Vec<usize>,
    /// Index into `classes.labels` for each element.
    pub class_of: Vec<usize>,
    /// Sizes of the conjugation orbits, indexed like `classes.labels`.
    pub orbit_sizes: Vec<u128>,
    index: HashMap<u128, usize>,
    q: u32,
}

impl EnumeratedGroup {
    pub fn new(n: usize, f: &'static Field, max_order: u128) -> Result<EnumeratedGroup> {
        let order = gl_order(n, f.q())?;
        if order > max_order {
            return Err(Error::bound("|GL_N(q)| for brute-force enumeration", order, max_order));
        }
        let q = f.q();
        let classes = GroupClasses::new(n, f)?;
        let elements = all_invertible(n, f);
        debug_assert_eq!(elements.len() as u128, order);
        let index: HashMap<u128, usize> = elements.iter().enumerate().map(|(i, g)| (g.key(q), i)).collect();
        let inverses = elements
            .iter()
            .map(|g| Ok(index[&g.inverse(f)?.key(q)]))
            .collect::<Result<Vec<_>>>()?;

        let mut class_of = vec![usize::MAX; elements.len()];
        let mut orbit_sizes = vec![0u128; classes.len()];
        for start in 0..elements.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let label = class_label(&elements[start], f)?;
            let c = classes
                .index_of(&label)
                .ok_or_else(|| Error::InvalidInput(format!("unlisted class {}", label.to_text(f))))?;
            if orbit_sizes[c] != 0 {
                return Err(Error::InvalidInput(format!("class {} met twice", label.to_text(f))));
            }
            let g = &elements[start];
            for (x, &xi) in elements.iter().zip(&inverses) {
                let conj = x.mul(g, f).mul(&elements[xi], f);
                let idx = index[&conj.key(q)];
                if class_of[idx] == usize::MAX {
                    class_of[idx] = c;
                    orbit_sizes[c] += 1;
                }
            }
        }
        Ok(EnumeratedGroup { classes, elements, inverses, class_of, orbit_sizes, index, q })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &MatFq) -> usize {
        self.index[&g.key(self.q)]
    }

    /// Number of conjugacy classes found by orbit counting.
    pub fn orbit_count(&self) -> usize {
        self.orbit_sizes.iter().filter(|&&s| s > 0).count()
    }
}

/// All invertible `n x n` matrices, built row by row outside the span of
/// the previous rows.
fn all_invertible(n: usize, f: &Field) -> Vec<MatFq> {
    let q = f.q() as usize;
    let vectors: Vec<Vec<Scalar>> = (1..q.pow(n as u32))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let d = c % q;
                    c /= q;
                    f.from_code(d as u8)
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    fn rec(n: usize, f: &Field, vectors: &[Vec<Scalar>], rows: &mut Vec<Vec<Scalar>>, out: &mut Vec<MatFq>) {
        if rows.len() == n {
            out.push(MatFq::from_rows(rows).expect("rectangular"));
            return;
        }
        for v in vectors {
            rows.push(v.clone());
            if MatFq::from_rows(rows).expect("rectangular").rank(f) == rows.len() {
                rec(n, f, vectors, rows, out);
            }
            rows.pop();
        }
    }
    if n == 0 {
        return vec![MatFq::zeros(0, 0)];
    }
    rec(n, f, &vectors, &mut rows, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbits_match_class_sizes() {
        for (q, n) in [(2, 1), (2, 2), (2, 3), (3, 2), (4, 2), (5, 2)] {
            let f = Field::get(q).unwrap();
            let g = EnumeratedGroup::new(n, f, 25_000).unwrap();
            assert_eq!(g.order() as u128, g.classes.order);
            assert_eq!(g.orbit_count(), g.classes.len(), "q={q} n={n}");
            for i in 0..g.classes.len() {
                assert_eq!(g.orbit_sizes[i], g.classes.class_size(i), "q={q} n={n} class {i}");
            }
        }
    }

    #[test]
    fn brute_force_centralizer() {
        let f = Field::get(2).unwrap();
        let g = EnumeratedGroup::new(2, f, 25_000).unwrap();
        let b = MatFq::from_ints(&[&[1, 0], &[1, 1]], f).unwrap();
        let commuting = g.elements.iter().filter(|x| x.mul(&b, f) == b.mul(x, f)).count();
        assert_eq!(commuting, 2);
    }

    #[test]
    fn bound_is_enforced() {
        let f = Field::get(3).unwrap();
        assert!(matches!(EnumeratedGroup::new(3, f, 1000), Err(Error::BoundExceeded { .. })));
    }
}
