use std::fmt;

use crate::error::{Error, Result};

/// An integer partition, stored as a non-increasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Validating constructor; parts must be positive and non-increasing.
    pub fn new(parts: Vec<usize>) -> Result<Partition> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn single_row(n: usize) -> Partition {
        Partition::from_unsorted(vec![n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Part `i` (0-based), zero beyond the last row.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(0);
        Partition((1..=width).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }

    /// Multiplicity of each part size: `m[i]` is the number of parts equal to `i+1`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.part(0)];
        for &p in &self.0 {
            m[p - 1] += 1;
        }
        m
    }

    /// Diagram containment `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// All partitions of `n`, in the derived (lexicographic) order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// Comma-separated parts; the empty partition is `0`.
    pub fn to_text(&self) -> String {
        if self.0.is_empty() {
            return "0".to_string();
        }
        self.0.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse(s: &str) -> Result<Partition> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() || s == "0" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad partition part '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
