use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::matspace::Partition;

/// A cuspidal irreducible character of GL_n(q), by position in the
/// canonically ordered cuspidal list of GL_n(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CuspidalLabel {
    pub n: usize,
    pub index: usize,
}

impl CuspidalLabel {
    /// The trivial character of GL_1(q).
    pub const TRIVIAL: CuspidalLabel = CuspidalLabel { n: 1, index: 0 };

    pub fn is_trivial(self) -> bool {
        self == Self::TRIVIAL
    }
}

impl fmt::Display for CuspidalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.n, self.index)
    }
}

/// Finitely supported map from cuspidals to nonempty partitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MuVec(BTreeMap<CuspidalLabel, Partition>);

impl MuVec {
    pub fn empty() -> MuVec {
        MuVec::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (CuspidalLabel, Partition)>) -> MuVec {
        MuVec(pairs.into_iter().filter(|(_, p)| !p.is_empty()).collect())
    }

    /// `λ` placed on the trivial cuspidal.
    pub fn unipotent(lam: Partition) -> MuVec {
        MuVec::from_pairs([(CuspidalLabel::TRIVIAL, lam)])
    }

    pub fn support(&self) -> &BTreeMap<CuspidalLabel, Partition> {
        &self.0
    }

    pub fn get(&self, rho: CuspidalLabel) -> Partition {
        self.0.get(&rho).cloned().unwrap_or_default()
    }

    pub fn with(&self, rho: CuspidalLabel, lam: Partition) -> MuVec {
        let mut out = self.clone();
        if lam.is_empty() {
            out.0.remove(&rho);
        } else {
            out.0.insert(rho, lam);
        }
        out
    }

    /// The unipotent part `μ(1)`.
    pub fn trivial_part(&self) -> Partition {
        self.get(CuspidalLabel::TRIVIAL)
    }

    /// `‖μ‖ = sum d(ρ) |μ(ρ)|`
    pub fn norm(&self) -> usize {
        self.0.iter().map(|(rho, lam)| rho.n * lam.size()).sum()
    }

    /// Smallest N for which `μ[N]` is defined.
    pub fn min_n(&self) -> usize {
        self.norm() + self.trivial_part().part(0)
    }

    /// `μ[N]`: prepend a row of length `N - ‖μ‖` to `μ(1)`.
    pub fn at_n(&self, n: usize) -> Result<MuVec> {
        let min = self.min_n();
        if n < min {
            return Err(Error::TooSmallN { n, min });
        }
        let mut rows = vec![n - self.norm()];
        rows.extend_from_slice(self.trivial_part().parts());
        Ok(self.with(CuspidalLabel::TRIVIAL, Partition::from_unsorted(rows)))
    }

    /// Inverse of [`MuVec::at_n`]: drop the first row of `μ(1)`.
    pub fn destabilize(&self) -> MuVec {
        let rows = self.trivial_part().parts().iter().skip(1).copied().collect();
        self.with(CuspidalLabel::TRIVIAL, Partition::from_unsorted(rows))
    }

    /// Text form `{1.0:2,1|2.0:1}`.
    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.0.iter().map(|(rho, lam)| format!("{rho}:{}", lam.to_text())).collect();
        format!("{{{}}}", body.join("|"))
    }

    pub fn parse(s: &str) -> Result<MuVec> {
        let s = s.trim();
        let body = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("'{s}' must be wrapped in braces")))?;
        if body.trim().is_empty() {
            return Ok(MuVec::empty());
        }
        let mut map = BTreeMap::new();
        for item in body.split('|') {
            let (rho, lam) =
                item.split_once(':').ok_or_else(|| Error::Parse(format!("entry '{item}' lacks ':'")))?;
            let (n, index) =
                rho.trim().split_once('.').ok_or_else(|| Error::Parse(format!("cuspidal '{rho}' must be n.index")))?;
            let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad number '{t}'")));
            let rho = CuspidalLabel { n: parse(n)?, index: parse(index)? };
            if rho.n == 0 {
                return Err(Error::Parse("cuspidals live on GL_n with n >= 1".into()));
            }
            let lam = Partition::parse(lam)?;
            if lam.is_empty() || map.insert(rho, lam).is_some() {
                return Err(Error::Parse(format!("bad or repeated entry '{item}'")));
            }
        }
        Ok(MuVec(map))
    }
}

impl fmt::Display for MuVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Partitions `ν ⊇ λ` with `ν / λ` a horizontal strip of `r` boxes.
pub fn add_horizontal_strip(lam: &Partition, r: usize) -> Vec<Partition> {
    fn rec(lam: &Partition, i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i > lam.len() {
            if left == 0 {
                out.push(Partition::from_unsorted(cur.clone()));
            }
            return;
        }
        let low = lam.part(i);
        let high = if i == 0 { low + left } else { lam.part(i - 1).min(low + left) };
        for v in low..=high {
            cur.push(v);
            rec(lam, i + 1, left - (v - low), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lam, 0, r, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Partitions `ν ⊆ λ` with `λ / ν` a horizontal strip of `s` boxes.
pub fn remove_horizontal_strip(lam: &Partition, s: usize) -> Vec<Partition> {
    fn rec(lam: &Partition, i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == lam.len() {
            if left == 0 {
                out.push(Partition::from_unsorted(cur.clone()));
            }
            return;
        }
        let high = lam.part(i);
        let low = lam.part(i + 1).max(high.saturating_sub(left));
        for v in low..=high {
            cur.push(v);
            rec(lam, i + 1, left - (high - v), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lam, 0, s, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All `ν` with `ν(1) ~ μ(1) + r` and `ν(ρ) = μ(ρ)` elsewhere.
pub fn pieri_expand(mu: &MuVec, r: usize) -> Vec<MuVec> {
    add_horizontal_strip(&mu.trivial_part(), r)
        .into_iter()
        .map(|nu| mu.with(CuspidalLabel::TRIVIAL, nu))
        .collect()
}
