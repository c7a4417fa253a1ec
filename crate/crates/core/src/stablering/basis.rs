use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{MuVec, StableRing};
use crate::classfn::ClassFunction;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matspace::ClassLabel;

/// Coefficients below this magnitude are dropped.
pub const DROP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    R,
    Rfr,
    P,
    I,
}

impl Basis {
    pub const ALL: [Basis; 4] = [Basis::R, Basis::Rfr, Basis::P, Basis::I];

    pub fn name(self) -> &'static str {
        match self {
            Basis::R => "R",
            Basis::Rfr => "Rfr",
            Basis::P => "P",
            Basis::I => "I",
        }
    }

    pub fn parse(s: &str) -> Result<Basis> {
        match s.trim().to_ascii_lowercase().as_str() {
            "r" => Ok(Basis::R),
            "rfr" => Ok(Basis::Rfr),
            "p" => Ok(Basis::P),
            "i" => Ok(Basis::I),
            _ => Err(Error::Parse(format!("unknown basis '{s}'"))),
        }
    }

    fn position(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    /// `btil(B, ·)` for the class `B` of GL_m.
    R(ClassLabel),
    /// `btil_fr(B, ·)` for the class `B` of GL_m.
    Rfr(ClassLabel),
    /// `χ∘1` for row `row` of the character table of GL_m.
    P { m: usize, row: usize },
    /// The stable irreducible `χ_{μ[N]}`.
    I(MuVec),
}

impl BasisLabel {
    pub fn basis(&self) -> Basis {
        match self {
            BasisLabel::R(_) => Basis::R,
            BasisLabel::Rfr(_) => Basis::Rfr,
            BasisLabel::P { .. } => Basis::P,
            BasisLabel::I(_) => Basis::I,
        }
    }

    /// The filtration level `m`.
    pub fn level(&self) -> usize {
        match self {
            BasisLabel::R(b) | BasisLabel::Rfr(b) => b.n(),
            BasisLabel::P { m, .. } => *m,
            BasisLabel::I(mu) => mu.norm(),
        }
    }

    pub fn to_text(&self, f: &Field) -> String {
        match self {
            BasisLabel::R(b) => format!("R[{}]", b.to_text(f)),
            BasisLabel::Rfr(b) => format!("Rfr[{}]", b.to_text(f)),
            BasisLabel::P { m, row } => format!("P[{m}.{row}]"),
            BasisLabel::I(mu) => format!("I[{mu}]"),
        }
    }

    /// The generator equal to the constant function 1.
    pub fn one(basis: Basis) -> BasisLabel {
        match basis {
            Basis::R => BasisLabel::R(ClassLabel::empty()),
            Basis::Rfr => BasisLabel::Rfr(ClassLabel::empty()),
            Basis::P => BasisLabel::P { m: 0, row: 0 },
            Basis::I => BasisLabel::I(MuVec::empty()),
        }
    }
}

/// A finite linear combination of generators of one basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StableFunction {
    basis: Basis,
    terms: BTreeMap<BasisLabel, Complex64>,
}

impl StableFunction {
    pub fn zero(basis: Basis) -> StableFunction {
        StableFunction { basis, terms: BTreeMap::new() }
    }

    pub fn single(label: BasisLabel) -> StableFunction {
        let mut out = StableFunction::zero(label.basis());
        out.terms.insert(label, Complex64::new(1.0, 0.0));
        out
    }

    pub fn one(basis: Basis) -> StableFunction {
        StableFunction::single(BasisLabel::one(basis))
    }

    pub fn from_terms(basis: Basis, terms: impl IntoIterator<Item = (BasisLabel, Complex64)>) -> Result<StableFunction> {
        let mut out = StableFunction::zero(basis);
        for (label, c) in terms {
            out.add_term(label, c)?;
        }
        Ok(out)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn terms(&self) -> &BTreeMap<BasisLabel, Complex64> {
        &self.terms
    }

    pub fn coeff(&self, label: &BasisLabel) -> Complex64 {
        self.terms.get(label).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest level among the terms; 0 for the zero function.
    pub fn level(&self) -> usize {
        self.terms.keys().map(BasisLabel::level).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, label: BasisLabel, c: Complex64) -> Result<()> {
        if label.basis() != self.basis {
            return Err(Error::InvalidInput(format!("{} term in a {} combination", label.basis(), self.basis)));
        }
        let e = self.terms.entry(label).or_default();
        *e += c;
        self.prune();
        Ok(())
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= DROP_TOL);
    }

    pub fn add_scaled(&mut self, other: &StableFunction, c: Complex64) -> Result<()> {
        if other.basis != self.basis {
            return Err(Error::InvalidInput(format!("cannot add {} to {}", other.basis, self.basis)));
        }
        for (label, v) in &other.terms {
            *self.terms.entry(label.clone()).or_default() += c * v;
        }
        self.prune();
        Ok(())
    }

    pub fn scale(&self, c: Complex64) -> StableFunction {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|v| *v *= c);
        out.prune();
        out
    }

    /// `max |self_L - other_L|` over all labels; infinite across bases.
    pub fn max_diff(&self, other: &StableFunction) -> f64 {
        if self.basis != other.basis {
            return f64::INFINITY;
        }
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|l| (self.coeff(l) - other.coeff(l)).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_text(&self, f: &Field) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(l, c)| format!("({})*{}", crate::chartab::fmt_complex(*c), l.to_text(f)))
            .collect();
        parts.join(" + ")
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl StableRing {
    /// Evaluates `f` on the classes of GL_n.
    pub fn evaluate(&self, f: &StableFunction, n: usize) -> Result<ClassFunction<Complex64>> {
        let mut out = ClassFunction::zero(self.q(), n, self.classes(n)?.len());
        for (label, &c) in f.terms() {
            out.add_scaled(&self.evaluate_label(label, n)?, c);
        }
        Ok(out)
    }

    pub fn evaluate_label(&self, label: &BasisLabel, n: usize) -> Result<ClassFunction<Complex64>> {
        Ok(match label {
            BasisLabel::R(b) => self.btil_fn(b, n)?.to_complex(),
            BasisLabel::Rfr(b) => self.btil_fr_fn(b, n)?.to_complex(),
            BasisLabel::P { m, row } => (*self.chi_circ_one(*m, *row, n)?).clone(),
            BasisLabel::I(mu) => (*self.stable_irr_char(mu, n)?).clone(),
        })
    }

    /// Rewrites `f` in the `target` basis along the chain `R - Rfr - P - I`.
    pub fn change_basis(&self, f: &StableFunction, target: Basis) -> Result<StableFunction> {
        let mut cur = f.clone();
        while cur.basis() != target {
            let up = target.position() > cur.basis().position();
            let next = match (cur.basis(), up) {
                (Basis::R, _) => Basis::Rfr,
                (Basis::Rfr, true) => Basis::P,
                (Basis::Rfr, false) => Basis::R,
                (Basis::P, true) => Basis::I,
                (Basis::P, false) => Basis::Rfr,
                (Basis::I, _) => Basis::P,
            };
            let mut out = StableFunction::zero(next);
            for (label, &c) in cur.terms() {
                out.add_scaled(&self.convert_label(label, next)?, c)?;
            }
            cur = out;
        }
        Ok(cur)
    }

    /// The product `f·g`, computed in the R basis where
    /// `btil_B · btil_C = btil_{B ⊕ C}`, and returned in the basis of `f`.
    pub fn multiply(&self, f: &StableFunction, g: &StableFunction) -> Result<StableFunction> {
        let (a, b) = (self.change_basis(f, Basis::R)?, self.change_basis(g, Basis::R)?);
        let mut out = StableFunction::zero(Basis::R);
        for (la, ca) in a.terms() {
            for (lb, cb) in b.terms() {
                if let (BasisLabel::R(x), BasisLabel::R(y)) = (la, lb) {
                    out.add_term(BasisLabel::R(x.direct_sum(y)), ca * cb)?;
                }
            }
        }
        self.change_basis(&out, f.basis())
    }

    /// One generator rewritten in an adjacent basis.
    fn convert_label(&self, label: &BasisLabel, next: Basis) -> Result<StableFunction> {
        match (label, next) {
            (BasisLabel::R(b), Basis::Rfr) => StableFunction::from_terms(
                Basis::Rfr,
                self.counter().decomposition(b)?.into_iter().map(|(c, k)| (BasisLabel::Rfr(c), real(k as f64))),
            ),
            (BasisLabel::Rfr(b), Basis::R) => {
                // btil_fr_B = btil_B - sum_{C != B} k_C btil_fr_C, with |C| < |B|
                let mut out = StableFunction::single(BasisLabel::R(b.clone()));
                for (c, k) in self.counter().decomposition(b)? {
                    if &c != b {
                        out.add_scaled(&self.convert_label(&BasisLabel::Rfr(c), Basis::R)?, real(-(k as f64)))?;
                    }
                }
                Ok(out)
            }
            (BasisLabel::Rfr(b), Basis::P) => {
                let m = b.n();
                let table = self.table(m)?;
                let class = table
                    .classes
                    .index_of(b)
                    .ok_or_else(|| Error::InvalidInput(format!("unlisted class of GL_{m}")))?;
                StableFunction::from_terms(
                    Basis::P,
                    table.values.iter().enumerate().map(|(row, chi)| (BasisLabel::P { m, row }, chi[class].conj())),
                )
            }
            (BasisLabel::P { m, row }, Basis::Rfr) => {
                let table = self.table(*m)?;
                let chi = &table.values[*row];
                StableFunction::from_terms(
                    Basis::Rfr,
                    table
                        .classes
                        .labels
                        .iter()
                        .enumerate()
                        .map(|(c, l)| (BasisLabel::Rfr(l.clone()), chi[c] / table.classes.centralizers[c] as f64)),
                )
            }
            (BasisLabel::P { m, row }, Basis::I) => {
                let mu = self.identification(*m)?.by_row[*row].clone();
                let mut out = StableFunction::single(BasisLabel::I(mu.clone()));
                for nu in Self::strip_predecessors(&mu) {
                    out.add_term(BasisLabel::I(nu), real(1.0))?;
                }
                Ok(out)
            }
            (BasisLabel::I(mu), Basis::P) => {
                let mut out = StableFunction::single(BasisLabel::P { m: mu.norm(), row: self.row_of(mu)? });
                for nu in Self::strip_predecessors(mu) {
                    out.add_scaled(&self.convert_label(&BasisLabel::I(nu), Basis::P)?, real(-1.0))?;
                }
                Ok(out)
            }
            _ => Err(Error::InvalidInput(format!("no direct step from {} to {next}", label.basis()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::Partition;

    #[test]
    fn jordan_block_expands_into_full_rank_pieces() {
        let ring = StableRing::with_defaults(3).unwrap();
        let f = ring.field();
        let lam = f.from_int(2);
        let b = ClassLabel::jordan(lam, Partition::single_row(3), f).unwrap();
        let got = ring.change_basis(&StableFunction::single(BasisLabel::R(b)), Basis::Rfr).unwrap();
        let want = StableFunction::from_terms(
            Basis::Rfr,
            (0..=3).map(|j| (BasisLabel::Rfr(ClassLabel::jordan(lam, Partition::single_row(j), f).unwrap()), real(1.0))),
        )
        .unwrap();
        assert!(got.max_diff(&want) < 1e-12);
    }

    #[test]
    fn one_is_one_everywhere() {
        let ring = StableRing::with_defaults(2).unwrap();
        for a in Basis::ALL {
            for b in Basis::ALL {
                let got = ring.change_basis(&StableFunction::one(a), b).unwrap();
                assert!(got.max_diff(&StableFunction::one(b)) < 1e-9, "{a} -> {b}");
            }
        }
    }

    #[test]
    fn fixed_points_in_p_basis() {
        let ring = StableRing::with_defaults(2).unwrap();
        let f = ring.field();
        let one = ClassLabel::jordan(f.from_int(1), Partition::single_row(1), f).unwrap();
        let got = ring.change_basis(&StableFunction::single(BasisLabel::R(one)), Basis::P).unwrap();
        let want = StableFunction::from_terms(
            Basis::P,
            [(BasisLabel::P { m: 0, row: 0 }, real(1.0)), (BasisLabel::P { m: 1, row: 0 }, real(1.0))],
        )
        .unwrap();
        assert!(got.max_diff(&want) < 1e-9);
    }

    #[test]
    fn mixed_terms_rejected() {
        let mut f = StableFunction::one(Basis::R);
        assert!(f.add_term(BasisLabel::one(Basis::P), real(1.0)).is_err());
        assert!(f.scale(real(0.0)).is_zero());
    }
}
