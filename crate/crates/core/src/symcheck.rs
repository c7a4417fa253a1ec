//! The symmetric-group counterpart: `σ̃` and `σ̃^fr` counts on S_N, exact
//! Murnaghan-Nakayama character tables of S_m, induction from
//! `S_m × S_{N-m}`, and the two Fourier-type identities between them.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matspace::Partition;

/// A permutation of `{0, .., n-1}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Perm> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Perm {
        Perm { images: (0..n).collect() }
    }

    /// The cycle `0 -> 1 -> .. -> n-1 -> 0`.
    pub fn long_cycle(n: usize) -> Perm {
        Perm { images: (0..n).map(|i| (i + 1) % n).collect() }
    }

    /// A permutation of cycle type `ct`, cycles on consecutive points.
    pub fn of_type(ct: &Partition) -> Perm {
        let mut images = Vec::with_capacity(ct.size());
        for &len in ct.parts() {
            let start = images.len();
            images.extend((0..len).map(|i| start + (i + 1) % len));
        }
        Perm { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn pow(&self, k: usize) -> Perm {
        let images = (0..self.n()).map(|mut i| {
            for _ in 0..k {
                i = self.images[i];
            }
            i
        });
        Perm { images: images.collect() }
    }

    pub fn fix(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &j)| *i == j).count()
    }

    pub fn cycle_type(&self) -> Partition {
        let mut seen = vec![false; self.n()];
        let mut parts = Vec::new();
        for s in 0..self.n() {
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            if len > 0 {
                parts.push(len);
            }
        }
        Partition::from_unsorted(parts)
    }

    /// All of S_n in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
            if cur.len() == used.len() {
                out.push(Perm { images: cur.clone() });
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }
}

/// A cycle type, with `a_i` the number of `i`-cycles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType(pub Partition);

impl CycleType {
    pub fn a(&self, i: usize) -> usize {
        self.0.parts().iter().filter(|&&p| p == i).count()
    }

    /// Centralizer order `prod_i i^{a_i} a_i!`.
    pub fn z(&self) -> BigInt {
        let mut out = BigInt::one();
        for (i, a) in multiplicities(&self.0) {
            for k in 1..=a {
                out *= BigInt::from(i) * BigInt::from(k);
            }
        }
        out
    }
}

fn multiplicities(p: &Partition) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &x in p.parts() {
        match out.last_mut() {
            Some((v, k)) if *v == x => *k += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

/// `#{φ: [m] -> [N] | g∘φ = φ∘σ}` by enumerating all maps.
pub fn sigma_til_brute(sigma: &Perm, g: &Perm) -> u64 {
    count_maps(sigma, g, false)
}

/// As [`sigma_til_brute`], injective maps only.
pub fn sigma_til_fr_brute(sigma: &Perm, g: &Perm) -> u64 {
    count_maps(sigma, g, true)
}

fn count_maps(sigma: &Perm, g: &Perm, injective: bool) -> u64 {
    let (m, n) = (sigma.n(), g.n());
    if n == 0 {
        return (m == 0) as u64;
    }
    let mut phi = vec![0usize; m];
    let mut count = 0;
    loop {
        let ok = (0..m).all(|i| g.apply(phi[i]) == phi[sigma.apply(i)])
            && (!injective || (0..m).all(|i| (0..i).all(|j| phi[i] != phi[j])));
        count += ok as u64;
        // odometer over [N]^m
        let mut k = 0;
        loop {
            if k == m {
                return count;
            }
            phi[k] += 1;
            if phi[k] < n {
                break;
            }
            phi[k] = 0;
            k += 1;
        }
    }
}

/// `prod_i fix(g^{μ_i})` for `σ` of cycle type `μ`.
pub fn sigma_til(sigma: &Perm, g: &Perm) -> u64 {
    sigma.cycle_type().parts().iter().map(|&l| g.pow(l).fix() as u64).product()
}

/// `prod_i i^{r_i} (a_i(g))_{r_i}`, with `r_i` the number of `i`-cycles of `σ`.
pub fn sigma_til_fr_formula(sigma: &CycleType, g: &CycleType) -> BigInt {
    let mut out = BigInt::one();
    for (i, r) in multiplicities(&sigma.0) {
        let a = g.a(i) as i64;
        for k in 0..r as i64 {
            out *= BigInt::from(i) * BigInt::from(a - k);
        }
    }
    out
}

pub fn sigma_til_fr(sigma: &Perm, g: &Perm) -> BigInt {
    sigma_til_fr_formula(&CycleType(sigma.cycle_type()), &CycleType(g.cycle_type()))
}

/// `χ^λ(ρ)` by Murnaghan-Nakayama on beta-sets.
pub fn mn_character(lambda: &Partition, rho: &Partition) -> i64 {
    fn rec(beta: Vec<usize>, rho: &[usize], memo: &mut HashMap<(Vec<usize>, usize), i64>) -> i64 {
        let Some((&r, rest)) = rho.split_first() else {
            return 1;
        };
        if let Some(&v) = memo.get(&(beta.clone(), rho.len())) {
            return v;
        }
        let mut total = 0;
        for (idx, &b) in beta.iter().enumerate() {
            if b < r || beta.contains(&(b - r)) {
                continue;
            }
            let between = beta.iter().filter(|&&c| c > b - r && c < b).count();
            let mut next = beta.clone();
            next[idx] = b - r;
            next.sort_unstable_by(|a, b| b.cmp(a));
            let sign = if between % 2 == 0 { 1 } else { -1 };
            total += sign * rec(next, rest, memo);
        }
        memo.insert((beta, rho.len()), total);
        total
    }
    assert_eq!(lambda.size(), rho.size(), "character arguments of different sizes");
    let l = lambda.len();
    let beta: Vec<usize> = (0..l).map(|i| lambda.part(i) + (l - 1 - i)).collect();
    rec(beta, rho.parts(), &mut HashMap::new())
}

/// Exact character table of S_m; rows and columns both indexed by
/// `Partition::all(m)`.
#[derive(Clone, Debug)]
pub struct SymTable {
    pub m: usize,
    pub partitions: Vec<Partition>,
    pub values: Vec<Vec<i64>>,
}

impl SymTable {
    pub fn new(m: usize) -> SymTable {
        let partitions = Partition::all(m);
        let values = partitions
            .iter()
            .map(|lam| partitions.iter().map(|rho| mn_character(lam, rho)).collect())
            .collect();
        SymTable { m, partitions, values }
    }

    pub fn class_index(&self, rho: &Partition) -> usize {
        self.partitions.iter().position(|p| p == rho).expect("partition of m")
    }
}

/// Sub-multisets of the parts of `gamma` summing to `m`, as `(α, γ \ α)`.
fn splits(gamma: &Partition, m: usize) -> Vec<(Partition, Partition)> {
    let mult = multiplicities(gamma);
    let mut out = Vec::new();
    fn rec(mult: &[(usize, usize)], i: usize, left: usize, a: &mut Vec<usize>, b: &mut Vec<usize>, out: &mut Vec<(Partition, Partition)>) {
        if i == mult.len() {
            if left == 0 {
                out.push((Partition::from_unsorted(a.clone()), Partition::from_unsorted(b.clone())));
            }
            return;
        }
        let (v, k) = mult[i];
        for take in 0..=k.min(left / v) {
            a.extend(std::iter::repeat(v).take(take));
            b.extend(std::iter::repeat(v).take(k - take));
            rec(mult, i + 1, left - take * v, a, b, out);
            a.truncate(a.len() - take);
            b.truncate(b.len() - (k - take));
        }
    }
    rec(&mult, 0, m, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// `(χ∘1)(γ) = z_γ sum_{α ∪ β = γ} χ(α) / (z_α z_β)` for row `row` of the
/// table of S_m, at a permutation of cycle type `γ ⊢ N`.
pub fn induce_from_young(table: &SymTable, row: usize, gamma: &Partition) -> BigRational {
    let z = |p: &Partition| CycleType(p.clone()).z();
    let mut out = BigRational::zero();
    for (alpha, beta) in splits(gamma, table.m) {
        let chi = table.values[row][table.class_index(&alpha)];
        out += BigRational::new(BigInt::from(chi), z(&alpha) * z(&beta));
    }
    out * BigRational::from_integer(z(gamma))
}

#[derive(Clone, Debug, Serialize)]
pub struct SnCase {
    pub identity: &'static str,
    pub input: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SnReport {
    pub m: usize,
    pub n: usize,
    pub cases: Vec<SnCase>,
    pub pass: bool,
}

/// Both Fourier-type identities on every class of S_N, exactly:
/// `χ∘1 = sum_α χ(α) σ̃^fr_α / z_α` and `σ̃^fr_α = sum_χ χ(α) χ∘1`.
pub fn sn_fourier_check(m: usize, n: usize) -> SnReport {
    let table = SymTable::new(m);
    let classes = Partition::all(n);
    let fr = |alpha: &Partition, gamma: &Partition| {
        BigRational::from_integer(sigma_til_fr_formula(&CycleType(alpha.clone()), &CycleType(gamma.clone())))
    };
    let mut cases = Vec::new();
    for gamma in &classes {
        let ind: Vec<BigRational> = (0..table.partitions.len()).map(|r| induce_from_young(&table, r, gamma)).collect();
        for (row, lam) in table.partitions.iter().enumerate() {
            let mut rhs = BigRational::zero();
            for (c, alpha) in table.partitions.iter().enumerate() {
                rhs += BigRational::from_integer(BigInt::from(table.values[row][c])) * fr(alpha, gamma)
                    / BigRational::from_integer(CycleType(alpha.clone()).z());
            }
            cases.push(SnCase {
                identity: "chi∘1 in terms of full-rank counts",
                input: format!("chi={} g={}", lam.to_text(), gamma.to_text()),
                pass: rhs == ind[row] && ind[row].is_integer(),
                expected: ind[row].to_string(),
                got: rhs.to_string(),
            });
        }
        for (c, alpha) in table.partitions.iter().enumerate() {
            let rhs: BigRational = (0..table.partitions.len())
                .map(|row| BigRational::from_integer(BigInt::from(table.values[row][c])) * &ind[row])
                .sum();
            let want = fr(alpha, gamma);
            cases.push(SnCase {
                identity: "full-rank counts in terms of chi∘1",
                input: format!("sigma={} g={}", alpha.to_text(), gamma.to_text()),
                pass: rhs == want,
                expected: want.to_string(),
                got: rhs.to_string(),
            });
        }
    }
    let pass = cases.iter().all(|c| c.pass);
    SnReport { m, n, cases, pass }
}

/// Brute-force counts against both product formulas, for every `σ ∈ S_m`
/// and one `g` per class of S_N.
pub fn sn_brute_check(m: usize, n: usize) -> SnReport {
    let mut cases = Vec::new();
    for sigma in Perm::all(m) {
        for gamma in Partition::all(n) {
            let g = Perm::of_type(&gamma);
            let (b, f) = (sigma_til_brute(&sigma, &g), sigma_til(&sigma, &g));
            cases.push(SnCase {
                identity: "sigma_til product of fixed points",
                input: format!("sigma={:?} g={}", sigma.images(), gamma.to_text()),
                expected: b.to_string(),
                got: f.to_string(),
                pass: b == f,
            });
            let (b, f) = (sigma_til_fr_brute(&sigma, &g), sigma_til_fr(&sigma, &g));
            cases.push(SnCase {
                identity: "sigma_til_fr falling factorials",
                input: format!("sigma={:?} g={}", sigma.images(), gamma.to_text()),
                expected: b.to_string(),
                pass: BigInt::from(b) == f,
                got: f.to_string(),
            });
        }
    }
    let pass = cases.iter().all(|c| c.pass);
    SnReport { m, n, cases, pass }
}

/// `E_N[σ̃^fr_α] = sum_γ σ̃^fr_α(γ) / z_γ`.
pub fn expectation_fr(alpha: &Partition, n: usize) -> BigRational {
    Partition::all(n)
        .iter()
        .map(|gamma| {
            BigRational::new(
                sigma_til_fr_formula(&CycleType(alpha.clone()), &CycleType(gamma.clone())),
                CycleType(gamma.clone()).z(),
            )
        })
        .sum()
}
