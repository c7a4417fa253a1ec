mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scfq::counting::Counter;
use scfq::field::Field;
use scfq::matspace::{enumerate_classes, ClassLabel, MatFq, Partition};
use scfq::nirpoly::{extension_property, multiplicity_fit, nilpotent_partition, nmultiset, p_mu_at_q, JordanSpec};

fn p(s: &str) -> Partition {
    Partition::parse(s).unwrap()
}

/// `btil_fr(B_{λ,μ}, g) = p_μ(x_1(g), x_2(g), ..)` with `x_t = btil_fr(B_{λ,(t)}, g)`.
#[test]
fn universal_polynomial_evaluates_pointwise() {
    for (q, nmax) in [(2u32, 4usize), (3, 3)] {
        let f = Field::get(q).unwrap();
        let counter = Counter::new(q).unwrap();
        for size in 1..=3 {
            for mu in Partition::all(size) {
                let poly = p_mu_at_q(&mu, f).unwrap();
                for lambda in f.units() {
                    let b = ClassLabel::jordan(lambda, mu.clone(), f).unwrap();
                    for n in 1..=nmax {
                        for g in enumerate_classes(n, f) {
                            let xs: Vec<i128> = (1..=mu.part(0))
                                .map(|t| counter.btil_fr(&ClassLabel::jordan(lambda, Partition::single_row(t), f).unwrap(), &g).unwrap())
                                .collect();
                            assert_eq!(poly.eval(&xs).unwrap(), counter.btil_fr(&b, &g).unwrap(), "q={q} μ={mu} g={}", g.to_text(f));
                        }
                    }
                }
            }
        }
    }
}

/// Every nonzero `B_μ`-stable subspace contributes exactly one entry.
#[test]
fn multiset_size_counts_stable_subspaces() {
    for q in [2u32, 3] {
        let f = Field::get(q).unwrap();
        for size in 1..=3 {
            for mu in Partition::all(size) {
                let spec = JordanSpec::new(f.from_int(1), mu.clone()).unwrap();
                let nil = spec.nilpotent(f).unwrap();
                let stable = common::all_subspaces(size, f)
                    .into_iter()
                    .filter(|basis| {
                        !basis.is_empty()
                            && basis.iter().all(|v| {
                                let w = MatFq::vec_mul(v, &nil, f);
                                let mut rows = basis.clone();
                                rows.push(w);
                                MatFq::from_rows(&rows).unwrap().rank(f) == basis.len()
                            })
                    })
                    .count() as u64;
                let total: u64 = nmultiset(&spec, f).unwrap().values().sum();
                assert_eq!(total, stable, "q={q} μ={mu}");
            }
        }
    }
}

#[test]
fn multiplicities_are_polynomial_in_q() {
    let m = multiplicity_fit(&p("2,1"), &[2, 3, 4, 5], &[7]).unwrap();
    let total: Vec<num_bigint::BigInt> = [2u32, 3, 7].iter().map(|&q| m.values().map(|c| c.eval(q)).sum()).collect();
    // for T of type (2,1): q+1 lines in ker T, q+1 planes through im T, and V
    assert_eq!(total, [7, 9, 17].map(num_bigint::BigInt::from).to_vec());
}

#[test]
fn extension_lemma_holds_on_random_instances() {
    for q in [2u32, 3, 4] {
        let rep = extension_property(q, 300, 6, 17).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}

proptest! {
    #[test]
    fn nilpotent_type_is_a_conjugacy_invariant(qi in 0usize..3, size in 1usize..=5, pick in any::<usize>(), seed in any::<u64>()) {
        let q = [2u32, 3, 5][qi];
        let f = Field::get(q).unwrap();
        let parts = Partition::all(size);
        let mu = parts[pick % parts.len()].clone();
        let nil = JordanSpec::new(f.from_int(1), mu.clone()).unwrap().nilpotent(f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = MatFq::random_invertible(size, f, &mut rng);
        let conj = s.mul(&nil, f).mul(&s.inverse(f).unwrap(), f);
        prop_assert_eq!(nilpotent_partition(&conj, f).unwrap(), mu);
    }
}
