use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scfq::matspace::Partition;
use scfq::symcheck::{
    expectation_fr, sigma_til, sigma_til_brute, sigma_til_fr, sigma_til_fr_brute, CycleType, Perm, SymTable,
};

#[test]
fn class_sizes_sum_to_the_group_order() {
    for n in 0..=8 {
        let total: BigRational =
            Partition::all(n).into_iter().map(|p| BigRational::new(BigInt::one(), CycleType(p).z())).sum();
        assert!(total.is_one(), "n={n}");
    }
}

#[test]
fn character_table_is_orthonormal() {
    for m in 1..=6 {
        let t = SymTable::new(m);
        let z: Vec<BigInt> = t.partitions.iter().map(|p| CycleType(p.clone()).z()).collect();
        for a in &t.values {
            for b in &t.values {
                let ip: BigRational = a
                    .iter()
                    .zip(b)
                    .zip(&z)
                    .map(|((&x, &y), z)| BigRational::new(BigInt::from(x * y), z.clone()))
                    .sum();
                let want = if a == b { BigRational::one() } else { BigRational::default() };
                assert_eq!(ip, want, "m={m}");
            }
        }
    }
}

#[test]
fn full_rank_expectation_is_one() {
    for m in 0..=4 {
        for n in m..=8 {
            for alpha in Partition::all(m) {
                assert!(expectation_fr(&alpha, n).is_one(), "α={alpha} N={n}");
            }
        }
    }
}

proptest! {
    #[test]
    fn counts_on_arbitrary_permutations(m in 0usize..=3, n in 0usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shuffle = |k: usize, rng: &mut ChaCha8Rng| {
            let mut v: Vec<usize> = (0..k).collect();
            v.shuffle(rng);
            Perm::new(v).unwrap()
        };
        let (sigma, g) = (shuffle(m, &mut rng), shuffle(n, &mut rng));
        prop_assert_eq!(sigma_til_brute(&sigma, &g), sigma_til(&sigma, &g));
        prop_assert_eq!(BigInt::from(sigma_til_fr_brute(&sigma, &g)), sigma_til_fr(&sigma, &g));
    }
}
