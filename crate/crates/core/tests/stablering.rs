use num_complex::Complex64;
use scfq::matspace::Partition;
use scfq::stablering::{Basis, BasisLabel, MuVec, StableFunction, StableRing};

fn all_mu(ring: &StableRing, m: usize) -> Vec<MuVec> {
    ring.identification(m).unwrap().by_row.clone()
}

#[test]
fn stable_irreducibles_are_orthonormal() {
    for (q, n) in [(2u32, 4usize), (3, 4)] {
        let ring = StableRing::with_defaults(q).unwrap();
        for m in 0..=2 {
            let mus = all_mu(&ring, m);
            let chars: Vec<_> = mus.iter().map(|mu| ring.stable_irr_char(mu, n).unwrap()).collect();
            for (i, a) in chars.iter().enumerate() {
                for (j, b) in chars.iter().enumerate() {
                    let ip = ring.inner(a, b).unwrap();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - Complex64::new(want, 0.0)).norm() < 1e-6, "q={q} {} {}", mus[i], mus[j]);
                }
            }
        }
    }
}

#[test]
fn change_of_basis_round_trips() {
    for q in [2u32, 3] {
        let ring = StableRing::with_defaults(q).unwrap();
        let n = 4;
        for basis in Basis::ALL {
            let mut labels = Vec::new();
            for m in 0..=2 {
                match basis {
                    Basis::R => labels.extend(ring.classes(m).unwrap().labels.iter().cloned().map(BasisLabel::R)),
                    Basis::Rfr => labels.extend(ring.classes(m).unwrap().labels.iter().cloned().map(BasisLabel::Rfr)),
                    Basis::P => labels.extend((0..ring.table(m).unwrap().len()).map(|row| BasisLabel::P { m, row })),
                    Basis::I => labels.extend(all_mu(&ring, m).into_iter().map(BasisLabel::I)),
                }
            }
            for label in labels {
                let f = StableFunction::single(label.clone());
                let values = ring.evaluate(&f, n).unwrap();
                for target in Basis::ALL {
                    let g = ring.change_basis(&f, target).unwrap();
                    assert!(ring.evaluate(&g, n).unwrap().max_diff(&values) < 1e-6, "q={q} {label:?} -> {target}");
                    let back = ring.change_basis(&g, basis).unwrap();
                    assert!(back.max_diff(&f) < 1e-6, "q={q} {label:?} via {target}");
                }
            }
        }
    }
}

#[test]
fn products_stay_in_the_filtration() {
    let ring = StableRing::with_defaults(3).unwrap();
    let n = 4;
    let level1: Vec<BasisLabel> = (0..ring.table(1).unwrap().len()).map(|row| BasisLabel::P { m: 1, row }).collect();
    let mut more: Vec<BasisLabel> = all_mu(&ring, 1).into_iter().map(BasisLabel::I).collect();
    more.extend(ring.classes(1).unwrap().labels.iter().cloned().map(BasisLabel::Rfr));
    for a in level1.iter().chain(&more) {
        for b in level1.iter().chain(&more) {
            if a.basis() != b.basis() {
                continue;
            }
            let (fa, fb) = (StableFunction::single(a.clone()), StableFunction::single(b.clone()));
            let prod = ring.multiply(&fa, &fb).unwrap();
            assert!(prod.level() <= 2);
            let mut pointwise = ring.evaluate(&fa, n).unwrap();
            let eb = ring.evaluate(&fb, n).unwrap();
            pointwise.values.iter_mut().zip(&eb.values).for_each(|(x, y)| *x *= y);
            assert!(ring.evaluate(&prod, n).unwrap().max_diff(&pointwise) < 1e-6, "{a:?} * {b:?}");
        }
    }
}

#[test]
fn expectations_of_stable_functions() {
    let ring = StableRing::with_defaults(2).unwrap();
    for n in 2..=4 {
        for m in 0..=1 {
            for mu in all_mu(&ring, m) {
                let e = ring.expectation(&ring.stable_irr_char(&mu, n).unwrap()).unwrap();
                let want = if m == 0 { 1.0 } else { 0.0 };
                assert!((e - Complex64::new(want, 0.0)).norm() < 1e-9);
            }
        }
    }
    let two = MuVec::unipotent(Partition::parse("2").unwrap());
    assert!(ring.stable_irr_char(&two, 3).is_err(), "(2) needs N >= 4");
}

#[test]
fn dimension_polynomial_predicts_float_values() {
    for q in [2u32, 3] {
        let ring = StableRing::with_defaults(q).unwrap();
        for m in 0..=2 {
            for mu in all_mu(&ring, m) {
                let h = ring.dim_polynomial(&mu, 1).unwrap();
                assert_eq!(h.len(), m + 1, "degree equals the norm");
                for n in mu.min_n().max(2 * m).max(1)..=4 {
                    let chi = ring.stable_irr_char(&mu, n).unwrap();
                    let at_id = chi.values[ring.classes(n).unwrap().identity_index()].re;
                    let x = num_rational::BigRational::from_integer(num_bigint::BigInt::from(q).pow(n as u32));
                    let v = scfq::exact::eval(&h, &x);
                    let v: f64 = v.to_string().parse().unwrap_or_else(|_| {
                        panic!("dimension {v} is not an integer")
                    });
                    assert!((v - at_id).abs() < 1e-6, "q={q} {mu} N={n}");
                }
            }
        }
    }
}
