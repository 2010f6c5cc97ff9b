use nalgebra::DVector;
use proptest::prelude::*;

use toricweyl::geometry::{interior_margin, legendre_dual_point};
use toricweyl::groups;
use toricweyl::polytope::{affine_symmetries, momentum_polytope};
use toricweyl::scalar::{int, rat, LogWeight};
use toricweyl::torus::{NormalizerModel, SemidirectElement, TorusElement};
use toricweyl::weyl::{enumerate_weyl, probability_residual, DEFAULT_LIMIT_M};
use toricweyl::{Backend, FiniteExpFam};

fn families() -> Vec<FiniteExpFam> {
    vec![
        FiniteExpFam::categorical(3).unwrap(),
        FiniteExpFam::categorical(4).unwrap(),
        FiniteExpFam::binomial(2).unwrap(),
        FiniteExpFam::binomial(4).unwrap(),
    ]
}

fn theta_strategy(n: usize) -> impl Strategy<Value = DVector<f64>> {
    prop::collection::vec(-3.0f64..3.0, n).prop_map(DVector::from_vec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn probabilities_are_normalized(idx in 0usize..4, seed in prop::collection::vec(-3.0f64..3.0, 3)) {
        let fam = &families()[idx];
        let theta = DVector::from_iterator(fam.n(), seed.into_iter().cycle().take(fam.n()));
        let p = fam.prob_vector(&theta).unwrap();
        prop_assert!((p.sum() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn fisher_is_symmetric_positive_definite(theta in theta_strategy(3)) {
        let fam = FiniteExpFam::categorical(4).unwrap();
        let h = fam.fisher(&theta).unwrap().entries;
        prop_assert_eq!(&h, &h.transpose());
        prop_assert!(h.clone().cholesky().is_some());
        let d = fam.fisher_def(&theta).unwrap().entries;
        prop_assert!((h - d).amax() < 1e-9);
    }

    #[test]
    fn christoffel_symmetric_in_first_pair(theta in theta_strategy(2), alpha in -2.0f64..2.0) {
        let fam = FiniteExpFam::categorical(3).unwrap();
        let g = fam.christoffel_alpha(&theta, alpha).unwrap();
        for i in 0..2 { for j in 0..2 { for k in 0..2 {
            prop_assert!((g.get(i, j, k) - g.get(j, i, k)).abs() < 1e-15);
        }}}
    }

    #[test]
    fn log_partition_is_shift_covariant(theta in theta_strategy(1), shift in -50.0f64..50.0) {
        // adding a constant to C shifts ψ by the same constant
        let c: Vec<LogWeight> = (0..3).map(|k| LogWeight::ln_binomial(2, k) ).collect();
        let shifted: Vec<LogWeight> = c.iter().map(|w| w + &LogWeight::from_rational(rat((shift * 8.0).round() as i64, 8))).collect();
        let f = || (0..3).map(|k| vec![int(k)]).collect::<Vec<_>>();
        let a = FiniteExpFam::new(vec!["a".into(), "b".into(), "c".into()], c, f(), Backend::Rational).unwrap();
        let b = FiniteExpFam::new(vec!["a".into(), "b".into(), "c".into()], shifted, f(), Backend::Rational).unwrap();
        let delta = (shift * 8.0).round() / 8.0;
        prop_assert!((b.log_partition(&theta).unwrap() - a.log_partition(&theta).unwrap() - delta).abs() < 1e-9);
    }

    #[test]
    fn witnesses_transport_probabilities(idx in 0usize..4, seed in prop::collection::vec(-2.0f64..2.0, 3)) {
        let fam = &families()[idx];
        let theta = DVector::from_iterator(fam.n(), seed.into_iter().cycle().take(fam.n()));
        let report = enumerate_weyl(fam, DEFAULT_LIMIT_M).unwrap();
        for el in &report.elements {
            prop_assert!(probability_residual(fam, el, std::slice::from_ref(&theta)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn cayley_rows_are_permutations(m in 3usize..=4) {
        let report = enumerate_weyl(&FiniteExpFam::categorical(m).unwrap(), DEFAULT_LIMIT_M).unwrap();
        let table = report.cayley.as_ref().unwrap();
        let order = report.order;
        for row in table {
            let mut r = row.clone();
            r.sort_unstable();
            prop_assert_eq!(r, (0..order).collect::<Vec<_>>());
        }
        for c in 0..order {
            let mut col: Vec<usize> = table.iter().map(|row| row[c]).collect();
            col.sort_unstable();
            prop_assert_eq!(col, (0..order).collect::<Vec<_>>());
        }
    }

    #[test]
    fn semidirect_inverse_and_associativity(
        nums in prop::collection::vec((0i64..60, 1i64..60), 6),
        ws in prop::collection::vec(0usize..6, 3),
    ) {
        let report = enumerate_weyl(&FiniteExpFam::categorical(3).unwrap(), DEFAULT_LIMIT_M).unwrap();
        let model = NormalizerModel::standard(&report).unwrap();
        let el = |k: usize| SemidirectElement {
            a: TorusElement::new(vec![rat(nums[2 * k].0, nums[2 * k].1), rat(nums[2 * k + 1].0, nums[2 * k + 1].1)]),
            w: ws[k],
        };
        let (x, y, z) = (el(0), el(1), el(2));
        prop_assert_eq!(model.mul(&model.mul(&x, &y), &z), model.mul(&x, &model.mul(&y, &z)));
        prop_assert_eq!(model.mul(&x, &model.inverse(&x)), model.identity());
    }

    #[test]
    fn rho_is_a_homomorphism(m in 3usize..=4) {
        let report = enumerate_weyl(&FiniteExpFam::categorical(m).unwrap(), DEFAULT_LIMIT_M).unwrap();
        let model = NormalizerModel::standard(&report).unwrap();
        for i in 0..report.order {
            for j in 0..report.order {
                let k = report.mul(i, j);
                prop_assert_eq!(toricweyl::linalg::matmul(model.rho(i), model.rho(j)), model.rho(k).clone());
            }
        }
    }

    #[test]
    fn log_weight_text_roundtrip(r in -50i64..50, d in 1i64..20, q in prop::collection::vec((-9i64..9, 1i64..5), 3)) {
        let primes = [2u64, 3, 5];
        let mut w = LogWeight::from_rational(rat(r, d));
        for (p, (a, b)) in primes.iter().zip(&q) {
            w = &w + &LogWeight::ln_int(*p).unwrap().scale(&rat(*a, *b));
        }
        let back: LogWeight = w.to_string().parse().unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn permutation_composition_is_associative(a in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
                                              b in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
                                              c in Just((0..5).collect::<Vec<usize>>()).prop_shuffle()) {
        let left = groups::compose(&groups::compose(&a, &b), &c);
        let right = groups::compose(&a, &groups::compose(&b, &c));
        prop_assert_eq!(left, right);
        prop_assert!(groups::is_identity(&groups::compose(&a, &groups::inverse(&a))));
    }

    #[test]
    fn mean_map_lands_inside_and_inverts(theta in theta_strategy(2)) {
        let fam = FiniteExpFam::categorical(3).unwrap();
        let eta = fam.mean_params(&theta).unwrap();
        prop_assert!(interior_margin(&fam, &eta).is_some());
        let dual = legendre_dual_point(&fam, &eta, 1e-12, 100).unwrap();
        prop_assert!((&dual.theta - &theta).amax() < 1e-7);
        let back = fam.mean_params(&dual.theta).unwrap();
        prop_assert!((back - eta).amax() < 1e-10);
    }

    #[test]
    fn polytope_symmetries_permute_vertices(idx in 0usize..4) {
        let fam = &families()[idx];
        let poly = momentum_polytope(fam);
        for s in affine_symmetries(&poly).unwrap() {
            let mut seen = s.vertex_perm.clone();
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..poly.vertices.len()).collect::<Vec<_>>());
            for (v, &w) in s.vertex_perm.iter().enumerate() {
                prop_assert!((s.apply(&poly.vertex(v)) - poly.vertex(w)).amax() < 1e-12);
            }
        }
    }
}
