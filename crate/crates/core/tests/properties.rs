use derivring::derivation::{extend_m2, inner_apply, leibniz_check, EntrywiseDerivation};
use derivring::jordan::{jordan_inner_apply_full, pairs_to_commutator, JordanPairDerivation};
use derivring::sample::{seeded, Sampler};
use derivring::two_local::{reconstruct_abar, TwoLocalOracle, WitnessFamily};
use derivring::{BaseDerivation, Elem, Matrix, Ring, SymmetricMatrix};
use proptest::prelude::*;

fn rings() -> impl Strategy<Value = Ring> {
    prop_oneof![
        Just(Ring::zmod(3).unwrap()),
        Just(Ring::zmod(5).unwrap()),
        Just(Ring::zmod(9).unwrap()),
        Just(Ring::zmod(1_000_003).unwrap()),
        Just(Ring::poly(5).unwrap()),
        Just(Ring::poly(9).unwrap()),
    ]
}

fn elem(ring: Ring) -> BoxedStrategy<Elem> {
    let m = ring.modulus();
    if ring.is_poly() {
        prop::collection::vec(0..m, 0..6)
            .prop_map(move |c| ring.canonicalize(Elem::Poly(c)))
            .boxed()
    } else {
        (0..m).prop_map(Elem::Residue).boxed()
    }
}

fn ring_and_elems(k: usize) -> impl Strategy<Value = (Ring, Vec<Elem>)> {
    rings().prop_flat_map(move |r| (Just(r), prop::collection::vec(elem(r), k)))
}

/// A ring, a dimension and a seed for drawing matrices.
fn matrix_setup() -> impl Strategy<Value = (Ring, usize, u64)> {
    (rings(), 1usize..=4, any::<u64>())
}

proptest! {
    #[test]
    fn ring_axioms((r, v) in ring_and_elems(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(r.add(a, b), r.add(b, a));
        prop_assert_eq!(r.mul(a, b), r.mul(b, a));
        prop_assert_eq!(r.add(&r.add(a, b), c), r.add(a, &r.add(b, c)));
        prop_assert_eq!(r.mul(&r.mul(a, b), c), r.mul(a, &r.mul(b, c)));
        prop_assert_eq!(r.mul(a, &r.add(b, c)), r.add(&r.mul(a, b), &r.mul(a, c)));
        prop_assert_eq!(r.mul(a, &r.one()), a.clone());
        prop_assert!(r.is_zero(&r.add(a, &r.neg(a))));
        prop_assert_eq!(r.sub(a, b), r.add(a, &r.neg(b)));
    }

    #[test]
    fn half_doubles_back((r, v) in ring_and_elems(1)) {
        let a = &v[0];
        let h = r.half(a);
        prop_assert_eq!(r.add(&h, &h), a.clone());
        prop_assert_eq!(r.mul(&r.half_unit(), &r.from_i64(2)), r.one());
    }

    #[test]
    fn results_are_canonical((r, v) in ring_and_elems(2)) {
        for e in [r.add(&v[0], &v[1]), r.mul(&v[0], &v[1]), r.neg(&v[0]), r.half(&v[1])] {
            prop_assert!(r.check(&e).is_ok());
            prop_assert_eq!(r.canonicalize(e.clone()), e);
        }
    }

    #[test]
    fn canonicalization_is_idempotent(m in prop::sample::select(vec![3u64, 5, 7, 9, 11]), raw in prop::collection::vec(any::<u32>(), 0..8)) {
        let r = Ring::poly(m).unwrap();
        let once = r.canonicalize(Elem::Poly(raw.into_iter().map(u64::from).collect()));
        prop_assert_eq!(r.canonicalize(once.clone()), once);
    }

    #[test]
    fn formal_derivative_is_a_derivation((r, v) in rings()
        .prop_filter("polynomial rings", |r| r.is_poly())
        .prop_flat_map(|r| (Just(r), prop::collection::vec(elem(r), 2))))
    {
        let d = |e: &Elem| r.formal_derivative(e);
        let (p, q) = (&v[0], &v[1]);
        prop_assert_eq!(d(&r.mul(p, q)), r.add(&r.mul(&d(p), q), &r.mul(p, &d(q))));
        prop_assert_eq!(d(&r.add(p, q)), r.add(&d(p), &d(q)));
    }

    #[test]
    fn inner_derivations_satisfy_leibniz((r, n, seed) in matrix_setup()) {
        let s = Sampler::new(r, 3);
        let mut rng = seeded(seed);
        let a = s.matrix(&mut rng, n);
        let pairs: Vec<_> = (0..5).map(|_| (s.matrix(&mut rng, n), s.matrix(&mut rng, n))).collect();
        let d = |x: &Matrix| inner_apply(&a, x).unwrap();
        prop_assert!(leibniz_check(&d, &pairs).unwrap().holds());
    }

    #[test]
    fn central_shift_does_not_change_the_action((r, n, seed) in matrix_setup()) {
        let s = Sampler::new(r, 3);
        let mut rng = seeded(seed);
        let a = s.matrix(&mut rng, n);
        let shifted = &a + &s.central(&mut rng, n);
        for i in 1..=n {
            for j in 1..=n {
                let e = Matrix::unit(r, n, i, j).unwrap();
                prop_assert_eq!(inner_apply(&a, &e).unwrap(), inner_apply(&shifted, &e).unwrap());
            }
        }
    }

    #[test]
    fn jordan_products_stay_symmetric((r, n, seed) in matrix_setup()) {
        let s = Sampler::new(r, 3);
        let mut rng = seeded(seed);
        let (x, y) = (s.symmetric(&mut rng, n), s.symmetric(&mut rng, n));
        prop_assert!(x.jordan_mul(&y).unwrap().is_symmetric());
        let c = x.commutator(&y).unwrap();
        prop_assert!(c.is_skew() && c.has_zero_diagonal());
    }

    #[test]
    fn jordan_action_on_full_matrices_is_inner((r, n, seed) in matrix_setup()) {
        let s = Sampler::new(r, 2);
        let mut rng = seeded(seed);
        let pd = JordanPairDerivation::random(&s, &mut rng, n, 3);
        let c = pairs_to_commutator(&pd);
        let x = s.matrix(&mut rng, n);
        prop_assert_eq!(jordan_inner_apply_full(&pd, &x).unwrap(), c.commutator(&x).unwrap());
    }

    #[test]
    fn reconstruction_is_idempotent((r, n, seed) in (rings(), 2usize..=4, any::<u64>())) {
        let s = Sampler::new(r, 3);
        let abar = s.matrix(&mut seeded(seed), n);
        let wf = WitnessFamily::constant(&abar).validate(&TwoLocalOracle::from_inner(abar.clone())).unwrap();
        prop_assert_eq!(reconstruct_abar(&wf).unwrap().abar, abar);
    }

    #[test]
    fn matrix_json_round_trip((r, n, seed) in matrix_setup()) {
        let m = Sampler::new(r, 4).matrix(&mut seeded(seed), n);
        let text = m.to_json();
        let back = Matrix::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back, m);
    }

    #[test]
    fn extend_m2_matches_the_block_formula(seed in any::<u64>()) {
        let r = Ring::poly(5).unwrap();
        let s = Sampler::new(r, 3);
        let x = s.matrix(&mut seeded(seed), 2);
        let got = extend_m2(BaseDerivation::FormalDerivative, r).unwrap().apply(&x).unwrap();
        let rows = x.rows();
        let d = |e: &Elem| r.formal_derivative(e);
        let expected = Matrix::from_rows(r, vec![
            vec![d(&rows[0][0]), r.add(&d(&rows[0][1]), &rows[0][1])],
            vec![r.sub(&d(&rows[1][0]), &rows[1][0]), d(&rows[1][1])],
        ]).unwrap();
        prop_assert_eq!(got, expected);
    }
}

#[test]
fn matrix_unit_algebra_exhaustive() {
    let r = Ring::zmod(7).unwrap();
    for n in 1..=5 {
        for i in 1..=n {
            for j in 1..=n {
                let eij = Matrix::unit(r, n, i, j).unwrap();
                for k in 1..=n {
                    for l in 1..=n {
                        let ekl = Matrix::unit(r, n, k, l).unwrap();
                        let expected = if j == k { Matrix::unit(r, n, i, l).unwrap() } else { Matrix::zeros(r, n) };
                        assert_eq!(&eij * &ekl, expected, "e{i}{j} e{k}{l} in M_{n}");
                    }
                }
            }
        }
    }
}

#[test]
fn entrywise_derivative_satisfies_leibniz_on_500_pairs() {
    let r = Ring::poly(5).unwrap();
    let s = Sampler::new(r, 3);
    let mut rng = seeded(500);
    let pairs: Vec<_> = (0..500).map(|_| (s.matrix(&mut rng, 3), s.matrix(&mut rng, 3))).collect();
    let d = EntrywiseDerivation::new(BaseDerivation::FormalDerivative, r, 3).unwrap();
    let report = leibniz_check(&d, &pairs).unwrap();
    assert!(report.holds());
    assert_eq!(report.checked, 500);
}

#[test]
fn jordan_leibniz_for_commutator_maps() {
    let r = Ring::zmod(9).unwrap();
    let s = Sampler::new(r, 0);
    let mut rng = seeded(1000);
    for _ in 0..1000 {
        let a = s.skew(&mut rng, 3);
        let (x, y): (SymmetricMatrix, SymmetricMatrix) = (s.symmetric(&mut rng, 3), s.symmetric(&mut rng, 3));
        let d = |m: &Matrix| a.commutator(m).unwrap();
        let (x, y) = (x.as_matrix(), y.as_matrix());
        let lhs = d(&x.jordan_mul(y).unwrap());
        let rhs = &d(x).jordan_mul(y).unwrap() + &x.jordan_mul(&d(y)).unwrap();
        assert_eq!(lhs, rhs);
    }
}
