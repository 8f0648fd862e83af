use lca_core::cohomology::{circle, d_al, delta, delta_ao, nr_bracket, xi};
use lca_core::representations::adjoint_rep;
use lca_core::{
    builtin, AvgRepTriple, Cochain, CochainPair, ConformalMap, LieConformalAlgebra, ModElem, Poly, Rational,
};
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Raw values as `c0 + c1 D + c2 L1 + ...` per coordinate, then
/// skew-symmetrized over the algebra basis.
fn cochain(a: LieConformalAlgebra, p: usize) -> impl Strategy<Value = Cochain> {
    let n = a.rank();
    let slots = n.pow(p as u32) * n * (p + 1);
    prop::collection::vec(-2i64..=2, slots).prop_map(move |cs| {
        let vars: Vec<Poly> =
            std::iter::once(Poly::one()).chain(std::iter::once(Poly::d())).chain((1..p).map(Poly::lambda)).collect();
        let mut it = cs.into_iter();
        let mut values = Vec::new();
        for _ in 0..n.pow(p as u32) {
            let coords = (0..n)
                .map(|_| {
                    let mut poly = Poly::zero();
                    for v in &vars {
                        poly += &v.scale(&q(it.next().unwrap()));
                    }
                    poly
                })
                .collect();
            values.push(ModElem::from_coords(coords));
        }
        let raw = Cochain::new(p, n, n, values).unwrap();
        Cochain::skew_symmetrize(&raw, &a.basis).unwrap()
    })
}

fn sl2() -> LieConformalAlgebra {
    builtin::cur_sl2()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn delta_squares_to_zero(f in cochain(sl2(), 1), g in cochain(sl2(), 2)) {
        let rep = adjoint_rep(&sl2());
        prop_assert!(delta(&rep, &delta(&rep, &f).unwrap()).unwrap().is_zero());
        prop_assert!(delta(&rep, &delta(&rep, &g).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn delta_output_is_skew(f in cochain(sl2(), 2)) {
        let a = sl2();
        let df = delta(&adjoint_rep(&a), &f).unwrap();
        prop_assert!(df.check_cochain(&a.basis).unwrap().passed());
    }

    #[test]
    fn symmetrizing_is_idempotent(f in cochain(sl2(), 2)) {
        prop_assert_eq!(Cochain::skew_symmetrize(&f, &sl2().basis).unwrap(), f);
    }

    #[test]
    fn d_al_squares_to_zero_for_the_identity(f in cochain(sl2(), 2), g in cochain(sl2(), 1)) {
        let t = AvgRepTriple::adjoint(&sl2(), &ConformalMap::identity(3)).unwrap();
        let pair = CochainPair::new(f, g).unwrap();
        prop_assert!(d_al(&t, &d_al(&t, &pair).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn averaging_differential_squares_to_zero(g in cochain(sl2(), 2), c in 1i64..4) {
        let t = AvgRepTriple::adjoint(&sl2(), &ConformalMap::scalar(3, q(c))).unwrap();
        prop_assert!(delta_ao(&t, &delta_ao(&t, &g).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn nr_bracket_graded_antisymmetry(f in cochain(sl2(), 2), g in cochain(sl2(), 2), h in cochain(sl2(), 1)) {
        // (p-1)(q-1) is odd for (2, 2), even for (2, 1)
        prop_assert_eq!(nr_bracket(&f, &g).unwrap(), nr_bracket(&g, &f).unwrap());
        prop_assert_eq!(nr_bracket(&f, &h).unwrap(), nr_bracket(&h, &f).unwrap().neg());
    }
}

#[test]
fn identity_is_the_unit_of_the_circle_product() {
    let a = sl2();
    let eta = Cochain::bracket(&a);
    assert_eq!(circle(&eta, &Cochain::identity(3)).unwrap(), eta.scale(&q(2)));
    assert_eq!(circle(&Cochain::identity(3), &eta).unwrap(), eta);
}

#[test]
fn xi_vanishes_for_the_identity() {
    let a = builtin::virasoro::<Rational>();
    let t = AvgRepTriple::adjoint(&a, &ConformalMap::identity(1)).unwrap();
    let eta = Cochain::bracket(&a);
    assert!(xi(&t, &eta).unwrap().is_zero());
}
