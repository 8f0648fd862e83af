use lca_cli::expr::{elem_to_string, elem_to_strings, parse_elem, parse_poly, poly_to_string};
use lca_core::{ModElem, Poly, Rational};
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-9i64..=9, 1i64..=4, 0u32..3, 0u32..3, 0u32..2), 0..5).prop_map(|terms| {
        let mut p = Poly::zero();
        for (n, d, a, b, c) in terms {
            let m = &(&Poly::d().pow(a) * &Poly::lambda(1).pow(b)) * &Poly::lambda(2).pow(c);
            p += &m.scale(&Rational::new(n.into(), d.into()));
        }
        p
    })
}

fn basis() -> Vec<String> {
    vec!["L".into(), "E'".into(), "H_2".into()]
}

proptest! {
    #[test]
    fn poly_round_trip(p in poly()) {
        let text = poly_to_string(&p);
        prop_assert_eq!(parse_poly(&text).unwrap(), p, "{}", text);
    }

    #[test]
    fn elem_round_trip(coords in prop::collection::vec(poly(), 3)) {
        let v = ModElem::from_coords(coords);
        let b = basis();
        let mut sum = ModElem::zero(3);
        for s in elem_to_strings(&v, &b) {
            sum += &parse_elem(&s, &b).unwrap();
        }
        prop_assert_eq!(&sum, &v);
        prop_assert_eq!(parse_elem(&elem_to_string(&v, &b), &b).unwrap(), v);
    }

    #[test]
    fn printing_is_canonical(p in poly(), q in poly()) {
        // equal polynomials print equally however they were built
        let a = &(&p + &q) - &q;
        prop_assert_eq!(poly_to_string(&a), poly_to_string(&p));
    }
}
