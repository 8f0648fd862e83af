//! Builtin bundles. `lca builtin NAME` prints them; the shipped corpus
//! directory holds their canonical text.

use indexmap::IndexMap;
use lca_core::builtin as alg;
use lca_core::cohomology::delta;
use lca_core::conformal::direct_sum_example;
use lca_core::extensions::build_extension;
use lca_core::homotopy2::{ideal_crossed_module, identity_crossed_datum};
use lca_core::representations::{adjoint_rep, tensor_square};
use lca_core::{
    AutPair, AveragingAlgebra, AvgRepTriple, Cochain, ConformalMap, HomotopyAvg, LambdaTable, LieConformalAlgebra,
    ModElem, NonAbCocycle, Poly, Rational, TwoTermLinf, TwoTermMorphism,
};

use crate::bundle::{Bundle, RepData, TwoTermData};

pub const BUILTINS: &[&str] = &[
    "virasoro",
    "cur_sl2",
    "abelian_2",
    "vir_sum2",
    "vir_sum3",
    "tensor2",
    "broken_skew",
    "broken_jacobi",
    "cohom_vir",
    "cohom_sl2",
    "crossed_id_ad",
    "crossed_kernel",
    "skeletal_sl2",
    "semidirect_vir",
    "semidirect_sl2",
    "ext_vir",
    "ext_shift",
];

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn maps(entries: &[(&str, ConformalMap)]) -> IndexMap<String, ConformalMap> {
    entries.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn plain(a: LieConformalAlgebra, m: IndexMap<String, ConformalMap>) -> Bundle {
    Bundle { algebra: Some(a), maps: m, ..Bundle::default() }
}

/// Deterministic skew cochain: raw values with small integer coefficients
/// on the monomials of degree at most 3 in `d, l1..l_{p-1}`, then
/// symmetrized.
pub fn sample_cochain(a: &LieConformalAlgebra, p: usize, seed: usize) -> Cochain {
    let n = a.rank();
    let vars: Vec<Poly> = std::iter::once(Poly::d()).chain((1..p).map(Poly::lambda)).collect();
    let mut monomials = vec![Poly::one()];
    let mut layer = vec![(Poly::one(), 0)];
    for _ in 0..3 {
        let mut next = Vec::new();
        for (m, first) in &layer {
            for (k, v) in vars.iter().enumerate().skip(*first) {
                next.push((m * v, k));
            }
        }
        monomials.extend(next.iter().map(|(m, _)| m.clone()));
        layer = next;
    }
    let coeff = |t: &[usize], k: usize, slot: usize| -> i64 {
        let h = [seed, k, slot]
            .iter()
            .chain(t)
            .fold(0x9e37_79b9_7f4a_7c15_u64, |h, &x| (h ^ x as u64).wrapping_mul(0x0100_0000_01b3).rotate_left(29));
        ((h >> 7) % 5) as i64 - 2
    };
    let raw = Cochain::from_fn(p, n, n, |t| {
        let coords = (0..n)
            .map(|k| {
                let mut poly = Poly::zero();
                for (slot, m) in monomials.iter().enumerate() {
                    poly += &m.scale(&q(coeff(t, k, slot)));
                }
                poly
            })
            .collect();
        ModElem::from_coords(coords)
    })
    .expect("sample shape");
    Cochain::skew_symmetrize(&raw, &a.basis).expect("sample degree in range")
}

fn cohom_bundle(a: LieConformalAlgebra) -> Bundle {
    let n = a.rank();
    let mut cochains = IndexMap::new();
    for (name, p, seed) in [("f1", 1, 1), ("f2", 2, 2), ("f3", 3, 3), ("g1", 1, 4), ("g2", 2, 5)] {
        cochains.insert(name.to_string(), sample_cochain(&a, p, seed));
    }
    Bundle {
        algebra: Some(a),
        maps: maps(&[("Id", ConformalMap::identity(n)), ("Two", ConformalMap::scalar(n, q(2)))]),
        cochains,
        ..Bundle::default()
    }
}

fn weight_rep(a: i64) -> LambdaTable {
    LambdaTable::new(1, 1, 1, vec![ModElem::from_coords(vec![&Poly::d() + &Poly::lambda(1).scale(&q(a))])])
        .expect("rank one table")
}

fn avg(a: LieConformalAlgebra, p: ConformalMap) -> AveragingAlgebra {
    AveragingAlgebra::new(a, p).expect("square operator")
}

/// Vir acting on `C[∂]A` by `(∂ + aλ)A`.
pub fn semidirect_vir(a: i64, scale: i64) -> NonAbCocycle {
    let s = ConformalMap::scalar(1, q(scale));
    NonAbCocycle::semidirect(avg(alg::virasoro(), s.clone()), avg(alg::abelian(1), s), weight_rep(a))
        .expect("semidirect shapes")
}

/// `Cur(sl2)` acting on a copy of itself by the adjoint action.
pub fn semidirect_sl2() -> NonAbCocycle {
    let base = alg::cur_sl2::<Rational>();
    let mut fiber = base.clone();
    fiber.name = "Cur_sl2'".into();
    fiber.basis = base.basis.iter().map(|b| format!("{b}'")).collect();
    let rho = base.table.clone();
    NonAbCocycle::semidirect(avg(base, ConformalMap::identity(3)), avg(fiber, ConformalMap::identity(3)), rho)
        .expect("semidirect shapes")
}

fn cocycle_bundle(c: NonAbCocycle) -> Bundle {
    Bundle {
        algebra: Some(c.base.algebra.clone()),
        operator: Some(c.base.operator.clone()),
        cocycle: Some(c),
        ..Bundle::default()
    }
}

pub fn builtin(name: &str) -> Option<Bundle> {
    let vir = alg::virasoro::<Rational>;
    Some(match name {
        "virasoro" => plain(
            vir(),
            maps(&[
                ("Id", ConformalMap::identity(1)),
                ("Zero", ConformalMap::zero(1, 1)),
                ("Two", ConformalMap::scalar(1, q(2))),
                ("Half", ConformalMap::scalar(1, Rational::new(1.into(), 2.into()))),
                ("D", ConformalMap::new(1, 1, vec![Poly::d()]).expect("1x1")),
            ]),
        ),
        "cur_sl2" => {
            let nil = ConformalMap::from_fn(3, 3, |r, c| if (r, c) == (0, 1) { Poly::one() } else { Poly::zero() });
            plain(alg::cur_sl2(), maps(&[("Id", ConformalMap::identity(3)), ("Nil", nil)]))
        }
        "abelian_2" => {
            let d = ConformalMap::from_fn(2, 2, |r, c| if r == c { Poly::d() } else { Poly::zero() });
            plain(alg::abelian(2), maps(&[("Id", ConformalMap::identity(2)), ("D", d)]))
        }
        "vir_sum2" | "vir_sum3" => {
            let n = if name == "vir_sum2" { 2 } else { 3 };
            let (a, ops) = direct_sum_example(&vir(), n).ok()?;
            let mut m = vec![("Id".to_string(), ConformalMap::identity(n)), ("P".to_string(), ops[0].clone())];
            for (k, p) in ops[1..].iter().enumerate() {
                m.push((format!("P{}", k + 2), p.clone()));
            }
            let rank = a.rank();
            let mut bad = ConformalMap::identity(rank).entries().to_vec();
            bad[1] = Poly::one();
            m.push(("NotAveraging".into(), ConformalMap::new(rank, rank, bad).ok()?));
            plain(a, m.into_iter().collect())
        }
        "tensor2" => {
            let t = AvgRepTriple::adjoint(&vir(), &ConformalMap::identity(1)).ok()?;
            let t2 = tensor_square(&t);
            Bundle {
                algebra: Some(vir()),
                operator: Some(t2.operator.clone()),
                rep: Some(RepData {
                    rep: t2.rep.clone(),
                    phi: Some(t2.phi.clone()),
                    operator: Some(t2.operator.clone()),
                }),
                ..Bundle::default()
            }
        }
        "broken_skew" => plain(alg::broken_skew(), IndexMap::new()),
        "broken_jacobi" => plain(alg::broken_jacobi(), IndexMap::new()),
        "cohom_vir" => cohom_bundle(vir()),
        "cohom_sl2" => cohom_bundle(alg::cur_sl2()),
        "crossed_id_ad" => {
            let (t, p) = identity_crossed_datum(&vir(), &ConformalMap::identity(1)).ok()?;
            let morphism = TwoTermMorphism::identity(&t);
            Bundle {
                two_term: Some(TwoTermData { structure: t, avg: Some(p), morphism: Some(morphism) }),
                ..Bundle::default()
            }
        }
        "crossed_kernel" => {
            let (a, _) = direct_sum_example(&vir(), 2).ok()?;
            let c = ideal_crossed_module(&a, &ConformalMap::identity(2), &[1]).ok()?;
            Bundle { crossed: Some(c), ..Bundle::default() }
        }
        "skeletal_sl2" => {
            let a = alg::cur_sl2::<Rational>();
            let f = sample_cochain(&a, 2, 9);
            let l3 = delta(&adjoint_rep(&a), &f).ok()?;
            let t = TwoTermLinf::new(
                a.basis.clone(),
                a.basis.iter().map(|b| format!("{b}'")).collect(),
                ConformalMap::zero(3, 3),
                a.table.clone(),
                a.table.clone(),
                l3,
            )
            .ok()?;
            let p = HomotopyAvg::strict(ConformalMap::identity(3), ConformalMap::identity(3));
            Bundle { two_term: Some(TwoTermData { structure: t, avg: Some(p), morphism: None }), ..Bundle::default() }
        }
        "semidirect_vir" => cocycle_bundle(semidirect_vir(0, 1)),
        "semidirect_sl2" => cocycle_bundle(semidirect_sl2()),
        "ext_vir" => {
            let c = semidirect_vir(0, 1);
            let e = build_extension(&c).ok()?;
            let gamma = ConformalMap::direct_sum(&ConformalMap::identity(1), &ConformalMap::scalar(1, q(-1)));
            Bundle {
                maps: maps(&[
                    ("Gamma", gamma),
                    ("Minus", ConformalMap::scalar(1, q(-1))),
                    ("Id", ConformalMap::identity(1)),
                ]),
                extension: Some(e),
                aut_pair: Some(AutPair { alpha: ConformalMap::identity(1), beta: ConformalMap::identity(1) }),
                ..cocycle_bundle(c)
            }
        }
        "ext_shift" => {
            let c = semidirect_vir(0, 1);
            let e = build_extension(&c).ok()?;
            let tau = ConformalMap::new(1, 1, vec![Poly::one()]).ok()?;
            let s2 = e.section.sub(&e.inclusion.compose(&tau).ok()?).ok()?;
            let shifted = e.with_section(s2).ok()?;
            Bundle { maps: maps(&[("Tau", tau)]), extension: Some(shifted), ..cocycle_bundle(c) }
        }
        _ => return None,
    })
}
