//! Acceptance suite. Every criterion prints one PASS or FAIL line. A FAIL
//! that is a property of the mathematics rather than of the code prints its
//! diagnosis and pins the observed failure instead of panicking.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use lca_cli::corpus::BUILTINS;
use lca_cli::Bundle;
use lca_core::cohomology::{d_al, d_eta, delta, delta_ao, mc_check, nr_bracket, xi};
use lca_core::conformal::disjoint_basis;
use lca_core::extensions::{
    build_extension, check_equivalence, extract_cocycle, pi_restrict, tau_solve_abelian, transform_cocycle, wells_tau,
    wells_verify,
};
use lca_core::homotopy2::{
    cocycle_to_skeletal, crossed_to_strict, ideal_crossed_module, identity_crossed_datum, skeletal_to_cocycle,
    strict_direct_sum, strict_to_crossed,
};
use lca_core::representations::adjoint_rep;
use lca_core::{
    builtin, AutPair, AvgRepTriple, Cochain, CochainPair, ConformalMap, Extension, HomotopyAvg, LambdaTable, ModElem,
    NonAbCocycle, Poly, Rational, Report, TwoTermLinf, TwoTermMorphism,
};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

// Written to the process stderr directly so the verdict survives output
// capture and shows up in a plain `cargo test` log.
fn verdict(n: u32, title: &str, ok: bool, detail: &str) {
    let line = if ok { format!("PASS [{n:>2}] {title}\n") } else { format!("FAIL [{n:>2}] {title}: {detail}\n") };
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn load(name: &str) -> Bundle {
    Bundle::load(&corpus_path(&format!("{name}.json"))).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn failed(r: &Report) -> Vec<String> {
    r.failed().into_iter().map(String::from).collect()
}

/// Collects sub-results; the first failure text becomes the FAIL detail.
#[derive(Default)]
struct Tally {
    problems: Vec<String>,
}

impl Tally {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.problems.push(what.into());
        }
    }

    fn finish(self, n: u32, title: &str) {
        let detail = self.problems.join("; ");
        verdict(n, title, self.problems.is_empty(), &detail);
        assert!(self.problems.is_empty(), "criterion {n}: {detail}");
    }
}

const LCAS: &[&str] = &["virasoro", "cur_sl2", "abelian_2", "vir_sum2", "vir_sum3"];

#[test]
fn c01_axiom_bedrock() {
    let mut t = Tally::default();
    for name in LCAS {
        let a = load(name).algebra.unwrap();
        t.expect(a.check_skew().passed(), format!("{name} skew"));
        t.expect(a.check_jacobi().passed(), format!("{name} jacobi"));
    }
    let skew = load("broken_skew").algebra.unwrap().check_skew();
    let v = &skew.checks[0].violations;
    t.expect(v.len() == 1 && v[0].tuple == ["L", "L"], format!("broken_skew violations {v:?}"));
    let bj = load("broken_jacobi").algebra.unwrap();
    t.expect(bj.check_skew().passed(), "broken_jacobi should be skew");
    let jac = bj.check_jacobi();
    let tuples: Vec<Vec<String>> = jac.checks[0].violations.iter().map(|v| v.tuple.clone()).collect();
    // [H,E] = 3E breaks Jacobi exactly on triples holding E, F and H once each
    let mut expected = Vec::new();
    for p in [["E", "F", "H"], ["E", "H", "F"], ["F", "E", "H"], ["F", "H", "E"], ["H", "E", "F"], ["H", "F", "E"]] {
        expected.push(p.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    }
    t.expect(tuples == expected, format!("broken_jacobi tuples {tuples:?}"));
    t.finish(1, "axiom bedrock");
}

#[test]
fn c02_averaging() {
    let mut t = Tally::default();
    for name in BUILTINS {
        let b = load(name);
        let algs = b
            .algebra
            .iter()
            .cloned()
            .chain(b.cocycle.iter().flat_map(|c| [c.base.algebra.clone(), c.fiber.algebra.clone()]));
        for a in algs {
            let ok = a.check_averaging(&ConformalMap::identity(a.rank())).unwrap().passed();
            t.expect(ok, format!("Id on {} ({name})", a.name));
        }
    }
    for (name, ops) in [("vir_sum2", &["P", "P2"][..]), ("vir_sum3", &["P", "P2", "P3"][..])] {
        let b = load(name);
        let a = b.algebra.as_ref().unwrap();
        for op in ops {
            t.expect(a.check_averaging(&b.maps[*op]).unwrap().passed(), format!("{op} on {name}"));
        }
    }
    let vir = load("virasoro");
    let a = vir.algebra.as_ref().unwrap();
    for op in ["Zero", "Id", "Two", "Half"] {
        t.expect(a.check_averaging(&vir.maps[op]).unwrap().passed(), format!("{op} on Vir"));
    }
    let sum = load("vir_sum2");
    let a = sum.algebra.as_ref().unwrap();
    let mut runner = TestRunner::deterministic();
    let entry = (-3i64..=3, -1i64..=1).prop_map(|(c, k)| &Poly::int(c) + &Poly::d().scale(&q(k)));
    let strategy = proptest::collection::vec(entry, 4);
    for _ in 0..5 {
        let m = ConformalMap::new(2, 2, strategy.new_tree(&mut runner).unwrap().current()).unwrap();
        let r = a.check_averaging(&m).unwrap();
        t.expect(!r.passed(), format!("random matrix {:?} passed", m.entries()));
    }
    t.expect(!a.check_averaging(&sum.maps["NotAveraging"]).unwrap().passed(), "NotAveraging passed");
    t.finish(2, "averaging operators");
}

struct CohomCase {
    label: String,
    triple: AvgRepTriple,
    cochains: Vec<Cochain>,
}

fn cohom_cases() -> Vec<CohomCase> {
    let mut out = Vec::new();
    for name in ["cohom_vir", "cohom_sl2"] {
        let b = load(name);
        let a = b.algebra.clone().unwrap();
        let n = a.rank();
        let cochains: Vec<Cochain> = b.cochains.values().cloned().collect();
        for c in [1, 2] {
            let p = ConformalMap::scalar(n, q(c));
            out.push(CohomCase {
                label: format!("{} P={c}Id", a.name),
                triple: AvgRepTriple::adjoint(&a, &p).unwrap(),
                cochains: cochains.clone(),
            });
        }
    }
    out
}

fn pairs(cochains: &[Cochain]) -> Vec<CochainPair> {
    let mut out = Vec::new();
    for f in cochains {
        for g in cochains {
            if f.degree() >= 2 && g.degree() + 1 == f.degree() {
                out.push(CochainPair::new(f.clone(), g.clone()).unwrap());
            }
        }
    }
    out
}

#[test]
fn c03_square_zero() {
    let mut delta_ok = true;
    let mut ao_ok = true;
    let mut dal_bad = Vec::new();
    let mut count = (0, 0);
    for case in cohom_cases() {
        let t = &case.triple;
        for f in &case.cochains {
            count.0 += 1;
            delta_ok &= delta(&t.rep, &delta(&t.rep, f).unwrap()).unwrap().is_zero();
            ao_ok &= delta_ao(t, &delta_ao(t, f).unwrap()).unwrap().is_zero();
        }
        for pair in pairs(&case.cochains) {
            count.1 += 1;
            let dd = d_al(t, &d_al(t, &pair).unwrap()).unwrap();
            if !dd.is_zero() {
                // the f part is δδf = 0; the g part is -(ξδ - ∂_AO ξ)f
                let f_part = dd.f.is_zero();
                let lemma = delta_ao(t, &xi(t, &pair.f).unwrap())
                    .unwrap()
                    .sub(&xi(t, &delta(&t.rep, &pair.f).unwrap()).unwrap())
                    .unwrap();
                let explained = f_part && dd.g == lemma;
                dal_bad.push((case.label.clone(), pair.f.degree(), explained));
            }
        }
    }
    assert!(count.0 >= 10 && count.1 >= 4);
    assert!(delta_ok && ao_ok, "δ² or ∂_AO² nonzero");
    // Every d_AL² failure is the chain-map defect of ξ, and only P = 2Id fails.
    assert!(dal_bad.iter().all(|(l, _, e)| *e && l.ends_with("P=2Id")), "{dal_bad:?}");
    let detail = format!(
        "δ² = 0 and ∂_AO² = 0 on all {} cochains; d_AL² = 0 for P = Id but not on {} pairs with P = 2Id. \
         The g part of d_AL² equals ∂_AO ξ f - ξ δ f, which vanishes only when ξ is a chain map; \
         for P = c·Id, φ = c the defining formula gives ξ = (c^p - c²) on degree p, so ξδf = 0 \
         on degree 1 while ∂_AO ξ f = (c - c²) ∂_AO f is nonzero for c = 2 (see criterion 4)",
        count.0,
        dal_bad.len()
    );
    verdict(3, "square-zero differentials", dal_bad.is_empty(), &detail);
}

#[test]
fn c04_chain_map() {
    let mut bad = Vec::new();
    for case in cohom_cases() {
        let t = &case.triple;
        for f in case.cochains.iter().filter(|f| f.degree() <= 2) {
            let lhs = xi(t, &delta(&t.rep, f).unwrap()).unwrap();
            let rhs = delta_ao(t, &xi(t, f).unwrap()).unwrap();
            if lhs != rhs {
                let df = delta(&t.rep, f).unwrap();
                bad.push((case.label.clone(), f.degree(), lhs.sub(&rhs).unwrap() == df.scale(&q(4))));
            }
        }
    }
    // pinned: the defect is exactly 4δf, for P = 2Id only
    assert!(bad.iter().all(|(l, _, e)| *e && l.ends_with("P=2Id")), "{bad:?}");
    let n_id = bad.len();
    let detail = format!(
        "ξ(δf) = ∂_AO(ξf) holds for P = Id and fails on {n_id} cochains with P = 2Id, with \
         ξ(δf) - ∂_AO(ξf) = 4δf in every case. With P = φ = 2 the formula \
         ξf = f(Px..) - φ f(Px1, x2..) scales degree 1, 2 and 3 cochains by -2, 0 and 4, \
         and ∂_AO for the induced action is 2δ, so the two sides differ by 4δf in degrees 1 and 2; no sign or \
         ordering convention removes a degree-dependent scale, so the identity needs φ = P = Id"
    );
    verdict(4, "xi is a chain map", bad.is_empty(), &detail);
}

#[test]
fn c05_delta_of_identity() {
    let mut t = Tally::default();
    let vir = load("virasoro").algebra.unwrap();
    let d = delta(&adjoint_rep(&vir), &Cochain::identity(1)).unwrap();
    t.expect(d == Cochain::bracket(&vir), "δ(Id) differs from the bracket cochain");
    let oracle = &Poly::d() + &Poly::lambda(1).scale(&q(2));
    t.expect(d.value(&[0, 0]) == &ModElem::from_coords(vec![oracle]), "value is not (∂+2λ)L");
    t.finish(5, "coboundary of the identity");
}

#[test]
fn c06_nijenhuis_richardson() {
    let mut t = Tally::default();
    for name in BUILTINS {
        let b = load(name);
        let Some(a) = b.algebra else { continue };
        if !a.check_axioms().passed() {
            continue;
        }
        let r = mc_check(&Cochain::bracket(&a), &a.basis).unwrap();
        t.expect(r.passed(), format!("[η,η] ≠ 0 for {name}"));
    }
    let bj = load("broken_jacobi").algebra.unwrap();
    t.expect(!mc_check(&Cochain::bracket(&bj), &bj.basis).unwrap().passed(), "broken_jacobi is MC");
    for name in ["cohom_vir", "cohom_sl2"] {
        let b = load(name);
        let c = |k: &str| b.cochains[k].clone();
        for (f, g) in [(c("f2"), c("g2")), (c("f2"), c("f1")), (c("f3"), c("f2"))] {
            let (p, qd) = (f.degree() as i64, g.degree() as i64);
            let sign = if (p - 1) * (qd - 1) % 2 == 0 { 1 } else { -1 };
            let fg = nr_bracket(&f, &g).unwrap();
            let gf = nr_bracket(&g, &f).unwrap();
            t.expect(fg == gf.scale(&q(-sign)), format!("antisymmetry ({p},{qd}) on {name}"));
        }
        let eta = Cochain::bracket(b.algebra.as_ref().unwrap());
        for k in ["f1", "f2", "g1", "g2"] {
            let dd = d_eta(&eta, &d_eta(&eta, &c(k)).unwrap()).unwrap();
            t.expect(dd.is_zero(), format!("d_η² {k} on {name}"));
        }
    }
    t.finish(6, "Nijenhuis-Richardson bracket and Maurer-Cartan");
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn table(l: usize, r: usize, o: usize, entries: &[((usize, usize), ModElem)]) -> LambdaTable {
    LambdaTable::from_fn(l, r, o, |i, j| {
        entries.iter().find(|(k, _)| *k == (i, j)).map(|(_, v)| v.clone()).unwrap_or_else(|| ModElem::zero(o))
    })
}

fn unit(n: usize, i: usize) -> ModElem {
    ModElem::basis(n, i)
}

fn map(rows: usize, cols: usize, ones: &[(usize, usize)]) -> ConformalMap {
    ConformalMap::from_fn(rows, cols, |r, c| if ones.contains(&(r, c)) { Poly::one() } else { Poly::zero() })
}

/// A nonzero skew 3-cochain on `n0` generators supported on `(0,0,0)` with
/// values along `out`.
fn vandermonde_l3(n0: usize, n1: usize, out: usize) -> Cochain {
    let v = (&Poly::lambda(1) - &Poly::lambda(2)).pow(3);
    let raw =
        Cochain::from_fn(3, n0, n1, |tu| if tu == [0, 0, 0] { unit(n1, out).scale(&v) } else { ModElem::zero(n1) })
            .unwrap();
    let l3 = Cochain::skew_symmetrize(&raw, &names("X", n0)).unwrap();
    assert!(!l3.is_zero());
    l3
}

fn two_term(n0: usize, n1: usize, d: ConformalMap, b00: LambdaTable, b01: LambdaTable, l3: Cochain) -> TwoTermLinf {
    TwoTermLinf::new(names("X", n0), names("M", n1), d, b00, b01, l3).unwrap()
}

fn zero_structure(n0: usize, n1: usize) -> TwoTermLinf {
    two_term(
        n0,
        n1,
        ConformalMap::zero(n0, n1),
        LambdaTable::zero(n0, n0, n0),
        LambdaTable::zero(n0, n1, n1),
        Cochain::zero(3, n0, n1),
    )
}

#[test]
fn c07_two_term_identities() {
    let mut t = Tally::default();
    let vir = builtin::virasoro::<Rational>();
    let (datum, hp) = identity_crossed_datum(&vir, &ConformalMap::identity(1)).unwrap();
    t.expect(datum.check_2term().unwrap().passed(), "datum fails L1-L8");
    t.expect(datum.check_homotopy_avg(&hp).unwrap().passed(), "datum fails A1-A5");
    t.expect(datum.check_morphism(&datum, &TwoTermMorphism::identity(&datum)).unwrap().passed(), "identity morphism");

    let vir_t = vir.table.clone();

    // L1 and L2 are not mutable: the structure stores no [[m n]] and derives
    // [[m x]] from [[x m]].
    let mut l_mutants: Vec<(&str, TwoTermLinf)> = Vec::new();
    let mut z = zero_structure(2, 1);
    z.bracket00 = table(2, 2, 2, &[((0, 0), unit(2, 1))]);
    l_mutants.push(("L3", z));
    l_mutants.push((
        "L4",
        two_term(
            2,
            1,
            map(2, 1, &[(1, 0)]),
            LambdaTable::zero(2, 2, 2),
            table(2, 1, 1, &[((0, 0), unit(1, 0))]),
            Cochain::zero(3, 2, 1),
        ),
    ));
    l_mutants.push((
        "L5",
        two_term(
            1,
            2,
            map(1, 2, &[(0, 0)]),
            LambdaTable::zero(1, 1, 1),
            table(1, 2, 2, &[((0, 1), unit(2, 1))]),
            Cochain::zero(3, 1, 2),
        ),
    ));
    l_mutants.push((
        "L6",
        two_term(
            2,
            1,
            map(2, 1, &[(1, 0)]),
            LambdaTable::zero(2, 2, 2),
            LambdaTable::zero(2, 1, 1),
            vandermonde_l3(2, 1, 0),
        ),
    ));
    l_mutants.push((
        "L7",
        two_term(
            1,
            2,
            map(1, 2, &[(0, 0)]),
            LambdaTable::zero(1, 1, 1),
            LambdaTable::zero(1, 2, 2),
            vandermonde_l3(1, 2, 1),
        ),
    ));
    l_mutants.push(("L8", {
        // on a rank one algebra every skew 4-cochain of low degree vanishes, so L8 needs rank 3
        let sl2 = builtin::cur_sl2::<Rational>();
        let l3 = load("cohom_sl2").cochains["f3"].clone();
        two_term(3, 3, ConformalMap::zero(3, 3), sl2.table.clone(), sl2.table.clone(), l3)
    }));
    for (id, m) in &l_mutants {
        let got = failed(&m.check_2term().unwrap());
        t.expect(got == [*id], format!("{id} mutant fails {got:?}"));
    }

    // A4 restates A3 through the twisted transpose, so they fail together.
    let mut a_mutants: Vec<(&[&str], TwoTermLinf, HomotopyAvg)> = Vec::new();
    let mut z = zero_structure(1, 1);
    z.d = ConformalMap::identity(1);
    a_mutants.push((&["A1"], z, HomotopyAvg::strict(ConformalMap::identity(1), ConformalMap::scalar(1, q(2)))));
    let sum = load("vir_sum2");
    let mut s = zero_structure(2, 1);
    s.bracket00 = sum.algebra.as_ref().unwrap().table.clone();
    a_mutants.push((&["A2"], s, HomotopyAvg::strict(sum.maps["NotAveraging"].clone(), ConformalMap::identity(1))));
    let mut z = zero_structure(2, 2);
    z.d = map(2, 2, &[(1, 0)]);
    let p2 = table(2, 2, 2, &[((0, 1), unit(2, 1)), ((1, 0), -&unit(2, 1))]);
    a_mutants.push((
        &["A3a", "A4a"],
        z,
        HomotopyAvg { p0: ConformalMap::identity(2), p1: ConformalMap::identity(2), p2 },
    ));
    let adj = two_term(1, 1, ConformalMap::zero(1, 1), vir_t.clone(), vir_t.clone(), Cochain::zero(3, 1, 1));
    a_mutants.push((
        &["A3b", "A4b"],
        adj,
        HomotopyAvg::strict(ConformalMap::identity(1), ConformalMap::scalar(1, q(2))),
    ));
    let mut z = zero_structure(1, 1);
    z.l3 = vandermonde_l3(1, 1, 0);
    a_mutants.push((&["A5"], z, HomotopyAvg::strict(ConformalMap::scalar(1, q(2)), ConformalMap::identity(1))));
    for (id, m, p) in &a_mutants {
        t.expect(m.check_2term().unwrap().passed(), format!("{id:?} mutant is not a 2-term structure"));
        let got = failed(&m.check_homotopy_avg(p).unwrap());
        t.expect(got == *id, format!("{id:?} mutant fails {got:?}"));
    }

    // H4 likewise restates H3.
    let mut h_mutants: Vec<(&[&str], TwoTermLinf, TwoTermLinf, TwoTermMorphism)> = Vec::new();
    let mut z = zero_structure(1, 1);
    z.d = ConformalMap::identity(1);
    let m = TwoTermMorphism {
        f0: ConformalMap::identity(1),
        f1: ConformalMap::scalar(1, q(2)),
        f2: LambdaTable::zero(1, 1, 1),
    };
    h_mutants.push((&["H1"], z.clone(), z, m));
    let mut src = zero_structure(1, 1);
    src.bracket00 = vir_t.clone();
    let mut dst = src.clone();
    dst.bracket00 = vir_t.scale(&q(2));
    h_mutants.push((&["H2"], src.clone(), dst, TwoTermMorphism::identity(&src)));
    let mut dst = src.clone();
    src.bracket01 = vir_t.clone();
    dst.bracket01 = LambdaTable::zero(1, 1, 1);
    h_mutants.push((&["H3", "H4"], src.clone(), dst, TwoTermMorphism::identity(&src)));
    let mut src = zero_structure(1, 1);
    src.l3 = vandermonde_l3(1, 1, 0);
    let dst = zero_structure(1, 1);
    h_mutants.push((&["H5"], src.clone(), dst, TwoTermMorphism::identity(&src)));
    for (id, s, d, m) in &h_mutants {
        t.expect(
            s.check_2term().unwrap().passed() && d.check_2term().unwrap().passed(),
            format!("{id:?} ends are not 2-term structures"),
        );
        let got = failed(&s.check_morphism(d, m).unwrap());
        t.expect(got == *id, format!("{id:?} mutant fails {got:?}"));
    }
    t.finish(7, "two-term identities and mutants");
}

fn skeletal_data() -> Vec<(String, TwoTermLinf, HomotopyAvg)> {
    let mut out = Vec::new();
    let data = load("skeletal_sl2").two_term.unwrap();
    out.push(("skeletal_sl2".into(), data.structure, data.avg.unwrap()));

    let vir = builtin::virasoro::<Rational>();
    let l3 = delta(&adjoint_rep(&vir), &load("cohom_vir").cochains["f2"]).unwrap();
    let t = two_term(1, 1, ConformalMap::zero(1, 1), vir.table.clone(), vir.table.clone(), l3);
    out.push(("Vir, l3 = δh".into(), t, HomotopyAvg::strict(ConformalMap::identity(1), ConformalMap::identity(1))));

    // l3 = 0 and -P2 = ∂_AO k is closed because ∂_AO squares to zero
    let b = load("cohom_sl2");
    let sl2 = b.algebra.clone().unwrap();
    let triple = AvgRepTriple::adjoint(&sl2, &ConformalMap::identity(3)).unwrap();
    let g = delta_ao(&triple, &b.cochains["g1"]).unwrap();
    assert!(!g.is_zero());
    let t = two_term(3, 3, ConformalMap::zero(3, 3), sl2.table.clone(), sl2.table.clone(), Cochain::zero(3, 3, 3));
    let p =
        HomotopyAvg { p0: ConformalMap::identity(3), p1: ConformalMap::identity(3), p2: g.neg().to_table().unwrap() };
    out.push(("Cur(sl2), P2 = -∂_AO k".into(), t, p));

    // trivial action on a free rank one module; any skew l3 is closed
    let v = (&Poly::lambda(1) - &Poly::lambda(2))
        * (&Poly::d() + &Poly::lambda(1).scale(&q(2)) + Poly::lambda(2))
        * (&Poly::d() + &Poly::lambda(1) + Poly::lambda(2).scale(&q(2)));
    let mut t = zero_structure(1, 1);
    t.l3 = Cochain::from_fn(3, 1, 1, |_| ModElem::from_coords(vec![v.clone()])).unwrap();
    out.push((
        "abelian, trivial action".into(),
        t,
        HomotopyAvg::strict(ConformalMap::identity(1), ConformalMap::identity(1)),
    ));
    out
}

#[test]
fn c08_skeletal_and_cocycles() {
    let mut t = Tally::default();
    let data = skeletal_data();
    for (label, s, p) in &data {
        t.expect(s.check_2term().unwrap().passed(), format!("{label}: L1-L8"));
        t.expect(s.check_homotopy_avg(p).unwrap().passed(), format!("{label}: A1-A5"));
        let Ok((triple, pair)) = skeletal_to_cocycle(s, p) else {
            t.expect(false, format!("{label}: not closed"));
            continue;
        };
        t.expect(d_al(&triple, &pair).unwrap().is_zero(), format!("{label}: d_AL(l3, -P2) ≠ 0"));
        let (s2, p2) = cocycle_to_skeletal(&triple, &pair).unwrap();
        t.expect(&s2 == s && &p2 == p, format!("{label}: round trip differs"));
    }
    t.expect(data.len() >= 3, "fewer than 3 data");
    t.finish(8, "skeletal structures and 3-cocycles");
}

#[test]
fn c09_strict_and_crossed() {
    let mut t = Tally::default();
    let vir = builtin::virasoro::<Rational>();
    let mut strict = vec![
        ("identity datum, Vir".to_string(), identity_crossed_datum(&vir, &ConformalMap::identity(1)).unwrap()),
        ("identity datum, Vir, 2Id".into(), identity_crossed_datum(&vir, &ConformalMap::scalar(1, q(2))).unwrap()),
        (
            "identity datum, Cur(sl2)".into(),
            identity_crossed_datum(&builtin::cur_sl2(), &ConformalMap::identity(3)).unwrap(),
        ),
    ];
    let data = load("crossed_id_ad").two_term.unwrap();
    strict.push(("crossed_id_ad".into(), (data.structure, data.avg.unwrap())));
    let mut crossed = vec![("crossed_kernel".to_string(), load("crossed_kernel").crossed.unwrap())];
    let sum = load("vir_sum3").algebra.unwrap();
    crossed
        .push(("ideal of vir_sum3".into(), ideal_crossed_module(&sum, &ConformalMap::identity(3), &[1, 2]).unwrap()));

    for (label, (s, p)) in &strict {
        let c = strict_to_crossed(s, p).unwrap();
        t.expect(c.check().unwrap().passed(), format!("{label}: crossed checks"));
        let (s2, p2) = crossed_to_strict(&c).unwrap();
        t.expect(&s2 == s && &p2 == p, format!("{label}: strict round trip"));
        let (a, op) = c.direct_sum().unwrap();
        t.expect(a.check_jacobi().passed() && a.check_skew().passed(), format!("{label}: direct sum axioms"));
        t.expect(a.check_averaging(&op).unwrap().passed(), format!("{label}: direct sum averaging"));
        let (a2, op2) = strict_direct_sum(s, p).unwrap();
        t.expect(a2.table == a.table && op2 == op, format!("{label}: direct sums disagree"));
    }
    for (label, c) in &crossed {
        t.expect(c.check().unwrap().passed(), format!("{label}: crossed checks"));
        let (s, p) = crossed_to_strict(c).unwrap();
        let c2 = strict_to_crossed(&s, &p).unwrap();
        let same = c2.upstairs.table == c.upstairs.table
            && c2.upstairs.basis == c.upstairs.basis
            && c2.downstairs.table == c.downstairs.table
            && (&c2.d, &c2.action, &c2.p0, &c2.p1) == (&c.d, &c.action, &c.p0, &c.p1);
        t.expect(same, format!("{label}: crossed round trip"));
        let (a, op) = c.direct_sum().unwrap();
        t.expect(a.check_axioms().passed() && a.check_averaging(&op).unwrap().passed(), format!("{label}: direct sum"));
        let (a2, op2) = strict_direct_sum(&s, &p).unwrap();
        t.expect(a2.table == a.table && op2 == op, format!("{label}: direct sums disagree"));
        t.expect(a.basis == disjoint_basis(&c.downstairs.basis, &c.upstairs.basis), format!("{label}: basis names"));
    }
    t.finish(9, "strict structures and crossed modules");
}

fn sample_cocycles() -> Vec<(String, NonAbCocycle)> {
    let mut out: Vec<(String, NonAbCocycle)> = Vec::new();
    out.push(("semidirect_vir".into(), load("semidirect_vir").cocycle.unwrap()));
    out.push(("Vir on weight 1".into(), lca_cli::corpus::semidirect_vir(1, 1)));
    out.push(("semidirect_sl2".into(), load("semidirect_sl2").cocycle.unwrap()));
    let shifted = load("ext_shift").extension.unwrap();
    out.push(("shifted section".into(), extract_cocycle(&shifted).unwrap()));
    out
}

fn section_shift(e: &Extension, tau: &ConformalMap) -> Extension {
    e.with_section(e.section.sub(&e.inclusion.compose(tau).unwrap()).unwrap()).unwrap()
}

#[test]
fn c10_extensions() {
    let mut t = Tally::default();
    let cocycles = sample_cocycles();
    t.expect(!cocycles[3].1.chi.is_zero(), "shifted cocycle has χ = 0");
    for (label, c) in &cocycles {
        t.expect(c.check().passed(), format!("{label}: cocycle checks {:?}", failed(&c.check())));
        let e = build_extension(c).unwrap();
        let r = e.check().unwrap();
        t.expect(r.passed(), format!("{label}: extension checks {:?}", failed(&r)));
        t.expect(e.total.check().passed(), format!("{label}: total algebra"));
        t.expect(extract_cocycle(&e).unwrap() == *c, format!("{label}: extract differs"));
        let h = c.fiber.rank();
        let n = c.base.rank();
        let tau = ConformalMap::from_fn(h, n, |r, col| if r == col % h { Poly::one() } else { Poly::zero() });
        let c2 = extract_cocycle(&section_shift(&e, &tau)).unwrap();
        t.expect(c2.check().passed(), format!("{label}: shifted cocycle checks"));
        t.expect(check_equivalence(c, &c2, &tau).unwrap().passed(), format!("{label}: τ is no witness"));
    }
    t.finish(10, "extensions and cocycles");
}

#[test]
fn c11_wells() {
    let mut t = Tally::default();
    let mut extensions: Vec<(String, Extension)> = Vec::new();
    for name in BUILTINS {
        let b = load(name);
        if let Some(e) = b.extension {
            extensions.push((name.to_string(), e));
        }
        if let Some(c) = b.cocycle {
            extensions.push((format!("{name} built"), build_extension(&c).unwrap()));
        }
    }
    for (label, e) in &extensions {
        let c = extract_cocycle(e).unwrap();
        let id = AutPair { alpha: ConformalMap::identity(c.fiber.rank()), beta: ConformalMap::identity(c.base.rank()) };
        t.expect(transform_cocycle(&id, &c).unwrap() == c, format!("{label}: identity transform"));
        let zero = ConformalMap::zero(c.fiber.rank(), c.base.rank());
        t.expect(wells_verify(&id, e, &zero).unwrap().passed(), format!("{label}: identity Wells"));
    }

    // Chevalley involution of sl2: E ↦ -F, F ↦ -E, H ↦ -H
    let omega = ConformalMap::from_fn(3, 3, |r, c| match (r, c) {
        (1, 0) | (0, 1) | (2, 2) => Poly::int(-1),
        _ => Poly::zero(),
    });
    let blocks = [
        ("semidirect_vir", ConformalMap::identity(1), ConformalMap::scalar(1, q(-1))),
        ("semidirect_sl2", omega.clone(), omega),
    ];
    for (name, beta, alpha) in blocks {
        let e = build_extension(&load(name).cocycle.unwrap()).unwrap();
        let gamma = ConformalMap::direct_sum(&beta, &alpha);
        let ap = pi_restrict(&e, &gamma).unwrap();
        t.expect(ap.alpha == alpha && ap.beta == beta, format!("{name}: pi_restrict"));
        let tau = wells_tau(&e, &gamma).unwrap();
        t.expect(wells_verify(&ap, &e, &tau).unwrap().passed(), format!("{name}: block Wells"));
    }

    let b = load("ext_shift");
    let c = b.cocycle.unwrap();
    let c2 = extract_cocycle(&b.extension.unwrap()).unwrap();
    match tau_solve_abelian(&c, &c2, 2).unwrap() {
        Some(tau) => {
            t.expect(check_equivalence(&c, &c2, &tau).unwrap().passed(), "solver witness fails");
            t.expect(tau == b.maps["Tau"], format!("solver found {:?}", tau.entries()));
        }
        None => t.expect(false, "no witness for the section shift"),
    }
    let base = lca_cli::corpus::semidirect_vir(1, 1);
    let mut far = base.clone();
    let s = &(&Poly::d() + &Poly::lambda(1).scale(&q(2))) * &(Poly::lambda(1) * (&Poly::d() + &Poly::lambda(1))).pow(3);
    far.chi = LambdaTable::new(1, 1, 1, vec![ModElem::from_coords(vec![s])]).unwrap();
    t.expect(tau_solve_abelian(&base, &far, 3).unwrap().is_none(), "inequivalent pair solved");
    t.finish(11, "Wells map");
}

fn lca(args: &[&str]) -> i32 {
    let out = Command::new(env!("CARGO_BIN_EXE_lca")).args(args).output().unwrap();
    out.status.code().unwrap_or(-1)
}

#[test]
fn c12_cli() {
    let mut t = Tally::default();
    for name in BUILTINS {
        let path = corpus_path(&format!("{name}.json"));
        let text = std::fs::read_to_string(&path).unwrap();
        let b = Bundle::from_str(&text).unwrap();
        t.expect(b.to_canonical() == text, format!("{name} does not round-trip"));
    }
    let p = |n: &str| corpus_path(n).display().to_string();
    let cases: &[(&[&str], &str, i32)] = &[
        (&["check"], "virasoro.json", 0),
        (&["check"], "broken_skew.json", 1),
        (&["check"], "broken_jacobi.json", 1),
        (&["avg-check", "--op", "NotAveraging"], "vir_sum2.json", 1),
        (&["twoterm", "check"], "crossed_id_ad.json", 0),
        (&["rep-check"], "tensor2.json", 1),
        (&["ext", "check-cocycle"], "semidirect_sl2.json", 0),
        (&["twoterm", "check"], "virasoro.json", 2),
    ];
    for (cmd, file, want) in cases {
        let mut args = cmd.to_vec();
        let input = p(file);
        args.extend(["--quiet", "--input", &input]);
        let got = lca(&args);
        t.expect(got == *want, format!("{cmd:?} on {file}: exit {got}, want {want}"));
    }
    let mut invalid = 0;
    for entry in std::fs::read_dir(corpus_path("invalid")).unwrap() {
        let path = entry.unwrap().path().display().to_string();
        let got = lca(&["check", "--quiet", "--input", &path]);
        t.expect(got == 2, format!("{path}: exit {got}"));
        invalid += 1;
    }
    t.expect(invalid >= 8, "too few schema fixtures");
    t.finish(12, "command line");
}
