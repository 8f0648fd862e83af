//! Subcommand implementations. Each produces a [`Outcome`]; printing and
//! exit codes live in the binary.

use lca_core::cohomology::{self, tuples, MAX_CHECK_DEGREE, MAX_DEGREE};
use lca_core::extensions::{
    build_extension, check_equivalence, extract_cocycle, pi_restrict, tau_solve_abelian, wells_tau, wells_verify,
};
use lca_core::homotopy2::{crossed_to_strict, skeletal_to_cocycle, strict_to_crossed};
use lca_core::representations::{semidirect, semidirect_operators};
use lca_core::{
    AutPair, AveragingAlgebra, Cochain, CochainPair, ConformalMap, Extension, NonAbCocycle, Rational, Report,
};
use lca_core::{CheckResult, ModElem};
use serde_json::{Map, Value};

use crate::bundle::{cochain_value, matrix_value, Bundle, InputError, RepData, TwoTermData};
use crate::expr::poly_to_string;

pub struct Outcome {
    pub report: Report,
    /// Overrides `report.passed()` when set.
    pub passed: Option<bool>,
    /// Computed data, reported under "output".
    pub output: Option<Value>,
    /// Bundle written by `--emit`.
    pub emit: Option<Bundle>,
}

impl Outcome {
    fn new(report: Report) -> Self {
        Outcome { report, passed: None, output: None, emit: None }
    }

    pub fn passed(&self) -> bool {
        self.passed.unwrap_or_else(|| self.report.passed())
    }

    pub fn to_json(&self, command: &str) -> Value {
        let mut o = Map::new();
        o.insert("format".into(), Value::from(crate::bundle::FORMAT));
        o.insert("tool".into(), Value::from(format!("lca {}", env!("CARGO_PKG_VERSION"))));
        o.insert("command".into(), Value::from(command));
        o.insert("subject".into(), Value::from(self.report.subject.as_str()));
        o.insert("passed".into(), Value::from(self.passed()));
        o.insert("checks".into(), report_checks(&self.report));
        o.insert("notes".into(), Value::Array(self.report.notes.iter().map(|n| Value::from(n.as_str())).collect()));
        if let Some(out) = &self.output {
            o.insert("output".into(), out.clone());
        }
        Value::Object(o)
    }
}

fn coords_value(v: &ModElem) -> Value {
    Value::Array(v.coords().iter().map(|p| Value::from(poly_to_string(p))).collect())
}

fn report_checks(r: &Report) -> Value {
    Value::Array(
        r.checks
            .iter()
            .map(|c| {
                let mut o = Map::new();
                o.insert("name".into(), Value::from(c.name.as_str()));
                o.insert("passed".into(), Value::from(c.passed()));
                let vs = c
                    .violations
                    .iter()
                    .map(|v| {
                        let mut vo = Map::new();
                        vo.insert(
                            "tuple".into(),
                            Value::Array(v.tuple.iter().map(|s| Value::from(s.as_str())).collect()),
                        );
                        vo.insert("lhs".into(), coords_value(&v.lhs));
                        vo.insert("rhs".into(), coords_value(&v.rhs));
                        vo.insert("residual".into(), coords_value(&v.residual()));
                        Value::Object(vo)
                    })
                    .collect();
                o.insert("violations".into(), Value::Array(vs));
                Value::Object(o)
            })
            .collect(),
    )
}

fn missing<T>(what: &str) -> Result<T, InputError> {
    Err(InputError::Missing(format!("bundle has no \"{what}\"")))
}

pub fn check(b: &Bundle) -> Result<Outcome, InputError> {
    let a = b.require_algebra()?;
    let mut r = a.check_axioms();
    r.subject = a.name.clone();
    Ok(Outcome::new(r))
}

fn operator<'a>(b: &'a Bundle, name: Option<&str>) -> Result<&'a ConformalMap, InputError> {
    match name {
        Some(n) => b.map(n),
        None => {
            b.operator.as_ref().ok_or_else(|| InputError::Missing("no --op given and no \"algebra.operator\"".into()))
        }
    }
}

pub fn avg_check(b: &Bundle, op: Option<&str>) -> Result<Outcome, InputError> {
    let a = b.require_algebra()?;
    let p = operator(b, op)?;
    let mut r = a.check_averaging(p)?;
    r.subject = format!("{} with {}", a.name, op.unwrap_or("operator"));
    let right = a.check_averaging_right(p)?;
    r.note(format!("right identity P([x_λ P(y)]) = [P(x)_λ P(y)]: {}", verdict(right.passed())));
    Ok(Outcome::new(r))
}

pub fn rep_check(b: &Bundle, op: Option<&str>) -> Result<Outcome, InputError> {
    let Some(RepData { rep, phi, operator: rop }) = &b.rep else {
        return missing("rep");
    };
    let mut r = Report::new(format!("{} on {}", rep.algebra.name, rep.module_basis.join(",")));
    r.absorb("", rep.check_rep());
    if phi.is_some() || rop.is_some() || op.is_some() {
        let opm = op.map(|n| b.map(n)).transpose()?;
        let triple = b.triple(opm)?;
        r.absorb("", triple.check_avg_rep());
        let sum = semidirect(&triple.rep);
        for (name, p) in ["P1", "P2", "P3"].iter().zip(semidirect_operators(&triple)) {
            r.note(format!("semidirect {name} averaging: {}", verdict(sum.check_averaging(&p)?.passed())));
        }
    }
    Ok(Outcome::new(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CohomOp {
    Delta,
    DeltaAo,
    Xi,
    Dal,
    Nr,
    Mc,
}

fn compare_cochains(name: &str, lhs: &Cochain, rhs: &Cochain, basis: &[String]) -> CheckResult {
    let mut c = CheckResult::new(name);
    for t in tuples(lhs.degree(), lhs.in_rank()) {
        let names: Vec<&str> = t.iter().map(|&i| basis[i].as_str()).collect();
        c.compare(&names, lhs.value(&t).clone(), rhs.value(&t).clone());
    }
    c
}

fn zero_check(name: &str, f: &Cochain, basis: &[String]) -> CheckResult {
    compare_cochains(name, f, &Cochain::zero(f.degree(), f.in_rank(), f.out_rank()), basis)
}

pub fn cohom(
    b: &Bundle,
    op: CohomOp,
    cochain: Option<&str>,
    cochain2: Option<&str>,
    avg_op: Option<&str>,
) -> Result<Outcome, InputError> {
    let opm = avg_op.map(|n| b.map(n)).transpose()?;
    let t = b.triple(opm)?;
    let basis = t.algebra().basis.clone();
    let out_basis = t.rep.module_basis.clone();
    let need = |name: Option<&str>, flag: &str| -> Result<&Cochain, InputError> {
        match name {
            Some(n) => b.cochain(n),
            None => Err(InputError::Missing(format!("{flag} NAME is required"))),
        }
    };
    let fits = |deg: usize| deg <= MAX_DEGREE;
    let mut r = Report::new(format!("{} over {}", cohom_name(op), t.algebra().name));
    let mut outcome_output = None;
    match op {
        CohomOp::Delta | CohomOp::DeltaAo => {
            let f = need(cochain, "--cochain")?;
            let d = |g: &Cochain| match op {
                CohomOp::Delta => cohomology::delta(&t.rep, g),
                _ => cohomology::delta_ao(&t, g),
            };
            let df = d(f)?;
            if df.degree() <= MAX_CHECK_DEGREE {
                let mut c = df.check_cochain(&basis)?;
                c.subject.clear();
                r.absorb("output", c);
            }
            if fits(df.degree() + 1) {
                r.push(zero_check("square-zero", &d(&df)?, &basis));
            } else {
                r.note(format!("square not computed: degree {} exceeds {MAX_DEGREE}", df.degree() + 1));
            }
            outcome_output = Some(cochain_json(&df, &basis, &out_basis));
        }
        CohomOp::Xi => {
            let f = need(cochain, "--cochain")?;
            let xf = cohomology::xi(&t, f)?;
            if fits(f.degree() + 1) {
                let lhs = cohomology::xi(&t, &cohomology::delta(&t.rep, f)?)?;
                let rhs = cohomology::delta_ao(&t, &xf)?;
                r.push(compare_cochains("chain-map", &lhs, &rhs, &basis));
            }
            outcome_output = Some(cochain_json(&xf, &basis, &out_basis));
        }
        CohomOp::Dal => {
            let f = need(cochain, "--cochain")?.clone();
            let g = need(cochain2, "--cochain2")?.clone();
            let pair = CochainPair::new(f, g)?;
            let d1 = cohomology::d_al(&t, &pair)?;
            if fits(d1.f.degree() + 1) {
                let d2 = cohomology::d_al(&t, &d1)?;
                r.push(zero_check("square-zero/f", &d2.f, &basis));
                r.push(zero_check("square-zero/g", &d2.g, &basis));
            }
            let mut o = Map::new();
            o.insert("f".into(), cochain_json(&d1.f, &basis, &out_basis));
            o.insert("g".into(), cochain_json(&d1.g, &basis, &out_basis));
            outcome_output = Some(Value::Object(o));
        }
        CohomOp::Nr => {
            let f = need(cochain, "--cochain")?;
            let g = need(cochain2, "--cochain2")?;
            let fg = cohomology::nr_bracket(f, g)?;
            let gf = cohomology::nr_bracket(g, f)?;
            let (p, q) = (f.degree(), g.degree());
            let sign = if ((p - 1) * (q - 1)) % 2 == 0 { -1 } else { 1 };
            r.push(compare_cochains(
                "graded-antisymmetry",
                &fg,
                &gf.scale(&Rational::from_integer(sign.into())),
                &basis,
            ));
            outcome_output = Some(cochain_json(&fg, &basis, &out_basis));
        }
        CohomOp::Mc => {
            let eta = match cochain {
                Some(n) => b.cochain(n)?.clone(),
                None => Cochain::bracket(t.algebra()),
            };
            let mut m = cohomology::mc_check(&eta, &basis)?;
            m.subject.clear();
            r.absorb("", m);
        }
    }
    let mut o = Outcome::new(r);
    o.output = outcome_output;
    Ok(o)
}

fn cohom_name(op: CohomOp) -> &'static str {
    match op {
        CohomOp::Delta => "delta",
        CohomOp::DeltaAo => "delta-ao",
        CohomOp::Xi => "xi",
        CohomOp::Dal => "dal",
        CohomOp::Nr => "nr",
        CohomOp::Mc => "mc",
    }
}

fn cochain_json(c: &Cochain, input: &[String], out: &[String]) -> Value {
    let mut o = Map::new();
    o.insert("degree".into(), Value::from(c.degree()));
    o.insert("values".into(), cochain_value(c, input, out));
    Value::Object(o)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoTermOp {
    Check,
    Classify,
    ToCrossed,
    ToCocycle,
}

pub fn two_term(b: &Bundle, op: TwoTermOp) -> Result<Outcome, InputError> {
    let Some(TwoTermData { structure: t, avg, morphism }) = &b.two_term else {
        return missing("two_term");
    };
    let need_avg = || avg.as_ref().ok_or_else(|| InputError::Missing("two_term has no p0/p1".into()));
    match op {
        TwoTermOp::Check => {
            let mut r = Report::new("2-term structure");
            r.absorb("", t.check_2term()?);
            if let Some(p) = avg {
                r.absorb("", t.check_homotopy_avg(p)?);
            }
            if let Some(m) = morphism {
                r.absorb("morphism", t.check_morphism(t, m)?);
            }
            Ok(Outcome::new(r))
        }
        TwoTermOp::Classify => {
            let c = t.classify(need_avg()?);
            let labels = c.labels();
            let mut r = Report::new("2-term classification");
            r.note(if labels.is_empty() { "general".to_string() } else { labels.join(", ") });
            let mut o = Outcome::new(r);
            o.output = Some(Value::Array(labels.into_iter().map(Value::from).collect()));
            Ok(o)
        }
        TwoTermOp::ToCrossed => {
            let c = strict_to_crossed(t, need_avg()?)?;
            let mut o = Outcome::new(c.check()?);
            o.emit = Some(Bundle { crossed: Some(c), ..Bundle::default() });
            Ok(o)
        }
        TwoTermOp::ToCocycle => {
            let (triple, pair) = skeletal_to_cocycle(t, need_avg()?)?;
            let basis = triple.algebra().basis.clone();
            let mut r = Report::new("3-cocycle of a skeletal structure");
            if pair.f.degree() < MAX_DEGREE {
                let d = cohomology::d_al(&triple, &pair)?;
                r.push(zero_check("closed/f", &d.f, &basis));
                r.push(zero_check("closed/g", &d.g, &basis));
            }
            let mut o = Outcome::new(r);
            let mut cochains = indexmap::IndexMap::new();
            cochains.insert("f".to_string(), pair.f);
            cochains.insert("g".to_string(), pair.g);
            o.emit = Some(Bundle {
                algebra: Some(triple.algebra().clone()),
                operator: Some(triple.operator.clone()),
                rep: Some(RepData {
                    rep: triple.rep.clone(),
                    phi: Some(triple.phi.clone()),
                    operator: Some(triple.operator.clone()),
                }),
                cochains,
                ..Bundle::default()
            });
            Ok(o)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossedOp {
    Check,
    DirectSum,
    ToStrict,
}

pub fn crossed(b: &Bundle, op: CrossedOp) -> Result<Outcome, InputError> {
    let Some(c) = &b.crossed else {
        return missing("crossed");
    };
    match op {
        CrossedOp::Check => Ok(Outcome::new(c.check()?)),
        CrossedOp::DirectSum => {
            let (alg, p) = c.direct_sum()?;
            let mut r = Report::new(alg.name.clone());
            r.absorb("", alg.check_axioms());
            r.absorb("", alg.check_averaging(&p)?);
            let mut o = Outcome::new(r);
            o.emit = Some(Bundle { algebra: Some(alg), operator: Some(p), ..Bundle::default() });
            Ok(o)
        }
        CrossedOp::ToStrict => {
            let (t, p) = crossed_to_strict(c)?;
            let mut r = Report::new("strict 2-term structure");
            r.absorb("", t.check_2term()?);
            r.absorb("", t.check_homotopy_avg(&p)?);
            let mut o = Outcome::new(r);
            o.emit = Some(Bundle {
                two_term: Some(TwoTermData { structure: t, avg: Some(p), morphism: None }),
                ..Bundle::default()
            });
            Ok(o)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtOp {
    CheckCocycle,
    Build,
    Extract,
    Equiv,
}

fn need_cocycle(b: &Bundle) -> Result<&NonAbCocycle, InputError> {
    b.cocycle.as_ref().ok_or_else(|| InputError::Missing("bundle has no \"cocycle\"".into()))
}

fn need_extension(b: &Bundle) -> Result<Extension, InputError> {
    match (&b.extension, &b.cocycle) {
        (Some(e), _) => Ok(e.clone()),
        (None, Some(c)) => Ok(build_extension(c)?),
        _ => missing("extension"),
    }
}

fn base_bundle(base: &AveragingAlgebra) -> Bundle {
    Bundle { algebra: Some(base.algebra.clone()), operator: Some(base.operator.clone()), ..Bundle::default() }
}

pub fn ext(b: &Bundle, op: ExtOp, tau: Option<&str>) -> Result<Outcome, InputError> {
    match op {
        ExtOp::CheckCocycle => Ok(Outcome::new(need_cocycle(b)?.check())),
        ExtOp::Build => {
            let e = build_extension(need_cocycle(b)?)?;
            let mut o = Outcome::new(e.check()?);
            o.emit = Some(Bundle { extension: Some(e.clone()), ..base_bundle(&e.base) });
            Ok(o)
        }
        ExtOp::Extract => {
            let Some(e) = &b.extension else {
                return missing("extension");
            };
            let c = extract_cocycle(e)?;
            let mut o = Outcome::new(c.check());
            o.emit = Some(Bundle { cocycle: Some(c), ..base_bundle(&e.base) });
            Ok(o)
        }
        ExtOp::Equiv => {
            let c = need_cocycle(b)?;
            let Some(e) = &b.extension else {
                return missing("extension");
            };
            let tau = match tau {
                Some(n) => b.map(n)?.clone(),
                None => return Err(InputError::Missing("--tau NAME is required".into())),
            };
            let c2 = extract_cocycle(e)?;
            Ok(Outcome::new(check_equivalence(c, &c2, &tau)?))
        }
    }
}

pub fn wells(
    b: &Bundle,
    alpha: Option<&str>,
    beta: Option<&str>,
    gamma: Option<&str>,
    tau: Option<&str>,
) -> Result<Outcome, InputError> {
    let e = need_extension(b)?;
    let (ap, derived_tau) = match (alpha, beta, gamma) {
        (_, _, Some(g)) => {
            let g = b.map(g)?;
            (pi_restrict(&e, g)?, Some(wells_tau(&e, g)?))
        }
        (Some(a), Some(bn), None) => (AutPair { alpha: b.map(a)?.clone(), beta: b.map(bn)?.clone() }, None),
        (None, None, None) => match &b.aut_pair {
            Some(ap) => (ap.clone(), None),
            None => return Err(InputError::Missing("give --alpha and --beta, --gamma, or an \"aut_pair\"".into())),
        },
        _ => return Err(InputError::Missing("--alpha and --beta must be given together".into())),
    };
    let tau = match (tau, derived_tau) {
        (Some(n), _) => b.map(n)?.clone(),
        (None, Some(t)) => t,
        (None, None) => ConformalMap::zero(e.fiber.rank(), e.base.rank()),
    };
    let mut o = Outcome::new(wells_verify(&ap, &e, &tau)?);
    let mut out = Map::new();
    out.insert("alpha".into(), matrix_value(&ap.alpha));
    out.insert("beta".into(), matrix_value(&ap.beta));
    out.insert("tau".into(), matrix_value(&tau));
    o.output = Some(Value::Object(out));
    Ok(o)
}

pub fn solve_tau(b: &Bundle, cap: usize) -> Result<Outcome, InputError> {
    let c = need_cocycle(b)?;
    let Some(e) = &b.extension else {
        return missing("extension");
    };
    let c2 = extract_cocycle(e)?;
    let found = tau_solve_abelian(c, &c2, cap)?;
    let mut r = Report::new(format!("witness search up to d^{cap}"));
    let mut o = match found {
        Some(tau) => {
            r.absorb("", check_equivalence(c, &c2, &tau)?);
            let mut o = Outcome::new(r);
            o.output = Some(matrix_value(&tau));
            o
        }
        None => {
            r.note(format!("no witness with entries of degree at most {cap}"));
            let mut o = Outcome::new(r);
            o.passed = Some(false);
            o
        }
    };
    if o.output.is_none() {
        o.output = Some(Value::Null);
    }
    Ok(o)
}

/// Human summary: the report, then any output in canonical JSON.
fn verdict(passed: bool) -> &'static str {
    if passed {
        "holds"
    } else {
        "fails"
    }
}

pub fn summary(o: &Outcome) -> String {
    let mut s = o.report.to_string();
    if o.passed.is_some() && o.passed() != o.report.passed() {
        s = s.replacen(": PASS", ": FAIL", 1);
    }
    if let Some(out) = &o.output {
        if !out.is_null() {
            s.push_str(&crate::json::to_canonical(out));
        }
    }
    s
}
