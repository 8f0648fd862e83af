//! JSON bundles: a single document holding every structure a command may
//! need, with expressions as strings.

use std::path::Path;

use indexmap::IndexMap;
use lca_core::cohomology::tuples;
use lca_core::{
    AutPair, AveragingAlgebra, AvgRepTriple, Cochain, ConformalMap, ConformalRep, CrossedModule, Extension,
    HomotopyAvg, LambdaTable, LieConformalAlgebra, ModElem, NonAbCocycle, TwoTermLinf, TwoTermMorphism,
};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::expr::{elem_to_strings, max_lambda, parse_elem, parse_poly, poly_to_string, ExprError};

pub const FORMAT: u64 = 1;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("{0}")]
    Core(#[from] lca_core::Error),
    #[error("{0}")]
    Missing(String),
}

fn schema<T>(path: &str, msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError::Schema { path: path.to_string(), msg: msg.into() })
}

fn core_at<T>(path: &str, r: lca_core::Result<T>) -> Result<T, InputError> {
    r.map_err(|e| InputError::Schema { path: path.to_string(), msg: e.to_string() })
}

fn expr_at<T>(path: &str, r: Result<T, ExprError>) -> Result<T, InputError> {
    r.map_err(|e| InputError::Schema { path: path.to_string(), msg: e.to_string() })
}

/// Rep plus the optional operator data making it an averaging triple.
#[derive(Clone, Debug, PartialEq)]
pub struct RepData {
    pub rep: ConformalRep,
    pub phi: Option<ConformalMap>,
    pub operator: Option<ConformalMap>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoTermData {
    pub structure: TwoTermLinf,
    pub avg: Option<HomotopyAvg>,
    /// Self-morphism to check against H1-H5.
    pub morphism: Option<TwoTermMorphism>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Bundle {
    pub algebra: Option<LieConformalAlgebra>,
    pub operator: Option<ConformalMap>,
    pub maps: IndexMap<String, ConformalMap>,
    pub rep: Option<RepData>,
    pub cochains: IndexMap<String, Cochain>,
    pub two_term: Option<TwoTermData>,
    pub crossed: Option<CrossedModule>,
    pub cocycle: Option<NonAbCocycle>,
    pub extension: Option<Extension>,
    pub aut_pair: Option<AutPair>,
}

const TOP_KEYS: &[&str] =
    &["format", "algebra", "maps", "rep", "cochains", "two_term", "crossed", "cocycle", "extension", "aut_pair"];

struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, path: &str, allowed: &[&str]) -> Result<Self, InputError> {
        let Some(map) = v.as_object() else {
            return schema(path, "expected an object");
        };
        for k in map.keys() {
            if !allowed.contains(&k.as_str()) {
                return schema(&format!("{path}.{k}"), "unknown key");
            }
        }
        Ok(Obj { map, path: path.to_string() })
    }

    fn sub(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn opt(&self, key: &str) -> Option<(&'a Value, String)> {
        self.map.get(key).map(|v| (v, self.sub(key)))
    }

    fn req(&self, key: &str) -> Result<(&'a Value, String), InputError> {
        match self.opt(key) {
            Some(x) => Ok(x),
            None => schema(&self.sub(key), "missing key"),
        }
    }
}

fn string(v: &Value, path: &str) -> Result<String, InputError> {
    match v.as_str() {
        Some(s) => Ok(s.to_string()),
        None => schema(path, "expected a string"),
    }
}

fn basis_list(v: &Value, path: &str) -> Result<Vec<String>, InputError> {
    let Some(arr) = v.as_array() else {
        return schema(path, "expected an array of basis symbols");
    };
    let mut out: Vec<String> = Vec::with_capacity(arr.len());
    for (i, x) in arr.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let s = string(x, &p)?;
        let ok = s.chars().next().is_some_and(|c| c.is_ascii_uppercase())
            && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
        if !ok {
            return schema(&p, format!("'{s}' is not an uppercase-initial identifier"));
        }
        if out.contains(&s) {
            return schema(&p, format!("duplicate basis symbol '{s}'"));
        }
        out.push(s);
    }
    Ok(out)
}

/// Rows of `d`-only polynomial strings.
fn matrix(v: &Value, path: &str, rows: usize, cols: usize) -> Result<ConformalMap, InputError> {
    let Some(arr) = v.as_array() else {
        return schema(path, "expected an array of rows");
    };
    if arr.len() != rows {
        return schema(path, format!("expected {rows} rows, found {}", arr.len()));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (r, row) in arr.iter().enumerate() {
        let rp = format!("{path}[{r}]");
        let Some(row) = row.as_array() else {
            return schema(&rp, "expected a row array");
        };
        if row.len() != cols {
            return schema(&rp, format!("expected {cols} entries, found {}", row.len()));
        }
        for (c, e) in row.iter().enumerate() {
            let ep = format!("{rp}[{c}]");
            let p = expr_at(&ep, parse_poly(&string(e, &ep)?))?;
            if max_lambda(&p) > 0 {
                return schema(&ep, "map entries may only use d");
            }
            entries.push(p);
        }
    }
    core_at(path, ConformalMap::new(rows, cols, entries))
}

/// Unknown-rank matrix: row count from the array, column count from the
/// first row.
fn matrix_any(v: &Value, path: &str) -> Result<ConformalMap, InputError> {
    let rows = v.as_array().map(|a| a.len()).unwrap_or(0);
    let cols = v.as_array().and_then(|a| a.first()).and_then(|r| r.as_array()).map(|r| r.len()).unwrap_or(0);
    matrix(v, path, rows, cols)
}

/// Sum of module-element strings.
fn element(v: &Value, path: &str, basis: &[String], max_lam: usize) -> Result<ModElem, InputError> {
    let Some(arr) = v.as_array() else {
        return schema(path, "expected an array of expressions");
    };
    let mut out = ModElem::zero(basis.len());
    for (i, x) in arr.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let e = expr_at(&p, parse_elem(&string(x, &p)?, basis))?;
        if let Some(k) = e.coords().iter().map(max_lambda).max() {
            if k > max_lam {
                return schema(&p, format!("uses l{k}, only l1..l{max_lam} allowed here"));
            }
        }
        out += &e;
    }
    Ok(out)
}

/// `{"A,B,..": [..]}` keyed by basis symbols; missing keys are zero.
fn tuple_map(
    v: &Value,
    path: &str,
    arg_bases: &[&[String]],
    out: &[String],
    max_lam: usize,
) -> Result<IndexMap<Vec<usize>, ModElem>, InputError> {
    let Some(map) = v.as_object() else {
        return schema(path, "expected an object keyed by basis tuples");
    };
    let mut entries = IndexMap::new();
    for (key, val) in map {
        let kp = format!("{path}.{key}");
        let parts: Vec<&str> = key.split(',').map(str::trim).collect();
        if parts.len() != arg_bases.len() {
            return schema(&kp, format!("expected {} comma-separated symbols", arg_bases.len()));
        }
        let mut idx = Vec::with_capacity(parts.len());
        for (s, b) in parts.iter().zip(arg_bases) {
            match b.iter().position(|x| x == s) {
                Some(i) => idx.push(i),
                None => return schema(&kp, format!("unknown basis symbol '{s}'")),
            }
        }
        if entries.contains_key(&idx) {
            return schema(&kp, "duplicate key");
        }
        entries.insert(idx, element(val, &kp, out, max_lam)?);
    }
    Ok(entries)
}

fn table(v: &Value, path: &str, left: &[String], right: &[String], out: &[String]) -> Result<LambdaTable, InputError> {
    let entries = tuple_map(v, path, &[left, right], out, 1)?;
    Ok(LambdaTable::from_fn(left.len(), right.len(), out.len(), |i, j| {
        entries.get(&vec![i, j]).cloned().unwrap_or_else(|| ModElem::zero(out.len()))
    }))
}

fn cochain_values(
    v: &Value,
    path: &str,
    degree: usize,
    input: &[String],
    out: &[String],
) -> Result<Cochain, InputError> {
    if degree == 0 || degree > lca_core::cohomology::MAX_DEGREE {
        return schema(path, format!("degree {degree} outside 1..={}", lca_core::cohomology::MAX_DEGREE));
    }
    let bases: Vec<&[String]> = vec![input; degree];
    let entries = tuple_map(v, path, &bases, out, degree - 1)?;
    core_at(
        path,
        Cochain::from_fn(degree, input.len(), out.len(), |t| {
            entries.get(t).cloned().unwrap_or_else(|| ModElem::zero(out.len()))
        }),
    )
}

fn algebra(v: &Value, path: &str) -> Result<(LieConformalAlgebra, Option<ConformalMap>), InputError> {
    let o = Obj::new(v, path, &["name", "basis", "bracket", "operator"])?;
    let (nv, np) = o.req("name")?;
    let name = string(nv, &np)?;
    let (bv, bp) = o.req("basis")?;
    let basis = basis_list(bv, &bp)?;
    let (tv, tp) = o.req("bracket")?;
    let t = table(tv, &tp, &basis, &basis, &basis)?;
    let n = basis.len();
    let op = match o.opt("operator") {
        Some((v, p)) => Some(matrix(v, &p, n, n)?),
        None => None,
    };
    Ok((core_at(path, LieConformalAlgebra::new(name, basis, t))?, op))
}

fn averaging(v: &Value, path: &str) -> Result<AveragingAlgebra, InputError> {
    let (a, op) = algebra(v, path)?;
    let Some(op) = op else {
        return schema(&format!("{path}.operator"), "missing key");
    };
    core_at(path, AveragingAlgebra::new(a, op))
}

impl Bundle {
    pub fn load(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
        Self::from_str(&text)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self, InputError> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self, InputError> {
        let o = Obj::new(v, "", TOP_KEYS)?;
        let (fv, fp) = o.req("format")?;
        if fv.as_u64() != Some(FORMAT) {
            return schema(&fp, format!("unsupported format, expected {FORMAT}"));
        }
        let mut b = Bundle::default();
        if let Some((v, p)) = o.opt("algebra") {
            let (a, op) = algebra(v, &p)?;
            b.algebra = Some(a);
            b.operator = op;
        }
        if let Some((v, p)) = o.opt("maps") {
            let Some(m) = v.as_object() else {
                return schema(&p, "expected an object of named matrices");
            };
            for (name, mv) in m {
                b.maps.insert(name.clone(), matrix_any(mv, &format!("{p}.{name}"))?);
            }
        }
        if let Some((v, p)) = o.opt("rep") {
            let alg = b.need_algebra(&p)?.clone();
            let r = Obj::new(v, &p, &["basis", "action", "phi", "operator"])?;
            let (bv, bp) = r.req("basis")?;
            let mb = basis_list(bv, &bp)?;
            let (av, ap) = r.req("action")?;
            let action = table(av, &ap, &alg.basis, &mb, &mb)?;
            let (n, m) = (alg.rank(), mb.len());
            let phi = r.opt("phi").map(|(v, p)| matrix(v, &p, m, m)).transpose()?;
            let operator = r.opt("operator").map(|(v, p)| matrix(v, &p, n, n)).transpose()?;
            let rep = core_at(&p, ConformalRep::new(alg, mb, action))?;
            b.rep = Some(RepData { rep, phi, operator });
        }
        if let Some((v, p)) = o.opt("cochains") {
            let Some(m) = v.as_object() else {
                return schema(&p, "expected an object of named cochains");
            };
            let input = b.need_algebra(&p)?.basis.clone();
            let out = b.module_basis().expect("algebra present");
            for (name, cv) in m {
                let cp = format!("{p}.{name}");
                let c = Obj::new(cv, &cp, &["degree", "values"])?;
                let (dv, dp) = c.req("degree")?;
                let Some(degree) = dv.as_u64() else {
                    return schema(&dp, "expected a positive integer");
                };
                let (vv, vp) = c.req("values")?;
                b.cochains.insert(name.clone(), cochain_values(vv, &vp, degree as usize, &input, &out)?);
            }
        }
        if let Some((v, p)) = o.opt("two_term") {
            b.two_term = Some(two_term(v, &p)?);
        }
        if let Some((v, p)) = o.opt("crossed") {
            let c = Obj::new(v, &p, &["upstairs", "downstairs", "d", "action"])?;
            let (uv, up) = c.req("upstairs")?;
            let upstairs = averaging(uv, &up)?;
            let (dv, dp) = c.req("downstairs")?;
            let downstairs = averaging(dv, &dp)?;
            let (mv, mp) = c.req("d")?;
            let d = matrix(mv, &mp, downstairs.rank(), upstairs.rank())?;
            let (av, ap) = c.req("action")?;
            let action = table(av, &ap, &downstairs.algebra.basis, &upstairs.algebra.basis, &upstairs.algebra.basis)?;
            b.crossed = Some(core_at(
                &p,
                CrossedModule::new(
                    upstairs.algebra,
                    upstairs.operator,
                    downstairs.algebra,
                    downstairs.operator,
                    d,
                    action,
                ),
            )?);
        }
        if let Some((v, p)) = o.opt("cocycle") {
            let base = b.base(&p)?;
            let c = Obj::new(v, &p, &["fiber", "chi", "rho", "phi"])?;
            let (fv, fp) = c.req("fiber")?;
            let fiber = averaging(fv, &fp)?;
            let (bb, fb) = (base.algebra.basis.clone(), fiber.algebra.basis.clone());
            let (cv, cp) = c.req("chi")?;
            let chi = table(cv, &cp, &bb, &bb, &fb)?;
            let (rv, rp) = c.req("rho")?;
            let rho = table(rv, &rp, &bb, &fb, &fb)?;
            let (pv, pp) = c.req("phi")?;
            let phi = matrix(pv, &pp, fb.len(), bb.len())?;
            b.cocycle = Some(core_at(&p, NonAbCocycle::new(base, fiber, chi, rho, phi))?);
        }
        if let Some((v, p)) = o.opt("extension") {
            let base = b.base(&p)?;
            let e = Obj::new(v, &p, &["fiber", "total", "inclusion", "projection", "section"])?;
            let (fv, fp) = e.req("fiber")?;
            let fiber = averaging(fv, &fp)?;
            let (tv, tp) = e.req("total")?;
            let total = averaging(tv, &tp)?;
            let (n, h, t) = (base.rank(), fiber.rank(), total.rank());
            let (iv, ip) = e.req("inclusion")?;
            let inclusion = matrix(iv, &ip, t, h)?;
            let (qv, qp) = e.req("projection")?;
            let projection = matrix(qv, &qp, n, t)?;
            let (sv, sp) = e.req("section")?;
            let section = matrix(sv, &sp, t, n)?;
            b.extension = Some(core_at(&p, Extension::new(base, fiber, total, inclusion, projection, section))?);
        }
        if let Some((v, p)) = o.opt("aut_pair") {
            let a = Obj::new(v, &p, &["alpha", "beta"])?;
            let (av, ap) = a.req("alpha")?;
            let (bv, bp) = a.req("beta")?;
            b.aut_pair = Some(AutPair { alpha: matrix_any(av, &ap)?, beta: matrix_any(bv, &bp)? });
        }
        Ok(b)
    }

    fn need_algebra(&self, path: &str) -> Result<&LieConformalAlgebra, InputError> {
        match &self.algebra {
            Some(a) => Ok(a),
            None => schema(path, "requires a top-level \"algebra\""),
        }
    }

    fn base(&self, path: &str) -> Result<AveragingAlgebra, InputError> {
        let a = self.need_algebra(path)?.clone();
        match &self.operator {
            Some(op) => core_at(path, AveragingAlgebra::new(a, op.clone())),
            None => schema(path, "requires \"algebra.operator\""),
        }
    }

    /// Output basis of cochains: the module if a rep is given, otherwise
    /// the algebra itself.
    pub fn module_basis(&self) -> Option<Vec<String>> {
        match (&self.rep, &self.algebra) {
            (Some(r), _) => Some(r.rep.module_basis.clone()),
            (None, Some(a)) => Some(a.basis.clone()),
            _ => None,
        }
    }

    pub fn map(&self, name: &str) -> Result<&ConformalMap, InputError> {
        self.maps.get(name).ok_or_else(|| InputError::Missing(format!("no map named '{name}' in \"maps\"")))
    }

    pub fn cochain(&self, name: &str) -> Result<&Cochain, InputError> {
        self.cochains.get(name).ok_or_else(|| InputError::Missing(format!("no cochain named '{name}' in \"cochains\"")))
    }

    pub fn require_algebra(&self) -> Result<&LieConformalAlgebra, InputError> {
        self.algebra.as_ref().ok_or_else(|| InputError::Missing("bundle has no \"algebra\"".into()))
    }

    /// The averaging triple cohomology commands run over: the bundle's rep
    /// with its `φ` and operator, or the adjoint rep with `φ = P`. `op`
    /// overrides the operator; the default is the identity.
    pub fn triple(&self, op: Option<&ConformalMap>) -> Result<AvgRepTriple, InputError> {
        let a = self.require_algebra()?;
        let n = a.rank();
        let chosen = |fallback: Option<&ConformalMap>| {
            op.or(fallback).or(self.operator.as_ref()).cloned().unwrap_or_else(|| ConformalMap::identity(n))
        };
        Ok(match &self.rep {
            Some(r) => {
                let m = r.rep.module_rank();
                let phi = r.phi.clone().unwrap_or_else(|| ConformalMap::identity(m));
                AvgRepTriple::new(r.rep.clone(), phi, chosen(r.operator.as_ref()))?
            }
            None => AvgRepTriple::adjoint(a, &chosen(None))?,
        })
    }

    pub fn to_value(&self) -> Value {
        let mut top = Map::new();
        top.insert("format".into(), Value::from(FORMAT));
        if let Some(a) = &self.algebra {
            top.insert("algebra".into(), algebra_value(a, self.operator.as_ref()));
        }
        if !self.maps.is_empty() {
            let m: Map<String, Value> = self.maps.iter().map(|(k, v)| (k.clone(), matrix_value(v))).collect();
            top.insert("maps".into(), Value::Object(m));
        }
        if let Some(r) = &self.rep {
            let mut o = Map::new();
            o.insert("basis".into(), strings(&r.rep.module_basis));
            o.insert(
                "action".into(),
                table_value(&r.rep.action, &r.rep.algebra.basis, &r.rep.module_basis, &r.rep.module_basis),
            );
            if let Some(phi) = &r.phi {
                o.insert("phi".into(), matrix_value(phi));
            }
            if let Some(op) = &r.operator {
                o.insert("operator".into(), matrix_value(op));
            }
            top.insert("rep".into(), Value::Object(o));
        }
        if !self.cochains.is_empty() {
            let input = self.algebra.as_ref().map(|a| a.basis.clone()).unwrap_or_default();
            let out = self.module_basis().unwrap_or_default();
            let m: Map<String, Value> = self
                .cochains
                .iter()
                .map(|(k, c)| {
                    let mut o = Map::new();
                    o.insert("degree".into(), Value::from(c.degree()));
                    o.insert("values".into(), cochain_value(c, &input, &out));
                    (k.clone(), Value::Object(o))
                })
                .collect();
            top.insert("cochains".into(), Value::Object(m));
        }
        if let Some(t) = &self.two_term {
            top.insert("two_term".into(), two_term_value(t));
        }
        if let Some(c) = &self.crossed {
            let mut o = Map::new();
            o.insert("upstairs".into(), algebra_value(&c.upstairs, Some(&c.p1)));
            o.insert("downstairs".into(), algebra_value(&c.downstairs, Some(&c.p0)));
            o.insert("d".into(), matrix_value(&c.d));
            o.insert(
                "action".into(),
                table_value(&c.action, &c.downstairs.basis, &c.upstairs.basis, &c.upstairs.basis),
            );
            top.insert("crossed".into(), Value::Object(o));
        }
        if let Some(c) = &self.cocycle {
            let (bb, fb) = (&c.base.algebra.basis, &c.fiber.algebra.basis);
            let mut o = Map::new();
            o.insert("fiber".into(), algebra_value(&c.fiber.algebra, Some(&c.fiber.operator)));
            o.insert("chi".into(), table_value(&c.chi, bb, bb, fb));
            o.insert("rho".into(), table_value(&c.rho, bb, fb, fb));
            o.insert("phi".into(), matrix_value(&c.phi));
            top.insert("cocycle".into(), Value::Object(o));
        }
        if let Some(e) = &self.extension {
            let mut o = Map::new();
            o.insert("fiber".into(), algebra_value(&e.fiber.algebra, Some(&e.fiber.operator)));
            o.insert("total".into(), algebra_value(&e.total.algebra, Some(&e.total.operator)));
            o.insert("inclusion".into(), matrix_value(&e.inclusion));
            o.insert("projection".into(), matrix_value(&e.projection));
            o.insert("section".into(), matrix_value(&e.section));
            top.insert("extension".into(), Value::Object(o));
        }
        if let Some(ap) = &self.aut_pair {
            let mut o = Map::new();
            o.insert("alpha".into(), matrix_value(&ap.alpha));
            o.insert("beta".into(), matrix_value(&ap.beta));
            top.insert("aut_pair".into(), Value::Object(o));
        }
        Value::Object(top)
    }

    /// Canonical text: the byte-exact form corpus files are stored in.
    pub fn to_canonical(&self) -> String {
        crate::json::to_canonical(&self.to_value())
    }
}

fn two_term(v: &Value, path: &str) -> Result<TwoTermData, InputError> {
    let o =
        Obj::new(v, path, &["basis0", "basis1", "d", "bracket00", "bracket01", "l3", "p0", "p1", "p2", "morphism"])?;
    let (bv, bp) = o.req("basis0")?;
    let b0 = basis_list(bv, &bp)?;
    let (bv, bp) = o.req("basis1")?;
    let b1 = basis_list(bv, &bp)?;
    let (n0, n1) = (b0.len(), b1.len());
    let (dv, dp) = o.req("d")?;
    let d = matrix(dv, &dp, n0, n1)?;
    let (tv, tp) = o.req("bracket00")?;
    let bracket00 = table(tv, &tp, &b0, &b0, &b0)?;
    let (tv, tp) = o.req("bracket01")?;
    let bracket01 = table(tv, &tp, &b0, &b1, &b1)?;
    let l3 = match o.opt("l3") {
        Some((v, p)) => cochain_values(v, &p, 3, &b0, &b1)?,
        None => Cochain::zero(3, n0, n1),
    };
    let avg = match (o.opt("p0"), o.opt("p1")) {
        (Some((v0, p0)), Some((v1, p1))) => {
            let p2 = match o.opt("p2") {
                Some((v, p)) => table(v, &p, &b0, &b0, &b1)?,
                None => LambdaTable::zero(n0, n0, n1),
            };
            Some(HomotopyAvg { p0: matrix(v0, &p0, n0, n0)?, p1: matrix(v1, &p1, n1, n1)?, p2 })
        }
        (None, None) => {
            if let Some((_, p)) = o.opt("p2") {
                return schema(&p, "p2 given without p0 and p1");
            }
            None
        }
        _ => return schema(path, "p0 and p1 must be given together"),
    };
    let morphism = match o.opt("morphism") {
        Some((v, p)) => {
            let m = Obj::new(v, &p, &["f0", "f1", "f2"])?;
            let (v0, p0) = m.req("f0")?;
            let (v1, p1) = m.req("f1")?;
            let f2 = match m.opt("f2") {
                Some((v, p)) => table(v, &p, &b0, &b0, &b1)?,
                None => LambdaTable::zero(n0, n0, n1),
            };
            Some(TwoTermMorphism { f0: matrix(v0, &p0, n0, n0)?, f1: matrix(v1, &p1, n1, n1)?, f2 })
        }
        None => None,
    };
    let structure = core_at(path, TwoTermLinf::new(b0, b1, d, bracket00, bracket01, l3))?;
    Ok(TwoTermData { structure, avg, morphism })
}

fn strings(v: &[String]) -> Value {
    Value::Array(v.iter().map(|s| Value::from(s.as_str())).collect())
}

pub fn matrix_value(m: &ConformalMap) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| Value::from(poly_to_string(m.entry(r, c)))).collect()))
            .collect(),
    )
}

pub fn elem_value(v: &ModElem, basis: &[String]) -> Value {
    strings(&elem_to_strings(v, basis))
}

pub fn table_value(t: &LambdaTable, left: &[String], right: &[String], out: &[String]) -> Value {
    let mut o = Map::new();
    for i in 0..t.left() {
        for j in 0..t.right() {
            let v = t.get(i, j);
            if !v.is_zero() {
                o.insert(format!("{},{}", left[i], right[j]), elem_value(v, out));
            }
        }
    }
    Value::Object(o)
}

pub fn cochain_value(c: &Cochain, input: &[String], out: &[String]) -> Value {
    let mut o = Map::new();
    for t in tuples(c.degree(), c.in_rank()) {
        let v = c.value(&t);
        if !v.is_zero() {
            let key: Vec<&str> = t.iter().map(|&i| input[i].as_str()).collect();
            o.insert(key.join(","), elem_value(v, out));
        }
    }
    Value::Object(o)
}

pub fn algebra_value(a: &LieConformalAlgebra, op: Option<&ConformalMap>) -> Value {
    let mut o = Map::new();
    o.insert("name".into(), Value::from(a.name.as_str()));
    o.insert("basis".into(), strings(&a.basis));
    o.insert("bracket".into(), table_value(&a.table, &a.basis, &a.basis, &a.basis));
    if let Some(op) = op {
        o.insert("operator".into(), matrix_value(op));
    }
    Value::Object(o)
}

fn two_term_value(data: &TwoTermData) -> Value {
    let t = &data.structure;
    let (b0, b1) = (&t.basis0, &t.basis1);
    let mut o = Map::new();
    o.insert("basis0".into(), strings(b0));
    o.insert("basis1".into(), strings(b1));
    o.insert("d".into(), matrix_value(&t.d));
    o.insert("bracket00".into(), table_value(&t.bracket00, b0, b0, b0));
    o.insert("bracket01".into(), table_value(&t.bracket01, b0, b1, b1));
    if !t.l3.is_zero() {
        o.insert("l3".into(), cochain_value(&t.l3, b0, b1));
    }
    if let Some(p) = &data.avg {
        o.insert("p0".into(), matrix_value(&p.p0));
        o.insert("p1".into(), matrix_value(&p.p1));
        if !p.p2.is_zero() {
            o.insert("p2".into(), table_value(&p.p2, b0, b0, b1));
        }
    }
    if let Some(m) = &data.morphism {
        let mut mo = Map::new();
        mo.insert("f0".into(), matrix_value(&m.f0));
        mo.insert("f1".into(), matrix_value(&m.f1));
        if !m.f2.is_zero() {
            mo.insert("f2".into(), table_value(&m.f2, b0, b0, b1));
        }
        o.insert("morphism".into(), Value::Object(mo));
    }
    Value::Object(o)
}
