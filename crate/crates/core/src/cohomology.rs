//! Cochains, the differentials δ, ∂_AO and d_AL, the chain map ξ, and the
//! circle product with its Nijenhuis-Richardson bracket.

use crate::conformal::{ConformalMap, LambdaTable, LieConformalAlgebra};
use crate::error::{ensure, Error, Result};
use crate::report::{CheckResult, Report};
use crate::representations::{AvgRepTriple, ConformalRep};
use crate::scalar::Scalar;
use crate::symalg::{dagger, first_slot, last_slot, ModElem, Poly, Var};

/// Largest degree a cochain may have. Degree p values use `L1..L_{p-1}`.
pub const MAX_DEGREE: usize = 5;
/// Largest degree accepted by the exhaustive permutation checks.
pub const MAX_CHECK_DEGREE: usize = 4;

/// A p-cochain given on basis tuples of an algebra of rank `in_rank`,
/// valued in a module of rank `out_rank`. Values use `D, L1..L_{p-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<C> {
    degree: usize,
    in_rank: usize,
    out_rank: usize,
    values: Vec<ModElem<C>>,
}

impl<C: Scalar> Cochain<C> {
    pub fn new(degree: usize, in_rank: usize, out_rank: usize, values: Vec<ModElem<C>>) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::UnsupportedDegree { degree, context: format!("cochains have degree 1..={MAX_DEGREE}") });
        }
        ensure(values.len() == in_rank.pow(degree as u32), || {
            format!("{} values for a degree {degree} cochain on rank {in_rank}", values.len())
        })?;
        for v in &values {
            ensure(v.rank() == out_rank, || format!("cochain value of rank {} != {out_rank}", v.rank()))?;
            if !v.uses_at_most(degree - 1) {
                return Err(Error::VariableBound(format!(
                    "degree {degree} cochain value {v} uses variables beyond l{}",
                    degree - 1
                )));
            }
        }
        Ok(Cochain { degree, in_rank, out_rank, values })
    }

    pub fn from_fn(degree: usize, in_rank: usize, out_rank: usize, f: impl Fn(&[usize]) -> ModElem<C>) -> Result<Self> {
        let values = tuples(degree, in_rank).map(|t| f(&t)).collect();
        Self::new(degree, in_rank, out_rank, values)
    }

    pub fn zero(degree: usize, in_rank: usize, out_rank: usize) -> Self {
        Self::from_fn(degree, in_rank, out_rank, |_| ModElem::zero(out_rank)).expect("zero cochain")
    }

    /// Degree 1 cochain from a map (column i is the value at e_i).
    pub fn from_map(m: &ConformalMap<C>) -> Self {
        Self::from_fn(1, m.cols(), m.rows(), |t| m.column(t[0])).expect("maps are degree 1 cochains")
    }

    /// Degree 2 cochain from a two-slot table.
    pub fn from_table(t: &LambdaTable<C>) -> Result<Self> {
        ensure(t.left() == t.right(), || "two-slot table with different argument ranks".into())?;
        Self::from_fn(2, t.left(), t.out(), |k| t.get(k[0], k[1]).clone())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_map(&ConformalMap::identity(n))
    }

    /// The bracket of an algebra as a 2-cochain with adjoint coefficients.
    pub fn bracket(a: &LieConformalAlgebra<C>) -> Self {
        Self::from_table(&a.table).expect("square table")
    }

    pub fn to_map(&self) -> Result<ConformalMap<C>> {
        if self.degree != 1 {
            return Err(Error::UnsupportedDegree { degree: self.degree, context: "only 1-cochains are maps".into() });
        }
        let (n, m) = (self.in_rank, self.out_rank);
        ConformalMap::new(
            m,
            n,
            (0..m).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| self.values[c].coord(r).clone()).collect(),
        )
    }

    pub fn to_table(&self) -> Result<LambdaTable<C>> {
        if self.degree != 2 {
            return Err(Error::UnsupportedDegree { degree: self.degree, context: "only 2-cochains are tables".into() });
        }
        LambdaTable::new(self.in_rank, self.in_rank, self.out_rank, self.values.clone())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn in_rank(&self) -> usize {
        self.in_rank
    }

    pub fn out_rank(&self) -> usize {
        self.out_rank
    }

    pub fn values(&self) -> &[ModElem<C>] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(ModElem::is_zero)
    }

    fn index(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &i| acc * self.in_rank + i)
    }

    pub fn value(&self, t: &[usize]) -> &ModElem<C> {
        assert_eq!(t.len(), self.degree, "tuple length");
        &self.values[self.index(t)]
    }

    /// Iterates over (tuple, value) in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &ModElem<C>)> {
        tuples(self.degree, self.in_rank).zip(self.values.iter())
    }

    fn same_shape(&self, other: &Cochain<C>) -> Result<()> {
        ensure(self.degree == other.degree && self.in_rank == other.in_rank && self.out_rank == other.out_rank, || {
            "cochain shapes differ".into()
        })
    }

    pub fn add(&self, other: &Cochain<C>) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Cochain { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(), ..self.clone() })
    }

    pub fn sub(&self, other: &Cochain<C>) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Cochain { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(), ..self.clone() })
    }

    pub fn scale(&self, c: &C) -> Self {
        Cochain { values: self.values.iter().map(|v| v.scale_const(c)).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    /// Applies a module map to every value.
    pub fn post_compose(&self, m: &ConformalMap<C>) -> Result<Self> {
        ensure(m.cols() == self.out_rank, || "map does not accept cochain values".into())?;
        Ok(Cochain { out_rank: m.rows(), values: self.values.iter().map(|v| m.apply(v)).collect(), ..self.clone() })
    }

    /// Value at basis tuple `t` with `L_k ↦ lams[k-1]`.
    pub fn eval_basis(&self, t: &[usize], lams: &[Poly<C>]) -> ModElem<C> {
        let v = self.value(t);
        let bindings = lambda_bindings(lams);
        if bindings.is_empty() {
            v.clone()
        } else {
            v.subst(&bindings)
        }
    }

    /// `f_{lams}(args)`: argument k < p has its coefficients shifted by
    /// `D ↦ -lams[k]`, the last by `D ↦ D + Σ lams`. The spectral
    /// polynomials may contain `D`, meaning ∂ on the value.
    pub fn eval(&self, args: &[ModElem<C>], lams: &[Poly<C>]) -> ModElem<C> {
        let p = self.degree;
        assert_eq!(args.len(), p, "argument count");
        assert_eq!(lams.len(), p - 1, "spectral parameter count");
        let mut total = Poly::zero();
        for l in lams {
            total += l;
        }
        let mut slots: Vec<Vec<(usize, Poly<C>)>> = Vec::with_capacity(p);
        for (k, a) in args.iter().enumerate() {
            assert_eq!(a.rank(), self.in_rank, "argument rank");
            let coeffs = if k + 1 < p {
                a.nonzero().map(|(i, c)| (i, first_slot(c, &lams[k]))).collect()
            } else {
                a.nonzero().map(|(i, c)| (i, last_slot(c, &total))).collect()
            };
            slots.push(coeffs);
        }
        let bindings = lambda_bindings(lams);
        let mut out = ModElem::zero(self.out_rank);
        let mut idx = vec![0usize; p];
        let mut coeff = vec![Poly::one(); p + 1];
        self.eval_rec(0, &slots, &bindings, &mut idx, &mut coeff, &mut out);
        out
    }

    fn eval_rec(
        &self,
        k: usize,
        slots: &[Vec<(usize, Poly<C>)>],
        bindings: &[(Var, Poly<C>)],
        idx: &mut Vec<usize>,
        coeff: &mut Vec<Poly<C>>,
        out: &mut ModElem<C>,
    ) {
        if k == slots.len() {
            let v = self.value(idx);
            if v.is_zero() {
                return;
            }
            let v = if bindings.is_empty() { v.clone() } else { v.subst(bindings) };
            *out += &v.scale(&coeff[k]);
            return;
        }
        for (i, c) in &slots[k] {
            idx[k] = *i;
            coeff[k + 1] = &coeff[k] * c;
            self.eval_rec(k + 1, slots, bindings, idx, coeff, out);
        }
    }

    /// Twisted skew-symmetry under all of `S_p`.
    pub fn check_cochain(&self, basis: &[String]) -> Result<Report<C>> {
        let p = self.degree;
        if p > MAX_CHECK_DEGREE {
            return Err(Error::UnsupportedDegree {
                degree: p,
                context: format!("skew checks need p <= {MAX_CHECK_DEGREE}"),
            });
        }
        let mut report = Report::new(format!("degree {p} cochain"));
        let mut c = CheckResult::new("conformal-skew");
        let perms = permutations(p);
        for (t, v) in self.iter() {
            for (perm, sign) in &perms {
                let rhs = self.permuted(&t, perm, *sign);
                if *v != rhs {
                    let names: Vec<&str> = t.iter().map(|&i| basis[i].as_str()).collect();
                    c.compare(&names, v.clone(), rhs);
                    break;
                }
            }
        }
        report.push(c);
        Ok(report)
    }

    /// `sign · f_{λ_τ(1)..λ_τ(p-1)}(x_τ(1)..x_τ(p))` with `λ_p = -D - Σ λ`.
    fn permuted(&self, t: &[usize], perm: &[usize], sign: i64) -> ModElem<C> {
        let p = self.degree;
        let full = full_lambdas::<C>(p - 1);
        let pt: Vec<usize> = perm.iter().map(|&k| t[k]).collect();
        let lams: Vec<Poly<C>> = perm[..p - 1].iter().map(|&k| full[k].clone()).collect();
        let v = self.eval_basis(&pt, &lams);
        if sign < 0 {
            -&v
        } else {
            v
        }
    }

    /// `(1/p!) Σ_τ sign(τ) τ·raw`, verified afterwards.
    pub fn skew_symmetrize(raw: &Cochain<C>, basis: &[String]) -> Result<Self> {
        let p = raw.degree;
        if p > MAX_CHECK_DEGREE {
            return Err(Error::UnsupportedDegree {
                degree: p,
                context: format!("symmetrization needs p <= {MAX_CHECK_DEGREE}"),
            });
        }
        let perms = permutations(p);
        let inv = C::one() / C::int(perms.len() as i64);
        let out = Self::from_fn(p, raw.in_rank, raw.out_rank, |t| {
            let mut acc = ModElem::zero(raw.out_rank);
            for (perm, sign) in &perms {
                acc += &raw.permuted(t, perm, *sign);
            }
            acc.scale_const(&inv)
        })?;
        if !out.check_cochain(basis)?.passed() {
            return Err(Error::Invalid("twisted antisymmetrization is inconsistent on this input".into()));
        }
        Ok(out)
    }
}

/// `(L_k ↦ lams[k-1])`, omitting the trivial bindings.
fn lambda_bindings<C: Scalar>(lams: &[Poly<C>]) -> Vec<(Var, Poly<C>)> {
    lams.iter()
        .enumerate()
        .filter(|(k, l)| **l != Poly::lambda(k + 1))
        .map(|(k, l)| (Var::lambda(k + 1), l.clone()))
        .collect()
}

/// `[L1, .., Lk, -D - L1 - .. - Lk]`.
pub fn full_lambdas<C: Scalar>(k: usize) -> Vec<Poly<C>> {
    let mut v: Vec<Poly<C>> = (1..=k).map(Poly::lambda).collect();
    v.push(dagger(1..=k));
    v
}

/// All tuples in `0..n` of length p, lexicographic.
pub fn tuples(p: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(p as u32);
    (0..total).map(move |mut k| {
        let mut t = vec![0; p];
        for slot in t.iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        t
    })
}

/// All permutations of `0..p` with their signs, lexicographic.
pub fn permutations(p: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i64)>) {
        let p = used.len();
        if prefix.len() == p {
            out.push((prefix.clone(), perm_sign(prefix)));
            return;
        }
        for i in 0..p {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; p], &mut out);
    out
}

pub fn perm_sign(perm: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn sign_scale<C: Scalar>(v: ModElem<C>, sign: i64) -> ModElem<C> {
    if sign < 0 {
        -&v
    } else {
        v
    }
}

/// Coboundary of `f` with coefficients in `rep`.
pub fn delta<C: Scalar>(rep: &ConformalRep<C>, f: &Cochain<C>) -> Result<Cochain<C>> {
    let a = &rep.algebra;
    let n = a.rank();
    ensure(f.in_rank == n && f.out_rank == rep.module_rank(), || "cochain does not match the representation".into())?;
    let p = f.degree;
    if p + 1 > MAX_DEGREE {
        return Err(Error::UnsupportedDegree { degree: p, context: format!("delta needs p < {MAX_DEGREE}") });
    }
    let full = full_lambdas::<C>(p);
    Cochain::from_fn(p + 1, n, f.out_rank, |t| {
        let mut acc = ModElem::zero(f.out_rank);
        for i in 0..=p {
            let rest: Vec<usize> = skip(t, &[i]);
            let lams: Vec<Poly<C>> = skip(&full, &[i]).into_iter().take(p - 1).collect();
            let inner = f.eval_basis(&rest, &lams);
            let v = rep.act(&a.basis_elem(t[i]), &inner, &full[i]);
            acc += &sign_scale(v, if i % 2 == 0 { 1 } else { -1 });
        }
        for i in 0..=p {
            for j in i + 1..=p {
                let br = a.bracket(&a.basis_elem(t[i]), &a.basis_elem(t[j]), &full[i]);
                let mut args = vec![br];
                args.extend(skip(t, &[i, j]).into_iter().map(|k| a.basis_elem(k)));
                let mut lams = vec![&full[i] + &full[j]];
                lams.extend(skip(&full, &[i, j]));
                lams.truncate(p - 1);
                let v = f.eval(&args, &lams);
                acc += &sign_scale(v, if (i + j) % 2 == 0 { 1 } else { -1 });
            }
        }
        acc
    })
}

fn skip<T: Clone>(v: &[T], drop: &[usize]) -> Vec<T> {
    v.iter().enumerate().filter(|(k, _)| !drop.contains(k)).map(|(_, x)| x.clone()).collect()
}

/// The representation `ρ∘P` of the induced algebra `[P x_λ y]`.
pub fn induced_rep<C: Scalar>(t: &AvgRepTriple<C>) -> Result<ConformalRep<C>> {
    let a = t.algebra();
    let induced = a.induced_bracket(&t.operator)?;
    let m = t.rep.module_rank();
    let l1 = Poly::lambda(1);
    let action =
        LambdaTable::from_fn(a.rank(), m, m, |i, k| t.rep.act(&t.operator.column(i), &ModElem::basis(m, k), &l1));
    ConformalRep::new(induced, t.rep.module_basis.clone(), action)
}

/// The averaging-operator coboundary: δ for `[P x_λ y]` acting by `ρ(P x)`.
pub fn delta_ao<C: Scalar>(t: &AvgRepTriple<C>, g: &Cochain<C>) -> Result<Cochain<C>> {
    delta(&induced_rep(t)?, g)
}

/// `ξf(x1..xp) = f(Px1..Pxp) - φ f(Px1, x2..xp)`.
pub fn xi<C: Scalar>(t: &AvgRepTriple<C>, f: &Cochain<C>) -> Result<Cochain<C>> {
    let a = t.algebra();
    let n = a.rank();
    ensure(f.in_rank == n && f.out_rank == t.rep.module_rank(), || "cochain does not match the representation".into())?;
    let p = f.degree;
    let lams: Vec<Poly<C>> = (1..p).map(Poly::lambda).collect();
    let pcols: Vec<ModElem<C>> = (0..n).map(|i| t.operator.column(i)).collect();
    Cochain::from_fn(p, n, f.out_rank, |tu| {
        let all: Vec<ModElem<C>> = tu.iter().map(|&i| pcols[i].clone()).collect();
        let mut first: Vec<ModElem<C>> = tu.iter().map(|&i| a.basis_elem(i)).collect();
        first[0] = pcols[tu[0]].clone();
        &f.eval(&all, &lams) - &t.phi.apply(&f.eval(&first, &lams))
    })
}

/// A cochain of the mapping cone: `f` of degree p, `g` of degree p-1.
#[derive(Clone, Debug, PartialEq)]
pub struct CochainPair<C> {
    pub f: Cochain<C>,
    pub g: Cochain<C>,
}

impl<C: Scalar> CochainPair<C> {
    pub fn new(f: Cochain<C>, g: Cochain<C>) -> Result<Self> {
        if f.degree < 2 || g.degree + 1 != f.degree {
            return Err(Error::UnsupportedDegree {
                degree: f.degree,
                context: "pairs need deg f >= 2 and deg g = deg f - 1".into(),
            });
        }
        ensure(f.in_rank == g.in_rank && f.out_rank == g.out_rank, || "pair components disagree in rank".into())?;
        Ok(CochainPair { f, g })
    }

    pub fn zero(degree: usize, in_rank: usize, out_rank: usize) -> Result<Self> {
        if degree < 2 {
            return Err(Error::UnsupportedDegree { degree, context: "pairs need degree >= 2".into() });
        }
        Self::new(Cochain::zero(degree, in_rank, out_rank), Cochain::zero(degree - 1, in_rank, out_rank))
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }

    pub fn add(&self, other: &CochainPair<C>) -> Result<Self> {
        Ok(CochainPair { f: self.f.add(&other.f)?, g: self.g.add(&other.g)? })
    }
}

/// `d_AL(f, g) = (δf, -ξf - ∂_AO g)`.
pub fn d_al<C: Scalar>(t: &AvgRepTriple<C>, pair: &CochainPair<C>) -> Result<CochainPair<C>> {
    let df = delta(&t.rep, &pair.f)?;
    let xf = xi(t, &pair.f)?;
    let dg = delta_ao(t, &pair.g)?;
    CochainPair::new(df, xf.neg().sub(&dg)?)
}

/// Circle product over `(q, p-1)`-shuffles, adjoint coefficients.
pub fn circle<C: Scalar>(f: &Cochain<C>, g: &Cochain<C>) -> Result<Cochain<C>> {
    let n = f.in_rank;
    ensure(f.out_rank == n && g.in_rank == n && g.out_rank == n, || {
        "circle product needs adjoint coefficients of equal rank".into()
    })?;
    let (p, q) = (f.degree, g.degree);
    let total = p + q - 1;
    if total > MAX_DEGREE {
        return Err(Error::UnsupportedDegree { degree: total, context: format!("circle output exceeds {MAX_DEGREE}") });
    }
    let full = full_lambdas::<C>(total - 1);
    let shuffles = shuffles(q, total);
    Cochain::from_fn(total, n, n, |t| {
        let mut acc = ModElem::zero(n);
        for (s, rest, sign) in &shuffles {
            let gt: Vec<usize> = s.iter().map(|&k| t[k]).collect();
            let glams: Vec<Poly<C>> = s[..q - 1].iter().map(|&k| full[k].clone()).collect();
            let gv = g.eval_basis(&gt, &glams);
            if gv.is_zero() {
                continue;
            }
            let mut lam = Poly::zero();
            for &k in s {
                lam += &full[k];
            }
            let mut args = vec![gv];
            args.extend(rest.iter().map(|&k| ModElem::basis(n, t[k])));
            let mut flams = vec![lam];
            flams.extend(rest.iter().map(|&k| full[k].clone()));
            flams.truncate(p - 1);
            acc += &sign_scale(f.eval(&args, &flams), *sign);
        }
        acc
    })
}

/// `(S, complement, sign)` for increasing q-subsets S of `0..total`.
fn shuffles(q: usize, total: usize) -> Vec<(Vec<usize>, Vec<usize>, i64)> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != q {
            continue;
        }
        let s: Vec<usize> = (0..total).filter(|k| mask & (1 << k) != 0).collect();
        let rest: Vec<usize> = (0..total).filter(|k| mask & (1 << k) == 0).collect();
        let perm: Vec<usize> = s.iter().chain(rest.iter()).copied().collect();
        out.push((s, rest, perm_sign(&perm)));
    }
    out.sort();
    out
}

/// `[f, g] = f⊙g - (-1)^{(p-1)(q-1)} g⊙f`.
pub fn nr_bracket<C: Scalar>(f: &Cochain<C>, g: &Cochain<C>) -> Result<Cochain<C>> {
    let fg = circle(f, g)?;
    let gf = circle(g, f)?;
    if ((f.degree - 1) * (g.degree - 1)).is_multiple_of(2) {
        fg.sub(&gf)
    } else {
        fg.add(&gf)
    }
}

/// `[η, η] = 0`.
pub fn mc_check<C: Scalar>(eta: &Cochain<C>, basis: &[String]) -> Result<Report<C>> {
    if eta.degree != 2 {
        return Err(Error::UnsupportedDegree {
            degree: eta.degree,
            context: "Maurer-Cartan elements have degree 2".into(),
        });
    }
    let sq = nr_bracket(eta, eta)?;
    let mut report = Report::new("Maurer-Cartan");
    let mut c = CheckResult::new("maurer-cartan");
    for (t, v) in sq.iter() {
        let names: Vec<&str> = t.iter().map(|&i| basis[i].as_str()).collect();
        c.expect_zero(&names, v.clone());
    }
    report.push(c);
    Ok(report)
}

/// `d_η(g) = [η, g]`.
pub fn d_eta<C: Scalar>(eta: &Cochain<C>, g: &Cochain<C>) -> Result<Cochain<C>> {
    nr_bracket(eta, g)
}
