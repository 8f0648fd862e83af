//! Non-abelian extensions of averaging algebras, their cocycles,
//! automorphism pairs and the Wells map.

use std::collections::BTreeMap;

use crate::conformal::{disjoint_basis, skew_check, AveragingAlgebra, ConformalMap, LambdaTable, LieConformalAlgebra};
use crate::error::{ensure, Error, Result};
use crate::report::{CheckResult, Report};
use crate::scalar::Scalar;
use crate::symalg::{dagger, ModElem, Monomial, Poly};

/// `(χ, ρ, Φ)` of a base `L_P` with values in a fiber `H_Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonAbCocycle<C> {
    pub base: AveragingAlgebra<C>,
    pub fiber: AveragingAlgebra<C>,
    /// `L × L → H`.
    pub chi: LambdaTable<C>,
    /// `L × H → H`.
    pub rho: LambdaTable<C>,
    /// `L → H`.
    pub phi: ConformalMap<C>,
}

/// `0 → H → E → L → 0` with explicit inclusion, projection and section.
#[derive(Clone, Debug, PartialEq)]
pub struct Extension<C> {
    pub base: AveragingAlgebra<C>,
    pub fiber: AveragingAlgebra<C>,
    pub total: AveragingAlgebra<C>,
    pub inclusion: ConformalMap<C>,
    pub projection: ConformalMap<C>,
    pub section: ConformalMap<C>,
}

/// `α` acts on the fiber, `β` on the base.
#[derive(Clone, Debug, PartialEq)]
pub struct AutPair<C> {
    pub alpha: ConformalMap<C>,
    pub beta: ConformalMap<C>,
}

fn l<C: Scalar>(k: usize) -> Poly<C> {
    Poly::lambda(k)
}

impl<C: Scalar> NonAbCocycle<C> {
    pub fn new(
        base: AveragingAlgebra<C>,
        fiber: AveragingAlgebra<C>,
        chi: LambdaTable<C>,
        rho: LambdaTable<C>,
        phi: ConformalMap<C>,
    ) -> Result<Self> {
        let (n, h) = (base.rank(), fiber.rank());
        ensure(chi.left() == n && chi.right() == n && chi.out() == h, || format!("chi must map {n}x{n} to rank {h}"))?;
        ensure(rho.left() == n && rho.right() == h && rho.out() == h, || format!("rho must map {n}x{h} to rank {h}"))?;
        ensure(phi.rows() == h && phi.cols() == n, || format!("Phi must be {h}x{n}"))?;
        Ok(NonAbCocycle { base, fiber, chi, rho, phi })
    }

    /// `χ = 0`, `Φ = 0`.
    pub fn semidirect(base: AveragingAlgebra<C>, fiber: AveragingAlgebra<C>, rho: LambdaTable<C>) -> Result<Self> {
        let (n, h) = (base.rank(), fiber.rank());
        Self::new(base, fiber, LambdaTable::zero(n, n, h), rho, ConformalMap::zero(h, n))
    }

    fn e(&self, i: usize) -> ModElem<C> {
        ModElem::basis(self.base.rank(), i)
    }

    fn f(&self, a: usize) -> ModElem<C> {
        ModElem::basis(self.fiber.rank(), a)
    }

    fn fb(&self, x: &ModElem<C>, y: &ModElem<C>, lam: &Poly<C>) -> ModElem<C> {
        self.fiber.algebra.table.apply(x, y, lam)
    }

    /// Base and fiber checks, skew of χ, the two cocycle identities, the
    /// derivation property of ρ on the fiber bracket, E1 (both equalities)
    /// and E2.
    pub fn check(&self) -> Report<C> {
        let (n, h) = (self.base.rank(), self.fiber.rank());
        let bb = &self.base.algebra.basis;
        let fb = &self.fiber.algebra.basis;
        let base = &self.base.algebra;
        let (p, q) = (&self.base.operator, &self.fiber.operator);
        let (l1, l2) = (l::<C>(1), l::<C>(2));
        let l12 = &l1 + &l2;
        let mut report = Report::new("non-abelian 2-cocycle");
        report.absorb("base", self.base.check());
        report.absorb("fiber", self.fiber.check());
        report.push(skew_check("chi-skew", &self.chi, bb));
        let rho = |x: &ModElem<C>, v: &ModElem<C>, lam: &Poly<C>| self.rho.apply(x, v, lam);
        let chi = |x: &ModElem<C>, y: &ModElem<C>, lam: &Poly<C>| self.chi.apply(x, y, lam);

        let mut c1 = CheckResult::new("2cocycle1");
        let mut der = CheckResult::new("derivation");
        for i in 0..n {
            let x = self.e(i);
            for j in 0..n {
                let y = self.e(j);
                let xy = base.bracket(&x, &y, &l1);
                let cxy = chi(&x, &y, &l1);
                for a in 0..h {
                    let k = self.f(a);
                    let lhs =
                        &(&rho(&x, &rho(&y, &k, &l2), &l1) - &rho(&y, &rho(&x, &k, &l1), &l2)) - &rho(&xy, &k, &l12);
                    let rhs = self.fb(&cxy, &k, &l12);
                    c1.compare(&[&bb[i], &bb[j], &fb[a]], lhs, rhs);
                }
            }
            for a in 0..h {
                let hh = self.f(a);
                let rh = rho(&x, &hh, &l1);
                for b in 0..h {
                    let k = self.f(b);
                    let lhs = rho(&x, &self.fb(&hh, &k, &l2), &l1);
                    let rhs = &self.fb(&rh, &k, &l12) + &self.fb(&hh, &rho(&x, &k, &l1), &l2);
                    der.compare(&[&bb[i], &fb[a], &fb[b]], lhs, rhs);
                }
            }
        }
        report.push(c1);

        // δχ = 0 with ν = -∂-λ-μ in the third slot.
        let mut c2 = CheckResult::new("2cocycle2");
        let nu = dagger([1, 2]);
        for t in crate::cohomology::tuples(3, n) {
            let (x, y, z) = (self.e(t[0]), self.e(t[1]), self.e(t[2]));
            let v = &(&(&(&(&rho(&x, &chi(&y, &z, &l2), &l1) - &rho(&y, &chi(&x, &z, &l1), &l2))
                + &rho(&z, &chi(&x, &y, &l1), &nu))
                - &chi(&base.bracket(&x, &y, &l1), &z, &l12))
                + &chi(&base.bracket(&x, &z, &l1), &y, &(&l1 + &nu)))
                - &chi(&base.bracket(&y, &z, &l2), &x, &(&l2 + &nu));
            let names: Vec<&str> = t.iter().map(|&i| bb[i].as_str()).collect();
            c2.expect_zero(&names, v);
        }
        report.push(c2);
        report.push(der);

        let (mut e1a, mut e1b) = (CheckResult::new("E1a"), CheckResult::new("E1b"));
        for i in 0..n {
            let x = self.e(i);
            let px = p.column(i);
            let phx = self.phi.column(i);
            for a in 0..h {
                let hh = self.f(a);
                let qh = q.column(a);
                let first = rho(&px, &qh, &l1);
                let tail = self.fb(&phx, &qh, &l1);
                let second = &(&q.apply(&rho(&px, &hh, &l1)) + &q.apply(&self.fb(&phx, &hh, &l1))) - &tail;
                let third = &q.apply(&rho(&x, &qh, &l1)) - &tail;
                e1a.compare(&[&bb[i], &fb[a]], first.clone(), second);
                e1b.compare(&[&bb[i], &fb[a]], first, third);
            }
        }
        report.push(e1a);
        report.push(e1b);

        let mut e2 = CheckResult::new("E2");
        let dl = dagger([1]);
        for i in 0..n {
            let (px, phx) = (p.column(i), self.phi.column(i));
            for j in 0..n {
                let (y, py, phy) = (self.e(j), p.column(j), self.phi.column(j));
                let v = &(&(&(&(&(&chi(&px, &py, &l1) - &q.apply(&chi(&px, &y, &l1)))
                    - &self.phi.apply(&base.bracket(&px, &y, &l1)))
                    + &rho(&px, &phy, &l1))
                    - &rho(&py, &phx, &dl))
                    + &q.apply(&rho(&y, &phx, &dl)))
                    + &self.fb(&phx, &phy, &l1);
                e2.expect_zero(&[&bb[i], &bb[j]], v);
            }
        }
        report.push(e2);
        report
    }
}

/// `E = L ⊕ H` with bracket `([x y], ρ(x)k - ρ(y)_{-∂-λ}h + χ(x,y) + [h k])`
/// and `R(x, h) = (P x, Q h + Φ x)`; canonical inclusion, projection and
/// section.
pub fn build_extension<C: Scalar>(c: &NonAbCocycle<C>) -> Result<Extension<C>> {
    let r = c.check();
    if !r.passed() {
        return Err(Error::Precondition(format!("cocycle fails {}", r.failed().join(", "))));
    }
    let (n, h) = (c.base.rank(), c.fiber.rank());
    let total = n + h;
    let tt = c.rho.twisted_transpose();
    let table = LambdaTable::from_fn(total, total, total, |u, v| match (u < n, v < n) {
        (true, true) => &c.base.algebra.structure(u, v).embed(total, 0) + &c.chi.get(u, v).embed(total, n),
        (true, false) => c.rho.get(u, v - n).embed(total, n),
        (false, true) => (-tt.get(u - n, v)).embed(total, n),
        (false, false) => c.fiber.algebra.structure(u - n, v - n).embed(total, n),
    });
    let alg = LieConformalAlgebra::new(
        format!("{}.{}", c.base.algebra.name, c.fiber.algebra.name),
        disjoint_basis(&c.base.algebra.basis, &c.fiber.algebra.basis),
        table,
    )?;
    let r = ConformalMap::block(&c.base.operator, &ConformalMap::zero(n, h), &c.phi, &c.fiber.operator)?;
    let inclusion = ConformalMap::from_fn(total, h, |row, col| if row == n + col { Poly::one() } else { Poly::zero() });
    let projection = ConformalMap::from_fn(n, total, |row, col| if row == col { Poly::one() } else { Poly::zero() });
    let section = ConformalMap::from_fn(total, n, |row, col| if row == col { Poly::one() } else { Poly::zero() });
    Ok(Extension {
        base: c.base.clone(),
        fiber: c.fiber.clone(),
        total: AveragingAlgebra::new(alg, r)?,
        inclusion,
        projection,
        section,
    })
}

impl<C: Scalar> Extension<C> {
    pub fn new(
        base: AveragingAlgebra<C>,
        fiber: AveragingAlgebra<C>,
        total: AveragingAlgebra<C>,
        inclusion: ConformalMap<C>,
        projection: ConformalMap<C>,
        section: ConformalMap<C>,
    ) -> Result<Self> {
        let (n, h, t) = (base.rank(), fiber.rank(), total.rank());
        ensure(inclusion.rows() == t && inclusion.cols() == h, || format!("inclusion must be {t}x{h}"))?;
        ensure(projection.rows() == n && projection.cols() == t, || format!("projection must be {n}x{t}"))?;
        ensure(section.rows() == t && section.cols() == n, || format!("section must be {t}x{n}"))?;
        Ok(Extension { base, fiber, total, inclusion, projection, section })
    }

    /// The same extension with another section.
    pub fn with_section(&self, section: ConformalMap<C>) -> Result<Self> {
        Self::new(
            self.base.clone(),
            self.fiber.clone(),
            self.total.clone(),
            self.inclusion.clone(),
            self.projection.clone(),
            section,
        )
    }

    /// Total algebra checks, exactness and morphism properties of `i` and
    /// `p`, and `p∘s = Id`.
    pub fn check(&self) -> Result<Report<C>> {
        let mut report = Report::new("extension");
        report.absorb("total", self.total.check());
        let (n, h) = (self.base.rank(), self.fiber.rank());
        let mut pi = CheckResult::new("p-i");
        let pi_map = self.projection.compose(&self.inclusion)?;
        for a in 0..h {
            pi.expect_zero(&[&self.fiber.algebra.basis[a]], pi_map.column(a));
        }
        report.push(pi);
        let mut ps = CheckResult::new("p-s");
        let ps_map = self.projection.compose(&self.section)?;
        for i in 0..n {
            ps.compare(&[&self.base.algebra.basis[i]], ps_map.column(i), ModElem::basis(n, i));
        }
        report.push(ps);
        report.absorb("i", self.fiber.check_morphism(&self.total, &self.inclusion)?);
        report.absorb("p", self.total.check_morphism(&self.base, &self.projection)?);
        Ok(report)
    }

    /// Fiber coordinates of `v`; the inclusion must send each fiber basis
    /// element to a total basis element.
    pub fn fiber_coords(&self, v: &ModElem<C>) -> Result<ModElem<C>> {
        let h = self.fiber.rank();
        let mut slots = Vec::with_capacity(h);
        for a in 0..h {
            let col = self.inclusion.column(a);
            let mut nz = col.nonzero();
            match (nz.next(), nz.next()) {
                (Some((k, p)), None) if *p == Poly::one() => slots.push(k),
                _ => return Err(Error::Invalid("inclusion must send fiber basis to total basis elements".into())),
            }
        }
        let out = ModElem::from_coords(slots.iter().map(|&k| v.coord(k).clone()).collect());
        if self.inclusion.apply(&out) != *v {
            return Err(Error::Invalid(format!("value {v} escapes the fiber")));
        }
        Ok(out)
    }
}

/// `χ(x,y) = [s x, s y] - s[x y]`, `ρ(x)h = [s x, h]`, `Φ = R s - s P`.
pub fn extract_cocycle<C: Scalar>(e: &Extension<C>) -> Result<NonAbCocycle<C>> {
    let (n, h) = (e.base.rank(), e.fiber.rank());
    let l1 = Poly::lambda(1);
    let tot = &e.total.algebra;
    let scol: Vec<ModElem<C>> = (0..n).map(|i| e.section.column(i)).collect();
    let mut chi = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let v = &tot.bracket(&scol[i], &scol[j], &l1)
                - &e.section.apply(&e.base.algebra.bracket(&ModElem::basis(n, i), &ModElem::basis(n, j), &l1));
            chi.push(e.fiber_coords(&v)?);
        }
    }
    let mut rho = Vec::with_capacity(n * h);
    for i in 0..n {
        for a in 0..h {
            rho.push(e.fiber_coords(&tot.bracket(&scol[i], &e.inclusion.column(a), &l1))?);
        }
    }
    let rs = e.total.operator.compose(&e.section)?;
    let sp = e.section.compose(&e.base.operator)?;
    let diff = rs.sub(&sp)?;
    let cols: Vec<ModElem<C>> = (0..n).map(|i| e.fiber_coords(&diff.column(i))).collect::<Result<_>>()?;
    let phi = ConformalMap::from_fn(h, n, |r, c| cols[c].coord(r).clone());
    NonAbCocycle::new(
        e.base.clone(),
        e.fiber.clone(),
        LambdaTable::new(n, n, h, chi)?,
        LambdaTable::new(n, h, h, rho)?,
        phi,
    )
}

fn same_coefficients<C: Scalar>(c: &NonAbCocycle<C>, c2: &NonAbCocycle<C>) -> Result<()> {
    if c.base != c2.base || c.fiber != c2.fiber {
        return Err(Error::Precondition("cocycles over different base or fiber".into()));
    }
    Ok(())
}

/// The three equivalence identities for the witness `τ: L → H`.
pub fn check_equivalence<C: Scalar>(
    c: &NonAbCocycle<C>,
    c2: &NonAbCocycle<C>,
    tau: &ConformalMap<C>,
) -> Result<Report<C>> {
    same_coefficients(c, c2)?;
    let (n, h) = (c.base.rank(), c.fiber.rank());
    ensure(tau.rows() == h && tau.cols() == n, || format!("tau must be {h}x{n}"))?;
    let bb = &c.base.algebra.basis;
    let fb = &c.fiber.algebra.basis;
    let l1 = Poly::lambda(1);
    let dl = dagger([1]);
    let tcol: Vec<ModElem<C>> = (0..n).map(|i| tau.column(i)).collect();
    let mut report = Report::new("cocycle equivalence");
    let mut eq1 = CheckResult::new("equivalent1");
    for i in 0..n {
        for a in 0..h {
            let lhs = &c.rho.apply_basis(i, a, &l1) - &c2.rho.apply_basis(i, a, &l1);
            let rhs = c.fb(&tcol[i], &c.f(a), &l1);
            eq1.compare(&[&bb[i], &fb[a]], lhs, rhs);
        }
    }
    report.push(eq1);
    let mut eq2 = CheckResult::new("equivalent2");
    for i in 0..n {
        for j in 0..n {
            let lhs = &c.chi.apply_basis(i, j, &l1) - &c2.chi.apply_basis(i, j, &l1);
            let rhs = &(&(&c2.rho.apply(&c.e(i), &tcol[j], &l1) - &c2.rho.apply(&c.e(j), &tcol[i], &dl))
                - &tau.apply(&c.base.algebra.bracket(&c.e(i), &c.e(j), &l1)))
                + &c.fb(&tcol[i], &tcol[j], &l1);
            eq2.compare(&[&bb[i], &bb[j]], lhs, rhs);
        }
    }
    report.push(eq2);
    let mut eq3 = CheckResult::new("equivalent3");
    let q = &c.fiber.operator;
    for i in 0..n {
        let lhs = &c.phi.column(i) - &c2.phi.column(i);
        let rhs = &q.apply(&tcol[i]) - &tau.apply(&c.base.operator.column(i));
        eq3.compare(&[&bb[i]], lhs, rhs);
    }
    report.push(eq3);
    Ok(report)
}

/// `φ: E → E'` is an averaging morphism with `φ∘i = i'` and `p'∘φ = p`.
pub fn check_ext_equivalence<C: Scalar>(
    e: &Extension<C>,
    e2: &Extension<C>,
    map: &ConformalMap<C>,
) -> Result<Report<C>> {
    let mut report = Report::new("extension equivalence");
    report.absorb("", e.total.check_morphism(&e2.total, map)?);
    let mut fi = CheckResult::new("fiber-identity");
    let lhs = map.compose(&e.inclusion)?;
    for a in 0..e.fiber.rank() {
        fi.compare(&[&e.fiber.algebra.basis[a]], lhs.column(a), e2.inclusion.column(a));
    }
    report.push(fi);
    let mut pr = CheckResult::new("projection");
    let lhs = e2.projection.compose(map)?;
    for k in 0..e.total.rank() {
        pr.compare(&[&e.total.algebra.basis[k]], lhs.column(k), e.projection.column(k));
    }
    report.push(pr);
    Ok(report)
}

fn unit_check<C: Scalar>(name: &str, m: &ConformalMap<C>) -> CheckResult<C> {
    let mut c = CheckResult::new(name);
    match m.det() {
        Ok(det) => {
            let target = match det.as_constant() {
                Some(k) if !k.is_zero() => det.clone(),
                _ => {
                    let k = det.coeff(&Monomial::one());
                    if k.is_zero() {
                        Poly::one()
                    } else {
                        Poly::constant(k)
                    }
                }
            };
            c.compare(&["det"], ModElem::from_coords(vec![det]), ModElem::from_coords(vec![target]));
        }
        Err(_) => {
            c.compare(&["det"], ModElem::from_coords(vec![Poly::zero()]), ModElem::from_coords(vec![Poly::one()]))
        }
    }
    c
}

/// Invertibility over `C[∂]`, bracket preservation and commutation with the
/// operators, for `α` on the fiber and `β` on the base.
pub fn check_aut_pair<C: Scalar>(
    ap: &AutPair<C>,
    base: &AveragingAlgebra<C>,
    fiber: &AveragingAlgebra<C>,
) -> Result<Report<C>> {
    let (n, h) = (base.rank(), fiber.rank());
    ensure(ap.alpha.rows() == h && ap.alpha.cols() == h, || format!("alpha must be {h}x{h}"))?;
    ensure(ap.beta.rows() == n && ap.beta.cols() == n, || format!("beta must be {n}x{n}"))?;
    let mut report = Report::new("automorphism pair");
    report.push(unit_check("alpha-invertible", &ap.alpha));
    report.absorb("alpha", fiber.check_morphism(fiber, &ap.alpha)?);
    report.push(unit_check("beta-invertible", &ap.beta));
    report.absorb("beta", base.check_morphism(base, &ap.beta)?);
    Ok(report)
}

/// `(α χ(β⁻¹·, β⁻¹·), α ρ(β⁻¹·) α⁻¹, α Φ β⁻¹)`.
pub fn transform_cocycle<C: Scalar>(ap: &AutPair<C>, c: &NonAbCocycle<C>) -> Result<NonAbCocycle<C>> {
    let r = check_aut_pair(ap, &c.base, &c.fiber)?;
    if !r.passed() {
        return Err(Error::Precondition(format!("automorphism pair fails {}", r.failed().join(", "))));
    }
    let (n, h) = (c.base.rank(), c.fiber.rank());
    let (ai, bi) = (ap.alpha.inverse()?, ap.beta.inverse()?);
    let l1 = Poly::lambda(1);
    let bcol: Vec<ModElem<C>> = (0..n).map(|i| bi.column(i)).collect();
    let chi = LambdaTable::from_fn(n, n, h, |i, j| ap.alpha.apply(&c.chi.apply(&bcol[i], &bcol[j], &l1)));
    let rho = LambdaTable::from_fn(n, h, h, |i, a| ap.alpha.apply(&c.rho.apply(&bcol[i], &ai.column(a), &l1)));
    let phi = ap.alpha.compose(&c.phi)?.compose(&bi)?;
    NonAbCocycle::new(c.base.clone(), c.fiber.clone(), chi, rho, phi)
}

/// Passes iff `τ` witnesses that the transformed cocycle is equivalent to
/// the extension's own, i.e. the Wells class of `(α, β)` vanishes.
pub fn wells_verify<C: Scalar>(ap: &AutPair<C>, e: &Extension<C>, tau: &ConformalMap<C>) -> Result<Report<C>> {
    let c = extract_cocycle(e)?;
    let t = transform_cocycle(ap, &c)?;
    let mut r = check_equivalence(&t, &c, tau)?;
    r.subject = "Wells witness".into();
    Ok(r)
}

/// `(γ|_H, p γ s)` for an automorphism `γ` of `E_R` preserving the fiber.
pub fn pi_restrict<C: Scalar>(e: &Extension<C>, gamma: &ConformalMap<C>) -> Result<AutPair<C>> {
    let t = e.total.rank();
    ensure(gamma.rows() == t && gamma.cols() == t, || format!("gamma must be {t}x{t}"))?;
    let mut r = e.total.check_morphism(&e.total, gamma)?;
    r.push(unit_check("invertible", gamma));
    if !r.passed() {
        return Err(Error::Precondition(format!("gamma is not an automorphism: {}", r.failed().join(", "))));
    }
    let h = e.fiber.rank();
    let gi = gamma.compose(&e.inclusion)?;
    let cols: Vec<ModElem<C>> = (0..h)
        .map(|a| e.fiber_coords(&gi.column(a)))
        .collect::<Result<_>>()
        .map_err(|_| Error::Precondition("gamma does not preserve the fiber".into()))?;
    let alpha = ConformalMap::from_fn(h, h, |r, c| cols[c].coord(r).clone());
    let beta = e.projection.compose(gamma)?.compose(&e.section)?;
    Ok(AutPair { alpha, beta })
}

/// `τ = γ s β⁻¹ - s` for `(α, β) = Π(γ)`, in fiber coordinates.
pub fn wells_tau<C: Scalar>(e: &Extension<C>, gamma: &ConformalMap<C>) -> Result<ConformalMap<C>> {
    let ap = pi_restrict(e, gamma)?;
    let shifted = gamma.compose(&e.section)?.compose(&ap.beta.inverse()?)?;
    let diff = shifted.sub(&e.section)?;
    let n = e.base.rank();
    let cols: Vec<ModElem<C>> = (0..n).map(|i| e.fiber_coords(&diff.column(i))).collect::<Result<_>>()?;
    Ok(ConformalMap::from_fn(e.fiber.rank(), n, |r, c| cols[c].coord(r).clone()))
}

/// Searches `τ` with entries of `D`-degree at most `cap` for an abelian
/// fiber, where the equivalence conditions are linear in `τ`.
pub fn tau_solve_abelian<C: Scalar>(
    c: &NonAbCocycle<C>,
    c2: &NonAbCocycle<C>,
    cap: usize,
) -> Result<Option<ConformalMap<C>>> {
    same_coefficients(c, c2)?;
    if !c.fiber.algebra.table.is_zero() {
        return Err(Error::Precondition("fiber bracket is not zero".into()));
    }
    if c.rho != c2.rho {
        return Ok(None);
    }
    let (n, h) = (c.base.rank(), c.fiber.rank());
    let l1 = Poly::lambda(1);
    let dl = dagger([1]);
    let q = &c.fiber.operator;
    // (r, col, k) ↦ τ with D^k at (r, col)
    let unknowns: Vec<(usize, usize, u32)> =
        (0..h).flat_map(|r| (0..n).flat_map(move |col| (0..=cap as u32).map(move |k| (r, col, k)))).collect();
    let basis_tau = |&(r, col, k): &(usize, usize, u32)| {
        ConformalMap::from_fn(h, n, |rr, cc| if (rr, cc) == (r, col) { Poly::d().pow(k) } else { Poly::zero() })
    };
    // each equation is keyed by (identity, i, j, coordinate, monomial)
    type Key = (u8, usize, usize, usize, Monomial);
    let mut rows: BTreeMap<Key, (Vec<C>, C)> = BTreeMap::new();
    let width = unknowns.len();
    let mut add = |key: Key, u: Option<usize>, coeff: C| {
        let entry = rows.entry(key).or_insert_with(|| (vec![C::zero(); width], C::zero()));
        match u {
            Some(u) => entry.0[u] = entry.0[u].clone() + coeff,
            None => entry.1 = entry.1.clone() + coeff,
        }
    };
    let push_elem =
        |id: u8, i: usize, j: usize, v: &ModElem<C>, u: Option<usize>, add: &mut dyn FnMut(Key, Option<usize>, C)| {
            for (coord, p) in v.nonzero() {
                for (m, k) in p.terms() {
                    add((id, i, j, coord, *m), u, k.clone());
                }
            }
        };
    for i in 0..n {
        for j in 0..n {
            let target = &c.chi.apply_basis(i, j, &l1) - &c2.chi.apply_basis(i, j, &l1);
            push_elem(2, i, j, &target, None, &mut add);
        }
        let target = &c.phi.column(i) - &c2.phi.column(i);
        push_elem(3, i, 0, &target, None, &mut add);
    }
    for (u, slot) in unknowns.iter().enumerate() {
        let tau = basis_tau(slot);
        for i in 0..n {
            for j in 0..n {
                let v = &(&c2.rho.apply(&c.e(i), &tau.column(j), &l1) - &c2.rho.apply(&c.e(j), &tau.column(i), &dl))
                    - &tau.apply(&c.base.algebra.bracket(&c.e(i), &c.e(j), &l1));
                push_elem(2, i, j, &v, Some(u), &mut add);
            }
            let v = &q.apply(&tau.column(i)) - &tau.apply(&c.base.operator.column(i));
            push_elem(3, i, 0, &v, Some(u), &mut add);
        }
    }
    let (mat, rhs): (Vec<Vec<C>>, Vec<C>) = rows.into_values().unzip();
    let Some(sol) = solve_linear(mat, rhs, width) else {
        return Ok(None);
    };
    let mut tau = ConformalMap::zero(h, n);
    for (u, slot) in unknowns.iter().enumerate() {
        if !sol[u].is_zero() {
            tau = tau.add(&basis_tau(slot).scale(&sol[u]))?;
        }
    }
    if !check_equivalence(c, c2, &tau)?.passed() {
        return Err(Error::Invalid("solver returned a witness that fails the equivalence check".into()));
    }
    Ok(Some(tau))
}

/// Exact Gaussian elimination; free variables are set to zero.
fn solve_linear<C: Scalar>(mut a: Vec<Vec<C>>, mut b: Vec<C>, width: usize) -> Option<Vec<C>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows).find(|&k| !a[k][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = C::one() / a[r][col].clone();
        for k in col..width {
            a[r][k] = a[r][k].clone() * inv.clone();
        }
        b[r] = b[r].clone() * inv;
        for k in 0..rows {
            if k != r && !a[k][col].is_zero() {
                let f = a[k][col].clone();
                for m in col..width {
                    a[k][m] = a[k][m].clone() - f.clone() * a[r][m].clone();
                }
                b[k] = b[k].clone() - f * b[r].clone();
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows {
            break;
        }
    }
    if b[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![C::zero(); width];
    for (k, &col) in pivots.iter().enumerate() {
        x[col] = b[k].clone();
    }
    Some(x)
}
