//! Conformal representations, averaging representations, semidirect sums
//! and embedding tensors.

use crate::conformal::{jacobi_check, ConformalMap, LambdaTable, LieConformalAlgebra};
use crate::error::{ensure, Result};
use crate::report::{CheckResult, Report};
use crate::scalar::Scalar;
use crate::symalg::{ModElem, Poly};

/// `ρ(e_i)_λ f_a` stored on basis pairs, values over `C[D, L1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalRep<C> {
    pub algebra: LieConformalAlgebra<C>,
    pub module_basis: Vec<String>,
    pub action: LambdaTable<C>,
}

impl<C: Scalar> ConformalRep<C> {
    pub fn new(algebra: LieConformalAlgebra<C>, module_basis: Vec<String>, action: LambdaTable<C>) -> Result<Self> {
        let m = module_basis.len();
        ensure(m > 0, || "module of rank zero".into())?;
        ensure(action.left() == algebra.rank() && action.right() == m && action.out() == m, || {
            format!("action table must be {}x{m} with values of rank {m}", algebra.rank())
        })?;
        Ok(ConformalRep { algebra, module_basis, action })
    }

    pub fn module_rank(&self) -> usize {
        self.module_basis.len()
    }

    /// `ρ(x)_lam v`.
    pub fn act(&self, x: &ModElem<C>, v: &ModElem<C>, lam: &Poly<C>) -> ModElem<C> {
        self.action.apply(x, v, lam)
    }

    /// `ρ([x_λ y])_{λ+μ} = ρ(x)_λ ρ(y)_μ - ρ(y)_μ ρ(x)_λ` on basis triples.
    pub fn check_rep(&self) -> Report<C> {
        let mut report = Report::new(format!("{} representation", self.algebra.name));
        report.push(jacobi_check(
            "representation",
            &self.algebra.table,
            &self.action,
            &self.algebra.basis,
            &self.module_basis,
        ));
        report
    }
}

pub fn adjoint_rep<C: Scalar>(a: &LieConformalAlgebra<C>) -> ConformalRep<C> {
    ConformalRep::new(a.clone(), a.basis.clone(), a.table.clone()).expect("adjoint shapes agree")
}

/// A representation of an averaging algebra: `(ρ, φ)` together with the
/// algebra's operator `P`.
#[derive(Clone, Debug, PartialEq)]
pub struct AvgRepTriple<C> {
    pub rep: ConformalRep<C>,
    pub phi: ConformalMap<C>,
    pub operator: ConformalMap<C>,
}

impl<C: Scalar> AvgRepTriple<C> {
    pub fn new(rep: ConformalRep<C>, phi: ConformalMap<C>, operator: ConformalMap<C>) -> Result<Self> {
        let (n, m) = (rep.algebra.rank(), rep.module_rank());
        ensure(phi.rows() == m && phi.cols() == m, || format!("phi must be {m}x{m}"))?;
        ensure(operator.rows() == n && operator.cols() == n, || format!("operator must be {n}x{n}"))?;
        Ok(AvgRepTriple { rep, phi, operator })
    }

    /// The adjoint representation with `φ = P`.
    pub fn adjoint(a: &LieConformalAlgebra<C>, p: &ConformalMap<C>) -> Result<Self> {
        Self::new(adjoint_rep(a), p.clone(), p.clone())
    }

    pub fn algebra(&self) -> &LieConformalAlgebra<C> {
        &self.rep.algebra
    }

    /// `ρ(Px)_λ φ(m) = φ(ρ(Px)_λ m) = φ(ρ(x)_λ φ(m))`; each equality is a
    /// separate check.
    pub fn check_avg_rep(&self) -> Report<C> {
        let a = self.algebra();
        let mut report = Report::new(format!("{} averaging representation", a.name));
        let mut left = CheckResult::new("eqrep-left");
        let mut right = CheckResult::new("eqrep-right");
        let l1 = Poly::lambda(1);
        let m = self.rep.module_rank();
        for i in 0..a.rank() {
            let px = self.operator.column(i);
            let x = a.basis_elem(i);
            for k in 0..m {
                let f = ModElem::basis(m, k);
                let phif = self.phi.column(k);
                let one = self.rep.act(&px, &phif, &l1);
                let two = self.phi.apply(&self.rep.act(&px, &f, &l1));
                let three = self.phi.apply(&self.rep.act(&x, &phif, &l1));
                let t = [&a.basis[i], &self.rep.module_basis[k]];
                left.compare(&t, one, two.clone());
                right.compare(&t, two, three);
            }
        }
        report.push(left);
        report.push(right);
        report
    }
}

/// `[(x+m)_λ (y+n)] = ([x_λ y], ρ(x)_λ n - ρ(y)_{-∂-λ} m)` on `L ⊕ M`.
pub fn semidirect<C: Scalar>(rep: &ConformalRep<C>) -> LieConformalAlgebra<C> {
    let a = &rep.algebra;
    let (n, m) = (a.rank(), rep.module_rank());
    let total = n + m;
    let tt = rep.action.twisted_transpose();
    let table = LambdaTable::from_fn(total, total, total, |u, v| match (u < n, v < n) {
        (true, true) => a.structure(u, v).embed(total, 0),
        (true, false) => rep.action.get(u, v - n).embed(total, n),
        (false, true) => (-tt.get(u - n, v)).embed(total, n),
        (false, false) => ModElem::zero(total),
    });
    let mut basis = a.basis.clone();
    basis.extend(rep.module_basis.iter().cloned());
    LieConformalAlgebra::new(format!("{}_x_M", a.name), basis, table).expect("semidirect shapes agree")
}

/// `[T(m)_λ T(n)] = T(ρ(Tm)_λ n)` on module basis pairs.
pub fn check_embedding_tensor<C: Scalar>(rep: &ConformalRep<C>, t: &ConformalMap<C>) -> Result<Report<C>> {
    let a = &rep.algebra;
    let m = rep.module_rank();
    ensure(t.rows() == a.rank() && t.cols() == m, || format!("embedding tensor must be {}x{m}", a.rank()))?;
    let mut report = Report::new(format!("{} embedding tensor", a.name));
    let mut c = CheckResult::new("embedding-tensor");
    let l1 = Poly::lambda(1);
    for i in 0..m {
        let ti = t.column(i);
        for j in 0..m {
            let lhs = a.bracket(&ti, &t.column(j), &l1);
            let rhs = t.apply(&rep.act(&ti, &ModElem::basis(m, j), &l1));
            c.compare(&[&rep.module_basis[i], &rep.module_basis[j]], lhs, rhs);
        }
    }
    report.push(c);
    Ok(report)
}

/// The semidirect sum with `P_T(x, m) = (T(m), 0)`.
pub fn lift_embedding_tensor<C: Scalar>(
    rep: &ConformalRep<C>,
    t: &ConformalMap<C>,
) -> Result<(LieConformalAlgebra<C>, ConformalMap<C>)> {
    let (n, m) = (rep.algebra.rank(), rep.module_rank());
    ensure(t.rows() == n && t.cols() == m, || format!("embedding tensor must be {n}x{m}"))?;
    let p = ConformalMap::block(&ConformalMap::zero(n, n), t, &ConformalMap::zero(m, n), &ConformalMap::zero(m, m))?;
    Ok((semidirect(rep), p))
}

/// `P1(x+m) = x`, `P2(x+m) = φ(m)`, `P3(x+m) = P(x) + φ(m)` on the
/// semidirect sum.
pub fn semidirect_operators<C: Scalar>(t: &AvgRepTriple<C>) -> [ConformalMap<C>; 3] {
    let (n, m) = (t.algebra().rank(), t.rep.module_rank());
    let id = ConformalMap::identity(n);
    let zn = ConformalMap::zero(n, n);
    let zm = ConformalMap::zero(m, m);
    [
        ConformalMap::direct_sum(&id, &zm),
        ConformalMap::direct_sum(&zn, &t.phi),
        ConformalMap::direct_sum(&t.operator, &t.phi),
    ]
}

/// Tensor square `M ⊗ M` of a representation, taken as the free module on
/// pairs of basis elements: `x_λ(a ⊗ b) = (x_λ a) ⊗ b + a ⊗ (x_λ b)` and
/// `φ(a ⊗ b) = φ(a) ⊗ b + a ⊗ φ(b)`, with `∂` acting on the whole tensor.
pub fn tensor_square<C: Scalar>(t: &AvgRepTriple<C>) -> AvgRepTriple<C> {
    let m = t.rep.module_rank();
    let mm = m * m;
    let rep = &t.rep;
    let n = rep.algebra.rank();
    // Place v ∈ M in the first (resp. second) factor next to basis vector k.
    let left_factor = |v: &ModElem<C>, k: usize| {
        let mut out = ModElem::zero(mm);
        for (c, p) in v.nonzero() {
            out += &ModElem::basis(mm, c * m + k).scale(p);
        }
        out
    };
    let right_factor = |k: usize, v: &ModElem<C>| {
        let mut out = ModElem::zero(mm);
        for (c, p) in v.nonzero() {
            out += &ModElem::basis(mm, k * m + c).scale(p);
        }
        out
    };
    let action = LambdaTable::from_fn(n, mm, mm, |i, ab| {
        let (a, b) = (ab / m, ab % m);
        &left_factor(rep.action.get(i, a), b) + &right_factor(a, rep.action.get(i, b))
    });
    let phi = ConformalMap::from_fn(mm, mm, |row, ab| {
        let (a, b) = (ab / m, ab % m);
        let v = &left_factor(&t.phi.column(a), b) + &right_factor(a, &t.phi.column(b));
        v.coord(row).clone()
    });
    let basis = (0..mm).map(|ab| format!("{}_{}", rep.module_basis[ab / m], rep.module_basis[ab % m])).collect();
    let rep2 = ConformalRep::new(rep.algebra.clone(), basis, action).expect("tensor square shapes");
    AvgRepTriple::new(rep2, phi, t.operator.clone()).expect("tensor square operators")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn adjoint_reps() {
        assert!(adjoint_rep(&builtin::virasoro::<Q>()).check_rep().passed());
        assert!(adjoint_rep(&builtin::cur_sl2::<Q>()).check_rep().passed());
        assert!(adjoint_rep(&builtin::abelian::<Q>(2)).action.is_zero());
        assert!(!adjoint_rep(&builtin::broken_jacobi::<Q>()).check_rep().passed());
    }

    #[test]
    fn zero_action_is_rep() {
        let a = builtin::abelian::<Q>(2);
        let rep = ConformalRep::new(a, vec!["M".into()], LambdaTable::zero(2, 1, 1)).unwrap();
        assert!(rep.check_rep().passed());
    }

    #[test]
    fn avg_rep_examples() {
        let vir = builtin::virasoro::<Q>();
        let id = ConformalMap::identity(1);
        assert!(AvgRepTriple::adjoint(&vir, &id).unwrap().check_avg_rep().passed());
        let two = ConformalMap::scalar(1, Q::from_integer(2.into()));
        assert!(AvgRepTriple::adjoint(&vir, &two).unwrap().check_avg_rep().passed());
        let zero_phi = AvgRepTriple::new(adjoint_rep(&vir), ConformalMap::zero(1, 1), id).unwrap();
        assert!(zero_phi.check_avg_rep().passed());
    }

    #[test]
    fn semidirect_of_adjoint_is_lie() {
        let vir = builtin::virasoro::<Q>();
        let s = semidirect(&adjoint_rep(&vir));
        assert_eq!(s.rank(), 2);
        assert!(s.check_axioms().passed());
        assert!(s.structure(1, 1).is_zero());
    }

    #[test]
    fn embedding_tensors() {
        let vir = builtin::virasoro::<Q>();
        let rep = adjoint_rep(&vir);
        for (t, ok) in [(ConformalMap::zero(1, 1), true), (ConformalMap::identity(1), true)] {
            assert_eq!(check_embedding_tensor(&rep, &t).unwrap().passed(), ok);
            let (s, p) = lift_embedding_tensor(&rep, &t).unwrap();
            assert_eq!(s.check_averaging(&p).unwrap().passed(), ok);
        }
        let sl2 = adjoint_rep(&builtin::cur_sl2::<Q>());
        let t = ConformalMap::from_fn(
            3,
            3,
            |r, c| {
                if matches!((r, c), (0, 1) | (2, 2)) {
                    Poly::one()
                } else {
                    Poly::zero()
                }
            },
        );
        assert!(!check_embedding_tensor(&sl2, &t).unwrap().passed());
        let (s, p) = lift_embedding_tensor(&sl2, &t).unwrap();
        assert!(!s.check_averaging(&p).unwrap().passed());
    }

    #[test]
    fn semidirect_operators_on_virasoro() {
        let vir = builtin::virasoro::<Q>();
        let t = AvgRepTriple::adjoint(&vir, &ConformalMap::identity(1)).unwrap();
        let s = semidirect(&t.rep);
        let [p1, _, p3] = semidirect_operators(&t);
        assert!(s.check_averaging(&p1).unwrap().passed());
        assert_eq!(p3, ConformalMap::identity(2));
        assert!(s.check_averaging(&p3).unwrap().passed());
        let t0 = AvgRepTriple::new(t.rep.clone(), ConformalMap::zero(1, 1), t.operator.clone()).unwrap();
        let [_, p2, _] = semidirect_operators(&t0);
        assert!(p2.is_zero());
        assert!(s.check_averaging(&p2).unwrap().passed());
    }

    #[test]
    fn tensor_square_of_virasoro() {
        // The factorwise action on the free module spanned by L_L does not
        // satisfy the composition law, and with P = Id the sum rule gives
        // φ = 2 Id, which breaks the second equality.
        let vir = builtin::virasoro::<Q>();
        let t = AvgRepTriple::adjoint(&vir, &ConformalMap::identity(1)).unwrap();
        let sq = tensor_square(&t);
        assert_eq!(sq.rep.module_basis, vec!["L_L"]);
        assert_eq!(sq.phi, ConformalMap::scalar(1, Q::from_integer(2.into())));
        assert!(!sq.rep.check_rep().passed());
        let r = sq.check_avg_rep();
        assert!(r.check("eqrep-left").unwrap().passed());
        assert!(!r.check("eqrep-right").unwrap().passed());
    }
}
