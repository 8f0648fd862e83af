//! Lie conformal algebras given by structure constants, `C[∂]`-linear maps,
//! and the averaging-operator checks.

use std::collections::HashMap;

use crate::error::{ensure, Error, Result};
use crate::report::{CheckResult, Report};
use crate::scalar::Scalar;
use crate::symalg::{dagger, first_slot, last_slot, ModElem, Poly, Var};

/// A `C[∂]`-linear map between free modules, as a matrix over `C[D]`.
/// Column `j` is the image of the j-th basis vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalMap<C> {
    rows: usize,
    cols: usize,
    entries: Vec<Poly<C>>,
}

impl<C: Scalar> ConformalMap<C> {
    /// Row-major entries; each must be a polynomial in `D` alone.
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly<C>>) -> Result<Self> {
        ensure(entries.len() == rows * cols, || format!("{} entries for a {rows}x{cols} map", entries.len()))?;
        if let Some(p) = entries.iter().find(|p| !p.uses_at_most(0)) {
            return Err(Error::VariableBound(format!("map entry {p} is not a polynomial in d alone")));
        }
        Ok(ConformalMap { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Poly<C>) -> Self {
        let entries = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| f(r, c)).collect::<Vec<_>>();
        Self::new(rows, cols, entries).expect("generated entries are D-only")
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Poly::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, C::one())
    }

    pub fn scalar(n: usize, c: C) -> Self {
        Self::from_fn(n, n, |r, k| if r == k { Poly::constant(c.clone()) } else { Poly::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &Poly<C> {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Poly<C>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn column(&self, c: usize) -> ModElem<C> {
        ModElem::from_coords((0..self.rows).map(|r| self.entry(r, c).clone()).collect())
    }

    pub fn apply(&self, v: &ModElem<C>) -> ModElem<C> {
        assert_eq!(v.rank(), self.cols, "map applied to element of wrong rank");
        let mut out = vec![Poly::zero(); self.rows];
        for (c, p) in v.nonzero() {
            for (r, o) in out.iter_mut().enumerate() {
                let e = self.entry(r, c);
                if !e.is_zero() {
                    *o += &(e * p);
                }
            }
        }
        ModElem::from_coords(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ConformalMap<C>) -> Result<Self> {
        ensure(self.cols == other.rows, || {
            format!("cannot compose {}x{} after {}x{}", self.rows, self.cols, other.rows, other.cols)
        })?;
        Ok(Self::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Poly::zero();
            for k in 0..self.cols {
                acc += &(self.entry(r, k) * other.entry(k, c));
            }
            acc
        }))
    }

    pub fn add(&self, other: &ConformalMap<C>) -> Result<Self> {
        ensure(self.rows == other.rows && self.cols == other.cols, || "shape mismatch in map addition".into())?;
        Ok(Self::from_fn(self.rows, self.cols, |r, c| self.entry(r, c) + other.entry(r, c)))
    }

    pub fn sub(&self, other: &ConformalMap<C>) -> Result<Self> {
        self.add(&other.scale(&-C::one()))
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_fn(self.rows, self.cols, |r, k| self.entry(r, k).scale(c))
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &ConformalMap<C>, b: &ConformalMap<C>, c: &ConformalMap<C>, d: &ConformalMap<C>) -> Result<Self> {
        ensure(a.rows == b.rows && c.rows == d.rows && a.cols == c.cols && b.cols == d.cols, || {
            "incompatible block shapes".into()
        })?;
        let (r0, c0) = (a.rows, a.cols);
        Ok(Self::from_fn(a.rows + c.rows, a.cols + b.cols, |r, k| match (r < r0, k < c0) {
            (true, true) => a.entry(r, k).clone(),
            (true, false) => b.entry(r, k - c0).clone(),
            (false, true) => c.entry(r - r0, k).clone(),
            (false, false) => d.entry(r - r0, k - c0).clone(),
        }))
    }

    pub fn direct_sum(a: &ConformalMap<C>, b: &ConformalMap<C>) -> Self {
        Self::block(a, &Self::zero(a.rows, b.cols), &Self::zero(b.rows, a.cols), b)
            .expect("direct sum blocks are compatible")
    }

    /// Rows `rs` and columns `cs` as a new map.
    pub fn sub_block(&self, rs: std::ops::Range<usize>, cs: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rs.start, cs.start);
        Self::from_fn(rs.len(), cs.len(), |r, c| self.entry(r0 + r, c0 + c).clone())
    }

    /// Determinant by cofactor expansion along rows, memoized on column sets.
    pub fn det(&self) -> Result<Poly<C>> {
        ensure(self.rows == self.cols, || "determinant of a non-square map".into())?;
        ensure(self.rows <= 16, || "determinant limited to rank 16".into())?;
        let mut memo = HashMap::new();
        Ok(self.det_rec(0, (1u32 << self.cols) - 1, &mut memo))
    }

    fn det_rec(&self, row: usize, cols: u32, memo: &mut HashMap<u32, Poly<C>>) -> Poly<C> {
        if cols == 0 {
            return Poly::one();
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = Poly::zero();
        let mut sign = true;
        for c in 0..self.cols {
            if cols & (1 << c) == 0 {
                continue;
            }
            let e = self.entry(row, c);
            if !e.is_zero() {
                let minor = self.det_rec(row + 1, cols & !(1 << c), memo);
                let t = e * &minor;
                if sign {
                    acc += &t;
                } else {
                    acc -= &t;
                }
            }
            sign = !sign;
        }
        memo.insert(cols, acc.clone());
        acc
    }

    /// Exact inverse over `C[∂]`; exists iff the determinant is a nonzero
    /// constant.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det()?;
        let d = det
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::NotInvertible(format!("determinant {det} is not a nonzero constant")))?;
        let n = self.rows;
        let inv_d = C::one() / d;
        let mut entries = vec![Poly::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let minor = Self::from_fn(n - 1, n - 1, |r, c| {
                    let rr = if r < i { r } else { r + 1 };
                    let cc = if c < j { c } else { c + 1 };
                    self.entry(rr, cc).clone()
                });
                let mut cof = minor.det()?.scale(&inv_d);
                if (i + j) % 2 == 1 {
                    cof = -cof;
                }
                // adjugate is the transposed cofactor matrix
                entries[j * n + i] = cof;
            }
        }
        Self::new(n, n, entries)
    }
}

/// A sesquilinear table: values `T(e_i, f_j)` for basis elements, valued in
/// `C[D, L1]^out`, extended to arbitrary arguments by the conformal rules.
/// It stores λ-brackets, actions and every two-slot cochain-like datum.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaTable<C> {
    left: usize,
    right: usize,
    out: usize,
    entries: Vec<ModElem<C>>,
}

impl<C: Scalar> LambdaTable<C> {
    pub fn new(left: usize, right: usize, out: usize, entries: Vec<ModElem<C>>) -> Result<Self> {
        ensure(entries.len() == left * right, || format!("{} entries for a {left}x{right} table", entries.len()))?;
        for v in &entries {
            ensure(v.rank() == out, || format!("table value of rank {} != {out}", v.rank()))?;
            if !v.uses_at_most(1) {
                return Err(Error::VariableBound(format!("table value {v} uses more than d, l1")));
            }
        }
        Ok(LambdaTable { left, right, out, entries })
    }

    pub fn from_fn(left: usize, right: usize, out: usize, f: impl Fn(usize, usize) -> ModElem<C>) -> Self {
        let entries = (0..left).flat_map(|i| (0..right).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect::<Vec<_>>();
        Self::new(left, right, out, entries).expect("generated table is well formed")
    }

    pub fn zero(left: usize, right: usize, out: usize) -> Self {
        Self::from_fn(left, right, out, |_, _| ModElem::zero(out))
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn out(&self) -> usize {
        self.out
    }

    pub fn get(&self, i: usize, j: usize) -> &ModElem<C> {
        &self.entries[i * self.right + j]
    }

    pub fn entries(&self) -> &[ModElem<C>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ModElem::is_zero)
    }

    /// `T(x_lam y)`: coefficients of `x` get `D ↦ -lam`, those of `y` get
    /// `D ↦ D + lam`, table values get `L1 ↦ lam`. `lam` may contain `D`,
    /// which then stands for ∂ acting on the result.
    pub fn apply(&self, x: &ModElem<C>, y: &ModElem<C>, lam: &Poly<C>) -> ModElem<C> {
        assert_eq!(x.rank(), self.left, "left argument rank");
        assert_eq!(y.rank(), self.right, "right argument rank");
        let mut out = ModElem::zero(self.out);
        let is_l1 = *lam == Poly::lambda(1);
        let xs: Vec<(usize, Poly<C>)> = x.nonzero().map(|(i, p)| (i, first_slot(p, lam))).collect();
        let ys: Vec<(usize, Poly<C>)> = y.nonzero().map(|(j, p)| (j, last_slot(p, lam))).collect();
        for (i, a) in &xs {
            for (j, b) in &ys {
                let v = self.get(*i, *j);
                if v.is_zero() {
                    continue;
                }
                let coeff = a * b;
                let v = if is_l1 { v.clone() } else { v.subst(&[(Var::lambda(1), lam.clone())]) };
                out += &v.scale(&coeff);
            }
        }
        out
    }

    /// `T(e_i lam e_j)` for basis elements.
    pub fn apply_basis(&self, i: usize, j: usize, lam: &Poly<C>) -> ModElem<C> {
        self.apply(&ModElem::basis(self.left, i), &ModElem::basis(self.right, j), lam)
    }

    /// Table of `(x, y) ↦ f(T(g x, h y))` style transformations given
    /// directly on basis pairs.
    pub fn map_values(&self, f: impl Fn(&ModElem<C>) -> ModElem<C>, out: usize) -> Self {
        Self::from_fn(self.left, self.right, out, |i, j| f(self.get(i, j)))
    }

    pub fn add(&self, other: &LambdaTable<C>) -> Result<Self> {
        ensure(self.left == other.left && self.right == other.right && self.out == other.out, || {
            "table shape mismatch".into()
        })?;
        Ok(Self::from_fn(self.left, self.right, self.out, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_values(|v| v.scale_const(c), self.out)
    }

    /// Twisted transpose: `(i, j) ↦ T(e_j, e_i)` at `L1 ↦ -D - L1`.
    pub fn twisted_transpose(&self) -> Self {
        let lam = dagger([1]);
        Self::from_fn(self.right, self.left, self.out, |j, i| self.get(i, j).subst(&[(Var::lambda(1), lam.clone())]))
    }
}

/// A finite-rank Lie conformal algebra, free over `C[∂]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieConformalAlgebra<C> {
    pub name: String,
    pub basis: Vec<String>,
    pub table: LambdaTable<C>,
}

impl<C: Scalar> LieConformalAlgebra<C> {
    pub fn new(name: impl Into<String>, basis: Vec<String>, table: LambdaTable<C>) -> Result<Self> {
        let n = basis.len();
        ensure(n > 0, || "algebra of rank zero".into())?;
        ensure(table.left == n && table.right == n && table.out == n, || {
            format!("bracket table shape does not match rank {n}")
        })?;
        Ok(LieConformalAlgebra { name: name.into(), basis, table })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_elem(&self, i: usize) -> ModElem<C> {
        ModElem::basis(self.rank(), i)
    }

    pub fn structure(&self, i: usize, j: usize) -> &ModElem<C> {
        self.table.get(i, j)
    }

    /// `[x_λ y]` with `λ = L(slot)`.
    pub fn bracket_eval(&self, x: &ModElem<C>, y: &ModElem<C>, slot: usize) -> Result<ModElem<C>> {
        ensure(x.rank() == self.rank() && y.rank() == self.rank(), || {
            format!("bracket arguments must have rank {}", self.rank())
        })?;
        Ok(self.table.apply(x, y, &Poly::lambda(slot)))
    }

    /// `[x_lam y]` for an arbitrary spectral polynomial.
    pub fn bracket(&self, x: &ModElem<C>, y: &ModElem<C>, lam: &Poly<C>) -> ModElem<C> {
        self.table.apply(x, y, lam)
    }

    pub fn check_skew(&self) -> Report<C> {
        let mut report = Report::new(format!("{} skew-symmetry", self.name));
        report.push(skew_check("skew", &self.table, &self.basis));
        report
    }

    pub fn check_jacobi(&self) -> Report<C> {
        let mut report = Report::new(format!("{} Jacobi identity", self.name));
        report.push(jacobi_check("jacobi", &self.table, &self.table, &self.basis, &self.basis));
        report
    }

    /// Skew-symmetry followed by Jacobi.
    pub fn check_axioms(&self) -> Report<C> {
        let mut report = Report::new(format!("{} axioms", self.name));
        report.push(skew_check("skew", &self.table, &self.basis));
        report.push(jacobi_check("jacobi", &self.table, &self.table, &self.basis, &self.basis));
        report
    }

    /// `P([P(x)_λ y]) = [P(x)_λ P(y)]` on basis pairs.
    pub fn check_averaging(&self, p: &ConformalMap<C>) -> Result<Report<C>> {
        self.check_square(p)?;
        let mut report = Report::new(format!("{} averaging", self.name));
        let mut c = CheckResult::new("averaging");
        let l1 = Poly::lambda(1);
        let pcols: Vec<_> = (0..self.rank()).map(|i| p.column(i)).collect();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                let lhs = p.apply(&self.bracket(&pcols[i], &self.basis_elem(j), &l1));
                let rhs = self.bracket(&pcols[i], &pcols[j], &l1);
                c.compare(&[&self.basis[i], &self.basis[j]], lhs, rhs);
            }
        }
        report.push(c);
        Ok(report)
    }

    /// The optional second identity `P([x_λ P(y)]) = [P(x)_λ P(y)]`.
    pub fn check_averaging_right(&self, p: &ConformalMap<C>) -> Result<Report<C>> {
        self.check_square(p)?;
        let mut report = Report::new(format!("{} right averaging", self.name));
        let mut c = CheckResult::new("averaging-right");
        let l1 = Poly::lambda(1);
        let pcols: Vec<_> = (0..self.rank()).map(|i| p.column(i)).collect();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                let lhs = p.apply(&self.bracket(&self.basis_elem(i), &pcols[j], &l1));
                let rhs = self.bracket(&pcols[i], &pcols[j], &l1);
                c.compare(&[&self.basis[i], &self.basis[j]], lhs, rhs);
            }
        }
        report.push(c);
        Ok(report)
    }

    /// `[x_λ y]_P = [P(x)_λ y]`. Not checked to be Lie; run the checks on
    /// the result.
    pub fn induced_bracket(&self, p: &ConformalMap<C>) -> Result<Self> {
        self.check_square(p)?;
        let l1 = Poly::lambda(1);
        let table = LambdaTable::from_fn(self.rank(), self.rank(), self.rank(), |i, j| {
            self.bracket(&p.column(i), &self.basis_elem(j), &l1)
        });
        Self::new(format!("{}_P", self.name), self.basis.clone(), table)
    }

    /// Whether `f: self → other` preserves brackets on basis pairs.
    pub fn check_morphism(&self, other: &LieConformalAlgebra<C>, f: &ConformalMap<C>) -> Result<CheckResult<C>> {
        ensure(f.rows() == other.rank() && f.cols() == self.rank(), || {
            "morphism shape does not match algebras".into()
        })?;
        let mut c = CheckResult::new("bracket-morphism");
        let l1 = Poly::lambda(1);
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                let lhs = f.apply(&self.bracket(&self.basis_elem(i), &self.basis_elem(j), &l1));
                let rhs = other.bracket(&f.column(i), &f.column(j), &l1);
                c.compare(&[&self.basis[i], &self.basis[j]], lhs, rhs);
            }
        }
        Ok(c)
    }

    fn check_square(&self, p: &ConformalMap<C>) -> Result<()> {
        ensure(p.rows() == self.rank() && p.cols() == self.rank(), || format!("operator must be {0}x{0}", self.rank()))
    }
}

/// An algebra together with an averaging operator.
#[derive(Clone, Debug, PartialEq)]
pub struct AveragingAlgebra<C> {
    pub algebra: LieConformalAlgebra<C>,
    pub operator: ConformalMap<C>,
}

impl<C: Scalar> AveragingAlgebra<C> {
    pub fn new(algebra: LieConformalAlgebra<C>, operator: ConformalMap<C>) -> Result<Self> {
        algebra.check_square(&operator)?;
        Ok(AveragingAlgebra { algebra, operator })
    }

    pub fn rank(&self) -> usize {
        self.algebra.rank()
    }

    /// Skew-symmetry, Jacobi and the averaging identity.
    pub fn check(&self) -> Report<C> {
        let mut report = self.algebra.check_axioms();
        report.subject = format!("{} averaging algebra", self.algebra.name);
        report.absorb("", self.algebra.check_averaging(&self.operator).expect("shape checked on construction"));
        report
    }

    /// Whether `f: self → other` preserves brackets and intertwines the
    /// operators.
    pub fn check_morphism(&self, other: &AveragingAlgebra<C>, f: &ConformalMap<C>) -> Result<Report<C>> {
        let mut report = Report::new("averaging morphism");
        report.push(self.algebra.check_morphism(&other.algebra, f)?);
        let mut c = CheckResult::new("operator-morphism");
        for i in 0..self.rank() {
            let lhs = f.apply(&self.operator.column(i));
            let rhs = other.operator.apply(&f.column(i));
            c.compare(&[&self.algebra.basis[i]], lhs, rhs);
        }
        report.push(c);
        Ok(report)
    }
}

/// Skew-symmetry of a square table: `T(i,j) = -T(j,i)|_{L1 ↦ -D-L1}`.
pub(crate) fn skew_check<C: Scalar>(name: &str, t: &LambdaTable<C>, basis: &[String]) -> CheckResult<C> {
    let mut c = CheckResult::new(name);
    let lam = dagger([1]);
    for i in 0..t.left() {
        for j in 0..t.right() {
            let lhs = t.get(i, j).clone();
            let rhs = -&t.get(j, i).subst(&[(Var::lambda(1), lam.clone())]);
            c.compare(&[&basis[i], &basis[j]], lhs, rhs);
        }
    }
    c
}

/// `a_λ(b_μ m) - b_μ(a_λ m) - ([a_λ b])_{λ+μ} m = 0` where `bracket` acts on
/// the algebra and `action` on the module (they coincide for Jacobi).
pub(crate) fn jacobi_check<C: Scalar>(
    name: &str,
    bracket: &LambdaTable<C>,
    action: &LambdaTable<C>,
    basis: &[String],
    module_basis: &[String],
) -> CheckResult<C> {
    let mut c = CheckResult::new(name);
    let (l1, l2) = (Poly::lambda(1), Poly::lambda(2));
    let l12 = &l1 + &l2;
    let n = bracket.left();
    let m = action.right();
    for i in 0..n {
        let ei = ModElem::basis(n, i);
        for j in 0..n {
            let ej = ModElem::basis(n, j);
            let bij = bracket.apply(&ei, &ej, &l1);
            for k in 0..m {
                let fk = ModElem::basis(m, k);
                let a = action.apply(&ei, &action.apply(&ej, &fk, &l2), &l1);
                let b = action.apply(&ej, &action.apply(&ei, &fk, &l1), &l2);
                let lhs = &a - &b;
                let rhs = action.apply(&bij, &fk, &l12);
                c.compare(&[&basis[i], &basis[j], &module_basis[k]], lhs, rhs);
            }
        }
    }
    c
}

/// Conformal associative algebra: the table holds `a ·_λ b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AssocConformalAlgebra<C> {
    pub name: String,
    pub basis: Vec<String>,
    pub table: LambdaTable<C>,
}

impl<C: Scalar> AssocConformalAlgebra<C> {
    pub fn new(name: impl Into<String>, basis: Vec<String>, table: LambdaTable<C>) -> Result<Self> {
        let n = basis.len();
        ensure(table.left == n && table.right == n && table.out == n, || {
            format!("product table shape does not match rank {n}")
        })?;
        Ok(AssocConformalAlgebra { name: name.into(), basis, table })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `(a_λ b)_{λ+μ} c = a_λ (b_μ c)` on basis triples.
    pub fn check_assoc(&self) -> Report<C> {
        let mut report = Report::new(format!("{} associativity", self.name));
        let mut c = CheckResult::new("associativity");
        let (l1, l2) = (Poly::lambda(1), Poly::lambda(2));
        let l12 = &l1 + &l2;
        let n = self.rank();
        for a in 0..n {
            for b in 0..n {
                let ab = self.table.apply_basis(a, b, &l1);
                for k in 0..n {
                    let ek = ModElem::basis(n, k);
                    let lhs = self.table.apply(&ab, &ek, &l12);
                    let bk = self.table.apply_basis(b, k, &l2);
                    let rhs = self.table.apply(&ModElem::basis(n, a), &bk, &l1);
                    c.compare(&[&self.basis[a], &self.basis[b], &self.basis[k]], lhs, rhs);
                }
            }
        }
        report.push(c);
        report
    }

    /// `[a_λ b] = a ·_λ b - b ·_{-∂-λ} a`.
    pub fn commutator_lca(&self) -> LieConformalAlgebra<C> {
        let tt = self.table.twisted_transpose();
        let n = self.rank();
        let table = LambdaTable::from_fn(n, n, n, |i, j| self.table.get(i, j) - tt.get(i, j));
        LieConformalAlgebra::new(format!("{}^-", self.name), self.basis.clone(), table)
            .expect("commutator preserves shape")
    }
}

/// `a` followed by `b`, each name of `b` suffixed with `h` until it is fresh.
pub fn disjoint_basis(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    for name in b {
        let mut name = name.clone();
        while out.contains(&name) {
            name.push('h');
        }
        out.push(name);
    }
    out
}

/// The n-fold sum with bracket `([x1_λ a1], ..., [x1_λ ai] - [a1_{-∂-λ} xi], ...)`
/// together with the operators `P = (Σ_{i≥2} x_i, 0, ..)` and `P_i = (x_i, 0, ..)`
/// for `i = 2..n`, in that order.
pub fn direct_sum_example<C: Scalar>(
    a: &LieConformalAlgebra<C>,
    n: usize,
) -> Result<(LieConformalAlgebra<C>, Vec<ConformalMap<C>>)> {
    if n < 2 {
        return Err(Error::Precondition(format!("direct sum needs n >= 2, got {n}")));
    }
    let r = a.rank();
    let total = r * n;
    let tt = a.table.twisted_transpose();
    let table = LambdaTable::from_fn(total, total, total, |u, v| {
        let (s, i) = (u / r, u % r);
        let (t, j) = (v / r, v % r);
        match (s, t) {
            (0, 0) => a.structure(i, j).embed(total, 0),
            (0, t) => a.structure(i, j).embed(total, t * r),
            (s, 0) => (-tt.get(i, j)).embed(total, s * r),
            _ => ModElem::zero(total),
        }
    });
    let basis = (1..=n).flat_map(|k| a.basis.iter().map(move |b| format!("{b}{k}"))).collect();
    let sum = LieConformalAlgebra::new(format!("{}^{n}", a.name), basis, table)?;
    let copy_to_first = |copies: &[usize]| {
        ConformalMap::from_fn(total, total, |row, col| {
            let (s, i) = (col / r, col % r);
            if row == i && copies.contains(&s) {
                Poly::one()
            } else {
                Poly::zero()
            }
        })
    };
    let mut ops = vec![copy_to_first(&(1..n).collect::<Vec<_>>())];
    for k in 1..n {
        ops.push(copy_to_first(&[k]));
    }
    Ok((sum, ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn virasoro_bracket_eval_rules() {
        let vir = builtin::virasoro::<Q>();
        let e = vir.basis_elem(0);
        let de = e.scale(&Poly::d());
        let base = vir.bracket_eval(&e, &e, 1).unwrap();
        assert_eq!(base.coord(0).to_string(), "d + 2*l1");
        let left = vir.bracket_eval(&de, &e, 1).unwrap();
        assert_eq!(left, base.scale(&-Poly::lambda(1)));
        let right = vir.bracket_eval(&e, &de, 1).unwrap();
        assert_eq!(right, base.scale(&(&Poly::d() + &Poly::lambda(1))));
    }

    #[test]
    fn skew_examples() {
        assert!(builtin::virasoro::<Q>().check_skew().passed());
        assert!(builtin::abelian::<Q>(2).check_skew().passed());
        let bad = builtin::rank_one("bad", &Poly::<Q>::lambda(1));
        let r = bad.check_skew();
        assert!(!r.passed());
        assert_eq!(r.checks[0].violations[0].tuple, vec!["L", "L"]);
    }

    #[test]
    fn jacobi_examples() {
        assert!(builtin::virasoro::<Q>().check_jacobi().passed());
        assert!(builtin::cur_sl2::<Q>().check_jacobi().passed());
        let p = &Poly::d() + &Poly::lambda(1).scale(&q(3));
        assert!(!builtin::rank_one("bad", &p).check_jacobi().passed());
    }

    #[test]
    fn averaging_examples() {
        let vir = builtin::virasoro::<Q>();
        for c in [q(0), q(1), q(2), Q::new(1.into(), 2.into())] {
            assert!(vir.check_averaging(&ConformalMap::scalar(1, c)).unwrap().passed());
        }
        let (sum2, ops) = direct_sum_example(&vir, 2).unwrap();
        assert!(sum2.check_averaging(&ops[0]).unwrap().passed());
        let (sum3, ops3) = direct_sum_example(&vir, 3).unwrap();
        for op in &ops3 {
            assert!(sum3.check_averaging(op).unwrap().passed());
        }
        assert!(direct_sum_example(&vir, 1).is_err());
    }

    #[test]
    fn direct_sum_first_component_is_original_bracket() {
        let vir = builtin::virasoro::<Q>();
        let (sum, _) = direct_sum_example(&vir, 2).unwrap();
        assert_eq!(sum.structure(0, 0).coord(0), vir.structure(0, 0).coord(0));
        assert!(sum.check_axioms().passed());
    }

    #[test]
    fn induced_brackets() {
        let vir = builtin::virasoro::<Q>();
        assert_eq!(vir.induced_bracket(&ConformalMap::identity(1)).unwrap().table, vir.table);
        assert!(vir.induced_bracket(&ConformalMap::zero(1, 1)).unwrap().table.is_zero());
        let two = vir.induced_bracket(&ConformalMap::scalar(1, q(2))).unwrap();
        assert_eq!(two.structure(0, 0).coord(0).to_string(), "2*d + 4*l1");
    }

    #[test]
    fn commutator_of_trivial_products() {
        let unit = LambdaTable::from_fn(1, 1, 1, |_, _| ModElem::basis(1, 0));
        let b = AssocConformalAlgebra::<Q>::new("B", vec!["E".into()], unit).unwrap();
        assert!(b.check_assoc().passed());
        let lie = b.commutator_lca();
        assert!(lie.table.is_zero());
        assert!(lie.check_skew().passed());
    }

    #[test]
    fn polynomial_matrix_inverse() {
        let d = Poly::<Q>::d();
        let m = ConformalMap::new(2, 2, vec![Poly::one(), d.clone(), Poly::zero(), Poly::int(2)]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.compose(&inv).unwrap(), ConformalMap::identity(2));
        let sing = ConformalMap::new(1, 1, vec![d]).unwrap();
        assert!(matches!(sing.inverse(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn maps_reject_lambda_entries() {
        assert!(ConformalMap::<Q>::new(1, 1, vec![Poly::lambda(1)]).is_err());
    }
}
