//! Sparse multivariate polynomials in `D, L1..L9` and vectors of them.
//!
//! `D` stands for the derivation of the ambient `C[∂]`-module and `Lk` for the
//! k-th spectral parameter. All arithmetic is exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::scalar::Scalar;

/// Largest lambda index.
pub const MAX_LAMBDA: usize = 9;
const NVARS: usize = MAX_LAMBDA + 1;

/// A variable: `D` (index 0) or `Lk` (index k, 1..=9).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(u8);

impl Var {
    pub const D: Var = Var(0);

    /// The lambda variable `Lk`. Panics unless `1 <= k <= 9`.
    pub fn lambda(k: usize) -> Var {
        assert!((1..=MAX_LAMBDA).contains(&k), "lambda index {k} out of range");
        Var(k as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_d(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_d() {
            write!(f, "d")
        } else {
            write!(f, "l{}", self.0)
        }
    }
}

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then exponents compared from `D` upwards.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial([u16; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Monomial(e)
    }

    /// Variables with positive exponent, in index order.
    pub fn support(&self) -> impl Iterator<Item = (Var, u16)> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (Var(i as u8), e))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in self.support() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Polynomial with exact coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(C::int(n))
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::term(C::one(), Monomial::var(v))
    }

    pub fn d() -> Self {
        Self::var(Var::D)
    }

    pub fn lambda(k: usize) -> Self {
        Self::var(Var::lambda(k))
    }

    /// `L1 + ... + Lk` over the given indices.
    pub fn lambda_sum(ks: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::zero();
        for k in ks {
            p += &Self::lambda(k);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The constant coefficient when the polynomial is constant.
    pub fn as_constant(&self) -> Option<C> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.get(&Monomial::one()).cloned().unwrap_or_else(C::zero))
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u16> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    /// True when only `D` and `L1..=max_lambda` occur.
    pub fn uses_at_most(&self, max_lambda: usize) -> bool {
        self.terms.keys().all(|m| m.support().all(|(v, _)| v.index() <= max_lambda))
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut seen = [false; NVARS];
        for m in self.terms.keys() {
            for (v, _) in m.support() {
                seen[v.index()] = true;
            }
        }
        (0..NVARS).filter(|&i| seen[i]).map(|i| Var(i as u8)).collect()
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (*m, a.clone() * c.clone())).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Simultaneous substitution of variables by polynomials. Variables in
    /// the images are never substituted again.
    pub fn subst(&self, bindings: &[(Var, Poly<C>)]) -> Self {
        if bindings.is_empty() || self.is_zero() {
            return self.clone();
        }
        let mut image: [Option<&Poly<C>>; NVARS] = [None; NVARS];
        for (v, p) in bindings {
            image[v.index()] = Some(p);
        }
        // Group terms by the exponents of the bound variables so that each
        // product of image powers is computed once.
        let mut groups: BTreeMap<Monomial, Poly<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut bound = Monomial::one();
            let mut free = *m;
            for i in 0..NVARS {
                if image[i].is_some() {
                    bound.0[i] = m.0[i];
                    free.0[i] = 0;
                }
            }
            groups.entry(bound).or_default().add_term(free, c.clone());
        }
        let mut powers: Vec<Vec<Poly<C>>> = vec![Vec::new(); NVARS];
        let mut out = Self::zero();
        for (bound, rest) in groups {
            let mut factor = rest;
            for (v, e) in bound.support() {
                let img = image[v.index()].expect("bound variable has an image");
                let cache = &mut powers[v.index()];
                if cache.is_empty() {
                    cache.push(Self::one());
                }
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * img;
                    cache.push(next);
                }
                factor = &factor * &cache[e as usize];
            }
            out += &factor;
        }
        out
    }

    /// Shorthand for a single-variable substitution.
    pub fn subst1(&self, v: Var, p: &Poly<C>) -> Self {
        self.subst(&[(v, p.clone())])
    }

    /// Converts coefficients into another scalar type.
    pub fn map_coeffs<C2: Scalar>(&self, f: impl Fn(&C) -> C2) -> Poly<C2> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }
}

impl<C: Scalar> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                // The grammar binds a leading unary minus to the atom before
                // '^' applies, so "-d^2" would read back as (-d)^2.
                let first_power = m.support().next().map(|(_, e)| e > 1).unwrap_or(false);
                if i == 0 && neg && first_power {
                    write!(f, "1*{m}")?;
                } else {
                    write!(f, "{m}")?;
                }
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<'a, C: Scalar> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &'a Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Scalar> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(mut self, rhs: Poly<C>) -> Poly<C> {
        self += &rhs;
        self
    }
}

impl<'a, C: Scalar> AddAssign<&'a Poly<C>> for Poly<C> {
    fn add_assign(&mut self, rhs: &'a Poly<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl<'a, C: Scalar> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &'a Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<C: Scalar> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(mut self, rhs: Poly<C>) -> Poly<C> {
        self -= &rhs;
        self
    }
}

impl<'a, C: Scalar> SubAssign<&'a Poly<C>> for Poly<C> {
    fn sub_assign(&mut self, rhs: &'a Poly<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl<C: Scalar> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

impl<C: Scalar> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl<'a, C: Scalar> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &'a Poly<C>) -> Poly<C> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Scalar> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Poly<C>) -> Poly<C> {
        &self * &rhs
    }
}

/// Element of the free module `C[D, L1..L9]^rank`; `D` acts componentwise.
#[derive(Clone, PartialEq, Debug)]
pub struct ModElem<C> {
    coords: Vec<Poly<C>>,
}

impl<C: Scalar> ModElem<C> {
    pub fn zero(rank: usize) -> Self {
        ModElem { coords: vec![Poly::zero(); rank] }
    }

    /// The i-th basis vector.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.coords[i] = Poly::one();
        v
    }

    pub fn from_coords(coords: Vec<Poly<C>>) -> Self {
        ModElem { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Poly<C>] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Poly<C> {
        &self.coords[i]
    }

    pub fn into_coords(self) -> Vec<Poly<C>> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Poly::is_zero)
    }

    /// Nonzero coordinates with their indices.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &Poly<C>)> {
        self.coords.iter().enumerate().filter(|(_, p)| !p.is_zero())
    }

    pub fn scale(&self, p: &Poly<C>) -> Self {
        ModElem { coords: self.coords.iter().map(|c| c * p).collect() }
    }

    pub fn scale_const(&self, c: &C) -> Self {
        ModElem { coords: self.coords.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn subst(&self, bindings: &[(Var, Poly<C>)]) -> Self {
        ModElem { coords: self.coords.iter().map(|p| p.subst(bindings)).collect() }
    }

    pub fn uses_at_most(&self, max_lambda: usize) -> bool {
        self.coords.iter().all(|p| p.uses_at_most(max_lambda))
    }

    /// Concatenation `(self, other)` in a direct sum.
    pub fn concat(&self, other: &ModElem<C>) -> Self {
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().cloned());
        ModElem { coords }
    }

    /// Coordinates `range` as an element of the summand.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        ModElem { coords: self.coords[range].to_vec() }
    }

    /// Zero-padded embedding into rank `total` at `offset`.
    pub fn embed(&self, total: usize, offset: usize) -> Self {
        let mut out = Self::zero(total);
        for (i, p) in self.coords.iter().enumerate() {
            out.coords[offset + i] = p.clone();
        }
        out
    }

    pub fn map_coeffs<C2: Scalar>(&self, f: impl Fn(&C) -> C2 + Copy) -> ModElem<C2> {
        ModElem { coords: self.coords.iter().map(|p| p.map_coeffs(f)).collect() }
    }
}

impl<C: Scalar> fmt::Display for ModElem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl<'a, C: Scalar> Add<&'a ModElem<C>> for &'a ModElem<C> {
    type Output = ModElem<C>;
    fn add(self, rhs: &'a ModElem<C>) -> ModElem<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a, C: Scalar> AddAssign<&'a ModElem<C>> for ModElem<C> {
    fn add_assign(&mut self, rhs: &'a ModElem<C>) {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in module addition");
        for (a, b) in self.coords.iter_mut().zip(rhs.coords.iter()) {
            *a += b;
        }
    }
}

impl<'a, C: Scalar> Sub<&'a ModElem<C>> for &'a ModElem<C> {
    type Output = ModElem<C>;
    fn sub(self, rhs: &'a ModElem<C>) -> ModElem<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a, C: Scalar> SubAssign<&'a ModElem<C>> for ModElem<C> {
    fn sub_assign(&mut self, rhs: &'a ModElem<C>) {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in module subtraction");
        for (a, b) in self.coords.iter_mut().zip(rhs.coords.iter()) {
            *a -= b;
        }
    }
}

impl<C: Scalar> Neg for &ModElem<C> {
    type Output = ModElem<C>;
    fn neg(self) -> ModElem<C> {
        ModElem { coords: self.coords.iter().map(|p| -p).collect() }
    }
}

/// `D ↦ -lam`: the rule for coefficients of a non-final argument.
pub fn first_slot<C: Scalar>(p: &Poly<C>, lam: &Poly<C>) -> Poly<C> {
    p.subst1(Var::D, &-lam)
}

/// `D ↦ D + lam`: the rule for coefficients of the final argument.
pub fn last_slot<C: Scalar>(p: &Poly<C>, lam: &Poly<C>) -> Poly<C> {
    if lam.is_zero() {
        return p.clone();
    }
    p.subst1(Var::D, &(&Poly::d() + lam))
}

/// `-D - (L_{k} for k in ks)`, the dual of the other spectral parameters.
pub fn dagger<C: Scalar>(ks: impl IntoIterator<Item = usize>) -> Poly<C> {
    -(&Poly::d() + &Poly::lambda_sum(ks))
}
