use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::vars::{same_vars, Vars};
use crate::error::{Error, Result};

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<i32>);

impl Monomial {
    pub fn new(exps: Vec<i32>) -> Self {
        Monomial(exps)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_sub(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn pow(&self, e: i32) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|a| a.checked_mul(e).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn inv(&self) -> Monomial {
        self.pow(-1)
    }

    pub fn meet(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn join(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficient rings used by [`LaurentPoly`].
pub trait Coeff:
    Clone
    + Eq
    + Ord
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn try_div(&self, d: &Self) -> Option<Self>;
    fn is_neg(&self) -> bool;
    fn abs_val(&self) -> Self;
}

impl Coeff for BigInt {
    fn try_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

impl Coeff for BigRational {
    fn try_div(&self, d: &Self) -> Option<Self> {
        (!d.is_zero()).then(|| self / d)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

/// Sparse Laurent polynomial over an explicit variable set.
#[derive(Clone)]
pub struct LaurentPoly<C: Coeff = BigInt> {
    vars: Vars,
    terms: BTreeMap<Monomial, C>,
}

pub type Poly = LaurentPoly<BigInt>;
pub type QPoly = LaurentPoly<BigRational>;

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero(vars: &Vars) -> Self {
        LaurentPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, C::one())
    }

    pub fn constant(vars: &Vars, c: C) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn monomial(vars: &Vars, exps: Vec<i32>, c: C) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(exps), c);
        }
        LaurentPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, C::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i32>, C)>>(vars: &Vars, terms: I) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms from the largest monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, exps: &[i32]) -> C {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn is_monomial(&self) -> Option<(&Monomial, &C)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self.is_monomial(), Some((m, c)) if m.is_one() && c.is_one())
    }

    pub fn all_positive(&self) -> bool {
        self.terms.values().all(|c| !c.is_neg())
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if same_vars(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::VarMismatch(
                self.vars.to_string(),
                other.vars.to_string(),
            ))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Componentwise minimum of exponents over all terms (the monomial content).
    pub fn min_exponents(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = it.next().cloned().unwrap_or_else(|| Monomial::one(self.nvars()));
        it.fold(first, |acc, m| acc.meet(m))
    }

    pub fn max_exponents(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = it.next().cloned().unwrap_or_else(|| Monomial::one(self.nvars()));
        it.fold(first, |acc, m| acc.join(m))
    }

    /// Exact division in the Laurent ring; fails if a nonzero remainder is left.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        self.check_vars(d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.vars));
        }
        let sa = self.min_exponents();
        let sd = d.min_exponents();
        let mut r = self.mul_monomial(&sa.inv());
        let b = d.mul_monomial(&sd.inv());
        let (lbm, lbc) = {
            let (m, c) = b.leading().expect("nonzero");
            (m.clone(), c.clone())
        };
        let mut q = Self::zero(&self.vars);
        while let Some((lrm, lrc)) = r.leading() {
            if !lbm.divides(lrm) {
                return Err(Error::InexactDivision);
            }
            let c = lrc.try_div(&lbc).ok_or(Error::InexactDivision)?;
            let m = lrm.div(&lbm);
            for (bm, bc) in &b.terms {
                r.add_term(bm.mul(&m), -(bc.clone() * c.clone()));
            }
            q.add_term(m, c);
        }
        Ok(q.mul_monomial(&sa.div(&sd)))
    }

    /// Substitute variable `i` by the monomial `images[i]` over `vars`.
    pub fn substitute_monomials(&self, vars: &Vars, images: &[Monomial]) -> Self {
        assert_eq!(images.len(), self.nvars());
        let mut out = Self::zero(vars);
        for (m, c) in &self.terms {
            let mut e = Monomial::one(vars.len());
            for (i, &a) in m.0.iter().enumerate() {
                if a != 0 {
                    e = e.mul(&images[i].pow(a));
                }
            }
            out.add_term(e, c.clone());
        }
        out
    }

    /// Replace the listed variables by constants; the variable set is kept.
    pub fn specialize(&self, values: &[(usize, C)]) -> Result<Self> {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let mut coef = c.clone();
            for (i, v) in values {
                let a = e[*i];
                if a == 0 {
                    continue;
                }
                let p = cpow(v, a.unsigned_abs());
                coef = if a > 0 {
                    coef * p
                } else {
                    coef.try_div(&p).ok_or(Error::DivisionByZero)?
                };
                e[*i] = 0;
            }
            out.add_term(Monomial(e), coef);
        }
        Ok(out)
    }

    /// Re-express over another variable set by mapping variable `i` to `map[i]`.
    pub fn embed(&self, vars: &Vars, map: &[usize]) -> Self {
        let images: Vec<Monomial> = map
            .iter()
            .map(|&j| {
                let mut e = vec![0; vars.len()];
                e[j] = 1;
                Monomial(e)
            })
            .collect();
        self.substitute_monomials(vars, &images)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        let mut out = LaurentPoly::<D>::zero(&self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Variables whose exponent is nonzero in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] != 0))
            .collect()
    }
}

pub(crate) fn cpow<C: Coeff>(c: &C, e: u32) -> C {
    let mut out = C::one();
    for _ in 0..e {
        out = out * c.clone();
    }
    out
}

impl Poly {
    /// Gcd of the coefficients, made positive.
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn to_rational(&self) -> QPoly {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }
}

impl<C: Coeff> PartialEq for LaurentPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        same_vars(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl<C: Coeff> Eq for LaurentPoly<C> {}

impl<C: Coeff> PartialOrd for LaurentPoly<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by terms only; comparing polynomials over different variable sets is meaningless.
impl<C: Coeff> Ord for LaurentPoly<C> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().rev().cmp(other.terms.iter().rev())
    }
}

impl<C: Coeff> std::hash::Hash for LaurentPoly<C>
where
    C: std::hash::Hash,
{
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let neg = c.is_neg();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs_val();
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                parts.push(a.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.vars.name(i).to_string()),
                    _ => parts.push(format!("{}^{}", self.vars.name(i), e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl<C: Coeff> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        self.try_add(rhs).expect("variable set mismatch")
    }
}

impl<C: Coeff> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        self.try_sub(rhs).expect("variable set mismatch")
    }
}

impl<C: Coeff> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        self.try_mul(rhs).expect("variable set mismatch")
    }
}

impl<'a, C: Coeff> Mul<&'a LaurentPoly<C>> for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: &'a LaurentPoly<C>) -> LaurentPoly<C> {
        self.try_mul(rhs).expect("variable set mismatch")
    }
}

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        self.scale(&(-C::one()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::vars::VarSet;

    fn tx() -> Vars {
        VarSet::new(["X1", "X2", "t1", "t2"])
    }

    fn p(v: &Vars, terms: &[(&[i32], i64)]) -> Poly {
        Poly::from_terms(v, terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
    }

    #[test]
    fn distributivity_of_binomials() {
        let v = tx();
        let a = p(&v, &[(&[0, 1, 0, 1], 1), (&[0, 0, 0, 0], 1)]);
        let b = p(&v, &[(&[1, 0, 1, 0], 1), (&[0, 0, 0, 0], 1)]);
        let prod = &a * &b;
        assert_eq!(prod.to_string(), "X1*X2*t1*t2 + X1*t1 + X2*t2 + 1");
    }

    #[test]
    fn self_cancellation() {
        let v = VarSet::new(["y"]);
        let a = p(&v, &[(&[1], 1), (&[0], 1)]);
        assert_eq!((&a * &a).exact_div(&a).unwrap(), a);
    }

    #[test]
    fn inexact_division_is_reported() {
        let v = tx();
        let num = p(&v, &[(&[1, 1, 1, 1], 1), (&[1, 0, 1, 0], 1), (&[0, 0, 0, 0], 1)]);
        let den = p(&v, &[(&[1, 0, 1, 0], 1), (&[0, 0, 0, 0], 1)]);
        assert_eq!(num.exact_div(&den), Err(Error::InexactDivision));
        // brute check: den * q never reproduces num for the only candidate quotient degrees
        let q = p(&v, &[(&[0, 1, 0, 1], 1)]);
        assert_ne!(&den * &q, num);
    }

    #[test]
    fn laurent_division_with_monomial_shifts() {
        let v = VarSet::new(["x", "y"]);
        let a = p(&v, &[(&[-2, 1], 1), (&[-1, 0], 1)]);
        let b = p(&v, &[(&[0, 1], 1), (&[1, 0], 1)]);
        let q = a.exact_div(&b).unwrap();
        assert_eq!(q, p(&v, &[(&[-2, 0], 1)]));
    }

    #[test]
    fn var_mismatch_is_an_error() {
        let a = Poly::one(&VarSet::new(["x"]));
        let b = Poly::one(&VarSet::new(["y"]));
        assert!(matches!(a.try_add(&b), Err(Error::VarMismatch(..))));
    }

    #[test]
    fn display_orders_by_graded_lex() {
        let v = VarSet::new(["x", "y"]);
        let a = p(&v, &[(&[0, 0], 1), (&[0, 2], -3), (&[1, 0], 2), (&[1, 1], 1)]);
        assert_eq!(a.to_string(), "x*y - 3*y^2 + 2*x + 1");
    }

    #[test]
    fn specialize_negative_exponent_needs_field() {
        let v = VarSet::new(["x", "t"]);
        let a = p(&v, &[(&[1, -1], 1)]).to_rational();
        let s = a
            .specialize(&[(1, BigRational::from_integer(3.into()))])
            .unwrap();
        assert_eq!(s.to_string(), "1/3*x");
    }
}
