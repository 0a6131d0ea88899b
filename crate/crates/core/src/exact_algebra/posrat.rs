use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::laurent::{Monomial, Poly, QPoly};
use super::ratfn::RatFn;
use super::vars::{same_vars, Vars};
use crate::error::{Error, Result};

/// Subtraction-free rational function `scale * unit * prod(factor^exp)`.
///
/// Factor keys are positive polynomials with integer content 1 and no monomial
/// content. Nothing is ever put over a common signed denominator; equality is
/// decided by cross-multiplying expansions.
#[derive(Clone)]
pub struct PosRatFunc {
    vars: Vars,
    scale: BigRational,
    unit: Monomial,
    factors: BTreeMap<Poly, i32>,
}

/// Split a positive polynomial into integer content, monomial content and a
/// canonical key (absent when the remaining polynomial is 1).
pub fn canonicalize(p: &Poly) -> (BigInt, Monomial, Option<Poly>) {
    assert!(!p.is_zero(), "canonicalize of zero");
    let c = p.content();
    let m = p.min_exponents();
    let mut q = p.mul_monomial(&m.inv());
    if !c.is_one() {
        q = q.map_coeffs(|a| a / &c);
    }
    if q.is_one() {
        (c, m, None)
    } else {
        (c, m, Some(q))
    }
}

impl PosRatFunc {
    pub fn one(vars: &Vars) -> Self {
        PosRatFunc {
            vars: vars.clone(),
            scale: BigRational::one(),
            unit: Monomial::one(vars.len()),
            factors: BTreeMap::new(),
        }
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, Monomial::new(e))
    }

    pub fn monomial(vars: &Vars, m: Monomial) -> Self {
        assert_eq!(m.exps().len(), vars.len());
        PosRatFunc {
            vars: vars.clone(),
            scale: BigRational::one(),
            unit: m,
            factors: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: BigRational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::NotPositive(c.to_string()));
        }
        let mut f = Self::one(vars);
        f.scale = c;
        Ok(f)
    }

    /// Wrap a polynomial with positive coefficients.
    pub fn from_poly(p: &Poly) -> Result<Self> {
        if p.is_zero() || !p.all_positive() {
            return Err(Error::NotPositive(p.to_string()));
        }
        let (c, m, key) = canonicalize(p);
        let mut f = PosRatFunc {
            vars: p.vars().clone(),
            scale: BigRational::from_integer(c),
            unit: m,
            factors: BTreeMap::new(),
        };
        if let Some(k) = key {
            f.factors.insert(k, 1);
        }
        Ok(f)
    }

    /// `num / den` for positive polynomials.
    pub fn from_fraction(num: &Poly, den: &Poly) -> Result<Self> {
        Ok(Self::from_poly(num)?.div(&Self::from_poly(den)?))
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn unit(&self) -> &Monomial {
        &self.unit
    }

    pub fn factors(&self) -> &BTreeMap<Poly, i32> {
        &self.factors
    }

    /// `Some(m)` when the value is exactly the monomial `m` with coefficient 1.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        (self.factors.is_empty() && self.scale.is_one()).then_some(&self.unit)
    }

    fn assert_vars(&self, other: &Self) {
        assert!(
            same_vars(&self.vars, &other.vars),
            "variable set mismatch: {} vs {}",
            self.vars,
            other.vars
        );
    }

    fn insert_factor(&mut self, key: Poly, e: i32) {
        if e == 0 {
            return;
        }
        let entry = self.factors.entry(key).or_insert(0);
        *entry = entry.checked_add(e).expect("exponent overflow");
        self.factors.retain(|_, v| *v != 0);
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_vars(other);
        let mut out = self.clone();
        out.scale = &self.scale * &other.scale;
        out.unit = self.unit.mul(&other.unit);
        for (k, e) in &other.factors {
            out.insert_factor(k.clone(), *e);
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = self.clone();
        out.unit = out.unit.mul(m);
        out
    }

    pub fn pow(&self, e: i32) -> Self {
        if e == 0 {
            return Self::one(&self.vars);
        }
        let scale = if e > 0 {
            num_traits::pow(self.scale.clone(), e as usize)
        } else {
            num_traits::pow(self.scale.recip(), e.unsigned_abs() as usize)
        };
        PosRatFunc {
            vars: self.vars.clone(),
            scale,
            unit: self.unit.pow(e),
            factors: self
                .factors
                .iter()
                .map(|(k, v)| (k.clone(), v.checked_mul(e).expect("exponent overflow")))
                .collect(),
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::sum(&[self.clone(), other.clone()])
    }

    /// Sum of subtraction-free functions. Factors common to every summand are
    /// pulled out; the new numerator is trial-divided by the denominator factors.
    pub fn sum(items: &[PosRatFunc]) -> Self {
        assert!(!items.is_empty(), "empty sum");
        if items.len() == 1 {
            return items[0].clone();
        }
        let vars = items[0].vars.clone();
        for it in items {
            items[0].assert_vars(it);
        }
        let unit = items[1..]
            .iter()
            .fold(items[0].unit.clone(), |acc, it| acc.meet(&it.unit));
        let mut keys: BTreeMap<Poly, i32> = BTreeMap::new();
        for it in items {
            for k in it.factors.keys() {
                keys.entry(k.clone()).or_insert(0);
            }
        }
        for (k, common) in keys.iter_mut() {
            *common = items
                .iter()
                .map(|it| it.factors.get(k).copied().unwrap_or(0))
                .min()
                .unwrap_or(0);
        }
        let l = items
            .iter()
            .fold(BigInt::one(), |acc, it| acc.lcm(it.scale.denom()));
        let mut total = Poly::zero(&vars);
        for it in items {
            let c = it.scale.numer() * (&l / it.scale.denom());
            let mut term = Poly::monomial(&vars, it.unit.div(&unit).exps().to_vec(), c);
            for (k, common) in &keys {
                let e = it.factors.get(k).copied().unwrap_or(0) - common;
                if e > 0 {
                    term = term * &k.pow(e as u32);
                }
            }
            total = &total + &term;
        }
        let mut out = PosRatFunc {
            vars: vars.clone(),
            scale: BigRational::new(BigInt::one(), l),
            unit,
            factors: keys.into_iter().filter(|(_, e)| *e != 0).collect(),
        };
        let dens: Vec<Poly> = out
            .factors
            .iter()
            .filter(|(_, e)| **e < 0)
            .map(|(k, _)| k.clone())
            .collect();
        for d in dens {
            while out.factors.get(&d).copied().unwrap_or(0) < 0 {
                match total.exact_div(&d) {
                    Ok(q) => {
                        total = q;
                        out.insert_factor(d.clone(), 1);
                    }
                    Err(_) => break,
                }
            }
        }
        out.mul(&Self::from_poly(&total).expect("sum of positive terms"))
    }

    /// `(num, den)` with `num` a Laurent polynomial carrying the unit and `den`
    /// a polynomial without monomial content. Both have positive coefficients.
    pub fn expand(&self) -> (Poly, Poly) {
        let mut num = Poly::monomial(&self.vars, self.unit.exps().to_vec(), self.scale.numer().clone());
        let mut den = Poly::constant(&self.vars, self.scale.denom().clone());
        for (k, e) in &self.factors {
            if *e > 0 {
                num = num * &k.pow(*e as u32);
            } else {
                den = den * &k.pow(e.unsigned_abs());
            }
        }
        (num, den)
    }

    /// Like [`expand`](Self::expand) but with negative unit exponents moved to
    /// the denominator, so both sides are ordinary polynomials.
    pub fn expand_cleared(&self) -> (Poly, Poly) {
        let (num, den) = self.expand();
        let shift = num.min_exponents();
        let neg = Monomial::new(shift.exps().iter().map(|&e| (-e).max(0)).collect());
        (num.mul_monomial(&neg), den.mul_monomial(&neg))
    }

    pub fn try_rat_equal(&self, other: &Self) -> Result<bool> {
        if !same_vars(&self.vars, &other.vars) {
            return Err(Error::VarMismatch(self.vars.to_string(), other.vars.to_string()));
        }
        if self.scale == other.scale && self.unit == other.unit && self.factors == other.factors {
            return Ok(true);
        }
        let (n1, d1) = self.expand();
        let (n2, d2) = other.expand();
        Ok(&n1 * &d2 == &n2 * &d1)
    }

    /// Equality of rational functions via cross-multiplication.
    pub fn rat_equal(&self, other: &Self) -> bool {
        self.try_rat_equal(other).expect("variable set mismatch")
    }

    /// Cancel denominator factors that divide the expanded numerator.
    pub fn simplify(&self) -> Self {
        let dens: Vec<(Poly, i32)> = self
            .factors
            .iter()
            .filter(|(_, e)| **e < 0)
            .map(|(k, e)| (k.clone(), *e))
            .collect();
        if dens.is_empty() {
            return self.clone();
        }
        let mut n = Poly::one(&self.vars);
        for (k, e) in &self.factors {
            if *e > 0 {
                n = n * &k.pow(*e as u32);
            }
        }
        let mut changed = false;
        let mut remaining: Vec<(Poly, i32)> = Vec::new();
        for (k, e) in dens {
            let mut left = e;
            while left < 0 {
                match n.exact_div(&k) {
                    Ok(q) => {
                        n = q;
                        left += 1;
                        changed = true;
                    }
                    Err(_) => break,
                }
            }
            if left < 0 {
                remaining.push((k, left));
            }
        }
        if !changed {
            return self.clone();
        }
        let mut out = Self::monomial(&self.vars, self.unit.clone());
        out.scale = self.scale.clone();
        out = out.mul(&Self::from_poly(&n).expect("positive"));
        for (k, e) in remaining {
            out.insert_factor(k, e);
        }
        out
    }

    /// The Laurent polynomial equal to `self`, if the denominator cancels.
    pub fn as_laurent(&self) -> Option<Poly> {
        let s = self.simplify();
        if s.factors.values().any(|&e| e < 0) || !s.scale.denom().is_one() {
            return None;
        }
        let (num, _) = s.expand();
        Some(num)
    }

    /// Substitute variable `i` by `images[i]`; all images share a variable set.
    pub fn substitute(&self, images: &[PosRatFunc]) -> Self {
        assert_eq!(images.len(), self.vars.len(), "one image per variable");
        let vars = images
            .first()
            .map(|f| f.vars.clone())
            .unwrap_or_else(|| self.vars.clone());
        if images.iter().all(|f| f.as_monomial().is_some()) {
            let ms: Vec<Monomial> = images.iter().map(|f| f.unit.clone()).collect();
            return self.substitute_monomials(&vars, &ms);
        }
        let mono = |m: &Monomial| -> PosRatFunc {
            m.exps()
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .fold(Self::one(&vars), |acc, (i, &a)| acc.mul(&images[i].pow(a)))
        };
        let mut out = mono(&self.unit);
        out.scale = &out.scale * &self.scale;
        for (k, e) in &self.factors {
            let terms: Vec<PosRatFunc> = k
                .terms()
                .map(|(m, c)| {
                    let mut t = mono(m);
                    t.scale = &t.scale * BigRational::from_integer(c.clone());
                    t
                })
                .collect();
            out = out.mul(&Self::sum(&terms).pow(*e));
        }
        out
    }

    /// Substitute variable `i` by the monomial `images[i]` over `vars`.
    pub fn substitute_monomials(&self, vars: &Vars, images: &[Monomial]) -> Self {
        let mut unit = Monomial::one(vars.len());
        for (i, &a) in self.unit.exps().iter().enumerate() {
            if a != 0 {
                unit = unit.mul(&images[i].pow(a));
            }
        }
        let mut out = Self::monomial(vars, unit);
        out.scale = self.scale.clone();
        for (k, e) in &self.factors {
            let p = k.substitute_monomials(vars, images);
            out = out.mul(&Self::from_poly(&p).expect("positive").pow(*e));
        }
        out
    }

    /// Re-express over `vars`, sending variable `i` to `vars[map[i]]`.
    pub fn embed(&self, vars: &Vars, map: &[usize]) -> Self {
        let images: Vec<Monomial> = map
            .iter()
            .map(|&j| {
                let mut e = vec![0; vars.len()];
                e[j] = 1;
                Monomial::new(e)
            })
            .collect();
        self.substitute_monomials(vars, &images)
    }

    /// Specialize some variables to rational constants.
    pub fn specialize(&self, values: &[(usize, BigRational)]) -> Result<RatFn<BigRational>> {
        let (num, den) = self.expand();
        let num: QPoly = num.to_rational().specialize(values)?;
        let den: QPoly = den.to_rational().specialize(values)?;
        RatFn::new(num, den)
    }

    /// Variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        let (n, d) = self.expand();
        let mut s = n.support_vars();
        s.extend(d.support_vars());
        s.sort_unstable();
        s.dedup();
        s
    }

    /// `num / den` with both sides expanded.
    pub fn to_fraction_string(&self) -> String {
        let (n, d) = self.expand_cleared();
        let wrap = |p: &Poly, product: bool| {
            let s = p.to_string();
            if p.len() > 1 || (product && s.contains('*')) {
                format!("({s})")
            } else {
                s
            }
        };
        if d.is_one() {
            n.to_string()
        } else {
            format!("{}/{}", wrap(&n, false), wrap(&d, true))
        }
    }
}

impl fmt::Debug for PosRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PosRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.scale.is_one() {
            parts.push(self.scale.to_string());
        }
        for (i, &e) in self.unit.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.vars.name(i).to_string()),
                _ => parts.push(format!("{}^{}", self.vars.name(i), e)),
            }
        }
        for (k, e) in &self.factors {
            if *e == 1 {
                parts.push(format!("({k})"));
            } else {
                parts.push(format!("({k})^{e}"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}
