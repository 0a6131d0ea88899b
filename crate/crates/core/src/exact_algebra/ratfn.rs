use std::fmt;

use super::laurent::{Coeff, LaurentPoly, Monomial};
use crate::error::{Error, Result};

/// A quotient `num / den` with signed coefficients, used for fibres at
/// rational points where positivity is lost.
#[derive(Clone)]
pub struct RatFn<C: Coeff> {
    pub num: LaurentPoly<C>,
    pub den: LaurentPoly<C>,
}

impl<C: Coeff> RatFn<C> {
    pub fn new(num: LaurentPoly<C>, den: LaurentPoly<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFn { num, den })
    }

    pub fn from_poly(p: LaurentPoly<C>) -> Self {
        let den = LaurentPoly::one(p.vars());
        RatFn { num: p, den }
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFn {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Pull back along `x_i -> lambda_i * x_i` for the listed variables.
    pub fn rescale_vars(&self, lambdas: &[(usize, C)]) -> Result<Self> {
        let go = |p: &LaurentPoly<C>| -> Result<LaurentPoly<C>> {
            let mut out = LaurentPoly::zero(p.vars());
            for (m, c) in p.terms() {
                let mut coef = c.clone();
                for (i, l) in lambdas {
                    let a = m.exps()[*i];
                    let pw = super::laurent::cpow(l, a.unsigned_abs());
                    coef = if a >= 0 {
                        coef * pw
                    } else {
                        coef.try_div(&pw).ok_or(Error::DivisionByZero)?
                    };
                }
                out.add_term(m.clone(), coef);
            }
            Ok(out)
        };
        RatFn::new(go(&self.num)?, go(&self.den)?)
    }

    /// Substitute each variable by a rational function over a common variable set.
    pub fn substitute(&self, images: &[RatFn<C>]) -> Result<Self> {
        let eval = |p: &LaurentPoly<C>| -> Result<RatFn<C>> {
            let vars = images[0].num.vars().clone();
            let mut num = LaurentPoly::zero(&vars);
            let mut den = LaurentPoly::one(&vars);
            for (m, c) in p.terms() {
                let mut t = RatFn::from_poly(LaurentPoly::constant(&vars, c.clone()));
                for (i, &a) in m.exps().iter().enumerate() {
                    let base = if a >= 0 { images[i].clone() } else { images[i].inv()? };
                    for _ in 0..a.unsigned_abs() {
                        t = t.mul(&base);
                    }
                }
                // num/den + t.num/t.den
                num = &(&num * &t.den) + &(&t.num * &den);
                den = &den * &t.den;
            }
            RatFn::new(num, den)
        };
        let n = eval(&self.num)?;
        let d = eval(&self.den)?;
        n.mul(&d.inv()?).normalized()
    }

    fn normalized(self) -> Result<Self> {
        if self.num.is_zero() {
            let vars = self.den.vars().clone();
            return Ok(RatFn::from_poly(LaurentPoly::zero(&vars)));
        }
        match self.num.exact_div(&self.den) {
            Ok(q) => Ok(RatFn::from_poly(q)),
            Err(_) => Ok(self),
        }
    }

    pub fn equals(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// `Some(c * m)` when the function is a single Laurent term.
    pub fn as_term(&self) -> Option<(C, Monomial)> {
        let q = self.num.exact_div(&self.den).ok()?;
        let (m, c) = q.is_monomial()?;
        Some((c.clone(), m.clone()))
    }
}

impl<C: Coeff> fmt::Display for RatFn<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Ok(q) = self.num.exact_div(&self.den) {
            return write!(f, "{q}");
        }
        let wrap = |p: &LaurentPoly<C>| {
            if p.len() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl<C: Coeff> fmt::Debug for RatFn<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
