//! The tropical semifield `Trop(p_1, ..., p_r)` and tropicalization.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::PosRatFunc;

/// A Laurent monomial in the tropical generators, stored as its exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TropMonomial(pub Vec<i32>);

impl TropMonomial {
    pub fn one(r: usize) -> Self {
        TropMonomial(vec![0; r])
    }

    pub fn generator(r: usize, i: usize) -> Self {
        let mut e = vec![0; r];
        e[i] = 1;
        TropMonomial(e)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.rank() == other.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.rank(),
                got: other.rank(),
            })
        }
    }

    /// Tropical sum: componentwise minimum.
    pub fn trop_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(TropMonomial(
            self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect(),
        ))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank(), "tropical rank mismatch");
        TropMonomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn pow(&self, e: i32) -> Self {
        TropMonomial(
            self.0
                .iter()
                .map(|a| a.checked_mul(e).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// `(p+, p-)` with `p+ = p/(p (+) 1)` and `p- = 1/(p (+) 1)`.
    pub fn plus_minus(&self) -> (Self, Self) {
        (
            TropMonomial(self.0.iter().map(|&a| a.max(0)).collect()),
            TropMonomial(self.0.iter().map(|&a| (-a).max(0)).collect()),
        )
    }

    /// `p^[[x]]`: `p-` for `x < 0`, `1` for `x = 0`, `p+` for `x > 0`.
    pub fn bracket(&self, x: i64) -> Self {
        let (plus, minus) = self.plus_minus();
        match x.signum() {
            1 => plus,
            -1 => minus,
            _ => Self::one(self.rank()),
        }
    }
}

impl fmt::Display for TropMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Render with generator names, e.g. `p1^2*p2^-1`.
pub fn trop_to_string(m: &TropMonomial, names: &[String]) -> String {
    let parts: Vec<String> = m
        .0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| {
            if e == 1 {
                names[i].clone()
            } else {
                format!("{}^{}", names[i], e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Image of a subtraction-free function under the semifield morphism sending
/// variable `i` to `assign[i]`. Positive integer constants map to 1.
pub fn tropicalize(f: &PosRatFunc, assign: &[TropMonomial]) -> Result<TropMonomial> {
    if assign.len() != f.vars().len() {
        return Err(Error::RankMismatch {
            expected: f.vars().len(),
            got: assign.len(),
        });
    }
    let r = assign.first().map(TropMonomial::rank).unwrap_or(0);
    let mono = |exps: &[i32]| -> TropMonomial {
        exps.iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .fold(TropMonomial::one(r), |acc, (i, &a)| acc.mul(&assign[i].pow(a)))
    };
    let mut out = mono(f.unit().exps());
    for (k, e) in f.factors() {
        let mut terms = k.terms().map(|(m, _)| mono(m.exps()));
        let first = terms.next().expect("nonzero factor");
        let sum = terms.try_fold(first, |acc, t| acc.trop_add(&t))?;
        out = out.mul(&sum.pow(*e));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{Poly, VarSet};
    use num_bigint::BigInt;

    fn t(v: &[i32]) -> TropMonomial {
        TropMonomial(v.to_vec())
    }

    #[test]
    fn trop_add_examples() {
        assert_eq!(t(&[2, -1]).trop_add(&t(&[0, 0])).unwrap(), t(&[0, -1]));
        assert_eq!(t(&[3, 4]).trop_add(&t(&[3, 4])).unwrap(), t(&[3, 4]));
        assert_eq!(t(&[1, 0]).trop_add(&t(&[0, 1])).unwrap(), t(&[0, 0]));
        assert!(t(&[1]).trop_add(&t(&[0, 1])).is_err());
    }

    #[test]
    fn plus_minus_examples() {
        assert_eq!(t(&[2, -1]).plus_minus(), (t(&[2, 0]), t(&[0, 1])));
        assert_eq!(t(&[0, 0]).plus_minus(), (t(&[0, 0]), t(&[0, 0])));
        // p+ = p/(p (+) 1), p- = 1/(p (+) 1) evaluated directly
        let p = t(&[-3]);
        let s = p.trop_add(&TropMonomial::one(1)).unwrap();
        assert_eq!(p.plus_minus(), (p.div(&s), s.inv()));
        assert_eq!(p.plus_minus(), (t(&[0]), t(&[3])));
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(t(&[2, -1]).bracket(-3), t(&[0, 1]));
        assert_eq!(t(&[7, -5]).bracket(0), t(&[0, 0]));
        assert_eq!(t(&[1]).bracket(5), t(&[1]));
    }

    fn pos(v: &crate::exact_algebra::Vars, terms: &[(&[i32], i64)]) -> PosRatFunc {
        PosRatFunc::from_poly(&Poly::from_terms(
            v,
            terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        ))
        .unwrap()
    }

    #[test]
    fn tropicalize_principal_rows() {
        let v = VarSet::new(["y1", "y2"]);
        let gens = [TropMonomial::generator(2, 0), TropMonomial::generator(2, 1)];
        let f = pos(&v, &[(&[1, 1], 1), (&[1, 0], 1), (&[0, 0], 1)]).div(&PosRatFunc::var(&v, 1));
        assert_eq!(tropicalize(&f, &gens).unwrap(), t(&[0, -1]));
        let g = pos(&v, &[(&[1, 0], 1), (&[0, 0], 1)]).div(&pos(&v, &[(&[1, 1], 1)]));
        assert_eq!(tropicalize(&g, &gens).unwrap(), t(&[-1, -1]));
        let h = pos(&v, &[(&[3, -2], 1)]);
        assert_eq!(tropicalize(&h, &gens).unwrap(), t(&[3, -2]));
    }
}
