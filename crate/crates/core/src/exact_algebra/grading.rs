use super::laurent::{Monomial, Poly};
use super::posrat::PosRatFunc;
use crate::error::{Error, Result};

/// Assignment of a degree in `Z^rank` to every variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    rank: usize,
    degrees: Vec<Vec<i64>>,
}

impl Grading {
    pub fn new(rank: usize, degrees: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(d) = degrees.iter().find(|d| d.len() != rank) {
            return Err(Error::RankMismatch {
                expected: rank,
                got: d.len(),
            });
        }
        Ok(Grading { rank, degrees })
    }

    /// Variables ordered `X1..Xn, t1..tn` with `deg X_i = e_i`, `deg t_i = -e_i`.
    pub fn family(n: usize) -> Self {
        let unit = |i: usize, s: i64| {
            let mut v = vec![0; n];
            v[i] = s;
            v
        };
        let degrees = (0..n).map(|i| unit(i, 1)).chain((0..n).map(|i| unit(i, -1))).collect();
        Grading { rank: n, degrees }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree_of_monomial(&self, m: &Monomial) -> Vec<i64> {
        let mut d = vec![0i64; self.rank];
        for (i, &a) in m.exps().iter().enumerate() {
            if a != 0 {
                for (dk, gk) in d.iter_mut().zip(&self.degrees[i]) {
                    *dk += a as i64 * gk;
                }
            }
        }
        d
    }

    /// Degree of a homogeneous polynomial.
    pub fn homogeneous_degree(&self, p: &Poly) -> Result<Vec<i64>> {
        let mut it = p.terms().map(|(m, _)| self.degree_of_monomial(m));
        let first = it.next().ok_or_else(|| Error::Inhomogeneous("zero".into()))?;
        if it.any(|d| d != first) {
            return Err(Error::Inhomogeneous(p.to_string()));
        }
        Ok(first)
    }
}

/// `deg(num) - deg(den)` when both sides of the expansion are homogeneous.
pub fn degree_of(f: &PosRatFunc, grading: &Grading) -> Result<Vec<i64>> {
    if grading.nvars() != f.vars().len() {
        return Err(Error::RankMismatch {
            expected: f.vars().len(),
            got: grading.nvars(),
        });
    }
    let (num, den) = f.expand();
    let dn = grading.homogeneous_degree(&num)?;
    let dd = grading.homogeneous_degree(&den)?;
    Ok(dn.iter().zip(&dd).map(|(a, b)| a - b).collect())
}

/// Limit as the `t_vars` go to 0 after removing the t-monomial content of the
/// numerator and denominator. Returns the limiting Laurent monomial.
pub fn limit_t_zero(f: &PosRatFunc, t_vars: &[usize]) -> Result<Poly> {
    let (num, den) = f.expand();
    let strip = |p: &Poly| -> (Vec<i32>, Poly) {
        let content = p.min_exponents();
        let tc: Vec<i32> = t_vars.iter().map(|&i| content.exps()[i]).collect();
        let mut shift = vec![0; p.nvars()];
        for (&i, &c) in t_vars.iter().zip(&tc) {
            shift[i] = -c;
        }
        let q = p.mul_monomial(&Monomial::new(shift));
        let at0 = Poly::from_terms(
            p.vars(),
            q.terms()
                .filter(|(m, _)| t_vars.iter().all(|&i| m.exps()[i] == 0))
                .map(|(m, c)| (m.exps().to_vec(), c.clone())),
        );
        (tc, at0)
    };
    let (tn, n0) = strip(&num);
    let (td, d0) = strip(&den);
    if d0.is_zero() {
        return Err(Error::DegenerateLimit(format!("denominator of {f} vanishes at t = 0")));
    }
    if tn != td {
        return Err(Error::DegenerateLimit(format!(
            "t-content of numerator {tn:?} differs from denominator {td:?} in {f}"
        )));
    }
    let q = n0
        .exact_div(&d0)
        .map_err(|_| Error::NotMonomial(format!("({n0})/({d0})")))?;
    if q.is_monomial().is_none() {
        return Err(Error::NotMonomial(q.to_string()));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::vars::{VarSet, Vars};
    use num_bigint::BigInt;

    fn fam() -> Vars {
        VarSet::new(["X1", "X2", "t1", "t2"])
    }

    fn pos(v: &Vars, terms: &[(&[i32], i64)]) -> PosRatFunc {
        PosRatFunc::from_poly(&Poly::from_terms(
            v,
            terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        ))
        .unwrap()
    }

    #[test]
    fn degree_of_generators_and_row_two() {
        let v = fam();
        let g = Grading::family(2);
        assert_eq!(degree_of(&PosRatFunc::var(&v, 0), &g).unwrap(), vec![1, 0]);
        let f = pos(&v, &[(&[1, 0, 0, 0], 1)])
            .mul(&pos(&v, &[(&[0, 1, 0, 1], 1), (&[0, 0, 0, 0], 1)]))
            .inv();
        assert_eq!(degree_of(&f, &g).unwrap(), vec![-1, 0]);
        let h = pos(&v, &[(&[1, 1, 1, 1], 1), (&[1, 0, 1, 0], 1), (&[0, 0, 0, 0], 1)])
            .div(&PosRatFunc::var(&v, 1));
        assert_eq!(degree_of(&h, &g).unwrap(), vec![0, -1]);
    }

    #[test]
    fn inhomogeneous_is_rejected() {
        let v = fam();
        let f = pos(&v, &[(&[1, 0, 0, 0], 1), (&[0, 0, 0, 0], 1)]);
        assert!(matches!(degree_of(&f, &Grading::family(2)), Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn limits_from_principal_table() {
        let v = fam();
        let t = [2, 3];
        let f = pos(&v, &[(&[1, 0, 0, 0], 1)])
            .mul(&pos(&v, &[(&[0, 1, 0, 1], 1), (&[0, 0, 0, 0], 1)]))
            .inv();
        assert_eq!(limit_t_zero(&f, &t).unwrap().to_string(), "X1^-1");
        let g = pos(&v, &[(&[1, 0, 1, 0], 1), (&[0, 0, 0, 0], 1)]).div(&pos(&v, &[(&[1, 1, 0, 0], 1)]));
        assert_eq!(limit_t_zero(&g, &t).unwrap().to_string(), "X1^-1*X2^-1");
        assert_eq!(limit_t_zero(&PosRatFunc::var(&v, 0), &t).unwrap().to_string(), "X1");
    }

    #[test]
    fn non_monomial_limit_fails() {
        let v = fam();
        let f = pos(&v, &[(&[1, 0, 0, 0], 1), (&[0, 0, 0, 0], 1)]);
        assert!(matches!(limit_t_zero(&f, &[2, 3]), Err(Error::NotMonomial(_))));
    }
}
