//! c-vectors, g-vectors, F-polynomials, separation formulas and periodicity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_algebra::{degree_of, Grading, Monomial, Poly, PosRatFunc, VarSet};
use crate::linalg::{is_sign_coherent, Matrix};
use crate::seeds::{format_path, mutate_coefficients, unlabeled_match, ClusterSeed, ExchangeData, YSeed};
use crate::semifields::{tropicalize, TropMonomial};

fn principal_coeffs(size: usize) -> Vec<TropMonomial> {
    (0..size).map(|i| TropMonomial::generator(size, i)).collect()
}

fn coeffs_to_matrix(p: &[TropMonomial]) -> Matrix {
    let cols: Vec<Vec<i64>> = p
        .iter()
        .map(|t| t.exps().iter().map(|&a| a as i64).collect())
        .collect();
    Matrix::from_cols(&cols)
}

/// C-matrix at the end of `path`, by the tropical recurrence with principal coefficients.
pub fn c_matrix(ex: &ExchangeData, path: &[usize]) -> Result<Matrix> {
    let mut p = principal_coeffs(ex.size());
    let mut cur = ex.clone();
    for &k in path {
        p = mutate_coefficients(&cur, &p, k)?;
        cur = cur.mutate(k)?;
    }
    Ok(coeffs_to_matrix(&p))
}

/// C-matrix by tropicalizing the coefficient-free Y-pattern at `y_i -> p_i`.
pub fn c_matrix_tropical(ex: &ExchangeData, path: &[usize]) -> Result<Matrix> {
    let s = YSeed::coefficient_free(ex, "y").mutate_path(path)?;
    let assign = principal_coeffs(ex.size());
    let p: Vec<TropMonomial> = s.y.iter().map(|y| tropicalize(y, &assign)).collect::<Result<_>>()?;
    Ok(coeffs_to_matrix(&p))
}

/// G-matrix via `G^T = (C^{-B^T})^{-1}`.
pub fn g_matrix(ex: &ExchangeData, path: &[usize]) -> Result<Matrix> {
    let dual = c_matrix(&ex.minus_transpose(), path)?;
    let inv = dual
        .inverse()
        .ok_or_else(|| Error::InvalidInput(format!("c-matrix {dual} is not unimodular")))?;
    Ok(inv.transpose())
}

/// G-matrix as degrees of principal-coefficient cluster variables with
/// `deg x_i = e_i` and `deg p_j = -b_j`.
pub fn g_matrix_by_degree(ex: &ExchangeData, path: &[usize]) -> Result<Matrix> {
    let size = ex.size();
    let s = ClusterSeed::principal(ex, "x", "p").mutate_path(path)?;
    let mut degrees: Vec<Vec<i64>> = (0..size)
        .map(|i| (0..size).map(|a| i64::from(a == i)).collect())
        .collect();
    degrees.extend((0..size).map(|j| ex.b().col(j).iter().map(|b| -b).collect()));
    let grading = Grading::new(size, degrees)?;
    let cols: Vec<Vec<i64>> = s.x.iter().map(|x| degree_of(x, &grading)).collect::<Result<_>>()?;
    Ok(Matrix::from_cols(&cols))
}

/// F-polynomials over `p1..pN`: principal-coefficient cluster variables at `x = 1`.
pub fn f_polynomials(ex: &ExchangeData, path: &[usize]) -> Result<Vec<Poly>> {
    let size = ex.size();
    let s = ClusterSeed::principal(ex, "x", "p").mutate_path(path)?;
    let pv = VarSet::indexed("p", size, "", 0);
    let images: Vec<Monomial> = (0..size)
        .map(|_| Monomial::one(size))
        .chain((0..size).map(|j| {
            let mut e = vec![0; size];
            e[j] = 1;
            Monomial::new(e)
        }))
        .collect();
    s.x.iter()
        .map(|x| {
            let f = x.substitute_monomials(&pv, &images).simplify();
            f.as_laurent()
                .ok_or_else(|| Error::NotMonomial(format!("F-polynomial denominator in {f}")))
        })
        .collect()
}

pub fn check_sign_coherence(c: &Matrix) -> bool {
    c.to_cols().iter().all(|v| v.iter().any(|&a| a != 0) && is_sign_coherent(v))
}

/// Outcome of both separation identities at one vertex.
#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub path: String,
    pub quotient_form: bool,
    pub f_polynomial_form: bool,
}

impl SeparationReport {
    pub fn pass(&self) -> bool {
        self.quotient_form && self.f_polynomial_form
    }
}

/// Checks `Ytilde_j = Y_j(p y) / p_j` and
/// `Ytilde_j = y^c_j prod F_i(p y)^b_ij / prod F_i|_Trop(p)^b_ij` at the end of `path`.
pub fn separation_check(ex: &ExchangeData, p0: &[TropMonomial], path: &[usize]) -> Result<SeparationReport> {
    let size = ex.size();
    let with = YSeed::initial(ex, p0.to_vec(), "y", "p")?;
    let vars = with.vars().clone();
    let r = with.coeff_rank();
    let target = with.mutate_path(path)?;

    // y_i -> p_i y_i as monomials over (y, p)
    let py: Vec<Monomial> = (0..size)
        .map(|i| {
            let mut e = vec![0; size + r];
            e[i] = 1;
            e[size..].copy_from_slice(p0[i].exps());
            Monomial::new(e)
        })
        .collect();

    let free = YSeed::coefficient_free(ex, "y").mutate_path(path)?;
    let quotient_form = (0..size).all(|j| {
        let lhs = free.y[j]
            .substitute_monomials(&vars, &py)
            .mul(&with.coefficient(&target.p[j].inv()));
        lhs.rat_equal(&target.y[j])
    });

    let c = c_matrix(ex, path)?;
    let fs = f_polynomials(ex, path)?;
    let f_funcs: Vec<PosRatFunc> = fs.iter().map(PosRatFunc::from_poly).collect::<Result<_>>()?;
    let f_trop: Vec<TropMonomial> = f_funcs.iter().map(|f| tropicalize(f, p0)).collect::<Result<_>>()?;
    let f_py: Vec<PosRatFunc> = f_funcs.iter().map(|f| f.substitute_monomials(&vars, &py)).collect();
    let bv = &target.ex;
    let f_polynomial_form = (0..size).all(|j| {
        let mut e = vec![0; size + r];
        for (i, ei) in e.iter_mut().enumerate().take(size) {
            *ei = c[(i, j)] as i32;
        }
        let mut acc = PosRatFunc::monomial(&vars, Monomial::new(e));
        let mut tr = TropMonomial::one(r);
        for i in 0..size {
            let b = bv.bij(i, j);
            if b != 0 {
                acc = acc.mul(&f_py[i].pow(b as i32));
                tr = tr.mul(&f_trop[i].pow(-(b as i32)));
            }
        }
        acc.mul(&with.coefficient(&tr)).rat_equal(&target.y[j])
    });
    Ok(SeparationReport {
        path: format_path(path),
        quotient_form,
        f_polynomial_form,
    })
}

/// Permutation `sigma` with `Y_{sigma(i);v} = y_i` and matching exchange matrices,
/// for the coefficient-free Y-pattern at the end of `path`.
pub fn detect_period(ex: &ExchangeData, path: &[usize]) -> Result<Option<Vec<usize>>> {
    let s0 = YSeed::coefficient_free(ex, "y");
    let sv = s0.mutate_path(path)?;
    Ok(unlabeled_match(&sv.y, &s0.y, sv.ex.b(), s0.ex.b(), |a, b| a.rat_equal(b)))
}

/// As [`detect_period`] for the Y-pattern with coefficients, also matching `p`.
pub fn detect_period_with_coeffs(ex: &ExchangeData, p0: &[TropMonomial], path: &[usize]) -> Result<Option<Vec<usize>>> {
    let s0 = YSeed::initial(ex, p0.to_vec(), "y", "p")?;
    let sv = s0.mutate_path(path)?;
    let a: Vec<(PosRatFunc, TropMonomial)> = sv.y.iter().cloned().zip(sv.p.iter().cloned()).collect();
    let b: Vec<(PosRatFunc, TropMonomial)> = s0.y.iter().cloned().zip(s0.p.iter().cloned()).collect();
    Ok(unlabeled_match(&a, &b, sv.ex.b(), s0.ex.b(), |x, y| x.1 == y.1 && x.0.rat_equal(&y.0)))
}

/// One vertex of a pattern: path, exchange matrix, C, G and F-polynomials.
#[derive(Clone, Debug, Serialize)]
pub struct VertexRow {
    pub path: String,
    pub b: Vec<Vec<i64>>,
    pub c: Vec<Vec<i64>>,
    pub g: Vec<Vec<i64>>,
    pub f: Vec<String>,
}

pub fn vertex_row(ex: &ExchangeData, path: &[usize]) -> Result<VertexRow> {
    Ok(VertexRow {
        path: format_path(path),
        b: ex.mutate_path(path)?.b().to_rows(),
        c: c_matrix(ex, path)?.to_rows(),
        g: g_matrix(ex, path)?.to_rows(),
        f: f_polynomials(ex, path)?.iter().map(ToString::to_string).collect(),
    })
}

/// CSV with columns `path,B,C,G,F`; matrices as `((a,b),(c,d))`, F-polynomials joined by `;`.
pub fn rows_to_csv(rows: &[VertexRow]) -> String {
    let mat = |m: &Vec<Vec<i64>>| Matrix::from_rows(m).to_string();
    let mut out = String::from("path,B,C,G,F\n");
    for r in rows {
        out.push_str(&format!(
            "\"{}\",\"{}\",\"{}\",\"{}\",\"{}\"\n",
            r.path,
            mat(&r.b),
            mat(&r.c),
            mat(&r.g),
            r.f.join(";")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeds::parse_path;

    fn a2() -> ExchangeData {
        ExchangeData::skew_symmetric(&[vec![0, 1], vec![-1, 0]]).unwrap()
    }

    fn b2() -> ExchangeData {
        ExchangeData::new(2, 0, Matrix::from_rows(&[vec![0, -1], vec![2, 0]]), vec![2, 1]).unwrap()
    }

    #[test]
    fn c_matrix_table_rows() {
        let ex = a2();
        assert_eq!(c_matrix(&ex, &[]).unwrap(), Matrix::identity(2));
        let p = parse_path("2,1,2").unwrap();
        assert_eq!(c_matrix(&ex, &p).unwrap(), Matrix::from_rows(&[vec![-1, 0], vec![-1, 1]]));
        let p = parse_path("2,1,2,1,2").unwrap();
        assert_eq!(c_matrix(&ex, &p).unwrap(), Matrix::from_rows(&[vec![0, 1], vec![1, 0]]));
    }

    #[test]
    fn c_routes_agree() {
        for ex in [a2(), b2()] {
            for p in ["", "1", "2,1", "1,2,1,2", "2,1,2,1,2,1"] {
                let p = parse_path(p).unwrap();
                assert_eq!(c_matrix(&ex, &p).unwrap(), c_matrix_tropical(&ex, &p).unwrap());
            }
        }
    }

    #[test]
    fn g_routes_agree() {
        for ex in [a2(), b2()] {
            for p in ["", "2", "2,1", "1,2,1", "2,1,2,1,2"] {
                let p = parse_path(p).unwrap();
                let g = g_matrix(&ex, &p).unwrap();
                assert_eq!(g, g_matrix_by_degree(&ex, &p).unwrap());
                assert_eq!(g.det().abs(), 1);
            }
        }
        // x'_2 = (1 + p2 x1)/x2 with deg p2 = -(1,0)
        assert_eq!(g_matrix(&a2(), &[1]).unwrap(), Matrix::from_rows(&[vec![1, 0], vec![0, -1]]));
    }

    #[test]
    fn f_polynomials_constant_term_one() {
        let ex = a2();
        assert!(f_polynomials(&ex, &[]).unwrap().iter().all(|f| f.is_one()));
        let fs = f_polynomials(&ex, &parse_path("2,1").unwrap()).unwrap();
        assert_eq!(fs[1].to_string(), "p2 + 1");
        assert_eq!(fs[0].to_string(), "p1*p2 + p1 + 1");
    }

    #[test]
    fn separation_on_a2_rows() {
        let ex = a2();
        let p0 = principal_coeffs(2);
        for len in 0..=6 {
            let path: Vec<usize> = (0..len).map(|i| 1 - i % 2).collect();
            assert!(separation_check(&ex, &p0, &path).unwrap().pass());
        }
        let p0 = vec![TropMonomial(vec![2, -1]), TropMonomial(vec![-1, 1])];
        assert!(separation_check(&b2(), &p0, &[0, 1, 0]).unwrap().pass());
    }

    #[test]
    fn a2_period_is_swap() {
        let ex = a2();
        assert_eq!(detect_period(&ex, &[]).unwrap(), Some(vec![0, 1]));
        let p = parse_path("2,1,2,1,2").unwrap();
        assert_eq!(detect_period(&ex, &p).unwrap(), Some(vec![1, 0]));
        assert_eq!(detect_period_with_coeffs(&ex, &principal_coeffs(2), &p).unwrap(), Some(vec![1, 0]));
        assert_eq!(detect_period(&ex, &[1, 0]).unwrap(), None);
    }

    #[test]
    fn sign_coherence() {
        assert!(check_sign_coherence(&Matrix::from_rows(&[vec![-1, 0], vec![-1, 1]])));
        assert!(!check_sign_coherence(&Matrix::from_rows(&[vec![-1, 0], vec![1, 1]])));
        assert!(!check_sign_coherence(&Matrix::from_rows(&[vec![0, 0], vec![0, 1]])));
    }
}
