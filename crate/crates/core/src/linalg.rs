//! Small dense integer matrices with exact determinants and inverses.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_cols(cols: &[Vec<i64>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn to_cols(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)]
                        .checked_add(a.checked_mul(other[(k, j)]).expect("overflow"))
                        .expect("overflow");
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Sub-matrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    fn to_rational(&self) -> Vec<Vec<BigRational>> {
        self.to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
            .collect()
    }

    pub fn det(&self) -> i64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.to_rational();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return 0;
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c].clone();
            for r in c + 1..n {
                let f = &a[r][c] / &a[c][c];
                for k in c..n {
                    let v = &a[c][k] * &f;
                    a[r][k] -= v;
                }
            }
        }
        det.to_integer().to_i64().expect("determinant overflow")
    }

    /// Exact inverse over the rationals, `None` if singular.
    pub fn inverse_rational(&self) -> Option<Vec<Vec<BigRational>>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.to_rational();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(p, c);
            inv.swap(p, c);
            let piv = a[c][c].clone();
            for k in 0..n {
                a[c][k] = &a[c][k] / &piv;
                inv[c][k] = &inv[c][k] / &piv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for k in 0..n {
                        let x = &a[c][k] * &f;
                        a[r][k] -= x;
                        let y = &inv[c][k] * &f;
                        inv[r][k] -= y;
                    }
                }
            }
        }
        Some(inv)
    }

    /// Integer inverse; `None` unless the matrix is unimodular.
    pub fn inverse(&self) -> Option<Matrix> {
        let inv = self.inverse_rational()?;
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !inv[i][j].is_integer() {
                    return None;
                }
                out[(i, j)] = inv[i][j].to_integer().to_i64()?;
            }
        }
        Some(out)
    }

    /// Solve `self * x = b` exactly.
    pub fn solve(&self, b: &[i64]) -> Option<Vec<BigRational>> {
        let inv = self.inverse_rational()?;
        Some(
            inv.iter()
                .map(|row| {
                    row.iter()
                        .zip(b)
                        .map(|(a, &bi)| a * BigRational::from_integer(bi.into()))
                        .fold(BigRational::zero(), |s, x| s + x)
                })
                .collect(),
        )
    }

    pub fn is_skew_symmetrizable(&self, d: &[i64]) -> bool {
        self.is_square()
            && d.len() == self.rows
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| d[i] * self[(i, j)] == -d[j] * self[(j, i)])
            })
    }
}

/// Integer kernel vector of a `(n-1) x n` matrix of full rank via signed
/// maximal minors; zero if the rank is deficient.
pub fn kernel_vector(rows: &[Vec<i64>], n: usize) -> Vec<i64> {
    assert_eq!(rows.len() + 1, n);
    let mut v = Vec::with_capacity(n);
    for j in 0..n {
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let minor = Matrix::from_rows(
            &rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c]).collect())
                .collect::<Vec<_>>(),
        );
        let d = if n == 1 { 1 } else { minor.det() };
        v.push(if j % 2 == 0 { d } else { -d });
    }
    primitive(&v)
}

pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn lcm_all(v: &[i64]) -> i64 {
    v.iter().fold(1i64, |l, &x| num_integer::lcm(l, x))
}

pub fn rational_to_i64(q: &BigRational) -> Option<i64> {
    q.is_integer().then(|| q.to_integer()).and_then(|z: BigInt| z.to_i64())
}

pub fn is_sign_coherent(v: &[i64]) -> bool {
    v.iter().any(|x| *x != 0) && (v.iter().all(|x| *x >= 0) || v.iter().all(|x| *x <= 0))
}

pub fn sign(v: &[i64]) -> i64 {
    v.iter().map(|x| x.signum()).find(|s| *s != 0).unwrap_or(0)
}

pub fn abs_sum(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).sum()
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| {
                let xs: Vec<String> = r.iter().map(i64::to_string).collect();
                format!("({})", xs.join(","))
            })
            .collect();
        write!(f, "({})", rows.join(","))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
