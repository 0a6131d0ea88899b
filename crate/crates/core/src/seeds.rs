//! Exchange data, labeled seeds and Y-seeds with coefficients, and their mutations.
//!
//! Directions are 0-based in the API; paths in text form are 1-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::{Monomial, PosRatFunc, VarSet, Vars};
use crate::linalg::{lcm_all, Matrix};
use crate::semifields::TropMonomial;

/// Exchange matrix `B` (`b_ij = eps_ji`) with
/// skew-symmetrizer `d`; the first `n` directions are mutable.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ExchangeData {
    n: usize,
    m: usize,
    b: Matrix,
    d: Vec<i64>,
}

impl ExchangeData {
    pub fn new(n: usize, m: usize, b: Matrix, d: Vec<i64>) -> Result<Self> {
        let size = n + m;
        if b.rows() != size || b.cols() != size {
            return Err(Error::InvalidExchangeData(format!(
                "B is {}x{}, expected {size}x{size}",
                b.rows(),
                b.cols()
            )));
        }
        if d.len() != size || d.iter().any(|&x| x <= 0) {
            return Err(Error::InvalidExchangeData(format!(
                "d = {d:?} must have {size} positive entries"
            )));
        }
        if size > 0 && d.iter().fold(0, |g, &x| num_integer::gcd(g, x)) != 1 {
            return Err(Error::InvalidExchangeData(format!("gcd of d = {d:?} is not 1")));
        }
        if !b.is_skew_symmetrizable(&d) {
            return Err(Error::InvalidExchangeData(format!(
                "B = {b} is not skew-symmetrizable by d = {d:?}"
            )));
        }
        Ok(ExchangeData { n, m, b, d })
    }

    /// Skew-symmetric data without frozen directions.
    pub fn skew_symmetric(rows: &[Vec<i64>]) -> Result<Self> {
        let b = Matrix::from_rows(rows);
        let n = b.rows();
        Self::new(n, 0, b, vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.n + self.m
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    pub fn bij(&self, i: usize, j: usize) -> i64 {
        self.b[(i, j)]
    }

    pub fn check_direction(&self, k: usize) -> Result<()> {
        if k < self.n {
            Ok(())
        } else {
            Err(Error::FrozenDirection { k: k + 1, n: self.n })
        }
    }

    pub fn mutate(&self, k: usize) -> Result<Self> {
        mutate_matrix(self, k)
    }

    pub fn mutate_path(&self, path: &[usize]) -> Result<Self> {
        path.iter().try_fold(self.clone(), |ex, &k| ex.mutate(k))
    }

    /// Langlands dual data: `B -> -B^T`, `d_i -> lcm(d)/d_i`.
    pub fn langlands_dual(&self) -> Self {
        let l = lcm_all(&self.d);
        ExchangeData {
            n: self.n,
            m: self.m,
            b: self.b.transpose().neg(),
            d: self.d.iter().map(|x| l / x).collect(),
        }
    }

    /// `-B^T`, the matrix of the coefficient-dual pattern; it is skew-symmetrizable
    /// by the Langlands dual `d`.
    pub fn minus_transpose(&self) -> Self {
        self.langlands_dual()
    }

    /// Restriction to the mutable indices `idx`, all frozen directions dropped.
    pub fn restrict(&self, idx: &[usize]) -> Result<Self> {
        let b = self.b.select(idx, idx);
        let d: Vec<i64> = idx.iter().map(|&i| self.d[i]).collect();
        let g = d.iter().fold(0, |g, &x| num_integer::gcd(g, x)).max(1);
        Self::new(idx.len(), 0, b, d.iter().map(|x| x / g).collect())
    }

    /// Treat every direction as mutable.
    pub fn unfreeze_all(&self) -> Self {
        ExchangeData {
            n: self.size(),
            m: 0,
            b: self.b.clone(),
            d: self.d.clone(),
        }
    }
}

/// Matrix mutation in direction `k`.
pub fn mutate_matrix(ex: &ExchangeData, k: usize) -> Result<ExchangeData> {
    ex.check_direction(k)?;
    let size = ex.size();
    let b = &ex.b;
    let mut out = Matrix::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            out[(i, j)] = if i == k || j == k {
                -b[(i, j)]
            } else {
                let bik = b[(i, k)];
                b[(i, j)] + bik.signum() * (bik * b[(k, j)]).max(0)
            };
        }
    }
    Ok(ExchangeData {
        n: ex.n,
        m: ex.m,
        b: out,
        d: ex.d.clone(),
    })
}

pub fn parse_path(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let k: usize = t
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad direction {t:?} in path {s:?}")))?;
            if k == 0 {
                return Err(Error::Parse(format!("directions are 1-based, got 0 in {s:?}")));
            }
            Ok(k - 1)
        })
        .collect()
}

pub fn format_path(path: &[usize]) -> String {
    let parts: Vec<String> = path.iter().map(|k| (k + 1).to_string()).collect();
    parts.join(",")
}

/// Embed a tropical monomial as a Laurent monomial in the generators starting at `offset`.
pub fn trop_to_func(vars: &Vars, offset: usize, t: &TropMonomial) -> PosRatFunc {
    let mut e = vec![0; vars.len()];
    e[offset..offset + t.rank()].copy_from_slice(t.exps());
    PosRatFunc::monomial(vars, Monomial::new(e))
}

fn check_coeffs(ex: &ExchangeData, p: &[TropMonomial]) -> Result<usize> {
    if p.len() != ex.size() {
        return Err(Error::RankMismatch {
            expected: ex.size(),
            got: p.len(),
        });
    }
    let r = p.first().map_or(0, TropMonomial::rank);
    if let Some(bad) = p.iter().find(|t| t.rank() != r) {
        return Err(Error::RankMismatch {
            expected: r,
            got: bad.rank(),
        });
    }
    Ok(r)
}

/// Tropical mutation of a coefficient tuple.
pub fn mutate_coefficients(ex: &ExchangeData, p: &[TropMonomial], k: usize) -> Result<Vec<TropMonomial>> {
    ex.check_direction(k)?;
    let r = p[k].rank();
    let one = TropMonomial::one(r);
    Ok((0..ex.size())
        .map(|j| {
            if j == k {
                return p[k].inv();
            }
            let bkj = ex.bij(k, j);
            if bkj == 0 {
                return p[j].clone();
            }
            let s = one
                .trop_add(&p[k].pow(-(bkj.signum() as i32)))
                .expect("same rank");
            p[j].mul(&s.pow(-(bkj as i32)))
        })
        .collect())
}

/// A labeled Y-seed with tropical coefficients `(y, p, B)`.
#[derive(Clone, Debug)]
pub struct YSeed {
    pub y: Vec<PosRatFunc>,
    pub p: Vec<TropMonomial>,
    pub ex: ExchangeData,
    /// Index of the first coefficient generator in the variable set.
    pub p_offset: usize,
}

impl YSeed {
    /// Initial seed over variables `{y}1..{y}N, {p}1..{p}r`.
    pub fn initial(ex: &ExchangeData, p: Vec<TropMonomial>, y_name: &str, p_name: &str) -> Result<Self> {
        let r = check_coeffs(ex, &p)?;
        let vars = VarSet::indexed(y_name, ex.size(), p_name, r);
        Ok(YSeed {
            y: (0..ex.size()).map(|i| PosRatFunc::var(&vars, i)).collect(),
            p,
            ex: ex.clone(),
            p_offset: ex.size(),
        })
    }

    /// Coefficient-free Y-seed over `{y}1..{y}N`.
    pub fn coefficient_free(ex: &ExchangeData, y_name: &str) -> Self {
        Self::initial(ex, vec![TropMonomial::one(0); ex.size()], y_name, "p").expect("rank 0")
    }

    /// Principal coefficients: `p_i` is the i-th generator.
    pub fn principal(ex: &ExchangeData, y_name: &str, p_name: &str) -> Self {
        let s = ex.size();
        let p = (0..s).map(|i| TropMonomial::generator(s, i)).collect();
        Self::initial(ex, p, y_name, p_name).expect("consistent ranks")
    }

    /// Seed with explicit starting values over an existing variable set.
    pub fn from_parts(y: Vec<PosRatFunc>, p: Vec<TropMonomial>, ex: ExchangeData, p_offset: usize) -> Result<Self> {
        check_coeffs(&ex, &p)?;
        if y.len() != ex.size() {
            return Err(Error::RankMismatch {
                expected: ex.size(),
                got: y.len(),
            });
        }
        Ok(YSeed { y, p, ex, p_offset })
    }

    pub fn vars(&self) -> &Vars {
        self.y[0].vars()
    }

    pub fn coeff_rank(&self) -> usize {
        self.p.first().map_or(0, TropMonomial::rank)
    }

    pub fn coefficient(&self, t: &TropMonomial) -> PosRatFunc {
        trop_to_func(self.vars(), self.p_offset, t)
    }

    /// `y'_j = y_j (p_k^[[b_kj]] + p_k^[[-b_kj]] y_k^(-sgn b_kj))^(-b_kj)`.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        self.ex.check_direction(k)?;
        let vars = self.vars().clone();
        let mut y = Vec::with_capacity(self.y.len());
        for j in 0..self.ex.size() {
            if j == k {
                y.push(self.y[k].inv());
                continue;
            }
            let bkj = self.ex.bij(k, j);
            if bkj == 0 {
                y.push(self.y[j].clone());
                continue;
            }
            let a = trop_to_func(&vars, self.p_offset, &self.p[k].bracket(bkj));
            let c = trop_to_func(&vars, self.p_offset, &self.p[k].bracket(-bkj));
            let binom = a.add(&c.mul(&self.y[k].pow(-(bkj.signum() as i32))));
            y.push(self.y[j].mul(&binom.pow(-(bkj as i32))).simplify());
        }
        Ok(YSeed {
            y,
            p: mutate_coefficients(&self.ex, &self.p, k)?,
            ex: self.ex.mutate(k)?,
            p_offset: self.p_offset,
        })
    }

    pub fn mutate_path(&self, path: &[usize]) -> Result<Self> {
        path.iter().try_fold(self.clone(), |s, &k| s.mutate(k))
    }
}

/// A labeled seed with tropical coefficients `(x, p, B)`.
#[derive(Clone, Debug)]
pub struct ClusterSeed {
    pub x: Vec<PosRatFunc>,
    pub p: Vec<TropMonomial>,
    pub ex: ExchangeData,
    pub p_offset: usize,
}

impl ClusterSeed {
    pub fn initial(ex: &ExchangeData, p: Vec<TropMonomial>, x_name: &str, p_name: &str) -> Result<Self> {
        let r = check_coeffs(ex, &p)?;
        let vars = VarSet::indexed(x_name, ex.size(), p_name, r);
        Ok(ClusterSeed {
            x: (0..ex.size()).map(|i| PosRatFunc::var(&vars, i)).collect(),
            p,
            ex: ex.clone(),
            p_offset: ex.size(),
        })
    }

    /// Initial seed over an explicit variable set, `x_i` being variable `i`.
    pub fn initial_named(ex: &ExchangeData, p: Vec<TropMonomial>, vars: &Vars) -> Result<Self> {
        let r = check_coeffs(ex, &p)?;
        if vars.len() != ex.size() + r {
            return Err(Error::RankMismatch {
                expected: ex.size() + r,
                got: vars.len(),
            });
        }
        Ok(ClusterSeed {
            x: (0..ex.size()).map(|i| PosRatFunc::var(vars, i)).collect(),
            p,
            ex: ex.clone(),
            p_offset: ex.size(),
        })
    }

    pub fn coefficient_free(ex: &ExchangeData, x_name: &str) -> Self {
        Self::initial(ex, vec![TropMonomial::one(0); ex.size()], x_name, "p").expect("rank 0")
    }

    pub fn principal(ex: &ExchangeData, x_name: &str, p_name: &str) -> Self {
        let s = ex.size();
        let p = (0..s).map(|i| TropMonomial::generator(s, i)).collect();
        Self::initial(ex, p, x_name, p_name).expect("consistent ranks")
    }

    pub fn vars(&self) -> &Vars {
        self.x[0].vars()
    }

    pub fn coeff_rank(&self) -> usize {
        self.p.first().map_or(0, TropMonomial::rank)
    }

    pub fn coefficient(&self, t: &TropMonomial) -> PosRatFunc {
        trop_to_func(self.vars(), self.p_offset, t)
    }

    /// `x'_k = (p_k^- prod_{b_ik<0} x_i^-b_ik + p_k^+ prod_{b_ik>0} x_i^b_ik) / x_k`.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        self.ex.check_direction(k)?;
        let vars = self.vars().clone();
        let (plus, minus) = self.p[k].plus_minus();
        let mut neg = trop_to_func(&vars, self.p_offset, &minus);
        let mut pos = trop_to_func(&vars, self.p_offset, &plus);
        for i in 0..self.ex.size() {
            let bik = self.ex.bij(i, k);
            if bik < 0 {
                neg = neg.mul(&self.x[i].pow(-bik as i32));
            } else if bik > 0 {
                pos = pos.mul(&self.x[i].pow(bik as i32));
            }
        }
        let xk = neg.add(&pos).div(&self.x[k]).simplify();
        let mut x = self.x.clone();
        x[k] = xk;
        Ok(ClusterSeed {
            x,
            p: mutate_coefficients(&self.ex, &self.p, k)?,
            ex: self.ex.mutate(k)?,
            p_offset: self.p_offset,
        })
    }

    pub fn mutate_path(&self, path: &[usize]) -> Result<Self> {
        path.iter().try_fold(self.clone(), |s, &k| s.mutate(k))
    }
}

/// Coefficient-free seed with frozen rows encoding geometric coefficients:
/// `B_ext = [[B, -D^{-1} A^T l], [A, 0]]` where `p_j = prod_i p_i^A_ij` and `l = lcm(d)`.
/// The extended cluster is `(x_1..x_n, p_1..p_r)` over the same variables.
pub fn build_extended_seed(s: &ClusterSeed) -> Result<ClusterSeed> {
    if s.ex.m() != 0 {
        return Err(Error::InvalidInput(
            "extended seeds are built from seeds without frozen directions".into(),
        ));
    }
    let n = s.ex.n();
    let r = s.coeff_rank();
    // frozen symmetrizer l = lcm(d), so b_{j,n+i} = -A_ij * l / d_j stays integral
    let l = if n > 0 { lcm_all(s.ex.d()) } else { 1 };
    let mut b = Matrix::zeros(n + r, n + r);
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] = s.ex.bij(i, j);
        }
    }
    for (j, pj) in s.p.iter().enumerate() {
        for (i, &a) in pj.exps().iter().enumerate() {
            b[(n + i, j)] = a as i64;
            b[(j, n + i)] = -(a as i64) * l / s.ex.d()[j];
        }
    }
    let mut d = s.ex.d().to_vec();
    d.extend(std::iter::repeat_n(l, r));
    let ex = ExchangeData::new(n, r, b, d)?;
    let vars = s.vars().clone();
    let mut x = s.x.clone();
    for i in 0..r {
        x.push(PosRatFunc::var(&vars, s.p_offset + i));
    }
    Ok(ClusterSeed {
        x,
        p: vec![TropMonomial::one(0); n + r],
        ex,
        p_offset: vars.len(),
    })
}

/// `ytilde_j = prod_i x_i^b_ij`.
pub fn y_tilde(s: &ClusterSeed) -> Vec<PosRatFunc> {
    let size = s.ex.size();
    (0..size)
        .map(|j| {
            (0..size).fold(PosRatFunc::one(s.vars()), |acc, i| {
                let b = s.ex.bij(i, j);
                if b == 0 {
                    acc
                } else {
                    acc.mul(&s.x[i].pow(b as i32))
                }
            })
        })
        .collect()
}

/// `yhat_j = p_j * ytilde_j`.
pub fn y_hat(s: &ClusterSeed) -> Vec<PosRatFunc> {
    y_tilde(s)
        .into_iter()
        .zip(&s.p)
        .map(|(y, p)| y.mul(&s.coefficient(p)))
        .collect()
}

/// `p^*(X_i) = prod_j A_j^b_ji` on the A-side variables of `s`.
pub fn p_star_pullback(s: &ClusterSeed, i: usize) -> PosRatFunc {
    (0..s.ex.size()).fold(PosRatFunc::one(s.vars()), |acc, j| {
        let b = s.ex.bij(j, i);
        if b == 0 {
            acc
        } else {
            acc.mul(&s.x[j].pow(b as i32))
        }
    })
}

/// `(p_0, B_0) -> (p_0, -B_0^T)`.
pub fn dual_pattern_data(p0: &[TropMonomial], ex: &ExchangeData) -> (Vec<TropMonomial>, ExchangeData) {
    (p0.to_vec(), ex.minus_transpose())
}

/// Coordinates of the mutated bases `(e'_i)` and `(f'_i)` in the initial ones.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NSeedCoords {
    pub e: Matrix,
    pub f: Matrix,
}

impl NSeedCoords {
    pub fn initial(size: usize) -> Self {
        NSeedCoords {
            e: Matrix::identity(size),
            f: Matrix::identity(size),
        }
    }

    /// Mutation using `eps = B^T` of the current seed `ex`.
    pub fn mutate(&self, ex: &ExchangeData, k: usize) -> Result<Self> {
        ex.check_direction(k)?;
        let size = ex.size();
        let eps = |i: usize, j: usize| ex.bij(j, i);
        let mut e = self.e.clone();
        let mut f = self.f.clone();
        for i in 0..size {
            for a in 0..size {
                e[(i, a)] = if i == k {
                    -self.e[(k, a)]
                } else {
                    self.e[(i, a)] + eps(i, k).max(0) * self.e[(k, a)]
                };
            }
        }
        for a in 0..size {
            let mut v = -self.f[(k, a)];
            for j in 0..size {
                v += (-eps(k, j)).max(0) * self.f[(j, a)];
            }
            f[(k, a)] = v;
        }
        Ok(NSeedCoords { e, f })
    }

    /// Whether `<d_i e'_i, f'_j> = delta_ij` with `<e_a, f_b> = delta_ab / d_a`.
    pub fn pairing_ok(&self, d: &[i64]) -> bool {
        let size = d.len();
        let l = lcm_all(d);
        (0..size).all(|i| {
            (0..size).all(|j| {
                let s: i64 = (0..size)
                    .map(|a| self.e[(i, a)] * self.f[(j, a)] * (l / d[a]) * d[i])
                    .sum();
                s == if i == j { l } else { 0 }
            })
        })
    }

    /// `eps'_ij = {e'_i, e'_j} d_j` from the initial form `{e_a, e_b} = eps_ab / d_b`.
    pub fn epsilon(&self, ex0: &ExchangeData) -> Matrix {
        let size = ex0.size();
        let d = ex0.d();
        let l = lcm_all(d);
        let mut out = Matrix::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                let mut s = 0i64;
                for a in 0..size {
                    for b in 0..size {
                        s += self.e[(i, a)] * self.e[(j, b)] * ex0.bij(b, a) * (l / d[b]);
                    }
                }
                out[(i, j)] = s * d[j] / l;
            }
        }
        out
    }
}

/// Permutation `sigma` with `a[sigma(i)] == b[i]` for every `i` and
/// `B_a[sigma(i), sigma(j)] == B_b[i, j]`, if one exists.
pub fn unlabeled_match<T>(
    a: &[T],
    b: &[T],
    ba: &Matrix,
    bb: &Matrix,
    eq: impl Fn(&T, &T) -> bool,
) -> Option<Vec<usize>> {
    let n = a.len();
    let mut sigma = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for bi in b {
        let j = (0..n).find(|&j| !used[j] && eq(&a[j], bi))?;
        used[j] = true;
        sigma.push(j);
    }
    for i in 0..n {
        for j in 0..n {
            if ba[(sigma[i], sigma[j])] != bb[(i, j)] {
                return None;
            }
        }
    }
    Some(sigma)
}
