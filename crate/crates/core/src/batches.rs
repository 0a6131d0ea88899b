//! Reproducible random inputs and whole-atlas check batches.
//!
//! Random inputs are drawn sequentially from a seeded ChaCha stream and then
//! checked in parallel, so results do not depend on the thread count.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::degeneration::{degree_check, glue_ring_check, limit_check, strata_consistency_check};
use crate::error::Result;
use crate::gfan::GFanAtlas;
use crate::invariants::{check_sign_coherence, separation_check};
use crate::linalg::Matrix;
use crate::report::CheckRecord;
use crate::seeds::{format_path, ClusterSeed, ExchangeData, YSeed};
use crate::semifields::TropMonomial;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exchange data of rank at most 3 drawn on by the random batches.
pub fn exchange_pool() -> Vec<(&'static str, ExchangeData)> {
    let mk = |rows: &[&[i64]], d: &[i64]| {
        let b = Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
        ExchangeData::new(d.len(), 0, b, d.to_vec()).expect("pool entry")
    };
    vec![
        ("A2", mk(&[&[0, 1], &[-1, 0]], &[1, 1])),
        ("B2", mk(&[&[0, 2], &[-1, 0]], &[1, 2])),
        ("G2", mk(&[&[0, 3], &[-1, 0]], &[1, 3])),
        ("A3", mk(&[&[0, 1, 0], &[-1, 0, 1], &[0, -1, 0]], &[1, 1, 1])),
        ("B3", mk(&[&[0, 1, 0], &[-1, 0, 1], &[0, -2, 0]], &[2, 2, 1])),
        ("C3", mk(&[&[0, 1, 0], &[-1, 0, 2], &[0, -1, 0]], &[1, 1, 2])),
        ("A1xA2", mk(&[&[0, 0, 0], &[0, 0, 1], &[0, -1, 0]], &[1, 1, 1])),
        ("affine A2", mk(&[&[0, 1, 1], &[-1, 0, 1], &[-1, -1, 0]], &[1, 1, 1])),
    ]
}

/// Path of length `1..=max_len` over mutable directions, without immediate repeats.
pub fn random_path(rng: &mut impl Rng, n: usize, max_len: usize) -> Vec<usize> {
    let len = rng.gen_range(1..=max_len.max(1));
    let mut path: Vec<usize> = Vec::with_capacity(len);
    while path.len() < len {
        let k = rng.gen_range(0..n);
        if n == 1 || path.last() != Some(&k) {
            path.push(k);
        }
    }
    path
}

/// Tropical coefficients of rank `r` with exponents in `[-2, 2]`.
pub fn random_coeffs(rng: &mut impl Rng, size: usize, r: usize) -> Vec<TropMonomial> {
    (0..size)
        .map(|_| TropMonomial((0..r).map(|_| rng.gen_range(-2..=2)).collect()))
        .collect()
}

/// Nonzero rationals with numerator and denominator at most 9 in absolute value.
pub fn random_nonzero_rationals(rng: &mut impl Rng, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| {
            let mut a: i64 = rng.gen_range(1..=9);
            if rng.gen_bool(0.5) {
                a = -a;
            }
            BigRational::new(BigInt::from(a), BigInt::from(rng.gen_range(1..=9)))
        })
        .collect()
}

/// Separation formulas at the end of each path.
pub fn separation_batch(cases: &[(ExchangeData, Vec<TropMonomial>, Vec<usize>)]) -> Result<Vec<CheckRecord>> {
    cases
        .par_iter()
        .map(|(ex, p0, path)| {
            let r = separation_check(ex, p0, path)?;
            let id = format!("B = {} p0 = {:?} path {}", ex.b(), p0.iter().map(ToString::to_string).collect::<Vec<_>>(), r.path);
            Ok(CheckRecord::new("separation", id, r.pass(), || {
                format!("quotient form {}, F-polynomial form {}", r.quotient_form, r.f_polynomial_form)
            }))
        })
        .collect()
}

/// `count` random cases: data from `fixed` or from the pool, random `p0` of
/// rank equal to the size when `fixed` has no coefficients.
pub fn separation_cases(
    fixed: Option<(&ExchangeData, Option<&[TropMonomial]>)>,
    count: usize,
    max_len: usize,
    seed: u64,
) -> Vec<(ExchangeData, Vec<TropMonomial>, Vec<usize>)> {
    let mut r = rng(seed);
    let pool = exchange_pool();
    (0..count)
        .map(|_| {
            let (ex, p0) = match fixed {
                Some((ex, Some(p))) => (ex.clone(), p.to_vec()),
                Some((ex, None)) => (ex.clone(), random_coeffs(&mut r, ex.size(), ex.size())),
                None => {
                    let ex = pool.choose(&mut r).expect("nonempty pool").1.clone();
                    let p0 = random_coeffs(&mut r, ex.size(), ex.size());
                    (ex, p0)
                }
            };
            let path = random_path(&mut r, ex.n(), max_len);
            (ex, p0, path)
        })
        .collect()
}

/// `mu_k mu_k` is the identity on Y-seeds and cluster seeds with coefficients.
pub fn involution_batch(count: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut r = rng(seed);
    let pool = exchange_pool();
    let cases: Vec<(ExchangeData, Vec<TropMonomial>, Vec<usize>, usize)> = (0..count)
        .map(|_| {
            let ex = pool.choose(&mut r).expect("nonempty pool").1.clone();
            let p0 = random_coeffs(&mut r, ex.size(), 2);
            let prefix = random_path(&mut r, ex.n(), 4);
            let k = r.gen_range(0..ex.n());
            (ex, p0, prefix, k)
        })
        .collect();
    cases
        .par_iter()
        .map(|(ex, p0, prefix, k)| {
            let y = YSeed::initial(ex, p0.clone(), "y", "p")?.mutate_path(prefix)?;
            let y2 = y.mutate(*k)?.mutate(*k)?;
            let x = ClusterSeed::initial(ex, p0.clone(), "x", "p")?.mutate_path(prefix)?;
            let x2 = x.mutate(*k)?.mutate(*k)?;
            let ok = y2.ex == y.ex
                && y2.p == y.p
                && y.y.iter().zip(&y2.y).all(|(a, b)| a.rat_equal(b))
                && x2.p == x.p
                && x.x.iter().zip(&x2.x).all(|(a, b)| a.rat_equal(b));
            let id = format!("B = {} path {} then {k} twice", ex.b(), format_path(prefix), k = k + 1);
            Ok(CheckRecord::new("involution", id, ok, || "double mutation changed the seed".into()))
        })
        .collect()
}

/// Cluster variables along random rank-3 paths have monomial denominators.
pub fn laurent_batch(count: usize, max_len: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut r = rng(seed);
    let pool: Vec<ExchangeData> = exchange_pool().into_iter().map(|(_, e)| e).filter(|e| e.n() == 3).collect();
    let cases: Vec<(ExchangeData, Vec<usize>)> = (0..count)
        .map(|_| {
            let ex = pool.choose(&mut r).expect("rank 3 entries").clone();
            let path = random_path(&mut r, 3, max_len);
            (ex, path)
        })
        .collect();
    cases
        .par_iter()
        .map(|(ex, path)| {
            let s = ClusterSeed::coefficient_free(ex, "x").mutate_path(path)?;
            let bad = s.x.iter().find(|f| f.as_laurent().is_none());
            let id = format!("B = {} path {}", ex.b(), format_path(path));
            Ok(CheckRecord::new("laurent", id, bad.is_none(), || format!("{bad:?} has a non-monomial denominator")))
        })
        .collect()
}

/// `G^T C^(-B^T) = I` and `|det G| = 1` for every cone.
pub fn duality_batch(atlas: &GFanAtlas) -> Vec<CheckRecord> {
    let dim = atlas.dim();
    atlas
        .cones
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let prod = c.g.transpose().mul(&c.c_dual);
            let det = c.g.det();
            let ok = prod == Matrix::identity(dim) && det.abs() == 1;
            CheckRecord::new("duality", format!("cone {i} [{}]", format_path(&c.path)), ok, || {
                format!("G^T C^(-B^T) = {prod}, det G = {det}")
            })
        })
        .collect()
}

pub fn sign_coherence_batch(atlas: &GFanAtlas) -> Vec<CheckRecord> {
    atlas
        .cones
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let ok = check_sign_coherence(&c.c) && check_sign_coherence(&c.c_dual);
            CheckRecord::new("sign-coherence", format!("cone {i} [{}]", format_path(&c.path)), ok, || {
                format!("C = {}, C^(-B^T) = {}", c.c, c.c_dual)
            })
        })
        .collect()
}

fn per_coordinate(
    atlas: &GFanAtlas,
    f: impl Fn(&GFanAtlas, usize, usize) -> Result<CheckRecord> + Sync,
) -> Result<Vec<CheckRecord>> {
    atlas.require_finite()?;
    let pairs: Vec<(usize, usize)> = (0..atlas.cones.len())
        .flat_map(|id| (0..atlas.dim()).map(move |i| (id, i)))
        .collect();
    pairs.par_iter().map(|&(id, i)| f(atlas, id, i)).collect()
}

pub fn degree_batch(atlas: &GFanAtlas) -> Result<Vec<CheckRecord>> {
    per_coordinate(atlas, degree_check)
}

pub fn limit_batch(atlas: &GFanAtlas) -> Result<Vec<CheckRecord>> {
    per_coordinate(atlas, limit_check)
}

/// Strata checks for every ray of the fan.
pub fn strata_batch(atlas: &GFanAtlas) -> Result<Vec<CheckRecord>> {
    atlas.require_finite()?;
    let mut out = Vec::new();
    for ray in atlas.rays() {
        out.extend(strata_consistency_check(atlas, &[ray])?);
    }
    Ok(out)
}

/// Gluing checks on every wall, with and without coefficients.
pub fn glue_batch(atlas: &GFanAtlas) -> Result<Vec<CheckRecord>> {
    atlas.require_finite()?;
    let jobs: Vec<(usize, usize, bool)> = atlas
        .walls()
        .into_iter()
        .flat_map(|(g, k, _)| [(g, k, false), (g, k, true)])
        .collect();
    jobs.par_iter().map(|&(g, k, w)| glue_ring_check(atlas, g, k, w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfan::enumerate_gfan;
    use crate::report::all_pass;

    #[test]
    fn pool_is_valid_and_rank_bounded() {
        for (_, ex) in exchange_pool() {
            assert!(ex.n() <= 3 && ex.m() == 0);
        }
    }

    #[test]
    fn random_inputs_are_reproducible() {
        let a = separation_cases(None, 10, 8, 7);
        let b = separation_cases(None, 10, 8, 7);
        assert_eq!(a, b);
        assert!(a.iter().all(|(ex, p, path)| p.len() == ex.size() && !path.is_empty() && path.len() <= 8));
        assert!(a.iter().all(|(_, _, path)| path.windows(2).all(|w| w[0] != w[1])));
    }

    #[test]
    fn small_batches_pass() {
        assert!(all_pass(&separation_batch(&separation_cases(None, 10, 5, 1)).unwrap()));
        assert!(all_pass(&involution_batch(20, 2).unwrap()));
        assert!(all_pass(&laurent_batch(10, 6, 3).unwrap()));
    }

    #[test]
    fn atlas_batches_pass_on_a2() {
        let ex = ExchangeData::skew_symmetric(&[vec![0, 1], vec![-1, 0]]).unwrap();
        let at = enumerate_gfan(&ex, &[], 64).unwrap();
        assert_eq!(duality_batch(&at).len(), 5);
        assert!(all_pass(&duality_batch(&at)));
        assert!(all_pass(&sign_coherence_batch(&at)));
        assert_eq!(degree_batch(&at).unwrap().len(), 10);
        assert!(all_pass(&limit_batch(&at).unwrap()));
        assert!(all_pass(&strata_batch(&at).unwrap()));
        assert_eq!(glue_batch(&at).unwrap().len(), 20);
        assert!(all_pass(&glue_batch(&at).unwrap()));
    }
}
