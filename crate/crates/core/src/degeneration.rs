//! The family over the g-fan atlas: transition maps with principal coefficients,
//! degree and limit checks, cocycles, fibers, central fiber, gluing rings and strata.
//!
//! Every patch uses the variables `X1..Xn, t1..tn`; a transition expresses the
//! coordinates of the target patch in those of the source patch.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_algebra::{degree_of, limit_t_zero, Grading, Monomial, Poly, PosRatFunc, RatFn, VarSet, Vars};
use crate::gfan::GFanAtlas;
use crate::linalg::Matrix;
use crate::report::CheckRecord;
use crate::seeds::{format_path, unlabeled_match, YSeed};
use crate::semifields::TropMonomial;

pub fn family_vars(n: usize) -> Vars {
    VarSet::indexed("X", n, "t", n)
}

fn t_vars(n: usize) -> Vec<usize> {
    (n..2 * n).collect()
}

fn column_trop(m: &Matrix, j: usize) -> TropMonomial {
    TropMonomial(m.col(j).iter().map(|&a| a as i32).collect())
}

/// Patch seed of cone `id`: `y = X`, `p = t^c` (or `p = 1` without coefficients).
pub fn patch_seed(atlas: &GFanAtlas, id: usize, with_coeffs: bool) -> YSeed {
    let n = atlas.dim();
    let vars = family_vars(n);
    let cone = &atlas.cones[id];
    let p = (0..n)
        .map(|j| {
            if with_coeffs {
                column_trop(&cone.c, j)
            } else {
                TropMonomial::one(n)
            }
        })
        .collect();
    let y = (0..n).map(|i| PosRatFunc::var(&vars, i)).collect();
    YSeed::from_parts(y, p, cone.ex.clone(), n).expect("consistent patch")
}

/// Pullbacks of the target coordinates, indexed by the target cone's labels.
#[derive(Clone, Debug)]
pub struct TransitionMap {
    pub source: usize,
    pub target: usize,
    pub k: usize,
    pub pullback: Vec<PosRatFunc>,
}

pub fn transition(atlas: &GFanAtlas, source: usize, target: usize, k: usize) -> Result<TransitionMap> {
    let nb = atlas
        .cones
        .get(source)
        .and_then(|c| c.neighbors.get(k))
        .and_then(Option::as_ref)
        .filter(|nb| nb.cone == target)
        .ok_or(Error::NotAdjacent(source, target))?;
    let mutated = patch_seed(atlas, source, true).mutate(k)?;
    let mut pullback = mutated.y.clone();
    for (i, y) in mutated.y.into_iter().enumerate() {
        pullback[nb.perm[i]] = y;
    }
    Ok(TransitionMap {
        source,
        target,
        k,
        pullback,
    })
}

/// Principal-coefficient Y-pattern at the representative path of cone `id`.
pub fn pullback_to_initial(atlas: &GFanAtlas, id: usize) -> Result<Vec<PosRatFunc>> {
    let n = atlas.dim();
    let vars = family_vars(n);
    let y = (0..n).map(|i| PosRatFunc::var(&vars, i)).collect();
    let p = (0..n).map(|i| TropMonomial::generator(n, i)).collect();
    let s = YSeed::from_parts(y, p, atlas.ex.clone(), n)?;
    Ok(s.mutate_path(&atlas.cones[id].path)?.y)
}

/// The same pullback obtained by composing transition maps along the path of cones.
pub fn pullback_by_composition(atlas: &GFanAtlas, id: usize) -> Result<Vec<PosRatFunc>> {
    let n = atlas.dim();
    let vars = family_vars(n);
    let ident: Vec<PosRatFunc> = (0..2 * n).map(|i| PosRatFunc::var(&vars, i)).collect();
    let mut images = ident[..n].to_vec();
    let mut cur = 0usize;
    let mut pi: Vec<usize> = (0..n).collect();
    for &k in &atlas.cones[id].path {
        let sd = pi[k];
        let nb = atlas.cones[cur].neighbors[sd].clone().ok_or(Error::Truncated(atlas.depth_cap))?;
        let t = transition(atlas, cur, nb.cone, sd)?;
        let mut full = images.clone();
        full.extend_from_slice(&ident[n..]);
        images = t.pullback.iter().map(|f| f.substitute(&full).simplify()).collect();
        pi = pi.iter().map(|&s| nb.perm[s]).collect();
        cur = nb.cone;
    }
    if cur != id {
        return Err(Error::InvalidInput(format!("path of cone {id} ends in cone {cur}")));
    }
    Ok(images)
}

fn ids(atlas: &GFanAtlas, id: usize, i: usize) -> String {
    format!("cone {id} [{}] coordinate {}", format_path(&atlas.cones[id].path), i + 1)
}

/// Degree of the pullback of `X_{i;G}` equals the c-vector `c_{i;G}`.
pub fn degree_check(atlas: &GFanAtlas, id: usize, i: usize) -> Result<CheckRecord> {
    let n = atlas.dim();
    let f = &pullback_to_initial(atlas, id)?[i];
    let c = atlas.cones[id].c.col(i);
    Ok(match degree_of(f, &Grading::family(n)) {
        Ok(d) => CheckRecord::new("degree", ids(atlas, id, i), d == c, || format!("degree {d:?} of {f}, c-vector {c:?}")),
        Err(e) => CheckRecord::fail("degree", ids(atlas, id, i), format!("{e}: {f}")),
    })
}

/// Limit at `t = 0` of the pullback of `X_{i;G}` is `X^{c_{i;G}}`.
pub fn limit_check(atlas: &GFanAtlas, id: usize, i: usize) -> Result<CheckRecord> {
    let n = atlas.dim();
    let f = &pullback_to_initial(atlas, id)?[i];
    let c = atlas.cones[id].c.col(i);
    let mut e: Vec<i32> = c.iter().map(|&a| a as i32).collect();
    e.extend(std::iter::repeat_n(0, n));
    let expect = Poly::monomial(f.vars(), e, BigInt::one());
    Ok(match limit_t_zero(f, &t_vars(n)) {
        Ok(l) => CheckRecord::new("limit", ids(atlas, id, i), l == expect, || format!("limit {l} of {f}, expected {expect}")),
        Err(e) => CheckRecord::fail("limit", ids(atlas, id, i), format!("{e}")),
    })
}

/// Mutates the patch seed of `start` along `labels`; returns `sigma` with
/// `X_end[sigma(i)] = X_i` and `p_end[sigma(i)] = p_i`, or `None`.
pub fn cocycle_check(atlas: &GFanAtlas, start: usize, labels: &[usize]) -> Result<Option<Vec<usize>>> {
    let s0 = patch_seed(atlas, start, true);
    let mut cur = start;
    let mut pi: Vec<usize> = (0..atlas.dim()).collect();
    for &k in labels {
        let nb = atlas.cones[cur].neighbors[pi[k]].clone().ok_or(Error::Truncated(atlas.depth_cap))?;
        pi = pi.iter().map(|&s| nb.perm[s]).collect();
        cur = nb.cone;
    }
    if cur != start {
        return Err(Error::InvalidInput(format!(
            "labels {} from cone {start} end in cone {cur}",
            format_path(labels)
        )));
    }
    let s1 = s0.mutate_path(labels)?;
    let a: Vec<(PosRatFunc, TropMonomial)> = s1.y.iter().cloned().zip(s1.p.iter().cloned()).collect();
    let b: Vec<(PosRatFunc, TropMonomial)> = s0.y.iter().cloned().zip(s0.p.iter().cloned()).collect();
    Ok(unlabeled_match(&a, &b, s1.ex.b(), s0.ex.b(), |x, y| x.1 == y.1 && x.0.rat_equal(&y.0)))
}

/// Simple cycles of length `3..=max_len` in the dual graph, each listed once as
/// `(start, labels)` with `start` the smallest cone id on the cycle.
pub fn enumerate_loops(atlas: &GFanAtlas, max_len: usize) -> Vec<(usize, Vec<usize>)> {
    struct Walk<'a> {
        atlas: &'a GFanAtlas,
        dirs: Vec<usize>,
        max_len: usize,
        start: usize,
        out: Vec<(usize, Vec<usize>)>,
    }
    fn rec(w: &mut Walk, cur: usize, pi: &[usize], cones: &mut Vec<usize>, labels: &mut Vec<usize>) {
        for &k in &w.dirs.clone() {
            let Some(nb) = w.atlas.cones[cur].neighbors[pi[k]].clone() else { continue };
            let next = nb.cone;
            if next == w.start {
                if labels.len() + 1 >= 3 && cones[1] < cur {
                    let mut l = labels.clone();
                    l.push(k);
                    w.out.push((w.start, l));
                }
                continue;
            }
            if next < w.start || cones.contains(&next) || labels.len() + 1 >= w.max_len {
                continue;
            }
            let npi: Vec<usize> = pi.iter().map(|&s| nb.perm[s]).collect();
            cones.push(next);
            labels.push(k);
            rec(w, next, &npi, cones, labels);
            cones.pop();
            labels.pop();
        }
    }
    let n = atlas.dim();
    let mut all = Vec::new();
    for start in 0..atlas.cones.len() {
        let mut w = Walk {
            atlas,
            dirs: (0..n).collect(),
            max_len,
            start,
            out: Vec::new(),
        };
        rec(&mut w, start, &(0..n).collect::<Vec<_>>(), &mut vec![start], &mut Vec::new());
        all.extend(w.out);
    }
    all
}

/// Runs [`cocycle_check`] on every loop of length at most `max_len`.
pub fn cocycle_suite(atlas: &GFanAtlas, max_len: usize) -> Result<Vec<CheckRecord>> {
    atlas.require_finite()?;
    enumerate_loops(atlas, max_len)
        .par_iter()
        .map(|(s, l)| {
            let id = format!("cone {s} loop {}", format_path(l));
            Ok(match cocycle_check(atlas, *s, l)? {
                Some(_) => CheckRecord::new("cocycle", id, true, String::new),
                None => CheckRecord::fail("cocycle", id, "end seed is not a permutation of the start".into()),
            })
        })
        .collect()
}

/// Transition map with `t` specialized to `u`.
pub fn specialize_fiber(map: &TransitionMap, u: &[BigRational]) -> Result<Vec<RatFn<BigRational>>> {
    let n = map.pullback.len();
    if u.len() != n {
        return Err(Error::RankMismatch { expected: n, got: u.len() });
    }
    let values: Vec<(usize, BigRational)> = u.iter().enumerate().map(|(i, q)| (n + i, q.clone())).collect();
    map.pullback.iter().map(|f| f.specialize(&values)).collect()
}

fn power_ratio(u2: &[BigRational], u: &[BigRational], c: &[i64]) -> BigRational {
    let pw = |q: &BigRational, e: i64| -> BigRational {
        let r = num_traits::pow(q.clone(), e.unsigned_abs() as usize);
        if e < 0 {
            r.recip()
        } else {
            r
        }
    };
    c.iter()
        .enumerate()
        .fold(BigRational::one(), |acc, (l, &e)| acc * pw(&u2[l], e) / pw(&u[l], e))
}

/// `psi^* mu_k^* = mu_k^* psi^*` on every wall between the fibers over `u` and `u2`,
/// with `psi^* X_{i;G} = (u2^c / u^c) X_{i;G}`.
pub fn fiber_iso_check(atlas: &GFanAtlas, u: &[BigRational], u2: &[BigRational]) -> Result<Vec<CheckRecord>> {
    let n = atlas.dim();
    if u.len() != n || u2.len() != n {
        return Err(Error::RankMismatch { expected: n, got: u.len().min(u2.len()) });
    }
    if u.iter().chain(u2).any(Zero::is_zero) {
        return Err(Error::InvalidInput("fiber isomorphisms need nonzero parameters".into()));
    }
    let lambdas = |id: usize| -> Vec<BigRational> { (0..n).map(|j| power_ratio(u2, u, &atlas.cones[id].c.col(j))).collect() };
    atlas
        .walls()
        .par_iter()
        .map(|&(g, k, g2)| {
            let t = transition(atlas, g, g2, k)?;
            let fu = specialize_fiber(&t, u)?;
            let fu2 = specialize_fiber(&t, u2)?;
            let lg: Vec<(usize, BigRational)> = lambdas(g).into_iter().enumerate().collect();
            let lg2 = lambdas(g2);
            let ok = (0..n).all(|i| {
                let lhs = fu[i].rescale_vars(&lg).expect("nonzero scale");
                let rhs = fu2[i].scale(&lg2[i]);
                lhs.equals(&rhs)
            });
            Ok(CheckRecord::new("fiber-iso", format!("wall {g}-{g2} direction {}", k + 1), ok, || {
                format!("squares do not commute for u = {u:?}, u' = {u2:?}")
            }))
        })
        .collect()
}

/// Wall binomial `t^[s c_k]+ + t^[-s c_k]+ X_k^-s` of the patch seed, `s = +1`.
fn wall_binomial(vars: &Vars, n: usize, k: usize, ck: &[i32]) -> PosRatFunc {
    let mono = |t: &[i32], xk: i32| {
        let mut e = vec![0; 2 * n];
        e[k] = xk;
        e[n..].copy_from_slice(t);
        PosRatFunc::monomial(vars, Monomial::new(e))
    };
    let plus: Vec<i32> = ck.iter().map(|&a| a.max(0)).collect();
    let minus: Vec<i32> = ck.iter().map(|&a| (-a).max(0)).collect();
    mono(&plus, 0).add(&mono(&minus, -1))
}

/// At `t = 0` every wall binomial is a monomial in `X_k`, and every transition
/// is the monomial map `X'_j -> X^(C_G^-1 c'_j)` of the toric gluing.
pub fn central_fiber_toric_check(atlas: &GFanAtlas) -> Result<Vec<CheckRecord>> {
    atlas.require_finite()?;
    let n = atlas.dim();
    let vars = family_vars(n);
    atlas
        .walls()
        .par_iter()
        .map(|&(g, k, g2)| {
            let id = format!("wall {g}-{g2} direction {}", k + 1);
            let cone = &atlas.cones[g];
            let ck: Vec<i32> = cone.c.col(k).iter().map(|&a| a as i32).collect();
            let beta = wall_binomial(&vars, n, k, &ck);
            match limit_t_zero(&beta, &t_vars(n)) {
                Ok(m) => {
                    let (e, _) = m.terms().next().expect("monomial");
                    if (0..2 * n).any(|v| v != k && e.exps()[v] != 0) {
                        return Ok(CheckRecord::fail("central-fiber", id, format!("binomial limit {m} is not a power of X{}", k + 1)));
                    }
                }
                Err(e) => return Ok(CheckRecord::fail("central-fiber", id, format!("{e}"))),
            }
            let t = transition(atlas, g, g2, k)?;
            let cinv = cone
                .c
                .inverse_rational()
                .ok_or_else(|| Error::InvalidInput(format!("c-matrix of cone {g} is singular")))?;
            for (j, f) in t.pullback.iter().enumerate() {
                let target = atlas.cones[g2].c.col(j);
                let a: Vec<BigRational> = cinv
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(&target)
                            .fold(BigRational::zero(), |s, (q, &b)| s + q * BigRational::from_integer(b.into()))
                    })
                    .collect();
                let Some(a) = a.iter().map(crate::linalg::rational_to_i64).collect::<Option<Vec<i64>>>() else {
                    return Ok(CheckRecord::fail("central-fiber", id, format!("C_G^-1 c'_{} is not integral", j + 1)));
                };
                let mut e: Vec<i32> = a.iter().map(|&x| x as i32).collect();
                e.extend(std::iter::repeat_n(0, n));
                let expect = Poly::monomial(&vars, e, BigInt::one());
                match limit_t_zero(f, &t_vars(n)) {
                    Ok(l) if l == expect => {}
                    Ok(l) => {
                        return Ok(CheckRecord::fail("central-fiber", id, format!("X'{} -> {l}, expected {expect}", j + 1)));
                    }
                    Err(e) => return Ok(CheckRecord::fail("central-fiber", id, format!("{e}"))),
                }
            }
            Ok(CheckRecord::new("central-fiber", id, true, String::new))
        })
        .collect()
}

fn binomial_key(f: &PosRatFunc) -> Poly {
    f.factors().keys().next().cloned().expect("binomial has a factor")
}

/// Membership in the localization of `Z[X, t]` at `X_k` and the wall binomial.
fn in_local_ring(f: &PosRatFunc, n: usize, k: usize, allowed: &Poly) -> bool {
    let f = f.simplify();
    f.factors().iter().all(|(key, &e)| e > 0 || key == allowed)
        && f.unit().exps().iter().enumerate().all(|(v, &a)| v == k || v >= 2 * n || a >= 0)
}

/// The rings of the two patches along wall `(id, k)` are identified by `mu_k^*`.
pub fn glue_ring_check(atlas: &GFanAtlas, id: usize, k: usize, with_coeffs: bool) -> Result<CheckRecord> {
    let n = atlas.dim();
    let vars = family_vars(n);
    let s = patch_seed(atlas, id, with_coeffs);
    let s2 = s.mutate(k)?;
    let ids = format!(
        "cone {id} direction {} {}",
        k + 1,
        if with_coeffs { "with coefficients" } else { "coefficient-free" }
    );
    let beta = wall_binomial(&vars, n, k, s.p[k].exps());
    let beta2 = wall_binomial(&vars, n, k, s2.p[k].exps());
    let key = binomial_key(&beta);
    let key2 = binomial_key(&beta2);
    let ident: Vec<PosRatFunc> = (0..2 * n).map(|i| PosRatFunc::var(&vars, i)).collect();
    let with_t = |imgs: &[PosRatFunc]| -> Vec<PosRatFunc> {
        let mut v = imgs.to_vec();
        v.extend_from_slice(&ident[n..]);
        v
    };
    let forward = with_t(&s2.y);
    let fresh = YSeed::from_parts(ident[..n].to_vec(), s2.p.clone(), s2.ex.clone(), n)?;
    let backward = with_t(&fresh.mutate(k)?.y);

    let images = |map: &[PosRatFunc], bin: &PosRatFunc| -> Vec<PosRatFunc> {
        let mut out: Vec<PosRatFunc> = map[..n].to_vec();
        out.push(map[k].inv());
        out.push(bin.substitute(map).inv());
        out
    };
    if let Some(f) = images(&forward, &beta2).iter().find(|f| !in_local_ring(f, n, k, &key)) {
        return Ok(CheckRecord::fail("glue", ids, format!("forward image {f} is not in the ring of the source patch")));
    }
    if let Some(f) = images(&backward, &beta).iter().find(|f| !in_local_ring(f, n, k, &key2)) {
        return Ok(CheckRecord::fail("glue", ids, format!("backward image {f} is not in the ring of the target patch")));
    }
    for i in 0..n {
        let there_and_back = backward[i].substitute(&forward);
        let back_and_there = forward[i].substitute(&backward);
        if !there_and_back.rat_equal(&ident[i]) || !back_and_there.rat_equal(&ident[i]) {
            return Ok(CheckRecord::fail("glue", ids, format!("composition moves X{}", i + 1)));
        }
    }
    Ok(CheckRecord::new("glue", ids, true, String::new))
}

/// Strata compatibility for the face `tau` (given by its generating rays).
pub fn strata_consistency_check(atlas: &GFanAtlas, tau: &[Vec<i64>]) -> Result<Vec<CheckRecord>> {
    atlas.require_finite()?;
    let n = atlas.dim();
    let vars = family_vars(n);
    let contains = |id: usize| {
        let g = atlas.cones[id].gens();
        tau.iter().all(|t| g.contains(t))
    };
    let walls: Vec<(usize, usize, usize)> = atlas
        .walls()
        .into_iter()
        .filter(|&(g, _, g2)| contains(g) && contains(g2))
        .collect();
    if !atlas.cones.iter().enumerate().any(|(i, _)| contains(i)) {
        return Err(Error::InvalidInput(format!("no maximal cone contains {tau:?}")));
    }
    walls
        .par_iter()
        .map(|&(g, k, g2)| {
            let id = format!("wall {g}-{g2} direction {}", k + 1);
            let fail = |w: String| Ok(CheckRecord::fail("strata", id.clone(), w));
            let cone = &atlas.cones[g];
            let gens = cone.gens();
            let gens2 = atlas.cones[g2].gens();
            let outside: Vec<usize> = (0..n).filter(|&j| tau.contains(&gens[j])).collect();
            let inside: Vec<usize> = (0..n).filter(|j| !outside.contains(j)).collect();
            let t = transition(atlas, g, g2, k)?;
            let free_of_outside = |f: &PosRatFunc| f.support_vars().iter().all(|v| !outside.contains(v));
            for (i, f) in t.pullback.iter().enumerate() {
                if tau.contains(&gens2[i]) {
                    let j = gens.iter().position(|x| x == &gens2[i]).expect("common generator");
                    let q = f.div(&PosRatFunc::var(&vars, j)).simplify();
                    if !free_of_outside(&q) {
                        return fail(format!("X'{} / X{} = {q} involves a coordinate set to zero", i + 1, j + 1));
                    }
                } else if !free_of_outside(f) {
                    return fail(format!("X'{} -> {f} involves a coordinate set to zero", i + 1));
                }
            }
            let Some(kk) = inside.iter().position(|&i| i == k) else {
                return fail(format!("direction {} lies in tau", k + 1));
            };
            let restricted = cone.ex.restrict(&inside)?;
            if restricted.mutate(kk)?.b() != &cone.ex.mutate(k)?.restrict(&inside)?.b().clone() {
                return fail("restriction does not commute with matrix mutation".into());
            }
            let y = inside.iter().map(|&i| PosRatFunc::var(&vars, i)).collect();
            let p = inside.iter().map(|&i| column_trop(&cone.c, i)).collect();
            let sub = YSeed::from_parts(y, p, restricted, n)?.mutate(kk)?;
            let nb = cone.neighbors[k].as_ref().expect("wall");
            for (a, &i) in inside.iter().enumerate() {
                if !sub.y[a].rat_equal(&t.pullback[nb.perm[i]]) {
                    return fail(format!("restricted family differs at X'{}", nb.perm[i] + 1));
                }
            }
            let cinv = cone.c.inverse_rational().expect("unimodular");
            for (i, f) in t.pullback.iter().enumerate() {
                if tau.contains(&gens2[i]) {
                    continue;
                }
                let l = match limit_t_zero(f, &t_vars(n)) {
                    Ok(l) => l,
                    Err(e) => return fail(format!("{e}")),
                };
                let (m, _) = l.terms().next().expect("monomial");
                let target = atlas.cones[g2].c.col(i);
                let coords: Vec<BigRational> = cinv
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(&target)
                            .fold(BigRational::zero(), |s, (q, &b)| s + q * BigRational::from_integer(b.into()))
                    })
                    .collect();
                let ok = (0..n).all(|j| {
                    let e = BigRational::from_integer(m.exps()[j].into());
                    e == coords[j] && (!outside.contains(&j) || e.is_zero())
                });
                if !ok {
                    return fail(format!("t = 0 limit {l} of X'{} is not the toric map of the star", i + 1));
                }
            }
            Ok(CheckRecord::new("strata", id, true, String::new))
        })
        .collect()
}
