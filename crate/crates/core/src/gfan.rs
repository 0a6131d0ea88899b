//! g-fan enumeration, fan axioms, Star of a cone and the polytope P.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::check_sign_coherence;
use crate::linalg::{kernel_vector, primitive, Matrix};
use crate::seeds::{format_path, mutate_coefficients, parse_path, ExchangeData};
use crate::semifields::TropMonomial;

/// Default BFS depth cap.
pub const DEFAULT_DEPTH: usize = 64;

/// Column-sorted primitive generators.
pub type ConeKey = Vec<Vec<i64>>;

pub fn cone_key(g: &Matrix) -> ConeKey {
    let mut cols: Vec<Vec<i64>> = g.to_cols().iter().map(|c| primitive(c)).collect();
    cols.sort();
    cols
}

/// A neighbouring cone with the relabeling `perm`: label `i` of the mutated
/// seed is label `perm[i]` of the stored seed of `cone`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbor {
    pub cone: usize,
    pub perm: Vec<usize>,
}

/// One maximal cone with its representative labeled seed data.
#[derive(Clone, Debug)]
pub struct ConeData {
    pub path: Vec<usize>,
    /// Exchange matrix at the representative vertex.
    pub ex: ExchangeData,
    /// Labeled g-vectors as columns.
    pub g: Matrix,
    /// Labeled c-vectors `C^B` as columns.
    pub c: Matrix,
    /// Labeled c-vectors `C^{-B^T}`, dual to `g`.
    pub c_dual: Matrix,
    /// Indexed by direction; `None` for frozen directions or truncated walls.
    pub neighbors: Vec<Option<Neighbor>>,
}

impl ConeData {
    pub fn key(&self) -> ConeKey {
        cone_key(&self.g)
    }

    pub fn gens(&self) -> Vec<Vec<i64>> {
        self.g.to_cols()
    }
}

#[derive(Clone, Debug)]
pub struct GFanAtlas {
    pub ex: ExchangeData,
    /// Directions excluded from mutation, 0-based.
    pub frozen: Vec<usize>,
    pub depth_cap: usize,
    pub truncated: bool,
    pub cones: Vec<ConeData>,
}

struct Child {
    parent: usize,
    k: usize,
    path: Vec<usize>,
    ex: ExchangeData,
    c: Vec<TropMonomial>,
    cd: Vec<TropMonomial>,
    g: Matrix,
}

fn to_matrix(p: &[TropMonomial]) -> Matrix {
    let cols: Vec<Vec<i64>> = p.iter().map(|t| t.exps().iter().map(|&a| a as i64).collect()).collect();
    Matrix::from_cols(&cols)
}

fn to_trop(m: &Matrix) -> Vec<TropMonomial> {
    m.to_cols()
        .into_iter()
        .map(|c| TropMonomial(c.into_iter().map(|a| a as i32).collect()))
        .collect()
}

fn g_from_dual(cd: &Matrix) -> Result<Matrix> {
    cd.inverse()
        .map(|m| m.transpose())
        .ok_or_else(|| Error::InvalidInput(format!("c-matrix {cd} is not unimodular")))
}

fn perm_between(mutated: &Matrix, stored: &Matrix) -> Vec<usize> {
    let sc = stored.to_cols();
    mutated
        .to_cols()
        .iter()
        .map(|col| sc.iter().position(|s| s == col).expect("same cone"))
        .collect()
}

fn mutable_dirs(ex: &ExchangeData, frozen: &[usize]) -> Vec<usize> {
    (0..ex.n()).filter(|k| !frozen.contains(k)).collect()
}

fn child_of(cone: &ConeData, parent: usize, k: usize) -> Result<Child> {
    let c = mutate_coefficients(&cone.ex, &to_trop(&cone.c), k)?;
    let dual_ex = cone.ex.minus_transpose();
    let cd = mutate_coefficients(&dual_ex, &to_trop(&cone.c_dual), k)?;
    let g = g_from_dual(&to_matrix(&cd))?;
    let mut path = cone.path.clone();
    path.push(k);
    Ok(Child {
        parent,
        k,
        path,
        ex: cone.ex.mutate(k)?,
        c,
        cd,
        g,
    })
}

fn initial_cone(ex: &ExchangeData) -> ConeData {
    let s = ex.size();
    ConeData {
        path: Vec::new(),
        ex: ex.clone(),
        g: Matrix::identity(s),
        c: Matrix::identity(s),
        c_dual: Matrix::identity(s),
        neighbors: vec![None; s],
    }
}

/// Breadth-first enumeration of the maximal cones reachable without mutating `frozen`.
pub fn enumerate_gfan(ex: &ExchangeData, frozen: &[usize], depth_cap: usize) -> Result<GFanAtlas> {
    enumerate_with_order(ex, frozen, depth_cap, &mutable_dirs(ex, frozen))
}

/// As [`enumerate_gfan`] with an explicit order on directions.
pub fn enumerate_with_order(ex: &ExchangeData, frozen: &[usize], depth_cap: usize, order: &[usize]) -> Result<GFanAtlas> {
    if depth_cap == 0 {
        return Err(Error::InvalidInput("depth cap must be at least 1".into()));
    }
    if let Some(&f) = frozen.iter().find(|&&f| f >= ex.n()) {
        return Err(Error::FrozenDirection { k: f + 1, n: ex.n() });
    }
    let mut cones = vec![initial_cone(ex)];
    let mut index: HashMap<ConeKey, usize> = HashMap::new();
    index.insert(cones[0].key(), 0);
    let mut frontier = vec![0usize];
    let mut truncated = false;
    let mut depth = 0;
    while !frontier.is_empty() {
        let children: Vec<Child> = frontier
            .par_iter()
            .flat_map_iter(|&id| order.iter().map(move |&k| (id, k)))
            .map(|(id, k)| child_of(&cones[id], id, k))
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for ch in children {
            let key = cone_key(&ch.g);
            let target = match index.get(&key) {
                Some(&j) => Some(j),
                None if depth < depth_cap => {
                    let j = cones.len();
                    index.insert(key, j);
                    cones.push(ConeData {
                        path: ch.path,
                        ex: ch.ex,
                        g: ch.g.clone(),
                        c: to_matrix(&ch.c),
                        c_dual: to_matrix(&ch.cd),
                        neighbors: vec![None; ex.size()],
                    });
                    next.push(j);
                    Some(j)
                }
                None => {
                    truncated = true;
                    None
                }
            };
            if let Some(j) = target {
                let perm = perm_between(&ch.g, &cones[j].g);
                cones[ch.parent].neighbors[ch.k] = Some(Neighbor { cone: j, perm });
            }
        }
        frontier = next;
        depth += 1;
    }
    Ok(GFanAtlas {
        ex: ex.clone(),
        frozen: frozen.to_vec(),
        depth_cap,
        truncated,
        cones,
    })
}

/// Rebuild an atlas from representative paths, as stored in fan JSON.
pub fn atlas_from_paths(
    ex: &ExchangeData,
    frozen: &[usize],
    depth_cap: usize,
    truncated: bool,
    paths: &[Vec<usize>],
) -> Result<GFanAtlas> {
    let mut cones = Vec::with_capacity(paths.len());
    for path in paths {
        let mut cone = initial_cone(ex);
        for &k in path {
            let ch = child_of(&cone, 0, k)?;
            cone = ConeData {
                path: ch.path,
                ex: ch.ex,
                g: ch.g,
                c: to_matrix(&ch.c),
                c_dual: to_matrix(&ch.cd),
                neighbors: vec![None; ex.size()],
            };
        }
        cones.push(cone);
    }
    let index: HashMap<ConeKey, usize> = cones.iter().enumerate().map(|(i, c)| (c.key(), i)).collect();
    if index.len() != cones.len() {
        return Err(Error::InvalidInput("duplicate cones in fan".into()));
    }
    let dirs = mutable_dirs(ex, frozen);
    for id in 0..cones.len() {
        for &k in &dirs {
            let ch = child_of(&cones[id], id, k)?;
            if let Some(&j) = index.get(&cone_key(&ch.g)) {
                let perm = perm_between(&ch.g, &cones[j].g);
                cones[id].neighbors[k] = Some(Neighbor { cone: j, perm });
            }
        }
    }
    Ok(GFanAtlas {
        ex: ex.clone(),
        frozen: frozen.to_vec(),
        depth_cap,
        truncated,
        cones,
    })
}

impl GFanAtlas {
    pub fn dim(&self) -> usize {
        self.ex.size()
    }

    pub fn is_finite(&self) -> bool {
        !self.truncated
    }

    pub fn require_finite(&self) -> Result<()> {
        if self.truncated {
            Err(Error::Truncated(self.depth_cap))
        } else {
            Ok(())
        }
    }

    pub fn mutable_dirs(&self) -> Vec<usize> {
        mutable_dirs(&self.ex, &self.frozen)
    }

    /// Distinct rays in order of first appearance.
    pub fn rays(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = Vec::new();
        for c in &self.cones {
            for g in c.gens() {
                if !out.contains(&g) {
                    out.push(g);
                }
            }
        }
        out
    }

    pub fn cone_keys(&self) -> Vec<ConeKey> {
        let mut keys: Vec<ConeKey> = self.cones.iter().map(ConeData::key).collect();
        keys.sort();
        keys
    }

    pub fn find_cone(&self, key: &ConeKey) -> Option<usize> {
        self.cones.iter().position(|c| &c.key() == key)
    }

    /// Walls as `(cone, direction, neighbor)` with each wall listed from both sides.
    pub fn walls(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (id, c) in self.cones.iter().enumerate() {
            for (k, nb) in c.neighbors.iter().enumerate() {
                if let Some(nb) = nb {
                    out.push((id, k, nb.cone));
                }
            }
        }
        out
    }

    pub fn to_fan_json(&self) -> FanJson {
        let rays = self.rays();
        let mut dual_rays: Vec<Vec<i64>> = Vec::new();
        let mut dual_cones = Vec::new();
        for c in &self.cones {
            let mut idx = Vec::new();
            for v in c.c.to_cols() {
                let i = match dual_rays.iter().position(|d| d == &v) {
                    Some(i) => i,
                    None => {
                        dual_rays.push(v);
                        dual_rays.len() - 1
                    }
                };
                idx.push(i);
            }
            dual_cones.push(idx);
        }
        FanJson {
            maximal_cones: self
                .cones
                .iter()
                .map(|c| c.gens().iter().map(|g| rays.iter().position(|r| r == g).unwrap()).collect())
                .collect(),
            rays,
            dual_rays,
            dual_cones,
            paths: self
                .cones
                .iter()
                .enumerate()
                .map(|(i, c)| (i.to_string(), c.path.iter().map(|k| k + 1).collect()))
                .collect(),
            seed: SeedJson::from_exchange(&self.ex),
            frozen: self.frozen.iter().map(|k| k + 1).collect(),
            truncated: self.truncated,
            depth_cap: self.depth_cap,
        }
    }

    pub fn from_fan_json(f: &FanJson) -> Result<Self> {
        let ex = f.seed.exchange_data()?;
        let mut paths = Vec::with_capacity(f.paths.len());
        for i in 0..f.maximal_cones.len() {
            let p = f
                .paths
                .get(&i.to_string())
                .ok_or_else(|| Error::Parse(format!("fan JSON has no path for cone {i}")))?;
            paths.push(parse_path(&p.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))?);
        }
        let frozen: Vec<usize> = f
            .frozen
            .iter()
            .map(|&k| k.checked_sub(1).ok_or_else(|| Error::Parse("frozen directions are 1-based".into())))
            .collect::<Result<_>>()?;
        let atlas = atlas_from_paths(&ex, &frozen, f.depth_cap, f.truncated, &paths)?;
        let rays = atlas.rays();
        for (i, cone) in atlas.cones.iter().enumerate() {
            let stored: Vec<&Vec<i64>> = f.maximal_cones[i]
                .iter()
                .map(|&r| f.rays.get(r).ok_or_else(|| Error::Parse(format!("ray index {r} out of range"))))
                .collect::<Result<_>>()?;
            let gens = cone.gens();
            if stored.len() != gens.len() || gens.iter().zip(&stored).any(|(a, b)| a != *b) {
                return Err(Error::Parse(format!("cone {i} does not match its path")));
            }
        }
        if rays.len() != f.rays.len() {
            return Err(Error::Parse("ray list does not match the cones".into()));
        }
        Ok(atlas)
    }
}

/// Seed file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedJson {
    pub n: usize,
    pub m: usize,
    pub d: Vec<i64>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    pub coeff_rank: usize,
    pub p: Vec<Vec<i32>>,
}

impl SeedJson {
    pub fn from_exchange(ex: &ExchangeData) -> Self {
        SeedJson {
            n: ex.n(),
            m: ex.m(),
            d: ex.d().to_vec(),
            b: ex.b().to_rows(),
            coeff_rank: 0,
            p: vec![Vec::new(); ex.size()],
        }
    }

    pub fn exchange_data(&self) -> Result<ExchangeData> {
        let size = self.n + self.m;
        if self.b.len() != size || self.b.iter().any(|r| r.len() != size) {
            return Err(Error::Parse(format!("B must be {size}x{size}")));
        }
        ExchangeData::new(self.n, self.m, Matrix::from_rows(&self.b), self.d.clone())
    }

    pub fn coefficients(&self) -> Result<Vec<TropMonomial>> {
        let size = self.n + self.m;
        if self.p.len() != size {
            return Err(Error::Parse(format!("p must have {size} rows, got {}", self.p.len())));
        }
        if let Some(row) = self.p.iter().find(|r| r.len() != self.coeff_rank) {
            return Err(Error::Parse(format!(
                "p row {row:?} has length {}, expected coeff_rank {}",
                row.len(),
                self.coeff_rank
            )));
        }
        Ok(self.p.iter().map(|r| TropMonomial(r.clone())).collect())
    }
}

/// Fan JSON; `seed`, `frozen`, `truncated`, `depth_cap` and `dual_cones`
/// let an atlas be rebuilt from the file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub rays: Vec<Vec<i64>>,
    pub maximal_cones: Vec<Vec<usize>>,
    pub dual_rays: Vec<Vec<i64>>,
    pub dual_cones: Vec<Vec<usize>>,
    pub paths: std::collections::BTreeMap<String, Vec<usize>>,
    pub seed: SeedJson,
    pub frozen: Vec<usize>,
    pub truncated: bool,
    pub depth_cap: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FanReport {
    pub pass: bool,
    pub cones: usize,
    pub pairs_checked: usize,
    pub failures: Vec<String>,
}

/// Integer inequalities `H x >= 0` cutting out a simplicial cone.
fn facet_rows(g: &Matrix) -> Option<Vec<Vec<i64>>> {
    let inv = g.inverse_rational()?;
    Some(
        inv.iter()
            .map(|row| {
                let l = row
                    .iter()
                    .fold(num_bigint::BigInt::one(), |l, q| num_integer::Integer::lcm(&l, q.denom()));
                let ints: Vec<i64> = row
                    .iter()
                    .map(|q| {
                        let z = q * BigRational::from_integer(l.clone());
                        num_traits::ToPrimitive::to_i64(&z.to_integer()).expect("small entries")
                    })
                    .collect();
                primitive(&ints)
            })
            .collect(),
    )
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Extreme rays of the pointed cone `{x : H x >= 0}`.
pub fn extreme_rays(h: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    for s in subsets(h.len(), dim - 1) {
        let rows: Vec<Vec<i64>> = s.iter().map(|&i| h[i].clone()).collect();
        let v = kernel_vector(&rows, dim);
        if v.iter().all(|&a| a == 0) {
            continue;
        }
        for cand in [v.clone(), v.iter().map(|a| -a).collect::<Vec<_>>()] {
            if h.iter().all(|r| crate::linalg::dot(r, &cand) >= 0) && !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    out
}

/// Fan axioms: unimodular strongly convex cones, dual pairing, sign coherence,
/// and for rank at most 3 that every pairwise intersection is a common face.
pub fn check_fan(atlas: &GFanAtlas) -> Result<FanReport> {
    atlas.require_finite()?;
    let dim = atlas.dim();
    let mut failures = Vec::new();
    for (i, c) in atlas.cones.iter().enumerate() {
        let det = c.g.det();
        if det.abs() != 1 {
            failures.push(format!("cone {i}: det G = {det}"));
        }
        if c.g.transpose().mul(&c.c_dual) != Matrix::identity(dim) {
            failures.push(format!("cone {i}: G^T C^(-B^T) = {}", c.g.transpose().mul(&c.c_dual)));
        }
        if !check_sign_coherence(&c.c) || !check_sign_coherence(&c.c_dual) {
            failures.push(format!("cone {i}: c-vectors not sign-coherent"));
        }
    }
    let mut pairs = 0;
    if dim <= 3 {
        let facets: Vec<Option<Vec<Vec<i64>>>> = atlas.cones.iter().map(|c| facet_rows(&c.g)).collect();
        let pair_list: Vec<(usize, usize)> = (0..atlas.cones.len())
            .flat_map(|i| (i + 1..atlas.cones.len()).map(move |j| (i, j)))
            .collect();
        pairs = pair_list.len();
        let bad: Vec<String> = pair_list
            .par_iter()
            .filter_map(|&(i, j)| {
                let (Some(hi), Some(hj)) = (&facets[i], &facets[j]) else {
                    return Some(format!("cones {i},{j}: singular generator matrix"));
                };
                let h: Vec<Vec<i64>> = hi.iter().chain(hj.iter()).cloned().collect();
                let gi = atlas.cones[i].gens();
                let gj = atlas.cones[j].gens();
                extreme_rays(&h, dim)
                    .into_iter()
                    .find(|r| !(gi.contains(r) && gj.contains(r)))
                    .map(|r| format!("cones {i},{j}: intersection has extreme ray {r:?} that is not a common generator"))
            })
            .collect();
        failures.extend(bad);
    }
    Ok(FanReport {
        pass: failures.is_empty(),
        cones: atlas.cones.len(),
        pairs_checked: pairs,
        failures,
    })
}

/// Star of a face `tau` projected to `N / <tau>`.
#[derive(Clone, Debug, Serialize)]
pub struct StarData {
    /// Cone whose labels index `I(tau)`.
    pub reference: usize,
    /// Labels of the reference cone whose g-vector is not in `tau`.
    pub index_set: Vec<usize>,
    pub cones: Vec<usize>,
    pub rays: Vec<Vec<i64>>,
    pub maximal_cones: Vec<Vec<usize>>,
    #[serde(skip)]
    pub restricted: Option<ExchangeData>,
    pub restricted_b: Vec<Vec<i64>>,
}

pub fn star(atlas: &GFanAtlas, tau: &[Vec<i64>]) -> Result<StarData> {
    let containing: Vec<usize> = atlas
        .cones
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            let g = c.gens();
            tau.iter().all(|t| g.contains(t))
        })
        .map(|(i, _)| i)
        .collect();
    let &reference = containing
        .first()
        .ok_or_else(|| Error::InvalidInput(format!("no maximal cone contains {tau:?}")))?;
    let c0 = &atlas.cones[reference];
    let gens0 = c0.gens();
    let index_set: Vec<usize> = (0..atlas.dim()).filter(|&i| !tau.contains(&gens0[i])).collect();
    let duals = c0.c_dual.to_cols();
    let project = |x: &Vec<i64>| -> Vec<i64> { index_set.iter().map(|&i| crate::linalg::dot(&duals[i], x)).collect() };
    let mut rays: Vec<Vec<i64>> = Vec::new();
    let mut maximal_cones = Vec::new();
    for &id in &containing {
        let mut idx = Vec::new();
        for g in atlas.cones[id].gens() {
            if tau.contains(&g) {
                continue;
            }
            let v = primitive(&project(&g));
            let i = match rays.iter().position(|r| r == &v) {
                Some(i) => i,
                None => {
                    rays.push(v);
                    rays.len() - 1
                }
            };
            idx.push(i);
        }
        maximal_cones.push(idx);
    }
    let restricted = c0.ex.restrict(&index_set)?;
    Ok(StarData {
        reference,
        restricted_b: restricted.b().to_rows(),
        restricted: Some(restricted),
        index_set,
        cones: containing,
        rays,
        maximal_cones,
    })
}

/// The polytope `P = union conv(0, gens)` and its polar data.
#[derive(Clone, Debug, Serialize)]
pub struct PolytopeReport {
    pub convex: bool,
    pub vertices: Vec<Vec<i64>>,
    pub interior_points: Vec<Vec<i64>>,
    pub lattice_points: usize,
    /// Distinct facet normals `h` with `P = {h . x <= 1}`, as strings `a/b`.
    pub polar_vertices: Vec<Vec<String>>,
    pub reflexive: bool,
    /// Each facet meets the rays exactly in the generators of its cone.
    pub normal_fan_matches: bool,
}

fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[rank][c];
                for k in 0..cols {
                    let x = &a[rank][k] * &f;
                    a[r][k] -= x;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn polytope_p(atlas: &GFanAtlas) -> Result<PolytopeReport> {
    atlas.require_finite()?;
    let dim = atlas.dim();
    let rays = atlas.rays();
    let eval = |h: &Vec<BigRational>, x: &[i64]| -> BigRational {
        h.iter()
            .zip(x)
            .fold(BigRational::zero(), |s, (a, &b)| s + a * BigRational::from_integer(b.into()))
    };
    let mut normals: Vec<Vec<BigRational>> = Vec::new();
    let mut normal_of_cone = Vec::new();
    for c in &atlas.cones {
        let inv = c
            .g
            .inverse_rational()
            .ok_or_else(|| Error::InvalidInput("singular cone".into()))?;
        let h: Vec<BigRational> = (0..dim)
            .map(|j| inv.iter().fold(BigRational::zero(), |s, row| s + &row[j]))
            .collect();
        normal_of_cone.push(h.clone());
        if !normals.contains(&h) {
            normals.push(h);
        }
    }
    let one = BigRational::one();
    let complete = atlas.frozen.is_empty() && atlas.cones.iter().all(|c| c.neighbors.iter().take(atlas.ex.n()).all(Option::is_some));
    let convex = complete && normals.iter().all(|h| rays.iter().all(|r| eval(h, r) <= one));
    let vertices: Vec<Vec<i64>> = rays
        .iter()
        .filter(|r| {
            let tight: Vec<Vec<BigRational>> = normals.iter().filter(|h| eval(h, r) == one).cloned().collect();
            rational_rank(&tight) == dim
        })
        .cloned()
        .collect();
    let mut interior = Vec::new();
    let mut lattice = 0;
    if convex {
        let bound = rays.iter().flatten().map(|a| a.abs()).max().unwrap_or(0);
        let mut pt = vec![-bound; dim];
        loop {
            let vals: Vec<BigRational> = normals.iter().map(|h| eval(h, &pt)).collect();
            if vals.iter().all(|v| v <= &one) {
                lattice += 1;
                if vals.iter().all(|v| v < &one) {
                    interior.push(pt.clone());
                }
            }
            let mut i = 0;
            while i < dim && pt[i] == bound {
                pt[i] = -bound;
                i += 1;
            }
            if i == dim {
                break;
            }
            pt[i] += 1;
        }
    }
    let normal_fan_matches = atlas.cones.iter().zip(&normal_of_cone).all(|(c, h)| {
        let mut on: Vec<Vec<i64>> = rays.iter().filter(|r| eval(h, r) == one).cloned().collect();
        let mut gens = c.gens();
        on.sort();
        gens.sort();
        on == gens
    });
    let reflexive = convex && normals.iter().all(|h| h.iter().all(|q| q.is_integer())) && interior == vec![vec![0; dim]];
    let fmt = |q: &BigRational| if q.is_integer() { q.to_integer().to_string() } else { q.to_string() };
    Ok(PolytopeReport {
        convex,
        vertices,
        interior_points: interior,
        lattice_points: lattice,
        polar_vertices: normals.iter().map(|h| h.iter().map(fmt).collect()).collect(),
        reflexive,
        normal_fan_matches,
    })
}

pub fn describe_cone(atlas: &GFanAtlas, id: usize) -> String {
    let c = &atlas.cones[id];
    let gens: Vec<String> = c
        .gens()
        .iter()
        .map(|g| format!("({})", g.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("cone {id} [path {}]: {}", format_path(&c.path), gens.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> ExchangeData {
        ExchangeData::skew_symmetric(&[vec![0, 1], vec![-1, 0]]).unwrap()
    }

    fn a3() -> ExchangeData {
        ExchangeData::skew_symmetric(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap()
    }

    #[test]
    fn a2_rays() {
        let at = enumerate_gfan(&a2(), &[], DEFAULT_DEPTH).unwrap();
        assert_eq!(at.cones.len(), 5);
        let mut rays = at.rays();
        rays.sort();
        let mut expect = vec![vec![1, 0], vec![0, 1], vec![-1, 1], vec![-1, 0], vec![0, -1]];
        expect.sort();
        assert_eq!(rays, expect);
        assert!(at.is_finite());
        assert!(check_fan(&at).unwrap().pass);
    }

    #[test]
    fn a1_and_a3_counts() {
        let a1 = ExchangeData::skew_symmetric(&[vec![0]]).unwrap();
        assert_eq!(enumerate_gfan(&a1, &[], 8).unwrap().cones.len(), 2);
        let at = enumerate_gfan(&a3(), &[], DEFAULT_DEPTH).unwrap();
        assert_eq!(at.cones.len(), 14);
        assert!(check_fan(&at).unwrap().pass);
        let frozen = enumerate_gfan(&a3(), &[0], DEFAULT_DEPTH).unwrap();
        assert_eq!(frozen.cones.len(), 5);
        let all = at.cone_keys();
        assert!(frozen.cone_keys().iter().all(|k| all.contains(k)));
    }

    #[test]
    fn order_independent() {
        let a = enumerate_with_order(&a3(), &[], 64, &[0, 1, 2]).unwrap();
        let b = enumerate_with_order(&a3(), &[], 64, &[2, 0, 1]).unwrap();
        assert_eq!(a.cone_keys(), b.cone_keys());
    }

    #[test]
    fn neighbors_are_symmetric() {
        let at = enumerate_gfan(&a3(), &[], 64).unwrap();
        for (i, c) in at.cones.iter().enumerate() {
            for (k, nb) in c.neighbors.iter().enumerate() {
                let nb = nb.as_ref().unwrap();
                let back = at.cones[nb.cone].neighbors[nb.perm[k]].as_ref().unwrap();
                assert_eq!(back.cone, i);
            }
        }
    }

    #[test]
    fn markov_is_truncated() {
        let m = ExchangeData::skew_symmetric(&[vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]).unwrap();
        let at = enumerate_gfan(&m, &[], 3).unwrap();
        assert!(at.truncated);
        assert!(matches!(check_fan(&at), Err(Error::Truncated(3))));
    }

    #[test]
    fn corrupted_atlas_fails() {
        let mut at = enumerate_gfan(&a2(), &[], 64).unwrap();
        assert!(check_fan(&at).unwrap().pass);
        let dup = at.cones[1].clone();
        at.cones.push(dup);
        assert!(check_fan(&at).unwrap().pass);
        at.cones.pop();
        let g = &mut at.cones[2].g;
        g[(0, 0)] += 1;
        assert!(!check_fan(&at).unwrap().pass);
    }

    #[test]
    fn star_of_a2_ray() {
        let at = enumerate_gfan(&a2(), &[], 64).unwrap();
        let s = star(&at, &[vec![0, 1]]).unwrap();
        assert_eq!(s.cones.len(), 2);
        let mut rays = s.rays.clone();
        rays.sort();
        assert_eq!(rays, vec![vec![-1], vec![1]]);
        assert_eq!(s.restricted.unwrap().size(), 1);
        let whole = star(&at, &[]).unwrap();
        assert_eq!(whole.cones.len(), 5);
    }

    #[test]
    fn polytope_a2_and_a1() {
        let at = enumerate_gfan(&a2(), &[], 64).unwrap();
        let p = polytope_p(&at).unwrap();
        assert!(p.convex && p.reflexive && p.normal_fan_matches);
        assert_eq!(p.vertices.len(), 5);
        assert_eq!(p.interior_points, vec![vec![0, 0]]);
        assert_eq!(p.lattice_points, 6);
        assert_eq!(p.polar_vertices.len(), 5);
        let a1 = ExchangeData::skew_symmetric(&[vec![0]]).unwrap();
        let p = polytope_p(&enumerate_gfan(&a1, &[], 8).unwrap()).unwrap();
        assert_eq!(p.vertices, vec![vec![1], vec![-1]]);
        assert_eq!(p.lattice_points, 3);
    }

    #[test]
    fn fan_json_round_trip() {
        let at = enumerate_gfan(&a3(), &[], 64).unwrap();
        let j = at.to_fan_json();
        let text = serde_json::to_string(&j).unwrap();
        let back = GFanAtlas::from_fan_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.cone_keys(), at.cone_keys());
        assert_eq!(back.to_fan_json(), j);
    }
}
