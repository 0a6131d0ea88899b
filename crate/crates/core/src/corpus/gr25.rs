//! Gr(2,5): type A2 with geometric coefficients in the frozen Plücker
//! coordinates, flow polynomials, the potential and the principal extensions.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::expr::{parse_relation, Env, Expr};
use super::{parse_fixture, seed_fixture, CorpusReport};
use crate::error::{Error, Result};
use crate::exact_algebra::{degree_of, limit_t_zero, Grading, Monomial, Poly, PosRatFunc, VarSet, Vars};
use crate::linalg::Matrix;
use crate::report::CheckRecord;
use crate::seeds::{build_extended_seed, p_star_pullback, ClusterSeed, ExchangeData};

#[derive(Deserialize)]
struct Extension {
    of: String,
    coordinates: String,
    flow: String,
}

#[derive(Deserialize)]
struct Gr25Fixture {
    seed: String,
    cluster_names: Vec<String>,
    coefficient_names: Vec<String>,
    x_names: Vec<String>,
    quiver_arrows: Vec<[String; 2]>,
    plucker_relations: Vec<String>,
    p_star: BTreeMap<String, String>,
    frozen_lift: BTreeMap<String, String>,
    flow_vars: Vec<String>,
    flows: BTreeMap<String, String>,
    thetas: BTreeMap<String, String>,
    potential_summands: BTreeMap<String, String>,
    summand_flows: BTreeMap<String, String>,
    coordinate_names: Vec<String>,
    dictionary: BTreeMap<String, String>,
    extensions: Vec<Extension>,
}

fn lookup<'a>(map: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str> {
    map.get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Parse(format!("fixture entry {key} missing")))
}

fn monomial_of(f: &PosRatFunc, what: &str) -> Result<Monomial> {
    f.as_monomial()
        .cloned()
        .ok_or_else(|| Error::NotMonomial(format!("{what} = {f}")))
}

fn product_names(e: &Expr) -> Option<Vec<String>> {
    match e {
        Expr::Var(s) => Some(vec![s.clone()]),
        Expr::Mul(a, b) => {
            let mut v = product_names(a)?;
            v.extend(product_names(b)?);
            Some(v)
        }
        _ => None,
    }
}

fn names_in(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Num(_) => {}
        Expr::Var(s) => out.push(s.clone()),
        Expr::Add(ts) | Expr::Oplus(ts) => ts.iter().for_each(|t| names_in(t, out)),
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            names_in(a, out);
            names_in(b, out);
        }
        Expr::Pow(a, _) => names_in(a, out),
    }
}

/// Canonical homogenization of a coefficient-free Laurent polynomial in the
/// unfrozen coordinates `u` with coefficient variables `t`: each term `x^a`
/// gets `t^(a_u - d)` where `d` is the componentwise minimum of the `a_u`.
/// Returns `None` when no term attains `d`.
pub fn canonical_homogenization(f: &PosRatFunc, u: &[usize], t: &[usize]) -> Option<PosRatFunc> {
    let (num, den) = f.expand();
    den.is_monomial()?;
    let terms: Vec<(Vec<i32>, _)> = num.terms().map(|(m, c)| (m.exps().to_vec(), c.clone())).collect();
    let d: Vec<i32> = u
        .iter()
        .map(|&i| terms.iter().map(|(a, _)| a[i]).min().unwrap_or(0))
        .collect();
    if !terms.iter().any(|(a, _)| u.iter().zip(&d).all(|(&i, &di)| a[i] == di)) {
        return None;
    }
    let hom = Poly::from_terms(
        num.vars(),
        terms.into_iter().map(|(mut a, c)| {
            for (k, (&i, &di)) in u.iter().zip(&d).enumerate() {
                a[t[k]] += a[i] - di;
            }
            (a, c)
        }),
    );
    PosRatFunc::from_fraction(&hom, &den).ok()
}

struct Ctx {
    fx: Gr25Fixture,
    pvars: Vars,
    penv: Env,
    mvars: Vars,
    menv: Env,
    flow_images: Vec<Monomial>,
    ext: ClusterSeed,
    records: Vec<CheckRecord>,
    lines: Vec<String>,
}

impl Ctx {
    fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    fn flow(&self, f: &PosRatFunc) -> PosRatFunc {
        f.substitute_monomials(&self.mvars, &self.flow_images)
    }
}

fn quiver_matrix(fx: &Gr25Fixture, pvars: &Vars) -> Result<Matrix> {
    let size = pvars.len();
    let mut b = Matrix::zeros(size, size);
    for [from, to] in &fx.quiver_arrows {
        let i = pvars.index_of(from).ok_or_else(|| Error::Parse(format!("unknown vertex {from}")))?;
        let j = pvars.index_of(to).ok_or_else(|| Error::Parse(format!("unknown vertex {to}")))?;
        b[(i, j)] += 1;
        b[(j, i)] -= 1;
    }
    Ok(b)
}

/// Solve the Plücker relations for the non-initial coordinates, then check
/// the remaining ones as identities.
fn plucker_step(cx: &mut Ctx) -> Result<()> {
    let rels: Vec<(String, Expr, Expr)> = cx
        .fx
        .plucker_relations
        .iter()
        .map(|s| parse_relation(s).map(|(l, r)| (s.clone(), l, r)))
        .collect::<Result<_>>()?;
    let mut used = vec![false; rels.len()];
    loop {
        let mut progress = false;
        for (k, (_, l, r)) in rels.iter().enumerate() {
            if used[k] {
                continue;
            }
            let factors = product_names(l).ok_or_else(|| Error::Parse("relation lhs must be a product".into()))?;
            let unknown: Vec<&String> = factors.iter().filter(|n| !cx.penv.values.contains_key(*n)).collect();
            let mut rhs_names = Vec::new();
            names_in(r, &mut rhs_names);
            if unknown.len() != 1 || !rhs_names.iter().all(|n| cx.penv.values.contains_key(n)) {
                continue;
            }
            let name = unknown[0].clone();
            let known = factors
                .iter()
                .filter(|n| **n != name)
                .fold(PosRatFunc::one(&cx.pvars), |acc, n| acc.mul(&cx.penv.values[n]));
            let value = cx.penv.eval(r)?.div(&known).simplify();
            cx.penv.bind(&name, value);
            used[k] = true;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    for (k, (s, l, r)) in rels.iter().enumerate() {
        if used[k] {
            continue;
        }
        let (a, b) = (cx.penv.eval(l)?, cx.penv.eval(r)?);
        cx.push(CheckRecord::new("plucker relation", s.clone(), a.rat_equal(&b), || format!("{a} vs {b}")));
    }
    Ok(())
}

/// Cluster variables met along the pentagon from the extended seed.
fn cluster_step(cx: &mut Ctx) -> Result<()> {
    let mut s = cx.ext.clone();
    let mut found = Vec::new();
    for k in [0usize, 1, 0, 1, 0] {
        s = s.mutate(k)?;
        found.push(s.x[k].clone());
    }
    let mut named = Vec::new();
    for f in &found {
        let laurent = f.as_laurent().is_some();
        let name = cx
            .penv
            .values
            .iter()
            .filter(|(n, _)| cx.fx.flows.contains_key(*n))
            .find(|(_, v)| v.rat_equal(f))
            .map(|(n, _)| n.clone());
        cx.push(CheckRecord::new("cluster variable", format!("{f}"), name.is_some() && laurent, || {
            format!("not a Plücker coordinate or not Laurent: {f}")
        }));
        named.push(name.unwrap_or_else(|| "?".into()));
    }
    let mut want: Vec<String> = cx.fx.flows.keys().filter(|n| !cx.pvars.names().contains(n)).cloned().collect();
    want.extend(cx.fx.cluster_names.iter().cloned());
    let mut got = named.clone();
    got.sort();
    got.dedup();
    want.sort();
    cx.push(CheckRecord::new("cluster variables", "pentagon", got == want, || format!("{got:?} vs {want:?}")));
    cx.lines.push(format!("cluster variables along 1,2,1,2,1: {}", named.join(", ")));
    for n in ["p24", "p25", "p35"] {
        if let Some(v) = cx.penv.values.get(n) {
            cx.lines.push(format!("  {n} = {}", v.to_fraction_string()));
        }
    }
    Ok(())
}

fn flow_step(cx: &mut Ctx) -> Result<()> {
    let mut images = Vec::new();
    for n in cx.pvars.names().to_vec() {
        let f = cx.menv.eval_str(lookup(&cx.fx.flows, &n)?)?;
        images.push(monomial_of(&f, &format!("flow({n})"))?);
    }
    cx.flow_images = images;
    cx.lines.push("flow polynomials".into());
    let names: Vec<String> = cx.fx.flows.keys().cloned().collect();
    for n in names {
        let want = cx.menv.eval_str(&cx.fx.flows[&n])?;
        let got = cx.flow(&cx.penv.values[&n]);
        let initial = cx.pvars.index_of(&n).is_some();
        let shape_ok = initial == want.as_monomial().is_some();
        cx.push(CheckRecord::new("flow", n.clone(), got.rat_equal(&want) && shape_ok, || {
            format!("engine {got}, expected {want}")
        }));
        cx.lines.push(format!("  flow({n}) = {got}"));
    }
    Ok(())
}

/// `p^*` images of the X-variables, from the opposite seed for the
/// unfrozen ones and the stated lift for the frozen ones.
fn p_star_step(cx: &mut Ctx, opposite: &ClusterSeed) -> Result<Vec<Monomial>> {
    let n = cx.fx.cluster_names.len();
    let mut images = Vec::new();
    for (i, xn) in cx.fx.x_names.clone().iter().enumerate() {
        let engine = p_star_pullback(opposite, i);
        let f = if i < n {
            let want = cx.penv.eval_str(lookup(&cx.fx.p_star, xn)?)?;
            cx.push(CheckRecord::new("p-star", xn.clone(), engine.rat_equal(&want), || {
                format!("engine {engine}, expected {want}")
            }));
            want
        } else {
            let lift = cx.penv.eval_str(lookup(&cx.fx.frozen_lift, xn)?)?;
            let rest = lift.div(&engine).simplify();
            let frozen_only = rest
                .as_monomial()
                .is_some_and(|m| m.exps()[..n].iter().all(|&a| a == 0));
            cx.push(CheckRecord::new("frozen lift", xn.clone(), frozen_only, || {
                format!("lift {lift} differs from {engine} outside the frozen coordinates")
            }));
            lift
        };
        images.push(monomial_of(&f, &format!("p*({xn})"))?);
    }
    Ok(images)
}

fn dictionary_step(cx: &mut Ctx, pstar: &[Monomial]) -> Result<Vec<Monomial>> {
    let mut dict = Vec::new();
    for c in cx.fx.coordinate_names.clone() {
        let f = cx.menv.eval_str(lookup(&cx.fx.dictionary, &c)?)?;
        dict.push(monomial_of(&f, &c)?);
    }
    cx.lines.push("X-coordinates under the flow".into());
    for (i, xn) in cx.fx.x_names.clone().iter().enumerate() {
        let got = cx.flow(&PosRatFunc::monomial(&cx.pvars, pstar[i].clone()));
        let want = PosRatFunc::monomial(&cx.mvars, dict[i].clone());
        cx.push(CheckRecord::new("dictionary", xn.clone(), got.rat_equal(&want), || {
            format!("flow(p*({xn})) = {got}, expected {want}")
        }));
        cx.lines.push(format!("  flow(p*({xn})) = {got}"));
    }
    let prod = dict[..cx.fx.x_names.len()].iter().fold(Monomial::one(cx.mvars.len()), |a, m| a.mul(m));
    cx.push(CheckRecord::new("coordinate product", "all", prod.is_one(), || format!("{prod:?}")));
    Ok(dict)
}

fn theta_step(cx: &mut Ctx, pstar: &[Monomial]) -> Result<()> {
    let xvars = VarSet::new(cx.fx.x_names.clone());
    let xenv = Env::from_vars(&xvars);
    cx.lines.push("potential".into());
    for (key, th) in cx.fx.thetas.clone() {
        let theta = xenv.eval_str(&th)?;
        let pulled = theta.substitute_monomials(&cx.pvars, pstar);
        let w = cx.penv.eval_str(lookup(&cx.fx.potential_summands, &key)?)?;
        cx.push(CheckRecord::new("theta", key.clone(), pulled.rat_equal(&w), || {
            format!("p*(theta_{key}) = {pulled}, expected {w}")
        }));
        let fl = cx.flow(&w);
        let want = cx.menv.eval_str(lookup(&cx.fx.summand_flows, &key)?)?;
        cx.push(CheckRecord::new("potential summand flow", key.clone(), fl.rat_equal(&want), || {
            format!("{fl} vs {want}")
        }));
        cx.lines.push(format!("  theta_{key} = {theta} -> {}, flow {fl}", w.to_fraction_string()));
    }
    Ok(())
}

fn extension_step(cx: &mut Ctx, dict: &[Monomial]) -> Result<()> {
    let cvars = VarSet::new(cx.fx.coordinate_names.clone());
    let cenv = Env::from_vars(&cvars);
    let nx = cx.fx.x_names.len();
    let n = cx.fx.cluster_names.len();
    let unfrozen: Vec<usize> = (0..n).collect();
    let tvars: Vec<usize> = (nx..nx + n).collect();
    let unit = |rank: usize, i: usize, s: i64| {
        let mut v = vec![0; rank];
        v[i] = s;
        v
    };
    let cgrading = Grading::new(
        nx,
        (0..nx).map(|i| unit(nx, i, 1)).chain(unfrozen.iter().map(|&i| unit(nx, i, -1))).collect(),
    )?;
    let nm = cx.fx.flow_vars.len() - n;
    let single = |m: &Monomial| m.exps().iter().position(|&a| a == 1);
    // deg t = -deg of the unfrozen coordinate it multiplies, read through the dictionary
    let mut mdeg: Vec<Vec<i64>> = (0..nm).map(|i| unit(nm, i, 1)).collect();
    for tv in nm..cx.mvars.len() {
        let k = (0..n)
            .find(|&k| single(&dict[nx + k]) == Some(tv))
            .ok_or_else(|| Error::Parse(format!("{} missing from the dictionary", cx.mvars.name(tv))))?;
        let xi = single(&dict[unfrozen[k]])
            .ok_or_else(|| Error::Parse("unfrozen coordinates must map to variables".into()))?;
        mdeg.push(unit(nm, xi, -1));
    }
    let mgrading = Grading::new(nm, mdeg)?;
    let mt: Vec<usize> = (nm..cx.mvars.len()).collect();
    let t_to_one: Vec<Monomial> = (0..cvars.len())
        .map(|i| {
            if tvars.contains(&i) {
                Monomial::one(cvars.len())
            } else {
                Monomial::new(unit(cvars.len(), i, 1).into_iter().map(|a| a as i32).collect())
            }
        })
        .collect();
    let mt_to_one: Vec<Monomial> = (0..cx.mvars.len())
        .map(|i| {
            if mt.contains(&i) {
                Monomial::one(cx.mvars.len())
            } else {
                Monomial::new(unit(cx.mvars.len(), i, 1).into_iter().map(|a| a as i32).collect())
            }
        })
        .collect();
    cx.lines.push("principal extensions".into());
    for e in &cx.fx.extensions {
        let ft = cenv.eval_str(&e.coordinates)?;
        let gt = cx.menv.eval_str(&e.flow)?;
        let id = e.of.clone();
        let mapped = ft.substitute_monomials(&cx.mvars, dict);
        cx.records.push(CheckRecord::new("extension coordinates", id.clone(), mapped.rat_equal(&gt), || {
            format!("{mapped} vs {gt}")
        }));
        let g1 = gt.substitute_monomials(&cx.mvars, &mt_to_one);
        let flow = cx.menv.eval_str(lookup(&cx.fx.flows, &e.of)?)?;
        cx.records.push(CheckRecord::new("extension at t=1", id.clone(), g1.rat_equal(&flow), || {
            format!("{g1} vs {flow}")
        }));
        let f1 = ft.substitute_monomials(&cvars, &t_to_one);
        let canon = canonical_homogenization(&f1, &unfrozen, &tvars);
        let canon_ok = canon.as_ref().is_some_and(|c| c.rat_equal(&ft));
        cx.records.push(CheckRecord::new("extension homogenization", id.clone(), canon_ok, || {
            format!("canonical {canon:?} vs stated {ft}")
        }));
        let dc = degree_of(&ft, &cgrading)?;
        let dm = degree_of(&gt, &mgrading)?;
        let image: Vec<i64> = (0..nm)
            .map(|j| dc.iter().enumerate().map(|(i, &a)| a * dict[i].exps()[j] as i64).sum())
            .collect();
        cx.records.push(CheckRecord::new("extension degree", id.clone(), image == dm, || {
            format!("coordinate degree {dc:?} maps to {image:?}, flow degree {dm:?}")
        }));
        let lim = limit_t_zero(&ft, &tvars)?;
        let lim_ok = lim
            .is_monomial()
            .is_some_and(|(m, _)| m.exps().iter().map(|&a| a as i64).collect::<Vec<_>>()[..nx] == dc[..]);
        cx.records.push(CheckRecord::new("extension limit", id.clone(), lim_ok, || {
            format!("limit {lim}, degree {dc:?}")
        }));
        cx.lines.push(format!("  {id}: {ft}, degree {dc:?}, limit {lim}"));
    }
    Ok(())
}

pub fn run_gr25() -> Result<CorpusReport> {
    let fx: Gr25Fixture = parse_fixture("gr25", include_str!("../../fixtures/gr25.json"))?;
    let seed = seed_fixture(&fx.seed)?;
    let ex = seed.exchange_data()?;
    let p = seed.coefficients()?;
    let pvars = VarSet::new(fx.cluster_names.iter().chain(&fx.coefficient_names).cloned());
    let mvars = VarSet::new(fx.flow_vars.clone());
    let cs = ClusterSeed::initial_named(&ex, p.clone(), &pvars)?;
    let ext = build_extended_seed(&cs)?;
    let opp_ex = ExchangeData::new(ex.n(), 0, ex.b().neg(), ex.d().to_vec())?;
    let opposite = build_extended_seed(&ClusterSeed::initial_named(&opp_ex, p.iter().map(|t| t.inv()).collect(), &pvars)?)?;
    let mut cx = Ctx {
        penv: Env::from_vars(&pvars),
        menv: Env::from_vars(&mvars),
        pvars: pvars.clone(),
        mvars,
        flow_images: Vec::new(),
        ext,
        fx,
        records: Vec::new(),
        lines: vec!["Gr(2,5): type A2 with geometric coefficients".into()],
    };
    let quiver = quiver_matrix(&cx.fx, &pvars)?;
    let bext = cx.ext.ex.b().clone();
    cx.push(CheckRecord::new("quiver", "B_ext", quiver == bext, || format!("engine {bext}, quiver {quiver}")));
    cx.lines.push(format!("extended cluster ({})", pvars.names().join(", ")));
    cx.lines.push(format!("B_ext = {bext}"));
    plucker_step(&mut cx)?;
    cluster_step(&mut cx)?;
    flow_step(&mut cx)?;
    let pstar = p_star_step(&mut cx, &opposite)?;
    let dict = dictionary_step(&mut cx, &pstar)?;
    theta_step(&mut cx, &pstar)?;
    extension_step(&mut cx, &dict)?;
    Ok(CorpusReport {
        name: "gr25".into(),
        records: cx.records,
        table: cx.lines.join("\n") + "\n",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gr25_checks_pass() {
        let r = run_gr25().unwrap();
        assert!(r.pass(), "{:#?}", r.failures());
    }

    #[test]
    fn homogenization_requires_attained_minimum() {
        let vars = VarSet::new(["x", "y", "t"]);
        let env = Env::from_vars(&vars);
        let f = env.eval_str("y*(1 + x)").unwrap();
        let h = canonical_homogenization(&f, &[0], &[2]).unwrap();
        assert!(h.rat_equal(&env.eval_str("y*(1 + t*x)").unwrap()));
        let f = env.eval_str("x + y").unwrap();
        let h = canonical_homogenization(&f, &[0, 1], &[2, 2]);
        assert!(h.is_none());
    }
}
