//! The degree five del Pezzo surface: theta functions of the A2 pattern with
//! principal coefficients, their homogenized relations and the polytope `P`.

use serde::Deserialize;

use super::expr::{parse_relation, Env, Expr};
use super::{parse_fixture, seed_fixture, CorpusReport};
use crate::error::Result;
use crate::exact_algebra::{degree_of, Grading, Monomial, PosRatFunc, VarSet};
use crate::gfan::{enumerate_gfan, polytope_p, DEFAULT_DEPTH};
use crate::report::CheckRecord;
use crate::seeds::{format_path, ClusterSeed};

#[derive(Deserialize)]
struct Dp5Fixture {
    seed: String,
    rays: Vec<Vec<i64>>,
    mutation_path: Vec<usize>,
    relations: Vec<String>,
}

/// `theta_1..theta_5`: the initial cluster followed by one new variable per mutation.
fn thetas(s0: &ClusterSeed, path: &[usize]) -> Result<Vec<PosRatFunc>> {
    let mut out = s0.x.clone();
    let mut s = s0.clone();
    for &k in path {
        s = s.mutate(k)?;
        out.push(s.x[k].clone());
    }
    Ok(out)
}

fn bind_thetas(env: &mut Env, th: &[PosRatFunc]) {
    env.bind("th0", PosRatFunc::one(&env.vars));
    for (i, t) in th.iter().enumerate() {
        env.bind(&format!("th{}", i + 1), t.clone());
    }
}

fn is_homogeneous_quadric(l: &Expr, r: &Expr, n_theta: usize) -> Result<bool> {
    let mut names: Vec<String> = (0..=n_theta).map(|i| format!("th{i}")).collect();
    names.extend(["t1".to_string(), "t2".to_string()]);
    let vars = VarSet::new(names);
    let env = Env::from_vars(&vars);
    let degrees = (0..vars.len()).map(|i| vec![i64::from(i <= n_theta)]).collect();
    let g = Grading::new(1, degrees)?;
    Ok(degree_of(&env.eval(l)?, &g).ok() == Some(vec![2]) && degree_of(&env.eval(r)?, &g).ok() == Some(vec![2]))
}

pub fn run_dp5() -> Result<CorpusReport> {
    let fx: Dp5Fixture = parse_fixture("dp5", include_str!("../../fixtures/dp5.json"))?;
    let seed = seed_fixture(&fx.seed)?;
    let ex = seed.exchange_data()?;
    let path: Vec<usize> = fx.mutation_path.iter().map(|k| k - 1).collect();
    let mut records = Vec::new();
    let mut lines = vec![
        "del Pezzo surface of degree five".to_string(),
        format!("B = {}, principal coefficients, mutation sequence {}", ex.b(), format_path(&path)),
    ];

    let s0 = ClusterSeed::initial(&ex, seed.coefficients()?, "x", "t")?;
    let th = thetas(&s0, &path)?;
    let cf = ClusterSeed::coefficient_free(&ex, "x");
    let a = thetas(&cf, &path)?;

    // g-vectors: deg x_i = e_i, deg t_j = -col_j(B)
    let n = ex.n();
    let mut degs: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    degs.extend((0..n).map(|j| ex.b().col(j).iter().map(|x| -x).collect()));
    let grading = Grading::new(n, degs)?;
    for (i, (t, ray)) in th.iter().zip(&fx.rays).enumerate() {
        let g = degree_of(t, &grading)?;
        records.push(CheckRecord::new("g-vector", format!("theta{}", i + 1), &g == ray, || {
            format!("degree {g:?}, expected ray {ray:?}")
        }));
        lines.push(format!("theta{} = {}   g = {g:?}", i + 1, t.to_fraction_string()));
    }

    let mut env = Env::from_vars(s0.vars());
    bind_thetas(&mut env, &th);
    let mut env1 = Env::from_vars(cf.vars());
    bind_thetas(&mut env1, &a);
    env1.bind("t1", PosRatFunc::one(cf.vars()));
    env1.bind("t2", PosRatFunc::one(cf.vars()));
    let t_to_one: Vec<Monomial> = (0..s0.vars().len())
        .map(|i| {
            let mut e = vec![0; cf.vars().len()];
            if i < n {
                e[i] = 1;
            }
            Monomial::new(e)
        })
        .collect();
    for rel in &fx.relations {
        let (l, r) = parse_relation(rel)?;
        records.push(CheckRecord::new("homogeneous", rel.clone(), is_homogeneous_quadric(&l, &r, th.len())?, || {
            "not homogeneous of degree 2 in the thetas".into()
        }));
        let (lv, rv) = (env.eval(&l)?, env.eval(&r)?);
        records.push(CheckRecord::new("relation", rel.clone(), lv.rat_equal(&rv), || format!("{lv} vs {rv}")));
        let (l1, r1) = (env1.eval(&l)?, env1.eval(&r)?);
        let specialized = lv.substitute_monomials(cf.vars(), &t_to_one);
        let ok = l1.rat_equal(&r1) && specialized.rat_equal(&l1);
        records.push(CheckRecord::new("relation at t=1", rel.clone(), ok, || format!("{l1} vs {r1}")));
        lines.push(format!("{rel}   holds"));
    }
    let k = a.len();
    for i in 0..k {
        let prev = &a[(i + k - 1) % k];
        let next = &a[(i + 1) % k];
        let lhs = prev.mul(next);
        let rhs = a[i].add(&PosRatFunc::one(cf.vars()));
        records.push(CheckRecord::new("exchange relation", format!("A{}", i + 1), lhs.rat_equal(&rhs), || {
            format!("{lhs} vs {rhs}")
        }));
    }

    let atlas = enumerate_gfan(&ex, &[], DEFAULT_DEPTH)?;
    let mut rays = atlas.rays();
    let mut want = fx.rays.clone();
    rays.sort();
    want.sort();
    records.push(CheckRecord::new("fan rays", "g-fan", rays == want, || format!("{rays:?} vs {want:?}")));
    let poly = polytope_p(&atlas)?;
    let checks = [
        ("polytope convex", poly.convex),
        ("polytope vertices", poly.vertices.len() == 5),
        ("polytope interior", poly.interior_points == vec![vec![0, 0]]),
        ("polar vertices", poly.polar_vertices.len() == 5),
        ("reflexive", poly.reflexive),
        ("normal fan", poly.normal_fan_matches),
    ];
    for (name, ok) in checks {
        records.push(CheckRecord::new(name, "P", ok, || format!("{poly:?}")));
    }
    lines.push(format!("P: vertices {:?}", poly.vertices));
    lines.push(format!("P: interior lattice points {:?}", poly.interior_points));
    lines.push(format!("P polar: vertices {:?}", poly.polar_vertices));
    lines.push(format!("P: reflexive {}, normal fan is the g-fan {}", poly.reflexive, poly.normal_fan_matches));
    Ok(CorpusReport {
        name: "dp5".into(),
        records,
        table: lines.join("\n") + "\n",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dp5_checks_pass() {
        let r = run_dp5().unwrap();
        assert!(r.pass(), "{:#?}", r.failures());
        assert_eq!(r.records.len(), 5 + 15 + 5 + 1 + 6);
    }
}
