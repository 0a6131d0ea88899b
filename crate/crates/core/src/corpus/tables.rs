//! The A2 tables: Y-pattern with generic coefficients and principal coefficients.

use serde::Deserialize;

use super::expr::Env;
use super::{parse_fixture, CorpusReport};
use crate::error::Result;
use crate::exact_algebra::PosRatFunc;
use crate::gfan::SeedJson;
use crate::invariants::{c_matrix, detect_period, detect_period_with_coeffs};
use crate::linalg::Matrix;
use crate::report::CheckRecord;
use crate::seeds::{format_path, YSeed};
use crate::semifields::trop_to_string;

#[derive(Deserialize)]
struct YRow {
    #[serde(rename = "B")]
    b: Vec<Vec<i64>>,
    p: Vec<String>,
    #[serde(rename = "Y")]
    y: Vec<String>,
}

#[derive(Deserialize)]
struct PRow {
    eps: Vec<Vec<i64>>,
    #[serde(rename = "C")]
    c: Vec<Vec<i64>>,
    #[serde(rename = "X")]
    x: Vec<String>,
}

#[derive(Deserialize)]
struct A2Fixture {
    seed: SeedJson,
    path: Vec<usize>,
    y_pattern: Vec<YRow>,
    principal: Vec<PRow>,
}

fn fixture() -> Result<A2Fixture> {
    parse_fixture("a2_tables", include_str!("../../fixtures/a2_tables.json"))
}

fn zero_based(path: &[usize]) -> Vec<usize> {
    path.iter().map(|k| k - 1).collect()
}

fn join(items: &[String]) -> String {
    items.join(" | ")
}

/// Seeds along the table path, starting with the initial one.
fn walk(s0: &YSeed, path: &[usize]) -> Result<Vec<YSeed>> {
    let mut out = vec![s0.clone()];
    for &k in path {
        let next = out.last().expect("nonempty").mutate(k)?;
        out.push(next);
    }
    Ok(out)
}

fn compare_funcs(records: &mut Vec<CheckRecord>, check: &str, v: usize, got: &[PosRatFunc], want: &[PosRatFunc]) {
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        records.push(CheckRecord::new(check, format!("v{v} i{}", i + 1), g.rat_equal(w), || {
            format!("engine {g}, expected {w}")
        }));
    }
}

pub fn run_a2_y_pattern() -> Result<CorpusReport> {
    let fx = fixture()?;
    let ex = fx.seed.exchange_data()?;
    let p0 = fx.seed.coefficients()?;
    let path = zero_based(&fx.path);
    let s0 = YSeed::initial(&ex, p0.clone(), "y", "p")?;
    let env = Env::from_vars(s0.vars()).with_trop_generators(&["p1".into(), "p2".into()], 2);
    let pnames = ["p1".to_string(), "p2".to_string()];
    let seeds = walk(&s0, &path)?;
    let mut records = Vec::new();
    let mut lines = vec![
        "Y-pattern with coefficients, type A2".to_string(),
        format!("B_v0 = {}, mutation sequence {}", ex.b(), format_path(&path)),
        join(&["v".into(), "mu".into(), "B_v".into(), "p_1;v".into(), "p_2;v".into(), "Y_1;v".into(), "Y_2;v".into()]),
    ];
    for (v, (s, row)) in seeds.iter().zip(&fx.y_pattern).enumerate() {
        let want_b = Matrix::from_rows(&row.b);
        records.push(CheckRecord::new("B", format!("v{v}"), s.ex.b() == &want_b, || {
            format!("engine {}, expected {want_b}", s.ex.b())
        }));
        for (i, ps) in row.p.iter().enumerate() {
            let want = env.eval_trop_str(ps)?;
            records.push(CheckRecord::new("p", format!("v{v} i{}", i + 1), s.p[i] == want, || {
                format!("engine {}, expected {}", s.p[i], want)
            }));
        }
        let want: Vec<PosRatFunc> = row.y.iter().map(|t| env.eval_str(t)).collect::<Result<_>>()?;
        compare_funcs(&mut records, "Y", v, &s.y, &want);
        let mu = if v == 0 { "-".to_string() } else { fx.path[v - 1].to_string() };
        let mut cells = vec![v.to_string(), mu, s.ex.b().to_string()];
        cells.extend(s.p.iter().map(|t| trop_to_string(t, &pnames)));
        cells.extend(s.y.iter().map(ToString::to_string));
        lines.push(join(&cells));
    }
    let perm = detect_period(&ex, &path)?;
    records.push(CheckRecord::new("period", "v5 ~ v0", perm == Some(vec![1, 0]), || format!("{perm:?}")));
    let perm = detect_period_with_coeffs(&ex, &p0, &path)?;
    records.push(CheckRecord::new("period with coefficients", "v5 ~ v0", perm == Some(vec![1, 0]), || {
        format!("{perm:?}")
    }));
    lines.push("v5 equals v0 with the labels 1 and 2 exchanged".into());
    Ok(CorpusReport {
        name: "a2".into(),
        records,
        table: lines.join("\n") + "\n",
    })
}

pub fn run_a2_principal() -> Result<CorpusReport> {
    let fx = fixture()?;
    let ex = fx.seed.exchange_data()?;
    let path = zero_based(&fx.path);
    let s0 = YSeed::principal(&ex, "X", "t");
    let env = Env::from_vars(s0.vars());
    let tnames = ["t1".to_string(), "t2".to_string()];
    let seeds = walk(&s0, &path)?;
    let mut records = Vec::new();
    let mut lines = vec![
        "Y-pattern with principal coefficients, type A2".to_string(),
        format!("eps_v0 = {}, mutation sequence {}", ex.b().transpose(), format_path(&path)),
        join(&["v".into(), "mu".into(), "eps_v".into(), "C_v".into(), "t_1;v".into(), "t_2;v".into(), "X_1;v".into(), "X_2;v".into()]),
    ];
    for (v, (s, row)) in seeds.iter().zip(&fx.principal).enumerate() {
        let eps = s.ex.b().transpose();
        let want_eps = Matrix::from_rows(&row.eps);
        records.push(CheckRecord::new("eps", format!("v{v}"), eps == want_eps, || {
            format!("engine {eps}, expected {want_eps}")
        }));
        let want_c = Matrix::from_rows(&row.c);
        let c = c_matrix(&ex, &path[..v])?;
        records.push(CheckRecord::new("C", format!("v{v}"), c == want_c, || format!("engine {c}, expected {want_c}")));
        let from_seed = Matrix::from_cols(&s.p.iter().map(|t| t.exps().iter().map(|&a| a as i64).collect()).collect::<Vec<_>>());
        records.push(CheckRecord::new("C from coefficients", format!("v{v}"), from_seed == want_c, || {
            format!("engine {from_seed}, expected {want_c}")
        }));
        let want: Vec<PosRatFunc> = row.x.iter().map(|t| env.eval_str(t)).collect::<Result<_>>()?;
        compare_funcs(&mut records, "X", v, &s.y, &want);
        let mu = if v == 0 { "-".to_string() } else { fx.path[v - 1].to_string() };
        let mut cells = vec![v.to_string(), mu, eps.to_string(), c.to_string()];
        cells.extend(s.p.iter().map(|t| trop_to_string(t, &tnames)));
        cells.extend(s.y.iter().map(ToString::to_string));
        lines.push(join(&cells));
    }
    let perm = detect_period_with_coeffs(&ex, &s0.p, &path)?;
    records.push(CheckRecord::new("period", "v5 ~ v0", perm == Some(vec![1, 0]), || format!("{perm:?}")));
    lines.push("v5 equals v0 with the labels 1 and 2 exchanged".into());
    Ok(CorpusReport {
        name: "a2-principal".into(),
        records,
        table: lines.join("\n") + "\n",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_pattern_table_matches() {
        let r = run_a2_y_pattern().unwrap();
        assert!(r.pass(), "{:?}", r.failures());
        assert_eq!(r.records.len(), 6 * 5 + 2);
    }

    #[test]
    fn principal_table_matches() {
        let r = run_a2_principal().unwrap();
        assert!(r.pass(), "{:?}", r.failures());
    }
}
