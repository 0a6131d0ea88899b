use std::process::ExitCode;
use std::time::{Duration, Instant};

use cluster_forge::batches::{
    degree_batch, duality_batch, glue_batch, involution_batch, laurent_batch, limit_batch, random_nonzero_rationals,
    rng, separation_batch, separation_cases, sign_coherence_batch, strata_batch,
};
use cluster_forge::corpus::{run_table, seed_fixture};
use cluster_forge::degeneration::{
    central_fiber_toric_check, cocycle_suite, enumerate_loops, fiber_iso_check, specialize_fiber, transition,
};
use cluster_forge::gfan::{enumerate_gfan, star, GFanAtlas, DEFAULT_DEPTH};
use cluster_forge::report::CheckRecord;
use num_rational::BigRational;
use num_traits::{One, Zero};

const RNG_SEED: u64 = 20240607;
const SEPARATION_PATHS: usize = 200;
const SEPARATION_MAX_LEN: usize = 8;
const INVOLUTIONS: usize = 500;
const LAURENT_PATHS: usize = 100;
const LAURENT_MAX_LEN: usize = 8;
const LOOP_MAX_LEN: usize = 8;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = fn() -> Result<Outcome, String>;

fn atlas(name: &str) -> Result<GFanAtlas, String> {
    let ex = seed_fixture(name).and_then(|s| s.exchange_data()).map_err(|e| e.to_string())?;
    let a = enumerate_gfan(&ex, &[], DEFAULT_DEPTH).map_err(|e| e.to_string())?;
    if a.truncated {
        return Err(format!("{name}: enumeration truncated"));
    }
    Ok(a)
}

fn tally(records: &[CheckRecord]) -> (usize, Vec<String>) {
    let failed = records
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} {}: {}", r.check, r.ids, r.witness.clone().unwrap_or_default()))
        .collect();
    (records.len(), failed)
}

fn outcome(parts: Vec<(String, Vec<CheckRecord>, Option<usize>)>) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for (label, records, expected) in parts {
        let (n, failed) = tally(&records);
        let count_ok = expected.map_or(n > 0, |e| e == n);
        pass &= failed.is_empty() && count_ok;
        detail.push(format!("{label} {}/{n}", n - failed.len()));
        if !count_ok {
            detail.push(format!("{label} expected {expected:?} records"));
        }
        detail.extend(failed.into_iter().take(3));
    }
    Outcome {
        pass,
        detail: detail.join(", "),
    }
}

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

fn tables() -> Result<Outcome, String> {
    let mut parts = Vec::new();
    for name in ["a2", "a2-principal"] {
        let r = run_table(name).map_err(err)?;
        let rows = r.table.lines().filter(|l| l.split(" | ").next().is_some_and(|v| v.parse::<usize>().is_ok())).count();
        let mut records = r.records;
        records.push(CheckRecord::new("rows", name, rows == 6, || format!("{rows} rows")));
        parts.push((name.to_string(), records, None));
    }
    Ok(outcome(parts))
}

fn separation() -> Result<Outcome, String> {
    let cases = separation_cases(None, SEPARATION_PATHS, SEPARATION_MAX_LEN, RNG_SEED);
    let bounded = cases.iter().all(|(ex, p, path)| {
        ex.size() <= 3
            && path.len() <= SEPARATION_MAX_LEN
            && p.iter().flat_map(|m| m.exps()).all(|e| (-2..=2).contains(e))
    });
    let mut records = separation_batch(&cases).map_err(err)?;
    records.push(CheckRecord::new("bounds", "random cases", bounded, || "case outside the sampling bounds".into()));
    Ok(outcome(vec![("separation".into(), records, Some(SEPARATION_PATHS + 1))]))
}

fn duality() -> Result<Outcome, String> {
    let mut parts = Vec::new();
    for (name, cones) in [("a2", 5), ("a3", 14), ("b2", 6)] {
        let a = atlas(name)?;
        parts.push((format!("{name} duality"), duality_batch(&a), Some(cones)));
        parts.push((format!("{name} sign coherence"), sign_coherence_batch(&a), Some(cones)));
    }
    Ok(outcome(parts))
}

fn q(a: i64) -> BigRational {
    BigRational::from_integer(a.into())
}

fn a2_central_monomial_maps(a: &GFanAtlas) -> Result<Vec<CheckRecord>, String> {
    let nb = a.cones[0].neighbors[1].clone().ok_or("A2 initial cone has no neighbour in direction 2")?;
    let t = transition(a, 0, nb.cone, 1).map_err(err)?;
    let fiber = specialize_fiber(&t, &[q(0), q(0)]).map_err(err)?;
    let expected = [(nb.perm[1], vec![0, -1]), (nb.perm[0], vec![1, 0])];
    Ok(expected
        .iter()
        .map(|(i, e)| {
            let term = fiber[*i].as_term();
            let ok = term.as_ref().is_some_and(|(c, m)| c.is_one() && m.exps()[..2] == e[..] && m.exps()[2..].iter().all(|&x| x == 0));
            CheckRecord::new("central monomial map", format!("X'{}", i + 1), ok, || format!("{}", fiber[*i]))
        })
        .collect())
}

fn degeneration() -> Result<Outcome, String> {
    let mut parts = Vec::new();
    for (name, cones) in [("a2", 5), ("a3", 14), ("b2", 6)] {
        let a = atlas(name)?;
        let n = a.dim();
        parts.push((format!("{name} degree"), degree_batch(&a).map_err(err)?, Some(cones * n)));
        parts.push((format!("{name} limit"), limit_batch(&a).map_err(err)?, Some(cones * n)));
        let loops = enumerate_loops(&a, LOOP_MAX_LEN).len();
        parts.push((format!("{name} cocycle"), cocycle_suite(&a, LOOP_MAX_LEN).map_err(err)?, Some(loops)));
        parts.push((format!("{name} central fiber"), central_fiber_toric_check(&a).map_err(err)?, None));
        if name == "a2" {
            parts.push(("a2 t=0 maps".into(), a2_central_monomial_maps(&a)?, Some(2)));
        }
    }
    Ok(outcome(parts))
}

fn fiber_isomorphism() -> Result<Outcome, String> {
    let a2 = atlas("a2")?;
    let a3 = atlas("a3")?;
    let walls2 = a2.walls().len();
    let walls3 = a3.walls().len();
    let mut parts = Vec::new();
    for u2 in [[q(2), q(3)], [q(5), q(7)]] {
        let r = fiber_iso_check(&a2, &[q(1), q(1)], &u2).map_err(err)?;
        parts.push((format!("a2 u'=({},{})", u2[0], u2[1]), r, Some(walls2)));
    }
    let mut g = rng(RNG_SEED);
    for i in 0..3 {
        let u = random_nonzero_rationals(&mut g, 3);
        let u2 = random_nonzero_rationals(&mut g, 3);
        if u.iter().chain(&u2).any(Zero::is_zero) {
            return Err("sampled a zero parameter".into());
        }
        parts.push((format!("a3 pair {}", i + 1), fiber_iso_check(&a3, &u, &u2).map_err(err)?, Some(walls3)));
    }
    Ok(outcome(parts))
}

fn gluing() -> Result<Outcome, String> {
    let mut parts = Vec::new();
    for name in ["a2", "a3"] {
        let a = atlas(name)?;
        let walls = a.walls().len();
        parts.push((format!("{name} glue"), glue_batch(&a).map_err(err)?, Some(2 * walls)));
    }
    Ok(outcome(parts))
}

fn a2_ray_strata_are_a1(a: &GFanAtlas) -> Result<Vec<CheckRecord>, String> {
    let mut out = Vec::new();
    for ray in a.rays() {
        let s = star(a, std::slice::from_ref(&ray)).map_err(err)?;
        let mut rays = s.rays.clone();
        rays.sort();
        let shape = s.cones.len() == 2 && rays == vec![vec![-1], vec![1]] && s.restricted_b == vec![vec![0]];
        let (g, g2) = (s.cones[0], s.cones[1]);
        let k = s.index_set[0];
        let inverse = match a.walls().into_iter().find(|&(x, kk, y)| x == g && y == g2 && kk == k) {
            Some((_, k, _)) => {
                let t = transition(a, g, g2, k).map_err(err)?;
                let nb = a.cones[g].neighbors[k].clone().ok_or("missing neighbour")?;
                let fiber = specialize_fiber(&t, &[q(0), q(0)]).map_err(err)?;
                let mut e = vec![0; 4];
                e[k] = -1;
                fiber[nb.perm[k]].as_term().is_some_and(|(c, m)| c.is_one() && m.exps() == e)
            }
            None => false,
        };
        out.push(CheckRecord::new("A1 stratum", format!("ray {ray:?}"), shape && inverse, || {
            format!("star {s:?}")
        }));
    }
    Ok(out)
}

fn strata() -> Result<Outcome, String> {
    let a2 = atlas("a2")?;
    let a3 = atlas("a3")?;
    Ok(outcome(vec![
        ("a2 strata".into(), strata_batch(&a2).map_err(err)?, None),
        ("a3 strata".into(), strata_batch(&a3).map_err(err)?, None),
        ("a2 ray strata".into(), a2_ray_strata_are_a1(&a2)?, Some(5)),
    ]))
}

fn corpus(name: &'static str) -> Result<Outcome, String> {
    let r = run_table(name).map_err(err)?;
    Ok(outcome(vec![(name.to_string(), r.records, None)]))
}

fn gr25() -> Result<Outcome, String> {
    corpus("gr25")
}

fn dp5() -> Result<Outcome, String> {
    corpus("dp5")
}

fn involution_laurent() -> Result<Outcome, String> {
    Ok(outcome(vec![
        ("involution".into(), involution_batch(INVOLUTIONS, RNG_SEED).map_err(err)?, Some(INVOLUTIONS)),
        ("laurent".into(), laurent_batch(LAURENT_PATHS, LAURENT_MAX_LEN, RNG_SEED).map_err(err)?, Some(LAURENT_PATHS)),
    ]))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [(&str, Criterion, Option<Duration>); 10] = [
        ("golden A2 tables", tables, Some(secs(1))),
        ("separation formula", separation, Some(secs(60))),
        ("duality and sign coherence", duality, Some(secs(5))),
        ("degeneration suite", degeneration, Some(secs(120))),
        ("fiber isomorphisms", fiber_isomorphism, Some(secs(30))),
        ("special completion gluing", gluing, None),
        ("strata", strata, None),
        ("Gr(2,5)", gr25, None),
        ("dP5", dp5, None),
        ("involution and Laurent", involution_laurent, Some(secs(60))),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let (pass, detail) = match result {
            Ok(o) => (o.pass && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let limit_text = limit.map_or(String::new(), |l| format!(" (limit {:.0?})", l));
        println!(
            "{} criterion {:>2} {name}: {detail}; {:.3?}{limit_text}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed
        );
        if !pass {
            failures += 1;
        }
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
