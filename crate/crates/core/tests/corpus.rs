use cluster_forge::corpus::{run_table, seed_fixture, TABLES};
use cluster_forge::degeneration::{patch_seed, specialize_fiber, strata_consistency_check, transition};
use cluster_forge::gfan::{enumerate_gfan, star, DEFAULT_DEPTH};
use num_rational::BigRational;
use num_traits::One;
use std::path::PathBuf;

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/golden").join(format!("{name}.txt"));
    std::fs::read_to_string(p).expect("golden file")
}

#[test]
fn tables_match_goldens() {
    for name in TABLES {
        let r = run_table(name).unwrap();
        assert!(r.pass(), "{name}: {:?}", r.failures());
        assert_eq!(r.table, golden(name), "{name}");
    }
}

#[test]
fn freezing_a3_shrinks_the_fan() {
    let ex = seed_fixture("a3").unwrap().exchange_data().unwrap();
    let full = enumerate_gfan(&ex, &[], DEFAULT_DEPTH).unwrap();
    assert_eq!(full.cones.len(), 14);
    for k in 0..3 {
        let part = enumerate_gfan(&ex, &[k], DEFAULT_DEPTH).unwrap();
        assert!(!part.truncated);
        assert!(part.cones.len() < full.cones.len());
    }
}

#[test]
fn unit_fiber_is_coefficient_free() {
    let ex = seed_fixture("a3").unwrap().exchange_data().unwrap();
    let atlas = enumerate_gfan(&ex, &[], DEFAULT_DEPTH).unwrap();
    let ones = vec![BigRational::one(); 3];
    for (g, k, g2) in atlas.walls() {
        let t = transition(&atlas, g, g2, k).unwrap();
        let fiber = specialize_fiber(&t, &ones).unwrap();
        let free = patch_seed(&atlas, g, false).mutate(k).unwrap();
        let perm = &atlas.cones[g].neighbors[k].as_ref().unwrap().perm;
        for (i, y) in free.y.iter().enumerate() {
            let expected = y.specialize(&[(3, BigRational::one()), (4, BigRational::one()), (5, BigRational::one())]).unwrap();
            assert!(fiber[perm[i]].equals(&expected), "wall {g}-{g2}");
        }
    }
}

#[test]
fn a3_two_face_strata_are_a1() {
    let ex = seed_fixture("a3").unwrap().exchange_data().unwrap();
    let atlas = enumerate_gfan(&ex, &[], DEFAULT_DEPTH).unwrap();
    let mut faces: Vec<Vec<Vec<i64>>> = Vec::new();
    for c in &atlas.cones {
        let g = c.gens();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let mut f = vec![g[a].clone(), g[b].clone()];
            f.sort();
            if !faces.contains(&f) {
                faces.push(f);
            }
        }
    }
    assert_eq!(faces.len(), 21);
    for f in &faces {
        let s = star(&atlas, f).unwrap();
        assert_eq!(s.cones.len(), 2, "{f:?}");
        assert_eq!(s.restricted_b, vec![vec![0]]);
        let recs = strata_consistency_check(&atlas, f).unwrap();
        assert_eq!(recs.len(), 2);
        assert!(recs.iter().all(|r| r.pass), "{recs:?}");
    }
}
