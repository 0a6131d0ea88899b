use cluster_forge::batches::exchange_pool;
use cluster_forge::exact_algebra::{Poly, PosRatFunc, VarSet, Vars};
use cluster_forge::gfan::{enumerate_gfan, enumerate_with_order, GFanAtlas};
use cluster_forge::invariants::{
    c_matrix, c_matrix_tropical, check_sign_coherence, detect_period, detect_period_with_coeffs, g_matrix,
    g_matrix_by_degree,
};
use cluster_forge::linalg::Matrix;
use cluster_forge::semifields::{tropicalize, TropMonomial};
use cluster_forge::seeds::{build_extended_seed, p_star_pullback, y_tilde, ClusterSeed, ExchangeData, YSeed};
use num_bigint::BigInt;
use proptest::prelude::*;

fn pool(i: usize) -> ExchangeData {
    exchange_pool()[i].1.clone()
}

fn finite_pool(i: usize) -> ExchangeData {
    let p: Vec<_> = exchange_pool().into_iter().filter(|(n, _)| *n != "affine A2").collect();
    p[i % p.len()].1.clone()
}

fn fix_path(raw: &[usize], n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &k in raw {
        let k = k % n;
        if out.last() != Some(&k) {
            out.push(k);
        }
    }
    out
}

fn coeffs(raw: &[i32], size: usize, r: usize) -> Vec<TropMonomial> {
    (0..size).map(|j| TropMonomial(raw[j * r..(j + 1) * r].to_vec())).collect()
}

fn seed_case() -> impl Strategy<Value = (ExchangeData, Vec<usize>, Vec<TropMonomial>)> {
    (0..8usize, prop::collection::vec(0..3usize, 1..=6), prop::collection::vec(-2..=2i32, 6)).prop_map(
        |(i, raw, exps)| {
            let ex = pool(i);
            let n = ex.n();
            (ex, fix_path(&raw, n), coeffs(&exps, n, 2))
        },
    )
}

fn poly_strategy(vars: Vars) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=2i32, 3), 1..=4i64), 1..=3).prop_map(move |terms| {
        Poly::from_terms(&vars, terms.into_iter().map(|(e, c)| (e, BigInt::from(c))))
    })
}

fn posrat_strategy() -> impl Strategy<Value = PosRatFunc> {
    let vars = VarSet::indexed("z", 3, "", 0);
    (poly_strategy(vars.clone()), poly_strategy(vars.clone()), prop::collection::vec(-2..=2i32, 3)).prop_map(
        move |(a, b, m)| {
            let f = PosRatFunc::from_poly(&a).unwrap().div(&PosRatFunc::from_poly(&b).unwrap());
            f.mul_monomial(&cluster_forge::exact_algebra::Monomial::new(m))
        },
    )
}

fn assign_strategy() -> impl Strategy<Value = Vec<TropMonomial>> {
    prop::collection::vec(prop::collection::vec(-3..=3i32, 2), 3)
        .prop_map(|v| v.into_iter().map(TropMonomial).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mutation_is_involutive((ex, path, p) in seed_case()) {
        let k = path[0];
        prop_assert_eq!(&ex.mutate(k).unwrap().mutate(k).unwrap(), &ex);
        let y = YSeed::initial(&ex, p.clone(), "y", "p").unwrap().mutate_path(&path).unwrap();
        let back = y.mutate(*path.last().unwrap()).unwrap().mutate(*path.last().unwrap()).unwrap();
        prop_assert_eq!(&back.p, &y.p);
        for (a, b) in back.y.iter().zip(&y.y) {
            prop_assert!(a.rat_equal(b));
        }
        let x = ClusterSeed::initial(&ex, p, "x", "p").unwrap();
        let xx = x.mutate(k).unwrap().mutate(k).unwrap();
        for (a, b) in xx.x.iter().zip(&x.x) {
            prop_assert!(a.rat_equal(b));
        }
    }

    #[test]
    fn cluster_variables_are_laurent((ex, path, p) in seed_case()) {
        let s = ClusterSeed::initial(&ex, p, "x", "p").unwrap().mutate_path(&path).unwrap();
        for x in &s.x {
            let f = x.simplify();
            let lp = f.as_laurent();
            prop_assert!(lp.is_some(), "not Laurent: {}", f);
            prop_assert!(lp.unwrap().all_positive());
        }
    }

    #[test]
    fn extended_seed_matches_coefficients((ex, path, p) in seed_case()) {
        let s = ClusterSeed::initial(&ex, p, "x", "p").unwrap();
        let ext = build_extended_seed(&s).unwrap().mutate_path(&path).unwrap();
        let sv = s.mutate_path(&path).unwrap();
        let n = ex.n();
        for i in 0..n {
            prop_assert!(ext.x[i].rat_equal(&sv.x[i]));
        }
        for j in 0..n {
            let exps: Vec<i32> = (0..2).map(|a| ext.ex.bij(n + a, j) as i32).collect();
            prop_assert_eq!(&TropMonomial(exps), &sv.p[j]);
        }
    }

    #[test]
    fn y_tilde_is_y_pattern_with_coefficients((ex, path, p) in seed_case()) {
        let s = ClusterSeed::initial(&ex, p.clone(), "x", "p").unwrap();
        let lhs = y_tilde(&s.mutate_path(&path).unwrap());
        let y0 = YSeed::from_parts(y_tilde(&s), p, ex.clone(), s.p_offset).unwrap();
        let rhs = y0.mutate_path(&path).unwrap();
        for (a, b) in lhs.iter().zip(&rhs.y) {
            prop_assert!(a.rat_equal(b), "{} vs {}", a, b);
        }
    }

    #[test]
    fn p_map_commutes_with_mutation((ex, path, _p) in seed_case()) {
        let s = ClusterSeed::coefficient_free(&ex, "x");
        let size = ex.size();
        let pull = |c: &ClusterSeed| (0..size).map(|i| p_star_pullback(c, i)).collect::<Vec<_>>();
        let sv = s.mutate_path(&path).unwrap();
        let x0 = YSeed::from_parts(pull(&s), vec![TropMonomial::one(0); size], ex.clone(), size).unwrap();
        let xv = x0.mutate_path(&path).unwrap();
        for (a, b) in pull(&sv).iter().zip(&xv.y) {
            prop_assert!(a.rat_equal(b), "{} vs {}", a, b);
        }
    }

    #[test]
    fn tropicalize_is_a_morphism(f in posrat_strategy(), g in posrat_strategy(), a in assign_strategy()) {
        let tf = tropicalize(&f, &a).unwrap();
        let tg = tropicalize(&g, &a).unwrap();
        prop_assert_eq!(tropicalize(&f.mul(&g), &a).unwrap(), tf.mul(&tg));
        prop_assert_eq!(tropicalize(&f.div(&g), &a).unwrap(), tf.div(&tg));
        prop_assert_eq!(tropicalize(&f.add(&g), &a).unwrap(), tf.trop_add(&tg).unwrap());
    }

    #[test]
    fn tropicalize_ignores_representation(f in posrat_strategy(), g in posrat_strategy(), a in assign_strategy()) {
        let h = f.mul(&g).div(&g);
        prop_assert!(h.rat_equal(&f));
        prop_assert_eq!(tropicalize(&h, &a).unwrap(), tropicalize(&f, &a).unwrap());
    }

    #[test]
    fn plus_minus_split(v in prop::collection::vec(-5..=5i32, 1..=4)) {
        let p = TropMonomial(v);
        let (plus, minus) = p.plus_minus();
        prop_assert_eq!(plus.div(&minus), p);
        prop_assert!(plus.exps().iter().chain(minus.exps()).all(|&e| e >= 0));
    }

    #[test]
    fn exact_division_round_trip(a in poly_strategy(VarSet::indexed("z", 3, "", 0)), b in poly_strategy(VarSet::indexed("z", 3, "", 0))) {
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_div(&b).unwrap(), a);
    }

    #[test]
    fn rat_equal_is_a_congruence(f in posrat_strategy(), g in posrat_strategy(), h in posrat_strategy()) {
        let f2 = f.mul(&g).div(&g);
        prop_assert!(f.rat_equal(&f2));
        prop_assert!(f.add(&h).rat_equal(&f2.add(&h)));
        prop_assert!(f.mul(&h).rat_equal(&f2.mul(&h)));
        let (num, den) = f.add(&h).expand();
        prop_assert!(num.all_positive() && den.all_positive());
    }

    #[test]
    fn display_parses_back(f in posrat_strategy()) {
        let env = cluster_forge::corpus::expr::Env::from_vars(f.vars());
        let parsed = env.eval_str(&f.to_string()).unwrap();
        prop_assert!(parsed.rat_equal(&f), "{} reparsed as {}", f, parsed);
    }

    #[test]
    fn c_and_g_matrices_agree((ex, path, _p) in seed_case()) {
        let c = c_matrix(&ex, &path).unwrap();
        prop_assert_eq!(&c, &c_matrix_tropical(&ex, &path).unwrap());
        prop_assert!(check_sign_coherence(&c));
        prop_assert_eq!(c.det().abs(), 1);
        let g = g_matrix(&ex, &path).unwrap();
        prop_assert_eq!(&g, &g_matrix_by_degree(&ex, &path).unwrap());
        let dual = c_matrix(&ex.minus_transpose(), &path).unwrap();
        prop_assert_eq!(g.transpose().mul(&dual), Matrix::identity(ex.size()));
    }

    #[test]
    fn periodicity_transfers(
        which in 0..2usize,
        len in 1..=12usize,
        start in 0..2usize,
        exps in prop::collection::vec(-2..=2i32, 4),
    ) {
        let ex = pool(if which == 0 { 0 } else { 1 });
        let path: Vec<usize> = (0..len).map(|i| (start + i) % 2).collect();
        let p0 = coeffs(&exps, 2, 2);
        let principal: Vec<TropMonomial> = (0..2).map(|i| TropMonomial::generator(2, i)).collect();
        let free = detect_period(&ex, &path).unwrap();
        prop_assert_eq!(&free, &detect_period_with_coeffs(&ex, &principal, &path).unwrap());
        if free.is_some() {
            prop_assert_eq!(&free, &detect_period_with_coeffs(&ex, &p0, &path).unwrap());
        }
    }
}

fn atlas_keys(a: &GFanAtlas) -> Vec<Vec<Vec<i64>>> {
    let mut k = a.cone_keys();
    k.sort();
    k
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn enumeration_ignores_direction_order(i in 0..7usize, order in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let ex = finite_pool(i);
        let order: Vec<usize> = order.into_iter().filter(|&k| k < ex.n()).collect();
        let base = enumerate_gfan(&ex, &[], 64).unwrap();
        let other = enumerate_with_order(&ex, &[], 64, &order).unwrap();
        prop_assert!(!base.truncated && !other.truncated);
        prop_assert_eq!(atlas_keys(&base), atlas_keys(&other));
    }
}
