use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vadic::local::{periodic_points, Domain, LocalElem, ProdElem, DEFAULT_CAP};
use vadic::par::Exec;
use vadic::uniqueness::*;
use vadic::Error;

const DOMAINS: [&str; 5] = ["Zp:3", "Av:2:theta", "Zp:3,Av:2:theta", "Zp:3{0,1,-1}", "Av:2:theta{0,1+theta}"];

fn dom(s: &str) -> Domain {
    Domain::parse(s).unwrap()
}

fn self_valued(d: &Domain) -> Arc<ValuedField> {
    Arc::new(ValuedField::of_component(&d.components()[0], DEFAULT_K_PRECISION).unwrap())
}

fn random_point(rng: &mut ChaCha8Rng, d: &Domain, prec: usize) -> ProdElem {
    ProdElem::new(
        d.components()
            .iter()
            .map(|c| {
                let r = c.radix() as u32;
                LocalElem::from_digits(c.clone(), (0..prec).map(|_| rng.gen_range(0..r)).collect()).unwrap()
            })
            .collect(),
    )
}

fn phi_pow(x: &ProdElem, k: usize) -> ProdElem {
    (0..k).fold(x.clone(), |y, _| y.phi().unwrap())
}

fn digits(x: &ProdElem, len: usize) -> Vec<Vec<u32>> {
    x.parts().iter().map(|p| p.digits()[..len].to_vec()).collect()
}

/// ∏_{i ∈ range} F(φ^{(i)}(y)), evaluated on explicit shifts.
fn orbit_product(f: &StepFn, y: &ProdElem, range: std::ops::Range<usize>) -> KVal {
    let k = f.field();
    range.fold(k.one(), |acc, i| k.mul(&acc, &f.eval(&phi_pow(y, i)).unwrap()))
}

fn seeded_coboundary(d: &Domain, k: &Arc<ValuedField>, seed: u64, level: usize) -> StepFn {
    let mut rng = rng_for(seed);
    let g0 = StepFn::random(d, level, k.clone(), &mut rng, RANDOM_VALS).unwrap();
    coboundary(&g0, Exec::Sequential).unwrap()
}

#[test]
fn alpha_beta_examples() {
    let d = dom("Zp:3");
    let p = ProofParams::zero(&d);
    let x =
        ProdElem::new(vec![LocalElem::from_digits(d.components()[0].clone(), vec![2, 1, 0, 1, 2, 2, 1, 0]).unwrap()]);
    assert_eq!(alpha_n(&x, 1, &p).unwrap().parts()[0].digits(), &[2; 8]);
    assert_eq!(beta_n(&x, 2, &p).unwrap().parts()[0].digits(), &[0, 2, 0, 2, 0, 2, 0, 2]);
    assert_eq!(alpha_n(&x, 3, &p).unwrap().parts()[0].digits(), &[0, 0, 2, 1, 0, 0, 0, 2]);
    assert!(beta_n(&x, 1, &p).is_err());
    // x = 𝐛/(𝟏−𝛑) is fixed by every α_n and β_n
    let b = ProofParams::new(&d, vec![1]).unwrap();
    let fixed = ProdElem::new(vec![LocalElem::from_digits(d.components()[0].clone(), vec![1; 12]).unwrap()]);
    for n in 2..5 {
        assert_eq!(alpha_n(&fixed, n, &b).unwrap(), fixed);
        assert_eq!(beta_n(&fixed, n, &b).unwrap(), fixed);
    }
}

#[test]
fn proof_params_validation() {
    let d = dom("Zp:3,Av:2:theta^2+theta+1");
    assert_eq!(ProofParams::parse(&d, "1;theta").unwrap().b, vec![1, 2]);
    assert!(ProofParams::parse(&dom("Av:2:theta"), "theta").is_err());
    assert!(ProofParams::parse(&d, "1").is_err());
    assert!(ProofParams::parse(&d, "2;0").is_err());
    assert!(ProofParams::parse(&d, "5;0").is_err());
    assert!(ProofParams::parse(&dom("Zp:3{0,1,-1}"), "-1").is_ok());
}

#[test]
fn alpha_beta_periodicity_and_congruence() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for s in DOMAINS {
        let d = dom(s);
        let p = ProofParams::zero(&d);
        for _ in 0..100 {
            let n = rng.gen_range(1..=5);
            let x = random_point(&mut rng, &d, 30);
            let a = alpha_n(&x, n, &p).unwrap();
            assert_eq!(digits(&phi_pow(&a, 2 * n - 1), 10), digits(&a, 10));
            if n >= 2 {
                let bphi = beta_n(&x.phi().unwrap(), n, &p).unwrap();
                assert_eq!(digits(&phi_pow(&bphi, 2 * n - 2), 10), digits(&bphi, 10));
                let b = beta_n(&x, n, &p).unwrap();
                assert_eq!(digits(&a, 2 * n - 2), digits(&b, 2 * n - 2));
                assert_eq!(digits(&b, n - 1), vec![vec![0; n - 1]; d.len()]);
            }
            // φ^{(n−1)}(α_n(x)) ≡ x mod 𝛑^n
            assert_eq!(digits(&phi_pow(&a, n - 1), n), digits(&x, n));
        }
    }
}

#[test]
fn g_n_for_constant_functions() {
    let d = dom("Zp:3,Av:2:theta");
    let k = self_valued(&d);
    let p = ProofParams::zero(&d);
    let x = random_point(&mut ChaCha8Rng::seed_from_u64(4), &d, 12);
    let one = StepFn::one(&d, k.clone());
    assert_eq!(g_n(&one, &x, 2, &p).unwrap(), k.one());
    let c = k.mul(&k.t(), &k.t());
    let cf = StepFn::constant(&d, k.clone(), c.clone());
    for n in 1..8 {
        assert_eq!(g_n(&cf, &x, n, &p).unwrap(), k.pow(&c, -(n as i64 - 1)));
    }
    assert_eq!(a_n_b_n(&one, &x, 4, &p).unwrap(), (k.one(), k.one()));
    let rec = recover_g(&one, &p, 12, Exec::Sequential).unwrap();
    assert!(rec.g.table().iter().all(|v| *v == k.one()));
}

#[test]
fn g_n_matches_the_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for s in DOMAINS {
        let d = dom(s);
        let k = self_valued(&d);
        let p = ProofParams::zero(&d);
        let f = seeded_coboundary(&d, &k, 3, 2);
        for n in 2..7 {
            let table = g_n_table(&f, n, &p, Exec::Parallel).unwrap();
            for _ in 0..10 {
                let x = random_point(&mut rng, &d, 3 * n + f.level());
                let b = beta_n(&x, n, &p).unwrap();
                let want = k.inv(&orbit_product(&f, &b, 0..n - 1));
                assert_eq!(g_n(&f, &x, n, &p).unwrap(), want);
                assert_eq!(table.eval(&x).unwrap(), want);
            }
        }
    }
}

#[test]
fn fabg_identity_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for s in DOMAINS {
        let d = dom(s);
        let k = self_valued(&d);
        let p = ProofParams::zero(&d);
        let f = seeded_coboundary(&d, &k, 5, 2);
        for _ in 0..30 {
            let n = rng.gen_range(2..=7);
            let x = random_point(&mut rng, &d, 3 * n + f.level() + 2);
            let al = alpha_n(&x, n, &p).unwrap();
            let be = beta_n(&x, n, &p).unwrap();
            let be_phi = beta_n(&x.phi().unwrap(), n, &p).unwrap();
            let a = k.div(&orbit_product(&f, &be, 0..n - 1), &orbit_product(&f, &al, 0..n - 1));
            let b = k.div(&orbit_product(&f, &be_phi, n - 1..2 * n - 2), &orbit_product(&f, &al, n..2 * n - 1));
            assert_eq!(a_n_b_n(&f, &x, n, &p).unwrap(), (a.clone(), b.clone()));
            let g = k.div(&g_n(&f, &x, n, &p).unwrap(), &g_n(&f, &x.phi().unwrap(), n, &p).unwrap());
            let lhs = f.eval(&phi_pow(&al, n - 1)).unwrap();
            assert_eq!(lhs, k.mul(&k.mul(&a, &b), &g));
            assert!(fabg_holds(&f, &x, n, &p).unwrap());
            // A_n is exactly 1 once n reaches the level of F
            if n >= f.level() {
                assert_eq!(a, k.one());
            }
        }
    }
}

#[test]
fn fabg_fails_without_the_cocycle_condition() {
    let d = dom("Zp:3");
    let k = self_valued(&d);
    let p = ProofParams::zero(&d);
    let f = StepFn::random(&d, 2, k, &mut rng_for(2), RANDOM_VALS).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let bad = (0..50).filter(|_| {
        let x = random_point(&mut rng, &d, 20);
        !fabg_holds(&f, &x, 3, &p).unwrap()
    });
    assert!(bad.count() > 0);
}

#[test]
fn build_h_with_constant_g_is_gamma() {
    let d = dom("Zp:3,Av:2:theta");
    let k = self_valued(&d);
    let mut rng = rng_for(8);
    let gamma = StepFn::random(&d, 2, k.clone(), &mut rng, RANDOM_VALS).unwrap();
    let g = StepFn::constant(&d, k.clone(), k.random(&mut rng, RANDOM_VALS));
    let h = build_h(&gamma, &g, Exec::Sequential).unwrap();
    assert_eq!(h, gamma.at_level(h.level()).unwrap());
}

#[test]
fn h_is_gamma_times_g_over_g_minus_shift() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for s in DOMAINS {
        let d = dom(s);
        let k = self_valued(&d);
        let mut seeded = rng_for(4);
        let gamma = StepFn::random(&d, 1, k.clone(), &mut seeded, RANDOM_VALS).unwrap();
        let g = StepFn::random(&d, 2, k.clone(), &mut seeded, RANDOM_VALS).unwrap();
        let h = build_h(&gamma, &g, Exec::Sequential).unwrap();
        for _ in 0..20 {
            let x = random_point(&mut rng, &d, 8);
            let want = k.mul(
                &gamma.eval(&x).unwrap(),
                &k.div(&g.eval(&x).unwrap(), &g.eval(&x.neg_phi_neg().unwrap()).unwrap()),
            );
            assert_eq!(h.eval(&x).unwrap(), want);
        }
    }
}

#[test]
fn product_identity_holds_and_detects_perturbation() {
    for s in DOMAINS {
        let d = dom(s);
        let k = self_valued(&d);
        let run = forward_run(&d, &k, 3, 2, 2, 4, Exec::Parallel).unwrap();
        assert!(run.pass, "{s}");
        let mut rng = rng_for(3);
        let gamma = StepFn::random(&d, 2, k.clone(), &mut rng, RANDOM_VALS).unwrap();
        let g = StepFn::random(&d, 2, k.clone(), &mut rng, RANDOM_VALS).unwrap();
        let h = build_h(&gamma, &g, Exec::Sequential).unwrap().perturb(0);
        let failed = (1..=h.level())
            .map(|n| check_product_identity(&h, &gamma, n, DEFAULT_CAP, Exec::Sequential).unwrap())
            .any(|r| !r.pass && r.failures > 0 && !r.examples.is_empty());
        assert!(failed, "{s}");
    }
}

#[test]
fn orbit_products_match_explicit_orbits() {
    let d = dom("Zp:3,Av:2:theta");
    let k = self_valued(&d);
    let mut rng = rng_for(6);
    let gamma = StepFn::random(&d, 2, k.clone(), &mut rng, RANDOM_VALS).unwrap();
    for n in 1..=3 {
        let t = OrbitTable::new(&d, n, 2, OrbitKind::Minus, DEFAULT_CAP).unwrap();
        for (i, pt) in periodic_points(&d, n, DEFAULT_CAP).unwrap().iter().enumerate() {
            assert_eq!(&t.point(i), pt);
            let mut y = pt.to_prod(&d, 3 * n + 4);
            let mut want = k.one();
            for _ in 0..n {
                want = k.mul(&want, &gamma.eval(&y).unwrap());
                y = y.neg_phi_neg().unwrap();
            }
            assert_eq!(t.product(&gamma, i, false), want);
            assert_eq!(t.product(&gamma, i, true), want);
        }
    }
}

#[test]
fn recovered_g_satisfies_the_functional_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for s in DOMAINS {
        let d = dom(s);
        let k = self_valued(&d);
        let p = ProofParams::zero(&d);
        let f = seeded_coboundary(&d, &k, 11, 3);
        let rec = recover_g(&f, &p, 12, Exec::Parallel).unwrap();
        assert!(rec.report.pass && rec.report.residual >= 12, "{s}");
        assert!(rec.report.monotone_from(f.level() + 2));
        let prec = k.precision() as i64;
        for _ in 0..50 {
            let x = random_point(&mut rng, &d, rec.g.level() + 2);
            let lhs = k.mul(&f.eval(&x).unwrap(), &rec.g.eval(&x.phi().unwrap()).unwrap());
            let rhs = rec.g.eval(&x).unwrap();
            assert!(k.ord_diff(&lhs, &rhs).unwrap_or(rhs.val + prec) >= 12);
        }
    }
}

#[test]
fn recovery_with_nonzero_b() {
    let d = dom("Zp:3,Av:2:theta");
    let k = self_valued(&d);
    let p = ProofParams::parse(&d, "1;1").unwrap();
    let f = seeded_coboundary(&d, &k, 2, 2);
    let rec = recover_g(&f, &p, 12, Exec::Sequential).unwrap();
    assert!(rec.report.pass);
    assert_eq!(residual(&f, &rec.g).unwrap(), rec.report.residual);
}

#[test]
fn non_cocycles_are_rejected() {
    let d = dom("Av:2:theta");
    let k = self_valued(&d);
    let p = ProofParams::zero(&d);
    let f = seeded_coboundary(&d, &k, 4, 2);
    assert!(check_cocycle(&f, &p, Exec::Sequential).is_ok());
    for idx in [0, 3, f.table().len() - 1] {
        let bad = f.perturb(idx);
        assert!(matches!(check_cocycle(&bad, &p, Exec::Sequential), Err(Error::CocycleViolation { .. })));
        assert!(matches!(recover_g(&bad, &p, 12, Exec::Sequential), Err(Error::CocycleViolation { .. })));
    }
    let r = StepFn::random(&d, 2, k, &mut rng_for(1), RANDOM_VALS).unwrap();
    assert!(recover_g(&r, &p, 12, Exec::Sequential).is_err());
}

#[test]
fn minus_sign_variant_through_negation() {
    for s in DOMAINS {
        let d = dom(s);
        let k = self_valued(&d);
        let p = ProofParams::zero(&d);
        let g1 = StepFn::random(&d, 2, k.clone(), &mut rng_for(17), RANDOM_VALS).unwrap();
        // F(x) = G₁(x)/G₁(−φ(−x))
        let f = build_h(&StepFn::one(&d, k.clone()), &g1, Exec::Sequential).unwrap();
        let rec = recover_g_minus(&f, &p, 12, Exec::Sequential).unwrap();
        assert!(minus_residual(&f, &rec.g).unwrap() >= 12, "{s}");
        let direct = recover_g(&f.negate_arg(), &p, 12, Exec::Sequential).unwrap();
        assert_eq!(rec.g.negate_arg().at_level(direct.g.level()).unwrap(), direct.g);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = random_point(&mut rng, &d, rec.g.level() + 2);
            let lhs = k.mul(&f.eval(&x).unwrap(), &rec.g.eval(&x.neg_phi_neg().unwrap()).unwrap());
            let rhs = rec.g.eval(&x).unwrap();
            assert!(k.ord_diff(&lhs, &rhs).unwrap_or(i64::MAX) >= 12);
        }
    }
}

#[test]
fn recover_runs_on_all_domains() {
    for s in DOMAINS {
        let d = dom(s);
        let k = self_valued(&d);
        for seed in 0..3 {
            let run = recover_run(&d, &k, seed, 3, 12, &ProofParams::zero(&d), Exec::Parallel).unwrap();
            assert!(run.pass, "{s} seed {seed}: {run:?}");
        }
    }
}

#[test]
fn independent_value_field() {
    let d = dom("Av:2:theta");
    let k = Arc::new(ValuedField::parse("Zp:5@12").unwrap());
    let fw = forward_run(&d, &k, 1, 2, 3, 5, Exec::Parallel).unwrap();
    assert!(fw.pass);
    let rc = recover_run(&d, &k, 1, 3, 10, &ProofParams::zero(&d), Exec::Parallel).unwrap();
    assert!(rc.pass && rc.recovery.residual >= 10);
}

#[test]
fn custom_digit_sets_run_the_same_pipeline() {
    for s in ["Zp:3{0,1,-1}", "Av:2:theta{0,1+theta}"] {
        let d = dom(s);
        let k = self_valued(&d);
        assert!(forward_run(&d, &k, 5, 2, 3, 6, Exec::Parallel).unwrap().pass);
        assert!(recover_run(&d, &k, 5, 3, 12, &ProofParams::zero(&d), Exec::Parallel).unwrap().pass);
    }
    // periodic points move with the digit set
    let bal = periodic_points(&dom("Zp:3{0,1,-1}"), 1, DEFAULT_CAP).unwrap();
    let can = periodic_points(&dom("Zp:3"), 1, DEFAULT_CAP).unwrap();
    let fr = |d: &str, pts: &[vadic::local::PeriodicPoint]| -> Vec<String> {
        pts.iter().map(|p| p.label(&dom(d))).collect()
    };
    assert_ne!(fr("Zp:3{0,1,-1}", &bal), fr("Zp:3", &can));
}

#[test]
fn canonical_digit_list_matches_default() {
    let a = dom("Zp:3");
    let b = dom("Zp:3{0,1,2}");
    let k = self_valued(&a);
    let fa = forward_run(&a, &k, 9, 2, 2, 4, Exec::Sequential).unwrap();
    let fb = forward_run(&b, &k, 9, 2, 2, 4, Exec::Sequential).unwrap();
    assert_eq!(fa, fb);
}

#[test]
fn step_function_json_round_trip() {
    for s in DOMAINS {
        let d = dom(s);
        let k = self_valued(&d);
        let f = StepFn::random(&d, 2, k, &mut rng_for(1), RANDOM_VALS).unwrap();
        let j = f.to_json();
        assert_eq!(StepFn::from_json(&j).unwrap(), f);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(StepFn::from_json(&serde_json::from_str(&text).unwrap()).unwrap(), f);
    }
    let d = dom("Zp:3");
    let f = StepFn::one(&d, self_valued(&d)).at_level(1).unwrap();
    let mut j = f.to_json();
    j["table"].as_object_mut().unwrap().remove("0");
    assert!(StepFn::from_json(&j).is_err());
}

#[test]
fn runs_are_deterministic() {
    let d = dom("Zp:3,Av:2:theta");
    let k = self_valued(&d);
    let a = recover_run(&d, &k, 7, 3, 12, &ProofParams::zero(&d), Exec::Parallel).unwrap();
    let b = recover_run(&d, &k, 7, 3, 12, &ProofParams::zero(&d), Exec::Sequential).unwrap();
    assert_eq!(a, b);
}
