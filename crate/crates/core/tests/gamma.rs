use std::sync::Arc;

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vadic::algebra::{enumerate_monic, is_irreducible, parse_poly, parse_ratfunc, Poly};
use vadic::gamma::*;
use vadic::local::{Component, FracElem, Integral, LocalElem};
use vadic::Error;

fn poly(p: u32, s: &str) -> Poly {
    parse_poly(p, s).unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn reduce(f: &Poly, v: &Poly, n: usize) -> Poly {
    f.rem(&v.pow(n as u32)).unwrap()
}

/// ord_v(a − b), capped at `cap`.
fn ord_diff(a: &Poly, b: &Poly, v: &Poly, cap: u32) -> u32 {
    a.sub(b).valuation(v).map_or(cap, |k| k.min(cap))
}

/// ord_f by repeated division.
fn ord_by_division(mut g: Poly, f: &Poly) -> u64 {
    let mut k = 0;
    loop {
        let (s, r) = g.divmod(f).unwrap();
        if !r.is_zero() {
            return k;
        }
        g = s;
        k += 1;
    }
}

/// −∏ a over monic a of degree i with v ∤ a, without reduction.
fn ari_factor_exact(v: &Poly, i: usize) -> Poly {
    enumerate_monic(v.p(), i)
        .filter(|a| !a.rem(v).unwrap().is_zero())
        .fold(Poly::one(v.p()), |acc, a| acc.mul(&a))
        .neg()
}

fn random_av(rng: &mut ChaCha8Rng, comp: &Arc<Component>, n: usize) -> LocalElem {
    let r = comp.radix() as u32;
    LocalElem::from_digits(comp.clone(), (0..n).map(|_| rng.gen_range(0..r)).collect()).unwrap()
}

#[test]
fn flat_examples() {
    let g = VGamma::new(Poly::theta(2)).unwrap();
    let at = g.av().clone();
    let th = LocalElem::from_integral(at.clone(), &Integral::Poly(Poly::theta(2)), 5);
    let one = LocalElem::from_integral(at.clone(), &Integral::Poly(Poly::one(2)), 5);
    assert_eq!(flat(&th).unwrap(), one);
    let u = LocalElem::from_integral(at.clone(), &Integral::Poly(poly(2, "theta+1")), 5);
    assert_eq!(flat(&u).unwrap(), u);
    assert_eq!(flat(&LocalElem::zero(at.clone(), 5)).unwrap(), one);
    assert_eq!(flat(&LocalElem::zero(at, 0)), Err(Error::PrecisionExhausted));
}

#[test]
fn carlitz_factorial_examples() {
    assert!(carlitz_factorial(2, 0).is_one());
    assert_eq!(carlitz_factorial(2, 3), poly(2, "theta^2+theta"));
    assert_eq!(carlitz_factorial(2, 3).to_string(), "0,1,1");
    assert!(carlitz_factorial(3, 1).is_one());
    // y = 4 = 1·3 + 1 over F_3: D_0·D_1 = θ(θ+1)(θ+2)
    assert_eq!(carlitz_factorial(3, 4), poly(3, "theta^3-theta"));
}

#[test]
fn sinnott_examples() {
    assert_eq!(sinnott_valuation(0, &Poly::theta(2)).unwrap(), 0);
    assert_eq!(sinnott_valuation(3, &Poly::theta(2)).unwrap(), 1);
    assert_eq!(sinnott_valuation(3, &poly(2, "theta^2+theta+1")).unwrap(), 0);
    assert_eq!(sinnott_valuation(3, &poly(2, "theta^2+1")), Err(Error::Reducible));
}

#[test]
fn sinnott_matches_exact_valuation() {
    for p in [2, 3] {
        let primes: Vec<Poly> =
            (1..=3).flat_map(|d| enumerate_monic(p, d)).filter(|f| is_irreducible(f).unwrap()).collect();
        for y in 0..=200u64 {
            let fact = carlitz_factorial(p, y);
            for f in &primes {
                assert_eq!(sinnott_valuation(y, f).unwrap(), ord_by_division(fact.clone(), f), "q={p} y={y} f={f:?}");
            }
        }
    }
}

#[test]
fn global_gamma_poles_and_values() {
    let x = parse_ratfunc(2, "0").unwrap();
    assert_eq!(gamma_geo_global(&x, 3), GlobalGamma::Pole);
    assert_eq!(gamma_geo_global(&parse_ratfunc(2, "theta").unwrap(), 3), GlobalGamma::Pole);
    assert_eq!(gamma_geo_global(&parse_ratfunc(3, "-theta-1").unwrap(), 3), GlobalGamma::Pole);
    let x = parse_ratfunc(2, "1/theta").unwrap();
    let GlobalGamma::Value { partial: a, tail_degree_bound, .. } = gamma_geo_global(&x, 3) else { panic!("pole") };
    let GlobalGamma::Value { partial: b, .. } = gamma_geo_global(&x, 4) else { panic!("pole") };
    assert_eq!(tail_degree_bound, -5);
    // the extra degree-4 factors are 1 + O(|θ|^{−5})
    let ratio = b.div(&a).unwrap().sub(&parse_ratfunc(2, "1").unwrap());
    assert!(ratio.degree().unwrap() <= tail_degree_bound);
}

#[test]
fn ari_small_arguments() {
    let g = VGamma::new(Poly::theta(2)).unwrap();
    assert!(g.ari_rat(&rat(1, 1), 10).unwrap().poly().is_one());
    assert!(g.ari_rat(&rat(2, 1), 10).unwrap().poly().is_one());
    let g3 = VGamma::new(Poly::theta(3)).unwrap();
    assert_eq!(g3.ari_rat(&rat(2, 1), 10).unwrap().poly(), Poly::constant(3, 2));
}

#[test]
fn ari_at_naturals_matches_exact_product() {
    for (p, v) in [(2, "theta"), (3, "theta"), (2, "theta^2+theta+1")] {
        let v = poly(p, v);
        let g = VGamma::new(v.clone()).unwrap();
        for y in 0..60u64 {
            let mut want = Poly::one(p);
            let (mut t, mut i) = (y, 0);
            while t > 0 {
                want = want.mul(&ari_factor_exact(&v, i).pow((t % p as u64) as u32));
                t /= p as u64;
                i += 1;
            }
            let got = g.ari_rat(&rat(y as i64 + 1, 1), 12).unwrap();
            assert_eq!(got.poly(), reduce(&want, &v, 12), "v={v:?} y={y}");
        }
    }
}

#[test]
fn ari_digit_locality() {
    let v = Poly::theta(2);
    let g = VGamma::new(v.clone()).unwrap();
    let n = 20;
    let tails: Vec<u32> =
        (0..12).map(|i| ari_factor_exact(&v, i).sub(&Poly::one(2)).valuation(&v).unwrap_or(99)).collect();
    for m in 1..10 {
        let bound = tails[m..].iter().copied().min().unwrap().min(n as u32);
        for y in [3i64, 5, 10, 17] {
            let a = g.ari_rat(&rat(y + 1, 1), n).unwrap().poly();
            let b = g.ari_rat(&rat(y + 1 + (1 << m), 1), n).unwrap().poly();
            assert!(ord_diff(&a, &b, &v, n as u32) >= bound, "m={m} y={y}");
        }
    }
}

#[test]
fn ari_needs_enough_digits() {
    let g = VGamma::new(Poly::theta(3)).unwrap();
    let x = LocalElem::digits_of(g.zp().clone(), &FracElem::rat(1, 2), 2).unwrap();
    assert!(matches!(g.ari(&x, 20), Err(Error::InsufficientPrecision { .. })));
}

#[test]
fn geo_and_two_examples() {
    let v = Poly::theta(2);
    let g = VGamma::new(v.clone()).unwrap();
    assert!(g.geo_frac(&parse_ratfunc(2, "0").unwrap(), 15).unwrap().poly().is_one());
    // x = v: x^♭ = 1, the same as x = 0 apart from the (x+a)^♭ factors
    let at_v = g.geo_frac(&parse_ratfunc(2, "theta").unwrap(), 15).unwrap();
    assert_eq!(at_v.value.valuation(), 0);
    let x = parse_ratfunc(2, "1/(theta+1)").unwrap();
    let a = g.geo_frac(&x, 30).unwrap();
    let b = g.geo_frac(&x, 40).unwrap();
    assert_eq!(reduce(&b.poly(), &v, 30), a.poly());
    assert!(a.certificate.modulus >= 30 && a.certificate.tail_valuations.len() == g.rule().window);
    // y = 0: 1/x^♭ = θ + 1
    let two = g.two_frac(&x, &rat(1, 1), 20).unwrap();
    assert_eq!(two.poly(), poly(2, "theta+1"));
    for arg in [rat(1, 1), rat(0, 1), rat(2, 3)] {
        let z = g.two_frac(&parse_ratfunc(2, "0").unwrap(), &arg, 12).unwrap();
        assert_eq!(z.value.valuation(), 0);
    }
    assert!(g.two_frac(&parse_ratfunc(2, "0").unwrap(), &rat(1, 1), 12).unwrap().poly().is_one());
}

#[test]
fn geo_rejects_short_input() {
    let g = VGamma::new(Poly::theta(2)).unwrap();
    let x = LocalElem::digits_of(g.av().clone(), &FracElem::Fun(parse_ratfunc(2, "1").unwrap()), 30).unwrap();
    assert_eq!(g.geo(&x, 30), Err(Error::InsufficientPrecision { needed: 32, available: 30 }));
    assert!(g.geo(&x, 28).is_ok());
}

#[test]
fn precision_coherence_and_unit_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, v) in [(2, "theta"), (3, "theta"), (2, "theta^2+theta+1")] {
        let v = poly(p, v);
        let g = VGamma::new(v.clone()).unwrap();
        let (n, m) = (8, 18);
        for _ in 0..100 {
            let x = random_av(&mut rng, g.av(), m + 2);
            let y = random_av(&mut rng, g.zp(), 64);
            let pairs = [
                (g.ari(&y, n).unwrap(), g.ari(&y, m).unwrap()),
                (g.geo(&x, n).unwrap(), g.geo(&x, m).unwrap()),
                (g.two(&x, &y, n).unwrap(), g.two(&x, &y, m).unwrap()),
            ];
            for (lo, hi) in pairs {
                assert_eq!(reduce(&hi.poly(), &v, n), lo.poly());
                assert_eq!(lo.value.valuation(), 0);
                assert_eq!(hi.value.valuation(), 0);
            }
        }
    }
}

#[test]
fn two_variable_specializes_to_geo() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in [2u32, 3] {
        let v = Poly::theta(p);
        let g = VGamma::new(v.clone()).unwrap();
        let arg = rat(1, 1) - rat(1, p as i64 - 1);
        for _ in 0..50 {
            let x = random_av(&mut rng, g.av(), 32);
            let y = LocalElem::digits_of(g.zp().clone(), &FracElem::Rat(arg.clone()), 64).unwrap();
            assert!(y
                .sub(&LocalElem::digits_of(g.zp().clone(), &FracElem::rat(1, 1), 64).unwrap())
                .unwrap()
                .digits()
                .iter()
                .all(|&d| d == 1));
            assert_eq!(g.two(&x, &y, 30).unwrap().poly(), g.geo(&x, 30).unwrap().poly());
        }
    }
}

#[test]
fn morita_examples() {
    assert_eq!(morita_at_integer(3, 1, 5).unwrap().value(), Integral::Int(BigInt::from(242)));
    let g3 = morita_at_integer(3, 3, 1).unwrap();
    assert_eq!(g3.value(), Integral::Int(BigInt::from(1)));
    assert!(matches!(morita_at_integer(2, 3, 4), Err(Error::Unsupported(..))));
}

#[test]
fn morita_continuity_and_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let int = |x: LocalElem| match x.value() {
        Integral::Int(i) => i,
        Integral::Poly(_) => unreachable!(),
    };
    for _ in 0..50 {
        let k = rng.gen_range(1..=4usize);
        let n = rng.gen_range(1..500u64);
        let a = int(morita_at_integer(5, n, k).unwrap());
        let b = int(morita_at_integer(5, n + 5u64.pow(k as u32), 6).unwrap()) % BigInt::from(5u64.pow(k as u32));
        assert_eq!(a, b, "n={n} k={k}");
        // Γ_p(n+1) = −n·Γ_p(n) for p ∤ n
        if n % 5 != 0 {
            let m = BigInt::from(5u64.pow(6));
            let lhs = int(morita_at_integer(5, n + 1, 6).unwrap());
            let rhs = int(morita_at_integer(5, n, 6).unwrap());
            let rhs = ((-(BigInt::from(n)) * rhs) % &m + &m) % &m;
            assert_eq!(lhs, rhs);
        }
    }
}
