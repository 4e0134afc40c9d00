//! End-to-end acceptance suite. Each test covers one criterion and prints a
//! single PASS line; a failing assertion marks the criterion failed.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;

use pblock::arith::{
    compare_to_threshold, is_prime, is_square_plus_one, multiplicative_order, BoundExponent,
    PrimePower, ThresholdVerdict,
};
use pblock::blocks::{gl_label_count_oracle, k_b0_gl, k_b0_symmetric, linear_params, orbit_lb_exceptional};
use pblock::arith::cyclotomic_value;
use pblock::orders::{generic_order, LieFamily, Series};
use pblock::partition::{count_principal_core_partitions, k_tuples, partition_count};
use pblock::reflection::{relative_weyl, tabulated_pairs};
use pblock_cli::{defining_sweep, records_to_jsonl, run_sweep, FamilySel, SweepOpts};

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn pass(n: u32, what: &str, t: Instant) {
    println!("ACCEPTANCE {n}: PASS ({what}, {:.2}s)", t.elapsed().as_secs_f64());
}

#[test]
fn criterion_1_paper_constants() {
    let t = Instant::now();
    for p in (2u64..=200).filter(|&p| is_prime(p)) {
        assert_eq!(k_tuples(p, 1).unwrap(), big(p), "k(p,1) at p={p}");
    }
    assert_eq!(k_tuples(2, 2).unwrap(), big(5));
    assert_eq!(k_tuples(2, 4).unwrap(), big(20));

    let g2 = LieFamily::new(Series::G2, 2).unwrap();
    let (levi, torus, _) = relative_weyl(g2, 1).unwrap();
    assert_eq!((levi.class_count, torus.order), (6, 12));

    let e6 = LieFamily::new(Series::E6, 6).unwrap();
    let (levi, torus, _) = relative_weyl(e6, 1).unwrap();
    assert_eq!((levi.order, levi.class_count), (51840, 25));
    assert_eq!(6 * torus.order, 311_040); // d*g = 3*2 at q = 1 mod 3

    for fam in [e6, LieFamily::new(Series::E7, 7).unwrap()] {
        let (levi, _, _) = relative_weyl(fam, 4).unwrap();
        assert_eq!((levi.order, levi.class_count), (96, 16));
    }

    let e8 = LieFamily::new(Series::E8, 8).unwrap();
    for e in [5, 10] {
        let (levi, _, _) = relative_weyl(e8, e).unwrap();
        assert_eq!((levi.order, levi.class_count), (600, 45));
    }

    let f4 = LieFamily::new(Series::F4, 4).unwrap();
    let (levi, _, _) = relative_weyl(f4, 3).unwrap();
    assert_eq!((levi.order, levi.class_count, levi.label.as_str()), (72, 21, "G5"));

    assert!(t.elapsed().as_secs() < 1);
    pass(1, "paper constants", t);
}

#[test]
fn criterion_2_symmetric_oracle() {
    let t = Instant::now();
    let mut checked = 0;
    for (n_max, ps) in [(30u64, vec![11u64, 13]), (14, vec![2, 3, 5, 7])] {
        for p in ps {
            for n in p..=n_max {
                assert_eq!(
                    k_b0_symmetric(n, p).unwrap().value,
                    count_principal_core_partitions(n, p as u32).unwrap(),
                    "n={n} p={p}"
                );
                checked += 1;
            }
        }
    }
    assert!(t.elapsed().as_secs() < 30);
    pass(2, &format!("symmetric oracle, {checked} cells"), t);
}

#[test]
fn criterion_3_gl_label_oracle() {
    let t = Instant::now();
    let mut checked = 0;
    let mut e_primes_p11 = BTreeSet::new();
    for &(q, eps) in &[
        (2u64, 1),
        (3, 1),
        (4, 1),
        (5, 1),
        (8, 1),
        (23, 1),
        (32, 1),
        (2, -1),
        (3, -1),
        (4, -1),
    ] {
        for &p in &[11u64, 13, 17, 31] {
            let qq = PrimePower::new(q).unwrap();
            if p == qq.base {
                continue;
            }
            for w in 1u64..=3 {
                let Ok(probe) = linear_params(2, qq, eps, p) else { continue };
                let n = probe.e_prime * w;
                if n < 2 || n > 36 || probe.e_prime * w > 40 {
                    continue;
                }
                let lp = linear_params(n, qq, eps, p).unwrap();
                if lp.label_count > big(12) {
                    continue;
                }
                let Ok(formula) = k_b0_gl(n, qq, eps, p) else { continue };
                let oracle = gl_label_count_oracle(&lp, lp.w).unwrap();
                assert_eq!(formula.value, oracle, "n={n} q={q} eps={eps} p={p}");
                checked += 1;
                if p == 11 {
                    e_primes_p11.insert(lp.e_prime);
                }
            }
        }
    }
    assert!(checked >= 20, "only {checked} oracle instances");
    for e in [1u64, 2, 5, 10] {
        assert!(e_primes_p11.contains(&e), "no p=11 instance with e'={e}");
    }
    assert!(t.elapsed().as_secs() < 60);
    pass(3, &format!("GL label oracle, {checked} cells"), t);
}

#[test]
fn criterion_4_bound_sweep() {
    let t = Instant::now();
    let mut opts = SweepOpts::defaults_for(vec![
        FamilySel::Symmetric,
        FamilySel::Linear,
        FamilySel::Unitary,
        FamilySel::Lie(Series::B),
        FamilySel::Lie(Series::C),
        FamilySel::Lie(Series::D),
        FamilySel::Lie(Series::TwoD),
    ]);
    opts.p_max = 200;
    let records = run_sweep(&opts, 4).unwrap();
    let mut n_cells = 0;
    let mut n_equalities = 0;
    for r in &records {
        assert_ne!(r.verdict, "Fail", "Fail at {r:?}");
        if r.family == "symmetric" && r.p > 59 {
            continue;
        }
        n_cells += 1;
        if r.verdict == "Equality" {
            n_equalities += 1;
            assert!(is_square_plus_one(r.p).is_some(), "equality at p={}", r.p);
            let d = r.diagnostics.as_ref().expect("equality diagnostics");
            assert!(d["sylow_shape"].starts_with("Cyclic"), "{r:?}");
        }
    }
    // The known equality family includes GL4(4)/p=17 with k = 8.
    assert!(records.iter().any(|r| {
        r.family == "linear"
            && r.p == 17
            && r.params.get("q").map(String::as_str) == Some("4")
            && r.params.get("n").map(String::as_str) == Some("4")
            && r.verdict == "Equality"
            && r.value.as_deref() == Some("8")
    }));
    assert!(n_equalities > 0);
    assert!(t.elapsed().as_secs() < 300);
    pass(4, &format!("bound sweep, {n_cells} cells, {n_equalities} equalities"), t);
}

#[test]
fn criterion_5_exceptional_sweep() {
    let t = Instant::now();
    let exceptional: Vec<LieFamily> = tabulated_pairs()
        .iter()
        .map(|&(s, _)| LieFamily::new(s, s.fixed_rank().unwrap()).unwrap())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let primes: Vec<u64> = (11u64..=10_000).filter(|&p| is_prime(p)).collect();
    let mut checked = 0;
    for family in exceptional {
        for q in 2u64..=100 {
            let Ok(qq) = PrimePower::new(q) else { continue };
            let Ok(go) = generic_order(family) else { continue };
            let Ok(order) = go.evaluate(qq) else { continue };
            for &p in &primes {
                if p == qq.base || !(&order % p).is_zero() {
                    continue;
                }
                let Ok(r) = orbit_lb_exceptional(family, qq, p) else {
                    continue;
                };
                let k: u32 = r.bound.parameters["k"].parse().unwrap();
                let exp = if k >= 3 {
                    BoundExponent::Square
                } else {
                    BoundExponent::Fourth
                };
                let value = r.bound.value.clone().max(r.rougher.clone());
                let verdict = compare_to_threshold(&value, p, exp);
                assert_ne!(
                    verdict,
                    ThresholdVerdict::Fail,
                    "{family}({q}) p={p} k={k} value={value}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 500, "only {checked} exceptional cells");
    assert!(t.elapsed().as_secs() < 120);
    pass(5, &format!("exceptional orbit bounds, {checked} cells"), t);
}

#[test]
fn criterion_6_section4_claims() {
    let t = Instant::now();
    // p | Phi_d(q) iff d = e_p(q) * p^i, over the stated grid.
    for q in 2u64..=50 {
        for p in (3u64..=97).filter(|&p| is_prime(p)) {
            if q % p == 0 {
                continue;
            }
            let e = multiplicative_order(q, p).unwrap();
            for d in 1u64..=60 {
                let expected = {
                    let mut m = d;
                    while m % p == 0 {
                        m /= p;
                    }
                    m == e
                };
                let divides = (cyclotomic_value(d as u32, q) % p).is_zero();
                assert_eq!(divides, expected, "q={q} p={p} d={d}");
            }
        }
    }
    // check_weight_claim on every non-abelian cell of the desk grid.
    let mut families = Vec::new();
    for r in 1..=12 {
        families.push(LieFamily::new(Series::A, r).unwrap());
    }
    for r in 2..=12 {
        families.push(LieFamily::new(Series::TwoA, r).unwrap());
        families.push(LieFamily::new(Series::B, r).unwrap());
        families.push(LieFamily::new(Series::C, r).unwrap());
    }
    for r in 4..=12 {
        families.push(LieFamily::new(Series::D, r).unwrap());
        families.push(LieFamily::new(Series::TwoD, r).unwrap());
    }
    let mut nonabelian = 0;
    for &family in &families {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let qq = PrimePower::new(q).unwrap();
            for p in [3u64, 5, 7, 11, 13] {
                if p == qq.base {
                    continue;
                }
                if matches!(
                    pblock::orders::sylow_shape(family, qq, p),
                    Ok(pblock::orders::SylowShape::NonAbelian { .. })
                ) {
                    assert!(
                        pblock::orders::check_weight_claim(family, qq, p).unwrap(),
                        "{family}({q}) p={p}"
                    );
                    nonabelian += 1;
                }
            }
        }
    }
    assert!(nonabelian > 50);
    // pi(p)/6 > 2 sqrt(p-1) for 11 <= p <= 499.
    for p in (11u64..=499).filter(|&p| is_prime(p)) {
        let sixth = (partition_count(p) + big(5)) / big(6);
        assert_eq!(
            compare_to_threshold(&sixth, p, BoundExponent::Square),
            ThresholdVerdict::StrictPass,
            "p={p}"
        );
    }
    assert!(t.elapsed().as_secs() < 60);
    pass(6, &format!("section-4 claims, {nonabelian} non-abelian cells"), t);
}

#[test]
fn criterion_7_defining_characteristic() {
    let t = Instant::now();
    let expected: BTreeSet<(String, String)> = include_str!("fixtures/defining_failures.txt")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split_whitespace();
            (it.next().unwrap().to_string(), it.next().unwrap().to_string())
        })
        .collect();
    let records = defining_sweep(32).unwrap();
    let mut failures = BTreeSet::new();
    for r in &records {
        if r.verdict == "Fail" {
            failures.insert((r.family.clone(), r.params["q"].clone()));
        }
    }
    assert_eq!(failures, expected, "defining-characteristic failure set drifted");
    assert!(t.elapsed().as_secs() < 60);
    pass(7, &format!("defining char, {} expected failures", failures.len()), t);
}

#[test]
fn criterion_8_amgm_chain() {
    let t = Instant::now();
    // (e'^2 + p^a - 1)^2 >= 4 e'^2 (p^a - 1), exact integers.
    for e in 1u128..=50 {
        let e2 = e * e;
        for pa in 2u128..=1_000_000 {
            let lhs = (e2 + pa - 1) * (e2 + pa - 1);
            let rhs = 4 * e2 * (pa - 1);
            assert!(lhs >= rhs, "e'={e} p^a={pa}");
        }
    }
    assert!(t.elapsed().as_secs() < 10);
    pass(8, "AM-GM chain", t);
}

#[test]
fn criterion_9_determinism() {
    let t = Instant::now();
    let mut opts = SweepOpts::defaults_for(vec![
        FamilySel::Symmetric,
        FamilySel::Linear,
        FamilySel::Lie(Series::B),
        FamilySel::Lie(Series::E8),
    ]);
    opts.p_max = 100;
    let baseline = records_to_jsonl(&run_sweep(&opts, 1).unwrap());
    for degree in [2usize, 4, 8] {
        let other = records_to_jsonl(&run_sweep(&opts, degree).unwrap());
        assert_eq!(baseline, other, "parallel degree {degree} changed the report");
    }
    pass(9, "deterministic reports", t);
}
