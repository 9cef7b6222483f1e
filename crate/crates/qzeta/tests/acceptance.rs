//! Acceptance gate: one test per criterion, each printing a PASS or FAIL
//! line (run with `--nocapture` to see them).  Criteria with a time budget
//! assert against wall-clock time of the whole loop.

use qzeta::cli::{parse_germ, parse_space};
use qzeta::qspace::{min_power, rat, FactoredForm, Germ, QuotientType, Rat};
use qzeta::resolve::{
    curve_strata_raw, oracle_quasihomogeneous, oracle_semigroup_mu, pipeline_brieskorn,
    pipeline_curve, pipeline_two_pairs, pipeline_yomdin, two_pairs_semigroup_generators,
};
use qzeta::strata::{report, zeta_from_strata, ReportOptions, StrataSet, Stratum};
use qzeta::zeta::{Convention, CyclotomicProduct, IntPolynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

/// Guard that prints the criterion verdict: PASS on success, FAIL when the
/// test unwinds before `pass` is reached.
struct Criterion {
    number: u32,
    title: &'static str,
    started: Instant,
    budget: Option<Duration>,
    passed: bool,
}

impl Criterion {
    fn start(number: u32, title: &'static str) -> Self {
        Criterion {
            number,
            title,
            started: Instant::now(),
            budget: None,
            passed: false,
        }
    }

    fn with_budget_secs(mut self, secs: u64) -> Self {
        self.budget = Some(Duration::from_secs(secs));
        self
    }

    fn pass(mut self) {
        let elapsed = self.started.elapsed();
        if let Some(budget) = self.budget {
            assert!(
                elapsed <= budget,
                "criterion {} overran its {:?} budget: took {:?}",
                self.number,
                budget,
                elapsed
            );
        }
        self.passed = true;
        println!(
            "PASS criterion {:2}: {} ({:.2?})",
            self.number, self.title, elapsed
        );
    }
}

impl Drop for Criterion {
    fn drop(&mut self) {
        if !self.passed {
            println!("FAIL criterion {:2}: {}", self.number, self.title);
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn delta_from(factors: &[(i64, i64)]) -> CyclotomicProduct {
    CyclotomicProduct::from_factors(
        Convention::Delta,
        factors.iter().map(|&(m, e)| (rat(m, 1), e)),
    )
    .expect("valid factors")
}

/// The germ x^p + y^q on the trivial quotient.
fn binomial(p: i64, q: i64) -> Germ {
    let space = QuotientType::smooth(2);
    parse_germ(&format!("(x^{p}+y^{q})"), 2)
        .expect("germ parses")
        .to_germ(&space)
        .expect("germ builds")
}

fn curve_delta(germ: &Germ) -> CyclotomicProduct {
    let result = pipeline_curve(germ).expect("pipeline succeeds");
    zeta_from_strata(&result.strata)
        .to_delta(result.strata.n())
        .expect("integer exponents")
}

#[test]
fn criterion_01_one_pair_curve_closed_forms() {
    let c = Criterion::start(1, "one-pair curve characteristic polynomials, 2..=20").with_budget_secs(5);
    for p in 2..=20i64 {
        for q in 2..=20i64 {
            let e = gcd(p, q);
            let expected = delta_from(&[(1, 1), (p * q / e, e), (p, -1), (q, -1)]);
            let result = pipeline_curve(&binomial(p, q)).unwrap();
            let delta = zeta_from_strata(&result.strata).to_delta(1).unwrap();
            assert_eq!(delta, expected, "strata route for ({p},{q})");
            let closed = result.closed_form.as_ref().expect("closed form present");
            assert_eq!(*closed, expected, "closed form for ({p},{q})");
            assert_eq!(
                delta.degree(),
                Rat::from_integer((p - 1) * (q - 1)),
                "degree for ({p},{q})"
            );
        }
    }
    c.pass();
}

#[test]
fn criterion_02_eigenvalue_oracle() {
    let c = Criterion::start(2, "expanded roots match the quasi-homogeneous oracle")
        .with_budget_secs(30);
    for p in 2..=12i64 {
        for q in 2..=12i64 {
            let delta = curve_delta(&binomial(p, q));
            let expanded = delta.expand().unwrap();
            let roots = delta.eigenvalue_multiset().unwrap();
            let total: usize = roots.values().map(|&m| m as usize).sum();
            assert_eq!(expanded.degree(), Some(total), "degree vs count ({p},{q})");
            assert_eq!(
                roots,
                oracle_quasihomogeneous(&[p, q]).unwrap(),
                "roots for ({p},{q})"
            );
        }
    }
    for p in 2..=6i64 {
        for q in 2..=6i64 {
            for r in 2..=6i64 {
                let result = pipeline_brieskorn(p, q, r).unwrap();
                let delta = zeta_from_strata(&result.strata).to_delta(2).unwrap();
                let expanded = delta.expand().unwrap();
                let roots = delta.eigenvalue_multiset().unwrap();
                let total: usize = roots.values().map(|&m| m as usize).sum();
                assert_eq!(expanded.degree(), Some(total), "degree vs count ({p},{q},{r})");
                assert_eq!(
                    roots,
                    oracle_quasihomogeneous(&[p, q, r]).unwrap(),
                    "roots for ({p},{q},{r})"
                );
            }
        }
    }
    c.pass();
}

#[test]
fn criterion_03_specific_polynomials() {
    let c = Criterion::start(3, "pinned characteristic polynomials");
    let cusp = curve_delta(&binomial(2, 3)).expand().unwrap();
    assert_eq!(cusp, IntPolynomial::from_i64_coeffs(&[1, -1, 1]));
    let node = curve_delta(&binomial(2, 2)).expand().unwrap();
    assert_eq!(node, IntPolynomial::from_i64_coeffs(&[-1, 1]));
    let b222 = pipeline_brieskorn(2, 2, 2).unwrap();
    let b222 = zeta_from_strata(&b222.strata)
        .to_delta(2)
        .unwrap()
        .expand()
        .unwrap();
    assert_eq!(b222, IntPolynomial::from_i64_coeffs(&[1, 1]));
    let b235 = pipeline_brieskorn(2, 3, 5).unwrap();
    let b235 = zeta_from_strata(&b235.strata).to_delta(2).unwrap();
    assert_eq!(b235.degree(), rat(8, 1));
    assert_eq!(b235.expand().unwrap().degree(), Some(8));
    c.pass();
}

#[test]
fn criterion_04_two_puiseux_pairs() {
    let c = Criterion::start(4, "two-pair plane branches match the semigroup oracle")
        .with_budget_secs(10);
    let result = pipeline_two_pairs(3, 2, 5, 3).unwrap();
    let delta = zeta_from_strata(&result.strata).to_delta(1).unwrap();
    let expected = delta_from(&[(1, 1), (18, 1), (57, 1), (9, -1), (6, -1), (19, -1)]);
    assert_eq!(delta, expected);
    assert_eq!(result.closed_form.as_ref(), Some(&expected));
    assert_eq!(delta.degree(), rat(42, 1));
    assert_eq!(oracle_semigroup_mu(&[6, 9, 19]).unwrap(), 42);

    let mut checked = 0usize;
    'outer: for p1 in 2..=9i64 {
        for q1 in 2..=5i64 {
            for p2 in 2..=40i64 {
                for q2 in 2..=5i64 {
                    let gens = match two_pairs_semigroup_generators(p1, q1, p2, q2) {
                        Ok(g) => g,
                        Err(_) => continue,
                    };
                    let result = pipeline_two_pairs(p1, q1, p2, q2).unwrap();
                    let delta = zeta_from_strata(&result.strata).to_delta(1).unwrap();
                    let mu = oracle_semigroup_mu(&gens).unwrap();
                    assert_eq!(
                        delta.degree(),
                        Rat::from_integer(mu as i64),
                        "tuple ({p1},{q1},{p2},{q2}) with generators {gens:?}"
                    );
                    checked += 1;
                    if checked >= 25 {
                        break 'outer;
                    }
                }
            }
        }
    }
    assert!(checked >= 20, "only {checked} valid tuples swept");
    c.pass();
}

#[test]
fn criterion_05_rational_milnor_table() {
    let c = Criterion::start(5, "rational Milnor numbers of monomial-times-cusp germs");
    let rows: &[(&str, &str, Rat)] = &[
        ("X(6;3,2)", "x^2 y^3 (x^2+y^3)", rat(4, 1)),
        ("C^2", "x y (x^2+y^3)", rat(12, 1)),
        ("X(6;3,2)", "x y (x^2+y^3)", rat(17, 6)),
    ];
    for (space_text, germ_text, expected_mu) in rows {
        let space = parse_space(space_text).unwrap();
        let germ = parse_germ(germ_text, 2).unwrap().to_germ(&space).unwrap();
        let result = pipeline_curve(&germ).unwrap();
        let rep = report(&result.strata, &ReportOptions::default());
        assert_eq!(rep.mu, *expected_mu, "mu of {germ_text} on {space_text}");
    }
    c.pass();
}

#[test]
fn criterion_06_yomdin_series() {
    let c = Criterion::start(6, "series germs: strata route equals twist route");
    let result = pipeline_yomdin(3, 1, 2, 3, 1).unwrap();
    let delta = zeta_from_strata(&result.strata).to_delta(2).unwrap();
    // (t^2 + t + 1)(t^8 - t^4 + 1), ascending coefficients.
    assert_eq!(
        delta.expand().unwrap(),
        IntPolynomial::from_i64_coeffs(&[1, 1, 1, 0, -1, -1, -1, 0, 1, 1, 1])
    );
    assert_eq!(delta.degree(), rat(10, 1));
    assert_eq!(result.closed_form.as_ref(), Some(&delta));

    for m in 1..=4i64 {
        for k in 1..=4i64 {
            for &(p, q) in &[(2i64, 3i64), (2, 5), (3, 4)] {
                for chi in -2..=3i64 {
                    let result = pipeline_yomdin(m, k, p, q, chi).unwrap();
                    let strata_route = zeta_from_strata(&result.strata).to_delta(2).unwrap();
                    assert_eq!(
                        result.closed_form.as_ref(),
                        Some(&strata_route),
                        "grid point m={m} k={k} p={p} q={q} chi={chi}"
                    );
                }
            }
        }
    }
    c.pass();
}

#[test]
fn criterion_07_series_identity_randomized() {
    let c = Criterion::start(7, "exponential series identity on 200 random strata sets");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for case in 0..200 {
        let count = rng.gen_range(1..=6);
        let strata: Vec<Stratum> = (0..count)
            .map(|_| {
                Stratum::new(
                    rat(rng.gen_range(1..=40), 1),
                    1,
                    rng.gen_range(-5..=5),
                )
                .unwrap()
            })
            .collect();
        let set = StrataSet::new(rng.gen_range(1..=3), strata).unwrap();
        let z = zeta_from_strata(&set);
        assert!(z.series_check(100).unwrap(), "case {case}: {z}");
    }
    c.pass();
}

#[test]
fn criterion_08_character_order_cross_check() {
    let c = Criterion::start(8, "lcm formula equals character enumeration on 100 random types");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut done = 0;
    while done < 100 {
        let r = rng.gen_range(1..=2);
        let n = rng.gen_range(2..=3usize);
        let d: Vec<i64> = (0..r).map(|_| rng.gen_range(1..=8)).collect();
        let rows: Vec<Vec<i64>> = d
            .iter()
            .map(|&di| (0..n).map(|_| rng.gen_range(0..di)).collect())
            .collect();
        let q = match QuotientType::new(d, rows) {
            Ok(q) => q,
            Err(_) => continue,
        };
        let group = match q.group() {
            Ok(g) => g,
            Err(_) => continue,
        };
        for j in 0..q.dim() {
            assert_eq!(q.ell(j), group.character_order(j), "type {q}, coordinate {j}");
        }
        done += 1;
    }
    c.pass();
}

#[test]
fn criterion_09_route_independence() {
    let c = Criterion::start(9, "normalized and raw blow-up routes agree, 2..=12");
    for p in 2..=12i64 {
        for q in 2..=12i64 {
            let germ = binomial(p, q);
            let normalized = pipeline_curve(&germ).unwrap();
            let raw = curve_strata_raw(&germ, (q, p)).unwrap();
            assert_eq!(
                zeta_from_strata(&normalized.strata).to_delta(1).unwrap(),
                zeta_from_strata(&raw.strata).to_delta(1).unwrap(),
                "routes differ for ({p},{q})"
            );
        }
    }
    c.pass();
}

/// f^k through the factored form: exponents and factor powers scale by k.
fn germ_power(f: &Germ, k: u32) -> Germ {
    let form = f.factored().expect("factored form available");
    let scaled = FactoredForm {
        monomial: form
            .monomial
            .iter()
            .map(|e| *e * Rat::from_integer(k as i64))
            .collect(),
        factors: form
            .factors
            .iter()
            .map(|(poly, power)| (poly.clone(), power * k))
            .collect(),
    };
    Germ::from_factored(f.ambient().clone(), scaled).expect("scaled germ builds")
}

#[test]
fn criterion_10_power_independence() {
    let c = Criterion::start(10, "invariants of f recovered from any valid power f^k");
    let cases: &[(&str, &str, u32)] = &[
        ("X(6;3,2)", "x^2 y^3 (x^2+y^3)", 1),
        ("C^2", "x y (x^2+y^3)", 1),
        ("X(6;3,2)", "x y (x^2+y^3)", 6),
    ];
    for (space_text, germ_text, k0) in cases {
        let space = parse_space(space_text).unwrap();
        let f = parse_germ(germ_text, 2).unwrap().to_germ(&space).unwrap();
        let weight = f.semi_invariant_weight().unwrap();
        assert_eq!(
            min_power(&weight, space.orders()),
            *k0 as i64,
            "minimum power of {germ_text} on {space_text}"
        );
        let mut rescaled = Vec::new();
        let mut chi_per_power = Vec::new();
        for &k in &[*k0, 2 * *k0] {
            let fk = germ_power(&f, k);
            let result = pipeline_curve(&fk).unwrap();
            let z = zeta_from_strata(&result.strata);
            chi_per_power.push(z.degree() / Rat::from_integer(k as i64));
            rescaled.push(z.subst_power(rat(1, k as i64)).unwrap());
        }
        assert_eq!(rescaled[0], rescaled[1], "{germ_text} on {space_text}");
        assert_eq!(chi_per_power[0], chi_per_power[1], "{germ_text} on {space_text}");
    }
    c.pass();
}

#[test]
fn criterion_11_brieskorn_central_curve() {
    let c = Criterion::start(11, "Brieskorn degrees force the central-curve chi, 2..=10");
    for p in 2..=10i64 {
        for q in 2..=10i64 {
            for r in 2..=10i64 {
                let result = pipeline_brieskorn(p, q, r).unwrap();
                let delta = zeta_from_strata(&result.strata).to_delta(2).unwrap();
                assert_eq!(
                    delta.degree(),
                    Rat::from_integer((p - 1) * (q - 1) * (r - 1)),
                    "degree for ({p},{q},{r})"
                );
                assert_eq!(result.closed_form.as_ref(), Some(&delta));
                let (e1, e2, e3) = (gcd(q, r), gcd(p, r), gcd(p, q));
                let e = gcd(gcd(p, q), r);
                let chi = e1 + e2 + e3 - e1 * e2 * e3 / e;
                assert!(
                    result.notes.iter().any(|n| n.contains(&format!("chi = {chi}"))),
                    "({p},{q},{r}): expected chi = {chi} in {:?}",
                    result.notes
                );
            }
        }
    }
    c.pass();
}
