//! The acceptance checks, each returning a structured verdict. The
//! integration suite asserts them one per test; the CLI `selftest`
//! subcommand runs them all and exits nonzero on any failure.

use std::time::{Duration, Instant};

use crate::drinfeld::{newton_check, DrinfeldModule, FrobeniusData};
use crate::field::FqField;
use crate::matgroups::{self, GoursatClass};
use crate::matrix::Mat;
use crate::poly::{self, Poly};
use crate::skew::SkewPoly;
use crate::surjcert::{self, CertifyOptions};
use crate::trunc::TruncRing;

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {} ({:.2?}): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed,
            self.detail
        )
    }
}

pub const CRITERIA: [(usize, &str); 12] = [
    (1, "charpoly cross-validation"),
    (2, "rank-1 Frobenius element"),
    (3, "Newton polygon constraints"),
    (4, "eigenvalue-relation polynomial"),
    (5, "root systems"),
    (6, "strong approximation at depth 2"),
    (7, "bracket degeneracy"),
    (8, "invariant subgroups"),
    (9, "char-2 trace identity"),
    (10, "order formulas"),
    (11, "trace-ring pipeline"),
    (12, "Goursat detector"),
];

pub fn run_criterion(id: usize) -> CheckResult {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("?");
    let start = Instant::now();
    let (passed, detail) = match id {
        1 => criterion_charpoly(),
        2 => criterion_rank1_frobenius(),
        3 => criterion_newton(),
        4 => criterion_eigenrel(),
        5 => criterion_rootsys(),
        6 => criterion_strong_approx(),
        7 => criterion_bracket(),
        8 => criterion_invariant_subgroups(),
        9 => criterion_char2_identity(),
        10 => criterion_orders(),
        11 => criterion_pipeline(),
        12 => criterion_goursat(),
        _ => (false, format!("unknown criterion {id}")),
    };
    CheckResult {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

pub fn all_criteria() -> Vec<CheckResult> {
    (1..=12).map(run_criterion).collect()
}

// ---------------------------------------------------------------------------

/// Deterministic module corpus: ranks 1-3, q in {2,3,4,5}, base degrees <= 4.
fn corpus() -> Vec<DrinfeldModule> {
    let mut out = Vec::new();
    let mut push = |q: u64,
                    m: usize,
                    coeffs: &dyn Fn(
        &std::sync::Arc<FqField>,
        &std::sync::Arc<FqField>,
    ) -> Vec<crate::field::Elem>| {
        let fq = poly::build_extension(q, 1).unwrap();
        let kappa = poly::extension_of(&fq, m);
        let cs = coeffs(&fq, &kappa);
        let phi_t = SkewPoly::from_coeffs(fq.degree_over_prime(), kappa.zero(), cs);
        out.push(DrinfeldModule::new(&fq, &kappa, phi_t).unwrap());
    };
    // rank 1, phi_T = tau
    for (q, ms) in [(2u64, 4usize), (3, 3), (4, 2), (5, 2)] {
        for m in 1..=ms {
            push(q, m, &|_fq, k| vec![k.zero(), k.one()]);
        }
    }
    // rank 1, gamma = 1
    for q in [2u64, 3] {
        push(q, 2, &|_fq, k| vec![k.one(), k.one()]);
    }
    // rank 2, phi_T = g*tau + tau^2 (g the base generator)
    for (q, m) in [(2u64, 2usize), (3, 1), (3, 2), (4, 1), (5, 1)] {
        push(q, m, &|_fq, k| vec![k.zero(), k.gen(), k.one()]);
    }
    // rank 2, gamma = 1
    for q in [2u64, 3] {
        push(q, 1, &|_fq, k| vec![k.one(), k.one(), k.one()]);
    }
    // rank 3
    push(2, 1, &|_fq, k| vec![k.zero(), k.one(), k.zero(), k.one()]);
    push(3, 1, &|_fq, k| vec![k.zero(), k.one(), k.zero(), k.one()]);
    push(2, 2, &|_fq, k| vec![k.zero(), k.gen(), k.zero(), k.one()]);
    out
}

fn corpus_charpolys() -> Result<Vec<FrobeniusData>, crate::Error> {
    let modules = corpus();
    let results = crate::par::par_map(modules, |md| {
        let md = md.deep_clone();
        md.charpoly_frobenius_named(&md.describe(), crate::drinfeld::TORSION_DEGREE_CAP)
    });
    results.into_iter().collect()
}

fn criterion_charpoly() -> (bool, String) {
    let start = Instant::now();
    match corpus_charpolys() {
        Ok(data) => {
            let n = data.len();
            let ok = n >= 20 && start.elapsed() < Duration::from_secs(120);
            (
                ok,
                format!(
                    "motive and torsion-CRT charpolys agree exactly on {n} modules in {:.2?}",
                    start.elapsed()
                ),
            )
        }
        Err(e) => (false, format!("cross-validation failed: {e}")),
    }
}

fn criterion_rank1_frobenius() -> (bool, String) {
    let mut count = 0;
    for q in [2u64, 3, 4, 5] {
        let fq = poly::build_extension(q, 1).unwrap();
        for m in 1..=5usize {
            let kappa = poly::extension_of(&fq, m);
            let phi_t = SkewPoly::from_coeffs(
                fq.degree_over_prime(),
                kappa.zero(),
                vec![kappa.zero(), kappa.one()],
            );
            let md = DrinfeldModule::new(&fq, &kappa, phi_t).unwrap();
            let a = match md.frobenius_as_element() {
                Ok(a) => a,
                Err(e) => return (false, format!("q={q} m={m}: {e}")),
            };
            if a != Poly::monomial(fq.one(), m) {
                return (
                    false,
                    format!("q={q} m={m}: a' = {} != T^{m}", a.to_string_var("T")),
                );
            }
            count += 1;
        }
    }
    (
        true,
        format!("a' = T^m and (a') = (T)^m for all {count} cases"),
    )
}

fn criterion_newton() -> (bool, String) {
    let data = match corpus_charpolys() {
        Ok(d) => d,
        Err(e) => return (false, format!("corpus failed: {e}")),
    };
    let mut extra = Vec::new();
    // include a family sweep
    let f3 = poly::build_extension(3, 1).unwrap();
    let fam = crate::drinfeld::DrinfeldFamily::new(
        &f3,
        SkewPoly::from_coeffs(
            1,
            Poly::zero(&f3),
            vec![Poly::zero(&f3), Poly::x(&f3), Poly::one(&f3)],
        ),
        "ref-rank2-f3",
    )
    .unwrap();
    match surjcert::collect_frobenius(&fam, 2, crate::drinfeld::TORSION_DEGREE_CAP) {
        Ok(sweep) => extra.extend(sweep.data),
        Err(e) => return (false, format!("sweep failed: {e}")),
    }
    let mut checked = 0;
    for fd in data.iter().chain(extra.iter()) {
        match newton_check(fd) {
            Ok(rep) => {
                if !(1..=fd.n).contains(&rep.n_x) {
                    return (
                        false,
                        format!("{}: n_x = {} out of range", fd.place, rep.n_x),
                    );
                }
                checked += 1;
            }
            Err(e) => return (false, format!("{}: {e}", fd.place)),
        }
    }
    (
        true,
        format!("all {checked} charpolys satisfy the valuation constraints with 1 <= n_x <= n"),
    )
}

fn criterion_eigenrel() -> (bool, String) {
    use crate::eigenrel::{f_value, symbolic_f, SymbolicF};
    let f5 = FqField::prime(5);
    let s2 = symbolic_f(2).unwrap();
    let s3 = symbolic_f(3).unwrap();
    let mut checked = 0usize;
    // exhaustive degree 2 over F_5
    for b1 in 0..5u64 {
        for b2 in 1..5u64 {
            let cp = Poly::from_coeffs(&f5, vec![f5.from_u64(b2), f5.from_u64(b1), f5.one()]);
            let rep = f_value(&cp).unwrap();
            let sv = s2.eval(&SymbolicF::betas_of_charpoly(&cp), &f5.zero());
            if rep.value != sv || rep.value.is_zero() != rep.flags.any() {
                return (false, format!("mismatch at degree-2 ({b1},{b2}) over F_5"));
            }
            checked += 1;
        }
    }
    // exhaustive degree 3 over F_5 (flags <=> zero, both directions)
    for b1 in 0..5u64 {
        for b2 in 0..5u64 {
            for b3 in 1..5u64 {
                let cp = Poly::from_coeffs(
                    &f5,
                    vec![f5.from_u64(b3), f5.from_u64(b2), f5.from_u64(b1), f5.one()],
                );
                let rep = f_value(&cp).unwrap();
                let sv = s3.eval(&SymbolicF::betas_of_charpoly(&cp), &f5.zero());
                if rep.value != sv || rep.value.is_zero() != rep.flags.any() {
                    return (
                        false,
                        format!("mismatch at degree-3 ({b1},{b2},{b3}) over F_5"),
                    );
                }
                checked += 1;
            }
        }
    }
    // 500 degree-3 samples over F_13
    use rand::{Rng, SeedableRng};
    let f13 = FqField::prime(13);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    for _ in 0..500 {
        let cp = Poly::from_coeffs(
            &f13,
            vec![
                f13.from_u64(rng.gen_range(1..13)),
                f13.from_u64(rng.gen_range(0..13)),
                f13.from_u64(rng.gen_range(0..13)),
                f13.one(),
            ],
        );
        let rep = f_value(&cp).unwrap();
        let sv = s3.eval(&SymbolicF::betas_of_charpoly(&cp), &f13.zero());
        if rep.value != sv || rep.value.is_zero() != rep.flags.any() {
            return (false, "mismatch in F_13 samples".to_string());
        }
        checked += 1;
    }
    (
        true,
        format!("f_value = symbolic_f and flags <=> 0 on {checked} charpolys"),
    )
}

fn criterion_rootsys() -> (bool, String) {
    let table = crate::rootsys::verify_main_theorem(3);
    let orbits: usize = table.rows.iter().map(|r| r.orbits_checked).sum();
    if table.total_counterexamples > 0 {
        let all: Vec<String> = table
            .rows
            .iter()
            .flat_map(|r| r.counterexamples.clone())
            .collect();
        return (false, format!("counterexamples: {}", all.join("; ")));
    }
    (
        true,
        format!(
            "0 counterexamples over {} orbits in {} systems",
            orbits,
            table.rows.len()
        ),
    )
}

fn criterion_strong_approx() -> (bool, String) {
    let mut details = Vec::new();
    for p in [11u64, 13] {
        let k = FqField::prime(p);
        let ring = TruncRing::new(&k, 2);
        let mut gens: Vec<Mat<crate::trunc::TruncElem>> = matgroups::sln_gens(&k, 2)
            .iter()
            .map(|g| matgroups::lift_const(&ring, g))
            .collect();
        gens.push(matgroups::depth_transvection(&ring, 2, 1));
        let rep = match matgroups::verify_strong_approx(&ring, 2, &gens, 6_000_000) {
            Ok(r) => r,
            Err(e) => return (false, format!("F_{p}: {e}")),
        };
        let expected = matgroups::group_order(2, p as u128, false) * (p as u128).pow(3);
        if !(rep.in_regime
            && rep.residually_sl
            && rep.layer1_nonscalar
            && rep.full
            && rep.consistent
            && rep.layer1_is_sl_when_hypotheses
            && rep.order as u128 == expected)
        {
            return (
                false,
                format!("F_{p}: hypothesis-true set did not close to SL_2(R): {rep:?}"),
            );
        }
        details.push(format!("F_{p}: order {}", rep.order));

        // hypothesis-false: Teichmüller constants never reach full order
        let const_gens: Vec<Mat<crate::trunc::TruncElem>> = matgroups::sln_gens(&k, 2)
            .iter()
            .map(|g| matgroups::lift_const(&ring, g))
            .collect();
        let rep = matgroups::verify_strong_approx(&ring, 2, &const_gens, 6_000_000).unwrap();
        if rep.full || !rep.consistent {
            return (
                false,
                format!("F_{p}: constants-only set closed to the full group"),
            );
        }
        // hypothesis-false: residual image a proper subgroup
        let single = vec![matgroups::lift_const(&ring, &{
            let mut m = Mat::identity(2, &k.zero());
            *m.at_mut(0, 1) = k.one();
            m
        })];
        let rep = matgroups::verify_strong_approx(&ring, 2, &single, 6_000_000).unwrap();
        if rep.full || rep.residually_sl {
            return (
                false,
                format!("F_{p}: single transvection closed to the full group"),
            );
        }
    }
    (true, details.join("; "))
}

fn criterion_bracket() -> (bool, String) {
    let cases = [
        (3u64, 2usize, 3usize),
        (2, 3, 8),
        (5, 2, 3),
        (3, 3, 8),
        (2, 2, 1),
    ];
    for (p, n, expected) in cases {
        let k = FqField::prime(p);
        let got = matgroups::bracket_span(&k, n);
        if got != expected {
            return (false, format!("(p,n)=({p},{n}): span {got} != {expected}"));
        }
    }
    (
        true,
        "full span except exactly at (p,n) = (2,2), where the span is the scalars".into(),
    )
}

fn criterion_invariant_subgroups() -> (bool, String) {
    for p in [11u64, 13] {
        let k = FqField::prime(p);
        let lat = matgroups::invariant_subgroups(&k, 2);
        let dims: Vec<usize> = lat.iter().map(|s| s.dim).collect();
        if dims != vec![0, 1, 3, 4] {
            return (false, format!("F_{p}: lattice dims {dims:?} != [0,1,3,4]"));
        }
        let prime = FqField::prime(p);
        let scal = matgroups::scalar_submodule(&k, 2);
        let sl = matgroups::sl_submodule(&k, 2);
        if !(lat[1].basis == scal.basis && lat[2].basis == sl.basis) {
            return (
                false,
                format!("F_{p}: lattice members are not {{0, c, sl_2, gl_2}}"),
            );
        }
        for m in &lat {
            if !(scal.contains(m, &prime, 4) || m.contains(&sl, &prime, 4)) {
                return (
                    false,
                    format!("F_{p}: dichotomy fails at a member of dim {}", m.dim),
                );
            }
        }
    }
    (
        true,
        "lattice is exactly {0, scalars, sl_2, gl_2} over F_11 and F_13".into(),
    )
}

fn criterion_char2_identity() -> (bool, String) {
    let f4 = poly::build_extension(2, 2).unwrap();
    let mut total = 0;
    for idx in 0..256u128 {
        let m = Mat::from_rows(vec![
            vec![
                f4.element_from_index(idx % 4),
                f4.element_from_index((idx / 4) % 4),
            ],
            vec![
                f4.element_from_index((idx / 16) % 4),
                f4.element_from_index((idx / 64) % 4),
            ],
        ]);
        if m.det().is_zero() {
            continue;
        }
        total += 1;
        match matgroups::char2_trad_identity(&m) {
            Ok(true) => {}
            _ => return (false, "identity fails on an element of GL_2(F_4)".into()),
        }
    }
    (
        total == 180,
        format!("Tr Ad(g) = Tr(g)^2 det(g)^-1 on all {total} elements of GL_2(F_4)"),
    )
}

fn criterion_orders() -> (bool, String) {
    for (q, expected) in [(2u64, 6u128), (3, 24), (4, 60), (5, 120)] {
        if matgroups::group_order(2, q as u128, false) != expected {
            return (false, format!("group_order(2,{q}) != {expected}"));
        }
        let k = poly::build_extension(q, 1).unwrap();
        let ring = TruncRing::new(&k, 1);
        let gens: Vec<Mat<crate::trunc::TruncElem>> = matgroups::sln_gens(&k, 2)
            .iter()
            .map(|g| matgroups::lift_const(&ring, g))
            .collect();
        let c = matgroups::closure(&ring, 2, &gens, 1_000_000);
        if c.order() as u128 != expected {
            return (
                false,
                format!("BFS count over F_{q} is {} != {expected}", c.order()),
            );
        }
    }
    if !matgroups::field_bound_check(3, 16) {
        return (
            false,
            "order inequality fails in the range n <= 3, q <= 16".into(),
        );
    }
    (
        true,
        "orders match exhaustive counts; field-bound inequality holds for n <= 3, q <= 16".into(),
    )
}

fn criterion_pipeline() -> (bool, String) {
    let f3 = poly::build_extension(3, 1).unwrap();
    let fam = crate::drinfeld::DrinfeldFamily::new(
        &f3,
        SkewPoly::from_coeffs(
            1,
            Poly::zero(&f3),
            vec![Poly::zero(&f3), Poly::x(&f3), Poly::one(&f3)],
        ),
        "ref-rank2-f3",
    )
    .unwrap();
    let opts = CertifyOptions {
        prime_degree_bound: 2,
        place_degree_bound: 4,
        ..Default::default()
    };
    let report = match surjcert::certify(&fam, &opts) {
        Ok(r) => r,
        Err(e) => return (false, format!("certify failed: {e}")),
    };
    // every trad sample lies in A_0: enforced inside trad_of; recompute to count
    let sweep = surjcert::collect_frobenius(&fam, 4, 64).unwrap();
    let samples: Result<Vec<_>, _> = sweep.data.iter().map(surjcert::trad_of).collect();
    let samples = match samples {
        Ok(s) => s,
        Err(e) => return (false, format!("a trace sample escapes A_0: {e}")),
    };
    // residual surjectivity at every non-excluded prime (at these bounds the
    // regime excludes every prime; residual data is still recorded)
    for e in &report.primes {
        if e.status != "EXCLUDED" && !e.residual {
            return (false, format!("residual surjectivity fails at {}", e.pi));
        }
        if e.pi != "T" && e.f_witness.is_none() {
            return (false, format!("no nonvanishing witness at {}", e.pi));
        }
    }
    // p-independence of the f-values across primes
    let primes: Vec<Poly> = poly::enumerate_primes(&f3, 2)
        .into_iter()
        .filter(|p| *p != Poly::x(&f3))
        .collect();
    match surjcert::verify_p_independence(&sweep.data, 1, &primes) {
        Ok(true) => {}
        _ => return (false, "p-independence of f(Frob_x) fails".into()),
    }
    // byte-for-byte reproducibility
    let report2 = surjcert::certify(&fam, &opts).unwrap();
    if report.to_json() != report2.to_json() {
        return (false, "report is not byte-identical across runs".into());
    }
    let excluded = report
        .primes
        .iter()
        .filter(|e| e.status == "EXCLUDED")
        .count();
    (
        true,
        format!(
            "{} samples in A_0; witnesses at all primes != p0; {} primes all excluded by the \
             |k_p| > 9 regime at degree <= 2; report reproducible",
            samples.len(),
            excluded
        ),
    )
}

fn criterion_goursat() -> (bool, String) {
    let f9 = poly::build_extension(3, 2).unwrap();
    let id = Mat::identity(2, &f9.zero());
    let gens = matgroups::sln_gens(&f9, 2);

    // full product
    let mut full_gens: Vec<(Mat<_>, Mat<_>)> =
        gens.iter().map(|g| (g.clone(), id.clone())).collect();
    full_gens.extend(gens.iter().map(|g| (id.clone(), g.clone())));
    match matgroups::goursat_analyze(&f9, &f9, 2, &full_gens, 1_000_000) {
        Ok(GoursatClass::Full) => {}
        other => return (false, format!("full product misclassified: {other:?}")),
    }

    // identity diagonal
    let diag: Vec<(Mat<_>, Mat<_>)> = gens.iter().map(|g| (g.clone(), g.clone())).collect();
    match matgroups::goursat_analyze(&f9, &f9, 2, &diag, 1_000_000) {
        Ok(GoursatClass::Graph { generator_pairs }) => {
            if !generator_pairs.iter().all(|(a, b)| a == b) {
                return (
                    false,
                    "identity diagonal recovered a non-identity map".into(),
                );
            }
        }
        other => return (false, format!("diagonal misclassified: {other:?}")),
    }

    // Frobenius-twisted diagonal
    let twisted: Vec<(Mat<_>, Mat<_>)> = gens
        .iter()
        .map(|g| (g.clone(), g.map(|x| x.frob_p(1))))
        .collect();
    match matgroups::goursat_analyze(&f9, &f9, 2, &twisted, 1_000_000) {
        Ok(GoursatClass::Graph { generator_pairs }) => {
            let frob_ok = generator_pairs
                .iter()
                .all(|(a, b)| *b == a.map(|x| x.frob_p(1)));
            if !frob_ok {
                return (
                    false,
                    "twisted diagonal: isomorphism not recovered on generators".into(),
                );
            }
        }
        other => return (false, format!("twisted diagonal misclassified: {other:?}")),
    }
    (
        true,
        "full / graph(id) / graph(Frobenius) classified with maps recovered on generators".into(),
    )
}
