//! Parallel-vs-sequential comparison of the data-parallel kernels: BFS
//! group closure, the Frobenius place sweep, and the root-system catalog
//! verification. Build with the default `parallel` feature to exercise the
//! rayon path; the sequential twins are always available.

use criterion::{criterion_group, criterion_main, Criterion};

#[global_allocator]
static ALLOC: mimalloc::MiMalloc = mimalloc::MiMalloc;

use drincert::drinfeld::{DrinfeldFamily, SpecializeOutcome};
use drincert::field::FqField;
use drincert::matgroups::{self, lift_const};
use drincert::matrix::Mat;
use drincert::par::seq_map;
use drincert::poly::{build_extension, enumerate_primes, Poly};
use drincert::rootsys;
use drincert::skew::SkewPoly;
use drincert::surjcert;
use drincert::trunc::{TruncElem, TruncRing};

fn closure_gens() -> (std::sync::Arc<TruncRing>, Vec<Mat<TruncElem>>) {
    let k = FqField::prime(7);
    let ring = TruncRing::new(&k, 2);
    let mut gens: Vec<Mat<TruncElem>> = matgroups::sln_gens(&k, 2)
        .iter()
        .map(|g| lift_const(&ring, g))
        .collect();
    gens.push(matgroups::depth_transvection(&ring, 2, 1));
    (ring, gens)
}

fn bench_closure(c: &mut Criterion) {
    let (ring, gens) = closure_gens();
    // |SL_2(F_7[u]/u^2)| = 336 * 343
    let expected = 336 * 343;
    let mut group = c.benchmark_group("closure_sl2_f7_m2");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let cl = matgroups::closure(&ring, 2, &gens, 1_000_000);
            assert_eq!(cl.order(), expected);
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let cl = matgroups::closure_seq(&ring, 2, &gens, 1_000_000);
            assert_eq!(cl.order(), expected);
        })
    });
    group.finish();
}

fn reference_family() -> DrinfeldFamily {
    let f3 = build_extension(3, 1).unwrap();
    let phi_t = SkewPoly::from_coeffs(
        1,
        Poly::zero(&f3),
        vec![Poly::zero(&f3), Poly::x(&f3), Poly::one(&f3)],
    );
    DrinfeldFamily::new(&f3, phi_t, "ref-rank2-f3").unwrap()
}

fn bench_sweep(c: &mut Criterion) {
    let fam = reference_family();
    let mut group = c.benchmark_group("frobenius_sweep_deg2");
    group.sample_size(10);
    // the library sweep fans places out over workers (isolated field
    // handles per task); the sequential twin maps the same closure in order
    group.bench_function("parallel", |b| {
        b.iter(|| {
            surjcert::collect_frobenius(&fam, 2, 64)
                .unwrap()
                .places_good
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let places = enumerate_primes(fam.fq(), 2);
            seq_map(places, |h| {
                let local = fam.deep_clone();
                let h = h.rebase(local.fq());
                match local.specialize(&h).unwrap() {
                    SpecializeOutcome::Good(md) => {
                        md.charpoly_frobenius_named(&h.to_string_var("s"), 64)
                            .unwrap()
                            .fx
                    }
                    SpecializeOutcome::BadReduction => Vec::new(),
                }
            })
            .len()
        })
    });
    group.finish();
}

fn bench_rootsys(c: &mut Criterion) {
    let mut group = c.benchmark_group("rootsys_box2");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let t = rootsys::verify_main_theorem(2);
            assert_eq!(t.total_counterexamples, 0);
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let t = rootsys::verify_main_theorem_seq(2);
            assert_eq!(t.total_counterexamples, 0);
        })
    });
    group.finish();
}

criterion_group!(benches, bench_closure, bench_sweep, bench_rootsys);
criterion_main!(benches);
