//! Parallel-vs-sequential benchmarks for the data-parallel hot paths:
//! tessellation construction, a full Lloyd step, and the energy reduction.
//!
//! With the default `parallel` feature each workload runs on the ambient
//! rayon pool and again inside a single-thread pool (the sequential
//! comparison point); results are identical by construction, only wall time
//! differs. Built with `--no-default-features` the suite benches the plain
//! sequential path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use cvt3d::geom::Vec3;
use cvt3d::lattice::{generate, LatticeKind};
use cvt3d::lloyd::lloyd_step;
use cvt3d::rng::SplitMix64;
use cvt3d::voronoi::{build_tessellation, energy, Domain, GeneratorSet};

fn random_gens(n: usize, seed: u64, domain: Domain) -> GeneratorSet {
    let mut rng = SplitMix64::new(seed);
    let pts: Vec<Vec3> = (0..n).map(|_| rng.point_in_unit_cube()).collect();
    GeneratorSet::new(pts, domain).unwrap()
}

/// Benches `work` under both execution modes.
fn bench_both<F: Fn() + Send + Sync>(c: &mut Criterion, group: &str, id: &str, work: F) {
    let mut g = c.benchmark_group(group);
    g.sample_size(20);
    #[cfg(feature = "parallel")]
    {
        g.bench_function(BenchmarkId::new("parallel", id), |b| b.iter(&work));
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        g.bench_function(BenchmarkId::new("sequential-1thread", id), |b| {
            b.iter(|| pool.install(&work))
        });
    }
    #[cfg(not(feature = "parallel"))]
    g.bench_function(BenchmarkId::new("sequential", id), |b| b.iter(&work));
    g.finish();
}

fn bench_build(c: &mut Criterion) {
    for (label, gens) in [
        ("bcc-k3-n54", generate(LatticeKind::Bcc, 3).unwrap()),
        ("random-n128-torus", random_gens(128, 11, Domain::UnitTorus)),
        ("random-n512-cube", random_gens(512, 12, Domain::UnitCube)),
    ] {
        bench_both(c, "build_tessellation", label, || {
            black_box(build_tessellation(black_box(&gens)).unwrap());
        });
    }
}

fn bench_lloyd_step(c: &mut Criterion) {
    let gens = random_gens(64, 3, Domain::UnitTorus);
    bench_both(c, "lloyd_step", "random-n64-torus", || {
        black_box(lloyd_step(black_box(&gens)).unwrap());
    });
}

fn bench_energy(c: &mut Criterion) {
    let t = build_tessellation(&random_gens(256, 5, Domain::UnitTorus)).unwrap();
    bench_both(c, "energy", "n256", || {
        black_box(energy(black_box(&t)));
    });
}

criterion_group!(benches, bench_build, bench_lloyd_step, bench_energy);
criterion_main!(benches);
