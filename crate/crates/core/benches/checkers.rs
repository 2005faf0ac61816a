//! Checker, oracle and simulator throughput.
//!
//! With the default `parallel` feature every benchmark runs twice: on the
//! global rayon pool and inside a one-thread pool. Build with
//! `--no-default-features` to measure the purely sequential code path.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qtm_core::conditions::{check_column, check_ktape, check_row};
use qtm_core::evolution::{estimate_norm, run, Guard};
use qtm_core::model::TuringFrame;
use qtm_core::oracle::{
    column_oracle, default_window, pair_unitary_machine, random_directions, random_superposition, SquareMatrix,
};
use qtm_core::table::TransitionTable;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn unitary_machine(nq: usize, sizes: &[usize], seed: u64) -> TransitionTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = TuringFrame::with_sizes(nq, sizes).unwrap();
    let u = SquareMatrix::random_unitary(nq * f.symbol_vector_count(), &mut rng);
    let dirs = random_directions(&f, &mut rng);
    pair_unitary_machine(f, &u, &dirs).unwrap()
}

type Job = Box<dyn Fn() + Send + Sync>;

fn jobs() -> Vec<(&'static str, Job)> {
    let big = unitary_machine(6, &[4], 1);
    let three = unitary_machine(2, &[2, 2, 2], 2);
    let small = unitary_machine(3, &[2], 3);
    let window = default_window(small.frame()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let psi = random_superposition(small.frame(), 4, 2, &mut rng);
    let (b1, b2, s1, s2, s3) = (big.clone(), big, small.clone(), small.clone(), small);
    vec![
        (
            "column/6x4",
            Box::new(move || {
                black_box(check_column(&b1, 1e-9).unwrap());
            }),
        ),
        (
            "row/6x4",
            Box::new(move || {
                black_box(check_row(&b2, 1e-9).unwrap());
            }),
        ),
        (
            "ktape/k3",
            Box::new(move || {
                black_box(check_ktape(&three, 1e-9).unwrap());
            }),
        ),
        (
            "oracle/3x2",
            Box::new(move || {
                black_box(column_oracle(&s1, &window).unwrap());
            }),
        ),
        (
            "norm/r3",
            Box::new(move || {
                black_box(estimate_norm(&s2, 3, 50).unwrap());
            }),
        ),
        (
            "run/8",
            Box::new(move || {
                black_box(run(&s3, &psi, 8, Guard::Unchecked).unwrap());
            }),
        ),
    ]
}

fn bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("checkers");
    group.sample_size(20);
    for (name, job) in jobs() {
        group.bench_function(BenchmarkId::new("default", name), |b| b.iter(&job));
        #[cfg(feature = "parallel")]
        {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
            group.bench_function(BenchmarkId::new("one-thread", name), |b| b.iter(|| pool.install(&job)));
        }
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
