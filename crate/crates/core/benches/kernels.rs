//! Parallel against sequential execution on the batch kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sts_core::analysis::{max_disjoint_pcs_with, theorem1_sweep, SearchBudget};
use sts_core::constructions::bose_half_sum;
use sts_core::generator::colouring_survey;
use sts_core::numtheory::scan_table;
use sts_core::Exec;

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("scan_table_1e5");
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| scan_table(black_box(100_000), exec)));
    }
    g.finish();
}

fn packing(c: &mut Criterion) {
    let s = bose_half_sum(5).unwrap().system;
    let mut g = c.benchmark_group("max_disjoint_pcs_bose15");
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| max_disjoint_pcs_with(&s, &SearchBudget::default(), exec).unwrap()));
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let orders: Vec<u32> = (15..=303).filter(|v| v % 6 == 3).collect();
    let mut g = c.benchmark_group("order_sweep_to_303");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| theorem1_sweep(black_box(&orders), exec)));
    }
    g.finish();
}

fn survey(c: &mut Criterion) {
    let mut g = c.benchmark_group("colouring_survey");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "v13x8"), &13u32, |b, &v| {
            b.iter(|| colouring_survey(v, 8, 0, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, scan, packing, sweep, survey);
criterion_main!(benches);
