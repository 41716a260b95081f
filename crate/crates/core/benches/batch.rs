use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rootfan::fan::weyl_chamber_fan;
use rootfan::rdata::{roundtrip_batch, ChartAtlas};
use rootfan::root_system::{RootSystem, RootSystemSpec};
use rootfan::{losev_manin, Strategy};

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn chambers(c: &mut Criterion) {
    let mut g = c.benchmark_group("weyl_chamber_fan");
    g.sample_size(10);
    for spec in ["A5", "B4", "D5"] {
        let r = RootSystem::build(&RootSystemSpec::parse(spec).unwrap()).unwrap();
        for (name, s) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(name, spec), &r, |b, r| {
                b.iter(|| black_box(weyl_chamber_fan(r, s)))
            });
        }
    }
    g.finish();
}

fn rdata_roundtrip(c: &mut Criterion) {
    let mut g = c.benchmark_group("rdata_roundtrip_500");
    g.sample_size(10);
    for spec in ["A4", "B4"] {
        let r = RootSystem::build(&RootSystemSpec::parse(spec).unwrap()).unwrap();
        let atlas = ChartAtlas::new(&r, Strategy::default());
        for (name, s) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(name, spec), &r, |b, r| {
                b.iter(|| black_box(roundtrip_batch(r, &atlas, 500, 1, s)))
            });
        }
    }
    g.finish();
}

fn lm_roundtrip(c: &mut Criterion) {
    let mut g = c.benchmark_group("lm_roundtrip_500");
    g.sample_size(10);
    for n in [3usize, 6] {
        for (name, s) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| black_box(losev_manin::roundtrip_batch(n, 500, 1, s)))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, chambers, rdata_roundtrip, lm_roundtrip);
criterion_main!(benches);
