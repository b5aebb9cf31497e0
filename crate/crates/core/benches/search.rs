use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use k3lat::geometry::{ag23_unique_six_set, divisible_point_sets, kummer_subset_witnesses, AffineSpaceModel};
use k3lat::oracle::brute_force_divisible_subsets;
use k3lat::root_config::{find_p_divisible_subsets, ChainConfiguration};
use k3lat::{data, par, DEFAULT_MAX_CANDIDATES};

fn config(name: &str) -> ChainConfiguration {
    ChainConfiguration::from_json(&data::read_json(name).unwrap()).unwrap()
}

fn both<R>(c: &mut Criterion, group: &str, f: impl Fn() -> R) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("mode", "parallel"), |b| b.iter(&f));
    g.bench_function(BenchmarkId::new("mode", "sequential"), |b| b.iter(|| par::sequential(&f)));
    g.finish();
}

fn searches(c: &mut Criterion) {
    both(c, "kummer_subset_witnesses", || kummer_subset_witnesses().unwrap());
    both(c, "ag23_unique_six_set", || ag23_unique_six_set().unwrap());
    both(c, "divisible_point_sets_kummer", || divisible_point_sets(&AffineSpaceModel::kummer()).unwrap());
    let cfg = config("enriques_p3.json");
    both(c, "divisible_subsets_p3", || {
        find_p_divisible_subsets(&cfg, DEFAULT_MAX_CANDIDATES).unwrap()
    });
    both(c, "brute_force_p3", || {
        brute_force_divisible_subsets(&cfg, DEFAULT_MAX_CANDIDATES).unwrap()
    });
}

criterion_group!(benches, searches);
criterion_main!(benches);
