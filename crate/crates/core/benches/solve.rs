use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use vsg_core::bench::workload;
use vsg_core::closed_form::solve_two_move_dd;
use vsg_core::compute_grid;
use vsg_core::model::parse_ruleset;

fn closed_form_vs_oracle(c: &mut Criterion) {
    let s = parse_ruleset("13,1;2,16").unwrap();
    let mut group = c.benchmark_group("two_move_query");
    for bits in [8u32, 10] {
        let queries = workload(2, bits, 64, 7);
        group.bench_with_input(BenchmarkId::new("closed-form", bits), &queries, |b, q| {
            b.iter(|| q.iter().filter(|p| solve_two_move_dd(&s, p).unwrap().is_p()).count())
        });
        group.bench_with_input(BenchmarkId::new("oracle", bits), &queries, |b, q| {
            b.iter(|| {
                q.iter()
                    .filter(|p| {
                        let (x, y) = (p.components()[0] as usize, p.components()[1] as usize);
                        compute_grid(&s, x + 1, y + 1).unwrap().get(x, y)
                    })
                    .count()
            })
        });
    }
    for bits in [32u32, 60] {
        let queries = workload(2, bits, 1024, 7);
        group.bench_with_input(BenchmarkId::new("closed-form", bits), &queries, |b, q| {
            b.iter(|| q.iter().filter(|p| solve_two_move_dd(&s, p).unwrap().is_p()).count())
        });
    }
    group.finish();
}

criterion_group!(benches, closed_form_vs_oracle);
criterion_main!(benches);
