//! Family sweeps run through `par::map` against a plain sequential loop.
//! Built with `--no-default-features` both arms are sequential.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use morita_gp::algebra::FDModule;
use morita_gp::complex::{certify_gorenstein_projective, SearchBounds};
use morita_gp::gen;
use morita_gp::gp::check_conditions;
use morita_gp::linalg::Field;
use morita_gp::morita::{zero_ideal_extension, QuadrupleModule};
use morita_gp::{fixtures, par};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bounds() -> SearchBounds {
    SearchBounds { window: 4, period_bound: 4, budget: 400 }
}

fn certify_family(c: &mut Criterion) {
    let f = Field::fp(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pool = [fixtures::dual_numbers(f), fixtures::truncated_poly(f, 3), fixtures::path_a2(f)];
    let family: Vec<FDModule> = (0..32).map(|i| gen::random_module(&mut rng, &pool[i % 3], 4)).collect();
    let run = |x: &FDModule| certify_gorenstein_projective(x, bounds()).map(|c| c.is_gp());
    let mut g = c.benchmark_group("certify_family");
    g.bench_function(BenchmarkId::new("parallel", family.len()), |b| b.iter(|| par::map(&family, run)));
    g.bench_function(BenchmarkId::new("sequential", family.len()), |b| b.iter(|| family.iter().map(run).collect::<Vec<_>>()));
    g.finish();
}

fn criterion_family(c: &mut Criterion) {
    let f = Field::fp(3).unwrap();
    let ctx = fixtures::triangular_context(f);
    let ext = zero_ideal_extension(&ctx.a);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let family: Vec<QuadrupleModule> = (0..32).map(|_| gen::random_quadruple(&mut rng, &ctx, 4)).collect();
    let run = |q: &QuadrupleModule| check_conditions(&ext, &ctx, q, bounds()).map(|r| r.passes());
    let mut g = c.benchmark_group("criterion_family");
    g.bench_function(BenchmarkId::new("parallel", family.len()), |b| b.iter(|| par::map(&family, run)));
    g.bench_function(BenchmarkId::new("sequential", family.len()), |b| b.iter(|| family.iter().map(run).collect::<Vec<_>>()));
    g.finish();
}

criterion_group! {
    name = sweeps;
    config = Criterion::default().sample_size(10);
    targets = certify_family, criterion_family
}
criterion_main!(sweeps);
