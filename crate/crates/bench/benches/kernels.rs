use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use nodal_lab::eigen::build_bourgain;
use nodal_lab::gaussian::{discretize_measure, sample_field};
use nodal_lab::kac_rice::{expected_length_constant, variance_integral, KacRiceInput};
use nodal_lab::lattice::{find_semi_correlations, lattice_points, Axis, SearchBudget};
use nodal_lab::loglab::{log_moment_at_depth, small_value_measure};
use nodal_lab::measure::DirectionMeasure;
use nodal_lab::nodal::{nodal_length, nodal_length_planck, NodalOptions, Region};

fn lattice(c: &mut Criterion) {
    c.bench_function("lattice_points/1185665", |b| {
        b.iter(|| lattice_points(black_box(1_185_665)))
    });
    let budget = SearchBudget::default();
    let mut g = c.benchmark_group("semi_correlations");
    for lambda in [325u64, 1105, 4225] {
        g.bench_with_input(BenchmarkId::from_parameter(lambda), &lambda, |b, &l| {
            b.iter(|| find_semi_correlations(l, 2, Axis::First, &budget).unwrap())
        });
    }
    g.finish();
}

fn marching_squares(c: &mut Criterion) {
    let spec = build_bourgain(325).unwrap();
    let mut g = c.benchmark_group("nodal_length");
    g.sample_size(10);
    for resolution in [64usize, 256] {
        // Fixed resolution: no refinement, so this times one grid pass.
        let opts = NodalOptions {
            resolution,
            refine_tol: f64::INFINITY,
            max_resolution: resolution,
        };
        g.bench_with_input(
            BenchmarkId::new("bourgain325_torus", resolution),
            &opts,
            |b, o| b.iter(|| nodal_length(&spec, &Region::FullTorus, o).unwrap()),
        );
    }
    let opts = NodalOptions::default();
    g.bench_function("planck_window_R8", |b| {
        b.iter(|| nodal_length_planck(&spec, [0.3, 0.7], 8.0, &opts).unwrap())
    });
    let mu = discretize_measure(&DirectionMeasure::Lebesgue, 256).unwrap();
    let field = sample_field(&mu, 16.0, 1).unwrap();
    g.bench_function("random_wave_R16", |b| {
        b.iter(|| nodal_length(&field, &Region::unit_square(), &opts).unwrap())
    });
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    let spec = build_bourgain(325).unwrap();
    let mut g = c.benchmark_group("loglab");
    g.sample_size(10);
    g.bench_function("log_moment_p2_depth6", |b| {
        b.iter(|| log_moment_at_depth(&spec, 2, &Region::FullTorus, 64, 6).unwrap())
    });
    g.bench_function("small_value_1e-2", |b| {
        b.iter(|| small_value_measure(&spec, 1e-2, &Region::FullTorus, 64).unwrap())
    });
    g.finish();
}

fn kac_rice(c: &mut Criterion) {
    let input = KacRiceInput::new(0.6, 0.2).unwrap();
    c.bench_function("c1_general", |b| {
        b.iter(|| expected_length_constant(black_box(&input)).unwrap())
    });
    c.bench_function("variance_integral", |b| {
        b.iter(|| variance_integral(black_box(&input)).unwrap())
    });
}

criterion_group!(benches, lattice, marching_squares, quadrature, kac_rice);
criterion_main!(benches);
