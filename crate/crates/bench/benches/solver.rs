use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ptdc_core::perturbation::{rs_expand, waveguide_split};
use ptdc_core::spectral::{assemble_hamiltonian, solve_modes, solve_modes_targeted, SineBasis};
use ptdc_core::waveguide::{build_index_profile, potential_from_index, CouplerGeometry};
use ptdc_core::linalg::eig_complex_symmetric;

fn geometry(alpha: f64) -> CouplerGeometry {
    CouplerGeometry {
        delta_alpha: alpha,
        ..CouplerGeometry::default()
    }
}

fn bench_assembly(c: &mut Criterion) {
    let g = geometry(4.0);
    let p = potential_from_index(&build_index_profile(&g).unwrap());
    let mut group = c.benchmark_group("assemble_hamiltonian");
    for n in [300usize, 900] {
        let basis = SineBasis::new(90.0, n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &basis, |b, basis| {
            b.iter(|| assemble_hamiltonian(&p, basis).unwrap())
        });
    }
    group.finish();
}

fn bench_guided_solve(c: &mut Criterion) {
    let g = geometry(4.0);
    let p = potential_from_index(&build_index_profile(&g).unwrap());
    let mut group = c.benchmark_group("guided_solve");
    group.sample_size(10);
    for n in [300usize, 900] {
        let basis = SineBasis::new(90.0, n).unwrap();
        let h = assemble_hamiltonian(&p, &basis).unwrap();
        group.bench_with_input(BenchmarkId::new("targeted", n), &h, |b, h| {
            b.iter(|| solve_modes_targeted(h, &basis, &g).unwrap())
        });
    }
    // full decomposition is the reference path; keep it at a size where a
    // benchmark iteration stays in the tens of milliseconds
    let basis = SineBasis::new(45.0, 200).unwrap();
    let h = assemble_hamiltonian(&p, &basis).unwrap();
    group.bench_function("full_200", |b| {
        b.iter(|| solve_modes(&h, &basis, &g).unwrap())
    });
    group.finish();
}

fn bench_dense_eig(c: &mut Criterion) {
    let g = geometry(8.0);
    let p = potential_from_index(&build_index_profile(&g).unwrap());
    let basis = SineBasis::new(45.0, 150).unwrap();
    let h = assemble_hamiltonian(&p, &basis).unwrap();
    let mut group = c.benchmark_group("eig_complex_symmetric");
    group.sample_size(10);
    group.bench_function("n150", |b| b.iter(|| eig_complex_symmetric(&h).unwrap()));
    group.finish();
}

fn bench_rs_orders(c: &mut Criterion) {
    let g = geometry(0.0);
    let basis = SineBasis::new(60.0, 300).unwrap();
    let hs = waveguide_split(&g, &basis, 1.0).unwrap();
    let mut group = c.benchmark_group("rs_expand");
    group.sample_size(10);
    group.bench_function("n300_order30", |b| {
        b.iter(|| rs_expand(&hs, 0, 30).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_assembly,
    bench_guided_solve,
    bench_dense_eig,
    bench_rs_orders
);
criterion_main!(benches);
