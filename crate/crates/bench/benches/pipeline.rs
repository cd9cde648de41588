use criterion::{black_box, criterion_group, criterion_main, Criterion};
use svstab_core::sim::ImexStepper;
use svstab_core::{
    auto_boundary_coeffs, build_linear_system, check_stability, solve_steady, spectrum, Grid, PhysicalParams,
    StateVector,
};

fn channel(n: usize) -> (PhysicalParams, Grid) {
    let p = PhysicalParams::new(9.81, 1e-4, 2e-3, 10.0).unwrap();
    (p, Grid::new(n, 10.0).unwrap())
}

fn steady(c: &mut Criterion) {
    let (p, grid) = channel(2001);
    c.bench_function("solve_steady n=2001", |b| b.iter(|| solve_steady(&p, black_box(0.2), 1.0, &grid).unwrap()));
}

fn certificate(c: &mut Criterion) {
    let (p, grid) = channel(2001);
    let s = solve_steady(&p, 0.2, 1.0, &grid).unwrap();
    let bc = auto_boundary_coeffs(&s, &p).unwrap();
    c.bench_function("check_stability n=2001", |b| b.iter(|| check_stability(black_box(&s), &p, bc).unwrap()));
}

fn imex(c: &mut Criterion) {
    let (p, grid) = channel(2001);
    let s = solve_steady(&p, 0.2, 1.0, &grid).unwrap();
    let sys = build_linear_system(&s, &p, auto_boundary_coeffs(&s, &p).unwrap()).unwrap();
    let mut stepper = ImexStepper::new(&sys, sys.cfl_dt()).unwrap();
    let mut y = StateVector::from_fn(&grid, |x| 0.01 * (20.0 * x + 15.0).cos(), |x| 0.01 * x.cos());
    c.bench_function("imex step n=2001", |b| {
        b.iter(|| {
            stepper.step(&mut y, None).unwrap();
            // Keep the state away from underflow over long runs.
            let scale = y.h.iter().chain(&y.v).fold(0.0_f64, |m, u| m.max(u.abs()));
            if scale < 1e-100 {
                y.h.iter_mut().chain(y.v.iter_mut()).for_each(|u| *u *= 1e100);
            }
        })
    });
}

fn eigen(c: &mut Criterion) {
    let (p, grid) = channel(101);
    let s = solve_steady(&p, 0.2, 1.0, &grid).unwrap();
    let sys = build_linear_system(&s, &p, auto_boundary_coeffs(&s, &p).unwrap()).unwrap();
    c.bench_function("spectrum n=101", |b| b.iter(|| spectrum(black_box(&sys)).unwrap()));
}

criterion_group!(benches, steady, certificate, imex, eigen);
criterion_main!(benches);
