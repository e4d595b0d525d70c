//! Sequential against rayon-backed execution of the same sweeps.
//! Without the `parallel` feature both paths run sequentially.

use std::hint::black_box;

use clforms::exec::Exec;
use clforms::orbit::{check_twisted_stability, enumerate_group, orbits, Budget, OrbitSpace};
use clforms::verify::{qr_suite, rho_suite, SuiteConfig};
use clforms::{Field, FormSpace, GroupKind};
use criterion::{criterion_group, criterion_main, Criterion};

const PATHS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn qr(c: &mut Criterion) {
    let mut g = c.benchmark_group("qr_o3_f3");
    for (name, exec) in PATHS {
        let cfg = SuiteConfig { field: Field::prime(3).unwrap(), group: GroupKind::O, dim: 3, trials: 0, seed: 0, exec };
        g.bench_function(name, |b| b.iter(|| black_box(qr_suite(&cfg).unwrap())));
    }
    g.finish();
}

fn rho(c: &mut Criterion) {
    let mut g = c.benchmark_group("rho_sp4_f5");
    for (name, exec) in PATHS {
        let cfg = SuiteConfig { field: Field::prime(5).unwrap(), group: GroupKind::Sp, dim: 4, trials: 64, seed: 1, exec };
        g.bench_function(name, |b| b.iter(|| black_box(rho_suite(&cfg, 10).unwrap())));
    }
    g.finish();
}

fn shadow(c: &mut Criterion) {
    let mut g = c.benchmark_group("shadow_u2_gf9");
    g.sample_size(10);
    let space = FormSpace::standard(GroupKind::U, Field::from_order(9).unwrap(), 2).unwrap();
    let budget = Budget::default();
    for (name, exec) in PATHS {
        g.bench_function(name, |b| {
            b.iter(|| {
                let en = enumerate_group(&space, &budget, exec).unwrap();
                let mut r = orbits(&en, OrbitSpace::LieTimesV, &budget, exec).unwrap();
                black_box(check_twisted_stability(&mut r, &en, exec))
            })
        });
    }
    g.finish();
}

criterion_group!(benches, qr, rho, shadow);
criterion_main!(benches);
