use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use unlockable_core::{
    ppt_check, smolin_qudit_state, smolin_state, superadditivity_protocol, unlock, Cut, PartyId,
    RegisterAssignment,
};

fn construction(c: &mut Criterion) {
    c.bench_function("smolin_state", |b| b.iter(smolin_state));
    let mut g = c.benchmark_group("smolin_qudit_state");
    for d in [2usize, 3] {
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            b.iter(|| smolin_qudit_state(black_box(d)).unwrap())
        });
    }
    g.finish();
}

fn cuts(c: &mut Criterion) {
    let rho = smolin_state();
    let mut g = c.benchmark_group("ppt_check");
    for cut in Cut::two_two_cuts(rho.layout()).unwrap() {
        g.bench_function(cut.to_string(), |b| b.iter(|| ppt_check(black_box(&rho), &cut, 1e-10).unwrap()));
    }
    g.finish();

    let qudit = smolin_qudit_state(3).unwrap();
    let cut = &Cut::two_two_cuts(qudit.layout()).unwrap()[0];
    c.bench_function("ppt_check/d=3", |b| b.iter(|| ppt_check(black_box(&qudit), cut, 1e-10).unwrap()));
}

fn protocols(c: &mut Criterion) {
    let rho = smolin_state();
    let assignment = RegisterAssignment::one_per_register(rho.layout());
    let (p, q) = (PartyId::new("C"), PartyId::new("D"));
    c.bench_function("unlock/CD", |b| b.iter(|| unlock(black_box(&rho), (&p, &q), &assignment).unwrap()));
    let mut g = c.benchmark_group("superadditivity");
    g.sample_size(10);
    g.bench_function("protocol", |b| b.iter(|| superadditivity_protocol().unwrap()));
    g.finish();
}

criterion_group!(benches, construction, cuts, protocols);
criterion_main!(benches);
