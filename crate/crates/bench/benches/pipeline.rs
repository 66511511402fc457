use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gwverify::chern_geometry::hypersurface_symbolic;
use gwverify::localization_engine::{builtin, problem_total};
use gwverify::psi_recursion::PsiOracle;
use gwverify::sum_formula::{assemble_example, hodge_tangent_euler_number, DeltaSpec, ExampleOneInput};
use gwverify::{Context, DataSource, HodgeOracle};

fn psi(c: &mut Criterion) {
    // a fresh oracle each time, so the memo table starts empty
    c.bench_function("psi genus 3 one point", |b| {
        b.iter(|| PsiOracle::new().intersect(black_box(3), &[7]).unwrap())
    });
    c.bench_function("psi genus 3 four points", |b| {
        b.iter(|| PsiOracle::new().intersect(black_box(3), &[3, 2, 2, 3]).unwrap())
    });
}

fn localization(c: &mut Criterion) {
    let src = DataSource::embedded();
    let oracle = HodgeOracle::load(&src).unwrap();
    for name in ["p4-absolute", "p4-relative-delta1"] {
        let problem = builtin(&src, name).unwrap();
        c.bench_function(&format!("localize {name}"), |b| {
            b.iter(|| problem_total(black_box(&problem), &oracle).unwrap())
        });
    }
}

fn sum_formula(c: &mut Criterion) {
    let ctx = Context::load(DataSource::embedded()).unwrap();
    let v = hypersurface_symbolic(4).unwrap();
    c.bench_function("hodge tangent euler number, symbolic degree", |b| {
        b.iter(|| hodge_tangent_euler_number(3, black_box(&v), &ctx.oracle).unwrap())
    });
    let one = ExampleOneInput::default();
    c.bench_function("assemble genus 3 example, symbolic degree", |b| {
        b.iter(|| assemble_example(&ctx, 3, DeltaSpec::Symbolic, &one).unwrap())
    });
}

criterion_group!(benches, psi, localization, sum_formula);
criterion_main!(benches);
