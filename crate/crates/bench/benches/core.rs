use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use galmod::delpezzo::{explicit_resolution, picard_preset, weyl_group};
use galmod::{h1, is_coflabby, is_invertible, smith_normal_form, subgroup_classes, Subgroup, DEFAULT_ELEMENT_CAP};
use galmod_bench::{dp5_lattice, random_lattices, smith_inputs};

fn linalg(c: &mut Criterion) {
    let inputs = smith_inputs(32, 6, 6);
    c.bench_function("smith_normal_form/6x6", |b| {
        b.iter(|| {
            for a in &inputs {
                black_box(smith_normal_form(a));
            }
        })
    });
}

fn groups(c: &mut Criterion) {
    let p = picard_preset(5).unwrap();
    c.bench_function("weyl_group/dp5", |b| {
        b.iter(|| weyl_group(black_box(&p), DEFAULT_ELEMENT_CAP).unwrap())
    });
    c.bench_function("subgroup_classes/dp5", |b| {
        b.iter_batched(
            || weyl_group(&p, DEFAULT_ELEMENT_CAP).unwrap(),
            |w| subgroup_classes(&w),
            BatchSize::SmallInput,
        )
    });
}

fn cohomology(c: &mut Criterion) {
    let (w, m) = dp5_lattice();
    w.catalog();
    c.bench_function("h1/dp5_full_group", |b| b.iter(|| h1(&m, &Subgroup::full(&w))));
    c.bench_function("is_coflabby/dp5", |b| b.iter(|| is_coflabby(black_box(&m))));
    let lattices = random_lattices(16);
    c.bench_function("h1/random_cyclic", |b| {
        b.iter(|| {
            for m in &lattices {
                let g = m.group();
                for x in 0..g.order() {
                    black_box(h1(m, &Subgroup::generated_by(g, &[x])));
                }
            }
        })
    });
}

fn resolutions(c: &mut Criterion) {
    let (_, m) = dp5_lattice();
    c.bench_function("is_invertible/dp5", |b| {
        b.iter(|| is_invertible(black_box(&m)).unwrap())
    });
    c.bench_function("explicit_resolution/dp5", |b| {
        b.iter(|| explicit_resolution(black_box(&m)).unwrap())
    });
}

criterion_group!(benches, linalg, groups, cohomology, resolutions);
criterion_main!(benches);
