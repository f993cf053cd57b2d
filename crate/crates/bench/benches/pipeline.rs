use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use twk_core::boxtensor::{box_type_d, box_typewriter, identity_da};
use twk_core::cmdfunctor::{cmd_object, uncmd};
use twk_core::ddcoeff::semi_extend;
use twk_core::kernel::{strand_algebra_torus, torus_algebra};
use twk_core::models::model_m;
use twk_core::random::{random_structure, random_typewriter, seeded};
use twk_core::typed::reduce;

fn pipeline(c: &mut Criterion) {
    let mut rng = seeded(7);
    let torus = torus_algebra();
    let strands = strand_algebra_torus();
    let n = random_structure(&mut rng, &torus, "x", 12);
    let m = random_typewriter(&mut rng, &strands, 5);
    let dd = cmd_object(&m).unwrap();
    let id_torus = identity_da(&torus);
    let id_strands = identity_da(&strands);

    c.bench_function("reduce", |b| b.iter(|| reduce(black_box(&n))));
    c.bench_function("semi_extend", |b| b.iter(|| semi_extend(black_box(&dd)).unwrap()));
    c.bench_function("semi_extend_model_m", |b| {
        let dd = cmd_object(&model_m()).unwrap();
        b.iter(|| semi_extend(black_box(&dd)).unwrap())
    });
    c.bench_function("box_type_d", |b| b.iter(|| box_type_d(&id_torus, black_box(&n)).unwrap()));
    c.bench_function("box_typewriter", |b| b.iter(|| box_typewriter(&id_strands, black_box(&m)).unwrap()));
    c.bench_function("cmd_round_trip", |b| {
        b.iter(|| uncmd(&cmd_object(black_box(&m)).unwrap()).unwrap())
    });
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
