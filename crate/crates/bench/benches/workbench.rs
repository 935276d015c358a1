use criterion::{black_box, criterion_group, criterion_main, Criterion};

use fgcoh::cohom::bar_cohomology_dim;
use fgcoh::fpcore::FpMatrix;
use fgcoh::{
    find_witness, generation_certificate, minimal_resolution, ring_presentation, GenerationLimits,
    GroupCohomology, KGModule,
};
use fgcoh_bench::{group, radical_module};

fn linear_algebra(c: &mut Criterion) {
    let n = 96;
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| ((i * 31 + j * 17 + i * j) % 3) as u32).collect())
        .collect();
    let m = FpMatrix::from_rows(3, n, &rows).unwrap();
    c.bench_function("rref 96x96 mod 3", |b| b.iter(|| black_box(m.rank())));
}

fn resolutions(c: &mut Criterion) {
    for name in ["D8", "Q8", "D16"] {
        let g = group(name);
        let k = KGModule::trivial(&g);
        c.bench_function(&format!("minimal resolution {name} to 10"), |b| {
            b.iter(|| black_box(minimal_resolution(&k, 10).unwrap().betti().to_vec()))
        });
    }
    let g = group("D8");
    c.bench_function("bar oracle D8 degree 4", |b| {
        b.iter(|| black_box(bar_cohomology_dim(&g, 4).unwrap()))
    });
}

fn rings(c: &mut Criterion) {
    let g = group("Q8");
    c.bench_function("ring presentation Q8 to 8", |b| {
        b.iter(|| {
            let ctx = GroupCohomology::new(&g, 8).unwrap();
            black_box(ring_presentation(&ctx).unwrap().generators.len())
        })
    });
    let g = group("Z2xZ4");
    c.bench_function("witness search Z2xZ4", |b| {
        b.iter(|| black_box(find_witness(&g, 4).unwrap().witness.map(|w| w.m())))
    });
}

fn certificates(c: &mut Criterion) {
    let g = group("D8");
    let rad = radical_module(&g);
    c.bench_function("certificate D8 radical", |b| {
        b.iter(|| {
            black_box(
                generation_certificate(&rad, &GenerationLimits::default())
                    .unwrap()
                    .root
                    .size(),
            )
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = linear_algebra, resolutions, rings, certificates
}
criterion_main!(benches);
