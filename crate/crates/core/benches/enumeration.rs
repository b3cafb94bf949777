use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fqpoints::catalog::Family;
use fqpoints::counting::{classify_points, count_multihomogeneous_zeros};
use fqpoints::exec::{Env, DEFAULT_BUDGET};
use fqpoints::gf::parse_field;
use fqpoints::mpoly::MultiPoly;
use fqpoints::valueset::{chi, ValueSetFamily};

fn envs() -> [(&'static str, Env); 2] {
    [
        ("sequential", Env::sequential(DEFAULT_BUDGET)),
        ("parallel", Env::new(0, DEFAULT_BUDGET)),
    ]
}

fn classify(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify");
    g.sample_size(10);
    for (field, fam) in [("13", Family::QuadricCone { n: 4 }), ("7", Family::TwoQuadricsCone { n: 5 })] {
        let inst = fam.build(&parse_field(field).unwrap()).unwrap();
        for (label, env) in envs() {
            g.bench_with_input(BenchmarkId::new(label, format!("{}@{field}", inst.name())), &inst, |b, inst| {
                b.iter(|| classify_points(&inst.spec, &env).unwrap())
            });
        }
    }
    g.finish();
}

fn multihomogeneous(c: &mut Criterion) {
    let f = parse_field("3^2").unwrap();
    let poly = MultiPoly::random_multihomogeneous(&f, &[3, 3, 2], &[2, 1, 3], 5).unwrap();
    let mut g = c.benchmark_group("multihomogeneous");
    g.sample_size(10);
    for (label, env) in envs() {
        g.bench_function(label, |b| b.iter(|| count_multihomogeneous_zeros(&poly, &env).unwrap()));
    }
    g.finish();
}

fn allowable_subsets(c: &mut Criterion) {
    let f = parse_field("13").unwrap();
    let fam = ValueSetFamily::new(&f, 6, 3, vec![f.one(), f.zero(), f.from_int(2)]).unwrap();
    let mut g = c.benchmark_group("chi");
    g.sample_size(10);
    for (label, env) in envs() {
        g.bench_function(label, |b| b.iter(|| chi(&fam, 6, &env).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, classify, multihomogeneous, allowable_subsets);
criterion_main!(benches);
