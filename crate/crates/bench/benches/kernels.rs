use criterion::{black_box, criterion_group, criterion_main, Criterion};
use helix_steiner::helix::input_point;
use helix_steiner::optimize::{self, closed_form_minimum, MinimizeOptions};
use helix_steiner::oracle::{self, OracleOptions, RelaxOptions};
use helix_steiner::stability::{self, PChainSpec};
use helix_steiner::{srf, HelixParams, Point3, SearchBox};

fn params() -> HelixParams {
    let (w, a, _) = closed_form_minimum();
    HelixParams::new(w, a).unwrap()
}

fn ratio(c: &mut Criterion) {
    let p = params();
    c.bench_function("srf m_max=12", |b| {
        b.iter(|| srf::srf(black_box(p), 12).unwrap())
    });
    c.bench_function("minimize_srf default", |b| {
        b.iter(|| {
            optimize::minimize_srf(&SearchBox::default(), &MinimizeOptions::default()).unwrap()
        })
    });
}

fn oracle_bench(c: &mut Criterion) {
    let pts: Vec<Point3> = (0..6).map(|j| input_point(j, params())).collect();
    c.bench_function("smt n=6", |b| {
        b.iter(|| oracle::smt(black_box(&pts), &OracleOptions::default()).unwrap())
    });
}

fn chain(c: &mut Criterion) {
    let spec = PChainSpec::with_r3_radius(32, 3, params()).unwrap();
    c.bench_function("relax p=3 chain n=32", |b| {
        b.iter(|| stability::relax_p_chain(black_box(&spec), &RelaxOptions::default()))
    });
}

criterion_group!(benches, ratio, oracle_bench, chain);
criterion_main!(benches);
