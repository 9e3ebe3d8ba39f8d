//! Sequential vs rayon sweeps: the band census and the full order-type recursion on each fixture.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use stralg::bands::Qba;
use stralg::error::DEFAULT_CAP;
use stralg::par::Exec;
use stralg::{hammock_order_type, Algebra, HammockKey, Side, Workspace};

const FIXTURES: [(&str, &str, &str, Side); 2] = [
    ("gamma0", include_str!("../fixtures/gamma0.alg"), "a0", Side::Plus),
    ("gamma", include_str!("../fixtures/gamma.alg"), "1(v,+)", Side::Plus),
];

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn key(alg: &Algebra, base: &str, side: Side) -> HammockKey {
    let x = if base.starts_with("1(") { alg.parse_str(base) } else { alg.parse_compact(base) };
    HammockKey::new(x.unwrap(), side)
}

fn band_census(c: &mut Criterion) {
    let mut g = c.benchmark_group("band_census");
    for (name, src, _, _) in FIXTURES {
        let alg = Algebra::parse(src).unwrap();
        for (label, exec) in EXECS {
            g.bench_function(format!("{name}/{label}"), |b| {
                b.iter(|| Qba::build(black_box(&alg), exec, DEFAULT_CAP).unwrap())
            });
        }
    }
    g.finish();
}

fn order_type(c: &mut Criterion) {
    let mut g = c.benchmark_group("order_type");
    for (name, src, base, side) in FIXTURES {
        for (label, exec) in EXECS {
            let ws = Workspace::with_exec(Algebra::parse(src).unwrap(), exec, DEFAULT_CAP).unwrap();
            let k = key(&ws.alg, base, side);
            g.bench_function(format!("{name}/{label}"), |b| b.iter(|| hammock_order_type(&ws, black_box(&k)).unwrap()));
        }
    }
    g.finish();
}

criterion_group!(benches, band_census, order_type);
criterion_main!(benches);
