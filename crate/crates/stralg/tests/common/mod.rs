//! Seeded property checks shared by the property tests and the acceptance
//! target. Each check runs `cases` random cases and reports the first
//! counterexample.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stralg::ordertype::{prefix_check, walk, OrderTyper};
use stralg::{compare_l, normalize, Algebra, HammockKey, Letter, LinExpr, Side, Str, Workspace};

pub const SEED: u64 = 0x5E_ED0F_4A33;
pub const CASES: usize = 1000;

pub const FIXTURES: [(&str, &str); 4] = [
    ("gamma0", include_str!("../../fixtures/gamma0.alg")),
    ("gamma", include_str!("../../fixtures/gamma.alg")),
    ("gamma_prime", include_str!("../../fixtures/gamma_prime.alg")),
    ("gamma_second", include_str!("../../fixtures/gamma_second.alg")),
];

pub fn workspaces() -> Vec<Workspace> {
    FIXTURES.iter().map(|(_, src)| Workspace::new(Algebra::parse(src).unwrap()).unwrap()).collect()
}

pub type Check = std::result::Result<(), String>;

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

/// A random string of at most `max` syllables, grown by a random walk.
pub fn random_string(alg: &Algebra, rng: &mut ChaCha8Rng, max: usize) -> Str {
    let v = rng.gen_range(0..alg.spec.vertices.len());
    let j = if rng.gen() { Side::Plus } else { Side::Minus };
    let mut x = Str::zero(v, j);
    let n = rng.gen_range(0..=max);
    for _ in 0..n {
        let next: Vec<Letter> = alg.transitions(alg.state_of(&x)).map(|(l, _)| l).collect();
        match next.choose(rng) {
            Some(&l) => x = x.with(l),
            None => break,
        }
    }
    x
}

/// A random hammock key whose hammock has more than one element.
pub fn random_key(alg: &Algebra, rng: &mut ChaCha8Rng) -> HammockKey {
    loop {
        let base = random_string(alg, rng, 4);
        let side = if rng.gen() { Side::Plus } else { Side::Minus };
        if alg.step_sign(alg.state_of(&base), side).is_some() {
            return HammockKey::new(base, side);
        }
    }
}

/// A random element of the hammock at most `depth` letters above the base.
pub fn random_element(alg: &Algebra, key: &HammockKey, rng: &mut ChaCha8Rng, depth: usize) -> Str {
    let mut x = key.base.clone();
    let n = rng.gen_range(0..=depth);
    if n == 0 {
        return x;
    }
    let (l, _) = alg.step_sign(alg.state_of(&x), key.side).expect("non-trivial hammock");
    x = x.with(l);
    for _ in 1..n {
        let next: Vec<Letter> = alg.transitions(alg.state_of(&x)).map(|(l, _)| l).collect();
        match next.choose(rng) {
            Some(&l) => x = x.with(l),
            None => break,
        }
    }
    x
}

/// `<_l` from the definition, on the literal renderings.
fn oracle_cmp(alg: &Algebra, x: &Str, y: &Str) -> Ordering {
    let toks = |s: &Str| -> Vec<String> {
        let r = alg.render(s);
        let mut t: Vec<String> = if s.syl.is_empty() { Vec::new() } else { r.split('.').map(String::from).collect() };
        t.reverse();
        t
    };
    let (a, b) = (toks(x), toks(y));
    let k = a.iter().zip(&b).take_while(|(p, q)| p == q).count();
    let score = |t: Option<&String>| match t {
        None => 0,
        Some(s) if s.ends_with('\'') => 1,
        Some(_) => -1,
    };
    score(a.get(k)).cmp(&score(b.get(k)))
}

pub fn succ_pred_inversion(cases: usize) -> Check {
    let ws = workspaces();
    let mut r = rng(1);
    for _ in 0..cases {
        let w = ws.choose(&mut r).unwrap();
        let alg = &w.alg;
        let key = random_key(alg, &mut r);
        let x = random_element(alg, &key, &mut r, 10);
        if let Some(y) = alg.succ_l(&key, &x).unwrap() {
            if alg.pred_l(&key, &y).unwrap().as_ref() != Some(&x) {
                return Err(format!("pred(succ({})) differs", alg.compact(&x)));
            }
        }
        if let Some(z) = alg.pred_l(&key, &x).unwrap() {
            if alg.succ_l(&key, &z).unwrap().as_ref() != Some(&x) {
                return Err(format!("succ(pred({})) differs", alg.compact(&x)));
            }
        }
    }
    Ok(())
}

/// `compare_l` agrees with the definition on random pairs, and nothing in a
/// depth-12 enumeration falls strictly between `x` and `succ(x)`.
pub fn order_matches_oracle(cases: usize) -> Check {
    let ws = workspaces();
    let mut r = rng(2);
    for _ in 0..cases {
        let w = ws.choose(&mut r).unwrap();
        let alg = &w.alg;
        let key = random_key(alg, &mut r);
        let x = random_element(alg, &key, &mut r, 12);
        let y = random_element(alg, &key, &mut r, 12);
        if compare_l(&x, &y).unwrap() != oracle_cmp(alg, &x, &y) {
            return Err(format!("compare_l({}, {}) disagrees", alg.compact(&x), alg.compact(&y)));
        }
    }
    for _ in 0..cases / 50 {
        let w = ws.choose(&mut r).unwrap();
        let alg = &w.alg;
        let key = random_key(alg, &mut r);
        let all = alg.enumerate_hammock(&key, 12);
        for p in all.windows(2) {
            if oracle_cmp(alg, &p[0], &p[1]) != Ordering::Less {
                return Err(format!("enumeration out of order at {}", alg.compact(&p[0])));
            }
        }
        for _ in 0..50 {
            let x = all.choose(&mut r).unwrap();
            if let Some(s) = alg.succ_l(&key, x).unwrap() {
                if all.iter().any(|z| compare_l(x, z).unwrap().is_lt() && compare_l(z, &s).unwrap().is_lt()) {
                    return Err(format!("an element lies between {} and its successor", alg.compact(x)));
                }
            }
        }
    }
    Ok(())
}

/// Random (key, class) contexts over reachable classes.
fn random_context<'w>(ws: &'w [Workspace], r: &mut ChaCha8Rng) -> Option<stralg::BContext<'w>> {
    for _ in 0..100 {
        let w = ws.choose(r).unwrap();
        let key = random_key(&w.alg, r);
        let reach = w.qba.reachable_classes(&w.alg, &key);
        if let Some(&c) = reach.classes.choose(r) {
            return Some(w.context(key, c).unwrap());
        }
    }
    None
}

pub fn condensation_laws(cases: usize) -> Check {
    let ws = workspaces();
    let mut r = rng(3);
    for _ in 0..cases {
        let Some(ctx) = random_context(&ws, &mut r) else { return Err("no context with a reachable class".into()) };
        let alg = &ctx.ws.alg;
        let x = random_element(alg, &ctx.key, &mut r, 10);
        let y = random_element(alg, &ctx.key, &mut r, 10);
        let (cx, cy) = (ctx.c_b(&x).unwrap(), ctx.c_b(&y).unwrap());
        if ctx.c_b(&cx).unwrap() != cx {
            return Err(format!("c_B not idempotent at {}", alg.compact(&x)));
        }
        if compare_l(&x, &y).unwrap().is_le() && compare_l(&cx, &cy).unwrap().is_gt() {
            return Err(format!("c_B not monotone on {} <= {}", alg.compact(&x), alg.compact(&y)));
        }
        let phi = ctx.phi(&x).unwrap();
        if ctx.in_ost_any(&x) {
            if cx != x {
                return Err(format!("c_B moves the OST element {}", alg.compact(&x)));
            }
        } else if phi == 0 {
            return Err(format!("phi_B vanishes off OST at {}", alg.compact(&x)));
        }
    }
    Ok(())
}

/// No OST element of a depth-10 enumeration lies strictly between `x` and
/// its OST-neighbour.
pub fn ost_neighbour_gaps(cases: usize) -> Check {
    let ws = workspaces();
    let mut r = rng(4);
    let mut done = 0;
    while done < cases {
        let Some(ctx) = random_context(&ws, &mut r) else { return Err("no context with a reachable class".into()) };
        let alg = &ctx.ws.alg;
        let ost: Vec<Str> = alg.enumerate_hammock(&ctx.key, 10).into_iter().filter(|x| ctx.in_ost_any(x)).collect();
        for _ in 0..20 {
            done += 1;
            let x = ost.choose(&mut r).unwrap();
            for dir in [Side::Plus, Side::Minus] {
                if !ctx.in_ost(x, dir) {
                    continue;
                }
                let Some(y) = ctx.neighbor(x, dir).unwrap() else { continue };
                let (lo, hi) = if dir == Side::Plus { (x, &y) } else { (&y, x) };
                if !compare_l(lo, hi).unwrap().is_lt() {
                    return Err(format!("neighbour of {} on the wrong side", alg.compact(x)));
                }
                if let Some(z) =
                    ost.iter().find(|z| compare_l(lo, z).unwrap().is_lt() && compare_l(z, hi).unwrap().is_lt())
                {
                    return Err(format!("{} lies between {} and its neighbour", alg.compact(z), alg.compact(x)));
                }
            }
        }
    }
    Ok(())
}

pub fn rotation_distinctness() -> Check {
    for w in workspaces() {
        for b in w.qba.primes() {
            for (r, rot) in b.rotations().iter().enumerate().skip(1) {
                if *rot == b.word {
                    return Err(format!("band {} equals its {r}-rotation", w.alg.render_word(&b.word)));
                }
            }
        }
    }
    Ok(())
}

/// Left extension words of a non-zero string `x` with at most `n` letters.
fn extensions(alg: &Algebra, x: &Str, n: usize) -> BTreeSet<Vec<Letter>> {
    let mut out = BTreeSet::new();
    let mut stack = vec![Vec::new()];
    while let Some(u) = stack.pop() {
        if u.len() < n {
            for l in alg.spec.letters() {
                let mut syl = x.syl.clone();
                syl.extend(&u);
                syl.push(l);
                if alg.mk_string(&syl).is_ok() {
                    let mut v = u.clone();
                    v.push(l);
                    stack.push(v);
                }
            }
        }
        out.insert(u);
    }
    out
}

pub fn h_equivalence_brute_force(cases: usize) -> Check {
    let ws = workspaces();
    let mut r = rng(5);
    let mut done = 0;
    while done < cases {
        let w = ws.choose(&mut r).unwrap();
        let alg = &w.alg;
        let x = random_string(alg, &mut r, 7);
        let y = random_string(alg, &mut r, 7);
        if x.syl.is_empty() || y.syl.is_empty() || alg.end_point(&x) != alg.end_point(&y) {
            continue;
        }
        done += 1;
        let brute = extensions(alg, &x, 8) == extensions(alg, &y, 8);
        if alg.h_equivalent(&x, &y) != brute {
            return Err(format!("h_equivalent({}, {}) != {brute}", alg.compact(&x), alg.compact(&y)));
        }
    }
    Ok(())
}

pub fn random_expr(r: &mut ChaCha8Rng, depth: u32) -> LinExpr {
    let leaf = depth == 0 || r.gen_bool(0.3);
    if leaf {
        return match r.gen_range(0..5) {
            0 => LinExpr::One,
            1 => LinExpr::Fin(r.gen_range(2..5)),
            2 => LinExpr::omega(),
            3 => LinExpr::omega_star(),
            _ => LinExpr::zeta(),
        };
    }
    let sub = |r: &mut ChaCha8Rng| Box::new(random_expr(r, depth - 1));
    match r.gen_range(0..5) {
        0 | 1 => LinExpr::Sum((0..r.gen_range(2..5)).map(|_| random_expr(r, depth - 1)).collect()),
        2 => LinExpr::ProdOmega(sub(r)),
        3 => LinExpr::ProdOmegaStar(sub(r)),
        _ => {
            if r.gen_bool(0.5) {
                LinExpr::ProdFin(sub(r), r.gen_range(2..4))
            } else {
                LinExpr::Shuffle((0..r.gen_range(1..4)).map(|_| random_expr(r, depth - 1)).collect())
            }
        }
    }
}

/// `normalize` is idempotent and keeps both end walks.
pub fn normalizer_laws(cases: usize) -> Check {
    let mut r = rng(6);
    for _ in 0..cases {
        let e = random_expr(&mut r, 3);
        let n = normalize(&e);
        if normalize(&n) != n {
            return Err(format!("normalize is not idempotent on {}", e.render()));
        }
        for left in [true, false] {
            if walk(&e, left, 60) != walk(&n, left, 60) {
                return Err(format!("normalize changes the walk of {} into {}", e.render(), n.render()));
            }
        }
    }
    Ok(())
}

/// The recursion stays within the reachable class count and its result
/// matches the hammock walks from both ends.
pub fn recursion_laws(cases: usize) -> Check {
    let ws = workspaces();
    let mut r = rng(7);
    for _ in 0..cases {
        let w = ws.choose(&mut r).unwrap();
        let key = random_key(&w.alg, &mut r);
        let report = OrderTyper::new(w).run(&key).map_err(|e| format!("{}: {e}", w.alg.compact(&key.base)))?;
        if report.max_depth > report.reachable {
            return Err(format!("depth {} exceeds {} classes", report.max_depth, report.reachable));
        }
        if !prefix_check(w, &report.expr, &key, 40) {
            return Err(format!(
                "{} for ({}, {}) fails the walk check",
                report.expr.render(),
                w.alg.compact(&key.base),
                key.side.symbol()
            ));
        }
    }
    Ok(())
}
