//! Acceptance suite: one PASS/FAIL line per criterion. All checks are exact;
//! the only tolerances are the wall-clock budgets below.

mod common;

use std::time::{Duration, Instant};

use stralg::completion::{classify_limit_location, gap_census, GapLocation};
use stralg::condensation::same_band;
use stralg::ordertype::OrderTyper;
use stralg::{hammock_order_type, normalize, parse_expr, Algebra, BContext, HammockKey, Side, Str, Workspace};

/// Wall-clock budget per criterion, in seconds.
const BUDGET_SECS: [u64; 10] = [5, 60, 60, 10, 5, 5, 2, 2, 5, 120];

type Check = std::result::Result<String, String>;
type Suite = (&'static str, fn() -> common::Check);
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ws(src: &str) -> Workspace {
    Workspace::new(Algebra::parse(src).unwrap()).unwrap()
}

fn g0() -> Workspace {
    ws(include_str!("../fixtures/gamma0.alg"))
}

fn s(w: &Workspace, t: &str) -> Str {
    if t.starts_with("1(") {
        w.alg.parse_str(t).unwrap()
    } else {
        w.alg.parse_compact(t).unwrap()
    }
}

fn key(w: &Workspace, base: &str, side: Side) -> HammockKey {
    HammockKey::new(s(w, base), side)
}

fn class_of(w: &Workspace, band: &str) -> usize {
    w.qba.class_of_band(&w.alg, &s(w, band).syl).unwrap()
}

fn names(w: &Workspace, xs: &[Str]) -> Vec<String> {
    xs.iter().map(|x| w.alg.compact(x)).collect()
}

fn nondomestic<'w>(w: &'w Workspace, k: HammockKey) -> BContext<'w> {
    let r = w.qba.reachable_classes(&w.alg, &k);
    let c = r.classes.iter().copied().find(|&c| !w.qba.classes[c].domestic).unwrap();
    w.context(k, c).unwrap()
}

fn c1_class_census() -> Check {
    let w = g0();
    let k = key(&w, "a0", Side::Plus);
    let r = w.qba.reachable_classes(&w.alg, &k);
    ensure(r.classes.len() == 4, format!("{} reachable classes", r.classes.len()))?;
    let groups: [(&[&str], bool); 4] = [
        (&["b1B4b3B2"], true),
        (&["d1D2", "d3D4"], false),
        (&["e3E2E1", "g4G3g2G1", "k1K2"], false),
        (&["m1M2"], true),
    ];
    let mut ids = Vec::new();
    for (bands, domestic) in groups {
        let c = class_of(&w, bands[0]);
        ensure(r.classes.contains(&c), format!("{} not reachable", bands[0]))?;
        for b in bands {
            ensure(class_of(&w, b) == c, format!("{b} is not in the class of {}", bands[0]))?;
        }
        ensure(w.qba.classes[c].domestic == domestic, format!("domesticity of {}", bands[0]))?;
        ids.push(c);
    }
    let rel: Vec<(usize, usize)> =
        w.qba.order.iter().copied().filter(|(a, b)| ids.contains(a) && ids.contains(b)).collect();
    let mut want = vec![(ids[0], ids[1]), (ids[2], ids[3])];
    want.sort();
    let mut got = rel.clone();
    got.sort();
    ensure(got == want, "order relations differ from B1<B2, B3<B4")?;
    let mut minimal = r.minimal.clone();
    minimal.sort();
    let mut want_min = vec![ids[0], ids[2]];
    want_min.sort();
    ensure(minimal == want_min, "minimal classes differ from {B1, B3}")?;
    let extra: Vec<String> = w.qba.classes[ids[2]]
        .primes
        .iter()
        .filter(|p| !["e3E2E1", "g4G3g2G1", "k1K2"].iter().any(|b| same_band(&p.word, &s(&w, b).syl)))
        .map(|p| w.alg.render_word(&p.word))
        .collect();
    Ok(format!("4 classes, B1<B2, B3<B4, minimal {{B1,B3}}; further B3 primes {extra:?}"))
}

fn c2_main_result() -> Check {
    let w = g0();
    let got = hammock_order_type(&w, &key(&w, "a0", Side::Plus)).map_err(|e| e.to_string())?;
    let want = normalize(&parse_expr("((w+xi(z)+w*).w+w*).2 + w + xi(z,z,w*+(w+w*).w) + w*").unwrap());
    ensure(got == want, format!("got {got}, want {want}"))?;
    Ok(got.render())
}

fn c3_sub_results() -> Check {
    let w = g0();
    let k = key(&w, "E2E1A2A1a0", Side::Minus);
    let got = hammock_order_type(&w, &k).map_err(|e| e.to_string())?;
    let want = normalize(&parse_expr("w+xi(z,z,w*+(w+w*).w)+w*").unwrap());
    ensure(got == want, format!("fiber type {got}"))?;
    let b3 = class_of(&w, "e3E2E1");
    let ctx = w.context(k, b3).unwrap();
    let mut types: Vec<String> = OrderTyper::new(&w)
        .center_intervals(&ctx)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|(_, e)| e.render())
        .collect();
    types.sort();
    ensure(types == ["w*+(w+w*).w", "z", "z"], format!("center intervals {types:?}"))?;
    let kb3 = ctx.beam_structure().map_err(|e| e.to_string())?.k_b;
    let b2 = w.context(key(&w, "d1cb3B2b1a4a3A1a0", Side::Plus), class_of(&w, "d1D2")).unwrap();
    ensure(b2.minimal, "B2 is not minimal in its fiber")?;
    let kb2 = b2.beam_structure().map_err(|e| e.to_string())?.k_b;
    let b1 = w.context(key(&w, "a0", Side::Plus), class_of(&w, "b1B4b3B2")).unwrap();
    let kb1 = b1.beam_structure().map_err(|e| e.to_string())?.k_b;
    ensure((kb3, kb2, kb1) == (3, 1, 0), format!("k_B = {kb3}, {kb2}, {kb1}"))?;
    Ok(format!("{got}; centers {types:?}; k_B3=3 k_B2=1 k_B1=0"))
}

/// OST∖STB split into the part that reaches the class and the proper
/// prefixes of the hammock maximum, which lie in OST_1 by definition.
fn c4_finite_sets() -> Check {
    let w = g0();
    let k = key(&w, "a0", Side::Plus);
    let mut report = Vec::new();
    for (band, want) in [("b1B4b3B2", vec!["A1a0", "a0", "a3A1a0"]), ("e3E2E1", vec!["A1a0", "a0"])] {
        let ctx = w.context(k.clone(), class_of(&w, band)).unwrap();
        let t = ctx.tables();
        let mut reaching = Vec::new();
        let mut via_max = Vec::new();
        for x in w.alg.enumerate_hammock(&k, 10) {
            let st = w.alg.state_of(&x);
            if !ctx.in_ost_any(&x) || t.st(st, Side::Plus) || t.st(st, Side::Minus) {
                continue;
            }
            let reaches = x.len() == k.base.len() || t.ost(st, Side::Plus) || t.ost(st, Side::Minus);
            if reaches {
                reaching.push(w.alg.compact(&x));
            } else {
                via_max.push(w.alg.compact(&x));
            }
        }
        reaching.sort();
        ensure(reaching == want, format!("{band}: {reaching:?}"))?;
        report.push(format!("{band}: {reaching:?} + {} prefixes of M", via_max.len()));
    }
    let b1 = w.context(k, class_of(&w, "b1B4b3B2")).unwrap();
    let r = b1.beam_structure().map_err(|e| e.to_string())?;
    let got = names(&w, &r.boundaries);
    ensure(got == ["a0", "a3A1a0", "A1a0"] && r.n_b == 2, format!("boundaries {got:?}, n_B = {}", r.n_b))?;
    let split = names(&w, &r.split_points());
    ensure(split == ["a0", "a0", "a3A1a0", "A1a0", "H1G1FE2E1A2A1a0"], format!("split points {split:?}"))?;
    report.push(format!("B1 boundaries {got:?}, n_B = 2"));
    Ok(report.join("; "))
}

fn c5_limits() -> Check {
    let w = g0();
    let ctx = w.context(key(&w, "a0", Side::Plus), class_of(&w, "e3E2E1")).unwrap();
    let lim = ctx.ost_limit(&s(&w, "A2A1a0"), Side::Plus).map_err(|e| e.to_string())?;
    ensure(lim.render(&w.alg) == "^inf(e3E2E1).A2A1a0", lim.render(&w.alg))?;
    let g = ws(include_str!("../fixtures/gamma.alg"));
    let k = key(&g, "1(v,+)", Side::Plus);
    let plain = g.plain_limit(&k, &k.base, Side::Plus).map_err(|e| e.to_string())?;
    ensure(plain.render(&g.alg) == "^inf(cbaEbafcbD).1(v,+)", plain.render(&g.alg))?;
    Ok(format!("{}; {}", lim.render(&w.alg), plain.render(&g.alg)))
}

fn c6_band_ends() -> Check {
    let w = g0();
    let ends = w.band_ends(class_of(&w, "e3E2E1"));
    let bar: Vec<String> = ends.ba_lbar.iter().map(|b| w.alg.render_word(&b.word)).collect();
    ensure(bar.len() == 1 && same_band(&ends.ba_lbar[0].word, &s(&w, "k1K2").syl), format!("Ba_lbar {bar:?}"))?;
    ensure(ends.ba_l.len() == 2, format!("{} bands in Ba_l", ends.ba_l.len()))?;
    let g = &s(&w, "g4G3g2G1").syl;
    ensure(ends.ba_l.iter().any(|b| same_band(&b.word, g)), "g4G3g2G1 missing from Ba_l")?;
    let e = ends.ba_l.iter().find(|b| !same_band(&b.word, g)).unwrap();
    let letters: String = w.alg.render_word(&e.word);
    ensure(
        letters.chars().filter(|c| c.is_ascii_alphabetic()).all(|c| c.eq_ignore_ascii_case(&'e')),
        "second band is not on e-letters",
    )?;
    let valid = w.alg.is_cyclic_valid(&s(&w, "e3E2E1").syl);
    let other = ["e3", "e2", "E1"].map(|t| w.alg.parse_compact(t).unwrap().syl[0]);
    let mut word = other.to_vec();
    word.reverse();
    let other_valid = w.alg.is_cyclic_valid(&word);
    ensure(valid && !other_valid && same_band(&e.word, &s(&w, "e3E2E1").syl), "e-band spelling")?;
    Ok(format!("Ba_lbar {bar:?}; Ba_l e-band {letters} (e3E2E1 is a band, e3e2E1 is not)"))
}

fn c7_gamma_prime() -> Check {
    let w = ws(include_str!("../fixtures/gamma_prime.alg"));
    let f = s(&w, "f");
    let g = s(&w, "feDf");
    let j = f.parity.symbol();
    let ctx = nondomestic(&w, key(&w, &format!("1(v5,{j})"), Side::Minus));
    ensure(ctx.b_equivalent(&f, &g).map_err(|e| e.to_string())?, "f and feDf are not B-equivalent")?;
    ensure(!w.alg.h_equivalent(&f, &g), "f and feDf are H-equivalent")?;
    let mut syl = f.syl.clone();
    syl.extend(w.alg.h_witness(&f, &g).unwrap());
    let witness = w.alg.compact(&w.alg.mk_string(&syl).unwrap());
    ensure(witness == "acf", format!("witness {witness}"))?;
    Ok(format!("f ≡_B feDf, not ≡_H, witness {witness}"))
}

fn c8_gamma_second() -> Check {
    let w = ws(include_str!("../fixtures/gamma_second.alg"));
    let ctx = nondomestic(&w, key(&w, "a1", Side::Minus));
    let x = s(&w, "a2a1");
    ensure(ctx.st_ost_membership(&x).st.len() == 2, "a2a1 is not in St_{±1}")?;
    ensure(!ctx.is_center(&x).map_err(|e| e.to_string())?, "a2a1 is a center")?;
    Ok("a2a1 in St_{±1}, not a center".into())
}

fn c9_gaps() -> Check {
    let w = g0();
    let k = key(&w, "a0", Side::Plus);
    let b3 = w.context(k.clone(), class_of(&w, "e3E2E1")).unwrap();
    let up = b3.ost_limit(&s(&w, "A2A1a0"), Side::Plus).map_err(|e| e.to_string())?;
    let down = b3.ost_limit(&s(&w, "H1G1FE2E1A2A1a0"), Side::Minus).map_err(|e| e.to_string())?;
    let lu = classify_limit_location(&b3, &up).map_err(|e| e.to_string())?;
    let ld = classify_limit_location(&b3, &down).map_err(|e| e.to_string())?;
    ensure((lu, ld) == (GapLocation::Plus, GapLocation::Minus), format!("{lu:?}, {ld:?}"))?;
    let b1 = w.context(k, class_of(&w, "b1B4b3B2")).unwrap();
    let census = gap_census(&b1).map_err(|e| e.to_string())?;
    ensure(census.domestic && !census.zero, "domestic census reports irrational gaps")?;
    ensure(census.gaps.iter().all(|g| g.location != GapLocation::Zero), "domestic gap tagged ZERO")?;
    Ok(format!(
        "{} -> {lu:?}; {} -> {ld:?}; B1 census {} gaps, none ZERO",
        up.render(&w.alg),
        down.render(&w.alg),
        census.gaps.len()
    ))
}

fn c10_properties() -> Check {
    let n = common::CASES;
    let suites: [Suite; 8] = [
        ("succ/pred", || common::succ_pred_inversion(common::CASES)),
        ("compare_l", || common::order_matches_oracle(common::CASES)),
        ("c_B", || common::condensation_laws(common::CASES)),
        ("OST gaps", || common::ost_neighbour_gaps(common::CASES)),
        ("rotations", common::rotation_distinctness),
        ("H-equivalence", || common::h_equivalence_brute_force(common::CASES)),
        ("normalizer", || common::normalizer_laws(common::CASES)),
        ("recursion", || common::recursion_laws(common::CASES)),
    ];
    for (name, f) in suites {
        f().map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("8 suites, {n} cases each, seed {:#x}", common::SEED))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("class census", c1_class_census),
        ("main order type", c2_main_result),
        ("fiber and center types, k_B", c3_sub_results),
        ("finite sets and beams", c4_finite_sets),
        ("limits", c5_limits),
        ("band ends", c6_band_ends),
        ("B- vs H-equivalence", c7_gamma_prime),
        ("non-center in St_{±1}", c8_gamma_second),
        ("gap classification", c9_gaps),
        ("property suites", c10_properties),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let out = match out {
            Ok(_) if took > Duration::from_secs(BUDGET_SECS[i]) => {
                Err(format!("took {took:.2?}, budget {}s", BUDGET_SECS[i]))
            }
            o => o,
        };
        match &out {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({took:.2?}): {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL {name} ({took:.2?}): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
