//! Gaps of hammocks: almost periodic left N-strings, the location of a
//! limit in the completed condensation, the two catalogued completions and
//! a per-class gap census.

use serde::Serialize;

use crate::automaton::Algebra;
use crate::bands::{primitive_root, BandRep};
use crate::condensation::{same_band, BContext};
use crate::error::{Error, Result};
use crate::ordertype::{normalize, LinExpr};
use crate::presentation::{Letter, Side};
use crate::strings::Str;

/// The left N-string `^∞band · connector · base`. Words are in syllable
/// order: `connector[0]` sits directly above `base`, and the band repeats
/// above the connector starting from `band[0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AlmostPeriodic {
    pub band: Vec<Letter>,
    pub connector: Vec<Letter>,
    pub base: Str,
}

impl AlmostPeriodic {
    /// `band^laps · connector · base` as a finite string.
    pub fn prefix(&self, alg: &Algebra, laps: usize) -> Result<Str> {
        let mut u = self.connector.clone();
        for _ in 0..laps {
            u.extend_from_slice(&self.band);
        }
        let mut s = alg.state_of(&self.base);
        for &l in &u {
            s = alg.step(s, l).ok_or_else(|| Error::BadString("almost periodic word is not a string".into()))?;
        }
        let mut x = self.base.clone();
        x.syl.extend(u);
        Ok(x)
    }

    /// The first `n` syllables of the infinite word.
    fn letters(&self, n: usize) -> Vec<Letter> {
        self.base.syl.iter().chain(&self.connector).copied().chain(self.band.iter().copied().cycle()).take(n).collect()
    }

    /// Whether both describe the same left N-string.
    pub fn same_limit(&self, other: &AlmostPeriodic) -> bool {
        if !self.base.same_base(&other.base) {
            return false;
        }
        let head = (self.base.len() + self.connector.len()).max(other.base.len() + other.connector.len());
        let n = head + 2 * self.band.len() * other.band.len();
        self.letters(n) == other.letters(n)
    }

    pub fn render(&self, alg: &Algebra) -> String {
        let mut s = format!("^inf({})", alg.render_word(&self.band));
        if !self.connector.is_empty() {
            s.push('.');
            s.push_str(&alg.render_word(&self.connector));
        }
        s.push('.');
        s.push_str(&alg.compact(&self.base));
        s
    }
}

/// Where a gap sits in the completed condensation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GapLocation {
    /// The limit of an ω-ray of `l_B` iterates.
    Plus,
    /// The limit of an ω*-ray of `l̄_B` iterates.
    Minus,
    /// Domestic classes only: the limit of both an ω-ray and an ω*-ray.
    Both,
    /// Neither: an irrational position.
    Zero,
}

/// Location of the gap filled by `ap` among the gaps of the condensation.
pub fn classify_limit_location(ctx: &BContext<'_>, ap: &AlmostPeriodic) -> Result<GapLocation> {
    if !ctx.minimal {
        return Err(Error::Precondition("the class is not minimal for the hammock".into()));
    }
    let ws = ctx.ws;
    let alg = &ws.alg;
    if !alg.is_cyclic_valid(&ap.band) {
        return Err(Error::Precondition("the periodic part is not a band".into()));
    }
    let deep = ap.prefix(alg, 2 + alg.window().div_ceil(ap.band.len().max(1)))?;
    if !ctx.key.contains(&deep) {
        return Err(Error::Precondition("the left N-string is not in the hammock's completion".into()));
    }
    if ws.qba.class_of_band(alg, &ap.band) != Some(ctx.class) {
        return Err(Error::Precondition("the periodic part does not belong to the class".into()));
    }
    let ends = ws.band_ends(ctx.class);
    let hit = |set: &[BandRep]| set.iter().any(|b| same_band(&b.word, &ap.band));
    Ok(match (hit(&ends.ba_l), hit(&ends.ba_lbar)) {
        (true, true) => GapLocation::Both,
        (true, false) => GapLocation::Plus,
        (false, true) => GapLocation::Minus,
        (false, false) => GapLocation::Zero,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `(ω+ω*)·n`.
    DomesticBeamChain,
    /// `ω+ζ·η+ω*`, written `ω+Ξ(ζ)+ω*`.
    NondomesticBeam,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionReport {
    pub family: Family,
    /// The completion when it is again a finite description.
    pub expr: Option<LinExpr>,
    /// Added points that are limits of ω-rays, of ω*-rays, of both.
    pub plus: String,
    pub minus: String,
    pub both: String,
    pub zero: String,
    /// Whether the completion contains a real-indexed middle part.
    pub real_indexed_middle: bool,
}

fn omega() -> LinExpr {
    LinExpr::ProdOmega(Box::new(LinExpr::One))
}

fn omega_star() -> LinExpr {
    LinExpr::ProdOmegaStar(Box::new(LinExpr::One))
}

/// Completion of the two condensation shapes that occur for a single beam
/// chain; anything else is refused.
pub fn complete_catalog(e: &LinExpr) -> Result<CompletionReport> {
    let n = normalize(e);
    let pair = LinExpr::Sum(vec![omega(), omega_star()]);
    let copies = match &n {
        x if *x == pair => Some(1),
        LinExpr::ProdFin(a, k) if **a == pair => Some(*k),
        _ => None,
    };
    if let Some(k) = copies {
        let body = LinExpr::Sum(vec![omega(), LinExpr::One, omega_star()]);
        let expr = if k == 1 { body } else { LinExpr::ProdFin(Box::new(body), k) };
        return Ok(CompletionReport {
            family: Family::DomesticBeamChain,
            expr: Some(expr),
            plus: "none".into(),
            minus: "none".into(),
            both: format!("{k} points, one between each ω and the following ω*"),
            zero: "none".into(),
            real_indexed_middle: false,
        });
    }
    let zeta = LinExpr::Sum(vec![omega_star(), omega()]);
    let beam = LinExpr::Sum(vec![omega(), LinExpr::Shuffle(vec![zeta]), omega_star()]);
    if n == beam {
        return Ok(CompletionReport {
            family: Family::NondomesticBeam,
            expr: None,
            plus: "the point after the initial ω, and the point after the ω-half of every ζ-copy".into(),
            minus: "the point before the final ω*, and the point before the ω*-half of every ζ-copy".into(),
            both: "none".into(),
            zero: "one point for every irrational position of the η-indexed copies".into(),
            real_indexed_middle: true,
        });
    }
    Err(Error::Unsupported(format!("completion of {} is outside the catalogued families", n.render())))
}

/// One gap of a domestic condensation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapEntry {
    pub limit: AlmostPeriodic,
    pub location: GapLocation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapCensus {
    pub domestic: bool,
    /// Every gap, for domestic classes; empty otherwise.
    pub gaps: Vec<GapEntry>,
    /// Bands whose limits are PLUS gaps (`Ba_l`) and MINUS gaps (`Ba_l̄`).
    pub plus_bands: Vec<BandRep>,
    pub minus_bands: Vec<BandRep>,
    /// Whether irrational-position gaps exist.
    pub zero: bool,
}

pub fn gap_census(ctx: &BContext<'_>) -> Result<GapCensus> {
    let report = ctx.beam_structure()?;
    let class = &ctx.ws.qba.classes[ctx.class];
    let ends = ctx.ws.band_ends(ctx.class);
    let mut gaps = Vec::new();
    if class.domestic {
        for (lo, hi) in &report.beams {
            let up = ctx.ost_limit(lo, Side::Plus)?;
            let down = ctx.ost_limit(hi, Side::Minus)?;
            if !up.same_limit(&down) {
                return Err(Error::Invariant("the two rays of a domestic beam have different limits".into()));
            }
            let location = classify_limit_location(ctx, &up)?;
            gaps.push(GapEntry { limit: up, location });
        }
    }
    Ok(GapCensus {
        domestic: class.domestic,
        gaps,
        plus_bands: ends.ba_l,
        minus_bands: ends.ba_lbar,
        zero: !class.domestic && report.k_b > 0,
    })
}

/// Outcome of [`converge`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Convergence {
    Periodic(AlmostPeriodic),
    /// No period is confirmed by the data; the longest term is the known part
    /// of the limit.
    NonPeriodic(Str),
}

/// Limit of a strictly increasing sequence of strings. A period is accepted
/// when the automaton state of two terms agrees, the later one is the
/// earlier one with a word `w` inserted above it, and every remaining term
/// (at least two more laps) follows the same shift.
pub fn converge(alg: &Algebra, xs: &[Str]) -> Result<Convergence> {
    for w in xs.windows(2) {
        if !(w[0].is_left_substring_of(&w[1]) && w[0].len() < w[1].len()) {
            return Err(Error::Precondition("sequence is not strictly increasing under ⊑_l".into()));
        }
    }
    let Some(last) = xs.last() else {
        return Err(Error::Precondition("empty sequence".into()));
    };
    let states: Vec<_> = xs.iter().map(|x| alg.state_of(x)).collect();
    for n in 1..xs.len() {
        for j in 0..n {
            let p = n - j;
            if states[j] != states[n] || n + 2 * p >= xs.len() {
                continue;
            }
            let at = xs[j].len();
            let shift = &xs[n].syl[at..];
            let follows = (n + 1..xs.len()).all(|m| {
                let mut syl = xs[m - p].syl[..at].to_vec();
                syl.extend_from_slice(shift);
                syl.extend_from_slice(&xs[m - p].syl[at..]);
                syl == xs[m].syl
            });
            if follows {
                let (mut band, _) = primitive_root(shift);
                let mut connector = xs[j].syl[xs[0].len()..].to_vec();
                while !connector.is_empty() && connector.last() == band.last() {
                    connector.pop();
                    band.rotate_right(1);
                }
                return Ok(Convergence::Periodic(AlmostPeriodic { band, connector, base: xs[0].clone() }));
            }
        }
    }
    Ok(Convergence::NonPeriodic(last.clone()))
}
