//! Strings visible from a band class: the sets St/OSt/OST, the condensation
//! maps `c_B` and `φ_B`, the OST neighbour operators and their limits,
//! exits, B-equivalence, centers and the beam decomposition.
//!
//! Every membership question here depends only on the automaton state of a
//! string plus whether it is a left substring of one of the two hammock
//! extremes, so the work is done once per class as per-state tables.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::automaton::{Algebra, ExtState, StateId};
use crate::bands::{canonical_rotation, primitive_root, rotations, BandRep, Qba};
use crate::completion::AlmostPeriodic;
use crate::error::{Error, Result, DEFAULT_CAP};
use crate::hammock::{compare_l, HammockKey};
use crate::par::{self, Exec};
use crate::presentation::{Letter, Side, VertexId};
use crate::strings::Str;

/// Upper bound on neighbour iterations while looking for a recurrence.
pub const RAY_CAP: usize = 20_000;

fn slot(j: Side) -> usize {
    usize::from(j == Side::Plus)
}

const SIDES: [Side; 2] = [Side::Minus, Side::Plus];

/// `(t(x), ε(x))` of any string whose state is `s`.
fn state_end(alg: &Algebra, s: StateId) -> (VertexId, Side) {
    match alg.state(s) {
        ExtState::Zero(v, j) => (*v, *j),
        ExtState::Window(w) => {
            let l = *w.last().expect("windows are non-empty");
            (alg.spec.end(l), alg.spec.eps_of(l))
        }
    }
}

/// Per-state membership tables for one class.
#[derive(Clone, Debug)]
pub struct ClassTables {
    pub class: usize,
    in_class: Vec<bool>,
    /// `st[s][j]`: some cycle `c` of the class with `θ(c) = j` can be prepended.
    st: Vec<[bool; 2]>,
    /// `ost[s][j]`: some `u` with `θ(u) = j` leads into `St_{+1} ∪ St_{-1}`.
    ost: Vec<[bool; 2]>,
    center: Vec<bool>,
}

impl ClassTables {
    pub fn build(alg: &Algebra, qba: &Qba, class: usize) -> ClassTables {
        let n = alg.n_states();
        let in_class: Vec<bool> = (0..n).map(|s| qba.class_of_state(s) == Some(class)).collect();
        // A cycle prepended to x reads its first `window` letters from the
        // state of x and lands on a component state; nothing else constrains it.
        let mut can = in_class.clone();
        for _ in 1..alg.window() {
            can = (0..n).map(|s| alg.transitions(s).any(|(_, t)| can[t])).collect();
        }
        let st: Vec<[bool; 2]> =
            (0..n).map(|s| SIDES.map(|j| alg.step_sign(s, j).is_some_and(|(_, t)| can[t]))).collect();

        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for s in 0..n {
            for (_, t) in alg.transitions(s) {
                preds[t].push(s);
            }
        }
        let mut reach: Vec<bool> = st.iter().map(|p| p[0] || p[1]).collect();
        let mut queue: VecDeque<StateId> = (0..n).filter(|&s| reach[s]).collect();
        while let Some(t) = queue.pop_front() {
            for &s in &preds[t] {
                if !reach[s] {
                    reach[s] = true;
                    queue.push_back(s);
                }
            }
        }
        let ost: Vec<[bool; 2]> =
            (0..n).map(|s| SIDES.map(|j| alg.step_sign(s, j).is_some_and(|(_, t)| reach[t]))).collect();

        let mut tables = ClassTables { class, in_class, st, ost, center: vec![false; n] };
        tables.center = (0..n).map(|s| tables.center_by_arrival(alg, qba, s)).collect();
        tables
    }

    pub fn st(&self, s: StateId, j: Side) -> bool {
        self.st[s][slot(j)]
    }

    pub fn st_both(&self, s: StateId) -> bool {
        self.st[s] == [true, true]
    }

    pub fn ost(&self, s: StateId, j: Side) -> bool {
        self.ost[s][slot(j)]
    }

    pub fn is_center_state(&self, s: StateId) -> bool {
        self.center[s]
    }

    /// Center test through a single arriving syllable `γ`: `γ ∈ St_{±1}`
    /// and both `α·γ`, `β·γ` are factors of cycles of the class.
    fn center_by_arrival(&self, alg: &Algebra, qba: &Qba, s: StateId) -> bool {
        if !self.st_both(s) {
            return false;
        }
        let ext = alg.extensions(s);
        let (Some(a), Some(b)) = (ext.direct, ext.inverse) else {
            return false;
        };
        let end = state_end(alg, s);
        alg.spec.letters().any(|g| {
            if (alg.spec.end(g), alg.spec.eps_of(g)) != end {
                return false;
            }
            let Some(sg) = alg.state_id(&ExtState::Window(vec![g])) else {
                return false;
            };
            self.st_both(sg)
                && [a, b].iter().all(|&x| alg.step(sg, x).is_some() && qba.ext_membership(alg, &[g, x], self.class))
        })
    }

    /// Center test by cycle search: some cycle `c` of the class with `c·x`
    /// valid leaves `c·x` in `St_{±1}` with the same pair of extensions.
    pub fn center_by_cycles(&self, alg: &Algebra, s: StateId) -> bool {
        if !self.st_both(s) {
            return false;
        }
        let ext = alg.extensions(s);
        let mut words: Vec<(Vec<Letter>, StateId)> = vec![(Vec::new(), s)];
        for _ in 0..alg.window() {
            words = words
                .into_iter()
                .flat_map(|(w, t)| {
                    alg.transitions(t).map(move |(l, u)| {
                        let mut w = w.clone();
                        w.push(l);
                        (w, u)
                    })
                })
                .collect();
        }
        words.iter().filter(|(_, r)| self.in_class[*r]).any(|(p, r)| {
            (0..alg.n_states()).any(|t| {
                self.in_class[t]
                    && alg.read(t, p.iter().copied()) == Some(*r)
                    && self.st_both(t)
                    && alg.extensions(t) == ext
            })
        })
    }
}

/// An algebra with its band poset and the per-class tables.
#[derive(Debug)]
pub struct Workspace {
    pub alg: Algebra,
    pub qba: Qba,
    pub tables: Vec<ClassTables>,
    pub exec: Exec,
    pub cap: usize,
}

/// An exit `(β, b′)`: `β·b′` is a string leaving the rotation `b′`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exit {
    pub letter: Letter,
    pub rotation: Vec<Letter>,
    pub non_domestic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BandEnds {
    pub ba_l: Vec<BandRep>,
    pub ba_lbar: Vec<BandRep>,
    pub exits: Vec<(BandRep, Vec<Exit>)>,
}

impl Workspace {
    pub fn new(alg: Algebra) -> Result<Workspace> {
        Workspace::with_exec(alg, Exec::default(), DEFAULT_CAP)
    }

    pub fn with_exec(alg: Algebra, exec: Exec, cap: usize) -> Result<Workspace> {
        let qba = Qba::build(&alg, exec, cap)?;
        let tables = par::map_range(exec, qba.classes.len(), |c| ClassTables::build(&alg, &qba, c));
        Ok(Workspace { alg, qba, tables, exec, cap })
    }

    /// A context for `class`, which must be reachable from the key.
    pub fn context(&self, key: HammockKey, class: usize) -> Result<BContext<'_>> {
        let reach = self.qba.reachable_classes(&self.alg, &key);
        if !reach.classes.contains(&class) {
            return Err(Error::Precondition(format!("class {class} is not reachable from the hammock")));
        }
        let (min, max) = self.alg.extremal_strings(&key);
        Ok(BContext { ws: self, minimal: reach.minimal.contains(&class), key, class, min, max })
    }

    /// The context of the least minimal class, if any class is reachable.
    pub fn minimal_context(&self, key: HammockKey) -> Result<Option<BContext<'_>>> {
        let reach = self.qba.reachable_classes(&self.alg, &key);
        match reach.minimal.iter().min() {
            Some(&c) => self.context(key, c).map(Some),
            None => Ok(None),
        }
    }

    /// Exits of every prime of the class and the sets `Ba_l`, `Ba_l̄`.
    pub fn band_ends(&self, class: usize) -> BandEnds {
        let alg = &self.alg;
        let mut exits = Vec::new();
        let mut ba_l = Vec::new();
        let mut ba_lbar = Vec::new();
        for band in &self.qba.classes[class].primes {
            let mut list = Vec::new();
            for rot in band.rotations() {
                let s = alg.state_of(&alg.mk_string(&rot).expect("rotations of bands are strings"));
                for (l, _) in alg.transitions(s) {
                    if l == rot[0] {
                        continue;
                    }
                    let mut w = rot.clone();
                    w.push(l);
                    let non_domestic = self.qba.ext_membership(alg, &w, class);
                    list.push(Exit { letter: l, rotation: rot.clone(), non_domestic });
                }
            }
            if !list.iter().any(|e| e.non_domestic && !e.letter.inverse) {
                ba_l.push(band.clone());
            }
            if !list.iter().any(|e| e.non_domestic && e.letter.inverse) {
                ba_lbar.push(band.clone());
            }
            exits.push((band.clone(), list));
        }
        BandEnds { ba_l, ba_lbar, exits }
    }

    /// `⟨1,l⟩(x)` (or `⟨1,l̄⟩(x)`) for the plain neighbour operators.
    pub fn plain_limit(&self, key: &HammockKey, x: &Str, dir: Side) -> Result<AlmostPeriodic> {
        if !key.contains(x) {
            return Err(Error::Precondition("string is not in the hammock".into()));
        }
        let alg = &self.alg;
        let (min, max) = alg.extremal_strings(key);
        let ray = iterate(
            x,
            |y| Ok(alg.neighbour(key, y, dir)),
            |y| (!y.is_left_substring_of(&min) && !y.is_left_substring_of(&max)).then(|| alg.state_of(y)),
        )?;
        match ray {
            Ray::Finite(_) => Err(Error::Precondition("iteration reaches the end of the hammock".into())),
            Ray::Periodic(p) => Ok(p.limit(x)),
        }
    }
}

/// The iterates of a neighbour operator after the starting string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ray {
    /// The walk stops at a hammock extreme; the last iterate is that extreme.
    Finite(Vec<Str>),
    Periodic(Periodic),
}

/// `prefix`, then `period` repeated with `shift` inserted above
/// `period[0]` on every lap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Periodic {
    pub prefix: Vec<Str>,
    pub period: Vec<Str>,
    pub shift: Vec<Letter>,
}

impl Periodic {
    /// The left N-string the iterates converge to, written over `x`.
    pub fn limit(&self, x: &Str) -> AlmostPeriodic {
        let anchor = &self.period[0];
        let k = anchor.syl.iter().zip(&x.syl).take_while(|(a, b)| a == b).count();
        let base = anchor.prefix(k);
        let mut connector = anchor.syl[k..].to_vec();
        let (mut band, _) = primitive_root(&self.shift);
        while !connector.is_empty() && connector.last() == band.last() {
            connector.pop();
            band.rotate_right(1);
        }
        AlmostPeriodic { band, connector, base }
    }
}

/// `y` with `w` inserted directly above its left substring of length `at`.
fn insert_above(y: &Str, at: usize, w: &[Letter]) -> Str {
    let mut syl = y.syl[..at].to_vec();
    syl.extend_from_slice(w);
    syl.extend_from_slice(&y.syl[at..]);
    Str { vertex: y.vertex, parity: y.parity, syl }
}

/// Iterates `step` from `x` until it stops or an iterate's key recurs with
/// the later iterate extending the earlier one; the candidate period is then
/// confirmed over two more laps.
fn iterate<F, K>(x: &Str, mut step: F, key: K) -> Result<Ray>
where
    F: FnMut(&Str) -> Result<Option<Str>>,
    K: Fn(&Str) -> Option<StateId>,
{
    let mut iters: Vec<Str> = Vec::new();
    let mut seen: HashMap<StateId, usize> = HashMap::new();
    let mut pending: Option<(usize, usize, Vec<Letter>)> = None;
    let mut cur = x.clone();
    loop {
        let Some(next) = step(&cur)? else {
            return Ok(Ray::Finite(iters));
        };
        let m = iters.len();
        iters.push(next.clone());
        if let Some((j, n, w)) = pending.clone() {
            let p = n - j;
            let earlier = &iters[m - p];
            let at = iters[j].len();
            let ok = iters[j].is_left_substring_of(earlier) && insert_above(earlier, at, &w) == next;
            if !ok {
                pending = None;
            } else if m + 1 >= n + 2 * p {
                return Ok(Ray::Periodic(Periodic {
                    prefix: iters[..j].to_vec(),
                    period: iters[j..n].to_vec(),
                    shift: w,
                }));
            }
        }
        if pending.is_none() {
            if let Some(k) = key(&next) {
                match seen.get(&k) {
                    Some(&j) if iters[j].is_left_substring_of(&next) && iters[j].len() < next.len() => {
                        pending = Some((j, m, next.syl[iters[j].len()..].to_vec()));
                    }
                    _ => {}
                }
                seen.insert(k, m);
            }
        }
        if iters.len() > RAY_CAP {
            return Err(Error::Indeterminate { what: "neighbour iteration".into(), cap: RAY_CAP });
        }
        cur = next;
    }
}

/// Memberships of one string.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub st: Vec<Side>,
    pub ost: Vec<Side>,
}

/// `c_B(x)`, `φ_B(x)` and, for minimal classes, `C_B(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condensed {
    pub cb: Str,
    pub phi: i8,
    pub big_cb: Option<Str>,
}

/// A B-equivalence class of centers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterClass {
    /// The direct and the inverse extension shared by the class.
    pub pair: (Letter, Letter),
    pub representative: Str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeamReport {
    /// The non-center elements of `OST_{±1}` in increasing order.
    pub boundaries: Vec<Str>,
    pub n_b: usize,
    pub beams: Vec<(Str, Str)>,
    pub k_b: usize,
    pub center_classes: Vec<CenterClass>,
    /// `c_B([m_i, y_0])`, increasing.
    pub lower_end: Vec<Str>,
    /// `c_B([y_n, M_i])`, increasing.
    pub upper_end: Vec<Str>,
}

impl BeamReport {
    /// `m_i, y_0, …, y_n, M_i`: the points at which the hammock splits into
    /// the lower end, the beams and the upper end.
    pub fn split_points(&self) -> Vec<Str> {
        let mut v = vec![self.lower_end[0].clone()];
        v.extend(self.boundaries.iter().cloned());
        v.push(self.upper_end.last().expect("upper end is non-empty").clone());
        v
    }
}

/// A hammock together with one class reachable from it.
#[derive(Debug)]
pub struct BContext<'w> {
    pub ws: &'w Workspace,
    pub key: HammockKey,
    pub class: usize,
    pub minimal: bool,
    pub min: Str,
    pub max: Str,
}

fn lcp(a: &Str, b: &Str) -> usize {
    if !a.same_base(b) {
        return 0;
    }
    a.syl.iter().zip(&b.syl).take_while(|(x, y)| x == y).count()
}

impl<'w> BContext<'w> {
    fn alg(&self) -> &'w Algebra {
        &self.ws.alg
    }

    pub fn tables(&self) -> &'w ClassTables {
        &self.ws.tables[self.class]
    }

    fn check(&self, x: &Str) -> Result<()> {
        if self.key.contains(x) {
            Ok(())
        } else {
            Err(Error::Precondition("string is not in the hammock".into()))
        }
    }

    fn require_minimal(&self) -> Result<()> {
        if self.minimal {
            Ok(())
        } else {
            Err(Error::Precondition("the class is not minimal for the hammock".into()))
        }
    }

    /// States of the left substrings of `x` of every length.
    fn prefix_states(&self, x: &Str) -> Vec<StateId> {
        let alg = self.alg();
        let mut s = alg.zero_state(x.vertex, x.parity);
        let mut out = Vec::with_capacity(x.len() + 1);
        out.push(s);
        for &l in &x.syl {
            s = alg.step(s, l).expect("Str values are valid by construction");
            out.push(s);
        }
        out
    }

    /// OST_j membership of a hammock element of length `len` and state `s`.
    fn ost_at(&self, s: StateId, len: usize, lcp_min: usize, lcp_max: usize, j: Side) -> bool {
        self.tables().ost(s, j)
            || match j {
                Side::Plus => len <= lcp_max,
                Side::Minus => len <= lcp_min,
            }
    }

    pub fn in_ost(&self, x: &Str, j: Side) -> bool {
        self.key.contains(x) && self.ost_at(self.alg().state_of(x), x.len(), lcp(x, &self.min), lcp(x, &self.max), j)
    }

    pub fn in_ost_any(&self, x: &Str) -> bool {
        self.in_ost(x, Side::Plus) || self.in_ost(x, Side::Minus)
    }

    pub fn in_ost_both(&self, x: &Str) -> bool {
        self.in_ost(x, Side::Plus) && self.in_ost(x, Side::Minus)
    }

    /// St_j for any string; OST_j for hammock elements only.
    pub fn st_ost_membership(&self, x: &Str) -> Membership {
        let s = self.alg().state_of(x);
        let t = self.tables();
        Membership {
            st: SIDES.into_iter().filter(|&j| t.st(s, j)).collect(),
            ost: SIDES.into_iter().filter(|&j| self.in_ost(x, j)).collect(),
        }
    }

    /// `c_B(x)`: the longest left substring of `x` in OST.
    pub fn c_b(&self, x: &Str) -> Result<Str> {
        self.check(x)?;
        let states = self.prefix_states(x);
        let (lm, lx) = (lcp(x, &self.min), lcp(x, &self.max));
        (self.key.base.len()..=x.len())
            .rev()
            .find(|&k| SIDES.iter().any(|&j| self.ost_at(states[k], k, lm, lx, j)))
            .map(|k| x.prefix(k))
            .ok_or_else(|| Error::Invariant("the base lies outside OST".into()))
    }

    /// `φ_B(x)`, read off `c_B(x)`.
    pub fn phi(&self, x: &Str) -> Result<i8> {
        let c = self.c_b(x)?;
        Ok(match (self.in_ost(&c, Side::Plus), self.in_ost(&c, Side::Minus)) {
            (true, true) => 0,
            (true, false) => 1,
            _ => -1,
        })
    }

    pub fn condense(&self, x: &Str) -> Result<Condensed> {
        let cb = self.c_b(x)?;
        let phi = self.phi(&cb)?;
        let big_cb = if self.minimal { Some(self.orbit_root(&cb, phi)?) } else { None };
        Ok(Condensed { cb, phi, big_cb })
    }

    /// The element of `OST_{±1}` whose `l_B` or `l̄_B` orbit contains `z`.
    fn orbit_root(&self, z: &Str, phi: i8) -> Result<Str> {
        let dir = match phi {
            0 => return Ok(z.clone()),
            1 => Side::Minus,
            _ => Side::Plus,
        };
        let mut cur = z.clone();
        for _ in 0..RAY_CAP {
            cur = self
                .ost_step(&cur, dir)?
                .ok_or_else(|| Error::Invariant("orbit left the hammock without meeting OST±1".into()))?;
            if self.phi(&cur)? == 0 {
                return Ok(cur);
            }
        }
        Err(Error::Indeterminate { what: "orbit root search".into(), cap: RAY_CAP })
    }

    /// The next element of `OST` after (`dir = +1`) or before (`dir = -1`)
    /// the element `z`, found by leaving the fiber of `z` on that side.
    fn ost_step(&self, z: &Str, dir: Side) -> Result<Option<Str>> {
        let phi = self.phi(z)?;
        let edge = if phi == -dir.sign() { self.alg().extend_greedy(z, dir) } else { z.clone() };
        match self.alg().neighbour(&self.key, &edge, dir) {
            Some(y) => self.c_b(&y).map(Some),
            None => Ok(None),
        }
    }

    /// `l_B(x)` for `dir = +1`, `l̄_B(x)` for `dir = -1`; `None` at the
    /// blocked extreme.
    pub fn neighbor(&self, x: &Str, dir: Side) -> Result<Option<Str>> {
        if !self.in_ost(x, dir) {
            return Err(Error::Precondition(format!("string is not in OST_{}", dir.sign())));
        }
        match self.alg().neighbour(&self.key, x, dir) {
            Some(y) => self.c_b(&y).map(Some),
            None => Ok(None),
        }
    }

    /// Iterates of `l_B` (or `l̄_B`) from `x`, folded at the first confirmed
    /// recurrence of the automaton state.
    pub fn ray(&self, x: &Str, dir: Side) -> Result<Ray> {
        iterate(
            x,
            |y| self.neighbor(y, dir),
            |y| {
                (!y.is_left_substring_of(&self.min) && !y.is_left_substring_of(&self.max))
                    .then(|| self.alg().state_of(y))
            },
        )
    }

    /// `⟨1,l_B⟩(x)` (or `⟨1,l̄_B⟩(x)`).
    pub fn ost_limit(&self, x: &Str, dir: Side) -> Result<AlmostPeriodic> {
        self.require_minimal()?;
        self.check(x)?;
        if !self.in_ost(x, dir) || !self.tables().ost(self.alg().state_of(x), dir) {
            return Err(Error::Precondition(format!("string is not in OST_{0} ∩ OSt_{0}", dir.sign())));
        }
        match self.ray(x, dir)? {
            Ray::Periodic(p) => Ok(p.limit(x)),
            Ray::Finite(_) => Err(Error::Invariant("neighbour iteration reached an extreme".into())),
        }
    }

    fn check_st_both(&self, x: &Str) -> Result<StateId> {
        self.check(x)?;
        let s = self.alg().state_of(x);
        if self.tables().st_both(s) {
            Ok(s)
        } else {
            Err(Error::Precondition("string is not in St_{±1}".into()))
        }
    }

    /// `x ≡_B y`: both admit the same two distinct one-letter extensions.
    pub fn b_equivalent(&self, x: &Str, y: &Str) -> Result<bool> {
        let sx = self.check_st_both(x)?;
        let sy = self.check_st_both(y)?;
        let alg = self.alg();
        Ok(alg.extensions(sx) == alg.extensions(sy))
    }

    pub fn is_center(&self, x: &Str) -> Result<bool> {
        let s = self.check_st_both(x)?;
        Ok(x.len() != self.key.base.len() && self.tables().is_center_state(s))
    }

    /// The base is never a center of its own hammock: half of its centered
    /// interval lies outside, so it bounds a beam instead.
    fn is_boundary(&self, x: &Str) -> bool {
        self.in_ost_both(x)
            && (x.len() == self.key.base.len() || !self.tables().is_center_state(self.alg().state_of(x)))
    }

    /// Shortest representative of every center class met in the hammock.
    fn center_classes(&self) -> Vec<CenterClass> {
        let alg = self.alg();
        let t = self.tables();
        let root = alg.state_of(&self.key.base);
        let mut found: BTreeMap<(Letter, Letter), Str> = BTreeMap::new();
        let mut seen = vec![false; alg.n_states()];
        let mut queue = VecDeque::new();
        queue.push_back((self.key.base.clone(), root));
        while let Some((x, s)) = queue.pop_front() {
            if x.len() != self.key.base.len() && t.is_center_state(s) {
                let e = alg.extensions(s);
                let pair = (e.direct.expect("centers extend both ways"), e.inverse.expect("centers extend both ways"));
                found.entry(pair).or_insert_with(|| x.clone());
            }
            let first = x.len() == self.key.base.len();
            for (l, u) in alg.transitions(s) {
                if (first && l.theta() != self.key.side) || seen[u] {
                    continue;
                }
                seen[u] = true;
                queue.push_back((x.with(l), u));
            }
        }
        found.into_iter().map(|(pair, representative)| CenterClass { pair, representative }).collect()
    }

    /// Walks `l_B` (or `l̄_B`) from `x` until the hammock extreme.
    fn walk_to_extreme(&self, x: &Str, dir: Side) -> Result<Vec<Str>> {
        let mut out = vec![x.clone()];
        let mut cur = x.clone();
        while let Some(next) = self.neighbor(&cur, dir)? {
            out.push(next.clone());
            cur = next;
            if out.len() > RAY_CAP {
                return Err(Error::Indeterminate { what: "end segment walk".into(), cap: RAY_CAP });
            }
        }
        Ok(out)
    }

    pub fn beam_structure(&self) -> Result<BeamReport> {
        self.require_minimal()?;
        let alg = self.alg();
        let mut cands = crate::bands::band_free_relative(alg, &self.key, self.ws.cap)?;
        let b = self.key.base.len();
        for ext in [&self.min, &self.max] {
            cands.extend((b..=ext.len()).map(|k| ext.prefix(k)));
        }
        cands.sort();
        cands.dedup();
        let mut boundaries: Vec<Str> = cands.into_iter().filter(|x| self.is_boundary(x)).collect();
        boundaries.sort_by(|x, y| compare_l(x, y).expect("hammock elements share a base"));
        let (Some(first), Some(last)) = (boundaries.first(), boundaries.last()) else {
            return Err(Error::Invariant("OST±1 has no non-center element".into()));
        };
        let mut lower_end = self.walk_to_extreme(first, Side::Minus)?;
        lower_end.reverse();
        let upper_end = self.walk_to_extreme(last, Side::Plus)?;
        let center_classes = self.center_classes();
        let beams = boundaries.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        Ok(BeamReport {
            n_b: boundaries.len() - 1,
            beams,
            k_b: center_classes.len(),
            center_classes,
            boundaries,
            lower_end,
            upper_end,
        })
    }
}

/// Whether `w` and `v` are rotations of each other.
pub fn same_band(w: &[Letter], v: &[Letter]) -> bool {
    w.len() == v.len() && canonical_rotation(w) == canonical_rotation(v)
}

/// Rotations of `w` rendered compactly.
pub fn rotation_names(alg: &Algebra, w: &[Letter]) -> Vec<String> {
    rotations(w).iter().map(|r| alg.render_word(r)).collect()
}
