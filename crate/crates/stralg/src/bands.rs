//! Bands, prime bands and the finite poset of band classes.
//!
//! Closed walks of the extension automaton are exactly the cyclic words all
//! of whose powers are strings. A closed walk that revisits a state splits
//! into two shorter closed walks, so prime bands are found among the simple
//! cycles of its strongly connected components.

use std::collections::{BTreeSet, HashSet, VecDeque};

use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use crate::automaton::{Algebra, StateId};
use crate::error::{Error, Result, DEFAULT_CAP};
use crate::hammock::HammockKey;
use crate::par::{self, Exec};
use crate::presentation::Letter;
use crate::strings::Str;

/// A primitive cyclic word in canonical rotation, stored in syllable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BandRep {
    pub word: Vec<Letter>,
}

impl BandRep {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// All rotations in syllable order, starting with the stored one.
    pub fn rotations(&self) -> Vec<Vec<Letter>> {
        rotations(&self.word)
    }
}

pub fn rotations(w: &[Letter]) -> Vec<Vec<Letter>> {
    (0..w.len()).map(|r| w[r..].iter().chain(&w[..r]).copied().collect()).collect()
}

/// The rotation whose written form (last syllable first) is least in the
/// letter order.
pub fn canonical_rotation(w: &[Letter]) -> Vec<Letter> {
    rotations(w).into_iter().min_by(|a, b| a.iter().rev().cmp(b.iter().rev())).unwrap_or_default()
}

/// Smallest period `p` dividing `|w|` with `w` a power of its length-`p` prefix.
pub fn primitive_root(w: &[Letter]) -> (Vec<Letter>, usize) {
    let n = w.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|i| w[i] == w[i - p]) {
            return (w[..p].to_vec(), n / p);
        }
    }
    (w.to_vec(), 1)
}

/// An ≈-class of bands.
#[derive(Clone, Debug, Serialize)]
pub struct GmbClass {
    pub id: usize,
    pub primes: Vec<BandRep>,
    pub domestic: bool,
    /// Automaton states of the strongly connected component carrying the class.
    pub states: Vec<StateId>,
}

impl GmbClass {
    pub fn max_prime_len(&self) -> usize {
        self.primes.iter().map(BandRep::len).max().unwrap_or(0)
    }
}

/// The poset of band classes plus the automaton data behind it.
#[derive(Clone, Debug)]
pub struct Qba {
    pub classes: Vec<GmbClass>,
    /// Strict pairs `(a, b)` with class `a` below class `b`.
    pub order: Vec<(usize, usize)>,
    class_of_state: Vec<Option<usize>>,
    /// `reach[s][c]`: some state of class `c` is reachable from state `s` (length ≥ 0).
    reach: Vec<Vec<bool>>,
}

/// Classes reachable from a hammock key, with the minimal ones split out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reachable {
    pub classes: Vec<usize>,
    pub minimal: Vec<usize>,
}

impl Algebra {
    /// Whether every power of the cyclic word `w` is a string.
    pub fn is_cyclic_valid(&self, w: &[Letter]) -> bool {
        let (Some(&first), Some(&last)) = (w.first(), w.last()) else {
            return false;
        };
        if self.spec.start(first) != self.spec.end(last) {
            return false;
        }
        let mut s = self.zero_state(self.spec.start(first), -self.spec.sigma_of(first));
        let copies = self.window().div_ceil(w.len()) + 1;
        for _ in 0..copies {
            match self.read(s, w.iter().copied()) {
                Some(t) => s = t,
                None => return false,
            }
        }
        self.read(s, w.iter().copied()) == Some(s)
    }

    /// Whether some rotation of `w` splits into at least two cyclic-valid pieces.
    pub fn is_composite(&self, w: &[Letter]) -> bool {
        let n = w.len();
        rotations(w).iter().any(|r| {
            let mut ok = vec![false; n + 1];
            ok[0] = true;
            for j in 1..=n {
                ok[j] = (0..j).any(|i| ok[i] && j - i < n && self.is_cyclic_valid(&r[i..j]));
            }
            ok[n]
        })
    }
}

fn graph_of(alg: &Algebra) -> DiGraph<StateId, Letter> {
    let mut g = DiGraph::new();
    let nodes: Vec<NodeIndex> = (0..alg.n_states()).map(|s| g.add_node(s)).collect();
    for s in 0..alg.n_states() {
        for (l, t) in alg.transitions(s) {
            g.add_edge(nodes[s], nodes[t], l);
        }
    }
    g
}

/// Simple cycles of the subgraph on `comp`, as letter words.
fn simple_cycles(alg: &Algebra, comp: &[StateId], cap: usize) -> Result<Vec<Vec<Letter>>> {
    let inside: HashSet<StateId> = comp.iter().copied().collect();
    let mut out = Vec::new();
    let mut sorted = comp.to_vec();
    sorted.sort_unstable();
    for &start in &sorted {
        // DFS over states > start, returning to start
        let mut path_states = vec![start];
        let mut path_letters: Vec<Letter> = Vec::new();
        let mut iters: Vec<Vec<(Letter, StateId)>> = vec![alg.transitions(start).collect()];
        let mut on_path: HashSet<StateId> = HashSet::from([start]);
        while let Some(top) = iters.last_mut() {
            match top.pop() {
                Some((l, t)) => {
                    if t == start {
                        let mut w = path_letters.clone();
                        w.push(l);
                        out.push(w);
                        if out.len() > cap {
                            return Err(Error::Indeterminate { what: "prime band enumeration".into(), cap });
                        }
                    } else if t > start && inside.contains(&t) && !on_path.contains(&t) {
                        path_states.push(t);
                        path_letters.push(l);
                        on_path.insert(t);
                        iters.push(alg.transitions(t).collect());
                    }
                }
                None => {
                    iters.pop();
                    if let Some(s) = path_states.pop() {
                        on_path.remove(&s);
                    }
                    path_letters.pop();
                }
            }
        }
    }
    Ok(out)
}

impl Qba {
    pub fn new(alg: &Algebra) -> Result<Qba> {
        Qba::build(alg, Exec::default(), DEFAULT_CAP)
    }

    pub fn build(alg: &Algebra, exec: Exec, cap: usize) -> Result<Qba> {
        let g = graph_of(alg);
        // tarjan_scc lists components in reverse topological order
        let sccs = petgraph::algo::tarjan_scc(&g);
        let cyclic: Vec<Vec<StateId>> = sccs
            .iter()
            .filter(|c| c.len() > 1 || g.contains_edge(c[0], c[0]))
            .map(|c| {
                let mut v: Vec<StateId> = c.iter().map(|&n| g[n]).collect();
                v.sort_unstable();
                v
            })
            .collect();

        let mut found = Vec::new();
        for comp in &cyclic {
            let cycles = simple_cycles(alg, comp, cap)?;
            let canon: BTreeSet<Vec<Letter>> = cycles.iter().map(|w| canonical_rotation(w)).collect();
            let canon: Vec<Vec<Letter>> = canon.into_iter().collect();
            let composite = par::map(exec, &canon, |w| alg.is_composite(w));
            let mut primes: Vec<BandRep> =
                canon.into_iter().zip(composite).filter(|(_, c)| !c).map(|(word, _)| BandRep { word }).collect();
            primes.sort_by(|a, b| a.word.iter().rev().cmp(b.word.iter().rev()));
            found.push((primes, comp.clone()));
        }
        found.sort_by(|a, b| a.0[0].word.iter().rev().cmp(b.0[0].word.iter().rev()));

        let mut class_of_state = vec![None; alg.n_states()];
        let classes: Vec<GmbClass> = found
            .into_iter()
            .enumerate()
            .map(|(id, (primes, states))| {
                for &s in &states {
                    class_of_state[s] = Some(id);
                }
                GmbClass { id, domestic: primes.len() == 1, primes, states }
            })
            .collect();

        let k = classes.len();
        let mut reach_scc: Vec<Vec<bool>> = vec![vec![false; k]; sccs.len()];
        let mut scc_index = vec![0usize; alg.n_states()];
        for (i, c) in sccs.iter().enumerate() {
            for &n in c {
                scc_index[g[n]] = i;
            }
        }
        for (i, c) in sccs.iter().enumerate() {
            let mut r = vec![false; k];
            if let Some(cl) = class_of_state[g[c[0]]] {
                r[cl] = true;
            }
            for &n in c {
                for t in g.neighbors(n) {
                    let j = scc_index[g[t]];
                    if j != i {
                        for (x, y) in r.iter_mut().zip(&reach_scc[j]) {
                            *x |= *y;
                        }
                    }
                }
            }
            reach_scc[i] = r;
        }
        let reach: Vec<Vec<bool>> = (0..alg.n_states()).map(|s| reach_scc[scc_index[s]].clone()).collect();

        let mut order = Vec::new();
        for a in &classes {
            for b in &classes {
                if a.id != b.id && reach[a.states[0]][b.id] {
                    order.push((a.id, b.id));
                }
            }
        }
        Ok(Qba { classes, order, class_of_state, reach })
    }

    pub fn primes(&self) -> impl Iterator<Item = &BandRep> {
        self.classes.iter().flat_map(|c| c.primes.iter())
    }

    pub fn class_of_state(&self, s: StateId) -> Option<usize> {
        self.class_of_state[s]
    }

    pub fn state_reaches(&self, s: StateId, class: usize) -> bool {
        self.reach[s][class]
    }

    /// The class whose component carries the band `w` (any rotation).
    pub fn class_of_band(&self, alg: &Algebra, w: &[Letter]) -> Option<usize> {
        let c = canonical_rotation(w);
        self.classes.iter().find(|k| k.primes.iter().any(|p| p.word == c)).map(|k| k.id).or_else(|| {
            let s = alg.zero_state(alg.spec.start(*w.first()?), -alg.spec.sigma_of(*w.first()?));
            let mut st = s;
            for _ in 0..=alg.window().div_ceil(w.len()) {
                st = alg.read(st, w.iter().copied())?;
            }
            self.class_of_state[st]
        })
    }

    pub fn below(&self, a: usize, b: usize) -> bool {
        self.order.contains(&(a, b))
    }

    /// `b1 ⪯ b2`: some `b2·u·b1` is a string.
    pub fn band_reaches(&self, alg: &Algebra, b1: &[Letter], b2: &[Letter]) -> Option<bool> {
        let c1 = self.class_of_band(alg, b1)?;
        let c2 = self.class_of_band(alg, b2)?;
        Some(c1 == c2 || self.below(c1, c2))
    }

    /// Transitive reduction of `order`.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        self.order
            .iter()
            .copied()
            .filter(|&(a, b)| !self.classes.iter().any(|m| self.below(a, m.id) && self.below(m.id, b)))
            .collect()
    }

    /// Classes `B` with some `b·u·x0` in the hammock.
    pub fn reachable_classes(&self, alg: &Algebra, key: &HammockKey) -> Reachable {
        let s = alg.state_of(&key.base);
        let classes: Vec<usize> = match alg.step_sign(s, key.side) {
            Some((_, t)) => (0..self.classes.len()).filter(|&c| self.reach[t][c]).collect(),
            None => Vec::new(),
        };
        let minimal =
            classes.iter().copied().filter(|&b| !classes.iter().any(|&a| a != b && self.below(a, b))).collect();
        Reachable { classes, minimal }
    }

    /// Factor criterion: some rotation of a prime of the class occurs in `c^k`.
    pub fn cyc_membership(&self, alg: &Algebra, c: &[Letter], class: usize) -> Result<bool> {
        if !alg.is_cyclic_valid(c) {
            return Err(Error::Precondition("word is not cyclic".into()));
        }
        let k = self.classes[class].max_prime_len().div_ceil(c.len()) + 1;
        let pow: Vec<Letter> = c.iter().copied().cycle().take(k * c.len()).collect();
        Ok(self.classes[class]
            .primes
            .iter()
            .flat_map(|p| p.rotations())
            .any(|r| pow.windows(r.len()).any(|f| f == r.as_slice())))
    }

    /// Whether `x` is a factor of a power of some cycle of the class.
    pub fn ext_membership(&self, alg: &Algebra, x: &[Letter], class: usize) -> bool {
        self.classes[class]
            .states
            .iter()
            .any(|&s| alg.read(s, x.iter().copied()).is_some_and(|t| self.class_of_state[t] == Some(class)))
    }
}

/// Strings `z·x0` of the hammock where `z` has no cyclic-valid factor,
/// enumerated breadth first.
pub fn band_free_relative(alg: &Algebra, key: &HammockKey, cap: usize) -> Result<Vec<Str>> {
    let base_len = key.base.len();
    let mut out = vec![key.base.clone()];
    let mut queue = VecDeque::new();
    if let Some((l, s)) = alg.step_sign(alg.state_of(&key.base), key.side) {
        queue.push_back((key.base.with(l), s));
    }
    while let Some((x, s)) = queue.pop_front() {
        let z = &x.syl[base_len..];
        // only factors ending at the newest letter are new
        let fresh_band = (1..=z.len()).any(|k| alg.is_cyclic_valid(&z[z.len() - k..]));
        if fresh_band {
            continue;
        }
        for (l, t) in alg.transitions(s) {
            queue.push_back((x.with(l), t));
        }
        out.push(x);
        if out.len() > cap {
            return Err(Error::Indeterminate { what: "band-free enumeration".into(), cap });
        }
    }
    Ok(out)
}
