//! The extension automaton: a finite-state view of which letters may be
//! prepended to a string. A state is the window of the last
//! `max(1, maxRelationLength - 1)` syllables, or a zero-string marker.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::Result;
use crate::presentation::{validate_algebra, AlgebraSpec, Letter, Side, VertexId};

pub type StateId = usize;

/// Window of the leftmost syllables (in syllable order, last = leftmost), or
/// the (vertex, parity) marker of a zero-length string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ExtState {
    Zero(VertexId, Side),
    Window(Vec<Letter>),
}

/// The at most two one-letter left extensions of a string.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Extensions {
    pub direct: Option<Letter>,
    pub inverse: Option<Letter>,
}

impl Extensions {
    pub fn get(&self, theta: Side) -> Option<Letter> {
        match theta {
            Side::Plus => self.inverse,
            Side::Minus => self.direct,
        }
    }
}

/// A validated algebra together with its extension automaton and the
/// H-equivalence partition of automaton states.
#[derive(Debug)]
pub struct Algebra {
    pub spec: AlgebraSpec,
    window: usize,
    states: Vec<ExtState>,
    index: HashMap<ExtState, StateId>,
    /// `next[s][0]` is the direct transition, `next[s][1]` the inverse one.
    next: Vec<[Option<(Letter, StateId)>; 2]>,
    hclass: Vec<usize>,
    n_hclasses: usize,
}

fn slot(l: Letter) -> usize {
    usize::from(l.inverse)
}

impl Algebra {
    pub fn new(spec: AlgebraSpec) -> Result<Algebra> {
        validate_algebra(&spec)?;
        let window = spec.max_relation_len().saturating_sub(1).max(1);
        let mut alg = Algebra {
            spec,
            window,
            states: Vec::new(),
            index: HashMap::new(),
            next: Vec::new(),
            hclass: Vec::new(),
            n_hclasses: 0,
        };
        alg.build();
        alg.partition();
        Ok(alg)
    }

    pub fn parse(text: &str) -> Result<Algebra> {
        Algebra::new(crate::presentation::parse_algebra(text)?)
    }

    fn intern(&mut self, st: ExtState, queue: &mut VecDeque<StateId>) -> StateId {
        if let Some(&id) = self.index.get(&st) {
            return id;
        }
        let id = self.states.len();
        self.states.push(st.clone());
        self.index.insert(st, id);
        self.next.push([None, None]);
        queue.push_back(id);
        id
    }

    fn build(&mut self) {
        let mut queue = VecDeque::new();
        for v in 0..self.spec.vertices.len() {
            for j in [Side::Minus, Side::Plus] {
                self.intern(ExtState::Zero(v, j), &mut queue);
            }
        }
        while let Some(s) = queue.pop_front() {
            let st = self.states[s].clone();
            let letters: Vec<Letter> = self.spec.letters().collect();
            for l in letters {
                if !self.can_prepend(&st, l) {
                    continue;
                }
                let succ = match &st {
                    ExtState::Zero(..) => ExtState::Window(vec![l]),
                    ExtState::Window(w) => {
                        let mut w = w.clone();
                        w.push(l);
                        if w.len() > self.window {
                            w.remove(0);
                        }
                        ExtState::Window(w)
                    }
                };
                let t = self.intern(succ, &mut queue);
                let cell = &mut self.next[s][slot(l)];
                assert!(cell.is_none(), "validated algebras admit one letter per sign");
                *cell = Some((l, t));
            }
        }
    }

    /// Whether prepending `l` to a string with state `st` gives a string.
    pub fn can_prepend(&self, st: &ExtState, l: Letter) -> bool {
        let spec = &self.spec;
        match st {
            ExtState::Zero(v, j) => spec.start(l) == *v && spec.sigma_of(l) == -*j,
            ExtState::Window(w) => {
                let prev = *w.last().expect("windows are non-empty");
                if spec.end(prev) != spec.start(l)
                    || spec.sigma_of(l) != -spec.eps_of(prev)
                    || (prev.arrow == l.arrow && prev.inverse != l.inverse)
                {
                    return false;
                }
                // maximal run of same-direction letters ending in l, as arrows
                let mut run: Vec<usize> =
                    w.iter().rev().take_while(|x| x.inverse == l.inverse).map(|x| x.arrow).collect();
                run.reverse();
                run.push(l.arrow);
                !spec.relations.iter().any(|r| {
                    if l.inverse {
                        r.len() <= run.len() && run[run.len() - r.len()..].iter().eq(r.iter().rev())
                    } else {
                        run.ends_with(r)
                    }
                })
            }
        }
    }

    /// Moore refinement: two states are H-equivalent iff they read the same
    /// letter language.
    fn partition(&mut self) {
        let n = self.states.len();
        let mut class = vec![0usize; n];
        let mut count = 1;
        loop {
            let mut sig_ids: HashMap<(usize, Vec<(Letter, usize)>), usize> = HashMap::new();
            let mut fresh = vec![0usize; n];
            for s in 0..n {
                let sig: Vec<(Letter, usize)> = self.next[s].iter().flatten().map(|&(l, t)| (l, class[t])).collect();
                let k = sig_ids.len();
                fresh[s] = *sig_ids.entry((class[s], sig)).or_insert(k);
            }
            let new_count = sig_ids.len();
            class = fresh;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        self.hclass = class;
        self.n_hclasses = count;
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, s: StateId) -> &ExtState {
        &self.states[s]
    }

    pub fn state_id(&self, st: &ExtState) -> Option<StateId> {
        self.index.get(st).copied()
    }

    pub fn zero_state(&self, v: VertexId, j: Side) -> StateId {
        self.index[&ExtState::Zero(v, j)]
    }

    /// States whose window holds a full `window()` letters.
    pub fn is_full(&self, s: StateId) -> bool {
        matches!(&self.states[s], ExtState::Window(w) if w.len() == self.window)
    }

    pub fn extensions(&self, s: StateId) -> Extensions {
        let [d, i] = self.next[s];
        Extensions { direct: d.map(|x| x.0), inverse: i.map(|x| x.0) }
    }

    pub fn transitions(&self, s: StateId) -> impl Iterator<Item = (Letter, StateId)> + '_ {
        self.next[s].iter().flatten().copied()
    }

    pub fn step_sign(&self, s: StateId, theta: Side) -> Option<(Letter, StateId)> {
        self.next[s][usize::from(theta == Side::Plus)]
    }

    pub fn step(&self, s: StateId, l: Letter) -> Option<StateId> {
        match self.next[s][slot(l)] {
            Some((m, t)) if m == l => Some(t),
            _ => None,
        }
    }

    pub fn read<I: IntoIterator<Item = Letter>>(&self, s: StateId, word: I) -> Option<StateId> {
        word.into_iter().try_fold(s, |s, l| self.step(s, l))
    }

    pub fn hclass(&self, s: StateId) -> usize {
        self.hclass[s]
    }

    pub fn n_hclasses(&self) -> usize {
        self.n_hclasses
    }

    /// The least state id in the H-class of `s`.
    pub fn hclass_rep(&self, s: StateId) -> StateId {
        let c = self.hclass[s];
        self.hclass.iter().position(|&x| x == c).expect("class is inhabited")
    }

    /// A shortest word readable from exactly one of the two states.
    pub fn distinguishing_word(&self, a: StateId, b: StateId) -> Option<Vec<Letter>> {
        let mut seen = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert((a, b), None);
        queue.push_back((a, b));
        while let Some((x, y)) = queue.pop_front() {
            let mut letters: Vec<Letter> = self.transitions(x).chain(self.transitions(y)).map(|p| p.0).collect();
            letters.sort();
            letters.dedup();
            for l in letters {
                match (self.step(x, l), self.step(y, l)) {
                    (Some(nx), Some(ny)) => {
                        if let std::collections::hash_map::Entry::Vacant(e) = seen.entry((nx, ny)) {
                            e.insert(Some(((x, y), l)));
                            queue.push_back((nx, ny));
                        }
                    }
                    (None, None) => {}
                    _ => {
                        let mut word = vec![l];
                        let mut cur = (x, y);
                        while let Some(Some((prev, pl))) = seen.get(&cur) {
                            word.push(*pl);
                            cur = *prev;
                        }
                        word.reverse();
                        return Some(word);
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma0() -> Algebra {
        Algebra::parse(include_str!("../fixtures/gamma0.alg")).unwrap()
    }

    #[test]
    fn window_of_length_two_relations_is_one() {
        assert_eq!(gamma0().window(), 1);
        let g = Algebra::parse(include_str!("../fixtures/gamma.alg")).unwrap();
        assert_eq!(g.window(), 3);
    }

    #[test]
    fn every_state_has_at_most_one_letter_per_sign() {
        let alg = gamma0();
        for s in 0..alg.n_states() {
            let mut d = 0;
            let mut i = 0;
            for l in alg.spec.letters() {
                if alg.can_prepend(alg.state(s), l) {
                    if l.inverse {
                        i += 1
                    } else {
                        d += 1
                    }
                }
            }
            assert!(d <= 1 && i <= 1);
        }
    }

    #[test]
    fn equivalent_states_have_no_distinguishing_word() {
        let alg = gamma0();
        for a in 0..alg.n_states() {
            for b in 0..alg.n_states() {
                let same = alg.hclass(a) == alg.hclass(b);
                assert_eq!(same, alg.distinguishing_word(a, b).is_none());
            }
        }
    }
}
