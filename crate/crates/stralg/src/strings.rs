//! Finite strings, their signs, the left-substring lattice and H-equivalence.

use serde::Serialize;

use crate::automaton::{Algebra, ExtState, StateId};
use crate::error::{Error, Result};
use crate::presentation::{Letter, Side, VertexId};

/// A string. `syl[0]` is the first (rightmost written) syllable; prepending
/// a letter pushes onto the end. Every string carries the zero string
/// `1_(v,j)` it extends, so left substrings are exactly the prefixes of `syl`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Str {
    pub vertex: VertexId,
    pub parity: Side,
    pub syl: Vec<Letter>,
}

/// δ of a string: +1 all inverse, -1 all direct, 0 mixed (or empty).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Signs {
    pub theta: Option<Side>,
    pub delta: i8,
}

impl Str {
    pub fn zero(vertex: VertexId, parity: Side) -> Str {
        Str { vertex, parity, syl: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.syl.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syl.is_empty()
    }

    /// The left substring of length `k`.
    pub fn prefix(&self, k: usize) -> Str {
        Str { vertex: self.vertex, parity: self.parity, syl: self.syl[..k].to_vec() }
    }

    /// `l` prepended, without validation.
    pub fn with(&self, l: Letter) -> Str {
        let mut s = self.clone();
        s.syl.push(l);
        s
    }

    pub fn same_base(&self, other: &Str) -> bool {
        self.vertex == other.vertex && self.parity == other.parity
    }

    /// `self ⊑_l other`.
    pub fn is_left_substring_of(&self, other: &Str) -> bool {
        self.same_base(other) && other.syl.starts_with(&self.syl)
    }

    /// θ(self | sub) for a proper left substring of length `k`.
    pub fn theta_above(&self, k: usize) -> Option<Side> {
        self.syl.get(k).map(|l| l.theta())
    }

    pub fn signs(&self) -> Signs {
        let theta = self.syl.first().map(|l| l.theta());
        let delta = if self.syl.is_empty() {
            0
        } else if self.syl.iter().all(|l| l.inverse) {
            1
        } else if self.syl.iter().all(|l| !l.inverse) {
            -1
        } else {
            0
        };
        Signs { theta, delta }
    }

    /// θ, failing on zero strings.
    pub fn theta(&self) -> Result<Side> {
        self.syl
            .first()
            .map(|l| l.theta())
            .ok_or_else(|| Error::Precondition("theta of a zero-length string is undefined".into()))
    }
}

/// Result of `⊓_l` together with the relative signs of both arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Meet {
    pub meet: Str,
    pub theta_x: Option<Side>,
    pub theta_y: Option<Side>,
}

pub fn common_left_substring(x: &Str, y: &Str) -> Result<Meet> {
    if !x.same_base(y) {
        return Err(Error::Precondition("strings extend different zero strings".into()));
    }
    let k = x.syl.iter().zip(&y.syl).take_while(|(a, b)| a == b).count();
    Ok(Meet { meet: x.prefix(k), theta_x: x.theta_above(k), theta_y: y.theta_above(k) })
}

impl Algebra {
    /// The automaton state of a string.
    pub fn state_of(&self, x: &Str) -> StateId {
        let z = self.zero_state(x.vertex, x.parity);
        self.read(z, x.syl.iter().copied()).expect("Str values are valid by construction")
    }

    /// Validates a word (syllable order) starting from a zero string.
    fn check_word(&self, vertex: VertexId, parity: Side, syl: &[Letter]) -> Result<()> {
        let spec = &self.spec;
        let mut st = ExtState::Zero(vertex, parity);
        for (i, &l) in syl.iter().enumerate() {
            if !self.can_prepend(&st, l) {
                let prev = syl[..i].last().copied();
                let why = match prev {
                    None => "does not start at the base".to_string(),
                    Some(p) if spec.end(p) != spec.start(l) => "non-composable pair".to_string(),
                    Some(p) if p.arrow == l.arrow => "cancellation".to_string(),
                    Some(_) => {
                        let lo = i.saturating_sub(self.window());
                        let fac: Vec<String> = syl[lo..=i].iter().rev().map(|&x| self.spec.letter_compact(x)).collect();
                        format!("relation factor or sign clash in {}", fac.concat())
                    }
                };
                let tok = spec.letter_token(l);
                return Err(Error::BadString(format!("{why} at syllable {} ({tok})", i + 1)));
            }
            let mut w = match st {
                ExtState::Zero(..) => Vec::new(),
                ExtState::Window(w) => w,
            };
            w.push(l);
            if w.len() > self.window() {
                w.remove(0);
            }
            st = ExtState::Window(w);
        }
        Ok(())
    }

    /// Builds a string from letters in syllable order (first syllable first).
    pub fn mk_string(&self, syl: &[Letter]) -> Result<Str> {
        let first = *syl.first().ok_or_else(|| Error::BadString("empty token list; use a zero string".into()))?;
        let vertex = self.spec.start(first);
        let parity = -self.spec.sigma_of(first);
        self.check_word(vertex, parity, syl)?;
        Ok(Str { vertex, parity, syl: syl.to_vec() })
    }

    fn token_letter(&self, tok: &str) -> Result<Letter> {
        let (name, inverse) = match tok.strip_suffix('\'') {
            Some(n) => (n, true),
            None => (tok, false),
        };
        let a = self.spec.arrow_id(name).ok_or_else(|| Error::BadString(format!("unknown arrow {name:?}")))?;
        Ok(Letter { arrow: a, inverse })
    }

    /// Parses the literal grammar: `a3.a1'.a0` (leftmost token is the last
    /// syllable) or `1(v,+)`.
    pub fn parse_str(&self, text: &str) -> Result<Str> {
        let t = text.trim();
        if let Some(inner) = t.strip_prefix("1(").and_then(|r| r.strip_suffix(')')) {
            let (v, j) = inner.split_once(',').ok_or_else(|| Error::BadString(format!("bad zero string {t:?}")))?;
            let vertex = self
                .spec
                .vertex_id(v.trim())
                .ok_or_else(|| Error::BadString(format!("unknown vertex {:?}", v.trim())))?;
            let parity = match j.trim() {
                "+" | "+1" | "1" => Side::Plus,
                "-" | "-1" => Side::Minus,
                other => return Err(Error::BadString(format!("bad parity {other:?}"))),
            };
            return Ok(Str::zero(vertex, parity));
        }
        let mut syl = t.split('.').map(|tok| self.token_letter(tok.trim())).collect::<Result<Vec<_>>>()?;
        syl.reverse();
        self.mk_string(&syl)
    }

    /// Parses the capital-letter convention (`A2A1a0` is `a2'.a1'.a0`) by
    /// greedy longest match against arrow names.
    pub fn parse_compact(&self, text: &str) -> Result<Str> {
        let mut syl = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let mut best: Option<(usize, Letter)> = None;
            for (id, a) in self.spec.arrows.iter().enumerate() {
                let n = &a.name;
                if rest.starts_with(n.as_str()) && best.is_none_or(|(k, _)| n.len() > k) {
                    best = Some((n.len(), Letter::direct(id)));
                }
                let cap = self.spec.letter_compact(Letter::inv(id));
                if cap != *n && rest.starts_with(cap.as_str()) && best.is_none_or(|(k, _)| cap.len() > k) {
                    best = Some((cap.len(), Letter::inv(id)));
                }
            }
            let (k, l) = best.ok_or_else(|| Error::BadString(format!("cannot tokenize {rest:?}")))?;
            syl.push(l);
            rest = &rest[k..];
        }
        syl.reverse();
        self.mk_string(&syl)
    }

    /// Literal rendering, inverse letters primed.
    pub fn render(&self, x: &Str) -> String {
        if x.syl.is_empty() {
            return format!("1({},{})", self.spec.vertices[x.vertex], x.parity.symbol());
        }
        let toks: Vec<String> = x.syl.iter().rev().map(|&l| self.spec.letter_token(l)).collect();
        toks.join(".")
    }

    /// Compact rendering, inverse letters capitalised.
    pub fn compact(&self, x: &Str) -> String {
        if x.syl.is_empty() {
            return self.render(x);
        }
        x.syl.iter().rev().map(|&l| self.spec.letter_compact(l)).collect()
    }

    pub fn render_word(&self, w: &[Letter]) -> String {
        w.iter().rev().map(|&l| self.spec.letter_compact(l)).collect()
    }

    /// `u·x`: prepends the syllables of `u` to `x`. Only the junction is
    /// re-checked, by stepping the automaton from the state of `x`.
    pub fn concat_left(&self, u: &Str, x: &Str) -> Result<Str> {
        if u.syl.is_empty() {
            let end = self.end_point(x);
            return if (u.vertex, u.parity) == end {
                Ok(x.clone())
            } else {
                Err(Error::BadString("zero string does not sit at the left end of x".into()))
            };
        }
        let s = self.state_of(x);
        if self.read(s, u.syl.iter().copied()).is_none() {
            return Err(Error::BadString(format!(
                "junction of {} and {} is not a string",
                self.compact(u),
                self.compact(x)
            )));
        }
        let mut y = x.clone();
        y.syl.extend_from_slice(&u.syl);
        Ok(y)
    }

    /// `(t(x), ε(x))`: the zero string that `x` ends in, in the parity
    /// convention under which `1_(t(x),ε(x))·x = x`.
    pub fn end_point(&self, x: &Str) -> (VertexId, Side) {
        match x.syl.last() {
            None => (x.vertex, x.parity),
            Some(&l) => (self.spec.end(l), self.spec.eps_of(l)),
        }
    }

    /// The reversed word with every letter inverted.
    pub fn invert(&self, x: &Str) -> Str {
        if x.syl.is_empty() {
            return Str::zero(x.vertex, -x.parity);
        }
        let syl: Vec<Letter> = x.syl.iter().rev().map(|l| l.inverted()).collect();
        self.mk_string(&syl).expect("inverse of a string is a string")
    }

    pub fn h_equivalent(&self, x: &Str, y: &Str) -> bool {
        self.hclass(self.state_of(x)) == self.hclass(self.state_of(y))
    }

    /// A shortest `u` with exactly one of `u·x`, `u·y` a string.
    pub fn h_witness(&self, x: &Str, y: &Str) -> Option<Vec<Letter>> {
        self.distinguishing_word(self.state_of(x), self.state_of(y))
    }

    /// The one-letter left extensions of a string.
    pub fn left_extensions_of(&self, x: &Str) -> crate::automaton::Extensions {
        self.extensions(self.state_of(x))
    }

    /// Extends `x` greedily by letters of sign `theta` as long as possible.
    pub fn extend_greedy(&self, x: &Str, theta: Side) -> Str {
        let mut y = x.clone();
        let mut s = self.state_of(x);
        while let Some((l, t)) = self.step_sign(s, theta) {
            y.syl.push(l);
            s = t;
        }
        y
    }
}
