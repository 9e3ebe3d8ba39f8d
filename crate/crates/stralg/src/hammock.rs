//! The hammock `(H^i(x0), <_l)`: comparison, extremes, immediate
//! neighbours and bounded enumeration.

use std::cmp::Ordering;

use serde::Serialize;

use crate::automaton::Algebra;
use crate::error::{Error, Result};
use crate::presentation::Side;
use crate::strings::{common_left_substring, Str};

/// The hammock of strings `u·x0` with `u` empty or `θ(u) = side`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HammockKey {
    pub base: Str,
    pub side: Side,
}

impl HammockKey {
    pub fn new(base: Str, side: Side) -> HammockKey {
        HammockKey { base, side }
    }

    pub fn contains(&self, x: &Str) -> bool {
        self.base.is_left_substring_of(x) && x.theta_above(self.base.len()).is_none_or(|t| t == self.side)
    }

    fn check(&self, x: &Str) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Precondition("string is not in the hammock".into()))
        }
    }
}

/// Score of the letter following the meet: inverse above, nothing, direct below.
fn score(next: Option<Side>) -> i8 {
    next.map_or(0, |s| s.sign())
}

/// `<_l` on strings extending a common zero string.
pub fn compare_l(x: &Str, y: &Str) -> Result<Ordering> {
    let m = common_left_substring(x, y)?;
    Ok(score(m.theta_x).cmp(&score(m.theta_y)))
}

impl Algebra {
    /// `(m_i(x0), M_i(x0))`.
    pub fn extremal_strings(&self, key: &HammockKey) -> (Str, Str) {
        match key.side {
            Side::Plus => (key.base.clone(), self.extend_greedy(&key.base, Side::Plus)),
            Side::Minus => (self.extend_greedy(&key.base, Side::Minus), key.base.clone()),
        }
    }

    /// Immediate successor `l(x)`, or `None` at the maximum.
    pub fn succ_l(&self, key: &HammockKey, x: &Str) -> Result<Option<Str>> {
        key.check(x)?;
        Ok(self.neighbour(key, x, Side::Plus))
    }

    /// Immediate predecessor `l̄(x)`, or `None` at the minimum.
    pub fn pred_l(&self, key: &HammockKey, x: &Str) -> Result<Option<Str>> {
        key.check(x)?;
        Ok(self.neighbour(key, x, Side::Minus))
    }

    /// Shared body of `l` (dir = +1) and `l̄` (dir = -1).
    pub(crate) fn neighbour(&self, key: &HammockKey, x: &Str, dir: Side) -> Option<Str> {
        let at_base = x.len() == key.base.len();
        if at_base && key.side != dir {
            return None;
        }
        if let Some((l, _)) = self.step_sign(self.state_of(x), dir) {
            return Some(self.extend_greedy(&x.with(l), -dir));
        }
        // drop the top run of `dir` letters plus the letter of sign -dir below it
        (key.base.len()..x.len()).rev().find(|&k| x.syl[k].theta() == -dir).map(|k| x.prefix(k))
    }

    /// All hammock elements with at most `cap` letters above the base,
    /// sorted by `<_l`.
    pub fn enumerate_hammock(&self, key: &HammockKey, cap: usize) -> Vec<Str> {
        let mut out = vec![key.base.clone()];
        let mut stack = Vec::new();
        if cap > 0 {
            if let Some((l, s)) = self.step_sign(self.state_of(&key.base), key.side) {
                stack.push((key.base.with(l), s));
            }
        }
        while let Some((x, s)) = stack.pop() {
            if x.len() - key.base.len() < cap {
                for (l, t) in self.transitions(s) {
                    stack.push((x.with(l), t));
                }
            }
            out.push(x);
        }
        out.sort_by(|a, b| compare_l(a, b).expect("common base"));
        out
    }
}

/// The unique shortest string of `[a, b]`; it is `a ⊓_l b`.
pub fn interval_pivot(a: &Str, b: &Str) -> Result<Str> {
    if compare_l(a, b)? == Ordering::Greater {
        return Err(Error::Precondition("interval endpoints out of order".into()));
    }
    Ok(common_left_substring(a, b)?.meet)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Algebra, HammockKey) {
        let alg = Algebra::parse(include_str!("../fixtures/gamma0.alg")).unwrap();
        let a0 = alg.parse_compact("a0").unwrap();
        (alg, HammockKey::new(a0, Side::Plus))
    }

    #[test]
    fn order_of_named_strings() {
        let (alg, _) = setup();
        let s = |t: &str| alg.parse_compact(t).unwrap();
        assert_eq!(compare_l(&s("a0"), &s("a3A1a0")).unwrap(), Ordering::Less);
        assert_eq!(compare_l(&s("a3A1a0"), &s("A1a0")).unwrap(), Ordering::Less);
        assert_eq!(compare_l(&s("A1a0"), &s("A1a0")).unwrap(), Ordering::Equal);
    }

    #[test]
    fn extremes_of_a0_plus() {
        let (alg, key) = setup();
        let (lo, hi) = alg.extremal_strings(&key);
        assert_eq!(alg.compact(&lo), "a0");
        assert_eq!(alg.compact(&hi), "H1G1FE2E1A2A1a0");
        assert_eq!(alg.succ_l(&key, &hi).unwrap(), None);
        assert_eq!(alg.pred_l(&key, &lo).unwrap(), None);
    }

    #[test]
    fn predecessor_of_a1a0_continues_inversely() {
        let (alg, key) = setup();
        let x = alg.parse_compact("A1a0").unwrap();
        let p = alg.pred_l(&key, &x).unwrap().unwrap();
        assert_eq!(alg.compact(&p), "B2A5a3A1a0");
        assert_eq!(alg.succ_l(&key, &p).unwrap(), Some(x));
    }

    #[test]
    fn enumeration_is_sorted_and_neighbour_consistent() {
        let (alg, key) = setup();
        let xs = alg.enumerate_hammock(&key, 3);
        assert_eq!(xs[0], key.base);
        for w in xs.windows(2) {
            assert_eq!(compare_l(&w[0], &w[1]).unwrap(), Ordering::Less);
        }
        let inert = HammockKey::new(key.base.clone(), Side::Minus);
        assert_eq!(alg.enumerate_hammock(&inert, 5), vec![key.base.clone()]);
    }

    #[test]
    fn pivot_is_the_meet() {
        let (alg, _) = setup();
        let a = alg.parse_compact("a3A1a0").unwrap();
        let b = alg.parse_compact("A1a0").unwrap();
        assert_eq!(interval_pivot(&a, &b).unwrap(), b);
        assert_eq!(interval_pivot(&a, &a).unwrap(), a);
        assert!(interval_pivot(&b, &a).is_err());
    }
}
