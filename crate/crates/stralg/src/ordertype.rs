//! Finite-description linear order expressions, their normalizer, and the
//! recursion computing the order type of a hammock.

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Mutex;

use serde::Serialize;

use crate::automaton::{ExtState, StateId};
use crate::condensation::{BContext, CenterClass, Ray, Workspace};
use crate::error::{Error, Result};
use crate::hammock::HammockKey;
use crate::par;
use crate::presentation::Side;
use crate::strings::Str;

/// A finite-description linear order. The variant order is the argument
/// order inside normalized shuffles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LinExpr {
    Zero,
    One,
    Fin(u64),
    Sum(Vec<LinExpr>),
    ProdOmega(Box<LinExpr>),
    ProdOmegaStar(Box<LinExpr>),
    ProdFin(Box<LinExpr>, u64),
    Shuffle(Vec<LinExpr>),
}

use LinExpr::*;

impl LinExpr {
    pub fn omega() -> LinExpr {
        ProdOmega(Box::new(One))
    }

    pub fn omega_star() -> LinExpr {
        ProdOmegaStar(Box::new(One))
    }

    pub fn zeta() -> LinExpr {
        Sum(vec![LinExpr::omega_star(), LinExpr::omega()])
    }

    fn is_zeta(&self) -> bool {
        *self == LinExpr::zeta()
    }

    /// Size of the tree.
    pub fn nodes(&self) -> usize {
        1 + match self {
            Sum(xs) | Shuffle(xs) => xs.iter().map(LinExpr::nodes).sum(),
            ProdOmega(a) | ProdOmegaStar(a) | ProdFin(a, _) => a.nodes(),
            _ => 0,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Zero => "0".into(),
            One => "1".into(),
            Fin(n) => n.to_string(),
            Sum(xs) if self.is_zeta() && xs.len() == 2 => "z".into(),
            Sum(xs) => xs
                .iter()
                .map(|x| if matches!(x, Sum(_)) && !x.is_zeta() { format!("({})", x.render()) } else { x.render() })
                .collect::<Vec<_>>()
                .join("+"),
            ProdOmega(a) if **a == One => "w".into(),
            ProdOmegaStar(a) if **a == One => "w*".into(),
            ProdOmega(a) => format!("{}.w", a.factor()),
            ProdOmegaStar(a) => format!("{}.w*", a.factor()),
            ProdFin(a, n) => format!("{}.{n}", a.factor()),
            Shuffle(xs) => format!("xi({})", xs.iter().map(LinExpr::render).collect::<Vec<_>>().join(",")),
        }
    }

    fn factor(&self) -> String {
        match self {
            Sum(_) if !self.is_zeta() => format!("({})", self.render()),
            _ => self.render(),
        }
    }
}

impl std::fmt::Display for LinExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

// ---------------------------------------------------------------- parsing

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { line: 1, col: self.pos + 1, msg: msg.into() })
    }

    fn skip(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map_or_else(|| self.err("integer out of range"), Ok)
    }

    /// `w` or `w*`, after the `w` has been seen.
    fn omega_tail(&mut self) -> bool {
        self.pos += 1;
        self.eat(b'*')
    }

    fn expr(&mut self) -> Result<LinExpr> {
        let mut terms = vec![self.term()?];
        while self.eat(b'+') {
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 { terms.pop().expect("one term") } else { Sum(terms) })
    }

    fn term(&mut self) -> Result<LinExpr> {
        let mut e = self.atom()?;
        while self.eat(b'.') {
            e = match self.peek() {
                Some(b'w') => {
                    if self.omega_tail() {
                        ProdOmegaStar(Box::new(e))
                    } else {
                        ProdOmega(Box::new(e))
                    }
                }
                Some(c) if c.is_ascii_digit() => match self.int()? {
                    0 => Zero,
                    1 => e,
                    n => ProdFin(Box::new(e), n),
                },
                _ => return self.err("expected w, w* or an integer after '.'"),
            };
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<LinExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(b'w') => Ok(if self.omega_tail() { LinExpr::omega_star() } else { LinExpr::omega() }),
            Some(b'z') => {
                self.pos += 1;
                Ok(LinExpr::zeta())
            }
            Some(b'x') => {
                if !self.src[self.pos..].starts_with(b"xi") {
                    return self.err("expected xi(");
                }
                self.pos += 2;
                if !self.eat(b'(') {
                    return self.err("expected '(' after xi");
                }
                if self.peek() == Some(b')') {
                    return self.err("empty shuffle; write 0");
                }
                let mut args = vec![self.expr()?];
                while self.eat(b',') {
                    args.push(self.expr()?);
                }
                if !self.eat(b')') {
                    return self.err("expected ')' closing xi");
                }
                Ok(Shuffle(args))
            }
            Some(c) if c.is_ascii_digit() => Ok(match self.int()? {
                0 => Zero,
                1 => One,
                n => Fin(n),
            }),
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<LinExpr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn render_expr(e: &LinExpr) -> String {
    e.render()
}

// ------------------------------------------------------------- normalizer

fn fin(n: u64) -> LinExpr {
    match n {
        0 => Zero,
        1 => One,
        n => Fin(n),
    }
}

fn finite_size(e: &LinExpr) -> Option<u64> {
    match e {
        Zero => Some(0),
        One => Some(1),
        Fin(n) => Some(*n),
        Sum(xs) => xs.iter().map(finite_size).sum(),
        ProdFin(a, n) => finite_size(a).map(|k| k * n),
        _ => None,
    }
}

/// `1 + e ≅ e`.
fn absorbs_left(e: &LinExpr) -> bool {
    match e {
        ProdOmega(a) => finite_size(a).is_some_and(|n| n > 0) || absorbs_left(a),
        Sum(xs) => xs.first().is_some_and(absorbs_left),
        ProdFin(a, _) => absorbs_left(a),
        _ => false,
    }
}

/// `e + 1 ≅ e`.
fn absorbs_right(e: &LinExpr) -> bool {
    match e {
        ProdOmegaStar(a) => finite_size(a).is_some_and(|n| n > 0) || absorbs_right(a),
        Sum(xs) => xs.last().is_some_and(absorbs_right),
        ProdFin(a, _) => absorbs_right(a),
        _ => false,
    }
}

/// Summands of a normalized expression with sums and finite repetitions
/// unfolded.
fn items(e: &LinExpr) -> Vec<LinExpr> {
    match e {
        Zero => Vec::new(),
        Sum(xs) => xs.iter().flat_map(items).collect(),
        ProdFin(a, n) => {
            let one = items(a);
            (0..*n).flat_map(|_| one.iter().cloned()).collect()
        }
        other => vec![other.clone()],
    }
}

/// Normal form. Rules, applied to a flat list of summands until none fires:
/// merge adjacent finite constants; drop a finite constant next to a term
/// that absorbs it; collapse `Ξ(L⃗)+M+Ξ(L⃗)` to `Ξ(L⃗)` when `M` is empty or
/// an argument; collapse `(L₂+Ξ(L⃗)+L₁)·ζ` to `Ξ(L⃗)` when `L₁+L₂` is empty
/// or an argument; absorb `X` into an adjacent `X·ω` or `X·ω*`; turn every
/// `(…)·ω` and `(…)·ω*` body into its least rotation, consuming or emitting
/// the rotated summands next to it. Products keep their minimal period,
/// shuffles drop zero and repeated arguments and sort them, and equal
/// adjacent blocks are folded back into `·n`.
pub fn normalize(e: &LinExpr) -> LinExpr {
    match e {
        Zero => Zero,
        One => One,
        Fin(n) => fin(*n),
        Sum(xs) => norm_list(xs.iter().map(normalize).flat_map(|x| items(&x)).collect()),
        ProdFin(a, n) => {
            let one = items(&normalize(a));
            norm_list((0..*n).flat_map(|_| one.iter().cloned()).collect())
        }
        ProdOmega(a) => norm_list(vec![norm_power(normalize(a), false)]),
        ProdOmegaStar(a) => norm_list(vec![norm_power(normalize(a), true)]),
        Shuffle(xs) => {
            let args: BTreeSet<LinExpr> = xs.iter().map(normalize).filter(|x| *x != Zero).collect();
            if args.is_empty() {
                Zero
            } else {
                Shuffle(args.into_iter().collect())
            }
        }
    }
}

fn norm_power(a: LinExpr, star: bool) -> LinExpr {
    let wrap = |b: LinExpr| if star { ProdOmegaStar(Box::new(b)) } else { ProdOmega(Box::new(b)) };
    match finite_size(&a) {
        Some(0) => return Zero,
        Some(_) => return wrap(One),
        None => {}
    }
    let v = items(&a);
    let n = v.len();
    let p = (1..=n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| v[i] == v[i - p])).unwrap_or(n);
    wrap(norm_list(v[..p].to_vec()))
}

fn is_finite_atom(e: &LinExpr) -> bool {
    matches!(e, One | Fin(_))
}

fn atom_size(e: &LinExpr) -> u64 {
    match e {
        One => 1,
        Fin(n) => *n,
        _ => 0,
    }
}

/// One rewrite on the list, if any applies.
fn rewrite_once(v: &mut Vec<LinExpr>) -> bool {
    // merge adjacent finite constants
    for i in 0..v.len().saturating_sub(1) {
        if is_finite_atom(&v[i]) && is_finite_atom(&v[i + 1]) {
            let n = atom_size(&v[i]) + atom_size(&v[i + 1]);
            v.splice(i..=i + 1, [fin(n)]);
            return true;
        }
    }
    // absorb finite constants
    for i in 0..v.len() {
        if is_finite_atom(&v[i]) && (v.get(i + 1).is_some_and(absorbs_left) || (i > 0 && absorbs_right(&v[i - 1]))) {
            v.remove(i);
            return true;
        }
    }
    // Ξ(L)+M+Ξ(L) with M empty or an argument
    for i in 0..v.len() {
        if let Shuffle(args) = &v[i] {
            for j in i + 1..v.len() {
                if v[j] == v[i] {
                    let mid = norm_list(v[i + 1..j].to_vec());
                    if mid == Zero || args.contains(&mid) {
                        v.drain(i + 1..=j);
                        return true;
                    }
                    break;
                }
            }
        }
    }
    // (L2+Ξ(L)+L1)·ω* + (L2+Ξ(L)+L1)·ω
    for i in 0..v.len().saturating_sub(1) {
        if let (ProdOmegaStar(a), ProdOmega(b)) = (&v[i], &v[i + 1]) {
            if a != b {
                continue;
            }
            let body = items(a);
            for (k, s) in body.iter().enumerate() {
                if let Shuffle(args) = s {
                    let mut rest = body[k + 1..].to_vec();
                    rest.extend_from_slice(&body[..k]);
                    let m = norm_list(rest);
                    if m == Zero || args.contains(&m) {
                        let s = s.clone();
                        v.splice(i..=i + 1, [s]);
                        return true;
                    }
                }
            }
        }
    }
    // rotate products to the least rotation of their body
    for i in 0..v.len() {
        if let Some(r) = rotate_product(v, i) {
            let (range, with) = r;
            v.splice(range, with);
            return true;
        }
    }
    false
}

/// Puts the product at `v[i]` into the least rotation of its body. For
/// `(…)·ω`, `X+(Y+X)·ω ≅ (X+Y)·ω` lets a body rotate by consuming matching
/// summands in front of it or emitting a prefix there; `(…)·ω*` is dual.
/// Returns the replaced range and its new content.
#[allow(clippy::type_complexity)]
fn rotate_product(v: &[LinExpr], i: usize) -> Option<(std::ops::Range<usize>, Vec<LinExpr>)> {
    let (body, star) = match &v[i] {
        ProdOmega(b) => (b, false),
        ProdOmegaStar(b) => (b, true),
        _ => return None,
    };
    let b = items(body);
    let n = b.len();
    // X+X·ω ≅ X·ω and X·ω*+X ≅ X·ω*
    if !star && i >= n && v[i - n..i] == b[..] {
        return Some((i - n..i + 1, vec![v[i].clone()]));
    }
    if star && i + n < v.len() && v[i + 1..=i + n] == b[..] {
        return Some((i..i + n + 1, vec![v[i].clone()]));
    }
    let rot = |j: usize| -> Vec<LinExpr> { b[j..].iter().chain(&b[..j]).cloned().collect() };
    // offset j: the new body is b[j..] + b[..j]
    let best = (1..n).min_by(|&x, &y| rot(x).cmp(&rot(y)))?;
    if rot(best) >= b {
        return None;
    }
    let body = norm_power(norm_list(rot(best)), star);
    if !star {
        // consume the summands b[best..] in front, else emit b[..best] there
        let k = n - best;
        if i >= k && v[i - k..i] == b[best..] {
            return Some((i - k..i + 1, vec![body]));
        }
        if k == 1 && b[n - 1] == One && i > 0 {
            if let Fin(m) = v[i - 1] {
                return Some((i - 1..i + 1, vec![fin(m - 1), body]));
            }
        }
        let mut out = b[..best].to_vec();
        out.push(body);
        Some((i..i + 1, out))
    } else {
        // consume the summands b[..best] behind, else emit b[best..] there
        let k = best;
        if i + k < v.len() && v[i + 1..=i + k] == b[..k] {
            return Some((i..i + k + 1, vec![body]));
        }
        if k == 1 && b[0] == One {
            if let Some(Fin(m)) = v.get(i + 1) {
                return Some((i..i + 2, vec![body, fin(m - 1)]));
            }
        }
        let mut out = vec![body];
        out.extend_from_slice(&b[best..]);
        Some((i..i + 1, out))
    }
}

/// Folds runs of equal adjacent blocks into `·n`, leftmost and shortest first.
fn fold(v: &[LinExpr]) -> Vec<LinExpr> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut hit = None;
        for l in 1..=(v.len() - i) / 2 {
            let block = &v[i..i + l];
            let mut r = 1;
            while i + (r + 1) * l <= v.len() && v[i + r * l..i + (r + 1) * l] == *block {
                r += 1;
            }
            if r >= 2 {
                hit = Some((l, r));
                break;
            }
        }
        match hit {
            Some((l, r)) => {
                out.push(ProdFin(Box::new(build(&v[i..i + l])), r as u64));
                i += l * r;
            }
            None => {
                out.push(v[i].clone());
                i += 1;
            }
        }
    }
    out
}

fn build(v: &[LinExpr]) -> LinExpr {
    let mut f = fold(v);
    match f.len() {
        0 => Zero,
        1 => f.pop().expect("one summand"),
        _ => Sum(f),
    }
}

/// Normal form of a sum whose summands are already normalized atoms.
fn norm_list(mut v: Vec<LinExpr>) -> LinExpr {
    v.retain(|x| *x != Zero);
    while rewrite_once(&mut v) {}
    build(&v)
}

/// Structural equality of normal forms.
pub fn expr_equal(a: &LinExpr, b: &LinExpr) -> bool {
    normalize(a) == normalize(b)
}

// -------------------------------------------------------------- recursion

/// Result of [`OrderTyper::run`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderTypeReport {
    pub expr: LinExpr,
    /// Deepest fiber recursion reached.
    pub max_depth: usize,
    /// Number of band classes reachable from the hammock.
    pub reachable: usize,
}

/// Order-type computation over one workspace, memoized on
/// (H-class representative of the base, side).
pub struct OrderTyper<'w> {
    ws: &'w Workspace,
    memo: Mutex<HashMap<(StateId, Side), LinExpr>>,
    max_depth: AtomicUsize,
}

impl<'w> OrderTyper<'w> {
    pub fn new(ws: &'w Workspace) -> OrderTyper<'w> {
        OrderTyper { ws, memo: Mutex::new(HashMap::new()), max_depth: AtomicUsize::new(0) }
    }

    pub fn run(&self, key: &HammockKey) -> Result<OrderTypeReport> {
        if !key.contains(&key.base) {
            return Err(Error::Precondition("malformed hammock key".into()));
        }
        let reachable = self.ws.qba.reachable_classes(&self.ws.alg, key).classes.len();
        let expr = self.eval(key, 0, reachable)?;
        Ok(OrderTypeReport { expr, max_depth: self.max_depth.load(AtomicOrdering::SeqCst), reachable })
    }

    /// The least state of the H-class of the base, as a string.
    fn canonical(&self, key: &HammockKey) -> Result<(StateId, HammockKey)> {
        let alg = &self.ws.alg;
        let rep = alg.hclass_rep(alg.state_of(&key.base));
        let base = match alg.state(rep) {
            ExtState::Zero(v, j) => Str::zero(*v, *j),
            ExtState::Window(w) => alg.mk_string(w)?,
        };
        Ok((rep, HammockKey::new(base, key.side)))
    }

    fn eval(&self, key: &HammockKey, depth: usize, budget: usize) -> Result<LinExpr> {
        let (rep, key) = self.canonical(key)?;
        if let Some(e) = self.memo.lock().expect("memo lock").get(&(rep, key.side)) {
            return Ok(e.clone());
        }
        if depth > budget {
            return Err(Error::Invariant(format!("recursion depth {depth} exceeds {budget} reachable classes")));
        }
        self.max_depth.fetch_max(depth, AtomicOrdering::SeqCst);
        let expr = match self.ws.minimal_context(key.clone())? {
            None => fin(self.finite_size(&key)?),
            Some(ctx) => normalize(&self.assemble(&ctx, depth, budget)?),
        };
        Ok(self.memo.lock().expect("memo lock").entry((rep, key.side)).or_insert(expr).clone())
    }

    /// Size of a hammock with no reachable band class.
    fn finite_size(&self, key: &HammockKey) -> Result<u64> {
        let alg = &self.ws.alg;
        let mut memo: HashMap<StateId, u64> = HashMap::new();
        fn total(
            alg: &crate::automaton::Algebra,
            s: StateId,
            memo: &mut HashMap<StateId, u64>,
            stack: &mut Vec<StateId>,
            cap: u64,
        ) -> Result<u64> {
            if let Some(&n) = memo.get(&s) {
                return Ok(n);
            }
            if stack.contains(&s) {
                return Err(Error::Invariant("cycle in a hammock without bands".into()));
            }
            stack.push(s);
            let mut n = 1u64;
            for (_, t) in alg.transitions(s) {
                n = n.saturating_add(total(alg, t, memo, stack, cap)?);
            }
            stack.pop();
            if n > cap {
                return Err(Error::Indeterminate { what: "finite hammock count".into(), cap: cap as usize });
            }
            memo.insert(s, n);
            Ok(n)
        }
        let s = alg.state_of(&key.base);
        Ok(match alg.step_sign(s, key.side) {
            None => 1,
            Some((_, t)) => 1 + total(alg, t, &mut memo, &mut Vec::new(), self.ws.cap as u64)?,
        })
    }

    /// Order type of `I(c)` for one representative `c` of every center class
    /// of a minimal context: `l̄_B`-ray, the center, `l_B`-ray.
    pub fn center_intervals(&self, ctx: &BContext<'_>) -> Result<Vec<(CenterClass, LinExpr)>> {
        let budget = self.ws.qba.reachable_classes(&self.ws.alg, &ctx.key).classes.len();
        let r = ctx.beam_structure()?;
        r.center_classes
            .into_iter()
            .map(|c| {
                let fiber = |z: &Str| -> Result<LinExpr> {
                    match Side::from_sign(-i64::from(ctx.phi(z)?)) {
                        None => Ok(One),
                        Some(side) => self.eval(&HammockKey::new(z.clone(), side), 1, budget),
                    }
                };
                let sum = |xs: &[Str]| xs.iter().map(fiber).collect::<Result<Vec<_>>>().map(Sum);
                let down = periodic(ctx.ray(&c.representative, Side::Minus)?)?;
                let up = periodic(ctx.ray(&c.representative, Side::Plus)?)?;
                let mut down_period = sum(&down.period)?;
                let mut down_prefix = sum(&down.prefix)?;
                if let (Sum(a), Sum(b)) = (&mut down_period, &mut down_prefix) {
                    a.reverse();
                    b.reverse();
                }
                let e = Sum(vec![
                    ProdOmegaStar(Box::new(down_period)),
                    down_prefix,
                    One,
                    sum(&up.prefix)?,
                    ProdOmega(Box::new(sum(&up.period)?)),
                ]);
                Ok((c, normalize(&e)))
            })
            .collect()
    }

    fn assemble(&self, ctx: &BContext<'_>, depth: usize, budget: usize) -> Result<LinExpr> {
        let parent = self.ws.qba.reachable_classes(&self.ws.alg, &ctx.key).classes.len();
        let r = ctx.beam_structure()?;
        let n = r.boundaries.len();

        let mut beams = Vec::new();
        for k in 0..n - 1 {
            let up = periodic(ctx.ray(&r.boundaries[k], Side::Plus)?)?;
            let down = periodic(ctx.ray(&r.boundaries[k + 1], Side::Minus)?)?;
            beams.push((up, down));
        }
        let mut centers = Vec::new();
        for c in &r.center_classes {
            let down = periodic(ctx.ray(&c.representative, Side::Minus)?)?;
            let up = periodic(ctx.ray(&c.representative, Side::Plus)?)?;
            centers.push((down, up));
        }

        // every string whose fiber is needed
        let mut fibers: Vec<Str> = Vec::new();
        fibers.extend(r.lower_end.iter().cloned());
        fibers.extend(r.upper_end.iter().cloned());
        for (a, b) in beams.iter().chain(&centers) {
            for p in [a, b] {
                fibers.extend(p.prefix.iter().cloned());
                fibers.extend(p.period.iter().cloned());
            }
        }
        fibers.sort();
        fibers.dedup();
        let keys: Vec<(Str, Option<HammockKey>)> = fibers
            .into_iter()
            .map(|z| {
                let phi = ctx.phi(&z)?;
                let side = Side::from_sign(-i64::from(phi));
                Ok((z.clone(), side.map(|s| HammockKey::new(z, s))))
            })
            .collect::<Result<_>>()?;
        let values = par::map(self.ws.exec, &keys, |(_, k)| match k {
            None => Ok(One),
            Some(k) => {
                let child = self.ws.qba.reachable_classes(&self.ws.alg, k).classes.len();
                if child >= parent {
                    return Err(Error::Invariant("a fiber does not lose its minimal class".into()));
                }
                self.eval(k, depth + 1, budget)
            }
        });
        let mut fib: HashMap<Str, LinExpr> = HashMap::new();
        for ((z, _), v) in keys.into_iter().zip(values) {
            fib.insert(z, v?);
        }
        let sum = |xs: &[Str], rev: bool| {
            let mut v: Vec<LinExpr> = xs.iter().map(|z| fib[z].clone()).collect();
            if rev {
                v.reverse();
            }
            Sum(v)
        };
        let ray_up = |p: &Periodic| Sum(vec![sum(&p.prefix, false), ProdOmega(Box::new(sum(&p.period, false)))]);
        let ray_down = |p: &Periodic| Sum(vec![ProdOmegaStar(Box::new(sum(&p.period, true))), sum(&p.prefix, true)]);

        let mut terms = vec![sum(&r.lower_end[..r.lower_end.len() - 1], false)];
        for (up, down) in &beams {
            terms.push(One);
            terms.push(ray_up(up));
            if !centers.is_empty() {
                let args = centers.iter().map(|(d, u)| Sum(vec![ray_down(d), One, ray_up(u)])).collect();
                terms.push(Shuffle(args));
            }
            terms.push(ray_down(down));
        }
        terms.push(One);
        terms.push(sum(&r.upper_end[1..], false));
        Ok(Sum(terms))
    }
}

use crate::condensation::Periodic;

fn periodic(r: Ray) -> Result<Periodic> {
    match r {
        Ray::Periodic(p) => Ok(p),
        Ray::Finite(_) => Err(Error::Invariant("a ray inside a beam reached the end of the hammock".into())),
    }
}

/// Order type of `(H^i(x0), <_l)`.
pub fn hammock_order_type(ws: &Workspace, key: &HammockKey) -> Result<LinExpr> {
    Ok(OrderTyper::new(ws).run(key)?.expr)
}

// ----------------------------------------------------------- prefix check

/// How a walk through consecutive neighbours from one end ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Walk {
    /// The whole order was traversed; it has this many elements.
    Consumed(u64),
    /// The budget of elements ran out first.
    Depth,
    /// There is no end element to start from.
    NoEnd,
    /// After this many elements the next element is not an immediate neighbour.
    Stuck(u64),
}

/// Walk from the minimum (`from_left`) or the maximum, counting at most
/// `budget` elements.
pub fn walk(e: &LinExpr, from_left: bool, budget: u64) -> Walk {
    match e {
        Zero => Walk::Consumed(0),
        One | Fin(_) => {
            let n = atom_size(e);
            if n >= budget {
                Walk::Depth
            } else {
                Walk::Consumed(n)
            }
        }
        Sum(xs) => walk_seq(xs.iter(), xs.len(), from_left, budget),
        ProdFin(a, n) => {
            let v: Vec<&LinExpr> = (0..*n).map(|_| &**a).collect();
            walk_seq(v.into_iter(), *n as usize, from_left, budget)
        }
        ProdOmega(a) | ProdOmegaStar(a) => {
            let toward = matches!(e, ProdOmega(_)) == from_left;
            match walk(a, from_left, budget) {
                Walk::Consumed(0) => Walk::Consumed(0),
                _ if !toward => Walk::NoEnd,
                Walk::Consumed(_) | Walk::Depth => Walk::Depth,
                other => other,
            }
        }
        Shuffle(xs) => {
            if xs.iter().all(|x| walk(x, true, 1) == Walk::Consumed(0)) {
                Walk::Consumed(0)
            } else {
                Walk::NoEnd
            }
        }
    }
}

fn walk_seq<'a, I>(xs: I, len: usize, from_left: bool, budget: u64) -> Walk
where
    I: DoubleEndedIterator<Item = &'a LinExpr>,
{
    let parts: Vec<&LinExpr> = if from_left { xs.collect() } else { xs.rev().collect() };
    debug_assert_eq!(parts.len(), len);
    let mut used = 0u64;
    for p in parts {
        match walk(p, from_left, budget - used) {
            Walk::Consumed(n) => used += n,
            Walk::Depth => return Walk::Depth,
            Walk::NoEnd => return if used == 0 { Walk::NoEnd } else { Walk::Stuck(used) },
            Walk::Stuck(k) => return Walk::Stuck(used + k),
        }
        if used >= budget {
            return Walk::Depth;
        }
    }
    Walk::Consumed(used)
}

/// The same walks performed on the hammock itself.
pub fn hammock_walks(ws: &Workspace, key: &HammockKey, depth: u64) -> (Walk, Walk) {
    let alg = &ws.alg;
    let (min, max) = alg.extremal_strings(key);
    let go = |start: &Str, dir: Side| {
        let mut n = 1u64;
        let mut cur = start.clone();
        while let Some(next) = alg.neighbour(key, &cur, dir) {
            n += 1;
            if n >= depth {
                return Walk::Depth;
            }
            cur = next;
        }
        if n >= depth {
            Walk::Depth
        } else {
            Walk::Consumed(n)
        }
    };
    (go(&min, Side::Plus), go(&max, Side::Minus))
}

/// Compares the walks predicted by `e` from both ends against the hammock.
pub fn prefix_check(ws: &Workspace, e: &LinExpr, key: &HammockKey, depth: u64) -> bool {
    let (l, r) = hammock_walks(ws, key, depth);
    walk(e, true, depth) == l && walk(e, false, depth) == r
}
