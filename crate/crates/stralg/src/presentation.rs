//! Algebra presentations: quiver, monomial relations and the sign maps.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type ArrowId = usize;

/// A parity, side or sign value in {+1, -1}.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn sign(self) -> i8 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }

    pub fn from_sign(s: i64) -> Option<Side> {
        match s {
            1 => Some(Side::Plus),
            -1 => Some(Side::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Side::Plus => '+',
            Side::Minus => '-',
        }
    }
}

impl std::ops::Neg for Side {
    type Output = Side;
    fn neg(self) -> Side {
        self.flip()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

/// A syllable: an arrow or its formal inverse. Ordered by arrow name, direct first.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub arrow: ArrowId,
    pub inverse: bool,
}

impl Letter {
    pub fn direct(arrow: ArrowId) -> Letter {
        Letter { arrow, inverse: false }
    }

    pub fn inv(arrow: ArrowId) -> Letter {
        Letter { arrow, inverse: true }
    }

    pub fn inverted(self) -> Letter {
        Letter { arrow: self.arrow, inverse: !self.inverse }
    }

    /// θ of the one-letter string: +1 for inverse letters.
    pub fn theta(self) -> Side {
        if self.inverse {
            Side::Plus
        } else {
            Side::Minus
        }
    }
}

/// Quiver, relations and sign maps. Arrows are stored sorted by name so that
/// arrow ids follow the fixed letter order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraSpec {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// Each relation in application order: `a3.a2` is stored as `[a2, a3]`.
    pub relations: Vec<Vec<ArrowId>>,
    pub sigma: Vec<Side>,
    pub epsilon: Vec<Side>,
}

impl AlgebraSpec {
    pub fn arrow_id(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn start(&self, l: Letter) -> VertexId {
        let a = &self.arrows[l.arrow];
        if l.inverse {
            a.target
        } else {
            a.source
        }
    }

    pub fn end(&self, l: Letter) -> VertexId {
        let a = &self.arrows[l.arrow];
        if l.inverse {
            a.source
        } else {
            a.target
        }
    }

    pub fn sigma_of(&self, l: Letter) -> Side {
        if l.inverse {
            self.epsilon[l.arrow]
        } else {
            self.sigma[l.arrow]
        }
    }

    pub fn eps_of(&self, l: Letter) -> Side {
        if l.inverse {
            self.sigma[l.arrow]
        } else {
            self.epsilon[l.arrow]
        }
    }

    /// Literal token: `a1` or `a1'`.
    pub fn letter_token(&self, l: Letter) -> String {
        let n = &self.arrows[l.arrow].name;
        if l.inverse {
            format!("{n}'")
        } else {
            n.clone()
        }
    }

    /// Compact token with inverse letters capitalised: `A1`.
    pub fn letter_compact(&self, l: Letter) -> String {
        let n = &self.arrows[l.arrow].name;
        if l.inverse {
            let mut c = n.chars();
            match c.next() {
                Some(h) => h.to_uppercase().chain(c).collect(),
                None => String::new(),
            }
        } else {
            n.clone()
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.arrows.len()).flat_map(|a| [Letter::direct(a), Letter::inv(a)])
    }

    pub fn max_relation_len(&self) -> usize {
        self.relations.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn is_length2_relation(&self, first: ArrowId, second: ArrowId) -> bool {
        self.relations.iter().any(|r| r.len() == 2 && r[0] == first && r[1] == second)
    }

    fn composable(&self, first: ArrowId, second: ArrowId) -> bool {
        self.arrows[first].target == self.arrows[second].source
    }
}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
}

impl Cursor<'_> {
    fn err(&self, col: usize, msg: impl Into<String>) -> Error {
        Error::Syntax { line: self.line, col, msg: msg.into() }
    }

    fn col_of(&self, piece: &str) -> usize {
        let off = piece.as_ptr() as usize - self.text.as_ptr() as usize;
        off + 1
    }
}

fn parse_sign(tok: &str) -> Option<Side> {
    match tok {
        "+" | "+1" | "1" => Some(Side::Plus),
        "-" | "-1" => Some(Side::Minus),
        _ => None,
    }
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(h) if h.is_ascii_alphabetic() || h == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

/// Parses an algebra file. Missing signs are filled by [`solve_signs`].
pub fn parse_algebra(text: &str) -> Result<AlgebraSpec> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Vertices,
        Arrows,
        Relations,
        Signs,
    }
    let mut section = Section::None;
    let mut vertices: Vec<String> = Vec::new();
    let mut raw_arrows: Vec<(String, String, String, usize, usize)> = Vec::new();
    let mut raw_rels: Vec<(Vec<(String, usize)>, usize)> = Vec::new();
    let mut raw_signs: Vec<(String, Side, Side, usize, usize)> = Vec::new();

    for (ln, full) in text.lines().enumerate() {
        let cur = Cursor { line: ln + 1, text: full };
        let body = full.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('[') {
            section = match trimmed {
                "[vertices]" => Section::Vertices,
                "[arrows]" => Section::Arrows,
                "[relations]" => Section::Relations,
                "[signs]" => Section::Signs,
                _ => return Err(cur.err(cur.col_of(trimmed), format!("unknown section {trimmed}"))),
            };
            continue;
        }
        match section {
            Section::None => return Err(cur.err(cur.col_of(trimmed), "content before any section")),
            Section::Vertices => {
                for v in trimmed.split_whitespace() {
                    if !is_ident(v) {
                        return Err(cur.err(cur.col_of(v), format!("bad vertex id {v:?}")));
                    }
                    if vertices.iter().any(|w| w == v) {
                        return Err(cur.err(cur.col_of(v), format!("duplicate vertex {v}")));
                    }
                    vertices.push(v.to_string());
                }
            }
            Section::Arrows => {
                let (name, rest) = trimmed
                    .split_once(':')
                    .ok_or_else(|| cur.err(cur.col_of(trimmed), "expected `name: src -> tgt`"))?;
                let name = name.trim();
                if !is_ident(name) {
                    return Err(cur.err(cur.col_of(trimmed), format!("bad arrow name {name:?}")));
                }
                let (src, tgt) = rest.split_once("->").ok_or_else(|| cur.err(cur.col_of(rest), "expected `->`"))?;
                let (src, tgt) = (src.trim(), tgt.trim());
                if src.is_empty() || tgt.is_empty() || tgt.contains(char::is_whitespace) {
                    return Err(cur.err(cur.col_of(rest), "expected `src -> tgt`"));
                }
                raw_arrows.push((name.into(), src.into(), tgt.into(), ln + 1, cur.col_of(src)));
            }
            Section::Relations => {
                let toks =
                    trimmed.split('.').map(|t| (t.trim().to_string(), cur.col_of(t.trim_start()))).collect::<Vec<_>>();
                if toks.len() < 2 {
                    return Err(cur.err(cur.col_of(trimmed), "relation must have length at least 2"));
                }
                if let Some((_, c)) = toks.iter().find(|(t, _)| !is_ident(t)) {
                    return Err(cur.err(*c, "bad arrow token in relation"));
                }
                raw_rels.push((toks, ln + 1));
            }
            Section::Signs => {
                let (name, rest) = trimmed
                    .split_once(':')
                    .ok_or_else(|| cur.err(cur.col_of(trimmed), "expected `name: sigma epsilon`"))?;
                let vals: Vec<&str> = rest.split_whitespace().collect();
                if vals.len() != 2 {
                    return Err(cur.err(cur.col_of(rest), "expected two signs"));
                }
                let s = parse_sign(vals[0]).ok_or_else(|| cur.err(cur.col_of(vals[0]), "bad sign"))?;
                let e = parse_sign(vals[1]).ok_or_else(|| cur.err(cur.col_of(vals[1]), "bad sign"))?;
                raw_signs.push((name.trim().into(), s, e, ln + 1, cur.col_of(trimmed)));
            }
        }
    }

    let vid: HashMap<&str, VertexId> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut arrows = Vec::new();
    for (name, src, tgt, line, col) in &raw_arrows {
        let lookup = |v: &str| {
            vid.get(v).copied().ok_or_else(|| Error::Syntax {
                line: *line,
                col: *col,
                msg: format!("arrow {name} references undeclared vertex {v}"),
            })
        };
        let a = Arrow { name: name.clone(), source: lookup(src)?, target: lookup(tgt)? };
        if arrows.iter().any(|b: &Arrow| b.name == a.name) {
            return Err(Error::Syntax { line: *line, col: 1, msg: format!("duplicate arrow {name}") });
        }
        arrows.push(a);
    }
    arrows.sort_by(|a, b| a.name.cmp(&b.name));
    let aid: HashMap<String, ArrowId> = arrows.iter().enumerate().map(|(i, a)| (a.name.clone(), i)).collect();

    let mut relations = Vec::new();
    for (toks, line) in &raw_rels {
        let mut path = Vec::new();
        for (t, col) in toks.iter().rev() {
            let id = aid.get(t.as_str()).copied().ok_or_else(|| Error::Syntax {
                line: *line,
                col: *col,
                msg: format!("unknown arrow {t} in relation"),
            })?;
            path.push(id);
        }
        for w in path.windows(2) {
            if arrows[w[0]].target != arrows[w[1]].source {
                return Err(Error::Syntax {
                    line: *line,
                    col: 1,
                    msg: format!(
                        "relation is not a composable path: {} does not follow {}",
                        arrows[w[1]].name, arrows[w[0]].name
                    ),
                });
            }
        }
        relations.push(path);
    }

    let mut spec = AlgebraSpec { vertices, arrows, relations, sigma: Vec::new(), epsilon: Vec::new() };
    if raw_signs.is_empty() {
        let (s, e) = solve_signs(&spec)?;
        spec.sigma = s;
        spec.epsilon = e;
    } else {
        let mut sigma = vec![None; spec.arrows.len()];
        let mut epsilon = vec![None; spec.arrows.len()];
        for (name, s, e, line, col) in raw_signs {
            let id = aid.get(name.as_str()).copied().ok_or_else(|| Error::Syntax {
                line,
                col,
                msg: format!("unknown arrow {name} in signs"),
            })?;
            sigma[id] = Some(s);
            epsilon[id] = Some(e);
        }
        if let Some(i) = sigma.iter().position(Option::is_none) {
            return Err(Error::Syntax {
                line: text.lines().count(),
                col: 1,
                msg: format!("[signs] misses arrow {}", spec.arrows[i].name),
            });
        }
        spec.sigma = sigma.into_iter().flatten().collect();
        spec.epsilon = epsilon.into_iter().flatten().collect();
    }
    Ok(spec)
}

/// Renders a spec in the file format, signs included.
pub fn print_algebra(spec: &AlgebraSpec) -> String {
    let mut out = String::new();
    out.push_str("[vertices]\n");
    out.push_str(&spec.vertices.join(" "));
    out.push_str("\n\n[arrows]\n");
    for a in &spec.arrows {
        let _ = writeln!(out, "{}: {} -> {}", a.name, spec.vertices[a.source], spec.vertices[a.target]);
    }
    out.push_str("\n[relations]\n");
    for r in &spec.relations {
        let names: Vec<&str> = r.iter().rev().map(|&a| spec.arrows[a].name.as_str()).collect();
        let _ = writeln!(out, "{}", names.join("."));
    }
    out.push_str("\n[signs]\n");
    for (i, a) in spec.arrows.iter().enumerate() {
        let _ = writeln!(out, "{}: {}1 {}1", a.name, spec.sigma[i].symbol(), spec.epsilon[i].symbol());
    }
    out
}

/// Quiver-only axioms: fan-in/out, unique composition, finite dimension.
fn quiver_violations(spec: &AlgebraSpec) -> Vec<String> {
    let mut out = Vec::new();
    let n = spec.arrows.len();
    for (v, name) in spec.vertices.iter().enumerate() {
        let outs = spec.arrows.iter().filter(|a| a.source == v).count();
        let ins = spec.arrows.iter().filter(|a| a.target == v).count();
        if outs > 2 {
            out.push(format!("fan-out exceeds 2 at vertex {name} ({outs} arrows)"));
        }
        if ins > 2 {
            out.push(format!("fan-in exceeds 2 at vertex {name} ({ins} arrows)"));
        }
    }
    for b in 0..n {
        let after: Vec<&str> = (0..n)
            .filter(|&g| spec.composable(b, g) && !spec.is_length2_relation(b, g))
            .map(|g| spec.arrows[g].name.as_str())
            .collect();
        if after.len() > 1 {
            out.push(format!(
                "arrow {} has {} relation-free successors ({})",
                spec.arrows[b].name,
                after.len(),
                after.join(", ")
            ));
        }
        let before: Vec<&str> = (0..n)
            .filter(|&g| spec.composable(g, b) && !spec.is_length2_relation(g, b))
            .map(|g| spec.arrows[g].name.as_str())
            .collect();
        if before.len() > 1 {
            out.push(format!(
                "arrow {} has {} relation-free predecessors ({})",
                spec.arrows[b].name,
                before.len(),
                before.join(", ")
            ));
        }
    }
    if let Some(cycle) = relation_free_cycle(spec) {
        out.push(format!("relation-free cycle (infinite-dimensional) through {cycle}"));
    }
    out
}

/// Looks for an infinite directed path avoiding every relation, tracking
/// the last (maxRelationLength - 1) arrows as state.
fn relation_free_cycle(spec: &AlgebraSpec) -> Option<String> {
    let k = spec.max_relation_len().saturating_sub(1).max(1);
    let ends_in_relation = |path: &[ArrowId]| spec.relations.iter().any(|r| path.ends_with(r));
    let mut graph: DiGraph<Vec<ArrowId>, ()> = DiGraph::new();
    let mut index: HashMap<Vec<ArrowId>, _> = HashMap::new();
    let mut queue = VecDeque::new();
    for a in 0..spec.arrows.len() {
        let w = vec![a];
        index.insert(w.clone(), graph.add_node(w.clone()));
        queue.push_back(w);
    }
    while let Some(w) = queue.pop_front() {
        let from = index[&w];
        let last = *w.last().expect("windows are non-empty");
        for g in 0..spec.arrows.len() {
            if !spec.composable(last, g) {
                continue;
            }
            let mut ext = w.clone();
            ext.push(g);
            if ends_in_relation(&ext) {
                continue;
            }
            if ext.len() > k {
                ext.remove(0);
            }
            let to = match index.get(&ext) {
                Some(&t) => t,
                None => {
                    let t = graph.add_node(ext.clone());
                    index.insert(ext.clone(), t);
                    queue.push_back(ext);
                    t
                }
            };
            graph.add_edge(from, to, ());
        }
    }
    if !is_cyclic_directed(&graph) {
        return None;
    }
    let sccs = petgraph::algo::tarjan_scc(&graph);
    let cyc = sccs
        .into_iter()
        .find(|c| c.len() > 1 || graph.contains_edge(c[0], c[0]))
        .expect("cyclic graph has a cyclic component");
    let mut names: Vec<&str> = cyc
        .iter()
        .flat_map(|&n| graph[n].iter().map(|&a| spec.arrows[a].name.as_str()))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    names.sort_unstable();
    Some(names.join(", "))
}

fn sign_violations(spec: &AlgebraSpec) -> Vec<String> {
    let mut out = Vec::new();
    let n = spec.arrows.len();
    let name = |a: ArrowId| spec.arrows[a].name.as_str();
    for a in 0..n {
        for b in a + 1..n {
            if spec.arrows[a].source == spec.arrows[b].source && spec.sigma[a] == spec.sigma[b] {
                out.push(format!("sigma({}) = sigma({}) but they share a source", name(a), name(b)));
            }
            if spec.arrows[a].target == spec.arrows[b].target && spec.epsilon[a] == spec.epsilon[b] {
                out.push(format!("epsilon({}) = epsilon({}) but they share a target", name(a), name(b)));
            }
        }
    }
    for b in 0..n {
        for g in 0..n {
            if spec.composable(b, g) && !spec.is_length2_relation(b, g) && spec.sigma[g] != -spec.epsilon[b] {
                out.push(format!(
                    "sigma({}) must equal -epsilon({}) since {}.{} is not a relation",
                    name(g),
                    name(b),
                    name(g),
                    name(b)
                ));
            }
        }
    }
    out
}

/// Checks every axiom and reports all violations.
pub fn validate_algebra(spec: &AlgebraSpec) -> Result<()> {
    let mut v = quiver_violations(spec);
    if spec.sigma.len() != spec.arrows.len() || spec.epsilon.len() != spec.arrows.len() {
        v.push("sign maps do not cover every arrow".into());
    } else {
        v.extend(sign_violations(spec));
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(v))
    }
}

/// Finds sign maps satisfying the three sign constraints. Variables are
/// ordered sigma(a0), epsilon(a0), sigma(a1), ... by arrow name and each
/// constraint component takes +1 at its first variable, which makes the
/// result the first solution in that order.
pub fn solve_signs(spec: &AlgebraSpec) -> Result<(Vec<Side>, Vec<Side>)> {
    solve_sign_system(spec).map_err(|e| {
        // an unsatisfiable system usually stems from a broken quiver axiom
        let pre = quiver_violations(spec);
        if pre.is_empty() {
            e
        } else {
            Error::Invalid(pre)
        }
    })
}

fn solve_sign_system(spec: &AlgebraSpec) -> Result<(Vec<Side>, Vec<Side>)> {
    let n = spec.arrows.len();
    let sig = |a: ArrowId| 2 * a;
    let eps = |a: ArrowId| 2 * a + 1;
    // edge (u, v, differ): differ=true means value(u) = -value(v)
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); 2 * n];
    let mut add = |u: usize, v: usize, differ: bool| {
        adj[u].push((v, differ));
        adj[v].push((u, differ));
    };
    for a in 0..n {
        for b in a + 1..n {
            if spec.arrows[a].source == spec.arrows[b].source {
                add(sig(a), sig(b), true);
            }
            if spec.arrows[a].target == spec.arrows[b].target {
                add(eps(a), eps(b), true);
            }
        }
    }
    for b in 0..n {
        for g in 0..n {
            if spec.composable(b, g) && !spec.is_length2_relation(b, g) {
                add(sig(g), eps(b), true);
            }
        }
    }
    let mut val: Vec<Option<Side>> = vec![None; 2 * n];
    let var_name = |v: usize| {
        let kind = if v.is_multiple_of(2) { "sigma" } else { "epsilon" };
        format!("{kind}({})", spec.arrows[v / 2].name)
    };
    for start in 0..2 * n {
        if val[start].is_some() {
            continue;
        }
        val[start] = Some(Side::Plus);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let vu = val[u].expect("assigned before push");
            for &(w, differ) in &adj[u] {
                let want = if differ { -vu } else { vu };
                match val[w] {
                    None => {
                        val[w] = Some(want);
                        stack.push(w);
                    }
                    Some(x) if x != want => {
                        return Err(Error::Unsat(format!(
                            "odd constraint cycle through {} and {}",
                            var_name(u),
                            var_name(w)
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let sigma = (0..n).map(|a| val[sig(a)].expect("all assigned")).collect();
    let epsilon = (0..n).map(|a| val[eps(a)].expect("all assigned")).collect();
    Ok((sigma, epsilon))
}

/// Arrow name to (sigma, epsilon), for reports.
pub fn sign_table(spec: &AlgebraSpec) -> BTreeMap<String, (i8, i8)> {
    spec.arrows
        .iter()
        .enumerate()
        .map(|(i, a)| (a.name.clone(), (spec.sigma[i].sign(), spec.epsilon[i].sign())))
        .collect()
}
