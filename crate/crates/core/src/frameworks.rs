//! Elementary frameworks, their graphs, and the connected-sum monoid.
//!
//! A composition `n = n₁ + … + n_m` gives the elementary framework
//! `S^{n₁} × … × S^{n_m}`; its graph is the `m`-cube whose edges along
//! direction `i` are `n_i` parallel edges coloured by the `i`-th block of
//! classes `1..n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cubical::{AbstractCell, AbstractComplex, CubicalComplex};
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return domain("a composition needs at least one part");
        }
        if parts.contains(&0) {
            return domain("composition parts must be positive");
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `n = Σ parts`.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Parts sorted descending.
    pub fn canonical(&self) -> Composition {
        let mut parts = self.parts.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Composition { parts }
    }

    pub fn is_sphere(&self) -> bool {
        self.parts.len() == 1
    }

    /// All `2^{n−1}` ordered compositions of `n`.
    pub fn all_of(n: usize) -> Vec<Composition> {
        if n == 0 {
            return Vec::new();
        }
        (0..1u64 << (n - 1))
            .map(|cuts| {
                let mut parts = Vec::new();
                let mut run = 1;
                for i in 0..n - 1 {
                    if cuts >> i & 1 == 1 {
                        parts.push(run);
                        run = 1;
                    } else {
                        run += 1;
                    }
                }
                parts.push(run);
                Composition { parts }
            })
            .collect()
    }

    /// Canonical representatives, i.e. the partitions of `n`.
    pub fn partitions_of(n: usize) -> Vec<Composition> {
        let set: BTreeSet<Composition> = Self::all_of(n).iter().map(|c| c.canonical()).collect();
        set.into_iter().collect()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// Multigraph with edges coloured by classes `1..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameworkGraph {
    n: usize,
    vertices: BTreeSet<usize>,
    edges: Vec<(usize, usize, usize)>,
}

impl FrameworkGraph {
    /// Vertex set is the set of edge endpoints plus `extra`.
    pub fn new(n: usize, edges: Vec<(usize, usize, usize)>, extra: impl IntoIterator<Item = usize>) -> Self {
        let mut vertices: BTreeSet<usize> = extra.into_iter().collect();
        for &(u, v, _) in &edges {
            vertices.insert(u);
            vertices.insert(v);
        }
        FrameworkGraph { n, vertices, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Relabels vertices `0..V` in increasing order.
    fn compacted(&self) -> FrameworkGraph {
        let map: BTreeMap<usize, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        FrameworkGraph {
            n: self.n,
            vertices: (0..self.vertices.len()).collect(),
            edges: self.edges.iter().map(|&(u, v, k)| (map[&u], map[&v], k)).collect(),
        }
    }

    /// Text form: `n`, `graph`, then one `edge u v class` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\ngraph\n", self.n);
        for (u, v, k) in &self.edges {
            out.push_str(&format!("edge {u} {v} {k}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrameworkDiagnostics {
    /// Indices of edges with equal endpoints.
    pub loops: Vec<usize>,
    /// Indices of edges whose class lies outside `1..n`.
    pub bad_classes: Vec<usize>,
    /// `(vertex, class, count)` with `count ≠ 1`.
    pub degree_violations: Vec<(usize, usize, usize)>,
}

impl FrameworkDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.loops.is_empty() && self.bad_classes.is_empty() && self.degree_violations.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.loops.is_empty() {
            parts.push(format!("{} loop edge(s)", self.loops.len()));
        }
        if !self.bad_classes.is_empty() {
            parts.push(format!("{} edge(s) with class out of range", self.bad_classes.len()));
        }
        for (v, k, c) in &self.degree_violations {
            parts.push(format!("vertex {v} has {c} edge(s) of class {k}"));
        }
        if parts.is_empty() {
            "ok".into()
        } else {
            parts.join("; ")
        }
    }
}

/// Loop-free, and each vertex meets exactly one edge of every class.
pub fn validate_framework(g: &FrameworkGraph) -> FrameworkDiagnostics {
    let mut d = FrameworkDiagnostics::default();
    let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, &(u, v, k)) in g.edges.iter().enumerate() {
        if u == v {
            d.loops.push(i);
        }
        if k == 0 || k > g.n {
            d.bad_classes.push(i);
            continue;
        }
        *count.entry((u, k)).or_insert(0) += 1;
        if u != v {
            *count.entry((v, k)).or_insert(0) += 1;
        }
    }
    for &v in &g.vertices {
        for k in 1..=g.n {
            let c = count.get(&(v, k)).copied().unwrap_or(0);
            if c != 1 {
                d.degree_violations.push((v, k, c));
            }
        }
    }
    d
}

/// `2^m` vertices (bitmasks), `n·2^{m−1}` edges.
pub fn elementary_graph(c: &Composition) -> FrameworkGraph {
    let m = c.len();
    let mut edges = Vec::new();
    for v in 0..1usize << m {
        let mut first = 1;
        for (i, &ni) in c.parts.iter().enumerate() {
            if v >> i & 1 == 0 {
                for k in first..first + ni {
                    edges.push((v, v | 1 << i, k));
                }
            }
            first += ni;
        }
    }
    FrameworkGraph::new(c.n(), edges, 0..1usize << m)
}

/// Formal sum of elementary frameworks; `S^n` is the empty sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameworkSum {
    n: usize,
    terms: BTreeMap<Composition, usize>,
}

impl FrameworkSum {
    pub fn sphere(n: usize) -> Self {
        FrameworkSum {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(c: &Composition) -> Self {
        Self::sphere(c.n()).plus(c).expect("same n")
    }

    pub fn from_terms(n: usize, terms: &[Composition]) -> Result<Self> {
        terms.iter().try_fold(Self::sphere(n), |acc, c| acc.plus(c))
    }

    /// Adds one term; `S^n` terms are absorbed.
    pub fn plus(mut self, c: &Composition) -> Result<Self> {
        if c.n() != self.n {
            return domain(format!("term {c} has n = {}, sum has n = {}", c.n(), self.n));
        }
        if !c.is_sphere() {
            *self.terms.entry(c.canonical()).or_insert(0) += 1;
        }
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_sphere(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(composition, multiplicity)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Composition, usize)> {
        self.terms.iter().map(|(c, &k)| (c, k))
    }

    /// Terms with repetition.
    pub fn expanded(&self) -> Vec<Composition> {
        self.terms
            .iter()
            .flat_map(|(c, &k)| std::iter::repeat(c.clone()).take(k))
            .collect()
    }

    pub fn term_count(&self) -> usize {
        self.terms.values().sum()
    }

    /// Parses `(1 2) + (3)`; `+` is optional and `S^k` stands for `(k)`.
    /// `n` is taken from the first term.
    pub fn parse(expr: &str) -> Result<Self> {
        let terms = parse_terms(expr, 1)?;
        let Some(first) = terms.first() else {
            return Err(parse_err(1, 1, "empty sum"));
        };
        let n = first.1.n();
        let mut sum = Self::sphere(n);
        for (col, c) in &terms {
            if c.n() != n {
                return Err(parse_err(1, *col, format!("term {c} has n = {}, expected {n}", c.n())));
            }
            sum = sum.plus(c)?;
        }
        Ok(sum)
    }
}

impl fmt::Display for FrameworkSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "S^{}", self.n);
        }
        let terms: Vec<String> = self.expanded().iter().map(|c| c.to_string()).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// `(a b) (c)` groups with their 1-based columns.
fn parse_terms(text: &str, line: usize) -> Result<Vec<(usize, Composition)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '+' {
            i += 1;
        } else if c == '(' {
            let start = i;
            let close = chars[i..]
                .iter()
                .position(|&ch| ch == ')')
                .map(|p| p + i)
                .ok_or_else(|| parse_err(line, start + 1, "unclosed `(`"))?;
            let mut parts = Vec::new();
            let mut j = i + 1;
            while j < close {
                if chars[j].is_whitespace() || chars[j] == ',' {
                    j += 1;
                    continue;
                }
                let t0 = j;
                while j < close && !chars[j].is_whitespace() && chars[j] != ',' {
                    j += 1;
                }
                let t: String = chars[t0..j].iter().collect();
                let v = t
                    .parse::<usize>()
                    .map_err(|_| parse_err(line, t0 + 1, format!("bad part `{t}`")))?;
                parts.push(v);
            }
            let comp = Composition::new(parts).map_err(|e| parse_err(line, start + 1, e.to_string()))?;
            out.push((start + 1, comp));
            i = close + 1;
        } else if c == 'S' && chars.get(i + 1) == Some(&'^') {
            let start = i;
            let mut j = i + 2;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let k: usize = chars[i + 2..j]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| parse_err(line, start + 1, "expected `S^<n>`"))?;
            let comp = Composition::new(vec![k]).map_err(|e| parse_err(line, start + 1, e.to_string()))?;
            out.push((start + 1, comp));
            i = j;
        } else {
            return Err(parse_err(line, i + 1, format!("unexpected `{c}`")));
        }
    }
    Ok(out)
}

/// Multiset union of terms.
pub fn connected_sum(a: &FrameworkSum, b: &FrameworkSum) -> Result<FrameworkSum> {
    if a.n != b.n {
        return domain(format!("cannot add frameworks of dimensions {} and {}", a.n, b.n));
    }
    let mut out = a.clone();
    for (c, k) in &b.terms {
        *out.terms.entry(c.clone()).or_insert(0) += k;
    }
    Ok(out)
}

/// Joins two framework graphs at their smallest vertices: both vertices are
/// removed and, for every class, the two loose edge ends are joined.
fn splice(g1: &FrameworkGraph, g2: &FrameworkGraph) -> Result<FrameworkGraph> {
    if !validate_framework(g1).is_valid() || !validate_framework(g2).is_valid() {
        return Err(Error::Validation("cannot splice invalid frameworks".into()));
    }
    let n = g1.n;
    let offset = g1.vertices.iter().next_back().map_or(0, |v| v + 1);
    let v1 = *g1.vertices.iter().next().expect("nonempty");
    let v2 = *g2.vertices.iter().next().expect("nonempty") + offset;
    let mut ends1 = vec![0; n + 1];
    let mut ends2 = vec![0; n + 1];
    let mut edges = Vec::new();
    let shifted = g2.edges.iter().map(|&(u, v, k)| (u + offset, v + offset, k));
    for (u, v, k) in g1.edges.iter().copied().chain(shifted) {
        if u == v1 || v == v1 {
            ends1[k] = if u == v1 { v } else { u };
        } else if u == v2 || v == v2 {
            ends2[k] = if u == v2 { v } else { u };
        } else {
            edges.push((u, v, k));
        }
    }
    for k in 1..=n {
        edges.push((ends1[k], ends2[k], k));
    }
    let vertices = g1
        .vertices
        .iter()
        .copied()
        .chain(g2.vertices.iter().map(|v| v + offset))
        .filter(|&v| v != v1 && v != v2);
    Ok(FrameworkGraph::new(n, edges, vertices).compacted())
}

/// Graph of a sum, spliced term by term in canonical order. `S^n` gives the
/// two-vertex graph with `n` parallel edges.
pub fn sum_graph(a: &FrameworkSum) -> Result<FrameworkGraph> {
    let terms = a.expanded();
    let Some((first, rest)) = terms.split_first() else {
        return Ok(elementary_graph(&Composition::new(vec![a.n])?));
    };
    rest.iter()
        .try_fold(elementary_graph(first), |g, c| splice(&g, &elementary_graph(c)))
}

/// True iff no term has a part equal to 1. `S^n` alone counts for `n ≥ 2`.
pub fn pi1_trivial(a: &FrameworkSum) -> bool {
    if a.is_sphere() {
        return a.n >= 2;
    }
    a.terms.keys().all(|c| !c.parts.contains(&1))
}

/// Product cell structure of `S^{n₁} × … × S^{n_m}`: one cell per subset of
/// factors, of grade the sum of their dimensions, all boundaries zero.
pub fn surface_complex(c: &Composition) -> CubicalComplex {
    let m = c.len();
    let cells = (0..1usize << m)
        .map(|mask| {
            let factors: Vec<String> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
            let grade = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| c.parts[i]).sum();
            let id = if factors.is_empty() {
                "e".to_string()
            } else {
                format!("e{}", factors.join("."))
            };
            AbstractCell { grade, id }
        })
        .collect();
    AbstractComplex::new(c.n(), cells, Vec::new()).into()
}

/// Contents of a framework file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameworkInput {
    Sum(FrameworkSum),
    Graph(FrameworkGraph),
}

/// ```text
/// n 3
/// sum (1 2) (3)
/// ```
/// or `n 2`, `graph`, then `edge u v class` lines. `#` starts a comment.
pub fn parse_framework(text: &str) -> Result<FrameworkInput> {
    let mut n: Option<usize> = None;
    let mut result: Option<FrameworkInput> = None;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let col = content.len() - trimmed.len() + 1;
        let mut toks = trimmed.split_whitespace();
        let head = toks.next().expect("nonempty");
        let Some(dim) = n else {
            let (Some(v), None) = (toks.next(), toks.next()) else {
                return Err(parse_err(line_no, col, "expected `n <int>`"));
            };
            if head != "n" {
                return Err(parse_err(line_no, col, "expected `n <int>` first"));
            }
            let v: usize = v
                .parse()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| parse_err(line_no, col, format!("bad dimension `{v}`")))?;
            n = Some(v);
            continue;
        };
        match (head, &mut result) {
            ("sum", None) => {
                let offset = col + 3;
                let mut sum = FrameworkSum::sphere(dim);
                for (c_col, c) in parse_terms(&trimmed[3..], line_no)
                    .map_err(|e| shift_column(e, offset - 1))?
                {
                    if c.n() != dim {
                        return Err(parse_err(
                            line_no,
                            c_col + offset - 1,
                            format!("term {c} does not sum to {dim}"),
                        ));
                    }
                    sum = sum.plus(&c)?;
                }
                result = Some(FrameworkInput::Sum(sum));
            }
            ("graph", None) => {
                result = Some(FrameworkInput::Graph(FrameworkGraph::new(dim, Vec::new(), [])));
            }
            ("edge", Some(FrameworkInput::Graph(g))) => {
                let vals: Vec<&str> = toks.collect();
                let [u, v, k] = vals[..] else {
                    return Err(parse_err(line_no, col, "expected `edge u v class`"));
                };
                let num = |t: &str| {
                    t.parse::<usize>()
                        .map_err(|_| parse_err(line_no, col, format!("bad integer `{t}`")))
                };
                let (u, v, k) = (num(u)?, num(v)?, num(k)?);
                g.edges.push((u, v, k));
                g.vertices.insert(u);
                g.vertices.insert(v);
            }
            (other, _) => {
                return Err(parse_err(line_no, col, format!("unexpected `{other}`")));
            }
        }
    }
    result.ok_or_else(|| parse_err(last + 1, 1, "expected a `sum` or `graph` section"))
}

fn shift_column(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column: column + by,
            message,
        },
        other => other,
    }
}
