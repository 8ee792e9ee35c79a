//! Simple graphs used as zero patterns: band and pentadiagonal support
//! graphs, chordality recognition with certificates, near-clique numbers
//! and the critical exponent of chordal patterns.
//!
//! Vertices are labeled `1..=n` in every public interface.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preservers::PowerSet;

/// Largest vertex count for which [`max_near_clique`] is exact.
pub const NEAR_CLIQUE_EXACT_LIMIT: usize = 64;

/// Undirected graph without loops or multi-edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    n: usize,
    /// Sorted zero-based neighbor lists.
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    /// From one-based edges. Duplicate edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        for w in [u, v] {
            if w == 0 || w > self.n {
                return Err(Error::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u, v));
        }
        let (a, b) = (u - 1, v - 1);
        if let Err(pos) = self.adj[a].binary_search(&b) {
            self.adj[a].insert(pos, b);
            let pos = self.adj[b].binary_search(&a).unwrap_err();
            self.adj[b].insert(pos, a);
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// One-based query.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u >= 1 && v >= 1 && u <= self.n && v <= self.n && self.adj0(u - 1, v - 1)
    }

    fn adj0(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// One-based sorted neighbors.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.adj[v - 1].iter().map(|w| w + 1).collect()
    }

    /// One-based edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for a in 0..self.n {
            for &b in &self.adj[a] {
                if a < b {
                    out.push((a + 1, b + 1));
                }
            }
        }
        out
    }

    /// Band graph: `i ~ j` iff `0 < |i - j| <= d`.
    pub fn band(n: usize, d: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 1..=n {
            for j in (i + 1)..=(i + d).min(n) {
                g.add_edge(i, j).expect("valid band edge");
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        Self::band(n, 1)
    }

    pub fn complete(n: usize) -> Self {
        Self::band(n, n.saturating_sub(1).max(1))
    }

    /// Edges exactly `{i, i + 2}`: paths on the odd and on the even labels.
    pub fn penta_support(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::OrderTooSmall { min: 3, actual: n });
        }
        let mut g = Self::empty(n);
        for i in 1..=(n - 2) {
            g.add_edge(i, i + 2)?;
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::OrderTooSmall { min: 3, actual: n });
        }
        let mut g = Self::path(n);
        g.add_edge(n, 1)?;
        Ok(g)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Subgraph induced by the one-based vertex set `s`, relabeled to
    /// `1..=|s|` in increasing label order.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut verts = s.to_vec();
        verts.sort_unstable();
        verts.dedup();
        if let Some(&bad) = verts.iter().find(|&&v| v == 0 || v > self.n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n: self.n });
        }
        let mut g = Self::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i + 1, j + 1)?;
                }
            }
        }
        Ok(g)
    }

    /// Parses the plain-text edge-list format: the first non-comment line is
    /// the vertex count, then one `i j` pair per line; `#` starts a comment.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (lineno, first) = lines.next().ok_or_else(|| Error::Parse("graph file is empty".into()))?;
        let n: usize = first
            .parse()
            .map_err(|_| Error::Parse(format!("line {lineno}: expected vertex count, got {first:?}")))?;
        let mut g = Self::empty(n);
        for (lineno, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {lineno}: bad vertex {s:?}")))
            };
            match parts.as_slice() {
                [u, v] => g
                    .add_edge(parse(u)?, parse(v)?)
                    .map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?,
                _ => {
                    return Err(Error::Parse(format!(
                        "line {lineno}: expected two vertex labels, got {line:?}"
                    )))
                }
            }
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    fn masks(&self) -> Vec<u64> {
        debug_assert!(self.n <= 64);
        self.adj
            .iter()
            .map(|ns| ns.iter().fold(0u64, |m, &w| m | (1u64 << w)))
            .collect()
    }
}

pub fn band_graph(n: usize, d: usize) -> SimpleGraph {
    SimpleGraph::band(n, d)
}

pub fn path_graph(n: usize) -> SimpleGraph {
    SimpleGraph::path(n)
}

pub fn complete_graph(n: usize) -> SimpleGraph {
    SimpleGraph::complete(n)
}

pub fn penta_support_graph(n: usize) -> Result<SimpleGraph> {
    SimpleGraph::penta_support(n)
}

pub fn is_connected(g: &SimpleGraph) -> bool {
    g.is_connected()
}

pub fn induced_subgraph(g: &SimpleGraph, s: &[usize]) -> Result<SimpleGraph> {
    g.induced_subgraph(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordalCertificate {
    pub is_chordal: bool,
    /// Perfect elimination ordering (one-based) when chordal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordering: Option<Vec<usize>>,
    /// Chordless cycle of length >= 4 (one-based) otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_cycle: Option<Vec<usize>>,
}

/// Lexicographic BFS with partition refinement; ties go to the lowest label.
/// Returns the visit order (zero-based).
fn lex_bfs(g: &SimpleGraph) -> Vec<usize> {
    let n = g.n;
    // Ordered list of classes; each class keeps its vertices sorted.
    let mut classes: Vec<Vec<usize>> = if n == 0 { vec![] } else { vec![(0..n).collect()] };
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while let Some(first) = classes.first_mut() {
        let v = first.remove(0);
        if first.is_empty() {
            classes.remove(0);
        }
        visited[v] = true;
        order.push(v);
        let mut refined = Vec::with_capacity(classes.len() * 2);
        for class in classes.drain(..) {
            let (hit, miss): (Vec<usize>, Vec<usize>) = class.into_iter().partition(|&w| g.adj0(v, w));
            if !hit.is_empty() {
                refined.push(hit);
            }
            if !miss.is_empty() {
                refined.push(miss);
            }
        }
        classes = refined;
    }
    order
}

/// First vertex (by elimination position) whose later neighbors are not a
/// clique, as `(v, u, w)` with `u, w` nonadjacent later neighbors.
fn peo_violation(g: &SimpleGraph, elim: &[usize]) -> Option<(usize, usize, usize)> {
    let mut pos = vec![0; g.n];
    for (i, &v) in elim.iter().enumerate() {
        pos[v] = i;
    }
    for &v in elim {
        let later: Vec<usize> = g.adj[v].iter().copied().filter(|&w| pos[w] > pos[v]).collect();
        for (i, &u) in later.iter().enumerate() {
            for &w in &later[i + 1..] {
                if !g.adj0(u, w) {
                    return Some((v, u, w));
                }
            }
        }
    }
    None
}

/// True iff every vertex's later neighbors in `ordering` (one-based) form a
/// clique.
pub fn is_perfect_elimination_ordering(g: &SimpleGraph, ordering: &[usize]) -> bool {
    if ordering.len() != g.n {
        return false;
    }
    let elim: Vec<usize> = ordering.iter().map(|v| v - 1).collect();
    let mut seen = vec![false; g.n];
    for &v in &elim {
        if v >= g.n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    peo_violation(g, &elim).is_none()
}

/// True iff `cycle` (one-based) is a cycle of length >= 4 in `g` with no
/// chord.
pub fn is_chordless_cycle(g: &SimpleGraph, cycle: &[usize]) -> bool {
    let k = cycle.len();
    if k < 4 {
        return false;
    }
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != k {
        return false;
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let consecutive = j == i + 1 || (i == 0 && j == k - 1);
            if g.has_edge(cycle[i], cycle[j]) != consecutive {
                return false;
            }
        }
    }
    true
}

/// Shortest `u`-`w` path avoiding `N[v] \ {u, w}`, zero-based.
fn path_avoiding(g: &SimpleGraph, v: usize, u: usize, w: usize) -> Option<Vec<usize>> {
    let mut blocked = vec![false; g.n];
    blocked[v] = true;
    for &x in &g.adj[v] {
        blocked[x] = true;
    }
    blocked[u] = false;
    blocked[w] = false;
    let mut parent = vec![usize::MAX; g.n];
    let mut queue = VecDeque::from([u]);
    parent[u] = u;
    while let Some(x) = queue.pop_front() {
        if x == w {
            let mut path = vec![w];
            let mut cur = w;
            while cur != u {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &y in &g.adj[x] {
            if !blocked[y] && parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}

/// Chordless cycle through `v` with neighbors `u`, `w`, if one exists.
fn cycle_through(g: &SimpleGraph, v: usize, u: usize, w: usize) -> Option<Vec<usize>> {
    let path = path_avoiding(g, v, u, w)?;
    let mut cycle = vec![v];
    cycle.extend(path);
    Some(cycle)
}

fn find_chordless_cycle(g: &SimpleGraph, hint: Option<(usize, usize, usize)>) -> Option<Vec<usize>> {
    if let Some((v, u, w)) = hint {
        if let Some(c) = cycle_through(g, v, u, w) {
            return Some(c);
        }
    }
    // Any chordless cycle C has a vertex v with nonadjacent cycle neighbors
    // u, w, and C - v is a u-w path avoiding N[v] \ {u, w}.
    for v in 0..g.n {
        let ns = &g.adj[v];
        for (i, &u) in ns.iter().enumerate() {
            for &w in &ns[i + 1..] {
                if !g.adj0(u, w) {
                    if let Some(c) = cycle_through(g, v, u, w) {
                        return Some(c);
                    }
                }
            }
        }
    }
    None
}

/// Recognizes chordal graphs by lexicographic BFS: the reverse visit order is
/// a perfect elimination ordering iff the graph is chordal. Non-chordal
/// graphs get a chordless cycle witness.
pub fn is_chordal(g: &SimpleGraph) -> ChordalCertificate {
    let mut elim = lex_bfs(g);
    elim.reverse();
    match peo_violation(g, &elim) {
        None => ChordalCertificate {
            is_chordal: true,
            ordering: Some(elim.iter().map(|v| v + 1).collect()),
            witness_cycle: None,
        },
        Some(hint) => {
            let cycle =
                find_chordless_cycle(g, Some(hint)).expect("a failed elimination ordering implies a chordless cycle");
            ChordalCertificate {
                is_chordal: false,
                ordering: None,
                witness_cycle: Some(canonical_cycle(cycle.iter().map(|v| v + 1).collect())),
            }
        }
    }
}

/// Rotates a cycle to start at its smallest label and orients it toward the
/// smaller of the two neighbors.
fn canonical_cycle(mut c: Vec<usize>) -> Vec<usize> {
    let k = c.len();
    let min_pos = (0..k).min_by_key(|&i| c[i]).unwrap_or(0);
    c.rotate_left(min_pos);
    if k > 2 && c[k - 1] < c[1] {
        c[1..].reverse();
    }
    c
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearClique {
    /// Largest `r` such that `K_r` or `K_r` minus one edge is a subgraph.
    pub size: usize,
    /// One-based vertices realizing `size`.
    pub vertices: Vec<usize>,
    /// False when the graph exceeds [`NEAR_CLIQUE_EXACT_LIMIT`] and `size`
    /// is only a greedy lower bound.
    pub exact: bool,
}

/// Maximum clique in the subgraph induced by `cand`, by Bron-Kerbosch with
/// pivoting over bitmasks.
fn max_clique_in(masks: &[u64], cand: u64) -> u64 {
    fn expand(masks: &[u64], r: u64, mut p: u64, mut x: u64, best: &mut u64) {
        if p == 0 {
            if x == 0 && r.count_ones() > best.count_ones() {
                *best = r;
            }
            return;
        }
        if r.count_ones() + p.count_ones() <= best.count_ones() {
            return;
        }
        let px = p | x;
        let mut pivot = px.trailing_zeros() as usize;
        let mut most = 0;
        let mut scan = px;
        while scan != 0 {
            let u = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let c = (p & masks[u]).count_ones();
            if c > most {
                most = c;
                pivot = u;
            }
        }
        let mut todo = p & !masks[pivot];
        while todo != 0 {
            let v = todo.trailing_zeros() as usize;
            todo &= todo - 1;
            let bit = 1u64 << v;
            expand(masks, r | bit, p & masks[v], x & masks[v], best);
            p &= !bit;
            x |= bit;
        }
    }
    let mut best = 0u64;
    expand(masks, 0, cand, 0, &mut best);
    best
}

fn bits_to_labels(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask & (1u64 << i) != 0).map(|i| i + 1).collect()
}

/// Clique number (exact for up to 64 vertices).
pub fn clique_number(g: &SimpleGraph) -> Result<usize> {
    if g.n > NEAR_CLIQUE_EXACT_LIMIT {
        return Err(Error::Domain(format!(
            "exact clique search limited to {NEAR_CLIQUE_EXACT_LIMIT} vertices"
        )));
    }
    let full = if g.n == 64 { u64::MAX } else { (1u64 << g.n) - 1 };
    Ok(max_clique_in(&g.masks(), full).count_ones() as usize)
}

/// Largest `r` such that some `r` vertices induce at least `C(r, 2) - 1`
/// edges. A near-clique is either a clique or a nonadjacent pair `u, w`
/// together with a clique in their common neighborhood, so the search is
/// one clique search on the whole graph plus one per nonadjacent pair.
pub fn max_near_clique(g: &SimpleGraph) -> NearClique {
    if g.n == 0 {
        return NearClique {
            size: 0,
            vertices: vec![],
            exact: true,
        };
    }
    if g.n > NEAR_CLIQUE_EXACT_LIMIT {
        return greedy_near_clique(g);
    }
    let masks = g.masks();
    let full = if g.n == 64 { u64::MAX } else { (1u64 << g.n) - 1 };
    let mut best = max_clique_in(&masks, full);
    for u in 0..g.n {
        for w in (u + 1)..g.n {
            if masks[u] & (1u64 << w) != 0 {
                continue;
            }
            let common = masks[u] & masks[w];
            if (common.count_ones() + 2) as usize <= best.count_ones() as usize {
                continue;
            }
            let c = max_clique_in(&masks, common) | (1u64 << u) | (1u64 << w);
            if c.count_ones() > best.count_ones() {
                best = c;
            }
        }
    }
    NearClique {
        size: best.count_ones() as usize,
        vertices: bits_to_labels(best),
        exact: true,
    }
}

/// Greedy lower bound for graphs beyond the exact limit: grow a clique from
/// each vertex by descending degree, then try to extend it by one vertex
/// missing a single edge.
fn greedy_near_clique(g: &SimpleGraph) -> NearClique {
    let mut by_degree: Vec<usize> = (0..g.n).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.adj[v].len()), v));
    let mut best: Vec<usize> = vec![0];
    for &seed in &by_degree {
        let mut clique = vec![seed];
        for &v in &by_degree {
            if v != seed && clique.iter().all(|&c| g.adj0(c, v)) {
                clique.push(v);
            }
        }
        if let Some(extra) =
            (0..g.n).find(|&v| !clique.contains(&v) && clique.iter().filter(|&&c| !g.adj0(c, v)).count() == 1)
        {
            clique.push(extra);
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    let mut vertices: Vec<usize> = best.iter().map(|v| v + 1).collect();
    vertices.sort_unstable();
    NearClique {
        size: vertices.len(),
        vertices,
        exact: false,
    }
}

/// Positivity-preserving exponents for PD matrices with chordal pattern
/// `g`: `N ∪ [r - 2, ∞)` with `r` the near-clique number.
pub fn chordal_critical_exponent(g: &SimpleGraph) -> Result<PowerSet> {
    if g.n < 3 {
        return Err(Error::OrderTooSmall { min: 3, actual: g.n });
    }
    let cert = is_chordal(g);
    if !cert.is_chordal {
        return Err(Error::NotChordal {
            witness: cert.witness_cycle.unwrap_or_default(),
        });
    }
    let nc = max_near_clique(g);
    if !nc.exact {
        return Err(Error::Domain(format!(
            "near-clique number is only bounded below for {} > {NEAR_CLIQUE_EXACT_LIMIT} vertices",
            g.n
        )));
    }
    Ok(PowerSet::naturals_and_tail(nc.size as f64 - 2.0))
}
