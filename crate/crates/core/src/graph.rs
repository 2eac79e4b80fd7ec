//! Multigraphs with positional edge identity, and the combinatorial
//! operations the class formulas consume: deletion/contraction, spanning
//! forests, biconnected induced subgraphs, quotients and circuit matrices.
//!
//! Edge identity is the list position, not the endpoint pair, so parallel
//! edges stay distinguishable (there is one Kirchhoff variable per edge).
//! Deletion and contraction return the index remapping alongside the new
//! graph. All values are immutable after construction.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// An oriented multigraph; a loop has `tail == head`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Multigraph {
    #[serde(rename = "vertices")]
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

/// Old edge index -> new edge index (`None` for the removed edge).
pub type EdgeMap = Vec<Option<usize>>;

/// Bitset over the edge indices of a fixed carrier graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSubset {
    bits: u64,
    len: usize,
}

impl EdgeSubset {
    pub fn empty(len: usize) -> Self {
        assert!(len <= 64, "edge subsets support at most 64 edges");
        EdgeSubset { bits: 0, len }
    }

    pub fn full(len: usize) -> Self {
        assert!(len <= 64);
        EdgeSubset { bits: if len == 64 { !0 } else { (1u64 << len) - 1 }, len }
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut s = EdgeSubset::empty(len);
        for &i in indices {
            s.insert(i);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len);
        self.bits |= 1 << i;
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.bits >> i & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.contains(i))
    }

    pub fn complement(&self) -> EdgeSubset {
        EdgeSubset { bits: !self.bits & EdgeSubset::full(self.len).bits, len: self.len }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    Bridge,
    Loop,
    Regular,
}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(t, h) in &edges {
            if t >= vertex_count || h >= vertex_count {
                return Err(Error::Parse(format!(
                    "edge ({t},{h}) has an endpoint outside 0..{vertex_count}"
                )));
            }
        }
        Ok(Multigraph { vertex_count, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Result<(usize, usize)> {
        self.edges
            .get(i)
            .copied()
            .ok_or(Error::InvalidEdgeIndex { index: i, count: self.edges.len() })
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(t, h)| t == h)
    }

    pub fn is_loopless(&self) -> bool {
        !self.has_loop()
    }

    /// Number of connected components (isolated vertices count).
    pub fn component_count(&self) -> usize {
        let mut dsu = Dsu::new(self.vertex_count);
        for &(t, h) in &self.edges {
            dsu.union(t, h);
        }
        dsu.count()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || self.component_count() == 1
    }

    /// First Betti number `#E - #V + #components`.
    pub fn betti1(&self) -> usize {
        self.edges.len() + self.component_count() - self.vertex_count
    }

    pub fn is_forest(&self) -> bool {
        self.betti1() == 0
    }

    /// Vertex sets of the connected components, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut dsu = Dsu::new(self.vertex_count);
        for &(t, h) in &self.edges {
            dsu.union(t, h);
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut index = vec![usize::MAX; self.vertex_count];
        for v in 0..self.vertex_count {
            let r = dsu.find(v);
            if index[r] == usize::MAX {
                index[r] = comps.len();
                comps.push(Vec::new());
            }
            comps[index[r]].push(v);
        }
        comps
    }

    pub fn delete_edge(&self, i: usize) -> Result<(Multigraph, EdgeMap)> {
        self.edge(i)?;
        let mut edges = self.edges.clone();
        edges.remove(i);
        let map = (0..self.edges.len())
            .map(|j| match j.cmp(&i) {
                std::cmp::Ordering::Less => Some(j),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(j - 1),
            })
            .collect();
        Ok((Multigraph { vertex_count: self.vertex_count, edges }, map))
    }

    /// Contract edge `i`: identify its endpoints and remove the edge.
    /// Contracting a loop is loop deletion. The kept vertex is the smaller
    /// endpoint; vertices above the removed one shift down by one.
    pub fn contract_edge(&self, i: usize) -> Result<(Multigraph, EdgeMap)> {
        let (t, h) = self.edge(i)?;
        if t == h {
            return self.delete_edge(i);
        }
        let (keep, drop) = (t.min(h), t.max(h));
        let relabel = |v: usize| -> usize {
            if v == drop {
                keep
            } else if v > drop {
                v - 1
            } else {
                v
            }
        };
        let mut edges = Vec::with_capacity(self.edges.len() - 1);
        let mut map = vec![None; self.edges.len()];
        for (j, &(a, b)) in self.edges.iter().enumerate() {
            if j == i {
                continue;
            }
            map[j] = Some(edges.len());
            edges.push((relabel(a), relabel(b)));
        }
        Ok((Multigraph { vertex_count: self.vertex_count - 1, edges }, map))
    }

    pub fn classify_edge(&self, i: usize) -> Result<EdgeKind> {
        let (t, h) = self.edge(i)?;
        if t == h {
            return Ok(EdgeKind::Loop);
        }
        let (deleted, _) = self.delete_edge(i)?;
        if deleted.component_count() > self.component_count() {
            Ok(EdgeKind::Bridge)
        } else {
            Ok(EdgeKind::Regular)
        }
    }

    pub fn has_bridge_or_loop(&self) -> bool {
        (0..self.edges.len()).any(|i| self.classify_edge(i).unwrap() != EdgeKind::Regular)
    }

    /// All spanning forests (maximal acyclic edge subsets, one tree per
    /// component), enumerated by deletion-contraction on the first edge.
    pub fn spanning_forests(&self) -> Vec<EdgeSubset> {
        let n = self.edges.len();
        let raw = self.spanning_forests_rec();
        let mut out: Vec<EdgeSubset> = raw
            .into_iter()
            .map(|ids| EdgeSubset::from_indices(n, &ids))
            .collect();
        out.sort();
        out
    }

    fn spanning_forests_rec(&self) -> Vec<Vec<usize>> {
        if self.edges.is_empty() {
            return vec![Vec::new()];
        }
        let lift = |mut v: Vec<usize>| {
            for x in v.iter_mut() {
                *x += 1;
            }
            v
        };
        match self.classify_edge(0).unwrap() {
            EdgeKind::Loop => {
                let (g, _) = self.delete_edge(0).unwrap();
                g.spanning_forests_rec().into_iter().map(lift).collect()
            }
            EdgeKind::Bridge => {
                // a bridge lies in every spanning forest
                let (g, _) = self.contract_edge(0).unwrap();
                g.spanning_forests_rec()
                    .into_iter()
                    .map(|v| {
                        let mut v = lift(v);
                        v.insert(0, 0);
                        v
                    })
                    .collect()
            }
            EdgeKind::Regular => {
                let (gd, _) = self.delete_edge(0).unwrap();
                let (gc, _) = self.contract_edge(0).unwrap();
                let mut out: Vec<Vec<usize>> =
                    gd.spanning_forests_rec().into_iter().map(lift).collect();
                out.extend(gc.spanning_forests_rec().into_iter().map(|v| {
                    let mut v = lift(v);
                    v.insert(0, 0);
                    v
                }));
                out
            }
        }
    }

    /// Number of spanning forests, by brute-force subset enumeration.
    /// Cross-check oracle for `spanning_forests`.
    pub fn spanning_forest_count_bruteforce(&self) -> usize {
        let n = self.edges.len();
        let target = self.vertex_count - self.component_count();
        if n > 20 {
            panic!("brute-force forest enumeration is desk-scale only");
        }
        let mut count = 0usize;
        for bits in 0u64..(1 << n) {
            if bits.count_ones() as usize != target {
                continue;
            }
            let mut dsu = Dsu::new(self.vertex_count);
            let mut acyclic = true;
            for i in 0..n {
                if bits >> i & 1 == 1 && !dsu.union(self.edges[i].0, self.edges[i].1) {
                    acyclic = false;
                    break;
                }
            }
            if acyclic {
                count += 1;
            }
        }
        count
    }

    /// All vertex subsets of size `k` inducing a 2-vertex-connected
    /// subgraph. A doubleton needs at least one edge; single vertices are
    /// never biconnected. Requires a loopless graph.
    pub fn biconnected_induced_subgraphs(&self, k: usize) -> Result<Vec<Vec<usize>>> {
        if self.has_loop() {
            return Err(Error::LoopsPresent);
        }
        let mut out = Vec::new();
        let mut subset = Vec::new();
        self.biconnected_rec(0, k, &mut subset, &mut out);
        Ok(out)
    }

    fn biconnected_rec(
        &self,
        start: usize,
        k: usize,
        subset: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if subset.len() == k {
            if self.is_biconnected_subset(subset) {
                out.push(subset.clone());
            }
            return;
        }
        for v in start..self.vertex_count {
            subset.push(v);
            self.biconnected_rec(v + 1, k, subset, out);
            subset.pop();
        }
    }

    pub fn is_biconnected_subset(&self, vs: &[usize]) -> bool {
        if vs.len() < 2 {
            return false;
        }
        let set: BTreeSet<usize> = vs.iter().copied().collect();
        let connected = |omit: Option<usize>| -> bool {
            let live: Vec<usize> = vs.iter().copied().filter(|&v| Some(v) != omit).collect();
            if live.is_empty() {
                return true;
            }
            let mut dsu = DsuSparse::new(&live);
            for &(t, h) in &self.edges {
                if t != h
                    && Some(t) != omit
                    && Some(h) != omit
                    && set.contains(&t)
                    && set.contains(&h)
                {
                    dsu.union(t, h);
                }
            }
            dsu.count() == 1
        };
        if !connected(None) {
            return false;
        }
        if vs.len() == 2 {
            return true; // connected doubleton has >= 1 edge
        }
        vs.iter().all(|&v| connected(Some(v)))
    }

    /// The whole family of biconnected induced subgraphs, all sizes.
    pub fn biconnected_family(&self) -> Result<Vec<Vec<usize>>> {
        let mut fam = Vec::new();
        for k in 2..=self.vertex_count {
            fam.extend(self.biconnected_induced_subgraphs(k)?);
        }
        Ok(fam)
    }

    /// `G // (S_1 u ... u S_r)`: shrink each connected component of the
    /// union subgraph (union of the induced subgraphs on the `S_i`) to a
    /// single vertex. Edges of the union subgraph are contracted away;
    /// every other edge is carried over with remapped endpoints.
    pub fn quotient_by_subgraphs(&self, subsets: &[Vec<usize>]) -> Multigraph {
        let mut dsu = Dsu::new(self.vertex_count);
        let mut contracted = vec![false; self.edges.len()];
        for s in subsets {
            let set: BTreeSet<usize> = s.iter().copied().collect();
            for (i, &(t, h)) in self.edges.iter().enumerate() {
                if set.contains(&t) && set.contains(&h) {
                    dsu.union(t, h);
                    contracted[i] = true;
                }
            }
        }
        // relabel roots in increasing order of their smallest member
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut next = 0usize;
        for v in 0..self.vertex_count {
            let r = dsu.find(v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| !contracted[i])
            .map(|(_, &(t, h))| (label[dsu.find(t)], label[dsu.find(h)]))
            .collect();
        Multigraph { vertex_count: next, edges }
    }

    /// Fundamental-cycle matrix from the lowest-index-first spanning
    /// forest. One column per non-tree edge; entries in {-1, 0, +1}.
    pub fn circuit_matrix(&self) -> CircuitMatrix {
        // greedy lowest-index spanning forest
        let mut dsu = Dsu::new(self.vertex_count);
        let mut in_tree = vec![false; self.edges.len()];
        for (i, &(t, h)) in self.edges.iter().enumerate() {
            if t != h && dsu.union(t, h) {
                in_tree[i] = true;
            }
        }
        // adjacency over tree edges
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.vertex_count];
        for (i, &(t, h)) in self.edges.iter().enumerate() {
            if in_tree[i] {
                adj[t].push((h, i));
                adj[h].push((t, i));
            }
        }
        let mut columns = Vec::new();
        let mut cycle_edges = Vec::new();
        for (i, &(t, h)) in self.edges.iter().enumerate() {
            if in_tree[i] {
                continue;
            }
            cycle_edges.push(i);
            let mut col = vec![0i64; self.edges.len()];
            col[i] = 1;
            if t != h {
                // orient the fundamental cycle along edge i (tail -> head),
                // then walk back head -> tail through the tree
                let path = tree_path(&adj, h, t, self.vertex_count);
                let mut at = h;
                for &(next, eidx) in &path {
                    let (et, eh) = self.edges[eidx];
                    col[eidx] = if (et, eh) == (at, next) { 1 } else { -1 };
                    at = next;
                }
            }
            columns.push(col);
        }
        CircuitMatrix {
            edge_count: self.edges.len(),
            tree: EdgeSubset::from_indices(
                self.edges.len(),
                &(0..self.edges.len()).filter(|&i| in_tree[i]).collect::<Vec<_>>(),
            ),
            cycle_edges,
            columns,
        }
    }

    /// Signed vertex-edge incidence: +1 at the head, -1 at the tail,
    /// 0 for loops.
    pub fn incidence_entry(&self, edge: usize, vertex: usize) -> i64 {
        let (t, h) = self.edges[edge];
        if t == h {
            0
        } else if vertex == h {
            1
        } else if vertex == t {
            -1
        } else {
            0
        }
    }

    /// Lexicographically smallest edge list over all vertex relabelings;
    /// exact up to graph isomorphism for undirected multigraphs.
    pub fn canonical_form(&self) -> (usize, Vec<(usize, usize)>) {
        let v = self.vertex_count;
        let norm = |perm: &[usize]| -> Vec<(usize, usize)> {
            let mut es: Vec<(usize, usize)> = self
                .edges
                .iter()
                .map(|&(t, h)| {
                    let (a, b) = (perm[t], perm[h]);
                    (a.min(b), a.max(b))
                })
                .collect();
            es.sort();
            es
        };
        if v > 8 {
            let id: Vec<usize> = (0..v).collect();
            return (v, norm(&id));
        }
        let mut best: Option<Vec<(usize, usize)>> = None;
        let mut perm: Vec<usize> = (0..v).collect();
        permute(&mut perm, 0, &mut |p| {
            let cand = norm(p);
            if best.as_ref().map_or(true, |b| &cand < b) {
                best = Some(cand);
            }
        });
        (v, best.unwrap_or_default())
    }

    // ---- parsing ----

    /// Text format: first line `V E`, then `E` lines `tail head` (0-based).
    pub fn from_text(text: &str) -> Result<Multigraph> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let mut it = header.split_whitespace();
        let v: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("bad header, expected `V E`".into()))?;
        let e: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("bad header, expected `V E`".into()))?;
        let mut edges = Vec::with_capacity(e);
        for _ in 0..e {
            let line = lines.next().ok_or_else(|| Error::Parse("missing edge line".into()))?;
            let mut it = line.split_whitespace();
            let t: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line {line:?}")))?;
            let h: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line {line:?}")))?;
            edges.push((t, h));
        }
        Multigraph::new(v, edges)
    }

    /// Accepts either the JSON form or the text form.
    pub fn parse(text: &str) -> Result<Multigraph> {
        if text.trim_start().starts_with('{') {
            let g: Multigraph =
                serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            Multigraph::new(g.vertex_count, g.edges)
        } else {
            Multigraph::from_text(text)
        }
    }
}

fn permute<F: FnMut(&[usize])>(perm: &mut Vec<usize>, k: usize, f: &mut F) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, f);
        perm.swap(k, i);
    }
}

/// Unique tree path `from -> to` as (next_vertex, edge_index) steps.
fn tree_path(
    adj: &[Vec<(usize, usize)>],
    from: usize,
    to: usize,
    n: usize,
) -> Vec<(usize, usize)> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((v, e));
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut at = to;
    while at != from {
        let (p, e) = prev[at].expect("tree path must exist");
        path.push((at, e));
        at = p;
    }
    path.reverse();
    path
}

#[derive(Debug, Clone)]
pub struct CircuitMatrix {
    edge_count: usize,
    tree: EdgeSubset,
    /// non-tree edge index per column
    cycle_edges: Vec<usize>,
    /// columns[j][e] = eta_{e,j}
    columns: Vec<Vec<i64>>,
}

impl CircuitMatrix {
    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn tree(&self) -> EdgeSubset {
        self.tree
    }

    pub fn cycle_edges(&self) -> &[usize] {
        &self.cycle_edges
    }

    pub fn entry(&self, edge: usize, column: usize) -> i64 {
        self.columns[column][edge]
    }

    /// Row eta_{e, .} of the matrix.
    pub fn row(&self, edge: usize) -> Vec<i64> {
        self.columns.iter().map(|c| c[edge]).collect()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.edge_count).map(|e| self.row(e)).collect()
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }

    fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&v| self.find(v) == v).count()
    }
}

/// Union-find restricted to a sparse vertex set.
struct DsuSparse {
    map: std::collections::BTreeMap<usize, usize>,
    dsu: Dsu,
}

impl DsuSparse {
    fn new(vs: &[usize]) -> Self {
        let map = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        DsuSparse { map, dsu: Dsu::new(vs.len()) }
    }

    fn union(&mut self, a: usize, b: usize) {
        if let (Some(&ia), Some(&ib)) = (self.map.get(&a), self.map.get(&b)) {
            self.dsu.union(ia, ib);
        }
    }

    fn count(&mut self) -> usize {
        self.dsu.count()
    }
}

// ---- named families ----

/// The banana graph: two vertices joined by `n` parallel edges.
pub fn banana(n: usize) -> Multigraph {
    Multigraph::new(2, vec![(0, 1); n]).unwrap()
}

/// Cycle on `n` vertices (`n = 1` is a single loop, `n = 2` a banana pair).
pub fn cycle(n: usize) -> Multigraph {
    let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Multigraph::new(n.max(1), edges).unwrap()
}

/// Path with `n` edges on `n + 1` vertices.
pub fn path(n: usize) -> Multigraph {
    Multigraph::new(n + 1, (0..n).map(|i| (i, i + 1)).collect()).unwrap()
}

/// Lemon graph with `m` sections: a chain of `m` triangles, each glued
/// along the previous one's newest edge; `2 + m` vertices and `2m + 1`
/// edges. (Gluing all sections on one common edge gives a different graph
/// from `m = 3` on, with a different complement class.)
pub fn lemon(m: usize) -> Multigraph {
    let mut edges = vec![(0, 1)];
    for k in 0..m {
        edges.push((k, k + 2));
        edges.push((k + 1, k + 2));
    }
    Multigraph::new(2 + m, edges).unwrap()
}

/// Complete graph on `n` vertices.
pub fn complete(n: usize) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    Multigraph::new(n.max(1), edges).unwrap()
}

/// Wheel: hub 0, rim cycle 1..=k, and k spokes.
pub fn wheel(k: usize) -> Multigraph {
    let mut edges = Vec::new();
    for i in 1..=k {
        edges.push((i, if i == k { 1 } else { i + 1 }));
    }
    for i in 1..=k {
        edges.push((0, i));
    }
    Multigraph::new(k + 1, edges).unwrap()
}

pub fn single_edge() -> Multigraph {
    Multigraph::new(2, vec![(0, 1)]).unwrap()
}

pub fn single_loop() -> Multigraph {
    Multigraph::new(1, vec![(0, 0)]).unwrap()
}

/// Two triangles joined by a bridge; 7 edges.
pub fn two_triangles_bridge() -> Multigraph {
    Multigraph::new(
        6,
        vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)],
    )
    .unwrap()
}
