//! Generation of all connected multigraphs up to a given edge count,
//! deduplicated by canonical edge-list ordering.

use crate::graph::Multigraph;
use std::collections::BTreeSet;

/// All connected multigraphs with `1..=max_edges` edges, one representative
/// per isomorphism class, in a deterministic order. Loops and parallel
/// edges are allowed.
pub fn connected_multigraphs(max_edges: usize) -> Vec<Multigraph> {
    generate(max_edges).0
}

/// Corpus plus the number of duplicate labelings that were folded away.
pub fn generate(max_edges: usize) -> (Vec<Multigraph>, usize) {
    assert!(max_edges <= 7, "corpus generation is desk-scale (<= 7 edges)");
    let mut seen: BTreeSet<(usize, Vec<(usize, usize)>)> = BTreeSet::new();
    let mut duplicates = 0usize;
    for e in 1..=max_edges {
        for v in 1..=e + 1 {
            // all pair types (i <= j) over v vertices, loops included
            let mut pairs = Vec::new();
            for i in 0..v {
                for j in i..v {
                    pairs.push((i, j));
                }
            }
            let mut multiset: Vec<(usize, usize)> = Vec::new();
            gen_multisets(&pairs, 0, e, &mut multiset, &mut |edges| {
                let g = Multigraph::new(v, edges.to_vec()).unwrap();
                if !g.is_connected() {
                    return;
                }
                if !seen.insert(g.canonical_form()) {
                    duplicates += 1;
                }
            });
        }
    }
    let graphs = seen
        .into_iter()
        .map(|(v, edges)| Multigraph::new(v, edges).unwrap())
        .collect();
    (graphs, duplicates)
}

fn gen_multisets(
    pairs: &[(usize, usize)],
    from: usize,
    remaining: usize,
    acc: &mut Vec<(usize, usize)>,
    f: &mut impl FnMut(&[(usize, usize)]),
) {
    if remaining == 0 {
        f(acc);
        return;
    }
    for i in from..pairs.len() {
        acc.push(pairs[i]);
        gen_multisets(pairs, i, remaining - 1, acc, f);
        acc.pop();
    }
}

/// Connected simple loopless graphs with at most `max_vertices` vertices
/// (one per isomorphism class), for the configuration-space suites.
pub fn connected_simple_graphs(max_vertices: usize) -> Vec<Multigraph> {
    assert!(max_vertices >= 2);
    let max_edges = max_vertices * (max_vertices - 1) / 2;
    connected_multigraphs(max_edges.min(7))
        .into_iter()
        .filter(|g| {
            g.vertex_count() <= max_vertices
                && g.is_loopless()
                && {
                    let mut set = BTreeSet::new();
                    g.edges().iter().all(|&(t, h)| set.insert((t.min(h), t.max(h))))
                }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    #[test]
    fn one_edge_corpus() {
        let c = connected_multigraphs(1);
        assert_eq!(c.len(), 2); // single edge, single loop
    }

    #[test]
    fn two_edge_corpus() {
        let c = connected_multigraphs(2);
        // classes with exactly 2 edges: path, banana, double loop, tadpole
        let two: Vec<_> = c.iter().filter(|g| g.edge_count() == 2).collect();
        assert_eq!(two.len(), 4);
        let canon: BTreeSet<_> = c.iter().map(|g| g.canonical_form()).collect();
        assert!(canon.contains(&graph::banana(2).canonical_form()));
        assert!(canon.contains(&graph::path(2).canonical_form()));
    }

    #[test]
    fn three_edge_count_matches_bruteforce() {
        // independent brute force: enumerate every labeled edge list over
        // up to 4 vertices and canonicalize
        let mut seen = BTreeSet::new();
        for v in 1..=4usize {
            let mut pairs = Vec::new();
            for i in 0..v {
                for j in i..v {
                    pairs.push((i, j));
                }
            }
            for a in 0..pairs.len() {
                for b in 0..pairs.len() {
                    for c in 0..pairs.len() {
                        let g =
                            Multigraph::new(v, vec![pairs[a], pairs[b], pairs[c]]).unwrap();
                        if g.is_connected() {
                            seen.insert(g.canonical_form());
                        }
                    }
                }
            }
        }
        let corpus: Vec<_> = connected_multigraphs(3)
            .into_iter()
            .filter(|g| g.edge_count() == 3)
            .collect();
        let expected = seen.iter().filter(|(_, e)| e.len() == 3).count();
        assert_eq!(corpus.len(), expected);
    }

    #[test]
    fn simple_graph_family() {
        let c = connected_simple_graphs(4);
        // 1 + 2 + 6 isomorphism classes on 2..=4 vertices
        assert_eq!(c.len(), 9);
        assert!(c.iter().any(|g| g.canonical_form() == graph::complete(4).canonical_form()));
    }
}
