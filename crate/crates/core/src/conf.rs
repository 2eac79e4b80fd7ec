//! Nests of biconnected induced subgraphs and Grothendieck classes of the
//! wonderful compactifications of graph configuration spaces in `P^D`,
//! with a stepwise-blowup oracle for the hand-verified shapes.
//!
//! A nest is a family of biconnected induced subgraphs in which any two
//! members are disjoint, meet in a single vertex, or are nested, and no
//! incomparable subfamily has a union inducing a biconnected subgraph.
//! Without the last condition the class formula overcounts: for the
//! triangle the three edge subgraphs meet pairwise in single vertices but
//! their union is the triangle itself, and including such families breaks
//! agreement with the blowup computation.

use crate::error::Error;
use crate::graph::Multigraph;
use crate::motive::{Basis, IntPoly};
use crate::Result;
use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

/// Vertex subsets as bitmasks over at most 32 vertices.
pub type VertexSet = u32;

pub fn vertex_set(vs: &[usize]) -> VertexSet {
    vs.iter().fold(0, |acc, &v| acc | 1 << v)
}

pub fn vertices_of(set: VertexSet) -> Vec<usize> {
    (0..32).filter(|&i| set >> i & 1 == 1).collect()
}

/// A compatible family of biconnected induced subgraphs, each with its
/// rank `r_gamma` relative to the nest at ambient dimension `D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NestForest {
    pub elements: Vec<VertexSet>,
}

impl NestForest {
    /// Strict sub-elements of `gamma` within the nest.
    fn strict_subsets(&self, gamma: VertexSet) -> Vec<VertexSet> {
        self.elements
            .iter()
            .copied()
            .filter(|&g| g != gamma && g & gamma == g)
            .collect()
    }
}

/// The family of all biconnected induced subgraphs, as vertex sets.
pub fn building_family(g: &Multigraph) -> Result<Vec<VertexSet>> {
    Ok(g.biconnected_family()?.iter().map(|vs| vertex_set(vs)).collect())
}

fn pairwise_compatible(a: VertexSet, b: VertexSet) -> bool {
    let meet = a & b;
    meet == 0 || meet.count_ones() == 1 || meet == a || meet == b
}

/// Antichain condition: no subfamily of pairwise-incomparable elements may
/// have a union inducing a biconnected subgraph.
fn antichains_are_free(g: &Multigraph, family: &[VertexSet]) -> bool {
    let k = family.len();
    'subsets: for mask in 1u32..(1 << k) {
        if mask.count_ones() < 2 {
            continue;
        }
        let members: Vec<VertexSet> =
            (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| family[i]).collect();
        // antichain: no containment between any pair
        for i in 0..members.len() {
            for j in 0..members.len() {
                if i != j && members[i] & members[j] == members[i] {
                    continue 'subsets;
                }
            }
        }
        let union = members.iter().fold(0u32, |acc, &m| acc | m);
        if g.is_biconnected_subset(&vertices_of(union)) {
            return false;
        }
    }
    true
}

/// All nonempty nests over the graph's biconnected family.
pub fn enumerate_nests(g: &Multigraph) -> Result<Vec<NestForest>> {
    if g.has_loop() {
        return Err(Error::LoopsPresent);
    }
    let family = building_family(g)?;
    let mut out = Vec::new();
    let mut acc: Vec<VertexSet> = Vec::new();
    fn rec(
        g: &Multigraph,
        family: &[VertexSet],
        from: usize,
        acc: &mut Vec<VertexSet>,
        out: &mut Vec<NestForest>,
    ) {
        if !acc.is_empty() {
            out.push(NestForest { elements: acc.clone() });
        }
        for i in from..family.len() {
            let cand = family[i];
            if acc.iter().all(|&a| pairwise_compatible(a, cand)) {
                acc.push(cand);
                if antichains_are_free(g, acc) {
                    rec(g, family, i + 1, acc, out);
                }
                acc.pop();
            }
        }
    }
    rec(g, &family, 0, &mut acc, &mut out);
    Ok(out)
}

/// `r_gamma = dim(intersection of the diagonals of the strict
/// sub-elements) - dim(diagonal of gamma)`, with dimensions computed from
/// quotient vertex counts; the empty sub-family gives `D (|gamma| - 1)`.
pub fn nest_rank(g: &Multigraph, nest: &NestForest, gamma: VertexSet, d: usize) -> Result<usize> {
    if !nest.elements.contains(&gamma) {
        return Err(Error::ParamRange("gamma is not an element of the nest".into()));
    }
    let subs: Vec<Vec<usize>> =
        nest.strict_subsets(gamma).iter().map(|&s| vertices_of(s)).collect();
    let upstairs = g.quotient_by_subgraphs(&subs).vertex_count();
    let downstairs = g.quotient_by_subgraphs(&[vertices_of(gamma)]).vertex_count();
    Ok(d * (upstairs - downstairs))
}

/// `[P^D] = 1 + L + ... + L^D`.
fn x_class(d: usize) -> IntPoly {
    IntPoly::projective_space(d as i64)
}

/// `L + L^2 + ... + L^{r-1}`; zero when `r <= 1`.
fn inner_sum(r: usize) -> IntPoly {
    if r <= 1 {
        return IntPoly::zero(Basis::L);
    }
    let mut coeffs = vec![BigInt::from(0); r];
    for c in coeffs.iter_mut().take(r).skip(1) {
        *c = BigInt::one();
    }
    IntPoly::from_coeffs(Basis::L, coeffs)
}

/// Class of the wonderful compactification of the configuration space of
/// the graph in `X = P^D`:
/// `[X]^{#V} + sum_nests [X]^{#V(G//nest)} prod_gamma (L + ... + L^{r_gamma - 1})`.
pub fn conf_class(g: &Multigraph, d: usize) -> Result<IntPoly> {
    if g.has_loop() {
        return Err(Error::LoopsPresent);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let x = x_class(d);
    let mut total = x.pow(g.vertex_count() as u32);
    for nest in enumerate_nests(g)? {
        let subsets: Vec<Vec<usize>> = nest.elements.iter().map(|&s| vertices_of(s)).collect();
        let quotient_vertices = g.quotient_by_subgraphs(&subsets).vertex_count();
        let mut contribution = x.pow(quotient_vertices as u32);
        for &gamma in &nest.elements {
            let r = nest_rank(g, &nest, gamma, d)?;
            contribution = &contribution * &inner_sum(r);
            if contribution.is_zero() {
                break;
            }
        }
        total = &total + &contribution;
    }
    Ok(total)
}

/// Euler characteristic by the separate formula
/// `chi(X)^{#V} + sum_nests chi(X)^{#V(G//nest)} #M_nest` with
/// `#M_nest = prod (r_gamma - 1)`.
pub fn conf_euler(g: &Multigraph, d: usize) -> Result<BigInt> {
    if g.has_loop() {
        return Err(Error::LoopsPresent);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let chi_x = BigInt::from(d as u64 + 1);
    let mut total = chi_x.pow(g.vertex_count() as u32);
    for nest in enumerate_nests(g)? {
        let subsets: Vec<Vec<usize>> = nest.elements.iter().map(|&s| vertices_of(s)).collect();
        let quotient_vertices = g.quotient_by_subgraphs(&subsets).vertex_count();
        let mut m_count = BigInt::one();
        for &gamma in &nest.elements {
            let r = nest_rank(g, &nest, gamma, d)?;
            m_count *= BigInt::from(r.saturating_sub(1) as u64);
        }
        total += chi_x.pow(quotient_vertices as u32) * m_count;
    }
    Ok(total)
}

/// `[Bl_Z Y] = [Y] + [Z]([P^{c-1}] - 1)` for a smooth center of
/// codimension `c`.
fn blowup_class(ambient: &IntPoly, center: &IntPoly, codim: usize) -> IntPoly {
    let factor = &IntPoly::projective_space(codim as i64 - 1) - &IntPoly::one(Basis::L);
    ambient + &(center * &factor)
}

/// Stepwise blowup bookkeeping for the three hand-verified shapes
/// (single edge, path on three vertices, triangle), `1 <= D <= 3`.
/// Dominant transforms of the remaining diagonals are tracked through
/// each step.
pub fn blowup_oracle(g: &Multigraph, d: usize) -> Result<IntPoly> {
    if !(1..=3).contains(&d) {
        return Err(Error::ParamRange(format!("blowup oracle supports 1 <= D <= 3, got {d}")));
    }
    let x = x_class(d);
    let canon = g.canonical_form();
    if canon == crate::graph::single_edge().canonical_form() {
        // one step: blow up the diagonal of X^2, codimension D
        return Ok(blowup_class(&x.pow(2), &x, d));
    }
    if canon == crate::graph::path(2).canonical_form() {
        // two edge diagonals in X^3, each codim D, meeting in the small
        // diagonal; the second center is the proper transform, the blowup
        // of the edge diagonal along the small one
        let y1 = blowup_class(&x.pow(3), &x.pow(2), d);
        let transform = blowup_class(&x.pow(2), &x, d);
        return Ok(blowup_class(&y1, &transform, d));
    }
    if canon == crate::graph::cycle(3).canonical_form() {
        // deepest diagonal first (codim 2D), then the three disjoint
        // proper transforms of the edge diagonals (codim D each)
        let y1 = blowup_class(&x.pow(3), &x, 2 * d);
        let transform = blowup_class(&x.pow(2), &x, d);
        let mut acc = y1;
        for _ in 0..3 {
            acc = blowup_class(&acc, &transform, d);
        }
        return Ok(acc);
    }
    Err(Error::UnsupportedShape)
}
