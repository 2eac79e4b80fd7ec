//! The complete intersection attached to a graph's circuit matrix:
//! pairs `(a, beta)` in `P^{n-1} x P^{b1-1}` with
//! `Q_a(beta)_j = sum_{e,r} a_e eta_{e,r} eta_{e,j} beta_r = 0` for all j.
//!
//! Over the stratum of the graph arrangement where a fixed set of rows
//! vanishes, the fiber in `a` is a projective space, so the class
//! decomposes as `sum_m [S^(m)] [P^{n - b1 + m - 1}]` with `m` the
//! codimension defect of the active rows. The brute-force pair count is
//! the oracle for all of it.

use crate::arrangement::{intersection_poset, Arrangement};
use crate::error::Error;
use crate::graph::Multigraph;
use crate::linalg::{self, Row};
use crate::motive::{Basis, IntPoly};
use crate::Result;
use num_bigint::BigInt;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize)]
pub struct StratumInfo {
    /// dimension of the flat as a linear subspace of Q^{b1}
    pub flat_dim: usize,
    /// hyperplanes of the (deduplicated) graph arrangement containing it
    pub hyperplanes: Vec<usize>,
    /// codimension of the span of the rows not vanishing on the stratum
    pub epsilon: usize,
    /// class of the locally closed stratum in P^{b1-1}
    pub class: IntPoly,
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaReport {
    pub edges: usize,
    pub betti1: usize,
    pub strata: Vec<StratumInfo>,
    /// m -> [S^(m)]
    pub s_classes: BTreeMap<usize, IntPoly>,
    pub lambda_class: IntPoly,
    pub chi: BigInt,
    pub t_nonnegative: bool,
    /// sum over strata of chi([S^(m)]) — must equal b1 = chi(P^{b1-1})
    pub strata_chi_sum: BigInt,
}

/// Per-flat epsilon values and stratum classes for the graph arrangement.
/// Strata are indexed by flats because epsilon is constant on the set of
/// points lying on exactly the hyperplanes through a given flat.
pub fn epsilon_stratification(g: &Multigraph) -> Result<Vec<StratumInfo>> {
    let b1 = g.betti1();
    if b1 == 0 {
        return Err(Error::ForestInput);
    }
    // full (non-deduplicated) rows drive the rank computation
    let all_rows: Vec<Row> = g
        .circuit_matrix()
        .rows()
        .into_iter()
        .map(|r| linalg::row_from_i64(&r))
        .collect();
    let arr = Arrangement::from_graph(g)?;
    let poset = intersection_poset(&arr);
    // order flats by increasing subspace dimension so substrata classes
    // are available when needed
    let mut order: Vec<usize> = (0..poset.flats.len()).collect();
    order.sort_by_key(|&i| poset.flats[i].dim);
    let mut classes: Vec<Option<IntPoly>> = vec![None; poset.flats.len()];
    let mut out = Vec::new();
    for &i in &order {
        let flat = &poset.flats[i];
        // [stratum] = [P(flat)] - sum of strictly smaller strata
        let mut class = IntPoly::projective_space(flat.dim as i64 - 1);
        for &j in &order {
            if j != i
                && poset.flats[j].dim < flat.dim
                && linalg::rowspace_contains(
                    &poset.flats[j].normal_basis,
                    &flat.normal_basis,
                )
            {
                class = &class - classes[j].as_ref().unwrap();
            }
        }
        classes[i] = Some(class.clone());
        // rows active away from this flat: those not vanishing on it
        let active: Vec<Row> = all_rows
            .iter()
            .filter(|r| !linalg::in_rowspace(r, &flat.normal_basis))
            .cloned()
            .collect();
        let epsilon = b1 - linalg::rank(&active);
        out.push(StratumInfo {
            flat_dim: flat.dim,
            hyperplanes: flat.hyperplanes.clone(),
            epsilon,
            class,
        });
    }
    Ok(out)
}

/// The full class report: strata, `[S^(m)]`, the assembled class, Euler
/// characteristic and the positivity verdict.
pub fn lambda_class(g: &Multigraph) -> Result<LambdaReport> {
    let n = g.edge_count();
    let b1 = g.betti1();
    let strata = epsilon_stratification(g)?;
    let mut s_classes: BTreeMap<usize, IntPoly> = BTreeMap::new();
    for s in &strata {
        let entry = s_classes.entry(s.epsilon).or_insert_with(|| IntPoly::zero(Basis::L));
        *entry = &*entry + &s.class;
    }
    s_classes.retain(|_, v| !v.is_zero());
    let mut lambda = IntPoly::zero(Basis::L);
    for (&m, s) in &s_classes {
        let fiber = IntPoly::projective_space(n as i64 - b1 as i64 + m as i64 - 1);
        lambda = &lambda + &(s * &fiber);
    }
    let chi = lambda.euler_characteristic();
    let strata_chi_sum = strata
        .iter()
        .fold(BigInt::from(0), |acc, s| acc + s.class.euler_characteristic());
    Ok(LambdaReport {
        edges: n,
        betti1: b1,
        strata,
        t_nonnegative: lambda.is_t_nonnegative(),
        chi,
        strata_chi_sum,
        s_classes,
        lambda_class: lambda,
    })
}

/// Brute-force count of pairs `(a, beta)` over `F_q` with `Q_a(beta) = 0`.
pub fn lambda_oracle_count(g: &Multigraph, q: u64, budget: u64) -> Result<u64> {
    if !crate::count::is_prime(q) {
        return Err(Error::NotPrime { q });
    }
    let n = g.edge_count();
    let b1 = g.betti1();
    if b1 == 0 {
        return Err(Error::ForestInput);
    }
    let pairs = proj_count(q, n) as u128 * proj_count(q, b1) as u128;
    if pairs > budget as u128 {
        return Err(Error::BudgetExceeded { needed: pairs, budget });
    }
    let cm = g.circuit_matrix();
    let eta: Vec<Vec<i64>> = cm.rows();
    let to_mod = |x: i64| -> u64 { x.rem_euclid(q as i64) as u64 };
    let mut count = 0u64;
    for beta in projective_points(q, b1) {
        // c_e = (eta beta)_e
        let c: Vec<u64> = eta
            .iter()
            .map(|row| {
                row.iter().zip(&beta).fold(0u64, |acc, (&x, &b)| (acc + to_mod(x) * b) % q)
            })
            .collect();
        for a in projective_points(q, n) {
            let zero = (0..b1).all(|j| {
                let mut acc = 0u64;
                for e in 0..n {
                    acc = (acc + a[e] * to_mod(eta[e][j]) % q * c[e]) % q;
                }
                acc == 0
            });
            if zero {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn proj_count(q: u64, m: usize) -> u64 {
    let mut total = 0u64;
    let mut p = 1u64;
    for _ in 0..m {
        total += p;
        p *= q;
    }
    total
}

/// Canonical representatives of `P^{m-1}(F_q)`: first nonzero coordinate
/// equals 1.
fn projective_points(q: u64, m: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..m {
        // coordinates before `lead` are zero, coordinate `lead` is 1
        let free = m - lead - 1;
        let mut tail = vec![0u64; free];
        loop {
            let mut pt = vec![0u64; m];
            pt[lead] = 1;
            pt[lead + 1..].copy_from_slice(&tail);
            out.push(pt);
            let mut i = 0;
            loop {
                if i == free {
                    break;
                }
                tail[i] += 1;
                if tail[i] < q {
                    break;
                }
                tail[i] = 0;
                i += 1;
            }
            if i == free {
                break;
            }
        }
    }
    out
}
