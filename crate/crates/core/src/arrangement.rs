//! Central hyperplane arrangements: intersection poset, Mobius function,
//! characteristic polynomial, Grothendieck classes of the union and
//! complement, and the Mobius-inequality necessary condition.
//!
//! All linear algebra is exact over Z. Coincident hyperplanes are
//! deduplicated (the union variety only depends on the set); multiplicity
//! is kept as metadata.

use crate::count;
use crate::error::Error;
use crate::graph::Multigraph;
use crate::linalg::{self, Row};
use crate::motive::{Basis, IntPoly};
use crate::Result;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// A central arrangement in `A^{ambient_dim}`, given by integer normals.
/// Normals are stored primitive (content divided out, sign-normalized) and
/// pairwise non-proportional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    ambient_dim: usize,
    normals: Vec<Row>,
    /// how many input normals collapsed onto each stored one
    multiplicity: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ArrangementRepr {
    ambient_dim: usize,
    normals: Vec<Vec<String>>,
}

impl Arrangement {
    pub fn new(ambient_dim: usize, raw: Vec<Vec<i64>>) -> Result<Self> {
        let rows: Vec<Row> = raw.iter().map(|r| linalg::row_from_i64(r)).collect();
        Self::from_rows(ambient_dim, rows)
    }

    pub fn from_rows(ambient_dim: usize, raw: Vec<Row>) -> Result<Self> {
        let mut normals: Vec<Row> = Vec::new();
        let mut multiplicity = Vec::new();
        for row in &raw {
            if row.len() != ambient_dim {
                return Err(Error::Parse(format!(
                    "normal {row:?} does not have {ambient_dim} entries"
                )));
            }
            let p = linalg::primitive(row).ok_or(Error::ZeroNormal)?;
            if let Some(i) = normals.iter().position(|n| *n == p) {
                multiplicity[i] += 1;
            } else {
                normals.push(p);
                multiplicity.push(1);
            }
        }
        Ok(Arrangement { ambient_dim, normals, multiplicity })
    }

    /// Graph arrangement: the rows of the circuit matrix in `Q^{b1}`,
    /// deduplicated; zero rows (bridges) are not hyperplanes and are
    /// dropped. Errors on forests.
    pub fn from_graph(g: &Multigraph) -> Result<Self> {
        if g.betti1() == 0 {
            return Err(Error::ForestInput);
        }
        let cm = g.circuit_matrix();
        let rows: Vec<Row> = cm
            .rows()
            .into_iter()
            .filter(|r| r.iter().any(|&x| x != 0))
            .map(|r| linalg::row_from_i64(&r))
            .collect();
        Self::from_rows(g.betti1(), rows)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn hyperplane_count(&self) -> usize {
        self.normals.len()
    }

    pub fn normals(&self) -> &[Row] {
        &self.normals
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicity
    }

    /// Drop hyperplane `i` (for monotonicity checks).
    pub fn without(&self, i: usize) -> Arrangement {
        let mut normals = self.normals.clone();
        let mut multiplicity = self.multiplicity.clone();
        normals.remove(i);
        multiplicity.remove(i);
        Arrangement { ambient_dim: self.ambient_dim, normals, multiplicity }
    }

    pub fn to_json(&self) -> String {
        let repr = ArrangementRepr {
            ambient_dim: self.ambient_dim,
            normals: self
                .normals
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
        };
        serde_json::to_string(&repr).unwrap()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: ArrangementRepr =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut rows = Vec::new();
        for r in &repr.normals {
            let mut row = Vec::new();
            for s in r {
                row.push(s.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string()))?);
            }
            rows.push(row);
        }
        Self::from_rows(repr.ambient_dim, rows)
    }
}

/// One flat: an intersection subspace, identified by the canonical reduced
/// basis of the span of its defining normals.
#[derive(Debug, Clone)]
pub struct Flat {
    /// canonical basis of the normal span (empty for the ambient space)
    pub normal_basis: Vec<Row>,
    /// dimension of the subspace itself
    pub dim: usize,
    /// hyperplanes containing the flat
    pub hyperplanes: Vec<usize>,
    pub mobius: BigInt,
}

#[derive(Debug, Clone)]
pub struct IntersectionPoset {
    pub ambient_dim: usize,
    /// flats sorted by decreasing dimension; index 0 is the ambient space
    pub flats: Vec<Flat>,
}

impl IntersectionPoset {
    /// `flats[i] <= flats[j]` in the reverse-inclusion order
    /// (the subspace of `i` contains the subspace of `j`).
    pub fn le(&self, i: usize, j: usize) -> bool {
        linalg::rowspace_contains(&self.flats[j].normal_basis, &self.flats[i].normal_basis)
    }
}

/// Enumerate all intersection subspaces by closing the hyperplane set
/// under span-extension, then fill in Mobius values by the standard
/// recursion `sum_{y <= x} mu(y) = 0`.
pub fn intersection_poset(arr: &Arrangement) -> IntersectionPoset {
    let m = arr.ambient_dim;
    // keys: canonical reduced bases
    let mut seen: Vec<Vec<Row>> = vec![Vec::new()]; // ambient: empty span
    let mut frontier: Vec<Vec<Row>> = vec![Vec::new()];
    while let Some(span) = frontier.pop() {
        for n in arr.normals() {
            if linalg::in_rowspace(n, &span) {
                continue;
            }
            let mut rows = span.clone();
            rows.push(n.clone());
            let next = linalg::reduced_rowspace_basis(&rows);
            if !seen.contains(&next) {
                seen.push(next.clone());
                frontier.push(next);
            }
        }
    }
    let mut flats: Vec<Flat> = seen
        .into_iter()
        .map(|basis| {
            let rank = basis.len();
            let hyperplanes = arr
                .normals()
                .iter()
                .enumerate()
                .filter(|(_, n)| linalg::in_rowspace(n, &basis))
                .map(|(i, _)| i)
                .collect();
            Flat { normal_basis: basis, dim: m - rank, hyperplanes, mobius: BigInt::zero() }
        })
        .collect();
    // decreasing dimension; deterministic tiebreak on the contained set
    flats.sort_by(|a, b| {
        b.dim.cmp(&a.dim).then_with(|| a.hyperplanes.cmp(&b.hyperplanes))
    });
    // Mobius recursion top-down
    for i in 0..flats.len() {
        if i == 0 {
            flats[0].mobius = BigInt::from(1);
            continue;
        }
        let mut acc = BigInt::zero();
        for j in 0..i {
            if linalg::rowspace_contains(&flats[i].normal_basis, &flats[j].normal_basis) {
                acc += &flats[j].mobius;
            }
        }
        flats[i].mobius = -acc;
    }
    IntersectionPoset { ambient_dim: m, flats }
}

/// `chi(t) = sum_x mu(x) t^{dim x}`, exact, degree `ambient_dim`.
pub fn characteristic_polynomial(arr: &Arrangement) -> IntPoly {
    let poset = intersection_poset(arr);
    characteristic_from_poset(&poset)
}

pub fn characteristic_from_poset(poset: &IntersectionPoset) -> IntPoly {
    let mut coeffs = vec![BigInt::zero(); poset.ambient_dim + 1];
    for f in &poset.flats {
        coeffs[f.dim] += &f.mobius;
    }
    IntPoly::from_coeffs(Basis::L, coeffs)
}

/// `[P^n \ A] = chi(L)/(L - 1)`; the division is exact for nonempty
/// central arrangements (the top flat's Mobius recursion forces
/// `chi(1) = 0`), so a failure signals a poset bug. The empty arrangement
/// has complement all of `P^n`.
pub fn complement_class(arr: &Arrangement) -> Result<IntPoly> {
    if arr.hyperplane_count() == 0 {
        return Ok(IntPoly::projective_space(arr.ambient_dim as i64 - 1));
    }
    let chi = characteristic_polynomial(arr);
    let torus = IntPoly::from_i64(Basis::L, &[-1, 1]);
    chi.div_exact(&torus)
}

/// `[A] = [P^n] - [P^n \ A]` for the union variety `A` in `P^n`,
/// `n = ambient_dim - 1`.
pub fn union_class(arr: &Arrangement) -> Result<IntPoly> {
    let pn = IntPoly::projective_space(arr.ambient_dim as i64 - 1);
    Ok(&pn - &complement_class(arr)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct MobiusCheckRow {
    pub k: usize,
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MobiusConditionReport {
    pub per_k: Vec<MobiusCheckRow>,
    pub passes: bool,
    /// the equivalent restatement: union class is T-nonnegative
    pub union_t_nonnegative: bool,
    pub agree: bool,
}

/// For every `k >= 1`:
/// `sum_{x: dim x >= k} mu(x) binom(dim x, k) <= binom(n+1, k)`,
/// cross-checked against T-nonnegativity of the union class.
pub fn mobius_condition_check(arr: &Arrangement) -> Result<MobiusConditionReport> {
    let poset = intersection_poset(arr);
    let m = arr.ambient_dim; // = n + 1
    let mut per_k = Vec::new();
    let mut passes = true;
    for k in 1..=m {
        let mut lhs = BigInt::zero();
        for f in &poset.flats {
            if f.dim >= k {
                lhs += &f.mobius
                    * num_integer::binomial(BigInt::from(f.dim), BigInt::from(k));
            }
        }
        let rhs = num_integer::binomial(BigInt::from(m), BigInt::from(k));
        let holds = lhs <= rhs;
        passes &= holds;
        per_k.push(MobiusCheckRow { k, lhs, rhs, holds });
    }
    let union_t_nonnegative = union_class(arr)?.is_t_nonnegative();
    Ok(MobiusConditionReport { per_k, passes, union_t_nonnegative, agree: passes == union_t_nonnegative })
}

/// Brute-force points of the projective complement over `F_q`: vectors
/// avoiding every hyperplane, divided by `q - 1`.
pub fn complement_count_bruteforce(arr: &Arrangement, q: u64, budget: u64) -> Result<u64> {
    if !count::is_prime(q) {
        return Err(Error::NotPrime { q });
    }
    let m = arr.ambient_dim;
    let mut size: u128 = 1;
    for _ in 0..m {
        size *= q as u128;
    }
    if size > budget as u128 {
        return Err(Error::BudgetExceeded { needed: size, budget });
    }
    let normals: Vec<Vec<u64>> = arr
        .normals
        .iter()
        .map(|row| row.iter().map(|x| crate::multipoly::reduce_bigint(x, q)).collect())
        .collect();
    let mut point = vec![0u64; m];
    let mut affine = 0u64;
    loop {
        let ok = normals.iter().all(|n| {
            let dot: u64 = n.iter().zip(&point).map(|(a, b)| a * b % q).sum::<u64>() % q;
            dot != 0
        });
        if ok {
            affine += 1;
        }
        // odometer
        let mut i = 0;
        loop {
            if i == m {
                assert_eq!(affine % (q - 1), 0, "torus scaling must divide the count");
                return Ok(affine / (q - 1));
            }
            point[i] += 1;
            if point[i] < q {
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}

/// Points of the projective union over `F_q` by brute force.
pub fn union_count_bruteforce(arr: &Arrangement, q: u64, budget: u64) -> Result<u64> {
    let mut total = 0u64;
    let mut p = 1u64;
    for _ in 0..arr.ambient_dim {
        total += p;
        p *= q;
    }
    Ok(total - complement_count_bruteforce(arr, q, budget)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{banana, cycle};
    use num_bigint::BigInt;

    fn arr(m: usize, rows: &[&[i64]]) -> Arrangement {
        Arrangement::new(m, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn dedup_and_zero_normals() {
        let a = arr(2, &[&[1, 1], &[2, 2], &[-1, -1], &[1, 0]]);
        assert_eq!(a.hyperplane_count(), 2);
        assert_eq!(a.multiplicities(), &[3, 1]);
        assert!(Arrangement::new(2, vec![vec![0, 0]]).is_err());
    }

    #[test]
    fn single_hyperplane_poset() {
        let a = arr(3, &[&[1, 0, 0]]);
        let poset = intersection_poset(&a);
        assert_eq!(poset.flats.len(), 2);
        assert_eq!(poset.flats[0].dim, 3);
        assert_eq!(poset.flats[0].mobius, BigInt::from(1));
        assert_eq!(poset.flats[1].dim, 2);
        assert_eq!(poset.flats[1].mobius, BigInt::from(-1));
        // chi = t^3 - t^2
        assert_eq!(
            characteristic_polynomial(&a),
            IntPoly::from_i64(Basis::L, &[0, 0, -1, 1])
        );
    }

    #[test]
    fn two_generic_hyperplanes_in_a3() {
        let a = arr(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let poset = intersection_poset(&a);
        assert_eq!(poset.flats.len(), 4);
        let codim2 = poset.flats.iter().find(|f| f.dim == 1).unwrap();
        assert_eq!(codim2.mobius, BigInt::from(1));
        assert_eq!(
            characteristic_polynomial(&a),
            IntPoly::from_i64(Basis::L, &[0, 1, -2, 1])
        );
        // complement class (L^3 - 2L^2 + L)/(L-1) = L^2 - L
        assert_eq!(
            complement_class(&a).unwrap(),
            IntPoly::from_i64(Basis::L, &[0, -1, 1])
        );
        // union = [P^1] for one hyperplane
        let one = arr(3, &[&[1, 2, 3]]);
        assert_eq!(union_class(&one).unwrap(), IntPoly::projective_space(1));
    }

    #[test]
    fn boolean_arrangement_chi() {
        let a = arr(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        // (t-1)^3
        assert_eq!(
            characteristic_polynomial(&a),
            IntPoly::from_i64(Basis::L, &[-1, 3, -3, 1])
        );
    }

    #[test]
    fn mobius_recursion_identity() {
        for a in [
            arr(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]),
            arr(4, &[&[1, -1, 0, 0], &[1, 0, -1, 0], &[0, 1, -1, 0], &[0, 0, 1, -1]]),
        ] {
            let poset = intersection_poset(&a);
            for i in 1..poset.flats.len() {
                let mut acc = BigInt::from(0);
                for j in 0..poset.flats.len() {
                    if poset.le(j, i) {
                        acc += &poset.flats[j].mobius;
                    }
                }
                assert_eq!(acc, BigInt::from(0), "flat {i} recursion");
            }
        }
    }

    #[test]
    fn graph_arrangements() {
        // triangle: three coincident hyperplanes in Q^1
        let a = Arrangement::from_graph(&cycle(3)).unwrap();
        assert_eq!(a.ambient_dim(), 1);
        assert_eq!(a.hyperplane_count(), 1);
        assert_eq!(a.multiplicities(), &[3]);
        // banana(3): three distinct lines in Q^2
        let a = Arrangement::from_graph(&banana(3)).unwrap();
        assert_eq!(a.ambient_dim(), 2);
        assert_eq!(a.hyperplane_count(), 3);
        // 4-cycle: one hyperplane after dedup
        let a = Arrangement::from_graph(&cycle(4)).unwrap();
        assert_eq!(a.hyperplane_count(), 1);
        assert!(Arrangement::from_graph(&crate::graph::path(2)).is_err());
    }

    #[test]
    fn counting_oracle_matches_characteristic_polynomial() {
        let cases = [
            arr(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            arr(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]),
            arr(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 1]]),
        ];
        for a in &cases {
            let chi = characteristic_polynomial(a);
            for q in [2u64, 3, 5, 7] {
                let expected = chi.count_at(&BigInt::from(q)) / BigInt::from(q - 1);
                let got = complement_count_bruteforce(a, q, 1 << 24).unwrap();
                assert_eq!(BigInt::from(got), expected, "q={q}");
            }
        }
    }

    #[test]
    fn mobius_check_and_union_positivity_agree() {
        let a = arr(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        let rep = mobius_condition_check(&a).unwrap();
        assert!(rep.agree);
        // empty arrangement passes trivially
        let empty = Arrangement::new(3, vec![]).unwrap();
        let rep = mobius_condition_check(&empty).unwrap();
        assert!(rep.passes && rep.agree);
    }

    #[test]
    fn deletion_monotonicity() {
        let a = arr(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]);
        for q in [2u64, 3, 5] {
            let full = complement_count_bruteforce(&a, q, 1 << 24).unwrap();
            for i in 0..a.hyperplane_count() {
                let smaller = a.without(i);
                let partial = complement_count_bruteforce(&smaller, q, 1 << 24).unwrap();
                assert!(partial >= full);
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let a = arr(3, &[&[1, 0, -2], &[0, 1, 5]]);
        let back = Arrangement::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
    }
}
