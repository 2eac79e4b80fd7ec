//! Exact linear algebra over the integers: ranks and canonical row-space
//! bases via fraction-free elimination. Mobius values are integers, so no
//! floating point anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type Row = Vec<BigInt>;

pub fn row_from_i64(v: &[i64]) -> Row {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Divide out the content and make the first nonzero entry positive.
/// Returns `None` for the zero vector.
pub fn primitive(v: &Row) -> Option<Row> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return None;
    }
    let mut out: Row = v.iter().map(|x| x / &g).collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in out.iter_mut() {
                *x = -&*x;
            }
        }
    }
    Some(out)
}

pub fn rank(rows: &[Row]) -> usize {
    reduced_rowspace_basis(rows).len()
}

/// Canonical basis of the rational row space: reduced row echelon form,
/// each row scaled to a primitive integer vector with positive pivot.
/// Equal row spaces give byte-equal bases, so this doubles as a flat key.
pub fn reduced_rowspace_basis(rows: &[Row]) -> Vec<Row> {
    let mut basis: Vec<Row> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        reduce_against(&mut r, &basis);
        if let Some(p) = primitive(&r) {
            basis.push(p);
            // keep echelon ordering by pivot column and back-substitute
            basis.sort_by_key(|b| pivot(b));
            let snapshot = basis.clone();
            for (i, b) in basis.iter_mut().enumerate() {
                let others: Vec<Row> = snapshot
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, x)| x.clone())
                    .collect();
                reduce_against(b, &others);
                *b = primitive(b).expect("basis rows stay nonzero");
            }
            basis.sort_by_key(|b| pivot(b));
        }
    }
    basis
}

fn pivot(row: &Row) -> usize {
    row.iter().position(|x| !x.is_zero()).unwrap_or(row.len())
}

/// Eliminate the pivot columns of `basis` from `row` (cross-multiplying to
/// stay over Z).
fn reduce_against(row: &mut Row, basis: &[Row]) {
    for b in basis {
        let p = pivot(b);
        if p >= row.len() || row[p].is_zero() {
            continue;
        }
        let a = row[p].clone();
        let d = b[p].clone();
        for k in 0..row.len() {
            row[k] = &row[k] * &d - &a * &b[k];
        }
    }
}

/// Is `v` in the rational span of the (reduced) basis?
pub fn in_rowspace(v: &Row, basis: &[Row]) -> bool {
    let mut r = v.clone();
    reduce_against(&mut r, basis);
    r.iter().all(Zero::is_zero)
}

/// Does the row space of `a` contain the row space of `b`?
pub fn rowspace_contains(a_basis: &[Row], b_basis: &[Row]) -> bool {
    b_basis.iter().all(|r| in_rowspace(r, a_basis))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Row> {
        v.iter().map(|r| row_from_i64(r)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&rows(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&rows(&[&[1, 1], &[2, 2]])), 1);
        assert_eq!(rank(&rows(&[&[0, 0]])), 0);
        assert_eq!(rank(&rows(&[&[1, -1, 0], &[1, 0, -1], &[0, 1, -1]])), 2);
    }

    #[test]
    fn canonical_basis_is_rowspace_invariant() {
        let a = reduced_rowspace_basis(&rows(&[&[2, 4, 6], &[1, 1, 1]]));
        let b = reduced_rowspace_basis(&rows(&[&[1, 1, 1], &[0, 2, 4], &[3, 5, 7]]));
        assert_eq!(a, b);
    }

    #[test]
    fn membership() {
        let basis = reduced_rowspace_basis(&rows(&[&[1, 0, -1], &[0, 1, -1]]));
        assert!(in_rowspace(&row_from_i64(&[2, -3, 1]), &basis));
        assert!(!in_rowspace(&row_from_i64(&[1, 1, 1]), &basis));
    }
}
