//! Sparse multivariate polynomials with integer coefficients.
//!
//! These carry the Kirchhoff polynomials and the polynomial systems fed to
//! the finite-field counting sweeps. Terms are kept sorted by exponent
//! vector with no duplicates and no zero coefficients.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiPoly {
    n_vars: usize,
    /// (exponent vector, coefficient), sorted by exponents
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl MultiPoly {
    pub fn zero(n_vars: usize) -> Self {
        MultiPoly { n_vars, terms: Vec::new() }
    }

    pub fn constant(n_vars: usize, c: i64) -> Self {
        MultiPoly::from_terms(n_vars, vec![(vec![0; n_vars], BigInt::from(c))])
    }

    pub fn one(n_vars: usize) -> Self {
        MultiPoly::constant(n_vars, 1)
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        assert!(i < n_vars);
        let mut e = vec![0; n_vars];
        e[i] = 1;
        MultiPoly::from_terms(n_vars, vec![(e, BigInt::one())])
    }

    pub fn from_terms(n_vars: usize, raw: Vec<(Vec<u32>, BigInt)>) -> Self {
        let mut map = std::collections::BTreeMap::new();
        for (e, c) in raw {
            assert_eq!(e.len(), n_vars, "exponent vector length mismatch");
            let entry = map.entry(e).or_insert_with(BigInt::zero);
            *entry += c;
        }
        let terms = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        MultiPoly { n_vars, terms }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &[(Vec<u32>, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().all(|&x| x == 0))
    }

    /// Nonzero constant polynomials have an empty zero set.
    pub fn is_nonzero_constant(&self) -> bool {
        !self.is_zero() && self.is_constant()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut raw = self.terms.clone();
        raw.extend(other.terms.iter().cloned());
        MultiPoly::from_terms(self.n_vars, raw)
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                raw.push((e, ca * cb));
            }
        }
        MultiPoly::from_terms(self.n_vars, raw)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max()
    }

    /// `Some(d)` if every monomial has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.iter().map(|(e, _)| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn eval_mod(&self, point: &[u64], q: u64) -> u64 {
        let mut acc: u64 = 0;
        for (e, c) in &self.terms {
            let mut t = reduce_bigint(c, q);
            for (i, &exp) in e.iter().enumerate() {
                t = t * pow_mod(point[i] % q, exp, q) % q;
            }
            acc = (acc + t) % q;
        }
        acc
    }

    /// Partial evaluation: set variable `var` to the integer `value`,
    /// dropping that variable from the ring.
    pub fn substitute_value(&self, var: usize, value: i64) -> MultiPoly {
        let v = BigInt::from(value);
        let raw = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut coeff = c.clone();
                for _ in 0..e[var] {
                    coeff *= &v;
                }
                let ne: Vec<u32> = e
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != var)
                    .map(|(_, &x)| x)
                    .collect();
                (ne, coeff)
            })
            .collect();
        MultiPoly::from_terms(self.n_vars - 1, raw)
    }

    /// Relabel variables: new poly has `x_{perm[i]}` where the old had `x_i`.
    pub fn permute_vars(&self, perm: &[usize]) -> MultiPoly {
        assert_eq!(perm.len(), self.n_vars);
        let raw = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0u32; self.n_vars];
                for (i, &x) in e.iter().enumerate() {
                    ne[perm[i]] = x;
                }
                (ne, c.clone())
            })
            .collect();
        MultiPoly::from_terms(self.n_vars, raw)
    }

    /// Tensor into a larger variable ring: variable `i` becomes `i + offset`.
    pub fn embed(&self, n_vars: usize, offset: usize) -> MultiPoly {
        assert!(offset + self.n_vars <= n_vars);
        let raw = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0u32; n_vars];
                ne[offset..offset + self.n_vars].copy_from_slice(e);
                (ne, c.clone())
            })
            .collect();
        MultiPoly::from_terms(n_vars, raw)
    }

    /// Stable text rendering `c*t1^a*t2^b + ...` (variables are 1-based).
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            if !c.abs().is_one() || e.iter().all(|&x| x == 0) {
                factors.push(c.abs().to_string());
            }
            for (i, &exp) in e.iter().enumerate() {
                match exp {
                    0 => {}
                    1 => factors.push(format!("t{}", i + 1)),
                    _ => factors.push(format!("t{}^{}", i + 1, exp)),
                }
            }
            let body = factors.join("*");
            if parts.is_empty() {
                parts.push(if c.is_negative() { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{} {}", if c.is_negative() { "-" } else { "+" }, body));
            }
        }
        parts.join(" ")
    }
}

pub(crate) fn reduce_bigint(c: &BigInt, q: u64) -> u64 {
    use num_traits::ToPrimitive;
    let r = c % BigInt::from(q);
    let r = if r.is_negative() { r + BigInt::from(q) } else { r };
    r.to_u64().expect("residue fits in u64")
}

pub(crate) fn pow_mod(mut base: u64, mut e: u32, q: u64) -> u64 {
    base %= q;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_merges_and_drops() {
        let n = 2;
        let p = MultiPoly::from_terms(
            n,
            vec![
                (vec![1, 0], BigInt::from(2)),
                (vec![1, 0], BigInt::from(-2)),
                (vec![0, 1], BigInt::from(3)),
            ],
        );
        assert_eq!(p.terms().len(), 1);
    }

    #[test]
    fn homogeneity() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = x.mul(&x).add(&x.mul(&y));
        assert_eq!(p.homogeneous_degree(), Some(2));
        let q = p.add(&MultiPoly::one(2));
        assert_eq!(q.homogeneous_degree(), None);
    }

    #[test]
    fn eval_mod_small() {
        // x^2 + y over F_5 at (3, 4): 9 + 4 = 13 = 3
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = x.mul(&x).add(&y);
        assert_eq!(p.eval_mod(&[3, 4], 5), 3);
    }
}
