//! Dense univariate polynomials over the integers.
//!
//! This is the arithmetic workhorse shared by the virtual-motive layer
//! (`motive`) and the CSM layer (`csm`). Coefficients are arbitrary
//! precision; all divisions are exact with an explicit error on a nonzero
//! remainder.

use crate::error::Error;
use crate::Result;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// `coeffs[k]` is the coefficient of `x^k`; no trailing zeros, and the zero
/// polynomial has an empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        ZPoly::from_coeffs(vec![c])
    }

    pub fn constant_i64(c: i64) -> Self {
        ZPoly::constant(BigInt::from(c))
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return ZPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        ZPoly { coeffs }
    }

    pub fn var() -> Self {
        ZPoly::monomial(BigInt::one(), 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        ZPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        ZPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        ZPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigInt) -> ZPoly {
        ZPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> ZPoly {
        let mut base = self.clone();
        let mut acc = ZPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitute `x -> x + c`.
    pub fn shift_var(&self, c: i64) -> ZPoly {
        // Horner: p(x+c) = (...((a_n)(x+c) + a_{n-1})(x+c) + ...)
        let shifted = ZPoly::from_coeffs(vec![BigInt::from(c), BigInt::one()]);
        let mut acc = ZPoly::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(&shifted);
            acc = acc.add(&ZPoly::constant(a.clone()));
        }
        acc
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn derivative(&self) -> ZPoly {
        if self.coeffs.len() <= 1 {
            return ZPoly::zero();
        }
        ZPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * BigInt::from(k))
                .collect(),
        )
    }

    /// Exact division; errors if `divisor` does not divide `self` over Z.
    pub fn div_exact(&self, divisor: &ZPoly) -> Result<ZPoly> {
        if divisor.is_zero() {
            return Err(Error::NonExactDivision("division by zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(ZPoly::zero());
        }
        let dd = divisor.degree().unwrap();
        let lead = divisor.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return Err(Error::NonExactDivision(format!(
                "degree {} not divisible by degree {}",
                rem.len() - 1,
                dd
            )));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            if (&top % &lead) != BigInt::zero() {
                return Err(Error::NonExactDivision(format!(
                    "leading coefficient {top} not divisible by {lead}"
                )));
            }
            let q = &top / &lead;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * b;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NonExactDivision("nonzero remainder".into()));
        }
        Ok(ZPoly::from_coeffs(quot))
    }

    /// Index of the lowest nonzero coefficient; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn first_negative_coeff(&self) -> Option<(usize, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| c.is_negative())
            .map(|(k, c)| (k, c.clone()))
    }

    /// Render with the given variable name, highest degree first.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match (k, mag.is_one()) {
                (0, _) => format!("{mag}"),
                (1, true) => var.to_string(),
                (1, false) => format!("{mag}*{var}"),
                (_, true) => format!("{var}^{k}"),
                (_, false) => format!("{mag}*{var}^{k}"),
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{} {}", if c.is_negative() { "-" } else { "+" }, body));
            }
        }
        parts.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> ZPoly {
        ZPoly::from_i64(v)
    }

    #[test]
    fn normalization_drops_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]), p(&[1, 2]));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[]).degree(), None);
    }

    #[test]
    fn shift_var_roundtrip() {
        let q = p(&[3, -1, 0, 7]);
        assert_eq!(q.shift_var(5).shift_var(-5), q);
        // (x+1)^2 = x^2 + 2x + 1
        assert_eq!(p(&[0, 0, 1]).shift_var(1), p(&[1, 2, 1]));
    }

    #[test]
    fn div_exact_detects_remainders() {
        let num = p(&[-1, 0, 1]); // x^2 - 1
        assert_eq!(num.div_exact(&p(&[1, 1])).unwrap(), p(&[-1, 1]));
        assert!(p(&[1, 1, 1]).div_exact(&p(&[1, 1])).is_err());
    }

    #[test]
    fn derivative_and_eval() {
        let q = p(&[1, 2, 3]); // 1 + 2x + 3x^2
        assert_eq!(q.derivative(), p(&[2, 6]));
        assert_eq!(q.eval(&BigInt::from(2)), BigInt::from(17));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[2, 1, -1]).display("T"), "-T^2 + T + 2");
        assert_eq!(ZPoly::zero().display("T"), "0");
    }
}
