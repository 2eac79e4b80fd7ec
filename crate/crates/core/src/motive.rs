//! Virtual Tate motives: integer polynomials in the Lefschetz class `L`
//! or in the torus class `T = L - 1`.
//!
//! Everything the Grothendieck-class computations need lives here: the
//! binomial-transform change of basis, Euler characteristic (evaluation at
//! `L = 1`), vanishing order at `q = 1`, the F1 point count, the coefficient
//! positivity test of the torification condition, and exact division.

use crate::error::Error;
use crate::poly::ZPoly;
use crate::Result;
use num_bigint::BigInt;
use num_traits::One;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    L,
    T,
}

/// A class in Z[L] = Z[T], tagged with the basis its coefficients refer to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    basis: Basis,
    poly: ZPoly,
}

impl IntPoly {
    pub fn zero(basis: Basis) -> Self {
        IntPoly { basis, poly: ZPoly::zero() }
    }

    pub fn one(basis: Basis) -> Self {
        IntPoly { basis, poly: ZPoly::one() }
    }

    pub fn constant(basis: Basis, c: i64) -> Self {
        IntPoly { basis, poly: ZPoly::constant_i64(c) }
    }

    pub fn from_coeffs(basis: Basis, coeffs: Vec<BigInt>) -> Self {
        IntPoly { basis, poly: ZPoly::from_coeffs(coeffs) }
    }

    pub fn from_i64(basis: Basis, coeffs: &[i64]) -> Self {
        IntPoly { basis, poly: ZPoly::from_i64(coeffs) }
    }

    /// The class `L^k`.
    pub fn lefschetz(k: usize) -> Self {
        IntPoly { basis: Basis::L, poly: ZPoly::monomial(BigInt::one(), k) }
    }

    /// The class `T^k`.
    pub fn torus(k: usize) -> Self {
        IntPoly { basis: Basis::T, poly: ZPoly::monomial(BigInt::one(), k) }
    }

    /// `[P^d] = 1 + L + ... + L^d`; `d = -1` gives the empty space, class 0.
    pub fn projective_space(d: i64) -> Self {
        if d < 0 {
            return IntPoly::zero(Basis::L);
        }
        IntPoly::from_coeffs(Basis::L, vec![BigInt::one(); d as usize + 1])
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn raw(&self) -> &ZPoly {
        &self.poly
    }

    pub fn coeffs(&self) -> &[BigInt] {
        self.poly.coeffs()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    /// Change of basis by the substitution `L = T + 1` / `T = L - 1`.
    /// Round-trips to the identical coefficient list.
    pub fn to_basis(&self, basis: Basis) -> IntPoly {
        if self.basis == basis {
            return self.clone();
        }
        // L-basis coefficients evaluated at L = T + 1 give the T-basis,
        // and conversely with T = L - 1.
        let shift = match basis {
            Basis::T => 1,
            Basis::L => -1,
        };
        IntPoly { basis, poly: self.poly.shift_var(shift) }
    }

    /// Evaluate the class as a point count at `q`: `L -> q`, `T -> q - 1`.
    pub fn count_at(&self, q: &BigInt) -> BigInt {
        match self.basis {
            Basis::L => self.poly.eval(q),
            Basis::T => self.poly.eval(&(q - 1)),
        }
    }

    /// Euler characteristic: the value at `L = 1`, i.e. the T-basis
    /// constant term.
    pub fn euler_characteristic(&self) -> BigInt {
        self.count_at(&BigInt::one())
    }

    /// Order of vanishing of the counting polynomial at `q = 1`:
    /// the lowest nonzero T-coefficient index. `None` for the zero class.
    pub fn vanishing_order_at_one(&self) -> Option<usize> {
        self.to_basis(Basis::T).poly.valuation()
    }

    /// `lim_{q->1} P(q)/(q-1)^r` with `r` the vanishing order.
    pub fn f1_point_count(&self) -> Result<BigInt> {
        let t = self.to_basis(Basis::T);
        let r = t.poly.valuation().ok_or(Error::ZeroPolynomial)?;
        Ok(t.poly.coeff(r))
    }

    /// All T-basis coefficients nonnegative? Returns the first offending
    /// `(degree, coefficient)` otherwise.
    pub fn t_nonnegative(&self) -> TNonNegative {
        match self.to_basis(Basis::T).poly.first_negative_coeff() {
            None => TNonNegative::NonNegative,
            Some((degree, coeff)) => TNonNegative::Negative { degree, coeff },
        }
    }

    pub fn is_t_nonnegative(&self) -> bool {
        matches!(self.t_nonnegative(), TNonNegative::NonNegative)
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        IntPoly { basis: self.basis, poly: self.poly.pow(e) }
    }

    /// Exact division in Z[L]; non-divisibility is a meaningful signal and
    /// surfaces as an error.
    pub fn div_exact(&self, divisor: &IntPoly) -> Result<IntPoly> {
        let d = divisor.to_basis(self.basis);
        Ok(IntPoly { basis: self.basis, poly: self.poly.div_exact(&d.poly)? })
    }

    pub fn display(&self) -> String {
        match self.basis {
            Basis::L => self.poly.display("L"),
            Basis::T => self.poly.display("T"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TNonNegative {
    NonNegative,
    Negative { degree: usize, coeff: BigInt },
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let rhs = rhs.to_basis(self.basis);
        IntPoly { basis: self.basis, poly: self.poly.add(&rhs.poly) }
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let rhs = rhs.to_basis(self.basis);
        IntPoly { basis: self.basis, poly: self.poly.sub(&rhs.poly) }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        let rhs = rhs.to_basis(self.basis);
        IntPoly { basis: self.basis, poly: self.poly.mul(&rhs.poly) }
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly { basis: self.basis, poly: self.poly.neg() }
    }
}

// JSON form: {"basis":"T","coeffs":["14","106",...]} with string-encoded
// integers, so arbitrary-precision values survive any JSON reader.
impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            basis: &'a str,
            coeffs: Vec<String>,
        }
        let basis = match self.basis {
            Basis::L => "L",
            Basis::T => "T",
        };
        let coeffs = self.poly.coeffs().iter().map(|c| c.to_string()).collect();
        Repr { basis, coeffs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            basis: String,
            coeffs: Vec<String>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let basis = match repr.basis.as_str() {
            "L" => Basis::L,
            "T" => Basis::T,
            other => return Err(D::Error::custom(format!("unknown basis {other:?}"))),
        };
        let mut coeffs = Vec::with_capacity(repr.coeffs.len());
        for s in &repr.coeffs {
            coeffs.push(s.parse::<BigInt>().map_err(D::Error::custom)?);
        }
        Ok(IntPoly::from_coeffs(basis, coeffs))
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_squared_in_t_basis() {
        let l2 = IntPoly::lefschetz(2);
        let t = l2.to_basis(Basis::T);
        // (T+1)^2 = T^2 + 2T + 1
        assert_eq!(t, IntPoly::from_i64(Basis::T, &[1, 2, 1]));
        assert_eq!(t.to_basis(Basis::L), l2);
    }

    #[test]
    fn projective_space_binomials() {
        // [P^{n-1}] in the T basis has coefficients binom(n, k+1).
        for n in 1..=8usize {
            let p = IntPoly::projective_space(n as i64 - 1).to_basis(Basis::T);
            let mut expected = Vec::new();
            for k in 1..=n {
                expected.push(num_integer::binomial(BigInt::from(n), BigInt::from(k)));
            }
            assert_eq!(p, IntPoly::from_coeffs(Basis::T, expected), "n={n}");
            assert_eq!(p.euler_characteristic(), BigInt::from(n));
            assert_eq!(p.f1_point_count().unwrap(), BigInt::from(n));
            assert_eq!(p.vanishing_order_at_one(), Some(0));
        }
    }

    #[test]
    fn t_basis_back_to_l() {
        // 2 + T -> L + 1
        let p = IntPoly::from_i64(Basis::T, &[2, 1]);
        assert_eq!(p.to_basis(Basis::L), IntPoly::from_i64(Basis::L, &[1, 1]));
    }

    #[test]
    fn euler_kills_l_times_l_minus_one() {
        // L(L-1) * (3L^2 + 7) has chi = 0.
        let l = IntPoly::lefschetz(1);
        let t = &l - &IntPoly::one(Basis::L);
        let any = IntPoly::from_i64(Basis::L, &[7, 0, 3]);
        let p = &(&l * &t) * &any;
        assert_eq!(p.euler_characteristic(), BigInt::from(0));
    }

    #[test]
    fn vanishing_order_and_count() {
        // T(T+1): order 1, count 1
        let p = IntPoly::from_i64(Basis::T, &[0, 1, 1]);
        assert_eq!(p.vanishing_order_at_one(), Some(1));
        assert_eq!(p.f1_point_count().unwrap(), BigInt::one());
        assert!(IntPoly::zero(Basis::T).f1_point_count().is_err());
    }

    #[test]
    fn t_nonnegativity_witness() {
        let p = IntPoly::from_i64(Basis::T, &[0, 3, -2, 1]);
        match p.t_nonnegative() {
            TNonNegative::Negative { degree, coeff } => {
                assert_eq!(degree, 2);
                assert_eq!(coeff, BigInt::from(-2));
            }
            _ => panic!("expected a negative witness"),
        }
        assert!(IntPoly::zero(Basis::T).is_t_nonnegative());
    }

    #[test]
    fn json_roundtrip_with_string_coeffs() {
        let p = IntPoly::from_i64(Basis::T, &[14, 106, 454]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"basis":"T","coeffs":["14","106","454"]}"#);
        let back: IntPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
