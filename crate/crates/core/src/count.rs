//! Brute-force point counting over prime fields, counting profiles, and
//! Lagrange interpolation of counting polynomials.
//!
//! The affine counter sweeps all of `(Z/q)^n`, specializing one variable at
//! a time so partial evaluations are shared across the whole sweep. Counts
//! are cached globally (the class recursions and the CSM slices reuse many
//! identical systems), and sweeps stay within an explicit evaluation budget.

use crate::error::{Error, NotPolynomialReason};
use crate::motive::{Basis, IntPoly};
use crate::multipoly::{reduce_bigint, MultiPoly};
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn first_primes(k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    let mut q = 2u64;
    while out.len() < k {
        if is_prime(q) {
            out.push(q);
        }
        q += 1;
    }
    out
}

/// First `degree_bound + 3` primes (interpolation points plus verification
/// extras), trimmed from the top so every sweep `q^n` stays within budget.
/// Never trims below the `degree_bound + 1` points interpolation needs.
pub fn default_primes(degree_bound: usize, n_vars: usize, budget: u64) -> Result<Vec<u64>> {
    let mut primes = first_primes(degree_bound + 3);
    while primes.len() > degree_bound + 1 {
        let q = *primes.last().unwrap();
        if pow_u128(q, n_vars) > budget as u128 {
            primes.pop();
        } else {
            break;
        }
    }
    if let Some(&q) = primes.last() {
        let needed = pow_u128(q, n_vars);
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
    }
    Ok(primes)
}

fn pow_u128(q: u64, e: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(q as u128);
    }
    acc
}

// ---- sparse mod-q polynomials with packed exponents ----

/// Exponents packed one byte per variable, variable 0 in the low byte.
/// Sorting by the packed key orders terms by the *remaining* variables
/// first, so stratifying by variable 0 preserves sortedness.
#[derive(Debug, Clone)]
pub(crate) struct SPoly {
    terms: Vec<(u64, u64)>,
}

const MAX_PACKED_VARS: usize = 8;
const MAX_EXP: u32 = 255;

impl SPoly {
    pub(crate) fn from_multipoly(p: &MultiPoly, q: u64) -> SPoly {
        let raw: Vec<(Vec<u32>, u64)> = p
            .terms()
            .iter()
            .map(|(e, c)| (e.clone(), reduce_bigint(c, q)))
            .collect();
        SPoly::from_raw(&raw, q)
    }

    pub(crate) fn from_raw(raw: &[(Vec<u32>, u64)], q: u64) -> SPoly {
        let mut map: BTreeMap<u64, u64> = BTreeMap::new();
        for (e, c) in raw {
            assert!(e.len() <= MAX_PACKED_VARS, "counting supports at most 8 variables");
            let mut key = 0u64;
            for (i, &x) in e.iter().enumerate() {
                assert!(x <= MAX_EXP);
                key |= (x as u64) << (8 * i);
            }
            let entry = map.entry(key).or_insert(0);
            *entry = (*entry + c % q) % q;
        }
        SPoly { terms: map.into_iter().filter(|&(_, c)| c != 0).collect() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0
    }

    /// Specialize variable 0 to each residue; layered Horner shared across
    /// the sweep. Returns the layers sorted by descending exponent.
    fn layers(&self) -> Vec<(u32, Vec<(u64, u64)>)> {
        let mut by_exp: BTreeMap<u32, Vec<(u64, u64)>> = BTreeMap::new();
        for &(key, c) in &self.terms {
            let e0 = (key & 0xff) as u32;
            by_exp.entry(e0).or_default().push((key >> 8, c));
        }
        by_exp.into_iter().rev().collect()
    }
}

fn merge_add(a: &[(u64, u64)], b: &[(u64, u64)], q: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = (a[i].1 + b[j].1) % q;
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn scale(v: &mut Vec<(u64, u64)>, f: u64, q: u64) {
    if f == 1 {
        return;
    }
    if f == 0 {
        v.clear();
        return;
    }
    for t in v.iter_mut() {
        t.1 = t.1 * f % q;
    }
}

fn pow_small(mut b: u64, mut e: u32, q: u64) -> u64 {
    b %= q;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    acc
}

/// Count common zeros of the system in `(Z/q)^m`.
pub(crate) fn count_spolys(polys: &[SPoly], m: usize, q: u64) -> u64 {
    if polys.iter().any(SPoly::is_nonzero_constant) {
        return 0;
    }
    let live: Vec<&SPoly> = polys.iter().filter(|p| !p.is_zero()).collect();
    if live.is_empty() {
        return pow_u128(q, m) as u64;
    }
    if m == 0 {
        return 1; // all constants vanished above
    }
    if m == 1 {
        // dense univariate evaluation
        let dense: Vec<Vec<u64>> = live
            .iter()
            .map(|p| {
                let d = p.terms.iter().map(|&(k, _)| k & 0xff).max().unwrap() as usize;
                let mut v = vec![0u64; d + 1];
                for &(k, c) in &p.terms {
                    v[(k & 0xff) as usize] = c;
                }
                v
            })
            .collect();
        let mut count = 0;
        for a in 0..q {
            let all_zero = dense.iter().all(|coeffs| {
                let mut acc = 0u64;
                for &c in coeffs.iter().rev() {
                    acc = (acc * a + c) % q;
                }
                acc == 0
            });
            if all_zero {
                count += 1;
            }
        }
        return count;
    }
    let layered: Vec<Vec<(u32, Vec<(u64, u64)>)>> = live.iter().map(|p| p.layers()).collect();
    let mut total = 0u64;
    for a in 0..q {
        let mut subs = Vec::with_capacity(layered.len());
        for layers in &layered {
            let mut acc: Vec<(u64, u64)> = Vec::new();
            let mut prev_e: Option<u32> = None;
            for (e, layer) in layers {
                if let Some(pe) = prev_e {
                    scale(&mut acc, pow_small(a, pe - e, q), q);
                }
                acc = merge_add(&acc, layer, q);
                prev_e = Some(*e);
            }
            if let Some(e_last) = prev_e {
                scale(&mut acc, pow_small(a, e_last, q), q);
            }
            subs.push(SPoly { terms: acc });
        }
        total += count_spolys(&subs, m - 1, q);
    }
    total
}

static COUNT_CACHE: Lazy<Mutex<HashMap<(u64, usize, String), u64>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn system_key(polys: &[MultiPoly]) -> String {
    let mut parts: Vec<String> = polys.iter().map(|p| format!("{:?}", p.terms())).collect();
    parts.sort();
    parts.join(";")
}

/// Exact number of common zeros of the system in `(Z/q)^n`.
///
/// `q` must be prime and the sweep size `q^n` must fit the budget.
pub fn count_affine_system(polys: &[MultiPoly], n: usize, q: u64, budget: u64) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::NotPrime { q });
    }
    let needed = pow_u128(q, n);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    for p in polys {
        assert_eq!(p.n_vars(), n, "system/ambient variable mismatch");
    }
    let key = (q, n, system_key(polys));
    if let Some(&c) = COUNT_CACHE.lock().unwrap().get(&key) {
        return Ok(c);
    }
    let spolys: Vec<SPoly> = polys.iter().map(|p| SPoly::from_multipoly(p, q)).collect();
    let c = count_spolys(&spolys, n, q);
    COUNT_CACHE.lock().unwrap().insert(key, c);
    Ok(c)
}

/// Points of the projective zero locus: `(affine - 1)/(q - 1)`, which must
/// divide exactly. Every polynomial must be homogeneous.
pub fn count_projective(polys: &[MultiPoly], n: usize, q: u64, budget: u64) -> Result<u64> {
    for p in polys {
        if !p.is_zero() && p.homogeneous_degree().is_none() {
            return Err(Error::NotHomogeneous);
        }
    }
    let affine = count_affine_system(polys, n, q, budget)?;
    let num = affine
        .checked_sub(1)
        .ok_or_else(|| Error::NonExactDivision("affine cone misses the origin".into()))?;
    if num % (q - 1) != 0 {
        return Err(Error::NonExactDivision(format!(
            "projective count ({affine} - 1)/({q} - 1) is not integral"
        )));
    }
    Ok(num / (q - 1))
}

// ---- counting profiles ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    Affine,
    Projective,
}

/// Finite map `prime -> exact point count` with its ambient descriptor.
/// Counts serialize as strings so arbitrary-precision values survive any
/// JSON reader.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingProfile {
    pub ambient: Ambient,
    pub n: usize,
    #[serde(with = "count_map_serde")]
    pub counts: BTreeMap<u64, BigInt>,
}

mod count_map_serde {
    use num_bigint::BigInt;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<u64, BigInt>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        serializer.collect_map(map.iter().map(|(q, c)| (q.to_string(), c.to_string())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<u64, BigInt>, D::Error> {
        let raw: BTreeMap<String, String> = BTreeMap::deserialize(deserializer)?;
        raw.into_iter()
            .map(|(q, c)| {
                Ok((
                    q.parse::<u64>().map_err(D::Error::custom)?,
                    c.parse::<BigInt>().map_err(D::Error::custom)?,
                ))
            })
            .collect()
    }
}

impl CountingProfile {
    pub fn new(ambient: Ambient, n: usize) -> Self {
        CountingProfile { ambient, n, counts: BTreeMap::new() }
    }

    pub fn insert(&mut self, q: u64, count: impl Into<BigInt>) {
        let count = count.into();
        assert!(is_prime(q), "profile keys must be prime");
        assert!(!count.is_negative());
        self.counts.insert(q, count);
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

pub fn profile_affine(
    polys: &[MultiPoly],
    n: usize,
    primes: &[u64],
    budget: u64,
) -> Result<CountingProfile> {
    let mut profile = CountingProfile::new(Ambient::Affine, n);
    for &q in primes {
        profile.insert(q, count_affine_system(polys, n, q, budget)?);
    }
    Ok(profile)
}

pub fn profile_projective(
    polys: &[MultiPoly],
    n: usize,
    primes: &[u64],
    budget: u64,
) -> Result<CountingProfile> {
    let mut profile = CountingProfile::new(Ambient::Projective, n);
    for &q in primes {
        profile.insert(q, count_projective(polys, n, q, budget)?);
    }
    Ok(profile)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InterpolationOutcome {
    Polynomial(IntPoly),
    NotPolynomial(NotPolynomialReason),
}

/// Lagrange interpolation through the first `degree_bound + 1` profile
/// points (ascending primes). The result must have integer coefficients and
/// must reproduce every remaining profile point exactly; otherwise the
/// profile is flagged as not polynomial.
pub fn interpolate_counting_polynomial(
    profile: &CountingProfile,
    degree_bound: usize,
) -> Result<InterpolationOutcome> {
    let pts: Vec<(u64, &BigInt)> = profile.counts.iter().map(|(&q, c)| (q, c)).collect();
    if pts.len() < degree_bound + 1 {
        return Err(Error::TooFewPrimes { needed: degree_bound + 1, got: pts.len() });
    }
    let base = &pts[..degree_bound + 1];
    // Lagrange over the rationals
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); degree_bound + 1];
    for (i, &(qi, ni)) in base.iter().enumerate() {
        // basis polynomial prod_{j != i} (x - q_j) / (q_i - q_j)
        let mut num: Vec<BigRational> = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, &(qj, _)) in base.iter().enumerate() {
            if i == j {
                continue;
            }
            let qj = BigRational::from(BigInt::from(qj));
            // num *= (x - qj)
            let mut next = vec![BigRational::zero(); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &qj;
            }
            num = next;
            denom *= BigRational::from(BigInt::from(qi)) - qj;
        }
        let w = BigRational::from(ni.clone()) / denom;
        for (k, c) in num.iter().enumerate() {
            acc[k] += c * &w;
        }
    }
    let mut coeffs = Vec::with_capacity(acc.len());
    for c in &acc {
        if !c.is_integer() {
            return Ok(InterpolationOutcome::NotPolynomial(
                NotPolynomialReason::NonIntegerCoefficients,
            ));
        }
        coeffs.push(c.to_integer());
    }
    let poly = IntPoly::from_coeffs(Basis::L, coeffs);
    for &(q, n) in &pts[degree_bound + 1..] {
        let got = poly.count_at(&BigInt::from(q));
        if &got != n {
            return Ok(InterpolationOutcome::NotPolynomial(NotPolynomialReason::Mismatch {
                q,
                expected: n.clone(),
                got,
            }));
        }
    }
    Ok(InterpolationOutcome::Polynomial(poly))
}

/// Euler characteristic from a counting profile: the interpolated counting
/// polynomial evaluated at `q = 1`. A non-polynomial profile is an error.
pub fn chi_from_profile(profile: &CountingProfile, degree_bound: usize) -> Result<BigInt> {
    match interpolate_counting_polynomial(profile, degree_bound)? {
        InterpolationOutcome::Polynomial(p) => Ok(p.count_at(&BigInt::one())),
        InterpolationOutcome::NotPolynomial(r) => Err(Error::NotPolynomial(r)),
    }
}

/// Interpolated class of a system's affine zero locus, as a polynomial
/// in `L`, or the not-polynomial witness.
pub fn interpolated_affine_class(
    polys: &[MultiPoly],
    n: usize,
    degree_bound: usize,
    primes: &[u64],
    budget: u64,
) -> Result<InterpolationOutcome> {
    let profile = profile_affine(polys, n, primes, budget)?;
    interpolate_counting_polynomial(&profile, degree_bound)
}
