//! CSM-class polynomials from hyperplane-section Euler characteristics.
//!
//! `G_X(T)` encodes the CSM class in the projective-subspace basis; it is
//! interconvertible with the sequence `chi_k` of Euler characteristics of
//! k-fold general hyperplane sections. The profile is produced by exact
//! point counting of sliced systems over prime fields, interpolation, and
//! evaluation at `q = 1`.
//!
//! "General hyperplanes" are seeded random affine-linear forms. A draw is
//! accepted only if every slice's counting profile is an exact integer
//! polynomial that reproduces the verification primes; otherwise the draw
//! is rejected and redrawn from the same seeded stream. Topologically the
//! sections of a fixed dimension all look alike on a dense open set, but
//! their point counts need not be polynomial in q (a conic section splits
//! or not depending on a quadratic residue), so rejection picks the
//! representatives the counting method applies to. Five independent
//! accepted draws must agree exactly; slices that never produce a
//! polynomial profile (positive-genus sections) surface as errors.

use crate::count::{
    self, count_affine_system, default_primes, interpolate_counting_polynomial, Ambient,
    CountingProfile, InterpolationOutcome,
};
use crate::error::Error;
use crate::graph::Multigraph;
use crate::hyper;
use crate::motive::IntPoly;
use crate::multipoly::MultiPoly;
use crate::poly::ZPoly;
use crate::Result;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

const DRAWS: usize = 5;
const MAX_ATTEMPTS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    DerivedFromCounting,
    /// beyond the variety's dimension, forced to zero without counting
    Forced,
    Given,
}

/// `chi_k = chi(X n H_1 n ... n H_k)` for general hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChiProfile {
    pub chis: Vec<BigInt>,
    pub provenance: Vec<Provenance>,
}

impl ChiProfile {
    pub fn given(chis: Vec<BigInt>) -> Self {
        let provenance = vec![Provenance::Given; chis.len()];
        ChiProfile { chis, provenance }
    }

    pub fn chi_poly(&self) -> ZPoly {
        ZPoly::from_coeffs(self.chis.clone())
    }
}

/// CSM polynomial `G_X(T) = a_0 + a_1 T + ... + a_N T^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsmPolynomial {
    pub poly: ZPoly,
}

impl CsmPolynomial {
    pub fn new(poly: ZPoly) -> Self {
        CsmPolynomial { poly }
    }

    pub fn display(&self) -> String {
        self.poly.display("T")
    }
}

/// `G_X(T) = (T chi_X(T+1) + chi_X(0)) / (T+1)`, exact.
pub fn g_from_chi(profile: &ChiProfile) -> Result<CsmPolynomial> {
    let chi = profile.chi_poly();
    let shifted = chi.shift_var(1);
    let num = ZPoly::var().mul(&shifted).add(&ZPoly::constant(chi.coeff(0)));
    let g = num.div_exact(&ZPoly::from_i64(&[1, 1]))?;
    Ok(CsmPolynomial::new(g))
}

/// `chi_X(T) = (T G_X(T-1) - G_X(0)) / (T-1)`, exact.
pub fn chi_from_g(g: &CsmPolynomial) -> Result<ChiProfile> {
    let shifted = g.poly.shift_var(-1);
    let num = ZPoly::var().mul(&shifted).sub(&ZPoly::constant(g.poly.coeff(0)));
    let chi = num.div_exact(&ZPoly::from_i64(&[-1, 1]))?;
    Ok(ChiProfile::given(chi.coeffs().to_vec()))
}

// ---- slice counting ----

/// Interpolated counting polynomials of the k-fold sliced systems,
/// `k = 0..=ambient`, each as an exact polynomial in q.
#[derive(Debug, Clone)]
pub struct SliceData {
    pub ambient: usize,
    /// `n_q[k]` = counting polynomial of the k-fold slice (variable q)
    pub n_q: Vec<ZPoly>,
    pub chis: Vec<BigInt>,
    pub provenance: Vec<Provenance>,
}

static SLICE_CACHE: Lazy<Mutex<HashMap<String, SliceData>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn slice_cache_key(polys: &[MultiPoly], ambient: usize, seed: u64, budget: u64) -> String {
    let mut parts: Vec<String> = polys.iter().map(|p| format!("{:?}", p.terms())).collect();
    parts.sort();
    format!("{ambient}|{seed}|{budget}|{}", parts.join(";"))
}

fn draw_rng(seed: u64, s: u64, k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        seed ^ s.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ k.wrapping_mul(0xC2B2_AE3D_27D4_EB4F),
    )
}

/// Affine-linear form `c_0 + sum c_j x_j`. The first attempts draw dense
/// coefficients in [0, 1000]; retries switch to a unit constant term
/// (never central modulo any prime) and sparse small coefficients with
/// distinct nonzero values. Sections keep the same topology on a dense
/// open set of forms; sparse structured coefficients make the section
/// arithmetic split (rational) far more often, which is what lets its
/// point count be an actual polynomial in q.
fn draw_form(rng: &mut ChaCha8Rng, n: usize, attempt: usize) -> Vec<i64> {
    let mut form = Vec::with_capacity(n + 1);
    if attempt < 2 {
        for _ in 0..=n {
            form.push(rng.gen_range(0..=1000));
        }
        return form;
    }
    let zero_in = 2 + (attempt % 2) as i64;
    let range = [10i64, 4, 7, 5][attempt % 4];
    form.push(1);
    for _ in 0..n {
        let mut c = if rng.gen_range(0..zero_in) == 0 { 0 } else { rng.gen_range(1..=range) };
        // keep nonzero coefficients pairwise distinct; repeated values are
        // the cheap route to tangent (non-reduced) sections
        let mut guard = 0;
        while c != 0 && form[1..].contains(&c) && guard < 8 {
            c = rng.gen_range(1..=range + 8);
            guard += 1;
        }
        form.push(c);
    }
    form
}

fn form_to_multipoly(form: &[i64], n: usize) -> MultiPoly {
    let mut terms = vec![(vec![0u32; n], BigInt::from(form[0]))];
    for j in 0..n {
        let mut e = vec![0u32; n];
        e[j] = 1;
        terms.push((e, BigInt::from(form[j + 1])));
    }
    MultiPoly::from_terms(n, terms)
}

/// Count the sliced system at one prime: eliminate the linear forms mod q
/// when they stay independent, otherwise count the full system directly.
fn count_slice_at(
    polys: &[MultiPoly],
    n: usize,
    forms: &[Vec<i64>],
    q: u64,
    budget: u64,
) -> Result<u64> {
    if forms.is_empty() {
        return count_affine_system(polys, n, q, budget);
    }
    match eliminate_mod_q(forms, n, q) {
        Some(solution) => {
            let free = n - forms.len();
            let mut size: u128 = 1;
            for _ in 0..free {
                size *= q as u128;
            }
            if size > budget as u128 {
                return Err(Error::BudgetExceeded { needed: size, budget });
            }
            let reduced: Vec<count::SPoly> = polys
                .iter()
                .map(|p| substitute_solution(p, &solution, q))
                .map(|raw| count::SPoly::from_raw(&raw, q))
                .collect();
            Ok(count::count_spolys(&reduced, free, q))
        }
        None => {
            // forms degenerate mod q: count the unreduced system
            let mut system = polys.to_vec();
            system.extend(forms.iter().map(|f| form_to_multipoly(f, n)));
            count_affine_system(&system, n, q, budget)
        }
    }
}

/// Expressions for the pivot variables in terms of the free ones.
struct Elimination {
    /// free variable indices, ascending
    free: Vec<usize>,
    /// pivot variable -> (constant, coefficients over free variables)
    pivots: BTreeMap<usize, (u64, Vec<u64>)>,
}

fn eliminate_mod_q(forms: &[Vec<i64>], n: usize, q: u64) -> Option<Elimination> {
    let k = forms.len();
    // rows: [a_1 .. a_n | c_0], reduced mod q
    let mut m: Vec<Vec<u64>> = forms
        .iter()
        .map(|f| {
            let mut row: Vec<u64> =
                (1..=n).map(|j| f[j].rem_euclid(q as i64) as u64).collect();
            row.push(f[0].rem_euclid(q as i64) as u64);
            row
        })
        .collect();
    let inv = |a: u64| -> u64 { crate::multipoly::pow_mod(a, (q - 2) as u32, q) };
    let mut pivot_cols = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        if row == k {
            break;
        }
        if let Some(r) = (row..k).find(|&r| m[r][col] != 0) {
            m.swap(row, r);
            let f = inv(m[row][col]);
            for x in m[row].iter_mut() {
                *x = *x * f % q;
            }
            for r2 in 0..k {
                if r2 != row && m[r2][col] != 0 {
                    let c = m[r2][col];
                    for j in 0..=n {
                        m[r2][j] = (m[r2][j] + (q - c) * m[row][j]) % q;
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
    }
    if row < k {
        return None;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut pivots = BTreeMap::new();
    for (r, &col) in pivot_cols.iter().enumerate() {
        // x_col + sum_{free j} a_j x_j + c = 0  =>  x_col = -c - sum a_j x_j
        let c = m[r][n];
        let neg = |x: u64| (q - x % q) % q;
        let coeffs: Vec<u64> = free.iter().map(|&j| neg(m[r][j])).collect();
        pivots.insert(col, (neg(c), coeffs));
    }
    Some(Elimination { free, pivots })
}

/// Substitute the pivot expressions into a polynomial; the result lives on
/// the free variables, re-indexed in ascending order.
fn substitute_solution(p: &MultiPoly, sol: &Elimination, q: u64) -> Vec<(Vec<u32>, u64)> {
    let nf = sol.free.len();
    let free_index: BTreeMap<usize, usize> =
        sol.free.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // mod-q sparse polynomials over the free variables
    type Sparse = BTreeMap<Vec<u32>, u64>;
    let add_term = |acc: &mut Sparse, e: Vec<u32>, c: u64, q: u64| {
        if c == 0 {
            return;
        }
        let entry = acc.entry(e).or_insert(0);
        *entry = (*entry + c) % q;
    };
    let mul = |a: &Sparse, b: &Sparse, q: u64| -> Sparse {
        let mut out = Sparse::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                add_term(&mut out, e, ca * cb % q, q);
            }
        }
        out
    };
    let mut total = Sparse::new();
    for (exps, coeff) in p.terms() {
        let c = crate::multipoly::reduce_bigint(coeff, q);
        let mut term = Sparse::new();
        term.insert(vec![0; nf], c);
        for (var, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if let Some(&fi) = free_index.get(&var) {
                let mut mono = vec![0u32; nf];
                mono[fi] = e;
                let mut shifted = Sparse::new();
                for (k, v) in &term {
                    let ne: Vec<u32> = k.iter().zip(&mono).map(|(x, y)| x + y).collect();
                    shifted.insert(ne, *v);
                }
                term = shifted;
            } else {
                let (c0, coeffs) = &sol.pivots[&var];
                let mut lin = Sparse::new();
                add_term(&mut lin, vec![0; nf], *c0, q);
                for (fi, &a) in coeffs.iter().enumerate() {
                    let mut mono = vec![0u32; nf];
                    mono[fi] = 1;
                    add_term(&mut lin, mono, a, q);
                }
                let mut pw = Sparse::new();
                pw.insert(vec![0; nf], 1);
                for _ in 0..e {
                    pw = mul(&pw, &lin, q);
                }
                term = mul(&term, &pw, q);
            }
        }
        for (e, v) in term {
            add_term(&mut total, e, v, q);
        }
    }
    total.into_iter().filter(|&(_, c)| c != 0).collect()
}

/// The slice counting polynomial for one seed: draws are accepted when
/// their profile interpolates to an exact polynomial reproducing all
/// verification primes, and the seed's value is the first polynomial
/// confirmed by two accepted draws. Degenerate sections that happen to be
/// polynomial (tangent slices) almost never confirm.
/// Counting polynomial `N_k(q)` of the k-fold generic hyperplane slice of
/// the system's zero locus, with exact structural reductions applied
/// before any sampling:
///
/// - variables absent from the system are eliminated by the flag itself
///   (`Xhat x A^d` sliced generically is a sliced `Xhat` times a smaller
///   affine space);
/// - a bare variable equation restricts to a coordinate hyperplane;
/// - a polynomial divisible by a variable splits the locus into a union,
///   handled by inclusion-exclusion.
///
/// Only monomial-free all-variables-active systems reach the seeded
/// hyperplane sampler. Without these reductions sparse random flags are
/// systematically non-generic against coordinate strata.
fn slice_polynomial(
    polys: &[MultiPoly],
    n: usize,
    k: usize,
    seed: u64,
    s: usize,
    budget: u64,
) -> Result<ZPoly> {
    // strip zero polynomials (no constraint) and repeated factors of the
    // set-theoretic locus
    let mut system: Vec<MultiPoly> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    system.sort_by(|a, b| format!("{:?}", a.terms()).cmp(&format!("{:?}", b.terms())));
    system.dedup();
    if system.iter().any(MultiPoly::is_nonzero_constant) {
        return Ok(ZPoly::zero());
    }
    if system.is_empty() {
        // all of A^n: the slice is A^{n-k}
        return Ok(ZPoly::monomial(BigInt::one(), n - k));
    }
    // dummy variables: not in the support of any polynomial
    let mut active = vec![false; n];
    for p in &system {
        for (e, _) in p.terms() {
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    active[i] = true;
                }
            }
        }
    }
    let m = active.iter().filter(|&&a| a).count();
    if m < n {
        let keep: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
        let compressed: Vec<MultiPoly> = system
            .iter()
            .map(|p| {
                let terms = p
                    .terms()
                    .iter()
                    .map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), c.clone()))
                    .collect();
                MultiPoly::from_terms(m, terms)
            })
            .collect();
        let d = n - m;
        let k_inner = k.saturating_sub(d);
        let tail = d.saturating_sub(k);
        let inner = slice_polynomial(&compressed, m, k_inner, seed, s, budget)?;
        return Ok(inner.mul(&ZPoly::monomial(BigInt::one(), tail)));
    }
    // a generic codimension-k flag misses any locus of dimension < k
    if k >= n {
        return Ok(ZPoly::zero());
    }
    // bare variable equation: restrict to the coordinate hyperplane
    if let Some(idx) = system.iter().position(|p| {
        p.terms().len() == 1 && p.terms()[0].0.iter().sum::<u32>() == 1
    }) {
        let var = system[idx].terms()[0].0.iter().position(|&x| x > 0).unwrap();
        let reduced: Vec<MultiPoly> = system
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, p)| substitute_zero(p, var))
            .collect();
        return slice_polynomial(&reduced, n - 1, k, seed, s, budget);
    }
    // a linear equation with a unit coefficient restricts exactly to a
    // coordinate-change of A^{n-1}
    if let Some((idx, var)) = system.iter().enumerate().find_map(|(i, p)| {
        if p.total_degree() != Some(1) {
            return None;
        }
        p.terms()
            .iter()
            .find(|(e, c)| {
                e.iter().sum::<u32>() == 1
                    && (c == &BigInt::one() || c == &(-BigInt::one()))
            })
            .map(|(e, _)| (i, e.iter().position(|&x| x > 0).unwrap()))
    }) {
        let reduced: Vec<MultiPoly> = system
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, q)| substitute_linear(q, &system[idx], var))
            .collect();
        return slice_polynomial(&reduced, n - 1, k, seed, s, budget);
    }
    // product with disjoint variable blocks splits the locus into a union
    for (idx, p) in system.iter().enumerate() {
        if let Some((g, h)) = split_disjoint_factors(p) {
            let rest: Vec<MultiPoly> = system
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != idx)
                .map(|(_, q)| q.clone())
                .collect();
            let mut with_g = rest.clone();
            with_g.push(g.clone());
            let mut with_h = rest.clone();
            with_h.push(h.clone());
            let mut with_both = rest;
            with_both.push(g);
            with_both.push(h);
            let a = slice_polynomial(&with_g, n, k, seed, s, budget)?;
            let b = slice_polynomial(&with_h, n, k, seed, s, budget)?;
            let c = slice_polynomial(&with_both, n, k, seed, s, budget)?;
            return Ok(a.add(&b).sub(&c));
        }
    }
    // variable-divisible polynomial: union via inclusion-exclusion
    for (idx, p) in system.iter().enumerate() {
        for var in 0..n {
            if let Some(g) = divide_by_variable(p, var) {
                let rest: Vec<MultiPoly> = system
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != idx)
                    .map(|(_, q)| q.clone())
                    .collect();
                let mut with_hyperplane = rest.clone();
                with_hyperplane.push(MultiPoly::var(n, var));
                let mut with_factor = rest.clone();
                with_factor.push(g.clone());
                let mut with_both = rest;
                with_both.push(MultiPoly::var(n, var));
                with_both.push(g);
                let a = slice_polynomial(&with_hyperplane, n, k, seed, s, budget)?;
                let b = slice_polynomial(&with_factor, n, k, seed, s, budget)?;
                let c = slice_polynomial(&with_both, n, k, seed, s, budget)?;
                return Ok(a.add(&b).sub(&c));
            }
        }
    }
    if k == 0 {
        // systems on disjoint variable blocks count multiplicatively
        if let Some(blocks) = poly_blocks(&system, n) {
            if blocks.len() > 1 {
                let mut acc = ZPoly::one();
                for (vars, polys) in blocks {
                    let m = vars.len();
                    let compressed: Vec<MultiPoly> = polys
                        .iter()
                        .map(|p| {
                            let terms = p
                                .terms()
                                .iter()
                                .map(|(e, c)| {
                                    (vars.iter().map(|&i| e[i]).collect(), c.clone())
                                })
                                .collect();
                            MultiPoly::from_terms(m, terms)
                        })
                        .collect();
                    acc = acc.mul(&slice_polynomial(&compressed, m, 0, seed, s, budget)?);
                }
                return Ok(acc);
            }
        }
        // no hyperplanes: count the system itself
        let p = slice_polynomial_one_draw(&system, n, 0, seed, s, budget)?;
        return Ok(ZPoly::from_coeffs(p.coeffs().to_vec()));
    }
    if system.len() == 1 {
        if let Some(exact) = quadric_slice_polynomial(&system[0], n, k) {
            return Ok(exact);
        }
    }
    let p = slice_polynomial_one_draw(&system, n, k, seed, s, budget)?;
    Ok(ZPoly::from_coeffs(p.coeffs().to_vec()))
}

/// Exact generic-slice counting polynomial for a single polynomial of
/// degree at most two. A quadric restricted to a generic affine flag of
/// dimension `m` is classified by the rank of its quadratic part and the
/// rank of the bordered matrix, both capped by the flag: restricted rank
/// `r = min(m, R)`, bordered rank `min(m + 1, rho)`. The split
/// representative's count is the one whose value at q = 1 is the complex
/// Euler characteristic, which is what the chi profile needs.
fn quadric_slice_polynomial(f: &MultiPoly, n: usize, k: usize) -> Option<ZPoly> {
    let deg = f.total_degree()?;
    if deg > 2 || k > n {
        return None;
    }
    let m = n - k; // flag dimension
    if deg == 1 {
        // affine hyperplane section: A^{m-1}
        return Some(ZPoly::monomial(BigInt::one(), m - 1));
    }
    if deg == 0 {
        return Some(ZPoly::zero()); // nonzero constant, empty locus
    }
    // 2f = y^T A y + b^T y + c with integer A, b, c
    let mut a = vec![vec![BigInt::zero(); n]; n];
    let mut b = vec![BigInt::zero(); n];
    let mut c = BigInt::zero();
    for (e, coeff) in f.terms() {
        let support: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
        let total: u32 = e.iter().sum();
        match (total, support.len()) {
            (0, _) => c = coeff * 2,
            (1, _) => b[support[0]] = coeff * 2,
            (2, 1) => {
                let i = support[0];
                a[i][i] = coeff * 2;
            }
            (2, 2) => {
                let (i, j) = (support[0], support[1]);
                a[i][j] = coeff.clone();
                a[j][i] = coeff.clone();
            }
            _ => return None,
        }
    }
    let rank_a = crate::linalg::rank(&a);
    // bordered matrix [[A, b/2],[b^T/2, c]] scaled by 2 to stay integral
    let mut bordered: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut row: Vec<BigInt> = a[i].iter().map(|x| x * 2).collect();
        row.push(b[i].clone());
        bordered.push(row);
    }
    let mut last: Vec<BigInt> = b.clone();
    last.push(c * 2);
    bordered.push(last);
    let rank_m = crate::linalg::rank(&bordered);
    if rank_a == 0 {
        return None; // degenerate input; leave to the sampler
    }
    let r = rank_a.min(m);
    let rho = rank_m.min(m + 1);
    let q = |e: usize| ZPoly::monomial(BigInt::one(), e);
    let tail = m - r; // affine cylinder factor
    let core = if rho == r + 2 {
        // paraboloid: a graph over A^{m-1}, no cylinder factor applies
        return Some(q(m - 1));
    } else if rho == r + 1 {
        // central quadric at a nonzero level, split form
        if r % 2 == 0 {
            let s_half = r / 2;
            q(r - 1).sub(&q(s_half - 1))
        } else {
            q(r - 1).add(&q(r / 2))
        }
    } else {
        // cone level
        if r % 2 == 0 {
            let s_half = r / 2;
            q(r - 1).add(&q(s_half)).sub(&q(s_half - 1))
        } else {
            q(r - 1)
        }
    };
    Some(core.mul(&q(tail)))
}

/// Substitute the solution of the linear equation `lin = 0` for `var`
/// (whose coefficient is +-1) into `p`, dropping that variable.
fn substitute_linear(p: &MultiPoly, lin: &MultiPoly, var: usize) -> MultiPoly {
    let n = p.n_vars();
    // var = -sum(других терминов)/coeff, coeff in {1, -1}
    let coeff = lin
        .terms()
        .iter()
        .find(|(e, _)| e[var] == 1 && e.iter().sum::<u32>() == 1)
        .map(|(_, c)| c.clone())
        .expect("unit coefficient");
    // expression for var over the remaining variables (n-1 of them)
    let expr_terms: Vec<(Vec<u32>, BigInt)> = lin
        .terms()
        .iter()
        .filter(|(e, _)| e[var] == 0)
        .map(|(e, c)| {
            let ne: Vec<u32> =
                e.iter().enumerate().filter(|&(i, _)| i != var).map(|(_, &x)| x).collect();
            (ne, -c / &coeff)
        })
        .collect();
    let expr = MultiPoly::from_terms(n - 1, expr_terms);
    let mut acc = MultiPoly::zero(n - 1);
    for (e, c) in p.terms() {
        let ne: Vec<u32> =
            e.iter().enumerate().filter(|&(i, _)| i != var).map(|(_, &x)| x).collect();
        let mut term = MultiPoly::from_terms(n - 1, vec![(ne, c.clone())]);
        for _ in 0..e[var] {
            term = term.mul(&expr);
        }
        acc = acc.add(&term);
    }
    acc
}

/// Try to write `p = g(x_A) h(x_B)` with disjoint variable blocks.
/// Terms are grouped by their `A`-part; the split exists exactly when all
/// cofactors are proportional. Supports are tiny, so every candidate
/// block is tried.
fn split_disjoint_factors(p: &MultiPoly) -> Option<(MultiPoly, MultiPoly)> {
    use num_rational::BigRational;
    let n = p.n_vars();
    let support: Vec<usize> = (0..n)
        .filter(|&i| p.terms().iter().any(|(e, _)| e[i] > 0))
        .collect();
    if support.len() < 2 || support.len() > 12 {
        return None;
    }
    for mask in 1u32..((1 << support.len()) - 1) {
        let in_block: Vec<bool> = (0..n)
            .map(|i| {
                support.iter().position(|&v| v == i).map_or(false, |pos| mask >> pos & 1 == 1)
            })
            .collect();
        let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<(Vec<u32>, BigInt)>> =
            std::collections::BTreeMap::new();
        for (e, c) in p.terms() {
            let mu: Vec<u32> = (0..n).map(|i| if in_block[i] { e[i] } else { 0 }).collect();
            let rest: Vec<u32> = (0..n).map(|i| if in_block[i] { 0 } else { e[i] }).collect();
            groups.entry(mu).or_default().push((rest, c.clone()));
        }
        if groups.len() < 2 {
            continue;
        }
        let cofactors: Vec<(Vec<u32>, MultiPoly)> = groups
            .into_iter()
            .map(|(mu, terms)| (mu, MultiPoly::from_terms(n, terms)))
            .collect();
        let h0 = &cofactors[0].1;
        let base = &h0.terms()[0];
        let mut g_terms: Vec<(Vec<u32>, BigInt)> = Vec::new();
        let mut ok = true;
        for (mu, cf) in &cofactors {
            if cf.terms().len() != h0.terms().len() {
                ok = false;
                break;
            }
            let lead = &cf.terms()[0];
            if lead.0 != base.0 {
                ok = false;
                break;
            }
            let ratio = BigRational::new(lead.1.clone(), base.1.clone());
            let matches = cf
                .terms()
                .iter()
                .zip(h0.terms())
                .all(|((ea, ca), (eb, cb))| {
                    ea == eb && BigRational::new(ca.clone(), cb.clone()) == ratio
                });
            if !matches || !ratio.is_integer() {
                ok = false;
                break;
            }
            g_terms.push((mu.clone(), ratio.to_integer()));
        }
        if ok {
            let g = MultiPoly::from_terms(n, g_terms);
            return Some((g, h0.clone()));
        }
    }
    None
}

/// Partition the system into groups of polynomials with pairwise disjoint
/// variable supports, each with its sorted variable list. Returns `None`
/// when any variable is unused (the dummy reduction must run first).
fn poly_blocks(system: &[MultiPoly], n: usize) -> Option<Vec<(Vec<usize>, Vec<MultiPoly>)>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let support = |p: &MultiPoly| -> Vec<usize> {
        (0..n).filter(|&i| p.terms().iter().any(|(e, _)| e[i] > 0)).collect()
    };
    for p in system {
        let vars = support(p);
        for &v in &vars {
            let (a, b) = (find(&mut parent, vars[0]), find(&mut parent, v));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, (Vec<usize>, Vec<MultiPoly>)> =
        std::collections::BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        blocks.entry(r).or_default().0.push(v);
    }
    for p in system {
        let vars = support(p);
        if vars.is_empty() {
            return None;
        }
        let r = find(&mut parent, vars[0]);
        blocks.get_mut(&r).unwrap().1.push(p.clone());
    }
    if blocks.values().any(|(_, ps)| ps.is_empty()) {
        return None; // variable in no polynomial: dummy reduction missing
    }
    Some(blocks.into_values().collect())
}

fn substitute_zero(p: &MultiPoly, var: usize) -> MultiPoly {
    let n = p.n_vars();
    let terms = p
        .terms()
        .iter()
        .filter(|(e, _)| e[var] == 0)
        .map(|(e, c)| {
            let ne: Vec<u32> =
                e.iter().enumerate().filter(|&(i, _)| i != var).map(|(_, &x)| x).collect();
            (ne, c.clone())
        })
        .collect();
    MultiPoly::from_terms(n - 1, terms)
}

/// `Some(g)` when `p = t_var * g` exactly.
fn divide_by_variable(p: &MultiPoly, var: usize) -> Option<MultiPoly> {
    if p.is_zero() || p.terms().iter().any(|(e, _)| e[var] == 0) {
        return None;
    }
    let terms = p
        .terms()
        .iter()
        .map(|(e, c)| {
            let mut ne = e.clone();
            ne[var] -= 1;
            (ne, c.clone())
        })
        .collect();
    Some(MultiPoly::from_terms(p.n_vars(), terms))
}

fn slice_polynomial_one_draw(
    polys: &[MultiPoly],
    n: usize,
    k: usize,
    seed: u64,
    s: usize,
    budget: u64,
) -> Result<IntPoly> {
    // proper slices of a hypersurface have dimension n - 1 - k; the empty
    // system slices to all of A^{n-k}
    let degree_bound = if polys.is_empty() { n - k } else { (n - k).saturating_sub(1) };
    if k + 1 == n && polys.len() == 1 && !polys[0].is_constant() {
        if let Some(p) = anchored_line_polynomial(&polys[0], n, seed, s, budget)? {
            return Ok(p);
        }
    }
    let mut rng = draw_rng(seed, s as u64, k as u64);
    let mut last_reason = String::new();
    let mut tallies: Vec<(IntPoly, usize)> = Vec::new();
    for attempt in 0..MAX_ATTEMPTS {
        let forms: Vec<Vec<i64>> = (0..k).map(|_| draw_form(&mut rng, n, attempt)).collect();
        // reject linearly dependent draws outright
        let rows: Vec<Vec<BigInt>> = forms
            .iter()
            .map(|f| f[1..].iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        if k > 0 && crate::linalg::rank(&rows) < k {
            continue;
        }
        if k > 0 && !flag_keeps_degrees(polys, n, &forms) {
            continue;
        }
        // extra points beyond the fit: cheap low-dimensional sweeps can
        // afford many verification primes, which is what rules out
        // residue-symbol coincidences masquerading as polynomials
        let vars = n - k;
        let extra = match vars {
            0..=3 => 6,
            4 => 4,
            _ => 3,
        };
        let primes = default_primes(degree_bound + extra - 2, vars, budget)?;
        let mut profile = CountingProfile::new(Ambient::Affine, n - k);
        let mut failed = None;
        for &q in &primes {
            match count_slice_at(polys, n, &forms, q, budget) {
                Ok(c) => profile.insert(q, c),
                Err(e @ Error::BudgetExceeded { .. }) => return Err(e),
                Err(e) => {
                    failed = Some(e.to_string());
                    break;
                }
            }
        }
        if let Some(reason) = failed {
            last_reason = reason;
            continue;
        }
        let confirm = if vars <= 4 { 3 } else { 2 };
        match windowed_interpolation(&profile, degree_bound)? {
            InterpolationOutcome::Polynomial(p) => {
                if k == 0 {
                    return Ok(p);
                }
                if let Some(t) = tallies.iter_mut().find(|(q, _)| *q == p) {
                    t.1 += 1;
                    if t.1 >= confirm {
                        return Ok(p);
                    }
                } else {
                    tallies.push((p, 1));
                }
            }
            InterpolationOutcome::NotPolynomial(r) => {
                last_reason = r.to_string();
            }
        }
    }
    Err(Error::SliceNotCountable { k, attempts: MAX_ATTEMPTS, last: last_reason })
}

/// Restrict a polynomial to the parametrized line `x1 + t d`, exactly.
fn restrict_to_line(p: &MultiPoly, x1: &[i64], d: &[i64]) -> ZPoly {
    let mut acc = ZPoly::zero();
    for (exps, c) in p.terms() {
        let mut term = ZPoly::constant(c.clone());
        for (var, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let lin = ZPoly::from_coeffs(vec![BigInt::from(x1[var]), BigInt::from(d[var])]);
            term = term.mul(&lin.pow(e));
        }
        acc = acc.add(&term);
    }
    acc
}

/// Squarefree over Q: gcd(f, f') is constant. Small degrees only.
fn is_squarefree(f: &ZPoly) -> bool {
    use num_rational::BigRational;
    let to_rat = |z: &ZPoly| -> Vec<BigRational> {
        z.coeffs().iter().map(|c| BigRational::from(c.clone())).collect()
    };
    let mut a = to_rat(f);
    let mut b = to_rat(&f.derivative());
    let deg = |v: &Vec<BigRational>| -> Option<usize> {
        v.iter().rposition(|c| !num_traits::Zero::is_zero(c))
    };
    loop {
        let (da, db) = (deg(&a), deg(&b));
        match (da, db) {
            (_, None) => return da.map_or(true, |d| d == 0) || b.is_empty() && true,
            (None, Some(d)) => return d == 0,
            (Some(da), Some(db)) if da < db => std::mem::swap(&mut a, &mut b),
            (Some(da), Some(db)) => {
                // a -= lead(a)/lead(b) x^{da-db} b
                let factor = a[da].clone() / b[db].clone();
                for i in 0..=db {
                    let v = &b[i] * &factor;
                    a[i + da - db] -= v;
                }
                a[da] = num_traits::Zero::zero();
            }
        }
    }
}

/// Seeded search for rational points of the system in a small box.
fn rational_points(polys: &[MultiPoly], n: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5_5A5A_DEAD_BEEF);
    let mut points: Vec<Vec<i64>> = Vec::new();
    for _ in 0..6000 {
        if points.len() >= 48 {
            break;
        }
        let cand: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
        let big: Vec<BigInt> = cand.iter().map(|&x| BigInt::from(x)).collect();
        let on = polys.iter().all(|p| {
            p.terms()
                .iter()
                .fold(BigInt::zero(), |acc, (e, c)| {
                    let mut m = c.clone();
                    for (i, &exp) in e.iter().enumerate() {
                        for _ in 0..exp {
                            m *= &big[i];
                        }
                    }
                    acc + m
                })
                .is_zero()
        });
        if on && !points.contains(&cand) {
            points.push(cand);
        }
    }
    points
}

/// Dimension-zero slices (codimension n-1 flags) of a hypersurface: a
/// random line almost never meets the zero locus in rational points, so
/// the line is anchored on two rational points of the hypersurface
/// instead. Each quadratic factor then has a rational root, hence splits.
/// Transversality is enforced exactly: the restriction must keep full
/// degree and be squarefree.
fn anchored_line_polynomial(
    poly: &MultiPoly,
    n: usize,
    seed: u64,
    s: usize,
    budget: u64,
) -> Result<Option<IntPoly>> {
    let points = rational_points(std::slice::from_ref(poly), n, seed);
    if points.len() < 2 {
        return Ok(None);
    }
    let mut rng = draw_rng(seed, s as u64, (n - 1) as u64);
    let mut last_reason = String::new();
    let mut tallies: Vec<(IntPoly, usize)> = Vec::new();
    for attempt in 0..MAX_ATTEMPTS {
        // alternate between a two-anchor chord and a one-anchor line with
        // a random direction; chords through one component of a reducible
        // or linear locus lie inside it, where only the second mode works
        let i = rng.gen_range(0..points.len());
        let x1 = points[i].clone();
        let d: Vec<i64> = if attempt % 2 == 0 {
            let j = rng.gen_range(0..points.len());
            points[j].iter().zip(&x1).map(|(a, b)| a - b).collect()
        } else {
            (0..n).map(|_| rng.gen_range(-6..=6)).collect()
        };
        if d.iter().all(|&x| x == 0) {
            continue;
        }
        let x1 = &x1;
        let f = restrict_to_line(poly, x1, &d);
        if f.degree().map(|d| d as u32) != poly.total_degree() || !is_squarefree(&f) {
            continue;
        }
        let system = [MultiPoly::from_terms(
            1,
            f.coeffs()
                .iter()
                .enumerate()
                .map(|(e, c)| (vec![e as u32], c.clone()))
                .collect(),
        )];
        let primes = default_primes(4, 1, budget)?;
        let mut profile = CountingProfile::new(Ambient::Affine, 1);
        for &q in &primes {
            profile.insert(q, count_affine_system(&system, 1, q, budget)?);
        }
        match windowed_interpolation(&profile, 0)? {
            InterpolationOutcome::Polynomial(p) => {
                if let Some(t) = tallies.iter_mut().find(|(q, _)| *q == p) {
                    t.1 += 1;
                    if t.1 >= 2 {
                        return Ok(Some(p));
                    }
                } else {
                    tallies.push((p, 1));
                }
            }
            InterpolationOutcome::NotPolynomial(r) => last_reason = r.to_string(),
        }
    }
    let _ = last_reason;
    Ok(None) // let the caller fall back to plain form draws
}

/// A generic flag restricts every polynomial without dropping its total
/// degree (the leading form cannot vanish on a generic direction space).
/// Degree drops mean the flag is parallel to an asymptotic direction and
/// the section has the wrong topology, so such draws are rejected. The
/// check runs the elimination modulo two large primes; coefficients are
/// tiny compared to them, so a drop mod both primes is a drop over Q.
fn flag_keeps_degrees(polys: &[MultiPoly], n: usize, forms: &[Vec<i64>]) -> bool {
    for &q in &[32749u64, 65521] {
        let sol = match eliminate_mod_q(forms, n, q) {
            Some(s) => s,
            None => return false,
        };
        for p in polys {
            let reduced = substitute_solution(p, &sol, q);
            let deg = reduced.iter().map(|(e, _)| e.iter().sum::<u32>()).max();
            let orig = p.total_degree();
            if deg < orig {
                return false;
            }
        }
    }
    true
}

/// Polynomial countability is an almost-all-primes property: rational
/// points of a slice can degenerate modulo small primes. Try the fit with
/// up to two of the smallest primes dropped; every kept prime beyond the
/// fit must still match exactly, with at least two of them.
fn windowed_interpolation(
    profile: &CountingProfile,
    degree_bound: usize,
) -> Result<InterpolationOutcome> {
    let keys: Vec<u64> = profile.counts.keys().copied().collect();
    let verify_needed = (keys.len().saturating_sub(degree_bound + 1 + 2)).clamp(2, 4);
    let mut last = None;
    for drop in 0..=2usize {
        if keys.len() < drop + degree_bound + 1 + verify_needed {
            break;
        }
        let mut sub = CountingProfile::new(profile.ambient, profile.n);
        for &q in &keys[drop..] {
            sub.counts.insert(q, profile.counts[&q].clone());
        }
        match interpolate_counting_polynomial(&sub, degree_bound)? {
            InterpolationOutcome::Polynomial(p) => {
                return Ok(InterpolationOutcome::Polynomial(p))
            }
            InterpolationOutcome::NotPolynomial(r) => last = Some(r),
        }
    }
    Ok(InterpolationOutcome::NotPolynomial(last.expect("at least one window attempted")))
}

/// Slice counting polynomials for `k = 0..=ambient`, with five accepted
/// seeded draws required to agree for every k >= 1.
pub fn slice_data(polys: &[MultiPoly], ambient: usize, seed: u64, budget: u64) -> Result<SliceData> {
    let key = slice_cache_key(polys, ambient, seed, budget);
    if let Some(d) = SLICE_CACHE.lock().unwrap().get(&key) {
        return Ok(d.clone());
    }
    let n = ambient;
    let empty_variety = polys.iter().any(MultiPoly::is_nonzero_constant);
    let dim_bound: isize = if empty_variety {
        -1
    } else if polys.is_empty() {
        n as isize
    } else {
        n as isize - 1
    };
    let mut n_q = Vec::with_capacity(n + 1);
    let mut chis = Vec::with_capacity(n + 1);
    let mut provenance = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if (k as isize) > dim_bound {
            n_q.push(ZPoly::zero());
            chis.push(BigInt::zero());
            provenance.push(Provenance::Forced);
            continue;
        }
        let draws = if k == 0 { 1 } else { DRAWS };
        let mut agreed: Option<ZPoly> = None;
        for s in 0..draws {
            let p = slice_polynomial(polys, n, k, seed, s, budget)?;
            match &agreed {
                None => agreed = Some(p),
                Some(prev) if *prev == p => {}
                Some(prev) => {
                    return Err(Error::SeedDisagreement(format!(
                        "slice k={k}: draw {s} gave {}, earlier draws gave {}",
                        p.display("q"),
                        prev.display("q")
                    )));
                }
            }
        }
        let z = agreed.unwrap();
        chis.push(z.eval(&BigInt::one()));
        n_q.push(z);
        provenance.push(Provenance::DerivedFromCounting);
    }
    let data = SliceData { ambient: n, n_q, chis, provenance };
    SLICE_CACHE.lock().unwrap().insert(key, data.clone());
    Ok(data)
}

/// The chi profile of the system's zero locus by slice counting.
pub fn chi_profile_by_counting(
    polys: &[MultiPoly],
    ambient: usize,
    seed: u64,
    budget: u64,
) -> Result<ChiProfile> {
    let data = slice_data(polys, ambient, seed, budget)?;
    Ok(ChiProfile { chis: data.chis, provenance: data.provenance })
}

// ---- the graph polynomial invariant ----

#[derive(Debug, Clone)]
pub struct CGammaReport {
    pub edges: usize,
    pub g_ambient: CsmPolynomial,
    pub g_hypersurface: CsmPolynomial,
    pub c_gamma: CsmPolynomial,
    pub chi_profile: ChiProfile,
    pub monic_of_degree_n: bool,
}

/// `C_G(T) = G_{A^n}(T) - G_{Xhat_G}(T)`, with the hypersurface CSM
/// polynomial derived from the counting profile.
pub fn c_gamma(g: &Multigraph, seed: u64, budget: u64) -> Result<CGammaReport> {
    let n = g.edge_count();
    let psi = hyper::kirchhoff_polynomial(g);
    let system: Vec<MultiPoly> = vec![psi];
    let profile = chi_profile_by_counting(&system, n, seed, budget)?;
    let g_hyp = g_from_chi(&profile)?;
    let g_ambient = CsmPolynomial::new(ZPoly::from_i64(&[1, 1]).pow(n as u32));
    let c = g_ambient.poly.sub(&g_hyp.poly);
    let monic = c.degree() == Some(n) && c.coeff(n).is_one() || (n == 0 && c.is_zero());
    Ok(CGammaReport {
        edges: n,
        g_ambient,
        g_hypersurface: g_hyp,
        c_gamma: CsmPolynomial::new(c),
        chi_profile: profile,
        monic_of_degree_n: monic,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FeynmanRuleReport {
    pub edges: usize,
    pub c_prime_at_zero: BigInt,
    pub chi_x: BigInt,
    /// `C'(0) = n - chi(X)`
    pub derivative_identity: bool,
    /// `chi(X) = sum_{k >= 1} chi_k`
    pub chi_section_sum: BigInt,
    pub section_identity: bool,
}

pub fn feynman_rule_checks(g: &Multigraph, seed: u64, budget: u64) -> Result<FeynmanRuleReport> {
    let n = g.edge_count();
    let rep = c_gamma(g, seed, budget)?;
    let c_prime_at_zero = rep.c_gamma.poly.derivative().coeff(0);
    let chi_x = match hyper::projective_class(g, budget)? {
        hyper::ClassOutcome::Class(x) => x.euler_characteristic(),
        hyper::ClassOutcome::Undetermined { .. } => hyper::chi_of_x_by_counting(g, budget)?,
    };
    let chi_section_sum: BigInt = rep.chi_profile.chis.iter().skip(1).sum();
    Ok(FeynmanRuleReport {
        edges: n,
        derivative_identity: c_prime_at_zero == BigInt::from(n as i64) - &chi_x,
        section_identity: chi_section_sum == chi_x,
        c_prime_at_zero,
        chi_x,
        chi_section_sum,
    })
}

// ---- embedded positivity ----

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddedVerdict {
    pub passes: bool,
    /// first negative coefficient of `(T+1) G(T)`, as (degree, value)
    pub witness: Option<(usize, BigInt)>,
}

/// Necessary condition for an embedded F1-structure: all coefficients of
/// `(T+1) G_X(T)` nonnegative.
pub fn embedded_f1_check(g: &CsmPolynomial) -> EmbeddedVerdict {
    let prod = ZPoly::from_i64(&[1, 1]).mul(&g.poly);
    match prod.first_negative_coeff() {
        None => EmbeddedVerdict { passes: true, witness: None },
        Some(w) => EmbeddedVerdict { passes: false, witness: Some(w) },
    }
}

// ---- q-deformed class ----

#[derive(Debug, Clone)]
pub struct QDeformedReport {
    /// counting polynomial of the k-fold slice, in q
    pub n_qt: Vec<ZPoly>,
    /// coefficient of T^k in G(q, T), as a polynomial in q
    pub g_qt: Vec<ZPoly>,
    /// G(q, T) in T at each requested q
    pub table: Vec<(u64, ZPoly)>,
    /// G(1, T) coefficientwise equals the counting-derived G(T)
    pub limit_matches: bool,
}

/// `G(q,T) = (T N(q,T) + N(q)) / (T+1)` with
/// `N(q,T) = sum_k N_k(q) T^k`; exact division over Z[q], and the q -> 1
/// limit is checked against the chi-profile route.
pub fn q_deformed_class(
    polys: &[MultiPoly],
    ambient: usize,
    seed: u64,
    budget: u64,
    q_list: &[u64],
) -> Result<QDeformedReport> {
    let data = slice_data(polys, ambient, seed, budget)?;
    let n = ambient;
    // the counting series enters with argument T+1, exactly as the chi
    // polynomial does in the section-to-CSM conversion; with the raw
    // argument the numerator is not divisible by (T+1)
    let mut shifted = vec![ZPoly::zero(); n + 1];
    for (k, nk) in data.n_q.iter().enumerate() {
        for (j, sj) in shifted.iter_mut().enumerate().take(k + 1) {
            let b = num_integer::binomial(BigInt::from(k), BigInt::from(j));
            *sj = sj.add(&nk.scale(&b));
        }
    }
    // numerator = T * N(q, T+1) + N(q, 0)
    let mut numer: Vec<ZPoly> = Vec::with_capacity(n + 2);
    numer.push(data.n_q[0].clone());
    numer.extend(shifted);
    // synthetic division by (T + 1) over Z[q]
    let mut g_qt = vec![ZPoly::zero(); n + 1];
    let mut carry = numer[n + 1].clone();
    for k in (0..=n).rev() {
        g_qt[k] = carry.clone();
        carry = numer[k].sub(&carry);
    }
    if !carry.is_zero() {
        return Err(Error::NonExactDivision(
            "q-deformed numerator is not divisible by (T+1)".into(),
        ));
    }
    let g_direct = g_from_chi(&ChiProfile {
        chis: data.chis.clone(),
        provenance: data.provenance.clone(),
    })?;
    let at_one: Vec<BigInt> = g_qt.iter().map(|c| c.eval(&BigInt::one())).collect();
    let limit_matches = ZPoly::from_coeffs(at_one) == g_direct.poly;
    let table = q_list
        .iter()
        .map(|&q| {
            let coeffs: Vec<BigInt> =
                g_qt.iter().map(|c| c.eval(&BigInt::from(q))).collect();
            (q, ZPoly::from_coeffs(coeffs))
        })
        .collect();
    Ok(QDeformedReport { n_qt: data.n_q, g_qt, table, limit_matches })
}

/// Kirchhoff system of a disjoint union, for the multiplicativity checks.
pub fn disjoint_union(a: &Multigraph, b: &Multigraph) -> Multigraph {
    let mut edges = a.edges().to_vec();
    for &(t, h) in b.edges() {
        edges.push((t + a.vertex_count(), h + a.vertex_count()));
    }
    Multigraph::new(a.vertex_count() + b.vertex_count(), edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{banana, cycle, path, single_edge, single_loop};
    use crate::DEFAULT_BUDGET;

    fn z(coeffs: &[i64]) -> ZPoly {
        ZPoly::from_i64(coeffs)
    }

    #[test]
    fn chi_g_conversions() {
        // G = (T+1)^3 <-> chi = 1 + T + T^2 + T^3
        let g = CsmPolynomial::new(z(&[1, 1]).pow(3));
        let chi = chi_from_g(&g).unwrap();
        assert_eq!(chi.chi_poly(), z(&[1, 1, 1, 1]));
        let back = g_from_chi(&chi).unwrap();
        assert_eq!(back.poly, g.poly);
        // a point: G = 1, chi = (1, 0, 0, ...)
        let point = CsmPolynomial::new(z(&[1]));
        assert_eq!(chi_from_g(&point).unwrap().chi_poly(), z(&[1]));
    }

    #[test]
    fn roundtrip_on_random_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let deg = rng.gen_range(0..=10);
            let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-50..=50)).collect();
            let g = CsmPolynomial::new(ZPoly::from_i64(&coeffs));
            let chi = chi_from_g(&g).unwrap();
            assert_eq!(g_from_chi(&chi).unwrap().poly, g.poly);
        }
    }

    #[test]
    fn ambient_space_profile() {
        // A^3: chi = (1,1,1,1)
        let profile = chi_profile_by_counting(&[], 3, 11, DEFAULT_BUDGET).unwrap();
        assert_eq!(profile.chi_poly(), z(&[1, 1, 1, 1]));
        let g = g_from_chi(&profile).unwrap();
        assert_eq!(g.poly, z(&[1, 1]).pow(3));
    }

    #[test]
    fn single_point_profile() {
        // origin in A^2: chi = (1, 0, 0)
        let polys = vec![MultiPoly::var(2, 0), MultiPoly::var(2, 1)];
        let profile = chi_profile_by_counting(&polys, 2, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(profile.chis, vec![BigInt::from(1), BigInt::from(0), BigInt::from(0)]);
    }

    #[test]
    fn banana3_cone_profile() {
        // cone over a conic in A^3: chi = (1, 0, 2, 0), G = 2T^2 + 2T + 1
        let psi = hyper::kirchhoff_polynomial(&banana(3));
        let profile = chi_profile_by_counting(&[psi], 3, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            profile.chis,
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(2), BigInt::from(0)]
        );
        let g = g_from_chi(&profile).unwrap();
        assert_eq!(g.poly, z(&[1, 2, 2]));
    }

    #[test]
    fn c_gamma_examples() {
        // looping edge: C = T
        let rep = c_gamma(&single_loop(), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.c_gamma.poly, z(&[0, 1]));
        assert!(rep.monic_of_degree_n);
        // bridge: C = T + 1
        let rep = c_gamma(&single_edge(), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.c_gamma.poly, z(&[1, 1]));
        // loop plus disjoint bridge: product T(T+1)
        let g = disjoint_union(&single_loop(), &single_edge());
        let rep = c_gamma(&g, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.c_gamma.poly, z(&[0, 1, 1]));
        // triangle: Xhat is a plane in A^3 with G = (T+1)^2, so
        // C = (T+1)^3 - (T+1)^2 = T(T+1)^2
        let rep = c_gamma(&cycle(3), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.c_gamma.poly, z(&[0, 1, 2, 1]));
    }

    #[test]
    fn feynman_rule_identities() {
        for g in [cycle(3), banana(3), path(2), single_loop(), banana(2)] {
            let rep = feynman_rule_checks(&g, 3, DEFAULT_BUDGET).unwrap();
            assert!(rep.derivative_identity, "C'(0) identity for {g:?}");
            assert!(rep.section_identity, "section sum identity for {g:?}");
        }
        // triangle: C'(0) = 1 = chi(Y)
        let rep = feynman_rule_checks(&cycle(3), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.c_prime_at_zero, BigInt::from(1));
        assert_eq!(rep.chi_x, BigInt::from(2));
    }

    #[test]
    fn embedded_check() {
        assert!(embedded_f1_check(&CsmPolynomial::new(z(&[1, 1]).pow(4))).passes);
        let bad = embedded_f1_check(&CsmPolynomial::new(z(&[1, -2])));
        assert!(!bad.passes);
        assert_eq!(bad.witness, Some((1, BigInt::from(-1))));
    }

    #[test]
    fn q_deformed_ambient() {
        // Xhat = A^2: N_k(q) = q^{2-k}; G(1,T) = (T+1)^2
        let rep = q_deformed_class(&[], 2, 9, DEFAULT_BUDGET, &[2, 3]).unwrap();
        assert_eq!(rep.n_qt[0], z(&[0, 0, 1]));
        assert_eq!(rep.n_qt[1], z(&[0, 1]));
        assert_eq!(rep.n_qt[2], z(&[1]));
        assert!(rep.limit_matches);
        // single point: G(q, T) = 1 for all q
        let polys = vec![MultiPoly::var(2, 0), MultiPoly::var(2, 1)];
        let rep = q_deformed_class(&polys, 2, 9, DEFAULT_BUDGET, &[2, 5]).unwrap();
        for (_, g) in &rep.table {
            assert_eq!(g, &z(&[1]));
        }
        assert!(rep.limit_matches);
    }

    #[test]
    fn q_deformed_banana3_limit() {
        let psi = hyper::kirchhoff_polynomial(&banana(3));
        let rep = q_deformed_class(&[psi], 3, 5, DEFAULT_BUDGET, &[2, 3, 5]).unwrap();
        assert!(rep.limit_matches);
    }
}
