//! Support-homogeneous decomposition machinery: the per-index factors
//! `τ_α^{(a,b)} = Π_{j: α_j≠0}(a^{α_j} − b^{α_j})`, the maximal-support
//! pseudo-projection that scales surviving terms by τ and attaches a sign
//! marker per support coordinate, and the two recovery routes for the
//! top support-homogeneous part: the rotating-pair iteration (prime order)
//! and the modified-Vandermonde solve (any order).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{GroupParams, MultiIndex};
use crate::linalg::ComplexMatrix;
use crate::poly::{CyclicPolynomial, NormReport, DEFAULT_SUP_BUDGET};

/// Growth factor `2√2 + 2` of the pseudo-projection per unit of support.
pub const PROJECTION_GROWTH: f64 = 2.0 * std::f64::consts::SQRT_2 + 2.0;

/// Relative tolerance for grouping equal τ values in the Vandermonde route.
pub const TAU_GROUP_TOL: f64 = 1e-9;

/// Relative tolerance on the rotating-pair accumulation identity.
pub const ACCUMULATION_TOL: f64 = 1e-9;

/// Relative residual above which a Vandermonde solve is rejected.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-6;

/// Locates a complex number inside `Ω_N`, returning its exponent.
fn locate_in_group(params: &GroupParams, a: Complex64) -> Result<u32> {
    for k in 0..params.order() {
        if (params.omega_pow_u(k) - a).norm() < 1e-9 {
            return Ok(k);
        }
    }
    Err(Error::InvalidParameter(format!(
        "{a} is not an element of the cyclic group of order {}",
        params.order()
    )))
}

/// `τ_α^{(a,b)}` for `a ≠ b` in `Ω_N`; the empty product (α = 0) is 1.
/// Powers of a and b are looked up in the root table, so each factor is a
/// correctly rounded difference of two roots of unity.
pub fn tau_factor(
    params: &GroupParams,
    alpha: &MultiIndex,
    a: Complex64,
    b: Complex64,
) -> Result<Complex64> {
    let ka = locate_in_group(params, a)?;
    let kb = locate_in_group(params, b)?;
    if ka == kb {
        return Err(Error::PairCollision);
    }
    Ok(tau_factor_by_exponents(params, alpha, ka, kb))
}

fn tau_factor_by_exponents(params: &GroupParams, alpha: &MultiIndex, ka: u32, kb: u32) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for &e in alpha.exponents() {
        if e != 0 {
            let e = e as i64;
            v *= params.omega_pow(ka as i64 * e) - params.omega_pow(kb as i64 * e);
        }
    }
    v
}

/// A τ factor together with the data that produced it.
#[derive(Clone, Debug)]
pub struct TauFactor {
    pub alpha: MultiIndex,
    pub pair: (Complex64, Complex64),
    pub value: Complex64,
}

impl TauFactor {
    pub fn compute(
        params: &GroupParams,
        alpha: MultiIndex,
        a: Complex64,
        b: Complex64,
    ) -> Result<Self> {
        let value = tau_factor(params, &alpha, a, b)?;
        Ok(TauFactor {
            alpha,
            pair: (a, b),
            value,
        })
    }
}

/// The rotating-pair constant `d_N = Π_{1≤k≤N−1}(ω^k − ω̄^k)`; nonzero for
/// odd prime orders, where the accumulated factor of the full pair sweep is
/// `d_N^ℓ` on every index of support size ℓ.
pub fn rotating_pair_constant(params: &GroupParams) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for k in 1..params.order() {
        v *= params.omega_pow(k as i64) - params.omega_pow(-(k as i64));
    }
    v
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime-path constant bounding the top support-homogeneous part:
/// `|d_N|^{−d} (2√2+2)^{(N−1)d}`.
pub fn splitting_constant(params: &GroupParams, d: u32) -> Option<f64> {
    let n = params.order();
    if !is_prime(n) || n <= 2 {
        return None;
    }
    let dn = rotating_pair_constant(params).norm();
    Some(dn.powi(-(d as i32)) * PROJECTION_GROWTH.powi(((n - 1) * d) as i32))
}

/// Result of the maximal-support pseudo-projection on the doubled domain
/// `Ω_N^n × Ω_2^n`. Each surviving term `τ_α a_α z^α` implicitly carries the
/// sign marker `x^{supp(α)}`, so the type is a cyclic polynomial plus the
/// convention that evaluation takes a second `±1` argument per variable.
#[derive(Clone, Debug)]
pub struct SupportMarkedPolynomial {
    inner: CyclicPolynomial,
}

impl SupportMarkedPolynomial {
    pub fn inner(&self) -> &CyclicPolynomial {
        &self.inner
    }

    /// Evaluation at `(z, x)` with `x ∈ {±1}^n` encoded as a bitmask
    /// (bit j set ⇔ x_j = −1).
    pub fn eval_group(&self, t: &[u8], mask: u64) -> Complex64 {
        let params = self.inner.params();
        let order = params.order();
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, c) in self.inner.coeffs() {
            let mut sign = 1.0;
            for (j, &e) in alpha.exponents().iter().enumerate() {
                if e != 0 && (mask >> j) & 1 == 1 {
                    sign = -sign;
                }
            }
            acc += c * sign * params.omega_pow_u(alpha.dot_mod(t, order));
        }
        acc
    }

    /// Supremum over the product domain `Ω_N^n × Ω_2^n`; exhaustive when the
    /// `N^n · 2^n` points fit the budget.
    pub fn sup_norm(&self, budget: u64, rng_seed: u64) -> NormReport {
        let params = self.inner.params();
        let vars = params.vars();
        assert!(vars <= 60, "doubled-domain enumeration limited to 60 variables");
        let z_total = params.point_count();
        let total = z_total * (1u128 << vars);
        if total <= budget as u128 {
            let z_total = z_total as u64;
            let value = (0..z_total)
                .into_par_iter()
                .map(|idx| {
                    let t = params.point_from_linear(idx as u128);
                    let mut best = 0.0f64;
                    for mask in 0..(1u64 << vars) {
                        best = best.max(self.eval_group(&t, mask).norm());
                    }
                    best
                })
                .reduce(|| 0.0, f64::max);
            NormReport {
                value,
                certified: true,
                samples_used: total as u64,
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            let n = params.order();
            let mut best = 0.0f64;
            let mut t = vec![0u8; vars];
            for _ in 0..budget {
                for d in t.iter_mut() {
                    *d = rng.gen_range(0..n) as u8;
                }
                let mask: u64 = rng.gen::<u64>() & ((1u64 << vars) - 1);
                best = best.max(self.eval_group(&t, mask).norm());
            }
            NormReport {
                value: best,
                certified: false,
                samples_used: budget,
            }
        }
    }
}

/// Maximal-support pseudo-projection: keeps the terms whose support size is
/// maximal, scales each by its τ factor, and marks its support variables.
pub fn max_support_projection(
    f: &CyclicPolynomial,
    a: Complex64,
    b: Complex64,
) -> Result<SupportMarkedPolynomial> {
    Ok(SupportMarkedPolynomial {
        inner: max_support_projection_restricted(f, a, b)?,
    })
}

/// The projection with the sign markers evaluated at `x = 1⃗`, which is a
/// plain polynomial on `Ω_N^n`: `Σ_{|supp(α)|=ℓ} τ_α a_α z^α`.
pub fn max_support_projection_restricted(
    f: &CyclicPolynomial,
    a: Complex64,
    b: Complex64,
) -> Result<CyclicPolynomial> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let params = f.params();
    let ka = locate_in_group(params, a)?;
    let kb = locate_in_group(params, b)?;
    if ka == kb {
        return Err(Error::PairCollision);
    }
    let ell = f.max_support_size();
    let terms: Vec<(MultiIndex, Complex64)> = f
        .coeffs()
        .iter()
        .filter(|(alpha, _)| alpha.support_size() == ell)
        .map(|(alpha, c)| {
            let tau = tau_factor_by_exponents(params, alpha, ka, kb);
            (alpha.clone(), c * tau)
        })
        .collect();
    CyclicPolynomial::from_terms(params.clone(), terms)
}

/// Outcome of the prime-order rotating-pair recovery of the top part.
#[derive(Clone, Debug)]
pub struct PrimeSplitOutcome {
    pub top_part: CyclicPolynomial,
    /// `d_N` as evaluated for this group order.
    pub pair_constant: Complex64,
    /// `|d_N|^{−ℓ} (2√2+2)^{(N−1)ℓ}`, the certified sup-norm growth bound.
    pub bound: f64,
    /// Largest relative deviation of any accumulated factor from `d_N^ℓ`.
    pub max_accumulation_deviation: f64,
}

/// Recovers the maximal support-homogeneous part by sweeping the projection
/// over the pairs `(ω^k, ω̄^k)`, k = 1 … N−1, and dividing out the constant
/// accumulated factor `d_N^ℓ`. Requires an odd prime group order.
pub fn split_max_support_prime(f: &CyclicPolynomial) -> Result<PrimeSplitOutcome> {
    let params = f.params();
    let n = params.order();
    if !is_prime(n) || n <= 2 {
        return Err(Error::NotPrime(n));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ell = f.max_support_size();
    let dn = rotating_pair_constant(params);

    // Iterate the projection operator itself; after the first sweep the
    // polynomial is support-homogeneous so later sweeps only multiply
    // coefficients.
    let mut g = f.clone();
    for k in 1..n {
        let a = params.omega_pow(k as i64);
        let b = params.omega_pow(-(k as i64));
        g = max_support_projection_restricted(&g, a, b)?;
    }

    // Independent per-index check of the accumulation identity: the direct
    // product of the τ factors must equal d_N^ℓ.
    let dn_ell = dn.powu(ell as u32);
    let mut max_dev = 0.0f64;
    for alpha in f.coeffs().keys() {
        if alpha.support_size() != ell {
            continue;
        }
        let mut acc = Complex64::new(1.0, 0.0);
        for k in 1..n {
            acc *= tau_factor_by_exponents(params, alpha, k, n - k);
        }
        let dev = (acc - dn_ell).norm() / dn_ell.norm();
        max_dev = max_dev.max(dev);
        if dev > ACCUMULATION_TOL {
            return Err(Error::AccumulationMismatch {
                index: alpha.exponents().to_vec(),
                relative: dev,
                tolerance: ACCUMULATION_TOL,
            });
        }
    }

    let top_part = g.scale(Complex64::new(1.0, 0.0) / dn_ell);
    let bound =
        dn.norm().powi(-(ell as i32)) * PROJECTION_GROWTH.powi(((n - 1) * ell as u32) as i32);
    Ok(PrimeSplitOutcome {
        top_part,
        pair_constant: dn,
        bound,
        max_accumulation_deviation: max_dev,
    })
}

/// Outcome of the modified-Vandermonde recovery of the top part.
#[derive(Clone, Debug)]
pub struct VandermondeSplitOutcome {
    pub top_part: CyclicPolynomial,
    /// Distinct τ values over the maximal-support indices, one per group.
    pub group_values: Vec<Complex64>,
    /// Largest relative solve residual across coefficient systems.
    pub max_residual: f64,
}

/// Groups complex values under a relative tolerance, returning one
/// representative per group and the group id per input.
fn group_by_value(values: &[Complex64], rel_tol: f64) -> (Vec<Complex64>, Vec<usize>) {
    let mut reps: Vec<Complex64> = Vec::new();
    let mut ids = Vec::with_capacity(values.len());
    for &v in values {
        let found = reps
            .iter()
            .position(|&r| (r - v).norm() <= rel_tol * r.norm().max(v.norm()));
        match found {
            Some(j) => ids.push(j),
            None => {
                reps.push(v);
                ids.push(reps.len() - 1);
            }
        }
    }
    (reps, ids)
}

/// Recovers the maximal support-homogeneous part for any group order N > 2:
/// iterates the fixed-pair projection `k` times to scale each coefficient by
/// `τ_α^k`, groups indices with equal τ, and inverts the M×M power matrix
/// `V[k][j] = c_j^{k+1}` to undo the scaling.
pub fn split_max_support_vandermonde(f: &CyclicPolynomial) -> Result<VandermondeSplitOutcome> {
    let params = f.params();
    if params.order() <= 2 {
        return Err(Error::InvalidParameter(
            "Vandermonde recovery needs group order > 2".into(),
        ));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ell = f.max_support_size();
    let top_indices: Vec<MultiIndex> = f
        .coeffs()
        .keys()
        .filter(|a| a.support_size() == ell)
        .cloned()
        .collect();
    let taus: Vec<Complex64> = top_indices
        .iter()
        .map(|a| tau_factor_by_exponents(params, a, 0, 1))
        .collect();
    let (group_values, _ids) = group_by_value(&taus, TAU_GROUP_TOL);
    let m = group_values.len();
    // The distinct values are indexed by exponent multiplicity patterns, so
    // their count stays within C(N-1+d, d).
    debug_assert!({
        let d = f.degree().max(1);
        let mut cap = 1.0f64;
        for i in 1..=d as usize {
            cap *= (params.order() as usize - 1 + i) as f64 / i as f64;
        }
        m as f64 <= cap
    });

    // Iterates 𝔇^1 f … 𝔇^M f through the operator.
    let one = Complex64::new(1.0, 0.0);
    let omega = params.omega();
    let mut iterates: Vec<CyclicPolynomial> = Vec::with_capacity(m);
    let mut g = f.clone();
    for _ in 0..m {
        g = max_support_projection_restricted(&g, one, omega)?;
        iterates.push(g.clone());
    }

    let mut v = ComplexMatrix::zero(m);
    for (row, item) in (0..m).enumerate() {
        for (col, c) in group_values.iter().enumerate() {
            v.set(row, col, c.powu(item as u32 + 1));
        }
    }

    // Solve the M×M system once per coefficient index; the recovered group
    // components h_j sum to the top part.
    let mut top_terms: Vec<(MultiIndex, Complex64)> = Vec::with_capacity(top_indices.len());
    let mut max_residual = 0.0f64;
    for alpha in &top_indices {
        let y: Vec<Complex64> = iterates.iter().map(|it| it.coefficient(alpha)).collect();
        let h = v.solve(&y)?;
        let back = v.matvec(&h);
        let scale = y.iter().map(|c| c.norm()).fold(1.0_f64, f64::max);
        let residual = back
            .iter()
            .zip(y.iter())
            .map(|(u, w)| (u - w).norm())
            .fold(0.0, f64::max)
            / scale;
        max_residual = max_residual.max(residual);
        if residual > SOLVE_RESIDUAL_TOL {
            return Err(Error::IllConditioned {
                residual,
                tolerance: SOLVE_RESIDUAL_TOL,
            });
        }
        let coeff: Complex64 = h.into_iter().sum();
        top_terms.push((alpha.clone(), coeff));
    }

    Ok(VandermondeSplitOutcome {
        top_part: CyclicPolynomial::from_terms(params.clone(), top_terms)?,
        group_values,
        max_residual,
    })
}

/// Closed form for the determinant of the modified Vandermonde matrix
/// `V[k][j] = c_j^{k+1}`: the product of the values times the pairwise
/// differences, `(Π_j c_j) · (Π_{j<k} (c_k − c_j))` in this row layout.
/// Nonzero exactly when the values are distinct and nonzero.
pub fn modified_vandermonde_determinant(values: &[Complex64]) -> Complex64 {
    let mut det: Complex64 = values.iter().product();
    for j in 0..values.len() {
        for k in j + 1..values.len() {
            det *= values[k] - values[j];
        }
    }
    det
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMethod {
    /// Direct partition of the stored terms by support size.
    Direct,
    /// Rotating-pair recovery (odd prime order only).
    Prime,
    /// Modified-Vandermonde recovery (any order > 2).
    Vandermonde,
}

/// A polynomial split into support-homogeneous parts, with sup-norm
/// certificates and, for prime orders, the per-part growth bounds
/// `C (1+C)^{ℓ−j}` with `C = |d_N|^{−d} (2√2+2)^{(N−1)d}`.
#[derive(Clone, Debug)]
pub struct SupportDecomposition {
    /// `parts[j]` is the j-support-homogeneous part (possibly zero).
    pub parts: Vec<CyclicPolynomial>,
    pub source_sup_norm: NormReport,
    pub part_sup_norms: Vec<NormReport>,
    pub part_bounds: Option<Vec<f64>>,
    pub method: SplitMethod,
}

impl SupportDecomposition {
    pub fn max_support(&self) -> usize {
        self.parts.len().saturating_sub(1)
    }

    /// Reassembles the source polynomial.
    pub fn sum(&self) -> CyclicPolynomial {
        let params = self.parts[0].params().clone();
        self.parts
            .iter()
            .fold(CyclicPolynomial::zero(params), |acc, p| acc.add(p))
    }
}

/// Direct support-homogeneous partition with norm certificates.
pub fn support_homogeneous_parts(f: &CyclicPolynomial) -> SupportDecomposition {
    support_homogeneous_parts_with(f, DEFAULT_SUP_BUDGET, 0)
}

pub fn support_homogeneous_parts_with(
    f: &CyclicPolynomial,
    budget: u64,
    seed: u64,
) -> SupportDecomposition {
    let ell = f.max_support_size();
    let parts: Vec<CyclicPolynomial> = (0..=ell).map(|j| f.support_part(j)).collect();
    decorate(f, parts, SplitMethod::Direct, budget, seed)
}

fn decorate(
    f: &CyclicPolynomial,
    parts: Vec<CyclicPolynomial>,
    method: SplitMethod,
    budget: u64,
    seed: u64,
) -> SupportDecomposition {
    let source_sup_norm = f.sup_norm(budget, seed);
    let part_sup_norms: Vec<NormReport> =
        parts.iter().map(|p| p.sup_norm(budget, seed)).collect();
    let ell = parts.len().saturating_sub(1);
    let part_bounds = splitting_constant(f.params(), f.degree()).map(|c| {
        (0..=ell)
            .map(|j| c * (1.0 + c).powi((ell - j) as i32))
            .collect()
    });
    SupportDecomposition {
        parts,
        source_sup_norm,
        part_sup_norms,
        part_bounds,
        method,
    }
}

/// Peels support-homogeneous parts from the top by repeated maximal-support
/// recovery and subtraction.
pub fn full_splitting(
    f: &CyclicPolynomial,
    method: SplitMethod,
    budget: u64,
    seed: u64,
) -> Result<SupportDecomposition> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if method == SplitMethod::Direct {
        return Ok(support_homogeneous_parts_with(f, budget, seed));
    }
    let top_ell = f.max_support_size();
    let mut parts = vec![CyclicPolynomial::zero(f.params().clone()); top_ell + 1];
    let mut g = f.clone();
    while !g.is_zero() {
        let ell = g.max_support_size();
        let part = match method {
            SplitMethod::Prime => split_max_support_prime(&g)?.top_part,
            SplitMethod::Vandermonde => split_max_support_vandermonde(&g)?.top_part,
            SplitMethod::Direct => unreachable!(),
        };
        parts[ell] = part.clone();
        g = g.sub(&part);
        // The subtraction cancels the top level up to rounding; drop any
        // leftover dust there so the peel strictly descends.
        let remaining: Vec<(MultiIndex, Complex64)> = g
            .coeffs()
            .iter()
            .filter(|(a, _)| a.support_size() < ell)
            .map(|(a, c)| (a.clone(), *c))
            .collect();
        g = CyclicPolynomial::from_terms(f.params().clone(), remaining)?;
    }
    Ok(decorate(f, parts, method, budget, seed))
}
