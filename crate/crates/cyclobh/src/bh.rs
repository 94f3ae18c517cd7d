//! Coefficient-versus-sup quotients: the `ℓ_{2d/(d+1)}` quotient, the
//! explicit prime-order bound it is measured against, empirical quotient
//! search, Sidon quotients, and Bohr-radius lower bounds.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{enumerate_indices, GroupParams, MultiIndex};
use crate::poly::{random_polynomial, CoeffLaw, CyclicPolynomial, NormReport};
use crate::split::{splitting_constant, PROJECTION_GROWTH};

/// Configuration for the explicit constants. The Boolean-cube constant is
/// only known up to the sub-exponential form `base^{√(d log d)}`; the base
/// is configurable and the value is floored at √2, the degree-1 constant,
/// where the form degenerates to 1.
#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct BoundConfig {
    pub boolean_base: f64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig { boolean_base: 2.0 }
    }
}

/// Explicit stand-in bound for the Boolean-cube BH constant at degree d.
pub fn boolean_bh_bound(d: u32, cfg: &BoundConfig) -> f64 {
    let d = d.max(1) as f64;
    let form = cfg.boolean_base.powf((d * d.ln()).sqrt());
    form.max(std::f64::consts::SQRT_2)
}

/// Bound for the coefficient quotient of an ℓ-support-homogeneous polynomial
/// of degree ≤ d, with every ℓ ≤ d absorbed:
/// `|1−ω|^{−d} (N−1)^{(d+1)/2} (2√2+2)^d · boolean_bh_bound(d)`.
pub fn support_homogeneous_bound(params: &GroupParams, d: u32, cfg: &BoundConfig) -> f64 {
    let d_eff = d.max(1);
    let min_chord = (Complex64::new(1.0, 0.0) - params.omega()).norm();
    let n = params.order() as f64;
    min_chord.powi(-(d_eff as i32))
        * (n - 1.0).powf((d_eff as f64 + 1.0) / 2.0)
        * PROJECTION_GROWTH.powi(d_eff as i32)
        * boolean_bh_bound(d_eff, cfg)
}

/// Sum of the per-part splitting bounds `C (1+C)^{ℓ−j}` over j = 0…ℓ ≤ d,
/// which telescopes to `(1+C)^{d+1} − 1`. Defined for odd prime orders.
pub fn splitting_sum_bound(params: &GroupParams, d: u32) -> Option<f64> {
    splitting_constant(params, d.max(1)).map(|c| (1.0 + c).powi(d.max(1) as i32 + 1) - 1.0)
}

/// The fully explicit prime-order bound for the degree-d coefficient
/// quotient, composed from the support-homogeneous route and the splitting
/// route. `None` marks orders with no explicit constant (composite, or 2).
pub fn cyclic_quotient_bound(params: &GroupParams, d: u32, cfg: &BoundConfig) -> Option<f64> {
    let split = splitting_sum_bound(params, d)?;
    Some(support_homogeneous_bound(params, d, cfg) * split)
}

/// A measured coefficient-versus-sup quotient at the exponent `2d/(d+1)`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BhQuotient {
    pub d: u32,
    /// `(Σ |a_α|^{2d/(d+1)})^{(d+1)/2d}`.
    pub lhs: f64,
    pub rhs: NormReport,
    pub quotient: f64,
    /// Explicit prime-order bound; `None` when not applicable.
    pub reference_bound: Option<f64>,
}

pub fn bh_exponent(d: u32) -> f64 {
    let d = d.max(1) as f64;
    2.0 * d / (d + 1.0)
}

pub fn bh_quotient(
    f: &CyclicPolynomial,
    d: u32,
    budget: u64,
    seed: u64,
    cfg: &BoundConfig,
) -> Result<BhQuotient> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() > d {
        return Err(Error::DegreeExceeded {
            degree: f.degree(),
            bound: d,
        });
    }
    let d_eff = d.max(1);
    let lhs = f.coeff_lp_norm(bh_exponent(d_eff));
    let rhs = f.sup_norm(budget, seed);
    Ok(BhQuotient {
        d: d_eff,
        lhs,
        rhs: rhs.clone(),
        quotient: lhs / rhs.value,
        reference_bound: cyclic_quotient_bound(f.params(), d_eff, cfg),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStrategy {
    Random,
    CoordinateAscent,
}

/// Outcome of a quotient-maximization run.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub best_quotient: f64,
    pub best_polynomial: CyclicPolynomial,
    pub iterations: u64,
    pub seed: u64,
    pub strategy: SearchStrategy,
    /// `(iteration, quotient)` at start and at every accepted improvement.
    pub trajectory: Vec<(u64, f64)>,
    /// Number of evaluated quotients exceeding the explicit prime-order
    /// bound. Must stay zero; anything else is a finding.
    pub bound_violations: u64,
    pub reference_bound: Option<f64>,
}

fn state_poly(
    params: &GroupParams,
    state: &[(MultiIndex, Complex64)],
) -> Result<CyclicPolynomial> {
    CyclicPolynomial::from_terms(params.clone(), state.iter().cloned())
}

struct QuotientEval<'a> {
    params: &'a GroupParams,
    d: u32,
    budget: u64,
    seed: u64,
    cfg: &'a BoundConfig,
    bound: Option<f64>,
    violations: u64,
}

impl<'a> QuotientEval<'a> {
    fn eval(&mut self, state: &[(MultiIndex, Complex64)]) -> Option<f64> {
        let poly = state_poly(self.params, state).ok()?;
        if poly.is_zero() {
            return None;
        }
        let q = bh_quotient(&poly, self.d, self.budget, self.seed, self.cfg)
            .ok()?
            .quotient;
        if let Some(b) = self.bound {
            if q > b {
                self.violations += 1;
            }
        }
        Some(q)
    }
}

/// Coordinate ascent over the dense coefficient vector of all indices with
/// `|α| ≤ d`: one coordinate per iteration, candidate moves are
/// multiplicative modulus and phase steps plus dropping the coefficient to
/// zero or reseeding a zero coefficient at the four quarter phases. The best
/// strictly improving candidate is accepted; 50 consecutive rejections halve
/// the step, and the run stops once the step falls below 1e−6.
fn coordinate_ascent(
    start: Vec<(MultiIndex, Complex64)>,
    ev: &mut QuotientEval<'_>,
    iterations: u64,
    trajectory: &mut Vec<(u64, f64)>,
) -> (Vec<(MultiIndex, Complex64)>, f64, u64) {
    let mut state = start;
    let mut best_q = match ev.eval(&state) {
        Some(q) => q,
        None => {
            // Degenerate start (prunes to zero); nothing to do.
            return (state, f64::NEG_INFINITY, 0);
        }
    };
    trajectory.push((0, best_q));
    let mut step = std::f64::consts::FRAC_PI_2;
    let mut rejections = 0u32;
    let mut performed = 0u64;
    let coords = state.len();
    for it in 1..=iterations {
        if step < 1e-6 {
            break;
        }
        performed = it;
        let coord = ((it - 1) % coords as u64) as usize;
        let v = state[coord].1;
        let nonzero = state.iter().filter(|(_, c)| c.norm() > 0.0).count();
        let mut candidates: Vec<Complex64> = Vec::with_capacity(5);
        if v.norm() > 0.0 {
            if nonzero >= 2 {
                candidates.push(Complex64::new(0.0, 0.0));
            }
            candidates.push(v * (1.0 + step));
            candidates.push(v * (1.0 - step));
            let rot = Complex64::new(step.cos(), step.sin());
            candidates.push(v * rot);
            candidates.push(v * rot.conj());
        } else {
            let m = state
                .iter()
                .map(|(_, c)| c.norm())
                .fold(0.0f64, f64::max)
                .min(1e6);
            let m = if m > 0.0 { m } else { 1.0 };
            candidates.push(Complex64::new(m, 0.0));
            candidates.push(Complex64::new(-m, 0.0));
            candidates.push(Complex64::new(0.0, m));
            candidates.push(Complex64::new(0.0, -m));
        }
        let mut best_candidate: Option<(Complex64, f64)> = None;
        for cand in candidates {
            state[coord].1 = cand;
            if let Some(q) = ev.eval(&state) {
                if q > best_q && best_candidate.map_or(true, |(_, bq)| q > bq) {
                    best_candidate = Some((cand, q));
                }
            }
        }
        match best_candidate {
            Some((cand, q)) => {
                state[coord].1 = cand;
                best_q = q;
                rejections = 0;
                trajectory.push((it, q));
            }
            None => {
                state[coord].1 = v;
                rejections += 1;
                if rejections >= 50 {
                    step /= 2.0;
                    rejections = 0;
                }
            }
        }
    }
    (state, best_q, performed)
}

fn random_search(
    params: &GroupParams,
    d: u32,
    ev: &mut QuotientEval<'_>,
    iterations: u64,
    seed: u64,
    trajectory: &mut Vec<(u64, f64)>,
) -> (Vec<(MultiIndex, Complex64)>, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_state: Option<Vec<(MultiIndex, Complex64)>> = None;
    let mut best_q = f64::NEG_INFINITY;
    for it in 0..iterations {
        let density = 0.2 + 0.8 * rng.gen::<f64>();
        let law = if it % 2 == 0 {
            CoeffLaw::UnitCircle
        } else {
            CoeffLaw::ComplexGaussian
        };
        let draw_seed = rng.gen::<u64>();
        let f = match random_polynomial(params, d, density, law, draw_seed) {
            Ok(f) if !f.is_zero() => f,
            _ => continue,
        };
        let state: Vec<(MultiIndex, Complex64)> =
            f.coeffs().iter().map(|(a, c)| (a.clone(), *c)).collect();
        if let Some(q) = ev.eval(&state) {
            if q > best_q {
                best_q = q;
                best_state = Some(state);
                trajectory.push((it, q));
            }
        }
    }
    (
        best_state.unwrap_or_else(|| {
            vec![(
                MultiIndex::new(vec![0; params.vars()]),
                Complex64::new(1.0, 0.0),
            )]
        }),
        best_q,
    )
}

/// Quotient maximization from an explicit starting polynomial.
pub fn bh_constant_search_from(
    start: &CyclicPolynomial,
    d: u32,
    iterations: u64,
    strategy: SearchStrategy,
    seed: u64,
    budget: u64,
    cfg: &BoundConfig,
) -> Result<SearchReport> {
    if start.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if start.degree() > d {
        return Err(Error::DegreeExceeded {
            degree: start.degree(),
            bound: d,
        });
    }
    let params = start.params().clone();
    let bound = cyclic_quotient_bound(&params, d.max(1), cfg);
    let mut ev = QuotientEval {
        params: &params,
        d,
        budget,
        seed,
        cfg,
        bound,
        violations: 0,
    };
    let mut trajectory = Vec::new();
    // Dense state over every admissible index so the ascent can populate
    // coordinates absent from the start.
    let state: Vec<(MultiIndex, Complex64)> = enumerate_indices(&params, d)
        .into_iter()
        .map(|a| {
            let c = start.coefficient(&a);
            (a, c)
        })
        .collect();
    let (final_state, best_q, performed) = match strategy {
        SearchStrategy::CoordinateAscent => {
            coordinate_ascent(state, &mut ev, iterations, &mut trajectory)
        }
        SearchStrategy::Random => {
            // Evaluate the start, then sample.
            let q0 = ev.eval(&state).ok_or(Error::ZeroPolynomial)?;
            trajectory.push((0, q0));
            let (s, q) = random_search(&params, d, &mut ev, iterations, seed, &mut trajectory);
            if q > q0 {
                (s, q, iterations)
            } else {
                (state, q0, iterations)
            }
        }
    };
    let best_polynomial = state_poly(&params, &final_state)?;
    Ok(SearchReport {
        best_quotient: best_q,
        best_polynomial,
        iterations: performed,
        seed,
        strategy,
        trajectory,
        bound_violations: ev.violations,
        reference_bound: bound,
    })
}

/// Quotient maximization with restarts. Restart 0 of the ascent starts from
/// the all-ones coefficient vector; later restarts start from random
/// unit-circle coefficients with per-restart derived seeds. Restarts run in
/// parallel and the best report wins (ties broken by restart id).
pub fn bh_constant_search(
    params: &GroupParams,
    d: u32,
    iterations: u64,
    restarts: u32,
    strategy: SearchStrategy,
    seed: u64,
    budget: u64,
    cfg: &BoundConfig,
) -> Result<SearchReport> {
    if iterations < 1 {
        return Err(Error::InvalidParameter("iterations must be ≥ 1".into()));
    }
    let restarts = restarts.max(1);
    let indices = enumerate_indices(params, d);
    let reports: Vec<Result<SearchReport>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let restart_seed = seed.wrapping_add((r as u64).wrapping_mul(0x9E3779B97F4A7C15));
            let start = if r == 0 && strategy == SearchStrategy::CoordinateAscent {
                CyclicPolynomial::from_terms(
                    params.clone(),
                    indices
                        .iter()
                        .map(|a| (a.clone(), Complex64::new(1.0, 0.0))),
                )?
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(restart_seed);
                CyclicPolynomial::from_terms(
                    params.clone(),
                    indices.iter().map(|a| {
                        let theta = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
                        (a.clone(), Complex64::new(theta.cos(), theta.sin()))
                    }),
                )?
            };
            bh_constant_search_from(&start, d, iterations, strategy, restart_seed, budget, cfg)
        })
        .collect();
    let mut best: Option<SearchReport> = None;
    let mut total_violations = 0;
    for rep in reports {
        let rep = rep?;
        total_violations += rep.bound_violations;
        best = match best {
            None => Some(rep),
            Some(b) if rep.best_quotient > b.best_quotient => Some(rep),
            Some(b) => Some(b),
        };
    }
    let mut best = best.expect("at least one restart");
    best.bound_violations = total_violations;
    best.seed = seed;
    Ok(best)
}

/// `(Σ |a_α|) / ‖f‖_∞`.
pub fn sidon_quotient(f: &CyclicPolynomial, budget: u64, seed: u64) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.coeff_lp_norm(1.0) / f.sup_norm(budget, seed).value)
}

/// `C(n+k, n)` in floating point.
pub fn binomial(n: usize, k: u32) -> f64 {
    let mut v = 1.0f64;
    for i in 1..=k as usize {
        v *= (n + i) as f64 / i as f64;
    }
    v
}

/// `Σ_{0≤k≤d} C(n+k, n)`, the size bound for the index set of degree ≤ d.
pub fn index_count_bound(vars: usize, d: u32) -> f64 {
    (0..=d).map(|k| binomial(vars, k)).sum()
}

/// Sidon-constant bound for the degree-≤d index set:
/// explicit prime-order quotient bound times `(Σ_{k≤d} C(n+k,n))^{(d−1)/2d}`.
pub fn sidon_bound(params: &GroupParams, d: u32, cfg: &BoundConfig) -> Option<f64> {
    let d_eff = d.max(1) as f64;
    let base = cyclic_quotient_bound(params, d.max(1), cfg)?;
    Some(base * index_count_bound(params.vars(), d.max(1)).powf((d_eff - 1.0) / (2.0 * d_eff)))
}

/// Lower bound for the Bohr radius of d-homogeneous polynomials:
/// `[bh · C(n+d,n)^{(d−1)/2d}]^{−1/d}`. The quotient constant defaults to
/// the explicit prime-order bound and may be overridden with a sharper
/// empirical value.
pub fn bohr_radius_lower_bound(
    params: &GroupParams,
    d: u32,
    bh_constant: Option<f64>,
    cfg: &BoundConfig,
) -> Result<f64> {
    if d < 1 {
        return Err(Error::InvalidParameter("degree must be ≥ 1".into()));
    }
    let bh = match bh_constant.or_else(|| cyclic_quotient_bound(params, d, cfg)) {
        Some(v) => v,
        None => {
            return Err(Error::InvalidParameter(format!(
                "no explicit quotient bound for order {}; supply one",
                params.order()
            )))
        }
    };
    let df = d as f64;
    let count = binomial(params.vars(), d);
    Ok((bh * count.powf((df - 1.0) / (2.0 * df))).powf(-1.0 / df))
}

/// `Σ |a_α| ρ^{|α|}` for a d-homogeneous polynomial; the Bohr-radius
/// certificate checks this stays ≤ 1 when `‖f‖_∞ ≤ 1` and ρ is below the
/// bound.
pub fn bohr_majorant(f: &CyclicPolynomial, d: u32, rho: f64) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.coeffs().keys().any(|a| a.degree() != d) {
        return Err(Error::NotHomogeneous { degree: d });
    }
    Ok(f.coeffs()
        .values()
        .map(|c| c.norm() * rho.powi(d as i32))
        .sum())
}
