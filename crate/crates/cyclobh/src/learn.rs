//! Coefficient-threshold junta approximation and sample-based learning of
//! bounded low-degree polynomials: empirical Fourier coefficients from
//! random group points, Chernoff-style sample-size formulas, thresholding,
//! and the exact spectral error decomposition.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::FromPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{enumerate_indices, GroupParams, MultiIndex};
use crate::poly::CyclicPolynomial;

/// Junta obtained by keeping the coefficients above the threshold
/// `λ = ε^{d+1} / bh^d`.
#[derive(Clone, Debug)]
pub struct JuntaReport {
    pub junta: CyclicPolynomial,
    pub coordinates: BTreeSet<usize>,
    /// Number of active variables.
    pub k: usize,
    pub lambda: f64,
    /// Spectral L2 distance to the input.
    pub l2_error: f64,
    /// `d · bh^{2d} / ε^{2d}`.
    pub k_bound: f64,
    /// Number of kept indices.
    pub kept: usize,
}

/// Thresholds the spectrum of a sup-norm-bounded polynomial of degree ≤ d.
/// When the supplied quotient constant dominates the measured coefficient
/// quotient of `f`, the tail satisfies `l2_error ≤ ε` and the junta depends
/// on at most `d · bh^{2d} / ε^{2d}` variables.
pub fn junta_approximate(
    f: &CyclicPolynomial,
    d: u32,
    epsilon: f64,
    bh_constant: f64,
    budget: u64,
    seed: u64,
) -> Result<JuntaReport> {
    if f.degree() > d {
        return Err(Error::DegreeExceeded {
            degree: f.degree(),
            bound: d,
        });
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter("epsilon must lie in (0,1)".into()));
    }
    if bh_constant < 1.0 {
        return Err(Error::InvalidParameter(
            "the quotient constant must be ≥ 1".into(),
        ));
    }
    let sup = f.sup_norm(budget, seed);
    if sup.certified && sup.value > 1.0 + 1e-9 {
        return Err(Error::NotBounded { sup: sup.value });
    }
    let d_eff = d.max(1);
    let lambda = epsilon.powi(d_eff as i32 + 1) * bh_constant.powi(-(d_eff as i32));
    let kept_terms: Vec<(MultiIndex, Complex64)> = f
        .coeffs()
        .iter()
        .filter(|(_, c)| c.norm() > lambda)
        .map(|(a, c)| (a.clone(), *c))
        .collect();
    let kept = kept_terms.len();
    let mut coordinates = BTreeSet::new();
    for (a, _) in &kept_terms {
        coordinates.extend(a.support());
    }
    let junta = CyclicPolynomial::from_terms(f.params().clone(), kept_terms)?;
    // Each kept index touches at most d variables.
    debug_assert!(coordinates.len() <= d_eff as usize * kept.max(1));
    let l2_error = f.sub(&junta).l2_norm();
    Ok(JuntaReport {
        k: coordinates.len(),
        coordinates,
        lambda,
        l2_error,
        k_bound: d_eff as f64 * bh_constant.powi(2 * d_eff as i32)
            / epsilon.powi(2 * d_eff as i32),
        kept,
        junta,
    })
}

/// Sample counts for learning with accuracy ε and confidence 1−δ.
#[derive(Clone, Debug)]
pub struct SampleSizes {
    /// `⌈e^5 d(d+1) bh^{2d} ε^{−(d+1)} ln(2Nn/δ)⌉`, the coarse count using
    /// the `(Nn)^{d+1}` bound on the index set.
    pub headline: BigUint,
    pub headline_raw: f64,
    /// `⌈(2/b²) ln((2/δ) Σ_{k≤d} C(n+k,n))⌉` with the accuracy `b` below.
    pub m_b: BigUint,
    pub m_b_raw: f64,
    /// `b = √(e^{−5} d^{−1} ε^{d+1} bh^{−2d})`.
    pub b: f64,
    /// Exact `Σ_{k≤d} C(n+k,n)`.
    pub index_count: BigUint,
    pub log_term: f64,
}

fn big_binomial(n: usize, k: u32) -> BigUint {
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 1..=k as usize {
        num *= BigUint::from(n + i);
        den *= BigUint::from(i);
    }
    num / den
}

/// Ceil of `e^{ln_value}` as a big integer. Exact through the f64 range;
/// beyond it the value is reconstructed from the base-2 logarithm with
/// ~16 significant digits, which is plenty for a sample count that large.
fn big_ceil_from_ln(ln_value: f64) -> BigUint {
    if ln_value <= 0.0 {
        return BigUint::from(1u32);
    }
    if ln_value < 708.0 {
        return BigUint::from_f64(ln_value.exp().ceil()).expect("finite nonnegative");
    }
    let log2 = ln_value / std::f64::consts::LN_2;
    let shift = log2.floor() as u64;
    let mantissa = (2f64.powf(log2.fract()) * 2f64.powi(52)) as u64;
    (BigUint::from(mantissa + 1) << (shift - 52)) + BigUint::from(1u32)
}

/// Evaluates the two sample-size formulas. Values grow astronomically with
/// the quotient constant; that is expected and the counts are returned as
/// big integers.
pub fn chernoff_sample_size(
    epsilon: f64,
    delta: f64,
    d: u32,
    order: u32,
    vars: usize,
    bh_constant: f64,
) -> Result<SampleSizes> {
    if !(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(
            "epsilon and delta must lie in (0,1)".into(),
        ));
    }
    if d == 0 || order < 2 || vars == 0 || bh_constant < 1.0 {
        return Err(Error::InvalidParameter(
            "need d ≥ 1, order ≥ 2, vars ≥ 1, quotient constant ≥ 1".into(),
        ));
    }
    let df = d as f64;
    // ln b² computed additively so enormous quotient constants cannot
    // overflow on the way in.
    let ln_b_sq = -5.0 - df.ln() + (df + 1.0) * epsilon.ln() - 2.0 * df * bh_constant.ln();
    let b = (0.5 * ln_b_sq).exp();

    let index_count = (0..=d).fold(BigUint::from(0u32), |acc, k| acc + big_binomial(vars, k));
    let index_count_f64 = index_count
        .to_string()
        .parse::<f64>()
        .unwrap_or(f64::INFINITY);
    let log_term = (2.0 / delta).ln() + index_count_f64.ln();
    let ln_m_b = std::f64::consts::LN_2 - ln_b_sq + log_term.ln();
    let m_b_raw = ln_m_b.exp();

    let headline_log = (2.0 * order as f64 * vars as f64 / delta).ln();
    let ln_headline = 5.0
        + df.ln()
        + (df + 1.0).ln()
        + 2.0 * df * bh_constant.ln()
        - (df + 1.0) * epsilon.ln()
        + headline_log.ln();
    let headline_raw = ln_headline.exp();

    Ok(SampleSizes {
        headline: big_ceil_from_ln(ln_headline),
        headline_raw,
        m_b: big_ceil_from_ln(ln_m_b),
        m_b_raw,
        b,
        index_count,
        log_term,
    })
}

/// Result of one learning run: empirical coefficients for all `|α| ≤ d`,
/// the survivors of the threshold `a = b(1+√(d+1))`, and the polynomial
/// assembled from them.
#[derive(Clone, Debug)]
pub struct LearnReport {
    pub estimated: CyclicPolynomial,
    pub samples: u64,
    pub b: f64,
    pub a: f64,
    pub surviving: Vec<MultiIndex>,
    /// All empirical coefficients, survivors or not.
    pub estimates_all: Vec<(MultiIndex, Complex64)>,
    /// `‖truth − estimated‖₂²` when a ground truth was attached.
    pub l2_error_sq: Option<f64>,
    pub seed: u64,
}

/// Learns from `m` i.i.d. uniform group points queried through `oracle`,
/// which receives each point both as an exponent vector and as complex
/// coordinates. Deterministic under a fixed seed.
pub fn learn_from_samples<F>(
    mut oracle: F,
    params: &GroupParams,
    d: u32,
    b: f64,
    m: u64,
    seed: u64,
) -> Result<LearnReport>
where
    F: FnMut(&[u8], &[Complex64]) -> Complex64,
{
    if b <= 0.0 {
        return Err(Error::InvalidParameter("b must be positive".into()));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let indices = enumerate_indices(params, d);
    let mut acc = vec![Complex64::new(0.0, 0.0); indices.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = vec![0u8; params.vars()];
    let order = params.order();
    for _ in 0..m {
        for digit in t.iter_mut() {
            *digit = rng.gen_range(0..order) as u8;
        }
        let coords = params.point_coords(&t);
        let y = oracle(&t, &coords);
        for (slot, alpha) in acc.iter_mut().zip(indices.iter()) {
            // conj(z^α) = ω^{−⟨α,t⟩} on group points.
            *slot += y * params.omega_pow(-(alpha.dot_mod(&t, order) as i64));
        }
    }
    let inv_m = 1.0 / m as f64;
    let estimates_all: Vec<(MultiIndex, Complex64)> = indices
        .into_iter()
        .zip(acc.into_iter())
        .map(|(alpha, s)| (alpha, s * inv_m))
        .collect();
    assemble_report(params, estimates_all, b, d, m, seed)
}

/// The exhaustive-sample limit: every group point once with equal weight,
/// which reproduces the exact Fourier coefficients for `|α| ≤ d`.
pub fn learn_exhaustive<F>(
    mut oracle: F,
    params: &GroupParams,
    d: u32,
    b: f64,
    budget: u64,
) -> Result<LearnReport>
where
    F: FnMut(&[u8], &[Complex64]) -> Complex64,
{
    if b <= 0.0 {
        return Err(Error::InvalidParameter("b must be positive".into()));
    }
    let indices = enumerate_indices(params, d);
    let mut acc = vec![Complex64::new(0.0, 0.0); indices.len()];
    let order = params.order();
    let mut count = 0u64;
    for t in params.enumerate_group_points(budget)? {
        let coords = params.point_coords(&t);
        let y = oracle(&t, &coords);
        for (slot, alpha) in acc.iter_mut().zip(indices.iter()) {
            *slot += y * params.omega_pow(-(alpha.dot_mod(&t, order) as i64));
        }
        count += 1;
    }
    let inv = 1.0 / count as f64;
    let estimates_all: Vec<(MultiIndex, Complex64)> = indices
        .into_iter()
        .zip(acc.into_iter())
        .map(|(alpha, s)| (alpha, s * inv))
        .collect();
    assemble_report(params, estimates_all, b, d, count, 0)
}

fn assemble_report(
    params: &GroupParams,
    estimates_all: Vec<(MultiIndex, Complex64)>,
    b: f64,
    d: u32,
    samples: u64,
    seed: u64,
) -> Result<LearnReport> {
    let a = b * (1.0 + ((d as f64) + 1.0).sqrt());
    let surviving: Vec<MultiIndex> = estimates_all
        .iter()
        .filter(|(_, c)| c.norm() > a)
        .map(|(alpha, _)| alpha.clone())
        .collect();
    let estimated = CyclicPolynomial::from_terms(
        params.clone(),
        estimates_all
            .iter()
            .filter(|(_, c)| c.norm() > a)
            .map(|(alpha, c)| (alpha.clone(), *c)),
    )?;
    Ok(LearnReport {
        estimated,
        samples,
        b,
        a,
        surviving,
        estimates_all,
        l2_error_sq: None,
        seed,
    })
}

impl LearnReport {
    /// Attaches `‖truth − estimated‖₂²`, computed spectrally.
    pub fn with_truth(mut self, truth: &CyclicPolynomial) -> Self {
        let diff = truth.sub(&self.estimated);
        self.l2_error_sq = Some(diff.l2_norm().powi(2));
        self
    }

    /// Whether every empirical coefficient is within `b` of the truth.
    pub fn chernoff_event_holds(&self, truth: &CyclicPolynomial) -> bool {
        self.estimates_all
            .iter()
            .all(|(alpha, c)| (c - truth.coefficient(alpha)).norm() <= self.b)
    }
}

/// The two terms of the spectral error identity
/// `‖truth − estimated‖₂² = Σ_{surviving}|a−ã|² + Σ_{not surviving}|a|²`.
pub fn error_decomposition(truth: &CyclicPolynomial, report: &LearnReport) -> (f64, f64, f64) {
    let surviving: BTreeSet<&MultiIndex> = report.surviving.iter().collect();
    let estimate_term: f64 = report
        .estimates_all
        .iter()
        .filter(|(alpha, _)| surviving.contains(alpha))
        .map(|(alpha, c)| (c - truth.coefficient(alpha)).norm_sqr())
        .sum();
    let tail_term: f64 = truth
        .coeffs()
        .iter()
        .filter(|(alpha, _)| !surviving.contains(alpha))
        .map(|(_, c)| c.norm_sqr())
        .sum();
    let total = truth.sub(&report.estimated).l2_norm().powi(2);
    (total, estimate_term, tail_term)
}

#[derive(Clone, Debug)]
pub enum CurveGrid {
    /// Vary the sample count at fixed accuracy b.
    SampleCounts { counts: Vec<u64>, b: f64 },
    /// Vary the accuracy b at a fixed sample count.
    Thresholds { bs: Vec<f64>, m: u64 },
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CurvePoint {
    pub m: u64,
    pub b: f64,
    pub exhaustive: bool,
    pub errors_sq: Vec<f64>,
    pub median_error_sq: f64,
    /// `(ε, fraction of trials with ‖f−f̃‖₂² ≤ ε)`.
    pub success_fractions: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CurveReport {
    pub points: Vec<CurvePoint>,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs `trials` independent learns per grid point against a known truth and
/// records the squared L2 errors (spectral), the median, and the success
/// fraction for each requested ε. An exhaustive-sample row is appended when
/// the group fits the budget.
pub fn learning_error_curve(
    truth: &CyclicPolynomial,
    d: u32,
    grid: &CurveGrid,
    trials: u32,
    epsilons: &[f64],
    seed: u64,
    budget: u64,
) -> Result<CurveReport> {
    if truth.degree() > d {
        return Err(Error::DegreeExceeded {
            degree: truth.degree(),
            bound: d,
        });
    }
    let params = truth.params().clone();
    let cells: Vec<(u64, f64)> = match grid {
        CurveGrid::SampleCounts { counts, b } => counts.iter().map(|&m| (m, *b)).collect(),
        CurveGrid::Thresholds { bs, m } => bs.iter().map(|&b| (*m, b)).collect(),
    };
    let mut points = Vec::with_capacity(cells.len() + 1);
    for (cell, (m, b)) in cells.iter().enumerate() {
        let mut errors = Vec::with_capacity(trials as usize);
        for trial in 0..trials {
            let trial_seed = seed
                ^ (cell as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
                ^ (trial as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
            let report = learn_from_samples(
                |t, _| truth.eval_group(t),
                &params,
                d,
                *b,
                *m,
                trial_seed,
            )?
            .with_truth(truth);
            errors.push(report.l2_error_sq.expect("truth attached"));
        }
        points.push(make_point(*m, *b, false, errors, epsilons));
    }
    if params.point_count() <= budget as u128 {
        // With exhaustive samples the coefficients are exact, so pick the
        // threshold below the smallest true coefficient: nothing is lost
        // and the error row is zero.
        let min_coeff = truth
            .coeffs()
            .values()
            .map(|c| c.norm())
            .fold(f64::INFINITY, f64::min);
        let b = if min_coeff.is_finite() {
            min_coeff / (2.0 * (1.0 + ((d as f64) + 1.0).sqrt()))
        } else {
            1.0
        };
        let report = learn_exhaustive(|t, _| truth.eval_group(t), &params, d, b, budget)?
            .with_truth(truth);
        points.push(make_point(
            report.samples,
            b,
            true,
            vec![report.l2_error_sq.expect("truth attached")],
            epsilons,
        ));
    }
    Ok(CurveReport { points })
}

fn make_point(m: u64, b: f64, exhaustive: bool, errors: Vec<f64>, epsilons: &[f64]) -> CurvePoint {
    let median_error_sq = median(&errors);
    let success_fractions = epsilons
        .iter()
        .map(|&eps| {
            let ok = errors.iter().filter(|&&e| e <= eps).count();
            (eps, ok as f64 / errors.len() as f64)
        })
        .collect();
    CurvePoint {
        m,
        b,
        exhaustive,
        errors_sq: errors,
        median_error_sq,
        success_fractions,
    }
}
