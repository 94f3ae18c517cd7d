//! Sparse polynomials on `Ω_N^n`: evaluation, exact Fourier analysis and
//! synthesis, and norms.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{enumerate_indices, GroupParams, MultiIndex};

/// Coefficients below this modulus are dropped on construction. Well below
/// every verification tolerance in the suite (all ≥ 1e−12).
pub const PRUNE_TOL: f64 = 1e-14;

/// Default budget for exhaustive sup-norm enumeration.
pub const DEFAULT_SUP_BUDGET: u64 = 1 << 22;

/// Outcome of a sup-norm computation. `certified` is true exactly when the
/// whole group was enumerated; otherwise the value is a lower bound obtained
/// from random group points.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NormReport {
    pub value: f64,
    pub certified: bool,
    pub samples_used: u64,
}

/// A sparse polynomial `f(z) = Σ_α a_α z^α` on `Ω_N^n`, stored as a map from
/// multi-index to coefficient in canonical (lexicographic) order.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicPolynomial {
    params: GroupParams,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl CyclicPolynomial {
    pub fn zero(params: GroupParams) -> Self {
        CyclicPolynomial {
            params,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a polynomial, validating indices and pruning dust coefficients.
    pub fn from_terms<I>(params: GroupParams, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut coeffs: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (alpha, c) in terms {
            let alpha = MultiIndex::checked(alpha.exponents().to_vec(), &params)?;
            let entry = coeffs.entry(alpha).or_insert(Complex64::new(0.0, 0.0));
            *entry += c;
        }
        coeffs.retain(|_, c| c.norm() >= PRUNE_TOL);
        Ok(CyclicPolynomial { params, coeffs })
    }

    pub fn constant(params: GroupParams, c: Complex64) -> Self {
        let zero = MultiIndex::new(vec![0; params.vars()]);
        CyclicPolynomial::from_terms(params, [(zero, c)]).expect("constant term is always valid")
    }

    /// Single monomial `c · z^α`.
    pub fn monomial(params: GroupParams, alpha: MultiIndex, c: Complex64) -> Result<Self> {
        CyclicPolynomial::from_terms(params, [(alpha, c)])
    }

    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, Complex64> {
        &self.coeffs
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Complex64 {
        self.coeffs
            .get(alpha)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Maximum `|α|` over stored terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|a| a.degree()).max().unwrap_or(0)
    }

    /// Maximum individual exponent over stored terms.
    pub fn local_degree(&self) -> u32 {
        self.coeffs
            .keys()
            .flat_map(|a| a.exponents().iter().map(|&e| e as u32))
            .max()
            .unwrap_or(0)
    }

    /// Maximum support size over stored terms; 0 for the zero polynomial.
    pub fn max_support_size(&self) -> usize {
        self.coeffs
            .keys()
            .map(|a| a.support_size())
            .max()
            .unwrap_or(0)
    }

    /// Evaluation at an arbitrary complex point, one repeated-squaring power
    /// per coordinate.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.params.vars() {
            return Err(Error::DimensionMismatch {
                expected: self.params.vars(),
                got: z.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, c) in &self.coeffs {
            let mut m = *c;
            for (zj, &e) in z.iter().zip(alpha.exponents()) {
                if e != 0 {
                    m *= zj.powu(e as u32);
                }
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Evaluation at the group point with exponent vector `t`. Exponent
    /// arithmetic stays in integers, so each monomial is a single table
    /// lookup.
    #[inline]
    pub fn eval_group(&self, t: &[u8]) -> Complex64 {
        let order = self.params.order();
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, c) in &self.coeffs {
            acc += c * self.params.omega_pow_u(alpha.dot_mod(t, order));
        }
        acc
    }

    /// Supremum of `|f|` over `Ω_N^n`: exhaustive (certified) when `N^n`
    /// fits the budget, otherwise the max over `budget` random group points.
    pub fn sup_norm(&self, budget: u64, rng_seed: u64) -> NormReport {
        let total = self.params.point_count();
        if total <= budget as u128 {
            let total64 = total as u64;
            let value = (0..total64)
                .into_par_iter()
                .map(|idx| {
                    let t = self.params.point_from_linear(idx as u128);
                    self.eval_group(&t).norm()
                })
                .reduce(|| 0.0, f64::max);
            NormReport {
                value,
                certified: true,
                samples_used: total64,
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            let n = self.params.order();
            let mut best = 0.0f64;
            let mut t = vec![0u8; self.params.vars()];
            for _ in 0..budget {
                for d in t.iter_mut() {
                    *d = rng.gen_range(0..n) as u8;
                }
                best = best.max(self.eval_group(&t).norm());
            }
            NormReport {
                value: best,
                certified: false,
                samples_used: budget,
            }
        }
    }

    /// `(Σ |a_α|^p)^{1/p}` over the stored coefficients.
    pub fn coeff_lp_norm(&self, p: f64) -> f64 {
        assert!(p >= 1.0, "ℓ_p coefficient norms require p ≥ 1");
        self.coeffs
            .values()
            .map(|c| c.norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }

    /// Spectral L2 norm; equals the spatial L2 norm by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `sqrt(E_z |f(z)|^2)` by exhaustive enumeration; the independent route
    /// to the L2 norm.
    pub fn l2_norm_spatial(&self, budget: u64) -> Result<f64> {
        let pts = self.params.enumerate_group_points(budget)?;
        let mut acc = 0.0;
        let mut count = 0u64;
        for t in pts {
            acc += self.eval_group(&t).norm_sqr();
            count += 1;
        }
        Ok((acc / count as f64).sqrt())
    }

    /// Keeps exactly the terms with `|α| ≤ d`.
    pub fn truncate_by_degree(&self, d: u32) -> CyclicPolynomial {
        CyclicPolynomial {
            params: self.params.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(a, _)| a.degree() <= d)
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    /// Keeps exactly the terms with support size `ell`.
    pub fn support_part(&self, ell: usize) -> CyclicPolynomial {
        CyclicPolynomial {
            params: self.params.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(a, _)| a.support_size() == ell)
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    pub fn add(&self, other: &CyclicPolynomial) -> CyclicPolynomial {
        let mut coeffs = self.coeffs.clone();
        for (a, c) in &other.coeffs {
            *coeffs.entry(a.clone()).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c| c.norm() >= PRUNE_TOL);
        CyclicPolynomial {
            params: self.params.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &CyclicPolynomial) -> CyclicPolynomial {
        let mut coeffs = self.coeffs.clone();
        for (a, c) in &other.coeffs {
            *coeffs.entry(a.clone()).or_insert(Complex64::new(0.0, 0.0)) -= c;
        }
        coeffs.retain(|_, c| c.norm() >= PRUNE_TOL);
        CyclicPolynomial {
            params: self.params.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, c: Complex64) -> CyclicPolynomial {
        let mut coeffs: BTreeMap<MultiIndex, Complex64> = self
            .coeffs
            .iter()
            .map(|(a, v)| (a.clone(), v * c))
            .collect();
        coeffs.retain(|_, c| c.norm() >= PRUNE_TOL);
        CyclicPolynomial {
            params: self.params.clone(),
            coeffs,
        }
    }

    /// `z ↦ f(ξ · z)` for a group point `ξ` given by its exponent vector;
    /// each coefficient rotates by the unimodular factor `ξ^α`.
    pub fn translate(&self, xi: &[u8]) -> Result<CyclicPolynomial> {
        if xi.len() != self.params.vars() {
            return Err(Error::DimensionMismatch {
                expected: self.params.vars(),
                got: xi.len(),
            });
        }
        let order = self.params.order();
        let coeffs = self
            .coeffs
            .iter()
            .map(|(a, c)| {
                let phase = self.params.omega_pow_u(a.dot_mod(xi, order));
                (a.clone(), c * phase)
            })
            .collect();
        Ok(CyclicPolynomial {
            params: self.params.clone(),
            coeffs,
        })
    }

    /// Coefficient-wise max distance to another polynomial.
    pub fn max_coeff_distance(&self, other: &CyclicPolynomial) -> f64 {
        let mut keys: Vec<&MultiIndex> = self.coeffs.keys().collect();
        keys.extend(other.coeffs.keys());
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|a| (self.coefficient(a) - other.coefficient(a)).norm())
            .fold(0.0, f64::max)
    }

    /// Values on all `N^n` group points in canonical order.
    pub fn synthesize(&self, budget: u64) -> Result<Vec<Complex64>> {
        let total = self.params.point_count();
        if total > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed: total,
                budget,
            });
        }
        // Densify the spectrum and run the separable transform; this is the
        // N^n · n · N path rather than per-point summation.
        let mut spectrum = vec![Complex64::new(0.0, 0.0); total as usize];
        for (alpha, c) in &self.coeffs {
            let mut idx = 0u128;
            let n = self.params.order() as u128;
            for &e in alpha.exponents() {
                idx = idx * n + e as u128;
            }
            spectrum[idx as usize] = *c;
        }
        axis_transforms(&mut spectrum, &self.params, TransformKind::Synthesis);
        Ok(spectrum)
    }
}

enum TransformKind {
    /// `a_α = E_t[s(t) ω^{−⟨α,t⟩}]` — divide by N per axis, negative kernel.
    Analysis,
    /// `s(t) = Σ_α a_α ω^{⟨α,t⟩}` — no normalization, positive kernel.
    Synthesis,
}

/// In-place separable transform along each of the n axes.
fn axis_transforms(data: &mut [Complex64], params: &GroupParams, kind: TransformKind) {
    let n = params.order() as usize;
    let vars = params.vars();
    let total = data.len();
    debug_assert_eq!(total, n.pow(vars as u32));
    let (sign, norm) = match kind {
        TransformKind::Analysis => (-1i64, 1.0 / n as f64),
        TransformKind::Synthesis => (1i64, 1.0),
    };
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    // Axis j has stride N^{n−1−j}; blocks of size stride·N repeat.
    for j in 0..vars {
        let stride = n.pow((vars - 1 - j) as u32);
        let block = stride * n;
        for base in (0..total).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (k, slot) in scratch.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for t in 0..n {
                        let w = params.omega_pow(sign * (k as i64) * (t as i64));
                        acc += data[start + t * stride] * w;
                    }
                    *slot = acc * norm;
                }
                for (k, v) in scratch.iter().enumerate() {
                    data[start + k * stride] = *v;
                }
            }
        }
    }
}

/// Exact Fourier analysis from a complete sample table (values on all `N^n`
/// points in canonical order).
pub fn fourier_analyze(samples: &[Complex64], params: &GroupParams) -> Result<CyclicPolynomial> {
    let expected = params.point_count();
    if samples.len() as u128 != expected {
        return Err(Error::IncompleteSamples {
            expected: expected as u64,
            got: samples.len() as u64,
        });
    }
    let mut data = samples.to_vec();
    axis_transforms(&mut data, params, TransformKind::Analysis);
    let n = params.order() as u128;
    let terms = data.iter().enumerate().filter_map(|(idx, c)| {
        if c.norm() >= PRUNE_TOL {
            let mut rem = idx as u128;
            let mut exps = vec![0u8; params.vars()];
            for j in (0..params.vars()).rev() {
                exps[j] = (rem % n) as u8;
                rem /= n;
            }
            Some((MultiIndex::new(exps), *c))
        } else {
            None
        }
    });
    CyclicPolynomial::from_terms(params.clone(), terms)
}

/// Single Fourier coefficient by direct summation, `E_t[s(t) ω^{−⟨α,t⟩}]`.
/// Used when only a handful of coefficients are requested.
pub fn fourier_coefficient(
    samples: &[Complex64],
    params: &GroupParams,
    alpha: &MultiIndex,
) -> Result<Complex64> {
    let expected = params.point_count();
    if samples.len() as u128 != expected {
        return Err(Error::IncompleteSamples {
            expected: expected as u64,
            got: samples.len() as u64,
        });
    }
    let order = params.order();
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, s) in samples.iter().enumerate() {
        let t = params.point_from_linear(idx as u128);
        let k = alpha.dot_mod(&t, order);
        acc += s * params.omega_pow(-(k as i64));
    }
    Ok(acc / samples.len() as f64)
}

/// Coefficient law for random polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffLaw {
    UnitCircle,
    ComplexGaussian,
}

fn draw_coefficient(rng: &mut ChaCha8Rng, law: CoeffLaw) -> Complex64 {
    match law {
        CoeffLaw::UnitCircle => {
            let theta = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
            Complex64::new(theta.cos(), theta.sin())
        }
        CoeffLaw::ComplexGaussian => {
            // Box-Muller; variance 1/2 per component so E|c|^2 = 1.
            let u: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
            let v: f64 = rng.gen();
            let r = (-2.0 * u.ln()).sqrt() / std::f64::consts::SQRT_2;
            let phi = 2.0 * std::f64::consts::PI * v;
            Complex64::new(r * phi.cos(), r * phi.sin())
        }
    }
}

/// Random polynomial of degree at most `d`: every index with `|α| ≤ d` is
/// included independently with probability `density`. Deterministic under a
/// fixed seed.
pub fn random_polynomial(
    params: &GroupParams,
    d: u32,
    density: f64,
    law: CoeffLaw,
    rng_seed: u64,
) -> Result<CyclicPolynomial> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "density must lie in (0, 1], got {density}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut terms = Vec::new();
    for alpha in enumerate_indices(params, d) {
        if rng.gen::<f64>() < density {
            terms.push((alpha, draw_coefficient(&mut rng, law)));
        }
    }
    CyclicPolynomial::from_terms(params.clone(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(order: u32, vars: usize) -> GroupParams {
        GroupParams::new(order, vars).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomial_at_group_point() {
        let p = params(3, 1);
        let f = CyclicPolynomial::monomial(p.clone(), MultiIndex::new(vec![1]), c(1.0, 0.0))
            .unwrap();
        let w = p.omega();
        assert!((f.evaluate(&[w]).unwrap() - w).norm() < 1e-15);
    }

    #[test]
    fn two_term_evaluation() {
        // f = 1 + z1 z2^2 at (ω, ω): 1 + ω · ω^2 = 2.
        let p = params(3, 2);
        let f = CyclicPolynomial::from_terms(
            p.clone(),
            [
                (MultiIndex::new(vec![0, 0]), c(1.0, 0.0)),
                (MultiIndex::new(vec![1, 2]), c(1.0, 0.0)),
            ],
        )
        .unwrap();
        let w = p.omega();
        let v = f.evaluate(&[w, w]).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-12);
        assert!((f.eval_group(&[1, 1]) - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn square_at_edge_midpoint() {
        // z0 = (1+ω)/2 sits at distance √3/2 from 1, and f = z^2 evaluates
        // to z0^2 there.
        let p = params(3, 1);
        let f = CyclicPolynomial::monomial(p.clone(), MultiIndex::new(vec![2]), c(1.0, 0.0))
            .unwrap();
        let z0 = (Complex64::new(1.0, 0.0) + p.omega()) / 2.0;
        assert_relative_eq!((z0 - 1.0).norm(), 3f64.sqrt() / 2.0, epsilon = 1e-12);
        assert!((f.evaluate(&[z0]).unwrap() - z0 * z0).norm() < 1e-15);
    }

    #[test]
    fn evaluate_dimension_mismatch() {
        let p = params(3, 2);
        let f = CyclicPolynomial::constant(p, c(1.0, 0.0));
        assert!(matches!(
            f.evaluate(&[c(1.0, 0.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn analyze_constant() {
        let p = params(4, 2);
        let samples = vec![c(2.5, -1.0); 16];
        let f = fourier_analyze(&samples, &p).unwrap();
        assert_eq!(f.term_count(), 1);
        assert!((f.coefficient(&MultiIndex::new(vec![0, 0])) - c(2.5, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn analyze_coordinate_character() {
        let p = params(3, 1);
        let samples: Vec<Complex64> = (0..3).map(|k| p.omega_pow(k)).collect();
        let f = fourier_analyze(&samples, &p).unwrap();
        assert_eq!(f.term_count(), 1);
        assert!((f.coefficient(&MultiIndex::new(vec![1])) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn analyze_synthesize_roundtrip_sparse() {
        let p = params(4, 3);
        let f = random_polynomial(&p, 6, 0.1, CoeffLaw::ComplexGaussian, 7).unwrap();
        let samples = f.synthesize(1 << 20).unwrap();
        let back = fourier_analyze(&samples, &p).unwrap();
        assert!(back.max_coeff_distance(&f) < 1e-12);
    }

    #[test]
    fn direct_coefficient_matches_transform() {
        let p = params(3, 3);
        let f = random_polynomial(&p, 4, 0.4, CoeffLaw::UnitCircle, 3).unwrap();
        let samples = f.synthesize(1 << 20).unwrap();
        for (alpha, coeff) in f.coeffs().iter().take(5) {
            let direct = fourier_coefficient(&samples, &p, alpha).unwrap();
            assert!((direct - coeff).norm() < 1e-12);
        }
    }

    #[test]
    fn sup_norm_of_unimodular_monomial() {
        for order in [2u32, 3, 5] {
            let p = params(order, 2);
            let f =
                CyclicPolynomial::monomial(p, MultiIndex::new(vec![1, 1]), c(1.0, 0.0)).unwrap();
            let r = f.sup_norm(1 << 20, 0);
            assert!(r.certified);
            assert_relative_eq!(r.value, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn sup_norm_attained_at_one() {
        let p = params(2, 1);
        let f = CyclicPolynomial::from_terms(
            p,
            [
                (MultiIndex::new(vec![0]), c(1.0, 0.0)),
                (MultiIndex::new(vec![1]), c(1.0, 0.0)),
            ],
        )
        .unwrap();
        let r = f.sup_norm(16, 0);
        assert!(r.certified);
        assert_eq!(r.samples_used, 2);
        assert_relative_eq!(r.value, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn uncertified_sup_is_lower_bound() {
        let p = params(3, 8); // 6561 points
        let f = random_polynomial(&p, 5, 0.2, CoeffLaw::UnitCircle, 11).unwrap();
        let certified = f.sup_norm(1 << 20, 0);
        let sampled = f.sup_norm(100, 42);
        assert!(certified.certified);
        assert!(!sampled.certified);
        assert_eq!(sampled.samples_used, 100);
        assert!(sampled.value <= certified.value + 1e-12);
    }

    #[test]
    fn lp_norms() {
        let p = params(3, 2);
        let f = CyclicPolynomial::from_terms(
            p.clone(),
            [
                (MultiIndex::new(vec![0, 1]), c(3.0, 0.0)),
                (MultiIndex::new(vec![1, 0]), c(0.0, 4.0)),
            ],
        )
        .unwrap();
        assert_relative_eq!(f.coeff_lp_norm(2.0), 5.0, epsilon = 1e-12);
        let mono =
            CyclicPolynomial::monomial(p.clone(), MultiIndex::new(vec![2, 1]), c(0.0, -1.0))
                .unwrap();
        for pexp in [1.0, 1.5, 2.0, 4.0] {
            assert_relative_eq!(mono.coeff_lp_norm(pexp), 1.0, epsilon = 1e-12);
        }
        let ones = CyclicPolynomial::from_terms(
            p,
            [
                (MultiIndex::new(vec![0, 0]), c(1.0, 0.0)),
                (MultiIndex::new(vec![0, 1]), c(1.0, 0.0)),
                (MultiIndex::new(vec![1, 0]), c(1.0, 0.0)),
            ],
        )
        .unwrap();
        assert_relative_eq!(ones.coeff_lp_norm(1.0), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn l2_both_routes_agree() {
        let p = params(3, 4);
        let f = random_polynomial(&p, 6, 0.3, CoeffLaw::ComplexGaussian, 5).unwrap();
        let spectral = f.l2_norm();
        let spatial = f.l2_norm_spatial(1 << 20).unwrap();
        assert!((spectral - spatial).abs() <= 1e-10 * (1.0 + spectral));

        let two = CyclicPolynomial::from_terms(
            p.clone(),
            [
                (MultiIndex::new(vec![1, 0, 0, 0]), c(1.0, 0.0)),
                (MultiIndex::new(vec![0, 1, 0, 0]), c(1.0, 0.0)),
            ],
        )
        .unwrap();
        assert_relative_eq!(two.l2_norm(), 2f64.sqrt(), epsilon = 1e-12);
        assert_eq!(CyclicPolynomial::zero(p).l2_norm(), 0.0);
    }

    #[test]
    fn truncation() {
        let p = params(3, 2);
        let f = CyclicPolynomial::from_terms(
            p,
            [
                (MultiIndex::new(vec![0, 0]), c(1.0, 0.0)),
                (MultiIndex::new(vec![1, 0]), c(1.0, 0.0)),
                (MultiIndex::new(vec![1, 1]), c(1.0, 0.0)),
            ],
        )
        .unwrap();
        let t1 = f.truncate_by_degree(1);
        assert_eq!(t1.term_count(), 2);
        assert_eq!(f.truncate_by_degree(5), f);
        let t0 = f.truncate_by_degree(0);
        assert_eq!(t0.term_count(), 1);
        assert_eq!(t0.degree(), 0);
    }

    #[test]
    fn random_polynomial_full_density() {
        let p = params(3, 2);
        let f = random_polynomial(&p, 1, 1.0, CoeffLaw::UnitCircle, 9).unwrap();
        assert_eq!(f.term_count(), 3);
    }

    #[test]
    fn random_polynomial_deterministic() {
        let p = params(4, 3);
        let a = random_polynomial(&p, 3, 0.5, CoeffLaw::ComplexGaussian, 1234).unwrap();
        let b = random_polynomial(&p, 3, 0.5, CoeffLaw::ComplexGaussian, 1234).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_polynomial_binomial_statistics() {
        // 1000 draws at density 0.5 over the 10 indices with |α| ≤ 2:
        // the mean term count is Binomial(10, 1/2)/draw, so the sample mean
        // stays within 3σ of 5.
        let p = params(3, 3);
        let index_count = enumerate_indices(&p, 2).len();
        assert_eq!(index_count, 10);
        let draws = 1000;
        let mut total = 0usize;
        for seed in 0..draws {
            total += random_polynomial(&p, 2, 0.5, CoeffLaw::UnitCircle, 5000 + seed)
                .unwrap()
                .term_count();
        }
        let mean = total as f64 / draws as f64;
        let sigma = (index_count as f64 * 0.25).sqrt() / (draws as f64).sqrt();
        assert!(
            (mean - 5.0).abs() <= 3.0 * sigma,
            "mean {mean} outside 3σ band around 5"
        );
    }

    #[test]
    fn translation_rotates_coefficients() {
        let p = params(5, 3);
        let f = random_polynomial(&p, 6, 0.4, CoeffLaw::ComplexGaussian, 21).unwrap();
        let xi = [2u8, 0, 4];
        let g = f.translate(&xi).unwrap();
        // g(z) = f(ξ·z) pointwise.
        for t in p.enumerate_group_points(1 << 20).unwrap().step_by(7) {
            let shifted: Vec<u8> = t
                .iter()
                .zip(xi.iter())
                .map(|(&a, &b)| ((a as u32 + b as u32) % p.order()) as u8)
                .collect();
            assert!((g.eval_group(&t) - f.eval_group(&shifted)).norm() < 1e-12);
        }
    }
}
