//! Convex-hull maximum-modulus experiments: the cosine/sine moment system
//! whose solution writes small complex numbers as convex combinations of
//! roots of unity, sampled hull suprema and their ratio to the group
//! supremum, the explicit order-3 witness polynomial, and the disc-route
//! quotient constant.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::GroupParams;
use crate::linalg::RealMatrix;
use crate::poly::{CyclicPolynomial, NormReport};

/// The moment-matching system for a cyclic group of odd order `2N−1`
/// (parameterized by `N = n_small`): row 0 is all ones, rows 1…N−1 are
/// `cos(kmθ)` and rows N…2N−2 are `sin(kmθ)` with `θ = 2π/(2N−1)`. Solving
/// `D p = v_z` with `v_z = (1, Re z, …, Re z^{N−1}, Im z, …, Im z^{N−1})`
/// expresses the moment vector of `z` as a combination of the roots of
/// unity, and the weights stay nonnegative for `|z|` below the certified
/// radius.
///
/// Two radii are carried. `epsilon0 = 1/(2N−1)^2` is the operative radius:
/// it is certified because `‖D^{-1}‖_{∞→∞} ≤ 2N−1 = ‖D‖_{∞→∞}` holds for
/// these matrices, and it satisfies the stated bracket `(0, 1/(2N−1)^2]`
/// with equality. `epsilon0_from_inverse_norm = 1/((2N−1)·‖D^{-1}‖_{∞→∞})`
/// is the larger radius from the perturbation argument; the inverse norm is
/// O(1), not ≥ 2N−1, so this radius is the wider of the two.
#[derive(Clone, Debug)]
pub struct HullWeightSystem {
    pub n_small: u32,
    /// Group order `2N−1`.
    pub group_order: u32,
    pub matrix: RealMatrix,
    pub inverse: RealMatrix,
    /// `‖D^{-1}‖_{∞→∞}` (max absolute row sum of the inverse).
    pub inverse_inf_norm: f64,
    /// `‖D‖_{∞→∞} = 2N−1` (the all-ones row).
    pub forward_inf_norm: f64,
    /// Operative certified radius `1/(2N−1)^2`.
    pub epsilon0: f64,
    /// Radius `1/((2N−1)·‖D^{-1}‖_{∞→∞})` from the inverse-norm bound.
    pub epsilon0_from_inverse_norm: f64,
}

/// Builds the moment system for `n_small ≥ 2` and certifies the basic
/// identities: nonsingularity and `D · uniform = (1, 0, …, 0)`.
pub fn build_dn_system(n_small: u32) -> Result<HullWeightSystem> {
    if n_small < 2 {
        return Err(Error::InvalidParameter(
            "the moment system needs parameter ≥ 2".into(),
        ));
    }
    let k = (2 * n_small - 1) as usize;
    let theta = 2.0 * std::f64::consts::PI / k as f64;
    let mut d = RealMatrix::zero(k);
    for col in 0..k {
        d.set(0, col, 1.0);
    }
    for m in 1..n_small as usize {
        for col in 0..k {
            let angle = (col * m) as f64 * theta;
            d.set(m, col, angle.cos());
            d.set(n_small as usize - 1 + m, col, angle.sin());
        }
    }
    let inverse = d.inverse()?;
    let inverse_inf_norm = inverse.inf_norm();
    let forward_inf_norm = d.inf_norm();
    let uniform = vec![1.0 / k as f64; k];
    let image = d.matvec(&uniform);
    if (image[0] - 1.0).abs() > 1e-10 || image[1..].iter().any(|v| v.abs() > 1e-10) {
        return Err(Error::InvalidParameter(format!(
            "moment identity failed: D·uniform = {image:?}"
        )));
    }
    let group_order = 2 * n_small - 1;
    Ok(HullWeightSystem {
        n_small,
        group_order,
        matrix: d,
        inverse,
        inverse_inf_norm,
        forward_inf_norm,
        epsilon0: 1.0 / (group_order as f64).powi(2),
        epsilon0_from_inverse_norm: 1.0 / (group_order as f64 * inverse_inf_norm),
    })
}

impl HullWeightSystem {
    /// Weights `p_k ≥ 0` with `z^m = Σ_k p_k ξ_k^m` for `0 ≤ m ≤ N−1`,
    /// `ξ_k = e^{2πik/(2N−1)}`. Requires `|z| ≤ epsilon0`.
    pub fn hull_coefficients(&self, z: Complex64) -> Result<Vec<f64>> {
        // One-ulp slack so points constructed to sit exactly on the radius
        // are not rejected by rounding.
        if z.norm() > self.epsilon0 * (1.0 + 1e-12) {
            return Err(Error::RadiusExceeded {
                modulus: z.norm(),
                radius: self.epsilon0,
            });
        }
        let p = self.solve_weights(z)?;
        for (k, &w) in p.iter().enumerate() {
            if w < -1e-12 {
                return Err(Error::NegativeWeight {
                    position: k,
                    weight: w,
                });
            }
        }
        Ok(p)
    }

    /// The raw solve, without the radius gate; used by the certificates.
    pub fn solve_weights(&self, z: Complex64) -> Result<Vec<f64>> {
        let n = self.n_small as usize;
        let k = self.matrix.n;
        let mut v = vec![0.0; k];
        v[0] = 1.0;
        let mut zp = Complex64::new(1.0, 0.0);
        for m in 1..n {
            zp *= z;
            v[m] = zp.re;
            v[n - 1 + m] = zp.im;
        }
        self.matrix.solve(&v)
    }

    /// Max residual of the complex moment equations for a weight vector.
    pub fn moment_residual(&self, z: Complex64, weights: &[f64]) -> f64 {
        let k = self.group_order as usize;
        let theta = 2.0 * std::f64::consts::PI / k as f64;
        let mut worst = 0.0f64;
        let mut zp = Complex64::new(1.0, 0.0);
        for m in 0..self.n_small as usize {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &w) in weights.iter().enumerate() {
                let angle = (j * m) as f64 * theta;
                acc += Complex64::new(angle.cos(), angle.sin()) * w;
            }
            worst = worst.max((acc - zp).norm());
            zp *= z;
        }
        worst
    }
}

/// The partial hull-versus-group bound `d · ε₀^{−d}` valid for polynomials
/// whose local degree fits the moment system.
pub fn gmp_partial_bound(system: &HullWeightSystem, d: u32) -> f64 {
    d as f64 * system.epsilon0.powi(-(d as i32))
}

/// A sampled hull supremum and its ratio to the group supremum. The hull
/// value is a lower bound on the true hull supremum (sampling only), and the
/// sampled set always contains the group points, so `ratio ≥ 1`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GmpRatio {
    pub hull_sup: f64,
    pub group_sup: NormReport,
    pub ratio: f64,
    pub hull_samples: u64,
}

/// Parameter values `{i/j : 1 ≤ j ≤ s}` in [0, 1]: nested as `s` grows, so
/// suprema over the induced point sets are monotone in `s`.
fn nested_unit_grid(s: u32) -> Vec<f64> {
    let mut ts = Vec::new();
    for j in 1..=s.max(1) {
        for i in 0..=j {
            ts.push(i as f64 / j as f64);
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// Boundary points of the convex polygon of the order-N roots of unity:
/// each edge `[ω^k, ω^{k+1}]` sampled at the nested grid.
fn boundary_points(params: &GroupParams, s: u32) -> Vec<Complex64> {
    let n = params.order();
    let ts = nested_unit_grid(s);
    let mut pts = Vec::with_capacity(n as usize * ts.len());
    for k in 0..n {
        let a = params.omega_pow_u(k);
        let b = params.omega_pow_u((k + 1) % n);
        for &t in &ts {
            pts.push(a * (1.0 - t) + b * t);
        }
    }
    pts
}

/// Estimates the supremum of `|f|` over the product of convex hulls by
/// sampling coordinate-wise boundary points (the per-coordinate maximum
/// modulus principle confines maximizers to edges): the full product grid
/// while it fits the budget, single-coordinate edge sweeps from group-point
/// bases, and a fixed batch of random edge tuples. All pure group points are
/// included via the group supremum.
pub fn hull_sup_estimate(
    f: &CyclicPolynomial,
    samples_per_edge: u32,
    seed: u64,
    budget: u64,
) -> GmpRatio {
    let params = f.params();
    let n_vars = params.vars();
    let group_sup = f.sup_norm(budget, seed);
    let mut hull_sup = group_sup.value;
    let mut samples = group_sup.samples_used;

    // Full product over the largest nested grid that fits the budget. The
    // cap depends only on (N, n, budget), so enlarging samples_per_edge only
    // ever enlarges the evaluated set.
    let mut s_cap = 0u32;
    for s in 1..=samples_per_edge {
        let b = boundary_points(params, s).len() as u128;
        if b.checked_pow(n_vars as u32).map_or(false, |t| t <= budget as u128) {
            s_cap = s;
        } else {
            break;
        }
    }
    if s_cap >= 1 {
        let pts = boundary_points(params, s_cap);
        let total = (pts.len() as u128).pow(n_vars as u32) as u64;
        let mut z = vec![Complex64::new(0.0, 0.0); n_vars];
        for linear in 0..total {
            let mut rem = linear;
            for slot in z.iter_mut().rev() {
                *slot = pts[(rem % pts.len() as u64) as usize];
                rem /= pts.len() as u64;
            }
            hull_sup = hull_sup.max(f.evaluate(&z).expect("dimension fixed").norm());
        }
        samples += total;
    }

    // Single-coordinate sweeps over the full requested grid, anchored at
    // deterministic group-point bases.
    let pts = boundary_points(params, samples_per_edge);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xB0A2_55ED);
    let base_count = 8usize.min(params.point_count().min(64) as usize).max(1);
    let mut bases: Vec<Vec<u8>> = vec![vec![0u8; n_vars]];
    while bases.len() < base_count {
        let t: Vec<u8> = (0..n_vars)
            .map(|_| rng.gen_range(0..params.order()) as u8)
            .collect();
        bases.push(t);
    }
    for base in &bases {
        let mut z = params.point_coords(base);
        for j in 0..n_vars {
            let saved = z[j];
            for &b in &pts {
                z[j] = b;
                hull_sup = hull_sup.max(f.evaluate(&z).expect("dimension fixed").norm());
            }
            z[j] = saved;
            samples += pts.len() as u64;
        }
    }

    // Random edge tuples, count independent of samples_per_edge.
    let random_tuples = 2048u64.min(budget);
    let mut z = vec![Complex64::new(0.0, 0.0); n_vars];
    for _ in 0..random_tuples {
        for slot in z.iter_mut() {
            let k = rng.gen_range(0..params.order());
            let t: f64 = rng.gen();
            let a = params.omega_pow_u(k);
            let b = params.omega_pow_u((k + 1) % params.order());
            *slot = a * (1.0 - t) + b * t;
        }
        hull_sup = hull_sup.max(f.evaluate(&z).expect("dimension fixed").norm());
    }
    samples += random_tuples;

    GmpRatio {
        hull_sup,
        ratio: hull_sup / group_sup.value,
        group_sup,
        hull_samples: samples,
    }
}

/// The explicit order-3 witness: a quadratic interpolating unimodular values
/// at the cube roots of unity whose modulus at the edge midpoint
/// `z₀ = (1+ω)/2` reaches `(1+2√3)/4 > 1`.
#[derive(Clone, Debug)]
pub struct EdgeWitness {
    pub polynomial: CyclicPolynomial,
    pub witness: Complex64,
    /// `|p(z₀)|`.
    pub witness_modulus: f64,
    /// `max_k |p(ω^k)|`.
    pub group_sup: f64,
}

pub fn n3_counterexample() -> EdgeWitness {
    let params = GroupParams::new(3, 1).expect("static parameters");
    let roots: Vec<Complex64> = (0..3).map(|k| params.omega_pow_u(k)).collect();
    let z0 = (roots[0] + roots[1]) / 2.0;

    // Lagrange basis L_k(z) = Π_{j≠k} (z − ω^j)/(ω^k − ω^j); the value at
    // each node is rotated onto the positive real axis so the three terms
    // add constructively at z₀.
    let mut coeffs = [Complex64::new(0.0, 0.0); 3];
    for k in 0..3 {
        let others: Vec<Complex64> = (0..3).filter(|&j| j != k).map(|j| roots[j]).collect();
        let denom = (roots[k] - others[0]) * (roots[k] - others[1]);
        let l_at_z0 = (z0 - others[0]) * (z0 - others[1]) / denom;
        let value = l_at_z0.conj() / l_at_z0.norm();
        // L_k(z) = (z^2 − (r0+r1) z + r0 r1)/denom, scaled by the chosen
        // unimodular node value.
        let scale = value / denom;
        coeffs[0] += scale * (others[0] * others[1]);
        coeffs[1] += scale * -(others[0] + others[1]);
        coeffs[2] += scale;
    }
    let polynomial = CyclicPolynomial::from_terms(
        params,
        coeffs.iter().enumerate().map(|(e, &c)| {
            (
                crate::group::MultiIndex::new(vec![e as u8]),
                c,
            )
        }),
    )
    .expect("static construction");
    let witness_modulus = polynomial.evaluate(&[z0]).expect("one variable").norm();
    let group_sup = (0..3)
        .map(|k| polynomial.eval_group(&[k]).norm())
        .fold(0.0, f64::max);
    EdgeWitness {
        polynomial,
        witness: z0,
        witness_modulus,
        group_sup,
    }
}

/// Configuration for the torus quotient constant in the sub-exponential
/// form `base^{√(d log d)}`.
#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct TorusBhConfig {
    pub base: Option<f64>,
}

impl Default for TorusBhConfig {
    fn default() -> Self {
        TorusBhConfig { base: Some(2.0) }
    }
}

/// `cos(π/N)^{−1}`, the smallest c with `c^{−1}·disc ⊂ hull of Ω_N`.
pub fn hull_disc_factor(order: u32) -> f64 {
    1.0 / (std::f64::consts::PI / order as f64).cos()
}

/// The disc-route hull quotient constant `c_N^d ·` (torus constant).
pub fn convex_hull_bh_constant(
    params: &GroupParams,
    d: u32,
    torus_constant: Option<f64>,
    cfg: &TorusBhConfig,
) -> Result<f64> {
    let torus = match torus_constant.or_else(|| {
        cfg.base.map(|b| {
            let df = d.max(1) as f64;
            b.powf((df * df.ln()).sqrt())
        })
    }) {
        Some(v) => v,
        None => return Err(Error::MissingTorusConstant),
    };
    Ok(hull_disc_factor(params.order()).powi(d.max(1) as i32) * torus)
}
