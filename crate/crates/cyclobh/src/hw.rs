//! Qudit observables in the shift/phase unitary basis: the `N²` matrices
//! `X^l Z^m`, Fourier analysis of dense operators against their n-fold
//! tensor products, spectral norms by power iteration, and the
//! noncommutative coefficient quotient.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bh::{bh_exponent, cyclic_quotient_bound, BoundConfig};
use crate::error::{Error, Result};
use crate::group::GroupParams;
use crate::poly::PRUNE_TOL;

/// Default cap on the dense-matrix dimension `N^n`.
pub const DEFAULT_DENSE_BUDGET: u64 = 1 << 12;

/// Dense square complex matrix, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn add_assign(&mut self, other: &CMatrix, scale: Complex64) {
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += b * scale;
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.norm() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.at(k, j);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.at(i, j).conj());
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j) * x[j]).sum())
            .collect()
    }

    pub fn adjoint_matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.at(j, i).conj() * x[j]).sum())
            .collect()
    }

    /// Frobenius inner product normalized by the dimension:
    /// `tr(A†B) / dim`.
    pub fn normalized_inner(&self, other: &CMatrix) -> Complex64 {
        let s: Complex64 = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        s / self.dim as f64
    }

    pub fn max_entry_distance(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Tensor product (Kronecker), `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let n1 = self.dim;
        let n2 = other.dim;
        let mut out = CMatrix::zeros(n1 * n2);
        for i1 in 0..n1 {
            for j1 in 0..n1 {
                let a = self.at(i1, j1);
                if a.norm() == 0.0 {
                    continue;
                }
                for i2 in 0..n2 {
                    for j2 in 0..n2 {
                        out.set(i1 * n2 + i2, j1 * n2 + j2, a * other.at(i2, j2));
                    }
                }
            }
        }
        out
    }
}

/// One basis unitary `X^l Z^m` of order N: the shift `X e_j = e_{j+1}` and
/// phase `Z e_j = ω^j e_j` give `(X^l Z^m) e_j = ω^{jm} e_{j+l}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HwBasisElement {
    pub order: u32,
    pub l: u32,
    pub m: u32,
}

impl HwBasisElement {
    pub fn matrix(&self) -> CMatrix {
        let n = self.order as usize;
        let params = GroupParams::new(self.order, 1).expect("order ≥ 2");
        let mut out = CMatrix::zeros(n);
        for j in 0..n {
            let row = (j + self.l as usize) % n;
            let phase = params.omega_pow(self.m as i64 * j as i64);
            out.set(row, j, phase);
        }
        out
    }

    pub fn degree(&self) -> u32 {
        self.l + self.m
    }
}

/// All `N²` basis elements in row-major `(l, m)` order.
pub fn hw_basis(order: u32) -> Result<Vec<HwBasisElement>> {
    if order < 2 {
        return Err(Error::InvalidParameter("order must be ≥ 2".into()));
    }
    let mut v = Vec::with_capacity((order * order) as usize);
    for l in 0..order {
        for m in 0..order {
            v.push(HwBasisElement { order, l, m });
        }
    }
    Ok(v)
}

/// Index of an n-factor tensor basis element: per-site shift and phase
/// exponents, each kept in `[0, N−1]`. The degree adds the raw exponents
/// without modular reduction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HwIndex {
    pub l: Vec<u8>,
    pub m: Vec<u8>,
}

impl HwIndex {
    pub fn degree(&self) -> u32 {
        self.l.iter().map(|&v| v as u32).sum::<u32>()
            + self.m.iter().map(|&v| v as u32).sum::<u32>()
    }
}

/// Sparse observable in the tensor shift/phase basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HwObservable {
    pub order: u32,
    pub vars: usize,
    pub coeffs: BTreeMap<HwIndex, Complex64>,
}

impl HwObservable {
    pub fn new(order: u32, vars: usize) -> Self {
        HwObservable {
            order,
            vars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(order: u32, vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (HwIndex, Complex64)>,
    {
        let mut coeffs: BTreeMap<HwIndex, Complex64> = BTreeMap::new();
        for (idx, c) in terms {
            if idx.l.len() != vars || idx.m.len() != vars {
                return Err(Error::DimensionMismatch {
                    expected: vars,
                    got: idx.l.len().max(idx.m.len()),
                });
            }
            if idx
                .l
                .iter()
                .chain(idx.m.iter())
                .any(|&e| e as u32 >= order)
            {
                return Err(Error::InvalidParameter(
                    "shift/phase exponent out of range".into(),
                ));
            }
            *coeffs.entry(idx).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c| c.norm() >= PRUNE_TOL);
        Ok(HwObservable {
            order,
            vars,
            coeffs,
        })
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|k| k.degree()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, idx: &HwIndex) -> Complex64 {
        self.coeffs
            .get(idx)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn coeff_lp_norm(&self, p: f64) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }

    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn coeff_l2(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `A ⊗ B`: indices concatenate, so degrees add.
    pub fn tensor(&self, other: &HwObservable) -> Result<HwObservable> {
        if self.order != other.order {
            return Err(Error::InvalidParameter(
                "tensor factors must share the order".into(),
            ));
        }
        let mut terms = Vec::new();
        for (i1, c1) in &self.coeffs {
            for (i2, c2) in &other.coeffs {
                let mut l = i1.l.clone();
                l.extend_from_slice(&i2.l);
                let mut m = i1.m.clone();
                m.extend_from_slice(&i2.m);
                terms.push((HwIndex { l, m }, c1 * c2));
            }
        }
        HwObservable::from_terms(self.order, self.vars + other.vars, terms)
    }
}

/// Walks the nonzero entries of the tensor basis element with index `idx`:
/// column `c` (mixed-radix digits `c_j`) maps to row `c_j + l_j mod N` with
/// phase `ω^{Σ_j c_j m_j}`.
fn for_each_basis_entry<F>(params: &GroupParams, idx: &HwIndex, mut visit: F)
where
    F: FnMut(usize, usize, Complex64),
{
    let n = params.order() as usize;
    let vars = idx.l.len();
    let dim = n.pow(vars as u32);
    for col in 0..dim {
        let mut rem = col;
        let mut row = 0usize;
        let mut phase_exp = 0i64;
        // Digits from least significant; row is rebuilt in the same radix.
        let mut weight = 1usize;
        for j in (0..vars).rev() {
            let digit = rem % n;
            rem /= n;
            let shifted = (digit + idx.l[j] as usize) % n;
            row += shifted * weight;
            phase_exp += digit as i64 * idx.m[j] as i64;
            weight *= n;
        }
        visit(row, col, params.omega_pow(phase_exp));
    }
}

/// Enumerates tensor indices with degree ≤ d (lexicographic in `(l, m)`
/// interleaved per site).
pub fn enumerate_hw_indices(order: u32, vars: usize, d: u32) -> Vec<HwIndex> {
    let mut out = Vec::new();
    let mut digits = vec![0u8; 2 * vars];
    fn rec(order: u32, d: u32, pos: usize, used: u32, digits: &mut Vec<u8>, out: &mut Vec<HwIndex>) {
        if pos == digits.len() {
            let vars = digits.len() / 2;
            let l = (0..vars).map(|j| digits[2 * j]).collect();
            let m = (0..vars).map(|j| digits[2 * j + 1]).collect();
            out.push(HwIndex { l, m });
            return;
        }
        let cap = (order - 1).min(d - used);
        for e in 0..=cap {
            digits[pos] = e as u8;
            rec(order, d, pos + 1, used + e, digits, out);
        }
        digits[pos] = 0;
    }
    rec(order, d, 0, 0, &mut digits, &mut out);
    out
}

/// Dense synthesis `A = Σ Â(l⃗,m⃗) · X^{l₁}Z^{m₁} ⊗ ⋯`.
pub fn hw_synthesize(obs: &HwObservable, budget: u64) -> Result<CMatrix> {
    let params = GroupParams::new(obs.order, 1)?;
    let dim = (obs.order as u128).pow(obs.vars as u32);
    if dim > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: dim,
            budget,
        });
    }
    let dim = dim as usize;
    let mut out = CMatrix::zeros(dim);
    for (idx, c) in &obs.coeffs {
        for_each_basis_entry(&params, idx, |row, col, phase| {
            out.data[row * dim + col] += c * phase;
        });
    }
    Ok(out)
}

/// Fourier analysis of a dense operator: `Â(l⃗,m⃗) = tr(B† A)/N^n` for each
/// tensor basis element B, using the one-nonzero-per-column structure.
pub fn hw_analyze(a: &CMatrix, order: u32, vars: usize, budget: u64) -> Result<HwObservable> {
    let params = GroupParams::new(order, 1)?;
    let dim = (order as u128).pow(vars as u32);
    if dim > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: dim,
            budget,
        });
    }
    let dim = dim as usize;
    if a.dim != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: a.dim,
        });
    }
    let full_degree = 2 * (order - 1) * vars as u32;
    let mut terms = Vec::new();
    for idx in enumerate_hw_indices(order, vars, full_degree) {
        let mut acc = Complex64::new(0.0, 0.0);
        for_each_basis_entry(&params, &idx, |row, col, phase| {
            acc += phase.conj() * a.at(row, col);
        });
        let coeff = acc / dim as f64;
        if coeff.norm() >= PRUNE_TOL {
            terms.push((idx, coeff));
        }
    }
    HwObservable::from_terms(order, vars, terms)
}

/// Largest singular value by power iteration on `A†A` with randomized
/// restarts; closed forms for the 1×1 and 2×2 cases.
pub fn operator_norm(a: &CMatrix, seed: u64) -> Result<f64> {
    let n = a.dim;
    if n == 0 {
        return Ok(0.0);
    }
    if n == 1 {
        return Ok(a.at(0, 0).norm());
    }
    if n == 2 {
        // Eigenvalues of the 2×2 Hermitian A†A.
        let g = a.adjoint().matmul(a);
        let tr = g.at(0, 0).re + g.at(1, 1).re;
        let det = (g.at(0, 0) * g.at(1, 1) - g.at(0, 1) * g.at(1, 0)).re;
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        return Ok((tr / 2.0 + disc).max(0.0).sqrt());
    }
    let frob = a.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if frob == 0.0 {
        return Ok(0.0);
    }
    let mut best: Option<f64> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const RESTARTS: u32 = 3;
    const MAX_ITER: u32 = 20_000;
    const TOL: f64 = 1e-10;
    let mut converged_any = false;
    for _ in 0..RESTARTS {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in v.iter_mut() {
            *c /= norm;
        }
        let mut sigma = 0.0f64;
        let mut converged = false;
        for _ in 0..MAX_ITER {
            let av = a.matvec(&v);
            let new_sigma = av.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if new_sigma == 0.0 {
                sigma = 0.0;
                converged = true;
                break;
            }
            let mut w = a.adjoint_matvec(&av);
            let wn = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            for c in w.iter_mut() {
                *c /= wn;
            }
            let delta = (new_sigma - sigma).abs();
            sigma = new_sigma;
            v = w;
            if delta <= TOL * sigma.max(1.0) {
                converged = true;
                break;
            }
        }
        converged_any |= converged;
        best = Some(best.map_or(sigma, |b: f64| b.max(sigma)));
    }
    let best = best.expect("at least one restart");
    if !converged_any {
        return Err(Error::NonConvergence { best });
    }
    Ok(best)
}

/// Spectral norm of an observable through its dense synthesis.
pub fn observable_norm(obs: &HwObservable, seed: u64, budget: u64) -> Result<f64> {
    operator_norm(&hw_synthesize(obs, budget)?, seed)
}

/// The noncommutative coefficient quotient
/// `‖Â‖_{2d/(d+1)} / ‖A‖` and the explicit comparison value
/// `(N+1)^d ·` (prime-order cyclic bound).
#[derive(Clone, Debug, serde::Serialize)]
pub struct HwQuotient {
    pub d: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub quotient: f64,
    pub reference_bound: Option<f64>,
}

pub fn hw_bh_quotient(
    obs: &HwObservable,
    d: u32,
    seed: u64,
    budget: u64,
    cfg: &BoundConfig,
) -> Result<HwQuotient> {
    if obs.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if obs.degree() > d {
        return Err(Error::DegreeExceeded {
            degree: obs.degree(),
            bound: d,
        });
    }
    let d_eff = d.max(1);
    let lhs = obs.coeff_lp_norm(bh_exponent(d_eff));
    let rhs = observable_norm(obs, seed, budget)?;
    let params = GroupParams::new(obs.order, 1)?;
    let reference_bound = cyclic_quotient_bound(&params, d_eff, cfg)
        .map(|b| (obs.order as f64 + 1.0).powi(d_eff as i32) * b);
    Ok(HwQuotient {
        d: d_eff,
        lhs,
        rhs,
        quotient: lhs / rhs,
        reference_bound,
    })
}

/// Random observable of degree ≤ d: each admissible index is included
/// independently with probability `density`, Gaussian coefficients.
pub fn random_observable(
    order: u32,
    vars: usize,
    d: u32,
    density: f64,
    seed: u64,
) -> Result<HwObservable> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidParameter("density must lie in (0,1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    for idx in enumerate_hw_indices(order, vars, d) {
        if rng.gen::<f64>() < density {
            let u: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
            let v: f64 = rng.gen();
            let r = (-2.0 * u.ln()).sqrt() / std::f64::consts::SQRT_2;
            let phi = 2.0 * std::f64::consts::PI * v;
            terms.push((idx, Complex64::new(r * phi.cos(), r * phi.sin())));
        }
    }
    HwObservable::from_terms(order, vars, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis_matrix(order: u32, l: u32, m: u32) -> CMatrix {
        HwBasisElement { order, l, m }.matrix()
    }

    #[test]
    fn identity_element() {
        let e = basis_matrix(3, 0, 0);
        assert!(e.max_entry_distance(&CMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn shift_and_phase_have_order_n() {
        for order in [2u32, 3, 5] {
            let x = basis_matrix(order, 1, 0);
            let z = basis_matrix(order, 0, 1);
            let mut xp = CMatrix::identity(order as usize);
            let mut zp = CMatrix::identity(order as usize);
            for _ in 0..order {
                xp = xp.matmul(&x);
                zp = zp.matmul(&z);
            }
            let id = CMatrix::identity(order as usize);
            assert!(xp.max_entry_distance(&id) < 1e-12, "X^{order} ≠ 1");
            assert!(zp.max_entry_distance(&id) < 1e-12, "Z^{order} ≠ 1");
        }
    }

    #[test]
    fn commutation_relation() {
        // ZX = ω XZ.
        for order in [2u32, 3, 5] {
            let params = GroupParams::new(order, 1).unwrap();
            let x = basis_matrix(order, 1, 0);
            let z = basis_matrix(order, 0, 1);
            let zx = z.matmul(&x);
            let mut xz = x.matmul(&z);
            for v in xz.data.iter_mut() {
                *v *= params.omega();
            }
            assert!(zx.max_entry_distance(&xz) < 1e-12);
        }
    }

    #[test]
    fn unitarity() {
        for order in [2u32, 3, 5] {
            for e in hw_basis(order).unwrap() {
                let m = e.matrix();
                let prod = m.adjoint().matmul(&m);
                assert!(prod.max_entry_distance(&CMatrix::identity(order as usize)) < 1e-12);
            }
        }
    }

    #[test]
    fn orthonormal_under_normalized_trace() {
        for order in [2u32, 3, 5] {
            let basis = hw_basis(order).unwrap();
            let mats: Vec<CMatrix> = basis.iter().map(|e| e.matrix()).collect();
            for (i, a) in mats.iter().enumerate() {
                for (j, b) in mats.iter().enumerate() {
                    let inner = a.normalized_inner(b);
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (inner - c(expected, 0.0)).norm() < 1e-12,
                        "order {order}: ({i},{j}) inner {inner}"
                    );
                }
            }
        }
    }

    #[test]
    fn specific_traces() {
        let x = basis_matrix(3, 1, 0);
        let z = basis_matrix(3, 0, 1);
        let xz = basis_matrix(3, 1, 1);
        assert!((xz.normalized_inner(&xz) - c(1.0, 0.0)).norm() < 1e-12);
        assert!(x.normalized_inner(&z).norm() < 1e-12);
    }

    #[test]
    fn analyze_identity() {
        let obs = hw_analyze(&CMatrix::identity(9), 3, 2, DEFAULT_DENSE_BUDGET).unwrap();
        assert_eq!(obs.coeffs.len(), 1);
        let zero = HwIndex {
            l: vec![0, 0],
            m: vec![0, 0],
        };
        assert!((obs.coefficient(&zero) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn analyze_tensor_basis_element() {
        let x = basis_matrix(3, 1, 0);
        let z = basis_matrix(3, 0, 1);
        let a = x.kron(&z);
        let obs = hw_analyze(&a, 3, 2, DEFAULT_DENSE_BUDGET).unwrap();
        assert_eq!(obs.coeffs.len(), 1);
        let idx = HwIndex {
            l: vec![1, 0],
            m: vec![0, 1],
        };
        assert!((obs.coefficient(&idx) - c(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(obs.degree(), 2);
    }

    #[test]
    fn analyze_synthesize_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let dim = 9;
        let mut a = CMatrix::zeros(dim);
        for v in a.data.iter_mut() {
            *v = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
        let obs = hw_analyze(&a, 3, 2, DEFAULT_DENSE_BUDGET).unwrap();
        let back = hw_synthesize(&obs, DEFAULT_DENSE_BUDGET).unwrap();
        assert!(back.max_entry_distance(&a) < 1e-9);
        // Parseval against the normalized Frobenius norm.
        let frob_sq: f64 = a.data.iter().map(|v| v.norm_sqr()).sum::<f64>() / dim as f64;
        let coeff_sq: f64 = obs.coeffs.values().map(|v| v.norm_sqr()).sum();
        assert!((frob_sq - coeff_sq).abs() < 1e-9);
    }

    #[test]
    fn norm_of_unitaries_and_scalings() {
        let x = basis_matrix(3, 1, 0);
        assert_relative_eq!(operator_norm(&x, 0).unwrap(), 1.0, epsilon = 1e-9);
        let mut scaled = basis_matrix(5, 2, 3);
        for v in scaled.data.iter_mut() {
            *v *= c(-0.75, 0.5);
        }
        assert_relative_eq!(
            operator_norm(&scaled, 0).unwrap(),
            c(-0.75, 0.5).norm(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn norm_identity_plus_shift() {
        // Eigenvalues of I + X are 1 + ω^k, with modulus max 2.
        let mut a = CMatrix::identity(3);
        a.add_assign(&basis_matrix(3, 1, 0), c(1.0, 0.0));
        assert_relative_eq!(operator_norm(&a, 1).unwrap(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn quotient_of_basis_element_is_one() {
        let idx = HwIndex {
            l: vec![1, 0],
            m: vec![1, 1],
        };
        let obs = HwObservable::from_terms(3, 2, [(idx, c(0.0, -2.0))]).unwrap();
        let cfg = BoundConfig::default();
        let q = hw_bh_quotient(&obs, 3, 0, DEFAULT_DENSE_BUDGET, &cfg).unwrap();
        assert_relative_eq!(q.quotient, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn quotient_identity_plus_shift() {
        let one = HwIndex {
            l: vec![0],
            m: vec![0],
        };
        let x = HwIndex {
            l: vec![1],
            m: vec![0],
        };
        let obs =
            HwObservable::from_terms(3, 1, [(one, c(1.0, 0.0)), (x, c(1.0, 0.0))]).unwrap();
        let cfg = BoundConfig::default();
        let q = hw_bh_quotient(&obs, 1, 0, DEFAULT_DENSE_BUDGET, &cfg).unwrap();
        assert_relative_eq!(q.lhs, 2.0, epsilon = 1e-12);
        assert_relative_eq!(q.rhs, 2.0, epsilon = 1e-9);
        assert!((q.quotient - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn norm_dominance_sandwich() {
        // ‖Â‖₂ ≤ ‖A‖ ≤ Σ|Â| on random instances.
        for seed in 0..10 {
            let obs = random_observable(3, 2, 2, 0.5, 600 + seed).unwrap();
            if obs.is_zero() {
                continue;
            }
            let norm = observable_norm(&obs, seed, DEFAULT_DENSE_BUDGET).unwrap();
            assert!(obs.coeff_l2() <= norm + 1e-9, "seed {seed}");
            assert!(norm <= obs.coeff_l1() + 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn degree_adds_under_tensor() {
        let a = HwObservable::from_terms(
            3,
            1,
            [(
                HwIndex {
                    l: vec![2],
                    m: vec![1],
                },
                c(1.0, 0.0),
            )],
        )
        .unwrap();
        let b = HwObservable::from_terms(
            3,
            1,
            [(
                HwIndex {
                    l: vec![0],
                    m: vec![2],
                },
                c(0.0, 1.0),
            )],
        )
        .unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.degree(), a.degree() + b.degree());
        assert_eq!(t.degree(), 5);
    }

    #[test]
    fn dense_budget_is_enforced() {
        let a = CMatrix::identity(4);
        assert!(matches!(
            hw_analyze(&a, 2, 13, DEFAULT_DENSE_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
        let obs = HwObservable::from_terms(
            2,
            13,
            [(
                HwIndex {
                    l: vec![0; 13],
                    m: vec![0; 13],
                },
                c(1.0, 0.0),
            )],
        )
        .unwrap();
        assert!(matches!(
            hw_synthesize(&obs, DEFAULT_DENSE_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn composite_order_has_no_reference_bound() {
        let obs = random_observable(4, 1, 2, 1.0, 1).unwrap();
        let cfg = BoundConfig::default();
        let q = hw_bh_quotient(&obs, 2, 0, DEFAULT_DENSE_BUDGET, &cfg).unwrap();
        assert!(q.reference_bound.is_none());
    }
}
