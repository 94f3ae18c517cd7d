//! Property-based invariants across random group sizes and polynomials.

use num_complex::Complex64;
use proptest::prelude::*;

use cyclobh::bh::{bh_quotient, sidon_quotient, BoundConfig};
use cyclobh::group::GroupParams;
use cyclobh::poly::{fourier_analyze, random_polynomial, CoeffLaw, CyclicPolynomial};
use cyclobh::split::{
    full_splitting, max_support_projection, support_homogeneous_parts, tau_factor, SplitMethod,
    PROJECTION_GROWTH,
};

const BUDGET: u64 = 1 << 20;

fn arb_law() -> impl Strategy<Value = CoeffLaw> {
    prop_oneof![Just(CoeffLaw::UnitCircle), Just(CoeffLaw::ComplexGaussian)]
}

/// A nonzero random polynomial over a small group.
fn arb_poly(
    max_order: u32,
    max_vars: usize,
) -> impl Strategy<Value = (GroupParams, CyclicPolynomial)> {
    (2..=max_order, 1..=max_vars, any::<u64>(), arb_law(), 2u32..=8).prop_filter_map(
        "nonzero polynomial",
        |(order, vars, seed, law, dmax)| {
            let params = GroupParams::new(order, vars).ok()?;
            let d = dmax.min((order - 1) * vars as u32);
            let count = cyclobh::enumerate_indices(&params, d).len();
            let density = (24.0 / count as f64).clamp(0.05, 1.0);
            let f = random_polynomial(&params, d, density, law, seed).ok()?;
            if f.is_zero() {
                None
            } else {
                Some((params, f))
            }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Analyzing the value table of a polynomial returns the polynomial.
    #[test]
    fn transform_roundtrip((params, f) in arb_poly(5, 5)) {
        let samples = f.synthesize(BUDGET).unwrap();
        let back = fourier_analyze(&samples, &params).unwrap();
        prop_assert!(back.max_coeff_distance(&f) < 1e-10);
    }

    /// Spectral and spatial L2 norms agree.
    #[test]
    fn parseval((_params, f) in arb_poly(5, 5)) {
        let spectral_sq = f.coeff_lp_norm(2.0).powi(2);
        let samples = f.synthesize(BUDGET).unwrap();
        let spatial_sq: f64 =
            samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / samples.len() as f64;
        prop_assert!((spectral_sq - spatial_sq).abs() <= 1e-10 * (1.0 + spectral_sq));
    }

    /// Certified sup norms are invariant under group translations.
    #[test]
    fn sup_translation_invariance((params, f) in arb_poly(4, 4), shift_seed in any::<u64>()) {
        let xi: Vec<u8> = (0..params.vars())
            .map(|j| (((shift_seed >> (j * 4)) as u32) % params.order()) as u8)
            .collect();
        let g = f.translate(&xi).unwrap();
        let a = f.sup_norm(BUDGET, 0);
        let b = g.sup_norm(BUDGET, 0);
        prop_assert!(a.certified && b.certified);
        prop_assert!((a.value - b.value).abs() <= 1e-12 * (1.0 + a.value));
    }

    /// ℓ_p coefficient norms never increase with p.
    #[test]
    fn lp_monotone_in_p((_params, f) in arb_poly(5, 4)) {
        let ps = [1.0, 1.2, 1.5, 2.0, 3.0, 8.0];
        let mut last = f64::INFINITY;
        for &p in &ps {
            let v = f.coeff_lp_norm(p);
            prop_assert!(v <= last * (1.0 + 1e-12));
            last = v;
        }
    }

    /// Support-homogeneous parts partition the terms and reassemble exactly.
    #[test]
    fn parts_reassemble((_params, f) in arb_poly(5, 5)) {
        let dec = support_homogeneous_parts(&f);
        prop_assert!(dec.sum().max_coeff_distance(&f) < 1e-15);
        for (j, part) in dec.parts.iter().enumerate() {
            prop_assert!(part.coeffs().keys().all(|a| a.support_size() == j));
        }
    }

    /// Each τ factor is at least |1−ω|^{support size} in modulus.
    #[test]
    fn tau_lower_bound((params, f) in arb_poly(5, 5)) {
        let one = Complex64::new(1.0, 0.0);
        let chord = (one - params.omega()).norm();
        for alpha in f.coeffs().keys() {
            let t = tau_factor(&params, alpha, one, params.omega()).unwrap();
            prop_assert!(t.norm() >= chord.powi(alpha.support_size() as i32) - 1e-12);
        }
    }

    /// The marked projection is bounded by (2√2+2)^ℓ on the doubled domain.
    #[test]
    fn projection_bounded((params, f) in arb_poly(5, 4)) {
        let marked = max_support_projection(&f, Complex64::new(1.0, 0.0), params.omega()).unwrap();
        let lhs = marked.sup_norm(BUDGET, 0);
        let rhs = f.sup_norm(BUDGET, 0);
        prop_assert!(lhs.certified && rhs.certified);
        let ell = f.max_support_size() as i32;
        prop_assert!(lhs.value <= PROJECTION_GROWTH.powi(ell) * rhs.value * (1.0 + 1e-12));
    }

    /// Both recovery routes agree with the direct partition on prime orders.
    #[test]
    fn split_routes_agree(seed in any::<u64>(), order in prop_oneof![Just(3u32), Just(5u32)]) {
        let params = GroupParams::new(order, 3).unwrap();
        let f = random_polynomial(&params, 3, 0.5, CoeffLaw::ComplexGaussian, seed).unwrap();
        prop_assume!(!f.is_zero());
        let direct = support_homogeneous_parts(&f);
        for method in [SplitMethod::Prime, SplitMethod::Vandermonde] {
            let dec = full_splitting(&f, method, BUDGET, 0).unwrap();
            prop_assert_eq!(dec.parts.len(), direct.parts.len());
            for (a, b) in dec.parts.iter().zip(direct.parts.iter()) {
                prop_assert!(a.max_coeff_distance(b) < 1e-8);
            }
        }
    }

    /// The quotient is scale invariant and translation invariant.
    #[test]
    fn quotient_invariances((params, f) in arb_poly(4, 3), scale_seed in 1u32..1000, shift_seed in any::<u64>()) {
        let cfg = BoundConfig::default();
        let d = f.degree().max(1);
        let q0 = bh_quotient(&f, d, BUDGET, 0, &cfg).unwrap().quotient;
        let c = Complex64::new(scale_seed as f64 / 100.0, -(scale_seed as f64) / 251.0);
        let q1 = bh_quotient(&f.scale(c), d, BUDGET, 0, &cfg).unwrap().quotient;
        prop_assert!((q0 - q1).abs() <= 1e-10 * (1.0 + q0));
        let xi: Vec<u8> = (0..params.vars())
            .map(|j| (((shift_seed >> (j * 4)) as u32) % params.order()) as u8)
            .collect();
        let q2 = bh_quotient(&f.translate(&xi).unwrap(), d, BUDGET, 0, &cfg)
            .unwrap()
            .quotient;
        prop_assert!((q0 - q2).abs() <= 1e-10 * (1.0 + q0));
    }

    /// The ℓ₁ quotient dominates the ℓ_{2d/(d+1)} quotient.
    #[test]
    fn sidon_dominates((_params, f) in arb_poly(4, 4)) {
        let cfg = BoundConfig::default();
        let d = f.degree().max(1);
        let s = sidon_quotient(&f, BUDGET, 0).unwrap();
        let q = bh_quotient(&f, d, BUDGET, 0, &cfg).unwrap().quotient;
        prop_assert!(s >= q - 1e-12);
    }
}
