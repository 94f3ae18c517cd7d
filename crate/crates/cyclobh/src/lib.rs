//! Numerical toolkit for Fourier analysis on products of cyclic groups:
//! sparse polynomials on `Ω_N^n` with exact transforms and norms,
//! support-homogeneous splitting operators with certified growth bounds,
//! coefficient-versus-sup quotient experiments with explicit prime-order
//! comparison constants, convex-hull maximum-modulus sampling, threshold
//! learning of bounded low-degree polynomials, and the qudit shift/phase
//! observable analogues.

pub mod bh;
pub mod error;
pub mod group;
pub mod hw;
pub mod io;
pub mod learn;
pub mod linalg;
pub mod maxmod;
pub mod poly;
pub mod split;

pub use error::{Error, Result};
pub use group::{enumerate_indices, GroupParams, MultiIndex, DEFAULT_ENUMERATION_BUDGET};
pub use poly::{
    fourier_analyze, fourier_coefficient, random_polynomial, CoeffLaw, CyclicPolynomial,
    NormReport, DEFAULT_SUP_BUDGET,
};
pub use split::{
    full_splitting, max_support_projection, max_support_projection_restricted,
    split_max_support_prime, split_max_support_vandermonde, support_homogeneous_parts,
    SplitMethod, SupportDecomposition,
};
