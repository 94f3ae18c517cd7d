//! Multi-index arithmetic and enumeration of the points of `Ω_N^n`, the
//! n-fold product of the multiplicative cyclic group of order N.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on exhaustive enumerations (`N^n` points).
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 100_000_000;

/// Tolerance used when validating roots of unity.
const ROOT_TOL: f64 = 1e-12;

/// The ambient group `Ω_N^n`: order of the cyclic factor, number of
/// variables, and a precomputed table of the powers of the primitive root.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupParams {
    order: u32,
    vars: usize,
    /// `omega_powers[k] = e^{2πik/N}`, computed directly per `k` so each
    /// entry is correctly rounded rather than accumulated.
    omega_powers: Vec<Complex64>,
}

impl GroupParams {
    pub fn new(order: u32, vars: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidParameter(format!(
                "group order must be at least 2, got {order}"
            )));
        }
        if vars == 0 {
            return Err(Error::InvalidParameter(
                "number of variables must be at least 1".into(),
            ));
        }
        let n = order as f64;
        let omega_powers: Vec<Complex64> = (0..order)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * (k as f64) / n;
                Complex64::new(t.cos(), t.sin())
            })
            .collect();
        debug_assert!((omega_powers[0] - Complex64::new(1.0, 0.0)).norm() < ROOT_TOL);
        debug_assert!(order < 2 || omega_powers[1..].iter().all(|w| (w - 1.0).norm() > ROOT_TOL));
        Ok(Self {
            order,
            vars,
            omega_powers,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// The primitive root `ω = e^{2πi/N}`.
    pub fn omega(&self) -> Complex64 {
        self.omega_powers[1 % self.order as usize]
    }

    /// `ω^k` for arbitrary integer `k` (reduced mod N via the table).
    pub fn omega_pow(&self, k: i64) -> Complex64 {
        self.omega_powers[k.rem_euclid(self.order as i64) as usize]
    }

    /// `ω^k` for `k` already in `[0, N)`.
    #[inline]
    pub fn omega_pow_u(&self, k: u32) -> Complex64 {
        self.omega_powers[k as usize]
    }

    /// Number of group points `N^n` (may exceed `u64`).
    pub fn point_count(&self) -> u128 {
        (self.order as u128).pow(self.vars as u32)
    }

    /// Total number of multi-indices, which equals the number of points.
    pub fn index_count(&self) -> u128 {
        self.point_count()
    }

    /// Complex coordinates of the point with exponent vector `t`.
    pub fn point_coords(&self, t: &[u8]) -> Vec<Complex64> {
        t.iter().map(|&d| self.omega_powers[d as usize]).collect()
    }

    /// Exponent vector of the point with linear index `idx` in the canonical
    /// (mixed-radix, first coordinate most significant) order.
    pub fn point_from_linear(&self, mut idx: u128) -> Vec<u8> {
        let n = self.order as u128;
        let mut digits = vec![0u8; self.vars];
        for j in (0..self.vars).rev() {
            digits[j] = (idx % n) as u8;
            idx /= n;
        }
        digits
    }

    /// Linear index of the exponent vector `t` under the same order.
    pub fn linear_from_point(&self, t: &[u8]) -> u128 {
        let n = self.order as u128;
        t.iter().fold(0u128, |acc, &d| acc * n + d as u128)
    }

    /// Checked exhaustive enumeration of all `N^n` points as exponent
    /// vectors, in canonical order.
    pub fn enumerate_group_points(&self, budget: u64) -> Result<GroupPointIter<'_>> {
        let needed = self.point_count();
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        Ok(GroupPointIter {
            params: self,
            next: 0,
            total: needed,
        })
    }
}

/// Iterator over exponent vectors of all group points, mixed-radix order.
pub struct GroupPointIter<'a> {
    params: &'a GroupParams,
    next: u128,
    total: u128,
}

impl<'a> Iterator for GroupPointIter<'a> {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.next >= self.total {
            return None;
        }
        let t = self.params.point_from_linear(self.next);
        self.next += 1;
        Some(t)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = (self.total - self.next) as usize;
        (rem, Some(rem))
    }
}

/// Exponent vector `α ∈ {0, …, N−1}^n` of a monomial `z^α`.
///
/// The derived ordering is lexicographic on the exponent sequence; this is
/// the canonical order used for serialization and deterministic iteration.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn new(exponents: Vec<u8>) -> Self {
        MultiIndex(exponents)
    }

    /// Validates length and per-coordinate range against `params`.
    pub fn checked(exponents: Vec<u8>, params: &GroupParams) -> Result<Self> {
        if exponents.len() != params.vars() {
            return Err(Error::DimensionMismatch {
                expected: params.vars(),
                got: exponents.len(),
            });
        }
        if let Some(&bad) = exponents.iter().find(|&&e| e as u32 >= params.order()) {
            return Err(Error::InvalidParameter(format!(
                "exponent {bad} out of range for group order {}",
                params.order()
            )));
        }
        Ok(MultiIndex(exponents))
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|α| = Σ_j α_j`.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Number of variables with nonzero exponent.
    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&e| e != 0).count()
    }

    /// Positions of the nonzero exponents.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `⟨α, t⟩ mod N` for a group point exponent vector `t`.
    #[inline]
    pub fn dot_mod(&self, t: &[u8], order: u32) -> u32 {
        debug_assert_eq!(self.0.len(), t.len());
        let mut acc = 0u64;
        for (&a, &b) in self.0.iter().zip(t.iter()) {
            acc += a as u64 * b as u64;
        }
        (acc % order as u64) as u32
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "α{:?}", self.0)
    }
}

// Wire formats: a multi-index is a plain array of integers, the group is
// `{"N": order, "n": vars}` with the root table rebuilt on read.

impl serde::Serialize for MultiIndex {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(ser)
    }
}

impl<'de> serde::Deserialize<'de> for MultiIndex {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        Ok(MultiIndex(Vec::<u8>::deserialize(de)?))
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct GroupParamsWire {
    #[serde(rename = "N")]
    order: u32,
    n: usize,
}

impl serde::Serialize for GroupParams {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        GroupParamsWire {
            order: self.order,
            n: self.vars,
        }
        .serialize(ser)
    }
}

impl<'de> serde::Deserialize<'de> for GroupParams {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let wire = GroupParamsWire::deserialize(de)?;
        GroupParams::new(wire.order, wire.n).map_err(serde::de::Error::custom)
    }
}

/// All multi-indices with `|α| ≤ max_degree`, in lexicographic order.
///
/// The count never exceeds `Σ_{k≤d} C(n+k, n)`, and with
/// `max_degree = (N−1)·n` the enumeration covers all `N^n` indices.
pub fn enumerate_indices(params: &GroupParams, max_degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u8; params.vars()];
    descend(params, max_degree, 0, 0, &mut current, &mut out);
    out
}

fn descend(
    params: &GroupParams,
    max_degree: u32,
    pos: usize,
    used: u32,
    current: &mut Vec<u8>,
    out: &mut Vec<MultiIndex>,
) {
    if pos == params.vars() {
        out.push(MultiIndex::new(current.clone()));
        return;
    }
    let cap = (params.order() - 1).min(max_degree - used);
    for e in 0..=cap {
        current[pos] = e as u8;
        descend(params, max_degree, pos + 1, used + e, current, out);
    }
    current[pos] = 0;
}

/// Count of indices with `|α| ≤ d`, exact in `u128` (errors on overflow).
pub fn count_indices(params: &GroupParams, max_degree: u32) -> Result<u128> {
    // Dynamic program over variables; counts are bounded by N^n which we
    // keep in u128.
    let d = max_degree as usize;
    let mut counts = vec![0u128; d + 1];
    counts[0] = 1;
    for _ in 0..params.vars() {
        let mut next = vec![0u128; d + 1];
        for deg in 0..=d {
            if counts[deg] == 0 {
                continue;
            }
            for e in 0..params.order() as usize {
                if deg + e > d {
                    break;
                }
                next[deg + e] = next[deg + e]
                    .checked_add(counts[deg])
                    .ok_or_else(|| Error::InvalidParameter("index count overflow".into()))?;
            }
        }
        counts = next;
    }
    Ok(counts.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots_of_unity() {
        let p = GroupParams::new(2, 1).unwrap();
        let pts: Vec<_> = p
            .enumerate_group_points(10)
            .unwrap()
            .map(|t| p.point_coords(&t)[0])
            .collect();
        assert_eq!(pts.len(), 2);
        assert!((pts[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((pts[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cube_roots_of_unity() {
        let p = GroupParams::new(3, 1).unwrap();
        let pts: Vec<_> = p
            .enumerate_group_points(10)
            .unwrap()
            .map(|t| p.point_coords(&t)[0])
            .collect();
        let w = p.omega();
        assert!((pts[0] - 1.0).norm() < 1e-15);
        assert!((pts[1] - w).norm() < 1e-15);
        assert!((pts[2] - w * w).norm() < 1e-12);
    }

    #[test]
    fn omega_is_primitive() {
        for n in 2..20 {
            let p = GroupParams::new(n, 1).unwrap();
            assert!((p.omega_pow(n as i64) - 1.0).norm() < 1e-12);
            for k in 1..n {
                assert!((p.omega_pow_u(k) - 1.0).norm() > 1e-12, "N={n} k={k}");
            }
        }
    }

    #[test]
    fn eighty_one_distinct_points() {
        // Derived check: count and pairwise distinctness by enumeration.
        let p = GroupParams::new(3, 4).unwrap();
        let pts: Vec<Vec<u8>> = p.enumerate_group_points(1000).unwrap().collect();
        assert_eq!(pts.len(), 81);
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 81);
    }

    #[test]
    fn budget_is_enforced() {
        let p = GroupParams::new(10, 9).unwrap();
        match p.enumerate_group_points(1_000_000) {
            Err(Error::BudgetExceeded { needed, .. }) => assert_eq!(needed, 10u128.pow(9)),
            Err(other) => panic!("expected budget error, got {other:?}"),
            Ok(_) => panic!("expected budget error, got an iterator"),
        }
    }

    #[test]
    fn degree_one_indices() {
        let p = GroupParams::new(3, 2).unwrap();
        let idx = enumerate_indices(&p, 1);
        let got: Vec<Vec<u8>> = idx.iter().map(|i| i.exponents().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn degree_two_indices_match_brute_force() {
        let p = GroupParams::new(3, 2).unwrap();
        let idx = enumerate_indices(&p, 2);
        // Brute-force filter over all 9 exponent vectors.
        let mut expected: Vec<Vec<u8>> = Vec::new();
        for a in 0..3u8 {
            for b in 0..3u8 {
                if (a + b) as u32 <= 2 {
                    expected.push(vec![a, b]);
                }
            }
        }
        expected.sort();
        let got: Vec<Vec<u8>> = idx.iter().map(|i| i.exponents().to_vec()).collect();
        assert_eq!(got.len(), 6);
        assert_eq!(got, expected); // already lexicographic
        assert_eq!(count_indices(&p, 2).unwrap(), 6);
    }

    #[test]
    fn boolean_cube_full_enumeration() {
        let p = GroupParams::new(2, 3).unwrap();
        assert_eq!(enumerate_indices(&p, 3).len(), 8);
    }

    #[test]
    fn full_degree_enumeration_covers_all_indices() {
        for (n_ord, vars) in [(2u32, 4usize), (3, 3), (4, 2), (5, 2)] {
            let p = GroupParams::new(n_ord, vars).unwrap();
            let d = (n_ord - 1) * vars as u32;
            let idx = enumerate_indices(&p, d);
            assert_eq!(idx.len() as u128, p.index_count());
            let mut sorted = idx.clone();
            sorted.sort();
            assert!(sorted == idx, "enumeration must be lexicographically sorted");
        }
    }

    #[test]
    fn monomials_are_unimodular_on_group_points() {
        let p = GroupParams::new(5, 3).unwrap();
        let indices = enumerate_indices(&p, 12);
        for t in p.enumerate_group_points(1000).unwrap() {
            let coords = p.point_coords(&t);
            for alpha in indices.iter().step_by(7) {
                let mut v = Complex64::new(1.0, 0.0);
                for (z, &e) in coords.iter().zip(alpha.exponents()) {
                    v *= z.powu(e as u32);
                }
                assert!((v.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn wire_formats() {
        let p = GroupParams::new(5, 3).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"N":5,"n":3}"#);
        let back: GroupParams = serde_json::from_str(r#"{"N":5,"n":3}"#).unwrap();
        assert_eq!(back, p);
        let a = MultiIndex::new(vec![0, 2, 1]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[0,2,1]");
        let b: MultiIndex = serde_json::from_str("[0,2,1]").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn linear_roundtrip() {
        let p = GroupParams::new(4, 3).unwrap();
        for idx in 0..p.point_count() {
            let t = p.point_from_linear(idx);
            assert_eq!(p.linear_from_point(&t), idx);
        }
    }
}
