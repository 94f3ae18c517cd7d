//! JSON wire formats. Polynomials serialize as
//! `{"N": …, "n": …, "terms": [{"alpha": […], "re": …, "im": …}, …]}` with
//! terms in canonical index order; observables use `l`/`m` arrays instead
//! of `alpha`; sample tables carry the exponent vector of each group point.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupParams, MultiIndex};
use crate::hw::{HwIndex, HwObservable};
use crate::poly::CyclicPolynomial;
use crate::split::SupportDecomposition;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<u8>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolynomialJson {
    #[serde(rename = "N")]
    pub order: u32,
    pub n: usize,
    pub terms: Vec<TermJson>,
}

impl From<&CyclicPolynomial> for PolynomialJson {
    fn from(f: &CyclicPolynomial) -> Self {
        PolynomialJson {
            order: f.params().order(),
            n: f.params().vars(),
            terms: f
                .coeffs()
                .iter()
                .map(|(a, c)| TermJson {
                    alpha: a.exponents().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl PolynomialJson {
    pub fn into_polynomial(self) -> Result<CyclicPolynomial> {
        let params = GroupParams::new(self.order, self.n)?;
        CyclicPolynomial::from_terms(
            params,
            self.terms
                .into_iter()
                .map(|t| (MultiIndex::new(t.alpha), Complex64::new(t.re, t.im))),
        )
    }
}

pub fn polynomial_to_json(f: &CyclicPolynomial) -> String {
    serde_json::to_string_pretty(&PolynomialJson::from(f)).expect("serializable")
}

pub fn polynomial_from_json(s: &str) -> Result<CyclicPolynomial> {
    let dto: PolynomialJson =
        serde_json::from_str(s).map_err(|e| Error::InvalidParameter(format!("bad JSON: {e}")))?;
    dto.into_polynomial()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleJson {
    /// Exponent vector of the group point (coordinate j is ω^{t_j}).
    pub t: Vec<u8>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleTableJson {
    #[serde(rename = "N")]
    pub order: u32,
    pub n: usize,
    pub samples: Vec<SampleJson>,
}

impl SampleTableJson {
    /// Values on all group points in canonical order; errors when the table
    /// is not a complete enumeration.
    pub fn into_dense(self) -> Result<(GroupParams, Vec<Complex64>)> {
        let params = GroupParams::new(self.order, self.n)?;
        let expected = params.point_count();
        if self.samples.len() as u128 != expected {
            return Err(Error::IncompleteSamples {
                expected: expected as u64,
                got: self.samples.len() as u64,
            });
        }
        let mut dense = vec![None; expected as usize];
        for s in self.samples {
            if s.t.len() != self.n || s.t.iter().any(|&d| d as u32 >= self.order) {
                return Err(Error::InvalidParameter(format!(
                    "bad sample point {:?}",
                    s.t
                )));
            }
            let idx = params.linear_from_point(&s.t) as usize;
            if dense[idx].is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate sample point {:?}",
                    s.t
                )));
            }
            dense[idx] = Some(Complex64::new(s.re, s.im));
        }
        let values = dense
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::IncompleteSamples {
                expected: expected as u64,
                got: 0,
            })?;
        Ok((params, values))
    }

    pub fn from_dense(params: &GroupParams, values: &[Complex64]) -> Self {
        SampleTableJson {
            order: params.order(),
            n: params.vars(),
            samples: values
                .iter()
                .enumerate()
                .map(|(idx, v)| SampleJson {
                    t: params.point_from_linear(idx as u128),
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HwTermJson {
    pub l: Vec<u8>,
    pub m: Vec<u8>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HwObservableJson {
    #[serde(rename = "N")]
    pub order: u32,
    pub n: usize,
    pub terms: Vec<HwTermJson>,
}

impl From<&HwObservable> for HwObservableJson {
    fn from(obs: &HwObservable) -> Self {
        HwObservableJson {
            order: obs.order,
            n: obs.vars,
            terms: obs
                .coeffs
                .iter()
                .map(|(k, c)| HwTermJson {
                    l: k.l.clone(),
                    m: k.m.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl HwObservableJson {
    pub fn into_observable(self) -> Result<HwObservable> {
        HwObservable::from_terms(
            self.order,
            self.n,
            self.terms.into_iter().map(|t| {
                (
                    HwIndex { l: t.l, m: t.m },
                    Complex64::new(t.re, t.im),
                )
            }),
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormReportJson {
    pub value: f64,
    pub certified: bool,
    pub samples_used: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionJson {
    pub method: String,
    pub source_sup_norm: NormReportJson,
    pub parts: Vec<PolynomialJson>,
    pub part_sup_norms: Vec<NormReportJson>,
    /// Prime-order per-part growth bounds; absent for other orders.
    pub part_bounds: Option<Vec<f64>>,
}

impl From<&SupportDecomposition> for DecompositionJson {
    fn from(dec: &SupportDecomposition) -> Self {
        DecompositionJson {
            method: format!("{:?}", dec.method).to_lowercase(),
            source_sup_norm: NormReportJson {
                value: dec.source_sup_norm.value,
                certified: dec.source_sup_norm.certified,
                samples_used: dec.source_sup_norm.samples_used,
            },
            parts: dec.parts.iter().map(PolynomialJson::from).collect(),
            part_sup_norms: dec
                .part_sup_norms
                .iter()
                .map(|r| NormReportJson {
                    value: r.value,
                    certified: r.certified,
                    samples_used: r.samples_used,
                })
                .collect(),
            part_bounds: dec.part_bounds.clone(),
        }
    }
}
