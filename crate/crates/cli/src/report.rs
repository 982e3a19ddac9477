//! Machine-readable reports. The witness images and values are emitted as
//! signed basis-term lists (`coeff` is the scalar in canonical text form,
//! `indices` the ascending generator indices of the basis word), so a report
//! can be re-parsed and the witness re-evaluated exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use grasspi_core::canonical::CanonicalForm;
use grasspi_core::decide::{Refutation, WitnessMap};
use grasspi_core::field::FieldConfig;
use grasspi_core::grassmann::GrassmannElem;
use grasspi_core::siderov::Tail;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Params {
    pub p: u64,
    pub q: u64,
    pub expr: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisTerm {
    pub coeff: String,
    pub indices: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CanonicalComponent {
    pub coefficient: String,
    pub tail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessJson {
    pub m: u32,
    /// Images per variable index, as signed basis-term lists.
    pub images: BTreeMap<u32, Vec<BasisTerm>>,
    /// Scalar parts of the images.
    pub lambdas: BTreeMap<u32, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Timings {
    pub parse_ms: f64,
    pub decide_ms: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub params: Params,
    pub verdict: String,
    pub canonical_form: Vec<CanonicalComponent>,
    pub witness: Option<WitnessJson>,
    pub value: Option<Vec<BasisTerm>>,
    pub timings: Timings,
}

pub fn encode_element(g: &GrassmannElem) -> Vec<BasisTerm> {
    g.terms()
        .iter()
        .map(|(mask, coeff)| BasisTerm { coeff: coeff.to_string(), indices: mask.indices() })
        .collect()
}

pub fn encode_witness(w: &WitnessMap) -> WitnessJson {
    WitnessJson {
        m: w.generator_bound(),
        images: w.images().map(|(&v, g)| (v, encode_element(g))).collect(),
        lambdas: w.images().map(|(&v, g)| (v, g.proj_k().to_string())).collect(),
    }
}

pub fn encode_canonical(cf: &CanonicalForm) -> Vec<CanonicalComponent> {
    cf.components()
        .iter()
        .map(|(coeff, tail)| CanonicalComponent {
            coefficient: coeff.to_free_poly().to_string(),
            tail: match tail {
                Tail::Unit => "1".to_string(),
                Tail::Term(u) => u.to_string(),
            },
        })
        .collect()
}

pub fn encode_refutation(r: &Refutation) -> (WitnessJson, Vec<BasisTerm>) {
    (encode_witness(&r.witness), encode_element(&r.value))
}

/// Rebuilds a Grassmann element from its basis-term list. Coefficients are
/// parsed from the canonical scalar text (`a0+a1*t+...`).
pub fn decode_element(
    cfg: &FieldConfig,
    bound: u32,
    terms: &[BasisTerm],
) -> Result<GrassmannElem, String> {
    let mut g = GrassmannElem::zero(cfg, bound);
    for t in terms {
        let coeff = parse_scalar(cfg, &t.coeff)?;
        g = g.add(&GrassmannElem::basis_term(cfg, bound, &t.indices, coeff));
    }
    Ok(g)
}

fn parse_scalar(
    cfg: &FieldConfig,
    text: &str,
) -> Result<grasspi_core::field::FieldElem, String> {
    let poly = crate::parser::parse_poly(text, cfg).map_err(|e| e.to_string())?;
    if poly.is_zero() {
        return Ok(cfg.zero());
    }
    let mut terms = poly.terms();
    match terms.next() {
        Some((w, c)) if w.is_empty() && terms.next().is_none() => Ok(c.clone()),
        _ => Err(format!("'{text}' is not a scalar")),
    }
}
