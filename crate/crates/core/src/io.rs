//! JSON documents for pencils, spectra, zero lists and boundary-value problems.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RealMatrix;
use crate::pencil::{Pencil, RankOne, SpectrumResult};
use crate::sturm::SlProblem;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MassDoc {
    Dense {
        data: Vec<f64>,
    },
    Diag {
        data: Vec<f64>,
    },
    /// `data = [k]`: the first `k` diagonal entries are 1, the rest 0.
    IdentityBlock {
        data: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GyroDoc {
    Dense { data: Vec<f64> },
    RankOne { b: f64, e_index: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StiffnessDoc {
    Dense { data: Vec<f64> },
}

/// Pencil JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilDoc {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: MassDoc,
    #[serde(rename = "G")]
    pub g: GyroDoc,
    #[serde(rename = "A")]
    pub a: StiffnessDoc,
}

fn dense(n: usize, data: &[f64], name: &str) -> Result<RealMatrix> {
    RealMatrix::try_from_row_major(n, n, data.to_vec())
        .ok_or_else(|| Error::InvalidInput(format!("{name}: expected {} entries, got {}", n * n, data.len())))
}

fn diag(n: usize, data: &[f64], name: &str) -> Result<RealMatrix> {
    if data.len() != n {
        return Err(Error::InvalidInput(format!("{name}: expected {n} diagonal entries, got {}", data.len())));
    }
    Ok(RealMatrix::from_diag(data))
}

impl PencilDoc {
    pub fn to_pencil(&self) -> Result<Pencil> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        let m = match &self.m {
            MassDoc::Dense { data } => dense(n, data, "M")?,
            MassDoc::Diag { data } => diag(n, data, "M")?,
            MassDoc::IdentityBlock { data } => {
                let k = match data.as_slice() {
                    [k] if k.fract() == 0.0 && *k >= 0.0 && (*k as usize) <= n => *k as usize,
                    _ => return Err(Error::InvalidInput("M identity_block: data must be [k] with 0 <= k <= n".into())),
                };
                let d: Vec<f64> = (0..n).map(|i| if i < k { 1.0 } else { 0.0 }).collect();
                RealMatrix::from_diag(&d)
            }
        };
        let a = match &self.a {
            StiffnessDoc::Dense { data } => dense(n, data, "A")?,
        };
        let pencil = match &self.g {
            GyroDoc::Dense { data } => Pencil::new(m, dense(n, data, "G")?, a)?,
            GyroDoc::RankOne { b, e_index } => {
                if !b.is_finite() {
                    return Err(Error::InvalidInput("G rank_one: b must be finite".into()));
                }
                Pencil::with_rank_one(m, *b, *e_index, a)?
            }
        };
        Ok(pencil)
    }

    /// Canonical document: diagonal or identity-block mass when possible,
    /// rank-one `G` when flagged.
    pub fn from_pencil(p: &Pencil) -> Self {
        let n = p.n();
        let is_diag = |x: &RealMatrix| x.bandwidth() == (0, 0);
        let m = if is_diag(&p.m) {
            let d = p.m.diag();
            let k = d.iter().take_while(|&&v| v == 1.0).count();
            if d[k..].iter().all(|&v| v == 0.0) {
                MassDoc::IdentityBlock { data: vec![k as f64] }
            } else {
                MassDoc::Diag { data: d }
            }
        } else {
            MassDoc::Dense { data: p.m.as_slice().to_vec() }
        };
        let g = match p.g_rank_one {
            Some(RankOne { b, e_index }) => GyroDoc::RankOne { b, e_index },
            None => GyroDoc::Dense { data: p.g.as_slice().to_vec() },
        };
        Self { n, m, g, a: StiffnessDoc::Dense { data: p.a.as_slice().to_vec() } }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pencil serializes")
    }
}

pub fn parse_pencil_doc(text: &str) -> Result<PencilDoc> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("pencil JSON: {e}")))
}

/// Parses a pencil document and builds the raw (unvalidated) pencil.
pub fn parse_pencil(text: &str) -> Result<Pencil> {
    parse_pencil_doc(text)?.to_pencil()
}

pub fn pencil_to_json(p: &Pencil) -> String {
    PencilDoc::from_pencil(p).to_json()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenDoc {
    pub re: f64,
    pub im: f64,
    pub alg: usize,
    pub geo: usize,
    pub type1: usize,
    pub type2: usize,
    pub residual: f64,
}

/// Spectrum JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDoc {
    pub eta: f64,
    pub eigenvalues: Vec<EigenDoc>,
    pub discarded_infinite: usize,
}

impl SpectrumDoc {
    pub fn from_result(r: &SpectrumResult) -> Self {
        Self {
            eta: r.eta,
            eigenvalues: r
                .records
                .iter()
                .map(|x| EigenDoc {
                    re: x.lambda.re,
                    im: x.lambda.im,
                    alg: x.alg_mult,
                    geo: x.geo_mult,
                    type1: x.type1_mult,
                    type2: x.type2_mult,
                    residual: x.residual,
                })
                .collect(),
            discarded_infinite: r.discarded_infinite,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }
}

/// Entry of the zeros JSON list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroDoc {
    pub re: f64,
    pub im: f64,
    pub mult: usize,
    pub residual: f64,
}

pub fn parse_sl_problem(text: &str) -> Result<SlProblem> {
    let p: SlProblem = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("problem JSON: {e}")))?;
    p.validate()?;
    Ok(p)
}

pub fn sl_problem_to_json(p: &SlProblem) -> String {
    serde_json::to_string_pretty(p).expect("problem serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sturm::{Potential, Variant};

    const W1: &str = r#"{"n":2,"M":{"kind":"identity_block","data":[1]},
        "G":{"kind":"rank_one","b":1.0,"e_index":1},"A":{"kind":"dense","data":[1,0,0,1]}}"#;

    #[test]
    fn parses_identity_block_and_rank_one() {
        let p = parse_pencil(W1).unwrap();
        assert_eq!(p.m, RealMatrix::from_diag(&[1.0, 0.0]));
        assert_eq!(p.g, RealMatrix::from_diag(&[0.0, 1.0]));
        assert_eq!(p.a, RealMatrix::identity(2));
    }

    #[test]
    fn round_trip_is_stable() {
        let doc = parse_pencil_doc(W1).unwrap();
        let once = doc.to_json();
        let twice = parse_pencil_doc(&once).unwrap().to_json();
        assert_eq!(once, twice);
        let p = doc.to_pencil().unwrap();
        assert_eq!(PencilDoc::from_pencil(&p), doc);
    }

    #[test]
    fn rejects_bad_shapes() {
        let bad = r#"{"n":2,"M":{"kind":"diag","data":[1]},"G":{"kind":"dense","data":[0,0,0,1]},"A":{"kind":"dense","data":[1,0,0,1]}}"#;
        assert!(matches!(parse_pencil(bad), Err(Error::InvalidInput(_))));
        assert!(parse_pencil("{not json").is_err());
        let bad_block = r#"{"n":2,"M":{"kind":"identity_block","data":[3]},"G":{"kind":"dense","data":[0,0,0,1]},"A":{"kind":"dense","data":[1,0,0,1]}}"#;
        assert!(parse_pencil(bad_block).is_err());
    }

    #[test]
    fn problem_json() {
        let p = SlProblem::new(Variant::Double, Potential::Const { value: 4.0 }, 3.0, 1.0, 10).with_paper_sign(true);
        let back = parse_sl_problem(&sl_problem_to_json(&p)).unwrap();
        assert_eq!(back, p);
        let txt = r#"{"variant":"single","q":{"kind":"sampled","values":[1,2,3]},"a":1,"alpha":1,"n":2}"#;
        let s = parse_sl_problem(txt).unwrap();
        assert!(!s.paper_sign_convention);
    }
}
