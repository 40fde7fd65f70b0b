//! JSON and CSV exchange formats shared by the CLI and the bindings.
//!
//! Matrices travel as {"order": n, "re": [[...]], "im": [[...]], "dims":
//! [n1, ...]}; planar sets as CSV rows kind,re,im with a JSON mirror.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::apps::{Verdict, Witness};
use crate::error::{RangeError, Result};
use crate::matrix::ComplexMatrix;
use crate::range::{Interval, PlanarSet};
use crate::seesaw::{HermitianPnr, KRangeResult};
use crate::space::TensorSpace;
use crate::state::{ProductState, PureState, SchmidtState};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub order: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.order();
        let mut re = vec![vec![0.0; n]; n];
        let mut im = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                re[i][j] = m[(i, j)].re;
                im[i][j] = m[(i, j)].im;
            }
        }
        Self {
            order: n,
            re,
            im,
            dims: m.space().map(|s| s.dims().to_vec()),
        }
    }

    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        let n = self.order;
        if self.re.len() != n
            || self.im.len() != n
            || self.re.iter().any(|r| r.len() != n)
            || self.im.iter().any(|r| r.len() != n)
        {
            return Err(RangeError::Parse(format!(
                "matrix rows do not match declared order {n}"
            )));
        }
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex64::new(self.re[i][j], self.im[i][j]);
            }
        }
        match self.dims {
            Some(dims) => {
                let space = TensorSpace::new(dims)?;
                m.with_space(space)
            }
            None => Ok(m),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl VectorJson {
    pub fn from_state(s: &PureState) -> Self {
        Self {
            re: s.amplitudes().iter().map(|z| z.re).collect(),
            im: s.amplitudes().iter().map(|z| z.im).collect(),
        }
    }

    pub fn into_state(self) -> Result<PureState> {
        if self.re.len() != self.im.len() {
            return Err(RangeError::Parse("re/im length mismatch".into()));
        }
        let amps: Vec<Complex64> = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        PureState::new(amps)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductStateJson {
    pub factors: Vec<VectorJson>,
}

impl ProductStateJson {
    pub fn from_state(s: &ProductState) -> Self {
        Self {
            factors: s.factors().iter().map(VectorJson::from_state).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchmidtStateJson {
    pub k: usize,
    pub coefficients: Vec<f64>,
    pub left_frame: Vec<VectorJson>,
    pub right_frame: Vec<VectorJson>,
}

impl SchmidtStateJson {
    pub fn from_state(s: &SchmidtState) -> Self {
        Self {
            k: s.rank(),
            coefficients: s.coefficients().to_vec(),
            left_frame: s.left_frame().iter().map(VectorJson::from_state).collect(),
            right_frame: s.right_frame().iter().map(VectorJson::from_state).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntervalJson {
    pub lo: f64,
    pub hi: f64,
}

impl From<Interval> for IntervalJson {
    fn from(i: Interval) -> Self {
        Self { lo: i.lo, hi: i.hi }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PnrJson {
    pub lo: f64,
    pub hi: f64,
    pub witness_lo: ProductStateJson,
    pub witness_hi: ProductStateJson,
    pub restarts_converged: usize,
    pub restarts_total: usize,
}

impl PnrJson {
    pub fn from_result(r: &HermitianPnr) -> Self {
        Self {
            lo: r.lo,
            hi: r.hi,
            witness_lo: ProductStateJson::from_state(&r.witness_lo),
            witness_hi: ProductStateJson::from_state(&r.witness_hi),
            restarts_converged: r.stats.converged,
            restarts_total: r.stats.total,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KRangeJson {
    pub k: usize,
    pub lo: f64,
    pub hi: f64,
    pub witness_lo: SchmidtStateJson,
    pub witness_hi: SchmidtStateJson,
    pub restarts_converged: usize,
    pub restarts_total: usize,
}

impl KRangeJson {
    pub fn from_result(r: &KRangeResult) -> Self {
        Self {
            k: r.k,
            lo: r.lo,
            hi: r.hi,
            witness_lo: SchmidtStateJson::from_state(&r.witness_lo),
            witness_hi: SchmidtStateJson::from_state(&r.witness_hi),
            restarts_converged: r.stats.converged,
            restarts_total: r.stats.total,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointRow {
    pub kind: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanarSetJson {
    pub points: Vec<PointRow>,
    pub closed: bool,
    pub kind: String,
}

pub fn planar_rows(set: &PlanarSet) -> Vec<PointRow> {
    let mut rows = Vec::new();
    for z in &set.boundary {
        rows.push(PointRow {
            kind: "boundary".into(),
            re: z.re,
            im: z.im,
        });
    }
    if let Some(hole) = &set.hole {
        for z in hole {
            rows.push(PointRow {
                kind: "boundary".into(),
                re: z.re,
                im: z.im,
            });
        }
    }
    if let Some(interior) = &set.interior {
        for z in interior {
            rows.push(PointRow {
                kind: "interior".into(),
                re: z.re,
                im: z.im,
            });
        }
    }
    rows
}

pub fn planar_to_json(set: &PlanarSet) -> PlanarSetJson {
    PlanarSetJson {
        points: planar_rows(set),
        closed: set.closed,
        kind: match set.kind {
            crate::range::SetKind::Point => "point".into(),
            crate::range::SetKind::Segment { .. } => "segment".into(),
            crate::range::SetKind::Region => "region".into(),
        },
    }
}

/// CSV with the stable header kind,re,im.
pub fn planar_to_csv(set: &PlanarSet) -> String {
    let mut out = String::from("kind,re,im\n");
    for row in planar_rows(set) {
        out.push_str(&format!("{},{},{}\n", row.kind, fmt_f64(row.re), fmt_f64(row.im)));
    }
    out
}

/// Shortest round-trip decimal form, deterministic across runs.
pub fn fmt_f64(v: f64) -> String {
    let mut buf = ryu_like(v);
    if buf == "-0" {
        buf = "0".into();
    }
    buf
}

fn ryu_like(v: f64) -> String {
    // serde_json's float formatting is shortest-round-trip; reuse it
    serde_json::to_string(&v).unwrap_or_else(|_| format!("{v}"))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product_witness: Option<ProductStateJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schmidt_witness: Option<SchmidtStateJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
    pub restarts: usize,
}

impl VerdictJson {
    pub fn from_verdict(v: &Verdict) -> Self {
        Self {
            status: v.status.as_str().into(),
            certificate: v.certificate.as_ref().map(|c| {
                let (product_witness, schmidt_witness) = match &c.witness {
                    Witness::Product(p) => (Some(ProductStateJson::from_state(p)), None),
                    Witness::Schmidt(s) => (None, Some(SchmidtStateJson::from_state(s))),
                };
                CertificateJson {
                    value: c.value,
                    product_witness,
                    schmidt_witness,
                }
            }),
            restarts: v.restarts,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KrausJson {
    pub kraus: Vec<MatrixJson>,
}
