use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::shift_schedule;
use crate::error::{Error, Result};
use crate::groups::{hs_distance, rank_distance, ExponentVectorMatrix, NumericUnitary};
use crate::scalar::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixImages {
    /// Diagonal order-p matrices under the rank metric.
    Exponent(Vec<ExponentVectorMatrix>),
    /// Unitaries under half the Hilbert–Schmidt distance.
    Unitary(Vec<NumericUnitary>),
}

impl MatrixImages {
    fn len(&self) -> usize {
        match self {
            MatrixImages::Exponent(v) => v.len(),
            MatrixImages::Unitary(v) => v.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixWitness {
    source: String,
    fragment: Vec<String>,
    images: MatrixImages,
    dimension: usize,
}

#[derive(Serialize, Deserialize)]
struct MatrixWitnessFile {
    kind: String,
    source: String,
    fragment: Vec<String>,
    dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<u32>,
    /// Exponent vectors, or row-major `[re, im]` entries.
    images: serde_json::Value,
}

impl MatrixWitness {
    pub fn new(source: impl Into<String>, fragment: Vec<String>, images: MatrixImages) -> Result<Self> {
        if fragment.len() != images.len() {
            return Err(Error::arg(format!("{} labels for {} images", fragment.len(), images.len())));
        }
        let dims: Vec<usize> = match &images {
            MatrixImages::Exponent(v) => v.iter().map(ExponentVectorMatrix::dimension).collect(),
            MatrixImages::Unitary(v) => v.iter().map(NumericUnitary::dimension).collect(),
        };
        let dimension = dims.first().copied().unwrap_or(0);
        if dims.iter().any(|&d| d != dimension) {
            return Err(Error::arg("images of a witness must share one dimension"));
        }
        if let MatrixImages::Exponent(v) = &images {
            if v.windows(2).any(|w| w[0].modulus() != w[1].modulus()) {
                return Err(Error::arg("exponent vectors must share one modulus"));
            }
        }
        Ok(MatrixWitness { source: source.into(), fragment, images, dimension })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn fragment(&self) -> &[String] {
        &self.fragment
    }

    pub fn images(&self) -> &MatrixImages {
        &self.images
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Rank distance between the images of fragment positions `i` and `j`.
    pub fn rank_distance(&self, i: usize, j: usize) -> Result<Rational> {
        match &self.images {
            MatrixImages::Exponent(_) if self.dimension == 0 => Ok(Rational::zero()),
            MatrixImages::Exponent(v) => rank_distance(&v[i], &v[j]),
            MatrixImages::Unitary(_) => Err(Error::arg("rank distances need exponent-vector images")),
        }
    }

    /// `½ d_HS` between the images of positions `i` and `j`.
    pub fn hs_metric(&self, i: usize, j: usize) -> Result<f64> {
        if self.dimension == 0 {
            return Ok(0.0);
        }
        match &self.images {
            MatrixImages::Exponent(v) => Ok(0.5 * hs_distance(&v[i].to_unitary(), &v[j].to_unitary())?),
            MatrixImages::Unitary(v) => Ok(0.5 * hs_distance(&v[i], &v[j])?),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let (kind, modulus, images) = match &self.images {
            MatrixImages::Exponent(v) => (
                "exponent-vector",
                v.first().map(ExponentVectorMatrix::modulus),
                serde_json::to_value(v.iter().map(|a| a.exponents().to_vec()).collect::<Vec<_>>()),
            ),
            MatrixImages::Unitary(v) => (
                "unitary",
                None,
                serde_json::to_value(
                    v.iter()
                        .map(|u| u.entries().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                ),
            ),
        };
        let file = MatrixWitnessFile {
            kind: kind.into(),
            source: self.source.clone(),
            fragment: self.fragment.clone(),
            dimension: self.dimension,
            modulus,
            images: images.map_err(|e| Error::arg(e.to_string()))?,
        };
        serde_json::to_string_pretty(&file).map_err(|e| Error::arg(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |e: serde_json::Error| Error::arg(format!("witness file: {e}"));
        let file: MatrixWitnessFile = serde_json::from_str(text).map_err(bad)?;
        let images = match file.kind.as_str() {
            "exponent-vector" => {
                let modulus = file.modulus.ok_or_else(|| Error::arg("exponent-vector witness needs a modulus"))?;
                let rows: Vec<Vec<i64>> = serde_json::from_value(file.images).map_err(bad)?;
                MatrixImages::Exponent(
                    rows.into_iter().map(|r| ExponentVectorMatrix::new(r, modulus)).collect::<Result<_>>()?,
                )
            }
            "unitary" => {
                let rows: Vec<Vec<[f64; 2]>> = serde_json::from_value(file.images).map_err(bad)?;
                MatrixImages::Unitary(
                    rows.into_iter()
                        .map(|r| {
                            let entries = r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
                            NumericUnitary::new(file.dimension, entries)
                        })
                        .collect::<Result<_>>()?,
                )
            }
            other => return Err(Error::arg(format!("unknown matrix witness kind {other:?}"))),
        };
        let w = MatrixWitness::new(file.source, file.fragment, images)?;
        if w.dimension != file.dimension {
            return Err(Error::arg(format!("declared dimension {} but images have {}", file.dimension, w.dimension)));
        }
        Ok(w)
    }
}

/// `I_k ⊗ θ(g)` for every image; both metrics are unchanged.
pub fn tensor_replicate(w: &MatrixWitness, k: usize) -> Result<MatrixWitness> {
    if k == 0 {
        return Err(Error::arg("tensor replication needs k >= 1"));
    }
    let images = match &w.images {
        MatrixImages::Exponent(v) => MatrixImages::Exponent(v.iter().map(|a| a.tensor_identity(k)).collect()),
        MatrixImages::Unitary(v) => MatrixImages::Unitary(v.iter().map(|u| u.tensor_identity(k)).collect()),
    };
    Ok(MatrixWitness { images, dimension: w.dimension * k, ..w.clone() })
}

/// `θ(g) ⊕ I_{m′−m}`: rank distances scale by `m/m′`, `d_HS` by `√(m/m′)`.
pub fn block_dilute(w: &MatrixWitness, m_prime: usize) -> Result<MatrixWitness> {
    if m_prime < w.dimension {
        return Err(Error::arg(format!("cannot dilute dimension {} down to {m_prime}", w.dimension)));
    }
    let extra = m_prime - w.dimension;
    let images = match &w.images {
        MatrixImages::Exponent(v) => {
            let mut out = Vec::with_capacity(v.len());
            for a in v {
                out.push(a.direct_sum(&ExponentVectorMatrix::identity(extra, a.modulus())?)?);
            }
            MatrixImages::Exponent(out)
        }
        MatrixImages::Unitary(v) => {
            MatrixImages::Unitary(v.iter().map(|u| u.direct_sum(&NumericUnitary::identity(extra))).collect())
        }
    };
    Ok(MatrixWitness { images, dimension: m_prime, ..w.clone() })
}

/// `θ₁(g) ⊕ θ₂(g)`. Rank distances average linearly in the block sizes and
/// squared `d_HS` distances average the same way.
pub fn block_sum(w1: &MatrixWitness, w2: &MatrixWitness) -> Result<MatrixWitness> {
    if w1.fragment != w2.fragment {
        return Err(Error::arg("block-summed witnesses must share the fragment"));
    }
    let images = match (&w1.images, &w2.images) {
        (MatrixImages::Exponent(a), MatrixImages::Exponent(b)) => MatrixImages::Exponent(
            a.iter().zip(b).map(|(x, y)| x.direct_sum(y)).collect::<Result<_>>()?,
        ),
        (MatrixImages::Unitary(a), MatrixImages::Unitary(b)) => {
            MatrixImages::Unitary(a.iter().zip(b).map(|(x, y)| x.direct_sum(y)).collect())
        }
        _ => return Err(Error::arg("block sum of exponent-vector and unitary witnesses")),
    };
    Ok(MatrixWitness { images, dimension: w1.dimension + w2.dimension, ..w1.clone() })
}

/// Builds a rank-metric witness for `d^ω_ε = (d + ε d_ω)/(1 + ε)` from `θ`
/// (realizing `d`) and `θ′` (realizing `d_ω`).
///
/// When `omega` is given, every `θ′` rank distance must lie within `tol` of it.
pub fn linear_shift_amplify(
    theta: &MatrixWitness,
    theta_prime: &MatrixWitness,
    omega: Option<&[Vec<Rational>]>,
    eps: &Rational,
    tol: &Rational,
) -> Result<MatrixWitness> {
    if theta.fragment != theta_prime.fragment {
        return Err(Error::arg("theta and theta' must share the fragment"));
    }
    if !matches!((&theta.images, &theta_prime.images), (MatrixImages::Exponent(_), MatrixImages::Exponent(_))) {
        return Err(Error::arg("the linear pipeline needs exponent-vector witnesses"));
    }
    if theta_prime.dimension == 0 {
        return Ok(theta.clone());
    }
    if let Some(table) = omega {
        let k = theta.fragment.len();
        if table.len() != k || table.iter().any(|row| row.len() != k) {
            return Err(Error::arg("d_omega table does not match the fragment"));
        }
        for i in 0..k {
            for j in 0..k {
                let d = theta_prime.rank_distance(i, j)?;
                if (&d - &table[i][j]).abs() > *tol {
                    return Err(Error::arg(format!(
                        "theta' distance {} between {} and {} is not within tol of d_omega = {}",
                        format_rational(&d),
                        theta.fragment[i],
                        theta.fragment[j],
                        format_rational(&table[i][j])
                    )));
                }
            }
        }
    }
    let (r, _, rest) = shift_schedule(theta.dimension, theta_prime.dimension, eps)?;
    let out = block_sum(&tensor_replicate(theta_prime, r)?, &tensor_replicate(theta, rest / theta.dimension)?)?;
    Ok(MatrixWitness { source: format!("omega-shift({},eps={})", theta.source, format_rational(eps)), ..out })
}

/// The `½d_HS` distance `x` that a `θ′` block of weight `ε/(1+ε)` must
/// realize so that the quadratic mean with `d` (weight `1/(1+ε)`) equals
/// `(d + ε)/(1 + ε)`: `x = √(((1+ε)d_ε² − d²)/ε)`. Always in `[0, 1]`.
pub fn hyperlinear_prescribed_distance(d: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::param(format!("eps must lie in (0, 1], got {eps}")));
    }
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::param(format!("distance must lie in [0, 1], got {d}")));
    }
    let target = (d + eps) / (1.0 + eps);
    Ok((((1.0 + eps) * target * target - d * d) / eps).max(0.0).sqrt())
}
