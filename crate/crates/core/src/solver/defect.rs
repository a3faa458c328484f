use std::fmt::Debug;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::instance::{ApproxInstance, Mode, TargetFamily};
use crate::error::{Error, Result};
use crate::groups::{hamming_distance, hs_distance, rank_distance, ExponentVectorMatrix, NumericUnitary, Permutation};
use crate::report::{ReportNumber, Reportable};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetKind {
    Symmetric,
    Unitary,
    GlRank,
}

/// Elements of a target family together with its normalized invariant length.
pub trait TargetElement: Clone + Debug + Send + Sync {
    type Scalar: Scalar + Reportable;
    const KIND: TargetKind;

    fn dimension(&self) -> usize;
    fn length(&self) -> Self::Scalar;
    /// `l(self · other⁻¹)`.
    fn distance(&self, other: &Self) -> Result<Self::Scalar>;
    fn product(&self, other: &Self) -> Result<Self>;
}

impl TargetElement for Permutation {
    type Scalar = Rational;
    const KIND: TargetKind = TargetKind::Symmetric;

    fn dimension(&self) -> usize {
        self.degree()
    }

    fn length(&self) -> Rational {
        self.hamming_length()
    }

    fn distance(&self, other: &Self) -> Result<Rational> {
        hamming_distance(self, other)
    }

    fn product(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::arg(format!("degree mismatch: {} vs {}", self.degree(), other.degree())));
        }
        Ok(self.compose(other))
    }
}

impl TargetElement for ExponentVectorMatrix {
    type Scalar = Rational;
    const KIND: TargetKind = TargetKind::GlRank;

    fn dimension(&self) -> usize {
        ExponentVectorMatrix::dimension(self)
    }

    fn length(&self) -> Rational {
        self.rank_length()
    }

    fn distance(&self, other: &Self) -> Result<Rational> {
        rank_distance(self, other)
    }

    fn product(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
}

/// Uses the halved Hilbert–Schmidt metric.
impl TargetElement for NumericUnitary {
    type Scalar = f64;
    const KIND: TargetKind = TargetKind::Unitary;

    fn dimension(&self) -> usize {
        NumericUnitary::dimension(self)
    }

    fn length(&self) -> f64 {
        0.5 * hs_distance(self, &NumericUnitary::identity(self.dimension())).expect("same dimension")
    }

    fn distance(&self, other: &Self) -> Result<f64> {
        Ok(0.5 * hs_distance(self, other)?)
    }

    fn product(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
}

/// Homomorphism, identity, and metric or α defects of a fragment map.
#[derive(Clone, Debug, PartialEq)]
pub struct Defect<S> {
    pub hom: S,
    pub identity: S,
    pub metric: Option<S>,
    pub alpha: Option<S>,
}

impl<S: Scalar> Defect<S> {
    pub fn max_component(&self) -> S {
        let mut m = self.hom.clone().max_of(self.identity.clone());
        if let Some(x) = &self.metric {
            m = m.max_of(x.clone());
        }
        if let Some(x) = &self.alpha {
            m = m.max_of(x.clone());
        }
        m
    }

    /// Metric mode: every component `< δ`. Discrete mode: hom and identity
    /// `< δ` and no α violation.
    pub fn accepts(&self, delta: &S) -> bool {
        self.hom < *delta
            && self.identity < *delta
            && self.metric.as_ref().is_none_or(|m| m < delta)
            && self.alpha.as_ref().is_none_or(|a| a.is_zero())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectReport {
    pub hom: ReportNumber,
    pub identity: ReportNumber,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<ReportNumber>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<ReportNumber>,
    pub max: ReportNumber,
}

impl<S: Scalar + Reportable> Serialize for Defect<S> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        DefectReport {
            hom: self.hom.report(),
            identity: self.identity.report(),
            metric: self.metric.as_ref().map(Reportable::report),
            alpha: self.alpha.as_ref().map(Reportable::report),
            max: self.max_component().report(),
        }
        .serialize(s)
    }
}

fn check_family<T: TargetElement>(family: TargetFamily) -> Result<()> {
    let ok = matches!(
        (T::KIND, family),
        (TargetKind::Symmetric, TargetFamily::Symmetric(_))
            | (TargetKind::Unitary, TargetFamily::Unitary(_))
            | (TargetKind::GlRank, TargetFamily::GlRank(_))
    );
    if ok {
        Ok(())
    } else {
        Err(Error::arg(format!("images of kind {:?} do not belong to target {family}", T::KIND)))
    }
}

/// Recomputes all defect components of `gamma` (indexed like the fragment).
pub fn defect<T: TargetElement>(gamma: &[T], instance: &ApproxInstance) -> Result<Defect<T::Scalar>> {
    check_family::<T>(instance.target())?;
    if gamma.len() != instance.fragment().len() {
        return Err(Error::arg(format!(
            "map has {} images for a fragment of {}",
            gamma.len(),
            instance.fragment().len()
        )));
    }
    let n = instance.target().dimension();
    if let Some(bad) = gamma.iter().find(|x| x.dimension() != n) {
        return Err(Error::arg(format!("image of dimension {} in target {}", bad.dimension(), instance.target())));
    }
    let zero = T::Scalar::zero();
    let mut hom = zero.clone();
    for &(i, j, k) in instance.products() {
        let prod = gamma[i].product(&gamma[j])?;
        hom = hom.max_of(gamma[k].distance(&prod)?);
    }
    let identity = instance.identity_index().map_or(zero.clone(), |e| gamma[e].length());
    let (metric, alpha) = match instance.mode() {
        Mode::Metric => {
            let mut worst = zero.clone();
            for i in 0..gamma.len() {
                for j in i + 1..gamma.len() {
                    let source = T::Scalar::from_rational(&instance.source_distance(i, j));
                    worst = worst.max_of((source - gamma[i].distance(&gamma[j])?).abs());
                }
            }
            (Some(worst), None)
        }
        Mode::Alpha(alpha) => {
            let mut worst = zero.clone();
            for (g, a) in gamma.iter().zip(alpha.values()) {
                worst = worst.max_of((T::Scalar::from_rational(a) - g.length()).max_of(zero.clone()));
            }
            (None, Some(worst))
        }
    };
    Ok(Defect { hom, identity, metric, alpha })
}

/// A fragment map with its recomputed defect.
#[derive(Clone, Debug)]
pub struct Witness<T: TargetElement> {
    pub gamma: Vec<T>,
    pub defect: Defect<T::Scalar>,
}

impl<T: TargetElement> Witness<T> {
    pub fn evaluate(gamma: Vec<T>, instance: &ApproxInstance) -> Result<Self> {
        let defect = defect(&gamma, instance)?;
        Ok(Witness { gamma, defect })
    }

    pub fn verify(&self, instance: &ApproxInstance) -> Result<Defect<T::Scalar>> {
        defect(&self.gamma, instance)
    }
}

/// Search result: an accepted witness, or the best map found.
#[derive(Clone, Debug)]
pub enum Outcome<T: TargetElement> {
    Witness(Witness<T>),
    NoWitness(Witness<T>),
}

impl<T: TargetElement> Outcome<T> {
    pub fn is_witness(&self) -> bool {
        matches!(self, Outcome::Witness(_))
    }

    pub fn witness(&self) -> &Witness<T> {
        match self {
            Outcome::Witness(w) | Outcome::NoWitness(w) => w,
        }
    }

    pub fn defect(&self) -> &Defect<T::Scalar> {
        &self.witness().defect
    }

    pub(crate) fn classify(witness: Witness<T>, instance: &ApproxInstance) -> Self {
        let delta = T::Scalar::from_rational(instance.delta());
        if witness.defect.accepts(&delta) {
            Outcome::Witness(witness)
        } else {
            Outcome::NoWitness(witness)
        }
    }
}
