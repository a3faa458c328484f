//! Finite groups with bi-invariant metrics.
//!
//! Every group is a [`GroupStructure`] whose elements are indexed
//! `0..order`, paired with an invariant length function. Distances are
//! always derived as `d(g, h) = l(g h⁻¹)`.

mod cyclic;
mod matrix;
mod perm;
mod regular;
mod spec;
mod symmetric;
mod table;
mod validate;

use std::fmt;
use std::sync::Arc;

pub use cyclic::{lee_length, make_cyclic_lee, CyclicElement, CyclicStructure};
pub use matrix::{hs_distance, rank_distance, ExponentVectorMatrix, NumericUnitary};
pub use perm::Permutation;
pub use regular::{regular_embedding, regular_metric_group, RegularEmbedding};
pub use spec::{build_group, GroupSpec};
pub use symmetric::{hamming_distance, make_symmetric_hamming, SymmetricHamming, SymmetricStructure};
pub use table::TableStructure;
pub use validate::{
    length_from_metric, metric_from_length, validate_normed_group, Axiom, ValidationReport,
    Violation,
};


use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Largest carrier that is enumerated at all (|S_8|).
pub const CARRIER_CAP: usize = 40_320;

/// Largest carrier for which lengths are memoized and Cayley tables are built.
pub const TABLE_CAP: usize = 10_000;

/// Largest symmetric degree with a materialized carrier.
pub const SYMMETRIC_DEGREE_CAP: usize = 8;

/// Group operations on elements indexed `0..order()`.
pub trait GroupStructure: Send + Sync + fmt::Debug {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    fn label(&self, a: usize) -> String;
    fn parse_label(&self, text: &str) -> Option<usize>;
    /// Stable description of the abstract carrier, e.g. `Z(13)` or `S(3)`.
    fn describe(&self) -> String;
}

/// Values of a length function, indexed by element.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthFunction<S: Scalar = Rational> {
    values: Vec<S>,
}

impl<S: Scalar> LengthFunction<S> {
    pub fn new(values: Vec<S>) -> Self {
        LengthFunction { values }
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, g: usize) -> &S {
        &self.values[g]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

type LazyLength<S> = Arc<dyn Fn(usize) -> S + Send + Sync>;

#[derive(Clone)]
enum Lengths<S: Scalar> {
    Table(Arc<[S]>),
    Lazy(LazyLength<S>),
}

/// A finite group with a bi-invariant metric bounded by one.
#[derive(Clone)]
pub struct FiniteMetricGroup<S: Scalar = Rational> {
    name: String,
    structure: Arc<dyn GroupStructure>,
    lengths: Lengths<S>,
}

impl<S: Scalar> fmt::Debug for FiniteMetricGroup<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteMetricGroup")
            .field("name", &self.name)
            .field("order", &self.order())
            .field("exact", &S::EXACT)
            .finish()
    }
}

impl<S: Scalar> FiniteMetricGroup<S> {
    /// Wraps a length function without validating it. Lengths are memoized
    /// when the carrier has at most [`TABLE_CAP`] elements.
    pub(crate) fn from_length_fn(
        name: impl Into<String>,
        structure: Arc<dyn GroupStructure>,
        length: impl Fn(usize) -> S + Send + Sync + 'static,
    ) -> Self {
        let order = structure.order();
        let lengths = if order <= TABLE_CAP {
            Lengths::Table((0..order).map(&length).collect::<Vec<_>>().into())
        } else {
            Lengths::Lazy(Arc::new(length))
        };
        FiniteMetricGroup { name: name.into(), structure, lengths }
    }

    pub(crate) fn from_table(
        name: impl Into<String>,
        structure: Arc<dyn GroupStructure>,
        values: Vec<S>,
    ) -> Self {
        debug_assert_eq!(values.len(), structure.order());
        FiniteMetricGroup { name: name.into(), structure, lengths: Lengths::Table(values.into()) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn structure(&self) -> &Arc<dyn GroupStructure> {
        &self.structure
    }

    pub fn order(&self) -> usize {
        self.structure.order()
    }

    pub fn identity(&self) -> usize {
        self.structure.identity()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.structure.mul(a, b)
    }

    pub fn inv(&self, a: usize) -> usize {
        self.structure.inv(a)
    }

    pub fn pow(&self, g: usize, k: u64) -> usize {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn label(&self, g: usize) -> String {
        self.structure.label(g)
    }

    pub fn parse_label(&self, text: &str) -> Result<usize> {
        self.structure
            .parse_label(text.trim())
            .ok_or_else(|| Error::arg(format!("{text:?} is not an element of {}", self.name)))
    }

    pub fn length(&self, g: usize) -> S {
        match &self.lengths {
            Lengths::Table(values) => values[g].clone(),
            Lengths::Lazy(f) => f(g),
        }
    }

    /// `d(g, h) = l(g h⁻¹)`.
    pub fn distance(&self, g: usize, h: usize) -> S {
        self.length(self.mul(g, self.inv(h)))
    }

    pub fn length_function(&self) -> LengthFunction<S> {
        LengthFunction::new(self.elements().map(|g| self.length(g)).collect())
    }

    pub fn is_memoized(&self) -> bool {
        matches!(self.lengths, Lengths::Table(_))
    }

    /// Same group and metric under a new display name.
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Checks the length-function axioms and bi-invariance.
    pub fn validate(&self) -> ValidationReport {
        validate_normed_group(self)
    }

    /// The subgroup generated by `generators`, with the inherited metric.
    pub fn subgroup(&self, generators: &[usize]) -> Result<FiniteMetricGroup<S>> {
        let (table, members) = TableStructure::generated_by(self.structure.as_ref(), generators)?;
        let values = members.iter().map(|&g| self.length(g)).collect();
        let gens: Vec<String> = generators.iter().map(|&g| self.label(g)).collect();
        Ok(FiniteMetricGroup::from_table(
            format!("<{}> in {}", gens.join(","), self.name),
            Arc::new(table),
            values,
        ))
    }
}

impl FiniteMetricGroup<Rational> {
    pub fn to_numeric(&self) -> FiniteMetricGroup<f64> {
        let source = self.clone();
        FiniteMetricGroup::from_length_fn(self.name.clone(), self.structure.clone(), move |g| {
            source.length(g).to_f64()
        })
    }
}

/// Smallest non-zero off-identity length (the discreteness floor).
pub fn off_diagonal_floor<S: Scalar>(group: &FiniteMetricGroup<S>) -> Option<S> {
    let e = group.identity();
    group
        .elements()
        .filter(|&g| g != e)
        .map(|g| group.length(g))
        .fold(None, |acc: Option<S>, l| Some(match acc {
            None => l,
            Some(a) => a.min_of(l),
        }))
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
