use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{FiniteMetricGroup, GroupSpec};
use crate::scalar::{format_rational, parse_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", content = "n", rename_all = "kebab-case")]
pub enum TargetFamily {
    Symmetric(usize),
    Unitary(usize),
    GlRank(usize),
}

impl TargetFamily {
    pub fn dimension(self) -> usize {
        match self {
            TargetFamily::Symmetric(n) | TargetFamily::Unitary(n) | TargetFamily::GlRank(n) => n,
        }
    }
}

impl fmt::Display for TargetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetFamily::Symmetric(n) => write!(f, "symmetric:{n}"),
            TargetFamily::Unitary(n) => write!(f, "unitary:{n}"),
            TargetFamily::GlRank(n) => write!(f, "gl-rank:{n}"),
        }
    }
}

impl FromStr for TargetFamily {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::arg(format!("target {text:?} is not symmetric:n, unitary:n or gl-rank:n"));
        let (family, n) = text.trim().split_once(':').ok_or_else(bad)?;
        let n: usize = n.trim_start_matches("n=").parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(Error::arg("target dimension must be positive"));
        }
        match family {
            "symmetric" => Ok(TargetFamily::Symmetric(n)),
            "unitary" => Ok(TargetFamily::Unitary(n)),
            "gl-rank" | "general-linear-rank" => Ok(TargetFamily::GlRank(n)),
            _ => Err(bad()),
        }
    }
}

/// Lower bounds `α(g)` on image lengths, with the global bound `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaMap {
    values: Vec<Rational>,
    bound: Rational,
}

impl AlphaMap {
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Mode {
    Metric,
    Alpha(AlphaMap),
}

/// A fragment of a source metric group, a tolerance and a target family.
#[derive(Clone, Debug)]
pub struct ApproxInstance {
    source: FiniteMetricGroup,
    fragment: Vec<usize>,
    delta: Rational,
    target: TargetFamily,
    mode: Mode,
    identity_index: Option<usize>,
    products: Vec<(usize, usize, usize)>,
}

impl ApproxInstance {
    pub fn new(source: FiniteMetricGroup, fragment: Vec<usize>, delta: Rational, target: TargetFamily) -> Result<Self> {
        if delta <= Rational::zero() {
            return Err(Error::param(format!("delta must be positive, got {}", format_rational(&delta))));
        }
        if fragment.is_empty() {
            return Err(Error::arg("fragment is empty"));
        }
        let mut position = vec![usize::MAX; source.order()];
        for (i, &g) in fragment.iter().enumerate() {
            if g >= source.order() {
                return Err(Error::arg(format!("fragment index {g} outside the carrier")));
            }
            if position[g] != usize::MAX {
                return Err(Error::arg(format!("fragment lists {} twice", source.label(g))));
            }
            position[g] = i;
        }
        let identity_index = Some(position[source.identity()]).filter(|&i| i != usize::MAX);
        let mut products = Vec::new();
        for (i, &g) in fragment.iter().enumerate() {
            for (j, &h) in fragment.iter().enumerate() {
                let k = position[source.mul(g, h)];
                if k != usize::MAX {
                    products.push((i, j, k));
                }
            }
        }
        Ok(ApproxInstance { source, fragment, delta, target, mode: Mode::Metric, identity_index, products })
    }

    /// The whole carrier as fragment.
    pub fn full(source: FiniteMetricGroup, delta: Rational, target: TargetFamily) -> Result<Self> {
        let fragment = source.elements().collect();
        Self::new(source, fragment, delta, target)
    }

    /// Switches to the discrete mode with one `α` value per fragment element.
    ///
    /// Requires `α(e) = 0`, `α > 0` off the identity and `α ≤ bound`.
    pub fn with_alpha(mut self, values: Vec<Rational>, bound: Rational) -> Result<Self> {
        if values.len() != self.fragment.len() {
            return Err(Error::param(format!(
                "alpha has {} values for a fragment of {}",
                values.len(),
                self.fragment.len()
            )));
        }
        for (i, a) in values.iter().enumerate() {
            let g = self.fragment[i];
            let label = self.source.label(g);
            if g == self.source.identity() {
                if !a.is_zero() {
                    return Err(Error::param(format!("alpha({label}) must be 0 at the identity")));
                }
            } else if *a <= Rational::zero() {
                return Err(Error::param(format!("alpha({label}) must be positive off the identity")));
            }
            if *a > bound {
                return Err(Error::param(format!(
                    "alpha({label}) = {} exceeds the bound {}",
                    format_rational(a),
                    format_rational(&bound)
                )));
            }
        }
        self.mode = Mode::Alpha(AlphaMap { values, bound });
        Ok(self)
    }

    /// `α ≡ value` off the identity, with bound `r = 1`.
    pub fn with_constant_alpha(self, value: Rational) -> Result<Self> {
        let e = self.source.identity();
        let values = self.fragment.iter().map(|&g| if g == e { Rational::zero() } else { value.clone() }).collect();
        self.with_alpha(values, Rational::one())
    }

    pub fn source(&self) -> &FiniteMetricGroup {
        &self.source
    }

    pub fn fragment(&self) -> &[usize] {
        &self.fragment
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn target(&self) -> TargetFamily {
        self.target
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    /// Position of the identity in the fragment, if present.
    pub fn identity_index(&self) -> Option<usize> {
        self.identity_index
    }

    /// Triples `(i, j, k)` of fragment positions with `f_i f_j = f_k`.
    pub fn products(&self) -> &[(usize, usize, usize)] {
        &self.products
    }

    /// Source distance between fragment positions `i` and `j`.
    pub fn source_distance(&self, i: usize, j: usize) -> Rational {
        self.source.distance(self.fragment[i], self.fragment[j])
    }

    pub fn fragment_labels(&self) -> Vec<String> {
        self.fragment.iter().map(|&g| self.source.label(g)).collect()
    }
}

/// `restarts × steps` for randomized search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub restarts: usize,
    pub steps: usize,
}

impl Budget {
    pub fn new(restarts: usize, steps: usize) -> Self {
        Budget { restarts, steps }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { restarts: 256, steps: 2_000 }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.restarts, self.steps)
    }
}

impl FromStr for Budget {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::arg(format!("budget {text:?} is not <restarts>x<steps>"));
        let (r, s) = text.trim().split_once(['x', 'X']).ok_or_else(bad)?;
        let restarts = r.trim().parse().map_err(|_| bad())?;
        let steps = s.trim().parse().map_err(|_| bad())?;
        if restarts == 0 {
            return Err(Error::arg("budget needs at least one restart"));
        }
        Ok(Budget { restarts, steps })
    }
}

/// A parsed instance file: `key=value` lines, `#` comments.
///
/// Keys: `source`, `fragment` (`all` or comma-separated labels), `target`,
/// `delta`, `mode` (`metric` or `alpha`), `alpha` (constant off the identity,
/// default 1/2), `seed`, `budget`.
#[derive(Clone, Debug)]
pub struct InstanceFile {
    pub source_spec: GroupSpec,
    pub instance: ApproxInstance,
    pub seed: u64,
    pub budget: Budget,
}

impl FromStr for InstanceFile {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut fields = std::collections::BTreeMap::new();
        for (number, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::arg(format!("line {}: expected key=value", number + 1)))?;
            let key = key.trim();
            if !matches!(key, "source" | "fragment" | "target" | "delta" | "mode" | "alpha" | "seed" | "budget") {
                return Err(Error::arg(format!("line {}: unknown key {key:?}", number + 1)));
            }
            if fields.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(Error::arg(format!("line {}: duplicate key {key:?}", number + 1)));
            }
        }
        let get = |key: &str| fields.get(key).ok_or_else(|| Error::arg(format!("missing key {key:?}")));
        let source_spec: GroupSpec = get("source")?.parse()?;
        let source = source_spec.build()?;
        let fragment = match fields.get("fragment").map(String::as_str) {
            None | Some("all") => source.elements().collect(),
            Some(list) => list.split(',').map(|l| source.parse_label(l)).collect::<Result<Vec<_>>>()?,
        };
        let target: TargetFamily = get("target")?.parse()?;
        let delta = parse_rational(get("delta")?)?;
        let seed = match fields.get("seed") {
            Some(s) => s.parse().map_err(|_| Error::arg(format!("seed {s:?} is not an integer")))?,
            None => 0,
        };
        let budget = match fields.get("budget") {
            Some(b) => b.parse()?,
            None => Budget::default(),
        };
        let mut instance = ApproxInstance::new(source, fragment, delta, target)?;
        match fields.get("mode").map(String::as_str) {
            None | Some("metric") => {
                if fields.contains_key("alpha") {
                    return Err(Error::arg("alpha is only meaningful with mode=alpha"));
                }
            }
            Some("alpha") => {
                let value = match fields.get("alpha") {
                    Some(a) => parse_rational(a)?,
                    None => Rational::new(1.into(), 2.into()),
                };
                instance = instance.with_constant_alpha(value)?;
            }
            Some(other) => return Err(Error::arg(format!("mode {other:?} is not metric or alpha"))),
        }
        Ok(InstanceFile { source_spec, instance, seed, budget })
    }
}
