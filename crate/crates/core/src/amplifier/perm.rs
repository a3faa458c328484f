use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::shift_schedule;
use crate::error::{Error, Result};
use crate::groups::{regular_embedding, FiniteMetricGroup, Permutation, SymmetricStructure};
use crate::scalar::{format_rational, ratio, Rational};
use crate::solver::{defect, ApproxInstance, Defect, TargetFamily};

/// Largest replication factor the shift pipelines will use.
pub const SCALE_CAP: usize = 10_000;

/// A map from a labelled fragment of a source group into `S_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct PermWitness {
    source: String,
    fragment: Vec<String>,
    images: Vec<Permutation>,
    degree: usize,
}

#[derive(Serialize, Deserialize)]
struct PermWitnessFile {
    kind: String,
    source: String,
    fragment: Vec<String>,
    degree: usize,
    images: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    defect: Option<serde_json::Value>,
}

impl PermWitness {
    pub fn new(source: impl Into<String>, fragment: Vec<String>, images: Vec<Permutation>) -> Result<Self> {
        if fragment.len() != images.len() {
            return Err(Error::arg(format!("{} labels for {} images", fragment.len(), images.len())));
        }
        let degree = images.first().map_or(0, Permutation::degree);
        if images.iter().any(|g| g.degree() != degree) {
            return Err(Error::arg("images of a witness must share one degree"));
        }
        Ok(PermWitness { source: source.into(), fragment, images, degree })
    }

    /// `(S_n, d_H)` mapped into itself by the identity.
    pub fn natural_symmetric(n: usize) -> Result<Self> {
        let s = SymmetricStructure::new(n)?;
        let images: Vec<Permutation> = (0..crate::groups::GroupStructure::order(&s)).map(|g| s.element(g)).collect();
        let labels = images.iter().map(Permutation::one_line).collect();
        PermWitness::new(format!("symmetric:n={n}:metric=hamming"), labels, images)
    }

    /// Left-regular action of `group` restricted to `fragment`.
    pub fn regular(group: &FiniteMetricGroup, fragment: &[usize]) -> Result<Self> {
        let embedding = regular_embedding(group)?;
        let labels = fragment.iter().map(|&g| group.label(g)).collect();
        let images = fragment.iter().map(|&g| embedding.image(g).clone()).collect();
        PermWitness::new(group.name(), labels, images)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn fragment(&self) -> &[String] {
        &self.fragment
    }

    pub fn images(&self) -> &[Permutation] {
        &self.images
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    /// `d_H(θ(f_i), θ(f_j))`; zero in degree 0.
    pub fn distance(&self, i: usize, j: usize) -> Rational {
        if self.degree == 0 {
            return Rational::zero();
        }
        let differ = self.images[i].images().iter().zip(self.images[j].images()).filter(|(a, b)| a != b).count();
        ratio(differ as i64, self.degree as i64)
    }

    pub fn distance_table(&self) -> Vec<Vec<Rational>> {
        (0..self.images.len()).map(|i| (0..self.images.len()).map(|j| self.distance(i, j)).collect()).collect()
    }

    /// Defects against `group` (whose labels must cover the fragment) in metric mode.
    pub fn defect_against(&self, group: &FiniteMetricGroup) -> Result<Defect<Rational>> {
        let fragment = self.fragment.iter().map(|l| group.parse_label(l)).collect::<Result<Vec<_>>>()?;
        if self.degree == 0 {
            return Err(Error::arg("defects are undefined in degree 0"));
        }
        let instance = ApproxInstance::new(group.clone(), fragment, Rational::new(1.into(), 1.into()), TargetFamily::Symmetric(self.degree))?;
        defect(&self.images, &instance)
    }

    pub fn to_json(&self, declared: Option<&Defect<Rational>>) -> Result<String> {
        let file = PermWitnessFile {
            kind: "permutation".into(),
            source: self.source.clone(),
            fragment: self.fragment.clone(),
            degree: self.degree,
            images: self.images.iter().map(|g| g.images().iter().map(|&x| x as usize + 1).collect()).collect(),
            defect: declared.map(serde_json::to_value).transpose().map_err(|e| Error::arg(e.to_string()))?,
        };
        serde_json::to_string_pretty(&file).map_err(|e| Error::arg(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PermWitnessFile =
            serde_json::from_str(text).map_err(|e| Error::arg(format!("witness file: {e}")))?;
        if file.kind != "permutation" {
            return Err(Error::arg(format!("expected a permutation witness, found kind {:?}", file.kind)));
        }
        let images = file.images.iter().map(|g| Permutation::from_one_based(g)).collect::<Result<Vec<_>>>()?;
        let w = PermWitness::new(file.source, file.fragment, images)?;
        if !w.images.is_empty() && w.degree != file.degree {
            return Err(Error::arg(format!("declared degree {} but images have degree {}", file.degree, w.degree)));
        }
        Ok(PermWitness { degree: file.degree, ..w })
    }

    fn from_parts(source: &str, fragment: &[String], images: Vec<Vec<u32>>, degree: usize) -> Self {
        let images = images.into_iter().map(|g| Permutation::new(g).expect("block construction")).collect();
        PermWitness { source: source.to_string(), fragment: fragment.to_vec(), images, degree }
    }
}

/// Extends every image by the identity on `m..m′`.
pub fn dilute(w: &PermWitness, m_prime: usize) -> Result<PermWitness> {
    if m_prime < w.degree {
        return Err(Error::arg(format!("cannot dilute degree {} down to {m_prime}", w.degree)));
    }
    let images = w
        .images
        .iter()
        .map(|g| {
            let mut v = g.images().to_vec();
            v.extend(w.degree as u32..m_prime as u32);
            v
        })
        .collect();
    Ok(PermWitness::from_parts(&w.source, &w.fragment, images, m_prime))
}

/// `k` disjoint copies on consecutive blocks.
pub fn replicate(w: &PermWitness, k: usize) -> Result<PermWitness> {
    if k == 0 {
        return Err(Error::arg("replication needs k >= 1"));
    }
    let n = w.degree;
    let images = w
        .images
        .iter()
        .map(|g| (0..k).flat_map(|c| g.images().iter().map(move |&x| x + (c * n) as u32)).collect())
        .collect();
    Ok(PermWitness::from_parts(&w.source, &w.fragment, images, k * n))
}

/// `w1` on the first `m` points and `w2` on the next `m′ − m`.
pub fn amalgamate(w1: &PermWitness, w2: &PermWitness) -> Result<PermWitness> {
    if w1.fragment != w2.fragment {
        return Err(Error::arg("amalgamated witnesses must share the fragment"));
    }
    let m = w1.degree as u32;
    let images = w1
        .images
        .iter()
        .zip(&w2.images)
        .map(|(a, b)| a.images().iter().copied().chain(b.images().iter().map(|&x| x + m)).collect())
        .collect();
    Ok(PermWitness::from_parts(&w1.source, &w1.fragment, images, w1.degree + w2.degree))
}

/// Replication factor of `θ′` and the block sizes `(m, m′ − m)` used by [`shift_amplify`].
pub fn shift_degrees(theta: &PermWitness, theta_prime: &PermWitness, eps: &Rational) -> Result<(usize, usize, usize)> {
    shift_schedule(theta.degree, theta_prime.degree, eps)
}

/// Builds a witness for the ε-shift of the metric realized by `theta`.
///
/// `theta_prime` must keep distinct fragment elements at distance exactly 1
/// (a regular embedding does). The output is `r` copies of `θ′` followed by
/// copies of `θ` on `m′ − m` points, with `m/m′ = ε/(1+ε)`, so each distance
/// becomes `(m·1 + (m′−m)·d_θ)/m′ = (d_θ + ε)/(1 + ε)`.
///
/// `eps = 0` is only allowed without `theta_prime` and returns `theta` unchanged.
pub fn shift_amplify(theta: &PermWitness, theta_prime: Option<&PermWitness>, eps: &Rational) -> Result<PermWitness> {
    let theta_prime = match theta_prime {
        None if eps.is_zero() => return replicate(theta, 1),
        None => return Err(Error::arg("a positive eps needs a discrete witness theta'")),
        Some(_) if eps.is_zero() => return Err(Error::param("eps = 0 is the unshifted metric; omit theta'")),
        Some(t) => t,
    };
    if theta.fragment != theta_prime.fragment {
        return Err(Error::arg("theta and theta' must share the fragment"));
    }
    let one = Rational::new(1.into(), 1.into());
    for i in 0..theta_prime.images.len() {
        for j in i + 1..theta_prime.images.len() {
            if theta_prime.distance(i, j) != one {
                return Err(Error::arg(format!(
                    "theta' distance between {} and {} is {}, not 1",
                    theta_prime.fragment[i],
                    theta_prime.fragment[j],
                    format_rational(&theta_prime.distance(i, j))
                )));
            }
        }
    }
    let (r, _, rest) = shift_schedule(theta.degree, theta_prime.degree, eps)?;
    let copies = rest / theta.degree;
    let out = amalgamate(&replicate(theta_prime, r)?, &replicate(theta, copies)?)?;
    Ok(out.with_source(format!("shift({},eps={})", theta.source, format_rational(eps))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, make_cyclic_lee};
    use crate::scalar::int;

    fn s3_pair() -> (PermWitness, PermWitness) {
        let nat = PermWitness::natural_symmetric(3).unwrap();
        let g = build_group(nat.source()).unwrap();
        let fragment: Vec<usize> = g.elements().collect();
        let reg = PermWitness::regular(&g, &fragment).unwrap();
        (nat, reg)
    }

    #[test]
    fn dilution_scales_distances() {
        let (_, reg) = s3_pair();
        assert_eq!(reg.distance(0, 1), int(1));
        let d = dilute(&reg, 18).unwrap();
        assert_eq!(d.distance(0, 1), ratio(1, 3));
        assert_eq!(dilute(&reg, 6).unwrap(), reg);
        assert!(dilute(&reg, 5).is_err());
    }

    #[test]
    fn replication_preserves_distances() {
        let (nat, _) = s3_pair();
        let r = replicate(&nat, 4).unwrap();
        assert_eq!(r.degree(), 12);
        assert_eq!(r.distance_table(), nat.distance_table());
        let t = nat.fragment().iter().position(|l| l == "213").unwrap();
        assert_eq!(r.distance(0, t), ratio(2, 3));
        assert!(replicate(&nat, 0).is_err());
        assert_eq!(replicate(&nat, 1).unwrap(), nat);
    }

    #[test]
    fn amalgam_with_empty_block() {
        let (nat, _) = s3_pair();
        let empty = PermWitness::new(nat.source(), nat.fragment().to_vec(), vec![Permutation::identity(0); 6]).unwrap();
        assert_eq!(amalgamate(&nat, &empty).unwrap(), nat);
    }

    #[test]
    fn s3_shift_at_one_half() {
        let (nat, reg) = s3_pair();
        assert_eq!(shift_degrees(&nat, &reg, &ratio(1, 2)).unwrap(), (1, 6, 12));
        let out = shift_amplify(&nat, Some(&reg), &ratio(1, 2)).unwrap();
        assert_eq!(out.degree(), 18);
        let shifted = build_group(out.source()).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let gi = shifted.parse_label(&out.fragment()[i]).unwrap();
                let gj = shifted.parse_label(&out.fragment()[j]).unwrap();
                assert_eq!(out.distance(i, j), shifted.distance(gi, gj));
            }
        }
        let t = out.fragment().iter().position(|l| l == "213").unwrap();
        let c = out.fragment().iter().position(|l| l == "231").unwrap();
        assert_eq!(out.distance(0, t), ratio(7, 9));
        assert_eq!(out.distance(0, c), int(1));
        assert_eq!(out.defect_against(&shifted).unwrap().max_component(), int(0));
    }

    #[test]
    fn shift_rejects_bad_inputs() {
        let (nat, reg) = s3_pair();
        assert!(shift_amplify(&nat, Some(&nat), &ratio(1, 2)).is_err());
        assert!(shift_amplify(&nat, None, &ratio(1, 2)).is_err());
        assert!(shift_amplify(&nat, Some(&reg), &int(0)).is_err());
        assert_eq!(shift_amplify(&nat, None, &int(0)).unwrap(), nat);
        assert!(shift_amplify(&nat, Some(&reg), &ratio(3, 2)).is_err());
        assert!(matches!(shift_amplify(&nat, Some(&reg), &ratio(10_007, 10_009)), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn regular_cyclic_shift() {
        let g = build_group("regular(cyclic:p=5:metric=lee)").unwrap();
        let all: Vec<usize> = g.elements().collect();
        let theta = PermWitness::regular(&g, &all).unwrap();
        let theta_prime = PermWitness::regular(&make_cyclic_lee(5).unwrap(), &all).unwrap();
        for eps in [ratio(1, 3), ratio(1, 2), int(1)] {
            let out = shift_amplify(&theta, Some(&theta_prime), &eps).unwrap();
            let shifted = build_group(out.source()).unwrap();
            assert_eq!(out.defect_against(&shifted).unwrap().max_component(), int(0));
        }
    }

    #[test]
    fn json_round_trip() {
        let (nat, _) = s3_pair();
        let text = nat.to_json(None).unwrap();
        assert!(text.contains("\"images\""));
        assert_eq!(PermWitness::from_json(&text).unwrap(), nat);
        assert!(PermWitness::from_json("{\"kind\":\"unitary\"}").is_err());
    }
}
