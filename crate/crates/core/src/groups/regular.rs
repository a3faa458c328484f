use std::sync::Arc;

use super::{FiniteMetricGroup, Permutation, TABLE_CAP};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The left-regular (Cayley) action `g ↦ (x ↦ g x)` on the carrier.
#[derive(Debug, Clone)]
pub struct RegularEmbedding {
    images: Vec<Permutation>,
}

impl RegularEmbedding {
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, g: usize) -> &Permutation {
        &self.images[g]
    }

    pub fn images(&self) -> &[Permutation] {
        &self.images
    }
}

/// Exact homomorphism `G → S_|G|`; non-identity images are fixed-point-free.
pub fn regular_embedding<S: Scalar>(group: &FiniteMetricGroup<S>) -> Result<RegularEmbedding> {
    let n = group.order();
    if n > TABLE_CAP {
        return Err(Error::limit(format!(
            "regular embedding of a carrier with {n} elements exceeds cap {TABLE_CAP}"
        )));
    }
    let images = group
        .elements()
        .map(|g| {
            let images = group.elements().map(|x| group.mul(g, x) as u32).collect();
            Permutation::from_images_unchecked(images)
        })
        .collect();
    Ok(RegularEmbedding { images })
}

/// `G` with the metric pulled back from `(S_|G|, d_H)` along the regular embedding.
pub fn regular_metric_group<S: Scalar>(group: &FiniteMetricGroup<S>) -> Result<FiniteMetricGroup> {
    let embedding = regular_embedding(group)?;
    let values = embedding.images().iter().map(Permutation::hamming_length).collect();
    Ok(FiniteMetricGroup::from_table(
        format!("regular({})", group.name()),
        Arc::clone(group.structure()),
        values,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{hamming_distance, make_cyclic_lee, make_symmetric_hamming};
    use crate::scalar::int;

    fn check_free_homomorphism<S: Scalar>(group: &FiniteMetricGroup<S>) {
        let emb = regular_embedding(group).unwrap();
        assert_eq!(emb.degree(), group.order());
        assert!(emb.image(group.identity()).is_identity());
        for g in group.elements() {
            for h in group.elements() {
                let prod = emb.image(g).compose(emb.image(h));
                assert_eq!(&prod, emb.image(group.mul(g, h)));
                if g != h {
                    assert_eq!(hamming_distance(emb.image(g), emb.image(h)).unwrap(), int(1));
                }
            }
        }
    }

    #[test]
    fn cyclic_five_into_s5() {
        check_free_homomorphism(&make_cyclic_lee(5).unwrap());
    }

    #[test]
    fn s3_into_s6() {
        check_free_homomorphism(&make_symmetric_hamming(3).unwrap().metric_group().unwrap());
    }

    #[test]
    fn too_large_carrier() {
        let s8 = make_symmetric_hamming(8).unwrap().metric_group().unwrap();
        assert!(matches!(regular_embedding(&s8), Err(Error::ResourceLimit(_))));
    }
}
