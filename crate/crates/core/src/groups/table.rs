use std::collections::BTreeSet;

use super::{GroupStructure, TABLE_CAP};
use crate::error::{Error, Result};

/// An abstract finite group given by its Cayley table.
#[derive(Debug, Clone)]
pub struct TableStructure {
    description: String,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: usize,
    labels: Vec<String>,
}

impl TableStructure {
    /// Builds a group from a full multiplication table, checking the group axioms.
    pub fn new(description: impl Into<String>, table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 || n > TABLE_CAP {
            return Err(Error::param(format!("Cayley table of order {n} outside 1..={TABLE_CAP}")));
        }
        if labels.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::arg("malformed Cayley table"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::arg("Cayley table has no identity"))?;
        let mut inverse = vec![0u32; n];
        for g in 0..n {
            let h = (0..n)
                .find(|&h| table[g][h] == identity)
                .ok_or_else(|| Error::arg(format!("element {} has no inverse", labels[g])))?;
            inverse[g] = h as u32;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::arg("Cayley table is not associative"));
                    }
                }
            }
        }
        Ok(TableStructure {
            description: description.into(),
            table: table.into_iter().flatten().map(|x| x as u32).collect(),
            inverse,
            identity,
            labels,
        })
    }

    /// The subgroup of `parent` generated by `generators`, reindexed in
    /// increasing parent order. Returns the table and the parent indices.
    pub fn generated_by(parent: &dyn GroupStructure, generators: &[usize]) -> Result<(Self, Vec<usize>)> {
        let mut members: BTreeSet<usize> = BTreeSet::new();
        members.insert(parent.identity());
        let mut frontier = vec![parent.identity()];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                if g >= parent.order() {
                    return Err(Error::arg(format!("generator index {g} out of range")));
                }
                let y = parent.mul(x, g);
                if members.insert(y) {
                    if members.len() > TABLE_CAP {
                        return Err(Error::limit("generated subgroup exceeds table cap"));
                    }
                    frontier.push(y);
                }
            }
        }
        let members: Vec<usize> = members.into_iter().collect();
        let position = |g: usize| members.binary_search(&g).expect("closed under products");
        let n = members.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &members {
            for &b in &members {
                table.push(position(parent.mul(a, b)) as u32);
            }
        }
        let inverse = members.iter().map(|&a| position(parent.inv(a)) as u32).collect();
        let labels = members.iter().map(|&a| parent.label(a)).collect();
        let structure = TableStructure {
            description: format!("sub({})", parent.describe()),
            table,
            inverse,
            identity: position(parent.identity()),
            labels,
        };
        Ok((structure, members))
    }
}

impl GroupStructure for TableStructure {
    fn order(&self) -> usize {
        self.labels.len()
    }

    fn identity(&self) -> usize {
        self.identity
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.labels.len() + b] as usize
    }

    fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    fn label(&self, a: usize) -> String {
        self.labels[a].clone()
    }

    fn parse_label(&self, text: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == text)
    }

    fn describe(&self) -> String {
        self.description.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_symmetric_hamming, CyclicStructure};

    #[test]
    fn klein_four_from_table() {
        let table = vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]];
        let labels = ["e", "a", "b", "c"].map(String::from).to_vec();
        let g = TableStructure::new("V4", table, labels).unwrap();
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(2), 2);
        assert_eq!(g.parse_label("c"), Some(3));
    }

    #[test]
    fn rejects_non_group_tables() {
        let labels = ["e", "a"].map(String::from).to_vec();
        assert!(TableStructure::new("bad", vec![vec![0, 1], vec![1, 1]], labels).is_err());
    }

    #[test]
    fn subgroup_of_cyclic() {
        let z12 = CyclicStructure::new(12).unwrap();
        let (sub, members) = TableStructure::generated_by(&z12, &[4]).unwrap();
        assert_eq!(members, vec![0, 4, 8]);
        assert_eq!(sub.order(), 3);
        assert_eq!(sub.mul(1, 2), 0);
    }

    #[test]
    fn subgroup_of_s3_generated_by_three_cycle() {
        let s3 = make_symmetric_hamming(3).unwrap().metric_group().unwrap();
        let c = s3.parse_label("231").unwrap();
        let h = s3.subgroup(&[c]).unwrap();
        assert_eq!(h.order(), 3);
        assert!(h.validate().passed());
    }
}
