//! Finite probability spaces, measurable partitions, and the discretizations
//! that stand in for non-atomic spaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite probability space: atoms are indexed 0..n, order is significant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteProbSpace {
    pub weights: Vec<f64>,
}

impl FiniteProbSpace {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInput("a probability space needs atoms"));
        }
        if weights.iter().any(|w| *w <= 0.0 || !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "atom weights must be strictly positive and finite".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotAProbability(total));
        }
        Ok(FiniteProbSpace { weights })
    }

    pub fn n_atoms(&self) -> usize {
        self.weights.len()
    }

    pub fn check_same(&self, other: &FiniteProbSpace) -> Result<()> {
        if self.n_atoms() == other.n_atoms() {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                left: self.n_atoms(),
                right: other.n_atoms(),
            })
        }
    }
}

/// `n` atoms of weight 1/n — the discretization of a non-atomic space.
pub fn uniform_space(n: usize) -> Result<FiniteProbSpace> {
    if n == 0 {
        return Err(Error::InvalidParameter("uniform_space needs n ≥ 1".into()));
    }
    FiniteProbSpace::new(vec![1.0 / n as f64; n])
}

/// Truncated dyadic space: weights 2⁻¹, …, 2⁻⁽ᴺ⁻¹⁾ with the last weight
/// repeated so the total is exactly 1 in binary arithmetic. Models the
/// partition [1/2ⁿ, 1/2ⁿ⁻¹) of (0,1) cut off after N blocks.
pub fn geometric_space(n: usize) -> Result<FiniteProbSpace> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "geometric_space needs N ≥ 1".into(),
        ));
    }
    if n == 1 {
        return FiniteProbSpace::new(vec![1.0]);
    }
    let mut weights: Vec<f64> = (1..n).map(|k| 0.5f64.powi(k as i32)).collect();
    weights.push(0.5f64.powi((n - 1) as i32));
    FiniteProbSpace::new(weights)
}

/// A partition of the atoms into labeled blocks; empty blocks are dropped
/// but block order (label order) is kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// From a labeled assignment atom → block label.
    pub fn from_assignment(assignment: &[usize], k: usize) -> Self {
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (atom, &label) in assignment.iter().enumerate() {
            blocks[label].push(atom);
        }
        blocks.retain(|b| !b.is_empty());
        Partition { blocks }
    }

    pub fn covers(&self, n_atoms: usize) -> bool {
        let mut seen = vec![false; n_atoms];
        for block in &self.blocks {
            for &a in block {
                if a >= n_atoms || seen[a] {
                    return false;
                }
                seen[a] = true;
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// All partitions of the atoms into at most `k` labeled blocks, obtained by
/// enumerating the kⁿ assignments atoms → {0..k-1}, dropping empty blocks
/// and deduplicating the resulting block sequences.
pub fn all_partitions(space: &FiniteProbSpace, k: usize) -> Result<Vec<Partition>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be ≥ 1".into()));
    }
    let n = space.n_atoms();
    let total = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let limit = 10_000_000u128;
    if total > limit {
        return Err(Error::EnumerationTooLarge { size: total, limit });
    }
    let mut out: Vec<Partition> = Vec::new();
    let mut assignment = vec![0usize; n];
    loop {
        let p = Partition::from_assignment(&assignment, k);
        if !out.contains(&p) {
            out.push(p);
        }
        // Odometer in base k.
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            assignment[i] += 1;
            if assignment[i] < k {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

/// All labeled assignments atoms → {0..k-1} as raw index vectors.
pub fn all_assignments(n_atoms: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    let total = (k as u128).checked_pow(n_atoms as u32).unwrap_or(u128::MAX);
    let limit = 10_000_000u128;
    if total > limit {
        return Err(Error::EnumerationTooLarge { size: total, limit });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut assignment = vec![0usize; n_atoms];
    loop {
        out.push(assignment.clone());
        let mut i = 0;
        loop {
            if i == n_atoms {
                return Ok(out);
            }
            assignment[i] += 1;
            if assignment[i] < k {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_space_basics() {
        assert_eq!(uniform_space(1).unwrap().weights, vec![1.0]);
        assert_eq!(uniform_space(4).unwrap().weights, vec![0.25; 4]);
        let s = uniform_space(3).unwrap();
        assert!((s.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        assert!(uniform_space(0).is_err());
    }

    #[test]
    fn geometric_space_tail_folding() {
        assert_eq!(geometric_space(1).unwrap().weights, vec![1.0]);
        assert_eq!(geometric_space(3).unwrap().weights, vec![0.5, 0.25, 0.25]);
        // Dyadic rationals sum exactly in binary.
        let s = geometric_space(10).unwrap();
        assert_eq!(s.weights.iter().sum::<f64>(), 1.0);
        assert!(geometric_space(0).is_err());
    }

    #[test]
    fn partitions_counts() {
        let s1 = uniform_space(1).unwrap();
        assert_eq!(all_partitions(&s1, 1).unwrap().len(), 1);

        // n=2, k=2: 4 assignments, 3 distinct labeled partitions.
        let s2 = uniform_space(2).unwrap();
        assert_eq!(all_assignments(2, 2).unwrap().len(), 4);
        assert_eq!(all_partitions(&s2, 2).unwrap().len(), 3);

        // n=3, k=2: 8 labeled assignments.
        assert_eq!(all_assignments(3, 2).unwrap().len(), 8);
    }

    #[test]
    fn partitions_cover_and_disjoint() {
        let s = uniform_space(4).unwrap();
        for p in all_partitions(&s, 3).unwrap() {
            assert!(p.covers(4));
        }
    }

    #[test]
    fn normalization_enforced() {
        assert!(matches!(
            FiniteProbSpace::new(vec![0.5, 0.6]),
            Err(Error::NotAProbability(_))
        ));
    }
}
