//! Permutations of `{1, ..., N}`.
//!
//! Points are 1-based at the API so that cycles can be written exactly as by
//! hand; storage is 0-based. Products compose like functions:
//! `p * q = p ∘ q` applies `q` first.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// From 0-based images: point `i` goes to `images[i]`.
    pub fn from_zero_based(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &p in &images {
            let p = p as usize;
            if p >= images.len() || seen[p] {
                return Err(Error::InvalidParameter(
                    "images do not form a bijection".into(),
                ));
            }
            seen[p] = true;
        }
        Ok(Permutation { images })
    }

    /// From disjoint cycles over 1-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                if p == 0 || p > degree {
                    return Err(Error::InvalidParameter(format!(
                        "point {p} outside 1..={degree}"
                    )));
                }
                if touched[p - 1] {
                    return Err(Error::InvalidParameter(format!("point {p} repeated")));
                }
                touched[p - 1] = true;
                let next = cycle[(i + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u32;
            }
        }
        Permutation::from_zero_based(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 1-based point.
    pub fn apply(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }

    pub(crate) fn image0(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p as usize] = i as u32;
        }
        Permutation { images }
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(
            self.degree(),
            other.degree(),
            "composing permutations of different degree"
        );
        Permutation {
            images: other
                .images
                .iter()
                .map(|&p| self.images[p as usize])
                .collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            sq = sq.compose(&sq);
            e >>= 1;
        }
        acc
    }

    /// All cycles, fixed points included, each starting at its least point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Cycle lengths, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| acc.lcm(&c.len()))
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.compose(other) == other.compose(self)
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Every element of the group generated by `gens`.
pub fn generated_group(degree: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    let mut out = Vec::new();
    while let Some(p) = queue.pop_front() {
        for s in gens {
            let q = s.compose(&p);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
        out.push(p);
    }
    out
}

/// Whether the group generated by `gens` acts transitively.
pub fn is_transitive(degree: usize, gens: &[Permutation]) -> bool {
    if degree == 0 {
        return true;
    }
    let mut seen = vec![false; degree];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        for s in gens {
            let q = s.image0(p);
            if !seen[q] {
                seen[q] = true;
                queue.push_back(q);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_perm(degree: usize) -> impl Strategy<Value = Permutation> {
        Just((0..degree as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_zero_based(v).unwrap())
    }

    #[test]
    fn cycles_roundtrip_display() {
        let p = Permutation::from_cycles(8, &[vec![1, 8, 3, 6], vec![2, 7, 4, 5]]).unwrap();
        assert_eq!(p.to_string(), "(1,8,3,6)(2,7,4,5)");
        assert_eq!(p.apply(1), 8);
        assert_eq!(p.apply(6), 1);
        assert_eq!(p.order(), 4);
        assert_eq!(p.cycle_type(), vec![4, 4]);
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::from_cycles(3, &[vec![1, 4]]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(Permutation::from_zero_based(vec![0, 0]).is_err());
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let p = Permutation::from_cycles(3, &[vec![1, 2]]).unwrap();
        let q = Permutation::from_cycles(3, &[vec![2, 3]]).unwrap();
        // (p ∘ q)(2) = p(3) = 3
        assert_eq!((&p * &q).apply(2), 3);
        assert_eq!((&q * &p).apply(2), 1);
    }

    #[test]
    fn generated_group_sizes() {
        let a = Permutation::from_cycles(4, &[vec![1, 2, 3, 4]]).unwrap();
        let b = Permutation::from_cycles(4, &[vec![1, 2]]).unwrap();
        assert_eq!(generated_group(4, std::slice::from_ref(&a)).len(), 4);
        assert_eq!(generated_group(4, &[a.clone(), b]).len(), 24);
        assert!(is_transitive(4, &[a]));
        let c = Permutation::from_cycles(4, &[vec![1, 2]]).unwrap();
        assert!(!is_transitive(4, &[c]));
    }

    proptest! {
        #[test]
        fn group_laws(p in arb_perm(9), q in arb_perm(9), r in arb_perm(9)) {
            prop_assert_eq!(p.compose(&q).compose(&r), p.compose(&q.compose(&r)));
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert_eq!(p.pow(p.order() as i64), Permutation::identity(9));
            prop_assert_eq!(p.pow(-3), p.inverse().pow(3));
            let total: usize = p.cycles().iter().map(|c| c.len()).sum();
            prop_assert_eq!(total, 9);
        }
    }
}
