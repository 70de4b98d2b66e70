//! Exact arithmetic in the dicyclic group
//! `G_n = <x, y | x^{2n} = 1, y^2 = x^n, y x y^{-1} = x^{-1}>` of order `4n`.
//!
//! Every element has a unique normal form `x^a y^b` with `0 <= a < 2n` and
//! `b` in `{0, 1}`. Elements remember the `n` of the group they came from, so
//! mixing two groups is detected instead of silently producing garbage.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An element `x^a y^b` of `G_n` in normal form.
///
/// The derived ordering sorts by `b` first and then by `a`, which is the same
/// as ordering by [`GroupElement::index`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    n: u32,
    b: u32,
    a: u32,
}

impl GroupElement {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Exponent of `x`, in `0..2n`.
    pub fn a(&self) -> u32 {
        self.a
    }

    /// Exponent of `y`, either 0 or 1.
    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn is_identity(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// True for the elements of the cyclic subgroup `<x>`.
    pub fn is_rotation(&self) -> bool {
        self.b == 0
    }

    /// Position in the enumeration `x^0, ..., x^{2n-1}, y, xy, ..., x^{2n-1}y`.
    pub fn index(&self) -> usize {
        (self.a + 2 * self.n * self.b) as usize
    }

    /// Product with a group-membership check.
    pub fn checked_mul(&self, rhs: &GroupElement) -> Result<GroupElement> {
        if self.n != rhs.n {
            return Err(Error::ParameterMismatch {
                left: self.n,
                right: rhs.n,
            });
        }
        Ok(self.mul_unchecked(rhs))
    }

    // x^a y^b . x^c y^d = x^{a + (-1)^b c} y^{b + d}, folding y^2 into x^n.
    fn mul_unchecked(&self, rhs: &GroupElement) -> GroupElement {
        let m = 2 * self.n;
        let c = if self.b == 0 { rhs.a } else { (m - rhs.a) % m };
        let mut a = (self.a + c) % m;
        let mut b = self.b + rhs.b;
        if b == 2 {
            a = (a + self.n) % m;
            b = 0;
        }
        GroupElement { n: self.n, b, a }
    }

    pub fn inverse(&self) -> GroupElement {
        let m = 2 * self.n;
        if self.b == 0 {
            GroupElement {
                n: self.n,
                b: 0,
                a: (m - self.a) % m,
            }
        } else {
            // (x^a y)^{-1} = x^{a+n} y
            GroupElement {
                n: self.n,
                b: 1,
                a: (self.a + self.n) % m,
            }
        }
    }

    pub fn pow(&self, k: i64) -> GroupElement {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut acc = GroupElement {
            n: self.n,
            b: 0,
            a: 0,
        };
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul_unchecked(&base);
        }
        acc
    }

    /// Smallest `k >= 1` with `self^k = 1`, found by repeated multiplication.
    pub fn order(&self) -> u32 {
        let mut acc = *self;
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc.mul_unchecked(self);
            k += 1;
        }
        k
    }

    /// `h self h^{-1}`.
    pub fn conjugate_by(&self, h: &GroupElement) -> GroupElement {
        *h * *self * h.inverse()
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    /// Panics when the operands come from different groups; use
    /// [`GroupElement::checked_mul`] or [`DicyclicGroup::multiply`] for a
    /// fallible product.
    fn mul(self, rhs: GroupElement) -> GroupElement {
        assert_eq!(
            self.n, rhs.n,
            "multiplying elements of different dicyclic groups"
        );
        self.mul_unchecked(&rhs)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, 0) => write!(f, "1"),
            (0, 1) => write!(f, "y"),
            (1, b) => write!(f, "x{}", if b == 1 { "y" } else { "" }),
            (a, b) => write!(f, "x^{}{}", a, if b == 1 { "y" } else { "" }),
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The dicyclic group of order `4n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DicyclicGroup {
    n: u32,
}

impl DicyclicGroup {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "dicyclic group needs n >= 2, got {n}"
            )));
        }
        Ok(DicyclicGroup { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> usize {
        4 * self.n as usize
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            n: self.n,
            b: 0,
            a: 0,
        }
    }

    pub fn x(&self) -> GroupElement {
        self.element(1, 0)
    }

    pub fn y(&self) -> GroupElement {
        self.element(0, 1)
    }

    /// Normal form of `x^a y^b` for arbitrary integer exponents.
    pub fn element(&self, a: i64, b: i64) -> GroupElement {
        let n = self.n as i64;
        let m = 2 * n;
        let a = a + n * b.div_euclid(2);
        GroupElement {
            n: self.n,
            b: b.rem_euclid(2) as u32,
            a: a.rem_euclid(m) as u32,
        }
    }

    pub fn from_index(&self, index: usize) -> GroupElement {
        let m = 2 * self.n as usize;
        debug_assert!(index < 2 * m);
        GroupElement {
            n: self.n,
            b: (index / m) as u32,
            a: (index % m) as u32,
        }
    }

    /// All `4n` elements in index order.
    pub fn elements(
        &self,
    ) -> impl DoubleEndedIterator<Item = GroupElement> + ExactSizeIterator + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.n == self.n
    }

    pub fn multiply(&self, e1: &GroupElement, e2: &GroupElement) -> Result<GroupElement> {
        for e in [e1, e2] {
            if e.n != self.n {
                return Err(Error::ParameterMismatch {
                    left: self.n,
                    right: e.n,
                });
            }
        }
        Ok(e1.mul_unchecked(e2))
    }

    /// The conjugacy classes, ordered by their least element.
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for g in self.elements() {
            if seen[g.index()] {
                continue;
            }
            let members: BTreeSet<GroupElement> =
                self.elements().map(|h| g.conjugate_by(&h)).collect();
            for m in &members {
                seen[m.index()] = true;
            }
            classes.push(ConjugacyClass {
                representative: g,
                members: members.into_iter().collect(),
            });
        }
        classes
    }

    /// The subgroup generated by `gens` (the trivial subgroup when empty).
    pub fn subgroup_generated(&self, gens: &[GroupElement]) -> Subgroup {
        let mut mask = vec![false; self.order()];
        let id = self.identity();
        mask[id.index()] = true;
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in gens {
                let h = g * *s;
                if !mask[h.index()] {
                    mask[h.index()] = true;
                    queue.push_back(h);
                }
            }
        }
        Subgroup::from_mask(*self, mask, gens.to_vec())
    }

    pub fn generates(&self, gens: &[GroupElement]) -> bool {
        self.subgroup_generated(gens).order() == self.order()
    }

    /// Every subgroup, each listed once, sorted by order and then by members.
    ///
    /// Subgroups of `G_n` are generated by at most two elements, so closing
    /// every pair covers the whole lattice.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let elems: Vec<GroupElement> = self.elements().collect();
        let mut seen: BTreeSet<Vec<GroupElement>> = BTreeSet::new();
        let mut out = Vec::new();
        for (i, g) in elems.iter().enumerate() {
            for h in &elems[i..] {
                let gens = if g == h { vec![*g] } else { vec![*g, *h] };
                let sub = self.subgroup_generated(&gens);
                if seen.insert(sub.members.clone()) {
                    out.push(sub);
                }
            }
        }
        out.sort_by(|s, t| (s.order(), &s.members).cmp(&(t.order(), &t.members)));
        out
    }

    pub fn index_two_subgroups(&self) -> Vec<Subgroup> {
        self.all_subgroups()
            .into_iter()
            .filter(|s| 2 * s.order() == self.order())
            .collect()
    }

    /// All automorphisms, found by testing every pair of candidate images of
    /// `x` and `y` against the defining relations and generation.
    pub fn automorphism_group(&self) -> Vec<GroupAutomorphism> {
        let n = self.n as i64;
        let mut out = Vec::new();
        for ix in self.elements() {
            if !ix.pow(2 * n).is_identity() {
                continue;
            }
            for iy in self.elements() {
                if iy.pow(2) != ix.pow(n) {
                    continue;
                }
                if ix.conjugate_by(&iy) != ix.inverse() {
                    continue;
                }
                if self.generates(&[ix, iy]) {
                    out.push(GroupAutomorphism {
                        image_of_x: ix,
                        image_of_y: iy,
                    });
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: GroupElement,
    pub members: Vec<GroupElement>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A subgroup stored as its sorted member list plus a membership mask.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: DicyclicGroup,
    members: Vec<GroupElement>,
    generators: Vec<GroupElement>,
    mask: Vec<bool>,
}

impl Subgroup {
    fn from_mask(group: DicyclicGroup, mask: Vec<bool>, generators: Vec<GroupElement>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| group.from_index(i))
            .collect();
        Subgroup {
            group,
            members,
            generators,
            mask,
        }
    }

    pub fn group(&self) -> DicyclicGroup {
        self.group
    }

    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.group.order() / self.order()
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.n == self.group.n && self.mask[e.index()]
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// `h H h^{-1}`.
    pub fn conjugate_by(&self, h: &GroupElement) -> Subgroup {
        let gens: Vec<GroupElement> = self.generators.iter().map(|g| g.conjugate_by(h)).collect();
        self.group.subgroup_generated(&gens)
    }

    /// Short label built from the generators, e.g. `<x^2, y>`.
    pub fn label(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        format!("<{}>", gens.join(", "))
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Serialize for Subgroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Subgroup", 2)?;
        st.serialize_field("label", &self.label())?;
        st.serialize_field("order", &self.order())?;
        st.end()
    }
}

/// An automorphism, determined by where it sends `x` and `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupAutomorphism {
    pub image_of_x: GroupElement,
    pub image_of_y: GroupElement,
}

impl GroupAutomorphism {
    pub fn identity(group: &DicyclicGroup) -> Self {
        GroupAutomorphism {
            image_of_x: group.x(),
            image_of_y: group.y(),
        }
    }

    pub fn apply(&self, e: &GroupElement) -> GroupElement {
        let rot = self.image_of_x.pow(e.a() as i64);
        if e.b() == 0 {
            rot
        } else {
            rot * self.image_of_y
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupAutomorphism) -> GroupAutomorphism {
        GroupAutomorphism {
            image_of_x: self.apply(&other.image_of_x),
            image_of_y: self.apply(&other.image_of_y),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image_of_x.a() == 1
            && self.image_of_x.b() == 0
            && self.image_of_y.a() == 0
            && self.image_of_y.b() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: u32) -> DicyclicGroup {
        DicyclicGroup::new(n).unwrap()
    }

    #[test]
    fn rejects_small_n() {
        assert!(DicyclicGroup::new(1).is_err());
        assert!(DicyclicGroup::new(0).is_err());
    }

    #[test]
    fn multiplication_examples() {
        for n in 2..=7 {
            let gr = g(n);
            let (x, y) = (gr.x(), gr.y());
            assert_eq!(y * y, gr.element(n as i64, 0));
            assert_eq!(y * x, gr.element(2 * n as i64 - 1, 1));
            for a in 0..2 * n as i64 {
                for b in 0..2 * n as i64 {
                    assert_eq!(x.pow(a) * x.pow(b), gr.element((a + b) % (2 * n as i64), 0));
                }
            }
            assert_eq!(x.pow(2 * n as i64), gr.identity());
            assert_eq!(y.conjugate_by(&y), y);
            assert_eq!(x.conjugate_by(&y), x.inverse());
        }
    }

    #[test]
    fn mismatched_groups_are_an_error() {
        let (g2, g3) = (g(2), g(3));
        assert_eq!(
            g2.x().checked_mul(&g3.x()),
            Err(Error::ParameterMismatch { left: 2, right: 3 })
        );
        assert!(g2.multiply(&g2.x(), &g3.y()).is_err());
        assert!(g2.multiply(&g2.x(), &g2.y()).is_ok());
    }

    #[test]
    #[should_panic(expected = "different dicyclic groups")]
    fn operator_panics_on_mismatch() {
        let _ = g(2).x() * g(4).x();
    }

    #[test]
    fn element_normalizes_negative_and_large_exponents() {
        let gr = g(3);
        assert_eq!(gr.element(0, -1), gr.y().inverse());
        assert_eq!(gr.element(0, 2), gr.element(3, 0));
        assert_eq!(gr.element(-1, 0), gr.x().inverse());
        assert_eq!(gr.element(13, 4), gr.element(1, 0));
    }

    #[test]
    fn orders() {
        for n in 2..=9 {
            let gr = g(n);
            assert_eq!(gr.identity().order(), 1);
            assert_eq!(gr.y().order(), 4);
            assert_eq!(gr.x().order(), 2 * n);
            for e in gr.elements().filter(|e| !e.is_rotation()) {
                assert_eq!(e.order(), 4, "{e} in G_{n}");
            }
            let involutions: Vec<_> = gr.elements().filter(|e| e.order() == 2).collect();
            assert_eq!(involutions, vec![gr.element(n as i64, 0)]);
        }
    }

    #[test]
    fn carrier_and_rotation_subgroup() {
        for n in 2..=9 {
            let gr = g(n);
            let all: BTreeSet<_> = gr.elements().collect();
            assert_eq!(all.len(), 4 * n as usize);
            let rot = gr.subgroup_generated(&[gr.x()]);
            assert_eq!(rot.index(), 2);
            for h in gr.elements() {
                assert_eq!(rot.conjugate_by(&h), rot);
            }
        }
    }

    #[test]
    fn conjugacy_class_table() {
        for n in 2..=10 {
            let gr = g(n);
            let classes = gr.conjugacy_classes();
            assert_eq!(classes.len(), n as usize + 3);
            let mut sizes: Vec<usize> = classes.iter().map(|c| c.size()).collect();
            sizes.sort();
            let mut expected = vec![1, 1, n as usize, n as usize];
            expected.extend(std::iter::repeat_n(2, n as usize - 1));
            expected.sort();
            assert_eq!(sizes, expected);
            let xn = gr.element(n as i64, 0);
            let c = classes.iter().find(|c| c.members.contains(&xn)).unwrap();
            assert_eq!(c.size(), 1);
            let total: usize = classes.iter().map(|c| c.size()).sum();
            assert_eq!(total, 4 * n as usize);
        }
        let sizes = |n| {
            let mut s: Vec<_> = g(n).conjugacy_classes().iter().map(|c| c.size()).collect();
            s.sort();
            s
        };
        assert_eq!(sizes(2), vec![1, 1, 2, 2, 2]);
        assert_eq!(sizes(3), vec![1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn subgroup_lattice_examples() {
        let g3 = g(3);
        let idx2 = g3.index_two_subgroups();
        assert_eq!(idx2.len(), 1);
        assert_eq!(idx2[0], g3.subgroup_generated(&[g3.x()]));

        let g4 = g(4);
        let idx2 = g4.index_two_subgroups();
        assert_eq!(idx2.len(), 3);
        let (x, y) = (g4.x(), g4.y());
        for expected in [
            g4.subgroup_generated(&[x]),
            g4.subgroup_generated(&[x.pow(2), y]),
            g4.subgroup_generated(&[x.pow(2), x * y]),
        ] {
            assert!(idx2.contains(&expected));
        }

        for n in 2..=8 {
            let gr = g(n);
            let subs = gr.all_subgroups();
            let order_two: Vec<_> = subs.iter().filter(|s| s.order() == 2).collect();
            assert_eq!(order_two.len(), 1);
            assert!(order_two[0].contains(&gr.element(n as i64, 0)));
            assert!(subs.first().unwrap().is_trivial());
            assert_eq!(subs.last().unwrap().order(), 4 * n as usize);
            for s in &subs {
                assert!(s.contains(&gr.identity()));
                for a in s.members() {
                    assert!(s.contains(&a.inverse()));
                    for b in s.members() {
                        assert!(s.contains(&(*a * *b)));
                    }
                }
            }
        }
    }

    #[test]
    fn automorphisms() {
        let g2 = g(2);
        let auts = g2.automorphism_group();
        assert_eq!(auts.len(), 24);
        assert!(auts.contains(&GroupAutomorphism::identity(&g2)));

        for n in 2..=8 {
            let gr = g(n);
            let auts = gr.automorphism_group();
            let set: BTreeSet<_> = auts.iter().copied().collect();
            if n % 2 == 0 {
                let rho = GroupAutomorphism {
                    image_of_x: gr.x(),
                    image_of_y: gr.x() * gr.y(),
                };
                assert!(set.contains(&rho));
            }
            for f in &auts {
                for h in &auts {
                    assert!(set.contains(&f.compose(h)));
                }
                for e in gr.elements() {
                    assert_eq!(f.apply(&e).order(), e.order());
                }
                if n >= 3 {
                    assert!(f.image_of_x.is_rotation());
                }
                let classes = gr.conjugacy_classes();
                for c in &classes {
                    let image: BTreeSet<_> = c.members.iter().map(|e| f.apply(e)).collect();
                    assert!(classes.iter().any(|d| d
                        .members
                        .iter()
                        .copied()
                        .collect::<BTreeSet<_>>()
                        == image));
                }
            }
        }
    }

    #[test]
    fn display() {
        let gr = g(4);
        assert_eq!(gr.identity().to_string(), "1");
        assert_eq!(gr.x().to_string(), "x");
        assert_eq!(gr.element(3, 1).to_string(), "x^3y");
        assert_eq!(gr.element(1, 1).to_string(), "xy");
    }
}
