//! Covering-space bookkeeping for a finite group action given by a generating
//! vector: Riemann–Hurwitz genera, fixed-point counts from coset actions,
//! genera and signatures of intermediate quotients, and the census of
//! triangular actions of `G_n`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{DicyclicGroup, GroupAutomorphism, GroupElement, Subgroup};

/// `(γ; m_1, ..., m_r)` for an orientable quotient orbifold.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrbifoldSignature {
    pub quotient_genus: u32,
    pub cone_orders: Vec<u32>,
}

impl OrbifoldSignature {
    pub fn new(quotient_genus: u32, cone_orders: Vec<u32>) -> Self {
        OrbifoldSignature {
            quotient_genus,
            cone_orders,
        }
    }

    /// Same signature with the cone orders sorted ascending.
    pub fn sorted(&self) -> Self {
        let mut cone_orders = self.cone_orders.clone();
        cone_orders.sort_unstable();
        OrbifoldSignature {
            quotient_genus: self.quotient_genus,
            cone_orders,
        }
    }

    /// `2γ - 2 + Σ (1 - 1/m_i)`.
    pub fn orbifold_area(&self) -> Ratio<i64> {
        let mut total = Ratio::from_integer(2 * self.quotient_genus as i64 - 2);
        for &m in &self.cone_orders {
            total += Ratio::new(m as i64 - 1, m as i64);
        }
        total
    }
}

impl fmt::Display for OrbifoldSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders: Vec<String> = self.cone_orders.iter().map(|m| m.to_string()).collect();
        if orders.is_empty() {
            write!(f, "({}; -)", self.quotient_genus)
        } else {
            write!(f, "({}; {})", self.quotient_genus, orders.join(", "))
        }
    }
}

/// Genus `g` of a surface carrying an action of a group of the given order
/// with quotient signature `sig`: `2g - 2 = |G| (2γ - 2 + Σ (1 - 1/m_i))`.
pub fn rh_genus(group_order: u64, sig: &OrbifoldSignature) -> Result<u64> {
    let inadmissible = |reason: &str| Error::InadmissibleSignature {
        signature: sig.to_string(),
        reason: reason.to_string(),
    };
    if group_order == 0 {
        return Err(inadmissible("group order must be positive"));
    }
    if sig.cone_orders.iter().any(|&m| m < 2) {
        return Err(inadmissible("cone orders must be at least 2"));
    }
    let euler = sig.orbifold_area() * Ratio::from_integer(group_order as i64);
    if !euler.is_integer() {
        return Err(inadmissible("Riemann-Hurwitz gives a non-integral genus"));
    }
    let two_g = euler.to_integer() + 2;
    if two_g < 0 || two_g % 2 != 0 {
        return Err(inadmissible(
            "Riemann-Hurwitz gives a negative or half-integral genus",
        ));
    }
    Ok((two_g / 2) as u64)
}

/// Images of the canonical generators of a Fuchsian group with orientable
/// signature `(γ'; m_1, ..., m_r)` under a surjection onto `G_n` with
/// torsion-free kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratingVector {
    #[serde(skip)]
    group: DicyclicGroup,
    hyperbolic: Vec<GroupElement>,
    cones: Vec<GroupElement>,
}

impl GeneratingVector {
    /// Validates the long relation `Π [a_i, b_i] Π c_j = 1`, non-trivial cone
    /// images and generation. Declared cone orders are the element orders.
    pub fn new(
        group: DicyclicGroup,
        hyperbolic: Vec<GroupElement>,
        cones: Vec<GroupElement>,
    ) -> Result<Self> {
        if !hyperbolic.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(
                "hyperbolic images come in pairs (a_i, b_i)".into(),
            ));
        }
        if let Some(e) = hyperbolic.iter().chain(&cones).find(|e| !group.contains(e)) {
            return Err(Error::ParameterMismatch {
                left: group.n(),
                right: e.n(),
            });
        }
        if cones.iter().any(|c| c.is_identity()) {
            return Err(Error::InvalidParameter(
                "cone images must be non-trivial".into(),
            ));
        }
        let v = GeneratingVector {
            group,
            hyperbolic,
            cones,
        };
        if !long_relation(&group, &v.hyperbolic, &v.cones).is_identity() {
            return Err(Error::InvalidParameter("long relation fails".into()));
        }
        let all: Vec<GroupElement> = v.hyperbolic.iter().chain(&v.cones).copied().collect();
        if !group.generates(&all) {
            return Err(Error::InvalidParameter("images do not generate G_n".into()));
        }
        Ok(v)
    }

    /// Same as [`GeneratingVector::new`] with explicitly declared cone orders,
    /// which must match the element orders exactly.
    pub fn with_declared_orders(
        group: DicyclicGroup,
        hyperbolic: Vec<GroupElement>,
        cones: Vec<GroupElement>,
        orders: &[u32],
    ) -> Result<Self> {
        if orders.len() != cones.len() || cones.iter().zip(orders).any(|(c, &m)| c.order() != m) {
            return Err(Error::InvalidParameter(
                "cone images must have exactly the declared orders".into(),
            ));
        }
        GeneratingVector::new(group, hyperbolic, cones)
    }

    pub fn group(&self) -> DicyclicGroup {
        self.group
    }

    pub fn hyperbolic(&self) -> &[GroupElement] {
        &self.hyperbolic
    }

    pub fn cones(&self) -> &[GroupElement] {
        &self.cones
    }

    pub fn base_genus(&self) -> u32 {
        (self.hyperbolic.len() / 2) as u32
    }

    pub fn signature(&self) -> OrbifoldSignature {
        OrbifoldSignature::new(
            self.base_genus(),
            self.cones.iter().map(|c| c.order()).collect(),
        )
    }

    /// Genus of the covering surface.
    pub fn genus(&self) -> u64 {
        rh_genus(self.group.order() as u64, &self.signature())
            .expect("a valid generating vector always has integral genus")
    }
}

/// `Π [a_i, b_i] · Π c_j` with `[a, b] = a b a^{-1} b^{-1}`.
pub fn long_relation(
    group: &DicyclicGroup,
    hyperbolic: &[GroupElement],
    cones: &[GroupElement],
) -> GroupElement {
    let mut acc = group.identity();
    for pair in hyperbolic.chunks(2) {
        let (a, b) = (pair[0], pair[1]);
        acc = acc * a * b * a.inverse() * b.inverse();
    }
    for c in cones {
        acc = acc * *c;
    }
    acc
}

/// A triangular action: a generating pair `(c1, c2)` with `c3 = (c1 c2)^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangularAction {
    vector: GeneratingVector,
}

/// The two kinds of triangular action of `G_n`, by unordered signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ActionCase {
    /// `(0; 4, 4, 2n)`, genus `n`.
    I,
    /// `(0; 4, 4, n)`, genus `n - 1`, `n` odd.
    II,
}

impl fmt::Display for ActionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionCase::I => write!(f, "I"),
            ActionCase::II => write!(f, "II"),
        }
    }
}

impl TriangularAction {
    pub fn new(group: DicyclicGroup, c1: GroupElement, c2: GroupElement) -> Result<Self> {
        let c3 = (c1 * c2).inverse();
        let vector = GeneratingVector::new(group, vec![], vec![c1, c2, c3])?;
        Ok(TriangularAction { vector })
    }

    /// `(y, x^{n-1} y, x^{-1})`, signature `(0; 4, 4, 2n)`.
    pub fn case_one(group: DicyclicGroup) -> Self {
        let n = group.n() as i64;
        TriangularAction::new(group, group.y(), group.element(n - 1, 1))
            .expect("case I generators always generate")
    }

    /// `(y, x^{n-2} y, x^{-2})`, signature `(0; 4, 4, n)`; needs `n` odd.
    pub fn case_two(group: DicyclicGroup) -> Result<Self> {
        let n = group.n() as i64;
        if n % 2 == 0 {
            return Err(Error::Domain(format!(
                "the (0; 4, 4, n) action needs n odd, got n = {n}"
            )));
        }
        TriangularAction::new(group, group.y(), group.element(n - 2, 1))
    }

    pub fn of_case(group: DicyclicGroup, case: ActionCase) -> Result<Self> {
        match case {
            ActionCase::I => Ok(TriangularAction::case_one(group)),
            ActionCase::II => TriangularAction::case_two(group),
        }
    }

    pub fn group(&self) -> DicyclicGroup {
        self.vector.group
    }

    pub fn cones(&self) -> [GroupElement; 3] {
        let c = &self.vector.cones;
        [c[0], c[1], c[2]]
    }

    pub fn vector(&self) -> &GeneratingVector {
        &self.vector
    }

    pub fn ordered_type(&self) -> [u32; 3] {
        self.cones().map(|c| c.order())
    }

    pub fn signature(&self) -> OrbifoldSignature {
        self.vector.signature()
    }

    pub fn genus(&self) -> u64 {
        self.vector.genus()
    }

    /// Which of the two unordered signature types the action has, if any.
    pub fn case(&self) -> Option<ActionCase> {
        let n = self.group().n();
        let mut t = self.ordered_type();
        t.sort_unstable();
        if t == [4, 4, 2 * n] || (n == 2 && t == [4, 4, 4]) {
            Some(ActionCase::I)
        } else if t == [n, 4, 4] || t == [4, 4, n] {
            Some(ActionCase::II)
        } else {
            None
        }
    }
}

/// Number of fixed points of `g` on the covering surface:
/// `Σ_j #{ h<c_j> in G/<c_j> : h^{-1} g h ∈ <c_j> }`.
pub fn fixed_point_count(v: &GeneratingVector, g: &GroupElement) -> Result<u64> {
    let group = v.group;
    if !group.contains(g) {
        return Err(Error::ParameterMismatch {
            left: group.n(),
            right: g.n(),
        });
    }
    if g.is_identity() {
        return Err(Error::Domain(
            "the identity fixes every point of the surface".into(),
        ));
    }
    let mut total = 0u64;
    for c in &v.cones {
        let stab = group.subgroup_generated(&[*c]);
        let hits = group
            .elements()
            .filter(|h| stab.contains(&g.conjugate_by(&h.inverse())))
            .count();
        // The condition is constant on cosets h<c>, each of size |<c>|.
        total += (hits / stab.order()) as u64;
    }
    Ok(total)
}

/// Non-trivial elements acting freely, in index order.
pub fn free_elements(v: &GeneratingVector) -> Vec<GroupElement> {
    v.group
        .elements()
        .filter(|g| !g.is_identity())
        .filter(|g| fixed_point_count(v, g).unwrap() == 0)
        .collect()
}

/// Whether every non-trivial element has a fixed point, with the freely
/// acting elements as witnesses otherwise.
pub fn is_purely_non_free(v: &GeneratingVector) -> (bool, Vec<GroupElement>) {
    let free = free_elements(v);
    (free.is_empty(), free)
}

// Cycle lengths of each cone image acting on the left cosets G/H.
fn coset_cycles(v: &GeneratingVector, h: &Subgroup) -> Result<Vec<Vec<usize>>> {
    let group = v.group;
    if h.group() != group {
        return Err(Error::ParameterMismatch {
            left: group.n(),
            right: h.group().n(),
        });
    }
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut count = 0;
    for g in group.elements() {
        if coset_of[g.index()] != usize::MAX {
            continue;
        }
        for k in h.members() {
            coset_of[(g * *k).index()] = count;
        }
        count += 1;
    }
    let reps: Vec<GroupElement> = {
        let mut reps = vec![group.identity(); count];
        for g in group.elements().rev() {
            reps[coset_of[g.index()]] = g;
        }
        reps
    };
    let mut out = Vec::with_capacity(v.cones.len());
    for c in &v.cones {
        let image: Vec<usize> = reps.iter().map(|r| coset_of[(*c * *r).index()]).collect();
        let mut seen = vec![false; count];
        let mut lengths = Vec::new();
        for start in 0..count {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = image[p];
                len += 1;
            }
            lengths.push(len);
        }
        out.push(lengths);
    }
    Ok(out)
}

/// Genus of `S/H`, from the branching of `S/H -> S/G` read off the action of
/// each cone image on `G/H`.
pub fn quotient_genus(v: &GeneratingVector, h: &Subgroup) -> Result<u64> {
    let cycles = coset_cycles(v, h)?;
    let degree = h.index() as i64;
    let branching: i64 = cycles
        .iter()
        .flat_map(|c| c.iter().map(|&l| l as i64 - 1))
        .sum();
    let euler = degree * (2 * v.base_genus() as i64 - 2) + branching;
    if euler < -2 || euler % 2 != 0 {
        return Err(Error::InvariantViolation(format!(
            "quotient by {} has Euler characteristic {}",
            h.label(),
            -euler
        )));
    }
    Ok(((euler + 2) / 2) as u64)
}

/// Signature of `S/H`: a cycle of length `L` of a cone image of order `m`
/// gives a cone point of order `m / L` whenever that exceeds 1.
pub fn quotient_signature(v: &GeneratingVector, h: &Subgroup) -> Result<OrbifoldSignature> {
    let genus = quotient_genus(v, h)?;
    let cycles = coset_cycles(v, h)?;
    let mut orders = Vec::new();
    for (c, lengths) in v.cones.iter().zip(&cycles) {
        let m = c.order() as usize;
        for &l in lengths {
            if m / l > 1 {
                orders.push((m / l) as u32);
            }
        }
    }
    orders.sort_unstable_by(|a, b| b.cmp(a));
    Ok(OrbifoldSignature::new(genus as u32, orders))
}

/// One orbit of generating pairs under `Aut(G_n)`.
#[derive(Clone, Debug, Serialize)]
pub struct AutomorphismOrbit {
    pub representative: TriangularAction,
    pub size: usize,
    pub stabilizer_order: usize,
}

/// Generating pairs sharing an ordered signature `(m1, m2, m3)`.
#[derive(Clone, Debug, Serialize)]
pub struct OrderedTypeEntry {
    pub ordered_type: [u32; 3],
    pub pair_count: usize,
    pub conjugacy_orbit_count: usize,
    pub automorphism_orbits: Vec<AutomorphismOrbit>,
}

/// Generating pairs sharing an unordered signature `{m1, m2, m3}`.
#[derive(Clone, Debug, Serialize)]
pub struct UnorderedTypeEntry {
    pub orders: [u32; 3],
    pub case: Option<ActionCase>,
    pub ordered_types: Vec<[u32; 3]>,
    pub pair_count: usize,
    pub conjugacy_orbit_count: usize,
    pub automorphism_orbit_count: usize,
    /// Orbits under automorphisms together with cyclic relabelling
    /// `(c1, c2, c3) -> (c2, c3, c1)` of the cone points.
    pub orbits_up_to_rotation: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionCensus {
    pub n: u32,
    pub automorphism_group_order: usize,
    pub generating_pairs: usize,
    pub by_ordered_type: Vec<OrderedTypeEntry>,
    pub by_unordered_type: Vec<UnorderedTypeEntry>,
}

impl ActionCensus {
    pub fn unordered_types(&self) -> Vec<[u32; 3]> {
        self.by_unordered_type.iter().map(|e| e.orders).collect()
    }

    pub fn ordered(&self, t: [u32; 3]) -> Option<&OrderedTypeEntry> {
        self.by_ordered_type.iter().find(|e| e.ordered_type == t)
    }
}

// Orbits of a group of `actions` elements acting on `items` through `act`.
// Each orbit is sorted; orbits come out ordered by least member when `items`
// is sorted.
fn orbits<T: Copy + Ord, F>(items: &[T], actions: usize, act: F) -> Vec<Vec<T>>
where
    F: Fn(usize, T) -> T,
{
    let pos: BTreeMap<T, usize> = items.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let mut seen = vec![false; items.len()];
    let mut out = Vec::new();
    for (i, &t) in items.iter().enumerate() {
        if seen[i] {
            continue;
        }
        let mut orbit = Vec::new();
        for k in 0..actions {
            let s = act(k, t);
            let j = pos[&s];
            if !seen[j] {
                seen[j] = true;
                orbit.push(s);
            }
        }
        orbit.sort();
        out.push(orbit);
    }
    out
}

/// Every ordered generating pair of `G_n`, grouped by signature, with orbit
/// counts under simultaneous conjugation and under `Aut(G_n)`.
pub fn triangular_census(n: u32) -> Result<ActionCensus> {
    let group = DicyclicGroup::new(n)?;
    let elems: Vec<GroupElement> = group.elements().collect();
    let auts: Vec<GroupAutomorphism> = group.automorphism_group();

    let mut pairs: Vec<(GroupElement, GroupElement)> = Vec::new();
    for &a in &elems {
        for &b in &elems {
            if group.generates(&[a, b]) {
                pairs.push((a, b));
            }
        }
    }
    let ordered_type = |p: &(GroupElement, GroupElement)| -> [u32; 3] {
        [p.0.order(), p.1.order(), (p.0 * p.1).inverse().order()]
    };

    let mut by_type: BTreeMap<[u32; 3], Vec<(GroupElement, GroupElement)>> = BTreeMap::new();
    for p in &pairs {
        let t = ordered_type(p);
        if t.iter().any(|&m| m < 2) {
            return Err(Error::InvariantViolation(format!(
                "generating pair ({}, {}) has a trivial cone image",
                p.0, p.1
            )));
        }
        by_type.entry(t).or_default().push(*p);
    }

    let mut by_ordered_type = Vec::new();
    for (t, members) in &by_type {
        let conj = orbits(members, elems.len(), |k, (a, b)| {
            (a.conjugate_by(&elems[k]), b.conjugate_by(&elems[k]))
        });
        let aut_orbits = orbits(members, auts.len(), |k, (a, b)| {
            (auts[k].apply(&a), auts[k].apply(&b))
        });
        let automorphism_orbits = aut_orbits
            .iter()
            .map(|o| AutomorphismOrbit {
                representative: TriangularAction::new(group, o[0].0, o[0].1)
                    .expect("census pairs generate"),
                size: o.len(),
                stabilizer_order: auts.len() / o.len(),
            })
            .collect();
        by_ordered_type.push(OrderedTypeEntry {
            ordered_type: *t,
            pair_count: members.len(),
            conjugacy_orbit_count: conj.len(),
            automorphism_orbits,
        });
    }

    let mut unordered: BTreeMap<[u32; 3], Vec<&OrderedTypeEntry>> = BTreeMap::new();
    for e in &by_ordered_type {
        let mut key = e.ordered_type;
        key.sort_unstable();
        unordered.entry(key).or_default().push(e);
    }
    let mut by_unordered_type = Vec::new();
    for (key, entries) in unordered {
        // Pairs of this type, closed under rotation c -> (c2, c3, c1).
        let members: Vec<(GroupElement, GroupElement)> = by_type
            .iter()
            .filter(|(t, _)| {
                let mut s = **t;
                s.sort_unstable();
                s == key
            })
            .flat_map(|(_, v)| v.iter().copied())
            .collect();
        let mut members_sorted = members.clone();
        members_sorted.sort();
        let rotate = |(a, b): (GroupElement, GroupElement)| (b, (a * b).inverse());
        let rot_orbits = orbits(&members_sorted, 3 * auts.len(), |k, p| {
            let mut q = (
                auts[k % auts.len()].apply(&p.0),
                auts[k % auts.len()].apply(&p.1),
            );
            for _ in 0..k / auts.len() {
                q = rotate(q);
            }
            q
        });
        let case = entries[0].automorphism_orbits[0].representative.case();
        by_unordered_type.push(UnorderedTypeEntry {
            orders: key,
            case,
            ordered_types: entries.iter().map(|e| e.ordered_type).collect(),
            pair_count: entries.iter().map(|e| e.pair_count).sum(),
            conjugacy_orbit_count: entries.iter().map(|e| e.conjugacy_orbit_count).sum(),
            automorphism_orbit_count: entries.iter().map(|e| e.automorphism_orbits.len()).sum(),
            orbits_up_to_rotation: rot_orbits.len(),
        });
    }

    Ok(ActionCensus {
        n,
        automorphism_group_order: auts.len(),
        generating_pairs: pairs.len(),
        by_ordered_type,
        by_unordered_type,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: u32) -> DicyclicGroup {
        DicyclicGroup::new(n).unwrap()
    }

    #[test]
    fn riemann_hurwitz_examples() {
        for n in 2..=12u64 {
            let sig = OrbifoldSignature::new(0, vec![4, 4, 2 * n as u32]);
            assert_eq!(rh_genus(4 * n, &sig).unwrap(), n);
            let sig = OrbifoldSignature::new(0, vec![2, 4, 4 * n as u32]);
            assert_eq!(rh_genus(8 * n, &sig).unwrap(), n);
            if n % 2 == 1 {
                let sig = OrbifoldSignature::new(0, vec![4, 4, n as u32]);
                assert_eq!(rh_genus(4 * n, &sig).unwrap(), n - 1);
            }
        }
    }

    #[test]
    fn riemann_hurwitz_rejects_bad_signatures() {
        // 12 (-2 + 1/2 + 2/3 + 4/5) is not an integer
        let sig = OrbifoldSignature::new(0, vec![2, 3, 5]);
        assert!(matches!(
            rh_genus(12, &sig),
            Err(Error::InadmissibleSignature { .. })
        ));
        // negative genus
        let sig = OrbifoldSignature::new(0, vec![2, 2]);
        assert!(rh_genus(4, &sig).is_err());
        let sig = OrbifoldSignature::new(0, vec![1, 4]);
        assert!(rh_genus(4, &sig).is_err());
        // the trivial group over a torus
        assert_eq!(rh_genus(1, &OrbifoldSignature::new(1, vec![])).unwrap(), 1);
    }

    #[test]
    fn generating_vector_validation() {
        let gr = g(3);
        let (x, y) = (gr.x(), gr.y());
        // long relation fails
        assert!(GeneratingVector::new(gr, vec![], vec![x, y]).is_err());
        // does not generate
        assert!(GeneratingVector::new(gr, vec![], vec![x, x.inverse()]).is_err());
        // odd number of hyperbolic images
        assert!(GeneratingVector::new(gr, vec![x], vec![]).is_err());
        // declared orders must match
        let c = vec![y, x * y, x.pow(-2)];
        assert!(GeneratingVector::with_declared_orders(gr, vec![], c.clone(), &[4, 4, 3]).is_ok());
        assert!(GeneratingVector::with_declared_orders(gr, vec![], c, &[4, 4, 6]).is_err());
    }

    #[test]
    fn canonical_actions() {
        for n in 2..=10 {
            let a = TriangularAction::case_one(g(n));
            assert_eq!(a.case(), Some(ActionCase::I));
            assert_eq!(a.genus(), n as u64);
            if n % 2 == 1 && n >= 3 {
                let b = TriangularAction::case_two(g(n)).unwrap();
                assert_eq!(b.case(), Some(ActionCase::II));
                assert_eq!(b.genus(), n as u64 - 1);
            } else {
                assert!(TriangularAction::case_two(g(n)).is_err());
            }
        }
    }

    #[test]
    fn fixed_points_case_one() {
        for n in 2..=10 {
            let gr = g(n);
            let a = TriangularAction::case_one(gr);
            let v = a.vector();
            let ni = n as i64;
            assert_eq!(fixed_point_count(v, &gr.x()).unwrap(), 2);
            assert_eq!(
                fixed_point_count(v, &gr.element(ni, 0)).unwrap(),
                2 + 2 * n as u64
            );
            assert_eq!(fixed_point_count(v, &gr.y()).unwrap(), 2);
            assert_eq!(fixed_point_count(v, &(gr.x() * gr.y())).unwrap(), 2);
            assert_eq!(is_purely_non_free(v), (true, vec![]));
            assert!(fixed_point_count(v, &gr.identity()).is_err());
        }
    }

    #[test]
    fn free_elements_case_two() {
        let gr = g(3);
        let b = TriangularAction::case_two(gr).unwrap();
        assert_eq!(fixed_point_count(b.vector(), &gr.x()).unwrap(), 0);
        assert_eq!(free_elements(b.vector()), vec![gr.x(), gr.element(5, 0)]);
        let gr = g(5);
        let b = TriangularAction::case_two(gr).unwrap();
        let expected: Vec<_> = [1, 3, 7, 9].iter().map(|&a| gr.element(a, 0)).collect();
        assert_eq!(is_purely_non_free(b.vector()), (false, expected));
    }

    #[test]
    fn quotients() {
        for n in 2..=8 {
            let gr = g(n);
            let a = TriangularAction::case_one(gr);
            let v = a.vector();
            let full = gr.subgroup_generated(&[gr.x(), gr.y()]);
            let trivial = gr.subgroup_generated(&[]);
            assert_eq!(quotient_genus(v, &full).unwrap(), 0);
            assert_eq!(quotient_genus(v, &trivial).unwrap(), n as u64);
            let centre = gr.subgroup_generated(&[gr.element(n as i64, 0)]);
            assert_eq!(quotient_genus(v, &centre).unwrap(), 0);

            let mut expected = vec![4, 4];
            expected.extend(std::iter::repeat_n(2, n as usize));
            let sig = quotient_signature(v, &gr.subgroup_generated(&[gr.y()])).unwrap();
            assert_eq!(sig, OrbifoldSignature::new(0, expected));

            // Both points over ±1 carry order 2n: only the four-point
            // signature balances Riemann-Hurwitz for the order-2n quotient.
            let rot = gr.subgroup_generated(&[gr.x()]);
            let sig = quotient_signature(v, &rot).unwrap();
            assert_eq!(
                sig.sorted(),
                OrbifoldSignature::new(0, vec![2, 2, 2 * n, 2 * n])
            );
            assert_eq!(rh_genus(2 * n as u64, &sig).unwrap(), n as u64);
            assert!(rh_genus(2 * n as u64, &OrbifoldSignature::new(0, vec![2, 2, 2 * n])).is_err());
        }
        for n in [3, 5, 7] {
            let gr = g(n);
            let b = TriangularAction::case_two(gr).unwrap();
            let sig =
                quotient_signature(b.vector(), &gr.subgroup_generated(&[gr.y().pow(2)])).unwrap();
            assert_eq!(sig, OrbifoldSignature::new(0, vec![2; 2 * n as usize]));
        }
    }

    // Genus of S/H from fixed-point counts alone:
    // 2g - 2 = |H|(2h - 2) + sum over non-trivial h of |Fix(h)|.
    fn quotient_genus_from_fixed_points(v: &GeneratingVector, h: &Subgroup) -> u64 {
        let fixed: u64 = h
            .members()
            .iter()
            .filter(|e| !e.is_identity())
            .map(|e| fixed_point_count(v, e).unwrap())
            .sum();
        let d = h.order() as i64;
        let lhs = 2 * v.genus() as i64 - 2 - fixed as i64;
        assert_eq!(lhs % (2 * d), 0);
        (lhs / (2 * d) + 1) as u64
    }

    #[test]
    fn odd_order_subgroups_have_positive_genus_quotients() {
        for n in 2..=10u32 {
            let gr = g(n);
            let mut cases = vec![TriangularAction::case_one(gr)];
            if n % 2 == 1 {
                cases.push(TriangularAction::case_two(gr).unwrap());
            }
            for a in &cases {
                let shift = if a.case() == Some(ActionCase::II) {
                    1
                } else {
                    0
                };
                let mut all_zero = true;
                for h in gr.all_subgroups().iter().filter(|h| !h.is_trivial()) {
                    let qg = quotient_genus(a.vector(), h).unwrap();
                    assert_eq!(qg, quotient_genus_from_fixed_points(a.vector(), h));
                    let d = h.order() as u32;
                    let want = if d.is_multiple_of(2) {
                        0
                    } else {
                        (n / d) as u64 - shift
                    };
                    assert_eq!(qg, want, "n = {n}, H = {}", h.label());
                    all_zero &= qg == 0;
                }
                if a.case() == Some(ActionCase::I) {
                    assert_eq!(all_zero, n.is_power_of_two(), "n = {n}");
                }
            }
        }
        // Smallest instance: n = 3, H = <x^2>, a torus with two cone points.
        let gr = g(3);
        let v = TriangularAction::case_one(gr);
        let h = gr.subgroup_generated(&[gr.x().pow(2)]);
        assert_eq!(
            quotient_signature(v.vector(), &h).unwrap(),
            OrbifoldSignature::new(1, vec![3, 3])
        );
    }

    #[test]
    fn census_small_cases() {
        let c = triangular_census(2).unwrap();
        assert_eq!(c.generating_pairs, 24);
        assert_eq!(c.automorphism_group_order, 24);
        assert_eq!(c.unordered_types(), vec![[4, 4, 4]]);
        let e = c.ordered([4, 4, 4]).unwrap();
        assert_eq!(e.automorphism_orbits.len(), 1);
        assert_eq!(e.conjugacy_orbit_count, 6);

        let c = triangular_census(3).unwrap();
        assert_eq!(c.unordered_types(), vec![[3, 4, 4], [4, 4, 6]]);
        for e in &c.by_ordered_type {
            assert_eq!(e.automorphism_orbits.len(), 1, "{:?}", e.ordered_type);
        }
        for u in &c.by_unordered_type {
            assert_eq!(u.orbits_up_to_rotation, 1);
        }

        let c = triangular_census(4).unwrap();
        assert_eq!(c.unordered_types(), vec![[4, 4, 8]]);
        assert_eq!(c.ordered([4, 4, 8]).unwrap().automorphism_orbits.len(), 1);
    }
}
