//! Least genera of conformal actions of `G_n`, found by walking signatures in
//! order of genus and searching each one exhaustively for a generating
//! vector.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::covering::{long_relation, GeneratingVector, OrbifoldSignature};
use crate::error::{Error, Result};
use crate::group::{DicyclicGroup, GroupElement};

/// A signature whose Riemann–Hurwitz genus for `G_n` is `target_genus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignatureCandidate {
    pub target_genus: u64,
    pub signature: OrbifoldSignature,
}

/// Element orders of `G_n` other than 1: the divisors of `2n` and 4.
pub fn element_orders(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (2..=2 * n).filter(|d| (2 * n).is_multiple_of(*d)).collect();
    if !out.contains(&4) {
        out.push(4);
        out.sort_unstable();
    }
    out
}

/// Every `(γ'; m_1, ..., m_r)` with non-decreasing orders from
/// [`element_orders`] and `2g - 2 = 4n (2γ' - 2 + Σ (1 - 1/m_j))`, sorted by
/// `γ'`, then `r`, then orders.
pub fn signature_candidates(n: u32, g: u64) -> Vec<SignatureCandidate> {
    let group_order = 4 * n as i64;
    let area = Ratio::new(2 * g as i64 - 2, group_order);
    // each cone point adds at least 1/2 and γ' adds 2 per handle
    let gamma_max = ((area + 2) / 2).floor().to_integer().max(0) as u32;
    let orders = element_orders(n);
    let mut out = Vec::new();
    for gamma in 0..=gamma_max {
        let budget = area - Ratio::from_integer(2 * gamma as i64 - 2);
        if budget < Ratio::from_integer(0) {
            continue;
        }
        let r_max = (budget * 2).floor().to_integer() as usize;
        let mut stack: Vec<(Vec<u32>, Ratio<i64>)> = vec![(vec![], Ratio::from_integer(0))];
        while let Some((ms, used)) = stack.pop() {
            if used == budget {
                out.push(SignatureCandidate {
                    target_genus: g,
                    signature: OrbifoldSignature::new(gamma, ms.clone()),
                });
            }
            if ms.len() == r_max {
                continue;
            }
            let floor = ms.last().copied().unwrap_or(0);
            for &m in orders.iter().filter(|&&m| m >= floor) {
                let next = used + Ratio::new(m as i64 - 1, m as i64);
                if next <= budget {
                    let mut e = ms.clone();
                    e.push(m);
                    stack.push((e, next));
                }
            }
        }
    }
    out.sort_by(|a, b| {
        let key = |c: &SignatureCandidate| {
            (
                c.signature.quotient_genus,
                c.signature.cone_orders.len(),
                c.signature.cone_orders.clone(),
            )
        };
        key(a).cmp(&key(b))
    });
    out
}

/// Visits every generating vector with the given signature, in lexicographic
/// order of its images.
fn walk(
    group: &DicyclicGroup,
    sig: &OrbifoldSignature,
    visit: &mut dyn FnMut(GeneratingVector) -> ControlFlow<()>,
) {
    let elements: Vec<GroupElement> = group.elements().collect();
    let h = 2 * sig.quotient_genus as usize;
    let r = sig.cone_orders.len();
    let free_cones = r.saturating_sub(1);
    let of_order = |m: u32| -> Vec<GroupElement> {
        elements
            .iter()
            .copied()
            .filter(|e| e.order() == m)
            .collect()
    };
    let mut slots: Vec<Vec<GroupElement>> = (0..h).map(|_| elements.clone()).collect();
    slots.extend(sig.cone_orders[..free_cones].iter().map(|&m| of_order(m)));
    if slots.iter().any(|s| s.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; slots.len()];
    loop {
        let picked: Vec<GroupElement> = idx.iter().zip(&slots).map(|(&i, s)| s[i]).collect();
        let (hyp, cones) = picked.split_at(h);
        let partial = long_relation(group, hyp, cones);
        let mut cones = cones.to_vec();
        let ok = if r == 0 {
            partial.is_identity()
        } else {
            let last = partial.inverse();
            cones.push(last);
            last.order() == sig.cone_orders[r - 1]
        };
        if ok {
            if let Ok(v) = GeneratingVector::with_declared_orders(
                *group,
                hyp.to_vec(),
                cones,
                &sig.cone_orders,
            ) {
                if visit(v).is_break() {
                    return;
                }
            }
        }
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < slots[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// First generating vector (in image order) realizing the signature.
pub fn exists_generating_vector(
    n: u32,
    sig: &OrbifoldSignature,
) -> Result<Option<GeneratingVector>> {
    let group = DicyclicGroup::new(n)?;
    let mut found = None;
    walk(&group, sig, &mut |v| {
        found = Some(v);
        ControlFlow::Break(())
    });
    Ok(found)
}

/// Elements of `G_n` conjugate into some `<c_j>`, i.e. with fixed points.
pub fn elements_with_fixed_points(v: &GeneratingVector) -> BTreeSet<GroupElement> {
    let group = v.group();
    let mut out = BTreeSet::new();
    for c in v.cones() {
        let cyclic: Vec<GroupElement> = (1..c.order() as i64).map(|k| c.pow(k)).collect();
        for h in group.elements() {
            out.extend(cyclic.iter().map(|e| e.conjugate_by(&h)));
        }
    }
    out
}

/// Every non-trivial element has a fixed point.
pub fn is_purely_non_free(v: &GeneratingVector) -> bool {
    elements_with_fixed_points(v).len() + 1 == v.group().order()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenusKind {
    Strong,
    Pure,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenusSearchResult {
    pub n: u32,
    pub kind: GenusKind,
    pub genus: u64,
    pub signature: OrbifoldSignature,
    pub witness: GeneratingVector,
    pub candidates_tested: usize,
}

fn search(n: u32, g_max: u64, kind: GenusKind) -> Result<GenusSearchResult> {
    let group = DicyclicGroup::new(n)?;
    let mut tested = 0;
    for g in 2..=g_max {
        for cand in signature_candidates(n, g) {
            tested += 1;
            let mut found = None;
            walk(&group, &cand.signature, &mut |v| {
                if kind == GenusKind::Strong || is_purely_non_free(&v) {
                    found = Some(v);
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            if let Some(witness) = found {
                return Ok(GenusSearchResult {
                    n,
                    kind,
                    genus: g,
                    signature: cand.signature,
                    witness,
                    candidates_tested: tested,
                });
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no {} action of G_{n} in genus 2..={g_max}",
        match kind {
            GenusKind::Strong => "conformal",
            GenusKind::Pure => "purely non-free conformal",
        }
    )))
}

/// Least genus `≥ 2` carrying a conformal action of `G_n`.
pub fn strong_symmetric_genus(n: u32, g_max: u64) -> Result<GenusSearchResult> {
    search(n, g_max, GenusKind::Strong)
}

/// Least genus `≥ 2` carrying a purely non-free conformal action of `G_n`.
pub fn pure_symmetric_genus(n: u32, g_max: u64) -> Result<GenusSearchResult> {
    search(n, g_max, GenusKind::Pure)
}

/// The orientable signatures of zero orbifold area.
pub fn euclidean_signatures() -> Vec<OrbifoldSignature> {
    vec![
        OrbifoldSignature::new(0, vec![2, 2, 2, 2]),
        OrbifoldSignature::new(0, vec![3, 3, 3]),
        OrbifoldSignature::new(0, vec![2, 4, 4]),
        OrbifoldSignature::new(0, vec![2, 3, 6]),
        OrbifoldSignature::new(1, vec![]),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct LowGenusExclusion {
    pub n: u32,
    /// Euclidean signatures realized by some generating vector (expected empty).
    pub torus_realized: Vec<OrbifoldSignature>,
    /// Genus-zero candidates realized by some generating vector (expected empty).
    pub sphere_realized: Vec<OrbifoldSignature>,
    pub excluded: bool,
}

/// Checks by search that `G_n` acts on neither the sphere nor the torus.
pub fn low_genus_exclusion(n: u32) -> Result<LowGenusExclusion> {
    let mut torus_realized = Vec::new();
    for sig in euclidean_signatures() {
        if exists_generating_vector(n, &sig)?.is_some() {
            torus_realized.push(sig);
        }
    }
    let mut sphere_realized = Vec::new();
    for cand in signature_candidates(n, 0) {
        if exists_generating_vector(n, &cand.signature)?.is_some() {
            sphere_realized.push(cand.signature);
        }
    }
    let excluded = torus_realized.is_empty() && sphere_realized.is_empty();
    Ok(LowGenusExclusion {
        n,
        torus_realized,
        sphere_realized,
        excluded,
    })
}

/// `n` when even, `n - 1` when odd.
pub fn expected_strong_genus(n: u32) -> u64 {
    if n.is_even() {
        n as u64
    } else {
        n as u64 - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{is_purely_non_free as pnf_by_fixed_points, rh_genus};

    #[test]
    fn candidates_satisfy_riemann_hurwitz() {
        for n in 2..=6 {
            for g in 0..=8 {
                for c in signature_candidates(n, g) {
                    assert_eq!(rh_genus(4 * n as u64, &c.signature).unwrap(), g);
                }
            }
        }
        let has = |n, g, q, orders: Vec<u32>| {
            signature_candidates(n, g)
                .iter()
                .any(|c| c.signature == OrbifoldSignature::new(q, orders.clone()))
        };
        assert!(has(2, 2, 0, vec![4, 4, 4]));
        assert!(has(3, 2, 0, vec![3, 4, 4]));
        // (0; 2, 4, 8) has the right area for genus 2 but x^4 is the only
        // involution, so nothing realizes it
        assert!(has(4, 2, 0, vec![2, 4, 8]));
        assert!(
            exists_generating_vector(4, &OrbifoldSignature::new(0, vec![2, 4, 8]))
                .unwrap()
                .is_none()
        );
    }

    fn multisets(orders: &[u32], max_len: usize) -> Vec<Vec<u32>> {
        if max_len == 0 || orders.is_empty() {
            return vec![vec![]];
        }
        // either skip the smallest order entirely, or use it at least once
        let mut out = multisets(&orders[1..], max_len);
        for mut rest in multisets(orders, max_len - 1) {
            rest.insert(0, orders[0]);
            out.push(rest);
        }
        out
    }

    #[test]
    fn candidates_match_brute_force() {
        // Oracle: every multiset of at most 8 orders with γ' ≤ 2, filtered by RH.
        for n in 2..=4u32 {
            let all = multisets(&element_orders(n), 8);
            for g in 2..=6u64 {
                let mut brute = BTreeSet::new();
                for gamma in 0..=2 {
                    for ms in &all {
                        let sig = OrbifoldSignature::new(gamma, ms.clone());
                        if rh_genus(4 * n as u64, &sig) == Ok(g) {
                            brute.insert(sig);
                        }
                    }
                }
                let ours: BTreeSet<_> = signature_candidates(n, g)
                    .into_iter()
                    .map(|c| c.signature)
                    .collect();
                assert_eq!(ours, brute, "n = {n}, g = {g}");
            }
        }
    }

    #[test]
    fn generating_vector_existence() {
        assert!(
            exists_generating_vector(2, &OrbifoldSignature::new(0, vec![4, 4, 4]))
                .unwrap()
                .is_some()
        );
        assert!(
            exists_generating_vector(2, &OrbifoldSignature::new(0, vec![2, 2, 2]))
                .unwrap()
                .is_none()
        );
        assert!(
            exists_generating_vector(3, &OrbifoldSignature::new(0, vec![4, 4, 6]))
                .unwrap()
                .is_some()
        );
    }

    #[test]
    fn strong_and_pure_genus() {
        for n in 2..=5 {
            let s = strong_symmetric_genus(n, 12).unwrap();
            let p = pure_symmetric_genus(n, 12).unwrap();
            assert_eq!(s.genus, expected_strong_genus(n), "n = {n}");
            assert_eq!(p.genus, n as u64, "n = {n}");
            assert!(p.genus >= s.genus);
            for w in [&s.witness, &p.witness] {
                let again = GeneratingVector::with_declared_orders(
                    w.group(),
                    w.hyperbolic().to_vec(),
                    w.cones().to_vec(),
                    &w.signature().cone_orders,
                )
                .unwrap();
                assert_eq!(again.genus(), w.genus());
                assert_eq!(is_purely_non_free(w), pnf_by_fixed_points(w).0);
            }
            assert!(is_purely_non_free(&p.witness));
        }
        assert!(matches!(
            pure_symmetric_genus(2, 1),
            Err(Error::SearchExhausted(_))
        ));
    }

    #[test]
    fn fixed_point_oracle_agrees_on_all_triangular_vectors() {
        for n in 2..=6 {
            for cand in signature_candidates(n, n as u64)
                .into_iter()
                .chain(signature_candidates(n, n as u64 - 1))
            {
                let group = DicyclicGroup::new(n).unwrap();
                walk(&group, &cand.signature, &mut |v| {
                    assert_eq!(is_purely_non_free(&v), pnf_by_fixed_points(&v).0);
                    ControlFlow::Continue(())
                });
            }
        }
    }

    #[test]
    fn no_actions_on_sphere_or_torus() {
        for n in 2..=9 {
            let r = low_genus_exclusion(n).unwrap();
            assert!(r.excluded, "n = {n}: {r:?}");
        }
    }
}
