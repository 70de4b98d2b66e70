//! Actions of `G_n` containing anticonformal elements, encoded by a
//! non-orientable NEC signature (no reflections) together with images of the
//! canonical generators: glide reflections `α_1, ..., α_{γ+1}` and elliptic
//! generators `β_1, ..., β_r` with `α_1^2 ⋯ α_{γ+1}^2 β_1 ⋯ β_r = 1`.

use std::fmt;
use std::ops::ControlFlow;

use num_rational::Ratio;
use serde::Serialize;

use crate::covering::{rh_genus, OrbifoldSignature};
use crate::error::{Error, Result};
use crate::group::{DicyclicGroup, GroupAutomorphism, GroupElement, Subgroup};

/// A quotient that is a connected sum of `γ + 1` projective planes with `r`
/// cone points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NECSignature {
    pub gamma: u32,
    pub cone_orders: Vec<u32>,
}

impl NECSignature {
    pub fn new(gamma: u32, cone_orders: Vec<u32>) -> Self {
        NECSignature { gamma, cone_orders }
    }

    pub fn crosscaps(&self) -> usize {
        self.gamma as usize + 1
    }

    /// Signature of the orientable double cover: every cone order doubled.
    pub fn orientable_double(&self) -> OrbifoldSignature {
        let orders = self.cone_orders.iter().flat_map(|&m| [m, m]).collect();
        OrbifoldSignature::new(self.gamma, orders)
    }
}

impl fmt::Display for NECSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders: Vec<String> = self.cone_orders.iter().map(|m| m.to_string()).collect();
        if orders.is_empty() {
            write!(f, "({}; -)", self.gamma)
        } else {
            write!(f, "({}; {})", self.gamma, orders.join(", "))
        }
    }
}

/// `g = 1 + 2n (γ + r - 1 - Σ 1/m_j)`.
pub fn nec_genus(n: u32, sig: &NECSignature) -> Result<u64> {
    let inadmissible = |reason: &str| Error::InadmissibleSignature {
        signature: sig.to_string(),
        reason: reason.to_string(),
    };
    if sig.cone_orders.iter().any(|&m| m < 2) {
        return Err(inadmissible("cone orders must be at least 2"));
    }
    let mut t = Ratio::from_integer(sig.gamma as i64 + sig.cone_orders.len() as i64 - 1);
    for &m in &sig.cone_orders {
        t -= Ratio::new(1, m as i64);
    }
    let g = Ratio::from_integer(1) + t * Ratio::from_integer(2 * n as i64);
    if !g.is_integer() {
        return Err(inadmissible("non-integral genus"));
    }
    if g.to_integer() < 0 {
        return Err(inadmissible("negative genus"));
    }
    Ok(g.to_integer() as u64)
}

/// A surjection from the NEC group onto `G_n` with torsion-free kernel whose
/// orientation-preserving half maps onto `plus_part`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NECActionData {
    #[serde(skip)]
    group: DicyclicGroup,
    plus_part: Subgroup,
    sig: NECSignature,
    alpha_images: Vec<GroupElement>,
    beta_images: Vec<GroupElement>,
}

impl NECActionData {
    pub fn new(
        group: DicyclicGroup,
        plus_part: Subgroup,
        sig: NECSignature,
        alpha_images: Vec<GroupElement>,
        beta_images: Vec<GroupElement>,
    ) -> Result<Self> {
        let bad = |why: &str| Err(Error::InvalidParameter(why.to_string()));
        if plus_part.group() != group || plus_part.index() != 2 {
            return bad("plus part must be an index-two subgroup of the group");
        }
        if alpha_images.len() != sig.crosscaps() || beta_images.len() != sig.cone_orders.len() {
            return bad("image counts do not match the signature");
        }
        if let Some(e) = alpha_images
            .iter()
            .chain(&beta_images)
            .find(|e| !group.contains(e))
        {
            return Err(Error::ParameterMismatch {
                left: group.n(),
                right: e.n(),
            });
        }
        if alpha_images.iter().any(|a| plus_part.contains(a)) {
            return bad("glide reflections must map outside the plus part");
        }
        if beta_images.iter().any(|b| !plus_part.contains(b)) {
            return bad("elliptic generators must map into the plus part");
        }
        if beta_images
            .iter()
            .zip(&sig.cone_orders)
            .any(|(b, &m)| b.order() != m)
        {
            return bad("elliptic images must have exactly the cone orders");
        }
        if !nec_relation(&group, &alpha_images, &beta_images).is_identity() {
            return bad("long relation fails");
        }
        let all: Vec<GroupElement> = alpha_images.iter().chain(&beta_images).copied().collect();
        if !group.generates(&all) {
            return bad("images do not generate the group");
        }
        let data = NECActionData {
            group,
            plus_part,
            sig,
            alpha_images,
            beta_images,
        };
        if data.orientation_preserving_image() != data.plus_part {
            return Err(Error::InvariantViolation(
                "orientation-preserving half does not map onto the plus part".into(),
            ));
        }
        Ok(data)
    }

    pub fn group(&self) -> DicyclicGroup {
        self.group
    }

    pub fn plus_part(&self) -> &Subgroup {
        &self.plus_part
    }

    pub fn signature(&self) -> &NECSignature {
        &self.sig
    }

    pub fn alpha_images(&self) -> &[GroupElement] {
        &self.alpha_images
    }

    pub fn beta_images(&self) -> &[GroupElement] {
        &self.beta_images
    }

    pub fn genus(&self) -> u64 {
        nec_genus(self.group.n(), &self.sig).expect("admissible data has integral genus")
    }

    /// Image of the orientation-preserving half, generated by the
    /// Reidemeister–Schreier generators for the transversal `{1, α_1}`:
    /// `β_j`, `α_i α_1^{-1}`, `α_1 β_j α_1^{-1}` and `α_1 α_i`.
    pub fn orientation_preserving_image(&self) -> Subgroup {
        let a1 = self.alpha_images[0];
        let mut gens = Vec::new();
        for &b in &self.beta_images {
            gens.push(b);
            gens.push(b.conjugate_by(&a1));
        }
        for &a in &self.alpha_images {
            gens.push(a * a1.inverse());
            gens.push(a1 * a);
        }
        self.group.subgroup_generated(&gens)
    }

    /// The same data pushed through an automorphism.
    pub fn transformed(&self, phi: &GroupAutomorphism) -> Result<NECActionData> {
        let gens: Vec<GroupElement> = self
            .plus_part
            .generators()
            .iter()
            .map(|g| phi.apply(g))
            .collect();
        NECActionData::new(
            self.group,
            self.group.subgroup_generated(&gens),
            self.sig.clone(),
            self.alpha_images.iter().map(|a| phi.apply(a)).collect(),
            self.beta_images.iter().map(|b| phi.apply(b)).collect(),
        )
    }

    #[cfg(test)]
    fn images_key(&self) -> (Vec<GroupElement>, Vec<GroupElement>) {
        (self.alpha_images.clone(), self.beta_images.clone())
    }
}

/// `α_1^2 ⋯ α_k^2 β_1 ⋯ β_r`.
pub fn nec_relation(
    group: &DicyclicGroup,
    alphas: &[GroupElement],
    betas: &[GroupElement],
) -> GroupElement {
    let mut acc = group.identity();
    for a in alphas {
        acc = acc * *a * *a;
    }
    for b in betas {
        acc = acc * *b;
    }
    acc
}

/// Walks every admissible image tuple in lexicographic order of
/// `(alphas, betas)`, the last elliptic image being forced by the relation.
fn walk(
    group: &DicyclicGroup,
    plus_part: &Subgroup,
    sig: &NECSignature,
    visit: &mut dyn FnMut(NECActionData) -> ControlFlow<()>,
) {
    if plus_part.index() != 2 {
        return;
    }
    let outside: Vec<GroupElement> = group
        .elements()
        .filter(|e| !plus_part.contains(e))
        .collect();
    let inside_of_order = |m: u32| -> Vec<GroupElement> {
        plus_part
            .members()
            .iter()
            .copied()
            .filter(|e| e.order() == m)
            .collect()
    };
    let choices: Vec<Vec<GroupElement>> = sig
        .cone_orders
        .iter()
        .map(|&m| inside_of_order(m))
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let k = sig.crosscaps();
    let r = sig.cone_orders.len();
    let mut alphas = vec![group.identity(); k];
    let mut betas = vec![group.identity(); r];

    // Odometer over alphas then all betas except the last.
    let free_beta = r.saturating_sub(1);
    let mut idx = vec![0usize; k + free_beta];
    let radix: Vec<usize> = (0..k)
        .map(|_| outside.len())
        .chain((0..free_beta).map(|j| choices[j].len()))
        .collect();
    loop {
        for i in 0..k {
            alphas[i] = outside[idx[i]];
        }
        for j in 0..free_beta {
            betas[j] = choices[j][idx[k + j]];
        }
        let partial = nec_relation(group, &alphas, &betas[..free_beta]);
        let ok = if r == 0 {
            partial.is_identity()
        } else {
            let last = partial.inverse();
            betas[r - 1] = last;
            !last.is_identity()
                && last.order() == sig.cone_orders[r - 1]
                && plus_part.contains(&last)
        };
        if ok {
            if let Ok(d) = NECActionData::new(
                *group,
                plus_part.clone(),
                sig.clone(),
                alphas.clone(),
                betas.clone(),
            ) {
                if visit(d).is_break() {
                    return;
                }
            }
        }
        // advance
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < radix[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Every admissible image tuple for the given plus part and signature.
pub fn admissible_homomorphisms(
    n: u32,
    plus_part: &Subgroup,
    sig: &NECSignature,
) -> Result<Vec<NECActionData>> {
    let group = DicyclicGroup::new(n)?;
    if plus_part.group() != group {
        return Err(Error::ParameterMismatch {
            left: n,
            right: plus_part.group().n(),
        });
    }
    let mut out = Vec::new();
    walk(&group, plus_part, sig, &mut |d| {
        out.push(d);
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// The lexicographically least admissible tuple, if any.
pub fn first_admissible(
    group: &DicyclicGroup,
    plus_part: &Subgroup,
    sig: &NECSignature,
) -> Option<NECActionData> {
    let mut found = None;
    walk(group, plus_part, sig, &mut |d| {
        found = Some(d);
        ControlFlow::Break(())
    });
    found
}

/// Orders available to elliptic generators: divisors of `2n` that are at
/// least 2, together with 4.
pub fn candidate_cone_orders(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (2..=2 * n).filter(|d| (2 * n).is_multiple_of(*d)).collect();
    if !out.contains(&4) {
        out.push(4);
        out.sort_unstable();
    }
    out
}

/// All NEC signatures with `γ ≤ gamma_max`, `r ≤ r_max`, non-decreasing cone
/// orders from [`candidate_cone_orders`] and integral genus at least 2.
pub fn nec_search_space(n: u32, gamma_max: u32, r_max: usize) -> Vec<(NECSignature, u64)> {
    let orders = candidate_cone_orders(n);
    let mut multisets: Vec<Vec<u32>> = vec![vec![]];
    let mut frontier: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..r_max {
        let mut next = Vec::new();
        for ms in &frontier {
            let floor = ms.last().copied().unwrap_or(0);
            for &m in orders.iter().filter(|&&m| m >= floor) {
                let mut e = ms.clone();
                e.push(m);
                next.push(e);
            }
        }
        multisets.extend(next.iter().cloned());
        frontier = next;
    }
    let mut out = Vec::new();
    for gamma in 0..=gamma_max {
        for ms in &multisets {
            let sig = NECSignature::new(gamma, ms.clone());
            if let Ok(g) = nec_genus(n, &sig) {
                if g >= 2 {
                    out.push((sig, g));
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Stops at the first genus level that is realized.
    Pruned,
    /// Tests every signature within bounds before taking the minimum.
    Exhaustive,
}

/// A `(plus part, signature)` pair realized at the minimal genus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimizingShape {
    pub plus_part: Subgroup,
    pub signature: NECSignature,
}

#[derive(Clone, Debug, Serialize)]
pub struct HyperbolicGenusResult {
    pub n: u32,
    pub genus: u64,
    pub witness: NECActionData,
    pub minimizing_shapes: Vec<MinimizingShape>,
    pub signatures_tested: usize,
    pub gamma_max: u32,
    pub r_max: usize,
    /// Quotients with boundary are outside the search space.
    pub reflections_excluded: bool,
}

/// Least genus `≥ 2` of a surface on which `G_n` acts with anticonformal
/// elements, over all index-two plus parts and NEC signatures within bounds.
pub fn sigma_hyp(n: u32, gamma_max: u32, r_max: usize) -> Result<HyperbolicGenusResult> {
    sigma_hyp_with_mode(n, gamma_max, r_max, SearchMode::Pruned)
}

pub fn sigma_hyp_with_mode(
    n: u32,
    gamma_max: u32,
    r_max: usize,
    mode: SearchMode,
) -> Result<HyperbolicGenusResult> {
    let group = DicyclicGroup::new(n)?;
    let plus_parts = group.index_two_subgroups();
    let mut space = nec_search_space(n, gamma_max, r_max);
    // Genus first; ties resolved by the signature's natural order.
    space.sort_by(|(s, g), (t, h)| (g, s.cone_orders.len(), s).cmp(&(h, t.cone_orders.len(), t)));

    let mut best: Option<(u64, NECActionData)> = None;
    let mut shapes = Vec::new();
    let mut tested = 0;
    for (sig, g) in &space {
        if mode == SearchMode::Pruned {
            if let Some((bg, _)) = &best {
                if g > bg {
                    break;
                }
            }
        }
        for h in &plus_parts {
            tested += 1;
            let Some(d) = first_admissible(&group, h, sig) else {
                continue;
            };
            match &best {
                Some((bg, _)) if g > bg => {}
                Some((bg, _)) if g == bg => shapes.push(MinimizingShape {
                    plus_part: h.clone(),
                    signature: sig.clone(),
                }),
                _ => {
                    shapes = vec![MinimizingShape {
                        plus_part: h.clone(),
                        signature: sig.clone(),
                    }];
                    best = Some((*g, d));
                }
            }
        }
    }
    let (genus, witness) = best.ok_or_else(|| {
        Error::SearchExhausted(format!(
            "no admissible NEC datum for n = {n} with gamma <= {gamma_max}, r <= {r_max}"
        ))
    })?;
    Ok(HyperbolicGenusResult {
        n,
        genus,
        witness,
        minimizing_shapes: shapes,
        signatures_tested: tested,
        gamma_max,
        r_max,
        reflections_excluded: true,
    })
}

/// The automorphism `x ↦ x, y ↦ xy`.
pub fn rho(group: &DicyclicGroup) -> GroupAutomorphism {
    GroupAutomorphism {
        image_of_x: group.x(),
        image_of_y: group.x() * group.y(),
    }
}

/// Checkable evidence that the constructed surface has no anticonformal
/// involution.
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    /// Order of every element outside `<x>`.
    pub anticonformal_orders: Vec<u32>,
    pub involution_outside_rotations: bool,
    /// Number of cone points of the quotient by `<x>`.
    pub rotation_quotient_cone_points: u64,
    pub rotation_quotient_signature: String,
    /// Accepted without verification.
    pub maximality_assumption: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PseudoRealCertificate {
    pub n: u32,
    pub q: u32,
    pub l: u64,
    pub action: NECActionData,
    pub genus: u64,
    pub genus_via_rotation_cover: u64,
    pub relation_holds: bool,
    pub obstruction_report: ObstructionReport,
}

/// The action with `α ↦ y` and every `β_j ↦ x` over a projective plane with
/// `l = n(2q - 1)` cone points of order `2n`.
pub fn build_pseudo_real(n: u32, q: u32) -> Result<PseudoRealCertificate> {
    let group = DicyclicGroup::new(n)?;
    if q < 2 {
        return Err(Error::InvalidParameter(format!(
            "q must be at least 2, got {q}"
        )));
    }
    let l = n as u64 * (2 * q as u64 - 1);
    let rotations = group.subgroup_generated(&[group.x()]);
    let sig = NECSignature::new(0, vec![2 * n; l as usize]);
    let alphas = vec![group.y()];
    let betas = vec![group.x(); l as usize];
    let relation_holds = nec_relation(&group, &alphas, &betas).is_identity();
    if !relation_holds {
        return Err(Error::InvariantViolation(
            "y^2 x^l is not the identity".into(),
        ));
    }
    let action = NECActionData::new(group, rotations.clone(), sig.clone(), alphas, betas)
        .map_err(|e| Error::InvariantViolation(e.to_string()))?;

    let genus = nec_genus(n, &sig)?;
    let rot_sig = OrbifoldSignature::new(0, vec![2 * n; 2 * l as usize]);
    let genus_via_rotation_cover = rh_genus(2 * n as u64, &rot_sig)?;
    let formula = (l - 1) * (2 * n as u64 - 1);
    if genus != genus_via_rotation_cover || genus != formula {
        return Err(Error::InvariantViolation(format!(
            "genus mismatch: NEC {genus}, rotation cover {genus_via_rotation_cover}, closed form {formula}"
        )));
    }
    let anticonformal_orders: Vec<u32> = group
        .elements()
        .filter(|e| !rotations.contains(e))
        .map(|e| e.order())
        .collect();
    let involution_outside_rotations = anticonformal_orders.contains(&2);
    if involution_outside_rotations {
        return Err(Error::InvariantViolation(
            "order-2 element outside <x>".into(),
        ));
    }
    Ok(PseudoRealCertificate {
        n,
        q,
        l,
        action,
        genus,
        genus_via_rotation_cover,
        relation_holds,
        obstruction_report: ObstructionReport {
            anticonformal_orders,
            involution_outside_rotations,
            rotation_quotient_cone_points: 2 * l,
            rotation_quotient_signature: format!("(0; {}^{})", 2 * n, 2 * l),
            maximality_assumption: format!(
                "Aut(S) = G_{n}: a sphere with {} cone points of order {} is not contained \
                 in any larger Fuchsian signature (Singerman's list of maximal signatures)",
                2 * l,
                2 * n
            ),
        },
    })
}
