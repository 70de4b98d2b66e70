//! One function per subcommand. Each returns a [`Report`] whose content
//! depends only on its parameters.

use std::path::Path;

use serde_json::{json, Value};

use dessins_core::cover_triples::{canonical_representatives, class_count, compare_readings};
use dessins_core::covering::{
    fixed_point_count, free_elements, is_purely_non_free, quotient_genus, quotient_signature,
    rh_genus, triangular_census, ActionCase, OrbifoldSignature, TriangularAction,
};
use dessins_core::curves::{
    sensitivity_control, verify_all, CurveModel, ModelName, PERTURBATION, SENSITIVITY_THRESHOLD,
};
use dessins_core::genus_search::{
    expected_strong_genus, low_genus_exclusion, pure_symmetric_genus, strong_symmetric_genus,
    GenusSearchResult,
};
use dessins_core::monodromy::{
    explicit_dessin, export_dot, graph_of, is_doubled_cycle, regular_dessin,
    verify_explicit_relations,
};
use dessins_core::real_forms::{
    admissible_homomorphisms, build_pseudo_real, sigma_hyp, NECActionData, NECSignature,
};
use dessins_core::DicyclicGroup;

use crate::error::CliError;
use crate::report::Report;

type Out = Result<Report, CliError>;

fn require_n(n: u32) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

fn require_case(n: u32, case: ActionCase) -> Result<(), CliError> {
    if case == ActionCase::II && n.is_multiple_of(2) {
        return Err(CliError::Usage(format!("case II needs n odd, got n = {n}")));
    }
    Ok(())
}

/// Cases that exist for `n`.
pub fn cases_for(n: u32) -> Vec<ActionCase> {
    if n % 2 == 1 {
        vec![ActionCase::I, ActionCase::II]
    } else {
        vec![ActionCase::I]
    }
}

fn expected_case_genus(n: u32, case: ActionCase) -> u64 {
    match case {
        ActionCase::I => n as u64,
        ActionCase::II => n as u64 - 1,
    }
}

pub fn census(n: u32) -> Out {
    require_n(n)?;
    let c = triangular_census(n)?;
    let mut r = Report::new("census", json!({ "n": n }));

    let mut expected: Vec<[u32; 3]> = cases_for(n)
        .into_iter()
        .map(|case| {
            let mut t = match case {
                ActionCase::I => [4, 4, 2 * n],
                ActionCase::II => [4, 4, n],
            };
            t.sort_unstable();
            t
        })
        .collect();
    expected.sort_unstable();
    expected.dedup();
    let found = c.unordered_types();
    r.claim(
        "types",
        "triangular signatures of G_n",
        found == expected,
        json!({ "found": found, "expected": expected, "generating_pairs": c.generating_pairs }),
    );

    let per_type: Vec<Value> = c
        .by_ordered_type
        .iter()
        .map(|e| {
            json!({
                "ordered_type": e.ordered_type,
                "pairs": e.pair_count,
                "conjugacy_orbits": e.conjugacy_orbit_count,
                "automorphism_orbits": e.automorphism_orbits.len(),
            })
        })
        .collect();
    let unique = c
        .by_ordered_type
        .iter()
        .all(|e| e.automorphism_orbits.len() == 1);
    r.claim(
        "uniqueness",
        "one action per ordered signature up to Aut(G_n)",
        unique,
        json!({ "automorphism_group_order": c.automorphism_group_order, "by_ordered_type": per_type }),
    );

    let mut genera = Vec::new();
    let mut genera_ok = true;
    for e in &c.by_unordered_type {
        let sig = OrbifoldSignature::new(0, e.orders.to_vec());
        let g = rh_genus(4 * n as u64, &sig)?;
        let want = e.case.map(|case| expected_case_genus(n, case));
        genera_ok &= want == Some(g);
        genera.push(json!({ "signature": sig.to_string(), "genus": g, "expected": want }));
    }
    r.claim(
        "genera",
        "Riemann-Hurwitz genus of each type",
        genera_ok,
        json!(genera),
    );

    let mut dessins = Vec::new();
    let mut dessins_ok = true;
    for e in &c.by_ordered_type {
        for o in &e.automorphism_orbits {
            let d = regular_dessin(&o.representative);
            let ok = d.genus() == o.representative.genus() as i64
                && d.monodromy_group_order() == 4 * n as usize
                && d.automorphism_count() == 4 * n as usize;
            dessins_ok &= ok;
            dessins.push(json!({
                "ordered_type": e.ordered_type,
                "dessin_genus": d.genus(),
                "edges": d.edge_count(),
            }));
        }
    }
    r.claim(
        "regular_dessins",
        "each action is a regular dessin of the same genus",
        dessins_ok,
        json!(dessins),
    );
    Ok(r)
}

pub fn monodromy(n: u32, case: ActionCase, dot: Option<&Path>) -> Out {
    require_n(n)?;
    require_case(n, case)?;
    let mut r = Report::new("monodromy", json!({ "n": n, "case": case }));

    let rel = verify_explicit_relations(n as usize)?;
    r.claim(
        "relations",
        "eta, sigma and tau satisfy the dicyclic relations",
        rel.all_hold(),
        json!({ "convention": rel.convention, "checks": rel.checks }),
    );

    let dessin = explicit_dessin(n as usize, case)?;
    let want = expected_case_genus(n, case);
    r.claim(
        "genus",
        "genus of the dessin",
        dessin.genus() == want as i64,
        json!({ "genus": dessin.genus(), "expected": want, "passport": dessin.passport() }),
    );

    let group = DicyclicGroup::new(n)?;
    let action = TriangularAction::of_case(group, case)?;
    let regular = regular_dessin(&action);
    r.claim(
        "matches_action",
        "same passport as the regular dessin of the action",
        regular.passport() == dessin.passport() && dessin.monodromy_group_order() == 4 * n as usize,
        json!({
            "monodromy_group_order": dessin.monodromy_group_order(),
            "automorphisms": dessin.automorphism_count(),
        }),
    );

    let graph = graph_of(&dessin);
    let shape = json!({ "vertices": graph.vertex_count(), "edges": graph.edges.len() });
    match case {
        ActionCase::I => r.claim(
            "graph",
            "underlying graph is a 2n-cycle with doubled edges",
            is_doubled_cycle(&graph, 2 * n as usize),
            shape,
        ),
        ActionCase::II => {
            let [w, b, _] = dessin.passport();
            let edges = graph.edges.len();
            r.claim(
                "graph",
                "vertices are the cycles of the two permutations, degrees sum to the edge count",
                graph.white_vertices == w.len()
                    && graph.black_vertices == b.len()
                    && graph.white_degrees().iter().sum::<usize>() == edges
                    && graph.black_degrees().iter().sum::<usize>() == edges
                    && edges == 4 * n as usize,
                shape,
            )
        }
    }
    if let Some(path) = dot {
        std::fs::write(path, export_dot(&graph))?;
    }
    Ok(r)
}

/// Genus of `S/H` for `|H| = d` from the fixed-point counts: a subgroup of
/// even order contains `x^n`, whose many fixed points force genus zero; a
/// subgroup of odd order lies in `<x^2>` and its elements fix only the points
/// over the `<x>`-branch values.
pub fn predicted_quotient_genus(n: u32, case: ActionCase, d: u32) -> u64 {
    if d.is_multiple_of(2) {
        return 0;
    }
    let k = (n / d) as u64;
    match case {
        ActionCase::I => k,
        ActionCase::II => k - 1,
    }
}

/// Fixed points, quotients and the purely non-free property of the
/// triangular actions.
pub fn actions(n: u32) -> Out {
    require_n(n)?;
    let group = DicyclicGroup::new(n)?;
    let mut r = Report::new("actions", json!({ "n": n }));
    let subgroups: Vec<_> = group
        .all_subgroups()
        .into_iter()
        .filter(|h| !h.is_trivial())
        .collect();

    for case in cases_for(n) {
        let action = TriangularAction::of_case(group, case)?;
        let v = action.vector();
        let genus = action.genus();
        let prefix = format!("case_{case}");

        let mut counts = Vec::new();
        let mut total = 0u64;
        for g in group.elements().filter(|g| !g.is_identity()) {
            let f = fixed_point_count(v, &g)?;
            total += f;
            counts.push(json!({ "element": g.to_string(), "fixed_points": f }));
        }
        // Each cone point of order m is fixed by exactly m - 1 non-trivial
        // elements, and there are |G|/m of them over each branch value.
        let expected_total: u64 = action
            .cones()
            .iter()
            .map(|c| {
                let m = c.order() as u64;
                (4 * n as u64 / m) * (m - 1)
            })
            .sum();
        r.claim(
            &format!("{prefix}.fixed_points"),
            "fixed points of every element",
            total == expected_total,
            json!({ "total": total, "expected_total": expected_total, "counts": counts }),
        );

        if case == ActionCase::I {
            let (x, y) = (group.x(), group.y());
            let probes = [x, x.pow(n as i64), y, x * y];
            let got = probes
                .iter()
                .map(|g| fixed_point_count(v, g))
                .collect::<Result<Vec<u64>, _>>()?;
            let want = vec![2, 2 + 2 * n as u64, 2, 2];
            r.claim(
                &format!("{prefix}.fixed_point_table"),
                "fixed points of x, x^n, y, xy",
                got == want,
                json!({ "counts": got, "expected": want }),
            );
        }

        let (pnf, free) = is_purely_non_free(v);
        let free_labels: Vec<String> = free.iter().map(|g| g.to_string()).collect();
        let expected_free: Vec<String> = match case {
            ActionCase::I => vec![],
            ActionCase::II => (1..2 * n)
                .filter(|k| k % 2 == 1 && *k != n)
                .map(|k| group.element(k as i64, 0).to_string())
                .collect(),
        };
        r.claim(
            &format!("{prefix}.free_elements"),
            "elements acting without fixed points",
            free_labels == expected_free && pnf == (case == ActionCase::I),
            json!({ "purely_non_free": pnf, "free": free_labels, "expected": expected_free }),
        );

        let mut quotients = Vec::new();
        let mut all_zero = true;
        let mut rh_ok = true;
        let mut predicted_ok = true;
        let mut positive = Vec::new();
        for h in &subgroups {
            let qg = quotient_genus(v, h)?;
            let qs = quotient_signature(v, h)?;
            all_zero &= qg == 0;
            rh_ok &= rh_genus(h.order() as u64, &qs)? == genus;
            predicted_ok &= qg == predicted_quotient_genus(n, case, h.order() as u32);
            if qg > 0 {
                positive.push(json!({ "subgroup": h.label(), "genus": qg }));
            }
            quotients.push(
                json!({ "subgroup": h.label(), "order": h.order(), "signature": qs.to_string() }),
            );
        }
        r.claim(
            &format!("{prefix}.quotients"),
            "every quotient by a non-trivial subgroup is the sphere",
            all_zero,
            json!({ "positive_genus": positive, "quotients": quotients }),
        );
        r.claim(
            &format!("{prefix}.quotient_closed_form"),
            "quotient genus n/d (case I) or n/d - 1 (case II) for odd order d, else 0",
            predicted_ok,
            json!(null),
        );
        r.claim(
            &format!("{prefix}.quotient_rh"),
            "each quotient signature lifts back to the surface genus",
            rh_ok,
            json!({ "genus": genus, "subgroups": subgroups.len() }),
        );
        r.claim(
            &format!("{prefix}.free_set_consistency"),
            "free elements agree with zero fixed-point counts",
            free == free_elements(v),
            json!(null),
        );
    }
    Ok(r)
}

/// Exponent triples of the cyclic plane models.
pub fn classify(n: u32) -> Out {
    require_n(n)?;
    let mut r = Report::new("classify", json!({ "n": n }));
    for case in cases_for(n) {
        let prefix = format!("case_{case}");
        let count = class_count(n, case)?;
        let reps = canonical_representatives(n, case)?;
        let expected = match case {
            ActionCase::I => (n, 1, 2 * n - 1),
            ActionCase::II => (n, 2, 2 * n - 2),
        };
        let ok = count == 1 && reps.len() == 1 && (reps[0].a, reps[0].b, reps[0].c) == expected;
        r.claim(
            &format!("{prefix}.unique_model"),
            "one cyclic plane model up to equivalence",
            ok,
            json!({
                "classes": count,
                "representatives": reps.iter().map(|t| t.equation()).collect::<Vec<_>>(),
                "expected": expected,
            }),
        );
        let cmp = compare_readings(n, case)?;
        r.claim(
            &format!("{prefix}.readings"),
            "literal conditions versus branch-order filtered conditions",
            cmp.admissible_class_count == 1,
            json!({
                "identical": cmp.identical,
                "stated_classes": cmp.stated_class_count,
                "extra_in_stated": cmp.extra_in_stated.iter().map(|t| t.equation()).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(r)
}

pub fn hyper(n: u32, gamma_max: u32, r_max: usize) -> Out {
    require_n(n)?;
    let mut r = Report::new(
        "hyper",
        json!({ "n": n, "gamma_max": gamma_max, "r_max": r_max }),
    );
    let res = sigma_hyp(n, gamma_max, r_max)?;
    let expected = if n.is_multiple_of(2) {
        n as u64 + 1
    } else {
        2 * n as u64 - 2
    };
    let shapes: Vec<Value> = res
        .minimizing_shapes
        .iter()
        .map(|s| json!({ "plus_part": s.plus_part.label(), "signature": s.signature.to_string() }))
        .collect();
    r.claim(
        "sigma_hyp",
        "least genus of a surface with a real structure and an anticonformal G_n action",
        res.genus == expected,
        json!({
            "genus": res.genus,
            "expected": expected,
            "signatures_tested": res.signatures_tested,
            "reflections_excluded": res.reflections_excluded,
            "minimizing_shapes": shapes,
        }),
    );

    let w = &res.witness;
    let rebuilt = NECActionData::new(
        w.group(),
        w.plus_part().clone(),
        w.signature().clone(),
        w.alpha_images().to_vec(),
        w.beta_images().to_vec(),
    );
    r.claim(
        "witness",
        "the witness re-validates and has the reported genus",
        rebuilt.is_ok() && w.genus() == res.genus,
        json!({
            "plus_part": w.plus_part().label(),
            "signature": w.signature().to_string(),
            "alpha_images": w.alpha_images(),
            "beta_images": w.beta_images(),
        }),
    );

    let group = DicyclicGroup::new(n)?;
    let (x, y) = (group.x(), group.y());
    if n.is_multiple_of(2) {
        let h2 = group.subgroup_generated(&[x.pow(2), y]);
        let sig = NECSignature::new(0, vec![4, 4]);
        let all = admissible_homomorphisms(n, &h2, &sig)?;
        let want_beta = vec![y, y * x.pow(n as i64 - 2)];
        let found = all
            .iter()
            .any(|d| d.alpha_images() == [x] && d.beta_images() == want_beta.as_slice());
        r.claim(
            "explicit_action",
            "x; y, y x^(n-2) over <x^2, y> with signature (0; 4, 4)",
            found,
            json!({ "admissible_over_h2": all.len() }),
        );
    } else {
        let h1 = group.subgroup_generated(&[x]);
        let ok = w.plus_part() == &h1 && w.signature() == &NECSignature::new(0, vec![n, 2 * n]);
        r.claim(
            "explicit_action",
            "minimum attained over <x> with signature (0; n, 2n)",
            ok,
            json!({ "signature": w.signature().to_string() }),
        );
    }
    Ok(r)
}

pub fn pseudo_real(n: u32, q: u32) -> Out {
    require_n(n)?;
    if q < 2 {
        return Err(CliError::Usage(format!("q must be at least 2, got {q}")));
    }
    let mut r = Report::new("pseudo-real", json!({ "n": n, "q": q }));
    let cert = build_pseudo_real(n, q)?;
    let closed_form = (cert.l - 1) * (2 * n as u64 - 1);
    r.claim(
        "genus",
        "genus (l - 1)(2n - 1) with l = n(2q - 1)",
        cert.genus == closed_form && cert.genus == cert.genus_via_rotation_cover,
        json!({
            "l": cert.l,
            "genus": cert.genus,
            "via_rotation_cover": cert.genus_via_rotation_cover,
            "closed_form": closed_form,
        }),
    );
    r.claim(
        "relation",
        "alpha^2 beta_1 ... beta_l maps to the identity",
        cert.relation_holds,
        json!({ "alpha": "y", "beta": "x" }),
    );
    let ob = &cert.obstruction_report;
    r.claim(
        "no_anticonformal_involution",
        "no element outside <x> has order 2",
        !ob.involution_outside_rotations,
        json!({ "anticonformal_orders": ob.anticonformal_orders.iter().collect::<std::collections::BTreeSet<_>>() }),
    );
    r.claim(
        "rotation_quotient",
        "quotient by <x> is a sphere with 2l cone points",
        ob.rotation_quotient_cone_points == 2 * cert.l,
        json!({ "signature": ob.rotation_quotient_signature }),
    );
    r.assume(
        "maximality",
        "full automorphism group equals G_n",
        json!({ "statement": ob.maximality_assumption }),
    );
    Ok(r)
}

pub fn parse_model(s: &str) -> Result<ModelName, CliError> {
    s.parse::<ModelName>().map_err(|_| {
        let names: Vec<String> = ModelName::ALL.iter().map(|m| m.to_string()).collect();
        CliError::Usage(format!(
            "unknown model {s:?}; expected one of {}",
            names.join(", ")
        ))
    })
}

pub fn curves(n: u32, model: ModelName, seed: u64, trials: usize, tol: f64) -> Out {
    require_n(n)?;
    if trials == 0 {
        return Err(CliError::Usage("trials must be positive".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Usage(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let m = CurveModel::new(model, n)?;
    let mut r = Report::new(
        "curves",
        json!({ "n": n, "model": model, "seed": seed, "trials": trials, "tol": tol }),
    );
    let suite = verify_all(&m, tol, trials, seed)?;
    for c in &suite.checks {
        r.claim(
            &c.check,
            &suite.equation,
            c.pass,
            json!({
                "max_error": c.max_error,
                "max_residual": c.max_residual,
                "pole_rejections": c.pole_rejections,
                "trials": c.trials,
            }),
        );
    }
    let control = sensitivity_control(&m, PERTURBATION, trials, seed)?;
    let undetected: Vec<String> = control
        .iter()
        .filter(|o| !o.detected)
        .map(|o| format!("{}[{}]", o.formula, o.coefficient))
        .collect();
    let weakest = control
        .iter()
        .map(|o| o.max_error)
        .fold(f64::INFINITY, f64::min);
    r.claim(
        "sensitivity",
        "every perturbed coefficient is detected",
        !control.is_empty() && undetected.is_empty(),
        json!({
            "perturbation": PERTURBATION,
            "threshold": SENSITIVITY_THRESHOLD,
            "coefficients": control.len(),
            "weakest_detection": weakest,
            "undetected": undetected,
        }),
    );
    for (i, s) in suite.unverified.iter().enumerate() {
        r.assume(
            &format!("unverified.{i}"),
            &suite.equation,
            json!({ "statement": s }),
        );
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenusMode {
    Strong,
    Pure,
}

fn genus_data(res: &GenusSearchResult) -> Value {
    json!({
        "genus": res.genus,
        "signature": res.signature.to_string(),
        "witness": res.witness.cones(),
        "candidates_tested": res.candidates_tested,
    })
}

pub fn genus(n: u32, mode: GenusMode, g_max: u64) -> Out {
    require_n(n)?;
    let mode_name = match mode {
        GenusMode::Strong => "strong",
        GenusMode::Pure => "pure",
    };
    let mut r = Report::new(
        "genus",
        json!({ "n": n, "mode": mode_name, "g_max": g_max }),
    );
    match mode {
        GenusMode::Strong => {
            let res = strong_symmetric_genus(n, g_max)?;
            let want = expected_strong_genus(n);
            let mut data = genus_data(&res);
            data["expected"] = json!(want);
            r.claim(
                "strong_symmetric_genus",
                "least genus with a conformal G_n action",
                res.genus == want,
                data,
            );
        }
        GenusMode::Pure => {
            let res = pure_symmetric_genus(n, g_max)?;
            let mut data = genus_data(&res);
            data["expected"] = json!(n);
            r.claim(
                "pure_symmetric_genus",
                "least genus with a purely non-free conformal G_n action",
                res.genus == n as u64,
                data,
            );
        }
    }
    let low = low_genus_exclusion(n)?;
    r.claim(
        "low_genus_exclusion",
        "no action on the sphere or the torus",
        low.excluded,
        json!({
            "torus_realized": low.torus_realized.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "sphere_realized": low.sphere_realized.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        }),
    );
    Ok(r)
}
