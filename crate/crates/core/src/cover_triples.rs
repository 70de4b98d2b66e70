//! Exponent triples `(a, b, c)` for cyclic covers
//! `v^{2n} = u^a (u-1)^b (u+1)^c` of the sphere branched over `0, 1, -1`
//! (and possibly `∞`) whose branch data match a triangular action of `G_n`,
//! and their classification up to the obvious equivalences.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;

use crate::covering::ActionCase;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoverTriple {
    pub n: u32,
    pub case: ActionCase,
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl CoverTriple {
    fn modulus(&self) -> u32 {
        2 * self.n
    }

    /// The plane model `v^{2n} = u^a (u-1)^b (u+1)^c` as text.
    pub fn equation(&self) -> String {
        let factor = |base: &str, e: u32| match e {
            1 => base.to_string(),
            _ => format!("{base}^{e}"),
        };
        format!(
            "v^{} = {}{}{}",
            self.modulus(),
            factor("u", self.a),
            factor("(u-1)", self.b),
            factor("(u+1)", self.c)
        )
    }

    /// Scale by a unit `alpha` modulo `2n`.
    pub fn scaled(&self, alpha: u32) -> CoverTriple {
        let m = self.modulus() as u64;
        let s = |e: u32| ((e as u64 * alpha as u64) % m) as u32;
        CoverTriple {
            a: s(self.a),
            b: s(self.b),
            c: s(self.c),
            ..*self
        }
    }

    pub fn swapped(&self) -> CoverTriple {
        CoverTriple {
            b: self.c,
            c: self.b,
            ..*self
        }
    }

    fn key(&self) -> (u32, u32, u32) {
        (self.a, self.b, self.c)
    }

    /// Ramification index of `v` over `u = 1` and `u = -1`.
    pub fn branch_orders(&self) -> (u32, u32) {
        let m = self.modulus();
        (m / self.b.gcd(&m), m / self.c.gcd(&m))
    }
}

fn check_domain(n: u32, case: ActionCase) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "n must be at least 2, got {n}"
        )));
    }
    if case == ActionCase::II && n.is_multiple_of(2) {
        return Err(Error::Domain(format!("case II needs n odd, got n = {n}")));
    }
    Ok(())
}

/// The conditions as literally stated for each case: in case I `b` and `c`
/// prime to `n`, in case II `gcd(2n, b) = 2 = gcd(2n, c)`; in both cases
/// `gcd(a, 2n) = n`, `gcd(a+b+c, 2n) = n` and `b + c ≡ 0 (mod 2n)`.
pub fn satisfies_stated_conditions(t: &CoverTriple) -> bool {
    let (n, m) = (t.n, t.modulus());
    let units = match t.case {
        ActionCase::I => t.b.gcd(&n) == 1 && t.c.gcd(&n) == 1,
        ActionCase::II => t.b.gcd(&m) == 2 && t.c.gcd(&m) == 2,
    };
    units && t.a.gcd(&m) == n && (t.a + t.b + t.c).gcd(&m) == n && (t.b + t.c).is_multiple_of(m)
}

/// Whether the branching over `±1` has the order the action requires:
/// `2n` in case I, `n` in case II.
pub fn has_action_branch_orders(t: &CoverTriple) -> bool {
    let want = match t.case {
        ActionCase::I => t.modulus(),
        ActionCase::II => t.n,
    };
    t.branch_orders() == (want, want)
}

fn scan(n: u32, case: ActionCase, keep: impl Fn(&CoverTriple) -> bool) -> Vec<CoverTriple> {
    let m = 2 * n;
    let mut out = Vec::new();
    for a in 1..m {
        for b in 1..m {
            for c in 1..m {
                let t = CoverTriple { n, case, a, b, c };
                if keep(&t) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Every triple in `{1, ..., 2n-1}^3` satisfying the stated conditions of the
/// case and carrying the branch orders of that case.
pub fn admissible_triples(n: u32, case: ActionCase) -> Result<Vec<CoverTriple>> {
    check_domain(n, case)?;
    Ok(scan(n, case, |t| {
        satisfies_stated_conditions(t) && has_action_branch_orders(t)
    }))
}

/// Triples satisfying only the stated conditions, without the branch-order
/// requirement.
pub fn stated_condition_triples(n: u32, case: ActionCase) -> Result<Vec<CoverTriple>> {
    check_domain(n, case)?;
    Ok(scan(n, case, satisfies_stated_conditions))
}

/// Comparison between the literal conditions and the branch-order filtered set.
#[derive(Clone, Debug, Serialize)]
pub struct ReadingComparison {
    pub n: u32,
    pub case: ActionCase,
    pub identical: bool,
    /// Triples accepted by the literal conditions whose branch orders do not
    /// match the action.
    pub extra_in_stated: Vec<CoverTriple>,
    pub stated_class_count: usize,
    pub admissible_class_count: usize,
}

pub fn compare_readings(n: u32, case: ActionCase) -> Result<ReadingComparison> {
    let stated = stated_condition_triples(n, case)?;
    let admissible = admissible_triples(n, case)?;
    let extra: Vec<CoverTriple> = stated
        .iter()
        .filter(|t| !admissible.contains(t))
        .copied()
        .collect();
    Ok(ReadingComparison {
        n,
        case,
        identical: extra.is_empty(),
        extra_in_stated: extra,
        stated_class_count: classes(&stated).len(),
        admissible_class_count: classes(&admissible).len(),
    })
}

fn units(modulus: u32) -> impl Iterator<Item = u32> {
    (1..modulus).filter(move |k| k.gcd(&modulus) == 1)
}

/// The orbit of `t` under unit scaling modulo `2n` and swapping `b` with `c`.
pub fn orbit(t: &CoverTriple) -> BTreeSet<CoverTriple> {
    let mut out = BTreeSet::new();
    for alpha in units(t.modulus()) {
        let s = t.scaled(alpha);
        out.insert(s);
        out.insert(s.swapped());
    }
    out
}

/// Lexicographically least member of the orbit, and the orbit size.
pub fn normalize(t: &CoverTriple) -> (CoverTriple, usize) {
    let orb = orbit(t);
    let least = *orb
        .iter()
        .min_by_key(|s| s.key())
        .expect("an orbit contains its base point");
    (least, orb.len())
}

fn classes(triples: &[CoverTriple]) -> BTreeSet<CoverTriple> {
    triples.iter().map(|t| normalize(t).0).collect()
}

/// Number of equivalence classes of admissible triples.
pub fn class_count(n: u32, case: ActionCase) -> Result<usize> {
    Ok(classes(&admissible_triples(n, case)?).len())
}

/// Canonical representatives of the admissible classes, sorted.
pub fn canonical_representatives(n: u32, case: ActionCase) -> Result<Vec<CoverTriple>> {
    Ok(classes(&admissible_triples(n, case)?).into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn abc(ts: &[CoverTriple]) -> Vec<(u32, u32, u32)> {
        ts.iter().map(|t| t.key()).collect()
    }

    #[test]
    fn small_scans() {
        assert_eq!(
            abc(&admissible_triples(2, ActionCase::I).unwrap()),
            vec![(2, 1, 3), (2, 3, 1)]
        );
        assert_eq!(
            abc(&admissible_triples(3, ActionCase::II).unwrap()),
            vec![(3, 2, 4), (3, 4, 2)]
        );
        assert!(matches!(
            admissible_triples(4, ActionCase::II),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn exponent_of_u_is_n() {
        for n in 2..=12 {
            for case in [ActionCase::I, ActionCase::II] {
                if let Ok(ts) = stated_condition_triples(n, case) {
                    assert!(ts.iter().all(|t| t.a == n));
                }
            }
        }
    }

    #[test]
    fn normalization_examples() {
        let t = CoverTriple {
            n: 2,
            case: ActionCase::I,
            a: 2,
            b: 3,
            c: 1,
        };
        let (canon, size) = normalize(&t);
        assert_eq!(canon.key(), (2, 1, 3));
        assert_eq!(size, 2);
        assert_eq!(t.equation(), "v^4 = u^2(u-1)^3(u+1)");
    }

    #[test]
    fn one_class_with_expected_representative() {
        for n in 2..=12u32 {
            let reps = canonical_representatives(n, ActionCase::I).unwrap();
            assert_eq!(abc(&reps), vec![(n, 1, 2 * n - 1)], "case I, n = {n}");
            if n % 2 == 1 {
                let reps = canonical_representatives(n, ActionCase::II).unwrap();
                assert_eq!(abc(&reps), vec![(n, 2, 2 * n - 2)], "case II, n = {n}");
            }
        }
        assert_eq!(
            canonical_representatives(3, ActionCase::II).unwrap()[0].equation(),
            "v^6 = u^3(u-1)^2(u+1)^4"
        );
    }

    #[test]
    fn literal_case_one_conditions_differ_only_for_odd_n() {
        for n in 2..=12u32 {
            let cmp = compare_readings(n, ActionCase::I).unwrap();
            assert_eq!(cmp.identical, n % 2 == 0, "n = {n}");
            assert_eq!(cmp.admissible_class_count, 1);
            if n % 2 == 1 {
                // The extra triples are exactly the case II curve.
                assert_eq!(cmp.stated_class_count, 2);
                assert!(cmp
                    .extra_in_stated
                    .iter()
                    .all(|t| t.branch_orders() == (n, n)));
            }
        }
        for n in [3, 5, 7, 9, 11] {
            assert!(compare_readings(n, ActionCase::II).unwrap().identical);
        }
    }

    proptest! {
        #[test]
        fn equivalence_preserves_admissibility(n in 2u32..=12, odd in any::<bool>(), pick in any::<prop::sample::Index>()) {
            let case = if odd && n % 2 == 1 { ActionCase::II } else { ActionCase::I };
            let ts = admissible_triples(n, case).unwrap();
            let t = ts[pick.index(ts.len())];
            let (canon, size) = normalize(&t);
            prop_assert_eq!(normalize(&canon).0, canon);
            for s in orbit(&t) {
                prop_assert!(ts.contains(&s));
                prop_assert_eq!(normalize(&s), (canon, size));
            }
        }
    }
}
