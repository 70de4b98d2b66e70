//! Floating-point checks of explicit plane models of the surfaces carrying
//! the triangular actions, and of the automorphisms written on them.
//!
//! Points are sampled on the curve with a seeded generator; maps are applied
//! as coordinate formulas and compared with the expected result at every
//! sample. Errors are relative: `|a - b| / max(1, |a|, |b|)` per coordinate.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub const ADMISSION_TOLERANCE: f64 = 1e-12;
pub const RELATION_TOLERANCE: f64 = 1e-9;
pub const SENSITIVITY_THRESHOLD: f64 = 1e-3;
pub const PERTURBATION: f64 = 1e-2;
/// Samples stay this far from branch values and poles.
pub const BRANCH_CLEARANCE: f64 = 1e-3;
const MAX_REJECTIONS: usize = 10_000;
const POLE_GUARD: f64 = 1e-9;

type C = Complex64;
pub type Pt = (C, C);

fn root_of_unity(m: u32) -> C {
    C::from_polar(1.0, 2.0 * std::f64::consts::PI / m as f64)
}

const I: C = C::new(0.0, 1.0);

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

fn distance(p: Pt, q: Pt) -> f64 {
    rel(p.0, q.0).max(rel(p.1, q.1))
}

fn finite(p: Pt) -> Option<Pt> {
    let ok = [p.0.re, p.0.im, p.1.re, p.1.im]
        .iter()
        .all(|v| v.is_finite());
    ok.then_some(p)
}

fn guarded_div(num: C, den: C) -> Option<C> {
    (den.norm() > POLE_GUARD).then(|| num / den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ModelName {
    #[serde(rename = "Sn_hyperelliptic")]
    SnHyperelliptic,
    #[serde(rename = "Rn_hyperelliptic")]
    RnHyperelliptic,
    #[serde(rename = "Sn_cyclic")]
    SnCyclic,
    #[serde(rename = "Rn_cyclic")]
    RnCyclic,
}

impl ModelName {
    pub const ALL: [ModelName; 4] = [
        ModelName::SnHyperelliptic,
        ModelName::RnHyperelliptic,
        ModelName::SnCyclic,
        ModelName::RnCyclic,
    ];

    pub fn is_hyperelliptic(self) -> bool {
        matches!(
            self,
            ModelName::SnHyperelliptic | ModelName::RnHyperelliptic
        )
    }

    /// Whether the model and its formulas apply for this `n`.
    pub fn supports(self, n: u32) -> bool {
        match self {
            ModelName::SnHyperelliptic => n >= 2,
            ModelName::SnCyclic => n >= 2 && n.is_multiple_of(2),
            ModelName::RnHyperelliptic | ModelName::RnCyclic => n >= 3 && n % 2 == 1,
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelName::SnHyperelliptic => "Sn_hyperelliptic",
            ModelName::RnHyperelliptic => "Rn_hyperelliptic",
            ModelName::SnCyclic => "Sn_cyclic",
            ModelName::RnCyclic => "Rn_cyclic",
        })
    }
}

impl FromStr for ModelName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelName::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown curve model {s:?}")))
    }
}

/// Self-maps that can appear in a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapName {
    U,
    Y,
    X,
    T,
    Tau,
}

impl MapName {
    pub fn is_conformal(self) -> bool {
        self != MapName::Tau
    }
}

impl fmt::Display for MapName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapName::U => "u",
            MapName::Y => "y",
            MapName::X => "x",
            MapName::T => "t",
            MapName::Tau => "tau",
        })
    }
}

impl FromStr for MapName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "u" => MapName::U,
            "y" => MapName::Y,
            "x" => MapName::X,
            "t" => MapName::T,
            "tau" => MapName::Tau,
            _ => return Err(Error::InvalidParameter(format!("unknown map {s:?}"))),
        })
    }
}

/// A coordinate formula with its own coefficient list. Inverses are written
/// out separately rather than derived from the forward maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    U,
    UInv,
    Y,
    YInv,
    X,
    XInv,
    T,
    Pi,
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formula::U => "u",
            Formula::UInv => "u^-1",
            Formula::Y => "y",
            Formula::YInv => "y^-1",
            Formula::X => "x",
            Formula::XInv => "x^-1",
            Formula::T => "t",
            Formula::Pi => "pi",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Perturbation {
    pub formula: Formula,
    pub coefficient: usize,
    pub delta: f64,
}

/// A plane model `F(p, q) = 0` for one of the four families, possibly with
/// one perturbed map coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveModel {
    name: ModelName,
    n: u32,
    perturbation: Option<Perturbation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    #[serde(serialize_with = "ser_complex")]
    pub p: C,
    #[serde(serialize_with = "ser_complex")]
    pub q: C,
    pub residual: f64,
}

fn ser_complex<S: serde::Serializer>(c: &C, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&c.re)?;
    t.serialize_element(&c.im)?;
    t.end()
}

impl CurvePoint {
    pub fn coords(&self) -> Pt {
        (self.p, self.q)
    }
}

impl CurveModel {
    pub fn new(name: ModelName, n: u32) -> Result<Self> {
        if !name.supports(n) {
            return Err(Error::Domain(format!("{name} is not defined for n = {n}")));
        }
        Ok(CurveModel {
            name,
            n,
            perturbation: None,
        })
    }

    pub fn name(&self) -> ModelName {
        self.name
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn perturbation(&self) -> Option<Perturbation> {
        self.perturbation
    }

    /// Same model with one coefficient of one formula shifted by `delta`.
    pub fn perturbed(&self, formula: Formula, coefficient: usize, delta: f64) -> Result<Self> {
        let count = self.coefficients(formula).map(|c| c.len()).unwrap_or(0);
        if coefficient >= count {
            return Err(Error::InvalidParameter(format!(
                "{formula} has {count} coefficients on {}",
                self.name
            )));
        }
        Ok(CurveModel {
            perturbation: Some(Perturbation {
                formula,
                coefficient,
                delta,
            }),
            ..self.clone()
        })
    }

    pub fn equation(&self) -> String {
        let n = self.n;
        match self.name {
            ModelName::SnHyperelliptic => format!("w^2 = z(z^{} - 1)", 2 * n),
            ModelName::RnHyperelliptic => format!("w^2 = z^{} - 1", 2 * n),
            ModelName::SnCyclic => {
                format!("v^{} = u^{}(u-1)(u+1)^{}", 2 * n, n, 2 * n - 1)
            }
            ModelName::RnCyclic => {
                format!("v^{} = u^{}(u-1)^2(u+1)^{}", 2 * n, n, 2 * n - 2)
            }
        }
    }

    fn sides(&self, (p, q): Pt) -> (C, C) {
        let n = self.n as i32;
        match self.name {
            ModelName::SnHyperelliptic => (q * q, p * (p.powi(2 * n) - 1.0)),
            ModelName::RnHyperelliptic => (q * q, p.powi(2 * n) - 1.0),
            ModelName::SnCyclic => (
                q.powi(2 * n),
                p.powi(n) * (p - 1.0) * (p + 1.0).powi(2 * n - 1),
            ),
            ModelName::RnCyclic => (
                q.powi(2 * n),
                p.powi(n) * (p - 1.0).powi(2) * (p + 1.0).powi(2 * n - 2),
            ),
        }
    }

    /// Relative residual of the defining equation.
    pub fn residual(&self, pt: Pt) -> f64 {
        let (l, r) = self.sides(pt);
        rel(l, r)
    }

    /// Accepts a point whose residual is within the admission tolerance.
    pub fn admit(&self, p: C, q: C) -> Result<CurvePoint> {
        let residual = self.residual((p, q));
        if residual > ADMISSION_TOLERANCE {
            return Err(Error::Sampling(format!(
                "({p}, {q}) is not on {}: residual {residual:e}",
                self.equation()
            )));
        }
        Ok(CurvePoint { p, q, residual })
    }

    /// Values of the first coordinate to keep away from.
    fn special_values(&self) -> Vec<C> {
        let mut out = vec![C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(-1.0, 0.0)];
        if self.name.is_hyperelliptic() {
            let m = 2 * self.n;
            out.extend((0..m).map(|k| root_of_unity(m).powu(k)));
            // pole of the order-three map on the genus-two surface
            out.push(C::new(0.0, -1.0));
        }
        out
    }

    /// Second coordinate from the first, on a fixed branch of the root.
    fn solve(&self, p: C) -> C {
        let n = self.n as i32;
        match self.name {
            ModelName::SnHyperelliptic => (p * (p.powi(2 * n) - 1.0)).sqrt(),
            ModelName::RnHyperelliptic => (p.powi(2 * n) - 1.0).sqrt(),
            ModelName::SnCyclic | ModelName::RnCyclic => {
                let (_, rhs) = self.sides((p, C::new(0.0, 0.0)));
                (rhs.ln() / (2.0 * n as f64)).exp()
            }
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<CurvePoint> {
        let special = self.special_values();
        for _ in 0..MAX_REJECTIONS {
            let r: f64 = rng.gen_range(0.5..1.5);
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let p = C::from_polar(r, theta);
            if special.iter().any(|s| (p - s).norm() <= BRANCH_CLEARANCE) {
                continue;
            }
            if let Ok(pt) = self.admit(p, self.solve(p)) {
                return Ok(pt);
            }
        }
        Err(Error::Sampling(format!(
            "no admissible point on {} after {MAX_REJECTIONS} draws",
            self.equation()
        )))
    }

    /// Coefficients of a formula on this model, or `None` if the formula is
    /// not written on it.
    pub fn coefficients(&self, formula: Formula) -> Option<Vec<C>> {
        let n = self.n;
        let one = C::new(1.0, 0.0);
        let r2n = root_of_unity(2 * n);
        let r4n = root_of_unity(4 * n);
        let rn = root_of_unity(n);
        use Formula as F;
        use ModelName as M;
        let base = match (self.name, formula) {
            (M::SnHyperelliptic, F::U) => vec![r2n, r4n],
            (M::SnHyperelliptic, F::UInv) => vec![r2n.conj(), r4n.conj()],
            (M::SnHyperelliptic, F::X) => vec![rn, r2n],
            (M::SnHyperelliptic, F::XInv) => vec![rn.conj(), r2n.conj()],
            (M::RnHyperelliptic, F::U) => vec![r2n, one],
            (M::RnHyperelliptic, F::UInv) => vec![r2n.conj(), one],
            (M::RnHyperelliptic, F::X) => vec![rn, -one],
            (M::RnHyperelliptic, F::XInv) => vec![rn.conj(), -one],
            (M::SnHyperelliptic | M::RnHyperelliptic, F::Y) => vec![one, I],
            (M::SnHyperelliptic | M::RnHyperelliptic, F::YInv) => vec![one, -I],
            (M::SnHyperelliptic | M::RnHyperelliptic, F::Pi) => {
                vec![C::new(-0.25, 0.0), C::new(2.0, 0.0)]
            }
            (M::SnHyperelliptic, F::T) if n == 2 => vec![I, 2.0 * (one + I)],
            (M::SnCyclic | M::RnCyclic, F::X) => vec![r2n],
            (M::SnCyclic | M::RnCyclic, F::XInv) => vec![r2n.conj()],
            (M::SnCyclic, F::Y) => vec![-one, one],
            (M::SnCyclic, F::YInv) => vec![-one, -one],
            (M::RnCyclic, F::Y) => vec![-one, r4n],
            (M::RnCyclic, F::YInv) => vec![-one, -r4n],
            _ => return None,
        };
        let mut cs = base;
        if let Some(pert) = self.perturbation {
            if pert.formula == formula {
                cs[pert.coefficient] += pert.delta;
            }
        }
        Some(cs)
    }

    /// Every (formula, coefficient index) pair written on this model.
    pub fn coefficient_sites(&self) -> Vec<(Formula, usize)> {
        use Formula as F;
        [F::U, F::UInv, F::Y, F::YInv, F::X, F::XInv, F::T, F::Pi]
            .into_iter()
            .flat_map(|f| {
                let k = self.coefficients(f).map(|c| c.len()).unwrap_or(0);
                (0..k).map(move |i| (f, i))
            })
            .collect()
    }

    pub fn has_map(&self, map: MapName) -> bool {
        match map {
            MapName::Tau => self.name.is_hyperelliptic(),
            MapName::U => self.coefficients(Formula::U).is_some(),
            MapName::Y => self.coefficients(Formula::Y).is_some(),
            MapName::X => self.coefficients(Formula::X).is_some(),
            MapName::T => self.coefficients(Formula::T).is_some(),
        }
    }

    /// Evaluates one formula; `None` at a pole.
    pub fn evaluate(&self, formula: Formula, (p, q): Pt) -> Result<Option<Pt>> {
        let c = self.coefficients(formula).ok_or_else(|| {
            Error::Domain(format!(
                "{formula} is not defined on {} (n = {})",
                self.name, self.n
            ))
        })?;
        let n = self.n as i32;
        use Formula as F;
        use ModelName as M;
        let out = match (self.name, formula) {
            (_, F::Pi) => return Err(Error::Domain("pi is a function, not a self-map".into())),
            (M::SnHyperelliptic | M::RnHyperelliptic, F::U | F::UInv | F::X | F::XInv) => {
                Some((c[0] * p, c[1] * q))
            }
            (M::SnHyperelliptic, F::Y | F::YInv) => {
                guarded_div(c[0], p).zip(guarded_div(c[1] * q, p.powi(n + 1)))
            }
            (M::RnHyperelliptic, F::Y | F::YInv) => {
                guarded_div(c[0], p).zip(guarded_div(c[1] * q, p.powi(n)))
            }
            (M::SnHyperelliptic, F::T) => {
                guarded_div(c[0] * (1.0 - p), 1.0 + p).zip(guarded_div(c[1] * q, (p + 1.0).powi(3)))
            }
            (M::SnCyclic | M::RnCyclic, F::X | F::XInv) => Some((p, c[0] * q)),
            (M::SnCyclic, F::Y) => guarded_div(
                c[1] * q.powi(2 * n - 1),
                p.powi(n - 1) * (p + 1.0).powi(2 * n - 2),
            )
            .map(|v| (c[0] * p, v)),
            (M::SnCyclic | M::RnCyclic, F::Y | F::YInv) => {
                guarded_div(c[1] * p * (p * p - 1.0), q).map(|v| (c[0] * p, v))
            }
            _ => unreachable!("coefficients exist only for written formulas"),
        };
        Ok(out.and_then(finite))
    }

    /// `π(z, w) = c0 (z^n + z^{-n} - c1)`, with `c0 = -1/4` and `c1 = 2`.
    pub fn belyi(&self, (p, _): Pt) -> Result<Option<C>> {
        let c = self.coefficients(Formula::Pi).ok_or_else(|| {
            Error::Domain(format!("no Belyi function is written on {}", self.name))
        })?;
        let zn = p.powi(self.n as i32);
        Ok(guarded_div(C::new(1.0, 0.0), zn).map(|inv| c[0] * (zn + inv - c[1])))
    }

    fn apply_once(&self, map: MapName, inverse: bool, pt: Pt) -> Result<Option<Pt>> {
        let formula = match (map, inverse) {
            (MapName::Tau, _) => return Ok(Some((pt.0.conj(), pt.1.conj()))),
            (MapName::U, false) => Formula::U,
            (MapName::U, true) => Formula::UInv,
            (MapName::Y, false) => Formula::Y,
            (MapName::Y, true) => Formula::YInv,
            (MapName::X, false) => Formula::X,
            (MapName::X, true) => Formula::XInv,
            (MapName::T, false) => Formula::T,
            (MapName::T, true) => {
                return Err(Error::InvalidParameter(
                    "negative powers of t are not written; use t^2".into(),
                ))
            }
        };
        self.evaluate(formula, pt)
    }
}

/// A product of powers of named maps, composed like functions: the
/// right-most factor acts first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapWord {
    pub factors: Vec<(MapName, i32)>,
}

impl MapWord {
    pub fn identity() -> Self {
        MapWord { factors: vec![] }
    }

    pub fn new(factors: Vec<(MapName, i32)>) -> Result<Self> {
        if factors.iter().any(|&(_, e)| e == 0) {
            return Err(Error::InvalidParameter("exponents must be non-zero".into()));
        }
        Ok(MapWord { factors })
    }

    /// Parses whitespace-separated factors such as `y^-1 x y` or `u^8`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for tok in s.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((name, e)) => (
                    name,
                    e.parse::<i32>()
                        .map_err(|_| Error::InvalidParameter(format!("bad exponent in {tok:?}")))?,
                ),
                None => (tok, 1),
            };
            factors.push((name.parse()?, exp));
        }
        MapWord::new(factors)
    }

    pub fn is_conformal(&self) -> bool {
        let anti: i64 = self
            .factors
            .iter()
            .filter(|(m, _)| !m.is_conformal())
            .map(|&(_, e)| e.unsigned_abs() as i64)
            .sum();
        anti % 2 == 0
    }

    /// Applies the word, checking every intermediate point against the curve.
    /// Returns the image and the worst intermediate residual, or `None` when
    /// a pole is met.
    pub fn apply(&self, model: &CurveModel, pt: Pt) -> Result<Option<(Pt, f64)>> {
        let mut cur = pt;
        let mut worst = 0.0f64;
        for &(map, e) in self.factors.iter().rev() {
            if !model.has_map(map) {
                return Err(Error::Domain(format!(
                    "{map} is not defined on {} (n = {})",
                    model.name(),
                    model.n()
                )));
            }
            for _ in 0..e.unsigned_abs() {
                match model.apply_once(map, e < 0, cur)? {
                    Some(next) => {
                        worst = worst.max(model.residual(next));
                        cur = next;
                    }
                    None => return Ok(None),
                }
            }
        }
        Ok(Some((cur, worst)))
    }
}

impl fmt::Display for MapWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(m, e)| {
                if e == 1 {
                    m.to_string()
                } else {
                    format!("{m}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Right-hand side of a checked relation.
#[derive(Clone, Debug)]
pub enum Expected {
    Identity,
    Word(MapWord),
    /// A conformal map given directly by coordinates.
    Formula {
        label: String,
        map: fn(Pt) -> Pt,
    },
}

impl Expected {
    fn is_conformal(&self) -> bool {
        match self {
            Expected::Identity | Expected::Formula { .. } => true,
            Expected::Word(w) => w.is_conformal(),
        }
    }

    fn label(&self) -> String {
        match self {
            Expected::Identity => "1".into(),
            Expected::Word(w) => w.to_string(),
            Expected::Formula { label, .. } => label.clone(),
        }
    }
}

/// Outcome of one numeric check over many sampled points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    /// Formulas the check exercises.
    pub formulas: Vec<Formula>,
    pub trials: usize,
    pub tolerance: f64,
    /// Worst deviation from the expected value.
    pub max_error: f64,
    /// Worst residual of any intermediate point.
    pub max_residual: f64,
    /// Samples discarded because the word met a pole.
    pub pole_rejections: usize,
    pub pass: bool,
}

impl CheckReport {
    /// The larger of the deviation and the residual.
    pub fn worst(&self) -> f64 {
        self.max_error.max(self.max_residual)
    }
}

fn formulas_of(words: &[&MapWord]) -> Vec<Formula> {
    let mut out = Vec::new();
    for w in words {
        for &(m, e) in &w.factors {
            let f = match (m, e < 0) {
                (MapName::U, false) => Formula::U,
                (MapName::U, true) => Formula::UInv,
                (MapName::Y, false) => Formula::Y,
                (MapName::Y, true) => Formula::YInv,
                (MapName::X, false) => Formula::X,
                (MapName::X, true) => Formula::XInv,
                (MapName::T, _) => Formula::T,
                (MapName::Tau, _) => continue,
            };
            if !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out.sort();
    out
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// `count` points of the model, deterministic in `seed`.
pub fn sample_points(model: &CurveModel, count: usize, seed: u64) -> Result<Vec<CurvePoint>> {
    if count == 0 {
        return Err(Error::Sampling("count must be at least 1".into()));
    }
    (0..count)
        .map(|i| model.draw(&mut trial_rng(seed, i)))
        .collect()
}

/// Runs `probe` on `trials` sampled points, redrawing a point (from the same
/// trial stream) whenever the probe reports a pole.
fn run_trials(
    model: &CurveModel,
    trials: usize,
    seed: u64,
    mut probe: impl FnMut(Pt) -> Result<Option<(f64, f64)>>,
) -> Result<(f64, f64, usize)> {
    if trials == 0 {
        return Err(Error::Sampling("trials must be at least 1".into()));
    }
    let (mut max_error, mut max_residual, mut poles) = (0.0f64, 0.0f64, 0usize);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let mut attempts = 0;
        loop {
            let pt = model.draw(&mut rng)?.coords();
            match probe(pt)? {
                Some((err, res)) => {
                    max_error = max_error.max(err);
                    max_residual = max_residual.max(res);
                    break;
                }
                None => {
                    poles += 1;
                    attempts += 1;
                    if attempts > MAX_REJECTIONS {
                        return Err(Error::Sampling("every redraw met a pole".into()));
                    }
                }
            }
        }
    }
    Ok((max_error, max_residual, poles))
}

/// Checks `word = expected` at sampled points.
pub fn verify_word(
    model: &CurveModel,
    word: &MapWord,
    expected: &Expected,
    tolerance: f64,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    if word.is_conformal() != expected.is_conformal() {
        return Err(Error::ConformalityMismatch);
    }
    let (max_error, max_residual, pole_rejections) = run_trials(model, trials, seed, |pt| {
        let Some((lhs, res_l)) = word.apply(model, pt)? else {
            return Ok(None);
        };
        let (rhs, res_r) = match expected {
            Expected::Identity => (pt, 0.0),
            Expected::Formula { map, .. } => {
                let q = map(pt);
                (q, model.residual(q))
            }
            Expected::Word(w) => match w.apply(model, pt)? {
                Some(r) => r,
                None => return Ok(None),
            },
        };
        Ok(Some((distance(lhs, rhs), res_l.max(res_r))))
    })?;
    let mut words = vec![word];
    if let Expected::Word(w) = expected {
        words.push(w);
    }
    Ok(CheckReport {
        check: format!("{word} = {}", expected.label()),
        formulas: formulas_of(&words),
        trials,
        tolerance,
        max_error,
        max_residual,
        pole_rejections,
        pass: max_error < tolerance && max_residual < tolerance,
    })
}

fn word(s: &str) -> MapWord {
    MapWord::parse(s).expect("built-in words parse")
}

fn check(
    model: &CurveModel,
    lhs: &str,
    rhs: Expected,
    tol: f64,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    verify_word(model, &word(lhs), &rhs, tol, trials, seed)
}

fn negate_second((p, q): Pt) -> Pt {
    (p, -q)
}

/// `x^{2n} = 1`, `y^2 = x^n` and `y^{-1} x y = x^{-1}`.
pub fn verify_dicyclic_relations(
    model: &CurveModel,
    tolerance: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<CheckReport>> {
    let n = model.n();
    Ok(vec![
        check(
            model,
            &format!("x^{}", 2 * n),
            Expected::Identity,
            tolerance,
            trials,
            seed,
        )?,
        check(
            model,
            "y^2",
            Expected::Word(word(&format!("x^{n}"))),
            tolerance,
            trials,
            seed,
        )?,
        check(
            model,
            "y^-1 x y",
            Expected::Word(word("x^-1")),
            tolerance,
            trials,
            seed,
        )?,
    ])
}

/// Relations among the generators written on each model beyond the group
/// presentation: how `x` is built from `u` and `y`, the orders of `u` and
/// `y`, and on the genus-two surface the order-three map `t`.
pub fn verify_model_relations(
    model: &CurveModel,
    tolerance: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<CheckReport>> {
    let n = model.n();
    let flip = || Expected::Formula {
        label: "(p, -q)".into(),
        map: negate_second,
    };
    let mut out = vec![check(
        model,
        "y^4",
        Expected::Identity,
        tolerance,
        trials,
        seed,
    )?];
    match model.name() {
        ModelName::SnHyperelliptic => {
            out.push(check(
                model,
                "x",
                Expected::Word(word("u^2")),
                tolerance,
                trials,
                seed,
            )?);
            out.push(check(
                model,
                &format!("u^{}", 4 * n),
                Expected::Identity,
                tolerance,
                trials,
                seed,
            )?);
            out.push(check(
                model,
                "u y^-1",
                Expected::Word(word("y u^-1")),
                tolerance,
                trials,
                seed,
            )?);
            out.push(check(
                model,
                "u^-1 u",
                Expected::Identity,
                tolerance,
                trials,
                seed,
            )?);
            out.push(check(model, "y^2", flip(), tolerance, trials, seed)?);
            if n == 2 {
                out.push(check(
                    model,
                    "t^3",
                    Expected::Identity,
                    tolerance,
                    trials,
                    seed,
                )?);
            }
        }
        ModelName::RnHyperelliptic => {
            out.push(check(
                model,
                "x",
                Expected::Word(word("y^2 u^2")),
                tolerance,
                trials,
                seed,
            )?);
            out.push(check(
                model,
                &format!("u^{}", 2 * n),
                Expected::Identity,
                tolerance,
                trials,
                seed,
            )?);
            out.push(check(
                model,
                "u^-1 u",
                Expected::Identity,
                tolerance,
                trials,
                seed,
            )?);
            out.push(check(model, "y^2", flip(), tolerance, trials, seed)?);
        }
        ModelName::SnCyclic | ModelName::RnCyclic => {
            out.push(check(
                model,
                "y^-1 y",
                Expected::Identity,
                tolerance,
                trials,
                seed,
            )?);
        }
    }
    Ok(out)
}

/// `π ∘ g = π` for `g ∈ {x, y, xy}`, and the values of `π` over `z^n = ±1`.
pub fn verify_belyi(
    model: &CurveModel,
    tolerance: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<CheckReport>> {
    if !model.name().is_hyperelliptic() {
        return Err(Error::Domain(format!(
            "no Belyi function is written on {}",
            model.name()
        )));
    }
    let mut out = Vec::new();
    for g in ["x", "y", "x y"] {
        let w = word(g);
        let (max_error, max_residual, pole_rejections) = run_trials(model, trials, seed, |pt| {
            let Some((img, res)) = w.apply(model, pt)? else {
                return Ok(None);
            };
            match (model.belyi(img)?, model.belyi(pt)?) {
                (Some(a), Some(b)) => Ok(Some((rel(a, b), res))),
                _ => Ok(None),
            }
        })?;
        let mut formulas = formulas_of(&[&w]);
        formulas.push(Formula::Pi);
        out.push(CheckReport {
            check: format!("pi {g} = pi"),
            formulas,
            trials,
            tolerance,
            max_error,
            max_residual,
            pole_rejections,
            pass: max_error < tolerance && max_residual < tolerance,
        });
    }
    // Points over the branch values: z^n = 1 and z^n = -1, where w = 0.
    let n = model.n();
    for (target, label) in [
        (0.0, "pi = 0 where z^n = 1"),
        (1.0, "pi = 1 where z^n = -1"),
    ] {
        let (mut max_error, mut max_residual) = (0.0f64, 0.0f64);
        let shift = if target == 0.0 { 0.0 } else { 1.0 };
        for k in 0..n {
            let z = C::from_polar(
                1.0,
                std::f64::consts::PI * (2.0 * k as f64 + shift) / n as f64,
            );
            let pt = model.admit(z, C::new(0.0, 0.0))?;
            max_residual = max_residual.max(pt.residual);
            let value = model.belyi(pt.coords())?.expect("|z| = 1 is not a pole");
            max_error = max_error.max(rel(value, C::new(target, 0.0)));
        }
        out.push(CheckReport {
            check: label.into(),
            formulas: vec![Formula::Pi],
            trials: n as usize,
            tolerance,
            max_error,
            max_residual,
            pole_rejections: 0,
            pass: max_error < tolerance && max_residual < tolerance,
        });
    }
    Ok(out)
}

/// `τ^2 = 1`, `τ u τ = u^{-1}` and `τ y τ = y^{-1}` for complex conjugation.
pub fn verify_anticonformal(
    model: &CurveModel,
    tolerance: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<CheckReport>> {
    if !model.name().is_hyperelliptic() {
        return Err(Error::Domain(format!(
            "conjugation is only checked on the hyperelliptic models, not {}",
            model.name()
        )));
    }
    Ok(vec![
        check(model, "tau^2", Expected::Identity, tolerance, trials, seed)?,
        check(
            model,
            "tau u tau",
            Expected::Word(word("u^-1")),
            tolerance,
            trials,
            seed,
        )?,
        check(
            model,
            "tau y tau",
            Expected::Word(word("y^-1")),
            tolerance,
            trials,
            seed,
        )?,
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveSuiteReport {
    pub model: ModelName,
    pub n: u32,
    pub equation: String,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
    /// Statements about the models that numeric sampling cannot settle.
    pub unverified: Vec<String>,
    pub pass: bool,
}

/// Every check that applies to the model.
pub fn verify_all(
    model: &CurveModel,
    tolerance: f64,
    trials: usize,
    seed: u64,
) -> Result<CurveSuiteReport> {
    let mut checks = verify_dicyclic_relations(model, tolerance, trials, seed)?;
    checks.extend(verify_model_relations(model, tolerance, trials, seed)?);
    let mut unverified = Vec::new();
    if model.name().is_hyperelliptic() {
        checks.extend(verify_belyi(model, tolerance, trials, seed)?);
        checks.extend(verify_anticonformal(model, tolerance, trials, seed)?);
        unverified.push(format!(
            "the listed maps generate the full conformal automorphism group of {}",
            model.equation()
        ));
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(CurveSuiteReport {
        model: model.name(),
        n: model.n(),
        equation: model.equation(),
        seed,
        checks,
        unverified,
        pass,
    })
}

/// Result of perturbing one coefficient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SensitivityOutcome {
    pub formula: Formula,
    pub coefficient: usize,
    /// Largest deviation among checks that use the perturbed formula.
    pub max_error: f64,
    pub detected: bool,
}

/// Shifts each map coefficient in turn by `delta` and records whether some
/// check exercising that formula moves beyond [`SENSITIVITY_THRESHOLD`].
pub fn sensitivity_control(
    model: &CurveModel,
    delta: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<SensitivityOutcome>> {
    let mut out = Vec::new();
    for (formula, coefficient) in model.coefficient_sites() {
        let perturbed = model.perturbed(formula, coefficient, delta)?;
        let suite = verify_all(&perturbed, RELATION_TOLERANCE, trials, seed)?;
        let max_error = suite
            .checks
            .iter()
            .filter(|c| c.formulas.contains(&formula))
            .map(|c| c.worst())
            .fold(0.0f64, f64::max);
        out.push(SensitivityOutcome {
            formula,
            coefficient,
            max_error,
            detected: max_error > SENSITIVITY_THRESHOLD,
        });
    }
    Ok(out)
}
