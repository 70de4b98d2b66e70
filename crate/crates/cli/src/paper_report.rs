//! Runs every check over a range of `n` and writes one JSON report per `n`,
//! a markdown summary and a timing file.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::Path;
use std::time::Instant;

use serde_json::json;

use dessins_core::curves::{ModelName, RELATION_TOLERANCE};

use crate::commands::{self, cases_for, GenusMode};
use crate::error::CliError;
use crate::report::{Report, Status};

pub const DEFAULT_TRIALS: usize = 100;

/// Parses `a..b` (inclusive) or a single `n`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u32>, CliError> {
    let bad = || CliError::Usage(format!("expected a range like 2..8, got {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse::<u32>().map_err(|_| bad())?,
            b.trim()
                .trim_start_matches('=')
                .parse::<u32>()
                .map_err(|_| bad())?,
        ),
        None => {
            let n = s.trim().parse::<u32>().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(CliError::Usage(format!("empty range {s:?}")));
    }
    if lo < 2 {
        return Err(CliError::Usage(format!(
            "n must be at least 2, range starts at {lo}"
        )));
    }
    Ok(lo..=hi)
}

#[derive(Clone, Debug)]
pub struct PaperReportOptions {
    pub seed: u64,
    pub genus_n_max: u32,
    pub trials: usize,
}

/// All checks for a single `n`.
pub fn report_for(n: u32, opts: &PaperReportOptions) -> Result<Report, CliError> {
    let mut r = Report::new(
        "paper-report",
        json!({ "n": n, "seed": opts.seed, "trials": opts.trials, "genus_n_max": opts.genus_n_max }),
    );
    r.absorb("census", commands::census(n)?);
    r.absorb("actions", commands::actions(n)?);
    r.absorb("classify", commands::classify(n)?);
    for case in cases_for(n) {
        r.absorb(
            &format!("monodromy.case_{case}"),
            commands::monodromy(n, case, None)?,
        );
    }
    r.absorb("hyper", commands::hyper(n, 1, 3)?);
    for q in [2, 3] {
        r.absorb(&format!("pseudo_real.q{q}"), commands::pseudo_real(n, q)?);
    }
    for model in ModelName::ALL {
        if model.supports(n) {
            let c = commands::curves(n, model, opts.seed, opts.trials, RELATION_TOLERANCE)?;
            r.absorb(&format!("curves.{model}"), c);
        }
    }
    if n <= opts.genus_n_max {
        let g_max = 2 * n as u64 + 2;
        r.absorb(
            "genus.strong",
            commands::genus(n, GenusMode::Strong, g_max)?,
        );
        r.absorb("genus.pure", commands::genus(n, GenusMode::Pure, g_max)?);
    }
    Ok(r)
}

fn count(r: &Report, s: Status) -> usize {
    r.claims.iter().filter(|c| c.status == s).count()
}

fn summary_markdown(reports: &[(u32, Report)]) -> String {
    let mut s = String::from("# Claim summary\n\n");
    s.push_str("| n | claims | pass | fail | assumed | status |\n");
    s.push_str("|---|---|---|---|---|---|\n");
    for (n, r) in reports {
        let _ = writeln!(
            s,
            "| {n} | {} | {} | {} | {} | {} |",
            r.claims.len(),
            count(r, Status::Pass),
            count(r, Status::Fail),
            count(r, Status::Assumed),
            if r.passed() { "pass" } else { "FAIL" }
        );
    }
    for (n, r) in reports {
        let _ = writeln!(s, "\n## n = {n}\n");
        for c in &r.claims {
            let mark = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Assumed => "assumed",
            };
            let _ = writeln!(s, "- `{}` {mark}: {}", c.id, c.anchor);
        }
    }
    s
}

/// Runs the range, writes `n<k>.json`, `summary.md` and `timing.json` into
/// `out`, and returns the aggregate report.
pub fn run(
    range: RangeInclusive<u32>,
    out: &Path,
    opts: &PaperReportOptions,
) -> Result<Report, CliError> {
    std::fs::create_dir_all(out)?;
    let mut per_n = Vec::new();
    let mut timing = serde_json::Map::new();
    let start = Instant::now();
    for n in range.clone() {
        let t = Instant::now();
        let r = report_for(n, opts)?;
        timing.insert(n.to_string(), json!(t.elapsed().as_millis() as u64));
        std::fs::write(out.join(format!("n{n}.json")), r.to_json())?;
        per_n.push((n, r));
    }
    let total = start.elapsed().as_millis() as u64;
    std::fs::write(out.join("summary.md"), summary_markdown(&per_n))?;
    let timing = json!({ "ms_per_n": timing, "total_ms": total });
    std::fs::write(
        out.join("timing.json"),
        serde_json::to_string_pretty(&timing).expect("timing serializes") + "\n",
    )?;

    let mut agg = Report::new(
        "paper-report",
        json!({
            "n_range": format!("{}..{}", range.start(), range.end()),
            "seed": opts.seed,
            "trials": opts.trials,
            "genus_n_max": opts.genus_n_max,
        }),
    );
    for (n, r) in &per_n {
        let failed: Vec<&str> = r.failures().iter().map(|c| c.id.as_str()).collect();
        agg.claim(
            &format!("n{n}"),
            &format!("all checks for n = {n}"),
            r.passed(),
            json!({
                "file": format!("n{n}.json"),
                "claims": r.claims.len(),
                "assumed": count(r, Status::Assumed),
                "failed": failed,
            }),
        );
    }
    Ok(agg)
}
