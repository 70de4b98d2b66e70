//! Machine-readable reports. A [`Report`] is deterministic for fixed inputs;
//! wall-clock time lives only in the [`Envelope`] around it.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Taken from the literature, not checked here.
    Assumed,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub data: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub claims: Vec<Claim>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str, params: Value) -> Self {
        Report {
            command: command.to_string(),
            params,
            claims: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn claim(&mut self, id: &str, anchor: &str, ok: bool, data: Value) {
        self.push(id, anchor, Status::from_bool(ok), data);
    }

    pub fn assume(&mut self, id: &str, anchor: &str, data: Value) {
        self.push(id, anchor, Status::Assumed, data);
    }

    fn push(&mut self, id: &str, anchor: &str, status: Status, data: Value) {
        self.claims.push(Claim {
            id: id.to_string(),
            anchor: anchor.to_string(),
            status,
            data,
        });
        if status == Status::Fail {
            self.status = Status::Fail;
        }
    }

    /// Every claim that is not assumed passes.
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<&Claim> {
        self.claims
            .iter()
            .filter(|c| c.status == Status::Fail)
            .collect()
    }

    /// Appends another report's claims, prefixing their ids.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for c in other.claims {
            self.push(&format!("{prefix}.{}", c.id), &c.anchor, c.status, c.data);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

/// A report together with how long it took to produce.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Envelope {
    pub report: Report,
    pub ms: u64,
}

impl Envelope {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelopes serialize") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn status_tracks_failures_but_not_assumptions() {
        let mut r = Report::new("t", json!({"n": 2}));
        r.claim("a", "x", true, json!(null));
        r.assume("b", "y", json!(null));
        assert!(r.passed());
        assert_eq!(r.status, Status::Pass);
        r.claim("c", "z", false, json!(1));
        assert!(!r.passed());
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.failures().len(), 1);
    }

    #[test]
    fn json_shape() {
        let mut r = Report::new("census", json!({"n": 3}));
        r.claim("types", "anchor", true, json!([1, 2]));
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(keys, ["command", "params", "claims", "status"]);
        assert_eq!(v["claims"][0]["status"], "pass");
        let back: Report = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
