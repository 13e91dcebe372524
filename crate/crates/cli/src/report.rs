//! Reports: deterministic JSON or text. Timings appear only when requested,
//! so reports for the same inputs are byte-identical by default.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// A failing case: its entropy stream and the serialized element and sides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub seed: u64,
    pub stream: u64,
    pub input: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomologyRow {
    pub complex: String,
    pub window: usize,
    pub even: usize,
    pub odd: usize,
    pub next_window: (usize, usize),
    pub stable: bool,
    /// `(weight, even, odd)` for every nonzero slice.
    pub slices: Vec<(i64, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PushforwardReport {
    pub input: String,
    pub route_a: String,
    pub route_b: String,
    pub difference: String,
    pub equal: bool,
    pub boundary: Option<bool>,
    pub stable: Option<bool>,
    pub class_nonzero: Option<bool>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub scene: String,
    pub seed: u64,
    pub trunc: usize,
    pub window: usize,
    pub todd_sign: String,
    pub sign_ledger_version: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub validation: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<SuiteReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub homology: Vec<HomologyRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pushforward: Option<PushforwardReport>,
    pub passed: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let _ = writeln!(o, "{} on {} (seed {}, N = {}, D = {}, todd-sign {}, sign ledger v{})",
            self.command, self.scene, self.seed, self.trunc, self.window, self.todd_sign, self.sign_ledger_version);
        for v in &self.validation {
            let _ = writeln!(o, "invalid: {}", v);
        }
        for s in &self.suites {
            let _ = match s.elapsed_ms {
                Some(ms) => writeln!(o, "suite {} ({} ms)", s.suite, ms),
                None => writeln!(o, "suite {}", s.suite),
            };
            for c in &s.checks {
                let tag = if c.passed() { "pass" } else { "FAIL" };
                let _ = write!(o, "  {} {} [{} cases]", tag, c.id, c.cases);
                if let Some(n) = &c.note {
                    let _ = write!(o, " {}", n);
                }
                o.push('\n');
                if let Some(x) = &c.counterexample {
                    let _ = writeln!(o, "    seed {} stream {}\n    input {}\n    lhs   {}\n    rhs   {}", x.seed, x.stream, x.input, x.lhs, x.rhs);
                }
            }
        }
        for h in &self.homology {
            let _ = writeln!(o, "homology {} window {}: even {} odd {} (window {}: {} {}) {}", h.complex, h.window, h.even, h.odd,
                h.window + 1, h.next_window.0, h.next_window.1, if h.stable { "stable" } else { "UNSTABLE" });
            for (w, e, d) in &h.slices {
                let _ = writeln!(o, "  W = {}: even {} odd {}", w, e, d);
            }
        }
        if let Some(p) = &self.pushforward {
            let _ = writeln!(o, "input   {}\nroute A {}\nroute B {}\nA - B   {}", p.input, p.route_a, p.route_b, p.difference);
            let _ = writeln!(o, "equal {} boundary {:?} stable {:?} class nonzero {:?} agree {}", p.equal, p.boundary, p.stable, p.class_nonzero, p.agree);
        }
        let _ = writeln!(o, "{}", if self.passed { "PASS" } else { "FAIL" });
        o
    }
}
