//! Check records and report rendering.
//!
//! Every verification produces a flat list of named checks; a check
//! either passed or failed, and a failing check carries the exact inputs
//! that reproduce it. Reports render two ways: a human text form with
//! wall times, and a machine JSON form that is byte-identical across
//! runs of the same configuration and seed (wall times are excluded
//! from it for that reason).

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    /// Stable dotted identifier; reports sort by it.
    pub id: String,
    /// The mathematical identity the check exercises.
    pub identity: String,
    /// Case label, e.g. `A2/B`.
    pub case: String,
    /// Exact inputs sufficient to reproduce the check.
    pub inputs: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    #[serde(skip)]
    pub wall_ms: u128,
}

impl CheckRecord {
    pub fn new(
        id: impl Into<String>,
        identity: impl Into<String>,
        case: impl Into<String>,
        inputs: impl Into<String>,
        expected: impl Into<String>,
        computed: impl Into<String>,
        pass: bool,
    ) -> Self {
        CheckRecord {
            id: id.into(),
            identity: identity.into(),
            case: case.into(),
            inputs: inputs.into(),
            expected: expected.into(),
            computed: computed.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            wall_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// Crate name and version that produced the report.
    pub tool: String,
    /// Convention choices frozen by self-tests, budgets, and other
    /// run-level notes.
    pub conventions: Vec<String>,
    pub checks: Vec<CheckRecord>,
    /// Non-generic draws that were rejected and redrawn.
    pub rejections: Vec<String>,
}

impl Default for Report {
    fn default() -> Self {
        Report::new()
    }
}

impl Report {
    pub fn new() -> Self {
        Report {
            tool: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            conventions: Vec::new(),
            checks: Vec::new(),
            rejections: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn note(&mut self, convention: impl Into<String>) {
        self.conventions.push(convention.into());
    }

    pub fn absorb_rejections(&mut self, rejections: Vec<String>) {
        self.rejections.extend(rejections);
    }

    /// Merge another report's checks and notes into this one.
    pub fn merge(&mut self, other: Report) {
        for note in other.conventions {
            if !self.conventions.contains(&note) {
                self.conventions.push(note);
            }
        }
        self.checks.extend(other.checks);
        self.rejections.extend(other.rejections);
    }

    /// Sort checks by id; call once after assembly so both renderings
    /// are deterministic.
    pub fn finish(&mut self) {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
    }

    pub fn pass_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed()).count()
    }

    pub fn fail_count(&self) -> usize {
        self.checks.len() - self.pass_count()
    }

    pub fn all_passed(&self) -> bool {
        self.fail_count() == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\n", self.tool));
        if !self.conventions.is_empty() {
            out.push_str("conventions:\n");
            for c in &self.conventions {
                out.push_str(&format!("  {c}\n"));
            }
        }
        out.push('\n');
        for c in &self.checks {
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{verdict} {} [{}] {} ({} ms)\n",
                c.id, c.case, c.identity, c.wall_ms
            ));
            if !c.passed() {
                out.push_str(&format!("     inputs:   {}\n", c.inputs));
                out.push_str(&format!("     expected: {}\n", c.expected));
                out.push_str(&format!("     computed: {}\n", c.computed));
            }
        }
        if !self.rejections.is_empty() {
            out.push_str(&format!(
                "\nrejected draws ({}):\n",
                self.rejections.len()
            ));
            for r in &self.rejections {
                out.push_str(&format!("  {r}\n"));
            }
        }
        out.push_str(&format!(
            "\n{} checks: {} passed, {} failed\n",
            self.checks.len(),
            self.pass_count(),
            self.fail_count()
        ));
        out
    }
}

/// Render a rational as `p` or `p/q`.
pub fn rat(v: &crate::scalar::Rat) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Render a list of rationals as `(a,b,...)`.
pub fn rats(vs: &[crate::scalar::Rat]) -> String {
    let parts: Vec<String> = vs.iter().map(rat).collect();
    format!("({})", parts.join(","))
}

/// Render characteristic-polynomial coefficients, constant term first.
pub fn coeffs(vs: &[crate::scalar::Rat]) -> String {
    if vs.is_empty() {
        return "(undefined)".into();
    }
    rats(vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rfrac, rint};

    fn record(id: &str, pass: bool) -> CheckRecord {
        CheckRecord::new(id, "identity", "A1/B", "q=(1)", "2", "2", pass)
    }

    #[test]
    fn counts_and_order() {
        let mut r = Report::new();
        r.push(record("b.second", true));
        r.push(record("a.first", false));
        r.finish();
        assert_eq!(r.checks[0].id, "a.first");
        assert_eq!((r.pass_count(), r.fail_count()), (1, 1));
        assert!(!r.all_passed());
    }

    #[test]
    fn json_is_stable_and_skips_wall_time() {
        let mut a = Report::new();
        let mut rec = record("x", true);
        rec.wall_ms = 123;
        a.push(rec);
        a.finish();
        let mut b = Report::new();
        let mut rec = record("x", true);
        rec.wall_ms = 456;
        b.push(rec);
        b.finish();
        assert_eq!(a.to_json(), b.to_json());
        assert!(!a.to_json().contains("wall"));
    }

    #[test]
    fn failures_carry_reproduction_inputs() {
        let mut r = Report::new();
        r.push(record("x", false));
        r.finish();
        let text = r.to_text();
        assert!(text.contains("inputs:   q=(1)"));
        assert!(text.contains("FAIL x"));
    }

    #[test]
    fn rationals_render_exactly() {
        assert_eq!(rat(&rint(-7)), "-7");
        assert_eq!(rat(&rfrac(3, 4)), "3/4");
        assert_eq!(rats(&[rint(1), rfrac(-1, 2)]), "(1,-1/2)");
        assert_eq!(coeffs(&[]), "(undefined)");
    }
}
