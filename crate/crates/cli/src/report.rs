//! Suite reports: per-trial records whose verdicts can be recomputed from the
//! stored numbers alone.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

/// How a check turns its two numbers into a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `lhs ≤ rhs · (1 + tol)`.
    Le,
    /// `lhs ≥ rhs`.
    Ge,
    /// `lhs < rhs`.
    Lt,
    /// `|lhs - rhs| ≤ tol`.
    AbsDiff,
    /// `|lhs - rhs| ≤ tol · max(|lhs|, |rhs|)`.
    RelDiff,
    /// `lhs == rhs`; used for exact decisions encoded as 0/1.
    Exact,
}

impl Rule {
    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        if lhs.is_nan() || rhs.is_nan() {
            return false;
        }
        match self {
            Rule::Le => lhs <= rhs * (1.0 + tol),
            Rule::Ge => lhs >= rhs,
            Rule::Lt => lhs < rhs,
            Rule::AbsDiff => (lhs - rhs).abs() <= tol,
            Rule::RelDiff => {
                let scale = lhs.abs().max(rhs.abs());
                lhs == rhs || (lhs - rhs).abs() <= tol * scale
            }
            Rule::Exact => lhs == rhs,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::Le => "le",
            Rule::Ge => "ge",
            Rule::Lt => "lt",
            Rule::AbsDiff => "abs-diff",
            Rule::RelDiff => "rel-diff",
            Rule::Exact => "exact",
        }
    }
}

/// JSON has no infinities; non-finite values travel as strings.
mod lenient_f64 {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) => match s.as_str() {
                "nan" => Ok(f64::NAN),
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(D::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(with = "lenient_f64")]
    pub lhs: f64,
    #[serde(with = "lenient_f64")]
    pub rhs: f64,
    pub rule: Rule,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, rule: Rule, tol: f64) -> Self {
        let pass = rule.holds(lhs, rhs, tol);
        Check { name: name.into(), lhs, rhs, rule, tol, pass }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Check::new(name, if ok { 1.0 } else { 0.0 }, 1.0, Rule::Exact, 0.0)
    }

    pub fn consistent(&self) -> bool {
        self.pass == self.rule.holds(self.lhs, self.rhs, self.tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    /// `random`, `fixture` or `summary`.
    pub kind: String,
    pub label: String,
    /// sha256 of the inputs, hex.
    pub digest: String,
    pub params: BTreeMap<String, String>,
    pub values: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// A recorded number that may be non-finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Value(#[serde(with = "lenient_f64")] pub f64);

impl TrialRecord {
    pub fn new(index: usize, kind: &str, label: impl Into<String>) -> Self {
        TrialRecord {
            index,
            kind: kind.into(),
            label: label.into(),
            digest: String::new(),
            params: BTreeMap::new(),
            values: BTreeMap::new(),
            checks: Vec::new(),
            pass: false,
        }
    }

    pub fn param(&mut self, k: &str, v: impl ToString) -> &mut Self {
        self.params.insert(k.into(), v.to_string());
        self
    }

    pub fn value(&mut self, k: &str, v: f64) -> &mut Self {
        self.values.insert(k.into(), Value(v));
        self
    }

    pub fn check(&mut self, c: Check) -> &mut Self {
        self.checks.push(c);
        self
    }

    /// Records an error as a failing check.
    pub fn error(&mut self, msg: impl ToString) -> &mut Self {
        self.params.insert("error".into(), msg.to_string());
        self.checks.push(Check::flag("completed without error", false));
        self
    }

    pub fn finish(mut self) -> Self {
        self.pass = !self.checks.is_empty() && self.checks.iter().all(|c| c.pass);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub environment: BTreeMap<String, String>,
    /// Conclusions drawn from the records, e.g. a resolved sign convention.
    pub findings: BTreeMap<String, String>,
    pub records: Vec<TrialRecord>,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64, environment: BTreeMap<String, String>, records: Vec<TrialRecord>) -> Self {
        let passed = records.iter().filter(|r| r.pass).count();
        SuiteReport {
            schema: SCHEMA,
            suite: suite.into(),
            seed,
            trials: records.len(),
            passed,
            failed: records.len() - passed,
            environment,
            findings: BTreeMap::new(),
            records,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.trials > 0
    }

    /// Re-derives every verdict and count from the stored values.
    pub fn recompute_ok(&self) -> bool {
        let recs_ok = self.records.iter().all(|r| {
            r.checks.iter().all(Check::consistent) && r.pass == (!r.checks.is_empty() && r.checks.iter().all(|c| c.pass))
        });
        let passed = self.records.iter().filter(|r| r.pass).count();
        recs_ok && passed == self.passed && self.trials == self.records.len() && self.failed == self.trials - passed
    }

    pub fn failures(&self) -> impl Iterator<Item = (&TrialRecord, &Check)> {
        self.records.iter().flat_map(|r| r.checks.iter().filter(|c| !c.pass).map(move |c| (r, c)))
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{}: {}/{} records passed (seed {}){}",
            self.suite,
            self.passed,
            self.trials,
            self.seed,
            if self.all_passed() { "" } else { " FAILED" }
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One row per check: `suite,index,kind,label,digest,check,lhs,rhs,rule,tol,pass`.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["suite", "index", "kind", "label", "digest", "check", "lhs", "rhs", "rule", "tol", "pass"])?;
        for r in &self.records {
            for c in &r.checks {
                out.write_record([
                    self.suite.as_str(),
                    &r.index.to_string(),
                    &r.kind,
                    &r.label,
                    &r.digest,
                    &c.name,
                    &c.lhs.to_string(),
                    &c.rhs.to_string(),
                    c.rule.name(),
                    &c.tol.to_string(),
                    &c.pass.to_string(),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}
