use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use fflab::LabError;

use crate::config::LabConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    /// Rational arithmetic over a complete enumeration.
    Exact,
    /// Exact, but only up to a degree or resolution cap.
    SliceBounded,
    /// Floating point or sampled.
    Heuristic,
}

impl Exactness {
    fn as_str(self) -> &'static str {
        match self {
            Exactness::Exact => "exact",
            Exactness::SliceBounded => "slice-bounded",
            Exactness::Heuristic => "heuristic",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub check: String,
    pub class: Exactness,
    /// None for informational records.
    pub pass: Option<bool>,
    pub value: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Constant {
    pub value: String,
    /// Module that defines it.
    pub source: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config: LabConfig,
    pub records: Vec<Record>,
    pub constants: BTreeMap<String, Constant>,
    pub warnings: Vec<String>,
    pub pass: bool,
    /// Wall time, only with --timing; reports stay byte-identical otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str, config: &LabConfig) -> RunReport {
        RunReport {
            command: command.into(),
            config: config.clone(),
            records: Vec::new(),
            constants: BTreeMap::new(),
            warnings: Vec::new(),
            pass: true,
            timing_ms: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, class: Exactness, pass: bool, value: impl Serialize) {
        self.pass &= pass;
        self.records.push(Record { check: name.into(), class, pass: Some(pass), value: to_value(value) });
    }

    pub fn info(&mut self, name: impl Into<String>, class: Exactness, value: impl Serialize) {
        self.records.push(Record { check: name.into(), class, pass: None, value: to_value(value) });
    }

    pub fn constant(&mut self, name: &str, value: impl Into<String>, source: &str) {
        self.constants.insert(name.into(), Constant { value: value.into(), source: source.into() });
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per record: check, class, verdict, compact JSON value.
    pub fn to_tsv(&self) -> String {
        let mut s = format!("# command\t{}\n", self.command);
        for (k, c) in &self.constants {
            s.push_str(&format!("# constant\t{k}\t{}\t{}\n", c.value, c.source));
        }
        for w in &self.warnings {
            s.push_str(&format!("# warning\t{w}\n"));
        }
        s.push_str("check\tclass\tpass\tvalue\n");
        for r in &self.records {
            let pass = match r.pass {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "-",
            };
            s.push_str(&format!("{}\t{}\t{pass}\t{}\n", r.check, r.class.as_str(), r.value));
        }
        s.push_str(&format!("# verdict\t{}\n", if self.pass { "PASS" } else { "FAIL" }));
        if let Some(ms) = self.timing_ms {
            s.push_str(&format!("# timing_ms\t{ms}\n"));
        }
        s
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("record serializes")
}

/// 2 for configuration problems, 3 when precision runs out, 1 otherwise.
pub fn error_exit_code(e: &LabError) -> i32 {
    match e {
        LabError::Config(_) | LabError::Parse(_) => 2,
        LabError::PrecisionInsufficient(_) | LabError::Undecided(_) => 3,
        _ => 1,
    }
}
