//! Run reports: every subcommand emits its inputs, outputs and a list of
//! self-checks, as aligned text or as a single JSON object on stdout.

use serde_json::{json, Map, Value};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: Vec<Check>,
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, inputs: Value) -> Self {
        RunReport {
            command: command.into(),
            inputs,
            outputs: Value::Null,
            checks: Vec::new(),
            seed: None,
        }
    }

    /// Record a comparison; both sides are kept so a failure is diagnosable.
    pub fn check(&mut self, name: &str, lhs: Value, rhs: Value) {
        self.checks.push(Check {
            name: name.to_string(),
            pass: lhs == rhs,
            lhs,
            rhs,
        });
    }

    pub fn check_bool(&mut self, name: &str, condition: bool) {
        self.check(name, json!(condition), json!(true));
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn to_value(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "pass": c.pass,
                    "lhs": c.lhs,
                    "rhs": c.rhs,
                })
            })
            .collect();
        let mut map = Map::new();
        map.insert("command".into(), json!(self.command));
        map.insert("inputs".into(), self.inputs.clone());
        map.insert("outputs".into(), self.outputs.clone());
        map.insert("checks".into(), Value::Array(checks));
        if let Some(seed) = self.seed {
            map.insert("seed".into(), json!(seed));
        }
        Value::Object(map)
    }

    /// Compact JSON with sorted keys; parsing and re-emitting the string
    /// reproduces it byte for byte.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_value()).expect("report serializes")
    }

    pub fn render_human(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if self.inputs != Value::Null {
            let _ = writeln!(out, "inputs:  {}", self.inputs);
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed:    {seed}");
        }
        match &self.outputs {
            Value::Object(map) => {
                for (k, v) in map {
                    let _ = writeln!(out, "  {k}: {}", render(v));
                }
            }
            Value::Null => {}
            other => {
                let _ = writeln!(out, "  {}", render(other));
            }
        }
        for c in &self.checks {
            if c.pass {
                let _ = writeln!(out, "check {}: PASS", c.name);
            } else {
                let _ = writeln!(out, "check {}: FAIL  lhs={} rhs={}", c.name, c.lhs, c.rhs);
            }
        }
        out
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
