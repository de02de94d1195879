//! Reports, their rendering, and the on-disk result cache.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetEcho {
    pub elements: usize,
    pub steps: u64,
    pub seconds: u64,
}

/// What a command prints and stores. Identical inputs and budgets give
/// identical bytes; wall time is only included on request.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub args: Value,
    pub inputs_digest: String,
    pub budget: BudgetEcho,
    pub seed: u64,
    pub verdict: String,
    pub exit_code: i32,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "inputs: {}", self.inputs_digest);
        let _ = writeln!(
            out,
            "budget: elements={} steps={} seconds={}",
            self.budget.elements, self.budget.steps, self.budget.seconds
        );
        let _ = writeln!(out, "verdict: {}", self.verdict);
        text_value(&mut out, &self.result, 0, None);
        if let Some(ms) = self.wall_ms {
            let _ = writeln!(out, "wall time: {ms} ms");
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Number(_))) => {
            Some(format!("[{}]", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn text_value(out: &mut String, v: &Value, depth: usize, key: Option<&str>) {
    let pad = "  ".repeat(depth);
    let label = key.map(|k| format!("{k}: ")).unwrap_or_default();
    if let Some(s) = scalar(v) {
        let _ = writeln!(out, "{pad}{label}{s}");
        return;
    }
    match v {
        Value::Array(items) => {
            let _ = writeln!(out, "{pad}{}", if label.is_empty() { "-".to_string() } else { label.trim_end().to_string() });
            for x in items {
                if scalar(x).is_none() {
                    let _ = writeln!(out, "{pad}  -");
                    text_value(out, x, depth + 2, None);
                } else {
                    text_value(out, x, depth + 1, None);
                }
            }
        }
        Value::Object(map) => {
            let inner = if label.is_empty() {
                depth
            } else {
                let _ = writeln!(out, "{pad}{}", label.trim_end());
                depth + 1
            };
            for (k, x) in map {
                text_value(out, x, inner, Some(k));
            }
        }
        _ => unreachable!(),
    }
}

/// Content-addressed report store: one file per key, written through a
/// temporary file and a rename.
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Cache> {
        std::fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    pub fn key(command: &str, args: &Value, digest: &str, budget: &BudgetEcho, seed: u64) -> String {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        h.update([0]);
        h.update(args.to_string().as_bytes());
        h.update([0]);
        h.update(digest.as_bytes());
        h.update([0]);
        h.update(serde_json::to_string(budget).expect("budget serializes").as_bytes());
        h.update(seed.to_le_bytes());
        hex::encode(h.finalize())
    }

    pub fn get(&self, key: &str) -> Option<Report> {
        let text = std::fs::read_to_string(self.dir.join(format!("{key}.json"))).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn put(&self, key: &str, report: &Report) -> Result<()> {
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(report.to_json().as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, self.dir.join(format!("{key}.json")))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        Report {
            command: "dominion".into(),
            args: json!({ "sub": "0,7" }),
            inputs_digest: "ab".into(),
            budget: BudgetEcho { elements: 10, steps: 20, seconds: 3 },
            seed: 0,
            verdict: "refuted".into(),
            exit_code: 1,
            result: json!({ "dominion": [0, 7, 23], "extra": [23], "witnesses": [{ "g": [1, 2] }] }),
            wall_ms: None,
        }
    }

    #[test]
    fn json_round_trips_and_omits_wall_time() {
        let r = sample();
        let text = r.to_json();
        assert!(text.ends_with("}\n"));
        assert!(!text.contains("wall_ms"));
        assert_eq!(serde_json::from_str::<Report>(&text).unwrap(), r);
        let timed = Report { wall_ms: Some(5), ..r };
        assert!(timed.to_json().contains("\"wall_ms\": 5"));
    }

    #[test]
    fn text_rendering() {
        let text = sample().to_text();
        let want = "command: dominion\ninputs: ab\nbudget: elements=10 steps=20 seconds=3\nverdict: refuted\n\
                    dominion: [0, 7, 23]\nextra: [23]\nwitnesses:\n  -\n    g: [1, 2]\n";
        assert_eq!(text, want);
    }

    #[test]
    fn cache_keys_and_round_trip() {
        let dir = std::env::temp_dir().join(format!("ua-cache-test-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let cache = Cache::open(&dir).unwrap();
        let r = sample();
        let key = Cache::key(&r.command, &r.args, &r.inputs_digest, &r.budget, 0);
        assert_eq!(key.len(), 64);
        assert_eq!(key, Cache::key(&r.command, &r.args, &r.inputs_digest, &r.budget, 0));
        assert_ne!(key, Cache::key(&r.command, &r.args, &r.inputs_digest, &r.budget, 1));
        let other = BudgetEcho { steps: 21, ..r.budget.clone() };
        assert_ne!(key, Cache::key(&r.command, &r.args, &r.inputs_digest, &other, 0));
        assert!(cache.get(&key).is_none());
        cache.put(&key, &r).unwrap();
        assert_eq!(cache.get(&key), Some(r));
        let leftovers = std::fs::read_dir(&dir).unwrap().filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().ends_with(".tmp")).count();
        assert_eq!(leftovers, 0);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
