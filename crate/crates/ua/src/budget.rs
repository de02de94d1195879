use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Limits for the exhaustive searches. Every search checks them cooperatively
/// and reports exhaustion instead of returning a truncated answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_elements: usize,
    pub max_steps: u64,
    pub wall_time: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_elements: 1_000_000,
            max_steps: 2_000_000_000,
            wall_time: Duration::from_secs(120),
        }
    }
}

impl SearchBudget {
    pub fn new(max_elements: usize, max_steps: u64, wall_time: Duration) -> Result<Self> {
        if max_elements == 0 || max_steps == 0 || wall_time.is_zero() {
            return Err(Error::Invalid("budget limits must be positive".into()));
        }
        Ok(SearchBudget {
            max_elements,
            max_steps,
            wall_time,
        })
    }

    pub fn with_elements(mut self, n: usize) -> Self {
        self.max_elements = n;
        self
    }

    pub fn with_steps(mut self, n: u64) -> Self {
        self.max_steps = n;
        self
    }

    pub fn meter(&self) -> Meter {
        Meter::new(*self)
    }
}

/// Shared step counter and clock for one search.
#[derive(Debug)]
pub struct Meter {
    budget: SearchBudget,
    start: Instant,
    steps: AtomicU64,
}

impl Meter {
    pub fn new(budget: SearchBudget) -> Self {
        Meter {
            budget,
            start: Instant::now(),
            steps: AtomicU64::new(0),
        }
    }

    pub fn budget(&self) -> &SearchBudget {
        &self.budget
    }

    pub fn steps(&self) -> u64 {
        self.steps.load(Ordering::Relaxed)
    }

    pub fn tick(&self, n: u64) -> Result<()> {
        let before = self.steps.fetch_add(n, Ordering::Relaxed);
        let after = before + n;
        if after > self.budget.max_steps {
            return Err(Error::Budget(format!(
                "step limit {} reached",
                self.budget.max_steps
            )));
        }
        if before >> 12 != after >> 12 && self.start.elapsed() > self.budget.wall_time {
            return Err(Error::Budget(format!(
                "wall time {:?} reached",
                self.budget.wall_time
            )));
        }
        Ok(())
    }

    pub fn check_elements(&self, count: usize) -> Result<()> {
        if count > self.budget.max_elements {
            Err(Error::Budget(format!(
                "element limit {} reached",
                self.budget.max_elements
            )))
        } else {
            Ok(())
        }
    }
}

/// Three-valued outcome of a decision procedure. Proven and Refuted carry
/// witnesses that can be re-checked independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict<P, R> {
    Proven(P),
    Refuted(R),
    Unknown(String),
}

impl<P, R> Verdict<P, R> {
    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn proven(self) -> Option<P> {
        match self {
            Verdict::Proven(p) => Some(p),
            _ => None,
        }
    }

    pub fn refuted(self) -> Option<R> {
        match self {
            Verdict::Refuted(r) => Some(r),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Proven(_) => "proven",
            Verdict::Refuted(_) => "refuted",
            Verdict::Unknown(_) => "unknown",
        }
    }

    /// Turns a budget error into `Unknown`; other errors pass through.
    pub fn from_result(r: Result<Verdict<P, R>>) -> Result<Verdict<P, R>> {
        match r {
            Err(Error::Budget(msg)) => Ok(Verdict::Unknown(msg)),
            other => other,
        }
    }
}
