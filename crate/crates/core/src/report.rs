//! Pass/fail findings produced by the verification routines.

use serde::{Deserialize, Serialize};

/// How many violation messages are kept verbatim; the rest are only counted.
pub const MAX_LISTED: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Findings {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    pub messages: Vec<String>,
    /// Set when the check could not run because an earlier stage failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halted: Option<String>,
}

impl Findings {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), checked: 0, violations: 0, messages: Vec::new(), halted: None }
    }

    /// Records one instance; `msg` is only evaluated on failure.
    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) -> bool {
        self.checked += 1;
        if !ok {
            self.fail(msg());
        }
        ok
    }

    pub fn fail(&mut self, msg: String) {
        self.violations += 1;
        if self.messages.len() < MAX_LISTED {
            self.messages.push(msg);
        }
    }

    pub fn halted(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self { halted: Some(reason.into()), ..Self::new(name) }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.halted.is_none()
    }

    pub fn merge(&mut self, other: Findings) {
        if self.halted.is_none() {
            self.halted = other.halted.map(|r| format!("{}: {r}", other.name));
        }
        self.checked += other.checked;
        self.violations += other.violations;
        for m in other.messages {
            if self.messages.len() < MAX_LISTED {
                self.messages.push(format!("{}: {m}", other.name));
            }
        }
    }
}

impl std::fmt::Display for Findings {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(reason) = &self.halted {
            return write!(f, "{}: HALTED ({reason})", self.name);
        }
        let status = if self.passed() { "ok" } else { "FAILED" };
        write!(f, "{}: {status} ({} checked, {} violations)", self.name, self.checked, self.violations)?;
        for m in &self.messages {
            write!(f, "\n  {m}")?;
        }
        Ok(())
    }
}
