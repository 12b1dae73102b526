//! Counters for exhaustive and sampled checks.

use alloc::string::String;
use alloc::vec::Vec;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checked: u64,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Count one check and record it if `ok` is false.
    pub fn check(&mut self, ok: bool, input: impl FnOnce() -> String, expected: impl FnOnce() -> String, got: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(Failure {
                input: input(),
                expected: expected(),
                got: got(),
            });
        }
    }

    pub fn fail(&mut self, input: String, expected: String, got: String) {
        self.checked += 1;
        self.failures.push(Failure { input, expected, got });
    }

    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}
