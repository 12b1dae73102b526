//! Run parameters, read from a JSON file and overridden by command-line flags.

use std::path::Path;

use coleman_core::padic::Zpn;
use serde::{Deserialize, Serialize};

use crate::error::{AppError, AppResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub p: u64,
    pub n: usize,
    pub d: usize,
    #[serde(rename = "N")]
    pub prec: u32,
    pub r: u32,
    pub t: u32,
    pub m: u32,
    pub k: u32,
    pub seed: u64,
    /// Cap on enumeration steps.
    pub budget: u64,
    /// Sample count for the randomized suites.
    pub samples: u64,
    pub suites: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            p: 3,
            n: 2,
            d: 1,
            prec: 6,
            r: 1,
            t: 2,
            m: 1,
            k: 0,
            seed: 0,
            budget: 10_000_000,
            samples: 100,
            suites: vec!["all".into()],
        }
    }
}

impl SuiteConfig {
    pub fn from_file(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self) -> AppResult<()> {
        let usage = |s: &str| Err(AppError::Usage(s.into()));
        Zpn::new(self.p, self.prec).map_err(|e| AppError::Usage(format!("p = {}, N = {}: {e}", self.p, self.prec)))?;
        if self.n == 0 || self.d == 0 {
            return usage("n and d must be positive");
        }
        if self.r == 0 || self.r >= self.prec {
            return usage("need 1 <= r < N");
        }
        if self.t == 0 {
            return usage("t must be positive");
        }
        Ok(())
    }

    /// The radii constraint of the tube suite.
    pub fn validate_radii(&self) -> AppResult<()> {
        if !(self.k <= self.m && self.m < self.t) {
            return Err(AppError::Usage("need 0 <= k <= m < t".into()));
        }
        if self.t + 1 >= self.prec {
            return Err(AppError::Usage("need t + 1 < N".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SuiteConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_triples() {
        let c = SuiteConfig {
            k: 2,
            m: 1,
            ..Default::default()
        };
        assert!(c.validate().is_ok());
        assert!(c.validate_radii().is_err());
        let c = SuiteConfig { p: 4, ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let c: SuiteConfig = serde_json::from_str(r#"{"p":5,"N":4,"suites":["branching"]}"#).unwrap();
        assert_eq!((c.p, c.prec, c.n), (5, 4, 2));
        assert!(serde_json::from_str::<SuiteConfig>(r#"{"q":1}"#).is_err());
    }
}
