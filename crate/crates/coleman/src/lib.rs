//! Verification suites, JSON reports and the command-line front end for
//! [`coleman_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod report;
pub mod suites;
