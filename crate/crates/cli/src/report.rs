//! Output envelope and exit codes.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use sts_core::Error;

pub const SCHEMA: &str = "stsdesign/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Failed = 1,
    Usage = 2,
    Inconclusive = 3,
}

/// A finished command: the text report, its JSON twin and the exit status.
pub struct Report {
    pub command: &'static str,
    pub text: String,
    pub json: Value,
    pub exit: Exit,
}

impl Report {
    pub fn new(command: &'static str, text: impl Into<String>, data: impl Serialize) -> Self {
        Report {
            command,
            text: text.into(),
            json: serde_json::to_value(data).expect("report data serialises"),
            exit: Exit::Ok,
        }
    }

    pub fn exit(mut self, exit: Exit) -> Self {
        self.exit = exit;
        self
    }

    pub fn envelope(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "status": match self.exit {
                Exit::Ok => "ok",
                Exit::Failed => "failed",
                Exit::Usage => "usage",
                Exit::Inconclusive => "inconclusive",
            },
            "result": self.json,
        })
    }
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn usage(msg: impl fmt::Display) -> Self {
        CliError { exit: Exit::Usage, error: anyhow::anyhow!("{msg}") }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl From<anyhow::Error> for CliError {
    fn from(error: anyhow::Error) -> Self {
        let exit = match error.downcast_ref::<Error>() {
            Some(
                Error::NotSteiner(_)
                | Error::CertificateRefused(_)
                | Error::Colouring(_)
                | Error::Factorisation(_)
                | Error::DuplicateTriple(_)
                | Error::PointOutOfRange { .. }
                | Error::StepLimit { .. },
            ) => Exit::Failed,
            _ => Exit::Usage,
        };
        CliError { exit, error }
    }
}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        anyhow::Error::from(error).into()
    }
}

pub type CliResult = Result<Report, CliError>;
