use std::path::PathBuf;

use hopfield::HopfieldError;
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{source} ({context})")]
    Compute {
        context: String,
        #[source]
        source: HopfieldError,
    },
    #[error("cannot write {path}: {message}")]
    Output { path: PathBuf, message: String },
}

impl CliError {
    pub fn compute(context: impl Into<String>, source: HopfieldError) -> Self {
        CliError::Compute {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute { .. } | CliError::Output { .. } => 3,
        }
    }

    /// One-line JSON record written to stderr on failure.
    pub fn record(&self) -> serde_json::Value {
        let (kind, detail) = match self {
            CliError::Config(_) => ("config", None),
            CliError::Compute { source, .. } => ("computation", Some(variant_name(source))),
            CliError::Output { .. } => ("output", None),
        };
        json!({
            "error": kind,
            "variant": detail,
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
    }
}

fn variant_name(e: &HopfieldError) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}
