//! Versioned JSON reports.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct CommandInfo {
    pub name: String,
    pub args: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub input_hash: String,
    pub command: CommandInfo,
    pub result: serde_json::Value,
    pub inconclusive: bool,
    pub caveats: Vec<String>,
}

pub fn input_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Report {
    pub fn new(input: &str, name: &str, args: &[(&str, String)], result: impl Serialize) -> Result<Self> {
        Ok(Report {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.into(),
            input_hash: input_hash(input),
            command: CommandInfo {
                name: name.into(),
                args: args.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            },
            result: serde_json::to_value(result).map_err(|e| Error::Io(e.to_string()))?,
            inconclusive: false,
            caveats: Vec::new(),
        })
    }

    pub fn with_caveats(mut self, caveats: Vec<String>) -> Self {
        self.caveats = caveats;
        self
    }

    pub fn inconclusive(mut self, flag: bool) -> Self {
        self.inconclusive = flag;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}
