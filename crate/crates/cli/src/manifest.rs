use std::path::Path;
use std::time::Duration;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct FileHash {
    pub path: String,
    pub sha256: String,
}

/// What a run read and wrote. Re-running the recorded arguments reproduces the
/// output hashes; only `wall_time_s` varies.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Vec<String>,
    pub inputs: Vec<FileHash>,
    pub tool_version: String,
    pub outputs: Vec<FileHash>,
    pub wall_time_s: f64,
    pub exit_code: u8,
}

impl RunManifest {
    pub fn new(command: &str, args: Vec<String>, inputs: Vec<FileHash>, outputs: Vec<FileHash>, wall: Duration, exit_code: u8) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters: args,
            inputs,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs,
            wall_time_s: wall.as_secs_f64(),
            exit_code,
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut s = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        s.push('\n');
        std::fs::write(path, s)
    }
}
