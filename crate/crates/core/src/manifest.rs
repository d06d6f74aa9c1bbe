//! Run manifests: enough to re-derive every reported number.

use std::fmt::Write as _;
use std::time::Duration;

use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub seeds: Vec<u64>,
    /// (path, sha256) of every file read.
    pub inputs: Vec<(String, String)>,
    pub wall_time: Duration,
    /// One line per check the command made, e.g. `verified T9`.
    pub verdicts: Vec<String>,
}

impl RunManifest {
    pub fn new(command: impl IntoIterator<Item = String>) -> Self {
        RunManifest {
            command: command.into_iter().collect(),
            ..RunManifest::default()
        }
    }

    pub fn record_input(&mut self, path: &str, bytes: &[u8]) {
        self.inputs.push((path.to_string(), sha256_hex(bytes)));
    }

    pub fn verdict(&mut self, v: impl Into<String>) {
        self.verdicts.push(v.into());
    }

    /// `key value` lines; repeated keys keep their order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command {}", self.command.join(" "));
        let _ = writeln!(s, "version oricolor {}", env!("CARGO_PKG_VERSION"));
        for seed in &self.seeds {
            let _ = writeln!(s, "seed {seed}");
        }
        for (path, hash) in &self.inputs {
            let _ = writeln!(s, "input {path} sha256 {hash}");
        }
        let _ = writeln!(s, "wall_time {:.3}s", self.wall_time.as_secs_f64());
        for v in &self.verdicts {
            let _ = writeln!(s, "verdict {v}");
        }
        s
    }
}
