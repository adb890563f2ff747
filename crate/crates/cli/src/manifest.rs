use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

/// Everything needed to reproduce a run. The timestamp is left out of
/// stdout so identical invocations print identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<A: Serialize> {
    pub command: &'static str,
    pub flags: A,
    pub seed: Option<u64>,
    pub graph: Option<String>,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl<A: Serialize> RunManifest<A> {
    pub fn new(command: &'static str, flags: A, seed: Option<u64>, graph: Option<String>) -> Self {
        Self {
            command,
            flags,
            seed,
            graph,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: None,
        }
    }

    /// Writes the manifest with the current unix time to `path`.
    pub fn write_stamped(&mut self, path: &Path) -> std::io::Result<()> {
        self.timestamp = Some(
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        );
        let out = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(out, self)?;
        self.timestamp = None;
        Ok(())
    }
}
