use std::path::{Path, PathBuf};

use serde::Serialize;
use thermest_core::rng::MIXER_ID;

/// Version of the output formats written by this binary.
pub const FORMAT_VERSION: &str = "1";

/// Reproducibility record embedded in every summary. Deliberately free of
/// wall time, thread count and command line so that summaries are
/// byte-identical across runs; those go to [`RunRecord`].
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub format_version: &'static str,
    pub tool_version: &'static str,
    pub mixer: &'static str,
    pub stream_layout: &'static str,
    pub seed: u64,
    pub config: C,
}

impl<C: Serialize> RunManifest<C> {
    pub fn new(seed: u64, config: C) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            mixer: MIXER_ID,
            stream_layout: "trial t uses stream index t",
            seed,
            config,
        }
    }
}

/// Run-specific record written next to an output file.
#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub format_version: &'static str,
    pub command_line: String,
    pub threads: usize,
    pub wall_time_s: f64,
    pub output: String,
}

impl RunRecord {
    pub fn new(output: &Path, threads: usize, wall_time_s: f64) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            command_line: std::env::args().collect::<Vec<_>>().join(" "),
            threads,
            wall_time_s,
            output: output.display().to_string(),
        }
    }

    pub fn sidecar_path(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }
}
