//! Report assembly: every subcommand emits one JSON document with the
//! invoked command line, a content digest of its inputs, the seed when
//! randomness was involved, and a `results` object whose bytes are
//! reproducible for a fixed seed.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// One labelled input to a command. The digest covers content, never
/// paths, so moving a matrix file does not change the report identity.
pub enum Input<'a> {
    Text(&'a str),
    File(&'a Path),
}

pub fn digest_inputs(inputs: &[Input<'_>]) -> Result<String, String> {
    let mut h = Sha256::new();
    for input in inputs {
        let (tag, bytes) = match input {
            Input::Text(s) => ("text", s.as_bytes().to_vec()),
            Input::File(p) => {
                let bytes = fs::read(p)
                    .map_err(|e| format!("cannot read {}: {e}", p.display()))?;
                ("file", bytes)
            }
        };
        h.update(tag.as_bytes());
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(&bytes);
    }
    Ok(format!("sha256:{:x}", h.finalize()))
}

pub fn assemble(
    command: &str,
    inputs_digest: &str,
    seed: Option<u64>,
    wall_time_ms: u128,
    results: Value,
) -> Value {
    json!({
        "command": command,
        "inputs": inputs_digest,
        "seed": seed,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_time_ms": wall_time_ms,
        "results": results,
    })
}
