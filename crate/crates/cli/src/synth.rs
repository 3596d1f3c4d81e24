//! `synth`: write a synthetic corpus and the resolved config.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use citewin_core::corpus::{CITATIONS_FILE, JOURNALS_FILE, PUBLICATIONS_FILE};
use citewin_core::{generate_corpus, preset, PresetName, SynthConfig};
use serde::Deserialize;

use crate::output::write_all_atomic;
use crate::{CliError, CliResult};

pub const CONFIG_FILE: &str = "config.json";

#[derive(Debug, Clone, clap::Args)]
pub struct SynthArgs {
    /// JSON file: either a full config or `{"preset": NAME, "divisor": N}`.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Short form naming a built-in preset.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetRequest {
    pub preset: String,
    #[serde(default = "default_divisor")]
    pub divisor: u64,
    pub seed: Option<u64>,
    /// Mean citations per publication over the horizon.
    pub mean_citations: Option<u64>,
}

fn default_divisor() -> u64 {
    1
}

fn parse_as<T: for<'de> Deserialize<'de>>(text: &str) -> CliResult<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Domain(format!("invalid config: {path}: {}", e.into_inner()))
    })
}

/// Parses a config document into a validated [`SynthConfig`].
pub fn resolve_config(text: &str, seed: Option<u64>) -> CliResult<SynthConfig> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Domain(format!("invalid config: {e}")))?;
    let mut config = if value.get("preset").is_some() {
        let request: PresetRequest = parse_as(text)?;
        let name: PresetName = request.preset.parse()?;
        let mut config = preset(name, request.divisor)?;
        if let Some(mean) = request.mean_citations {
            config = config.with_mean_citations(mean);
        }
        if let Some(seed) = request.seed {
            config.seed = seed;
        }
        config
    } else {
        parse_as::<SynthConfig>(text)?
    };
    if let Some(seed) = seed {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

pub fn run(args: &SynthArgs, out: &mut dyn Write) -> CliResult {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", args.config.display())))?;
    let config = resolve_config(&text, args.seed)?;
    write_corpus(&config, &args.out)?;
    writeln!(
        out,
        "wrote {} publications, {} journals, {} citation events to {}",
        config.n_publications,
        config.n_journals,
        config.total_citations(),
        args.out.display()
    )?;
    Ok(())
}

pub fn write_corpus(config: &SynthConfig, dir: &Path) -> CliResult {
    let corpus = generate_corpus(config)?;
    let mut pubs = Vec::new();
    let mut journals = Vec::new();
    let mut cites = Vec::new();
    let io = |e: csv::Error| CliError::Io(e.to_string());
    corpus.write_publications(&mut pubs).map_err(io)?;
    corpus.write_journals(&mut journals).map_err(io)?;
    corpus.write_citations(&mut cites).map_err(io)?;
    let mut json = serde_json::to_vec_pretty(config).map_err(|e| CliError::Io(e.to_string()))?;
    json.push(b'\n');
    write_all_atomic(
        dir,
        &[
            (PUBLICATIONS_FILE, pubs),
            (JOURNALS_FILE, journals),
            (CITATIONS_FILE, cites),
            (CONFIG_FILE, json),
        ],
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_request_resolves() {
        let c = resolve_config(r#"{"preset": "fast_physics_like", "divisor": 100, "seed": 42}"#, None).unwrap();
        assert_eq!(c.seed, 42);
        assert_eq!(c.n_publications, 80 + 20 + 24);
        let c = resolve_config(r#"{"preset": "slow_math_like"}"#, Some(9)).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.n_publications, 10022 + 3938 + 3286);
    }

    #[test]
    fn unknown_preset_is_a_domain_error() {
        let err = resolve_config(r#"{"preset": "medium"}"#, None).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn negative_volume_names_the_field() {
        let mut config = preset(PresetName::FastPhysicsLike, 100).unwrap();
        config.citations_per_year[0] = 0;
        let text = serde_json::to_string(&config).unwrap().replacen("\"citations_per_year\":[0", "\"citations_per_year\":[-3", 1);
        let err = resolve_config(&text, None).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("citations_per_year[0]"), "{err}");
    }

    #[test]
    fn semantic_problems_are_listed() {
        let mut config = preset(PresetName::FastPhysicsLike, 100).unwrap();
        config.n_years = 5;
        let err = resolve_config(&serde_json::to_string(&config).unwrap(), None).unwrap_err();
        assert!(err.to_string().contains("citations_per_year: has 8 entries"), "{err}");
    }
}
