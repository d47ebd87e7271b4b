//! Bundled and user scenario lookup.

use std::fs;
use std::path::{Path, PathBuf};

use crate::{CliError, CliResult};

/// Colon-separated list of extra scenario directories.
pub const SCENARIO_PATH_ENV: &str = "BIPHOTON_SCENARIO_PATH";

const BUNDLED: &[(&str, &str)] = &[
    (
        "fig2a_collinear_47pct",
        include_str!("../scenarios/fig2a_collinear_47pct.toml"),
    ),
    (
        "fig2b_noncollinear_10pct",
        include_str!("../scenarios/fig2b_noncollinear_10pct.toml"),
    ),
    ("fig3_tuning_curve", include_str!("../scenarios/fig3_tuning_curve.toml")),
    (
        "fig5_detected_snspd",
        include_str!("../scenarios/fig5_detected_snspd.toml"),
    ),
    ("fig6_detected_pmt", include_str!("../scenarios/fig6_detected_pmt.toml")),
    (
        "fig7_phase_and_compression",
        include_str!("../scenarios/fig7_phase_and_compression.toml"),
    ),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Bundled,
    User(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioEntry {
    pub name: String,
    pub source: Source,
}

/// A scenario document ready to parse.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub name: String,
    pub text: String,
    /// Directory for resolving relative paths inside the document.
    pub base_dir: Option<PathBuf>,
}

fn user_dirs() -> Vec<PathBuf> {
    std::env::var_os(SCENARIO_PATH_ENV)
        .map(|v| {
            std::env::split_paths(&v)
                .filter(|p| !p.as_os_str().is_empty())
                .collect()
        })
        .unwrap_or_default()
}

fn user_entries() -> Vec<ScenarioEntry> {
    let mut out: Vec<ScenarioEntry> = Vec::new();
    for dir in user_dirs() {
        let Ok(read) = fs::read_dir(&dir) else {
            log::warn!("cannot read scenario directory {}", dir.display());
            continue;
        };
        let mut files: Vec<PathBuf> = read
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "toml"))
            .collect();
        files.sort();
        for path in files {
            let Some(name) = path.file_stem().and_then(|s| s.to_str()).map(str::to_string) else {
                continue;
            };
            // earlier directories win
            if !out.iter().any(|e| e.name == name) {
                out.push(ScenarioEntry {
                    name,
                    source: Source::User(path),
                });
            }
        }
    }
    out
}

/// All scenarios by name. A user file shadows a bundled scenario of the same name.
pub fn list_scenarios() -> Vec<ScenarioEntry> {
    let user = user_entries();
    let mut all: Vec<ScenarioEntry> = BUNDLED
        .iter()
        .filter(|(name, _)| !user.iter().any(|u| u.name == *name))
        .map(|(name, _)| ScenarioEntry {
            name: name.to_string(),
            source: Source::Bundled,
        })
        .collect();
    all.extend(user);
    all.sort_by(|a, b| a.name.cmp(&b.name));
    all
}

fn read_file(path: &Path) -> CliResult<Resolved> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    Ok(Resolved {
        name: path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("scenario")
            .to_string(),
        text,
        base_dir: path.parent().map(Path::to_path_buf),
    })
}

/// A path to an existing file, or a scenario name.
pub fn resolve(arg: &str) -> CliResult<Resolved> {
    let path = Path::new(arg);
    if path.is_file() {
        return read_file(path);
    }
    if let Some(entry) = user_entries().into_iter().find(|e| e.name == arg) {
        if let Source::User(p) = entry.source {
            return read_file(&p);
        }
    }
    BUNDLED
        .iter()
        .find(|(name, _)| *name == arg)
        .map(|(name, text)| Resolved {
            name: name.to_string(),
            text: text.to_string(),
            base_dir: None,
        })
        .ok_or_else(|| CliError::Schema(format!("no scenario file or bundled scenario named `{arg}`")))
}
