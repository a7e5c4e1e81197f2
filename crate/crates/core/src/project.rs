//! Project configuration and loading.
//!
//! A project file has one `key = value` per line; `#` starts a comment.
//! Relative paths are resolved against the directory of the project file.
//!
//! ```text
//! ontology     = ontology.nbo
//! rules        = rules.nbr
//! sources      = sources.nbs
//! scene        = scenes/scenario-1.nbx      # repeatable
//! expectations = expectations.nbe           # optional
//! output_dir   = out
//! all_traces   = false                      # optional
//! behavior     = anhalten_in                # optional, comma separated
//! ```

use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ontology::{parse_ontology, parse_scene, Ontology, OntologyError, Scene, SceneError};
use crate::provenance::{load_sources, Ledger, LedgerError};
use crate::rules::{parse_rules, RuleCatalog, RuleError};
use crate::verify::{parse_expectations, Expectation, ExpectationError};

pub const DEFAULT_BEHAVIOR: &str = "anhalten_in";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectConfig {
    pub ontology_path: PathBuf,
    pub rules_path: PathBuf,
    pub sources_path: PathBuf,
    pub scenes: Vec<PathBuf>,
    pub expectations_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub record_all_traces: bool,
    /// Object properties that make up the required behavior of a scene.
    pub behavior: BTreeSet<String>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: {message}")]
    Syntax { path: PathBuf, line: usize, message: String },
    #[error("{path}: missing key `{key}`")]
    MissingKey { path: PathBuf, key: &'static str },
    #[error("{path}: {key} file {file} does not exist")]
    Unresolved { path: PathBuf, key: &'static str, file: PathBuf },
}

/// A file of the project failed to parse.
#[derive(Debug, Error)]
pub enum FileError {
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error(transparent)]
    Sources(#[from] LedgerError),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Expectations(#[from] ExpectationError),
}

#[derive(Debug, Error)]
pub enum ProjectError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: FileError },
}

impl ProjectConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text, path)
    }

    /// Parses config text; `path` locates the file for relative paths and
    /// error messages. Every referenced input file has to exist.
    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let base = path.parent().unwrap_or(Path::new("."));
        let syntax = |line: usize, message: String| ConfigError::Syntax { path: path.to_path_buf(), line, message };

        let mut ontology = None;
        let mut rules = None;
        let mut sources = None;
        let mut scenes = Vec::new();
        let mut expectations = None;
        let mut output_dir = None;
        let mut record_all_traces = false;
        let mut behavior = None;

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(syntax(line_no, format!("expected `key = value`, found `{line}`")));
            };
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(syntax(line_no, format!("empty value for `{key}`")));
            }
            let set_once = |slot: &mut Option<PathBuf>| {
                if slot.is_some() {
                    return Err(syntax(line_no, format!("`{key}` given twice")));
                }
                *slot = Some(base.join(value));
                Ok(())
            };
            match key {
                "ontology" => set_once(&mut ontology)?,
                "rules" => set_once(&mut rules)?,
                "sources" => set_once(&mut sources)?,
                "expectations" => set_once(&mut expectations)?,
                "output_dir" => set_once(&mut output_dir)?,
                "scene" => scenes.push(base.join(value)),
                "all_traces" => {
                    record_all_traces = match value {
                        "true" => true,
                        "false" => false,
                        _ => return Err(syntax(line_no, format!("expected `true` or `false`, found `{value}`"))),
                    }
                }
                "behavior" => {
                    let set: BTreeSet<String> =
                        value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
                    behavior = Some(set);
                }
                _ => return Err(syntax(line_no, format!("unknown key `{key}`"))),
            }
        }

        let missing = |key| ConfigError::MissingKey { path: path.to_path_buf(), key };
        let config = ProjectConfig {
            ontology_path: ontology.ok_or_else(|| missing("ontology"))?,
            rules_path: rules.ok_or_else(|| missing("rules"))?,
            sources_path: sources.ok_or_else(|| missing("sources"))?,
            scenes,
            expectations_path: expectations,
            output_dir: output_dir.ok_or_else(|| missing("output_dir"))?,
            record_all_traces,
            behavior: behavior.unwrap_or_else(|| BTreeSet::from([DEFAULT_BEHAVIOR.to_string()])),
        };

        let inputs =
            [("ontology", &config.ontology_path), ("rules", &config.rules_path), ("sources", &config.sources_path)];
        let scenes = config.scenes.iter().map(|s| ("scene", s));
        let expectations = config.expectations_path.iter().map(|e| ("expectations", e));
        for (key, file) in inputs.into_iter().chain(scenes).chain(expectations) {
            if !file.is_file() {
                return Err(ConfigError::Unresolved { path: path.to_path_buf(), key, file: file.clone() });
            }
        }
        Ok(config)
    }
}

/// Every input of a project, parsed.
#[derive(Debug, Clone)]
pub struct Project {
    pub config: ProjectConfig,
    pub ontology: Ontology,
    pub catalog: RuleCatalog,
    pub ledger: Ledger,
    pub scenes: Vec<Scene>,
    pub expectations: Vec<Expectation>,
    /// Text of the sources file, for byte-level quote checks.
    pub sources_text: String,
}

fn read(path: &Path) -> Result<String, ProjectError> {
    fs::read_to_string(path).map_err(|source| ProjectError::Io { path: path.to_path_buf(), source })
}

fn parsed<T, E: Into<FileError>>(path: &Path, result: Result<T, E>) -> Result<T, ProjectError> {
    result.map_err(|e| ProjectError::Parse { path: path.to_path_buf(), source: e.into() })
}

impl Project {
    pub fn open(path: &Path) -> Result<Self, ProjectError> {
        Self::load(ProjectConfig::load(path)?)
    }

    pub fn load(config: ProjectConfig) -> Result<Self, ProjectError> {
        let ontology = parsed(&config.ontology_path, parse_ontology(&read(&config.ontology_path)?))?;
        let catalog = parsed(&config.rules_path, parse_rules(&read(&config.rules_path)?))?;
        let sources_text = read(&config.sources_path)?;
        let ledger = parsed(&config.sources_path, load_sources(&sources_text))?;
        let mut scenes = Vec::new();
        for path in &config.scenes {
            scenes.push(parsed(path, parse_scene(&read(path)?))?);
        }
        let expectations = match &config.expectations_path {
            Some(path) => parsed(path, parse_expectations(&read(path)?))?,
            None => Vec::new(),
        };
        Ok(Project { config, ontology, catalog, ledger, scenes, expectations, sources_text })
    }

    pub fn scene(&self, id: &str) -> Option<&Scene> {
        self.scenes.iter().find(|s| s.scenario_id == id)
    }
}
