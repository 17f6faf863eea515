//! Run configuration: defaults, file loading and command-line overrides.

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::{Family, Window};
use crate::simulation::StudyConfig;

/// Fully resolved settings for one invocation. Everything that influences a
/// report is echoed into it; the output directory is not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub d: f64,
    #[serde(serialize_with = "ser_limit", deserialize_with = "de_limit")]
    pub u: f64,
    /// Families to fit or calibrate; candidate set of a study.
    pub families: Option<Vec<Family>>,
    /// Data-generating families of a study.
    pub parents: Option<Vec<Family>>,
    pub seed: u64,
    pub p_d: f64,
    pub p_u: f64,
    pub n: usize,
    pub replications: usize,
    /// Loss file for `fit` and `qq`.
    pub data: Option<String>,
    /// Family plotted by `qq`.
    pub family: Option<Family>,
    /// Write replication 0 of each parent as a loss file.
    pub export_data: bool,
    pub formats: Vec<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        let study = StudyConfig::default();
        RunConfig {
            d: study.window.d,
            u: study.window.u,
            families: None,
            parents: None,
            seed: study.seed,
            p_d: study.p_d,
            p_u: study.p_u,
            n: study.n,
            replications: study.replications,
            data: None,
            family: None,
            export_data: false,
            formats: vec![Format::Csv, Format::Json],
        }
    }
}

fn ser_limit<S: Serializer>(u: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if u.is_infinite() && *u > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*u)
    }
}

fn de_limit<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Limit {
        Num(f64),
        Text(String),
    }
    match Limit::deserialize(de)? {
        Limit::Num(v) => Ok(v),
        Limit::Text(t) => parse_limit(&t).map_err(serde::de::Error::custom),
    }
}

/// Policy limit from text; `inf` means no censoring.
pub fn parse_limit(s: &str) -> Result<f64> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "+inf" => Ok(f64::INFINITY),
        t => t.parse().map_err(|_| Error::Config(format!("cannot parse policy limit `{s}`"))),
    }
}

/// Comma-separated family list.
pub fn parse_families(s: &str) -> Result<Vec<Family>> {
    let fams = s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect::<Result<Vec<Family>>>()?;
    if fams.is_empty() {
        return Err(Error::Config("empty family list".into()));
    }
    Ok(fams)
}

/// Values given on the command line; `None` keeps the file or default value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub d: Option<f64>,
    pub u: Option<f64>,
    pub families: Option<Vec<Family>>,
    pub parents: Option<Vec<Family>>,
    pub seed: Option<u64>,
    pub p_d: Option<f64>,
    pub p_u: Option<f64>,
    pub n: Option<usize>,
    pub replications: Option<usize>,
    pub data: Option<String>,
    pub family: Option<Family>,
    pub export_data: bool,
    pub formats: Option<Vec<Format>>,
}

impl RunConfig {
    pub fn apply(&mut self, o: Overrides) {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = o.$f { self.$f = v; } )* };
        }
        set!(d, u, seed, p_d, p_u, n, replications, formats);
        if o.families.is_some() {
            self.families = o.families;
        }
        if o.parents.is_some() {
            self.parents = o.parents;
        }
        if o.data.is_some() {
            self.data = o.data;
        }
        if o.family.is_some() {
            self.family = o.family;
        }
        self.export_data |= o.export_data;
    }

    pub fn window(&self) -> Result<Window> {
        Window::new(self.d, self.u).map_err(|e| Error::Config(e.to_string()))
    }

    /// One-line JSON echo embedded in reports.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad JSON config: {e}")))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("bad TOML config: {e}")))
    }

    /// Load a config file, or the config embedded in an earlier report.
    ///
    /// Accepted: a CSV report (`# ltrc <cmd> config={...}` first line), a
    /// JSON report (`"config"` key), a JSON config, or a TOML config.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_any(&text, path.extension().and_then(|e| e.to_str()))
    }

    pub fn parse_any(text: &str, ext: Option<&str>) -> Result<Self> {
        let first = text.lines().next().unwrap_or("");
        if first.starts_with("# ltrc ") {
            let Some((_, json)) = first.split_once("config=") else {
                return Err(Error::Config("report header carries no config".into()));
            };
            return Self::from_json(json);
        }
        if ext == Some("toml") {
            return Self::from_toml(text);
        }
        if text.trim_start().starts_with('{') {
            let v: serde_json::Value =
                serde_json::from_str(text).map_err(|e| Error::Config(format!("bad JSON config: {e}")))?;
            let cfg = match v.get("config") {
                Some(inner) if v.get("command").is_some() => inner.clone(),
                _ => v,
            };
            return serde_json::from_value(cfg).map_err(|e| Error::Config(format!("bad JSON config: {e}")));
        }
        Self::from_toml(text)
    }

    /// Fill family defaults so the echoed config is complete.
    pub fn resolved(&self, study: bool) -> RunConfig {
        let mut cfg = self.clone();
        if study {
            cfg.families.get_or_insert_with(|| Family::STUDY_DEFAULT.to_vec());
            cfg.parents.get_or_insert_with(|| Family::STUDY_DEFAULT.to_vec());
        } else {
            cfg.families.get_or_insert_with(|| Family::ALL.to_vec());
        }
        cfg
    }

    pub fn resolved_families(&self, default: &[Family]) -> Vec<Family> {
        self.families.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn study_config(&self) -> Result<StudyConfig> {
        let cfg = StudyConfig {
            parents: self.parents.clone().unwrap_or_else(|| Family::STUDY_DEFAULT.to_vec()),
            candidates: self.resolved_families(&Family::STUDY_DEFAULT),
            window: self.window()?,
            p_d: self.p_d,
            p_u: self.p_u,
            n: self.n,
            replications: self.replications,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}
