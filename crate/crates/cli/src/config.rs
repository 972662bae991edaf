//! The JSON run configuration and its resolution into a concrete system.

use std::fs;
use std::path::{Path, PathBuf};

use rauzy::presets::{self, Preset};
use rauzy::renorm::{CutoffRule, PairSelector};
use rauzy::substitution::{Letter, A, B};
use rauzy::{FieldVal, QuadInt, SubstitutionSystem};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorBy {
    #[default]
    Pair,
    Parity,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlotOptions {
    pub width: u32,
    pub height: u32,
    pub point_size: f64,
    pub axes: bool,
    pub color_by: ColorBy,
    /// Cycled per class; parity uses the first two (even, odd).
    pub colors: Vec<String>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            width: 960,
            height: 600,
            point_size: 1.2,
            axes: true,
            color_by: ColorBy::Pair,
            colors: ["#1f5fbf", "#d0342c", "#2a9d3f", "#8c4fb8", "#e08a1e"]
                .map(String::from)
                .to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Largest admissible |renormalised value − patch frequency|.
    pub oracle_max: f64,
    /// Admissible median of the same over informative rows.
    pub oracle_median: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            oracle_max: 5e-3,
            oracle_median: 1e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleOptions {
    pub distances: usize,
    /// Distances are drawn from tiles at most this many tiles apart.
    pub max_span: usize,
    pub rng_seed: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            distances: 200,
            max_span: 40,
            rng_seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckOptions {
    /// Patch distances checked for exact residuals, besides the core.
    pub residual_distances: usize,
    /// Covariogram samples run through the property suite.
    pub property_samples: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            residual_distances: 10_000,
            property_samples: 20_000,
        }
    }
}

/// Negative-control fixture: overwrite one core value before checking.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Corruption {
    pub pair: String,
    pub z: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// Preset name or rule text `x -> word; y -> word`.
    pub substitution: String,
    /// Legal two-letter seed `x|y`; defaults to the preset seed.
    pub seed: Option<String>,
    /// `minimal`, `inflated` or an exact radius such as `3+2*sqrt2`.
    pub cutoff: Option<String>,
    pub patch_level: Option<usize>,
    pub sample_cap: usize,
    pub output_dir: PathBuf,
    /// Correlations written by `covariogram`: `total`, `aa`, `ab`, `ba`, `bb`.
    pub pairs: Vec<String>,
    pub window_depth: Option<usize>,
    /// Memory guard for window approximants and patches.
    pub point_cap: usize,
    /// Return-module shift for `hausdorff`.
    pub shift: Option<String>,
    pub oracle: OracleOptions,
    pub check: CheckOptions,
    pub plot: PlotOptions,
    pub tolerance: Tolerances,
    pub corrupt_core: Option<Corruption>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            substitution: "ssm".into(),
            seed: None,
            cutoff: None,
            patch_level: None,
            sample_cap: 200_000,
            output_dir: PathBuf::from("out"),
            pairs: vec!["total".into()],
            window_depth: None,
            point_cap: 20_000_000,
            shift: None,
            oracle: OracleOptions::default(),
            check: CheckOptions::default(),
            plot: PlotOptions::default(),
            tolerance: Tolerances::default(),
            corrupt_core: None,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> CliResult<Config> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Config> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Config::from_json(&text)
    }

    pub fn preset(name: &str) -> Config {
        Config {
            substitution: name.into(),
            ..Config::default()
        }
    }

    /// Field-level checks that need no substitution.
    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.patch_level == Some(0) {
            return bad("patch_level must be at least 1".into());
        }
        if self.sample_cap == 0 {
            return bad("sample_cap must be at least 1".into());
        }
        if self.pairs.is_empty() {
            return bad("pairs must name at least one correlation".into());
        }
        for p in &self.pairs {
            parse_selector(p)?;
        }
        let plot = &self.plot;
        if plot.width == 0 || plot.height == 0 || !(plot.point_size > 0.0) {
            return bad("plot width, height and point_size must be positive".into());
        }
        if plot.colors.len() < 2 {
            return bad("plot.colors needs at least two entries".into());
        }
        let tol = &self.tolerance;
        if !(tol.oracle_max > 0.0) || !(tol.oracle_median > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if self.oracle.distances == 0 {
            return bad("oracle.distances must be at least 1".into());
        }
        Ok(())
    }

    pub fn resolve(&self) -> CliResult<Setup> {
        self.validate()?;
        let text = self.substitution.trim();
        let (name, preset) = if text.contains("->") {
            ("custom".to_string(), None)
        } else {
            let p = presets::by_name(text).map_err(|e| CliError::Config(e.to_string()))?;
            (p.name.to_string(), Some(p))
        };
        let sys = match &preset {
            Some(p) => p.system(),
            None => SubstitutionSystem::parse(text)?,
        };
        let seed = match (&self.seed, &preset) {
            (Some(s), _) => s.clone(),
            (None, Some(p)) => p.seed.to_string(),
            (None, None) => {
                let (x, y) = sys
                    .legal_pairs()
                    .into_iter()
                    .next()
                    .expect("legal pairs exist");
                format!("{}|{}", sys.letter_name(x), sys.letter_name(y))
            }
        };
        sys.parse_seed(&seed)?;
        let cutoff = match self.cutoff.as_deref().map(str::trim) {
            None => preset
                .as_ref()
                .map(|p| p.cutoff.clone())
                .unwrap_or_default(),
            Some("minimal") => CutoffRule::Minimal,
            Some("inflated") => CutoffRule::Inflated,
            Some(v) => CutoffRule::Fixed(
                FieldVal::parse(sys.field(), v)
                    .map_err(|e| CliError::Config(format!("cutoff: {e}")))?,
            ),
        };
        let patch_level = match self.patch_level {
            Some(k) => k,
            None => default_level(&preset, &sys, &seed)?,
        };
        let tiles = sys.projected_tiles(&sys.parse_seed(&seed).map(|(x, y)| [x, y])?, patch_level);
        if tiles > self.point_cap as u128 {
            return Err(rauzy::Error::MemoryGuard {
                projected: tiles,
                cap: self.point_cap,
            }
            .into());
        }
        let selectors = self
            .pairs
            .iter()
            .map(|p| parse_selector(p))
            .collect::<CliResult<Vec<_>>>()?;
        let shift = self
            .shift
            .as_deref()
            .map(|s| QuadInt::parse(sys.field(), s))
            .transpose()
            .map_err(|e| CliError::Config(format!("shift: {e}")))?;
        Ok(Setup {
            name,
            sys,
            seed,
            cutoff,
            patch_level,
            selectors,
            shift,
            config: self.clone(),
        })
    }
}

/// A configuration resolved against its substitution.
#[derive(Clone, Debug)]
pub struct Setup {
    /// Preset name or `custom`; prefixes every output file.
    pub name: String,
    pub sys: SubstitutionSystem,
    pub seed: String,
    pub cutoff: CutoffRule,
    pub patch_level: usize,
    pub selectors: Vec<PairSelector>,
    pub shift: Option<QuadInt>,
    pub config: Config,
}

impl Setup {
    pub fn output(&self, suffix: &str) -> PathBuf {
        self.config
            .output_dir
            .join(format!("{}_{suffix}", self.name))
    }
}

fn default_level(
    preset: &Option<Preset>,
    sys: &SubstitutionSystem,
    seed: &str,
) -> CliResult<usize> {
    Ok(match preset.as_ref().map(|p| p.name) {
        Some("ssm") => 9,
        Some("sigma") => 6,
        Some("fibonacci") => 16,
        _ => sys.level_for_tiles(seed, 20_000)?.max(1),
    })
}

pub fn parse_selector(text: &str) -> CliResult<PairSelector> {
    let letter = |c: u8| -> Option<Letter> {
        match c {
            b'a' => Some(A),
            b'b' => Some(B),
            _ => None,
        }
    };
    match text.as_bytes() {
        b"total" => Ok(PairSelector::Total),
        [x, y] => match (letter(*x), letter(*y)) {
            (Some(i), Some(j)) => Ok(PairSelector::Pair(i, j)),
            _ => Err(CliError::Config(format!("unknown pair '{text}'"))),
        },
        _ => Err(CliError::Config(format!("unknown pair '{text}'"))),
    }
}

/// `aa`, `ab`, ... in the system's own letters.
pub fn pair_label(sys: &SubstitutionSystem, sel: PairSelector) -> String {
    match sel {
        PairSelector::Total => "total".into(),
        PairSelector::Pair(i, j) => format!("{}{}", sys.letter_name(i), sys.letter_name(j)),
    }
}
