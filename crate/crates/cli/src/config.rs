use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use tracekit::calibration::{
    c_transfer, mellin_sup_max, satotate_weyl_c, sharpness_kappa0, tail_slack, Calibrated,
};
use tracekit::modarith::is_prime;
use tracekit::Family;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    DftSelftest,
    Thm1,
    Transfer,
    Weyl,
    Equidist,
    Birch,
    Mellin,
    Pv,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::DftSelftest => "dft-selftest",
            Command::Thm1 => "thm1",
            Command::Transfer => "transfer",
            Command::Weyl => "weyl",
            Command::Equidist => "equidist",
            Command::Birch => "birch",
            Command::Mellin => "mellin",
            Command::Pv => "pv",
        }
    }
}

/// Which table to build. `family` is a [`Family`] name, or `inverse-fractional`
/// for the equidist command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FunctionSpec {
    pub family: String,
    /// Polynomial coefficients, lowest degree first (weyl only).
    pub poly: Vec<i64>,
}

impl Default for FunctionSpec {
    fn default() -> Self {
        Self {
            family: "birch".into(),
            poly: vec![0, 0, 0, 1],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntervalSpec {
    /// Interval lengths; each command has its own default when empty.
    pub lengths: Vec<u64>,
    pub start: i64,
    /// Number of random starts per length, in addition to `start`.
    pub placements: u32,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<Command>,
    /// A single modulus or a ladder of them.
    pub moduli: Vec<u64>,
    pub function: FunctionSpec,
    pub interval: IntervalSpec,
    pub out_dir: PathBuf,
    pub cache_dir: Option<PathBuf>,
    pub calibration: BTreeMap<String, Calibrated>,
    /// Sheaf conductor bound for the mellin command.
    pub conductor: Option<Calibrated>,
    pub bins: usize,
    pub max_test: u32,
    pub tails: Vec<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let calibration = [
            ("c_transfer", c_transfer()),
            ("sharpness_kappa0", sharpness_kappa0()),
            ("satotate_weyl_c", satotate_weyl_c()),
            ("mellin_sup_max", mellin_sup_max()),
            ("tail_slack", tail_slack()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        Self {
            command: None,
            moduli: Vec::new(),
            function: FunctionSpec::default(),
            interval: IntervalSpec::default(),
            out_dir: PathBuf::from("out"),
            cache_dir: None,
            calibration,
            conductor: None,
            bins: 24,
            max_test: 6,
            tails: vec![0.25],
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub p: Option<u64>,
    pub length: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        // a partial [calibration] table only replaces the keys it names
        let defaults = ExperimentConfig::default().calibration;
        for (k, v) in defaults {
            cfg.calibration.entry(k).or_insert(v);
        }
        Ok(cfg)
    }

    pub fn apply(&mut self, command: Command, o: Overrides) {
        self.command = Some(command);
        if let Some(p) = o.p {
            self.moduli = vec![p];
        }
        if let Some(l) = o.length {
            self.interval.lengths = vec![l];
        }
        if o.seed.is_some() {
            self.interval.seed = o.seed;
        }
        if let Some(d) = o.out {
            self.out_dir = d;
        }
        if o.cache.is_some() {
            self.cache_dir = o.cache;
        }
    }

    pub fn command(&self) -> Command {
        self.command.unwrap_or(Command::DftSelftest)
    }

    pub fn constant(&self, key: &str) -> f64 {
        self.calibration[key].value
    }

    /// The family for table-based commands.
    pub fn family(&self) -> Result<Family, CliError> {
        Family::parse(&self.function.family)
            .ok_or_else(|| CliError::Config(format!("unknown family {:?}", self.function.family)))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        let cmd = self.command();
        if self.moduli.is_empty() {
            return bad("no modulus given (set `moduli` or pass --p)".into());
        }
        for &m in &self.moduli {
            if !(2..1 << 63).contains(&m) {
                return bad(format!("modulus {m} out of range [2, 2^63)"));
            }
        }
        if self.interval.placements > 0 && self.interval.seed.is_none() {
            return bad("random placements requested without a seed".into());
        }
        let conductor = self.conductor.iter().map(|c| ("conductor", c));
        for (k, c) in self
            .calibration
            .iter()
            .map(|(k, c)| (k.as_str(), c))
            .chain(conductor)
        {
            if c.provenance.trim().is_empty() {
                return bad(format!("calibration constant {k} has no provenance"));
            }
            if !(c.value.is_finite() && c.value > 0.0) {
                return bad(format!("calibration constant {k} must be positive"));
            }
        }
        if self.interval.lengths.contains(&0) {
            return bad("interval lengths must be positive".into());
        }
        if self.tails.iter().any(|t| !(0.0..=2.0).contains(t)) {
            return bad("tail thresholds must lie in [0, 2]".into());
        }
        let needs_prime = match cmd {
            Command::Equidist | Command::Birch | Command::Mellin => true,
            Command::Pv | Command::Weyl => false,
            Command::DftSelftest | Command::Thm1 | Command::Transfer => {
                self.family()?.needs_prime()
            }
        };
        if needs_prime {
            if let Some(&m) = self.moduli.iter().find(|&&m| !is_prime(m) || m < 5) {
                return bad(format!("{} needs primes >= 5, got {m}", cmd.name()));
            }
        }
        match cmd {
            Command::Equidist => {
                if !["birch", "kloosterman", "inverse-fractional"]
                    .contains(&self.function.family.as_str())
                {
                    return bad(format!("equidist family must be birch, kloosterman or inverse-fractional, got {:?}", self.function.family));
                }
            }
            Command::Birch | Command::Pv | Command::Weyl => {}
            _ => {
                self.family()?;
            }
        }
        if cmd == Command::DftSelftest {
            if let Some(&m) = self.moduli.iter().find(|&&m| m > 100_000) {
                return bad(format!(
                    "dft-selftest runs the O(m^2) oracle; modulus {m} exceeds 100000"
                ));
            }
        }
        if cmd == Command::Weyl && self.function.poly.is_empty() {
            return bad("weyl needs a polynomial".into());
        }
        Ok(())
    }
}
