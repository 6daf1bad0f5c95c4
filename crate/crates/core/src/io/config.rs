//! Flat `key=value` run configuration.
//!
//! One entry per line, keys namespaced with dots. `#` starts a comment.
//! Every key has a documented default; unknown keys are rejected so typos
//! fail loudly. Later duplicates override earlier ones, and command-line
//! flags override file values.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::error::{Result, SafeError};

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigValue {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
}

impl fmt::Display for ConfigValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigValue::Int(v) => write!(f, "{v}"),
            ConfigValue::Float(v) => write!(f, "{v}"),
            ConfigValue::Bool(v) => write!(f, "{v}"),
            ConfigValue::Str(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Int,
    Float,
    Bool,
    Str,
}

struct SchemaEntry {
    key: &'static str,
    kind: Kind,
    default: &'static str,
    doc: &'static str,
}

macro_rules! schema {
    ($(($key:literal, $kind:ident, $default:literal, $doc:literal)),* $(,)?) => {
        &[$(SchemaEntry { key: $key, kind: Kind::$kind, default: $default, doc: $doc }),*]
    };
}

/// Every recognized key with its type, default, and meaning.
static SCHEMA: &[SchemaEntry] = schema![
    // data preparation
    ("data.patch", Int, "100", "side of the square training patches cut from scenes"),
    ("data.despeckle_window", Int, "5", "boxcar window for the default despeckler (odd)"),
    ("data.despeckler", Str, "boxcar", "despeckler backend: boxcar | external"),
    ("data.despeckle_cmd", Str, "", "external despeckler command (input/output container paths appended)"),
    ("data.norm_lo", Float, "1.0", "lower log-amplitude clip percentile for synthetic sensors"),
    ("data.norm_hi", Float, "99.0", "upper log-amplitude clip percentile for synthetic sensors"),
    // augmentation policy
    ("augment.q_sub", Float, "0.5", "probability that a local view comes from sub-aperture decomposition"),
    ("augment.shift_a", Float, "0.0", "lower bound of the per-view log-amplitude shift"),
    ("augment.shift_b", Float, "0.3", "upper bound of the per-view log-amplitude shift"),
    ("augment.n_global", Int, "2", "global student views per sample"),
    ("augment.n_local", Int, "3", "local student views per sample"),
    ("augment.global_size", Int, "64", "side of global crops"),
    ("augment.local_size", Int, "32", "side of local views"),
    ("augment.sub_recenter", Bool, "false", "recenter the spectrum on its centroid before low-pass cropping"),
    // encoder
    ("encoder.token_size", Int, "8", "side of the non-overlapping tokenization kernel"),
    ("encoder.dim", Int, "192", "embedding (and output feature) dimension"),
    ("encoder.depth", Int, "6", "number of transformer blocks"),
    ("encoder.heads", Int, "3", "attention heads"),
    ("encoder.in_channels", Int, "1", "input polarization channels (1 or 4)"),
    ("encoder.mask_p", Float, "0.3", "fraction of tokens masked on student views"),
    // projection head and prototypes
    ("head.hidden", Int, "384", "hidden width of the projection MLP"),
    ("head.out", Int, "192", "projected dimension d_g"),
    ("proto.count", Int, "256", "number of prototypes"),
    // objective
    ("objective.tau_student", Float, "0.1", "student softmax temperature"),
    ("objective.tau_teacher", Float, "0.04", "teacher softmax temperature"),
    ("objective.lambda", Float, "1.0", "weight of the mean-entropy regularizer"),
    ("objective.entropy_sign", Int, "-1", "sign of the regularizer in the minimized loss (-1 maximizes entropy)"),
    // pretraining loop
    ("train.batch_size", Int, "64", "samples per optimization step"),
    ("train.epochs", Int, "100", "pretraining epochs"),
    ("train.lr", Float, "1e-3", "peak learning rate after warmup"),
    ("train.lr_end", Float, "1e-6", "final learning rate of the cosine decay"),
    ("train.warmup_epochs", Int, "10", "linear warmup epochs from 0 to train.lr"),
    ("train.wd_start", Float, "0.04", "initial decoupled weight decay"),
    ("train.wd_end", Float, "0.4", "final weight decay of the cosine ramp"),
    ("train.momentum_start", Float, "0.9995", "initial EMA momentum of the teacher"),
    ("train.momentum_end", Float, "1.0", "final EMA momentum"),
    ("train.beta1", Float, "0.9", "optimizer first-moment decay"),
    ("train.beta2", Float, "0.999", "optimizer second-moment decay"),
    ("train.clip_norm", Float, "3.0", "global gradient-norm clip (0 disables)"),
    ("train.seed", Int, "0", "root seed of the run"),
    ("train.checkpoint_every", Int, "10", "epochs between periodic checkpoints (0 = final only)"),
    // frozen-feature probes
    ("probe.crop", Int, "64", "center-crop side applied before feature extraction"),
    ("probe.feature", Str, "z", "feature fed to classifiers: z | h | s"),
    ("probe.source", Str, "teacher", "which weights to evaluate: teacher | student"),
    ("probe.knn_k", Int, "1", "neighbors for the k-NN classifier"),
    ("probe.linear_epochs", Int, "300", "epochs of the linear probe"),
    ("probe.linear_lr", Float, "3e-3", "learning rate of the linear probe"),
    ("probe.trials", Int, "10", "few-shot trials"),
    // segmentation head
    ("seg.patch_sizes", Str, "16,32,64", "patch sizes of the multi-scale feature grids"),
    ("seg.stride", Int, "32", "stride shared by all grids"),
    ("seg.d_r", Int, "64", "reduced channel count after the 1x1 convolution"),
    ("seg.epochs", Int, "100", "segmentation head training epochs"),
    ("seg.lr", Float, "3.125e-5", "initial head learning rate"),
    ("seg.lr_drop1", Int, "40", "first epoch at which the rate is divided by 10"),
    ("seg.lr_drop2", Int, "80", "second epoch at which the rate is divided by 10"),
    ("seg.val_fraction", Float, "0.25", "fraction of scenes held out for validation"),
    ("seg.seed", Int, "0", "seed of the split and head initialization"),
    // detection
    ("detect.patch", Int, "64", "reference/window patch size"),
    ("detect.stride", Int, "4", "detection grid stride"),
    ("detect.threshold", Float, "0.8", "cosine retention threshold"),
    // visualization
    ("vis.patch", Int, "64", "feature-map patch size"),
    ("vis.stride", Int, "16", "feature-map stride"),
    ("vis.reducer", Str, "pca", "dimension reducer: pca | external"),
    ("vis.reducer_cmd", Str, "", "external reducer command (input/output container paths appended)"),
];

fn schema_entry(key: &str) -> Option<&'static SchemaEntry> {
    SCHEMA.iter().find(|e| e.key == key)
}

fn parse_value(kind: Kind, raw: &str, key: &str) -> Result<ConfigValue> {
    let mismatch = |wanted: &str| {
        SafeError::Config(format!(
            "type mismatch for key '{key}': expected {wanted}, found '{raw}'"
        ))
    };
    match kind {
        Kind::Int => raw
            .parse::<i64>()
            .map(ConfigValue::Int)
            .map_err(|_| mismatch("integer")),
        Kind::Float => raw
            .parse::<f64>()
            .map(ConfigValue::Float)
            .map_err(|_| mismatch("decimal")),
        Kind::Bool => match raw {
            "true" => Ok(ConfigValue::Bool(true)),
            "false" => Ok(ConfigValue::Bool(false)),
            _ => Err(mismatch("true|false")),
        },
        Kind::Str => Ok(ConfigValue::Str(raw.to_string())),
    }
}

/// A fully resolved run configuration: schema defaults with overrides.
#[derive(Debug, Clone)]
pub struct RunConfig {
    values: BTreeMap<&'static str, ConfigValue>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mut values = BTreeMap::new();
        for e in SCHEMA {
            values.insert(e.key, parse_value(e.kind, e.default, e.key).unwrap());
        }
        RunConfig { values }
    }
}

impl RunConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| SafeError::io(path, e))?;
        parse_config(&text)
    }

    /// Apply one `key=value` override (used for command-line flags).
    pub fn set(&mut self, key: &str, raw: &str) -> Result<()> {
        let entry = schema_entry(key)
            .ok_or_else(|| SafeError::Config(format!("unknown config key '{key}'")))?;
        let value = parse_value(entry.kind, raw, key)?;
        self.values.insert(entry.key, value);
        Ok(())
    }

    pub fn int(&self, key: &str) -> i64 {
        match self.values.get(key) {
            Some(ConfigValue::Int(v)) => *v,
            other => panic!("config key '{key}' is not an integer: {other:?}"),
        }
    }

    pub fn float(&self, key: &str) -> f64 {
        match self.values.get(key) {
            Some(ConfigValue::Float(v)) => *v,
            Some(ConfigValue::Int(v)) => *v as f64,
            other => panic!("config key '{key}' is not a decimal: {other:?}"),
        }
    }

    pub fn bool(&self, key: &str) -> bool {
        match self.values.get(key) {
            Some(ConfigValue::Bool(v)) => *v,
            other => panic!("config key '{key}' is not a boolean: {other:?}"),
        }
    }

    pub fn str(&self, key: &str) -> &str {
        match self.values.get(key) {
            Some(ConfigValue::Str(v)) => v,
            other => panic!("config key '{key}' is not a string: {other:?}"),
        }
    }

    /// Render the full effective configuration, one key per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }

    /// The documented `(key, default, doc)` table.
    pub fn describe() -> Vec<(&'static str, &'static str, &'static str)> {
        SCHEMA.iter().map(|e| (e.key, e.default, e.doc)).collect()
    }
}

/// Split config text into `(key, value)` pairs without schema validation.
///
/// Shared by [`RunConfig`] and the scene-spec parser, which has its own
/// (indexed) key families.
pub fn parse_lines(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(SafeError::Config(format!(
                "malformed line {}: '{}' (expected key=value)",
                lineno + 1,
                raw_line.trim()
            )));
        };
        let key = line[..eq].trim();
        let value = line[eq + 1..].trim();
        if key.is_empty() {
            return Err(SafeError::Config(format!(
                "malformed line {}: empty key",
                lineno + 1
            )));
        }
        pairs.push((key.to_string(), value.to_string()));
    }
    Ok(pairs)
}

/// Parse config text into a [`RunConfig`] with defaults filled in.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    for (key, value) in parse_lines(text)? {
        cfg.set(&key, &value)?;
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_override() {
        let cfg = parse_config("train.batch_size=64").unwrap();
        assert_eq!(cfg.int("train.batch_size"), 64);
    }

    #[test]
    fn empty_text_yields_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg.int("train.batch_size"), 64);
        assert_eq!(cfg.float("objective.tau_teacher"), 0.04);
        assert_eq!(cfg.str("probe.feature"), "z");
        assert!(!cfg.bool("augment.sub_recenter"));
    }

    #[test]
    fn type_mismatch_is_rejected() {
        let err = parse_config("train.batch_size=abc").unwrap_err();
        assert!(matches!(err, SafeError::Config(_)), "{err}");
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = parse_config("train.batchsize=64").unwrap_err();
        assert!(err.to_string().contains("unknown config key"), "{err}");
    }

    #[test]
    fn later_duplicates_override() {
        let cfg = parse_config("train.epochs=3\ntrain.epochs=9").unwrap();
        assert_eq!(cfg.int("train.epochs"), 9);
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let cfg = parse_config("# header\n\ntrain.epochs=5 # tail comment\n").unwrap();
        assert_eq!(cfg.int("train.epochs"), 5);
    }

    #[test]
    fn malformed_line_is_reported_with_number() {
        let err = parse_config("train.epochs=1\nnonsense\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn every_default_parses_under_its_own_kind() {
        // Guards the schema table itself.
        let _ = RunConfig::default();
        assert!(RunConfig::describe().len() > 40);
    }
}
