//! `key = value` experiment configuration.
//!
//! One assignment per line, `#` starts a comment, and repeating a list key
//! appends to it. Every problem in a file is reported, not just the first.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use curvelab_core::{Curve, Domain, Family};

use crate::experiments::Experiment;

/// One problem found while parsing, tagged with its line when it has one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// All problems in a configuration file.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Curve selection: `moment:D`, `monomial:a,b,..`, `exp:a,b,..` or `power:alpha,beta`.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSpec {
    Moment(usize),
    Monomial(Vec<f64>),
    Exp(Vec<f64>),
    PowerTriple(f64, f64),
}

impl FromStr for CurveSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, args) = s.split_once(':').ok_or_else(|| format!("expected family:args, got `{s}`"))?;
        let nums = || -> Result<Vec<f64>, String> {
            args.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad number `{}` in curve", x.trim())))
                .collect()
        };
        match kind.trim() {
            "moment" => args
                .trim()
                .parse()
                .map(CurveSpec::Moment)
                .map_err(|_| format!("bad dimension `{args}`")),
            "monomial" => nums().map(CurveSpec::Monomial),
            "exp" => nums().map(CurveSpec::Exp),
            "power" => match nums()?.as_slice() {
                [a, b] => Ok(CurveSpec::PowerTriple(*a, *b)),
                _ => Err("power takes two exponents".into()),
            },
            other => Err(format!("unknown curve family `{other}`")),
        }
    }
}

impl CurveSpec {
    pub fn build(&self) -> curvelab_core::Result<Curve> {
        match self {
            CurveSpec::Moment(d) => Curve::moment(*d),
            CurveSpec::Monomial(a) => Curve::monomial(a.clone()),
            CurveSpec::Exp(a) => Curve::new(Family::ExpParam { rates: a.clone() }, Domain::closed(0.0, 1.0)),
            CurveSpec::PowerTriple(a, b) => Curve::power_triple(*a, *b),
        }
    }
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub curve: Option<CurveSpec>,
    pub d: Vec<usize>,
    pub n: Vec<usize>,
    pub k: Vec<u32>,
    pub alpha: Vec<f64>,
    pub lambda: Vec<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub samples: Option<usize>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub budget: Option<usize>,
    pub tol: Option<f64>,
    pub shift: Option<i32>,
    pub eps: Option<f64>,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 1;

/// Keys that may repeat.
const LIST_KEYS: [&str; 5] = ["d", "n", "k", "alpha", "lambda"];

pub const ALL_KEYS: [&str; 17] = [
    "experiment", "curve", "d", "n", "k", "alpha", "lambda", "a", "b", "samples", "trials", "seed", "budget",
    "tol", "shift", "eps", "out",
];

type Raw = BTreeMap<String, Vec<(usize, String)>>;

struct Reader {
    raw: Raw,
    errors: Vec<ConfigError>,
    end: usize,
}

impl Reader {
    fn err(&mut self, line: usize, message: String) {
        self.errors.push(ConfigError { line: Some(line), message });
    }

    fn list<T: FromStr>(&mut self, key: &str, what: &str) -> Vec<T> {
        let entries = self.raw.get(key).cloned().unwrap_or_default();
        let mut out = Vec::new();
        for (line, v) in entries {
            match v.parse::<T>() {
                Ok(x) => out.push(x),
                Err(_) => self.err(line, format!("{key}: expected {what}, got `{v}`")),
            }
        }
        out
    }

    fn scalar<T: FromStr>(&mut self, key: &str, what: &str) -> Option<T> {
        self.list(key, what).pop()
    }
}

/// Parses and validates a configuration file.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigErrors> {
    let mut reader = Reader { raw: Raw::new(), errors: Vec::new(), end: text.lines().count() + 1 };
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((k, v)) = body.split_once('=') else {
            reader.err(lineno, format!("expected `key = value`, got `{body}`"));
            continue;
        };
        let (k, v) = (k.trim(), v.trim());
        if !ALL_KEYS.contains(&k) {
            reader.err(lineno, format!("unknown key `{k}`"));
            continue;
        }
        if v.is_empty() {
            reader.err(lineno, format!("{k}: missing value"));
            continue;
        }
        let slot = reader.raw.entry(k.to_string()).or_default();
        if !slot.is_empty() && !LIST_KEYS.contains(&k) {
            let first = slot[0].0;
            reader.err(lineno, format!("{k}: already set on line {first}"));
            continue;
        }
        slot.push((lineno, v.to_string()));
    }

    let experiment = match reader.raw.get("experiment").and_then(|v| v.first()).cloned() {
        None => {
            reader.errors.push(ConfigError { line: None, message: "missing required key `experiment`".into() });
            None
        }
        Some((line, name)) => match Experiment::from_name(&name) {
            Some(e) => Some(e),
            None => {
                let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
                reader.err(line, format!("unknown experiment `{name}` (one of {})", names.join(", ")));
                None
            }
        },
    };

    let curve = reader.scalar::<String>("curve", "a curve").and_then(|s| {
        let line = reader.raw["curve"][0].0;
        match s.parse::<CurveSpec>() {
            Ok(c) => Some(c),
            Err(e) => {
                reader.err(line, format!("curve: {e}"));
                None
            }
        }
    });
    let cfg = ExperimentConfig {
        experiment: experiment.unwrap_or(Experiment::Decay),
        curve,
        d: reader.list("d", "a positive integer"),
        n: reader.list("n", "a positive integer"),
        k: reader.list("k", "a positive integer"),
        alpha: reader.list("alpha", "a number"),
        lambda: reader.list("lambda", "a number"),
        a: reader.scalar("a", "a number"),
        b: reader.scalar("b", "a number"),
        samples: reader.scalar("samples", "a positive integer"),
        trials: reader.scalar("trials", "a positive integer"),
        seed: reader.scalar("seed", "a nonnegative integer").unwrap_or(DEFAULT_SEED),
        budget: reader.scalar("budget", "a positive integer"),
        tol: reader.scalar("tol", "a number"),
        shift: reader.scalar("shift", "an integer"),
        eps: reader.scalar("eps", "a number"),
        out: reader.scalar("out", "a path"),
    };

    if let Some(exp) = experiment {
        let end = reader.end;
        for key in exp.required() {
            if !reader.raw.contains_key(*key) {
                reader.errors.push(ConfigError {
                    line: None,
                    message: format!("missing required key `{key}` for experiment `{}` (end of input, line {end})", exp.name()),
                });
            }
        }
        let allowed = exp.keys();
        for (key, entries) in &reader.raw {
            if key != "experiment" && key != "seed" && key != "out" && !allowed.contains(&key.as_str()) {
                let line = entries[0].0;
                reader.errors.push(ConfigError {
                    line: Some(line),
                    message: format!("key `{key}` is not used by experiment `{}`", exp.name()),
                });
            }
        }
    }
    if reader.errors.is_empty() {
        Ok(cfg)
    } else {
        reader.errors.sort_by_key(|e| e.line.unwrap_or(usize::MAX));
        Err(ConfigErrors(reader.errors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sublevel_example_parses() {
        let cfg = parse_config("experiment = sublevel\nd = 3\nalpha = 1.0\nsamples = 1000000\nseed = 42").unwrap();
        assert_eq!(cfg.experiment, Experiment::Sublevel);
        assert_eq!(cfg.d, vec![3]);
        assert_eq!(cfg.alpha, vec![1.0]);
        assert_eq!(cfg.samples, Some(1_000_000));
        assert_eq!(cfg.seed, 42);
    }

    #[test]
    fn type_error_reports_line() {
        let err = parse_config("experiment = sublevel\nd = banana").unwrap_err();
        assert_eq!(err.0.len(), 1);
        assert_eq!(err.0[0].line, Some(2));
        assert!(err.0[0].message.contains("banana"));
    }

    #[test]
    fn empty_file_misses_experiment() {
        let err = parse_config("").unwrap_err();
        assert!(err.0.iter().any(|e| e.message.contains("`experiment`")));
    }

    #[test]
    fn all_errors_are_collected() {
        let text = "experiment = sublevel\nbogus = 1\nsamples = many\nseed = 1\nseed = 2\nno equals sign\n";
        let err = parse_config(text).unwrap_err();
        let lines: Vec<Option<usize>> = err.0.iter().map(|e| e.line).collect();
        assert_eq!(lines, vec![Some(2), Some(3), Some(5), Some(6), None]);
    }

    #[test]
    fn lists_comments_and_curves() {
        let text = "# sweep\nexperiment = decay\ncurve = moment:3  # default\nlambda = 16\nlambda = 32\n\nlambda = 64\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.lambda, vec![16.0, 32.0, 64.0]);
        assert_eq!(cfg.curve, Some(CurveSpec::Moment(3)));
        assert_eq!(cfg.seed, DEFAULT_SEED);
        assert_eq!("exp:-1, 0.5,2".parse::<CurveSpec>(), Ok(CurveSpec::Exp(vec![-1.0, 0.5, 2.0])));
        assert!("spiral:1".parse::<CurveSpec>().is_err());
    }

    #[test]
    fn unused_keys_are_rejected_per_experiment() {
        let err = parse_config("experiment = torsion\nalpha = 1").unwrap_err();
        assert_eq!(err.0[0].line, Some(2));
        let err = parse_config("experiment = nothing").unwrap_err();
        assert!(err.0[0].message.contains("unknown experiment"));
    }
}
