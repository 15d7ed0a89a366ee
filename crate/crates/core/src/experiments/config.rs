use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::constructions::FamilyTag;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::partitions::Flavor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Growth,
    Prop13,
    Bounded,
    Rademacher,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 4] =
        [ExperimentKind::Growth, ExperimentKind::Prop13, ExperimentKind::Bounded, ExperimentKind::Rademacher];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Growth => "growth",
            ExperimentKind::Prop13 => "prop13",
            ExperimentKind::Bounded => "bounded",
            ExperimentKind::Rademacher => "rademacher",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

/// Experiment parameters. The text form is one `key = value` per line, `#` starts a
/// comment; keys are `experiment family n L M p q s range trials seed epsilon flavor out`.
/// `p` is a comma-separated list and accepts fractions such as `2/3`; `range` is `lo..hi`
/// (inclusive).
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub family: Option<FamilyTag>,
    pub n: usize,
    pub length: f64,
    pub samples: usize,
    pub p: Vec<f64>,
    pub q: f64,
    pub s: f64,
    pub range: (u32, u32),
    pub trials: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub flavor: Flavor,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Settings that the shipped experiments are tuned for.
    pub fn preset(experiment: ExperimentKind, family: Option<FamilyTag>) -> Self {
        let base = Self {
            experiment,
            family,
            n: 1,
            length: 512.0,
            samples: 1 << 17,
            p: vec![1.0, 2.0],
            q: 1.0,
            s: 0.0,
            range: (3, 8),
            trials: 50,
            seed: 1,
            epsilon: 0.1,
            flavor: Flavor::Sharp,
            out: None,
        };
        match (experiment, family) {
            (ExperimentKind::Growth, Some(FamilyTag::PLower)) | (ExperimentKind::Growth, None) => Self {
                family: Some(FamilyTag::PLower),
                length: 32768.0,
                samples: 1 << 18,
                p: vec![2.0 / 3.0, 1.0, 1.5, 2.0],
                ..base
            },
            (ExperimentKind::Growth, _) => Self { p: vec![1.0, 1.5, 2.0, 4.0], ..base },
            (ExperimentKind::Prop13, _) => {
                Self { family: Some(FamilyTag::Prop13), length: 2048.0, samples: 1 << 20, range: (4, 9), ..base }
            }
            (ExperimentKind::Bounded, _) => Self { family: Some(FamilyTag::PUpper), ..base },
            (ExperimentKind::Rademacher, _) => Self {
                family: Some(FamilyTag::Rademacher),
                length: 2.0 * std::f64::consts::PI * 16.0,
                samples: 8192,
                p: vec![1.0],
                q: 0.5,
                range: (4, 6),
                trials: 200,
                ..base
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = vec![];
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", no + 1)))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        let kind = pairs
            .iter()
            .find(|(k, _)| k == "experiment")
            .ok_or_else(|| Error::Config("missing `experiment`".into()))?
            .1
            .parse()?;
        let family = match pairs.iter().find(|(k, _)| k == "family") {
            Some((_, v)) => Some(v.parse().map_err(|_| Error::Config(format!("unknown family `{v}`")))?),
            None => None,
        };
        let mut cfg = Self::preset(kind, family);
        for (k, v) in &pairs {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies one `key = value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("bad value `{value}` for `{key}`: {what}"));
        match key {
            "experiment" => self.experiment = value.parse()?,
            "family" => self.family = Some(value.parse().map_err(|_| bad("unknown family"))?),
            "n" => self.n = value.parse().map_err(|_| bad("integer"))?,
            "L" => self.length = value.parse().map_err(|_| bad("number"))?,
            "M" => self.samples = value.parse().map_err(|_| bad("integer"))?,
            "p" => self.p = value.split(',').map(parse_number).collect::<Result<_>>().map_err(|_| bad("list"))?,
            "q" => self.q = parse_number(value).map_err(|_| bad("number"))?,
            "s" => self.s = parse_number(value).map_err(|_| bad("number"))?,
            "range" => {
                let (a, b) = value.split_once("..").ok_or_else(|| bad("expected lo..hi"))?;
                self.range = (a.trim().parse().map_err(|_| bad("lo"))?, b.trim().parse().map_err(|_| bad("hi"))?);
            }
            "trials" => self.trials = value.parse().map_err(|_| bad("integer"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("integer"))?,
            "epsilon" => self.epsilon = parse_number(value).map_err(|_| bad("number"))?,
            "flavor" => self.flavor = value.parse().map_err(|_| bad("standard or sharp"))?,
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n, self.length, self.samples)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.s != 0.0 {
            return fail(format!("s = {} unsupported, experiments use B^0", self.s));
        }
        if self.p.is_empty() || self.p.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
            return fail("p must be a nonempty list of positive numbers".into());
        }
        if !(self.q > 0.0) || !self.q.is_finite() {
            return fail(format!("q = {} must be positive", self.q));
        }
        if self.range.0 > self.range.1 {
            return fail(format!("empty range {}..{}", self.range.0, self.range.1));
        }
        self.grid()?;
        let span = (self.range.1 - self.range.0 + 1) as usize;
        match self.experiment {
            ExperimentKind::Growth => {
                if !matches!(self.family, Some(FamilyTag::PLower | FamilyTag::PUpper)) {
                    return fail("growth needs family p_lower or p_upper".into());
                }
                if span < 4 {
                    return fail("growth needs at least 4 values of j".into());
                }
            }
            ExperimentKind::Prop13 => {
                if span < 4 {
                    return fail("prop13 needs at least 4 values of N".into());
                }
                if self.p.iter().any(|&p| p < 1.0) {
                    return fail("prop13 uses 1 ≤ p".into());
                }
            }
            ExperimentKind::Bounded => {
                if self.n != 1 {
                    return fail("bounded runs in one dimension".into());
                }
                if self.p.iter().any(|&p| p < 1.0) {
                    return fail("bounded uses 1 ≤ p".into());
                }
            }
            ExperimentKind::Rademacher => {
                if self.n != 1 {
                    return fail("rademacher runs in one dimension".into());
                }
                if self.trials < 100 {
                    return fail(format!("rademacher needs at least 100 trials, got {}", self.trials));
                }
                if !(self.epsilon > 0.0) {
                    return fail("epsilon must be positive".into());
                }
            }
        }
        Ok(())
    }
}

fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| Error::Parse(s.into()))?;
            let b: f64 = b.trim().parse().map_err(|_| Error::Parse(s.into()))?;
            a / b
        }
        None => s.parse().map_err(|_| Error::Parse(s.into()))?,
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments_and_fractions() {
        let c = ExperimentConfig::parse("# growth run\nexperiment = growth\nfamily = p_lower\np = 2/3, 1\nrange = 3..6 # short\n")
            .unwrap();
        assert_eq!(c.family, Some(FamilyTag::PLower));
        assert_eq!(c.p, vec![2.0 / 3.0, 1.0]);
        assert_eq!(c.range, (3, 6));
        assert_eq!(c.samples, 1 << 18);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentConfig::parse("family = p_lower").is_err());
        assert!(ExperimentConfig::parse("experiment = growth\nrange = 3..4").is_err());
        assert!(ExperimentConfig::parse("experiment = growth\nfoo = 1").is_err());
        assert!(ExperimentConfig::parse("experiment = rademacher\ntrials = 10").is_err());
        assert!(ExperimentConfig::parse("experiment = growth\nfamily = prop13").is_err());
        assert!(ExperimentConfig::parse("experiment = bounded\ns = 1").is_err());
        assert!(ExperimentConfig::parse("experiment = bounded\nnonsense").is_err());
    }
}
