use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rule extending a consumption path beyond its explicit prefix.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailRule {
    /// Repeat the last prefix value forever.
    #[default]
    Constant,
    /// `c_{L-1+j} = c_{L-1} * ratio^j`.
    Geometric(f64),
}

/// Consumption stream `c_0, c_1, ...`: a finite prefix plus a tail rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPath", into = "RawPath")]
pub struct ConsumptionPath {
    prefix: Vec<f64>,
    tail: TailRule,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPath {
    prefix: Vec<f64>,
    #[serde(default)]
    tail: TailRule,
}

impl TryFrom<RawPath> for ConsumptionPath {
    type Error = Error;

    fn try_from(raw: RawPath) -> Result<Self> {
        ConsumptionPath::new(raw.prefix, raw.tail)
    }
}

impl From<ConsumptionPath> for RawPath {
    fn from(p: ConsumptionPath) -> Self {
        RawPath {
            prefix: p.prefix,
            tail: p.tail,
        }
    }
}

impl ConsumptionPath {
    pub fn new(prefix: Vec<f64>, tail: TailRule) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::InvalidPath("prefix must hold at least one value".into()));
        }
        if let Some((i, c)) = prefix
            .iter()
            .enumerate()
            .find(|(_, c)| !(**c > 0.0 && c.is_finite()))
        {
            return Err(Error::InvalidPath(format!(
                "consumption must be finite and positive, got c[{i}] = {c}"
            )));
        }
        if let TailRule::Geometric(g) = tail {
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::InvalidPath(format!(
                    "geometric tail ratio must be finite and positive, got {g}"
                )));
            }
        }
        Ok(ConsumptionPath { prefix, tail })
    }

    /// `c_t = c` for all `t`.
    pub fn constant(c: f64) -> Result<Self> {
        Self::new(vec![c], TailRule::Constant)
    }

    /// `c_t = c0 * g^t`.
    pub fn geometric(c0: f64, g: f64) -> Result<Self> {
        Self::new(vec![c0], TailRule::Geometric(g))
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    /// Index of the last explicit value; the tail rule governs every later date.
    pub fn last_index(&self) -> u64 {
        self.prefix.len() as u64 - 1
    }

    /// Growth ratio of consumption in the tail (1 for a constant tail).
    pub fn tail_ratio(&self) -> f64 {
        match self.tail {
            TailRule::Constant => 1.0,
            TailRule::Geometric(g) => g,
        }
    }

    pub fn at(&self, t: u64) -> f64 {
        let last = self.last_index();
        if t <= last {
            return self.prefix[t as usize];
        }
        let c = self.prefix[last as usize];
        match self.tail {
            TailRule::Constant => c,
            TailRule::Geometric(g) => c * g.powf((t - last) as f64),
        }
    }
}
