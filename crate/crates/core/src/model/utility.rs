use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Period utility function `u(c)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum Utility {
    #[default]
    Log,
    /// `(c^(1 - sigma) - 1) / (1 - sigma)`, `sigma != 1`.
    Crra { sigma: f64 },
    /// `u(c) = c`.
    Linear,
}

/// Upper bound on `|u(c * g^j)|` for `j >= 1`, of the form
/// `sum_i scale_i * growth_i^j + slope * j`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct TailEnvelope {
    pub geometric: Vec<(f64, f64)>,
    pub slope: f64,
}

impl Utility {
    pub fn crra(sigma: f64) -> Result<Self> {
        let u = Utility::Crra { sigma };
        u.validate()?;
        Ok(u)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Utility::Crra { sigma } if !sigma.is_finite() || sigma == 1.0 => {
                Err(Error::InvalidParameter {
                    name: "sigma",
                    value: sigma,
                    reason: "CRRA needs a finite sigma != 1 (use log for sigma = 1)",
                })
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, c: f64) -> f64 {
        match *self {
            Utility::Log => c.ln(),
            Utility::Crra { sigma } => (c.powf(1.0 - sigma) - 1.0) / (1.0 - sigma),
            Utility::Linear => c,
        }
    }

    /// Envelope of `|u|` along a geometric consumption tail starting at `c`
    /// with ratio `g`.
    pub(crate) fn tail_envelope(&self, c: f64, g: f64) -> TailEnvelope {
        match *self {
            Utility::Log => TailEnvelope {
                geometric: vec![(c.ln().abs(), 1.0)],
                slope: g.ln().abs(),
            },
            Utility::Crra { sigma } => {
                let k = (1.0 - sigma).abs();
                TailEnvelope {
                    geometric: vec![
                        (c.powf(1.0 - sigma) / k, g.powf(1.0 - sigma)),
                        (1.0 / k, 1.0),
                    ],
                    slope: 0.0,
                }
            }
            Utility::Linear => TailEnvelope {
                geometric: vec![(c, g)],
                slope: 0.0,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        assert_eq!(Utility::Log.eval(1.0), 0.0);
        assert_eq!(Utility::Linear.eval(2.5), 2.5);
        let crra = Utility::crra(2.0).unwrap();
        assert!((crra.eval(2.0) - 0.5).abs() < 1e-15);
        assert!(Utility::crra(1.0).is_err());
    }

    #[test]
    fn crra_approaches_log() {
        let near = Utility::Crra { sigma: 1.0 + 1e-7 };
        assert!((near.eval(3.0) - 3.0f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn envelope_dominates() {
        for u in [Utility::Log, Utility::Linear, Utility::Crra { sigma: 3.0 }, Utility::Crra { sigma: 0.5 }] {
            for &(c, g) in &[(0.3, 0.9), (100.0, 1.01), (1.0, 1.0), (2.0, 0.5)] {
                let env = u.tail_envelope(c, g);
                for j in 1..200 {
                    let bound: f64 = env
                        .geometric
                        .iter()
                        .map(|&(a, r)| a * r.powi(j))
                        .sum::<f64>()
                        + env.slope * j as f64;
                    let actual = u.eval(c * g.powi(j)).abs();
                    assert!(actual <= bound * (1.0 + 1e-12) + 1e-300, "{u:?} c={c} g={g} j={j}");
                }
            }
        }
    }
}
