use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Risk and demography parameters.
///
/// Only `m` and `b` are stored for the demographics; the net growth rate `n`
/// is always derived from `1 + n = (1 + b)(1 - m)`.
///
/// Hazards are accepted on the closed interval `[0, 1]` so that the limiting
/// cases of certain death (`m = 1`) and immediate extinction (`M = 1`) can be
/// evaluated directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct HazardParams {
    mortality: f64,
    extinction: f64,
    birth: f64,
    theta: f64,
    alpha: f64,
    n0: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    m: f64,
    #[serde(rename = "M")]
    big_m: f64,
    b: f64,
    #[serde(default = "default_theta")]
    theta: f64,
    #[serde(default = "default_alpha")]
    alpha: f64,
    #[serde(default = "default_n0")]
    n0: f64,
}

fn default_theta() -> f64 {
    1.0
}

fn default_alpha() -> f64 {
    0.5
}

fn default_n0() -> f64 {
    1.0
}

impl TryFrom<RawParams> for HazardParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        HazardParams::new(raw.m, raw.big_m, raw.b)?
            .with_theta(raw.theta)?
            .with_alpha(raw.alpha)?
            .with_n0(raw.n0)
    }
}

impl From<HazardParams> for RawParams {
    fn from(p: HazardParams) -> Self {
        RawParams {
            m: p.mortality,
            big_m: p.extinction,
            b: p.birth,
            theta: p.theta,
            alpha: p.alpha,
            n0: p.n0,
        }
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be a probability in [0, 1]",
        })
    }
}

impl HazardParams {
    /// Builds a parameter set with `theta = 1`, `alpha = 0.5` and `N0 = 1`.
    pub fn new(mortality: f64, extinction: f64, birth: f64) -> Result<Self> {
        check_probability("m", mortality)?;
        check_probability("M", extinction)?;
        if !(birth >= 0.0 && birth.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "b",
                value: birth,
                reason: "must be a finite rate >= 0",
            });
        }
        Ok(HazardParams {
            mortality,
            extinction,
            birth,
            theta: default_theta(),
            alpha: default_alpha(),
            n0: default_n0(),
        })
    }

    /// Parameters with the birth rate chosen so that the population is
    /// stationary: `(1 + b)(1 - m) = 1`.
    pub fn zero_growth(mortality: f64, extinction: f64) -> Result<Self> {
        if mortality >= 1.0 {
            return Err(Error::InvalidParameter {
                name: "m",
                value: mortality,
                reason: "zero growth needs m < 1",
            });
        }
        Self::new(mortality, extinction, mortality / (1.0 - mortality))
    }

    pub fn with_theta(mut self, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "must lie in [0, 1]",
            });
        }
        self.theta = theta;
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must lie in the open interval (0, 1)",
            });
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn with_n0(mut self, n0: f64) -> Result<Self> {
        if !(n0 > 0.0 && n0.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "n0",
                value: n0,
                reason: "must be a finite size > 0",
            });
        }
        self.n0 = n0;
        Ok(self)
    }

    pub fn with_mortality(self, mortality: f64) -> Result<Self> {
        Self::new(mortality, self.extinction, self.birth)?.copy_shape(self)
    }

    pub fn with_extinction(self, extinction: f64) -> Result<Self> {
        Self::new(self.mortality, extinction, self.birth)?.copy_shape(self)
    }

    pub fn with_birth(self, birth: f64) -> Result<Self> {
        Self::new(self.mortality, self.extinction, birth)?.copy_shape(self)
    }

    fn copy_shape(mut self, from: HazardParams) -> Result<Self> {
        self.theta = from.theta;
        self.alpha = from.alpha;
        self.n0 = from.n0;
        Ok(self)
    }

    /// Individual death hazard `m`.
    pub fn mortality(&self) -> f64 {
        self.mortality
    }

    /// Extinction hazard `M`.
    pub fn extinction(&self) -> f64 {
        self.extinction
    }

    /// Birth rate `b`.
    pub fn birth(&self) -> f64 {
        self.birth
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    /// `1 + n = (1 + b)(1 - m)`.
    pub fn gross_growth(&self) -> f64 {
        (1.0 + self.birth) * (1.0 - self.mortality)
    }

    /// Net growth rate `n`.
    pub fn growth(&self) -> f64 {
        self.gross_growth() - 1.0
    }

    /// Per-period probability that an individual dies: `M + m - Mm`.
    pub fn death_hazard(&self) -> f64 {
        self.extinction + self.mortality - self.extinction * self.mortality
    }

    /// True when neither hazard is present and lifetimes are infinite.
    pub fn is_degenerate(&self) -> bool {
        self.mortality == 0.0 && self.extinction == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_is_derived() {
        let p = HazardParams::new(0.02, 0.01, 0.03).unwrap();
        assert_eq!(p.gross_growth(), 1.03 * 0.98);
        assert!((p.growth() - (1.03 * 0.98 - 1.0)).abs() < 1e-16);
    }

    #[test]
    fn zero_growth_birth_rate() {
        let p = HazardParams::zero_growth(0.02, 0.01).unwrap();
        assert!(p.growth().abs() < 1e-15);
        assert!(HazardParams::zero_growth(1.0, 0.0).is_err());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(HazardParams::new(-0.1, 0.0, 0.0).is_err());
        assert!(HazardParams::new(0.1, 1.5, 0.0).is_err());
        assert!(HazardParams::new(0.1, 0.1, -1.0).is_err());
        assert!(HazardParams::new(0.1, 0.1, f64::NAN).is_err());
        let p = HazardParams::new(0.1, 0.1, 0.0).unwrap();
        assert!(p.with_alpha(0.0).is_err());
        assert!(p.with_alpha(1.0).is_err());
        assert!(p.with_theta(1.01).is_err());
        assert!(p.with_n0(0.0).is_err());
    }

    #[test]
    fn degenerate_flag() {
        assert!(HazardParams::new(0.0, 0.0, 0.5).unwrap().is_degenerate());
        assert!(!HazardParams::new(0.0, 0.1, 0.5).unwrap().is_degenerate());
    }

    #[test]
    fn serde_validates() {
        let ok: HazardParams =
            serde_json::from_str(r#"{"m":0.02,"M":0.01,"b":0.03,"theta":0.5}"#).unwrap();
        assert_eq!(ok.theta(), 0.5);
        assert_eq!(ok.alpha(), 0.5);
        let bad = serde_json::from_str::<HazardParams>(r#"{"m":2.0,"M":0.01,"b":0.03}"#);
        assert!(bad.is_err());
    }
}
