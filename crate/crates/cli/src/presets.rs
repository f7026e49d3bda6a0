//! Built-in parameter grids.

use extinction_discount::model::{ConsumptionPath, HazardParams, TailRule, Utility};

fn point(m: f64, big_m: f64, b: f64, theta: f64, alpha: f64) -> HazardParams {
    HazardParams::new(m, big_m, b)
        .and_then(|p| p.with_theta(theta))
        .and_then(|p| p.with_alpha(alpha))
        .expect("preset points are valid")
}

/// Default grid of the `table1` command: `m x M x b` over three mortality
/// levels, two extinction levels, and zero or positive births.
pub fn table1_grid() -> Vec<HazardParams> {
    let mut grid = Vec::with_capacity(12);
    for m in [0.01, 0.02, 0.05] {
        for big_m in [0.001, 0.01] {
            for b in [0.0, 0.03] {
                grid.push(point(m, big_m, b, 0.5, 0.5));
            }
        }
    }
    grid
}

/// Oracle grid of the `verify` command.
///
/// Every point has `b > 0` and `(1-M)(1+n)^2 < 1`, so each Monte Carlo
/// estimator has finite variance and its standard error is meaningful.
pub fn verify_grid() -> Vec<HazardParams> {
    vec![
        point(0.02, 0.01, 0.02 / 0.98, 0.5, 0.5),
        point(0.02, 0.05, 0.03, 1.0, 0.5),
        point(0.001, 0.02, 0.005, 0.25, 0.9),
        point(0.1, 0.1, 0.15, 0.75, 0.3),
        point(0.3, 0.05, 0.2, 0.0, 0.7),
        point(0.5, 0.2, 0.8, 0.9, 0.9),
        point(0.05, 0.6, 0.5, 0.5, 0.1),
        point(0.01, 0.005, 0.001, 1.0, 0.5),
        point(0.2, 0.01, 0.1, 0.6, 0.2),
        point(0.02, 0.15, 0.06, 0.4, 0.6),
        point(0.8, 0.1, 2.0, 0.3, 0.8),
        point(0.05, 0.02, 0.04, 0.8, 0.4),
    ]
}

/// Consumption path and utility used by `verify`.
pub fn verify_path() -> (ConsumptionPath, Utility) {
    let path = ConsumptionPath::new(vec![2.0, 3.0, 4.0], TailRule::Geometric(1.01))
        .expect("valid preset path");
    (path, Utility::Log)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_grid_has_finite_variance() {
        let grid = verify_grid();
        assert_eq!(grid.len(), 12);
        for p in &grid {
            assert!(p.birth() > 0.0 && p.extinction() > 0.0);
            let lineage = (1.0 + p.birth()).powf(p.alpha()) * (1.0 - p.mortality());
            let g = p.gross_growth().max(lineage).max(1.0);
            assert!((1.0 - p.extinction()) * g * g < 1.0, "{p:?}");
        }
    }

    #[test]
    fn table1_grid_size() {
        assert_eq!(table1_grid().len(), 12);
    }
}
