use crate::error::{Error, Result};

/// Numeric tolerances used throughout the pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Point and distance comparisons.
    pub geom: f64,
    /// Sign cutoff for the in-circle predicate (flip hysteresis).
    pub pred: f64,
    /// Matrix normalization and group element comparison.
    pub norm: f64,
    /// Angle sums and convexity.
    pub angle: f64,
    /// Area comparisons against Gauss-Bonnet.
    pub area: f64,
    /// Distance below which dual vertices are merged.
    pub merge: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { geom: 1e-9, pred: 1e-12, norm: 1e-12, angle: 1e-8, area: 1e-8, merge: 1e-7 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("geom", self.geom),
            ("pred", self.pred),
            ("norm", self.norm),
            ("angle", self.angle),
            ("area", self.area),
            ("merge", self.merge),
        ];
        for (name, value) in all {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Schema(format!("tolerance {name} must be positive, got {value}")));
            }
        }
        Ok(())
    }

    /// Sets one tolerance by name (`geom`, `pred`, `norm`, `angle`, `area`, `merge`).
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "geom" => &mut self.geom,
            "pred" => &mut self.pred,
            "norm" => &mut self.norm,
            "angle" => &mut self.angle,
            "area" => &mut self.area,
            "merge" => &mut self.merge,
            _ => return Err(Error::Schema(format!("unknown tolerance '{name}'"))),
        };
        *slot = value;
        self.validate()
    }
}
