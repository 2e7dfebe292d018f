use crate::error::{Error, Result};

/// Numerical thresholds shared by every kernel.
///
/// The defaults are sized for double precision at d <= 8 and word lengths
/// up to about 14.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Smallest singular value accepted as nonsingular.
    pub svd_tol: f64,
    /// Allowed deviation of a determinant from 1.
    pub det_tol: f64,
    /// Allowed deviation of a Cartan vector's component sum from 0.
    pub sum_tol: f64,
    /// Allowed entrywise error of a recomposed KAK decomposition.
    pub recompose_tol: f64,
    /// Singular values at or below this count as zero in rank decisions.
    pub rank_tol: f64,
    /// Allowed deviation from orthonormality of flag frames.
    pub angle_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            svd_tol: 1e-12,
            det_tol: 1e-9,
            sum_tol: 1e-9,
            recompose_tol: 1e-8,
            rank_tol: 1e-7,
            angle_tol: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.named() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::BadTolerance { name, value });
            }
        }
        Ok(())
    }

    pub fn named(&self) -> [(&'static str, f64); 6] {
        [
            ("svd_tol", self.svd_tol),
            ("det_tol", self.det_tol),
            ("sum_tol", self.sum_tol),
            ("recompose_tol", self.recompose_tol),
            ("rank_tol", self.rank_tol),
            ("angle_tol", self.angle_tol),
        ]
    }

    /// Overrides one tolerance by name, e.g. `rank_tol`.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "svd_tol" => &mut self.svd_tol,
            "det_tol" => &mut self.det_tol,
            "sum_tol" => &mut self.sum_tol,
            "recompose_tol" => &mut self.recompose_tol,
            "rank_tol" => &mut self.rank_tol,
            "angle_tol" => &mut self.angle_tol,
            _ => return Err(Error::Invalid(format!("unknown tolerance `{name}`"))),
        };
        *slot = value;
        self.validate()
    }
}
