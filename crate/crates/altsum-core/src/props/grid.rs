//! Test grids on `[0, A]`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math;

/// Axis point placement.
///
/// `Mixed` is the default: half uniform on `[0, A]`, half geometric from
/// `A·10⁻⁶` up to `A`, plus the exact point 0, so both boundary and
/// large-argument violations are visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum GridLayout {
    Uniform,
    Geometric,
    #[default]
    Mixed,
}

/// Grid parameters: domain bound `A`, points per axis, layout, and an
/// optional jitter seed (0 disables jitter).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GridSpec {
    pub bound: f64,
    pub points: usize,
    pub layout: GridLayout,
    pub jitter_seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            bound: 10.0,
            points: 200,
            layout: GridLayout::Mixed,
            jitter_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("grid needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("grid bound must be finite and positive, got {0}")]
    BadBound(f64),
}

impl GridSpec {
    pub fn with_bound(bound: f64) -> Self {
        GridSpec {
            bound,
            ..GridSpec::default()
        }
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if self.points < 2 {
            return Err(GridError::TooFewPoints(self.points));
        }
        if !self.bound.is_finite() || self.bound <= 0.0 {
            return Err(GridError::BadBound(self.bound));
        }
        Ok(())
    }

    /// Sorted axis points in `[0, A]`, starting at exactly 0.
    pub fn axis_points(&self) -> Result<Vec<f64>, GridError> {
        self.validate()?;
        let a = self.bound;
        let n = self.points;
        let mut pts: Vec<f64> = Vec::with_capacity(n);
        match self.layout {
            GridLayout::Uniform => {
                for i in 0..n {
                    pts.push(a * i as f64 / (n - 1) as f64);
                }
            }
            GridLayout::Geometric => {
                pts.push(0.0);
                push_geometric(&mut pts, a, n - 1);
            }
            GridLayout::Mixed => {
                pts.push(0.0);
                let geo = (n - 1) / 2;
                let uni = n - 1 - geo;
                for i in 1..=uni {
                    pts.push(a * i as f64 / uni as f64);
                }
                push_geometric(&mut pts, a, geo);
            }
        }
        if self.jitter_seed != 0 {
            self.jitter(&mut pts);
        }
        pts.sort_unstable_by(|x, y| x.partial_cmp(y).expect("grid points are finite"));
        pts.dedup();
        Ok(pts)
    }

    /// Perturbs interior points by up to 40% of the local gap; the
    /// endpoints 0 and A stay fixed.
    fn jitter(&self, pts: &mut [f64]) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.jitter_seed);
        for i in 1..pts.len().saturating_sub(1) {
            let gap = (pts[i + 1] - pts[i - 1]) / 2.0;
            let shift: f64 = rng.random_range(-0.4..=0.4) * gap;
            pts[i] = (pts[i] + shift).clamp(0.0, self.bound);
        }
    }
}

/// `count` log-spaced points from `A·10⁻⁶` up to `A` inclusive.
fn push_geometric(pts: &mut Vec<f64>, a: f64, count: usize) {
    if count == 0 {
        return;
    }
    if count == 1 {
        pts.push(a);
        return;
    }
    let lo = a * 1e-6;
    let ratio = math::ln(a / lo) / (count - 1) as f64;
    for i in 0..count {
        pts.push((lo * math::exp(ratio * i as f64)).min(a));
    }
}
