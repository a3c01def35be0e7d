//! A compactly supported ambient isotopy that carries every moving obstacle
//! back to its starting position.
//!
//! Each elementary layer is a bump translation
//! `x ↦ x + β(|x - c| / ρ) v` with `β(s) = (1 - s²)²` on `s < 1` and `0`
//! beyond. While `|v| L_β / ρ < 1` (with `L_β = max |β'|`) the layer is a
//! diffeomorphism of the ambient space that is the identity outside the ball
//! of radius `ρ` around `c`, and it maps `c` to `c + v` exactly.
//!
//! For step `k` (frame `k+1` to frame `k`) and obstacle `j` the layer has centre
//! `C_j(t_{k+1})` and displacement `C_j(t_k) - C_j(t_{k+1})`. The map at grid
//! time `t_k` is `ψ_k = M_0 ∘ M_1 ∘ … ∘ M_{k-1}`, where `M_s` applies the
//! layers of step `s` for obstacles `1..m` in order.

use serde::Serialize;

use super::geometry::{add_scaled, dist, norm, sub, ObstacleTrajectory, Point};
use crate::error::PlanError;

/// Lipschitz constant of the bump profile, `max |β'| = 8 / (3√3)`.
pub const BUMP_LIPSCHITZ: f64 = 1.539_600_717_839_002;

/// Fixed-point tolerance used when inverting a layer.
pub const INVERSE_TOLERANCE: f64 = 1e-12;

const MAX_INVERSE_ITERATIONS: usize = 200;

/// `(1 - s²)²` for `s < 1`, zero otherwise.
pub fn bump(s: f64) -> f64 {
    if s >= 1.0 {
        0.0
    } else {
        let u = 1.0 - s * s;
        u * u
    }
}

/// One compactly supported translation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BumpLayer {
    pub center: Point,
    pub displacement: Point,
    pub obstacle: usize,
    pub step: usize,
}

impl BumpLayer {
    fn apply(&self, x: &Point, radius: f64) -> Point {
        let s = dist(x, &self.center) / radius;
        if s >= 1.0 {
            return *x;
        }
        add_scaled(x, bump(s), &self.displacement)
    }

    /// Solves `x + β(|x-c|/ρ) v = y` by the contraction `x ← y - β(|x-c|/ρ) v`.
    fn invert(&self, y: &Point, radius: f64) -> Point {
        if dist(y, &self.center) >= radius {
            return *y;
        }
        let mut x = *y;
        for _ in 0..MAX_INVERSE_ITERATIONS {
            let next = add_scaled(
                y,
                -bump(dist(&x, &self.center) / radius),
                &self.displacement,
            );
            let moved = dist(&next, &x);
            x = next;
            if moved <= INVERSE_TOLERANCE {
                break;
            }
        }
        x
    }

    /// Contraction factor `|v| L_β / ρ`; must stay below 1.
    pub fn contraction(&self, radius: f64) -> f64 {
        norm(&self.displacement) * BUMP_LIPSCHITZ / radius
    }
}

/// Composite of bump layers on the grid of an obstacle trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmbientIsotopy {
    dim: usize,
    radius: f64,
    frames: usize,
    /// `steps[s]` holds the layers of step `s`, in obstacle order.
    steps: Vec<Vec<BumpLayer>>,
}

/// Builds the isotopy pinning every obstacle of `trajectory` to frame 0.
///
/// Needs `0 < radius < min_sep / 2` and every per-step obstacle displacement
/// below `radius / (2 L_β)`, so each layer contracts by at most one half on
/// inversion. Steps where an obstacle stays put contribute no layer.
pub fn build_isotopy(
    trajectory: &ObstacleTrajectory,
    radius: f64,
) -> Result<AmbientIsotopy, PlanError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(PlanError::BadRadius(radius));
    }
    if radius >= trajectory.min_sep() / 2.0 {
        return Err(PlanError::RadiusTooLarge {
            radius,
            min_sep: trajectory.min_sep(),
        });
    }
    let limit = radius / (2.0 * BUMP_LIPSCHITZ);
    let mut steps = Vec::with_capacity(trajectory.steps());
    for (step, w) in trajectory.frames().windows(2).enumerate() {
        let mut layers = Vec::new();
        for (obstacle, (now, next)) in w[0].iter().zip(&w[1]).enumerate() {
            let displacement = sub(now, next);
            let len = norm(&displacement);
            if len >= limit {
                return Err(PlanError::StepTooCoarse {
                    step,
                    obstacle,
                    displacement: len,
                    limit,
                });
            }
            if len > 0.0 {
                layers.push(BumpLayer {
                    center: *next,
                    displacement,
                    obstacle,
                    step,
                });
            }
        }
        steps.push(layers);
    }
    Ok(AmbientIsotopy {
        dim: trajectory.dim(),
        radius,
        frames: trajectory.steps() + 1,
        steps,
    })
}

impl AmbientIsotopy {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn layers(&self) -> impl Iterator<Item = &BumpLayer> {
        self.steps.iter().flatten()
    }

    pub fn layer_count(&self) -> usize {
        self.steps.iter().map(Vec::len).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.layer_count() == 0
    }

    /// Largest contraction factor over all layers (0 for the identity).
    pub fn max_contraction(&self) -> f64 {
        self.layers()
            .map(|l| l.contraction(self.radius))
            .fold(0.0, f64::max)
    }

    fn check_time(&self, k: usize) -> Result<(), PlanError> {
        if k < self.frames {
            Ok(())
        } else {
            Err(PlanError::OffGrid {
                index: k,
                frames: self.frames,
            })
        }
    }

    /// `ψ_{t_k}(x)`.
    pub fn apply(&self, k: usize, x: &Point) -> Result<Point, PlanError> {
        self.check_time(k)?;
        let mut p = *x;
        for layers in self.steps[..k].iter().rev() {
            for layer in layers {
                p = layer.apply(&p, self.radius);
            }
        }
        Ok(p)
    }

    /// `ψ_{t_k}^{-1}(y)`.
    pub fn apply_inverse(&self, k: usize, y: &Point) -> Result<Point, PlanError> {
        self.check_time(k)?;
        let mut p = *y;
        for layers in &self.steps[..k] {
            for layer in layers.iter().rev() {
                p = layer.invert(&p, self.radius);
            }
        }
        Ok(p)
    }

    /// `max_{j,k} |ψ_{t_k}(C_j(t_k)) - C_j(0)|`.
    pub fn pinning_error(&self, trajectory: &ObstacleTrajectory) -> Result<f64, PlanError> {
        let origin = trajectory.frame(0);
        let mut worst: f64 = 0.0;
        for (k, frame) in trajectory.frames().iter().enumerate() {
            for (c, c0) in frame.iter().zip(origin) {
                worst = worst.max(dist(&self.apply(k, c)?, c0));
            }
        }
        Ok(worst)
    }
}
