//! Points, configurations and sampled trajectories in `R^2` or `R^3`.
//!
//! Points are stored as `[f64; 3]`; planar data keeps the last coordinate at 0.

use crate::error::PlanError;

pub type Point = [f64; 3];

pub(crate) fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add_scaled(a: &Point, s: f64, v: &Point) -> Point {
    [a[0] + s * v[0], a[1] + s * v[1], a[2] + s * v[2]]
}

pub(crate) fn norm(v: &Point) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub fn dist(a: &Point, b: &Point) -> f64 {
    norm(&sub(a, b))
}

pub(crate) fn lerp(a: &Point, b: &Point, s: f64) -> Point {
    add_scaled(a, s, &sub(b, a))
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn segment_point_distance(a: &Point, b: &Point, p: &Point) -> f64 {
    let ab = sub(b, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
    if len2 == 0.0 {
        return dist(a, p);
    }
    let ap = sub(p, a);
    let s = ((ap[0] * ab[0] + ap[1] * ab[1] + ap[2] * ab[2]) / len2).clamp(0.0, 1.0);
    dist(&add_scaled(a, s, &ab), p)
}

pub(crate) fn check_dim(dim: usize) -> Result<(), PlanError> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(PlanError::BadDimension(dim))
    }
}

/// Converts a coordinate list of length `dim` into a [`Point`].
pub fn point_from_slice(dim: usize, coords: &[f64]) -> Result<Point, PlanError> {
    check_dim(dim)?;
    if coords.len() != dim {
        return Err(PlanError::PointDimension {
            expected: dim,
            got: coords.len(),
        });
    }
    let mut p = [0.0; 3];
    p[..dim].copy_from_slice(coords);
    Ok(p)
}

/// Smallest pairwise distance and the pair realizing it; `None` with fewer than two points.
pub(crate) fn closest_pair(points: &[Point]) -> Option<(f64, usize, usize)> {
    let mut best: Option<(f64, usize, usize)> = None;
    for a in 0..points.len() {
        for b in (a + 1)..points.len() {
            let d = dist(&points[a], &points[b]);
            if best.is_none_or(|(bd, _, _)| d < bd) {
                best = Some((d, a, b));
            }
        }
    }
    best
}

fn validate_frames(dim: usize, frames: &[Vec<Point>]) -> Result<usize, PlanError> {
    check_dim(dim)?;
    let count = frames.first().map_or(0, Vec::len);
    for (k, frame) in frames.iter().enumerate() {
        if frame.len() != count {
            return Err(PlanError::FrameSize {
                frame: k,
                expected: count,
                got: frame.len(),
            });
        }
        if frame.iter().flatten().any(|c| !c.is_finite()) {
            return Err(PlanError::NonFinite { frame: k });
        }
        if dim == 2 && frame.iter().any(|p| p[2] != 0.0) {
            return Err(PlanError::Format(format!(
                "planar frame {k} has a nonzero third coordinate"
            )));
        }
    }
    Ok(count)
}

/// `n` pairwise distinct points: a start or goal configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    dim: usize,
    points: Vec<Point>,
}

impl Configuration {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self, PlanError> {
        validate_frames(dim, std::slice::from_ref(&points))?;
        if let Some((d, a, b)) = closest_pair(&points) {
            if d == 0.0 {
                return Err(PlanError::Coincident { frame: 0, a, b });
            }
        }
        Ok(Configuration { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest distance between two of the points (infinite for fewer than two).
    pub fn separation(&self) -> f64 {
        closest_pair(&self.points).map_or(f64::INFINITY, |(d, _, _)| d)
    }

    /// Smallest distance from any point to any of `others`.
    pub fn clearance(&self, others: &[Point]) -> f64 {
        let mut best = f64::INFINITY;
        for p in &self.points {
            for q in others {
                best = best.min(dist(p, q));
            }
        }
        best
    }
}

/// Uniformly time-sampled positions of `m` distinct moving obstacles, frames `0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleTrajectory {
    dim: usize,
    frames: Vec<Vec<Point>>,
    min_sep: f64,
}

impl ObstacleTrajectory {
    /// Validates the frames and certifies the minimum pairwise separation.
    pub fn new(dim: usize, frames: Vec<Vec<Point>>) -> Result<Self, PlanError> {
        if frames.len() < 2 {
            return Err(PlanError::TooFewFrames(frames.len()));
        }
        validate_frames(dim, &frames)?;
        let mut min_sep = f64::INFINITY;
        for (k, frame) in frames.iter().enumerate() {
            if let Some((d, a, b)) = closest_pair(frame) {
                if d == 0.0 {
                    return Err(PlanError::Coincident { frame: k, a, b });
                }
                min_sep = min_sep.min(d);
            }
        }
        Ok(ObstacleTrajectory {
            dim,
            frames,
            min_sep,
        })
    }

    /// Obstacles that never move.
    pub fn stationary(dim: usize, points: Vec<Point>, steps: usize) -> Result<Self, PlanError> {
        Self::new(dim, vec![points; steps.max(1) + 1])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.frames[0].len()
    }

    /// Number of time steps `K`; there are `K + 1` frames.
    pub fn steps(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn frames(&self) -> &[Vec<Point>] {
        &self.frames
    }

    pub fn frame(&self, k: usize) -> &[Point] {
        &self.frames[k]
    }

    /// Certified lower bound on obstacle separation over all frames (infinite for `m < 2`).
    pub fn min_sep(&self) -> f64 {
        self.min_sep
    }

    /// Largest distance any obstacle travels in one step.
    pub fn max_step(&self) -> f64 {
        self.frames
            .windows(2)
            .flat_map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| dist(a, b)))
            .fold(0.0, f64::max)
    }

    pub fn is_stationary(&self) -> bool {
        self.frames.windows(2).all(|w| w[0] == w[1])
    }

    /// Inserts `factor - 1` linearly interpolated frames inside every step.
    pub fn refine(&self, factor: usize) -> Result<Self, PlanError> {
        let factor = factor.max(1);
        let mut frames = Vec::with_capacity(self.steps() * factor + 1);
        for w in self.frames.windows(2) {
            for s in 0..factor {
                let t = s as f64 / factor as f64;
                frames.push(w[0].iter().zip(&w[1]).map(|(a, b)| lerp(a, b, t)).collect());
            }
        }
        frames.push(self.frames[self.steps()].clone());
        Self::new(self.dim, frames)
    }

    /// Smallest uniform refinement whose per-step displacement is below `limit`.
    pub fn refine_to_step(&self, limit: f64) -> Result<Self, PlanError> {
        let step = self.max_step();
        if step < limit {
            return Ok(self.clone());
        }
        let factor = (step / limit).floor() as usize + 1;
        self.refine(factor)
    }
}

/// Sampled motions of `n` objects on the same grid as an obstacle trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectPaths {
    dim: usize,
    frames: Vec<Vec<Point>>,
}

impl ObjectPaths {
    /// Frames need consistent sizes and finite coordinates; collisions are
    /// not rejected here, that is what verification reports.
    pub fn new(dim: usize, frames: Vec<Vec<Point>>) -> Result<Self, PlanError> {
        if frames.len() < 2 {
            return Err(PlanError::TooFewFrames(frames.len()));
        }
        validate_frames(dim, &frames)?;
        Ok(ObjectPaths { dim, frames })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.frames[0].len()
    }

    pub fn steps(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn frames(&self) -> &[Vec<Point>] {
        &self.frames
    }

    pub fn frame(&self, k: usize) -> &[Point] {
        &self.frames[k]
    }

    pub fn start(&self) -> &[Point] {
        &self.frames[0]
    }

    pub fn end(&self) -> &[Point] {
        &self.frames[self.steps()]
    }
}
