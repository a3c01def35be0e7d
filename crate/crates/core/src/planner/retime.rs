//! Choosing where along a stationary route each frame sits.
//!
//! `ψ_{t_k}^{-1}` drags points lying on an obstacle's past path along with
//! the obstacle, so crossing that tube in the stationary picture means going
//! around the obstacle's current position in the real one. Uniform arc-length
//! sampling can put such a crossing between two frames. Here frames advance
//! along the route greedily under a per-step bound on the pulled-back motion,
//! and the bound is bisected down to the smallest one that still reaches the
//! goal by the last frame.

use super::geometry::{dist, Point};
use super::isotopy::AmbientIsotopy;
use super::stationary::Route;
use crate::error::PlanError;

/// Coarse scan increments per frame of uniform timing.
const SUBDIVISIONS: usize = 8;
/// Bisections locating the furthest admissible route position.
const REFINEMENTS: usize = 12;
const BISECTIONS: usize = 14;

struct Timing {
    /// Route position of every frame.
    positions: Vec<f64>,
    max_step: f64,
}

struct Retimer<'a> {
    route: &'a Route,
    isotopy: &'a AmbientIsotopy,
    steps: usize,
}

fn step(a: &[Point], b: &[Point]) -> f64 {
    a.iter().zip(b).map(|(p, q)| dist(p, q)).fold(0.0, f64::max)
}

impl Retimer<'_> {
    fn config(&self, u: f64) -> Vec<Point> {
        if u >= self.route.length() {
            self.route.goal().to_vec()
        } else {
            self.route.at(u)
        }
    }

    fn pull(&self, k: usize, u: f64) -> Result<Vec<Point>, PlanError> {
        self.config(u)
            .iter()
            .map(|p| self.isotopy.apply_inverse(k, p))
            .collect()
    }

    fn uniform(&self) -> Result<Timing, PlanError> {
        let total = self.route.length();
        let mut positions: Vec<f64> = (0..self.steps)
            .map(|k| total * k as f64 / self.steps as f64)
            .collect();
        positions.push(total);
        let mut max_step: f64 = 0.0;
        let mut prev = self.pull(0, 0.0)?;
        for (k, &u) in positions.iter().enumerate().skip(1) {
            let cur = self.pull(k, u)?;
            max_step = max_step.max(step(&prev, &cur));
            prev = cur;
        }
        Ok(Timing {
            positions,
            max_step,
        })
    }

    /// Advances as far as possible each frame without a step above `bound`.
    fn greedy(&self, bound: f64) -> Result<Option<Timing>, PlanError> {
        let total = self.route.length();
        let du = total / (SUBDIVISIONS * self.steps) as f64;
        let mut positions = vec![0.0];
        let mut u = 0.0;
        let mut prev = self.pull(0, 0.0)?;
        let mut max_step: f64 = 0.0;
        for k in 1..=self.steps {
            let mut good: Option<(f64, Vec<Point>, f64)> = None;
            let mut bad = None;
            let mut cand = u;
            loop {
                let pos = self.pull(k, cand)?;
                let s = step(&prev, &pos);
                if s > bound {
                    bad = Some(cand);
                    break;
                }
                good = Some((cand, pos, s));
                if cand >= total {
                    break;
                }
                cand = (cand + du).min(total);
            }
            let Some(mut best) = good else {
                return Ok(None);
            };
            if let Some(mut hi) = bad {
                for _ in 0..REFINEMENTS {
                    let mid = 0.5 * (best.0 + hi);
                    let pos = self.pull(k, mid)?;
                    let s = step(&prev, &pos);
                    if s <= bound {
                        best = (mid, pos, s);
                    } else {
                        hi = mid;
                    }
                }
            }
            let (next, pos, s) = best;
            u = next;
            prev = pos;
            max_step = max_step.max(s);
            positions.push(u);
        }
        Ok((u >= total).then_some(Timing {
            positions,
            max_step,
        }))
    }
}

/// Stationary frames `σ(u_k)`, `k = 0..=K`, with nondecreasing `u_k` chosen to
/// keep `max_k |ψ_{k+1}^{-1}(σ(u_{k+1})) - ψ_k^{-1}(σ(u_k))|` small. Never worse
/// than uniform arc-length timing; the last frame is the route's goal exactly.
pub(crate) fn retime(
    route: &Route,
    isotopy: &AmbientIsotopy,
) -> Result<Vec<Vec<Point>>, PlanError> {
    let retimer = Retimer {
        route,
        isotopy,
        steps: isotopy.frames() - 1,
    };
    let mut best = retimer.uniform()?;
    let (mut lo, mut hi) = (0.0, best.max_step);
    for _ in 0..BISECTIONS {
        let mid = 0.5 * (lo + hi);
        match retimer.greedy(mid)? {
            Some(timing) => {
                hi = timing.max_step;
                if timing.max_step < best.max_step {
                    best = timing;
                }
            }
            None => lo = mid,
        }
    }
    Ok(best.positions.iter().map(|&u| retimer.config(u)).collect())
}
