//! Sequential via-point routing among stationary point obstacles.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::geometry::{dist, lerp, segment_point_distance, Configuration, ObjectPaths, Point};
use crate::error::PlanError;

/// Tuning for the randomized planners.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannerOptions {
    /// Required clearance between objects, and between objects and obstacles.
    pub margin: f64,
    /// Maximum number of candidate routes tried before giving up.
    pub budget: usize,
    pub seed: u64,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        PlannerOptions {
            margin: 0.05,
            budget: 20_000,
            seed: 0,
        }
    }
}

const TRIES_PER_OBJECT: usize = 200;

#[derive(Debug, Clone)]
struct Leg {
    object: usize,
    from: Point,
    to: Point,
}

fn polyline_clear(points: &[Point], blockers: &[Point], margin: f64) -> bool {
    points.windows(2).all(|w| {
        blockers
            .iter()
            .all(|b| segment_point_distance(&w[0], &w[1], b) >= margin)
    })
}

struct Router<'a> {
    dim: usize,
    obstacles: &'a [Point],
    margin: f64,
    lo: Point,
    hi: Point,
}

impl Router<'_> {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Point {
        let mut p = [0.0; 3];
        for (c, x) in p.iter_mut().enumerate().take(self.dim) {
            *x = rng.gen_range(self.lo[c]..=self.hi[c]);
        }
        p
    }

    /// A clear polyline from `from` to `to`, or `None` once `tries` run out.
    fn route(
        &self,
        from: Point,
        to: Point,
        others: &[Point],
        rng: &mut ChaCha8Rng,
        attempts: &mut usize,
        budget: usize,
    ) -> Option<Vec<Point>> {
        let blockers: Vec<Point> = self.obstacles.iter().chain(others).copied().collect();
        if blockers.iter().any(|b| dist(b, &to) < self.margin) {
            *attempts += 1;
            return None;
        }
        for t in 0..TRIES_PER_OBJECT {
            if *attempts >= budget {
                return None;
            }
            *attempts += 1;
            let vias = match t {
                0 => 0,
                t if t < TRIES_PER_OBJECT / 2 => 1,
                _ => 2,
            };
            let mut line = vec![from];
            line.extend((0..vias).map(|_| self.sample(rng)));
            line.push(to);
            if polyline_clear(&line, &blockers, self.margin) {
                return Some(line);
            }
        }
        None
    }

    /// Moves every object from `current` to `targets`, one at a time in `order`.
    fn route_all(
        &self,
        current: &mut [Point],
        targets: &[Point],
        order: &[usize],
        rng: &mut ChaCha8Rng,
        attempts: &mut usize,
        budget: usize,
    ) -> Option<Vec<Leg>> {
        let mut legs = Vec::new();
        for &obj in order {
            let others: Vec<Point> = (0..current.len())
                .filter(|&o| o != obj)
                .map(|o| current[o])
                .collect();
            let line = self.route(current[obj], targets[obj], &others, rng, attempts, budget)?;
            legs.extend(line.windows(2).map(|w| Leg {
                object: obj,
                from: w[0],
                to: w[1],
            }));
            current[obj] = targets[obj];
        }
        Some(legs)
    }

    /// Parking spots clear of every start, goal, obstacle and each other.
    fn parking(
        &self,
        taken: &[Point],
        count: usize,
        rng: &mut ChaCha8Rng,
        attempts: &mut usize,
        budget: usize,
    ) -> Option<Vec<Point>> {
        let mut spots: Vec<Point> = Vec::with_capacity(count);
        while spots.len() < count {
            if *attempts >= budget {
                return None;
            }
            *attempts += 1;
            let p = self.sample(rng);
            let clear = taken
                .iter()
                .chain(self.obstacles)
                .chain(&spots)
                .all(|q| dist(&p, q) >= 2.0 * self.margin);
            if clear {
                spots.push(p);
            }
        }
        Some(spots)
    }
}

/// Piecewise-linear paths from `start` to `goal` among stationary `obstacles`.
///
/// Objects move one at a time along routes through random via-points while
/// the others wait. Every segment keeps distance at least `margin` from every
/// obstacle and every waiting object, so the clearance holds along the whole
/// continuous motion, not only at the samples. The motion is sampled at
/// `steps + 1` frames uniformly in total arc length.
///
/// Rounds alternate between routing straight to the goals and routing via
/// random parking spots; after a failed round the order is reshuffled.
pub fn stationary_planner(
    start: &Configuration,
    goal: &Configuration,
    obstacles: &[Point],
    steps: usize,
    opts: &PlannerOptions,
) -> Result<ObjectPaths, PlanError> {
    if steps == 0 {
        return Err(PlanError::TooFewFrames(1));
    }
    let route = plan_route(start, goal, obstacles, opts)?;
    ObjectPaths::new(start.dim(), route.uniform_frames(steps))
}

/// A continuous stationary motion: objects follow `legs` one after another.
#[derive(Debug, Clone)]
pub(crate) struct Route {
    start: Vec<Point>,
    goal: Vec<Point>,
    legs: Vec<Leg>,
    total: f64,
}

impl Route {
    pub(crate) fn length(&self) -> f64 {
        self.total
    }

    /// Positions after travelling `u` along the concatenated legs.
    pub(crate) fn at(&self, u: f64) -> Vec<Point> {
        let mut positions = self.start.clone();
        let mut remaining = u;
        for leg in &self.legs {
            let len = dist(&leg.from, &leg.to);
            if remaining >= len {
                positions[leg.object] = leg.to;
                remaining -= len;
            } else {
                positions[leg.object] = lerp(&leg.from, &leg.to, remaining / len);
                break;
            }
        }
        positions
    }

    pub(crate) fn goal(&self) -> &[Point] {
        &self.goal
    }

    /// `steps + 1` frames uniform in arc length, the last exactly at the goal.
    pub(crate) fn uniform_frames(&self, steps: usize) -> Vec<Vec<Point>> {
        let mut frames: Vec<Vec<Point>> = (0..steps)
            .map(|k| self.at(self.total * k as f64 / steps as f64))
            .collect();
        frames.push(self.goal.clone());
        frames
    }
}

pub(crate) fn plan_route(
    start: &Configuration,
    goal: &Configuration,
    obstacles: &[Point],
    opts: &PlannerOptions,
) -> Result<Route, PlanError> {
    let dim = start.dim();
    if goal.dim() != dim || goal.len() != start.len() {
        return Err(PlanError::Precondition(
            "start and goal differ in dimension or object count".into(),
        ));
    }
    if !(opts.margin > 0.0 && opts.margin.is_finite()) {
        return Err(PlanError::Precondition(format!(
            "margin must be positive, got {}",
            opts.margin
        )));
    }
    for (name, config) in [("start", start), ("goal", goal)] {
        if config.separation() < opts.margin {
            return Err(PlanError::Precondition(format!(
                "{name} objects closer than margin {}",
                opts.margin
            )));
        }
        if config.clearance(obstacles) < opts.margin {
            return Err(PlanError::Precondition(format!(
                "{name} objects closer than margin {} to an obstacle",
                opts.margin
            )));
        }
    }

    let all = start.points().iter().chain(goal.points()).chain(obstacles);
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in all {
        for c in 0..dim {
            lo[c] = lo[c].min(p[c]);
            hi[c] = hi[c].max(p[c]);
        }
    }
    let pad = 1.0f64.max(4.0 * opts.margin);
    for c in 0..dim {
        lo[c] -= pad;
        hi[c] += pad;
    }
    for c in dim..3 {
        lo[c] = 0.0;
        hi[c] = 0.0;
    }
    let router = Router {
        dim,
        obstacles,
        margin: opts.margin,
        lo,
        hi,
    };

    let n = start.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut attempts = 0;
    let mut round = 0usize;
    let legs = loop {
        if attempts >= opts.budget {
            return Err(PlanError::PlanningFailed { attempts });
        }
        round += 1;
        let mut current = start.points().to_vec();
        // Every other round after the first goes through parking spots, which
        // resolves goals that are occupied by objects still waiting to move.
        let legs = if round % 2 == 1 {
            router.route_all(
                &mut current,
                goal.points(),
                &order,
                &mut rng,
                &mut attempts,
                opts.budget,
            )
        } else {
            let taken: Vec<Point> = start
                .points()
                .iter()
                .chain(goal.points())
                .copied()
                .collect();
            router
                .parking(&taken, n, &mut rng, &mut attempts, opts.budget)
                .and_then(|spots| {
                    let mut legs = router.route_all(
                        &mut current,
                        &spots,
                        &order,
                        &mut rng,
                        &mut attempts,
                        opts.budget,
                    )?;
                    legs.extend(router.route_all(
                        &mut current,
                        goal.points(),
                        &order,
                        &mut rng,
                        &mut attempts,
                        opts.budget,
                    )?);
                    Some(legs)
                })
        };
        match legs {
            Some(legs) => break legs,
            None => order.shuffle(&mut rng),
        }
    };

    let total = legs.iter().map(|l| dist(&l.from, &l.to)).sum();
    Ok(Route {
        start: start.points().to_vec(),
        goal: goal.points().to_vec(),
        legs,
        total,
    })
}
