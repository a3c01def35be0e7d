//! Sampled verification of object motions against moving obstacles.

use serde::Serialize;

use super::geometry::{closest_pair, dist, Configuration, ObjectPaths, ObstacleTrajectory};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Minimum distance required between objects and from objects to obstacles.
    /// Zero means only distinctness is required.
    pub margin: f64,
    /// Largest per-frame displacement accepted as a continuous motion.
    pub max_step: f64,
    pub endpoint_tolerance: f64,
    /// Expected start and goal; when absent the endpoint check is skipped.
    pub endpoints: Option<(Configuration, Configuration)>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            margin: 0.0,
            max_step: f64::INFINITY,
            endpoint_tolerance: 1e-9,
            endpoints: None,
        }
    }
}

/// Outcome of one condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub passed: bool,
    pub checked: bool,
    /// First offending frame, or the frame of the extreme value when passing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<usize>,
    pub detail: String,
}

impl ConditionCheck {
    fn new(passed: bool, frame: Option<usize>, detail: String) -> Self {
        ConditionCheck {
            passed,
            checked: true,
            frame,
            detail,
        }
    }

    fn skipped(detail: &str) -> Self {
        ConditionCheck {
            passed: true,
            checked: false,
            frame: None,
            detail: detail.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub frames: usize,
    pub objects: usize,
    pub obstacles: usize,
    /// Bounded per-step displacement and finite coordinates.
    pub continuity: ConditionCheck,
    /// Paths start at the given start and end at the given goal.
    pub endpoints: ConditionCheck,
    /// Objects stay apart from each other.
    pub object_separation: ConditionCheck,
    /// Objects stay apart from the obstacles at the same time.
    pub obstacle_clearance: ConditionCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_object_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_obstacle_distance: Option<f64>,
    pub max_step: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.continuity.passed
            && self.endpoints.passed
            && self.object_separation.passed
            && self.obstacle_clearance.passed
    }

    /// Smallest clearance observed, the effective margin of the plan.
    pub fn achieved_margin(&self) -> f64 {
        let a = self.min_object_distance.unwrap_or(f64::INFINITY);
        let b = self.min_obstacle_distance.unwrap_or(f64::INFINITY);
        a.min(b)
    }
}

fn clears(distance: f64, margin: f64) -> bool {
    distance > 0.0 && distance >= margin
}

/// Checks sampled paths frame by frame. Never fails; problems are reported.
pub fn verify_plan(
    paths: &ObjectPaths,
    obstacles: &ObstacleTrajectory,
    opts: &VerifyOptions,
) -> VerifyReport {
    let frames = paths.frames().len();
    let mismatch = if paths.frames().len() != obstacles.frames().len() {
        Some(format!(
            "grids differ: {} path frames, {} obstacle frames",
            paths.frames().len(),
            obstacles.frames().len()
        ))
    } else if paths.dim() != obstacles.dim() {
        Some(format!(
            "dimensions differ: paths {}, obstacles {}",
            paths.dim(),
            obstacles.dim()
        ))
    } else {
        None
    };
    if let Some(msg) = mismatch {
        let failed = ConditionCheck::new(false, None, msg);
        return VerifyReport {
            frames,
            objects: paths.count(),
            obstacles: obstacles.count(),
            continuity: failed.clone(),
            endpoints: failed.clone(),
            object_separation: failed.clone(),
            obstacle_clearance: failed,
            min_object_distance: None,
            min_obstacle_distance: None,
            max_step: f64::NAN,
        };
    }

    let mut max_step: f64 = 0.0;
    let mut step_frame = 0;
    let mut first_jump = None;
    for (k, w) in paths.frames().windows(2).enumerate() {
        for (a, b) in w[0].iter().zip(&w[1]) {
            let d = dist(a, b);
            if d > max_step {
                max_step = d;
                step_frame = k + 1;
            }
            if d > opts.max_step && first_jump.is_none() {
                first_jump = Some(k + 1);
            }
        }
    }
    let continuity = match first_jump {
        Some(k) => ConditionCheck::new(
            false,
            Some(k),
            format!("step into frame {k} exceeds {}", opts.max_step),
        ),
        None => ConditionCheck::new(
            true,
            Some(step_frame),
            format!("max step {max_step:.6e} <= {}", opts.max_step),
        ),
    };

    let endpoints = match &opts.endpoints {
        None => ConditionCheck::skipped("no expected endpoints given"),
        Some((start, goal)) => {
            let count_ok = start.len() == paths.count() && goal.len() == paths.count();
            let err = |want: &Configuration, got: &[[f64; 3]]| {
                want.points()
                    .iter()
                    .zip(got)
                    .map(|(a, b)| dist(a, b))
                    .fold(0.0, f64::max)
            };
            if !count_ok {
                ConditionCheck::new(false, None, "object count differs from endpoints".into())
            } else {
                let e0 = err(start, paths.start());
                let e1 = err(goal, paths.end());
                let tol = opts.endpoint_tolerance;
                let passed = e0 <= tol && e1 <= tol;
                let frame = if e0 > tol { 0 } else { paths.steps() };
                ConditionCheck::new(
                    passed,
                    (!passed).then_some(frame),
                    format!("start error {e0:.3e}, goal error {e1:.3e}, tolerance {tol:.1e}"),
                )
            }
        }
    };

    let mut min_obj: Option<(f64, usize)> = None;
    let mut first_obj_fail = None;
    let mut min_obs: Option<(f64, usize)> = None;
    let mut first_obs_fail = None;
    for (k, (frame, obs)) in paths.frames().iter().zip(obstacles.frames()).enumerate() {
        if let Some((d, _, _)) = closest_pair(frame) {
            if min_obj.is_none_or(|(m, _)| d < m) {
                min_obj = Some((d, k));
            }
            if !clears(d, opts.margin) && first_obj_fail.is_none() {
                first_obj_fail = Some(k);
            }
        }
        for p in frame {
            for c in obs {
                let d = dist(p, c);
                if min_obs.is_none_or(|(m, _)| d < m) {
                    min_obs = Some((d, k));
                }
                if !clears(d, opts.margin) && first_obs_fail.is_none() {
                    first_obs_fail = Some(k);
                }
            }
        }
    }

    let distance_check = |min: Option<(f64, usize)>,
                          fail: Option<usize>,
                          what: &str,
                          skip: &str| match (min, fail) {
        (None, _) => ConditionCheck::skipped(skip),
        (Some((d, _)), Some(k)) => ConditionCheck::new(
            false,
            Some(k),
            format!(
                "{what} within margin {} at frame {k} (min {d:.6e})",
                opts.margin
            ),
        ),
        (Some((d, k)), None) => ConditionCheck::new(
            true,
            Some(k),
            format!("min distance {d:.6e} >= margin {}", opts.margin),
        ),
    };

    VerifyReport {
        frames,
        objects: paths.count(),
        obstacles: obstacles.count(),
        continuity,
        endpoints,
        object_separation: distance_check(
            min_obj,
            first_obj_fail,
            "objects",
            "fewer than two objects",
        ),
        obstacle_clearance: distance_check(
            min_obs,
            first_obs_fail,
            "objects and obstacles",
            "no objects or no obstacles",
        ),
        min_object_distance: min_obj.map(|(d, _)| d),
        min_obstacle_distance: min_obs.map(|(d, _)| d),
        max_step,
    }
}
