//! Motion planning among moving point obstacles by reduction to stationary ones.
//!
//! An [`AmbientIsotopy`] `ψ` pins every obstacle to its time-zero position.
//! A plan `σ` for the stationary problem from `A` to `ψ_1(B)` is then pulled
//! back frame by frame, `γ(t_k) = ψ_{t_k}^{-1}(σ(t_k))`, which avoids the moving
//! obstacles because each `ψ_{t_k}` is a homeomorphism carrying the obstacles
//! at `t_k` onto the obstacles at time zero.

mod geometry;
mod io;
mod isotopy;
mod retime;
mod stationary;
mod verify;

pub use geometry::{
    dist, point_from_slice, segment_point_distance, Configuration, ObjectPaths, ObstacleTrajectory,
    Point,
};
pub use io::{ConfigurationFile, FramesFile};
pub use isotopy::{
    build_isotopy, bump, AmbientIsotopy, BumpLayer, BUMP_LIPSCHITZ, INVERSE_TOLERANCE,
};
pub use stationary::{stationary_planner, PlannerOptions};
pub use verify::{verify_plan, ConditionCheck, VerifyOptions, VerifyReport};

use crate::error::PlanError;
use retime::retime;
use stationary::plan_route;

/// Output of [`plan_with_moving_obstacles`].
#[derive(Debug, Clone)]
pub struct MovingPlan {
    pub paths: ObjectPaths,
    /// The plan in the stationary picture, before pulling back.
    pub stationary: ObjectPaths,
    pub isotopy: AmbientIsotopy,
    /// Clearance demanded of the stationary plan.
    pub planner_margin: f64,
    /// Smallest object/object or object/obstacle distance over all frames.
    pub achieved_margin: f64,
}

/// Plans `start → goal` on the grid of `obstacles`, avoiding them at every frame.
///
/// `start` must clear frame 0 and `goal` the last frame by `opts.margin`. The
/// stationary plan uses the smaller of `opts.margin` and the clearance of the
/// transported goal, since `ψ_1` can shrink distances near the obstacles.
///
/// When the obstacles move, frames are placed along the stationary route to
/// keep the per-frame motion of the pulled-back paths small (see `retime`);
/// with stationary obstacles the route is sampled uniformly in arc length,
/// exactly as [`stationary_planner`] does.
///
/// The last frame is set to `goal` exactly; it differs from the pulled-back
/// value only by the inversion tolerance.
pub fn plan_with_moving_obstacles(
    start: &Configuration,
    goal: &Configuration,
    obstacles: &ObstacleTrajectory,
    radius: f64,
    opts: &PlannerOptions,
) -> Result<MovingPlan, PlanError> {
    let dim = obstacles.dim();
    if start.dim() != dim || goal.dim() != dim {
        return Err(PlanError::Precondition(
            "start, goal and obstacles must share a dimension".into(),
        ));
    }
    let last = obstacles.steps();
    if start.clearance(obstacles.frame(0)) < opts.margin {
        return Err(PlanError::Precondition(format!(
            "start is within margin {} of an obstacle at time 0",
            opts.margin
        )));
    }
    if goal.clearance(obstacles.frame(last)) < opts.margin {
        return Err(PlanError::Precondition(format!(
            "goal is within margin {} of an obstacle at time 1",
            opts.margin
        )));
    }

    let isotopy = build_isotopy(obstacles, radius)?;
    let moved_goal = Configuration::new(
        dim,
        goal.points()
            .iter()
            .map(|p| isotopy.apply(last, p))
            .collect::<Result<_, _>>()?,
    )?;
    let pinned = obstacles.frame(0);
    let planner_margin = opts
        .margin
        .min(moved_goal.clearance(pinned))
        .min(moved_goal.separation());
    let stationary_opts = PlannerOptions {
        margin: planner_margin,
        ..opts.clone()
    };
    let route = plan_route(start, &moved_goal, pinned, &stationary_opts)?;
    let sigma = if isotopy.is_identity() {
        route.uniform_frames(last)
    } else {
        retime(&route, &isotopy)?
    };
    let stationary = ObjectPaths::new(dim, sigma)?;

    let mut frames = Vec::with_capacity(last + 1);
    for (k, frame) in stationary.frames().iter().enumerate() {
        let pulled = frame
            .iter()
            .map(|p| isotopy.apply_inverse(k, p))
            .collect::<Result<Vec<_>, _>>()?;
        frames.push(pulled);
    }
    frames[0] = start.points().to_vec();
    frames[last] = goal.points().to_vec();
    let paths = ObjectPaths::new(dim, frames)?;
    let report = verify_plan(&paths, obstacles, &VerifyOptions::default());
    Ok(MovingPlan {
        paths,
        stationary,
        isotopy,
        planner_margin,
        achieved_margin: report.achieved_margin(),
    })
}
