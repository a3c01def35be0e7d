//! JSON file formats for trajectories and configurations.
//!
//! Trajectories (obstacles or objects): `{"dim": 2, "count": m, "frames": [[[x, y], ...], ...]}`.
//! Configurations: `{"dim": 2, "count": n, "points": [[x, y], ...]}`.

use serde::{Deserialize, Serialize};

use super::geometry::{point_from_slice, Configuration, ObjectPaths, ObstacleTrajectory, Point};
use crate::error::PlanError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FramesFile {
    pub dim: usize,
    pub count: usize,
    pub frames: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationFile {
    pub dim: usize,
    pub count: usize,
    pub points: Vec<Vec<f64>>,
}

fn to_coords(dim: usize, points: &[Point]) -> Vec<Vec<f64>> {
    points.iter().map(|p| p[..dim].to_vec()).collect()
}

fn read_points(dim: usize, count: usize, raw: &[Vec<f64>]) -> Result<Vec<Point>, PlanError> {
    if raw.len() != count {
        return Err(PlanError::Format(format!(
            "declared count {count} but found {} points",
            raw.len()
        )));
    }
    raw.iter().map(|c| point_from_slice(dim, c)).collect()
}

impl FramesFile {
    fn from_frames(dim: usize, frames: &[Vec<Point>]) -> Self {
        FramesFile {
            dim,
            count: frames.first().map_or(0, Vec::len),
            frames: frames.iter().map(|f| to_coords(dim, f)).collect(),
        }
    }

    fn points(&self) -> Result<Vec<Vec<Point>>, PlanError> {
        self.frames
            .iter()
            .map(|f| read_points(self.dim, self.count, f))
            .collect()
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, PlanError> {
    serde_json::from_str(text).map_err(|e| PlanError::Format(e.to_string()))
}

fn render<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

impl ObstacleTrajectory {
    pub fn from_json(text: &str) -> Result<Self, PlanError> {
        let file: FramesFile = parse(text)?;
        Self::new(file.dim, file.points()?)
    }

    pub fn to_json(&self) -> String {
        render(&FramesFile::from_frames(self.dim(), self.frames()))
    }
}

impl ObjectPaths {
    pub fn from_json(text: &str) -> Result<Self, PlanError> {
        let file: FramesFile = parse(text)?;
        Self::new(file.dim, file.points()?)
    }

    pub fn to_json(&self) -> String {
        render(&FramesFile::from_frames(self.dim(), self.frames()))
    }
}

impl Configuration {
    pub fn from_json(text: &str) -> Result<Self, PlanError> {
        let file: ConfigurationFile = parse(text)?;
        Self::new(file.dim, read_points(file.dim, file.count, &file.points)?)
    }

    pub fn to_json(&self) -> String {
        render(&ConfigurationFile {
            dim: self.dim(),
            count: self.len(),
            points: to_coords(self.dim(), self.points()),
        })
    }

    /// Inline form `"x,y;x,y"` (or `x,y,z` triples in space).
    pub fn parse_inline(dim: usize, text: &str) -> Result<Self, PlanError> {
        let mut points = Vec::new();
        for chunk in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let coords = chunk
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| PlanError::Format(format!("bad coordinate in {chunk:?}: {e}")))?;
            points.push(point_from_slice(dim, &coords)?);
        }
        Self::new(dim, points)
    }
}
