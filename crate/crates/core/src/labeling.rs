//! Ground-truth cell labels and occupancy grids from observed tracks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rasterize_region, swept_volume, wrap_angle, Grid, GridSpec, Polygon, Pose2, Vec2};
use crate::lane_graph::PathCells;

/// Maximum footprint displacement between placements when labeling path cells.
pub const LABEL_SWEEP_STEP_M: f64 = 0.25;

/// Cell label: occupied, free, or unknown (horizon not fully observed / off-map).
pub const LABEL_OCCUPIED: i8 = 1;
pub const LABEL_FREE: i8 = 0;
pub const LABEL_UNKNOWN: i8 = -1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimedPose {
    pub t: f64,
    pub pose: Pose2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActorTrack {
    pub id: String,
    /// Body-frame footprint, x forward.
    pub footprint: Polygon,
    pub poses: Vec<TimedPose>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct TrackRecord {
    pub id: String,
    pub footprint: Vec<Vec2>,
    pub poses: Vec<[f64; 4]>,
}

impl ActorTrack {
    pub fn new(id: impl Into<String>, footprint: Polygon, poses: Vec<TimedPose>) -> Result<Self> {
        let id = id.into();
        if poses.is_empty() {
            return Err(Error::Track(format!("actor {id} has no poses")));
        }
        if poses.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::Track(format!("actor {id}: timestamps must strictly increase")));
        }
        Ok(ActorTrack { id, footprint, poses })
    }

    pub(crate) fn from_record(r: TrackRecord) -> Result<Self> {
        let footprint = Polygon::new(r.footprint).map_err(|e| Error::Track(format!("actor {}: {e}", r.id)))?;
        let poses = r
            .poses
            .iter()
            .map(|p| TimedPose { t: p[0], pose: Pose2::new(Vec2::new(p[1], p[2]), p[3]) })
            .collect();
        ActorTrack::new(r.id, footprint, poses)
    }

    pub(crate) fn to_record(&self) -> TrackRecord {
        TrackRecord {
            id: self.id.clone(),
            footprint: self.footprint.vertices().to_vec(),
            poses: self
                .poses
                .iter()
                .map(|p| [p.t, p.pose.position.x, p.pose.position.y, p.pose.heading])
                .collect(),
        }
    }

    pub fn first_t(&self) -> f64 {
        self.poses[0].t
    }

    pub fn last_t(&self) -> f64 {
        self.poses.last().unwrap().t
    }

    pub fn covers(&self, t: f64) -> bool {
        t >= self.first_t() - 1e-9 && t <= self.last_t() + 1e-9
    }

    /// Observed future duration after `t0`.
    pub fn observed_horizon(&self, t0: f64) -> f64 {
        self.last_t() - t0
    }

    /// Linearly interpolated pose; headings interpolate along the shorter arc.
    pub fn pose_at(&self, t: f64) -> Option<Pose2> {
        if !self.covers(t) {
            return None;
        }
        let i = self.poses.partition_point(|p| p.t <= t);
        if i == 0 {
            return Some(self.poses[0].pose);
        }
        if i >= self.poses.len() {
            return Some(self.poses.last().unwrap().pose);
        }
        let (a, b) = (&self.poses[i - 1], &self.poses[i]);
        let u = (t - a.t) / (b.t - a.t);
        let h = a.pose.heading + wrap_angle(b.pose.heading - a.pose.heading) * u;
        Some(Pose2::new(a.pose.position.lerp(b.pose.position, u), h))
    }

    /// Poses at `t0`, every recorded pose strictly inside, and at `t1`.
    pub fn poses_between(&self, t0: f64, t1: f64) -> Result<Vec<Pose2>> {
        let first = self.pose_at(t0).ok_or_else(|| Error::Track(format!("t0={t0} outside track {}", self.id)))?;
        let last = self.pose_at(t1).ok_or_else(|| Error::Track(format!("t1={t1} outside track {}", self.id)))?;
        let mut out = vec![first];
        out.extend(self.poses.iter().filter(|p| p.t > t0 + 1e-9 && p.t < t1 - 1e-9).map(|p| p.pose));
        if t1 > t0 + 1e-9 {
            out.push(last);
        }
        Ok(out)
    }

    /// Footprint length and width measured along the body axes.
    pub fn dimensions(&self) -> (f64, f64) {
        self.footprint.extent()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellLabels {
    pub labels: Vec<i8>,
    pub horizon: f64,
}

impl CellLabels {
    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l == LABEL_OCCUPIED).count()
    }
}

/// Labels every cell of `cells` from the actor's footprint swept over `(t0, t0 + min(h, H)]`.
///
/// Touched cells get 1. Untouched cells get 0 when the whole horizon was observed and
/// -1 otherwise. Invalid cells are always -1. The pose at `t0` counts as occupied.
pub fn label_cells(cells: &PathCells, track: &ActorTrack, t0: f64, horizon: f64) -> Result<CellLabels> {
    if !(horizon > 0.0) {
        return Err(Error::Invalid("horizon must be positive".into()));
    }
    if !track.covers(t0) {
        return Err(Error::Track(format!("t0={t0} outside track {}", track.id)));
    }
    let observed = track.observed_horizon(t0).max(0.0);
    let end = t0 + observed.min(horizon);
    let sweep = swept_volume(&track.footprint, &track.poses_between(t0, end)?, LABEL_SWEEP_STEP_M)?;
    let fully_observed = observed >= horizon - 1e-9;
    let labels = cells
        .cells
        .iter()
        .map(|cell| {
            if !cell.valid {
                return LABEL_UNKNOWN;
            }
            let poly = cell.polygon.as_ref().expect("valid cells carry geometry");
            if sweep.iter().any(|p| p.overlaps(poly)) {
                LABEL_OCCUPIED
            } else if fully_observed {
                LABEL_FREE
            } else {
                LABEL_UNKNOWN
            }
        })
        .collect();
    Ok(CellLabels { labels, horizon })
}

/// 2D cells touched by the actor over `[t0, t0 + min(h, H)]`.
pub fn ground_truth_grid(track: &ActorTrack, t0: f64, horizon: f64, spec: &GridSpec) -> Result<Grid<bool>> {
    if !(horizon > 0.0) {
        return Err(Error::Invalid("horizon must be positive".into()));
    }
    let end = t0 + track.observed_horizon(t0).max(0.0).min(horizon);
    let poses = track.poses_between(t0, end)?;
    let sweep = swept_volume(&track.footprint, &poses, 0.5 * spec.resolution)?;
    Ok(rasterize_region(&sweep, spec))
}
