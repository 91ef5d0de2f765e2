//! Network inputs: an actor-centred scene raster and hand-crafted actor and path vectors.
//!
//! Raster channels, each stored as `u8` and read as `value / 255`:
//!
//! | channel | content |
//! |---|---|
//! | 0 | lane surfaces (255) |
//! | 1 | actor footprints at `t0`: actor of interest 255, self-driving vehicle 192, others 128 |
//! | 2 | valid cells of the candidate path (255) |
//!
//! A pixel is painted when its centre lies inside a polygon. Row 0 is the far
//! front edge, column 0 the left edge, all in the frame of the actor at `t0`.
//!
//! Actor feature order ([`ACTOR_FEATURES`] entries):
//! speed, yaw rate, heading variance over the past 3 s, longitudinal acceleration,
//! footprint length, footprint width, history flag (1 when 3 s of history exist).
//!
//! Path feature order ([`PATH_FEATURES`] entries): mean |curvature|, max |curvature|,
//! total heading change, then `d`, `d'`, `s''` and heading offset at `t0`, `t0 - 1 s`
//! and `t0 - 2 s`. Rates use backward differences over [`FD_STEP`]; values whose
//! history is not observed are 0.

use crate::geometry::{wrap_angle, Polygon, Pose2, Vec2};
use crate::labeling::ActorTrack;
use crate::lane_graph::{pose_on_path, LaneGraph, Path, PathCells};

use super::LonConfig;

pub const ACTOR_FEATURES: usize = 7;
pub const PATH_FEATURES: usize = 15;
/// Finite-difference step for rates, seconds.
pub const FD_STEP: f64 = 0.5;
/// Window for heading variance, seconds.
pub const HEADING_WINDOW: f64 = 3.0;
const HEADING_SAMPLE_DT: f64 = 0.1;

pub const ACTOR_OF_INTEREST_VALUE: u8 = 255;
pub const SDV_VALUE: u8 = 192;
pub const OTHER_ACTOR_VALUE: u8 = 128;

/// Everything visible at one instant: the map, all tracks and which one is the SDV.
#[derive(Clone, Copy, Debug)]
pub struct SceneView<'a> {
    pub map: &'a LaneGraph,
    pub actors: &'a [ActorTrack],
    pub sdv_id: Option<&'a str>,
}

/// One network input.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureBundle {
    /// `3 x R x R`, channel-major.
    pub raster: Vec<u8>,
    pub actor: Vec<f64>,
    pub path: Vec<f64>,
}

impl FeatureBundle {
    /// Actor then path features.
    pub fn vector(&self) -> Vec<f64> {
        self.actor.iter().chain(&self.path).copied().collect()
    }
}

/// Actor-frame raster geometry.
#[derive(Clone, Copy, Debug)]
struct RasterFrame {
    size: usize,
    resolution: f64,
    ahead: f64,
    half_width: f64,
    pose: Pose2,
}

impl RasterFrame {
    fn new(cfg: &LonConfig, pose: Pose2) -> Self {
        let extent = cfg.raster_size as f64 * cfg.resolution;
        RasterFrame {
            size: cfg.raster_size,
            resolution: cfg.resolution,
            ahead: extent - cfg.behind_m,
            half_width: 0.5 * extent,
            pose,
        }
    }

    fn pixel_center(&self, row: usize, col: usize) -> Vec2 {
        Vec2::new(
            self.ahead - (row as f64 + 0.5) * self.resolution,
            self.half_width - (col as f64 + 0.5) * self.resolution,
        )
    }

    /// Sets `value` (keeping the brighter one) in `channel` for every pixel centre in `world_poly`.
    fn paint(&self, raster: &mut [u8], channel: usize, world_poly: &Polygon, value: u8) {
        let local: Vec<Vec2> = world_poly.vertices().iter().map(|&p| self.pose.to_local(p)).collect();
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in &local {
            xmin = xmin.min(p.x);
            xmax = xmax.max(p.x);
            ymin = ymin.min(p.y);
            ymax = ymax.max(p.y);
        }
        let n = self.size as f64;
        let span = |hi: f64, lo: f64, top: f64| {
            // rows/cols whose centre coordinate `top - (i + 0.5) res` is in [lo, hi]
            let first = ((top - hi) / self.resolution - 0.5).ceil().max(0.0);
            let last = ((top - lo) / self.resolution - 0.5).floor().min(n - 1.0);
            (first, last)
        };
        let (r0, r1) = span(xmax, xmin, self.ahead);
        let (c0, c1) = span(ymax, ymin, self.half_width);
        if r0 > r1 || c0 > c1 {
            return;
        }
        let poly = Polygon::from_ccw_unchecked(local);
        let plane = channel * self.size * self.size;
        for row in r0 as usize..=r1 as usize {
            for col in c0 as usize..=c1 as usize {
                let px = &mut raster[plane + row * self.size + col];
                if *px < value && poly.contains(self.pixel_center(row, col)) {
                    *px = value;
                }
            }
        }
    }
}

/// Renders the three-channel scene raster for `actor` at `t0` and candidate `cells`.
pub fn build_raster(scene: &SceneView, actor: &ActorTrack, t0: f64, cells: &PathCells, cfg: &LonConfig) -> Vec<u8> {
    let r = cfg.raster_size;
    let mut raster = vec![0u8; 3 * r * r];
    let Some(pose) = actor.pose_at(t0) else { return raster };
    let frame = RasterFrame::new(cfg, pose);
    let reach = (frame.ahead.max(cfg.behind_m).powi(2) + frame.half_width.powi(2)).sqrt();
    for lane in scene.map.lanes() {
        if lane.distance_to(pose.position) > reach {
            continue;
        }
        for quad in lane.strip_quads() {
            frame.paint(&mut raster, 0, &quad, 255);
        }
    }
    for other in scene.actors {
        let Some(p) = other.pose_at(t0) else { continue };
        if p.position.dist(pose.position) > reach + other.footprint.max_radius() {
            continue;
        }
        let value = if other.id == actor.id {
            ACTOR_OF_INTEREST_VALUE
        } else if scene.sdv_id == Some(other.id.as_str()) {
            SDV_VALUE
        } else {
            OTHER_ACTOR_VALUE
        };
        frame.paint(&mut raster, 1, &other.footprint.placed(&p), value);
    }
    for cell in cells.cells.iter().filter(|c| c.valid) {
        if let Some(poly) = &cell.polygon {
            frame.paint(&mut raster, 2, poly, 255);
        }
    }
    raster
}

fn speed_at(track: &ActorTrack, t: f64) -> Option<f64> {
    Some(track.pose_at(t)?.position.dist(track.pose_at(t - FD_STEP)?.position) / FD_STEP)
}

/// Kinematic summary of `track` at `t0`; see the module docs for the order.
pub fn actor_features(track: &ActorTrack, t0: f64) -> Vec<f64> {
    let mut f = vec![0.0; ACTOR_FEATURES];
    let Some(now) = track.pose_at(t0) else { return f };
    if let (Some(v), Some(prev)) = (speed_at(track, t0), track.pose_at(t0 - FD_STEP)) {
        f[0] = v;
        f[1] = wrap_angle(now.heading - prev.heading) / FD_STEP;
        if let Some(v_prev) = speed_at(track, t0 - FD_STEP) {
            f[3] = (v - v_prev) / FD_STEP;
        }
    }
    f[2] = heading_variance(track, t0);
    let (length, width) = track.dimensions();
    f[4] = length;
    f[5] = width;
    f[6] = if track.covers(t0 - HEADING_WINDOW) { 1.0 } else { 0.0 };
    f
}

/// Population variance of the heading sampled every 0.1 s over the observed part of
/// `[t0 - 3 s, t0]`, with angles unwrapped around the heading at `t0`.
pub fn heading_variance(track: &ActorTrack, t0: f64) -> f64 {
    let Some(now) = track.pose_at(t0) else { return 0.0 };
    let steps = (HEADING_WINDOW / HEADING_SAMPLE_DT).round() as usize;
    let samples: Vec<f64> = (0..=steps)
        .filter_map(|k| track.pose_at(t0 - k as f64 * HEADING_SAMPLE_DT))
        .map(|p| wrap_angle(p.heading - now.heading))
        .collect();
    if samples.len() < 2 {
        return 0.0;
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    samples.iter().map(|h| (h - mean).powi(2)).sum::<f64>() / n
}

/// `[d, d', s'', heading offset]` at `t`, or zeros where history is missing.
fn path_relative(track: &ActorTrack, path: &Path, t: f64) -> [f64; 4] {
    let at = |t: f64| track.pose_at(t).map(|p| pose_on_path(path, &p));
    let Some(now) = at(t) else { return [0.0; 4] };
    let mut out = [now.d, 0.0, 0.0, now.heading_offset];
    if let Some(prev) = at(t - FD_STEP) {
        out[1] = (now.d - prev.d) / FD_STEP;
        if let Some(prev2) = at(t - 2.0 * FD_STEP) {
            out[2] = (now.s - 2.0 * prev.s + prev2.s) / (FD_STEP * FD_STEP);
        }
    }
    out
}

/// Geometry of `path` and the actor's motion relative to it; see the module docs.
pub fn path_features(track: &ActorTrack, t0: f64, path: &Path) -> Vec<f64> {
    let curvatures = path.centerline.vertex_curvatures();
    let (mean_k, max_k) = if curvatures.is_empty() {
        (0.0, 0.0)
    } else {
        let abs: Vec<f64> = curvatures.iter().map(|k| k.abs()).collect();
        (abs.iter().sum::<f64>() / abs.len() as f64, abs.iter().cloned().fold(0.0, f64::max))
    };
    let mut f = vec![mean_k, max_k, path.centerline.total_turn()];
    for lag in [0.0, 1.0, 2.0] {
        f.extend(path_relative(track, path, t0 - lag));
    }
    debug_assert_eq!(f.len(), PATH_FEATURES);
    f
}

/// Full input for `actor` at `t0` along `cells.path`.
pub fn feature_bundle(scene: &SceneView, actor: &ActorTrack, t0: f64, cells: &PathCells, cfg: &LonConfig) -> FeatureBundle {
    FeatureBundle {
        raster: build_raster(scene, actor, t0, cells, cfg),
        actor: actor_features(actor, t0),
        path: path_features(actor, t0, &cells.path),
    }
}
