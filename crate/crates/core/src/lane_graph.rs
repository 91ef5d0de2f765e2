//! Lane map, candidate path roll-out and path discretization.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path as FsPath;

use crate::error::{Error, Result};
use crate::geometry::{FrenetPose, Polygon, Polyline, Pose2, Vec2};

/// Search radius around the actor for seed lanes.
pub const SEED_RADIUS_M: f64 = 2.0;
pub const DEFAULT_CELL_LENGTH_M: f64 = 4.8;
pub const DEFAULT_NUM_CELLS: usize = 40;
/// Successor centerlines must start this close to their predecessor's end.
pub const CONNECTION_TOLERANCE_M: f64 = 0.1;

pub type LaneId = String;

#[derive(Clone, Debug, PartialEq)]
pub struct Lane {
    pub id: LaneId,
    pub centerline: Polyline,
    pub width: f64,
    pub successors: Vec<LaneId>,
    pub predecessors: Vec<LaneId>,
}

impl Lane {
    /// Distance from `p` to the lane surface (centerline buffered by half the width).
    pub fn distance_to(&self, p: Vec2) -> f64 {
        (self.centerline.project(p).distance - 0.5 * self.width).max(0.0)
    }

    /// One rectangle per centerline segment; together they cover the lane surface.
    pub fn strip_quads(&self) -> Vec<Polygon> {
        let hw = 0.5 * self.width;
        self.centerline
            .points()
            .windows(2)
            .map(|w| {
                let n = (w[1] - w[0]).perp() * (hw / w[0].dist(w[1]));
                Polygon::from_ccw_unchecked(vec![w[0] - n, w[1] - n, w[1] + n, w[0] + n])
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct LaneRecord {
    id: String,
    width: f64,
    centerline: Vec<Vec2>,
    #[serde(default)]
    successors: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct MapRecord {
    lanes: Vec<LaneRecord>,
}

/// Immutable lane map with symmetric successor/predecessor links.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaneGraph {
    lanes: BTreeMap<LaneId, Lane>,
}

impl LaneGraph {
    /// Builds a graph from `(id, centerline, width, successors)` tuples, deriving
    /// predecessors and validating every invariant.
    pub fn new(specs: Vec<(LaneId, Polyline, f64, Vec<LaneId>)>) -> Result<Self> {
        let mut lanes = BTreeMap::new();
        for (id, centerline, width, successors) in specs {
            if !(width > 0.0) || !width.is_finite() {
                return Err(Error::Map { lane: id, reason: format!("width {width} must be positive") });
            }
            let lane = Lane { id: id.clone(), centerline, width, successors, predecessors: Vec::new() };
            if lanes.insert(id.clone(), lane).is_some() {
                return Err(Error::Map { lane: id, reason: "duplicate id".into() });
            }
        }
        let mut preds: BTreeMap<LaneId, Vec<LaneId>> = BTreeMap::new();
        for lane in lanes.values() {
            let mut seen = BTreeSet::new();
            for succ in &lane.successors {
                if !seen.insert(succ) {
                    return Err(Error::Map { lane: lane.id.clone(), reason: format!("successor {succ} listed twice") });
                }
                let Some(next) = lanes.get(succ) else {
                    return Err(Error::Map { lane: lane.id.clone(), reason: format!("unknown successor {succ}") });
                };
                let gap = lane.centerline.end().dist(next.centerline.start());
                if gap > CONNECTION_TOLERANCE_M {
                    return Err(Error::Map {
                        lane: lane.id.clone(),
                        reason: format!("successor {succ} starts {gap:.3} m from this lane's end"),
                    });
                }
                preds.entry(succ.clone()).or_default().push(lane.id.clone());
            }
        }
        for (id, p) in preds {
            lanes.get_mut(&id).unwrap().predecessors = p;
        }
        Ok(LaneGraph { lanes })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let rec: MapRecord = serde_json::from_str(s)?;
        Self::from_value_record(rec)
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let rec: MapRecord = serde_json::from_value(v)?;
        Self::from_value_record(rec)
    }

    fn from_value_record(rec: MapRecord) -> Result<Self> {
        let mut specs = Vec::with_capacity(rec.lanes.len());
        for l in rec.lanes {
            let centerline = Polyline::new(l.centerline).map_err(|e| Error::Map { lane: l.id.clone(), reason: e.to_string() })?;
            specs.push((l.id, centerline, l.width, l.successors));
        }
        LaneGraph::new(specs)
    }

    pub fn load(path: &FsPath) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let rec = MapRecord {
            lanes: self
                .lanes
                .values()
                .map(|l| LaneRecord {
                    id: l.id.clone(),
                    width: l.width,
                    centerline: l.centerline.points().to_vec(),
                    successors: l.successors.clone(),
                })
                .collect(),
        };
        serde_json::to_value(rec).expect("map serializes")
    }

    pub fn lane(&self, id: &str) -> Option<&Lane> {
        self.lanes.get(id)
    }

    pub fn lanes(&self) -> impl Iterator<Item = &Lane> {
        self.lanes.values()
    }

    pub fn len(&self) -> usize {
        self.lanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lanes.is_empty()
    }

    /// Ids of lanes whose surface comes within `radius` of `p`, in id order.
    pub fn lanes_near(&self, p: Vec2, radius: f64) -> Vec<LaneId> {
        self.lanes.values().filter(|l| l.distance_to(p) <= radius).map(|l| l.id.clone()).collect()
    }

    /// Every branch-free successor sequence reachable from a lane near `psi`.
    ///
    /// A path starts at the projection of `psi` onto its seed lane and grows until it
    /// covers `max_length` or dead-ends. A lane never repeats within one path. The
    /// lane that crosses `max_length` stays in the sequence, the centerline is trimmed.
    /// A sequence with no length ahead of `psi` (e.g. `psi` past the end of a
    /// dead-end lane) yields no path.
    pub fn roll_out_paths(&self, psi: Vec2, radius: f64, max_length: f64) -> Result<Vec<Path>> {
        if !(max_length > 0.0) {
            return Err(Error::Invalid("max_length must be positive".into()));
        }
        let mut out = Vec::new();
        for seed in self.lanes_near(psi, radius) {
            let lane = &self.lanes[&seed];
            let proj = lane.centerline.project(psi);
            let start = FrenetPose { s: proj.s, d: proj.d, heading_offset: 0.0 };
            let remaining = lane.centerline.length() - proj.s;
            let mut seq = vec![seed.clone()];
            self.extend(&mut seq, remaining, max_length, &mut |seq| {
                if let Some(p) = self.assemble(seq, start, max_length) {
                    out.push(p);
                }
            });
        }
        Ok(out)
    }

    fn extend(&self, seq: &mut Vec<LaneId>, covered: f64, max_length: f64, emit: &mut dyn FnMut(&[LaneId])) {
        let last = &self.lanes[seq.last().unwrap()];
        let next: Vec<&LaneId> = last.successors.iter().filter(|s| !seq.contains(s)).collect();
        if covered >= max_length || next.is_empty() {
            emit(seq);
            return;
        }
        for succ in next {
            let len = self.lanes[succ].centerline.length();
            seq.push(succ.clone());
            self.extend(seq, covered + len, max_length, emit);
            seq.pop();
        }
    }

    fn assemble(&self, seq: &[LaneId], start: FrenetPose, max_length: f64) -> Option<Path> {
        let mut pts: Vec<Vec2> = Vec::new();
        let mut bounds = Vec::with_capacity(seq.len());
        let mut covered = 0.0;
        for (i, id) in seq.iter().enumerate() {
            let lane = &self.lanes[id];
            let from = if i == 0 { start.s } else { 0.0 };
            let part = lane.centerline.length() - from;
            if part > 1e-6 {
                pts.extend(lane.centerline.sub_points(from, lane.centerline.length()));
            }
            bounds.push((id.clone(), covered, covered + part.max(0.0), lane.width));
            covered += part.max(0.0);
        }
        let full = Polyline::new_dedup(pts, 1e-6).ok()?;
        let centerline = if full.length() > max_length { full.slice(0.0, max_length).ok()? } else { full };
        let segments = bounds
            .into_iter()
            .filter(|b| b.2 > b.1 && b.1 < max_length)
            .map(|(lane, s0, s1, width)| PathSegment { lane, s_start: s0, s_end: s1.min(max_length), width })
            .collect();
        Some(Path { lane_sequence: seq.to_vec(), start, centerline, max_length, segments })
    }
}

/// Portion of a path contributed by one lane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSegment {
    pub lane: LaneId,
    pub s_start: f64,
    pub s_end: f64,
    pub width: f64,
}

/// A branch-free lane sequence starting at the actor's projection onto the seed lane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub lane_sequence: Vec<LaneId>,
    /// Actor position relative to the seed lane centerline.
    pub start: FrenetPose,
    pub centerline: Polyline,
    pub max_length: f64,
    pub segments: Vec<PathSegment>,
}

impl Path {
    /// Lane width at path arc length `s`.
    pub fn width_at(&self, s: f64) -> f64 {
        self.segments
            .iter()
            .find(|seg| s < seg.s_end)
            .or(self.segments.last())
            .map_or(0.0, |seg| seg.width)
    }

    pub fn seed_lane(&self) -> &str {
        &self.lane_sequence[0]
    }

    /// Checks the branch-free invariants against `graph`.
    pub fn check(&self, graph: &LaneGraph) -> Result<()> {
        let mut seen = BTreeSet::new();
        for id in &self.lane_sequence {
            if !seen.insert(id) {
                return Err(Error::Invalid(format!("lane {id} repeats in path")));
            }
        }
        for w in self.lane_sequence.windows(2) {
            let lane = graph.lane(&w[0]).ok_or_else(|| Error::Invalid(format!("unknown lane {}", w[0])))?;
            if !lane.successors.contains(&w[1]) {
                return Err(Error::Invalid(format!("{} is not a successor of {}", w[1], w[0])));
            }
        }
        if self.centerline.length() > self.max_length + 1e-9 {
            return Err(Error::Invalid("path longer than max_length".into()));
        }
        Ok(())
    }
}

/// One full-width slice of a path.
#[derive(Clone, Debug, PartialEq)]
pub struct PathCell {
    pub index: usize,
    pub s_start: f64,
    pub s_end: f64,
    /// Geometry of the on-map part; `None` when the cell lies entirely past the map.
    pub polygon: Option<Polygon>,
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathCells {
    pub path: Path,
    pub cell_length: f64,
    pub cells: Vec<PathCell>,
}

impl PathCells {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn valid_mask(&self) -> Vec<bool> {
        self.cells.iter().map(|c| c.valid).collect()
    }

    pub fn valid_count(&self) -> usize {
        self.cells.iter().filter(|c| c.valid).count()
    }
}

/// Cuts `path` into `num_cells` consecutive cells of `cell_length` meters.
///
/// A cell is valid only when it lies entirely on the mapped path. A cell cut short
/// by the end of the map keeps its partial geometry but is marked invalid.
pub fn discretize_path(path: &Path, cell_length: f64, num_cells: usize) -> Result<PathCells> {
    if !(cell_length > 0.0) || num_cells == 0 {
        return Err(Error::Invalid("cell_length and num_cells must be positive".into()));
    }
    let extent = path.centerline.length();
    let mut cells = Vec::with_capacity(num_cells);
    for k in 0..num_cells {
        let s0 = k as f64 * cell_length;
        let s1 = (k + 1) as f64 * cell_length;
        let valid = s1 <= extent + 1e-6;
        let on_map_end = s1.min(extent);
        let polygon = if on_map_end - s0 > 1e-6 { Some(cell_polygon(path, s0, on_map_end)?) } else { None };
        cells.push(PathCell { index: k, s_start: s0, s_end: s1, polygon, valid });
    }
    Ok(PathCells { path: path.clone(), cell_length, cells })
}

fn cell_polygon(path: &Path, s0: f64, s1: f64) -> Result<Polygon> {
    let line = &path.centerline;
    let cum = line.cumulative();
    let mut ss = vec![s0];
    ss.extend(cum.iter().copied().filter(|&c| c > s0 + 1e-9 && c < s1 - 1e-9));
    ss.push(s1);
    let mut right = Vec::with_capacity(ss.len());
    let mut left = Vec::with_capacity(ss.len());
    for (i, &s) in ss.iter().enumerate() {
        let p = line.point_at(s);
        let is_vertex = i > 0 && i + 1 < ss.len();
        let normal = if is_vertex {
            // miter at a shared vertex keeps the strip exactly `width` wide on both segments
            let h0 = line.heading_at(s - 1e-7);
            let h1 = line.heading_at(s + 1e-7);
            let bis = Vec2::from_heading(h0) + Vec2::from_heading(h1);
            let n = bis.perp() * (1.0 / bis.norm());
            let cos_half = n.dot(Vec2::from_heading(h0).perp());
            n * (1.0 / cos_half.max(0.2))
        } else {
            Vec2::from_heading(line.heading_at(s)).perp()
        };
        let hw = 0.5 * path.width_at(s);
        right.push(p - normal * hw);
        left.push(p + normal * hw);
    }
    left.reverse();
    right.extend(left);
    Polygon::new(right).map_err(|e| Error::Geometry(format!("degenerate centerline near s={s0:.2}: {e}")))
}

/// Actor pose expressed against the start of `path`.
pub fn pose_on_path(path: &Path, pose: &Pose2) -> FrenetPose {
    let pr = path.centerline.project_extended(pose.position);
    FrenetPose { s: pr.s, d: pr.d, heading_offset: crate::geometry::wrap_angle(pose.heading - pr.tangent) }
}
