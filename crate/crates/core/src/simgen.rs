//! Procedural lane maps, simulated actor tracks, scenario files and training-set emission.

use std::f64::consts::PI;
use std::path::Path as FsPath;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Polygon, Polyline, Pose2, Vec2};
use crate::labeling::{label_cells, ActorTrack, TimedPose, TrackRecord};
use crate::lane_graph::{discretize_path, LaneGraph, LaneId, DEFAULT_CELL_LENGTH_M, SEED_RADIUS_M};
use crate::lon::features::{feature_bundle, SceneView};
use crate::lon::io::{DatasetHeader, DatasetWriter};
use crate::lon::{LonConfig, Sample};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Template {
    /// Parallel straight lanes along +x.
    Straight,
    /// Parallel lanes bending left by `turn_angle_deg` at `radius`.
    Curve,
    /// `arms` roads meeting at the origin, one lane each way, with a connector lane
    /// for every movement except U-turns.
    NWayIntersection,
    /// One lane splitting into a left and a right branch.
    Branch,
    /// Long straight road of `lanes` adjacent lanes for lane changes.
    LaneChangeCorridor,
}

/// Template parameters. Ranges: `lanes` 1..=6, `arms` 3..=6, `lane_width` 2..=6 m,
/// `radius` >= 5 m, lengths > 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MapParams {
    pub lanes: usize,
    pub lane_width: f64,
    pub radius: f64,
    pub turn_angle_deg: f64,
    pub arms: usize,
    /// Length of each intersection arm, or of the straight parts of other templates.
    pub length: f64,
    /// Distance from the intersection center to where arm lanes end.
    pub junction_radius: f64,
    /// Uniform random perturbation of arm directions, degrees.
    pub angle_jitter_deg: f64,
}

impl Default for MapParams {
    fn default() -> Self {
        MapParams {
            lanes: 1,
            lane_width: 3.6,
            radius: 40.0,
            turn_angle_deg: 90.0,
            arms: 4,
            length: 100.0,
            junction_radius: 15.0,
            angle_jitter_deg: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub template: Template,
    #[serde(default)]
    pub params: MapParams,
    #[serde(default)]
    pub seed: u64,
}

impl MapSpec {
    /// Accepts the template names plus the shorthands `three_way`, `four_way`,
    /// `five_way`, `six_way` and `corridor`.
    pub fn named(name: &str, seed: u64) -> Result<Self> {
        let mut params = MapParams::default();
        let template = match name {
            "straight" => {
                params.length = 300.0;
                Template::Straight
            }
            "curve" => Template::Curve,
            "n_way_intersection" | "intersection" => Template::NWayIntersection,
            "three_way" | "four_way" | "five_way" | "six_way" => {
                params.arms = ["three_way", "four_way", "five_way", "six_way"].iter().position(|n| *n == name).unwrap() + 3;
                Template::NWayIntersection
            }
            "branch" => Template::Branch,
            "lane_change_corridor" | "corridor" => {
                params.lanes = 2;
                params.length = 300.0;
                Template::LaneChangeCorridor
            }
            other => return Err(Error::Invalid(format!("unknown map template {other}"))),
        };
        Ok(MapSpec { template, params, seed })
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        let ok = (1..=6).contains(&p.lanes)
            && (3..=6).contains(&p.arms)
            && (2.0..=6.0).contains(&p.lane_width)
            && p.radius >= 5.0
            && p.length > 0.0
            && p.junction_radius > p.lane_width
            && p.turn_angle_deg > 0.0
            && p.turn_angle_deg <= 180.0
            && (0.0..=20.0).contains(&p.angle_jitter_deg);
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("map parameters out of range: {p:?}")))
        }
    }
}

type LaneSpec = (LaneId, Polyline, f64, Vec<LaneId>);

fn polyline(points: Vec<Vec2>) -> Result<Polyline> {
    Polyline::new_dedup(points, 1e-6)
}

fn sample_segment(a: Vec2, b: Vec2, step: f64) -> Vec<Vec2> {
    let n = (a.dist(b) / step).ceil().max(1.0) as usize;
    (0..=n).map(|i| a.lerp(b, i as f64 / n as f64)).collect()
}

/// Cubic Bezier from `a` leaving along `ha` to `b` arriving along `hb`.
fn bezier(a: Vec2, ha: f64, b: Vec2, hb: f64, n: usize) -> Vec<Vec2> {
    let h = 0.4 * a.dist(b);
    let (p1, p2) = (a + Vec2::from_heading(ha) * h, b - Vec2::from_heading(hb) * h);
    (0..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            let u = 1.0 - t;
            a * (u * u * u) + p1 * (3.0 * u * u * t) + p2 * (3.0 * u * t * t) + b * (t * t * t)
        })
        .collect()
}

/// Lane offsets centred on the road axis, left positive.
fn lane_offsets(p: &MapParams) -> Vec<f64> {
    (0..p.lanes).map(|i| (i as f64 - (p.lanes as f64 - 1.0) / 2.0) * p.lane_width).collect()
}

pub fn generate_map(spec: &MapSpec) -> Result<LaneGraph> {
    spec.validate()?;
    let p = &spec.params;
    let lanes = match spec.template {
        Template::Straight | Template::LaneChangeCorridor => lane_offsets(p)
            .into_iter()
            .enumerate()
            .map(|(i, o)| Ok((format!("lane_{i}"), polyline(sample_segment(Vec2::new(0.0, o), Vec2::new(p.length, o), 10.0))?, p.lane_width, vec![])))
            .collect::<Result<Vec<_>>>()?,
        Template::Curve => curve_lanes(p)?,
        Template::NWayIntersection => intersection_lanes(p, spec.seed)?,
        Template::Branch => branch_lanes(p)?,
    };
    LaneGraph::new(lanes)
}

fn curve_lanes(p: &MapParams) -> Result<Vec<LaneSpec>> {
    let lead = 0.5 * p.length;
    let angle = p.turn_angle_deg.to_radians();
    lane_offsets(p)
        .into_iter()
        .enumerate()
        .map(|(i, o)| {
            let r = p.radius - o;
            if r < 1.0 {
                return Err(Error::Invalid(format!("radius {} too small for {} lanes", p.radius, p.lanes)));
            }
            let center = Vec2::new(0.0, p.radius);
            let mut pts = sample_segment(Vec2::new(-lead, o), Vec2::new(0.0, o), 5.0);
            let n = (r * angle).ceil().max(2.0) as usize;
            pts.extend((1..=n).map(|k| {
                let a = angle * k as f64 / n as f64;
                center + Vec2::new(r * a.sin(), -r * a.cos())
            }));
            let end = *pts.last().unwrap();
            pts.extend(sample_segment(end, end + Vec2::from_heading(angle) * lead, 5.0).into_iter().skip(1));
            Ok((format!("lane_{i}"), polyline(pts)?, p.lane_width, vec![]))
        })
        .collect()
}

fn branch_lanes(p: &MapParams) -> Result<Vec<LaneSpec>> {
    let w = p.lane_width;
    let trunk = polyline(sample_segment(Vec2::new(-p.length, 0.0), Vec2::ZERO, 10.0))?;
    let mut out = vec![("trunk".to_string(), trunk, w, vec!["left".to_string(), "right".to_string()])];
    for (id, side) in [("left", 1.0), ("right", -1.0)] {
        let split_end = Vec2::new(30.0, side * 1.5 * w);
        let mut pts = bezier(Vec2::ZERO, 0.0, split_end, 0.0, 30);
        pts.extend(sample_segment(split_end, split_end + Vec2::new(p.length, 0.0), 10.0).into_iter().skip(1));
        out.push((id.to_string(), polyline(pts)?, w, vec![]));
    }
    Ok(out)
}

/// Incoming lane `in_k`, outgoing lane `out_k` per arm, and connector `conn_i_j` from
/// `in_i` to `out_j` for every `i != j`.
fn intersection_lanes(p: &MapParams, seed: u64) -> Result<Vec<LaneSpec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.arms;
    let dirs: Vec<f64> = (0..n)
        .map(|k| 2.0 * PI * k as f64 / n as f64 + rng.random_range(-1.0..=1.0) * p.angle_jitter_deg.to_radians())
        .collect();
    let (r0, o) = (p.junction_radius, 0.5 * p.lane_width);
    let entry = |k: usize| {
        let u = Vec2::from_heading(dirs[k]);
        (u * r0 + u.perp() * o, u * (r0 + p.length) + u.perp() * o)
    };
    let exit = |k: usize| {
        let u = Vec2::from_heading(dirs[k]);
        (u * r0 - u.perp() * o, u * (r0 + p.length) - u.perp() * o)
    };
    let mut out = Vec::new();
    for i in 0..n {
        let (near, far) = entry(i);
        let succ = (0..n).filter(|&j| j != i).map(|j| format!("conn_{i}_{j}")).collect();
        out.push((format!("in_{i}"), polyline(sample_segment(far, near, 10.0))?, p.lane_width, succ));
        let (near, far) = exit(i);
        out.push((format!("out_{i}"), polyline(sample_segment(near, far, 10.0))?, p.lane_width, vec![]));
        for j in (0..n).filter(|&j| j != i) {
            let a = entry(i).0;
            let b = exit(j).0;
            let pts = bezier(a, dirs[i] + PI, b, dirs[j], 24);
            out.push((format!("conn_{i}_{j}"), polyline(pts)?, p.lane_width, vec![format!("out_{j}")]));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TurnChoice {
    Left,
    Straight,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Behavior {
    /// Keep to the lane, taking the straightest successor at every fork.
    Follow,
    /// Take the given movement at the first fork, then go straight.
    Turn { choice: TurnChoice },
    /// Shift one lane width toward `direction`, blending over [`LANE_CHANGE_DURATION`].
    LaneChange { t_start: f64, direction: Side },
    /// Swerve left by `offset` meters and back over `duration` seconds.
    NudgeAroundBlockage { t_start: f64, duration: f64, offset: f64 },
}

pub const LANE_CHANGE_DURATION: f64 = 3.0;
/// Default simulation and recording step, seconds.
pub const DEFAULT_TICK: f64 = 0.1;
const SUBSTEPS: usize = 5;
const NOISE_TIME_CONSTANT: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BehaviorSpec {
    pub id: String,
    pub start_lane: LaneId,
    /// Arc length along the start lane.
    pub start_s: f64,
    pub behavior: Behavior,
    /// Speed the actor accelerates or brakes toward, m/s.
    pub cruise_speed: f64,
    /// Speed at `t = 0`; defaults to the cruise speed.
    pub initial_speed: Option<f64>,
    pub max_accel: f64,
    pub max_decel: f64,
    /// Stationary standard deviation of the lateral wander, meters.
    pub lateral_noise: f64,
    pub length: f64,
    pub width: f64,
    pub seed: u64,
}

impl BehaviorSpec {
    pub fn new(id: impl Into<String>, start_lane: impl Into<String>, start_s: f64, behavior: Behavior, cruise_speed: f64) -> Self {
        BehaviorSpec {
            id: id.into(),
            start_lane: start_lane.into(),
            start_s,
            behavior,
            cruise_speed,
            initial_speed: None,
            max_accel: 2.0,
            max_decel: 4.0,
            lateral_noise: 0.0,
            length: 4.5,
            width: 1.9,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.cruise_speed >= 0.0
            && self.initial_speed.is_none_or(|v| v >= 0.0)
            && self.max_accel > 0.0
            && self.max_decel > 0.0
            && self.lateral_noise >= 0.0
            && self.length > 0.0
            && self.width > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("behavior of actor {} out of range", self.id)))
        }
    }
}

fn smoothstep(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * (3.0 - 2.0 * u)
}

/// Lanes the actor drives through, choosing successors per its behavior.
fn plan_route(graph: &LaneGraph, spec: &BehaviorSpec, needed: f64) -> Result<Vec<LaneId>> {
    let start = graph
        .lane(&spec.start_lane)
        .ok_or_else(|| Error::Invalid(format!("actor {}: unknown start lane {}", spec.id, spec.start_lane)))?;
    let mut route = vec![start.id.clone()];
    let mut covered = start.centerline.length() - spec.start_s;
    let mut pending_turn = match spec.behavior {
        Behavior::Turn { choice } => Some(choice),
        _ => None,
    };
    while covered < needed {
        let lane = graph.lane(route.last().unwrap()).unwrap();
        let options: Vec<_> = lane.successors.iter().filter(|s| !route.contains(s)).filter_map(|s| graph.lane(s)).collect();
        if options.is_empty() {
            break;
        }
        let choice = if options.len() > 1 { pending_turn.take().unwrap_or(TurnChoice::Straight) } else { TurnChoice::Straight };
        let turn = |l: &&crate::lane_graph::Lane| l.centerline.total_turn();
        let next = match choice {
            TurnChoice::Left => options.iter().max_by(|a, b| turn(a).total_cmp(&turn(b))),
            TurnChoice::Right => options.iter().min_by(|a, b| turn(a).total_cmp(&turn(b))),
            TurnChoice::Straight => options.iter().min_by(|a, b| turn(a).abs().total_cmp(&turn(b).abs())),
        }
        .unwrap();
        covered += next.centerline.length();
        route.push(next.id.clone());
    }
    Ok(route)
}

/// Simulates one actor for up to `duration` seconds, recording a pose every `tick`.
///
/// A pure-pursuit controller steers toward a point a short lookahead ahead on the
/// route centerline, shifted laterally by the behavior's offset plus an
/// Ornstein-Uhlenbeck wander. The track ends early when the route runs out.
pub fn simulate_actor(graph: &LaneGraph, spec: &BehaviorSpec, duration: f64, tick: f64) -> Result<ActorTrack> {
    spec.validate()?;
    if !(tick > 0.0) || !(duration >= 0.0) {
        return Err(Error::Invalid("tick must be positive and duration non-negative".into()));
    }
    let top_speed = spec.cruise_speed.max(spec.initial_speed.unwrap_or(0.0));
    let route_ids = plan_route(graph, spec, top_speed * duration + 50.0)?;
    let mut pts = Vec::new();
    for (i, id) in route_ids.iter().enumerate() {
        let c = &graph.lane(id).unwrap().centerline;
        let from = if i == 0 { spec.start_s.clamp(0.0, c.length()) } else { 0.0 };
        pts.extend(c.sub_points(from, c.length()));
    }
    let route = polyline(pts).map_err(|e| Error::Invalid(format!("actor {}: route too short: {e}", spec.id)))?;
    let lane_width = graph.lane(&spec.start_lane).unwrap().width;

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let offset = |t: f64| match spec.behavior {
        Behavior::LaneChange { t_start, direction } => direction.sign() * lane_width * smoothstep((t - t_start) / LANE_CHANGE_DURATION),
        Behavior::NudgeAroundBlockage { t_start, duration, offset } => {
            let u = (t - t_start) / duration;
            if (0.0..=1.0).contains(&u) {
                offset * (PI * u).sin().powi(2)
            } else {
                0.0
            }
        }
        _ => 0.0,
    };
    let dt = tick / SUBSTEPS as f64;
    let decay = (-dt / NOISE_TIME_CONSTANT).exp();
    let kick = spec.lateral_noise * (1.0 - decay * decay).sqrt();
    let mut noise = 0.0;
    let mut pos = route.start();
    let mut heading = route.heading_at(0.0);
    let mut v = spec.initial_speed.unwrap_or(spec.cruise_speed);
    let mut poses = vec![TimedPose { t: 0.0, pose: Pose2::new(pos, heading) }];
    let steps = (duration / tick).round() as usize;
    'outer: for k in 0..steps {
        for sub in 0..SUBSTEPS {
            let t = k as f64 * tick + sub as f64 * dt;
            let s = route.project(pos).s;
            if s >= route.length() - 1.0 {
                break 'outer;
            }
            let lookahead = (0.25 * v).max(2.5);
            let preview = t + lookahead / v.max(1.0);
            let target = route.frenet_to_world((s + lookahead).min(route.length()), offset(preview) + noise);
            let to_target = target - pos;
            let alpha = wrap_angle(to_target.heading() - heading);
            let curvature = 2.0 * alpha.sin() / to_target.norm().max(1e-6);
            let turn = v * curvature * dt;
            pos = pos + Vec2::from_heading(heading + 0.5 * turn) * (v * dt);
            heading = wrap_angle(heading + turn);
            v = (v + (spec.cruise_speed - v).clamp(-spec.max_decel * dt, spec.max_accel * dt)).max(0.0);
            if kick > 0.0 {
                noise = noise * decay + kick * rng.sample::<f64, _>(StandardNormal);
            }
        }
        poses.push(TimedPose { t: (k + 1) as f64 * tick, pose: Pose2::new(pos, heading) });
    }
    ActorTrack::new(spec.id.clone(), Polygon::rectangle(spec.length, spec.width)?, poses)
}

/// Map, actor tracks and (optionally) which actor is the self-driving vehicle.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub map: LaneGraph,
    /// When set, the map is saved as this path instead of inline.
    pub map_ref: Option<String>,
    pub sdv_id: Option<String>,
    pub actors: Vec<ActorTrack>,
}

#[derive(Serialize, Deserialize)]
struct ScenarioRecord {
    #[serde(default)]
    name: String,
    map: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sdv_id: Option<String>,
    actors: Vec<TrackRecord>,
}

impl Scenario {
    pub fn view(&self) -> SceneView<'_> {
        SceneView { map: &self.map, actors: &self.actors, sdv_id: self.sdv_id.as_deref() }
    }

    pub fn actor(&self, id: &str) -> Option<&ActorTrack> {
        self.actors.iter().find(|a| a.id == id)
    }

    pub fn to_json(&self) -> String {
        let map = match &self.map_ref {
            Some(p) => serde_json::Value::String(p.clone()),
            None => self.map.to_json_value(),
        };
        let rec = ScenarioRecord {
            name: self.name.clone(),
            map,
            sdv_id: self.sdv_id.clone(),
            actors: self.actors.iter().map(|a| a.to_record()).collect(),
        };
        serde_json::to_string(&rec).expect("scenario serializes")
    }

    /// Parses a scenario; a map given by path is resolved against `base_dir`.
    pub fn from_json(s: &str, base_dir: Option<&FsPath>) -> Result<Self> {
        let rec: ScenarioRecord = serde_json::from_str(s)?;
        let (map, map_ref) = match rec.map {
            serde_json::Value::String(p) => {
                let full = base_dir.map_or_else(|| FsPath::new(&p).to_path_buf(), |d| d.join(&p));
                (LaneGraph::load(&full)?, Some(p))
            }
            v => (LaneGraph::from_json_value(v)?, None),
        };
        let actors = rec.actors.into_iter().map(ActorTrack::from_record).collect::<Result<Vec<_>>>()?;
        let mut ids: Vec<&str> = actors.iter().map(|a| a.id.as_str()).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Track(format!("scenario {}: duplicate actor ids", rec.name)));
        }
        if let Some(sdv) = &rec.sdv_id {
            if !ids.contains(&sdv.as_str()) {
                return Err(Error::Track(format!("scenario {}: unknown sdv_id {sdv}", rec.name)));
            }
        }
        Ok(Scenario { name: rec.name, map, map_ref, sdv_id: rec.sdv_id, actors })
    }

    pub fn load(path: &FsPath) -> Result<Self> {
        let mut sc = Scenario::from_json(&std::fs::read_to_string(path)?, path.parent())?;
        if sc.name.is_empty() {
            sc.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        }
        Ok(sc)
    }

    pub fn save(&self, path: &FsPath) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Four-way intersection with actors turning left, right or going straight.
    FourWay,
    /// Multi-lane corridor with lane changes and swerves around parked cars.
    LaneChange,
}

/// Random actors on a generated map. Actor 0 is the self-driving vehicle.
pub fn generate_scenario(kind: ScenarioKind, seed: u64, duration: f64, name: impl Into<String>) -> Result<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = name.into();
    let (map, specs) = match kind {
        ScenarioKind::FourWay => {
            let map = generate_map(&MapSpec::named("four_way", seed)?)?;
            let mut specs = Vec::new();
            for arm in 0..4 {
                let count = rng.random_range(0..=2usize);
                let mut s = rng.random_range(10.0..30.0);
                for _ in 0..count {
                    let choice = [TurnChoice::Left, TurnChoice::Straight, TurnChoice::Right][rng.random_range(0..3)];
                    let mut b = BehaviorSpec::new("", format!("in_{arm}"), s, Behavior::Turn { choice }, rng.random_range(5.0..11.0));
                    b.lateral_noise = 0.15;
                    specs.push(b);
                    s += rng.random_range(18.0..35.0);
                    if s > 90.0 {
                        break;
                    }
                }
            }
            if specs.is_empty() {
                specs.push(BehaviorSpec::new("", "in_0", 20.0, Behavior::Turn { choice: TurnChoice::Left }, 8.0));
            }
            (map, specs)
        }
        ScenarioKind::LaneChange => {
            let mut spec = MapSpec::named("corridor", seed)?;
            spec.params.lanes = rng.random_range(2..=3);
            spec.params.length = 400.0;
            let map = generate_map(&spec)?;
            let lanes = spec.params.lanes;
            let mut specs = Vec::new();
            for lane in 0..lanes {
                let mut s = rng.random_range(5.0..40.0);
                for _ in 0..rng.random_range(1..=2usize) {
                    let r: f64 = rng.random();
                    let behavior = if r < 0.55 {
                        let direction = match lane {
                            0 => Side::Left,
                            l if l + 1 == lanes => Side::Right,
                            _ => [Side::Left, Side::Right][rng.random_range(0..2)],
                        };
                        Behavior::LaneChange { t_start: rng.random_range(1.0..10.0), direction }
                    } else {
                        Behavior::Follow
                    };
                    let mut b = BehaviorSpec::new("", format!("lane_{lane}"), s, behavior, rng.random_range(8.0..14.0));
                    b.lateral_noise = 0.15;
                    specs.push(b);
                    s += rng.random_range(25.0..50.0);
                }
            }
            if rng.random_bool(0.4) {
                let lane = rng.random_range(0..lanes);
                let s_block = rng.random_range(90.0..140.0);
                let mut parked = BehaviorSpec::new("", format!("lane_{lane}"), s_block, Behavior::Follow, 0.0);
                parked.initial_speed = Some(0.0);
                specs.push(parked);
                let v = rng.random_range(7.0..10.0);
                let s0 = rng.random_range(0.0..20.0);
                let t_start = ((s_block - s0 - 25.0) / v).max(0.5);
                let side = if lane + 1 == lanes { -1.0 } else { 1.0 };
                let nudge = Behavior::NudgeAroundBlockage { t_start, duration: 50.0 / v, offset: side * 2.2 };
                specs.push(BehaviorSpec::new("", format!("lane_{lane}"), s0, nudge, v));
            }
            (map, specs)
        }
    };
    let mut actors = Vec::with_capacity(specs.len());
    for (i, mut b) in specs.into_iter().enumerate() {
        b.id = format!("a{i:02}");
        b.seed = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
        actors.push(simulate_actor(&map, &b, duration, DEFAULT_TICK)?);
    }
    let sdv_id = Some(actors[0].id.clone());
    Ok(Scenario { name, map, map_ref: None, sdv_id, actors })
}

/// `count` scenarios alternating four-way intersections and lane-change corridors,
/// scenario `i` seeded from `seed` and `i`.
pub fn generate_scenarios(count: usize, seed: u64, duration: f64) -> Result<Vec<Scenario>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let kind = if i % 2 == 0 { ScenarioKind::FourWay } else { ScenarioKind::LaneChange };
            generate_scenario(kind, seed.wrapping_mul(7919).wrapping_add(i as u64), duration, format!("s{seed}_{i:04}"))
        })
        .collect()
}

/// Sampling period for dataset and evaluation frames, seconds.
pub const FRAME_PERIOD: f64 = 1.0;
/// Actors at or below this speed are skipped, m/s.
pub const MIN_SPEED: f64 = 0.5;

/// Speed from the recorded poses around `t`.
pub fn track_speed(track: &ActorTrack, t: f64) -> Option<f64> {
    let dt = 0.1;
    let (a, b) = if track.covers(t - dt) { (t - dt, t) } else { (t, t + dt) };
    Some(track.pose_at(a)?.position.dist(track.pose_at(b)?.position) / dt)
}

/// Actor-frames to predict: every non-SDV actor (in id order) at whole-second
/// times from one second after its first pose up to before its last, keeping only
/// frames where it moves faster than [`MIN_SPEED`].
pub fn scenario_frames(sc: &Scenario) -> Vec<(usize, f64)> {
    let mut order: Vec<usize> = (0..sc.actors.len()).filter(|&i| sc.sdv_id.as_deref() != Some(sc.actors[i].id.as_str())).collect();
    order.sort_by(|&a, &b| sc.actors[a].id.cmp(&sc.actors[b].id));
    let mut frames = Vec::new();
    for i in order {
        let a = &sc.actors[i];
        let mut t0 = (a.first_t() / FRAME_PERIOD).ceil() * FRAME_PERIOD + FRAME_PERIOD;
        while t0 < a.last_t() - 1e-9 {
            if track_speed(a, t0).is_some_and(|v| v > MIN_SPEED) {
                frames.push((i, t0));
            }
            t0 += FRAME_PERIOD;
        }
    }
    frames
}

/// One labelled sample per candidate path of every frame of `sc`.
pub fn scenario_samples(sc: &Scenario, horizon: f64, cfg: &LonConfig) -> Result<Vec<Sample>> {
    let scene = sc.view();
    let max_length = cfg.num_cells as f64 * DEFAULT_CELL_LENGTH_M;
    let mut out = Vec::new();
    for (i, t0) in scenario_frames(sc) {
        let actor = &sc.actors[i];
        let pose = actor.pose_at(t0).unwrap();
        for (k, path) in sc.map.roll_out_paths(pose.position, SEED_RADIUS_M, max_length)?.iter().enumerate() {
            let cells = discretize_path(path, DEFAULT_CELL_LENGTH_M, cfg.num_cells)?;
            let labels = label_cells(&cells, actor, t0, horizon)?;
            out.push(Sample {
                key: format!("{}/{}/{t0}/{k}", sc.name, actor.id),
                input: feature_bundle(&scene, actor, t0, &cells, cfg),
                labels: labels.labels,
            });
        }
    }
    Ok(out)
}

/// Writes the samples of every scenario, in order, to a dataset file and returns
/// the record count.
pub fn emit_dataset(scenarios: &[Scenario], horizon: f64, cfg: &LonConfig, path: &FsPath) -> Result<u64> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    let mut w = DatasetWriter::new(file, DatasetHeader::of(cfg))?;
    for chunk in scenarios.chunks(8) {
        let batches = chunk.par_iter().map(|sc| scenario_samples(sc, horizon, cfg)).collect::<Result<Vec<_>>>()?;
        for s in batches.iter().flatten() {
            w.write(s)?;
        }
    }
    w.finish()
}

/// Heading change from the first to the last pose of a track.
pub fn net_turn(track: &ActorTrack) -> f64 {
    wrap_angle(track.poses.last().unwrap().pose.heading - track.poses[0].pose.heading)
}
