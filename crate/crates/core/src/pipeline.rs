//! End-to-end prediction and scoring of scenario frames with any of the three predictors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{mixture_baseline, ukf_propagate, KinematicState, MixtureParams, UkfParams, DEFAULT_DT};
use crate::error::{Error, Result};
use crate::eval::{
    count_modes, grid_from_path_occupancy, likelihood_metrics, mc_grid_from_mixture, Likelihoods, MetricsRow, OccupancyGrid,
    PathOccupancy, DEFAULT_MC_SAMPLES, DEFAULT_RING_RADII, DEFAULT_TAU,
};
use crate::geometry::GridSpec;
use crate::labeling::{ground_truth_grid, ActorTrack};
use crate::lane_graph::{discretize_path, DEFAULT_CELL_LENGTH_M, SEED_RADIUS_M};
use crate::lon::features::{actor_features, feature_bundle};
use crate::lon::LonModel;
use crate::simgen::{scenario_frames, Scenario};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Unimodal CTRV unscented Kalman filter.
    Ukf,
    /// Lane-following trajectory mixture.
    Mixture,
    /// LaneOccupancyNet.
    Lon,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ukf => "ukf",
            Method::Mixture => "mixture",
            Method::Lon => "lon",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalSettings {
    pub horizon: f64,
    pub mc_samples: usize,
    pub seed: u64,
    /// Modes kept by the mixture baseline.
    pub k_max: usize,
    pub ring_radii: Vec<f64>,
    pub tau: f64,
    pub grid_size_m: f64,
    pub grid_resolution: f64,
    /// Evaluate every n-th eligible frame.
    pub frame_stride: usize,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings {
            horizon: 9.0,
            mc_samples: DEFAULT_MC_SAMPLES,
            seed: 0,
            k_max: 3,
            ring_radii: DEFAULT_RING_RADII.to_vec(),
            tau: DEFAULT_TAU,
            grid_size_m: 150.0,
            grid_resolution: 1.0,
            frame_stride: 1,
        }
    }
}

/// Speed and yaw rate estimated from the track history at `t0`.
pub fn kinematic_state(track: &ActorTrack, t0: f64) -> Result<KinematicState> {
    let pose = track.pose_at(t0).ok_or_else(|| Error::Track(format!("t0={t0} outside track {}", track.id)))?;
    let f = actor_features(track, t0);
    Ok(KinematicState { pose, speed: f[0], yaw_rate: f[1] })
}

fn mix(seed: u64, parts: &[u64]) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        h = (h ^ p).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 31;
    }
    h
}

/// Predicted occupancy for actor `actor` of `sc` at `t0` on `spec`.
pub fn predict_grid(
    method: Method,
    model: Option<&LonModel>,
    sc: &Scenario,
    actor: usize,
    t0: f64,
    spec: &GridSpec,
    settings: &EvalSettings,
    seed: u64,
) -> Result<OccupancyGrid> {
    let track = &sc.actors[actor];
    let state = kinematic_state(track, t0)?;
    match method {
        Method::Ukf => {
            let mix = ukf_propagate(&state.to_ukf(), DEFAULT_DT, settings.horizon, &UkfParams::default())?;
            mc_grid_from_mixture(&mix, &track.footprint, &state.pose, spec, settings.mc_samples, seed)
        }
        Method::Mixture => {
            let paths = sc.map.roll_out_paths(state.pose.position, SEED_RADIUS_M, 300.0)?;
            let params = MixtureParams { horizon: settings.horizon, ..Default::default() };
            let mix = mixture_baseline(&state, &paths, settings.k_max, &params)?;
            mc_grid_from_mixture(&mix, &track.footprint, &state.pose, spec, settings.mc_samples, seed)
        }
        Method::Lon => {
            let model = model.ok_or_else(|| Error::Invalid("the lon method needs a model".into()))?;
            let cfg = &model.config;
            let max_length = cfg.num_cells as f64 * DEFAULT_CELL_LENGTH_M;
            let scene = sc.view();
            let mut occupancy = Vec::new();
            for path in sc.map.roll_out_paths(state.pose.position, SEED_RADIUS_M, max_length)? {
                let cells = discretize_path(&path, DEFAULT_CELL_LENGTH_M, cfg.num_cells)?;
                let probabilities = model.forward(&feature_bundle(&scene, track, t0, &cells, cfg))?;
                occupancy.push(PathOccupancy { cells, probabilities });
            }
            grid_from_path_occupancy(&occupancy, spec)
        }
    }
}

/// Outcome for one actor-frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameResult {
    pub scenario: String,
    pub actor_id: String,
    pub t0: f64,
    pub metrics: Likelihoods,
    /// Mode count per ring radius, in `EvalSettings::ring_radii` order.
    pub modes: Vec<usize>,
}

impl FrameResult {
    pub fn frame_label(&self) -> String {
        format!("{}@{}", self.scenario, self.t0)
    }

    pub fn row(&self, method: Method) -> MetricsRow {
        MetricsRow::new(&self.actor_id, &self.frame_label(), method.name(), &self.metrics)
    }
}

/// Frames of `sc` whose full horizon is observed, thinned by `frame_stride`.
pub fn evaluation_frames(sc: &Scenario, settings: &EvalSettings) -> Vec<(usize, f64)> {
    scenario_frames(sc)
        .into_iter()
        .filter(|&(i, t0)| sc.actors[i].observed_horizon(t0) >= settings.horizon - 1e-9)
        .step_by(settings.frame_stride.max(1))
        .collect()
}

/// Predicts and scores one frame; `with_grid` also returns the prediction.
pub fn evaluate_frame(
    method: Method,
    model: Option<&LonModel>,
    sc: &Scenario,
    scenario_index: usize,
    actor: usize,
    t0: f64,
    settings: &EvalSettings,
) -> Result<(FrameResult, OccupancyGrid)> {
    let track = &sc.actors[actor];
    let pose = track.pose_at(t0).ok_or_else(|| Error::Track(format!("t0={t0} outside track {}", track.id)))?;
    let spec = GridSpec::new(pose.position, settings.grid_size_m, settings.grid_resolution)?;
    let seed = mix(settings.seed, &[scenario_index as u64, actor as u64, (t0 * 1000.0).round() as u64]);
    let pred = predict_grid(method, model, sc, actor, t0, &spec, settings, seed)?;
    let truth = ground_truth_grid(track, t0, settings.horizon, &spec)?;
    let metrics = likelihood_metrics(&truth, &pred)?;
    let modes = settings.ring_radii.iter().map(|&r| count_modes(&pred, &pose, r, settings.tau)).collect::<Result<Vec<_>>>()?;
    let result = FrameResult { scenario: sc.name.clone(), actor_id: track.id.clone(), t0, metrics, modes };
    Ok((result, pred))
}

/// Scores every evaluation frame of `scenarios` in scenario, actor, time order.
/// `on_grid` receives each prediction (e.g. to write it out).
pub fn evaluate_scenarios(
    method: Method,
    model: Option<&LonModel>,
    scenarios: &[Scenario],
    settings: &EvalSettings,
    on_grid: &(dyn Fn(&FrameResult, &OccupancyGrid) -> Result<()> + Sync),
) -> Result<Vec<FrameResult>> {
    if method == Method::Lon && model.is_none() {
        return Err(Error::Invalid("the lon method needs a model".into()));
    }
    let jobs: Vec<(usize, usize, f64)> = scenarios
        .iter()
        .enumerate()
        .flat_map(|(s, sc)| evaluation_frames(sc, settings).into_iter().map(move |(a, t)| (s, a, t)))
        .collect();
    jobs.par_iter()
        .map(|&(s, a, t)| {
            let (res, grid) = evaluate_frame(method, model, &scenarios[s], s, a, t, settings)?;
            on_grid(&res, &grid)?;
            Ok(res)
        })
        .collect()
}

/// Per-method summary across frames.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub frames: usize,
    /// (median, 25th, 75th percentile) of each likelihood.
    pub overall: Option<(f64, f64, f64)>,
    pub positive: Option<(f64, f64, f64)>,
    pub negative: Option<(f64, f64, f64)>,
    pub mean_positive: Option<f64>,
    /// Mean mode count per ring radius.
    pub mean_modes: Vec<f64>,
}

pub fn summarize(results: &[FrameResult]) -> Summary {
    use crate::eval::quartiles;
    let collect = |f: &dyn Fn(&Likelihoods) -> Option<f64>| results.iter().filter_map(|r| f(&r.metrics)).collect::<Vec<f64>>();
    let pos = collect(&|m| m.positive);
    let radii = results.first().map_or(0, |r| r.modes.len());
    Summary {
        frames: results.len(),
        overall: quartiles(&collect(&|m| Some(m.overall))),
        positive: quartiles(&pos),
        negative: quartiles(&collect(&|m| m.negative)),
        mean_positive: (!pos.is_empty()).then(|| pos.iter().sum::<f64>() / pos.len() as f64),
        mean_modes: (0..radii)
            .map(|k| results.iter().map(|r| r.modes[k] as f64).sum::<f64>() / results.len() as f64)
            .collect(),
    }
}
