//! Trajectory baselines: an unscented forward propagator over constant turn rate
//! and velocity (CTRV) dynamics, and a lane-following Gaussian mixture generator.
//!
//! Both produce a [`TrajectoryMixture`]: weighted modes of Gaussian waypoints at
//! times measured from the prediction instant.

use nalgebra::{DMatrix, SMatrix, SVector, SymmetricEigen};
use serde::{Deserialize, Serialize};
use std::path::Path as FsPath;

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Pose2, Vec2};
use crate::lane_graph::Path;

/// Waypoint spacing in seconds.
pub const DEFAULT_DT: f64 = 0.5;

pub type Cov2 = [[f64; 2]; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub t: f64,
    pub mu: Vec2,
    pub sigma: Cov2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub p: f64,
    pub waypoints: Vec<Waypoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMixture {
    pub modes: Vec<Mode>,
}

/// Lower-triangular factor of a 2x2 covariance, tolerating semidefinite input.
pub fn cholesky2(s: &Cov2) -> Option<Cov2> {
    let scale = s[0][0].abs().max(s[1][1].abs()).max(1.0);
    let tol = 1e-12 * scale;
    if (s[0][1] - s[1][0]).abs() > 1e-9 * scale || s[0][0] < -tol || s[1][1] < -tol {
        return None;
    }
    if s[0][0] <= tol {
        if s[0][1].abs() > 1e-9 * scale {
            return None;
        }
        return Some([[0.0, 0.0], [0.0, s[1][1].max(0.0).sqrt()]]);
    }
    let l11 = s[0][0].sqrt();
    let l21 = s[1][0] / l11;
    let rem = s[1][1] - l21 * l21;
    if rem < -tol {
        return None;
    }
    Some([[l11, 0.0], [l21, rem.max(0.0).sqrt()]])
}

impl TrajectoryMixture {
    /// Checks probabilities, covariance symmetry/PSD and shared timestamps.
    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::Invalid("mixture has no modes".into()));
        }
        let total: f64 = self.modes.iter().map(|m| m.p).sum();
        if (total - 1.0).abs() > 1e-9 || self.modes.iter().any(|m| !(m.p >= 0.0)) {
            return Err(Error::Invalid(format!("mode probabilities sum to {total}")));
        }
        let times: Vec<f64> = self.modes[0].waypoints.iter().map(|w| w.t).collect();
        for (k, m) in self.modes.iter().enumerate() {
            if m.waypoints.len() != times.len() || m.waypoints.iter().zip(&times).any(|(w, t)| (w.t - t).abs() > 1e-9) {
                return Err(Error::Invalid(format!("mode {k} timestamps differ from mode 0")));
            }
            for w in &m.waypoints {
                if cholesky2(&w.sigma).is_none() {
                    return Err(Error::NotPsd { mode: k, t: w.t });
                }
            }
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        self.modes.first().map(|m| m.waypoints.iter().map(|w| w.t).collect()).unwrap_or_default()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("mixture serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: TrajectoryMixture = serde_json::from_str(s)?;
        m.validate()?;
        Ok(m)
    }

    pub fn save(&self, path: &FsPath) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

pub type State5 = SVector<f64, 5>;
pub type Cov5 = SMatrix<f64, 5, 5>;

/// CTRV state `[x, y, heading, speed, yaw_rate]` with its covariance and process noise.
#[derive(Clone, Debug, PartialEq)]
pub struct UkfState {
    pub mean: State5,
    pub covariance: Cov5,
    /// Longitudinal acceleration noise, m/s^2.
    pub sigma_accel: f64,
    /// Yaw acceleration noise, rad/s^2.
    pub sigma_yaw_accel: f64,
}

impl UkfState {
    pub const DEFAULT_SIGMA_ACCEL: f64 = 1.0;
    pub const DEFAULT_SIGMA_YAW_ACCEL: f64 = 0.1;

    /// State with a diagonal covariance built from per-component standard deviations.
    pub fn from_pose(pose: &Pose2, speed: f64, yaw_rate: f64, std: [f64; 5]) -> Self {
        let mean = State5::new(pose.position.x, pose.position.y, pose.heading, speed, yaw_rate);
        let covariance = Cov5::from_diagonal(&State5::from_iterator(std.iter().map(|s| s * s)));
        UkfState {
            mean,
            covariance,
            sigma_accel: Self::DEFAULT_SIGMA_ACCEL,
            sigma_yaw_accel: Self::DEFAULT_SIGMA_YAW_ACCEL,
        }
    }
}

/// Scaled unscented transform constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UkfParams {
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
    /// Sigma-point yaw rates are clamped to this magnitude, rad/s.
    pub max_yaw_rate: f64,
}

impl Default for UkfParams {
    fn default() -> Self {
        UkfParams { alpha: 1.0, beta: 2.0, kappa: 0.0, max_yaw_rate: 1.0 }
    }
}

const N_AUG: usize = 7;
type Aug = SVector<f64, N_AUG>;
type AugCov = SMatrix<f64, N_AUG, N_AUG>;

/// CTRV motion over `dt` with acceleration noises `nu_a`, `nu_yaw`.
fn ctrv(x: &Aug, dt: f64, max_yaw_rate: f64) -> State5 {
    let (px, py, th, v) = (x[0], x[1], x[2], x[3]);
    let w = x[4].clamp(-max_yaw_rate, max_yaw_rate);
    let (nu_a, nu_yaw) = (x[5], x[6]);
    let (mut nx, mut ny);
    if w.abs() > 1e-9 {
        nx = px + v / w * ((th + w * dt).sin() - th.sin());
        ny = py + v / w * (th.cos() - (th + w * dt).cos());
    } else {
        nx = px + v * th.cos() * dt;
        ny = py + v * th.sin() * dt;
    }
    let half = 0.5 * dt * dt;
    nx += half * th.cos() * nu_a;
    ny += half * th.sin() * nu_a;
    let nth = th + w * dt + half * nu_yaw;
    let nv = v + dt * nu_a;
    let nw = (w + dt * nu_yaw).clamp(-max_yaw_rate, max_yaw_rate);
    State5::new(nx, ny, nth, nv, nw)
}

/// Symmetric square root of a PSD matrix; `None` if clearly indefinite.
fn psd_sqrt<const N: usize>(m: &SMatrix<f64, N, N>) -> Option<SMatrix<f64, N, N>> {
    let sym = DMatrix::from_column_slice(N, N, ((m + m.transpose()) * 0.5).as_slice());
    let eig = SymmetricEigen::new(sym);
    let scale = eig.eigenvalues.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    if eig.eigenvalues.iter().any(|&l| l < -1e-9 * scale) {
        return None;
    }
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
    let root = &eig.eigenvectors * d * eig.eigenvectors.transpose();
    Some(SMatrix::<f64, N, N>::from_column_slice(root.as_slice()))
}

/// One unscented prediction step.
pub fn ukf_step(state: &UkfState, dt: f64, params: &UkfParams) -> Result<UkfState> {
    let mut x = Aug::zeros();
    x.fixed_rows_mut::<5>(0).copy_from(&state.mean);
    let mut p = AugCov::zeros();
    p.fixed_view_mut::<5, 5>(0, 0).copy_from(&state.covariance);
    p[(5, 5)] = state.sigma_accel * state.sigma_accel;
    p[(6, 6)] = state.sigma_yaw_accel * state.sigma_yaw_accel;

    let n = N_AUG as f64;
    let lambda = params.alpha * params.alpha * (n + params.kappa) - n;
    let root = psd_sqrt(&(p * (n + lambda))).ok_or_else(|| Error::Invalid("covariance is not positive semi-definite".into()))?;
    let wm0 = lambda / (n + lambda);
    let wc0 = wm0 + (1.0 - params.alpha * params.alpha + params.beta);
    let wi = 0.5 / (n + lambda);

    let center = ctrv(&x, dt, params.max_yaw_rate);
    let mut spread = Vec::with_capacity(2 * N_AUG);
    for i in 0..N_AUG {
        let col = root.column(i);
        for sign in [1.0, -1.0] {
            let mut d = ctrv(&(x + col * sign), dt, params.max_yaw_rate) - center;
            d[2] = wrap_angle(d[2]);
            spread.push(d);
        }
    }
    // mean taken relative to the propagated center point
    let mut offset = State5::zeros();
    for d in &spread {
        offset += d * wi;
    }
    let mut mean = center + offset;
    mean[2] = wrap_angle(mean[2]);
    let mut cov = (-offset) * (-offset).transpose() * wc0;
    for d in &spread {
        let e = d - offset;
        cov += e * e.transpose() * wi;
    }
    cov = (cov + cov.transpose()) * 0.5;
    Ok(UkfState { mean, covariance: cov, sigma_accel: state.sigma_accel, sigma_yaw_accel: state.sigma_yaw_accel })
}

/// Unimodal mixture from repeated unscented prediction; waypoints at `dt, 2dt, ..., H`.
pub fn ukf_propagate(init: &UkfState, dt: f64, horizon: f64, params: &UkfParams) -> Result<TrajectoryMixture> {
    Ok(TrajectoryMixture { modes: vec![Mode { p: 1.0, waypoints: ukf_states(init, dt, horizon, params)?.1 }] })
}

/// Like [`ukf_propagate`] but also returns the full state after every step.
pub fn ukf_states(init: &UkfState, dt: f64, horizon: f64, params: &UkfParams) -> Result<(Vec<UkfState>, Vec<Waypoint>)> {
    if !(dt > 0.0) {
        return Err(Error::Invalid("dt must be positive".into()));
    }
    let steps = (horizon / dt).round();
    if !(steps >= 1.0) || (steps * dt - horizon).abs() > 1e-9 * horizon.max(1.0) {
        return Err(Error::Invalid(format!("horizon {horizon} is not a multiple of dt {dt}")));
    }
    if psd_sqrt(&init.covariance).is_none() {
        return Err(Error::Invalid("initial covariance is not positive semi-definite".into()));
    }
    let mut state = init.clone();
    let mut states = Vec::with_capacity(steps as usize);
    let mut waypoints = Vec::with_capacity(steps as usize);
    for k in 1..=steps as usize {
        state = ukf_step(&state, dt, params)?;
        let c = &state.covariance;
        waypoints.push(Waypoint {
            t: k as f64 * dt,
            mu: Vec2::new(state.mean[0], state.mean[1]),
            sigma: [[c[(0, 0)], c[(0, 1)]], [c[(1, 0)], c[(1, 1)]]],
        });
        states.push(state.clone());
    }
    Ok((states, waypoints))
}

/// Actor motion at the prediction instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KinematicState {
    pub pose: Pose2,
    pub speed: f64,
    pub yaw_rate: f64,
}

impl KinematicState {
    /// Default UKF initialization around this state.
    pub fn to_ukf(&self) -> UkfState {
        UkfState::from_pose(&self.pose, self.speed, self.yaw_rate, [0.3, 0.3, 0.05, 0.5, 0.05])
    }
}

/// Settings for the lane-following mixture generator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureParams {
    pub dt: f64,
    pub horizon: f64,
    /// Seconds of travel that set the lookahead distance for scoring.
    pub lookahead_time: f64,
    pub min_lookahead: f64,
    pub max_lookahead: f64,
    /// Softmax temperature over alignment scores.
    pub temperature: f64,
    /// Score penalty per lane width of lateral offset from the path start.
    pub offset_penalty: f64,
    pub lon_var0: f64,
    pub lon_var_rate: f64,
    pub lat_var0: f64,
    pub lat_var_rate: f64,
}

impl Default for MixtureParams {
    fn default() -> Self {
        MixtureParams {
            dt: DEFAULT_DT,
            horizon: 9.0,
            lookahead_time: 2.0,
            min_lookahead: 8.0,
            max_lookahead: 40.0,
            temperature: 0.1,
            offset_penalty: 0.5,
            lon_var0: 0.25,
            lon_var_rate: 1.5,
            lat_var0: 0.1,
            lat_var_rate: 0.2,
        }
    }
}

/// How well `path` agrees with the actor's heading and yaw rate; higher is better.
pub fn alignment_score(actor: &KinematicState, path: &Path, params: &MixtureParams) -> f64 {
    let look = (actor.speed * params.lookahead_time).clamp(params.min_lookahead, params.max_lookahead);
    let target = path.centerline.point_at(look.min(path.centerline.length()));
    let bearing = (target - actor.pose.position).heading();
    let predicted = actor.pose.heading + actor.yaw_rate * 0.5 * params.lookahead_time;
    let width = path.width_at(0.0).max(1e-3);
    wrap_angle(bearing - predicted).cos() - params.offset_penalty * path.start.d.abs() / width
}

/// Stand-in multimodal predictor: one constant-speed, centerline-following mode per
/// best-aligned path, weighted by a softmax of alignment scores. Falls back to a
/// single CTRV mode when there are no paths.
pub fn mixture_baseline(actor: &KinematicState, paths: &[Path], k_max: usize, params: &MixtureParams) -> Result<TrajectoryMixture> {
    if k_max == 0 {
        return Err(Error::Invalid("k_max must be at least 1".into()));
    }
    if paths.is_empty() {
        return ukf_propagate(&actor.to_ukf(), params.dt, params.horizon, &UkfParams::default());
    }
    let mut scored: Vec<(f64, &Path)> = paths.iter().map(|p| (alignment_score(actor, p, params), p)).collect();
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    scored.truncate(k_max);
    let top = scored[0].0;
    let weights: Vec<f64> = scored.iter().map(|(s, _)| ((s - top) / params.temperature).exp()).collect();
    let total: f64 = weights.iter().sum();
    let steps = (params.horizon / params.dt).round() as usize;
    let modes = scored
        .iter()
        .zip(&weights)
        .map(|((_, path), w)| {
            let waypoints = (1..=steps)
                .map(|k| {
                    let t = k as f64 * params.dt;
                    let s = actor.speed * t;
                    let d = path.start.d * (-t / 2.0).exp();
                    let mu = path.centerline.frenet_to_world(s, d);
                    let h = path.centerline.heading_at(s);
                    let (sn, cs) = h.sin_cos();
                    let lon = params.lon_var0 + params.lon_var_rate * t;
                    let lat = params.lat_var0 + params.lat_var_rate * t;
                    let a = cs * cs * lon + sn * sn * lat;
                    let b = cs * sn * (lon - lat);
                    let c = sn * sn * lon + cs * cs * lat;
                    Waypoint { t, mu, sigma: [[a, b], [b, c]] }
                })
                .collect();
            Mode { p: w / total, waypoints }
        })
        .collect();
    Ok(TrajectoryMixture { modes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polyline;
    use crate::lane_graph::LaneGraph;
    use proptest::prelude::*;

    fn quiet(pose: Pose2, v: f64, w: f64) -> UkfState {
        let mut s = UkfState::from_pose(&pose, v, w, [0.0; 5]);
        s.sigma_accel = 0.0;
        s.sigma_yaw_accel = 0.0;
        s
    }

    #[test]
    fn stationary_stays_put() {
        let init = quiet(Pose2::new(Vec2::new(3.0, 4.0), 0.7), 0.0, 0.0);
        let m = ukf_propagate(&init, 0.5, 9.0, &UkfParams::default()).unwrap();
        assert_eq!(m.modes[0].waypoints.len(), 18);
        for w in &m.modes[0].waypoints {
            assert!(w.mu.dist(Vec2::new(3.0, 4.0)) < 1e-12);
            assert!(w.sigma.iter().flatten().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn straight_motion() {
        let h = 0.3f64;
        let init = quiet(Pose2::new(Vec2::new(1.0, 2.0), h), 10.0, 0.0);
        let m = ukf_propagate(&init, 0.5, 9.0, &UkfParams::default()).unwrap();
        for w in &m.modes[0].waypoints {
            let want = Vec2::new(1.0, 2.0) + Vec2::from_heading(h) * (10.0 * w.t);
            assert!(w.mu.dist(want) < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut init = quiet(Pose2::new(Vec2::ZERO, 0.0), 1.0, 0.0);
        assert!(ukf_propagate(&init, 0.5, 9.2, &UkfParams::default()).is_err());
        assert!(ukf_propagate(&init, 0.0, 9.0, &UkfParams::default()).is_err());
        init.covariance[(0, 0)] = -1.0;
        assert!(ukf_propagate(&init, 0.5, 9.0, &UkfParams::default()).is_err());
    }

    #[test]
    fn turning_respects_yaw_clamp() {
        let init = quiet(Pose2::new(Vec2::ZERO, 0.0), 5.0, 3.0);
        let (states, _) = ukf_states(&init, 0.5, 3.0, &UkfParams::default()).unwrap();
        for s in states {
            assert!(s.mean[4].abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn covariance_trace_grows_with_noise() {
        let init = KinematicState { pose: Pose2::new(Vec2::ZERO, 0.2), speed: 8.0, yaw_rate: 0.1 }.to_ukf();
        let (states, _) = ukf_states(&init, 0.5, 9.0, &UkfParams::default()).unwrap();
        let mut prev = init.covariance.trace();
        for s in states {
            assert!(s.covariance.trace() >= prev - 1e-12);
            prev = s.covariance.trace();
        }
    }

    #[test]
    fn cholesky_handles_semidefinite() {
        assert_eq!(cholesky2(&[[0.0, 0.0], [0.0, 0.0]]), Some([[0.0, 0.0], [0.0, 0.0]]));
        let l = cholesky2(&[[4.0, 2.0], [2.0, 2.0]]).unwrap();
        assert_eq!(l, [[2.0, 0.0], [1.0, 1.0]]);
        assert!(cholesky2(&[[1.0, 2.0], [2.0, 1.0]]).is_none());
        assert!(cholesky2(&[[1.0, 0.5], [0.4, 1.0]]).is_none());
    }

    fn fan(angles: &[f64]) -> LaneGraph {
        let mut specs = vec![];
        let mut succ = vec![];
        for (i, a) in angles.iter().enumerate() {
            let id = format!("b{i}");
            let start = Vec2::new(30.0, 0.0);
            let mid = start + Vec2::new(10.0, 0.0);
            let end = mid + Vec2::from_heading(*a) * 60.0;
            specs.push((id.clone(), Polyline::new(vec![start, mid, end]).unwrap(), 3.6, vec![]));
            succ.push(id);
        }
        specs.push(("in".into(), Polyline::new(vec![Vec2::ZERO, Vec2::new(30.0, 0.0)]).unwrap(), 3.6, succ));
        LaneGraph::new(specs).unwrap()
    }

    #[test]
    fn single_path_single_mode() {
        let g = fan(&[0.0]);
        let paths = g.roll_out_paths(Vec2::new(1.0, 0.0), 2.0, 192.0).unwrap();
        let actor = KinematicState { pose: Pose2::new(Vec2::new(1.0, 0.0), 0.0), speed: 10.0, yaw_rate: 0.0 };
        let m = mixture_baseline(&actor, &paths, 3, &MixtureParams::default()).unwrap();
        assert_eq!(m.modes.len(), 1);
        assert_eq!(m.modes[0].p, 1.0);
        m.validate().unwrap();
    }

    #[test]
    fn symmetric_branches_split_evenly() {
        let g = fan(&[0.6, -0.6]);
        let paths = g.roll_out_paths(Vec2::new(1.0, 0.0), 2.0, 192.0).unwrap();
        let actor = KinematicState { pose: Pose2::new(Vec2::new(1.0, 0.0), 0.0), speed: 12.0, yaw_rate: 0.0 };
        let m = mixture_baseline(&actor, &paths, 3, &MixtureParams::default()).unwrap();
        assert_eq!(m.modes.len(), 2);
        assert!((m.modes[0].p - 0.5).abs() < 1e-9 && (m.modes[1].p - 0.5).abs() < 1e-9);
    }

    #[test]
    fn three_way_probabilities_follow_scores() {
        // left 45 degrees, straight, right 90 degrees
        let g = fan(&[0.785, 0.0, -1.571]);
        let actor = KinematicState { pose: Pose2::new(Vec2::new(20.0, 0.0), 0.0), speed: 10.0, yaw_rate: 0.0 };
        let paths = g.roll_out_paths(actor.pose.position, 2.0, 192.0).unwrap();
        let params = MixtureParams { lookahead_time: 3.0, ..MixtureParams::default() };
        // lookahead 30 m from x=20: 20 m to the corner at x=40, then 10 m along each branch
        let by_hand = |a: f64| {
            let target = Vec2::new(40.0, 0.0) + Vec2::from_heading(a) * 10.0;
            (target - Vec2::new(20.0, 0.0)).heading().cos()
        };
        let expected = [by_hand(0.785), by_hand(0.0), by_hand(-1.571)];
        let scores: Vec<f64> = paths.iter().map(|p| alignment_score(&actor, p, &params)).collect();
        for (s, e) in scores.iter().zip(expected) {
            assert!((s - e).abs() < 1e-9, "{s} vs {e}");
        }
        let m = mixture_baseline(&actor, &paths, 3, &params).unwrap();
        assert_eq!(m.modes.len(), 3);
        assert!(m.modes[0].p > m.modes[1].p && m.modes[1].p > m.modes[2].p);
        // the straight branch dominates
        assert!(m.modes[0].waypoints.last().unwrap().mu.y.abs() < 1e-9);
        m.validate().unwrap();
    }

    #[test]
    fn no_paths_falls_back_to_ctrv() {
        let actor = KinematicState { pose: Pose2::new(Vec2::ZERO, 0.0), speed: 5.0, yaw_rate: 0.0 };
        let m = mixture_baseline(&actor, &[], 3, &MixtureParams::default()).unwrap();
        assert_eq!(m.modes.len(), 1);
        assert!(mixture_baseline(&actor, &[], 0, &MixtureParams::default()).is_err());
    }

    #[test]
    fn json_shape() {
        let m = TrajectoryMixture {
            modes: vec![Mode { p: 1.0, waypoints: vec![Waypoint { t: 0.5, mu: Vec2::new(1.0, 2.0), sigma: [[1.0, 0.1], [0.1, 2.0]] }] }],
        };
        let v: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(v["modes"][0]["waypoints"][0]["mu"], serde_json::json!([1.0, 2.0]));
        assert_eq!(v["modes"][0]["waypoints"][0]["sigma"][1][0], serde_json::json!(0.1));
        assert_eq!(TrajectoryMixture::from_json(&m.to_json()).unwrap(), m);
    }

    proptest! {
        #[test]
        fn mixture_outputs_are_valid(speed in 0.0..20.0f64, heading in -3.0..3.0f64, k in 1usize..4) {
            let g = fan(&[0.5, 0.0, -0.5]);
            let pos = Vec2::new(5.0, 0.3);
            let actor = KinematicState { pose: Pose2::new(pos, heading), speed, yaw_rate: 0.0 };
            let paths = g.roll_out_paths(pos, 2.0, 192.0).unwrap();
            let m = mixture_baseline(&actor, &paths, k, &MixtureParams::default()).unwrap();
            prop_assert!(m.validate().is_ok());
            prop_assert_eq!(m.modes.len(), k.min(3));
        }

        #[test]
        fn zero_noise_linear_mean_is_exact(x in -5.0..5.0f64, y in -5.0..5.0f64, h in -3.0..3.0f64, v in 0.0..20.0f64) {
            // with no heading or yaw-rate uncertainty, CTRV at zero yaw rate is linear in (x, y, v)
            let mut init = quiet(Pose2::new(Vec2::new(x, y), h), v, 0.0);
            init.covariance[(0, 0)] = 0.25;
            init.covariance[(1, 1)] = 0.09;
            init.covariance[(3, 3)] = 1.0;
            init.covariance[(0, 3)] = 0.1;
            init.covariance[(3, 0)] = 0.1;
            let (states, _) = ukf_states(&init, 0.5, 9.0, &UkfParams::default()).unwrap();
            for (k, s) in states.iter().enumerate() {
                let t = (k + 1) as f64 * 0.5;
                let want = Vec2::new(x, y) + Vec2::from_heading(h) * (v * t);
                prop_assert!((s.mean[0] - want.x).abs() <= 1e-12, "x err {:e}", (s.mean[0] - want.x).abs());
                prop_assert!((s.mean[1] - want.y).abs() <= 1e-12, "y err {:e}", (s.mean[1] - want.y).abs());
            }
        }
    }
}
