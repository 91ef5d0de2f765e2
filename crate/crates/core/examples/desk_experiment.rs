//! Desk-scale comparison: train LaneOccupancyNet on synthetic intersections and
//! lane changes, then score it against the UKF and mixture baselines on held-out
//! scenarios.
//!
//! ```text
//! cargo run --release --example desk_experiment -- [train_scenarios] [test_scenarios] [iterations]
//! ```

use std::time::Instant;

use laneocc::lon::{lon_train, LonConfig};
use laneocc::pipeline::{evaluate_scenarios, summarize, EvalSettings, Method};
use laneocc::simgen::{generate_scenarios, scenario_samples};

fn main() -> anyhow::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let n_train = args.first().copied().unwrap_or(200);
    let n_test = args.get(1).copied().unwrap_or(50);
    let mut cfg = LonConfig::desk();
    if let Some(&it) = args.get(2) {
        cfg.iterations = it;
    }
    let horizon = 9.0;
    let start = Instant::now();

    let train = generate_scenarios(n_train, 1, 20.0)?;
    let test = generate_scenarios(n_test, 2, 20.0)?;
    let mut samples = Vec::new();
    for sc in &train {
        samples.extend(scenario_samples(sc, horizon, &cfg)?);
    }
    println!("{} training samples from {n_train} scenarios ({:.1?})", samples.len(), start.elapsed());

    let t = Instant::now();
    let (model, report) = lon_train(&samples, &cfg, |it, loss| {
        if it % 500 == 0 {
            println!("  iteration {it:5}  loss {loss:.4}");
        }
    })?;
    let tail = &report.losses[report.losses.len().saturating_sub(100)..];
    println!("trained {} iterations, final loss {:.4} ({:.1?})", cfg.iterations, tail.iter().sum::<f64>() / tail.len() as f64, t.elapsed());

    let settings = EvalSettings { horizon, frame_stride: 2, ..Default::default() };
    println!("{:<8} {:>6} {:>10} {:>10} {:>10} {:>8}", "method", "frames", "overall", "positive", "negative", "modes@30");
    for method in [Method::Ukf, Method::Mixture, Method::Lon] {
        let t = Instant::now();
        let results = evaluate_scenarios(method, Some(&model), &test, &settings, &|_, _| Ok(()))?;
        let s = summarize(&results);
        let med = |q: Option<(f64, f64, f64)>| q.map_or(f64::NAN, |q| q.0);
        let ring30 = settings.ring_radii.iter().position(|&r| r == 30.0).unwrap();
        println!(
            "{:<8} {:>6} {:>10.4} {:>10.4} {:>10.4} {:>8.3}   mean positive {:.4} ({:.1?})",
            method.name(),
            s.frames,
            med(s.overall),
            med(s.positive),
            med(s.negative),
            s.mean_modes[ring30],
            s.mean_positive.unwrap_or(f64::NAN),
            t.elapsed()
        );
    }
    println!("total {:.1?}", start.elapsed());
    Ok(())
}
