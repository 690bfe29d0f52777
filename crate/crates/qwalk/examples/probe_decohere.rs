use num_complex::Complex64;
use qwalk::analysis::loglog_slope;
use qwalk::coin::Coin;
use qwalk::decoherence::*;
use qwalk::dtqw::{CoinAssignment, CoinedWalk};
use qwalk::graph::LabeledGraph;
use std::sync::Arc;

fn main() {
    for target in [MeasureTarget::Coin, MeasureTarget::Position, MeasureTarget::Both] {
        println!("target {target:?}:");
        for p in [0.0, 0.02, 0.05, 0.1, 0.5, 1.0] {
            let g = Arc::new(LabeledGraph::line_window(160).unwrap());
            let walk = CoinedWalk::new(g, CoinAssignment::Uniform(Coin::hadamard())).unwrap();
            let r = 1.0 / 2f64.sqrt();
            let start = walk
                .initial_state(
                    walk.graph().position_vertex(0).unwrap(),
                    &[Complex64::new(r, 0.0), Complex64::new(0.0, r)],
                )
                .unwrap();
            let spec = DecoherenceSpec {
                p_meas: p,
                target,
                mode: DecoherenceMode::ExactChannel,
            };
            let (run, _) = exact_channel_run(&walk, &start, &spec, 150).unwrap();
            let idx: Vec<usize> = (50..=150).step_by(10).collect();
            let ts: Vec<f64> = idx.iter().map(|&t| t as f64).collect();
            let vs: Vec<f64> = idx.iter().map(|&t| run.variance.values()[t - 1]).collect();
            let expo = loglog_slope(&ts, &vs).unwrap();
            println!("  p={p}: exponent={expo:.3} var(100)={:.2}", run.variance.values()[99]);
        }
    }
}
