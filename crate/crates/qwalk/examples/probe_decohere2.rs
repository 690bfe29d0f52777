use num_complex::Complex64;
use qwalk::analysis::loglog_slope;
use qwalk::coin::Coin;
use qwalk::decoherence::*;
use qwalk::dtqw::{CoinAssignment, CoinedWalk};
use qwalk::graph::LabeledGraph;
use std::sync::Arc;

fn main() {
    // p = 0.1 coin decoherence out to the position cap: where does the
    // local growth exponent actually cross 1.15?
    let steps = 250usize;
    let g = Arc::new(LabeledGraph::line_window(steps + 4).unwrap());
    let walk = CoinedWalk::new(g, CoinAssignment::Uniform(Coin::hadamard())).unwrap();
    let r = 1.0 / 2f64.sqrt();
    let start = walk
        .initial_state(
            walk.graph().position_vertex(0).unwrap(),
            &[Complex64::new(r, 0.0), Complex64::new(0.0, r)],
        )
        .unwrap();
    for target in [MeasureTarget::Coin, MeasureTarget::Both] {
        let spec = DecoherenceSpec {
            p_meas: 0.1,
            target,
            mode: DecoherenceMode::ExactChannel,
        };
        let (run, _) = exact_channel_run(&walk, &start, &spec, steps).unwrap();
        let v = run.variance.values();
        for (lo, hi) in [(50usize, 150usize), (100, 200), (150, 250)] {
            let idx: Vec<usize> = (lo..=hi).step_by(10).collect();
            let ts: Vec<f64> = idx.iter().map(|&t| t as f64).collect();
            let vs: Vec<f64> = idx.iter().map(|&t| v[t - 1]).collect();
            println!(
                "{target:?} p=0.1 fit [{lo},{hi}]: exponent {:.3}",
                loglog_slope(&ts, &vs).unwrap()
            );
        }
        println!(
            "  var(50)={:.1} var(100)={:.1} var(150)={:.1} var(200)={:.1} var(250)={:.1}",
            v[49], v[99], v[149], v[199], v[249]
        );
        // per-step increments settle to the asymptotic diffusion rate
        println!(
            "  dvar at 100: {:.2}, at 200: {:.2}, at 249: {:.2}",
            v[100] - v[99],
            v[200] - v[199],
            v[248] - v[247]
        );
    }
}
