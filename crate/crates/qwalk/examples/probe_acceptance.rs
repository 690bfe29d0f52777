//! Development probe for the acceptance-suite constants.

use num_complex::Complex64;
use qwalk::analysis::*;
use qwalk::classical::*;
use qwalk::coin::Coin;
use qwalk::decoherence::*;
use qwalk::dist::{total_variation, Distribution};
use qwalk::dtqw::{distribution_sequence, CoinAssignment, CoinedWalk};
use qwalk::graph::*;
use std::sync::Arc;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();

    // (a) circle mixing, quantum Cesaro vs classical, eps = 0.25
    let eps = 0.25;
    println!("== circle mixing, eps = {eps}");
    for n in [5usize, 9, 13, 17] {
        let g = Arc::new(LabeledGraph::circle(n).unwrap());
        let walk = CoinedWalk::new(g.clone(), CoinAssignment::Uniform(Coin::hadamard())).unwrap();
        let start = walk
            .initial_state(0, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        let bound = (n as f64) * (n as f64).ln() / (eps * eps * eps);
        let t_max = bound.ceil() as usize + 10;
        let q = empirical_mixing_time(
            cesaro_stream(distribution_sequence(&walk, &start)),
            &Distribution::uniform(n),
            eps,
            t_max,
        )
        .unwrap();
        let m = StochasticMatrix::from_graph(&g).unwrap();
        let c = empirical_mixing_time(
            m.distribution_sequence(&Distribution::point(n, 0).unwrap()),
            &Distribution::uniform(n),
            eps,
            20_000,
        )
        .unwrap();
        println!("  N={n}: quantum={q:?} classical={c:?} bound={bound:.0}");
    }

    // (b) hypercube concurrent hitting with Grover coin
    println!("== hypercube concurrent hitting, threshold 1/2");
    let mut qs = Vec::new();
    for d in 4..=8usize {
        let g = Arc::new(LabeledGraph::hypercube(d).unwrap());
        let walk = CoinedWalk::new(g, CoinAssignment::Uniform(Coin::grover(d).unwrap())).unwrap();
        let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        let coin0: Vec<Complex64> = vec![amp; d];
        let start = walk.initial_state(0, &coin0).unwrap();
        let target = (1usize << d) - 1;
        let t = concurrent_hitting_quantum(&walk, &start, target, 0.5, 20_000).unwrap();
        println!("  d={d}: quantum hit {t:?}");
        if let Some(t) = t {
            qs.push((d as f64, t as f64));
        }
        let chain = reduce_hypercube_chain(d).unwrap();
        let c = concurrent_hitting_chain(
            &chain,
            &Distribution::point(d + 1, 0).unwrap(),
            d,
            0.5,
            200_000,
        )
        .unwrap();
        println!("        classical hit {c:?}");
    }
    if qs.len() >= 2 {
        let (ts, vs): (Vec<f64>, Vec<f64>) = qs.iter().cloned().unzip();
        println!("  quantum fit exponent: {:.3}", loglog_slope(&ts, &vs).unwrap());
    }

    // classical expected hitting ratios (reduced chain)
    print!("  classical expected-hitting ratios:");
    let mut prev = 0.0;
    for d in 1..=20usize {
        let chain = reduce_hypercube_chain(d).unwrap();
        let m = StochasticMatrix::from_chain(&chain).unwrap();
        let h = m.expected_hitting(0, d).unwrap();
        if d > 1 {
            print!(" d{}:{:.3}", d, h / prev);
        }
        prev = h;
    }
    println!();

    // (c) decoherence exponents over T in [50, 150]
    println!("== decoherence exponents (exact channel, coin target)");
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
            target: MeasureTarget::Coin,
            mode: DecoherenceMode::ExactChannel,
        };
        let (run, _) = exact_channel_run(&walk, &start, &spec, 150).unwrap();
        let idx: Vec<usize> = (50..=150).step_by(10).collect();
        let ts: Vec<f64> = idx.iter().map(|&t| t as f64).collect();
        let vs: Vec<f64> = idx.iter().map(|&t| run.variance.values()[t - 1]).collect();
        let expo = loglog_slope(&ts, &vs).unwrap();
        let var100 = run.variance.values()[99];
        println!("  p={p}: exponent={expo:.3} var(100)={var100:.2}");
    }

    // (d) multicoin exponents
    println!("== multicoin");
    for m in [1usize, 2, 3] {
        let run = multicoin_run(m, 200).unwrap();
        let idx: Vec<usize> = (50..=200).step_by(10).collect();
        let ts: Vec<f64> = idx.iter().map(|&t| t as f64).collect();
        let vs: Vec<f64> = idx.iter().map(|&t| run.variance.values()[t - 1]).collect();
        println!("  M={m}: exponent={:.3}", loglog_slope(&ts, &vs).unwrap());
    }

    // (e) glued trees: quantum threshold and classical suppression
    println!("== glued trees");
    for n in 4..=10usize {
        let ts: Vec<f64> = (0..=(10 * n * 20)).map(|k| k as f64 * 0.05).collect();
        let series = qwalk::ctqw::glued_trees_arrival(n, 1.0, &ts).unwrap();
        let best = series
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        println!(
            "  n={n}: max P={:.4} at t={:.2} (need >= {:.4})",
            best.1,
            ts[best.0],
            1.0 / (2.0 * (n as f64).sqrt())
        );
    }
    for n in 1..=10usize {
        let chain = glued_trees_column_chain(n).unwrap();
        let mut p = Distribution::point(2 * n + 1, 0).unwrap();
        let mut max_right: f64 = 0.0;
        for _ in 0..5000 {
            p = evolve_chain(&chain, &p, 1).unwrap();
            max_right = max_right.max(p.get(2 * n));
        }
        let bound = 0.5f64.powi(n as i32);
        let ok = if max_right < bound { "ok" } else { "VIOLATED" };
        println!("  classical n={n}: max P(col 2n)={max_right:.6} vs 2^-n={bound:.6} {ok}");
    }

    // (f) ballistic vs diffusive exponents, T in [50, 400]
    println!("== line walk variance exponents");
    {
        let g = Arc::new(LabeledGraph::line_window(410).unwrap());
        let walk = CoinedWalk::new(g, CoinAssignment::Uniform(Coin::hadamard())).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let mut state = walk
            .initial_state(
                walk.graph().position_vertex(0).unwrap(),
                &[Complex64::new(r, 0.0), Complex64::new(0.0, r)],
            )
            .unwrap();
        let coord = |v: usize| walk.graph().coordinate(v);
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        for t in 1..=400usize {
            state = walk.step(&state).unwrap();
            if t >= 50 && t % 25 == 0 {
                let (_, var) = state.position_distribution().moments(coord).unwrap();
                ts.push(t as f64);
                vs.push(var);
            }
        }
        println!("  quantum exponent: {:.4}", loglog_slope(&ts, &vs).unwrap());
        // support concentration at T=100
        let g = Arc::new(LabeledGraph::line_window(110).unwrap());
        let walk = CoinedWalk::new(g, CoinAssignment::Uniform(Coin::hadamard())).unwrap();
        let start = walk
            .initial_state(
                walk.graph().position_vertex(0).unwrap(),
                &[Complex64::new(r, 0.0), Complex64::new(0.0, r)],
            )
            .unwrap();
        let d100 = walk.evolve(&start, 100).unwrap().position_distribution();
        let lim = 100.0 / 2f64.sqrt() + 3.0;
        let inside: f64 = (0..walk.graph().vertex_count())
            .filter(|&v| walk.graph().coordinate(v).abs() <= lim)
            .map(|v| d100.get(v))
            .sum();
        println!("  mass inside [-T/sqrt2-3, T/sqrt2+3] at T=100: {inside:.4}");
    }

    // (g) continuous-time hypercube Cesaro non-mixing, d=4
    println!("== CT hypercube Cesaro TV floor");
    {
        let g = LabeledGraph::hypercube(4).unwrap();
        let h = qwalk::ctqw::Generator::from_graph(&g, 1.0).unwrap();
        let spectral = h.spectral().unwrap();
        let mut psi0 = vec![Complex64::new(0.0, 0.0); 16];
        psi0[0] = Complex64::new(1.0, 0.0);
        let uniform = Distribution::uniform(16);
        let mut avg = vec![0.0; 16];
        let mut count = 0.0;
        let mut min_tv = f64::INFINITY;
        let dt = 0.25;
        let mut t = dt;
        while t <= 10_000.0 {
            let psi = spectral.evolve_quantum(&psi0, t);
            count += 1.0;
            for (slot, a) in avg.iter_mut().zip(psi.iter()) {
                *slot += (a.norm_sqr() - *slot) / count;
            }
            if count as usize % 40 == 0 && t > 50.0 {
                let c = Distribution::from_values(avg.clone()).unwrap();
                let tv = total_variation(&c, &uniform).unwrap();
                min_tv = min_tv.min(tv);
            }
            t += dt;
        }
        println!("  min TV(cesaro, uniform) over t in [50, 1e4]: {min_tv:.4}");
    }

    // (h) 2-SAT flips
    println!("== 2-SAT median flips, n = 50");
    {
        use rand::SeedableRng;
        let mut flips = Vec::new();
        for seed in 0..60u64 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let (f, _) = random_satisfiable_2sat(50, 100, &mut rng);
            let run = two_sat_walk(&f, &mut rng, 2_000_000);
            assert!(run.assignment.is_some());
            flips.push(run.flips);
        }
        flips.sort_unstable();
        println!(
            "  median={} max={} (n^2 = 2500)",
            flips[flips.len() / 2],
            flips.last().unwrap()
        );
    }

    println!("total probe time: {:.1?}", t0.elapsed());
}
