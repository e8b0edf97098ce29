//! Browser demo: three interactive operations over the `pnn` crate.
//!
//! Results cross the boundary as flat numeric arrays; `www/index.html`
//! draws them on canvases.

use wasm_bindgen::prelude::*;

use pnn::dpnn::{capacity_exponent, k_critical};
use pnn::patterns::{apply_qnary_noise, random_qnary_patterns, NoiseSpec};
use pnn::theory::perr_pnn2;
use pnn::{Memory, NetworkKind, Pattern, SeededRng, UpdateOrder};

/// Values of q shown by [`error_vs_q`].
pub const Q_GRID: [u32; 8] = [1, 2, 3, 4, 6, 8, 12, 16];

fn js(e: pnn::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn signed_levels(p: &Pattern) -> impl Iterator<Item = i32> + '_ {
    p.iter().map(|s| i32::from(s.sign()) * s.level() as i32)
}

/// Stores `m` random PNN2 patterns on a `side x side` grid, distorts the
/// first one and retrieves it.
///
/// Returns `3 N + 3` values: the target, the noisy input and the retrieved
/// state as signed levels (`sign * level`), then the sweeps used and the
/// Hamming distances of input and output from the target.
#[wasm_bindgen]
pub fn retrieval_demo(side: usize, q: u32, m: usize, a: f64, b: f64, seed: u32) -> Result<Vec<i32>, JsError> {
    retrieval(side, q, m, a, b, u64::from(seed)).map_err(js)
}

pub fn retrieval(side: usize, q: u32, m: usize, a: f64, b: f64, seed: u64) -> pnn::Result<Vec<i32>> {
    let n = side * side;
    let mut rng = SeededRng::new(seed, 0).rng();
    let pats = random_qnary_patterns(m, n, q, NetworkKind::Pnn2, &mut rng)?;
    let target = pats[0].clone();
    let noisy = apply_qnary_noise(&target, NoiseSpec::new(a, b)?, q, &mut rng);
    let mem = Memory::build(pats, NetworkKind::Pnn2, q)?;
    let r = mem.retrieve(&noisy, 50, UpdateOrder::Sequential)?;

    let mut out: Vec<i32> = signed_levels(&target).collect();
    out.extend(signed_levels(&noisy));
    out.extend(signed_levels(&r.final_state));
    out.push(r.sweeps_used as i32);
    out.push(noisy.hamming(&target) as i32);
    out.push(r.final_state.hamming(&target) as i32);
    Ok(out)
}

/// Monte Carlo pattern-error rate against the one-step bound for every q in
/// [`Q_GRID`]. Returns triples `(q, simulated error, bound clamped to 1)`.
#[wasm_bindgen]
pub fn error_vs_q(n: usize, m: usize, b: f64, trials: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    error_curve(n, m, b, trials, u64::from(seed)).map_err(js)
}

pub fn error_curve(n: usize, m: usize, b: f64, trials: usize, seed: u64) -> pnn::Result<Vec<f64>> {
    let noise = NoiseSpec::new(0.0, b)?;
    let mut out = Vec::with_capacity(3 * Q_GRID.len());
    for (point, &q) in Q_GRID.iter().enumerate() {
        let mut failures = 0;
        for t in 0..trials {
            let mut rng = SeededRng::new(seed, (point as u64) << 32 | t as u64).rng();
            let pats = random_qnary_patterns(m, n, q, NetworkKind::Pnn2, &mut rng)?;
            let target = pats[0].clone();
            let noisy = apply_qnary_noise(&target, noise, q, &mut rng);
            let mem = Memory::build(pats, NetworkKind::Pnn2, q)?;
            if mem.retrieve(&noisy, 50, UpdateOrder::Sequential)?.final_state != target {
                failures += 1;
            }
        }
        let bound = perr_pnn2(n, m, q, 0.0, b)?.value.min(1.0);
        out.extend([f64::from(q), failures as f64 / trials.max(1) as f64, bound]);
    }
    Ok(out)
}

/// Critical mapping parameter and capacity exponent over `a` in
/// `[0, 0.45]`. Returns triples `(a, k_c, R)`; NaN marks infeasible points.
#[wasm_bindgen]
pub fn kc_curves(n: usize, steps: usize) -> Vec<f64> {
    let steps = steps.max(2);
    let mut out = Vec::with_capacity(3 * steps);
    for s in 0..steps {
        let a = 0.45 * s as f64 / (steps - 1) as f64;
        let kc = k_critical(n, a).map_or(f64::NAN, |k| f64::from(k.k));
        let r = capacity_exponent(n, a).unwrap_or(f64::NAN);
        out.extend([a, kc, r]);
    }
    out
}
