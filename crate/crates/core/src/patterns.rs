//! Pattern ensembles and noise channels.
//!
//! Generators take any `rand::Rng`; pass `SeededRng::rng()` to get a
//! reproducible `(seed, stream)` sequence. Draw order is fixed per coordinate
//! so a given stream always produces the same output.

use rand::Rng;

use crate::error::{check_probability, invalid, Result};
use crate::state::{NetworkKind, NeuronState, Pattern};

/// Sign (`a`) and level (`b`) distortion probabilities.
///
/// `b` is the probability that a coordinate's level changes; the new level is
/// uniform over the other `q - 1` levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    a: f64,
    b: f64,
}

impl NoiseSpec {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_probability("a", a)?;
        check_probability("b", b)?;
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// `m` patterns of `n` coordinates, each uniform over `2q` signed states
/// (PNN2) or `q` unsigned states (PNN3).
pub fn random_qnary_patterns<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    q: u32,
    kind: NetworkKind,
    rng: &mut R,
) -> Result<Vec<Pattern>> {
    if m == 0 || n == 0 || q == 0 {
        return Err(invalid(format!("invalid dimensions M={m}, N={n}, q={q}")));
    }
    Ok((0..m)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let sign = if kind.is_signed() && rng.gen::<bool>() { -1 } else { 1 };
                    NeuronState::new(sign, rng.gen_range(1..=q))
                })
                .collect()
        })
        .collect())
}

/// Independent per-coordinate distortion: flip the sign with probability `a`,
/// move the level to a different one with probability `b`.
///
/// With `q = 1` there is no other level and `b` has no effect.
pub fn apply_qnary_noise<R: Rng + ?Sized>(pattern: &Pattern, spec: NoiseSpec, q: u32, rng: &mut R) -> Pattern {
    pattern
        .iter()
        .map(|&s| {
            let flip = rng.gen::<f64>() < spec.a;
            let change = rng.gen::<f64>() < spec.b;
            let mut level = s.level();
            if change && q > 1 {
                // uniform over the q-1 other levels
                let r = rng.gen_range(1..q);
                level = if r >= level { r + 1 } else { r };
            }
            let sign = if flip { -s.sign() } else { s.sign() };
            NeuronState::new(sign, level)
        })
        .collect()
}

/// `m` i.i.d. uniform ±1 vectors of length `n`.
pub fn random_binary_patterns<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Vec<Vec<i8>> {
    (0..m).map(|_| random_spins(n, rng)).collect()
}

fn random_spins<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<i8> {
    (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect()
}

/// Flips each coordinate independently with probability `a`.
pub fn apply_binary_noise<R: Rng + ?Sized>(y: &[i8], a: f64, rng: &mut R) -> Vec<i8> {
    y.iter().map(|&v| if rng.gen::<f64>() < a { -v } else { v }).collect()
}

/// Binary patterns correlated through a shared random template: each
/// coordinate copies the template with probability `c`, otherwise it is a
/// fresh uniform draw. The template is the first thing drawn from `rng`.
pub fn correlated_binary_patterns<R: Rng + ?Sized>(m: usize, n: usize, c: f64, rng: &mut R) -> Result<Vec<Vec<i8>>> {
    if !(0.0..1.0).contains(&c) {
        return Err(invalid(format!("overlap fraction c = {c} must lie in [0, 1)")));
    }
    let template = random_spins(n, rng);
    Ok((0..m)
        .map(|_| {
            template
                .iter()
                .map(|&t| {
                    let copy = rng.gen::<f64>() < c;
                    let fresh = if rng.gen::<bool>() { 1 } else { -1 };
                    if copy {
                        t
                    } else {
                        fresh
                    }
                })
                .collect()
        })
        .collect())
}

/// Fraction of coordinates on which two equal-length vectors agree.
pub fn agreement(x: &[i8], y: &[i8]) -> f64 {
    assert_eq!(x.len(), y.len(), "agreement of vectors with different lengths");
    if x.is_empty() {
        return 1.0;
    }
    x.iter().zip(y).filter(|(a, b)| a == b).count() as f64 / x.len() as f64
}
