//! Hebbian vector-neuron networks (PNN2, PNN3 and the Hopfield case `q = 1`).
//!
//! Couplings are never stored. The Hebbian sum factorizes through the
//! per-pattern overlaps `m_mu = sum_j <w_j^mu, x_j>`, so the field at neuron
//! `i` is
//!
//! ```text
//! A_l^(i) = (1/N) sum_mu <e_l, w_i^mu> (m_mu - <w_i^mu, x_i>)
//! ```
//!
//! with `w = x^mu` for PNN2 and `w = x^mu - e/q` for PNN3. The running state
//! is never centered.
//!
//! All arithmetic is done on integers scaled by `N` (PNN2) or `N q^2` (PNN3),
//! which makes argmax ties and energy comparisons exact.

use rand::seq::SliceRandom;

use crate::error::{invalid, Error, Result};
use crate::rng::SeededRng;
use crate::state::{NetworkKind, NeuronState, Pattern};

/// The q amplitudes of a local field in the unit-vector basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldAmplitudes {
    amplitudes: Vec<f64>,
}

impl FieldAmplitudes {
    pub fn new(amplitudes: Vec<f64>) -> Self {
        Self { amplitudes }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateOrder {
    #[default]
    Sequential,
    /// A fresh permutation of the neurons for every sweep, drawn from stream
    /// `sweep` of `seed`.
    RandomPermutation { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetrievalResult {
    pub final_state: Pattern,
    pub converged: bool,
    pub sweeps_used: usize,
    pub updates_changed: usize,
}

/// A trained network: the stored patterns plus a neuron-major copy of them
/// used for field evaluation.
#[derive(Debug, Clone)]
pub struct Memory {
    kind: NetworkKind,
    neurons: usize,
    q: u32,
    patterns: Vec<Pattern>,
    // entry [i * M + mu]
    levels: Vec<u32>,
    signs: Vec<i8>,
}

impl Memory {
    pub fn build(patterns: Vec<Pattern>, kind: NetworkKind, q: u32) -> Result<Self> {
        if patterns.is_empty() {
            return Err(invalid("at least one pattern is required"));
        }
        if q == 0 {
            return Err(invalid("q must be at least 1"));
        }
        if kind == NetworkKind::Pnn3 && q < 2 {
            return Err(invalid("PNN3 requires q >= 2"));
        }
        let neurons = patterns[0].len();
        if neurons == 0 {
            return Err(invalid("patterns must have at least one coordinate"));
        }
        for p in &patterns {
            p.validate(neurons, q, kind)?;
        }
        let m = patterns.len();
        let mut levels = vec![0u32; neurons * m];
        let mut signs = vec![0i8; neurons * m];
        for (mu, p) in patterns.iter().enumerate() {
            for (i, s) in p.iter().enumerate() {
                levels[i * m + mu] = s.level() - 1;
                signs[i * m + mu] = s.sign();
            }
        }
        Ok(Self { kind, neurons, q, patterns, levels, signs })
    }

    pub fn kind(&self) -> NetworkKind {
        self.kind
    }

    /// N
    pub fn neurons(&self) -> usize {
        self.neurons
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// M
    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn check_state(&self, state: &Pattern) -> Result<()> {
        state.validate(self.neurons, self.q, self.kind)
    }

    /// Denominator turning scaled integer fields into amplitudes.
    fn scale(&self) -> i64 {
        let n = self.neurons as i64;
        match self.kind {
            NetworkKind::Pnn2 => n,
            NetworkKind::Pnn3 => n * i64::from(self.q) * i64::from(self.q),
        }
    }

    /// `<w_i^mu, x>` scaled by 1 (PNN2) or q (PNN3).
    #[inline]
    fn contribution(&self, idx: usize, state: NeuronState) -> i64 {
        let same = self.levels[idx] as usize == state.level_index();
        match self.kind {
            NetworkKind::Pnn2 => {
                if same {
                    i64::from(self.signs[idx]) * i64::from(state.sign())
                } else {
                    0
                }
            }
            NetworkKind::Pnn3 => i64::from(self.q) * i64::from(same) - 1,
        }
    }

    fn overlaps(&self, state: &Pattern) -> Vec<i64> {
        let m = self.pattern_count();
        let mut overlaps = vec![0i64; m];
        for (i, &s) in state.states().iter().enumerate() {
            let row = i * m;
            for (mu, o) in overlaps.iter_mut().enumerate() {
                *o += self.contribution(row + mu, s);
            }
        }
        overlaps
    }

    /// Scaled field at neuron `i` given the overlaps of a state whose i-th
    /// coordinate is `current`.
    fn field_into(&self, i: usize, current: NeuronState, overlaps: &[i64], out: &mut [i64]) {
        let m = self.pattern_count();
        let row = i * m;
        out.fill(0);
        match self.kind {
            NetworkKind::Pnn2 => {
                for (mu, &o) in overlaps.iter().enumerate() {
                    let idx = row + mu;
                    let rest = o - self.contribution(idx, current);
                    out[self.levels[idx] as usize] += i64::from(self.signs[idx]) * rest;
                }
            }
            NetworkKind::Pnn3 => {
                let mut total = 0i64;
                for (mu, &o) in overlaps.iter().enumerate() {
                    let idx = row + mu;
                    let rest = o - self.contribution(idx, current);
                    out[self.levels[idx] as usize] += rest;
                    total += rest;
                }
                let q = i64::from(self.q);
                for v in out.iter_mut() {
                    *v = q * *v - total;
                }
            }
        }
    }

    fn to_amplitudes(&self, scaled: &[i64]) -> FieldAmplitudes {
        let scale = self.scale() as f64;
        FieldAmplitudes::new(scaled.iter().map(|&v| v as f64 / scale).collect())
    }

    /// Local field at neuron `i` (0-based) for `state`.
    pub fn local_field(&self, state: &Pattern, i: usize) -> Result<FieldAmplitudes> {
        self.check_state(state)?;
        if i >= self.neurons {
            return Err(Error::IndexOutOfRange { index: i, len: self.neurons });
        }
        let overlaps = self.overlaps(state);
        let mut buf = vec![0i64; self.q as usize];
        self.field_into(i, state[i], &overlaps, &mut buf);
        Ok(self.to_amplitudes(&buf))
    }

    /// One parallel update of every neuron from fields of the input state.
    pub fn synchronous_step(&self, state: &Pattern) -> Result<Pattern> {
        self.check_state(state)?;
        let overlaps = self.overlaps(state);
        let mut buf = vec![0i64; self.q as usize];
        Ok((0..self.neurons)
            .map(|i| {
                self.field_into(i, state[i], &overlaps, &mut buf);
                select_state(self.kind, &buf, state[i])
            })
            .collect())
    }

    pub fn energy(&self, state: &Pattern) -> Result<f64> {
        Ok(Session::new(self, state.clone())?.energy())
    }

    pub fn is_fixed_point(&self, state: &Pattern) -> Result<bool> {
        let mut session = Session::new(self, state.clone())?;
        Ok((0..self.neurons).all(|i| session.proposal(i) == state[i]))
    }

    /// Asynchronous dynamics until a sweep changes nothing or `max_sweeps`
    /// sweeps have run.
    pub fn retrieve(&self, input: &Pattern, max_sweeps: usize, order: UpdateOrder) -> Result<RetrievalResult> {
        self.retrieve_with(input, max_sweeps, order, |_, _| {})
    }

    /// Like [`Memory::retrieve`], calling `on_change(i, new_state)` after
    /// every update that changes a neuron.
    pub fn retrieve_with<F>(
        &self,
        input: &Pattern,
        max_sweeps: usize,
        order: UpdateOrder,
        mut on_change: F,
    ) -> Result<RetrievalResult>
    where
        F: FnMut(usize, NeuronState),
    {
        if max_sweeps == 0 {
            return Err(invalid("max_sweeps must be at least 1"));
        }
        let mut session = Session::new(self, input.clone())?;
        let mut indices: Vec<usize> = (0..self.neurons).collect();
        let mut updates_changed = 0;
        let mut converged = false;
        let mut sweeps_used = 0;
        while sweeps_used < max_sweeps {
            if let UpdateOrder::RandomPermutation { seed } = order {
                let mut rng = SeededRng::new(seed, sweeps_used as u64).rng();
                indices.shuffle(&mut rng);
            }
            sweeps_used += 1;
            let changed = session.sweep(&indices, &mut on_change);
            updates_changed += changed;
            if changed == 0 {
                converged = true;
                break;
            }
        }
        Ok(RetrievalResult { final_state: session.into_state(), converged, sweeps_used, updates_changed })
    }
}

/// A single retrieval run: the current state and its cached overlaps.
///
/// Each update costs O(M + q).
#[derive(Debug, Clone)]
pub struct Session<'m> {
    memory: &'m Memory,
    state: Pattern,
    overlaps: Vec<i64>,
    buf: Vec<i64>,
}

impl<'m> Session<'m> {
    pub fn new(memory: &'m Memory, state: Pattern) -> Result<Self> {
        memory.check_state(&state)?;
        let overlaps = memory.overlaps(&state);
        Ok(Self { memory, state, overlaps, buf: vec![0; memory.q as usize] })
    }

    pub fn state(&self) -> &Pattern {
        &self.state
    }

    pub fn into_state(self) -> Pattern {
        self.state
    }

    /// Panics if `i >= N`.
    pub fn local_field(&mut self, i: usize) -> FieldAmplitudes {
        self.memory.field_into(i, self.state[i], &self.overlaps, &mut self.buf);
        self.memory.to_amplitudes(&self.buf)
    }

    /// The state neuron `i` would take next.
    pub fn proposal(&mut self, i: usize) -> NeuronState {
        self.memory.field_into(i, self.state[i], &self.overlaps, &mut self.buf);
        select_state(self.memory.kind, &self.buf, self.state[i])
    }

    /// Updates neuron `i`; returns the new state if it changed.
    pub fn update(&mut self, i: usize) -> Option<NeuronState> {
        let next = self.proposal(i);
        if next == self.state[i] {
            return None;
        }
        let m = self.memory.pattern_count();
        let old = self.state[i];
        for (mu, o) in self.overlaps.iter_mut().enumerate() {
            let idx = i * m + mu;
            *o += self.memory.contribution(idx, next) - self.memory.contribution(idx, old);
        }
        self.state.set(i, next);
        Some(next)
    }

    /// Updates neurons in the given order; returns how many changed.
    pub fn sweep<F: FnMut(usize, NeuronState)>(&mut self, order: &[usize], on_change: &mut F) -> usize {
        let mut changed = 0;
        for &i in order {
            if let Some(next) = self.update(i) {
                on_change(i, next);
                changed += 1;
            }
        }
        changed
    }

    /// `-(1/2) sum_i <x_i, h_i>`.
    pub fn energy(&self) -> f64 {
        let mem = self.memory;
        let m = mem.pattern_count();
        // sum_i <x_i, h_i> * scale = sum_mu (m_mu^2 - sum_i c_imu^2)
        let mut total: i64 = self.overlaps.iter().map(|o| o * o).sum();
        for (i, &s) in self.state.states().iter().enumerate() {
            for mu in 0..m {
                let c = mem.contribution(i * m + mu, s);
                total -= c * c;
            }
        }
        -(total as f64) / (2.0 * mem.scale() as f64)
    }
}

/// The neuron update rule applied to a field given by its amplitudes.
///
/// PNN2 aligns with the largest-modulus amplitude and takes its sign; PNN3
/// takes the largest signed amplitude. The current level wins ties, then the
/// lowest index. An all-zero field leaves the neuron unchanged.
pub fn neuron_update(kind: NetworkKind, amplitudes: &FieldAmplitudes, current: NeuronState) -> NeuronState {
    select_state(kind, amplitudes.as_slice(), current)
}

fn select_state<T>(kind: NetworkKind, amps: &[T], current: NeuronState) -> NeuronState
where
    T: Copy + PartialOrd + Default + std::ops::Neg<Output = T>,
{
    let zero = T::default();
    let key = |v: T| match kind {
        NetworkKind::Pnn2 if v < zero => -v,
        _ => v,
    };
    if amps.iter().all(|&v| v == zero) {
        return current;
    }
    let best = amps.iter().map(|&v| key(v)).fold(None, |acc: Option<T>, v| match acc {
        Some(b) if b >= v => Some(b),
        _ => Some(v),
    });
    let Some(best) = best else { return current };
    let cur = current.level_index();
    let k = if cur < amps.len() && key(amps[cur]) == best {
        cur
    } else {
        amps.iter().position(|&v| key(v) == best).unwrap_or(cur)
    };
    let level = k as u32 + 1;
    match kind {
        NetworkKind::Pnn3 => NeuronState::unsigned(level),
        NetworkKind::Pnn2 => {
            let a = amps[k];
            let sign = if a > zero {
                1
            } else if a < zero {
                -1
            } else {
                current.sign()
            };
            NeuronState::new(sign, level)
        }
    }
}
