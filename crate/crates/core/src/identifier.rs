//! The q-nary identifier.
//!
//! Every stored pattern gets `n` extra "enumerated" coordinates holding its
//! index in base `q`. Only enumerated <-> true couplings are kept (centered
//! Hebbian form), so a noisy input is identified by evaluating the `n`
//! enumerated fields once; the pattern itself is then looked up by index.
//!
//! The field at enumerated coordinate `j` is
//!
//! ```text
//! A_l = (1/N) sum_i sum_mu <e_l, y_j^mu - e/q> <x_i^mu - e/q, x_i>
//!     = (1/N) sum_mu (delta(l, d_j^mu) - 1/q) m_mu
//! ```
//!
//! with `m_mu` the centered overlap of the input with pattern `mu`.

use crate::error::{invalid, Error, Result};
use crate::state::{NetworkKind, Pattern};

/// Smallest `n >= 1` with `q^n >= m`.
pub fn digit_count(m: usize, q: u32) -> usize {
    assert!(q >= 2, "digit_count needs q >= 2");
    let q = u128::from(q);
    let target = m.max(1) as u128;
    let (mut n, mut span) = (1usize, q);
    while span < target {
        n += 1;
        span = span.saturating_mul(q);
    }
    n
}

/// `2 + ln N / ln q`: digits needed when `M` sits at the PNN3 capacity.
pub fn asymptotic_digit_estimate(n: usize, q: u32) -> f64 {
    2.0 + (n as f64).ln() / f64::from(q).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternId(pub usize);

/// Result of one identification pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identification {
    pub id: PatternId,
    /// Recovered base-q digits, most significant first.
    pub digits: Vec<u32>,
    /// Number of enumerated-coordinate fields evaluated.
    pub field_evaluations: usize,
    /// Number of true-coordinate updates performed.
    pub true_updates: usize,
}

#[derive(Debug, Clone)]
pub struct IdentifierNet {
    q: u32,
    neurons: usize,
    digits: usize,
    patterns: Vec<Pattern>,
    // 0-based levels, entry [i * M + mu]
    levels: Vec<u32>,
    // entry [mu * n + j]
    codes: Vec<u32>,
}

impl IdentifierNet {
    pub fn build(patterns: Vec<Pattern>, q: u32) -> Result<Self> {
        if patterns.is_empty() {
            return Err(invalid("at least one pattern is required"));
        }
        if q < 2 {
            return Err(invalid("the identifier needs q >= 2"));
        }
        let neurons = patterns[0].len();
        if neurons == 0 {
            return Err(invalid("patterns must have at least one coordinate"));
        }
        for p in &patterns {
            p.validate(neurons, q, NetworkKind::Pnn3)?;
        }
        let m = patterns.len();
        let digits = digit_count(m, q);
        let mut levels = vec![0u32; neurons * m];
        for (mu, p) in patterns.iter().enumerate() {
            for (i, s) in p.iter().enumerate() {
                levels[i * m + mu] = s.level() - 1;
            }
        }
        let mut codes = vec![0u32; m * digits];
        for mu in 0..m {
            let mut rest = mu;
            for j in (0..digits).rev() {
                codes[mu * digits + j] = (rest % q as usize) as u32;
                rest /= q as usize;
            }
        }
        Ok(Self { q, neurons, digits, patterns, levels, codes })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// N, the number of true coordinates.
    pub fn neurons(&self) -> usize {
        self.neurons
    }

    /// n, the number of enumerated coordinates.
    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn pattern(&self, id: PatternId) -> Option<&Pattern> {
        self.patterns.get(id.0)
    }

    /// Base-q code of pattern `mu`, most significant digit first.
    pub fn digit_code(&self, mu: usize) -> &[u32] {
        &self.codes[mu * self.digits..(mu + 1) * self.digits]
    }

    /// Number of nonzero q x q coupling blocks: `n N`.
    pub fn coupling_block_count(&self) -> usize {
        self.digits * self.neurons
    }

    /// The q x q coupling block (row-major) between extended coordinates
    /// `row` and `col`, where indices `0..n` are enumerated and `n..n+N` are
    /// true. Only enumerated-row / true-column blocks are nonzero.
    pub fn coupling_block(&self, row: usize, col: usize) -> Result<Vec<f64>> {
        let total = self.digits + self.neurons;
        for idx in [row, col] {
            if idx >= total {
                return Err(Error::IndexOutOfRange { index: idx, len: total });
            }
        }
        let q = self.q as usize;
        let mut block = vec![0.0; q * q];
        if row >= self.digits || col < self.digits {
            return Ok(block);
        }
        let i = col - self.digits;
        let m = self.pattern_count();
        let center = 1.0 / q as f64;
        for mu in 0..m {
            let d = self.codes[mu * self.digits + row] as usize;
            let l = self.levels[i * m + mu] as usize;
            for r in 0..q {
                let y = f64::from(u8::from(r == d)) - center;
                for c in 0..q {
                    let x = f64::from(u8::from(c == l)) - center;
                    block[r * q + c] += y * x;
                }
            }
        }
        Ok(block)
    }

    pub fn identify(&self, input: &Pattern) -> Result<PatternId> {
        self.identify_traced(input, None).map(|r| r.id)
    }

    /// Identification with an explicit starting value (0-based digits) for
    /// the enumerated coordinates. Enumerated coordinates are not coupled to
    /// each other, so the seed contributes nothing to any field.
    pub fn identify_traced(&self, input: &Pattern, enumerated_seed: Option<&[u32]>) -> Result<Identification> {
        input.validate(self.neurons, self.q, NetworkKind::Pnn3)?;
        if let Some(seed) = enumerated_seed {
            if seed.len() != self.digits {
                return Err(Error::DimensionMismatch { expected: self.digits, found: seed.len() });
            }
            if let Some(&bad) = seed.iter().find(|&&d| d >= self.q) {
                return Err(invalid(format!("enumerated seed digit {bad} >= q = {}", self.q)));
            }
        }
        let m = self.pattern_count();
        let q = i64::from(self.q);

        // q * <x_i^mu - e/q, x_i> summed over true coordinates
        let mut overlaps = vec![-(self.neurons as i64); m];
        for (i, s) in input.iter().enumerate() {
            let li = s.level() - 1;
            let row = &self.levels[i * m..(i + 1) * m];
            for (o, &l) in overlaps.iter_mut().zip(row) {
                if l == li {
                    *o += q;
                }
            }
        }
        let total: i64 = overlaps.iter().sum();

        let mut digits = Vec::with_capacity(self.digits);
        let mut field = vec![0i64; self.q as usize];
        let mut field_evaluations = 0;
        for j in 0..self.digits {
            // scaled by q^2 N: q * sum_{mu: d_j^mu = l} m_mu - sum_mu m_mu
            field.fill(0);
            for (mu, &o) in overlaps.iter().enumerate() {
                field[self.codes[mu * self.digits + j] as usize] += o;
            }
            for v in field.iter_mut() {
                *v = q * *v - total;
            }
            field_evaluations += 1;
            let best = field.iter().copied().max().unwrap_or(0);
            let digit = field.iter().position(|&v| v == best).unwrap_or(0);
            digits.push(digit as u32);
        }

        let index =
            digits.iter().fold(0usize, |acc, &d| acc.saturating_mul(self.q as usize).saturating_add(d as usize));
        if index >= m {
            return Err(Error::UnknownPattern { index, count: m });
        }
        Ok(Identification { id: PatternId(index), digits, field_evaluations, true_updates: 0 })
    }
}
