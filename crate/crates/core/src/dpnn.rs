//! Decorrelating PNN: binary patterns stored through a fragment mapping into
//! signed vector neurons.
//!
//! A binary vector of length `N = n (k + 1)` is cut into `n` fragments. The
//! first element of a fragment gives the sign, the remaining `k` elements
//! (read as binary digits, `+1 = 1`, most significant first) give the level
//! minus one. The result is a PNN2 pattern over `q = 2^k` levels. Fragments
//! that differ anywhere in their last `k` elements land on orthogonal unit
//! vectors, which is what removes correlations between stored patterns.

use crate::error::{invalid, Error, Result};
use crate::network::{Memory, RetrievalResult, UpdateOrder};
use crate::state::{NetworkKind, NeuronState, Pattern};
use crate::theory::hopfield_capacity;

/// Largest supported mapping parameter (levels must fit in `u32`).
pub const MAX_K: u32 = 31;

/// Fragment geometry for a binary length and mapping parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MappingParams {
    k: u32,
    fragments: usize,
    len: usize,
}

impl MappingParams {
    pub fn new(len: usize, k: u32) -> Result<Self> {
        if k > MAX_K {
            return Err(invalid(format!("mapping parameter k = {k} exceeds {MAX_K}")));
        }
        let fragment = k as usize + 1;
        if len == 0 || !len.is_multiple_of(fragment) {
            return Err(Error::LengthNotDivisible { len, fragment });
        }
        Ok(Self { k, fragments: len / fragment, len })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// n
    pub fn fragments(&self) -> usize {
        self.fragments
    }

    /// N
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// q = 2^k
    pub fn q(&self) -> u32 {
        1u32 << self.k
    }
}

fn check_spins(y: &[i8]) -> Result<()> {
    match y.iter().position(|&v| v != 1 && v != -1) {
        Some(i) => Err(invalid(format!("binary coordinate {i} is {}, expected ±1", y[i]))),
        None => Ok(()),
    }
}

/// Maps a ±1 vector to its internal image.
pub fn map_binary(y: &[i8], k: u32) -> Result<Pattern> {
    let params = MappingParams::new(y.len(), k)?;
    check_spins(y)?;
    Ok(y.chunks_exact(k as usize + 1)
        .map(|frag| {
            let value = frag[1..].iter().fold(0u32, |acc, &v| (acc << 1) | u32::from(v > 0));
            NeuronState::new(frag[0], value + 1)
        })
        .take(params.fragments())
        .collect())
}

/// Inverse of [`map_binary`].
pub fn unmap_binary(image: &Pattern, k: u32) -> Result<Vec<i8>> {
    if k > MAX_K {
        return Err(invalid(format!("mapping parameter k = {k} exceeds {MAX_K}")));
    }
    let q = 1u64 << k;
    let mut out = Vec::with_capacity(image.len() * (k as usize + 1));
    for (index, s) in image.iter().enumerate() {
        if u64::from(s.level()) > q {
            return Err(Error::LevelOutOfRange { index, level: s.level(), q: q.min(u64::from(u32::MAX)) as u32 });
        }
        out.push(s.sign());
        let value = s.level() - 1;
        for bit in (0..k).rev() {
            out.push(if (value >> bit) & 1 == 1 { 1 } else { -1 });
        }
    }
    Ok(out)
}

/// Which restriction stops the mapping parameter from growing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// At least 100 vector neurons: `k + 1 <= N / 100`.
    FragmentFloor,
    /// At least two undistorted fragments expected: `n (1-a)^(k+1) >= 2`.
    CleanFragments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KCritical {
    pub k: u32,
    pub binding: Constraint,
}

fn fragment_floor_ok(n: usize, fragment: usize) -> bool {
    100 * fragment <= n
}

fn clean_fragments_ok(n: usize, a: f64, fragment: usize) -> bool {
    (n as f64 / fragment as f64) * (1.0 - a).powi(fragment as i32) >= 2.0
}

fn k_search(n: usize, a: f64, divisible_only: bool) -> Result<KCritical> {
    if n == 0 {
        return Err(invalid("N must be positive"));
    }
    if !(0.0..0.5).contains(&a) {
        return Err(invalid(format!("noise a = {a} must lie in [0, 0.5)")));
    }
    let candidates = (1..=n).filter(|f| !divisible_only || n.is_multiple_of(*f));
    let (mut floor_max, mut clean_max, mut both_max) = (0, 0, 0);
    for f in candidates {
        let floor = fragment_floor_ok(n, f);
        let clean = clean_fragments_ok(n, a, f);
        if floor {
            floor_max = f;
        }
        if clean {
            clean_max = f;
        }
        if floor && clean {
            both_max = f;
        }
    }
    if both_max == 0 {
        return Err(Error::NoFeasibleK { n, a });
    }
    let binding = if floor_max <= clean_max { Constraint::FragmentFloor } else { Constraint::CleanFragments };
    Ok(KCritical { k: both_max as u32 - 1, binding })
}

/// Largest usable mapping parameter for binary length `n` and noise `a`,
/// restricted to fragment lengths that divide `n`.
pub fn k_critical(n: usize, a: f64) -> Result<KCritical> {
    k_search(n, a, true)
}

/// Largest mapping parameter allowed by the two restrictions alone, taking
/// the fragment count `N / (k+1)` as a real number. This is the value behind
/// the capacity exponent curves.
pub fn k_critical_continuous(n: usize, a: f64) -> Result<KCritical> {
    k_search(n, a, false)
}

/// Storage capacity estimate for mapping parameter `k`:
///
/// ```text
/// M = N (1-2a)^2 / (2 ln N) * (2(1-a))^(2k) / (k (1 + k / ln N))
/// ```
///
/// The formula is undefined at `k = 0`; there the pipeline is plain Hopfield
/// and the Hopfield capacity is returned.
pub fn dpnn_capacity(n: usize, a: f64, k: u32) -> Result<f64> {
    if k == 0 {
        return hopfield_capacity(n, a);
    }
    let base = hopfield_capacity(n, a)?;
    let ln_n = (n as f64).ln();
    let kf = f64::from(k);
    Ok(base * (2.0 * (1.0 - a)).powf(2.0 * kf) / (kf * (1.0 + kf / ln_n)))
}

/// `R` in `M(k_c) ~ N^R`, with `k_c` from [`k_critical_continuous`].
pub fn capacity_exponent(n: usize, a: f64) -> Result<f64> {
    let kc = k_critical_continuous(n, a)?;
    Ok(dpnn_capacity(n, a, kc.k)?.ln() / (n as f64).ln())
}

/// A PNN2 memory over internal images of binary patterns.
#[derive(Debug, Clone)]
pub struct Dpnn {
    k: u32,
    memory: Memory,
}

impl Dpnn {
    pub fn build(binary_patterns: &[Vec<i8>], k: u32) -> Result<Self> {
        let images = binary_patterns.iter().map(|y| map_binary(y, k)).collect::<Result<Vec<_>>>()?;
        let memory = Memory::build(images, NetworkKind::Pnn2, 1u32 << k)?;
        Ok(Self { k, memory })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn memory(&self) -> &Memory {
        &self.memory
    }

    /// Map, run asynchronous retrieval, map back.
    pub fn retrieve(&self, noisy: &[i8], max_sweeps: usize) -> Result<Vec<i8>> {
        self.retrieve_detailed(noisy, max_sweeps).map(|(bits, _)| bits)
    }

    pub fn retrieve_detailed(&self, noisy: &[i8], max_sweeps: usize) -> Result<(Vec<i8>, RetrievalResult)> {
        let image = map_binary(noisy, self.k)?;
        let result = self.memory.retrieve(&image, max_sweeps, UpdateOrder::Sequential)?;
        let bits = unmap_binary(&result.final_state, self.k)?;
        Ok((bits, result))
    }
}
