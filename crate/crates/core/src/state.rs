//! Vector-neuron states and patterns.
//!
//! A neuron state is a signed unit vector `sign * e_level` of `R^q`. Levels
//! are 1-based, so a state is valid for a network with `q` levels when
//! `1 <= level <= q`.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

/// Architecture of a parametrical network.
///
/// The classical Hopfield model is `Pnn2` with `q = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NetworkKind {
    /// Signed vector neurons, `2q` states each.
    Pnn2,
    /// Unsigned vector neurons, `q` states each, with centered Hebbian couplings.
    Pnn3,
}

impl NetworkKind {
    pub fn is_signed(self) -> bool {
        matches!(self, NetworkKind::Pnn2)
    }
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkKind::Pnn2 => f.write_str("pnn2"),
            NetworkKind::Pnn3 => f.write_str("pnn3"),
        }
    }
}

impl std::str::FromStr for NetworkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pnn2" | "hopfield" => Ok(NetworkKind::Pnn2),
            "pnn3" => Ok(NetworkKind::Pnn3),
            other => Err(Error::InvalidParameter(format!("unknown network kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NeuronState {
    sign: i8,
    level: u32,
}

impl NeuronState {
    /// Panics if `sign` is not ±1 or `level` is zero.
    pub fn new(sign: i8, level: u32) -> Self {
        Self::try_new(sign, level).expect("invalid neuron state")
    }

    pub fn try_new(sign: i8, level: u32) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidParameter(format!("sign must be ±1, got {sign}")));
        }
        if level == 0 {
            return Err(Error::InvalidParameter("levels are 1-based".into()));
        }
        Ok(Self { sign, level })
    }

    /// An unsigned (PNN3) state `+e_level`.
    pub fn unsigned(level: u32) -> Self {
        Self::new(1, level)
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    pub fn level(self) -> u32 {
        self.level
    }

    pub fn flipped(self) -> Self {
        Self { sign: -self.sign, level: self.level }
    }

    pub(crate) fn level_index(self) -> usize {
        self.level as usize - 1
    }
}

impl fmt::Display for NeuronState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign > 0 { '+' } else { '-' };
        write!(f, "{s}e{}", self.level)
    }
}

/// A length-`N` sequence of neuron states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    states: Vec<NeuronState>,
}

impl Pattern {
    pub fn new(states: Vec<NeuronState>) -> Self {
        Self { states }
    }

    /// Builds a pattern from parallel sign and level slices.
    pub fn from_parts(signs: &[i8], levels: &[u32]) -> Result<Self> {
        if signs.len() != levels.len() {
            return Err(Error::DimensionMismatch { expected: signs.len(), found: levels.len() });
        }
        signs.iter().zip(levels).map(|(&s, &l)| NeuronState::try_new(s, l)).collect::<Result<Vec<_>>>().map(Self::new)
    }

    /// An unsigned pattern from 1-based levels.
    pub fn from_levels(levels: &[u32]) -> Result<Self> {
        levels.iter().map(|&l| NeuronState::try_new(1, l)).collect::<Result<Vec<_>>>().map(Self::new)
    }

    /// A Hopfield (q = 1) pattern from ±1 spins.
    pub fn from_spins(spins: &[i8]) -> Result<Self> {
        spins.iter().map(|&s| NeuronState::try_new(s, 1)).collect::<Result<Vec<_>>>().map(Self::new)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[NeuronState] {
        &self.states
    }

    pub fn iter(&self) -> impl Iterator<Item = &NeuronState> {
        self.states.iter()
    }

    pub fn set(&mut self, i: usize, state: NeuronState) {
        self.states[i] = state;
    }

    pub fn into_states(self) -> Vec<NeuronState> {
        self.states
    }

    /// The same pattern with every sign flipped.
    pub fn negated(&self) -> Self {
        Self { states: self.states.iter().map(|s| s.flipped()).collect() }
    }

    /// Number of coordinates whose state differs from `other`.
    pub fn hamming(&self, other: &Pattern) -> usize {
        self.states.iter().zip(&other.states).filter(|(a, b)| a != b).count()
    }

    /// Checks length and level range, and signs when `kind` is unsigned.
    pub fn validate(&self, n: usize, q: u32, kind: NetworkKind) -> Result<()> {
        if self.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.len() });
        }
        for (index, s) in self.states.iter().enumerate() {
            if s.level > q {
                return Err(Error::LevelOutOfRange { index, level: s.level, q });
            }
            if !kind.is_signed() && s.sign < 0 {
                return Err(Error::SignNotAllowed { index });
            }
        }
        Ok(())
    }
}

impl Index<usize> for Pattern {
    type Output = NeuronState;

    fn index(&self, i: usize) -> &NeuronState {
        &self.states[i]
    }
}

impl FromIterator<NeuronState> for Pattern {
    fn from_iter<I: IntoIterator<Item = NeuronState>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_states() {
        assert!(NeuronState::try_new(0, 1).is_err());
        assert!(NeuronState::try_new(1, 0).is_err());
        assert!(NeuronState::try_new(-1, 3).is_ok());
    }

    #[test]
    fn validate_checks_levels_and_signs() {
        let p = Pattern::from_parts(&[1, -1], &[1, 3]).unwrap();
        assert_eq!(p.validate(2, 2, NetworkKind::Pnn2), Err(Error::LevelOutOfRange { index: 1, level: 3, q: 2 }));
        assert_eq!(p.validate(2, 3, NetworkKind::Pnn3), Err(Error::SignNotAllowed { index: 1 }));
        assert_eq!(p.validate(3, 3, NetworkKind::Pnn2), Err(Error::DimensionMismatch { expected: 3, found: 2 }));
        assert!(p.validate(2, 3, NetworkKind::Pnn2).is_ok());
    }

    #[test]
    fn negation_and_hamming() {
        let p = Pattern::from_parts(&[1, -1, 1], &[2, 1, 1]).unwrap();
        let n = p.negated();
        assert_eq!(p.hamming(&n), 3);
        assert_eq!(n.negated(), p);
    }
}
