//! Closed-form error bounds and storage capacities.
//!
//! Logarithms are natural. Error bounds above 1 are returned unclamped and
//! flagged as vacuous.

use crate::error::{check_probability, invalid, Result};

/// An upper bound on the one-step retrieval error probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub value: f64,
    /// The bound exceeds 1 and says nothing.
    pub vacuous: bool,
}

impl Bound {
    fn new(value: f64) -> Self {
        Self { value, vacuous: value > 1.0 }
    }
}

fn check_nm(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(invalid(format!("N = {n} and M = {m} must be positive")));
    }
    Ok(())
}

fn check_ln_n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(invalid(format!("N = {n}: capacity needs ln N > 0")));
    }
    Ok((n as f64).ln())
}

/// Level noise rescaled for PNN3: `q b / (q - 1)`.
pub fn b_bar(q: u32, b: f64) -> Result<f64> {
    if q < 2 {
        return Err(invalid("b_bar needs q >= 2"));
    }
    Ok(f64::from(q) * b / f64::from(q - 1))
}

fn pnn3_bbar(q: u32, b: f64) -> Result<f64> {
    check_probability("b", b)?;
    let bb = b_bar(q, b)?;
    if bb >= 1.0 {
        return Err(invalid(format!("b_bar = {bb} >= 1 (q = {q}, b = {b})")));
    }
    Ok(bb)
}

/// `sqrt(N M) exp(-N (1-2a)^2 q^2 (1-b)^2 / (2M))`
pub fn perr_pnn2(n: usize, m: usize, q: u32, a: f64, b: f64) -> Result<Bound> {
    check_nm(n, m)?;
    check_probability("a", a)?;
    check_probability("b", b)?;
    let (nf, mf, qf) = (n as f64, m as f64, f64::from(q));
    let exponent = nf * (1.0 - 2.0 * a).powi(2) * qf * qf * (1.0 - b).powi(2) / (2.0 * mf);
    Ok(Bound::new((nf * mf).sqrt() * (-exponent).exp()))
}

/// `N (1-2a)^2 q^2 (1-b)^2 / (2 ln N)`
pub fn capacity_pnn2(n: usize, q: u32, a: f64, b: f64) -> Result<f64> {
    let ln_n = check_ln_n(n)?;
    check_probability("a", a)?;
    check_probability("b", b)?;
    let qf = f64::from(q);
    Ok(n as f64 * (1.0 - 2.0 * a).powi(2) * qf * qf * (1.0 - b).powi(2) / (2.0 * ln_n))
}

/// Classical Hopfield capacity `N (1-2a)^2 / (2 ln N)`.
pub fn hopfield_capacity(n: usize, a: f64) -> Result<f64> {
    capacity_pnn2(n, 1, a, 0.0)
}

/// `sqrt(N M) exp(-(N / 2M) (q(q-1)/2) (1-b_bar)^2)`
pub fn perr_pnn3(n: usize, m: usize, q: u32, b: f64) -> Result<Bound> {
    check_nm(n, m)?;
    let bb = pnn3_bbar(q, b)?;
    let (nf, mf, qf) = (n as f64, m as f64, f64::from(q));
    let exponent = nf / (2.0 * mf) * (qf * (qf - 1.0) / 2.0) * (1.0 - bb).powi(2);
    Ok(Bound::new((nf * mf).sqrt() * (-exponent).exp()))
}

/// `(N / 2 ln N) (q(q-1)/2) (1-b_bar)^2`
pub fn capacity_pnn3(n: usize, q: u32, b: f64) -> Result<f64> {
    let ln_n = check_ln_n(n)?;
    let bb = pnn3_bbar(q, b)?;
    let qf = f64::from(q);
    Ok(n as f64 / (2.0 * ln_n) * (qf * (qf - 1.0) / 2.0) * (1.0 - bb).powi(2))
}

/// The N-independent exponent `q^2 (1-b)^2 (1-2a)^2 / (2 load)` of the PNN2
/// bound at a fixed load `M / N`. The bound's exponential factor is
/// `exp(-exponent)`.
pub fn load_exponent(q: u32, a: f64, b: f64, load: f64) -> Result<f64> {
    check_probability("a", a)?;
    check_probability("b", b)?;
    if !(load > 0.0) {
        return Err(invalid(format!("load M/N = {load} must be positive")));
    }
    let qf = f64::from(q);
    Ok(qf * qf * (1.0 - b).powi(2) * (1.0 - 2.0 * a).powi(2) / (2.0 * load))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn pnn2_bound_examples() {
        let b = perr_pnn2(200, 400, 16, 0.0, 0.5).unwrap();
        let hand = (80_000f64).sqrt() * (-16f64).exp();
        assert!(rel(b.value, hand) < 1e-12);
        assert!((b.value - 3.18e-5).abs() < 0.01e-5);
        assert!(!b.vacuous);

        let v = perr_pnn2(200, 400, 16, 0.0, 1.0).unwrap();
        assert_eq!(v.value, (80_000f64).sqrt());
        assert!(v.vacuous);

        // q = 1, b = 0: Hopfield form sqrt(NM) exp(-N(1-2a)^2 / 2M)
        let h = perr_pnn2(500, 20, 1, 0.1, 0.0).unwrap();
        let hand = (10_000f64).sqrt() * (-500.0 * 0.64 / 40.0f64).exp();
        assert!(rel(h.value, hand) < 1e-12);
    }

    #[test]
    fn pnn2_capacity_examples() {
        let c1 = capacity_pnn2(1000, 1, 0.0, 0.0).unwrap();
        assert!(rel(c1, 1000.0 / (2.0 * 1000f64.ln())) < 1e-12);
        assert!((c1 - 72.38).abs() < 0.005);
        let c64 = capacity_pnn2(1000, 64, 0.0, 0.0).unwrap();
        assert!(rel(c64, c1 * 4096.0) < 1e-12);
        assert!((c64 - 296_500.0).abs() < 100.0);
        assert_eq!(capacity_pnn2(1000, 8, 0.5, 0.0).unwrap(), 0.0);
        assert!(capacity_pnn2(1, 8, 0.0, 0.0).is_err());
        assert_eq!(hopfield_capacity(1000, 0.0).unwrap(), c1);
    }

    #[test]
    fn pnn3_examples() {
        let c = capacity_pnn3(1000, 2, 0.0).unwrap();
        assert!(rel(c, capacity_pnn2(1000, 1, 0.0, 0.0).unwrap()) < 1e-12);
        for q in [2u32, 16, 256, 4096] {
            let ratio = capacity_pnn3(1000, q, 0.0).unwrap() / capacity_pnn2(1000, q, 0.0, 0.0).unwrap();
            let expected = f64::from(q - 1) / (2.0 * f64::from(q));
            assert!(rel(ratio, expected) < 1e-12);
        }
        // b = (q-1)/q gives b_bar = 1
        assert!(capacity_pnn3(1000, 4, 0.75).is_err());
        assert!(perr_pnn3(1000, 10, 4, 0.75).is_err());
        assert!(capacity_pnn3(1000, 1, 0.0).is_err());

        let p = perr_pnn3(200, 50, 8, 0.35).unwrap();
        let bb = 8.0 * 0.35 / 7.0;
        let hand = (10_000f64).sqrt() * (-(200.0 / 100.0) * 28.0 * (1.0f64 - bb).powi(2)).exp();
        assert!(rel(p.value, hand) < 1e-12);
    }

    #[test]
    fn load_exponent_examples() {
        let e = load_exponent(64, 0.0, 0.9, 5.0).unwrap();
        assert!((e - 4.096).abs() < 1e-12);
        assert!(((-e).exp() - 0.01665).abs() < 1e-4);
        let e = load_exponent(64, 0.0, 0.65, 50.0).unwrap();
        assert!((e - 5.0176).abs() < 1e-12);
        assert!(((-e).exp() - 0.00662).abs() < 1e-4);
        let e = load_exponent(1, 0.3, 0.0, 0.1).unwrap();
        assert!((e - 0.8).abs() < 1e-12);
        assert!(load_exponent(4, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn bound_at_capacity_is_prefactor_over_n() {
        for (n, q, a, b) in [(1000usize, 4u32, 0.1, 0.2), (5000, 16, 0.0, 0.5), (300, 1, 0.2, 0.0)] {
            let cap = capacity_pnn2(n, q, a, b).unwrap();
            // evaluate the bound at a real-valued M
            let nf = n as f64;
            let exponent = nf * (1.0 - 2.0 * a).powi(2) * f64::from(q * q) * (1.0 - b).powi(2) / (2.0 * cap);
            assert!(rel((-exponent).exp(), 1.0 / nf) < 1e-12);
        }
    }

    #[test]
    fn monotone_in_q_and_b() {
        let mut prev = f64::INFINITY;
        for q in 1..20 {
            let v = perr_pnn2(400, 300, q, 0.05, 0.3).unwrap().value;
            assert!(v < prev);
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for i in 0..10 {
            let v = perr_pnn2(400, 300, 8, 0.0, 0.9 - 0.1 * f64::from(i)).unwrap().value;
            assert!(v < prev);
            prev = v;
        }
        for q in [1u32, 3, 10, 64] {
            let r = capacity_pnn2(1000, 2 * q, 0.1, 0.2).unwrap() / capacity_pnn2(1000, q, 0.1, 0.2).unwrap();
            assert!((r - 4.0).abs() < 1e-12);
        }
    }
}
