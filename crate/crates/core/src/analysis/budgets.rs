use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Which guarantee a [`Budget`] instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// NGD on an (ε, κ, x*)-SLQC objective: `T = κ²‖x₁ − x*‖²/ε²`, `η = ε/κ`.
    NgdSlqc,
    /// NGD on a locally β-smooth objective: `T = β‖x₁ − x*‖²/2ε`, `η = √(2ε/β)`.
    NgdSmooth,
    /// SNGD: the NGD budget plus a Hoeffding minibatch size.
    Sngd,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub iterations: u64,
    pub eta: f64,
    /// Minibatch size; 0 for deterministic methods.
    pub minibatch: u64,
    pub provenance: Provenance,
}

/// Ceiling of a nonnegative real bound as a count.
///
/// Values within `1e-9` relative of an integer are rounded to it first, so
/// that bounds which are integers in exact arithmetic (`4·0.01/0.0001`) do not
/// gain one from rounding noise.
pub fn ceil_count(v: f64) -> Result<u64> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(invalid("bound", format!("must be finite and ≥ 0, got {v}")));
    }
    if v >= u64::MAX as f64 {
        return Err(invalid("bound", format!("{v} does not fit in 64 bits")));
    }
    let r = v.round();
    if (v - r).abs() <= 1e-9 * r.max(1.0) {
        Ok(r as u64)
    } else {
        Ok(v.ceil() as u64)
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {v}")))
    }
}

fn nonneg(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and ≥ 0, got {v}")))
    }
}

fn probability(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(invalid("delta", format!("must lie in (0, 1), got {delta}")))
    }
}

/// `T = ⌈κ² dist0² / ε²⌉`, `η = ε/κ`. At least one iteration.
pub fn ngd_budget(eps: f64, kappa: f64, dist0: f64) -> Result<Budget> {
    positive("eps", eps)?;
    positive("kappa", kappa)?;
    nonneg("dist0", dist0)?;
    Ok(Budget {
        iterations: ceil_count((kappa * dist0 / eps).powi(2))?.max(1),
        eta: eps / kappa,
        minibatch: 0,
        provenance: Provenance::NgdSlqc,
    })
}

/// `T = ⌈β dist0² / (2ε)⌉`, `η = √(2ε/β)`. At least one iteration.
pub fn ngd_smooth_budget(eps: f64, beta: f64, dist0: f64) -> Result<Budget> {
    positive("eps", eps)?;
    positive("beta", beta)?;
    nonneg("dist0", dist0)?;
    Ok(Budget {
        iterations: ceil_count(beta * dist0 * dist0 / (2.0 * eps))?.max(1),
        eta: (2.0 * eps / beta).sqrt(),
        minibatch: 0,
        provenance: Provenance::NgdSmooth,
    })
}

/// Hoeffding minibatch size `⌈M² ln(4T/δ) / (2ε²)⌉`.
pub fn sngd_minibatch_bound(eps: f64, delta: f64, iterations: u64, m_bound: f64) -> Result<u64> {
    positive("eps", eps)?;
    probability(delta)?;
    nonneg("M", m_bound)?;
    if iterations == 0 {
        return Err(invalid("T", "must be ≥ 1"));
    }
    ceil_count(m_bound * m_bound * (4.0 * iterations as f64 / delta).ln() / (2.0 * eps * eps))
}

/// SNGD budget: the NGD iteration count and step, with the Hoeffding
/// minibatch size (at least 1).
pub fn sngd_budget(eps: f64, kappa: f64, dist0: f64, delta: f64, m_bound: f64) -> Result<Budget> {
    let base = ngd_budget(eps, kappa, dist0)?;
    let b = sngd_minibatch_bound(eps, delta, base.iterations, m_bound)?.max(1);
    Ok(Budget {
        minibatch: b,
        provenance: Provenance::Sngd,
        ..base
    })
}

/// Samples that make the empirical GLM error SLQC with probability `1 − δ`:
/// `⌈8 e^{2W} (W + 1)² ln(1/δ) / ε²⌉`.
pub fn glm_sample_bound(eps: f64, delta: f64, w_radius: f64) -> Result<u64> {
    positive("eps", eps)?;
    nonneg("W", w_radius)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(invalid("delta", format!("must lie in (0, 1], got {delta}")));
    }
    let w = w_radius;
    ceil_count(8.0 * (2.0 * w).exp() * (w + 1.0).powi(2) * (1.0 / delta).ln() / (eps * eps))
}

/// Minibatch size for which every one of `T` noisy-GLM minibatches is SLQC
/// with joint probability `1 − δ`: the sample bound at confidence `δ/T`.
pub fn glm_minibatch_b0(eps: f64, delta: f64, iterations: u64, w_radius: f64) -> Result<u64> {
    if iterations == 0 {
        return Err(invalid("T", "must be ≥ 1"));
    }
    glm_sample_bound(eps, delta / iterations as f64, w_radius)
}

/// `(1 − ε)^{0.2/ε}`: lower bound on the chance that a size-`0.2/ε` batch of
/// the lower-bound distribution has all-linear components.
pub fn descent_probability_bound(eps: f64) -> f64 {
    (1.0 - eps).powf(0.2 / eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ngd_examples() {
        let b = ngd_budget(0.1, 1.0, 1.0).unwrap();
        assert_eq!((b.iterations, b.eta), (100, 0.1));
        let b = ngd_budget(0.1, 2f64.exp(), 2.0).unwrap();
        assert_eq!(b.iterations, 21_840);
        assert!((b.eta - 0.1 / 2f64.exp()).abs() < 1e-15);
        assert_eq!(
            ngd_budget(0.1, 2.0, 1.0).unwrap().iterations,
            4 * ngd_budget(0.1, 1.0, 1.0).unwrap().iterations
        );
    }

    #[test]
    fn smooth_examples() {
        let b = ngd_smooth_budget(0.5, 1.0, 1.0).unwrap();
        assert_eq!((b.iterations, b.eta), (1, 1.0));
        let b = ngd_smooth_budget(0.01, 2.0, 3.0).unwrap();
        assert_eq!(b.iterations, 900);
        assert!((b.eta - 0.1).abs() < 1e-15);
        assert_eq!(
            ngd_smooth_budget(1e-4, 2.0, 1.0).unwrap().iterations,
            10_000
        );
    }

    #[test]
    fn minibatch_examples() {
        // ln(4e5)/0.02 = 644.96..., so the ceiling is 645.
        assert_eq!(sngd_minibatch_bound(0.1, 0.1, 10_000, 1.0).unwrap(), 645);
        assert_eq!(sngd_minibatch_bound(0.1, 0.1, 10_000, 0.0).unwrap(), 0);
        let small = sngd_minibatch_bound(0.4, 0.1, 10_000, 1.0).unwrap() as f64;
        let raw = 4e5f64.ln() / (2.0 * 0.16);
        assert_eq!(small, raw.ceil());
    }

    #[test]
    fn glm_sample_examples() {
        assert_eq!(glm_sample_bound(1.0, (-1f64).exp(), 0.0).unwrap(), 8);
        assert_eq!(glm_sample_bound(0.5, 0.1, 2.0).unwrap(), 36_207);
        assert!(
            glm_sample_bound(0.5, 0.1, 3.0).unwrap() > glm_sample_bound(0.5, 0.1, 2.0).unwrap()
        );
        assert!(
            glm_sample_bound(0.6, 0.1, 2.0).unwrap() < glm_sample_bound(0.5, 0.1, 2.0).unwrap()
        );
        assert!(
            glm_sample_bound(0.5, 0.2, 2.0).unwrap() < glm_sample_bound(0.5, 0.1, 2.0).unwrap()
        );
    }

    #[test]
    fn ceiling_tolerates_rounding() {
        assert_eq!(ceil_count(10_000.000000000002).unwrap(), 10_000);
        assert_eq!(ceil_count(10.5).unwrap(), 11);
        assert!(ceil_count(f64::NAN).is_err());
    }

    #[test]
    fn invalid_inputs() {
        assert!(ngd_budget(0.0, 1.0, 1.0).is_err());
        assert!(ngd_smooth_budget(0.1, -1.0, 1.0).is_err());
        assert!(sngd_minibatch_bound(0.1, 1.5, 10, 1.0).is_err());
        assert!(sngd_minibatch_bound(0.1, 0.1, 0, 1.0).is_err());
    }
}
