//! Radial weight functions entering the quotient denominators.

use crate::error::{Error, Result};

/// Weight w(r) multiplying f(r)² in radial integrals (the r^{N-1} volume
/// factor is handled by the quadrature, not stored here).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    /// w = 1.
    PlainMass,
    /// w = r^{-2}.
    ClassicalHardy,
    /// w = r^{-2} (log(a/r))^{-1-q/2} on the unit disk (N = 2 only).
    /// q = 2 gives the (log(a/r))^{-2} weight.
    CriticalHardy { a: f64, q: f64 },
}

impl WeightSpec {
    pub fn validate(&self, dim: u32) -> Result<()> {
        match *self {
            WeightSpec::PlainMass | WeightSpec::ClassicalHardy => Ok(()),
            WeightSpec::CriticalHardy { a, q } => {
                if dim != 2 {
                    return Err(Error::BadParameter(format!(
                        "critical Hardy weight requires N = 2, got N = {dim}"
                    )));
                }
                if !(a >= 1.0) {
                    return Err(Error::BadParameter(format!(
                        "critical Hardy weight requires a >= 1, got a = {a}"
                    )));
                }
                if !(q >= 2.0) {
                    return Err(Error::BadParameter(format!(
                        "critical Hardy weight requires q >= 2, got q = {q}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// w(r) alone.
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            WeightSpec::PlainMass => 1.0,
            WeightSpec::ClassicalHardy => 1.0 / (r * r),
            WeightSpec::CriticalHardy { a, q } => {
                if r <= 0.0 {
                    return f64::INFINITY;
                }
                let t = (a / r).ln();
                if t <= 0.0 {
                    return f64::INFINITY;
                }
                t.powf(-1.0 - q / 2.0) / (r * r)
            }
        }
    }

    /// w(r)·r^{N-1}, computed in combined form so power cancellations
    /// (e.g. r^{-2}·r^{N-1} = r^{N-3}) never produce 0·∞.
    pub fn eval_with_measure(&self, r: f64, dim: u32) -> f64 {
        let n = dim as i32;
        match *self {
            WeightSpec::PlainMass => powi_checked(r, n - 1),
            WeightSpec::ClassicalHardy => powi_checked(r, n - 3),
            WeightSpec::CriticalHardy { a, q } => {
                if r < 0.0 {
                    return f64::NAN;
                }
                if r == 0.0 {
                    // r^{-1} dominates the decaying log factor
                    return f64::INFINITY;
                }
                let t = (a / r).ln();
                if t <= 0.0 {
                    return f64::INFINITY;
                }
                t.powf(-1.0 - q / 2.0) * powi_checked(r, n - 3)
            }
        }
    }
}

fn powi_checked(r: f64, p: i32) -> f64 {
    if p == 0 {
        return 1.0;
    }
    if r == 0.0 && p < 0 {
        return f64::INFINITY;
    }
    r.powi(p)
}
