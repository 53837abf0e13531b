//! Tanh sigmoid altitude reference with closed-form derivatives and tight
//! derivative bounds.
//!
//! `z_r(t) = C (1 + tanh(gamma (t - t_m))) + H_i` with `C = (H_f - H_i)/2`.
//! Writing `R = tanh(gamma (t - t_m))`, the first four derivatives have the
//! closed forms used below; their extrema over all time depend only on
//! `gamma` and `C` through fixed constants `b_1..b_4`.

use libm::{fabs, tanh};

/// Errors from sigmoid construction and evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum SigmoidError {
    /// H_f == H_i gives a degenerate profile.
    DegenerateAltitudes(f64),
    /// Slope must be strictly positive.
    BadSlope(f64),
    /// Derivative order above 4 has no closed form here.
    OrderTooHigh(usize),
}

impl core::fmt::Display for SigmoidError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SigmoidError::DegenerateAltitudes(h) => {
                write!(f, "initial and final altitudes coincide ({h})")
            }
            SigmoidError::BadSlope(g) => write!(f, "slope must be positive, got {g}"),
            SigmoidError::OrderTooHigh(q) => write!(f, "derivative order {q} > 4"),
        }
    }
}

/// First derivative bound constant: max of 1 - R^2.
pub const B1: f64 = 1.0;

/// Second derivative bound constant 4*sqrt(3)/9.
pub fn b2() -> f64 {
    4.0 * libm::sqrt(3.0) / 9.0
}

/// Third derivative one-sided constant 2/3: for positive C the maximum of
/// z^(3) is (2/3) gamma^3 C, attained where R^2 = 2/3.
pub const B3_LOWER: f64 = 2.0 / 3.0;

/// Third derivative one-sided constant 2: for positive C the minimum of
/// z^(3) is -2 gamma^3 C, attained at the takeoff midpoint R = 0.
pub const B3_UPPER: f64 = 2.0;

/// Fourth derivative bound constant, computed by 1-D maximization of
/// 8 |R (3 R^4 - 5 R^2 + 2)| over R in [0, 1] (the function is odd in R).
/// Known to be about 4.0849.
pub fn b4() -> f64 {
    let g = |r: f64| fabs(8.0 * r * (3.0 * r * r * r * r - 5.0 * r * r + 2.0));
    // coarse scan, then golden-section refinement around the best cell
    let n = 20_000usize;
    let mut best_i = 0usize;
    let mut best = 0.0;
    for i in 0..=n {
        let r = i as f64 / n as f64;
        let v = g(r);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let mut a = (best_i.saturating_sub(1)) as f64 / n as f64;
    let mut b = ((best_i + 1).min(n)) as f64 / n as f64;
    let phi = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..80 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = g(x1);
        }
    }
    g((a + b) / 2.0).max(best)
}

/// Sigmoid altitude profile between two quasi-constant levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sigmoid {
    /// Initial altitude H_i (m).
    pub initial_alt: f64,
    /// Final altitude H_f (m).
    pub final_alt: f64,
    /// Slope parameter gamma (1/s).
    pub slope: f64,
    /// Takeoff time t_m (s).
    pub takeoff_time: f64,
}

impl Sigmoid {
    pub fn new(
        initial_alt: f64,
        final_alt: f64,
        slope: f64,
        takeoff_time: f64,
    ) -> Result<Self, SigmoidError> {
        if final_alt == initial_alt {
            return Err(SigmoidError::DegenerateAltitudes(initial_alt));
        }
        if !(slope > 0.0 && slope.is_finite()) {
            return Err(SigmoidError::BadSlope(slope));
        }
        Ok(Self {
            initial_alt,
            final_alt,
            slope,
            takeoff_time,
        })
    }

    /// Half the altitude change, C = (H_f - H_i)/2.
    pub fn amplitude(&self) -> f64 {
        (self.final_alt - self.initial_alt) / 2.0
    }

    /// z_r and its first four time derivatives in closed form.
    pub fn eval(&self, t: f64, order: usize) -> Result<f64, SigmoidError> {
        let g = self.slope;
        let c = self.amplitude();
        let r = tanh(g * (t - self.takeoff_time));
        let r2 = r * r;
        match order {
            0 => Ok(c * (1.0 + r) + self.initial_alt),
            1 => Ok(g * c * (1.0 - r2)),
            2 => Ok(-2.0 * g * g * c * r * (1.0 - r2)),
            3 => Ok(-2.0 * g * g * g * c * (1.0 - r2) * (1.0 - 3.0 * r2)),
            4 => Ok(8.0 * g * g * g * g * c * r * (3.0 * r2 * r2 - 5.0 * r2 + 2.0)),
            q => Err(SigmoidError::OrderTooHigh(q)),
        }
    }

    /// Tight global bounds on z_r and its derivatives.
    pub fn bounds(&self, order: usize) -> Result<(f64, f64), SigmoidError> {
        let g = self.slope;
        let c = self.amplitude();
        match order {
            0 => Ok(sorted(self.initial_alt, self.final_alt)),
            1 => Ok(sorted(0.0, B1 * g * c)),
            2 => {
                let m = fabs(b2() * g * g * c);
                Ok((-m, m))
            }
            3 => {
                let k = g * g * g * c;
                Ok(sorted(-B3_UPPER * k, B3_LOWER * k))
            }
            4 => {
                let m = fabs(b4() * g * g * g * g * c);
                Ok((-m, m))
            }
            q => Err(SigmoidError::OrderTooHigh(q)),
        }
    }
}

fn sorted(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
