//! Simplified quadrotor model and its flat parameterization.
//!
//! Flat output is (x, y, z, psi). Thrust is `u1 = m (d2z + g)`, the tilt
//! references are `theta = d2x/(d2z + g)` and `phi = -d2y/(d2z + g)`, and
//! the torque references come from differentiating the tilt references
//! twice, expanded with the quotient rule so that only closed-form Bezier
//! and sigmoid derivatives appear (no numeric differentiation).

use alloc::string::String;
use alloc::vec::Vec;

use crate::bezier::{BezierCurve, BezierError};
use crate::coeff::rat_from_f64;
use crate::flat::sigmoid::{b2, Sigmoid, SigmoidError};
use crate::sympoly::PolyExpr;

/// Quadrotor physical parameters and input/state limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadParams {
    /// Mass m (kg).
    pub mass: f64,
    /// Gravity g (m/s^2).
    pub gravity: f64,
    /// Moments of inertia (kg m^2).
    pub inertia_x: f64,
    pub inertia_y: f64,
    pub inertia_z: f64,
    /// Thrust limit U1max (N).
    pub thrust_max: f64,
    /// Tilt limits (rad).
    pub theta_max: f64,
    pub phi_max: f64,
    /// Torque limits (N m).
    pub torque_x_max: f64,
    pub torque_y_max: f64,
    pub torque_z_max: f64,
}

impl Default for QuadParams {
    fn default() -> Self {
        let mass = 0.53;
        let gravity = 9.8;
        Self {
            mass,
            gravity,
            inertia_x: 6.22e-3,
            inertia_y: 6.22e-3,
            inertia_z: 1.12e-2,
            // maximum ascent acceleration of 4g
            thrust_max: 4.0 * mass * gravity,
            theta_max: 0.25,
            phi_max: 0.25,
            torque_x_max: 0.3,
            torque_y_max: 0.3,
            torque_z_max: 0.5,
        }
    }
}

/// Errors from quadrotor reference generation.
#[derive(Debug, Clone, PartialEq)]
pub enum QuadError {
    /// Thrust can reach zero: `b2 gamma^2 |C| >= g`.
    ThrustSingularity { bound: f64, gravity: f64 },
    /// A degree precondition failed.
    Degree(BezierError),
    Sigmoid(SigmoidError),
    /// Parameter validation failure with field name.
    BadParam(String),
}

impl core::fmt::Display for QuadError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            QuadError::ThrustSingularity { bound, gravity } => write!(
                f,
                "thrust singularity: |d2z| bound {bound} reaches gravity {gravity}"
            ),
            QuadError::Degree(e) => write!(f, "{e}"),
            QuadError::Sigmoid(e) => write!(f, "{e}"),
            QuadError::BadParam(name) => write!(f, "invalid quadrotor parameter {name}"),
        }
    }
}

impl From<BezierError> for QuadError {
    fn from(e: BezierError) -> Self {
        QuadError::Degree(e)
    }
}

impl From<SigmoidError> for QuadError {
    fn from(e: SigmoidError) -> Self {
        QuadError::Sigmoid(e)
    }
}

impl QuadParams {
    pub fn validate(&self) -> Result<(), QuadError> {
        let fields = [
            ("mass", self.mass),
            ("gravity", self.gravity),
            ("inertia_x", self.inertia_x),
            ("inertia_y", self.inertia_y),
            ("inertia_z", self.inertia_z),
            ("thrust_max", self.thrust_max),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(QuadError::BadParam(String::from(name)));
            }
        }
        Ok(())
    }

    /// Upper admissible value for `gamma^2 C` from the thrust limits:
    /// `gamma^2 C < min{ (U1max/m - g)/b2, g/b2 }`.
    pub fn gamma_interval_limit(&self) -> f64 {
        let a = (self.thrust_max / self.mass - self.gravity) / b2();
        let b = self.gravity / b2();
        a.min(b)
    }
}

/// Sampled thrust reference with its analytic bounds and per-sample flags.
#[derive(Debug, Clone, PartialEq)]
pub struct ThrustSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Analytic range m(-b2 gamma^2 C + g) ..= m(b2 gamma^2 C + g).
    pub bound_lo: f64,
    pub bound_hi: f64,
    /// Per-sample violation of 0 < u1 <= U1max.
    pub violations: Vec<bool>,
    /// True when already the analytic bound leaves the admissible range.
    pub bound_violated: bool,
}

/// Thrust reference `u1r(t) = m (d2z_r(t) + g)` on a sample grid.
pub fn quad_thrust_curve(
    s: &Sigmoid,
    q: &QuadParams,
    tgrid: &[f64],
) -> Result<ThrustSeries, QuadError> {
    q.validate()?;
    let (zlo, zhi) = s.bounds(2)?;
    let bound_lo = q.mass * (zlo + q.gravity);
    let bound_hi = q.mass * (zhi + q.gravity);
    let mut values = Vec::with_capacity(tgrid.len());
    let mut violations = Vec::with_capacity(tgrid.len());
    for &t in tgrid {
        let u1 = q.mass * (s.eval(t, 2)? + q.gravity);
        violations.push(!(u1 > 0.0 && u1 <= q.thrust_max));
        values.push(u1);
    }
    let bound_violated = bound_lo <= 0.0 || bound_hi > q.thrust_max;
    Ok(ThrustSeries {
        times: tgrid.to_vec(),
        values,
        bound_lo,
        bound_hi,
        violations,
        bound_violated,
    })
}

/// Certified horizontal acceleration window for the tilt limit:
/// any `d2x_r` inside `[Xmin, Xmax]` keeps `|theta_r| <= theta_max` given
/// the sigmoid's `d2z` bounds.
pub fn quad_tilt_bound(s: &Sigmoid, q: &QuadParams) -> Result<(f64, f64), QuadError> {
    q.validate()?;
    let (_, zhi) = s.bounds(2)?;
    if zhi >= q.gravity {
        return Err(QuadError::ThrustSingularity {
            bound: zhi,
            gravity: q.gravity,
        });
    }
    let xmax = (q.gravity - zhi) * q.theta_max;
    let xmin = -(q.gravity + zhi) * q.theta_max;
    Ok((xmin, xmax))
}

/// Sampled tilt references with limit flags.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSeries {
    pub times: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub theta_violations: Vec<bool>,
    pub phi_violations: Vec<bool>,
}

fn check_no_singularity(s: &Sigmoid, q: &QuadParams) -> Result<(), QuadError> {
    let (zlo, _) = s.bounds(2)?;
    if zlo + q.gravity <= 0.0 {
        return Err(QuadError::ThrustSingularity {
            bound: -zlo,
            gravity: q.gravity,
        });
    }
    Ok(())
}

/// Tilt references `theta_r = d2x/(d2z + g)`, `phi_r = -d2y/(d2z + g)`.
pub fn quad_angle_refs(
    x_r: &BezierCurve<f64>,
    y_r: &BezierCurve<f64>,
    s: &Sigmoid,
    q: &QuadParams,
    tgrid: &[f64],
) -> Result<AngleSeries, QuadError> {
    q.validate()?;
    check_no_singularity(s, q)?;
    let ddx = x_r.derivative(2)?;
    let ddy = y_r.derivative(2)?;
    let mut theta = Vec::with_capacity(tgrid.len());
    let mut phi = Vec::with_capacity(tgrid.len());
    let mut tv = Vec::with_capacity(tgrid.len());
    let mut pv = Vec::with_capacity(tgrid.len());
    for &t in tgrid {
        let denom = s.eval(t, 2)? + q.gravity;
        let th = ddx.at_time(t)? / denom;
        let ph = -ddy.at_time(t)? / denom;
        tv.push(libm::fabs(th) > q.theta_max);
        pv.push(libm::fabs(ph) > q.phi_max);
        theta.push(th);
        phi.push(ph);
    }
    Ok(AngleSeries {
        times: tgrid.to_vec(),
        theta,
        phi,
        theta_violations: tv,
        phi_violations: pv,
    })
}

/// Sampled torque references with limit flags.
#[derive(Debug, Clone, PartialEq)]
pub struct TorqueSeries {
    pub times: Vec<f64>,
    pub u2: Vec<f64>,
    pub u3: Vec<f64>,
    pub u4: Vec<f64>,
    pub u2_violations: Vec<bool>,
    pub u3_violations: Vec<bool>,
    pub u4_violations: Vec<bool>,
}

/// Torque references from the quotient-rule expansions of the second
/// derivatives of the tilt references, evaluated from closed-form Bezier
/// and sigmoid derivatives up to order 4.
pub fn quad_torque_refs(
    x_r: &BezierCurve<f64>,
    y_r: &BezierCurve<f64>,
    psi_r: &BezierCurve<f64>,
    s: &Sigmoid,
    q: &QuadParams,
    tgrid: &[f64],
) -> Result<TorqueSeries, QuadError> {
    q.validate()?;
    check_no_singularity(s, q)?;
    for c in [x_r, y_r] {
        if c.degree() < 4 {
            return Err(QuadError::Degree(BezierError::DegreeTooLow {
                degree: c.degree(),
                required: 4,
            }));
        }
    }
    if psi_r.degree() < 2 {
        return Err(QuadError::Degree(BezierError::DegreeTooLow {
            degree: psi_r.degree(),
            required: 2,
        }));
    }
    let dx = [x_r.derivative(2)?, x_r.derivative(3)?, x_r.derivative(4)?];
    let dy = [y_r.derivative(2)?, y_r.derivative(3)?, y_r.derivative(4)?];
    let ddpsi = psi_r.derivative(2)?;
    let mut u2 = Vec::with_capacity(tgrid.len());
    let mut u3 = Vec::with_capacity(tgrid.len());
    let mut u4 = Vec::with_capacity(tgrid.len());
    for &t in tgrid {
        let z2 = s.eval(t, 2)?;
        let z3 = s.eval(t, 3)?;
        let z4 = s.eval(t, 4)?;
        let w = z2 + q.gravity;
        let (x2, x3, x4) = (dx[0].at_time(t)?, dx[1].at_time(t)?, dx[2].at_time(t)?);
        let (y2, y3, y4) = (dy[0].at_time(t)?, dy[1].at_time(t)?, dy[2].at_time(t)?);
        u2.push(q.inertia_x / w * (x4 - 2.0 * (x3 * w - x2 * z3) / (w * w) * z3 - x2 * z4 / w));
        u3.push(q.inertia_y / w * (-y4 + 2.0 * (y3 * w - y2 * z3) / (w * w) * z3 + y2 * z4 / w));
        u4.push(q.inertia_z * ddpsi.at_time(t)?);
    }
    let flag = |vals: &[f64], lim: f64| -> Vec<bool> {
        vals.iter().map(|&v| libm::fabs(v) > lim).collect()
    };
    Ok(TorqueSeries {
        times: tgrid.to_vec(),
        u2_violations: flag(&u2, q.torque_x_max),
        u3_violations: flag(&u3, q.torque_y_max),
        u4_violations: flag(&u4, q.torque_z_max),
        u2,
        u3,
        u4,
    })
}

/// Hover-mode symbolic torque curve `u2r = (Ix/g) x_r^(4)`.
///
/// With slow altitude dynamics the torque reference is linear in the
/// fourth derivative, so its symbolic control points stay linear in the
/// free output control points, ready for the constraint compiler.
pub fn quad_hover_torque_sym(
    x_r: &BezierCurve<PolyExpr>,
    q: &QuadParams,
) -> Result<BezierCurve<PolyExpr>, QuadError> {
    q.validate()?;
    if x_r.degree() < 4 {
        return Err(QuadError::Degree(BezierError::DegreeTooLow {
            degree: x_r.degree(),
            required: 4,
        }));
    }
    let gain = rat_from_f64(q.inertia_x / q.gravity).expect("finite");
    Ok(x_r.derivative(4)?.scale_rat(&gain))
}
