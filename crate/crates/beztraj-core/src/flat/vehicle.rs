//! Longitudinal vehicle dynamics: `M dVx/dt = u/r - Ca Vx^2`.
//!
//! The model is differentially flat with `Vx` as flat output. The
//! feedforward input is `u_r = r (M dVxr/dt + Ca Vxr^2)`; with `Vxr` a
//! Bezier curve of degree N, `u_r` is a Bezier curve of degree 2N whose
//! control points are polynomials in the control points of `Vxr`.

use crate::bezier::{BezierCurve, BezierError};
use crate::coeff::{rat_from_f64, Coeff};

/// Physical vehicle parameters and the trajectory horizon.
///
/// The defaults satisfy `r*M/T = 1` and `r*Ca = 1`, which makes the
/// symbolic input control points come out with small rational
/// coefficients; override through the config for other vehicles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleParams {
    /// Mass M (kg).
    pub mass: f64,
    /// Mean wheel radius r (m).
    pub wheel_radius: f64,
    /// Aerodynamic coefficient Ca.
    pub aero_coeff: f64,
    /// Trajectory horizon T (s).
    pub horizon: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            mass: 2.5,
            wheel_radius: 0.4,
            aero_coeff: 2.5,
            horizon: 1.0,
        }
    }
}

impl VehicleParams {
    pub fn validate(&self) -> Result<(), BezierError> {
        for v in [self.mass, self.wheel_radius, self.aero_coeff, self.horizon] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(BezierError::BadHorizon(v));
            }
        }
        Ok(())
    }

    /// r*M, evaluated in binary64 then taken as an exact rational.
    fn torque_gain(&self) -> crate::coeff::Rat {
        rat_from_f64(self.wheel_radius * self.mass).expect("finite")
    }

    /// r*Ca, evaluated in binary64 then taken as an exact rational.
    fn drag_gain(&self) -> crate::coeff::Rat {
        rat_from_f64(self.wheel_radius * self.aero_coeff).expect("finite")
    }
}

/// Feedforward input curve `u_r = r M dVxr/dt + r Ca Vxr^2` of degree 2N.
///
/// Three steps: differentiate (degree N-1), elevate to 2N and scale by rM,
/// then add the squared curve scaled by rCa. Works for any coefficient
/// ring, so a symbolic `Vxr` yields the input control points as closed-form
/// polynomials in the output control points.
pub fn vehicle_input_curve<R: Coeff>(
    vxr: &BezierCurve<R>,
    params: &VehicleParams,
) -> Result<BezierCurve<R>, BezierError> {
    params.validate()?;
    let n = vxr.degree();
    if n < 2 {
        return Err(BezierError::DegreeTooLow {
            degree: n,
            required: 2,
        });
    }
    let accel = vxr.derivative(1)?.elevate_to(2 * n)?;
    let drag = vxr.mul(vxr)?;
    accel
        .scale_rat(&params.torque_gain())
        .add(&drag.scale_rat(&params.drag_gain()))
}

/// Closed-loop input `u = M r (dVxr/dt - lambda (Vx - Vxr)) + r Ca Vx^2`.
pub fn vehicle_closed_loop_input(
    vx: f64,
    vxr: f64,
    vxr_dot: f64,
    lambda: f64,
    params: &VehicleParams,
) -> f64 {
    let mr = params.mass * params.wheel_radius;
    mr * (vxr_dot - lambda * (vx - vxr)) + params.wheel_radius * params.aero_coeff * vx * vx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat_int, Rat};
    use alloc::vec::Vec;
    use num_traits::Zero;

    fn rcurve(pts: &[i64], t: f64) -> BezierCurve<Rat> {
        BezierCurve::new(pts.iter().map(|&p| rat_int(p)).collect(), t).unwrap()
    }

    #[test]
    fn zero_reference_gives_zero_input() {
        let vxr = rcurve(&[0, 0, 0], 1.0);
        let u = vehicle_input_curve(&vxr, &VehicleParams::default()).unwrap();
        assert!(u.control_points().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn degree_too_low_rejected() {
        let vxr = rcurve(&[0, 1], 1.0);
        assert!(matches!(
            vehicle_input_curve(&vxr, &VehicleParams::default()),
            Err(BezierError::DegreeTooLow { .. })
        ));
    }

    #[test]
    fn default_gains_are_unit() {
        let p = VehicleParams::default();
        assert_eq!(p.torque_gain(), rat_int(1));
        assert_eq!(p.drag_gain(), rat_int(1));
    }

    #[test]
    fn flatness_residual_vanishes_exactly() {
        // M dVxr - u_r/r + Ca Vxr^2 must be the zero curve; the parameters
        // are dyadic rationals so every product is exact in binary64
        let p = VehicleParams {
            mass: 2.0,
            wheel_radius: 0.5,
            aero_coeff: 3.0,
            horizon: 1.0,
        };
        let vxr = rcurve(&[0, 2, -1, 3, 1], 1.0);
        let u = vehicle_input_curve(&vxr, &p).unwrap();
        let m = rat_from_f64(p.mass).unwrap();
        let ca = rat_from_f64(p.aero_coeff).unwrap();
        let inv_r = rat_from_f64(p.wheel_radius).unwrap().recip();
        let lhs = vxr
            .derivative(1)
            .unwrap()
            .scale_rat(&m)
            .add(&vxr.mul(&vxr).unwrap().scale_rat(&ca))
            .unwrap();
        let residual = lhs.sub(&u.scale_rat(&inv_r)).unwrap();
        assert!(residual.control_points().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn closed_loop_reduces_to_drag_at_zero_error() {
        let p = VehicleParams::default();
        let u = vehicle_closed_loop_input(1.5, 1.5, 0.0, 9.0, &p);
        assert_eq!(u, p.wheel_radius * p.aero_coeff * 1.5 * 1.5);
    }

    #[test]
    fn positive_error_decreases_input() {
        let p = VehicleParams::default();
        let base = vehicle_closed_loop_input(1.0, 1.0, 0.0, 9.0, &p);
        let with_err = vehicle_closed_loop_input(1.0, 0.9, 0.0, 9.0, &p);
        let drop = base - with_err;
        assert!((drop - p.mass * p.wheel_radius * 9.0 * 0.1).abs() < 1e-12);
    }

    #[test]
    fn closed_loop_direct_formula() {
        // lambda=9, unit gains via M=r=Ca=1: vx=1, vxr=1.1, vxr_dot=0
        let p = VehicleParams {
            mass: 1.0,
            wheel_radius: 1.0,
            aero_coeff: 1.0,
            horizon: 1.0,
        };
        let u = vehicle_closed_loop_input(1.0, 1.1, 0.0, 9.0, &p);
        assert!((u - (0.9 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn numeric_point_endpoint_inputs() {
        // ctrl (0, 2, 2.3, 1.2, 1): U_0 = 8 and U_8 = 0.2, both in (0, 10).
        // The interior points U_6 and U_7 are negative, so this reference is
        // not feasible for the (0, 10) input band despite the admissible
        // endpoint inputs.
        let pts: Vec<Rat> = [0.0, 2.0, 2.3, 1.2, 1.0]
            .iter()
            .map(|&x| rat_from_f64(x).unwrap())
            .collect();
        let vxr = BezierCurve::new(pts, 1.0).unwrap();
        let u = vehicle_input_curve(&vxr, &VehicleParams::default()).unwrap();
        let cps = u.control_points();
        assert_eq!(cps.len(), 9);
        assert_eq!(cps[0], rat_int(8));
        let last = crate::coeff::rat_to_f64(&cps[8]);
        assert!((last - 0.2).abs() < 1e-12);
        let u6 = crate::coeff::rat_to_f64(&cps[6]);
        let u7 = crate::coeff::rat_to_f64(&cps[7]);
        assert!((u6 + 0.70571428571428).abs() < 1e-10, "U6 = {u6}");
        assert!((u7 + 0.95).abs() < 1e-12, "U7 = {u7}");
    }
}
