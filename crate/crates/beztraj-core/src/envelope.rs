//! Control polygons and sharp quantitative envelopes for Bezier curves.
//!
//! The maximal distance between a curve and its control polygon is bounded
//! by `mu_inf(N) * max_j |second difference|` with
//! `mu_inf(N) = floor(N/2)*ceil(N/2)/(2N)`, and the bound is sharp. The
//! envelopes shift the polygon by that distance, pin the endpoints (the
//! curve interpolates them) and clip against the min-max bounding box.

use alloc::vec::Vec;

use crate::bezier::{BezierCurve, BezierError};
use crate::coeff::MAX_DEGREE;

/// Piecewise-linear function through (Greville abscissa, value) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlPolygon {
    vertices: Vec<(f64, f64)>,
}

impl ControlPolygon {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len() - 1;
        let vertices = values
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                let t = if n == 0 { 0.0 } else { j as f64 / n as f64 };
                (t, c)
            })
            .collect();
        Self { vertices }
    }

    pub fn of_curve(curve: &BezierCurve<f64>) -> Self {
        Self::from_values(curve.control_points())
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    /// Hat-function (linear) interpolation between Greville abscissae.
    pub fn eval(&self, tau: f64) -> f64 {
        let v = &self.vertices;
        if tau <= v[0].0 {
            return v[0].1;
        }
        if tau >= v[v.len() - 1].0 {
            return v[v.len() - 1].1;
        }
        for w in v.windows(2) {
            let (t0, c0) = w[0];
            let (t1, c1) = w[1];
            if tau <= t1 {
                let s = (tau - t0) / (t1 - t0);
                return c0 + s * (c1 - c0);
            }
        }
        v[v.len() - 1].1
    }

    /// Extremes of the polygon restricted to a parameter window, exact for
    /// a piecewise-linear function: interior vertices plus interpolated
    /// window endpoints.
    pub fn range_over(&self, window: (f64, f64)) -> (f64, f64) {
        let (t1, t2) = window;
        let mut lo = self.eval(t1).min(self.eval(t2));
        let mut hi = self.eval(t1).max(self.eval(t2));
        for &(t, c) in &self.vertices {
            if t > t1 && t < t2 {
                lo = lo.min(c);
                hi = hi.max(c);
            }
        }
        (lo, hi)
    }
}

/// Lower/upper piecewise-linear bounds with the distance bound that
/// generated them.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub lower: ControlPolygon,
    pub upper: ControlPolygon,
    pub dmax: f64,
}

/// Degree-dependent polygon distance constant mu_inf(N).
pub fn mu_inf(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    ((n / 2) * n.div_ceil(2)) as f64 / (2.0 * n as f64)
}

/// Sharp curve-to-polygon distance bound.
pub fn dmax(curve: &BezierCurve<f64>) -> f64 {
    if curve.degree() < 2 {
        // the polygon coincides with the curve
        return 0.0;
    }
    let d2 = curve.second_differences().expect("degree >= 2");
    let worst = d2.iter().fold(0.0f64, |m, &x| m.max(libm::fabs(x)));
    mu_inf(curve.degree()) * worst
}

/// Envelope with pinned endpoints, clipped against the min-max bounds.
pub fn build_envelope(curve: &BezierCurve<f64>) -> Envelope {
    let d = dmax(curve);
    let pts = curve.control_points();
    let n = pts.len() - 1;
    let (bb_lo, bb_hi) = curve.minmax_bounds();
    let mut lower = Vec::with_capacity(n + 1);
    let mut upper = Vec::with_capacity(n + 1);
    for (j, &c) in pts.iter().enumerate() {
        if j == 0 || j == n {
            lower.push(c);
            upper.push(c);
        } else {
            lower.push((c - d).max(bb_lo));
            upper.push((c + d).min(bb_hi));
        }
    }
    Envelope {
        lower: ControlPolygon::from_values(&lower),
        upper: ControlPolygon::from_values(&upper),
        dmax: d,
    }
}

/// Error from envelope refinement: cap hit before the target gap.
#[derive(Debug, Clone, PartialEq)]
pub struct RefineError {
    pub achieved_gap: f64,
    pub target_gap: f64,
}

impl core::fmt::Display for RefineError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "degree cap reached with gap {} above target {}",
            self.achieved_gap, self.target_gap
        )
    }
}

/// Repeatedly elevate the representation until the distance bound drops to
/// `target_gap` (degree cap 64). The curve itself is unchanged.
pub fn refine_envelope(
    curve: &BezierCurve<f64>,
    target_gap: f64,
) -> Result<Envelope, RefineError> {
    let mut work = curve.clone();
    loop {
        let d = dmax(&work);
        if d <= target_gap {
            return Ok(build_envelope(&work));
        }
        if work.degree() >= MAX_DEGREE {
            return Err(RefineError {
                achieved_gap: d,
                target_gap,
            });
        }
        work = work.degree_elevate(1).map_err(|e| match e {
            BezierError::DegreeCap(_) => RefineError {
                achieved_gap: d,
                target_gap,
            },
            other => panic!("unexpected elevation failure: {other}"),
        })?;
    }
}

/// Axis-aligned obstacle in the (x, y) plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

/// Certified obstacle clearance over a parameter window.
///
/// Returns true only when the box swept by the two envelopes over the
/// window cannot intersect the obstacle; sound, possibly conservative.
pub fn obstacle_clear(
    env_x: &Envelope,
    env_y: &Envelope,
    obstacle: Rect,
    window: (f64, f64),
) -> bool {
    let (lx, _) = env_x.lower.range_over(window);
    let (_, ux) = env_x.upper.range_over(window);
    let (ly, _) = env_y.lower.range_over(window);
    let (_, uy) = env_y.upper.range_over(window);
    // disjointness of [lx,ux]x[ly,uy] from the obstacle
    ux < obstacle.xmin || lx > obstacle.xmax || uy < obstacle.ymin || ly > obstacle.ymax
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fcurve(pts: &[f64], t: f64) -> BezierCurve<f64> {
        BezierCurve::new(pts.to_vec(), t).unwrap()
    }

    #[test]
    fn mu_inf_values() {
        assert_eq!(mu_inf(2), 0.25);
        assert_eq!(mu_inf(4), 0.5);
        assert_eq!(mu_inf(1), 0.0);
    }

    #[test]
    fn dmax_linear_is_zero() {
        assert_eq!(dmax(&fcurve(&[0.0, 1.0], 1.0)), 0.0);
    }

    #[test]
    fn dmax_sharp_for_parabola() {
        // ctrl [0,1,0]: dmax = (1/4)*2 = 0.5, attained at tau = 0.5
        let c = fcurve(&[0.0, 1.0, 0.0], 1.0);
        assert_eq!(dmax(&c), 0.5);
        let polygon = ControlPolygon::of_curve(&c);
        let dev = libm::fabs(c.eval_f64(0.5).unwrap() - polygon.eval(0.5));
        assert!(dev >= 0.5 - 1e-9);
    }

    #[test]
    fn constant_curve_envelope_collapses() {
        let c = fcurve(&[2.0, 2.0, 2.0], 1.0);
        let env = build_envelope(&c);
        assert_eq!(env.lower, env.upper);
        assert_eq!(env.dmax, 0.0);
    }

    #[test]
    fn parabola_envelope_vertices() {
        let c = fcurve(&[0.0, 1.0, 0.0], 1.0);
        let env = build_envelope(&c);
        assert_eq!(env.upper.vertices()[1], (0.5, 1.0));
        assert_eq!(env.lower.vertices()[1], (0.5, 0.5));
        // endpoints pinned
        assert_eq!(env.lower.eval(0.0), 0.0);
        assert_eq!(env.upper.eval(0.0), 0.0);
        let f = c.eval_f64(0.5).unwrap();
        assert!(env.lower.eval(0.5) <= f && f <= env.upper.eval(0.5));
    }

    #[test]
    fn containment_on_degree8_reference() {
        // quadrotor x_r ctrl {0,0,0,8,12.5,9,2,2,2}, T = 10
        let c = fcurve(&[0.0, 0.0, 0.0, 8.0, 12.5, 9.0, 2.0, 2.0, 2.0], 10.0);
        let env = build_envelope(&c);
        for k in 0..=1000 {
            let tau = k as f64 / 1000.0;
            let f = c.eval_f64(tau).unwrap();
            assert!(
                env.lower.eval(tau) <= f + 1e-9 && f <= env.upper.eval(tau) + 1e-9,
                "tau={tau}"
            );
        }
    }

    #[test]
    fn refine_reaches_target() {
        let c = fcurve(&[0.0, 1.0, 0.0], 1.0);
        let env = refine_envelope(&c, 0.2).unwrap();
        assert!(env.dmax <= 0.2);
        // already-linear curve returns immediately
        let l = fcurve(&[0.0, 1.0], 1.0);
        let env = refine_envelope(&l, 1e-30).unwrap();
        assert_eq!(env.dmax, 0.0);
    }

    #[test]
    fn refine_unreachable_gap_errors() {
        let c = fcurve(&[0.0, 1.0, 0.0], 1.0);
        let err = refine_envelope(&c, 1e-9).unwrap_err();
        assert!(err.achieved_gap > err.target_gap);
    }

    #[test]
    fn dmax_nonincreasing_under_elevation() {
        let c = fcurve(&[0.0, 3.0, -1.0, 2.0, 0.5], 1.0);
        let mut prev = dmax(&c);
        let mut work = c;
        for _ in 0..20 {
            work = work.degree_elevate(1).unwrap();
            let d = dmax(&work);
            assert!(d <= prev + 1e-12);
            prev = d;
        }
    }

    #[test]
    fn obstacle_decisions() {
        let cx = fcurve(&[0.0, 1.0, 2.0], 1.0);
        let cy = fcurve(&[0.0, 1.0, 0.0], 1.0);
        let ex = build_envelope(&cx);
        let ey = build_envelope(&cy);
        // obstacle far above everything
        let far = Rect {
            xmin: 10.0,
            xmax: 11.0,
            ymin: 10.0,
            ymax: 11.0,
        };
        assert!(obstacle_clear(&ex, &ey, far, (0.0, 1.0)));
        // obstacle containing the endpoint (x(1), y(1)) = (2, 0)
        let hit = Rect {
            xmin: 1.9,
            xmax: 2.1,
            ymin: -0.1,
            ymax: 0.1,
        };
        assert!(!obstacle_clear(&ex, &ey, hit, (0.5, 1.0)));
    }
}
