//! Generic Bezier/Bernstein algebra over a coefficient ring.
//!
//! Curves are immutable values; every operator returns a fresh curve. The
//! parameter is the unit interval, physical time being `t = T*tau` for the
//! stored horizon `T`. Differentiation applies the `1/T` time scaling
//! internally, so a curve always represents a function of physical time
//! sampled through `tau`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::coeff::{binomial, binomial_ratio, rat_from_f64, rat_int, Coeff, Rat, MAX_DEGREE};
use num_traits::{One, Zero};

/// Errors from curve construction and operators.
#[derive(Debug, Clone, PartialEq)]
pub enum BezierError {
    /// No control points were supplied.
    Empty,
    /// Horizon must be strictly positive and finite.
    BadHorizon(f64),
    /// Operand horizons differ.
    HorizonMismatch(f64, f64),
    /// Evaluation parameter outside [0, 1].
    TauOutOfRange(f64),
    /// Requested derivative order exceeds the degree.
    DerivativeOrder { degree: usize, order: usize },
    /// Resulting degree would exceed the supported cap.
    DegreeCap(usize),
    /// Operation needs a higher-degree curve.
    DegreeTooLow { degree: usize, required: usize },
}

impl core::fmt::Display for BezierError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BezierError::Empty => write!(f, "curve needs at least one control point"),
            BezierError::BadHorizon(t) => write!(f, "horizon must be positive, got {t}"),
            BezierError::HorizonMismatch(a, b) => {
                write!(f, "operand horizons differ: {a} vs {b}")
            }
            BezierError::TauOutOfRange(t) => write!(f, "tau={t} outside [0,1]"),
            BezierError::DerivativeOrder { degree, order } => {
                write!(f, "derivative order {order} exceeds degree {degree}")
            }
            BezierError::DegreeCap(d) => write!(f, "degree {d} exceeds cap {MAX_DEGREE}"),
            BezierError::DegreeTooLow { degree, required } => {
                write!(f, "degree {degree} below required {required}")
            }
        }
    }
}

/// Bernstein basis polynomial B_{j,N}(tau) = C(N,j)(1-tau)^(N-j) tau^j.
pub fn bernstein(j: usize, n: usize, tau: f64) -> f64 {
    if j > n {
        return 0.0;
    }
    let c = binomial(n, j).expect("degree within cap") as f64;
    c * libm::pow(1.0 - tau, (n - j) as f64) * libm::pow(tau, j as f64)
}

/// Exact Bernstein basis value at a rational parameter.
pub fn bernstein_rat(j: usize, n: usize, tau: &Rat) -> Rat {
    if j > n {
        return Rat::zero();
    }
    let c = rat_int(binomial(n, j).expect("degree within cap") as i64);
    let one = Rat::one();
    let omt = &one - tau;
    let mut v = c;
    for _ in 0..(n - j) {
        v *= &omt;
    }
    for _ in 0..j {
        v *= tau;
    }
    v
}

/// Scalar Bezier curve of degree `N = points.len() - 1` over ring `R`,
/// parameterized on [0, 1] with physical horizon `T` seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierCurve<R> {
    points: Vec<R>,
    horizon: f64,
}

impl<R: Coeff> BezierCurve<R> {
    pub fn new(points: Vec<R>, horizon: f64) -> Result<Self, BezierError> {
        if points.is_empty() {
            return Err(BezierError::Empty);
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(BezierError::BadHorizon(horizon));
        }
        if points.len() - 1 > MAX_DEGREE {
            return Err(BezierError::DegreeCap(points.len() - 1));
        }
        Ok(Self { points, horizon })
    }

    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn control_points(&self) -> &[R] {
        &self.points
    }

    pub fn into_control_points(self) -> Vec<R> {
        self.points
    }

    /// De Casteljau evaluation at an exact rational parameter.
    pub fn eval_rat(&self, tau: &Rat) -> Result<R, BezierError> {
        if tau < &Rat::zero() || tau > &Rat::one() {
            return Err(BezierError::TauOutOfRange(crate::coeff::rat_to_f64(tau)));
        }
        let omt = Rat::one() - tau;
        let mut layer: Vec<R> = self.points.clone();
        while layer.len() > 1 {
            let mut next = Vec::with_capacity(layer.len() - 1);
            for i in 0..layer.len() - 1 {
                next.push(layer[i].mul_rat(&omt).add(&layer[i + 1].mul_rat(tau)));
            }
            layer = next;
        }
        Ok(layer.pop().expect("nonempty"))
    }

    /// De Casteljau evaluation at a binary64 parameter (converted exactly).
    pub fn eval(&self, tau: f64) -> Result<R, BezierError> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(BezierError::TauOutOfRange(tau));
        }
        let t = rat_from_f64(tau).ok_or(BezierError::TauOutOfRange(tau))?;
        self.eval_rat(&t)
    }

    /// Direct Bernstein-sum evaluation; the independent route against which
    /// de Casteljau is cross-checked.
    pub fn eval_bernstein_rat(&self, tau: &Rat) -> Result<R, BezierError> {
        if tau < &Rat::zero() || tau > &Rat::one() {
            return Err(BezierError::TauOutOfRange(crate::coeff::rat_to_f64(tau)));
        }
        let n = self.degree();
        let mut acc = R::coeff_zero();
        for (j, c) in self.points.iter().enumerate() {
            acc = acc.add(&c.mul_rat(&bernstein_rat(j, n, tau)));
        }
        Ok(acc)
    }

    /// Degree elevation by `r`, the augmented control polygon. The curve is
    /// unchanged as a function.
    pub fn degree_elevate(&self, r: usize) -> Result<Self, BezierError> {
        if r == 0 {
            return Ok(self.clone());
        }
        let n = self.degree();
        if n + r > MAX_DEGREE {
            return Err(BezierError::DegreeCap(n + r));
        }
        let mut out = Vec::with_capacity(n + r + 1);
        for j in 0..=(n + r) {
            let lo = j.saturating_sub(r);
            let hi = core::cmp::min(n, j);
            let mut acc = R::coeff_zero();
            for i in lo..=hi {
                let w = binomial_ratio(n, i, r, j - i, j).expect("degree within cap");
                acc = acc.add(&self.points[i].mul_rat(&w));
            }
            out.push(acc);
        }
        Self::new(out, self.horizon)
    }

    /// Elevate to an exact target degree (no-op when already there).
    pub fn elevate_to(&self, degree: usize) -> Result<Self, BezierError> {
        if degree < self.degree() {
            return Err(BezierError::DegreeTooLow {
                degree,
                required: self.degree(),
            });
        }
        self.degree_elevate(degree - self.degree())
    }

    fn check_horizon(&self, other: &Self) -> Result<(), BezierError> {
        if self.horizon != other.horizon {
            return Err(BezierError::HorizonMismatch(self.horizon, other.horizon));
        }
        Ok(())
    }

    /// Componentwise sum after silently elevating the lower-degree operand.
    pub fn add(&self, other: &Self) -> Result<Self, BezierError> {
        self.check_horizon(other)?;
        let deg = core::cmp::max(self.degree(), other.degree());
        let a = self.elevate_to(deg)?;
        let b = other.elevate_to(deg)?;
        let pts = a
            .points
            .iter()
            .zip(&b.points)
            .map(|(x, y)| x.add(y))
            .collect();
        Self::new(pts, self.horizon)
    }

    /// Componentwise difference, same contract as [`BezierCurve::add`].
    pub fn sub(&self, other: &Self) -> Result<Self, BezierError> {
        self.check_horizon(other)?;
        let deg = core::cmp::max(self.degree(), other.degree());
        let a = self.elevate_to(deg)?;
        let b = other.elevate_to(deg)?;
        let pts = a
            .points
            .iter()
            .zip(&b.points)
            .map(|(x, y)| x.sub(y))
            .collect();
        Self::new(pts, self.horizon)
    }

    /// Product curve of degree m+n with control points
    /// p_j = sum_i C(m,i)C(n,j-i)/C(m+n,j) f_i g_{j-i}.
    pub fn mul(&self, other: &Self) -> Result<Self, BezierError> {
        self.check_horizon(other)?;
        let m = self.degree();
        let n = other.degree();
        if m + n > MAX_DEGREE {
            return Err(BezierError::DegreeCap(m + n));
        }
        let mut out = Vec::with_capacity(m + n + 1);
        for j in 0..=(m + n) {
            let lo = j.saturating_sub(n);
            let hi = core::cmp::min(m, j);
            let mut acc = R::coeff_zero();
            for i in lo..=hi {
                let w = binomial_ratio(m, i, n, j - i, j).expect("degree within cap");
                acc = acc.add(&self.points[i].mul(&other.points[j - i]).mul_rat(&w));
            }
            out.push(acc);
        }
        Self::new(out, self.horizon)
    }

    /// Scale every control point by an exact rational constant.
    pub fn scale_rat(&self, k: &Rat) -> Self {
        Self {
            points: self.points.iter().map(|c| c.mul_rat(k)).collect(),
            horizon: self.horizon,
        }
    }

    /// q-th time derivative as a Bezier curve of degree N-q.
    ///
    /// Each differentiation step scales by degree/T, so the result is a
    /// derivative with respect to physical time, not tau.
    pub fn derivative(&self, q: usize) -> Result<Self, BezierError> {
        if q > self.degree() {
            return Err(BezierError::DerivativeOrder {
                degree: self.degree(),
                order: q,
            });
        }
        let inv_t = rat_from_f64(self.horizon)
            .ok_or(BezierError::BadHorizon(self.horizon))?
            .recip();
        let mut pts = self.points.clone();
        for _ in 0..q {
            let n = pts.len() - 1;
            let factor = rat_int(n as i64) * &inv_t;
            let mut next = Vec::with_capacity(n);
            for j in 0..n {
                next.push(pts[j + 1].sub(&pts[j]).mul_rat(&factor));
            }
            pts = next;
        }
        Self::new(pts, self.horizon)
    }

    /// Second differences of the control points, c_{j-1} - 2 c_j + c_{j+1}
    /// for j = 1..N-1.
    pub fn second_differences(&self) -> Result<Vec<R>, BezierError> {
        let n = self.degree();
        if n < 2 {
            return Err(BezierError::DegreeTooLow {
                degree: n,
                required: 2,
            });
        }
        let two = rat_int(2);
        Ok((1..n)
            .map(|j| {
                self.points[j - 1]
                    .add(&self.points[j + 1])
                    .sub(&self.points[j].mul_rat(&two))
            })
            .collect())
    }
}

impl BezierCurve<f64> {
    /// Fast float de Casteljau for simulation-rate evaluation.
    pub fn eval_f64(&self, tau: f64) -> Result<f64, BezierError> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(BezierError::TauOutOfRange(tau));
        }
        let mut layer = self.points.clone();
        while layer.len() > 1 {
            for i in 0..layer.len() - 1 {
                layer[i] = layer[i] * (1.0 - tau) + layer[i + 1] * tau;
            }
            layer.pop();
        }
        Ok(layer[0])
    }

    /// Evaluate at physical time `t` in `[0, T]`.
    pub fn at_time(&self, t: f64) -> Result<f64, BezierError> {
        self.eval_f64(t / self.horizon)
    }

    /// Min-max bounding box of the control points; brackets the curve on
    /// [0,1] by the convex-hull property.
    pub fn minmax_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &c in &self.points {
            lo = lo.min(c);
            hi = hi.max(c);
        }
        (lo, hi)
    }
}

impl BezierCurve<Rat> {
    /// Min-max bounds in exact arithmetic.
    pub fn minmax_bounds_rat(&self) -> (Rat, Rat) {
        let mut lo = self.points[0].clone();
        let mut hi = self.points[0].clone();
        for c in &self.points[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        (lo, hi)
    }

    /// Nearest-float copy of a rational curve.
    pub fn to_f64_curve(&self) -> BezierCurve<f64> {
        BezierCurve {
            points: self.points.iter().map(crate::coeff::rat_to_f64).collect(),
            horizon: self.horizon,
        }
    }
}

/// Render a curve for diagnostics: degree, horizon and control points.
pub fn describe<R: core::fmt::Debug>(curve: &BezierCurve<R>) -> String {
    format!(
        "Bezier(N={}, T={}, ctrl={:?})",
        curve.points.len() - 1,
        curve.horizon,
        curve.points
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, rat_int};
    use alloc::vec;

    fn fcurve(pts: &[f64], t: f64) -> BezierCurve<f64> {
        BezierCurve::new(pts.to_vec(), t).unwrap()
    }

    fn rcurve(pts: &[i64], t: f64) -> BezierCurve<Rat> {
        BezierCurve::new(pts.iter().map(|&p| rat_int(p)).collect(), t).unwrap()
    }

    #[test]
    fn linear_interpolation_midpoint() {
        let c = fcurve(&[0.0, 1.0], 1.0);
        assert_eq!(c.eval_f64(0.5).unwrap(), 0.5);
    }

    #[test]
    fn quadratic_midpoint_by_bernstein_sum() {
        // ctrl [0,1,0], tau=0.5: 2*0.5*0.5*1 = 0.5
        let c = fcurve(&[0.0, 1.0, 0.0], 1.0);
        assert_eq!(c.eval_f64(0.5).unwrap(), 0.5);
        let r = rcurve(&[0, 1, 0], 1.0);
        assert_eq!(r.eval_rat(&rat(1, 2)).unwrap(), rat(1, 2));
    }

    #[test]
    fn tangent_property_endpoints() {
        let c = rcurve(&[3, -7, 2, 5], 2.0);
        assert_eq!(c.eval_rat(&Rat::zero()).unwrap(), rat_int(3));
        assert_eq!(c.eval_rat(&Rat::one()).unwrap(), rat_int(5));
    }

    #[test]
    fn tau_domain_checked() {
        let c = fcurve(&[0.0, 1.0], 1.0);
        assert!(matches!(
            c.eval_f64(1.5),
            Err(BezierError::TauOutOfRange(_))
        ));
        assert!(matches!(
            c.eval_f64(-0.1),
            Err(BezierError::TauOutOfRange(_))
        ));
    }

    #[test]
    fn elevate_constant_and_linear() {
        let c = rcurve(&[5, 5], 1.0);
        let e = c.degree_elevate(1).unwrap();
        assert_eq!(e.control_points(), &[rat_int(5), rat_int(5), rat_int(5)]);

        let l = rcurve(&[0, 1], 1.0);
        let e = l.degree_elevate(1).unwrap();
        assert_eq!(e.control_points(), &[rat_int(0), rat(1, 2), rat_int(1)]);
    }

    #[test]
    fn elevation_preserves_function() {
        let c = fcurve(&[0.3, -1.2, 2.5, 0.7], 1.0);
        let e = c.degree_elevate(5).unwrap();
        for k in 0..=100 {
            let tau = k as f64 / 100.0;
            let a = c.eval_f64(tau).unwrap();
            let b = e.eval_f64(tau).unwrap();
            assert!((a - b).abs() <= 1e-12, "tau={tau}: {a} vs {b}");
        }
    }

    #[test]
    fn add_with_mixed_degrees() {
        // [0,1] + [0,0,1] -> elevate [0,1] to [0,1/2,1], add -> [0,1/2,2]
        let a = rcurve(&[0, 1], 1.0);
        let b = rcurve(&[0, 0, 1], 1.0);
        let s = a.add(&b).unwrap();
        assert_eq!(s.control_points(), &[rat_int(0), rat(1, 2), rat_int(2)]);
    }

    #[test]
    fn add_identity() {
        let a = rcurve(&[0, 1], 1.0);
        let z = rcurve(&[0, 0], 1.0);
        assert_eq!(a.add(&z).unwrap(), a);
    }

    #[test]
    fn horizon_mismatch_rejected() {
        let a = rcurve(&[0, 1], 1.0);
        let b = rcurve(&[0, 1], 2.0);
        assert!(matches!(a.add(&b), Err(BezierError::HorizonMismatch(_, _))));
        assert!(matches!(a.mul(&b), Err(BezierError::HorizonMismatch(_, _))));
    }

    #[test]
    fn product_is_t_times_one_minus_t() {
        let f = rcurve(&[1, 0], 1.0);
        let g = rcurve(&[0, 1], 1.0);
        let p = f.mul(&g).unwrap();
        assert_eq!(p.control_points(), &[rat_int(0), rat(1, 2), rat_int(0)]);
    }

    #[test]
    fn product_by_constant_scales() {
        let k = rcurve(&[3, 3], 1.0);
        let g = rcurve(&[1, -2, 4], 1.0);
        let p = k.mul(&g).unwrap();
        // constant x g evaluates as 3*g; check at samples
        for tau in [rat(0, 1), rat(1, 4), rat(1, 2), rat(1, 1)] {
            assert_eq!(
                p.eval_rat(&tau).unwrap(),
                g.eval_rat(&tau).unwrap() * rat_int(3)
            );
        }
    }

    #[test]
    fn degree4_square_first_product_point() {
        // (sum a_i B_{i,4})^2 with a_0 = 0: p_1 = a_0 a_1 = 0
        let a = rcurve(&[0, 2, 5, -1, 3], 1.0);
        let p = a.mul(&a).unwrap();
        assert_eq!(p.degree(), 8);
        assert_eq!(p.control_points()[1], rat_int(0));
    }

    #[test]
    fn derivative_of_linear_is_slope() {
        let c = rcurve(&[0, 1], 1.0);
        let d = c.derivative(1).unwrap();
        assert_eq!(d.control_points(), &[rat_int(1)]);
    }

    #[test]
    fn derivative_degree4_general() {
        let a = rcurve(&[1, 4, -2, 7, 0], 2.0);
        let d = a.derivative(1).unwrap();
        // a_i^(1) = (4/T)(a_{i+1} - a_i), T = 2
        let expect = [rat_int(6), rat_int(-12), rat_int(18), rat_int(-14)];
        assert_eq!(d.control_points(), &expect);
    }

    #[test]
    fn second_derivative_matches_quadrotor_polygon() {
        // degree-8 ctrl {0,0,0,a1,a2,a3,2,2,2}, q=2, T=10 with numeric a's
        let (a1, a2, a3) = (8.0, 12.5, 9.0);
        let c = fcurve(&[0.0, 0.0, 0.0, a1, a2, a3, 2.0, 2.0, 2.0], 10.0);
        let d = c.derivative(2).unwrap();
        let expect = [
            0.0,
            14.0 * a1 / 25.0,
            (14.0 * a2 - 28.0 * a1) / 25.0,
            (14.0 * a1 - 28.0 * a2 + 14.0 * a3) / 25.0,
            (14.0 * a2 - 28.0 * a3 + 28.0) / 25.0,
            (14.0 * a3 - 28.0) / 25.0,
            0.0,
        ];
        assert_eq!(d.degree(), 6);
        for (got, want) in d.control_points().iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn derivative_order_zero_is_identity() {
        let c = rcurve(&[1, 2, 3], 1.5);
        assert_eq!(c.derivative(0).unwrap(), c);
    }

    #[test]
    fn derivative_order_checked() {
        let c = rcurve(&[1, 2], 1.0);
        assert!(matches!(
            c.derivative(2),
            Err(BezierError::DerivativeOrder { .. })
        ));
    }

    #[test]
    fn second_differences_cases() {
        assert_eq!(
            rcurve(&[0, 1, 0], 1.0).second_differences().unwrap(),
            vec![rat_int(-2)]
        );
        assert_eq!(
            rcurve(&[0, 1, 2, 3], 1.0).second_differences().unwrap(),
            vec![rat_int(0), rat_int(0)]
        );
        assert_eq!(
            rcurve(&[0, 1, 4, 9], 1.0).second_differences().unwrap(),
            vec![rat_int(2), rat_int(2)]
        );
        assert!(rcurve(&[0, 1], 1.0).second_differences().is_err());
    }

    #[test]
    fn minmax_bounds_cases() {
        assert_eq!(fcurve(&[0.0, 1.0, 0.0], 1.0).minmax_bounds(), (0.0, 1.0));
        assert_eq!(fcurve(&[4.0, 4.0, 4.0], 1.0).minmax_bounds(), (4.0, 4.0));
        // sigmoid-shaped degree-6 polygon {0,0,0,b/2,b,b,b}
        let b = 25.0;
        let c = fcurve(&[0.0, 0.0, 0.0, b / 2.0, b, b, b], 1.0);
        assert_eq!(c.minmax_bounds(), (0.0, b));
    }

    #[test]
    fn partition_of_unity_exact() {
        for n in 0..=16usize {
            for tau in [rat(0, 1), rat(1, 3), rat(7, 11), rat(1, 1)] {
                let mut sum = Rat::zero();
                for j in 0..=n {
                    sum += bernstein_rat(j, n, &tau);
                }
                assert_eq!(sum, Rat::one(), "N={n}");
            }
        }
    }

    #[test]
    fn invalid_construction() {
        assert!(BezierCurve::<f64>::new(vec![], 1.0).is_err());
        assert!(BezierCurve::new(vec![0.0], 0.0).is_err());
        assert!(BezierCurve::new(vec![0.0], -1.0).is_err());
    }
}
