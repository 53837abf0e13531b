//! Fixed-step RK4 simulation of the vehicle and quadrotor models under
//! open-loop feedforward or closed-loop tracking, with per-sample
//! constraint auditing.
//!
//! Reference signals are always evaluated analytically (Bezier / sigmoid
//! closed forms), never interpolated from tables, so integration error is
//! the only numerical error in the loop.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bezier::BezierCurve;
use crate::flat::quad::QuadParams;
use crate::flat::sigmoid::Sigmoid;
use crate::flat::vehicle::{vehicle_closed_loop_input, VehicleParams};

/// Errors from simulation setup and integration.
#[derive(Debug, Clone, PartialEq)]
pub enum SimError {
    /// Step or span invalid.
    BadGrid(f64),
    /// Closed-loop error polynomial has a root outside the open left
    /// half-plane; carries the offending monic coefficients (lambda_0..).
    UnstableGains(Vec<f64>),
    /// State left the finite range during integration.
    NumericFailure { step: usize, time: f64 },
    /// Model construction failed.
    Model(String),
}

impl core::fmt::Display for SimError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SimError::BadGrid(h) => write!(f, "invalid grid step {h}"),
            SimError::UnstableGains(l) => write!(f, "unstable gain polynomial {l:?}"),
            SimError::NumericFailure { step, time } => {
                write!(f, "non-finite state at step {step} (t = {time})")
            }
            SimError::Model(m) => write!(f, "{m}"),
        }
    }
}

/// Uniform time grid over [t0, tf].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t0: f64,
    pub tf: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(t0: f64, tf: f64, step: f64) -> Result<Self, SimError> {
        if !(step > 0.0 && step.is_finite() && tf > t0 && t0.is_finite() && tf.is_finite()) {
            return Err(SimError::BadGrid(step));
        }
        Ok(Self { t0, tf, step })
    }

    pub fn steps(&self) -> usize {
        libm::round((self.tf - self.t0) / self.step) as usize
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.step
    }
}

/// Which signal a limit applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    State(usize),
    Input(usize),
}

/// Named double bound on a state or input channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Limit {
    pub name: String,
    pub channel: Channel,
    pub lo: f64,
    pub hi: f64,
}

impl Limit {
    fn value(&self, state: &[f64], input: &[f64]) -> f64 {
        match self.channel {
            Channel::State(i) => state[i],
            Channel::Input(i) => input[i],
        }
    }

    /// How far outside [lo, hi] the value sits (0 when compliant).
    fn excess(&self, v: f64) -> f64 {
        if v < self.lo {
            self.lo - v
        } else if v > self.hi {
            v - self.hi
        } else {
            0.0
        }
    }
}

/// Integration output on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub inputs: Vec<Vec<f64>>,
    /// Names of violated limits at each grid node.
    pub violations: Vec<Vec<String>>,
}

/// Summary of one violated limit over a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationSummary {
    pub name: String,
    pub first_time: f64,
    /// Largest distance outside the admissible interval.
    pub worst_excess: f64,
    /// Total time spent in violation (samples x step).
    pub duration: f64,
}

/// Summarize limit violations; an empty report means compliance.
pub fn audit(traj: &Trajectory, limits: &[Limit]) -> Vec<ViolationSummary> {
    let step = if traj.times.len() > 1 {
        traj.times[1] - traj.times[0]
    } else {
        0.0
    };
    let mut out = Vec::new();
    for lim in limits {
        let mut first_time = f64::NAN;
        let mut worst = 0.0;
        let mut count = 0usize;
        for (k, t) in traj.times.iter().enumerate() {
            let v = lim.value(&traj.states[k], &traj.inputs[k]);
            let e = lim.excess(v);
            if e > 0.0 {
                if count == 0 {
                    first_time = *t;
                }
                count += 1;
                if e > worst {
                    worst = e;
                }
            }
        }
        if count > 0 {
            out.push(ViolationSummary {
                name: lim.name.clone(),
                first_time,
                worst_excess: worst,
                duration: count as f64 * step,
            });
        }
    }
    out
}

/// Classical fixed-step RK4 with a state-feedback input law.
///
/// `dynamics(t, x, u)` returns dx/dt; `input(t, x)` is re-evaluated at
/// every stage. Violations are recorded at grid nodes against `limits`.
pub fn integrate<D, U>(
    dynamics: D,
    input: U,
    x0: Vec<f64>,
    grid: &Grid,
    limits: &[Limit],
) -> Result<Trajectory, SimError>
where
    D: Fn(f64, &[f64], &[f64]) -> Vec<f64>,
    U: Fn(f64, &[f64]) -> Vec<f64>,
{
    let n = grid.steps();
    let h = grid.step;
    let dim = x0.len();
    let mut x = x0;
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut inputs = Vec::with_capacity(n + 1);
    let mut violations = Vec::with_capacity(n + 1);

    let eval = |t: f64, x: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let u = input(t, x);
        let dx = dynamics(t, x, &u);
        (u, dx)
    };

    for k in 0..=n {
        let t = grid.time(k);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(SimError::NumericFailure { step: k, time: t });
        }
        let u_node = input(t, &x);
        let viol: Vec<String> = limits
            .iter()
            .filter(|l| l.excess(l.value(&x, &u_node)) > 0.0)
            .map(|l| l.name.clone())
            .collect();
        times.push(t);
        states.push(x.clone());
        inputs.push(u_node);
        violations.push(viol);
        if k == n {
            break;
        }

        let (_, k1) = eval(t, &x);
        let x2: Vec<f64> = (0..dim).map(|i| x[i] + 0.5 * h * k1[i]).collect();
        let (_, k2) = eval(t + 0.5 * h, &x2);
        let x3: Vec<f64> = (0..dim).map(|i| x[i] + 0.5 * h * k2[i]).collect();
        let (_, k3) = eval(t + 0.5 * h, &x3);
        let x4: Vec<f64> = (0..dim).map(|i| x[i] + h * k3[i]).collect();
        let (_, k4) = eval(t + h, &x4);
        for i in 0..dim {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Ok(Trajectory {
        times,
        states,
        inputs,
        violations,
    })
}

/// Routh-Hurwitz test of `s^n + l_{n-1} s^{n-1} + ... + l_0` (input is
/// `[l_0, .., l_{n-1}]`); true iff all roots lie strictly in the open
/// left half-plane.
pub fn is_stable_monic(lambdas: &[f64]) -> bool {
    let n = lambdas.len();
    if n == 0 {
        return false;
    }
    // descending coefficients, leading 1
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1.0);
    for i in (0..n).rev() {
        coeffs.push(lambdas[i]);
    }
    if coeffs.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
        return false;
    }
    let cols = n / 2 + 2;
    let mut prev = alloc::vec![0.0; cols];
    let mut curr = alloc::vec![0.0; cols];
    for (i, &c) in coeffs.iter().enumerate() {
        if i % 2 == 0 {
            prev[i / 2] = c;
        } else {
            curr[i / 2] = c;
        }
    }
    for _ in 2..=n {
        if curr[0] == 0.0 {
            return false;
        }
        let mut next = alloc::vec![0.0; cols];
        for c in 0..cols - 1 {
            next[c] = (curr[0] * prev[c + 1] - prev[0] * curr[c + 1]) / curr[0];
        }
        if next[0] <= 0.0 {
            return false;
        }
        prev = curr;
        curr = next;
    }
    true
}

/// Analytic evaluator for a Bezier reference and its time derivatives.
#[derive(Debug, Clone)]
pub struct CurveRef {
    ders: Vec<BezierCurve<f64>>,
}

impl CurveRef {
    /// Precompute derivative curves up to `max_order` (or the degree,
    /// whichever is lower; higher derivatives are identically zero).
    pub fn new(curve: &BezierCurve<f64>, max_order: usize) -> Result<Self, SimError> {
        let mut ders = Vec::with_capacity(max_order + 1);
        ders.push(curve.clone());
        for q in 1..=max_order.min(curve.degree()) {
            ders.push(
                curve
                    .derivative(q)
                    .map_err(|e| SimError::Model(e.to_string()))?,
            );
        }
        Ok(Self { ders })
    }

    /// Derivative of order `q` at time `t`, clamped to the horizon.
    pub fn eval(&self, t: f64, q: usize) -> f64 {
        match self.ders.get(q) {
            None => 0.0,
            Some(c) => {
                let tau = (t / c.horizon()).clamp(0.0, 1.0);
                c.eval_f64(tau).expect("tau clamped")
            }
        }
    }
}

/// A scalar reference signal with analytic derivatives.
#[derive(Debug, Clone)]
pub enum Signal {
    Bezier(CurveRef),
    Sigmoid(Sigmoid),
    Constant(f64),
}

impl Signal {
    pub fn bezier(curve: &BezierCurve<f64>, max_order: usize) -> Result<Self, SimError> {
        Ok(Signal::Bezier(CurveRef::new(curve, max_order)?))
    }

    pub fn eval(&self, t: f64, order: usize) -> f64 {
        match self {
            Signal::Bezier(c) => c.eval(t, order),
            Signal::Sigmoid(s) => s.eval(t, order).unwrap_or(0.0),
            Signal::Constant(v) => {
                if order == 0 {
                    *v
                } else {
                    0.0
                }
            }
        }
    }
}

/// Vehicle input law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VehicleLaw {
    OpenLoop,
    ClosedLoop { lambda: f64 },
}

/// Simulate the longitudinal vehicle `M dVx = u/r - Ca Vx^2` tracking the
/// reference velocity curve. State is `[Vx]`, input `[u]`.
pub fn simulate_vehicle(
    params: &VehicleParams,
    vxr: &BezierCurve<f64>,
    law: VehicleLaw,
    vx0: f64,
    grid: &Grid,
    limits: &[Limit],
) -> Result<Trajectory, SimError> {
    params
        .validate()
        .map_err(|e| SimError::Model(e.to_string()))?;
    if let VehicleLaw::ClosedLoop { lambda } = law {
        if !is_stable_monic(&[lambda]) {
            return Err(SimError::UnstableGains(alloc::vec![lambda]));
        }
    }
    let vref = CurveRef::new(vxr, 1)?;
    let p = *params;
    let input = move |t: f64, x: &[f64]| -> Vec<f64> {
        let u = match law {
            VehicleLaw::OpenLoop => {
                // u_r = r (M dVxr + Ca Vxr^2)
                p.wheel_radius
                    * (p.mass * vref.eval(t, 1) + p.aero_coeff * vref.eval(t, 0) * vref.eval(t, 0))
            }
            VehicleLaw::ClosedLoop { lambda } => {
                vehicle_closed_loop_input(x[0], vref.eval(t, 0), vref.eval(t, 1), lambda, &p)
            }
        };
        alloc::vec![u]
    };
    let dynamics = move |_t: f64, x: &[f64], u: &[f64]| -> Vec<f64> {
        alloc::vec![(u[0] / p.wheel_radius - p.aero_coeff * x[0] * x[0]) / p.mass]
    };
    integrate(dynamics, input, alloc::vec![vx0], grid, limits)
}

/// Flat-output reference bundle for the quadrotor.
#[derive(Debug, Clone)]
pub struct QuadReference {
    pub x: Signal,
    pub y: Signal,
    pub z: Signal,
    pub psi: Signal,
}

/// Quadrotor state layout used by [`simulate_quad`].
pub const QUAD_STATE: [&str; 12] = [
    "x", "vx", "y", "vy", "z", "vz", "theta", "omega_theta", "phi", "omega_phi", "psi",
    "omega_psi",
];

impl QuadReference {
    /// Thrust denominator `w = d2z + g`.
    fn w(&self, t: f64, q: &QuadParams) -> f64 {
        self.z.eval(t, 2) + q.gravity
    }

    /// Reference tilt angles and their rates from the flat maps.
    pub fn tilt(&self, t: f64, q: &QuadParams) -> (f64, f64, f64, f64) {
        let w = self.w(t, q);
        let (x2, x3) = (self.x.eval(t, 2), self.x.eval(t, 3));
        let (y2, y3) = (self.y.eval(t, 2), self.y.eval(t, 3));
        let z3 = self.z.eval(t, 3);
        let theta = x2 / w;
        let theta_dot = (x3 * w - x2 * z3) / (w * w);
        let phi = -y2 / w;
        let phi_dot = -(y3 * w - y2 * z3) / (w * w);
        (theta, theta_dot, phi, phi_dot)
    }

    /// Full 12-dimensional reference state (layout [`QUAD_STATE`]).
    pub fn state_ref(&self, t: f64, q: &QuadParams) -> Vec<f64> {
        let (theta, theta_dot, phi, phi_dot) = self.tilt(t, q);
        alloc::vec![
            self.x.eval(t, 0),
            self.x.eval(t, 1),
            self.y.eval(t, 0),
            self.y.eval(t, 1),
            self.z.eval(t, 0),
            self.z.eval(t, 1),
            theta,
            theta_dot,
            phi,
            phi_dot,
            self.psi.eval(t, 0),
            self.psi.eval(t, 1),
        ]
    }

    /// Feedforward inputs `[u1, u2, u3, u4]` from the flat
    /// parameterization.
    pub fn open_loop_inputs(&self, t: f64, q: &QuadParams) -> Vec<f64> {
        let w = self.w(t, q);
        let (x2, x3, x4) = (self.x.eval(t, 2), self.x.eval(t, 3), self.x.eval(t, 4));
        let (y2, y3, y4) = (self.y.eval(t, 2), self.y.eval(t, 3), self.y.eval(t, 4));
        let (z3, z4) = (self.z.eval(t, 3), self.z.eval(t, 4));
        let u1 = q.mass * w;
        let u2 = q.inertia_x / w * (x4 - 2.0 * (x3 * w - x2 * z3) / (w * w) * z3 - x2 * z4 / w);
        let u3 = q.inertia_y / w * (-y4 + 2.0 * (y3 * w - y2 * z3) / (w * w) * z3 + y2 * z4 / w);
        let u4 = q.inertia_z * self.psi.eval(t, 2);
        alloc::vec![u1, u2, u3, u4]
    }
}

/// Closed-loop gain sets: monic error polynomial coefficients
/// `[l_0, l_1, ..]` per axis group.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadGains {
    /// x/y translational axes, order 4.
    pub xy: [f64; 4],
    /// Altitude, order 2 (thrust acts on z with relative degree two).
    pub z: [f64; 2],
    /// Yaw, order 2.
    pub yaw: [f64; 2],
}

impl Default for QuadGains {
    fn default() -> Self {
        Self {
            // (s+3)^4 and (s+3)^2
            xy: [81.0, 108.0, 54.0, 12.0],
            z: [9.0, 6.0],
            yaw: [9.0, 6.0],
        }
    }
}

/// Quadrotor input law.
#[derive(Debug, Clone)]
pub enum QuadLaw {
    OpenLoop,
    ClosedLoop(QuadGains),
}

/// Simulate the simplified quadrotor (state layout [`QUAD_STATE`]):
/// `m d2x = theta u1`, `m d2y = -phi u1`, `m d2z = u1 - m g`,
/// `Ix d2theta = u2`, `Iy d2phi = u3`, `Iz d2psi = u4`.
///
/// The closed loop applies per-axis linear tracking of the flat-output
/// error, linearized about hover (`u1 ~ m g`) for the x/y chains.
pub fn simulate_quad(
    params: &QuadParams,
    refs: &QuadReference,
    law: QuadLaw,
    x0: Vec<f64>,
    grid: &Grid,
    limits: &[Limit],
) -> Result<Trajectory, SimError> {
    params
        .validate()
        .map_err(|e| SimError::Model(e.to_string()))?;
    if x0.len() != 12 {
        return Err(SimError::Model("quadrotor state must have 12 entries".to_string()));
    }
    if let QuadLaw::ClosedLoop(g) = &law {
        for lam in [&g.xy[..], &g.z[..], &g.yaw[..]] {
            if !is_stable_monic(lam) {
                return Err(SimError::UnstableGains(lam.to_vec()));
            }
        }
    }
    let q = *params;
    let refs = refs.clone();
    let input = move |t: f64, x: &[f64]| -> Vec<f64> {
        match &law {
            QuadLaw::OpenLoop => refs.open_loop_inputs(t, &q),
            QuadLaw::ClosedLoop(gains) => {
                let g = q.gravity;
                let rs = refs.state_ref(t, &q);
                // altitude: u1 = m (g + d2z_r - l1 ez' - l0 ez)
                let u1 = q.mass
                    * (g + refs.z.eval(t, 2)
                        - gains.z[1] * (x[5] - rs[5])
                        - gains.z[0] * (x[4] - rs[4]));
                // x chain about hover: e2 ~ g theta - d2x_r, e3 ~ g w_theta - d3x_r
                let ex = [
                    x[0] - rs[0],
                    x[1] - rs[1],
                    g * x[6] - refs.x.eval(t, 2),
                    g * x[7] - refs.x.eval(t, 3),
                ];
                let vx4 = refs.x.eval(t, 4)
                    - gains.xy[3] * ex[3]
                    - gains.xy[2] * ex[2]
                    - gains.xy[1] * ex[1]
                    - gains.xy[0] * ex[0];
                let u2 = q.inertia_x * vx4 / g;
                // y chain: e2 ~ -g phi - d2y_r
                let ey = [
                    x[2] - rs[2],
                    x[3] - rs[3],
                    -g * x[8] - refs.y.eval(t, 2),
                    -g * x[9] - refs.y.eval(t, 3),
                ];
                let vy4 = refs.y.eval(t, 4)
                    - gains.xy[3] * ey[3]
                    - gains.xy[2] * ey[2]
                    - gains.xy[1] * ey[1]
                    - gains.xy[0] * ey[0];
                let u3 = -q.inertia_y * vy4 / g;
                let u4 = q.inertia_z
                    * (refs.psi.eval(t, 2)
                        - gains.yaw[1] * (x[11] - rs[11])
                        - gains.yaw[0] * (x[10] - rs[10]));
                alloc::vec![u1, u2, u3, u4]
            }
        }
    };
    let dynamics = move |_t: f64, x: &[f64], u: &[f64]| -> Vec<f64> {
        alloc::vec![
            x[1],
            x[6] * u[0] / q.mass,
            x[3],
            -x[8] * u[0] / q.mass,
            x[5],
            u[0] / q.mass - q.gravity,
            x[7],
            u[1] / q.inertia_x,
            x[9],
            u[2] / q.inertia_y,
            x[11],
            u[3] / q.inertia_z,
        ]
    };
    integrate(dynamics, input, x0, grid, limits)
}
