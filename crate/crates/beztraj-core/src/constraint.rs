//! Compiles bound requirements on symbolic Bezier curves into a
//! semialgebraic constraint system over the flat-output control points.
//!
//! By the convex-hull property, bounding every control point of a curve
//! certifies the bound on the whole curve; the emitted relations are
//! sufficient, possibly conservative. All relations are normalized to
//! `r(alpha) op 0`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::bezier::BezierCurve;
use crate::coeff::{rat_from_f64, rat_int, Rat};
use crate::sympoly::PolyExpr;

/// Relation operator against zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl RelOp {
    pub fn as_str(&self) -> &'static str {
        match self {
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Gt => ">",
            RelOp::Ge => ">=",
            RelOp::Eq => "=",
            RelOp::Ne => "!=",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "<" => Some(RelOp::Lt),
            "<=" => Some(RelOp::Le),
            ">" => Some(RelOp::Gt),
            ">=" => Some(RelOp::Ge),
            "=" => Some(RelOp::Eq),
            "!=" => Some(RelOp::Ne),
            _ => None,
        }
    }

    /// Exact verdict of `value op 0`.
    pub fn holds(&self, value: &Rat) -> bool {
        match self {
            RelOp::Lt => value < &Rat::zero(),
            RelOp::Le => value <= &Rat::zero(),
            RelOp::Gt => value > &Rat::zero(),
            RelOp::Ge => value >= &Rat::zero(),
            RelOp::Eq => value.is_zero(),
            RelOp::Ne => !value.is_zero(),
        }
    }

    /// Whether the relation excludes its boundary.
    pub fn is_strict(&self) -> bool {
        matches!(self, RelOp::Lt | RelOp::Gt | RelOp::Ne)
    }
}

/// One normalized relation `poly op 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub name: String,
    pub poly: PolyExpr,
    pub op: RelOp,
}

/// Conjunction of relations over a parameter box, with pinned parameters
/// already substituted away.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub relations: Vec<Relation>,
    /// Parameter box A; entries may be infinite.
    pub bounds: BTreeMap<String, (f64, f64)>,
    /// Endpoint-equality pins applied during compilation.
    pub fixed: BTreeMap<String, Rat>,
}

impl ConstraintSystem {
    /// Free parameter names, in box order.
    pub fn free_params(&self) -> Vec<String> {
        self.bounds.keys().cloned().collect()
    }
}

/// Errors from compilation.
#[derive(Debug, Clone, PartialEq)]
pub enum CompileError {
    /// lo >= hi in a bound request.
    EmptyBound { lo: f64, hi: f64 },
    /// A constant relation is violated; the system is infeasible as written.
    Contradiction { name: String, value: Rat },
    /// Relation mentions a parameter that is neither boxed nor fixed.
    Undeclared { name: String, param: String },
    /// Endpoint conditions need more free control points.
    InsufficientDegree { degree: usize, order: usize },
    /// A bound endpoint is NaN.
    BadBound(f64),
}

impl core::fmt::Display for CompileError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CompileError::EmptyBound { lo, hi } => write!(f, "empty bound ({lo}, {hi})"),
            CompileError::Contradiction { name, value } => {
                write!(f, "relation {name} is constant-infeasible (value {value})")
            }
            CompileError::Undeclared { name, param } => {
                write!(f, "relation {name} uses undeclared parameter {param}")
            }
            CompileError::InsufficientDegree { degree, order } => write!(
                f,
                "degree {degree} cannot absorb endpoint conditions of order {order}"
            ),
            CompileError::BadBound(v) => write!(f, "bound {v} is not a number"),
        }
    }
}

/// Symbolic control-point template: pinned indices become constants, the
/// rest become named parameters `{prefix}{index}`.
pub fn symbolic_control_points(
    prefix: &str,
    degree: usize,
    pinned: &BTreeMap<usize, Rat>,
) -> Vec<PolyExpr> {
    (0..=degree)
        .map(|j| match pinned.get(&j) {
            Some(v) => PolyExpr::constant(v.clone()),
            None => PolyExpr::var(&format!("{prefix}{j}")),
        })
        .collect()
}

/// Emit `lo op c_j` and `c_j op hi` for every control point of the curve.
///
/// Infinite bounds on either side are skipped. `strict` selects `<`/`>`
/// over `<=`/`>=`.
pub fn bound_curve(
    curve: &BezierCurve<PolyExpr>,
    name_prefix: &str,
    lo: f64,
    hi: f64,
    strict: bool,
) -> Result<Vec<Relation>, CompileError> {
    if lo.is_nan() || hi.is_nan() {
        return Err(CompileError::BadBound(if lo.is_nan() { lo } else { hi }));
    }
    if lo >= hi {
        return Err(CompileError::EmptyBound { lo, hi });
    }
    let mut out = Vec::new();
    for (j, p) in curve.control_points().iter().enumerate() {
        if lo.is_finite() {
            let lo_rat = rat_from_f64(lo).ok_or(CompileError::BadBound(lo))?;
            out.push(Relation {
                name: format!("{name_prefix}{j}_lo"),
                poly: p.sub(&PolyExpr::constant(lo_rat)),
                op: if strict { RelOp::Gt } else { RelOp::Ge },
            });
        }
        if hi.is_finite() {
            let hi_rat = rat_from_f64(hi).ok_or(CompileError::BadBound(hi))?;
            out.push(Relation {
                name: format!("{name_prefix}{j}_hi"),
                poly: PolyExpr::constant(hi_rat).sub(p),
                op: if strict { RelOp::Gt } else { RelOp::Ge },
            });
        }
    }
    Ok(out)
}

/// Pin leading/trailing control points from endpoint derivative values.
///
/// `t0_values[i]` is the required value of the i-th derivative at t0 (and
/// `tf_values` at tf); orders run 0..=q. The derivative control-point
/// recursion is triangular in the leading (trailing) control points, so
/// the pins are solved exactly and returned as a substitution map on the
/// parameters `{prefix}{j}`.
pub fn endpoint_conditions(
    prefix: &str,
    degree: usize,
    horizon: f64,
    t0_values: &[Rat],
    tf_values: &[Rat],
) -> Result<BTreeMap<String, Rat>, CompileError> {
    let q = t0_values.len().max(tf_values.len());
    if q == 0 {
        return Ok(BTreeMap::new());
    }
    let q = q - 1;
    // need q+1 points on each side, distinct
    if 2 * (q + 1) > degree + 1 {
        return Err(CompileError::InsufficientDegree { degree, order: q });
    }
    let t_rat = rat_from_f64(horizon).ok_or(CompileError::BadBound(horizon))?;
    let mut out = BTreeMap::new();
    for (values, from_end) in [(t0_values, false), (tf_values, true)] {
        if values.is_empty() {
            continue;
        }
        // When pinning at tf, work on the tau -> 1 - tau reversal: odd
        // derivative values flip sign, leading points map to trailing.
        let edge_vals: Vec<Rat> = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if from_end && i % 2 == 1 {
                    -v.clone()
                } else {
                    v.clone()
                }
            })
            .collect();
        let leading = solve_leading_points(degree, &t_rat, &edge_vals);
        for (j, v) in leading.into_iter().enumerate() {
            let idx = if from_end { degree - j } else { j };
            out.insert(format!("{prefix}{idx}"), v);
        }
    }
    Ok(out)
}

/// Solve c^(0)_0..c^(0)_q from the left-edge derivative values via the
/// inverted derivative recursion
/// `c^(i-1)_{j+1} = c^(i-1)_j + (T/(N-i+1)) c^(i)_j`.
fn solve_leading_points(degree: usize, horizon: &Rat, values: &[Rat]) -> Vec<Rat> {
    let q = values.len() - 1;
    // rows[i] holds c^(i)_0..c^(i)_{q-i}
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for i in (0..=q).rev() {
        let mut row = Vec::with_capacity(q - i + 1);
        row.push(values[i].clone());
        for j in 0..(q - i) {
            // factor from derivative order i -> i+1 is (N-i)/T
            let factor = horizon.clone() / rat_int((degree - i) as i64);
            let upper = &rows[rows.len() - 1][j]; // c^(i+1)_j
            let next = &row[j] + upper * factor;
            row.push(next);
        }
        rows.push(row);
    }
    rows.pop().expect("q >= 0")
}

/// Assemble a canonical system: substitute pins, drop tautologies, fail on
/// constant contradictions, and check the parameter namespace.
pub fn compile(
    relations: Vec<Relation>,
    bounds: BTreeMap<String, (f64, f64)>,
    fixed: BTreeMap<String, Rat>,
) -> Result<ConstraintSystem, CompileError> {
    let mut kept = Vec::new();
    for rel in relations {
        let poly = rel.poly.substitute_partial(&fixed);
        if let Some(c) = poly.as_constant() {
            if rel.op.holds(&c) {
                continue; // tautology under the pins
            }
            return Err(CompileError::Contradiction {
                name: rel.name,
                value: c,
            });
        }
        for p in poly.params() {
            if !bounds.contains_key(p) && !fixed.contains_key(p) {
                return Err(CompileError::Undeclared {
                    name: rel.name.clone(),
                    param: p.clone(),
                });
            }
        }
        kept.push(Relation { poly, ..rel });
    }
    Ok(ConstraintSystem {
        relations: kept,
        bounds,
        fixed,
    })
}
