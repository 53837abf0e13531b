//! Certified inner/outer approximation of the feasible control-point
//! region by interval branch-and-prune.
//!
//! Each box of the parameter domain is classified by sound interval
//! enclosures of every relation: `inside` boxes satisfy all relations at
//! every point, `outside` boxes violate at least one relation everywhere,
//! and undecided boxes are bisected until they fall below the minimum
//! width or the box budget runs out. Strict inequalities are certified as
//! their closed counterparts; inside boxes whose enclosure touches such a
//! boundary carry a closure flag.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::Zero;

use crate::coeff::{rat_from_f64, rat_to_f64, Rat};
use crate::constraint::{ConstraintSystem, RelOp};
use crate::rng::SplitMix64;

/// Axis-aligned box over the free parameters, in box order.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl ParamBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        debug_assert_eq!(lo.len(), hi.len());
        Self { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn width(&self, i: usize) -> f64 {
        self.hi[i] - self.lo[i]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.width(i)).product()
    }

    pub fn center(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| 0.5 * (self.lo[i] + self.hi[i]))
            .collect()
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dim()
            && (0..self.dim()).all(|i| self.lo[i] <= point[i] && point[i] <= self.hi[i])
    }

    /// Split at the midpoint of dimension `d` into (low half, high half).
    pub fn bisect(&self, d: usize) -> (Self, Self) {
        let mid = 0.5 * (self.lo[d] + self.hi[d]);
        let mut left = self.clone();
        let mut right = self.clone();
        left.hi[d] = mid;
        right.lo[d] = mid;
        (left, right)
    }

    fn bounds_map(&self, names: &[String]) -> BTreeMap<String, (f64, f64)> {
        names
            .iter()
            .cloned()
            .zip(self.lo.iter().cloned().zip(self.hi.iter().cloned()))
            .collect()
    }
}

/// Verdict of interval classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxStatus {
    Inside,
    Outside,
    Unknown,
}

/// Inside box with its closure annotation: true when certification relied
/// on the closed counterpart of a strict relation touching zero.
#[derive(Debug, Clone, PartialEq)]
pub struct InsideBox {
    pub bx: ParamBox,
    pub closure: bool,
}

/// Counters and volumes of a branch-and-prune run.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionStats {
    pub processed: usize,
    pub inside_count: usize,
    pub outside_count: usize,
    pub boundary_count: usize,
    pub inside_volume: f64,
    pub outside_volume: f64,
    pub domain_volume: f64,
    pub max_depth: usize,
    pub min_width: f64,
    pub budget: usize,
    /// Budget ran out before every box was resolved.
    pub partial: bool,
}

/// Disjoint partition of the explored domain into certified-inside,
/// certified-outside, and undecided boundary boxes.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionApprox {
    pub params: Vec<String>,
    pub domain: ParamBox,
    pub inside: Vec<InsideBox>,
    pub outside: Vec<ParamBox>,
    pub boundary: Vec<ParamBox>,
    pub stats: RegionStats,
}

/// Errors from region computation.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionError {
    /// The domain has an infinite or NaN bound for the named parameter.
    UnboundedDomain(String),
    /// lo > hi for the named parameter.
    EmptyDomain(String),
    BadMinWidth(f64),
    /// No free parameters to explore.
    NoFreeParams,
}

impl core::fmt::Display for RegionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RegionError::UnboundedDomain(p) => write!(f, "parameter {p} has non-finite bounds"),
            RegionError::EmptyDomain(p) => write!(f, "parameter {p} has an empty interval"),
            RegionError::BadMinWidth(w) => write!(f, "min width must be positive, got {w}"),
            RegionError::NoFreeParams => write!(f, "constraint system has no free parameters"),
        }
    }
}

/// Classify one box by interval enclosures; sound, never mislabels.
///
/// Returns the status and, when inside, whether any strict relation was
/// certified only through its closure.
pub fn classify_box(sys: &ConstraintSystem, names: &[String], bx: &ParamBox) -> (BoxStatus, bool) {
    let map = bx.bounds_map(names);
    let mut closure = false;
    for rel in &sys.relations {
        let iv = match rel.poly.interval_eval(&map) {
            Ok(iv) => iv,
            // relations mentioning parameters outside the box cannot be
            // certified either way
            Err(_) => return (BoxStatus::Unknown, false),
        };
        let (inside, outside) = match rel.op {
            RelOp::Gt => (iv.lo >= 0.0, iv.hi <= 0.0),
            RelOp::Ge => (iv.lo >= 0.0, iv.hi < 0.0),
            RelOp::Lt => (iv.hi <= 0.0, iv.lo >= 0.0),
            RelOp::Le => (iv.hi <= 0.0, iv.lo > 0.0),
            RelOp::Eq => (iv.lo >= 0.0 && iv.hi <= 0.0, iv.lo > 0.0 || iv.hi < 0.0),
            RelOp::Ne => (iv.lo > 0.0 || iv.hi < 0.0, iv.lo >= 0.0 && iv.hi <= 0.0),
        };
        if outside {
            return (BoxStatus::Outside, false);
        }
        if !inside {
            return (BoxStatus::Unknown, false);
        }
        if rel.op.is_strict() {
            let touches = match rel.op {
                RelOp::Gt => iv.lo == 0.0,
                RelOp::Lt => iv.hi == 0.0,
                RelOp::Ne => iv.lo == 0.0 || iv.hi == 0.0,
                _ => false,
            };
            closure = closure || touches;
        }
    }
    (BoxStatus::Inside, closure)
}

/// Depth-first interval branch-and-prune over the system's domain box.
///
/// `budget` caps the total number of boxes classified; hitting it marks
/// the result partial and files the unexplored boxes as boundary. Output
/// box lists are canonically ordered, independent of exploration order.
pub fn branch_and_prune(
    sys: &ConstraintSystem,
    min_width: f64,
    budget: usize,
) -> Result<RegionApprox, RegionError> {
    if !(min_width > 0.0 && min_width.is_finite()) {
        return Err(RegionError::BadMinWidth(min_width));
    }
    let names = sys.free_params();
    if names.is_empty() {
        return Err(RegionError::NoFreeParams);
    }
    let mut lo = Vec::with_capacity(names.len());
    let mut hi = Vec::with_capacity(names.len());
    for n in &names {
        let (a, b) = sys.bounds[n];
        if !a.is_finite() || !b.is_finite() {
            return Err(RegionError::UnboundedDomain(n.clone()));
        }
        if a > b {
            return Err(RegionError::EmptyDomain(n.clone()));
        }
        lo.push(a);
        hi.push(b);
    }
    let domain = ParamBox::new(lo, hi);
    let extent: Vec<f64> = (0..domain.dim())
        .map(|i| domain.width(i).max(f64::MIN_POSITIVE))
        .collect();

    let mut inside = Vec::new();
    let mut outside = Vec::new();
    let mut boundary = Vec::new();
    let mut stats = RegionStats {
        processed: 0,
        inside_count: 0,
        outside_count: 0,
        boundary_count: 0,
        inside_volume: 0.0,
        outside_volume: 0.0,
        domain_volume: domain.volume(),
        max_depth: 0,
        min_width,
        budget,
        partial: false,
    };

    let mut stack: Vec<(ParamBox, usize)> = alloc::vec![(domain.clone(), 0)];
    while let Some((bx, depth)) = stack.pop() {
        if stats.processed >= budget {
            stats.partial = true;
            boundary.push(bx);
            continue;
        }
        stats.processed += 1;
        stats.max_depth = stats.max_depth.max(depth);
        match classify_box(sys, &names, &bx) {
            (BoxStatus::Inside, closure) => {
                stats.inside_volume += bx.volume();
                inside.push(InsideBox { bx, closure });
            }
            (BoxStatus::Outside, _) => {
                stats.outside_volume += bx.volume();
                outside.push(bx);
            }
            (BoxStatus::Unknown, _) => {
                // widest scaled dimension, ties to the lowest index
                let mut d = 0;
                let mut best = -1.0;
                for i in 0..bx.dim() {
                    let w = bx.width(i) / extent[i];
                    if w > best {
                        best = w;
                        d = i;
                    }
                }
                if bx.width(d) <= min_width {
                    boundary.push(bx);
                } else {
                    let (a, b) = bx.bisect(d);
                    stack.push((b, depth + 1));
                    stack.push((a, depth + 1));
                }
            }
        }
    }

    // canonical result ordering regardless of exploration schedule
    inside.sort_by(|a, b| box_key(&a.bx).partial_cmp(&box_key(&b.bx)).unwrap());
    outside.sort_by(|a, b| box_key(a).partial_cmp(&box_key(b)).unwrap());
    boundary.sort_by(|a, b| box_key(a).partial_cmp(&box_key(b)).unwrap());
    stats.inside_count = inside.len();
    stats.outside_count = outside.len();
    stats.boundary_count = boundary.len();

    Ok(RegionApprox {
        params: names,
        domain,
        inside,
        outside,
        boundary,
        stats,
    })
}

fn box_key(b: &ParamBox) -> Vec<f64> {
    let mut k = b.lo.clone();
    k.extend_from_slice(&b.hi);
    k
}

/// One relation's exact value at a membership query point.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    pub name: String,
    /// Exact value, rounded to f64 for reporting.
    pub value: f64,
    pub satisfied: bool,
}

/// Result of an exact membership query.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub feasible: bool,
    /// Parameters (if any) outside the domain box.
    pub box_violations: Vec<String>,
    pub relations: Vec<RelationReport>,
}

/// Exact rational membership test of a point given in free-parameter
/// order; every relation is evaluated and reported even after a failure.
pub fn membership(sys: &ConstraintSystem, point: &[Rat]) -> MembershipReport {
    let names = sys.free_params();
    let mut box_violations = Vec::new();
    if point.len() != names.len() {
        return MembershipReport {
            feasible: false,
            box_violations: alloc::vec!["dimension mismatch".to_string()],
            relations: Vec::new(),
        };
    }
    let mut bindings: BTreeMap<String, Rat> = sys.fixed.clone();
    for (n, v) in names.iter().zip(point) {
        let (lo, hi) = sys.bounds[n];
        let ok_lo = rat_from_f64(lo).map(|l| *v >= l).unwrap_or(lo == f64::NEG_INFINITY);
        let ok_hi = rat_from_f64(hi).map(|h| *v <= h).unwrap_or(hi == f64::INFINITY);
        if !(ok_lo && ok_hi) {
            box_violations.push(n.clone());
        }
        bindings.insert(n.clone(), v.clone());
    }
    let mut relations = Vec::new();
    let mut all_ok = box_violations.is_empty();
    for rel in &sys.relations {
        let value = rel
            .poly
            .substitute(&bindings)
            .unwrap_or_else(|_| Rat::zero());
        let satisfied = rel.poly.substitute(&bindings).is_ok() && rel.op.holds(&value);
        all_ok = all_ok && satisfied;
        relations.push(RelationReport {
            name: rel.name.clone(),
            value: rat_to_f64(&value),
            satisfied,
        });
    }
    MembershipReport {
        feasible: all_ok,
        box_violations,
        relations,
    }
}

/// Relation precompiled onto the free-parameter index order for fast
/// floating sampling.
struct CompiledRelation {
    op: RelOp,
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

/// Constraint system flattened for repeated floating-point evaluation at
/// many points; not a certificate, just an oracle.
pub struct CompiledSystem {
    names: Vec<String>,
    lohi: Vec<(f64, f64)>,
    rels: Vec<CompiledRelation>,
}

impl CompiledSystem {
    pub fn new(sys: &ConstraintSystem) -> Result<Self, RegionError> {
        let names = sys.free_params();
        if names.is_empty() {
            return Err(RegionError::NoFreeParams);
        }
        let mut lohi = Vec::with_capacity(names.len());
        for name in &names {
            let (lo, hi) = sys.bounds[name];
            if !lo.is_finite() || !hi.is_finite() {
                return Err(RegionError::UnboundedDomain(name.clone()));
            }
            lohi.push((lo, hi));
        }
        let rels = sys
            .relations
            .iter()
            .map(|rel| {
                let poly = rel.poly.substitute_partial(&sys.fixed);
                let idx: Vec<usize> = poly
                    .params()
                    .iter()
                    .map(|p| names.iter().position(|n| n == p).expect("free param"))
                    .collect();
                let terms = poly
                    .terms_iter()
                    .map(|(e, c)| {
                        let powers: Vec<(usize, u32)> = e
                            .iter()
                            .enumerate()
                            .filter(|(_, &x)| x > 0)
                            .map(|(i, &x)| (idx[i], x))
                            .collect();
                        (rat_to_f64(c), powers)
                    })
                    .collect();
                CompiledRelation { op: rel.op, terms }
            })
            .collect();
        Ok(Self { names, lohi, rels })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.lohi
    }

    /// Floating feasibility at a point given in free-parameter order.
    pub fn feasible(&self, point: &[f64]) -> bool {
        self.rels
            .iter()
            .all(|r| holds_f64(r.op, eval_compiled(r, point)))
    }

    /// Draw one uniform sample of the domain into `point`.
    pub fn sample_into(&self, rng: &mut SplitMix64, point: &mut [f64]) {
        for (i, &(lo, hi)) in self.lohi.iter().enumerate() {
            point[i] = rng.uniform(lo, hi);
        }
    }
}

fn eval_compiled(rel: &CompiledRelation, point: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (c, powers) in &rel.terms {
        let mut term = *c;
        for &(i, e) in powers {
            term *= libm::pow(point[i], e as f64);
        }
        acc += term;
    }
    acc
}

fn holds_f64(op: RelOp, v: f64) -> bool {
    match op {
        RelOp::Lt => v < 0.0,
        RelOp::Le => v <= 0.0,
        RelOp::Gt => v > 0.0,
        RelOp::Ge => v >= 0.0,
        RelOp::Eq => v == 0.0,
        RelOp::Ne => v != 0.0,
    }
}

/// Monte-Carlo feasibility estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub total: usize,
    pub feasible: usize,
    pub fraction: f64,
    pub feasible_witnesses: Vec<Vec<f64>>,
    pub infeasible_witnesses: Vec<Vec<f64>>,
}

const MAX_WITNESSES: usize = 10;

/// Seeded uniform sampling over the domain box; deterministic for a given
/// (system, n, seed). Evaluation is floating-point — this is a statistical
/// oracle, not a certificate.
pub fn sample_oracle(sys: &ConstraintSystem, n: usize, seed: u64) -> Result<SampleReport, RegionError> {
    let compiled = CompiledSystem::new(sys)?;
    let mut rng = SplitMix64::new(seed);
    let mut feasible = 0usize;
    let mut wit_in = Vec::new();
    let mut wit_out = Vec::new();
    let mut point = alloc::vec![0.0; compiled.names().len()];
    for _ in 0..n {
        compiled.sample_into(&mut rng, &mut point);
        let ok = compiled.feasible(&point);
        if ok {
            feasible += 1;
            if wit_in.len() < MAX_WITNESSES {
                wit_in.push(point.clone());
            }
        } else if wit_out.len() < MAX_WITNESSES {
            wit_out.push(point.clone());
        }
    }
    Ok(SampleReport {
        total: n,
        feasible,
        fraction: if n == 0 { 0.0 } else { feasible as f64 / n as f64 },
        feasible_witnesses: wit_in,
        infeasible_witnesses: wit_out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bezier::BezierCurve;
    use crate::coeff::{rat, rat_int};
    use crate::constraint::{bound_curve, compile, Relation};
    use crate::flat::vehicle::{vehicle_input_curve, VehicleParams};
    use crate::sympoly::PolyExpr;

    fn one_d_system(poly: PolyExpr, op: RelOp, lo: f64, hi: f64) -> ConstraintSystem {
        compile(
            alloc::vec![Relation {
                name: "r0".to_string(),
                poly,
                op,
            }],
            [("a".to_string(), (lo, hi))].into_iter().collect(),
            BTreeMap::new(),
        )
        .unwrap()
    }

    /// Vehicle system with two intermediate control points: degree-3 curve
    /// {0, a1, a2, 1} on [0, 1], nine -> seven double input inequalities.
    fn vehicle_two_param() -> ConstraintSystem {
        let pts = alloc::vec![
            PolyExpr::zero(),
            PolyExpr::var("a1"),
            PolyExpr::var("a2"),
            PolyExpr::constant(rat_int(1)),
        ];
        let vxr = BezierCurve::new(pts, 1.0).unwrap();
        let u = vehicle_input_curve(&vxr, &VehicleParams::default()).unwrap();
        let rels = bound_curve(&u, "U", 0.0, 10.0, true).unwrap();
        compile(
            rels,
            [
                ("a1".to_string(), (-2.0, 2.0)),
                ("a2".to_string(), (-2.0, 2.0)),
            ]
            .into_iter()
            .collect(),
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn classify_sign_cases() {
        let sys = one_d_system(PolyExpr::var("a"), RelOp::Ge, -2.0, 2.0);
        let names = sys.free_params();
        let inside = ParamBox::new(alloc::vec![0.1], alloc::vec![0.2]);
        let outside = ParamBox::new(alloc::vec![-0.2], alloc::vec![-0.1]);
        assert_eq!(classify_box(&sys, &names, &inside).0, BoxStatus::Inside);
        assert_eq!(classify_box(&sys, &names, &outside).0, BoxStatus::Outside);
    }

    #[test]
    fn classify_straddling_square() {
        // a^2 <= 1 on [0.5, 1.5]: enclosure straddles zero residual
        let a = PolyExpr::var("a");
        let poly = a.mul(&a).sub(&PolyExpr::constant(rat_int(1)));
        let sys = one_d_system(poly, RelOp::Le, -2.0, 2.0);
        let bx = ParamBox::new(alloc::vec![0.5], alloc::vec![1.5]);
        assert_eq!(
            classify_box(&sys, &sys.free_params(), &bx).0,
            BoxStatus::Unknown
        );
    }

    #[test]
    fn one_d_square_region_hausdorff() {
        // {a^2 <= 1} on [-2, 2]: feasible set is [-1, 1]
        let a = PolyExpr::var("a");
        let poly = a.mul(&a).sub(&PolyExpr::constant(rat_int(1)));
        let sys = one_d_system(poly, RelOp::Le, -2.0, 2.0);
        let region = branch_and_prune(&sys, 1e-3, 1_000_000).unwrap();
        assert!(!region.stats.partial);
        // inside union covers [-1 + 2e-3, 1 - 2e-3] and stays in [-1, 1]
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for ib in &region.inside {
            lo = lo.min(ib.bx.lo[0]);
            hi = hi.max(ib.bx.hi[0]);
            assert!(ib.bx.lo[0] >= -1.0 - 1e-12 && ib.bx.hi[0] <= 1.0 + 1e-12);
        }
        assert!(lo <= -1.0 + 2e-3, "inside union starts at {lo}");
        assert!(hi >= 1.0 - 2e-3, "inside union ends at {hi}");
        // the union is contiguous: total inside volume close to 2
        assert!((region.stats.inside_volume - 2.0).abs() < 4e-3);
    }

    #[test]
    fn contradictory_system_all_outside() {
        // a^2 < -1 is nowhere satisfiable
        let a = PolyExpr::var("a");
        let poly = a.mul(&a).add(&PolyExpr::constant(rat_int(1)));
        let sys = one_d_system(poly, RelOp::Lt, -2.0, 2.0);
        let region = branch_and_prune(&sys, 1e-3, 10_000).unwrap();
        assert!(region.inside.is_empty());
        assert_eq!(region.stats.outside_volume, region.stats.domain_volume);
    }

    #[test]
    fn vehicle_two_param_known_points() {
        let sys = vehicle_two_param();
        let region = branch_and_prune(&sys, 5e-3, 2_000_000).unwrap();
        let p_in = [0.05, 0.5];
        let p_out = [0.05, -0.2];
        assert!(
            region.inside.iter().any(|ib| ib.bx.contains(&p_in)),
            "(0.05, 0.5) not certified inside"
        );
        assert!(
            region.outside.iter().any(|bx| bx.contains(&p_out)),
            "(0.05, -0.2) not certified outside"
        );
    }

    #[test]
    fn deterministic_across_runs() {
        let sys = vehicle_two_param();
        let r1 = branch_and_prune(&sys, 2e-2, 100_000).unwrap();
        let r2 = branch_and_prune(&sys, 2e-2, 100_000).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn budget_exhaustion_flags_partial() {
        let sys = vehicle_two_param();
        let region = branch_and_prune(&sys, 1e-3, 10).unwrap();
        assert!(region.stats.partial);
        assert_eq!(region.stats.processed, 10);
    }

    #[test]
    fn monotone_refinement() {
        let sys = vehicle_two_param();
        let coarse = branch_and_prune(&sys, 4e-2, 1_000_000).unwrap();
        let fine = branch_and_prune(&sys, 2e-2, 1_000_000).unwrap();
        assert!(fine.stats.inside_volume >= coarse.stats.inside_volume - 1e-12);
    }

    #[test]
    fn partition_is_disjoint_and_covers() {
        let sys = vehicle_two_param();
        let region = branch_and_prune(&sys, 5e-2, 1_000_000).unwrap();
        let mut all: Vec<&ParamBox> = region.inside.iter().map(|b| &b.bx).collect();
        all.extend(region.outside.iter());
        all.extend(region.boundary.iter());
        let total: f64 = all.iter().map(|b| b.volume()).sum();
        assert!((total - region.stats.domain_volume).abs() < 1e-9);
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                let (a, b) = (all[i], all[j]);
                let overlap: f64 = (0..a.dim())
                    .map(|k| {
                        (a.hi[k].min(b.hi[k]) - a.lo[k].max(b.lo[k])).max(0.0)
                    })
                    .product();
                assert!(overlap < 1e-12, "boxes {i} and {j} overlap");
            }
        }
    }

    #[test]
    fn inside_boxes_pass_membership_samples() {
        let sys = vehicle_two_param();
        let region = branch_and_prune(&sys, 5e-2, 1_000_000).unwrap();
        let mut rng = SplitMix64::new(42);
        for ib in &region.inside {
            for _ in 0..10 {
                let pt: Vec<Rat> = (0..ib.bx.dim())
                    .map(|i| {
                        rat_from_f64(rng.uniform(ib.bx.lo[i], ib.bx.hi[i])).unwrap()
                    })
                    .collect();
                let rep = membership(&sys, &pt);
                assert!(rep.feasible, "inside box sample rejected: {rep:?}");
            }
        }
    }

    #[test]
    fn membership_three_param_points() {
        // degree-4 curve {0, a1, a2, a3, 1}; (2, 2.3, 1.3) fails with
        // U8 = -0.2, (2, 2.3, 1.2) repairs U8 but still fails on the
        // interior points U6 and U7, while (1, 1, 1) is fully feasible
        let pts = alloc::vec![
            PolyExpr::zero(),
            PolyExpr::var("a1"),
            PolyExpr::var("a2"),
            PolyExpr::var("a3"),
            PolyExpr::constant(rat_int(1)),
        ];
        let vxr = BezierCurve::new(pts, 1.0).unwrap();
        let u = vehicle_input_curve(&vxr, &VehicleParams::default()).unwrap();
        let rels = bound_curve(&u, "U", 0.0, 10.0, true).unwrap();
        let sys = compile(
            rels,
            ["a1", "a2", "a3"]
                .iter()
                .map(|n| (n.to_string(), (-4.0, 4.0)))
                .collect(),
            BTreeMap::new(),
        )
        .unwrap();

        let bad = [rat_int(2), rat(23, 10), rat(13, 10)];
        let rep = membership(&sys, &bad);
        assert!(!rep.feasible);
        let u8_lo = rep.relations.iter().find(|r| r.name == "U8_lo").unwrap();
        assert!(!u8_lo.satisfied);
        assert!((u8_lo.value + 0.2).abs() < 1e-12);

        let partial = [rat_int(2), rat(23, 10), rat(12, 10)];
        let rep = membership(&sys, &partial);
        assert!(!rep.feasible);
        let u8_lo = rep.relations.iter().find(|r| r.name == "U8_lo").unwrap();
        assert!(u8_lo.satisfied);
        assert!((u8_lo.value - 0.2).abs() < 1e-12);
        for name in ["U6_lo", "U7_lo"] {
            let r = rep.relations.iter().find(|r| r.name == name).unwrap();
            assert!(!r.satisfied, "{name} unexpectedly satisfied");
        }

        let good = [rat_int(1), rat_int(1), rat_int(1)];
        let rep = membership(&sys, &good);
        assert!(rep.feasible, "{rep:?}");

        let outside = [rat_int(5), rat_int(0), rat_int(0)];
        let rep = membership(&sys, &outside);
        assert!(!rep.feasible);
        assert_eq!(rep.box_violations, ["a1"]);
    }

    #[test]
    fn sample_oracle_trivial_and_contradictory() {
        let empty = compile(
            Vec::new(),
            [("a".to_string(), (0.0, 1.0))].into_iter().collect(),
            BTreeMap::new(),
        )
        .unwrap();
        let rep = sample_oracle(&empty, 1000, 7).unwrap();
        assert_eq!(rep.fraction, 1.0);

        let a = PolyExpr::var("a");
        let never = one_d_system(
            a.mul(&a).add(&PolyExpr::constant(rat_int(1))),
            RelOp::Lt,
            0.0,
            1.0,
        );
        let rep = sample_oracle(&never, 1000, 7).unwrap();
        assert_eq!(rep.fraction, 0.0);
        assert!(rep.feasible_witnesses.is_empty());
        assert_eq!(rep.infeasible_witnesses.len(), MAX_WITNESSES);
    }

    #[test]
    fn sample_oracle_seeded_determinism() {
        let sys = vehicle_two_param();
        let r1 = sample_oracle(&sys, 5000, 99).unwrap();
        let r2 = sample_oracle(&sys, 5000, 99).unwrap();
        assert_eq!(r1, r2);
        let r3 = sample_oracle(&sys, 5000, 100).unwrap();
        assert!(r1.feasible != r3.feasible || r1.feasible_witnesses != r3.feasible_witnesses);
    }

    #[test]
    fn oracle_agrees_with_certified_volume() {
        let sys = vehicle_two_param();
        let region = branch_and_prune(&sys, 1e-2, 4_000_000).unwrap();
        assert!(!region.stats.partial);
        let n = 100_000;
        let rep = sample_oracle(&sys, n, 2024).unwrap();
        let certified = region.stats.inside_volume / region.stats.domain_volume;
        let boundary_frac =
            1.0 - (region.stats.inside_volume + region.stats.outside_volume)
                / region.stats.domain_volume;
        let se = libm::sqrt(rep.fraction * (1.0 - rep.fraction) / n as f64);
        // certified volume underestimates; the gap is at most the boundary mass
        assert!(rep.fraction >= certified - 3.0 * se);
        assert!(rep.fraction <= certified + boundary_frac + 3.0 * se);
    }
}
