//! Stable on-disk forms: constraint-system JSON, region JSON/CSV,
//! trajectory CSV, and audit JSON.
//!
//! Polynomials are stored as their canonical rendered text and rationals as
//! `num/den` strings, so files are diffable and round-trip exactly.

use std::collections::BTreeMap;
use std::str::FromStr;

use beztraj_core::constraint::{ConstraintSystem, Relation};
use beztraj_core::coeff::Rat;
use beztraj_core::region::{InsideBox, ParamBox, RegionApprox, RegionStats};
use beztraj_core::sim::{Trajectory, ViolationSummary};
use beztraj_core::sympoly::PolyExpr;
use beztraj_core::RelOp;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

pub fn rat_from_string(s: &str) -> Result<Rat, CliError> {
    Rat::from_str(s).map_err(|e| CliError::schema(format!("bad rational `{s}`: {e}")))
}

/// Serialized form of one `poly op 0` relation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RelationJson {
    pub name: String,
    pub poly: String,
    pub op: String,
}

/// Canonical constraint-system file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SystemJson {
    pub version: u32,
    pub relations: Vec<RelationJson>,
    /// Parameter box; entries may be infinite (serialized as numbers, JSON
    /// has no infinity so they are clamped to +-1e308 on write).
    pub bounds: BTreeMap<String, (f64, f64)>,
    /// Pinned parameters as exact rationals.
    pub fixed: BTreeMap<String, String>,
}

pub const SYSTEM_SCHEMA_VERSION: u32 = 1;

pub fn system_to_json(sys: &ConstraintSystem) -> SystemJson {
    SystemJson {
        version: SYSTEM_SCHEMA_VERSION,
        relations: sys
            .relations
            .iter()
            .map(|r| RelationJson {
                name: r.name.clone(),
                poly: r.poly.render(),
                op: r.op.as_str().to_string(),
            })
            .collect(),
        bounds: sys.bounds.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        fixed: sys
            .fixed
            .iter()
            .map(|(k, v)| (k.clone(), rat_to_string(v)))
            .collect(),
    }
}

pub fn system_from_json(j: &SystemJson) -> Result<ConstraintSystem, CliError> {
    if j.version != SYSTEM_SCHEMA_VERSION {
        return Err(CliError::schema(format!(
            "unsupported system schema version {}",
            j.version
        )));
    }
    let mut relations = Vec::with_capacity(j.relations.len());
    for r in &j.relations {
        let poly = PolyExpr::parse(&r.poly)
            .map_err(|e| CliError::schema(format!("relation {}: {e}", r.name)))?;
        let op = RelOp::parse(&r.op)
            .ok_or_else(|| CliError::schema(format!("relation {}: bad op `{}`", r.name, r.op)))?;
        relations.push(Relation {
            name: r.name.clone(),
            poly,
            op,
        });
    }
    let mut fixed = BTreeMap::new();
    for (k, v) in &j.fixed {
        fixed.insert(k.clone(), rat_from_string(v)?);
    }
    Ok(ConstraintSystem {
        relations,
        bounds: j.bounds.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        fixed,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxJson {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxJson {
    fn of(b: &ParamBox) -> Self {
        Self {
            lo: b.lo.clone(),
            hi: b.hi.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InsideBoxJson {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Certification used the closure of a strict relation.
    pub closure: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatsJson {
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
    pub partial: bool,
    /// Monte-Carlo feasible fraction (present when a seed was supplied).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_samples: Option<usize>,
}

impl StatsJson {
    fn of(s: &RegionStats) -> Self {
        Self {
            processed: s.processed,
            inside_count: s.inside_count,
            outside_count: s.outside_count,
            boundary_count: s.boundary_count,
            inside_volume: s.inside_volume,
            outside_volume: s.outside_volume,
            domain_volume: s.domain_volume,
            max_depth: s.max_depth,
            min_width: s.min_width,
            budget: s.budget,
            partial: s.partial,
            mc_fraction: None,
            mc_samples: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionJson {
    pub version: u32,
    pub params: Vec<String>,
    pub domain: BoxJson,
    pub inside: Vec<InsideBoxJson>,
    pub outside: Vec<BoxJson>,
    pub boundary: Vec<BoxJson>,
    pub stats: StatsJson,
}

pub fn region_to_json(r: &RegionApprox) -> RegionJson {
    RegionJson {
        version: SYSTEM_SCHEMA_VERSION,
        params: r.params.clone(),
        domain: BoxJson::of(&r.domain),
        inside: r
            .inside
            .iter()
            .map(|InsideBox { bx, closure }| InsideBoxJson {
                lo: bx.lo.clone(),
                hi: bx.hi.clone(),
                closure: *closure,
            })
            .collect(),
        outside: r.outside.iter().map(BoxJson::of).collect(),
        boundary: r.boundary.iter().map(BoxJson::of).collect(),
        stats: StatsJson::of(&r.stats),
    }
}

/// Region boxes as CSV: kind, then lo/hi per parameter, full round-trip
/// precision.
pub fn region_to_csv(r: &RegionApprox) -> String {
    let mut out = String::from("kind");
    for p in &r.params {
        out.push_str(&format!(",{p}_lo,{p}_hi"));
    }
    out.push('\n');
    let mut push = |kind: &str, b: &ParamBox| {
        out.push_str(kind);
        for i in 0..b.dim() {
            out.push_str(&format!(",{},{}", b.lo[i], b.hi[i]));
        }
        out.push('\n');
    };
    for b in &r.inside {
        push("inside", &b.bx);
    }
    for b in &r.outside {
        push("outside", b);
    }
    for b in &r.boundary {
        push("boundary", b);
    }
    out
}

/// Trajectory CSV: time, named states, named inputs, violated-limit names
/// joined by `;`. Numbers use Rust's shortest round-trip formatting.
pub fn trajectory_to_csv(
    traj: &Trajectory,
    state_names: &[&str],
    input_names: &[&str],
) -> String {
    let mut out = String::from("t");
    for s in state_names {
        out.push_str(&format!(",{s}"));
    }
    for u in input_names {
        out.push_str(&format!(",{u}"));
    }
    out.push_str(",violations\n");
    for (k, t) in traj.times.iter().enumerate() {
        out.push_str(&t.to_string());
        for v in &traj.states[k] {
            out.push_str(&format!(",{v}"));
        }
        for v in &traj.inputs[k] {
            out.push_str(&format!(",{v}"));
        }
        out.push(',');
        out.push_str(&traj.violations[k].join(";"));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViolationJson {
    pub name: String,
    pub first_time: f64,
    pub worst_excess: f64,
    pub duration: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditJson {
    pub version: u32,
    pub clean: bool,
    pub violations: Vec<ViolationJson>,
}

pub fn audit_to_json(summaries: &[ViolationSummary]) -> AuditJson {
    AuditJson {
        version: SYSTEM_SCHEMA_VERSION,
        clean: summaries.is_empty(),
        violations: summaries
            .iter()
            .map(|v| ViolationJson {
                name: v.name.clone(),
                first_time: v.first_time,
                worst_excess: v.worst_excess,
                duration: v.duration,
            })
            .collect(),
    }
}

/// Per-relation verdicts of a membership check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckJson {
    pub version: u32,
    pub feasible: bool,
    pub box_violations: Vec<String>,
    pub relations: Vec<CheckRelationJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRelationJson {
    pub name: String,
    pub value: f64,
    pub satisfied: bool,
}
