//! Command implementations: compile, region, check, simulate, envelope.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use beztraj_core::bezier::BezierCurve;
use beztraj_core::coeff::{rat_from_f64, Rat};
use beztraj_core::constraint::{bound_curve, compile, symbolic_control_points, ConstraintSystem};
use beztraj_core::envelope::{build_envelope, refine_envelope, Envelope};
use beztraj_core::flat::quad::quad_tilt_bound;
use beztraj_core::flat::vehicle::vehicle_input_curve;
use beztraj_core::region::{branch_and_prune, membership, sample_oracle};
use beztraj_core::sim::{
    audit, simulate_quad, simulate_vehicle, Channel, Grid, Limit, QuadGains, QuadLaw,
    QuadReference, Signal, Trajectory, VehicleLaw, QUAD_STATE,
};
use beztraj_core::sympoly::PolyExpr;

use crate::config::{load_config, CurveTemplate, ModelConfig, ProjectConfig, QuadModel, VehicleModel};
use crate::schema::{
    self, audit_to_json, region_to_csv, region_to_json, system_from_json, system_to_json,
    trajectory_to_csv, CheckJson, CheckRelationJson, SystemJson,
};
use crate::CliError;

fn write_out(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(path, content)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

fn to_pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Symbolic curve from a template: pins become rational constants, free
/// indices become parameters.
fn template_curve(t: &CurveTemplate) -> Result<BezierCurve<PolyExpr>, CliError> {
    let mut pinned: BTreeMap<usize, Rat> = BTreeMap::new();
    for (i, v) in t.pinned_map()? {
        pinned.insert(
            i,
            rat_from_f64(v).ok_or_else(|| CliError::config(format!("pin {i} not finite")))?,
        );
    }
    let pts = symbolic_control_points(&t.prefix, t.degree, &pinned);
    BezierCurve::new(pts, t.horizon).map_err(|e| CliError::config(e.to_string()))
}

fn free_bounds(t: &CurveTemplate) -> BTreeMap<String, (f64, f64)> {
    t.free_names()
        .into_iter()
        .map(|n| (n, t.param_box))
        .collect()
}

fn fixed_pins(t: &CurveTemplate) -> BTreeMap<String, Rat> {
    // pins are substituted at template construction, so nothing remains to
    // record; kept for the system file's provenance
    let _ = t;
    BTreeMap::new()
}

/// Build the constraint system of a config and the number of bounded
/// control points (double inequalities before tautology elimination).
pub fn build_system(cfg: &ProjectConfig) -> Result<(ConstraintSystem, usize), CliError> {
    match &cfg.model {
        ModelConfig::Vehicle(v) => build_vehicle_system(v),
        ModelConfig::Quad(q) => build_quad_system(q),
    }
}

fn build_vehicle_system(v: &VehicleModel) -> Result<(ConstraintSystem, usize), CliError> {
    let vxr = template_curve(&v.curve)?;
    let u = vehicle_input_curve(&vxr, &v.core_params())
        .map_err(|e| CliError::config(e.to_string()))?;
    let pairs = u.control_points().len();
    let rels = bound_curve(&u, "U", v.input_bounds.0, v.input_bounds.1, v.strict)
        .map_err(|e| CliError::config(e.to_string()))?;
    let sys = compile(rels, free_bounds(&v.curve), fixed_pins(&v.curve))
        .map_err(|e| CliError::config(e.to_string()))?;
    Ok((sys, pairs))
}

fn build_quad_system(q: &QuadModel) -> Result<(ConstraintSystem, usize), CliError> {
    let params = q.core_params();
    let s = q.core_sigmoid()?;
    let (xmin, xmax) =
        quad_tilt_bound(&s, &params).map_err(|e| CliError::config(e.to_string()))?;
    let x = template_curve(&q.x)?;
    let ddx = x
        .derivative(2)
        .and_then(|d| d.elevate_to(q.elevation))
        .map_err(|e| CliError::config(e.to_string()))?;
    let pairs = ddx.control_points().len();
    let rels = bound_curve(&ddx, "X", xmin, xmax, true)
        .map_err(|e| CliError::config(e.to_string()))?;
    let sys = compile(rels, free_bounds(&q.x), fixed_pins(&q.x))
        .map_err(|e| CliError::config(e.to_string()))?;
    Ok((sys, pairs))
}

pub fn cmd_compile(config: &Path, out_dir: &Path) -> Result<i32, CliError> {
    let cfg = load_config(config)?;
    let (sys, pairs) = build_system(&cfg)?;
    let json = system_to_json(&sys);
    let path = out_dir.join("system.json");
    write_out(&path, &to_pretty(&json))?;
    println!(
        "compiled {} relations ({pairs} bounded control points) over [{}]",
        sys.relations.len(),
        sys.free_params().join(", ")
    );
    println!("wrote {}", path.display());
    Ok(0)
}

pub fn load_system(path: &Path) -> Result<ConstraintSystem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let json: SystemJson = serde_json::from_str(&text)
        .map_err(|e| CliError::schema(format!("{}: {e}", path.display())))?;
    system_from_json(&json)
}

pub fn cmd_region(
    system: &Path,
    min_width: Option<f64>,
    budget: Option<usize>,
    seed: Option<u64>,
    out_dir: &Path,
) -> Result<i32, CliError> {
    let sys = load_system(system)?;
    let min_width = min_width.unwrap_or(1e-2);
    let budget = budget.unwrap_or(1_000_000);
    let region = branch_and_prune(&sys, min_width, budget)
        .map_err(|e| CliError::config(e.to_string()))?;
    let mut json = region_to_json(&region);
    if let Some(seed) = seed {
        let mc = sample_oracle(&sys, 100_000, seed)
            .map_err(|e| CliError::config(e.to_string()))?;
        json.stats.mc_fraction = Some(mc.fraction);
        json.stats.mc_samples = Some(mc.total);
    }
    write_out(&out_dir.join("region.json"), &to_pretty(&json))?;
    write_out(&out_dir.join("region_boxes.csv"), &region_to_csv(&region))?;
    println!(
        "region: {} inside / {} outside / {} boundary boxes, inside volume {} of {}{}",
        region.stats.inside_count,
        region.stats.outside_count,
        region.stats.boundary_count,
        region.stats.inside_volume,
        region.stats.domain_volume,
        if region.stats.partial {
            " (partial: budget exhausted)"
        } else {
            ""
        }
    );
    Ok(0)
}

pub fn parse_point(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| CliError::usage(format!("bad point component `{s}`: {e}")))
        })
        .collect()
}

pub fn cmd_check(system: &Path, point_text: &str) -> Result<i32, CliError> {
    let sys = load_system(system)?;
    let point = parse_point(point_text)?;
    let names = sys.free_params();
    if point.len() != names.len() {
        return Err(CliError::usage(format!(
            "point has {} components, system has {} free parameters [{}]",
            point.len(),
            names.len(),
            names.join(", ")
        )));
    }
    let rats: Vec<Rat> = point
        .iter()
        .map(|&v| rat_from_f64(v).ok_or_else(|| CliError::usage(format!("non-finite {v}"))))
        .collect::<Result<_, _>>()?;
    let rep = membership(&sys, &rats);
    let json = CheckJson {
        version: schema::SYSTEM_SCHEMA_VERSION,
        feasible: rep.feasible,
        box_violations: rep.box_violations.clone(),
        relations: rep
            .relations
            .iter()
            .map(|r| CheckRelationJson {
                name: r.name.clone(),
                value: r.value,
                satisfied: r.satisfied,
            })
            .collect(),
    };
    print!("{}", to_pretty(&json));
    Ok(if rep.feasible { 0 } else { 1 })
}

fn vehicle_limits(v: &VehicleModel) -> Vec<Limit> {
    vec![Limit {
        name: "u".to_string(),
        channel: Channel::Input(0),
        lo: v.input_bounds.0,
        hi: v.input_bounds.1,
    }]
}

fn quad_limits(q: &QuadModel) -> Vec<Limit> {
    let p = q.core_params();
    vec![
        Limit {
            name: "u1".to_string(),
            channel: Channel::Input(0),
            lo: 0.0,
            hi: p.thrust_max,
        },
        Limit {
            name: "u2".to_string(),
            channel: Channel::Input(1),
            lo: -p.torque_x_max,
            hi: p.torque_x_max,
        },
        Limit {
            name: "u3".to_string(),
            channel: Channel::Input(2),
            lo: -p.torque_y_max,
            hi: p.torque_y_max,
        },
        Limit {
            name: "u4".to_string(),
            channel: Channel::Input(3),
            lo: -p.torque_z_max,
            hi: p.torque_z_max,
        },
        Limit {
            name: "theta".to_string(),
            channel: Channel::State(6),
            lo: -p.theta_max,
            hi: p.theta_max,
        },
        Limit {
            name: "phi".to_string(),
            channel: Channel::State(8),
            lo: -p.phi_max,
            hi: p.phi_max,
        },
    ]
}

fn quad_reference(q: &QuadModel, x_points: Vec<f64>) -> Result<QuadReference, CliError> {
    let horizon = q.x.horizon;
    let x = BezierCurve::new(x_points, horizon).map_err(|e| CliError::config(e.to_string()))?;
    let y_points = if q.y_points.is_empty() {
        vec![0.0; q.x.degree + 1]
    } else {
        q.y_points.clone()
    };
    let y = BezierCurve::new(y_points, horizon).map_err(|e| CliError::config(e.to_string()))?;
    Ok(QuadReference {
        x: Signal::bezier(&x, 4).map_err(|e| CliError::config(e.to_string()))?,
        y: Signal::bezier(&y, 4).map_err(|e| CliError::config(e.to_string()))?,
        z: Signal::Sigmoid(q.core_sigmoid()?),
        psi: Signal::Constant(q.psi),
    })
}

fn run_simulation(
    cfg: &ProjectConfig,
    free_values: &[f64],
) -> Result<(Trajectory, Vec<Limit>, Vec<&'static str>, Vec<&'static str>), CliError> {
    let sim = &cfg.simulation;
    match &cfg.model {
        ModelConfig::Vehicle(v) => {
            let pts = v.curve.numeric_points(free_values)?;
            let vxr = BezierCurve::new(pts, v.curve.horizon)
                .map_err(|e| CliError::config(e.to_string()))?;
            let law = match sim.law.as_str() {
                "open" => VehicleLaw::OpenLoop,
                "closed" => VehicleLaw::ClosedLoop { lambda: sim.lambda },
                other => return Err(CliError::config(format!("unknown law `{other}`"))),
            };
            let grid = Grid::new(0.0, v.curve.horizon, sim.step)
                .map_err(|e| CliError::config(e.to_string()))?;
            let limits = vehicle_limits(v);
            let v0 = vxr.at_time(0.0).map_err(|e| CliError::config(e.to_string()))?
                + sim.ic_offset;
            let traj = simulate_vehicle(&v.core_params(), &vxr, law, v0, &grid, &limits)
                .map_err(|e| CliError::config(e.to_string()))?;
            Ok((traj, limits, vec!["Vx"], vec!["u"]))
        }
        ModelConfig::Quad(q) => {
            let pts = q.x.numeric_points(free_values)?;
            let refs = quad_reference(q, pts)?;
            let params = q.core_params();
            let law = match sim.law.as_str() {
                "open" => QuadLaw::OpenLoop,
                "closed" => QuadLaw::ClosedLoop(QuadGains::default()),
                other => return Err(CliError::config(format!("unknown law `{other}`"))),
            };
            let grid = Grid::new(0.0, q.x.horizon, sim.step)
                .map_err(|e| CliError::config(e.to_string()))?;
            let limits = quad_limits(q);
            let mut x0 = refs.state_ref(0.0, &params);
            for idx in [0, 2, 4, 10] {
                x0[idx] += sim.ic_offset;
            }
            let traj = simulate_quad(&params, &refs, law, x0, &grid, &limits)
                .map_err(|e| CliError::config(e.to_string()))?;
            Ok((
                traj,
                limits,
                QUAD_STATE.to_vec(),
                vec!["u1", "u2", "u3", "u4"],
            ))
        }
    }
}

pub fn cmd_simulate(
    config: &Path,
    point_text: Option<&str>,
    strict: bool,
    out_dir: &Path,
) -> Result<i32, CliError> {
    let cfg = load_config(config)?;
    let free_values = match point_text {
        Some(t) => parse_point(t)?,
        None => Vec::new(),
    };
    let (traj, limits, state_names, input_names) = run_simulation(&cfg, &free_values)?;
    let summaries = audit(&traj, &limits);
    write_out(
        &out_dir.join("trajectory.csv"),
        &trajectory_to_csv(&traj, &state_names, &input_names),
    )?;
    let audit_json = audit_to_json(&summaries);
    write_out(&out_dir.join("audit.json"), &to_pretty(&audit_json))?;
    if summaries.is_empty() {
        println!("audit clean over {} samples", traj.times.len());
        Ok(0)
    } else {
        for s in &summaries {
            println!(
                "violation {}: first at t={}, worst excess {}, duration {}",
                s.name, s.first_time, s.worst_excess, s.duration
            );
        }
        Ok(if strict { 1 } else { 0 })
    }
}

fn envelope_csv(env: &Envelope) -> String {
    let mut out = String::from("tau,lower,upper\n");
    for (lo, hi) in env.lower.vertices().iter().zip(env.upper.vertices()) {
        out.push_str(&format!("{},{},{}\n", lo.0, lo.1, hi.1));
    }
    out
}

pub fn cmd_envelope(
    config: &Path,
    point_text: Option<&str>,
    target_gap: Option<f64>,
    out_dir: &Path,
) -> Result<i32, CliError> {
    let cfg = load_config(config)?;
    let free_values = match point_text {
        Some(t) => parse_point(t)?,
        None => Vec::new(),
    };
    let template = match &cfg.model {
        ModelConfig::Vehicle(v) => &v.curve,
        ModelConfig::Quad(q) => &q.x,
    };
    let pts = template.numeric_points(&free_values)?;
    let curve = BezierCurve::new(pts, template.horizon)
        .map_err(|e| CliError::config(e.to_string()))?;
    let env = match target_gap {
        None => build_envelope(&curve),
        Some(gap) => refine_envelope(&curve, gap)
            .map_err(|e| CliError::config(e.to_string()))?,
    };
    write_out(&out_dir.join("envelope.csv"), &envelope_csv(&env))?;
    println!(
        "envelope with {} vertices, distance bound {}",
        env.lower.vertices().len(),
        env.dmax
    );
    Ok(0)
}

pub fn default_out_dir(given: Option<PathBuf>) -> PathBuf {
    given.unwrap_or_else(|| PathBuf::from("out"))
}
