use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use ghdyn_core::systems::{
    doubling_map, make_circle, rotation, shifted_torus_automorphism, singleton, torus_automorphism,
    truncated_line, two_point_family,
};
use ghdyn_core::{
    build_conjugacy, c0_distance, gh0_distance, gh_exact, gh_hat_exact, gh_upper, is_gha,
    is_pointed_gha, pgh0_distance, pgh_distance, shadowing_points, stability_report,
    ApproxCertificate, ConjugacyParams, DistanceInterval, GhError, PointedSpace, PseudoOrbit,
    SelfMapSystem, StabilitySearch,
};
use serde_json::{json, Value};

use crate::io::{space_json, system_json, write_json, Inputs, LoadedSpace};
use crate::report::{CliError, Failure, NamedCertificate, Params, RunReport, SCHEMA_VERSION};
use crate::{Command, Common, DistanceKind};

type Outcome = Result<(Value, String), CliError>;

pub struct Context {
    common: Common,
    inputs: Inputs,
    extra: BTreeMap<String, Value>,
    certificates: Vec<NamedCertificate>,
    warnings: Vec<String>,
}

impl Context {
    pub fn new(common: Common) -> Self {
        Self {
            common,
            inputs: Inputs::default(),
            extra: BTreeMap::new(),
            certificates: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn certify(&mut self, role: &str, cert: ApproxCertificate) {
        self.certificates.push(NamedCertificate {
            role: role.into(),
            certificate: cert,
        });
    }

    fn max_enum(&self) -> u128 {
        self.common.max_enum as u128
    }

    /// `is_gha` needs a positive ε; a zero distance is certified at `tol`.
    fn cert_eps(&self, v: f64) -> f64 {
        if v > 0.0 {
            v
        } else {
            self.common.tol.max(f64::MIN_POSITIVE)
        }
    }

    fn grid(&self) -> Result<Vec<f64>, CliError> {
        let g = self.common.eps_grid.trim();
        if g.eq_ignore_ascii_case("critical") || g.is_empty() {
            return Ok(Vec::new());
        }
        g.split(',')
            .map(|v| match v.trim().parse::<f64>() {
                Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
                _ => Err(CliError::precondition(format!(
                    "--eps-grid: {v:?} is not a positive number"
                ))),
            })
            .collect()
    }

    pub fn finish(self, command: &str, outcome: Outcome) -> (RunReport, String) {
        let c = self.common;
        let params = Params {
            tol: c.tol,
            eps_grid: c.eps_grid,
            max_enum: c.max_enum,
            restarts: c.restarts,
            seed: c.seed,
            window: c.window,
            extra: self.extra,
        };
        let (result, error, mut summary) = match outcome {
            Ok((v, s)) => (v, None, s),
            Err(e) => {
                let s = format!("error (exit {}): {}", e.exit_code, e.message);
                (Value::Null, Some(e), s)
            }
        };
        if !self.warnings.is_empty() {
            summary.push_str(&format!(" [{} warning(s)]", self.warnings.len()));
        }
        let report = RunReport {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs: self.inputs.digests,
            params,
            result,
            certificates: self.certificates,
            warnings: self.warnings,
            error,
        };
        (report, format!("ghdyn {command}: {summary}"))
    }
}

pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate { .. } => "validate",
        Command::Distance { .. } => "distance",
        Command::Shadow { .. } => "shadow",
        Command::Conjugacy { .. } => "conjugacy",
        Command::Demo { .. } => "demo",
    }
}

pub fn run(cmd: &Command, ctx: &mut Context) -> Outcome {
    match cmd {
        Command::Validate { space } => validate(ctx, space),
        Command::Distance {
            kind,
            inputs,
            set_a,
            set_b,
        } => distance(ctx, *kind, inputs, set_a, set_b),
        Command::Shadow { system, orbit, eps } => shadow(ctx, system, orbit, eps),
        Command::Conjugacy {
            f,
            g,
            j,
            delta,
            eps,
            eps_bar,
            i,
            out_h,
        } => {
            ctx.extra.insert("delta".into(), json!(delta));
            ctx.extra.insert("eps".into(), json!(eps));
            ctx.extra.insert("eps_bar".into(), json!(eps_bar));
            conjugacy(
                ctx,
                f,
                g,
                j,
                delta,
                eps,
                *eps_bar,
                i.as_deref(),
                out_h.as_deref(),
            )
        }
        Command::Demo {
            name,
            n,
            shift,
            radius,
            step,
            out_dir,
        } => {
            ctx.extra.insert("name".into(), json!(name));
            ctx.extra.insert("n".into(), json!(n));
            ctx.extra.insert("shift".into(), json!(shift));
            ctx.extra.insert("radius".into(), json!(radius));
            ctx.extra.insert("step".into(), json!(step));
            ctx.extra
                .insert("out_dir".into(), json!(out_dir.display().to_string()));
            demo(ctx, name, *n, shift.as_deref(), *radius, *step, out_dir)
        }
    }
}

fn validate(ctx: &mut Context, path: &Path) -> Outcome {
    let s = ctx.inputs.space("space", path, ctx.common.tol)?;
    let result = json!({
        "valid": true,
        "points": s.space.len(),
        "diameter": s.space.diameter(),
        "separation": s.space.separation(),
        "basepoints": s.basepoints,
    });
    Ok((result, format!("valid metric on {} points", s.space.len())))
}

fn two(kind: DistanceKind, inputs: &[PathBuf]) -> Result<(&Path, &Path), CliError> {
    match inputs {
        [a, b] => Ok((a, b)),
        _ => Err(CliError::precondition(format!(
            "{} takes two input files",
            kind.to_possible_value()
                .expect("no skipped variants")
                .get_name()
        ))),
    }
}

fn parse_set(arg: &Option<String>, flag: &str) -> Result<Vec<usize>, CliError> {
    let s = arg
        .as_deref()
        .ok_or_else(|| CliError::precondition(format!("hausdorff needs {flag}")))?;
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| CliError::precondition(format!("{flag}: bad index {v:?}")))
        })
        .collect()
}

fn interval_summary(d: &DistanceInterval) -> String {
    if d.lower == d.upper {
        format!("distance {}", d.upper)
    } else {
        format!("distance in ({}, {}]", d.lower, d.upper)
    }
}

fn gap_warning(ctx: &mut Context, d: &DistanceInterval) {
    if !d.monotone {
        ctx.warnings.push(format!(
            "feasibility is not monotone in eps: candidates {:?} above the upper bound are infeasible",
            d.gaps
        ));
    }
}

fn distance(
    ctx: &mut Context,
    kind: DistanceKind,
    inputs: &[PathBuf],
    set_a: &Option<String>,
    set_b: &Option<String>,
) -> Outcome {
    let tol = ctx.common.tol;
    let kind_name = kind.to_possible_value().expect("no skipped variants");
    ctx.extra.insert("kind".into(), json!(kind_name.get_name()));
    match kind {
        DistanceKind::Hausdorff => {
            let [path] = inputs else {
                return Err(CliError::precondition("hausdorff takes one space file"));
            };
            ctx.extra.insert("set_a".into(), json!(set_a));
            ctx.extra.insert("set_b".into(), json!(set_b));
            let s = ctx.inputs.space("space", path, tol)?.space;
            let a = s.set(parse_set(set_a, "--set-a")?)?;
            let b = s.set(parse_set(set_b, "--set-b")?)?;
            let v = s.hausdorff(&a, &b)?;
            Ok((json!({ "value": v }), format!("hausdorff distance {v}")))
        }
        DistanceKind::Gh | DistanceKind::GhHat => {
            let (pa, pb) = two(kind, inputs)?;
            let x = ctx.inputs.space("x", pa, tol)?.space;
            let y = ctx.inputs.space("y", pb, tol)?.space;
            if kind == DistanceKind::GhHat {
                let sol = gh_hat_exact(&x, &y, ctx.max_enum())?;
                let result = json!({
                    "value": sol.value,
                    "correspondence_distortion": sol.correspondence_distortion,
                    "forward": sol.forward.image(),
                    "backward": sol.backward.image(),
                });
                return Ok((result, format!("gh-hat distance {}", sol.value)));
            }
            let sol = match gh_exact(&x, &y, ctx.max_enum()) {
                Ok(sol) => sol,
                Err(e @ GhError::EnumerationBudgetExceeded { .. }) => {
                    let up = gh_upper(&x, &y, ctx.common.restarts, ctx.common.seed);
                    let mut err = CliError::from(e);
                    err.details["heuristic_upper"] = json!(up.value);
                    err.details["forward"] = json!(up.forward.image());
                    err.details["backward"] = json!(up.backward.image());
                    return Err(err);
                }
                Err(e) => return Err(e.into()),
            };
            let eps = ctx.cert_eps(sol.value);
            ctx.certify("forward", is_gha(&sol.forward, &x, &y, eps)?);
            ctx.certify("backward", is_gha(&sol.backward, &y, &x, eps)?);
            let result = json!({
                "value": sol.value,
                "forward_value": sol.forward_value,
                "backward_value": sol.backward_value,
                "forward": sol.forward.image(),
                "backward": sol.backward.image(),
            });
            Ok((result, format!("gh distance {}", sol.value)))
        }
        DistanceKind::Pgh => {
            let (pa, pb) = two(kind, inputs)?;
            let x = ctx.inputs.space("x", pa, tol)?.pointed("x")?;
            let y = ctx.inputs.space("y", pb, tol)?.pointed("y")?;
            let d = pgh_distance(&x, &y, &ctx.grid()?, ctx.max_enum())?;
            ctx.certify(
                "forward",
                is_pointed_gha(&d.forward, &x, &y, d.witness_eps)?,
            );
            ctx.certify(
                "backward",
                is_pointed_gha(&d.backward, &y, &x, d.witness_eps)?,
            );
            gap_warning(ctx, &d);
            let summary = format!("pointed {}", interval_summary(&d));
            Ok((serde_json::to_value(&d).expect("serializable"), summary))
        }
        DistanceKind::C0 | DistanceKind::Gh0 | DistanceKind::Pgh0 => {
            let (pa, pb) = two(kind, inputs)?;
            let f = ctx.inputs.system("f", pa, tol)?;
            let g = ctx.inputs.system("g", pb, tol)?;
            match kind {
                DistanceKind::C0 => {
                    let v = c0_distance(&f, &g)?;
                    Ok((json!({ "value": v }), format!("c0 distance {v}")))
                }
                DistanceKind::Gh0 => {
                    let d = gh0_distance(&f, &g, ctx.max_enum(), &ctx.grid()?)?;
                    ctx.certify(
                        "forward",
                        is_gha(&d.forward, &f.space, &g.space, d.witness_eps)?,
                    );
                    ctx.certify(
                        "backward",
                        is_gha(&d.backward, &g.space, &f.space, d.witness_eps)?,
                    );
                    gap_warning(ctx, &d);
                    let summary = format!("gh0 {}", interval_summary(&d));
                    Ok((serde_json::to_value(&d).expect("serializable"), summary))
                }
                _ => pgh0(ctx, &f, &g),
            }
        }
    }
}

fn pgh0(ctx: &mut Context, f: &SelfMapSystem, g: &SelfMapSystem) -> Outcome {
    let r = pgh0_distance(f, g, ctx.max_enum(), &ctx.grid()?)?;
    let d = &r.interval;
    let (x, y) = (f.pointed()?, g.pointed()?);
    ctx.certify(
        "forward",
        is_pointed_gha(&d.forward, &x, &y, d.witness_eps)?,
    );
    ctx.certify(
        "backward",
        is_pointed_gha(&d.backward, &y, &x, d.witness_eps)?,
    );
    gap_warning(ctx, d);
    for o in &r.out_of_window {
        ctx.warnings.push(format!(
            "out of window ({:?}): point {} leaves the ball, ambient distance used",
            o.direction, o.point
        ));
    }
    let summary = format!("pgh0 {}", interval_summary(d));
    Ok((serde_json::to_value(&r).expect("serializable"), summary))
}

fn one_sided_warning(ctx: &mut Context, f: &SelfMapSystem, what: &str) {
    if !f.bijective {
        ctx.warnings.push(format!(
            "one-sided mode: {what} is not bijective, orbits use nonnegative offsets only"
        ));
    }
}

fn clip(orbit: PseudoOrbit, window: usize, ctx: &mut Context) -> Result<PseudoOrbit, CliError> {
    let w = window as i64;
    let (lo, hi) = (orbit.n_min().max(-w), orbit.n_max().min(w));
    if (lo, hi) == (orbit.n_min(), orbit.n_max()) {
        return Ok(orbit);
    }
    ctx.warnings.push(format!(
        "orbit offsets [{}, {}] clipped to the window [{lo}, {hi}]",
        orbit.n_min(),
        orbit.n_max()
    ));
    let pts =
        orbit.points()[(lo - orbit.n_min()) as usize..=(hi - orbit.n_min()) as usize].to_vec();
    Ok(PseudoOrbit::new(lo, hi, pts)?)
}

fn shadow(ctx: &mut Context, system: &Path, orbit: &Path, eps: &str) -> Outcome {
    ctx.extra.insert("eps".into(), json!(eps));
    let f = ctx.inputs.system("system", system, ctx.common.tol)?;
    let orbit = ctx.inputs.orbit("orbit", orbit)?;
    let eps = ctx.inputs.scale("eps", eps, f.len())?;
    one_sided_warning(ctx, &f, "the system");
    let orbit = clip(orbit, ctx.common.window, ctx)?;
    let rep = shadowing_points(&orbit, &f, &eps)?;
    let tracers: Vec<usize> = rep.tracers.iter().collect();
    let labels: Vec<&str> = tracers.iter().map(|&p| f.space.label(p)).collect();
    let summary = match tracers.len() {
        0 => "no tracer".to_string(),
        1 => format!("unique tracer {}", labels[0]),
        k => format!("{k} tracers"),
    };
    let result = json!({
        "offsets": [orbit.n_min(), orbit.n_max()],
        "tracers": tracers,
        "tracer_labels": labels,
        "unique": rep.unique,
    });
    Ok((result, summary))
}

#[allow(clippy::too_many_arguments)]
fn conjugacy(
    ctx: &mut Context,
    f: &Path,
    g: &Path,
    j: &Path,
    delta: &str,
    eps: &str,
    eps_bar: Option<f64>,
    i: Option<&Path>,
    out_h: Option<&Path>,
) -> Outcome {
    let tol = ctx.common.tol;
    let f = ctx.inputs.system("f", f, tol)?;
    let g = ctx.inputs.system("g", g, tol)?;
    let j = ctx.inputs.map("j", j, f.len())?;
    let i = match i {
        Some(p) => Some(ctx.inputs.map("i", p, g.len())?),
        None => j.inverse(),
    };
    let params = ConjugacyParams {
        delta: ctx.inputs.scale("delta", delta, f.len())?,
        eps: ctx.inputs.scale("eps", eps, f.len())?,
        window: ctx.common.window,
        eps_bar,
    };
    one_sided_warning(ctx, &f, "f");
    one_sided_warning(ctx, &g, "g");
    let conj = build_conjugacy(&f, &g, &j, &params)?;
    ctx.warnings.extend(conj.warnings.iter().cloned());
    ctx.certify("h", conj.certificate.clone());
    let search = StabilitySearch {
        max_enum: ctx.max_enum(),
        i,
        j: Some(j),
    };
    let stability = stability_report(&f, &g, &params, &search)?;
    let mut result = json!({ "conjugacy": conj, "stability": stability });
    if let Some(path) = out_h {
        let digest = write_json(path, &json!({ "map": conj.h.image() }))?;
        result["h_file"] = json!({ "path": path.display().to_string(), "sha256": digest });
    }
    let summary = format!(
        "defect {}, max d(h, j) {}, eps_bar {}",
        conj.defect, conj.max_dist_to_j, conj.eps_bar
    );
    Ok((result, summary))
}

struct Emitter<'a> {
    dir: &'a Path,
    files: Vec<Value>,
}

impl Emitter<'_> {
    fn emit(&mut self, file: String, kind: &str, value: &Value) -> Result<(), CliError> {
        let path = self.dir.join(&file);
        let digest = write_json(&path, value)?;
        self.files
            .push(json!({ "path": path.display().to_string(), "kind": kind, "sha256": digest }));
        Ok(())
    }

    fn pointed(&mut self, stem: &str, p: &PointedSpace) -> Result<(), CliError> {
        self.emit(
            format!("{stem}.space.json"),
            "space",
            &space_json(&p.space, p.basepoints()),
        )
    }

    fn system(&mut self, stem: &str, f: &SelfMapSystem) -> Result<(), CliError> {
        let bases: Vec<usize> = f.basepoint.into_iter().collect();
        self.emit(
            format!("{stem}.space.json"),
            "space",
            &space_json(&f.space, &bases),
        )?;
        self.emit(format!("{stem}.system.json"), "system", &system_json(f))
    }
}

fn resolution(n: Option<f64>) -> Result<usize, CliError> {
    match n {
        Some(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => Ok(v as usize),
        Some(v) => Err(CliError::precondition(format!(
            "--n must be a whole number, got {v}"
        ))),
        None => Err(CliError::precondition("this demo needs --n")),
    }
}

fn parse_shift(shift: Option<&str>) -> Result<Vec<i64>, CliError> {
    shift
        .unwrap_or("0")
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<i64>()
                .map_err(|_| CliError::precondition(format!("--shift: bad value {v:?}")))
        })
        .collect()
}

fn demo(
    ctx: &mut Context,
    name: &str,
    n: Option<f64>,
    shift: Option<&str>,
    radius: Option<f64>,
    step: Option<f64>,
    out_dir: &Path,
) -> Outcome {
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(format!("{}: {e}", out_dir.display())))?;
    let mut em = Emitter {
        dir: out_dir,
        files: Vec::new(),
    };
    let mut info = json!({ "name": name });
    match name {
        "circle" => {
            let k = resolution(n)?;
            let s = LoadedSpace {
                space: make_circle(k)?,
                basepoints: vec![0],
            };
            em.pointed(&format!("circle-{k}"), &s.pointed("circle")?)?;
            info["points"] = json!(k);
        }
        "torus" | "shifted-torus" => {
            let k = resolution(n)?;
            let (stem, f) = if name == "torus" {
                (format!("torus-{k}"), torus_automorphism(k)?)
            } else {
                let &[a, b] = parse_shift(shift)?.as_slice() else {
                    return Err(CliError::precondition(
                        "--shift must be \"a,b\" for shifted-torus",
                    ));
                };
                (
                    format!("shifted-torus-{k}-{a}-{b}"),
                    shifted_torus_automorphism(k, (a, b))?,
                )
            };
            em.system(&stem, &f)?;
            info["points"] = json!(f.len());
            info["bijective"] = json!(f.bijective);
        }
        "circle-doubling" | "rotation" => {
            let k = resolution(n)?;
            let (stem, f) = if name == "rotation" {
                let &[s] = parse_shift(shift)?.as_slice() else {
                    return Err(CliError::precondition(
                        "--shift must be a single integer for rotation",
                    ));
                };
                let s = s.rem_euclid(k as i64) as usize;
                (format!("rotation-{k}-{s}"), rotation(k, s)?)
            } else {
                (format!("circle-doubling-{k}"), doubling_map(k)?)
            };
            one_sided_warning(ctx, &f, "the map");
            em.system(&stem, &f)?;
            info["points"] = json!(k);
            info["bijective"] = json!(f.bijective);
        }
        "two-point" => {
            let v = n.ok_or_else(|| CliError::precondition("two-point needs --n"))?;
            let p = two_point_family(v)?;
            em.pointed(&format!("two-point-{v}"), &p)?;
            info["points"] = json!(2);
        }
        "singleton" => {
            em.pointed("singleton", &singleton())?;
            info["points"] = json!(1);
        }
        "truncated-line" => {
            let (r, s) = match (radius, step) {
                (Some(r), Some(s)) => (r, s),
                _ => {
                    return Err(CliError::precondition(
                        "truncated-line needs --radius and --step",
                    ))
                }
            };
            let p = truncated_line(r, s)?;
            em.pointed(&format!("truncated-line-{r}-{s}"), &p)?;
            info["points"] = json!(p.space.len());
        }
        other => {
            return Err(CliError::new(
                Failure::Precondition,
                format!("unknown demo {other:?}"),
            ))
        }
    }
    let summary = format!("wrote {} file(s) to {}", em.files.len(), out_dir.display());
    info["files"] = Value::Array(em.files);
    Ok((info, summary))
}
