//! File formats.
//!
//! Space: `{"labels": [...], "dist": [[...]], "basepoints": [...]}` (labels
//! and basepoints optional), or a CSV matrix whose first row and column hold
//! the labels. Self-map: `{"space": <space object or path>, "map": [...],
//! "basepoint": k}`. Map: `{"map": [...]}` or a bare array. Orbit:
//! `{"offsets": [n_min, n_max], "points": [...]}`. Scale: `{"values": [...]}`
//! or `{"constant": c}`.

use std::fs;
use std::path::{Path, PathBuf};

use ghdyn_core::{
    FiniteMetricSpace, MapTable, PointedSpace, PseudoOrbit, ScaleFunction, SelfMapSystem,
};
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::report::{CliError, InputDigest};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    labels: Option<Vec<String>>,
    dist: Vec<Vec<f64>>,
    #[serde(default)]
    basepoints: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SpaceRef {
    Path(String),
    Inline(SpaceFile),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    space: SpaceRef,
    map: Vec<usize>,
    basepoint: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MapFile {
    Bare(Vec<usize>),
    Object { map: Vec<usize> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitFile {
    offsets: [i64; 2],
    points: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ScaleFile {
    Values { values: Vec<f64> },
    Constant { constant: f64 },
}

/// A validated space with whatever basepoints its file declared.
#[derive(Debug, Clone)]
pub struct LoadedSpace {
    pub space: FiniteMetricSpace,
    pub basepoints: Vec<usize>,
}

impl LoadedSpace {
    pub fn pointed(&self, what: &str) -> Result<PointedSpace, CliError> {
        if self.basepoints.is_empty() {
            return Err(CliError::precondition(format!(
                "{what} declares no basepoint"
            )));
        }
        Ok(PointedSpace::new(
            self.space.clone(),
            self.basepoints.clone(),
        )?)
    }
}

/// Reads input files and records their digests in order.
#[derive(Debug, Default)]
pub struct Inputs {
    pub digests: Vec<InputDigest>,
}

impl Inputs {
    pub fn read(&mut self, role: &str, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        self.digests.push(InputDigest {
            role: role.to_string(),
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        Ok(bytes)
    }

    pub fn space(&mut self, role: &str, path: &Path, tol: f64) -> Result<LoadedSpace, CliError> {
        let bytes = self.read(role, path)?;
        if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
        {
            let (labels, dist) = parse_csv(&bytes, path)?;
            let space = FiniteMetricSpace::new(labels, &dist, tol)?;
            return Ok(LoadedSpace {
                space,
                basepoints: Vec::new(),
            });
        }
        let file: SpaceFile = parse_json(&bytes, path)?;
        build_space(file, tol)
    }

    pub fn system(&mut self, role: &str, path: &Path, tol: f64) -> Result<SelfMapSystem, CliError> {
        let bytes = self.read(role, path)?;
        let file: SystemFile = parse_json(&bytes, path)?;
        let loaded = match file.space {
            SpaceRef::Inline(s) => build_space(s, tol)?,
            SpaceRef::Path(p) => {
                let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
                self.space(&format!("{role}.space"), &base.join(p), tol)?
            }
        };
        let n = loaded.space.len();
        let map = MapTable::new(n, file.map)?;
        let basepoint = file
            .basepoint
            .or_else(|| loaded.basepoints.first().copied());
        Ok(SelfMapSystem::new(loaded.space, map, basepoint)?)
    }

    pub fn map(&mut self, role: &str, path: &Path, cod_size: usize) -> Result<MapTable, CliError> {
        let bytes = self.read(role, path)?;
        let image = match parse_json(&bytes, path)? {
            MapFile::Bare(m) | MapFile::Object { map: m } => m,
        };
        Ok(MapTable::new(cod_size, image)?)
    }

    pub fn orbit(&mut self, role: &str, path: &Path) -> Result<PseudoOrbit, CliError> {
        let bytes = self.read(role, path)?;
        let file: OrbitFile = parse_json(&bytes, path)?;
        Ok(PseudoOrbit::new(
            file.offsets[0],
            file.offsets[1],
            file.points,
        )?)
    }

    /// A scale given either as a number on the command line or as a file.
    pub fn scale(&mut self, role: &str, arg: &str, n: usize) -> Result<ScaleFunction, CliError> {
        if let Ok(c) = arg.parse::<f64>() {
            return Ok(ScaleFunction::constant(n, c)?);
        }
        let path = PathBuf::from(arg);
        let bytes = self.read(role, &path)?;
        let scale = match parse_json(&bytes, &path)? {
            ScaleFile::Values { values } => ScaleFunction::new(values)?,
            ScaleFile::Constant { constant } => ScaleFunction::constant(n, constant)?,
        };
        if scale.len() != n {
            return Err(CliError::precondition(format!(
                "scale in {} has {} values for {n} points",
                path.display(),
                scale.len()
            )));
        }
        Ok(scale)
    }
}

fn build_space(file: SpaceFile, tol: f64) -> Result<LoadedSpace, CliError> {
    let labels = file
        .labels
        .unwrap_or_else(|| (0..file.dist.len()).map(|k| k.to_string()).collect());
    let space = FiniteMetricSpace::new(labels, &file.dist, tol)?;
    for &b in &file.basepoints {
        space.check_index(b)?;
    }
    Ok(LoadedSpace {
        space,
        basepoints: file.basepoints,
    })
}

fn parse_json<T: for<'de> Deserialize<'de>>(bytes: &[u8], path: &Path) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn parse_csv(bytes: &[u8], path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let bad = |msg: String| CliError::io(format!("{}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut dist = Vec::with_capacity(labels.len());
    for (r, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        if rec.get(0) != labels.get(r).map(String::as_str) {
            return Err(bad(format!(
                "row {} label does not match column label",
                r + 1
            )));
        }
        let row = rec
            .iter()
            .skip(1)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| bad(format!("row {}: {v:?}: {e}", r + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        dist.push(row);
    }
    Ok((labels, dist))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn space_json(space: &FiniteMetricSpace, basepoints: &[usize]) -> Value {
    json!({
        "labels": space.labels(),
        "dist": space.matrix(),
        "basepoints": basepoints,
    })
}

pub fn system_json(f: &SelfMapSystem) -> Value {
    let bases: Vec<usize> = f.basepoint.into_iter().collect();
    let mut v = json!({
        "space": space_json(&f.space, &bases),
        "map": f.map.image(),
    });
    if let Some(b) = f.basepoint {
        v["basepoint"] = json!(b);
    }
    v
}

pub fn write_json(path: &Path, value: &Value) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    fs::write(path, &text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    Ok(sha256_hex(text.as_bytes()))
}
