use std::collections::BTreeMap;

use ghdyn_core::systems::SystemsError;
use ghdyn_core::{ApproxCertificate, DynError, GhError, MetricError, PointedError, StabilityError};
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1";

/// Process exit codes; a stable contract for scripts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Failure {
    Io,
    Precondition,
    Budget,
    Dynamical,
}

impl Failure {
    pub fn code(self) -> u8 {
        match self {
            Failure::Io => 1,
            Failure::Precondition => 2,
            Failure::Budget => 3,
            Failure::Dynamical => 4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    pub kind: Failure,
    pub exit_code: u8,
    pub message: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl CliError {
    pub fn new(kind: Failure, message: impl Into<String>) -> Self {
        Self {
            kind,
            exit_code: kind.code(),
            message: message.into(),
            details: Value::Null,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(Failure::Io, message)
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Self::new(Failure::Precondition, message)
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        let details = match &e {
            MetricError::TriangleViolation { i, j, k } => json!({ "triangle": [i, j, k] }),
            MetricError::AsymmetricMatrix { i, j, .. }
            | MetricError::DuplicatePoints { i, j, .. } => {
                json!({ "pair": [i, j] })
            }
            _ => Value::Null,
        };
        CliError::precondition(e.to_string()).with_details(details)
    }
}

impl From<GhError> for CliError {
    fn from(e: GhError) -> Self {
        match e {
            GhError::Metric(m) => m.into(),
            GhError::EnumerationBudgetExceeded { required, budget } => {
                CliError::new(Failure::Budget, e.to_string())
                    .with_details(json!({ "required": required, "budget": budget }))
            }
            other => CliError::precondition(other.to_string()),
        }
    }
}

impl From<PointedError> for CliError {
    fn from(e: PointedError) -> Self {
        match e {
            PointedError::Gh(g) => g.into(),
            PointedError::Metric(m) => m.into(),
            other => CliError::precondition(other.to_string()),
        }
    }
}

impl From<DynError> for CliError {
    fn from(e: DynError) -> Self {
        match e {
            DynError::Gh(g) => g.into(),
            DynError::Pointed(p) => p.into(),
            DynError::Metric(m) => m.into(),
            other => CliError::precondition(other.to_string()),
        }
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        let msg = e.to_string();
        match e {
            StabilityError::Dyn(d) => d.into(),
            StabilityError::Gh(g) => g.into(),
            StabilityError::NonUniqueShadowing { points } | StabilityError::NoTracer { points } => {
                CliError::new(Failure::Dynamical, msg).with_details(json!({ "points": points }))
            }
            StabilityError::PseudoOrbitViolation { q, n } => {
                CliError::new(Failure::Dynamical, msg).with_details(json!({ "q": q, "n": n }))
            }
            StabilityError::NotCertified { delta } => {
                CliError::new(Failure::Dynamical, msg).with_details(json!({ "delta": delta }))
            }
            StabilityError::NoSeparationWithinBudget { .. } => {
                CliError::new(Failure::Dynamical, msg)
            }
            _ => CliError::precondition(msg),
        }
    }
}

impl From<SystemsError> for CliError {
    fn from(e: SystemsError) -> Self {
        CliError::precondition(e.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedCertificate {
    pub role: String,
    #[serde(flatten)]
    pub certificate: ApproxCertificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct Params {
    pub tol: f64,
    pub eps_grid: String,
    pub max_enum: u64,
    pub restarts: usize,
    pub seed: u64,
    pub window: usize,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: &'static str,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub params: Params,
    pub result: Value,
    pub certificates: Vec<NamedCertificate>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<CliError>,
}

impl RunReport {
    pub fn exit_code(&self) -> u8 {
        self.error.as_ref().map_or(0, |e| e.exit_code)
    }
}
