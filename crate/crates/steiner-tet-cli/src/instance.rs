//! Instance file schema and validation.

use serde::Deserialize;
use steiner_tet::{Pairing, Point3, TetInstance, Weights};

use crate::CliError;

fn default_weight() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSpec {
    #[serde(default = "default_weight")]
    pub b1: f64,
    #[serde(default = "default_weight")]
    pub b2: f64,
    #[serde(default = "default_weight")]
    pub b3: f64,
    #[serde(default = "default_weight")]
    pub b4: f64,
    #[serde(default = "default_weight")]
    pub b12: f64,
    #[serde(default = "default_weight")]
    pub b34: f64,
}

impl Default for WeightsSpec {
    fn default() -> Self {
        WeightsSpec { b1: 1.0, b2: 1.0, b3: 1.0, b4: 1.0, b12: 1.0, b34: 1.0 }
    }
}

/// One problem instance as read from disk.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default)]
    pub id: Option<String>,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default)]
    pub weights: WeightsSpec,
    #[serde(default)]
    pub pairing: Option<String>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::invalid(format!("instance JSON does not match the schema: {e}")))
    }

    /// Validates and converts into a solver instance.
    pub fn to_instance(&self) -> Result<TetInstance, CliError> {
        if self.vertices.len() != 4 {
            return Err(CliError::invalid(format!(
                "expected exactly 4 vertices, got {}",
                self.vertices.len()
            )));
        }
        let mut pts = [Point3::new(0.0, 0.0, 0.0); 4];
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != 3 {
                return Err(CliError::invalid(format!(
                    "vertex {} must have 3 coordinates, got {}",
                    i + 1,
                    v.len()
                )));
            }
            pts[i] = Point3::new(v[0], v[1], v[2]);
        }
        let w = Weights {
            b1: self.weights.b1,
            b2: self.weights.b2,
            b3: self.weights.b3,
            b4: self.weights.b4,
            b12: self.weights.b12,
            b34: self.weights.b34,
        };
        let pairing = match &self.pairing {
            None => Pairing::P12_34,
            Some(s) => Pairing::parse(s).ok_or_else(|| {
                CliError::invalid(format!(
                    "unknown pairing {s:?}; expected one of 12-34, 13-24, 14-23"
                ))
            })?,
        };
        TetInstance::new(pts, w, pairing).map_err(|e| CliError::invalid(e.to_string()))
    }

    pub fn id_or(&self, fallback: &str) -> String {
        self.id.clone().unwrap_or_else(|| fallback.to_string())
    }
}
