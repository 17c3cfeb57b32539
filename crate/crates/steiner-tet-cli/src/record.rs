//! Result serialization: the structured records every command emits.
//! Angles are converted to degrees and rounded to six decimals at this
//! layer; lengths and coordinates keep full precision.

use serde::Serialize;
use steiner_tet::degeneracy::DegeneracyReport;
use steiner_tet::geom::FrameConfig;
use steiner_tet::{FtSolution, OracleResult, Point3, SkewFrame, SimpsonSolution, TwistReport};

pub fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

pub fn deg6(rad: f64) -> f64 {
    round6(rad.to_degrees())
}

fn point(p: Point3) -> [f64; 3] {
    [p.x, p.y, p.z]
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameRecord {
    pub h: f64,
    pub phi_deg: f64,
    pub k1: f64,
    pub k2: f64,
    pub a12: f64,
    pub a34: f64,
    pub m12: f64,
    pub m34: f64,
    pub config: &'static str,
    pub intersecting: bool,
}

impl FrameRecord {
    pub fn from_frame(f: &SkewFrame) -> Self {
        FrameRecord {
            h: f.h,
            phi_deg: deg6(f.phi),
            k1: f.k1,
            k2: f.k2,
            a12: f.a12,
            a34: f.a34,
            m12: f.m12,
            m34: f.m34,
            config: match f.config {
                FrameConfig::BothFeetOutsideBehind => "both_feet_outside_behind",
                FrameConfig::FootInside12 => "foot_inside_12",
                FrameConfig::FootInside34 => "foot_inside_34",
                FrameConfig::BothInside => "both_inside",
                FrameConfig::Mixed => "mixed",
            },
            intersecting: f.intersecting,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IneqRecordOut {
    pub label: &'static str,
    pub query_vertex: String,
    /// `null` when the constraint is vacuous for this query point.
    pub lhs: Option<f64>,
    /// `null` when the cone admits no query point (non-obtuse node angle).
    pub rhs: Option<f64>,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegeneracyOut {
    pub overall: bool,
    pub records: Vec<IneqRecordOut>,
}

impl DegeneracyOut {
    pub fn from_report(r: &DegeneracyReport) -> Self {
        DegeneracyOut {
            overall: r.overall,
            records: r
                .records
                .iter()
                .map(|rec| IneqRecordOut {
                    label: rec.label.as_str(),
                    query_vertex: format!("A{}", rec.query_vertex + 1),
                    lhs: rec.lhs.is_finite().then_some(rec.lhs),
                    rhs: rec.rhs.is_finite().then_some(rec.rhs),
                    satisfied: rec.satisfied,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NodesRecord {
    pub o12: [f64; 3],
    pub o34: [f64; 3],
    pub t12_point: [f64; 3],
    pub t34_point: [f64; 3],
    pub cost: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwistOut {
    pub phi12_deg: f64,
    pub phi34_deg: f64,
    pub omega_deg: f64,
    pub simpson_length: f64,
    pub special_case: &'static str,
}

impl TwistOut {
    pub fn from_report(t: &TwistReport) -> Self {
        TwistOut {
            phi12_deg: deg6(t.phi12),
            phi34_deg: deg6(t.phi34),
            omega_deg: deg6(t.omega),
            simpson_length: t.simpson_length,
            special_case: t.special_case.as_str(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleOut {
    pub o12: [f64; 3],
    pub o34: [f64; 3],
    pub cost: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost_delta_rel: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_delta: Option<f64>,
}

impl OracleOut {
    pub fn new(r: &OracleResult) -> Self {
        OracleOut {
            o12: point(r.o12),
            o34: point(r.o34),
            cost: r.cost,
            iterations: r.iterations,
            gradient_norm: r.gradient_norm,
            degenerate: r.degenerate,
            cost_delta_rel: None,
            node_delta: None,
        }
    }

    pub fn with_comparison(mut self, construction_cost: f64, o12: Point3, o34: Point3) -> Self {
        self.cost_delta_rel = Some((construction_cost - self.cost).abs() / self.cost.abs());
        let d12 = o12.distance(Point3::new(self.o12[0], self.o12[1], self.o12[2]));
        let d34 = o34.distance(Point3::new(self.o34[0], self.o34[1], self.o34[2]));
        self.node_delta = Some(d12.max(d34));
        self
    }
}

/// The full record the `solve` command emits (one per instance in batch
/// mode).
#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub id: String,
    pub pairing: &'static str,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degeneracy: Option<DegeneracyOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t12: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t34: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<NodesRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<(f64, f64)>>,
}

impl ResultRecord {
    pub fn empty(id: String, pairing: &'static str) -> Self {
        ResultRecord {
            id,
            pairing,
            status: "ok".to_string(),
            error: None,
            frame: None,
            degeneracy: None,
            t12: None,
            t34: None,
            iterations: None,
            nodes: None,
            twist: None,
            oracle: None,
            trace: None,
        }
    }

    pub fn fill_solution(&mut self, sol: &SimpsonSolution) {
        self.t12 = Some(sol.t12);
        self.t34 = Some(sol.t34);
        self.iterations = Some(sol.iterations);
        if let Some(n) = &sol.nodes {
            self.nodes = Some(NodesRecord {
                o12: point(n.o12),
                o34: point(n.o34),
                t12_point: point(sol.t12_point),
                t34_point: point(sol.t34_point),
                cost: n.cost,
            });
        }
        self.trace = sol.trace.clone();
    }

    /// One CSV line in the batch schema
    /// `id,H,phi_deg,t12,t34,cost,omega_deg,status`.
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.id,
            opt(self.frame.as_ref().map(|f| f.h)),
            opt(self.frame.as_ref().map(|f| f.phi_deg)),
            opt(self.t12),
            opt(self.t34),
            opt(self.nodes.as_ref().map(|n| n.cost)),
            opt(self.twist.as_ref().map(|t| t.omega_deg)),
            self.status
        )
    }
}

pub const CSV_HEADER: &str = "id,H,phi_deg,t12,t34,cost,omega_deg,status";

/// The `ft` command record.
#[derive(Debug, Clone, Serialize)]
pub struct FtRecord {
    pub id: String,
    pub status: String,
    pub t12: f64,
    pub t34: f64,
    pub gamma_deg: f64,
    pub f: [f64; 3],
    pub cost: f64,
    pub iterations: usize,
    pub residuals: (f64, f64, f64),
}

impl FtRecord {
    pub fn new(id: String, sol: &FtSolution) -> Self {
        FtRecord {
            id,
            status: "ok".to_string(),
            t12: sol.t12,
            t34: sol.t34,
            gamma_deg: deg6(sol.gamma),
            f: point(sol.point.expect("recovered point")),
            cost: sol.cost.expect("recovered cost"),
            iterations: sol.iterations,
            residuals: sol.residuals,
        }
    }
}
