//! The central construction: solve the two-equation system for the
//! Simpson-line intercepts by fixed-point alternation, recover the two
//! interior nodes on that line, and assemble the weighted tree.
//!
//! With S(t) = sqrt(h^2 + t^2 sin^2 phi), the system reads
//!
//! ```text
//! (t34 - t12 cos phi) / S(t12) = (h34' - t34) / r34
//! (t12 - t34 cos phi) / S(t34) = (h12' - t12) / r12
//! ```
//!
//! where (r, h') are the auxiliary-triangle altitude and foot offset of each
//! edge. Each equation is linear in its left-hand intercept, so solving the
//! first for t34 and the second for t12 yields the two maps alternated by
//! the solver. Equal weights reduce (r, h') to ((sqrt(3)/2) a, m), the
//! unweighted system.

use crate::equilibrium::{melzak_quantities, WeightSystem};
use crate::error::{Error, Result};
use crate::geom::{Point3, SkewFrame, TetInstance};
use crate::oracle::weighted_median;

/// Default relative convergence tolerance of the intercept iteration.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// The two closed-form update maps of the intercept system.
#[derive(Debug, Clone, Copy)]
pub struct SimpsonMaps {
    pub r12: f64,
    pub h12_prime: f64,
    pub r34: f64,
    pub h34_prime: f64,
    h_sq: f64,
    cos_phi: f64,
    sin_sq_phi: f64,
}

impl SimpsonMaps {
    fn s(&self, t: f64) -> f64 {
        (self.h_sq + t * t * self.sin_sq_phi).sqrt()
    }

    /// t34 as a function of t12 (first equation solved for t34).
    pub fn f34(&self, t12: f64) -> f64 {
        let s = self.s(t12);
        (self.h34_prime * s + self.r34 * t12 * self.cos_phi) / (self.r34 + s)
    }

    /// t12 as a function of t34 (second equation solved for t12).
    pub fn f12(&self, t34: f64) -> f64 {
        let s = self.s(t34);
        (self.h12_prime * s + self.r12 * t34 * self.cos_phi) / (self.r12 + s)
    }

    /// Residuals of the two equations in their original form.
    pub fn residuals(&self, t12: f64, t34: f64) -> (f64, f64) {
        let r15 = (t34 - t12 * self.cos_phi) / self.s(t12)
            - (self.h34_prime - t34) / self.r34;
        let r16 = (t12 - t34 * self.cos_phi) / self.s(t34)
            - (self.h12_prime - t12) / self.r12;
        (r15, r16)
    }
}

/// Builds the update maps from the frame and weights.
pub fn fixed_point_maps(frame: &SkewFrame, w: &WeightSystem) -> Result<SimpsonMaps> {
    // Edge (A1, A2): near vertex A1 carries b1; edge (A4, A3): near vertex
    // A4 carries b4.
    let m12 = melzak_quantities(frame.a12, frame.k1, w.b2, w.b1, w.b_st)?;
    let m34 = melzak_quantities(frame.a34, frame.k2, w.b3, w.b4, w.b_st)?;
    Ok(SimpsonMaps {
        r12: m12.r,
        h12_prime: m12.h_prime,
        r34: m34.r,
        h34_prime: m34.h_prime,
        h_sq: frame.h * frame.h,
        cos_phi: frame.phi.cos(),
        sin_sq_phi: frame.phi.sin().powi(2),
    })
}

/// Where the intercept iteration starts.
#[derive(Debug, Clone, Copy, Default)]
pub enum StartPoint {
    /// The midpoint offset m12 (the default).
    #[default]
    Midpoint,
    /// The foot offset k1 (the unweighted literature variant).
    FootOffset,
    /// An explicit t12 value.
    Value(f64),
}

/// Solver knobs for [`solve_simpson_with`].
#[derive(Debug, Clone, Copy)]
pub struct SimpsonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub start: StartPoint,
    pub record_trace: bool,
}

impl Default for SimpsonOptions {
    fn default() -> Self {
        SimpsonOptions {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            start: StartPoint::Midpoint,
            record_trace: false,
        }
    }
}

/// The two recovered interior nodes plus the tree cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinerNodes {
    pub o12: Point3,
    pub o34: Point3,
    pub cost: f64,
}

/// Converged Simpson-line data. `nodes` is `None` until
/// [`recover_nodes`] runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpsonSolution {
    /// Intercept on the first t-axis (line A1A2).
    pub t12: f64,
    /// Intercept on the second t-axis (line A4A3).
    pub t34: f64,
    /// The crossing points in 3-space.
    pub t12_point: Point3,
    pub t34_point: Point3,
    pub iterations: usize,
    /// Final residuals of the two intercept equations.
    pub residuals: (f64, f64),
    /// (t12, t34) iterate history when requested.
    pub trace: Option<Vec<(f64, f64)>>,
    pub nodes: Option<SteinerNodes>,
}

/// Runs the alternating fixed-point iteration from `t12(0) = m12` with the
/// default tolerances.
pub fn solve_simpson(
    frame: &SkewFrame,
    w: &WeightSystem,
    tol: f64,
    max_iter: usize,
) -> Result<SimpsonSolution> {
    solve_simpson_with(frame, w, &SimpsonOptions { tol, max_iter, ..Default::default() })
}

/// Runs the alternating fixed-point iteration with explicit options.
pub fn solve_simpson_with(
    frame: &SkewFrame,
    w: &WeightSystem,
    opts: &SimpsonOptions,
) -> Result<SimpsonSolution> {
    w.check_feasible()?;
    let maps = fixed_point_maps(frame, w)?;
    let scale = frame.scale();

    let mut t12 = match opts.start {
        StartPoint::Midpoint => frame.m12,
        StartPoint::FootOffset => frame.k1,
        StartPoint::Value(v) => v,
    };
    let mut t34 = maps.f34(t12);
    let mut trace = opts.record_trace.then(|| vec![(t12, t34)]);

    for iteration in 1..=opts.max_iter {
        let t34_next = maps.f34(t12);
        let t12_next = maps.f12(t34_next);
        let delta = (t12_next - t12).abs().max((t34_next - t34).abs());
        t12 = t12_next;
        t34 = t34_next;
        if let Some(tr) = trace.as_mut() {
            tr.push((t12, t34));
        }
        if delta < opts.tol * scale {
            return Ok(SimpsonSolution {
                t12,
                t34,
                t12_point: frame.point_on_edge12(t12),
                t34_point: frame.point_on_edge34(t34),
                iterations: iteration,
                residuals: maps.residuals(t12, t34),
                trace,
                nodes: None,
            });
        }
    }

    let (r15, r16) = maps.residuals(t12, t34);
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual: r15.abs().max(r16.abs()),
        trace: trace.unwrap_or_default(),
    })
}

/// Weighted tree cost for a given node pair.
pub fn tree_cost(tet: &TetInstance, w: &WeightSystem, o12: Point3, o34: Point3) -> f64 {
    let t = tet.canonicalized();
    w.b1 * t.a1().distance(o12)
        + w.b2 * t.a2().distance(o12)
        + w.b3 * t.a3().distance(o34)
        + w.b4 * t.a4().distance(o34)
        + w.b_st * o12.distance(o34)
}

/// Recovers the two nodes on the Simpson segment: O12 is the planar
/// weighted Fermat-Torricelli point of (A1, A2, T34) and O34 of
/// (A3, A4, T12). Both must land on the segment [T12, T34]; failure means
/// the instance admits no two interior nodes for this pairing (a case the
/// non-degeneracy check flags up front).
pub fn recover_nodes(
    tet: &TetInstance,
    frame: &SkewFrame,
    w: &WeightSystem,
    sol: &SimpsonSolution,
) -> Result<SimpsonSolution> {
    let t = tet.canonicalized();
    let scale = frame.scale();
    let median_tol = 1e-11 * (w.b1 + w.b2 + w.b3 + w.b4 + w.b_st);

    let o12 = weighted_median(
        &[t.a1(), t.a2(), sol.t34_point],
        &[w.b1, w.b2, w.b_st],
        median_tol,
        200_000,
    )?;
    let o34 = weighted_median(
        &[t.a3(), t.a4(), sol.t12_point],
        &[w.b3, w.b4, w.b_st],
        median_tol,
        200_000,
    )?;

    // Betweenness on [T12, T34]: perpendicular offset and segment parameter.
    let seg = sol.t34_point - sol.t12_point;
    let len = seg.norm();
    if len < 1e-14 * scale {
        return Err(Error::NodeOffSegment {
            detail: "Simpson segment has zero length".to_string(),
        });
    }
    let axis = seg / len;
    for (name, o) in [("O12", o12), ("O34", o34)] {
        let d = o - sol.t12_point;
        let along = d.dot(axis);
        let perp = (d - axis * along).norm();
        if perp > 1e-9 * scale || !(-1e-9 * scale..=len + 1e-9 * scale).contains(&along) {
            return Err(Error::NodeOffSegment {
                detail: format!(
                    "{name} off the Simpson segment: perpendicular {perp:.3e}, parameter {:.6} of {len:.6}",
                    along
                ),
            });
        }
    }

    let cost = tree_cost(tet, w, o12, o34);
    let mut out = sol.clone();
    out.nodes = Some(SteinerNodes { o12, o34, cost });
    Ok(out)
}

/// One edge of the assembled tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEdge {
    /// Endpoint labels in {"A1", "A2", "A3", "A4", "O12", "O34"}.
    pub from: &'static str,
    pub to: &'static str,
    pub from_point: Point3,
    pub to_point: Point3,
    pub weight: f64,
    pub length: f64,
}

/// The five-edge weighted tree on the four terminals and two nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinerTree {
    pub edges: [TreeEdge; 5],
    pub cost: f64,
}

impl SteinerTree {
    /// Assembles the tree from a recovered solution. Node degree is three at
    /// each interior node by construction; the cost is the weighted length
    /// sum.
    pub fn assemble(tet: &TetInstance, w: &WeightSystem, nodes: &SteinerNodes) -> SteinerTree {
        let t = tet.canonicalized();
        let mk = |from: &'static str, to: &'static str, fp: Point3, tp: Point3, wt: f64| TreeEdge {
            from,
            to,
            from_point: fp,
            to_point: tp,
            weight: wt,
            length: fp.distance(tp),
        };
        let edges = [
            mk("A1", "O12", t.a1(), nodes.o12, w.b1),
            mk("A2", "O12", t.a2(), nodes.o12, w.b2),
            mk("A3", "O34", t.a3(), nodes.o34, w.b3),
            mk("A4", "O34", t.a4(), nodes.o34, w.b4),
            mk("O12", "O34", nodes.o12, nodes.o34, w.b_st),
        ];
        let cost = edges.iter().map(|e| e.weight * e.length).sum();
        SteinerTree { edges, cost }
    }
}
