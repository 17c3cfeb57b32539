//! Per-instance orchestration shared by the single-instance commands and
//! batch mode.

use steiner_tet::{
    check_nondegenerate, minimize_two_nodes, recover_ft_point, recover_nodes, skew_frame,
    solve_ft_system, solve_simpson_with, twist_angle, Error, Pairing, SimpsonOptions,
    TetInstance, WeightSystem,
};

use crate::instance::InstanceFile;
use crate::record::{DegeneracyOut, FrameRecord, FtRecord, OracleOut, ResultRecord, TwistOut};

/// Effective solver settings after merging defaults, instance fields, and
/// command-line flags (the flags win).
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub oracle: bool,
    pub restarts: usize,
    pub trace: bool,
    pub with_ft: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tol: steiner_tet::simpson::DEFAULT_TOL,
            max_iter: steiner_tet::simpson::DEFAULT_MAX_ITER,
            seed: 0,
            oracle: false,
            restarts: 8,
            trace: false,
            with_ft: false,
        }
    }
}

impl Settings {
    pub fn merged(
        inst: &InstanceFile,
        tol: Option<f64>,
        max_iter: Option<usize>,
        seed: Option<u64>,
    ) -> Self {
        let mut s = Settings::default();
        if let Some(t) = inst.tol {
            s.tol = t;
        }
        if let Some(m) = inst.max_iter {
            s.max_iter = m;
        }
        if let Some(sd) = inst.seed {
            s.seed = sd;
        }
        if let Some(t) = tol {
            s.tol = t;
        }
        if let Some(m) = max_iter {
            s.max_iter = m;
        }
        if let Some(sd) = seed {
            s.seed = sd;
        }
        s
    }
}

pub fn status_of(err: &Error) -> &'static str {
    match err {
        Error::InvalidInstance(_) => "invalid",
        Error::DegenerateEdge(_) => "degenerate_edge",
        Error::ParallelEdges => "parallel_edges",
        Error::InfeasibleWeights { .. } => "infeasible_weights",
        Error::NoConvergence { .. } => "no_convergence",
        Error::NodeOffSegment { .. } => "node_off_segment",
        Error::UndefinedTwist(_) => "undefined_twist",
        Error::DegenerateConfiguration(_) => "degenerate_configuration",
        Error::InconsistentSolution(_) => "inconsistent_solution",
    }
}

/// Full solve of one instance under one pairing. Failures are captured in
/// the record's status rather than returned, so batch rows are always
/// produced.
pub fn solve_record(tet: &TetInstance, id: String, settings: &Settings) -> ResultRecord {
    let mut rec = ResultRecord::empty(id, tet.pairing.as_str());
    let fail = |rec: &mut ResultRecord, e: &Error| {
        rec.status = status_of(e).to_string();
        rec.error = Some(e.to_string());
    };

    let w = match WeightSystem::from_weights(&tet.weights) {
        Ok(w) => w,
        Err(e) => {
            fail(&mut rec, &e);
            return rec;
        }
    };
    let frame = match skew_frame(tet) {
        Ok(f) => f,
        Err(e) => {
            fail(&mut rec, &e);
            return rec;
        }
    };
    rec.frame = Some(FrameRecord::from_frame(&frame));

    match check_nondegenerate(tet, &w) {
        Ok(report) => rec.degeneracy = Some(DegeneracyOut::from_report(&report)),
        Err(e) => {
            fail(&mut rec, &e);
            return rec;
        }
    }

    let opts = SimpsonOptions {
        tol: settings.tol,
        max_iter: settings.max_iter,
        record_trace: settings.trace,
        ..Default::default()
    };
    let sol = match solve_simpson_with(&frame, &w, &opts) {
        Ok(s) => s,
        Err(e) => {
            fail(&mut rec, &e);
            return rec;
        }
    };
    let sol = match recover_nodes(tet, &frame, &w, &sol) {
        Ok(s) => s,
        Err(e) => {
            rec.fill_solution(&sol);
            fail(&mut rec, &e);
            return rec;
        }
    };
    rec.fill_solution(&sol);

    match twist_angle(&frame, sol.t12, sol.t34) {
        Ok(t) => rec.twist = Some(TwistOut::from_report(&t)),
        Err(e) => {
            // The tree itself is fine; only the twist is undefined
            // (intersecting edge lines). Record and continue.
            rec.twist = None;
            if frame.intersecting {
                rec.error = Some(e.to_string());
            } else {
                fail(&mut rec, &e);
                return rec;
            }
        }
    }

    if settings.oracle {
        match minimize_two_nodes(tet, &w, settings.tol, 50_000, settings.restarts, settings.seed)
        {
            Ok(r) => {
                let nodes = sol.nodes.as_ref().expect("nodes recovered");
                rec.oracle = Some(
                    OracleOut::new(&r).with_comparison(nodes.cost, nodes.o12, nodes.o34),
                );
            }
            Err(e) => {
                fail(&mut rec, &e);
                return rec;
            }
        }
    }

    rec
}

/// The single-node pipeline (always unweighted distances).
pub fn ft_record(tet: &TetInstance, id: String, settings: &Settings) -> Result<FtRecord, Error> {
    let canonical = tet.canonicalized();
    let frame = skew_frame(&canonical)?;
    let sol = solve_ft_system(&frame, settings.tol, settings.max_iter)?;
    let sol = recover_ft_point(&frame, &canonical.vertices, &sol)?;
    Ok(FtRecord::new(id, &sol))
}

/// All three pairings of the same vertex set.
pub fn all_pairings(tet: &TetInstance) -> [TetInstance; 3] {
    let mk = |p: Pairing| TetInstance { pairing: p, ..*tet };
    [mk(Pairing::P12_34), mk(Pairing::P13_24), mk(Pairing::P14_23)]
}
