//! Non-degeneracy certification: the inequality suite that guarantees both
//! interior nodes exist (neither is absorbed into a terminal).
//!
//! For each paired edge, every opposite vertex is tested against two
//! surfaces anchored on that edge: the vertex cones (a query point behind an
//! endpoint must clear a slope threshold derived from the node angle) and
//! the revolution surface built from the scaled weight triangle's
//! circumradius. With all weights equal the thresholds reduce to sqrt(3)
//! and to r/3, 2r/3 with r = (sqrt(3)/2) * edge length.

use crate::equilibrium::{cone_quantities, WeightSystem};
use crate::error::{Error, Result};
use crate::geom::{Point3, TetInstance, Vec3};

/// Which paired edge a record refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairedEdge {
    /// Edge (A1, A2) of the canonical pairing.
    Edge12,
    /// Edge (A4, A3) of the canonical pairing.
    Edge34,
}

/// Inequality family of a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IneqLabel {
    Cone12,
    Torus12,
    Cone34,
    Torus34,
}

impl IneqLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            IneqLabel::Cone12 => "cone_12",
            IneqLabel::Torus12 => "torus_12",
            IneqLabel::Cone34 => "cone_34",
            IneqLabel::Torus34 => "torus_34",
        }
    }
}

/// One evaluated inequality. `lhs > rhs` decides satisfaction; for a cone
/// record whose query point sits axially between the endpoints the
/// constraint is vacuous and `lhs` is `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IneqRecord {
    pub label: IneqLabel,
    /// Index (0-based) of the queried vertex in the canonical instance.
    pub query_vertex: usize,
    pub query_point: Point3,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// The full certification result: all records plus their conjunction.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyReport {
    pub records: Vec<IneqRecord>,
    pub overall: bool,
}

/// Coordinates of `c` in an orthonormal frame whose x-axis carries the edge
/// from `p` to `q` with the origin at `p` (so x(p) = 0 < x(q) = |pq|). The
/// perpendicular split between y and z is an arbitrary deterministic choice;
/// only y^2 + z^2 is meaningful.
pub fn edge_frame_coords(tet: &TetInstance, edge: PairedEdge, c: Point3) -> Result<(f64, f64, f64)> {
    let t = tet.canonicalized();
    let (p, q) = match edge {
        PairedEdge::Edge12 => (t.a1(), t.a2()),
        PairedEdge::Edge34 => (t.a4(), t.a3()),
    };
    let axis = q - p;
    let a = axis.norm();
    if a <= f64::MIN_POSITIVE {
        return Err(Error::DegenerateEdge(match edge {
            PairedEdge::Edge12 => "A1A2",
            PairedEdge::Edge34 => "A4A3",
        }));
    }
    let ux = axis / a;
    // Deterministic perpendicular: cross with the world axis least aligned
    // with the edge.
    let probe = if ux.x.abs() <= ux.y.abs() && ux.x.abs() <= ux.z.abs() {
        Vec3::new(1.0, 0.0, 0.0)
    } else if ux.y.abs() <= ux.z.abs() {
        Vec3::new(0.0, 1.0, 0.0)
    } else {
        Vec3::new(0.0, 0.0, 1.0)
    };
    let uy = ux.cross(probe).normalized().expect("probe not parallel to edge");
    let uz = ux.cross(uy);
    let d = c - p;
    Ok((d.dot(ux), d.dot(uy), d.dot(uz)))
}

struct EdgeCheck {
    edge: PairedEdge,
    cone_label: IneqLabel,
    torus_label: IneqLabel,
    /// Weights at the edge's endpoints: `b_near` at the frame-origin vertex
    /// (A1 resp. A4), `b_far` at the other. The torus quantities are
    /// symmetric in them; the cone angles are per vertex.
    b_near: f64,
    b_far: f64,
    queries: [usize; 2],
}

/// Slope threshold of the vertex cone whose half angle is the supplement of
/// `alpha`: a query point behind the vertex clears the cone when its
/// perpendicular-to-axial ratio exceeds tan(pi - alpha). When alpha is not
/// obtuse the cone swallows the axial half-space and nothing clears it.
fn cone_threshold(cos_alpha: f64) -> f64 {
    let alpha = cos_alpha.clamp(-1.0, 1.0).acos();
    if alpha > std::f64::consts::FRAC_PI_2 {
        (std::f64::consts::PI - alpha).tan()
    } else {
        f64::INFINITY
    }
}

/// Evaluates the full inequality suite for both paired edges, querying each
/// edge against both opposite vertices.
///
/// A node is absorbed into an endpoint of weight `b_v` (the other endpoint
/// carrying `b_o`) exactly when the third tree direction enters the vertex
/// cone of half angle pi - alpha_v, cos(alpha_v) =
/// (b_v^2 - b_o^2 - b_st^2) / (2 b_o b_st); the opposite vertices stand in
/// for that direction, so each query point must clear the cone of the
/// endpoint it sits behind. With equal weights every alpha is 120 degrees
/// and the threshold is sqrt(3).
pub fn check_nondegenerate(tet: &TetInstance, w: &WeightSystem) -> Result<DegeneracyReport> {
    let t = tet.canonicalized();
    let checks = [
        EdgeCheck {
            edge: PairedEdge::Edge12,
            cone_label: IneqLabel::Cone12,
            torus_label: IneqLabel::Torus12,
            b_near: w.b1,
            b_far: w.b2,
            queries: [2, 3],
        },
        EdgeCheck {
            edge: PairedEdge::Edge34,
            cone_label: IneqLabel::Cone34,
            torus_label: IneqLabel::Torus34,
            b_near: w.b4,
            b_far: w.b3,
            queries: [0, 1],
        },
    ];

    let mut records = Vec::with_capacity(8);
    for ck in checks {
        let (p, q) = match ck.edge {
            PairedEdge::Edge12 => (t.a1(), t.a2()),
            PairedEdge::Edge34 => (t.a4(), t.a3()),
        };
        let a = (q - p).norm();
        let cq = cone_quantities(a, ck.b_near, ck.b_far, w.b_st)?;
        let (bn, bf, bst) = (ck.b_near, ck.b_far, w.b_st);
        let near_rhs =
            cone_threshold((bn * bn - bf * bf - bst * bst) / (2.0 * bf * bst));
        let far_rhs =
            cone_threshold((bf * bf - bn * bn - bst * bst) / (2.0 * bn * bst));

        for qi in ck.queries {
            let c = t.vertices[qi];
            let (x, y, z) = edge_frame_coords(&t, ck.edge, c)?;
            let rho = (y * y + z * z).sqrt();

            // Cone record: binds only when the query point lies axially
            // behind one of the endpoints (x < 0 or x > a in edge frame).
            let (lhs, rhs) = if x < 0.0 {
                (rho / -x, near_rhs)
            } else if x > a {
                (rho / (x - a), far_rhs)
            } else {
                (f64::INFINITY, near_rhs.max(far_rhs))
            };
            records.push(IneqRecord {
                label: ck.cone_label,
                query_vertex: qi,
                query_point: c,
                lhs,
                rhs,
                satisfied: lhs > rhs,
            });

            // Revolution-surface record.
            let torus_lhs = {
                let radial = rho + cq.r * cq.beta.sin();
                let axial = a / 2.0 - x;
                radial * radial + axial * axial
            };
            let torus_rhs = cq.r * cq.r;
            records.push(IneqRecord {
                label: ck.torus_label,
                query_vertex: qi,
                query_point: c,
                lhs: torus_lhs,
                rhs: torus_rhs,
                satisfied: torus_lhs > torus_rhs,
            });
        }
    }

    let overall = records.iter().all(|r| r.satisfied);
    Ok(DegeneracyReport { records, overall })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Pairing, Weights};
    use approx::assert_relative_eq;

    fn example_one() -> TetInstance {
        TetInstance::unweighted([
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
            Point3::new(-2.0, 0.0, 3.0),
            Point3::new(-1.0, -1.0, 2.0),
        ])
        .unwrap()
    }

    fn regular_tet(edge: f64) -> TetInstance {
        let s = edge / (2.0 * 2.0_f64.sqrt());
        TetInstance::unweighted([
            Point3::new(s, s, s),
            Point3::new(s, -s, -s),
            Point3::new(-s, s, -s),
            Point3::new(-s, -s, s),
        ])
        .unwrap()
    }

    #[test]
    fn frame_coords_on_edge_line() {
        let tet = example_one();
        let (x, y, z) = edge_frame_coords(&tet, PairedEdge::Edge12, Point3::new(0.7, 0.0, 0.0)).unwrap();
        assert_relative_eq!(x, 0.7, epsilon = 1e-14);
        assert!(y * y + z * z < 1e-24);
    }

    #[test]
    fn frame_coords_far_endpoint() {
        let tet = example_one();
        let (x, y, z) = edge_frame_coords(&tet, PairedEdge::Edge12, tet.a2()).unwrap();
        assert_relative_eq!(x, 2.0, epsilon = 1e-14);
        assert!(y.abs() < 1e-12 && z.abs() < 1e-12);
    }

    #[test]
    fn frame_coords_example_a4() {
        // Edge A1A2 lies along world x already, so x(A4) = -1 and the
        // perpendicular part carries the rest of |A4|^2.
        let tet = example_one();
        let a4 = tet.a4();
        let (x, y, z) = edge_frame_coords(&tet, PairedEdge::Edge12, a4).unwrap();
        assert_relative_eq!(x, -1.0, epsilon = 1e-14);
        let norm_sq = a4.x * a4.x + a4.y * a4.y + a4.z * a4.z;
        assert_relative_eq!(y * y + z * z, norm_sq - x * x, epsilon = 1e-12);
        assert_relative_eq!(y * y + z * z, 5.0, epsilon = 1e-12);
    }

    #[test]
    fn equal_weight_thresholds_match_unweighted_reduction() {
        let tet = regular_tet(1.0);
        let w = WeightSystem::unit();
        let report = check_nondegenerate(&tet, &w).unwrap();
        for rec in report
            .records
            .iter()
            .filter(|r| matches!(r.label, IneqLabel::Cone12 | IneqLabel::Cone34))
        {
            assert_relative_eq!(rec.rhs, 3.0_f64.sqrt(), max_relative = 1e-12);
        }
        // Torus quantities: R*sin(beta) = r/3 and R = 2r/3 with r = sqrt(3)/2 * a.
        let cq = cone_quantities(1.0, 1.0, 1.0, 1.0).unwrap();
        let r_aux = 3.0_f64.sqrt() / 2.0;
        assert_relative_eq!(cq.r * cq.beta.sin(), r_aux / 3.0, max_relative = 1e-12);
        assert_relative_eq!(cq.r, 2.0 * r_aux / 3.0, max_relative = 1e-12);
        for rec in report
            .records
            .iter()
            .filter(|r| matches!(r.label, IneqLabel::Torus12 | IneqLabel::Torus34))
        {
            assert_relative_eq!(rec.rhs.sqrt(), 2.0 * r_aux / 3.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn regular_tetrahedron_passes() {
        let report = check_nondegenerate(&regular_tet(1.0), &WeightSystem::unit()).unwrap();
        assert!(report.overall, "report: {report:?}");
        assert_eq!(report.records.len(), 8);
    }

    #[test]
    fn example_reference_instance_is_rejected() {
        // The certification is deliberately strict (every opposite vertex
        // must clear every cone): the reference instance places A3 inside
        // the cone behind A1 (slope 3/2 < sqrt(3)), so it is not certified
        // even though its unweighted solution happens to stay interior.
        let report = check_nondegenerate(&example_one(), &WeightSystem::unit()).unwrap();
        assert!(!report.overall);
        let rec = report
            .records
            .iter()
            .find(|r| r.label == IneqLabel::Cone12 && r.query_vertex == 2)
            .unwrap();
        assert!(!rec.satisfied);
        assert_relative_eq!(rec.lhs, 1.5, epsilon = 1e-12);
        assert_relative_eq!(rec.rhs, 3.0_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn insufficient_bridge_weight_is_rejected() {
        // b12 = b34 = 0.8 on the reference geometry: the apex-angle cones
        // widen (alpha_1 drops to ~113.6 degrees) and A3 falls inside the
        // cone behind A1; the would-be solution crosses the second edge
        // outside its segment.
        let tet = TetInstance::new(
            example_one().vertices,
            Weights { b1: 1.0, b2: 1.0, b3: 1.0, b4: 1.0, b12: 0.8, b34: 0.8 },
            Pairing::P12_34,
        )
        .unwrap();
        let w = WeightSystem::from_weights(&tet.weights).unwrap();
        let report = check_nondegenerate(&tet, &w).unwrap();
        assert!(!report.overall);
    }

    #[test]
    fn query_on_cone_axis_fails() {
        // A3 placed on the extension of edge A1A2 behind A1: rho = 0 so the
        // cone inequality cannot hold.
        let tet = TetInstance::unweighted([
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
            Point3::new(-1.5, 0.0, 0.0),
            Point3::new(-1.0, -1.0, 2.0),
        ])
        .unwrap();
        let report = check_nondegenerate(&tet, &WeightSystem::unit()).unwrap();
        let rec = report
            .records
            .iter()
            .find(|r| r.label == IneqLabel::Cone12 && r.query_vertex == 2)
            .unwrap();
        assert!(!rec.satisfied);
        assert_relative_eq!(rec.lhs, 0.0, epsilon = 1e-14);
        assert!(!report.overall);
    }

    #[test]
    fn infeasible_weights_propagate() {
        let w = WeightSystem::new(1.0, 1.0, 1.0, 1.0, 2.5).unwrap();
        assert!(matches!(
            check_nondegenerate(&example_one(), &w),
            Err(Error::InfeasibleWeights { .. })
        ));
    }

    #[test]
    fn report_invariant_under_rigid_motion() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let tet = example_one();
        let w = WeightSystem::unit();
        let base = check_nondegenerate(&tet, &w).unwrap();
        for _ in 0..20 {
            let moved = crate::geom_test_support::random_rigid_motion(&mut rng, &tet);
            let rep = check_nondegenerate(&moved, &w).unwrap();
            assert_eq!(rep.overall, base.overall);
            for (a, b) in rep.records.iter().zip(base.records.iter()) {
                assert_eq!(a.satisfied, b.satisfied);
                if a.lhs.is_finite() {
                    assert_relative_eq!(a.lhs, b.lhs, max_relative = 1e-9);
                }
                assert_relative_eq!(a.rhs, b.rhs, max_relative = 1e-9);
            }
            let _ = rng.gen::<f64>();
        }
    }
}
