//! 3D vector primitives, problem instances, and the common-perpendicular
//! frame of the two paired edges.
//!
//! Everything downstream (equilibrium angles, the Simpson-line solver, the
//! twist angle) works in the coordinates this module sets up: each paired
//! edge carries a signed `t`-axis whose origin is the foot of the common
//! perpendicular on that edge's line and whose positive direction runs along
//! the edge (first vertex towards second).

use crate::error::{Error, Result};

/// Tolerance below which `sin(phi)` is treated as zero (parallel edge lines).
pub const PARALLEL_TOL: f64 = 1e-12;

/// Relative tolerance below which the common perpendicular length is treated
/// as zero (the two edge lines intersect).
pub const INTERSECTING_TOL: f64 = 1e-12;

/// A point in 3-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// A displacement in 3-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn distance(&self, other: Point3) -> f64 {
        (*self - other).norm()
    }
}

impl Vec3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(&self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(*self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction; `None` when the norm underflows.
    pub fn normalized(&self) -> Option<Vec3> {
        let n = self.norm();
        if n <= f64::MIN_POSITIVE {
            None
        } else {
            Some(*self / n)
        }
    }
}

impl std::ops::Sub for Point3 {
    type Output = Vec3;
    fn sub(self, rhs: Point3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl std::ops::Add<Vec3> for Point3 {
    type Output = Point3;
    fn add(self, rhs: Vec3) -> Point3 {
        Point3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl std::ops::Sub<Vec3> for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Vec3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl std::ops::Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, rhs: f64) -> Vec3 {
        Vec3::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

impl std::ops::Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, rhs: f64) -> Vec3 {
        Vec3::new(self.x / rhs, self.y / rhs, self.z / rhs)
    }
}

impl std::ops::Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Which two non-neighbouring edges carry the interior nodes.
///
/// `P12_34` pairs edge (A1,A2) with edge (A4,A3); the other variants are
/// reduced to it by vertex/weight permutation, see
/// [`TetInstance::canonicalized`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pairing {
    #[default]
    P12_34,
    P13_24,
    P14_23,
}

impl Pairing {
    pub fn parse(s: &str) -> Option<Pairing> {
        match s {
            "12-34" | "12|34" => Some(Pairing::P12_34),
            "13-24" | "13|24" => Some(Pairing::P13_24),
            "14-23" | "14|23" => Some(Pairing::P14_23),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Pairing::P12_34 => "12-34",
            Pairing::P13_24 => "13-24",
            Pairing::P14_23 => "14-23",
        }
    }

    /// Permutation mapping the original vertex indices into canonical
    /// (12|34) order: `perm[i]` is the original index placed at slot `i`.
    pub fn permutation(&self) -> [usize; 4] {
        match self {
            Pairing::P12_34 => [0, 1, 2, 3],
            Pairing::P13_24 => [0, 2, 1, 3],
            Pairing::P14_23 => [0, 3, 1, 2],
        }
    }
}

/// The six positive weights of an instance: one per vertex plus the two node
/// weights. Only `(b12 + b34) / 2` ever enters a computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub b12: f64,
    pub b34: f64,
}

impl Weights {
    pub fn unit() -> Self {
        Weights { b1: 1.0, b2: 1.0, b3: 1.0, b4: 1.0, b12: 1.0, b34: 1.0 }
    }

    /// Effective weight of the node-to-node edge.
    pub fn b_st(&self) -> f64 {
        (self.b12 + self.b34) / 2.0
    }
}

/// The problem statement: four vertices, six weights, and the edge pairing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetInstance {
    pub vertices: [Point3; 4],
    pub weights: Weights,
    pub pairing: Pairing,
}

impl TetInstance {
    /// Validates finiteness and weight positivity. Geometric degeneracies
    /// (zero-length or parallel paired edges) are reported by the operations
    /// that actually need the frame.
    pub fn new(vertices: [Point3; 4], weights: Weights, pairing: Pairing) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "vertex A{} has a non-finite coordinate",
                    i + 1
                )));
            }
        }
        let ws = [
            ("B1", weights.b1),
            ("B2", weights.b2),
            ("B3", weights.b3),
            ("B4", weights.b4),
            ("B12", weights.b12),
            ("B34", weights.b34),
        ];
        for (name, w) in ws {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "weight {name} must be a positive finite number, got {w}"
                )));
            }
        }
        Ok(TetInstance { vertices, weights, pairing })
    }

    /// Instance with all weights 1 and the default pairing.
    pub fn unweighted(vertices: [Point3; 4]) -> Result<Self> {
        Self::new(vertices, Weights::unit(), Pairing::P12_34)
    }

    /// Rewrites the instance so that the paired edges are (A1,A2) and
    /// (A4,A3). All solver operations assume this canonical order; callers
    /// with another pairing canonicalize first and read the results against
    /// the permuted labels.
    pub fn canonicalized(&self) -> TetInstance {
        let p = self.pairing.permutation();
        let v = self.vertices;
        let w = [self.weights.b1, self.weights.b2, self.weights.b3, self.weights.b4];
        TetInstance {
            vertices: [v[p[0]], v[p[1]], v[p[2]], v[p[3]]],
            weights: Weights {
                b1: w[p[0]],
                b2: w[p[1]],
                b3: w[p[2]],
                b4: w[p[3]],
                b12: self.weights.b12,
                b34: self.weights.b34,
            },
            pairing: Pairing::P12_34,
        }
    }

    pub fn a1(&self) -> Point3 {
        self.vertices[0]
    }
    pub fn a2(&self) -> Point3 {
        self.vertices[1]
    }
    pub fn a3(&self) -> Point3 {
        self.vertices[2]
    }
    pub fn a4(&self) -> Point3 {
        self.vertices[3]
    }

    /// Advisory check of the standing edge-pair choice
    /// (|A1A4| + |A2A3| > |A1A2| + |A3A4|). Not a precondition of any
    /// operation; surfaced so callers can warn.
    pub fn pairing_advisory_holds(&self) -> bool {
        let t = self.canonicalized();
        let [a1, a2, a3, a4] = t.vertices;
        a1.distance(a4) + a2.distance(a3) > a1.distance(a2) + a3.distance(a4)
    }
}

/// Where the two perpendicular feet fall relative to the edge segments.
///
/// `BothFeetOutsideBehind` is the standing configuration (foot behind A1 on
/// the first edge, behind A4 on the second); the other variants drive the
/// absolute-value equation forms in the single-node solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameConfig {
    BothFeetOutsideBehind,
    FootInside12,
    FootInside34,
    BothInside,
    Mixed,
}

/// Common-perpendicular decomposition of the paired edges.
///
/// `t`-axis conventions: on the first edge the axis runs along A1->A2 with
/// origin at the foot `foot12`, so A1 sits at coordinate `k1` and A2 at
/// `k1 + a12`; symmetrically the second axis runs along A4->A3 with A4 at
/// `k2`. In the standing configuration both `k` values are nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewFrame {
    /// Length of the common perpendicular of the two edge lines.
    pub h: f64,
    /// Angle between the A1->A2 and A4->A3 directions, in [0, pi].
    pub phi: f64,
    /// Foot of the common perpendicular on line A1A2.
    pub foot12: Point3,
    /// Foot of the common perpendicular on line A4A3.
    pub foot34: Point3,
    /// Signed coordinate of A1 on the first t-axis.
    pub k1: f64,
    /// Signed coordinate of A4 on the second t-axis.
    pub k2: f64,
    /// Edge lengths.
    pub a12: f64,
    pub a34: f64,
    /// Signed coordinates of the edge midpoints: `k + a/2`.
    pub m12: f64,
    pub m34: f64,
    /// Unit direction of the first t-axis (A1 -> A2).
    pub u12: Vec3,
    /// Unit direction of the second t-axis (A4 -> A3).
    pub u34: Vec3,
    /// Foot placement classification.
    pub config: FrameConfig,
    /// True when the two edge lines intersect (h below tolerance). The frame
    /// is still usable but the twist angle is undefined downstream.
    pub intersecting: bool,
}

impl SkewFrame {
    /// Characteristic length used for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.a12.max(self.a34).max(self.h)
    }

    /// Point at coordinate `t` on the first t-axis (line A1A2).
    pub fn point_on_edge12(&self, t: f64) -> Point3 {
        self.foot12 + self.u12 * t
    }

    /// Point at coordinate `t` on the second t-axis (line A4A3).
    pub fn point_on_edge34(&self, t: f64) -> Point3 {
        self.foot34 + self.u34 * t
    }
}

fn edge_dir(from: Point3, to: Point3, label: &'static str) -> Result<(Vec3, f64)> {
    let v = to - from;
    let n = v.norm();
    if n <= f64::MIN_POSITIVE {
        return Err(Error::DegenerateEdge(label));
    }
    Ok((v / n, n))
}

/// Angle between the directed edges A1->A2 and A4->A3, in [0, pi].
pub fn interedge_angle(tet: &TetInstance) -> Result<f64> {
    let t = tet.canonicalized();
    let (u1, _) = edge_dir(t.a1(), t.a2(), "A1A2")?;
    let (u2, _) = edge_dir(t.a4(), t.a3(), "A4A3")?;
    Ok(u1.dot(u2).clamp(-1.0, 1.0).acos())
}

/// Builds the common-perpendicular frame of the paired edges.
///
/// `h` is computed from the determinant form and cross-checked against the
/// direct foot-to-foot distance; the feet satisfy double orthogonality by
/// construction of the 2x2 normal equations.
pub fn skew_frame(tet: &TetInstance) -> Result<SkewFrame> {
    let t = tet.canonicalized();
    let (a1, a2, a3, a4) = (t.a1(), t.a2(), t.a3(), t.a4());
    let (u1, a12) = edge_dir(a1, a2, "A1A2")?;
    let (u2, a34) = edge_dir(a4, a3, "A4A3")?;

    let cos_phi = u1.dot(u2).clamp(-1.0, 1.0);
    let phi = cos_phi.acos();
    let sin_sq = 1.0 - cos_phi * cos_phi;
    if sin_sq.sqrt() < PARALLEL_TOL {
        return Err(Error::ParallelEdges);
    }

    // Feet of the common perpendicular: solve the 2x2 system expressing
    // (A1 + s*u1) - (A4 + u*u2) orthogonal to both directions.
    let w = a1 - a4;
    let s = (cos_phi * w.dot(u2) - w.dot(u1)) / sin_sq;
    let u = cos_phi * s + w.dot(u2);
    let foot12 = a1 + u1 * s;
    let foot34 = a4 + u2 * u;
    let k1 = -s;
    let k2 = -u;

    let r1 = a4 - a1;
    let r2 = a2 - a1;
    let r3 = a3 - a4;
    let det = r1.dot(r2.cross(r3));
    let h = det.abs() / (a12 * a34 * sin_sq.sqrt());

    let scale = a12.max(a34);
    let intersecting = h < INTERSECTING_TOL * scale;

    let inside1 = k1 < 0.0 && k1 + a12 > 0.0;
    let inside2 = k2 < 0.0 && k2 + a34 > 0.0;
    let behind1 = k1 >= 0.0;
    let behind2 = k2 >= 0.0;
    let config = match (behind1, behind2, inside1, inside2) {
        (true, true, _, _) => FrameConfig::BothFeetOutsideBehind,
        (_, _, true, true) => FrameConfig::BothInside,
        (_, true, true, _) => FrameConfig::FootInside12,
        (true, _, _, true) => FrameConfig::FootInside34,
        _ => FrameConfig::Mixed,
    };

    Ok(SkewFrame {
        h,
        phi,
        foot12,
        foot34,
        k1,
        k2,
        a12,
        a34,
        m12: k1 + a12 / 2.0,
        m34: k2 + a34 / 2.0,
        u12: u1,
        u34: u2,
        config,
        intersecting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub(crate) fn example_one() -> TetInstance {
        TetInstance::unweighted([
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
            Point3::new(-2.0, 0.0, 3.0),
            Point3::new(-1.0, -1.0, 2.0),
        ])
        .unwrap()
    }

    #[test]
    fn interedge_angle_example_instance() {
        let phi = interedge_angle(&example_one()).unwrap();
        assert_relative_eq!(phi.to_degrees(), 125.26438968275465, epsilon = 1e-10);
    }

    #[test]
    fn interedge_angle_aligned_edges() {
        let tet = TetInstance::unweighted([
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(3.0, 1.0, 0.0),
            Point3::new(2.0, 1.0, 0.0),
        ])
        .unwrap();
        // A4 -> A3 is also +x.
        assert_relative_eq!(interedge_angle(&tet).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn interedge_angle_orthogonal_edges() {
        let tet = TetInstance::unweighted([
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 1.0),
            Point3::new(0.0, 0.0, 1.0),
        ])
        .unwrap();
        assert_relative_eq!(
            interedge_angle(&tet).unwrap().to_degrees(),
            90.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn interedge_angle_zero_length_edge() {
        let tet = TetInstance::unweighted([
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 1.0),
            Point3::new(0.0, 0.0, 1.0),
        ])
        .unwrap();
        assert!(matches!(interedge_angle(&tet), Err(Error::DegenerateEdge(_))));
    }

    #[test]
    fn skew_frame_example_instance() {
        let fr = skew_frame(&example_one()).unwrap();
        assert_relative_eq!(fr.h, 2.12, epsilon = 0.005);
        assert_relative_eq!(fr.h, 3.0 / 2.0_f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(fr.k1, 0.5, epsilon = 1e-12);
        assert_relative_eq!(fr.k2, 3.0_f64.sqrt() / 2.0, epsilon = 1e-12);
        assert_relative_eq!(fr.foot12.x, -0.5, epsilon = 1e-12);
        assert_relative_eq!(fr.foot12.y, 0.0, epsilon = 1e-12);
        assert_relative_eq!(fr.foot12.z, 0.0, epsilon = 1e-12);
        assert_eq!(fr.config, FrameConfig::BothFeetOutsideBehind);
        assert!(!fr.intersecting);
        // Double orthogonality of the foot-to-foot segment.
        let d = fr.foot34 - fr.foot12;
        assert!(d.dot(fr.u12).abs() < 1e-12 * fr.scale());
        assert!(d.dot(fr.u34).abs() < 1e-12 * fr.scale());
        assert_relative_eq!(d.norm(), fr.h, max_relative = 1e-10);
        assert_relative_eq!(fr.m12, fr.k1 + fr.a12 / 2.0, epsilon = 1e-15);
        assert_relative_eq!(fr.m34, fr.k2 + fr.a34 / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn skew_frame_intersecting_lines() {
        // Two edges whose supporting lines cross at the origin.
        let tet = TetInstance::unweighted([
            Point3::new(-1.0, 0.0, 0.0),
            Point3::new(-3.0, 0.0, 0.0),
            Point3::new(0.0, 2.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ])
        .unwrap();
        let fr = skew_frame(&tet).unwrap();
        assert!(fr.h < 1e-12);
        assert!(fr.intersecting);
    }

    #[test]
    fn skew_frame_parallel_edges() {
        let tet = TetInstance::unweighted([
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(3.0, 1.0, 1.0),
            Point3::new(2.0, 1.0, 1.0),
        ])
        .unwrap();
        assert!(matches!(skew_frame(&tet), Err(Error::ParallelEdges)));
    }

    #[test]
    fn edge_swap_symmetry() {
        // Swapping the roles of the two edges swaps (k1, a12, m12) with
        // (k2, a34, m34) and preserves h and phi. The swapped instance lists
        // the second edge first: (A4, A3, A2, A1) keeps directions intact.
        let tet = example_one();
        let fr = skew_frame(&tet).unwrap();
        let sw = TetInstance::unweighted([
            tet.vertices[3],
            tet.vertices[2],
            tet.vertices[1],
            tet.vertices[0],
        ])
        .unwrap();
        let fs = skew_frame(&sw).unwrap();
        assert_relative_eq!(fs.h, fr.h, max_relative = 1e-12);
        assert_relative_eq!(fs.phi, fr.phi, max_relative = 1e-12);
        assert_relative_eq!(fs.k1, fr.k2, max_relative = 1e-12);
        assert_relative_eq!(fs.k2, fr.k1, max_relative = 1e-12);
        assert_relative_eq!(fs.a12, fr.a34, max_relative = 1e-12);
        assert_relative_eq!(fs.a34, fr.a12, max_relative = 1e-12);
        assert_relative_eq!(fs.m12, fr.m34, max_relative = 1e-12);
        assert_relative_eq!(fs.m34, fr.m12, max_relative = 1e-12);
    }

    #[test]
    fn canonicalize_permutes_vertices_and_weights() {
        let w = Weights { b1: 1.0, b2: 2.0, b3: 3.0, b4: 4.0, b12: 5.0, b34: 6.0 };
        let vs = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ];
        let tet = TetInstance::new(vs, w, Pairing::P13_24).unwrap();
        let c = tet.canonicalized();
        // Pairing 13-24: first edge (A1, A3), second edge (A4, A2).
        assert_eq!(c.vertices[0], vs[0]);
        assert_eq!(c.vertices[1], vs[2]);
        assert_eq!(c.vertices[2], vs[1]);
        assert_eq!(c.vertices[3], vs[3]);
        assert_eq!(c.weights.b1, 1.0);
        assert_eq!(c.weights.b2, 3.0);
        assert_eq!(c.weights.b3, 2.0);
        assert_eq!(c.weights.b4, 4.0);
        assert_eq!(c.pairing, Pairing::P12_34);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn coord() -> impl Strategy<Value = f64> {
            -10.0..10.0f64
        }

        fn tetra() -> impl Strategy<Value = TetInstance> {
            proptest::collection::vec(coord(), 12).prop_filter_map(
                "needs skew paired edges",
                |c| {
                    let vs = [
                        Point3::new(c[0], c[1], c[2]),
                        Point3::new(c[3], c[4], c[5]),
                        Point3::new(c[6], c[7], c[8]),
                        Point3::new(c[9], c[10], c[11]),
                    ];
                    let tet = TetInstance::unweighted(vs).ok()?;
                    let fr = skew_frame(&tet).ok()?;
                    let scale = fr.scale();
                    (fr.phi.sin() > 0.05 && fr.h > 1e-3 * scale).then_some(tet)
                },
            )
        }

        proptest! {
            #[test]
            fn det_h_equals_foot_distance(tet in tetra()) {
                let fr = skew_frame(&tet).unwrap();
                let direct = (fr.foot34 - fr.foot12).norm();
                prop_assert!((fr.h - direct).abs() <= 1e-10 * fr.h.max(1e-12));
            }

            #[test]
            fn frame_invariant_under_rigid_motion(tet in tetra(), seed in 0u64..1000) {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let fr = skew_frame(&tet).unwrap();
                let moved = crate::geom_test_support::random_rigid_motion(&mut rng, &tet);
                let fm = skew_frame(&moved).unwrap();
                let s = fr.scale();
                prop_assert!((fm.h - fr.h).abs() < 1e-10 * s);
                prop_assert!((fm.phi - fr.phi).abs() < 1e-9);
                prop_assert!((fm.k1 - fr.k1).abs() < 1e-9 * s);
                prop_assert!((fm.k2 - fr.k2).abs() < 1e-9 * s);
                prop_assert!((fm.a12 - fr.a12).abs() < 1e-10 * s);
                prop_assert!((fm.a34 - fr.a34).abs() < 1e-10 * s);
            }
        }
    }

    #[test]
    fn rejects_nonpositive_weights() {
        let vs = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ];
        let mut w = Weights::unit();
        w.b3 = 0.0;
        assert!(TetInstance::new(vs, w, Pairing::P12_34).is_err());
        w.b3 = -1.0;
        assert!(TetInstance::new(vs, w, Pairing::P12_34).is_err());
    }
}
