//! The unweighted single-node problem: one interior point F minimizing the
//! plain distance sum to the four vertices, located through a three-unknown
//! system in the two Simpson-line intercepts and the apex angle
//! gamma = angle(A4, F, A3) = angle(A1, F, A2).
//!
//! The intercept equations are the equal-weight Simpson equations with the
//! auxiliary altitude replaced by (a/2) tan(gamma/2); gamma itself closes
//! the system through the cotangent identity obtained by splitting the
//! Simpson segment at F:
//!
//! ```text
//! cot(gamma/2) = (h^2 + k1 (t12 - t34 cos phi) + k2 (t34 - t12 cos phi))
//!              / ((t12 - k1) S(t34) + (t34 - k2) S(t12))
//! ```
//!
//! with S(t) = sqrt(h^2 + t^2 sin^2 phi). On signed t-axes this identity
//! holds in every foot configuration; the absolute-value guards of the
//! non-standing configurations only protect transient iterates.

use crate::error::{Error, Result};
use crate::geom::{FrameConfig, Point3, SkewFrame};

/// Default relative tolerance of the sweep.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Converged single-node data. `point` is `None` until [`recover_ft_point`]
/// runs.
#[derive(Debug, Clone, PartialEq)]
pub struct FtSolution {
    pub t12: f64,
    pub t34: f64,
    /// Apex angle gamma = angle(A4, F, A3), radians.
    pub gamma: f64,
    pub t12_point: Point3,
    pub t34_point: Point3,
    pub iterations: usize,
    /// Final residuals of the three equations.
    pub residuals: (f64, f64, f64),
    pub point: Option<Point3>,
    /// Plain distance sum at F (filled with the point).
    pub cost: Option<f64>,
}

struct FtSystem {
    h_sq: f64,
    cos_phi: f64,
    sin_sq_phi: f64,
    k1: f64,
    k2: f64,
    m12: f64,
    m34: f64,
    a12: f64,
    a34: f64,
    abs_form: bool,
}

impl FtSystem {
    fn new(frame: &SkewFrame) -> Self {
        FtSystem {
            h_sq: frame.h * frame.h,
            cos_phi: frame.phi.cos(),
            sin_sq_phi: frame.phi.sin().powi(2),
            k1: frame.k1,
            k2: frame.k2,
            m12: frame.m12,
            m34: frame.m34,
            a12: frame.a12,
            a34: frame.a34,
            abs_form: frame.config != FrameConfig::BothFeetOutsideBehind,
        }
    }

    fn s(&self, t: f64) -> f64 {
        (self.h_sq + t * t * self.sin_sq_phi).sqrt()
    }

    /// Numerator and denominator of cot(gamma/2) in the segment-splitting
    /// identity.
    fn gamma_parts(&self, t12: f64, t34: f64) -> Result<(f64, f64)> {
        let num = self.h_sq
            + self.k1 * (t12 - t34 * self.cos_phi)
            + self.k2 * (t34 - t12 * self.cos_phi);
        let (d1, d2) = if self.abs_form {
            ((t12 - self.k1).abs(), (t34 - self.k2).abs())
        } else {
            (t12 - self.k1, t34 - self.k2)
        };
        let den = d1 * self.s(t34) + d2 * self.s(t12);
        if den.abs() < 1e-300 {
            return Err(Error::DegenerateConfiguration(
                "vanishing denominator in the apex-angle identity",
            ));
        }
        Ok((num, den))
    }

    fn residuals(&self, t12: f64, t34: f64, gamma: f64) -> (f64, f64, f64) {
        let r = |a: f64| (a / 2.0) * (gamma / 2.0).tan();
        let (lhs1, rhs1) = (
            (t34 - t12 * self.cos_phi) / self.s(t12),
            (self.m34 - t34) / r(self.a34),
        );
        let (lhs2, rhs2) = (
            (t12 - t34 * self.cos_phi) / self.s(t34),
            (self.m12 - t12) / r(self.a12),
        );
        let (e1, e2) = if self.abs_form {
            (lhs1.abs() - rhs1.abs(), lhs2.abs() - rhs2.abs())
        } else {
            (lhs1 - rhs1, lhs2 - rhs2)
        };
        let e3 = match self.gamma_parts(t12, t34) {
            Ok((num, den)) => 1.0 / (gamma / 2.0).tan() - num / den,
            Err(_) => f64::INFINITY,
        };
        (e1, e2, e3)
    }
}

/// Gauss-Seidel sweep over (t34, t12, gamma), gamma seeded at the
/// fully-symmetric value arccos(-1/3) and damped 0.5 when its updates
/// oscillate.
pub fn solve_ft_system(frame: &SkewFrame, tol: f64, max_iter: usize) -> Result<FtSolution> {
    let sys = FtSystem::new(frame);
    let scale = frame.scale();

    let mut gamma: f64 = (-1.0f64 / 3.0).acos();
    let mut t12 = frame.m12;
    let mut t34 = frame.m34;
    let mut prev_dg = 0.0f64;
    let mut trace: Vec<(f64, f64)> = Vec::new();

    for iteration in 1..=max_iter {
        let rh = (gamma / 2.0).tan();
        let r34 = (sys.a34 / 2.0) * rh;
        let s12 = sys.s(t12);
        let t34_next = (sys.m34 * s12 + r34 * t12 * sys.cos_phi) / (r34 + s12);
        let r12 = (sys.a12 / 2.0) * rh;
        let s34 = sys.s(t34_next);
        let t12_next = (sys.m12 * s34 + r12 * t34_next * sys.cos_phi) / (r12 + s34);

        // gamma/2 in (0, pi); atan2 keeps the branch even while the
        // numerator is transiently negative.
        let (num, den) = sys.gamma_parts(t12_next, t34_next)?;
        let mut gamma_next = 2.0 * den.abs().atan2(num);
        let dg = gamma_next - gamma;
        if dg * prev_dg < 0.0 {
            gamma_next = gamma + 0.5 * dg;
        }
        prev_dg = gamma_next - gamma;

        let delta_t = (t12_next - t12).abs().max((t34_next - t34).abs());
        let delta_g = (gamma_next - gamma).abs();
        t12 = t12_next;
        t34 = t34_next;
        gamma = gamma_next;
        trace.push((t12, t34));

        if delta_t < tol * scale && delta_g < tol.max(1e-15) {
            return Ok(FtSolution {
                t12,
                t34,
                gamma,
                t12_point: frame.point_on_edge12(t12),
                t34_point: frame.point_on_edge34(t34),
                iterations: iteration,
                residuals: sys.residuals(t12, t34, gamma),
                point: None,
                cost: None,
            });
        }
    }

    let (e1, e2, e3) = sys.residuals(t12, t34, gamma);
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: e1.abs().max(e2.abs()).max(e3.abs()),
        trace,
    })
}

/// Places F on the Simpson segment by the split-length relation
/// T12F = (t12 - k1)(sin(phi12) cot(gamma/2) + cos(phi12)) and verifies the
/// complementary length closes the segment.
pub fn recover_ft_point(
    frame: &SkewFrame,
    vertices: &[Point3; 4],
    sol: &FtSolution,
) -> Result<FtSolution> {
    let sys = FtSystem::new(frame);
    let (t12, t34, gamma) = (sol.t12, sol.t34, sol.gamma);
    let length_sq =
        sys.h_sq + t12 * t12 + t34 * t34 - 2.0 * t12 * t34 * sys.cos_phi;
    let length = length_sq.sqrt();
    if length < 1e-14 * frame.scale() {
        return Err(Error::InconsistentSolution(
            "Simpson segment has zero length".to_string(),
        ));
    }
    let cot = 1.0 / (gamma / 2.0).tan();
    let sin12 = sys.s(t34) / length;
    let cos12 = (t12 - t34 * sys.cos_phi) / length;
    let sin34 = sys.s(t12) / length;
    let cos34 = (t34 - t12 * sys.cos_phi) / length;
    let t12f = (t12 - sys.k1) * (sin12 * cot + cos12);
    let ft34 = (t34 - sys.k2) * (sin34 * cot + cos34);

    let closure = (t12f + ft34 - length).abs();
    if closure > 1e-9 * frame.scale() {
        return Err(Error::InconsistentSolution(format!(
            "segment split does not close: T12F + FT34 - T12T34 = {closure:.3e}"
        )));
    }
    if !(-1e-9 * frame.scale()..=length + 1e-9 * frame.scale()).contains(&t12f) {
        return Err(Error::InconsistentSolution(format!(
            "F lies outside the Simpson segment: T12F = {t12f:.6}, T12T34 = {length:.6}"
        )));
    }

    let f = sol.t12_point + (sol.t34_point - sol.t12_point) * (t12f / length);
    let cost = vertices.iter().map(|v| v.distance(f)).sum();
    let mut out = sol.clone();
    out.point = Some(f);
    out.cost = Some(cost);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{skew_frame, TetInstance};
    use crate::oracle::weighted_median;
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

    fn regular_tet() -> TetInstance {
        let s = 1.0 / (2.0 * 2.0_f64.sqrt());
        TetInstance::unweighted([
            Point3::new(s, s, s),
            Point3::new(s, -s, -s),
            Point3::new(-s, s, -s),
            Point3::new(-s, -s, s),
        ])
        .unwrap()
    }

    #[test]
    fn example_instance_reproduces_reference_values() {
        let fr = skew_frame(&example_one()).unwrap();
        let sol = solve_ft_system(&fr, 1e-13, 10_000).unwrap();
        assert_relative_eq!(sol.t12, 1.17, epsilon = 0.005);
        assert_relative_eq!(sol.t34, 1.42, epsilon = 0.005);
        assert_relative_eq!(sol.gamma.to_degrees(), 43.47, epsilon = 0.05);
    }

    #[test]
    fn example_instance_f_matches_median_oracle() {
        let tet = example_one();
        let fr = skew_frame(&tet).unwrap();
        let sol = solve_ft_system(&fr, 1e-13, 10_000).unwrap();
        let sol = recover_ft_point(&fr, &tet.vertices, &sol).unwrap();
        let f = sol.point.unwrap();
        let oracle = weighted_median(&tet.vertices, &[1.0; 4], 1e-12, 500_000).unwrap();
        assert!(f.distance(oracle) < 1e-5, "F {:?} vs oracle {:?}", f, oracle);
        let cost_oracle: f64 = tet.vertices.iter().map(|v| v.distance(oracle)).sum();
        assert_relative_eq!(sol.cost.unwrap(), cost_oracle, max_relative = 1e-6);
    }

    #[test]
    fn regular_tetrahedron_gives_centroid() {
        let tet = regular_tet();
        let fr = skew_frame(&tet).unwrap();
        // Feet at midpoints: both-inside configuration.
        assert_eq!(fr.config, crate::geom::FrameConfig::BothInside);
        let sol = solve_ft_system(&fr, 1e-14, 10_000).unwrap();
        assert_relative_eq!(sol.t12, 0.0, epsilon = 1e-12);
        assert_relative_eq!(sol.t34, 0.0, epsilon = 1e-12);
        assert_relative_eq!(
            sol.gamma.to_degrees(),
            (-1.0f64 / 3.0).acos().to_degrees(),
            epsilon = 1e-10
        );
        let sol = recover_ft_point(&fr, &tet.vertices, &sol).unwrap();
        let f = sol.point.unwrap();
        // Centroid of this placement is the origin; F equidistant from all.
        assert!(f.distance(Point3::new(0.0, 0.0, 0.0)) < 1e-12);
        let d0 = tet.vertices[0].distance(f);
        for v in &tet.vertices[1..] {
            assert_relative_eq!(v.distance(f), d0, max_relative = 1e-12);
        }
    }

    #[test]
    fn apex_angle_holds_at_recovered_point() {
        let tet = example_one();
        let fr = skew_frame(&tet).unwrap();
        let sol = solve_ft_system(&fr, 1e-13, 10_000).unwrap();
        let sol = recover_ft_point(&fr, &tet.vertices, &sol).unwrap();
        let f = sol.point.unwrap();
        let ang = |p: Point3, q: Point3| {
            let u = p - f;
            let v = q - f;
            (u.dot(v) / (u.norm() * v.norm())).clamp(-1.0, 1.0).acos()
        };
        let g43 = ang(tet.vertices[3], tet.vertices[2]);
        let g12 = ang(tet.vertices[0], tet.vertices[1]);
        assert!((g43 - sol.gamma).abs() < 1e-6, "gamma {} vs angle {}", sol.gamma, g43);
        assert!((g12 - sol.gamma).abs() < 1e-6);
    }

    #[test]
    fn first_order_optimality_at_f() {
        let tet = example_one();
        let fr = skew_frame(&tet).unwrap();
        let sol = solve_ft_system(&fr, 1e-13, 10_000).unwrap();
        let sol = recover_ft_point(&fr, &tet.vertices, &sol).unwrap();
        let f = sol.point.unwrap();
        let mut g = crate::geom::Vec3::new(0.0, 0.0, 0.0);
        for v in &tet.vertices {
            let d = *v - f;
            g = g + d / d.norm();
        }
        assert!(g.norm() < 1e-6, "unit-vector sum {}", g.norm());
    }

    #[test]
    fn residual_certificate() {
        let fr = skew_frame(&example_one()).unwrap();
        let tol = 1e-12;
        let sol = solve_ft_system(&fr, tol, 10_000).unwrap();
        assert!(sol.residuals.0.abs() < 10.0 * tol, "r1 {}", sol.residuals.0);
        assert!(sol.residuals.1.abs() < 10.0 * tol, "r2 {}", sol.residuals.1);
        assert!(sol.residuals.2.abs() < 10.0 * tol, "r3 {}", sol.residuals.2);
    }

    #[test]
    fn segment_split_closes() {
        let tet = example_one();
        let fr = skew_frame(&tet).unwrap();
        let sol = solve_ft_system(&fr, 1e-13, 10_000).unwrap();
        let sol = recover_ft_point(&fr, &tet.vertices, &sol).unwrap();
        let f = sol.point.unwrap();
        let total = sol.t12_point.distance(sol.t34_point);
        let split = sol.t12_point.distance(f) + f.distance(sol.t34_point);
        assert_relative_eq!(split, total, epsilon = 1e-9 * fr.scale());
    }
}
