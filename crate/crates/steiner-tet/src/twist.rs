//! The twist (dihedral) angle between the two Steiner planes: the plane of
//! edge A1A2 with the Simpson line and the plane of edge A4A3 with the
//! Simpson line.
//!
//! Both planes contain the Simpson line, so the dihedral is the angle
//! between the two edge directions after projecting out the Simpson
//! direction. In terms of the plane angles phi12 = angle(A1, T12, T34) and
//! phi34 = angle(A4, T34, T12) this closes to
//!
//! ```text
//! cos w = (cos phi + cos phi12 * cos phi34) / (sin phi12 * sin phi34)
//! ```
//!
//! with the orientation fixed so that a Simpson line along the common
//! perpendicular (phi12 = phi34 = 90 degrees) gives w = phi exactly. The
//! same value falls out of the Lagrange identity applied to the two plane
//! normals u12 x uS and u34 x uS, which is what the cross-product oracle
//! evaluates.

use crate::error::{Error, Result};
use crate::geom::{Point3, SkewFrame, TetInstance};

/// Tolerance below which a plane is considered degenerate (Simpson line
/// parallel to an edge) or the Simpson segment collapsed.
pub const TWIST_TOL: f64 = 1e-12;

/// Closed-form special cases of the twist formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialCase {
    General,
    /// phi = 0: parallel edge directions (coplanar limit).
    PhiZero,
    /// phi = 90 degrees: cos w reduces to -cot(phi12) cot(phi34) in the
    /// oriented angles.
    PhiRight,
    /// phi12 = phi34 = 90 degrees: the Simpson line is the common
    /// perpendicular and w = phi.
    BothRight,
}

impl SpecialCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpecialCase::General => "general",
            SpecialCase::PhiZero => "phi_zero",
            SpecialCase::PhiRight => "phi_right",
            SpecialCase::BothRight => "both_right",
        }
    }
}

/// Twist angle data for one Simpson line position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistReport {
    /// angle(A1, T12, T34).
    pub phi12: f64,
    /// angle(A4, T34, T12).
    pub phi34: f64,
    /// Unsigned dihedral between the two Steiner planes, in [0, pi].
    pub omega: f64,
    /// Length of the Simpson segment T12 T34.
    pub simpson_length: f64,
    pub special_case: SpecialCase,
}

struct PlaneAngles {
    cos12: f64,
    sin12: f64,
    cos34: f64,
    sin34: f64,
    length: f64,
}

fn plane_angles(frame: &SkewFrame, t12: f64, t34: f64) -> Result<PlaneAngles> {
    let h_sq = frame.h * frame.h;
    let cos_phi = frame.phi.cos();
    let sin_sq = frame.phi.sin().powi(2);
    let length =
        (h_sq + t12 * t12 + t34 * t34 - 2.0 * t12 * t34 * cos_phi).sqrt();
    if length < TWIST_TOL * frame.scale() {
        return Err(Error::UndefinedTwist("Simpson segment has zero length"));
    }
    Ok(PlaneAngles {
        cos12: (t12 - t34 * cos_phi) / length,
        sin12: (h_sq + t34 * t34 * sin_sq).sqrt() / length,
        cos34: (t34 - t12 * cos_phi) / length,
        sin34: (h_sq + t12 * t12 * sin_sq).sqrt() / length,
        length,
    })
}

/// Twist angle from the frame and the two intercepts.
pub fn twist_angle(frame: &SkewFrame, t12: f64, t34: f64) -> Result<TwistReport> {
    let pa = plane_angles(frame, t12, t34)?;
    if pa.sin12 * pa.sin34 < TWIST_TOL {
        return Err(Error::UndefinedTwist(
            "a Steiner plane is degenerate: the Simpson line is parallel to an edge",
        ));
    }
    let cos_phi = frame.phi.cos();
    let cos_omega =
        ((cos_phi + pa.cos12 * pa.cos34) / (pa.sin12 * pa.sin34)).clamp(-1.0, 1.0);
    let omega = cos_omega.acos();

    let right = |c: f64| c.abs() < 1e-9;
    let special_case = if right(pa.cos12) && right(pa.cos34) {
        SpecialCase::BothRight
    } else if right(cos_phi) {
        SpecialCase::PhiRight
    } else if frame.phi.abs() < 1e-9 {
        SpecialCase::PhiZero
    } else {
        SpecialCase::General
    };

    Ok(TwistReport {
        phi12: pa.cos12.clamp(-1.0, 1.0).acos(),
        phi34: pa.cos34.clamp(-1.0, 1.0).acos(),
        omega,
        simpson_length: pa.length,
        special_case,
    })
}

/// Signed twist: the unsigned dihedral with the sense of rotation about the
/// Simpson direction (from the edge-12 plane towards the edge-34 plane).
pub fn twist_angle_signed(frame: &SkewFrame, t12: f64, t34: f64) -> Result<f64> {
    let report = twist_angle(frame, t12, t34)?;
    let t12_point = frame.point_on_edge12(t12);
    let t34_point = frame.point_on_edge34(t34);
    let us = (t34_point - t12_point)
        .normalized()
        .ok_or(Error::UndefinedTwist("Simpson segment has zero length"))?;
    let n1 = frame.u12.cross(us);
    let n2 = frame.u34.cross(us);
    let sign = n1.cross(n2).dot(us);
    Ok(if sign < 0.0 { -report.omega } else { report.omega })
}

/// Cross-product oracle for the same dihedral: the angle between the plane
/// normals u12 x uS and u34 x uS, where uS runs from T12 to T34. Must agree
/// with [`twist_angle`] to machine precision.
pub fn twist_angle_normal_oracle(
    tet: &TetInstance,
    t12_point: Point3,
    t34_point: Point3,
) -> Result<f64> {
    let t = tet.canonicalized();
    let u12 = (t.a2() - t.a1())
        .normalized()
        .ok_or(Error::DegenerateEdge("A1A2"))?;
    let u34 = (t.a3() - t.a4())
        .normalized()
        .ok_or(Error::DegenerateEdge("A4A3"))?;
    let us = (t34_point - t12_point)
        .normalized()
        .ok_or(Error::UndefinedTwist("Simpson segment has zero length"))?;
    let n1 = u12.cross(us);
    let n2 = u34.cross(us);
    let (n1n, n2n) = (n1.norm(), n2.norm());
    if n1n < TWIST_TOL || n2n < TWIST_TOL {
        return Err(Error::UndefinedTwist(
            "a Steiner plane is degenerate: the Simpson line is parallel to an edge",
        ));
    }
    Ok((n1.dot(n2) / (n1n * n2n)).clamp(-1.0, 1.0).acos())
}
