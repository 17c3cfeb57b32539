//! Weight-derived scalar geometry: equilibrium angles at the two nodes, the
//! auxiliary-triangle quantities driving the Simpson-line equations, and the
//! circumradius quantities used by the non-degeneracy tests.
//!
//! All formulas are functions of the weights alone (plus an edge length and
//! foot offset where noted); they are homogeneous of degree zero in the
//! weights and degree one in the lengths.

use crate::error::{Error, Result};

/// The weight data every equilibrium formula consumes: the four vertex
/// weights and the effective node-to-node weight `(b12 + b34) / 2`.
///
/// Construction checks positivity only; the strict weight-triangle
/// inequalities (`|bi - bj| < b_st < bi + bj` at each node) are what make an
/// instance solvable and are reported by [`WeightSystem::check_feasible`]
/// and by the operations themselves as [`Error::InfeasibleWeights`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSystem {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub b_st: f64,
}

impl WeightSystem {
    pub fn new(b1: f64, b2: f64, b3: f64, b4: f64, b_st: f64) -> Result<Self> {
        for (name, w) in [("B1", b1), ("B2", b2), ("B3", b3), ("B4", b4), ("B_ST", b_st)] {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "weight {name} must be positive and finite, got {w}"
                )));
            }
        }
        Ok(WeightSystem { b1, b2, b3, b4, b_st })
    }

    pub fn from_weights(w: &crate::geom::Weights) -> Result<Self> {
        Self::new(w.b1, w.b2, w.b3, w.b4, w.b_st())
    }

    pub fn unit() -> Self {
        WeightSystem { b1: 1.0, b2: 1.0, b3: 1.0, b4: 1.0, b_st: 1.0 }
    }

    /// Strict weight-triangle inequalities at both nodes.
    pub fn check_feasible(&self) -> Result<()> {
        check_triangle("O12", self.b1, self.b2, self.b_st)?;
        check_triangle("O34", self.b3, self.b4, self.b_st)
    }
}

fn check_triangle(node: &'static str, bi: f64, bj: f64, b_st: f64) -> Result<()> {
    if (bi - bj).abs() < b_st && b_st < bi + bj {
        Ok(())
    } else {
        Err(Error::InfeasibleWeights {
            node,
            detail: format!(
                "need |{bi} - {bj}| < {b_st} < {bi} + {bj} strictly; the node degenerates onto a terminal"
            ),
        })
    }
}

fn arccos_checked(node: &'static str, arg: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&arg) {
        return Err(Error::InfeasibleWeights {
            node,
            detail: format!("equilibrium cosine {arg} outside [-1, 1]"),
        });
    }
    Ok(arg.acos())
}

/// The five equilibrium angles of the two nodes plus complements.
///
/// `alpha12` is the angle under which the node O12 sees A1 and A2; `alpha1`
/// the angle between the rays O12->A2 and O12->O34 (it pairs with B1 in the
/// sine law), `alpha2` its 1<->2 swap; same pattern at O34.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeAngles {
    pub alpha12: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha34: f64,
    pub alpha3: f64,
    pub alpha4: f64,
}

/// Equilibrium angles from the weights alone.
///
/// cos(alpha12) = (b_st^2 - b1^2 - b2^2) / (2 b1 b2), and
/// cos(alpha1) = (b1^2 - b2^2 - b_st^2) / (2 b2 b_st); the rest follow by
/// the index swaps 1<->2 and (1,2)->(3,4). The three angles at each node sum
/// to 2*pi.
pub fn node_angles(w: &WeightSystem) -> Result<NodeAngles> {
    w.check_feasible()?;
    let (b1, b2, b3, b4, bst) = (w.b1, w.b2, w.b3, w.b4, w.b_st);
    Ok(NodeAngles {
        alpha12: arccos_checked("O12", (bst * bst - b1 * b1 - b2 * b2) / (2.0 * b1 * b2))?,
        alpha1: arccos_checked("O12", (b1 * b1 - b2 * b2 - bst * bst) / (2.0 * b2 * bst))?,
        alpha2: arccos_checked("O12", (b2 * b2 - b1 * b1 - bst * bst) / (2.0 * b1 * bst))?,
        alpha34: arccos_checked("O34", (bst * bst - b3 * b3 - b4 * b4) / (2.0 * b3 * b4))?,
        alpha3: arccos_checked("O34", (b3 * b3 - b4 * b4 - bst * bst) / (2.0 * b4 * bst))?,
        alpha4: arccos_checked("O34", (b4 * b4 - b3 * b3 - bst * bst) / (2.0 * b3 * bst))?,
    })
}

/// Auxiliary-triangle data for one paired edge: the triangle erected on the
/// edge whose angles are the supplements of the node's equilibrium angles.
/// `r` is its altitude over the edge, `h_prime` the t-axis coordinate of the
/// altitude's foot. These two numbers drive the Simpson-line equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MelzakTriangle {
    pub r: f64,
    pub h_prime: f64,
    /// Apex and base angles: (pi - alpha_ij, pi - alpha_far, pi - alpha_near).
    pub third_vertex_angles: (f64, f64, f64),
}

/// Auxiliary-triangle quantities for an edge of length `a` whose near vertex
/// (the one at signed coordinate `k` on the t-axis) carries weight `b_near`
/// and whose far vertex carries `b_far`.
///
/// For the edge (A4, A3) this is called with (b_far, b_near) = (B3, B4);
/// for (A1, A2) with (B2, B1) by the 4->1, 3->2 index exchange.
pub fn melzak_quantities(
    a: f64,
    k: f64,
    b_far: f64,
    b_near: f64,
    b_st: f64,
) -> Result<MelzakTriangle> {
    if !(a > 0.0) {
        return Err(Error::InvalidInstance(format!("edge length must be positive, got {a}")));
    }
    check_triangle("edge", b_far, b_near, b_st)?;
    let alpha_far =
        arccos_checked("edge", (b_far * b_far - b_st * b_st - b_near * b_near)
            / (2.0 * b_st * b_near))?;
    let alpha_near =
        arccos_checked("edge", (b_near * b_near - b_far * b_far - b_st * b_st)
            / (2.0 * b_far * b_st))?;
    let alpha_apex =
        arccos_checked("edge", (b_st * b_st - b_far * b_far - b_near * b_near)
            / (2.0 * b_far * b_near))?;
    let r = (b_near / b_st) * a * alpha_far.sin();
    // cot(pi - alpha_near) written via tan to keep the sign for acute angles.
    let h_prime = k + r / (std::f64::consts::PI - alpha_near).tan();
    Ok(MelzakTriangle {
        r,
        h_prime,
        third_vertex_angles: (
            std::f64::consts::PI - alpha_apex,
            std::f64::consts::PI - alpha_far,
            std::f64::consts::PI - alpha_near,
        ),
    })
}

/// Circumradius quantities of the scaled weight triangle for one edge, used
/// by the revolution-surface inequality of the non-degeneracy test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeQuantities {
    /// Circumradius of the weight triangle scaled so its b_st side has
    /// length `a`.
    pub r: f64,
    /// arccos(a / (2 r)).
    pub beta: f64,
    /// Cosine of the node angle that bounds the vertex cones.
    pub cone_half_angle_cos: f64,
}

/// Computes R = a*bi*bj / sqrt of the Heron product of the weight triangle
/// (bi, bj, b_st), together with beta = arccos(a/(2R)).
///
/// Equal weights reduce to R = a/sqrt(3) and R*sin(beta) = a/(2*sqrt(3)),
/// i.e. 2r/3 and r/3 for r = (sqrt(3)/2) a.
pub fn cone_quantities(a: f64, bi: f64, bj: f64, b_st: f64) -> Result<ConeQuantities> {
    if !(a > 0.0) {
        return Err(Error::InvalidInstance(format!("edge length must be positive, got {a}")));
    }
    let factors = [
        bi + bj + b_st,
        bi + bj - b_st,
        bj + b_st - bi,
        bi + b_st - bj,
    ];
    if factors.iter().any(|&f| f <= 0.0) {
        return Err(Error::InfeasibleWeights {
            node: "edge",
            detail: format!("weight triangle ({bi}, {bj}, {b_st}) violates the strict triangle inequality"),
        });
    }
    let heron: f64 = factors.iter().product();
    let r = a * bi * bj / heron.sqrt();
    let beta = (a / (2.0 * r)).clamp(-1.0, 1.0).acos();
    Ok(ConeQuantities {
        r,
        beta,
        cone_half_angle_cos: (b_st * b_st - bi * bi - bj * bj) / (2.0 * bi * bj),
    })
}
