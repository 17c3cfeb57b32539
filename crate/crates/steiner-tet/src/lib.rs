//! Weighted Steiner minimal trees for four points in 3-space.
//!
//! Given a tetrahedron, six positive weights, and a choice of two
//! non-neighbouring edges, this crate locates the two interior weighted
//! Fermat-Torricelli nodes on the weighted Simpson line, certifies that the
//! instance admits them, computes the twist angle between the two Steiner
//! planes, and cross-checks everything against a direct variational
//! minimizer of the tree-length objective. The unweighted single-node
//! problem (one Fermat-Torricelli point for all four vertices) is solved by
//! the same frame machinery.
//!
//! Modules, bottom up:
//!
//! - [`geom`]: vector primitives, instances, and the common-perpendicular
//!   frame of the paired edges;
//! - [`equilibrium`]: weight-derived angles and auxiliary-triangle scalars;
//! - [`degeneracy`]: the interior-node certification inequalities;
//! - [`simpson`]: the intercept fixed-point solver and node recovery;
//! - [`ft`]: the unweighted single-node system;
//! - [`twist`]: the dihedral angle between the Steiner planes;
//! - [`oracle`]: the independent alternating-median minimizer.
//!
//! Angles are radians everywhere in this crate; presentation layers convert
//! to degrees at the boundary.

pub mod degeneracy;
pub mod equilibrium;
pub mod error;
pub mod ft;
pub mod geom;
pub mod oracle;
pub mod simpson;
pub mod twist;

pub use error::{Error, Result};
pub use geom::{interedge_angle, skew_frame, Pairing, Point3, SkewFrame, TetInstance, Vec3, Weights};
pub use equilibrium::{
    cone_quantities, melzak_quantities, node_angles, ConeQuantities, MelzakTriangle, NodeAngles,
    WeightSystem,
};
pub use degeneracy::{check_nondegenerate, edge_frame_coords, DegeneracyReport};
pub use simpson::{
    fixed_point_maps, recover_nodes, solve_simpson, solve_simpson_with, tree_cost,
    SimpsonOptions, SimpsonSolution, SteinerNodes, SteinerTree,
};
pub use ft::{recover_ft_point, solve_ft_system, FtSolution};
pub use twist::{twist_angle, twist_angle_normal_oracle, twist_angle_signed, TwistReport};
pub use oracle::{minimize_two_nodes, weighted_median, OracleResult};
