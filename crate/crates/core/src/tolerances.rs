//! Numerical tolerances shared by the predicates.
//!
//! Every threshold that decides a verdict lives here so that reports can echo
//! the values in force and the CLI can override them.

use serde::{Deserialize, Serialize};

/// Dead band around every critical threshold (π/2, π/4, lattice values).
pub const TOL_MARGIN: f64 = 1e-6;
/// Relative factor for classifying an eigenvalue as real: `1e-8 * (1 + ‖M‖)`.
pub const TOL_IMAG_REL: f64 = 1e-8;
/// Relative factor for rank decisions: `1e-8 * (σ_max + 1)`.
pub const TOL_RANK_REL: f64 = 1e-8;
/// Relative factor for eigenvalue clustering: `1e-3 * (1 + ‖M‖)`.
pub const TOL_CLUSTER_REL: f64 = 1e-3;
/// Clusters closer than this multiple of the clustering threshold are ambiguous.
pub const CLUSTER_AMBIGUITY_FACTOR: f64 = 4.0;
/// Membership residual for "X lies in g" / "X lies in q".
pub const TOL_MEMBERSHIP: f64 = 1e-10;
/// Collision threshold for polar images, relative to `1 + ‖image‖`.
pub const TOL_COLLISION: f64 = 1e-8;
/// Certificate tolerance for `h ∈ H` and `Y = Ad_h X`.
pub const TOL_CERTIFICATE: f64 = 1e-7;
/// Residual tolerance for the isotropy and fourth-power predicates.
pub const TOL_GROUP_IDENTITY: f64 = 1e-8;
/// Equality bands for the orbit classifier, relative to `1 + ‖Z‖²`.
pub const TOL_ORBIT_BAND: f64 = 1e-8;
/// Zero band for Hermitian signatures, relative to `max |eigenvalue| + 1`.
pub const TOL_SIGNATURE_REL: f64 = 1e-8;

/// Tolerances in force for one run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub margin: f64,
    pub imag_rel: f64,
    pub rank_rel: f64,
    pub cluster_rel: f64,
    pub membership: f64,
    pub collision: f64,
    pub certificate: f64,
    pub group_identity: f64,
    pub orbit_band: f64,
    pub signature_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            margin: TOL_MARGIN,
            imag_rel: TOL_IMAG_REL,
            rank_rel: TOL_RANK_REL,
            cluster_rel: TOL_CLUSTER_REL,
            membership: TOL_MEMBERSHIP,
            collision: TOL_COLLISION,
            certificate: TOL_CERTIFICATE,
            group_identity: TOL_GROUP_IDENTITY,
            orbit_band: TOL_ORBIT_BAND,
            signature_rel: TOL_SIGNATURE_REL,
        }
    }
}

impl Tolerances {
    pub fn imag(&self, norm: f64) -> f64 {
        self.imag_rel * (1.0 + norm)
    }

    pub fn rank(&self, sigma_max: f64) -> f64 {
        self.rank_rel * (sigma_max + 1.0)
    }

    pub fn cluster(&self, norm: f64) -> f64 {
        self.cluster_rel * (1.0 + norm)
    }
}
