//! Gibbons-Hawking data and the combinatorial deformation spaces of ALE
//! hyperkahler four-manifolds.
//!
//! The exact side lives in [`roots`] (root systems, Weyl groups, wall-avoiding
//! fixed loci); the numerical side in [`gh`] (harmonicity, decay, and the
//! closedness of the hyperkahler triple). Shared here: charge configurations,
//! deformation points, segments, and curve classes.

pub mod fixed_locus;
pub mod gh;
pub mod roots;

pub use fixed_locus::{find_weyl_match, fixed_locus, invariant_curve_classes, FixedLocusComponent};
pub use gh::{
    gh_decay_exponent, gh_form_closedness, gh_harmonicity_residual, gh_potential, DecayFit,
    FormResidual, Scalar,
};
pub use roots::{AdeKind, RootSystem, SignedPerm};

use crate::quat::ImVec;
use crate::rat::Rat;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AleError {
    #[error("charges must sum to zero (got {0})")]
    UnbalancedCharges(String),
    #[error("at least one charge is required")]
    EmptyConfig,
    #[error("evaluation point coincides with a charge")]
    AtCharge,
    #[error("finite-difference stencil hits a charge")]
    StencilHitsCharge,
    #[error("finite-difference stencil hits a Dirac string")]
    StencilHitsString,
    #[error("only A_k (k <= 8) and D4 root data are supported, got {0}")]
    UnsupportedAde(String),
    #[error("radius ladder is degenerate")]
    DegenerateLadder,
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("witness lies on a wall")]
    WitnessOnWall,
    #[error("deformation point has the wrong number of columns: {got} != {want}")]
    ColumnMismatch { got: usize, want: usize },
}

/// A balanced multi-center charge configuration in `Im H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GHConfig {
    charges: Vec<ImVec>,
}

impl GHConfig {
    pub fn new(charges: Vec<ImVec>) -> Result<Self, AleError> {
        if charges.is_empty() {
            return Err(AleError::EmptyConfig);
        }
        let sum = charges.iter().fold(ImVec::zero(), |acc, &c| acc.add(c));
        if !sum.is_zero() {
            return Err(AleError::UnbalancedCharges(format!("{:?}", sum.coords())));
        }
        Ok(GHConfig { charges })
    }

    pub fn charges(&self) -> &[ImVec] {
        &self.charges
    }

    pub fn len(&self) -> usize {
        self.charges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charges.is_empty()
    }

    /// All charges pairwise distinct (the smooth locus of the deformation space).
    pub fn is_smooth(&self) -> bool {
        for a in 0..self.charges.len() {
            for b in a + 1..self.charges.len() {
                if self.charges[a] == self.charges[b] {
                    return false;
                }
            }
        }
        true
    }
}

/// A point of the deformation space `(Im H) tensor R^n`: one `Im H` column
/// per coordinate of the root-space model (for `A_k` these are the `k+1`
/// charges, constrained to sum to zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationPoint {
    pub cols: Vec<ImVec>,
}

impl DeformationPoint {
    pub fn new(cols: Vec<ImVec>) -> Self {
        DeformationPoint { cols }
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    /// Flatten column-major into `R^{3n}`.
    pub fn flatten(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(3 * self.cols.len());
        for c in &self.cols {
            out.extend_from_slice(&c.coords());
        }
        out
    }

    pub fn from_flat(v: &[Rat]) -> Self {
        assert_eq!(v.len() % 3, 0);
        let cols = v.chunks(3).map(|c| ImVec::new(c[0], c[1], c[2])).collect();
        DeformationPoint { cols }
    }

    /// Pairing with a root: `zeta(alpha) = sum_a alpha_a zeta_a in Im H`.
    pub fn pair_root(&self, root: &[i64]) -> ImVec {
        let mut acc = ImVec::zero();
        for (a, &coef) in root.iter().enumerate() {
            acc = acc.add(self.cols[a].scale(crate::rat::int(coef)));
        }
        acc
    }

    /// Off every wall of the given positive roots?
    pub fn is_off_walls(&self, positive_roots: &[Vec<i64>]) -> bool {
        positive_roots.iter().all(|r| !self.pair_root(r).is_zero())
    }
}

/// The topological type and data of an invariant holomorphic curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    /// minimal segment between two charges (indices into the configuration)
    Segment { from: usize, to: usize },
    /// curve attached to a simple root (index into the simple system)
    SimpleRoot { index: usize },
}

/// A sphere class in the resolved four-manifold, holomorphic for the complex
/// structure singled out by `xi_hat`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    pub kind: CurveKind,
    /// the distinguished direction in `Im H` (exact, not necessarily unit)
    pub xi_hat: ImVec,
    /// coordinates in the simple-root basis ordered by adjacency
    pub root_coords: Vec<i64>,
}

/// All minimal segments of direction `xi_hat` with endpoints in the charge
/// set and charge-free interior; these are the sphere classes of the
/// Gibbons-Hawking picture. Exact.
pub fn segments(charges: &[ImVec], xi_hat: ImVec) -> Result<Vec<CurveClass>, AleError> {
    if xi_hat.is_zero() {
        return Err(AleError::ZeroDirection);
    }
    let norm2 = xi_hat.norm_sq();
    // per charge: position along the line and the transverse offset, both
    // exact; charges share a line iff the scaled offsets agree
    let mut lines: Vec<(ImVec, Vec<(Rat, usize)>)> = Vec::new();
    for (idx, &z) in charges.iter().enumerate() {
        let t = z.dot(xi_hat);
        let eta = z.scale(norm2).sub(xi_hat.scale(t));
        match lines.iter_mut().find(|(e, _)| *e == eta) {
            Some((_, v)) => v.push((t, idx)),
            None => lines.push((eta, vec![(t, idx)])),
        }
    }
    lines.sort_by(|a, b| a.0.cmp(&b.0));
    let mut curves = Vec::new();
    for (_, mut pts) in lines {
        pts.sort();
        for w in pts.windows(2) {
            let ((t0, _i0), (t1, _i1)) = (w[0], w[1]);
            if t0 == t1 {
                continue; // coincident charges: a wall, not a sphere
            }
            curves.push(CurveClass {
                kind: CurveKind::Segment {
                    from: w[0].1,
                    to: w[1].1,
                },
                xi_hat,
                root_coords: Vec::new(),
            });
        }
    }
    // adjacency-ordered simple-root coordinates: curve j carries unit vector j
    let total = curves.len();
    for (j, c) in curves.iter_mut().enumerate() {
        let mut coords = vec![0i64; total];
        coords[j] = 1;
        c.root_coords = coords;
    }
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn balanced_config_validation() {
        assert!(GHConfig::new(vec![]).is_err());
        let bad = GHConfig::new(vec![ImVec::from_i64(1, 0, 0)]);
        assert!(matches!(bad, Err(AleError::UnbalancedCharges(_))));
        let ok = GHConfig::new(vec![ImVec::from_i64(1, 0, 0), ImVec::from_i64(-1, 0, 0)]);
        assert!(ok.is_ok());
    }

    #[test]
    fn segments_of_aligned_pair() {
        // charges +-zeta on the i-axis, direction i: exactly one segment
        let z = ImVec::new(rat(1, 4), int(0), int(0));
        let cs = vec![z, z.neg()];
        let segs = segments(&cs, ImVec::basis(0)).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].kind, CurveKind::Segment { from: 1, to: 0 });
    }

    #[test]
    fn segments_orthogonal_direction_is_empty() {
        let z = ImVec::new(rat(1, 4), int(0), int(0));
        let cs = vec![z, z.neg()];
        let segs = segments(&cs, ImVec::basis(1)).unwrap();
        assert!(segs.is_empty());
    }

    #[test]
    fn segments_three_collinear() {
        // -c, 0, +c on the i-axis: two minimal segments
        let c = ImVec::new(rat(1, 2), int(0), int(0));
        let cs = vec![c.neg(), ImVec::zero(), c];
        let segs = segments(&cs, ImVec::basis(0)).unwrap();
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0].kind, CurveKind::Segment { from: 0, to: 1 });
        assert_eq!(segs[1].kind, CurveKind::Segment { from: 1, to: 2 });
        assert_eq!(segs[0].root_coords, vec![1, 0]);
        assert_eq!(segs[1].root_coords, vec![0, 1]);
    }

    #[test]
    fn segments_respect_interior_charges() {
        // four charges on one line: the long pairs are not minimal
        let u = |n: i64| ImVec::new(int(n), int(0), int(0));
        let cs = vec![u(-3), u(-1), u(1), u(3)];
        let segs = segments(&cs, ImVec::basis(0)).unwrap();
        assert_eq!(segs.len(), 3);
    }

    #[test]
    fn deformation_point_pairing() {
        let p = DeformationPoint::new(vec![
            ImVec::from_i64(1, 0, 0),
            ImVec::from_i64(0, 1, 0),
            ImVec::from_i64(-1, -1, 0),
        ]);
        let w = p.pair_root(&[1, -1, 0]);
        assert_eq!(w, ImVec::from_i64(1, -1, 0));
        let flat = p.flatten();
        assert_eq!(DeformationPoint::from_flat(&flat), p);
    }
}
