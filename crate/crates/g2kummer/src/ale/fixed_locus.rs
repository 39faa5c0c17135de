//! Wall-avoiding fixed loci of isometry lifts in ALE deformation spaces.
//!
//! A rotation `R` of `Im H` fixes the class of `zeta` in the quotient of the
//! deformation space by the Weyl group iff `(R tensor w) zeta = zeta` for some
//! Weyl element `w`. The solver enumerates Weyl tuples, computes the exact
//! simultaneous kernels, keeps the maximal subspaces admitting a wall-avoiding
//! witness, and deduplicates under the residual Weyl action.

use super::roots::{RootSystem, SignedPerm};
use super::DeformationPoint;
use crate::linalg::{rowspace_canonical, subspace_contains, RatMat};
use crate::quat::Rotation3;
use crate::rat::{int, Rat};
use num_traits::Zero;

/// One component of the fixed locus.
#[derive(Debug, Clone)]
pub struct FixedLocusComponent {
    /// Weyl element per input rotation realising the fix (indices into the
    /// Weyl element list of the root system)
    pub weyl_tuple: Vec<SignedPerm>,
    /// canonical basis of the solution subspace, flattened `R^{3 dim}` rows
    pub basis: Vec<Vec<Rat>>,
    /// positive roots whose wall contains the whole subspace (nonempty iff
    /// the component never meets the smooth locus)
    pub vanishing_walls: Vec<usize>,
    /// an exact off-wall point, when one exists
    pub witness: Option<DeformationPoint>,
}

impl FixedLocusComponent {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn wall_bound(&self) -> bool {
        self.witness.is_none()
    }

    /// Exact membership of a flattened deformation point.
    pub fn contains_flat(&self, flat: &[Rat]) -> bool {
        subspace_contains(&self.basis, &[flat.to_vec()])
    }
}

/// Constraint rows of `(R tensor w) zeta = zeta` on the flattened space
/// `R^{3 dim}` (column-major: charge a occupies slots `3a..3a+3`).
///
/// The condition reads `R zeta_a = signs[a] zeta_{perm[a]}` for every `a`.
fn constraint_rows(rot: &Rotation3, w: &SignedPerm, dim: usize) -> Vec<Vec<Rat>> {
    let mut rows = Vec::with_capacity(3 * dim);
    for a in 0..dim {
        let target = w.perm[a] as usize;
        let sign = int(w.signs[a] as i64);
        for r in 0..3 {
            let mut row = vec![Rat::zero(); 3 * dim];
            for c in 0..3 {
                row[3 * a + c] += rot.mat.at(r, c);
            }
            row[3 * target + r] -= sign;
            rows.push(row);
        }
    }
    rows
}

fn sum_zero_rows(dim: usize) -> Vec<Vec<Rat>> {
    (0..3)
        .map(|r| {
            let mut row = vec![Rat::zero(); 3 * dim];
            for a in 0..dim {
                row[3 * a + r] = int(1);
            }
            row
        })
        .collect()
}

/// Apply a Weyl element to a flattened deformation point: charge `a` moves to
/// slot `perm[a]` with its sign.
fn apply_weyl_flat(w: &SignedPerm, flat: &[Rat]) -> Vec<Rat> {
    let dim = w.n();
    let mut out = vec![Rat::zero(); 3 * dim];
    for a in 0..dim {
        let t = w.perm[a] as usize;
        let s = int(w.signs[a] as i64);
        for r in 0..3 {
            out[3 * t + r] = s * flat[3 * a + r];
        }
    }
    out
}

/// Roots whose wall functional vanishes identically on the subspace.
fn vanishing_walls(rs: &RootSystem, basis: &[Vec<Rat>]) -> Vec<usize> {
    let mut out = Vec::new();
    for (ri, root) in rs.positive_roots.iter().enumerate() {
        let all_zero = basis.iter().all(|b| {
            let p = DeformationPoint::from_flat(b).pair_root(root);
            p.is_zero()
        });
        if all_zero {
            out.push(ri);
        }
    }
    out
}

/// Deterministic off-wall witness: evaluate the basis along a moment curve
/// `(1, t, t^2, ...)`; every wall that is not identically zero on the
/// subspace excludes only finitely many `t`.
fn find_witness(rs: &RootSystem, basis: &[Vec<Rat>]) -> Option<DeformationPoint> {
    if basis.is_empty() {
        return None;
    }
    let d = basis.len();
    let bound = (rs.positive_roots.len() * d + 2) as i64;
    for t in 1..=bound {
        let mut flat = vec![Rat::zero(); basis[0].len()];
        let mut coef = int(1);
        for b in basis {
            for (i, &x) in b.iter().enumerate() {
                flat[i] += coef * x;
            }
            coef *= int(t);
        }
        let p = DeformationPoint::from_flat(&flat);
        if p.is_off_walls(&rs.positive_roots) {
            return Some(p);
        }
    }
    None
}

/// Canonical key of a subspace orbit under the Weyl action: the
/// lexicographically smallest canonical rowspace basis over all translates.
fn orbit_canonical_basis(basis: &[Vec<Rat>], weyl: &[SignedPerm]) -> Vec<Vec<Rat>> {
    let mut best: Option<Vec<Vec<Rat>>> = None;
    for w in weyl {
        let moved: Vec<Vec<Rat>> = basis.iter().map(|b| apply_weyl_flat(w, b)).collect();
        let canon = rowspace_canonical(&moved);
        if best.as_ref().map_or(true, |b| canon < *b) {
            best = Some(canon);
        }
    }
    best.unwrap_or_default()
}

/// Enumerate the fixed-locus components for a set of rotations acting
/// simultaneously on a deformation space.
///
/// `weyl_hints`, when given, restricts the per-rotation Weyl elements to the
/// declared ones (equivariance supplied externally); otherwise all tuples
/// with nonzero kernels are considered. Components are maximal subspaces up
/// to the Weyl action; wall-bound components (no off-wall point) are kept
/// and flagged.
pub fn fixed_locus(
    rotations: &[Rotation3],
    rs: &RootSystem,
    weyl_hints: Option<&[Vec<SignedPerm>]>,
) -> Vec<FixedLocusComponent> {
    let weyl = rs.weyl_group();
    let dim = rs.dim;
    let base_rows = if rs.sum_zero {
        sum_zero_rows(dim)
    } else {
        Vec::new()
    };

    // per rotation: the Weyl elements with a nonzero kernel
    let mut live: Vec<Vec<(SignedPerm, Vec<Vec<Rat>>)>> = Vec::new();
    for (ri, rot) in rotations.iter().enumerate() {
        let candidates: Vec<SignedPerm> = match weyl_hints {
            Some(h) => h[ri].clone(),
            None => weyl.clone(),
        };
        let mut keep = Vec::new();
        for w in candidates {
            let mut rows = constraint_rows(rot, &w, dim);
            rows.extend(base_rows.iter().cloned());
            let kernel = RatMat::from_rows(&rows).kernel_basis();
            if !kernel.is_empty() {
                keep.push((w, kernel));
            }
        }
        live.push(keep);
    }

    // intersect across rotations (cartesian product over live tuples)
    struct Raw {
        tuple: Vec<SignedPerm>,
        basis: Vec<Vec<Rat>>,
    }
    let mut raws: Vec<Raw> = Vec::new();
    let mut index = vec![0usize; rotations.len()];
    if live.iter().any(|l| l.is_empty()) {
        return Vec::new();
    }
    loop {
        let tuple: Vec<SignedPerm> = index
            .iter()
            .zip(&live)
            .map(|(&i, l)| l[i].0.clone())
            .collect();
        let mut rows = base_rows.clone();
        for (rot, w) in rotations.iter().zip(&tuple) {
            rows.extend(constraint_rows(rot, w, dim));
        }
        let kernel = RatMat::from_rows(&rows).kernel_basis();
        if !kernel.is_empty() {
            raws.push(Raw {
                tuple,
                basis: rowspace_canonical(&kernel),
            });
        }
        // advance the multi-index
        let mut pos = 0;
        loop {
            if pos == index.len() {
                break;
            }
            index[pos] += 1;
            if index[pos] < live[pos].len() {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
        if pos == index.len() {
            break;
        }
    }

    // dedup under the Weyl action
    let mut reps: Vec<(Vec<Vec<Rat>>, Raw)> = Vec::new();
    for raw in raws {
        let key = orbit_canonical_basis(&raw.basis, &weyl);
        if !reps.iter().any(|(k, _)| *k == key) {
            reps.push((key, raw));
        }
    }

    // maximality: drop subspaces strictly contained in a Weyl translate of a
    // larger one (equal dimensions cannot contain each other strictly)
    let mut keep_flags = vec![true; reps.len()];
    for i in 0..reps.len() {
        'outer: for j in 0..reps.len() {
            if i == j || reps[j].1.basis.len() <= reps[i].1.basis.len() {
                continue;
            }
            for w in &weyl {
                let moved: Vec<Vec<Rat>> = reps[j]
                    .1
                    .basis
                    .iter()
                    .map(|b| apply_weyl_flat(w, b))
                    .collect();
                if subspace_contains(&moved, &reps[i].1.basis) {
                    keep_flags[i] = false;
                    break 'outer;
                }
            }
        }
    }

    let mut components: Vec<FixedLocusComponent> = Vec::new();
    for (flag, (_, raw)) in keep_flags.into_iter().zip(reps) {
        if !flag {
            continue;
        }
        let walls = vanishing_walls(rs, &raw.basis);
        let witness = if walls.is_empty() {
            find_witness(rs, &raw.basis)
        } else {
            None
        };
        components.push(FixedLocusComponent {
            weyl_tuple: raw.tuple,
            basis: raw.basis,
            vanishing_walls: walls,
            witness,
        });
    }
    components.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.basis.cmp(&b.basis)));
    components
}

/// For an exact *off-wall* point, find the Weyl element matching a rotation
/// if the class of the point is fixed: `R zeta_a = s_a zeta_{p(a)}`. Off the
/// walls the match is unique (for A-type only `+` signs are admissible; for
/// D4 the signed match is unique because no two charges are `+-` equal).
pub fn find_weyl_match(
    rot: &Rotation3,
    rs: &RootSystem,
    zeta: &DeformationPoint,
) -> Option<SignedPerm> {
    let dim = rs.dim;
    if zeta.cols.len() != dim {
        return None;
    }
    let allow_signs = !rs.sum_zero;
    let mut perm = vec![0u8; dim];
    let mut signs = vec![0i8; dim];
    let mut used = vec![false; dim];
    for a in 0..dim {
        let img = rot.apply(zeta.cols[a]);
        let mut matched = false;
        for (b, &zb) in zeta.cols.iter().enumerate() {
            if used[b] {
                continue;
            }
            if img == zb {
                perm[a] = b as u8;
                signs[a] = 1;
                used[b] = true;
                matched = true;
                break;
            }
            if allow_signs && img == zb.neg() {
                perm[a] = b as u8;
                signs[a] = -1;
                used[b] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return None;
        }
    }
    let w = SignedPerm { perm, signs };
    if rs.admits(&w) {
        Some(w)
    } else {
        None
    }
}

/// Is the class of an off-wall point fixed by all the rotations?
pub fn is_fixed_class(rotations: &[Rotation3], rs: &RootSystem, zeta: &DeformationPoint) -> bool {
    rotations
        .iter()
        .all(|r| find_weyl_match(r, rs, zeta).is_some())
}

/// The holomorphic sphere classes of a fixed-locus component for a chosen
/// direction, evaluated at the component's witness: minimal segments for the
/// A-series, one curve per simple root paired parallel to the direction for
/// D4. Wall-bound components carry no smooth resolution and are rejected.
pub fn invariant_curve_classes(
    component: &FixedLocusComponent,
    rs: &RootSystem,
    xi_hat: crate::quat::ImVec,
) -> Result<Vec<super::CurveClass>, super::AleError> {
    let witness = component
        .witness
        .as_ref()
        .ok_or(super::AleError::WitnessOnWall)?;
    if !witness.is_off_walls(&rs.positive_roots) {
        return Err(super::AleError::WitnessOnWall);
    }
    if rs.sum_zero {
        return super::segments(&witness.cols, xi_hat);
    }
    let mut curves = Vec::new();
    for (i, root) in rs.simple_roots.iter().enumerate() {
        let pairing = witness.pair_root(root);
        if pairing.is_zero() || !pairing.is_parallel(xi_hat) {
            continue;
        }
        let mut coords = vec![0i64; rs.simple_roots.len()];
        coords[i] = 1;
        curves.push(super::CurveClass {
            kind: super::CurveKind::SimpleRoot { index: i },
            xi_hat,
            root_coords: coords,
        });
    }
    Ok(curves)
}

/// Do two subspaces of the deformation space agree up to the Weyl action?
pub fn subspace_eq_mod_weyl(a: &[Vec<Rat>], b: &[Vec<Rat>], weyl: &[SignedPerm]) -> bool {
    weyl.iter().any(|w| {
        let moved: Vec<Vec<Rat>> = b.iter().map(|v| apply_weyl_flat(w, v)).collect();
        crate::linalg::subspace_eq(a, &moved)
    })
}

/// Exact membership of a point in the Weyl orbit of a component's subspace.
pub fn orbit_contains_flat(comp: &FixedLocusComponent, weyl: &[SignedPerm], flat: &[Rat]) -> bool {
    weyl.iter()
        .any(|w| comp.contains_flat(&apply_weyl_flat(w, flat)))
}
