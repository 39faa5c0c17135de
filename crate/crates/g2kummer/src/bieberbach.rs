//! The six Bieberbach group classes on `Im H`, their eligible mapping-torus
//! axes, and the quotient base orbifolds with singularity data.
//!
//! A group is stored as a lattice `L = <l1, l2, l3>` together with affine
//! generators `(R, t)` whose rotation parts are integer matrices in the
//! lattice basis. All congruences are solved exactly.

use crate::linalg::{
    gcd_i64, in_column_lattice, primitive_integer, smith_normal_form, solve_torus_congruence, IMat,
    RatMat,
};
use crate::quat::{ImVec, Rotation3};
use crate::rat::{frac_mod1, int, rat, Rat};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BieberbachError {
    #[error("lattice basis is linearly dependent")]
    DegenerateLattice,
    #[error("class constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("generator count does not match class {0:?}")]
    GeneratorCount(ClassTag),
    #[error("rotation does not preserve the lattice")]
    NotLatticePreserving,
    #[error("axis is not an eligible primitive lattice vector")]
    IneligibleAxis,
    #[error("symmetry does not normalise the lattice and axis")]
    NonNormalising,
}

/// The isomorphism type of the point group `H = G / L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassTag {
    /// trivial holonomy, `G = L`
    #[serde(rename = "1")]
    Trivial,
    C2,
    C3,
    C4,
    C6,
    /// the Klein four-group `C2 x C2`
    C2xC2,
}

impl ClassTag {
    pub const ALL: [ClassTag; 6] = [
        ClassTag::Trivial,
        ClassTag::C2,
        ClassTag::C3,
        ClassTag::C4,
        ClassTag::C6,
        ClassTag::C2xC2,
    ];

    pub fn order(self) -> usize {
        match self {
            ClassTag::Trivial => 1,
            ClassTag::C2 => 2,
            ClassTag::C3 => 3,
            ClassTag::C4 => 4,
            ClassTag::C6 => 6,
            ClassTag::C2xC2 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassTag::Trivial => "1",
            ClassTag::C2 => "C2",
            ClassTag::C3 => "C3",
            ClassTag::C4 => "C4",
            ClassTag::C6 => "C6",
            ClassTag::C2xC2 => "C2xC2",
        }
    }
}

/// Rotation parts of the non-lattice generators, as integer matrices in the
/// lattice basis (columns are images of basis vectors).
pub fn class_rotations(class: ClassTag) -> Vec<IMat> {
    let m =
        |rows: [[i64; 3]; 3]| IMat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    match class {
        ClassTag::Trivial => vec![],
        ClassTag::C2 => vec![m([[1, 0, 0], [0, -1, 0], [0, 0, -1]])],
        ClassTag::C3 => vec![m([[1, 0, 0], [0, -1, 1], [0, -1, 0]])],
        ClassTag::C4 => vec![m([[1, 0, 0], [0, 0, 1], [0, -1, 0]])],
        ClassTag::C6 => vec![m([[1, 0, 0], [0, 1, -1], [0, 1, 0]])],
        ClassTag::C2xC2 => vec![
            m([[1, 0, 0], [0, -1, 0], [0, 0, -1]]),
            m([[-1, 0, 0], [0, 1, 0], [0, 0, -1]]),
        ],
    }
}

/// Default translations for the non-lattice generators, in lattice coordinates.
pub fn class_translations(class: ClassTag) -> Vec<[Rat; 3]> {
    match class {
        ClassTag::Trivial => vec![],
        ClassTag::C2 => vec![[rat(1, 2), int(0), int(0)]],
        ClassTag::C3 => vec![[rat(1, 3), int(0), int(0)]],
        ClassTag::C4 => vec![[rat(1, 4), int(0), int(0)]],
        ClassTag::C6 => vec![[rat(1, 6), int(0), int(0)]],
        ClassTag::C2xC2 => {
            vec![
                [rat(1, 2), rat(1, 2), int(0)],
                [int(0), rat(1, 2), rat(1, 2)],
            ]
        }
    }
}

/// A rank-3 lattice in `Im H` with its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub basis: [ImVec; 3],
    pub gram: RatMat,
}

impl Lattice {
    pub fn new(basis: [ImVec; 3]) -> Result<Self, BieberbachError> {
        let b = Self::basis_matrix_of(&basis);
        if b.det().is_zero() {
            return Err(BieberbachError::DegenerateLattice);
        }
        let mut gram = RatMat::zeros(3, 3);
        for r in 0..3 {
            for c in 0..3 {
                gram.set(r, c, basis[r].dot(basis[c]));
            }
        }
        Ok(Lattice { basis, gram })
    }

    pub fn cubic() -> Self {
        Lattice::new([ImVec::basis(0), ImVec::basis(1), ImVec::basis(2)]).unwrap()
    }

    /// Integer model of the hexagonal constraint set: `l1 = i+j+k`,
    /// `l2 = i-j`, `l3 = j-k`. Used for the C3 and C6 classes.
    pub fn hexagonal() -> Self {
        Lattice::new([
            ImVec::from_i64(1, 1, 1),
            ImVec::from_i64(1, -1, 0),
            ImVec::from_i64(0, 1, -1),
        ])
        .unwrap()
    }

    fn basis_matrix_of(basis: &[ImVec; 3]) -> RatMat {
        let mut b = RatMat::zeros(3, 3);
        for (c, v) in basis.iter().enumerate() {
            let co = v.coords();
            for r in 0..3 {
                b.set(r, c, co[r]);
            }
        }
        b
    }

    /// Columns are the basis vectors (ambient coordinates).
    pub fn basis_matrix(&self) -> RatMat {
        Self::basis_matrix_of(&self.basis)
    }

    /// Ambient point from lattice coordinates.
    pub fn point(&self, coords: &[Rat; 3]) -> ImVec {
        let out = self.basis_matrix().mul_vec(&coords.to_vec());
        ImVec::new(out[0], out[1], out[2])
    }

    pub fn vector_from_i64(&self, coords: [i64; 3]) -> ImVec {
        self.point(&[int(coords[0]), int(coords[1]), int(coords[2])])
    }

    /// Lattice coordinates of an ambient vector.
    pub fn coords(&self, v: ImVec) -> [Rat; 3] {
        let inv = self.basis_matrix().inverse().expect("nondegenerate");
        let out = inv.mul_vec(&v.coords().to_vec());
        [out[0], out[1], out[2]]
    }

    pub fn contains(&self, v: ImVec) -> bool {
        self.coords(v).iter().all(|c| c.is_integer())
    }

    /// Is `v` a primitive lattice vector (gcd of integer coordinates is 1)?
    pub fn is_primitive(&self, v: ImVec) -> bool {
        let c = self.coords(v);
        if !c.iter().all(|x| x.is_integer()) {
            return false;
        }
        let g = c.iter().fold(0i64, |g, x| gcd_i64(g, *x.numer()));
        g == 1
    }
}

fn check_class_constraints(class: ClassTag, gram: &RatMat) -> Result<(), BieberbachError> {
    let g = |r: usize, c: usize| gram.at(r, c);
    let fail = |msg: String| Err(BieberbachError::ConstraintViolated(msg));
    let need_zero = |r: usize, c: usize| -> Result<(), BieberbachError> {
        if !g(r, c).is_zero() {
            return fail(format!("<l{}, l{}> = {} != 0", r + 1, c + 1, g(r, c)));
        }
        Ok(())
    };
    match class {
        ClassTag::Trivial => Ok(()),
        ClassTag::C2 => {
            need_zero(0, 1)?;
            need_zero(0, 2)
        }
        ClassTag::C3 | ClassTag::C6 => {
            need_zero(0, 1)?;
            need_zero(0, 2)?;
            if g(1, 1) != g(2, 2) {
                return fail(format!("|l2|^2 = {} != |l3|^2 = {}", g(1, 1), g(2, 2)));
            }
            if g(1, 1) != -int(2) * g(1, 2) {
                return fail(format!(
                    "|l2|^2 = {} != -2<l2,l3> = {}",
                    g(1, 1),
                    -int(2) * g(1, 2)
                ));
            }
            Ok(())
        }
        ClassTag::C4 => {
            need_zero(0, 1)?;
            need_zero(0, 2)?;
            if g(1, 1) != g(2, 2) {
                return fail(format!("|l2|^2 = {} != |l3|^2 = {}", g(1, 1), g(2, 2)));
            }
            need_zero(1, 2)
        }
        ClassTag::C2xC2 => {
            need_zero(0, 1)?;
            need_zero(1, 2)?;
            need_zero(2, 0)
        }
    }
}

/// An affine isometry `(R, t)` with `R` stored both as an integer matrix in
/// the lattice basis and as the ambient rational rotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineIsometry {
    pub rot_lattice: IMat,
    pub rot: Rotation3,
    /// translation in lattice coordinates
    pub trans: [Rat; 3],
}

impl AffineIsometry {
    pub fn new(
        lattice: &Lattice,
        rot_lattice: IMat,
        trans: [Rat; 3],
    ) -> Result<Self, BieberbachError> {
        let b = lattice.basis_matrix();
        let ambient = b.mul(&rot_lattice.to_rat()).mul(&b.inverse().unwrap());
        let rot = Rotation3::new(ambient).map_err(|_| BieberbachError::NotLatticePreserving)?;
        Ok(AffineIsometry {
            rot_lattice,
            rot,
            trans,
        })
    }
}

/// A coset representative of `G / L`: rotation part and translation mod 1,
/// in lattice coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetElement {
    pub rot: IMat,
    pub trans: [Rat; 3],
}

impl CosetElement {
    fn compose(&self, other: &CosetElement) -> CosetElement {
        // (R1, t1) * (R2, t2) = (R1 R2, t1 + R1 t2)
        let rot = IMat::from_rows(
            &(0..3)
                .map(|r| {
                    (0..3)
                        .map(|c| (0..3).map(|k| self.rot.at(r, k) * other.rot.at(k, c)).sum())
                        .collect()
                })
                .collect::<Vec<Vec<i64>>>(),
        );
        let rt = self.rot.to_rat().mul_vec(&other.trans.to_vec());
        let trans = [
            frac_mod1(self.trans[0] + rt[0]),
            frac_mod1(self.trans[1] + rt[1]),
            frac_mod1(self.trans[2] + rt[2]),
        ];
        CosetElement { rot, trans }
    }

    pub fn is_identity(&self) -> bool {
        self.rot == IMat::identity(3) && self.trans.iter().all(|t| t.is_zero())
    }
}

/// A Bieberbach group on `Im H`: lattice plus the extra affine generators.
#[derive(Debug, Clone)]
pub struct BieberbachGroup {
    pub class: ClassTag,
    pub lattice: Lattice,
    pub generators: Vec<AffineIsometry>,
}

impl BieberbachGroup {
    /// Canonical group of the given class over the given lattice.
    pub fn new(class: ClassTag, lattice: Lattice) -> Result<Self, BieberbachError> {
        let trans = class_translations(class);
        Self::with_translations(class, lattice, &trans)
    }

    /// Same rotations, custom translations (lattice coordinates). The lattice
    /// constraints are still enforced; torsion-freeness is *not* (use
    /// [`torsion_free_check`]).
    pub fn with_translations(
        class: ClassTag,
        lattice: Lattice,
        translations: &[[Rat; 3]],
    ) -> Result<Self, BieberbachError> {
        check_class_constraints(class, &lattice.gram)?;
        let rots = class_rotations(class);
        if translations.len() != rots.len() {
            return Err(BieberbachError::GeneratorCount(class));
        }
        let mut generators = Vec::new();
        for (rot, t) in rots.into_iter().zip(translations) {
            generators.push(AffineIsometry::new(&lattice, rot, *t)?);
        }
        Ok(BieberbachGroup {
            class,
            lattice,
            generators,
        })
    }

    pub fn canonical(class: ClassTag) -> Self {
        let lattice = match class {
            ClassTag::C3 | ClassTag::C6 => Lattice::hexagonal(),
            _ => Lattice::cubic(),
        };
        BieberbachGroup::new(class, lattice).expect("canonical data is consistent")
    }

    /// The finite quotient `H = G / L` as coset representatives, by closure.
    pub fn quotient_elements(&self) -> Vec<CosetElement> {
        let mut elems = vec![CosetElement {
            rot: IMat::identity(3),
            trans: [Rat::zero(); 3],
        }];
        let gens: Vec<CosetElement> = self
            .generators
            .iter()
            .map(|g| CosetElement {
                rot: g.rot_lattice.clone(),
                trans: [
                    frac_mod1(g.trans[0]),
                    frac_mod1(g.trans[1]),
                    frac_mod1(g.trans[2]),
                ],
            })
            .collect();
        let mut frontier = elems.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for e in &frontier {
                for g in &gens {
                    let prod = e.compose(g);
                    if !elems.contains(&prod) {
                        elems.push(prod.clone());
                        next.push(prod);
                    }
                }
            }
            frontier = next;
            assert!(elems.len() <= 12, "point group closure runaway");
        }
        elems
    }

    /// Verify `H` is isomorphic to the class tag (order plus element orders).
    pub fn quotient_matches_class(&self) -> bool {
        let elems = self.quotient_elements();
        if elems.len() != self.class.order() {
            return false;
        }
        let rot_order = |m: &IMat| -> usize {
            let mut p = m.clone();
            let mut o = 1;
            while p != IMat::identity(3) {
                let next = CosetElement {
                    rot: p,
                    trans: [Rat::zero(); 3],
                }
                .compose(&CosetElement {
                    rot: m.clone(),
                    trans: [Rat::zero(); 3],
                });
                p = next.rot;
                o += 1;
                assert!(o <= 6, "rotation order out of range");
            }
            o
        };
        let max_order = elems.iter().map(|e| rot_order(&e.rot)).max().unwrap_or(1);
        match self.class {
            ClassTag::Trivial => true,
            ClassTag::C2 => max_order == 2,
            ClassTag::C3 => max_order == 3,
            ClassTag::C4 => max_order == 4,
            ClassTag::C6 => max_order == 6,
            ClassTag::C2xC2 => max_order == 2,
        }
    }
}

/// Witness for a torsion element: a fixed point of a nontrivial coset.
#[derive(Debug, Clone)]
pub struct TorsionWitness {
    /// lattice coordinates of a fixed point on the torus
    pub point: [Rat; 3],
    pub element: CosetElement,
}

/// A group is torsion-free iff no nontrivial coset `(R, t)` admits a solution
/// of `R x + t = x (mod L)`. Returns the witness on failure.
pub fn torsion_free_check(group: &BieberbachGroup) -> Result<bool, TorsionWitness> {
    for e in group.quotient_elements() {
        if e.rot == IMat::identity(3) {
            continue;
        }
        // (R - I) x == -t (mod Z^3) in lattice coordinates
        let mut a = e.rot.clone();
        for d in 0..3 {
            a.set(d, d, a.at(d, d) - 1);
        }
        let s = [-e.trans[0], -e.trans[1], -e.trans[2]];
        let sol = solve_torus_congruence(&a, &s);
        if let Some(off) = sol.offsets.first() {
            return Err(TorsionWitness {
                point: [off[0], off[1], off[2]],
                element: e,
            });
        }
    }
    Ok(true)
}

/// Primitive lattice vectors (up to sign) that are simultaneous eigenvectors
/// of every rotation part, i.e. the directions with `Z xi` normal in `G`.
///
/// Eigenspaces of dimension > 1 contain infinitely many primitive vectors;
/// for those, representatives of coordinate height at most `height_bound`
/// are returned.
pub fn eligible_axes(group: &BieberbachGroup, height_bound: i64) -> Vec<[i64; 3]> {
    let rots: Vec<IMat> = group
        .generators
        .iter()
        .map(|g| g.rot_lattice.clone())
        .collect();
    if rots.is_empty() {
        return primitive_vectors_up_to(height_bound);
    }
    let mut found: Vec<[i64; 3]> = Vec::new();
    let n = rots.len();
    // one sign choice (+-1 eigenvalue) per generator
    for mask in 0..(1u32 << n) {
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for (gi, r) in rots.iter().enumerate() {
            let sign: i64 = if mask & (1 << gi) == 0 { 1 } else { -1 };
            for rr in 0..3 {
                let mut row = Vec::new();
                for cc in 0..3 {
                    let mut v = int(r.at(rr, cc));
                    if rr == cc {
                        v -= int(sign);
                    }
                    row.push(v);
                }
                rows.push(row);
            }
        }
        let kernel = RatMat::from_rows(&rows).kernel_basis();
        match kernel.len() {
            0 => {}
            1 => {
                let p = primitive_integer(&kernel[0]);
                let p = [p[0], p[1], p[2]];
                if !found.contains(&p) {
                    found.push(p);
                }
            }
            _ => {
                for cand in primitive_vectors_up_to(height_bound) {
                    let v: Vec<Rat> = cand.iter().map(|&x| int(x)).collect();
                    if crate::linalg::subspace_contains(&kernel, &[v]) && !found.contains(&cand) {
                        found.push(cand);
                    }
                }
            }
        }
    }
    found.sort();
    found
}

fn primitive_vectors_up_to(h: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for a in -h..=h {
        for b in -h..=h {
            for c in -h..=h {
                let g = gcd_i64(gcd_i64(a, b), c);
                if g != 1 {
                    continue;
                }
                let v = [a, b, c];
                let first = v.iter().find(|&&x| x != 0).copied().unwrap_or(0);
                if first < 0 {
                    continue; // keep one representative per sign pair
                }
                out.push(v);
            }
        }
    }
    out.sort();
    out
}

/// Does `(id, xi)` commute with every generator, i.e. `R xi = xi` for every
/// rotation part?
pub fn is_central(group: &BieberbachGroup, xi: [i64; 3]) -> bool {
    let v = vec![int(xi[0]), int(xi[1]), int(xi[2])];
    group
        .generators
        .iter()
        .all(|g| g.rot_lattice.to_rat().mul_vec(&v) == v)
}

/// Is `Z xi` normal in `G`, i.e. is `xi` an eigenvector (eigenvalue +-1) of
/// every rotation part?
pub fn axis_is_normal(group: &BieberbachGroup, xi: [i64; 3]) -> bool {
    let v = vec![int(xi[0]), int(xi[1]), int(xi[2])];
    group.generators.iter().all(|g| {
        let img = g.rot_lattice.to_rat().mul_vec(&v);
        img == v || img == vec![-v[0], -v[1], -v[2]]
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbifoldTopology {
    Torus,
    KleinBottle,
    /// quotient with cone points
    Orbifold,
}

/// A singular point of the base orbifold `M / H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularPoint {
    /// orbit representative in the quotient-lattice basis, in `[0,1)^2`,
    /// lexicographically smallest in its orbit
    pub point: [Rat; 2],
    /// order of the (cyclic) isotropy group
    pub isotropy_order: usize,
}

/// The base 2-orbifold `M / H` for an eligible axis.
#[derive(Debug, Clone)]
pub struct BaseOrbifold {
    pub axis: [i64; 3],
    /// integer basis of the quotient lattice `L / Z xi` (lattice coordinates)
    pub quotient_basis: [[i64; 3]; 2],
    /// induced action of each nontrivial coset: 2x2 integer matrix + translation
    pub actions: Vec<(IMat, [Rat; 2])>,
    pub singular_points: Vec<SingularPoint>,
    pub n_f: usize,
    pub topology: OrbifoldTopology,
    pub orientation_preserving: bool,
}

/// Build the base orbifold `M/H`, `M = (Im H / R xi) / (L / Z xi)`, for a
/// primitive eligible axis given in lattice coordinates.
pub fn base_orbifold(
    group: &BieberbachGroup,
    xi: [i64; 3],
) -> Result<BaseOrbifold, BieberbachError> {
    let g = gcd_i64(gcd_i64(xi[0], xi[1]), xi[2]);
    if g != 1 || !axis_is_normal(group, xi) {
        return Err(BieberbachError::IneligibleAxis);
    }
    // complete xi to a Z-basis of Z^3: u * xi = e1 for unimodular u, so the
    // last two columns of u^-1 complete the axis
    let col = IMat::from_rows(&[vec![xi[0]], vec![xi[1]], vec![xi[2]]]);
    let (u, d, _v) = smith_normal_form(&col);
    assert_eq!(d.at(0, 0), 1, "primitive axis has unit Smith form");
    let u_inv = u.to_rat().inverse().unwrap();
    let to_i64 = |v: &[Rat]| -> [i64; 3] { [*v[0].numer(), *v[1].numer(), *v[2].numer()] };
    let b1 = u_inv.col(1);
    let b2 = u_inv.col(2);
    let quotient_basis = [to_i64(&b1), to_i64(&b2)];

    let mut cb = RatMat::zeros(3, 3);
    for r in 0..3 {
        cb.set(r, 0, int(xi[r]));
        cb.set(r, 1, b1[r]);
        cb.set(r, 2, b2[r]);
    }
    let cb_inv = cb.inverse().unwrap();

    let mut actions = Vec::new();
    for e in group.quotient_elements() {
        if e.is_identity() {
            continue;
        }
        // conjugate into the (xi, b1, b2) basis and restrict to the quotient
        let m = cb_inv.mul(&e.rot.to_rat()).mul(&cb);
        let mut a2 = IMat::zeros(2, 2);
        for r in 0..2 {
            for c in 0..2 {
                let v = m.at(r + 1, c + 1);
                assert!(v.is_integer(), "quotient action must be integral");
                a2.set(r, c, *v.numer());
            }
        }
        let t3 = cb_inv.mul_vec(&e.trans.to_vec());
        let t2 = [frac_mod1(t3[1]), frac_mod1(t3[2])];
        actions.push((a2, t2));
    }

    let orientation_preserving = actions.iter().all(|(a, _)| a.to_rat().det() == int(1));

    let mut raw_points: Vec<[Rat; 2]> = Vec::new();
    for (a, t) in &actions {
        let mut m = a.clone();
        for dd in 0..2 {
            m.set(dd, dd, m.at(dd, dd) - 1);
        }
        let s = [-t[0], -t[1]];
        let sol = solve_torus_congruence(&m, &s);
        if !sol.directions.is_empty() {
            // a positive-dimensional fixed locus contributes no cone point
            continue;
        }
        for off in sol.offsets {
            let p = [off[0], off[1]];
            if !raw_points.contains(&p) {
                raw_points.push(p);
            }
        }
    }

    let apply = |a: &IMat, t: &[Rat; 2], p: &[Rat; 2]| -> [Rat; 2] {
        [
            frac_mod1(int(a.at(0, 0)) * p[0] + int(a.at(0, 1)) * p[1] + t[0]),
            frac_mod1(int(a.at(1, 0)) * p[0] + int(a.at(1, 1)) * p[1] + t[1]),
        ]
    };
    let mut singular_points: Vec<SingularPoint> = Vec::new();
    let mut seen: Vec<[Rat; 2]> = Vec::new();
    raw_points.sort();
    for p in &raw_points {
        if seen.contains(p) {
            continue;
        }
        let mut orbit = vec![*p];
        let mut frontier = vec![*p];
        while let Some(q) = frontier.pop() {
            for (a, t) in &actions {
                let img = apply(a, t, &q);
                if !orbit.contains(&img) {
                    orbit.push(img);
                    frontier.push(img);
                }
            }
        }
        let stab = 1 + actions.iter().filter(|(a, t)| apply(a, t, p) == *p).count();
        orbit.sort();
        seen.extend(orbit.iter().copied());
        singular_points.push(SingularPoint {
            point: orbit[0],
            isotropy_order: stab,
        });
    }
    singular_points.sort_by(|a, b| a.point.cmp(&b.point));

    let n_f = singular_points.len();
    let topology = if actions.is_empty() {
        OrbifoldTopology::Torus
    } else if n_f > 0 {
        OrbifoldTopology::Orbifold
    } else if orientation_preserving {
        OrbifoldTopology::Torus
    } else {
        OrbifoldTopology::KleinBottle
    };

    Ok(BaseOrbifold {
        axis: xi,
        quotient_basis,
        actions,
        singular_points,
        n_f,
        topology,
        orientation_preserving,
    })
}

/// The induced action of an extra symmetry on `H_1` of the quotient 2-torus,
/// in the quotient-lattice basis. The rotation must preserve the lattice and
/// map the axis to `+-` itself; translations act trivially on `H_1`.
pub fn quotient_action_matrix(
    group: &BieberbachGroup,
    xi: [i64; 3],
    kappa_rot_lattice: &IMat,
) -> Result<IMat, BieberbachError> {
    let base = base_orbifold(group, xi)?;
    let v = vec![int(xi[0]), int(xi[1]), int(xi[2])];
    let img = kappa_rot_lattice.to_rat().mul_vec(&v);
    if img != v && img != vec![-v[0], -v[1], -v[2]] {
        return Err(BieberbachError::NonNormalising);
    }
    let mut cb = RatMat::zeros(3, 3);
    for r in 0..3 {
        cb.set(r, 0, int(xi[r]));
        cb.set(r, 1, int(base.quotient_basis[0][r]));
        cb.set(r, 2, int(base.quotient_basis[1][r]));
    }
    let m = cb
        .inverse()
        .unwrap()
        .mul(&kappa_rot_lattice.to_rat())
        .mul(&cb);
    let mut a2 = IMat::zeros(2, 2);
    for r in 0..2 {
        for c in 0..2 {
            let val = m.at(r + 1, c + 1);
            if !val.is_integer() {
                return Err(BieberbachError::NonNormalising);
            }
            a2.set(r, c, *val.numer());
        }
    }
    Ok(a2)
}

/// Dimension of the subspace of `Hom(pi_1(M), R)` invariant under the
/// transpose of the given `H_1` actions; nonzero dimension obstructs the
/// exactness mechanism.
pub fn invariant_hom_dimension(actions_on_h1: &[IMat]) -> usize {
    if actions_on_h1.is_empty() {
        return 2;
    }
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for a in actions_on_h1 {
        let at = a.to_rat().transpose();
        for r in 0..2 {
            let mut row = Vec::new();
            for c in 0..2 {
                let mut v = at.at(r, c);
                if r == c {
                    v -= Rat::one();
                }
                row.push(v);
            }
            rows.push(row);
        }
    }
    RatMat::from_rows(&rows).kernel_basis().len()
}

/// Serialisable description of a group (the fixture wire format).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDescription {
    pub class: ClassTag,
    /// rows are the lattice basis vectors as rational triples
    pub lattice: Vec<Vec<crate::rat::Q>>,
    /// translations of the non-lattice generators, lattice coordinates
    pub translations: Vec<Vec<crate::rat::Q>>,
}

impl GroupDescription {
    pub fn from_group(g: &BieberbachGroup) -> Self {
        GroupDescription {
            class: g.class,
            lattice: g
                .lattice
                .basis
                .iter()
                .map(|v| v.coords().iter().map(|&r| r.into()).collect())
                .collect(),
            translations: g
                .generators
                .iter()
                .map(|gen| gen.trans.iter().map(|&r| r.into()).collect())
                .collect(),
        }
    }

    pub fn to_group(&self) -> Result<BieberbachGroup, BieberbachError> {
        let vecs: Vec<ImVec> = self
            .lattice
            .iter()
            .map(|row| ImVec::new(row[0].to_rat(), row[1].to_rat(), row[2].to_rat()))
            .collect();
        if vecs.len() != 3 {
            return Err(BieberbachError::DegenerateLattice);
        }
        let lattice = Lattice::new([vecs[0], vecs[1], vecs[2]])?;
        let trans: Vec<[Rat; 3]> = self
            .translations
            .iter()
            .map(|row| [row[0].to_rat(), row[1].to_rat(), row[2].to_rat()])
            .collect();
        BieberbachGroup::with_translations(self.class, lattice, &trans)
    }
}

/// Express an ambient rotation as an integer matrix in the lattice basis.
pub fn ambient_to_lattice(lattice: &Lattice, rot: &Rotation3) -> Result<IMat, BieberbachError> {
    let b = lattice.basis_matrix();
    let m = b.inverse().unwrap().mul(&rot.mat).mul(&b);
    let mut out = IMat::zeros(3, 3);
    for r in 0..3 {
        for c in 0..3 {
            let v = m.at(r, c);
            if !v.is_integer() {
                return Err(BieberbachError::NotLatticePreserving);
            }
            out.set(r, c, *v.numer());
        }
    }
    Ok(out)
}

/// Membership of an ambient vector in the lattice.
pub fn in_lattice(lattice: &Lattice, v: ImVec) -> bool {
    let b = lattice.basis_matrix();
    let mut denom: i64 = 1;
    for r in 0..3 {
        for c in 0..3 {
            denom = denom / gcd_i64(denom, *b.at(r, c).denom()) * *b.at(r, c).denom();
        }
    }
    let mut ai = IMat::zeros(3, 3);
    for r in 0..3 {
        for c in 0..3 {
            let x = b.at(r, c) * int(denom);
            ai.set(r, c, *x.numer());
        }
    }
    let scaled: Vec<Rat> = v.coords().iter().map(|&x| x * int(denom)).collect();
    in_column_lattice(&ai, &scaled)
}
