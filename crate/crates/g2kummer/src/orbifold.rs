//! Flat G2-orbifolds `T^7 / G`: form-preservation checks, exact singular-set
//! enumeration, local normal models, and extra-symmetry actions on the
//! component set.
//!
//! Group elements act on `T^7 = R^7 / Z^7` through integer orthogonal linear
//! parts and rational translations; every congruence below is solved exactly.

use crate::g2form::{G2Form, Vec7, DIM};
use crate::linalg::{in_column_lattice, rowspace_canonical, solve_torus_congruence, IMat, RatMat};
use crate::rat::{frac_mod1, int, rat, Rat};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OrbifoldError {
    #[error("linear part must be an integer orthogonal matrix")]
    BadLinearPart,
    #[error("group closure exceeded the bound of {0} elements")]
    ClosureBound(usize),
    #[error("symmetry does not normalise the group")]
    NonNormalising,
    #[error("symmetry does not preserve the three-form")]
    NotPhiPreserving,
    #[error("component directions are not a coordinate 3-subspace; no quaternionic normal frame")]
    NormalModelUnrecognised,
    #[error("stabiliser does not act freely on the normal sphere: isotropy is not isolated")]
    NonIsolatedIsotropy,
    #[error("fixture does not carry a global group")]
    NoGlobalGroup,
}

/// An affine isometry of `T^7` with integer orthogonal linear part and
/// rational translation, canonicalised mod `Z^7`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap7 {
    pub linear: IMat,
    pub translation: Vec7,
}

impl AffineMap7 {
    pub fn new(linear: IMat, translation: Vec7) -> Result<Self, OrbifoldError> {
        if linear.rows != DIM || linear.cols != DIM || !linear.to_rat().is_orthogonal() {
            return Err(OrbifoldError::BadLinearPart);
        }
        let mut t = translation;
        for c in &mut t {
            *c = frac_mod1(*c);
        }
        Ok(AffineMap7 {
            linear,
            translation: t,
        })
    }

    pub fn identity() -> Self {
        AffineMap7 {
            linear: IMat::identity(DIM),
            translation: [Rat::zero(); DIM],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.linear == IMat::identity(DIM) && self.translation.iter().all(|t| t.is_zero())
    }

    pub fn apply(&self, x: &Vec7) -> Vec7 {
        let mut out = [Rat::zero(); DIM];
        for r in 0..DIM {
            let mut acc = self.translation[r];
            for c in 0..DIM {
                acc += int(self.linear.at(r, c)) * x[c];
            }
            out[r] = frac_mod1(acc);
        }
        out
    }

    pub fn compose(&self, other: &AffineMap7) -> AffineMap7 {
        let mut lin = IMat::zeros(DIM, DIM);
        for r in 0..DIM {
            for c in 0..DIM {
                let mut acc = 0;
                for k in 0..DIM {
                    acc += self.linear.at(r, k) * other.linear.at(k, c);
                }
                lin.set(r, c, acc);
            }
        }
        let mut t = [Rat::zero(); DIM];
        for r in 0..DIM {
            let mut acc = self.translation[r];
            for c in 0..DIM {
                acc += int(self.linear.at(r, c)) * other.translation[c];
            }
            t[r] = frac_mod1(acc);
        }
        AffineMap7 {
            linear: lin,
            translation: t,
        }
    }

    pub fn inverse(&self) -> AffineMap7 {
        // orthogonal integer matrix: inverse = transpose
        let mut lin = IMat::zeros(DIM, DIM);
        for r in 0..DIM {
            for c in 0..DIM {
                lin.set(r, c, self.linear.at(c, r));
            }
        }
        let mut t = [Rat::zero(); DIM];
        for r in 0..DIM {
            let mut acc = Rat::zero();
            for c in 0..DIM {
                acc -= int(lin.at(r, c)) * self.translation[c];
            }
            t[r] = frac_mod1(acc);
        }
        AffineMap7 {
            linear: lin,
            translation: t,
        }
    }
}

/// Does the (linear part of the) map pull the three-form back to itself?
/// Translations of the torus always preserve a constant-coefficient form.
pub fn preserves_phi(g: &AffineMap7, form: &G2Form) -> bool {
    form.is_preserved_by(&g.linear.to_rat())
}

/// A crystallographic group acting on `T^7`, given by generators.
#[derive(Debug, Clone)]
pub struct CrystalGroupR7 {
    pub generators: Vec<AffineMap7>,
}

impl CrystalGroupR7 {
    pub fn new(generators: Vec<AffineMap7>) -> Self {
        CrystalGroupR7 { generators }
    }

    /// Complete list of affine classes mod `Z^7`, by closure. Errors out past
    /// `bound` elements (rational rotations can have infinite order).
    pub fn quotient_group_elements(&self, bound: usize) -> Result<Vec<AffineMap7>, OrbifoldError> {
        let mut elems = vec![AffineMap7::identity()];
        let mut frontier = elems.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for e in &frontier {
                for g in &self.generators {
                    let prod = g.compose(e);
                    if !elems.contains(&prod) {
                        if elems.len() + 1 > bound {
                            return Err(OrbifoldError::ClosureBound(bound));
                        }
                        elems.push(prod.clone());
                        next.push(prod);
                    }
                }
            }
            frontier = next;
        }
        Ok(elems)
    }
}

/// An affine subtorus of `T^7`: canonical offset plus an integer basis of the
/// direction lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineTorus {
    pub offset: Vec7,
    pub directions: Vec<Vec<i64>>,
}

impl AffineTorus {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    fn direction_span(&self) -> Vec<Vec<Rat>> {
        rowspace_canonical(
            &self
                .directions
                .iter()
                .map(|d| d.iter().map(|&x| int(x)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
    }

    /// A generic rational point: offset plus direction combination with
    /// denominators coprime to the group's translation denominators.
    pub fn generic_point(&self) -> Vec7 {
        let mut p = self.offset;
        let primes = [101i64, 103, 107, 109, 113, 127, 131];
        for (m, d) in self.directions.iter().enumerate() {
            let c = rat(
                primes[m % primes.len()] / 7 + 3 + m as i64 * 7,
                primes[m % primes.len()],
            );
            for (r, slot) in p.iter_mut().enumerate() {
                *slot = frac_mod1(*slot + c * int(d[r]));
            }
        }
        p
    }
}

/// Same subtorus of `T^7`? Direction spans must agree and the offsets differ
/// by a direction-space vector modulo `Z^7`.
pub fn torus_eq(a: &AffineTorus, b: &AffineTorus) -> bool {
    if a.dim() != b.dim() || a.direction_span() != b.direction_span() {
        return false;
    }
    // x = offset difference; x in K + Z^7 iff A x in A Z^7 for ker A = K,
    // where the rows of A span the orthogonal complement of K
    let span = a.direction_span();
    let full = RatMat::from_rows(&span);
    let perp = full.kernel_basis();
    let amat_rows: Vec<Vec<i64>> = perp
        .iter()
        .map(|f| crate::linalg::primitive_integer(f))
        .collect();
    let amat = IMat::from_rows(&amat_rows);
    let diff: Vec<Rat> = (0..DIM).map(|r| a.offset[r] - b.offset[r]).collect();
    let image: Vec<Rat> = (0..amat.rows)
        .map(|r| (0..DIM).map(|c| int(amat.at(r, c)) * diff[c]).sum())
        .collect();
    // the columns of A generate the test lattice A Z^7
    in_column_lattice(&amat, &image)
}

/// A connected component of the singular set, as the orbit of fixed subtori.
#[derive(Debug, Clone)]
pub struct SingularComponent {
    pub id: String,
    /// index of the stratum (group class whose fixed set spawned it)
    pub stratum: usize,
    /// representative class element
    pub class_rep: AffineMap7,
    /// all subtori of `T^7` mapping onto this component
    pub tori: Vec<AffineTorus>,
    pub dimension: usize,
    pub isotropy_order: usize,
    pub isotropy_label: String,
}

/// Enumerate the singular set: solve the fixed-point congruence of every
/// nontrivial class exactly, then merge subtori identified by the group.
pub fn singular_components(
    group: &CrystalGroupR7,
    bound: usize,
) -> Result<Vec<SingularComponent>, OrbifoldError> {
    let elems = group.quotient_group_elements(bound)?;
    // fixed subtori per nontrivial class, tagged by class index
    let mut tori: Vec<(usize, AffineTorus)> = Vec::new();
    for (ci, e) in elems.iter().enumerate() {
        if e.is_identity() {
            continue;
        }
        let mut a = e.linear.clone();
        for d in 0..DIM {
            a.set(d, d, a.at(d, d) - 1);
        }
        let s: Vec<Rat> = e.translation.iter().map(|&t| -t).collect();
        let sol = solve_torus_congruence(&a, &s);
        for off in sol.offsets {
            let mut offset = [Rat::zero(); DIM];
            for (r, v) in off.iter().enumerate() {
                offset[r] = *v;
            }
            tori.push((
                ci,
                AffineTorus {
                    offset,
                    directions: sol.directions.clone(),
                },
            ));
        }
    }

    // merge under the group action (union-find, generators suffice)
    let n = tori.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for gi in 0..group.generators.len() {
        let g = group.generators[gi].clone();
        for i in 0..n {
            let img = map_torus(&g, &tori[i].1);
            let j = tori
                .iter()
                .position(|(_, t)| torus_eq(t, &img))
                .expect("group image of a fixed torus is a fixed torus");
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
            }
        }
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(gidx) => groups[gidx].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }

    let mut components = Vec::new();
    for member_ids in groups {
        let stratum = member_ids.iter().map(|&i| tori[i].0).min().unwrap();
        let mut member_tori: Vec<AffineTorus> =
            member_ids.iter().map(|&i| tori[i].1.clone()).collect();
        member_tori.sort_by(|a, b| a.offset.cmp(&b.offset));
        let rep = member_tori[0].clone();
        let dimension = rep.dim();
        // isotropy: stabiliser of a generic point of the representative torus
        let p = rep.generic_point();
        let stab: Vec<&AffineMap7> = elems.iter().filter(|e| e.apply(&p) == p).collect();
        let isotropy_order = stab.len();
        let isotropy_label = isotropy_label(&stab)?;
        components.push(SingularComponent {
            id: String::new(),
            stratum,
            class_rep: elems[tori[member_ids[0]].0].clone(),
            tori: member_tori,
            dimension,
            isotropy_order,
            isotropy_label,
        });
    }
    components.sort_by(|a, b| {
        a.stratum
            .cmp(&b.stratum)
            .then_with(|| a.tori[0].offset.cmp(&b.tori[0].offset))
    });
    for (idx, c) in components.iter_mut().enumerate() {
        c.id = format!("S{}.{idx:02}", c.stratum);
    }
    Ok(components)
}

fn map_torus(g: &AffineMap7, t: &AffineTorus) -> AffineTorus {
    let offset = g.apply(&t.offset);
    let directions = t
        .directions
        .iter()
        .map(|d| {
            (0..DIM)
                .map(|r| (0..DIM).map(|c| g.linear.at(r, c) * d[c]).sum::<i64>())
                .collect::<Vec<i64>>()
        })
        .collect();
    AffineTorus { offset, directions }
}

fn isotropy_label(stab: &[&AffineMap7]) -> Result<String, OrbifoldError> {
    let order = stab.len();
    if order == 1 {
        return Ok("1".to_string());
    }
    // element orders of the stabiliser
    let mut orders = Vec::new();
    for e in stab {
        if e.is_identity() {
            continue;
        }
        let mut p = (*e).clone();
        let mut o = 1usize;
        while !p.is_identity() {
            p = p.compose(e);
            o += 1;
            if o > 16 {
                return Err(OrbifoldError::NonIsolatedIsotropy);
            }
        }
        orders.push(o);
    }
    let max_order = orders.iter().copied().max().unwrap_or(1);
    let label = if max_order == order {
        format!("C{order}")
    } else if order == 4 && max_order == 2 {
        "C2xC2".to_string()
    } else if order == 8 && max_order == 4 {
        "Dic2".to_string()
    } else {
        format!("order{order}")
    };
    Ok(label)
}

/// Local model along a component: the normal isotropy group, the induced
/// crystallographic group on the component, and the normal rotations.
#[derive(Debug, Clone)]
pub struct LocalModel {
    /// label of the normal isotropy group (e.g. "C2")
    pub gamma: String,
    /// order of the point group of the induced action along the component
    pub along_point_group_order: usize,
    /// class name of the induced 3-dimensional group ("1" when only the
    /// torus lattice acts)
    pub g_alpha_class: String,
    /// normal 4x4 blocks of the isotropy generators (basis: the complementary
    /// coordinate axes in increasing order)
    pub rho_normal_blocks: Vec<RatMat>,
    /// true when every normal block lies in the isotropy group itself, i.e.
    /// the induced map to Isom(H / Gamma) is trivial
    pub rho_trivial: bool,
}

/// Compute the local model of a component of a global group. Requires the
/// component directions to span a coordinate 3-subspace (the shipped global
/// examples all do); the normal model is then read off in the remaining
/// coordinates.
pub fn local_model(
    group: &CrystalGroupR7,
    comp: &SingularComponent,
    bound: usize,
) -> Result<LocalModel, OrbifoldError> {
    if comp.dimension != 3 {
        return Err(OrbifoldError::NormalModelUnrecognised);
    }
    let rep = &comp.tori[0];
    // the direction span must be a coordinate subspace
    let span = rep.direction_span();
    let mut axes: Vec<usize> = Vec::new();
    for row in &span {
        let nz: Vec<usize> = (0..DIM).filter(|&c| !row[c].is_zero()).collect();
        if nz.len() != 1 {
            return Err(OrbifoldError::NormalModelUnrecognised);
        }
        axes.push(nz[0]);
    }
    axes.sort();
    let normal_axes: Vec<usize> = (0..DIM).filter(|a| !axes.contains(a)).collect();

    let elems = group.quotient_group_elements(bound)?;
    let p = rep.generic_point();
    let stab: Vec<&AffineMap7> = elems.iter().filter(|e| e.apply(&p) == p).collect();

    // normal blocks of the pointwise stabiliser
    let mut rho_normal_blocks = Vec::new();
    for e in &stab {
        if e.is_identity() {
            continue;
        }
        let mut block = RatMat::zeros(4, 4);
        for (r, &ar) in normal_axes.iter().enumerate() {
            for (c, &ac) in normal_axes.iter().enumerate() {
                block.set(r, c, int(e.linear.at(ar, ac)));
            }
        }
        // free action on the normal sphere: no +1 eigenvector
        let mut shifted = block.clone();
        for d in 0..4 {
            shifted.set(d, d, shifted.at(d, d) - int(1));
        }
        if !shifted.kernel_basis().is_empty() {
            return Err(OrbifoldError::NonIsolatedIsotropy);
        }
        rho_normal_blocks.push(block);
    }

    // elements preserving the torus setwise give the induced group along it
    let setwise: Vec<&AffineMap7> = elems
        .iter()
        .filter(|e| torus_eq(&map_torus(e, rep), rep))
        .collect();
    // those acting trivially along the component do not contribute holonomy
    let acting: Vec<&&AffineMap7> = setwise
        .iter()
        .filter(|e| {
            // restrict the linear part to the component axes
            axes.iter().any(|&a| {
                axes.iter().any(|&b| {
                    let want = if a == b { 1 } else { 0 };
                    e.linear.at(a, b) != want
                })
            })
        })
        .collect();
    let along_point_group_order = acting.len() + 1;
    let g_alpha_class = match along_point_group_order {
        1 => "1".to_string(),
        2 => "C2".to_string(),
        3 => "C3".to_string(),
        4 => "C4-or-C2xC2".to_string(),
        6 => "C6".to_string(),
        o => format!("order{o}"),
    };

    let gamma = comp.isotropy_label.clone();
    // the induced map to Isom(H/Gamma) is trivial iff every normal block of a
    // setwise stabiliser already lies in the isotropy group's normal image
    let iso_blocks: Vec<RatMat> = rho_normal_blocks.clone();
    let rho_trivial = setwise.iter().all(|e| {
        let mut block = RatMat::zeros(4, 4);
        for (r, &ar) in normal_axes.iter().enumerate() {
            for (c, &ac) in normal_axes.iter().enumerate() {
                block.set(r, c, int(e.linear.at(ar, ac)));
            }
        }
        block.is_identity() || iso_blocks.contains(&block)
    });

    Ok(LocalModel {
        gamma,
        along_point_group_order,
        g_alpha_class,
        rho_normal_blocks,
        rho_trivial,
    })
}

/// The action of an extra symmetry on the component set.
#[derive(Debug, Clone)]
pub struct ComponentAction {
    /// `permutation[i]` is the index of the image of component `i`
    pub permutation: Vec<usize>,
    pub fixed: Vec<bool>,
}

impl ComponentAction {
    pub fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn two_cycles(&self) -> usize {
        self.permutation
            .iter()
            .enumerate()
            .filter(|&(i, &j)| j > i && self.permutation[j] == i)
            .count()
    }
}

/// Compute the permutation a normalising, form-preserving symmetry induces on
/// the singular components.
pub fn symmetry_action_on_components(
    group: &CrystalGroupR7,
    components: &[SingularComponent],
    lambda: &AffineMap7,
    form: &G2Form,
    bound: usize,
) -> Result<ComponentAction, OrbifoldError> {
    if !preserves_phi(lambda, form) {
        return Err(OrbifoldError::NotPhiPreserving);
    }
    // lambda must conjugate the group into itself
    let elems = group.quotient_group_elements(bound)?;
    let inv = lambda.inverse();
    for e in &elems {
        let conj = lambda.compose(e).compose(&inv);
        if !elems.contains(&conj) {
            return Err(OrbifoldError::NonNormalising);
        }
    }
    let mut permutation = Vec::with_capacity(components.len());
    for comp in components {
        let img = map_torus(lambda, &comp.tori[0]);
        let target = components
            .iter()
            .position(|c| c.tori.iter().any(|t| torus_eq(t, &img)))
            .ok_or(OrbifoldError::NonNormalising)?;
        permutation.push(target);
    }
    let fixed = permutation
        .iter()
        .enumerate()
        .map(|(i, &j)| i == j)
        .collect();
    Ok(ComponentAction { permutation, fixed })
}

/// The four involutions of the standard `T^7/C_2^3` orbifold and its extra
/// symmetry, in the conventions of the crate's standard three-form.
pub fn standard_t7_c2c2c2() -> (CrystalGroupR7, AffineMap7) {
    let d = |signs: [i64; 7]| {
        let mut m = IMat::zeros(DIM, DIM);
        for (i, s) in signs.iter().enumerate() {
            m.set(i, i, *s);
        }
        m
    };
    let z = Rat::zero();
    let h = rat(1, 2);
    let iota1 = AffineMap7::new(d([1, 1, 1, -1, -1, -1, -1]), [z; 7]).unwrap();
    let iota2 = AffineMap7::new(d([1, -1, -1, 1, 1, -1, -1]), [z, z, z, z, z, h, z]).unwrap();
    let iota3 = AffineMap7::new(d([-1, 1, -1, 1, -1, 1, -1]), [z, z, z, z, h, z, h]).unwrap();
    let lambda = AffineMap7::new(d([1, -1, -1, 1, 1, -1, -1]), [z; 7]).unwrap();
    (CrystalGroupR7::new(vec![iota1, iota2, iota3]), lambda)
}
