//! Exact quaternion arithmetic on `H` and `Im H`, rational rotations, and the
//! induced homomorphism from rotations of `H` to rotations of `Im H`.

use crate::linalg::RatMat;
use crate::rat::{int, rat, Rat};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuatError {
    #[error("matrix is not orthogonal")]
    NotOrthogonal,
    #[error("orientation-reversing input (det = -1) where a rotation is required")]
    OrientationReversing,
    #[error("quaternion norm is not a perfect rational square")]
    NonSquareNorm,
}

/// A quaternion with exact rational coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quat {
    pub re: Rat,
    pub i: Rat,
    pub j: Rat,
    pub k: Rat,
}

impl Quat {
    pub fn new(re: Rat, i: Rat, j: Rat, k: Rat) -> Self {
        Quat { re, i, j, k }
    }

    pub fn from_i64(re: i64, i: i64, j: i64, k: i64) -> Self {
        Quat::new(int(re), int(i), int(j), int(k))
    }

    pub fn zero() -> Self {
        Quat::from_i64(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        Quat::from_i64(1, 0, 0, 0)
    }

    pub fn unit_i() -> Self {
        Quat::from_i64(0, 1, 0, 0)
    }

    pub fn unit_j() -> Self {
        Quat::from_i64(0, 0, 1, 0)
    }

    pub fn unit_k() -> Self {
        Quat::from_i64(0, 0, 0, 1)
    }

    pub fn conj(self) -> Self {
        Quat::new(self.re, -self.i, -self.j, -self.k)
    }

    pub fn norm_sq(self) -> Rat {
        self.re * self.re + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn add(self, o: Quat) -> Quat {
        Quat::new(self.re + o.re, self.i + o.i, self.j + o.j, self.k + o.k)
    }

    pub fn sub(self, o: Quat) -> Quat {
        Quat::new(self.re - o.re, self.i - o.i, self.j - o.j, self.k - o.k)
    }

    pub fn scale(self, s: Rat) -> Quat {
        Quat::new(self.re * s, self.i * s, self.j * s, self.k * s)
    }

    pub fn im(self) -> ImVec {
        ImVec {
            i: self.i,
            j: self.j,
            k: self.k,
        }
    }

    pub fn coords(self) -> [Rat; 4] {
        [self.re, self.i, self.j, self.k]
    }

    pub fn from_coords(c: [Rat; 4]) -> Self {
        Quat::new(c[0], c[1], c[2], c[3])
    }
}

/// Hamilton product, exact.
pub fn quat_mul(p: Quat, q: Quat) -> Quat {
    Quat::new(
        p.re * q.re - p.i * q.i - p.j * q.j - p.k * q.k,
        p.re * q.i + p.i * q.re + p.j * q.k - p.k * q.j,
        p.re * q.j - p.i * q.k + p.j * q.re + p.k * q.i,
        p.re * q.k + p.i * q.j - p.j * q.i + p.k * q.re,
    )
}

/// A vector in `Im H` with exact rational coordinates in the `i, j, k` basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ImVec {
    pub i: Rat,
    pub j: Rat,
    pub k: Rat,
}

impl ImVec {
    pub fn new(i: Rat, j: Rat, k: Rat) -> Self {
        ImVec { i, j, k }
    }

    pub fn from_i64(i: i64, j: i64, k: i64) -> Self {
        ImVec::new(int(i), int(j), int(k))
    }

    pub fn zero() -> Self {
        ImVec::from_i64(0, 0, 0)
    }

    pub fn basis(axis: usize) -> Self {
        match axis {
            0 => ImVec::from_i64(1, 0, 0),
            1 => ImVec::from_i64(0, 1, 0),
            2 => ImVec::from_i64(0, 0, 1),
            _ => panic!("axis out of range"),
        }
    }

    pub fn to_quat(self) -> Quat {
        Quat::new(Rat::zero(), self.i, self.j, self.k)
    }

    pub fn coords(self) -> [Rat; 3] {
        [self.i, self.j, self.k]
    }

    pub fn from_coords(c: [Rat; 3]) -> Self {
        ImVec::new(c[0], c[1], c[2])
    }

    pub fn add(self, o: ImVec) -> ImVec {
        ImVec::new(self.i + o.i, self.j + o.j, self.k + o.k)
    }

    pub fn sub(self, o: ImVec) -> ImVec {
        ImVec::new(self.i - o.i, self.j - o.j, self.k - o.k)
    }

    pub fn neg(self) -> ImVec {
        ImVec::new(-self.i, -self.j, -self.k)
    }

    pub fn scale(self, s: Rat) -> ImVec {
        ImVec::new(self.i * s, self.j * s, self.k * s)
    }

    pub fn dot(self, o: ImVec) -> Rat {
        self.i * o.i + self.j * o.j + self.k * o.k
    }

    pub fn norm_sq(self) -> Rat {
        self.dot(self)
    }

    pub fn is_zero(self) -> bool {
        self.i.is_zero() && self.j.is_zero() && self.k.is_zero()
    }

    /// Lie bracket `[u, v] = uv - vu` of imaginary quaternions (stays in `Im H`).
    pub fn bracket(self, o: ImVec) -> ImVec {
        let p = quat_mul(self.to_quat(), o.to_quat());
        let q = quat_mul(o.to_quat(), self.to_quat());
        p.sub(q).im()
    }

    pub fn is_parallel(self, o: ImVec) -> bool {
        self.bracket(o).is_zero() && (self.dot(o) * self.dot(o) == self.norm_sq() * o.norm_sq())
    }
}

/// An exactly orthogonal 3x3 rational matrix with its determinant sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rotation3 {
    pub mat: RatMat,
    pub det: i8,
}

impl Rotation3 {
    pub fn new(mat: RatMat) -> Result<Self, QuatError> {
        if !mat.is_orthogonal() {
            return Err(QuatError::NotOrthogonal);
        }
        let det = if mat.det() == int(1) { 1 } else { -1 };
        Ok(Rotation3 { mat, det })
    }

    pub fn identity() -> Self {
        Rotation3 {
            mat: RatMat::identity(3),
            det: 1,
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, QuatError> {
        Rotation3::new(RatMat::from_i64(rows))
    }

    pub fn apply(&self, v: ImVec) -> ImVec {
        let out = self.mat.mul_vec(&v.coords());
        ImVec::new(out[0], out[1], out[2])
    }

    pub fn compose(&self, o: &Rotation3) -> Rotation3 {
        Rotation3 {
            mat: self.mat.mul(&o.mat),
            det: self.det * o.det,
        }
    }

    pub fn inverse(&self) -> Rotation3 {
        Rotation3 {
            mat: self.mat.transpose(),
            det: self.det,
        }
    }
}

/// An exactly orthogonal 4x4 rational matrix acting on `H` in the basis
/// `(1, i, j, k)`, with its determinant sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rotation4 {
    pub mat: RatMat,
    pub det: i8,
}

impl Rotation4 {
    pub fn new(mat: RatMat) -> Result<Self, QuatError> {
        if !mat.is_orthogonal() {
            return Err(QuatError::NotOrthogonal);
        }
        let det = if mat.det() == int(1) { 1 } else { -1 };
        Ok(Rotation4 { mat, det })
    }

    pub fn identity() -> Self {
        Rotation4 {
            mat: RatMat::identity(4),
            det: 1,
        }
    }

    pub fn apply(&self, q: Quat) -> Quat {
        let out = self.mat.mul_vec(&q.coords());
        Quat::new(out[0], out[1], out[2], out[3])
    }

    pub fn compose(&self, o: &Rotation4) -> Rotation4 {
        Rotation4 {
            mat: self.mat.mul(&o.mat),
            det: self.det * o.det,
        }
    }

    /// The rotation `q -> a q conj(b) / (|a||b|)`. Exact, hence requires
    /// `|a|^2 |b|^2` to be a perfect rational square.
    pub fn from_pair(a: Quat, b: Quat) -> Result<Self, QuatError> {
        let n2 = a.norm_sq() * b.norm_sq();
        let n = crate::rat::rat_sqrt(n2).ok_or(QuatError::NonSquareNorm)?;
        let mut mat = RatMat::zeros(4, 4);
        let basis = [Quat::one(), Quat::unit_i(), Quat::unit_j(), Quat::unit_k()];
        for (c, &e) in basis.iter().enumerate() {
            let img = quat_mul(quat_mul(a, e), b.conj()).scale(rat(1, 1) / n);
            let co = img.coords();
            for r in 0..4 {
                mat.set(r, c, co[r]);
            }
        }
        Rotation4::new(mat)
    }

    /// Left sandwich `q -> sign * u q v` for unit-like `u, v` in `{1,i,j,k,...}`
    /// with rational entries; panics if not orthogonal.
    pub fn sandwich(sign: i64, left: Quat, right: Quat) -> Result<Self, QuatError> {
        let n2 = left.norm_sq() * right.norm_sq();
        let n = crate::rat::rat_sqrt(n2).ok_or(QuatError::NonSquareNorm)?;
        let mut mat = RatMat::zeros(4, 4);
        let basis = [Quat::one(), Quat::unit_i(), Quat::unit_j(), Quat::unit_k()];
        for (c, &e) in basis.iter().enumerate() {
            let img = quat_mul(quat_mul(left, e), right).scale(int(sign) / n);
            let co = img.coords();
            for r in 0..4 {
                mat.set(r, c, co[r]);
            }
        }
        Rotation4::new(mat)
    }
}

/// The induced rotation on self-dual two-forms of `H`, identified with `Im H`.
///
/// With the identification `v -> omega_v`, `omega_v(x, y) = <v x, y>`, the map
/// satisfies `lambda_plus(q -> a q conj(b)) : v -> a v conj(a) / |a|^2` and is
/// a group homomorphism on `SO(H)`. Orientation-reversing input is rejected.
pub fn lambda_plus(r: &Rotation4) -> Result<Rotation3, QuatError> {
    if r.det != 1 {
        return Err(QuatError::OrientationReversing);
    }
    // omega_v as a 4x4 antisymmetric matrix for v in {i, j, k}
    let basis4 = [Quat::one(), Quat::unit_i(), Quat::unit_j(), Quat::unit_k()];
    let omega = |v: Quat| -> RatMat {
        let mut m = RatMat::zeros(4, 4);
        for (x, &ex) in basis4.iter().enumerate() {
            let vex = quat_mul(v, ex);
            for (y, &ey) in basis4.iter().enumerate() {
                let dot = vex.re * ey.re + vex.i * ey.i + vex.j * ey.j + vex.k * ey.k;
                m.set(x, y, dot);
            }
        }
        m
    };
    let omegas = [
        omega(Quat::unit_i()),
        omega(Quat::unit_j()),
        omega(Quat::unit_k()),
    ];
    // transform: omega'_v = R omega_v R^T, then expand in the basis via the
    // trace pairing <A, B> = tr(A^T B) / 4.
    let mut out = RatMat::zeros(3, 3);
    for (c, om) in omegas.iter().enumerate() {
        let moved = r.mat.mul(om).mul(&r.mat.transpose());
        for (rw, base) in omegas.iter().enumerate() {
            let mut tr = Rat::zero();
            for a in 0..4 {
                for b in 0..4 {
                    tr += base.at(a, b) * moved.at(a, b);
                }
            }
            out.set(rw, c, tr / int(4));
        }
    }
    Rotation3::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Oracle: expand a product of quaternion linear combinations through the
    // multiplication table of the basis units, independently of `quat_mul`.
    fn mul_oracle(p: Quat, q: Quat) -> Quat {
        // table[a][b] = e_a * e_b as (coeff, index)
        let table: [[(i64, usize); 4]; 4] = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ];
        let pc = p.coords();
        let qc = q.coords();
        let mut out = [Rat::zero(); 4];
        for a in 0..4 {
            for b in 0..4 {
                let (s, idx) = table[a][b];
                out[idx] += pc[a] * qc[b] * int(s);
            }
        }
        Quat::from_coords(out)
    }

    #[test]
    fn basic_relations() {
        let (i, j, k) = (Quat::unit_i(), Quat::unit_j(), Quat::unit_k());
        assert_eq!(quat_mul(i, j), k);
        assert_eq!(quat_mul(j, k), i);
        assert_eq!(quat_mul(k, i), j);
        assert_eq!(quat_mul(i, i), Quat::from_i64(-1, 0, 0, 0));
        let q = Quat::from_i64(3, -2, 5, 7);
        assert_eq!(quat_mul(Quat::one(), q), q);
    }

    #[test]
    fn i_plus_j_times_i_minus_j() {
        let p = Quat::unit_i().add(Quat::unit_j());
        let q = Quat::unit_i().sub(Quat::unit_j());
        let expect = mul_oracle(p, q);
        assert_eq!(expect, Quat::from_i64(0, 0, 0, -2));
        assert_eq!(quat_mul(p, q), expect);
    }

    #[test]
    fn norm_multiplicative_and_conj_antihom() {
        let p = Quat::new(rat(1, 2), rat(-3, 4), int(2), rat(5, 3));
        let q = Quat::new(int(-1), rat(2, 7), rat(1, 2), int(3));
        let pq = quat_mul(p, q);
        assert_eq!(pq.norm_sq(), p.norm_sq() * q.norm_sq());
        assert_eq!(pq.conj(), quat_mul(q.conj(), p.conj()));
        assert_eq!(quat_mul(p, q), mul_oracle(p, q));
    }

    #[test]
    fn bracket_stays_imaginary() {
        let u = ImVec::new(rat(1, 2), int(3), rat(-2, 5));
        let v = ImVec::new(int(1), rat(1, 3), int(2));
        let w = u.bracket(v);
        // bracket is twice the vector cross product of Im H
        assert_eq!(w.i, (u.j * v.k - u.k * v.j) * int(2));
    }

    #[test]
    fn lambda_plus_of_sandwiches() {
        // q -> -iqi acts on Im H as diag(1, -1, -1)
        let r = Rotation4::sandwich(-1, Quat::unit_i(), Quat::unit_i()).unwrap();
        let l = lambda_plus(&r).unwrap();
        assert_eq!(
            l.mat,
            RatMat::from_i64(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]])
        );
        // q -> iqi gives the same induced rotation (they differ by -1 in Gamma)
        let r2 = Rotation4::sandwich(1, Quat::unit_i(), Quat::unit_i()).unwrap();
        assert_eq!(lambda_plus(&r2).unwrap().mat, l.mat);
        // q -> jqj acts as diag(-1, 1, -1)
        let r3 = Rotation4::sandwich(1, Quat::unit_j(), Quat::unit_j()).unwrap();
        assert_eq!(
            lambda_plus(&r3).unwrap().mat,
            RatMat::from_i64(&[vec![-1, 0, 0], vec![0, 1, 0], vec![0, 0, -1]])
        );
    }

    #[test]
    fn lambda_plus_identity_and_rejection() {
        assert_eq!(
            lambda_plus(&Rotation4::identity()).unwrap().mat,
            RatMat::identity(3)
        );
        let mut m = RatMat::identity(4);
        m.set(0, 0, int(-1));
        let refl = Rotation4::new(m).unwrap();
        assert_eq!(lambda_plus(&refl), Err(QuatError::OrientationReversing));
    }

    #[test]
    fn pair_rotation_matches_conjugation_formula() {
        // a with perfect-square norm: 1 + i + j + k, |a|^2 = 4
        let a = Quat::from_i64(1, 1, 1, 1);
        let r = Rotation4::from_pair(a, a).unwrap();
        let l = lambda_plus(&r).unwrap();
        // v -> a v conj(a) / |a|^2
        for v in [ImVec::basis(0), ImVec::basis(1), ImVec::basis(2)] {
            let expect = quat_mul(quat_mul(a, v.to_quat()), a.conj())
                .scale(rat(1, 4))
                .im();
            assert_eq!(l.apply(v), expect);
        }
    }
}
