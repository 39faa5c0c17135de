//! The flat G2 three-form on R^7, its Hodge dual, and the derived cross
//! product and associator, all with exact rational coefficients.
//!
//! Conventions: coordinates `x_1..x_7`,
//! `phi = dx_123 - dx_1 ^ w_1 - dx_2 ^ w_2 - dx_3 ^ w_3` with
//! `w_1 = dx_45 + dx_67`, `w_2 = dx_46 + dx_75`, `w_3 = dx_47 + dx_56`,
//! and `psi = *phi` for the Euclidean metric with `dx_1..7` positive.

use crate::linalg::RatMat;
use crate::rat::{int, Rat};
use num_traits::Zero;

pub const DIM: usize = 7;

pub type Vec7 = [Rat; 7];

pub fn vec7_zero() -> Vec7 {
    [Rat::zero(); 7]
}

pub fn vec7_basis(a: usize) -> Vec7 {
    let mut v = vec7_zero();
    v[a] = int(1);
    v
}

pub fn vec7_dot(u: &Vec7, v: &Vec7) -> Rat {
    (0..DIM).map(|a| u[a] * v[a]).sum()
}

pub fn vec7_from_i64(c: [i64; 7]) -> Vec7 {
    let mut v = vec7_zero();
    for a in 0..DIM {
        v[a] = int(c[a]);
    }
    v
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Lexicographic rank of a sorted index subset among k-subsets of {0..6}.
fn comb_rank(set: &[usize]) -> usize {
    let k = set.len();
    let mut rank = 0;
    let mut prev: i64 = -1;
    for (pos, &s) in set.iter().enumerate() {
        for c in (prev + 1) as usize..s {
            rank += binom(DIM - c - 1, k - pos - 1);
        }
        prev = s as i64;
    }
    rank
}

fn combinations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binom(DIM, k));
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + DIM - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Sign of the permutation sorting `perm`, or zero on repeats.
fn sort_sign(perm: &[usize]) -> (i64, Vec<usize>) {
    let mut v = perm.to_vec();
    let mut sign = 1i64;
    for i in 0..v.len() {
        for j in (i + 1..v.len()).rev() {
            if v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
            }
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return (0, v);
        }
    }
    (sign, v)
}

/// An alternating k-tensor on R^7 with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltK {
    pub k: usize,
    coeffs: Vec<Rat>,
}

impl AltK {
    pub fn zero(k: usize) -> Self {
        AltK {
            k,
            coeffs: vec![Rat::zero(); binom(DIM, k)],
        }
    }

    pub fn coeff(&self, set: &[usize]) -> Rat {
        self.coeffs[comb_rank(set)]
    }

    /// Add `c * dx_{perm}`; `perm` need not be sorted.
    pub fn add_term(&mut self, perm: &[usize], c: Rat) {
        let (sign, sorted) = sort_sign(perm);
        if sign == 0 {
            return;
        }
        self.coeffs[comb_rank(&sorted)] += c * int(sign);
    }

    pub fn eval(&self, vectors: &[Vec7]) -> Rat {
        assert_eq!(vectors.len(), self.k);
        let mut acc = Rat::zero();
        for (rank, set) in combinations(self.k).iter().enumerate() {
            let c = self.coeffs[rank];
            if c.is_zero() {
                continue;
            }
            // determinant of the k x k minor picking rows `set`
            let mut m = RatMat::zeros(self.k, self.k);
            for (r, &a) in set.iter().enumerate() {
                for (cl, v) in vectors.iter().enumerate() {
                    m.set(r, cl, v[a]);
                }
            }
            acc += c * m.det();
        }
        acc
    }

    pub fn wedge(&self, other: &AltK) -> AltK {
        let k = self.k + other.k;
        assert!(k <= DIM);
        let mut out = AltK::zero(k);
        for (ra, sa) in combinations(self.k).iter().enumerate() {
            let ca = self.coeffs[ra];
            if ca.is_zero() {
                continue;
            }
            for (rb, sb) in combinations(other.k).iter().enumerate() {
                let cb = other.coeffs[rb];
                if cb.is_zero() {
                    continue;
                }
                let mut merged = sa.clone();
                merged.extend_from_slice(sb);
                out.add_term(&merged, ca * cb);
            }
        }
        out
    }

    /// Interior product with a vector (first slot).
    pub fn contract(&self, u: &Vec7) -> AltK {
        assert!(self.k >= 1);
        let mut out = AltK::zero(self.k - 1);
        for (rank, set) in combinations(self.k).iter().enumerate() {
            let c = self.coeffs[rank];
            if c.is_zero() {
                continue;
            }
            for (pos, &a) in set.iter().enumerate() {
                if u[a].is_zero() {
                    continue;
                }
                let rest: Vec<usize> = set.iter().copied().filter(|&x| x != a).collect();
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                out.coeffs[comb_rank(&rest)] += c * u[a] * int(sign);
            }
        }
        out
    }

    /// Euclidean Hodge star with `dx_1 ^ .. ^ dx_7` positive.
    pub fn hodge(&self) -> AltK {
        let mut out = AltK::zero(DIM - self.k);
        for (rank, set) in combinations(self.k).iter().enumerate() {
            let c = self.coeffs[rank];
            if c.is_zero() {
                continue;
            }
            let comp: Vec<usize> = (0..DIM).filter(|a| !set.contains(a)).collect();
            let mut whole = set.clone();
            whole.extend_from_slice(&comp);
            let (sign, _) = sort_sign(&whole);
            out.coeffs[comb_rank(&comp)] += c * int(sign);
        }
        out
    }

    /// Pullback along the linear map `m` (7x7).
    pub fn pullback(&self, m: &RatMat) -> AltK {
        assert_eq!((m.rows, m.cols), (DIM, DIM));
        let cols: Vec<Vec7> = (0..DIM)
            .map(|c| {
                let mut v = vec7_zero();
                for r in 0..DIM {
                    v[r] = m.at(r, c);
                }
                v
            })
            .collect();
        let mut out = AltK::zero(self.k);
        for (rank, set) in combinations(self.k).iter().enumerate() {
            let vecs: Vec<Vec7> = set.iter().map(|&a| cols[a]).collect();
            out.coeffs[rank] = self.eval(&vecs);
        }
        out
    }

    pub fn scale(&self, s: Rat) -> AltK {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s;
        }
        out
    }
}

/// The flat G2 structure: the three-form and its Hodge dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct G2Form {
    pub phi: AltK,
    pub psi: AltK,
}

impl G2Form {
    /// The standard flat form in the conventions above.
    pub fn standard() -> Self {
        let mut phi = AltK::zero(3);
        phi.add_term(&[0, 1, 2], int(1));
        // -dx_1 ^ (dx_45 + dx_67)
        phi.add_term(&[0, 3, 4], int(-1));
        phi.add_term(&[0, 5, 6], int(-1));
        // -dx_2 ^ (dx_46 + dx_75)
        phi.add_term(&[1, 3, 5], int(-1));
        phi.add_term(&[1, 6, 4], int(-1));
        // -dx_3 ^ (dx_47 + dx_56)
        phi.add_term(&[2, 3, 6], int(-1));
        phi.add_term(&[2, 4, 5], int(-1));
        let psi = phi.hodge();
        G2Form { phi, psi }
    }

    /// `<u x v, w> := phi(u, v, w)`, solved against the Euclidean metric.
    pub fn cross(&self, u: &Vec7, v: &Vec7) -> Vec7 {
        let mut w = vec7_zero();
        let iu = self.phi.contract(u).contract(v);
        for (a, slot) in w.iter_mut().enumerate() {
            *slot = iu.coeff(&[a]);
        }
        w
    }

    /// `<[u, v, w], x> := psi(u, v, w, x)`.
    pub fn associator(&self, u: &Vec7, v: &Vec7, w: &Vec7) -> Vec7 {
        let c = self.psi.contract(u).contract(v).contract(w);
        let mut out = vec7_zero();
        for (a, slot) in out.iter_mut().enumerate() {
            *slot = c.coeff(&[a]);
        }
        out
    }

    /// The bilinear form `B(u,v) vol = (i_u phi) ^ (i_v phi) ^ phi`;
    /// for the standard form this is six times the Euclidean metric.
    pub fn induced_gram(&self) -> RatMat {
        let mut g = RatMat::zeros(DIM, DIM);
        for a in 0..DIM {
            for b in 0..DIM {
                let iu = self.phi.contract(&vec7_basis(a));
                let iv = self.phi.contract(&vec7_basis(b));
                let top = iu.wedge(&iv).wedge(&self.phi);
                g.set(a, b, top.coeff(&[0, 1, 2, 3, 4, 5, 6]));
            }
        }
        g
    }

    /// Exact pullback test for a linear isometry.
    pub fn is_preserved_by(&self, m: &RatMat) -> bool {
        self.phi.pullback(m) == self.phi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    // Independent oracle: find w with <u x v, e_a> = phi(u, v, e_a) by direct
    // evaluation of phi as a sum over its seven displayed terms.
    fn cross_oracle(u: &Vec7, v: &Vec7) -> Vec7 {
        let terms: [(usize, usize, usize, i64); 7] = [
            (0, 1, 2, 1),
            (0, 3, 4, -1),
            (0, 5, 6, -1),
            (1, 3, 5, -1),
            (1, 4, 6, 1),
            (2, 3, 6, -1),
            (2, 4, 5, -1),
        ];
        let mut w = vec7_zero();
        for x in 0..DIM {
            let e = vec7_basis(x);
            let vs = [*u, *v, e];
            let mut acc = Rat::zero();
            for &(a, b, c, s) in &terms {
                let det = vs[0][a] * (vs[1][b] * vs[2][c] - vs[1][c] * vs[2][b])
                    - vs[1][a] * (vs[0][b] * vs[2][c] - vs[0][c] * vs[2][b])
                    + vs[2][a] * (vs[0][b] * vs[1][c] - vs[0][c] * vs[1][b]);
                acc += int(s) * det;
            }
            w[x] = acc;
        }
        w
    }

    #[test]
    fn phi_wedge_psi_is_seven_vol() {
        let g2 = G2Form::standard();
        let top = g2.phi.wedge(&g2.psi);
        assert_eq!(top.coeff(&[0, 1, 2, 3, 4, 5, 6]), int(7));
    }

    #[test]
    fn induced_metric_is_euclidean() {
        let g2 = G2Form::standard();
        let g = g2.induced_gram();
        assert_eq!(g, RatMat::identity(DIM).scale(int(6)));
    }

    #[test]
    fn cross_on_basis() {
        let g2 = G2Form::standard();
        let e = |a: usize| vec7_basis(a);
        assert_eq!(g2.cross(&e(0), &e(1)), e(2));
        assert_eq!(g2.cross(&e(0), &e(3)), {
            let mut v = vec7_zero();
            v[4] = int(-1);
            v
        });
        let u = [
            rat(1, 2),
            int(3),
            rat(-1, 5),
            int(0),
            int(2),
            rat(7, 3),
            int(-1),
        ];
        assert_eq!(g2.cross(&u, &u), vec7_zero());
        assert_eq!(g2.cross(&e(0), &e(1)), cross_oracle(&e(0), &e(1)));
    }

    #[test]
    fn associator_identities() {
        let g2 = G2Form::standard();
        let e = |a: usize| vec7_basis(a);
        // e_123 is an associative plane
        assert_eq!(g2.associator(&e(0), &e(1), &e(2)), vec7_zero());
        // antisymmetry in the first two slots
        let u = [
            int(1),
            rat(1, 2),
            int(0),
            int(-2),
            int(3),
            rat(2, 7),
            int(1),
        ];
        let w = [
            int(0),
            int(1),
            rat(3, 4),
            int(1),
            rat(-1, 2),
            int(2),
            int(5),
        ];
        assert_eq!(g2.associator(&u, &u, &w), vec7_zero());
        // [u,v,w] = (u x v) x w + <v,w>u - <u,w>v, both sides independently
        let v = [
            rat(2, 3),
            int(-1),
            int(4),
            rat(1, 5),
            int(0),
            int(1),
            rat(-3, 2),
        ];
        let lhs = g2.associator(&u, &v, &w);
        let uv = g2.cross(&u, &v);
        let uvw = g2.cross(&uv, &w);
        let mut rhs = vec7_zero();
        for a in 0..DIM {
            rhs[a] = uvw[a] + vec7_dot(&v, &w) * u[a] - vec7_dot(&u, &w) * v[a];
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cross_matches_oracle_and_is_orthogonal() {
        let g2 = G2Form::standard();
        let u = [
            rat(1, 3),
            int(2),
            int(-1),
            rat(5, 2),
            int(0),
            int(1),
            rat(-2, 7),
        ];
        let v = [
            int(1),
            rat(-1, 4),
            int(3),
            int(0),
            rat(2, 5),
            int(-2),
            int(1),
        ];
        let w = g2.cross(&u, &v);
        assert_eq!(w, cross_oracle(&u, &v));
        assert!(vec7_dot(&w, &u).is_zero());
        assert!(vec7_dot(&w, &v).is_zero());
    }

    #[test]
    fn hodge_is_an_involution_up_to_sign() {
        let g2 = G2Form::standard();
        // on 3-forms in dimension 7 the double star is the identity
        assert_eq!(g2.psi.hodge(), g2.phi);
    }
}
