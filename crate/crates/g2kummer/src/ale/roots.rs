//! ADE root-system data and Weyl groups.
//!
//! `A_k` lives in charge coordinates `R^{k+1}` (roots `e_a - e_b`, Weyl group
//! the symmetric group); `D_4` in `R^4` (roots `+-e_a +- e_b`, Weyl group the
//! signed permutations with an even number of sign changes). Elements are
//! stored as signed permutations, which keeps closures cheap.

use super::AleError;
use crate::linalg::IMat;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdeKind {
    /// `A_k`, the deformation space of the cyclic quotient of order `k+1`
    A(usize),
    D4,
    E6,
    E7,
    E8,
}

impl Serialize for AdeKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for AdeKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "D4" => Ok(AdeKind::D4),
            "E6" => Ok(AdeKind::E6),
            "E7" => Ok(AdeKind::E7),
            "E8" => Ok(AdeKind::E8),
            other => {
                if let Some(k) = other
                    .strip_prefix('A')
                    .and_then(|k| k.parse::<usize>().ok())
                {
                    Ok(AdeKind::A(k))
                } else {
                    Err(D::Error::custom(format!("unknown ADE label {other}")))
                }
            }
        }
    }
}

impl AdeKind {
    pub fn label(&self) -> String {
        match self {
            AdeKind::A(k) => format!("A{k}"),
            AdeKind::D4 => "D4".to_string(),
            AdeKind::E6 => "E6".to_string(),
            AdeKind::E7 => "E7".to_string(),
            AdeKind::E8 => "E8".to_string(),
        }
    }

    /// The finite subgroup of Sp(1) this diagram classifies.
    pub fn isotropy_name(&self) -> String {
        match self {
            AdeKind::A(k) => format!("C{}", k + 1),
            AdeKind::D4 => "Dic2".to_string(),
            AdeKind::E6 => "2T".to_string(),
            AdeKind::E7 => "2O".to_string(),
            AdeKind::E8 => "2I".to_string(),
        }
    }
}

/// A signed permutation of `{0..n-1}`: `e_b -> signs[b] * e_{perm[b]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    pub perm: Vec<u8>,
    pub signs: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm {
            perm: (0..n as u8).collect(),
            signs: vec![1; n],
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// `e_a <-> e_b`, both signs `sign`.
    pub fn transposition(n: usize, a: usize, b: usize, sign: i8) -> Self {
        let mut p = SignedPerm::identity(n);
        p.perm[a] = b as u8;
        p.perm[b] = a as u8;
        p.signs[a] = sign;
        p.signs[b] = sign;
        p
    }

    /// `self` after `other`: `(self . other)(e_b) = self(other(e_b))`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let n = self.n();
        let mut perm = vec![0u8; n];
        let mut signs = vec![1i8; n];
        for b in 0..n {
            let mid = other.perm[b] as usize;
            perm[b] = self.perm[mid];
            signs[b] = other.signs[b] * self.signs[mid];
        }
        SignedPerm { perm, signs }
    }

    /// Matrix entry convention: column `b` has `signs[b]` in row `perm[b]`.
    pub fn to_matrix(&self) -> IMat {
        let n = self.n();
        let mut m = IMat::zeros(n, n);
        for b in 0..n {
            m.set(self.perm[b] as usize, b, self.signs[b] as i64);
        }
        m
    }

    /// Image of an integer vector.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; v.len()];
        for b in 0..self.n() {
            out[self.perm[b] as usize] += self.signs[b] as i64 * v[b];
        }
        out
    }

    pub fn flips(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }
}

/// Root-system data for a supported ADE type.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub kind: AdeKind,
    /// rank of the root system
    pub rank: usize,
    /// dimension of the ambient coordinate space (`k+1` for `A_k`, 4 for D4)
    pub dim: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i64>>,
    /// does the coordinate model carry the sum-zero constraint?
    pub sum_zero: bool,
}

impl RootSystem {
    pub fn new(kind: AdeKind) -> Result<Self, AleError> {
        match kind {
            AdeKind::A(k) => {
                if k == 0 || k > 8 {
                    return Err(AleError::UnsupportedAde(kind.label()));
                }
                let n = k + 1;
                let unit = |a: usize, b: usize| {
                    let mut v = vec![0i64; n];
                    v[a] = 1;
                    v[b] = -1;
                    v
                };
                let simple_roots = (0..k).map(|i| unit(i, i + 1)).collect();
                let mut positive_roots = Vec::new();
                for a in 0..n {
                    for b in a + 1..n {
                        positive_roots.push(unit(a, b));
                    }
                }
                Ok(RootSystem {
                    kind,
                    rank: k,
                    dim: n,
                    simple_roots,
                    positive_roots,
                    sum_zero: true,
                })
            }
            AdeKind::D4 => {
                let n = 4;
                let mk = |a: usize, sa: i64, b: usize, sb: i64| {
                    let mut v = vec![0i64; n];
                    v[a] = sa;
                    v[b] = sb;
                    v
                };
                let simple_roots = vec![
                    mk(0, 1, 1, -1),
                    mk(1, 1, 2, -1),
                    mk(2, 1, 3, -1),
                    mk(2, 1, 3, 1),
                ];
                let mut positive_roots = Vec::new();
                for a in 0..n {
                    for b in a + 1..n {
                        positive_roots.push(mk(a, 1, b, -1));
                        positive_roots.push(mk(a, 1, b, 1));
                    }
                }
                Ok(RootSystem {
                    kind,
                    rank: 4,
                    dim: n,
                    simple_roots,
                    positive_roots,
                    sum_zero: false,
                })
            }
            other => Err(AleError::UnsupportedAde(other.label())),
        }
    }

    /// Reflections through the simple roots as signed permutations.
    pub fn simple_reflections(&self) -> Vec<SignedPerm> {
        self.simple_roots
            .iter()
            .map(|r| {
                let nz: Vec<(usize, i64)> = r
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (i, c))
                    .collect();
                assert_eq!(nz.len(), 2, "ADE roots here have two nonzero entries");
                let ((a, ca), (b, cb)) = (nz[0], nz[1]);
                // e_a - e_b: swap; e_a + e_b: swap with both signs flipped
                let sign = if ca * cb < 0 { 1 } else { -1 };
                SignedPerm::transposition(self.dim, a, b, sign)
            })
            .collect()
    }

    /// The full Weyl group by closure of the simple reflections.
    pub fn weyl_group(&self) -> Vec<SignedPerm> {
        let gens = self.simple_reflections();
        let id = SignedPerm::identity(self.dim);
        let mut seen: HashSet<SignedPerm> = HashSet::new();
        seen.insert(id.clone());
        let mut order = vec![id];
        let mut frontier = order.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for e in &frontier {
                for g in &gens {
                    let prod = g.compose(e);
                    if seen.insert(prod.clone()) {
                        order.push(prod.clone());
                        next.push(prod);
                    }
                }
            }
            frontier = next;
        }
        order
    }

    pub fn expected_weyl_order(&self) -> usize {
        match self.kind {
            AdeKind::A(k) => (1..=k + 1).product(),
            AdeKind::D4 => 192,
            _ => 0,
        }
    }

    /// Is the signed permutation an allowed Weyl element for this type?
    pub fn admits(&self, w: &SignedPerm) -> bool {
        match self.kind {
            AdeKind::A(_) => w.flips() == 0,
            AdeKind::D4 => w.flips() % 2 == 0,
            _ => false,
        }
    }
}
