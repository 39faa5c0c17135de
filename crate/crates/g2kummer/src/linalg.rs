//! Small dense exact linear algebra: rational Gaussian elimination, kernels,
//! Smith normal form over the integers, and congruence solving on tori.
//!
//! Matrices here are tiny (at most ~30x30), so everything is straightforward
//! elimination with exact `Rat` scalars.

use crate::rat::{frac_mod1, int, rat, Rat};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rat>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&v| int(v)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
    }

    pub fn at(&self, r: usize, c: usize) -> Rat {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Rat> {
        (0..self.cols).map(|c| self.at(r, c)).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = RatMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += self.at(r, k) * other.at(k, c);
                }
                m.set(r, c, acc);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * v[c]).sum())
            .collect()
    }

    pub fn add(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for i in 0..m.data.len() {
            m.data[i] += other.data[i];
        }
        m
    }

    pub fn sub(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for i in 0..m.data.len() {
            m.data[i] -= other.data[i];
        }
        m
    }

    pub fn scale(&self, s: Rat) -> RatMat {
        let mut m = self.clone();
        for v in &mut m.data {
            *v *= s;
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == RatMat::identity(self.rows)
    }

    /// `M^T M == I`, the exact orthogonality test.
    pub fn is_orthogonal(&self) -> bool {
        self.rows == self.cols && self.transpose().mul(self).is_identity()
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.at(r, col).is_zero());
            let Some(p) = pivot else { return Rat::zero() };
            if p != col {
                for c in 0..n {
                    let (a, b) = (m.at(col, c), m.at(p, c));
                    m.set(col, c, b);
                    m.set(p, c, a);
                }
                det = -det;
            }
            let pv = m.at(col, col);
            det *= pv;
            for r in col + 1..n {
                let f = m.at(r, col) / pv;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.at(r, c) - f * m.at(col, c);
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (RatMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    let (a, b) = (m.at(row, c), m.at(p, c));
                    m.set(row, c, b);
                    m.set(p, c, a);
                }
            }
            let pv = m.at(row, col);
            for c in 0..m.cols {
                let v = m.at(row, c) / pv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.at(r, col);
                if f.is_zero() {
                    continue;
                }
                for c in 0..m.cols {
                    let v = m.at(r, c) - f * m.at(row, c);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `ker(self)` as column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        for &f in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.at(i, f);
            }
            basis.push(v);
        }
        basis
    }

    /// One particular solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = RatMat::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let (m, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = m.at(i, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = RatMat::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.at(r, c));
            }
            aug.set(r, n + r, Rat::one());
        }
        let (m, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = RatMat::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, m.at(r, n + c));
            }
        }
        Some(inv)
    }
}

/// Canonical basis of a row space: RREF rows with zero rows dropped.
/// Equal spans produce identical canonical bases.
pub fn rowspace_canonical(vectors: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = RatMat::from_rows(vectors).rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

pub fn subspace_eq(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> bool {
    rowspace_canonical(a) == rowspace_canonical(b)
}

/// Is `span(b)` contained in `span(a)`?
pub fn subspace_contains(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> bool {
    if b.is_empty() {
        return true;
    }
    let rank_a = RatMat::from_rows(a).rank();
    let mut all: Vec<Vec<Rat>> = a.to_vec();
    all.extend_from_slice(b);
    RatMat::from_rows(&all).rank() == rank_a
}

/// Scale a rational vector to a primitive integer vector (gcd 1), keeping sign
/// of the first nonzero entry positive.
pub fn primitive_integer(v: &[Rat]) -> Vec<i64> {
    let mut lcm: i64 = 1;
    for x in v {
        lcm = lcm / gcd_i64(lcm, *x.denom()) * *x.denom();
    }
    let mut w: Vec<i64> = v.iter().map(|x| x.numer() * (lcm / x.denom())).collect();
    let mut g = 0;
    for &x in &w {
        g = gcd_i64(g, x);
    }
    if g != 0 {
        for x in &mut w {
            *x /= g;
        }
    }
    if let Some(first) = w.iter().find(|&&x| x != 0) {
        if *first < 0 {
            for x in &mut w {
                *x = -*x;
            }
        }
    }
    w
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// ---------------------------------------------------------------------------
// Integer matrices and Smith normal form
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i64>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn to_rat(&self) -> RatMat {
        let mut m = RatMat::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, int(self.at(r, c)));
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            let (x, y) = (self.at(a, c), self.at(b, c));
            self.set(a, c, y);
            self.set(b, c, x);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            let (x, y) = (self.at(r, a), self.at(r, b));
            self.set(r, a, y);
            self.set(r, b, x);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        for c in 0..self.cols {
            let v = self.at(dst, c) + k * self.at(src, c);
            self.set(dst, c, v);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        for r in 0..self.rows {
            let v = self.at(r, dst) + k * self.at(r, src);
            self.set(r, dst, v);
        }
    }
}

/// Smith normal form: returns `(u, d, v)` with `u * self * v = d`,
/// `u`, `v` unimodular and `d` diagonal with `d[i] | d[i+1]`.
pub fn smith_normal_form(a: &IMat) -> (IMat, IMat, IMat) {
    let mut d = a.clone();
    let mut u = IMat::identity(a.rows);
    let mut v = IMat::identity(a.cols);
    let n = a.rows.min(a.cols);

    for t in 0..n {
        'reduce: loop {
            // pivot: smallest nonzero entry of the remaining block; each pass
            // below either finishes or strictly shrinks it, so this terminates
            let mut best: Option<(usize, usize)> = None;
            for r in t..d.rows {
                for c in t..d.cols {
                    let x = d.at(r, c).abs();
                    if x != 0 && best.map_or(true, |(br, bc)| x < d.at(br, bc).abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((r, c)) = best else { break };
            if r != t {
                d.swap_rows(t, r);
                u.swap_rows(t, r);
            }
            if c != t {
                d.swap_cols(t, c);
                v.swap_cols(t, c);
            }
            let p = d.at(t, t);
            let mut dirty = false;
            for r in t + 1..d.rows {
                let q = d.at(r, t).div_euclid(p);
                if q != 0 {
                    d.add_row(r, t, -q);
                    u.add_row(r, t, -q);
                }
                if d.at(r, t) != 0 {
                    dirty = true;
                }
            }
            for c in t + 1..d.cols {
                let q = d.at(t, c).div_euclid(p);
                if q != 0 {
                    d.add_col(c, t, -q);
                    v.add_col(c, t, -q);
                }
                if d.at(t, c) != 0 {
                    dirty = true;
                }
            }
            if dirty {
                continue 'reduce;
            }
            // pivot must divide the remaining block for the chain property
            let p = d.at(t, t);
            for r in t + 1..d.rows {
                for c in t + 1..d.cols {
                    if d.at(r, c) % p != 0 {
                        d.add_row(t, r, 1);
                        u.add_row(t, r, 1);
                        continue 'reduce;
                    }
                }
            }
            break;
        }
    }
    for i in 0..n {
        if d.at(i, i) < 0 {
            for c in 0..d.cols {
                let x = d.at(i, c);
                d.set(i, c, -x);
            }
            for c in 0..u.cols {
                let x = u.at(i, c);
                u.set(i, c, -x);
            }
        }
    }
    (u, d, v)
}

/// Solution set of `a * y = s (mod Z^n)` on the torus `[0,1)^n`:
/// a list of affine subtori, each given by `(offset, free_directions)`, where
/// `free_directions` are integer vectors spanning the continuous directions.
#[derive(Debug, Clone)]
pub struct TorusSolutions {
    pub offsets: Vec<Vec<Rat>>,
    pub directions: Vec<Vec<i64>>,
}

pub fn solve_torus_congruence(a: &IMat, s: &[Rat]) -> TorusSolutions {
    assert_eq!(a.rows, a.cols, "square systems only");
    assert_eq!(s.len(), a.rows);
    let n = a.rows;
    let (u, d, v) = smith_normal_form(a);
    let us: Vec<Rat> = u.to_rat().mul_vec(s);
    let mut free = Vec::new();
    let mut per_coord: Vec<Vec<Rat>> = Vec::new();
    for i in 0..n {
        let di = d.at(i, i);
        if di == 0 {
            if !us[i].is_integer() {
                return TorusSolutions {
                    offsets: Vec::new(),
                    directions: Vec::new(),
                };
            }
            free.push(i);
            per_coord.push(vec![Rat::zero()]);
        } else {
            let base = us[i] / int(di);
            let step = rat(1, di.abs());
            per_coord.push(
                (0..di.abs())
                    .map(|m| frac_mod1(base + step * int(m)))
                    .collect(),
            );
        }
    }
    // cartesian product of the finite coordinate choices
    let mut zs: Vec<Vec<Rat>> = vec![Vec::new()];
    for choices in &per_coord {
        let mut next = Vec::with_capacity(zs.len() * choices.len());
        for z in &zs {
            for &c in choices {
                let mut z2 = z.clone();
                z2.push(c);
                next.push(z2);
            }
        }
        zs = next;
    }
    let vr = v.to_rat();
    let offsets = zs
        .iter()
        .map(|z| vr.mul_vec(z).into_iter().map(frac_mod1).collect::<Vec<_>>())
        .collect();
    let directions = free
        .iter()
        .map(|&i| (0..n).map(|r| v.at(r, i)).collect())
        .collect();
    TorusSolutions {
        offsets,
        directions,
    }
}

/// Does `b` lie in the lattice `a * Z^n` (columns of `a` over the integers)?
pub fn in_column_lattice(a: &IMat, b: &[Rat]) -> bool {
    let (u, d, _) = smith_normal_form(a);
    let ub = u.to_rat().mul_vec(b);
    let n = a.rows.min(a.cols);
    for i in 0..a.rows {
        let di = if i < n { d.at(i, i) } else { 0 };
        if di == 0 {
            if !ub[i].is_zero() {
                return false;
            }
        } else if !(ub[i] / int(di)).is_integer() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_kernel() {
        let m = RatMat::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        for row in 0..3 {
            let dot: Rat = (0..3).map(|c| m.at(row, c) * k[0][c]).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let m = RatMat::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.det(), int(1));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
    }

    // determinantal-divisor oracle: d_1 = gcd(entries),
    // d_1 d_2 = gcd(2x2 minors), d_1 d_2 d_3 = |det|
    fn snf_diag_oracle(a: &IMat) -> Vec<i64> {
        let mut g1 = 0;
        for r in 0..3 {
            for c in 0..3 {
                g1 = gcd_i64(g1, a.at(r, c));
            }
        }
        let mut g2 = 0;
        for r1 in 0..3 {
            for r2 in r1 + 1..3 {
                for c1 in 0..3 {
                    for c2 in c1 + 1..3 {
                        let m = a.at(r1, c1) * a.at(r2, c2) - a.at(r1, c2) * a.at(r2, c1);
                        g2 = gcd_i64(g2, m);
                    }
                }
            }
        }
        let det = *a.to_rat().det().numer();
        vec![g1, g2 / g1, (det / g2).abs()]
    }

    #[test]
    fn smith_form_examples() {
        let a = IMat::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let (u, d, v) = smith_normal_form(&a);
        // u*a*v == d
        let lhs = u.to_rat().mul(&a.to_rat()).mul(&v.to_rat());
        assert_eq!(lhs, d.to_rat());
        // diagonal entries match the determinantal-divisor oracle
        let diag: Vec<i64> = (0..3).map(|i| d.at(i, i)).collect();
        assert_eq!(diag, snf_diag_oracle(&a));
        assert_eq!(diag, vec![2, 2, 156]);
        for i in 0..2 {
            assert_eq!(diag[i + 1] % diag[i], 0);
        }
        // unimodularity
        assert!([int(1), int(-1)].contains(&u.to_rat().det()));
        assert!([int(1), int(-1)].contains(&v.to_rat().det()));
    }

    #[test]
    fn torus_congruence_isolated() {
        // -2x == -1/2 mod 1  =>  x in {1/4, 3/4}
        let a = IMat::from_rows(&[vec![-2]]);
        let sol = solve_torus_congruence(&a, &[rat(-1, 2)]);
        assert!(sol.directions.is_empty());
        let mut xs: Vec<Rat> = sol.offsets.iter().map(|o| o[0]).collect();
        xs.sort();
        assert_eq!(xs, vec![rat(1, 4), rat(3, 4)]);
    }

    #[test]
    fn torus_congruence_free_direction() {
        // 0*x == 1/2 has no solutions; 0*x == 0 is everything
        let a = IMat::from_rows(&[vec![0]]);
        assert!(solve_torus_congruence(&a, &[rat(1, 2)]).offsets.is_empty());
        let all = solve_torus_congruence(&a, &[int(0)]);
        assert_eq!(all.offsets.len(), 1);
        assert_eq!(all.directions.len(), 1);
    }

    #[test]
    fn subspace_comparison() {
        let a = vec![vec![int(1), int(0), int(1)], vec![int(0), int(1), int(1)]];
        let b = vec![vec![int(1), int(1), int(2)], vec![int(1), int(-1), int(0)]];
        assert!(subspace_eq(&a, &b));
        assert!(subspace_contains(&a, &[vec![int(2), int(3), int(5)]]));
        assert!(!subspace_contains(&a, &[vec![int(1), int(0), int(0)]]));
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(
            primitive_integer(&[rat(1, 2), rat(-3, 2), int(1)]),
            vec![1, -3, 2]
        );
        assert_eq!(primitive_integer(&[int(-2), int(4)]), vec![1, -2]);
    }

    #[test]
    fn column_lattice_membership() {
        let a = IMat::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert!(in_column_lattice(&a, &[int(4), int(-3)]));
        assert!(!in_column_lattice(&a, &[int(1), int(0)]));
        assert!(!in_column_lattice(&a, &[rat(1, 2), int(0)]));
    }
}
