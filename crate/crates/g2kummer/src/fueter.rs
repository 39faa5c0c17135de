//! Finite-dimensional spectral model for the deformation operator of the
//! model associatives: the period-uniform estimate for `d/dt + A` on sections
//! over a circle, and the contraction step of the perturbation argument.
//!
//! Sections live on a periodic grid and are differentiated spectrally, so
//! trigonometric polynomials below the Nyquist mode are handled exactly and
//! the Fourier-side oracle is available for the L2 comparison.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FueterError {
    #[error("matrix must be square")]
    NotSquare,
    #[error("operation requires a symmetric matrix")]
    NotSymmetric,
    #[error("grid too coarse: need at least 4 time samples")]
    GridTooCoarse,
    #[error("condition number {0:.3e} exceeds 1e12")]
    IllConditioned(f64),
    #[error("scale t = {t} is not below the contraction threshold {threshold:.6}")]
    AboveThreshold { t: f64, threshold: f64 },
    #[error("iteration is not contractive: measured ratio {0:.3}")]
    NonContractive(f64),
    #[error("error term exceeds the declared bound c1 t^beta")]
    ErrorTermTooLarge,
    #[error("exponents must satisfy 2 beta > gamma and beta > gamma")]
    BadExponents,
}

/// A finite spectral truncation `A` of a formally self-adjoint first-order
/// operator, together with the circle length `L`.
#[derive(Debug, Clone)]
pub struct SpectralOperator {
    pub a: Vec<Vec<f64>>,
    pub n: usize,
    pub period: f64,
    symmetric: bool,
}

impl SpectralOperator {
    pub fn new(a: Vec<Vec<f64>>, period: f64) -> Result<Self, FueterError> {
        let n = a.len();
        if a.iter().any(|r| r.len() != n) {
            return Err(FueterError::NotSquare);
        }
        let mut symmetric = true;
        for i in 0..n {
            for j in 0..n {
                if (a[i][j] - a[j][i]).abs() > 1e-12 {
                    symmetric = false;
                }
            }
        }
        Ok(SpectralOperator {
            a,
            n,
            period,
            symmetric,
        })
    }

    /// The two-block model: a kernel of dimension `zero_dim` plus an
    /// invertible symmetric block with the given spectrum.
    pub fn model(zero_dim: usize, spectrum: &[f64], period: f64) -> Self {
        let n = zero_dim + spectrum.len();
        let mut a = vec![vec![0.0; n]; n];
        for (i, &l) in spectrum.iter().enumerate() {
            a[zero_dim + i][zero_dim + i] = l;
        }
        SpectralOperator {
            a,
            n,
            period,
            symmetric: true,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Add a perturbation block (the spectral shadow of a torsion term).
    /// The flat model has zero torsion, so this defaults to unused.
    pub fn with_perturbation(self, eps: &[Vec<f64>]) -> Result<Self, FueterError> {
        if eps.len() != self.n || eps.iter().any(|r| r.len() != self.n) {
            return Err(FueterError::NotSquare);
        }
        let mut a = self.a.clone();
        for r in 0..self.n {
            for c in 0..self.n {
                a[r][c] += eps[r][c];
            }
        }
        SpectralOperator::new(a, self.period)
    }

    pub fn apply_matrix(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.a[r][c] * v[c]).sum())
            .collect()
    }

    /// Eigendecomposition by cyclic Jacobi sweeps; requires symmetry.
    /// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns.
    pub fn eigen(&self) -> Result<(Vec<f64>, Vec<Vec<f64>>), FueterError> {
        if !self.symmetric {
            return Err(FueterError::NotSymmetric);
        }
        let n = self.n;
        let mut a = self.a.clone();
        let mut v = vec![vec![0.0; n]; n];
        for (i, row) in v.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        for _sweep in 0..60 {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off += a[p][q] * a[p][q];
                }
            }
            if off < 1e-28 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k][p], a[k][q]);
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let (vkp, vkq) = (v[k][p], v[k][q]);
                        v[k][p] = c * vkp - s * vkq;
                        v[k][q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        Ok((eig, v))
    }

    /// Dimension of `ker A` at absolute tolerance `1e-9`.
    pub fn kernel_dimension(&self) -> Result<usize, FueterError> {
        let (eig, _) = self.eigen()?;
        Ok(eig.iter().filter(|&&l| l.abs() <= 1e-9).count())
    }
}

/// A section on the periodic grid: `m` time samples of vectors in `R^n`,
/// stored row-major (`values[l][j]`).
#[derive(Debug, Clone)]
pub struct GridSection {
    pub values: Vec<Vec<f64>>,
    pub m: usize,
    pub n: usize,
}

impl GridSection {
    pub fn zeros(m: usize, n: usize) -> Self {
        GridSection {
            values: vec![vec![0.0; n]; m],
            m,
            n,
        }
    }

    pub fn constant(m: usize, v: &[f64]) -> Self {
        GridSection {
            values: vec![v.to_vec(); m],
            m,
            n: v.len(),
        }
    }

    /// `cos/sin(2 pi k t / L) * v` sampled on the grid.
    pub fn mode(m: usize, k: usize, use_sin: bool, v: &[f64], _period: f64) -> Self {
        let n = v.len();
        let mut s = GridSection::zeros(m, n);
        for l in 0..m {
            let phase = 2.0 * std::f64::consts::PI * (k as f64) * (l as f64) / (m as f64);
            let w = if use_sin { phase.sin() } else { phase.cos() };
            for j in 0..n {
                s.values[l][j] = w * v[j];
            }
        }
        s
    }

    pub fn scale(&self, c: f64) -> GridSection {
        let mut out = self.clone();
        for row in &mut out.values {
            for x in row {
                *x *= c;
            }
        }
        out
    }

    pub fn add(&self, other: &GridSection) -> GridSection {
        let mut out = self.clone();
        for (r, row) in out.values.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x += other.values[r][c];
            }
        }
        out
    }

    pub fn sub(&self, other: &GridSection) -> GridSection {
        self.add(&other.scale(-1.0))
    }

    fn sample_norm(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Discrete L2 norm: root of the time-mean of the squared sample norms.
    pub fn norm_l2(&self) -> f64 {
        let s: f64 = self
            .values
            .iter()
            .map(|v| Self::sample_norm(v).powi(2))
            .sum();
        (s / self.m as f64).sqrt()
    }

    pub fn norm_sup(&self) -> f64 {
        self.values
            .iter()
            .map(|v| Self::sample_norm(v))
            .fold(0.0, f64::max)
    }

    /// Discrete Holder seminorm at the grid scale: largest divided difference
    /// `|s(t+h) - s(t)| / h^alpha`.
    pub fn holder_seminorm(&self, alpha: f64, period: f64) -> f64 {
        let h = period / self.m as f64;
        let mut out: f64 = 0.0;
        for l in 0..self.m {
            let next = (l + 1) % self.m;
            let diff: Vec<f64> = (0..self.n)
                .map(|j| self.values[next][j] - self.values[l][j])
                .collect();
            out = out.max(Self::sample_norm(&diff) / h.powf(alpha));
        }
        out
    }
}

/// Spectral time derivative: exact on trigonometric polynomials below the
/// Nyquist mode (the Nyquist derivative is set to zero by convention).
pub fn time_derivative(s: &GridSection, period: f64) -> GridSection {
    let (m, n) = (s.m, s.n);
    let mut out = GridSection::zeros(m, n);
    let tau = 2.0 * std::f64::consts::PI;
    for j in 0..n {
        // complex DFT of the j-th component
        let mut re = vec![0.0f64; m];
        let mut im = vec![0.0f64; m];
        for k in 0..m {
            for l in 0..m {
                let ang = -tau * (k as f64) * (l as f64) / (m as f64);
                re[k] += s.values[l][j] * ang.cos();
                im[k] += s.values[l][j] * ang.sin();
            }
        }
        // multiply mode k by i * 2 pi k' / L with the signed frequency k'
        let mut dre = vec![0.0f64; m];
        let mut dim_ = vec![0.0f64; m];
        for k in 0..m {
            let signed = if k <= m / 2 {
                k as i64
            } else {
                k as i64 - m as i64
            };
            if m % 2 == 0 && k == m / 2 {
                continue; // Nyquist
            }
            let w = tau * signed as f64 / period;
            dre[k] = -w * im[k];
            dim_[k] = w * re[k];
        }
        for l in 0..m {
            let mut acc = 0.0;
            for k in 0..m {
                let ang = tau * (k as f64) * (l as f64) / (m as f64);
                acc += dre[k] * ang.cos() - dim_[k] * ang.sin();
            }
            out.values[l][j] = acc / m as f64;
        }
    }
    out
}

/// `(d/dt + A) s` with spectral `d/dt` and pointwise `A`.
pub fn apply_dt_plus_a(op: &SpectralOperator, s: &GridSection) -> Result<GridSection, FueterError> {
    if s.m < 4 {
        return Err(FueterError::GridTooCoarse);
    }
    let mut out = time_derivative(s, op.period);
    for l in 0..s.m {
        let av = op.apply_matrix(&s.values[l]);
        for j in 0..s.n {
            out.values[l][j] += av[j];
        }
    }
    Ok(out)
}

/// Pointwise projection onto `ker A`, applied at every time sample.
pub fn hat_pi(op: &SpectralOperator, s: &GridSection) -> Result<GridSection, FueterError> {
    let (eig, vecs) = op.eigen()?;
    let kernel: Vec<usize> = (0..op.n).filter(|&i| eig[i].abs() <= 1e-9).collect();
    let mut out = GridSection::zeros(s.m, s.n);
    for l in 0..s.m {
        for &ki in &kernel {
            let coef: f64 = (0..op.n).map(|j| vecs[j][ki] * s.values[l][j]).sum();
            for j in 0..op.n {
                out.values[l][j] += coef * vecs[j][ki];
            }
        }
    }
    Ok(out)
}

/// The averaged kernel projection: the time mean of the pointwise projection,
/// a single vector in `ker A`.
pub fn projector_pi(op: &SpectralOperator, s: &GridSection) -> Result<Vec<f64>, FueterError> {
    let hp = hat_pi(op, s)?;
    let mut out = vec![0.0; s.n];
    for l in 0..s.m {
        for j in 0..s.n {
            out[j] += hp.values[l][j] / s.m as f64;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    L2,
    /// graph norm: sup + divided differences at the grid scale, exponent alpha
    HolderGraph {
        alpha: f64,
    },
}

/// Outcome of the empirical estimate for one period length.
#[derive(Debug, Clone)]
pub struct EstimateReport {
    pub period: f64,
    /// max over trial sections of `|s| / ((L+1) |(d/dt + A)s| + |Pi s|)`
    pub empirical: f64,
    /// Fourier-side upper bound for the L2 ratio
    pub oracle: f64,
    pub trials: usize,
}

fn vec_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn section_norm(
    s: &GridSection,
    kind: NormKind,
    period: f64,
    derivative: Option<&GridSection>,
) -> f64 {
    match kind {
        NormKind::L2 => s.norm_l2(),
        NormKind::HolderGraph { alpha } => {
            let base = s.norm_sup() + s.holder_seminorm(alpha, period);
            match derivative {
                Some(d) => base + d.norm_sup() + d.holder_seminorm(alpha, period),
                None => base,
            }
        }
    }
}

/// Empirical constant of the period-uniform estimate
/// `|s| <= c ((L+1) |(d/dt + A)s| + |Pi s|)`, maximised over a deterministic
/// mode sweep plus seeded random band-limited sections, together with the
/// exact Fourier oracle bounding the L2 ratio.
pub fn estimate_constant(
    op: &SpectralOperator,
    norm: NormKind,
    random_trials: usize,
    seed: u64,
    grid_m: usize,
    max_mode: usize,
) -> Result<EstimateReport, FueterError> {
    use rand::Rng;
    use rand::SeedableRng;
    let (eig, vecs) = op.eigen()?;
    let nonzero: Vec<f64> = eig.iter().copied().filter(|l| l.abs() > 1e-9).collect();
    if !nonzero.is_empty() {
        let lmax = nonzero.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        let lmin = nonzero.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()));
        if lmax / lmin > 1e12 {
            return Err(FueterError::IllConditioned(lmax / lmin));
        }
    }
    let lfac = op.period + 1.0;
    let tau = 2.0 * std::f64::consts::PI;

    // Fourier oracle: max over modes of 1/((L+1) |2 pi i k / L + lambda|),
    // plus the kernel-mean channel with factor exactly 1
    let mut oracle = 1.0f64;
    for (ji, &l) in eig.iter().enumerate() {
        let _ = ji;
        for k in 0..=max_mode {
            let freq = tau * k as f64 / op.period;
            let denom = (l * l + freq * freq).sqrt();
            if denom > 1e-9 {
                oracle = oracle.max(1.0 / (lfac * denom));
            }
        }
    }

    let ratio_of = |s: &GridSection| -> Result<f64, FueterError> {
        let ds = apply_dt_plus_a(op, s)?;
        let pis = projector_pi(op, s)?;
        let num = section_norm(s, norm, op.period, Some(&ds));
        let den = lfac * section_norm(&ds, norm, op.period, None) + vec_norm(&pis);
        if den < 1e-300 {
            return Ok(0.0);
        }
        Ok(num / den)
    };

    let mut empirical = 0.0f64;
    let mut trials = 0usize;
    // deterministic sweep: every eigendirection times every mode
    for j in 0..op.n {
        let col: Vec<f64> = (0..op.n).map(|r| vecs[r][j]).collect();
        for k in 0..=max_mode {
            for use_sin in [false, true] {
                if k == 0 && use_sin {
                    continue;
                }
                let s = GridSection::mode(grid_m, k, use_sin, &col, op.period);
                empirical = empirical.max(ratio_of(&s)?);
                trials += 1;
            }
        }
    }
    // seeded random band-limited sections
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_trials {
        let mut s = GridSection::zeros(grid_m, op.n);
        for j in 0..op.n {
            let col: Vec<f64> = (0..op.n).map(|r| vecs[r][j]).collect();
            for k in 0..=max_mode {
                for use_sin in [false, true] {
                    if k == 0 && use_sin {
                        continue;
                    }
                    let c: f64 = rng.random_range(-1.0..1.0);
                    let mode = GridSection::mode(grid_m, k, use_sin, &col, op.period).scale(c);
                    s = s.add(&mode);
                }
            }
        }
        empirical = empirical.max(ratio_of(&s)?);
        trials += 1;
    }
    Ok(EstimateReport {
        period: op.period,
        empirical,
        oracle,
        trials,
    })
}

/// Discrete adjointness defect of `d/dt + A` against `-d/dt + A` on seeded
/// band-limited sections; vanishes to quadrature accuracy when `A = A^T`.
pub fn selfadjointness_residual(op: &SpectralOperator, seed: u64, grid_m: usize) -> f64 {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let max_mode = grid_m / 2 - 1;
    let random_section = |rng: &mut rand_chacha::ChaCha8Rng| {
        let mut s = GridSection::zeros(grid_m, op.n);
        for j in 0..op.n {
            let mut basis = vec![0.0; op.n];
            basis[j] = 1.0;
            for k in 0..=max_mode.min(5) {
                for use_sin in [false, true] {
                    if k == 0 && use_sin {
                        continue;
                    }
                    let c: f64 = rng.random_range(-1.0..1.0);
                    s = s.add(&GridSection::mode(grid_m, k, use_sin, &basis, op.period).scale(c));
                }
            }
        }
        s
    };
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let u = random_section(&mut rng);
        let v = random_section(&mut rng);
        let du = apply_dt_plus_a(op, &u).expect("grid is fine");
        // formal adjoint candidate: -d/dt + A
        let dv = time_derivative(&v, op.period).scale(-1.0).add(&{
            let mut av = GridSection::zeros(grid_m, op.n);
            for l in 0..grid_m {
                let w = op.apply_matrix(&v.values[l]);
                av.values[l] = w;
            }
            av
        });
        let pair = |a: &GridSection, b: &GridSection| -> f64 {
            let mut acc = 0.0;
            for l in 0..grid_m {
                for j in 0..op.n {
                    acc += a.values[l][j] * b.values[l][j];
                }
            }
            acc / grid_m as f64
        };
        worst = worst.max((pair(&du, &v) - pair(&u, &dv)).abs());
    }
    worst
}

// ---------------------------------------------------------------------------
// Contraction scheme
// ---------------------------------------------------------------------------

/// Data of the abstract quadratic fixed-point problem at scale `t`:
/// linear inverse bound `c2 t^-gamma`, quadratic constant `c3`, error bound
/// `c1 t^beta`.
#[derive(Debug, Clone, Copy)]
pub struct ContractionProblem {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub beta: f64,
    pub gamma: f64,
    pub t: f64,
}

impl ContractionProblem {
    /// The constant controlling both the error term and the Lipschitz bound.
    pub fn c_e(&self) -> f64 {
        (self.c1 * self.c2)
            .max(2.0 * self.c2 * self.c3)
            .max(f64::MIN_POSITIVE)
    }

    /// Largest scale at which the displayed smallness conditions hold with
    /// the radius `r = 2 c_E t^(beta - gamma)`:
    /// `c_E (r + t^beta) t^-gamma <= 1/2`.
    pub fn threshold(&self) -> Result<f64, FueterError> {
        if !(2.0 * self.beta > self.gamma) || self.beta <= self.gamma {
            return Err(FueterError::BadExponents);
        }
        let ce = self.c_e();
        let cond = |t: f64| -> f64 {
            let r = 2.0 * ce * t.powf(self.beta - self.gamma);
            ce * (r + t.powf(self.beta)) * t.powf(-self.gamma)
        };
        if cond(1.0) <= 0.5 {
            return Ok(1.0);
        }
        // scan downward for an admissible scale, then bisect the boundary
        let mut hi = 1.0f64;
        let mut lo = 1.0f64;
        loop {
            lo /= 2.0;
            if cond(lo) <= 0.5 {
                break;
            }
            hi = lo;
            if lo < 1e-12 {
                return Ok(0.0);
            }
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if cond(mid) <= 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

/// Trace of a scalar fixed-point iteration.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub values: Vec<f64>,
    /// successive increment ratios `|v_{n+1} - v_n| / |v_n - v_{n-1}|`
    pub ratios: Vec<f64>,
    pub converged: bool,
}

/// Iterate `v <- map(v)` to a fixed point, recording increments and the
/// empirical contraction ratios.
pub fn fixed_point_iterate(
    map: impl Fn(f64) -> f64,
    start: f64,
    max_iter: usize,
    tol: f64,
) -> Result<IterationTrace, FueterError> {
    let mut values = vec![start];
    let mut ratios = Vec::new();
    let mut prev_inc: Option<f64> = None;
    let mut v = start;
    for _ in 0..max_iter {
        let next = map(v);
        let inc = (next - v).abs();
        values.push(next);
        if let Some(p) = prev_inc {
            if p > 0.0 {
                let ratio = inc / p;
                ratios.push(ratio);
                if ratio >= 1.0 && inc > tol {
                    return Err(FueterError::NonContractive(ratio));
                }
            }
        }
        v = next;
        if inc <= tol {
            return Ok(IterationTrace {
                values,
                ratios,
                converged: true,
            });
        }
        prev_inc = Some(inc);
        if !v.is_finite() {
            return Err(FueterError::NonContractive(f64::INFINITY));
        }
    }
    Ok(IterationTrace {
        values,
        ratios,
        converged: false,
    })
}

/// Result of the guarded contraction solve.
#[derive(Debug, Clone)]
pub struct ContractionOutcome {
    pub solution: f64,
    pub trace: IterationTrace,
    pub threshold: f64,
    pub radius: f64,
    pub c_e: f64,
    /// predicted Lipschitz constant `c_E (r + t^beta) t^-gamma`
    pub predicted_ratio: f64,
}

/// Solve `d v + c3 v^2 + e = 0` with `d = t^gamma / c2` by iterating
/// `v <- -(c3 v^2 + e) / d`, guarded by the threshold computed from the
/// displayed smallness inequalities.
pub fn contraction_solve(
    p: &ContractionProblem,
    e: f64,
    max_iter: usize,
) -> Result<ContractionOutcome, FueterError> {
    let threshold = p.threshold()?;
    if p.t >= threshold {
        return Err(FueterError::AboveThreshold { t: p.t, threshold });
    }
    if e.abs() > p.c1 * p.t.powf(p.beta) * (1.0 + 1e-12) {
        return Err(FueterError::ErrorTermTooLarge);
    }
    let d = p.t.powf(p.gamma) / p.c2;
    let ce = p.c_e();
    let radius = 2.0 * ce * p.t.powf(p.beta - p.gamma);
    let predicted_ratio = ce * (radius + p.t.powf(p.beta)) * p.t.powf(-p.gamma);
    let trace = fixed_point_iterate(|v| -(p.c3 * v * v + e) / d, 0.0, max_iter, 1e-16)?;
    let solution = *trace.values.last().unwrap();
    Ok(ContractionOutcome {
        solution,
        trace,
        threshold,
        radius,
        c_e: ce,
        predicted_ratio,
    })
}
