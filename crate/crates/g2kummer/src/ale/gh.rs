//! Gibbons-Hawking numerics: the multi-center potential, harmonicity and
//! closedness diagnostics, and the asymptotic decay fit.
//!
//! The potential is evaluated exactly when the squared distances are perfect
//! rational squares; everything differential is double precision with
//! explicit stencils, so the discretisation order is observable through
//! Richardson ratios.

use super::{AleError, GHConfig};
use crate::quat::ImVec;
use crate::rat::{int, rat_sqrt, to_f64, Rat};
use num_traits::Zero;

/// An exact-or-float scalar result.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Approx(f64),
}

impl Scalar {
    pub fn as_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => to_f64(*r),
            Scalar::Approx(x) => *x,
        }
    }
}

/// `V(q) = sum_a 1 / (2 |q - zeta_a|)`, exact when every `|q - zeta_a|^2`
/// is a perfect rational square.
pub fn gh_potential(cfg: &GHConfig, q: ImVec) -> Result<Scalar, AleError> {
    let mut exact_terms: Vec<Rat> = Vec::new();
    let mut all_exact = true;
    for &z in cfg.charges() {
        let d2 = q.sub(z).norm_sq();
        if d2.is_zero() {
            return Err(AleError::AtCharge);
        }
        match rat_sqrt(d2) {
            Some(d) => exact_terms.push(int(1) / (int(2) * d)),
            None => all_exact = false,
        }
    }
    if all_exact {
        return Ok(Scalar::Exact(exact_terms.into_iter().sum()));
    }
    Ok(Scalar::Approx(potential_f64(
        &charges_f64(cfg),
        &to_f64_vec(q),
    )?))
}

pub fn charges_f64(cfg: &GHConfig) -> Vec<[f64; 3]> {
    cfg.charges().iter().map(|&z| to_f64_vec(z)).collect()
}

fn to_f64_vec(v: ImVec) -> [f64; 3] {
    let c = v.coords();
    [to_f64(c[0]), to_f64(c[1]), to_f64(c[2])]
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

pub fn potential_f64(charges: &[[f64; 3]], q: &[f64; 3]) -> Result<f64, AleError> {
    let mut v = 0.0;
    for z in charges {
        let d = dist(q, z);
        if d < 1e-12 {
            return Err(AleError::AtCharge);
        }
        v += 0.5 / d;
    }
    Ok(v)
}

fn grad_v(charges: &[[f64; 3]], q: &[f64; 3]) -> [f64; 3] {
    let mut g = [0.0; 3];
    for z in charges {
        let d = dist(q, z);
        let d3 = d * d * d;
        for l in 0..3 {
            g[l] -= 0.5 * (q[l] - z[l]) / d3;
        }
    }
    g
}

/// Central-difference Laplacian residual of the potential at `q` with step
/// `h`; the potential is harmonic, so the residual is pure truncation error
/// of observed order `h^2`.
pub fn gh_harmonicity_residual(cfg: &GHConfig, q: [f64; 3], h: f64) -> Result<f64, AleError> {
    let charges = charges_f64(cfg);
    let center = potential_f64(&charges, &q)?;
    let mut acc = -6.0 * center;
    for d in 0..3 {
        for s in [-1.0, 1.0] {
            let mut p = q;
            p[d] += s * h;
            let v = potential_f64(&charges, &p).map_err(|_| AleError::StencilHitsCharge)?;
            acc += v;
        }
    }
    Ok(acc / (h * h))
}

/// Wu-Yang vector potential of a unit monopole at the origin with the Dirac
/// string along `string_dir`.
fn monopole_potential(y: &[f64; 3], string_dir: &[f64; 3]) -> Result<[f64; 3], AleError> {
    let sn = (string_dir[0].powi(2) + string_dir[1].powi(2) + string_dir[2].powi(2)).sqrt();
    let n = [
        -string_dir[0] / sn,
        -string_dir[1] / sn,
        -string_dir[2] / sn,
    ];
    // orthonormal frame (u, v, n)
    let pick = if n[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let mut u = [
        n[1] * pick[2] - n[2] * pick[1],
        n[2] * pick[0] - n[0] * pick[2],
        n[0] * pick[1] - n[1] * pick[0],
    ];
    let un = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    for c in &mut u {
        *c /= un;
    }
    let v = [
        n[1] * u[2] - n[2] * u[1],
        n[2] * u[0] - n[0] * u[2],
        n[0] * u[1] - n[1] * u[0],
    ];
    let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
    if r < 1e-12 {
        return Err(AleError::StencilHitsCharge);
    }
    let zp = y[0] * n[0] + y[1] * n[1] + y[2] * n[2];
    let xp = y[0] * u[0] + y[1] * u[1] + y[2] * u[2];
    let yp = y[0] * v[0] + y[1] * v[1] + y[2] * v[2];
    let rho2 = xp * xp + yp * yp;
    if rho2 / (r * r) < 1e-18 {
        if zp < 0.0 {
            return Err(AleError::StencilHitsString);
        }
        return Ok([0.0; 3]); // regular on the axis away from the string
    }
    let f = (1.0 - zp / r) / (2.0 * rho2);
    let ax = -f * yp;
    let ay = f * xp;
    Ok([
        ax * u[0] + ay * v[0],
        ax * u[1] + ay * v[1],
        ax * u[2] + ay * v[2],
    ])
}

fn total_potential_1form(
    charges: &[[f64; 3]],
    q: &[f64; 3],
    string_dir: &[f64; 3],
) -> Result<[f64; 3], AleError> {
    let mut a = [0.0; 3];
    for z in charges {
        let y = [q[0] - z[0], q[1] - z[1], q[2] - z[2]];
        let m = monopole_potential(&y, string_dir)?;
        for l in 0..3 {
            a[l] += m[l];
        }
    }
    Ok(a)
}

/// Residuals of the Gibbons-Hawking structure equations at a chart point.
#[derive(Debug, Clone)]
pub struct FormResidual {
    /// max component of `d theta + *dV`, with `d theta` by central differences
    pub closedness: f64,
    /// max deviation of `omega_r ^ omega_s` from `2 delta_rs V vol`
    pub wedge: f64,
}

/// Check `d theta = -*dV` (numerically, order `h^2`) and the pointwise
/// quaternionic relations of the assembled two-forms.
pub fn gh_form_closedness(
    cfg: &GHConfig,
    q: [f64; 3],
    string_dir: [f64; 3],
    h: f64,
) -> Result<FormResidual, AleError> {
    let charges = charges_f64(cfg);
    // d(a)_{ij} = d_i a_j - d_j a_i by central differences
    let mut da = [[0.0f64; 3]; 3];
    let a_at = |p: &[f64; 3]| total_potential_1form(&charges, p, &string_dir);
    for i in 0..3 {
        let mut qp = q;
        qp[i] += h;
        let mut qm = q;
        qm[i] -= h;
        let ap = a_at(&qp)?;
        let am = a_at(&qm)?;
        for j in 0..3 {
            da[i][j] += (ap[j] - am[j]) / (2.0 * h);
        }
    }
    let g = grad_v(&charges, &q);
    // (*dV)_{23} = d1 V etc.; residual of d(theta) + *dV
    let r23 = (da[1][2] - da[2][1]) + g[0];
    let r31 = (da[2][0] - da[0][2]) + g[1];
    let r12 = (da[0][1] - da[1][0]) + g[2];
    let closedness = r23.abs().max(r31.abs()).max(r12.abs());

    // pointwise hyperkahler triple: omega_r ^ omega_s = 2 delta_rs V vol
    let v = potential_f64(&charges, &q)?;
    let a = a_at(&q)?;
    let mut omega = [[[0.0f64; 4]; 4]; 3];
    let add = |w: &mut [[f64; 4]; 4], i: usize, j: usize, c: f64| {
        w[i][j] += c;
        w[j][i] -= c;
    };
    // coordinates (tau, q1, q2, q3); theta = dtau + a
    for r in 0..3 {
        let (s, t) = ([(2, 3), (3, 1), (1, 2)])[r];
        let w = &mut omega[r];
        add(w, 0, r + 1, 1.0);
        for l in 0..3 {
            if l != r {
                add(w, l + 1, r + 1, a[l]);
            }
        }
        add(w, s, t, v);
    }
    let wedge2 = |a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]| -> f64 {
        a[0][1] * b[2][3] - a[0][2] * b[1][3] + a[0][3] * b[1][2] + b[0][1] * a[2][3]
            - b[0][2] * a[1][3]
            + b[0][3] * a[1][2]
    };
    let mut wedge = 0.0f64;
    for r in 0..3 {
        for s in 0..3 {
            let expect = if r == s { 2.0 * v } else { 0.0 };
            wedge = wedge.max((wedge2(&omega[r], &omega[s]) - expect).abs());
        }
    }
    Ok(FormResidual { closedness, wedge })
}

/// Result of the far-field decay fit of `|V_zeta - V_0|`.
#[derive(Debug, Clone)]
pub enum DecayFit {
    /// the configuration is exactly the collapsed one
    ExactZero,
    Fit {
        /// least-squares slope of `log |V - V_0|` against `log r`
        slope: f64,
        intercept: f64,
        /// `(radius, |V - V_0|)` samples
        points: Vec<(f64, f64)>,
        /// exact quadrupole coefficient along the chosen direction
        quadrupole: f64,
        /// `|V - V_0| r^3 / |Q|` at the largest radius
        quadrupole_ratio: f64,
    },
}

/// Fit the decay exponent of `V_zeta - V_0` along direction `dir` over the
/// given radius ladder. Balance kills the dipole, so the leading term is the
/// quadrupole `Q / r^3`; the fitted slope should be close to `-3`.
pub fn gh_decay_exponent(
    cfg: &GHConfig,
    dir: [f64; 3],
    radii: &[f64],
) -> Result<DecayFit, AleError> {
    if cfg.charges().iter().all(|z| z.is_zero()) {
        return Ok(DecayFit::ExactZero);
    }
    if radii.len() < 2 {
        return Err(AleError::DegenerateLadder);
    }
    for w in radii.windows(2) {
        if w[1] <= w[0] {
            return Err(AleError::DegenerateLadder);
        }
    }
    let dn = (dir[0].powi(2) + dir[1].powi(2) + dir[2].powi(2)).sqrt();
    if dn < 1e-12 {
        return Err(AleError::ZeroDirection);
    }
    let qhat = [dir[0] / dn, dir[1] / dn, dir[2] / dn];
    let charges = charges_f64(cfg);
    let k = charges.len() as f64;
    let mut points = Vec::with_capacity(radii.len());
    for &r in radii {
        let q = [qhat[0] * r, qhat[1] * r, qhat[2] * r];
        let v = potential_f64(&charges, &q)?;
        let v0 = k * 0.5 / r;
        points.push((r, (v - v0).abs()));
    }
    // least squares in log-log
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(r, d) in &points {
        let (x, y) = (r.ln(), d.max(1e-300).ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let quadrupole: f64 = charges
        .iter()
        .map(|z| {
            let zq = z[0] * qhat[0] + z[1] * qhat[1] + z[2] * qhat[2];
            let z2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
            (3.0 * zq * zq - z2) / 4.0
        })
        .sum();
    let (rmax, dmax) = *points.last().unwrap();
    let quadrupole_ratio = if quadrupole.abs() > 1e-14 {
        dmax * rmax.powi(3) / quadrupole.abs()
    } else {
        f64::NAN
    };
    Ok(DecayFit::Fit {
        slope,
        intercept,
        points,
        quadrupole,
        quadrupole_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn axis_pair(c: Rat) -> GHConfig {
        let z = ImVec::new(c, Rat::zero(), Rat::zero());
        GHConfig::new(vec![z, z.neg()]).unwrap()
    }

    #[test]
    fn potential_exact_values() {
        // single charge at the origin, |q| = 1/2 -> V = 1
        let cfg = GHConfig::new(vec![ImVec::zero()]).unwrap();
        let q = ImVec::new(rat(1, 2), Rat::zero(), Rat::zero());
        assert_eq!(gh_potential(&cfg, q).unwrap(), Scalar::Exact(int(1)));
        // two charges +-i/2, evaluation at the origin: 1 + 1 = 2
        let cfg2 = axis_pair(rat(1, 2));
        assert_eq!(
            gh_potential(&cfg2, ImVec::zero()).unwrap(),
            Scalar::Exact(int(2))
        );
        // at a charge: error
        let at = ImVec::new(rat(1, 2), Rat::zero(), Rat::zero());
        assert!(matches!(gh_potential(&cfg2, at), Err(AleError::AtCharge)));
    }

    #[test]
    fn potential_symmetry_and_multiset_invariance() {
        // q equidistant from both charges: k * common term
        let cfg = axis_pair(rat(3, 4));
        let q = ImVec::new(Rat::zero(), int(1), Rat::zero());
        let v = gh_potential(&cfg, q).unwrap();
        let d2 = q.sub(cfg.charges()[0]).norm_sq();
        assert_eq!(v, Scalar::Exact(int(2) / (int(2) * rat_sqrt(d2).unwrap())));
        // swapping equal charges leaves evaluations bit-identical
        let swapped = GHConfig::new(vec![cfg.charges()[1], cfg.charges()[0]]).unwrap();
        assert_eq!(gh_potential(&swapped, q).unwrap(), v);
    }

    #[test]
    fn potential_rotation_equivariance() {
        // rotate charges and the evaluation point by an exact rotation
        let cfg = axis_pair(rat(1, 2));
        let rot = crate::quat::Rotation3::from_i64(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]])
            .unwrap();
        let q = ImVec::new(rat(1, 3), rat(-1, 2), int(2));
        let cfg_r = GHConfig::new(cfg.charges().iter().map(|&z| rot.apply(z)).collect()).unwrap();
        let v1 = gh_potential(&cfg, q).unwrap();
        let v2 = gh_potential(&cfg_r, rot.apply(q)).unwrap();
        match (v1, v2) {
            (Scalar::Exact(a), Scalar::Exact(b)) => assert_eq!(a, b),
            (a, b) => assert!((a.as_f64() - b.as_f64()).abs() < 1e-12),
        }
    }

    #[test]
    fn harmonicity_richardson_ratio() {
        let cfg = axis_pair(rat(1, 2));
        let q = [0.31, 0.47, 0.23];
        let r1 = gh_harmonicity_residual(&cfg, q, 1e-1).unwrap();
        let r2 = gh_harmonicity_residual(&cfg, q, 5e-2).unwrap();
        let r3 = gh_harmonicity_residual(&cfg, q, 2.5e-2).unwrap();
        let ratio1 = r1.abs() / r2.abs();
        let ratio2 = r2.abs() / r3.abs();
        assert!((3.5..=4.5).contains(&ratio1), "ratio1 = {ratio1}");
        assert!((3.5..=4.5).contains(&ratio2), "ratio2 = {ratio2}");
    }

    #[test]
    fn harmonicity_far_field_is_tiny() {
        let cfg = axis_pair(rat(1, 2));
        let q = [700.0, 300.0, 500.0]; // ~1e3 times the configuration diameter
        let r = gh_harmonicity_residual(&cfg, q, 1e-2).unwrap();
        assert!(r.abs() < 1e-6, "far field residual {r}");
    }

    #[test]
    fn stencil_hits_charge_is_reported() {
        let cfg = axis_pair(rat(1, 2));
        // stencil arm lands exactly on the charge (0.5, 0, 0)
        let res = gh_harmonicity_residual(&cfg, [0.4, 0.0, 0.0], 0.1);
        assert!(matches!(res, Err(AleError::StencilHitsCharge)));
    }

    #[test]
    fn closedness_single_monopole() {
        let cfg = GHConfig::new(vec![ImVec::zero()]).unwrap();
        // string along -k; evaluate away from charge and string
        let res = gh_form_closedness(&cfg, [1.6, 1.2, 2.4], [0.0, 0.0, -1.0], 1e-3).unwrap();
        assert!(res.closedness < 1e-8, "closedness {}", res.closedness);
        assert!(res.wedge < 1e-12, "wedge {}", res.wedge);
    }

    #[test]
    fn closedness_richardson_ratio() {
        let cfg = axis_pair(rat(1, 2));
        let q = [0.9, 0.7, 1.1];
        let s = [0.0, 0.0, -1.0];
        let r1 = gh_form_closedness(&cfg, q, s, 2e-2).unwrap().closedness;
        let r2 = gh_form_closedness(&cfg, q, s, 1e-2).unwrap().closedness;
        let ratio = r1 / r2;
        assert!((3.5..=4.5).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn string_collision_is_reported() {
        let cfg = GHConfig::new(vec![ImVec::zero()]).unwrap();
        // the string points along -k from the charge; evaluating on it fails
        let res = gh_form_closedness(&cfg, [0.0, 0.0, -2.0], [0.0, 0.0, -1.0], 1e-3);
        assert!(matches!(res, Err(AleError::StencilHitsString)));
    }

    #[test]
    fn decay_exponent_quadrupole() {
        let cfg = axis_pair(rat(1, 2));
        let radii: Vec<f64> = (0..7).map(|m| 10.0 * 0.5 * 2f64.powi(m)).collect();
        let fit = gh_decay_exponent(&cfg, [2.0, 1.0, 1.0], &radii).unwrap();
        match fit {
            DecayFit::Fit {
                slope,
                quadrupole_ratio,
                ..
            } => {
                assert!((-3.3..=-2.9).contains(&slope), "slope {slope}");
                assert!(
                    (0.8..=1.2).contains(&quadrupole_ratio),
                    "ratio {quadrupole_ratio}"
                );
            }
            DecayFit::ExactZero => panic!("unexpected zero"),
        }
    }

    #[test]
    fn decay_exact_zero_and_ladder_validation() {
        let cfg = GHConfig::new(vec![ImVec::zero(), ImVec::zero()]).unwrap();
        assert!(matches!(
            gh_decay_exponent(&cfg, [1.0, 0.0, 0.0], &[10.0, 20.0]).unwrap(),
            DecayFit::ExactZero
        ));
        let cfg2 = axis_pair(rat(1, 2));
        assert!(matches!(
            gh_decay_exponent(&cfg2, [1.0, 0.0, 0.0], &[10.0, 10.0]),
            Err(AleError::DegenerateLadder)
        ));
    }
}
