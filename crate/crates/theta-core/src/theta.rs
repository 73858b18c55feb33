//! Numerical Riemann theta functions with rational characteristics.
//!
//! `theta[a;b](z, tau) = sum_{n in Z^g} exp(pi i (t(n+a) tau (n+a) + 2 t(n+a)(z+b)))`
//!
//! The sum is truncated to the box `max-norm(n + a) <= R`. For `Y = Im tau`
//! with smallest eigenvalue `lambda` and `s = |Im z|_2`, every term with
//! `|n+a|_oo in (m, m+1]` has modulus at most `exp(-pi lambda m^2 + 2 pi m s)`
//! and there are at most `(2m+3)^g - (2m+1)^g` of them, so the tail beyond
//! radius `R` is bounded by the rapidly convergent sum of these shell bounds;
//! `TruncationParams::choose` picks the smallest `R` whose bound meets the
//! requested absolute target.

use crate::heisenberg::{LPoint, RootOfUnity};
use crate::{par, Complex, CoreError, Result};
use std::f64::consts::PI;

fn czero() -> Complex {
    Complex::new(0.0, 0.0)
}

fn cexp(z: Complex) -> Complex {
    z.exp()
}

/// Symmetric period matrix `tau` in Siegel upper half-space.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodMatrix {
    pub g: usize,
    pub tau: Vec<Vec<Complex>>,
    /// Smallest eigenvalue of `Im tau`, recorded at construction.
    pub min_im_eigenvalue: f64,
}

impl PeriodMatrix {
    pub fn new(tau: Vec<Vec<Complex>>) -> Result<Self> {
        let g = tau.len();
        if g == 0 || tau.iter().any(|row| row.len() != g) {
            return Err(CoreError::Invalid("tau must be square and nonempty".into()));
        }
        let mut max_asym = 0.0_f64;
        let mut scale = 0.0_f64;
        for i in 0..g {
            for j in 0..g {
                max_asym = max_asym.max((tau[i][j] - tau[j][i]).norm());
                scale = scale.max(tau[i][j].norm());
            }
        }
        if max_asym > 1e-12 * scale.max(1.0) {
            return Err(CoreError::NotSymmetric { residual: max_asym, tol: 1e-12 * scale.max(1.0) });
        }
        let lambda = min_eigenvalue_sym(&imag_part(&tau));
        if lambda <= 0.0 {
            return Err(CoreError::NotPositiveDefinite(lambda));
        }
        Ok(Self { g, tau, min_im_eigenvalue: lambda })
    }

    pub fn diag(entries: &[Complex]) -> Result<Self> {
        let g = entries.len();
        let mut tau = vec![vec![czero(); g]; g];
        for i in 0..g {
            tau[i][i] = entries[i];
        }
        Self::new(tau)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<Complex> {
        (0..self.g)
            .map(|i| (0..self.g).map(|j| self.tau[i][j] * v[j]).fold(czero(), |a, b| a + b))
            .collect()
    }
}

fn imag_part(tau: &[Vec<Complex>]) -> Vec<Vec<f64>> {
    tau.iter().map(|row| row.iter().map(|c| c.im).collect()).collect()
}

/// Smallest eigenvalue of a small symmetric real matrix (Jacobi iteration).
pub fn min_eigenvalue_sym(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _ in 0..100 {
        // find largest off-diagonal element
        let (mut p, mut q, mut off) = (0, 1, 0.0_f64);
        for i in 0..n {
            for j in i + 1..n {
                if a[i][j].abs() > off {
                    off = a[i][j].abs();
                    p = i;
                    q = j;
                }
            }
        }
        if n < 2 || off < 1e-14 {
            break;
        }
        let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
        let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;
        let (app, aqq, apq) = (a[p][p], a[q][q], a[p][q]);
        a[p][p] = app - t * apq;
        a[q][q] = aqq + t * apq;
        a[p][q] = 0.0;
        a[q][p] = 0.0;
        for k in 0..n {
            if k != p && k != q {
                let (akp, akq) = (a[k][p], a[k][q]);
                a[k][p] = c * akp - s * akq;
                a[p][k] = a[k][p];
                a[k][q] = s * akp + c * akq;
                a[q][k] = a[k][q];
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}

/// Solve `z = tau p + q` for real vectors `(p, q)` by the real `2g x 2g`
/// linear system.
pub fn lattice_coordinates(tau: &PeriodMatrix, z: &[Complex]) -> Result<(Vec<f64>, Vec<f64>)> {
    let g = tau.g;
    let mut m = vec![vec![0.0_f64; 2 * g]; 2 * g];
    let mut rhs = vec![0.0_f64; 2 * g];
    for i in 0..g {
        for j in 0..g {
            m[i][j] = tau.tau[i][j].re;
            m[g + i][j] = tau.tau[i][j].im;
        }
        m[i][g + i] = 1.0;
        rhs[i] = z[i].re;
        rhs[g + i] = z[i].im;
    }
    let n = 2 * g;
    for col in 0..n {
        let mut best = col;
        for r in col + 1..n {
            if m[r][col].abs() > m[best][col].abs() {
                best = r;
            }
        }
        if m[best][col].abs() < 1e-14 {
            return Err(CoreError::Invalid("singular lattice system".into()));
        }
        m.swap(col, best);
        rhs.swap(col, best);
        let piv = m[col][col];
        for r in 0..n {
            if r == col {
                continue;
            }
            let fac = m[r][col] / piv;
            if fac == 0.0 {
                continue;
            }
            for cc in 0..n {
                m[r][cc] -= fac * m[col][cc];
            }
            rhs[r] -= fac * rhs[col];
        }
    }
    let sol: Vec<f64> = (0..n).map(|i| rhs[i] / m[i][i]).collect();
    Ok((sol[..g].to_vec(), sol[g..].to_vec()))
}

/// A point of `C^g` with an optional lattice-reduction witness
/// `z = z0 + tau p + q`.
#[derive(Debug, Clone)]
pub struct TorusPoint {
    pub z: Vec<Complex>,
    pub witness: Option<LatticeWitness>,
}

#[derive(Debug, Clone)]
pub struct LatticeWitness {
    pub z0: Vec<Complex>,
    pub p: Vec<i64>,
    pub q: Vec<i64>,
    pub residual: f64,
}

impl TorusPoint {
    pub fn new(z: Vec<Complex>) -> Self {
        Self { z, witness: None }
    }

    /// Reduce modulo the lattice: the representative has lattice
    /// coordinates in `[0, 1)` and the witness reproduces `z` to `1e-10`.
    pub fn reduced(&self, tau: &PeriodMatrix) -> Result<TorusPoint> {
        let (p, q) = lattice_coordinates(tau, &self.z)?;
        let pi: Vec<i64> = p.iter().map(|v| v.floor() as i64).collect();
        let qi: Vec<i64> = q.iter().map(|v| v.floor() as i64).collect();
        let tp = tau.apply(&pi.iter().map(|&v| v as f64).collect::<Vec<_>>());
        let z0: Vec<Complex> = (0..tau.g)
            .map(|i| self.z[i] - tp[i] - Complex::new(qi[i] as f64, 0.0))
            .collect();
        // reconstruct and measure
        let tp2 = tau.apply(&pi.iter().map(|&v| v as f64).collect::<Vec<_>>());
        let mut residual = 0.0_f64;
        for i in 0..tau.g {
            let back = z0[i] + tp2[i] + Complex::new(qi[i] as f64, 0.0);
            residual = residual.max((back - self.z[i]).norm());
        }
        if residual > 1e-10 {
            return Err(CoreError::Invalid(format!(
                "lattice reduction failed to reproduce z (residual {residual:.3e})"
            )));
        }
        Ok(TorusPoint {
            z: z0.clone(),
            witness: Some(LatticeWitness { z0, p: pi, q: qi, residual }),
        })
    }
}

/// Rational characteristic `(a, b) = (a'/n, b'/n)` with integer vectors
/// reduced mod `n`; represents the torsion point `tau a + b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Characteristic {
    pub denom: u32,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl Characteristic {
    pub fn new(denom: u32, a: &[i64], b: &[i64]) -> Self {
        let red = |v: &[i64]| v.iter().map(|&x| x.rem_euclid(denom as i64) as u32).collect();
        Self { denom, a: red(a), b: red(b) }
    }

    pub fn zero(denom: u32, g: usize) -> Self {
        Self { denom, a: vec![0; g], b: vec![0; g] }
    }

    pub fn g(&self) -> usize {
        self.a.len()
    }

    pub fn a_real(&self) -> Vec<f64> {
        self.a.iter().map(|&x| x as f64 / self.denom as f64).collect()
    }

    pub fn b_real(&self) -> Vec<f64> {
        self.b.iter().map(|&x| x as f64 / self.denom as f64).collect()
    }

    pub fn neg(&self) -> Characteristic {
        let n = self.denom;
        let neg = |v: &[u32]| v.iter().map(|&x| ((n - x) % n) as i64).collect::<Vec<_>>();
        Characteristic::new(n, &neg(&self.a), &neg(&self.b))
    }

    /// Point `tau a + b` in the universal cover.
    pub fn embed(&self, tau: &PeriodMatrix) -> Vec<Complex> {
        let ta = tau.apply(&self.a_real());
        ta.iter()
            .zip(self.b_real())
            .map(|(&t, b)| t + Complex::new(b, 0.0))
            .collect()
    }

    /// Conversion to a group label: coordinates `(a', b')` mod n.
    pub fn to_lpoint(&self) -> LPoint {
        let ambient = crate::heisenberg::Ambient::new(self.denom, self.g());
        let mut coords: Vec<i64> = self.a.iter().map(|&x| x as i64).collect();
        coords.extend(self.b.iter().map(|&x| x as i64));
        LPoint::new(ambient, &coords)
    }

    pub fn from_lpoint(p: &LPoint) -> Characteristic {
        let g = p.ambient.g;
        let a: Vec<i64> = p.coords[..g].iter().map(|&x| x as i64).collect();
        let b: Vec<i64> = p.coords[g..].iter().map(|&x| x as i64).collect();
        Characteristic::new(p.ambient.n, &a, &b)
    }

    /// Parity of a half-integer characteristic: `4 a.b mod 2`.
    pub fn parity(&self) -> Result<u8> {
        if self.denom != 2 {
            return Err(CoreError::Invalid(format!(
                "parity needs denominator 2, got {}",
                self.denom
            )));
        }
        let dot: u32 = self.a.iter().zip(&self.b).map(|(&x, &y)| x * y).sum();
        Ok((dot % 2) as u8)
    }
}

/// All `N^{2g}` torsion characteristics in lexicographic order on `(a, b)`.
pub fn torsion_points(n: u32, g: usize) -> Vec<Characteristic> {
    let ambient = crate::heisenberg::Ambient::new(n, g);
    LPoint::enumerate(ambient).iter().map(Characteristic::from_lpoint).collect()
}

/// The pairing `d(tau a + b, tau e + f) = exp(2 pi i N te b)` as an exact
/// root of unity `zeta_N^(e'.b')`, where `e'` is the second argument's
/// `a`-vector and `b'` the first argument's `b`-vector.
pub fn analytic_d(p: &Characteristic, q: &Characteristic) -> Result<RootOfUnity> {
    if p.denom != q.denom || p.g() != q.g() {
        return Err(CoreError::AmbientMismatch("analytic_d".into()));
    }
    let acc: i64 = q.a.iter().zip(&p.b).map(|(&e, &b)| e as i64 * b as i64).sum();
    Ok(RootOfUnity::new(p.denom, acc))
}

/// Skew-symmetrization of `analytic_d`: the analytic Weil pairing
/// `exp(2 pi i N (te b - ta f))`.
pub fn analytic_pairing(p: &Characteristic, q: &Characteristic) -> Result<RootOfUnity> {
    Ok(analytic_d(p, q)?.mul(&analytic_d(q, p)?.inv()))
}

/// Truncation data for the lattice sum.
#[derive(Debug, Clone, Copy)]
pub struct TruncationParams {
    pub radius: usize,
    pub target: f64,
    /// Tail bound actually achieved at `radius`.
    pub tail_bound: f64,
}

pub const DEFAULT_TARGET: f64 = 1e-12;
pub const MAX_RADIUS: usize = 80;

impl TruncationParams {
    /// Bound on the sum of all terms with `|n+a|_oo > radius`.
    pub fn tail_bound(g: usize, lambda: f64, s: f64, radius: usize) -> f64 {
        let mut tail = 0.0;
        for m in radius..radius + 4000 {
            let mf = m as f64;
            let shell = ((2.0 * mf + 3.0).powi(g as i32) - (2.0 * mf + 1.0).powi(g as i32)).max(1.0);
            let term = shell * (-PI * lambda * mf * mf + 2.0 * PI * mf * s).exp();
            tail += term;
            if term < 1e-3 * f64::MIN_POSITIVE.max(1e-30) || (m > radius + 4 && term < tail * 1e-18)
            {
                break;
            }
        }
        tail
    }

    /// Smallest radius meeting an absolute tail target.
    pub fn choose(tau: &PeriodMatrix, z: &[Complex], target: f64) -> Result<Self> {
        let lambda = tau.min_im_eigenvalue;
        let s = z.iter().map(|c| c.im * c.im).sum::<f64>().sqrt();
        let min_radius = (s / lambda).ceil() as usize + 2;
        for radius in min_radius..=MAX_RADIUS {
            let tail = Self::tail_bound(tau.g, lambda, s, radius);
            if tail <= target {
                return Ok(Self { radius, target, tail_bound: tail });
            }
        }
        Err(CoreError::TruncationUnattainable { target, max_radius: MAX_RADIUS })
    }
}

/// Value of the truncated sum together with the sum of term magnitudes
/// (used as the natural scale for pole guards).
#[derive(Debug, Clone, Copy)]
pub struct ThetaValue {
    pub value: Complex,
    pub magnitude: f64,
}

/// Core lattice sum with real characteristic vectors.
///
/// The summation order is fixed (lexicographic boxes, row subtotals added in
/// order), and the parallel build splits over the leading coordinate only,
/// so results are bitwise reproducible.
pub fn theta_real(
    a: &[f64],
    b: &[f64],
    z: &[Complex],
    tau: &PeriodMatrix,
    trunc: &TruncationParams,
) -> ThetaValue {
    theta_real_with(a, b, z, tau, trunc, true)
}

/// Same sum with the row loop forced sequential; the result is bitwise
/// identical to [`theta_real`] (used as the benchmark baseline).
pub fn theta_real_seq(
    a: &[f64],
    b: &[f64],
    z: &[Complex],
    tau: &PeriodMatrix,
    trunc: &TruncationParams,
) -> ThetaValue {
    theta_real_with(a, b, z, tau, trunc, false)
}

fn theta_real_with(
    a: &[f64],
    b: &[f64],
    z: &[Complex],
    tau: &PeriodMatrix,
    trunc: &TruncationParams,
    parallel: bool,
) -> ThetaValue {
    let g = tau.g;
    assert_eq!(a.len(), g);
    assert_eq!(b.len(), g);
    assert_eq!(z.len(), g);
    let r = trunc.radius as f64;
    // per-coordinate ranges: n_i + a_i in [-R, R]
    let lo: Vec<i64> = a.iter().map(|&ai| (-r - ai).ceil() as i64).collect();
    let hi: Vec<i64> = a.iter().map(|&ai| (r - ai).floor() as i64).collect();
    let zb: Vec<Complex> = z.iter().zip(b).map(|(&zi, &bi)| zi + Complex::new(bi, 0.0)).collect();

    let nrows = (hi[0] - lo[0] + 1).max(0) as usize;
    // rows are grouped into blocks so the parallel grain stays coarse; the
    // fold order (rows within a block, then blocks in order) is the same on
    // both paths, keeping results bitwise identical
    const BLOCK: usize = 32;
    let nblocks = nrows.div_ceil(BLOCK);
    let block_fn = |blk: usize| {
        let mut value = czero();
        let mut magnitude = 0.0;
        for row in blk * BLOCK..((blk + 1) * BLOCK).min(nrows) {
            let n0 = lo[0] + row as i64;
            let sub = sum_rows_from(1, &mut vec![n0 as f64 + a[0]], a, &lo, &hi, &zb, tau);
            value += sub.value;
            magnitude += sub.magnitude;
        }
        ThetaValue { value, magnitude }
    };
    let blocks = if parallel && nblocks >= 2 {
        par::map_indexed(nblocks, block_fn)
    } else {
        par::map_indexed_seq(nblocks, block_fn)
    };
    let mut value = czero();
    let mut magnitude = 0.0;
    for b in blocks {
        value += b.value;
        magnitude += b.magnitude;
    }
    ThetaValue { value, magnitude }
}

fn sum_rows_from(
    depth: usize,
    v: &mut Vec<f64>,
    a: &[f64],
    lo: &[i64],
    hi: &[i64],
    zb: &[Complex],
    tau: &PeriodMatrix,
) -> ThetaValue {
    if depth == a.len() {
        // exponent: pi i (v tau v + 2 v . zb)
        let g = a.len();
        let mut quad = czero();
        for i in 0..g {
            for j in 0..g {
                quad += tau.tau[i][j] * v[i] * v[j];
            }
        }
        let mut lin = czero();
        for i in 0..g {
            lin += zb[i] * v[i];
        }
        let term = cexp(Complex::new(0.0, PI) * (quad + lin * 2.0));
        return ThetaValue { value: term, magnitude: term.norm() };
    }
    let mut value = czero();
    let mut magnitude = 0.0;
    for n in lo[depth]..=hi[depth] {
        v.push(n as f64 + a[depth]);
        let sub = sum_rows_from(depth + 1, v, a, lo, hi, zb, tau);
        value += sub.value;
        magnitude += sub.magnitude;
        v.pop();
    }
    ThetaValue { value, magnitude }
}

/// `theta[a;b](z, tau)` with a rational characteristic, default truncation.
pub fn theta(
    chi: &Characteristic,
    z: &[Complex],
    tau: &PeriodMatrix,
    trunc: Option<&TruncationParams>,
) -> Result<Complex> {
    let owned;
    let trunc = match trunc {
        Some(t) => t,
        None => {
            owned = TruncationParams::choose(tau, z, DEFAULT_TARGET)?;
            &owned
        }
    };
    Ok(theta_real(&chi.a_real(), &chi.b_real(), z, tau, trunc).value)
}

/// Multiplier `lambda(p, q, z)` with
/// `theta[a;b](z + p + tau q) = lambda . theta[a;b](z)`:
/// `exp(2 pi i ta p - 2 pi i tb q - pi i tq tau q - 2 pi i tq z)`.
pub fn automorphy_factor(
    chi: &Characteristic,
    p: &[i64],
    q: &[i64],
    z: &[Complex],
    tau: &PeriodMatrix,
) -> Complex {
    let g = tau.g;
    let a = chi.a_real();
    let b = chi.b_real();
    let mut expo = czero();
    for i in 0..g {
        expo += Complex::new(2.0 * a[i] * p[i] as f64 - 2.0 * b[i] * q[i] as f64, 0.0);
        expo -= z[i] * 2.0 * q[i] as f64;
        for j in 0..g {
            expo -= tau.tau[i][j] * q[i] as f64 * q[j] as f64;
        }
    }
    cexp(Complex::new(0.0, PI) * expo)
}

/// Residual of the shift identity
/// `theta[a;b](z) = exp(pi i ta tau a + 2 pi i ta(z+b)) theta[0;0](z + tau a + b)`.
pub fn shift_identity_check(
    chi: &Characteristic,
    z: &[Complex],
    tau: &PeriodMatrix,
) -> Result<f64> {
    let g = tau.g;
    let lhs = theta(chi, z, tau, None)?;
    let a = chi.a_real();
    let b = chi.b_real();
    let ta = tau.apply(&a);
    let shifted: Vec<Complex> = (0..g).map(|i| z[i] + ta[i] + Complex::new(b[i], 0.0)).collect();
    let mut expo = czero();
    for i in 0..g {
        expo += ta[i] * a[i];
        expo += (z[i] + Complex::new(b[i], 0.0)) * 2.0 * a[i];
    }
    let zero = Characteristic::zero(chi.denom, g);
    let rhs = cexp(Complex::new(0.0, PI) * expo) * theta(&zero, &shifted, tau, None)?;
    Ok((lhs - rhs).norm())
}

// ---------------------------------------------------------------------------
// The analytic normal Weil family.
// ---------------------------------------------------------------------------

/// The family `f_P(z) = zeta_N^{-a'.b'} (theta[-a;-b](z) / theta[0;0](z))^N`
/// for `P = tau a + b`, with translate semantics `t_P* f(z) = f(z - P)`.
///
/// The root-of-unity prefactor makes the family satisfy the normal-set law
/// `f_P . t_P* f_Q = d(P,Q) f_{P+Q}` for [`analytic_d`] exactly; the bare
/// theta quotients satisfy it for the transposed-inverse pairing instead.
/// The prefactor is an `N`-th root of unity, so `f_P^N` is the plain
/// quotient power either way.
#[derive(Debug, Clone)]
pub struct AnalyticWeilFamily {
    pub n: u32,
    pub g: usize,
    pub tau: PeriodMatrix,
    pub target: f64,
    /// Relative pole-guard threshold on `|theta[0;0](z)|`.
    pub pole_tol: f64,
}

impl AnalyticWeilFamily {
    pub fn new(n: u32, tau: PeriodMatrix) -> Self {
        let g = tau.g;
        Self { n, g, tau, target: DEFAULT_TARGET, pole_tol: 1e-10 }
    }

    pub fn torsion(&self) -> Vec<Characteristic> {
        torsion_points(self.n, self.g)
    }

    /// The twist `zeta_N^{-a'.b'}`.
    pub fn twist(&self, chi: &Characteristic) -> RootOfUnity {
        let dot: i64 = chi.a.iter().zip(&chi.b).map(|(&x, &y)| x as i64 * y as i64).sum();
        RootOfUnity::new(self.n, -dot)
    }

    /// Raw quotient `(theta[-a;-b](z)/theta[0;0](z))^N` without the twist.
    pub fn eval_raw(&self, chi: &Characteristic, z: &[Complex]) -> Result<Complex> {
        let trunc = TruncationParams::choose(&self.tau, z, self.target)?;
        let zero = Characteristic::zero(self.n, self.g);
        let den = theta_real(&zero.a_real(), &zero.b_real(), z, &self.tau, &trunc);
        if den.value.norm() < self.pole_tol * den.magnitude.max(1e-300) {
            return Err(CoreError::PoleProximity {
                context: "theta[0;0](z) near zero".into(),
                magnitude: den.value.norm(),
            });
        }
        let neg = chi.neg();
        let num = theta_real(&neg.a_real(), &neg.b_real(), z, &self.tau, &trunc);
        let q = num.value / den.value;
        Ok(q.powi(self.n as i32))
    }

    /// Normal-family evaluation `f_P(z)`.
    pub fn eval(&self, chi: &Characteristic, z: &[Complex]) -> Result<Complex> {
        Ok(self.twist(chi).to_complex() * self.eval_raw(chi, z)?)
    }

    /// `z - P` for `P = tau a + b`.
    pub fn translate(&self, z: &[Complex], chi: &Characteristic) -> Vec<Complex> {
        let p = chi.embed(&self.tau);
        z.iter().zip(&p).map(|(&zi, &pi)| zi - pi).collect()
    }
}
