//! Backend-agnostic normalization of Weil-function families.
//!
//! A backend hands the engine an indexed family `f_P` of evaluable functions
//! on a torsor together with translate semantics `t_P* f(x) = f(x - P)`.
//! The engine computes the gamma cocycle
//! `gamma(P,Q) = d(P,Q) f_{P+Q} / (f_P . t_P* f_Q)`, rescales each `f_P` so
//! the residual normalization lies in `mu_N` (using the closed form for
//! `tf_P^N`), runs the two-stage character induction from seed values on the
//! `2g` basis points, and optionally pins the answer with the symmetry
//! condition `alpha_{-P} f_{-P} = alpha_P f_P o [-1]`; for odd `N` that
//! determines the normalization uniquely, for even `N` up to a recorded
//! per-point sign.

use crate::heisenberg::{Ambient, LPoint, RootOfUnity};
use crate::theta::{analytic_d, AnalyticWeilFamily, Characteristic, PeriodMatrix};
use crate::{Complex, CoreError, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cone() -> Complex {
    Complex::new(1.0, 0.0)
}

/// Snap a complex number to the nearest `order`-th root of unity.
pub fn snap_root(z: Complex, order: u32, tol: f64) -> Result<RootOfUnity> {
    if !z.norm().is_finite() || z.norm() == 0.0 {
        return Err(CoreError::SnapFailed { value: z, order, distance: f64::INFINITY });
    }
    let step = std::f64::consts::TAU / order as f64;
    let k = (z.arg() / step).round() as i64;
    let root = RootOfUnity::new(order, k);
    let distance = (z - root.to_complex()).norm();
    if distance > tol {
        return Err(CoreError::SnapFailed { value: z, order, distance });
    }
    Ok(root)
}

/// What a normalization engine needs from a concrete torsor realization.
pub trait WeilBackend {
    type Point: Clone;

    /// Ambient torsion group `(N, g)`; labels are points of `(Z/N)^{2g}`.
    fn ambient(&self) -> Ambient;

    /// Evaluate `f_P(x)`. Implementations must signal pole proximity rather
    /// than returning garbage.
    fn evaluate(&self, label: &LPoint, x: &Self::Point) -> Result<Complex>;

    /// `x - P`.
    fn translate(&self, x: &Self::Point, label: &LPoint) -> Result<Self::Point>;

    /// `-x`, when the backend supports composing with the inversion.
    fn invert_point(&self, _x: &Self::Point) -> Option<Result<Self::Point>> {
        None
    }

    /// Deterministic generic sample points (seeded), avoiding poles.
    fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<Self::Point>>;
}

/// The engine: a backend, a pairing `d` (exact exponents), base points.
pub struct Normalizer<'a, B: WeilBackend> {
    pub backend: &'a B,
    d: Box<dyn Fn(&LPoint, &LPoint) -> RootOfUnity + Sync + 'a>,
    pub base_points: Vec<B::Point>,
    pub snap_tol: f64,
    pub gamma_tol: f64,
}

/// Result of a normalization run.
#[derive(Debug, Clone)]
pub struct NormalizationResult {
    pub ambient: Ambient,
    /// Exact residual normalization in `mu_N`, per torsion point (lex order).
    pub alpha: Vec<RootOfUnity>,
    /// Scalar `lambda_P` with `hat f_P = lambda_P f_P` and `hat f_P^N = tf_P^N`.
    pub lambda: Vec<Complex>,
    /// `epsilon(P) = d(P,P)^{N(N-1)/2}`, exact (trivial for odd `N`).
    pub epsilon: Vec<RootOfUnity>,
    /// Per-point `+-1` ambiguity flags (set for nonzero points when `N` even).
    pub ambiguous: Vec<bool>,
    /// Worst relative residual of the normal-set law over sampled data.
    pub worst_cocycle_residual: f64,
    /// Whether the symmetric refinement ran.
    pub symmetric: bool,
}

impl NormalizationResult {
    /// Total scalar multiplying `f_P` in `tf_P = alpha_P lambda_P f_P`.
    pub fn scalar(&self, label: &LPoint) -> Complex {
        let idx = label.lex_rank();
        self.alpha[idx].to_complex() * self.lambda[idx]
    }
}

impl<'a, B: WeilBackend> Normalizer<'a, B> {
    pub fn new(
        backend: &'a B,
        d: impl Fn(&LPoint, &LPoint) -> RootOfUnity + Sync + 'a,
        seed: u64,
    ) -> Result<Self> {
        let base_points = backend.sample_points(5, seed)?;
        Ok(Self { backend, d: Box::new(d), base_points, snap_tol: 1e-6, gamma_tol: 1e-7 })
    }

    pub fn d(&self, p: &LPoint, q: &LPoint) -> RootOfUnity {
        (self.d)(p, q)
    }

    fn eval(&self, label: &LPoint, x: &B::Point) -> Result<Complex> {
        self.backend.evaluate(label, x)
    }

    /// `gamma(P,Q) = d(P,Q) f_{P+Q}(x0) / (f_P(x0) f_Q(x0 - P))`, with an
    /// x0-independence check across every pole-free base point (at least
    /// three): dependence above tolerance means the family is not a Weil
    /// family.
    pub fn gamma(&self, p: &LPoint, q: &LPoint) -> Result<Complex> {
        let mut values = Vec::new();
        for x0 in &self.base_points {
            match self.gamma_at(p, q, x0) {
                Ok(v) => values.push(v),
                Err(CoreError::PoleProximity { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        if values.len() < 3 {
            return Err(CoreError::Normalization(format!(
                "gamma({:?},{:?}): fewer than 3 pole-free base points",
                p.coords, q.coords
            )));
        }
        let v0 = values[0];
        for v in &values[1..] {
            if (v - v0).norm() > self.gamma_tol * v0.norm().max(1e-300) {
                return Err(CoreError::Normalization(format!(
                    "gamma({:?},{:?}) depends on the base point: {} vs {} (not a Weil family)",
                    p.coords, q.coords, v0, v
                )));
            }
        }
        Ok(v0)
    }

    fn gamma_at(&self, p: &LPoint, q: &LPoint, x0: &B::Point) -> Result<Complex> {
        let pq = p.add(q)?;
        let fp = self.eval(p, x0)?;
        let fpq = self.eval(&pq, x0)?;
        let xq = self.backend.translate(x0, p)?;
        let fq = self.eval(q, &xq)?;
        if fp.norm() == 0.0 || fq.norm() == 0.0 {
            return Err(CoreError::PoleProximity {
                context: "gamma hit a zero of the family".into(),
                magnitude: fp.norm().min(fq.norm()),
            });
        }
        Ok(self.d(p, q).to_complex() * fpq / (fp * fq))
    }

    /// Weil pairing `e_N(P,Q) = f_P(x) f_Q(x-P) / (f_Q(x) f_P(x-Q))`,
    /// snapped to `mu_N`; scrambling-invariant.
    pub fn weil_pairing(&self, p: &LPoint, q: &LPoint) -> Result<RootOfUnity> {
        let n = self.backend.ambient().n;
        for x in &self.base_points {
            let ok = (|| -> Result<Complex> {
                let fp = self.eval(p, x)?;
                let fq = self.eval(q, x)?;
                let fq_t = self.eval(q, &self.backend.translate(x, p)?)?;
                let fp_t = self.eval(p, &self.backend.translate(x, q)?)?;
                let den = fq * fp_t;
                if den.norm() == 0.0 {
                    return Err(CoreError::PoleProximity {
                        context: "weil_pairing denominator zero".into(),
                        magnitude: 0.0,
                    });
                }
                Ok(fp * fq_t / den)
            })();
            match ok {
                Ok(v) => return snap_root(v, n, self.snap_tol),
                Err(CoreError::PoleProximity { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(CoreError::Normalization("weil_pairing: no pole-free base point".into()))
    }

    /// Closed-form scalar `s_P` with `tf_P^N = s_P f_P^N`, including the
    /// exact `epsilon(P) = d(P,P)^{N(N-1)/2}`.
    pub fn normalized_power(&self, p: &LPoint) -> Result<(Complex, RootOfUnity)> {
        let n = self.backend.ambient().n;
        let eps = self.d(p, p).pow((n as i64) * (n as i64 - 1) / 2);
        if p.is_zero() {
            return Ok((cone(), eps));
        }
        for x0 in &self.base_points {
            let attempt = (|| -> Result<Complex> {
                let x0p = self.backend.translate(x0, p)?;
                let mut num = cone();
                let mut den = self.eval(p, x0)?.powi(n as i32);
                for m in 1..n as i64 {
                    let mp = p.scale(m);
                    num *= self.eval(&mp, x0)?;
                    den *= self.eval(&mp, &x0p)?;
                }
                if den.norm() == 0.0 {
                    return Err(CoreError::PoleProximity {
                        context: "normalized_power denominator zero".into(),
                        magnitude: 0.0,
                    });
                }
                Ok(num / den)
            })();
            match attempt {
                Ok(v) => return Ok((eps.to_complex() * v, eps)),
                Err(CoreError::PoleProximity { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(CoreError::Normalization("normalized_power: no pole-free base point".into()))
    }

    /// Two-stage character induction from seed values on the basis points.
    ///
    /// Seeds are `N`-th roots of unity assigned to `r_1..r_{2g}`; the result
    /// is defined on all `N^{2g}` points. Every gamma of the rescaled family
    /// must snap to `mu_N`; a snap or pole failure aborts with the offending
    /// pair.
    pub fn igusa_alpha(&self, seeds: &[RootOfUnity]) -> Result<NormalizationResult> {
        let ambient = self.backend.ambient();
        let n = ambient.n;
        let g2 = 2 * ambient.g;
        if seeds.len() != g2 {
            return Err(CoreError::Normalization(format!(
                "need {} seeds, got {}",
                g2,
                seeds.len()
            )));
        }
        let order = ambient.order();

        // rescale: hat f_P = lambda_P f_P with lambda_P a principal N-th root
        // of the closed-form scalar
        let mut lambda = vec![cone(); order];
        let mut epsilon = vec![RootOfUnity::one(n); order];
        for rank in 0..order {
            let p = LPoint::from_lex_rank(ambient, rank);
            let (s, eps) = self.normalized_power(&p)?;
            lambda[rank] = nth_root_principal(s, n);
            epsilon[rank] = eps;
        }

        let gamma_hat = |p: &LPoint, q: &LPoint| -> Result<RootOfUnity> {
            let raw = self.gamma(p, q)?;
            let scale = lambda[p.add(q)?.lex_rank()] / (lambda[p.lex_rank()] * lambda[q.lex_rank()]);
            snap_root(raw * scale, n, self.snap_tol).map_err(|e| match e {
                CoreError::SnapFailed { value, order, distance } => CoreError::Normalization(
                    format!(
                        "gamma({:?},{:?}) = {value} does not snap to mu_{order} (distance {distance:.2e})",
                        p.coords, q.coords
                    ),
                ),
                other => other,
            })
        };

        // exponent table, filled by induction
        let mut alpha: Vec<Option<RootOfUnity>> = vec![None; order];
        alpha[0] = Some(RootOfUnity::one(n));

        // stage 1: multiples of basis points
        for i in 0..g2 {
            let r = LPoint::basis(ambient, i);
            alpha[r.lex_rank()] = Some(seeds[i]);
            let mut cur = seeds[i];
            for m in 1..(n as i64 - 1) {
                let mr = r.scale(m);
                let g = gamma_hat(&mr, &r)?;
                cur = cur.mul(&seeds[i]).mul(&g.inv());
                alpha[mr.add(&r)?.lex_rank()] = Some(cur);
            }
        }

        // stage 2: mixed sums, stripping the highest-index component
        for rank in 0..order {
            if alpha[rank].is_some() {
                continue;
            }
            let p = LPoint::from_lex_rank(ambient, rank);
            let support: Vec<usize> =
                (0..g2).filter(|&i| p.coords[i] != 0).collect();
            debug_assert!(support.len() >= 2);
            let last = *support.last().unwrap();
            let m_last = p.coords[last] as i64;
            let tail = LPoint::basis(ambient, last).scale(m_last);
            let mut head_coords: Vec<i64> = p.coords.iter().map(|&c| c as i64).collect();
            head_coords[last] = 0;
            let head = LPoint::new(ambient, &head_coords);
            let a_head = alpha[head.lex_rank()]
                .ok_or_else(|| CoreError::Normalization("induction order broken".into()))?;
            let a_tail = alpha[tail.lex_rank()]
                .ok_or_else(|| CoreError::Normalization("induction order broken".into()))?;
            let g = gamma_hat(&head, &tail)?;
            alpha[rank] = Some(a_head.mul(&a_tail).mul(&g.inv()));
        }

        let alpha: Vec<RootOfUnity> = alpha.into_iter().map(|a| a.unwrap()).collect();
        let ambiguous = (0..order).map(|r| n % 2 == 0 && r != 0).collect();
        let mut result = NormalizationResult {
            ambient,
            alpha,
            lambda,
            epsilon,
            ambiguous,
            worst_cocycle_residual: f64::NAN,
            symmetric: false,
        };
        result.worst_cocycle_residual = self.cocycle_residual(&result)?;
        Ok(result)
    }

    /// Normalized evaluation `tf_P(x)`.
    pub fn eval_normalized(
        &self,
        result: &NormalizationResult,
        label: &LPoint,
        x: &B::Point,
    ) -> Result<Complex> {
        Ok(result.scalar(label) * self.eval(label, x)?)
    }

    /// Worst relative residual of `tf_P(x) tf_Q(x-P) = d(P,Q) tf_{P+Q}(x)`
    /// over sampled pairs and base points.
    pub fn cocycle_residual(&self, result: &NormalizationResult) -> Result<f64> {
        let ambient = self.backend.ambient();
        let order = ambient.order();
        let mut worst: f64 = 0.0;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let pairs: Vec<(usize, usize)> = if order * order <= 16 * 16 {
            (0..order).flat_map(|i| (0..order).map(move |j| (i, j))).collect()
        } else {
            (0..220).map(|_| (rng.gen_range(0..order), rng.gen_range(0..order))).collect()
        };
        for (i, j) in pairs {
            let p = LPoint::from_lex_rank(ambient, i);
            let q = LPoint::from_lex_rank(ambient, j);
            let pq = p.add(&q)?;
            let d = self.d(&p, &q).to_complex();
            let mut done = false;
            for x in &self.base_points {
                let attempt = (|| -> Result<f64> {
                    let fp = self.eval_normalized(result, &p, x)?;
                    let fq = self.eval_normalized(result, &q, &self.backend.translate(x, &p)?)?;
                    let fpq = self.eval_normalized(result, &pq, x)?;
                    let scale = fpq.norm().max(1.0);
                    Ok((fp * fq - d * fpq).norm() / scale)
                })();
                match attempt {
                    Ok(r) => {
                        worst = worst.max(r);
                        done = true;
                        break;
                    }
                    Err(CoreError::PoleProximity { .. }) => continue,
                    Err(e) => return Err(e),
                }
            }
            if !done {
                return Err(CoreError::Normalization(
                    "cocycle residual: no pole-free base point".into(),
                ));
            }
        }
        Ok(worst)
    }

    /// Pin the normalization with the symmetry condition
    /// `alpha_{-P} hat f_{-P} = alpha_P hat f_P o [-1]`; unique for odd `N`,
    /// up to flagged signs for even `N`.
    pub fn symmetric_refine(&self, result: &NormalizationResult) -> Result<NormalizationResult> {
        let ambient = self.backend.ambient();
        let n = ambient.n;
        let order = ambient.order();
        let mut out = result.clone();
        out.symmetric = true;

        // measured alpha_P / alpha_{-P} for the rescaled family
        let ratio = |p: &LPoint| -> Result<Complex> {
            let np = p.neg();
            for x0 in &self.base_points {
                let attempt = (|| -> Result<Complex> {
                    let inv = match self.backend.invert_point(x0) {
                        Some(r) => r?,
                        None => {
                            return Err(CoreError::Normalization(
                                "backend does not support inversion".into(),
                            ))
                        }
                    };
                    let fm = result.lambda[np.lex_rank()] * self.eval(&np, x0)?;
                    let fp = result.lambda[p.lex_rank()] * self.eval(p, &inv)?;
                    if fp.norm() == 0.0 {
                        return Err(CoreError::PoleProximity {
                            context: "symmetric_refine ratio".into(),
                            magnitude: 0.0,
                        });
                    }
                    Ok(fm / fp)
                })();
                match attempt {
                    Ok(v) => return Ok(v),
                    Err(CoreError::PoleProximity { .. }) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(CoreError::Normalization("symmetric_refine: no usable base point".into()))
        };

        for rank in 1..order {
            let p = LPoint::from_lex_rank(ambient, rank);
            let v = snap_root(ratio(&p)?, n, self.snap_tol)?; // alpha_P/alpha_{-P}
            let gpm = {
                let raw = self.gamma(&p, &p.neg())?;
                let scale = result.lambda[0]
                    / (result.lambda[rank] * result.lambda[p.neg().lex_rank()]);
                snap_root(raw * scale, n, self.snap_tol)?
            }; // alpha_P alpha_{-P}
            let square = v.mul(&gpm); // alpha_P^2
            if n % 2 == 1 {
                let half = ((n as i64) + 1) / 2;
                out.alpha[rank] = square.pow(half);
                out.ambiguous[rank] = false;
            } else {
                // alpha_P in mu_N with known square: exponent must be even
                if square.exp % 2 != 0 {
                    return Err(CoreError::Normalization(format!(
                        "symmetric square has odd exponent {} at {:?}",
                        square.exp, p.coords
                    )));
                }
                out.alpha[rank] = RootOfUnity::new(n, (square.exp / 2) as i64);
                out.ambiguous[rank] = true;
            }
        }
        out.worst_cocycle_residual = self.cocycle_residual(&out)?;
        Ok(out)
    }

    /// Moduli vector `(tf_P(delta))_P` in torsion order, normalized so the
    /// `P = 0` entry is 1.
    pub fn moduli_point(
        &self,
        result: &NormalizationResult,
        delta: &B::Point,
    ) -> Result<Vec<Complex>> {
        let ambient = self.backend.ambient();
        let order = ambient.order();
        let mut out = Vec::with_capacity(order);
        for rank in 0..order {
            let p = LPoint::from_lex_rank(ambient, rank);
            out.push(self.eval_normalized(result, &p, delta)?);
        }
        let e0 = out[0];
        if e0.norm() == 0.0 {
            return Err(CoreError::Normalization("moduli point has zero leading entry".into()));
        }
        Ok(out.iter().map(|&v| v / e0).collect())
    }
}

/// Principal `n`-th root (continuous branch, arg in (-pi/n, pi/n]).
pub fn nth_root_principal(z: Complex, n: u32) -> Complex {
    if z.norm() == 0.0 {
        return z;
    }
    Complex::from_polar(z.norm().powf(1.0 / n as f64), z.arg() / n as f64)
}

// ---------------------------------------------------------------------------
// Quadratic forms over Z/2 and the Arf invariant.
// ---------------------------------------------------------------------------

/// A function `L : (Z/2)^{2g} -> Z/2` refining the mod-2 symplectic form:
/// `L(u+v) + L(u) + L(v) = eta(u, v)`.
#[derive(Debug, Clone)]
pub struct QuadraticFormZ2 {
    pub g: usize,
    /// Values indexed by lex rank over `(Z/2)^{2g}`.
    pub values: Vec<u8>,
}

impl QuadraticFormZ2 {
    pub fn ambient(&self) -> Ambient {
        Ambient::new(2, self.g)
    }

    pub fn from_fn(g: usize, f: impl Fn(&LPoint) -> u8) -> Result<Self> {
        let ambient = Ambient::new(2, g);
        let values: Vec<u8> =
            LPoint::enumerate(ambient).iter().map(|p| f(p) % 2).collect();
        let q = Self { g, values };
        q.validate()?;
        Ok(q)
    }

    /// The standard split form `sum x_i y_i`.
    pub fn split(g: usize) -> Self {
        let ambient = Ambient::new(2, g);
        let values = LPoint::enumerate(ambient)
            .iter()
            .map(|p| {
                let dot: u32 = (0..g).map(|i| p.coords[i] * p.coords[g + i]).sum();
                (dot % 2) as u8
            })
            .collect();
        Self { g, values }
    }

    pub fn value(&self, p: &LPoint) -> u8 {
        self.values[p.lex_rank()]
    }

    /// `eta(u,v) = log e_2(u,v)`: the mod-2 symplectic form.
    pub fn eta(u: &LPoint, v: &LPoint) -> u8 {
        (crate::heisenberg::symplectic_e(u, v).unwrap().exp % 2) as u8
    }

    /// Check the defining identity on all pairs.
    pub fn validate(&self) -> Result<()> {
        let ambient = self.ambient();
        let pts = LPoint::enumerate(ambient);
        for u in &pts {
            for v in &pts {
                let lhs = (self.value(&u.add(v)?) + self.value(u) + self.value(v)) % 2;
                if lhs != Self::eta(u, v) {
                    return Err(CoreError::Invalid(format!(
                        "not a quadratic refinement at {:?}, {:?}",
                        u.coords, v.coords
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Arf invariant: 0 when the signed sum is `+2^g`, 1 when `-2^g`.
pub fn arf_invariant(q: &QuadraticFormZ2) -> Result<u8> {
    q.validate()?;
    let sum: i64 = q.values.iter().map(|&v| if v == 0 { 1i64 } else { -1 }).sum();
    let expected = 1i64 << q.g;
    if sum == expected {
        Ok(0)
    } else if sum == -expected {
        Ok(1)
    } else {
        Err(CoreError::Invalid(format!(
            "signed sum {sum} is not +-2^{}; not a quadratic refinement",
            q.g
        )))
    }
}

/// Parity of a half-integer characteristic (`4 a.b mod 2`); re-exported here
/// because the engine's bookkeeping consumes it.
pub fn parity(chi: &Characteristic) -> Result<u8> {
    chi.parity()
}

// ---------------------------------------------------------------------------
// Analytic backend adapter.
// ---------------------------------------------------------------------------

/// Adapter exposing [`AnalyticWeilFamily`] as a [`WeilBackend`].
pub struct AnalyticBackend {
    pub family: AnalyticWeilFamily,
    /// Optional per-point scramble scalars (tests and round-trip checks).
    pub scramble: Option<Vec<Complex>>,
}

impl AnalyticBackend {
    pub fn new(n: u32, tau: PeriodMatrix) -> Self {
        Self { family: AnalyticWeilFamily::new(n, tau), scramble: None }
    }

    /// Multiply each nonzero `f_P` by a deterministic random unit-modulus
    /// scalar (the identity member stays 1).
    pub fn scrambled(n: u32, tau: PeriodMatrix, seed: u64) -> Self {
        let family = AnalyticWeilFamily::new(n, tau);
        let order = Ambient::new(n, family.g).order();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut scalars = Vec::with_capacity(order);
        for rank in 0..order {
            if rank == 0 {
                scalars.push(cone());
            } else {
                let arg: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let modulus: f64 = rng.gen_range(0.25..4.0);
                scalars.push(Complex::from_polar(modulus, arg));
            }
        }
        Self { family, scramble: Some(scalars) }
    }

    pub fn label_to_char(&self, label: &LPoint) -> Characteristic {
        Characteristic::from_lpoint(label)
    }
}

impl WeilBackend for AnalyticBackend {
    type Point = Vec<Complex>;

    fn ambient(&self) -> Ambient {
        Ambient::new(self.family.n, self.family.g)
    }

    fn evaluate(&self, label: &LPoint, x: &Self::Point) -> Result<Complex> {
        let chi = self.label_to_char(label);
        let v = self.family.eval(&chi, x)?;
        Ok(match &self.scramble {
            Some(s) => s[label.lex_rank()] * v,
            None => v,
        })
    }

    fn translate(&self, x: &Self::Point, label: &LPoint) -> Result<Self::Point> {
        Ok(self.family.translate(x, &self.label_to_char(label)))
    }

    fn invert_point(&self, x: &Self::Point) -> Option<Result<Self::Point>> {
        Some(Ok(x.iter().map(|z| -z).collect()))
    }

    fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<Self::Point>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = self.family.g;
        let zero = Characteristic::zero(self.family.n, g);
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0;
        while out.len() < count {
            attempts += 1;
            if attempts > 200 * count {
                return Err(CoreError::Normalization(
                    "could not find pole-free sample points".into(),
                ));
            }
            let z: Vec<Complex> = (0..g)
                .map(|_| Complex::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.35..0.35)))
                .collect();
            // keep away from Theta and from translates' poles: test a few
            // translated positions too
            let ok = (|| -> Result<bool> {
                self.family.eval_raw(&zero, &z)?;
                for chi in self.family.torsion().iter().take(4) {
                    self.family.eval_raw(&zero, &self.family.translate(&z, chi))?;
                }
                Ok(true)
            })();
            match ok {
                Ok(_) => out.push(z),
                Err(CoreError::PoleProximity { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }
}

/// The analytic `d` as an exact exponent pairing on labels.
pub fn analytic_d_fn(p: &LPoint, q: &LPoint) -> RootOfUnity {
    analytic_d(&Characteristic::from_lpoint(p), &Characteristic::from_lpoint(q)).unwrap()
}
