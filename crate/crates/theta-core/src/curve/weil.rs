//! Two-torsion divisors, theta characteristics, and the determinantal Weil
//! functions `f_P(z) = det(h_i^P(z_j))^2 / det(h_i(z_j))^2` built from bases
//! of the twisted spaces `L(2K + D_P)` (the `(dx/y)^2` trivializations
//! cancel in the ratio, so only the function parts matter).

use super::periods::{period_matrix, torsion_characteristic, JacobianFrame};
use crate::poly::Poly;
use super::riemann_roch::{
    effective_representative, riemann_roch_basis, Niceness, RationalFn, SectionBasis,
};
use super::{CurvePoint, Divisor, HyperellipticCurve};
use crate::heisenberg::{Ambient, LPoint};
use crate::normalize::WeilBackend;
use crate::{Complex, CoreError, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn czero() -> Complex {
    Complex::new(0.0, 0.0)
}

/// The 16 canonical two-torsion representatives: `0` and, for each pair
/// `{i, j}` of branch indices, `W_i + W_j - 2 W_6`. Doubling each is the
/// divisor of `(x - e_i)(x - e_j)/(x - e_6)^2`.
pub fn two_torsion_divisors(
    curve: &HyperellipticCurve,
) -> Vec<(Option<(usize, usize)>, Divisor)> {
    let mut out = vec![(None, Divisor::zero())];
    for i in 0..6 {
        for j in i + 1..6 {
            let mut d = Divisor::zero();
            d.push(curve.weierstrass_point(i), 1);
            d.push(curve.weierstrass_point(j), 1);
            d.push(curve.weierstrass_point(5), -2);
            out.push((Some((i, j)), d));
        }
    }
    out
}

/// A theta characteristic: a degree-1 divisor class `L` with `2L ~ K`.
#[derive(Debug, Clone)]
pub struct ThetaCharacteristic {
    /// `W_i` for odd classes; `W_i + W_j - W_k` with a sorted triple for the
    /// even ones (indexed by the partition of the six branch points into two
    /// triples; the representative triple contains the first branch point or
    /// is the complement of one that does).
    pub label: ThetaCharLabel,
    pub divisor: Divisor,
    pub odd: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaCharLabel {
    Odd(usize),
    Even(usize, usize, usize),
}

impl std::fmt::Display for ThetaCharLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ThetaCharLabel::Odd(i) => write!(f, "W{}", i + 1),
            ThetaCharLabel::Even(i, j, k) => {
                write!(f, "W{}+W{}-W{}", i + 1, j + 1, k + 1)
            }
        }
    }
}

/// The 16 theta characteristics: 6 odd (`W_i`), 10 even (one per partition
/// of the six branch points into two triples).
pub fn theta_characteristics(curve: &HyperellipticCurve) -> Vec<ThetaCharacteristic> {
    let mut out = Vec::with_capacity(16);
    for i in 0..6 {
        out.push(ThetaCharacteristic {
            label: ThetaCharLabel::Odd(i),
            divisor: Divisor::single(curve.weierstrass_point(i), 1),
            odd: true,
        });
    }
    // triples containing branch point 0 index the 10 partitions
    for j in 1..6 {
        for k in j + 1..6 {
            let (a, b, c) = (0, j, k);
            let mut d = Divisor::zero();
            d.push(curve.weierstrass_point(a), 1);
            d.push(curve.weierstrass_point(b), 1);
            d.push(curve.weierstrass_point(c), -1);
            out.push(ThetaCharacteristic {
                label: ThetaCharLabel::Even(a, b, c),
                divisor: d,
                odd: false,
            });
        }
    }
    out
}

/// The determinantal Weil family at level 2 over a genus-2 curve, indexed by
/// group labels `(Z/2)^4` through the Abel-Jacobi characteristics of the
/// two-torsion representatives.
pub struct CurveWeilFamily {
    pub curve: HyperellipticCurve,
    pub frame: JacobianFrame,
    /// Torsion divisor per label rank (lexicographic on `(a, b)`).
    pub divisors: Vec<Divisor>,
    /// Pair labels per rank (`None` for the identity).
    pub pair_labels: Vec<Option<(usize, usize)>>,
    /// Section bases of `L(2K + D_P)` per rank (function parts).
    pub bases: Vec<SectionBasis>,
    /// Doubling functions `g_P` with `div(g_P) = 2 D_P`, trivializing
    /// `P^2`; the determinant ratio descends to the Jacobian only after
    /// multiplying by `prod_j g_P(z_j)`.
    pub doubling: Vec<RationalFn>,
    /// Rounding residuals of the label matching.
    pub label_residual: f64,
}

impl CurveWeilFamily {
    pub fn new(curve: &HyperellipticCurve) -> Result<Self> {
        let frame = period_matrix(curve)?;
        Self::with_frame(curve, frame)
    }

    pub fn with_frame(curve: &HyperellipticCurve, frame: JacobianFrame) -> Result<Self> {
        let ambient = Ambient::new(2, 2);
        let reps = two_torsion_divisors(curve);
        let mut divisors: Vec<Option<Divisor>> = vec![None; 16];
        let mut pair_labels: Vec<Option<(usize, usize)>> = vec![None; 16];
        let mut label_residual = 0.0_f64;
        for (pair, d) in reps {
            let (chi, resid) = torsion_characteristic(&frame, &d, 2)?;
            label_residual = label_residual.max(resid);
            let rank = chi.to_lpoint().lex_rank();
            if divisors[rank].is_some() {
                return Err(CoreError::Invalid(format!(
                    "two torsion labels collide at rank {rank}"
                )));
            }
            divisors[rank] = Some(d);
            pair_labels[rank] = pair;
        }
        let divisors: Vec<Divisor> = divisors.into_iter().map(Option::unwrap).collect();
        let two_k = Divisor::canonical().scale(2);
        let mut bases = Vec::with_capacity(16);
        let mut doubling = Vec::with_capacity(16);
        for (rank, d) in divisors.iter().enumerate() {
            bases.push(riemann_roch_basis(curve, &two_k.add(d))?);
            doubling.push(match pair_labels[rank] {
                None => RationalFn { p: Poly::one(), q: Poly::zero(), r: Poly::one() },
                Some((i, j)) => RationalFn {
                    p: Poly::from_roots(&[curve.roots[i], curve.roots[j]]),
                    q: Poly::zero(),
                    r: Poly::from_roots(&[curve.roots[5], curve.roots[5]]),
                },
            });
        }
        let _ = ambient;
        Ok(Self {
            curve: curve.clone(),
            frame,
            divisors,
            pair_labels,
            bases,
            doubling,
            label_residual,
        })
    }

    /// `det(h_i(z_j))` for the basis at `rank`.
    pub fn det_at(&self, rank: usize, triple: &[CurvePoint; 3]) -> Result<Complex> {
        let basis = &self.bases[rank];
        let mut m = [[czero(); 3]; 3];
        let mut scale = 1.0_f64;
        for (j, z) in triple.iter().enumerate() {
            let mut col = 0.0_f64;
            for (i, h) in basis.elements.iter().enumerate() {
                m[i][j] = h.eval(z)?;
                col += m[i][j].norm_sqr();
            }
            scale *= col.sqrt().max(1e-300);
        }
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        let _ = scale;
        Ok(det)
    }

    /// Hadamard-style scale of the determinant, for pole guards.
    pub(crate) fn det_scale(&self, rank: usize, triple: &[CurvePoint; 3]) -> Result<f64> {
        let basis = &self.bases[rank];
        let mut scale = 1.0_f64;
        for z in triple {
            let mut col = 0.0_f64;
            for h in &basis.elements {
                col += h.eval(z)?.norm_sqr();
            }
            scale *= col.sqrt().max(1e-300);
        }
        Ok(scale)
    }

    /// `f_P(z) = (det_P / det_0)^2`, with diagonal and pole guards.
    pub fn eval_rank(&self, rank: usize, triple: &[CurvePoint; 3]) -> Result<Complex> {
        for i in 0..3 {
            for j in i + 1..3 {
                if triple[i].approx_eq(&triple[j], 1e-7 * self.curve.scale) {
                    return Err(CoreError::PoleProximity {
                        context: "triple on a diagonal".into(),
                        magnitude: 0.0,
                    });
                }
            }
        }
        let den = self.det_at(0, triple)?;
        let den_scale = self.det_scale(0, triple)?;
        if den.norm() < 1e-9 * den_scale {
            return Err(CoreError::PoleProximity {
                context: "reference determinant near zero".into(),
                magnitude: den.norm() / den_scale,
            });
        }
        let num = self.det_at(rank, triple)?;
        let q = num / den;
        let mut triv = Complex::new(1.0, 0.0);
        for z in triple {
            triv *= self.doubling[rank].eval(z)?;
        }
        Ok(q * q * triv)
    }

    /// Deterministic effective representative of `class(sum x) - D_label`,
    /// i.e. a triple for the translated torsor point.
    pub fn translate_triple(
        &self,
        triple: &[CurvePoint; 3],
        rank: usize,
    ) -> Result<[CurvePoint; 3]> {
        let mut class = Divisor::zero();
        for p in triple {
            class.push(*p, 1);
        }
        let class = class.sub(&self.divisors[rank]);
        let seed = triple_seed(triple) ^ (rank as u64).wrapping_mul(0x9e3779b97f4a7c15);
        let (rep, _) = effective_representative(&self.curve, &class, Niceness::strict(), seed)?;
        divisor_to_triple(&rep)
    }

    /// Representative of the inverted torsor point `3K - sum x`.
    pub fn invert_triple(&self, triple: &[CurvePoint; 3]) -> Result<[CurvePoint; 3]> {
        let mut class = Divisor::canonical().scale(3);
        for p in triple {
            class.push(*p, -1);
        }
        let seed = triple_seed(triple) ^ 0xabcdef1234567890;
        let (rep, _) = effective_representative(&self.curve, &class, Niceness::strict(), seed)?;
        divisor_to_triple(&rep)
    }

    /// A triple in the class `K + delta` for a theta characteristic; this is
    /// where moduli vectors are evaluated.
    pub fn delta_triple(&self, delta: &ThetaCharacteristic, seed: u64) -> Result<[CurvePoint; 3]> {
        let class = Divisor::canonical().add(&delta.divisor);
        let (rep, _) = effective_representative(&self.curve, &class, Niceness::strict(), seed)?;
        divisor_to_triple(&rep)
    }
}

pub(crate) fn divisor_to_triple(d: &Divisor) -> Result<[CurvePoint; 3]> {
    let mut pts = Vec::new();
    for &(p, m) in &d.terms {
        for _ in 0..m {
            pts.push(p);
        }
    }
    if pts.len() != 3 {
        return Err(CoreError::Invalid(format!(
            "expected a degree-3 effective divisor, got degree {}",
            d.degree()
        )));
    }
    Ok([pts[0], pts[1], pts[2]])
}

pub(crate) fn triple_seed(triple: &[CurvePoint; 3]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut mix = |v: f64| {
        h ^= v.to_bits();
        h = h.wrapping_mul(0x100000001b3);
    };
    for p in triple {
        if let Some(x) = p.x() {
            mix(x.re);
            mix(x.im);
        }
        if let Some(y) = p.y() {
            mix(y.re);
            mix(y.im);
        }
    }
    h
}

impl WeilBackend for CurveWeilFamily {
    type Point = [CurvePoint; 3];

    fn ambient(&self) -> Ambient {
        Ambient::new(2, 2)
    }

    fn evaluate(&self, label: &LPoint, x: &Self::Point) -> Result<Complex> {
        self.eval_rank(label.lex_rank(), x)
    }

    fn translate(&self, x: &Self::Point, label: &LPoint) -> Result<Self::Point> {
        if label.is_zero() {
            return Ok(*x);
        }
        self.translate_triple(x, label.lex_rank())
    }

    fn invert_point(&self, x: &Self::Point) -> Option<Result<Self::Point>> {
        Some(self.invert_triple(x))
    }

    fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<Self::Point>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let spread = 1.6 * self.curve.scale;
        let mut attempts = 0;
        while out.len() < count {
            attempts += 1;
            if attempts > 400 * count {
                return Err(CoreError::Invalid(
                    "could not sample pole-free triples".into(),
                ));
            }
            let mut triple = [CurvePoint::inf_plus(); 3];
            let mut ok = true;
            for slot in triple.iter_mut() {
                let x = Complex::new(
                    rng.gen_range(-spread..spread),
                    rng.gen_range(-spread..spread),
                );
                if self.curve.is_weierstrass_x(x).is_some() {
                    ok = false;
                    break;
                }
                let y = self.curve.y_at(x) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                *slot = CurvePoint::affine(x, y);
            }
            if !ok {
                continue;
            }
            // pole guards: every determinant must be comfortably nonzero so
            // gammas stay well conditioned
            let usable = (0..16).all(|rank| {
                match (self.det_at(rank, &triple), self.det_scale(rank, &triple)) {
                    (Ok(d), Ok(s)) => d.norm() > 1e-4 * s,
                    _ => false,
                }
            });
            if usable {
                out.push(triple);
            }
        }
        Ok(out)
    }
}
