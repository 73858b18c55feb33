//! Residue-pairing quadratic spaces for theta characteristics.
//!
//! For a theta characteristic `E` choose an effective `a` with
//! `E(a) ~ 2K` (so `b ~ K + E ~ a`; the artifact takes `b = a`, which the
//! theta-characteristic constraint makes possible). The space
//! `V = H^0(E(a)/E(-a))` is realized by 2-jets at the support of `a`:
//! at each point the two retained Laurent slots of a section, in the local
//! parameter `x - x0` (or `y` at a Weierstrass point). The pairing is
//! `phi(u, v) = sum Res(u v w_E dx/y)` with `w_E` the function realizing
//! `2E ~ K`; per point it is a 2x2 block `[[rho_hi, rho_mid], [rho_mid, 0]]`
//! built from the series `rho = w_E (dx/dt) / y`, so the Gram matrix is
//! symmetric by construction, the slot subspace `V_1 = H^0(E/E(-a))` is
//! manifestly isotropic, and the isotropy of `V_0 = H^0(E(a))` is exactly
//! the residue theorem, verified numerically.

use super::riemann_roch::{
    effective_representative, riemann_roch_basis, Niceness, RationalFn,
};
use super::weil::{ThetaCharLabel, ThetaCharacteristic};
use super::{Divisor, HyperellipticCurve, PointKind};
use crate::poly::Poly;
use crate::spinor::{Mat, QuadraticSpace};
use crate::{linalg, Complex, CoreError, Result};

fn cone() -> Complex {
    Complex::new(1.0, 0.0)
}

/// One support point of `a` with its jet bookkeeping.
#[derive(Debug, Clone)]
pub struct JetPoint {
    pub point: super::CurvePoint,
    /// Lowest retained Laurent order (slots are `lo` and `lo + 1`).
    pub lo: i32,
    /// Index of the `lo` slot in the 6-dimensional coordinate system.
    pub slot: usize,
}

/// The 6-dimensional quadratic space of a theta characteristic.
#[derive(Debug)]
pub struct ResiduePairingSpace {
    pub e_label: ThetaCharLabel,
    pub odd: bool,
    pub support: Vec<JetPoint>,
    pub gram: Mat<Complex>,
    /// Image of `H^0(E(a))`: columns are jet coordinates of the basis.
    pub v0: Mat<Complex>,
    /// `H^0(E/E(-a))`: the upper-slot coordinate subspace.
    pub v1: Mat<Complex>,
    pub v0_isotropy: f64,
    pub v1_isotropy: f64,
}

/// The function `w_E` with `div(w_E) = 2 E - K` (concretely, against the
/// representative `K = inf_+ + inf_-`).
fn w_e(curve: &HyperellipticCurve, e: &ThetaCharacteristic) -> RationalFn {
    match e.label {
        ThetaCharLabel::Odd(i) => RationalFn {
            p: Poly::from_roots(&[curve.roots[i]]),
            q: Poly::zero(),
            r: Poly::one(),
        },
        ThetaCharLabel::Even(i, j, k) => RationalFn {
            p: Poly::from_roots(&[curve.roots[i], curve.roots[j]]),
            q: Poly::zero(),
            r: Poly::from_roots(&[curve.roots[k]]),
        },
    }
}

/// Build the residue-pairing space for a theta characteristic.
pub fn residue_pairing_space(
    curve: &HyperellipticCurve,
    e: &ThetaCharacteristic,
    seed: u64,
) -> Result<ResiduePairingSpace> {
    // a ~ 2K - E, effective degree 3; for odd E the system has W_i as a
    // base point, so the representative necessarily contains it
    let class = Divisor::canonical().scale(2).sub(&e.divisor);
    let nice = if e.odd { Niceness::relaxed() } else { Niceness::strict() };
    let (a, _) = effective_representative(curve, &class, nice, seed)?;
    validate_support(curve, e, &a)?;

    // jet bookkeeping
    let mut support = Vec::new();
    let mut slot = 0;
    for &(p, m) in &a.terms {
        debug_assert_eq!(m, 1);
        let e_ord = e.divisor.multiplicity(&p, 1e-8 * curve.scale);
        let lo = -(e_ord + 1);
        support.push(JetPoint { point: p, lo, slot });
        slot += 2;
    }
    debug_assert_eq!(slot, 6);

    // Gram blocks from rho = w_E (dx/dt) / y at each point
    let we = w_e(curve, e);
    let mut gram = Mat::zeros(6, 6);
    for jp in &support {
        let ls = curve.local_series(&jp.point, 12)?;
        let w_series = we.series_at(curve, &jp.point, 12)?;
        let xprime = ls.x.derivative();
        let scale6 = curve.scale.powi(6).max(1.0);
        let rho = w_series.mul(&xprime).mul(&ls.y.normalized(scale6).inv()?);
        // B[j][k] = rho_{-1 - (lo+j) - (lo+k)}
        for j in 0..2 {
            for k in 0..2 {
                let idx = -1 - (jp.lo + j as i32) - (jp.lo + k as i32);
                *gram.at_mut(jp.slot + j, jp.slot + k) = rho.coeff(idx);
            }
        }
        // the pairing must be regular past the slot window
        let low_idx = -1 - 2 * (jp.lo + 1);
        if rho.coeff(low_idx).norm() > 1e-7 * rho.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
        {
            return Err(CoreError::Invalid(
                "rho series has unexpected low-order terms".into(),
            ));
        }
    }

    // V0: jets of a basis of L(E + a) ~ 2K (dimension 3)
    let ea = e.divisor.add(&a);
    let basis = riemann_roch_basis(curve, &ea)?;
    if basis.elements.len() != 3 {
        return Err(CoreError::UnexpectedDimension {
            expected: 3,
            got: basis.elements.len(),
            gap: basis.sv_gap,
        });
    }
    let mut v0 = Mat::zeros(6, 3);
    for (col, h) in basis.elements.iter().enumerate() {
        for jp in &support {
            let s = h.series_at(curve, &jp.point, 10)?;
            *v0.at_mut(jp.slot, col) = s.coeff(jp.lo);
            *v0.at_mut(jp.slot + 1, col) = s.coeff(jp.lo + 1);
        }
    }

    // V1: upper-slot subspace
    let mut v1 = Mat::zeros(6, 3);
    for (col, jp) in support.iter().enumerate() {
        *v1.at_mut(jp.slot + 1, col) = cone();
    }

    let space = QuadraticSpace::new(gram.clone())?;
    let v0_isotropy = space.isotropy_residual(&v0);
    let v1_isotropy = space.isotropy_residual(&v1);

    Ok(ResiduePairingSpace {
        e_label: e.label,
        odd: e.odd,
        support,
        gram,
        v0,
        v1,
        v0_isotropy,
        v1_isotropy,
    })
}

fn validate_support(
    curve: &HyperellipticCurve,
    e: &ThetaCharacteristic,
    a: &Divisor,
) -> Result<()> {
    if a.degree() != 3 || !a.is_effective() {
        return Err(CoreError::Invalid("a must be effective of degree 3".into()));
    }
    for &(p, m) in &a.terms {
        if m != 1 {
            return Err(CoreError::Invalid("a must have simple support".into()));
        }
        if !p.is_affine() {
            return Err(CoreError::Invalid("a must be affine".into()));
        }
        let on_weierstrass = match p.kind {
            PointKind::Affine { x, .. } => curve.is_weierstrass_x(x).is_some(),
            _ => false,
        };
        if on_weierstrass {
            // only the base point of an odd characteristic is allowed
            let allowed = match e.label {
                ThetaCharLabel::Odd(i) => p.approx_eq(
                    &curve.weierstrass_point(i),
                    1e-7 * curve.scale,
                ),
                ThetaCharLabel::Even(..) => false,
            };
            if !allowed {
                return Err(CoreError::Invalid(
                    "support touches a branch point other than the forced base point".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Corank of the composite `V_1 -> V/V_0` (singular values below
/// `1e-7 sigma_max` count as zero), with the decision gap.
pub fn xi_corank(space: &ResiduePairingSpace) -> Result<(usize, f64)> {
    // xi matrix: tF1 G F0 (3x3); kernel = V_1 cap V_0 since V_0 is maximal
    // isotropic
    let xi = space.v1.transpose().matmul(&space.gram).matmul(&space.v0);
    let mut m = linalg::CMat::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = *xi.at(i, j);
        }
    }
    let (rank, gap) = linalg::rank_with_gap(&m, 1e-7)?;
    Ok((3 - rank, gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::weil::theta_characteristics;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn curve_x6_minus_1() -> HyperellipticCurve {
        let mut coeffs = vec![c(-1.0, 0.0)];
        coeffs.extend(vec![Complex::new(0.0, 0.0); 5]);
        coeffs.push(c(1.0, 0.0));
        HyperellipticCurve::from_coefficients(&coeffs).unwrap()
    }

    #[test]
    fn even_characteristic_space() {
        let crv = curve_x6_minus_1();
        let chars = theta_characteristics(&crv);
        let even = chars.iter().find(|t| !t.odd).unwrap();
        let space = residue_pairing_space(&crv, even, 3).unwrap();
        assert_eq!(space.support.len(), 3);
        assert!(space.v0_isotropy < 1e-7, "V0 isotropy {}", space.v0_isotropy);
        assert!(space.v1_isotropy < 1e-12, "V1 isotropy {}", space.v1_isotropy);
        let (corank, _) = xi_corank(&space).unwrap();
        assert_eq!(corank, 0, "even characteristics are non-effective");
    }

    #[test]
    fn odd_characteristic_space() {
        let crv = curve_x6_minus_1();
        let chars = theta_characteristics(&crv);
        let odd = chars.iter().find(|t| t.odd).unwrap();
        let space = residue_pairing_space(&crv, odd, 7).unwrap();
        assert!(space.v0_isotropy < 1e-7, "V0 isotropy {}", space.v0_isotropy);
        assert!(space.v1_isotropy < 1e-12);
        let (corank, gap) = xi_corank(&space).unwrap();
        assert_eq!(corank, 1, "h0(W_i) = 1 (gap {gap})");
    }
}
