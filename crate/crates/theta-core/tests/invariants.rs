//! Property-based invariants across the exact layers.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use theta_core::heisenberg::{
    symplectic_e, Ambient, LPoint, RootOfUnity, Scalar, ThetaGroup, ThetaGroupElement,
};
use theta_core::spinor::{pfaffian, Mat};

proptest! {
    #[test]
    fn group_law_associative_with_scalars(
        n in 2u32..=5,
        pa in prop::collection::vec(0i64..5, 4),
        pb in prop::collection::vec(0i64..5, 4),
        pc in prop::collection::vec(0i64..5, 4),
        sa in 0i64..5,
        sb in 0i64..5,
    ) {
        let g = 2usize;
        let ambient = Ambient::new(n, g);
        let gr = ThetaGroup::standard(n, g);
        let x = ThetaGroupElement {
            scalar: Scalar::Exact(RootOfUnity::new(n, sa)),
            point: LPoint::new(ambient, &pa),
        };
        let y = ThetaGroupElement {
            scalar: Scalar::Exact(RootOfUnity::new(n, sb)),
            point: LPoint::new(ambient, &pb),
        };
        let z = ThetaGroupElement::of_point(LPoint::new(ambient, &pc));
        let lhs = gr.mul(&gr.mul(&x, &y).unwrap(), &z).unwrap();
        let rhs = gr.mul(&x, &gr.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutator_scalar_is_symplectic_pairing(
        n in 2u32..=4,
        pa in prop::collection::vec(0i64..4, 4),
        pb in prop::collection::vec(0i64..4, 4),
    ) {
        let ambient = Ambient::new(n, 2);
        let gr = ThetaGroup::standard(n, 2);
        let p = LPoint::new(ambient, &pa);
        let q = LPoint::new(ambient, &pb);
        let c = gr
            .commutator(
                &ThetaGroupElement::of_point(p.clone()),
                &ThetaGroupElement::of_point(q.clone()),
            )
            .unwrap();
        prop_assert!(c.point.is_zero());
        prop_assert_eq!(c.scalar, Scalar::Exact(symplectic_e(&p, &q).unwrap()));
    }

    #[test]
    fn pfaffian_square_is_determinant(
        upper in prop::collection::vec(-7i64..=7, 15),
    ) {
        // n = 6 skew matrix from 15 upper entries
        let n = 6;
        let mut a = Mat::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let v = BigRational::from_integer(BigInt::from(upper[k]));
                *a.at_mut(i, j) = v.clone();
                *a.at_mut(j, i) = -v;
                k += 1;
            }
        }
        let pf = pfaffian(&a).unwrap().value;
        prop_assert_eq!(pf.clone() * pf, a.det());
    }

    #[test]
    fn theta_quasi_periodicity_g1(
        re in -0.4f64..0.4,
        im in -0.3f64..0.3,
        p in -2i64..=2,
        q in -1i64..=1,
        tau_im in 0.8f64..1.6,
    ) {
        use theta_core::theta::{automorphy_factor, theta, Characteristic, PeriodMatrix};
        let tau = PeriodMatrix::new(vec![vec![Complex64::new(0.21, tau_im)]]).unwrap();
        let chi = Characteristic::new(2, &[1], &[1]);
        let z = [Complex64::new(re, im)];
        let shifted = [z[0] + p as f64 + tau.tau[0][0] * q as f64];
        let lhs = theta(&chi, &shifted, &tau, None).unwrap();
        let rhs = automorphy_factor(&chi, &[p], &[q], &z, &tau)
            * theta(&chi, &z, &tau, None).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm().max(1.0));
    }
}
