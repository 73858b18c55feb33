//! Exact arithmetic for the finite theta group over `L = (Z/N)^g x mu_N^g`.
//!
//! Points of `L` are stored as `2g` residues mod `N`; the first `g`
//! coordinates are the "P-part" and the last `g` the "Q-part" of a fixed
//! symplectic basis, and `mu_N` is identified with `Z/N` through
//! `zeta = exp(2 pi i / N)`. Scalars of the central extension keep an exact
//! root-of-unity exponent whenever one is known and fall back to a complex
//! number otherwise.

use crate::{Complex, CoreError, Result};
use std::f64::consts::TAU;

/// Ambient data shared by all points of one group: modulus and genus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ambient {
    pub n: u32,
    pub g: usize,
}

impl Ambient {
    pub fn new(n: u32, g: usize) -> Self {
        assert!(n >= 2 && g >= 1, "need modulus >= 2 and genus >= 1");
        Self { n, g }
    }

    /// Number of points of `L`.
    pub fn order(&self) -> usize {
        (self.n as usize).pow(2 * self.g as u32)
    }

    /// Dimension of the standard representation, `N^g`.
    pub fn rep_dim(&self) -> usize {
        (self.n as usize).pow(self.g as u32)
    }

    fn check(&self, other: &Ambient, what: &str) -> Result<()> {
        if self != other {
            return Err(CoreError::AmbientMismatch(format!(
                "{what}: ({},{}) vs ({},{})",
                self.n, self.g, other.n, other.g
            )));
        }
        Ok(())
    }
}

/// Exact root of unity `zeta_n^exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootOfUnity {
    pub order: u32,
    pub exp: u32,
}

impl RootOfUnity {
    pub fn new(order: u32, exp: i64) -> Self {
        Self { order, exp: exp.rem_euclid(order as i64) as u32 }
    }

    pub fn one(order: u32) -> Self {
        Self { order, exp: 0 }
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        assert_eq!(self.order, other.order, "root-of-unity order mismatch");
        RootOfUnity::new(self.order, self.exp as i64 + other.exp as i64)
    }

    pub fn inv(&self) -> RootOfUnity {
        RootOfUnity::new(self.order, -(self.exp as i64))
    }

    pub fn pow(&self, k: i64) -> RootOfUnity {
        RootOfUnity::new(self.order, self.exp as i64 * k.rem_euclid(self.order as i64))
    }

    /// Complex embedding via `zeta = exp(2 pi i / order)`.
    pub fn to_complex(&self) -> Complex {
        let arg = TAU * self.exp as f64 / self.order as f64;
        Complex::new(arg.cos(), arg.sin())
    }
}

/// Central scalar of a theta-group element: exact when possible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Exact(RootOfUnity),
    Numeric(Complex),
}

impl Scalar {
    pub fn one(order: u32) -> Self {
        Scalar::Exact(RootOfUnity::one(order))
    }

    pub fn to_complex(&self) -> Complex {
        match self {
            Scalar::Exact(r) => r.to_complex(),
            Scalar::Numeric(z) => *z,
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.mul(b)),
            _ => Scalar::Numeric(self.to_complex() * other.to_complex()),
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.inv()),
            Scalar::Numeric(z) => Scalar::Numeric(Complex::new(1.0, 0.0) / z),
        }
    }
}

/// A point of `L`, reduced into `[0, n)` coordinate-wise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LPoint {
    pub ambient: Ambient,
    pub coords: Vec<u32>,
}

impl LPoint {
    pub fn new(ambient: Ambient, coords: &[i64]) -> Self {
        assert_eq!(coords.len(), 2 * ambient.g, "need 2g coordinates");
        let coords = coords.iter().map(|&c| c.rem_euclid(ambient.n as i64) as u32).collect();
        Self { ambient, coords }
    }

    pub fn zero(ambient: Ambient) -> Self {
        Self { ambient, coords: vec![0; 2 * ambient.g] }
    }

    /// Basis point `r_i`, `i` in `0..2g`.
    pub fn basis(ambient: Ambient, i: usize) -> Self {
        let mut coords = vec![0i64; 2 * ambient.g];
        coords[i] = 1;
        Self::new(ambient, &coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &LPoint) -> Result<LPoint> {
        self.ambient.check(&other.ambient, "LPoint::add")?;
        let n = self.ambient.n;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| (a + b) % n)
            .collect();
        Ok(LPoint { ambient: self.ambient, coords })
    }

    pub fn neg(&self) -> LPoint {
        let n = self.ambient.n;
        let coords = self.coords.iter().map(|&a| (n - a) % n).collect();
        LPoint { ambient: self.ambient, coords }
    }

    pub fn scale(&self, k: i64) -> LPoint {
        let n = self.ambient.n as i64;
        let k = k.rem_euclid(n) as u32;
        let coords = self.coords.iter().map(|&a| (a * k) % self.ambient.n).collect();
        LPoint { ambient: self.ambient, coords }
    }

    /// Rank in the lexicographic enumeration of `L` (first coordinate most
    /// significant).
    pub fn lex_rank(&self) -> usize {
        let n = self.ambient.n as usize;
        self.coords.iter().fold(0usize, |acc, &c| acc * n + c as usize)
    }

    pub fn from_lex_rank(ambient: Ambient, rank: usize) -> Self {
        let n = ambient.n as usize;
        let mut coords = vec![0u32; 2 * ambient.g];
        let mut r = rank;
        for i in (0..2 * ambient.g).rev() {
            coords[i] = (r % n) as u32;
            r /= n;
        }
        Self { ambient, coords }
    }

    /// All points of `L` in lexicographic order.
    pub fn enumerate(ambient: Ambient) -> Vec<LPoint> {
        (0..ambient.order()).map(|r| LPoint::from_lex_rank(ambient, r)).collect()
    }
}

/// Which bilinear pairing `d` with skew-symmetrization `e` the group uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingKind {
    /// `d(P_i,Q_i) = zeta`, `d(Q_i,P_i) = 1`, trivial on all other basis pairs.
    Standard,
    /// `d(P,Q) = e(P,Q)^((N+1)/2)`, only for odd `N`.
    CanonicalOdd,
}

/// Symplectic pairing exponent: `e(P,Q) = zeta^(a.b' - a'.b)`.
pub fn symplectic_e(p: &LPoint, q: &LPoint) -> Result<RootOfUnity> {
    p.ambient.check(&q.ambient, "symplectic_e")?;
    let g = p.ambient.g;
    let mut acc: i64 = 0;
    for i in 0..g {
        acc += p.coords[i] as i64 * q.coords[g + i] as i64;
        acc -= q.coords[i] as i64 * p.coords[g + i] as i64;
    }
    Ok(RootOfUnity::new(p.ambient.n, acc))
}

/// Standard pairing exponent from the fixed symplectic basis: `zeta^(a.b')`.
pub fn standard_d(p: &LPoint, q: &LPoint) -> Result<RootOfUnity> {
    p.ambient.check(&q.ambient, "standard_d")?;
    let g = p.ambient.g;
    let mut acc: i64 = 0;
    for i in 0..g {
        acc += p.coords[i] as i64 * q.coords[g + i] as i64;
    }
    Ok(RootOfUnity::new(p.ambient.n, acc))
}

/// Canonical pairing for odd `N`: `d(P,Q) = e(P,Q)^((N+1)/2)`.
pub fn canonical_d_odd(p: &LPoint, q: &LPoint) -> Result<RootOfUnity> {
    let n = p.ambient.n;
    if n % 2 == 0 {
        return Err(CoreError::EvenModulus(n));
    }
    let e = symplectic_e(p, q)?;
    Ok(e.pow(((n + 1) / 2) as i64))
}

/// The theta group `G_L`: the ambient `L` together with one pinned pairing.
#[derive(Debug, Clone, Copy)]
pub struct ThetaGroup {
    pub ambient: Ambient,
    pub pairing: PairingKind,
}

impl ThetaGroup {
    pub fn standard(n: u32, g: usize) -> Self {
        Self { ambient: Ambient::new(n, g), pairing: PairingKind::Standard }
    }

    pub fn canonical_odd(n: u32, g: usize) -> Result<Self> {
        if n % 2 == 0 {
            return Err(CoreError::EvenModulus(n));
        }
        Ok(Self { ambient: Ambient::new(n, g), pairing: PairingKind::CanonicalOdd })
    }

    pub fn d(&self, p: &LPoint, q: &LPoint) -> Result<RootOfUnity> {
        match self.pairing {
            PairingKind::Standard => standard_d(p, q),
            PairingKind::CanonicalOdd => canonical_d_odd(p, q),
        }
    }

    pub fn identity(&self) -> ThetaGroupElement {
        ThetaGroupElement {
            scalar: Scalar::one(self.ambient.n),
            point: LPoint::zero(self.ambient),
        }
    }

    /// Group law `(lambda, P).(nu, Q) = (lambda nu d(P,Q), P+Q)`.
    pub fn mul(&self, x: &ThetaGroupElement, y: &ThetaGroupElement) -> Result<ThetaGroupElement> {
        self.ambient.check(&x.point.ambient, "group_mul lhs")?;
        self.ambient.check(&y.point.ambient, "group_mul rhs")?;
        let d = self.d(&x.point, &y.point)?;
        let scalar = x.scalar.mul(&y.scalar).mul(&Scalar::Exact(d));
        Ok(ThetaGroupElement { scalar, point: x.point.add(&y.point)? })
    }

    /// `(lambda, P)^{-1} = (lambda^{-1} d(P,-P)^{-1}, -P)`.
    pub fn inv(&self, x: &ThetaGroupElement) -> Result<ThetaGroupElement> {
        let d = self.d(&x.point, &x.point.neg())?;
        let scalar = x.scalar.inv().mul(&Scalar::Exact(d.inv()));
        Ok(ThetaGroupElement { scalar, point: x.point.neg() })
    }

    /// Commutator `x y x^{-1} y^{-1}`; for the theta group its point part is 0
    /// and its scalar is `e(P_x, P_y)`.
    pub fn commutator(
        &self,
        x: &ThetaGroupElement,
        y: &ThetaGroupElement,
    ) -> Result<ThetaGroupElement> {
        let xy = self.mul(x, y)?;
        let xinv = self.inv(x)?;
        let yinv = self.inv(y)?;
        self.mul(&self.mul(&xy, &xinv)?, &yinv)
    }
}

/// An element `(lambda, P)` of the theta group.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaGroupElement {
    pub scalar: Scalar,
    pub point: LPoint,
}

impl ThetaGroupElement {
    pub fn of_point(point: LPoint) -> Self {
        let n = point.ambient.n;
        Self { scalar: Scalar::one(n), point }
    }
}

/// A character of `L`: `chi(R) = zeta^(coords . R)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub ambient: Ambient,
    pub coords: Vec<u32>,
}

impl Character {
    pub fn new(ambient: Ambient, coords: &[i64]) -> Self {
        assert_eq!(coords.len(), 2 * ambient.g);
        let coords = coords.iter().map(|&c| c.rem_euclid(ambient.n as i64) as u32).collect();
        Self { ambient, coords }
    }

    pub fn trivial(ambient: Ambient) -> Self {
        Self { ambient, coords: vec![0; 2 * ambient.g] }
    }

    pub fn value(&self, r: &LPoint) -> Result<RootOfUnity> {
        self.ambient.check(&r.ambient, "Character::value")?;
        let acc: i64 = self
            .coords
            .iter()
            .zip(&r.coords)
            .map(|(&c, &x)| c as i64 * x as i64)
            .sum();
        Ok(RootOfUnity::new(self.ambient.n, acc))
    }

    pub fn mul(&self, other: &Character) -> Result<Character> {
        self.ambient.check(&other.ambient, "Character::mul")?;
        let n = self.ambient.n;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| ((a + b) % n) as i64)
            .collect::<Vec<_>>();
        Ok(Character::new(self.ambient, &coords))
    }

    pub fn enumerate(ambient: Ambient) -> Vec<Character> {
        (0..ambient.order())
            .map(|r| {
                let p = LPoint::from_lex_rank(ambient, r);
                Character { ambient, coords: p.coords }
            })
            .collect()
    }
}

/// Quasi-trivial automorphism `alpha_chi(lambda, P) = (lambda chi(P), P)`.
pub fn quasi_trivial_automorphism(
    chi: &Character,
    x: &ThetaGroupElement,
) -> Result<ThetaGroupElement> {
    let v = chi.value(&x.point)?;
    Ok(ThetaGroupElement { scalar: x.scalar.mul(&Scalar::Exact(v)), point: x.point.clone() })
}

/// The involution `iota(lambda, P) = (lambda, -P)` (a set map; it is a
/// homomorphism only where `d` is symmetric on the pair).
pub fn involution_iota(x: &ThetaGroupElement) -> ThetaGroupElement {
    ThetaGroupElement { scalar: x.scalar, point: x.point.neg() }
}

/// A function `h : L -> C`, stored densely in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionOnL {
    pub ambient: Ambient,
    pub values: Vec<Complex>,
}

impl FunctionOnL {
    pub fn new(ambient: Ambient, values: Vec<Complex>) -> Self {
        assert_eq!(values.len(), ambient.order());
        Self { ambient, values }
    }

    /// Delta function supported at `p`.
    pub fn delta(p: &LPoint) -> Self {
        let mut values = vec![Complex::new(0.0, 0.0); p.ambient.order()];
        values[p.lex_rank()] = Complex::new(1.0, 0.0);
        Self { ambient: p.ambient, values }
    }

    pub fn value_at(&self, p: &LPoint) -> Complex {
        self.values[p.lex_rank()]
    }
}

/// Heisenberg action `((lambda, P) h)(R) = lambda h(R - P) d(R, P)^{-1}`.
pub fn heisenberg_action(
    group: &ThetaGroup,
    x: &ThetaGroupElement,
    h: &FunctionOnL,
) -> Result<FunctionOnL> {
    group.ambient.check(&h.ambient, "heisenberg_action")?;
    group.ambient.check(&x.point.ambient, "heisenberg_action element")?;
    let lambda = x.scalar.to_complex();
    let mut values = vec![Complex::new(0.0, 0.0); h.values.len()];
    for (rank, slot) in values.iter_mut().enumerate() {
        let r = LPoint::from_lex_rank(group.ambient, rank);
        let shifted = r.add(&x.point.neg())?;
        let d = group.d(&r, &x.point)?;
        *slot = lambda * h.values[shifted.lex_rank()] * d.inv().to_complex();
    }
    Ok(FunctionOnL { ambient: h.ambient, values })
}

// ---------------------------------------------------------------------------
// Standard representation on V_0, the space of functions on L_1 = (Z/N)^g.
// The Lagrangian decomposition is fixed: L_1 = first g coordinates,
// L_2 = last g coordinates.
// ---------------------------------------------------------------------------

/// Rank of an `L_1`-index (a `g`-vector mod n) in lexicographic order.
fn l1_rank(n: u32, idx: &[u32]) -> usize {
    idx.iter().fold(0usize, |acc, &c| acc * n as usize + c as usize)
}

fn l1_from_rank(n: u32, g: usize, rank: usize) -> Vec<u32> {
    let mut idx = vec![0u32; g];
    let mut r = rank;
    for i in (0..g).rev() {
        idx[i] = (r % n as usize) as u32;
        r /= n as usize;
    }
    idx
}

/// Action of a translation `m in L_1` on `V_0`: `m(e_l) = e_{l-m}`.
pub fn rep_translate(ambient: Ambient, m: &[u32], v: &[Complex]) -> Vec<Complex> {
    let n = ambient.n;
    let g = ambient.g;
    let dim = ambient.rep_dim();
    assert_eq!(v.len(), dim);
    // e_l -> e_{l-m} means the coefficient of e_l in the result is v[l+m].
    let mut out = vec![Complex::new(0.0, 0.0); dim];
    for (rank, slot) in out.iter_mut().enumerate() {
        let l = l1_from_rank(n, g, rank);
        let src: Vec<u32> = l.iter().zip(m).map(|(&a, &b)| (a + b) % n).collect();
        *slot = v[l1_rank(n, &src)];
    }
    out
}

/// Action of a character `c in L_2` on `V_0`: `chi(e_l) = zeta^(c.l) e_l`.
pub fn rep_character(ambient: Ambient, c: &[u32], v: &[Complex]) -> Vec<Complex> {
    let n = ambient.n;
    let g = ambient.g;
    let dim = ambient.rep_dim();
    assert_eq!(v.len(), dim);
    let mut out = vec![Complex::new(0.0, 0.0); dim];
    for (rank, slot) in out.iter_mut().enumerate() {
        let l = l1_from_rank(n, g, rank);
        let acc: i64 = c.iter().zip(&l).map(|(&ci, &li)| ci as i64 * li as i64).sum();
        *slot = RootOfUnity::new(n, acc).to_complex() * v[rank];
    }
    out
}

/// Action of the involution on `V_0`: `iota(e_l) = e_{-l}`.
pub fn rep_iota(ambient: Ambient, v: &[Complex]) -> Vec<Complex> {
    let n = ambient.n;
    let g = ambient.g;
    let dim = ambient.rep_dim();
    assert_eq!(v.len(), dim);
    let mut out = vec![Complex::new(0.0, 0.0); dim];
    for (rank, slot) in out.iter_mut().enumerate() {
        let l = l1_from_rank(n, g, rank);
        let neg: Vec<u32> = l.iter().map(|&a| (n - a) % n).collect();
        *slot = v[l1_rank(n, &neg)];
    }
    out
}

/// Action of a full theta-group element on `V_0`.
///
/// Writing the point as `(m, c)` with `m in L_1`, `c in L_2`, the element
/// `(1, (m, c))` equals `d((m,0),(0,c))^{-1} (1,(m,0)) (1,(0,c))` in the
/// group, so the action is the corresponding composite; the central scalar
/// acts by homothety. For the standard pairing this is an exact
/// representation of the group law.
pub fn rep_element(group: &ThetaGroup, x: &ThetaGroupElement, v: &[Complex]) -> Result<Vec<Complex>> {
    let ambient = group.ambient;
    ambient.check(&x.point.ambient, "rep_element")?;
    let g = ambient.g;
    let m: Vec<u32> = x.point.coords[..g].to_vec();
    let c: Vec<u32> = x.point.coords[g..].to_vec();
    let mut mpt = vec![0i64; 2 * g];
    let mut cpt = vec![0i64; 2 * g];
    for i in 0..g {
        mpt[i] = m[i] as i64;
        cpt[g + i] = c[i] as i64;
    }
    let d = group.d(&LPoint::new(ambient, &mpt), &LPoint::new(ambient, &cpt))?;
    let scale = x.scalar.to_complex() * d.inv().to_complex();
    let after_c = rep_character(ambient, &c, v);
    let after_m = rep_translate(ambient, &m, &after_c);
    Ok(after_m.into_iter().map(|z| z * scale).collect())
}

/// Matrix of `x` acting on `V_0` (columns are images of basis vectors).
pub fn rep_matrix(group: &ThetaGroup, x: &ThetaGroupElement) -> Result<Vec<Vec<Complex>>> {
    let dim = group.ambient.rep_dim();
    let mut cols = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut e = vec![Complex::new(0.0, 0.0); dim];
        e[j] = Complex::new(1.0, 0.0);
        cols.push(rep_element(group, x, &e)?);
    }
    Ok(cols)
}

/// Dimension of the commutant of the standard representation, computed as
/// the kernel dimension of the linear system `M_s X - X M_s = 0` over the
/// translation and character generators. Irreducibility shows as 1.
pub fn commutant_dimension(group: &ThetaGroup) -> Result<usize> {
    use nalgebra::DMatrix;
    let ambient = group.ambient;
    let g = ambient.g;
    let dim = ambient.rep_dim();
    let mut gens: Vec<Vec<Vec<Complex>>> = Vec::new();
    for i in 0..g {
        let mut coords = vec![0i64; 2 * g];
        coords[i] = 1;
        gens.push(rep_matrix(group, &ThetaGroupElement::of_point(LPoint::new(ambient, &coords)))?);
        let mut coords = vec![0i64; 2 * g];
        coords[g + i] = 1;
        gens.push(rep_matrix(group, &ThetaGroupElement::of_point(LPoint::new(ambient, &coords)))?);
    }
    let d2 = dim * dim;
    let mut rows: Vec<Complex> = Vec::with_capacity(gens.len() * d2 * d2);
    // Row for each (generator, i, j): sum_k M[i][k] X[k][j] - X[i][k] M[k][j].
    for m in &gens {
        for i in 0..dim {
            for j in 0..dim {
                let mut row = vec![Complex::new(0.0, 0.0); d2];
                for k in 0..dim {
                    // +M[i][k] X[k][j]
                    row[k * dim + j] += m[k][i];
                    // -X[i][k] M[k][j]
                    row[i * dim + k] -= m[j][k];
                }
                rows.extend(row);
            }
        }
    }
    let nrows = gens.len() * d2;
    let a = DMatrix::from_row_slice(nrows, d2, &rows);
    let svd = a.svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let tol = smax * 1e-10;
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    Ok(d2 - rank)
}

/// Exhaustive structural checks used both by unit tests and the acceptance
/// suite: `d/e` compatibility, associativity, identity and commutators.
pub fn exhaustive_group_checks(group: &ThetaGroup) -> Result<()> {
    let ambient = group.ambient;
    let points = LPoint::enumerate(ambient);

    // d(P,Q)/d(Q,P) = e(P,Q) as exponents.
    for p in &points {
        for q in &points {
            let lhs = group.d(p, q)?.mul(&group.d(q, p)?.inv());
            let rhs = symplectic_e(p, q)?;
            if lhs != rhs {
                return Err(CoreError::Invalid(format!(
                    "skew-symmetrization of d differs from e at {:?}, {:?}",
                    p.coords, q.coords
                )));
            }
        }
    }

    // 2-cocycle identity (equivalent to associativity of the group law).
    for p in &points {
        for q in &points {
            let dpq = group.d(p, q)?;
            let pq = p.add(q)?;
            for r in &points {
                let lhs = dpq.mul(&group.d(&pq, r)?);
                let rhs = group.d(q, r)?.mul(&group.d(p, &q.add(r)?)?);
                if lhs != rhs {
                    return Err(CoreError::Invalid("d is not a 2-cocycle".into()));
                }
            }
        }
    }

    // Identity element and inverses on scalar-free elements.
    let id = group.identity();
    for p in &points {
        let x = ThetaGroupElement::of_point(p.clone());
        let a = group.mul(&id, &x)?;
        let b = group.mul(&x, &id)?;
        if a != x || b != x {
            return Err(CoreError::Invalid("identity law fails".into()));
        }
        let xi = group.inv(&x)?;
        if group.mul(&x, &xi)? != id || group.mul(&xi, &x)? != id {
            return Err(CoreError::Invalid("inverse law fails".into()));
        }
    }

    // Commutator equals (e(P,Q), 0).
    for p in &points {
        let x = ThetaGroupElement::of_point(p.clone());
        for q in &points {
            let y = ThetaGroupElement::of_point(q.clone());
            let c = group.commutator(&x, &y)?;
            if !c.point.is_zero() {
                return Err(CoreError::Invalid("commutator point is nonzero".into()));
            }
            match c.scalar {
                Scalar::Exact(r) => {
                    if r != symplectic_e(p, q)? {
                        return Err(CoreError::Invalid("commutator scalar differs from e".into()));
                    }
                }
                Scalar::Numeric(_) => {
                    return Err(CoreError::Invalid("commutator lost exactness".into()))
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn symplectic_e_examples() {
        let a = Ambient::new(2, 1);
        let p = LPoint::new(a, &[1, 0]);
        let q = LPoint::new(a, &[0, 1]);
        assert_eq!(symplectic_e(&p, &q).unwrap(), RootOfUnity::new(2, 1));
        assert_abs_diff_eq!(symplectic_e(&p, &q).unwrap().to_complex().re, -1.0, epsilon = 1e-15);
        // alternating
        assert_eq!(symplectic_e(&q, &q).unwrap(), RootOfUnity::new(2, 0));

        let a32 = Ambient::new(3, 2);
        let p = LPoint::new(a32, &[1, 0, 0, 0]);
        let q = LPoint::new(a32, &[0, 0, 1, 0]);
        assert_eq!(symplectic_e(&p, &q).unwrap(), RootOfUnity::new(3, 1));
    }

    #[test]
    fn standard_d_examples() {
        let a = Ambient::new(2, 1);
        let p = LPoint::new(a, &[1, 0]);
        let q = LPoint::new(a, &[0, 1]);
        assert_eq!(standard_d(&p, &q).unwrap(), RootOfUnity::new(2, 1));
        assert_eq!(standard_d(&q, &p).unwrap(), RootOfUnity::new(2, 0));
        let zero = LPoint::zero(a);
        for r in LPoint::enumerate(a) {
            assert_eq!(standard_d(&zero, &r).unwrap(), RootOfUnity::new(2, 0));
        }
    }

    #[test]
    fn canonical_d_examples() {
        let a = Ambient::new(3, 1);
        let p = LPoint::new(a, &[1, 0]);
        let q = LPoint::new(a, &[0, 1]);
        // e-exponent 1 -> d-exponent (3+1)/2 = 2
        assert_eq!(canonical_d_odd(&p, &q).unwrap(), RootOfUnity::new(3, 2));
        assert_eq!(canonical_d_odd(&p, &p).unwrap(), RootOfUnity::new(3, 0));
        // n=5, e-exponent 2 -> 3*2 = 6 = 1 mod 5
        let a5 = Ambient::new(5, 1);
        let p5 = LPoint::new(a5, &[1, 0]);
        let q5 = LPoint::new(a5, &[0, 2]);
        assert_eq!(symplectic_e(&p5, &q5).unwrap(), RootOfUnity::new(5, 2));
        assert_eq!(canonical_d_odd(&p5, &q5).unwrap(), RootOfUnity::new(5, 1));
        assert!(matches!(
            canonical_d_odd(&LPoint::new(a, &[0, 0]), &LPoint::new(Ambient::new(2, 1), &[0, 0])),
            Err(_)
        ));
        assert!(matches!(
            ThetaGroup::canonical_odd(4, 1),
            Err(CoreError::EvenModulus(4))
        ));
    }

    #[test]
    fn group_law_examples() {
        let gr = ThetaGroup::standard(2, 1);
        let a = gr.ambient;
        // (1,0).(mu,Q) = (mu,Q)
        let q = ThetaGroupElement {
            scalar: Scalar::Numeric(c(0.3, 0.7)),
            point: LPoint::new(a, &[1, 1]),
        };
        let prod = gr.mul(&gr.identity(), &q).unwrap();
        assert_eq!(prod, q);
        // (1,(1,0))^2 = (1, 0): d((1,0),(1,0)) has exponent 0
        let x = ThetaGroupElement::of_point(LPoint::new(a, &[1, 0]));
        let sq = gr.mul(&x, &x).unwrap();
        assert_eq!(sq, gr.identity());
        // commutator of (1,P1),(1,Q1) is the central zeta
        let y = ThetaGroupElement::of_point(LPoint::new(a, &[0, 1]));
        let comm = gr.commutator(&x, &y).unwrap();
        assert!(comm.point.is_zero());
        assert_eq!(comm.scalar, Scalar::Exact(RootOfUnity::new(2, 1)));
    }

    #[test]
    fn exhaustive_small_groups() {
        for (n, g) in [(2u32, 1usize), (2, 2), (3, 1), (3, 2)] {
            exhaustive_group_checks(&ThetaGroup::standard(n, g)).unwrap();
        }
        exhaustive_group_checks(&ThetaGroup::canonical_odd(3, 1).unwrap()).unwrap();
        exhaustive_group_checks(&ThetaGroup::canonical_odd(3, 2).unwrap()).unwrap();
    }

    #[test]
    fn quasi_trivial_automorphisms_compose() {
        let a = Ambient::new(2, 1);
        let gr = ThetaGroup::standard(2, 1);
        // chi with chi(P1) = zeta scales (1, P1) by zeta
        let chi = Character::new(a, &[1, 0]);
        let p1 = ThetaGroupElement::of_point(LPoint::new(a, &[1, 0]));
        let img = quasi_trivial_automorphism(&chi, &p1).unwrap();
        assert_eq!(img.scalar, Scalar::Exact(RootOfUnity::new(2, 1)));
        assert_eq!(img.point, p1.point);
        // trivial character is the identity map
        let triv = Character::trivial(a);
        assert_eq!(quasi_trivial_automorphism(&triv, &p1).unwrap(), p1);
        // composition law over the whole group, all characters, and that each
        // alpha_chi is an automorphism
        let chars = Character::enumerate(a);
        let pts = LPoint::enumerate(a);
        for chi in &chars {
            for phi in &chars {
                let chiphi = chi.mul(phi).unwrap();
                for p in &pts {
                    let x = ThetaGroupElement::of_point(p.clone());
                    let a1 = quasi_trivial_automorphism(chi, &quasi_trivial_automorphism(phi, &x).unwrap())
                        .unwrap();
                    let a2 = quasi_trivial_automorphism(&chiphi, &x).unwrap();
                    assert_eq!(a1, a2);
                }
            }
            // homomorphism property
            for p in &pts {
                for q in &pts {
                    let x = ThetaGroupElement::of_point(p.clone());
                    let y = ThetaGroupElement::of_point(q.clone());
                    let lhs = quasi_trivial_automorphism(chi, &gr.mul(&x, &y).unwrap()).unwrap();
                    let rhs = gr
                        .mul(
                            &quasi_trivial_automorphism(chi, &x).unwrap(),
                            &quasi_trivial_automorphism(chi, &y).unwrap(),
                        )
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
        // injectivity: distinct characters give distinct automorphisms
        for (i, chi) in chars.iter().enumerate() {
            for phi in chars.iter().skip(i + 1) {
                let differs = pts.iter().any(|p| {
                    let x = ThetaGroupElement::of_point(p.clone());
                    quasi_trivial_automorphism(chi, &x).unwrap()
                        != quasi_trivial_automorphism(phi, &x).unwrap()
                });
                assert!(differs);
            }
        }
    }

    #[test]
    fn involution_examples() {
        let a = Ambient::new(3, 1);
        let x = ThetaGroupElement {
            scalar: Scalar::Numeric(c(2.0, 1.0)),
            point: LPoint::new(a, &[1, 0]),
        };
        let ix = involution_iota(&x);
        assert_eq!(ix.point, LPoint::new(a, &[2, 0]));
        assert_eq!(ix.scalar, x.scalar);
        assert_eq!(involution_iota(&ix), x);
        let center = ThetaGroupElement {
            scalar: Scalar::Numeric(c(0.5, 0.0)),
            point: LPoint::zero(a),
        };
        assert_eq!(involution_iota(&center), center);
    }

    #[test]
    fn heisenberg_action_formula_and_composition() {
        let gr = ThetaGroup::standard(2, 1);
        let a = gr.ambient;
        // (1,0) acts as the identity
        let h = FunctionOnL::new(
            a,
            vec![c(1.0, 0.0), c(2.0, -1.0), c(0.0, 3.0), c(-1.0, 1.0)],
        );
        assert_eq!(heisenberg_action(&gr, &gr.identity(), &h).unwrap(), h);

        // delta function moves to a scaled delta: values per the formula
        let r0 = LPoint::new(a, &[0, 1]);
        let p = LPoint::new(a, &[1, 0]);
        let x = ThetaGroupElement::of_point(p.clone());
        let moved = heisenberg_action(&gr, &x, &FunctionOnL::delta(&r0)).unwrap();
        let target = r0.add(&p).unwrap();
        for r in LPoint::enumerate(a) {
            let expect = if r == target {
                gr.d(&target, &p).unwrap().inv().to_complex()
            } else {
                c(0.0, 0.0)
            };
            assert_abs_diff_eq!((moved.value_at(&r) - expect).norm(), 0.0, epsilon = 1e-14);
        }

        // action of a product equals the composition, exhaustively with
        // mu_2 scalars
        let pts = LPoint::enumerate(a);
        let scalars = [RootOfUnity::new(2, 0), RootOfUnity::new(2, 1)];
        for p in &pts {
            for sp in &scalars {
                let x = ThetaGroupElement { scalar: Scalar::Exact(*sp), point: p.clone() };
                for q in &pts {
                    for sq in &scalars {
                        let y = ThetaGroupElement { scalar: Scalar::Exact(*sq), point: q.clone() };
                        let xy = gr.mul(&x, &y).unwrap();
                        let lhs = heisenberg_action(&gr, &xy, &h).unwrap();
                        let rhs =
                            heisenberg_action(&gr, &x, &heisenberg_action(&gr, &y, &h).unwrap())
                                .unwrap();
                        for (u, v) in lhs.values.iter().zip(&rhs.values) {
                            assert_abs_diff_eq!((u - v).norm(), 0.0, epsilon = 1e-13);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn standard_rep_basics() {
        let a = Ambient::new(3, 1);
        let dim = a.rep_dim();
        // translation by m: e_l -> e_{l-m}
        let mut v = vec![c(0.0, 0.0); dim];
        v[1] = c(1.0, 0.0); // e_1
        let t = rep_translate(a, &[1], &v);
        assert_abs_diff_eq!((t[0] - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15); // e_0
        // iota: e_l -> e_{-l}, and iota^2 = id
        let i1 = rep_iota(a, &v);
        assert_abs_diff_eq!((i1[2] - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15); // e_2 = e_{-1}
        let i2 = rep_iota(a, &i1);
        assert_eq!(i2, v);
    }

    #[test]
    fn standard_rep_is_a_representation() {
        for (n, g) in [(2u32, 1usize), (3, 1), (2, 2)] {
            let gr = ThetaGroup::standard(n, g);
            let pts = LPoint::enumerate(gr.ambient);
            let dim = gr.ambient.rep_dim();
            let mut v = Vec::with_capacity(dim);
            for k in 0..dim {
                v.push(c(0.3 + k as f64, 0.1 * k as f64 - 0.4));
            }
            for p in &pts {
                for q in &pts {
                    let x = ThetaGroupElement::of_point(p.clone());
                    let y = ThetaGroupElement::of_point(q.clone());
                    let xy = gr.mul(&x, &y).unwrap();
                    let lhs = rep_element(&gr, &xy, &v).unwrap();
                    let rhs = rep_element(&gr, &x, &rep_element(&gr, &y, &v).unwrap()).unwrap();
                    for (u, w) in lhs.iter().zip(&rhs) {
                        assert_abs_diff_eq!((u - w).norm(), 0.0, epsilon = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn commutant_is_one_dimensional() {
        for (n, g) in [(2u32, 1usize), (3, 1), (2, 2), (3, 2)] {
            let gr = ThetaGroup::standard(n, g);
            assert_eq!(commutant_dimension(&gr).unwrap(), 1, "n={n}, g={g}");
        }
    }
}
