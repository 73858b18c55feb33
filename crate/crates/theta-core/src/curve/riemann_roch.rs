//! Riemann-Roch spaces `L(D) = { h : div(h) + D >= 0 }` from the ansatz
//! `h = (p(x) + q(x) y) / r(x)`, with pole bounds at the two infinite points
//! and linear vanishing conditions at finite support solved by a numerical
//! null space; and divisors of such functions by root finding on the norm
//! `p^2 - q^2 f`.

use super::{CurvePoint, Divisor, HyperellipticCurve, PointKind};
use crate::linalg;
use crate::poly::{poly_on_series, Laurent, Poly};
use crate::{Complex, CoreError, Result};

fn czero() -> Complex {
    Complex::new(0.0, 0.0)
}

fn cone() -> Complex {
    Complex::new(1.0, 0.0)
}

/// `(p(x) + q(x) y) / r(x)` as a function on the curve.
#[derive(Debug, Clone)]
pub struct RationalFn {
    pub p: Poly,
    pub q: Poly,
    pub r: Poly,
}

impl RationalFn {
    pub fn eval(&self, point: &CurvePoint) -> Result<Complex> {
        match point.kind {
            PointKind::Affine { x, y } => {
                let den = self.r.eval(x);
                let num = self.p.eval(x) + self.q.eval(x) * y;
                if den.norm() < 1e-12 * (num.norm() + 1.0) {
                    return Err(CoreError::PoleProximity {
                        context: "rational function denominator".into(),
                        magnitude: den.norm(),
                    });
                }
                Ok(num / den)
            }
            _ => Err(CoreError::Invalid("evaluation at infinity requires a series".into())),
        }
    }

    /// Laurent expansion in the local parameter at `point`.
    pub fn series_at(
        &self,
        curve: &HyperellipticCurve,
        point: &CurvePoint,
        len: usize,
    ) -> Result<Laurent> {
        let ls = curve.local_series(point, len + 8)?;
        let window = len + 8;
        let px = compose(&self.p, &ls.x, window);
        let qx = compose(&self.q, &ls.x, window);
        let rx = compose(&self.r, &ls.x, window);
        let num = px.add(&qx.mul(&ls.y));
        let scale = curve.scale.powi(6).max(1.0);
        let den = rx.normalized(scale);
        let num = num.normalized(scale * 1e-4);
        Ok(num.mul(&den.inv()?))
    }

    /// Order of vanishing at a point (poles negative), by expansion.
    pub fn order_at(
        &self,
        curve: &HyperellipticCurve,
        point: &CurvePoint,
        window: usize,
    ) -> Result<i32> {
        let s = self.series_at(curve, point, window)?;
        let mag = s.coeffs.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
        if mag == 0.0 {
            return Err(CoreError::Invalid("zero series".into()));
        }
        for (i, c) in s.coeffs.iter().enumerate() {
            if c.norm() > 1e-9 * mag {
                return Ok(s.ord + i as i32);
            }
        }
        Err(CoreError::Invalid("order not visible in the series window".into()))
    }
}

/// Composition of a polynomial with a (possibly negative-order) Laurent
/// series: handled by direct monomial powers to keep windows straight.
fn compose(p: &Poly, x: &Laurent, window: usize) -> Laurent {
    if p.coeffs.is_empty() {
        return Laurent::new(0, vec![czero(); window]);
    }
    if x.ord >= 0 {
        return poly_on_series(p, x, window);
    }
    // negative order (infinity chart): sum p_j x^j explicitly; a Laurent
    // series has no terms below its order, so anchoring the accumulator at
    // the most negative reachable order keeps every add window-safe
    let deg = p.coeffs.len() as i32 - 1;
    let w = window + deg.unsigned_abs() as usize + 2;
    let base_ord = x.ord * deg;
    let mut acc = Laurent::new(base_ord, vec![czero(); w]);
    let mut pw = Laurent::monomial(cone(), 0, w);
    for &c in p.coeffs.iter() {
        acc = acc.add(&pw.scale(c));
        pw = pw.mul(x);
        if pw.coeffs.len() > w {
            pw.coeffs.truncate(w);
        }
    }
    acc
}

/// Basis of a Riemann-Roch space with diagnostics.
#[derive(Debug, Clone)]
pub struct SectionBasis {
    pub elements: Vec<RationalFn>,
    /// Ratio between the smallest kept and largest dropped singular value of
    /// the condition matrix (infinite when the null space is exact).
    pub sv_gap: f64,
}

/// Basis of `L(D)` for a divisor of degree >= 3 (non-special range).
pub fn riemann_roch_basis(curve: &HyperellipticCurve, d: &Divisor) -> Result<SectionBasis> {
    let deg = d.degree();
    if deg < 3 {
        return Err(CoreError::Invalid(format!(
            "riemann_roch_basis needs degree >= 3, got {deg}"
        )));
    }
    let expected = (deg - 1) as usize;

    // group affine support by x-value; record infinite multiplicities
    let mut n_plus = 0i32;
    let mut n_minus = 0i32;
    struct Group {
        x: Complex,
        weierstrass: bool,
        // multiplicities of (x, y0) and (x, -y0) (or of W when weierstrass)
        pts: Vec<(CurvePoint, i32)>,
    }
    let mut groups: Vec<Group> = Vec::new();
    for &(p, m) in &d.terms {
        match p.kind {
            PointKind::InfPlus => n_plus += m,
            PointKind::InfMinus => n_minus += m,
            PointKind::Affine { x, .. } => {
                let slot = groups.iter_mut().find(|g| (g.x - x).norm() < 1e-8 * curve.scale);
                let weier = curve.is_weierstrass_x(x).is_some();
                match slot {
                    Some(g) => g.pts.push((p, m)),
                    None => groups.push(Group { x, weierstrass: weier, pts: vec![(p, m)] }),
                }
            }
        }
    }

    // denominator r(x) = prod (x - x0)^{m(x0)}
    let mut r = Poly::one();
    let mut deg_r = 0i32;
    let mut group_m: Vec<i32> = Vec::new();
    for g in &groups {
        let max_n = g.pts.iter().map(|&(_, m)| m).max().unwrap_or(0);
        let m = if g.weierstrass {
            // ord_W((x-e)^m) = 2m, so half the needed order, rounded up
            ((max_n.max(0)) + 1) / 2
        } else {
            max_n.max(0)
        };
        group_m.push(m);
        for _ in 0..m {
            r = r.mul(&Poly::new(vec![-g.x, cone()]));
        }
        deg_r += m;
    }

    let m_plus = n_plus + deg_r;
    let m_minus = n_minus + deg_r;
    let m_max = m_plus.max(m_minus);
    let deg_p: i32 = m_max;
    let deg_q: i32 = m_max - 3;
    if deg_p < 0 {
        return Err(CoreError::Invalid("no sections: negative pole allowance".into()));
    }
    let np = (deg_p + 1) as usize;
    let nq = if deg_q >= 0 { (deg_q + 1) as usize } else { 0 };
    let unknowns = np + nq;

    let mut rows: Vec<Vec<Complex>> = Vec::new();

    // conditions at infinity: Laurent coefficient of t^{-k} must vanish for
    // k beyond the allowance on each branch
    let inf_window = (deg_p.max(deg_q + 3) + 4) as usize;
    for (sign, allowance) in [(1.0, m_plus), (-1.0, m_minus)] {
        // s(t) = sqrt(t^6 f(1/t)), shared by both branches
        let mut coeffs = vec![czero(); inf_window];
        for k in 0..inf_window.min(7) {
            coeffs[k] = *curve.f.coeffs.get(6 - k).unwrap_or(&czero());
        }
        let s = Laurent::new(0, coeffs).sqrt(cone())?;
        let top = deg_p.max(deg_q + 3);
        for k in (allowance + 1)..=top {
            let mut row = vec![czero(); unknowns];
            if k >= 0 && (k as usize) < np {
                row[k as usize] = cone();
            }
            for j in 0..nq as i32 {
                let idx = j + 3 - k;
                if idx >= 0 {
                    row[np + j as usize] = Complex::new(sign, 0.0) * s.coeff(idx);
                }
            }
            rows.push(row);
        }
    }

    // conditions at finite support
    for (gi, g) in groups.iter().enumerate() {
        let m = group_m[gi];
        if g.weierstrass {
            let (point, n_w) = g.pts[0];
            let mut n_total = n_w;
            for &(_, extra) in g.pts.iter().skip(1) {
                n_total += extra;
            }
            let k_w = 2 * m - n_total;
            if k_w <= 0 {
                continue;
            }
            let len = (k_w + 2) as usize;
            let ls = curve.local_series(&point, len + 4)?;
            // powers of x(t), and x(t)^j * y(t) with y = t
            let window = (k_w + 4) as usize;
            let xpowers = series_powers(&ls.x, np.max(nq), window);
            for ell in 0..k_w {
                let mut row = vec![czero(); unknowns];
                for j in 0..np {
                    row[j] = xpowers[j].coeff(ell);
                }
                for j in 0..nq {
                    row[np + j] = xpowers[j].mul(&ls.y).coeff(ell);
                }
                rows.push(row);
            }
        } else {
            // both points over x0 carry conditions: the conjugate of a
            // divisor point pays for the shared denominator factor even when
            // it is absent from D
            let mut pts = g.pts.clone();
            let rep = g.pts[0].0;
            let conj = rep.conjugate();
            if !pts.iter().any(|(p, _)| p.approx_eq(&conj, 1e-8 * curve.scale.max(1.0))) {
                pts.push((conj, 0));
            }
            for &(point, n_p) in &pts {
                let k_p = m - n_p;
                if k_p <= 0 {
                    continue;
                }
                let len = (k_p + 2) as usize;
                let ls = curve.local_series(&point, len + 4)?;
                let window = (k_p + 2) as usize;
                let xpowers = series_powers(&ls.x, np.max(nq), window);
                for ell in 0..k_p {
                    let mut row = vec![czero(); unknowns];
                    for j in 0..np {
                        row[j] = xpowers[j].coeff(ell);
                    }
                    for j in 0..nq {
                        row[np + j] = xpowers[j].mul(&ls.y).coeff(ell);
                    }
                    rows.push(row);
                }
            }
        }
    }

    let (vectors, sv_gap) = if rows.is_empty() {
        let mut vs = Vec::new();
        for j in 0..unknowns {
            let mut v = vec![czero(); unknowns];
            v[j] = cone();
            vs.push(v);
        }
        (vs, f64::INFINITY)
    } else {
        let a = linalg::from_rows(&rows);
        let ns = linalg::null_space(&a, 1e-8);
        let svs = linalg::singular_values(&a);
        let smax = svs.first().cloned().unwrap_or(0.0);
        let kept = svs.iter().filter(|&&s| s <= 1e-8 * smax).count();
        let gap = if kept == 0 || kept == svs.len() {
            f64::INFINITY
        } else {
            svs[svs.len() - kept - 1] / svs[svs.len() - kept]
        };
        (ns, gap)
    };

    if vectors.len() != expected {
        return Err(CoreError::UnexpectedDimension {
            expected,
            got: vectors.len(),
            gap: sv_gap,
        });
    }

    let mut elements = Vec::with_capacity(expected);
    for v in vectors {
        // deterministic normalization: divide by the largest coefficient
        let (imax, cmax) = v
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap();
        let _ = imax;
        let v: Vec<Complex> = v.iter().map(|&c| c / cmax).collect();
        let p = Poly::new(v[..np].to_vec());
        let q = Poly::new(v[np..].to_vec());
        elements.push(RationalFn { p, q, r: r.clone() });
    }
    Ok(SectionBasis { elements, sv_gap })
}

fn series_powers(x: &Laurent, count: usize, window: usize) -> Vec<Laurent> {
    let mut out = Vec::with_capacity(count.max(1));
    let mut acc = Laurent::monomial(cone(), 0, window);
    out.push(acc.clone());
    for _ in 1..count.max(1) {
        acc = acc.mul(x);
        if acc.coeffs.len() > window {
            acc.coeffs.truncate(window);
        }
        out.push(acc.clone());
    }
    out
}

/// Independent pole-order verification: every constraint-point order of the
/// section must respect `div(h) + D >= 0`, checked by direct expansion.
pub fn verify_section(
    curve: &HyperellipticCurve,
    h: &RationalFn,
    d: &Divisor,
) -> Result<()> {
    for &(p, m) in &d.terms {
        let window = (2 * m.unsigned_abs() as usize).max(6) + 6;
        let ord = h.order_at(curve, &p, window)?;
        if ord + m < 0 {
            return Err(CoreError::Invalid(format!(
                "section violates pole bound at {:?}: ord {} vs allowed {}",
                p.kind, ord, -m
            )));
        }
    }
    // also confirm there are no stray poles at infinity beyond D
    for inf in [CurvePoint::inf_plus(), CurvePoint::inf_minus()] {
        let allowed = d.multiplicity(&inf, 1e-9);
        let ord = h.order_at(curve, &inf, 14)?;
        if ord + allowed < 0 {
            return Err(CoreError::Invalid(format!(
                "section violates pole bound at infinity: ord {ord} vs allowed {}",
                -allowed
            )));
        }
    }
    Ok(())
}

/// Divisor of `h = (p + q y)/r`: affine zeros from the norm `p^2 - q^2 f`,
/// infinite orders from series expansion, minus the divisor of `r`.
///
/// Strict about genericity: clustered norm roots, zeros on top of branch
/// points and common zeros with `q` are rejected so samplers can retry.
pub fn divisor_of(curve: &HyperellipticCurve, h: &RationalFn) -> Result<Divisor> {
    let mut div = Divisor::zero();

    // affine zeros of G = p + q y
    if h.q.coeffs.is_empty() {
        let roots = cluster_roots(&h.p.roots()?, curve);
        for (x0, m) in roots {
            if let Some(i) = curve.is_weierstrass_x(x0) {
                div.push(curve.weierstrass_point(i), 2 * m);
            } else {
                let y0 = curve.y_at(x0);
                div.push(CurvePoint::affine(x0, y0), m);
                div.push(CurvePoint::affine(x0, -y0), m);
            }
        }
    } else {
        let norm = h.p.mul(&h.p).add(&h.q.mul(&h.q).mul(&curve.f).scale(-cone()));
        let roots = cluster_roots(&norm.roots()?, curve);
        for (x0, m) in roots {
            if let Some(i) = curve.is_weierstrass_x(x0) {
                // the order of G at the branch point comes from its series
                let w = curve.weierstrass_point(i);
                let ls = curve.local_series(&w, 2 * m as usize + 6)?;
                let window = 2 * m as usize + 6;
                let g = compose(&h.p, &ls.x, window)
                    .add(&compose(&h.q, &ls.x, window).mul(&ls.y));
                let mag = g.coeffs.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
                let mut ord = None;
                for (idx, c) in g.coeffs.iter().enumerate() {
                    if c.norm() > 1e-8 * mag {
                        ord = Some(g.ord + idx as i32);
                        break;
                    }
                }
                let ord = ord.ok_or_else(|| {
                    CoreError::Invalid("order at branch point not visible".into())
                })?;
                div.push(w, ord);
                continue;
            }
            if m != 1 {
                return Err(CoreError::Invalid(format!(
                    "norm has a multiple root at {x0} (multiplicity {m}); resample"
                )));
            }
            let qv = h.q.eval(x0);
            if qv.norm() < 1e-9 * curve.scale.max(1.0) {
                return Err(CoreError::Invalid(format!(
                    "q vanishes at a norm root x = {x0}; resample"
                )));
            }
            let y0 = -h.p.eval(x0) / qv;
            let resid = (y0 * y0 - curve.f.eval(x0)).norm();
            if resid > 1e-5 * curve.scale.powi(6).max(1.0) {
                return Err(CoreError::Invalid(format!(
                    "sheet mismatch at norm root x = {x0} (residual {resid:.2e})"
                )));
            }
            div.push(CurvePoint::affine(x0, y0), 1);
        }
    }

    // orders at infinity of G
    for point in [CurvePoint::inf_plus(), CurvePoint::inf_minus()] {
        let ls = curve.local_series(&point, 16)?;
        let window = 16;
        let pg = compose(&h.p, &ls.x, window);
        let qg = compose(&h.q, &ls.x, window).mul(&ls.y);
        let g = pg.add(&qg);
        let mag = g.coeffs.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
        let mut ord = None;
        for (i, c) in g.coeffs.iter().enumerate() {
            if c.norm() > 1e-9 * mag {
                ord = Some(g.ord + i as i32);
                break;
            }
        }
        let ord = ord.ok_or_else(|| CoreError::Invalid("order at infinity not visible".into()))?;
        div.push(point, ord);
    }

    // subtract div(r)
    if let Some(dr) = h.r.degree() {
        if dr > 0 {
            let roots = cluster_roots(&h.r.roots()?, curve);
            for (x0, m) in roots {
                if let Some(i) = curve.is_weierstrass_x(x0) {
                    div.push(curve.weierstrass_point(i), -2 * m);
                } else {
                    let y0 = curve.y_at(x0);
                    div.push(CurvePoint::affine(x0, y0), -m);
                    div.push(CurvePoint::affine(x0, -y0), -m);
                }
            }
            div.push(CurvePoint::inf_plus(), dr as i32);
            div.push(CurvePoint::inf_minus(), dr as i32);
        }
    }

    if div.degree() != 0 {
        return Err(CoreError::Invalid(format!(
            "divisor of a function has degree {} (should be 0)",
            div.degree()
        )));
    }
    Ok(div)
}

fn cluster_roots(roots: &[Complex], curve: &HyperellipticCurve) -> Vec<(Complex, i32)> {
    let tol = 1e-6 * curve.scale.max(1.0);
    let mut out: Vec<(Complex, i32)> = Vec::new();
    for &r in roots {
        match out.iter_mut().find(|(c, _)| (*c - r).norm() < tol) {
            Some((_, m)) => *m += 1,
            None => out.push((r, 1)),
        }
    }
    out
}

/// Requirements on sampled effective representatives.
#[derive(Debug, Clone, Copy)]
pub struct Niceness {
    pub affine_only: bool,
    pub simple: bool,
    pub avoid_weierstrass: bool,
    pub distinct_x: bool,
}

impl Niceness {
    pub fn strict() -> Self {
        Self { affine_only: true, simple: true, avoid_weierstrass: true, distinct_x: true }
    }

    pub fn relaxed() -> Self {
        Self { affine_only: true, simple: false, avoid_weierstrass: false, distinct_x: false }
    }
}

/// Deterministically sample an effective divisor in the class of
/// `class_div` (degree >= 3), together with the function realizing the
/// equivalence: `result = div(h) + class_div`.
pub fn effective_representative(
    curve: &HyperellipticCurve,
    class_div: &Divisor,
    nice: Niceness,
    seed: u64,
) -> Result<(Divisor, RationalFn)> {
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let basis = riemann_roch_basis(curve, class_div)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..300 {
        let coeffs: Vec<Complex> = (0..basis.elements.len())
            .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut p = Poly::zero();
        let mut q = Poly::zero();
        for (c, b) in coeffs.iter().zip(&basis.elements) {
            p = p.add(&b.p.scale(*c));
            q = q.add(&b.q.scale(*c));
        }
        let h = RationalFn { p, q, r: basis.elements[0].r.clone() };
        let div = match divisor_of(curve, &h) {
            Ok(d) => d,
            Err(_) => continue,
        };
        let rep = div.add(class_div);
        if !rep.is_effective() {
            continue;
        }
        if check_niceness(curve, &rep, nice) {
            return Ok((rep, h));
        }
    }
    Err(CoreError::Invalid(format!(
        "no nice representative found for class of degree {}",
        class_div.degree()
    )))
}

fn check_niceness(curve: &HyperellipticCurve, d: &Divisor, nice: Niceness) -> bool {
    let mut xs: Vec<Complex> = Vec::new();
    for &(p, m) in &d.terms {
        if m == 0 {
            continue;
        }
        match p.kind {
            PointKind::Affine { x, .. } => {
                if nice.simple && m != 1 {
                    return false;
                }
                if nice.avoid_weierstrass && curve.is_weierstrass_x(x).is_some() {
                    return false;
                }
                xs.push(x);
            }
            _ => {
                if nice.affine_only {
                    return false;
                }
            }
        }
    }
    if nice.distinct_x {
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                if (xs[i] - xs[j]).norm() < 1e-4 * curve.scale {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn test_curve() -> HyperellipticCurve {
        let mut coeffs = vec![c(-1.0, 0.0)];
        coeffs.extend(vec![czero(); 5]);
        coeffs.push(c(1.0, 0.0));
        HyperellipticCurve::from_coefficients(&coeffs).unwrap()
    }

    fn two_k(curve: &HyperellipticCurve) -> Divisor {
        let _ = curve;
        Divisor::of(&[(CurvePoint::inf_plus(), 2), (CurvePoint::inf_minus(), 2)])
    }

    #[test]
    fn basis_of_2k_is_one_x_x2() {
        let crv = test_curve();
        let basis = riemann_roch_basis(&crv, &two_k(&crv)).unwrap();
        assert_eq!(basis.elements.len(), 3);
        // the span must be {1, x, x^2}: all q's vanish, p degrees <= 2
        for b in &basis.elements {
            assert!(b.q.coeffs.is_empty(), "unexpected y-part");
            assert!(b.p.degree().unwrap_or(0) <= 2);
        }
        // evaluation sanity at a point
        let x0 = c(1.3, 0.4);
        let y0 = crv.y_at(x0);
        let pt = CurvePoint::affine(x0, y0);
        for b in &basis.elements {
            b.eval(&pt).unwrap();
        }
    }

    #[test]
    fn basis_with_weierstrass_twist() {
        // D = 2 inf+ + 2 inf- + W_1 - W_2: dimension 3
        let crv = test_curve();
        let d = two_k(&crv)
            .add(&Divisor::single(crv.weierstrass_point(0), 1))
            .add(&Divisor::single(crv.weierstrass_point(1), -1));
        let basis = riemann_roch_basis(&crv, &d).unwrap();
        assert_eq!(basis.elements.len(), 3);
        for b in &basis.elements {
            verify_section(&crv, b, &d).unwrap();
        }
    }

    #[test]
    fn dimension_matches_riemann_roch_for_random_divisors() {
        let crv = test_curve();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for trial in 0..20 {
            // random effective divisor of degree 3..5 at generic points,
            // possibly minus one generic point
            let deg_pos = rng.gen_range(3..=5);
            let mut d = Divisor::zero();
            for _ in 0..deg_pos {
                let x = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let y = crv.y_at(x) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                d.push(CurvePoint::affine(x, y), 1);
            }
            if rng.gen_bool(0.4) && d.degree() > 3 {
                let x = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let y = crv.y_at(x);
                d.push(CurvePoint::affine(x, y), -1);
            }
            let basis = riemann_roch_basis(&crv, &d).unwrap();
            assert_eq!(basis.elements.len(), (d.degree() - 1) as usize, "trial {trial}");
            for b in &basis.elements {
                verify_section(&crv, b, &d).unwrap();
            }
        }
    }

    #[test]
    fn divisor_of_x_minus_root() {
        let crv = test_curve();
        // x - e_1: divisor 2 W_1 - inf+ - inf-
        let h = RationalFn {
            p: Poly::new(vec![-crv.roots[0], cone()]),
            q: Poly::zero(),
            r: Poly::one(),
        };
        let div = divisor_of(&crv, &h).unwrap();
        assert_eq!(div.degree(), 0);
        assert_eq!(div.multiplicity(&crv.weierstrass_point(0), 1e-8), 2);
        assert_eq!(div.multiplicity(&CurvePoint::inf_plus(), 1e-8), -1);
        assert_eq!(div.multiplicity(&CurvePoint::inf_minus(), 1e-8), -1);
    }

    #[test]
    fn divisor_of_y() {
        let crv = test_curve();
        // y: divisor W_1 + .. + W_6 - 3 inf+ - 3 inf-
        let h = RationalFn { p: Poly::zero(), q: Poly::one(), r: Poly::one() };
        let div = divisor_of(&crv, &h).unwrap();
        assert_eq!(div.degree(), 0);
        for i in 0..6 {
            assert_eq!(div.multiplicity(&crv.weierstrass_point(i), 1e-8), 1);
        }
        assert_eq!(div.multiplicity(&CurvePoint::inf_plus(), 1e-8), -3);
    }

    #[test]
    fn effective_representative_of_generic_class() {
        let crv = test_curve();
        // a generic degree-3 class is base-point free (classes K + P are
        // exactly the ones with a base point, and this is not of that form)
        let mut class = Divisor::zero();
        for (re, im) in [(0.7, 0.3), (-1.4, 0.8), (0.2, -1.1)] {
            let x = c(re, im);
            class.push(CurvePoint::affine(x, crv.y_at(x)), 1);
        }
        let (rep, h) = effective_representative(&crv, &class, Niceness::strict(), 11).unwrap();
        assert_eq!(rep.degree(), 3);
        assert!(rep.is_effective());
        for (p, _) in &rep.terms {
            assert!(p.is_affine());
            assert!(crv.is_weierstrass_x(p.x().unwrap()).is_none());
        }
        // the function indeed moves the class: div(h) = rep - class
        let dh = divisor_of(&crv, &h).unwrap();
        let diff = rep.sub(&class).sub(&dh);
        assert_eq!(diff.degree(), 0);
        assert!(diff.terms.iter().all(|&(_, m)| m == 0), "{:?}", diff.terms);
    }
}
