//! Dense complex polynomials, root finding and Laurent series.
//!
//! The hyperelliptic backend needs only small degrees (at most ~14), so a
//! dense coefficient representation with Durand-Kerner root finding and a
//! short Laurent-series arithmetic is enough.

use crate::{Complex, CoreError, Result};

/// Polynomial with coefficients `c[0] + c[1] x + ...`; trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<Complex>,
}

fn czero() -> Complex {
    Complex::new(0.0, 0.0)
}

impl Poly {
    pub fn new(coeffs: Vec<Complex>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![Complex::new(1.0, 0.0)] }
    }

    pub fn constant(c: Complex) -> Self {
        Self::new(vec![c])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex]) -> Self {
        let mut p = Poly::one();
        for &r in roots {
            p = p.mul(&Poly::new(vec![-r, Complex::new(1.0, 0.0)]));
        }
        p
    }

    fn trim(&mut self) {
        while let Some(c) = self.coeffs.last() {
            if c.norm() == 0.0 {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn eval(&self, x: Complex) -> Complex {
        let mut acc = czero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Poly::new(coeffs)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![czero(); n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Poly::new(coeffs)
    }

    pub fn scale(&self, s: Complex) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut coeffs = vec![czero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }

    /// All roots by Durand-Kerner iteration; deterministic initialization.
    pub fn roots(&self) -> Result<Vec<Complex>> {
        let deg = match self.degree() {
            None | Some(0) => return Ok(vec![]),
            Some(d) => d,
        };
        let lead = self.coeffs[deg];
        let monic: Vec<Complex> = self.coeffs.iter().map(|&c| c / lead).collect();
        // radius estimate from coefficient magnitudes
        let radius = 1.0
            + monic[..deg]
                .iter()
                .map(|c| c.norm())
                .fold(0.0_f64, f64::max);
        let mut z: Vec<Complex> = (0..deg)
            .map(|k| {
                let arg = std::f64::consts::TAU * (k as f64 + 0.25) / deg as f64;
                Complex::new(arg.cos(), arg.sin()) * (0.4 + radius)
            })
            .collect();
        let eval_monic = |x: Complex| {
            let mut acc = Complex::new(1.0, 0.0);
            for &c in monic[..deg].iter().rev() {
                acc = acc * x + c;
            }
            acc
        };
        for _ in 0..300 {
            let mut max_step = 0.0_f64;
            for i in 0..deg {
                let mut denom = Complex::new(1.0, 0.0);
                for j in 0..deg {
                    if i != j {
                        denom *= z[i] - z[j];
                    }
                }
                if denom.norm() < 1e-300 {
                    denom = Complex::new(1e-300, 0.0);
                }
                let step = eval_monic(z[i]) / denom;
                z[i] -= step;
                max_step = max_step.max(step.norm());
            }
            if max_step < 1e-14 * (1.0 + radius) {
                break;
            }
        }
        // polish with Newton
        let dp = self.derivative();
        for zi in z.iter_mut() {
            for _ in 0..5 {
                let d = dp.eval(*zi);
                if d.norm() < 1e-250 {
                    break;
                }
                *zi -= self.eval(*zi) / d;
            }
        }
        for &zi in &z {
            if !zi.re.is_finite() || !zi.im.is_finite() {
                return Err(CoreError::Invalid("root finding diverged".into()));
            }
        }
        Ok(z)
    }
}

/// Truncated Laurent series `sum_{k >= ord} c_k t^k`, coefficients stored
/// from `ord` upward.
#[derive(Debug, Clone)]
pub struct Laurent {
    pub ord: i32,
    pub coeffs: Vec<Complex>,
}

impl Laurent {
    pub fn new(ord: i32, coeffs: Vec<Complex>) -> Self {
        Self { ord, coeffs }
    }

    /// The series `c t^k` with `len` retained coefficients.
    pub fn monomial(c: Complex, k: i32, len: usize) -> Self {
        let mut coeffs = vec![czero(); len];
        if len > 0 {
            coeffs[0] = c;
        }
        Self { ord: k, coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `t^k` (0 if outside the retained window; staying inside
    /// the window is the caller's responsibility).
    pub fn coeff(&self, k: i32) -> Complex {
        let idx = k - self.ord;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            czero()
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// Drop leading (numerically) zero coefficients, raising `ord`.
    /// `scale` calibrates what counts as zero.
    pub fn normalized(mut self, scale: f64) -> Self {
        let tol = scale * 1e-11;
        while !self.coeffs.is_empty() && self.coeffs[0].norm() <= tol {
            self.coeffs.remove(0);
            self.ord += 1;
        }
        self
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let ord = self.ord.min(other.ord);
        let hi = (self.ord + self.len() as i32).min(other.ord + other.len() as i32);
        let n = (hi - ord).max(0) as usize;
        let mut coeffs = vec![czero(); n];
        for (k, slot) in coeffs.iter_mut().enumerate() {
            let t = ord + k as i32;
            *slot = self.coeff(t) + other.coeff(t);
        }
        Laurent { ord, coeffs }
    }

    pub fn scale(&self, s: Complex) -> Laurent {
        Laurent { ord: self.ord, coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let n = self.len().min(other.len());
        if n == 0 {
            return Laurent { ord: self.ord + other.ord, coeffs: vec![] };
        }
        let mut coeffs = vec![czero(); n];
        for i in 0..n {
            for j in 0..n - i {
                coeffs[i + j] += self.coeffs[i] * other.coeffs[j];
            }
        }
        Laurent { ord: self.ord + other.ord, coeffs }
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn inv(&self) -> Result<Laurent> {
        if self.coeffs.is_empty() || self.coeffs[0].norm() == 0.0 {
            return Err(CoreError::Invalid("cannot invert series with zero leading term".into()));
        }
        let n = self.len();
        let a0 = self.coeffs[0];
        let mut coeffs = vec![czero(); n];
        coeffs[0] = Complex::new(1.0, 0.0) / a0;
        for k in 1..n {
            let mut acc = czero();
            for j in 1..=k {
                acc += self.coeffs[j] * coeffs[k - j];
            }
            coeffs[k] = -acc / a0;
        }
        Ok(Laurent { ord: -self.ord, coeffs })
    }

    /// Square root of a series with nonzero leading coefficient and even
    /// leading order. `branch` picks which square root of the leading
    /// coefficient is used.
    pub fn sqrt(&self, branch: Complex) -> Result<Laurent> {
        if self.coeffs.is_empty() || self.coeffs[0].norm() == 0.0 {
            return Err(CoreError::Invalid("sqrt of series with zero leading term".into()));
        }
        if self.ord % 2 != 0 {
            return Err(CoreError::Invalid("sqrt of series with odd leading order".into()));
        }
        let n = self.len();
        let s0 = branch;
        debug_assert!((s0 * s0 - self.coeffs[0]).norm() <= 1e-8 * self.coeffs[0].norm().max(1e-300));
        let mut coeffs = vec![czero(); n];
        coeffs[0] = s0;
        for k in 1..n {
            let mut acc = czero();
            for j in 1..k {
                acc += coeffs[j] * coeffs[k - j];
            }
            coeffs[k] = (self.coeffs[k] - acc) / (s0 * 2.0);
        }
        Ok(Laurent { ord: self.ord / 2, coeffs })
    }

    /// Derivative with respect to `t`.
    pub fn derivative(&self) -> Laurent {
        let mut coeffs = Vec::with_capacity(self.len());
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = self.ord + i as i32;
            coeffs.push(c * k as f64);
        }
        let mut out = Laurent { ord: self.ord - 1, coeffs };
        if out.ord == -1 && !out.coeffs.is_empty() && out.coeffs[0].norm() == 0.0 {
            out.coeffs.remove(0);
            out.ord += 1;
        }
        out
    }

    /// Substitute `t = u^2`, doubling all exponents (used at Weierstrass
    /// points where `x - e = O(t^2)` in the local parameter `t = y`).
    pub fn stretch2(&self) -> Laurent {
        let mut coeffs = vec![czero(); self.len() * 2];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = c;
        }
        Laurent { ord: self.ord * 2, coeffs }
    }
}

/// Evaluate a polynomial on a Laurent series of nonnegative order.
pub fn poly_on_series(p: &Poly, x: &Laurent, len: usize) -> Laurent {
    assert!(x.ord >= 0, "composition needs a regular series");
    let one = Laurent::monomial(Complex::new(1.0, 0.0), 0, len);
    let mut acc = Laurent::monomial(czero(), 0, len);
    for &c in p.coeffs.iter().rev() {
        acc = acc.mul(x);
        if acc.ord > 0 {
            // re-anchor at order 0 so constants can be added
            let mut coeffs = vec![czero(); acc.ord as usize];
            coeffs.extend(acc.coeffs.iter().copied());
            coeffs.truncate(len);
            acc = Laurent { ord: 0, coeffs };
        }
        acc = acc.add(&one.scale(c));
        if acc.coeffs.len() > len {
            acc.coeffs.truncate(len);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn roots_of_sextic() {
        let roots = vec![
            c(1.0, 0.0),
            c(-1.0, 0.0),
            c(0.0, 2.0),
            c(3.0, -1.0),
            c(-2.5, 0.5),
            c(0.3, 0.0),
        ];
        let p = Poly::from_roots(&roots);
        let mut found = p.roots().unwrap();
        for r in &roots {
            let (idx, _) = found
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| (**a - r).norm().partial_cmp(&(**b - r).norm()).unwrap())
                .unwrap();
            assert_abs_diff_eq!((found[idx] - r).norm(), 0.0, epsilon = 1e-9);
            found.remove(idx);
        }
    }

    #[test]
    fn series_inverse_and_sqrt() {
        let s = Laurent::new(0, vec![c(4.0, 0.0), c(1.0, 0.0), c(0.0, 2.0), c(-0.5, 0.0)]);
        let inv = s.inv().unwrap();
        let prod = s.mul(&inv);
        assert_abs_diff_eq!((prod.coeff(0) - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-13);
        for k in 1..3 {
            assert_abs_diff_eq!(prod.coeff(k).norm(), 0.0, epsilon = 1e-13);
        }
        let r = s.sqrt(c(2.0, 0.0)).unwrap();
        let sq = r.mul(&r);
        for k in 0..3 {
            assert_abs_diff_eq!((sq.coeff(k) - s.coeff(k)).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn poly_composition_on_series() {
        let p = Poly::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]); // 1 + 2x + 3x^2
        let x = Laurent::new(0, vec![c(0.5, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let s = poly_on_series(&p, &x, 4);
        // at t=0, x=0.5: p(0.5) = 2.75
        assert_abs_diff_eq!((s.coeff(0) - c(2.75, 0.0)).norm(), 0.0, epsilon = 1e-13);
        // d/dt at 0: p'(x(0)) * x'(0) = (2 + 6*0.5) * 1 = 5
        assert_abs_diff_eq!((s.coeff(1) - c(5.0, 0.0)).norm(), 0.0, epsilon = 1e-13);
    }
}
