//! Cross-validation of the determinantal Weil functions against analytic
//! theta quotients.
//!
//! For every nonzero two-torsion point `P`, the ratio of the determinantal
//! `f_P(w)` to the analytic quotient `(theta[-a;-b](z)/theta[0;0](z))^2`
//! evaluated at `z(w) = AJ(sum w_j - K - delta)` must be constant in `w`
//! once the even theta characteristic `delta` realizing the torsor
//! identification is chosen correctly. The right `delta` is found by a
//! global search over the ten candidates, minimizing the worst coefficient
//! of variation; its success is itself a check of the whole pipeline.

use super::periods::{abel_jacobi, lattice_coordinates, torsion_characteristic_of_z};
use super::weil::{theta_characteristics, CurveWeilFamily, ThetaCharacteristic};
use super::Divisor;
use crate::heisenberg::LPoint;
use crate::normalize::WeilBackend;
use crate::par;
use crate::theta::{AnalyticWeilFamily, Characteristic};
use crate::{Complex, CoreError, Result};

/// Constancy statistics for one torsion point at the matched `delta`.
#[derive(Debug, Clone)]
pub struct PConstancy {
    pub rank: usize,
    pub pair_label: Option<(usize, usize)>,
    /// Coefficient of variation of `f_P(w) / phi_P(z(w))`.
    pub cv: f64,
    /// Coefficient of variation of the squared ratio.
    pub cv_squared: f64,
    /// Mean ratio (the undetermined proportionality constant).
    pub mean_ratio: Complex,
    pub samples: usize,
}

/// Outcome of the comparison.
#[derive(Debug, Clone)]
pub struct ThomaeReport {
    /// Index into `theta_characteristics` (even entries) of the matched
    /// `delta`.
    pub matched_delta: usize,
    pub matched_delta_label: String,
    /// Worst CV over the 15 nonzero torsion points at the matched `delta`.
    pub max_cv: f64,
    pub per_p: Vec<PConstancy>,
    /// (delta index, worst CV) for every candidate.
    pub candidates: Vec<(usize, f64)>,
    /// Whether parities of `L - delta` match the curve-side parity for all
    /// 16 theta characteristics at the matched `delta`.
    pub parity_consistent: bool,
}

/// Run the comparison over at least `samples` random triples.
pub fn thomae_compare(
    family: &CurveWeilFamily,
    samples: usize,
    seed: u64,
) -> Result<ThomaeReport> {
    let curve = &family.curve;
    let frame = &family.frame;
    let analytic = AnalyticWeilFamily::new(2, frame.tau.clone());
    let chars = theta_characteristics(curve);
    let evens: Vec<(usize, &ThetaCharacteristic)> =
        chars.iter().enumerate().filter(|(_, t)| !t.odd).collect();

    // sample triples: oversample to survive per-P pole guards
    let pool = family.sample_points(samples + samples / 2 + 4, seed)?;

    // base z for each triple, against the first even delta
    let (d0_idx, d0) = evens[0];
    let _ = d0_idx;
    let base_div = |triple: &[super::CurvePoint; 3], delta: &ThetaCharacteristic| {
        let mut d = Divisor::zero();
        for p in triple {
            d.push(*p, 1);
        }
        // K ~ 2 W_6 keeps everything affine
        d.push(curve.weierstrass_point(5), -2);
        d.sub(&delta.divisor)
    };
    let z_base: Vec<Vec<Complex>> = {
        let results = par::map_slice(&pool, |triple| abel_jacobi(frame, &base_div(triple, d0)));
        let mut out = Vec::with_capacity(results.len());
        for r in results {
            out.push(r?);
        }
        out
    };
    // shift from delta0 to each candidate delta: AJ(delta0 - delta)
    let mut delta_shift = Vec::with_capacity(evens.len());
    for (_, d) in &evens {
        let diff = d0.divisor.sub(&d.divisor);
        if diff.degree() != 0 {
            return Err(CoreError::Invalid("delta difference must have degree 0".into()));
        }
        let shift = if diff.terms.is_empty() {
            vec![Complex::new(0.0, 0.0); 2]
        } else {
            abel_jacobi(frame, &diff)?
        };
        delta_shift.push(shift);
    }

    // determinantal values once per (P, w)
    let labels: Vec<LPoint> = (0..16).map(|r| LPoint::from_lex_rank(family.ambient(), r)).collect();
    let det_vals: Vec<Vec<Option<Complex>>> = par::map_indexed(16, |rank| {
        pool.iter()
            .map(|w| family.eval_rank(rank, w).ok())
            .collect()
    });

    // analytic values per (delta, P, w)
    let mut candidates = Vec::new();
    let mut best: Option<(usize, f64, Vec<PConstancy>)> = None;
    for (cand_pos, (cand_idx, _)) in evens.iter().enumerate() {
        let mut per_p = Vec::new();
        let mut max_cv: f64 = 0.0;
        for rank in 1..16 {
            let chi = Characteristic::from_lpoint(&labels[rank]);
            let mut ratios = Vec::new();
            for (wi, zb) in z_base.iter().enumerate() {
                let Some(fp) = det_vals[rank][wi] else { continue };
                let z: Vec<Complex> =
                    (0..2).map(|i| zb[i] + delta_shift[cand_pos][i]).collect();
                let phi = match analytic.eval_raw(&chi, &z) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                if phi.norm() < 1e-12 || fp.norm() < 1e-12 {
                    continue;
                }
                ratios.push(fp / phi);
                if ratios.len() >= samples {
                    break;
                }
            }
            if ratios.len() < samples.min(8) {
                max_cv = f64::INFINITY;
                per_p.push(PConstancy {
                    rank,
                    pair_label: family.pair_labels[rank],
                    cv: f64::INFINITY,
                    cv_squared: f64::INFINITY,
                    mean_ratio: Complex::new(0.0, 0.0),
                    samples: ratios.len(),
                });
                continue;
            }
            let (cv, mean) = coefficient_of_variation(&ratios);
            let squares: Vec<Complex> = ratios.iter().map(|r| r * r).collect();
            let (cv2, _) = coefficient_of_variation(&squares);
            max_cv = max_cv.max(cv);
            per_p.push(PConstancy {
                rank,
                pair_label: family.pair_labels[rank],
                cv,
                cv_squared: cv2,
                mean_ratio: mean,
                samples: ratios.len(),
            });
        }
        candidates.push((*cand_idx, max_cv));
        if best.as_ref().map_or(true, |(_, b, _)| max_cv < *b) {
            best = Some((*cand_idx, max_cv, per_p));
        }
    }
    let (matched_delta, max_cv, per_p) =
        best.ok_or_else(|| CoreError::Invalid("no delta candidate evaluated".into()))?;
    if !max_cv.is_finite() || max_cv > 1e-3 {
        return Err(CoreError::Invalid(format!(
            "no delta achieves constancy: best worst-CV {max_cv:.3e} (convention bug)"
        )));
    }

    // parity cross-check at the matched delta
    let delta = &chars[matched_delta];
    let mut parity_consistent = true;
    for t in &chars {
        let diff = t.divisor.sub(&delta.divisor);
        let z = abel_jacobi(frame, &diff)?;
        let (chi, _) = torsion_characteristic_of_z(frame, &z, 2)?;
        let analytic_parity = chi.parity()?;
        if (analytic_parity == 1) != t.odd {
            parity_consistent = false;
        }
    }

    Ok(ThomaeReport {
        matched_delta,
        matched_delta_label: format!("{}", chars[matched_delta].label),
        max_cv,
        per_p,
        candidates,
        parity_consistent,
    })
}

fn coefficient_of_variation(vals: &[Complex]) -> (f64, Complex) {
    let n = vals.len() as f64;
    let mean = vals.iter().fold(Complex::new(0.0, 0.0), |a, b| a + b) / n;
    let var = vals.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / n;
    (var.sqrt() / mean.norm().max(1e-300), mean)
}

/// Moduli-vector cross-check: squared normalized entries of the engine's
/// moduli point at the matched `delta` against fourth powers of theta-null
/// quotients. Returns the worst absolute deviation and both vectors.
pub struct ModuliComparison {
    pub entries: Vec<Complex>,
    pub theta_quotients: Vec<Complex>,
    pub worst: f64,
    pub ambiguous: Vec<bool>,
}

pub fn moduli_vs_theta_nulls(
    family: &CurveWeilFamily,
    matched_delta: usize,
    seed: u64,
) -> Result<ModuliComparison> {
    use crate::heisenberg::RootOfUnity;
    use crate::normalize::{analytic_d_fn, Normalizer};
    let chars = theta_characteristics(&family.curve);
    let delta = &chars[matched_delta];
    let norm = Normalizer::new(family, analytic_d_fn, seed)?;
    let seeds = vec![RootOfUnity::one(2); 4];
    let result = norm.igusa_alpha(&seeds)?;
    let w_delta = family.delta_triple(delta, seed ^ 0xd5)?;
    let entries = norm.moduli_point(&result, &w_delta)?;

    let analytic = AnalyticWeilFamily::new(2, family.frame.tau.clone());
    let zero = vec![Complex::new(0.0, 0.0); 2];
    let mut theta_quotients = Vec::with_capacity(16);
    for rank in 0..16 {
        let chi = Characteristic::from_lpoint(&LPoint::from_lex_rank(family.ambient(), rank));
        theta_quotients.push(analytic.eval_raw(&chi, &zero)?);
    }
    let mut worst: f64 = 0.0;
    for (e, t) in entries.iter().zip(&theta_quotients) {
        worst = worst.max((e * e - t * t).norm());
    }
    Ok(ModuliComparison {
        entries,
        theta_quotients,
        worst,
        ambiguous: result.ambiguous.clone(),
    })
}

/// Determinant-vanishing construction: triples with `sum z ~ K + D_P + pt`
/// drive `det(h_i^P(z_j))` to zero while the reference determinant stays
/// order one. Returns (numerator ratios, denominator ratios) relative to
/// their Hadamard scales.
pub fn determinant_vanishing_ratios(
    family: &CurveWeilFamily,
    rank: usize,
    constructions: usize,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    use super::riemann_roch::{effective_representative, Niceness};
    use super::weil::divisor_to_triple;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let curve = &family.curve;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(constructions);
    let mut attempts = 0;
    while out.len() < constructions {
        attempts += 1;
        if attempts > 60 * constructions {
            return Err(CoreError::Invalid(
                "determinant-vanishing construction kept failing".into(),
            ));
        }
        // random extra point, then a triple in |K + D_P + pt|
        let x = Complex::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        if curve.is_weierstrass_x(x).is_some() {
            continue;
        }
        let y = curve.y_at(x) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let pt = super::CurvePoint::affine(x, y);
        let class = Divisor::canonical()
            .add(&family.divisors[rank])
            .add(&Divisor::single(pt, 1));
        let rep = match effective_representative(curve, &class, Niceness::strict(), rng.gen()) {
            Ok((rep, _)) => rep,
            Err(_) => continue,
        };
        let triple = match divisor_to_triple(&rep) {
            Ok(t) => t,
            Err(_) => continue,
        };
        let det_p = family.det_at(rank, &triple)?;
        let det_0 = family.det_at(0, &triple)?;
        let scale_p = family.det_scale(rank, &triple)?;
        let scale_0 = family.det_scale(0, &triple)?;
        out.push((det_p.norm() / scale_p, det_0.norm() / scale_0));
    }
    Ok(out)
}

/// Lattice residual of a vector (distance to the nearest lattice point in
/// lattice coordinates), used by tests.
pub fn lattice_residual(frame: &super::periods::JacobianFrame, z: &[Complex]) -> Result<f64> {
    let (p, q) = lattice_coordinates(&frame.tau, z)?;
    let mut r = 0.0_f64;
    for v in p.iter().chain(&q) {
        r = r.max((v - v.round()).abs());
    }
    Ok(r)
}
