//! Invariance of operator fields under the ten Poincaré generators.
//!
//! Generators are never built as differential operators. For a
//! multiplication operator `Q(p)`, with `x_a = i∂/∂p_a` in momentum space:
//!
//! * translations: `[p_a, Q] = 0` identically; time translation is `[H, Q]`;
//! * rotations: `[J_ab, Q] = [S_ab, Q] + i(p_b ∂_aQ − p_a ∂_bQ)`;
//! * boosts (at `[H, Q] = 0`): `[J_0a, Q] = −(i/2)([∂_aH, Q] + 2H ∂_aQ)`.
//!
//! The `t·p_a` term of `J_0a` commutes with every multiplication operator and
//! contributes nothing. Residuals use the spectral norm.

use crate::error::{Error, Result};
use crate::matrix::{commutator, ComplexMatrix, I};
use crate::momentum::{hamiltonian, Axis, Momentum3, OperatorField, GAMMA, SPIN};
use crate::report::{anchor, VerificationReport};

/// How `∂Q/∂p_a` is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Derivative {
    /// Central difference with step `h·|p|`.
    Central(f64),
    /// The field's analytic derivative; falls back to an error if absent.
    Analytic,
}

fn gradient(q: &OperatorField, p: &Momentum3, axis: Axis, mode: Derivative) -> Result<ComplexMatrix> {
    match mode {
        Derivative::Central(h) => q.central_difference(p, axis, h),
        Derivative::Analytic => q.derivative(p, axis).ok_or(Error::DegenerateStep(0.0)),
    }
}

/// `‖[H(p), Q(p)]‖`.
pub fn translation_check(q: &OperatorField, p: &Momentum3) -> f64 {
    commutator(&hamiltonian(p), &q.eval(p)).op_norm()
}

/// `‖[S_ab, Q] + i(p_b ∂_aQ − p_a ∂_bQ)‖`.
pub fn rotation_check(q: &OperatorField, p: &Momentum3, a: Axis, b: Axis, mode: Derivative) -> Result<f64> {
    if a == b {
        return Err(Error::DegenerateAxes);
    }
    let s_ab = SPIN.s[a.index()][b.index()];
    let da = gradient(q, p, a, mode)?;
    let db = gradient(q, p, b, mode)?;
    let orbital = (da * p.component(b) - db * p.component(a)) * I;
    Ok((commutator(&s_ab, &q.eval(p)) + orbital).op_norm())
}

/// `‖[∂_aH, Q] + 2H ∂_aQ‖` with `∂_aH = γ0γa`.
pub fn boost_check(q: &OperatorField, p: &Momentum3, a: Axis, mode: Derivative) -> Result<f64> {
    let da = gradient(q, p, a, mode)?;
    let r = commutator(&GAMMA.alpha[a.index()], &q.eval(p)) + hamiltonian(p) * da * 2.0;
    Ok(r.op_norm())
}

pub const ROTATION_PLANES: [(Axis, Axis); 3] = [(Axis::X, Axis::Y), (Axis::Y, Axis::Z), (Axis::Z, Axis::X)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceResiduals {
    /// `[H, Q]`; spatial translations vanish identically.
    pub translation: f64,
    /// Planes (1,2), (2,3), (3,1).
    pub rotation: [f64; 3],
    pub boost: [f64; 3],
    /// Finite-difference step, or `None` for analytic derivatives.
    pub step: Option<f64>,
}

impl InvarianceResiduals {
    pub fn max_rotation(&self) -> f64 {
        self.rotation.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_boost(&self) -> f64 {
        self.boost.iter().cloned().fold(0.0, f64::max)
    }
}

pub fn residuals(q: &OperatorField, p: &Momentum3, mode: Derivative) -> Result<InvarianceResiduals> {
    let mut rotation = [0.0; 3];
    for (k, &(a, b)) in ROTATION_PLANES.iter().enumerate() {
        rotation[k] = rotation_check(q, p, a, b, mode)?;
    }
    let mut boost = [0.0; 3];
    for a in Axis::ALL {
        boost[a.index()] = boost_check(q, p, a, mode)?;
    }
    Ok(InvarianceResiduals {
        translation: translation_check(q, p),
        rotation,
        boost,
        step: match mode {
            Derivative::Central(h) => Some(h),
            Derivative::Analytic => None,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings {
    pub h: f64,
    pub tol_fd: f64,
    pub tol_exact: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            h: 1e-4,
            tol_fd: 1e-6,
            tol_exact: 1e-10,
        }
    }
}

/// Aggregated sweep numbers, kept alongside the report for callers that
/// need the raw maxima (negative controls, convergence diagnostics).
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub report: VerificationReport,
    pub max_translation: f64,
    pub max_rotation: f64,
    pub max_boost: f64,
    /// `Σ r(h) / Σ r(h/2)`; `None` when the residuals are at roundoff.
    pub rotation_ratio: Option<f64>,
    pub boost_ratio: Option<f64>,
}

impl SweepOutcome {
    pub fn max_residual(&self) -> f64 {
        self.max_translation.max(self.max_rotation).max(self.max_boost)
    }
}

/// Central differences of an `O(1)` field lose about `ε/h` to roundoff; per
/// residual below this multiple of that level there is no order-of-accuracy
/// information.
const ROUNDOFF_MULTIPLE: f64 = 100.0;

pub const CONVERGENCE_BAND: (f64, f64) = (3.0, 5.0);

pub fn sweep(q: &OperatorField, momenta: &[Momentum3], settings: SweepSettings) -> Result<SweepOutcome> {
    if momenta.is_empty() {
        return Err(Error::InvalidConfig(
            "invariance sweep needs at least one momentum".into(),
        ));
    }
    let h = settings.h;
    let mut max_t: f64 = 0.0;
    let (mut max_r, mut max_b): (f64, f64) = (0.0, 0.0);
    let (mut sum_r, mut sum_r_half, mut sum_b, mut sum_b_half) = (0.0, 0.0, 0.0, 0.0);
    let (mut max_r_an, mut max_b_an): (f64, f64) = (0.0, 0.0);
    for p in momenta {
        let full = residuals(q, p, Derivative::Central(h))?;
        let half = residuals(q, p, Derivative::Central(h / 2.0))?;
        max_t = max_t.max(full.translation);
        max_r = max_r.max(full.max_rotation());
        max_b = max_b.max(full.max_boost());
        sum_r += full.rotation.iter().sum::<f64>();
        sum_r_half += half.rotation.iter().sum::<f64>();
        sum_b += full.boost.iter().sum::<f64>();
        sum_b_half += half.boost.iter().sum::<f64>();
        if q.has_derivative() {
            let an = residuals(q, p, Derivative::Analytic)?;
            max_r_an = max_r_an.max(an.max_rotation());
            max_b_an = max_b_an.max(an.max_boost());
        }
    }
    let floor = ROUNDOFF_MULTIPLE * f64::EPSILON / (h / 2.0) * (3 * momenta.len()) as f64;
    let ratio = |full: f64, half: f64| if half > floor { Some(full / half) } else { None };
    let rotation_ratio = ratio(sum_r, sum_r_half);
    let boost_ratio = ratio(sum_b, sum_b_half);

    let name = q.name();
    let mut rep = VerificationReport::new(format!("invariance {name}"));
    rep.record(
        format!("{name}: time translation ‖[H,Q]‖ max"),
        max_t,
        settings.tol_exact,
        anchor::POINCARE,
    );
    rep.record(
        format!("{name}: rotation residual max, h={h:e}"),
        max_r,
        settings.tol_fd,
        anchor::POINCARE,
    );
    rep.record(
        format!("{name}: boost residual max, h={h:e}"),
        max_b,
        settings.tol_fd,
        anchor::POINCARE,
    );
    for (label, r) in [("rotation", rotation_ratio), ("boost", boost_ratio)] {
        let (lo, hi) = CONVERGENCE_BAND;
        let mid = 0.5 * (lo + hi);
        match r {
            Some(x) => rep.record(
                format!("{name}: {label} convergence factor under h→h/2 = {x:.4}"),
                (x - mid).abs(),
                0.5 * (hi - lo),
                anchor::POINCARE,
            ),
            None => rep.record(
                format!("{name}: {label} convergence factor (residuals at roundoff)"),
                0.0,
                0.5 * (hi - lo),
                anchor::POINCARE,
            ),
        };
    }
    if q.has_derivative() {
        rep.record(
            format!("{name}: rotation residual max, analytic ∂"),
            max_r_an,
            settings.tol_exact,
            anchor::POINCARE,
        );
        rep.record(
            format!("{name}: boost residual max, analytic ∂"),
            max_b_an,
            settings.tol_exact,
            anchor::POINCARE,
        );
    }
    Ok(SweepOutcome {
        report: rep,
        max_translation: max_t,
        max_rotation: max_r,
        max_boost: max_b,
        rotation_ratio,
        boost_ratio,
    })
}

/// PASS iff all residuals are within tolerance and finite-difference
/// residuals converge quadratically.
pub fn full_invariance_sweep(
    q: &OperatorField,
    momenta: &[Momentum3],
    settings: SweepSettings,
) -> Result<VerificationReport> {
    sweep(q, momenta, settings).map(|o| o.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{ComplexVector, ZERO};
    use crate::momentum::{energy_sign_field, minimal_projector_field, projector_field, Family, MomentumSampler, Sign};
    use num_complex::Complex64;

    fn momenta(n: usize) -> Vec<Momentum3> {
        MomentumSampler::new(3, 0.5, 2.0).unwrap().take(n)
    }

    #[test]
    fn translation_examples() {
        let p = Momentum3::new(0.3, 0.4, 1.2).unwrap();
        assert!(translation_check(&projector_field(Family::EnergySign, Sign::Plus), &p) < 1e-14);
        assert!(translation_check(&OperatorField::constant("1", ComplexMatrix::identity(4)), &p) == 0.0);
        let g0 = OperatorField::constant("γ0", GAMMA.gamma[0]);
        assert!((translation_check(&g0, &p) - 2.0 * p.energy()).abs() < 1e-13);
    }

    #[test]
    fn rotation_examples() {
        let p = Momentum3::new(0.3, -0.4, 1.2).unwrap();
        let eps = energy_sign_field();
        let r1 = rotation_check(&eps, &p, Axis::X, Axis::Y, Derivative::Central(1e-3)).unwrap();
        let r2 = rotation_check(&eps, &p, Axis::X, Axis::Y, Derivative::Central(5e-4)).unwrap();
        assert!(r1 < 1e-5 && (3.0..5.0).contains(&(r1 / r2)), "{r1} {r2}");
        let p1 = projector_field(Family::Chirality, Sign::Plus);
        for &(a, b) in &ROTATION_PLANES {
            assert_eq!(rotation_check(&p1, &p, a, b, Derivative::Central(1e-4)).unwrap(), 0.0);
        }
        let bad = OperatorField::new("γ1 p1", |p: &Momentum3| GAMMA.gamma[1] * p.component(Axis::X));
        let worst = ROTATION_PLANES
            .iter()
            .map(|&(a, b)| rotation_check(&bad, &p, a, b, Derivative::Central(1e-4)).unwrap())
            .fold(0.0, f64::max);
        assert!(worst > 0.1);
        assert_eq!(
            rotation_check(&eps, &p, Axis::X, Axis::X, Derivative::Analytic),
            Err(Error::DegenerateAxes)
        );
    }

    #[test]
    fn boost_examples() {
        let p = Momentum3::new(-0.8, 0.1, 0.5).unwrap();
        for q in [energy_sign_field(), projector_field(Family::Helicity, Sign::Plus)] {
            for a in Axis::ALL {
                assert!(boost_check(&q, &p, a, Derivative::Analytic).unwrap() < 1e-14);
                assert!(boost_check(&q, &p, a, Derivative::Central(1e-4)).unwrap() < 1e-6);
            }
        }
        let spin = OperatorField::constant("Σ3/2", SPIN.sigma[2] * 0.5);
        let worst = Axis::ALL
            .iter()
            .map(|&a| boost_check(&spin, &p, a, Derivative::Analytic).unwrap())
            .fold(0.0, f64::max);
        assert!(worst > 0.1);
    }

    // Independent route: apply x_a = i∂/∂p_a to an explicit spinor test
    // function by finite differences and build the generator commutators
    // from their definitions.
    fn test_spinor(p: &Momentum3) -> ComplexVector {
        let [a, b, c] = *p.components();
        let g = (-(a * a + b * b + c * c) / 2.0).exp();
        vec![
            Complex64::new(g * (1.0 + a), 0.3 * b),
            Complex64::new(0.2 * c, g),
            Complex64::new(g * b, -0.5 * a * g),
            Complex64::new(1.0 - c * g, 0.1),
        ]
    }

    fn x_apply(f: &dyn Fn(&Momentum3) -> ComplexVector, p: &Momentum3, a: Axis) -> ComplexVector {
        let d = 1e-5;
        let fp = f(&p.shifted(a, d).unwrap());
        let fm = f(&p.shifted(a, -d).unwrap());
        fp.iter()
            .zip(&fm)
            .map(|(x, y)| (x - y) * Complex64::new(0.0, 1.0 / (2.0 * d)))
            .collect()
    }

    fn boost_apply(f: &dyn Fn(&Momentum3) -> ComplexVector, p: &Momentum3, a: Axis) -> ComplexVector {
        // J_0a at t = 0: −½(x_a H + H x_a)
        let hf = |k: &Momentum3| hamiltonian(k).apply(&f(k));
        let t1 = x_apply(&hf, p, a);
        let t2 = hamiltonian(p).apply(&x_apply(f, p, a));
        t1.iter().zip(&t2).map(|(x, y)| (x + y) * -0.5).collect()
    }

    fn rotation_apply(f: &dyn Fn(&Momentum3) -> ComplexVector, p: &Momentum3, a: Axis, b: Axis) -> ComplexVector {
        let xa = x_apply(f, p, a);
        let xb = x_apply(f, p, b);
        let s = SPIN.s[a.index()][b.index()].apply(&f(p));
        (0..4)
            .map(|i| xa[i] * p.component(b) - xb[i] * p.component(a) + s[i])
            .collect()
    }

    fn diff(u: &[Complex64], v: &[Complex64]) -> f64 {
        u.iter().zip(v).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn boost_reduction_matches_generator_definition() {
        let p = Momentum3::new(0.4, -0.7, 0.9).unwrap();
        for q in [energy_sign_field(), minimal_projector_field(Sign::Plus, Sign::Minus)] {
            for a in Axis::ALL {
                let qf = |k: &Momentum3| q.eval(k).apply(&test_spinor(k));
                let lhs: ComplexVector = {
                    let j_q = boost_apply(&qf, &p, a);
                    let q_j = q.eval(&p).apply(&boost_apply(&test_spinor, &p, a));
                    j_q.iter().zip(&q_j).map(|(x, y)| x - y).collect()
                };
                let da = q.derivative(&p, a).unwrap();
                let reduced = (commutator(&GAMMA.alpha[a.index()], &q.eval(&p)) + hamiltonian(&p) * da * 2.0)
                    * Complex64::new(0.0, -0.5);
                let rhs = reduced.apply(&test_spinor(&p));
                assert!(diff(&lhs, &rhs) < 1e-8, "{} axis {a}: {}", q.name(), diff(&lhs, &rhs));
            }
        }
        // The reduction needs [H, Q] = 0: for Σ3/2 the full commutator has an
        // extra x_a[H,Q] + [H,Q]x_a piece, and both forms are nonzero.
        let spin = OperatorField::constant("Σ3/2", SPIN.sigma[2] * 0.5);
        let qf = |k: &Momentum3| spin.eval(k).apply(&test_spinor(k));
        let j_q = boost_apply(&qf, &p, Axis::X);
        let q_j = spin.eval(&p).apply(&boost_apply(&test_spinor, &p, Axis::X));
        let full: ComplexVector = j_q.iter().zip(&q_j).map(|(x, y)| x - y).collect();
        assert!(diff(&full, &[ZERO; 4]) > 0.1);
        assert!(boost_check(&spin, &p, Axis::X, Derivative::Analytic).unwrap() > 0.1);
    }

    #[test]
    fn rotation_functional_matches_generator_definition() {
        let p = Momentum3::new(0.4, -0.7, 0.9).unwrap();
        let bad = OperatorField::new("γ1 p1", |k: &Momentum3| GAMMA.gamma[1] * k.component(Axis::X)).with_derivative(
            |_, ax| {
                if ax == Axis::X {
                    GAMMA.gamma[1]
                } else {
                    ComplexMatrix::zeros(4)
                }
            },
        );
        for q in [energy_sign_field(), bad] {
            for &(a, b) in &ROTATION_PLANES {
                let qf = |k: &Momentum3| q.eval(k).apply(&test_spinor(k));
                let j_q = rotation_apply(&qf, &p, a, b);
                let q_j = q.eval(&p).apply(&rotation_apply(&test_spinor, &p, a, b));
                let lhs: ComplexVector = j_q.iter().zip(&q_j).map(|(x, y)| x - y).collect();
                let da = q.derivative(&p, a).unwrap();
                let db = q.derivative(&p, b).unwrap();
                let op = commutator(&SPIN.s[a.index()][b.index()], &q.eval(&p))
                    + (da * p.component(b) - db * p.component(a)) * I;
                assert!(diff(&lhs, &op.apply(&test_spinor(&p))) < 1e-8);
            }
        }
    }

    #[test]
    fn paper_projectors_pass_sweep() {
        let ks = momenta(12);
        for f in Family::ALL {
            for s in Sign::BOTH {
                let rep = full_invariance_sweep(&projector_field(f, s), &ks, SweepSettings::default()).unwrap();
                assert!(rep.all_ok(), "{:#?}", rep.mismatches().collect::<Vec<_>>());
            }
        }
        let rep = full_invariance_sweep(
            &minimal_projector_field(Sign::Plus, Sign::Plus),
            &ks,
            SweepSettings::default(),
        )
        .unwrap();
        assert!(rep.all_ok());
    }

    #[test]
    fn gamma0_field_fails_on_translation() {
        let ks = momenta(4);
        let out = sweep(
            &OperatorField::constant("γ0", GAMMA.gamma[0]),
            &ks,
            SweepSettings::default(),
        )
        .unwrap();
        assert!(!out.report.passed());
        let emax = ks.iter().map(|k| k.energy()).fold(0.0, f64::max);
        assert!((out.max_translation - 2.0 * emax).abs() < 1e-12);
    }

    #[test]
    fn empty_sweep_rejected() {
        assert!(sweep(&energy_sign_field(), &[], SweepSettings::default()).is_err());
    }
}
