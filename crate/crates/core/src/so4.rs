//! The su(2)⊕su(2) structure `S_a`, `τ_a` and the two helicity-type
//! operators `Λ1 = S·p/|p|`, `Λ2 = τ·p/|p|`.
//!
//! In the Dirac representation the bare generators are block diagonal,
//! `S_a = diag(σ_a/2, 0)` and `τ_a = diag(0, σ_a/2)`, and they do not commute
//! with `H`. The rotated variant conjugates them with the unitary `W(p)` that
//! takes `H` to `γ0E`, which makes them conserved.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::levi_civita;
use crate::matrix::{commutator, hermitian_eigen, inner, ComplexMatrix, I};
use crate::momentum::{energy_sign, fw_rotation, fw_rotation_residuals, hamiltonian, Momentum3, OperatorField, SPIN};
use crate::report::{anchor, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Bare matrices.
    Local,
    /// `W(p)† X W(p)` for every generator `X`.
    Rotated,
    /// Only `S_4a` conjugated by `W(p)`, the rotation part left bare. Kept as
    /// a diagnostic: it conserves `Λ1`, `Λ2` but breaks the algebra.
    RotatedBoostOnly,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Local => "local",
            Variant::Rotated => "rotated",
            Variant::RotatedBoostOnly => "rotated-boost-only",
        }
    }
}

/// `(½ε_abc S_bc, S_4a)` for axis `a`, the two pieces of both generators.
fn pieces(a: usize) -> (ComplexMatrix, ComplexMatrix) {
    let mut rot = ComplexMatrix::zeros(4);
    for b in 0..3 {
        for c in 0..3 {
            let e = levi_civita(a, b, c);
            if e != 0.0 {
                rot = rot + SPIN.s[b][c] * (0.5 * e);
            }
        }
    }
    (rot, SPIN.s4[a])
}

/// `S_a` (`tau = false`) or `τ_a` at `p`.
pub fn generator(variant: Variant, tau: bool, a: usize, p: &Momentum3) -> ComplexMatrix {
    let (rot, boost) = pieces(a);
    let sgn = if tau { -0.5 } else { 0.5 };
    match variant {
        Variant::Local => rot * 0.5 + boost * sgn,
        Variant::Rotated => {
            let w = fw_rotation(p);
            w.adjoint() * (rot * 0.5 + boost * sgn) * w
        }
        Variant::RotatedBoostOnly => {
            let w = fw_rotation(p);
            rot * 0.5 + w.adjoint() * boost * w * sgn
        }
    }
}

fn helicity_type(variant: Variant, tau: bool, p: &Momentum3) -> ComplexMatrix {
    let u = p.unit();
    (0..3).fold(ComplexMatrix::zeros(4), |acc, a| {
        acc + generator(variant, tau, a, p) * u[a]
    })
}

#[derive(Clone)]
pub struct So4Generators {
    pub variant: Variant,
    pub s: [OperatorField; 3],
    pub tau: [OperatorField; 3],
    pub lambda1: OperatorField,
    pub lambda2: OperatorField,
}

pub fn so4_generators(variant: Variant) -> So4Generators {
    let mk = |tau: bool, a: usize| {
        let nm = if tau { "τ" } else { "S" };
        OperatorField::new(format!("{nm}{} ({})", a + 1, variant.name()), move |p: &Momentum3| {
            generator(variant, tau, a, p)
        })
    };
    So4Generators {
        variant,
        s: [0, 1, 2].map(|a| mk(false, a)),
        tau: [0, 1, 2].map(|a| mk(true, a)),
        lambda1: OperatorField::new(format!("Λ1 ({})", variant.name()), move |p: &Momentum3| {
            helicity_type(variant, false, p)
        }),
        lambda2: OperatorField::new(format!("Λ2 ({})", variant.name()), move |p: &Momentum3| {
            helicity_type(variant, true, p)
        }),
    }
}

/// Largest residual of `[S_a,S_b] = iε_abc S_c`, `[τ_a,τ_b] = iε_abc τ_c`
/// and `[S_a,τ_b] = 0` at `p`.
pub fn structure_residual(g: &So4Generators, p: &Momentum3) -> f64 {
    let s: Vec<ComplexMatrix> = g.s.iter().map(|f| f.eval(p)).collect();
    let t: Vec<ComplexMatrix> = g.tau.iter().map(|f| f.eval(p)).collect();
    let mut worst: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            let mut es = ComplexMatrix::zeros(4);
            let mut et = ComplexMatrix::zeros(4);
            for c in 0..3 {
                let e = levi_civita(a, b, c);
                if e != 0.0 {
                    es = es + s[c] * I * e;
                    et = et + t[c] * I * e;
                }
            }
            worst = worst
                .max((commutator(&s[a], &s[b]) - es).op_norm())
                .max((commutator(&t[a], &t[b]) - et).op_norm())
                .max(commutator(&s[a], &t[b]).op_norm());
        }
    }
    worst
}

/// `(S·S, τ·τ)` at `p`.
pub fn casimirs(g: &So4Generators, p: &Momentum3) -> (ComplexMatrix, ComplexMatrix) {
    let sq = |fs: &[OperatorField; 3]| {
        fs.iter().fold(ComplexMatrix::zeros(4), |acc, f| {
            let m = f.eval(p);
            acc + m * m
        })
    };
    (sq(&g.s), sq(&g.tau))
}

/// `‖W H W† − γ0E‖/E` over the momenta; must be at roundoff before any
/// rotated-variant claim is trusted.
pub fn fw_gate(momenta: &[Momentum3]) -> (f64, f64) {
    momenta.iter().fold((0.0, 0.0), |(u, d), p| {
        let (a, b) = fw_rotation_residuals(p);
        (f64::max(u, a), f64::max(d, b))
    })
}

pub const FW_GATE_TOL: f64 = 1e-12;

/// Conservation of `Λ1`, `Λ2` and `Λ1 + Λ2`, plus the su(2)⊕su(2) algebra.
pub fn conservation_check(variant: Variant, momenta: &[Momentum3], tol: f64) -> VerificationReport {
    let g = so4_generators(variant);
    let name = variant.name();
    let mut rep = VerificationReport::new(format!("so4 {name}"));
    if variant != Variant::Local {
        let (u, d) = fw_gate(momenta);
        rep.record("‖W W† − 1‖ max", u, FW_GATE_TOL, anchor::SO4);
        if !rep.record("‖W H W† − γ0E‖/E max", d, FW_GATE_TOL, anchor::SO4) {
            return rep;
        }
    }
    let (mut c1, mut c2, mut csum, mut local_dev, mut alg): (f64, f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for p in momenta {
        let h = hamiltonian(p);
        let (l1, l2) = (g.lambda1.eval(p), g.lambda2.eval(p));
        let r1 = commutator(&h, &l1).op_norm() / p.energy();
        let r2 = commutator(&h, &l2).op_norm() / p.energy();
        c1 = c1.max(r1);
        c2 = c2.max(r2);
        csum = csum.max(commutator(&h, &(l1 + l2)).op_norm() / p.energy());
        local_dev = local_dev.max((r1 - 0.5).abs()).max((r2 - 0.5).abs());
        alg = alg.max(structure_residual(&g, p));
    }
    match variant {
        Variant::Local => {
            rep.record_expected_fail(format!("{name}: ‖[H, Λ1]‖/E = 0"), c1, tol, anchor::SO4);
            rep.record_expected_fail(format!("{name}: ‖[H, Λ2]‖/E = 0"), c2, tol, anchor::SO4);
            rep.record(
                format!("{name}: ‖[H, Λ1]‖ = ‖[H, Λ2]‖ = E/2"),
                local_dev,
                tol,
                anchor::SO4,
            );
            rep.record(
                format!("{name}: su(2)⊕su(2) structure constants"),
                alg,
                tol,
                anchor::SO4,
            );
        }
        Variant::Rotated => {
            rep.record(format!("{name}: ‖[H, Λ1]‖/E"), c1, tol, anchor::SO4);
            rep.record(format!("{name}: ‖[H, Λ2]‖/E"), c2, tol, anchor::SO4);
            rep.record(
                format!("{name}: su(2)⊕su(2) structure constants"),
                alg,
                tol,
                anchor::SO4,
            );
        }
        Variant::RotatedBoostOnly => {
            rep.record(format!("{name}: ‖[H, Λ1]‖/E"), c1, tol, anchor::SO4);
            rep.record(format!("{name}: ‖[H, Λ2]‖/E"), c2, tol, anchor::SO4);
            rep.record_expected_fail(
                format!("{name}: su(2)⊕su(2) structure constants"),
                alg,
                tol,
                anchor::SO4,
            );
        }
    }
    rep.record(format!("{name}: ‖[H, Λ1 + Λ2]‖/E"), csum, tol, anchor::SO4);
    rep
}

/// Joint label: energy sign and doubled `Λ1`, `Λ2` eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BranchLabel {
    pub energy_sign: i8,
    /// `2λ1 ∈ {−1, 0, 1}`.
    pub twice_lambda1: i8,
    pub twice_lambda2: i8,
}

impl std::fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let half = |x: i8| match x {
            0 => "0".to_string(),
            1 => "+1/2".to_string(),
            -1 => "−1/2".to_string(),
            _ => format!("{x}/2"),
        };
        let e = if self.energy_sign > 0 { "+" } else { "−" };
        write!(f, "D{e}({}, {})", half(self.twice_lambda1), half(self.twice_lambda2))
    }
}

impl BranchLabel {
    /// One of `λ1`, `λ2` zero and the other `±1/2`.
    pub fn is_massless_split(&self) -> bool {
        (self.twice_lambda1 == 0) != (self.twice_lambda2 == 0)
            && self.twice_lambda1.abs() + self.twice_lambda2.abs() == 1
    }
}

/// Joint spectral decomposition of `(ε̂, Λ1, Λ2)`: label → multiplicity.
pub fn branching_labels(variant: Variant, p: &Momentum3, tol: f64) -> Result<BTreeMap<BranchLabel, usize>> {
    let g = so4_generators(variant);
    let (eps, l1, l2) = (energy_sign(p), g.lambda1.eval(p), g.lambda2.eval(p));
    for (na, a, nb, b) in [("ε̂", &eps, "Λ1", &l1), ("ε̂", &eps, "Λ2", &l2), ("Λ1", &l1, "Λ2", &l2)] {
        let r = commutator(a, b).op_norm();
        if r > tol {
            return Err(Error::NonCommuting {
                name: na.to_string(),
                with: nb.to_string(),
                residual: r,
            });
        }
    }
    // Generic combination with distinct eigenvalues on all admissible labels.
    let combo = eps + l1 * 0.31 + l2 * 0.17;
    let mut out = BTreeMap::new();
    for (_, v) in hermitian_eigen(&combo, 1e-13)? {
        let ex = |m: &ComplexMatrix| inner(&v, &m.apply(&v)).re;
        let (e, a, b) = (ex(&eps), 2.0 * ex(&l1), 2.0 * ex(&l2));
        let label = BranchLabel {
            energy_sign: e.round() as i8,
            twice_lambda1: a.round() as i8,
            twice_lambda2: b.round() as i8,
        };
        let off = (e - e.round())
            .abs()
            .max((a - a.round()).abs())
            .max((b - b.round()).abs());
        if off > 1e-8 || label.energy_sign.abs() != 1 || label.twice_lambda1.abs() > 1 || label.twice_lambda2.abs() > 1
        {
            return Err(Error::InvalidConfig(format!(
                "joint eigenvector outside the label lattice ({e}, {a}/2, {b}/2)"
            )));
        }
        *out.entry(label).or_insert(0) += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::momentum::MomentumSampler;

    fn momenta(n: usize) -> Vec<Momentum3> {
        MomentumSampler::new(41, 0.1, 10.0).unwrap().take(n)
    }

    #[test]
    fn local_generators_are_block_diagonal() {
        let p = Momentum3::new(0.0, 0.0, 1.0).unwrap();
        let z2 = ComplexMatrix::zeros(2);
        for a in 0..3 {
            let s = crate::gamma::pauli(a) * 0.5;
            let want_s = ComplexMatrix::from_blocks(&s, &z2, &z2, &z2).unwrap();
            let want_t = ComplexMatrix::from_blocks(&z2, &z2, &z2, &s).unwrap();
            assert!(generator(Variant::Local, false, a, &p).distance(&want_s) < 1e-15);
            assert!(generator(Variant::Local, true, a, &p).distance(&want_t) < 1e-15);
        }
    }

    #[test]
    fn structure_constants() {
        for v in [Variant::Local, Variant::Rotated] {
            let g = so4_generators(v);
            for p in momenta(30) {
                assert!(structure_residual(&g, &p) < 1e-12, "{v:?}");
            }
        }
        let g = so4_generators(Variant::RotatedBoostOnly);
        assert!(structure_residual(&g, &Momentum3::new(0.3, 0.4, 0.5).unwrap()) > 0.1);
    }

    #[test]
    fn casimirs_and_traces() {
        for v in [Variant::Local, Variant::Rotated] {
            let g = so4_generators(v);
            let p = Momentum3::new(-0.6, 0.2, 1.4).unwrap();
            let (cs, ct) = casimirs(&g, &p);
            for c in [cs, ct] {
                let ev: Vec<f64> = hermitian_eigen(&c, 1e-13).unwrap().iter().map(|x| x.0).collect();
                for (x, y) in ev.iter().zip([0.0, 0.0, 0.75, 0.75]) {
                    assert!((x - y).abs() < 1e-12);
                }
            }
            assert!(g.lambda1.eval(&p).trace().norm() < 1e-14);
            assert!(g.lambda2.eval(&p).trace().norm() < 1e-14);
            let sum = g.lambda1.eval(&p) + g.lambda2.eval(&p);
            assert!(sum.distance(&(crate::momentum::spin_helicity(&p) * 0.5)) < 1e-13);
        }
    }

    #[test]
    fn local_fails_conservation_by_half_energy() {
        let p = Momentum3::new(1.0, -2.0, 2.0).unwrap();
        let g = so4_generators(Variant::Local);
        let r = commutator(&hamiltonian(&p), &g.lambda1.eval(&p)).op_norm();
        assert!((r - 1.5).abs() < 1e-13);
        let rep = conservation_check(Variant::Local, &momenta(20), 1e-10);
        assert!(rep.all_ok(), "{:#?}", rep.mismatches().collect::<Vec<_>>());
    }

    #[test]
    fn rotated_conserves() {
        let rep = conservation_check(Variant::Rotated, &momenta(50), 1e-10);
        assert!(rep.all_ok(), "{:#?}", rep.mismatches().collect::<Vec<_>>());
        let rep = conservation_check(Variant::RotatedBoostOnly, &momenta(10), 1e-10);
        assert!(rep.all_ok(), "{:#?}", rep.mismatches().collect::<Vec<_>>());
    }

    #[test]
    fn branching_pattern() {
        let mut first = None;
        for p in momenta(30) {
            let b = branching_labels(Variant::Rotated, &p, 1e-10).unwrap();
            assert_eq!(b.len(), 4);
            assert!(b.values().all(|&d| d == 1));
            assert!(b.keys().all(BranchLabel::is_massless_split));
            if let Some(f) = &first {
                assert_eq!(f, &b);
            } else {
                first = Some(b);
            }
        }
        // Λ1 lives on positive energy, Λ2 on negative energy
        for (l, _) in first.unwrap() {
            assert_eq!(l.twice_lambda1 != 0, l.energy_sign > 0);
        }
        let err = branching_labels(Variant::Local, &Momentum3::new(0.1, 0.2, 0.3).unwrap(), 1e-10);
        assert!(matches!(err, Err(Error::NonCommuting { .. })));
    }

    #[test]
    fn lambda_squares_have_quarter_spectrum() {
        let g = so4_generators(Variant::Rotated);
        for p in momenta(10) {
            for l in [g.lambda1.eval(&p), g.lambda2.eval(&p)] {
                for (x, _) in hermitian_eigen(&(l * l), 1e-13).unwrap() {
                    assert!(x.abs() < 1e-12 || (x - 0.25).abs() < 1e-12);
                }
            }
        }
    }
}
