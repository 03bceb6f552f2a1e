//! Hamiltonians with a nilpotent anticommuting perturbation and the
//! non-unitary maps `V` that take them back to Dirac (4-component) or Weyl
//! (2-component) form.
//!
//! With `K = α·p` (or `σ·p`), `ΛK = −KΛ` and `Λ² = 0`:
//! `V = 1 − KΛ/(2E²)`, `V⁻¹ = 1 + KΛ/(2E²)`, `V K V⁻¹ = K + Λ`. The perturbed
//! Hamiltonian is Hermitian for the weight `M = (V⁻¹)†V⁻¹`.

use std::fmt;

use num_complex::Complex64;

use crate::discrete::{
    classification_table, classification_table_with, table_ops, ClassificationTable, EquationSystem, PlaneWaveAction,
    SymmetryOp,
};
use crate::error::{Error, Result};
use crate::gamma::sigma_dot;
use crate::matrix::{anticommutator, hermitian_eigen, kernel_basis, ComplexMatrix, ComplexVector};
use crate::momentum::{hamiltonian, projector, Family, Momentum3, OperatorField, Sign, GAMMA};
use crate::report::{anchor, VerificationReport};

#[derive(Clone)]
pub struct NilpotentGenerator {
    pub name: String,
    /// 2 or 4.
    pub dim: usize,
    pub kappa: f64,
    pub field: OperatorField,
}

impl fmt::Debug for NilpotentGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {}, κ={})", self.name, self.dim, self.kappa)
    }
}

/// `α·p` in four dimensions, `σ·p` in two.
pub fn kinetic(dim: usize, p: &Momentum3) -> Result<ComplexMatrix> {
    match dim {
        4 => Ok(hamiltonian(p)),
        2 => Ok(sigma_dot(p.components())),
        d => Err(Error::InvalidDimension(d)),
    }
}

impl NilpotentGenerator {
    /// User-supplied generator; validated on use.
    pub fn new(name: impl Into<String>, dim: usize, kappa: f64, field: OperatorField) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self {
            name: name.into(),
            dim,
            kappa,
            field,
        })
    }

    /// `(‖Λ²‖, ‖{K, Λ}‖)` relative to `‖Λ‖²` and `E‖Λ‖`.
    pub fn invariant_residuals(&self, p: &Momentum3) -> Result<(f64, f64)> {
        let l = self.field.eval(p);
        if l.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: l.dim(),
            });
        }
        let k = kinetic(self.dim, p)?;
        let n = l.op_norm().max(f64::MIN_POSITIVE);
        Ok((
            (l * l).op_norm() / (n * n),
            anticommutator(&k, &l).op_norm() / (p.energy() * n),
        ))
    }

    pub fn validate(&self, p: &Momentum3, tol: f64) -> Result<()> {
        let (sq, ac) = self.invariant_residuals(p)?;
        if sq > tol {
            return Err(Error::GeneratorInvariant {
                name: self.name.clone(),
                invariant: "Λ² = 0",
                residual: sq,
            });
        }
        if ac > tol {
            return Err(Error::GeneratorInvariant {
                name: self.name.clone(),
                invariant: "{K, Λ} = 0",
                residual: ac,
            });
        }
        Ok(())
    }

    /// `K + Λ`.
    pub fn perturbed(&self, p: &Momentum3) -> ComplexMatrix {
        kinetic(self.dim, p).expect("validated dimension") + self.field.eval(p)
    }

    pub fn perturbed_field(&self) -> OperatorField {
        let g = self.clone();
        OperatorField::new(format!("K + {}", self.name), move |p: &Momentum3| g.perturbed(p))
    }

    fn v_pair(&self, p: &Momentum3) -> (ComplexMatrix, ComplexMatrix) {
        let e2 = p.energy() * p.energy();
        let kl = kinetic(self.dim, p).expect("validated dimension") * self.field.eval(p) * (0.5 / e2);
        let id = ComplexMatrix::identity(self.dim);
        (id - kl, id + kl)
    }
}

/// Unit vector orthogonal to `p`: the normalized cross product of `p̂` with
/// the coordinate axis along which `p̂` is smallest.
pub fn orthogonal_unit(p: &Momentum3) -> [f64; 3] {
    let u = p.unit();
    let k = (0..3)
        .min_by(|&a, &b| u[a].abs().total_cmp(&u[b].abs()))
        .expect("three axes");
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let c = [
        u[1] * e[2] - u[2] * e[1],
        u[2] * e[0] - u[0] * e[2],
        u[0] * e[1] - u[1] * e[0],
    ];
    let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    c.map(|x| x / n)
}

pub fn lambda_generator(sign: Sign, kappa: f64) -> NilpotentGenerator {
    let field = OperatorField::new(format!("{kappa}·γ0P3{}", sign.symbol()), move |p: &Momentum3| {
        GAMMA.gamma[0] * projector(Family::EnergySign, sign, p) * kappa
    });
    NilpotentGenerator {
        name: format!("Λ = κγ0P3{}", sign.symbol()),
        dim: 4,
        kappa,
        field,
    }
}

pub fn b_generator(sign: Sign, kappa: f64) -> NilpotentGenerator {
    let field = OperatorField::new(format!("{kappa}·(σ·u)q{}", sign.symbol()), move |p: &Momentum3| {
        let s = sign.value();
        let q = (ComplexMatrix::identity(2) + sigma_dot(p.components()) * (s / p.energy())) * 0.5;
        sigma_dot(&orthogonal_unit(p)) * q * kappa
    });
    NilpotentGenerator {
        name: format!("B = κ(σ·u)q{}", sign.symbol()),
        dim: 2,
        kappa,
        field,
    }
}

/// Both sign choices of the canonical generator, validated on a fixed probe
/// set before being returned.
pub fn canonical_nilpotents(dim: usize, kappa: f64) -> Result<Vec<NilpotentGenerator>> {
    let gens: Vec<NilpotentGenerator> = match dim {
        4 => Sign::BOTH.iter().map(|&s| lambda_generator(s, kappa)).collect(),
        2 => Sign::BOTH.iter().map(|&s| b_generator(s, kappa)).collect(),
        d => return Err(Error::InvalidDimension(d)),
    };
    let probes = [
        Momentum3::new(0.0, 0.0, 1.0)?,
        Momentum3::new(0.3, -1.2, 0.5)?,
        Momentum3::new(-4.0, 2.0, 7.0)?,
    ];
    for g in &gens {
        for p in &probes {
            if kappa != 0.0 {
                g.validate(p, 1e-12)?;
            }
        }
    }
    Ok(gens)
}

/// `(V, V⁻¹)` at `p`; the generator invariants are checked first.
pub fn v_transform(gen: &NilpotentGenerator, p: &Momentum3) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if gen.kappa != 0.0 {
        gen.validate(p, 1e-10)?;
    }
    Ok(gen.v_pair(p))
}

fn rel(r: ComplexMatrix, scale: f64) -> f64 {
    r.op_norm() / scale.max(f64::MIN_POSITIVE)
}

pub fn similarity_check(gen: &NilpotentGenerator, momenta: &[Momentum3], tol: f64) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(format!("similarity {}, κ = {}", gen.name, gen.kappa));
    let (mut inv, mut nil, mut sim, mut unit, mut gen_inv): (f64, f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for p in momenta {
        let (v, vi) = v_transform(gen, p)?;
        let id = ComplexMatrix::identity(gen.dim);
        let k = kinetic(gen.dim, p)?;
        let kl = k * gen.field.eval(p);
        let (sq, ac) = gen.invariant_residuals(p)?;
        gen_inv = gen_inv.max(if gen.kappa == 0.0 { 0.0 } else { sq.max(ac) });
        nil = nil.max(rel(kl * kl, kl.op_norm().powi(2).max(1.0)));
        inv = inv
            .max(rel(v * vi - id, v.op_norm() * vi.op_norm()))
            .max(rel(vi * v - id, v.op_norm() * vi.op_norm()));
        let lhs = v * k * vi;
        sim = sim.max(rel(lhs - gen.perturbed(p), v.op_norm() * k.op_norm() * vi.op_norm()));
        unit = unit.max((v.adjoint() * v - id).op_norm());
    }
    rep.record("generator: Λ² = 0, {K, Λ} = 0", gen_inv, tol, anchor::NILPOTENT);
    rep.record("(KΛ)² = 0", nil, tol, anchor::NILPOTENT);
    rep.record("V V⁻¹ = V⁻¹ V = 1", inv, tol, anchor::NILPOTENT);
    rep.record("V K V⁻¹ = K + Λ", sim, tol, anchor::NILPOTENT);
    if gen.kappa == 0.0 {
        rep.record("V = 1 at κ = 0", unit, tol, anchor::NILPOTENT);
    } else {
        rep.record_expected_fail("V unitary", unit, tol, anchor::NILPOTENT);
    }
    Ok(rep)
}

/// `M = (V⁻¹)†V⁻¹`.
pub fn metric_weight(gen: &NilpotentGenerator, p: &Momentum3) -> Result<ComplexMatrix> {
    let (_, vi) = v_transform(gen, p)?;
    Ok(vi.adjoint() * vi)
}

pub fn pseudo_hermiticity_check(
    gen: &NilpotentGenerator,
    momenta: &[Momentum3],
    tol: f64,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(format!("pseudo-hermiticity {}, κ = {}", gen.name, gen.kappa));
    let (mut ph, mut herm, mut sq): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut min_eig = f64::INFINITY;
    let mut spec_ok = true;
    let per_sign = gen.dim / 2;
    for p in momenta {
        let m = metric_weight(gen, p)?;
        let hp = gen.perturbed(p);
        ph = ph.max(rel(m * hp - hp.adjoint() * m, m.op_norm() * hp.op_norm()));
        herm = herm.max(hp.hermiticity_residual() / p.energy());
        let e = p.energy();
        sq = sq.max(rel(
            hp * hp - ComplexMatrix::identity(gen.dim) * (e * e),
            hp.op_norm().powi(2),
        ));
        let mh = (m + m.adjoint()) * 0.5;
        let ev = hermitian_eigen(&mh, 1e-14)?;
        min_eig = min_eig.min(ev[0].0 / ev[ev.len() - 1].0);
        let id = ComplexMatrix::identity(gen.dim);
        for omega in [e, -e] {
            spec_ok &= kernel_basis(&(hp - id * omega), 1e-8).dim() == per_sign;
        }
    }
    rep.record("M H_Φ = H_Φ† M", ph, tol, anchor::SCALAR_PRODUCT);
    rep.record_flag("M positive definite", min_eig > 0.0, anchor::SCALAR_PRODUCT);
    if gen.kappa == 0.0 {
        rep.record("H_Φ Hermitian at κ = 0", herm, tol, anchor::SCALAR_PRODUCT);
    } else {
        rep.record_expected_fail("H_Φ Hermitian in the plain product", herm, tol, anchor::SCALAR_PRODUCT);
    }
    rep.record("H_Φ² = E²", sq, tol, anchor::NILPOTENT);
    rep.record_flag(
        format!("dim ker(H_Φ ∓ E) = {per_sign} each"),
        spec_ok,
        anchor::NILPOTENT,
    );
    Ok(rep)
}

/// A symmetry operator carried over to the perturbed representation:
/// `Φ ↦ V(s_p p) M (V⁻¹(p) Φ)^{(*)}` for data at source momentum `p`.
#[derive(Clone)]
pub struct TransformedOp {
    pub base: SymmetryOp,
    pub generator: NilpotentGenerator,
    name: String,
}

impl fmt::Debug for TransformedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} under {:?}", self.base.name, self.generator)
    }
}

pub fn transformed_discrete_ops(gen: &NilpotentGenerator, ops: &[SymmetryOp]) -> Vec<TransformedOp> {
    ops.iter()
        .map(|o| TransformedOp {
            base: o.clone(),
            generator: gen.clone(),
            name: o.name.clone(),
        })
        .collect()
}

impl PlaneWaveAction for TransformedOp {
    fn name(&self) -> &str {
        &self.name
    }

    fn conjugates(&self) -> bool {
        self.base.conjugates
    }

    fn momentum_sign(&self) -> Sign {
        self.base.momentum_sign
    }

    fn frequency_sign(&self) -> Sign {
        self.base.frequency_sign
    }

    fn act(&self, source: &Momentum3, v: &[Complex64]) -> ComplexVector {
        let target = source.signed(self.base.momentum_sign.value());
        let (_, vi_src) = self.generator.v_pair(source);
        let (v_tgt, _) = self.generator.v_pair(&target);
        let psi = vi_src.apply(v);
        v_tgt.apply(&self.base.act(source, &psi))
    }
}

/// Equation system in the perturbed representation: `H_Φ = H + Λ`, and the
/// constraint `V Q V⁻¹`.
pub fn phi_system(gen: &NilpotentGenerator, constraint: Option<(Family, Sign)>) -> EquationSystem {
    let g = gen.clone();
    let q = constraint.map(|(f, s)| {
        let g = gen.clone();
        OperatorField::new(
            format!("V P{}{} V⁻¹", f.number(), s.symbol()),
            move |p: &Momentum3| {
                let (v, vi) = g.v_pair(p);
                v * projector(f, s, p) * vi
            },
        )
    });
    let name = match constraint {
        None => "unconstrained (Φ)".to_string(),
        Some((f, s)) => format!("V P{}{} V⁻¹ = 0 (Φ)", f.number(), s.symbol()),
    };
    EquationSystem::new(name, g.perturbed_field(), q)
}

pub fn phi_classification_table(
    gen: &NilpotentGenerator,
    momenta: &[Momentum3],
    tol: f64,
) -> Result<ClassificationTable> {
    if gen.dim != 4 {
        return Err(Error::InvalidDimension(gen.dim));
    }
    let ops = transformed_discrete_ops(gen, &table_ops());
    let dyn_ops: Vec<&dyn PlaneWaveAction> = ops.iter().map(|o| o as &dyn PlaneWaveAction).collect();
    classification_table_with(&|c| phi_system(gen, c), &dyn_ops, momenta, tol)
}

/// Cells where the two tables disagree, as `(row, column)`.
pub fn table_mismatches(a: &ClassificationTable, b: &ClassificationTable) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for ra in &a.rows {
        for (op, va) in &ra.verdicts {
            let vb = b.row(&ra.label).map(|rb| rb.verdict(op));
            if vb != Some(*va) {
                out.push((ra.label.clone(), op.clone()));
            }
        }
    }
    out
}

/// Ψ and Φ tables compared for generator `gen`.
pub fn classification_invariance_check(
    gen: &NilpotentGenerator,
    momenta: &[Momentum3],
    tol: f64,
) -> Result<VerificationReport> {
    let psi = classification_table(momenta, tol)?;
    let phi = phi_classification_table(gen, momenta, tol)?;
    let mut rep = VerificationReport::new(format!("transformed C/P/T {}, κ = {}", gen.name, gen.kappa));
    let mism = table_mismatches(&psi, &phi);
    rep.record_count(
        "Φ table cells differing from Ψ table",
        mism.len(),
        0,
        anchor::TRANSFORMED_OPS,
    );
    rep.record_flag(
        "Φ table verdicts consistent across signs and momenta",
        phi.rows.iter().all(|r| r.consistent()),
        anchor::TRANSFORMED_OPS,
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::{parity, preserves_solutions};
    use crate::momentum::MomentumSampler;

    fn momenta(n: usize) -> Vec<Momentum3> {
        MomentumSampler::new(51, 0.1, 10.0).unwrap().take(n)
    }

    #[test]
    fn canonical_generators_satisfy_invariants() {
        for dim in [2, 4] {
            for k in [1.0, -3.0] {
                for g in canonical_nilpotents(dim, k).unwrap() {
                    for p in momenta(30) {
                        let (a, b) = g.invariant_residuals(&p).unwrap();
                        assert!(a < 1e-13 && b < 1e-13, "{g:?}: {a} {b}");
                    }
                }
            }
        }
        let z = &canonical_nilpotents(4, 0.0).unwrap()[0];
        assert!(z.field.eval(&momenta(1)[0]).is_zero(0.0));
    }

    #[test]
    fn orthogonal_unit_is_orthonormal() {
        for p in momenta(50) {
            let u = orthogonal_unit(&p);
            let d: f64 = (0..3).map(|a| u[a] * p.components()[a]).sum();
            assert!(d.abs() < 1e-12 * p.energy());
            assert!(((u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn bad_generator_rejected() {
        let g = NilpotentGenerator::new("γ0", 4, 1.0, OperatorField::constant("γ0", GAMMA.gamma[0])).unwrap();
        let p = Momentum3::new(0.0, 1.0, 0.0).unwrap();
        match v_transform(&g, &p) {
            Err(Error::GeneratorInvariant { invariant, .. }) => assert_eq!(invariant, "Λ² = 0"),
            other => panic!("{other:?}"),
        }
        assert!(NilpotentGenerator::new("x", 3, 1.0, OperatorField::constant("0", ComplexMatrix::zeros(3))).is_err());
    }

    #[test]
    fn kappa_zero_is_identity() {
        let g = lambda_generator(Sign::Plus, 0.0);
        let p = Momentum3::new(0.3, 0.1, -0.2).unwrap();
        let (v, vi) = v_transform(&g, &p).unwrap();
        assert!(v.distance(&ComplexMatrix::identity(4)) == 0.0 && vi.distance(&ComplexMatrix::identity(4)) == 0.0);
        let t = &transformed_discrete_ops(&g, &[parity()])[0];
        let x = vec![
            Complex64::new(1.0, 0.5),
            Complex64::new(0.0, 1.0),
            Complex64::new(-0.2, 0.0),
            Complex64::new(0.3, 0.3),
        ];
        assert_eq!(t.act(&p, &x), parity().act(&p, &x));
    }

    #[test]
    fn similarity_and_pseudo_hermiticity() {
        let ks = momenta(40);
        for dim in [2, 4] {
            for k in [0.0, 1.0, -3.0] {
                for g in canonical_nilpotents(dim, k).unwrap() {
                    let a = similarity_check(&g, &ks, 1e-10).unwrap();
                    let b = pseudo_hermiticity_check(&g, &ks, 1e-10).unwrap();
                    assert!(a.all_ok(), "{:#?}", a.mismatches().collect::<Vec<_>>());
                    assert!(b.all_ok(), "{:#?}", b.mismatches().collect::<Vec<_>>());
                }
            }
        }
    }

    #[test]
    fn transformed_parity_preserves_phi_solutions() {
        let p = Momentum3::new(0.5, 0.2, -0.4).unwrap();
        for k in [1.0, 5.0] {
            let g = lambda_generator(Sign::Plus, k);
            let t = &transformed_discrete_ops(&g, &[parity()])[0];
            let sys = phi_system(&g, Some((Family::EnergySign, Sign::Plus)));
            assert!(preserves_solutions(&sys, t, &p, 1e-8).unwrap().0);
            let sys = phi_system(&g, Some((Family::Helicity, Sign::Plus)));
            assert!(!preserves_solutions(&sys, t, &p, 1e-8).unwrap().0);
        }
    }

    #[test]
    fn phi_table_matches_psi_table() {
        let ks = momenta(4);
        for k in [1.0, -3.0] {
            for g in canonical_nilpotents(4, k).unwrap() {
                let rep = classification_invariance_check(&g, &ks, 1e-8).unwrap();
                assert!(rep.all_ok(), "{:#?}", rep.checks);
            }
        }
    }
}
