//! Parity, time reversal and charge conjugation acting on plane-wave data.
//!
//! An operator sends the datum `(p, ω, v)` of a solution
//! `e^{−iωt + ip·x} v` to `(s_p p, s_ω ω, M v)` or `(s_p p, s_ω ω, M v̄)`.
//! Antiunitarity is carried by the `conjugates` flag, never by a matrix.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::matrix::{kernel_basis, subspace_distance, subspace_equal, ComplexMatrix, ComplexVector, Subspace, I};
use crate::momentum::{hamiltonian_field, projector_field, Family, Momentum3, OperatorField, Sign, GAMMA};
use crate::report::{anchor, VerificationReport};

/// Anything that acts on plane-wave data. Plain operators use a constant
/// matrix; similarity-transformed ones need the source momentum.
pub trait PlaneWaveAction {
    fn name(&self) -> &str;
    fn conjugates(&self) -> bool;
    fn momentum_sign(&self) -> Sign;
    fn frequency_sign(&self) -> Sign;
    /// Image of the spinor `v` attached to momentum `source`.
    fn act(&self, source: &Momentum3, v: &[Complex64]) -> ComplexVector;
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryOp {
    pub name: String,
    pub matrix: ComplexMatrix,
    pub conjugates: bool,
    pub momentum_sign: Sign,
    pub frequency_sign: Sign,
}

impl SymmetryOp {
    pub fn new(
        name: impl Into<String>,
        matrix: ComplexMatrix,
        conjugates: bool,
        momentum_sign: Sign,
        frequency_sign: Sign,
    ) -> Self {
        Self {
            name: name.into(),
            matrix,
            conjugates,
            momentum_sign,
            frequency_sign,
        }
    }

    pub fn identity() -> Self {
        Self::new("1", ComplexMatrix::identity(4), false, Sign::Plus, Sign::Plus)
    }

    /// `‖M M† − 1‖`.
    pub fn unitarity_residual(&self) -> f64 {
        (self.matrix * self.matrix.adjoint() - ComplexMatrix::identity(4)).op_norm()
    }

    /// If the operator squares to a phase times the identity, that phase.
    pub fn square_phase(&self, tol: f64) -> Option<Complex64> {
        let sq = compose(self, self);
        if sq.momentum_sign != Sign::Plus || sq.frequency_sign != Sign::Plus || sq.conjugates {
            return None;
        }
        let phase = sq.matrix[(0, 0)];
        ((sq.matrix - ComplexMatrix::identity(4) * phase).op_norm() <= tol).then_some(phase)
    }
}

impl PlaneWaveAction for SymmetryOp {
    fn name(&self) -> &str {
        &self.name
    }

    fn conjugates(&self) -> bool {
        self.conjugates
    }

    fn momentum_sign(&self) -> Sign {
        self.momentum_sign
    }

    fn frequency_sign(&self) -> Sign {
        self.frequency_sign
    }

    fn act(&self, _source: &Momentum3, v: &[Complex64]) -> ComplexVector {
        if self.conjugates {
            let vc: ComplexVector = v.iter().map(|z| z.conj()).collect();
            self.matrix.apply(&vc)
        } else {
            self.matrix.apply(v)
        }
    }
}

impl fmt::Display for SymmetryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub fn parity() -> SymmetryOp {
    SymmetryOp::new("P(1)", GAMMA.gamma[0], false, Sign::Minus, Sign::Plus)
}

/// Antiunitary (Wigner) time reversal.
pub fn time_reversal() -> SymmetryOp {
    SymmetryOp::new("T(2)", GAMMA.gamma[1] * GAMMA.gamma[3], true, Sign::Minus, Sign::Plus)
}

pub fn charge_conjugation() -> SymmetryOp {
    SymmetryOp::new("C", GAMMA.gamma[2] * I, true, Sign::Minus, Sign::Minus)
}

/// Unitary time reversal: flips the frequency, keeps the momentum.
pub fn unitary_time_reversal() -> SymmetryOp {
    SymmetryOp::new("T(1)", GAMMA.gamma[0] * GAMMA.gamma4, false, Sign::Plus, Sign::Minus)
}

/// P(1), T(2), C, T(1).
pub fn standard_ops() -> Vec<SymmetryOp> {
    vec![parity(), time_reversal(), charge_conjugation(), unitary_time_reversal()]
}

/// Apply `o2` first, then `o1`.
pub fn compose(o1: &SymmetryOp, o2: &SymmetryOp) -> SymmetryOp {
    let m2 = if o1.conjugates { o2.matrix.conj() } else { o2.matrix };
    let name = match (o1.name.as_str(), o2.name.as_str()) {
        ("1", n) | (n, "1") => n.to_string(),
        (a, b) => format!("{a}{b}"),
    };
    SymmetryOp::new(
        name,
        o1.matrix * m2,
        o1.conjugates ^ o2.conjugates,
        Sign::from_value(o1.momentum_sign.value() * o2.momentum_sign.value()),
        Sign::from_value(o1.frequency_sign.value() * o2.frequency_sign.value()),
    )
}

/// Columns of the classification table: P(1), T(2), T(1), C, CP(1),
/// CP(1)T(2), CP(1)T(1).
pub fn table_ops() -> Vec<SymmetryOp> {
    let (p, t2, c, t1) = (parity(), time_reversal(), charge_conjugation(), unitary_time_reversal());
    let cp = compose(&c, &p);
    vec![
        p,
        t2.clone(),
        t1.clone(),
        c,
        cp.clone(),
        compose(&cp, &t2),
        compose(&cp, &t1),
    ]
}

/// `p ↦ M A(s_p p)^{(*)} M⁻¹`.
pub fn transform_field(o: &SymmetryOp, a: &OperatorField) -> OperatorField {
    let m = o.matrix;
    let m_inv = m.adjoint();
    let conj = o.conjugates;
    let s = o.momentum_sign.value();
    let inner = a.clone();
    OperatorField::new(
        format!("{}·{}·{}⁻¹", o.name, a.name(), o.name),
        move |p: &Momentum3| {
            let x = inner.eval(&p.signed(s));
            let x = if conj { x.conj() } else { x };
            m * x * m_inv
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Commute,
    Anticommute,
}

/// Largest `‖O A O⁻¹ − B‖` over the momenta.
pub fn intertwining_residual(o: &SymmetryOp, a: &OperatorField, b: &OperatorField, momenta: &[Momentum3]) -> f64 {
    let t = transform_field(o, a);
    momenta
        .iter()
        .map(|p| (t.eval(p) - b.eval(p)).op_norm())
        .fold(0.0, f64::max)
}

/// Passes iff `O A O⁻¹ = ±A` on every momentum (`+` for commute).
pub fn relation_check(
    o: &SymmetryOp,
    a: &OperatorField,
    kind: RelationKind,
    momenta: &[Momentum3],
    tol: f64,
) -> VerificationReport {
    let (sym, target) = match kind {
        RelationKind::Commute => ("−", a.clone()),
        RelationKind::Anticommute => ("+", a.scaled(Complex64::new(-1.0, 0.0))),
    };
    let mut rep = VerificationReport::new("relation");
    rep.record(
        format!("[{}, {}]{sym} = 0", o.name, a.name()),
        intertwining_residual(o, a, &target, momenta),
        tol,
        anchor::DISCRETE,
    );
    rep
}

/// The six relations between P(1), T(2), C and `Λ̂`, `ε̂`.
pub fn standard_relations() -> Vec<(SymmetryOp, OperatorField, RelationKind)> {
    use crate::momentum::{energy_sign_field, helicity_field};
    use RelationKind::*;
    let (lam, eps) = (helicity_field(), energy_sign_field());
    vec![
        (parity(), lam.clone(), Anticommute),
        (parity(), eps.clone(), Commute),
        (time_reversal(), lam.clone(), Commute),
        (time_reversal(), eps.clone(), Commute),
        (charge_conjugation(), lam, Commute),
        (charge_conjugation(), eps, Anticommute),
    ]
}

/// How an operator relates the projector family `Pa`: `O Pa± = Pa^{±·flip} O`.
#[derive(Debug, Clone)]
pub struct Intertwining {
    pub op: SymmetryOp,
    pub family: Family,
    /// `true` when the relation exchanges the two signs.
    pub flips: bool,
}

impl Intertwining {
    pub fn label(&self, sign: Sign) -> String {
        let n = self.family.number();
        let out = if self.flips { sign.flip() } else { sign };
        format!("{o} P{n}{} = P{n}{} {o}", sign.symbol(), out.symbol(), o = self.op.name)
    }

    pub fn residual(&self, sign: Sign, momenta: &[Momentum3]) -> f64 {
        let out = if self.flips { sign.flip() } else { sign };
        intertwining_residual(
            &self.op,
            &projector_field(self.family, sign),
            &projector_field(self.family, out),
            momenta,
        )
    }
}

/// The intertwining relations that follow from the six (anti)commutation
/// relations: P(1) flips families 1 and 2 and keeps 3, T(2) keeps all
/// three, C flips families 1 and 3 and keeps 2.
pub fn derived_intertwinings() -> Vec<Intertwining> {
    let mk = |op: SymmetryOp, family, flips| Intertwining { op, family, flips };
    vec![
        mk(parity(), Family::Chirality, true),
        mk(parity(), Family::Helicity, true),
        mk(parity(), Family::EnergySign, false),
        mk(time_reversal(), Family::Chirality, false),
        mk(time_reversal(), Family::Helicity, false),
        mk(time_reversal(), Family::EnergySign, false),
        mk(charge_conjugation(), Family::Chirality, true),
        mk(charge_conjugation(), Family::Helicity, false),
        mk(charge_conjugation(), Family::EnergySign, true),
    ]
}

/// `i∂Ψ/∂t = HΨ`, optionally with `QΨ = 0`.
#[derive(Clone)]
pub struct EquationSystem {
    pub name: String,
    pub hamiltonian: OperatorField,
    pub constraint: Option<OperatorField>,
}

impl fmt::Debug for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EquationSystem")
            .field("name", &self.name)
            .field("hamiltonian", &self.hamiltonian.name())
            .field("constraint", &self.constraint.as_ref().map(|q| q.name().to_string()))
            .finish()
    }
}

impl EquationSystem {
    pub fn new(name: impl Into<String>, hamiltonian: OperatorField, constraint: Option<OperatorField>) -> Self {
        Self {
            name: name.into(),
            hamiltonian,
            constraint,
        }
    }

    pub fn dirac() -> Self {
        Self::new("unconstrained", hamiltonian_field(), None)
    }

    pub fn constrained(family: Family, sign: Sign) -> Self {
        let q = projector_field(family, sign);
        Self::new(format!("{} = 0", q.name()), hamiltonian_field(), Some(q))
    }

    /// `S(p, ω) = ker(H(p) − ω) ∩ ker Q(p)`.
    pub fn solution_space(&self, p: &Momentum3, omega: f64, tol: f64) -> Result<Subspace> {
        let h = self.hamiltonian.eval(p) - ComplexMatrix::identity(4) * omega;
        let s = kernel_basis(&h, tol);
        match &self.constraint {
            None => Ok(s),
            Some(q) => s.intersect(&kernel_basis(&q.eval(p), tol), tol),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpVerdict {
    pub op: String,
    pub invariant: bool,
    /// Every sampled momentum gave the same answer.
    pub stable: bool,
    pub invariant_samples: usize,
    pub samples: usize,
    /// Largest projector distance between image and target solution spaces.
    pub worst_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemClassification {
    pub system: String,
    pub verdicts: Vec<OpVerdict>,
}

impl SystemClassification {
    pub fn verdict(&self, op: &str) -> Option<&OpVerdict> {
        self.verdicts.iter().find(|v| v.op == op)
    }
}

/// Kernel threshold (relative to the largest singular value) used when
/// building solution spaces.
pub const KERNEL_TOL: f64 = 1e-8;

/// Whether `op` maps `S(s_p p, s_ω ω)` onto `S(p, ω)` for `ω = ±E`; returns
/// the worst subspace distance alongside.
pub fn preserves_solutions(
    sys: &EquationSystem,
    op: &dyn PlaneWaveAction,
    p: &Momentum3,
    tol: f64,
) -> Result<(bool, f64)> {
    let source = p.signed(op.momentum_sign().value());
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for omega in [p.energy(), -p.energy()] {
        let src = sys.solution_space(&source, op.frequency_sign().value() * omega, KERNEL_TOL)?;
        let image = src.map_vectors(|v| op.act(&source, v))?;
        let target = sys.solution_space(p, omega, KERNEL_TOL)?;
        let same = subspace_equal(&image, &target, tol)?;
        worst = worst.max(if image.dim() == target.dim() {
            subspace_distance(&image, &target)
        } else {
            f64::INFINITY
        });
        ok &= same;
    }
    Ok((ok, worst))
}

pub fn classify_op(
    sys: &EquationSystem,
    op: &dyn PlaneWaveAction,
    momenta: &[Momentum3],
    tol: f64,
) -> Result<OpVerdict> {
    let mut yes = 0;
    let mut worst: f64 = 0.0;
    for p in momenta {
        let (ok, d) = preserves_solutions(sys, op, p, tol)?;
        yes += ok as usize;
        worst = worst.max(d);
    }
    Ok(OpVerdict {
        op: op.name().to_string(),
        invariant: yes == momenta.len(),
        stable: yes == 0 || yes == momenta.len(),
        invariant_samples: yes,
        samples: momenta.len(),
        worst_distance: worst,
    })
}

pub fn classify_system(
    sys: &EquationSystem,
    ops: &[&dyn PlaneWaveAction],
    momenta: &[Momentum3],
    tol: f64,
) -> Result<SystemClassification> {
    let verdicts = ops
        .iter()
        .map(|op| classify_op(sys, *op, momenta, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(SystemClassification {
        system: sys.name.clone(),
        verdicts,
    })
}

/// One row of the table: a constraint family, with both sign choices
/// classified separately.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationRow {
    pub label: String,
    pub systems: Vec<SystemClassification>,
    /// `None` when the sign variants disagree or a verdict is unstable.
    pub verdicts: Vec<(String, Option<bool>)>,
}

impl ClassificationRow {
    pub fn verdict(&self, op: &str) -> Option<bool> {
        self.verdicts.iter().find(|(o, _)| o == op).and_then(|(_, v)| *v)
    }

    pub fn consistent(&self) -> bool {
        self.verdicts.iter().all(|(_, v)| v.is_some())
    }

    pub fn from_systems(label: impl Into<String>, systems: Vec<SystemClassification>) -> Self {
        let ops: Vec<String> = systems[0].verdicts.iter().map(|v| v.op.clone()).collect();
        let verdicts = ops
            .into_iter()
            .map(|op| {
                let vs: Vec<&OpVerdict> = systems.iter().filter_map(|s| s.verdict(&op)).collect();
                let first = vs[0].invariant;
                let agree = vs.len() == systems.len() && vs.iter().all(|v| v.stable && v.invariant == first);
                (op, agree.then_some(first))
            })
            .collect();
        Self {
            label: label.into(),
            systems,
            verdicts,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationTable {
    pub columns: Vec<String>,
    pub rows: Vec<ClassificationRow>,
}

impl ClassificationTable {
    pub fn row(&self, label: &str) -> Option<&ClassificationRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

pub const ROW_UNCONSTRAINED: &str = "unconstrained";

pub fn row_label(family: Family) -> &'static str {
    match family {
        Family::Chirality => "chirality P1",
        Family::Helicity => "helicity P2",
        Family::EnergySign => "energy sign P3",
    }
}

/// Rows for the unconstrained system and the three constraint families.
/// `make` builds the system for a constraint (or `None` for unconstrained)
/// so the same table can be produced in a transformed representation.
pub fn classification_table_with(
    make: &dyn Fn(Option<(Family, Sign)>) -> EquationSystem,
    ops: &[&dyn PlaneWaveAction],
    momenta: &[Momentum3],
    tol: f64,
) -> Result<ClassificationTable> {
    let mut rows = vec![ClassificationRow::from_systems(
        ROW_UNCONSTRAINED,
        vec![classify_system(&make(None), ops, momenta, tol)?],
    )];
    for f in Family::ALL {
        let systems = Sign::BOTH
            .iter()
            .map(|&s| classify_system(&make(Some((f, s))), ops, momenta, tol))
            .collect::<Result<Vec<_>>>()?;
        rows.push(ClassificationRow::from_systems(row_label(f), systems));
    }
    Ok(ClassificationTable {
        columns: ops.iter().map(|o| o.name().to_string()).collect(),
        rows,
    })
}

pub fn classification_table(momenta: &[Momentum3], tol: f64) -> Result<ClassificationTable> {
    let ops = table_ops();
    let dyn_ops: Vec<&dyn PlaneWaveAction> = ops.iter().map(|o| o as &dyn PlaneWaveAction).collect();
    classification_table_with(
        &|c| match c {
            None => EquationSystem::dirac(),
            Some((f, s)) => EquationSystem::constrained(f, s),
        },
        &dyn_ops,
        momenta,
        tol,
    )
}

/// Expected verdicts. The chirality row is the
/// two-component Weyl pattern.
pub fn stated_verdicts() -> Vec<(&'static str, &'static str, bool)> {
    vec![
        ("helicity P2", "T(2)", true),
        ("helicity P2", "C", true),
        ("helicity P2", "P(1)", false),
        ("helicity P2", "CP(1)", false),
        ("helicity P2", "CP(1)T(2)", false),
        ("helicity P2", "CP(1)T(1)", false),
        ("energy sign P3", "T(2)", true),
        ("energy sign P3", "P(1)", true),
        ("energy sign P3", "C", false),
        ("energy sign P3", "CP(1)", false),
        ("chirality P1", "P(1)", false),
        ("chirality P1", "C", false),
        ("chirality P1", "CP(1)", true),
        ("chirality P1", "T(2)", true),
    ]
}
