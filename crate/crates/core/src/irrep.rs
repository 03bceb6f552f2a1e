//! Decomposition of `C⁴` at fixed momentum into the four one-dimensional
//! (energy sign, helicity) summands, and the label content selected by a
//! subsidiary condition.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{commutator, hermitian_eigen, inner, kernel_basis, subspace_equal, ComplexMatrix, Subspace};
use crate::momentum::{energy_sign, helicity_matrix, minimal_projector, Momentum3, OperatorField, Sign};

/// `ε` is the eigenvalue of `ε̂`, `λ` that of `Λ̂ = iγ4ε̂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IrrepLabel {
    pub energy_sign: Sign,
    pub helicity: Sign,
}

impl IrrepLabel {
    pub const ALL: [IrrepLabel; 4] = [
        IrrepLabel::new(Sign::Plus, Sign::Plus),
        IrrepLabel::new(Sign::Plus, Sign::Minus),
        IrrepLabel::new(Sign::Minus, Sign::Plus),
        IrrepLabel::new(Sign::Minus, Sign::Minus),
    ];

    pub const fn new(energy_sign: Sign, helicity: Sign) -> Self {
        Self { energy_sign, helicity }
    }

    /// `λε`, the eigenvalue of `iγ4` on this summand.
    pub fn chirality(&self) -> Sign {
        Sign::from_value(self.energy_sign.value() * self.helicity.value())
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}(λ={}1)", self.energy_sign.symbol(), self.helicity.symbol())
    }
}

pub type LabelSet = BTreeSet<IrrepLabel>;

#[derive(Debug, Clone)]
pub struct LabeledDecomposition {
    pub momentum: Momentum3,
    pub parts: BTreeMap<IrrepLabel, Subspace>,
}

impl LabeledDecomposition {
    pub fn get(&self, label: IrrepLabel) -> &Subspace {
        &self.parts[&label]
    }

    /// Largest `|⟨u, v⟩|` between distinct summands.
    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let parts: Vec<&Subspace> = self.parts.values().collect();
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                for u in a.vectors() {
                    for v in b.vectors() {
                        worst = worst.max(inner(u, v).norm());
                    }
                }
            }
        }
        worst
    }

    /// `‖Σ P_label − I‖`.
    pub fn completeness_residual(&self) -> f64 {
        let sum = self
            .parts
            .values()
            .fold(ComplexMatrix::zeros(4), |acc, s| acc + s.projector());
        (sum - ComplexMatrix::identity(4)).op_norm()
    }
}

/// Joint eigenbasis of `(ε̂, Λ̂)`. The eigenvectors come from the generic
/// combination `ε̂ + Λ̂/2` (eigenvalues `ε + λ/2`, all distinct) and each
/// summand is cross-checked against the range of the minimal projector.
pub fn decompose(p: &Momentum3, tol: f64) -> Result<LabeledDecomposition> {
    let eps = energy_sign(p);
    let lam = helicity_matrix(p);
    let pairs = hermitian_eigen(&(eps + lam * 0.5), tol)?;
    let mut parts = BTreeMap::new();
    for (value, v) in pairs {
        let e = Sign::from_value(value);
        let l = Sign::from_value(2.0 * (value - e.value()));
        let label = IrrepLabel::new(e, l);
        let s = Subspace::span(4, &[v], tol)?;
        let from_projector = Subspace::range_of(&minimal_projector(e, l, p), 1e-8);
        if !subspace_equal(&s, &from_projector, 1e-8)? || parts.insert(label, s).is_some() {
            return Err(Error::InvalidConfig(format!(
                "joint eigenbasis at {:?} does not separate the label {label}",
                p.components()
            )));
        }
    }
    Ok(LabeledDecomposition { momentum: *p, parts })
}

fn check_projector(name: &str, q: &ComplexMatrix, p: &Momentum3, tol: f64) -> Result<()> {
    let idem = (*q * *q - *q).op_norm();
    let herm = q.hermiticity_residual();
    if idem.max(herm) > tol {
        return Err(Error::NotAProjector {
            name: name.to_string(),
            residual: idem.max(herm),
        });
    }
    for (with, m) in [("ε̂", energy_sign(p)), ("Λ̂", helicity_matrix(p))] {
        let r = commutator(q, &m).op_norm();
        if r > tol {
            return Err(Error::NonCommuting {
                name: name.to_string(),
                with: with.to_string(),
                residual: r,
            });
        }
    }
    Ok(())
}

/// Labels whose summand lies in `ker Q(p)`, i.e. the content selected by
/// `QΨ = 0`.
pub fn classify_constraint(q: &OperatorField, p: &Momentum3, tol: f64) -> Result<LabelSet> {
    let qm = q.eval(p);
    check_projector(q.name(), &qm, p, tol)?;
    labels_in(&kernel_basis(&qm, tol.max(1e-12)), p, tol)
}

/// Labels selected by `QΨ = Ψ`.
pub fn classify_fixed_point(q: &OperatorField, p: &Momentum3, tol: f64) -> Result<LabelSet> {
    let qm = q.eval(p);
    check_projector(q.name(), &qm, p, tol)?;
    labels_in(
        &kernel_basis(&(ComplexMatrix::identity(4) - qm), tol.max(1e-12)),
        p,
        tol,
    )
}

fn labels_in(space: &Subspace, p: &Momentum3, tol: f64) -> Result<LabelSet> {
    let dec = decompose(p, tol)?;
    let mut out = LabelSet::new();
    for (label, s) in &dec.parts {
        if space.contains(&s.vectors()[0], 1e-8) {
            out.insert(*label);
        }
    }
    Ok(out)
}

/// Which of the three two-label patterns a set realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairPattern {
    /// `λε` fixed: chirality-type.
    MixedChirality,
    FixedHelicity,
    FixedEnergySign,
}

pub fn pair_pattern(set: &LabelSet) -> Option<PairPattern> {
    if set.len() != 2 {
        return None;
    }
    let v: Vec<&IrrepLabel> = set.iter().collect();
    if v[0].chirality() == v[1].chirality() {
        Some(PairPattern::MixedChirality)
    } else if v[0].helicity == v[1].helicity {
        Some(PairPattern::FixedHelicity)
    } else if v[0].energy_sign == v[1].energy_sign {
        Some(PairPattern::FixedEnergySign)
    } else {
        None
    }
}

pub fn format_labels(set: &LabelSet) -> String {
    if set.is_empty() {
        return "∅".into();
    }
    set.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ⊕ ")
}
