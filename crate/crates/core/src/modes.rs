//! Two-component mode equations, the Weyl reduction, the three- and
//! one-component reduced equations and the census of invariant
//! subsidiary conditions.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::sigma_dot;
use crate::irrep::IrrepLabel;
use crate::matrix::{
    commutator, hermitian_eigen, kernel_basis, subspace_distance, subspace_equal, ComplexMatrix, Subspace,
};
use crate::momentum::{hamiltonian, minimal_projector, projector, Family, Momentum3, OperatorField, Sign, GAMMA};
use crate::report::{anchor, VerificationReport};

/// Relative singular-value threshold for kernels in this module.
pub const KERNEL_TOL: f64 = 1e-8;

/// `γ0γ·p ± κ γ0 Pa∓(p)`, whose flow keeps `range(Pa±)` invariant.
#[derive(Clone)]
pub struct ModeHamiltonian {
    pub family: Family,
    pub sign: Sign,
    pub kappa: f64,
    pub field: OperatorField,
}

impl fmt::Debug for ModeHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModeHamiltonian")
            .field("family", &self.family)
            .field("sign", &self.sign)
            .field("kappa", &self.kappa)
            .finish()
    }
}

pub fn mode_hamiltonian(family: Family, sign: Sign, kappa: f64) -> ModeHamiltonian {
    let s = sign.value() * kappa;
    let field = OperatorField::new(
        format!("H{}{}(κ={kappa})", family.number(), sign.symbol()),
        move |p: &Momentum3| hamiltonian(p) + GAMMA.gamma[0] * projector(family, sign.flip(), p) * s,
    );
    ModeHamiltonian {
        family,
        sign,
        kappa,
        field,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeResiduals {
    /// `‖P∓ H_mode P±‖`.
    pub leakage: f64,
    /// `‖P± (H_mode − H_mode†) P±‖`.
    pub hermiticity: f64,
    /// `‖P± (H_mode − H) P±‖`.
    pub restriction: f64,
    /// Spectrum on `range(P±)` against that of `H`, relative to `E`.
    pub spectrum: f64,
}

impl ModeHamiltonian {
    pub fn residuals(&self, p: &Momentum3) -> Result<ModeResiduals> {
        let pp = projector(self.family, self.sign, p);
        let pm = projector(self.family, self.sign.flip(), p);
        let f = self.field.eval(p);
        let h = hamiltonian(p);
        let range = Subspace::range_of(&pp, KERNEL_TOL);
        let ev = |m: &ComplexMatrix| -> Result<Vec<f64>> {
            let r = m.restrict(&range)?;
            // Hermitize against roundoff; the Hermiticity residual is reported separately.
            let r = (r + r.adjoint()) * 0.5;
            Ok(hermitian_eigen(&r, 1e-13)?.into_iter().map(|x| x.0).collect())
        };
        let (a, b) = (ev(&f)?, ev(&h)?);
        let spectrum = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / p.energy();
        Ok(ModeResiduals {
            leakage: (pm * f * pp).op_norm(),
            hermiticity: (pp * (f - f.adjoint()) * pp).op_norm(),
            restriction: (pp * (f - h) * pp).op_norm(),
            spectrum,
        })
    }
}

pub const MODE_KAPPAS: [f64; 3] = [0.0, 1.0, -2.5];

/// Fixed identification of `range(P1^sign)` with `C²`.
///
/// The basis of the chirality eigenspace is momentum independent. The
/// unitary `U` is fixed from the axis momenta: `u1` is the `+1` eigenvector
/// of `s·h(e3)` and `u2 = s·h(e1) u1`, where `h(e_a)` is the restricted
/// Hamiltonian and `s = Im tr(h1 h2 h3)/2 = ±1` is the handedness.
#[derive(Debug, Clone)]
pub struct WeylReduction {
    pub sign: Sign,
    pub basis: Subspace,
    pub unitary: ComplexMatrix,
    /// `s`: the reduced equation is `i∂χ/∂t = s σ·p χ`.
    pub handedness: f64,
}

impl WeylReduction {
    pub fn new(sign: Sign) -> Result<Self> {
        let basis = Subspace::range_of(&projector(Family::Chirality, sign, &axis(0)), KERNEL_TOL);
        if basis.dim() != 2 {
            return Err(Error::InvalidDimension(basis.dim()));
        }
        let h: Vec<ComplexMatrix> = (0..3)
            .map(|a| hamiltonian(&axis(a)).restrict(&basis))
            .collect::<Result<_>>()?;
        let handedness = (h[0] * h[1] * h[2]).trace().im / 2.0;
        if (handedness.abs() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidConfig(format!(
                "restricted Hamiltonian is not Pauli-like (s = {handedness})"
            )));
        }
        let s = handedness.signum();
        let pairs = hermitian_eigen(&(h[2] * s), 1e-14)?;
        let u1 = pairs[1].1.clone();
        let u2 = (h[0] * s).apply(&u1);
        let u = ComplexMatrix::from_columns(2, &[u1, u2])?.adjoint();
        Ok(Self {
            sign,
            basis,
            unitary: u,
            handedness: s,
        })
    }

    /// `B† H(p) B` in the fixed chirality basis.
    pub fn restrict(&self, p: &Momentum3) -> ComplexMatrix {
        hamiltonian(p).restrict(&self.basis).expect("basis lives in C⁴")
    }

    /// `U B† H(p) B U†`.
    pub fn weyl_form(&self, p: &Momentum3) -> ComplexMatrix {
        self.unitary * self.restrict(p) * self.unitary.adjoint()
    }

    /// `‖U B†HB U† − s σ·p‖ / E`.
    pub fn residual(&self, p: &Momentum3) -> f64 {
        (self.weyl_form(p) - sigma_dot(p.components()) * self.handedness).op_norm() / p.energy()
    }
}

fn axis(a: usize) -> Momentum3 {
    let mut v = [0.0; 3];
    v[a] = 1.0;
    Momentum3::from_array(v).expect("unit axis")
}

/// Restriction of `H(p)` to `range(P1^sign)` in the fixed basis.
pub fn weyl_reduce(sign: Sign, p: &Momentum3) -> Result<ComplexMatrix> {
    Ok(WeylReduction::new(sign)?.restrict(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReducedKind {
    /// `(γp + κ̄0 Q) φ = 0` with `φ ∈ range(1 − Q)`.
    ThreeComponent,
    /// `(γp + Σ κ̄_k Q_k) φ = 0` over the other three minimal projectors,
    /// with `φ ∈ range(Q)`.
    OneComponent,
}

/// `P2^ε P3^{ε'}`: helicity sign first, energy sign second.
pub fn reduced_projector(eps: Sign, eps_prime: Sign, p: &Momentum3) -> ComplexMatrix {
    minimal_projector(eps_prime, eps, p)
}

/// `γ0 p0 − γ·p` plus the projector terms. `kappas` holds `κ̄0` for the
/// three-component symbol and `κ̄1..κ̄3` for the one-component symbol; missing
/// entries count as zero.
pub fn reduced_equation_symbol(
    eps: Sign,
    eps_prime: Sign,
    kind: ReducedKind,
    kappas: &[f64],
    p0: f64,
    p: &Momentum3,
) -> ComplexMatrix {
    let k = |i: usize| kappas.get(i).copied().unwrap_or(0.0);
    let d = GAMMA.gamma[0] * p0 - GAMMA.gamma_dot(p.components());
    match kind {
        ReducedKind::ThreeComponent => d + reduced_projector(eps, eps_prime, p) * k(0),
        ReducedKind::OneComponent => {
            d + reduced_projector(eps, eps_prime.flip(), p) * k(0)
                + reduced_projector(eps.flip(), eps_prime, p) * k(1)
                + reduced_projector(eps.flip(), eps_prime.flip(), p) * k(2)
        }
    }
}

/// Kernel of the reduced symbol intersected with the admissible subspace
/// (`range(1 − Q)` or `range(Q)`).
pub fn reduced_kernel(
    eps: Sign,
    eps_prime: Sign,
    kind: ReducedKind,
    kappas: &[f64],
    p0: f64,
    p: &Momentum3,
) -> Result<Subspace> {
    let sym = reduced_equation_symbol(eps, eps_prime, kind, kappas, p0, p);
    let q = reduced_projector(eps, eps_prime, p);
    let admissible = match kind {
        ReducedKind::ThreeComponent => kernel_basis(&q, KERNEL_TOL),
        ReducedKind::OneComponent => Subspace::range_of(&q, KERNEL_TOL),
    };
    kernel_basis(&sym, KERNEL_TOL).intersect(&admissible, 1e-8)
}

/// `{Ψ : (γ0p0 − γ·p)Ψ = 0, QΨ = 0}` (annihilation) or with `QΨ = Ψ`.
fn constrained_dirac_kernel(q: &ComplexMatrix, fixed_point: bool, p0: f64, p: &Momentum3) -> Result<Subspace> {
    let d = GAMMA.gamma[0] * p0 - GAMMA.gamma_dot(p.components());
    let c = if fixed_point {
        ComplexMatrix::identity(4) - *q
    } else {
        *q
    };
    kernel_basis(&d, KERNEL_TOL).intersect(&kernel_basis(&c, KERNEL_TOL), 1e-8)
}

pub const REDUCED_KAPPA_SETS: [[f64; 3]; 3] = [[0.0, 0.0, 0.0], [1.0, -0.5, 2.0], [10.0, 3.0, -7.0]];

/// Both reductions for one `(ε, ε')`, with `κ̄` arbitrariness and a
/// non-invariant negative control.
pub fn reduced_equivalence_check(
    eps: Sign,
    eps_prime: Sign,
    momenta: &[Momentum3],
    tol: f64,
) -> Result<VerificationReport> {
    let tag = format!("(ε{},ε'{})", eps.symbol(), eps_prime.symbol());
    let mut rep = VerificationReport::new("reduced");
    let (mut worst3, mut worst1, mut worst_kappa): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let (mut dims3, mut dims1) = (Vec::new(), Vec::new());
    let mut raw_free = Vec::new();
    for p in momenta {
        let q = reduced_projector(eps, eps_prime, p);
        let (mut d3, mut d1, mut d0) = (0, 0, 0);
        for p0 in [p.energy(), -p.energy()] {
            let ann = constrained_dirac_kernel(&q, false, p0, p)?;
            let fix = constrained_dirac_kernel(&q, true, p0, p)?;
            let base3 = reduced_kernel(
                eps,
                eps_prime,
                ReducedKind::ThreeComponent,
                &REDUCED_KAPPA_SETS[0],
                p0,
                p,
            )?;
            let base1 = reduced_kernel(eps, eps_prime, ReducedKind::OneComponent, &REDUCED_KAPPA_SETS[0], p0, p)?;
            for ks in &REDUCED_KAPPA_SETS {
                let k3 = reduced_kernel(eps, eps_prime, ReducedKind::ThreeComponent, ks, p0, p)?;
                let k1 = reduced_kernel(eps, eps_prime, ReducedKind::OneComponent, ks, p0, p)?;
                worst3 = worst3.max(mismatch(&k3, &ann));
                worst1 = worst1.max(mismatch(&k1, &fix));
                worst_kappa = worst_kappa.max(mismatch(&k3, &base3)).max(mismatch(&k1, &base1));
            }
            d3 += base3.dim();
            d1 += base1.dim();
            d0 += kernel_basis(
                &reduced_equation_symbol(eps, eps_prime, ReducedKind::ThreeComponent, &[0.0], p0, p),
                KERNEL_TOL,
            )
            .dim();
        }
        dims3.push(d3);
        dims1.push(d1);
        raw_free.push(d0);
    }
    rep.record(
        format!("{tag} three-component kernel = constrained Dirac solutions"),
        worst3,
        tol,
        anchor::REDUCED,
    );
    rep.record(
        format!("{tag} one-component kernel = fixed-point Dirac solutions"),
        worst1,
        tol,
        anchor::REDUCED,
    );
    rep.record(
        format!("{tag} kernels independent of κ̄"),
        worst_kappa,
        tol,
        anchor::REDUCED,
    );
    let all_eq = |v: &[usize], n: usize| v.iter().all(|&d| d == n);
    rep.record_count(
        format!("{tag} three-component kernel dimension over p0 = ±E"),
        dims3[0],
        3,
        anchor::REDUCED,
    );
    rep.record_flag(
        format!("{tag} three-component dimension constant over momenta"),
        all_eq(&dims3, dims3[0]),
        anchor::REDUCED,
    );
    rep.record_count(
        format!("{tag} one-component kernel dimension over p0 = ±E"),
        dims1[0],
        1,
        anchor::REDUCED,
    );
    rep.record_flag(
        format!("{tag} one-component dimension constant over momenta"),
        all_eq(&dims1, dims1[0]),
        anchor::REDUCED,
    );
    rep.record_count(
        format!("{tag} κ̄ = 0 symbol kernel over p0 = ±E"),
        raw_free[0],
        4,
        anchor::REDUCED,
    );

    // Negative control: a γ0-based projector that does not commute with H.
    let bad = (ComplexMatrix::identity(4) + GAMMA.gamma[0]) * 0.5;
    let mut bad_dim = 0;
    let mut bad_comm: f64 = 0.0;
    for p in momenta {
        for p0 in [p.energy(), -p.energy()] {
            bad_dim = bad_dim.max(
                constrained_dirac_kernel(&bad, false, p0, p)?.dim()
                    + constrained_dirac_kernel(&bad, false, -p0, p)?.dim(),
            );
        }
        bad_comm = bad_comm.max(commutator(&bad, &hamiltonian(p)).op_norm());
    }
    rep.record_expected_fail(
        format!("{tag} control (1+γ0)/2: constrained solutions over p0 = ±E number 3, |dim − 3|"),
        (bad_dim as f64 - 3.0).abs(),
        0.0,
        anchor::REDUCED,
    );
    rep.record_expected_fail(
        format!("{tag} control (1+γ0)/2: [Q, H] = 0"),
        bad_comm,
        tol,
        anchor::REDUCED,
    );
    Ok(rep)
}

fn mismatch(a: &Subspace, b: &Subspace) -> f64 {
    if a.dim() != b.dim() {
        f64::INFINITY
    } else {
        subspace_distance(a, b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    /// `QΨ = 0`.
    Annihilation,
    /// `QΨ = Ψ`.
    FixedPoint,
    None,
}

#[derive(Clone)]
pub struct SubsidiaryCondition {
    pub projector: OperatorField,
    pub kind: ConditionKind,
}

impl fmt::Debug for SubsidiaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:?})", self.projector.name(), self.kind)
    }
}

impl SubsidiaryCondition {
    pub fn new(projector: OperatorField, kind: ConditionKind) -> Self {
        Self { projector, kind }
    }

    /// `QΨ = 0 ↔ (I − Q)Ψ = Ψ`; `None` is left alone.
    pub fn dual(&self) -> Self {
        let kind = match self.kind {
            ConditionKind::Annihilation => ConditionKind::FixedPoint,
            ConditionKind::FixedPoint => ConditionKind::Annihilation,
            ConditionKind::None => return self.clone(),
        };
        Self::new(complement(&self.projector), kind)
    }

    /// Annihilation form.
    pub fn canonicalize(&self) -> Self {
        match self.kind {
            ConditionKind::FixedPoint => self.dual(),
            _ => self.clone(),
        }
    }

    /// Solutions of `H(p)Ψ = ωΨ` obeying the condition.
    pub fn solutions(&self, p: &Momentum3, omega: f64) -> Result<Subspace> {
        let s = kernel_basis(&(hamiltonian(p) - ComplexMatrix::identity(4) * omega), KERNEL_TOL);
        let q = self.projector.eval(p);
        let c = match self.kind {
            ConditionKind::Annihilation => q,
            ConditionKind::FixedPoint => ComplexMatrix::identity(4) - q,
            ConditionKind::None => return Ok(s),
        };
        s.intersect(&kernel_basis(&c, KERNEL_TOL), 1e-8)
    }
}

fn complement(q: &OperatorField) -> OperatorField {
    let inner = q.clone();
    let name = match q.name().strip_prefix("(1 − ").and_then(|n| n.strip_suffix(')')) {
        Some(orig) => orig.to_string(),
        None => format!("(1 − {})", q.name()),
    };
    OperatorField::new(name, move |p: &Momentum3| ComplexMatrix::identity(4) - inner.eval(p))
}

/// Lattice element: sum of the minimal projectors whose labels are in the
/// mask (bit `i` ↔ `IrrepLabel::ALL[i]`).
pub fn lattice_projector(mask: u8) -> OperatorField {
    let labels: Vec<IrrepLabel> = (0..4)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| IrrepLabel::ALL[i])
        .collect();
    let name = if labels.is_empty() {
        "0".to_string()
    } else {
        labels
            .iter()
            .map(|l| format!("Q(ε{},λ{})", l.energy_sign.symbol(), l.helicity.symbol()))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    OperatorField::new(name, move |p: &Momentum3| {
        labels.iter().fold(ComplexMatrix::zeros(4), |acc, l| {
            acc + minimal_projector(l.energy_sign, l.helicity, p)
        })
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusEntry {
    pub mask: u8,
    pub projector: String,
    pub projector_rank: usize,
    /// Dimension of `ker Q` at fixed momentum, i.e. of the constrained
    /// solution space summed over both energy signs.
    pub solution_dim: usize,
    /// Equivalent condition in terms of the family projectors.
    pub condition_form: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub entries: Vec<CensusEntry>,
    /// Number of annihilation conditions by projector rank 1, 2, 3.
    pub by_rank: [usize; 3],
    pub nontrivial: usize,
    pub with_unconstrained: usize,
    pub lattice_size: usize,
}

impl Census {
    pub fn conditions(&self) -> Vec<SubsidiaryCondition> {
        self.entries
            .iter()
            .map(|e| SubsidiaryCondition::new(lattice_projector(e.mask), ConditionKind::Annihilation))
            .collect()
    }
}

fn label_name(l: IrrepLabel) -> String {
    format!("P2{}P3{}", l.helicity.symbol(), l.energy_sign.symbol())
}

/// All nonequivalent annihilation conditions `QΨ = 0` with `Q` in the
/// lattice and `Q ≠ 0, I`, written through the family projectors: rank-2 elements are the
/// six `Pa±`, rank 1 is `P2P3Ψ = 0`, rank 3 is `P2P3Ψ = Ψ` for the missing
/// label.
pub fn enumerate_subsidiary_conditions() -> Result<Census> {
    let probe = Momentum3::new(0.37, -0.81, 0.52)?;
    let mut entries = Vec::new();
    for mask in 1u8..15 {
        let q = lattice_projector(mask);
        let qm = q.eval(&probe);
        let rank = mask.count_ones() as usize;
        let condition_form = match rank {
            1 => {
                let l = IrrepLabel::ALL[mask.trailing_zeros() as usize];
                format!("{}Ψ = 0", label_name(l))
            }
            3 => {
                let l = IrrepLabel::ALL[(!mask & 0x0f).trailing_zeros() as usize];
                format!("{}Ψ = Ψ", label_name(l))
            }
            _ => {
                let mut found = None;
                for f in Family::ALL {
                    for s in Sign::BOTH {
                        if qm.distance(&projector(f, s, &probe)) < 1e-10 {
                            found = Some(format!("P{}{}Ψ = 0", f.number(), s.symbol()));
                        }
                    }
                }
                found.ok_or_else(|| Error::InvalidConfig(format!("rank-2 element {} matches no family", q.name())))?
            }
        };
        entries.push(CensusEntry {
            mask,
            projector: q.name().to_string(),
            projector_rank: qm.rank(1e-10),
            solution_dim: kernel_basis(&qm, KERNEL_TOL).dim(),
            condition_form,
        });
    }
    let mut by_rank = [0; 3];
    for e in &entries {
        if (1..=3).contains(&e.projector_rank) {
            by_rank[e.projector_rank - 1] += 1;
        }
    }
    Ok(Census {
        nontrivial: entries.len(),
        with_unconstrained: entries.len() + 1,
        lattice_size: 16,
        by_rank,
        entries,
    })
}

/// Projector distances between the solution spaces of every pair of census
/// conditions at `p`; the minimum over pairs separates distinct conditions.
pub fn min_pairwise_separation(census: &Census, p: &Momentum3) -> Result<f64> {
    let spaces: Vec<Subspace> = census
        .entries
        .iter()
        .map(|e| kernel_basis(&lattice_projector(e.mask).eval(p), KERNEL_TOL))
        .collect();
    let mut best = f64::INFINITY;
    for i in 0..spaces.len() {
        for j in i + 1..spaces.len() {
            best = best.min(mismatch(&spaces[i], &spaces[j]));
        }
    }
    Ok(best)
}

/// Whether two conditions have equal solution sets at `p` for both energy
/// signs.
pub fn conditions_equivalent(a: &SubsidiaryCondition, b: &SubsidiaryCondition, p: &Momentum3) -> Result<bool> {
    for omega in [p.energy(), -p.energy()] {
        if !subspace_equal(&a.solutions(p, omega)?, &b.solutions(p, omega)?, 1e-8)? {
            return Ok(false);
        }
    }
    Ok(true)
}
