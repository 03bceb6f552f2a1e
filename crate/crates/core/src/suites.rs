//! The verification suites and the run driver.
//!
//! Each suite draws its momenta from its own sampler, seeded from the run
//! seed and the suite name, so selecting a subset of suites does not change
//! the numbers any suite sees.

use serde::Serialize;

use crate::config::SuiteConfig;
use crate::discrete::{
    charge_conjugation, classification_table, derived_intertwinings, relation_check, standard_ops, standard_relations,
    stated_verdicts, ClassificationTable, Intertwining, ROW_UNCONSTRAINED,
};
use crate::equivalence::{
    canonical_nilpotents, classification_invariance_check, pseudo_hermiticity_check, similarity_check,
};
use crate::error::Result;
use crate::gamma::{check_clifford, sigma_dot};
use crate::irrep::{classify_constraint, classify_fixed_point, decompose, format_labels, pair_pattern, PairPattern};
use crate::matrix::{commutator, ComplexMatrix};
use crate::modes::{
    enumerate_subsidiary_conditions, min_pairwise_separation, mode_hamiltonian, reduced_equivalence_check, weyl_reduce,
    Census, WeylReduction, MODE_KAPPAS,
};
use crate::momentum::{
    fw_rotation_residuals, hamiltonian, helicity_matrix, minimal_projector_fields, paper_projector_fields, projector,
    spin_helicity, Family, Momentum3, MomentumSampler, OperatorField, Sign, GAMMA, SPIN,
};
use crate::poincare::{full_invariance_sweep, sweep, SweepSettings};
use crate::report::{anchor, VerificationReport};
use crate::so4::{branching_labels, conservation_check, Variant};

pub const SCHEMA_VERSION: u32 = 1;

/// Residual a negative control must exceed.
pub const CONTROL_THRESHOLD: f64 = 0.1;

pub struct SuiteContext<'a> {
    pub config: &'a SuiteConfig,
    sampler: MomentumSampler,
}

impl SuiteContext<'_> {
    pub fn momenta(&mut self, n: usize) -> Vec<Momentum3> {
        self.sampler.take(n.max(1))
    }

    fn samples(&mut self) -> Vec<Momentum3> {
        let n = self.config.samples;
        self.momenta(n)
    }

    fn sweep_settings(&self) -> SweepSettings {
        SweepSettings {
            h: self.config.fd_step,
            tol_fd: self.config.tol_fd,
            tol_exact: self.config.tol_exact,
        }
    }
}

type SuiteFn = fn(&mut SuiteContext, &mut RunExtras) -> Result<VerificationReport>;

/// Structured side results that the markdown report tabulates.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunExtras {
    pub classification: Option<ClassificationTable>,
    pub census: Option<Census>,
}

pub fn suite_fn(name: &str) -> Option<SuiteFn> {
    Some(match name {
        "clifford" => clifford,
        "projectors" => projectors,
        "poincare" => poincare,
        "irreps" => irreps,
        "cpt" => cpt,
        "modes" => modes,
        "lattice" => lattice,
        "so4" => so4,
        "equivalence" => equivalence,
        _ => return None,
    })
}

/// FNV-1a of the suite name mixed into the run seed.
pub fn suite_seed(seed: u64, name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    seed ^ h
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub version: &'static str,
    pub ok: bool,
    pub config: SuiteConfig,
    pub suites: Vec<VerificationReport>,
    #[serde(flatten)]
    pub extras: RunExtras,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }

    pub fn suite(&self, name: &str) -> Option<&VerificationReport> {
        self.suites.iter().find(|s| s.suite == name)
    }
}

/// Validate `config` and run the selected suites in canonical order.
pub fn run(config: &SuiteConfig) -> Result<RunReport> {
    config.validate()?;
    let mut extras = RunExtras::default();
    let mut suites = Vec::new();
    for &name in crate::config::SUITE_NAMES.iter() {
        if !config.suites.iter().any(|s| s == name) {
            continue;
        }
        suites.push(run_suite(config, name, &mut extras)?);
    }
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION"),
        ok: suites.iter().all(VerificationReport::all_ok),
        config: config.clone(),
        suites,
        extras,
    })
}

/// One suite. A computation error inside the suite becomes a failing
/// check rather than aborting the run.
pub fn run_suite(config: &SuiteConfig, name: &str, extras: &mut RunExtras) -> Result<VerificationReport> {
    config.validate()?;
    let f = suite_fn(name).ok_or_else(|| crate::Error::UnknownSuite {
        name: name.to_string(),
        valid: crate::config::SUITE_NAMES.join(", "),
    })?;
    let mut ctx = SuiteContext {
        config,
        sampler: MomentumSampler::new(suite_seed(config.seed, name), config.momentum_min, config.momentum_max)?,
    };
    let mut rep = match f(&mut ctx, extras) {
        Ok(r) => r,
        Err(e) => {
            let mut r = VerificationReport::new(name);
            r.record_flag(format!("suite aborted: {e}"), false, anchor::PLUMBING);
            r
        }
    };
    rep.suite = name.to_string();
    Ok(rep)
}

fn max_over(momenta: &[Momentum3], f: impl Fn(&Momentum3) -> f64) -> f64 {
    momenta.iter().map(f).fold(0.0, f64::max)
}

fn clifford(ctx: &mut SuiteContext, _: &mut RunExtras) -> Result<VerificationReport> {
    // Integer-entry identities are checked two orders tighter than the
    // momentum-dependent ones.
    let tol = ctx.config.tol_exact * 1e-2;
    let ps = ctx.samples();
    let mut rep = check_clifford(&GAMMA, tol);
    rep.record(
        "H(p)² = E² (relative)",
        max_over(&ps, |p| {
            let h = hamiltonian(p);
            (h * h - ComplexMatrix::identity(4) * p.energy().powi(2)).op_norm() / p.energy().powi(2)
        }),
        tol,
        anchor::HAMILTONIAN,
    );
    rep.record(
        "H(p) Hermitian",
        max_over(&ps, |p| hamiltonian(p).hermiticity_residual() / p.energy()),
        tol,
        anchor::HAMILTONIAN,
    );

    let s = &SPIN.s;
    let mut alg: f64 = 0.0;
    for (a, b, cc) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        // [S_ab, S_bc] = −i S_ac
        let r = commutator(&s[a][b], &s[b][cc]) - s[a][cc] * crate::matrix::c(0.0, -1.0);
        alg = alg.max(r.op_norm());
    }
    rep.record("[S_ab, S_bc] = −i S_ac", alg, tol, anchor::SPIN);
    rep.record(
        "Λ̂ = iγ4ε̂ = −Σ·p/|p|",
        max_over(&ps, |p| (helicity_matrix(p) + spin_helicity(p)).op_norm()),
        ctx.config.tol_exact,
        anchor::HELICITY,
    );
    rep.record(
        "Λ̂² = 1",
        max_over(&ps, |p| {
            let l = helicity_matrix(p);
            (l * l - ComplexMatrix::identity(4)).op_norm()
        }),
        ctx.config.tol_exact,
        anchor::HELICITY,
    );
    let (mut u, mut d): (f64, f64) = (0.0, 0.0);
    for p in &ps {
        let (a, b) = fw_rotation_residuals(p);
        u = u.max(a);
        d = d.max(b);
    }
    rep.record("W W† = 1", u, ctx.config.tol_exact, anchor::SO4);
    rep.record("W H W† = γ0 E", d, ctx.config.tol_exact, anchor::SO4);
    Ok(rep)
}

fn projectors(ctx: &mut SuiteContext, _: &mut RunExtras) -> Result<VerificationReport> {
    let tol = ctx.config.tol_exact;
    let ps = ctx.samples();
    let mut rep = VerificationReport::new("projectors");
    let id = ComplexMatrix::identity(4);
    let fields: Vec<(OperatorField, usize)> = paper_projector_fields()
        .into_iter()
        .map(|f| (f, 2))
        .chain(minimal_projector_fields().into_iter().map(|f| (f, 1)))
        .collect();
    for (q, rank) in &fields {
        let name = q.name();
        rep.record(
            format!("{name}² = {name}"),
            max_over(&ps, |p| (q.eval(p) * q.eval(p) - q.eval(p)).op_norm()),
            tol,
            anchor::PROJECTORS,
        );
        rep.record(
            format!("{name} Hermitian"),
            max_over(&ps, |p| q.eval(p).hermiticity_residual()),
            tol,
            anchor::PROJECTORS,
        );
        let worst_rank = ps
            .iter()
            .map(|p| q.eval(p).rank(1e-8))
            .find(|&r| r != *rank)
            .unwrap_or(*rank);
        rep.record_count(format!("rank {name} = {rank}"), worst_rank, *rank, anchor::PROJECTORS);
        rep.record(
            format!("[{name}, H] = 0"),
            max_over(&ps, |p| commutator(&q.eval(p), &hamiltonian(p)).op_norm() / p.energy()),
            tol,
            anchor::PROJECTORS,
        );
    }
    for f in Family::ALL {
        let n = f.number();
        rep.record(
            format!("P{n}+ + P{n}− = 1"),
            max_over(&ps, |p| {
                (projector(f, Sign::Plus, p) + projector(f, Sign::Minus, p) - id).op_norm()
            }),
            tol,
            anchor::PROJECTORS,
        );
        rep.record(
            format!("P{n}+ P{n}− = 0"),
            max_over(&ps, |p| {
                (projector(f, Sign::Plus, p) * projector(f, Sign::Minus, p)).op_norm()
            }),
            tol,
            anchor::PROJECTORS,
        );
    }
    let minimal = minimal_projector_fields();
    rep.record(
        "Σ minimal projectors = 1",
        max_over(&ps, |p| {
            (minimal.iter().fold(ComplexMatrix::zeros(4), |acc, q| acc + q.eval(p)) - id).op_norm()
        }),
        tol,
        anchor::PROJECTORS,
    );
    let mut mutual: f64 = 0.0;
    for (i, (a, _)) in fields.iter().enumerate() {
        for (b, _) in &fields[i + 1..] {
            mutual = mutual.max(max_over(&ps, |p| commutator(&a.eval(p), &b.eval(p)).op_norm()));
        }
    }
    rep.record("all ten projectors commute pairwise", mutual, tol, anchor::PROJECTORS);
    Ok(rep)
}

fn poincare(ctx: &mut SuiteContext, _: &mut RunExtras) -> Result<VerificationReport> {
    let ps = ctx.samples();
    let settings = ctx.sweep_settings();
    let mut rep = VerificationReport::new("poincare");
    for q in paper_projector_fields().into_iter().chain(minimal_projector_fields()) {
        rep.absorb(full_invariance_sweep(&q, &ps, settings)?);
    }
    let controls = [
        OperatorField::constant("γ0", GAMMA.gamma[0]),
        OperatorField::constant("Σ3", SPIN.sigma[2]),
        OperatorField::new("γ1p1", |p: &Momentum3| GAMMA.gamma[1] * p.components()[0]),
    ];
    for q in &controls {
        let out = sweep(q, &ps, settings)?;
        rep.record_expected_fail(
            format!(
                "control {}: largest invariance residual ≤ {CONTROL_THRESHOLD}",
                q.name()
            ),
            out.max_residual(),
            CONTROL_THRESHOLD,
            anchor::POINCARE,
        );
    }
    Ok(rep)
}

fn irreps(ctx: &mut SuiteContext, _: &mut RunExtras) -> Result<VerificationReport> {
    let tol = ctx.config.tol_exact;
    let ps = ctx.samples();
    let mut rep = VerificationReport::new("irreps");
    let (mut one_dim, mut orth, mut comp): (usize, f64, f64) = (0, 0.0, 0.0);
    for p in &ps {
        let d = decompose(p, tol)?;
        one_dim += d.parts.values().filter(|s| s.dim() == 1).count();
        orth = orth.max(d.orthogonality_residual());
        comp = comp.max(d.completeness_residual());
    }
    rep.record_count(
        "one-dimensional labeled summands",
        one_dim,
        4 * ps.len(),
        anchor::IRREPS,
    );
    rep.record("summands orthogonal", orth, tol, anchor::IRREPS);
    rep.record("summands complete", comp, tol, anchor::IRREPS);

    for q in paper_projector_fields() {
        let first = classify_constraint(&q, &ps[0], tol)?;
        let mut stable = true;
        for p in &ps[1..] {
            stable &= classify_constraint(&q, p, tol)? == first;
        }
        let expected = match q.name().as_bytes()[1] {
            b'1' => PairPattern::MixedChirality,
            b'2' => PairPattern::FixedHelicity,
            _ => PairPattern::FixedEnergySign,
        };
        let name = q.name();
        rep.record_flag(
            format!("{name}Ψ = 0 keeps {} ({expected:?})", format_labels(&first)),
            pair_pattern(&first) == Some(expected),
            anchor::IRREPS,
        );
        rep.record_flag(
            format!("{name}Ψ = 0 label set momentum independent"),
            stable,
            anchor::IRREPS,
        );
    }
    for q in minimal_projector_fields() {
        let (mut ann, mut fix) = (Vec::new(), Vec::new());
        for p in &ps {
            ann.push(classify_constraint(&q, p, tol)?);
            fix.push(classify_fixed_point(&q, p, tol)?);
        }
        let name = q.name();
        rep.record_flag(
            format!("{name}Ψ = 0 keeps three labels, momentum independent"),
            ann.iter().all(|s| s.len() == 3 && *s == ann[0]),
            anchor::IRREPS,
        );
        rep.record_flag(
            format!("{name}Ψ = Ψ keeps {}, momentum independent", format_labels(&fix[0])),
            fix.iter().all(|s| s.len() == 1 && *s == fix[0]),
            anchor::IRREPS,
        );
    }
    Ok(rep)
}

fn cpt(ctx: &mut SuiteContext, extras: &mut RunExtras) -> Result<VerificationReport> {
    let tol = ctx.config.tol_exact;
    let ps = ctx.samples();
    let mut rep = VerificationReport::new("cpt");
    for (o, a, kind) in standard_relations() {
        rep.absorb(relation_check(&o, &a, kind, &ps, tol));
    }
    for rel in derived_intertwinings() {
        let corrected = rel.op.name == "C" && rel.family == Family::EnergySign;
        for s in Sign::BOTH {
            let label = rel.label(s);
            let r = rel.residual(s, &ps);
            if corrected {
                rep.record(format!("{label} (corrected sign)"), r, tol, anchor::INTERTWINING);
            } else {
                rep.record(label, r, tol, anchor::INTERTWINING);
            }
        }
    }
    let unflipped = Intertwining {
        op: charge_conjugation(),
        family: Family::EnergySign,
        flips: false,
    };
    for s in Sign::BOTH {
        rep.record_expected_fail(
            format!("{} (unflipped sign)", unflipped.label(s)),
            unflipped.residual(s, &ps),
            tol,
            anchor::INTERTWINING,
        );
    }
    for o in standard_ops() {
        rep.record(
            format!("{} unitary", o.name),
            o.unitarity_residual(),
            tol,
            anchor::DISCRETE,
        );
        let phase = o.square_phase(tol);
        let shown = phase
            .map(|z| format!("{:+.0}{:+.0}i", z.re, z.im))
            .unwrap_or_else(|| "none".into());
        rep.record_flag(
            format!("{}² is a phase ({shown})", o.name),
            phase.is_some(),
            anchor::DISCRETE,
        );
    }

    let table = classification_table(&ps, tol)?;
    for row in &table.rows {
        rep.record_flag(
            format!("{}: verdicts agree across signs and momenta", row.label),
            row.consistent(),
            anchor::CLASSIFICATION,
        );
    }
    if let Some(row) = table.row(ROW_UNCONSTRAINED) {
        rep.record_flag(
            "unconstrained system invariant under every operator",
            row.verdicts.iter().all(|(_, v)| *v == Some(true)),
            anchor::CLASSIFICATION,
        );
    }
    for (row, op, stated) in stated_verdicts() {
        let got = table.row(row).and_then(|r| r.verdict(op));
        let mark = if stated { "invariant" } else { "not invariant" };
        rep.record_flag(
            format!("{row} under {op}: {mark}"),
            got == Some(stated),
            anchor::CLASSIFICATION,
        );
    }
    extras.classification = Some(table);
    Ok(rep)
}

fn modes(ctx: &mut SuiteContext, _: &mut RunExtras) -> Result<VerificationReport> {
    let tol = ctx.config.tol_exact;
    let ps = ctx.samples();
    let mut rep = VerificationReport::new("modes");
    for f in Family::ALL {
        for s in Sign::BOTH {
            for k in MODE_KAPPAS {
                let m = mode_hamiltonian(f, s, k);
                let (mut leak, mut herm, mut restr, mut spec): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
                for p in &ps {
                    let r = m.residuals(p)?;
                    leak = leak.max(r.leakage / p.energy());
                    herm = herm.max(r.hermiticity / p.energy());
                    restr = restr.max(r.restriction / p.energy());
                    spec = spec.max(r.spectrum);
                }
                let name = m.field.name();
                let (n, fl) = (f.number(), s.flip().symbol());
                let sy = s.symbol();
                rep.record(format!("{name}: P{n}{fl} H P{n}{sy} = 0"), leak, tol, anchor::MODES);
                rep.record(format!("{name}: Hermitian on range P{n}{sy}"), herm, tol, anchor::MODES);
                rep.record(format!("{name}: equals H on range P{n}{sy}"), restr, tol, anchor::MODES);
                rep.record(
                    format!("{name}: spectrum ±E on range P{n}{sy}"),
                    spec,
                    tol,
                    anchor::MODES,
                );
            }
        }
    }
    let mut hand = Vec::new();
    for s in Sign::BOTH {
        let w = WeylReduction::new(s)?;
        let sy = s.symbol();
        rep.record(
            format!("P1{sy}: U B†HB U† = ±σ·p with one fixed U"),
            max_over(&ps, |p| w.residual(p)),
            tol,
            anchor::WEYL,
        );
        rep.record(
            format!("P1{sy}: U unitary"),
            (w.unitary * w.unitary.adjoint() - ComplexMatrix::identity(2)).op_norm(),
            tol,
            anchor::WEYL,
        );
        let mut det: f64 = 0.0;
        for p in &ps {
            let r = weyl_reduce(s, p)?;
            det = det
                .max((r.determinant().re + p.energy().powi(2)).abs() / p.energy().powi(2) + r.determinant().im.abs());
        }
        rep.record(format!("P1{sy}: det = −E²"), det, tol, anchor::WEYL);
        hand.push(w.handedness);
    }
    rep.record_flag(
        format!(
            "opposite chiralities reduce to opposite signs of σ·p ({:+}, {:+})",
            hand[0], hand[1]
        ),
        hand[0] == -hand[1],
        anchor::WEYL,
    );
    // Reference value at p = e3 against the Pauli matrix directly.
    let e3 = Momentum3::new(0.0, 0.0, 1.0)?;
    let w = WeylReduction::new(Sign::Plus)?;
    rep.record(
        "p = e3 reduces to s·σ3",
        (w.weyl_form(&e3) - sigma_dot(&[0.0, 0.0, 1.0]) * w.handedness).op_norm(),
        tol,
        anchor::WEYL,
    );
    Ok(rep)
}

fn lattice(ctx: &mut SuiteContext, extras: &mut RunExtras) -> Result<VerificationReport> {
    let tol = ctx.config.tol_exact;
    let ps = ctx.samples();
    let mut rep = VerificationReport::new("lattice");
    for e in Sign::BOTH {
        for e2 in Sign::BOTH {
            rep.absorb(reduced_equivalence_check(e, e2, &ps, tol)?);
        }
    }
    let census = enumerate_subsidiary_conditions()?;
    rep.record_count("lattice size", census.lattice_size, 16, anchor::CENSUS);
    for (i, expected) in [4, 6, 4].into_iter().enumerate() {
        rep.record_count(
            format!("conditions with projector rank {}", i + 1),
            census.by_rank[i],
            expected,
            anchor::CENSUS,
        );
    }
    rep.record_count("nontrivial conditions", census.nontrivial, 14, anchor::CENSUS);
    rep.record_count(
        "conditions including the unconstrained equation",
        census.with_unconstrained,
        15,
        anchor::CENSUS,
    );
    let mut sep = f64::INFINITY;
    for p in &ps {
        sep = sep.min(min_pairwise_separation(&census, p)?);
    }
    rep.record_flag(
        format!("conditions pairwise inequivalent (min separation {sep:.3})"),
        sep > CONTROL_THRESHOLD,
        anchor::CENSUS,
    );
    let settings = ctx.sweep_settings();
    let mut worst = Vec::new();
    for cond in census.conditions() {
        let r = full_invariance_sweep(&cond.projector, &ps, settings)?;
        if !r.all_ok() {
            worst.push(cond.projector.name().to_string());
        }
        rep.absorb(r);
    }
    rep.record_count(
        "census members failing Poincaré invariance",
        worst.len(),
        0,
        anchor::CENSUS,
    );
    extras.census = Some(census);
    Ok(rep)
}

fn so4(ctx: &mut SuiteContext, _: &mut RunExtras) -> Result<VerificationReport> {
    let tol = ctx.config.tol_exact;
    let ps = ctx.samples();
    let mut rep = VerificationReport::new("so4");
    for v in [Variant::Rotated, Variant::Local, Variant::RotatedBoostOnly] {
        rep.absorb(conservation_check(v, &ps, tol));
    }
    let mut four = true;
    let mut split = true;
    let mut labels = None;
    for p in &ps {
        let b = branching_labels(Variant::Rotated, p, tol)?;
        four &= b.len() == 4 && b.values().all(|&m| m == 1);
        split &= b.keys().all(|l| l.is_massless_split());
        let keys: Vec<_> = b.keys().copied().collect();
        match &labels {
            None => labels = Some(keys),
            Some(k) => four &= *k == keys,
        }
    }
    let shown = labels
        .unwrap_or_default()
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(" ⊕ ");
    rep.record_flag(
        format!("rotated: four one-dimensional labels {shown}"),
        four,
        anchor::BRANCHING,
    );
    rep.record_flag(
        "rotated: each label has one of λ1, λ2 zero and the other ±1/2",
        split,
        anchor::BRANCHING,
    );
    Ok(rep)
}

pub const EQUIVALENCE_KAPPAS: [f64; 2] = [1.0, -3.0];

fn equivalence(ctx: &mut SuiteContext, _: &mut RunExtras) -> Result<VerificationReport> {
    let tol = ctx.config.tol_exact;
    let ps = ctx.samples();
    let mut rep = VerificationReport::new("equivalence");
    for k in EQUIVALENCE_KAPPAS {
        for dim in [2, 4] {
            for g in canonical_nilpotents(dim, k)? {
                rep.absorb(similarity_check(&g, &ps, tol)?);
                rep.absorb(pseudo_hermiticity_check(&g, &ps, tol)?);
                if dim == 4 {
                    rep.absorb(classification_invariance_check(&g, &ps, tol)?);
                }
            }
        }
    }
    Ok(rep)
}
