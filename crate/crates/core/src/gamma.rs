//! Dirac-representation gamma matrices and spin generators.
//!
//! Metric signature is (+,−,−,−): `γ0² = 1`, `γa² = −1`. The chirality-type
//! matrix is `γ4 = −γ0γ1γ2γ3`, anti-Hermitian, so `iγ4` is a Hermitian
//! involution.

use crate::matrix::{anticommutator, c, commutator, ComplexMatrix, I, ONE, ZERO};
use crate::report::{anchor, VerificationReport};

/// Pauli matrix `σ_{a+1}` for `a ∈ {0, 1, 2}`.
pub fn pauli(a: usize) -> ComplexMatrix {
    let rows: [[num_complex::Complex64; 2]; 2] = match a {
        0 => [[ZERO, ONE], [ONE, ZERO]],
        1 => [[ZERO, -I], [I, ZERO]],
        2 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("pauli index {a} out of range"),
    };
    ComplexMatrix::from_rows(&[&rows[0], &rows[1]]).expect("2x2")
}

/// `σ·p` for a real 3-vector.
pub fn sigma_dot(p: &[f64; 3]) -> ComplexMatrix {
    (0..3).fold(ComplexMatrix::zeros(2), |acc, a| acc + pauli(a) * p[a])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSet {
    /// `γ0..γ3`.
    pub gamma: [ComplexMatrix; 4],
    pub gamma4: ComplexMatrix,
    /// `αa = γ0γa`.
    pub alpha: [ComplexMatrix; 3],
}

impl GammaSet {
    /// Standard Dirac representation: `γ0 = diag(1,1,−1,−1)`,
    /// `γa = [[0, σa], [−σa, 0]]`.
    pub fn dirac() -> Self {
        let z2 = ComplexMatrix::zeros(2);
        let i2 = ComplexMatrix::identity(2);
        let g0 = ComplexMatrix::from_blocks(&i2, &z2, &z2, &(-i2)).expect("blocks");
        let spatial = [0, 1, 2].map(|a| {
            let s = pauli(a);
            ComplexMatrix::from_blocks(&z2, &s, &(-s), &z2).expect("blocks")
        });
        Self::from_gammas([g0, spatial[0], spatial[1], spatial[2]])
    }

    /// Derive `γ4` and `α` from four gamma matrices without validating them.
    pub fn from_gammas(gamma: [ComplexMatrix; 4]) -> Self {
        let gamma4 = -(gamma[0] * gamma[1] * gamma[2] * gamma[3]);
        let alpha = [1, 2, 3].map(|a| gamma[0] * gamma[a]);
        Self { gamma, gamma4, alpha }
    }

    /// Every stored matrix multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            gamma: self.gamma.map(|g| g * s),
            gamma4: self.gamma4 * s,
            alpha: self.alpha.map(|a| a * s),
        }
    }

    /// `iγ4`, the Hermitian chirality matrix.
    pub fn chirality(&self) -> ComplexMatrix {
        self.gamma4 * I
    }

    /// `γ·p = γ1p1 + γ2p2 + γ3p3` (anti-Hermitian).
    pub fn gamma_dot(&self, p: &[f64; 3]) -> ComplexMatrix {
        (0..3).fold(ComplexMatrix::zeros(4), |acc, a| acc + self.gamma[a + 1] * p[a])
    }

    /// `α·p = γ0 γ·p`.
    pub fn alpha_dot(&self, p: &[f64; 3]) -> ComplexMatrix {
        (0..3).fold(ComplexMatrix::zeros(4), |acc, a| acc + self.alpha[a] * p[a])
    }
}

pub fn metric(mu: usize, nu: usize) -> f64 {
    match (mu, nu) {
        (0, 0) => 1.0,
        (m, n) if m == n => -1.0,
        _ => 0.0,
    }
}

/// Clifford relations, γ4 identities and Hermiticity conventions.
pub fn check_clifford(g: &GammaSet, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new("clifford");
    let id = ComplexMatrix::identity(4);
    for mu in 0..4 {
        for nu in mu..4 {
            let r = anticommutator(&g.gamma[mu], &g.gamma[nu]) - id * (2.0 * metric(mu, nu));
            rep.record(
                format!("{{γ{mu},γ{nu}}} = 2g{mu}{nu}"),
                r.op_norm(),
                tol,
                anchor::CLIFFORD,
            );
        }
    }
    let product = -(g.gamma[0] * g.gamma[1] * g.gamma[2] * g.gamma[3]);
    rep.record("γ4 = −γ0γ1γ2γ3", g.gamma4.distance(&product), tol, anchor::PROJECTORS);
    rep.record(
        "(iγ4)² = 1",
        (g.chirality() * g.chirality() - id).op_norm(),
        tol,
        anchor::PROJECTORS,
    );
    for mu in 0..4 {
        rep.record(
            format!("{{γ4,γ{mu}}} = 0"),
            anticommutator(&g.gamma4, &g.gamma[mu]).op_norm(),
            tol,
            anchor::PROJECTORS,
        );
    }
    for a in 0..3 {
        rep.record(
            format!("[γ4,α{}] = 0", a + 1),
            commutator(&g.gamma4, &g.alpha[a]).op_norm(),
            tol,
            anchor::PROJECTORS,
        );
    }
    rep.record(
        "γ0 Hermitian",
        g.gamma[0].hermiticity_residual(),
        tol,
        anchor::HAMILTONIAN,
    );
    for a in 1..4 {
        rep.record(
            format!("γ{a} anti-Hermitian"),
            (g.gamma[a] + g.gamma[a].adjoint()).frobenius_norm(),
            tol,
            anchor::HAMILTONIAN,
        );
    }
    rep.record(
        "γ4 anti-Hermitian",
        (g.gamma4 + g.gamma4.adjoint()).frobenius_norm(),
        tol,
        anchor::PROJECTORS,
    );
    for a in 0..3 {
        rep.record(
            format!("α{} = γ0γ{} Hermitian", a + 1, a + 1),
            g.alpha[a].hermiticity_residual() + g.alpha[a].distance(&(g.gamma[0] * g.gamma[a + 1])),
            tol,
            anchor::HAMILTONIAN,
        );
    }
    rep
}

/// Levi-Civita symbol on `{0,1,2}`.
pub fn levi_civita(a: usize, b: usize, cc: usize) -> f64 {
    match (a, b, cc) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinGenerators {
    /// `S_ab = (i/4)(γaγb − γbγa)` with spatial indices 0..3 standing for 1..3.
    pub s: [[ComplexMatrix; 3]; 3],
    /// `S_4a = (i/4)(γ4γa − γaγ4) = (i/2)γ4γa`.
    pub s4: [ComplexMatrix; 3],
    /// `Σ_a = ε_abc S_bc`, eigenvalues ±1.
    pub sigma: [ComplexMatrix; 3],
}

#[allow(clippy::needless_range_loop)]
pub fn spin_generators(g: &GammaSet) -> SpinGenerators {
    let quarter_i = c(0.0, 0.25);
    let s = [0, 1, 2].map(|a| [0, 1, 2].map(|b| commutator(&g.gamma[a + 1], &g.gamma[b + 1]) * quarter_i));
    let s4 = [0, 1, 2].map(|a| commutator(&g.gamma4, &g.gamma[a + 1]) * quarter_i);
    let sigma = [0, 1, 2].map(|a| {
        let mut m = ComplexMatrix::zeros(4);
        for b in 0..3 {
            for cc in 0..3 {
                let e = levi_civita(a, b, cc);
                if e != 0.0 {
                    m = m + s[b][cc] * e;
                }
            }
        }
        m
    });
    SpinGenerators { s, s4, sigma }
}

impl SpinGenerators {
    /// Spin helicity `2(S_12 p3 + S_23 p1 + S_31 p2)/|p|`, i.e. `Σ·p/|p|`.
    pub fn spin_helicity(&self, p: &[f64; 3]) -> ComplexMatrix {
        let e = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        (self.s[0][1] * p[2] + self.s[1][2] * p[0] + self.s[2][0] * p[1]) * (2.0 / e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::hermitian_eigen;

    #[test]
    fn squares_follow_signature() {
        let g = GammaSet::dirac();
        let id = ComplexMatrix::identity(4);
        assert!((g.gamma[0] * g.gamma[0]).distance(&id) == 0.0);
        assert!((g.gamma[1] * g.gamma[1]).distance(&(-id)) == 0.0);
        assert!((g.chirality() * g.chirality()).distance(&id) < 1e-15);
    }

    #[test]
    fn standard_set_passes_clifford() {
        let rep = check_clifford(&GammaSet::dirac(), 1e-14);
        assert!(rep.all_ok(), "{:?}", rep.mismatches().collect::<Vec<_>>());
    }

    #[test]
    fn degenerate_set_fails_pair_check() {
        let d = GammaSet::dirac();
        let bad = GammaSet::from_gammas([d.gamma[0], d.gamma[2], d.gamma[2], d.gamma[3]]);
        let rep = check_clifford(&bad, 1e-12);
        assert!(!rep.find("{γ1,γ2} = 2g12").unwrap().pass);
    }

    #[test]
    fn scaled_set_fails_gamma0_square() {
        let rep = check_clifford(&GammaSet::dirac().scaled(2.0), 1e-12);
        assert!(!rep.find("{γ0,γ0} = 2g00").unwrap().pass);
    }

    #[test]
    fn s12_spectrum_is_half_integer() {
        let sg = spin_generators(&GammaSet::dirac());
        let ev: Vec<f64> = hermitian_eigen(&sg.s[0][1], 1e-12)
            .unwrap()
            .into_iter()
            .map(|x| x.0)
            .collect();
        let expect = [-0.5, -0.5, 0.5, 0.5];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn rotation_structure_constants() {
        // With signature (+,−,−,−): [S_ab, S_bc] = i g_bb S_ac = −i S_ac.
        let sg = spin_generators(&GammaSet::dirac());
        let lhs = commutator(&sg.s[0][1], &sg.s[1][2]);
        assert!(lhs.distance(&(sg.s[0][2] * c(0.0, -1.0))) < 1e-15);
        // Equivalently J_a = Σ_a/2 closes as [J_a, J_b] = i ε_abc J_c.
        let j = sg.sigma.map(|m| m * 0.5);
        assert!(commutator(&j[0], &j[1]).distance(&(j[2] * I)) < 1e-15);
    }

    #[test]
    fn s4a_hermitian_and_commutes_with_gamma0() {
        let g = GammaSet::dirac();
        let sg = spin_generators(&g);
        for a in 0..3 {
            assert!(sg.s4[a].hermiticity_residual() < 1e-15);
            assert!(commutator(&sg.s4[a], &g.gamma[0]).frobenius_norm() < 1e-15);
            for b in 0..3 {
                assert!(sg.s[a][b].hermiticity_residual() < 1e-15);
                assert!(commutator(&sg.s[a][b], &g.gamma[0]).frobenius_norm() < 1e-15);
            }
        }
    }
}
