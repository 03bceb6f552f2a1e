//! Momentum-dependent operators: Hamiltonian, energy sign, helicity, the
//! three projector families, minimal projectors and the diagonalizing
//! rotation.
//!
//! Zero momentum is rejected at construction of [`Momentum3`]; every operator
//! here has an essential singularity at `E = 0`.

use std::fmt;
use std::sync::{Arc, LazyLock};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{spin_generators, GammaSet, SpinGenerators};
use crate::matrix::ComplexMatrix;

pub static GAMMA: LazyLock<GammaSet> = LazyLock::new(GammaSet::dirac);
pub static SPIN: LazyLock<SpinGenerators> = LazyLock::new(|| spin_generators(&GAMMA));

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

/// Nonzero, finite 3-momentum (natural units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Momentum3([f64; 3]);

impl Momentum3 {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        Self::from_array([p1, p2, p3])
    }

    pub fn from_array(p: [f64; 3]) -> Result<Self> {
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteMomentum);
        }
        if p.iter().all(|&x| x == 0.0) {
            return Err(Error::NullMomentum);
        }
        Ok(Self(p))
    }

    #[inline]
    pub fn components(&self) -> &[f64; 3] {
        &self.0
    }

    #[inline]
    pub fn component(&self, axis: Axis) -> f64 {
        self.0[axis.index()]
    }

    /// `E = |p|`.
    pub fn energy(&self) -> f64 {
        let [a, b, cc] = self.0;
        (a * a + b * b + cc * cc).sqrt()
    }

    pub fn unit(&self) -> [f64; 3] {
        let e = self.energy();
        self.0.map(|x| x / e)
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::from_array(self.0.map(|x| x * s))
    }

    pub fn negated(&self) -> Self {
        Self(self.0.map(|x| -x))
    }

    /// `p` when `sign > 0`, `−p` otherwise.
    pub fn signed(&self, sign: f64) -> Self {
        if sign < 0.0 {
            self.negated()
        } else {
            *self
        }
    }

    pub fn shifted(&self, axis: Axis, delta: f64) -> Result<Self> {
        let mut p = self.0;
        p[axis.index()] += delta;
        Self::from_array(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_value(v: f64) -> Self {
        if v < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "−",
        }
    }
}

/// The three projector families: chirality `(1 ± iγ4)/2`, helicity
/// `(1 ± iγ4ε̂)/2` and energy sign `(1 ± ε̂)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    Chirality,
    Helicity,
    EnergySign,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Chirality, Family::Helicity, Family::EnergySign];

    pub fn number(self) -> u8 {
        match self {
            Family::Chirality => 1,
            Family::Helicity => 2,
            Family::EnergySign => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Family::Chirality),
            2 => Some(Family::Helicity),
            3 => Some(Family::EnergySign),
            _ => None,
        }
    }
}

pub fn hamiltonian(p: &Momentum3) -> ComplexMatrix {
    GAMMA.alpha_dot(p.components())
}

/// `ε̂ = H/E`.
pub fn energy_sign(p: &Momentum3) -> ComplexMatrix {
    hamiltonian(p) * (1.0 / p.energy())
}

/// `∂ε̂/∂p_a = α_a/E − H p_a/E³`.
pub fn energy_sign_derivative(p: &Momentum3, axis: Axis) -> ComplexMatrix {
    let e = p.energy();
    GAMMA.alpha[axis.index()] * (1.0 / e) - hamiltonian(p) * (p.component(axis) / (e * e * e))
}

/// `Λ̂ = iγ4ε̂`.
pub fn helicity_matrix(p: &Momentum3) -> ComplexMatrix {
    GAMMA.chirality() * energy_sign(p)
}

/// Spin part of `2(J12 P3 + J23 P1 + J31 P2)/E`; orbital parts drop out
/// against `p`. Equals `−iγ4ε̂` with `γ4 = −γ0γ1γ2γ3`.
pub fn spin_helicity(p: &Momentum3) -> ComplexMatrix {
    SPIN.spin_helicity(p.components())
}

pub fn projector(family: Family, sign: Sign, p: &Momentum3) -> ComplexMatrix {
    let id = ComplexMatrix::identity(4);
    let s = sign.value();
    let x = match family {
        Family::Chirality => GAMMA.chirality(),
        Family::Helicity => helicity_matrix(p),
        Family::EnergySign => energy_sign(p),
    };
    (id + x * s) * 0.5
}

pub fn projector_derivative(family: Family, sign: Sign, p: &Momentum3, axis: Axis) -> ComplexMatrix {
    let s = 0.5 * sign.value();
    match family {
        Family::Chirality => ComplexMatrix::zeros(4),
        Family::Helicity => GAMMA.chirality() * energy_sign_derivative(p, axis) * s,
        Family::EnergySign => energy_sign_derivative(p, axis) * s,
    }
}

/// Rank-1 joint eigenprojector onto `{ε̂ = eps, Λ̂ = lam}`, i.e.
/// `P3^{eps} P2^{lam}`.
pub fn minimal_projector(eps: Sign, lam: Sign, p: &Momentum3) -> ComplexMatrix {
    projector(Family::EnergySign, eps, p) * projector(Family::Helicity, lam, p)
}

pub fn minimal_projector_derivative(eps: Sign, lam: Sign, p: &Momentum3, axis: Axis) -> ComplexMatrix {
    let a = projector(Family::EnergySign, eps, p);
    let b = projector(Family::Helicity, lam, p);
    projector_derivative(Family::EnergySign, eps, p, axis) * b
        + a * projector_derivative(Family::Helicity, lam, p, axis)
}

/// Unitary `W = (E + γ·p)/(√2 E)` with `W H W† = γ0 E`.
pub fn fw_rotation(p: &Momentum3) -> ComplexMatrix {
    let e = p.energy();
    (ComplexMatrix::identity(4) * e + GAMMA.gamma_dot(p.components())) * (1.0 / (std::f64::consts::SQRT_2 * e))
}

/// `(‖W W† − 1‖, ‖W H W† − γ0 E‖ / E)`.
pub fn fw_rotation_residuals(p: &Momentum3) -> (f64, f64) {
    let w = fw_rotation(p);
    let id = ComplexMatrix::identity(4);
    let unitarity = (w * w.adjoint() - id).op_norm();
    let diag = (w * hamiltonian(p) * w.adjoint() - GAMMA.gamma[0] * p.energy()).op_norm() / p.energy();
    (unitarity, diag)
}

type EvalFn = dyn Fn(&Momentum3) -> ComplexMatrix + Send + Sync;
type DerivativeFn = dyn Fn(&Momentum3, Axis) -> ComplexMatrix + Send + Sync;

/// A momentum-dependent matrix, optionally with an analytic gradient.
#[derive(Clone)]
pub struct OperatorField {
    name: String,
    eval: Arc<EvalFn>,
    derivative: Option<Arc<DerivativeFn>>,
}

impl fmt::Debug for OperatorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorField")
            .field("name", &self.name)
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl OperatorField {
    pub fn new(name: impl Into<String>, eval: impl Fn(&Momentum3) -> ComplexMatrix + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            derivative: None,
        }
    }

    pub fn with_derivative(mut self, d: impl Fn(&Momentum3, Axis) -> ComplexMatrix + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    /// p-independent field; derivative identically zero.
    pub fn constant(name: impl Into<String>, m: ComplexMatrix) -> Self {
        let dim = m.dim();
        Self::new(name, move |_| m).with_derivative(move |_, _| ComplexMatrix::zeros(dim))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn eval(&self, p: &Momentum3) -> ComplexMatrix {
        (self.eval)(p)
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn derivative(&self, p: &Momentum3, axis: Axis) -> Option<ComplexMatrix> {
        self.derivative.as_ref().map(|d| d(p, axis))
    }

    /// Central difference with step `h·|p|` along `axis`.
    pub fn central_difference(&self, p: &Momentum3, axis: Axis, h: f64) -> Result<ComplexMatrix> {
        if !(h > 0.0 && h < 0.5) {
            return Err(Error::DegenerateStep(h));
        }
        let step = h * p.energy();
        let fwd = self.eval(&p.shifted(axis, step)?);
        let bwd = self.eval(&p.shifted(axis, -step)?);
        Ok((fwd - bwd) * (1.0 / (2.0 * step)))
    }

    pub fn product(&self, other: &OperatorField) -> OperatorField {
        let (a, b) = (self.clone(), other.clone());
        let name = format!("{}·{}", self.name, other.name);
        let mut out = {
            let (a, b) = (a.clone(), b.clone());
            OperatorField::new(name, move |p| a.eval(p) * b.eval(p))
        };
        if a.has_derivative() && b.has_derivative() {
            out = out.with_derivative(move |p, ax| {
                a.derivative(p, ax).expect("derivative") * b.eval(p)
                    + a.eval(p) * b.derivative(p, ax).expect("derivative")
            });
        }
        out
    }

    pub fn sum(&self, other: &OperatorField) -> OperatorField {
        self.linear_combination(ONE_C, other, ONE_C)
    }

    /// `sa·self + sb·other`.
    pub fn linear_combination(&self, sa: Complex64, other: &OperatorField, sb: Complex64) -> OperatorField {
        let (a, b) = (self.clone(), other.clone());
        let name = format!("({})+({})", self.name, other.name);
        let mut out = {
            let (a, b) = (a.clone(), b.clone());
            OperatorField::new(name, move |p| a.eval(p) * sa + b.eval(p) * sb)
        };
        if a.has_derivative() && b.has_derivative() {
            out = out.with_derivative(move |p, ax| {
                a.derivative(p, ax).expect("derivative") * sa + b.derivative(p, ax).expect("derivative") * sb
            });
        }
        out
    }

    pub fn scaled(&self, s: Complex64) -> OperatorField {
        let a = self.clone();
        let name = format!("{s}·{}", self.name);
        let mut out = {
            let a = a.clone();
            OperatorField::new(name, move |p| a.eval(p) * s)
        };
        if a.has_derivative() {
            out = out.with_derivative(move |p, ax| a.derivative(p, ax).expect("derivative") * s);
        }
        out
    }
}

const ONE_C: Complex64 = Complex64::new(1.0, 0.0);

pub fn hamiltonian_field() -> OperatorField {
    OperatorField::new("H", hamiltonian).with_derivative(|_, ax| GAMMA.alpha[ax.index()])
}

pub fn energy_sign_field() -> OperatorField {
    OperatorField::new("ε̂", energy_sign).with_derivative(energy_sign_derivative)
}

pub fn helicity_field() -> OperatorField {
    OperatorField::new("Λ̂", helicity_matrix).with_derivative(|p, ax| GAMMA.chirality() * energy_sign_derivative(p, ax))
}

pub fn projector_field(family: Family, sign: Sign) -> OperatorField {
    OperatorField::new(format!("P{}{}", family.number(), sign.symbol()), move |p| {
        projector(family, sign, p)
    })
    .with_derivative(move |p, ax| projector_derivative(family, sign, p, ax))
}

pub fn minimal_projector_field(eps: Sign, lam: Sign) -> OperatorField {
    OperatorField::new(format!("Q(ε{},λ{})", eps.symbol(), lam.symbol()), move |p| {
        minimal_projector(eps, lam, p)
    })
    .with_derivative(move |p, ax| minimal_projector_derivative(eps, lam, p, ax))
}

/// All six subsidiary projectors `Pa±`.
pub fn paper_projector_fields() -> Vec<OperatorField> {
    Family::ALL
        .iter()
        .flat_map(|&f| Sign::BOTH.map(|s| projector_field(f, s)))
        .collect()
}

pub fn minimal_projector_fields() -> Vec<OperatorField> {
    Sign::BOTH
        .iter()
        .flat_map(|&e| Sign::BOTH.map(|l| minimal_projector_field(e, l)))
        .collect()
}

/// Seeded momentum sampler: magnitude log-uniform in `[min, max]`, direction
/// uniform on the sphere.
#[derive(Debug, Clone)]
pub struct MomentumSampler {
    rng: ChaCha8Rng,
    min: f64,
    max: f64,
}

impl MomentumSampler {
    pub fn new(seed: u64, min: f64, max: f64) -> Result<Self> {
        if !(min > 0.0 && max >= min && max.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "momentum scale range must be positive and ordered, got ({min}, {max})"
            )));
        }
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            min,
            max,
        })
    }

    pub fn sample(&mut self) -> Momentum3 {
        let (lmin, lmax) = (self.min.ln(), self.max.ln());
        let mag = if lmax > lmin {
            self.rng.gen_range(lmin..=lmax).exp()
        } else {
            self.min
        };
        let cos_t: f64 = self.rng.gen_range(-1.0..=1.0);
        let phi: f64 = self.rng.gen_range(0.0..std::f64::consts::TAU);
        let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
        Momentum3::new(mag * sin_t * phi.cos(), mag * sin_t * phi.sin(), mag * cos_t)
            .expect("sampled momentum has positive magnitude")
    }

    pub fn take(&mut self, n: usize) -> Vec<Momentum3> {
        (0..n).map(|_| self.sample()).collect()
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }
}
