//! Evidential quantum dynamical model for the categorisation-decision task.
//!
//! Belief-action states live over the ordered basis
//! `[GA, GW, BA, BW, UA, UW]` (categorise good/bad/uncertain x act
//! attack/withdraw); the D-alone condition drops the uncertain block.
//! Deliberation is a Schroedinger evolution under block-diagonal 2x2
//! Hamiltonians `s * [[h, 1], [1, -h]]`, followed by diagonal 0/1
//! measurements. Everything here is a pure function of its inputs, so
//! prediction pipelines can be evaluated concurrently with distinct
//! parameter sets.

use std::f64::consts::FRAC_1_SQRT_2;

use thiserror::Error;

use crate::scalar::Complex;

pub const DEFAULT_H_MAX: f64 = 50.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("category weights must be probabilities summing to one: {0}")]
    BadWeights(String),
    #[error("category block has (near-)zero norm")]
    ZeroBlockNorm,
    #[error("payoff parameter {value} exceeds the configured bound {bound}")]
    ParamOutOfRange { value: f64, bound: f64 },
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("measurement matrix is not a diagonal 0/1 projector")]
    NotProjector,
    #[error("state vector is not unit-norm")]
    NotNormalized,
    #[error("probability out of range: {0}")]
    OutOfRange(f64),
    #[error("category not present under this condition")]
    BadCategory,
}

/// Experimental condition: categorise-then-decide or decide-alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    CThenD,
    DAlone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Good,
    Bad,
    Uncertain,
}

/// Prefactor convention for the deliberation Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HamiltonianScaling {
    /// `1 / (1 + h^2)`, exactly as the source equations print it.
    #[default]
    PaperLiteral,
    /// `1 / sqrt(1 + h^2)`, the unit-spectrum convention of the quantum
    /// decision literature; the fit absorbs the difference through `h`.
    UnitSpectrum,
}

/// Measurement matrices for the D-alone condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AloneMeasure {
    /// `M_G = diag(1,0)`, `M_B = diag(0,1)` as printed; the B block
    /// contributes its withdraw component, which is what produces the
    /// interference against the classical total probability.
    #[default]
    PaperLiteral,
    /// `diag(1,0)` in both blocks, reading "measure the belief of
    /// attacking" uniformly.
    AttackConsistent,
}

/// How the uncertain-belief redistribution `Phi' = Phi + Phi(A|U)/2`
/// is composed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UncertainCombination {
    /// `Phi(A|G)` and `Phi(A|U)` occupy orthogonal blocks of the six-state
    /// space, so squared norms add: `P = |Phi|^2 + |Phi(A|U)|^2 / 4`.
    #[default]
    Orthogonal,
    /// Component-wise complex addition of the two-vectors before taking
    /// the squared norm. Degenerate below deliberation onset: at `t = 0`
    /// it yields `9/8 > 1`.
    Coherent,
}

/// Model configuration shared by the prediction pipelines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConfig {
    /// Evolution time; `pi/2` lets the attack probability span its full
    /// range over the deliberation.
    pub t: f64,
    pub scaling: HamiltonianScaling,
    pub alone_measure: AloneMeasure,
    pub uncertain: UncertainCombination,
    pub h_max: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            t: std::f64::consts::FRAC_PI_2,
            scaling: HamiltonianScaling::default(),
            alone_measure: AloneMeasure::default(),
            uncertain: UncertainCombination::default(),
            h_max: DEFAULT_H_MAX,
        }
    }
}

/// Payoff-difference parameters of the three Hamiltonian blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianParams {
    pub h_g: f64,
    pub h_b: f64,
    pub h_u: f64,
}

impl HamiltonianParams {
    pub fn new(h_g: f64, h_b: f64, h_u: f64) -> HamiltonianParams {
        HamiltonianParams { h_g, h_b, h_u }
    }
}

/// Categorisation probabilities feeding the initial superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CategoryWeights {
    p_g: f64,
    p_b: f64,
    p_u: f64,
}

impl CategoryWeights {
    pub fn new(p_g: f64, p_b: f64, p_u: f64) -> Result<CategoryWeights, QuantumError> {
        for (name, p) in [("p_g", p_g), ("p_b", p_b), ("p_u", p_u)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(QuantumError::BadWeights(format!("{name} = {p}")));
            }
        }
        let sum = p_g + p_b + p_u;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(QuantumError::BadWeights(format!("sum = {sum}")));
        }
        Ok(CategoryWeights { p_g, p_b, p_u })
    }

    /// Weights with no uncertain share, as used by the shipped datasets.
    pub fn certain(p_g: f64, p_b: f64) -> Result<CategoryWeights, QuantumError> {
        CategoryWeights::new(p_g, p_b, 0.0)
    }

    pub fn p_g(&self) -> f64 {
        self.p_g
    }

    pub fn p_b(&self) -> f64 {
        self.p_b
    }

    pub fn p_u(&self) -> f64 {
        self.p_u
    }
}

/// A belief-action amplitude column over the fixed basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeState {
    amplitudes: Vec<Complex>,
    condition: Condition,
}

impl AmplitudeState {
    pub fn new(amplitudes: Vec<Complex>, condition: Condition) -> Result<Self, QuantumError> {
        let expected = match condition {
            Condition::CThenD => 6,
            Condition::DAlone => 4,
        };
        if amplitudes.len() != expected {
            return Err(QuantumError::BadWeights(format!(
                "expected {expected} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.abs_sq()).sum();
        if (norm_sq - 1.0).abs() > 1e-9 {
            return Err(QuantumError::NotNormalized);
        }
        Ok(AmplitudeState { amplitudes, condition })
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn condition(&self) -> Condition {
        self.condition
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.abs_sq()).sum()
    }
}

/// A 2x2 complex matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [[Complex; 2]; 2]);

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2([
        [Complex::ONE, Complex::ZERO],
        [Complex::ZERO, Complex::ONE],
    ]);

    /// `diag(1, 0)`: selects the attack component.
    pub const ATTACK: Matrix2 = Matrix2([
        [Complex::ONE, Complex::ZERO],
        [Complex::ZERO, Complex::ZERO],
    ]);

    /// `diag(0, 1)`: selects the withdraw component.
    pub const WITHDRAW: Matrix2 = Matrix2([
        [Complex::ZERO, Complex::ZERO],
        [Complex::ZERO, Complex::ONE],
    ]);

    pub fn real_symmetric(a: f64, b: f64, d: f64) -> Matrix2 {
        Matrix2([
            [Complex::real(a), Complex::real(b)],
            [Complex::real(b), Complex::real(d)],
        ])
    }

    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        let mut out = [[Complex::ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Matrix2(out)
    }

    pub fn apply(&self, v: [Complex; 2]) -> [Complex; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    pub fn dagger(&self) -> Matrix2 {
        Matrix2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    pub fn scale(&self, k: Complex) -> Matrix2 {
        Matrix2(self.0.map(|row| row.map(|c| c * k)))
    }

    pub fn add(&self, rhs: &Matrix2) -> Matrix2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.0[0][0].im.abs() <= tol
            && self.0[1][1].im.abs() <= tol
            && (self.0[0][1] - self.0[1][0].conj()).abs() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let p = self.dagger().mul(self);
        (p.0[0][0] - Complex::ONE).abs() <= tol
            && (p.0[1][1] - Complex::ONE).abs() <= tol
            && p.0[0][1].abs() <= tol
            && p.0[1][0].abs() <= tol
    }

    fn is_diagonal_01_projector(&self, tol: f64) -> bool {
        let diag_ok = |c: Complex| (c.abs() <= tol) || ((c - Complex::ONE).abs() <= tol);
        self.0[0][1].abs() <= tol
            && self.0[1][0].abs() <= tol
            && diag_ok(self.0[0][0])
            && diag_ok(self.0[1][1])
    }
}

pub fn norm_sq2(v: [Complex; 2]) -> f64 {
    v[0].abs_sq() + v[1].abs_sq()
}

/// The canonical uniform action block `[1/sqrt2, 1/sqrt2]`, also
/// substituted for the uncertain block when `p_u = 0` so that
/// `Phi(A|U)` stays computable.
pub fn canonical_block() -> [Complex; 2] {
    [Complex::real(FRAC_1_SQRT_2), Complex::real(FRAC_1_SQRT_2)]
}

/// Initial superposition: within each category block the attack and
/// withdraw amplitudes are equal and real, and block norms are the square
/// roots of the category probabilities.
pub fn build_initial_state(
    weights: &CategoryWeights,
    condition: Condition,
) -> Result<AmplitudeState, QuantumError> {
    if condition == Condition::DAlone && weights.p_u() != 0.0 {
        return Err(QuantumError::BadWeights(
            "the D-alone condition carries no uncertain block".into(),
        ));
    }
    let block = |p: f64| Complex::real((p / 2.0).sqrt());
    let mut amps = vec![
        block(weights.p_g()),
        block(weights.p_g()),
        block(weights.p_b()),
        block(weights.p_b()),
    ];
    if condition == Condition::CThenD {
        amps.push(block(weights.p_u()));
        amps.push(block(weights.p_u()));
    }
    AmplitudeState::new(amps, condition)
}

/// Unit-norm conditional amplitude distribution of one category block.
pub fn project_category(
    state: &AmplitudeState,
    category: Category,
) -> Result<[Complex; 2], QuantumError> {
    let offset = match (state.condition(), category) {
        (_, Category::Good) => 0,
        (_, Category::Bad) => 2,
        (Condition::CThenD, Category::Uncertain) => 4,
        (Condition::DAlone, Category::Uncertain) => return Err(QuantumError::BadCategory),
    };
    let a = state.amplitudes()[offset];
    let w = state.amplitudes()[offset + 1];
    let norm = (a.abs_sq() + w.abs_sq()).sqrt();
    if norm < 1e-12 {
        return Err(QuantumError::ZeroBlockNorm);
    }
    Ok([a.scale(1.0 / norm), w.scale(1.0 / norm)])
}

/// One deliberation Hamiltonian block `s * [[h, 1], [1, -h]]`.
pub fn build_hamiltonian_block(h: f64, config: &ModelConfig) -> Result<Matrix2, QuantumError> {
    if !h.is_finite() || h.abs() > config.h_max {
        return Err(QuantumError::ParamOutOfRange { value: h, bound: config.h_max });
    }
    let s = match config.scaling {
        HamiltonianScaling::PaperLiteral => 1.0 / (1.0 + h * h),
        HamiltonianScaling::UnitSpectrum => 1.0 / (1.0 + h * h).sqrt(),
    };
    Ok(Matrix2::real_symmetric(s * h, s, -s * h))
}

/// `U(t) = exp(-i H t)` for a Hermitian `H`, by exact trace split:
/// with `H = (tr/2) I + H'` and `H'^2 = w^2 I`,
/// `U = exp(-i (tr/2) t) (cos(wt) I - i sin(wt) H'/w)`.
/// This covers the deliberation blocks (traceless, `w = s sqrt(1+h^2)`)
/// and doubles as the eigendecomposition fallback for any Hermitian input.
pub fn unitary_2x2(hblock: &Matrix2, t: f64) -> Result<Matrix2, QuantumError> {
    if !hblock.is_hermitian(1e-12) {
        return Err(QuantumError::NotHermitian);
    }
    let half_trace = (hblock.0[0][0].re + hblock.0[1][1].re) / 2.0;
    let a = hblock.0[0][0].re - half_trace;
    let b = hblock.0[0][1];
    let w = (a * a + b.abs_sq()).sqrt();

    let u = if w < 1e-300 {
        Matrix2::IDENTITY
    } else {
        // cos(wt) I - i sin(wt) H'/w
        let c = (w * t).cos();
        let s = (w * t).sin();
        let hp = Matrix2([[Complex::real(a), b], [b.conj(), Complex::real(-a)]]);
        Matrix2::IDENTITY
            .scale(Complex::real(c))
            .add(&hp.scale(Complex::new(0.0, -s / w)))
    };
    let phase = Complex::new((half_trace * t).cos(), -(half_trace * t).sin());
    Ok(u.scale(phase))
}

/// Schroedinger update of a conditional 2-vector: `psi(t2) = U(t) psi(t1)`.
pub fn evolve(state2: [Complex; 2], hblock: &Matrix2, t: f64) -> Result<[Complex; 2], QuantumError> {
    Ok(unitary_2x2(hblock, t)?.apply(state2))
}

/// `Phi = M psi`, with no renormalization; `M` must be a diagonal 0/1
/// projector.
pub fn attack_amplitude(psi2: [Complex; 2], measure: &Matrix2) -> Result<[Complex; 2], QuantumError> {
    if !measure.is_diagonal_01_projector(1e-12) {
        return Err(QuantumError::NotProjector);
    }
    Ok(measure.apply(psi2))
}

/// Equal redistribution of the uncertain attack amplitude onto the two
/// certain cases: `Phi'(A|G) = Phi(A|G) + Phi(A|U)/2`, likewise for B,
/// component-wise.
pub fn redistribute_uncertain(
    phi_g: [Complex; 2],
    phi_b: [Complex; 2],
    phi_u: [Complex; 2],
) -> ([Complex; 2], [Complex; 2]) {
    let half_u = [phi_u[0].scale(0.5), phi_u[1].scale(0.5)];
    (
        [phi_g[0] + half_u[0], phi_g[1] + half_u[1]],
        [phi_b[0] + half_u[0], phi_b[1] + half_u[1]],
    )
}

/// A prediction whose value escaped `[0, 1]`; reported, never raised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeWarning {
    pub quantity: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CtdPrediction {
    pub p_a_given_g: f64,
    pub p_a_given_b: f64,
    pub p_total: f64,
    pub warnings: Vec<RangeWarning>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlonePrediction {
    pub p_attack: f64,
    pub warnings: Vec<RangeWarning>,
}

fn range_check(warnings: &mut Vec<RangeWarning>, quantity: &'static str, value: f64) {
    if !(-1e-12..=1.0 + 1e-12).contains(&value) {
        warnings.push(RangeWarning { quantity, value });
    }
}

/// Conditional block state for a category, substituting the canonical
/// uniform block when the weight is zero.
fn block_state(state: &AmplitudeState, category: Category) -> [Complex; 2] {
    project_category(state, category).unwrap_or_else(|_| canonical_block())
}

/// C-then-D predictions: attack probabilities conditional on each certain
/// categorisation, with the uncertain belief redistributed equally, and
/// their total `P_T = P(G) P(A|G) + P(B) P(A|B)`.
pub fn predict_ctd(
    params: &HamiltonianParams,
    weights: &CategoryWeights,
    config: &ModelConfig,
) -> Result<CtdPrediction, QuantumError> {
    let state = build_initial_state(weights, Condition::CThenD)?;
    let psi_g = block_state(&state, Category::Good);
    let psi_b = block_state(&state, Category::Bad);
    let psi_u = block_state(&state, Category::Uncertain);

    let measure = Matrix2::ATTACK;
    let phi = |h: f64, psi: [Complex; 2]| -> Result<[Complex; 2], QuantumError> {
        let block = build_hamiltonian_block(h, config)?;
        attack_amplitude(evolve(psi, &block, config.t)?, &measure)
    };
    let phi_g = phi(params.h_g, psi_g)?;
    let phi_b = phi(params.h_b, psi_b)?;
    let phi_u = phi(params.h_u, psi_u)?;

    let (p_a_given_g, p_a_given_b) = match config.uncertain {
        UncertainCombination::Orthogonal => (
            norm_sq2(phi_g) + 0.25 * norm_sq2(phi_u),
            norm_sq2(phi_b) + 0.25 * norm_sq2(phi_u),
        ),
        UncertainCombination::Coherent => {
            let (pg, pb) = redistribute_uncertain(phi_g, phi_b, phi_u);
            (norm_sq2(pg), norm_sq2(pb))
        }
    };
    let p_total = weights.p_g() * p_a_given_g + weights.p_b() * p_a_given_b;

    let mut warnings = Vec::new();
    range_check(&mut warnings, "P(A|G)", p_a_given_g);
    range_check(&mut warnings, "P(A|B)", p_a_given_b);
    range_check(&mut warnings, "P_T(A)", p_total);
    Ok(CtdPrediction { p_a_given_g, p_a_given_b, p_total, warnings })
}

/// D-alone prediction: the unit-norm superposition evolves per block and
/// the printed measurement matrices are applied, so
/// `P(A) = P(G) |M_G U_G psi_G|^2 + P(B) |M_B U_B psi_B|^2`.
pub fn predict_alone(
    params: &HamiltonianParams,
    weights: &CategoryWeights,
    config: &ModelConfig,
) -> Result<AlonePrediction, QuantumError> {
    let state = build_initial_state(weights, Condition::DAlone)?;
    let psi_g = block_state(&state, Category::Good);
    let psi_b = block_state(&state, Category::Bad);

    let m_b = match config.alone_measure {
        AloneMeasure::PaperLiteral => Matrix2::WITHDRAW,
        AloneMeasure::AttackConsistent => Matrix2::ATTACK,
    };
    let block_g = build_hamiltonian_block(params.h_g, config)?;
    let block_b = build_hamiltonian_block(params.h_b, config)?;
    let v_g = attack_amplitude(evolve(psi_g, &block_g, config.t)?, &Matrix2::ATTACK)?;
    let v_b = attack_amplitude(evolve(psi_b, &block_b, config.t)?, &m_b)?;

    let raw = weights.p_g() * norm_sq2(v_g) + weights.p_b() * norm_sq2(v_b);
    let mut warnings = Vec::new();
    range_check(&mut warnings, "P(A)", raw);
    Ok(AlonePrediction { p_attack: raw.min(1.0), warnings })
}

/// Law-of-total-probability combination
/// `P_T(A) = P(G) P(A|G) + P(B) P(A|B)`.
pub fn total_probability(
    p_g: f64,
    p_a_given_g: f64,
    p_b: f64,
    p_a_given_b: f64,
) -> Result<f64, QuantumError> {
    for v in [p_g, p_a_given_g, p_b, p_a_given_b] {
        if !(0.0..=1.0).contains(&v) {
            return Err(QuantumError::OutOfRange(v));
        }
    }
    Ok(p_g * p_a_given_g + p_b * p_a_given_b)
}
