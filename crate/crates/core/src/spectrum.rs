//! Composite qubit-resonator Hamiltonian, its numerical spectrum, and the
//! two analytically solvable limits (transverse/Jaynes-Cummings and
//! longitudinal).
//!
//! Energies are in units of the resonator frequency ω0, which the rest of
//! the crate fixes to 1.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{self, OperatorMatrix, PauliAxis, Qubit, C64};
use crate::master::BathSpec;

/// Fock cutoff used when none is given.
pub const DEFAULT_N_MAX: usize = 30;

/// Smallest cutoff accepted for a model.
pub const MIN_N_MAX: usize = 5;

/// Fraction of the truncated spectrum treated as truncation-polluted.
pub const TOP_FRACTION: f64 = 0.2;

const NORM_TOL: f64 = 1e-10;

/// Physical parameters of the composite Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Qubit splitting ε.
    pub epsilon: f64,
    /// Resonator frequency ω0 (the energy unit).
    pub omega0: f64,
    /// Coupling strength λ.
    pub lambda: f64,
    /// Composite angle θ in radians, 0 = transverse, π/2 = longitudinal.
    pub theta: f64,
    /// Highest photon number kept.
    pub n_max: usize,
}

impl ModelParams {
    pub fn new(epsilon: f64, lambda: f64, theta: f64, n_max: usize) -> Result<Self> {
        let params = Self {
            epsilon,
            omega0: 1.0,
            lambda,
            theta,
            n_max,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::invalid("epsilon", format!("{} must be > 0", self.epsilon)));
        }
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return Err(Error::invalid("omega0", format!("{} must be > 0", self.omega0)));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::invalid("lambda", format!("{} must be >= 0", self.lambda)));
        }
        if !(0.0..=FRAC_PI_2).contains(&self.theta) {
            return Err(Error::invalid(
                "theta",
                format!("{} must lie in [0, pi/2]", self.theta),
            ));
        }
        if self.n_max < MIN_N_MAX {
            return Err(Error::invalid(
                "n_max",
                format!("{} is below the minimum of {MIN_N_MAX}", self.n_max),
            ));
        }
        Ok(())
    }

    pub fn with_n_max(self, n_max: usize) -> Self {
        Self { n_max, ..self }
    }

    pub fn dim(&self) -> usize {
        fock::system_dim(self.n_max)
    }
}

/// `(ε/2)σ_z + ω0 â†â + λ(cosθ σ_x + sinθ σ_z)(â† + â)` on the truncated space.
pub fn build_hamiltonian(params: &ModelParams) -> Result<OperatorMatrix> {
    params.validate()?;
    raw_hamiltonian(params.epsilon, params.omega0, params.lambda, params.theta, params.n_max)
}

/// Same operator without parameter-range checks.
pub(crate) fn raw_hamiltonian(
    epsilon: f64,
    omega0: f64,
    lambda: f64,
    theta: f64,
    n_max: usize,
) -> Result<OperatorMatrix> {
    let a = fock::annihilation(n_max)?;
    let sz = fock::pauli(PauliAxis::Z);
    let sx = fock::pauli(PauliAxis::X);
    let qubit = fock::on_qubit(&sz.scale(epsilon / 2.0), n_max)?;
    let photons = fock::on_resonator(&(&a.adjoint() * &a).scale(omega0))?;
    let mixed = &sx.scale(theta.cos()) + &sz.scale(theta.sin());
    let coupling = fock::tensor(&(&a + &a.adjoint()), &mixed)?.scale(lambda);
    Ok(&(&qubit + &photons) + &coupling)
}

/// Ascending eigenpairs of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    energies: DVector<f64>,
    vectors: DMatrix<C64>,
    real_vectors: Option<DMatrix<f64>>,
    params: Option<ModelParams>,
}

impl EigenSystem {
    /// Assemble from precomputed pieces; columns must be normalized and
    /// energies ascending.
    pub fn from_parts(
        energies: DVector<f64>,
        vectors: DMatrix<C64>,
        params: Option<ModelParams>,
    ) -> Result<Self> {
        if vectors.nrows() != vectors.ncols() || vectors.ncols() != energies.len() {
            return Err(Error::DimensionMismatch {
                expected: energies.len(),
                found: vectors.ncols(),
            });
        }
        if energies.as_slice().windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Numerical("energies are not sorted ascending".into()));
        }
        let real_vectors = vectors
            .iter()
            .all(|z| z.im == 0.0)
            .then(|| vectors.map(|z| z.re));
        let eig = Self {
            energies,
            vectors,
            real_vectors,
            params,
        };
        eig.check_normalized()?;
        Ok(eig)
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    pub fn energy(&self, k: usize) -> f64 {
        self.energies[k]
    }

    /// Column `k` is |φ_k⟩.
    pub fn vectors(&self) -> &DMatrix<C64> {
        &self.vectors
    }

    pub fn params(&self) -> Option<&ModelParams> {
        self.params.as_ref()
    }

    /// Number of levels at the top of the spectrum regarded as truncation artifacts.
    pub fn top_level_count(&self) -> usize {
        (TOP_FRACTION * self.dim() as f64).ceil() as usize
    }

    /// Index of the first truncation-polluted level.
    pub fn top_level_start(&self) -> usize {
        self.dim() - self.top_level_count()
    }

    pub fn check_normalized(&self) -> Result<()> {
        for (k, col) in self.vectors.column_iter().enumerate() {
            let norm = col.norm();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized { column: k, norm });
            }
        }
        Ok(())
    }

    /// `V† op V`: the operator expressed in the eigenbasis.
    pub fn to_eigenbasis(&self, op: &OperatorMatrix) -> Result<OperatorMatrix> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: op.dim(),
            });
        }
        match (&self.real_vectors, op.is_real()) {
            (Some(v), true) => {
                let m = v.transpose() * op.real_part() * v;
                OperatorMatrix::from_real(&m)
            }
            _ => OperatorMatrix::from_matrix(self.vectors.adjoint() * op.matrix() * &self.vectors),
        }
    }

    /// |⟨φ_n|op|φ_m⟩|² for all pairs.
    pub fn matrix_elements_sq(&self, op: &OperatorMatrix) -> Result<DMatrix<f64>> {
        Ok(self.to_eigenbasis(op)?.matrix().map(|z| z.norm_sqr()))
    }

    /// ⟨φ_k|op|φ_k⟩ for each level.
    pub fn expectation_values(&self, op: &OperatorMatrix) -> Result<Vec<f64>> {
        let m = self.to_eigenbasis(op)?;
        Ok((0..self.dim()).map(|k| m.get(k, k).re).collect())
    }
}

/// Diagonalize a Hermitian operator; energies ascending.
pub fn diagonalize(h: &OperatorMatrix) -> Result<EigenSystem> {
    if !h.is_hermitian() {
        return Err(Error::NonHermitian {
            deviation: h.hermiticity_deviation(),
        });
    }
    let (values, vectors): (Vec<f64>, DMatrix<C64>) = if h.is_real() {
        let eig = SymmetricEigen::new(h.real_part());
        (
            eig.eigenvalues.iter().copied().collect(),
            eig.eigenvectors.map(|x| C64::new(x, 0.0)),
        )
    } else {
        let eig = SymmetricEigen::new(h.matrix().clone());
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };

    let mut order: Vec<usize> = (0..values.len()).collect();
    // stable sort keeps solver order among exact ties
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let energies = DVector::from_iterator(values.len(), order.iter().map(|&i| values[i]));
    let sorted = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |r, c| vectors[(r, order[c])]);
    EigenSystem::from_parts(energies, sorted, None)
}

/// Build and diagonalize the model Hamiltonian.
pub fn solve_model(params: &ModelParams) -> Result<EigenSystem> {
    let h = build_hamiltonian(params)?;
    let mut eig = diagonalize(&h)?;
    eig.params = Some(*params);
    Ok(eig)
}

/// One Jaynes-Cummings doublet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JcDoublet {
    pub n: usize,
    pub e_plus: f64,
    pub e_minus: f64,
    /// θ_n with tan θ_n = 2λ√(n+1)/(ε−ω0), in (−π/2, π/2].
    pub mixing_angle: f64,
}

impl JcDoublet {
    /// Coefficients of |φ⁺_n⟩ on (|n,↑⟩, |n+1,↓⟩).
    pub fn plus_coefficients(&self) -> (f64, f64) {
        ((self.mixing_angle / 2.0).cos(), (self.mixing_angle / 2.0).sin())
    }

    /// Coefficients of |φ⁻_n⟩ on (|n,↑⟩, |n+1,↓⟩).
    pub fn minus_coefficients(&self) -> (f64, f64) {
        (-(self.mixing_angle / 2.0).sin(), (self.mixing_angle / 2.0).cos())
    }

    pub fn gap(&self) -> f64 {
        self.e_plus - self.e_minus
    }
}

/// Rotating-wave (Jaynes-Cummings) solution of the transverse model.
#[derive(Clone, Debug, PartialEq)]
pub struct JcSolution {
    /// Energy of the uncoupled state |0,↓⟩.
    pub ground_energy: f64,
    pub doublets: Vec<JcDoublet>,
}

impl JcSolution {
    /// All energies, ascending.
    pub fn sorted_energies(&self) -> Vec<f64> {
        let mut e: Vec<f64> = std::iter::once(self.ground_energy)
            .chain(self.doublets.iter().flat_map(|d| [d.e_plus, d.e_minus]))
            .collect();
        e.sort_by(f64::total_cmp);
        e
    }
}

pub fn jc_solution(params: &ModelParams) -> Result<JcSolution> {
    params.validate()?;
    let detuning = params.epsilon - params.omega0;
    if detuning == 0.0 && params.lambda == 0.0 {
        return Err(Error::UndefinedMixingAngle);
    }
    let doublets = (0..params.n_max)
        .map(|n| {
            let coupling = 2.0 * params.lambda * ((n + 1) as f64).sqrt();
            let half_gap = (detuning * detuning / 4.0
                + params.lambda * params.lambda * (n + 1) as f64)
                .sqrt();
            let centre = (n as f64 + 0.5) * params.omega0;
            let mixing_angle = if detuning == 0.0 {
                FRAC_PI_2
            } else {
                (coupling / detuning).atan()
            };
            JcDoublet {
                n,
                e_plus: centre + half_gap,
                e_minus: centre - half_gap,
                mixing_angle,
            }
        })
        .collect();
    Ok(JcSolution {
        ground_energy: -params.epsilon / 2.0,
        doublets,
    })
}

/// Exact spectrum of the longitudinally coupled model.
#[derive(Clone, Debug, PartialEq)]
pub struct LongitudinalSolution {
    /// `(E_{n,↑}, E_{n,↓})` for n = 0..=n_max.
    pub levels: Vec<(f64, f64)>,
    /// Displacement λ/ω0 of the oscillator, + for ↓ and − for ↑.
    pub displacement: f64,
}

impl LongitudinalSolution {
    pub fn energy(&self, n: usize, qubit: Qubit) -> f64 {
        match qubit {
            Qubit::Up => self.levels[n].0,
            Qubit::Down => self.levels[n].1,
        }
    }

    pub fn sorted_energies(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.levels.iter().flat_map(|&(u, d)| [u, d]).collect();
        e.sort_by(f64::total_cmp);
        e
    }
}

pub fn longitudinal_solution(params: &ModelParams) -> Result<LongitudinalSolution> {
    params.validate()?;
    let shift = params.lambda * params.lambda / params.omega0;
    let levels = (0..=params.n_max)
        .map(|n| {
            let base = params.omega0 * n as f64 - shift;
            (base + params.epsilon / 2.0, base - params.epsilon / 2.0)
        })
        .collect();
    Ok(LongitudinalSolution {
        levels,
        displacement: params.lambda / params.omega0,
    })
}

/// Displaced ladder state `exp[±(λ/ω0)(â − â†)]|n⟩ ⊗ |σ⟩`, + for ↑.
pub fn longitudinal_state(params: &ModelParams, n: usize, qubit: Qubit) -> Result<DVector<C64>> {
    if n > params.n_max {
        return Err(Error::invalid("n", format!("{n} exceeds n_max = {}", params.n_max)));
    }
    let g = params.lambda / params.omega0;
    let amplitude = match qubit {
        Qubit::Up => g,
        Qubit::Down => -g,
    };
    let d = fock::displacement(params.n_max, amplitude)?;
    let mut state = DVector::zeros(params.dim());
    for m in 0..=params.n_max {
        state[fock::basis_index(m, qubit)] = d.get(m, n);
    }
    Ok(state)
}

/// Smallest Fock cutoff for which the steady-state Q-bath current and g²(0)
/// change by less than `observable_tol` (relative) when the cutoff grows by 5,
/// and whose own point passes the truncation guards of [`crate::point::evaluate`].
///
/// Candidates run 10, 15, …, 55 and are compared against the next one, so the
/// largest cutoff ever evaluated is 60.
pub fn converge_truncation(
    params: &ModelParams,
    bath_r: &BathSpec,
    bath_q: &BathSpec,
    observable_tol: f64,
) -> Result<usize> {
    const START: usize = 10;
    const STEP: usize = 5;
    const CAP: usize = 60;
    const CURRENT_FLOOR: f64 = 1e-10;

    if observable_tol.is_nan() || observable_tol <= 0.0 {
        return Err(Error::invalid("observable_tol", "must be > 0"));
    }
    if observable_tol.is_infinite() {
        return Ok(START);
    }

    let observe = |n_max: usize| -> Result<(f64, Option<f64>, bool)> {
        let spec = crate::point::PointSpec {
            params: params.with_n_max(n_max),
            bath_r: *bath_r,
            bath_q: *bath_q,
        };
        let out = crate::point::evaluate(&spec)?;
        Ok((out.current_q.scaled(), out.g2.value, out.converged))
    };
    let close = |a: f64, b: f64, floor: f64| {
        (a - b).abs() <= observable_tol * a.abs().max(b.abs()) || (a - b).abs() <= floor
    };

    let mut previous = observe(START)?;
    let mut n = START;
    while n + STEP <= CAP {
        let next = observe(n + STEP)?;
        let current_ok = close(previous.0, next.0, CURRENT_FLOOR);
        let g2_ok = match (previous.1, next.1) {
            (Some(a), Some(b)) => close(a, b, 0.0),
            (None, None) => true,
            _ => false,
        };
        if current_ok && g2_ok && previous.2 {
            return Ok(n);
        }
        if n + STEP == CAP {
            return Err(Error::TruncationNotConverged {
                last: CAP,
                previous_current: previous.0,
                last_current: next.0,
                previous_g2: previous.1,
                last_g2: next.1,
            });
        }
        previous = next;
        n += STEP;
    }
    unreachable!("loop always returns by the cap")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn params(epsilon: f64, lambda: f64, theta: f64, n_max: usize) -> ModelParams {
        ModelParams::new(epsilon, lambda, theta, n_max).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0.0, 0.1, 0.0, 10).is_err());
        assert!(ModelParams::new(1.5, -0.1, 0.0, 10).is_err());
        assert!(ModelParams::new(1.5, 0.1, 1.6, 10).is_err());
        assert!(ModelParams::new(1.5, 0.1, 0.0, 4).is_err());
        assert!(ModelParams::new(1.5, 0.1, FRAC_PI_2, 5).is_ok());
    }

    #[test]
    fn decoupled_spectrum() {
        let eig = solve_model(&params(1.5, 0.0, 0.7, 12)).unwrap();
        let mut expected: Vec<f64> = (0..=12)
            .flat_map(|n| [n as f64 + 0.75, n as f64 - 0.75])
            .collect();
        expected.sort_by(f64::total_cmp);
        for (e, x) in eig.energies().iter().zip(&expected) {
            assert_abs_diff_eq!(*e, *x, epsilon = 1e-12);
        }
    }

    #[test]
    fn longitudinal_ground_energy() {
        let eig = solve_model(&params(1.5, 0.5, FRAC_PI_2, 40)).unwrap();
        assert_abs_diff_eq!(eig.energy(0), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn hamiltonian_hermitian_and_real() {
        for theta in [0.0, 0.3, FRAC_PI_4, FRAC_PI_2] {
            let h = build_hamiltonian(&params(1.5, 0.8, theta, 10)).unwrap();
            assert!(h.is_hermitian());
            assert!(h.is_real());
            assert_eq!(h.dim(), 22);
        }
    }

    #[test]
    fn diagonal_input() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, -1.0, 2.0, 0.5]));
        let eig = diagonalize(&OperatorMatrix::from_real(&d).unwrap()).unwrap();
        assert_eq!(eig.energies().as_slice(), &[-1.0, 0.5, 2.0, 3.0]);
        // permutation matrix up to sign
        for (k, src) in [1usize, 3, 2, 0].into_iter().enumerate() {
            assert_abs_diff_eq!(eig.vectors()[(src, k)].norm(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let op = OperatorMatrix::from_real(&m).unwrap();
        assert!(matches!(diagonalize(&op), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn complex_hermitian_input() {
        let sy = fock::pauli(PauliAxis::Y);
        let eig = diagonalize(&sy).unwrap();
        assert_abs_diff_eq!(eig.energy(0), -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.energy(1), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eigensystem_invariants() {
        let p = params(1.5, 1.2, 0.6, 25);
        let h = build_hamiltonian(&p).unwrap();
        let eig = solve_model(&p).unwrap();
        let v = eig.vectors();
        let gram = v.adjoint() * v;
        let id = DMatrix::<C64>::identity(p.dim(), p.dim());
        assert!((gram - id).iter().all(|z| z.norm() < 1e-10));
        let h_norm = h.matrix().norm();
        for k in 0..p.dim() {
            let col = v.column(k);
            let r = h.matrix() * col - col * C64::new(eig.energy(k), 0.0);
            assert!(r.norm() <= 1e-10 * h_norm);
        }
    }

    #[test]
    fn longitudinal_limit_matches_numerics() {
        // Displaced Fock states spread by ~2λ√n photons, so the trustworthy
        // fraction of a truncated spectrum shrinks with λ; the lowest 40% of
        // levels at n_max = 60 are clean for every λ ≤ 1.5.
        for lambda in [0.1, 0.5, 1.0, 1.5] {
            let p = params(1.5, lambda, FRAC_PI_2, 60);
            let eig = solve_model(&p).unwrap();
            let exact = longitudinal_solution(&p).unwrap().sorted_energies();
            let keep = (0.4 * p.dim() as f64) as usize;
            for k in 0..keep {
                assert_abs_diff_eq!(eig.energy(k), exact[k], epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn longitudinal_levels_are_sigma_z_eigenstates() {
        let p = params(1.5, 0.7, FRAC_PI_2, 40);
        let eig = solve_model(&p).unwrap();
        let sz = fock::on_qubit(&fock::pauli(PauliAxis::Z), p.n_max).unwrap();
        for value in eig.expectation_values(&sz).unwrap() {
            assert_abs_diff_eq!(value.abs(), 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn longitudinal_state_is_eigenvector() {
        let p = params(1.5, 0.9, FRAC_PI_2, 50);
        let h = build_hamiltonian(&p).unwrap();
        let sol = longitudinal_solution(&p).unwrap();
        for n in 0..6 {
            for q in [Qubit::Up, Qubit::Down] {
                let v = longitudinal_state(&p, n, q).unwrap();
                let r = h.matrix() * &v - &v * C64::new(sol.energy(n, q), 0.0);
                assert!(r.norm() < 1e-9, "n={n} {q:?} residual {}", r.norm());
            }
        }
    }

    #[test]
    fn transverse_weak_coupling_near_jc() {
        // The counter-rotating terms shift level k by ~λ²(k+1)/(ε+ω0), about
        // 4e-5 to 1.6e-4 for the six lowest levels at λ = 0.01.
        let p = params(1.5, 0.01, 0.0, 30);
        let eig = solve_model(&p).unwrap();
        let jc = jc_solution(&p).unwrap().sorted_energies();
        for k in 0..6 {
            assert_abs_diff_eq!(eig.energy(k), jc[k], epsilon = 2e-4);
        }
        assert_abs_diff_eq!(eig.energy(2), 0.7502, epsilon = 2e-4);
    }

    #[test]
    fn jc_matches_rotating_wave_hamiltonian() {
        // Independent check: numerically diagonalize the rotating-wave model.
        let p = params(1.5, 0.3, 0.0, 20);
        let a = fock::annihilation(p.n_max).unwrap();
        let sp = OperatorMatrix::from_real(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0])).unwrap();
        let sm = sp.adjoint();
        let h = &(&fock::on_qubit(&fock::pauli(PauliAxis::Z).scale(0.75), p.n_max).unwrap()
            + &fock::on_resonator(&(&a.adjoint() * &a)).unwrap())
            + &(&fock::tensor(&a.adjoint(), &sm).unwrap() + &fock::tensor(&a, &sp).unwrap())
                .scale(p.lambda);
        let eig = diagonalize(&h).unwrap();
        // |n_max, ↑⟩ has no partner inside the truncation
        let mut jc = jc_solution(&p).unwrap().sorted_energies();
        jc.push(p.n_max as f64 + 0.75);
        jc.sort_by(f64::total_cmp);
        for k in 0..p.dim() {
            assert_abs_diff_eq!(eig.energy(k), jc[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn jc_examples() {
        let p = params(1.5, 0.0, 0.0, 10);
        let jc = jc_solution(&p).unwrap();
        for d in &jc.doublets {
            assert_abs_diff_eq!(d.e_plus, d.n as f64 + 0.5 + 0.25, epsilon = 1e-15);
            assert_abs_diff_eq!(d.e_minus, d.n as f64 + 0.5 - 0.25, epsilon = 1e-15);
            assert_eq!(d.mixing_angle, 0.0);
        }
        let p = params(1.5, 0.01, 0.0, 10);
        let jc = jc_solution(&p).unwrap();
        let d0 = jc.doublets[0];
        assert_abs_diff_eq!(d0.mixing_angle.tan(), 0.04, epsilon = 1e-14);
        for d in &jc.doublets {
            let expected = 2.0 * (0.0625 + 1e-4 * (d.n + 1) as f64).sqrt();
            assert_abs_diff_eq!(d.gap(), expected, epsilon = 1e-14);
            let (c, s) = d.plus_coefficients();
            assert_abs_diff_eq!(c * c + s * s, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn jc_resonant_without_coupling_is_error() {
        let p = params(1.0, 0.0, 0.0, 10);
        assert!(matches!(jc_solution(&p), Err(Error::UndefinedMixingAngle)));
        assert!(jc_solution(&params(1.0, 0.1, 0.0, 10)).is_ok());
    }

    #[test]
    fn longitudinal_examples() {
        let free = longitudinal_solution(&params(1.5, 0.0, FRAC_PI_2, 5)).unwrap();
        assert_eq!(free.levels[2], (2.75, 1.25));
        let sol = longitudinal_solution(&params(1.5, 1.0, FRAC_PI_2, 8)).unwrap();
        assert_abs_diff_eq!(sol.energy(0, Qubit::Down), -1.75, epsilon = 1e-15);
        for n in 0..8 {
            for q in [Qubit::Up, Qubit::Down] {
                assert_abs_diff_eq!(sol.energy(n + 1, q) - sol.energy(n, q), 1.0, epsilon = 1e-14);
            }
            assert_abs_diff_eq!(sol.energy(n, Qubit::Up) - sol.energy(n, Qubit::Down), 1.5, epsilon = 1e-14);
        }
        assert_eq!(sol.displacement, 1.0);
    }

    #[test]
    fn transverse_spectrum_even_in_lambda() {
        // σ_z conjugation flips the sign of the σ_x coupling term.
        let n_max = 20;
        let plus = raw_hamiltonian(1.5, 1.0, 0.8, 0.0, n_max).unwrap();
        let minus = raw_hamiltonian(1.5, 1.0, -0.8, 0.0, n_max).unwrap();
        let sz = fock::on_qubit(&fock::pauli(PauliAxis::Z), n_max).unwrap();
        assert!((&(&sz * &plus) * &sz).max_abs_diff(&minus) < 1e-14);
        let ep = diagonalize(&plus).unwrap();
        let em = diagonalize(&minus).unwrap();
        for k in 0..ep.dim() {
            assert_abs_diff_eq!(ep.energy(k), em.energy(k), epsilon = 1e-10);
        }
    }

    #[test]
    fn ground_energy_non_increasing_in_lambda() {
        for theta in [0.0, 0.4, FRAC_PI_4, 1.2, FRAC_PI_2] {
            let mut last = f64::INFINITY;
            for i in 0..12 {
                let lambda = 0.15 * i as f64;
                let e0 = solve_model(&params(1.5, lambda, theta, 40)).unwrap().energy(0);
                assert!(e0 <= last + 1e-12, "theta={theta} lambda={lambda}");
                last = e0;
            }
        }
    }

    fn scan(lambda: f64, t_r: f64, t_q: f64, tol: f64) -> Result<usize> {
        let r = crate::master::BathSpec::resonator(1e-3, 10.0, t_r).unwrap();
        let q = crate::master::BathSpec::qubit(1e-3, 10.0, t_q).unwrap();
        converge_truncation(&params(1.5, lambda, FRAC_PI_4, 10), &r, &q, tol)
    }

    #[test]
    fn truncation_scan() {
        assert_eq!(scan(0.01, 1.0, 1.0, f64::INFINITY).unwrap(), 10);
        assert!(scan(0.01, 1.0, 1.0, 0.0).is_err());
        assert_eq!(scan(0.01, 0.1, 0.1, 1e-3).unwrap(), 10);
        // the thermal photon tail sets the cutoff
        let cutoffs: Vec<usize> = [0.5, 1.0, 2.0].iter().map(|&t| scan(1.0, t, t, 1e-3).unwrap()).collect();
        assert!(cutoffs.windows(2).all(|w| w[0] < w[1]), "{cutoffs:?}");
        let hot = scan(0.01, 1.5, 0.5, 1e-3).unwrap();
        let spec = crate::point::PointSpec::new(params(1.5, 0.01, FRAC_PI_4, hot), 1e-3, 10.0, 1.5, 0.5).unwrap();
        assert!(crate::point::evaluate(&spec).unwrap().converged, "{hot}");
    }
}
