//! Dressed master equation restricted to eigenstate populations.
//!
//! The dissipator acts between exact eigenstates of the composite system, so
//! populations decouple from coherences and obey a classical rate equation.
//! Coherences are not tracked; only the population generator is built and
//! solved.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{self, OperatorMatrix, PauliAxis};
use crate::spectrum::EigenSystem;

/// Gaps at or below this are treated as degenerate (units of ω0).
pub const DEGENERATE_GAP: f64 = 1e-8;

/// Squared matrix elements below this are stored as exact zeros.
pub const ELEMENT_FLOOR: f64 = 1e-24;

const STEADY_RESIDUAL_RTOL: f64 = 1e-10;

/// Which reservoir a bath couples to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BathLabel {
    /// Couples through â† + â.
    R,
    /// Couples through σ_x.
    Q,
}

impl fmt::Display for BathLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BathLabel::R => f.write_str("R"),
            BathLabel::Q => f.write_str("Q"),
        }
    }
}

/// An Ohmic bosonic reservoir.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub label: BathLabel,
    pub alpha: f64,
    pub omega_c: f64,
    pub temperature: f64,
}

impl BathSpec {
    pub fn new(label: BathLabel, alpha: f64, omega_c: f64, temperature: f64) -> Result<Self> {
        let bath = Self {
            label,
            alpha,
            omega_c,
            temperature,
        };
        bath.validate()?;
        Ok(bath)
    }

    pub fn resonator(alpha: f64, omega_c: f64, temperature: f64) -> Result<Self> {
        Self::new(BathLabel::R, alpha, omega_c, temperature)
    }

    pub fn qubit(alpha: f64, omega_c: f64, temperature: f64) -> Result<Self> {
        Self::new(BathLabel::Q, alpha, omega_c, temperature)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::invalid("alpha", format!("{} must be > 0", self.alpha)));
        }
        if !(self.omega_c.is_finite() && self.omega_c > 0.0) {
            return Err(Error::invalid("omega_c", format!("{} must be > 0", self.omega_c)));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::invalid(
                "temperature",
                format!("{} must be >= 0", self.temperature),
            ));
        }
        Ok(())
    }

    /// System operator the bath couples to, on the full space.
    pub fn coupling_operator(&self, n_max: usize) -> Result<OperatorMatrix> {
        match self.label {
            BathLabel::R => fock::resonator_quadrature(n_max),
            BathLabel::Q => fock::on_qubit(&fock::pauli(PauliAxis::X), n_max),
        }
    }

    /// Upward rate factor γ(ω)n(ω), with the ω → 0 limit πα T.
    pub fn absorption(&self, omega: f64) -> f64 {
        if omega <= DEGENERATE_GAP {
            return PI * self.alpha * self.temperature;
        }
        ohmic(omega, self) * bose(omega, self.temperature)
    }

    /// Downward rate factor γ(ω)[1 + n(ω)], with the ω → 0 limit πα T.
    pub fn emission(&self, omega: f64) -> f64 {
        if omega <= DEGENERATE_GAP {
            return PI * self.alpha * self.temperature;
        }
        ohmic(omega, self) * (1.0 + bose(omega, self.temperature))
    }
}

fn ohmic(omega: f64, bath: &BathSpec) -> f64 {
    PI * bath.alpha * omega * (-omega / bath.omega_c).exp()
}

fn bose(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        0.0
    } else {
        1.0 / (omega / temperature).exp_m1()
    }
}

/// Ohmic spectral density γ(ω) = παω e^{−ω/ω_c} for ω ≥ 0.
pub fn ohmic_density(omega: f64, bath: &BathSpec) -> Result<f64> {
    if omega.is_nan() || omega < 0.0 {
        return Err(Error::invalid("omega", format!("{omega} must be >= 0")));
    }
    Ok(ohmic(omega, bath))
}

/// Bose-Einstein occupation 1/(e^{ω/T} − 1); zero at T = 0.
pub fn bose_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::invalid("omega", format!("{omega} must be > 0")));
    }
    if temperature.is_nan() || temperature < 0.0 {
        return Err(Error::invalid("temperature", format!("{temperature} must be >= 0")));
    }
    Ok(bose(omega, temperature))
}

/// Rates contributed by one bath, stored on the strictly lower triangle
/// `(upper, lower)` with `upper > lower` in eigen-index order.
#[derive(Clone, Debug)]
pub struct BathRates {
    pub bath: BathSpec,
    /// |⟨φ_n|Â|φ_m⟩|², floored at [`ELEMENT_FLOOR`].
    pub elements_sq: DMatrix<f64>,
    /// Γ⁺: lower → upper.
    pub up: DMatrix<f64>,
    /// Γ⁻: upper → lower.
    pub down: DMatrix<f64>,
}

impl BathRates {
    pub fn up(&self, upper: usize, lower: usize) -> f64 {
        self.up[(upper, lower)]
    }

    pub fn down(&self, upper: usize, lower: usize) -> f64 {
        self.down[(upper, lower)]
    }
}

/// Dressed rates for every ordered eigenstate pair and bath.
#[derive(Clone, Debug)]
pub struct TransitionRateTable {
    pub energies: DVector<f64>,
    pub baths: Vec<BathRates>,
}

impl TransitionRateTable {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn bath(&self, label: BathLabel) -> Option<&BathRates> {
        self.baths.iter().find(|b| b.bath.label == label)
    }

    pub fn gap(&self, upper: usize, lower: usize) -> f64 {
        self.energies[upper] - self.energies[lower]
    }
}

/// Build Γ± for both baths from an eigensystem.
pub fn transition_rates(eig: &EigenSystem, baths: &[BathSpec]) -> Result<TransitionRateTable> {
    for label in [BathLabel::R, BathLabel::Q] {
        match baths.iter().filter(|b| b.label == label).count() {
            0 => return Err(Error::MissingBath(label)),
            1 => {}
            _ => return Err(Error::DuplicateBath(label)),
        }
    }
    eig.check_normalized()?;
    let dim = eig.dim();
    // dim = 2(n_max + 1)
    if dim % 2 != 0 {
        return Err(Error::DimensionMismatch {
            expected: dim + 1,
            found: dim,
        });
    }
    let n_max = dim / 2 - 1;
    let energies = eig.energies().clone();

    let per_bath = baths
        .iter()
        .map(|bath| {
            bath.validate()?;
            let op = bath.coupling_operator(n_max)?;
            let mut elements_sq = eig.matrix_elements_sq(&op)?;
            elements_sq.iter_mut().for_each(|x| {
                if *x < ELEMENT_FLOOR {
                    *x = 0.0
                }
            });
            let mut up = DMatrix::zeros(dim, dim);
            let mut down = DMatrix::zeros(dim, dim);
            for n in 0..dim {
                for m in 0..n {
                    let weight = elements_sq[(n, m)];
                    if weight == 0.0 {
                        continue;
                    }
                    let gap = energies[n] - energies[m];
                    up[(n, m)] = bath.absorption(gap) * weight;
                    down[(n, m)] = bath.emission(gap) * weight;
                }
            }
            Ok(BathRates {
                bath: *bath,
                elements_sq,
                up,
                down,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(TransitionRateTable {
        energies,
        baths: per_bath,
    })
}

/// Population generator: `W[(n, m)]` is the total rate m → n; columns sum to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RateMatrix {
    generator: DMatrix<f64>,
}

impl RateMatrix {
    /// Wrap an explicit generator, closing the diagonal.
    pub fn from_off_diagonal(mut generator: DMatrix<f64>) -> Result<Self> {
        let n = generator.nrows();
        if generator.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: generator.ncols(),
            });
        }
        for j in 0..n {
            generator[(j, j)] = 0.0;
            let mut out = 0.0;
            for i in 0..n {
                let w = generator[(i, j)];
                if !(w >= 0.0 && w.is_finite()) {
                    return Err(Error::Numerical(format!("invalid rate {w} at ({i}, {j})")));
                }
                out += w;
            }
            generator[(j, j)] = -out;
        }
        Ok(Self { generator })
    }

    pub fn dim(&self) -> usize {
        self.generator.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.generator
    }

    pub fn rate(&self, from: usize, to: usize) -> f64 {
        self.generator[(to, from)]
    }

    pub fn max_abs(&self) -> f64 {
        self.generator.amax()
    }

    /// Closed communicating classes, each sorted ascending.
    pub fn closed_classes(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut graph = DiGraph::<(), ()>::with_capacity(n, 0);
        let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
        for from in 0..n {
            for to in 0..n {
                if from != to && self.generator[(to, from)] > 0.0 {
                    graph.add_edge(nodes[from], nodes[to], ());
                }
            }
        }
        let components = tarjan_scc(&graph);
        let mut component_of = vec![0usize; n];
        for (c, members) in components.iter().enumerate() {
            for node in members {
                component_of[node.index()] = c;
            }
        }
        let mut closed: Vec<Vec<usize>> = components
            .iter()
            .enumerate()
            .filter(|(c, members)| {
                members.iter().all(|from| {
                    (0..n).all(|to| {
                        to == from.index()
                            || self.generator[(to, from.index())] == 0.0
                            || component_of[to] == *c
                    })
                })
            })
            .map(|(_, members)| {
                let mut v: Vec<usize> = members.iter().map(|m| m.index()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        closed.sort();
        closed
    }
}

/// Assemble the generator from a rate table.
pub fn build_rate_matrix(table: &TransitionRateTable) -> RateMatrix {
    let dim = table.dim();
    let mut w = DMatrix::zeros(dim, dim);
    for rates in &table.baths {
        for n in 0..dim {
            for m in 0..n {
                w[(n, m)] += rates.up[(n, m)];
                w[(m, n)] += rates.down[(n, m)];
            }
        }
    }
    RateMatrix::from_off_diagonal(w).expect("rates from a table are finite and non-negative")
}

/// Steady-state eigenstate populations.
#[derive(Clone, Debug, PartialEq)]
pub struct SteadyState {
    populations: DVector<f64>,
}

impl SteadyState {
    /// Normalize a non-negative vector into a population distribution.
    pub fn from_weights(weights: DVector<f64>) -> Result<Self> {
        let total: f64 = weights.sum();
        if !(total > 0.0 && total.is_finite()) || weights.iter().any(|&w| w < -1e-12) {
            return Err(Error::Numerical("population weights must be non-negative".into()));
        }
        Ok(Self {
            populations: weights.map(|w| w.max(0.0) / total),
        })
    }

    pub fn populations(&self) -> &DVector<f64> {
        &self.populations
    }

    pub fn population(&self, k: usize) -> f64 {
        self.populations[k]
    }

    pub fn dim(&self) -> usize {
        self.populations.len()
    }

    /// Total weight on the levels from `start` upward.
    pub fn tail_weight(&self, start: usize) -> f64 {
        self.populations.rows(start, self.dim() - start).sum()
    }
}

fn single_closed_class(w: &RateMatrix) -> Result<Vec<usize>> {
    let mut classes = w.closed_classes();
    if classes.len() != 1 {
        return Err(Error::DisconnectedStateSpace { blocks: classes });
    }
    Ok(classes.pop().expect("one class"))
}

fn check_residual(w: &RateMatrix, p: &DVector<f64>) -> Result<()> {
    let residual = (w.matrix() * p).amax();
    let scale = w.max_abs();
    if residual > STEADY_RESIDUAL_RTOL * scale {
        return Err(Error::Numerical(format!(
            "steady-state residual {residual:.3e} exceeds {:.1e} * {scale:.3e}",
            STEADY_RESIDUAL_RTOL
        )));
    }
    Ok(())
}

/// Null vector of the generator with unit sum.
///
/// States outside the unique closed class are transient and get zero weight.
/// Inside it the Grassmann-Taksar-Heyman state reduction is used: it only adds
/// and divides non-negative rates, so every population, however small, keeps
/// full relative precision.
pub fn solve_steady_state(w: &RateMatrix) -> Result<SteadyState> {
    let class = single_closed_class(w)?;
    let k = class.len();
    // q[(i, j)] = rate class[i] → class[j]
    let mut q = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            0.0
        } else {
            w.rate(class[i], class[j])
        }
    });
    let mut exit = vec![0.0; k];
    for s in (1..k).rev() {
        let out: f64 = (0..s).map(|j| q[(s, j)]).sum();
        if !(out > 0.0) {
            return Err(Error::Numerical(format!(
                "state reduction pivot vanished at state {}",
                class[s]
            )));
        }
        exit[s] = out;
        for i in 0..s {
            let into = q[(i, s)];
            if into == 0.0 {
                continue;
            }
            let factor = into / out;
            for j in 0..s {
                if j != i {
                    q[(i, j)] += factor * q[(s, j)];
                }
            }
        }
    }
    let mut reduced = vec![0.0; k];
    reduced[0] = 1.0;
    for s in 1..k {
        let inflow: f64 = (0..s).map(|i| reduced[i] * q[(i, s)]).sum();
        reduced[s] = inflow / exit[s];
    }

    let mut weights = DVector::zeros(w.dim());
    for (slot, &state) in class.iter().enumerate() {
        weights[state] = reduced[slot];
    }
    let ss = SteadyState::from_weights(weights)?;
    check_residual(w, ss.populations())?;
    Ok(ss)
}

/// Same null vector via the bordered system: one balance row is replaced by
/// the normalization constraint and solved with full-pivot LU.
pub fn solve_steady_state_bordered(w: &RateMatrix) -> Result<SteadyState> {
    single_closed_class(w)?;
    let n = w.dim();
    let mut a = w.matrix().clone();
    a.row_mut(0).fill(1.0);
    let mut rhs = DVector::zeros(n);
    rhs[0] = 1.0;
    let p = a
        .full_piv_lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("bordered steady-state system is singular".into()))?;
    let ss = SteadyState::from_weights(p.map(|x| if x.abs() <= 1e-12 { x.abs() } else { x }))?;
    check_residual(w, ss.populations())?;
    Ok(ss)
}

/// `exp(W t) p0`.
pub fn evolve_populations(w: &RateMatrix, p0: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::invalid("t", format!("{t} must be >= 0")));
    }
    if p0.len() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: p0.len(),
        });
    }
    if t == 0.0 {
        return Ok(p0.clone());
    }
    let propagator = (w.matrix() * t).exp();
    Ok(propagator * p0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{solve_model, ModelParams};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn bath(label: BathLabel, t: f64) -> BathSpec {
        BathSpec::new(label, 1e-3, 10.0, t).unwrap()
    }

    fn two_level(up: f64, down: f64) -> RateMatrix {
        let w = DMatrix::from_row_slice(2, 2, &[0.0, down, up, 0.0]);
        RateMatrix::from_off_diagonal(w).unwrap()
    }

    #[test]
    fn ohmic_density_examples() {
        let b = bath(BathLabel::Q, 1.0);
        assert_eq!(ohmic_density(0.0, &b).unwrap(), 0.0);
        assert_relative_eq!(
            ohmic_density(1.0, &b).unwrap(),
            PI * 0.001 * (-0.1f64).exp(),
            max_relative = 1e-14
        );
        assert_relative_eq!(ohmic_density(1.0, &b).unwrap(), 2.8425e-3, max_relative = 1e-4);
        assert_relative_eq!(
            ohmic_density(10.0, &b).unwrap(),
            PI * 0.001 * 10.0 * (-1.0f64).exp(),
            max_relative = 1e-14
        );
        assert!(ohmic_density(-0.1, &b).is_err());
    }

    #[test]
    fn bose_occupation_examples() {
        assert_eq!(bose_occupation(0.7, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            bose_occupation(1.3, 1.3).unwrap(),
            1.0 / (std::f64::consts::E - 1.0),
            max_relative = 1e-14
        );
        assert_relative_eq!(bose_occupation(1.0, 1.0).unwrap(), 0.58198, max_relative = 1e-5);
        let t = 0.8;
        assert_relative_eq!(bose_occupation(1e-6 * t, t).unwrap(), 1e6, max_relative = 1e-5);
        assert!(bose_occupation(0.0, 1.0).is_err());
        assert!(bose_occupation(-1.0, 1.0).is_err());
    }

    #[test]
    fn bath_validation() {
        assert!(BathSpec::resonator(0.0, 10.0, 1.0).is_err());
        assert!(BathSpec::resonator(1e-3, 0.0, 1.0).is_err());
        assert!(BathSpec::resonator(1e-3, 10.0, -0.1).is_err());
        assert!(BathSpec::resonator(1e-3, 10.0, 0.0).is_ok());
    }

    #[test]
    fn missing_and_duplicate_baths() {
        let eig = solve_model(&ModelParams::new(1.5, 0.1, 0.0, 6).unwrap()).unwrap();
        let r = bath(BathLabel::R, 1.0);
        let q = bath(BathLabel::Q, 1.0);
        assert!(matches!(
            transition_rates(&eig, &[r]),
            Err(Error::MissingBath(BathLabel::Q))
        ));
        assert!(matches!(
            transition_rates(&eig, &[r, q, q]),
            Err(Error::DuplicateBath(BathLabel::Q))
        ));
    }

    #[test]
    fn zero_temperature_rates() {
        let eig = solve_model(&ModelParams::new(1.5, 0.4, 0.5, 8).unwrap()).unwrap();
        let table = transition_rates(&eig, &[bath(BathLabel::R, 0.0), bath(BathLabel::Q, 0.0)]).unwrap();
        for rates in &table.baths {
            for n in 0..table.dim() {
                for m in 0..n {
                    assert_eq!(rates.up(n, m), 0.0);
                    let gap = table.gap(n, m);
                    let expected = ohmic_density(gap, &rates.bath).unwrap() * rates.elements_sq[(n, m)];
                    assert_relative_eq!(rates.down(n, m), expected, max_relative = 1e-14);
                }
            }
        }
    }

    #[test]
    fn detailed_balance_per_pair() {
        let eig = solve_model(&ModelParams::new(1.5, 0.9, 0.7, 12).unwrap()).unwrap();
        let table = transition_rates(&eig, &[bath(BathLabel::R, 1.3), bath(BathLabel::Q, 0.4)]).unwrap();
        for rates in &table.baths {
            let t = rates.bath.temperature;
            for n in 0..table.dim() {
                for m in 0..n {
                    let (up, down) = (rates.up(n, m), rates.down(n, m));
                    assert!(up >= 0.0 && down >= 0.0);
                    if down > 0.0 {
                        assert_relative_eq!(
                            up / down,
                            (-table.gap(n, m) / t).exp(),
                            max_relative = 1e-10
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn decoupled_qubit_bath_only_flips_qubit() {
        let p = ModelParams::new(1.5, 0.0, 0.9, 6).unwrap();
        let eig = solve_model(&p).unwrap();
        let table = transition_rates(&eig, &[bath(BathLabel::R, 1.0), bath(BathLabel::Q, 1.0)]).unwrap();
        let q = table.bath(BathLabel::Q).unwrap();
        for n in 0..table.dim() {
            for m in 0..n {
                if q.elements_sq[(n, m)] > 0.0 {
                    assert_abs_diff_eq!(table.gap(n, m), 1.5, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn weak_coupling_q_rate_matches_perturbative_estimate() {
        // Γ⁻_Q between |φ⁺_{n+1}⟩ and |φ⁺_n⟩ ≈ γ_Q(ω0)(1 + n_Q(ω0))λ²(n+1)(1/Δ + 1/Σ)²,
        // Δ = ε − ω0 from the rotating terms and Σ = ε + ω0 from the counter-rotating ones.
        let lambda = 0.01;
        let p = ModelParams::new(1.5, lambda, 0.0, 20).unwrap();
        let eig = solve_model(&p).unwrap();
        let qb = bath(BathLabel::Q, 0.5);
        let table = transition_rates(&eig, &[bath(BathLabel::R, 1.5), qb]).unwrap();
        let q = table.bath(BathLabel::Q).unwrap();
        let plus = |n: usize| {
            let target = fock::basis_index(n, fock::Qubit::Up);
            (0..eig.dim())
                .max_by(|&a, &b| {
                    eig.vectors()[(target, a)]
                        .norm()
                        .total_cmp(&eig.vectors()[(target, b)].norm())
                })
                .unwrap()
        };
        let amplitude = 1.0 / 0.5 + 1.0 / 2.5;
        for n in 0..4 {
            let (hi, lo) = (plus(n + 1), plus(n));
            assert!(hi > lo);
            let estimate = ohmic(1.0, &qb) * (1.0 + bose(1.0, 0.5)) * (lambda * amplitude).powi(2) * (n + 1) as f64;
            assert_relative_eq!(q.down(hi, lo), estimate, max_relative = 0.05);
        }
    }

    #[test]
    fn degenerate_pairs_use_zero_frequency_limit() {
        let b = bath(BathLabel::R, 0.8);
        assert_relative_eq!(b.absorption(0.0), PI * 1e-3 * 0.8, max_relative = 1e-15);
        assert_eq!(b.absorption(0.0), b.emission(1e-9));
        // continuity with the finite-gap branch
        assert_relative_eq!(b.absorption(1e-7), PI * 1e-3 * 0.8, max_relative = 1e-6);
    }

    #[test]
    fn two_level_fixed_point() {
        let w = two_level(1.0, 2.0);
        assert_eq!(w.rate(0, 1), 1.0);
        let ss = solve_steady_state(&w).unwrap();
        assert_relative_eq!(ss.population(0), 2.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(ss.population(1), 1.0 / 3.0, max_relative = 1e-15);
        let ss = solve_steady_state(&two_level(0.3, 0.7)).unwrap();
        assert_relative_eq!(ss.population(1) / ss.population(0), 0.3 / 0.7, max_relative = 1e-14);
        let b = solve_steady_state_bordered(&two_level(1.0, 2.0)).unwrap();
        assert_relative_eq!(b.population(0), 2.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn zero_rates_give_zero_generator() {
        let w = RateMatrix::from_off_diagonal(DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(w.max_abs(), 0.0);
        assert!(matches!(
            solve_steady_state(&w),
            Err(Error::DisconnectedStateSpace { blocks }) if blocks == vec![vec![0], vec![1], vec![2]]
        ));
    }

    #[test]
    fn disconnected_blocks_named() {
        let mut m = DMatrix::zeros(4, 4);
        m[(1, 0)] = 1.0;
        m[(0, 1)] = 1.0;
        m[(3, 2)] = 2.0;
        m[(2, 3)] = 1.0;
        let w = RateMatrix::from_off_diagonal(m).unwrap();
        match solve_steady_state(&w) {
            Err(Error::DisconnectedStateSpace { blocks }) => {
                assert_eq!(blocks, vec![vec![0, 1], vec![2, 3]])
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(solve_steady_state_bordered(&w).is_err());
    }

    #[test]
    fn transient_states_get_zero_weight() {
        // 2 decays into {0, 1} and is never repopulated
        let mut m = DMatrix::zeros(3, 3);
        m[(1, 0)] = 1.0;
        m[(0, 1)] = 3.0;
        m[(0, 2)] = 0.5;
        let w = RateMatrix::from_off_diagonal(m).unwrap();
        let ss = solve_steady_state(&w).unwrap();
        assert_eq!(ss.population(2), 0.0);
        assert_relative_eq!(ss.population(0), 0.75, max_relative = 1e-15);
    }

    #[test]
    fn decoupled_system_is_product_of_gibbs_states() {
        let (t_r, t_q) = (1.4, 0.6);
        let p = ModelParams::new(1.5, 0.0, 0.3, 25).unwrap();
        let eig = solve_model(&p).unwrap();
        let table = transition_rates(&eig, &[bath(BathLabel::R, t_r), bath(BathLabel::Q, t_q)]).unwrap();
        let ss = solve_steady_state(&build_rate_matrix(&table)).unwrap();
        // at λ = 0 each eigenvector is a bare product state
        let z_r: f64 = (0..=p.n_max).map(|n| (-(n as f64) / t_r).exp()).sum();
        let z_q = (-0.75 / t_q).exp() + (0.75 / t_q).exp();
        for k in 0..eig.dim() {
            let basis = (0..eig.dim())
                .find(|&b| eig.vectors()[(b, k)].norm() > 0.5)
                .unwrap();
            let (n, up) = (basis / 2, basis % 2 == 0);
            let qubit_energy = if up { 0.75 } else { -0.75 };
            let expected = (-(n as f64) / t_r).exp() / z_r * (-qubit_energy / t_q).exp() / z_q;
            assert_relative_eq!(ss.population(k), expected, max_relative = 1e-10);
        }
    }

    #[test]
    fn equal_temperatures_give_gibbs() {
        let t = 0.35;
        for theta in [0.0, 0.6, std::f64::consts::FRAC_PI_2] {
            let p = ModelParams::new(1.5, 0.8, theta, 20).unwrap();
            let eig = solve_model(&p).unwrap();
            let table = transition_rates(&eig, &[bath(BathLabel::R, t), bath(BathLabel::Q, t)]).unwrap();
            let ss = solve_steady_state(&build_rate_matrix(&table)).unwrap();
            let e0 = eig.energy(0);
            let z: f64 = eig.energies().iter().map(|e| (-(e - e0) / t).exp()).sum();
            for k in 0..eig.dim() {
                let g = (-(eig.energy(k) - e0) / t).exp() / z;
                if g > 1e-10 {
                    assert_relative_eq!(ss.population(k), g, max_relative = 1e-8);
                }
            }
        }
    }

    #[test]
    fn solver_routes_agree() {
        let p = ModelParams::new(1.5, 0.6, 0.4, 10).unwrap();
        let eig = solve_model(&p).unwrap();
        let table = transition_rates(&eig, &[bath(BathLabel::R, 1.5), bath(BathLabel::Q, 0.5)]).unwrap();
        let w = build_rate_matrix(&table);
        let gth = solve_steady_state(&w).unwrap();
        let lu = solve_steady_state_bordered(&w).unwrap();
        for k in 0..w.dim() {
            assert_abs_diff_eq!(gth.population(k), lu.population(k), epsilon = 1e-12);
        }
    }

    #[test]
    fn evolution_relaxes_to_steady_state() {
        let p = ModelParams::new(1.5, 0.5, 0.3, 6).unwrap();
        let eig = solve_model(&p).unwrap();
        let table = transition_rates(&eig, &[bath(BathLabel::R, 1.2), bath(BathLabel::Q, 0.4)]).unwrap();
        let w = build_rate_matrix(&table);
        let ss = solve_steady_state(&w).unwrap();

        let mut gaps: Vec<f64> = w
            .matrix()
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .collect();
        gaps.sort_by(f64::total_cmp);
        assert!(gaps[0] < 1e-12 * w.max_abs());
        let t = 100.0 / gaps[1];

        let mut p0 = DVector::zeros(w.dim());
        p0[w.dim() - 1] = 1.0;
        let late = evolve_populations(&w, &p0, t).unwrap();
        assert_abs_diff_eq!(late.sum(), 1.0, epsilon = 1e-10);
        for k in 0..w.dim() {
            assert_abs_diff_eq!(late[k], ss.population(k), epsilon = 1e-8);
        }
    }

    #[test]
    fn evolution_edge_cases() {
        let w = two_level(1.0, 2.0);
        let p0 = DVector::from_vec(vec![0.25, 0.75]);
        assert_eq!(evolve_populations(&w, &p0, 0.0).unwrap(), p0);
        let zero = RateMatrix::from_off_diagonal(DMatrix::zeros(2, 2)).unwrap();
        let same = evolve_populations(&zero, &p0, 5.0).unwrap();
        assert_abs_diff_eq!(same[0], 0.25, epsilon = 1e-15);
        assert!(evolve_populations(&w, &p0, -1.0).is_err());
        let mid = evolve_populations(&w, &p0, 0.7).unwrap();
        assert_abs_diff_eq!(mid.sum(), 1.0, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn random_tables_close_columns(rates in proptest::collection::vec(0.0f64..5.0, 36)) {
            let energies = DVector::from_fn(6, |i, _| i as f64 * 0.7);
            let mut up = DMatrix::zeros(6, 6);
            let mut down = DMatrix::zeros(6, 6);
            let mut it = rates.iter();
            for n in 0..6 {
                for m in 0..n {
                    up[(n, m)] = *it.next().unwrap();
                    down[(n, m)] = *it.next().unwrap();
                }
            }
            let table = TransitionRateTable {
                energies,
                baths: vec![BathRates { bath: bath(BathLabel::R, 1.0), elements_sq: DMatrix::zeros(6, 6), up, down }],
            };
            let w = build_rate_matrix(&table);
            let scale = w.max_abs().max(1e-300);
            for j in 0..6 {
                prop_assert!(w.matrix().column(j).sum().abs() <= 1e-12 * scale);
                for i in 0..6 {
                    if i != j { prop_assert!(w.matrix()[(i, j)] >= 0.0); }
                }
            }
        }

        #[test]
        fn evolution_preserves_probability(seed_rates in proptest::collection::vec(0.01f64..3.0, 12), t in 0.0f64..20.0) {
            let mut m = DMatrix::zeros(4, 4);
            let mut it = seed_rates.iter();
            for i in 0..4 {
                for j in 0..4 {
                    if i != j { m[(i, j)] = *it.next().unwrap(); }
                }
            }
            let w = RateMatrix::from_off_diagonal(m).unwrap();
            let p0 = DVector::from_vec(vec![0.1, 0.2, 0.3, 0.4]);
            let p = evolve_populations(&w, &p0, t).unwrap();
            prop_assert!((p.sum() - 1.0).abs() <= 1e-10);
            prop_assert!(p.iter().all(|&x| x >= -1e-12));
        }
    }
}
