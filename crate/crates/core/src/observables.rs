//! Steady-state observables: heat current, zero-delay photon correlation and
//! thermal reference populations.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{self, OperatorMatrix, Qubit, C64};
use crate::master::{BathLabel, SteadyState, TransitionRateTable, DEGENERATE_GAP};
use crate::spectrum::{EigenSystem, ModelParams};

/// Denominators of g²(0) at or below this make the ratio undefined.
pub const G2_DARK_THRESHOLD: f64 = 1e-30;

/// Largest share of the g²(0) numerator allowed from the top levels.
pub const G2_TOP_SHARE: f64 = 1e-6;

/// Signed energy flow through one dressed transition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransitionFlow {
    pub upper: usize,
    pub lower: usize,
    pub gap: f64,
    pub value: f64,
}

/// Steady-state heat current into one bath; positive means the bath gains energy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurrentBreakdown {
    pub bath: BathLabel,
    pub total: f64,
    /// α·ω0 of the bath, the unit used by [`CurrentBreakdown::scaled`].
    pub unit: f64,
    pub contributions: Vec<TransitionFlow>,
}

impl CurrentBreakdown {
    /// J / (α ω0).
    pub fn scaled(&self) -> f64 {
        self.total / self.unit
    }
}

fn check_dims(eig: &EigenSystem, other: usize) -> Result<()> {
    if eig.dim() != other {
        return Err(Error::DimensionMismatch {
            expected: eig.dim(),
            found: other,
        });
    }
    Ok(())
}

/// Net energy flow into `bath` summed over all non-degenerate transitions.
pub fn heat_current(
    eig: &EigenSystem,
    table: &TransitionRateTable,
    ss: &SteadyState,
    bath: BathLabel,
) -> Result<CurrentBreakdown> {
    check_dims(eig, table.dim())?;
    check_dims(eig, ss.dim())?;
    let rates = table.bath(bath).ok_or(Error::MissingBath(bath))?;
    let omega0 = eig.params().map_or(1.0, |p| p.omega0);
    let p = ss.populations();

    let mut contributions = Vec::new();
    let mut total = 0.0;
    for n in 0..table.dim() {
        for m in 0..n {
            let gap = table.gap(n, m);
            let (up, down) = (rates.up(n, m), rates.down(n, m));
            if gap <= DEGENERATE_GAP || (up == 0.0 && down == 0.0) {
                continue;
            }
            let value = gap * (down * p[n] - up * p[m]);
            total += value;
            contributions.push(TransitionFlow {
                upper: n,
                lower: m,
                gap,
                value,
            });
        }
    }
    Ok(CurrentBreakdown {
        bath,
        total,
        unit: rates.bath.alpha * omega0,
        contributions,
    })
}

fn quadrature_in_eigenbasis(eig: &EigenSystem) -> Result<OperatorMatrix> {
    let n_max = eig.dim() / 2 - 1;
    eig.to_eigenbasis(&fock::resonator_quadrature(n_max)?)
}

fn lowering_from_quadrature(eig: &EigenSystem, x: &OperatorMatrix) -> DMatrix<C64> {
    let dim = eig.dim();
    let minus_i = C64::new(0.0, -1.0);
    DMatrix::from_fn(dim, dim, |j, k| {
        if k > j {
            minus_i * (eig.energy(k) - eig.energy(j)) * x.get(j, k)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Dressed photon lowering operator X̂⁻ = −i Σ_{k>j} Δ_kj X_jk |φ_j⟩⟨φ_k|,
/// written in the eigenbasis.
pub fn x_minus_operator(eig: &EigenSystem) -> Result<OperatorMatrix> {
    let x = quadrature_in_eigenbasis(eig)?;
    OperatorMatrix::from_matrix(lowering_from_quadrature(eig, &x))
}

/// Zero-delay second-order correlation of the dressed output field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct G2Result {
    /// `None` when the steady state emits nothing.
    pub value: Option<f64>,
    /// ⟨X⁺X⁺X⁻X⁻⟩.
    pub numerator: f64,
    /// ⟨X⁺X⁻⟩².
    pub denominator: f64,
    /// ⟨X⁺X⁻⟩.
    pub one_photon_weight: f64,
    /// Whether the top levels contribute negligibly to the numerator.
    pub truncation_ok: bool,
}

/// g²(0) for the diagonal steady state `ss`.
pub fn g2_zero(eig: &EigenSystem, ss: &SteadyState) -> Result<G2Result> {
    check_dims(eig, ss.dim())?;
    let lowering = lowering_from_quadrature(eig, &quadrature_in_eigenbasis(eig)?);
    Ok(g2_from_lowering(eig, &lowering, ss.populations()))
}

fn g2_from_lowering(eig: &EigenSystem, lowering: &DMatrix<C64>, p: &DVector<f64>) -> G2Result {
    let twice = lowering * lowering;
    let top = eig.top_level_start();
    let mut one = 0.0;
    let mut two = 0.0;
    let mut two_top = 0.0;
    for k in 0..eig.dim() {
        if p[k] == 0.0 {
            continue;
        }
        one += p[k] * lowering.column(k).norm_squared();
        let c = p[k] * twice.column(k).norm_squared();
        two += c;
        if k >= top {
            two_top += c;
        }
    }
    let denominator = one * one;
    G2Result {
        value: (denominator > G2_DARK_THRESHOLD).then(|| two / denominator),
        numerator: two,
        denominator,
        one_photon_weight: one,
        truncation_ok: two_top <= G2_TOP_SHARE * two,
    }
}

/// Low-temperature estimate P₂B₂ / (P₁A₁)² built from the three lowest levels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct G2Approx {
    pub value: Option<f64>,
    pub a1: f64,
    pub b2: f64,
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
    /// P₁ < 0.2 P₀.
    pub precondition_ok: bool,
}

/// Ladder sums A_n = Σ_{l<n} (Δ_nl |X_nl|)² and
/// B_n = Σ_{p<l<n} (Δ_nl Δ_lp |X_nl| |X_lp|)².
pub fn ladder_coefficients(eig: &EigenSystem, n: usize) -> Result<(f64, f64)> {
    if n >= eig.dim() {
        return Err(Error::invalid("n", format!("{n} exceeds the spectrum size {}", eig.dim())));
    }
    let x = quadrature_in_eigenbasis(eig)?;
    Ok(ladder_from_quadrature(eig, &x, n))
}

fn ladder_from_quadrature(eig: &EigenSystem, x: &OperatorMatrix, n: usize) -> (f64, f64) {
    let step = |hi: usize, lo: usize| (eig.energy(hi) - eig.energy(lo)) * x.get(hi, lo).norm();
    let a = (0..n).map(|l| step(n, l).powi(2)).sum();
    let b = (0..n)
        .flat_map(|l| (0..l).map(move |p| (l, p)))
        .map(|(l, p)| (step(n, l) * step(l, p)).powi(2))
        .sum();
    (a, b)
}

pub fn g2_approx(eig: &EigenSystem, ss: &SteadyState) -> Result<G2Approx> {
    check_dims(eig, ss.dim())?;
    if eig.dim() < 3 {
        return Err(Error::invalid("dim", "at least three levels are needed"));
    }
    let x = quadrature_in_eigenbasis(eig)?;
    let (a1, _) = ladder_from_quadrature(eig, &x, 1);
    let (_, b2) = ladder_from_quadrature(eig, &x, 2);
    let (p0, p1, p2) = (ss.population(0), ss.population(1), ss.population(2));
    let numerator = p2 * b2;
    let base = p1 * a1;
    let value = if numerator == 0.0 {
        Some(0.0)
    } else if base * base > G2_DARK_THRESHOLD {
        Some(numerator / (base * base))
    } else {
        None
    };
    Ok(G2Approx {
        value,
        a1,
        b2,
        p0,
        p1,
        p2,
        precondition_ok: p1 < 0.2 * p0,
    })
}

/// Canonical populations exp(−E_k/T)/Z over the numerical spectrum.
pub fn gibbs_populations(eig: &EigenSystem, temperature: f64) -> Result<SteadyState> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::invalid("temperature", format!("{temperature} must be > 0")));
    }
    let e0 = eig.energy(0);
    SteadyState::from_weights(eig.energies().map(|e| (-(e - e0) / temperature).exp()))
}

/// Population attached to a labelled bare-like level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LevelPopulation {
    /// Ladder index; −1 marks the isolated ground state of the transverse limit.
    pub n: i64,
    pub qubit: Qubit,
    /// Photon number of the dominant bare component.
    pub photons: usize,
    pub energy: f64,
    pub population: f64,
}

/// Fully thermalized state of the longitudinal model at a common temperature,
/// from its closed product form, sorted by energy and restricted to the
/// cutoff.
pub fn thermalized_longitudinal_populations(
    params: &ModelParams,
    temperature: f64,
) -> Result<Vec<LevelPopulation>> {
    params.validate()?;
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::invalid("temperature", format!("{temperature} must be > 0")));
    }
    let (w0, eps, t) = (params.omega0, params.epsilon, temperature);
    let shift = params.lambda * params.lambda / w0;
    let norm = (w0 / (2.0 * t)).sinh() / (eps / (2.0 * t)).cosh();
    let mut levels = Vec::with_capacity(params.dim());
    for n in 0..=params.n_max {
        let ladder = norm * (-(n as f64 + 0.5) * w0 / t).exp();
        for (qubit, sign) in [(Qubit::Up, 1.0), (Qubit::Down, -1.0)] {
            levels.push(LevelPopulation {
                n: n as i64,
                qubit,
                photons: n,
                energy: n as f64 * w0 + sign * eps / 2.0 - shift,
                population: ladder * (-sign * eps / (2.0 * t)).exp(),
            });
        }
    }
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(levels)
}
