//! Closed-form weak-coupling results used as independent checks on the
//! numerical pipeline.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::Qubit;
use crate::master::BathSpec;
use crate::observables::LevelPopulation;
use crate::spectrum::ModelParams;

/// Overlaps below this magnitude are reported as zero.
pub const OVERLAP_FLOOR: f64 = 1e-14;

/// Largest ladder index accepted by the overlap formulas.
pub const MAX_OVERLAP_INDEX: usize = 60;

/// One named term of a perturbative current.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurrentComponent {
    pub name: &'static str,
    pub value: f64,
    /// Energy carried per unit of the term.
    pub weight: f64,
}

/// Leading-order heat current into the qubit bath.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakCouplingCurrent {
    pub prefactor: f64,
    pub components: Vec<CurrentComponent>,
    pub total: f64,
    /// α_Q·ω0.
    pub unit: f64,
    /// False when the detuning is not large against the coupling.
    pub regime_ok: bool,
    pub flags: Vec<String>,
}

impl WeakCouplingCurrent {
    fn assemble(prefactor: f64, components: Vec<CurrentComponent>, unit: f64, flags: Vec<String>) -> Self {
        let total = prefactor * components.iter().map(|c| c.weight * c.value).sum::<f64>();
        Self {
            prefactor,
            components,
            total,
            unit,
            regime_ok: flags.is_empty(),
            flags,
        }
    }

    pub fn scaled(&self) -> f64 {
        self.total / self.unit
    }

    pub fn component(&self, name: &str) -> Option<f64> {
        self.components.iter().find(|c| c.name == name).map(|c| c.value)
    }
}

fn occupation(bath: &BathSpec, omega: f64) -> f64 {
    if bath.temperature == 0.0 {
        0.0
    } else {
        1.0 / (omega / bath.temperature).exp_m1()
    }
}

fn density(bath: &BathSpec, omega: f64) -> f64 {
    PI * bath.alpha * omega * (-omega / bath.omega_c).exp()
}

fn detuning_flags(params: &ModelParams) -> Vec<String> {
    let detuning = (params.epsilon - params.omega0).abs();
    if detuning < 10.0 * params.lambda {
        vec![format!(
            "detuning |epsilon - omega0| = {detuning:.4} is below 10 lambda = {:.4}",
            10.0 * params.lambda
        )]
    } else {
        Vec::new()
    }
}

fn check_inputs(params: &ModelParams, bath_r: &BathSpec, bath_q: &BathSpec) -> Result<()> {
    params.validate()?;
    bath_r.validate()?;
    bath_q.validate()
}

/// Cotunneling current of the transverse (θ = 0) model.
pub fn jx_weak(params: &ModelParams, bath_r: &BathSpec, bath_q: &BathSpec) -> Result<WeakCouplingCurrent> {
    check_inputs(params, bath_r, bath_q)?;
    let (w0, eps) = (params.omega0, params.epsilon);
    if eps == w0 {
        return Err(Error::ResonantPrefactor);
    }
    let bracket = |w: f64| {
        let (nr, nq) = (occupation(bath_r, w), occupation(bath_q, w));
        nr * (1.0 + nq) - (1.0 + nr) * nq
    };
    let i1 = density(bath_q, w0) * bracket(w0);
    let i2 = density(bath_r, eps) / (2.0 * occupation(bath_q, eps) + 1.0) * bracket(eps);
    let prefactor = (params.lambda / (eps - w0)).powi(2);
    Ok(WeakCouplingCurrent::assemble(
        prefactor,
        vec![
            CurrentComponent {
                name: "I_x1",
                value: i1,
                weight: w0,
            },
            CurrentComponent {
                name: "I_x2",
                value: i2,
                weight: eps,
            },
        ],
        bath_q.alpha * w0,
        detuning_flags(params),
    ))
}

/// Cyclic-flux current of the longitudinal (θ = π/2) model, including the
/// term that only opens when ε < ω0.
pub fn jz_weak(params: &ModelParams, bath_r: &BathSpec, bath_q: &BathSpec) -> Result<WeakCouplingCurrent> {
    check_inputs(params, bath_r, bath_q)?;
    let (w0, eps) = (params.omega0, params.epsilon);
    let heaviside = |x: f64| if x >= 0.0 { 1.0 } else { 0.0 };
    // κ⁺ = γn, κ⁻ = γ(1+n), both → παT as ω → 0
    let kappa_up = |w: f64| bath_q.absorption(w);
    let kappa_down = |w: f64| bath_q.emission(w);

    let nq = occupation(bath_q, eps);
    let nr = occupation(bath_r, w0);
    let norm = 1.0 / (2.0 * nq + 1.0);

    let i1 = heaviside(eps + w0)
        * norm
        * (kappa_down(eps + w0) * nq * nr - kappa_up(eps + w0) * (1.0 + nq) * (1.0 + nr));
    let i2 = if heaviside(eps - w0) > 0.0 {
        norm * (kappa_up(eps - w0) * (1.0 + nq) * nr - kappa_down(eps - w0) * nq * (1.0 + nr))
    } else {
        0.0
    };
    let i3 = if heaviside(w0 - eps) > 0.0 {
        norm * (kappa_down(w0 - eps) * (1.0 + nq) * nr - kappa_up(w0 - eps) * nq * (1.0 + nr))
    } else {
        0.0
    };

    let mut flags = detuning_flags(params);
    if eps == w0 {
        flags.push("epsilon = omega0: gated terms use the zero-frequency rate limit".into());
    }
    let prefactor = (2.0 * params.lambda / w0).powi(2);
    Ok(WeakCouplingCurrent::assemble(
        prefactor,
        ["I_z1", "I_z2", "I_z3"]
            .into_iter()
            .zip([i1, i2, i3])
            .map(|(name, value)| CurrentComponent {
                name,
                value,
                weight: w0,
            })
            .collect(),
        bath_q.alpha * w0,
        flags,
    ))
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

fn check_overlap_args(n: usize, n_prime: usize, g: f64) -> Result<()> {
    if n > MAX_OVERLAP_INDEX || n_prime > MAX_OVERLAP_INDEX {
        return Err(Error::invalid(
            "n",
            format!("indices ({n}, {n_prime}) exceed {MAX_OVERLAP_INDEX}"),
        ));
    }
    if !g.is_finite() || g.abs() > 2.0 {
        return Err(Error::invalid("g", format!("{g} must satisfy |g| <= 2")));
    }
    Ok(())
}

/// σ_x matrix element between the ↑ ladder state n and the ↓ ladder state n′
/// of the longitudinal model, g = λ/ω0:
///
/// e^{−2g²} √(n! n′!) Σ_l (−1)^l (2g)^{n+n′−2l} / ((n−l)! (n′−l)! l!).
///
/// The phase convention makes F(n, n, 0) = (−1)ⁿ and F(0, 1, g) = 2g e^{−2g²}.
pub fn sigma_x_overlap_exact(n: usize, n_prime: usize, g: f64) -> Result<f64> {
    check_overlap_args(n, n_prime, g)?;
    let two_g = 2.0 * g;
    let half_log = 0.5 * (ln_factorial(n) + ln_factorial(n_prime));
    let mut terms: Vec<(f64, f64)> = Vec::with_capacity(n.min(n_prime) + 1);
    for l in 0..=n.min(n_prime) {
        let power = (n + n_prime - 2 * l) as i32;
        if two_g == 0.0 && power > 0 {
            continue;
        }
        let mut sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        if two_g < 0.0 && power % 2 == 1 {
            sign = -sign;
        }
        let log_mag = power as f64 * if power > 0 { two_g.abs().ln() } else { 0.0 } + half_log
            - ln_factorial(n - l)
            - ln_factorial(n_prime - l)
            - ln_factorial(l)
            - 2.0 * g * g;
        terms.push((log_mag, sign));
    }
    terms.sort_by(|a, b| b.0.total_cmp(&a.0));
    let value: f64 = terms.iter().map(|(m, s)| s * m.exp()).sum();
    Ok(if value.abs() < OVERLAP_FLOOR { 0.0 } else { value })
}

/// The same overlap expanded to second order in 2g.
pub fn sigma_x_overlap_second_order(n: usize, n_prime: usize, g: f64) -> Result<f64> {
    check_overlap_args(n, n_prime, g)?;
    let x = 2.0 * g;
    let nf = n as f64;
    let body = if n == n_prime {
        1.0 - (nf + 0.5) * x * x
    } else if n + 1 == n_prime {
        x * (nf + 1.0).sqrt()
    } else if n == n_prime + 1 {
        -x * nf.sqrt()
    } else if n == n_prime + 2 {
        0.5 * x * x * (nf * (nf - 1.0)).sqrt()
    } else if n + 2 == n_prime {
        0.5 * x * x * ((nf + 1.0) * (nf + 2.0)).sqrt()
    } else {
        0.0
    };
    Ok(if n % 2 == 0 { body } else { -body })
}

/// Which analytically solvable limit the zeroth-order populations refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CouplingLimit {
    /// θ = 0: Jaynes-Cummings doublets labelled (n, ±), plus the ground state.
    Theta0,
    /// θ = π/2: displaced ladders labelled (n, ↑/↓).
    Theta90,
}

/// Zeroth-order weak-coupling populations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZerothPopulations {
    pub limit: CouplingLimit,
    /// Sorted by approximate energy.
    pub levels: Vec<LevelPopulation>,
    /// Set when T_Q = 0 forces every weight onto the lower qubit branch.
    pub saturated: bool,
}

impl ZerothPopulations {
    pub fn total(&self) -> f64 {
        self.levels.iter().map(|l| l.population).sum()
    }

    pub fn get(&self, n: i64, qubit: Qubit) -> Option<f64> {
        self.levels
            .iter()
            .find(|l| l.n == n && l.qubit == qubit)
            .map(|l| l.population)
    }
}

/// Product of a qubit Boltzmann factor at T_Q and a photon Boltzmann factor at
/// T_R over the levels that fit below the cutoff, renormalized.
///
/// In the θ = 0 limit the (n, −) level holds n+1 photons and the uncoupled
/// ground state |0, ↓⟩ appears as n = −1 of the lower branch.
pub fn zeroth_populations(
    params: &ModelParams,
    bath_r: &BathSpec,
    bath_q: &BathSpec,
    limit: CouplingLimit,
) -> Result<ZerothPopulations> {
    check_inputs(params, bath_r, bath_q)?;
    let (w0, eps) = (params.omega0, params.epsilon);
    let photon_weight = |m: usize| {
        if bath_r.temperature == 0.0 {
            if m == 0 { 1.0 } else { 0.0 }
        } else {
            (-(m as f64) * w0 / bath_r.temperature).exp()
        }
    };
    let saturated = bath_q.temperature == 0.0;
    // qubit weights relative to the lower branch
    let upper_weight = if saturated {
        0.0
    } else {
        (-eps / bath_q.temperature).exp()
    };
    let shift = match limit {
        CouplingLimit::Theta0 => 0.0,
        CouplingLimit::Theta90 => params.lambda * params.lambda / w0,
    };

    let mut levels = Vec::with_capacity(params.dim());
    for photons in 0..=params.n_max {
        let n_up = photons as i64;
        let n_down = match limit {
            CouplingLimit::Theta0 => photons as i64 - 1,
            CouplingLimit::Theta90 => photons as i64,
        };
        let base = photons as f64 * w0 - shift;
        levels.push(LevelPopulation {
            n: n_up,
            qubit: Qubit::Up,
            photons,
            energy: base + eps / 2.0,
            population: upper_weight * photon_weight(photons),
        });
        levels.push(LevelPopulation {
            n: n_down,
            qubit: Qubit::Down,
            photons,
            energy: base - eps / 2.0,
            population: photon_weight(photons),
        });
    }
    let total: f64 = levels.iter().map(|l| l.population).sum();
    levels.iter_mut().for_each(|l| l.population /= total);
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(ZerothPopulations {
        limit,
        levels,
        saturated,
    })
}
