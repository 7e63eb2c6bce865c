//! Dense operator algebra on the truncated resonator ⊗ qubit Hilbert space.
//!
//! Every full-system operator lives on `(n_max + 1) * 2` basis states ordered
//! resonator-first: index `2 * n + q` holds photon number `n` and qubit state
//! `q` (0 = ↑, 1 = ↓). [`basis_index`] is the single place that encodes this.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;

/// Tensor products are always taken as `resonator ⊗ qubit`.
pub const RESONATOR_FIRST: bool = true;

/// Largest operator side length accepted by [`tensor`].
pub const MAX_DIM: usize = 4096;

/// Largest displacement amplitude accepted by [`displacement`].
pub const MAX_DISPLACEMENT: f64 = 5.0;

const HERMITIAN_RTOL: f64 = 1e-12;

/// Qubit basis state, with σ_z|↑⟩ = +|↑⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Qubit {
    Up,
    Down,
}

impl Qubit {
    pub fn index(self) -> usize {
        match self {
            Qubit::Up => 0,
            Qubit::Down => 1,
        }
    }
}

/// Position of `|photons, qubit⟩` in the product basis.
pub fn basis_index(photons: usize, qubit: Qubit) -> usize {
    debug_assert!(RESONATOR_FIRST);
    2 * photons + qubit.index()
}

/// Dimension of the full product space for a given Fock cutoff.
pub fn system_dim(n_max: usize) -> usize {
    2 * (n_max + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// A dense complex square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix(DMatrix<C64>);

impl OperatorMatrix {
    pub fn from_matrix(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        Ok(Self(entries))
    }

    pub fn from_real(entries: &DMatrix<f64>) -> Result<Self> {
        Self::from_matrix(entries.map(|x| C64::new(x, 0.0)))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// max |M − M†|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= HERMITIAN_RTOL * self.max_abs()
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.0.map(|z| z.re)
    }

    /// max |self − other| over all entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "operator dimensions differ");
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(&self.0 - &rhs.0)
    }
}

fn check_cutoff(n_max: usize) -> Result<()> {
    if n_max == 0 {
        return Err(Error::invalid("n_max", "Fock cutoff must be at least 1"));
    }
    Ok(())
}

/// Photon annihilation operator â on `n_max + 1` Fock levels.
pub fn annihilation(n_max: usize) -> Result<OperatorMatrix> {
    check_cutoff(n_max)?;
    let dim = n_max + 1;
    let mut m = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Ok(OperatorMatrix(m))
}

/// Photon creation operator â†.
pub fn creation(n_max: usize) -> Result<OperatorMatrix> {
    Ok(annihilation(n_max)?.adjoint())
}

/// Photon number operator â†â.
pub fn number(n_max: usize) -> Result<OperatorMatrix> {
    check_cutoff(n_max)?;
    let dim = n_max + 1;
    Ok(OperatorMatrix(DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            C64::new(i as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })))
}

/// Pauli matrix in the {↑, ↓} basis.
pub fn pauli(axis: PauliAxis) -> OperatorMatrix {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let entries = match axis {
        PauliAxis::X => [o, one, one, o],
        PauliAxis::Y => [o, -i, i, o],
        PauliAxis::Z => [one, o, o, -one],
    };
    OperatorMatrix(DMatrix::from_row_slice(2, 2, &entries))
}

/// Kronecker product `left ⊗ right`.
pub fn tensor(left: &OperatorMatrix, right: &OperatorMatrix) -> Result<OperatorMatrix> {
    let dim = left
        .dim()
        .checked_mul(right.dim())
        .filter(|&d| d <= MAX_DIM)
        .ok_or(Error::DimensionOverflow {
            dim: left.dim().saturating_mul(right.dim()),
            limit: MAX_DIM,
        })?;
    debug_assert_eq!(dim, left.dim() * right.dim());
    Ok(OperatorMatrix(left.0.kronecker(&right.0)))
}

/// Lift a resonator operator to the full space: `op ⊗ I₂`.
pub fn on_resonator(op: &OperatorMatrix) -> Result<OperatorMatrix> {
    tensor(op, &OperatorMatrix::identity(2))
}

/// Lift a qubit operator to the full space: `I ⊗ op`.
pub fn on_qubit(op: &OperatorMatrix, n_max: usize) -> Result<OperatorMatrix> {
    tensor(&OperatorMatrix::identity(n_max + 1), op)
}

/// Resonator quadrature â† + â on the full space (the R-bath coupling operator).
pub fn resonator_quadrature(n_max: usize) -> Result<OperatorMatrix> {
    let a = annihilation(n_max)?;
    on_resonator(&(&a + &a.adjoint()))
}

/// `exp[amplitude · (â − â†)]` on the truncated space.
///
/// The generator is anti-Hermitian, so `i·G` is diagonalized as a Hermitian
/// matrix and exponentiated through its spectrum; the result is unitary to
/// machine precision.
pub fn displacement(n_max: usize, amplitude: f64) -> Result<OperatorMatrix> {
    if !amplitude.is_finite() || amplitude.abs() > MAX_DISPLACEMENT {
        return Err(Error::invalid(
            "displacement_amplitude",
            format!("|{amplitude}| exceeds {MAX_DISPLACEMENT}"),
        ));
    }
    let a = annihilation(n_max)?;
    if amplitude == 0.0 {
        return Ok(OperatorMatrix::identity(a.dim()));
    }
    let generator = (&a - &a.adjoint()).scale(amplitude);
    let hermitian = generator.scale_complex(C64::new(0.0, 1.0));
    let eig = SymmetricEigen::new(hermitian.0);
    let phases = eig.eigenvalues.map(|mu| C64::new(0.0, -mu).exp());
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[k];
    }
    Ok(OperatorMatrix(scaled * v.adjoint()))
}
