//! Dense complex matrix kernel.
//!
//! Everything here works on row-major `dim × dim` storage. Multi-qubit
//! indices use the big-endian convention: site 0 is the most significant
//! bit, so for two qubits the basis is `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Elementwise Hermiticity tolerance for checked construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues at or above this floor count as non-negative.
pub const PSD_FLOOR: f64 = -1e-10;
/// Trace tolerance for density-matrix validation.
pub const TRACE_TOL: f64 = 1e-10;
/// Default reconstruction tolerance used by callers of [`hermitian_eig`].
pub const EIG_TOL: f64 = 1e-10;
/// Largest chain length (and so largest dimension `2^n`) accepted by default.
pub const DEFAULT_MAX_SITES: usize = 10;

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_THRESHOLD: f64 = 1e-13;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Site limit, read once from `XENT_NMAX` when set to a positive integer.
pub fn max_sites() -> usize {
    static MAX: OnceLock<usize> = OnceLock::new();
    *MAX.get_or_init(|| {
        std::env::var("XENT_NMAX")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| (2..=30).contains(&n))
            .unwrap_or(DEFAULT_MAX_SITES)
    })
}

fn max_dim() -> usize {
    1usize << max_sites()
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::usage(format!("dimension {dim} is not a power of two ≥ 2")));
    }
    // The Hermitian embedding used for singular values doubles a 4×4 block,
    // so small dimensions are always allowed regardless of the site limit.
    if dim > max_dim().max(8) {
        return Err(Error::usage(format!(
            "dimension {dim} exceeds 2^{} (set XENT_NMAX to raise the limit)",
            max_sites()
        )));
    }
    Ok(())
}

/// General square complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        CMatrix { dim, data }
    }

    /// Row-major construction; `data.len()` must be `dim²`.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::usage(format!(
                "expected {} entries for a {dim}×{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(CMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|c| c.conj()).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::usage(format!(
                "matrix product of {0}×{0} and {1}×{1}",
                self.dim, rhs.dim
            )));
        }
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest elementwise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on mismatched dimensions");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}×{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let c = self[(i, j)];
                    format!("{:+.6}{:+.6}i", c.re, c.im)
                })
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Dense Hermitian matrix with power-of-two dimension.
///
/// Checked constructors reject inputs whose Hermitian defect exceeds
/// [`HERMITIAN_TOL`]; the stored matrix is always exactly Hermitian.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        Self::try_from_cmatrix(CMatrix::from_vec(dim, data)?)
    }

    pub fn try_from_cmatrix(m: CMatrix) -> Result<Self> {
        check_dim(m.dim)?;
        let defect = m.hermitian_defect();
        if !(defect <= HERMITIAN_TOL) {
            return Err(Error::domain(format!(
                "matrix is not Hermitian (largest |a_ij − conj(a_ji)| = {defect:.3e})"
            )));
        }
        Ok(Self::symmetrized(m))
    }

    /// Real symmetric input given as rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::usage("rows of a square matrix must all have the same length"));
        }
        Self::try_from_cmatrix(CMatrix::from_fn(dim, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        check_dim(diag.len())?;
        Ok(Self::from_diagonal_unchecked(diag))
    }

    pub(crate) fn from_diagonal_unchecked(diag: &[f64]) -> Self {
        let mut m = CMatrix::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        HermitianMatrix(m)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(HermitianMatrix(CMatrix::identity(dim)))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(HermitianMatrix(CMatrix::zeros(dim)))
    }

    /// Wraps a matrix that is Hermitian by construction, averaging away
    /// round-off so that `a_ij == conj(a_ji)` holds exactly.
    pub(crate) fn symmetrized(mut m: CMatrix) -> Self {
        let n = m.dim;
        for i in 0..n {
            m[(i, i)].im = 0.0;
            for j in i + 1..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        HermitianMatrix(m)
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn as_cmatrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_cmatrix(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        HermitianMatrix(CMatrix {
            dim: self.0.dim,
            data: self.0.data.iter().map(|c| c * s).collect(),
        })
    }

    /// Entrywise complex conjugate (equivalently, the transpose).
    pub fn conj(&self) -> Self {
        HermitianMatrix(self.0.conj())
    }

    /// `self + s·𝟙`.
    pub fn shifted(&self, s: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.dim {
            m[(i, i)].re += s;
        }
        HermitianMatrix(m)
    }

    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "elementwise operation on mismatched dimensions");
        HermitianMatrix(CMatrix {
            dim: self.0.dim,
            data: self.0.data.iter().zip(&rhs.0.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.0)
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Hilbert-Schmidt inner product `Tr(a·b)`.
pub fn hs_inner(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::usage(format!(
            "inner product of {0}×{0} and {1}×{1} matrices",
            a.dim(),
            b.dim()
        )));
    }
    let n = a.dim();
    let (x, y) = (&a.0.data, &b.0.data);
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += x[i * n + j] * y[j * n + i];
        }
    }
    // Tr of a product of Hermitian matrices is real; the residue is round-off.
    debug_assert!(acc.im.abs() <= 1e-12 * (1.0 + acc.re.abs()), "imaginary residue {}", acc.im);
    Ok(acc.re)
}

/// Hilbert-Schmidt norm `(Tr a²)^{1/2}`.
pub fn hs_norm(a: &HermitianMatrix) -> f64 {
    // Tr(a²) = Σ|a_ij|² for Hermitian a.
    a.0.frobenius_norm()
}

/// Spectral decomposition `a = V·diag(values)·V†` with ascending values.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns.
    pub vectors: CMatrix,
}

impl Eigen {
    /// `V·diag(f(λ))·V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.values.len();
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for k in 0..n {
                    if fl[k] != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * fl[k];
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        HermitianMatrix::symmetrized(out)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|l| l)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }
}

/// Cyclic complex Jacobi eigensolver.
///
/// Sweeps until the off-diagonal Frobenius mass falls below `1e-13·‖a‖`
/// (at most 100 sweeps), then checks `‖a − VΛV†‖ ≤ tol·max(1, ‖a‖)`.
pub fn hermitian_eig(a: &HermitianMatrix, tol: f64) -> Result<Eigen> {
    let n = a.dim();
    let norm = hs_norm(a);
    let mut m = a.0.data.clone();
    let mut v = CMatrix::identity(n);
    let threshold = OFF_DIAGONAL_THRESHOLD * norm;

    let off_norm = |m: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&m) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                let b = apq.norm();
                if b == 0.0 {
                    continue;
                }
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                let phase_conj = apq.conj() / b;
                let theta = (aqq - app) / (2.0 * b);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + theta.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                // U restricted to (p, q) = [[c, s], [−s·e^{−iφ}, c·e^{−iφ}]]
                let u_pp = Complex64::new(c, 0.0);
                let u_pq = Complex64::new(s, 0.0);
                let u_qp = -phase_conj * s;
                let u_qq = phase_conj * c;

                // m ← m·U
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = mkp * u_pp + mkq * u_qp;
                    m[k * n + q] = mkp * u_pq + mkq * u_qq;
                }
                // m ← U†·m
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = u_pp.conj() * mpk + u_qp.conj() * mqk;
                    m[q * n + k] = u_pq.conj() * mpk + u_qq.conj() * mqk;
                }
                m[p * n + q] = ZERO;
                m[q * n + p] = ZERO;
                m[p * n + p] = Complex64::new(app - t * b, 0.0);
                m[q * n + q] = Complex64::new(aqq + t * b, 0.0);
                // v ← v·U
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }
    if !converged {
        let off = off_norm(&m);
        if off > threshold {
            return Err(Error::Numeric {
                message: format!("Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"),
                residual: off,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].re.total_cmp(&m[j * n + j].re));
    let values: Vec<f64> = order.iter().map(|&i| m[i * n + i].re).collect();
    let vectors = CMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    let eig = Eigen { values, vectors };

    let residual = hs_norm(&(a - &eig.reconstruct()));
    if !(residual <= tol * norm.max(1.0)) {
        return Err(Error::Numeric {
            message: "eigendecomposition fails reconstruction check".into(),
            residual,
        });
    }
    Ok(eig)
}

/// `exp(s·a)` through the spectral decomposition of `a`.
pub fn mat_exp_hermitian(a: &HermitianMatrix, s: f64) -> Result<HermitianMatrix> {
    let eig = hermitian_eig(a, EIG_TOL)?;
    let top = eig.values.iter().map(|&l| s * l).fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() || top > 700.0 {
        return Err(Error::Numeric {
            message: "matrix exponential overflows; shift the spectrum first".into(),
            residual: top,
        });
    }
    Ok(eig.map(|l| (s * l).exp()))
}

/// Tensor product `a ⊗ b`.
pub fn kron(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (da, db) = (a.dim(), b.dim());
    let dim = da
        .checked_mul(db)
        .ok_or_else(|| Error::usage("tensor product dimension overflows"))?;
    check_dim(dim)?;
    let m = CMatrix::from_fn(dim, |r, c| a.get(r / db, c / db) * b.get(r % db, c % db));
    Ok(HermitianMatrix(m))
}

fn require_two_qubit(rho: &HermitianMatrix, what: &str) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::usage(format!("{what} needs a 4×4 matrix, got {0}×{0}", rho.dim())));
    }
    Ok(())
}

/// Transpose on the second qubit: `((i,j),(k,l)) ↦ ((i,l),(k,j))`.
pub fn partial_transpose_second(rho: &HermitianMatrix) -> Result<HermitianMatrix> {
    require_two_qubit(rho, "partial transpose")?;
    let m = CMatrix::from_fn(4, |r, c| {
        let (i, j) = (r >> 1, r & 1);
        let (k, l) = (c >> 1, c & 1);
        rho.get((i << 1) | l, (k << 1) | j)
    });
    Ok(HermitianMatrix(m))
}

/// Reduced density matrix of sites `i < j` of an `n`-site state.
pub fn partial_trace_pair(rho: &HermitianMatrix, i: usize, j: usize) -> Result<HermitianMatrix> {
    let dim = rho.dim();
    let n = dim.trailing_zeros() as usize;
    if !(i < j && j < n) {
        return Err(Error::usage(format!(
            "site pair ({i}, {j}) must satisfy 0 ≤ i < j < {n}"
        )));
    }
    let bit_i = 1usize << (n - 1 - i);
    let bit_j = 1usize << (n - 1 - j);
    let mask = bit_i | bit_j;
    let embed = |a: usize, b: usize, rest: usize| {
        rest | if a == 1 { bit_i } else { 0 } | if b == 1 { bit_j } else { 0 }
    };
    let mut out = CMatrix::zeros(4);
    for rest in (0..dim).filter(|r| r & mask == 0) {
        for row in 0..4 {
            let r = embed(row >> 1, row & 1, rest);
            for col in 0..4 {
                let c = embed(col >> 1, col & 1, rest);
                out[(row, col)] += rho.get(r, c);
            }
        }
    }
    Ok(HermitianMatrix::symmetrized(out))
}

/// Checks unit trace and positive semidefiniteness; returns the spectrum.
pub fn check_density(rho: &HermitianMatrix) -> Result<Eigen> {
    let tr = rho.trace();
    if !((tr - 1.0).abs() <= TRACE_TOL) {
        return Err(Error::domain(format!("not a density matrix: trace {tr}")));
    }
    let eig = hermitian_eig(rho, EIG_TOL)?;
    if eig.min() < PSD_FLOOR {
        return Err(Error::domain(format!(
            "not a density matrix: eigenvalue {:.6e} is negative",
            eig.min()
        )));
    }
    Ok(eig)
}
