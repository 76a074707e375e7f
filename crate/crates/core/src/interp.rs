//! Multivariate polynomial Lagrange interpolation.
//!
//! A polynomial of total degree `n` in `m` variables has `ρ = C(n+m, n)`
//! monomials. Given `ρ` nodes, row `i` of the sample matrix `M` holds every
//! monomial evaluated at node `i`. The interpolant can be evaluated two ways:
//!
//! - by solving `M·a = f` for the monomial coefficients (the production path),
//! - as `Σ f_i·l_i(x)` with cardinal functions `l_i(x) = Δ_i(x)/Δ`, where
//!   `Δ = det M` and `Δ_i(x)` is the determinant of `M` with row `i` replaced
//!   by the monomial row of `x`.

use crate::{Error, Result, Scalar};

/// Exponents `(e_1, …, e_m)` of one monomial `x_1^{e_1}⋯x_m^{e_m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Evaluates the monomial at `x`, with `0^0 = 1`.
    pub fn monomial<T: Scalar>(&self, x: &[T]) -> T {
        self.0
            .iter()
            .zip(x)
            .fold(T::one(), |acc, (&e, &xi)| acc * xi.powi(e as i32))
    }
}

/// `C(n + m, n)`.
pub fn monomial_count(n: u32, m: usize) -> usize {
    let (n, m) = (n as u128, m as u128);
    let k = n.min(m);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n + m - i) / (i + 1);
    }
    c as usize
}

/// All exponent vectors of total degree `≤ n` in `m ≥ 1` variables, graded
/// (degree ascending) and lexicographically descending within each degree,
/// so the linear terms come out as `x_1, x_2, …`.
pub fn enumerate_exponents(n: u32, m: usize) -> Vec<ExponentVector> {
    fn fill(rest: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if slots == 1 {
            prefix.push(rest);
            out.push(ExponentVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=rest).rev() {
            prefix.push(e);
            fill(rest - e, slots - 1, prefix, out);
            prefix.pop();
        }
    }

    assert!(m >= 1, "at least one variable");
    let mut out = Vec::with_capacity(monomial_count(n, m));
    let mut prefix = Vec::with_capacity(m);
    for grade in 0..=n {
        fill(grade, m, &mut prefix, &mut out);
    }
    out
}

/// Square row-major matrix of monomial evaluations `M[i][j] = node_i^{e_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix<T> {
    pub nodes: Vec<Vec<T>>,
    pub exponents: Vec<ExponentVector>,
    pub entries: Vec<Vec<T>>,
}

impl<T: Scalar> SampleMatrix<T> {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Monomial row of an arbitrary point under this matrix's exponents.
    pub fn row_at(&self, x: &[T]) -> Vec<T> {
        monomial_row(&self.exponents, x)
    }

    /// Tolerance below which `|det M|` is treated as zero: `1e-12` times the
    /// Hadamard bound `∏ ‖row_i‖₂`, which caps `|det M|` and scales with
    /// each row.
    pub fn singular_tolerance(&self) -> T {
        let bound = self
            .entries
            .iter()
            .map(|row| row.iter().map(|&v| v * v).sum::<T>().sqrt())
            .fold(T::one(), |acc, norm| acc * norm);
        T::lit(1e-12) * bound
    }
}

fn monomial_row<T: Scalar>(exponents: &[ExponentVector], x: &[T]) -> Vec<T> {
    exponents.iter().map(|e| e.monomial(x)).collect()
}

pub fn build_matrix<T: Scalar>(nodes: &[Vec<T>], exponents: &[ExponentVector]) -> Result<SampleMatrix<T>> {
    if nodes.len() != exponents.len() {
        return Err(Error::DimensionMismatch {
            what: "node count",
            expected: exponents.len(),
            found: nodes.len(),
        });
    }
    if let Some(m) = exponents.first().map(ExponentVector::len) {
        if let Some(bad) = exponents.iter().find(|e| e.len() != m) {
            return Err(Error::DimensionMismatch {
                what: "exponent length",
                expected: m,
                found: bad.len(),
            });
        }
        if let Some(bad) = nodes.iter().find(|x| x.len() != m) {
            return Err(Error::DimensionMismatch {
                what: "node dimension",
                expected: m,
                found: bad.len(),
            });
        }
    }
    Ok(SampleMatrix {
        nodes: nodes.to_vec(),
        exponents: exponents.to_vec(),
        entries: nodes.iter().map(|x| monomial_row(exponents, x)).collect(),
    })
}

/// LU factorization with partial pivoting, `P·A = L·U` packed in place.
struct Lu<T> {
    lu: Vec<Vec<T>>,
    perm: Vec<usize>,
    sign: T,
    singular: bool,
}

impl<T: Scalar> Lu<T> {
    fn factor(mut a: Vec<Vec<T>>) -> Self {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = T::one();
        let mut singular = false;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap();
            if a[p][k] == T::zero() {
                singular = true;
                continue;
            }
            if p != k {
                a.swap(p, k);
                perm.swap(p, k);
                sign = -sign;
            }
            let pivot = a[k][k];
            for i in k + 1..n {
                let factor = a[i][k] / pivot;
                a[i][k] = factor;
                for j in k + 1..n {
                    let u = a[k][j];
                    a[i][j] = a[i][j] - factor * u;
                }
            }
        }
        Lu {
            lu: a,
            perm,
            sign,
            singular,
        }
    }

    fn determinant(&self) -> T {
        if self.singular {
            return T::zero();
        }
        self.lu.iter().enumerate().fold(self.sign, |acc, (i, row)| acc * row[i])
    }

    fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.lu.len();
        let mut y: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] = y[i] - self.lu[i][j] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] = y[i] - self.lu[i][j] * y[j];
            }
            y[i] = y[i] / self.lu[i][i];
        }
        y
    }
}

/// Determinant of a square matrix by pivoted Gaussian elimination.
pub fn determinant<T: Scalar>(matrix: &[Vec<T>]) -> T {
    debug_assert!(matrix.iter().all(|r| r.len() == matrix.len()), "square matrix");
    Lu::factor(matrix.to_vec()).determinant()
}

/// Fitted interpolant: nodes, values and the solved monomial coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant<T> {
    pub matrix: SampleMatrix<T>,
    pub values: Vec<T>,
    /// Coefficient of each monomial, in the matrix's exponent order.
    pub coefficients: Vec<T>,
    /// `Δ = det M`.
    pub det: T,
}

/// Interpolates `values` at `nodes` with all monomials of degree `≤ n` in `m`
/// variables.
pub fn fit<T: Scalar>(nodes: &[Vec<T>], values: &[T], n: u32, m: usize) -> Result<Interpolant<T>> {
    let exponents = enumerate_exponents(n, m);
    if values.len() != nodes.len() {
        return Err(Error::DimensionMismatch {
            what: "value count",
            expected: nodes.len(),
            found: values.len(),
        });
    }
    let matrix = build_matrix(nodes, &exponents)?;
    fit_matrix(matrix, values)
}

/// Interpolates on an already-built sample matrix.
pub fn fit_matrix<T: Scalar>(matrix: SampleMatrix<T>, values: &[T]) -> Result<Interpolant<T>> {
    if values.len() != matrix.size() {
        return Err(Error::DimensionMismatch {
            what: "value count",
            expected: matrix.size(),
            found: values.len(),
        });
    }
    let lu = Lu::factor(matrix.entries.clone());
    let det = lu.determinant();
    let tol = matrix.singular_tolerance();
    if !(det.abs() > tol) {
        return Err(Error::SingularSampleMatrix {
            det: det.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let coefficients = lu.solve(values);
    Ok(Interpolant {
        matrix,
        values: values.to_vec(),
        coefficients,
        det,
    })
}

impl<T: Scalar> Interpolant<T> {
    pub fn exponents(&self) -> &[ExponentVector] {
        &self.matrix.exponents
    }

    /// `Σ_e a_e·x^e`.
    pub fn evaluate(&self, x: &[T]) -> T {
        self.exponents()
            .iter()
            .zip(&self.coefficients)
            .map(|(e, &a)| a * e.monomial(x))
            .sum()
    }

    /// `l_i(x) = Δ_i(x) / Δ`.
    pub fn cardinal(&self, i: usize, x: &[T]) -> Result<T> {
        let tol = self.matrix.singular_tolerance();
        if !(self.det.abs() > tol) {
            return Err(Error::SingularSampleMatrix {
                det: self.det.to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        let mut replaced = self.matrix.entries.clone();
        replaced[i] = self.matrix.row_at(x);
        Ok(determinant(&replaced) / self.det)
    }

    /// `Σ_i f_i·l_i(x)`: the determinant-ratio evaluation path.
    pub fn evaluate_cardinal(&self, x: &[T]) -> Result<T> {
        (0..self.values.len())
            .map(|i| Ok(self.values[i] * self.cardinal(i, x)?))
            .sum()
    }

    /// Infinity-norm condition number `‖M‖·‖M⁻¹‖`.
    pub fn condition_estimate(&self) -> T {
        let n = self.matrix.size();
        let lu = Lu::factor(self.matrix.entries.clone());
        let row_sum_max = |rows: &[Vec<T>]| {
            rows.iter()
                .map(|r| r.iter().map(|v| v.abs()).sum::<T>())
                .fold(T::zero(), T::max)
        };
        let mut inverse = vec![vec![T::zero(); n]; n];
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            for (i, v) in lu.solve(&e).into_iter().enumerate() {
                inverse[i][j] = v;
            }
        }
        row_sum_max(&self.matrix.entries) * row_sum_max(&inverse)
    }

    /// Largest `|M·a − f|` over the nodes.
    pub fn residual(&self) -> T {
        self.matrix
            .entries
            .iter()
            .zip(&self.values)
            .map(|(row, &f)| {
                let lhs: T = row.iter().zip(&self.coefficients).map(|(&m, &a)| m * a).sum();
                (lhs - f).abs()
            })
            .fold(T::zero(), T::max)
    }
}
