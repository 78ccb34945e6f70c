//! Inner-product spaces of arbitrary dimension and signature.
//!
//! Everything is stored as components in the ambient basis in which the
//! metric was given. The metric itself is only ever reached through
//! [`MetricSpace`], so every formula downstream reads the same way for a
//! Euclidean plane, Minkowski spacetime or a split signature.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative and absolute tolerances shared by every check in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const DEFAULT_REL: f64 = 1e-9;
    pub const DEFAULT_ABS: f64 = 1e-12;

    pub fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(Self::DEFAULT_REL, Self::DEFAULT_ABS)
    }
}

/// Counts of positive and negative eigenvalues of the metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

/// A vector of `V`, as components in the ambient basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(DVector<f64>);

/// A covector of `V*`, as components in the dual ambient basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector(DVector<f64>);

/// A linear map `V -> V`. Nothing about it is assumed; isometry checks are
/// explicit.
#[derive(Debug, Clone, PartialEq)]
pub struct Endomorphism(DMatrix<f64>);

/// A simple bivector `P ∧ Q` kept as the presentation pair.
///
/// Two pairs describe the same bivector when their antisymmetric component
/// arrays agree; see [`MetricSpace::same_bivector`].
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleBivector {
    first: Vector,
    second: Vector,
}

impl Vector {
    pub fn new(components: Vec<f64>) -> Self {
        Self(DVector::from_vec(components))
    }

    pub fn from_slice(components: &[f64]) -> Self {
        Self(DVector::from_column_slice(components))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DVector::zeros(dim))
    }

    /// The `index`-th ambient basis vector.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.iter().copied().collect()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        (&self.0 - &other.0).iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.0[index]
    }
}

impl Covector {
    pub fn new(components: Vec<f64>) -> Self {
        Self(DVector::from_vec(components))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DVector::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        self.0.as_slice()
    }

    /// The pairing `α(v)`.
    pub fn apply(&self, v: &Vector) -> f64 {
        self.0.dot(&v.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn distance(&self, other: &Covector) -> f64 {
        (&self.0 - &other.0).iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

macro_rules! linear_ops {
    ($ty:ident) => {
        impl Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                $ty(&self.0 + &rhs.0)
            }
        }
        impl Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                $ty(self.0 + rhs.0)
            }
        }
        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                $ty(&self.0 - &rhs.0)
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                $ty(self.0 - rhs.0)
            }
        }
        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty(-&self.0)
            }
        }
        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty(-self.0)
            }
        }
        impl Mul<f64> for &$ty {
            type Output = $ty;
            fn mul(self, rhs: f64) -> $ty {
                $ty(&self.0 * rhs)
            }
        }
        impl Mul<f64> for $ty {
            type Output = $ty;
            fn mul(self, rhs: f64) -> $ty {
                $ty(self.0 * rhs)
            }
        }
        impl Mul<&$ty> for f64 {
            type Output = $ty;
            fn mul(self, rhs: &$ty) -> $ty {
                $ty(&rhs.0 * self)
            }
        }
        impl Mul<$ty> for f64 {
            type Output = $ty;
            fn mul(self, rhs: $ty) -> $ty {
                $ty(rhs.0 * self)
            }
        }
    };
}

linear_ops!(Vector);
linear_ops!(Covector);
linear_ops!(Endomorphism);

impl Endomorphism {
    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    /// Builds a map from row-major entries.
    pub fn from_row_slice(dim: usize, entries: &[f64]) -> Self {
        Self(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// The simple endomorphism `v ⊗ α`, acting as `x ↦ α(x) v`.
    pub fn outer(v: &Vector, alpha: &Covector) -> Self {
        Self(&v.0 * alpha.0.transpose())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    /// Row-major entries.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Vector(&self.0 * &v.0)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Endomorphism) -> Endomorphism {
        Endomorphism(&self.0 * &other.0)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Max-entry distance; the operator norm used for every residual.
    pub fn distance(&self, other: &Endomorphism) -> f64 {
        (&self.0 - &other.0).iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl SimpleBivector {
    pub fn new(first: Vector, second: Vector) -> Result<Self> {
        if first.dim() != second.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                actual: second.dim(),
            });
        }
        Ok(Self { first, second })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            first: Vector::zeros(dim),
            second: Vector::zeros(dim),
        }
    }

    pub fn first(&self) -> &Vector {
        &self.first
    }

    pub fn second(&self) -> &Vector {
        &self.second
    }

    pub fn dim(&self) -> usize {
        self.first.dim()
    }

    /// `Q ∧ P`, the negated bivector.
    pub fn reversed(&self) -> Self {
        Self {
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }

    /// `(f P) ∧ Q`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            first: &self.first * factor,
            second: self.second.clone(),
        }
    }

    /// Antisymmetric component array `P Qᵀ - Q Pᵀ`.
    pub fn components(&self) -> Endomorphism {
        let p = &self.first.0;
        let q = &self.second.0;
        Endomorphism(p * q.transpose() - q * p.transpose())
    }
}

/// The ambient stage: a symmetric invertible metric plus tolerances.
#[derive(Debug, Clone)]
pub struct MetricSpace {
    g: DMatrix<f64>,
    g_inv: DMatrix<f64>,
    tol: Tolerance,
    signature: Signature,
}

impl MetricSpace {
    pub fn new(metric: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(metric, Tolerance::default())
    }

    pub fn with_tolerance(metric: DMatrix<f64>, tol: Tolerance) -> Result<Self> {
        let dim = metric.nrows();
        if metric.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: metric.ncols(),
            });
        }
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        let asym = (&metric - metric.transpose())
            .iter()
            .fold(0.0_f64, |m, x| m.max(x.abs()));
        if asym > tol.abs {
            return Err(Error::AsymmetricMetric(asym));
        }
        let g = (&metric + metric.transpose()) * 0.5;
        let g_inv = g.clone().try_inverse().ok_or(Error::SingularMetric)?;
        let resid = (&g * &g_inv - DMatrix::identity(dim, dim))
            .iter()
            .fold(0.0_f64, |m, x| m.max(x.abs()));
        if !(resid <= tol.rel) {
            return Err(Error::SingularMetric);
        }
        let eig = g.clone().symmetric_eigen().eigenvalues;
        let signature = Signature {
            positive: eig.iter().filter(|&&x| x > 0.0).count(),
            negative: eig.iter().filter(|&&x| x < 0.0).count(),
        };
        Ok(Self {
            g,
            g_inv,
            tol,
            signature,
        })
    }

    /// Builds the metric from row-major entries.
    pub fn from_rows(dim: usize, entries: &[f64], tol: Tolerance) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Self::with_tolerance(DMatrix::from_row_slice(dim, dim, entries), tol)
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn euclidean(dim: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0; dim])
    }

    /// `diag(-1, 1, …, 1)`.
    pub fn minkowski(dim: usize) -> Result<Self> {
        Self::signature_pq(dim - 1, 1)
    }

    /// Diagonal metric with `negative` leading `-1` entries followed by
    /// `positive` `+1` entries.
    pub fn signature_pq(positive: usize, negative: usize) -> Result<Self> {
        let entries: Vec<f64> = std::iter::repeat_n(-1.0, negative)
            .chain(std::iter::repeat_n(1.0, positive))
            .collect();
        Self::diagonal(&entries)
    }

    pub fn with_tol(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn is_lorentzian(&self) -> bool {
        self.signature.negative == 1
    }

    pub fn metric(&self) -> Endomorphism {
        Endomorphism(self.g.clone())
    }

    pub fn inverse_metric(&self) -> Endomorphism {
        Endomorphism(self.g_inv.clone())
    }

    /// Ambient index whose basis vector has the most negative square; used
    /// as the time axis for time orientation.
    pub fn time_index(&self) -> usize {
        (0..self.dim())
            .min_by(|&a, &b| self.g[(a, a)].total_cmp(&self.g[(b, b)]))
            .unwrap_or(0)
    }

    pub fn vector(&self, components: &[f64]) -> Result<Vector> {
        let v = Vector::from_slice(components);
        self.check(&v)?;
        Ok(v)
    }

    pub fn check(&self, v: &Vector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: v.dim(),
            });
        }
        Ok(())
    }

    pub fn check_bivector(&self, b: &SimpleBivector) -> Result<()> {
        self.check(b.first())?;
        self.check(b.second())
    }

    pub fn check_map(&self, l: &Endomorphism) -> Result<()> {
        if l.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: l.dim(),
            });
        }
        Ok(())
    }

    /// `g(A ⊗ B)`, evaluated so that swapping the arguments gives the
    /// bit-identical result.
    pub fn scalar_product(&self, a: &Vector, b: &Vector) -> Result<f64> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.dot(a, b))
    }

    pub(crate) fn dot(&self, a: &Vector, b: &Vector) -> f64 {
        let n = self.dim();
        let (a, b) = (&a.0, &b.0);
        let mut sum = 0.0;
        for i in 0..n {
            sum += self.g[(i, i)] * (a[i] * b[i]);
            for j in (i + 1)..n {
                let gij = self.g[(i, j)];
                if gij != 0.0 {
                    sum += gij * (a[i] * b[j] + a[j] * b[i]);
                }
            }
        }
        sum
    }

    pub(crate) fn square(&self, a: &Vector) -> f64 {
        self.dot(a, a)
    }

    /// `gA ∈ V*`.
    pub fn lower(&self, a: &Vector) -> Covector {
        Covector(&self.g * &a.0)
    }

    /// `g⁻¹α ∈ V`.
    pub fn raise(&self, alpha: &Covector) -> Vector {
        Vector(&self.g_inv * &alpha.0)
    }

    /// `(A ∧ B)·(P ∧ Q) = (A·P)(B·Q) - (A·Q)(B·P)`.
    pub fn bivector_product(&self, b1: &SimpleBivector, b2: &SimpleBivector) -> Result<f64> {
        self.check_bivector(b1)?;
        self.check_bivector(b2)?;
        Ok(self.biv_dot(b1, b2))
    }

    pub(crate) fn biv_dot(&self, b1: &SimpleBivector, b2: &SimpleBivector) -> f64 {
        let (a, b) = (b1.first(), b1.second());
        let (p, q) = (b2.first(), b2.second());
        self.dot(a, p) * self.dot(b, q) - self.dot(a, q) * self.dot(b, p)
    }

    pub(crate) fn biv_square(&self, b: &SimpleBivector) -> f64 {
        let (p, q) = (b.first(), b.second());
        let pq = self.dot(p, q);
        self.square(p) * self.square(q) - pq * pq
    }

    /// `v·(u ∧ w) = (v·u) w - (v·w) u`.
    pub fn contract(&self, v: &Vector, b: &SimpleBivector) -> Result<Vector> {
        self.check(v)?;
        self.check_bivector(b)?;
        Ok(self.contract_unchecked(v, b))
    }

    pub(crate) fn contract_unchecked(&self, v: &Vector, b: &SimpleBivector) -> Vector {
        let (u, w) = (b.first(), b.second());
        w * self.dot(v, u) - u * self.dot(v, w)
    }

    /// Fails with [`Error::NullVector`] unless `|P²| > tol.abs`.
    pub fn require_non_null(&self, p: &Vector) -> Result<f64> {
        let p2 = self.square(p);
        if p2.abs() > self.tol.abs {
            Ok(p2)
        } else {
            Err(Error::NullVector(p2))
        }
    }

    /// The idempotent `p = P ⊗ gP / P²`.
    pub fn idempotent_of(&self, p: &Vector) -> Result<Endomorphism> {
        self.check(p)?;
        let p2 = self.require_non_null(p)?;
        Ok(Endomorphism::outer(p, &self.lower(p)) * (1.0 / p2))
    }

    /// `M_{P∧Q} = P ⊗ gQ - Q ⊗ gP`, trace-less and g-skew.
    pub fn lie_map(&self, b: &SimpleBivector) -> Result<Endomorphism> {
        self.check_bivector(b)?;
        Ok(self.lie_map_unchecked(b))
    }

    pub(crate) fn lie_map_unchecked(&self, b: &SimpleBivector) -> Endomorphism {
        let (p, q) = (b.first(), b.second());
        Endomorphism::outer(p, &self.lower(q)) - Endomorphism::outer(q, &self.lower(p))
    }

    /// `(aP + bQ) ∧ (cP + eQ)`, which is the same bivector when `ae - bc = 1`.
    pub fn represent_sl2(
        &self,
        b: &SimpleBivector,
        a: f64,
        bb: f64,
        c: f64,
        e: f64,
    ) -> Result<SimpleBivector> {
        self.check_bivector(b)?;
        let det = a * e - bb * c;
        if (det - 1.0).abs() > self.tol.rel {
            return Err(Error::NotUnimodular(det));
        }
        let (p, q) = (b.first(), b.second());
        Ok(SimpleBivector {
            first: p * a + q * bb,
            second: p * c + q * e,
        })
    }

    /// `P ∧ Q = P ∧ W` with `W = (id - p) Q` orthogonal to `P`.
    pub fn orthogonal_presentation(&self, b: &SimpleBivector) -> Result<SimpleBivector> {
        self.check_bivector(b)?;
        let p = b.first();
        let p2 = self.require_non_null(p)?;
        let f = self.dot(p, b.second()) / p2;
        Ok(SimpleBivector {
            first: p.clone(),
            second: b.second() - &(p * f),
        })
    }

    /// Whether two presentations describe the same bivector, comparing
    /// antisymmetric component arrays against `tol.rel` scaled by their size.
    pub fn same_bivector(&self, b1: &SimpleBivector, b2: &SimpleBivector) -> bool {
        let c1 = b1.components();
        let c2 = b2.components();
        let scale = 1.0_f64.max(c1.max_abs()).max(c2.max_abs());
        c1.distance(&c2) <= self.tol.rel * scale
    }

    /// Max component of the antisymmetric trivector `A ∧ B ∧ C`.
    pub fn trivector_max(&self, a: &Vector, b: &Vector, c: &Vector) -> f64 {
        let n = self.dim();
        let mut m = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let det = a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
                        + a[k] * (b[i] * c[j] - b[j] * c[i]);
                    m = m.max(det.abs());
                }
            }
        }
        m
    }

    /// `L*∘g∘L` as an endomorphism-shaped array.
    pub fn pullback(&self, l: &Endomorphism) -> Endomorphism {
        Endomorphism(l.0.transpose() * &self.g * &l.0)
    }

    /// Scale-normalized isometry defect:
    /// `max |L*gL - g| / (max|g| · max(1, max|L|)²)`.
    pub fn isometry_defect(&self, l: &Endomorphism) -> f64 {
        let diff = self.pullback(l).distance(&self.metric());
        let gmax = self.g.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let lmax = 1.0_f64.max(l.max_abs());
        diff / (gmax * lmax * lmax)
    }

    /// `max |g∘M + M*∘g|`, zero for g-skew maps.
    pub fn skew_defect(&self, m: &Endomorphism) -> f64 {
        let gm = &self.g * &m.0;
        (&gm + gm.transpose()).iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }
}
