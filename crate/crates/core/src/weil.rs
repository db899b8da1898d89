//! Weil algebras `A = K + m` presented by structure constants.
//!
//! Basis index 0 is the unit; indices `1..dim` span the nilpotent ideal.
//! Structure constants are validated once at construction. Error variants
//! report 1-based indices, matching the algebra file format.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct WeilAlgebra<S: Scalar> {
    ctx: S::Context,
    dim: usize,
    table: Vec<S>,
    /// Nonzero structure constants `(i, j, k, c)`; `None` stands for `c = 1`.
    products: Vec<(usize, usize, usize, Option<S>)>,
    nilpotency_index: usize,
    labels: Vec<String>,
}

impl<S: Scalar> PartialEq for WeilAlgebra<S> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && S::same_field(&self.ctx, &other.ctx)
            && self.table == other.table
    }
}

/// Echelon basis of the span of `vectors` (first nonzero entry as pivot).
fn echelon_basis<S: Scalar>(vectors: Vec<Vec<S>>) -> Vec<Vec<S>> {
    let mut basis: Vec<(usize, Vec<S>)> = Vec::new();
    for mut v in vectors {
        for (col, b) in &basis {
            if !v[*col].is_zero() {
                let factor = v[*col].clone();
                for (x, y) in v.iter_mut().zip(b.iter()) {
                    *x = x.clone() - factor.clone() * y;
                }
            }
        }
        if let Some(col) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[col].checked_inv().expect("nonzero pivot is invertible");
            let v: Vec<S> = v.into_iter().map(|x| x * &inv).collect();
            // keep earlier rows reduced against the new pivot
            for (_, b) in basis.iter_mut() {
                if !b[col].is_zero() {
                    let factor = b[col].clone();
                    for (x, y) in b.iter_mut().zip(v.iter()) {
                        *x = x.clone() - factor.clone() * y;
                    }
                }
            }
            basis.push((col, v));
        }
    }
    basis.into_iter().map(|(_, v)| v).collect()
}

fn jet_table<S: Scalar>(ctx: &S::Context, dim: usize) -> Vec<S> {
    let mut table = vec![S::zero_in(ctx); dim * dim * dim];
    for a in 0..dim {
        for b in 0..dim - a {
            table[(a * dim + b) * dim + a + b] = S::one_in(ctx);
        }
    }
    table
}

fn jet_labels(dim: usize) -> Vec<String> {
    (0..dim)
        .map(|j| match j {
            0 => String::new(),
            1 => "ε".to_string(),
            _ => format!("ε^{j}"),
        })
        .collect()
}

impl<S: Scalar> WeilAlgebra<S> {
    /// Validates `c[i][j][k]` (0-based, index 0 the unit) and builds the algebra.
    pub fn build(ctx: &S::Context, constants: Vec<Vec<Vec<S>>>) -> Result<Arc<Self>> {
        let dim = constants.len();
        if dim == 0 {
            return Err(Error::Shape("algebra dimension must be at least 1".into()));
        }
        let mut table = Vec::with_capacity(dim * dim * dim);
        for (i, plane) in constants.into_iter().enumerate() {
            if plane.len() != dim {
                return Err(Error::Shape(format!("c[{}] has {} rows, expected {dim}", i + 1, plane.len())));
            }
            for (j, row) in plane.into_iter().enumerate() {
                if row.len() != dim {
                    return Err(Error::Shape(format!(
                        "c[{}][{}] has {} entries, expected {dim}",
                        i + 1,
                        j + 1,
                        row.len()
                    )));
                }
                table.extend(row);
            }
        }
        // truncated polynomial rings keep their e^k names
        let labels = if dim > 1 && table == jet_table(ctx, dim) {
            jet_labels(dim)
        } else {
            std::iter::once(String::new())
                .chain((2..=dim).map(|j| format!("a{j}")))
                .collect()
        };
        Self::from_table(ctx, dim, table, labels)
    }

    /// Builds from sparse 0-based entries; omitted entries are zero.
    pub fn from_entries(
        ctx: &S::Context,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, S)>,
    ) -> Result<Arc<Self>> {
        let mut constants = vec![vec![vec![S::zero_in(ctx); dim]; dim]; dim];
        for (i, j, k, c) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Shape(format!(
                    "index ({}, {}, {}) outside 1..={dim}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            constants[i][j][k] = c;
        }
        Self::build(ctx, constants)
    }

    /// Truncated polynomial ring `K[e]/(e^{order+1})`.
    pub fn jets(ctx: &S::Context, order: usize) -> Result<Arc<Self>> {
        if order < 1 {
            return Err(Error::Shape("jet order must be at least 1".into()));
        }
        let dim = order + 1;
        Self::from_table(ctx, dim, jet_table(ctx, dim), jet_labels(dim))
    }

    /// Dual numbers `K[e]/(e^2)`.
    pub fn dual_numbers(ctx: &S::Context) -> Result<Arc<Self>> {
        Self::jets(ctx, 1)
    }

    fn from_table(ctx: &S::Context, dim: usize, table: Vec<S>, labels: Vec<String>) -> Result<Arc<Self>> {
        let at = |i: usize, j: usize, k: usize| &table[(i * dim + j) * dim + k];
        let one = S::one_in(ctx);
        let zero = S::zero_in(ctx);
        let delta = |a: usize, b: usize| if a == b { &one } else { &zero };

        for j in 0..dim {
            for k in 0..dim {
                if at(0, j, k) != delta(j, k) {
                    return Err(Error::UnitLaw { i: 1, j: j + 1, k: k + 1 });
                }
                if at(j, 0, k) != delta(j, k) {
                    return Err(Error::UnitLaw { i: j + 1, j: 1, k: k + 1 });
                }
            }
        }
        for i in 0..dim {
            for j in i + 1..dim {
                for k in 0..dim {
                    if at(i, j, k) != at(j, i, k) {
                        return Err(Error::NonCommutative { i: i + 1, j: j + 1, k: k + 1 });
                    }
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for r in 0..dim {
                        let mut lhs = zero.clone();
                        let mut rhs = zero.clone();
                        for m in 0..dim {
                            lhs = lhs + at(i, j, m).clone() * at(m, k, r);
                            rhs = rhs + at(j, k, m).clone() * at(i, m, r);
                        }
                        if !(lhs - &rhs).is_zero() {
                            return Err(Error::NonAssociative {
                                i: i + 1,
                                j: j + 1,
                                k: k + 1,
                                r: r + 1,
                            });
                        }
                    }
                }
            }
        }
        for i in 1..dim {
            for j in 1..dim {
                if !at(i, j, 0).is_zero() {
                    return Err(Error::IdealNotClosed { i: i + 1, j: j + 1 });
                }
            }
        }

        let mut products = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let c = at(i, j, k);
                    if !c.is_zero() {
                        products.push((i, j, k, if *c == one { None } else { Some(c.clone()) }));
                    }
                }
            }
        }
        let mut algebra = Self {
            ctx: ctx.clone(),
            dim,
            table,
            products,
            nilpotency_index: 0,
            labels,
        };
        algebra.nilpotency_index = algebra.compute_nilpotency()?;
        Ok(Arc::new(algebra))
    }

    fn mul_coeffs(&self, a: &[S], b: &[S]) -> Vec<S> {
        let mut out = vec![S::zero_in(&self.ctx); self.dim];
        for (i, j, k, c) in &self.products {
            if a[*i].is_zero() || b[*j].is_zero() {
                continue;
            }
            let mut term = a[*i].clone() * &b[*j];
            if let Some(c) = c {
                term = term * c;
            }
            out[*k] = out[*k].clone() + term;
        }
        out
    }

    fn unit_vector(&self, j: usize) -> Vec<S> {
        let mut v = vec![S::zero_in(&self.ctx); self.dim];
        v[j] = S::one_in(&self.ctx);
        v
    }

    fn compute_nilpotency(&self) -> Result<usize> {
        // In a commutative algebra the ideal is nilpotent iff its generators are.
        for i in 1..self.dim {
            let base = self.unit_vector(i);
            let mut power = base.clone();
            for _ in 1..self.dim {
                power = self.mul_coeffs(&power, &base);
            }
            if power.iter().any(|c| !c.is_zero()) {
                return Err(Error::NotNilpotent { basis: i + 1 });
            }
        }
        let generators: Vec<Vec<S>> = (1..self.dim).map(|i| self.unit_vector(i)).collect();
        let mut current = echelon_basis(generators.clone());
        let mut index = 1;
        while !current.is_empty() {
            let next: Vec<Vec<S>> = current
                .iter()
                .flat_map(|v| generators.iter().map(move |g| (v, g)))
                .map(|(v, g)| self.mul_coeffs(v, g))
                .collect();
            current = echelon_basis(next);
            index += 1;
        }
        Ok(index)
    }

    pub fn context(&self) -> &S::Context {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Smallest `k` with `m^k = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.nilpotency_index
    }

    /// `c[i][j][k]`, 0-based.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &S {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    pub fn label(&self, j: usize) -> &str {
        &self.labels[j]
    }

    /// Nonzero structure constants as 0-based `(i, j, k, c)`.
    pub fn nonzero_constants(&self) -> impl Iterator<Item = (usize, usize, usize, S)> + '_ {
        self.products.iter().map(|(i, j, k, c)| {
            (*i, *j, *k, c.clone().unwrap_or_else(|| S::one_in(&self.ctx)))
        })
    }
}

fn same_algebra<S: Scalar>(a: &Arc<WeilAlgebra<S>>, b: &Arc<WeilAlgebra<S>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Debug)]
pub struct WeilElement<S: Scalar> {
    algebra: Arc<WeilAlgebra<S>>,
    coeffs: Vec<S>,
}

impl<S: Scalar> PartialEq for WeilElement<S> {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.coeffs == other.coeffs
    }
}

impl<S: Scalar> WeilElement<S> {
    pub fn new(algebra: &Arc<WeilAlgebra<S>>, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() != algebra.dim {
            return Err(Error::Shape(format!(
                "element has {} coefficients, algebra has dimension {}",
                coeffs.len(),
                algebra.dim
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| !S::same_field(&c.context(), &algebra.ctx)) {
            return Err(Error::Shape(format!("coefficient {c:?} from a different field")));
        }
        Ok(Self {
            algebra: algebra.clone(),
            coeffs,
        })
    }

    pub fn zero(algebra: &Arc<WeilAlgebra<S>>) -> Self {
        Self::scalar(algebra, S::zero_in(&algebra.ctx))
    }

    pub fn one(algebra: &Arc<WeilAlgebra<S>>) -> Self {
        Self::scalar(algebra, S::one_in(&algebra.ctx))
    }

    /// `s * 1_A`.
    pub fn scalar(algebra: &Arc<WeilAlgebra<S>>, s: S) -> Self {
        let mut coeffs = vec![S::zero_in(&algebra.ctx); algebra.dim];
        coeffs[0] = s;
        Self {
            algebra: algebra.clone(),
            coeffs,
        }
    }

    /// Basis element `alpha_{j+1}` (0-based `j`).
    pub fn basis(algebra: &Arc<WeilAlgebra<S>>, j: usize) -> Self {
        Self {
            algebra: algebra.clone(),
            coeffs: algebra.unit_vector(j),
        }
    }

    pub fn algebra(&self) -> &Arc<WeilAlgebra<S>> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// `pr: A -> K`, the unit coefficient.
    pub fn project(&self) -> &S {
        &self.coeffs[0]
    }

    /// The nilpotent part `a - pr(a)`.
    pub fn nilpotent_part(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = S::zero_in(&self.algebra.ctx);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b))
    }

    /// `(ab)_k = sum_{i,j} a_i b_j c_{ijk}`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            algebra: self.algebra.clone(),
            coeffs: self.algebra.mul_coeffs(&self.coeffs, &other.coeffs),
        })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        Self {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        Self {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|c| c.clone() * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: &S) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].clone() + s;
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(&self.algebra);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse via the finite geometric series over the nilpotent part.
    pub fn inverse(&self) -> Result<Self> {
        let a0_inv = self.project().checked_inv().ok_or(Error::NotInvertible)?;
        // a = a0 (1 + n) with n nilpotent
        let n = self.nilpotent_part().scale(&a0_inv);
        let minus_n = -&n;
        let mut term = Self::one(&self.algebra);
        let mut sum = term.clone();
        for _ in 1..self.algebra.nilpotency_index {
            term = &term * &minus_n;
            sum = &sum + &term;
        }
        Ok(sum.scale(&a0_inv))
    }

    /// Smallest `k >= 1` with `a^k = 0`, if `a` is nilpotent.
    pub fn nilpotency_order(&self) -> Option<usize> {
        if !self.project().is_zero() {
            return None;
        }
        let mut power = self.clone();
        for k in 1..=self.algebra.nilpotency_index {
            if power.is_zero() {
                return Some(k);
            }
            power = &power * self;
        }
        None
    }
}

impl WeilElement<PadicNumber> {
    /// `max_j |a_j|_p`.
    pub fn norm(&self) -> BigRational {
        self.coeffs
            .iter()
            .map(|c| c.norm())
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
    }
}

impl fmt::Display for WeilElement<PadicNumber> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}{}", c.rational_string(), self.algebra.label(j))?;
        }
        Ok(())
    }
}

impl<S: Scalar> Add for &WeilElement<S> {
    type Output = WeilElement<S>;
    fn add(self, rhs: Self) -> WeilElement<S> {
        self.checked_add(rhs).expect("Weil elements from different algebras")
    }
}

impl<S: Scalar> Sub for &WeilElement<S> {
    type Output = WeilElement<S>;
    fn sub(self, rhs: Self) -> WeilElement<S> {
        self.checked_sub(rhs).expect("Weil elements from different algebras")
    }
}

impl<S: Scalar> Mul for &WeilElement<S> {
    type Output = WeilElement<S>;
    fn mul(self, rhs: Self) -> WeilElement<S> {
        self.checked_mul(rhs).expect("Weil elements from different algebras")
    }
}

impl<S: Scalar> Neg for &WeilElement<S> {
    type Output = WeilElement<S>;
    fn neg(self) -> WeilElement<S> {
        WeilElement {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

/// `Q_p[e]/(e^2)`.
pub fn make_dual_numbers(ctx: &PadicContext) -> Result<Arc<WeilAlgebra<PadicNumber>>> {
    WeilAlgebra::dual_numbers(ctx)
}

/// `Q_p[e]/(e^{order+1})`.
pub fn make_jet_algebra(ctx: &PadicContext, order: usize) -> Result<Arc<WeilAlgebra<PadicNumber>>> {
    WeilAlgebra::jets(ctx, order)
}
