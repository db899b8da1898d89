//! Truncated multivariate power series, evaluation, convergence certificates
//! and the jet-lifting functor `f -> f^A`.
//!
//! A series is a finite sum `sum_m a_m prod_i (x_i - c_i)^{m_i}` stored
//! sparsely, together with a cap `D` on the total degree of stored terms.
//! Stored terms are exact; `D` records how far the coefficients are known.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Valuation};
use crate::scalar::Scalar;
use crate::weil::WeilElement;

/// Number of top degrees inspected by [`PowerSeries::check_convergence`].
pub const TAIL_WINDOW: u32 = 5;

pub type MultiIndex = Vec<u32>;

fn total_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<S: Scalar> {
    ctx: S::Context,
    nvars: usize,
    center: Vec<S>,
    terms: BTreeMap<MultiIndex, S>,
    trunc_degree: u32,
}

impl<S: Scalar> PowerSeries<S> {
    /// Builds a series from `(exponents, coefficient)` pairs; repeated
    /// exponents are summed and zero coefficients dropped.
    pub fn new(
        ctx: &S::Context,
        center: Vec<S>,
        trunc_degree: u32,
        terms: impl IntoIterator<Item = (MultiIndex, S)>,
    ) -> Result<Self> {
        let nvars = center.len();
        let mut out = Self {
            ctx: ctx.clone(),
            nvars,
            center,
            terms: BTreeMap::new(),
            trunc_degree,
        };
        for (m, c) in terms {
            if m.len() != nvars {
                return Err(Error::Shape(format!(
                    "exponent vector {m:?} has length {}, expected {nvars}",
                    m.len()
                )));
            }
            if total_degree(&m) > trunc_degree {
                return Err(Error::Shape(format!(
                    "term {m:?} exceeds truncation degree {trunc_degree}"
                )));
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    /// Polynomial centered at the origin. The truncation degree is padded
    /// by [`TAIL_WINDOW`] so the stored tail certifies as zero.
    pub fn polynomial(
        ctx: &S::Context,
        nvars: usize,
        terms: impl IntoIterator<Item = (MultiIndex, S)>,
    ) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().collect();
        let degree = terms.iter().map(|(m, _)| total_degree(m)).max().unwrap_or(0);
        Self::new(ctx, vec![S::zero_in(ctx); nvars], degree + TAIL_WINDOW, terms)
    }

    pub fn zero(ctx: &S::Context, nvars: usize) -> Self {
        Self::polynomial(ctx, nvars, []).expect("empty polynomial")
    }

    pub fn constant(ctx: &S::Context, nvars: usize, c: S) -> Self {
        Self::polynomial(ctx, nvars, [(vec![0; nvars], c)]).expect("constant polynomial")
    }

    /// The coordinate function `x_i` (0-based) as a polynomial.
    pub fn variable(ctx: &S::Context, nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::polynomial(ctx, nvars, [(m, S::one_in(ctx))]).expect("coordinate polynomial")
    }

    /// Re-centers the stored expression at `center` without expanding:
    /// the same coefficients now multiply powers of `(x - center)`.
    pub fn with_center(mut self, center: Vec<S>) -> Result<Self> {
        if center.len() != self.nvars {
            return Err(Error::Shape(format!(
                "center has {} entries, series has {} variables",
                center.len(),
                self.nvars
            )));
        }
        self.center = center;
        Ok(self)
    }

    pub fn with_trunc_degree(mut self, trunc_degree: u32) -> Self {
        self.trunc_degree = trunc_degree;
        self.terms.retain(|m, _| total_degree(m) <= trunc_degree);
        self
    }

    fn add_term(&mut self, m: MultiIndex, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn context(&self) -> &S::Context {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn center(&self) -> &[S] {
        &self.center
    }

    pub fn trunc_degree(&self) -> u32 {
        self.trunc_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> S {
        self.terms.get(m).cloned().unwrap_or_else(|| S::zero_in(&self.ctx))
    }

    /// Largest total degree among stored terms.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| total_degree(m)).max()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Shape(format!(
                "series in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        if !S::same_field(&self.ctx, &other.ctx) || self.center != other.center {
            return Err(Error::CenterMismatch);
        }
        Ok(())
    }

    fn empty_like(&self, trunc_degree: u32) -> Self {
        Self {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            center: self.center.clone(),
            terms: BTreeMap::new(),
            trunc_degree,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        out.trunc_degree = self.trunc_degree.max(other.trunc_degree);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one_in(&self.ctx))
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = self.empty_like(self.trunc_degree);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * s);
        }
        out
    }

    pub fn add_constant(&self, s: &S) -> Self {
        let mut out = self.clone();
        out.add_term(vec![0; self.nvars], s.clone());
        out
    }

    /// Exact product; the truncation degree is `Df + Dg`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_truncated(other, self.trunc_degree + other.trunc_degree)
    }

    /// Product with all terms above total degree `degree` dropped.
    pub fn mul_truncated(&self, other: &Self, degree: u32) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.empty_like(degree);
        for (ma, a) in &self.terms {
            let da = total_degree(ma);
            for (mb, b) in &other.terms {
                if da + total_degree(mb) > degree {
                    continue;
                }
                let m: MultiIndex = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                out.add_term(m, a.clone() * b);
            }
        }
        Ok(out)
    }

    pub fn pow_truncated(&self, e: u32, degree: u32) -> Result<Self> {
        let mut acc = Self::one_like(self).with_trunc_degree(degree);
        for _ in 0..e {
            acc = acc.mul_truncated(self, degree)?;
        }
        Ok(acc)
    }

    fn one_like(&self) -> Self {
        let mut out = self.empty_like(self.trunc_degree);
        out.add_term(vec![0; self.nvars], S::one_in(&self.ctx));
        out
    }

    /// Formal reciprocal `1/f` to total degree `degree`.
    pub fn inverse_truncated(&self, degree: u32) -> Result<Self> {
        let a0 = self.coeff(&vec![0; self.nvars]);
        let a0_inv = a0.checked_inv().ok_or(Error::NotInvertible)?;
        // f = a0 (1 + n), n without constant term
        let n = self.scale(&a0_inv).add_constant(&-S::one_in(&self.ctx));
        let minus_n = n.neg();
        let mut term = self.one_like().with_trunc_degree(degree);
        let mut sum = term.clone();
        for _ in 0..degree {
            term = term.mul_truncated(&minus_n, degree)?;
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term)?;
        }
        Ok(sum.scale(&a0_inv).with_trunc_degree(degree))
    }

    /// Reads `f` as a series in `nvars` variables, old variable `i` becoming
    /// `map[i]`; new variables are centered at zero.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Result<Self> {
        if map.len() != self.nvars || map.iter().any(|&j| j >= nvars) {
            return Err(Error::Shape(format!("invalid variable map {map:?} into {nvars} variables")));
        }
        let mut center = vec![S::zero_in(&self.ctx); nvars];
        for (i, &j) in map.iter().enumerate() {
            center[j] = self.center[i].clone();
        }
        let mut out = Self {
            ctx: self.ctx.clone(),
            nvars,
            center,
            terms: BTreeMap::new(),
            trunc_degree: self.trunc_degree,
        };
        for (m, c) in &self.terms {
            let mut new_m = vec![0; nvars];
            for (i, &j) in map.iter().enumerate() {
                new_m[j] += m[i];
            }
            out.add_term(new_m, c.clone());
        }
        Ok(out)
    }

    /// Sets every variable outside `keep` to its center and returns the
    /// result as a series in the kept variables, in the given order.
    pub fn restrict_to(&self, keep: &[usize]) -> Result<Self> {
        if keep.iter().any(|&i| i >= self.nvars) {
            return Err(Error::Shape(format!("invalid variable list {keep:?}")));
        }
        let mut out = Self {
            ctx: self.ctx.clone(),
            nvars: keep.len(),
            center: keep.iter().map(|&i| self.center[i].clone()).collect(),
            terms: BTreeMap::new(),
            trunc_degree: self.trunc_degree,
        };
        for (m, c) in &self.terms {
            let dropped = (0..self.nvars).filter(|i| !keep.contains(i)).any(|i| m[i] > 0);
            if !dropped {
                out.add_term(keep.iter().map(|&i| m[i]).collect(), c.clone());
            }
        }
        Ok(out)
    }

    /// `D_i f` for 0-based `i`; the truncation degree drops by one.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::Shape(format!(
                "variable index {} out of range 1..={}",
                i + 1,
                self.nvars
            )));
        }
        let mut out = self.empty_like(self.trunc_degree.saturating_sub(1));
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[i] -= 1;
            out.add_term(dm, c.clone() * &S::from_int(&self.ctx, m[i] as i64));
        }
        Ok(out)
    }

    fn powers<T: Clone>(base: &T, max: u32, one: T, mul: impl Fn(&T, &T) -> Result<T>) -> Result<Vec<T>> {
        let mut out = Vec::with_capacity(max as usize + 1);
        out.push(one);
        for e in 1..=max as usize {
            let next = mul(&out[e - 1], base)?;
            out.push(next);
        }
        Ok(out)
    }

    fn max_exponents(&self) -> Vec<u32> {
        let mut max = vec![0; self.nvars];
        for m in self.terms.keys() {
            for (a, b) in max.iter_mut().zip(m) {
                *a = (*a).max(*b);
            }
        }
        max
    }

    /// Substitutes series `gs` (sharing a center) for the variables:
    /// `f(g_1, ..., g_n)`. Exact; truncation degree `Df * max(Dg)`.
    pub fn compose(&self, gs: &[Self]) -> Result<Self> {
        let dg = gs.iter().map(|g| g.trunc_degree).max().unwrap_or(0);
        self.compose_truncated(gs, self.trunc_degree * dg.max(1))
    }

    pub fn compose_truncated(&self, gs: &[Self], degree: u32) -> Result<Self> {
        if gs.len() != self.nvars {
            return Err(Error::Shape(format!(
                "composition needs {} inner series, got {}",
                self.nvars,
                gs.len()
            )));
        }
        let first = gs.first().ok_or_else(|| Error::Shape("no inner series".into()))?;
        for g in gs {
            first.compatible(g)?;
        }
        let mut out = first.empty_like(degree);
        let max = self.max_exponents();
        let mut tables = Vec::with_capacity(self.nvars);
        for ((g, c), e) in gs.iter().zip(&self.center).zip(&max) {
            let shifted = g.add_constant(&-c.clone()).with_trunc_degree(degree);
            let one = first.one_like().with_trunc_degree(degree);
            tables.push(Self::powers(&shifted, *e, one, |a, b| a.mul_truncated(b, degree))?);
        }
        for (m, a) in &self.terms {
            let mut prod = first.one_like().with_trunc_degree(degree);
            for (table, e) in tables.iter().zip(m) {
                if *e > 0 {
                    prod = prod.mul_truncated(&table[*e as usize], degree)?;
                }
            }
            for (pm, pc) in prod.terms {
                out.add_term(pm, pc * a);
            }
        }
        Ok(out)
    }

    /// `sum_m a_m prod (x_i - c_i)^{m_i}` over stored terms, no convergence check.
    pub fn eval_truncated(&self, x: &[S]) -> Result<S> {
        if x.len() != self.nvars {
            return Err(Error::Shape(format!(
                "point has {} coordinates, series has {} variables",
                x.len(),
                self.nvars
            )));
        }
        let max = self.max_exponents();
        let tables: Vec<Vec<S>> = x
            .iter()
            .zip(&self.center)
            .zip(&max)
            .map(|((xi, ci), e)| {
                Self::powers(&(xi.clone() - ci), *e, S::one_in(&self.ctx), |a, b| Ok(a.clone() * b))
            })
            .collect::<Result<_>>()?;
        let mut sum = S::zero_in(&self.ctx);
        for (m, a) in &self.terms {
            let mut term = a.clone();
            for (table, e) in tables.iter().zip(m) {
                if *e > 0 {
                    term = term * &table[*e as usize];
                }
            }
            sum = sum + term;
        }
        Ok(sum)
    }

    /// Evaluates with every argument in a Weil algebra, no convergence check.
    pub fn lift_truncated(&self, xi: &[WeilElement<S>]) -> Result<WeilElement<S>> {
        if xi.len() != self.nvars {
            return Err(Error::Shape(format!(
                "lift needs {} arguments, got {}",
                self.nvars,
                xi.len()
            )));
        }
        let algebra = match xi.first() {
            Some(x) => x.algebra().clone(),
            None => return Err(Error::Shape("lift needs at least one argument".into())),
        };
        for x in xi {
            if x.algebra() != &algebra && **x.algebra() != *algebra {
                return Err(Error::AlgebraMismatch);
            }
        }
        let max = self.max_exponents();
        let tables: Vec<Vec<WeilElement<S>>> = xi
            .iter()
            .zip(&self.center)
            .zip(&max)
            .map(|((x, c), e)| {
                let shifted = x.add_scalar(&-c.clone());
                Self::powers(&shifted, *e, WeilElement::one(&algebra), |a, b| a.checked_mul(b))
            })
            .collect::<Result<_>>()?;
        let mut sum = WeilElement::zero(&algebra);
        for (m, a) in &self.terms {
            let mut term: Option<WeilElement<S>> = None;
            for (table, e) in tables.iter().zip(m) {
                if *e > 0 {
                    let factor = &table[*e as usize];
                    term = Some(match term {
                        Some(t) => &t * factor,
                        None => factor.clone(),
                    });
                }
            }
            let term = match term {
                Some(t) => t.scale(a),
                None => WeilElement::scalar(&algebra, a.clone()),
            };
            sum = &sum + &term;
        }
        Ok(sum)
    }
}

/// Outcome of the finite convergence test at radius `R = p^{-r}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceCertificate {
    pub converges: bool,
    /// `r` in `R = p^{-r}`.
    pub radius_exponent: i64,
    /// `R` as an exact rational string.
    pub radius: String,
    pub tail_window: u32,
    /// Required valuation of `|a_m| R^{|m|}` on the tier (the precision `N`).
    pub threshold: i64,
    /// `(d, min_{|m|=d} v(a_m) + r d)` over the inspected degrees; `None` is `+inf`.
    pub tier_profile: Vec<(u32, Option<i64>)>,
    pub witness_degree: Option<u32>,
    pub note: String,
}

impl PowerSeries<PadicNumber> {
    fn prime(&self) -> u64 {
        self.ctx.prime()
    }

    /// Tests `|a_m| R^{|m|} <= p^{-N}` on the top [`TAIL_WINDOW`] degrees
    /// (constant term excluded) and that `max_{|m|=d} |a_m| R^d` at the top
    /// degree is not a new maximum of the window.
    pub fn check_convergence(&self, r: i64) -> ConvergenceCertificate {
        let n = self.ctx.precision() as i64;
        let d_max = self.trunc_degree;
        let lo = d_max.saturating_sub(TAIL_WINDOW - 1).max(1);
        let mut per_degree: BTreeMap<u32, Valuation> = BTreeMap::new();
        for (m, a) in &self.terms {
            let d = total_degree(m);
            if d < lo {
                continue;
            }
            let v = match a.valuation() {
                Valuation::Finite(v) => Valuation::Finite(v + r * d as i64),
                Valuation::Infinite => Valuation::Infinite,
            };
            let slot = per_degree.entry(d).or_insert(Valuation::Infinite);
            if v < *slot {
                *slot = v;
            }
        }
        let profile: Vec<(u32, Valuation)> = if lo <= d_max {
            (lo..=d_max)
                .map(|d| (d, per_degree.get(&d).copied().unwrap_or(Valuation::Infinite)))
                .collect()
        } else {
            Vec::new()
        };

        let mut witness = profile.iter().find(|(_, v)| !v.at_least(n)).map(|(d, _)| *d);
        let mut note = if witness.is_some() {
            format!("a tier term exceeds p^-{n}")
        } else {
            String::new()
        };
        if witness.is_none() {
            let finite: Vec<(u32, i64)> = profile
                .iter()
                .filter_map(|(d, v)| v.finite().map(|v| (*d, v)))
                .collect();
            if let Some(((top, v_top), earlier)) = finite.split_last() {
                if !earlier.is_empty() && earlier.iter().all(|(_, v)| *v > *v_top) {
                    witness = Some(*top);
                    note = "tier norms reach a new maximum at the top degree".to_string();
                }
            }
        }
        if witness.is_none() {
            note = format!(
                "certifies the stored prefix up to degree {d_max} only; the infinite tail is not examined"
            );
        }
        let p = BigInt::from(self.prime());
        let radius = if r >= 0 {
            BigRational::new(BigInt::one(), num_traits::pow(p, r as usize))
        } else {
            BigRational::from_integer(num_traits::pow(p, (-r) as usize))
        };
        ConvergenceCertificate {
            converges: witness.is_none(),
            radius_exponent: r,
            radius: radius.to_string(),
            tail_window: TAIL_WINDOW,
            threshold: n,
            tier_profile: profile.into_iter().map(|(d, v)| (d, v.finite())).collect(),
            witness_degree: witness,
            note,
        }
    }

    /// `min_i v(x_i - c_i)`; `None` when the point is the center.
    fn radius_exponent<'a>(&self, offsets: impl Iterator<Item = &'a PadicNumber>) -> Option<i64> {
        offsets
            .zip(&self.center)
            .filter_map(|(x, c)| (x.clone() - c).valuation().finite())
            .min()
    }

    fn require_convergence(&self, r: Option<i64>) -> Result<()> {
        if let Some(r) = r {
            let cert = self.check_convergence(r);
            if !cert.converges {
                return Err(Error::Convergence(Box::new(cert)));
            }
        }
        Ok(())
    }

    /// Minimum valuation of the coefficientwise difference up to total
    /// degree `degree`; `Infinite` when the series agree there.
    pub fn discrepancy(&self, other: &Self, degree: u32) -> Result<Valuation> {
        self.compatible(other)?;
        let diff = self.sub(other)?;
        Ok(diff
            .terms
            .iter()
            .filter(|(m, _)| total_degree(m) <= degree)
            .map(|(_, c)| c.valuation())
            .min()
            .unwrap_or(Valuation::Infinite))
    }

    /// Evaluates after certifying convergence at `R = max_i |x_i - c_i|`.
    pub fn series_eval(&self, x: &[PadicNumber]) -> Result<PadicNumber> {
        if x.len() != self.nvars {
            return Err(Error::Shape(format!(
                "point has {} coordinates, series has {} variables",
                x.len(),
                self.nvars
            )));
        }
        self.require_convergence(self.radius_exponent(x.iter()))?;
        self.eval_truncated(x)
    }

    /// `f^A(xi)`, certified at the radius of the projected point.
    pub fn lift_series(&self, xi: &[WeilElement<PadicNumber>]) -> Result<WeilElement<PadicNumber>> {
        if xi.len() != self.nvars {
            return Err(Error::Shape(format!(
                "lift needs {} arguments, got {}",
                self.nvars,
                xi.len()
            )));
        }
        self.require_convergence(self.radius_exponent(xi.iter().map(|x| x.project())))?;
        self.lift_truncated(xi)
    }
}

impl<S: Scalar> fmt::Display for PowerSeries<S>
where
    S: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O(deg {})", self.trunc_degree + 1);
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for (i, e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{e}", i + 1)?,
                }
            }
        }
        write!(f, " + O(deg {})", self.trunc_degree + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicContext;
    use crate::weil::{make_dual_numbers, make_jet_algebra};

    fn factorials(n: u32) -> Vec<BigInt> {
        let mut out = vec![BigInt::one()];
        for k in 1..=n {
            let next = &out[k as usize - 1] * BigInt::from(k);
            out.push(next);
        }
        out
    }

    fn geometric(ctx: &PadicContext, d: u32) -> PowerSeries<PadicNumber> {
        PowerSeries::new(ctx, vec![ctx.zero()], d, (0..=d).map(|n| (vec![n], ctx.one()))).unwrap()
    }

    fn x_squared(ctx: &PadicContext) -> PowerSeries<PadicNumber> {
        PowerSeries::polynomial(ctx, 1, [(vec![2], ctx.one())]).unwrap()
    }

    #[test]
    fn geometric_series_at_p() {
        let ctx = PadicContext::new(5, 20).unwrap();
        let f = geometric(&ctx, 24);
        let value = f.series_eval(&[ctx.integer(5)]).unwrap();
        assert_eq!(value, ctx.ratio(-1, 4).unwrap());
    }

    #[test]
    fn constant_and_square() {
        let ctx = PadicContext::new(5, 20).unwrap();
        let c = PowerSeries::constant(&ctx, 2, ctx.integer(7));
        assert_eq!(c.series_eval(&[ctx.integer(3), ctx.ratio(1, 5).unwrap()]).unwrap(), ctx.integer(7));
        let f = x_squared(&ctx);
        let third = ctx.ratio(1, 3).unwrap();
        assert_eq!(f.series_eval(&[third]).unwrap(), ctx.ratio(1, 9).unwrap());
    }

    #[test]
    fn convergence_examples() {
        let ctx = PadicContext::new(5, 4).unwrap();
        let d = 40;
        let facts = factorials(d);
        let fact_series =
            PowerSeries::new(&ctx, vec![ctx.zero()], d, (0..=d).map(|n| (vec![n], ctx.from_bigint(&facts[n as usize]))))
                .unwrap();
        assert!(fact_series.check_convergence(0).converges);

        let inv_fact = PowerSeries::new(
            &ctx,
            vec![ctx.zero()],
            d,
            (0..=d).map(|n| (vec![n], ctx.from_ratio(&BigInt::one(), &facts[n as usize]).unwrap())),
        )
        .unwrap();
        let cert = inv_fact.check_convergence(0);
        assert!(!cert.converges);
        assert_eq!(cert.witness_degree, Some(d - 4));

        let geo = geometric(&ctx, 8);
        assert!(geo.check_convergence(1).converges);
        assert!(!geo.check_convergence(0).converges);
    }

    #[test]
    fn outside_radius_is_rejected() {
        let ctx = PadicContext::new(5, 10).unwrap();
        let geo = geometric(&ctx, 14);
        match geo.series_eval(&[ctx.integer(2)]) {
            Err(Error::Convergence(cert)) => assert_eq!(cert.witness_degree, Some(10)),
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }

    #[test]
    fn derivatives() {
        let ctx = PadicContext::new(5, 20).unwrap();
        let f = x_squared(&ctx);
        let df = f.partial_derivative(0).unwrap();
        assert_eq!(df.terms().collect::<Vec<_>>(), vec![(&vec![1], &ctx.integer(2))]);

        let xy = PowerSeries::polynomial(&ctx, 2, [(vec![1, 1], ctx.one())]).unwrap();
        assert_eq!(xy.partial_derivative(0).unwrap(), PowerSeries::variable(&ctx, 2, 1).with_trunc_degree(6));
        assert!(xy.partial_derivative(2).is_err());

        let geo = geometric(&ctx, 26);
        let dgeo = geo.partial_derivative(0).unwrap();
        assert_eq!(dgeo.trunc_degree(), 25);
        let value = dgeo.series_eval(&[ctx.integer(5)]).unwrap();
        let expected = ctx.ratio(1, 16).unwrap();
        assert!((value - &expected).valuation().at_least(24));
    }

    #[test]
    fn lift_examples() {
        let ctx = PadicContext::new(5, 20).unwrap();
        let dual = make_dual_numbers(&ctx).unwrap();
        let (x0, x1) = (ctx.integer(3), ctx.integer(7));
        let xi = WeilElement::new(&dual, vec![x0.clone(), x1.clone()]).unwrap();
        let lifted = x_squared(&ctx).lift_series(&[xi.clone()]).unwrap();
        assert_eq!(lifted.coeffs(), &[ctx.integer(9), ctx.integer(42)]);

        let c = PowerSeries::constant(&ctx, 1, ctx.integer(4));
        assert_eq!(c.lift_series(&[xi]).unwrap(), WeilElement::scalar(&dual, ctx.integer(4)));

        let jets = make_jet_algebra(&ctx, 2).unwrap();
        let xi = WeilElement::new(&jets, vec![x0.clone(), ctx.one(), ctx.zero()]).unwrap();
        let lifted = x_squared(&ctx).lift_series(&[xi]).unwrap();
        assert_eq!(lifted.coeffs(), &[ctx.integer(9), ctx.integer(6), ctx.one()]);
    }

    #[test]
    fn inverse_of_one_minus_z() {
        let ctx = PadicContext::new(7, 10).unwrap();
        let f = PowerSeries::polynomial(&ctx, 1, [(vec![0], ctx.one()), (vec![1], ctx.integer(-1))]).unwrap();
        let inv = f.inverse_truncated(6).unwrap();
        assert_eq!(inv, geometric(&ctx, 6));
    }

    #[test]
    fn compose_matches_substitution() {
        let ctx = PadicContext::new(5, 20).unwrap();
        // f(u) = u^2 + 1 composed with g(x, y) = x + 2y
        let f = PowerSeries::polynomial(&ctx, 1, [(vec![2], ctx.one()), (vec![0], ctx.one())]).unwrap();
        let g = PowerSeries::polynomial(&ctx, 2, [(vec![1, 0], ctx.one()), (vec![0, 1], ctx.integer(2))]).unwrap();
        let h = f.compose(&[g]).unwrap();
        let expected = PowerSeries::polynomial(
            &ctx,
            2,
            [
                (vec![0, 0], ctx.one()),
                (vec![2, 0], ctx.one()),
                (vec![1, 1], ctx.integer(4)),
                (vec![0, 2], ctx.integer(4)),
            ],
        )
        .unwrap();
        assert_eq!(h.terms().collect::<Vec<_>>(), expected.terms().collect::<Vec<_>>());
    }

    #[test]
    fn embed_and_restrict() {
        let ctx = PadicContext::new(5, 20).unwrap();
        let f = PowerSeries::polynomial(&ctx, 2, [(vec![1, 2], ctx.one()), (vec![3, 0], ctx.integer(2))]).unwrap();
        let g = f.embed(3, &[2, 0]).unwrap();
        assert_eq!(g.coeff(&[2, 0, 1]), ctx.one());
        assert_eq!(g.coeff(&[0, 0, 3]), ctx.integer(2));
        let h = f.restrict_to(&[0]).unwrap();
        assert_eq!(h.terms().collect::<Vec<_>>(), vec![(&vec![3], &ctx.integer(2))]);
        assert_eq!(g.restrict_to(&[2, 0]).unwrap(), f);
        let shifted = f.add_constant(&ctx.prime_power(7));
        assert_eq!(shifted.discrepancy(&f, 10).unwrap(), Valuation::Finite(7));
    }

    #[test]
    fn recentred_series() {
        let ctx = PadicContext::new(5, 20).unwrap();
        // (x - 2)^2 evaluated at 7
        let f = x_squared(&ctx).with_center(vec![ctx.integer(2)]).unwrap();
        assert_eq!(f.series_eval(&[ctx.integer(7)]).unwrap(), ctx.integer(25));
    }

    #[test]
    fn rational_series() {
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        let f = PowerSeries::polynomial(&(), 1, [(vec![3], q(1)), (vec![1], q(-2))]).unwrap();
        assert_eq!(f.eval_truncated(&[q(3)]).unwrap(), q(21));
        assert!(f.sub(&f).unwrap().eval_truncated(&[q(5)]).unwrap().is_zero());
    }
}
