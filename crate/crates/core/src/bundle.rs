//! Chart-level Weil bundles: infinitely near points in coordinates, lifted
//! transition maps, and the lifts of vector fields, forms and connections.

use std::sync::Arc;

use crate::analytic::{PowerSeries, TAIL_WINDOW};
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber, Valuation};
use crate::scalar::Scalar;
use crate::weil::{WeilAlgebra, WeilElement};

type Series = PowerSeries<PadicNumber>;
type Element = WeilElement<PadicNumber>;

/// A point of `M^A` in a chart: row `i` is `xi(x_i) = sum_j x_{i,j} alpha_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeilPoint<S: Scalar> {
    algebra: Arc<WeilAlgebra<S>>,
    rows: Vec<WeilElement<S>>,
}

impl<S: Scalar> WeilPoint<S> {
    pub fn new(algebra: &Arc<WeilAlgebra<S>>, coords: Vec<Vec<S>>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Shape("a point needs at least one coordinate".into()));
        }
        let rows = coords
            .into_iter()
            .map(|row| WeilElement::new(algebra, row))
            .collect::<Result<_>>()?;
        Ok(Self {
            algebra: algebra.clone(),
            rows,
        })
    }

    pub fn from_rows(rows: Vec<WeilElement<S>>) -> Result<Self> {
        let algebra = rows
            .first()
            .ok_or_else(|| Error::Shape("a point needs at least one coordinate".into()))?
            .algebra()
            .clone();
        if rows.iter().any(|r| **r.algebra() != *algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self { algebra, rows })
    }

    pub fn algebra(&self) -> &Arc<WeilAlgebra<S>> {
        &self.algebra
    }

    /// Base dimension `n`.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[WeilElement<S>] {
        &self.rows
    }

    pub fn coords(&self) -> Vec<Vec<S>> {
        self.rows.iter().map(|r| r.coeffs().to_vec()).collect()
    }

    /// `pi_M(xi)`: the unit column.
    pub fn project_point(&self) -> Vec<S> {
        self.rows.iter().map(|r| r.project().clone()).collect()
    }
}

pub fn make_weil_point<S: Scalar>(algebra: &Arc<WeilAlgebra<S>>, coords: Vec<Vec<S>>) -> Result<WeilPoint<S>> {
    WeilPoint::new(algebra, coords)
}

/// Components of `phi_j o phi_i^{-1}` as series in `n` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartTransition<S: Scalar> {
    components: Vec<PowerSeries<S>>,
}

impl<S: Scalar> ChartTransition<S> {
    pub fn new(components: Vec<PowerSeries<S>>) -> Result<Self> {
        let n = components.len();
        let first = components
            .first()
            .ok_or_else(|| Error::Shape("transition needs at least one component".into()))?;
        for c in &components {
            if c.nvars() != n {
                return Err(Error::Shape(format!(
                    "transition component in {} variables, expected {n}",
                    c.nvars()
                )));
            }
            if c.center() != first.center() {
                return Err(Error::CenterMismatch);
            }
        }
        Ok(Self { components })
    }

    pub fn identity(ctx: &S::Context, n: usize) -> Self {
        Self {
            components: (0..n).map(|i| PowerSeries::variable(ctx, n, i)).collect(),
        }
    }

    pub fn components(&self) -> &[PowerSeries<S>] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

impl ChartTransition<PadicNumber> {
    pub fn eval(&self, x: &[PadicNumber]) -> Result<Vec<PadicNumber>> {
        self.components.iter().map(|c| c.series_eval(x)).collect()
    }
}

/// `xi(z_k) = T_k^A(xi(y_1), ..., xi(y_n))`.
pub fn transition_lift(t: &ChartTransition<PadicNumber>, xi: &WeilPoint<PadicNumber>) -> Result<WeilPoint<PadicNumber>> {
    if t.dim() != xi.dim() {
        return Err(Error::Shape(format!(
            "transition on {}-dimensional charts, point has {} coordinates",
            t.dim(),
            xi.dim()
        )));
    }
    let rows = t
        .components
        .iter()
        .map(|c| c.lift_series(&xi.rows))
        .collect::<Result<_>>()?;
    WeilPoint::from_rows(rows)
}

/// Coefficients `a~_i` of the lifted vector field at `xi`.
pub fn lift_vector_field(a: &[Series], xi: &WeilPoint<PadicNumber>) -> Result<Vec<Element>> {
    if a.len() != xi.dim() {
        return Err(Error::Shape(format!(
            "vector field has {} components, point has {} coordinates",
            a.len(),
            xi.dim()
        )));
    }
    a.iter().map(|f| f.lift_series(&xi.rows)).collect()
}

/// `omega = sum_I f_I dx^I` with strictly increasing 0-based index sets.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialForm {
    degree: usize,
    terms: Vec<(Vec<usize>, Series)>,
}

impl DifferentialForm {
    pub fn new(degree: usize, terms: Vec<(Vec<usize>, Series)>) -> Result<Self> {
        for (index, f) in &terms {
            if index.len() != degree {
                return Err(Error::Shape(format!(
                    "index set {index:?} has length {}, form degree is {degree}",
                    index.len()
                )));
            }
            if index.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Shape(format!("index set {index:?} is not strictly increasing")));
            }
            if index.iter().any(|&i| i >= f.nvars()) {
                return Err(Error::Shape(format!(
                    "index set {index:?} out of range for {} variables",
                    f.nvars()
                )));
            }
        }
        Ok(Self { degree, terms })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(Vec<usize>, Series)] {
        &self.terms
    }
}

pub(crate) fn determinant<S: Scalar>(ctx: &S::Context, m: &[Vec<S>]) -> S {
    match m.len() {
        0 => S::one_in(ctx),
        1 => m[0][0].clone(),
        n => (0..n).fold(S::zero_in(ctx), |acc, col| {
            if m[0][col].is_zero() {
                return acc;
            }
            let minor: Vec<Vec<S>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != col)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = m[0][col].clone() * &determinant(ctx, &minor);
            if col % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        }),
    }
}

/// `omega~|_xi(v_1, ..., v_k) = sum_I f_I^A(xi) det(dpi(v_r)_{I_s})`, where each
/// tangent vector is an `n x l` coordinate-velocity matrix and `dpi` reads
/// its unit column.
pub fn evaluate_lifted_form(
    omega: &DifferentialForm,
    xi: &WeilPoint<PadicNumber>,
    v: &[Vec<Vec<PadicNumber>>],
) -> Result<Element> {
    if v.len() != omega.degree {
        return Err(Error::Shape(format!(
            "{}-form evaluated on {} vectors",
            omega.degree,
            v.len()
        )));
    }
    let l = xi.algebra.dim();
    for vec in v {
        if vec.len() != xi.dim() || vec.iter().any(|row| row.len() != l) {
            return Err(Error::Shape(format!(
                "tangent vectors must be {} x {l} matrices",
                xi.dim()
            )));
        }
    }
    let ctx = xi.algebra.context();
    let mut sum = WeilElement::zero(&xi.algebra);
    for (index, f) in &omega.terms {
        let minor: Vec<Vec<PadicNumber>> = v
            .iter()
            .map(|vec| index.iter().map(|&i| vec[i][0].clone()).collect())
            .collect();
        let det = determinant(ctx, &minor);
        if det.is_zero() {
            continue;
        }
        sum = &sum + &f.lift_series(&xi.rows)?.scale(&det);
    }
    Ok(sum)
}

/// Christoffel symbols `Gamma_{ij}^k`, stored at `[i][j][k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChristoffelData {
    n: usize,
    symbols: Vec<Vec<Vec<Series>>>,
}

impl ChristoffelData {
    pub fn new(symbols: Vec<Vec<Vec<Series>>>) -> Result<Self> {
        let n = symbols.len();
        for plane in &symbols {
            if plane.len() != n || plane.iter().any(|row| row.len() != n) {
                return Err(Error::Shape(format!("Christoffel symbols must be {n} x {n} x {n}")));
            }
            if plane.iter().flatten().any(|g| g.nvars() != n) {
                return Err(Error::Shape(format!("Christoffel symbols must be series in {n} variables")));
            }
        }
        Ok(Self { n, symbols })
    }

    pub fn flat(ctx: &PadicContext, n: usize) -> Self {
        Self {
            n,
            symbols: vec![vec![vec![Series::zero(ctx, n); n]; n]; n],
        }
    }

    pub fn symbol(&self, i: usize, j: usize, k: usize) -> &Series {
        &self.symbols[i][j][k]
    }
}

/// Components of `nabla~_X Y` at `xi`: the lift of `X(Y^k)` plus
/// `sum_{i,j} X~^i Y~^j Gamma~_{ij}^k`.
pub fn lift_connection(
    gamma: &ChristoffelData,
    x: &[Series],
    y: &[Series],
    xi: &WeilPoint<PadicNumber>,
) -> Result<Vec<Element>> {
    let n = gamma.n;
    if x.len() != n || y.len() != n || xi.dim() != n {
        return Err(Error::Shape(format!(
            "connection on {n} coordinates needs fields and a point of that dimension"
        )));
    }
    let x_lift = lift_vector_field(x, xi)?;
    let y_lift = lift_vector_field(y, xi)?;
    (0..n)
        .map(|k| {
            let mut derivative = Series::zero(y[k].context(), n).with_center(y[k].center().to_vec())?;
            for (i, xi_coeff) in x.iter().enumerate() {
                derivative = derivative.add(&xi_coeff.mul(&y[k].partial_derivative(i)?)?)?;
            }
            let mut out = derivative.lift_series(&xi.rows)?;
            for i in 0..n {
                for j in 0..n {
                    let g = gamma.symbol(i, j, k);
                    if g.is_zero() {
                        continue;
                    }
                    let term = &(&x_lift[i] * &y_lift[j]) * &g.lift_series(&xi.rows)?;
                    out = &out + &term;
                }
            }
            Ok(out)
        })
        .collect()
}

/// `(alpha y + beta) / (gamma y + delta)` expanded around `center` to `degree`.
pub fn mobius_series(
    ctx: &PadicContext,
    [alpha, beta, gamma, delta]: [&PadicNumber; 4],
    center: &PadicNumber,
    degree: u32,
) -> Result<Series> {
    let n0 = alpha.clone() * center + beta;
    let d0 = gamma.clone() * center + delta;
    let d0_inv = d0.checked_inv()?;
    // coefficient of u^n: (n0 (-g)^n + alpha (-g)^{n-1}) / d0, g = gamma / d0
    let minus_g = -(gamma.clone() * &d0_inv);
    let mut terms = vec![(vec![0], n0.clone() * &d0_inv)];
    let mut pow = ctx.one();
    for n in 1..=degree {
        let prev = pow.clone();
        pow = pow * &minus_g;
        terms.push((vec![n], (n0.clone() * &pow + alpha.clone() * &prev) * &d0_inv));
    }
    Series::new(ctx, vec![center.clone()], degree, terms)
}

/// The three standard charts of P^1 over Q_p: `y = x1/x0` on `U0`,
/// `z = x0/x1` on `U1` and `u = x0/(x1 - x0)` on `U2`.
#[derive(Clone, Debug)]
pub struct ProjectiveLine {
    ctx: PadicContext,
    degree: u32,
}

/// Outcome of the triple-overlap check at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleReport {
    pub via_u1: WeilPoint<PadicNumber>,
    pub direct: WeilPoint<PadicNumber>,
    /// Minimum valuation of the coefficientwise difference.
    pub discrepancy: Valuation,
}

fn residue_center(ctx: &PadicContext, x: &PadicNumber) -> Result<PadicNumber> {
    let r = x.residue(1)?;
    Ok(ctx.from_bigint(&r.into()))
}

impl ProjectiveLine {
    /// Expansions truncated at `N + TAIL_WINDOW`, enough for unit base points.
    pub fn new(ctx: &PadicContext) -> Self {
        Self {
            ctx: *ctx,
            degree: ctx.precision() + TAIL_WINDOW,
        }
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    fn mobius(&self, coeffs: [i64; 4], center: &PadicNumber) -> Result<ChartTransition<PadicNumber>> {
        let [a, b, c, d] = coeffs.map(|k| self.ctx.integer(k));
        let series = mobius_series(&self.ctx, [&a, &b, &c, &d], center, self.degree)?;
        ChartTransition::new(vec![series])
    }

    /// `U0 -> U1`, `z = 1/y`, expanded around the residue of `y0`.
    pub fn t01(&self, y0: &PadicNumber) -> Result<ChartTransition<PadicNumber>> {
        self.mobius([0, 1, 1, 0], &residue_center(&self.ctx, y0)?)
    }

    /// `U0 -> U2`, `u = 1/(y - 1)`.
    pub fn t02(&self, y0: &PadicNumber) -> Result<ChartTransition<PadicNumber>> {
        self.mobius([0, 1, 1, -1], &residue_center(&self.ctx, y0)?)
    }

    /// `U1 -> U2`, `u = z/(1 - z)`, expanded around the residue of `z0`.
    pub fn t12(&self, z0: &PadicNumber) -> Result<ChartTransition<PadicNumber>> {
        self.mobius([1, 0, -1, 1], &residue_center(&self.ctx, z0)?)
    }

    /// Compares `T12^A(T01^A(xi))` with `T02^A(xi)` for `xi` in the `y` chart;
    /// the base point must be a unit with `y0 != 1 mod p`.
    pub fn cocycle(&self, xi: &WeilPoint<PadicNumber>) -> Result<CocycleReport> {
        if xi.dim() != 1 {
            return Err(Error::Shape("P^1 points have one coordinate".into()));
        }
        let y0 = &xi.project_point()[0];
        let one = self.ctx.one();
        if y0.valuation() != Valuation::Finite(0) || (y0.clone() - &one).valuation() != Valuation::Finite(0) {
            return Err(Error::Shape(format!(
                "base point {} must be a unit not congruent to 1 mod p",
                y0.rational_string()
            )));
        }
        let z = transition_lift(&self.t01(y0)?, xi)?;
        let via_u1 = transition_lift(&self.t12(&z.project_point()[0])?, &z)?;
        let direct = transition_lift(&self.t02(y0)?, xi)?;
        let discrepancy = via_u1
            .rows()
            .iter()
            .zip(direct.rows())
            .flat_map(|(a, b)| a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x.clone() - y).valuation()))
            .min()
            .unwrap_or(Valuation::Infinite);
        Ok(CocycleReport {
            via_u1,
            direct,
            discrepancy,
        })
    }
}
