//! JSON file formats. Numbers are exact rationals written `"a/b"` (plain
//! integers are accepted on input). Reading from disk is left to callers;
//! nested files appear as [`FileRef`]s that are either a path or inline.

use serde::{Deserialize, Serialize};

use crate::analytic::PowerSeries;
use crate::bundle::ChartTransition;
use crate::diophantine::DiophantineSystem;
use crate::elliptic::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::padic::{parse_rational, PadicContext, PadicNumber};
use crate::weil::{WeilAlgebra, WeilElement};
use crate::PadicAlgebra;

/// A rational as it appears in JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Int(i64),
    Text(String),
}

impl RationalText {
    pub fn to_padic(&self, ctx: &PadicContext) -> Result<PadicNumber> {
        match self {
            RationalText::Int(n) => Ok(ctx.integer(*n)),
            RationalText::Text(s) => Ok(ctx.from_rational(&parse_rational(s)?)),
        }
    }

    pub fn from_padic(x: &PadicNumber) -> Self {
        RationalText::Text(x.rational_string())
    }
}

fn to_padics(ctx: &PadicContext, values: &[RationalText]) -> Result<Vec<PadicNumber>> {
    values.iter().map(|v| v.to_padic(ctx)).collect()
}

pub fn texts(values: &[PadicNumber]) -> Vec<RationalText> {
    values.iter().map(RationalText::from_padic).collect()
}

/// A nested file given by path or inline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FileRef<T> {
    Path(String),
    Inline(T),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: RationalText,
}

/// Structure constants with 1-based indices; omitted entries are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    #[serde(default)]
    pub prime: Option<u64>,
    #[serde(default)]
    pub precision: Option<u32>,
    pub dim: usize,
    pub structure_constants: Vec<ConstantEntry>,
}

impl AlgebraFile {
    pub fn build(&self, ctx: &PadicContext) -> Result<PadicAlgebra> {
        let entries = self
            .structure_constants
            .iter()
            .map(|e| {
                if e.i == 0 || e.j == 0 || e.k == 0 {
                    return Err(Error::Shape("structure constant indices start at 1".into()));
                }
                Ok((e.i - 1, e.j - 1, e.k - 1, e.value.to_padic(ctx)?))
            })
            .collect::<Result<Vec<_>>>()?;
        WeilAlgebra::from_entries(ctx, self.dim, entries)
    }

    pub fn from_algebra(algebra: &WeilAlgebra<PadicNumber>) -> Self {
        let ctx = algebra.context();
        Self {
            prime: Some(ctx.prime()),
            precision: Some(ctx.precision()),
            dim: algebra.dim(),
            structure_constants: algebra
                .nonzero_constants()
                .map(|(i, j, k, c)| ConstantEntry {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                    value: RationalText::from_padic(&c),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub exponents: Vec<u32>,
    pub coeff: RationalText,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesFile {
    #[serde(default)]
    pub prime: Option<u64>,
    #[serde(default)]
    pub precision: Option<u32>,
    pub nvars: usize,
    /// Defaults to the polynomial degree plus the convergence tail window.
    #[serde(default)]
    pub trunc_degree: Option<u32>,
    /// Defaults to the origin.
    #[serde(default)]
    pub center: Option<Vec<RationalText>>,
    pub terms: Vec<TermEntry>,
}

impl SeriesFile {
    pub fn to_series(&self, ctx: &PadicContext) -> Result<PowerSeries<PadicNumber>> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.exponents.clone(), t.coeff.to_padic(ctx)?)))
            .collect::<Result<Vec<_>>>()?;
        let poly = match self.trunc_degree {
            Some(d) => PowerSeries::new(ctx, vec![ctx.zero(); self.nvars], d, terms)?,
            None => PowerSeries::polynomial(ctx, self.nvars, terms)?,
        };
        if poly.nvars() != self.nvars {
            return Err(Error::Shape("nvars does not match the terms".into()));
        }
        match &self.center {
            Some(c) => poly.with_center(to_padics(ctx, c)?),
            None => Ok(poly),
        }
    }

    pub fn from_series(f: &PowerSeries<PadicNumber>) -> Self {
        let ctx = f.context();
        Self {
            prime: Some(ctx.prime()),
            precision: Some(ctx.precision()),
            nvars: f.nvars(),
            trunc_degree: Some(f.trunc_degree()),
            center: Some(texts(f.center())),
            terms: f
                .terms()
                .map(|(m, c)| TermEntry {
                    exponents: m.clone(),
                    coeff: RationalText::from_padic(c),
                })
                .collect(),
        }
    }
}

/// `{"algebra": file, "coords": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointFile {
    pub algebra: FileRef<AlgebraFile>,
    pub coords: Vec<Vec<RationalText>>,
}

impl PointFile {
    pub fn coords(&self, ctx: &PadicContext) -> Result<Vec<Vec<PadicNumber>>> {
        self.coords.iter().map(|row| to_padics(ctx, row)).collect()
    }
}

pub fn element_texts(x: &WeilElement<PadicNumber>) -> Vec<RationalText> {
    texts(x.coeffs())
}

/// A chart transition, one series per target coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionFile {
    #[serde(default)]
    pub prime: Option<u64>,
    #[serde(default)]
    pub precision: Option<u32>,
    pub components: Vec<SeriesFile>,
}

impl TransitionFile {
    pub fn to_transition(&self, ctx: &PadicContext) -> Result<ChartTransition<PadicNumber>> {
        let components = self.components.iter().map(|c| c.to_series(ctx)).collect::<Result<_>>()?;
        ChartTransition::new(components)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    #[serde(default)]
    pub prime: Option<u64>,
    #[serde(default)]
    pub precision: Option<u32>,
    pub nvars: usize,
    pub equations: Vec<SeriesFile>,
}

/// `{"a1": .., "a2": .., "a3": .., "a4": .., "a6": ..}`, missing entries zero.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveFile {
    #[serde(default)]
    pub prime: Option<u64>,
    #[serde(default)]
    pub precision: Option<u32>,
    #[serde(default)]
    pub a1: Option<RationalText>,
    #[serde(default)]
    pub a2: Option<RationalText>,
    #[serde(default)]
    pub a3: Option<RationalText>,
    #[serde(default)]
    pub a4: Option<RationalText>,
    #[serde(default)]
    pub a6: Option<RationalText>,
}

impl CurveFile {
    pub fn to_curve(&self, ctx: &PadicContext) -> Result<WeierstrassCurve<PadicNumber>> {
        let get = |a: &Option<RationalText>| a.as_ref().map_or(Ok(ctx.zero()), |t| t.to_padic(ctx));
        WeierstrassCurve::new(
            ctx,
            [get(&self.a1)?, get(&self.a2)?, get(&self.a3)?, get(&self.a4)?, get(&self.a6)?],
        )
    }
}

/// Samples `f(0..=K)` or Mahler coefficients `a_0..=a_K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValuesFile {
    #[serde(default)]
    pub prime: Option<u64>,
    #[serde(default)]
    pub precision: Option<u32>,
    pub values: Vec<RationalText>,
}

impl SystemFile {
    pub fn to_system(&self, ctx: &PadicContext) -> Result<DiophantineSystem> {
        let polys = self.equations.iter().map(|e| e.to_series(ctx)).collect::<Result<_>>()?;
        DiophantineSystem::new(ctx, self.nvars, polys)
    }
}

impl ValuesFile {
    pub fn to_padics(&self, ctx: &PadicContext) -> Result<Vec<PadicNumber>> {
        to_padics(ctx, &self.values)
    }
}
