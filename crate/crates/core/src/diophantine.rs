//! Polynomial systems over Z_p: residuals, Jacobians, tangent spaces,
//! first-order infinitesimal solutions and Hensel lifting.
//!
//! "Vanishes" always means valuation at least the precision `N`.

use std::sync::Arc;

use serde::Serialize;

use crate::analytic::PowerSeries;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::padic::{PadicContext, PadicNumber, Valuation};
use crate::weil::{WeilAlgebra, WeilElement};

type Series = PowerSeries<PadicNumber>;

#[derive(Clone, Debug, PartialEq)]
pub struct DiophantineSystem {
    ctx: PadicContext,
    nvars: usize,
    polys: Vec<Series>,
}

impl DiophantineSystem {
    pub fn new(ctx: &PadicContext, nvars: usize, polys: Vec<Series>) -> Result<Self> {
        for f in &polys {
            if f.nvars() != nvars {
                return Err(Error::Shape(format!(
                    "equation in {} variables, system has {nvars}",
                    f.nvars()
                )));
            }
            if f.center().iter().any(|c| !c.is_zero()) {
                return Err(Error::Shape("system polynomials must be centered at 0".into()));
            }
            if f.terms().any(|(_, c)| !c.is_integral()) {
                return Err(Error::NonIntegralSystem);
            }
        }
        Ok(Self {
            ctx: *ctx,
            nvars,
            polys,
        })
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn equations(&self) -> &[Series] {
        &self.polys
    }

    fn threshold(&self) -> i64 {
        self.ctx.precision() as i64
    }

    fn check_point(&self, x: &[PadicNumber]) -> Result<()> {
        if x.len() != self.nvars {
            return Err(Error::Shape(format!(
                "point has {} coordinates, system has {} variables",
                x.len(),
                self.nvars
            )));
        }
        Ok(())
    }

    pub fn values(&self, x: &[PadicNumber]) -> Result<Vec<PadicNumber>> {
        self.check_point(x)?;
        self.polys.iter().map(|f| f.series_eval(x)).collect()
    }

    pub fn evaluate(&self, x: &[PadicNumber]) -> Result<ResidualReport> {
        let valuations: Vec<Valuation> = self.values(x)?.iter().map(|v| v.valuation()).collect();
        let threshold = self.threshold();
        Ok(ResidualReport {
            verdict: valuations.iter().all(|v| v.at_least(threshold)),
            valuations,
            threshold,
        })
    }

    /// `J_{ij} = D_j f_i (x)`.
    pub fn jacobian(&self, x: &[PadicNumber]) -> Result<Matrix> {
        self.check_point(x)?;
        self.polys
            .iter()
            .map(|f| (0..self.nvars).map(|j| f.partial_derivative(j)?.series_eval(x)).collect())
            .collect()
    }

    /// Kernel of the Jacobian at a solution, by valuation-pivoted elimination.
    pub fn tangent_space(&self, base: &[PadicNumber]) -> Result<TangentSolution> {
        let report = self.evaluate(base)?;
        if let Some((i, v)) = report
            .valuations
            .iter()
            .enumerate()
            .find(|(_, v)| !v.at_least(report.threshold))
        {
            return Err(Error::NotASolution {
                equation: i + 1,
                valuation: *v,
            });
        }
        let j = self.jacobian(base)?;
        let (kernel_basis, ech) = linalg::kernel(&j, self.nvars, self.threshold(), &self.ctx.zero());
        Ok(TangentSolution {
            base: base.to_vec(),
            kernel_basis,
            residual_valuations: report.valuations,
            rank: ech.rank(),
            min_pivot_valuation: ech.min_pivot_valuation(),
        })
    }

    /// First-order jets `base + v e` over a solution.
    pub fn infinitesimal_points(
        &self,
        base: &[PadicNumber],
        algebra: &Arc<WeilAlgebra<PadicNumber>>,
    ) -> Result<InfinitesimalPoints<'_>> {
        if algebra.dim() != 2 || algebra.nilpotency_index() != 2 {
            return Err(Error::Shape("infinitesimal points need the dual numbers".into()));
        }
        let tangent = self.tangent_space(base)?;
        Ok(InfinitesimalPoints {
            system: self,
            algebra: algebra.clone(),
            tangent,
        })
    }

    /// Newton iteration `x <- x - J(x)^{-1} f(x)` from a simple root mod p.
    pub fn hensel_lift(&self, seed: &[PadicNumber]) -> Result<HenselResult> {
        if self.polys.len() != self.nvars {
            return Err(Error::Shape(format!(
                "Hensel lifting needs a square system, got {} equations in {} variables",
                self.polys.len(),
                self.nvars
            )));
        }
        let report = self.evaluate(seed)?;
        if let Some((i, v)) = report.valuations.iter().enumerate().find(|(_, v)| !v.at_least(1)) {
            return Err(Error::NotApproximateRoot {
                equation: i + 1,
                valuation: *v,
            });
        }
        let ech = linalg::echelon(&self.jacobian(seed)?, self.threshold());
        if ech.rank() < self.nvars || ech.pivot_valuations.iter().any(|&v| v != 0) {
            return Err(Error::NonUnitJacobian);
        }

        const MAX_STEPS: usize = 64;
        let threshold = self.threshold();
        let mut x = seed.to_vec();
        let mut record = vec![linalg::min_valuation(&self.values(&x)?)];
        while !record.last().expect("nonempty").at_least(threshold) {
            if record.len() > MAX_STEPS {
                return Err(Error::NoConvergence(MAX_STEPS));
            }
            let fx = self.values(&x)?;
            let delta = linalg::solve(&self.jacobian(&x)?, &fx, threshold)?;
            x = x.iter().zip(&delta).map(|(a, d)| a.clone() - d).collect();
            record.push(linalg::min_valuation(&self.values(&x)?));
        }
        Ok(HenselResult {
            root: x,
            residual_valuations: record,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub valuations: Vec<Valuation>,
    pub threshold: i64,
    /// Every residual has valuation at least `threshold`.
    pub verdict: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangentSolution {
    pub base: Vec<PadicNumber>,
    pub kernel_basis: Vec<Vec<PadicNumber>>,
    pub residual_valuations: Vec<Valuation>,
    pub rank: usize,
    pub min_pivot_valuation: Option<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HenselResult {
    pub root: Vec<PadicNumber>,
    /// Minimum residual valuation at the seed and after each step.
    pub residual_valuations: Vec<Valuation>,
}

impl HenselResult {
    pub fn iterations(&self) -> usize {
        self.residual_valuations.len() - 1
    }
}

/// The jets `xi(x_j) = base_j + v_j e` with `v` in the tangent space.
#[derive(Clone, Debug)]
pub struct InfinitesimalPoints<'a> {
    system: &'a DiophantineSystem,
    algebra: Arc<WeilAlgebra<PadicNumber>>,
    tangent: TangentSolution,
}

/// Valuations of the two components of each `f_i^A(base + v e)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointCheck {
    pub base_valuations: Vec<Valuation>,
    pub eps_valuations: Vec<Valuation>,
    pub threshold: i64,
    pub passed: bool,
}

impl InfinitesimalPoints<'_> {
    pub fn tangent(&self) -> &TangentSolution {
        &self.tangent
    }

    pub fn kernel_basis(&self) -> &[Vec<PadicNumber>] {
        &self.tangent.kernel_basis
    }

    /// `sum_r t_r k_r` over the kernel basis.
    pub fn combination(&self, t: &[PadicNumber]) -> Result<Vec<PadicNumber>> {
        let basis = &self.tangent.kernel_basis;
        if t.len() != basis.len() {
            return Err(Error::Shape(format!(
                "{} parameters for a {}-dimensional tangent space",
                t.len(),
                basis.len()
            )));
        }
        let ctx = self.system.context();
        Ok((0..self.system.nvars)
            .map(|j| {
                t.iter()
                    .zip(basis)
                    .fold(ctx.zero(), |acc, (tr, k)| acc + tr.clone() * &k[j])
            })
            .collect())
    }

    pub fn jet(&self, v: &[PadicNumber]) -> Result<Vec<WeilElement<PadicNumber>>> {
        self.system.check_point(v)?;
        self.tangent
            .base
            .iter()
            .zip(v)
            .map(|(b, vj)| WeilElement::new(&self.algebra, vec![b.clone(), vj.clone()]))
            .collect()
    }

    /// Lifts every equation at `base + v e` and checks both components.
    pub fn verify(&self, v: &[PadicNumber]) -> Result<PointCheck> {
        let xi = self.jet(v)?;
        let threshold = self.system.threshold();
        let mut base_valuations = Vec::new();
        let mut eps_valuations = Vec::new();
        for f in &self.system.polys {
            let value = f.lift_series(&xi)?;
            base_valuations.push(value.coeffs()[0].valuation());
            eps_valuations.push(value.coeffs()[1].valuation());
        }
        let passed = base_valuations
            .iter()
            .chain(&eps_valuations)
            .all(|v| v.at_least(threshold));
        Ok(PointCheck {
            base_valuations,
            eps_valuations,
            threshold,
            passed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil::make_dual_numbers;
    use proptest::prelude::*;

    fn poly(ctx: &PadicContext, nvars: usize, terms: &[(&[u32], i64)]) -> Series {
        Series::polynomial(ctx, nvars, terms.iter().map(|(m, c)| (m.to_vec(), ctx.integer(*c)))).unwrap()
    }

    fn circle(ctx: &PadicContext) -> DiophantineSystem {
        let f = poly(ctx, 2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)]);
        DiophantineSystem::new(ctx, 2, vec![f]).unwrap()
    }

    fn ints(ctx: &PadicContext, v: &[i64]) -> Vec<PadicNumber> {
        v.iter().map(|&x| ctx.integer(x)).collect()
    }

    #[test]
    fn residual_examples() {
        let ctx = PadicContext::new(5, 20).unwrap();
        let s = circle(&ctx);
        let r = s.evaluate(&ints(&ctx, &[1, 0])).unwrap();
        assert_eq!(r.valuations, vec![Valuation::Infinite]);
        assert!(r.verdict);
        let r = s.evaluate(&ints(&ctx, &[1, 1])).unwrap();
        assert_eq!(r.valuations, vec![Valuation::Finite(0)]);
        assert!(!r.verdict);

        let ctx2 = PadicContext::new(5, 2).unwrap();
        let s = DiophantineSystem::new(&ctx2, 1, vec![poly(&ctx2, 1, &[(&[2], 1), (&[0], -6)])]).unwrap();
        assert!(s.evaluate(&ints(&ctx2, &[16])).unwrap().verdict);
    }

    #[test]
    fn jacobian_examples() {
        let ctx = PadicContext::new(5, 20).unwrap();
        assert_eq!(circle(&ctx).jacobian(&ints(&ctx, &[1, 0])).unwrap(), vec![ints(&ctx, &[2, 0])]);
        let lin = DiophantineSystem::new(
            &ctx,
            2,
            vec![poly(&ctx, 2, &[(&[1, 0], 3), (&[0, 1], 4)]), poly(&ctx, 2, &[(&[0, 1], 7)])],
        )
        .unwrap();
        assert_eq!(lin.jacobian(&ints(&ctx, &[9, -2])).unwrap(), vec![ints(&ctx, &[3, 4]), ints(&ctx, &[0, 7])]);
        let sq = DiophantineSystem::new(&ctx, 1, vec![poly(&ctx, 1, &[(&[2], 1)])]).unwrap();
        assert_eq!(sq.jacobian(&ints(&ctx, &[0])).unwrap(), vec![ints(&ctx, &[0])]);
    }

    #[test]
    fn tangent_examples() {
        let ctx = PadicContext::new(5, 20).unwrap();
        let t = circle(&ctx).tangent_space(&ints(&ctx, &[1, 0])).unwrap();
        assert_eq!(t.kernel_basis, vec![ints(&ctx, &[0, 1])]);
        assert_eq!(t.rank, 1);

        let sq = DiophantineSystem::new(&ctx, 1, vec![poly(&ctx, 1, &[(&[2], 1)])]).unwrap();
        let t = sq.tangent_space(&ints(&ctx, &[0])).unwrap();
        assert_eq!((t.rank, t.kernel_basis.len()), (0, 1));

        let lin = DiophantineSystem::new(
            &ctx,
            2,
            vec![poly(&ctx, 2, &[(&[1, 0], 1), (&[0, 1], 1)]), poly(&ctx, 2, &[(&[1, 0], 1), (&[0, 1], -1)])],
        )
        .unwrap();
        assert!(lin.tangent_space(&ints(&ctx, &[0, 0])).unwrap().kernel_basis.is_empty());

        assert_eq!(
            circle(&ctx).tangent_space(&ints(&ctx, &[1, 1])),
            Err(Error::NotASolution {
                equation: 1,
                valuation: Valuation::Finite(0)
            })
        );
    }

    #[test]
    fn infinitesimal_examples() {
        let ctx = PadicContext::new(5, 20).unwrap();
        let dual = make_dual_numbers(&ctx).unwrap();
        let s = circle(&ctx);
        let pts = s.infinitesimal_points(&ints(&ctx, &[1, 0]), &dual).unwrap();
        let v = pts.combination(&[ctx.ratio(3, 7).unwrap()]).unwrap();
        assert_eq!(v, vec![ctx.zero(), ctx.ratio(3, 7).unwrap()]);
        assert!(pts.verify(&v).unwrap().passed);
        let bad = pts.verify(&ints(&ctx, &[1, 0])).unwrap();
        assert!(!bad.passed);
        assert_eq!(bad.eps_valuations, vec![Valuation::Finite(0)]);

        let lin = DiophantineSystem::new(&ctx, 1, vec![poly(&ctx, 1, &[(&[1], 1)])]).unwrap();
        let pts = lin.infinitesimal_points(&ints(&ctx, &[0]), &dual).unwrap();
        assert!(pts.kernel_basis().is_empty());
        assert!(pts.verify(&ints(&ctx, &[0])).unwrap().passed);
    }

    #[test]
    fn hensel_examples() {
        let ctx = PadicContext::new(5, 20).unwrap();
        let s = DiophantineSystem::new(&ctx, 1, vec![poly(&ctx, 1, &[(&[2], 1), (&[0], -6)])]).unwrap();
        let r = s.hensel_lift(&ints(&ctx, &[1])).unwrap();
        let root = &r.root[0];
        assert_eq!(root.residue(2).unwrap(), 16u32.into());
        assert!((root.clone() * root - ctx.integer(6)).valuation().at_least(20));
        assert_eq!(root.residue(1).unwrap(), 1u32.into());
        let expected: Vec<Valuation> = [1, 2, 4, 8, 16].into_iter().map(Valuation::Finite).collect();
        assert_eq!(&r.residual_valuations[..5], expected.as_slice());
        assert!(r.iterations() <= 6);

        // one step after the seed: 16 mod 25
        let ctx2 = PadicContext::new(5, 2).unwrap();
        let s2 = DiophantineSystem::new(&ctx2, 1, vec![poly(&ctx2, 1, &[(&[2], 1), (&[0], -6)])]).unwrap();
        assert_eq!(s2.hensel_lift(&ints(&ctx2, &[1])).unwrap().root, ints(&ctx2, &[16]));

        let lin = DiophantineSystem::new(
            &ctx,
            2,
            vec![
                poly(&ctx, 2, &[(&[1, 0], 2), (&[0, 1], 1), (&[0, 0], -5)]),
                poly(&ctx, 2, &[(&[1, 0], 1), (&[0, 1], 1), (&[0, 0], -4)]),
            ],
        )
        .unwrap();
        let r = lin.hensel_lift(&ints(&ctx, &[1, 3])).unwrap();
        assert_eq!(r.root, ints(&ctx, &[1, 3]));
        assert_eq!(r.iterations(), 0);
        let r = lin.hensel_lift(&ints(&ctx, &[6, 8])).unwrap();
        assert_eq!(r.root, ints(&ctx, &[1, 3]));
        assert_eq!(r.iterations(), 1);

        let bad = DiophantineSystem::new(&ctx, 1, vec![poly(&ctx, 1, &[(&[2], 1), (&[0], -5)])]).unwrap();
        assert_eq!(bad.hensel_lift(&ints(&ctx, &[0])), Err(Error::NonUnitJacobian));
        assert!(matches!(s.hensel_lift(&ints(&ctx, &[2])), Err(Error::NotApproximateRoot { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn kernel_vectors_annihilate(rows in prop::collection::vec(prop::collection::vec(-30i64..30, 4), 1..4)) {
            let ctx = PadicContext::new(5, 20).unwrap();
            let polys = rows.iter().map(|r| {
                let terms: Vec<(Vec<u32>, PadicNumber)> = r.iter().enumerate().map(|(j, &a)| {
                    let mut m = vec![0; 4];
                    m[j] = 1;
                    (m, ctx.integer(a))
                }).collect();
                Series::polynomial(&ctx, 4, terms).unwrap()
            }).collect();
            let s = DiophantineSystem::new(&ctx, 4, polys).unwrap();
            let base = ints(&ctx, &[0, 0, 0, 0]);
            let t = s.tangent_space(&base).unwrap();
            prop_assert_eq!(t.kernel_basis.len() + t.rank, 4);
            let j = s.jacobian(&base).unwrap();
            for v in &t.kernel_basis {
                let jv = linalg::mat_vec(&j, v, &ctx.zero());
                prop_assert!(linalg::min_valuation(&jv).at_least(20));
            }
        }
    }
}
