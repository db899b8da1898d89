//! Mahler expansions `f(x) = sum_n a_n C(x, n)` of functions on Z_p.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::analytic::TAIL_WINDOW;
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber, Valuation};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct MahlerCoefficients<S: Scalar> {
    ctx: S::Context,
    coeffs: Vec<S>,
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 1..=n {
        let next = &row[k - 1] * BigInt::from(n - k + 1) / BigInt::from(k);
        row.push(next);
    }
    row
}

/// `C(x, n) = x (x-1) ... (x-n+1) / n!` with no domain check.
pub fn binomial_unchecked<S: Scalar>(ctx: &S::Context, x: &S, n: usize) -> S {
    let mut num = S::one_in(ctx);
    let mut fact = BigInt::one();
    for k in 0..n {
        num = num * &(x.clone() - S::from_int(ctx, k as i64));
        fact *= BigInt::from(k + 1);
    }
    num * &S::from_ratio(ctx, &BigInt::one(), &fact).expect("n! is nonzero")
}

impl<S: Scalar> MahlerCoefficients<S> {
    pub fn new(ctx: &S::Context, coeffs: Vec<S>) -> Self {
        Self {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    /// `a_n = sum_k (-1)^{n-k} C(n, k) f(k)` from samples `f(0), ..., f(K)`.
    pub fn fit(ctx: &S::Context, samples: &[S]) -> Self {
        let coeffs = (0..samples.len())
            .map(|n| {
                binomial_row(n)
                    .iter()
                    .zip(samples)
                    .enumerate()
                    .fold(S::zero_in(ctx), |acc, (k, (c, f))| {
                        let term = f.clone() * &S::from_bigint(ctx, c);
                        if (n - k) % 2 == 0 {
                            acc + term
                        } else {
                            acc - term
                        }
                    })
            })
            .collect();
        Self::new(ctx, coeffs)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// `sum_n a_n C(x, n)` with no domain check.
    pub fn eval_unchecked(&self, x: &S) -> S {
        let mut sum = S::zero_in(&self.ctx);
        let mut binom = S::one_in(&self.ctx);
        for (n, a) in self.coeffs.iter().enumerate() {
            if n > 0 {
                // C(x, n) = C(x, n-1) (x - n + 1) / n
                let step = x.clone() - S::from_int(&self.ctx, n as i64 - 1);
                let inv_n = S::from_ratio(&self.ctx, &BigInt::one(), &BigInt::from(n))
                    .expect("n is nonzero");
                binom = binom * &step * &inv_n;
            }
            if !a.is_zero() {
                sum = sum + a.clone() * &binom;
            }
        }
        sum
    }
}

impl MahlerCoefficients<PadicNumber> {
    pub fn eval(&self, x: &PadicNumber) -> Result<PadicNumber> {
        require_integral(x)?;
        Ok(self.eval_unchecked(x))
    }

    /// Decay report for `|a_n|_p`, judged on the final tail entries.
    pub fn continuity_check(&self) -> ContinuityReport {
        let threshold = self.ctx.precision() as i64;
        let len = self.coeffs.len();
        let window = (TAIL_WINDOW as usize).min(len / 2).max(len.min(1));
        let valuations: Vec<Option<i64>> = self.coeffs.iter().map(|a| a.valuation().finite()).collect();
        let norms = self.coeffs.iter().map(|a| a.norm().to_string()).collect();
        let prime = self.ctx.prime();
        let over_n = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, a)| a.valuation().finite().map(|v| v - v_p(n as u64, prime)))
            .collect();
        let witness = (len - window..len).find(|&n| !self.coeffs[n].valuation().at_least(threshold));
        ContinuityReport {
            valuations,
            norms,
            quotient_valuations: over_n,
            tail_window: window,
            threshold,
            verdict: witness.is_none(),
            witness,
        }
    }
}

fn v_p(mut n: u64, p: u64) -> i64 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

fn require_integral(x: &PadicNumber) -> Result<()> {
    match x.valuation() {
        Valuation::Finite(v) if v < 0 => Err(Error::NotIntegral(v)),
        _ => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityReport {
    /// `v(a_n)`, `None` for a zero coefficient.
    pub valuations: Vec<Option<i64>>,
    /// `|a_n|_p` as exact rationals.
    pub norms: Vec<String>,
    /// `v(a_n / n)` for `n >= 1`; reported without a verdict.
    pub quotient_valuations: Vec<Option<i64>>,
    pub tail_window: usize,
    pub threshold: i64,
    /// Every entry of the tail window has `|a_n| <= p^-threshold`.
    pub verdict: bool,
    pub witness: Option<usize>,
}

pub fn mahler_coefficients(ctx: &PadicContext, samples: &[PadicNumber]) -> MahlerCoefficients<PadicNumber> {
    MahlerCoefficients::fit(ctx, samples)
}

pub fn mahler_eval(a: &MahlerCoefficients<PadicNumber>, x: &PadicNumber) -> Result<PadicNumber> {
    a.eval(x)
}

pub fn binomial_polynomial(x: &PadicNumber, n: usize) -> Result<PadicNumber> {
    require_integral(x)?;
    Ok(binomial_unchecked(&x.context(), x, n))
}

pub fn mahler_continuity_check(a: &MahlerCoefficients<PadicNumber>) -> ContinuityReport {
    a.continuity_check()
}
