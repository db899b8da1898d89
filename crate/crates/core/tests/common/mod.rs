#![allow(dead_code)]

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use weil_core::{PadicContext, PadicNumber, PadicSeries};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

fn modulus(ctx: &PadicContext) -> BigUint {
    BigUint::from(ctx.prime()).pow(ctx.precision())
}

/// Uniform element of `Z_p / p^N`.
pub fn integral(ctx: &PadicContext, rng: &mut TestRng) -> PadicNumber {
    let r = rng.gen_biguint_below(&modulus(ctx));
    ctx.from_bigint(&BigInt::from(r))
}

/// `p^v * u` with `u` a uniform unit.
pub fn with_valuation(ctx: &PadicContext, rng: &mut TestRng, v: i64) -> PadicNumber {
    let p = ctx.prime();
    let m = modulus(ctx);
    let u = loop {
        let u = rng.gen_biguint_below(&m);
        if !(&u % p).is_zero() {
            break u;
        }
    };
    PadicNumber::from_unit(p, ctx.precision(), v, &u).unwrap()
}

pub fn unit(ctx: &PadicContext, rng: &mut TestRng) -> PadicNumber {
    with_valuation(ctx, rng, 0)
}

/// Element of `pZ_p`, valuation exactly one most of the time.
pub fn in_maximal_ideal(ctx: &PadicContext, rng: &mut TestRng) -> PadicNumber {
    integral(ctx, rng) * &ctx.integer(ctx.prime() as i64)
}

pub fn small_int(ctx: &PadicContext, rng: &mut TestRng, bound: i64) -> PadicNumber {
    ctx.integer(rng.gen_range(-bound..=bound))
}

/// Agreement mod `p^k`.
pub fn agree(a: &PadicNumber, b: &PadicNumber, k: i64) -> bool {
    (a.clone() - b).valuation().at_least(k)
}

pub fn agree_all(a: &[PadicNumber], b: &[PadicNumber], k: i64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| agree(x, y, k))
}

/// Random exponent vector of total degree at most `max_degree`.
pub fn monomial(rng: &mut TestRng, nvars: usize, max_degree: u32) -> Vec<u32> {
    let target = rng.gen_range(0..=max_degree);
    let mut m = vec![0; nvars];
    for _ in 0..target {
        m[rng.gen_range(0..nvars)] += 1;
    }
    m
}

/// Sparse polynomial with integral coefficients, at most `max_terms` terms.
pub fn polynomial(ctx: &PadicContext, rng: &mut TestRng, nvars: usize, max_degree: u32, max_terms: usize) -> PadicSeries {
    let count = rng.gen_range(1..=max_terms);
    let terms: Vec<_> = (0..count)
        .map(|_| (monomial(rng, nvars, max_degree), small_int(ctx, rng, 1000)))
        .collect();
    PadicSeries::polynomial(ctx, nvars, terms).unwrap()
}

/// Rank over Q by fraction-exact elimination.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = BigRational::one() / &m[rank][col];
        let pivot: Vec<BigRational> = m[rank].iter().map(|x| x * &inv).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        m[rank] = pivot;
        rank += 1;
    }
    rank
}
