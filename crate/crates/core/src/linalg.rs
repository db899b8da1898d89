//! Gaussian elimination over Q_p with minimal-valuation pivoting.
//!
//! Entries whose valuation reaches the threshold are treated as zero, so
//! rank is "rank at precision N".

use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Valuation};

pub type Matrix = Vec<Vec<PadicNumber>>;

/// Reduced row echelon form with the pivot columns and the valuation of
/// each pivot when it was chosen.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon {
    pub rows: Matrix,
    pub pivots: Vec<usize>,
    pub pivot_valuations: Vec<i64>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn min_pivot_valuation(&self) -> Option<i64> {
        self.pivot_valuations.iter().copied().min()
    }
}

fn negligible(x: &PadicNumber, threshold: i64) -> bool {
    x.valuation().at_least(threshold)
}

/// Row-reduces `matrix`; in each column the remaining entry of least
/// valuation becomes the pivot.
pub fn echelon(matrix: &[Vec<PadicNumber>], threshold: i64) -> Echelon {
    let mut rows: Matrix = matrix.to_vec();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut pivot_valuations = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next == rows.len() {
            break;
        }
        let best = (next..rows.len())
            .filter(|&r| !negligible(&rows[r][col], threshold))
            .min_by_key(|&r| rows[r][col].valuation());
        let Some(best) = best else {
            continue;
        };
        rows.swap(next, best);
        let v = rows[next][col].valuation().finite().expect("pivot is nonzero");
        pivot_valuations.push(v);
        let inv = rows[next][col].checked_inv().expect("pivot is nonzero");
        rows[next] = rows[next].iter().map(|x| x.clone() * &inv).collect();
        for r in 0..rows.len() {
            if r == next || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            let pivot_row = rows[next].clone();
            for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                *x = x.clone() - factor.clone() * y;
            }
            rows[r][col] = PadicNumber::zero(factor.prime(), factor.precision());
        }
        for row in rows.iter_mut() {
            for x in row.iter_mut() {
                if !x.is_zero() && negligible(x, threshold) {
                    *x = PadicNumber::zero(x.prime(), x.precision());
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    Echelon {
        rows,
        pivots,
        pivot_valuations,
    }
}

/// Basis of `{ v : A v = 0 }` at precision `threshold`, each vector scaled
/// to have a unit entry. `ncols` is needed when `A` has no rows.
pub fn kernel(matrix: &[Vec<PadicNumber>], ncols: usize, threshold: i64, zero: &PadicNumber) -> (Matrix, Echelon) {
    let ech = echelon(matrix, threshold);
    let free = (0..ncols).filter(|c| !ech.pivots.contains(c));
    let basis = free
        .map(|f| {
            let mut v = vec![zero.clone(); ncols];
            v[f] = zero.context().one();
            for (r, &c) in ech.pivots.iter().enumerate() {
                v[c] = -ech.rows[r][f].clone();
            }
            normalize(v)
        })
        .collect();
    (basis, ech)
}

/// Scales `v` by a power of `p` so its smallest valuation is zero.
fn normalize(v: Vec<PadicNumber>) -> Vec<PadicNumber> {
    let min = v.iter().filter_map(|x| x.valuation().finite()).min();
    match min {
        Some(m) if m != 0 => {
            let ctx = v[0].context();
            let scale = ctx.prime_power(-m);
            v.into_iter().map(|x| x * &scale).collect()
        }
        _ => v,
    }
}

pub fn mat_vec(matrix: &[Vec<PadicNumber>], v: &[PadicNumber], zero: &PadicNumber) -> Vec<PadicNumber> {
    matrix
        .iter()
        .map(|row| row.iter().zip(v).fold(zero.clone(), |acc, (a, b)| acc + a.clone() * b))
        .collect()
}

/// Solves a square system; fails unless every pivot is found.
pub fn solve(matrix: &[Vec<PadicNumber>], rhs: &[PadicNumber], threshold: i64) -> Result<Vec<PadicNumber>> {
    let n = matrix.len();
    if rhs.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(Error::Shape(format!("solve needs a square {n} x {n} system")));
    }
    let augmented: Matrix = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| row.iter().cloned().chain(std::iter::once(b.clone())).collect())
        .collect();
    let ech = echelon(&augmented, threshold);
    if ech.pivots.len() < n || ech.pivots[..n].iter().enumerate().any(|(i, &c)| c != i) {
        return Err(Error::Singular);
    }
    Ok(ech.rows.iter().map(|r| r[n].clone()).collect())
}

/// Smallest valuation among the entries; `Infinite` for an all-zero vector.
pub fn min_valuation<'a>(v: impl IntoIterator<Item = &'a PadicNumber>) -> Valuation {
    v.into_iter().map(|x| x.valuation()).min().unwrap_or(Valuation::Infinite)
}
