//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactla::Matrix;
use crate::instance::WmiInstance;
use crate::scalar::ExactField;

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub m: usize,
    pub entries: (i64, i64),
    pub weights: (i64, i64),
    /// Probability that an entry is nonzero.
    pub density: f64,
}

impl GenParams {
    pub fn new(n: usize, m: usize) -> Self {
        GenParams { n, m, entries: (-2, 2), weights: (-5, 5), density: 0.7 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("entry range {0}..={1} has no nonzero value")]
    NoNonzero(i64, i64),
    #[error("empty range {0}..={1}")]
    EmptyRange(i64, i64),
    #[error("density {0} must lie in (0, 1]")]
    Density(f64),
    #[error("dimensions must be positive")]
    Dimensions,
}

fn check(p: &GenParams) -> Result<(), GenError> {
    let (lo, hi) = p.entries;
    if p.n == 0 || p.m == 0 {
        return Err(GenError::Dimensions);
    }
    if lo > hi {
        return Err(GenError::EmptyRange(lo, hi));
    }
    if lo == 0 && hi == 0 {
        return Err(GenError::NoNonzero(lo, hi));
    }
    if p.weights.0 > p.weights.1 {
        return Err(GenError::EmptyRange(p.weights.0, p.weights.1));
    }
    if !(p.density > 0.0 && p.density <= 1.0) {
        return Err(GenError::Density(p.density));
    }
    Ok(())
}

fn nonzero(rng: &mut ChaCha8Rng, (lo, hi): (i64, i64)) -> i64 {
    loop {
        let v = rng.gen_range(lo..=hi);
        if v != 0 {
            return v;
        }
    }
}

fn entry(rng: &mut ChaCha8Rng, p: &GenParams) -> i64 {
    if rng.gen_bool(p.density) {
        nonzero(rng, p.entries)
    } else {
        0
    }
}

/// Fills an `n x m` matrix, redrawing any column that comes out zero.
fn random_matrix<T: ExactField>(rng: &mut ChaCha8Rng, p: &GenParams) -> Matrix<T> {
    let mut cols: Vec<Vec<i64>> = Vec::with_capacity(p.m);
    for _ in 0..p.m {
        loop {
            let col: Vec<i64> = (0..p.n).map(|_| entry(rng, p)).collect();
            if col.iter().any(|&v| v != 0) {
                cols.push(col);
                break;
            }
        }
    }
    from_columns(&cols, p.n)
}

fn from_columns<T: ExactField>(cols: &[Vec<i64>], n: usize) -> Matrix<T> {
    let rows: Vec<Vec<i64>> = (0..n).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    Matrix::from_ints(&rows)
}

fn weights(rng: &mut ChaCha8Rng, p: &GenParams) -> Vec<i64> {
    (0..p.m).map(|_| rng.gen_range(p.weights.0..=p.weights.1)).collect()
}

pub fn generate<T: ExactField>(seed: u64, p: &GenParams) -> Result<WmiInstance<T>, GenError> {
    check(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_matrix(&mut rng, p);
    let b = random_matrix(&mut rng, p);
    let c = weights(&mut rng, p);
    Ok(WmiInstance::new(a, b, c).expect("generator output is valid"))
}

/// An instance where `A`, `B` or both have rank `< n`, built as a product
/// `L R` with an inner dimension below `n`. Requires `n >= 2`.
pub fn generate_rank_deficient<T: ExactField>(seed: u64, p: &GenParams) -> Result<WmiInstance<T>, GenError> {
    check(p)?;
    if p.n < 2 {
        return Err(GenError::Dimensions);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let which = rng.gen_range(0..3);
    let low_rank = |rng: &mut ChaCha8Rng| -> Matrix<T> {
        let r = rng.gen_range(1..p.n);
        let left: Vec<Vec<i64>> = loop {
            let left: Vec<Vec<i64>> = (0..p.n).map(|_| (0..r).map(|_| entry(rng, p)).collect()).collect();
            if (0..r).all(|j| left.iter().any(|row| row[j] != 0)) {
                break left;
            }
        };
        let mut cols = Vec::with_capacity(p.m);
        for _ in 0..p.m {
            loop {
                let inner: Vec<i64> = (0..r).map(|_| entry(rng, p)).collect();
                let col: Vec<i64> = left.iter().map(|row| row.iter().zip(&inner).map(|(x, y)| x * y).sum()).collect();
                if col.iter().any(|&v| v != 0) {
                    cols.push(col);
                    break;
                }
            }
        }
        from_columns(&cols, p.n)
    };
    let a = if which != 1 { low_rank(&mut rng) } else { random_matrix(&mut rng, p) };
    let b = if which != 0 { low_rank(&mut rng) } else { random_matrix(&mut rng, p) };
    let c = weights(&mut rng, p);
    Ok(WmiInstance::new(a, b, c).expect("generator output is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rank;
    use crate::Rational;

    #[test]
    fn deterministic_per_seed() {
        let p = GenParams::new(3, 6);
        let x: WmiInstance<Rational> = generate(1, &p).unwrap();
        let y: WmiInstance<Rational> = generate(1, &p).unwrap();
        assert_eq!(x.render(), y.render());
        let z: WmiInstance<Rational> = generate(2, &p).unwrap();
        assert_ne!(x.render(), z.render());
    }

    #[test]
    fn full_density_has_no_zeros() {
        let p = GenParams { density: 1.0, ..GenParams::new(4, 8) };
        let x: WmiInstance<Rational> = generate(9, &p).unwrap();
        for r in 0..4 {
            for c in 0..8 {
                assert!(x.a().is_nonzero(r, c) && x.b().is_nonzero(r, c));
            }
        }
    }

    #[test]
    fn rank_deficient_really_is() {
        for seed in 0..30 {
            let x: WmiInstance<Rational> = generate_rank_deficient(seed, &GenParams::new(3, 6)).unwrap();
            assert!(rank(x.a()) < 3 || rank(x.b()) < 3);
        }
    }

    #[test]
    fn bad_parameters() {
        let p = GenParams { entries: (0, 0), ..GenParams::new(2, 2) };
        assert!(generate::<Rational>(0, &p).is_err());
        let p = GenParams { density: 0.0, ..GenParams::new(2, 2) };
        assert!(generate::<Rational>(0, &p).is_err());
    }
}
