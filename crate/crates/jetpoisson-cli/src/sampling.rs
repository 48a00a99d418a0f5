//! Seeded deterministic samplers for the verification suites.
//!
//! Every sampler draws from a `ChaCha20Rng`, so a fixed seed reproduces the
//! same corpus byte for byte on every platform. The constructions mirror the
//! randomized law tests in the core crate: perturbed-identity generator
//! tuples, origin-fixing invertible jets, and skew bi-fields.

use anyhow::Result;
use jetpoisson_core::bialgebra::{rmatrix_from_generators, BiField, GeneratorTuple, VectorField};
use jetpoisson_core::classify::IntegerMatrix;
use jetpoisson_core::jetgroup::FormalMap;
use jetpoisson_core::rational::{int, ratio};
use jetpoisson_core::{Rational, Series, Truncation};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// A reproducible generator for the given seed.
pub fn seeded(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Uniform-ish draw from the inclusive range `lo..=hi`.
pub fn pick(rng: &mut ChaCha20Rng, lo: i64, hi: i64) -> i64 {
    debug_assert!(lo <= hi);
    let span = (hi - lo + 1) as u64;
    lo + (rng.next_u64() % span) as i64
}

/// Nonzero rational with small numerator and denominator.
pub fn coefficient(rng: &mut ChaCha20Rng) -> Rational {
    let mut numer = pick(rng, -4, 3);
    if numer >= 0 {
        numer += 1;
    }
    let denom = pick(rng, 1, 3);
    ratio(numer, denom).expect("denominator is positive")
}

/// Sparse polynomial with total degree in `floor..=ceiling`, at most
/// `terms` monomials (possibly fewer after rejection), exponents `0..=2`.
pub fn polynomial(
    rng: &mut ChaCha20Rng,
    trunc: &Truncation,
    floor: i32,
    ceiling: i32,
    terms: u32,
) -> Result<Series<Rational>> {
    let nvars = trunc.nvars();
    let mut collected = Vec::new();
    for _ in 0..terms {
        let exponents: Vec<i32> = (0..nvars).map(|_| pick(rng, 0, 2) as i32).collect();
        let total: i32 = exponents.iter().sum();
        if total < floor || total > ceiling {
            continue;
        }
        collected.push((exponents, coefficient(rng)));
    }
    Ok(Series::from_terms(trunc.clone(), collected)?)
}

/// Polynomial vector field on `n` variables with component valuations at
/// least `floor`.
pub fn vector_field(
    rng: &mut ChaCha20Rng,
    n: usize,
    order: i32,
    floor: i32,
) -> Result<VectorField<Rational>> {
    let trunc = Truncation::power(n, order)?;
    let components = (0..n)
        .map(|_| polynomial(rng, &trunc, floor, order.min(3), 4))
        .collect::<Result<Vec<_>>>()?;
    Ok(VectorField::new(components)?)
}

/// Generator tuple of the shape `u^i + (degree >= 2 tail)`, always
/// admissible because the linear part is the identity.
pub fn generator_tuple(
    rng: &mut ChaCha20Rng,
    n: usize,
    order: i32,
) -> Result<GeneratorTuple<Rational>> {
    let trunc = Truncation::power(n, order)?;
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut exponents = vec![0i32; n];
        exponents[i] = 1;
        let mut terms = vec![(exponents, int(1))];
        let tail = polynomial(rng, &trunc, 2, order.min(3), 3)?;
        for (e, c) in tail.terms() {
            terms.push((e.to_vec(), c.clone()));
        }
        components.push(Series::from_terms(trunc.clone(), terms)?);
    }
    Ok(GeneratorTuple::new(components)?)
}

/// Origin-fixing invertible formal map: triangular unit linear part plus a
/// quadratic-or-higher tail.
pub fn jet_map(rng: &mut ChaCha20Rng, n: usize, order: i32) -> Result<FormalMap<Rational>> {
    let trunc = Truncation::power(n, order)?;
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut terms = Vec::new();
        for j in 0..n {
            let mut exponents = vec![0i32; n];
            exponents[j] = 1;
            if j == i {
                terms.push((exponents, coefficient(rng)));
            } else if j > i && pick(rng, 0, 1) == 1 {
                terms.push((exponents, coefficient(rng)));
            }
        }
        let tail = polynomial(rng, &trunc, 2, order.min(3), 3)?;
        for (e, c) in tail.terms() {
            terms.push((e.to_vec(), c.clone()));
        }
        components.push(Series::from_terms(trunc.clone(), terms)?);
    }
    Ok(FormalMap::new(components)?)
}

/// Skew bi-field with polynomial entries of degree at most `ceiling`.
pub fn skew_field(
    rng: &mut ChaCha20Rng,
    n: usize,
    order: i32,
    ceiling: i32,
) -> Result<BiField<Rational>> {
    let trunc = Truncation::power(2 * n, order)?;
    let mut raw = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = Vec::with_capacity(n);
        for _ in 0..n {
            row.push(polynomial(rng, &trunc, 0, ceiling, 3)?);
        }
        raw.push(row);
    }
    let field = BiField::new(raw)?;
    let transposed = field.swapped_transpose()?;
    Ok(field.sub(&transposed)?)
}

/// Nonsingular integer matrix with entries in `lo..=hi`.
pub fn nonsingular_matrix(
    rng: &mut ChaCha20Rng,
    n: usize,
    lo: i64,
    hi: i64,
) -> IntegerMatrix {
    loop {
        let rows: Vec<Vec<i32>> = (0..n)
            .map(|_| (0..n).map(|_| pick(rng, lo, hi) as i32).collect())
            .collect();
        if let Ok(matrix) = IntegerMatrix::new(rows) {
            if matrix.determinant() != 0 {
                return matrix;
            }
        }
    }
}

/// Perturbed-identity generator tuple together with its r-matrix, which
/// solves the classical equation by construction.
pub fn solution_pair(
    rng: &mut ChaCha20Rng,
    n: usize,
    order: i32,
) -> Result<(GeneratorTuple<Rational>, BiField<Rational>)> {
    let generators = generator_tuple(rng, n, order)?;
    let rmatrix = rmatrix_from_generators(&generators)?;
    Ok((generators, rmatrix))
}
