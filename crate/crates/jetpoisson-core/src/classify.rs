//! Orbit representatives of Yang–Baxter solutions: every nonsingular integer
//! matrix `D` yields a tuple of Laurent-monomial generators
//! `F̃^i(u) = Π_k (u^k)^{−d_{ik}}` whose r-matrix has polynomial components,
//! one orbit per matrix; a separate special orbit has the linear
//! representative `φ^{ij}(u,v) = u^i − v^j`.
//!
//! Matrices with a zero determinant are degenerate — their rows admit an
//! integer relation `Σ k_i d_i = 0`, which [`degeneracy_kernel`] exhibits —
//! and matrices with negative entries index families of Laurent-series
//! generators sampled by [`laurent_family_sample`] rather than single
//! polynomial representatives.
//!
//! Two normalizations of the canonical r-matrix are exposed: the `Raw` form
//! is exactly the generator contraction, while `Appendix` rescales by
//! `(det D)²` (and for one generator flips the sign convention of the
//! generating function) to match the classical displayed component tables.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};

use crate::bialgebra::{self, BiField, GeneratorTuple};
use crate::error::{Error, Result};
use crate::homspace::{induced_alpha, BiVectorOnSpace};
use crate::rational::{int, Rational};
use crate::series::{Series, Truncation};

/// A square integer matrix of exponent data, rows indexing generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    entries: Vec<Vec<i32>>,
}

/// Where a matrix sits in the classification of orbit indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixClass {
    /// Non-negative entries and a nonzero determinant: a polynomial orbit
    /// representative exists.
    NonnegativeNonsingular,
    /// Zero determinant: degenerate, rows satisfy an integer relation.
    Singular,
    /// Nonsingular with some negative entry: indexes a Laurent family.
    General,
}

impl IntegerMatrix {
    /// Wraps a non-empty square table of integers.
    ///
    /// # Errors
    /// [`Error::Shape`] for empty or ragged input.
    pub fn new(entries: Vec<Vec<i32>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::Shape("empty integer matrix".into()));
        }
        if entries.iter().any(|row| row.len() != n) {
            return Err(Error::Shape("integer matrix is not square".into()));
        }
        Ok(IntegerMatrix { entries })
    }

    /// Matrix size.
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// The entry `d_{ik}`.
    pub fn entry(&self, i: usize, k: usize) -> i32 {
        self.entries[i][k]
    }

    /// The rows as exponent vectors.
    pub fn rows(&self) -> &[Vec<i32>] {
        &self.entries
    }

    /// Exact determinant by cofactor expansion (entries stay far below the
    /// `i64` range for the matrix sizes that occur).
    pub fn determinant(&self) -> i64 {
        fn det(rows: &[Vec<i64>]) -> i64 {
            let n = rows.len();
            if n == 1 {
                return rows[0][0];
            }
            let mut total = 0i64;
            for col in 0..n {
                if rows[0][col] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i64>> = rows[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if col % 2 == 0 { 1 } else { -1 };
                total += sign * rows[0][col] * det(&minor);
            }
            total
        }
        let wide: Vec<Vec<i64>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|&v| i64::from(v)).collect())
            .collect();
        det(&wide)
    }

    /// True when every entry is ≥ 0.
    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().flatten().all(|&v| v >= 0)
    }

    /// Classification by determinant and sign pattern.
    pub fn classification(&self) -> MatrixClass {
        if self.determinant() == 0 {
            MatrixClass::Singular
        } else if self.is_nonnegative() {
            MatrixClass::NonnegativeNonsingular
        } else {
            MatrixClass::General
        }
    }

    /// The transposed matrix.
    #[must_use]
    pub fn transpose(&self) -> Self {
        let n = self.dim();
        IntegerMatrix {
            entries: (0..n)
                .map(|k| (0..n).map(|i| self.entries[i][k]).collect())
                .collect(),
        }
    }
}

/// All first minors of a square integer matrix, with its determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorTable {
    minors: Vec<Vec<i64>>,
    det: i64,
}

impl MinorTable {
    /// The minor obtained by deleting row `i` and column `j`.
    pub fn minor(&self, i: usize, j: usize) -> i64 {
        self.minors[i][j]
    }

    /// The determinant of the full matrix.
    pub fn det(&self) -> i64 {
        self.det
    }

    /// Checks the cofactor expansion along row `i` against the determinant.
    pub fn expansion_holds(&self, matrix: &IntegerMatrix, i: usize) -> bool {
        let n = matrix.dim();
        if n == 1 {
            return self.det == i64::from(matrix.entry(0, 0));
        }
        let mut total = 0i64;
        for j in 0..n {
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            total += sign * i64::from(matrix.entry(i, j)) * self.minors[i][j];
        }
        total == self.det
    }
}

/// Computes every first minor of the matrix together with its determinant.
pub fn minor_table(matrix: &IntegerMatrix) -> MinorTable {
    let n = matrix.dim();
    if n == 1 {
        return MinorTable {
            minors: vec![vec![1]],
            det: matrix.determinant(),
        };
    }
    let mut minors = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let sub: Vec<Vec<i32>> = matrix
                .entries
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, entries)| {
                    entries
                        .iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let minor = IntegerMatrix::new(sub).expect("minor of a square matrix is square");
            row.push(minor.determinant());
        }
        minors.push(row);
    }
    MinorTable {
        minors,
        det: matrix.determinant(),
    }
}

/// Which displayed convention a canonical r-matrix follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// The generator contraction as computed.
    Raw,
    /// Rescaled by `(det D)²` — with the one-generator sign convention — to
    /// match the classical component tables.
    Appendix,
}

fn require_nonsingular(matrix: &IntegerMatrix) -> Result<i64> {
    let det = matrix.determinant();
    if det == 0 {
        return Err(Error::Domain(
            "matrix is degenerate (determinant zero); its rows satisfy the integer \
             relation exhibited by the degeneracy kernel"
                .into(),
        ));
    }
    Ok(det)
}

/// Leading exponent vectors `−d_i` and the ring that can hold the family.
fn family_ring(matrix: &IntegerMatrix, order: i32) -> Result<(Vec<Vec<i32>>, Truncation)> {
    let n = matrix.dim();
    let mut leads = Vec::with_capacity(n);
    for row in matrix.rows() {
        let lead: Vec<i32> = row.iter().map(|&d| -d).collect();
        let degree: i32 = lead.iter().sum();
        if degree > order {
            return Err(Error::Input(format!(
                "order {order} cannot hold a leading monomial of degree {degree}"
            )));
        }
        leads.push(lead);
    }
    let mut bounds = vec![0i32; n];
    for lead in &leads {
        for (bound, &exponent) in bounds.iter_mut().zip(lead) {
            *bound = (*bound).min(exponent);
        }
    }
    let trunc = Truncation::laurent(n, order, bounds)?;
    Ok((leads, trunc))
}

/// The canonical generator tuple of a nonsingular matrix: Laurent monomials
/// with the matrix rows as negated exponent vectors.
///
/// # Errors
/// [`Error::Domain`] for a singular matrix; [`Error::Input`] when the order
/// cannot hold a leading monomial.
pub fn canonical_generators(
    matrix: &IntegerMatrix,
    order: i32,
) -> Result<GeneratorTuple<Rational>> {
    require_nonsingular(matrix)?;
    let (leads, trunc) = family_ring(matrix, order)?;
    let mut components = Vec::with_capacity(leads.len());
    for lead in leads {
        components.push(Series::from_terms(trunc.clone(), [(lead, int(1))])?);
    }
    GeneratorTuple::new(components)
}

/// The canonical r-matrix of a non-negative nonsingular matrix, in the
/// requested normalization; its components are polynomial.
///
/// # Errors
/// [`Error::Domain`] for singular matrices or negative entries;
/// [`Error::Input`] when the order cannot hold a leading monomial.
pub fn canonical_rmatrix(
    matrix: &IntegerMatrix,
    normalization: Normalization,
    order: i32,
) -> Result<BiField<Rational>> {
    let det = require_nonsingular(matrix)?;
    if !matrix.is_nonnegative() {
        return Err(Error::Domain(
            "negative entries index a Laurent family, not a single polynomial \
             representative; draw members with the seeded family sampler"
                .into(),
        ));
    }
    let raw = bialgebra::rmatrix_from_generators(&canonical_generators(matrix, order)?)?;
    match normalization {
        Normalization::Raw => Ok(raw),
        Normalization::Appendix => {
            let mut factor = int(det * det);
            if matrix.dim() == 1 {
                // The one-generator display convention generates with the
                // opposite sign, flipping the r-matrix.
                factor = -factor;
            }
            Ok(raw.scale(&factor))
        }
    }
}

/// Minors together with the component coefficients of a canonical r-matrix.
///
/// `value(i, j, k)` is the coefficient `A^{ij}_k` in the component shape
/// `φ^{ij} = u^i v^j [Σ_k A^{ij}_k u^{d_k} − Σ_k A^{ji}_k v^{d_k}]`, read
/// from the appendix-normalized r-matrix against the row-monomial basis.
#[derive(Debug, Clone)]
pub struct CanonicalCoefficients {
    minors: MinorTable,
    values: Vec<Vec<Vec<Rational>>>,
    ambiguous_rows: Vec<(usize, usize)>,
}

impl CanonicalCoefficients {
    /// The minor table of the matrix.
    pub fn minors(&self) -> &MinorTable {
        &self.minors
    }

    /// The coefficient `A^{ij}_k`.
    pub fn value(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.values[i][j][k]
    }

    /// Pairs of coinciding matrix rows, which make the basis read ambiguous
    /// (values are then attributed to the earliest row). Empty for
    /// nonsingular matrices, whose rows are distinct.
    pub fn ambiguous_rows(&self) -> &[(usize, usize)] {
        &self.ambiguous_rows
    }

    /// True when some basis monomials coincide.
    pub fn is_ambiguous(&self) -> bool {
        !self.ambiguous_rows.is_empty()
    }
}

/// Extracts the minor table and the `A^{ij}_k` coefficients of the
/// appendix-normalized canonical r-matrix.
///
/// # Errors
/// As [`canonical_rmatrix`]; additionally [`Error::Input`] when the order is
/// too small to hold the basis monomials `u^i u^{d_k}`.
pub fn minor_coefficients(
    matrix: &IntegerMatrix,
    order: i32,
) -> Result<CanonicalCoefficients> {
    let n = matrix.dim();
    for row in matrix.rows() {
        let degree: i32 = row.iter().sum();
        if degree + 2 > order {
            return Err(Error::Input(format!(
                "order {order} cannot hold the coefficient basis of a row of degree {degree}"
            )));
        }
    }
    let phi = canonical_rmatrix(matrix, Normalization::Appendix, order)?;

    let mut ambiguous_rows = Vec::new();
    for k in 0..n {
        for l in (k + 1)..n {
            if matrix.rows()[k] == matrix.rows()[l] {
                ambiguous_rows.push((k, l));
            }
        }
    }

    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let mut plane = Vec::with_capacity(n);
        for j in 0..n {
            let mut line = Vec::with_capacity(n);
            for k in 0..n {
                if ambiguous_rows.iter().any(|&(_, later)| later == k) {
                    // The earliest coinciding row already received the
                    // combined coefficient.
                    line.push(int(0));
                    continue;
                }
                let mut exponents = vec![0i32; 2 * n];
                exponents[i] += 1;
                exponents[n + j] += 1;
                for (var, &d) in matrix.rows()[k].iter().enumerate() {
                    exponents[var] += d;
                }
                line.push(phi.component(i, j).coefficient(&exponents)?);
            }
            plane.push(line);
        }
        values.push(plane);
    }
    Ok(CanonicalCoefficients {
        minors: minor_table(matrix),
        values,
        ambiguous_rows,
    })
}

/// The Poisson bivector induced on the base space by the canonical r-matrix
/// of the matrix.
///
/// # Errors
/// As [`canonical_rmatrix`].
pub fn canonical_alpha(
    matrix: &IntegerMatrix,
    normalization: Normalization,
    order: i32,
) -> Result<BiVectorOnSpace<Rational>> {
    induced_alpha(&canonical_rmatrix(matrix, normalization, order)?)
}

/// The special linear orbit representative `φ^{ij}(u,v) = u^i − v^j`.
///
/// # Errors
/// [`Error::Shape`]/[`Error::Input`] for a zero dimension or an order the
/// ring constructor rejects.
pub fn special_orbit_rmatrix(n: usize, order: i32) -> Result<BiField<Rational>> {
    let trunc = Truncation::power(2 * n, order)?;
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut u = vec![0i32; 2 * n];
            u[i] = 1;
            let mut v = vec![0i32; 2 * n];
            v[n + j] = 1;
            row.push(Series::from_terms(
                trunc.clone(),
                [(u, int(1)), (v, int(-1))],
            )?);
        }
        components.push(row);
    }
    BiField::new(components)
}

/// A nonzero integer relation `Σ k_i · (row d_i) = 0` among the rows of a
/// singular matrix, scaled to coprime entries with positive leading entry;
/// `None` exactly when the determinant is nonzero.
pub fn degeneracy_kernel(matrix: &IntegerMatrix) -> Option<Vec<i64>> {
    if matrix.determinant() != 0 {
        return None;
    }
    // A row relation of D is a kernel vector of Dᵀ.
    let transposed: Vec<Vec<Rational>> = matrix
        .transpose()
        .rows()
        .iter()
        .map(|row| row.iter().map(|&v| int(i64::from(v))).collect())
        .collect();
    let basis = crate::matrix::kernel_basis(&transposed);
    let witness = basis.into_iter().next()?;
    let integers: Option<Vec<i64>> = witness
        .iter()
        .map(|value| {
            if value.denom() == &num_bigint::BigInt::from(1) {
                i64::try_from(value.numer()).ok()
            } else {
                None
            }
        })
        .collect();
    integers
}

/// Draws a bounded nonzero rational in `[-limit, limit] \ {0}` (integer).
fn nonzero_coefficient(rng: &mut rand_chacha::ChaCha20Rng, limit: u32) -> Rational {
    let magnitude = i64::from(rng.next_u32() % limit) + 1;
    let sign = if rng.next_u32() % 2 == 0 { 1 } else { -1 };
    int(sign * magnitude)
}

/// A deterministic seeded member of the Laurent generator family of a
/// nonsingular matrix: each generator keeps the canonical leading monomial
/// (with a nonzero coefficient) and gains a few higher terms respecting the
/// per-variable exponent lower bounds `−d_{ik}`. Returns the tuple together
/// with its r-matrix.
///
/// # Errors
/// [`Error::Domain`] for singular matrices; [`Error::Input`] when the order
/// cannot hold a leading monomial.
pub fn laurent_family_sample(
    matrix: &IntegerMatrix,
    seed: u64,
    order: i32,
) -> Result<(GeneratorTuple<Rational>, BiField<Rational>)> {
    require_nonsingular(matrix)?;
    let (leads, trunc) = family_ring(matrix, order)?;
    let n = matrix.dim();
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);

    let mut components = Vec::with_capacity(n);
    for lead in &leads {
        let mut terms: Vec<(Vec<i32>, Rational)> =
            vec![(lead.clone(), nonzero_coefficient(&mut rng, 3))];
        let tail_count = rng.next_u32() % 3;
        for _ in 0..tail_count {
            let exponents: Vec<i32> = lead
                .iter()
                .map(|&low| low + (rng.next_u32() % 3) as i32)
                .collect();
            if exponents == *lead || exponents.iter().sum::<i32>() > order {
                continue;
            }
            terms.push((exponents, nonzero_coefficient(&mut rng, 2)));
        }
        components.push(Series::from_terms(trunc.clone(), terms)?);
    }
    let generators = GeneratorTuple::new(components)?;
    let rmatrix = bialgebra::rmatrix_from_generators(&generators)?;
    Ok((generators, rmatrix))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::{cybe_residual, w1_canonical};
    use crate::homspace::{compare_alpha, AlphaComparison};
    use crate::rational::ratio;

    fn matrix(rows: &[&[i32]]) -> IntegerMatrix {
        IntegerMatrix::new(rows.iter().map(|row| row.to_vec()).collect()).unwrap()
    }

    /// The four displayed components of the two-generator canonical
    /// r-matrix for rows `(a, b)` and `(c, d)`, appendix normalization.
    fn appendix_two_dim(a: i32, b: i32, c: i32, d: i32, order: i32) -> Vec<Vec<Series<Rational>>> {
        let trunc = Truncation::power(4, order).unwrap();
        let term = |base_u: usize, base_v: usize, row: &[i32; 2], on_v: bool, scale: i64| {
            let mut exponents = vec![0i32; 4];
            exponents[base_u] += 1;
            exponents[2 + base_v] += 1;
            let offset = if on_v { 2 } else { 0 };
            exponents[offset] += row[0];
            exponents[offset + 1] += row[1];
            (exponents, int(scale))
        };
        let row1 = [a, b];
        let row2 = [c, d];
        let de = |entries: Vec<(Vec<i32>, Rational)>| {
            Series::from_terms(trunc.clone(), entries).unwrap()
        };
        let bd = i64::from(b - d);
        let ca = i64::from(c - a);
        let (ai, bi, ci, di) = (i64::from(a), i64::from(b), i64::from(c), i64::from(d));
        let phi11 = de(vec![
            term(0, 0, &row1, false, bd * di),
            term(0, 0, &row1, true, -bd * di),
            term(0, 0, &row2, false, -bd * bi),
            term(0, 0, &row2, true, bd * bi),
        ]);
        let phi12 = de(vec![
            term(0, 1, &row1, true, bd * ci),
            term(0, 1, &row2, true, -bd * ai),
            term(0, 1, &row1, false, ca * di),
            term(0, 1, &row2, false, -ca * bi),
        ]);
        let phi21 = de(vec![
            term(1, 0, &row1, true, -ca * di),
            term(1, 0, &row2, true, ca * bi),
            term(1, 0, &row1, false, -bd * ci),
            term(1, 0, &row2, false, bd * ai),
        ]);
        let phi22 = de(vec![
            term(1, 1, &row1, false, -ca * ci),
            term(1, 1, &row1, true, ca * ci),
            term(1, 1, &row2, false, ca * ai),
            term(1, 1, &row2, true, -ca * ai),
        ]);
        vec![vec![phi11, phi12], vec![phi21, phi22]]
    }

    #[test]
    fn classification_and_determinants() {
        assert_eq!(matrix(&[&[1, 0], &[0, 1]]).determinant(), 1);
        assert_eq!(
            matrix(&[&[1, 0], &[0, 1]]).classification(),
            MatrixClass::NonnegativeNonsingular
        );
        assert_eq!(
            matrix(&[&[1, 1], &[1, 1]]).classification(),
            MatrixClass::Singular
        );
        assert_eq!(
            matrix(&[&[2, 4], &[1, 2]]).classification(),
            MatrixClass::Singular
        );
        assert_eq!(matrix(&[&[-1]]).classification(), MatrixClass::General);
        assert_eq!(
            matrix(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).determinant(),
            -3
        );
    }

    #[test]
    fn minor_tables_satisfy_the_expansion_identity() {
        let d = matrix(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        let table = minor_table(&d);
        assert_eq!(table.minor(0, 0), 5 * 10 - 6 * 8);
        assert_eq!(table.minor(1, 2), 8 - 14);
        for i in 0..3 {
            assert!(table.expansion_holds(&d, i));
        }
        let identity = matrix(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let table = minor_table(&identity);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(table.minor(i, j), i64::from(u8::from(i == j)));
            }
        }
    }

    #[test]
    fn canonical_generators_are_row_monomials() {
        let tuple = canonical_generators(&matrix(&[&[1, 0], &[0, 1]]), 4).unwrap();
        assert_eq!(
            *tuple.components()[0].terms().next().unwrap().0,
            [-1, 0]
        );
        assert_eq!(
            *tuple.components()[1].terms().next().unwrap().0,
            [0, -1]
        );

        let tuple = canonical_generators(&matrix(&[&[3]]), 4).unwrap();
        assert_eq!(*tuple.components()[0].terms().next().unwrap().0, [-3]);

        let diag = matrix(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let tuple = canonical_generators(&diag, 4).unwrap();
        assert_eq!(*tuple.components()[2].terms().next().unwrap().0, [0, 0, -3]);

        assert!(matches!(
            canonical_generators(&matrix(&[&[1, 1], &[1, 1]]), 4),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            canonical_generators(&matrix(&[&[-3]]), 2),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn one_generator_normalizations() {
        // Raw is the negated cubic solution; appendix is its classical
        // integer form.
        for d in 1..=3i32 {
            let m = matrix(&[&[d]]);
            let raw = canonical_rmatrix(&m, Normalization::Raw, 6).unwrap();
            let canonical = w1_canonical(d, 6).unwrap();
            assert_eq!(*raw.component(0, 0), canonical.component(0, 0).neg());

            let appendix = canonical_rmatrix(&m, Normalization::Appendix, 6).unwrap();
            assert_eq!(
                *appendix.component(0, 0),
                canonical.component(0, 0).scale(&int(i64::from(d * d)))
            );
        }
    }

    #[test]
    fn two_dim_appendix_tables_match() {
        for (a, b, c, d) in [(1, 0, 0, 1), (2, 1, 1, 1), (1, 2, 0, 1)] {
            let m = matrix(&[&[a, b], &[c, d]]);
            let phi = canonical_rmatrix(&m, Normalization::Appendix, 8).unwrap();
            let expected = appendix_two_dim(a, b, c, d, 8);
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(
                        *phi.component(i, j),
                        expected[i][j],
                        "component ({i},{j}) of rows ({a},{b}),({c},{d})"
                    );
                }
            }
            assert!(cybe_residual(&phi).unwrap().is_certified_zero());
        }
    }

    #[test]
    fn appendix_is_a_determinant_square_rescale() {
        let m = matrix(&[&[2, 0], &[0, 3]]);
        let raw = canonical_rmatrix(&m, Normalization::Raw, 8).unwrap();
        let appendix = canonical_rmatrix(&m, Normalization::Appendix, 8).unwrap();
        let det = m.determinant();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(
                    *appendix.component(i, j),
                    raw.component(i, j).scale(&int(det * det))
                );
            }
        }
    }

    #[test]
    fn canonical_support_stays_in_the_row_span() {
        // Every φ^{ij} monomial is u^i v^j times a row monomial on one side.
        let m = matrix(&[&[2, 1], &[1, 1]]);
        let phi = canonical_rmatrix(&m, Normalization::Raw, 8).unwrap();
        let n = 2usize;
        for i in 0..n {
            for j in 0..n {
                'term: for (exponents, _) in phi.component(i, j).terms() {
                    for k in 0..n {
                        for side in 0..2 {
                            let mut expected = vec![0i32; 2 * n];
                            expected[i] += 1;
                            expected[n + j] += 1;
                            for (var, &d) in m.rows()[k].iter().enumerate() {
                                expected[side * n + var] += d;
                            }
                            if exponents == expected {
                                continue 'term;
                            }
                        }
                    }
                    panic!("stray monomial {exponents:?} in component ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn rejected_matrices_report_their_route() {
        assert!(matches!(
            canonical_rmatrix(&matrix(&[&[1, 1], &[1, 1]]), Normalization::Raw, 6),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            canonical_rmatrix(&matrix(&[&[1, -1], &[0, 1]]), Normalization::Raw, 6),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn coefficient_extraction_reproduces_the_patterns() {
        // A^{ij}_k from the displayed tables: A^{11}_1 = (b−d)d,
        // A^{11}_2 = −(b−d)b, A^{12}_1 = (c−a)d, A^{12}_2 = −(c−a)b,
        // A^{21}_1 = −(b−d)c, A^{21}_2 = (b−d)a, A^{22}_1 = (a−c)c,
        // A^{22}_2 = −(a−c)a.
        for (a, b, c, d) in [(1, 2, 0, 1), (2, 1, 1, 1), (1, 0, 0, 2)] {
            let m = matrix(&[&[a, b], &[c, d]]);
            let coefficients = minor_coefficients(&m, 8).unwrap();
            assert!(!coefficients.is_ambiguous());
            let (bd, ca) = (i64::from(b - d), i64::from(c - a));
            let (ai, bi, ci, di) = (i64::from(a), i64::from(b), i64::from(c), i64::from(d));
            let expected = [
                ((0, 0, 0), bd * di),
                ((0, 0, 1), -bd * bi),
                ((0, 1, 0), ca * di),
                ((0, 1, 1), -ca * bi),
                ((1, 0, 0), -bd * ci),
                ((1, 0, 1), bd * ai),
                ((1, 1, 0), -ca * ci),
                ((1, 1, 1), ca * ai),
            ];
            for ((i, j, k), value) in expected {
                assert_eq!(
                    *coefficients.value(i, j, k),
                    int(value),
                    "A^{{{i}{j}}}_{k} of rows ({a},{b}),({c},{d})"
                );
            }
            assert_eq!(coefficients.minors().minor(0, 0), i64::from(d));
            assert_eq!(coefficients.minors().minor(0, 1), i64::from(c));
        }
        assert!(matches!(
            minor_coefficients(&matrix(&[&[3, 3], &[0, 1]]), 6),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn diagonal_alpha_goldens() {
        // Two generators, rows diag(2, 3): α^{12} = (1/6)u¹u²[(u¹)² − (u²)³].
        let m = matrix(&[&[2, 0], &[0, 3]]);
        let alpha = canonical_alpha(&m, Normalization::Raw, 7).unwrap();
        let base = Truncation::power(2, 7).unwrap();
        let expected = Series::from_terms(
            base,
            [
                (vec![3, 1], ratio(1, 6).unwrap()),
                (vec![1, 4], ratio(-1, 6).unwrap()),
            ],
        )
        .unwrap();
        assert_eq!(*alpha.component(0, 1), expected);

        // One generator: the induced bivector on the line is trivial.
        let alpha = canonical_alpha(&matrix(&[&[2]]), Normalization::Raw, 6).unwrap();
        assert!(alpha.is_zero());
    }

    #[test]
    fn three_dim_diagonal_alpha_matches_display_up_to_a_constant() {
        let (a, b, c) = (1i64, 2i64, 1i64);
        let m = matrix(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1]]);
        let alpha = canonical_alpha(&m, Normalization::Raw, 6).unwrap();

        // Displayed table: {u^i, u^j} = (third exponent) u^i u^j
        // [(u^j)^{d_j} − (u^i)^{d_i}].
        let base = Truncation::power(3, 6).unwrap();
        let pair = |i: usize, j: usize, di: i64, dj: i64, constant: i64| {
            let mut up = vec![0i32; 3];
            up[i] += 1;
            up[j] += 1;
            let mut high_j = up.clone();
            high_j[j] += dj as i32;
            let mut high_i = up;
            high_i[i] += di as i32;
            Series::from_terms(
                base.clone(),
                [(high_j, int(constant)), (high_i, int(-constant))],
            )
            .unwrap()
        };
        let zero = Series::<Rational>::zero(base.clone());
        let d01 = pair(0, 1, a, b, c);
        let d02 = pair(0, 2, a, c, b);
        let d12 = pair(1, 2, b, c, a);
        let display = vec![
            vec![zero.clone(), d01.clone(), d02.clone()],
            vec![d01.neg(), zero.clone(), d12.clone()],
            vec![d02.neg(), d12.neg(), zero],
        ];
        assert_eq!(
            compare_alpha(&alpha, &display),
            AlphaComparison::ConstantFactor(int(-a * b * c))
        );
    }

    #[test]
    fn special_orbit_solves_and_restricts() {
        for n in 1..=3usize {
            let phi = special_orbit_rmatrix(n, 5).unwrap();
            assert!(phi.is_skew().unwrap());
            assert!(cybe_residual(&phi).unwrap().is_certified_zero());
        }
        let phi = special_orbit_rmatrix(2, 5).unwrap();
        let trunc = Truncation::power(4, 5).unwrap();
        assert_eq!(
            *phi.component(0, 1),
            Series::from_terms(
                trunc,
                [(vec![1, 0, 0, 0], int(1)), (vec![0, 0, 0, 1], int(-1))],
            )
            .unwrap()
        );
        let alpha = induced_alpha(&phi).unwrap();
        let base = Truncation::power(2, 5).unwrap();
        assert_eq!(
            *alpha.component(0, 1),
            Series::from_terms(base, [(vec![0, 1], int(1)), (vec![1, 0], int(-1))]).unwrap()
        );
    }

    #[test]
    fn degeneracy_kernels() {
        assert_eq!(
            degeneracy_kernel(&matrix(&[&[1, 1], &[1, 1]])),
            Some(vec![1, -1])
        );
        assert_eq!(
            degeneracy_kernel(&matrix(&[&[2, 4], &[1, 2]])),
            Some(vec![1, -2])
        );
        assert_eq!(degeneracy_kernel(&matrix(&[&[1, 0], &[0, 1]])), None);

        // The witness really is a row relation.
        let d = matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let witness = degeneracy_kernel(&d).unwrap();
        for col in 0..3 {
            let total: i64 = (0..3)
                .map(|row| witness[row] * i64::from(d.entry(row, col)))
                .sum();
            assert_eq!(total, 0);
        }
    }

    #[test]
    fn laurent_samples_solve_and_are_deterministic() {
        let m = matrix(&[&[1, 0], &[0, 1]]);
        let (generators, phi) = laurent_family_sample(&m, 7, 6).unwrap();
        let (again_generators, again_phi) = laurent_family_sample(&m, 7, 6).unwrap();
        assert_eq!(generators.components(), again_generators.components());
        assert_eq!(phi, again_phi);
        let (other, _) = laurent_family_sample(&m, 8, 6).unwrap();
        assert!(
            generators.components() != other.components(),
            "distinct seeds should perturb the tails"
        );
        assert!(cybe_residual(&phi).unwrap().is_certified_zero());

        // Leading monomials agree with the canonical generators.
        for (i, component) in generators.components().iter().enumerate() {
            let (lead, _) = component.leading_monomial().unwrap();
            let expected: Vec<i32> = m.rows()[i].iter().map(|&d| -d).collect();
            assert_eq!(lead, expected);
        }

        // A negative one-generator matrix samples power series whose
        // r-matrix is still a solution.
        let (generators, phi) = laurent_family_sample(&matrix(&[&[-1]]), 3, 6).unwrap();
        assert_eq!(generators.components()[0].valuation(), Some(1));
        assert!(cybe_residual(&phi).unwrap().is_certified_zero());

        assert!(matches!(
            laurent_family_sample(&matrix(&[&[-3]]), 1, 2),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            laurent_family_sample(&matrix(&[&[1, 1], &[1, 1]]), 1, 6),
            Err(Error::Domain(_))
        ));
    }
}
