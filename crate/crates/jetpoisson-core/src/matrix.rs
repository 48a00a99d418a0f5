//! Small exact matrices: series-valued determinants and adjugate inverses,
//! and rational kernels.
//!
//! Jacobian matrices of generator tuples have series entries; their inverses
//! exist whenever the determinant is a unit of the truncated ring (for
//! Laurent-monomial generators the determinant is a single monomial, so this
//! is cheap and exact). Cofactor expansion is plenty for the small sizes that
//! occur.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::{Series, Truncation};

/// Borrowed square matrix of series, row-major.
pub type SeriesRows<C> = Vec<Vec<Series<C>>>;

fn check_square<C: Coeff>(rows: &[Vec<Series<C>>]) -> Result<usize> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Input("empty matrix".into()));
    }
    for row in rows {
        if row.len() != n {
            return Err(Error::Shape(format!(
                "row of length {} in a {n}×{n} matrix",
                row.len()
            )));
        }
    }
    Ok(n)
}

fn minor<C: Coeff>(rows: &[Vec<Series<C>>], skip_row: usize, skip_col: usize) -> SeriesRows<C> {
    rows.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_col)
                .map(|(_, entry)| entry.clone())
                .collect()
        })
        .collect()
}

/// Deepest pole over the entries: `max(0, −min valuation)`. Zero for power
/// series data.
fn max_pole_depth<C: Coeff>(rows: &[Vec<Series<C>>]) -> i32 {
    rows.iter()
        .flatten()
        .filter_map(Series::valuation)
        .min()
        .map_or(0, |v| (-v).max(0))
}

/// Cofactor recursion with no ring adjustment; exact when no needed partial
/// product overflows the entries' degree cutoff.
fn determinant_plain<C: Coeff>(rows: &[Vec<Series<C>>], n: usize) -> Result<Series<C>> {
    if n == 1 {
        return Ok(rows[0][0].clone());
    }
    let mut det = Series::zero(rows[0][0].truncation().clone());
    for col in 0..n {
        if rows[0][col].is_zero() {
            continue;
        }
        let submatrix = minor(rows, 0, col);
        let cofactor = determinant_plain(&submatrix, n - 1)?;
        let signed = if col % 2 == 0 {
            cofactor
        } else {
            cofactor.neg()
        };
        det = det.add(&rows[0][col].mul(&signed)?)?;
    }
    Ok(det)
}

/// Re-truncation of every entry to a new degree cutoff.
fn lifted<C: Coeff>(rows: &[Vec<Series<C>>], degree: i32) -> SeriesRows<C> {
    rows.iter()
        .map(|row| row.iter().map(|entry| entry.with_max_degree(degree)).collect())
        .collect()
}

/// Determinant by cofactor expansion along the first row, exact through the
/// entries' degree cutoff.
///
/// Entries with poles get a widened working ring first: a kept product term
/// can pair an intermediate above the cutoff with a remaining factor of
/// negative degree, so the intermediates need that much headroom.
///
/// # Errors
/// [`Error::Input`]/[`Error::Shape`] for empty or non-square input,
/// [`Error::Shape`] if entries live in incompatible rings.
pub fn determinant<C: Coeff>(rows: &[Vec<Series<C>>]) -> Result<Series<C>> {
    let n = check_square(rows)?;
    let depth = max_pole_depth(rows);
    if depth == 0 || n == 1 {
        return determinant_plain(rows, n);
    }
    let degree = rows[0][0].truncation().max_total_degree();
    let wide = degree.saturating_add((n as i32 - 1).saturating_mul(depth));
    Ok(determinant_plain(&lifted(rows, wide), n)?.with_max_degree(degree))
}

/// Inverse of a square series matrix via the adjugate, together with the
/// determinant: `inverse[i][j] = (−1)^{i+j} minor(j, i) / det`.
///
/// When entries have poles, or the determinant is a unit only past a
/// monomial factor, the whole computation runs in a ring deep enough to hold
/// the determinant and all cofactors completely, so that dividing by the
/// determinant is exact through the original cutoff.
///
/// # Errors
/// Shape errors as in [`determinant`]; [`Error::Unit`] when the determinant
/// is not a unit of the truncated ring.
pub fn inverse<C: Coeff>(rows: &[Vec<Series<C>>]) -> Result<(SeriesRows<C>, Series<C>)> {
    let n = check_square(rows)?;
    let depth = max_pole_depth(rows);
    let det = determinant(rows)?;
    if depth == 0 && det.valuation() == Some(0) {
        // Unit-constant-term data: every factor in the adjugate division has
        // non-negative valuation, so the plain ring is already exact.
        let det_inverse = det.invert_unit()?;
        if n == 1 {
            return Ok((vec![vec![det_inverse]], det));
        }
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let cofactor = determinant(&minor(rows, j, i))?;
                let signed = if (i + j) % 2 == 0 {
                    cofactor
                } else {
                    cofactor.neg()
                };
                row.push(signed.mul(&det_inverse)?);
            }
            out.push(row);
        }
        return Ok((out, det));
    }

    let degree = rows[0][0].truncation().max_total_degree();
    let wide = (n as i32).saturating_mul(degree.saturating_add(depth));
    let work = lifted(rows, wide);
    let det_wide = determinant_plain(&work, n)?;
    let det_inverse = det_wide.invert_unit()?;
    if n == 1 {
        return Ok((vec![vec![det_inverse.with_max_degree(degree)]], det));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let cofactor = determinant_plain(&minor(&work, j, i), n - 1)?;
            let signed = if (i + j) % 2 == 0 {
                cofactor
            } else {
                cofactor.neg()
            };
            row.push(signed.mul(&det_inverse)?.with_max_degree(degree));
        }
        out.push(row);
    }
    Ok((out, det))
}

/// Identity matrix of series over a ring.
pub fn identity<C: Coeff>(n: usize, trunc: &Truncation) -> SeriesRows<C> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Series::one(trunc.clone())
                    } else {
                        Series::zero(trunc.clone())
                    }
                })
                .collect()
        })
        .collect()
}

/// Matrix product of square series matrices.
pub fn matmul<C: Coeff>(a: &[Vec<Series<C>>], b: &[Vec<Series<C>>]) -> Result<SeriesRows<C>> {
    let n = check_square(a)?;
    if check_square(b)? != n {
        return Err(Error::Shape("matrix size mismatch in product".into()));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut entry = Series::zero(a[i][0].truncation().clone());
            for (k, b_row) in b.iter().enumerate() {
                entry = entry.add(&a[i][k].mul(&b_row[j])?)?;
            }
            row.push(entry);
        }
        out.push(row);
    }
    Ok(out)
}

/// Reduced row echelon form of a rational matrix, in place; returns the pivot
/// columns.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row >= nrows {
            break;
        }
        let Some(found) = (pivot_row..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let lead = rows[pivot_row][col].clone();
        for entry in &mut rows[pivot_row] {
            *entry /= lead.clone();
        }
        for r in 0..nrows {
            if r == pivot_row || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in 0..ncols {
                let delta = factor.clone() * rows[pivot_row][c].clone();
                rows[r][c] -= delta;
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    pivots
}

/// Basis of the rational kernel of a matrix (solutions of `M x = 0`), one
/// vector per free column, scaled to coprime integer entries with the first
/// nonzero entry positive.
pub fn kernel_basis(matrix: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let ncols = matrix.first().map_or(0, Vec::len);
    let mut work: Vec<Vec<Rational>> = matrix.to_vec();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &free_col in &free {
        let mut vector = vec![Rational::zero(); ncols];
        vector[free_col] = Rational::from_integer(1.into());
        for (row, &pivot_col) in pivots.iter().enumerate() {
            vector[pivot_col] = -work[row][free_col].clone();
        }
        basis.push(normalize_primitive(vector));
    }
    basis
}

/// Scales a rational vector to coprime integer entries whose first nonzero
/// entry is positive.
pub fn normalize_primitive(mut vector: Vec<Rational>) -> Vec<Rational> {
    use num_integer::Integer;
    let mut denominator_lcm = num_bigint::BigInt::from(1);
    for entry in &vector {
        if !entry.is_zero() {
            denominator_lcm = denominator_lcm.lcm(entry.denom());
        }
    }
    let scale = Rational::from_integer(denominator_lcm);
    for entry in &mut vector {
        *entry *= scale.clone();
    }
    let mut numerator_gcd = num_bigint::BigInt::from(0);
    for entry in &vector {
        numerator_gcd = numerator_gcd.gcd(entry.numer());
    }
    if numerator_gcd != num_bigint::BigInt::from(0) {
        let shrink = Rational::from_integer(numerator_gcd);
        for entry in &mut vector {
            *entry /= shrink.clone();
        }
    }
    if let Some(first) = vector.iter().find(|entry| !entry.is_zero()) {
        if first.is_negative() {
            for entry in &mut vector {
                *entry = -entry.clone();
            }
        }
    }
    vector
}
