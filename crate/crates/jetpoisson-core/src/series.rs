//! Truncated multivariate power and Laurent series.
//!
//! A [`Series`] is a finite sum of terms `c · u_1^{e_1} ⋯ u_k^{e_k}` kept in a
//! ring that is truncated in *total degree*: every operation discards terms
//! with `Σ e_i` above the fixed bound `N` of the [`Truncation`]. Exponents may
//! be negative down to per-variable lower bounds, which is what makes the
//! canonical Laurent-monomial generator tuples and their inverse Jacobians
//! representable.
//!
//! Coefficients are any [`Coeff`] ring — exact rationals for numeric work,
//! jet-coordinate polynomials for symbolic jets. No approximation happens
//! anywhere: the only information ever lost is the deliberate degree cut, and
//! the cut is the same on every path, so algebraic identities that hold for
//! the untruncated objects hold verbatim for the truncated ones up to the
//! certified degree tracked by the callers.
//!
//! Storage is a sorted map from exponent vectors to nonzero coefficients, so
//! equal series have identical representations and iteration order is
//! deterministic.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::coeff::{rational_pow, Coeff};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Shape of a truncated series ring: variable count, total-degree cutoff and
/// per-variable exponent lower bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    nvars: usize,
    max_total_degree: i32,
    min_exponent: Vec<i32>,
}

impl Truncation {
    /// Power-series ring: all exponents ≥ 0, total degree ≤ `max_total_degree`.
    pub fn power(nvars: usize, max_total_degree: i32) -> Result<Self> {
        Self::laurent(nvars, max_total_degree, vec![0; nvars])
    }

    /// Laurent ring with per-variable lower bounds (each ≤ 0).
    pub fn laurent(nvars: usize, max_total_degree: i32, min_exponent: Vec<i32>) -> Result<Self> {
        if max_total_degree < 0 {
            return Err(Error::Input(format!(
                "total-degree cutoff must be non-negative, got {max_total_degree}"
            )));
        }
        if min_exponent.len() != nvars {
            return Err(Error::Shape(format!(
                "{} lower bounds for {} variables",
                min_exponent.len(),
                nvars
            )));
        }
        if let Some(bad) = min_exponent.iter().find(|&&bound| bound > 0) {
            return Err(Error::Input(format!(
                "exponent lower bound must be ≤ 0, got {bad}"
            )));
        }
        Ok(Truncation {
            nvars,
            max_total_degree,
            min_exponent,
        })
    }

    /// Number of variables.
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Total-degree cutoff `N`.
    pub fn max_total_degree(&self) -> i32 {
        self.max_total_degree
    }

    /// Per-variable exponent lower bounds.
    pub fn min_exponent(&self) -> &[i32] {
        &self.min_exponent
    }

    /// True when the two rings agree on variable count and degree cutoff
    /// (lower bounds may differ; they widen as needed).
    pub fn compatible(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.max_total_degree == other.max_total_degree
    }

    fn widen(&self, other: &Self) -> Truncation {
        Truncation {
            nvars: self.nvars,
            max_total_degree: self.max_total_degree,
            min_exponent: self
                .min_exponent
                .iter()
                .zip(&other.min_exponent)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        }
    }

    fn product(&self, other: &Self) -> Truncation {
        Truncation {
            nvars: self.nvars,
            max_total_degree: self.max_total_degree,
            min_exponent: self
                .min_exponent
                .iter()
                .zip(&other.min_exponent)
                .map(|(&a, &b)| a.saturating_add(b))
                .collect(),
        }
    }
}

/// A truncated multivariate (Laurent) series with exact coefficients.
///
/// Two series compare equal when they live over the same variable count and
/// degree cutoff and store the same terms; the lower bounds are bookkeeping
/// of permissible support, not part of the value.
#[derive(Debug, Clone)]
pub struct Series<C: Coeff> {
    trunc: Truncation,
    terms: BTreeMap<Vec<i32>, C>,
}

impl<C: Coeff> PartialEq for Series<C> {
    fn eq(&self, other: &Self) -> bool {
        self.trunc.nvars == other.trunc.nvars
            && self.trunc.max_total_degree == other.trunc.max_total_degree
            && self.terms == other.terms
    }
}

impl<C: Coeff> Eq for Series<C> {}

fn total_degree_of(exponents: &[i32]) -> i32 {
    exponents.iter().sum()
}

impl<C: Coeff> Series<C> {
    /// The zero series in the given ring.
    pub fn zero(trunc: Truncation) -> Self {
        Series {
            trunc,
            terms: BTreeMap::new(),
        }
    }

    /// The constant series `value`.
    pub fn constant(trunc: Truncation, value: C) -> Self {
        let mut series = Series::zero(trunc);
        series.add_term(vec![0; series.trunc.nvars], value);
        series
    }

    /// The multiplicative identity.
    pub fn one(trunc: Truncation) -> Self {
        Series::constant(trunc, C::one())
    }

    /// The coordinate series `u_var`.
    ///
    /// # Errors
    /// [`Error::Input`] if `var` is out of range.
    pub fn var(trunc: Truncation, var: usize) -> Result<Self> {
        if var >= trunc.nvars {
            return Err(Error::Input(format!(
                "variable {var} of {}",
                trunc.nvars
            )));
        }
        let mut exponents = vec![0; trunc.nvars];
        exponents[var] = 1;
        Series::monomial(trunc, exponents, C::one())
    }

    /// The single-term series `coefficient · u^exponents`.
    ///
    /// # Errors
    /// [`Error::Shape`] on a wrong exponent-vector length, [`Error::Domain`]
    /// if an exponent lies below the ring's lower bound. A term above the
    /// degree cutoff is silently truncated to zero, which is its value in the
    /// ring.
    pub fn monomial(trunc: Truncation, exponents: Vec<i32>, coefficient: C) -> Result<Self> {
        if exponents.len() != trunc.nvars {
            return Err(Error::Shape(format!(
                "exponent vector of length {} in a {}-variable ring",
                exponents.len(),
                trunc.nvars
            )));
        }
        for (var, (&exponent, &bound)) in exponents.iter().zip(&trunc.min_exponent).enumerate() {
            if exponent < bound {
                return Err(Error::Domain(format!(
                    "exponent {exponent} of variable {var} below lower bound {bound}"
                )));
            }
        }
        let mut series = Series::zero(trunc);
        series.add_term(exponents, coefficient);
        Ok(series)
    }

    /// Builds a series from `(exponents, coefficient)` pairs, accumulating
    /// repeats. Terms above the degree cutoff truncate away; terms below a
    /// lower bound are an error as in [`Series::monomial`].
    pub fn from_terms(
        trunc: Truncation,
        terms: impl IntoIterator<Item = (Vec<i32>, C)>,
    ) -> Result<Self> {
        let mut series = Series::zero(trunc);
        for (exponents, coefficient) in terms {
            if exponents.len() != series.trunc.nvars {
                return Err(Error::Shape(format!(
                    "exponent vector of length {} in a {}-variable ring",
                    exponents.len(),
                    series.trunc.nvars
                )));
            }
            for (var, (&exponent, &bound)) in
                exponents.iter().zip(&series.trunc.min_exponent).enumerate()
            {
                if exponent < bound {
                    return Err(Error::Domain(format!(
                        "exponent {exponent} of variable {var} below lower bound {bound}"
                    )));
                }
            }
            series.add_term(exponents, coefficient);
        }
        Ok(series)
    }

    /// The ring this series lives in.
    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    /// Number of variables.
    pub fn nvars(&self) -> usize {
        self.trunc.nvars
    }

    /// Total-degree cutoff of the ring.
    pub fn max_total_degree(&self) -> i32 {
        self.trunc.max_total_degree
    }

    /// True for the zero series.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterates over `(exponents, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &C)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Coefficient of `u^exponents` (zero if absent).
    ///
    /// # Errors
    /// [`Error::Shape`] on a wrong exponent-vector length.
    pub fn coefficient(&self, exponents: &[i32]) -> Result<C> {
        if exponents.len() != self.trunc.nvars {
            return Err(Error::Shape(format!(
                "exponent vector of length {} in a {}-variable ring",
                exponents.len(),
                self.trunc.nvars
            )));
        }
        Ok(self.terms.get(exponents).cloned().unwrap_or_else(C::zero))
    }

    /// Largest total degree among stored terms (`None` for zero).
    pub fn total_degree(&self) -> Option<i32> {
        self.terms.keys().map(|e| total_degree_of(e)).max()
    }

    /// Smallest total degree among stored terms (`None` for zero); this is
    /// the valuation of the truncated representative.
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().map(|e| total_degree_of(e)).min()
    }

    fn add_term(&mut self, exponents: Vec<i32>, coefficient: C) {
        if coefficient.is_zero() || total_degree_of(&exponents) > self.trunc.max_total_degree {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(exponents) {
            Entry::Vacant(slot) => {
                slot.insert(coefficient);
            }
            Entry::Occupied(mut slot) => {
                slot.get_mut().add_assign(&coefficient);
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self, op: &str) -> Result<()> {
        if !self.trunc.compatible(&other.trunc) {
            return Err(Error::Shape(format!(
                "{op} of series over {} variables at degree {} with series over {} variables at degree {}",
                self.trunc.nvars,
                self.trunc.max_total_degree,
                other.trunc.nvars,
                other.trunc.max_total_degree
            )));
        }
        Ok(())
    }

    /// Exact linear combination `Σ scalars_i · series_i`.
    ///
    /// # Errors
    /// [`Error::Input`] on an empty combination, [`Error::Shape`] if the
    /// operands disagree on variable count or degree cutoff.
    pub fn linear_combine(pairs: &[(C, &Series<C>)]) -> Result<Self> {
        let (_, first) = pairs
            .first()
            .ok_or_else(|| Error::Input("empty linear combination".into()))?;
        let mut trunc = first.trunc.clone();
        for (_, series) in pairs.iter().skip(1) {
            first.check_compatible(series, "linear combination")?;
            trunc = trunc.widen(&series.trunc);
        }
        let mut sum = Series::zero(trunc);
        for (scalar, series) in pairs {
            if scalar.is_zero() {
                continue;
            }
            for (exponents, coefficient) in &series.terms {
                sum.add_term(exponents.clone(), scalar.mul(coefficient));
            }
        }
        Ok(sum)
    }

    /// Sum of two series.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other, "sum")?;
        let mut sum = Series::zero(self.trunc.widen(&other.trunc));
        for (exponents, coefficient) in &self.terms {
            sum.add_term(exponents.clone(), coefficient.clone());
        }
        for (exponents, coefficient) in &other.terms {
            sum.add_term(exponents.clone(), coefficient.clone());
        }
        Ok(sum)
    }

    /// Difference of two series.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other, "difference")?;
        let mut diff = Series::zero(self.trunc.widen(&other.trunc));
        for (exponents, coefficient) in &self.terms {
            diff.add_term(exponents.clone(), coefficient.clone());
        }
        for (exponents, coefficient) in &other.terms {
            diff.add_term(exponents.clone(), coefficient.neg());
        }
        Ok(diff)
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        let mut negated = self.clone();
        for coefficient in negated.terms.values_mut() {
            *coefficient = coefficient.neg();
        }
        negated
    }

    /// Product with a coefficient.
    pub fn scale(&self, factor: &C) -> Self {
        if factor.is_zero() {
            return Series::zero(self.trunc.clone());
        }
        let mut scaled = Series::zero(self.trunc.clone());
        for (exponents, coefficient) in &self.terms {
            scaled.add_term(exponents.clone(), factor.mul(coefficient));
        }
        scaled
    }

    /// Product with a rational scalar.
    pub fn scale_rational(&self, factor: &Rational) -> Self {
        self.scale(&C::from_rational(factor))
    }

    /// Product of two series, truncated at the shared degree cutoff. The
    /// result's lower bounds are the sums of the operands' bounds.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other, "product")?;
        let mut product = Series::zero(self.trunc.product(&other.trunc));
        let cutoff = product.trunc.max_total_degree;
        for (left_exps, left_coeff) in &self.terms {
            let left_degree = total_degree_of(left_exps);
            for (right_exps, right_coeff) in &other.terms {
                if left_degree + total_degree_of(right_exps) > cutoff {
                    continue;
                }
                let exponents: Vec<i32> = left_exps
                    .iter()
                    .zip(right_exps)
                    .map(|(&a, &b)| a + b)
                    .collect();
                product.add_term(exponents, left_coeff.mul(right_coeff));
            }
        }
        Ok(product)
    }

    /// Partial derivative with respect to variable `var`.
    ///
    /// The result is stored at the same degree cutoff; it is exact up to one
    /// degree less than the input's exactness, which callers account for.
    ///
    /// # Errors
    /// [`Error::Input`] if `var` is out of range.
    pub fn partial_derivative(&self, var: usize) -> Result<Self> {
        if var >= self.trunc.nvars {
            return Err(Error::Input(format!(
                "variable {var} of {}",
                self.trunc.nvars
            )));
        }
        let mut bounds = self.trunc.min_exponent.clone();
        if bounds[var] < 0 {
            // Differentiating a pole deepens it by one.
            bounds[var] = bounds[var].saturating_sub(1);
        }
        let trunc = Truncation {
            nvars: self.trunc.nvars,
            max_total_degree: self.trunc.max_total_degree,
            min_exponent: bounds,
        };
        let mut derivative = Series::zero(trunc);
        for (exponents, coefficient) in &self.terms {
            let power = exponents[var];
            if power == 0 {
                continue;
            }
            let mut shifted = exponents.clone();
            shifted[var] -= 1;
            derivative.add_term(
                shifted,
                coefficient.scale(&Rational::from_integer(power.into())),
            );
        }
        Ok(derivative)
    }

    /// Decomposes a unit as `leading monomial × (coefficient + higher)`:
    /// returns the exponent vector and coefficient of the unique term of
    /// minimal total degree.
    ///
    /// # Errors
    /// [`Error::Unit`] if the series is zero or the minimal total degree is
    /// shared by several terms.
    pub fn leading_monomial(&self) -> Result<(Vec<i32>, C)> {
        let min_degree = self
            .valuation()
            .ok_or_else(|| Error::Unit("zero series".into()))?;
        let mut leading = None;
        for (exponents, coefficient) in &self.terms {
            if total_degree_of(exponents) == min_degree {
                if leading.is_some() {
                    return Err(Error::Unit(format!(
                        "several terms of minimal total degree {min_degree}"
                    )));
                }
                leading = Some((exponents.clone(), coefficient.clone()));
            }
        }
        Ok(leading.expect("valuation came from a stored term"))
    }

    /// Multiplicative inverse of a unit: a series with a unique leading
    /// monomial whose coefficient is invertible. Computed by inverting the
    /// leading monomial and expanding a geometric series in the higher part.
    /// `self.mul(&inverse)` equals 1 exactly in the truncated ring.
    ///
    /// # Errors
    /// [`Error::Unit`] if there is no unique leading monomial or its
    /// coefficient is not invertible in the coefficient ring.
    pub fn invert_unit(&self) -> Result<Self> {
        let (lead_exps, lead_coeff) = self.leading_monomial()?;
        let lead_inverse = lead_coeff.try_inverse().ok_or_else(|| {
            Error::Unit(format!(
                "leading coefficient is not invertible in {}",
                C::ring_name()
            ))
        })?;
        let lead_degree = total_degree_of(&lead_exps);
        let nvars = self.trunc.nvars;
        let work_degree = (self.trunc.max_total_degree + lead_degree).max(0);

        // h := f / leading − 1·lead_coeff, in a widened work ring.
        let work_trunc = Truncation {
            nvars,
            max_total_degree: work_degree,
            min_exponent: vec![i32::MIN / 4; nvars],
        };
        let mut higher = Series::zero(work_trunc.clone());
        for (exponents, coefficient) in &self.terms {
            if exponents == &lead_exps {
                continue;
            }
            let shifted: Vec<i32> = exponents.iter().zip(&lead_exps).map(|(&e, &m)| e - m).collect();
            higher.add_term(shifted, coefficient.clone());
        }

        // (c + h)^{-1} = c^{-1} Σ_k (−c^{-1} h)^k; h has valuation ≥ 1, so the
        // sum stabilizes after work_degree steps.
        let mut sum = Series::constant(work_trunc.clone(), lead_inverse.clone());
        let mut power = Series::constant(work_trunc, C::one());
        let step = higher.scale(&lead_inverse.neg());
        for _ in 0..work_degree {
            power = power.mul(&step)?;
            if power.is_zero() {
                break;
            }
            for (exponents, coefficient) in &power.terms {
                sum.add_term(exponents.clone(), lead_inverse.mul(coefficient));
            }
        }

        // Shift back by the inverted leading monomial and re-truncate.
        let mut bounds = vec![0i32; nvars];
        let mut inverse = Series {
            trunc: Truncation {
                nvars,
                max_total_degree: self.trunc.max_total_degree,
                min_exponent: vec![i32::MIN / 4; nvars],
            },
            terms: BTreeMap::new(),
        };
        for (exponents, coefficient) in &sum.terms {
            let shifted: Vec<i32> = exponents.iter().zip(&lead_exps).map(|(&e, &m)| e - m).collect();
            for (bound, &exponent) in bounds.iter_mut().zip(&shifted) {
                *bound = (*bound).min(exponent);
            }
            inverse.add_term(shifted, coefficient.clone());
        }
        inverse.trunc.min_exponent = bounds;
        Ok(inverse)
    }

    /// Substitutes `arguments[k]` for variable `k`. All arguments must share
    /// one ring, which becomes the ring of the result.
    ///
    /// For a power-series `self`, arguments with zero constant term give the
    /// exact truncated composition. Negative powers in `self` require the
    /// corresponding argument to be a unit; the needed inverse powers are
    /// computed in an internally widened ring so the returned terms are exact
    /// images of the stored terms of `self`.
    ///
    /// # Errors
    /// [`Error::Shape`] on argument-count or ring mismatches, [`Error::Unit`]
    /// when a negative power meets a non-unit argument.
    pub fn substitute(&self, arguments: &[Series<C>]) -> Result<Self> {
        if arguments.len() != self.trunc.nvars {
            return Err(Error::Shape(format!(
                "{} arguments for {} variables",
                arguments.len(),
                self.trunc.nvars
            )));
        }
        let out_trunc = match arguments.first() {
            Some(first) => first.trunc.clone(),
            // A 0-variable series is a constant; keep its ring.
            None => self.trunc.clone(),
        };
        for argument in arguments {
            if !argument.trunc.compatible(&out_trunc) {
                return Err(Error::Shape(
                    "substitution arguments live in different rings".into(),
                ));
            }
        }

        // Exponent ranges of `self` per variable.
        let nvars = self.trunc.nvars;
        let mut min_power = vec![0i32; nvars];
        let mut max_power = vec![0i32; nvars];
        for exponents in self.terms.keys() {
            for (var, &exponent) in exponents.iter().enumerate() {
                min_power[var] = min_power[var].min(exponent);
                max_power[var] = max_power[var].max(exponent);
            }
        }

        // Inverse powers of an argument have negative valuation when the
        // argument's leading monomial has positive degree; products then need
        // headroom above the output cutoff to be exact there.
        let mut slack: i32 = 0;
        let mut inverses: Vec<Option<Series<C>>> = vec![None; nvars];
        for var in 0..nvars {
            if min_power[var] < 0 {
                let argument = &arguments[var];
                let (lead_exps, _) = argument.leading_monomial().map_err(|_| {
                    Error::Unit(format!(
                        "negative power of variable {var} with a non-unit argument"
                    ))
                })?;
                let lead_degree = total_degree_of(&lead_exps);
                slack += (-min_power[var]) * lead_degree.max(0);
            }
        }
        let work_trunc = Truncation {
            nvars: out_trunc.nvars,
            max_total_degree: out_trunc.max_total_degree + slack,
            min_exponent: vec![i32::MIN / 4; out_trunc.nvars],
        };
        let lift = |series: &Series<C>| -> Series<C> {
            let mut lifted = Series::zero(work_trunc.clone());
            for (exponents, coefficient) in &series.terms {
                lifted.add_term(exponents.clone(), coefficient.clone());
            }
            lifted
        };
        for var in 0..nvars {
            if min_power[var] < 0 {
                let inverse = lift(&arguments[var]).invert_unit().map_err(|_| {
                    Error::Unit(format!(
                        "negative power of variable {var} with a non-unit argument"
                    ))
                })?;
                inverses[var] = Some(inverse);
            }
        }

        // Memoized powers: powers[var][j] = argument^j (or inverse^j).
        let one = Series::constant(work_trunc.clone(), C::one());
        let mut positive_powers: Vec<Vec<Series<C>>> = vec![vec![one.clone()]; nvars];
        let mut negative_powers: Vec<Vec<Series<C>>> = vec![vec![one.clone()]; nvars];
        let power_of = |var: usize,
                            exponent: i32,
                            positive: &mut Vec<Vec<Series<C>>>,
                            negative: &mut Vec<Vec<Series<C>>>|
         -> Result<Series<C>> {
            let (table, base) = if exponent >= 0 {
                (&mut positive[var], lift(&arguments[var]))
            } else {
                (
                    &mut negative[var],
                    inverses[var].clone().expect("inverse precomputed"),
                )
            };
            let wanted = exponent.unsigned_abs() as usize;
            while table.len() <= wanted {
                let next = table.last().expect("power table seeded").mul(&base)?;
                table.push(next);
            }
            Ok(table[wanted].clone())
        };

        let mut accumulated = Series::zero(work_trunc.clone());
        for (exponents, coefficient) in &self.terms {
            let mut product = Series::constant(work_trunc.clone(), coefficient.clone());
            for (var, &exponent) in exponents.iter().enumerate() {
                if exponent == 0 {
                    continue;
                }
                let factor = power_of(var, exponent, &mut positive_powers, &mut negative_powers)?;
                product = product.mul(&factor)?;
                if product.is_zero() {
                    break;
                }
            }
            accumulated = accumulated.add(&product)?;
        }

        // Re-truncate into the output ring, widening bounds to the observed
        // support.
        let mut bounds = out_trunc.min_exponent.clone();
        let mut result = Series {
            trunc: Truncation {
                nvars: out_trunc.nvars,
                max_total_degree: out_trunc.max_total_degree,
                min_exponent: vec![i32::MIN / 4; out_trunc.nvars],
            },
            terms: BTreeMap::new(),
        };
        for (exponents, coefficient) in &accumulated.terms {
            if total_degree_of(exponents) > out_trunc.max_total_degree {
                continue;
            }
            for (bound, &exponent) in bounds.iter_mut().zip(exponents) {
                *bound = (*bound).min(exponent);
            }
            result.add_term(exponents.clone(), coefficient.clone());
        }
        result.trunc.min_exponent = bounds;
        Ok(result)
    }

    /// Re-maps variables: term exponents move from variable `src` to variable
    /// `var_map[src]`, accumulating when several sources share a target (so a
    /// merge like `(u, v) ↦ (u, u)` is the diagonal restriction). Total
    /// degrees are preserved; the degree cutoff carries over.
    ///
    /// # Errors
    /// [`Error::Shape`] if the map's length differs from the variable count
    /// or a target is out of range.
    pub fn map_vars(&self, target_nvars: usize, var_map: &[usize]) -> Result<Self> {
        if var_map.len() != self.trunc.nvars {
            return Err(Error::Shape(format!(
                "variable map of length {} for {} variables",
                var_map.len(),
                self.trunc.nvars
            )));
        }
        if let Some(bad) = var_map.iter().find(|&&target| target >= target_nvars) {
            return Err(Error::Shape(format!(
                "variable map target {bad} outside {target_nvars} variables"
            )));
        }
        let mut bounds = vec![0i32; target_nvars];
        for (src, &target) in var_map.iter().enumerate() {
            bounds[target] = bounds[target].saturating_add(self.trunc.min_exponent[src]);
        }
        let trunc = Truncation {
            nvars: target_nvars,
            max_total_degree: self.trunc.max_total_degree,
            min_exponent: bounds,
        };
        let mut mapped = Series::zero(trunc);
        for (exponents, coefficient) in &self.terms {
            let mut target_exps = vec![0i32; target_nvars];
            for (src, &exponent) in exponents.iter().enumerate() {
                target_exps[var_map[src]] += exponent;
            }
            mapped.add_term(target_exps, coefficient.clone());
        }
        Ok(mapped)
    }

    /// Places an `n`-variable series into block `block` of a ring of
    /// `block_count` size-`n` blocks: variable `k` goes to `block·n + k`.
    pub fn embed_block(&self, block: usize, block_count: usize) -> Result<Self> {
        let n = self.trunc.nvars;
        if block >= block_count {
            return Err(Error::Shape(format!(
                "block {block} of {block_count}"
            )));
        }
        let map: Vec<usize> = (0..n).map(|k| block * n + k).collect();
        self.map_vars(block_count * n, &map)
    }

    /// Re-places a series of `blocks_in.len()` size-`n` blocks so that source
    /// block `b` lands on target block `blocks_in[b]` of `block_count` blocks.
    /// Used to read a two-point object `φ(·,·)` at argument pairs like
    /// `(w, u)` inside a three-point ring.
    pub fn place_blocks(&self, n: usize, blocks_in: &[usize], block_count: usize) -> Result<Self> {
        if n * blocks_in.len() != self.trunc.nvars {
            return Err(Error::Shape(format!(
                "{} blocks of size {n} in a {}-variable series",
                blocks_in.len(),
                self.trunc.nvars
            )));
        }
        let mut map = Vec::with_capacity(self.trunc.nvars);
        for &target_block in blocks_in {
            if target_block >= block_count {
                return Err(Error::Shape(format!(
                    "block {target_block} of {block_count}"
                )));
            }
            for k in 0..n {
                map.push(target_block * n + k);
            }
        }
        self.map_vars(block_count * n, &map)
    }

    /// The same series under a different degree cutoff; terms above a
    /// lowered cutoff truncate away. Used to give multi-factor products
    /// headroom when a negative-valuation factor would otherwise push
    /// needed intermediates past the cutoff.
    #[must_use]
    pub fn with_max_degree(&self, max_total_degree: i32) -> Self {
        let trunc = Truncation {
            nvars: self.trunc.nvars,
            max_total_degree,
            min_exponent: self.trunc.min_exponent.clone(),
        };
        let mut out = Series::zero(trunc);
        for (exponents, coefficient) in &self.terms {
            out.add_term(exponents.clone(), coefficient.clone());
        }
        out
    }

    /// Maps coefficients into another ring (e.g. lifts rationals to
    /// jet-coordinate polynomials).
    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Series<D> {
        let mut mapped = Series::zero(self.trunc.clone());
        for (exponents, coefficient) in &self.terms {
            mapped.add_term(exponents.clone(), f(coefficient));
        }
        mapped
    }
}

impl Series<Rational> {
    /// Lifts into any coefficient ring.
    pub fn lift<C: Coeff>(&self) -> Series<C> {
        self.map_coeffs(C::from_rational)
    }

    /// Evaluates at a rational point, exactly.
    ///
    /// # Errors
    /// [`Error::Shape`] on a wrong point length, [`Error::Domain`] when a
    /// negative power meets a zero coordinate.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.trunc.nvars {
            return Err(Error::Shape(format!(
                "point of length {} in a {}-variable ring",
                point.len(),
                self.trunc.nvars
            )));
        }
        let mut total = Rational::zero();
        for (exponents, coefficient) in &self.terms {
            let mut value = coefficient.clone();
            for (coordinate, &exponent) in point.iter().zip(exponents) {
                if exponent == 0 {
                    continue;
                }
                if coordinate.is_zero() {
                    if exponent < 0 {
                        return Err(Error::Domain(
                            "negative power of a zero coordinate".into(),
                        ));
                    }
                    value = Rational::zero();
                    break;
                }
                let positive = rational_pow(coordinate, exponent.unsigned_abs());
                value *= if exponent < 0 {
                    positive.recip()
                } else {
                    positive
                };
            }
            total += value;
        }
        Ok(total)
    }
}

impl<C: Coeff> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exponents, coefficient) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut head = String::new();
            for (var, &exponent) in exponents.iter().enumerate() {
                if exponent == 0 {
                    continue;
                }
                if !head.is_empty() {
                    head.push('*');
                }
                if exponent == 1 {
                    head.push_str(&format!("u{var}"));
                } else {
                    head.push_str(&format!("u{var}^{exponent}"));
                }
            }
            if head.is_empty() {
                write!(f, "{coefficient}")?;
            } else {
                write!(f, "({coefficient})*{head}")?;
            }
        }
        Ok(())
    }
}
