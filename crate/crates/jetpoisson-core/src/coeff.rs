//! Coefficient rings for series arithmetic.
//!
//! Series are generic over their coefficients. Two rings are provided:
//!
//! * [`Rational`] — plain exact ℚ, used for every numeric computation;
//! * [`CoeffPoly`] — Laurent polynomials over ℚ in *jet coordinates*
//!   [`Indeterminate`], used when a group element is kept symbolic (the
//!   coefficient of `u^I` in component `i` is the indeterminate `x^i_I`).
//!
//! `CoeffPoly` allows negative powers of single coordinates so that, for
//! example, the coefficients of a symbolically inverted one-dimensional jet
//! (`1/x_1`, `-x_2/x_1^3`, …) stay representable. A polynomial is invertible
//! in this ring exactly when it consists of a single term.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::rational::Rational;

/// A named jet coordinate `x^i_I`: the coefficient of `u^I` in the `i`-th
/// component of a formal map, tagged with a family letter so that several
/// symbolic maps can coexist in one expression.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Indeterminate {
    /// Family letter (`'x'`, `'y'`, …) distinguishing symbolic maps.
    pub family: char,
    /// Component index `i`, 1-based.
    pub component: u32,
    /// Multi-index `I` over the source variables (all entries ≥ 0).
    pub index: Vec<u32>,
}

impl Indeterminate {
    /// Jet coordinate `family^component_index`.
    pub fn new(family: char, component: u32, index: Vec<u32>) -> Self {
        Indeterminate {
            family,
            component,
            index,
        }
    }

    /// Total degree `|I|` of the multi-index.
    pub fn index_degree(&self) -> u32 {
        self.index.iter().sum()
    }
}

impl fmt::Display for Indeterminate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}_(", self.family, self.component)?;
        for (pos, entry) in self.index.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{entry}")?;
        }
        write!(f, ")")
    }
}

/// A monomial in jet coordinates: a sorted product of `indeterminate^power`
/// factors with nonzero (possibly negative) integer powers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Monomial {
    factors: Vec<(Indeterminate, i32)>,
}

impl Monomial {
    /// The empty product.
    pub fn one() -> Self {
        Monomial::default()
    }

    /// Builds a monomial from factors, combining repeats and dropping zero
    /// powers.
    pub fn new(factors: Vec<(Indeterminate, i32)>) -> Self {
        let mut map: BTreeMap<Indeterminate, i32> = BTreeMap::new();
        for (indet, power) in factors {
            *map.entry(indet).or_insert(0) += power;
        }
        Monomial {
            factors: map.into_iter().filter(|(_, p)| *p != 0).collect(),
        }
    }

    /// Single indeterminate to the first power.
    pub fn var(indet: Indeterminate) -> Self {
        Monomial {
            factors: vec![(indet, 1)],
        }
    }

    /// True for the empty product.
    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// The factors, sorted by indeterminate.
    pub fn factors(&self) -> &[(Indeterminate, i32)] {
        &self.factors
    }

    /// Power of `indet` in this monomial (0 if absent).
    pub fn power_of(&self, indet: &Indeterminate) -> i32 {
        self.factors
            .binary_search_by(|(candidate, _)| candidate.cmp(indet))
            .map(|at| self.factors[at].1)
            .unwrap_or(0)
    }

    /// Product of two monomials.
    pub fn mul(&self, other: &Self) -> Self {
        let mut merged = self.factors.clone();
        merged.extend(other.factors.iter().cloned());
        Monomial::new(merged)
    }

    /// Monomial with all powers negated (the reciprocal).
    pub fn recip(&self) -> Self {
        Monomial {
            factors: self
                .factors
                .iter()
                .map(|(indet, power)| (indet.clone(), -power))
                .collect(),
        }
    }

    /// Sum of powers weighted by a per-indeterminate weight.
    pub fn weighted_degree(&self, weight: impl Fn(&Indeterminate) -> i64) -> i64 {
        self.factors
            .iter()
            .map(|(indet, power)| weight(indet) * i64::from(*power))
            .sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (pos, (indet, power)) in self.factors.iter().enumerate() {
            if pos > 0 {
                write!(f, "*")?;
            }
            write!(f, "{indet}")?;
            if *power != 1 {
                write!(f, "^{power}")?;
            }
        }
        Ok(())
    }
}

/// Laurent polynomial over ℚ in jet coordinates, stored as a sorted map from
/// monomials to nonzero rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoeffPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl CoeffPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        CoeffPoly::default()
    }

    /// The constant polynomial `value`.
    pub fn constant(value: Rational) -> Self {
        let mut poly = CoeffPoly::zero();
        if !value.is_zero() {
            poly.terms.insert(Monomial::one(), value);
        }
        poly
    }

    /// The polynomial consisting of the single jet coordinate `indet`.
    pub fn var(indet: Indeterminate) -> Self {
        CoeffPoly::term(Monomial::var(indet), Rational::one())
    }

    /// The polynomial `coefficient * monomial`.
    pub fn term(monomial: Monomial, coefficient: Rational) -> Self {
        let mut poly = CoeffPoly::zero();
        if !coefficient.is_zero() {
            poly.terms.insert(monomial, coefficient);
        }
        poly
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterates over `(monomial, coefficient)` pairs in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of `monomial` (zero if absent).
    pub fn coefficient(&self, monomial: &Monomial) -> Rational {
        self.terms.get(monomial).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `coefficient * monomial` in place, removing the entry if it
    /// cancels.
    pub fn add_term(&mut self, monomial: Monomial, coefficient: Rational) {
        if coefficient.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(monomial) {
            Entry::Vacant(slot) => {
                slot.insert(coefficient);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coefficient;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// Sum of two polynomials.
    pub fn add(&self, other: &Self) -> Self {
        let mut sum = self.clone();
        for (monomial, coefficient) in &other.terms {
            sum.add_term(monomial.clone(), coefficient.clone());
        }
        sum
    }

    /// Difference of two polynomials.
    pub fn sub(&self, other: &Self) -> Self {
        let mut diff = self.clone();
        for (monomial, coefficient) in &other.terms {
            diff.add_term(monomial.clone(), -coefficient.clone());
        }
        diff
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        CoeffPoly {
            terms: self
                .terms
                .iter()
                .map(|(monomial, coefficient)| (monomial.clone(), -coefficient.clone()))
                .collect(),
        }
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &Self) -> Self {
        let mut product = CoeffPoly::zero();
        for (left_mono, left_coeff) in &self.terms {
            for (right_mono, right_coeff) in &other.terms {
                product.add_term(left_mono.mul(right_mono), left_coeff * right_coeff);
            }
        }
        product
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return CoeffPoly::zero();
        }
        CoeffPoly {
            terms: self
                .terms
                .iter()
                .map(|(monomial, coefficient)| (monomial.clone(), coefficient * factor))
                .collect(),
        }
    }

    /// Partial derivative with respect to a jet coordinate.
    pub fn derivative(&self, indet: &Indeterminate) -> Self {
        let mut result = CoeffPoly::zero();
        for (monomial, coefficient) in &self.terms {
            let power = monomial.power_of(indet);
            if power == 0 {
                continue;
            }
            let mut factors = monomial.factors().to_vec();
            for entry in &mut factors {
                if &entry.0 == indet {
                    entry.1 -= 1;
                }
            }
            result.add_term(
                Monomial::new(factors),
                coefficient * Rational::from_integer(power.into()),
            );
        }
        result
    }

    /// All jet coordinates occurring in the polynomial, each once.
    pub fn support(&self) -> Vec<Indeterminate> {
        let mut seen: Vec<Indeterminate> = Vec::new();
        for monomial in self.terms.keys() {
            for (indet, _) in monomial.factors() {
                if seen.binary_search(indet).is_err() {
                    let at = seen.partition_point(|known| known < indet);
                    seen.insert(at, indet.clone());
                }
            }
        }
        seen
    }

    /// Substitutes rational values for all jet coordinates.
    ///
    /// Returns `None` if a coordinate is missing from `values` or a negative
    /// power of zero is requested.
    pub fn evaluate(&self, values: &BTreeMap<Indeterminate, Rational>) -> Option<Rational> {
        let mut total = Rational::zero();
        for (monomial, coefficient) in &self.terms {
            let mut product = coefficient.clone();
            for (indet, power) in monomial.factors() {
                let value = values.get(indet)?;
                if value.is_zero() && *power < 0 {
                    return None;
                }
                let positive = rational_pow(value, power.unsigned_abs());
                product *= if *power < 0 {
                    positive.recip()
                } else {
                    positive
                };
            }
            total += product;
        }
        Some(total)
    }
}

/// `base^exp` for a non-negative exponent, by repeated squaring.
pub(crate) fn rational_pow(base: &Rational, exp: u32) -> Rational {
    let mut result = Rational::one();
    let mut square = base.clone();
    let mut remaining = exp;
    while remaining > 0 {
        if remaining & 1 == 1 {
            result *= &square;
        }
        remaining >>= 1;
        if remaining > 0 {
            square = &square * &square;
        }
    }
    result
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (monomial, coefficient)) in self.terms.iter().enumerate() {
            if pos > 0 {
                write!(f, " + ")?;
            }
            if monomial.is_one() {
                write!(f, "{coefficient}")?;
            } else if num_traits::One::is_one(coefficient) {
                write!(f, "{monomial}")?;
            } else {
                write!(f, "{coefficient}*{monomial}")?;
            }
        }
        Ok(())
    }
}

/// Ring operations a series coefficient must support.
///
/// Implemented by [`Rational`] (numeric work) and [`CoeffPoly`] (symbolic
/// jets). `try_inverse` returns `None` when the element is not a unit in its
/// ring — a nonzero rational is always invertible, a jet-coordinate
/// polynomial only when it is a single term.
pub trait Coeff: Clone + PartialEq + Eq + fmt::Debug + fmt::Display {
    /// Additive identity.
    fn zero() -> Self;
    /// Multiplicative identity.
    fn one() -> Self;
    /// True for the additive identity.
    fn is_zero(&self) -> bool;
    /// In-place sum.
    fn add_assign(&mut self, other: &Self);
    /// Difference.
    fn sub(&self, other: &Self) -> Self;
    /// Product.
    fn mul(&self, other: &Self) -> Self;
    /// Negation.
    fn neg(&self) -> Self;
    /// Embeds a rational scalar.
    fn from_rational(value: &Rational) -> Self;
    /// Product with a rational scalar.
    fn scale(&self, factor: &Rational) -> Self;
    /// Multiplicative inverse, if this element is a unit.
    fn try_inverse(&self) -> Option<Self>;
    /// Short human-readable name of the ring, used in error messages.
    fn ring_name() -> &'static str;
}

impl Coeff for Rational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }

    fn one() -> Self {
        num_traits::One::one()
    }

    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }

    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }

    fn scale(&self, factor: &Rational) -> Self {
        self * factor
    }

    fn try_inverse(&self) -> Option<Self> {
        if num_traits::Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn ring_name() -> &'static str {
        "Q"
    }
}

impl Coeff for CoeffPoly {
    fn zero() -> Self {
        CoeffPoly::zero()
    }

    fn one() -> Self {
        CoeffPoly::constant(Rational::one())
    }

    fn is_zero(&self) -> bool {
        CoeffPoly::is_zero(self)
    }

    fn add_assign(&mut self, other: &Self) {
        for (monomial, coefficient) in &other.terms {
            self.add_term(monomial.clone(), coefficient.clone());
        }
    }

    fn sub(&self, other: &Self) -> Self {
        CoeffPoly::sub(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        CoeffPoly::mul(self, other)
    }

    fn neg(&self) -> Self {
        CoeffPoly::neg(self)
    }

    fn from_rational(value: &Rational) -> Self {
        CoeffPoly::constant(value.clone())
    }

    fn scale(&self, factor: &Rational) -> Self {
        CoeffPoly::scale(self, factor)
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (monomial, coefficient) = self.terms.iter().next().expect("one term");
        Some(CoeffPoly::term(monomial.recip(), coefficient.recip()))
    }

    fn ring_name() -> &'static str {
        "Q[jet coordinates]"
    }
}
