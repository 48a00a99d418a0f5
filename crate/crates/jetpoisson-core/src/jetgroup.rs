//! Groups of formal diffeomorphisms under composition.
//!
//! A [`FormalMap`] is a tuple of series in a common ring, regarded as a
//! formal map `u ↦ X(u)` from `source_dim` variables to `target_dim`
//! components, known through total degree `N`. Composition is series
//! substitution; a square map with zero constant term and invertible linear
//! part has a compositional inverse, computed by a fixed-point iteration
//! that gains one exact degree per step.
//!
//! Coefficients are generic: rational maps are concrete jets, while
//! jet-coordinate coefficients keep an entire group element symbolic so that
//! identities can be verified for all jets at once.
//!
//! The origin-fixing square maps with invertible linear part form a group;
//! [`pushforward_bifield`] is its action on bivector fields `φ^{ij}(u,v)`,
//! moving solutions of the classical Yang–Baxter equation to solutions.

use alloc::format;
use alloc::vec::Vec;

use crate::bialgebra::BiField;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::matrix::{self, SeriesRows};
use crate::series::{Series, Truncation};

/// A formal map `u ↦ X(u)` given by one series per target component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalMap<C: Coeff> {
    components: Vec<Series<C>>,
}

/// Linear part of a square map together with its exact determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearPart<C: Coeff> {
    /// `matrix[i][j]` is the coefficient of `u^j` in component `i`.
    pub matrix: Vec<Vec<C>>,
    /// Determinant of the matrix, computed exactly.
    pub det: C,
}

impl<C: Coeff> LinearPart<C> {
    /// True when the determinant is nonzero, i.e. the jet is invertible.
    pub fn is_invertible(&self) -> bool {
        !self.det.is_zero()
    }
}

impl<C: Coeff> FormalMap<C> {
    /// Wraps component series into a map.
    ///
    /// # Errors
    /// [`Error::Shape`] unless there is at least one component and all
    /// components share one ring.
    pub fn new(components: Vec<Series<C>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Shape("map with no components".into()));
        }
        for component in &components {
            if !component
                .truncation()
                .compatible(components[0].truncation())
            {
                return Err(Error::Shape(
                    "map components live in different rings".into(),
                ));
            }
        }
        Ok(FormalMap { components })
    }

    /// The identity map `u ↦ u`.
    pub fn identity(trunc: &Truncation) -> Result<Self> {
        let components = (0..trunc.nvars())
            .map(|k| Series::var(trunc.clone(), k))
            .collect::<Result<Vec<_>>>()?;
        FormalMap::new(components)
    }

    /// Number of source variables.
    pub fn source_dim(&self) -> usize {
        self.components[0].nvars()
    }

    /// Number of target components.
    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    /// True when source and target dimensions agree.
    pub fn is_square(&self) -> bool {
        self.source_dim() == self.target_dim()
    }

    /// The component series.
    pub fn components(&self) -> &[Series<C>] {
        &self.components
    }

    /// The ring the components live in.
    pub fn truncation(&self) -> &Truncation {
        self.components[0].truncation()
    }

    /// Applies the map to a series: `f ↦ f ∘ X`.
    ///
    /// # Errors
    /// [`Error::Domain`] unless the map fixes the origin — substituting a
    /// series with a constant term into a truncated `f` would need the
    /// discarded tail of `f` and cannot be exact.
    pub fn apply(&self, f: &Series<C>) -> Result<Series<C>> {
        if !self.fixes_origin()? {
            return Err(Error::Domain(
                "cannot substitute a map with a constant term exactly".into(),
            ));
        }
        f.substitute(&self.components)
    }

    /// Composition `self ∘ inner`, i.e. `u ↦ self(inner(u))`.
    ///
    /// # Errors
    /// [`Error::Shape`] unless dimensions chain (`inner` maps into the
    /// source of `self`); [`Error::Domain`] if `inner` has a constant term,
    /// which would make truncated composition inexact.
    pub fn compose(&self, inner: &FormalMap<C>) -> Result<Self> {
        if inner.target_dim() != self.source_dim() {
            return Err(Error::Shape(format!(
                "composition of a map from {} variables with a map onto {} components",
                self.source_dim(),
                inner.target_dim()
            )));
        }
        if !inner.fixes_origin()? {
            return Err(Error::Domain(
                "composition with a constant-term inner map is not supported".into(),
            ));
        }
        let components = self
            .components
            .iter()
            .map(|component| component.substitute(&inner.components))
            .collect::<Result<Vec<_>>>()?;
        FormalMap::new(components)
    }

    /// Jacobian matrix `(∂X^i/∂u^j)` of series: `target_dim` rows of
    /// `source_dim` entries.
    pub fn jacobian(&self) -> Result<SeriesRows<C>> {
        let m = self.source_dim();
        let mut rows = Vec::with_capacity(self.target_dim());
        for component in &self.components {
            let mut row = Vec::with_capacity(m);
            for j in 0..m {
                row.push(component.partial_derivative(j)?);
            }
            rows.push(row);
        }
        Ok(rows)
    }

    /// The linear-part coefficients: `linear[i][j]` is the coefficient of
    /// `u^j` in component `i` (`target_dim × source_dim`).
    pub fn linear_part(&self) -> Result<Vec<Vec<C>>> {
        let m = self.source_dim();
        let mut rows = Vec::with_capacity(self.target_dim());
        for component in &self.components {
            let mut row = Vec::with_capacity(m);
            for j in 0..m {
                let mut exponents = alloc::vec![0i32; m];
                exponents[j] = 1;
                row.push(component.coefficient(&exponents)?);
            }
            rows.push(row);
        }
        Ok(rows)
    }

    /// Linear part plus its exact determinant, deciding jet invertibility.
    ///
    /// # Errors
    /// [`Error::Shape`] for non-square maps.
    pub fn check_invertible(&self) -> Result<LinearPart<C>> {
        if !self.is_square() {
            return Err(Error::Shape(
                "invertibility is defined for square maps only".into(),
            ));
        }
        let matrix = self.linear_part()?;
        let trunc = Truncation::power(1, 0)?;
        let rows: SeriesRows<C> = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|entry| Series::constant(trunc.clone(), entry.clone()))
                    .collect()
            })
            .collect();
        let det_series = matrix::determinant(&rows)?;
        let det = det_series.coefficient(&[0])?;
        Ok(LinearPart { matrix, det })
    }

    /// True when every component has zero constant term, i.e. the map fixes
    /// the origin.
    pub fn fixes_origin(&self) -> Result<bool> {
        let origin = alloc::vec![0i32; self.source_dim()];
        for component in &self.components {
            if !component.coefficient(&origin)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Compositional inverse of an origin-fixing square map with invertible
    /// linear part: the unique `X̄` with `X(X̄(u)) = u` through the degree
    /// cutoff.
    ///
    /// Splitting `X = X_0 u + X_h` into linear and higher parts, the inverse
    /// is the fixed point of `X̄ ↦ X_0^{-1} (u − X_h(X̄))`; each iteration is
    /// exact one degree further, so cutoff-many steps from the linear seed
    /// finish the job.
    ///
    /// # Errors
    /// [`Error::Shape`] for non-square maps, [`Error::Domain`] if a constant
    /// term is present, [`Error::Unit`] if the linear part is not invertible
    /// over the coefficient ring.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape(
                "only square maps can be inverted".into(),
            ));
        }
        if !self.fixes_origin()? {
            return Err(Error::Domain(
                "only origin-fixing maps can be inverted".into(),
            ));
        }
        let n = self.source_dim();
        let trunc = self.truncation().clone();

        // Invert the linear part as a matrix of constant series.
        let linear = self.linear_part()?;
        let linear_rows: SeriesRows<C> = linear
            .iter()
            .map(|row| {
                row.iter()
                    .map(|entry| Series::constant(trunc.clone(), entry.clone()))
                    .collect()
            })
            .collect();
        let (linear_inverse, _) = matrix::inverse(&linear_rows)?;

        // Higher-order part X_h = X − X_0 u.
        let mut higher = Vec::with_capacity(n);
        for (i, component) in self.components.iter().enumerate() {
            let mut linear_series = Series::zero(trunc.clone());
            for (j, entry) in linear[i].iter().enumerate() {
                let var = Series::var(trunc.clone(), j)?;
                linear_series = linear_series.add(&var.scale(entry))?;
            }
            higher.push(component.sub(&linear_series)?);
        }

        let apply_linear_inverse = |target: &[Series<C>]| -> Result<Vec<Series<C>>> {
            let mut out = Vec::with_capacity(n);
            for row in &linear_inverse {
                let mut entry = Series::zero(trunc.clone());
                for (j, factor) in row.iter().enumerate() {
                    entry = entry.add(&factor.mul(&target[j])?)?;
                }
                out.push(entry);
            }
            Ok(out)
        };

        let vars: Vec<Series<C>> = (0..n)
            .map(|k| Series::var(trunc.clone(), k))
            .collect::<Result<Vec<_>>>()?;
        let mut current = apply_linear_inverse(&vars)?;
        for _ in 1..trunc.max_total_degree() {
            let mut target = Vec::with_capacity(n);
            for (k, higher_component) in higher.iter().enumerate() {
                let image = higher_component.substitute(&current)?;
                target.push(vars[k].sub(&image)?);
            }
            current = apply_linear_inverse(&target)?;
        }
        FormalMap::new(current)
    }
}

impl FormalMap<crate::rational::Rational> {
    /// Lifts a rational map into any coefficient ring.
    pub fn lift<C: Coeff>(&self) -> FormalMap<C> {
        FormalMap {
            components: self.components.iter().map(Series::lift).collect(),
        }
    }
}

/// One-dimensional origin-fixing map `u ↦ Σ_k coeffs[k−1] u^k` at the given
/// degree cutoff.
pub fn one_dim_map<C: Coeff>(trunc: &Truncation, coeffs: &[C]) -> Result<FormalMap<C>> {
    if trunc.nvars() != 1 {
        return Err(Error::Shape(format!(
            "one-dimensional map over {} variables",
            trunc.nvars()
        )));
    }
    let series = Series::from_terms(
        trunc.clone(),
        coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (alloc::vec![k as i32 + 1], c.clone())),
    )?;
    FormalMap::new(alloc::vec![series])
}

/// Push-forward of a bivector field along an origin-fixing invertible map:
///
/// ```text
/// (X·φ)^{ij}(u,v) = (X_{*X̄(u)})^i_k (X_{*X̄(v)})^j_l φ^{kl}(X̄(u), X̄(v)),
/// ```
///
/// where `X̄` is the compositional inverse. This is the group action moving
/// solutions of the classical Yang–Baxter equation to solutions.
///
/// # Errors
/// [`Error::Shape`] on dimension mismatch; [`Error::Domain`] when `φ` has
/// negative exponents (the inverse map is not a unit, so Laurent terms
/// cannot be substituted) or when `X` is not an origin-fixing square map.
pub fn pushforward_bifield<C: Coeff>(
    map: &FormalMap<C>,
    phi: &BiField<C>,
) -> Result<BiField<C>> {
    let n = phi.dim();
    if map.target_dim() != n || map.source_dim() != n {
        return Err(Error::Shape(format!(
            "push-forward of a {n}-dimensional bivector along a map {}→{}",
            map.source_dim(),
            map.target_dim()
        )));
    }
    if phi.has_negative_exponents() {
        return Err(Error::Domain(
            "push-forward of a bivector with negative exponents is not supported".into(),
        ));
    }
    let inverse = map.invert()?;
    let jac = map.jacobian()?;

    // Jacobian entries evaluated at X̄, embedded in the u- and v-blocks.
    let mut ju = Vec::with_capacity(n);
    let mut jv = Vec::with_capacity(n);
    for row in &jac {
        let mut row_u = Vec::with_capacity(n);
        let mut row_v = Vec::with_capacity(n);
        for entry in row {
            let at_inverse = entry.substitute(inverse.components())?;
            row_u.push(at_inverse.embed_block(0, 2)?);
            row_v.push(at_inverse.embed_block(1, 2)?);
        }
        ju.push(row_u);
        jv.push(row_v);
    }

    // Substitution list (X̄(u), X̄(v)) for the 2n-variable components.
    let mut subs = Vec::with_capacity(2 * n);
    for component in inverse.components() {
        subs.push(component.embed_block(0, 2)?);
    }
    for component in inverse.components() {
        subs.push(component.embed_block(1, 2)?);
    }

    let trunc = subs[0].truncation().clone();
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut entry = Series::zero(trunc.clone());
            for k in 0..n {
                for l in 0..n {
                    let moved = phi.component(k, l).substitute(&subs)?;
                    entry = entry.add(&ju[i][k].mul(&jv[j][l])?.mul(&moved)?)?;
                }
            }
            row.push(entry);
        }
        components.push(row);
    }

    // Exactness: φ-terms above its certified degree enter at that degree or
    // later (the substituted maps have valuation 1, the Jacobian factors
    // valuation ≥ vJ each); Jacobian terms above N−1 (lost to the derivative)
    // enter at N + vJ + vφ or later.
    let degree = phi.truncation().max_total_degree();
    let certified = if phi.is_zero() {
        degree
    } else {
        let v_phi = phi.valuation().unwrap_or(0);
        let mut v_jac = i32::MAX;
        for row in &jac {
            for entry in row {
                if let Some(v) = entry.valuation() {
                    v_jac = v_jac.min(v);
                }
            }
        }
        if v_jac == i32::MAX {
            v_jac = 0;
        }
        let from_phi = phi
            .certified_degree()
            .saturating_add(2 * v_jac.max(0));
        let from_jac = degree - 1 + v_jac.max(0) + v_phi.max(0);
        degree.min(from_phi).min(from_jac)
    };
    Ok(BiField::new(components)?.with_certified(certified))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra;
    use crate::coeff::{CoeffPoly, Indeterminate, Monomial};
    use crate::rational::{int, ratio, Rational};

    fn map1(degree: i32, coeffs: &[i64]) -> FormalMap<Rational> {
        let trunc = Truncation::power(1, degree).unwrap();
        let coeffs: Vec<Rational> = coeffs.iter().map(|&c| int(c)).collect();
        one_dim_map(&trunc, &coeffs).unwrap()
    }

    #[test]
    fn composition_substitutes() {
        // (u + u^2) ∘ (u + u^3) = u + u^2 + u^3 + 2u^4 + O(u^5)
        let outer = map1(4, &[1, 1]);
        let inner = map1(4, &[1, 0, 1]);
        let composed = outer.compose(&inner).unwrap();
        assert_eq!(composed, map1(4, &[1, 1, 1, 2]));
    }

    #[test]
    fn inverse_of_quadratic_map() {
        // (u + u^2)^{-1} = u - u^2 + 2u^3 - 5u^4 + O(u^5)
        let map = map1(4, &[1, 1]);
        let inverse = map.invert().unwrap();
        assert_eq!(inverse, map1(4, &[1, -1, 2, -5]));
        let identity = FormalMap::identity(map.truncation()).unwrap();
        assert_eq!(map.compose(&inverse).unwrap(), identity);
        assert_eq!(inverse.compose(&map).unwrap(), identity);
    }

    #[test]
    fn numeric_jet_inverse() {
        // (2u + 3u^2 + 5u^3)^{-1} = u/2 - 3u^2/8 + u^3/4 + O(u^4)
        let trunc = Truncation::power(1, 3).unwrap();
        let map = one_dim_map(&trunc, &[int(2), int(3), int(5)]).unwrap();
        let inverse = map.invert().unwrap();
        let expected = one_dim_map(
            &trunc,
            &[ratio(1, 2).unwrap(), ratio(-3, 8).unwrap(), ratio(1, 4).unwrap()],
        )
        .unwrap();
        assert_eq!(inverse, expected);
    }

    #[test]
    fn symbolic_jet_inverse() {
        // X(u) = x_1 u + x_2 u^2 + x_3 u^3 inverts to
        //   x_1^{-1} u − x_2 x_1^{-3} u^2 + (2 x_2^2 x_1^{-5} − x_3 x_1^{-4}) u^3.
        let x = |k: u32| Indeterminate::new('x', 1, alloc::vec![k]);
        let coeff = |k: u32| CoeffPoly::var(x(k));
        let trunc = Truncation::power(1, 3).unwrap();
        let map = one_dim_map(&trunc, &[coeff(1), coeff(2), coeff(3)]).unwrap();
        let inverse = map.invert().unwrap();

        let pow = |pairs: &[(u32, i32)], c: i64| {
            CoeffPoly::term(
                Monomial::new(
                    pairs
                        .iter()
                        .map(|&(k, p)| (x(k), p))
                        .collect(),
                ),
                int(c),
            )
        };
        let expected = one_dim_map(
            &trunc,
            &[
                pow(&[(1, -1)], 1),
                pow(&[(2, 1), (1, -3)], -1),
                pow(&[(2, 2), (1, -5)], 2).add(&pow(&[(3, 1), (1, -4)], -1)),
            ],
        )
        .unwrap();
        assert_eq!(inverse, expected);
        let identity = FormalMap::identity(&trunc).unwrap();
        assert_eq!(map.compose(&inverse).unwrap(), identity);
    }

    #[test]
    fn two_dimensional_inverse() {
        // X(u, v) = (u + v^2, v + u^2): invert and check both compositions.
        let trunc = Truncation::power(2, 5).unwrap();
        let u: Series<Rational> = Series::var(trunc.clone(), 0).unwrap();
        let v = Series::var(trunc.clone(), 1).unwrap();
        let map = FormalMap::new(alloc::vec![
            u.add(&v.mul(&v).unwrap()).unwrap(),
            v.add(&u.mul(&u).unwrap()).unwrap(),
        ])
        .unwrap();
        let inverse = map.invert().unwrap();
        let identity = FormalMap::identity(&trunc).unwrap();
        assert_eq!(map.compose(&inverse).unwrap(), identity);
        assert_eq!(inverse.compose(&map).unwrap(), identity);
    }

    #[test]
    fn maps_with_constant_terms_are_not_inverted() {
        let trunc = Truncation::power(1, 3).unwrap();
        let series = Series::from_terms(
            trunc,
            [(alloc::vec![0], int(1)), (alloc::vec![1], int(1))],
        )
        .unwrap();
        let map = FormalMap::new(alloc::vec![series]).unwrap();
        assert!(matches!(map.invert(), Err(Error::Domain(_))));
        let target = map1(3, &[1, 1]);
        assert!(matches!(target.compose(&map), Err(Error::Domain(_))));
    }

    #[test]
    fn rectangular_maps_compose_and_differentiate() {
        // F: R → R², u ↦ (u, u²); G: R² → R, (a, b) ↦ a + b.
        let line = Truncation::power(1, 4).unwrap();
        let plane = Truncation::power(2, 4).unwrap();
        let u: Series<Rational> = Series::var(line, 0).unwrap();
        let embed = FormalMap::new(alloc::vec![u.clone(), u.mul(&u).unwrap()]).unwrap();
        assert_eq!(embed.source_dim(), 1);
        assert_eq!(embed.target_dim(), 2);
        let a: Series<Rational> = Series::var(plane.clone(), 0).unwrap();
        let b = Series::var(plane, 1).unwrap();
        let sum = FormalMap::new(alloc::vec![a.add(&b).unwrap()]).unwrap();
        // G ∘ F : u ↦ u + u².
        let through = sum.compose(&embed).unwrap();
        assert_eq!(through, map1(4, &[1, 1]));
        // Jacobian of F is the 2×1 column (1, 2u).
        let jac = embed.jacobian().unwrap();
        assert_eq!(jac.len(), 2);
        assert_eq!(jac[0].len(), 1);
        assert_eq!(jac[1][0], u.scale(&int(2)));
        // Non-square maps have no inverse or linear verdict.
        assert!(matches!(embed.invert(), Err(Error::Shape(_))));
        assert!(matches!(embed.check_invertible(), Err(Error::Shape(_))));
    }

    #[test]
    fn linear_verdicts_are_exact() {
        let trunc = Truncation::power(2, 3).unwrap();
        let u: Series<Rational> = Series::var(trunc.clone(), 0).unwrap();
        let v = Series::var(trunc.clone(), 1).unwrap();
        // X = (2u + 3v, 3u + 5v): det X_0 = 1.
        let map = FormalMap::new(alloc::vec![
            u.scale(&int(2)).add(&v.scale(&int(3))).unwrap(),
            u.scale(&int(3)).add(&v.scale(&int(5))).unwrap(),
        ])
        .unwrap();
        let verdict = map.check_invertible().unwrap();
        assert_eq!(verdict.det, int(1));
        assert!(verdict.is_invertible());
        // X = (v², u·v-free degenerate linear part): det X_0 = 0.
        let degenerate = FormalMap::new(alloc::vec![
            v.mul(&v).unwrap(),
            u.mul(&v).unwrap(),
        ])
        .unwrap();
        let verdict = degenerate.check_invertible().unwrap();
        assert!(verdict.det.is_zero());
        assert!(!verdict.is_invertible());
        let identity = FormalMap::<Rational>::identity(&trunc).unwrap();
        let verdict = identity.check_invertible().unwrap();
        assert_eq!(verdict.det, int(1));
    }

    #[test]
    fn pushforward_scales_the_cubic_solution() {
        // X = cu moves φ = uv(u−v) to (1/c)·uv(u−v): factors c·c·(1/c³)·c².
        let degree = 6;
        let phi = bialgebra::w1_canonical(1, degree).unwrap();
        let trunc = Truncation::power(1, degree).unwrap();
        let c = int(3);
        let map = one_dim_map(&trunc, &[c]).unwrap();
        let moved = pushforward_bifield(&map, &phi).unwrap();
        assert_eq!(moved, phi.scale(&ratio(1, 3).unwrap()));
        assert_eq!(moved.certified_degree(), degree);

        let identity = FormalMap::identity(&trunc).unwrap();
        assert_eq!(pushforward_bifield(&identity, &phi).unwrap(), phi);
    }

    #[test]
    fn pushforward_preserves_solutions_and_skewness() {
        // A non-linear group element applied to the cubic solution.
        let degree = 6;
        let phi = bialgebra::w1_canonical(1, degree).unwrap();
        let map = map1(degree, &[1, 2, 0, 1]);
        let moved = pushforward_bifield(&map, &phi).unwrap();
        assert!(moved.is_skew().unwrap());
        let residual = bialgebra::cybe_residual(&moved).unwrap();
        assert!(residual.is_certified_zero());
        assert!(!moved.is_zero());
    }

    #[test]
    fn pushforward_rejects_laurent_bivectors() {
        // φ = u^{-1}v − uv^{-1} is skew but not a power series.
        let trunc = Truncation::laurent(2, 4, alloc::vec![-1, -1]).unwrap();
        let component = Series::from_terms(
            trunc,
            [
                (alloc::vec![-1, 1], int(1)),
                (alloc::vec![1, -1], int(-1)),
            ],
        )
        .unwrap();
        let phi = bialgebra::BiField::new(alloc::vec![alloc::vec![component]]).unwrap();
        let map = map1(4, &[1]);
        assert!(matches!(
            pushforward_bifield(&map, &phi),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn pushforward_is_an_action() {
        // Moving by X then Y agrees with moving by Y∘X.
        let degree = 5;
        let phi = bialgebra::w1_canonical(1, degree).unwrap();
        let first = map1(degree, &[1, 1]);
        let second = map1(degree, &[2, 0, 1]);
        let step = pushforward_bifield(&first, &phi).unwrap();
        let two_steps = pushforward_bifield(&second, &step).unwrap();
        let composed = second.compose(&first).unwrap();
        let direct = pushforward_bifield(&composed, &phi).unwrap();
        assert_eq!(two_steps, direct);
    }
}
