//! The multiplicative Poisson tensor on groups of formal maps.
//!
//! A bivector field `φ^{kl}(u,v)` with polynomial components induces a
//! Poisson tensor on the group of formal maps through
//!
//! ```text
//! Ω^{ij}(u,v) = (X_{*u})^i_k (X_{*v})^j_l φ^{kl}(u,v) − φ^{ij}(X(u), X(v)),
//! ```
//!
//! the pairing `{X^i(u), X^j(v)} = Ω^{ij}(u,v)`. Keeping the map `X`
//! symbolic — every Taylor coefficient its own jet coordinate `x^i_I` — and
//! reading off the coefficient of `u^I v^J` yields the bracket polynomial
//! `{x^i_I, x^j_J}` exactly. The tensor is multiplicative: composing group
//! elements is a Poisson map, which [`multiplicativity_residual`] checks on
//! concrete jets. When `φ` solves the classical Yang–Baxter equation the
//! brackets satisfy the Jacobi identity, checked symbolically by
//! [`coordinate_jacobi_residual`].

use alloc::format;
use alloc::vec::Vec;

use crate::bialgebra::BiField;
use crate::coeff::{Coeff, CoeffPoly, Indeterminate};
use crate::error::{Error, Result};
use crate::jetgroup::FormalMap;
use crate::rational::Rational;
use crate::series::{Series, Truncation};

/// A formal map kept symbolic: the coefficient of `u^I` in component `i` is
/// the jet coordinate `x^i_I` (family letter configurable), for every
/// multi-index up to the degree cutoff. With constants included this is a
/// generic element of the full jet group; without, of its origin-fixing
/// subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicJet {
    map: FormalMap<CoeffPoly>,
    family: char,
    include_constants: bool,
}

impl SymbolicJet {
    /// Generic jet of dimension `dim` through total degree `degree`.
    ///
    /// # Errors
    /// [`Error::Shape`] for a zero dimension or negative degree.
    pub fn new(dim: usize, degree: i32, include_constants: bool, family: char) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("zero-dimensional jet".into()));
        }
        let trunc = Truncation::power(dim, degree)?;
        let low = i32::from(!include_constants);
        let mut components = Vec::with_capacity(dim);
        for i in 0..dim {
            let terms = multi_indices(dim, degree)
                .into_iter()
                .filter(|index| index.iter().sum::<i32>() >= low)
                .map(|index| {
                    let coordinate = Indeterminate::new(
                        family,
                        (i + 1) as u32,
                        index.iter().map(|&e| e as u32).collect(),
                    );
                    (index, CoeffPoly::var(coordinate))
                });
            components.push(Series::from_terms(trunc.clone(), terms)?);
        }
        Ok(SymbolicJet {
            map: FormalMap::new(components)?,
            family,
            include_constants,
        })
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.map.source_dim()
    }

    /// Degree cutoff of the jet.
    pub fn degree(&self) -> i32 {
        self.map.truncation().max_total_degree()
    }

    /// Family letter of the jet coordinates.
    pub fn family(&self) -> char {
        self.family
    }

    /// True when the constant coordinates `x^i_0` are present.
    pub fn includes_constants(&self) -> bool {
        self.include_constants
    }

    /// The underlying symbolic map.
    pub fn map(&self) -> &FormalMap<CoeffPoly> {
        &self.map
    }

    /// The jet coordinate `x^i_I` for a 0-based component and multi-index.
    ///
    /// # Errors
    /// [`Error::Input`] when the label lies outside the jet: bad component,
    /// wrong index length, negative entries, degree beyond the cutoff, or
    /// the constant coordinate of an origin-fixing jet.
    pub fn coordinate(&self, component: usize, index: &[i32]) -> Result<Indeterminate> {
        if component >= self.dim() || index.len() != self.dim() {
            return Err(Error::Input(format!(
                "coordinate label ({component}, {index:?}) in dimension {}",
                self.dim()
            )));
        }
        if index.iter().any(|&e| e < 0) {
            return Err(Error::Input("negative multi-index entry".into()));
        }
        let total: i32 = index.iter().sum();
        if total > self.degree() {
            return Err(Error::Input(format!(
                "multi-index of degree {total} beyond the cutoff {}",
                self.degree()
            )));
        }
        if total == 0 && !self.include_constants {
            return Err(Error::Input(
                "constant coordinate of an origin-fixing jet".into(),
            ));
        }
        Ok(Indeterminate::new(
            self.family,
            (component + 1) as u32,
            index.iter().map(|&e| e as u32).collect(),
        ))
    }
}

/// All multi-indices over `nvars` variables with total degree ≤ `max`.
fn multi_indices(nvars: usize, max: i32) -> Vec<Vec<i32>> {
    if nvars == 1 {
        return (0..=max.max(-1)).map(|k| alloc::vec![k]).collect();
    }
    let mut out = Vec::new();
    for head in 0..=max {
        for tail in multi_indices(nvars - 1, max - head) {
            let mut index = Vec::with_capacity(nvars);
            index.push(head);
            index.extend(tail);
            out.push(index);
        }
    }
    out
}

/// The tensor components `Ω^{ij}(u,v)` of a map with explicit coefficients,
/// polynomial `φ`, shared degree cutoff. The exactness certificate accounts
/// for the Jacobian losing the cutoff degree and for terms of `φ` beyond its
/// own certificate.
///
/// # Errors
/// [`Error::Domain`] for Laurent `φ`; [`Error::Shape`] on dimension or
/// cutoff mismatch.
pub fn omega_of_map<C: Coeff>(phi: &BiField<C>, map: &FormalMap<C>) -> Result<BiField<C>> {
    let n = phi.dim();
    if map.source_dim() != n || map.target_dim() != n {
        return Err(Error::Shape(format!(
            "tensor of a {n}-dimensional field on a map {}→{}",
            map.source_dim(),
            map.target_dim()
        )));
    }
    if phi.has_negative_exponents() {
        return Err(Error::Domain(
            "the group tensor of a Laurent bivector is not supported".into(),
        ));
    }
    let degree = map.truncation().max_total_degree();
    if phi.truncation().max_total_degree() != degree {
        return Err(Error::Shape(format!(
            "field cut at degree {} against a map cut at degree {degree}",
            phi.truncation().max_total_degree()
        )));
    }

    // Jacobian factors in the u- and v-blocks.
    let jac = map.jacobian()?;
    let mut ju = Vec::with_capacity(n);
    let mut jv = Vec::with_capacity(n);
    for row in &jac {
        let mut row_u = Vec::with_capacity(n);
        let mut row_v = Vec::with_capacity(n);
        for entry in row {
            row_u.push(entry.embed_block(0, 2)?);
            row_v.push(entry.embed_block(1, 2)?);
        }
        ju.push(row_u);
        jv.push(row_v);
    }

    // Substitution list (X(u), X(v)).
    let mut subs = Vec::with_capacity(2 * n);
    for component in map.components() {
        subs.push(component.embed_block(0, 2)?);
    }
    for component in map.components() {
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
                    entry = entry.add(&ju[i][k].mul(&jv[j][l])?.mul(phi.component(k, l))?)?;
                }
            }
            entry = entry.sub(&phi.component(i, j).substitute(&subs)?)?;
            row.push(entry);
        }
        components.push(row);
    }

    // Map coefficients above the cutoff are absent: they pollute the
    // Jacobian factors from the cutoff degree on and the substituted field
    // from one past it, entering the products above degree N − 1 + val(φ).
    let certified = if phi.is_zero() {
        degree
    } else {
        let v_phi = phi.valuation().unwrap_or(0).max(0);
        degree
            .min(degree - 1 + v_phi)
            .min(phi.certified_degree())
    };
    Ok(BiField::new(components)?.with_certified(certified))
}

/// The group tensor of a polynomial bivector field on a symbolic jet: the
/// coefficient of `u^I v^J` in component `(i,j)` is the bracket polynomial
/// `{x^i_I, x^j_J}`, exact through the certified degree.
///
/// # Errors
/// As [`omega_of_map`].
pub fn omega_bifield(phi: &BiField<Rational>, jet: &SymbolicJet) -> Result<BiField<CoeffPoly>> {
    let lifted = phi.map_coeffs(|c| CoeffPoly::constant(c.clone()));
    omega_of_map(&lifted, jet.map())
}

/// The bracket polynomial `{x^i_I, x^j_J}`: the coefficient of `u^I v^J` in
/// the tensor component `Ω^{ij}`.
///
/// # Errors
/// [`Error::Input`] for malformed labels or when `|I| + |J|` exceeds the
/// certified degree — extraction never silently returns a wrong polynomial.
pub fn bracket_coefficient(
    omega: &BiField<CoeffPoly>,
    i: usize,
    index_i: &[i32],
    j: usize,
    index_j: &[i32],
) -> Result<CoeffPoly> {
    let n = omega.dim();
    if i >= n || j >= n || index_i.len() != n || index_j.len() != n {
        return Err(Error::Input(format!(
            "bracket label ({i}, {index_i:?}; {j}, {index_j:?}) in dimension {n}"
        )));
    }
    if index_i.iter().chain(index_j).any(|&e| e < 0) {
        return Err(Error::Input("negative multi-index entry".into()));
    }
    let total: i32 = index_i.iter().chain(index_j).sum();
    if total > omega.certified_degree() {
        return Err(Error::Input(format!(
            "bracket of total index degree {total} beyond the certified degree {}",
            omega.certified_degree()
        )));
    }
    let mut exponents = Vec::with_capacity(2 * n);
    exponents.extend_from_slice(index_i);
    exponents.extend_from_slice(index_j);
    omega.component(i, j).coefficient(&exponents)
}

/// Left minus right side of the multiplicativity law on concrete jets:
///
/// ```text
/// Ω(X∘Y @ u,v) − Ω(X @ Y(u),Y(v)) − (X_{*Y(u)})^i_k (X_{*Y(v)})^j_l Ω^{kl}(Y @ u,v),
/// ```
///
/// identically zero through the certified degree for any polynomial `φ`.
///
/// # Errors
/// [`Error::Domain`] unless both maps fix the origin (composition with a
/// constant term cannot be exact); shape errors on mismatched dimensions.
pub fn multiplicativity_residual(
    phi: &BiField<Rational>,
    outer: &FormalMap<Rational>,
    inner: &FormalMap<Rational>,
) -> Result<BiField<Rational>> {
    let n = phi.dim();
    for map in [outer, inner] {
        if map.source_dim() != n || map.target_dim() != n {
            return Err(Error::Shape(format!(
                "multiplicativity of a {n}-dimensional field on a map {}→{}",
                map.source_dim(),
                map.target_dim()
            )));
        }
        if !map.fixes_origin()? {
            return Err(Error::Domain(
                "multiplicativity check needs origin-fixing jets".into(),
            ));
        }
    }

    let composed = outer.compose(inner)?;
    let omega_composed = omega_of_map(phi, &composed)?;
    let omega_outer = omega_of_map(phi, outer)?;
    let omega_inner = omega_of_map(phi, inner)?;

    // Substitution (Y(u), Y(v)) and the outer Jacobian factors at Y.
    let mut subs = Vec::with_capacity(2 * n);
    for component in inner.components() {
        subs.push(component.embed_block(0, 2)?);
    }
    for component in inner.components() {
        subs.push(component.embed_block(1, 2)?);
    }
    let jac = outer.jacobian()?;
    let mut ju = Vec::with_capacity(n);
    let mut jv = Vec::with_capacity(n);
    for row in &jac {
        let mut row_u = Vec::with_capacity(n);
        let mut row_v = Vec::with_capacity(n);
        for entry in row {
            let at_inner = entry.substitute(inner.components())?;
            row_u.push(at_inner.embed_block(0, 2)?);
            row_v.push(at_inner.embed_block(1, 2)?);
        }
        ju.push(row_u);
        jv.push(row_v);
    }

    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut entry = omega_composed
                .component(i, j)
                .sub(&omega_outer.component(i, j).substitute(&subs)?)?;
            for k in 0..n {
                for l in 0..n {
                    entry = entry.sub(
                        &ju[i][k]
                            .mul(&jv[j][l])?
                            .mul(omega_inner.component(k, l))?,
                    )?;
                }
            }
            row.push(entry);
        }
        components.push(row);
    }

    let certified = omega_composed
        .certified_degree()
        .min(omega_outer.certified_degree())
        .min(omega_inner.certified_degree());
    Ok(BiField::new(components)?.with_certified(certified))
}

/// The Jacobi residual `{{x_A, x_B}, x_C} + {{x_B, x_C}, x_A} +
/// {{x_C, x_A}, x_B}` on coordinate functions, each outer bracket expanded
/// through the chain rule `Σ_E (∂ω^{AB}/∂x_E) ω^{EC}`. Zero whenever the
/// underlying bivector solves the classical Yang–Baxter equation.
///
/// # Errors
/// [`Error::Input`] when a label or an intermediate bracket falls outside
/// the certified degree.
pub fn coordinate_jacobi_residual(
    omega: &BiField<CoeffPoly>,
    a: (usize, &[i32]),
    b: (usize, &[i32]),
    c: (usize, &[i32]),
) -> Result<CoeffPoly> {
    let mut residual = CoeffPoly::zero();
    for (first, second, third) in [(a, b, c), (b, c, a), (c, a, b)] {
        let outer = bracket_coefficient(omega, first.0, first.1, second.0, second.1)?;
        for coordinate in outer.support() {
            let index: Vec<i32> = coordinate.index.iter().map(|&e| e as i32).collect();
            let with_third = bracket_coefficient(
                omega,
                (coordinate.component - 1) as usize,
                &index,
                third.0,
                third.1,
            )?;
            residual = residual.add(&outer.derivative(&coordinate).mul(&with_third));
        }
    }
    Ok(residual)
}
