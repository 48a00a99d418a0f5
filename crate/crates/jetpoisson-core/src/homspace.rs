//! Induced Poisson structures on the spaces the diffeomorphism groups act
//! on: the base space and the space of jets of maps between two base spaces.
//!
//! A skew bivector field `φ^{ij}(u,v)` on a group of formal maps restricts
//! along the diagonal to a bivector `α^{ij}(u) = −φ^{ij}(u,u)` on the base
//! space, Poisson whenever `φ` solves the classical Yang–Baxter equation.
//! Between two base spaces, a pair of fields `φ_m`, `φ_n` induces on jets of
//! maps `F` the bivector
//!
//! ```text
//! Π^{ij}(u,v) = (F_{*u})^i_μ (F_{*v})^j_ν φ_m^{μν}(u,v) − φ_n^{ij}(F(u), F(v)),
//! ```
//!
//! compatible with the two-sided action `F ↦ Y ∘ F ∘ X^{-1}`; its Jacobi
//! identity is equivalent to the Yang–Baxter invariant of `φ_m` pushing
//! forward to that of `φ_n` along `F`, which [`pi_jacobi_certificate`]
//! checks from both ends.

use alloc::format;
use alloc::vec::Vec;

use crate::bialgebra::{self, BiField, TriField};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::grouppoisson::omega_of_map;
use crate::jetgroup::FormalMap;
use crate::rational::Rational;
use crate::series::{Series, Truncation};

/// A skew bivector field `α^{ij}(u)` on the base space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiVectorOnSpace<C: Coeff> {
    components: Vec<Vec<Series<C>>>,
    certified: i32,
}

impl<C: Coeff> BiVectorOnSpace<C> {
    /// Wraps an `n×n` table of series in `n` variables.
    ///
    /// # Errors
    /// [`Error::Shape`] for ragged tables, wrong variable counts, mixed
    /// rings, or a table violating `α^{ij} = −α^{ji}`.
    pub fn new(components: Vec<Vec<Series<C>>>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::Shape("empty bivector table".into()));
        }
        let trunc = components[0][0].truncation().clone();
        if trunc.nvars() != n {
            return Err(Error::Shape(format!(
                "{n}-dimensional bivector over {} variables",
                trunc.nvars()
            )));
        }
        for row in &components {
            if row.len() != n {
                return Err(Error::Shape("ragged bivector table".into()));
            }
            for entry in row {
                if !entry.truncation().compatible(&trunc) {
                    return Err(Error::Shape(
                        "bivector components live in different rings".into(),
                    ));
                }
            }
        }
        for (i, row) in components.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if *entry != components[j][i].neg() {
                    return Err(Error::Shape(format!(
                        "bivector table is not skew at ({i}, {j})"
                    )));
                }
            }
        }
        let certified = trunc.max_total_degree();
        Ok(BiVectorOnSpace {
            components,
            certified,
        })
    }

    /// Dimension of the base space.
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// The component `α^{ij}`.
    pub fn component(&self, i: usize, j: usize) -> &Series<C> {
        &self.components[i][j]
    }

    /// The component table.
    pub fn components(&self) -> &[Vec<Series<C>>] {
        &self.components
    }

    /// The common ring of the components.
    pub fn truncation(&self) -> &Truncation {
        self.components[0][0].truncation()
    }

    /// Degree through which the components are exact.
    pub fn certified_degree(&self) -> i32 {
        self.certified
    }

    /// The same field with a tightened exactness certificate.
    #[must_use]
    pub fn with_certified(mut self, certified: i32) -> Self {
        self.certified = certified.min(self.truncation().max_total_degree());
        self
    }

    /// Least total degree over all components, `None` when zero.
    pub fn valuation(&self) -> Option<i32> {
        self.components
            .iter()
            .flatten()
            .filter_map(Series::valuation)
            .min()
    }

    /// True when every component is the zero series.
    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(Series::is_zero)
    }

    /// True when some component has a term with a negative exponent.
    pub fn has_negative_exponents(&self) -> bool {
        self.components
            .iter()
            .flatten()
            .flat_map(Series::terms)
            .any(|(exponents, _)| exponents.iter().any(|&e| e < 0))
    }

    /// True when no component has a term of total degree ≤ `degree`.
    pub fn vanishes_through(&self, degree: i32) -> bool {
        self.components
            .iter()
            .flatten()
            .flat_map(Series::terms)
            .all(|(exponents, _)| exponents.iter().sum::<i32>() > degree)
    }

    /// True when the field vanishes through its certified degree.
    pub fn is_certified_zero(&self) -> bool {
        self.vanishes_through(self.certified)
    }
}

/// Triple-index residual `J^{ijk}(u)` on the base space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriVectorOnSpace<C: Coeff> {
    components: Vec<Vec<Vec<Series<C>>>>,
    certified: i32,
}

impl<C: Coeff> TriVectorOnSpace<C> {
    /// Dimension of the base space.
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// The component `J^{ijk}`.
    pub fn component(&self, i: usize, j: usize, k: usize) -> &Series<C> {
        &self.components[i][j][k]
    }

    /// Degree through which the components are exact.
    pub fn certified_degree(&self) -> i32 {
        self.certified
    }

    /// True when every component is the zero series.
    pub fn is_zero(&self) -> bool {
        self.components
            .iter()
            .flatten()
            .flatten()
            .all(Series::is_zero)
    }

    /// True when no component has a term of total degree ≤ `degree`.
    pub fn vanishes_through(&self, degree: i32) -> bool {
        self.components
            .iter()
            .flatten()
            .flatten()
            .flat_map(Series::terms)
            .all(|(exponents, _)| exponents.iter().sum::<i32>() > degree)
    }

    /// True when the residual vanishes through its certified degree.
    pub fn is_certified_zero(&self) -> bool {
        self.vanishes_through(self.certified)
    }
}

/// Bivector field `Π^{ij}(u,v)` on jets of maps from an `m`- to an
/// `n`-dimensional space: `n×n` components in `2m` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetBiField<C: Coeff> {
    source_dim: usize,
    components: Vec<Vec<Series<C>>>,
    certified: i32,
}

impl<C: Coeff> JetBiField<C> {
    /// Wraps an `n×n` table of series in `2·source_dim` variables.
    ///
    /// # Errors
    /// [`Error::Shape`] for ragged tables, wrong variable counts, or mixed
    /// rings.
    pub fn new(source_dim: usize, components: Vec<Vec<Series<C>>>) -> Result<Self> {
        let n = components.len();
        if n == 0 || source_dim == 0 {
            return Err(Error::Shape("empty jet bivector".into()));
        }
        let trunc = components[0][0].truncation().clone();
        if trunc.nvars() != 2 * source_dim {
            return Err(Error::Shape(format!(
                "jet bivector from a {source_dim}-dimensional source over {} variables",
                trunc.nvars()
            )));
        }
        for row in &components {
            if row.len() != n {
                return Err(Error::Shape("ragged jet bivector table".into()));
            }
            for entry in row {
                if !entry.truncation().compatible(&trunc) {
                    return Err(Error::Shape(
                        "jet bivector components live in different rings".into(),
                    ));
                }
            }
        }
        let certified = trunc.max_total_degree();
        Ok(JetBiField {
            source_dim,
            components,
            certified,
        })
    }

    /// Dimension of the source space.
    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    /// Dimension of the target space.
    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    /// The component `Π^{ij}`.
    pub fn component(&self, i: usize, j: usize) -> &Series<C> {
        &self.components[i][j]
    }

    /// The component table.
    pub fn components(&self) -> &[Vec<Series<C>>] {
        &self.components
    }

    /// The common ring of the components.
    pub fn truncation(&self) -> &Truncation {
        self.components[0][0].truncation()
    }

    /// Degree through which the components are exact.
    pub fn certified_degree(&self) -> i32 {
        self.certified
    }

    /// The same field with a tightened exactness certificate.
    #[must_use]
    pub fn with_certified(mut self, certified: i32) -> Self {
        self.certified = certified.min(self.truncation().max_total_degree());
        self
    }

    /// True when every component is the zero series.
    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(Series::is_zero)
    }

    /// True when no component has a term of total degree ≤ `degree`.
    pub fn vanishes_through(&self, degree: i32) -> bool {
        self.components
            .iter()
            .flatten()
            .flat_map(Series::terms)
            .all(|(exponents, _)| exponents.iter().sum::<i32>() > degree)
    }

    /// True when the field vanishes through its certified degree.
    pub fn is_certified_zero(&self) -> bool {
        self.vanishes_through(self.certified)
    }

    /// True when `Π^{ij}(u,v) = −Π^{ji}(v,u)` for all stored terms.
    ///
    /// # Errors
    /// Shape errors only (internally consistent inputs do not error).
    pub fn is_skew(&self) -> Result<bool> {
        let m = self.source_dim;
        let n = self.target_dim();
        for i in 0..n {
            for j in 0..n {
                let swapped = self.components[j][i].place_blocks(m, &[1, 0], 2)?;
                if self.components[i][j] != swapped.neg() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The bivector induced on the base space by the diagonal restriction
/// `α^{ij}(u) = −φ^{ij}(u,u)`.
///
/// # Errors
/// [`Error::Domain`] unless `φ` is skew.
pub fn induced_alpha<C: Coeff>(phi: &BiField<C>) -> Result<BiVectorOnSpace<C>> {
    if !phi.is_skew()? {
        return Err(Error::Domain(
            "the diagonal restriction needs a skew field".into(),
        ));
    }
    let n = phi.dim();
    let mut var_map = Vec::with_capacity(2 * n);
    for _ in 0..2 {
        var_map.extend(0..n);
    }
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(phi.component(i, j).map_vars(n, &var_map)?.neg());
        }
        components.push(row);
    }
    Ok(BiVectorOnSpace::new(components)?.with_certified(phi.certified_degree()))
}

/// The Jacobi residual `J^{ijk} = Σ_s [α^{ks}∂_sα^{ij} + α^{is}∂_sα^{jk} +
/// α^{js}∂_sα^{ki}]`, identically zero exactly when `α` is Poisson.
///
/// # Errors
/// Shape errors only (internally consistent inputs do not error).
pub fn alpha_jacobi_residual<C: Coeff>(
    alpha: &BiVectorOnSpace<C>,
) -> Result<TriVectorOnSpace<C>> {
    let n = alpha.dim();
    let trunc = alpha.truncation().clone();

    let mut derivatives = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut per_var = Vec::with_capacity(n);
            for s in 0..n {
                per_var.push(alpha.component(i, j).partial_derivative(s)?);
            }
            row.push(per_var);
        }
        derivatives.push(row);
    }

    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut plane = Vec::with_capacity(n);
        for j in 0..n {
            let mut line = Vec::with_capacity(n);
            for k in 0..n {
                let mut entry = Series::zero(trunc.clone());
                for s in 0..n {
                    entry = entry.add(&alpha.component(k, s).mul(&derivatives[i][j][s])?)?;
                    entry = entry.add(&alpha.component(i, s).mul(&derivatives[j][k][s])?)?;
                    entry = entry.add(&alpha.component(j, s).mul(&derivatives[k][i][s])?)?;
                }
                line.push(entry);
            }
            plane.push(line);
        }
        components.push(plane);
    }

    let degree = trunc.max_total_degree();
    let certified = if alpha.is_zero() {
        degree
    } else {
        let valuation = alpha.valuation().unwrap_or(0);
        degree.min(alpha.certified_degree() + valuation - 1)
    };
    Ok(TriVectorOnSpace {
        components,
        certified,
    })
}

/// Residual of the compatibility between the group action on the base space
/// and the two Poisson structures:
///
/// ```text
/// α^{ij}(X(u)) − Ω^{ij}(j^∞_u X, j^∞_u X) − (X_{*u})^i_k (X_{*u})^j_l α^{kl}(u),
/// ```
///
/// identically zero through the certified degree when `α` is the diagonal
/// restriction of `φ`.
///
/// # Errors
/// [`Error::Domain`] for Laurent inputs or a map not fixing the origin;
/// shape errors on mismatched dimensions or cutoffs.
pub fn alpha_action_residual(
    alpha: &BiVectorOnSpace<Rational>,
    phi: &BiField<Rational>,
    map: &FormalMap<Rational>,
) -> Result<BiVectorOnSpace<Rational>> {
    let n = alpha.dim();
    if phi.dim() != n || map.source_dim() != n || map.target_dim() != n {
        return Err(Error::Shape(
            "action residual needs one dimension across field, bivector, and map".into(),
        ));
    }
    if alpha.has_negative_exponents() || phi.has_negative_exponents() {
        return Err(Error::Domain(
            "action residual of Laurent inputs is not supported".into(),
        ));
    }
    if !map.fixes_origin()? {
        return Err(Error::Domain(
            "action residual needs an origin-fixing map".into(),
        ));
    }
    let degree = alpha.truncation().max_total_degree();
    if map.truncation().max_total_degree() != degree
        || phi.truncation().max_total_degree() != degree
    {
        return Err(Error::Shape(
            "action residual needs one degree cutoff across all inputs".into(),
        ));
    }

    // Ω^{ij}(j_u X, j_v X) restricted to the diagonal v := u.
    let omega = omega_of_map(phi, map)?;
    let mut var_map = Vec::with_capacity(2 * n);
    for _ in 0..2 {
        var_map.extend(0..n);
    }

    let jac = map.jacobian()?;
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut entry = alpha.component(i, j).substitute(map.components())?;
            entry = entry.sub(&omega.component(i, j).map_vars(n, &var_map)?)?;
            for k in 0..n {
                for l in 0..n {
                    entry = entry.sub(
                        &jac[i][k].mul(&jac[j][l])?.mul(alpha.component(k, l))?,
                    )?;
                }
            }
            row.push(entry);
        }
        components.push(row);
    }

    let mut certified = degree.min(alpha.certified_degree()).min(
        omega.certified_degree(),
    );
    if !alpha.is_zero() {
        certified = certified.min(degree - 1 + alpha.valuation().unwrap_or(0).max(0));
    }
    Ok(BiVectorOnSpace::new(components)?.with_certified(certified))
}

/// The bivector induced on jets of maps `F` from a field on each side:
/// `Π^{ij}(u,v) = (F_{*u})^i_μ (F_{*v})^j_ν φ_m^{μν}(u,v) − φ_n^{ij}(F(u),
/// F(v))`.
///
/// `φ_n` is treated as complete polynomial data; Laurent `φ_n` needs unit
/// map components and otherwise errors.
///
/// # Errors
/// Shape errors on mismatched dimensions or cutoffs; [`Error::Unit`] when a
/// Laurent substitution has no unit to invert.
pub fn jet_pi<C: Coeff>(
    map: &FormalMap<C>,
    phi_source: &BiField<C>,
    phi_target: &BiField<C>,
) -> Result<JetBiField<C>> {
    let m = map.source_dim();
    let n = map.target_dim();
    if phi_source.dim() != m || phi_target.dim() != n {
        return Err(Error::Shape(format!(
            "jet bivector of a map {m}→{n} from fields of dimensions {} and {}",
            phi_source.dim(),
            phi_target.dim()
        )));
    }
    let degree = map.truncation().max_total_degree();
    if phi_source.truncation().max_total_degree() != degree
        || phi_target.truncation().max_total_degree() != degree
    {
        return Err(Error::Shape(
            "jet bivector needs one degree cutoff across all inputs".into(),
        ));
    }

    let jac = map.jacobian()?;
    let mut ju = Vec::with_capacity(n);
    let mut jv = Vec::with_capacity(n);
    for row in &jac {
        let mut row_u = Vec::with_capacity(m);
        let mut row_v = Vec::with_capacity(m);
        for entry in row {
            row_u.push(entry.embed_block(0, 2)?);
            row_v.push(entry.embed_block(1, 2)?);
        }
        ju.push(row_u);
        jv.push(row_v);
    }

    let mut subs = Vec::with_capacity(2 * n);
    for component in map.components() {
        subs.push(component.embed_block(0, 2)?);
    }
    for component in map.components() {
        subs.push(component.embed_block(1, 2)?);
    }

    let trunc = ju[0][0].truncation().clone();
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut entry = Series::zero(trunc.clone());
            for mu in 0..m {
                for nu in 0..m {
                    entry = entry.add(&bialgebra::product3(
                        &ju[i][mu],
                        &jv[j][nu],
                        phi_source.component(mu, nu),
                    )?)?;
                }
            }
            entry = entry.sub(&phi_target.component(i, j).substitute(&subs)?)?;
            row.push(entry);
        }
        components.push(row);
    }

    let certified = if phi_source.is_zero() {
        degree.min(phi_target.certified_degree())
    } else {
        degree
            .min(degree - 1 + phi_source.valuation().unwrap_or(0))
            .min(phi_source.certified_degree())
            .min(phi_target.certified_degree())
    };
    Ok(JetBiField::new(m, components)?.with_certified(certified))
}

/// Left minus right side of the compatibility law for the two-sided action
/// `F ↦ F̄ = Y ∘ F ∘ X^{-1}` on jets:
///
/// ```text
/// Π(j F̄ @ u,v) − (Y_{*F∘X̄(u)})(Y_{*F∘X̄(v)}) Π(j F @ X̄(u),X̄(v))
///   − (Y_* F_*)(Y_* F_*) Ω_m(j X̄ @ u,v) − Ω_n(j Y @ F∘X̄(u), F∘X̄(v)),
/// ```
///
/// with `Π` induced by the field pair and `Ω` the group tensors; zero
/// through the certified degree for any polynomial fields.
///
/// # Errors
/// [`Error::Domain`] for Laurent fields or maps with constant terms; shape
/// errors on mismatched dimensions; [`Error::Unit`] for non-invertible maps.
pub fn jet_action_residual(
    phi_source: &BiField<Rational>,
    phi_target: &BiField<Rational>,
    source_map: &FormalMap<Rational>,
    target_map: &FormalMap<Rational>,
    jet: &FormalMap<Rational>,
) -> Result<JetBiField<Rational>> {
    let m = jet.source_dim();
    let n = jet.target_dim();
    if source_map.source_dim() != m
        || source_map.target_dim() != m
        || target_map.source_dim() != n
        || target_map.target_dim() != n
    {
        return Err(Error::Shape(
            "action residual needs group elements on each side of the jet".into(),
        ));
    }
    if phi_source.has_negative_exponents() || phi_target.has_negative_exponents() {
        return Err(Error::Domain(
            "action residual of Laurent fields is not supported".into(),
        ));
    }
    if !jet.fixes_origin()? {
        return Err(Error::Domain(
            "action residual needs an origin-fixing jet".into(),
        ));
    }

    let inverse = source_map.invert()?;
    let moved = jet.compose(&inverse)?;
    let transformed = target_map.compose(&moved)?;

    let left = jet_pi(&transformed, phi_source, phi_target)?;
    let pi = jet_pi(jet, phi_source, phi_target)?;

    // Y_* at F∘X̄, in the u- and v-blocks.
    let target_jac = target_map.jacobian()?;
    let mut yu = Vec::with_capacity(n);
    let mut yv = Vec::with_capacity(n);
    let mut y_at_moved = Vec::with_capacity(n);
    for row in &target_jac {
        let mut row_at = Vec::with_capacity(n);
        let mut row_u = Vec::with_capacity(n);
        let mut row_v = Vec::with_capacity(n);
        for entry in row {
            let at_moved = entry.substitute(moved.components())?;
            row_u.push(at_moved.embed_block(0, 2)?);
            row_v.push(at_moved.embed_block(1, 2)?);
            row_at.push(at_moved);
        }
        yu.push(row_u);
        yv.push(row_v);
        y_at_moved.push(row_at);
    }

    // Π(j F) at (X̄(u), X̄(v)).
    let mut inverse_blocks = Vec::with_capacity(2 * m);
    for component in inverse.components() {
        inverse_blocks.push(component.embed_block(0, 2)?);
    }
    for component in inverse.components() {
        inverse_blocks.push(component.embed_block(1, 2)?);
    }
    let mut pi_at_inverse = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(pi.component(i, j).substitute(&inverse_blocks)?);
        }
        pi_at_inverse.push(row);
    }

    // Chain factors (Y_{*F∘X̄})(F_{*X̄}) in each block.
    let jet_jac = jet.jacobian()?;
    let mut jet_jac_at = Vec::with_capacity(n);
    for row in &jet_jac {
        let mut row_at = Vec::with_capacity(m);
        for entry in row {
            row_at.push(entry.substitute(inverse.components())?);
        }
        jet_jac_at.push(row_at);
    }
    let plain = inverse.components()[0].truncation().clone();
    let mut chain_u = Vec::with_capacity(n);
    let mut chain_v = Vec::with_capacity(n);
    for i in 0..n {
        let mut row_u = Vec::with_capacity(m);
        let mut row_v = Vec::with_capacity(m);
        for sigma in 0..m {
            let mut entry = Series::zero(plain.clone());
            for k in 0..n {
                entry = entry.add(&y_at_moved[i][k].mul(&jet_jac_at[k][sigma])?)?;
            }
            row_u.push(entry.embed_block(0, 2)?);
            row_v.push(entry.embed_block(1, 2)?);
        }
        chain_u.push(row_u);
        chain_v.push(row_v);
    }

    // Ω_m at jets of X̄ and Ω_n at jets of Y moved to (F∘X̄(u), F∘X̄(v)).
    let omega_source = omega_of_map(phi_source, &inverse)?;
    let omega_target = omega_of_map(phi_target, target_map)?;
    let mut moved_blocks = Vec::with_capacity(2 * n);
    for component in moved.components() {
        moved_blocks.push(component.embed_block(0, 2)?);
    }
    for component in moved.components() {
        moved_blocks.push(component.embed_block(1, 2)?);
    }

    let trunc = left.truncation().clone();
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut entry = left.component(i, j).clone();
            for k in 0..n {
                for l in 0..n {
                    entry = entry.sub(
                        &yu[i][k].mul(&yv[j][l])?.mul(&pi_at_inverse[k][l])?,
                    )?;
                }
            }
            for sigma in 0..m {
                for rho in 0..m {
                    entry = entry.sub(
                        &chain_u[i][sigma]
                            .mul(&chain_v[j][rho])?
                            .mul(omega_source.component(sigma, rho))?,
                    )?;
                }
            }
            entry = entry.sub(&omega_target.component(i, j).substitute(&moved_blocks)?)?;
            debug_assert_eq!(entry.truncation().nvars(), trunc.nvars());
            row.push(entry);
        }
        components.push(row);
    }

    let degree = trunc.max_total_degree();
    let mut certified = degree
        .min(left.certified_degree())
        .min(pi.certified_degree())
        .min(omega_source.certified_degree())
        .min(omega_target.certified_degree());
    for phi in [phi_source, phi_target] {
        if !phi.is_zero() {
            certified = certified.min(degree - 1 + phi.valuation().unwrap_or(0).max(0));
        }
    }
    Ok(JetBiField::new(m, components)?.with_certified(certified))
}

/// Both ends of the equivalence between the Jacobi identity for the induced
/// jet bivector and the push-forward law for the Yang–Baxter invariants: the
/// target invariant at `(F(u), F(v), F(w))` against the source invariant
/// contracted with three Jacobian factors.
#[derive(Debug, Clone)]
pub struct PiJacobiReport {
    /// Yang–Baxter residual of the source field.
    pub source_residual: TriField<Rational>,
    /// Yang–Baxter residual of the target field.
    pub target_residual: TriField<Rational>,
    /// The target invariant moved to the source: `Φ_n(F(u), F(v), F(w))`.
    pub left: Vec<Vec<Vec<Series<Rational>>>>,
    /// The source invariant pushed forward:
    /// `(F_{*u})^i_μ (F_{*v})^j_ν (F_{*w})^k_σ Φ_m^{μνσ}(u,v,w)`.
    pub right: Vec<Vec<Vec<Series<Rational>>>>,
}

impl PiJacobiReport {
    /// True when both Yang–Baxter residuals vanish through their certified
    /// degrees, which certifies the Jacobi identity for the jet bivector.
    pub fn certified(&self) -> bool {
        self.source_residual.is_certified_zero() && self.target_residual.is_certified_zero()
    }

    /// True when the two sides of the push-forward law agree term by term.
    pub fn sides_agree(&self) -> bool {
        self.left == self.right
    }
}

/// Computes the Jacobi certificate for the induced jet bivector of a map.
///
/// # Errors
/// Propagates shape and skewness errors from the residual computations.
pub fn pi_jacobi_certificate(
    map: &FormalMap<Rational>,
    phi_source: &BiField<Rational>,
    phi_target: &BiField<Rational>,
) -> Result<PiJacobiReport> {
    let m = map.source_dim();
    let n = map.target_dim();
    if phi_source.dim() != m || phi_target.dim() != n {
        return Err(Error::Shape(format!(
            "certificate of a map {m}→{n} from fields of dimensions {} and {}",
            phi_source.dim(),
            phi_target.dim()
        )));
    }
    let source_residual = bialgebra::cybe_residual(phi_source)?;
    let target_residual = bialgebra::cybe_residual(phi_target)?;

    // Left: Φ_n(F(u), F(v), F(w)).
    let mut subs = Vec::with_capacity(3 * n);
    for block in 0..3 {
        for component in map.components() {
            subs.push(component.embed_block(block, 3)?);
        }
    }
    let mut left = Vec::with_capacity(n);
    for i in 0..n {
        let mut plane = Vec::with_capacity(n);
        for j in 0..n {
            let mut line = Vec::with_capacity(n);
            for k in 0..n {
                line.push(target_residual.component(i, j, k).substitute(&subs)?);
            }
            plane.push(line);
        }
        left.push(plane);
    }

    // Right: three Jacobian factors against Φ_m.
    let jac = map.jacobian()?;
    let mut jac_blocks = Vec::with_capacity(3);
    for block in 0..3 {
        let mut rows = Vec::with_capacity(n);
        for row in &jac {
            let mut embedded = Vec::with_capacity(m);
            for entry in row {
                embedded.push(entry.embed_block(block, 3)?);
            }
            rows.push(embedded);
        }
        jac_blocks.push(rows);
    }
    let trunc = jac_blocks[0][0][0].truncation().clone();
    let mut right = Vec::with_capacity(n);
    for i in 0..n {
        let mut plane = Vec::with_capacity(n);
        for j in 0..n {
            let mut line = Vec::with_capacity(n);
            for k in 0..n {
                let mut entry = Series::zero(trunc.clone());
                for mu in 0..m {
                    for nu in 0..m {
                        for sigma in 0..m {
                            let tail = jac_blocks[2][k][sigma]
                                .mul(source_residual.component(mu, nu, sigma))?;
                            entry = entry.add(&bialgebra::product3(
                                &jac_blocks[0][i][mu],
                                &jac_blocks[1][j][nu],
                                &tail,
                            )?)?;
                        }
                    }
                }
                line.push(entry);
            }
            plane.push(line);
        }
        right.push(plane);
    }

    Ok(PiJacobiReport {
        source_residual,
        target_residual,
        left,
        right,
    })
}

/// Outcome of comparing a computed base-space bivector against a displayed
/// component table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaComparison {
    /// Tables agree term by term.
    ExactMatch,
    /// Display equals the computed field times one nonzero constant.
    ConstantFactor(Rational),
    /// Display equals the transposed computed field times one nonzero
    /// constant.
    TransposedConstantFactor(Rational),
    /// No single-constant relation holds.
    Mismatch,
}

/// Compares a computed bivector with a displayed table, tolerating one
/// overall constant and an index transposition — the two normalization
/// conventions that differ between sources.
pub fn compare_alpha(
    computed: &BiVectorOnSpace<Rational>,
    display: &[Vec<Series<Rational>>],
) -> AlphaComparison {
    let n = computed.dim();
    if display.len() != n || display.iter().any(|row| row.len() != n) {
        return AlphaComparison::Mismatch;
    }
    let matches = |factor: &Rational, transpose: bool| -> bool {
        for i in 0..n {
            for j in 0..n {
                let base = if transpose {
                    computed.component(j, i)
                } else {
                    computed.component(i, j)
                };
                if display[i][j] != base.scale(factor) {
                    return false;
                }
            }
        }
        true
    };
    let leading_factor = |transpose: bool| -> Option<Rational> {
        for i in 0..n {
            for j in 0..n {
                let base = if transpose {
                    computed.component(j, i)
                } else {
                    computed.component(i, j)
                };
                if let Some((exponents, coefficient)) = base.terms().next() {
                    let shown = display[i][j].coefficient(exponents).ok()?;
                    if shown.is_zero() {
                        return None;
                    }
                    return Some(shown / coefficient);
                }
            }
        }
        None
    };
    if matches(&Rational::one(), false) {
        return AlphaComparison::ExactMatch;
    }
    if let Some(factor) = leading_factor(false) {
        if matches(&factor, false) {
            return AlphaComparison::ConstantFactor(factor);
        }
    }
    if let Some(factor) = leading_factor(true) {
        if matches(&factor, true) {
            return AlphaComparison::TransposedConstantFactor(factor);
        }
    }
    AlphaComparison::Mismatch
}
