//! Skew bi-vector fields on pairs of formal points and their Yang–Baxter
//! calculus.
//!
//! Objects here live over the Lie algebra of formal vector fields in `n`
//! variables. A *bi-field* `φ^{ij}(u, v)` — an n×n table of series in two
//! point blocks `u` and `v` — is a candidate triangular r-matrix once it is
//! skew, `φ^{ij}(u,v) = −φ^{ji}(v,u)`. The module constructs such fields
//! from generator tuples `F¹..Fⁿ`,
//!
//! ```text
//! φ^{ij}(u,v) = Σ_{k,l} (F_{*u}^{-1})^i_k (F_{*v}^{-1})^j_l [F^k(u) − F^l(v)],
//! ```
//!
//! and from Θ/Ψ tuples, `φ^{ij}(u,v) = Θ^i(u)Ψ^j(v) − Θ^j(v)Ψ^i(u)`. The
//! Yang–Baxter residual `Φ^{ijk}(u,v,w)` of [`cybe_residual`] vanishes
//! exactly when a skew bi-field solves the classical Yang–Baxter equation,
//! and the coboundary machinery — vector-field bracket, ad-action on
//! bi-fields, cocycle identity, invariance residual of the generalized
//! equation — measures equivariance of everything under formal
//! diffeomorphisms. The `w1_*` functions specialize to one variable, where
//! every solution is `(1/F′(u))(1/F′(v))[F(u) − F(v)]` and the canonical
//! orbit representatives are `(1/d²)u^{d+1}v^{d+1}(v^{−d} − u^{−d})` with
//! `d ∈ Z₊ ∪ {−1}`.
//!
//! Residual-producing operations record a *certified degree*: the total
//! degree through which the result's coefficients agree with the
//! untruncated computation, taking the inputs as exact data. Checking a
//! residual means checking that it vanishes through its certified degree.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::matrix;
use crate::rational::{ratio, Rational};
use crate::series::{Series, Truncation};

/// A formal vector field `Σ_i 𝒳^i(u) ∂_i`: `n` series in `n` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField<C: Coeff> {
    components: Vec<Series<C>>,
}

/// An n×n table `φ^{ij}(u,v)` of series in `2n` variables (`u` block first,
/// then `v` block), together with its certified degree.
///
/// Equality compares components only; the certified degree is bookkeeping.
#[derive(Debug, Clone)]
pub struct BiField<C: Coeff> {
    components: Vec<Vec<Series<C>>>,
    certified: i32,
}

/// An n×n×n table `Φ^{ijk}(u,v,w)` of series in `3n` variables (`u`, `v`,
/// `w` blocks), with a certified degree. Produced as a residual.
#[derive(Debug, Clone)]
pub struct TriField<C: Coeff> {
    components: Vec<Vec<Vec<Series<C>>>>,
    certified: i32,
}

/// A tuple of `n` (Laurent) series `F¹..Fⁿ` in `n` variables whose Jacobian
/// determinant is a unit, the data from which an r-matrix is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorTuple<C: Coeff> {
    components: Vec<Series<C>>,
}

/// A pair of `n`-tuples `Θ`, `Ψ` with scalars `α`, `β`; the sufficient
/// condition for `Θ^i(u)Ψ^j(v) − Θ^j(v)Ψ^i(u)` to solve the Yang–Baxter
/// equation is the vanishing of [`theta_psi_residual`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaPsiPair<C: Coeff> {
    pub theta: Vec<Series<C>>,
    pub psi: Vec<Series<C>>,
    pub alpha: C,
    pub beta: C,
}

fn check_tuple<C: Coeff>(components: &[Series<C>], what: &str) -> Result<()> {
    let n = components.len();
    if n == 0 {
        return Err(Error::Input(format!("empty {what}")));
    }
    for series in components {
        if series.nvars() != n {
            return Err(Error::Shape(format!(
                "{what} of {n} components needs {n}-variable entries, found {}",
                series.nvars()
            )));
        }
        if !series.truncation().compatible(components[0].truncation()) {
            return Err(Error::Shape(format!(
                "{what} entries live in incompatible rings"
            )));
        }
    }
    Ok(())
}

fn tuple_valuation<C: Coeff>(components: &[Series<C>]) -> Option<i32> {
    components.iter().filter_map(Series::valuation).min()
}

impl<C: Coeff> VectorField<C> {
    /// Wraps `n` series in `n` variables as a vector field.
    ///
    /// # Errors
    /// [`Error::Input`]/[`Error::Shape`] for an empty tuple, a component
    /// whose variable count differs from the tuple length, or mismatched
    /// rings.
    pub fn new(components: Vec<Series<C>>) -> Result<Self> {
        check_tuple(&components, "vector field")?;
        Ok(VectorField { components })
    }

    /// Number of variables (and components).
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// The component series.
    pub fn components(&self) -> &[Series<C>] {
        &self.components
    }

    /// Component `i`.
    pub fn component(&self, i: usize) -> &Series<C> {
        &self.components[i]
    }

    /// The common ring.
    pub fn truncation(&self) -> &Truncation {
        self.components[0].truncation()
    }

    /// Least total degree over all components, `None` when zero.
    pub fn valuation(&self) -> Option<i32> {
        tuple_valuation(&self.components)
    }
}

impl<C: Coeff> GeneratorTuple<C> {
    /// Wraps `n` series as a generator tuple, checking that the Jacobian
    /// determinant is a unit of the ring.
    ///
    /// # Errors
    /// Shape errors as in [`VectorField::new`]; [`Error::Unit`] when the
    /// Jacobian determinant has no invertible leading monomial.
    pub fn new(components: Vec<Series<C>>) -> Result<Self> {
        check_tuple(&components, "generator tuple")?;
        let tuple = GeneratorTuple { components };
        let det = matrix::determinant(&tuple.jacobian()?)?;
        det.invert_unit().map_err(|err| {
            Error::Unit(format!("generator tuple has a singular Jacobian: {err}"))
        })?;
        Ok(tuple)
    }

    /// Number of variables (and components).
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// The component series.
    pub fn components(&self) -> &[Series<C>] {
        &self.components
    }

    /// The common ring.
    pub fn truncation(&self) -> &Truncation {
        self.components[0].truncation()
    }

    /// The Jacobian matrix `(∂F^i/∂u^k)_{ik}`.
    ///
    /// # Errors
    /// Propagates differentiation shape errors.
    pub fn jacobian(&self) -> Result<Vec<Vec<Series<C>>>> {
        let n = self.dim();
        let mut rows = Vec::with_capacity(n);
        for component in &self.components {
            let mut row = Vec::with_capacity(n);
            for k in 0..n {
                row.push(component.partial_derivative(k)?);
            }
            rows.push(row);
        }
        Ok(rows)
    }
}

impl<C: Coeff> ThetaPsiPair<C> {
    /// Wraps the `Θ`/`Ψ` tuples and scalars, checking shapes.
    ///
    /// # Errors
    /// Shape errors as in [`VectorField::new`]; the two tuples must have the
    /// same length and ring.
    pub fn new(theta: Vec<Series<C>>, psi: Vec<Series<C>>, alpha: C, beta: C) -> Result<Self> {
        check_tuple(&theta, "Θ tuple")?;
        check_tuple(&psi, "Ψ tuple")?;
        if theta.len() != psi.len()
            || !theta[0].truncation().compatible(psi[0].truncation())
        {
            return Err(Error::Shape(
                "Θ and Ψ tuples must share length and ring".into(),
            ));
        }
        Ok(ThetaPsiPair {
            theta,
            psi,
            alpha,
            beta,
        })
    }

    /// Number of variables (and components per tuple).
    pub fn dim(&self) -> usize {
        self.theta.len()
    }
}

impl<C: Coeff> PartialEq for BiField<C> {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl<C: Coeff> Eq for BiField<C> {}

impl<C: Coeff> BiField<C> {
    /// Wraps an n×n table of series in `2n` variables. The certified degree
    /// starts at the ring's degree cutoff (exact data).
    ///
    /// # Errors
    /// [`Error::Input`]/[`Error::Shape`] for an empty or ragged table,
    /// components not in `2n` variables, or mismatched rings.
    pub fn new(components: Vec<Vec<Series<C>>>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::Input("empty bi-field".into()));
        }
        for row in &components {
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "bi-field rows must have {n} entries, found {}",
                    row.len()
                )));
            }
            for entry in row {
                if entry.nvars() != 2 * n {
                    return Err(Error::Shape(format!(
                        "bi-field of dimension {n} needs {}-variable entries, found {}",
                        2 * n,
                        entry.nvars()
                    )));
                }
                if !entry.truncation().compatible(components[0][0].truncation()) {
                    return Err(Error::Shape(
                        "bi-field entries live in incompatible rings".into(),
                    ));
                }
            }
        }
        let certified = components[0][0].max_total_degree();
        Ok(BiField {
            components,
            certified,
        })
    }

    /// The zero bi-field of dimension `n` over a `2n`-variable ring.
    ///
    /// # Errors
    /// [`Error::Shape`] if the ring does not have `2n` variables.
    pub fn zero(n: usize, trunc: Truncation) -> Result<Self> {
        if trunc.nvars() != 2 * n {
            return Err(Error::Shape(format!(
                "zero bi-field of dimension {n} needs a {}-variable ring",
                2 * n
            )));
        }
        let components = vec![vec![Series::zero(trunc.clone()); n]; n];
        BiField::new(components)
    }

    /// Dimension `n`.
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Component `φ^{ij}`.
    pub fn component(&self, i: usize, j: usize) -> &Series<C> {
        &self.components[i][j]
    }

    /// All components, row-major.
    pub fn components(&self) -> &[Vec<Series<C>>] {
        &self.components
    }

    /// The common `2n`-variable ring.
    pub fn truncation(&self) -> &Truncation {
        self.components[0][0].truncation()
    }

    /// Total degree through which the components are exact.
    pub fn certified_degree(&self) -> i32 {
        self.certified
    }

    /// Overrides the certified degree (used by producers of residuals).
    #[must_use]
    pub fn with_certified(mut self, certified: i32) -> Self {
        self.certified = certified.min(self.components[0][0].max_total_degree());
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

    /// True when some component has a term with a negative exponent, i.e.
    /// the field is genuinely Laurent rather than a power series.
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

    /// True when the field vanishes through its certified degree — the
    /// meaning of "this residual is zero".
    pub fn is_certified_zero(&self) -> bool {
        self.vanishes_through(self.certified)
    }

    /// The table `ψ^{ij}(u,v) = φ^{ji}(v,u)`: transpose with swapped blocks.
    ///
    /// # Errors
    /// Shape errors only (internally consistent inputs do not error).
    pub fn swapped_transpose(&self) -> Result<Self> {
        let n = self.dim();
        let mut components = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                row.push(self.components[j][i].place_blocks(n, &[1, 0], 2)?);
            }
            components.push(row);
        }
        Ok(BiField {
            components,
            certified: self.certified,
        })
    }

    /// Whether `φ^{ij}(u,v) = −φ^{ji}(v,u)` holds exactly.
    ///
    /// # Errors
    /// Shape errors only.
    pub fn is_skew(&self) -> Result<bool> {
        let swapped = self.swapped_transpose()?;
        for (row, srow) in self.components.iter().zip(&swapped.components) {
            for (entry, sentry) in row.iter().zip(srow) {
                if !entry.add(&sentry.clone())?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Entry-wise sum; the certified degree is the lesser of the two.
    ///
    /// # Errors
    /// [`Error::Shape`] on dimension or ring mismatch.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Shape("bi-field dimension mismatch".into()));
        }
        let mut components = Vec::with_capacity(self.dim());
        for (row, orow) in self.components.iter().zip(&other.components) {
            let mut out = Vec::with_capacity(row.len());
            for (entry, oentry) in row.iter().zip(orow) {
                out.push(entry.add(oentry)?);
            }
            components.push(out);
        }
        Ok(BiField {
            components,
            certified: self.certified.min(other.certified),
        })
    }

    /// Entry-wise difference; the certified degree is the lesser of the two.
    ///
    /// # Errors
    /// [`Error::Shape`] on dimension or ring mismatch.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Entry-wise negation.
    #[must_use]
    pub fn neg(&self) -> Self {
        BiField {
            components: self
                .components
                .iter()
                .map(|row| row.iter().map(Series::neg).collect())
                .collect(),
            certified: self.certified,
        }
    }

    /// Entry-wise scalar multiple.
    #[must_use]
    pub fn scale(&self, factor: &C) -> Self {
        BiField {
            components: self
                .components
                .iter()
                .map(|row| row.iter().map(|entry| entry.scale(factor)).collect())
                .collect(),
            certified: self.certified,
        }
    }

    /// Maps coefficients into another ring, preserving the certificate.
    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> BiField<D> {
        BiField {
            components: self
                .components
                .iter()
                .map(|row| row.iter().map(|entry| entry.map_coeffs(&mut f)).collect())
                .collect(),
            certified: self.certified,
        }
    }
}

impl<C: Coeff> PartialEq for TriField<C> {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl<C: Coeff> Eq for TriField<C> {}

impl<C: Coeff> TriField<C> {
    /// Dimension `n`.
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Component `Φ^{ijk}`.
    pub fn component(&self, i: usize, j: usize, k: usize) -> &Series<C> {
        &self.components[i][j][k]
    }

    /// Total degree through which the components are exact.
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

    /// True when the field vanishes through its certified degree.
    pub fn is_certified_zero(&self) -> bool {
        self.vanishes_through(self.certified)
    }

    /// Whether the cyclic symmetry `Φ^{ijk}(u,v,w) = Φ^{jki}(v,w,u)` holds.
    ///
    /// # Errors
    /// Shape errors only.
    pub fn cyclic_symmetry_holds(&self) -> Result<bool> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let rotated = self.components[j][k][i].place_blocks(n, &[1, 2, 0], 3)?;
                    if self.components[i][j][k] != rotated {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Entry-wise difference; the certified degree is the lesser of the two.
    ///
    /// # Errors
    /// [`Error::Shape`] on dimension or ring mismatch.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Shape("tri-field dimension mismatch".into()));
        }
        let mut components = Vec::with_capacity(self.dim());
        for (plane, oplane) in self.components.iter().zip(&other.components) {
            let mut rows = Vec::with_capacity(plane.len());
            for (row, orow) in plane.iter().zip(oplane) {
                let mut out = Vec::with_capacity(row.len());
                for (entry, oentry) in row.iter().zip(orow) {
                    out.push(entry.sub(oentry)?);
                }
                rows.push(out);
            }
            components.push(rows);
        }
        Ok(TriField {
            components,
            certified: self.certified.min(other.certified),
        })
    }
}

/// Builds the r-matrix of a generator tuple:
/// `φ^{ij}(u,v) = Σ_{k,l} (F_{*u}^{-1})^i_k (F_{*v}^{-1})^j_l [F^k(u) − F^l(v)]`.
///
/// The output is skew by construction and solves the Yang–Baxter equation
/// through its certified degree.
///
/// # Errors
/// [`Error::Unit`] when the Jacobian determinant is not a unit; shape
/// errors for malformed tuples.
/// Three-factor product with enough degree headroom that a negative-valuation
/// last factor cannot erase intermediates: a term of the final product at
/// total degree `t ≤ N` draws on `a·b` terms of degree at most `N − val(c)`,
/// so the intermediate is formed in a ring widened by `max(0, −val(c))`.
pub(crate) fn product3<C: Coeff>(a: &Series<C>, b: &Series<C>, c: &Series<C>) -> Result<Series<C>> {
    let degree = a.max_total_degree();
    let slack = c.valuation().map_or(0, |v| (-v).max(0));
    let wide = degree.saturating_add(slack);
    let product = a
        .with_max_degree(wide)
        .mul(&b.with_max_degree(wide))?
        .mul(&c.with_max_degree(wide))?;
    Ok(product.with_max_degree(degree))
}

pub fn rmatrix_from_generators<C: Coeff>(generators: &GeneratorTuple<C>) -> Result<BiField<C>> {
    let n = generators.dim();
    let jac = generators.jacobian()?;
    let det = matrix::determinant(&jac)?;
    let (ginv, _) = matrix::inverse(&jac).map_err(|err| {
        Error::Unit(format!("generator tuple has a singular Jacobian: {err}"))
    })?;

    let mut gu = Vec::with_capacity(n);
    let mut gv = Vec::with_capacity(n);
    for row in &ginv {
        let mut urow = Vec::with_capacity(n);
        let mut vrow = Vec::with_capacity(n);
        for entry in row {
            urow.push(entry.embed_block(0, 2)?);
            vrow.push(entry.embed_block(1, 2)?);
        }
        gu.push(urow);
        gv.push(vrow);
    }
    let fu: Vec<Series<C>> = generators
        .components()
        .iter()
        .map(|f| f.embed_block(0, 2))
        .collect::<Result<_>>()?;
    let fv: Vec<Series<C>> = generators
        .components()
        .iter()
        .map(|f| f.embed_block(1, 2))
        .collect::<Result<_>>()?;

    let degree = generators.truncation().max_total_degree();
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut entry = Series::zero(fu[0].truncation().clone());
            for k in 0..n {
                for l in 0..n {
                    let diff = fu[k].sub(&fv[l])?;
                    entry = entry.add(&product3(&gu[i][k], &gv[j][l], &diff)?)?;
                }
            }
            row.push(entry);
        }
        components.push(row);
    }

    // A single-term determinant inverts exactly, so every factor is exact
    // data and the result is exact through the ring cutoff. Otherwise the
    // truncated `1/det` limits exactness by the (possibly negative)
    // valuations it multiplies into.
    let certified = if det.term_count() == 1 {
        degree
    } else {
        let gamma = ginv
            .iter()
            .flatten()
            .filter_map(Series::valuation)
            .min()
            .unwrap_or(0);
        let f_min = tuple_valuation(generators.components()).unwrap_or(0);
        degree.min(degree.saturating_add(gamma).saturating_add(f_min))
    };
    Ok(BiField::new(components)?.with_certified(certified))
}

/// Builds the skew field `φ^{ij}(u,v) = Θ^i(u)Ψ^j(v) − Θ^j(v)Ψ^i(u)`.
///
/// # Errors
/// Shape errors only.
pub fn rmatrix_from_theta_psi<C: Coeff>(pair: &ThetaPsiPair<C>) -> Result<BiField<C>> {
    let n = pair.dim();
    let theta_u: Vec<Series<C>> = pair
        .theta
        .iter()
        .map(|t| t.embed_block(0, 2))
        .collect::<Result<_>>()?;
    let theta_v: Vec<Series<C>> = pair
        .theta
        .iter()
        .map(|t| t.embed_block(1, 2))
        .collect::<Result<_>>()?;
    let psi_u: Vec<Series<C>> = pair
        .psi
        .iter()
        .map(|p| p.embed_block(0, 2))
        .collect::<Result<_>>()?;
    let psi_v: Vec<Series<C>> = pair
        .psi
        .iter()
        .map(|p| p.embed_block(1, 2))
        .collect::<Result<_>>()?;
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(theta_u[i].mul(&psi_v[j])?.sub(&theta_v[j].mul(&psi_u[i])?)?);
        }
        components.push(row);
    }
    BiField::new(components)
}

/// The defect of the sufficient condition for a Θ/Ψ pair:
/// `residual^i = Σ_s Ψ^s ∂_s Θ^i − Σ_s Θ^s ∂_s Ψ^i − αΘ^i − βΨ^i`.
/// A zero tuple certifies that the pair's r-matrix solves the Yang–Baxter
/// equation.
///
/// # Errors
/// Shape errors only.
pub fn theta_psi_residual<C: Coeff>(pair: &ThetaPsiPair<C>) -> Result<Vec<Series<C>>> {
    let n = pair.dim();
    let ring = pair.theta[0].truncation().clone();
    let alpha = Series::constant(ring.clone(), pair.alpha.clone());
    let beta = Series::constant(ring.clone(), pair.beta.clone());
    let mut residual = Vec::with_capacity(n);
    for i in 0..n {
        let mut total = Series::zero(ring.clone());
        for s in 0..n {
            total = total.add(&pair.psi[s].mul(&pair.theta[i].partial_derivative(s)?)?)?;
            total = total.sub(&pair.theta[s].mul(&pair.psi[i].partial_derivative(s)?)?)?;
        }
        total = total.sub(&alpha.mul(&pair.theta[i])?)?;
        total = total.sub(&beta.mul(&pair.psi[i])?)?;
        residual.push(total);
    }
    Ok(residual)
}

/// Derives the Θ/Ψ pair of a generator tuple:
/// `Θ^i = Σ_k (F_{*u}^{-1})^i_k F^k(u)`, `Ψ^i = Σ_k (F_{*u}^{-1})^i_k`,
/// `α = 0`, `β = 1`. Its residual vanishes and its r-matrix equals
/// [`rmatrix_from_generators`].
///
/// # Errors
/// As [`rmatrix_from_generators`].
pub fn theta_psi_from_generators<C: Coeff>(
    generators: &GeneratorTuple<C>,
) -> Result<ThetaPsiPair<C>> {
    let n = generators.dim();
    let jac = generators.jacobian()?;
    let (ginv, _) = matrix::inverse(&jac).map_err(|err| {
        Error::Unit(format!("generator tuple has a singular Jacobian: {err}"))
    })?;
    let ring = generators.truncation().clone();
    let mut theta = Vec::with_capacity(n);
    let mut psi = Vec::with_capacity(n);
    for row in &ginv {
        let mut theta_i = Series::zero(ring.clone());
        let mut psi_i = Series::zero(ring.clone());
        for (entry, f) in row.iter().zip(generators.components()) {
            theta_i = theta_i.add(&entry.mul(f)?)?;
            psi_i = psi_i.add(entry)?;
        }
        theta.push(theta_i);
        psi.push(psi_i);
    }
    ThetaPsiPair::new(theta, psi, C::zero(), C::one())
}

/// The Yang–Baxter residual `Φ^{ijk}(u,v,w)` of a skew bi-field: the sum of
/// the six contraction terms
///
/// ```text
/// Φ^{ijk} = Σ_s [ φ^{ks}(w,u) ∂_{u^s}φ^{ij}(u,v) + φ^{sk}(v,w) ∂_{v^s}φ^{ji}(v,u)
///             + φ^{is}(u,v) ∂_{v^s}φ^{jk}(v,w) + φ^{si}(w,u) ∂_{w^s}φ^{kj}(w,v)
///             + φ^{js}(v,w) ∂_{w^s}φ^{ki}(w,u) + φ^{sj}(u,v) ∂_{u^s}φ^{ik}(u,w) ].
/// ```
///
/// Each derivative acts on the first point slot of its factor. The result
/// is cyclically symmetric and vanishes through its certified degree
/// exactly when `φ` solves the classical Yang–Baxter equation there.
///
/// # Errors
/// [`Error::Domain`] when the input is not skew; shape errors otherwise.
pub fn cybe_residual<C: Coeff>(phi: &BiField<C>) -> Result<TriField<C>> {
    if !phi.is_skew()? {
        return Err(Error::Domain(
            "Yang–Baxter residual needs a skew bi-field".into(),
        ));
    }
    let n = phi.dim();
    let degree = phi.truncation().max_total_degree();
    let ring3 = Truncation::laurent(3 * n, degree, vec![0; 3 * n])?;

    // (component pair, derivative-factor pair, placement of each factor)
    // for the six terms; the derivative always acts on slot-one variables.
    type Blocks = [usize; 2];
    let layout: [((usize, usize), Blocks, (usize, usize), Blocks); 6] = [
        ((2, 3), [2, 0], (0, 1), [0, 1]), // φ^{ks}(w,u) ∂φ^{ij}(u,v)
        ((3, 2), [1, 2], (1, 0), [1, 0]), // φ^{sk}(v,w) ∂φ^{ji}(v,u)
        ((0, 3), [0, 1], (1, 2), [1, 2]), // φ^{is}(u,v) ∂φ^{jk}(v,w)
        ((3, 0), [2, 0], (2, 1), [2, 1]), // φ^{si}(w,u) ∂φ^{kj}(w,v)
        ((1, 3), [1, 2], (2, 0), [2, 0]), // φ^{js}(v,w) ∂φ^{ki}(w,u)
        ((3, 1), [0, 1], (0, 2), [0, 2]), // φ^{sj}(u,v) ∂φ^{ik}(u,w)
    ];
    // Index key: 0 ↦ i, 1 ↦ j, 2 ↦ k, 3 ↦ s.
    let pick = |slot: usize, i: usize, j: usize, k: usize, s: usize| match slot {
        0 => i,
        1 => j,
        2 => k,
        _ => s,
    };

    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut plane = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = Vec::with_capacity(n);
            for k in 0..n {
                let mut total = Series::zero(ring3.clone());
                for s in 0..n {
                    for (factor_ij, factor_blocks, deriv_ij, deriv_blocks) in &layout {
                        let a = pick(factor_ij.0, i, j, k, s);
                        let b = pick(factor_ij.1, i, j, k, s);
                        let c = pick(deriv_ij.0, i, j, k, s);
                        let d = pick(deriv_ij.1, i, j, k, s);
                        let factor = phi.component(a, b).place_blocks(n, factor_blocks, 3)?;
                        let derivative = phi
                            .component(c, d)
                            .partial_derivative(s)?
                            .place_blocks(n, deriv_blocks, 3)?;
                        total = total.add(&factor.mul(&derivative)?)?;
                    }
                }
                row.push(total);
            }
            plane.push(row);
        }
        components.push(plane);
    }

    let certified = match phi.valuation() {
        None => degree,
        Some(ord) => degree.min(
            phi.certified_degree()
                .saturating_add(ord)
                .saturating_sub(1),
        ),
    };
    Ok(TriField {
        components,
        certified,
    })
}

/// The near-diagonal residual for one variable:
/// `∂_vφ·∂_uφ − φ·∂_u∂_vφ + f′(v)·φ − f(v)·∂_vφ` with `f(v) = ∂_1φ(v,v)`.
/// This is `∂Φ/∂w` restricted to `w = v` (all four terms quadratic in φ);
/// it vanishes for every one-variable Yang–Baxter solution.
///
/// # Errors
/// [`Error::Input`] unless `n = 1`; [`Error::Domain`] when not skew.
pub fn weak_diagonal_residual<C: Coeff>(phi: &BiField<C>) -> Result<Series<C>> {
    if phi.dim() != 1 {
        return Err(Error::Input(
            "the near-diagonal residual is defined for one variable only".into(),
        ));
    }
    if !phi.is_skew()? {
        return Err(Error::Domain(
            "near-diagonal residual needs a skew bi-field".into(),
        ));
    }
    let f2 = phi.component(0, 0);
    let du = f2.partial_derivative(0)?;
    let dv = f2.partial_derivative(1)?;
    let dudv = du.partial_derivative(1)?;
    let f = du.map_vars(1, &[0, 0])?;
    let f_prime = f.partial_derivative(0)?;
    let f_at_v = f.map_vars(2, &[1])?;
    let f_prime_at_v = f_prime.map_vars(2, &[1])?;
    dv.mul(&du)?
        .sub(&f2.mul(&dudv)?)?
        .add(&f_prime_at_v.mul(f2)?)?
        .sub(&f_at_v.mul(&dv)?)
}

/// The vector-field bracket `[X,Y]^j = Σ_i X^i ∂_i Y^j − Y^i ∂_i X^j`.
///
/// # Errors
/// [`Error::Shape`] on dimension mismatch.
pub fn lie_bracket<C: Coeff>(x: &VectorField<C>, y: &VectorField<C>) -> Result<VectorField<C>> {
    let n = x.dim();
    if y.dim() != n {
        return Err(Error::Shape("vector-field dimension mismatch".into()));
    }
    let ring = x.truncation().clone();
    let mut components = Vec::with_capacity(n);
    for j in 0..n {
        let mut total = Series::zero(ring.clone());
        for i in 0..n {
            total = total.add(&x.component(i).mul(&y.component(j).partial_derivative(i)?)?)?;
            total = total.sub(&y.component(i).mul(&x.component(j).partial_derivative(i)?)?)?;
        }
        components.push(total);
    }
    VectorField::new(components)
}

/// The ad-action of a vector field on a bi-field, acting on each point slot:
///
/// ```text
/// (ad_X φ)^{ij} = Σ_k [ X^k(u) ∂_{u^k}φ^{ij} − φ^{kj} ∂_{u^k}X^i(u)
///                   + X^k(v) ∂_{v^k}φ^{ij} − φ^{ik} ∂_{v^k}X^j(v) ].
/// ```
///
/// # Errors
/// [`Error::Shape`] on dimension mismatch.
pub fn ad_on_bifield<C: Coeff>(x: &VectorField<C>, phi: &BiField<C>) -> Result<BiField<C>> {
    let n = phi.dim();
    if x.dim() != n {
        return Err(Error::Shape(
            "vector field and bi-field dimensions differ".into(),
        ));
    }
    let mut x_u = Vec::with_capacity(n);
    let mut x_v = Vec::with_capacity(n);
    let mut dx = Vec::with_capacity(n);
    for i in 0..n {
        x_u.push(x.component(i).embed_block(0, 2)?);
        x_v.push(x.component(i).embed_block(1, 2)?);
        let mut row = Vec::with_capacity(n);
        for k in 0..n {
            row.push(x.component(i).partial_derivative(k)?);
        }
        dx.push(row);
    }

    let degree = phi.truncation().max_total_degree();
    let ring = Truncation::laurent(2 * n, degree, vec![0; 2 * n])?;
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let entry = phi.component(i, j);
            let mut total = Series::zero(ring.clone());
            for k in 0..n {
                total = total.add(&x_u[k].mul(&entry.partial_derivative(k)?)?)?;
                total = total.add(&x_v[k].mul(&entry.partial_derivative(n + k)?)?)?;
                total = total.sub(&phi.component(k, j).mul(&dx[i][k].embed_block(0, 2)?)?)?;
                total = total.sub(&phi.component(i, k).mul(&dx[j][k].embed_block(1, 2)?)?)?;
            }
            row.push(total);
        }
        components.push(row);
    }

    let certified = match x.valuation() {
        None => degree,
        Some(ord) => degree.min(
            phi.certified_degree()
                .saturating_add(ord)
                .saturating_sub(1),
        ),
    };
    Ok(BiField {
        components,
        certified,
    })
}

/// The coboundary of `X` against the reference bi-field `r`: the candidate
/// cocycle `X ↦ ad_X r`. Identical to [`ad_on_bifield`]; the second name
/// marks intent at call sites.
///
/// # Errors
/// As [`ad_on_bifield`].
pub fn coboundary_delta<C: Coeff>(x: &VectorField<C>, phi: &BiField<C>) -> Result<BiField<C>> {
    ad_on_bifield(x, phi)
}

/// The cocycle defect of a coboundary:
/// `φ_{[X,Y]} − (ad_X φ_Y − ad_Y φ_X)` with `φ_Z = ad_Z φ`. Identically
/// zero — coboundaries are cocycles — so any nonzero value through the
/// certified degree signals an internal inconsistency.
///
/// # Errors
/// Shape errors only.
pub fn cocycle_residual<C: Coeff>(
    phi: &BiField<C>,
    x: &VectorField<C>,
    y: &VectorField<C>,
) -> Result<BiField<C>> {
    let direct = ad_on_bifield(&lie_bracket(x, y)?, phi)?;
    let xy = ad_on_bifield(x, &ad_on_bifield(y, phi)?)?;
    let yx = ad_on_bifield(y, &ad_on_bifield(x, phi)?)?;
    let residual = direct.sub(&xy.sub(&yx)?)?;

    // The bracket [X,Y] and the inner actions are stored truncated. When
    // their exact values overflow the ring, the lost tail re-enters the
    // residual at `degree + valuation` under one more derivative, so the
    // cancellation is certified one degree lower (shifted by any negative
    // valuations) in that case.
    let degree = phi.truncation().max_total_degree();
    let field_degree = |field: &VectorField<C>| {
        field
            .components()
            .iter()
            .filter_map(Series::total_degree)
            .max()
    };
    let phi_degree = phi
        .components()
        .iter()
        .flatten()
        .filter_map(Series::total_degree)
        .max();
    let overflow = match (field_degree(x), field_degree(y), phi_degree) {
        (Some(dx), Some(dy), Some(dp)) => {
            dx + dy - 1 > degree || dx + dp - 1 > degree || dy + dp - 1 > degree
        }
        (Some(dx), Some(dy), None) => dx + dy - 1 > degree,
        _ => false,
    };
    let certified = if overflow {
        let slack = x.valuation().unwrap_or(0).min(0)
            + y.valuation().unwrap_or(0).min(0)
            + phi.valuation().unwrap_or(0).min(0);
        residual.certified_degree().min(degree - 1 + slack)
    } else {
        residual.certified_degree()
    };
    Ok(residual.with_certified(certified))
}

/// The invariance residual of the generalized Yang–Baxter expression under
/// a vector field: with `Φ = cybe_residual(φ)`,
///
/// ```text
/// Σ_s [ X^s(u)∂_{u^s}Φ^{ijk} + X^s(v)∂_{v^s}Φ^{ijk} + X^s(w)∂_{w^s}Φ^{ijk} ]
/// − Σ_s [ (∂_{u^s}X^i)(u) Φ^{sjk} + (∂_{v^s}X^j)(v) Φ^{isk} + (∂_{w^s}X^k)(w) Φ^{ijs} ].
/// ```
///
/// Zero whenever `φ` solves the Yang–Baxter equation (then `Φ = 0`), and
/// more generally whenever `Φ` is equivariant along `X`.
///
/// # Errors
/// As [`cybe_residual`] plus dimension mismatch.
pub fn gcybe_invariance_residual<C: Coeff>(
    phi: &BiField<C>,
    x: &VectorField<C>,
) -> Result<TriField<C>> {
    let n = phi.dim();
    if x.dim() != n {
        return Err(Error::Shape(
            "vector field and bi-field dimensions differ".into(),
        ));
    }
    let big_phi = cybe_residual(phi)?;
    let degree = phi.truncation().max_total_degree();
    let ring3 = Truncation::laurent(3 * n, degree, vec![0; 3 * n])?;

    let mut x_at = Vec::with_capacity(3);
    let mut dx = Vec::with_capacity(n);
    for block in 0..3 {
        let mut per_block = Vec::with_capacity(n);
        for s in 0..n {
            per_block.push(x.component(s).embed_block(block, 3)?);
        }
        x_at.push(per_block);
    }
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for s in 0..n {
            row.push(x.component(i).partial_derivative(s)?);
        }
        dx.push(row);
    }

    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut plane = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = Vec::with_capacity(n);
            for k in 0..n {
                let entry = big_phi.component(i, j, k);
                let mut total = Series::zero(ring3.clone());
                for s in 0..n {
                    total = total.add(&x_at[0][s].mul(&entry.partial_derivative(s)?)?)?;
                    total = total.add(&x_at[1][s].mul(&entry.partial_derivative(n + s)?)?)?;
                    total = total.add(&x_at[2][s].mul(&entry.partial_derivative(2 * n + s)?)?)?;
                    total = total.sub(
                        &dx[i][s]
                            .embed_block(0, 3)?
                            .mul(big_phi.component(s, j, k))?,
                    )?;
                    total = total.sub(
                        &dx[j][s]
                            .embed_block(1, 3)?
                            .mul(big_phi.component(i, s, k))?,
                    )?;
                    total = total.sub(
                        &dx[k][s]
                            .embed_block(2, 3)?
                            .mul(big_phi.component(i, j, s))?,
                    )?;
                }
                row.push(total);
            }
            plane.push(row);
        }
        components.push(plane);
    }

    let certified = match x.valuation() {
        None => big_phi.certified_degree(),
        Some(ord) => degree.min(
            big_phi
                .certified_degree()
                .saturating_add(ord)
                .saturating_sub(1),
        ),
    };
    Ok(TriField {
        components,
        certified,
    })
}

/// The one-variable general solution
/// `φ(u,v) = (1/F′(u))(1/F′(v))[F(u) − F(v)]` for a Laurent series `F`
/// whose derivative is a unit. Agrees with [`rmatrix_from_generators`] on
/// the single-component tuple `(F)`.
///
/// # Errors
/// [`Error::Input`] unless `F` has one variable; [`Error::Unit`] when `F′`
/// has no invertible leading monomial.
pub fn w1_general<C: Coeff>(f: &Series<C>) -> Result<BiField<C>> {
    if f.nvars() != 1 {
        return Err(Error::Input(
            "the one-variable family needs a one-variable series".into(),
        ));
    }
    let f_prime = f.partial_derivative(0)?;
    let g = f_prime
        .invert_unit()
        .map_err(|err| Error::Unit(format!("derivative is not a unit: {err}")))?;
    let phi = product3(
        &g.embed_block(0, 2)?,
        &g.embed_block(1, 2)?,
        &f.embed_block(0, 2)?.sub(&f.embed_block(1, 2)?)?,
    )?;
    let degree = f.max_total_degree();
    let certified = if f_prime.term_count() == 1 {
        degree
    } else {
        let val_g = g.valuation().unwrap_or(0);
        let val_f = f.valuation().unwrap_or(0);
        degree.min(degree.saturating_add(val_g).saturating_add(val_f))
    };
    Ok(BiField::new(vec![vec![phi]])?.with_certified(certified))
}

/// The canonical one-variable orbit representative for a label
/// `d ∈ Z₊ ∪ {−1}`:
/// `φ̃(u,v) = (1/d²) u^{d+1}v^{d+1}(v^{−d} − u^{−d}) = (1/d²)(u^{d+1}v − uv^{d+1})`
/// for `d ≠ 0`, and the zero field for `d = 0`.
///
/// # Errors
/// [`Error::Domain`] for `d < −1` (outside the power-series moduli set);
/// [`Error::Input`] when the ring cannot hold the degree-`d+2`
/// representative.
pub fn w1_canonical(d: i32, order: i32) -> Result<BiField<Rational>> {
    if d < -1 {
        return Err(Error::Domain(format!(
            "label {d} lies outside the moduli set Z_+ ∪ {{−1}}"
        )));
    }
    let trunc = Truncation::power(2, order)?;
    if d == 0 {
        return BiField::zero(1, trunc);
    }
    if order < d + 2 {
        return Err(Error::Input(format!(
            "order {order} cannot hold the degree-{} representative",
            d + 2
        )));
    }
    let scale = ratio(1, i64::from(d) * i64::from(d))?;
    let phi = Series::from_terms(
        trunc,
        [
            (vec![d + 1, 1], scale.clone()),
            (vec![1, d + 1], -scale),
        ],
    )?;
    BiField::new(vec![vec![phi]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn power_series(order: i32, terms: &[(i32, i64)]) -> Series<Rational> {
        Series::from_terms(
            Truncation::power(1, order).unwrap(),
            terms.iter().map(|&(e, c)| (vec![e], int(c))),
        )
        .unwrap()
    }

    fn pair_series(order: i32, terms: &[(i32, i32, i64)]) -> Series<Rational> {
        Series::from_terms(
            Truncation::power(2, order).unwrap(),
            terms.iter().map(|&(a, b, c)| (vec![a, b], int(c))),
        )
        .unwrap()
    }

    fn skew_one(phi: Series<Rational>) -> BiField<Rational> {
        BiField::new(vec![vec![phi]]).unwrap()
    }

    #[test]
    fn identity_generator_gives_difference_field() {
        let trunc = Truncation::power(1, 4).unwrap();
        let u: Series<Rational> = Series::var(trunc, 0).unwrap();
        let generators = GeneratorTuple::new(vec![u]).unwrap();
        let phi = rmatrix_from_generators(&generators).unwrap();
        assert_eq!(*phi.component(0, 0), pair_series(4, &[(1, 0, 1), (0, 1, -1)]));
        assert!(phi.is_skew().unwrap());
        assert_eq!(phi.certified_degree(), 4);
    }

    #[test]
    fn reciprocal_generator_gives_cubic_field() {
        let trunc = Truncation::laurent(1, 4, vec![-1]).unwrap();
        let f = Series::monomial(trunc, vec![-1], int(-1)).unwrap();
        let generators = GeneratorTuple::new(vec![f]).unwrap();
        let phi = rmatrix_from_generators(&generators).unwrap();
        assert_eq!(*phi.component(0, 0), pair_series(4, &[(2, 1, 1), (1, 2, -1)]));
        assert!(phi.is_skew().unwrap());
    }

    #[test]
    fn diagonal_reciprocal_pair_matches_hand_adjugate() {
        let trunc = Truncation::laurent(2, 5, vec![-1, -1]).unwrap();
        let f1 = Series::monomial(trunc.clone(), vec![-1, 0], int(1)).unwrap();
        let f2 = Series::monomial(trunc, vec![0, -1], int(1)).unwrap();
        let generators = GeneratorTuple::new(vec![f1, f2]).unwrap();
        let phi = rmatrix_from_generators(&generators).unwrap();
        // φ^{11} = −u¹v¹(u¹ − v¹) in variables (u¹, u², v¹, v²).
        let quad = Truncation::power(4, 5).unwrap();
        let expected_11 = Series::from_terms(
            quad.clone(),
            [
                (vec![2, 0, 1, 0], int(-1)),
                (vec![1, 0, 2, 0], int(1)),
            ],
        )
        .unwrap();
        let expected_12 = Series::from_terms(
            quad,
            [
                (vec![2, 0, 0, 1], int(-1)),
                (vec![1, 0, 0, 2], int(1)),
            ],
        )
        .unwrap();
        assert_eq!(*phi.component(0, 0), expected_11);
        assert_eq!(*phi.component(0, 1), expected_12);
        assert!(phi.is_skew().unwrap());
        assert_eq!(phi.certified_degree(), 5);
    }

    #[test]
    fn theta_psi_of_reciprocal_generator() {
        let trunc = Truncation::laurent(1, 4, vec![-1]).unwrap();
        let f = Series::monomial(trunc, vec![-1], int(-1)).unwrap();
        let generators = GeneratorTuple::new(vec![f]).unwrap();
        let pair = theta_psi_from_generators(&generators).unwrap();
        assert_eq!(pair.theta[0], power_series(4, &[(1, -1)]).lift());
        assert_eq!(pair.psi[0], power_series(4, &[(2, 1)]).lift());
        assert_eq!(pair.alpha, int(0));
        assert_eq!(pair.beta, int(1));
        let residual = theta_psi_residual(&pair).unwrap();
        assert!(residual.iter().all(Series::is_zero));
    }

    #[test]
    fn theta_psi_residual_goldens() {
        let trunc = Truncation::power(1, 5).unwrap();
        let u: Series<Rational> = Series::var(trunc.clone(), 0).unwrap();
        let one = Series::one(trunc.clone());
        let u2 = u.mul(&u).unwrap();
        let u3 = u2.mul(&u).unwrap();

        let flat = ThetaPsiPair::new(vec![u.clone()], vec![one.clone()], int(0), int(1)).unwrap();
        assert!(theta_psi_residual(&flat).unwrap()[0].is_zero());

        let scaled = ThetaPsiPair::new(vec![u2.clone()], vec![u.clone()], int(1), int(0)).unwrap();
        assert!(theta_psi_residual(&scaled).unwrap()[0].is_zero());

        let off = ThetaPsiPair::new(vec![u3], vec![one], int(0), int(0)).unwrap();
        assert_eq!(theta_psi_residual(&off).unwrap()[0], power_series(5, &[(2, 3)]));
    }

    #[test]
    fn theta_psi_field_goldens_and_generator_consistency() {
        let trunc = Truncation::power(1, 5).unwrap();
        let u: Series<Rational> = Series::var(trunc.clone(), 0).unwrap();
        let one = Series::one(trunc.clone());
        let u2 = u.mul(&u).unwrap();

        let flat = ThetaPsiPair::new(vec![u.clone()], vec![one], int(0), int(1)).unwrap();
        assert_eq!(
            *rmatrix_from_theta_psi(&flat).unwrap().component(0, 0),
            pair_series(5, &[(1, 0, 1), (0, 1, -1)])
        );

        let equal = ThetaPsiPair::new(vec![u.clone()], vec![u.clone()], int(0), int(0)).unwrap();
        assert!(rmatrix_from_theta_psi(&equal).unwrap().is_zero());

        let cubic = ThetaPsiPair::new(vec![u2], vec![u], int(1), int(0)).unwrap();
        assert_eq!(
            *rmatrix_from_theta_psi(&cubic).unwrap().component(0, 0),
            pair_series(5, &[(2, 1, 1), (1, 2, -1)])
        );

        // The Θ/Ψ route through a generator tuple reproduces the direct
        // double contraction.
        let laurent = Truncation::laurent(1, 5, vec![-1]).unwrap();
        let f = Series::monomial(laurent, vec![-1], int(-1)).unwrap();
        let generators = GeneratorTuple::new(vec![f]).unwrap();
        assert_eq!(
            rmatrix_from_theta_psi(&theta_psi_from_generators(&generators).unwrap()).unwrap(),
            rmatrix_from_generators(&generators).unwrap()
        );

        let diag = Truncation::laurent(2, 5, vec![-1, -1]).unwrap();
        let f1 = Series::monomial(diag.clone(), vec![-1, 0], int(1)).unwrap();
        let f2 = Series::monomial(diag, vec![0, -1], int(1)).unwrap();
        let generators2 = GeneratorTuple::new(vec![f1, f2]).unwrap();
        let pair2 = theta_psi_from_generators(&generators2).unwrap();
        let minus_u1 = Series::monomial(
            Truncation::laurent(2, 5, vec![-1, -1]).unwrap(),
            vec![1, 0],
            int(-1),
        )
        .unwrap();
        assert_eq!(pair2.theta[0], minus_u1);
        let minus_u2_sq = Series::monomial(
            Truncation::laurent(2, 5, vec![-1, -1]).unwrap(),
            vec![0, 2],
            int(-1),
        )
        .unwrap();
        assert_eq!(pair2.psi[1], minus_u2_sq);
        assert_eq!(
            rmatrix_from_theta_psi(&pair2).unwrap(),
            rmatrix_from_generators(&generators2).unwrap()
        );
    }

    #[test]
    fn yang_baxter_residual_vanishes_on_solutions() {
        let difference = skew_one(pair_series(4, &[(1, 0, 1), (0, 1, -1)]));
        let residual = cybe_residual(&difference).unwrap();
        assert!(residual.is_zero());
        assert_eq!(residual.certified_degree(), 4);

        let cubic = skew_one(pair_series(6, &[(2, 1, 1), (1, 2, -1)]));
        assert!(cybe_residual(&cubic).unwrap().is_zero());
    }

    #[test]
    fn yang_baxter_residual_of_square_difference() {
        let phi = skew_one(pair_series(4, &[(2, 0, 1), (0, 2, -1)]));
        let residual = cybe_residual(&phi).unwrap();
        // Φ = 2(uw² − uv² + u²v − vw² + v²w − u²w).
        let expected = Series::from_terms(
            Truncation::power(3, 4).unwrap(),
            [
                (vec![1, 0, 2], int(2)),
                (vec![1, 2, 0], int(-2)),
                (vec![2, 1, 0], int(2)),
                (vec![0, 1, 2], int(-2)),
                (vec![0, 2, 1], int(2)),
                (vec![2, 0, 1], int(-2)),
            ],
        )
        .unwrap();
        assert_eq!(*residual.component(0, 0, 0), expected);
        assert!(residual.cyclic_symmetry_holds().unwrap());
        assert_eq!(
            residual
                .component(0, 0, 0)
                .evaluate(&[int(2), int(1), int(0)])
                .unwrap(),
            int(4)
        );
        assert_eq!(residual.certified_degree(), 4);
    }

    #[test]
    fn yang_baxter_residual_rejects_non_skew_input() {
        let phi = skew_one(pair_series(4, &[(1, 0, 1), (0, 1, 1)]));
        assert!(matches!(cybe_residual(&phi), Err(Error::Domain(_))));
    }

    #[test]
    fn near_diagonal_residual_goldens() {
        let difference = skew_one(pair_series(5, &[(1, 0, 1), (0, 1, -1)]));
        assert!(weak_diagonal_residual(&difference).unwrap().is_zero());

        let cubic = skew_one(pair_series(5, &[(2, 1, 1), (1, 2, -1)]));
        assert!(weak_diagonal_residual(&cubic).unwrap().is_zero());

        let square = skew_one(pair_series(5, &[(2, 0, 1), (0, 2, -1)]));
        assert_eq!(
            weak_diagonal_residual(&square).unwrap(),
            pair_series(5, &[(2, 0, 2), (1, 1, -4), (0, 2, 2)])
        );
    }

    #[test]
    fn bracket_goldens() {
        let trunc = Truncation::power(1, 5).unwrap();
        let u: Series<Rational> = Series::var(trunc, 0).unwrap();
        let u2 = u.mul(&u).unwrap();
        let euler = VectorField::new(vec![u.clone()]).unwrap();
        let quad = VectorField::new(vec![u2.clone()]).unwrap();
        assert_eq!(lie_bracket(&euler, &quad).unwrap().component(0), &u2);
        assert!(lie_bracket(&euler, &euler).unwrap().component(0).is_zero());

        let trunc2 = Truncation::power(2, 4).unwrap();
        let u1: Series<Rational> = Series::var(trunc2.clone(), 0).unwrap();
        let u2v = Series::var(trunc2.clone(), 1).unwrap();
        let zero = Series::zero(trunc2);
        let x = VectorField::new(vec![u1, zero.clone()]).unwrap();
        let y = VectorField::new(vec![zero, u2v]).unwrap();
        let bracket = lie_bracket(&x, &y).unwrap();
        assert!(bracket.component(0).is_zero());
        assert!(bracket.component(1).is_zero());
    }

    #[test]
    fn ad_action_golden() {
        let trunc = Truncation::power(1, 4).unwrap();
        let u: Series<Rational> = Series::var(trunc.clone(), 0).unwrap();
        let euler = VectorField::new(vec![u]).unwrap();
        let phi = skew_one(pair_series(4, &[(1, 0, 1), (0, 1, -1)]));
        let acted = ad_on_bifield(&euler, &phi).unwrap();
        assert_eq!(*acted.component(0, 0), pair_series(4, &[(1, 0, -1), (0, 1, 1)]));

        let zero = VectorField::new(vec![Series::zero(trunc)]).unwrap();
        assert!(ad_on_bifield(&zero, &phi).unwrap().is_zero());
        assert_eq!(
            coboundary_delta(&euler, &phi).unwrap(),
            ad_on_bifield(&euler, &phi).unwrap()
        );
    }

    #[test]
    fn coboundaries_are_cocycles() {
        let trunc = Truncation::power(1, 6).unwrap();
        let u: Series<Rational> = Series::var(trunc.clone(), 0).unwrap();
        let u2 = u.mul(&u).unwrap();
        let x = VectorField::new(vec![u.clone()]).unwrap();
        let y = VectorField::new(vec![u2.clone()]).unwrap();
        let phi = skew_one(pair_series(6, &[(2, 1, 1), (1, 2, -1)]));
        assert!(cocycle_residual(&phi, &x, &y).unwrap().is_zero());

        // The identity is algebraic: it holds for non-skew φ and messy fields.
        let mixed = VectorField::new(vec![u.add(&u2).unwrap()]).unwrap();
        let cubic = VectorField::new(vec![u2.mul(&u).unwrap().add(&u2).unwrap()]).unwrap();
        let lopsided =
            BiField::new(vec![vec![pair_series(6, &[(2, 0, 1), (1, 1, 3)])]]).unwrap();
        assert!(cocycle_residual(&lopsided, &mixed, &cubic).unwrap().is_zero());
        assert!(cocycle_residual(&phi, &mixed, &mixed).unwrap().is_zero());
    }

    #[test]
    fn invariance_residual_goldens() {
        let phi = skew_one(pair_series(6, &[(2, 0, 1), (0, 2, -1)]));
        let trunc = Truncation::power(1, 6).unwrap();
        let u: Series<Rational> = Series::var(trunc.clone(), 0).unwrap();

        // Euler field: the residual weighs homogeneous Φ by (3 − 3) = 0.
        let euler = VectorField::new(vec![u.clone()]).unwrap();
        assert!(gcybe_invariance_residual(&phi, &euler).unwrap().is_zero());

        let cubic_field =
            VectorField::new(vec![u.mul(&u).unwrap().mul(&u).unwrap()]).unwrap();
        let residual = gcybe_invariance_residual(&phi, &cubic_field).unwrap();
        assert_eq!(
            residual
                .component(0, 0, 0)
                .evaluate(&[int(1), int(0), int(2)])
                .unwrap(),
            int(-12)
        );

        // A Yang–Baxter solution has Φ = 0, hence a zero residual.
        let solution = skew_one(pair_series(6, &[(2, 1, 1), (1, 2, -1)]));
        assert!(gcybe_invariance_residual(&solution, &cubic_field)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn one_variable_general_family() {
        let trunc = Truncation::power(1, 4).unwrap();
        let u: Series<Rational> = Series::var(trunc, 0).unwrap();
        assert_eq!(
            *w1_general(&u).unwrap().component(0, 0),
            pair_series(4, &[(1, 0, 1), (0, 1, -1)])
        );

        let laurent = Truncation::laurent(1, 4, vec![-2]).unwrap();
        let reciprocal = Series::monomial(laurent.clone(), vec![-1], int(-1)).unwrap();
        assert_eq!(
            *w1_general(&reciprocal).unwrap().component(0, 0),
            pair_series(4, &[(2, 1, 1), (1, 2, -1)])
        );

        let square_reciprocal = Series::monomial(laurent, vec![-2], int(-1)).unwrap();
        let phi = w1_general(&square_reciprocal).unwrap();
        let expected = Series::from_terms(
            Truncation::power(2, 4).unwrap(),
            [(vec![3, 1], ratio(1, 4).unwrap()), (vec![1, 3], ratio(-1, 4).unwrap())],
        )
        .unwrap();
        assert_eq!(*phi.component(0, 0), expected);

        // Same answer through the generator-tuple contraction.
        let trunc = Truncation::laurent(1, 4, vec![-2]).unwrap();
        let f = Series::monomial(trunc, vec![-2], int(-1)).unwrap();
        let generators = GeneratorTuple::new(vec![f]).unwrap();
        assert_eq!(phi, rmatrix_from_generators(&generators).unwrap());
    }

    #[test]
    fn one_variable_canonical_family() {
        assert_eq!(
            *w1_canonical(1, 4).unwrap().component(0, 0),
            pair_series(4, &[(2, 1, 1), (1, 2, -1)])
        );
        assert_eq!(
            *w1_canonical(-1, 4).unwrap().component(0, 0),
            pair_series(4, &[(0, 1, 1), (1, 0, -1)])
        );
        assert!(w1_canonical(0, 4).unwrap().is_zero());
        assert!(matches!(w1_canonical(-2, 4), Err(Error::Domain(_))));

        let quadratic = w1_canonical(2, 6).unwrap();
        let laurent = Truncation::laurent(1, 6, vec![-2]).unwrap();
        let f = Series::monomial(laurent, vec![-2], int(-1)).unwrap();
        assert_eq!(
            quadratic,
            rmatrix_from_generators(&GeneratorTuple::new(vec![f]).unwrap()).unwrap()
        );
    }

    #[test]
    fn scaling_covariance_of_the_residual() {
        let phi = skew_one(pair_series(4, &[(2, 0, 1), (0, 2, -1)]));
        let scaled = phi.scale(&ratio(3, 2).unwrap());
        let residual = cybe_residual(&phi).unwrap();
        let scaled_residual = cybe_residual(&scaled).unwrap();
        let rescaled = residual.component(0, 0, 0).scale(&ratio(9, 4).unwrap());
        assert_eq!(*scaled_residual.component(0, 0, 0), rescaled);
    }
}
