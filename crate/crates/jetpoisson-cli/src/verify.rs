//! Deterministic self-verification suites.
//!
//! Each suite re-derives a set of identities — golden values, randomized
//! laws, and negative controls — and reports one named check per identity
//! with the degree through which it is certified. Runs are reproducible:
//! the corpus depends only on the seed and order.

use anyhow::Result;
use jetpoisson_core::bialgebra::{
    cybe_residual, rmatrix_from_theta_psi, theta_psi_from_generators, theta_psi_residual,
    w1_canonical, BiField,
};
use jetpoisson_core::classify::{
    canonical_alpha, canonical_rmatrix, degeneracy_kernel, laurent_family_sample, minor_table,
    IntegerMatrix, Normalization,
};
use jetpoisson_core::coeff::{CoeffPoly, Indeterminate, Monomial};
use jetpoisson_core::grouppoisson::{
    bracket_coefficient, multiplicativity_residual, omega_bifield, SymbolicJet,
};
use jetpoisson_core::homspace::{
    alpha_action_residual, alpha_jacobi_residual, compare_alpha, induced_alpha,
    pi_jacobi_certificate, AlphaComparison,
};
use jetpoisson_core::jetgroup::{one_dim_map, FormalMap};
use jetpoisson_core::rational::{int, ratio};
use jetpoisson_core::{Rational, Series, Truncation};
use serde::Serialize;

use crate::sampling;

/// One named verification check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified: Option<i32>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, certified: Option<i32>, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            certified,
            detail: detail.into(),
        }
    }
}

/// A full suite report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub order: i32,
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

impl Report {
    fn assemble(suite: &str, seed: u64, order: i32, checks: Vec<Check>) -> Self {
        let all_passed = checks.iter().all(|check| check.passed);
        Report {
            suite: suite.to_string(),
            seed,
            order,
            checks,
            all_passed,
        }
    }

    /// One line per check, then a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            let status = if check.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {}/{}", self.suite, check.name));
            if let Some(certified) = check.certified {
                out.push_str(&format!(" (certified through {certified})"));
            }
            if !check.detail.is_empty() {
                out.push_str(&format!(" — {}", check.detail));
            }
            out.push('\n');
        }
        let verdict = if self.all_passed { "passed" } else { "FAILED" };
        out.push_str(&format!(
            "suite {} with seed {}: {} of {} checks {verdict}\n",
            self.suite,
            self.seed,
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len(),
        ));
        out
    }

    /// First failing check name, if any.
    pub fn first_failure(&self) -> Option<&str> {
        self.checks
            .iter()
            .find(|check| !check.passed)
            .map(|check| check.name.as_str())
    }
}

/// Runs one suite by name; `all` concatenates every suite.
pub fn run_suite(suite: &str, seed: u64, order: i32) -> Result<Report> {
    let checks = match suite {
        "series" => series_checks(seed, order)?,
        "jetgroup" => jetgroup_checks(seed, order)?,
        "bialgebra" => bialgebra_checks(seed, order)?,
        "grouppoisson" => grouppoisson_checks(seed)?,
        "homspace" => homspace_checks(seed)?,
        "classify" => classify_checks(seed, order)?,
        "all" => {
            let mut checks = series_checks(seed, order)?;
            checks.extend(jetgroup_checks(seed, order)?);
            checks.extend(bialgebra_checks(seed, order)?);
            checks.extend(grouppoisson_checks(seed)?);
            checks.extend(homspace_checks(seed)?);
            checks.extend(classify_checks(seed, order)?);
            checks
        }
        other => anyhow::bail!("unknown suite `{other}`; expected all or a module name"),
    };
    Ok(Report::assemble(suite, seed, order, checks))
}

/// Invariant checks for a user-supplied bi-field: skewness and the
/// Yang–Baxter residual.
pub fn input_checks(phi: &BiField<Rational>, seed: u64, order: i32) -> Result<Report> {
    let mut checks = Vec::new();
    let skew = phi.is_skew()?;
    checks.push(Check::new(
        "skew-symmetry",
        skew,
        None,
        if skew {
            String::new()
        } else {
            "phi^{ij}(u,v) != -phi^{ji}(v,u)".to_string()
        },
    ));
    if skew {
        let residual = cybe_residual(phi)?;
        let zero = residual.is_certified_zero();
        checks.push(Check::new(
            "yang-baxter-residual",
            zero,
            Some(residual.certified_degree()),
            if zero {
                format!("residual 0 up to degree {}", residual.certified_degree())
            } else {
                "nonzero residual".to_string()
            },
        ));
    }
    Ok(Report::assemble("input", seed, order, checks))
}

fn series_checks(seed: u64, order: i32) -> Result<Vec<Check>> {
    let mut rng = sampling::seeded(seed);
    let mut checks = Vec::new();

    // A Laurent unit times its inverse is 1 through order + valuation.
    let trunc = Truncation::laurent(2, order, vec![-2, -2])?;
    let lead = Series::from_terms(
        trunc.clone(),
        [(vec![-1, 1], sampling::coefficient(&mut rng))],
    )?;
    let tail = sampling::polynomial(&mut rng, &trunc, 1, 2, 3)?;
    let unit = lead.mul(&Series::one(trunc.clone()).add(&tail)?)?;
    let inverse = unit.invert_unit()?;
    let window = order + unit.valuation().unwrap_or(0).min(0);
    let product = unit.mul(&inverse)?.with_max_degree(window);
    let one = Series::one(trunc.clone()).with_max_degree(window);
    checks.push(Check::new(
        "inversion-round-trip",
        product == one,
        Some(window),
        "",
    ));

    // Substitution is associative on origin-fixing arguments.
    let power = Truncation::power(1, order)?;
    let f = sampling::polynomial(&mut rng, &power, 1, 2, 3)?;
    let g = sampling::polynomial(&mut rng, &power, 1, 2, 3)?;
    let h = sampling::polynomial(&mut rng, &power, 1, 2, 3)?;
    let left = f.substitute(&[g.clone()])?.substitute(&[h.clone()])?;
    let right = f.substitute(&[g.substitute(&[h])?])?;
    checks.push(Check::new(
        "substitution-associativity",
        left == right,
        Some(order),
        "",
    ));

    // Product rule for partial derivatives, exact through order − 1.
    let a = sampling::polynomial(&mut rng, &power, 0, 3, 4)?;
    let b = sampling::polynomial(&mut rng, &power, 0, 3, 4)?;
    let direct = a.mul(&b)?.partial_derivative(0)?;
    let expanded = a
        .partial_derivative(0)?
        .mul(&b)?
        .add(&a.mul(&b.partial_derivative(0)?)?)?;
    let window = order - 1;
    checks.push(Check::new(
        "derivative-product-rule",
        direct.with_max_degree(window) == expanded.with_max_degree(window),
        Some(window),
        "",
    ));
    Ok(checks)
}

fn jetgroup_checks(seed: u64, order: i32) -> Result<Vec<Check>> {
    let mut rng = sampling::seeded(seed);
    let mut checks = Vec::new();

    // Golden inverse of t ↦ 2t + 3t² + 5t³.
    let trunc = Truncation::power(1, 3)?;
    let map = one_dim_map(&trunc, &[int(2), int(3), int(5)])?;
    let inverse = map.invert()?;
    let expected = one_dim_map(&trunc, &[ratio(1, 2)?, ratio(-3, 8)?, ratio(1, 4)?])?;
    checks.push(Check::new(
        "inverse-golden",
        inverse.components() == expected.components(),
        Some(3),
        "coefficients 1/2, -3/8, 1/4",
    ));

    // Composition with the inverse is the identity jet.
    let map = sampling::jet_map(&mut rng, 2, order)?;
    let inverse = map.invert()?;
    let identity = FormalMap::identity(map.truncation())?;
    let round = map.compose(&inverse)?;
    checks.push(Check::new(
        "composition-round-trip",
        round.components() == identity.components(),
        Some(order),
        "",
    ));

    // Chain rule: (g∘h)_* = (g_* ∘ h) · h_*, exact through order − 1.
    let outer = sampling::jet_map(&mut rng, 2, order)?;
    let inner = sampling::jet_map(&mut rng, 2, order)?;
    let composed = outer.compose(&inner)?;
    let direct = composed.jacobian()?;
    let outer_jac = outer.jacobian()?;
    let inner_jac = inner.jacobian()?;
    let window = order - 1;
    let mut chain_holds = true;
    for i in 0..2 {
        for j in 0..2 {
            let mut entry = Series::zero(inner.truncation().clone());
            for k in 0..2 {
                let moved = outer_jac[i][k].substitute(inner.components())?;
                entry = entry.add(&moved.mul(&inner_jac[k][j])?)?;
            }
            if entry.with_max_degree(window) != direct[i][j].with_max_degree(window) {
                chain_holds = false;
            }
        }
    }
    checks.push(Check::new(
        "jacobian-chain-rule",
        chain_holds,
        Some(window),
        "",
    ));
    Ok(checks)
}

fn bialgebra_checks(seed: u64, order: i32) -> Result<Vec<Check>> {
    let mut rng = sampling::seeded(seed);
    let mut checks = Vec::new();

    // Canonical one-variable family solves the classical equation.
    let mut family_ok = true;
    let mut family_cert = i32::MAX;
    for d in [-1, 1, 2, 3] {
        let phi = w1_canonical(d, order)?;
        let residual = cybe_residual(&phi)?;
        family_ok &= residual.is_certified_zero();
        family_cert = family_cert.min(residual.certified_degree());
    }
    checks.push(Check::new(
        "canonical-family-certificates",
        family_ok,
        Some(family_cert),
        "exponents -1, 1, 2, 3",
    ));

    // Seeded generator tuples produce certified solutions.
    let mut seeded_ok = true;
    let mut seeded_cert = i32::MAX;
    for _ in 0..3 {
        let (_, rmatrix) = sampling::solution_pair(&mut rng, 2, order.min(6))?;
        let residual = cybe_residual(&rmatrix)?;
        seeded_ok &= residual.is_certified_zero();
        seeded_cert = seeded_cert.min(residual.certified_degree());
    }
    checks.push(Check::new(
        "seeded-generator-certificates",
        seeded_ok,
        Some(seeded_cert),
        "three perturbed-identity tuples in two variables",
    ));

    // The factored vector-field pair solves its defining equation, and its
    // r-matrix is certified.
    let generators = sampling::generator_tuple(&mut rng, 2, order.min(6))?;
    let pair = theta_psi_from_generators(&generators)?;
    let residual = theta_psi_residual(&pair)?;
    let window = order.min(6) - 1;
    let pair_ok = residual
        .iter()
        .all(|series| series.with_max_degree(window).is_zero());
    let via_pair = rmatrix_from_theta_psi(&pair)?;
    let pair_cert = cybe_residual(&via_pair)?;
    checks.push(Check::new(
        "factored-pair-residual",
        pair_ok && pair_cert.is_certified_zero(),
        Some(window),
        "",
    ));

    // Negative control: u² − v² is skew but not a solution.
    let trunc = Truncation::power(2, order)?;
    let square = Series::from_terms(
        trunc.clone(),
        [(vec![2, 0], int(1)), (vec![0, 2], int(-1))],
    )?;
    let control = BiField::new(vec![vec![square]])?;
    let control_residual = cybe_residual(&control)?;
    checks.push(Check::new(
        "nonsolution-control",
        !control_residual.is_certified_zero(),
        Some(control_residual.certified_degree()),
        "u^2 - v^2 must fail the certificate",
    ));
    Ok(checks)
}

/// Jet coordinate `x^component_index`.
fn coordinate(component: u32, index: &[u32]) -> Indeterminate {
    Indeterminate::new('x', component, index.to_vec())
}

/// Monomial product of jet coordinates with exponents.
fn jet_monomial(factors: &[(u32, &[u32], i32)]) -> Monomial {
    Monomial::new(
        factors
            .iter()
            .map(|(component, index, power)| (coordinate(*component, index), *power))
            .collect(),
    )
}

fn grouppoisson_checks(seed: u64) -> Result<Vec<Check>> {
    let mut rng = sampling::seeded(seed);
    let mut checks = Vec::new();

    // One-variable goldens at exponent 1: {x_1,x_2} = x_1³ − x_1² and
    // {x_1,x_3} = 2x_1²x_2 − 2x_1x_2 on the origin-fixing group.
    let trunc = Truncation::power(2, 6)?;
    let field = Series::from_terms(trunc, [(vec![2, 1], int(1)), (vec![1, 2], int(-1))])?;
    let phi = BiField::new(vec![vec![field]])?;
    let jet = SymbolicJet::new(1, 6, false, 'x')?;
    let omega = omega_bifield(&phi, &jet)?;
    let cubic = CoeffPoly::term(jet_monomial(&[(1, &[1], 3)]), int(1))
        .add(&CoeffPoly::term(jet_monomial(&[(1, &[1], 2)]), int(-1)));
    let mixed = CoeffPoly::term(jet_monomial(&[(1, &[1], 2), (1, &[2], 1)]), int(2)).add(
        &CoeffPoly::term(jet_monomial(&[(1, &[1], 1), (1, &[2], 1)]), int(-2)),
    );
    let golden_one = bracket_coefficient(&omega, 0, &[1], 0, &[2])? == cubic
        && bracket_coefficient(&omega, 0, &[1], 0, &[3])? == mixed
        && bracket_coefficient(&omega, 0, &[2], 0, &[1])? == cubic.neg();
    checks.push(Check::new(
        "one-dim-bracket-goldens",
        golden_one,
        Some(omega.certified_degree()),
        "{x_1,x_2} = x_1^3 - x_1^2 and {x_1,x_3} = 2x_1^2x_2 - 2x_1x_2",
    ));

    // Two-variable golden for the identity matrix, constants included:
    // {x¹_{10}, x²_{01}} = 2x¹_{00}x¹_{10}x²_{01} − 2x²_{00}x¹_{10}x²_{01}.
    let matrix = IntegerMatrix::new(vec![vec![1, 0], vec![0, 1]])?;
    let phi2 = canonical_rmatrix(&matrix, Normalization::Appendix, 3)?;
    let jet2 = SymbolicJet::new(2, 3, true, 'x')?;
    let omega2 = omega_bifield(&phi2, &jet2)?;
    let expected = CoeffPoly::term(
        jet_monomial(&[(1, &[0, 0], 1), (1, &[1, 0], 1), (2, &[0, 1], 1)]),
        int(2),
    )
    .add(&CoeffPoly::term(
        jet_monomial(&[(2, &[0, 0], 1), (1, &[1, 0], 1), (2, &[0, 1], 1)]),
        int(-2),
    ));
    let computed = bracket_coefficient(&omega2, 0, &[1, 0], 1, &[0, 1])?;
    checks.push(Check::new(
        "two-dim-bracket-golden",
        computed == expected,
        Some(omega2.certified_degree()),
        "{x^1_{10}, x^2_{01}} for the identity matrix",
    ));

    // The group tensor is multiplicative on seeded jets.
    let outer = sampling::jet_map(&mut rng, 2, 4)?;
    let inner = sampling::jet_map(&mut rng, 2, 4)?;
    let phi4 = canonical_rmatrix(&matrix, Normalization::Raw, 4)?;
    let residual = multiplicativity_residual(&phi4, &outer, &inner)?;
    checks.push(Check::new(
        "tensor-multiplicativity",
        residual.is_certified_zero(),
        Some(residual.certified_degree()),
        "",
    ));
    Ok(checks)
}

fn homspace_checks(seed: u64) -> Result<Vec<Check>> {
    let mut rng = sampling::seeded(seed);
    let mut checks = Vec::new();

    // The induced bivector of a certified field satisfies Jacobi.
    let matrix = IntegerMatrix::new(vec![vec![1, 0], vec![0, 1]])?;
    let phi = canonical_rmatrix(&matrix, Normalization::Raw, 8)?;
    let alpha = induced_alpha(&phi)?;
    let jacobi = alpha_jacobi_residual(&alpha)?;
    checks.push(Check::new(
        "induced-jacobi",
        jacobi.is_certified_zero(),
        Some(jacobi.certified_degree()),
        "",
    ));

    // Base-space golden: for the identity matrix the induced bracket is
    // u¹u²(u¹ − u²) on the (1,2) slot.
    let alpha_display = canonical_alpha(&matrix, Normalization::Appendix, 8)?;
    let trunc = Truncation::power(2, 8)?;
    let slot = Series::from_terms(
        trunc.clone(),
        [(vec![2, 1], int(1)), (vec![1, 2], int(-1))],
    )?;
    let display = vec![
        vec![Series::zero(trunc.clone()), slot.clone()],
        vec![slot.scale(&int(-1)), Series::zero(trunc)],
    ];
    checks.push(Check::new(
        "base-bracket-golden",
        compare_alpha(&alpha_display, &display) == AlphaComparison::ExactMatch,
        None,
        "u^1u^2(u^1 - u^2) for the identity matrix",
    ));

    // Poisson property of the base action for a seeded group element.
    let map = sampling::jet_map(&mut rng, 2, 5)?;
    let phi5 = canonical_rmatrix(&matrix, Normalization::Raw, 5)?;
    let alpha5 = induced_alpha(&phi5)?;
    let action = alpha_action_residual(&alpha5, &phi5, &map)?;
    checks.push(Check::new(
        "base-action-residual",
        action.is_certified_zero(),
        Some(action.certified_degree()),
        "",
    ));

    // Jacobi certificate for the jet bivector of a seeded one-to-two jet.
    let mut components = Vec::new();
    let trunc1 = Truncation::power(1, 5)?;
    for _ in 0..2 {
        let series = sampling::polynomial(&mut rng, &trunc1, 1, 3, 3)?;
        components.push(series);
    }
    let jet = FormalMap::new(components)?;
    let phi_source = w1_canonical(1, 5)?;
    let phi_target = canonical_rmatrix(&matrix, Normalization::Raw, 5)?;
    let report = pi_jacobi_certificate(&jet, &phi_source, &phi_target)?;
    checks.push(Check::new(
        "jet-jacobi-certificate",
        report.certified() && report.sides_agree(),
        Some(report.source_residual.certified_degree()),
        "",
    ));
    Ok(checks)
}

fn classify_checks(seed: u64, order: i32) -> Result<Vec<Check>> {
    let mut rng = sampling::seeded(seed);
    let mut checks = Vec::new();

    // Laplace expansion identities for seeded 3×3 matrices.
    let mut expansion_ok = true;
    for _ in 0..3 {
        let matrix = sampling::nonsingular_matrix(&mut rng, 3, -2, 2);
        let table = minor_table(&matrix);
        for row in 0..3 {
            expansion_ok &= table.expansion_holds(&matrix, row);
        }
    }
    checks.push(Check::new(
        "minor-expansion",
        expansion_ok,
        None,
        "three seeded integer matrices",
    ));

    // Normalization scaling: the display convention is det² times raw.
    let matrix = sampling::nonsingular_matrix(&mut rng, 2, 0, 2);
    let raw = canonical_rmatrix(&matrix, Normalization::Raw, order)?;
    let appendix = canonical_rmatrix(&matrix, Normalization::Appendix, order)?;
    let det = matrix.determinant();
    let scaled = raw.scale(&int(det * det));
    checks.push(Check::new(
        "normalization-scaling",
        appendix.components() == scaled.components(),
        None,
        format!("determinant {det}"),
    ));

    // Singular matrices yield an explicit left kernel witness.
    let singular = IntegerMatrix::new(vec![vec![1, 2], vec![2, 4]])?;
    let witness = degeneracy_kernel(&singular);
    let witness_ok = match &witness {
        Some(relation) => {
            relation.iter().any(|&c| c != 0)
                && (0..2).all(|var| {
                    (0..2)
                        .map(|i| relation[i] * i64::from(singular.entry(i, var)))
                        .sum::<i64>()
                        == 0
                })
        }
        None => false,
    };
    checks.push(Check::new(
        "degeneracy-witness",
        witness_ok && degeneracy_kernel(&sampling::nonsingular_matrix(&mut rng, 2, 0, 2)).is_none(),
        None,
        "rank-one matrix has a kernel row, nonsingular has none",
    ));

    // Seeded Laurent orbit members still solve the classical equation.
    let diag = IntegerMatrix::new(vec![vec![1, 0], vec![0, 1]])?;
    let (_, rmatrix) = laurent_family_sample(&diag, seed, order.min(6))?;
    let residual = cybe_residual(&rmatrix)?;
    checks.push(Check::new(
        "orbit-sample-certificates",
        residual.is_certified_zero(),
        Some(residual.certified_degree()),
        "",
    ));
    Ok(checks)
}
