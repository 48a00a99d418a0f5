//! Randomized algebraic-law tests.
//!
//! Each block checks one identity the library promises exactly — ring laws,
//! inversion round trips, group laws, residual covariance, induced-structure
//! compatibility — on randomly generated inputs. Golden values live with the
//! modules; this file only asserts laws that must hold for *every* input.

use jetpoisson_core::bialgebra::{
    self, BiField, GeneratorTuple, VectorField,
};
use jetpoisson_core::classify::{self, IntegerMatrix, Normalization};
use jetpoisson_core::grouppoisson;
use jetpoisson_core::homspace;
use jetpoisson_core::jetgroup::{self, FormalMap};
use jetpoisson_core::matrix;
use jetpoisson_core::rational::{int, ratio};
use jetpoisson_core::{Coeff, Rational, Series, Truncation};
use proptest::prelude::*;

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

/// A small nonzero rational.
fn coeff() -> impl Strategy<Value = Rational> {
    ((-4i64..=4).prop_filter("nonzero", |n| *n != 0), 1i64..=3)
        .prop_map(|(n, d)| ratio(n, d).unwrap())
}

/// A sparse polynomial with exponents in `0..=2` per variable, filtered to
/// the ring's total degree.
fn poly(nvars: usize, degree: i32) -> impl Strategy<Value = Series<Rational>> {
    let term = (prop::collection::vec(0i32..=2, nvars), coeff());
    prop::collection::vec(term, 0..5).prop_map(move |terms| {
        let trunc = Truncation::power(nvars, degree).unwrap();
        let kept = terms
            .into_iter()
            .filter(|(e, _)| e.iter().sum::<i32>() <= degree);
        Series::from_terms(trunc, kept).unwrap()
    })
}

/// A sparse Laurent series with exponents in `-2..=2` per variable.
fn laurent_poly(nvars: usize, degree: i32) -> impl Strategy<Value = Series<Rational>> {
    let term = (prop::collection::vec(-2i32..=2, nvars), coeff());
    prop::collection::vec(term, 0..5).prop_map(move |terms| {
        let trunc = Truncation::laurent(nvars, degree, vec![-2; nvars]).unwrap();
        let kept = terms
            .into_iter()
            .filter(|(e, _)| e.iter().sum::<i32>() <= degree);
        Series::from_terms(trunc, kept).unwrap()
    })
}

/// A polynomial whose terms all have total degree at least `floor`.
fn poly_from_degree(
    nvars: usize,
    degree: i32,
    floor: i32,
) -> impl Strategy<Value = Series<Rational>> {
    poly(nvars, degree).prop_map(move |series| {
        let trunc = series.truncation().clone();
        let kept = series
            .terms()
            .filter(|(e, _)| e.iter().sum::<i32>() >= floor)
            .map(|(e, c)| (e.to_vec(), c.clone()));
        let kept: Vec<_> = kept.collect();
        Series::from_terms(trunc, kept).unwrap()
    })
}

/// An invertible two-variable jet: triangular unit linear part plus random
/// higher-order terms.
fn jet2(degree: i32) -> impl Strategy<Value = FormalMap<Rational>> {
    (
        coeff(),
        coeff(),
        coeff(),
        poly_from_degree(2, degree, 2),
        poly_from_degree(2, degree, 2),
    )
        .prop_map(move |(c0, c1, off, t0, t1)| {
            let trunc = Truncation::power(2, degree).unwrap();
            let u0: Series<Rational> = Series::var(trunc.clone(), 0).unwrap();
            let u1: Series<Rational> = Series::var(trunc, 1).unwrap();
            let comp0 = u0
                .scale(&c0)
                .add(&u1.scale(&off))
                .unwrap()
                .add(&t0)
                .unwrap();
            let comp1 = u1.scale(&c1).add(&t1).unwrap();
            FormalMap::new(vec![comp0, comp1]).unwrap()
        })
}

/// An invertible one-variable jet with coefficients from degree one up.
fn jet1(degree: i32) -> impl Strategy<Value = FormalMap<Rational>> {
    (coeff(), prop::collection::vec((-3i64..=3).prop_map(int), 0..4)).prop_map(
        move |(lead, tail)| {
            let trunc = Truncation::power(1, degree).unwrap();
            let mut coeffs = vec![lead];
            coeffs.extend(tail);
            jetgroup::one_dim_map(&trunc, &coeffs).unwrap()
        },
    )
}

/// A skew bi-field in `n` dimensions: ψ^{ij}(u,v) − ψ^{ji}(v,u) for random ψ.
fn skew_field(n: usize, degree: i32) -> impl Strategy<Value = BiField<Rational>> {
    prop::collection::vec(poly(2 * n, degree), n * n).prop_map(move |entries| {
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            rows.push(entries[i * n..(i + 1) * n].to_vec());
        }
        let raw = BiField::new(rows).unwrap();
        raw.sub(&raw.swapped_transpose().unwrap()).unwrap()
    })
}

/// A square integer matrix with entries in `lo..=hi`.
fn integer_matrix(n: usize, lo: i32, hi: i32) -> impl Strategy<Value = IntegerMatrix> {
    prop::collection::vec(prop::collection::vec(lo..=hi, n), n)
        .prop_map(|rows| IntegerMatrix::new(rows).unwrap())
}

/// A generator tuple that perturbs the identity by terms of degree ≥ 2.
fn perturbed_identity(n: usize, degree: i32) -> impl Strategy<Value = GeneratorTuple<Rational>> {
    prop::collection::vec(poly_from_degree(n, degree, 2), n).prop_map(move |tails| {
        let trunc = Truncation::power(n, degree).unwrap();
        let components = tails
            .into_iter()
            .enumerate()
            .map(|(i, tail)| {
                let var: Series<Rational> = Series::var(trunc.clone(), i).unwrap();
                var.add(&tail).unwrap()
            })
            .collect();
        GeneratorTuple::new(components).unwrap()
    })
}

fn identity_components(trunc: &Truncation) -> Vec<Series<Rational>> {
    FormalMap::identity(trunc).unwrap().components().to_vec()
}

// ---------------------------------------------------------------------------
// Series ring laws
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_commutative(a in poly(2, 5), b in poly(2, 5)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn multiplication_is_associative(a in poly(2, 5), b in poly(2, 5), c in poly(2, 5)) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_distributes_over_linear_combinations(
        a in poly(2, 5),
        b in poly(2, 5),
        c in poly(2, 5),
        lambda in coeff(),
        mu in coeff(),
    ) {
        let combined = Series::linear_combine(&[
            (lambda.clone(), &b),
            (mu.clone(), &c),
        ]).unwrap();
        let left = a.mul(&combined).unwrap();
        let right = Series::linear_combine(&[
            (lambda, &a.mul(&b).unwrap()),
            (mu, &a.mul(&c).unwrap()),
        ]).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn partial_derivatives_commute(f in laurent_poly(2, 5)) {
        let first = f.partial_derivative(0).unwrap().partial_derivative(1).unwrap();
        let second = f.partial_derivative(1).unwrap().partial_derivative(0).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        f in poly(2, 5),
        g in poly(2, 5),
        p in prop::collection::vec((-2i64..=2, 1i64..=2), 2),
    ) {
        // Keep total degrees small enough that the product is untruncated.
        prop_assume!(f.total_degree().unwrap_or(0) + g.total_degree().unwrap_or(0) <= 5);
        let point: Vec<Rational> = p.into_iter().map(|(n, d)| ratio(n, d).unwrap()).collect();
        let sum = f.add(&g).unwrap().evaluate(&point).unwrap();
        let mut expected_sum = f.evaluate(&point).unwrap();
        expected_sum.add_assign(&g.evaluate(&point).unwrap());
        prop_assert_eq!(sum, expected_sum);
        let product = f.mul(&g).unwrap().evaluate(&point).unwrap();
        let expected_product = f.evaluate(&point).unwrap().mul(&g.evaluate(&point).unwrap());
        prop_assert_eq!(product, expected_product);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn unit_inversion_round_trips(
        head in coeff(),
        tail in poly_from_degree(2, 5, 1),
        lead in prop::collection::vec(-2i32..=0, 2),
    ) {
        // A unit: an invertible monomial times a power-series unit.
        let trunc = Truncation::laurent(2, 5, vec![-2, -2]).unwrap();
        let monomial = Series::monomial(trunc.clone(), lead, head).unwrap();
        let unit_part = Series::one(trunc.clone()).add(&tail.lift()).unwrap();
        let f = monomial.mul(&unit_part).unwrap();
        let product = f.mul(&f.invert_unit().unwrap()).unwrap();
        // The inverse is exact through the ring degree, so the product is
        // certified through N plus the (non-positive) valuation of f.
        let certified = 5 + f.valuation().unwrap().min(0);
        prop_assert_eq!(
            product.with_max_degree(certified),
            Series::one(trunc).with_max_degree(certified)
        );
    }

    #[test]
    fn substitution_composes(
        f in poly(2, 4),
        g0 in poly_from_degree(2, 4, 1),
        g1 in poly_from_degree(2, 4, 1),
        h0 in poly_from_degree(2, 4, 1),
        h1 in poly_from_degree(2, 4, 1),
    ) {
        let step = f.substitute(&[g0.clone(), g1.clone()]).unwrap();
        let left = step.substitute(&[h0.clone(), h1.clone()]).unwrap();
        let composed = [
            g0.substitute(&[h0.clone(), h1.clone()]).unwrap(),
            g1.substitute(&[h0, h1]).unwrap(),
        ];
        let right = f.substitute(&composed).unwrap();
        prop_assert_eq!(left, right);
    }
}

// ---------------------------------------------------------------------------
// Matrix inversion
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn matrix_inversion_round_trips(
        a0 in coeff(),
        d0 in coeff(),
        a_tail in poly_from_degree(2, 4, 1),
        d_tail in poly_from_degree(2, 4, 1),
        b in poly_from_degree(2, 4, 1),
        c in poly_from_degree(2, 4, 1),
    ) {
        let trunc = Truncation::power(2, 4).unwrap();
        let a = Series::constant(trunc.clone(), a0).add(&a_tail).unwrap();
        let d = Series::constant(trunc.clone(), d0).add(&d_tail).unwrap();
        let m = vec![vec![a, b], vec![c, d]];
        let (inv, det) = matrix::inverse(&m).unwrap();
        let eye = matrix::identity::<Rational>(2, &trunc);
        prop_assert_eq!(matrix::matmul(&m, &inv).unwrap(), eye.clone());
        prop_assert_eq!(matrix::matmul(&inv, &m).unwrap(), eye);
        let det_inv = matrix::determinant(&inv).unwrap();
        prop_assert_eq!(det.mul(&det_inv).unwrap(), Series::one(trunc));
    }

    #[test]
    fn laurent_matrix_inversion_round_trips(
        c0 in coeff(),
        c1 in coeff(),
        e0 in -2i32..=0,
        e1 in -2i32..=0,
        p in poly(2, 4),
    ) {
        // Monomial diagonal with an arbitrary upper corner: the determinant
        // is a single invertible monomial whatever `p` is.
        let trunc = Truncation::laurent(2, 4, vec![-2, -2]).unwrap();
        let m0 = Series::monomial(trunc.clone(), vec![e0, 0], c0).unwrap();
        let m1 = Series::monomial(trunc.clone(), vec![0, e1], c1).unwrap();
        let m = vec![vec![m0, p.lift()], vec![Series::zero(trunc.clone()), m1]];
        let (inv, det) = matrix::inverse(&m).unwrap();
        // The inverse entries are exact through the ring degree; multiplying
        // back by entries of valuation e0 + e1 ≥ −4 certifies this far.
        let certified = 4 + e0 + e1;
        let eye = matrix::identity::<Rational>(2, &trunc);
        for product in [matrix::matmul(&m, &inv).unwrap(), matrix::matmul(&inv, &m).unwrap()] {
            for (prod_row, eye_row) in product.iter().zip(&eye) {
                for (lhs, rhs) in prod_row.iter().zip(eye_row) {
                    prop_assert_eq!(
                        lhs.with_max_degree(certified),
                        rhs.with_max_degree(certified)
                    );
                }
            }
        }
        let det_inv = matrix::determinant(&inv).unwrap();
        prop_assert_eq!(
            det.mul(&det_inv).unwrap().with_max_degree(certified),
            Series::one(trunc).with_max_degree(certified)
        );
    }
}

// ---------------------------------------------------------------------------
// Jet-group laws
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inversion_composes_to_the_identity(x in jet2(5)) {
        let inverse = x.invert().unwrap();
        let id = identity_components(x.truncation());
        let right = x.compose(&inverse).unwrap();
        let left = inverse.compose(&x).unwrap();
        prop_assert_eq!(right.components(), &id[..]);
        prop_assert_eq!(left.components(), &id[..]);
    }

    #[test]
    fn composition_is_associative(x in jet2(4), y in jet2(4), z in jet2(4)) {
        let left = x.compose(&y).unwrap().compose(&z).unwrap();
        let right = x.compose(&y.compose(&z).unwrap()).unwrap();
        prop_assert_eq!(left.components(), right.components());
    }

    #[test]
    fn jacobians_obey_the_chain_rule(x in jet2(5), y in jet2(5)) {
        // Differentiation costs one degree: compare both sides through N−1.
        let degree = x.truncation().max_total_degree() - 1;
        let composite = x.compose(&y).unwrap().jacobian().unwrap();
        let outer = x.jacobian().unwrap();
        let mut moved = Vec::with_capacity(outer.len());
        for row in &outer {
            let mut out_row = Vec::with_capacity(row.len());
            for entry in row {
                out_row.push(entry.substitute(y.components()).unwrap());
            }
            moved.push(out_row);
        }
        let product = matrix::matmul(&moved, &y.jacobian().unwrap()).unwrap();
        for (comp_row, prod_row) in composite.iter().zip(&product) {
            for (lhs, rhs) in comp_row.iter().zip(prod_row) {
                prop_assert_eq!(lhs.with_max_degree(degree), rhs.with_max_degree(degree));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pushforward_is_an_action(x in jet2(4), y in jet2(4), phi in skew_field(2, 4)) {
        let step = jetgroup::pushforward_bifield(&x, &phi).unwrap();
        let two_steps = jetgroup::pushforward_bifield(&y, &step).unwrap();
        let composed = jetgroup::pushforward_bifield(&y.compose(&x).unwrap(), &phi).unwrap();
        let degree = two_steps.certified_degree().min(composed.certified_degree());
        prop_assert!(two_steps.sub(&composed).unwrap().vanishes_through(degree));
        prop_assert!(two_steps.is_skew().unwrap());
    }
}

// ---------------------------------------------------------------------------
// r-matrices and residuals
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn monomial_generator_tuples_solve_the_equation(m in integer_matrix(2, -2, 2)) {
        prop_assume!(m.determinant() != 0);
        let generators = classify::canonical_generators(&m, 6).unwrap();
        let phi = bialgebra::rmatrix_from_generators(&generators).unwrap();
        prop_assert!(phi.is_skew().unwrap());
        prop_assert!(bialgebra::cybe_residual(&phi).unwrap().is_certified_zero());
    }

    #[test]
    fn perturbed_identity_generators_solve_the_equation(
        generators in perturbed_identity(2, 5),
    ) {
        let phi = bialgebra::rmatrix_from_generators(&generators).unwrap();
        prop_assert!(phi.is_skew().unwrap());
        prop_assert!(bialgebra::cybe_residual(&phi).unwrap().is_certified_zero());
    }

    #[test]
    fn generator_pairs_factor_through_theta_psi(
        generators in perturbed_identity(2, 5),
    ) {
        let pair = bialgebra::theta_psi_from_generators(&generators).unwrap();
        // The derived Θ and Ψ truncate infinite series, so the derivative
        // products in the residual are exact through one degree less.
        for series in bialgebra::theta_psi_residual(&pair).unwrap() {
            prop_assert!(series.with_max_degree(4).is_zero());
        }
        let direct = bialgebra::rmatrix_from_generators(&generators).unwrap();
        let via_pair = bialgebra::rmatrix_from_theta_psi(&pair).unwrap();
        prop_assert!(direct.sub(&via_pair).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn residual_scales_quadratically(phi in skew_field(1, 4), c in coeff()) {
        let base = bialgebra::cybe_residual(&phi).unwrap();
        let scaled = bialgebra::cybe_residual(&phi.scale(&c)).unwrap();
        prop_assert_eq!(scaled.certified_degree(), base.certified_degree());
        let mut square = c.clone();
        square = square.mul(&c);
        prop_assert_eq!(
            scaled.component(0, 0, 0),
            &base.component(0, 0, 0).scale(&square)
        );
    }

    #[test]
    fn residuals_are_cyclic(phi in skew_field(2, 4)) {
        let residual = bialgebra::cybe_residual(&phi).unwrap();
        prop_assert!(residual.cyclic_symmetry_holds().unwrap());
    }

    #[test]
    fn coboundaries_are_cocycles(
        phi_entries in prop::collection::vec(poly(4, 5), 4),
        x0 in poly_from_degree(2, 5, 1),
        x1 in poly_from_degree(2, 5, 1),
        y0 in poly_from_degree(2, 5, 1),
        y1 in poly_from_degree(2, 5, 1),
    ) {
        // The identity is algebraic: any bi-field, any fields.
        let phi = BiField::new(vec![
            vec![phi_entries[0].clone(), phi_entries[1].clone()],
            vec![phi_entries[2].clone(), phi_entries[3].clone()],
        ]).unwrap();
        let x = VectorField::new(vec![x0, x1]).unwrap();
        let y = VectorField::new(vec![y0, y1]).unwrap();
        let residual = bialgebra::cocycle_residual(&phi, &x, &y).unwrap();
        prop_assert!(residual.certified_degree() >= 4);
        prop_assert!(residual.is_certified_zero());
    }

    #[test]
    fn one_variable_family_matches_the_generator_route(f in jet1(6)) {
        let generator = f.components()[0].clone();
        let via_family = bialgebra::w1_general(&generator).unwrap();
        let tuple = GeneratorTuple::new(vec![generator]).unwrap();
        let direct = bialgebra::rmatrix_from_generators(&tuple).unwrap();
        let degree = via_family.certified_degree().min(direct.certified_degree());
        prop_assert!(via_family.sub(&direct).unwrap().vanishes_through(degree));
    }
}

// ---------------------------------------------------------------------------
// Group tensor multiplicativity
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn group_tensor_is_multiplicative(x in jet2(4), y in jet2(4)) {
        let matrix = IntegerMatrix::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let phi = classify::canonical_rmatrix(&matrix, Normalization::Raw, 4).unwrap();
        let residual = grouppoisson::multiplicativity_residual(&phi, &x, &y).unwrap();
        prop_assert!(residual.is_certified_zero());
    }
}

// ---------------------------------------------------------------------------
// Induced structures
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn induced_alpha_satisfies_jacobi(m in integer_matrix(2, 0, 2)) {
        prop_assume!(m.determinant() != 0);
        let alpha = classify::canonical_alpha(&m, Normalization::Raw, 6).unwrap();
        let residual = homspace::alpha_jacobi_residual(&alpha).unwrap();
        prop_assert!(residual.is_certified_zero());
    }

    #[test]
    fn induced_alpha_support_stays_in_the_row_translates(m in integer_matrix(2, 0, 2)) {
        prop_assume!(m.determinant() != 0);
        let alpha = classify::canonical_alpha(&m, Normalization::Raw, 6).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for (exponents, _) in alpha.component(i, j).terms() {
                    let matches_row = (0..2).any(|k| {
                        (0..2).all(|var| {
                            let base = i32::from(var == i) + i32::from(var == j);
                            exponents[var] == base + m.entry(k, var)
                        })
                    });
                    prop_assert!(matches_row, "stray monomial {:?}", exponents);
                }
            }
        }
    }

    #[test]
    fn orbit_members_still_solve_the_equation(m in integer_matrix(2, 0, 2), x in jet2(6)) {
        prop_assume!(m.determinant() != 0);
        let phi = classify::canonical_rmatrix(&m, Normalization::Raw, 6).unwrap();
        let moved = jetgroup::pushforward_bifield(&x, &phi).unwrap();
        prop_assert!(bialgebra::cybe_residual(&moved).unwrap().is_certified_zero());
    }

    #[test]
    fn jet_bivector_preserves_skewness(
        comp0 in poly_from_degree(1, 4, 1),
        comp1 in poly_from_degree(1, 4, 1),
        phi_m in skew_field(1, 4),
        phi_n in skew_field(2, 4),
    ) {
        let map = FormalMap::new(vec![comp0, comp1]).unwrap();
        let pi = homspace::jet_pi(&map, &phi_m, &phi_n).unwrap();
        prop_assert!(pi.is_skew().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn jet_action_residual_vanishes_for_solutions(
        x in jet1(5),
        y in jet1(5),
        f in jet1(5),
    ) {
        let phi_m = bialgebra::w1_canonical(1, 5).unwrap();
        let phi_n = bialgebra::w1_canonical(2, 5).unwrap();
        let residual =
            homspace::jet_action_residual(&phi_m, &phi_n, &x, &y, &f).unwrap();
        prop_assert!(residual.is_certified_zero());
    }
}

// ---------------------------------------------------------------------------
// Integer-matrix bookkeeping
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn degeneracy_kernels_witness_singularity(m in integer_matrix(3, -2, 2)) {
        match classify::degeneracy_kernel(&m) {
            None => prop_assert!(m.determinant() != 0),
            Some(relation) => {
                prop_assert_eq!(m.determinant(), 0);
                prop_assert!(relation.iter().any(|&c| c != 0));
                for var in 0..3 {
                    let total: i64 = (0..3)
                        .map(|i| relation[i] * i64::from(m.entry(i, var)))
                        .sum();
                    prop_assert_eq!(total, 0);
                }
            }
        }
    }

    #[test]
    fn appendix_normalization_is_a_determinant_square(m in integer_matrix(2, 0, 2)) {
        prop_assume!(m.determinant() != 0);
        let raw = classify::canonical_rmatrix(&m, Normalization::Raw, 6).unwrap();
        let appendix = classify::canonical_rmatrix(&m, Normalization::Appendix, 6).unwrap();
        let det = m.determinant();
        let rescaled = raw.scale(&int(det * det));
        prop_assert!(appendix.sub(&rescaled).unwrap().is_zero());
    }
}
