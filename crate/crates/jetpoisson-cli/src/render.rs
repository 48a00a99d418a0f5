//! Deterministic text and LaTeX rendering of series, fields, and bracket
//! polynomials.
//!
//! Point variables follow the `u, v, w` convention (with per-component
//! superscripts in several dimensions); jet coordinates render as `x^i_I`.
//! Terms are ordered by total degree, then reverse-lexicographically, so
//! output is byte-stable run to run.

use jetpoisson_core::coeff::{CoeffPoly, Indeterminate};
use jetpoisson_core::rational;
use jetpoisson_core::{Rational, Series};
use num_traits::Signed;

/// Output format selector shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

/// Variable names for `blocks` point blocks of `n` coordinates each, in
/// plain text (`u`, or `u1..un`).
pub fn text_names(blocks: &[&str], n: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(blocks.len() * n);
    for block in blocks {
        for i in 1..=n {
            if n == 1 {
                names.push((*block).to_string());
            } else {
                names.push(format!("{block}{i}"));
            }
        }
    }
    names
}

/// Variable names in LaTeX (`u`, or `u^{1}..u^{n}`).
pub fn latex_names(blocks: &[&str], n: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(blocks.len() * n);
    for block in blocks {
        for i in 1..=n {
            if n == 1 {
                names.push((*block).to_string());
            } else {
                names.push(format!("{block}^{{{i}}}"));
            }
        }
    }
    names
}

/// Exponent vectors sorted by total degree, then reverse-lexicographically.
fn ordered_terms(series: &Series<Rational>) -> Vec<(Vec<i32>, Rational)> {
    let mut terms: Vec<(Vec<i32>, Rational)> = series
        .terms()
        .map(|(e, c)| (e.to_vec(), c.clone()))
        .collect();
    terms.sort_by(|(a, _), (b, _)| {
        let da: i32 = a.iter().sum();
        let db: i32 = b.iter().sum();
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    terms
}

fn text_monomial(exponents: &[i32], names: &[String]) -> String {
    let mut factors = Vec::new();
    for (&e, name) in exponents.iter().zip(names) {
        match e {
            0 => {}
            1 => factors.push(name.clone()),
            _ => factors.push(format!("{name}^{e}")),
        }
    }
    factors.join("*")
}

fn latex_monomial(exponents: &[i32], names: &[String]) -> String {
    let mut out = String::new();
    for (&e, name) in exponents.iter().zip(names) {
        match e {
            0 => {}
            1 => out.push_str(name),
            _ if name.contains('^') => {
                out.push_str(&format!("({name})^{{{e}}}"));
            }
            _ => out.push_str(&format!("{name}^{{{e}}}")),
        }
    }
    out
}

fn latex_rational_abs(value: &Rational) -> String {
    let abs = value.abs();
    if rational::is_integer(&abs) {
        abs.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
    }
}

fn join_signed(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (negative, body)) in parts.into_iter().enumerate() {
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    out
}

/// Renders a rational-coefficient series as plain text.
pub fn series_text(series: &Series<Rational>, names: &[String]) -> String {
    let parts = ordered_terms(series)
        .into_iter()
        .map(|(exponents, coefficient)| {
            let negative = rational::signum(&coefficient) < 0;
            let abs = coefficient.abs();
            let monomial = text_monomial(&exponents, names);
            let body = if monomial.is_empty() {
                rational::format_ratio(&abs)
            } else if abs == rational::int(1) {
                monomial
            } else {
                format!("{}*{monomial}", rational::format_ratio(&abs))
            };
            (negative, body)
        })
        .collect();
    join_signed(parts)
}

/// Renders a rational-coefficient series as LaTeX.
pub fn series_latex(series: &Series<Rational>, names: &[String]) -> String {
    let parts = ordered_terms(series)
        .into_iter()
        .map(|(exponents, coefficient)| {
            let negative = rational::signum(&coefficient) < 0;
            let monomial = latex_monomial(&exponents, names);
            let body = if monomial.is_empty() {
                latex_rational_abs(&coefficient)
            } else if coefficient.abs() == rational::int(1) {
                monomial
            } else {
                format!("{}{monomial}", latex_rational_abs(&coefficient))
            };
            (negative, body)
        })
        .collect();
    join_signed(parts)
}

/// Renders a jet coordinate `x^i_I` as text, omitting the component when
/// the jet is one-dimensional.
pub fn coordinate_text(ind: &Indeterminate, one_dimensional: bool) -> String {
    let index: Vec<String> = ind.index.iter().map(u32::to_string).collect();
    if one_dimensional {
        format!("{}_{}", ind.family, index.join(","))
    } else {
        format!("{}{}_({})", ind.family, ind.component, index.join(","))
    }
}

/// Renders a jet coordinate `x^i_I` as LaTeX.
pub fn coordinate_latex(ind: &Indeterminate, one_dimensional: bool) -> String {
    let subscript = if ind.index.iter().all(|&e| e <= 9) {
        ind.index
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join("")
    } else {
        ind.index
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    if one_dimensional {
        format!("{}_{{{subscript}}}", ind.family)
    } else {
        format!("{}^{{{}}}_{{{subscript}}}", ind.family, ind.component)
    }
}

fn poly_parts(
    poly: &CoeffPoly,
    render: impl Fn(&Indeterminate) -> String,
    latex: bool,
) -> Vec<(bool, String)> {
    poly.terms()
        .map(|(monomial, coefficient)| {
            let negative = rational::signum(coefficient) < 0;
            let abs = coefficient.abs();
            let mut factors = Vec::new();
            for (ind, power) in monomial.factors() {
                let name = render(ind);
                match power {
                    1 => factors.push(name),
                    _ if latex => factors.push(format!("({name})^{{{power}}}")),
                    _ => factors.push(format!("{name}^{power}")),
                }
            }
            let body = if factors.is_empty() {
                if latex {
                    latex_rational_abs(coefficient)
                } else {
                    rational::format_ratio(&abs)
                }
            } else {
                let joined = factors.join(if latex { "" } else { "*" });
                if abs == rational::int(1) {
                    joined
                } else if latex {
                    format!("{}{joined}", latex_rational_abs(coefficient))
                } else {
                    format!("{}*{joined}", rational::format_ratio(&abs))
                }
            };
            (negative, body)
        })
        .collect()
}

/// Renders a bracket polynomial as plain text.
pub fn poly_text(poly: &CoeffPoly, one_dimensional: bool) -> String {
    join_signed(poly_parts(
        poly,
        |ind| coordinate_text(ind, one_dimensional),
        false,
    ))
}

/// Renders a bracket polynomial as LaTeX.
pub fn poly_latex(poly: &CoeffPoly, one_dimensional: bool) -> String {
    join_signed(poly_parts(
        poly,
        |ind| coordinate_latex(ind, one_dimensional),
        true,
    ))
}
