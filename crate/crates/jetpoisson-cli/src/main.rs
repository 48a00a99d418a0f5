//! Command-line interface for the jetpoisson exact-arithmetic engine.
//!
//! Subcommands build r-matrices from generator data or integer matrices,
//! certify Yang–Baxter residuals, extract coordinate bracket tables, induce
//! base-space and jet-space bivectors, and run the deterministic
//! verification suites. All arithmetic is exact; every certificate line
//! carries the degree through which it holds.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use jetpoisson_core::bialgebra::{cybe_residual, rmatrix_from_generators, w1_canonical, BiField, GeneratorTuple, TriField};
use jetpoisson_core::classify::{
    canonical_alpha, canonical_generators, canonical_rmatrix, laurent_family_sample,
    special_orbit_rmatrix, Normalization,
};
use jetpoisson_core::grouppoisson::{bracket_coefficient, omega_bifield, SymbolicJet};
use jetpoisson_core::homspace::{induced_alpha, jet_pi, BiVectorOnSpace, JetBiField};
use jetpoisson_core::rational::int;
use jetpoisson_core::Rational;
use jetpoisson_cli::{json, render, verify};
use render::Format;

#[derive(Parser)]
#[command(
    name = "jetpoisson",
    about = "Exact computer algebra for coboundary Poisson structures on formal diffeomorphism groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Total-degree truncation order for constructed series.
    #[arg(long, global = true, default_value_t = 8)]
    order: i32,
    /// Seed for every deterministic sampler.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Scaling convention for canonical r-matrices.
    #[arg(long, global = true, value_enum, default_value_t = NormalizeArg::Raw)]
    normalize: NormalizeArg,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum NormalizeArg {
    Raw,
    Appendix,
}

impl From<NormalizeArg> for Normalization {
    fn from(arg: NormalizeArg) -> Normalization {
        match arg {
            NormalizeArg::Raw => Normalization::Raw,
            NormalizeArg::Appendix => Normalization::Appendix,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the r-matrix of a generator tuple or an integer matrix.
    Rmatrix {
        /// JSON file with the generator tuple (map document).
        #[arg(long, conflicts_with = "matrix")]
        generators: Option<PathBuf>,
        /// JSON file with the integer matrix.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Certify the classical Yang–Baxter residual of a bi-field.
    CybeCheck {
        /// JSON file with the bi-field to check.
        #[arg(long, conflicts_with_all = ["matrix", "generators"])]
        phi: Option<PathBuf>,
        /// JSON file with an integer matrix (canonical r-matrix is checked).
        #[arg(long, conflicts_with = "generators")]
        matrix: Option<PathBuf>,
        /// JSON file with a generator tuple.
        #[arg(long)]
        generators: Option<PathBuf>,
    },
    /// Tabulate coordinate brackets on the diffeomorphism group.
    Brackets {
        /// JSON file with an integer matrix.
        #[arg(long, conflicts_with = "phi")]
        matrix: Option<PathBuf>,
        /// JSON file with a bi-field.
        #[arg(long)]
        phi: Option<PathBuf>,
        /// Largest total degree of the tabulated coordinate indices.
        #[arg(long, default_value_t = 3)]
        bound: i32,
        /// Include the constant (index-zero) coordinates.
        #[arg(long)]
        include_constants: bool,
        /// Truncation degree of the symbolic jet (defaults to twice the
        /// bound, the least degree that certifies every tabulated pair).
        #[arg(long)]
        jet_degree: Option<i32>,
    },
    /// Induce the base-space bivector of a bi-field or matrix.
    Alpha {
        /// JSON file with a bi-field.
        #[arg(long, conflicts_with = "matrix")]
        phi: Option<PathBuf>,
        /// JSON file with an integer matrix.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Induce the jet-space bivector of a map between two bi-fields.
    JetPi {
        /// JSON file with the map document.
        #[arg(long)]
        map: PathBuf,
        /// JSON file with the source bi-field.
        #[arg(long)]
        phi_source: PathBuf,
        /// JSON file with the target bi-field.
        #[arg(long)]
        phi_target: PathBuf,
    },
    /// Emit the canonical bundle of an integer matrix: generators,
    /// r-matrix, and induced base bivector.
    Canonical {
        /// JSON file with the integer matrix.
        #[arg(long, required_unless_present = "special")]
        matrix: Option<PathBuf>,
        /// Use the special linear-orbit r-matrix of this dimension instead.
        #[arg(long, conflicts_with = "matrix")]
        special: Option<usize>,
    },
    /// The canonical one-variable family member for an exponent.
    W1 {
        /// Family exponent (a positive integer or -1).
        #[arg(long)]
        d: i32,
    },
    /// Draw a seeded member of the Laurent generator family of a matrix.
    Sample {
        /// JSON file with the integer matrix.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Run a deterministic verification suite, or check a supplied field.
    Verify {
        /// Suite name: all, series, jetgroup, bialgebra, grouppoisson,
        /// homspace, or classify.
        #[arg(long, default_value = "all")]
        suite: String,
        /// JSON file with a bi-field to check instead of a suite.
        #[arg(long)]
        phi: Option<PathBuf>,
    },
}

fn main() {
    let code = match run() {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    let (output, code) = dispatch(&cli)?;
    match &cli.global.out {
        Some(path) => std::fs::write(path, output)
            .with_context(|| format!("writing output to {}", path.display()))?,
        None => print!("{output}"),
    }
    Ok(code)
}

fn dispatch(cli: &Cli) -> Result<(String, i32)> {
    let global = &cli.global;
    match &cli.command {
        Command::Rmatrix { generators, matrix } => {
            let phi = field_from_sources(generators, matrix, &None, global)?;
            Ok((render_bifield(&phi, "phi", global.format)?, 0))
        }
        Command::CybeCheck {
            phi,
            matrix,
            generators,
        } => {
            let field = field_from_sources(generators, matrix, phi, global)?;
            let residual = cybe_residual(&field)?;
            cybe_report(&residual, global.format)
        }
        Command::Brackets {
            matrix,
            phi,
            bound,
            include_constants,
            jet_degree,
        } => {
            let field = field_from_sources(&None, matrix, phi, global)?;
            brackets_table(
                &field,
                *bound,
                *include_constants,
                jet_degree.unwrap_or(2 * *bound),
                global,
            )
        }
        Command::Alpha { phi, matrix } => {
            let alpha = match (phi, matrix) {
                (Some(path), None) => {
                    let field = load_bifield(path)?;
                    induced_alpha(&field)?
                }
                (None, Some(path)) => {
                    let matrix = json::matrix_from_doc(&json::read_doc(path)?)?;
                    canonical_alpha(&matrix, global.normalize.into(), global.order)?
                }
                _ => bail!("alpha needs exactly one of --phi or --matrix"),
            };
            Ok((render_alpha(&alpha, global.format)?, 0))
        }
        Command::JetPi {
            map,
            phi_source,
            phi_target,
        } => {
            let map = json::map_from_doc(&json::read_doc(map)?)?;
            let source = load_bifield(phi_source)?;
            let target = load_bifield(phi_target)?;
            let pi = jet_pi(&map, &source, &target)?;
            Ok((render_jet_field(&pi, global.format)?, 0))
        }
        Command::Canonical { matrix, special } => canonical_bundle(matrix, special, global),
        Command::W1 { d } => {
            let mut phi = w1_canonical(*d, global.order)?;
            if global.normalize == NormalizeArg::Appendix {
                phi = phi.scale(&int(i64::from(d * d)));
            }
            Ok((render_bifield(&phi, "phi", global.format)?, 0))
        }
        Command::Sample { matrix } => {
            let matrix = json::matrix_from_doc(&json::read_doc(matrix)?)?;
            let (generators, rmatrix) = laurent_family_sample(&matrix, global.seed, global.order)?;
            let residual = cybe_residual(&rmatrix)?;
            sample_bundle(&matrix, &generators, &rmatrix, &residual, global)
        }
        Command::Verify { suite, phi } => {
            let report = match phi {
                Some(path) => {
                    let field = load_bifield(path)?;
                    verify::input_checks(&field, global.seed, global.order)?
                }
                None => verify::run_suite(suite, global.seed, global.order)?,
            };
            let output = match global.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report)?),
                _ => report.to_text(),
            };
            let code = if report.all_passed {
                0
            } else {
                if let Some(name) = report.first_failure() {
                    eprintln!("check failed: {}/{name}", report.suite);
                }
                1
            };
            Ok((output, code))
        }
    }
}

/// Loads a bi-field from exactly one of the three sources: a generator
/// tuple, an integer matrix (canonical construction), or a stored field.
fn field_from_sources(
    generators: &Option<PathBuf>,
    matrix: &Option<PathBuf>,
    phi: &Option<PathBuf>,
    global: &Global,
) -> Result<BiField<Rational>> {
    match (generators, matrix, phi) {
        (Some(path), None, None) => {
            let map = json::map_from_doc(&json::read_doc(path)?)?;
            let tuple = GeneratorTuple::new(map.components().to_vec())?;
            Ok(rmatrix_from_generators(&tuple)?)
        }
        (None, Some(path), None) => {
            let matrix = json::matrix_from_doc(&json::read_doc(path)?)?;
            Ok(canonical_rmatrix(
                &matrix,
                global.normalize.into(),
                global.order,
            )?)
        }
        (None, None, Some(path)) => load_bifield(path),
        _ => bail!("need exactly one input source (--generators, --matrix, or --phi)"),
    }
}

fn load_bifield(path: &PathBuf) -> Result<BiField<Rational>> {
    json::bifield_from_doc(&json::read_doc(path)?)
}

/// Variable names for a field on `blocks` point blocks of `n` coordinates.
fn block_names(blocks: &[&str], n: usize, format: Format) -> Vec<String> {
    match format {
        Format::Latex => render::latex_names(blocks, n),
        _ => render::text_names(blocks, n),
    }
}

fn component_label(symbol: &str, indices: &[usize], format: Format) -> String {
    let digits: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
    match format {
        Format::Latex => format!("\\{symbol}^{{{}}}", digits.join("")),
        _ => format!("{symbol}^{{{}}}", digits.join("")),
    }
}

fn render_bifield(phi: &BiField<Rational>, symbol: &str, format: Format) -> Result<String> {
    if format == Format::Json {
        return Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&json::bifield_to_doc(phi))?
        ));
    }
    let n = phi.dim();
    let names = block_names(&["u", "v"], n, format);
    let symbol = if format == Format::Latex {
        if symbol == "phi" {
            "varphi"
        } else {
            symbol
        }
    } else {
        symbol
    };
    let mut out = String::new();
    for i in 0..n {
        for j in 0..n {
            let label = component_label(symbol, &[i, j], format);
            let body = match format {
                Format::Latex => render::series_latex(phi.component(i, j), &names),
                _ => render::series_text(phi.component(i, j), &names),
            };
            out.push_str(&format!("{label} = {body}\n"));
        }
    }
    out.push_str(&format!("certified through degree {}\n", phi.certified_degree()));
    Ok(out)
}

fn render_alpha(alpha: &BiVectorOnSpace<Rational>, format: Format) -> Result<String> {
    if format == Format::Json {
        return Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&json::alpha_to_doc(alpha))?
        ));
    }
    let n = alpha.dim();
    let names = block_names(&["u"], n, format);
    let mut out = String::new();
    for i in 0..n {
        for j in 0..n {
            let label = component_label("alpha", &[i, j], format);
            let body = match format {
                Format::Latex => render::series_latex(alpha.component(i, j), &names),
                _ => render::series_text(alpha.component(i, j), &names),
            };
            out.push_str(&format!("{label} = {body}\n"));
        }
    }
    out.push_str(&format!(
        "certified through degree {}\n",
        alpha.certified_degree()
    ));
    Ok(out)
}

fn render_jet_field(pi: &JetBiField<Rational>, format: Format) -> Result<String> {
    if format == Format::Json {
        return Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&json::jet_field_to_doc(pi))?
        ));
    }
    let names = block_names(&["u", "v"], pi.source_dim(), format);
    let mut out = String::new();
    for i in 0..pi.target_dim() {
        for j in 0..pi.target_dim() {
            let label = component_label("Pi", &[i, j], format);
            let body = match format {
                Format::Latex => render::series_latex(pi.component(i, j), &names),
                _ => render::series_text(pi.component(i, j), &names),
            };
            out.push_str(&format!("{label} = {body}\n"));
        }
    }
    out.push_str(&format!(
        "certified through degree {}\n",
        pi.certified_degree()
    ));
    Ok(out)
}

/// Renders the Yang–Baxter residual report and picks the exit code:
/// zero exactly when the residual vanishes through its certified degree.
fn cybe_report(residual: &TriField<Rational>, format: Format) -> Result<(String, i32)> {
    let zero = residual.is_certified_zero();
    let certified = residual.certified_degree();
    if format == Format::Json {
        let n = residual.dim();
        let components: Vec<Vec<Vec<json::SeriesDoc>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| json::series_to_doc(residual.component(i, j, k)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let doc = serde_json::json!({
            "dim": n,
            "certified_degree": certified,
            "zero": zero,
            "components": components,
        });
        let output = format!("{}\n", serde_json::to_string_pretty(&doc)?);
        return Ok((output, i32::from(!zero)));
    }
    if zero {
        return Ok((format!("residual 0 up to degree {certified}\n"), 0));
    }
    let n = residual.dim();
    let names = block_names(&["u", "v", "w"], n, format);
    let mut out = String::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let component = residual.component(i, j, k);
                if component.is_zero() {
                    continue;
                }
                let label = component_label("Phi", &[i, j, k], format);
                let body = match format {
                    Format::Latex => render::series_latex(component, &names),
                    _ => render::series_text(component, &names),
                };
                out.push_str(&format!("{label} = {body}\n"));
            }
        }
    }
    out.push_str(&format!(
        "residual nonzero (certified through degree {certified})\n"
    ));
    Ok((out, 1))
}

/// All multi-indices of the given width with total degree in `lo..=hi`,
/// in lexicographic order.
fn indices_up_to(width: usize, lo: i32, hi: i32) -> Vec<Vec<i32>> {
    fn extend(prefix: &mut Vec<i32>, width: usize, hi: i32, out: &mut Vec<Vec<i32>>) {
        if prefix.len() == width {
            out.push(prefix.clone());
            return;
        }
        let used: i32 = prefix.iter().sum();
        for next in 0..=(hi - used) {
            prefix.push(next);
            extend(prefix, width, hi, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), width, hi, &mut out);
    out.retain(|index| {
        let total: i32 = index.iter().sum();
        total >= lo && total <= hi
    });
    out.sort();
    out
}

fn brackets_table(
    field: &BiField<Rational>,
    bound: i32,
    include_constants: bool,
    jet_degree: i32,
    global: &Global,
) -> Result<(String, i32)> {
    if bound < 1 {
        bail!("index bound must be at least 1");
    }
    if jet_degree < 2 * bound {
        bail!(
            "jet degree {jet_degree} cannot certify index pairs up to total degree {}",
            2 * bound
        );
    }
    if jet_degree > global.order {
        bail!(
            "jet degree {jet_degree} exceeds the field order {}; raise --order",
            global.order
        );
    }
    let n = field.dim();
    let jet = SymbolicJet::new(n, jet_degree, include_constants, 'x')?;
    let cut: Vec<Vec<_>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| field.component(i, j).with_max_degree(jet_degree))
                .collect()
        })
        .collect();
    let cut = BiField::new(cut)?.with_certified(jet_degree.min(field.certified_degree()));
    let omega = omega_bifield(&cut, &jet)?;

    let lo = if include_constants { 0 } else { 1 };
    let mut coordinates: Vec<(usize, Vec<i32>)> = Vec::new();
    for component in 0..n {
        for index in indices_up_to(n, lo, bound) {
            coordinates.push((component, index));
        }
    }
    coordinates.sort();

    let mut pairs = Vec::new();
    for (pos, a) in coordinates.iter().enumerate() {
        for b in coordinates.iter().skip(pos + 1) {
            let poly = bracket_coefficient(&omega, a.0, &a.1, b.0, &b.1)?;
            pairs.push((a.clone(), b.clone(), poly));
        }
    }

    if global.format == Format::Json {
        let doc = json::BracketsDoc {
            pairs: pairs
                .iter()
                .map(|(a, b, poly)| json::PairDoc {
                    a: (a.0 + 1, a.1.clone()),
                    b: (b.0 + 1, b.1.clone()),
                    poly: json::poly_to_doc(poly),
                })
                .collect(),
        };
        return Ok((format!("{}\n", serde_json::to_string_pretty(&doc)?), 0));
    }

    let one_dimensional = n == 1;
    let coordinate_name = |entry: &(usize, Vec<i32>)| -> String {
        let index: Vec<u32> = entry.1.iter().map(|&e| e as u32).collect();
        let ind = jetpoisson_core::coeff::Indeterminate::new('x', entry.0 as u32 + 1, index);
        match global.format {
            Format::Latex => render::coordinate_latex(&ind, one_dimensional),
            _ => render::coordinate_text(&ind, one_dimensional),
        }
    };
    let mut out = String::new();
    for (a, b, poly) in &pairs {
        let body = match global.format {
            Format::Latex => render::poly_latex(poly, one_dimensional),
            _ => render::poly_text(poly, one_dimensional),
        };
        match global.format {
            Format::Latex => out.push_str(&format!(
                "\\{{{}, {}\\}} = {body}\n",
                coordinate_name(a),
                coordinate_name(b)
            )),
            _ => out.push_str(&format!(
                "{{{}, {}}} = {body}\n",
                coordinate_name(a),
                coordinate_name(b)
            )),
        }
    }
    out.push_str(&format!(
        "certified through degree {}\n",
        omega.certified_degree()
    ));
    Ok((out, 0))
}

fn canonical_bundle(
    matrix_path: &Option<PathBuf>,
    special: &Option<usize>,
    global: &Global,
) -> Result<(String, i32)> {
    if let Some(n) = special {
        let phi = special_orbit_rmatrix(*n, global.order)?;
        let alpha = induced_alpha(&phi)?;
        return bundle_output(None, None, &phi, &alpha, global);
    }
    let Some(matrix_path) = matrix_path else {
        bail!("canonical needs --matrix or --special");
    };
    let matrix = json::matrix_from_doc(&json::read_doc(matrix_path)?)?;
    let generators = canonical_generators(&matrix, global.order)?;
    let phi = canonical_rmatrix(&matrix, global.normalize.into(), global.order)?;
    let alpha = canonical_alpha(&matrix, global.normalize.into(), global.order)?;
    bundle_output(Some(&matrix), Some(&generators), &phi, &alpha, global)
}

fn bundle_output(
    matrix: Option<&jetpoisson_core::classify::IntegerMatrix>,
    generators: Option<&GeneratorTuple<Rational>>,
    phi: &BiField<Rational>,
    alpha: &BiVectorOnSpace<Rational>,
    global: &Global,
) -> Result<(String, i32)> {
    if global.format == Format::Json {
        let mut doc = serde_json::Map::new();
        if let Some(matrix) = matrix {
            doc.insert(
                "matrix".to_string(),
                serde_json::to_value(json::matrix_to_doc(matrix))?,
            );
        }
        if let Some(generators) = generators {
            let components: Vec<json::SeriesDoc> = generators
                .components()
                .iter()
                .map(json::series_to_doc)
                .collect();
            doc.insert("generators".to_string(), serde_json::to_value(components)?);
        }
        doc.insert(
            "rmatrix".to_string(),
            serde_json::to_value(json::bifield_to_doc(phi))?,
        );
        doc.insert(
            "alpha".to_string(),
            serde_json::to_value(json::alpha_to_doc(alpha))?,
        );
        let output = format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::Value::Object(doc))?
        );
        return Ok((output, 0));
    }
    let mut out = String::new();
    if let Some(generators) = generators {
        let names = block_names(&["u"], generators.dim(), global.format);
        for (k, series) in generators.components().iter().enumerate() {
            let body = match global.format {
                Format::Latex => render::series_latex(series, &names),
                _ => render::series_text(series, &names),
            };
            match global.format {
                Format::Latex => out.push_str(&format!("F^{{{}}} = {body}\n", k + 1)),
                _ => out.push_str(&format!("F^{{{}}} = {body}\n", k + 1)),
            }
        }
    }
    out.push_str(&render_bifield(phi, "phi", global.format)?);
    out.push_str(&render_alpha(alpha, global.format)?);
    Ok((out, 0))
}

fn sample_bundle(
    matrix: &jetpoisson_core::classify::IntegerMatrix,
    generators: &GeneratorTuple<Rational>,
    rmatrix: &BiField<Rational>,
    residual: &TriField<Rational>,
    global: &Global,
) -> Result<(String, i32)> {
    let zero = residual.is_certified_zero();
    if global.format == Format::Json {
        let components: Vec<json::SeriesDoc> = generators
            .components()
            .iter()
            .map(json::series_to_doc)
            .collect();
        let doc = serde_json::json!({
            "matrix": json::matrix_to_doc(matrix),
            "seed": global.seed,
            "order": global.order,
            "generators": components,
            "rmatrix": json::bifield_to_doc(rmatrix),
            "certificate": {
                "certified_degree": residual.certified_degree(),
                "zero": zero,
            },
        });
        let output = format!("{}\n", serde_json::to_string_pretty(&doc)?);
        return Ok((output, i32::from(!zero)));
    }
    let mut out = String::new();
    let names = block_names(&["u"], generators.dim(), global.format);
    for (k, series) in generators.components().iter().enumerate() {
        let body = match global.format {
            Format::Latex => render::series_latex(series, &names),
            _ => render::series_text(series, &names),
        };
        out.push_str(&format!("F^{{{}}} = {body}\n", k + 1));
    }
    out.push_str(&render_bifield(rmatrix, "phi", global.format)?);
    out.push_str(&format!(
        "residual {} up to degree {}\n",
        if zero { "0" } else { "nonzero" },
        residual.certified_degree()
    ));
    Ok((out, i32::from(!zero)))
}
