//! One function per subcommand. Each computes first and writes afterwards,
//! so a domain error leaves no run directory behind.

use std::path::{Path, PathBuf};

use chrono::Utc;
use pslab_core::exact::{
    classify_roots, compute_p_indices, exact_spectrum, outlier_series, rouche_regions, DEFAULT_ROOT_TOL,
};
use pslab_core::experiments::{
    conjecture1_probe, conjecture4_probe, staircase_run_deterministic, staircase_run_with, StaircaseSeries,
};
use pslab_core::linalg::{eigenvalues, matrix_2norm};
use pslab_core::model::{build_model, build_random_perturbed};
use pslab_core::pseudospectrum::{epsilon_region_containing_origin, grid_scan_with, GridRegion};
use pslab_core::symbol::{asymptotic_predicted_roots, compare_to_prediction, SymbolCurve};
use pslab_core::{Complex64, Error, RandomMatrixSpec};
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::manifest::RunManifest;
use crate::output::*;
use crate::svg::{render_svg, PlotData, PlotKind, PlotSpec};
use crate::CliError;

#[derive(Debug)]
pub struct Outcome {
    pub dir: PathBuf,
    pub summary: Vec<String>,
    pub manifest: RunManifest,
}

/// Files produced by one command, written into the run directory.
enum Artifact {
    Table { name: String, header: Vec<&'static str>, rows: Vec<Vec<String>> },
    Spectrum { name: String, rows: Vec<SpectrumRow> },
    Json { name: String, value: serde_json::Value },
    Svg { name: String, text: String },
}

impl Artifact {
    fn name(&self) -> &str {
        match self {
            Artifact::Table { name, .. }
            | Artifact::Spectrum { name, .. }
            | Artifact::Json { name, .. }
            | Artifact::Svg { name, .. } => name,
        }
    }

    fn write(&self, dir: &Path) -> Result<(), CliError> {
        let path = dir.join(self.name());
        match self {
            Artifact::Table { header, rows, .. } => write_table(&path, header, rows),
            Artifact::Spectrum { rows, .. } => write_spectrum_csv(&path, rows),
            Artifact::Json { value, .. } => write_json(&path, value),
            Artifact::Svg { text, .. } => std::fs::write(&path, text).map_err(|e| CliError::io(&path, e)),
        }
    }
}

#[derive(Default)]
struct Product {
    artifacts: Vec<Artifact>,
    seeds: Vec<u64>,
    summary: Vec<String>,
}

impl Product {
    fn table(&mut self, name: &str, header: &[&'static str], rows: Vec<Vec<String>>) {
        self.artifacts.push(Artifact::Table { name: name.into(), header: header.to_vec(), rows });
    }

    fn json<V: Serialize>(&mut self, name: &str, value: &V) -> Result<(), CliError> {
        let value = serde_json::to_value(value).map_err(CliError::Json)?;
        self.artifacts.push(Artifact::Json { name: name.into(), value });
        Ok(())
    }

    fn spectrum(&mut self, format: Format, rows: Vec<SpectrumRow>) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                self.artifacts.push(Artifact::Spectrum { name: "spectrum.csv".into(), rows });
                Ok(())
            }
            Format::Json => self.json("spectrum.json", &rows),
        }
    }

    fn plot(&mut self, name: &str, spec: &PlotSpec, data: &PlotData) -> Result<(), CliError> {
        let text = render_svg(spec, data)?;
        self.artifacts.push(Artifact::Svg { name: name.into(), text });
        Ok(())
    }

    fn note(&mut self, line: String) {
        self.summary.push(line);
    }
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    let started = Utc::now();
    let product = match cmd {
        Command::ExactSpectrum(a) => exact_spectrum_cmd(a)?,
        Command::DenseSpectrum(a) => dense_spectrum_cmd(a)?,
        Command::Pseudospectrum(a) => pseudospectrum_cmd(a)?,
        Command::SymbolCurve(a) => symbol_curve_cmd(a)?,
        Command::OutlierSeries(a) => outlier_series_cmd(a)?,
        Command::Rouche(a) => rouche_cmd(a)?,
        Command::Staircase(a) => staircase_cmd(a)?,
        Command::ConjectureProbe(a) => probe_cmd(a)?,
        Command::AsymptoticCheck(a) => asymptotic_cmd(a)?,
    };
    let common = cmd.common();
    let stamp = started.format("%Y%m%dT%H%M%S%.3fZ").to_string();
    let dir = create_run_dir(&common.out, cmd.name(), &stamp)?;
    let mut files = Vec::new();
    for art in &product.artifacts {
        art.write(&dir)?;
        files.push(art.name().to_string());
    }
    let parameters = match serde_json::to_value(cmd).map_err(CliError::Json)? {
        serde_json::Value::Object(mut map) if map.len() == 1 => map.remove(cmd.name()).unwrap_or_default(),
        other => other,
    };
    let mut seeds = product.seeds;
    if seeds.is_empty() {
        seeds.push(common.seed);
    }
    let manifest = RunManifest {
        command: cmd.name().into(),
        parameters,
        seeds,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        started: started.to_rfc3339(),
        finished: Utc::now().to_rfc3339(),
        outputs: RunManifest::describe(&dir, &files)?,
    };
    write_json(&dir.join("manifest.json"), &manifest)?;
    Ok(Outcome { dir, summary: product.summary, manifest })
}

fn points(z: &[Complex64]) -> Vec<(f64, f64)> {
    z.iter().map(|z| (z.re, z.im)).collect()
}

fn region_of(g: &GridArgs) -> Result<GridRegion<f64>, CliError> {
    Ok(GridRegion::new((g.grid[0], g.grid[1]), (g.grid[2], g.grid[3]), g.nx, g.ny)?)
}

fn real_delta(c: &CommonArgs) -> Result<f64, CliError> {
    if c.delta.im != 0.0 {
        return Err(Error::InvalidParameter(format!("this command needs a real delta, got {},{}", c.delta.re, c.delta.im)).into());
    }
    Ok(c.delta.re)
}

fn exact_spectrum_cmd(args: &ExactArgs) -> Result<Product, CliError> {
    let c = &args.common;
    let ex = exact_spectrum(&c.spec(), args.tol)?;
    let mut p = Product::default();
    let all = ex.all_eigenvalues();
    p.spectrum(c.format, exact_rows(&ex))?;
    if c.plot {
        let pts = points(&all);
        p.plot("spectrum.svg", &PlotSpec::fitted(PlotKind::Scatter, &pts, "exact spectrum"), &PlotData::Points(pts))?;
    }
    let o = ex.outlier();
    p.note(format!("outlier {:.12} {:+.12}i", o.re, o.im));
    p.note(format!(
        "nonzero roots {}, zero eigenvalue: algebraic {} geometric {}, max scaled residual {:.3e}",
        ex.nonzero_roots.len(),
        ex.zero_algebraic_multiplicity,
        ex.zero_geometric_multiplicity,
        ex.max_residual
    ));
    Ok(p)
}

fn dense_spectrum_cmd(args: &DenseArgs) -> Result<Product, CliError> {
    let c = &args.common;
    let mut p = Product::default();
    let a = if args.random {
        p.seeds.push(c.seed);
        build_random_perturbed(&RandomMatrixSpec { n: c.n, m: c.m, delta: c.delta.into(), seed: c.seed })?
    } else {
        build_model(&c.spec())?
    };
    let values = eigenvalues(&a)?.values;
    let zero_tol = c.n as f64 * f64::EPSILON * matrix_2norm(&a);
    let rows = dense_rows(&values, zero_tol);
    let zeros = rows.iter().filter(|r| r.kind == RootKind::Zero).count();
    p.spectrum(c.format, rows)?;
    if c.plot {
        let pts = points(&values);
        p.plot("spectrum.svg", &PlotSpec::fitted(PlotKind::Scatter, &pts, "dense spectrum"), &PlotData::Points(pts))?;
    }
    p.note(format!("{} eigenvalues, {} at or below {:.3e}", values.len(), zeros, zero_tol));
    Ok(p)
}

fn pseudospectrum_cmd(args: &PseudoArgs) -> Result<Product, CliError> {
    let c = &args.common;
    let region = region_of(&args.grid)?;
    let a = build_model(&c.spec())?;
    let grid = grid_scan_with(&a, &region, args.method.into(), args.grid.workers)?;
    let mut p = Product::default();
    match c.format {
        Format::Csv => {
            let mut rows = Vec::with_capacity(region.nx * region.ny);
            for j in 0..region.ny {
                for k in 0..region.nx {
                    let z = region.node(j, k);
                    rows.push(vec![
                        j.to_string(),
                        k.to_string(),
                        fmt_f64(z.re),
                        fmt_f64(z.im),
                        fmt_f64(grid.get(j, k)),
                        fmt_f64(grid.log_resolvent(j, k)),
                    ]);
                }
            }
            p.table("grid.csv", &["j", "k", "re", "im", "sigma_min", "log10_resolvent"], rows);
        }
        Format::Json => p.json(
            "grid.json",
            &json!({
                "re": [region.re_min, region.re_max],
                "im": [region.im_min, region.im_max],
                "nx": region.nx,
                "ny": region.ny,
                "sigma_min": grid.sigma,
            }),
        )?,
    }
    if c.plot {
        let spec = PlotSpec::new(
            PlotKind::Heatmap,
            (region.re_min, region.re_max),
            (region.im_min, region.im_max),
            "log10 resolvent norm",
        );
        let values = grid.sigma.iter().map(|&s| if s > 0.0 { 1.0 / s } else { f64::INFINITY }).collect();
        p.plot("heatmap.svg", &spec, &PlotData::Grid { nx: region.nx, ny: region.ny, values })?;
    }
    let eps = args.grid.eps;
    p.note(format!("area of sigma_min < {eps:e}: {:.6}", grid.area_below(eps)));
    if region.contains(Complex64::new(0.0, 0.0)) {
        let comp = epsilon_region_containing_origin(&grid, eps)?;
        p.note(format!("origin component: max |z| {:.6}, area {:.6}, {} nodes", comp.max_abs, comp.area, comp.cells));
    }
    Ok(p)
}

fn symbol_curve_cmd(args: &SymbolArgs) -> Result<Product, CliError> {
    let c = &args.common;
    let curve = SymbolCurve::with_samples(c.m, c.a.into(), args.samples)?;
    let mut p = Product::default();
    match c.format {
        Format::Csv => {
            let rows = curve
                .thetas
                .iter()
                .zip(&curve.points)
                .enumerate()
                .map(|(i, (t, z))| vec![i.to_string(), fmt_f64(*t), fmt_f64(z.re), fmt_f64(z.im)])
                .collect();
            p.table("curve.csv", &["index", "theta", "re", "im"], rows);
        }
        Format::Json => p.json(
            "curve.json",
            &json!({
                "m": c.m,
                "a": c.a,
                "theta": curve.thetas,
                "points": curve.points.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            }),
        )?,
    }
    if c.plot {
        let mut pts = points(&curve.points);
        pts.push(pts[0]);
        p.plot("curve.svg", &PlotSpec::fitted(PlotKind::Line, &pts, "symbol curve"), &PlotData::Line(pts))?;
    }
    p.note(format!("{} samples of z^{} + ({},{}) z^{}", curve.points.len(), c.m, c.a.re, c.a.im, c.m + 1));
    Ok(p)
}

fn outlier_series_cmd(args: &SeriesArgs) -> Result<Product, CliError> {
    let c = &args.common;
    let spec = c.spec();
    let p1 = compute_p_indices(spec.n, spec.m)?.p1;
    let order = args.order.unwrap_or(p1.min(20));
    let exact = exact_spectrum(&spec, DEFAULT_ROOT_TOL)?.outlier();
    let sums = (0..=order).map(|k| outlier_series(&spec, k)).collect::<Result<Vec<_>, _>>()?;
    let mut p = Product::default();
    let errors: Vec<f64> = sums.iter().map(|s| (s - exact).norm()).collect();
    match c.format {
        Format::Csv => {
            let rows = sums
                .iter()
                .zip(&errors)
                .enumerate()
                .map(|(k, (s, e))| vec![k.to_string(), fmt_f64(s.re), fmt_f64(s.im), fmt_f64(*e)])
                .collect();
            p.table("series.csv", &["order", "re", "im", "abs_error"], rows);
        }
        Format::Json => p.json(
            "series.json",
            &json!({
                "exact": [exact.re, exact.im],
                "partial_sums": sums.iter().map(|s| [s.re, s.im]).collect::<Vec<_>>(),
                "abs_error": errors,
            }),
        )?,
    }
    if c.plot {
        let pts: Vec<(f64, f64)> = errors.iter().enumerate().map(|(k, e)| (k as f64, e.max(1e-300).log10())).collect();
        p.plot("series.svg", &PlotSpec::fitted(PlotKind::Line, &pts, "log10 |partial sum - outlier|"), &PlotData::Line(pts))?;
    }
    p.note(format!("exact outlier {:.15} {:+.15}i", exact.re, exact.im));
    p.note(format!("order {order}: error {:.3e}", errors[order]));
    Ok(p)
}

fn rouche_cmd(c: &CommonArgs) -> Result<Product, CliError> {
    let spec = c.spec();
    let regions = rouche_regions::<f64>(spec.n, spec.delta.norm())?;
    let ex = exact_spectrum(&spec, DEFAULT_ROOT_TOL)?;
    let counts = classify_roots(&ex.nonzero_roots, &regions);
    let mut p = Product::default();
    match c.format {
        Format::Csv => {
            let rows = vec![
                vec!["r_plus".into(), fmt_f64(regions.r_plus)],
                vec!["r_minus".into(), fmt_f64(regions.r_minus)],
                vec!["outer_radius".into(), fmt_f64(regions.outer_radius)],
                vec!["outer".into(), counts.outer.to_string()],
                vec!["gap".into(), counts.gap.to_string()],
                vec!["inner".into(), counts.inner.to_string()],
                vec!["outside".into(), counts.outside.to_string()],
            ];
            p.table("rouche.csv", &["quantity", "value"], rows);
        }
        Format::Json => p.json(
            "rouche.json",
            &json!({
                "r_plus": regions.r_plus,
                "r_minus": regions.r_minus,
                "outer_radius": regions.outer_radius,
                "outer": counts.outer,
                "gap": counts.gap,
                "inner": counts.inner,
                "outside": counts.outside,
            }),
        )?,
    }
    if c.plot {
        let pts = points(&ex.nonzero_roots);
        p.plot("rouche.svg", &PlotSpec::fitted(PlotKind::Scatter, &pts, "nonzero roots"), &PlotData::Points(pts))?;
    }
    p.note(format!(
        "r+ {:.6} r- {:.6}: outer {} gap {} inner {} outside {}",
        regions.r_plus, regions.r_minus, counts.outer, counts.gap, counts.inner, counts.outside
    ));
    Ok(p)
}

fn staircase_rows(s: &StaircaseSeries) -> Vec<Vec<String>> {
    (1..=s.n)
        .map(|m| {
            let (dr, dr_se) = if m < s.n {
                (fmt_f64(s.dr[m - 1]), fmt_f64(s.dr_stderr[m - 1]))
            } else {
                (String::new(), String::new())
            };
            let mark = if s.marks.contains(&m) { "1" } else { "0" };
            vec![m.to_string(), fmt_f64(s.r[m - 1]), fmt_f64(s.r_stderr[m - 1]), dr, dr_se, mark.into()]
        })
        .collect()
}

fn staircase_cmd(args: &StaircaseArgs) -> Result<Product, CliError> {
    let c = &args.common;
    let mut p = Product::default();
    let series = if args.deterministic {
        staircase_run_deterministic(&c.spec())?
    } else {
        p.seeds.push(c.seed);
        staircase_run_with(c.n, real_delta(c)?, args.samples, c.seed, args.pairing.into(), args.workers)?
    };
    let spikes = series.spikes();
    let violations = series.monotonicity_violations(2.0);
    match c.format {
        Format::Csv => p.table("staircase.csv", &["m", "R", "R_stderr", "dR", "dR_stderr", "mark"], staircase_rows(&series)),
        Format::Json => p.json(
            "staircase.json",
            &json!({ "series": series, "spikes": spikes, "monotonicity_violations_2se": violations }),
        )?,
    }
    if c.plot {
        let n = series.n as f64;
        let pts: Vec<(f64, f64)> = series.dr.iter().enumerate().map(|(i, d)| ((i + 1) as f64 / n, *d)).collect();
        p.plot("staircase.svg", &PlotSpec::fitted(PlotKind::Line, &pts, "R(m+1) - R(m) against m/n"), &PlotData::Line(pts))?;
    }
    p.note(format!("R(1) {:.6}, R(n) {:.6}, skipped samples {}", series.r[0], series.r[series.n - 1], series.skipped));
    p.note(format!("spikes at m = {spikes:?}; increments above 2 se at m = {violations:?}"));
    Ok(p)
}

fn probe_cmd(args: &ProbeArgs) -> Result<Product, CliError> {
    let c = &args.common;
    let region = region_of(&args.grid)?;
    let eps = args.grid.eps;
    let mut p = Product::default();
    match args.conjecture {
        1 => {
            let r = conjecture1_probe(&c.spec(), &region, eps)?;
            match c.format {
                Format::Csv => {
                    let rows = vec![
                        vec!["outer_threshold".into(), fmt_f64(r.outer_threshold)],
                        vec!["outer_count".into(), r.outer_count.to_string()],
                        vec!["outer_match_distance".into(), fmt_f64(r.outer_match_distance)],
                        vec!["outer_mean_distance".into(), fmt_f64(r.outer_mean_distance)],
                        vec!["origin_component_size".into(), fmt_f64(r.origin_component_size)],
                        vec!["origin_component_area".into(), fmt_f64(r.origin_component_area)],
                    ];
                    p.table("conjecture1.csv", &["quantity", "value"], rows);
                }
                Format::Json => p.json("conjecture1.json", &r)?,
            }
            p.note(r.notes.clone());
            p.note(format!(
                "outer roots to symbol curve: max {:.4}, mean {:.4}; origin component size {:.4}",
                r.outer_match_distance, r.outer_mean_distance, r.origin_component_size
            ));
        }
        4 => {
            let pairs = args.pairs.as_ref().map(|p| p.0.as_slice()).ok_or_else(|| CliError::Usage("--conjecture 4 needs --pairs n:m,...".into()))?;
            let r = conjecture4_probe(pairs, real_delta(c)?, c.a.into(), &region, eps)?;
            match c.format {
                Format::Csv => {
                    let rows = r
                        .pairs
                        .iter()
                        .map(|q| vec![q.n.to_string(), q.m.to_string(), fmt_f64(q.origin_component_size), fmt_f64(q.outer_radius)])
                        .collect();
                    p.table("conjecture4.csv", &["n", "m", "origin_component_size", "outer_radius"], rows);
                }
                Format::Json => p.json("conjecture4.json", &r)?,
            }
            p.note(format!(
                "size spread {:.4}, radius spread {:.4}, consistent {}",
                r.size_spread, r.radius_spread, r.consistent
            ));
        }
        k => return Err(CliError::Usage(format!("no probe for conjecture {k}; use 1 or 4"))),
    }
    Ok(p)
}

fn asymptotic_cmd(c: &CommonArgs) -> Result<Product, CliError> {
    let spec = c.spec();
    let pred = asymptotic_predicted_roots(&spec)?;
    let ex = exact_spectrum(&spec, DEFAULT_ROOT_TOL)?;
    let dev = compare_to_prediction(&ex.nonzero_roots, &pred, ex.outlier())?;
    let mut p = Product::default();
    match c.format {
        Format::Csv => {
            let rows = pred
                .points
                .iter()
                .enumerate()
                .map(|(i, z)| vec![(i + 1).to_string(), fmt_f64(z.re), fmt_f64(z.im)])
                .collect();
            p.table("predicted.csv", &["l", "re", "im"], rows);
            p.spectrum(Format::Csv, exact_rows(&ex))?;
        }
        Format::Json => p.json(
            "asymptotic.json",
            &json!({
                "predicted": pred.points.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "excluded_point": [pred.excluded_point.re, pred.excluded_point.im],
                "exact_nonzero": ex.nonzero_roots.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "max_deviation": dev.max_deviation,
                "mean_deviation": dev.mean_deviation,
            }),
        )?,
    }
    if c.plot {
        let mut pts = points(&ex.nonzero_roots);
        pts.extend(points(&pred.points));
        p.plot("asymptotic.svg", &PlotSpec::fitted(PlotKind::Scatter, &pts, "exact roots and prediction"), &PlotData::Points(pts))?;
    }
    p.note(format!("{} predicted points; deviation max {:.6} mean {:.6}", pred.len(), dev.max_deviation, dev.mean_deviation));
    Ok(p)
}
