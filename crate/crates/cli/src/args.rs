//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pslab_core::experiments::SamplePairing;
use pslab_core::pseudospectrum::SigmaMethod;
use pslab_core::{Complex64, Model64, ModelVariant};
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Debug, Parser)]
#[command(name = "pslab", version, about = "Exact spectra and pseudospectra of perturbed shift-power matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Roots of the characteristic polynomial plus the zero eigenvalue.
    ExactSpectrum(ExactArgs),
    /// Eigenvalues of the dense model matrix (or of S^m + delta Z with --random).
    DenseSpectrum(DenseArgs),
    /// Smallest singular value of zI - A over a rectangular grid.
    Pseudospectrum(PseudoArgs),
    /// Samples of the symbol e^{imt} + a e^{i(m+1)t}.
    SymbolCurve(SymbolArgs),
    /// Partial sums of the outlier expansion against the exact outlier.
    OutlierSeries(SeriesArgs),
    /// Annulus radii and root counts per region.
    Rouche(CommonArgs),
    /// Mean-radius staircase R(m) and its increments.
    Staircase(StaircaseArgs),
    /// Report-only probes of the outer-curve and ratio conjectures.
    ConjectureProbe(ProbeArgs),
    /// Exact roots against the large-n equidistant prediction.
    AsymptoticCheck(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ExactSpectrum(_) => "exact-spectrum",
            Command::DenseSpectrum(_) => "dense-spectrum",
            Command::Pseudospectrum(_) => "pseudospectrum",
            Command::SymbolCurve(_) => "symbol-curve",
            Command::OutlierSeries(_) => "outlier-series",
            Command::Rouche(_) => "rouche",
            Command::Staircase(_) => "staircase",
            Command::ConjectureProbe(_) => "conjecture-probe",
            Command::AsymptoticCheck(_) => "asymptotic-check",
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::ExactSpectrum(x) => &x.common,
            Command::DenseSpectrum(x) => &x.common,
            Command::Pseudospectrum(x) => &x.common,
            Command::SymbolCurve(x) => &x.common,
            Command::OutlierSeries(x) => &x.common,
            Command::Rouche(x) => x,
            Command::Staircase(x) => &x.common,
            Command::ConjectureProbe(x) => &x.common,
            Command::AsymptoticCheck(x) => x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub model: u8,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Real number or `re,im`.
    #[arg(long, default_value = "0.01", value_parser = parse_complex, allow_hyphen_values = true)]
    pub delta: ComplexArg,
    /// Coefficient of S^{m+1} (model 2 only). Real number or `re,im`.
    #[arg(long, default_value = "1", value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: ComplexArg,
    #[arg(long, env = "PSLAB_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "pslab-out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write an SVG plot.
    #[arg(long)]
    pub plot: bool,
}

impl CommonArgs {
    pub fn spec(&self) -> Model64 {
        let variant = if self.model == 1 { ModelVariant::Model1 } else { ModelVariant::Model2 };
        Model64 {
            variant,
            n: self.n,
            m: self.m,
            delta: self.delta.into(),
            a: if self.model == 1 { Complex64::new(0.0, 0.0) } else { self.a.into() },
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExactArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Target scaled residual of the root finder.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DenseArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Use S^m + delta Z with complex Gaussian Z drawn from --seed.
    #[arg(long)]
    pub random: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// `re0,re1,im0,im1`
    #[arg(long, default_value = "-1.5,3.5,-1.5,1.5", value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: [f64; 4],
    #[arg(long, default_value_t = 101)]
    pub nx: usize,
    #[arg(long, default_value_t = 61)]
    pub ny: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    /// Worker threads (all cores when omitted).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Schur,
    Svd,
}

impl From<MethodArg> for SigmaMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Schur => SigmaMethod::Schur,
            MethodArg::Svd => SigmaMethod::Svd,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PseudoArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Schur)]
    pub method: MethodArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SymbolArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Highest order; defaults to min(p1, 20).
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingArg {
    Independent,
    Common,
}

impl From<PairingArg> for SamplePairing {
    fn from(p: PairingArg) -> Self {
        match p {
            PairingArg::Independent => SamplePairing::Independent,
            PairingArg::Common => SamplePairing::Common,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StaircaseArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = PairingArg::Independent)]
    pub pairing: PairingArg,
    /// Sweep the deterministic model (--model) instead of S^m + delta Z.
    #[arg(long)]
    pub deterministic: bool,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub conjecture: u8,
    /// `n:m` pairs for the ratio probe, e.g. `100:10,200:20`.
    #[arg(long, value_parser = parse_pairs)]
    pub pairs: Option<PairList>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PairList(pub Vec<(usize, usize)>);

/// Complex value given as `re` or `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexArg> for Complex64 {
    fn from(c: ComplexArg) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl Serialize for ComplexArg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.re, self.im].serialize(s)
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

pub fn parse_complex(s: &str) -> Result<ComplexArg, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(ComplexArg { re: parse_f64(re)?, im: 0.0 }),
        [re, im] => Ok(ComplexArg { re: parse_f64(re)?, im: parse_f64(im)? }),
        _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
    }
}

pub fn parse_grid(s: &str) -> Result<[f64; 4], String> {
    let v = s.split(',').map(parse_f64).collect::<Result<Vec<_>, _>>()?;
    let g: [f64; 4] = v.try_into().map_err(|_| format!("expected `re0,re1,im0,im1`, got `{s}`"))?;
    if g[0] < g[1] && g[2] < g[3] {
        Ok(g)
    } else {
        Err(format!("grid `{s}` needs re0 < re1 and im0 < im1"))
    }
}

pub fn parse_pairs(s: &str) -> Result<PairList, String> {
    s.split(',')
        .map(|p| {
            let (n, m) = p.split_once(':').ok_or_else(|| format!("pair `{p}` is not `n:m`"))?;
            let n = n.trim().parse().map_err(|_| format!("bad n in `{p}`"))?;
            let m = m.trim().parse().map_err(|_| format!("bad m in `{p}`"))?;
            Ok((n, m))
        })
        .collect::<Result<_, String>>()
        .map(PairList)
}
