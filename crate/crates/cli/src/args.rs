use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ro2ss_core::Degree;

#[derive(Debug, Parser)]
#[command(name = "ro2ss", version, about = "Homotopy of Real Johnson-Wilson theories via the Borel spectral sequence")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate pi_j(ER(n)_V) or pi_j(E(n)_V) over a range of j.
    Homotopy(HomotopyArgs),
    /// Emit one page of the spectral sequence as TSV or an SVG chart.
    Pages(PagesArgs),
    /// Run the long-exact-sequence checks and report per block.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoryArg {
    Er,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Tsv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChartFormat {
    Tsv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Exactness,
    Duality,
    Boundary,
    Main,
    Periodicity,
    EinftyMatch,
    All,
}

/// Sign of σ on v_1 in the sign test hook: `-` is the standard convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SigmaSign {
    #[value(name = "-")]
    Minus,
    #[value(name = "+")]
    Plus,
}

#[derive(Debug, Args)]
pub struct HomotopyArgs {
    /// Height n (1-4).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
    pub n: u32,
    #[arg(long, value_enum, default_value = "er")]
    pub theory: TheoryArg,
    /// Shift V, written m+pa (e.g. 0, 0-1a, 2+3a).
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_degree)]
    pub shift: Degree,
    /// Homotopy degrees j, as lo:hi.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub range: RangeInclusive<i64>,
    /// v_n-exponents summed over (default: all for n = 1, -8:8 otherwise).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub en: Option<RangeInclusive<i64>>,
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: TableFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PagesArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
    pub n: u32,
    /// Page number r >= 2.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub page: u32,
    /// Range of the integer part m of the degree.
    #[arg(long, default_value = "-8:8", allow_hyphen_values = true, value_parser = parse_range)]
    pub m: RangeInclusive<i64>,
    /// Range of the alpha part p of the degree.
    #[arg(long, default_value = "-8:8", allow_hyphen_values = true, value_parser = parse_range)]
    pub p: RangeInclusive<i64>,
    #[arg(long, default_value = "-4:4", allow_hyphen_values = true, value_parser = parse_range)]
    pub en: RangeInclusive<i64>,
    /// Largest filtration shown (default 2^(n+1)).
    #[arg(long)]
    pub max_filtration: Option<u32>,
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: ChartFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub which: Which,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
    pub n: u32,
    /// Homotopy degrees j, as lo:hi.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub range: RangeInclusive<i64>,
    /// Comma-separated shifts V.
    #[arg(long, default_value = "0,-a,a", allow_hyphen_values = true, value_delimiter = ',', value_parser = parse_degree)]
    pub shifts: Vec<Degree>,
    /// v_n-exponents (v-lengths for the duality check).
    #[arg(long, default_value = "-8:8", allow_hyphen_values = true, value_parser = parse_range)]
    pub en: RangeInclusive<i64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "-", hide = true, allow_hyphen_values = true)]
    pub sigma_sign: SigmaSign,
}

pub fn parse_degree(s: &str) -> Result<Degree, String> {
    s.parse::<Degree>().map_err(|e| e.to_string())
}

/// `lo:hi` or a single integer.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("`{t}` is not an integer"));
    let (lo, hi) = match s.split_once(':') {
        Some((lo, hi)) => (parse(lo)?, parse(hi)?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok(lo..=hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-16:32"), Ok(-16..=32));
        assert_eq!(parse_range("5"), Ok(5..=5));
        assert!(parse_range("3:1").is_err());
        assert!(parse_range("x:1").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
