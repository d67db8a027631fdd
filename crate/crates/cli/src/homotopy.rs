use std::fmt::Write;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use ro2ss_core::ehomotopy::e_group;
use ro2ss_core::erring::{complete_en_range, er_group};
use ro2ss_core::{e_block_basis, er_block_basis, Degree, GroupInvariants, SpectrumSlot, SCHEMA_VERSION};
use serde::Serialize;

use crate::args::{HomotopyArgs, TableFormat, TheoryArg};

const DEFAULT_EN: RangeInclusive<i64> = -8..=8;

#[derive(Debug, Serialize)]
struct Row {
    j: i64,
    group: String,
    rank: usize,
    torsion: Vec<u32>,
    generators: Vec<String>,
}

#[derive(Debug, Serialize)]
struct Table {
    schema_version: u32,
    n: u32,
    theory: &'static str,
    shift: String,
    /// `"all"` when the groups are complete, otherwise `lo:hi`.
    en: String,
    rows: Vec<Row>,
}

fn row(args: &HomotopyArgs, j: i64) -> Row {
    let slot = match args.theory {
        TheoryArg::Er => SpectrumSlot::er(j, args.shift),
        TheoryArg::E => SpectrumSlot::e(j, args.shift),
    };
    // E(n) in degree j is the ER degree (j, 0) with filtration 0, so the same range applies.
    let degree = match args.theory {
        TheoryArg::Er => slot.er_degree(),
        TheoryArg::E => Degree::new(slot.e_degree(), 0),
    };
    let ens = args.en.clone().or_else(|| complete_en_range(args.n, degree)).unwrap_or(DEFAULT_EN);
    let (labels, invariants): (Vec<String>, GroupInvariants) = match args.theory {
        TheoryArg::Er => {
            let basis: Vec<_> = ens.flat_map(|en| er_block_basis(args.n, slot.er_degree(), en)).collect();
            (basis.iter().map(ToString::to_string).collect(), er_group(&basis).invariants())
        }
        TheoryArg::E => {
            let basis: Vec<_> = ens.flat_map(|en| e_block_basis(args.n, slot.e_degree(), en)).collect();
            (basis.iter().map(ToString::to_string).collect(), e_group(&basis).invariants())
        }
    };
    Row { j, group: invariants.to_string(), rank: invariants.rank, torsion: invariants.torsion, generators: labels }
}

pub fn run(args: &HomotopyArgs) -> Result<String, String> {
    let rows: Vec<Row> = args.range.clone().into_par_iter().map(|j| row(args, j)).collect();
    let theory = match args.theory {
        TheoryArg::Er => "ER",
        TheoryArg::E => "E",
    };
    let en = match &args.en {
        Some(r) => format!("{}:{}", r.start(), r.end()),
        None if args.n == 1 => "all".to_string(),
        None => format!("{}:{}", DEFAULT_EN.start(), DEFAULT_EN.end()),
    };
    let table = Table { schema_version: SCHEMA_VERSION, n: args.n, theory, shift: args.shift.to_string(), en, rows };
    Ok(match args.format {
        TableFormat::Json => serde_json::to_string_pretty(&table).map_err(|e| e.to_string())? + "\n",
        TableFormat::Tsv => tsv(&table, args),
        TableFormat::Text => text(&table),
    })
}

fn tsv(table: &Table, args: &HomotopyArgs) -> String {
    let mut out = String::new();
    writeln!(out, "# ro2ss homotopy schema_version={}", table.schema_version).unwrap();
    writeln!(
        out,
        "# n={} theory={} shift={} range={}:{} en={}",
        table.n,
        table.theory,
        table.shift,
        args.range.start(),
        args.range.end(),
        table.en
    )
    .unwrap();
    if table.en != "all" {
        writeln!(out, "# groups are restricted to v_n-exponents {}", table.en).unwrap();
    }
    out.push_str("j\tgroup\trank\ttorsion\tgenerators\n");
    for r in &table.rows {
        let torsion = crate::torsion_orders(&r.torsion);
        let gens = if r.generators.is_empty() { "-".to_string() } else { r.generators.join(",") };
        writeln!(out, "{}\t{}\t{}\t{}\t{}", r.j, r.group, r.rank, torsion, gens).unwrap();
    }
    out
}

fn text(table: &Table) -> String {
    let mut out = String::new();
    for r in &table.rows {
        write!(out, "pi_{}({}({})_{}) = {}", r.j, table.theory, table.n, table.shift, r.group).unwrap();
        if !r.generators.is_empty() {
            write!(out, "  {{{}}}", r.generators.join(", ")).unwrap();
        }
        out.push('\n');
    }
    out
}
