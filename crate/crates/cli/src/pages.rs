use std::collections::BTreeSet;
use std::fmt::Write;

use ro2ss_core::pages::group_of;
use ro2ss_core::sseq::{differential_matrix, source_window};
use ro2ss_core::{page, Differential, PageBasis, Window, SCHEMA_VERSION};

use crate::args::{ChartFormat, PagesArgs};

pub fn run(args: &PagesArgs) -> Result<String, String> {
    let max_filtration = args.max_filtration.unwrap_or(1 << (args.n + 1));
    let window = Window::new(args.m.clone(), args.p.clone(), args.en.clone(), max_filtration);
    let basis = page(args.n, args.page, &window).map_err(|e| e.to_string())?;
    let from = source_window(args.n, args.page, &window);
    let header = vec![
        format!("# ro2ss pages schema_version={SCHEMA_VERSION}"),
        format!("# n={} page={} window {}", args.n, args.page, window),
        format!("# computed from E_2 on the widened window {from}"),
    ];
    match args.format {
        ChartFormat::Tsv => Ok(tsv(&header, &basis)),
        ChartFormat::Svg => svg(&basis),
    }
}

fn tsv(header: &[String], basis: &PageBasis) -> String {
    let mut out = header.join("\n");
    out.push_str("\nm\tp\ten\tfiltration\trank\ttorsion\tmonomials\n");
    for (b, elems) in &basis.blocks {
        if elems.is_empty() {
            continue;
        }
        let inv = group_of(elems).invariants();
        let labels: Vec<String> = elems.iter().map(ToString::to_string).collect();
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            b.degree.m,
            b.degree.p,
            b.en,
            b.filtration,
            inv.rank,
            crate::torsion_orders(&inv.torsion),
            labels.join(",")
        )
        .unwrap();
    }
    out
}

const CELL: i64 = 24;
const MARGIN: i64 = 40;

/// One panel per `p`, x = total degree `m + p`, y = filtration (upwards).
/// Free generators are open squares, Z/2 generators filled dots; differentials
/// of the current page are arrows of bidegree (−1, +r).
fn svg(basis: &PageBasis) -> Result<String, String> {
    let w = &basis.window;
    let (xmin, xmax) = (w.m.start() + w.p.start(), w.m.end() + w.p.end());
    let fmax = w.max_filtration as i64;
    let ps: Vec<i64> = w.p.clone().collect();
    let panel_h = (fmax + 2) * CELL + MARGIN;
    let width = (xmax - xmin + 2) * CELL + 2 * MARGIN;
    let height = panel_h * ps.len() as i64 + MARGIN;
    let x_of = |total: i64| MARGIN + (total - xmin + 1) * CELL;
    let y_of = |panel: usize, f: i64| MARGIN + panel as i64 * panel_h + (fmax + 1 - f) * CELL;

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" font-family="monospace" font-size="10">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<defs><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="crimson"/></marker></defs>"#
    )
    .unwrap();
    writeln!(out, r#"<text x="{MARGIN}" y="20">E_{} page, n = {}</text>"#, basis.r, basis.n).unwrap();

    for (panel, &p) in ps.iter().enumerate() {
        let top = y_of(panel, fmax + 1);
        writeln!(out, r#"<text x="4" y="{}">p={p}</text>"#, top).unwrap();
        for f in 0..=fmax {
            let y = y_of(panel, f);
            writeln!(out, r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#ddd"/>"##, x_of(xmin), x_of(xmax)).unwrap();
        }
        for x in xmin..=xmax {
            writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{x}</text>"#, x_of(x), y_of(panel, -1)).unwrap();
        }
        // stack the generators of all en-blocks sharing a (degree, filtration) position
        let mut counts = std::collections::BTreeMap::<(i64, u32), usize>::new();
        for (b, elems) in basis.blocks.iter().filter(|(b, _)| b.degree.p == p) {
            for el in elems {
                let slot = counts.entry((b.degree.total(), b.filtration)).or_default();
                let cx = x_of(b.degree.total()) + (*slot as i64 % 3) * 6 - 6;
                let cy = y_of(panel, b.filtration as i64) - (*slot as i64 / 3) * 6;
                *slot += 1;
                if b.filtration == 0 {
                    writeln!(
                        out,
                        r#"<rect x="{}" y="{}" width="6" height="6" fill="none" stroke="black"><title>{el} en={}</title></rect>"#,
                        cx - 3,
                        cy - 3,
                        b.en
                    )
                    .unwrap();
                } else {
                    writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="3"><title>{el} en={}</title></circle>"#, b.en).unwrap();
                }
            }
        }
        if let Some(d) = Differential::on_page(basis.n, basis.r) {
            let mut drawn = BTreeSet::new();
            for b in basis.blocks.keys().filter(|b| b.degree.p == p) {
                let hom = differential_matrix(basis, &d, b).map_err(|e| e.to_string())?;
                if hom.is_zero() {
                    continue;
                }
                let t = d.target_block(b);
                if !drawn.insert((b.degree.total(), b.filtration, t.degree.total(), t.filtration)) {
                    continue;
                }
                writeln!(
                    out,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="crimson" marker-end="url(#head)"/>"#,
                    x_of(b.degree.total()),
                    y_of(panel, b.filtration as i64),
                    x_of(t.degree.total()),
                    y_of(panel, t.filtration as i64)
                )
                .unwrap();
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
