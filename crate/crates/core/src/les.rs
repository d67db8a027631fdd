//! Blockwise verification of the fibration long exact sequences.
//!
//! Every check walks a window of `(j, V, grading)` blocks in parallel and
//! returns one [`BlockResult`] per block, sorted by block index so reports are
//! deterministic regardless of scheduling.

use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::ehomotopy::SigmaConvention;
use crate::erring::{distinguished, er_filtration_block, er_group, DistinguishedName};
use crate::error::EngineError;
use crate::group::{contained_in, subgroup_equal, GroupHom};
use crate::maps::{map_block, MapKind, SlotMap, SpectrumSlot};
use crate::pages::{group_of, Grading, Window};
use crate::scalar::TwoLocalScalar;
use crate::sseq::{differential_matrix, page, Differential};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Exactness,
    Composites,
    Duality,
    Boundary,
    Main,
    Periodicity,
    EinftyMatch,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Exactness => "exactness",
            CheckKind::Composites => "composites",
            CheckKind::Duality => "duality",
            CheckKind::Boundary => "boundary",
            CheckKind::Main => "main",
            CheckKind::Periodicity => "periodicity",
            CheckKind::EinftyMatch => "einfty-match",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Which second grading a block was taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingKind {
    En,
    Length,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockResult {
    /// Homotopy degree; `None` for blocks indexed by RO-degree alone.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<String>,
    /// RO(Z/2)-degree of the ER group in the block.
    pub degree: String,
    pub grading: GradingKind,
    pub en: i64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl BlockResult {
    fn sort_key(&self) -> (Option<String>, Option<i64>, String, i64) {
        (self.shift.clone(), self.j, self.degree.clone(), self.en)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema_version: u32,
    pub check: CheckKind,
    pub n: u32,
    pub blocks: Vec<BlockResult>,
}

impl CheckReport {
    fn new(check: CheckKind, n: u32, mut blocks: Vec<BlockResult>) -> Self {
        blocks.sort_by_key(BlockResult::sort_key);
        CheckReport { schema_version: SCHEMA_VERSION, check, n, blocks }
    }

    pub fn passed(&self) -> bool {
        self.blocks.iter().all(|b| b.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BlockResult> {
        self.blocks.iter().filter(|b| b.status == Status::Fail)
    }
}

/// A window of `(j, V, grading)` blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesWindow {
    pub j: RangeInclusive<i64>,
    pub shifts: Vec<Degree>,
    /// Range of the second grading (v_n-exponent, or v-length for duality).
    pub en: RangeInclusive<i64>,
}

impl LesWindow {
    pub fn new(j: RangeInclusive<i64>, shifts: Vec<Degree>, en: RangeInclusive<i64>) -> Self {
        LesWindow { j, shifts, en }
    }

    /// The shifts 0, −α, +α.
    pub fn standard_shifts() -> Vec<Degree> {
        vec![Degree::ZERO, -Degree::ALPHA, Degree::ALPHA]
    }

    fn blocks(&self) -> Vec<(i64, Degree, i64)> {
        let mut out = Vec::new();
        for &v in &self.shifts {
            for j in self.j.clone() {
                for en in self.en.clone() {
                    out.push((j, v, en));
                }
            }
        }
        out
    }
}

fn run_blocks<F>(check: CheckKind, n: u32, window: &LesWindow, grading: GradingKind, f: F) -> Result<CheckReport, EngineError>
where
    F: Fn(i64, Degree, i64) -> Result<Option<String>, EngineError> + Sync,
{
    let blocks = window
        .blocks()
        .into_par_iter()
        .map(|(j, v, en)| {
            let witness = f(j, v, en)?;
            Ok(BlockResult {
                j: Some(j),
                shift: Some(v.to_string()),
                degree: SpectrumSlot::er(j, v).er_degree().to_string(),
                grading,
                en,
                status: if witness.is_none() { Status::Pass } else { Status::Fail },
                witness,
            })
        })
        .collect::<Result<Vec<_>, EngineError>>()?;
    Ok(CheckReport::new(check, n, blocks))
}

/// Renders a vector of generator coordinates, e.g. `2.v1^2 + a.v1`.
fn element_string(labels: &[String], v: &[TwoLocalScalar]) -> String {
    let terms: Vec<String> = labels
        .iter()
        .zip(v)
        .filter(|(_, c)| !c.is_zero())
        .map(|(l, c)| if *c == TwoLocalScalar::one() { l.clone() } else { format!("({c})*{l}") })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// First element of `gens` outside the span of `span`, if any.
fn escapee<'a>(
    gens: &'a [Vec<TwoLocalScalar>],
    span: &[Vec<TwoLocalScalar>],
    ambient: &crate::group::FGGroup,
) -> Option<&'a Vec<TwoLocalScalar>> {
    gens.iter().find(|g| !contained_in(std::slice::from_ref(*g), span, ambient))
}

/// Compares `im(into)` with `ker(out)` inside the middle group; `None` when equal.
fn image_equals_kernel(into: &SlotMap, out: &SlotMap, into_name: &str, out_name: &str) -> Option<String> {
    let ambient = &out.hom.source;
    let labels = out.source_basis.labels();
    let im = into.hom.image_generators();
    let ker = out.hom.kernel_generators();
    if subgroup_equal(&im, &ker, ambient) {
        return None;
    }
    if let Some(x) = escapee(&ker, &im, ambient) {
        return Some(format!("ker({out_name}) contains {} not in im({into_name})", element_string(&labels, x)));
    }
    let x = escapee(&im, &ker, ambient).expect("unequal subgroups differ somewhere");
    Some(format!("im({into_name}) contains {} not in ker({out_name})", element_string(&labels, x)))
}

fn block(kind: MapKind, n: u32, slot: SpectrumSlot, en: i64) -> Result<SlotMap, EngineError> {
    map_block(kind, n, &slot, Grading::VnExponent(en), SigmaConvention::Standard)
}

/// `im(a) = ker(ι)` in every `π_j(ER_V)` block.
pub fn check_rotated_exactness(n: u32, window: &LesWindow) -> Result<CheckReport, EngineError> {
    run_blocks(CheckKind::Exactness, n, window, GradingKind::En, |j, v, en| {
        let slot = SpectrumSlot::er(j, v);
        let a = block(MapKind::MultA, n, MapKind::MultA.source_slot(n, &slot), en)?;
        let iota = block(MapKind::Iota, n, slot, en)?;
        Ok(image_equals_kernel(&a, &iota, "a", "iota"))
    })
}

/// Consecutive maps compose to zero: `ι∘a`, `ι∘x` and `(1−σ)∘ι`.
pub fn check_composites(n: u32, window: &LesWindow, sigma: SigmaConvention) -> Result<CheckReport, EngineError> {
    run_blocks(CheckKind::Composites, n, window, GradingKind::En, |j, v, en| {
        let slot = SpectrumSlot::er(j, v);
        let iota = block(MapKind::Iota, n, slot, en)?;
        let mut bad = Vec::new();
        let a = block(MapKind::MultA, n, MapKind::MultA.source_slot(n, &slot), en)?;
        if !a.hom.then(&iota.hom).is_zero() {
            bad.push("iota.a");
        }
        let x_en = en - MapKind::MultX.en_shift(n);
        let x = block(MapKind::MultX, n, MapKind::MultX.source_slot(n, &slot), x_en)?;
        if !x.hom.then(&iota.hom).is_zero() {
            bad.push("iota.x");
        }
        let s = map_block(MapKind::OneMinusSigma, n, &slot, Grading::VnExponent(en), sigma)?;
        if !iota.hom.then(&s.hom).is_zero() {
            bad.push("(1-sigma).iota");
        }
        Ok((!bad.is_empty()).then(|| format!("nonzero composite: {}", bad.join(", "))))
    })
}

/// Order duality in the v-length grading: `coker(ι_j)` at length `N` against
/// `ker(a_{j−1})`, with ranks compared at `N` and torsion at `N+1`.
///
/// The connecting map does not preserve the `v_n`-exponent (it raises it by 0 or
/// 1 depending on the class), but it raises the v-length of torsion classes by
/// exactly one and preserves it on free classes, which is what this pairing uses.
pub fn check_order_duality(n: u32, window: &LesWindow) -> Result<CheckReport, EngineError> {
    run_blocks(CheckKind::Duality, n, window, GradingKind::Length, |j, v, len| {
        let slot = SpectrumSlot::er(j, v);
        let iota = map_block(MapKind::Iota, n, &slot, Grading::VLength(len), SigmaConvention::Standard)?;
        let coker = iota.hom.cokernel().invariants();
        let a_slot = MapKind::MultA.source_slot(n, &SpectrumSlot::er(j - 1, v));
        let a_at = |l| map_block(MapKind::MultA, n, &a_slot, Grading::VLength(l), SigmaConvention::Standard);
        let ker_same = a_at(len)?.hom.kernel().invariants();
        let ker_next = a_at(len + 1)?.hom.kernel().invariants();
        let mut bad = Vec::new();
        if coker.rank != ker_same.rank {
            bad.push(format!("rank coker(iota) = {} but rank ker(a) = {}", coker.rank, ker_same.rank));
        }
        if coker.torsion != ker_next.torsion {
            bad.push(format!(
                "torsion coker(iota) = [{}] but torsion ker(a) at length {} = [{}]",
                coker.torsion_string(),
                len + 1,
                ker_next.torsion_string()
            ));
        }
        Ok((!bad.is_empty()).then(|| bad.join("; ")))
    })
}

/// The computable consequences of `∂ = 1 − σ`: `(1−σ)∘ι = 0` on `π_j(E_V)`,
/// and `im(1−σ on π_j(E_{V−1})) ⊆ im(ι out of π_j(ER_{V−α}))`.
pub fn check_boundary_formula(n: u32, window: &LesWindow, sigma: SigmaConvention) -> Result<CheckReport, EngineError> {
    run_blocks(CheckKind::Boundary, n, window, GradingKind::En, |j, v, en| {
        let slot = SpectrumSlot::er(j, v);
        let iota = block(MapKind::Iota, n, slot, en)?;
        let s = map_block(MapKind::OneMinusSigma, n, &slot, Grading::VnExponent(en), sigma)?;
        let mut bad = Vec::new();
        let composite = iota.hom.then(&s.hom);
        if let Some(col) = (0..composite.matrix.cols()).find(|&c| !composite.target.is_zero_element(&composite.matrix.column(c))) {
            bad.push(format!("(1-sigma).iota({}) != 0", iota.source_basis.labels()[col]));
        }
        let s_prev = map_block(MapKind::OneMinusSigma, n, &SpectrumSlot::e(j, v - Degree::ONE), Grading::VnExponent(en), sigma)?;
        let iota_prev = block(MapKind::Iota, n, SpectrumSlot::er(j, v - Degree::ALPHA), en)?;
        debug_assert_eq!(s_prev.target_basis, iota_prev.target_basis);
        let im_s = s_prev.hom.image_generators();
        let im_iota = iota_prev.hom.image_generators();
        if let Some(x) = escapee(&im_s, &im_iota, &iota_prev.hom.target) {
            bad.push(format!(
                "im(1-sigma) contains {} not in im(iota)",
                element_string(&iota_prev.target_basis.labels(), x)
            ));
        }
        Ok((!bad.is_empty()).then(|| bad.join("; ")))
    })
}

/// `y` is an isomorphism onto every block, `im(x) = ker(ι)`, and `x ≠ 0`.
pub fn check_main_theorem(n: u32, window: &LesWindow) -> Result<CheckReport, EngineError> {
    let x = distinguished(n, DistinguishedName::X)?;
    let x_slot = SpectrumSlot::er(x.degree.m, Degree::ZERO);
    let x_block = block(MapKind::Iota, n, x_slot, x.element.monomial.en)?;
    let x_nonzero = match &x_block.source_basis {
        crate::maps::SlotBasis::ER(b) => b.contains(&x.element),
        crate::maps::SlotBasis::E(_) => false,
    };
    let shift = MapKind::MultX.en_shift(n);
    run_blocks(CheckKind::Main, n, window, GradingKind::En, |j, v, en| {
        let slot = SpectrumSlot::er(j, v);
        let mut bad = Vec::new();
        let y = block(MapKind::MultY, n, MapKind::MultY.source_slot(n, &slot), en - shift)?;
        if !y.hom.is_isomorphism() {
            bad.push(format!("y: {} -> {} is not an isomorphism", y.hom.source, y.hom.target));
        }
        let xm = block(MapKind::MultX, n, MapKind::MultX.source_slot(n, &slot), en - shift)?;
        let iota = block(MapKind::Iota, n, slot, en)?;
        if let Some(w) = image_equals_kernel(&xm, &iota, "x", "iota") {
            bad.push(w);
        }
        if slot == x_slot && en == x.element.monomial.en && !x_nonzero {
            bad.push(format!("x({n}) = {} vanishes", x.element));
        }
        Ok((!bad.is_empty()).then(|| bad.join("; ")))
    })
}

/// Multiplication by the periodicity generator is an isomorphism on every block.
pub fn check_periodicity(n: u32, window: &LesWindow) -> Result<CheckReport, EngineError> {
    run_blocks(CheckKind::Periodicity, n, window, GradingKind::En, |j, v, en| {
        let p = block(MapKind::MultPeriod, n, SpectrumSlot::er(j, v), en)?;
        Ok((!p.hom.is_isomorphism()).then(|| {
            format!("period map {} -> {} is not an isomorphism", p.hom.source, p.hom.target)
        }))
    })
}

/// E∞ of the spectral sequence against the presented ring, per
/// `(degree, en, filtration)` block.
pub fn check_einfty_match(n: u32, window: &Window) -> Result<CheckReport, EngineError> {
    let einf = crate::sseq::e_infinity(n, window)?;
    let blocks = window
        .nonempty_blocks(n)
        .into_par_iter()
        .map(|b| {
            let engine = group_of(einf.block(&b)).invariants();
            let presented = er_group(&er_filtration_block(n, &b)).invariants();
            let witness = (engine != presented).then(|| {
                format!("filtration {}: E_inf = {engine}, presentation = {presented}", b.filtration)
            });
            BlockResult {
                j: None,
                shift: None,
                degree: format!("{}@{}", b.degree, b.filtration),
                grading: GradingKind::En,
                en: b.en,
                status: if witness.is_none() { Status::Pass } else { Status::Fail },
                witness,
            }
        })
        .collect();
    Ok(CheckReport::new(CheckKind::EinftyMatch, n, blocks))
}

/// Blocks of the window where `d_r ∘ d_r ≠ 0` on page `r`.
pub fn d_squared_violations(n: u32, window: &Window) -> Result<Vec<String>, EngineError> {
    let mut out = Vec::new();
    for d in Differential::all(n) {
        let pg = page(n, d.r, window)?;
        let results: Vec<Option<String>> = pg
            .blocks
            .keys()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|b| {
                let first = differential_matrix(&pg, &d, b)?;
                let second = differential_matrix(&pg, &d, &d.target_block(b))?;
                let composite: GroupHom = first.then(&second);
                Ok((!composite.is_zero()).then(|| format!("d{}.d{} on {b}", d.r, d.r)))
            })
            .collect::<Result<_, EngineError>>()?;
        out.extend(results.into_iter().flatten());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(j: RangeInclusive<i64>) -> LesWindow {
        LesWindow::new(j, vec![Degree::ZERO], -6..=6)
    }

    fn status_at(report: &CheckReport, j: i64) -> Vec<Status> {
        report.blocks.iter().filter(|b| b.j == Some(j)).map(|b| b.status).collect()
    }

    #[test]
    fn ko_exactness_spots() {
        let r = check_rotated_exactness(1, &window(0..=8)).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(status_at(&r, 1).len(), 13);
    }

    #[test]
    fn eta_is_a_divisible_and_dies_in_ku() {
        let slot = SpectrumSlot::er(1, Degree::ZERO);
        let a = block(MapKind::MultA, 1, MapKind::MultA.source_slot(1, &slot), 1).unwrap();
        let iota = block(MapKind::Iota, 1, slot, 1).unwrap();
        assert_eq!(a.hom.target.invariants().to_string(), "Z/2");
        assert_eq!(iota.hom.kernel_generators().len(), 1);
        assert!(image_equals_kernel(&a, &iota, "a", "iota").is_none());
    }

    #[test]
    fn duality_at_four_pairs_with_a_squared_v1_cubed() {
        // coker(ι₄) = Z/2 lives at length 2; ker(a on π₃(ER_{−α})) at length 3.
        let slot = SpectrumSlot::er(4, Degree::ZERO);
        let iota = map_block(MapKind::Iota, 1, &slot, Grading::VLength(2), SigmaConvention::Standard).unwrap();
        assert_eq!(iota.hom.cokernel().invariants().to_string(), "Z/2");
        let a = map_block(
            MapKind::MultA,
            1,
            &SpectrumSlot::er(3, -Degree::ALPHA),
            Grading::VLength(3),
            SigmaConvention::Standard,
        )
        .unwrap();
        assert_eq!(a.source_basis.labels(), vec!["a^2.v1^3"]);
        assert_eq!(a.hom.kernel().invariants().to_string(), "Z/2");
        let r = check_order_duality(1, &window(-2..=10)).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn boundary_formula_and_its_negative_control() {
        let w = LesWindow::new(0..=4, LesWindow::standard_shifts(), -3..=3);
        assert!(check_boundary_formula(1, &w, SigmaConvention::Standard).unwrap().passed());
        assert!(!check_boundary_formula(1, &w, SigmaConvention::Flipped).unwrap().passed());
        assert!(!check_composites(1, &w, SigmaConvention::Flipped).unwrap().passed());
    }

    #[test]
    fn main_theorem_for_ko() {
        let r = check_main_theorem(1, &window(-4..=10)).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn periodicity_and_einfty() {
        assert!(check_periodicity(1, &window(-8..=8)).unwrap().passed());
        let w = Window::new(-6..=6, -6..=6, -3..=3, 4);
        assert!(check_einfty_match(1, &w).unwrap().passed());
        assert!(d_squared_violations(2, &w).unwrap().is_empty());
    }

    #[test]
    fn reports_serialize_with_schema_version() {
        let r = check_periodicity(1, &window(0..=0)).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["schema_version"], 1);
        assert_eq!(json["check"], "periodicity");
        assert_eq!(json["blocks"][0]["status"], "pass");
        assert!(json["blocks"][0].get("witness").is_none());
    }
}
