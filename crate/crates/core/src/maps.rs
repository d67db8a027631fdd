//! The maps of the fibrations as per-block matrices on the deterministic bases.
//!
//! Homotopy of a shifted spectrum is read with the convention
//! `π_j(X_V) = π_{j-V}(X)`: π_j(ER(n)_V) is the RO(Z/2)-degree
//! `(j - V.m, -V.p)` part of π⋆ER(n), and π_j(E(n)_V) is π_{j-|V|}E(n).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::ehomotopy::{e_graded_basis, e_group, one_minus_sigma_on, EMonomial, SigmaConvention};
use crate::erring::{
    distinguished, er_graded_basis, er_group, multiply_by, DistinguishedName, ERBasisElement,
};
use crate::error::EngineError;
use crate::group::GroupHom;
use crate::matrix::IntMatrix;
use crate::pages::{BlockIndex, Grading};
use crate::scalar::TwoLocalScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Theory {
    ER,
    E,
}

/// `π_j` of `ER(n)_V` or `E(n)_V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpectrumSlot {
    pub theory: Theory,
    pub shift: Degree,
    pub j: i64,
}

impl SpectrumSlot {
    pub fn er(j: i64, shift: Degree) -> Self {
        SpectrumSlot { theory: Theory::ER, shift, j }
    }

    pub fn e(j: i64, shift: Degree) -> Self {
        SpectrumSlot { theory: Theory::E, shift, j }
    }

    /// RO(Z/2)-degree of the ER group in this slot.
    pub fn er_degree(&self) -> Degree {
        Degree::new(self.j - self.shift.m, -self.shift.p)
    }

    /// Nonequivariant degree of the E group in this slot.
    pub fn e_degree(&self) -> i64 {
        self.j - self.shift.total()
    }
}

impl fmt::Display for SpectrumSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.theory {
            Theory::ER => "ER",
            Theory::E => "E",
        };
        write!(f, "pi_{}({}_{})", self.j, name, self.shift)
    }
}

/// A basis of one graded piece of a slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotBasis {
    ER(Vec<ERBasisElement>),
    E(Vec<EMonomial>),
}

impl SlotBasis {
    pub fn of(n: u32, slot: &SpectrumSlot, grading: Grading) -> SlotBasis {
        match slot.theory {
            Theory::ER => SlotBasis::ER(er_graded_basis(n, slot.er_degree(), grading)),
            Theory::E => SlotBasis::E(e_graded_basis(n, slot.e_degree(), grading)),
        }
    }

    pub fn group(&self) -> crate::group::FGGroup {
        match self {
            SlotBasis::ER(b) => er_group(b),
            SlotBasis::E(b) => e_group(b),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SlotBasis::ER(b) => b.len(),
            SlotBasis::E(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn labels(&self) -> Vec<String> {
        match self {
            SlotBasis::ER(b) => b.iter().map(ToString::to_string).collect(),
            SlotBasis::E(b) => b.iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MapKind {
    /// `a: ER_{V-α} → ER_V`.
    MultA,
    /// `x(n): Σ^{λ(n)} ER_V → ER_V`.
    MultX,
    /// `y(n): Σ^{λ(n)} ER_V → ER_{V-α}`.
    MultY,
    /// The periodicity generator: `Σ^{P} ER_V → ER_V`.
    MultPeriod,
    /// Inclusion of fixed points `ER_V → E_V`.
    Iota,
    /// `1 - σ` on `E_V`.
    OneMinusSigma,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::MultA => "mult_a",
            MapKind::MultX => "mult_x",
            MapKind::MultY => "mult_y",
            MapKind::MultPeriod => "mult_period",
            MapKind::Iota => "iota",
            MapKind::OneMinusSigma => "one_minus_sigma",
        })
    }
}

/// Multiplier of a multiplication map.
fn multiplier(kind: MapKind, n: u32) -> Option<ERBasisElement> {
    let name = match kind {
        MapKind::MultA => {
            let mut a = crate::pages::PageMonomial::one(n);
            a.i = 1;
            return Some(ERBasisElement { monomial: a, w: 0 });
        }
        MapKind::MultX => DistinguishedName::X,
        MapKind::MultY => DistinguishedName::Y,
        MapKind::MultPeriod => DistinguishedName::Period,
        MapKind::Iota | MapKind::OneMinusSigma => return None,
    };
    Some(distinguished(n, name).expect("distinguished elements pass their self-check").element)
}

impl MapKind {
    /// Slot receiving the map out of `slot`.
    pub fn target_slot(self, n: u32, slot: &SpectrumSlot) -> SpectrumSlot {
        let lambda = crate::erring::lambda(n);
        let s = *slot;
        match self {
            MapKind::MultA => SpectrumSlot::er(s.j, s.shift + Degree::ALPHA),
            MapKind::MultX => SpectrumSlot::er(s.j + lambda, s.shift),
            MapKind::MultY => SpectrumSlot::er(s.j + lambda, s.shift - Degree::ALPHA),
            MapKind::MultPeriod => SpectrumSlot::er(s.j + crate::erring::period(n), s.shift),
            MapKind::Iota => SpectrumSlot::e(s.j, s.shift),
            MapKind::OneMinusSigma => s,
        }
    }

    /// Slot mapping into `slot`.
    pub fn source_slot(self, n: u32, slot: &SpectrumSlot) -> SpectrumSlot {
        let lambda = crate::erring::lambda(n);
        let s = *slot;
        match self {
            MapKind::MultA => SpectrumSlot::er(s.j, s.shift - Degree::ALPHA),
            MapKind::MultX => SpectrumSlot::er(s.j - lambda, s.shift),
            MapKind::MultY => SpectrumSlot::er(s.j - lambda, s.shift + Degree::ALPHA),
            MapKind::MultPeriod => SpectrumSlot::er(s.j - crate::erring::period(n), s.shift),
            MapKind::Iota => SpectrumSlot::er(s.j, s.shift),
            MapKind::OneMinusSigma => s,
        }
    }

    /// Change of RO(Z/2)-degree on ER classes; for ι the degree collapses to its total.
    pub fn degree_shift(self, n: u32) -> Degree {
        multiplier(self, n).map_or(Degree::ZERO, |m| m.degree())
    }

    /// Change of the `v_n`-exponent.
    pub fn en_shift(self, n: u32) -> i64 {
        multiplier(self, n).map_or(0, |m| m.monomial.en)
    }

    /// Change of the signed v-length.
    pub fn length_shift(self, n: u32) -> i64 {
        multiplier(self, n).map_or(0, |m| m.monomial.v_length())
    }

    fn shift_grading(self, n: u32, grading: Grading) -> Grading {
        match grading {
            Grading::VnExponent(en) => Grading::VnExponent(en + self.en_shift(n)),
            Grading::VLength(l) => Grading::VLength(l + self.length_shift(n)),
        }
    }
}

/// One block of a map with the bases it is written in.
#[derive(Debug, Clone)]
pub struct SlotMap {
    pub kind: MapKind,
    pub source: SpectrumSlot,
    pub target: SpectrumSlot,
    pub source_basis: SlotBasis,
    pub target_basis: SlotBasis,
    pub hom: GroupHom,
}

/// The block of `kind` out of `slot` in the given grading piece.
pub fn map_block(
    kind: MapKind,
    n: u32,
    slot: &SpectrumSlot,
    grading: Grading,
    sigma: SigmaConvention,
) -> Result<SlotMap, EngineError> {
    let source_theory = if kind == MapKind::OneMinusSigma { Theory::E } else { Theory::ER };
    let slot = SpectrumSlot { theory: source_theory, ..*slot };
    let target = kind.target_slot(n, &slot);
    let source_basis = SlotBasis::of(n, &slot, grading);
    let target_basis = SlotBasis::of(n, &target, kind.shift_grading(n, grading));
    let matrix = match (&source_basis, &target_basis) {
        (SlotBasis::ER(src), SlotBasis::ER(tgt)) => {
            let mult = multiplier(kind, n).expect("ER to ER maps are multiplications");
            multiplication_matrix(kind, n, src, tgt, &mult)?
        }
        (SlotBasis::ER(src), SlotBasis::E(tgt)) => iota_matrix(src, tgt),
        (SlotBasis::E(src), SlotBasis::E(_)) => one_minus_sigma_on(src, slot.e_degree(), slot.shift, sigma),
        (SlotBasis::E(_), SlotBasis::ER(_)) => unreachable!("no map from E to ER"),
    };
    let hom = GroupHom::new(source_basis.group(), target_basis.group(), matrix)?;
    Ok(SlotMap { kind, source: slot, target, source_basis, target_basis, hom })
}

/// The block of `kind` out of `slot` with `v_n`-exponent `en`.
pub fn map_matrix(kind: MapKind, n: u32, slot: &SpectrumSlot, en: i64) -> Result<GroupHom, EngineError> {
    Ok(map_block(kind, n, slot, Grading::VnExponent(en), SigmaConvention::Standard)?.hom)
}

fn multiplication_matrix(
    kind: MapKind,
    n: u32,
    source: &[ERBasisElement],
    target: &[ERBasisElement],
    mult: &ERBasisElement,
) -> Result<IntMatrix, EngineError> {
    let mut m = IntMatrix::zeros(target.len(), source.len());
    for (j, s) in source.iter().enumerate() {
        let Some((c, prod)) = multiply_by(s, mult) else { continue };
        let row = target.iter().position(|t| *t == prod).ok_or_else(|| EngineError::BlockMismatch {
            kind: kind.to_string(),
            expected: kind.en_shift(n),
            got: prod.monomial.en - s.monomial.en,
        })?;
        m.set(row, j, c);
    }
    Ok(m)
}

fn iota_matrix(source: &[ERBasisElement], target: &[EMonomial]) -> IntMatrix {
    let mut m = IntMatrix::zeros(target.len(), source.len());
    for (j, s) in source.iter().enumerate() {
        if s.is_torsion() {
            continue;
        }
        let image = EMonomial::underlying(&s.monomial);
        let row = target.iter().position(|t| *t == image).expect("ι preserves degree and exponents");
        m.set(row, j, TwoLocalScalar::pow2(s.w));
    }
    m
}

/// A map realized blockwise over a set of slots and `v_n`-exponents.
#[derive(Debug, Clone)]
pub struct GradedMap {
    pub kind: MapKind,
    pub n: u32,
    pub degree_shift: Degree,
    pub en_shift: i64,
    pub blocks: BTreeMap<BlockIndex, SlotMap>,
}

impl GradedMap {
    /// Builds the map out of every ER slot `π_j(ER_V)`, `j ∈ js`, and each `en`.
    pub fn build(
        kind: MapKind,
        n: u32,
        js: impl IntoIterator<Item = i64>,
        shift: Degree,
        ens: impl IntoIterator<Item = i64> + Clone,
    ) -> Result<GradedMap, EngineError> {
        let mut blocks = BTreeMap::new();
        for j in js {
            let slot = SpectrumSlot::er(j, shift);
            for en in ens.clone() {
                let block = map_block(kind, n, &slot, Grading::VnExponent(en), SigmaConvention::Standard)?;
                blocks.insert(BlockIndex::new(slot.er_degree(), en, 0), block);
            }
        }
        Ok(GradedMap { kind, n, degree_shift: kind.degree_shift(n), en_shift: kind.en_shift(n), blocks })
    }

    /// Entries violating the declared degree or exponent shift.
    pub fn shift_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (idx, block) in &self.blocks {
            for (row, col, _) in block.hom.matrix.nonzero_entries() {
                let (SlotBasis::ER(src), tgt) = (&block.source_basis, &block.target_basis) else { continue };
                let s = &src[col];
                let ok = match tgt {
                    SlotBasis::ER(t) => {
                        let t = &t[row];
                        t.degree() == s.degree() + self.degree_shift && t.monomial.en == s.monomial.en + self.en_shift
                    }
                    SlotBasis::E(t) => {
                        let t = &t[row];
                        t.degree() == s.degree().total() && t.en == s.monomial.en
                    }
                };
                if !ok {
                    out.push(format!("{} block {idx}: entry ({row},{col})", self.kind));
                }
            }
        }
        out
    }
}
