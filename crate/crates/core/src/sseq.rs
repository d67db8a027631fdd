//! The Borel spectral sequence: differentials `d_{2^{k+1}-1}(σ^{-2^k}) = v_k a^{2^{k+1}-1}`
//! for `1 ≤ k ≤ n`, extended by the Leibniz rule with `a` and the `v_k` permanent.
//!
//! Every differential sends a monomial to a multiple of a single monomial and
//! every target lies in positive filtration, where coefficients are `Z/2`.
//! Only the parity of the Leibniz coefficient matters, so the sign convention
//! is left unspecified.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::degree::Degree;
use crate::error::EngineError;
use crate::group::{subquotient, GroupHom};
use crate::matrix::IntMatrix;
use crate::pages::{group_of, BlockIndex, PageBasis, PageElement, PageMonomial, Window};
use crate::scalar::TwoLocalScalar;

/// The differential on page `r = 2^{k+1} - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Differential {
    pub n: u32,
    pub r: u32,
    pub k: u32,
}

impl Differential {
    /// The differential on page `r`, if there is one.
    pub fn on_page(n: u32, r: u32) -> Option<Differential> {
        (1..=n).find(|&k| (1u32 << (k + 1)) - 1 == r).map(|k| Differential { n, r, k })
    }

    /// All differentials in page order.
    pub fn all(n: u32) -> impl Iterator<Item = Differential> {
        (1..=n).map(move |k| Differential { n, r: (1 << (k + 1)) - 1, k })
    }

    pub const DEGREE_SHIFT: Degree = Degree { m: -1, p: 0 };

    pub fn en_shift(&self) -> i64 {
        i64::from(self.k == self.n)
    }

    /// Block receiving the differential out of `b`.
    pub fn target_block(&self, b: &BlockIndex) -> BlockIndex {
        BlockIndex::new(b.degree + Self::DEGREE_SHIFT, b.en + self.en_shift(), b.filtration + self.r)
    }

    /// Block whose differential lands in `b`, if the filtration allows one.
    pub fn source_block(&self, b: &BlockIndex) -> Option<BlockIndex> {
        let f = b.filtration.checked_sub(self.r)?;
        Some(BlockIndex::new(b.degree - Self::DEGREE_SHIFT, b.en - self.en_shift(), f))
    }

    /// The largest window on which the next page is determined by `window`.
    pub fn shrink(&self, window: &Window) -> Window {
        let e = self.en_shift();
        Window::new(
            window.m.start() + 1..=window.m.end() - 1,
            window.p.clone(),
            window.en.start() + e..=window.en.end() - e,
            window.max_filtration.saturating_sub(self.r),
        )
    }

    /// Inverse of [`Differential::shrink`].
    pub fn widen(&self, window: &Window) -> Window {
        let e = self.en_shift();
        Window::new(
            window.m.start() - 1..=window.m.end() + 1,
            window.p.clone(),
            window.en.start() - e..=window.en.end() + e,
            window.max_filtration + self.r,
        )
    }
}

/// Whether `2^w · mono` is a product of the permanent cycles `a`, `v_k`,
/// `v_k σ^{l 2^{k+1}}` and `2σ^{2l}`.
pub fn is_permanent(mono: &PageMonomial, w: u32) -> bool {
    let kappa = if w > 0 { 0 } else { mono.min_v_index() };
    (2 * mono.t).rem_euclid(1 << (kappa + 1)) == 0
}

/// `d_r` of a page element, as a formal sum of at most one term with its
/// coefficient reduced into the target's coefficient group.
pub fn apply_differential(
    n: u32,
    r: u32,
    element: &PageElement,
) -> Result<Vec<(TwoLocalScalar, PageMonomial)>, EngineError> {
    let d = Differential::on_page(n, r).ok_or(EngineError::NoDifferential { n, page: r })?;
    let mono = &element.monomial;
    if is_permanent(mono, element.w) {
        return Ok(Vec::new());
    }
    // σ^{2t} = (σ^{2^k})^q
    let step = 1i64 << (d.k - 1);
    if mono.t.rem_euclid(step) != 0 {
        return Err(EngineError::NotOnPage { monomial: mono.to_string(), page: r });
    }
    let q = mono.t / step;
    if q.rem_euclid(2) == 0 {
        return Ok(Vec::new());
    }
    let mut target = mono.times_v(d.k);
    target.i += d.r;
    target.t += step;
    Ok(vec![(TwoLocalScalar::one(), target)])
}

/// Matrix of `d_r` out of one block of `page`.
pub fn differential_matrix(page: &PageBasis, d: &Differential, from: &BlockIndex) -> Result<GroupHom, EngineError> {
    let source = page.block(from);
    let to = d.target_block(from);
    let target = page.block(&to);
    let mut matrix = IntMatrix::zeros(target.len(), source.len());
    for (j, el) in source.iter().enumerate() {
        for (c, mono) in apply_differential(d.n, d.r, el)? {
            // absent targets are zero on this page
            if let Some(row) = target.iter().position(|t| t.monomial == mono) {
                matrix.set(row, j, c);
            }
        }
    }
    Ok(GroupHom::new(group_of(source), group_of(target), matrix)?)
}

/// Passes from page `r` to page `r+1`. The result lives on the largest
/// sub-window where it is fully determined.
pub fn turn_page(n: u32, r: u32, current: &PageBasis) -> Result<PageBasis, EngineError> {
    assert_eq!(current.r, r, "page number mismatch");
    let Some(d) = Differential::on_page(n, r) else {
        let mut next = current.clone();
        next.r = r + 1;
        return Ok(next);
    };
    let window = d.shrink(&current.window);
    let blocks: Vec<BlockIndex> = current.blocks.keys().filter(|b| window.contains(b)).copied().collect();
    let computed: Result<Vec<(BlockIndex, Vec<PageElement>)>, EngineError> =
        blocks.par_iter().map(|b| Ok((*b, block_homology(current, &d, b)?))).collect();
    let blocks = computed?.into_iter().filter(|(_, v)| !v.is_empty()).collect();
    Ok(PageBasis { n, r: r + 1, window, blocks })
}

/// As [`turn_page`], but onto a caller-chosen window; refuses windows the
/// current page does not determine.
pub fn turn_page_onto(n: u32, r: u32, current: &PageBasis, window: &Window) -> Result<PageBasis, EngineError> {
    let mut next = turn_page(n, r, current)?;
    let available = &next.window;
    let covered = available.m.start() <= window.m.start()
        && available.m.end() >= window.m.end()
        && available.p.start() <= window.p.start()
        && available.p.end() >= window.p.end()
        && available.en.start() <= window.en.start()
        && available.en.end() >= window.en.end()
        && available.max_filtration >= window.max_filtration;
    if !covered {
        return Err(EngineError::WindowNotClosed { page: r, block: format!("{window} not inside {available}") });
    }
    next.blocks.retain(|b, _| window.contains(b));
    next.window = window.clone();
    Ok(next)
}

fn block_homology(page: &PageBasis, d: &Differential, b: &BlockIndex) -> Result<Vec<PageElement>, EngineError> {
    let out = differential_matrix(page, d, b)?;
    let into = match d.source_block(b) {
        Some(s) => differential_matrix(page, d, &s)?,
        None => GroupHom::zero(Default::default(), out.source.clone()),
    };

    // The matrices are partial permutations, so the homology is spanned by
    // (multiples of) monomials; this basis is cross-checked against the SNF
    // computation below.
    let elements = page.block(b);
    let hit: Vec<bool> = (0..elements.len())
        .map(|row| (0..into.matrix.cols()).any(|j| !into.matrix.get(row, j).is_zero()))
        .collect();
    let mut survivors = Vec::new();
    for (j, el) in elements.iter().enumerate() {
        if hit[j] {
            continue;
        }
        let image = out.matrix.column(j);
        if out.target.is_zero_element(&image) {
            survivors.push(el.clone());
        } else if el.monomial.i == 0 {
            // a free class with odd image into Z/2: twice it is a cycle
            survivors.push(PageElement::new(el.monomial.clone(), el.w + 1));
        }
    }

    let homology = subquotient(&into, &out)?;
    if homology.group.invariants() != group_of(&survivors).invariants() {
        return Err(EngineError::HomologyMismatch { block: b.to_string() });
    }
    Ok(survivors)
}

/// The E₂ window from which page `r` on `window` is fully determined: each
/// earlier differential widens it by its source and target blocks.
pub fn source_window(n: u32, r: u32, window: &Window) -> Window {
    let used: Vec<Differential> = Differential::all(n).filter(|d| d.r < r).collect();
    used.iter().rev().fold(window.clone(), |w, d| d.widen(&w))
}

/// Page `r` on a window, computed from E₂ on the widened window.
pub fn page(n: u32, r: u32, window: &Window) -> Result<PageBasis, EngineError> {
    if n == 0 {
        return Err(EngineError::BadHeight(n));
    }
    let mut current = PageBasis::e2(n, source_window(n, r, window));
    for step in 2..r {
        current = turn_page(n, step, &current)?;
    }
    current.window = window.clone();
    current.r = r;
    debug_assert!(current.blocks.keys().all(|b| window.contains(b)));
    Ok(current)
}

/// Last page carrying a differential.
pub fn last_differential_page(n: u32) -> u32 {
    (1 << (n + 1)) - 1
}

/// The E∞ page on a window.
pub fn e_infinity(n: u32, window: &Window) -> Result<PageBasis, EngineError> {
    page(n, last_differential_page(n) + 1, window)
}

/// Collapses filtrations: for each `(degree, en)` the list of E∞ generators.
pub fn collapse_filtrations(page: &PageBasis) -> BTreeMap<(Degree, i64), Vec<PageElement>> {
    let mut out: BTreeMap<(Degree, i64), Vec<PageElement>> = BTreeMap::new();
    for (b, elems) in &page.blocks {
        out.entry((b.degree, b.en)).or_default().extend(elems.iter().cloned());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pages::monomial_degree;

    fn el(i: u32, e: Vec<u32>, en: i64, t: i64) -> PageElement {
        PageElement::new(PageMonomial::new(i, e, en, t), 0)
    }

    #[test]
    fn pages_with_differentials() {
        assert_eq!(Differential::on_page(1, 3).map(|d| d.k), Some(1));
        assert_eq!(Differential::on_page(2, 7).map(|d| d.k), Some(2));
        assert!(Differential::on_page(2, 15).is_none());
        assert!(Differential::on_page(3, 4).is_none());
    }

    #[test]
    fn d3_sigma_minus_two() {
        let out = apply_differential(1, 3, &el(0, vec![], 0, -1)).unwrap();
        assert_eq!(out, vec![(TwoLocalScalar::one(), PageMonomial::new(3, vec![], 1, 0))]);
    }

    #[test]
    fn d3_sigma_minus_four_vanishes() {
        assert!(apply_differential(1, 3, &el(0, vec![], 0, -2)).unwrap().is_empty());
    }

    #[test]
    fn d7_sigma_minus_four() {
        let out = apply_differential(2, 7, &el(0, vec![0], 0, -2)).unwrap();
        assert_eq!(out, vec![(TwoLocalScalar::one(), PageMonomial::new(7, vec![0], 1, 0))]);
    }

    #[test]
    fn d3_sigma_two_hits_sigma_four() {
        let out = apply_differential(1, 3, &el(0, vec![], 0, 1)).unwrap();
        assert_eq!(out, vec![(TwoLocalScalar::one(), PageMonomial::new(3, vec![], 1, 2))]);
    }

    #[test]
    fn differential_degree_shift() {
        for n in 1..=3 {
            for d in Differential::all(n) {
                let src = PageMonomial::new(0, vec![0; n as usize - 1], 0, -(1 << (d.k - 1)));
                let out = apply_differential(n, d.r, &PageElement::new(src.clone(), 0)).unwrap();
                let (_, tgt) = &out[0];
                assert_eq!(monomial_degree(tgt), monomial_degree(&src) + Differential::DEGREE_SHIFT);
                assert_eq!(tgt.i, src.i + d.r);
                assert_eq!(tgt.en, src.en + d.en_shift());
            }
        }
    }

    #[test]
    fn not_on_page() {
        // σ² does not survive d₃, so d₇ is undefined on it
        let err = apply_differential(2, 7, &el(0, vec![0], 0, 1)).unwrap_err();
        assert!(matches!(err, EngineError::NotOnPage { page: 7, .. }));
        assert!(matches!(apply_differential(1, 4, &el(0, vec![], 0, 1)), Err(EngineError::NoDifferential { .. })));
    }

    #[test]
    fn twice_odd_sigma_powers_are_permanent() {
        let two_sigma2 = PageElement::new(PageMonomial::new(0, vec![0], 0, 1), 1);
        assert!(apply_differential(2, 7, &two_sigma2).unwrap().is_empty());
    }

    fn small(_n: u32) -> Window {
        Window::new(-8..=8, -8..=8, -4..=4, 8)
    }

    #[test]
    fn sigma_squared_dies_at_e4() {
        let sigma2 = BlockIndex::new(Degree::new(-2, 2), 0, 0);
        let e2 = page(1, 2, &small(1)).unwrap();
        assert_eq!(e2.block(&sigma2), &[el(0, vec![], 0, 1)]);
        let e4 = page(1, 4, &small(1)).unwrap();
        // only 2σ² survives
        assert_eq!(e4.block(&sigma2), &[PageElement::new(PageMonomial::new(0, vec![], 0, 1), 1)]);
    }

    #[test]
    fn sigma_fourth_powers_survive() {
        let e4 = page(1, 4, &small(1)).unwrap();
        for t in [-2, 2] {
            let b = PageMonomial::new(0, vec![], 0, t).block();
            assert_eq!(e4.block(&b), &[el(0, vec![], 0, t)]);
        }
    }

    #[test]
    fn unit_survives_everything() {
        for n in 1..=2 {
            let w = Window::new(-2..=2, -2..=2, -1..=1, 2);
            let einf = e_infinity(n, &w).unwrap();
            let one = PageMonomial::one(n);
            assert_eq!(einf.block(&one.block()), &[PageElement::new(one, 0)]);
        }
    }

    #[test]
    fn high_filtration_class_dies() {
        let einf = e_infinity(1, &small(1)).unwrap();
        assert!(einf.block(&BlockIndex::new(Degree::ZERO, 2, 4)).is_empty());
        // a² survives: η² ≠ 0
        let a2 = PageMonomial::new(2, vec![], 0, 0);
        assert_eq!(einf.block(&a2.block()), &[PageElement::new(a2, 0)]);
    }

    #[test]
    fn extra_pages_change_nothing() {
        let w = Window::new(-6..=6, -6..=6, -3..=3, 6);
        for n in 1..=2 {
            let einf = e_infinity(n, &w).unwrap();
            let later = page(n, 40, &w).unwrap();
            assert_eq!(einf.blocks, later.blocks);
        }
    }

    #[test]
    fn narrowing_onto_uncovered_window_is_refused() {
        let e2 = PageBasis::e2(1, Window::new(-4..=4, -4..=4, -2..=2, 6));
        let e2 = turn_page(1, 2, &e2).unwrap();
        let too_big = Window::new(-4..=4, -4..=4, -2..=2, 6);
        assert!(matches!(turn_page_onto(1, 3, &e2, &too_big), Err(EngineError::WindowNotClosed { .. })));
        let inner = Window::new(-3..=3, -4..=4, -1..=1, 3);
        let e3 = turn_page_onto(1, 3, &e2, &inner).unwrap();
        assert_eq!(e3.window, inner);
    }
}
