//! Monomials of the Borel spectral sequence and their finite blocks.
//!
//! The E₂ term is `Z_(2)[v_1, …, v_{n-1}, v_n^{±1}, a, σ^{±2}]/(2a)` with
//! `|a| = -α`, `|v_k| = (2^k-1)(1+α)` and `|σ²| = 2(α-1)`. A single
//! RO(Z/2)-degree holds infinitely many monomials once `n ≥ 2`, but fixing
//! the degree, the filtration (the power of `a`) and the `v_n`-exponent leaves
//! finitely many, and every map in the engine shifts these indices by a
//! constant. All computation happens on such blocks.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::group::{FGGroup, Order};

/// `2^k - 1`, the weight of `v_k`.
pub fn v_weight(k: u32) -> i64 {
    (1i64 << k) - 1
}

/// `a^i · v_1^{e_1} ⋯ v_{n-1}^{e_{n-1}} · v_n^{en} · (σ²)^t`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PageMonomial {
    pub i: u32,
    pub e: Vec<u32>,
    pub en: i64,
    pub t: i64,
}

impl PageMonomial {
    pub fn one(n: u32) -> Self {
        PageMonomial { i: 0, e: vec![0; n as usize - 1], en: 0, t: 0 }
    }

    pub fn new(i: u32, e: Vec<u32>, en: i64, t: i64) -> Self {
        PageMonomial { i, e, en, t }
    }

    /// The height this monomial is written for.
    pub fn height(&self) -> u32 {
        self.e.len() as u32 + 1
    }

    /// `Σ e_k (2^k - 1) + en (2^n - 1)`: half the nonequivariant degree of the v-part.
    pub fn v_weight(&self) -> i64 {
        let n = self.height();
        self.e.iter().enumerate().map(|(k, &x)| x as i64 * v_weight(k as u32 + 1)).sum::<i64>()
            + self.en * v_weight(n)
    }

    /// Number of v-factors counted with sign, `Σ e_k + en`.
    pub fn v_length(&self) -> i64 {
        self.e.iter().map(|&x| x as i64).sum::<i64>() + self.en
    }

    /// Smallest `k < n` with `e_k > 0`, or `n` when the v-part is a power of `v_n`.
    pub fn min_v_index(&self) -> u32 {
        self.e.iter().position(|&x| x > 0).map_or(self.height(), |k| k as u32 + 1)
    }

    pub fn mul(&self, other: &PageMonomial) -> PageMonomial {
        assert_eq!(self.e.len(), other.e.len(), "heights differ");
        PageMonomial {
            i: self.i + other.i,
            e: self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect(),
            en: self.en + other.en,
            t: self.t + other.t,
        }
    }

    /// Multiplies by `v_k`, `1 ≤ k ≤ n`.
    pub fn times_v(&self, k: u32) -> PageMonomial {
        let mut out = self.clone();
        if k == self.height() {
            out.en += 1;
        } else {
            out.e[k as usize - 1] += 1;
        }
        out
    }

    /// The same monomial without its `a` and `σ` factors.
    pub fn v_part(&self) -> PageMonomial {
        PageMonomial { i: 0, e: self.e.clone(), en: self.en, t: 0 }
    }

    pub fn block(&self) -> BlockIndex {
        BlockIndex { degree: monomial_degree(self), en: self.en, filtration: self.i }
    }
}

/// ASCII label: `a^2.v1^3.v2^-1.s^-4`, with the σ-exponent written as `2t`.
impl fmt::Display for PageMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let power = |name: String, e: i64| if e == 1 { name } else { format!("{name}^{e}") };
        if self.i > 0 {
            parts.push(power("a".into(), self.i as i64));
        }
        for (k, &x) in self.e.iter().enumerate() {
            if x > 0 {
                parts.push(power(format!("v{}", k + 1), x as i64));
            }
        }
        if self.en != 0 {
            parts.push(power(format!("v{}", self.height()), self.en));
        }
        if self.t != 0 {
            parts.push(format!("s^{}", 2 * self.t));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("."))
        }
    }
}

/// RO(Z/2)-degree of a monomial.
pub fn monomial_degree(mono: &PageMonomial) -> Degree {
    let w = mono.v_weight();
    Degree::new(w - 2 * mono.t, w + 2 * mono.t - mono.i as i64)
}

/// Index of a finite block: degree, `v_n`-exponent and filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockIndex {
    pub degree: Degree,
    pub en: i64,
    pub filtration: u32,
}

impl BlockIndex {
    pub fn new(degree: Degree, en: i64, filtration: u32) -> Self {
        BlockIndex { degree, en, filtration }
    }
}

impl fmt::Display for BlockIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) en={} i={}", self.degree.m, self.degree.p, self.en, self.filtration)
    }
}

/// Which additive grading refines the RO(Z/2)-degree into finite blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Grading {
    /// The exponent of `v_n`.
    VnExponent(i64),
    /// The signed number of v-factors `Σ e_k + en`.
    VLength(i64),
}

/// All `(e, en)` with `Σ e_k(2^k-1) + en(2^n-1) = weight` in the given grading,
/// in lexicographic order of `e`.
pub fn v_monomials(n: u32, weight: i64, grading: Grading) -> Vec<(Vec<u32>, i64)> {
    let top = v_weight(n);
    let (coeffs, target): (Vec<i64>, i64) = match grading {
        Grading::VnExponent(en) => ((1..n).map(v_weight).collect(), weight - en * top),
        Grading::VLength(len) => ((1..n).map(|k| top - v_weight(k)).collect(), len * top - weight),
    };
    let mut out = Vec::new();
    if target < 0 {
        return out;
    }
    let mut current = vec![0u32; coeffs.len()];
    compositions(&coeffs, target, 0, &mut current, &mut |e| {
        let en = match grading {
            Grading::VnExponent(en) => en,
            Grading::VLength(len) => len - e.iter().map(|&x| x as i64).sum::<i64>(),
        };
        out.push((e.to_vec(), en));
    });
    out
}

fn compositions(coeffs: &[i64], remaining: i64, pos: usize, current: &mut Vec<u32>, emit: &mut dyn FnMut(&[u32])) {
    if pos == coeffs.len() {
        if remaining == 0 {
            emit(current);
        }
        return;
    }
    let c = coeffs[pos];
    if c == 0 {
        // only reachable for degenerate gradings; a zero weight would make the block infinite
        unreachable!("v-weights are positive");
    }
    let mut x = 0;
    while x as i64 * c <= remaining {
        current[pos] = x;
        compositions(coeffs, remaining - x as i64 * c, pos + 1, current, emit);
        x += 1;
    }
    current[pos] = 0;
}

/// Solves the degree equations for the v-weight and σ²-exponent of a monomial
/// with the given degree and filtration.
pub fn weight_and_sigma(degree: Degree, filtration: u32) -> Option<(i64, i64)> {
    let twice_w = degree.m + degree.p + filtration as i64;
    if twice_w.rem_euclid(2) != 0 {
        return None;
    }
    let w = twice_w / 2;
    let twice_t = w - degree.m;
    if twice_t.rem_euclid(2) != 0 {
        return None;
    }
    Some((w, twice_t / 2))
}

/// Monomials of E₂ in one block, in lexicographic order of `(e, t)`.
pub fn e2_block_basis(n: u32, block: &BlockIndex) -> Vec<PageMonomial> {
    e2_graded_basis(n, block.degree, block.filtration, Grading::VnExponent(block.en))
}

/// Monomials of E₂ in the given degree and filtration, refined by any grading.
pub fn e2_graded_basis(n: u32, degree: Degree, filtration: u32, grading: Grading) -> Vec<PageMonomial> {
    let Some((w, t)) = weight_and_sigma(degree, filtration) else {
        return Vec::new();
    };
    v_monomials(n, w, grading)
        .into_iter()
        .map(|(e, en)| PageMonomial { i: filtration, e, en, t })
        .collect()
}

/// One additive generator of a page: `2^w` times a monomial.
///
/// Its cyclic order is `Z_(2)` in filtration 0 and `Z/2` above, from `2a = 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PageElement {
    pub monomial: PageMonomial,
    pub w: u32,
}

impl PageElement {
    pub fn new(monomial: PageMonomial, w: u32) -> Self {
        PageElement { monomial, w }
    }

    pub fn order(&self) -> Order {
        coefficient_order(self.monomial.i)
    }
}

impl fmt::Display for PageElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.w {
            0 => write!(f, "{}", self.monomial),
            w => write!(f, "{}.{}", 1u64 << w, self.monomial),
        }
    }
}

/// Coefficient group of a monomial in filtration `i`.
pub fn coefficient_order(filtration: u32) -> Order {
    if filtration == 0 {
        Order::Free
    } else {
        Order::Pow2(1)
    }
}

/// A box of blocks: ranges of `m`, `p`, `en` and filtrations `0..=max_filtration`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub m: RangeInclusive<i64>,
    pub p: RangeInclusive<i64>,
    pub en: RangeInclusive<i64>,
    pub max_filtration: u32,
}

impl Window {
    pub fn new(m: RangeInclusive<i64>, p: RangeInclusive<i64>, en: RangeInclusive<i64>, max_filtration: u32) -> Self {
        Window { m, p, en, max_filtration }
    }

    pub fn contains(&self, b: &BlockIndex) -> bool {
        self.m.contains(&b.degree.m)
            && self.p.contains(&b.degree.p)
            && self.en.contains(&b.en)
            && b.filtration <= self.max_filtration
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty() || self.p.is_empty() || self.en.is_empty()
    }

    /// Blocks of the window whose E₂ basis is nonempty, in index order.
    pub fn nonempty_blocks(&self, n: u32) -> Vec<BlockIndex> {
        let top = v_weight(n);
        let mut out = Vec::new();
        for m in self.m.clone() {
            for p in self.p.clone() {
                for i in 0..=self.max_filtration {
                    let Some((w, _)) = weight_and_sigma(Degree::new(m, p), i) else { continue };
                    for en in self.en.clone() {
                        let rest = w - en * top;
                        if rest < 0 || (n == 1 && rest != 0) {
                            continue;
                        }
                        out.push(BlockIndex::new(Degree::new(m, p), en, i));
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m={}:{} p={}:{} en={}:{} filtration=0:{}",
            self.m.start(),
            self.m.end(),
            self.p.start(),
            self.p.end(),
            self.en.start(),
            self.en.end(),
            self.max_filtration
        )
    }
}

/// Additive basis of page `r` over a window; blocks absent from the map are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageBasis {
    pub n: u32,
    pub r: u32,
    pub window: Window,
    pub blocks: BTreeMap<BlockIndex, Vec<PageElement>>,
}

impl PageBasis {
    /// The E₂ page on a window.
    pub fn e2(n: u32, window: Window) -> Self {
        let blocks = window
            .nonempty_blocks(n)
            .into_iter()
            .filter_map(|b| {
                let elems: Vec<PageElement> =
                    e2_block_basis(n, &b).into_iter().map(|m| PageElement::new(m, 0)).collect();
                (!elems.is_empty()).then_some((b, elems))
            })
            .collect();
        PageBasis { n, r: 2, window, blocks }
    }

    pub fn block(&self, b: &BlockIndex) -> &[PageElement] {
        self.blocks.get(b).map_or(&[], Vec::as_slice)
    }

    pub fn group(&self, b: &BlockIndex) -> FGGroup {
        group_of(self.block(b))
    }

    /// Position of a monomial within its block.
    pub fn position(&self, mono: &PageMonomial) -> Option<usize> {
        self.block(&mono.block()).iter().position(|e| &e.monomial == mono)
    }
}

pub fn group_of(elements: &[PageElement]) -> FGGroup {
    FGGroup::new(elements.iter().map(ToString::to_string).collect(), elements.iter().map(PageElement::order).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn generator_degrees() {
        let v1 = PageMonomial::new(0, vec![], 1, 0);
        assert_eq!(monomial_degree(&v1), Degree::new(1, 1));
        let a = PageMonomial::new(1, vec![], 0, 0);
        assert_eq!(monomial_degree(&a), Degree::new(0, -1));
        let period = PageMonomial::new(0, vec![0], 8, -12);
        assert_eq!(monomial_degree(&period), Degree::new(48, 0));
        let sigma2 = PageMonomial::new(0, vec![], 0, 1);
        assert_eq!(monomial_degree(&sigma2), Degree::new(-2, 2));
    }

    #[test]
    fn unit_block() {
        let b = BlockIndex::new(Degree::ZERO, 0, 0);
        assert_eq!(e2_block_basis(1, &b), vec![PageMonomial::one(1)]);
    }

    #[test]
    fn a4_v1sq_sigma2_block() {
        let b = BlockIndex::new(Degree::ZERO, 2, 4);
        let basis = e2_block_basis(1, &b);
        assert_eq!(basis, vec![PageMonomial::new(4, vec![], 2, 1)]);
        assert_eq!(basis[0].to_string(), "a^4.v1^2.s^2");
    }

    #[test]
    fn height_two_degree_zero() {
        let b = BlockIndex::new(Degree::ZERO, -1, 0);
        assert_eq!(e2_block_basis(2, &b), vec![PageMonomial::new(0, vec![3], -1, 0)]);
    }

    #[test]
    fn unsolvable_blocks_are_empty() {
        assert!(e2_block_basis(1, &BlockIndex::new(Degree::new(1, 0), 0, 0)).is_empty());
        assert!(e2_block_basis(2, &BlockIndex::new(Degree::new(0, 0), 1, 0)).is_empty());
    }

    #[test]
    fn length_grading_is_finite_and_exact() {
        // degree 0 at height 2 holds v1^{3c} v2^{-c} for every c; length 2c singles one out
        let basis = e2_graded_basis(2, Degree::ZERO, 0, Grading::VLength(4));
        assert_eq!(basis, vec![PageMonomial::new(0, vec![6], -2, 0)]);
        for m in &basis {
            assert_eq!(m.v_length(), 4);
        }
    }

    /// Brute-force scan over a box of exponents.
    fn scan(n: u32, block: &BlockIndex, bound: i64) -> Vec<PageMonomial> {
        let mut out = Vec::new();
        let k = n as usize - 1;
        let mut stack: Vec<Vec<u32>> = vec![vec![]];
        let mut es = Vec::new();
        while let Some(prefix) = stack.pop() {
            if prefix.len() == k {
                es.push(prefix);
                continue;
            }
            for x in 0..=2 * bound as u32 {
                let mut p = prefix.clone();
                p.push(x);
                stack.push(p);
            }
        }
        for e in es {
            for t in -bound..=bound {
                let mono = PageMonomial::new(block.filtration, e.clone(), block.en, t);
                if monomial_degree(&mono) == block.degree {
                    out.push(mono);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn brute_force_agreement() {
        for n in 1..=3 {
            for m in -6..=6 {
                for p in -6..=6 {
                    for en in -2..=2 {
                        for i in 0..=4 {
                            let b = BlockIndex::new(Degree::new(m, p), en, i);
                            let mut got = e2_block_basis(n, &b);
                            got.sort();
                            assert_eq!(got, scan(n, &b, 12), "block {b} at n={n}");
                        }
                    }
                }
            }
        }
    }

    fn arb_monomial(n: u32) -> impl Strategy<Value = PageMonomial> {
        (0u32..8, proptest::collection::vec(0u32..5, n as usize - 1), -5i64..5, -6i64..6)
            .prop_map(|(i, e, en, t)| PageMonomial::new(i, e, en, t))
    }

    proptest! {
        #[test]
        fn random_monomials_are_enumerated(mono in (1u32..4).prop_flat_map(arb_monomial)) {
            let n = mono.height();
            let basis = e2_block_basis(n, &mono.block());
            prop_assert!(basis.contains(&mono));
            for m in &basis {
                prop_assert_eq!(m.block(), mono.block());
            }
            let by_length = e2_graded_basis(n, monomial_degree(&mono), mono.i, Grading::VLength(mono.v_length()));
            prop_assert!(by_length.contains(&mono));
        }

        #[test]
        fn degree_is_additive(a in arb_monomial(3), b in arb_monomial(3)) {
            prop_assert_eq!(monomial_degree(&a.mul(&b)), monomial_degree(&a) + monomial_degree(&b));
        }
    }
}
