//! Closed-form additive basis and multiplication of π⋆ER(n).
//!
//! The homotopy is the subring of E₂ generated by `a`, `v_n^{±1}`,
//! `σ^{±2^{n+1}}` and the classes `v_k σ^{l 2^{k+1}}` (with `v_0 = 2`), modulo
//! `a^{2^{k+1}-1} v_k σ^{l 2^{k+1}} = 0`. A monomial with smallest v-index `κ`
//! lies in that subring exactly when its σ-exponent is divisible by `2^{κ+1}`;
//! a single factor of `2 = v_0` admits every even σ-exponent. Hence the
//! normal form is `2^w · a^i v^e σ^{2t}` subject to:
//!
//! * `i > 0`: `w = 0`, `2t ≡ 0 (mod 2^{κ+1})` and `i ≤ 2^{κ+1} - 2`;
//! * `i = 0`: `w = 0` if `2t ≡ 0 (mod 2^{κ+1})`, otherwise `w = 1`.
//!
//! The truncation is applied for `k = n` as well: `v_n` is invertible and
//! `d_{2^{n+1}-1}(σ^{-2^n}) = v_n a^{2^{n+1}-1}`, so `a^{2^{n+1}-1} = 0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::error::EngineError;
use crate::group::{FGGroup, Order};
use crate::pages::{
    coefficient_order, e2_graded_basis, monomial_degree, BlockIndex, Grading, PageElement, PageMonomial,
};
use crate::scalar::TwoLocalScalar;

/// `2^w` times a monomial, in normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ERBasisElement {
    pub monomial: PageMonomial,
    pub w: u32,
}

impl ERBasisElement {
    pub fn order(&self) -> Order {
        coefficient_order(self.monomial.i)
    }

    pub fn degree(&self) -> Degree {
        monomial_degree(&self.monomial)
    }

    pub fn is_torsion(&self) -> bool {
        self.monomial.i > 0
    }
}

impl From<PageElement> for ERBasisElement {
    fn from(p: PageElement) -> Self {
        ERBasisElement { monomial: p.monomial, w: p.w }
    }
}

impl fmt::Display for ERBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&PageElement::new(self.monomial.clone(), self.w), f)
    }
}

/// Largest power of `a` that can be nonzero, `2^{n+1} - 2`.
pub fn max_filtration(n: u32) -> u32 {
    (1 << (n + 1)) - 2
}

/// The 2-divisibility `w` with which `mono` appears in the basis, or `None`
/// if no multiple of it does.
pub fn membership(mono: &PageMonomial) -> Option<u32> {
    let kappa = mono.min_v_index();
    let on_lattice = (2 * mono.t).rem_euclid(1 << (kappa + 1)) == 0;
    if mono.i == 0 {
        return Some(if on_lattice { 0 } else { 1 });
    }
    (on_lattice && mono.i <= (1 << (kappa + 1)) - 2).then_some(0)
}

/// Basis of π⋆ER(n) in one `(degree, en)` block, ordered by filtration then exponents.
pub fn er_block_basis(n: u32, degree: Degree, en: i64) -> Vec<ERBasisElement> {
    er_graded_basis(n, degree, Grading::VnExponent(en))
}

/// Basis of π⋆ER(n) in one degree, refined by any grading.
pub fn er_graded_basis(n: u32, degree: Degree, grading: Grading) -> Vec<ERBasisElement> {
    (0..=max_filtration(n))
        .flat_map(|i| e2_graded_basis(n, degree, i, grading))
        .filter_map(|monomial| membership(&monomial).map(|w| ERBasisElement { monomial, w }))
        .collect()
}

/// For `n = 1` every degree meets only finitely many `v_1`-exponents; this is
/// that exact range, so summing blocks over it gives the whole group. For
/// `n ≥ 2` a degree meets infinitely many exponents and `None` is returned.
pub fn complete_en_range(n: u32, degree: Degree) -> Option<std::ops::RangeInclusive<i64>> {
    if n != 1 {
        return None;
    }
    // en = weight = (m + p + i)/2 with 0 ≤ i ≤ 2
    let lo = (degree.m + degree.p).div_euclid(2);
    Some(lo..=lo + 1)
}

/// Basis elements of one filtration block.
pub fn er_filtration_block(n: u32, block: &BlockIndex) -> Vec<ERBasisElement> {
    er_block_basis(n, block.degree, block.en).into_iter().filter(|e| e.monomial.i == block.filtration).collect()
}

pub fn er_group(elements: &[ERBasisElement]) -> FGGroup {
    FGGroup::new(elements.iter().map(ToString::to_string).collect(), elements.iter().map(ERBasisElement::order).collect())
}

/// Normalizes `scalar · monomial` into `scalar' · basis element`, or `None` if it vanishes.
pub fn normalize(scalar: TwoLocalScalar, monomial: PageMonomial) -> Option<(TwoLocalScalar, ERBasisElement)> {
    if scalar.is_zero() {
        return None;
    }
    if monomial.i > 0 {
        // Z/2 coefficients; an off-lattice torsion monomial only arises with an even scalar
        if scalar.valuation() != Some(0) {
            return None;
        }
        let w = membership(&monomial)?;
        return Some((TwoLocalScalar::one(), ERBasisElement { monomial, w }));
    }
    let w = membership(&monomial).expect("filtration zero always admits a multiple");
    let rest = scalar.checked_div(&TwoLocalScalar::pow2(w)).expect("product of basis elements is 2-divisible enough");
    Some((rest, ERBasisElement { monomial, w }))
}

/// Product of `(s, x)` and `(t, y)` in normal form.
pub fn er_product(
    x: (&TwoLocalScalar, &ERBasisElement),
    y: (&TwoLocalScalar, &ERBasisElement),
) -> Option<(TwoLocalScalar, ERBasisElement)> {
    let scalar = &(x.0 * y.0) * &TwoLocalScalar::pow2(x.1.w + y.1.w);
    normalize(scalar, x.1.monomial.mul(&y.1.monomial))
}

/// Product of a basis element with a bare monomial multiplier, used by the
/// multiplication maps.
pub fn multiply_by(element: &ERBasisElement, multiplier: &ERBasisElement) -> Option<(TwoLocalScalar, ERBasisElement)> {
    er_product((&TwoLocalScalar::one(), element), (&TwoLocalScalar::one(), multiplier))
}

/// `λ(n) = 2^{2n+1} - 2^{n+2} + 1`.
pub fn lambda(n: u32) -> i64 {
    (1i64 << (2 * n + 1)) - (1i64 << (n + 2)) + 1
}

/// `2^{n+2}(2^n - 1)`.
pub fn period(n: u32) -> i64 {
    (1i64 << (n + 2)) * ((1i64 << n) - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistinguishedName {
    /// The invertible class `v_n^{2^n-1} σ^{-2^{n+1}(2^{n-1}-1)}`.
    Y,
    /// `a · y(n)`.
    X,
    /// The periodicity generator `v_n^{2^{n+1}} σ^{-2^{n+1}(2^n-1)}`.
    Period,
}

impl fmt::Display for DistinguishedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistinguishedName::Y => "y",
            DistinguishedName::X => "x",
            DistinguishedName::Period => "period",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinguishedElement {
    pub name: DistinguishedName,
    pub n: u32,
    pub element: ERBasisElement,
    pub degree: Degree,
}

impl DistinguishedElement {
    pub fn en_shift(&self) -> i64 {
        self.element.monomial.en
    }
}

/// Builds `y(n)`, `x(n)` or the periodicity generator and checks its normal
/// form and its degree against the closed forms.
pub fn distinguished(n: u32, name: DistinguishedName) -> Result<DistinguishedElement, EngineError> {
    if n == 0 {
        return Err(EngineError::BadHeight(n));
    }
    let zeros = vec![0; n as usize - 1];
    let (monomial, expected) = match name {
        DistinguishedName::Y => (
            PageMonomial::new(0, zeros, (1 << n) - 1, -(1i64 << n) * ((1i64 << (n - 1)) - 1)),
            Degree::new(lambda(n), 1),
        ),
        DistinguishedName::X => (
            PageMonomial::new(1, zeros, (1 << n) - 1, -(1i64 << n) * ((1i64 << (n - 1)) - 1)),
            Degree::new(lambda(n), 0),
        ),
        DistinguishedName::Period => (
            PageMonomial::new(0, zeros, 1 << (n + 1), -(1i64 << n) * ((1i64 << n) - 1)),
            Degree::new(period(n), 0),
        ),
    };
    let label = format!("{name}({n})");
    if membership(&monomial) != Some(0) {
        return Err(EngineError::DegreeMismatch { name: label, computed: monomial_degree(&monomial), expected });
    }
    let computed = monomial_degree(&monomial);
    if computed != expected {
        return Err(EngineError::DegreeMismatch { name: label, computed, expected });
    }
    Ok(DistinguishedElement { name, n, element: ERBasisElement { monomial, w: 0 }, degree: computed })
}

/// Inverse of `y(n)` in π⋆ER(n).
pub fn y_inverse(n: u32) -> ERBasisElement {
    let y = distinguished(n, DistinguishedName::Y).expect("y(n) passes its self-check").element.monomial;
    ERBasisElement { monomial: PageMonomial::new(0, y.e.clone(), -y.en, -y.t), w: 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn elem(i: u32, e: Vec<u32>, en: i64, t: i64, w: u32) -> ERBasisElement {
        ERBasisElement { monomial: PageMonomial::new(i, e, en, t), w }
    }

    fn one() -> TwoLocalScalar {
        TwoLocalScalar::one()
    }

    #[test]
    fn eta_block() {
        assert_eq!(er_block_basis(1, Degree::new(1, 0), 1), vec![elem(1, vec![], 1, 0, 0)]);
    }

    #[test]
    fn ko_alpha_class() {
        let basis = er_block_basis(1, Degree::new(4, 0), 2);
        assert_eq!(basis, vec![elem(0, vec![], 2, -1, 1)]);
        assert_eq!(basis[0].to_string(), "2.v1^2.s^-2");
    }

    #[test]
    fn pi3_of_ko_minus_alpha() {
        assert_eq!(er_block_basis(1, Degree::new(3, 1), 3), vec![elem(2, vec![], 3, 0, 0)]);
    }

    #[test]
    fn alpha_squared_is_four_beta() {
        let alpha = elem(0, vec![], 2, -1, 1);
        let (s, prod) = er_product((&one(), &alpha), (&one(), &alpha)).unwrap();
        assert_eq!(s, TwoLocalScalar::from_int(4));
        assert_eq!(prod, elem(0, vec![], 4, -2, 0));
    }

    #[test]
    fn eta_cubed_vanishes() {
        let a = elem(1, vec![], 0, 0, 0);
        let a2v1 = elem(2, vec![], 1, 0, 0);
        assert!(er_product((&one(), &a), (&one(), &a2v1)).is_none());
    }

    #[test]
    fn unit_law() {
        for n in 1..=3 {
            let unit = ERBasisElement { monomial: PageMonomial::one(n), w: 0 };
            let y = distinguished(n, DistinguishedName::Y).unwrap().element;
            assert_eq!(er_product((&one(), &unit), (&one(), &y)), Some((one(), y)));
        }
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda(1), 1);
        assert_eq!(lambda(2), 17);
        assert_eq!(lambda(3), 97);
        assert_eq!(period(1), 8);
        assert_eq!(period(2), 48);
        assert_eq!(period(3), 224);
    }

    #[test]
    fn distinguished_elements() {
        let y1 = distinguished(1, DistinguishedName::Y).unwrap();
        assert_eq!(y1.element, elem(0, vec![], 1, 0, 0));
        let y2 = distinguished(2, DistinguishedName::Y).unwrap();
        assert_eq!(y2.element, elem(0, vec![0], 3, -4, 0));
        for n in 1..=4 {
            for name in [DistinguishedName::Y, DistinguishedName::X, DistinguishedName::Period] {
                distinguished(n, name).unwrap();
            }
        }
        let x2 = distinguished(2, DistinguishedName::X).unwrap();
        assert_eq!(x2.degree, Degree::new(17, 0));
        assert_eq!(er_block_basis(2, x2.degree, 3), vec![x2.element]);
    }

    #[test]
    fn a_nilpotence() {
        for n in 1..=3 {
            let top = max_filtration(n);
            let a = |i| elem(i, vec![0; n as usize - 1], 0, 0, 0);
            assert_eq!(membership(&a(top).monomial), Some(0));
            let (_, prod) = er_product((&one(), &a(top - 1)), (&one(), &a(1))).unwrap();
            assert_eq!(prod, a(top));
            assert!(er_product((&one(), &a(top)), (&one(), &a(1))).is_none());
        }
    }

    #[test]
    fn complete_range_covers_every_nonempty_block() {
        for m in -20..=20 {
            for p in -20..=20 {
                let d = Degree::new(m, p);
                let range = complete_en_range(1, d).unwrap();
                for en in -40..=40 {
                    if !er_block_basis(1, d, en).is_empty() {
                        assert!(range.contains(&en), "{d} en={en}");
                    }
                }
            }
        }
        assert!(complete_en_range(2, Degree::ZERO).is_none());
    }

    #[test]
    fn twice_a_vanishes() {
        let two = TwoLocalScalar::from_int(2);
        let unit = elem(0, vec![0], 0, 0, 0);
        let a = elem(1, vec![0], 0, 0, 0);
        assert!(er_product((&two, &unit), (&one(), &a)).is_none());
    }

    #[test]
    fn y_is_a_unit() {
        for n in 1..=4 {
            let y = distinguished(n, DistinguishedName::Y).unwrap().element;
            let (s, prod) = er_product((&one(), &y), (&one(), &y_inverse(n))).unwrap();
            assert_eq!(s, one());
            assert_eq!(prod.monomial, PageMonomial::one(n));
        }
    }

    fn arb_element(n: u32) -> impl Strategy<Value = (TwoLocalScalar, ERBasisElement)> {
        (0u32..=max_filtration(n), proptest::collection::vec(0u32..3, n as usize - 1), -3i64..4, -6i64..6, -5i64..6)
            .prop_filter_map("not in the basis", |(i, e, en, t, s)| {
                let monomial = PageMonomial::new(i, e, en, t);
                let w = membership(&monomial)?;
                let s = if i > 0 { 1 } else { s };
                (s != 0).then(|| (TwoLocalScalar::from_int(s), ERBasisElement { monomial, w }))
            })
    }

    /// Expands `scalar · element` to `scalar · 2^w` times the bare monomial.
    fn expand(x: &Option<(TwoLocalScalar, ERBasisElement)>) -> Option<(TwoLocalScalar, PageMonomial)> {
        x.as_ref().map(|(s, e)| {
            let c = s * &TwoLocalScalar::pow2(e.w);
            let c = if e.monomial.i > 0 { TwoLocalScalar::from_int(c.residue_mod_pow2(1) as i64) } else { c };
            (c, e.monomial.clone())
        })
    }

    proptest! {
        #[test]
        fn product_is_commutative(
            (x, y) in (1u32..4).prop_flat_map(|n| (arb_element(n), arb_element(n)))
        ) {
            let xy = er_product((&x.0, &x.1), (&y.0, &y.1));
            let yx = er_product((&y.0, &y.1), (&x.0, &x.1));
            prop_assert_eq!(xy, yx);
        }

        #[test]
        fn product_is_associative(
            (x, y, z) in (1u32..4).prop_flat_map(|n| (arb_element(n), arb_element(n), arb_element(n)))
        ) {
            let left = er_product((&x.0, &x.1), (&y.0, &y.1))
                .and_then(|(s, xy)| er_product((&s, &xy), (&z.0, &z.1)));
            let right = er_product((&y.0, &y.1), (&z.0, &z.1))
                .and_then(|(s, yz)| er_product((&x.0, &x.1), (&s, &yz)));
            prop_assert_eq!(expand(&left), expand(&right));
        }

        #[test]
        fn products_stay_in_normal_form(
            (x, y) in (1u32..4).prop_flat_map(|n| (arb_element(n), arb_element(n)))
        ) {
            if let Some((_, p)) = er_product((&x.0, &x.1), (&y.0, &y.1)) {
                prop_assert_eq!(membership(&p.monomial), Some(p.w));
                prop_assert_eq!(p.degree(), x.1.degree() + y.1.degree());
            }
        }
    }
}
