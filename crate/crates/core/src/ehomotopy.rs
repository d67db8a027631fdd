//! π_*E(n) = Z_(2)[v_1, …, v_{n-1}, v_n^{±1}] with `|v_k| = 2(2^k-1)`, and the
//! action of the involution.
//!
//! The involution acts on π_{2j} by `(-1)^j`, i.e. `σ(v_k) = -v_k` extended
//! multiplicatively; for `n = 1` this is complex conjugation on π_*KU. On the
//! space `E_V` of a real spectrum each copy of α twists the action by a sign,
//! so on π_*(E_V) the action is `(-1)^{V.p}` times the untwisted one.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::group::{FGGroup, Order};
use crate::matrix::IntMatrix;
use crate::pages::{v_monomials, v_weight, Grading, PageMonomial};
use crate::scalar::TwoLocalScalar;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EMonomial {
    pub e: Vec<u32>,
    pub en: i64,
}

impl EMonomial {
    pub fn new(e: Vec<u32>, en: i64) -> Self {
        EMonomial { e, en }
    }

    pub fn height(&self) -> u32 {
        self.e.len() as u32 + 1
    }

    /// Nonequivariant degree, always even.
    pub fn degree(&self) -> i64 {
        let n = self.height();
        2 * (self.e.iter().enumerate().map(|(k, &x)| x as i64 * v_weight(k as u32 + 1)).sum::<i64>()
            + self.en * v_weight(n))
    }

    pub fn mul(&self, other: &EMonomial) -> EMonomial {
        EMonomial { e: self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect(), en: self.en + other.en }
    }

    /// The underlying v-monomial of an E₂ monomial (σ² ↦ 1, `a` forgotten).
    pub fn underlying(mono: &PageMonomial) -> EMonomial {
        EMonomial { e: mono.e.clone(), en: mono.en }
    }
}

impl fmt::Display for EMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&PageMonomial::new(0, self.e.clone(), self.en, 0), f)
    }
}

/// Basis of π_j E(n) with `v_n`-exponent `en`.
pub fn e_block_basis(n: u32, j: i64, en: i64) -> Vec<EMonomial> {
    e_graded_basis(n, j, Grading::VnExponent(en))
}

pub fn e_graded_basis(n: u32, j: i64, grading: Grading) -> Vec<EMonomial> {
    if j.rem_euclid(2) != 0 {
        return Vec::new();
    }
    v_monomials(n, j / 2, grading).into_iter().map(|(e, en)| EMonomial { e, en }).collect()
}

pub fn e_group(basis: &[EMonomial]) -> FGGroup {
    FGGroup::new(basis.iter().map(ToString::to_string).collect(), vec![Order::Free; basis.len()])
}

/// Sign convention for the involution. `Flipped` exists only as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum SigmaConvention {
    #[default]
    Standard,
    Flipped,
}

impl SigmaConvention {
    fn factor(self) -> i64 {
        match self {
            SigmaConvention::Standard => 1,
            SigmaConvention::Flipped => -1,
        }
    }
}

/// `σ(M) = ±M`.
pub fn sigma_action(mono: &EMonomial) -> (i64, EMonomial) {
    (sigma_sign(mono.degree(), Degree::ZERO, SigmaConvention::Standard), mono.clone())
}

/// Sign of σ on π_j of `E_V` where `j` is the nonequivariant degree of the class.
pub fn sigma_sign(j: i64, shift: Degree, convention: SigmaConvention) -> i64 {
    let untwisted = if (j / 2).rem_euclid(2) == 0 { 1 } else { -1 };
    let twist = if shift.p.rem_euclid(2) == 0 { 1 } else { -1 };
    untwisted * twist * convention.factor()
}

/// `1 - σ` on the block of π_j E(n) with exponent `en`.
pub fn one_minus_sigma(n: u32, j: i64, en: i64) -> IntMatrix {
    one_minus_sigma_on(&e_block_basis(n, j, en), j, Degree::ZERO, SigmaConvention::Standard)
}

/// `1 - σ` on a basis of π_j E(n) viewed inside `E_V`.
pub fn one_minus_sigma_on(basis: &[EMonomial], j: i64, shift: Degree, convention: SigmaConvention) -> IntMatrix {
    let entry = TwoLocalScalar::from_int(1 - sigma_sign(j, shift, convention));
    IntMatrix::diagonal(basis.len(), basis.len(), &vec![entry; basis.len()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn blocks() {
        assert_eq!(e_block_basis(1, 4, 2), vec![EMonomial::new(vec![], 2)]);
        assert_eq!(e_block_basis(2, 0, -1), vec![EMonomial::new(vec![3], -1)]);
        for en in -3..=3 {
            assert!(e_block_basis(1, 3, en).is_empty());
        }
    }

    #[test]
    fn conjugation_signs() {
        let v1 = EMonomial::new(vec![], 1);
        assert_eq!(sigma_action(&v1).0, -1);
        assert_eq!(sigma_action(&EMonomial::new(vec![], 2)).0, 1);
        assert_eq!(sigma_action(&EMonomial::new(vec![], 0)).0, 1);
        // (1 - σ)(v1) = 2 v1
        assert_eq!(one_minus_sigma(1, 2, 1), IntMatrix::from_rows(&[vec![2]], 1));
        assert!(one_minus_sigma(1, 4, 2).is_zero());
        assert!(one_minus_sigma(1, 0, 0).is_zero());
    }

    #[test]
    fn alpha_twists_the_sign() {
        assert_eq!(sigma_sign(2, Degree::ZERO, SigmaConvention::Standard), -1);
        assert_eq!(sigma_sign(2, -Degree::ALPHA, SigmaConvention::Standard), 1);
        assert_eq!(sigma_sign(2, Degree::ZERO, SigmaConvention::Flipped), 1);
    }

    proptest! {
        #[test]
        fn sigma_is_a_ring_involution(
            e1 in proptest::collection::vec(0u32..4, 2), en1 in -3i64..3,
            e2 in proptest::collection::vec(0u32..4, 2), en2 in -3i64..3,
        ) {
            let x = EMonomial::new(e1, en1);
            let y = EMonomial::new(e2, en2);
            let (sx, _) = sigma_action(&x);
            let (sy, _) = sigma_action(&y);
            let (sxy, _) = sigma_action(&x.mul(&y));
            prop_assert_eq!(sxy, sx * sy);
            prop_assert_eq!(sx * sx, 1);
        }

        #[test]
        fn one_minus_sigma_is_zero_or_two(n in 1u32..4, j in -30i64..30, en in -4i64..4) {
            let m = one_minus_sigma(n, j, en);
            // (1 + σ)(1 - σ) = 0
            let sigma_sign = if (j / 2).rem_euclid(2) == 0 { 1 } else { -1 };
            let one_plus = IntMatrix::diagonal(m.rows(), m.rows(), &vec![TwoLocalScalar::from_int(1 + sigma_sign); m.rows()]);
            prop_assert!((&one_plus * &m).is_zero());
            let two = IntMatrix::diagonal(m.rows(), m.rows(), &vec![TwoLocalScalar::from_int(2); m.rows()]);
            prop_assert!(m.is_zero() || m == two);
        }
    }
}
