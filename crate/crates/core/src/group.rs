//! Finitely generated Z_(2)-modules with named generators, homomorphisms
//! between them, and the subquotient and subgroup computations built on
//! Smith normal form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::matrix::IntMatrix;
use crate::scalar::TwoLocalScalar;
use crate::snf::{smith_normal_form, solve_with, SmithForm};

/// Order of a cyclic summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Order {
    Free,
    /// `Z/2^k`, `k ≥ 1`.
    Pow2(u32),
}

impl Order {
    fn kills(&self, x: &TwoLocalScalar) -> bool {
        match self {
            Order::Free => x.is_zero(),
            Order::Pow2(k) => x.divisible_by_pow2(*k),
        }
    }
}

/// Isomorphism invariants: rank and the sorted list of torsion exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct GroupInvariants {
    pub rank: usize,
    pub torsion: Vec<u32>,
}

impl GroupInvariants {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum.
    pub fn sum(&self, other: &GroupInvariants) -> GroupInvariants {
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        torsion.sort_unstable();
        GroupInvariants { rank: self.rank + other.rank, torsion }
    }

    pub fn torsion_string(&self) -> String {
        if self.torsion.is_empty() {
            "-".to_string()
        } else {
            self.torsion.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        }
    }
}

impl fmt::Display for GroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z_(2)".to_string()),
            r => parts.push(format!("Z_(2)^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let k = self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|&&x| x == k).count();
            let base = format!("Z/{}", 1u64 << k);
            parts.push(if run == 1 { base } else { format!("({base})^{run}") });
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Z_(2)^rank ⊕ ⊕ Z/2^{k_i}` presented on an ordered list of labelled generators.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FGGroup {
    pub generators: Vec<String>,
    pub orders: Vec<Order>,
}

impl FGGroup {
    pub fn new(generators: Vec<String>, orders: Vec<Order>) -> Self {
        assert_eq!(generators.len(), orders.len());
        FGGroup { generators, orders }
    }

    pub fn trivial() -> Self {
        FGGroup::default()
    }

    /// `Z_(2)^r` with generators `e0, e1, …`.
    pub fn free(r: usize) -> Self {
        FGGroup::new((0..r).map(|i| format!("e{i}")).collect(), vec![Order::Free; r])
    }

    pub fn from_orders(orders: Vec<Order>) -> Self {
        FGGroup::new((0..orders.len()).map(|i| format!("e{i}")).collect(), orders)
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.orders.iter().filter(|o| **o == Order::Free).count()
    }

    pub fn invariants(&self) -> GroupInvariants {
        let mut torsion: Vec<u32> = self
            .orders
            .iter()
            .filter_map(|o| match o {
                Order::Pow2(k) => Some(*k),
                Order::Free => None,
            })
            .collect();
        torsion.sort_unstable();
        GroupInvariants { rank: self.rank(), torsion }
    }

    pub fn is_isomorphic(&self, other: &FGGroup) -> bool {
        self.invariants() == other.invariants()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants().is_trivial()
    }

    /// Whether `v` represents zero.
    pub fn is_zero_element(&self, v: &[TwoLocalScalar]) -> bool {
        v.iter().zip(&self.orders).all(|(x, o)| o.kills(x))
    }

    /// Columns `2^k e_i` for every torsion generator.
    pub fn relations(&self) -> IntMatrix {
        let cols: Vec<Vec<TwoLocalScalar>> = self
            .orders
            .iter()
            .enumerate()
            .filter_map(|(i, o)| match o {
                Order::Pow2(k) => {
                    let mut c = vec![TwoLocalScalar::zero(); self.len()];
                    c[i] = TwoLocalScalar::pow2(*k);
                    Some(c)
                }
                Order::Free => None,
            })
            .collect();
        IntMatrix::from_columns(self.len(), &cols)
    }
}

impl fmt::Display for FGGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.invariants())
    }
}

/// A homomorphism of [`FGGroup`]s given by its matrix on the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FGGroup,
    pub target: FGGroup,
    pub matrix: IntMatrix,
}

impl GroupHom {
    /// Validates shapes and that every generator's order annihilates its image.
    pub fn new(source: FGGroup, target: FGGroup, matrix: IntMatrix) -> Result<Self, AlgebraError> {
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(AlgebraError::ShapeMismatch {
                rows: matrix.rows(),
                cols: matrix.cols(),
                expected_rows: target.len(),
                expected_cols: source.len(),
            });
        }
        for (j, o) in source.orders.iter().enumerate() {
            if let Order::Pow2(k) = o {
                let scaled: Vec<TwoLocalScalar> =
                    matrix.column(j).iter().map(|x| x * &TwoLocalScalar::pow2(*k)).collect();
                if !target.is_zero_element(&scaled) {
                    return Err(AlgebraError::NotAHomomorphism { column: j, order: format!("2^{k}") });
                }
            }
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn zero(source: FGGroup, target: FGGroup) -> Self {
        let matrix = IntMatrix::zeros(target.len(), source.len());
        GroupHom { source, target, matrix }
    }

    pub fn identity(group: FGGroup) -> Self {
        let matrix = IntMatrix::identity(group.len());
        GroupHom { source: group.clone(), target: group, matrix }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        assert_eq!(self.target.len(), other.source.len());
        GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: &other.matrix * &self.matrix,
        }
    }

    /// True if every generator maps to zero in the target.
    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero_element(&self.matrix.column(j)))
    }

    /// Images of the generators, as target vectors.
    pub fn image_generators(&self) -> Vec<Vec<TwoLocalScalar>> {
        self.matrix.columns()
    }

    /// Generators of the kernel, as source vectors.
    pub fn kernel_generators(&self) -> Vec<Vec<TwoLocalScalar>> {
        let g = self.source.len();
        let c = self.matrix.hstack(&self.target.relations());
        let snf = smith_normal_form(&c);
        (snf.rank()..c.cols())
            .map(|j| snf.v.column(j)[..g].to_vec())
            .filter(|v| !v.iter().all(TwoLocalScalar::is_zero))
            .collect()
    }

    pub fn kernel(&self) -> FGGroup {
        let zero_in = GroupHom::zero(FGGroup::trivial(), self.source.clone());
        subquotient(&zero_in, self).expect("zero map composes to zero").group
    }

    pub fn cokernel(&self) -> FGGroup {
        let zero_out = GroupHom::zero(self.target.clone(), FGGroup::trivial());
        subquotient(self, &zero_out).expect("zero map composes to zero").group
    }

    pub fn is_isomorphism(&self) -> bool {
        self.kernel().is_trivial() && self.cokernel().is_trivial()
    }
}

/// The homology `ker(out) / im(into)` together with representatives of its
/// generators in the coordinates of the middle group.
#[derive(Debug, Clone)]
pub struct Subquotient {
    pub group: FGGroup,
    pub representatives: Vec<Vec<TwoLocalScalar>>,
}

/// A saturated sublattice of `Z_(2)^g` with a basis, supporting coordinates.
struct Lattice {
    basis: Vec<Vec<TwoLocalScalar>>,
    snf: SmithForm,
    ambient: usize,
}

impl Lattice {
    fn spanned_by(ambient: usize, gens: &[Vec<TwoLocalScalar>]) -> Self {
        let m = IntMatrix::from_columns(ambient, gens);
        let snf = smith_normal_form(&m);
        let basis = snf
            .exponents
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let two_e = TwoLocalScalar::pow2(e);
                snf.u_inv.column(i).iter().map(|x| x * &two_e).collect()
            })
            .collect();
        Lattice { basis, snf, ambient }
    }

    fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `v` in the basis, if `v` lies in the lattice.
    fn coordinates(&self, v: &[TwoLocalScalar]) -> Option<Vec<TwoLocalScalar>> {
        let y = self.snf.u.apply(v);
        let mut out = Vec::with_capacity(self.rank());
        for (i, c) in y.iter().enumerate() {
            match self.snf.exponents.get(i) {
                Some(&e) => out.push(c.checked_div(&TwoLocalScalar::pow2(e))?),
                None if c.is_zero() => {}
                None => return None,
            }
        }
        Some(out)
    }
}

/// Homology `ker(out) / im(into)` at `into.target == out.source`.
pub fn subquotient(into: &GroupHom, out: &GroupHom) -> Result<Subquotient, AlgebraError> {
    let middle = &into.target;
    assert_eq!(middle.len(), out.source.len(), "maps do not compose");
    let composite = &out.matrix * &into.matrix;
    for j in 0..composite.cols() {
        if !out.target.is_zero_element(&composite.column(j)) {
            return Err(AlgebraError::CompositionNotZero { column: j });
        }
    }

    let g = middle.len();
    let mut cycles = out.kernel_generators();
    cycles.extend(middle.relations().columns());
    let cycle_lattice = Lattice::spanned_by(g, &cycles);

    let mut boundaries = into.image_generators();
    boundaries.extend(middle.relations().columns());
    let coords: Vec<Vec<TwoLocalScalar>> = boundaries
        .iter()
        .map(|b| cycle_lattice.coordinates(b).expect("boundaries are cycles"))
        .collect();
    let s = cycle_lattice.rank();
    let rel = IntMatrix::from_columns(s, &coords);
    let snf = smith_normal_form(&rel);

    let mut generators = Vec::new();
    let mut orders = Vec::new();
    let mut representatives = Vec::new();
    for i in 0..s {
        let order = match snf.exponents.get(i) {
            Some(0) => continue,
            Some(&e) => Order::Pow2(e),
            None => Order::Free,
        };
        let in_basis = snf.u_inv.column(i);
        let mut rep = vec![TwoLocalScalar::zero(); g];
        for (c, b) in in_basis.iter().zip(&cycle_lattice.basis) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in rep.iter_mut().zip(b) {
                *r += &(c * x);
            }
        }
        generators.push(format!("h{}", generators.len()));
        orders.push(order);
        representatives.push(rep);
    }
    debug_assert_eq!(cycle_lattice.ambient, g);
    Ok(Subquotient { group: FGGroup::new(generators, orders), representatives })
}

/// Whether `gens1` and `gens2` generate the same subgroup of `ambient`.
pub fn subgroup_equal(
    gens1: &[Vec<TwoLocalScalar>],
    gens2: &[Vec<TwoLocalScalar>],
    ambient: &FGGroup,
) -> bool {
    contained_in(gens1, gens2, ambient) && contained_in(gens2, gens1, ambient)
}

/// Whether every element of `gens` lies in the subgroup generated by `span`.
pub fn contained_in(gens: &[Vec<TwoLocalScalar>], span: &[Vec<TwoLocalScalar>], ambient: &FGGroup) -> bool {
    let g = ambient.len();
    let mut cols = span.to_vec();
    cols.extend(ambient.relations().columns());
    let m = IntMatrix::from_columns(g, &cols);
    let snf = smith_normal_form(&m);
    gens.iter().all(|v| solve_with(&snf, m.cols(), v).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> TwoLocalScalar {
        TwoLocalScalar::from_int(x)
    }

    fn hom(source: FGGroup, target: FGGroup, rows: &[Vec<i64>]) -> GroupHom {
        let cols = source.len();
        GroupHom::new(source, target, IntMatrix::from_rows(rows, cols)).unwrap()
    }

    #[test]
    fn homology_of_zero_maps() {
        let z = FGGroup::free(1);
        let a = GroupHom::zero(z.clone(), z.clone());
        let b = GroupHom::zero(z.clone(), z.clone());
        assert_eq!(subquotient(&a, &b).unwrap().group.invariants(), GroupInvariants { rank: 1, torsion: vec![] });
    }

    #[test]
    fn cokernel_of_doubling() {
        let z = FGGroup::free(1);
        let a = hom(z.clone(), z.clone(), &[vec![2]]);
        let b = GroupHom::zero(z.clone(), z.clone());
        let h = subquotient(&a, &b).unwrap();
        assert_eq!(h.group.invariants(), GroupInvariants { rank: 0, torsion: vec![1] });
        assert_eq!(h.representatives.len(), 1);
    }

    #[test]
    fn kernel_of_injection() {
        let z = FGGroup::free(1);
        let a = GroupHom::zero(z.clone(), z.clone());
        let b = hom(z.clone(), z.clone(), &[vec![2]]);
        assert!(subquotient(&a, &b).unwrap().group.is_trivial());
    }

    #[test]
    fn composition_must_vanish() {
        let z = FGGroup::free(1);
        let a = hom(z.clone(), z.clone(), &[vec![1]]);
        let b = hom(z.clone(), z.clone(), &[vec![1]]);
        assert_eq!(subquotient(&a, &b).unwrap_err(), AlgebraError::CompositionNotZero { column: 0 });
    }

    #[test]
    fn composition_vanishing_mod_torsion_is_accepted() {
        // Z --2--> Z --1--> Z/2
        let z = FGGroup::free(1);
        let z2 = FGGroup::from_orders(vec![Order::Pow2(1)]);
        let a = hom(z.clone(), z.clone(), &[vec![2]]);
        let b = hom(z.clone(), z2, &[vec![1]]);
        assert!(subquotient(&a, &b).unwrap().group.is_trivial());
    }

    #[test]
    fn not_a_homomorphism() {
        let z2 = FGGroup::from_orders(vec![Order::Pow2(1)]);
        let z = FGGroup::free(1);
        let err = GroupHom::new(z2, z, IntMatrix::from_rows(&[vec![1]], 1)).unwrap_err();
        assert!(matches!(err, AlgebraError::NotAHomomorphism { column: 0, .. }));
    }

    #[test]
    fn torsion_target_quotients() {
        // Z/4 modulo the image of 2: Z/2
        let z4 = FGGroup::from_orders(vec![Order::Pow2(2)]);
        let a = hom(z4.clone(), z4.clone(), &[vec![2]]);
        let b = GroupHom::zero(z4.clone(), FGGroup::trivial());
        assert_eq!(subquotient(&a, &b).unwrap().group.invariants().torsion, vec![1]);
        // kernel of Z/4 --2--> Z/4 is 2Z/4 = Z/2
        assert_eq!(a.kernel().invariants().torsion, vec![1]);
        assert!(!a.is_isomorphism());
    }

    #[test]
    fn subgroup_examples() {
        let z = FGGroup::free(1);
        assert!(subgroup_equal(&[vec![s(2)]], &[vec![s(-2)]], &z));
        assert!(!subgroup_equal(&[vec![s(2)]], &[vec![s(1)]], &z));
        let z2 = FGGroup::free(2);
        assert!(subgroup_equal(&[vec![s(1), s(1)]], &[vec![s(1), s(1)], vec![s(2), s(2)]], &z2));
        // in Z/2, 3 and 1 agree
        let t = FGGroup::from_orders(vec![Order::Pow2(1)]);
        assert!(subgroup_equal(&[vec![s(3)]], &[vec![s(1)]], &t));
        assert!(subgroup_equal(&[vec![s(2)]], &[], &t));
    }

    #[test]
    fn invariants_display() {
        let g = FGGroup::from_orders(vec![Order::Free, Order::Pow2(1), Order::Pow2(1), Order::Pow2(2)]);
        assert_eq!(g.to_string(), "Z_(2) + (Z/2)^2 + Z/4");
        assert_eq!(FGGroup::trivial().to_string(), "0");
    }
}
