//! The group algebra `k[G]` and its center `Z(k[G])`.
//!
//! Downstream code always works in the class-sum basis `z_C = Σ_{g∈C} g`.
//! [`center_brute_force`] solves the commutant equations directly and exists
//! as an independent check on that basis.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::group::{ConjugacyClassSet, FiniteGroup};
use crate::linalg::{self, RowEchelon};
use crate::par::Exec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    group: Arc<FiniteGroup>,
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl GroupAlgebraElement {
    pub fn zero(group: Arc<FiniteGroup>, field: FieldSpec) -> Self {
        let coeffs = vec![field.zero(); group.order()];
        Self { group, field, coeffs }
    }

    /// The basis element `e_g`.
    pub fn basis(group: Arc<FiniteGroup>, field: FieldSpec, g: usize) -> Self {
        let mut x = Self::zero(group, field);
        x.coeffs[g] = field.one();
        x
    }

    pub fn from_coeffs(group: Arc<FiniteGroup>, field: FieldSpec, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::Input(format!(
                "coefficient vector has length {}, group has order {}",
                coeffs.len(),
                group.order()
            )));
        }
        if let Some(bad) = coeffs.iter().find(|c| !field.contains(c)) {
            return Err(Error::FieldMismatch { left: field.characteristic(), right: bad.characteristic() });
        }
        Ok(Self { group, field, coeffs })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> &Scalar {
        &self.coeffs[g]
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.group, &other.group) && self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        if self.field.characteristic() != other.field.characteristic() {
            return Err(Error::FieldMismatch {
                left: self.field.characteristic(),
                right: other.field.characteristic(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { group: self.group.clone(), field: self.field, coeffs })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self { group: self.group.clone(), field: self.field, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Convolution: `(xy)(g) = Σ_{ab=g} x(a) y(b)`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let g = &self.group;
        let mut out = vec![self.field.zero(); g.order()];
        for (a, xa) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, yb) in other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let ab = g.mul(a, b);
                out[ab] = &out[ab] + &(xa * yb);
            }
        }
        Ok(Self { group: self.group.clone(), field: self.field, coeffs: out })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn is_central(&self) -> bool {
        (0..self.group.order()).all(|g| {
            let e = Self::basis(self.group.clone(), self.field, g);
            self.multiply(&e).unwrap() == e.multiply(self).unwrap()
        })
    }
}

/// The class sums of `G` over `k`, ordered by class representative.
#[derive(Clone, Debug)]
pub struct CenterBasis {
    classes: ConjugacyClassSet,
    class_sums: Vec<GroupAlgebraElement>,
}

impl CenterBasis {
    pub fn class_sums(&self) -> &[GroupAlgebraElement] {
        &self.class_sums
    }

    pub fn classes(&self) -> &ConjugacyClassSet {
        &self.classes
    }

    pub fn dimension(&self) -> usize {
        self.class_sums.len()
    }
}

pub fn class_sums(group: &Arc<FiniteGroup>, field: FieldSpec) -> CenterBasis {
    let classes = ConjugacyClassSet::compute(group);
    let class_sums = classes
        .classes()
        .iter()
        .map(|members| {
            let mut z = GroupAlgebraElement::zero(group.clone(), field);
            for &g in members {
                z.coeffs[g] = field.one();
            }
            z
        })
        .collect();
    CenterBasis { classes, class_sums }
}

/// A basis of `Z(k[G])` obtained by solving `x·e_g = e_g·x` for every `g`
/// (`|G|²` scalar equations in `|G|` unknowns) by exact elimination.
pub fn center_brute_force(group: &Arc<FiniteGroup>, field: FieldSpec) -> Vec<GroupAlgebraElement> {
    center_brute_force_with(group, field, Exec::default())
}

pub fn center_brute_force_with(group: &Arc<FiniteGroup>, field: FieldSpec, exec: Exec) -> Vec<GroupAlgebraElement> {
    let n = group.order();
    // coefficient of e_h in x·e_g is x(h g⁻¹); in e_g·x it is x(g⁻¹ h)
    let equations: Vec<Vec<(usize, usize)>> = exec.map_range(n, |g| {
        let gi = group.inv(g);
        (0..n).map(|h| (group.mul(h, gi), group.mul(gi, h))).filter(|(a, b)| a != b).collect()
    });
    let mut ech = RowEchelon::new(field, n);
    let mut seen = std::collections::HashSet::new();
    for (a, b) in equations.into_iter().flatten() {
        if !seen.insert((a.min(b), a.max(b))) {
            continue;
        }
        let mut row = vec![field.zero(); n];
        row[a] = field.one();
        row[b] = -field.one();
        ech.insert(row);
        if ech.rank() == n {
            break;
        }
    }
    ech.nullspace()
        .into_iter()
        .map(|coeffs| GroupAlgebraElement { group: group.clone(), field, coeffs })
        .collect()
}

/// True iff the two families of group-algebra elements span the same subspace.
pub fn same_span(field: FieldSpec, a: &[GroupAlgebraElement], b: &[GroupAlgebraElement]) -> bool {
    let n = a.first().or(b.first()).map_or(0, |x| x.coeffs.len());
    let rows = |v: &[GroupAlgebraElement]| v.iter().map(|x| x.coeffs.clone()).collect::<Vec<_>>();
    linalg::same_span(field, n, &rows(a), &rows(b))
}

/// Class multiplication coefficients: `z_C z_D = Σ_E c[C][D][E] z_E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassConstants {
    count: usize,
    // flattened count³
    table: Vec<u64>,
}

impl ClassConstants {
    pub fn compute(group: &FiniteGroup, classes: &ConjugacyClassSet) -> Self {
        Self::compute_with(group, classes, Exec::default())
    }

    /// Computes every product `z_C z_D` as an integer vector over `G` and
    /// reads the coefficient at each class representative.
    pub fn compute_with(group: &FiniteGroup, classes: &ConjugacyClassSet, exec: Exec) -> Self {
        let k = classes.len();
        let rows = exec.map_range(k * k, |cd| {
            let (c, d) = (cd / k, cd % k);
            let mut product = vec![0u64; group.order()];
            for &x in classes.class(c) {
                for &y in classes.class(d) {
                    product[group.mul(x, y)] += 1;
                }
            }
            (0..k).map(|e| product[classes.representative(e)]).collect::<Vec<_>>()
        });
        Self { count: k, table: rows.concat() }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn get(&self, c: usize, d: usize, e: usize) -> u64 {
        self.table[(c * self.count + d) * self.count + e]
    }

    pub fn as_nested(&self) -> Vec<Vec<Vec<u64>>> {
        (0..self.count)
            .map(|c| (0..self.count).map(|d| (0..self.count).map(|e| self.get(c, d, e)).collect()).collect())
            .collect()
    }
}

/// Summary of the center for reports.
#[derive(Clone, Debug, Serialize)]
pub struct CenterReport {
    pub group_order: usize,
    pub class_count: usize,
    pub representatives: Vec<String>,
    pub class_sizes: Vec<usize>,
    pub centralizer_orders: Vec<usize>,
    pub dimension: usize,
    /// `Some(c)` when `Z(k[G]) ≅ k^c` may be reported: the field is flagged
    /// algebraically closed and its characteristic does not divide `|G|`.
    pub split_as_product_of_fields: Option<usize>,
}

impl CenterReport {
    pub fn new(group: &FiniteGroup, basis: &CenterBasis, field: FieldSpec) -> Self {
        let cc = basis.classes();
        let split = field.is_algebraically_closed() && field.is_coprime_to(group.order() as u64);
        Self {
            group_order: group.order(),
            class_count: cc.len(),
            representatives: (0..cc.len()).map(|c| group.label(cc.representative(c))).collect(),
            class_sizes: cc.sizes(),
            centralizer_orders: (0..cc.len()).map(|c| cc.centralizer_order(c)).collect(),
            dimension: basis.dimension(),
            split_as_product_of_fields: split.then_some(cc.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{permutation_from_cycles, DEFAULT_ORDER_CAP};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s3() -> Arc<FiniteGroup> {
        let t = permutation_from_cycles(3, &[vec![1, 2]]).unwrap();
        let c = permutation_from_cycles(3, &[vec![1, 2, 3]]).unwrap();
        Arc::new(FiniteGroup::from_permutations(3, &[t, c], DEFAULT_ORDER_CAP).unwrap())
    }

    fn named(name: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::named(name).unwrap())
    }

    fn elem(g: &Arc<FiniteGroup>, k: FieldSpec, c: &[i64]) -> GroupAlgebraElement {
        GroupAlgebraElement::from_coeffs(g.clone(), k, c.iter().map(|&x| k.from_i64(x)).collect()).unwrap()
    }

    #[test]
    fn z2_square_of_sum() {
        let g = named("Z2");
        let q = FieldSpec::rationals();
        let x = elem(&g, q, &[1, 1]);
        assert_eq!(x.multiply(&x).unwrap(), elem(&g, q, &[2, 2]));
        let f2 = FieldSpec::new(2).unwrap();
        let y = elem(&g, f2, &[1, 1]);
        assert!(y.multiply(&y).unwrap().is_zero());
    }

    #[test]
    fn identity_is_a_unit() {
        let g = s3();
        let k = FieldSpec::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = elem(&g, k, &(0..6).map(|_| rng.gen_range(-9..9)).collect::<Vec<_>>());
        let e = GroupAlgebraElement::basis(g.clone(), k, g.identity());
        assert_eq!(e.multiply(&x).unwrap(), x);
        assert_eq!(x.multiply(&e).unwrap(), x);
    }

    #[test]
    fn mismatches_are_errors() {
        let k = FieldSpec::new(7).unwrap();
        let a = GroupAlgebraElement::basis(named("Z2"), k, 0);
        let b = GroupAlgebraElement::basis(named("Z3"), k, 0);
        assert_eq!(a.multiply(&b), Err(Error::GroupMismatch));
        let c = GroupAlgebraElement::basis(named("Z2"), FieldSpec::rationals(), 0);
        assert!(matches!(a.multiply(&c), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn class_sums_are_central_and_counted() {
        let k = FieldSpec::new(7).unwrap();
        for (g, count) in [(s3(), 3), (named("trivial"), 1), (named("Q8"), 5), (named("D4"), 5)] {
            let basis = class_sums(&g, k);
            assert_eq!(basis.dimension(), count);
            assert!(basis.class_sums().iter().all(GroupAlgebraElement::is_central));
        }
        let t = class_sums(&named("trivial"), k);
        assert_eq!(t.class_sums()[0], GroupAlgebraElement::basis(named("trivial"), k, 0));
    }

    #[test]
    fn brute_force_center_dimensions() {
        let q = FieldSpec::rationals();
        assert_eq!(center_brute_force(&named("Z2"), q).len(), 2);
        let g = s3();
        let bf = center_brute_force(&g, q);
        assert_eq!(bf.len(), 3);
        assert!(same_span(q, &bf, class_sums(&g, q).class_sums()));
        assert_eq!(center_brute_force(&named("Q8"), q).len(), 5);
    }

    #[test]
    fn class_constants_examples() {
        let z2 = named("Z2");
        let cc = ConjugacyClassSet::compute(&z2);
        let c = ClassConstants::compute(&z2, &cc);
        let (e, s) = (cc.class_of(z2.identity()), 1 - cc.class_of(z2.identity()));
        assert_eq!(c.get(s, s, e), 1);
        assert_eq!(c.get(s, s, s), 0);

        let g = s3();
        let cc = ConjugacyClassSet::compute(&g);
        let c = ClassConstants::compute(&g, &cc);
        let t = (0..3).find(|&i| cc.size(i) == 3).unwrap();
        let r = (0..3).find(|&i| cc.size(i) == 2).unwrap();
        let e = cc.class_of(g.identity());
        assert_eq!((c.get(t, t, e), c.get(t, t, r), c.get(t, t, t)), (3, 3, 0));
    }

    #[test]
    fn class_constant_identities() {
        for name in ["Z6", "S4", "D6", "Q8", "SL(2,5)"] {
            let g = named(name);
            let cc = ConjugacyClassSet::compute(&g);
            let c = ClassConstants::compute(&g, &cc);
            let e = cc.class_of(g.identity());
            let k = cc.len();
            for x in 0..k {
                for y in 0..k {
                    let mut pairs = 0;
                    for z in 0..k {
                        assert_eq!(c.get(e, y, z), u64::from(y == z));
                        assert_eq!(c.get(x, y, z), c.get(y, x, z));
                        pairs += c.get(x, y, z) * cc.size(z) as u64;
                    }
                    assert_eq!(pairs, (cc.size(x) * cc.size(y)) as u64);
                }
            }
        }
    }

    #[test]
    fn multiplication_is_associative_on_random_triples() {
        let k = FieldSpec::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for name in ["S3", "Q8", "D5"] {
            let g = named(name);
            let n = g.order();
            let mut rand_elem = || elem(&g, k, &(0..n).map(|_| rng.gen_range(0..7)).collect::<Vec<_>>());
            for _ in 0..1000 {
                let (a, b, c) = (rand_elem(), rand_elem(), rand_elem());
                let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
                let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn split_only_reported_when_closed_and_coprime() {
        let g = named("SL(2,5)");
        let closed7 = FieldSpec::new(7).unwrap().with_algebraically_closed(true);
        let closed5 = FieldSpec::new(5).unwrap().with_algebraically_closed(true);
        let open7 = FieldSpec::new(7).unwrap();
        let report = |k| CenterReport::new(&g, &class_sums(&g, k), k).split_as_product_of_fields;
        assert_eq!(report(closed7), Some(9));
        assert_eq!(report(closed5), None);
        assert_eq!(report(open7), None);
    }
}
