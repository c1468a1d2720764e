//! The twisted-sector model of the loop orbifold.
//!
//! Each sector `P_g M` is identified with the loop homology ring `A`, so the
//! loop orbifold is modeled by `⊕_{g∈G} A` ([`SectorElement`]) and the
//! homology of its Borel construction by `⊕_{C} A` over conjugacy classes
//! ([`QuotientElement`]). `G` acts by relabeling sectors `g ↦ h⁻¹gh` and
//! trivially on `A`.
//!
//! The orbifold product is the literal composite `x ∘ y = p(μ(x) • μ(y))`.
//! It is not unital: its unit is `([e], 1) / |G|²`. The isomorphism onto
//! `A ⊗ Z(k[G])` therefore rescales each class: `φ(C, m) = |G|·|Z_C| · m ⊗ z_C`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::graded::{GradedAlgebra, Monomial};
use crate::group::{ConjugacyClassSet, FiniteGroup};
use crate::group_algebra::ClassConstants;
use crate::linalg::{self, RowEchelon};
use crate::par::Exec;

/// Shared context: the group, its classes and class constants, and `A`.
#[derive(Debug)]
pub struct SectorModel {
    group: Arc<FiniteGroup>,
    classes: ConjugacyClassSet,
    constants: ClassConstants,
    algebra: Arc<GradedAlgebra>,
}

impl SectorModel {
    pub fn new(group: Arc<FiniteGroup>, algebra: Arc<GradedAlgebra>) -> Arc<Self> {
        let classes = ConjugacyClassSet::compute(&group);
        let constants = ClassConstants::compute(&group, &classes);
        Arc::new(Self { group, classes, constants, algebra })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn classes(&self) -> &ConjugacyClassSet {
        &self.classes
    }

    pub fn constants(&self) -> &ClassConstants {
        &self.constants
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    fn scalar(&self, n: usize) -> Scalar {
        self.field().from_u64(n as u64)
    }

    /// Fails with "transfer unavailable" unless `|G|` is invertible in `k`.
    pub fn require_coprime(&self) -> Result<()> {
        let order = self.group.order();
        if self.field().is_coprime_to(order as u64) {
            Ok(())
        } else {
            Err(Error::TransferUnavailable { characteristic: self.field().characteristic(), order })
        }
    }

    /// Quotient basis `(C, m)` for every class and every admissible monomial
    /// with degree in the window, classes outermost.
    pub fn quotient_basis(self: &Arc<Self>, lo: i64, hi: i64) -> Result<Vec<QuotientElement>> {
        let monos = self.algebra.presentation().basis_in_window(lo, hi)?;
        let one = self.field().one();
        Ok((0..self.classes.len())
            .flat_map(|c| monos.iter().map(move |m| (c, m.clone())))
            .map(|(c, m)| QuotientElement::basis(self, c, m, one.clone()))
            .collect())
    }

    /// `{m ⊗ z_C}`: each admissible monomial in the window times each class sum.
    pub fn invariant_basis(self: &Arc<Self>, lo: i64, hi: i64) -> Result<Vec<SectorElement>> {
        let monos = self.algebra.presentation().basis_in_window(lo, hi)?;
        let mut out = Vec::with_capacity(monos.len() * self.classes.len());
        for c in 0..self.classes.len() {
            for m in &monos {
                out.push(self.class_sum_element(c, m, &self.field().one()));
            }
        }
        Ok(out)
    }

    fn class_sum_element(self: &Arc<Self>, c: usize, m: &Monomial, coeff: &Scalar) -> SectorElement {
        let mut x = SectorElement::zero(self);
        for &g in self.classes.class(c) {
            accumulate(&mut x.terms, (g, m.clone()), coeff.clone());
        }
        x
    }

    /// The `G`-fixed subspace of the sector algebra in the window, solved
    /// directly from `h·x = x` for every `h`. The action leaves the monomial
    /// untouched, so the system splits into one copy of the fixed-vector
    /// problem on `k^G` per monomial.
    pub fn fixed_subspace(self: &Arc<Self>, lo: i64, hi: i64) -> Result<Vec<SectorElement>> {
        let monos = self.algebra.presentation().basis_in_window(lo, hi)?;
        let n = self.group.order();
        let k = self.field();
        let mut ech = RowEchelon::new(k, n);
        for h in 0..n {
            for g in 0..n {
                let hg = self.group.conjugate(g, h);
                if hg != g {
                    let mut row = vec![k.zero(); n];
                    row[g] = k.one();
                    row[hg] = -k.one();
                    ech.insert(row);
                }
            }
        }
        let fixed = ech.nullspace();
        let mut out = Vec::with_capacity(fixed.len() * monos.len());
        for v in &fixed {
            for m in &monos {
                let mut x = SectorElement::zero(self);
                for (g, c) in v.iter().enumerate() {
                    accumulate(&mut x.terms, (g, m.clone()), c.clone());
                }
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Coordinates of sector elements over the basis `(g, m)` of the window.
    pub fn sector_coordinates(&self, monos: &[Monomial], xs: &[SectorElement]) -> Vec<Vec<Scalar>> {
        let pos: BTreeMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let width = monos.len();
        xs.iter()
            .map(|x| {
                let mut row = vec![self.field().zero(); self.group.order() * width];
                for ((g, m), c) in &x.terms {
                    row[g * width + pos[m]] = c.clone();
                }
                row
            })
            .collect()
    }
}

fn accumulate<K: Ord>(terms: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

fn same_model(a: &Arc<SectorModel>, b: &Arc<SectorModel>) -> Result<()> {
    if Arc::ptr_eq(a, b) {
        return Ok(());
    }
    if a.group != b.group && *a.group != *b.group {
        return Err(Error::GroupMismatch);
    }
    if a.algebra != b.algebra && *a.algebra != *b.algebra {
        return Err(Error::PresentationMismatch);
    }
    Ok(())
}

macro_rules! linear_element {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Debug)]
        pub struct $name {
            model: Arc<SectorModel>,
            terms: BTreeMap<(usize, Monomial), Scalar>,
        }

        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                same_model(&self.model, &other.model).is_ok() && self.terms == other.terms
            }
        }

        impl $name {
            pub fn zero(model: &Arc<SectorModel>) -> Self {
                Self { model: model.clone(), terms: BTreeMap::new() }
            }

            pub fn basis(model: &Arc<SectorModel>, index: usize, m: Monomial, c: Scalar) -> Self {
                let mut x = Self::zero(model);
                accumulate(&mut x.terms, (index, m), c);
                x
            }

            pub fn model(&self) -> &Arc<SectorModel> {
                &self.model
            }

            pub fn terms(&self) -> &BTreeMap<(usize, Monomial), Scalar> {
                &self.terms
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                same_model(&self.model, &other.model)?;
                let mut terms = self.terms.clone();
                for (k, c) in &other.terms {
                    accumulate(&mut terms, k.clone(), c.clone());
                }
                Ok(Self { model: self.model.clone(), terms })
            }

            pub fn scale(&self, c: &Scalar) -> Self {
                let mut terms = BTreeMap::new();
                for (k, x) in &self.terms {
                    accumulate(&mut terms, k.clone(), x * c);
                }
                Self { model: self.model.clone(), terms }
            }

            /// Degrees of all terms, ascending and deduplicated.
            pub fn degrees(&self) -> Vec<i64> {
                let mut d: Vec<i64> = self.terms.keys().map(|(_, m)| m.degree()).collect();
                d.sort_unstable();
                d.dedup();
                d
            }
        }
    };
}

linear_element!(SectorElement, "An element of `⊕_{g∈G} A`: `(g, m) → scalar`.");
linear_element!(QuotientElement, "An element of `⊕_C A` over conjugacy classes `C`: `(C, m) → scalar`.");
linear_element!(TensorElement, "An element of `A ⊗ Z(k[G])`: `(C, m) → scalar` meaning `m ⊗ z_C`.");

impl SectorElement {
    fn by_monomial(&self) -> BTreeMap<&Monomial, Vec<(usize, &Scalar)>> {
        let mut out: BTreeMap<&Monomial, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for ((g, m), c) in &self.terms {
            out.entry(m).or_default().push((*g, c));
        }
        out
    }

    /// `(a ⊗ e_g) • (b ⊗ e_h) = ab ⊗ e_{gh}`.
    pub fn sector_product(&self, other: &Self) -> Result<Self> {
        same_model(&self.model, &other.model)?;
        let model = &self.model;
        // one ring product per monomial pair, then spread over sector pairs
        let (left, right) = (self.by_monomial(), other.by_monomial());
        let mut terms = BTreeMap::new();
        for (a, xs) in &left {
            for (b, ys) in &right {
                let ab = model.algebra.monomial_product(a, b);
                if ab.is_empty() {
                    continue;
                }
                for &(g, x) in xs {
                    for &(h, y) in ys {
                        let gh = model.group.mul(g, h);
                        let xy = x * y;
                        for (m, c) in &ab {
                            accumulate(&mut terms, (gh, m.clone()), c * &xy);
                        }
                    }
                }
            }
        }
        Ok(Self { model: model.clone(), terms })
    }

    /// The action of `h`: sector `g` moves to `h⁻¹gh`, `A` is untouched.
    pub fn conjugation_action(&self, h: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|((g, m), c)| ((self.model.group.conjugate(*g, h), m.clone()), c.clone()))
            .collect();
        Self { model: self.model.clone(), terms }
    }

    /// The covering projection `(g, m) ↦ (class(g), m)`.
    pub fn projection_p(&self) -> QuotientElement {
        let mut out = QuotientElement::zero(&self.model);
        for ((g, m), c) in &self.terms {
            accumulate(&mut out.terms, (self.model.classes.class_of(*g), m.clone()), c.clone());
        }
        out
    }
}

impl QuotientElement {
    /// The transfer `μ(C, m) = |Z_C| · m ⊗ z_C`: the sum of all `|G|`
    /// translates of one lift, where each class member is hit `|Z_C|` times.
    pub fn transfer_mu(&self) -> SectorElement {
        let model = &self.model;
        let mut out = SectorElement::zero(model);
        for ((c, m), x) in &self.terms {
            let w = x * &model.scalar(model.classes.centralizer_order(*c));
            for &g in model.classes.class(*c) {
                accumulate(&mut out.terms, (g, m.clone()), w.clone());
            }
        }
        out
    }

    /// `x ∘ y = p(μ(x) • μ(y))`, with no normalization.
    pub fn orbifold_product(&self, other: &Self) -> Result<Self> {
        same_model(&self.model, &other.model)?;
        self.model.require_coprime()?;
        Ok(self.transfer_mu().sector_product(&other.transfer_mu())?.projection_p())
    }

    /// `φ(C, m) = |G|·|Z_C| · m ⊗ z_C`.
    pub fn tensor_iso_phi(&self) -> Result<TensorElement> {
        let model = &self.model;
        model.require_coprime()?;
        let order = model.scalar(model.group.order());
        let mut out = TensorElement::zero(model);
        for ((c, m), x) in &self.terms {
            let lambda = &order * &model.scalar(model.classes.centralizer_order(*c));
            accumulate(&mut out.terms, (*c, m.clone()), x * &lambda);
        }
        Ok(out)
    }
}

impl TensorElement {
    /// `(m ⊗ z_C)(n ⊗ z_D) = Σ_E c[C][D][E] · mn ⊗ z_E`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        same_model(&self.model, &other.model)?;
        let model = &self.model;
        let k = model.classes.len();
        let mut terms = BTreeMap::new();
        for ((c, a), x) in &self.terms {
            for ((d, b), y) in &other.terms {
                let ab = model.algebra.monomial_product(a, b);
                let xy = x * y;
                for e in 0..k {
                    let n = model.constants.get(*c, *d, e);
                    if n == 0 {
                        continue;
                    }
                    let w = &xy * &model.field().from_u64(n);
                    for (m, s) in &ab {
                        accumulate(&mut terms, (e, m.clone()), s * &w);
                    }
                }
            }
        }
        Ok(Self { model: model.clone(), terms })
    }

    /// `m ⊗ z_C ↦ Σ_{g∈C} (g, m)`.
    pub fn to_sectors(&self) -> SectorElement {
        let mut out = SectorElement::zero(&self.model);
        for ((c, m), x) in &self.terms {
            for &g in self.model.classes.class(*c) {
                accumulate(&mut out.terms, (g, m.clone()), x.clone());
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub degree: i64,
    pub dim_a: usize,
    pub dim_quotient: usize,
    pub rank_phi_image: usize,
}

/// Result of the exhaustive multiplicativity check of `φ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub window: (i64, i64),
    pub group_order: usize,
    pub class_count: usize,
    pub dimensions: Vec<DegreeRow>,
    pub pairs_checked: usize,
    pub passed: bool,
    pub counterexample: Option<String>,
}

/// Checks `φ(x ∘ y) = φ(x)·φ(y)` and degree additivity over every pair of
/// quotient basis vectors in the window, and that `φ` is bijective degree by
/// degree onto a space of dimension `dim A_d × c(G)`.
pub fn verify_theorem(model: &Arc<SectorModel>, lo: i64, hi: i64) -> Result<TheoremReport> {
    verify_theorem_with(model, lo, hi, Exec::default())
}

pub fn verify_theorem_with(model: &Arc<SectorModel>, lo: i64, hi: i64, exec: Exec) -> Result<TheoremReport> {
    model.require_coprime()?;
    let basis = model.quotient_basis(lo, hi)?;
    let monos = model.algebra.presentation().basis_in_window(lo, hi)?;
    let series = model.algebra.presentation().poincare_series(lo, hi)?;
    let c = model.classes.len();
    let k = model.field();

    let phis: Vec<TensorElement> = basis.iter().map(|x| x.tensor_iso_phi()).collect::<Result<_>>()?;

    let mut dimensions = Vec::new();
    let mut failure = None;
    for (&d, &dim_a) in &series {
        let idx: Vec<usize> = (0..basis.len()).filter(|&i| basis[i].degrees() == [d]).collect();
        // coordinates in the (class, monomial) basis restricted to degree d
        let monos_d: Vec<&Monomial> = monos.iter().filter(|m| m.degree() == d).collect();
        let width = monos_d.len();
        let rows: Vec<Vec<Scalar>> = idx
            .iter()
            .map(|&i| {
                let mut row = vec![k.zero(); c * width];
                for ((cl, m), x) in &phis[i].terms {
                    let j = monos_d.iter().position(|n| *n == m).expect("degree-homogeneous image");
                    row[cl * width + j] = x.clone();
                }
                row
            })
            .collect();
        let rank = linalg::rank(k, c * width, &rows);
        let row = DegreeRow { degree: d, dim_a, dim_quotient: idx.len(), rank_phi_image: rank };
        if failure.is_none() && (row.dim_quotient != dim_a * c || rank != dim_a * c) {
            failure = Some(format!(
                "degree {d}: dim A = {dim_a}, c(G) = {c}, quotient basis {}, rank of φ-image {rank}",
                row.dim_quotient
            ));
        }
        dimensions.push(row);
    }

    let n = basis.len();
    let render = |x: &QuotientElement| {
        let ((cl, m), _) = x.terms.iter().next().unwrap();
        format!("([{}], {})", model.group.label(model.classes.representative(*cl)), m.render(model.algebra.presentation()))
    };
    let mus: Vec<SectorElement> = basis.iter().map(QuotientElement::transfer_mu).collect();
    let pair_failure = exec.find_first(n * n, |t| {
        let (i, j) = (t / n, t % n);
        let (x, y) = (&basis[i], &basis[j]);
        // the literal composite p(μx • μy), with μ evaluated once per basis vector
        let xy = mus[i].sector_product(&mus[j]).unwrap().projection_p();
        let expected_degree = x.degrees()[0] + y.degrees()[0];
        if xy.degrees().iter().any(|&d| d != expected_degree) {
            return Some(format!("degree of {} ∘ {} is not {expected_degree}", render(x), render(y)));
        }
        let lhs = xy.tensor_iso_phi().unwrap();
        let rhs = phis[i].multiply(&phis[j]).unwrap();
        (lhs != rhs).then(|| format!("φ({} ∘ {}) != φ(x)·φ(y)", render(x), render(y)))
    });
    let counterexample = failure.or(pair_failure);
    Ok(TheoremReport {
        window: (lo, hi),
        group_order: model.group.order(),
        class_count: c,
        dimensions,
        pairs_checked: n * n,
        passed: counterexample.is_none(),
        counterexample,
    })
}

/// Outcome of the transfer identities on a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub basis_size: usize,
    pub p_mu_is_order_times_identity: bool,
    pub image_rank: usize,
    pub fixed_dimension: usize,
    pub image_equals_fixed: bool,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.p_mu_is_order_times_identity && self.image_equals_fixed
    }
}

/// Checks `p ∘ μ = |G|·id` on every quotient basis vector and that the image
/// of `μ` is exactly the `G`-fixed subspace (solved independently).
pub fn check_transfer(model: &Arc<SectorModel>, lo: i64, hi: i64) -> Result<TransferReport> {
    let basis = model.quotient_basis(lo, hi)?;
    let order = model.scalar(model.group.order());
    let p_mu = basis.iter().all(|x| x.transfer_mu().projection_p() == x.scale(&order));
    let monos = model.algebra.presentation().basis_in_window(lo, hi)?;
    let images: Vec<SectorElement> = basis.iter().map(QuotientElement::transfer_mu).collect();
    let fixed = model.fixed_subspace(lo, hi)?;
    let a = model.sector_coordinates(&monos, &images);
    let b = model.sector_coordinates(&monos, &fixed);
    let width = model.group.order() * monos.len();
    let k = model.field();
    Ok(TransferReport {
        basis_size: basis.len(),
        p_mu_is_order_times_identity: p_mu,
        image_rank: linalg::rank(k, width, &a),
        fixed_dimension: linalg::rank(k, width, &b),
        image_equals_fixed: linalg::same_span(k, width, &a, &b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{Generator, GradedPresentation};
    use crate::group::{permutation_from_cycles, DEFAULT_ORDER_CAP};

    fn field(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn ground(k: FieldSpec) -> Arc<GradedAlgebra> {
        GradedAlgebra::new(GradedPresentation::trivial(), k).unwrap()
    }

    fn loop_s3(k: FieldSpec) -> Arc<GradedAlgebra> {
        let p = GradedPresentation::new(vec![Generator::exterior("a", -3), Generator::polynomial("u", 2)]).unwrap();
        GradedAlgebra::new(p, k).unwrap()
    }

    fn named(name: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::named(name).unwrap())
    }

    fn s3() -> Arc<FiniteGroup> {
        let t = permutation_from_cycles(3, &[vec![1, 2]]).unwrap();
        let c = permutation_from_cycles(3, &[vec![1, 2, 3]]).unwrap();
        Arc::new(FiniteGroup::from_permutations(3, &[t, c], DEFAULT_ORDER_CAP).unwrap())
    }

    fn unit_mono(model: &Arc<SectorModel>) -> Monomial {
        Monomial::unit(model.algebra().generator_count())
    }

    fn q(model: &Arc<SectorModel>, class: usize, coeff: i64) -> QuotientElement {
        QuotientElement::basis(model, class, unit_mono(model), model.field().from_i64(coeff))
    }

    #[test]
    fn trivial_group_sector_product_is_the_ring_product() {
        let k = field(7);
        let model = SectorModel::new(named("trivial"), loop_s3(k));
        let monos = model.algebra().presentation().basis_in_window(-6, 8).unwrap();
        for a in &monos {
            for b in &monos {
                let x = SectorElement::basis(&model, 0, a.clone(), k.one());
                let y = SectorElement::basis(&model, 0, b.clone(), k.one());
                let prod = x.sector_product(&y).unwrap();
                let expected: BTreeMap<_, _> =
                    model.algebra().monomial_product(a, b).into_iter().map(|(m, c)| ((0, m), c)).collect();
                assert_eq!(prod.terms(), &expected);
            }
        }
    }

    #[test]
    fn z2_sector_square() {
        let k = field(7);
        let g = named("Z2");
        let model = SectorModel::new(g.clone(), ground(k));
        let sigma = 1 - g.identity();
        let x = SectorElement::basis(&model, sigma, Monomial::unit(0), k.one());
        let e = SectorElement::basis(&model, g.identity(), Monomial::unit(0), k.one());
        assert_eq!(x.sector_product(&x).unwrap(), e);
        assert_eq!(e.sector_product(&x).unwrap(), x);
    }

    #[test]
    fn conjugation_moves_transposition_sectors() {
        let k = field(7);
        let g = s3();
        let model = SectorModel::new(g.clone(), ground(k));
        let t = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        let r = (0..6).find(|&x| g.element_order(x) == 3).unwrap();
        let x = SectorElement::basis(&model, t, Monomial::unit(0), k.from_i64(3));
        let moved = x.conjugation_action(r);
        let target = g.conjugate(t, r);
        assert_ne!(target, t);
        assert_eq!(moved, SectorElement::basis(&model, target, Monomial::unit(0), k.from_i64(3)));
        assert_eq!(x.conjugation_action(g.identity()), x);
        // abelian: every h acts trivially
        let z = SectorModel::new(named("Z4"), ground(k));
        let y = SectorElement::basis(&z, 3, Monomial::unit(0), k.one());
        assert!((0..4).all(|h| y.conjugation_action(h) == y));
    }

    #[test]
    fn conjugation_is_an_algebra_automorphism() {
        let k = field(7);
        let g = s3();
        let model = SectorModel::new(g.clone(), loop_s3(k));
        let monos = model.algebra().presentation().basis_in_window(-3, 4).unwrap();
        for h in 0..6 {
            for (x, y) in [(1, 2), (3, 5), (4, 4)] {
                let a = SectorElement::basis(&model, x, monos[1].clone(), k.one());
                let b = SectorElement::basis(&model, y, monos[3].clone(), k.from_i64(2));
                let lhs = a.sector_product(&b).unwrap().conjugation_action(h);
                let rhs = a.conjugation_action(h).sector_product(&b.conjugation_action(h)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn invariant_basis_counts() {
        let k = field(7);
        let triv = SectorModel::new(named("trivial"), loop_s3(k));
        assert_eq!(triv.invariant_basis(-3, 4).unwrap().len(), 7);
        let z2 = SectorModel::new(named("Z2"), ground(k));
        assert_eq!(z2.invariant_basis(0, 0).unwrap().len(), 2);
        let s = SectorModel::new(s3(), ground(k));
        let inv = s.invariant_basis(0, 0).unwrap();
        let fixed = s.fixed_subspace(0, 0).unwrap();
        assert_eq!((inv.len(), fixed.len()), (3, 3));
        let monos = vec![Monomial::unit(0)];
        let width = 6;
        assert!(linalg::same_span(k, width, &s.sector_coordinates(&monos, &inv), &s.sector_coordinates(&monos, &fixed)));
        for x in &inv {
            assert!((0..6).all(|h| x.conjugation_action(h) == *x));
        }
    }

    #[test]
    fn transfer_examples() {
        let k = FieldSpec::rationals();
        let g = named("Z2");
        let model = SectorModel::new(g.clone(), ground(k));
        let sigma = 1 - g.identity();
        let sc = model.classes().class_of(sigma);
        assert_eq!(q(&model, sc, 1).transfer_mu(), SectorElement::basis(&model, sigma, Monomial::unit(0), k.from_i64(2)));

        let triv = SectorModel::new(named("trivial"), loop_s3(k));
        let x = QuotientElement::basis(&triv, 0, triv.algebra().monomial(&[1, 2]).unwrap(), k.from_i64(5));
        assert_eq!(x.transfer_mu().projection_p(), x);

        let s = SectorModel::new(s3(), loop_s3(k));
        let t = (0..3).find(|&c| s.classes().size(c) == 3).unwrap();
        let m = s.algebra().monomial(&[1, 1]).unwrap();
        let mu = QuotientElement::basis(&s, t, m.clone(), k.one()).transfer_mu();
        let expected = s.class_sum_element(t, &m, &k.from_i64(2));
        assert_eq!(mu, expected);
        // p(m ⊗ z_C) = |C| (C, m)
        assert_eq!(s.class_sum_element(t, &m, &k.one()).projection_p(), QuotientElement::basis(&s, t, m, k.from_i64(3)));
    }

    #[test]
    fn transfer_identities_on_small_groups() {
        for k in [field(7), FieldSpec::rationals()] {
            for g in [named("Z2"), named("Z3"), s3(), named("D4"), named("Q8")] {
                let r = check_transfer(&SectorModel::new(g, loop_s3(k)), -3, 4).unwrap();
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn orbifold_product_examples() {
        let k = field(7);
        let g = named("Z2");
        let model = SectorModel::new(g.clone(), ground(k));
        let sc = model.classes().class_of(1 - g.identity());
        let ec = model.classes().class_of(g.identity());
        let x = q(&model, sc, 1);
        assert_eq!(x.orbifold_product(&x).unwrap(), q(&model, ec, 4));
        assert_eq!(x.tensor_iso_phi().unwrap(), TensorElement::basis(&model, sc, Monomial::unit(0), k.from_i64(4)));
        let lhs = x.orbifold_product(&x).unwrap().tensor_iso_phi().unwrap();
        let phi = x.tensor_iso_phi().unwrap();
        assert_eq!(lhs, phi.multiply(&phi).unwrap());
        assert_eq!(lhs, TensorElement::basis(&model, ec, Monomial::unit(0), k.from_i64(16)));
    }

    #[test]
    fn identity_class_scales_by_order_squared() {
        let k = FieldSpec::rationals();
        for g in [s3(), named("Q8"), named("Z5")] {
            let model = SectorModel::new(g.clone(), loop_s3(k));
            let e = q(&model, model.classes().class_of(g.identity()), 1);
            let n2 = k.from_u64((g.order() * g.order()) as u64);
            for y in model.quotient_basis(-3, 4).unwrap() {
                assert_eq!(e.orbifold_product(&y).unwrap(), y.scale(&n2));
            }
        }
    }

    #[test]
    fn trivial_group_orbifold_product_is_ring_product() {
        let k = field(7);
        let model = SectorModel::new(named("trivial"), loop_s3(k));
        for x in model.quotient_basis(-6, 8).unwrap() {
            for y in model.quotient_basis(-6, 8).unwrap() {
                let ((_, a), _) = x.terms().iter().next().unwrap();
                let ((_, b), _) = y.terms().iter().next().unwrap();
                let expected: BTreeMap<_, _> =
                    model.algebra().monomial_product(a, b).into_iter().map(|(m, c)| ((0, m), c)).collect();
                assert_eq!(x.orbifold_product(&y).unwrap().terms(), &expected);
            }
        }
    }

    #[test]
    fn orbifold_product_is_associative() {
        let k = field(7);
        let model = SectorModel::new(s3(), loop_s3(k));
        let basis = model.quotient_basis(-3, 2).unwrap();
        for x in &basis {
            for y in &basis {
                let xy = x.orbifold_product(y).unwrap();
                for z in &basis {
                    let left = xy.orbifold_product(z).unwrap();
                    let right = x.orbifold_product(&y.orbifold_product(z).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn sector_product_on_invariants_matches_tensor_product() {
        let k = field(7);
        let model = SectorModel::new(named("Q8"), loop_s3(k));
        let monos = model.algebra().presentation().basis_in_window(-3, 4).unwrap();
        let c = model.classes().len();
        let tensors: Vec<TensorElement> = (0..c)
            .flat_map(|cl| monos.iter().map(move |m| (cl, m.clone())))
            .map(|(cl, m)| TensorElement::basis(&model, cl, m, k.one()))
            .collect();
        for a in &tensors {
            for b in &tensors {
                let via_sectors = a.to_sectors().sector_product(&b.to_sectors()).unwrap();
                assert_eq!(via_sectors, a.multiply(b).unwrap().to_sectors());
            }
        }
    }

    #[test]
    fn theorem_holds_for_s3_over_f7() {
        let model = SectorModel::new(s3(), loop_s3(field(7)));
        let r = verify_theorem(&model, -6, 4).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.dimensions.iter().all(|row| row.rank_phi_image == row.dim_a * 3));
    }

    #[test]
    fn theorem_degenerates_for_trivial_group() {
        let model = SectorModel::new(named("trivial"), loop_s3(FieldSpec::rationals()));
        let r = verify_theorem(&model, -6, 8).unwrap();
        assert!(r.passed);
        let x = model.quotient_basis(0, 2).unwrap().pop().unwrap();
        assert_eq!(x.tensor_iso_phi().unwrap().terms(), x.terms());
    }

    #[test]
    fn theorem_requires_coprime_characteristic() {
        let model = SectorModel::new(named("Z2"), ground(field(2)));
        let err = verify_theorem(&model, 0, 0).unwrap_err();
        assert!(err.to_string().starts_with("transfer unavailable"), "{err}");
        let x = q(&model, 0, 1);
        assert!(matches!(x.orbifold_product(&x), Err(Error::TransferUnavailable { .. })));
    }

    #[test]
    fn parallel_and_sequential_reports_agree() {
        let model = SectorModel::new(named("D4"), loop_s3(field(7)));
        let a = verify_theorem_with(&model, -6, 6, Exec::Sequential).unwrap();
        let b = verify_theorem_with(&model, -6, 6, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    /// λ oracle: `λ_C λ_D = λ_E |Z_C||Z_D||E|` whenever `c[C][D][E] ≠ 0`,
    /// checked in integers, and the literal product `(C,1)∘(D,1)` recomputed
    /// from class constants alone.
    #[test]
    fn normalization_constraints_hold_and_alternatives_fail() {
        let k = FieldSpec::rationals();
        for name in ["Z2", "Z3", "Z4", "S3", "D4", "Q8", "D6", "S4"] {
            let g = if name == "S3" { s3() } else { named(name) };
            let model = SectorModel::new(g.clone(), ground(k));
            let cc = model.classes();
            let n = g.order() as u128;
            let z = |c: usize| cc.centralizer_order(c) as u128;
            let lambda = |c: usize| n * z(c);
            let naive = |c: usize| z(c);
            let mut naive_ok = true;
            for c in 0..cc.len() {
                for d in 0..cc.len() {
                    for e in 0..cc.len() {
                        if model.constants().get(c, d, e) == 0 {
                            continue;
                        }
                        let rhs = z(c) * z(d) * cc.size(e) as u128;
                        assert_eq!(lambda(c) * lambda(d), lambda(e) * rhs, "{name}");
                        naive_ok &= naive(c) * naive(d) == naive(e) * rhs;
                    }
                    // (C,1)∘(D,1) = |Z_C||Z_D| Σ_E c[C][D][E] |E| (E,1)
                    let lit = q(&model, c, 1).orbifold_product(&q(&model, d, 1)).unwrap();
                    let mut expected = QuotientElement::zero(&model);
                    for e in 0..cc.len() {
                        let w = model.constants().get(c, d, e) as u128 * z(c) * z(d) * cc.size(e) as u128;
                        expected = expected.add(&q(&model, e, w as i64)).unwrap();
                    }
                    assert_eq!(lit, expected, "{name}");
                }
            }
            assert!(!naive_ok, "{name}: λ = |Z_C| should not be multiplicative");
        }
    }
}
