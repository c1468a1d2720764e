//! Finitely presented graded-commutative algebras with an admissible-monomial
//! normal form.
//!
//! A presentation lists generators in a fixed order, each with an integer
//! degree (negative allowed) and an optional nilpotency bound `b`. A monomial
//! `x_1^{e_1} … x_m^{e_m}` is admissible when every `e_i < b_i`. Bounded
//! generators carry a rewrite of `x_i^{b_i}` as a combination of admissible
//! monomials of the same degree, each lexicographically below `x_i^{b_i}`, so
//! rewriting terminates.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::par::Exec;

/// One term of a top-power rewrite, as written in catalog files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteTerm {
    /// Integer or `"n/d"`.
    #[serde(default = "one_coeff")]
    pub coeff: Coefficient,
    /// Generator name → exponent.
    #[serde(default)]
    pub monomial: BTreeMap<String, u32>,
}

fn one_coeff() -> Coefficient {
    Coefficient::Int(1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Text(String),
}

impl Coefficient {
    fn to_scalar(&self, field: &FieldSpec) -> Result<Scalar> {
        match self {
            Coefficient::Int(n) => Ok(field.from_i64(*n)),
            Coefficient::Text(s) => field.parse(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    #[serde(rename = "deg")]
    pub degree: i64,
    /// `None` means polynomial (unbounded).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub top_rewrite: Vec<RewriteTerm>,
}

impl Generator {
    pub fn exterior(name: &str, degree: i64) -> Self {
        Self { name: name.into(), degree, bound: Some(2), top_rewrite: vec![] }
    }

    pub fn polynomial(name: &str, degree: i64) -> Self {
        Self { name: name.into(), degree, bound: None, top_rewrite: vec![] }
    }

    pub fn truncated(name: &str, degree: i64, bound: u32) -> Self {
        Self { name: name.into(), degree, bound: Some(bound), top_rewrite: vec![] }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// A field-independent presentation. Rewrite coefficients are interpreted
/// in a field by [`GradedAlgebra::new`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedPresentation {
    generators: Vec<Generator>,
    // per generator: rewrite terms as (coefficient, exponent vector)
    #[serde(skip)]
    rewrites: Vec<Vec<(Coefficient, Vec<u32>)>>,
}

impl GradedPresentation {
    pub fn new(generators: Vec<Generator>) -> Result<Self> {
        let bad = |m: String| Error::InvalidPresentation(m);
        let mut index = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.name.is_empty() {
                return Err(bad(format!("generator {i} has an empty name")));
            }
            if index.insert(g.name.clone(), i).is_some() {
                return Err(bad(format!("duplicate generator `{}`", g.name)));
            }
            if g.bound == Some(0) {
                return Err(bad(format!("generator `{}` has bound 0", g.name)));
            }
            if g.bound.is_none() && !g.top_rewrite.is_empty() {
                return Err(bad(format!("unbounded generator `{}` has a top rewrite", g.name)));
            }
        }
        let mut rewrites = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            let mut terms = Vec::new();
            for t in &g.top_rewrite {
                let mut exps = vec![0u32; generators.len()];
                for (name, &e) in &t.monomial {
                    let j = *index
                        .get(name)
                        .ok_or_else(|| bad(format!("rewrite of `{}` mentions unknown generator `{name}`", g.name)))?;
                    exps[j] = e;
                }
                if let Some(j) = (0..generators.len()).find(|&j| generators[j].bound.is_some_and(|b| exps[j] >= b)) {
                    return Err(bad(format!("rewrite of `{}` has a non-admissible power of `{}`", g.name, generators[j].name)));
                }
                let deg: i64 = exps.iter().zip(&generators).map(|(&e, h)| e as i64 * h.degree).sum();
                let top = g.bound.unwrap() as i64 * g.degree;
                if deg != top {
                    return Err(bad(format!("rewrite of `{}` is not homogeneous: degree {deg} != {top}", g.name)));
                }
                // lexicographically below x_i^b: nothing before position i,
                // and the exponent at i is below b by admissibility
                if exps[..i].iter().any(|&e| e > 0) {
                    return Err(bad(format!(
                        "rewrite of `{}` uses a generator listed before it; rewriting would not terminate",
                        g.name
                    )));
                }
                terms.push((t.coeff.clone(), exps));
            }
            rewrites.push(terms);
        }
        Ok(Self { generators, rewrites })
    }

    /// The ground field itself: no generators.
    pub fn trivial() -> Self {
        Self { generators: vec![], rewrites: vec![] }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn degree_of(&self, exps: &[u32]) -> i64 {
        exps.iter().zip(&self.generators).map(|(&e, g)| e as i64 * g.degree).sum()
    }

    pub fn is_admissible(&self, exps: &[u32]) -> bool {
        exps.iter().zip(&self.generators).all(|(&e, g)| g.bound.is_none_or(|b| e < b))
    }

    /// Generators of `self` followed by those of `other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Self::new(gens)
    }

    /// Admissible monomials with degree in `[lo, hi]`, in deglex order.
    pub fn basis_in_window(&self, lo: i64, hi: i64) -> Result<Vec<Monomial>> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        let m = self.generators.len();
        let unbounded: Vec<i64> = self.generators.iter().filter(|g| g.bound.is_none()).map(|g| g.degree).collect();
        if unbounded.iter().any(|&d| d == 0)
            || (unbounded.iter().any(|&d| d > 0) && unbounded.iter().any(|&d| d < 0))
        {
            return Err(Error::NotLocallyFinite { lo, hi });
        }
        // least and greatest degree reachable from generators i.., None = unbounded
        let mut min_rest = vec![Some(0i64); m + 1];
        let mut max_rest = vec![Some(0i64); m + 1];
        for i in (0..m).rev() {
            let g = &self.generators[i];
            let (lo_i, hi_i) = match g.bound {
                Some(b) => {
                    let top = (b as i64 - 1) * g.degree;
                    (Some(top.min(0)), Some(top.max(0)))
                }
                None if g.degree > 0 => (Some(0), None),
                None => (None, Some(0)),
            };
            min_rest[i] = min_rest[i + 1].zip(lo_i).map(|(a, b)| a + b);
            max_rest[i] = max_rest[i + 1].zip(hi_i).map(|(a, b)| a + b);
        }
        let mut out = Vec::new();
        let mut exps = vec![0u32; m];
        self.enumerate(0, 0, lo, hi, &min_rest, &max_rest, &mut exps, &mut out);
        out.sort();
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &self,
        i: usize,
        deg: i64,
        lo: i64,
        hi: i64,
        min_rest: &[Option<i64>],
        max_rest: &[Option<i64>],
        exps: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        // prune when the window is unreachable from here
        if min_rest[i].is_some_and(|m| deg + m > hi) || max_rest[i].is_some_and(|m| deg + m < lo) {
            return;
        }
        if i == self.generators.len() {
            out.push(Monomial { degree: deg, exps: exps.clone() });
            return;
        }
        let g = &self.generators[i];
        let mut e = 0u32;
        loop {
            if g.bound.is_some_and(|b| e >= b) {
                break;
            }
            let d = deg + e as i64 * g.degree;
            if g.bound.is_none() {
                // unbounded: stop once the rest can no longer return to the window
                let overshoot = if g.degree > 0 {
                    min_rest[i + 1].is_some_and(|m| d + m > hi)
                } else {
                    max_rest[i + 1].is_some_and(|m| d + m < lo)
                };
                if overshoot {
                    break;
                }
            }
            exps[i] = e;
            self.enumerate(i + 1, d, lo, hi, min_rest, max_rest, exps, out);
            e += 1;
        }
        exps[i] = 0;
    }

    /// Dimension of each degree in `[lo, hi]` (zeros included).
    pub fn poincare_series(&self, lo: i64, hi: i64) -> Result<BTreeMap<i64, usize>> {
        let mut series: BTreeMap<i64, usize> = (lo..=hi).map(|d| (d, 0)).collect();
        for m in self.basis_in_window(lo, hi)? {
            *series.get_mut(&m.degree).unwrap() += 1;
        }
        Ok(series)
    }
}

impl<'de> Deserialize<'de> for GradedPresentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            generators: Vec<Generator>,
        }
        let raw = Raw::deserialize(d)?;
        GradedPresentation::new(raw.generators).map_err(serde::de::Error::custom)
    }
}

/// An admissible monomial; the derived order is deglex (degree, then
/// exponent tuple).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    degree: i64,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn unit(generators: usize) -> Self {
        Self { degree: 0, exps: vec![0; generators] }
    }

    pub fn render(&self, presentation: &GradedPresentation) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .zip(presentation.generators())
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{e}", g.name) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// A presentation bound to a coefficient field.
#[derive(Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    presentation: GradedPresentation,
    field: FieldSpec,
    rewrites: Vec<Vec<(Scalar, Vec<u32>)>>,
}

impl GradedAlgebra {
    pub fn new(presentation: GradedPresentation, field: FieldSpec) -> Result<Arc<Self>> {
        let rewrites = presentation
            .rewrites
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|(c, e)| Ok((c.to_scalar(&field)?, e.clone())))
                    .filter(|r: &Result<(Scalar, Vec<u32>)>| r.as_ref().map_or(true, |(c, _)| !c.is_zero()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(Self { presentation, field, rewrites }))
    }

    pub fn presentation(&self) -> &GradedPresentation {
        &self.presentation
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generator_count(&self) -> usize {
        self.presentation.generators.len()
    }

    /// True when reordering `a` past `b` produces the sign `-1`: the parity
    /// of `Σ_{j<i} a_i b_j` over odd generators `i, j`.
    fn reorder_sign(&self, a: &[u32], b: &[u32]) -> bool {
        if self.field.characteristic() == 2 {
            return false;
        }
        let gens = &self.presentation.generators;
        let mut odd_b_before = 0u64;
        let mut parity = 0u64;
        for i in 0..gens.len() {
            if gens[i].is_odd() {
                parity ^= (a[i] as u64 & 1) & (odd_b_before & 1);
                odd_b_before += b[i] as u64;
            }
        }
        parity == 1
    }

    /// Normal form of the canonically ordered word with exponents `exps`.
    fn normalize(&self, exps: Vec<u32>, coeff: Scalar, out: &mut BTreeMap<Monomial, Scalar>) {
        let gens = &self.presentation.generators;
        let violating = (0..gens.len()).find(|&i| gens[i].bound.is_some_and(|b| exps[i] >= b));
        let Some(i) = violating else {
            let m = Monomial { degree: self.presentation.degree_of(&exps), exps };
            accumulate(out, m, coeff);
            return;
        };
        let b = gens[i].bound.unwrap();
        // word = L · x_i^b · R with L = generators before i
        let mut left = exps.clone();
        left[i] = 0;
        left[i + 1..].iter_mut().for_each(|e| *e = 0);
        let mut right = exps;
        right[..i].iter_mut().for_each(|e| *e = 0);
        right[i] -= b;
        for (c, t) in &self.rewrites[i] {
            let lt: Vec<u32> = left.iter().zip(t).map(|(a, b)| a + b).collect();
            let mut c = &coeff * c;
            if self.reorder_sign(&lt, &right) {
                c = -c;
            }
            let word = lt.iter().zip(&right).map(|(a, b)| a + b).collect();
            self.normalize(word, c, out);
        }
    }

    /// Product of two admissible monomials as a normal-form combination.
    pub fn monomial_product(&self, a: &Monomial, b: &Monomial) -> BTreeMap<Monomial, Scalar> {
        let mut coeff = self.field.one();
        if self.reorder_sign(&a.exps, &b.exps) {
            coeff = -coeff;
        }
        let word = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
        let mut out = BTreeMap::new();
        self.normalize(word, coeff, &mut out);
        out
    }

    pub fn monomial(&self, exps: &[u32]) -> Result<Monomial> {
        if exps.len() != self.generator_count() || !self.presentation.is_admissible(exps) {
            return Err(Error::InvalidPresentation(format!("{exps:?} is not an admissible monomial")));
        }
        Ok(Monomial { degree: self.presentation.degree_of(exps), exps: exps.to_vec() })
    }
}

fn accumulate(out: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match out.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// An element of a [`GradedAlgebra`]: admissible monomial → nonzero scalar.
#[derive(Clone, Debug)]
pub struct GradedElement {
    algebra: Arc<GradedAlgebra>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.terms == other.terms
    }
}

fn same_algebra(a: &Arc<GradedAlgebra>, b: &Arc<GradedAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GradedElement {
    pub fn zero(algebra: &Arc<GradedAlgebra>) -> Self {
        Self { algebra: algebra.clone(), terms: BTreeMap::new() }
    }

    pub fn unit(algebra: &Arc<GradedAlgebra>) -> Self {
        let m = Monomial::unit(algebra.generator_count());
        Self::from_monomial(algebra, m, algebra.field.one())
    }

    pub fn from_monomial(algebra: &Arc<GradedAlgebra>, m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, m, c);
        Self { algebra: algebra.clone(), terms }
    }

    /// The generator with the given name.
    pub fn generator(algebra: &Arc<GradedAlgebra>, name: &str) -> Result<Self> {
        let i = algebra
            .presentation
            .generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::InvalidPresentation(format!("no generator named `{name}`")))?;
        let mut exps = vec![0; algebra.generator_count()];
        exps[i] = 1;
        let mut terms = BTreeMap::new();
        algebra.normalize(exps, algebra.field.one(), &mut terms);
        Ok(Self { algebra: algebra.clone(), terms })
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms, if the element is homogeneous and nonzero.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::PresentationMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        Ok(Self { algebra: self.algebra.clone(), terms })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut terms = BTreeMap::new();
        for (m, x) in &self.terms {
            accumulate(&mut terms, m.clone(), x * c);
        }
        Self { algebra: self.algebra.clone(), terms }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let xy = x * y;
                for (m, c) in self.algebra.monomial_product(a, b) {
                    accumulate(&mut terms, m, &c * &xy);
                }
            }
        }
        Ok(Self { algebra: self.algebra.clone(), terms })
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let p = self.algebra.presentation();
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{}", m.render(p))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Outcome of checking the graded-commutative algebra laws on a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub window: (i64, i64),
    pub basis_size: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub passed: bool,
    pub first_violation: Option<String>,
}

/// Checks unit law, Koszul commutativity and associativity on every basis
/// monomial, pair and triple with degrees in `[lo, hi]`.
pub fn validate_presentation(algebra: &Arc<GradedAlgebra>, lo: i64, hi: i64) -> Result<LawReport> {
    validate_presentation_with(algebra, lo, hi, Exec::default())
}

pub fn validate_presentation_with(algebra: &Arc<GradedAlgebra>, lo: i64, hi: i64, exec: Exec) -> Result<LawReport> {
    let p = algebra.presentation();
    let basis = p.basis_in_window(lo, hi)?;
    let n = basis.len();
    let report = LawReport {
        window: (lo, hi),
        basis_size: n,
        pairs_checked: n * n,
        triples_checked: n * n * n,
        passed: true,
        first_violation: None,
    };
    let fail = |mut r: LawReport, msg: String| {
        r.passed = false;
        r.first_violation = Some(msg);
        Ok(r)
    };
    if algebra.field().characteristic() != 2 {
        if let Some(g) = p.generators().iter().find(|g| g.is_odd() && g.bound.is_none_or(|b| b > 2)) {
            return fail(report, format!("odd generator `{}` must square to zero outside characteristic 2", g.name));
        }
    }
    let elem = |m: &Monomial| GradedElement::from_monomial(algebra, m.clone(), algebra.field().one());
    let render = |m: &Monomial| m.render(p);
    let unit = GradedElement::unit(algebra);
    for m in &basis {
        let x = elem(m);
        if unit.multiply(&x)? != x || x.multiply(&unit)? != x {
            return fail(report, format!("unit law fails for {}", render(m)));
        }
    }
    let elems: Vec<GradedElement> = basis.iter().map(elem).collect();
    let comm = exec.find_first(n * n, |k| {
        let (i, j) = (k / n, k % n);
        let ab = elems[i].multiply(&elems[j]).unwrap();
        let mut ba = elems[j].multiply(&elems[i]).unwrap();
        if (basis[i].degree() * basis[j].degree()).rem_euclid(2) == 1 {
            ba = ba.scale(&-algebra.field().one());
        }
        (ab != ba).then(|| format!("graded commutativity fails for ({}, {})", render(&basis[i]), render(&basis[j])))
    });
    if let Some(msg) = comm {
        return fail(report, msg);
    }
    let products: Vec<GradedElement> =
        exec.map_range(n * n, |k| elems[k / n].multiply(&elems[k % n]).unwrap());
    let assoc = exec.find_first(n * n * n, |k| {
        let (i, j, l) = (k / (n * n), (k / n) % n, k % n);
        let left = products[i * n + j].multiply(&elems[l]).unwrap();
        let right = elems[i].multiply(&products[j * n + l]).unwrap();
        (left != right).then(|| {
            format!("associativity fails for ({}, {}, {})", render(&basis[i]), render(&basis[j]), render(&basis[l]))
        })
    });
    if let Some(msg) = assoc {
        return fail(report, msg);
    }
    Ok(report)
}

/// Cauchy product of two series restricted to `[lo, hi]`.
pub fn cauchy_product(a: &BTreeMap<i64, usize>, b: &BTreeMap<i64, usize>, lo: i64, hi: i64) -> BTreeMap<i64, usize> {
    let mut out: BTreeMap<i64, usize> = (lo..=hi).map(|d| (d, 0)).collect();
    for (&da, &na) in a {
        for (&db, &nb) in b {
            if let Some(slot) = out.get_mut(&(da + db)) {
                *slot += na * nb;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_s3() -> GradedPresentation {
        GradedPresentation::new(vec![Generator::exterior("a", -3), Generator::polynomial("u", 2)]).unwrap()
    }

    fn alg(p: GradedPresentation, ch: u64) -> Arc<GradedAlgebra> {
        GradedAlgebra::new(p, FieldSpec::new(ch).unwrap()).unwrap()
    }

    #[test]
    fn odd_square_vanishes() {
        let a = alg(GradedPresentation::new(vec![Generator::exterior("a", 3)]).unwrap(), 7);
        let x = GradedElement::generator(&a, "a").unwrap();
        assert!(x.multiply(&x).unwrap().is_zero());
    }

    #[test]
    fn polynomial_powers_add() {
        let a = alg(GradedPresentation::new(vec![Generator::polynomial("u", 2)]).unwrap(), 0);
        let u = GradedElement::generator(&a, "u").unwrap();
        let pow = |k: u32| GradedElement::from_monomial(&a, a.monomial(&[k]).unwrap(), a.field().one());
        assert_eq!(pow(2).multiply(&pow(3)).unwrap(), pow(5));
        assert_eq!(u.multiply(&u).unwrap(), pow(2));
    }

    #[test]
    fn odd_generators_anticommute() {
        let a = alg(GradedPresentation::new(vec![Generator::exterior("x", 1), Generator::exterior("y", 3)]).unwrap(), 0);
        let x = GradedElement::generator(&a, "x").unwrap();
        let y = GradedElement::generator(&a, "y").unwrap();
        let xy = x.multiply(&y).unwrap();
        let yx = y.multiply(&x).unwrap();
        assert!(!xy.is_zero());
        assert_eq!(xy, yx.scale(&a.field().from_i64(-1)));
        assert_eq!(xy.degree(), Some(4));
    }

    #[test]
    fn poincare_of_loop_sphere() {
        let s = loop_s3().poincare_series(-3, 4).unwrap();
        let nonzero: Vec<(i64, usize)> = s.into_iter().filter(|&(_, n)| n > 0).collect();
        assert_eq!(nonzero, vec![(-3, 1), (-1, 1), (0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]);
    }

    #[test]
    fn poincare_of_ground_field_and_truncation() {
        let t = GradedPresentation::trivial().poincare_series(-5, 5).unwrap();
        assert!(t.iter().all(|(&d, &n)| n == usize::from(d == 0)));
        let x3 = GradedPresentation::new(vec![Generator::truncated("x", 2, 3)]).unwrap();
        let s = x3.poincare_series(0, 6).unwrap();
        assert_eq!(s.values().copied().collect::<Vec<_>>(), vec![1, 0, 1, 0, 1, 0, 0]);
    }

    #[test]
    fn non_locally_finite_is_rejected() {
        let p = GradedPresentation::new(vec![Generator::polynomial("u", 2), Generator::polynomial("v", -2)]).unwrap();
        assert!(matches!(p.basis_in_window(0, 4), Err(Error::NotLocallyFinite { .. })));
        let z = GradedPresentation::new(vec![Generator::polynomial("t", 0)]).unwrap();
        assert!(z.basis_in_window(0, 0).is_err());
    }

    #[test]
    fn negative_unbounded_generators_enumerate() {
        let p = GradedPresentation::new(vec![Generator::polynomial("v", -2), Generator::exterior("a", 1)]).unwrap();
        let s = p.poincare_series(-6, 1).unwrap();
        assert_eq!(s[&-6], 1);
        assert_eq!(s[&-5], 1);
        assert_eq!(s[&1], 1);
        assert_eq!(s[&-1], 1);
    }

    #[test]
    fn laws_hold_for_standard_presentations() {
        for ch in [0, 2, 7] {
            let r = validate_presentation(&alg(loop_s3(), ch), -6, 8).unwrap();
            assert!(r.passed, "{r:?}");
            let x3 = GradedPresentation::new(vec![Generator::truncated("x", 2, 3)]).unwrap();
            assert!(validate_presentation(&alg(x3, ch), 0, 6).unwrap().passed);
        }
    }

    #[test]
    fn odd_generator_with_bound_three_fails() {
        let p = GradedPresentation::new(vec![Generator::truncated("a", 1, 3)]).unwrap();
        let r = validate_presentation(&alg(p.clone(), 7), -2, 4).unwrap();
        assert!(!r.passed);
        // the law check alone also catches it: a·a = a² but Koszul demands -a²
        let a = alg(p.clone(), 7);
        let x = GradedElement::generator(&a, "a").unwrap();
        assert_ne!(x.multiply(&x).unwrap(), x.multiply(&x).unwrap().scale(&a.field().from_i64(-1)));
        // in characteristic 2 there is no constraint
        assert!(validate_presentation(&alg(p, 2), -2, 4).unwrap().passed);
    }

    #[test]
    fn top_rewrite_is_applied() {
        // k[x]/(x² - y) with |x| = 2, |y| = 4 listed after x
        let p = GradedPresentation::new(vec![
            Generator {
                name: "x".into(),
                degree: 2,
                bound: Some(2),
                top_rewrite: vec![RewriteTerm { coeff: Coefficient::Int(3), monomial: BTreeMap::from([("y".into(), 1)]) }],
            },
            Generator::truncated("y", 4, 2),
        ])
        .unwrap();
        let a = alg(p, 7);
        let x = GradedElement::generator(&a, "x").unwrap();
        let y = GradedElement::generator(&a, "y").unwrap();
        assert_eq!(x.multiply(&x).unwrap(), y.scale(&a.field().from_i64(3)));
        // x³ = 3xy, x⁴ = 9y² = 0
        let x2 = x.multiply(&x).unwrap();
        assert_eq!(x2.multiply(&x).unwrap(), x.multiply(&y).unwrap().scale(&a.field().from_i64(3)));
        assert!(x2.multiply(&x2).unwrap().is_zero());
        assert!(validate_presentation(&a, 0, 12).unwrap().passed);
    }

    #[test]
    fn malformed_rewrites_are_rejected() {
        let backwards = vec![
            Generator::truncated("y", 4, 2),
            Generator {
                name: "x".into(),
                degree: 2,
                bound: Some(2),
                top_rewrite: vec![RewriteTerm { coeff: Coefficient::Int(1), monomial: BTreeMap::from([("y".into(), 1)]) }],
            },
        ];
        assert!(GradedPresentation::new(backwards).is_err());
        let inhomogeneous = vec![Generator {
            name: "x".into(),
            degree: 2,
            bound: Some(2),
            top_rewrite: vec![RewriteTerm { coeff: Coefficient::Int(1), monomial: BTreeMap::from([("x".into(), 1)]) }],
        }];
        assert!(GradedPresentation::new(inhomogeneous).is_err());
        assert!(GradedPresentation::new(vec![Generator::exterior("a", 1), Generator::exterior("a", 3)]).is_err());
    }

    #[test]
    fn tensor_series_is_cauchy_product() {
        let a = GradedPresentation::new(vec![Generator::exterior("a", -3)]).unwrap();
        let b = GradedPresentation::new(vec![Generator::polynomial("u", 2), Generator::truncated("w", 3, 3)]).unwrap();
        let (lo, hi) = (-6, 12);
        let t = a.tensor(&b).unwrap();
        // factor series over a window wide enough to feed every product in range
        let sa = a.poincare_series(-3, 0).unwrap();
        let sb = b.poincare_series(0, hi + 3).unwrap();
        assert_eq!(t.poincare_series(lo, hi).unwrap(), cauchy_product(&sa, &sb, lo, hi));
    }

    #[test]
    fn deglex_order_of_basis() {
        let basis = loop_s3().basis_in_window(-3, 2).unwrap();
        let degs: Vec<i64> = basis.iter().map(Monomial::degree).collect();
        assert_eq!(degs, vec![-3, -1, 0, 1, 2]);
    }

    #[test]
    fn presentation_mismatch() {
        let a = alg(loop_s3(), 7);
        let b = alg(loop_s3(), 0);
        assert_eq!(GradedElement::unit(&a).multiply(&GradedElement::unit(&b)), Err(Error::PresentationMismatch));
    }
}
