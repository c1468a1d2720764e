//! Finite groups as full multiplication tables, and their conjugacy classes.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::par::Exec;

/// Default bound on the order of any materialized group.
pub const DEFAULT_ORDER_CAP: usize = 2000;

/// Orders up to this are checked for associativity exhaustively; larger
/// tables are checked on random triples.
const EXHAUSTIVE_ASSOCIATIVITY: usize = 256;
const SAMPLED_TRIPLES: usize = 20_000;

/// A finite group on the elements `0..order`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    // row-major `order × order`
    mult: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.identity == other.identity && self.mult == other.mult
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a multiplication table and validates every group
    /// axiom: Latin square, two-sided identity, inverses and associativity.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_with(rows, None, Exec::default())
    }

    pub fn from_table_with(rows: Vec<Vec<usize>>, labels: Option<Vec<String>>, exec: Exec) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if n > DEFAULT_ORDER_CAP {
            return Err(Error::GroupTooLarge { cap: DEFAULT_ORDER_CAP });
        }
        let mut mult = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {i} has length {}, expected {n}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidTable(format!("entry {x} in row {i} is out of range")));
                }
                mult.push(x as u32);
            }
        }
        Self::from_flat(n, mult, labels, exec)
    }

    fn from_flat(n: usize, mult: Vec<u32>, labels: Option<Vec<String>>, exec: Exec) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::InvalidTable("label count differs from order".into()));
            }
        }
        let at = |i: usize, j: usize| mult[i * n + j] as usize;
        // Latin square
        let mut seen = vec![0usize; n];
        for i in 0..n {
            let stamp = i + 1;
            for j in 0..n {
                let x = at(i, j);
                if seen[x] == 2 * stamp - 1 {
                    return Err(Error::InvalidTable(format!("row {i} repeats element {x}")));
                }
                seen[x] = 2 * stamp - 1;
            }
            for j in 0..n {
                let x = at(j, i);
                if seen[x] == 2 * stamp {
                    return Err(Error::InvalidTable(format!("column {i} repeats element {x}")));
                }
                seen[x] = 2 * stamp;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|j| at(e, j) == j && at(j, e) == j))
            .ok_or_else(|| Error::InvalidTable("no two-sided identity".into()))?;
        let mut inverse = vec![0u32; n];
        for i in 0..n {
            let j = (0..n)
                .find(|&j| at(i, j) == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {i} has no inverse")))?;
            if at(j, i) != identity {
                return Err(Error::InvalidTable(format!("element {i} has no two-sided inverse")));
            }
            inverse[i] = j as u32;
        }
        let g = Self { order: n, mult, identity, inverse, labels };
        if let Some((a, b, c)) = g.associativity_violation(exec) {
            return Err(Error::InvalidTable(format!("not associative at ({a}, {b}, {c})")));
        }
        Ok(g)
    }

    /// A counterexample `(a, b, c)` with `(ab)c != a(bc)`, if one is found.
    /// Exhaustive up to order 256, sampled above.
    pub fn associativity_violation(&self, exec: Exec) -> Option<(usize, usize, usize)> {
        let n = self.order;
        let bad = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c));
        if n <= EXHAUSTIVE_ASSOCIATIVITY {
            exec.find_first(n, |a| {
                (0..n).find_map(|b| (0..n).find(|&c| bad(a, b, c)).map(|c| (a, b, c)))
            })
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            let triples: Vec<(usize, usize, usize)> =
                (0..SAMPLED_TRIPLES).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            exec.find_first(triples.len(), |i| {
                let (a, b, c) = triples[i];
                bad(a, b, c).then_some((a, b, c))
            })
        }
    }

    pub fn trivial() -> Self {
        Self { order: 1, mult: vec![0], identity: 0, inverse: vec![0], labels: Some(vec!["()".into()]) }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `h⁻¹ g h`.
    #[inline]
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(self.inv(h), g), h)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|i| (0..self.order).map(|j| self.mul(i, j)).collect()).collect()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// The same group with element `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order;
        if perm.len() != n {
            return Err(Error::InvalidTable("relabeling has the wrong length".into()));
        }
        let mut mult = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mult[perm[a] * n + perm[b]] = perm[self.mul(a, b)] as u32;
            }
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); n];
            for (i, s) in l.iter().enumerate() {
                out[perm[i]] = s.clone();
            }
            out
        });
        Self::from_flat(n, mult, labels, Exec::default())
    }

    /// The subgroup of `Sym(degree)` generated by `generators` (given as image
    /// vectors on `0..degree`).
    ///
    /// Elements are numbered by breadth-first closure from the identity: each
    /// discovered element is right-multiplied by the generators in order. The
    /// product `a·b` applies `a` first, then `b`.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>], cap: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::MalformedPermutation("degree must be at least 1".into()));
        }
        for (k, g) in generators.iter().enumerate() {
            check_permutation(degree, g).map_err(|m| Error::MalformedPermutation(format!("generator {k}: {m}")))?;
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut head = 0;
        while head < elements.len() {
            for s in generators {
                let y = compose(&elements[head], s);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
            head += 1;
        }
        let n = elements.len();
        let rows = Exec::default().map_range(n, |a| {
            (0..n).map(|b| index[&compose(&elements[a], &elements[b])] as u32).collect::<Vec<_>>()
        });
        let labels = elements.iter().map(|p| cycle_notation(p)).collect();
        Self::from_flat(n, rows.concat(), Some(labels), Exec::default())
    }

    /// All 2×2 matrices of determinant 1 over `F_p`, with matrix product.
    /// Elements are ordered lexicographically by `(a, b, c, d)` for
    /// `[[a, b], [c, d]]`, so the identity is not element 0.
    pub fn special_linear_2(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > 31 {
            return Err(Error::Input(format!("matrix groups are enumerated only for p <= 31, got {p}")));
        }
        let order = (p * (p * p - 1)) as usize;
        if order > DEFAULT_ORDER_CAP {
            return Err(Error::GroupTooLarge { cap: DEFAULT_ORDER_CAP });
        }
        let p = p as usize;
        let mut mats = Vec::with_capacity(order);
        let mut index = vec![u32::MAX; p * p * p * p];
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        if (a * d + p * p - (b * c) % p) % p == 1 {
                            index[((a * p + b) * p + c) * p + d] = mats.len() as u32;
                            mats.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        debug_assert_eq!(mats.len(), order);
        let n = mats.len();
        let rows = Exec::default().map_range(n, |i| {
            let [a, b, c, d] = mats[i];
            (0..n)
                .map(|j| {
                    let [e, f, g, h] = mats[j];
                    let m = [(a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p];
                    index[((m[0] * p + m[1]) * p + m[2]) * p + m[3]]
                })
                .collect::<Vec<_>>()
        });
        let labels = mats.iter().map(|[a, b, c, d]| format!("[[{a},{b}],[{c},{d}]]")).collect();
        Self::from_flat(n, rows.concat(), Some(labels), Exec::default())
    }

    /// A group from the shipped catalog: `trivial`, `Z<n>` (or `C<n>`, n <= 50),
    /// `S<n>` (n <= 5), `D<n>` (the dihedral group of the regular n-gon,
    /// 3 <= n <= 12, order 2n), `Q8`, and `SL(2,5)`.
    pub fn named(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownGroup(name.to_string());
        let trimmed = name.trim();
        let param = |prefix: &str| trimmed.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
        match trimmed {
            "trivial" | "1" => return Ok(Self::trivial()),
            "Q8" => return Ok(quaternion_group()),
            "SL(2,5)" | "SL2(5)" | "binary_icosahedral" => return Self::special_linear_2(5),
            _ => {}
        }
        if let Some(n) = param("Z").or_else(|| param("C")) {
            if !(1..=50).contains(&n) {
                return Err(unknown());
            }
            let gens = if n == 1 { vec![] } else { vec![(0..n).map(|i| (i + 1) % n).collect()] };
            return Self::from_permutations(n, &gens, DEFAULT_ORDER_CAP);
        }
        if let Some(n) = param("S") {
            if !(1..=5).contains(&n) {
                return Err(unknown());
            }
            let mut gens = Vec::new();
            if n >= 2 {
                let mut t: Vec<usize> = (0..n).collect();
                t.swap(0, 1);
                gens.push(t);
            }
            if n >= 3 {
                gens.push((0..n).map(|i| (i + 1) % n).collect());
            }
            return Self::from_permutations(n, &gens, DEFAULT_ORDER_CAP);
        }
        if let Some(n) = param("D") {
            if !(3..=12).contains(&n) {
                return Err(unknown());
            }
            let rotation = (0..n).map(|i| (i + 1) % n).collect();
            let reflection = (0..n).map(|i| (n - i) % n).collect();
            return Self::from_permutations(n, &[rotation, reflection], DEFAULT_ORDER_CAP);
        }
        Err(unknown())
    }

    /// Names accepted by [`FiniteGroup::named`], smallest parameters first.
    pub fn catalog_names() -> Vec<String> {
        let mut names = vec!["trivial".to_string(), "Q8".to_string(), "SL(2,5)".to_string()];
        names.extend((1..=50).map(|n| format!("Z{n}")));
        names.extend((1..=5).map(|n| format!("S{n}")));
        names.extend((3..=12).map(|n| format!("D{n}")));
        names
    }
}

fn check_permutation(degree: usize, p: &[usize]) -> std::result::Result<(), String> {
    if p.len() != degree {
        return Err(format!("expected {degree} images, got {}", p.len()));
    }
    let mut seen = vec![false; degree];
    for &x in p {
        if x >= degree || std::mem::replace(&mut seen[x], true) {
            return Err(format!("{p:?} is not a bijection of 0..{degree}"));
        }
    }
    Ok(())
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&x| b[x]).collect()
}

/// Builds the image vector on `1..=degree` from 1-based cycles.
pub fn permutation_from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut img: Vec<usize> = (0..degree).collect();
    let mut used = vec![false; degree];
    for cycle in cycles {
        for &x in cycle {
            if x == 0 || x > degree {
                return Err(Error::MalformedPermutation(format!("point {x} outside 1..={degree}")));
            }
            if std::mem::replace(&mut used[x - 1], true) {
                return Err(Error::MalformedPermutation(format!("point {x} appears twice")));
            }
        }
        for (i, &x) in cycle.iter().enumerate() {
            img[x - 1] = cycle[(i + 1) % cycle.len()] - 1;
        }
    }
    Ok(img)
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(x + 1).to_string());
            first = false;
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

fn quaternion_group() -> FiniteGroup {
    // element = (sign, unit) with unit in {1, i, j, k}; index = 4*sign + unit
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let names = ["1", "i", "j", "k"];
    let rows = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (s, u) = UNIT[a % 4][b % 4];
                    4 * ((a / 4 + b / 4 + s) % 2) + u
                })
                .collect()
        })
        .collect();
    let labels = (0..8).map(|i| format!("{}{}", if i < 4 { "" } else { "-" }, names[i % 4])).collect();
    FiniteGroup::from_table_with(rows, Some(labels), Exec::Sequential).expect("quaternion table")
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {}", self.order)
    }
}

/// The conjugacy classes of a group, ordered by least element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyClassSet {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    centralizer_orders: Vec<usize>,
}

impl ConjugacyClassSet {
    pub fn compute(group: &FiniteGroup) -> Self {
        let n = group.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n).map(|h| group.conjugate(g, h)).collect();
            members.sort_unstable();
            members.dedup();
            for &x in &members {
                class_of[x] = classes.len();
            }
            classes.push(members);
        }
        let centralizer_orders = classes
            .iter()
            .map(|c| {
                let g = c[0];
                (0..n).filter(|&h| group.mul(h, g) == group.mul(g, h)).count()
            })
            .collect();
        Self { classes, class_of, centralizer_orders }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    pub fn representative(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn size(&self, c: usize) -> usize {
        self.classes[c].len()
    }

    pub fn centralizer_order(&self, c: usize) -> usize {
        self.centralizer_orders[c]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}
