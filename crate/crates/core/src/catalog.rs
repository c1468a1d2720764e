//! Manifold and ambient-group catalogs.
//!
//! Loop homology presentations are user data keyed by a characteristic
//! predicate. Every presentation is run through the law suite when a catalog
//! is loaded.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{is_prime, FieldSpec};
use crate::graded::{validate_presentation, GradedAlgebra, GradedPresentation, Generator};

const BUILTIN: &str = include_str!("../data/catalog.json");

/// Characteristics always probed when checking predicates at load time.
const PROBES: [u64; 5] = [0, 2, 3, 5, 7];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Expr {
    Any,
    Cmp(Op, u64),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn eval(&self, p: u64) -> bool {
        match self {
            Expr::Any => true,
            Expr::Cmp(op, n) => match op {
                Op::Eq => p == *n,
                Op::Ne => p != *n,
                Op::Lt => p < *n,
                Op::Le => p <= *n,
                Op::Gt => p > *n,
                Op::Ge => p >= *n,
            },
            Expr::And(a, b) => a.eval(p) && b.eval(p),
            Expr::Or(a, b) => a.eval(p) || b.eval(p),
        }
    }

    fn constants(&self, out: &mut BTreeSet<u64>) {
        match self {
            Expr::Any => {}
            Expr::Cmp(_, n) => {
                out.insert(*n);
            }
            Expr::And(a, b) | Expr::Or(a, b) => {
                a.constants(out);
                b.constants(out);
            }
        }
    }
}

/// A predicate on the characteristic `p` (0 for ℚ), e.g. `p != 2`,
/// `p == 0 || p >= 5`, or `any`. `&&` binds tighter than `||`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharCondition {
    source: String,
    expr: Expr,
}

struct CondParser<'a> {
    tokens: Vec<&'a str>,
    pos: usize,
}

fn tokenize(s: &str) -> Result<Vec<&str>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphanumeric() {
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
        } else if c == b'(' || c == b')' {
            i += 1;
        } else {
            while i < bytes.len() && b"=!<>&|".contains(&bytes[i]) {
                i += 1;
            }
            if i == start {
                return Err(Error::Catalog(format!("unexpected `{}` in condition `{s}`", c as char)));
            }
        }
        out.push(&s[start..i]);
    }
    Ok(out)
}

impl<'a> CondParser<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self) -> Result<&'a str> {
        let t = self.peek().ok_or_else(|| Error::Catalog("condition ends early".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn or(&mut self) -> Result<Expr> {
        let mut e = self.and()?;
        while self.peek() == Some("||") {
            self.pos += 1;
            e = Expr::Or(Box::new(e), Box::new(self.and()?));
        }
        Ok(e)
    }

    fn and(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        while self.peek() == Some("&&") {
            self.pos += 1;
            e = Expr::And(Box::new(e), Box::new(self.atom()?));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next()? {
            "any" => Ok(Expr::Any),
            "(" => {
                let e = self.or()?;
                match self.next()? {
                    ")" => Ok(e),
                    t => Err(Error::Catalog(format!("expected `)`, found `{t}`"))),
                }
            }
            "p" => {
                let op = match self.next()? {
                    "==" => Op::Eq,
                    "!=" => Op::Ne,
                    "<" => Op::Lt,
                    "<=" => Op::Le,
                    ">" => Op::Gt,
                    ">=" => Op::Ge,
                    t => return Err(Error::Catalog(format!("unknown comparison `{t}`"))),
                };
                let t = self.next()?;
                let n = t.parse().map_err(|_| Error::Catalog(format!("expected a number, found `{t}`")))?;
                Ok(Expr::Cmp(op, n))
            }
            t => Err(Error::Catalog(format!("unexpected `{t}`"))),
        }
    }
}

impl CharCondition {
    pub fn parse(s: &str) -> Result<Self> {
        let mut parser = CondParser { tokens: tokenize(s)?, pos: 0 };
        let expr = parser.or().map_err(|e| Error::Catalog(format!("bad condition `{s}`: {e}")))?;
        if let Some(t) = parser.peek() {
            return Err(Error::Catalog(format!("bad condition `{s}`: trailing `{t}`")));
        }
        Ok(Self { source: s.trim().to_string(), expr })
    }

    pub fn any() -> Self {
        Self { source: "any".into(), expr: Expr::Any }
    }

    pub fn matches(&self, characteristic: u64) -> bool {
        self.expr.eval(characteristic)
    }

    pub fn as_str(&self) -> &str {
        &self.source
    }

    /// Characteristics worth probing: the fixed probe set plus primes at and
    /// next to every constant in the predicate.
    fn probes(&self) -> BTreeSet<u64> {
        let mut consts = BTreeSet::new();
        self.expr.constants(&mut consts);
        let mut out: BTreeSet<u64> = PROBES.into_iter().collect();
        for n in consts {
            out.extend([n.saturating_sub(1), n, n + 1].into_iter().filter(|&q| is_prime(q)));
            if let Some(q) = (n + 1..).find(|&q| is_prime(q)) {
                out.insert(q);
            }
        }
        out
    }
}

impl fmt::Display for CharCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl Serialize for CharCondition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

impl<'de> Deserialize<'de> for CharCondition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CharCondition::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Which TNCZ criterion from the literature applies to a manifold family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TnczRule {
    /// `S^n`, `CP^n`, `HP^n`: TNCZ iff `χ(M) = 0` in `F_p`.
    EulerCharacteristic,
    /// `SU(m+n)/SU(n)` and `Sp(m+n)/Sp(n)`: TNCZ for every `p > 0`.
    SpecialStiefel { m: u32, n: u32 },
    /// `SO(m+n)/SO(n)`.
    RealStiefel { m: u32, n: u32 },
    /// `U(m+n)/(U(m)×U(n))` and `Sp(m+n)/(Sp(m)×Sp(n))`: never TNCZ for `p > 0`.
    Grassmannian { m: u32, n: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tncz {
    True,
    False,
    Unknown,
}

impl fmt::Display for Tncz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tncz::True => "true",
            Tncz::False => "false",
            Tncz::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankEntry {
    pub char_condition: CharCondition,
    pub rank: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLoopRing {
    char_condition: CharCondition,
    generators: Vec<Generator>,
    provenance: String,
}

/// One presentation of `ℍ*(LM;k)`, valid for characteristics matching the predicate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLoopRing")]
pub struct LoopRingEntry {
    pub char_condition: CharCondition,
    #[serde(flatten)]
    pub presentation: GradedPresentation,
    pub provenance: String,
}

impl TryFrom<RawLoopRing> for LoopRingEntry {
    type Error = Error;

    fn try_from(raw: RawLoopRing) -> Result<Self> {
        Ok(Self {
            char_condition: raw.char_condition,
            presentation: GradedPresentation::new(raw.generators)?,
            provenance: raw.provenance,
        })
    }
}

fn required<'de, D: Deserializer<'de>, T: Deserialize<'de>>(d: D) -> std::result::Result<Option<T>, D::Error> {
    Option::deserialize(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldEntry {
    pub name: String,
    #[serde(rename = "dim_M")]
    pub dim_m: u32,
    pub simply_connected: bool,
    pub euler_characteristic: i64,
    /// Rational Betti numbers `b_0, …, b_dim`; when present they must
    /// reproduce the Euler characteristic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<u64>>,
    /// Whether `H*(M;ℚ)` is free graded commutative (TNCZ over ℚ).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_free_cohomology: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tncz_rule: Option<TnczRule>,
    #[serde(default)]
    pub h_top_rank: Vec<RankEntry>,
    #[serde(default)]
    pub loop_ring: Vec<LoopRingEntry>,
}

impl ManifoldEntry {
    /// The presentation for characteristic `p`, if one is catalogued.
    pub fn loop_ring_for(&self, p: u64) -> Result<Option<&LoopRingEntry>> {
        let mut hits = self.loop_ring.iter().filter(|e| e.char_condition.matches(p));
        let first = hits.next();
        if hits.next().is_some() {
            return Err(Error::Catalog(format!("{}: several loop rings match characteristic {p}", self.name)));
        }
        Ok(first)
    }

    /// The rank of `H_{dim M}(LM;k)` when catalogued.
    pub fn h_top_rank_for(&self, p: u64) -> Option<u64> {
        self.h_top_rank.iter().find(|e| e.char_condition.matches(p)).map(|e| e.rank)
    }

    /// Default degree window `[−2·dim M, 4·dim M]`.
    pub fn default_window(&self) -> (i64, i64) {
        let d = self.dim_m as i64;
        (-2 * d, 4 * d)
    }

    /// TNCZ status of the free loop fibration over `F_p` (or ℚ for `p = 0`).
    pub fn tncz_lookup(&self, p: u64) -> Tncz {
        if p == 0 {
            return match self.rational_free_cohomology {
                Some(true) => Tncz::True,
                Some(false) => Tncz::False,
                None => Tncz::Unknown,
            };
        }
        let Some(rule) = &self.tncz_rule else {
            return Tncz::Unknown;
        };
        let verdict = |b: bool| if b { Tncz::True } else { Tncz::False };
        match *rule {
            TnczRule::EulerCharacteristic => verdict(self.euler_characteristic.rem_euclid(p as i64) == 0),
            TnczRule::SpecialStiefel { .. } => Tncz::True,
            TnczRule::RealStiefel { m, n } => {
                if p > 2 {
                    verdict(n % 2 == 1)
                } else if m <= 4 || ((1..=8).contains(&m) && n >= 43) {
                    Tncz::True
                } else {
                    Tncz::Unknown
                }
            }
            TnczRule::Grassmannian { .. } => Tncz::False,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Catalog(format!("{}: {m}", self.name)));
        if self.dim_m == 0 {
            return bad("dim_M must be positive".into());
        }
        if let Some(b) = &self.betti {
            if b.len() != self.dim_m as usize + 1 {
                return bad(format!("betti has {} entries, expected dim_M + 1 = {}", b.len(), self.dim_m + 1));
            }
            let chi: i64 = b.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
            if chi != self.euler_characteristic {
                return bad(format!("betti numbers give χ = {chi}, catalog says {}", self.euler_characteristic));
            }
        }
        let mut probes = BTreeSet::new();
        for e in &self.loop_ring {
            probes.extend(e.char_condition.probes());
        }
        for e in &self.h_top_rank {
            probes.extend(e.char_condition.probes());
        }
        let d = self.dim_m as i64;
        for &p in &probes {
            if self.h_top_rank.iter().filter(|e| e.char_condition.matches(p)).count() > 1 {
                return bad(format!("several h_top_rank entries match characteristic {p}"));
            }
            let Some(entry) = self.loop_ring_for(p)? else { continue };
            let algebra = GradedAlgebra::new(entry.presentation.clone(), FieldSpec::new(p)?)?;
            let report = validate_presentation(&algebra, -d, d)?;
            if let Some(v) = report.first_violation {
                return bad(format!("loop ring fails the law suite in characteristic {p}: {v}"));
            }
            if let Some(rank) = self.h_top_rank_for(p) {
                let dim0 = entry.presentation.poincare_series(0, 0)?[&0] as u64;
                if dim0 != rank {
                    return bad(format!("h_top_rank {rank} disagrees with the loop ring's degree-0 dimension {dim0} (p = {p})"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientGroupEntry {
    pub name: String,
    pub simply_connected: bool,
    /// Order of `π₁`; `null` means infinite.
    #[serde(deserialize_with = "required")]
    pub pi1_order: Option<u64>,
    pub provenance: String,
}

impl AmbientGroupEntry {
    fn validate(&self) -> Result<()> {
        match (self.simply_connected, self.pi1_order) {
            (_, Some(0)) => Err(Error::Catalog(format!("{}: pi1_order must be positive", self.name))),
            (true, Some(1)) | (false, Some(2..)) | (false, None) => Ok(()),
            _ => Err(Error::Catalog(format!("{}: pi1_order = 1 must coincide with simply_connected", self.name))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    #[serde(default)]
    pub manifolds: Vec<ManifoldEntry>,
    #[serde(default)]
    pub ambient_groups: Vec<AmbientGroupEntry>,
}

/// Parses JSON, reporting `origin:line:column`, the field path and the cause.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Input(format!("{origin}:{}:{}: field `{path}`: {inner}", inner.line(), inner.column()))
    })?;
    de.end().map_err(|e| Error::Input(format!("{origin}:{}:{}: {e}", e.line(), e.column())))?;
    Ok(value)
}

impl Catalog {
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        let catalog: Catalog = parse_json(text, origin)?;
        catalog.validate().map_err(|e| match e {
            Error::Catalog(m) => Error::Catalog(format!("{origin}: {m}")),
            other => Error::Catalog(format!("{origin}: {other}")),
        })?;
        Ok(catalog)
    }

    /// The catalog shipped with the crate, validated once per process.
    pub fn builtin() -> &'static Catalog {
        static CELL: OnceLock<Catalog> = OnceLock::new();
        CELL.get_or_init(|| Catalog::from_json(BUILTIN, "builtin catalog").expect("builtin catalog is valid"))
    }

    fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for m in &self.manifolds {
            if !seen.insert(&m.name) {
                return Err(Error::Catalog(format!("duplicate manifold `{}`", m.name)));
            }
            m.validate()?;
        }
        let mut seen = BTreeSet::new();
        for g in &self.ambient_groups {
            if !seen.insert(&g.name) {
                return Err(Error::Catalog(format!("duplicate ambient group `{}`", g.name)));
            }
            g.validate()?;
        }
        Ok(())
    }

    /// Adds the entries of `other`; an entry with an existing name replaces it.
    pub fn extend(&mut self, other: Catalog) {
        fn merge<T, F: Fn(&T) -> &str>(into: &mut Vec<T>, from: Vec<T>, name: F) {
            for x in from {
                match into.iter().position(|y| name(y) == name(&x)) {
                    Some(i) => into[i] = x,
                    None => into.push(x),
                }
            }
        }
        merge(&mut self.manifolds, other.manifolds, |m| &m.name);
        merge(&mut self.ambient_groups, other.ambient_groups, |g| &g.name);
    }

    pub fn manifold(&self, name: &str) -> Result<&ManifoldEntry> {
        self.manifolds
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::Catalog(format!("unknown manifold `{name}`")))
    }

    pub fn ambient(&self, name: &str) -> Result<&AmbientGroupEntry> {
        self.ambient_groups
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| Error::Catalog(format!("unknown ambient group `{name}`")))
    }

    /// Every shipped presentation with a characteristic it applies to, as
    /// `(manifold, characteristic, presentation)`, for each of `chars`.
    pub fn presentations_for(&self, chars: &[u64]) -> Vec<(String, u64, &LoopRingEntry)> {
        let mut out = Vec::new();
        for m in &self.manifolds {
            for &p in chars {
                if let Ok(Some(e)) = m.loop_ring_for(p) {
                    out.push((m.name.clone(), p, e));
                }
            }
        }
        out
    }

    /// Names grouped by kind, for listings.
    pub fn names(&self) -> BTreeMap<&'static str, Vec<&str>> {
        BTreeMap::from([
            ("manifolds", self.manifolds.iter().map(|m| m.name.as_str()).collect()),
            ("ambient_groups", self.ambient_groups.iter().map(|g| g.name.as_str()).collect()),
        ])
    }
}
