//! Problem and group specifications as read from JSON files.

use serde::{Deserialize, Serialize};

use crate::catalog::parse_json;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::group::{permutation_from_cycles, FiniteGroup, DEFAULT_ORDER_CAP};

/// How a finite group is given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    /// Generators in cycle notation on points `1..=points`, e.g.
    /// `[[[1,2]], [[1,2,3]]]`. `points` defaults to the largest point used.
    Permutation {
        generators: Vec<Vec<Vec<usize>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<usize>,
    },
    /// `SL(2, F_p)`.
    MatrixSl2 { p: u64 },
    /// A name from the built-in group list (`Z6`, `S3`, `D4`, `Q8`, `SL(2,5)`, …).
    Named { name: String },
    /// A full multiplication table; row `a`, column `b` holds `a·b`.
    Table { mult: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Permutation { generators, points } => {
                let max = generators.iter().flatten().flatten().copied().max().unwrap_or(1);
                let degree = points.unwrap_or(max);
                let perms = generators
                    .iter()
                    .map(|cycles| permutation_from_cycles(degree, cycles))
                    .collect::<Result<Vec<_>>>()?;
                FiniteGroup::from_permutations(degree, &perms, DEFAULT_ORDER_CAP)
            }
            GroupSpec::MatrixSl2 { p } => FiniteGroup::special_linear_2(*p),
            GroupSpec::Named { name } => FiniteGroup::named(name),
            GroupSpec::Table { mult } => FiniteGroup::from_table(mult.clone()),
        }
    }

    /// Accepts either a JSON object or a built-in group name.
    pub fn parse_arg(arg: &str) -> Result<Self> {
        if arg.trim_start().starts_with('{') {
            parse_json(arg, "group argument")
        } else {
            Ok(GroupSpec::Named { name: arg.to_string() })
        }
    }
}

/// The tuple `(M, 𝒢, G, k)` by catalog name plus inline group and field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub manifold: String,
    pub ambient: String,
    pub group: GroupSpec,
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
}

impl ProblemSpec {
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        let spec: ProblemSpec = parse_json(text, origin)?;
        if let Some((lo, hi)) = spec.window {
            check_window(lo, hi)?;
        }
        Ok(spec)
    }
}

pub fn check_window(lo: i64, hi: i64) -> Result<()> {
    if lo > hi {
        return Err(Error::InvalidWindow { lo, hi });
    }
    Ok(())
}
