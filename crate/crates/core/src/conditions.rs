//! Hypotheses of the splitting theorem and assembly of the answer ring.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::catalog::{AmbientGroupEntry, Catalog, ManifoldEntry, Tncz};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::graded::{GradedAlgebra, GradedPresentation};
use crate::group::FiniteGroup;
use crate::group_algebra::{class_sums, CenterReport};
use crate::input::{check_window, ProblemSpec};
use crate::par::Exec;
use crate::sector::{verify_theorem_with, SectorModel};

pub const REASON_CHAR_DIVIDES: &str = "char divides |G|";
pub const REASON_UNDETERMINED: &str = "triviality of the ambient action on loop homology is undetermined";
pub const REASON_NO_RING: &str = "no loop ring presentation catalogued for this characteristic";

/// The tuple `(M, 𝒢, G, k)`.
#[derive(Clone, Debug)]
pub struct OrbifoldProblem {
    pub manifold: ManifoldEntry,
    pub ambient: AmbientGroupEntry,
    pub group: Arc<FiniteGroup>,
    pub field: FieldSpec,
}

impl OrbifoldProblem {
    pub fn from_spec(spec: &ProblemSpec, catalog: &Catalog) -> Result<Self> {
        Ok(Self {
            manifold: catalog.manifold(&spec.manifold)?.clone(),
            ambient: catalog.ambient(&spec.ambient)?.clone(),
            group: Arc::new(spec.group.build()?),
            field: spec.field,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrivialityVerdict {
    TrivialBySimplyConnected,
    TrivialByTopHomology,
    TrivialByTncz,
    Undetermined,
}

impl TrivialityVerdict {
    pub fn is_trivial(self) -> bool {
        self != TrivialityVerdict::Undetermined
    }
}

impl fmt::Display for TrivialityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrivialityVerdict::TrivialBySimplyConnected => "trivial_by_simply_connected",
            TrivialityVerdict::TrivialByTopHomology => "trivial_by_top_homology",
            TrivialityVerdict::TrivialByTncz => "trivial_by_tncz",
            TrivialityVerdict::Undetermined => "undetermined",
        })
    }
}

pub fn check_coprime(problem: &OrbifoldProblem) -> bool {
    problem.field.is_coprime_to(problem.group.order() as u64)
}

pub fn tncz_lookup(manifold: &ManifoldEntry, characteristic: u64) -> Tncz {
    manifold.tncz_lookup(characteristic)
}

/// The first sufficient criterion that fires, in the fixed order: simply
/// connected ambient group, `H_{dim M}(LM;k) ≅ k`, TNCZ with finite `π₁𝒢`.
pub fn check_trivial_action(problem: &OrbifoldProblem) -> TrivialityVerdict {
    let p = problem.field.characteristic();
    if problem.ambient.simply_connected {
        return TrivialityVerdict::TrivialBySimplyConnected;
    }
    if problem.manifold.h_top_rank_for(p) == Some(1) {
        return TrivialityVerdict::TrivialByTopHomology;
    }
    if let Some(r) = problem.ambient.pi1_order {
        if problem.manifold.simply_connected
            && tncz_lookup(&problem.manifold, p) == Tncz::True
            && problem.field.is_coprime_to(r)
        {
            return TrivialityVerdict::TrivialByTncz;
        }
    }
    TrivialityVerdict::Undetermined
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultRing {
    /// `ℍ*(LM;k) ⊗ Z(k[G])`, with `Z(k[G]) ≅ k^c` spelled out when reportable.
    pub description: String,
    pub loop_ring: GradedPresentation,
    pub loop_ring_provenance: String,
    pub center: CenterReport,
    /// `c[C][D][E]` with `z_C · z_D = Σ_E c[C][D][E] z_E`; classes as in `center`.
    pub class_constants: Vec<Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub degree: i64,
    pub dim_loop_ring: usize,
    pub dim_result: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfCheck {
    pub pairs_checked: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbifoldReport {
    pub manifold: String,
    pub ambient: String,
    pub group_order: usize,
    pub characteristic: u64,
    pub coprime_ok: bool,
    pub triviality_verdict: TrivialityVerdict,
    pub tncz: Tncz,
    pub applicable: bool,
    pub reason: Option<String>,
    pub c_g: usize,
    pub window: (i64, i64),
    pub result_ring: Option<ResultRing>,
    pub dimension_table: Vec<DimensionRow>,
    pub self_check: Option<SelfCheck>,
    pub notes: Vec<String>,
}

/// Hypotheses only; no ring is built.
pub fn hypotheses(problem: &OrbifoldProblem, window: Option<(i64, i64)>) -> Result<OrbifoldReport> {
    let (lo, hi) = window.unwrap_or_else(|| problem.manifold.default_window());
    check_window(lo, hi)?;
    let p = problem.field.characteristic();
    let coprime_ok = check_coprime(problem);
    let verdict = check_trivial_action(problem);
    let ring = problem.manifold.loop_ring_for(p)?;
    let mut failures = Vec::new();
    if !coprime_ok {
        failures.push(REASON_CHAR_DIVIDES.to_string());
    }
    if !verdict.is_trivial() {
        failures.push(REASON_UNDETERMINED.to_string());
    }
    if ring.is_none() {
        failures.push(REASON_NO_RING.to_string());
    }
    let mut notes = Vec::new();
    if let Some(e) = ring {
        notes.push(format!("loop ring: {}", e.provenance));
    }
    notes.extend(failures.iter().skip(1).map(|f| format!("also: {f}")));
    Ok(OrbifoldReport {
        manifold: problem.manifold.name.clone(),
        ambient: problem.ambient.name.clone(),
        group_order: problem.group.order(),
        characteristic: p,
        coprime_ok,
        triviality_verdict: verdict,
        tncz: tncz_lookup(&problem.manifold, p),
        applicable: failures.is_empty(),
        reason: failures.into_iter().next(),
        c_g: crate::group::ConjugacyClassSet::compute(&problem.group).len(),
        window: (lo, hi),
        result_ring: None,
        dimension_table: Vec::new(),
        self_check: None,
        notes,
    })
}

/// Runs the gates; when they pass, builds `A ⊗ Z(k[G])`, checks the
/// isomorphism on the window, and tabulates dimensions.
pub fn assemble(problem: &OrbifoldProblem, window: Option<(i64, i64)>) -> Result<OrbifoldReport> {
    assemble_with(problem, window, Exec::default())
}

pub fn assemble_with(problem: &OrbifoldProblem, window: Option<(i64, i64)>, exec: Exec) -> Result<OrbifoldReport> {
    let mut report = hypotheses(problem, window)?;
    if !report.applicable {
        return Ok(report);
    }
    let (lo, hi) = report.window;
    let p = problem.field.characteristic();
    let entry = problem.manifold.loop_ring_for(p)?.expect("gated on presence");
    let algebra = GradedAlgebra::new(entry.presentation.clone(), problem.field)?;
    let center = CenterReport::new(&problem.group, &class_sums(&problem.group, problem.field), problem.field);
    let model = SectorModel::new(problem.group.clone(), algebra);

    let theorem = verify_theorem_with(&model, lo, hi, exec)?;
    if !theorem.passed {
        return Err(Error::SelfCheck(theorem.counterexample.unwrap_or_default()));
    }
    let series = entry.presentation.poincare_series(lo, hi)?;
    let c = center.class_count;
    let mut table = Vec::with_capacity(series.len());
    for (row, (&degree, &dim_a)) in theorem.dimensions.iter().zip(&series) {
        if row.degree != degree || row.rank_phi_image != c * dim_a {
            return Err(Error::SelfCheck(format!("dimension mismatch in degree {degree}")));
        }
        table.push(DimensionRow { degree, dim_loop_ring: dim_a, dim_result: row.rank_phi_image });
    }

    let lhs = format!("ℍ*(L{};k)", problem.manifold.name);
    let description = if problem.group.order() == 1 {
        format!("{lhs} (trivial group: Z(k[G]) = k)")
    } else if let Some(n) = center.split_as_product_of_fields {
        format!("{lhs} ⊗ Z(k[G]) ≅ {lhs} ⊗ k^{n}")
    } else {
        format!("{lhs} ⊗ Z(k[G]), dim Z(k[G]) = {c}")
    };
    report.result_ring = Some(ResultRing {
        description,
        loop_ring: entry.presentation.clone(),
        loop_ring_provenance: entry.provenance.clone(),
        class_constants: model.constants().as_nested(),
        center,
    });
    report.dimension_table = table;
    report.self_check = Some(SelfCheck { pairs_checked: theorem.pairs_checked, passed: true });
    Ok(report)
}
