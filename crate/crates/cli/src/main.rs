//! `orbiloop`: batch front end for loop homology of global quotient orbifolds.

use std::cell::OnceCell;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use orbiloop::catalog::Catalog;
use orbiloop::conditions::{self, OrbifoldProblem, OrbifoldReport};
use orbiloop::graded::{validate_presentation, GradedAlgebra};
use orbiloop::group_algebra::{center_brute_force, class_sums, same_span, CenterReport, ClassConstants};
use orbiloop::input::{check_window, GroupSpec, ProblemSpec};
use orbiloop::sector::{check_transfer, verify_theorem, SectorModel};
use orbiloop::{ConjugacyClassSet, FieldSpec, FiniteGroup};

const SCHEMA_VERSION: u32 = 1;

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_HYPOTHESES: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "orbiloop", version, about = "Loop homology rings of global quotient orbifolds [M/G]")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Problem file: {"manifold", "ambient", "group", "field", "window"?}
    #[arg(long, global = true)]
    problem: Option<PathBuf>,

    /// Group: a built-in name (Z6, S3, D4, Q8, SL(2,5), ...) or an inline JSON spec.
    #[arg(long, global = true)]
    group: Option<String>,

    /// Field characteristic, 0 for the rationals.
    #[arg(long = "char", global = true)]
    characteristic: Option<u64>,

    /// Treat the field as algebraically closed.
    #[arg(long, global = true)]
    alg_closed: bool,

    /// Manifold catalog name, when no problem file is given.
    #[arg(long, global = true)]
    manifold: Option<String>,

    /// Ambient group catalog name, when no problem file is given.
    #[arg(long, global = true)]
    ambient: Option<String>,

    /// Extra catalog file; later files replace same-named entries.
    #[arg(long, global = true)]
    catalog: Vec<PathBuf>,

    /// Degree window.
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    window: Option<Vec<i64>>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Conjugacy class table.
    Classes,
    /// Basis and dimension of Z(k[G]).
    Center,
    /// Class multiplication coefficients c[C][D][E].
    ClassConstants,
    /// Assembled orbifold loop homology ring.
    Ring,
    /// Hypothesis report only.
    Check,
    /// Oracle and property checks on one instance.
    Verify,
    /// Dimension table of the loop ring and the orbifold ring.
    Poincare,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Classes => "classes",
            Command::Center => "center",
            Command::ClassConstants => "class-constants",
            Command::Ring => "ring",
            Command::Check => "check",
            Command::Verify => "verify",
            Command::Poincare => "poincare",
        }
    }
}

#[derive(Serialize)]
struct Document<T: Serialize> {
    schema_version: u32,
    command: &'static str,
    #[serde(flatten)]
    body: T,
}

struct Output {
    text: String,
    json: serde_json::Value,
    code: u8,
}

impl Output {
    fn new<T: Serialize>(command: Command, body: T, text: String, code: u8) -> Result<Self> {
        let doc = Document { schema_version: SCHEMA_VERSION, command: command.name(), body };
        Ok(Self { text, json: serde_json::to_value(doc)?, code })
    }
}

struct Session {
    cli: Cli,
    catalog: OnceCell<Catalog>,
    spec: Option<ProblemSpec>,
}

impl Session {
    fn open(cli: Cli) -> Result<Self> {
        let spec = match &cli.problem {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Some(ProblemSpec::from_json(&text, &path.display().to_string())?)
            }
            None => None,
        };
        Ok(Self { cli, catalog: OnceCell::new(), spec })
    }

    /// The builtin catalog extended by every `--catalog` file, loaded on first use.
    fn catalog(&self) -> Result<&Catalog> {
        if let Some(c) = self.catalog.get() {
            return Ok(c);
        }
        let mut catalog = Catalog::builtin().clone();
        for path in &self.cli.catalog {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            catalog.extend(Catalog::from_json(&text, &path.display().to_string())?);
        }
        Ok(self.catalog.get_or_init(|| catalog))
    }

    fn group_spec(&self) -> Result<GroupSpec> {
        match (&self.cli.group, &self.spec) {
            (Some(g), _) => Ok(GroupSpec::parse_arg(g)?),
            (None, Some(spec)) => Ok(spec.group.clone()),
            (None, None) => bail!("a group is required: pass --group or --problem"),
        }
    }

    fn group(&self) -> Result<Arc<FiniteGroup>> {
        Ok(Arc::new(self.group_spec()?.build()?))
    }

    fn field(&self) -> Result<Option<FieldSpec>> {
        let from_flag = self.cli.characteristic.map(FieldSpec::new).transpose()?;
        let field = from_flag.or(self.spec.as_ref().map(|s| s.field));
        Ok(field.map(|f| if self.cli.alg_closed { f.with_algebraically_closed(true) } else { f }))
    }

    fn field_or_rationals(&self) -> Result<FieldSpec> {
        Ok(self.field()?.unwrap_or_else(|| FieldSpec::rationals().with_algebraically_closed(self.cli.alg_closed)))
    }

    fn window(&self) -> Result<Option<(i64, i64)>> {
        let w = match &self.cli.window {
            Some(v) => Some((v[0], v[1])),
            None => self.spec.as_ref().and_then(|s| s.window),
        };
        if let Some((lo, hi)) = w {
            check_window(lo, hi)?;
        }
        Ok(w)
    }

    fn problem(&self) -> Result<OrbifoldProblem> {
        let pick = |flag: &Option<String>, from_spec: Option<&String>, what: &str| -> Result<String> {
            match (flag, from_spec) {
                (Some(x), _) => Ok(x.clone()),
                (None, Some(x)) => Ok(x.clone()),
                (None, None) => bail!("{what} is required: pass --{what} or --problem"),
            }
        };
        let manifold = pick(&self.cli.manifold, self.spec.as_ref().map(|s| &s.manifold), "manifold")?;
        let ambient = pick(&self.cli.ambient, self.spec.as_ref().map(|s| &s.ambient), "ambient")?;
        let Some(field) = self.field()? else {
            bail!("a field is required: pass --char or --problem");
        };
        Ok(OrbifoldProblem {
            manifold: self.catalog()?.manifold(&manifold)?.clone(),
            ambient: self.catalog()?.ambient(&ambient)?.clone(),
            group: self.group()?,
            field,
        })
    }
}

#[derive(Serialize)]
struct ClassRow {
    index: usize,
    representative: String,
    size: usize,
    centralizer_order: usize,
}

#[derive(Serialize)]
struct ClassTable {
    group_order: usize,
    class_count: usize,
    classes: Vec<ClassRow>,
}

fn class_rows(group: &FiniteGroup, cc: &ConjugacyClassSet) -> Vec<ClassRow> {
    (0..cc.len())
        .map(|c| ClassRow {
            index: c,
            representative: group.label(cc.representative(c)),
            size: cc.size(c),
            centralizer_order: cc.centralizer_order(c),
        })
        .collect()
}

fn classes(s: &Session) -> Result<Output> {
    let group = s.group()?;
    let cc = ConjugacyClassSet::compute(&group);
    let table = ClassTable { group_order: group.order(), class_count: cc.len(), classes: class_rows(&group, &cc) };
    let mut text = String::new();
    writeln!(text, "{:>5}  {:>6}  {:>11}  representative", "class", "size", "centralizer")?;
    for r in &table.classes {
        writeln!(text, "{:>5}  {:>6}  {:>11}  {}", r.index, r.size, r.centralizer_order, r.representative)?;
    }
    writeln!(text, "|G| = {}, c(G) = {}", table.group_order, table.class_count)?;
    Output::new(Command::Classes, table, text, EXIT_OK)
}

#[derive(Serialize)]
struct CenterDoc {
    characteristic: u64,
    #[serde(flatten)]
    report: CenterReport,
    /// Element labels of each class sum `z_C`.
    basis: Vec<Vec<String>>,
}

fn center(s: &Session) -> Result<Output> {
    let group = s.group()?;
    let field = s.field_or_rationals()?;
    let basis = class_sums(&group, field);
    let report = CenterReport::new(&group, &basis, field);
    let sums: Vec<Vec<String>> =
        basis.classes().classes().iter().map(|members| members.iter().map(|&g| group.label(g)).collect()).collect();
    let mut text = String::new();
    writeln!(text, "Z(k[G]) over characteristic {}: dimension {}", field.characteristic(), report.dimension)?;
    for (c, members) in sums.iter().enumerate() {
        writeln!(text, "z_{c} = {}", members.join(" + "))?;
    }
    if let Some(n) = report.split_as_product_of_fields {
        writeln!(text, "Z(k[G]) ≅ k^{n}")?;
    }
    let doc = CenterDoc { characteristic: field.characteristic(), report, basis: sums };
    Output::new(Command::Center, doc, text, EXIT_OK)
}

#[derive(Serialize)]
struct ConstantsDoc {
    representatives: Vec<String>,
    class_sizes: Vec<usize>,
    constants: Vec<Vec<Vec<u64>>>,
}

fn class_constants(s: &Session) -> Result<Output> {
    let group = s.group()?;
    let cc = ConjugacyClassSet::compute(&group);
    let constants = ClassConstants::compute(&group, &cc);
    let n = cc.len();
    let mut text = String::new();
    for c in 0..n {
        for d in 0..n {
            let terms: Vec<String> = (0..n)
                .filter_map(|e| match constants.get(c, d, e) {
                    0 => None,
                    1 => Some(format!("z_{e}")),
                    k => Some(format!("{k} z_{e}")),
                })
                .collect();
            writeln!(text, "z_{c} · z_{d} = {}", terms.join(" + "))?;
        }
    }
    let doc = ConstantsDoc {
        representatives: (0..n).map(|c| group.label(cc.representative(c))).collect(),
        class_sizes: cc.sizes(),
        constants: constants.as_nested(),
    };
    Output::new(Command::ClassConstants, doc, text, EXIT_OK)
}

fn report_text(r: &OrbifoldReport) -> Result<String> {
    let mut t = String::new();
    writeln!(t, "manifold        {}", r.manifold)?;
    writeln!(t, "ambient         {}", r.ambient)?;
    writeln!(t, "|G|             {}", r.group_order)?;
    writeln!(t, "characteristic  {}", r.characteristic)?;
    writeln!(t, "coprime         {}", r.coprime_ok)?;
    writeln!(t, "triviality      {}", r.triviality_verdict)?;
    writeln!(t, "tncz            {}", r.tncz)?;
    writeln!(t, "c(G)            {}", r.c_g)?;
    writeln!(t, "window          [{}, {}]", r.window.0, r.window.1)?;
    writeln!(t, "applicable      {}", r.applicable)?;
    if let Some(reason) = &r.reason {
        writeln!(t, "reason          {reason}")?;
    }
    if let Some(ring) = &r.result_ring {
        writeln!(t, "result          {}", ring.description)?;
        let gens: Vec<String> = ring
            .loop_ring
            .generators()
            .iter()
            .map(|g| match g.bound {
                Some(b) => format!("{} (deg {}, bound {b})", g.name, g.degree),
                None => format!("{} (deg {})", g.name, g.degree),
            })
            .collect();
        writeln!(t, "loop ring       {}", gens.join(", "))?;
        writeln!(t, "provenance      {}", ring.loop_ring_provenance)?;
    }
    if let Some(sc) = &r.self_check {
        writeln!(t, "self-check      {} pairs, passed = {}", sc.pairs_checked, sc.passed)?;
    }
    if !r.dimension_table.is_empty() {
        writeln!(t, "{:>6}  {:>6}  {:>6}", "degree", "dim A", "dim")?;
        for row in &r.dimension_table {
            writeln!(t, "{:>6}  {:>6}  {:>6}", row.degree, row.dim_loop_ring, row.dim_result)?;
        }
    }
    for n in &r.notes {
        writeln!(t, "note            {n}")?;
    }
    Ok(t)
}

fn ring(s: &Session, command: Command) -> Result<Output> {
    let problem = s.problem()?;
    let window = s.window()?;
    let report = match command {
        Command::Check => conditions::hypotheses(&problem, window)?,
        _ => conditions::assemble(&problem, window)?,
    };
    let code = if report.applicable { EXIT_OK } else { EXIT_HYPOTHESES };
    Output::new(command, &report, report_text(&report)?, code)
}

#[derive(Serialize)]
struct CheckResult {
    name: &'static str,
    status: &'static str,
    detail: String,
}

#[derive(Serialize)]
struct VerifyDoc {
    window: (i64, i64),
    checks: Vec<CheckResult>,
}

fn verify(s: &Session) -> Result<Output> {
    let problem = s.problem()?;
    let window = s.window()?.unwrap_or_else(|| problem.manifold.default_window());
    let (lo, hi) = window;
    let field = problem.field;
    let group = &problem.group;
    let mut checks = Vec::new();
    let mut push = |name, ok: bool, detail: String| {
        checks.push(CheckResult { name, status: if ok { "pass" } else { "fail" }, detail });
    };

    let sums = class_sums(group, field);
    let brute = center_brute_force(group, field);
    let ok = brute.len() == sums.dimension() && same_span(field, sums.class_sums(), &brute);
    push("center_oracle", ok, format!("class sums {}, commutant dimension {}", sums.dimension(), brute.len()));

    let entry = problem.manifold.loop_ring_for(field.characteristic())?;
    let Some(entry) = entry else {
        bail!("{}: {}", problem.manifold.name, conditions::REASON_NO_RING);
    };
    let algebra = GradedAlgebra::new(entry.presentation.clone(), field)?;
    let laws = validate_presentation(&algebra, lo, hi)?;
    push("loop_ring_laws", laws.passed, laws.first_violation.unwrap_or_else(|| format!("{} monomials", laws.basis_size)));

    let model = SectorModel::new(group.clone(), algebra);
    let mut skipped = false;
    if conditions::check_coprime(&problem) {
        let t = check_transfer(&model, lo, hi)?;
        push(
            "transfer",
            t.passed(),
            format!(
                "p∘μ = |G|·id: {}, rank Im μ = {}, fixed dimension = {}",
                t.p_mu_is_order_times_identity, t.image_rank, t.fixed_dimension
            ),
        );
        let th = verify_theorem(&model, lo, hi)?;
        let detail = th.counterexample.clone().unwrap_or_else(|| format!("{} pairs", th.pairs_checked));
        push("theorem", th.passed, detail);
    } else {
        skipped = true;
        checks.push(CheckResult { name: "transfer", status: "skipped", detail: conditions::REASON_CHAR_DIVIDES.into() });
        checks.push(CheckResult { name: "theorem", status: "skipped", detail: conditions::REASON_CHAR_DIVIDES.into() });
    }

    let mut text = String::new();
    writeln!(text, "window [{lo}, {hi}]")?;
    for c in &checks {
        writeln!(text, "{:<16} {:<8} {}", c.name, c.status, c.detail)?;
    }
    let code = if checks.iter().any(|c| c.status == "fail") {
        EXIT_ERROR
    } else if skipped {
        EXIT_HYPOTHESES
    } else {
        EXIT_OK
    };
    Output::new(Command::Verify, VerifyDoc { window, checks }, text, code)
}

#[derive(Serialize)]
struct PoincareRow {
    degree: i64,
    dim_loop_ring: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    dim_orbifold: Option<usize>,
}

#[derive(Serialize)]
struct PoincareDoc {
    manifold: String,
    characteristic: u64,
    window: (i64, i64),
    #[serde(skip_serializing_if = "Option::is_none")]
    c_g: Option<usize>,
    rows: Vec<PoincareRow>,
}

fn poincare(s: &Session) -> Result<Output> {
    let name = match (&s.cli.manifold, &s.spec) {
        (Some(m), _) => m.clone(),
        (None, Some(spec)) => spec.manifold.clone(),
        (None, None) => bail!("manifold is required: pass --manifold or --problem"),
    };
    let manifold = s.catalog()?.manifold(&name)?;
    let field = s.field_or_rationals()?;
    let (lo, hi) = s.window()?.unwrap_or_else(|| manifold.default_window());
    let Some(entry) = manifold.loop_ring_for(field.characteristic())? else {
        bail!("{name}: {}", conditions::REASON_NO_RING);
    };
    let series = entry.presentation.poincare_series(lo, hi)?;
    let c_g = if s.cli.group.is_some() || s.spec.is_some() {
        Some(ConjugacyClassSet::compute(s.group()?.as_ref()).len())
    } else {
        None
    };
    let rows: Vec<PoincareRow> = series
        .iter()
        .map(|(&degree, &dim)| PoincareRow { degree, dim_loop_ring: dim, dim_orbifold: c_g.map(|c| c * dim) })
        .collect();
    let mut text = String::new();
    match c_g {
        Some(c) => writeln!(text, "{:>6}  {:>6}  {:>8}  (c(G) = {c})", "degree", "dim A", "dim A⊗Z")?,
        None => writeln!(text, "{:>6}  {:>6}", "degree", "dim A")?,
    }
    for r in &rows {
        match r.dim_orbifold {
            Some(d) => writeln!(text, "{:>6}  {:>6}  {:>8}", r.degree, r.dim_loop_ring, d)?,
            None => writeln!(text, "{:>6}  {:>6}", r.degree, r.dim_loop_ring)?,
        }
    }
    let doc = PoincareDoc { manifold: name, characteristic: field.characteristic(), window: (lo, hi), c_g, rows };
    Output::new(Command::Poincare, doc, text, EXIT_OK)
}

fn run(cli: Cli) -> Result<(Output, Format)> {
    let format = cli.format;
    let command = cli.command;
    let session = Session::open(cli)?;
    let out = match command {
        Command::Classes => classes(&session)?,
        Command::Center => center(&session)?,
        Command::ClassConstants => class_constants(&session)?,
        Command::Ring | Command::Check => ring(&session, command)?,
        Command::Verify => verify(&session)?,
        Command::Poincare => poincare(&session)?,
    };
    Ok((out, format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, format)) => {
            match format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
