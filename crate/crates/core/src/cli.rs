//! The `mvred` command line.
//!
//! Exit codes: 0 success or all checks pass, 1 a check failed, 2 usage,
//! parse or input error, 3 a budget was exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::abstract_reduction::{
    verify_matrix, verify_suszko, Matrix, MatrixModel, SuszkoModel, ValuationSpace, DEFAULT_VALUATION_BUDGET,
};
use crate::error::{Error, Result};
use crate::kripke::{Extent, Semantics};
use crate::lattice::{check_lattice, LatticeSelector, LatticeSpec};
use crate::modal_flatten::{build_kripke_flat, flatten_program, reflect, verify_corollary, verify_flat};
use crate::modal_unary::{build_kripke_unary, transform_unary_with, verify_invariance_with, UnaryOptions};
use crate::semantics::{compute_model, Interpretation};
use crate::suite::{enumerate_formulas, thesis_suite, verify_two_valued};
use crate::syntax::{parse_formula, parse_program_with, Atom, ModalFormula, ParseOptions, Program};
use crate::verdict::{CheckVerdict, Skipped, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Seed for every randomized suite, so runs are reproducible.
pub const DEFAULT_SEED: u64 = 0x006d_7672_6564;

#[derive(Debug, Parser)]
#[command(name = "mvred", version, about = "Many-valued logic programs and their two-valued modal reductions")]
struct Cli {
    /// Lattice to use instead of the one the program declares
    /// (belnap4, fuzzy:K, interval:K, confidence:K, file:PATH).
    #[arg(long, global = true)]
    lattice: Option<String>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Most unary clauses one head may expand into.
    #[arg(long, global = true)]
    clause_budget: Option<usize>,
    /// Most valuations the Suszko model may enumerate.
    #[arg(long, global = true)]
    valuation_budget: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the least model.
    Model { file: PathBuf },
    /// Print the transformed program.
    Transform {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "unary")]
        mode: TransformMode,
        /// Keep each disjunctive body as written instead of one conjunction
        /// over all literal positions.
        #[arg(long)]
        disjunctive_bodies: bool,
    },
    /// Evaluate a formula in one of the Kripke models of the program.
    Check {
        file: PathBuf,
        #[arg(long)]
        formula: String,
        /// World to evaluate at; without it, reports truth at every world.
        #[arg(long)]
        world: Option<String>,
        /// Model to use; guessed from the formula's operators if absent.
        #[arg(long, value_enum)]
        mode: Option<ModelMode>,
        #[command(flatten)]
        model: ModelFlags,
    },
    /// Run verification suites and print a JSON array of verdicts.
    Verify {
        /// Program files or directories of `.mv` files; the bundled corpus
        /// if none are given.
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteName,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        model: ModelFlags,
    },
    /// Print a lattice and the result of checking its axioms.
    Lattice,
    /// Dump a Kripke model of the program as JSON.
    Kripke {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "unary")]
        mode: ModelMode,
        #[command(flatten)]
        model: ModelFlags,
    },
}

#[derive(Debug, Clone, clap::Args)]
struct ModelFlags {
    /// Keep every `(x -> y, x, y)` in the flat model's implication relation,
    /// not only those with `x <= y`.
    #[arg(long)]
    full_implication: bool,
    /// Designated values for the matrix model, comma separated
    /// (default: the lattice top).
    #[arg(long)]
    designated: Option<String>,
    /// Place an atom in the matrix model only at a designated world.
    #[arg(long)]
    designated_worlds_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransformMode {
    Unary,
    Flatten,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelMode {
    Unary,
    #[value(alias = "flatten")]
    Flat,
    Suszko,
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Invariance,
    Twovalued,
    Flatten,
    Corollary,
    Suszko,
    Matrix,
    LatticeAxioms,
    All,
}

impl SuiteName {
    const EACH: [SuiteName; 7] = [
        SuiteName::LatticeAxioms,
        SuiteName::Invariance,
        SuiteName::Twovalued,
        SuiteName::Flatten,
        SuiteName::Corollary,
        SuiteName::Suszko,
        SuiteName::Matrix,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SuiteName::Invariance => "invariance",
            SuiteName::Twovalued => "twovalued",
            SuiteName::Flatten => "flatten",
            SuiteName::Corollary => "corollary",
            SuiteName::Suszko => "suszko",
            SuiteName::Matrix => "matrix",
            SuiteName::LatticeAxioms => "lattice-axioms",
            SuiteName::All => "all",
        }
    }
}

/// Budgets and switches for [`verify_program`].
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub clause_budget: usize,
    pub valuation_budget: usize,
    pub full_implication: bool,
    pub designated: Option<String>,
    pub designated_worlds_only: bool,
    pub seed: u64,
    /// Random formulas per program for the two-valuedness checks.
    pub random_formulas: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            clause_budget: crate::modal_unary::DEFAULT_BUDGET,
            valuation_budget: DEFAULT_VALUATION_BUDGET,
            full_implication: false,
            designated: None,
            designated_worlds_only: false,
            seed: DEFAULT_SEED,
            random_formulas: 500,
        }
    }
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

/// Budgets from `MVRED_BUDGET`: `N` for both, or `clauses=N,valuations=M`.
pub fn budget_override(text: &str) -> std::result::Result<(Option<usize>, Option<usize>), String> {
    let text = text.trim();
    if let Ok(n) = text.parse::<usize>() {
        return Ok((Some(n), Some(n)));
    }
    let (mut clauses, mut valuations) = (None, None);
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("bad budget entry `{part}`"))?;
        let n: usize = v.trim().parse().map_err(|_| format!("bad budget value `{v}`"))?;
        match k.trim() {
            "clauses" => clauses = Some(n),
            "valuations" => valuations = Some(n),
            other => return Err(format!("unknown budget `{other}`")),
        }
    }
    Ok((clauses, valuations))
}

fn usage(message: impl Into<String>) -> Error {
    Error::parse(0, 0, message)
}

fn budgets(cli: &Cli) -> Result<(usize, usize)> {
    let mut clauses = cli.clause_budget.unwrap_or(crate::modal_unary::DEFAULT_BUDGET);
    let mut valuations = cli.valuation_budget.unwrap_or(DEFAULT_VALUATION_BUDGET);
    if let Ok(text) = std::env::var("MVRED_BUDGET") {
        let (c, v) = budget_override(&text).map_err(|m| usage(format!("MVRED_BUDGET: {m}")))?;
        clauses = c.unwrap_or(clauses);
        valuations = v.unwrap_or(valuations);
    }
    if clauses == 0 || valuations == 0 {
        return Err(usage("budgets must be positive"));
    }
    Ok((clauses, valuations))
}

fn lattice_override(cli: &Cli) -> Result<Option<(String, Arc<LatticeSpec>)>> {
    match &cli.lattice {
        None => Ok(None),
        Some(text) => {
            let sel: LatticeSelector = text.parse()?;
            Ok(Some((sel.to_string(), Arc::new(sel.load(None)?))))
        }
    }
}

/// Parses a program file, honouring a lattice override.
pub fn load_program(path: &Path, lattice: Option<(String, Arc<LatticeSpec>)>) -> Result<Program> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    parse_program_with(
        &text,
        ParseOptions {
            base_dir: path.parent(),
            lattice,
        },
    )
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let (clause_budget, valuation_budget) = budgets(cli)?;
    let lattice = lattice_override(cli)?;
    match &cli.command {
        Command::Model { file } => {
            let p = load_program(file, lattice)?;
            let i = compute_model(&p)?;
            if cli.json {
                writeln!(out, "{}", pretty(&i.to_json()))?;
            } else {
                write!(out, "{i}")?;
            }
        }
        Command::Transform {
            file,
            mode,
            disjunctive_bodies,
        } => {
            let p = load_program(file, lattice)?;
            match mode {
                TransformMode::Unary => {
                    let opts = UnaryOptions {
                        budget: clause_budget,
                        disjunctive_bodies: *disjunctive_bodies,
                    };
                    let m = transform_unary_with(&p, opts)?;
                    if cli.json {
                        writeln!(out, "{}", pretty(&m.to_json()))?;
                    } else {
                        write!(out, "{m}")?;
                    }
                }
                TransformMode::Flatten => {
                    let i = compute_model(&p)?;
                    let f = flatten_program(&p, &reflect(&p, &i))?;
                    if cli.json {
                        writeln!(out, "{}", pretty(&f.to_json()))?;
                    } else {
                        write!(out, "{f}")?;
                    }
                }
            }
        }
        Command::Check {
            file,
            formula,
            world,
            mode,
            model,
        } => {
            let p = load_program(file, lattice)?;
            let phi = parse_formula(formula, &p.lattice)?;
            let mode = mode.unwrap_or_else(|| guess_mode(&phi));
            let built = Built::new(&p, mode, model, valuation_budget)?;
            let extent = built.extent(&phi)?;
            let holds = match world {
                Some(w) => extent.contains(built.world(w)?),
                None => extent.is_full(),
            };
            if cli.json {
                let doc = json!({
                    "formula": formula,
                    "mode": format!("{mode:?}").to_lowercase(),
                    "world": world,
                    "holds": holds,
                    "extent": extent.iter().map(|w| built.world_name(w)).collect::<Vec<_>>(),
                });
                writeln!(out, "{}", pretty(&doc))?;
            } else {
                writeln!(out, "{holds}")?;
            }
        }
        Command::Verify {
            files,
            suite,
            seed,
            model,
        } => {
            let cfg = VerifyConfig {
                clause_budget,
                valuation_budget,
                full_implication: model.full_implication,
                designated: model.designated.clone(),
                designated_worlds_only: model.designated_worlds_only,
                seed: *seed,
                ..VerifyConfig::default()
            };
            let programs = collect_programs(files, &lattice)?;
            let mut all = Vec::new();
            let mut pass = true;
            for (name, program) in &programs {
                for v in verify_program(program, *suite, &cfg)? {
                    pass &= v.pass();
                    let mut obj = serde_json::to_value(&v).expect("verdicts serialize");
                    if let Value::Object(m) = &mut obj {
                        m.insert("program".into(), Value::String(name.clone()));
                    }
                    all.push(obj);
                }
            }
            writeln!(out, "{}", pretty(&Value::Array(all)))?;
            return Ok(if pass { EXIT_OK } else { EXIT_FAIL });
        }
        Command::Lattice => {
            let l = match lattice {
                Some((_, l)) => l,
                None => Arc::new(crate::lattice::builtin_lattice(&LatticeSelector::Belnap4)?),
            };
            let violations = check_lattice(&l);
            if cli.json {
                let names: Vec<&str> = l.values().map(|v| l.name_of(v)).collect();
                let doc = json!({
                    "name": l.name(),
                    "elements": names,
                    "bottom": l.name_of(l.bottom()),
                    "top": l.name_of(l.top()),
                    "extras": l.extras().keys().collect::<Vec<_>>(),
                    "violations": violations,
                });
                writeln!(out, "{}", pretty(&doc))?;
            } else {
                writeln!(out, "{l}")?;
                if violations.is_empty() {
                    writeln!(out, "% all lattice axioms hold")?;
                }
                for v in &violations {
                    writeln!(out, "% violated: {}", v.message)?;
                }
            }
            return Ok(if violations.is_empty() { EXIT_OK } else { EXIT_FAIL });
        }
        Command::Kripke { file, mode, model } => {
            let p = load_program(file, lattice)?;
            let built = Built::new(&p, *mode, model, valuation_budget)?;
            writeln!(out, "{}", pretty(&built.kripke_json()))?;
        }
    }
    Ok(EXIT_OK)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

/// Expands directories into their `.mv` files, sorted; no paths means the
/// bundled corpus.
fn collect_programs(
    paths: &[PathBuf],
    lattice: &Option<(String, Arc<LatticeSpec>)>,
) -> Result<Vec<(String, Program)>> {
    let mut out = Vec::new();
    if paths.is_empty() {
        for (name, text) in crate::corpus::CORPUS {
            let p = parse_program_with(
                text,
                ParseOptions {
                    base_dir: None,
                    lattice: lattice.clone(),
                },
            )?;
            out.push((name.to_string(), p));
        }
        return Ok(out);
    }
    for path in paths {
        if path.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(path)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "mv"))
                .collect();
            files.sort();
            for f in files {
                out.push((f.display().to_string(), load_program(&f, lattice.clone())?));
            }
        } else {
            out.push((path.display().to_string(), load_program(path, lattice.clone())?));
        }
    }
    Ok(out)
}

fn guess_mode(phi: &ModalFormula) -> ModelMode {
    fn visit(phi: &ModalFormula, found: &mut Vec<ModelMode>) {
        use ModalFormula::*;
        match phi {
            BoxGamma(_) => found.push(ModelMode::Suszko),
            DiaD(_) => found.push(ModelMode::Matrix),
            Flat(_) | Encap(_) => found.push(ModelMode::Flat),
            NegA(x) | Dia(x) => {
                found.push(ModelMode::Flat);
                visit(x, found);
            }
            AndA(x, y) | OrA(x, y) | ImpliedByA(x, y) => {
                found.push(ModelMode::Flat);
                visit(x, found);
                visit(y, found);
            }
            Not(x) => visit(x, found),
            And(x, y) | Or(x, y) | Implies(x, y) => {
                visit(x, found);
                visit(y, found);
            }
            Plain(_) | Modal(..) => {}
        }
    }
    let mut found = Vec::new();
    visit(phi, &mut found);
    found.first().copied().unwrap_or(ModelMode::Unary)
}

fn default_matrix(l: &Arc<LatticeSpec>, designated: &Option<String>) -> Result<Matrix> {
    match designated {
        Some(d) => Matrix::parse(l.clone(), d),
        None => Matrix::new(l.clone(), [l.top()]),
    }
}

/// One of the four Kripke models, built for `check` and `kripke`.
enum Built {
    Unary(crate::modal_unary::UnaryModel),
    Flat(crate::modal_flatten::FlatModel),
    Suszko(SuszkoModel),
    Matrix(MatrixModel),
}

impl Built {
    fn new(p: &Program, mode: ModelMode, flags: &ModelFlags, valuation_budget: usize) -> Result<Self> {
        Ok(match mode {
            ModelMode::Unary => Built::Unary(build_kripke_unary(p, &compute_model(p)?)),
            ModelMode::Flat => Built::Flat(build_kripke_flat(p, &compute_model(p)?, flags.full_implication)),
            ModelMode::Suszko => {
                let matrix = flags
                    .designated
                    .as_ref()
                    .map(|d| Matrix::parse(p.lattice.clone(), d))
                    .transpose()?;
                Built::Suszko(SuszkoModel::from_program(p, matrix, valuation_budget)?)
            }
            ModelMode::Matrix => {
                let m = default_matrix(&p.lattice, &flags.designated)?;
                Built::Matrix(MatrixModel::new(m, &compute_model(p)?, flags.designated_worlds_only))
            }
        })
    }

    fn kripke(&self) -> &crate::kripke::KripkeModel {
        match self {
            Built::Unary(m) => &m.kripke,
            Built::Flat(m) => &m.kripke,
            Built::Suszko(m) => &m.kripke,
            Built::Matrix(m) => &m.kripke,
        }
    }

    fn extent(&self, phi: &ModalFormula) -> Result<Extent> {
        match self {
            Built::Unary(m) => m.extent(phi),
            Built::Flat(m) => m.extent(phi),
            Built::Suszko(m) => m.extent(phi),
            Built::Matrix(m) => m.extent(phi),
        }
    }

    fn world_name(&self, w: usize) -> String {
        self.kripke().worlds.name(w)
    }

    /// A world by element name, by valuation description, or by index.
    fn world(&self, text: &str) -> Result<usize> {
        let text = text.trim();
        match &self.kripke().worlds {
            crate::kripke::Worlds::Values(l) => {
                l.value(text).map(|v| v.index()).ok_or_else(|| Error::UnknownWorld(text.into()))
            }
            crate::kripke::Worlds::Valuations(space) => {
                if let Ok(i) = text.parse::<usize>() {
                    return if i < space.size() { Ok(i) } else { Err(Error::UnknownWorld(text.into())) };
                }
                let wanted: String = text.chars().filter(|c| !c.is_whitespace()).collect();
                (0..space.size())
                    .find(|&i| space.describe(i).chars().filter(|c| !c.is_whitespace()).collect::<String>() == wanted)
                    .ok_or_else(|| Error::UnknownWorld(text.into()))
            }
        }
    }

    fn kripke_json(&self) -> Value {
        self.kripke().to_json()
    }
}

/// At most `k` atoms of the base, for the exhaustive suites.
fn first_atoms(base: &[Atom], k: usize) -> Vec<Atom> {
    base.iter().take(k).cloned().collect()
}

/// Runs one suite (or all of them) on a program. Under `All`, a suite that
/// would exceed a budget is reported as skipped; run alone, it is an error.
pub fn verify_program(program: &Program, suite: SuiteName, cfg: &VerifyConfig) -> Result<Vec<Verdict>> {
    let interp = compute_model(program)?;
    let names: Vec<SuiteName> = if suite == SuiteName::All { SuiteName::EACH.to_vec() } else { vec![suite] };
    let mut out = Vec::new();
    for s in names {
        match run_suite(program, &interp, s, cfg) {
            Ok(vs) => out.extend(vs),
            Err(e @ Error::BudgetExceeded { .. }) if suite == SuiteName::All => {
                out.push(Verdict::Skipped(Skipped {
                    skipped: s.label().to_string(),
                    reason: e.to_string(),
                }));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn run_suite(program: &Program, interp: &Interpretation, suite: SuiteName, cfg: &VerifyConfig) -> Result<Vec<Verdict>> {
    let l = &program.lattice;
    let base: Vec<Atom> = interp.atoms().cloned().collect();
    let checks = |v: Vec<CheckVerdict>| v.into_iter().map(Verdict::from).collect();
    Ok(match suite {
        SuiteName::LatticeAxioms => {
            let violations = check_lattice(l);
            let mut v = CheckVerdict::new("lattice-axioms");
            v.record(violations.is_empty(), || violations[0].message.clone());
            vec![v.into()]
        }
        SuiteName::Invariance => {
            let opts = UnaryOptions {
                budget: cfg.clause_budget,
                disjunctive_bodies: false,
            };
            checks(verify_invariance_with(program, interp, opts)?)
        }
        SuiteName::Twovalued => {
            let m = build_kripke_unary(program, interp);
            checks(verify_two_valued(&m, &base, cfg.random_formulas, 4, cfg.seed)?)
        }
        SuiteName::Flatten => checks(verify_flat(program, interp, cfg.full_implication, cfg.random_formulas, cfg.seed)?),
        SuiteName::Corollary => vec![verify_corollary(program, interp)?.into()],
        SuiteName::Suszko => {
            let model = SuszkoModel::from_program(program, None, cfg.valuation_budget)?;
            let suite = if model.space().size() <= 4096 {
                thesis_suite(&first_atoms(&base, 3), l, 2, 1)
            } else {
                thesis_suite(&first_atoms(&base, 2), l, 1, 0)
            };
            vec![verify_suszko(&model, &suite, cfg.valuation_budget)?.into()]
        }
        SuiteName::Matrix => {
            let matrix = default_matrix(l, &cfg.designated)?;
            let model = MatrixModel::new(matrix, interp, cfg.designated_worlds_only);
            let suite = enumerate_formulas(&first_atoms(&base, 3), l, 2, true);
            vec![verify_matrix(&model, interp, &suite)?.into()]
        }
        SuiteName::All => unreachable!("expanded by verify_program"),
    })
}

/// The valuation space a Suszko check over `program` would enumerate.
pub fn valuation_space(program: &Program) -> Result<ValuationSpace> {
    ValuationSpace::of_program(program)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["mvred"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn corpus(name: &str) -> String {
        format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    #[test]
    fn budget_env_syntax() {
        assert_eq!(budget_override("12"), Ok((Some(12), Some(12))));
        assert_eq!(budget_override("clauses=5, valuations=7"), Ok((Some(5), Some(7))));
        assert_eq!(budget_override("valuations=7"), Ok((None, Some(7))));
        assert!(budget_override("clauses=x").is_err());
        assert!(budget_override("depth=3").is_err());
    }

    #[test]
    fn model_text() {
        let (code, out, _) = run_str(&["model", &corpus("single_fact.mv")]);
        assert_eq!(code, 0);
        assert_eq!(out, "p = top\n");
    }

    #[test]
    fn transform_listing() {
        let (code, out, _) = run_str(&["transform", &corpus("single_fact.mv"), "--mode", "unary"]);
        assert_eq!((code, out.as_str()), (0, "[top]p.\n"));
        let (code, out, _) = run_str(&["transform", &corpus("single_fact.mv"), "--mode", "flatten"]);
        assert_eq!((code, out.as_str()), (0, "p_F(top).\n"));
    }

    #[test]
    fn check_prints_a_boolean() {
        let f = corpus("paraconsistency.mv");
        let (code, out, _) = run_str(&["check", &f, "--formula", "[top] p(a)", "--world", "t"]);
        assert_eq!((code, out.as_str()), (0, "true\n"));
        let (_, out, _) = run_str(&["check", &f, "--formula", "[t] p(a)"]);
        assert_eq!(out, "false\n");
        let (_, out, _) = run_str(&["check", &f, "--formula", "dia E(p(a))"]);
        assert_eq!(out, "true\n");
    }

    #[test]
    fn exit_codes() {
        let (code, _, err) = run_str(&["model", "/nonexistent.mv"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.starts_with("error:"));
        let (code, _, _) = run_str(&["frobnicate"]);
        assert_eq!(code, EXIT_USAGE);
        let f = corpus("belnap_sample.mv");
        let (code, _, err) = run_str(&["transform", &f, "--clause-budget", "2"]);
        assert_eq!(code, EXIT_BUDGET, "{err}");
        let (code, out, _) = run_str(&["verify", &f, "--suite", "all", "--clause-budget", "2"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("\"skipped\": \"invariance\""));
        let (code, _, _) = run_str(&["verify", &f, "--suite", "invariance", "--clause-budget", "2"]);
        assert_eq!(code, EXIT_BUDGET);
    }

    #[test]
    fn verify_reports_json() {
        let (code, out, _) = run_str(&["verify", &corpus("single_fact.mv"), "--suite", "corollary"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v[0]["check"], "corollary");
        assert_eq!(v[0]["pass"], true);
    }

    #[test]
    fn lattice_listing() {
        let (code, out, _) = run_str(&["lattice", "--lattice", "fuzzy:3", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["elements"], json!(["0", "0.5", "1"]));
        assert_eq!(v["violations"], json!([]));
    }

    #[test]
    fn mode_guessing() {
        let l = crate::lattice::builtin_lattice(&LatticeSelector::Belnap4).unwrap();
        let g = |s: &str| guess_mode(&parse_formula(s, &l).unwrap());
        assert_eq!(g("[t] p"), ModelMode::Unary);
        assert_eq!(g("not dia E(p)"), ModelMode::Flat);
        assert_eq!(g("box_gamma (p <- @t)"), ModelMode::Suszko);
        assert_eq!(g("dia_d p and [t] p"), ModelMode::Matrix);
    }
}
