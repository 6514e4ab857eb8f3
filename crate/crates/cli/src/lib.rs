//! Command implementations behind the `gspkit` binary.
//!
//! Each command returns a [`CmdError`] mapping onto the fixed exit codes:
//! 0 success, 1 verification negative, 2 usage or parse problem, 3 internal
//! invariant breach (a solver emitted something its own verifier rejects,
//! which is a bug, never an input problem).

pub mod bench;
pub mod render;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gspkit::containers::ContainerLayout;
use gspkit::generators::{
    partition_instance, planted_flushed, planted_nice, random_instance, random_partition_values,
    PlantedParams, RandomParams, Skew,
};
use gspkit::guillotine::{check_separable, stage_count, GuillotineError};
use gspkit::model::{frac, verify_packing, Frac, Instance};
use gspkit::solvers::{
    exact_oracle, solution_from_text, solution_to_text, solve_nfdh, solve_portfolio, solve_pptas,
    solve_three_halves, SolveBudgets, SolveError, SolveResult, DEFAULT_ORACLE_LIMIT,
};

#[derive(Debug)]
pub enum CmdError {
    Verification(String),
    Usage(String),
    Internal(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Verification(_) => 1,
            CmdError::Usage(_) => 2,
            CmdError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmdError::Verification(msg) => write!(f, "{msg}"),
            CmdError::Usage(msg) => write!(f, "{msg}"),
            CmdError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

pub type CmdResult = Result<(), CmdError>;

fn usage(msg: impl fmt::Display) -> CmdError {
    CmdError::Usage(msg.to_string())
}

fn read_file(path: &Path) -> Result<String, CmdError> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CmdError> {
    fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, CmdError> {
    let text = read_file(path)?;
    Instance::from_text(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Nfdh,
    Pptas,
    ThreeHalves,
    Portfolio,
    Oracle,
}

impl Algorithm {
    pub fn parse(s: &str) -> Result<Self, CmdError> {
        match s {
            "nfdh" => Ok(Algorithm::Nfdh),
            "pptas" => Ok(Algorithm::Pptas),
            "three-halves" => Ok(Algorithm::ThreeHalves),
            "portfolio" => Ok(Algorithm::Portfolio),
            "oracle" => Ok(Algorithm::Oracle),
            other => Err(usage(format!("unknown algorithm `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Nfdh => "nfdh",
            Algorithm::Pptas => "pptas",
            Algorithm::ThreeHalves => "three-halves",
            Algorithm::Portfolio => "portfolio",
            Algorithm::Oracle => "oracle",
        }
    }
}

pub fn parse_eps(s: &str) -> Result<Frac, CmdError> {
    let (p, q) = s
        .split_once('/')
        .and_then(|(p, q)| Some((p.parse::<u64>().ok()?, q.parse::<u64>().ok()?)))
        .ok_or_else(|| usage(format!("epsilon must be `<p>/<q>`, got `{s}`")))?;
    if p == 0 || q == 0 || p >= q {
        return Err(usage(format!(
            "epsilon must be a fraction in (0,1), got `{s}`"
        )));
    }
    Ok(frac(p, q))
}

pub fn run_algorithm(
    instance: &Instance,
    alg: Algorithm,
    eps: Frac,
    budgets: &SolveBudgets,
) -> Result<SolveResult, SolveError> {
    match alg {
        Algorithm::Nfdh => solve_nfdh(instance),
        Algorithm::Pptas => solve_pptas(instance, eps, budgets),
        Algorithm::ThreeHalves => solve_three_halves(instance, eps, budgets),
        Algorithm::Portfolio => solve_portfolio(instance, eps, budgets),
        Algorithm::Oracle => exact_oracle(instance, DEFAULT_ORACLE_LIMIT),
    }
}

pub struct SolveArgs {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub algorithm: Algorithm,
    pub eps: Frac,
    pub budget_containers: u64,
    pub layout: Option<PathBuf>,
}

/// Solves an instance file and writes the solution (placements plus the cut
/// tree that certifies separability).
pub fn cmd_solve(args: &SolveArgs) -> CmdResult {
    let instance = load_instance(&args.input)?;
    let mut budgets = SolveBudgets {
        container_budget: args.budget_containers,
        ..Default::default()
    };
    if let Some(layout_path) = &args.layout {
        let text = read_file(layout_path)?;
        let layout = ContainerLayout::from_text(&text, instance.strip_width)
            .map_err(|e| usage(format!("{}: {e}", layout_path.display())))?;
        budgets.template = Some(layout);
    }
    let started = Instant::now();
    let result =
        run_algorithm(&instance, args.algorithm, args.eps, &budgets).map_err(|e| match e {
            SolveError::OracleLimit { .. } => usage(e.to_string()),
            other => CmdError::Internal(other.to_string()),
        })?;
    let elapsed = started.elapsed();
    if let Some(out) = &args.output {
        write_file(
            out,
            &solution_to_text(&result.packing, Some(&result.cut_tree)),
        )?;
    }
    println!(
        "height {}  lower-bound {}  ratio {:.4}  time {:.1}ms",
        result.height,
        result.lower_bound,
        frac_to_f64(result.ratio),
        elapsed.as_secs_f64() * 1e3,
    );
    if result.trace.fallback {
        println!("note: pipeline fell back to NFDH");
    }
    Ok(())
}

fn frac_to_f64(f: Frac) -> f64 {
    *f.numer() as f64 / (*f.denom() as f64).max(1.0)
}

pub struct VerifyArgs {
    pub instance: PathBuf,
    pub solution: PathBuf,
    pub emit_cuts: bool,
}

/// Exit 0 iff the solution is feasible and guillotine separable; every
/// violation is listed on its own line.
pub fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let instance = load_instance(&args.instance)?;
    let text = read_file(&args.solution)?;
    let (packing, embedded_tree) = solution_from_text(&text, &instance)
        .map_err(|e| usage(format!("{}: {e}", args.solution.display())))?;

    let violations = verify_packing(&instance, &packing);
    if !violations.is_empty() {
        for v in &violations {
            println!("violation: {v}");
        }
        return Err(CmdError::Verification(format!(
            "{} violations",
            violations.len()
        )));
    }
    let tree = match check_separable(&instance, &packing) {
        Ok(tree) => tree,
        Err(GuillotineError::NotSeparable(w)) => {
            println!(
                "violation: no feasible cut in [{},{}]x[{},{}] ({} items)",
                w.region.left,
                w.region.right,
                w.region.bottom,
                w.region.top,
                w.items.len()
            );
            return Err(CmdError::Verification("not guillotine separable".into()));
        }
        Err(other) => return Err(CmdError::Internal(other.to_string())),
    };
    let rects: Vec<_> = packing
        .placements
        .iter()
        .map(|p| {
            let item = &instance.items[p.item_id];
            (
                p.item_id,
                gspkit::guillotine::Rect::new(p.left, p.bottom, p.right(item), p.top(item)),
            )
        })
        .collect();
    if let Some(embedded) = embedded_tree {
        if let Err(why) = gspkit::guillotine::validate_cut_tree(&embedded, &rects) {
            println!("violation: embedded cut tree invalid: {why}");
            return Err(CmdError::Verification("embedded cut tree invalid".into()));
        }
    }
    println!(
        "ok: height {} stages {} ({} with trim)",
        packing.height,
        stage_count(&tree),
        gspkit::guillotine::stage_count_with_trim(&tree, &rects)
    );
    if args.emit_cuts {
        println!("{}", tree.to_text());
    }
    Ok(())
}

pub enum GenerateKind {
    Random {
        n: usize,
        width: u64,
        max_height: u64,
        skew: Skew,
    },
    Partition {
        values: Option<Vec<u64>>,
        n: usize,
        max_value: u64,
    },
    Planted {
        flushed: bool,
    },
}

pub struct GenerateArgs {
    pub kind: GenerateKind,
    pub seed: u64,
    pub output: PathBuf,
    pub certificate: Option<PathBuf>,
}

/// Writes an instance file, plus a certificate for partition and planted
/// kinds. Byte-identical output under the same seed and parameters.
pub fn cmd_generate(args: &GenerateArgs) -> CmdResult {
    match &args.kind {
        GenerateKind::Random {
            n,
            width,
            max_height,
            skew,
        } => {
            let params = RandomParams {
                n: *n,
                strip_width: *width,
                max_height: *max_height,
                skew: *skew,
            };
            let instance = random_instance(&params, args.seed);
            write_file(&args.output, &instance.to_text())?;
            println!("wrote {} ({} items)", args.output.display(), instance.len());
        }
        GenerateKind::Partition {
            values,
            n,
            max_value,
        } => {
            let values = match values {
                Some(v) => v.clone(),
                None => random_partition_values(*n, *max_value, args.seed),
            };
            let (instance, cert) = partition_instance(&values).map_err(usage)?;
            write_file(&args.output, &instance.to_text())?;
            let cert_text = if cert.answer {
                "kind partition\nanswer yes\nopt 2\n".to_string()
            } else {
                "kind partition\nanswer no\n".to_string()
            };
            let cert_path = certificate_path(&args.output, args.certificate.as_deref());
            write_file(&cert_path, &cert_text)?;
            println!(
                "wrote {} and {} (answer {})",
                args.output.display(),
                cert_path.display(),
                if cert.answer { "yes" } else { "no" }
            );
        }
        GenerateKind::Planted { flushed } => {
            let params = PlantedParams::default();
            let planted = if *flushed {
                planted_flushed(&params, args.seed)
            } else {
                planted_nice(&params, args.seed)
            };
            write_file(&args.output, &planted.instance.to_text())?;
            let mut cert_text = format!("kind planted\nopt {}\n", planted.opt);
            cert_text.push_str(&planted.layout.to_text());
            let cert_path = certificate_path(&args.output, args.certificate.as_deref());
            write_file(&cert_path, &cert_text)?;
            println!(
                "wrote {} and {} (opt <= {})",
                args.output.display(),
                cert_path.display(),
                planted.opt
            );
        }
    }
    Ok(())
}

fn certificate_path(output: &Path, explicit: Option<&Path>) -> PathBuf {
    match explicit {
        Some(p) => p.to_path_buf(),
        None => {
            let mut p = output.as_os_str().to_owned();
            p.push(".cert");
            PathBuf::from(p)
        }
    }
}

pub struct RenderArgs {
    pub instance: PathBuf,
    pub solution: PathBuf,
    pub output: PathBuf,
    pub cuts: bool,
}

/// Renders the packing as an SVG: strip outline, labeled item rectangles,
/// and optionally the cut lines colored by stage parity.
pub fn cmd_render(args: &RenderArgs) -> CmdResult {
    let instance = load_instance(&args.instance)?;
    let text = read_file(&args.solution)?;
    let (packing, embedded_tree) = solution_from_text(&text, &instance)
        .map_err(|e| usage(format!("{}: {e}", args.solution.display())))?;
    let violations = verify_packing(&instance, &packing);
    if !violations.is_empty() {
        return Err(usage(format!(
            "solution does not match instance: {}",
            violations[0]
        )));
    }
    let tree = if args.cuts {
        match embedded_tree {
            Some(tree) => Some(tree),
            None => check_separable(&instance, &packing).ok(),
        }
    } else {
        None
    };
    let svg = render::render_svg(&instance, &packing, tree.as_ref());
    write_file(&args.output, &svg)?;
    println!("wrote {}", args.output.display());
    Ok(())
}

pub struct BenchArgs {
    pub corpus: PathBuf,
    pub algorithms: Vec<Algorithm>,
    pub report: PathBuf,
    pub eps: Frac,
    pub budget_containers: u64,
}

pub fn cmd_bench(args: &BenchArgs) -> CmdResult {
    bench::run(args)
}
