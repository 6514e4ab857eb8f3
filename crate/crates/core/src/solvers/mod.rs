//! End-to-end solvers: the exact oracle for tiny instances, the two
//! container pipelines, and the best-of portfolio.
//!
//! Every solver funnels its packing through one finishing step that
//! re-verifies feasibility and guillotine separability before a result is
//! released; a solver can therefore never emit an unchecked packing.

mod oracle;
mod pipeline;

pub use oracle::{exact_oracle, DEFAULT_ORACLE_LIMIT};
pub use pipeline::{solve_pptas, solve_three_halves};

use thiserror::Error;

use crate::containers::ContainerLayout;
use crate::guillotine::{check_separable, CutNode, CutTree, GuillotineError, Rect};
use crate::heuristics::nfdh_strip;
use crate::model::{
    fint, frac, lower_bound, verify_packing, Frac, Instance, ModelError, Packing, Placement,
};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("instance has {n} items, oracle limit is {limit}")]
    OracleLimit { n: usize, limit: usize },
    #[error("internal invariant breach: {0}")]
    Internal(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Guillotine(#[from] GuillotineError),
}

/// Knobs bounding the pipelines' search. The container budget parameterizes
/// the constant calculus; the layout/grid caps bound enumeration.
#[derive(Debug, Clone)]
pub struct SolveBudgets {
    pub container_budget: u64,
    pub max_layouts: usize,
    pub max_opt_candidates: usize,
    /// A layout template to try first, e.g. the certificate of a planted
    /// instance.
    pub template: Option<ContainerLayout>,
}

impl Default for SolveBudgets {
    fn default() -> Self {
        Self {
            container_budget: crate::model::DEFAULT_CONTAINER_BUDGET,
            max_layouts: 16,
            max_opt_candidates: 24,
            template: None,
        }
    }
}

/// What a pipeline did: the accepted OPT guess, the layout it packed into,
/// any top boxes stacked above, and whether it fell back to NFDH.
#[derive(Debug, Clone, Default)]
pub struct PipelineTrace {
    pub algorithm: String,
    pub chosen_opt: Option<u64>,
    pub layout: Option<ContainerLayout>,
    pub top_boxes: Vec<(String, u64)>,
    pub fallback: bool,
    pub budget_exhausted: bool,
    pub notes: Vec<String>,
}

/// A verified solver output.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub packing: Packing,
    pub cut_tree: CutTree,
    pub height: u64,
    pub lower_bound: u64,
    pub ratio: Frac,
    pub trace: PipelineTrace,
}

/// Verifies a packing, certifies separability, and wraps everything into a
/// result. Failures here are bugs in the calling solver, not user errors.
pub(crate) fn finish(
    instance: &Instance,
    packing: Packing,
    tree: Option<CutTree>,
    trace: PipelineTrace,
) -> Result<SolveResult, SolveError> {
    let violations = verify_packing(instance, &packing);
    if !violations.is_empty() {
        return Err(SolveError::Internal(format!(
            "{}: emitted an infeasible packing: {}",
            trace.algorithm, violations[0]
        )));
    }
    let cut_tree = match tree {
        Some(tree) => tree,
        None => check_separable(instance, &packing).map_err(|e| {
            SolveError::Internal(format!(
                "{}: emitted a non-separable packing: {e}",
                trace.algorithm
            ))
        })?,
    };
    let lb = lower_bound(instance);
    let height = packing.height;
    let ratio = if lb == 0 { fint(1) } else { frac(height, lb) };
    Ok(SolveResult {
        packing,
        cut_tree,
        height,
        lower_bound: lb,
        ratio,
        trace,
    })
}

/// NFDH as a standalone solver; the packing ships with its shelf tree.
pub fn solve_nfdh(instance: &Instance) -> Result<SolveResult, SolveError> {
    let (packing, tree) = nfdh_strip(instance);
    let trace = PipelineTrace {
        algorithm: "nfdh".into(),
        ..Default::default()
    };
    finish(instance, packing, Some(tree), trace)
}

/// Runs NFDH, both pipelines, and (for tiny instances) the exact oracle,
/// returning the lowest verified packing. The NFDH entry caps the ratio to
/// the lower bound at 3.
pub fn solve_portfolio(
    instance: &Instance,
    eps: Frac,
    budgets: &SolveBudgets,
) -> Result<SolveResult, SolveError> {
    let mut best = solve_nfdh(instance)?;
    for candidate in [
        solve_pptas(instance, eps, budgets),
        solve_three_halves(instance, eps, budgets),
    ] {
        let candidate = candidate?;
        if candidate.height < best.height {
            best = candidate;
        }
    }
    if instance.len() <= DEFAULT_ORACLE_LIMIT {
        let oracle = exact_oracle(instance, DEFAULT_ORACLE_LIMIT)?;
        if oracle.height < best.height {
            best = oracle;
        }
    }
    let mut trace = best.trace.clone();
    trace
        .notes
        .push(format!("portfolio pick: {}", trace.algorithm));
    trace.algorithm = format!("portfolio[{}]", trace.algorithm);
    Ok(SolveResult { trace, ..best })
}

/// Solution text format: `height <H>`, one `<item_id> <left> <bottom>` line
/// per item, then optionally the cut tree on its own line.
pub fn solution_to_text(packing: &Packing, tree: Option<&CutTree>) -> String {
    let mut out = format!("height {}\n", packing.height);
    for p in &packing.placements {
        out.push_str(&format!("{} {} {}\n", p.item_id, p.left, p.bottom));
    }
    if let Some(tree) = tree {
        out.push_str(&tree.to_text());
        out.push('\n');
    }
    out
}

/// Parses a solution file against its instance. The optional trailing cut
/// tree is parsed over the `[0,W] x [0,H]` region.
pub fn solution_from_text(
    src: &str,
    instance: &Instance,
) -> Result<(Packing, Option<CutTree>), ModelError> {
    let mut lines = src.lines().enumerate().peekable();
    let (ln, first) = lines.next().ok_or_else(|| ModelError::Parse {
        line: 1,
        msg: "empty solution".into(),
    })?;
    let height =
        parse_kv(first, "height").map_err(|msg| ModelError::Parse { line: ln + 1, msg })?;
    let mut placements = Vec::with_capacity(instance.len());
    for _ in 0..instance.len() {
        let (ln, line) = lines.next().ok_or_else(|| ModelError::Parse {
            line: instance.len() + 1,
            msg: format!("expected {} placement lines", instance.len()),
        })?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || ModelError::Parse {
            line: ln + 1,
            msg: format!("expected `<id> <left> <bottom>`, got `{}`", line.trim()),
        };
        if fields.len() != 3 {
            return Err(bad());
        }
        let id: usize = fields[0].parse().map_err(|_| bad())?;
        let left: u64 = fields[1].parse().map_err(|_| bad())?;
        let bottom: u64 = fields[2].parse().map_err(|_| bad())?;
        placements.push(Placement::new(id, left, bottom));
    }
    let packing = Packing::new(placements, height);
    let rest: String = lines.map(|(_, l)| l).collect::<Vec<_>>().join("\n");
    let rest = rest.trim();
    let tree = if rest.is_empty() {
        None
    } else {
        let region = Rect::new(0, 0, instance.strip_width, height);
        Some(CutTree::parse(rest, region).map_err(|e| ModelError::Parse {
            line: instance.len() + 2,
            msg: e.to_string(),
        })?)
    };
    Ok((packing, tree))
}

fn parse_kv(line: &str, key: &str) -> Result<u64, String> {
    let mut fields = line.split_whitespace();
    match (fields.next(), fields.next(), fields.next()) {
        (Some(k), Some(v), None) if k == key => {
            v.parse().map_err(|_| format!("bad {key} value `{v}`"))
        }
        _ => Err(format!("expected `{key} <value>`, got `{}`", line.trim())),
    }
}

pub(crate) fn packing_top(instance: &Instance, placements: &[Placement]) -> u64 {
    placements
        .iter()
        .map(|p| p.top(&instance.items[p.item_id]))
        .max()
        .unwrap_or(0)
}

pub(crate) fn empty_tree(width: u64) -> CutTree {
    CutTree {
        region: Rect::new(0, 0, width, 0),
        node: CutNode::Waste,
    }
}
