//! Exact pseudo-polynomial dynamic program for the maximum generalized
//! assignment problem with a constant number of bins.
//!
//! The table is indexed by `(item prefix, remaining capacity per bin)` and
//! solves `P[i, c1..ck] = max(P[i-1, c1..ck], max_j p_ij + P[i-1, .., c_j - s_ij, ..])`.
//! Leaving an item unassigned is always allowed. Infeasible item/bin pairs
//! are encoded explicitly rather than with a sentinel magnitude.

use std::env;

use thiserror::Error;

/// Per-item data: one size and profit per bin; `None` marks an infeasible
/// pair (the item cannot go into that bin at any capacity).
#[derive(Debug, Clone)]
pub struct GapItem {
    pub sizes: Vec<Option<u64>>,
    pub profits: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct GapInstance {
    pub capacities: Vec<u64>,
    pub items: Vec<GapItem>,
}

impl GapInstance {
    pub fn new(capacities: Vec<u64>) -> Self {
        Self {
            capacities,
            items: Vec::new(),
        }
    }

    /// Adds an item given `(size, profit)` per bin; `None` = infeasible.
    pub fn push_item(&mut self, per_bin: Vec<Option<(u64, u64)>>) {
        assert_eq!(per_bin.len(), self.capacities.len());
        let sizes = per_bin.iter().map(|e| e.map(|(s, _)| s)).collect();
        let profits = per_bin
            .iter()
            .map(|e| e.map(|(_, p)| p).unwrap_or(0))
            .collect();
        self.items.push(GapItem { sizes, profits });
    }

    pub fn bins(&self) -> usize {
        self.capacities.len()
    }
}

/// A witness assignment: chosen bin per item (or none) plus the profit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub bins: Vec<Option<usize>>,
    pub profit: u64,
}

impl Assignment {
    pub fn assigned_to(&self, bin: usize) -> Vec<usize> {
        self.bins
            .iter()
            .enumerate()
            .filter(|(_, b)| **b == Some(bin))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn unassigned(&self) -> Vec<usize> {
        self.bins
            .iter()
            .enumerate()
            .filter(|(_, b)| b.is_none())
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GapError {
    #[error("DP table needs {required} cells, budget is {budget}")]
    TableBudget { required: u128, budget: u128 },
    #[error("{0}")]
    Param(String),
}

/// Default cap on `n * prod(C_j + 1)` DP cells; override with the
/// `GSPKIT_TABLE_BUDGET` environment variable.
pub const DEFAULT_TABLE_BUDGET: u128 = 40_000_000;

pub fn table_budget() -> u128 {
    env::var("GSPKIT_TABLE_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_TABLE_BUDGET)
}

/// Maximum number of bins the DP accepts; the capacity tuple is flattened
/// into a mixed-radix index.
pub const MAX_BINS: usize = 8;

fn cells_required(instance: &GapInstance) -> u128 {
    let states: u128 = instance.capacities.iter().map(|&c| c as u128 + 1).product();
    states.saturating_mul(instance.items.len().max(1) as u128)
}

/// Solves GAP exactly. The profit-maximal assignment is reconstructed from
/// a per-layer decision log; ties prefer leaving the item unassigned, then
/// the lowest bin index, so witnesses are canonical.
pub fn solve_exact(instance: &GapInstance) -> Result<Assignment, GapError> {
    solve_exact_with_budget(instance, table_budget())
}

pub fn solve_exact_with_budget(
    instance: &GapInstance,
    budget: u128,
) -> Result<Assignment, GapError> {
    let k = instance.bins();
    if k == 0 {
        return Err(GapError::Param("need at least one bin".into()));
    }
    if k > MAX_BINS {
        return Err(GapError::Param(format!(
            "at most {MAX_BINS} bins supported, got {k}"
        )));
    }
    let required = cells_required(instance);
    if required > budget {
        return Err(GapError::TableBudget { required, budget });
    }

    let n = instance.items.len();
    // Mixed-radix layout of the capacity tuple: stride[j] multiplies c_j.
    let mut stride = vec![1usize; k];
    for j in 1..k {
        stride[j] = stride[j - 1] * (instance.capacities[j - 1] as usize + 1);
    }
    let states = stride[k - 1] * (instance.capacities[k - 1] as usize + 1);

    let mut prev = vec![0u64; states];
    let mut next = vec![0u64; states];
    // decisions[i][state]: 0 = unassigned, 1 + j = placed in bin j.
    let mut decisions: Vec<Vec<u8>> = Vec::with_capacity(n);

    for item in &instance.items {
        let mut layer = vec![0u8; states];
        for state in 0..states {
            let mut best = prev[state];
            let mut choice = 0u8;
            for (j, maybe_size) in item.sizes.iter().enumerate() {
                let Some(size) = *maybe_size else { continue };
                let cap_j = (state / stride[j]) % (instance.capacities[j] as usize + 1);
                if (size as usize) > cap_j {
                    continue;
                }
                let reduced = state - size as usize * stride[j];
                let candidate = item.profits[j] + prev[reduced];
                if candidate > best {
                    best = candidate;
                    choice = 1 + j as u8;
                }
            }
            next[state] = best;
            layer[state] = choice;
        }
        decisions.push(layer);
        std::mem::swap(&mut prev, &mut next);
    }

    // Backtrack from the full-capacity state.
    let mut bins = vec![None; n];
    let mut state = states - 1;
    for i in (0..n).rev() {
        let choice = decisions[i][state];
        if choice > 0 {
            let j = (choice - 1) as usize;
            bins[i] = Some(j);
            let size = instance.items[i].sizes[j].expect("logged decision must be feasible");
            state -= size as usize * stride[j];
        }
    }
    let profit = prev[states - 1];
    Ok(Assignment { bins, profit })
}

/// Solves GAP after floor-scaling capacities into the table budget: sizes
/// round up, capacities round down, so any returned assignment is feasible
/// at the original capacities. When no scaling triggers the result is the
/// exact optimum.
pub fn solve_scaled(instance: &GapInstance) -> Result<Assignment, GapError> {
    solve_scaled_with_budget(instance, table_budget())
}

pub fn solve_scaled_with_budget(
    instance: &GapInstance,
    budget: u128,
) -> Result<Assignment, GapError> {
    let mut lambda: u64 = 1;
    loop {
        let scaled = scale_instance(instance, lambda);
        if cells_required(&scaled) <= budget {
            let assignment = solve_exact_with_budget(&scaled, budget)?;
            debug_assert!(respects_capacities(instance, &assignment));
            return Ok(assignment);
        }
        lambda = lambda
            .checked_mul(2)
            .ok_or_else(|| GapError::Param("capacities too large to scale".into()))?;
    }
}

fn scale_instance(instance: &GapInstance, lambda: u64) -> GapInstance {
    if lambda == 1 {
        return instance.clone();
    }
    let capacities = instance.capacities.iter().map(|&c| c / lambda).collect();
    let items = instance
        .items
        .iter()
        .map(|item| GapItem {
            sizes: item
                .sizes
                .iter()
                .map(|s| s.map(|s| s.div_ceil(lambda)))
                .collect(),
            profits: item.profits.clone(),
        })
        .collect();
    GapInstance { capacities, items }
}

/// True when the assignment fits the (unscaled) capacities.
pub fn respects_capacities(instance: &GapInstance, assignment: &Assignment) -> bool {
    let k = instance.bins();
    let mut load = vec![0u128; k];
    for (i, bin) in assignment.bins.iter().enumerate() {
        if let Some(j) = bin {
            match instance.items[i].sizes[*j] {
                Some(s) => load[*j] += s as u128,
                None => return false,
            }
        }
    }
    load.iter()
        .zip(&instance.capacities)
        .all(|(l, c)| *l <= *c as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(capacities: Vec<u64>, items: &[(u64, u64)]) -> GapInstance {
        // Same size/profit in every bin.
        let mut g = GapInstance::new(capacities);
        let bins = g.bins();
        for &(s, p) in items {
            g.push_item(vec![Some((s, p)); bins]);
        }
        g
    }

    /// Brute force over all (k+1)^n assignments.
    pub fn brute_force(instance: &GapInstance) -> u64 {
        let n = instance.items.len();
        let k = instance.bins();
        let mut best = 0;
        let mut choice = vec![0usize; n]; // 0 = unassigned, 1+j = bin j
        loop {
            let mut load = vec![0u128; k];
            let mut profit = 0u64;
            let mut ok = true;
            for (i, &c) in choice.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let j = c - 1;
                match instance.items[i].sizes[j] {
                    Some(s) => {
                        load[j] += s as u128;
                        profit += instance.items[i].profits[j];
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok
                && load
                    .iter()
                    .zip(&instance.capacities)
                    .all(|(l, c)| *l <= *c as u128)
            {
                best = best.max(profit);
            }
            // next assignment vector
            let mut pos = 0;
            loop {
                if pos == n {
                    return best;
                }
                choice[pos] += 1;
                if choice[pos] <= k {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn empty_instance_has_zero_profit() {
        let g = GapInstance::new(vec![5]);
        let a = solve_exact(&g).unwrap();
        assert_eq!(a.profit, 0);
        assert!(a.bins.is_empty());
    }

    #[test]
    fn two_bins_three_items() {
        // bins (3,3); three items of size 2, profit 1 everywhere: only one
        // item fits per bin, so the optimum is 2 (verified by brute force).
        let g = uniform(vec![3, 3], &[(2, 1), (2, 1), (2, 1)]);
        let a = solve_exact(&g).unwrap();
        assert_eq!(a.profit, 2);
        assert_eq!(a.profit, brute_force(&g));
    }

    #[test]
    fn single_bin_prefers_better_item() {
        let g = uniform(vec![5], &[(3, 2), (3, 3)]);
        let a = solve_exact(&g).unwrap();
        assert_eq!(a.profit, 3);
        assert_eq!(a.bins, vec![None, Some(0)]);
    }

    #[test]
    fn all_infeasible_items_stay_unassigned() {
        let mut g = GapInstance::new(vec![4, 4]);
        g.push_item(vec![None, None]);
        g.push_item(vec![None, None]);
        let a = solve_scaled(&g).unwrap();
        assert_eq!(a.profit, 0);
        assert_eq!(a.unassigned(), vec![0, 1]);
    }

    #[test]
    fn budget_error_reports_required_cells() {
        let g = uniform(vec![1000, 1000, 1000], &[(1, 1); 4]);
        match solve_exact_with_budget(&g, 1000) {
            Err(GapError::TableBudget {
                required,
                budget: 1000,
            }) => {
                assert_eq!(required, 4 * 1001u128.pow(3));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn scaled_solution_feasible_at_original_capacities() {
        let mut g = GapInstance::new(vec![1_000_000]);
        for s in [300_000u64, 300_001, 399_999, 500_000] {
            g.push_item(vec![Some((s, s))]);
        }
        let a = solve_scaled_with_budget(&g, 5_000).unwrap();
        assert!(respects_capacities(&g, &a));
        assert!(a.profit > 0);
    }

    #[test]
    fn scaling_is_identity_when_within_budget() {
        let g = uniform(vec![10, 10], &[(4, 7), (5, 2), (6, 6)]);
        let exact = solve_exact(&g).unwrap();
        let scaled = solve_scaled(&g).unwrap();
        assert_eq!(exact, scaled);
    }

    #[test]
    fn tie_break_prefers_unassigned_then_lowest_bin() {
        // Zero-profit item: assigning gains nothing, so it stays out.
        let g = uniform(vec![5, 5], &[(2, 0)]);
        let a = solve_exact(&g).unwrap();
        assert_eq!(a.bins, vec![None]);
        // Equal profit in both bins: lowest bin index wins.
        let g = uniform(vec![5, 5], &[(2, 3)]);
        let a = solve_exact(&g).unwrap();
        assert_eq!(a.bins, vec![Some(0)]);
    }

    #[test]
    fn matches_brute_force_on_small_fuzz() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let k = rng.gen_range(1..=3);
            let n = rng.gen_range(0..=6);
            let capacities: Vec<u64> = (0..k).map(|_| rng.gen_range(0..=10)).collect();
            let mut g = GapInstance::new(capacities);
            for _ in 0..n {
                let per_bin: Vec<Option<(u64, u64)>> = (0..k)
                    .map(|_| {
                        if rng.gen_bool(0.15) {
                            None
                        } else {
                            Some((rng.gen_range(0..=8), rng.gen_range(0..=9)))
                        }
                    })
                    .collect();
                g.push_item(per_bin);
            }
            let a = solve_exact(&g).unwrap();
            assert_eq!(a.profit, brute_force(&g));
            assert!(respects_capacities(&g, &a));
        }
    }

    #[test]
    fn adding_a_bin_never_hurts() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=6);
            let items: Vec<(u64, u64)> = (0..n)
                .map(|_| (rng.gen_range(1..=6), rng.gen_range(1..=9)))
                .collect();
            let base = uniform(vec![8], &items);
            let wider = uniform(vec![8, rng.gen_range(0..=8)], &items);
            let a = solve_exact(&base).unwrap();
            let b = solve_exact(&wider).unwrap();
            assert!(b.profit >= a.profit);
        }
    }
}
