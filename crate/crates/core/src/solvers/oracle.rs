//! Exact minimum-height guillotine packing for tiny instances.
//!
//! Memoized recursion over `(item subset, width budget)`: a subset packs
//! either as a single item, as two stacked sub-packings (horizontal split),
//! or as two side-by-side sub-packings (vertical split). Width budgets can
//! be restricted to subset sums of item widths: the occupied extent of any
//! guillotine arrangement composes from sums (side by side) and maxima
//! (stacked) of sub-extents, both of which stay subset sums, so snapping a
//! budget down to the nearest subset sum loses nothing.

use std::collections::HashMap;

use crate::guillotine::{CutNode, CutTree, Rect};
use crate::model::{Instance, Packing, Placement};

use super::{empty_tree, finish, PipelineTrace, SolveError, SolveResult};

pub const DEFAULT_ORACLE_LIMIT: usize = 9;
const HARD_LIMIT: usize = 16;

const INF: u64 = u64::MAX;

#[derive(Debug, Clone, Copy)]
enum Choice {
    Leaf(usize),
    /// Bottom submask of a horizontal split.
    Horizontal(u32),
    /// Left submask and its width for a vertical split.
    Vertical(u32, u64),
}

struct Oracle<'a> {
    items: &'a [crate::model::Item],
    /// Sorted deduplicated subset sums of widths, per mask.
    sums: Vec<Vec<u64>>,
    /// Widest single item per mask.
    max_width: Vec<u64>,
    memo: HashMap<(u32, u64), (u64, Choice)>,
}

impl<'a> Oracle<'a> {
    fn new(items: &'a [crate::model::Item]) -> Self {
        let n = items.len();
        let full = 1usize << n;
        let mut sums: Vec<Vec<u64>> = vec![vec![0]; full];
        let mut max_width = vec![0u64; full];
        for mask in 1..full {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let w = items[low].width;
            let mut merged = Vec::with_capacity(sums[rest].len() * 2);
            merged.extend_from_slice(&sums[rest]);
            merged.extend(sums[rest].iter().map(|s| s + w));
            merged.sort_unstable();
            merged.dedup();
            sums[mask] = merged;
            max_width[mask] = max_width[rest].max(w);
        }
        Self {
            items,
            sums,
            max_width,
            memo: HashMap::new(),
        }
    }

    fn snap(&self, mask: u32, budget: u64) -> u64 {
        let sums = &self.sums[mask as usize];
        match sums.binary_search(&budget) {
            Ok(_) => budget,
            Err(0) => 0,
            Err(pos) => sums[pos - 1],
        }
    }

    fn solve(&mut self, mask: u32, budget: u64) -> u64 {
        let key = self.snap(mask, budget);
        if let Some(&(h, _)) = self.memo.get(&(mask, key)) {
            return h;
        }
        let (h, choice) = self.compute(mask, key);
        self.memo.insert((mask, key), (h, choice));
        h
    }

    fn compute(&mut self, mask: u32, budget: u64) -> (u64, Choice) {
        if mask.count_ones() == 1 {
            let id = mask.trailing_zeros() as usize;
            let h = if self.items[id].width <= budget {
                self.items[id].height
            } else {
                INF
            };
            return (h, Choice::Leaf(id));
        }
        let mut best = INF;
        let mut choice = Choice::Leaf(usize::MAX);
        let low_bit = 1u32 << mask.trailing_zeros();
        // Proper submasks containing the lowest set bit; splits are
        // unordered, so this enumerates each bipartition once.
        let mut sub = (mask - 1) & mask;
        while sub != 0 {
            if sub & low_bit != 0 {
                let rest = mask ^ sub;
                // Horizontal split: parts stack, sharing the full budget.
                if self.max_width[mask as usize] <= budget {
                    let a = self.solve(sub, budget);
                    if a < best {
                        let b = self.solve(rest, budget);
                        let total = a.saturating_add(b);
                        if total < best {
                            best = total;
                            choice = Choice::Horizontal(sub);
                        }
                    }
                }
                // Vertical split: the left part takes a subset-sum width.
                for idx in 0..self.sums[sub as usize].len() {
                    let w_left = self.sums[sub as usize][idx];
                    if w_left < self.max_width[sub as usize] || w_left >= budget {
                        continue;
                    }
                    if budget - w_left < self.max_width[rest as usize] {
                        continue;
                    }
                    let a = self.solve(sub, w_left);
                    if a >= best {
                        continue;
                    }
                    let b = self.solve(rest, budget - w_left);
                    let tall = a.max(b);
                    if tall < best {
                        best = tall;
                        choice = Choice::Vertical(sub, w_left);
                    }
                }
            }
            sub = (sub - 1) & mask;
        }
        (best, choice)
    }

    /// Re-walks the stored choices, emitting placements and the cut tree.
    fn build(&self, mask: u32, budget: u64, region: Rect, out: &mut Vec<Placement>) -> CutTree {
        let key = self.snap(mask, budget);
        let (height, choice) = self.memo[&(mask, key)];
        debug_assert!(height != INF);
        match choice {
            Choice::Leaf(id) => {
                out.push(Placement::new(id, region.left, region.bottom));
                CutTree {
                    region,
                    node: CutNode::Item(id),
                }
            }
            Choice::Horizontal(sub) => {
                let rest = mask ^ sub;
                let h_bottom = self.memo[&(sub, self.snap(sub, key))].0;
                let y = region.bottom + h_bottom;
                let bottom_region = Rect::new(region.left, region.bottom, region.right, y);
                let top_region = Rect::new(region.left, y, region.right, region.top);
                let bottom = self.build(sub, key, bottom_region, out);
                let top = self.build(rest, key, top_region, out);
                CutTree {
                    region,
                    node: CutNode::Horizontal {
                        y,
                        bottom: Box::new(bottom),
                        top: Box::new(top),
                    },
                }
            }
            Choice::Vertical(sub, w_left) => {
                let rest = mask ^ sub;
                let x = region.left + w_left;
                let left_region = Rect::new(region.left, region.bottom, x, region.top);
                let right_region = Rect::new(x, region.bottom, region.right, region.top);
                let left = self.build(sub, w_left, left_region, out);
                let right = self.build(rest, key - w_left, right_region, out);
                CutTree {
                    region,
                    node: CutNode::Vertical {
                        x,
                        left: Box::new(left),
                        right: Box::new(right),
                    },
                }
            }
        }
    }
}

/// Minimum height over all guillotine packings, with a witness packing and
/// cut tree. Exponential in the number of items; refuses instances above
/// `item_limit`.
pub fn exact_oracle(instance: &Instance, item_limit: usize) -> Result<SolveResult, SolveError> {
    let n = instance.len();
    let limit = item_limit.min(HARD_LIMIT);
    if n > limit {
        return Err(SolveError::OracleLimit { n, limit });
    }
    let trace = PipelineTrace {
        algorithm: "oracle".into(),
        ..Default::default()
    };
    if n == 0 {
        let packing = Packing::new(vec![], 0);
        return finish(
            instance,
            packing,
            Some(empty_tree(instance.strip_width)),
            trace,
        );
    }
    let mut oracle = Oracle::new(&instance.items);
    let full = (1u32 << n) - 1;
    let height = oracle.solve(full, instance.strip_width);
    debug_assert!(height != INF, "a valid instance always packs somehow");
    let mut placements = Vec::with_capacity(n);
    let region = Rect::new(0, 0, instance.strip_width, height);
    let tree = oracle.build(full, instance.strip_width, region, &mut placements);
    let packing = Packing::new(placements, height);
    finish(instance, packing, Some(tree), trace)
}
