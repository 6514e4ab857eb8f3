//! Cut trees, exhaustive guillotine-separability checking, and stage
//! analysis.
//!
//! A packing is guillotine separable when a recursive sequence of
//! edge-to-edge axis-parallel cuts isolates every item without slicing
//! through any item interior. The checker recurses over candidate cuts at
//! item edge coordinates; a cut lying between two items can always be slid
//! to an edge without changing feasibility, so edge candidates are complete.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{verify_packing, Instance, Packing, Violation};

/// Closed axis-aligned rectangle `[left, right] x [bottom, top]`; the
/// interiors are what cuts must avoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub left: u64,
    pub bottom: u64,
    pub right: u64,
    pub top: u64,
}

impl Rect {
    pub fn new(left: u64, bottom: u64, right: u64, top: u64) -> Self {
        debug_assert!(left <= right && bottom <= top);
        Self {
            left,
            bottom,
            right,
            top,
        }
    }

    pub fn width(&self) -> u64 {
        self.right - self.left
    }

    pub fn height(&self) -> u64 {
        self.top - self.bottom
    }

    pub fn contains(&self, other: &Rect) -> bool {
        self.left <= other.left
            && self.bottom <= other.bottom
            && self.right >= other.right
            && self.top >= other.top
    }

    /// Open-interior intersection test; shared edges do not intersect.
    pub fn overlaps_open(&self, other: &Rect) -> bool {
        self.left < other.right
            && other.left < self.right
            && self.bottom < other.top
            && other.bottom < self.top
    }
}

/// A node of the recursive cutting sequence. Every node carries the region
/// it covers; the two children of a cut partition it exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutTree {
    pub region: Rect,
    pub node: CutNode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutNode {
    Vertical {
        x: u64,
        left: Box<CutTree>,
        right: Box<CutTree>,
    },
    Horizontal {
        y: u64,
        bottom: Box<CutTree>,
        top: Box<CutTree>,
    },
    Item(usize),
    Waste,
}

/// Witness for a failed separation: a sub-region holding two or more items
/// that admits no feasible cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotSeparable {
    pub region: Rect,
    pub items: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum GuillotineError {
    #[error("packing invalid: {0:?}")]
    InvalidPacking(Vec<Violation>),
    #[error("no feasible cut in [{},{}]x[{},{}] ({} items)",
        .0.region.left, .0.region.right, .0.region.bottom, .0.region.top, .0.items.len())]
    NotSeparable(NotSeparable),
    #[error("cut tree parse error: {0}")]
    Parse(String),
}

/// Checks guillotine separability of a verified packing and returns the
/// canonical cut tree covering `[0,W] x [0,H]`.
pub fn check_separable(instance: &Instance, packing: &Packing) -> Result<CutTree, GuillotineError> {
    let violations = verify_packing(instance, packing);
    if !violations.is_empty() {
        return Err(GuillotineError::InvalidPacking(violations));
    }
    let rects: Vec<(usize, Rect)> = packing
        .placements
        .iter()
        .map(|p| {
            let item = &instance.items[p.item_id];
            (
                p.item_id,
                Rect::new(p.left, p.bottom, p.right(item), p.top(item)),
            )
        })
        .collect();
    let region = Rect::new(0, 0, instance.strip_width, packing.height);
    separate_rects(&rects, region).map_err(GuillotineError::NotSeparable)
}

/// Separability of opaque boxes (containers, pseudo-items) under the same
/// rules as items; used to validate container layouts.
pub fn cuts_separating_boxes(boxes: &[Rect], strip_width: u64) -> Result<CutTree, NotSeparable> {
    let height = boxes.iter().map(|b| b.top).max().unwrap_or(0);
    let rects: Vec<(usize, Rect)> = boxes.iter().copied().enumerate().collect();
    separate_rects(&rects, Rect::new(0, 0, strip_width, height))
}

/// Recursive checker over arbitrary labelled rectangles. Candidate cuts are
/// rectangle edges strictly inside the region, vertical before horizontal,
/// smaller coordinate first, which makes the output tree canonical.
pub fn separate_rects(rects: &[(usize, Rect)], region: Rect) -> Result<CutTree, NotSeparable> {
    let idx: Vec<usize> = (0..rects.len()).collect();
    separate(rects, &idx, region)
}

fn separate(
    rects: &[(usize, Rect)],
    live: &[usize],
    region: Rect,
) -> Result<CutTree, NotSeparable> {
    match live {
        [] => Ok(CutTree {
            region,
            node: CutNode::Waste,
        }),
        [only] => Ok(CutTree {
            region,
            node: CutNode::Item(rects[*only].0),
        }),
        _ => {
            if let Some(x) = first_feasible(rects, live, region.left, region.right, true) {
                let (lo, hi) = split(rects, live, x, true);
                let left = separate(
                    rects,
                    &lo,
                    Rect::new(region.left, region.bottom, x, region.top),
                )?;
                let right = separate(
                    rects,
                    &hi,
                    Rect::new(x, region.bottom, region.right, region.top),
                )?;
                return Ok(CutTree {
                    region,
                    node: CutNode::Vertical {
                        x,
                        left: Box::new(left),
                        right: Box::new(right),
                    },
                });
            }
            if let Some(y) = first_feasible(rects, live, region.bottom, region.top, false) {
                let (lo, hi) = split(rects, live, y, false);
                let bottom = separate(
                    rects,
                    &lo,
                    Rect::new(region.left, region.bottom, region.right, y),
                )?;
                let top = separate(
                    rects,
                    &hi,
                    Rect::new(region.left, y, region.right, region.top),
                )?;
                return Ok(CutTree {
                    region,
                    node: CutNode::Horizontal {
                        y,
                        bottom: Box::new(bottom),
                        top: Box::new(top),
                    },
                });
            }
            Err(NotSeparable {
                region,
                items: live.iter().map(|&i| rects[i].0).collect(),
            })
        }
    }
}

/// Sweep over the open projections of the live rectangles on one axis and
/// return the smallest edge coordinate inside `(lo, hi)` covered by none.
fn first_feasible(
    rects: &[(usize, Rect)],
    live: &[usize],
    lo: u64,
    hi: u64,
    vertical: bool,
) -> Option<u64> {
    let mut events: Vec<(u64, i32)> = Vec::with_capacity(live.len() * 2);
    for &i in live {
        let r = &rects[i].1;
        let (a, b) = if vertical {
            (r.left, r.right)
        } else {
            (r.bottom, r.top)
        };
        events.push((a, 1));
        events.push((b, -1));
    }
    events.sort_unstable();
    let mut active = 0i64;
    let mut k = 0;
    while k < events.len() {
        let coord = events[k].0;
        // Closes at `coord` end before it; opens at `coord` start after it.
        while k < events.len() && events[k].0 == coord && events[k].1 == -1 {
            active -= 1;
            k += 1;
        }
        if lo < coord && coord < hi && active == 0 {
            return Some(coord);
        }
        while k < events.len() && events[k].0 == coord {
            active += events[k].1 as i64;
            k += 1;
        }
    }
    None
}

fn split(
    rects: &[(usize, Rect)],
    live: &[usize],
    at: u64,
    vertical: bool,
) -> (Vec<usize>, Vec<usize>) {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for &i in live {
        let r = &rects[i].1;
        let end = if vertical { r.right } else { r.top };
        if end <= at {
            lo.push(i);
        } else {
            hi.push(i);
        }
    }
    (lo, hi)
}

fn has_item(tree: &CutTree) -> bool {
    match &tree.node {
        CutNode::Item(_) => true,
        CutNode::Waste => false,
        CutNode::Vertical { left, right, .. } => has_item(left) || has_item(right),
        CutNode::Horizontal { bottom, top, .. } => has_item(bottom) || has_item(top),
    }
}

/// Number of cut stages, excluding trim cuts: the maximum over item leaves
/// of the number of maximal same-orientation runs along the root-to-leaf
/// path. A cut with a pure-waste side only trims and does not count.
pub fn stage_count(tree: &CutTree) -> usize {
    max_runs(tree, None, 0, true).unwrap_or(0)
}

/// Stage count with trim cuts included, plus one for any item left with
/// slack inside its leaf region (the final separating cut is implicit).
pub fn stage_count_with_trim(tree: &CutTree, rects: &[(usize, Rect)]) -> usize {
    max_runs_trim(tree, None, 0, rects).unwrap_or(0)
}

fn max_runs(tree: &CutTree, last: Option<bool>, runs: usize, skip_trim: bool) -> Option<usize> {
    match &tree.node {
        CutNode::Item(_) => Some(runs),
        CutNode::Waste => None,
        CutNode::Vertical { left, right, .. }
        | CutNode::Horizontal {
            bottom: left,
            top: right,
            ..
        } => {
            let vertical = matches!(tree.node, CutNode::Vertical { .. });
            let (l, r) = (has_item(left), has_item(right));
            if skip_trim && l != r {
                let child = if l { left } else { right };
                return max_runs(child, last, runs, skip_trim);
            }
            if !l && !r {
                return None;
            }
            let runs = if last == Some(vertical) {
                runs
            } else {
                runs + 1
            };
            let a = max_runs(left, Some(vertical), runs, skip_trim);
            let b = max_runs(right, Some(vertical), runs, skip_trim);
            a.max(b)
        }
    }
}

fn max_runs_trim(
    tree: &CutTree,
    last: Option<bool>,
    runs: usize,
    rects: &[(usize, Rect)],
) -> Option<usize> {
    match &tree.node {
        CutNode::Item(id) => {
            let exact = rects.iter().any(|(rid, r)| rid == id && *r == tree.region);
            Some(if exact { runs } else { runs + 1 })
        }
        CutNode::Waste => None,
        CutNode::Vertical { left, right, .. }
        | CutNode::Horizontal {
            bottom: left,
            top: right,
            ..
        } => {
            let vertical = matches!(tree.node, CutNode::Vertical { .. });
            let runs = if last == Some(vertical) {
                runs
            } else {
                runs + 1
            };
            let a = max_runs_trim(left, Some(vertical), runs, rects);
            let b = max_runs_trim(right, Some(vertical), runs, rects);
            a.max(b)
        }
    }
}

/// Independent structural validation of a cut tree against the rectangles
/// it claims to separate: children partition their parent, no cut crosses a
/// rectangle interior, each rectangle sits inside exactly one leaf, and
/// waste leaves are empty.
pub fn validate_cut_tree(tree: &CutTree, rects: &[(usize, Rect)]) -> Result<(), String> {
    let mut seen = Vec::new();
    validate_node(tree, rects, &mut seen)?;
    seen.sort_unstable();
    let mut expected: Vec<usize> = rects.iter().map(|(id, _)| *id).collect();
    expected.sort_unstable();
    if seen != expected {
        return Err(format!(
            "leaf ids {seen:?} do not match rect ids {expected:?}"
        ));
    }
    Ok(())
}

fn validate_node(
    tree: &CutTree,
    rects: &[(usize, Rect)],
    seen: &mut Vec<usize>,
) -> Result<(), String> {
    let reg = &tree.region;
    match &tree.node {
        CutNode::Item(id) => {
            let rect = rects
                .iter()
                .find(|(rid, _)| rid == id)
                .map(|(_, r)| r)
                .ok_or_else(|| format!("leaf references unknown id {id}"))?;
            if !reg.contains(rect) {
                return Err(format!("leaf region does not contain rect {id}"));
            }
            for (oid, other) in rects {
                if oid != id && reg.overlaps_open(other) {
                    return Err(format!("leaf for {id} also intersects rect {oid}"));
                }
            }
            seen.push(*id);
            Ok(())
        }
        CutNode::Waste => {
            for (oid, other) in rects {
                if reg.overlaps_open(other) {
                    return Err(format!("waste region intersects rect {oid}"));
                }
            }
            Ok(())
        }
        CutNode::Vertical { x, left, right } => {
            if !(reg.left < *x && *x < reg.right) {
                return Err(format!("vertical cut {x} not strictly inside region"));
            }
            for (oid, r) in rects {
                if r.left < *x
                    && *x < r.right
                    && r.bottom < reg.top
                    && reg.bottom < r.top
                    && reg.overlaps_open(r)
                {
                    return Err(format!("vertical cut {x} slices rect {oid}"));
                }
            }
            let want_l = Rect::new(reg.left, reg.bottom, *x, reg.top);
            let want_r = Rect::new(*x, reg.bottom, reg.right, reg.top);
            if left.region != want_l || right.region != want_r {
                return Err("children do not partition parent region".into());
            }
            validate_node(left, rects, seen)?;
            validate_node(right, rects, seen)
        }
        CutNode::Horizontal { y, bottom, top } => {
            if !(reg.bottom < *y && *y < reg.top) {
                return Err(format!("horizontal cut {y} not strictly inside region"));
            }
            for (oid, r) in rects {
                if r.bottom < *y && *y < r.top && reg.overlaps_open(r) {
                    return Err(format!("horizontal cut {y} slices rect {oid}"));
                }
            }
            let want_b = Rect::new(reg.left, reg.bottom, reg.right, *y);
            let want_t = Rect::new(reg.left, *y, reg.right, reg.top);
            if bottom.region != want_b || top.region != want_t {
                return Err("children do not partition parent region".into());
            }
            validate_node(bottom, rects, seen)?;
            validate_node(top, rects, seen)
        }
    }
}

impl CutTree {
    /// Nested parenthesized serialization: `(V <x> <left> <right>)`,
    /// `(H <y> <bottom> <top>)`, `(I <item_id>)`, `(W)`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match &self.node {
            CutNode::Vertical { x, left, right } => {
                write!(out, "(V {x} ").unwrap();
                left.write(out);
                out.push(' ');
                right.write(out);
                out.push(')');
            }
            CutNode::Horizontal { y, bottom, top } => {
                write!(out, "(H {y} ").unwrap();
                bottom.write(out);
                out.push(' ');
                top.write(out);
                out.push(')');
            }
            CutNode::Item(id) => write!(out, "(I {id})").unwrap(),
            CutNode::Waste => out.push_str("(W)"),
        }
    }

    /// Parses the serialization back into a tree rooted at `region`; child
    /// regions are reconstructed from the cut coordinates.
    pub fn parse(src: &str, region: Rect) -> Result<CutTree, GuillotineError> {
        let mut tokens = tokenize(src);
        let tree = parse_node(&mut tokens, region)?;
        if tokens.next().is_some() {
            return Err(GuillotineError::Parse("trailing tokens after tree".into()));
        }
        Ok(tree)
    }
}

fn tokenize(src: &str) -> impl Iterator<Item = String> + '_ {
    src.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_owned)
        .collect::<Vec<_>>()
        .into_iter()
}

fn parse_node(
    tokens: &mut impl Iterator<Item = String>,
    region: Rect,
) -> Result<CutTree, GuillotineError> {
    let expect = |tok: Option<String>, what: &str| {
        tok.ok_or_else(|| GuillotineError::Parse(format!("expected {what}, got end of input")))
    };
    let open = expect(tokens.next(), "`(`")?;
    if open != "(" {
        return Err(GuillotineError::Parse(format!(
            "expected `(`, got `{open}`"
        )));
    }
    let tag = expect(tokens.next(), "node tag")?;
    let node = match tag.as_str() {
        "V" | "H" => {
            let coord: u64 = expect(tokens.next(), "cut coordinate")?
                .parse()
                .map_err(|_| GuillotineError::Parse("bad cut coordinate".into()))?;
            let vertical = tag == "V";
            let inside = if vertical {
                region.left < coord && coord < region.right
            } else {
                region.bottom < coord && coord < region.top
            };
            if !inside {
                return Err(GuillotineError::Parse(format!(
                    "cut {coord} outside region"
                )));
            }
            let (ra, rb) = if vertical {
                (
                    Rect::new(region.left, region.bottom, coord, region.top),
                    Rect::new(coord, region.bottom, region.right, region.top),
                )
            } else {
                (
                    Rect::new(region.left, region.bottom, region.right, coord),
                    Rect::new(region.left, coord, region.right, region.top),
                )
            };
            let a = Box::new(parse_node(tokens, ra)?);
            let b = Box::new(parse_node(tokens, rb)?);
            if vertical {
                CutNode::Vertical {
                    x: coord,
                    left: a,
                    right: b,
                }
            } else {
                CutNode::Horizontal {
                    y: coord,
                    bottom: a,
                    top: b,
                }
            }
        }
        "I" => {
            let id: usize = expect(tokens.next(), "item id")?
                .parse()
                .map_err(|_| GuillotineError::Parse("bad item id".into()))?;
            CutNode::Item(id)
        }
        "W" => CutNode::Waste,
        other => return Err(GuillotineError::Parse(format!("unknown tag `{other}`"))),
    };
    let close = expect(tokens.next(), "`)`")?;
    if close != ")" {
        return Err(GuillotineError::Parse(format!(
            "expected `)`, got `{close}`"
        )));
    }
    Ok(CutTree { region, node })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Instance, Packing, Placement};

    fn packing_of(w: u64, placed: &[(u64, u64, u64, u64)]) -> (Instance, Packing) {
        // placed: (left, bottom, width, height)
        let dims: Vec<(u64, u64)> = placed.iter().map(|&(_, _, pw, ph)| (pw, ph)).collect();
        let instance = Instance::new(w, &dims);
        let height = placed.iter().map(|&(_, b, _, h)| b + h).max().unwrap_or(0);
        let placements = placed
            .iter()
            .enumerate()
            .map(|(id, &(l, b, _, _))| Placement::new(id, l, b))
            .collect();
        (instance, Packing::new(placements, height))
    }

    fn rects_of(instance: &Instance, packing: &Packing) -> Vec<(usize, Rect)> {
        packing
            .placements
            .iter()
            .map(|p| {
                let it = &instance.items[p.item_id];
                (
                    p.item_id,
                    Rect::new(p.left, p.bottom, p.right(it), p.top(it)),
                )
            })
            .collect()
    }

    #[test]
    fn side_by_side_single_vertical_cut() {
        let (i, p) = packing_of(4, &[(0, 0, 2, 3), (2, 0, 2, 3)]);
        let tree = check_separable(&i, &p).unwrap();
        match &tree.node {
            CutNode::Vertical { x, .. } => assert_eq!(*x, 2),
            other => panic!("expected vertical cut, got {other:?}"),
        }
        validate_cut_tree(&tree, &rects_of(&i, &p)).unwrap();
        assert_eq!(stage_count(&tree), 1);
    }

    #[test]
    fn pinwheel_is_not_separable() {
        let (i, p) = packing_of(3, &[(0, 0, 2, 1), (2, 0, 1, 2), (1, 2, 2, 1), (0, 1, 1, 2)]);
        match check_separable(&i, &p) {
            Err(GuillotineError::NotSeparable(w)) => {
                assert_eq!(w.region, Rect::new(0, 0, 3, 3));
                assert_eq!(w.items.len(), 4);
            }
            other => panic!("expected NotSeparable, got {other:?}"),
        }
    }

    #[test]
    fn blocking_quad_is_not_separable() {
        // Four large mutually blocking items; no end-to-end cut misses all.
        let (i, p) = packing_of(8, &[(0, 3, 3, 7), (0, 0, 5, 3), (5, 0, 3, 7), (3, 7, 5, 3)]);
        assert!(matches!(
            check_separable(&i, &p),
            Err(GuillotineError::NotSeparable(_))
        ));
    }

    #[test]
    fn staircase_is_separable_with_alternating_stages() {
        // Alternating full-width and full-height strips; n items need n-1
        // alternations.
        let (i, p) = packing_of(
            10,
            &[
                (0, 0, 10, 1),
                (0, 1, 1, 9),
                (1, 1, 9, 1),
                (1, 2, 1, 8),
                (2, 2, 8, 1),
                (2, 3, 1, 7),
                (3, 3, 7, 7),
            ],
        );
        let tree = check_separable(&i, &p).unwrap();
        validate_cut_tree(&tree, &rects_of(&i, &p)).unwrap();
        assert_eq!(stage_count(&tree), 6);
    }

    #[test]
    fn single_item_filling_region_is_stage_zero() {
        let (i, p) = packing_of(4, &[(0, 0, 4, 5)]);
        let tree = check_separable(&i, &p).unwrap();
        assert_eq!(stage_count(&tree), 0);
        assert_eq!(stage_count_with_trim(&tree, &rects_of(&i, &p)), 0);
    }

    #[test]
    fn two_stacked_items_are_one_stage() {
        let (i, p) = packing_of(4, &[(0, 0, 4, 2), (0, 2, 4, 3)]);
        let tree = check_separable(&i, &p).unwrap();
        assert_eq!(stage_count(&tree), 1);
    }

    #[test]
    fn trim_cuts_do_not_count() {
        // One item in a wide region: the vertical cut only severs waste.
        let (i, p) = packing_of(10, &[(0, 0, 4, 2), (0, 2, 4, 3)]);
        let tree = check_separable(&i, &p).unwrap();
        assert_eq!(stage_count(&tree), 1);
        assert!(stage_count_with_trim(&tree, &rects_of(&i, &p)) >= 2);
    }

    #[test]
    fn boxes_checker_matches_item_checker() {
        let boxes = vec![
            Rect::new(0, 0, 2, 1),
            Rect::new(2, 0, 3, 2),
            Rect::new(1, 2, 3, 3),
            Rect::new(0, 1, 1, 3),
        ];
        assert!(cuts_separating_boxes(&boxes, 3).is_err());
        let single = vec![Rect::new(2, 1, 5, 4)];
        let tree = cuts_separating_boxes(&single, 8).unwrap();
        validate_cut_tree(&tree, &[(0, single[0])]).unwrap();
    }

    #[test]
    fn flushed_column_layout_with_reserved_box_separates() {
        // Tall column block on the left, a container column, and an empty
        // reserved box sitting above a flat container: vertical cuts at 12
        // and 42 isolate the columns, one horizontal cut at 20 splits the
        // flat container from the box above it.
        let boxes = vec![
            Rect::new(0, 0, 12, 64),
            Rect::new(12, 0, 42, 20),
            Rect::new(12, 20, 42, 52),
            Rect::new(42, 0, 62, 40),
        ];
        let tree = cuts_separating_boxes(&boxes, 64).unwrap();
        let rects: Vec<(usize, Rect)> = boxes.iter().copied().enumerate().collect();
        validate_cut_tree(&tree, &rects).unwrap();
        match &tree.node {
            CutNode::Vertical { x: 12, .. } => {}
            other => panic!("expected the canonical first cut at x=12, got {other:?}"),
        }
        assert_eq!(stage_count(&tree), 2);
    }

    #[test]
    fn serialization_round_trips() {
        let (i, p) = packing_of(
            10,
            &[(0, 0, 10, 1), (0, 1, 1, 9), (1, 1, 9, 1), (1, 2, 9, 8)],
        );
        let tree = check_separable(&i, &p).unwrap();
        let text = tree.to_text();
        let parsed = CutTree::parse(&text, tree.region).unwrap();
        assert_eq!(parsed, tree);
    }

    #[test]
    fn parse_rejects_out_of_region_cut() {
        let err = CutTree::parse("(V 9 (W) (W))", Rect::new(0, 0, 4, 4));
        assert!(err.is_err());
    }

    #[test]
    fn invalid_packing_is_a_verification_error() {
        let (i, mut p) = packing_of(4, &[(0, 0, 2, 3), (2, 0, 2, 3)]);
        p.placements[1].left = 1; // force an overlap
        assert!(matches!(
            check_separable(&i, &p),
            Err(GuillotineError::InvalidPacking(_))
        ));
    }
}
