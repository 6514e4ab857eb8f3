//! Baseline constructive packers and feasibility predicates.
//!
//! NFDH (next fit decreasing height) packs shelves in non-increasing height
//! order; its strip variant achieves height at most `2*area/W + tallest`.
//! `bottom_left_flush` is the canonical tall-item arrangement, and
//! `steinberg_feasible` evaluates the classical sufficient condition for a
//! set of items to fit a box (the predicate only; this toolkit never runs
//! the constructive procedure behind it).

use thiserror::Error;

use crate::guillotine::{CutNode, CutTree, Rect};
use crate::model::{fint, Frac, Instance, Item, Packing, Placement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeuristicsError {
    #[error("total width {total} exceeds strip width {strip}")]
    FlushTooWide { total: u64, strip: u64 },
    #[error("item {id} ({w}x{h}) does not fit a {bw}x{bh} box")]
    ItemExceedsBox {
        id: usize,
        w: u64,
        h: u64,
        bw: u64,
        bh: u64,
    },
}

/// Sort key shared by every height-ordered routine: non-increasing height,
/// ties by non-increasing width, then id.
pub fn by_decreasing_height(items: &mut [Item]) {
    items.sort_by(|a, b| {
        b.height
            .cmp(&a.height)
            .then(b.width.cmp(&a.width))
            .then(a.id.cmp(&b.id))
    });
}

struct Shelf {
    bottom: u64,
    height: u64,
    placements: Vec<Placement>,
}

fn pack_shelves(sorted: &[Item], width: u64) -> Vec<Shelf> {
    let mut shelves: Vec<Shelf> = Vec::new();
    let mut x = 0u64;
    for item in sorted {
        let open_new = match shelves.last() {
            Some(_) => x + item.width > width,
            None => true,
        };
        if open_new {
            let bottom = shelves.last().map(|s| s.bottom + s.height).unwrap_or(0);
            shelves.push(Shelf {
                bottom,
                height: item.height,
                placements: Vec::new(),
            });
            x = 0;
        }
        let shelf = shelves.last_mut().unwrap();
        shelf
            .placements
            .push(Placement::new(item.id, x, shelf.bottom));
        x += item.width;
    }
    shelves
}

/// NFDH over the full strip. Returns the packing and its shelf-structured
/// cut tree: horizontal cuts between shelves, then vertical cuts between
/// items, so at most two stages excluding trim.
pub fn nfdh_strip(instance: &Instance) -> (Packing, CutTree) {
    let mut sorted = instance.items.clone();
    by_decreasing_height(&mut sorted);
    let shelves = pack_shelves(&sorted, instance.strip_width);
    let height = shelves.last().map(|s| s.bottom + s.height).unwrap_or(0);
    let placements: Vec<Placement> = shelves
        .iter()
        .flat_map(|s| s.placements.iter().copied())
        .collect();
    let region = Rect::new(0, 0, instance.strip_width, height);
    let tree = shelves_tree(&shelves, instance, region);
    (Packing::new(placements, height), tree)
}

fn shelves_tree(shelves: &[Shelf], instance: &Instance, region: Rect) -> CutTree {
    match shelves {
        [] => CutTree {
            region,
            node: CutNode::Waste,
        },
        [only] => row_tree(&only.placements, instance, region),
        [first, rest @ ..] => {
            let y = first.bottom + first.height;
            let bottom_region = Rect::new(region.left, region.bottom, region.right, y);
            let top_region = Rect::new(region.left, y, region.right, region.top);
            CutTree {
                region,
                node: CutNode::Horizontal {
                    y,
                    bottom: Box::new(row_tree(&first.placements, instance, bottom_region)),
                    top: Box::new(shelves_tree(rest, instance, top_region)),
                },
            }
        }
    }
}

fn row_tree(placements: &[Placement], instance: &Instance, region: Rect) -> CutTree {
    match placements {
        [] => CutTree {
            region,
            node: CutNode::Waste,
        },
        [only] => {
            let right = only.right(&instance.items[only.item_id]);
            if right < region.right {
                let item_region = Rect::new(region.left, region.bottom, right, region.top);
                let waste_region = Rect::new(right, region.bottom, region.right, region.top);
                CutTree {
                    region,
                    node: CutNode::Vertical {
                        x: right,
                        left: Box::new(CutTree {
                            region: item_region,
                            node: CutNode::Item(only.item_id),
                        }),
                        right: Box::new(CutTree {
                            region: waste_region,
                            node: CutNode::Waste,
                        }),
                    },
                }
            } else {
                CutTree {
                    region,
                    node: CutNode::Item(only.item_id),
                }
            }
        }
        [first, rest @ ..] => {
            let x = first.right(&instance.items[first.item_id]);
            let item_region = Rect::new(region.left, region.bottom, x, region.top);
            let rest_region = Rect::new(x, region.bottom, region.right, region.top);
            CutTree {
                region,
                node: CutNode::Vertical {
                    x,
                    left: Box::new(CutTree {
                        region: item_region,
                        node: CutNode::Item(first.item_id),
                    }),
                    right: Box::new(row_tree(rest, instance, rest_region)),
                },
            }
        }
    }
}

/// Why `nfdh_into_box` left an item out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reject {
    /// Width exceeds `eps * box width` (precondition violation).
    TooWide,
    /// Height exceeds `eps * box height` (precondition violation).
    TooTall,
    /// NFDH halted before reaching the item.
    NoRoom,
}

#[derive(Debug, Clone)]
pub struct BoxFill {
    /// Placements relative to the box origin.
    pub placements: Vec<Placement>,
    pub rejected: Vec<(usize, Reject)>,
}

impl BoxFill {
    pub fn packed_area(&self, instance: &Instance) -> u128 {
        self.placements
            .iter()
            .map(|p| instance.items[p.item_id].area())
            .sum()
    }
}

/// NFDH into a `w x h` box for items satisfying the small-fit condition
/// `w_i <= eps*w`, `h_i <= eps*h`. Guarantees packed area of at least
/// `min(total area, (1-2*eps) * w * h)`; violating items are rejected
/// individually with the reason.
pub fn nfdh_into_box(items: &[Item], w: u64, h: u64, eps: Frac) -> BoxFill {
    let mut rejected = Vec::new();
    let mut eligible = Vec::new();
    for item in items {
        if fint(item.width) > eps * fint(w) {
            rejected.push((item.id, Reject::TooWide));
        } else if fint(item.height) > eps * fint(h) {
            rejected.push((item.id, Reject::TooTall));
        } else {
            eligible.push(*item);
        }
    }
    by_decreasing_height(&mut eligible);

    let mut placements = Vec::new();
    let mut shelf_bottom = 0u64;
    let mut shelf_height = 0u64;
    let mut x = 0u64;
    let mut halted_at = None;
    for (pos, item) in eligible.iter().enumerate() {
        if placements.is_empty() || x + item.width > w {
            let next_bottom = shelf_bottom + shelf_height;
            if next_bottom + item.height > h {
                halted_at = Some(pos);
                break;
            }
            shelf_bottom = next_bottom;
            shelf_height = item.height;
            x = 0;
        }
        placements.push(Placement::new(item.id, x, shelf_bottom));
        x += item.width;
    }
    if let Some(pos) = halted_at {
        rejected.extend(eligible[pos..].iter().map(|i| (i.id, Reject::NoRoom)));
    }
    BoxFill {
        placements,
        rejected,
    }
}

/// Sorts tall items by non-increasing height (ties by width, then id) and
/// abuts them left-to-right on the strip floor.
pub fn bottom_left_flush(
    items: &[Item],
    strip_width: u64,
) -> Result<Vec<Placement>, HeuristicsError> {
    let total: u64 = items.iter().map(|i| i.width).sum();
    if total > strip_width {
        return Err(HeuristicsError::FlushTooWide {
            total,
            strip: strip_width,
        });
    }
    let mut sorted = items.to_vec();
    by_decreasing_height(&mut sorted);
    let mut x = 0;
    let mut out = Vec::with_capacity(sorted.len());
    for item in &sorted {
        out.push(Placement::new(item.id, x, 0));
        x += item.width;
    }
    Ok(out)
}

/// Steinberg's sufficient condition for packing `items` into a `w x h` box:
/// `2*a(I) <= w*h - (2*w_max - w)_+ * (2*h_max - h)_+`. True certifies
/// packability; false says nothing.
pub fn steinberg_feasible(items: &[Item], w: u64, h: u64) -> Result<bool, HeuristicsError> {
    for item in items {
        if item.width > w || item.height > h {
            return Err(HeuristicsError::ItemExceedsBox {
                id: item.id,
                w: item.width,
                h: item.height,
                bw: w,
                bh: h,
            });
        }
    }
    let area: u128 = items.iter().map(Item::area).sum();
    let w_max = items.iter().map(|i| i.width).max().unwrap_or(0) as u128;
    let h_max = items.iter().map(|i| i.height).max().unwrap_or(0) as u128;
    let (w, h) = (w as u128, h as u128);
    let slack_w = (2 * w_max).saturating_sub(w);
    let slack_h = (2 * h_max).saturating_sub(h);
    Ok(2 * area <= w * h - slack_w * slack_h)
}
