//! Nice-packing containers: construction, per-kind filling, GAP-based
//! assignment, and layout verification.
//!
//! A container is a box tagged with the shape of packing it admits: a
//! single item, a bottom-up stack of horizontal items, a left-to-right row
//! of tall/vertical items, a medium block, or NFDH-packed small items whose
//! dimensions are at most an epsilon fraction of the box.

use std::fmt;

use thiserror::Error;

use crate::gap::{self, Assignment, GapError, GapInstance};
use crate::guillotine::{
    cuts_separating_boxes, separate_rects, validate_cut_tree, CutNode, CutTree, Rect,
};
use crate::heuristics::{by_decreasing_height, nfdh_into_box};
use crate::model::{fint, frac, Frac, Instance, Item, ItemClass, Placement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContainerKind {
    SingleLarge,
    HorizontalStack,
    VerticalSideBySide,
    MediumBlock,
    SmallNfdh(Frac),
}

impl fmt::Display for ContainerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContainerKind::SingleLarge => f.write_str("single"),
            ContainerKind::HorizontalStack => f.write_str("hstack"),
            ContainerKind::VerticalSideBySide => f.write_str("vside"),
            ContainerKind::MediumBlock => f.write_str("medium"),
            ContainerKind::SmallNfdh(eps) => write!(f, "small:{}/{}", eps.numer(), eps.denom()),
        }
    }
}

/// A placed box plus its nice-packing kind. `reserved` marks a box that
/// must stay empty (the error-absorbing box of the 3/2 pipeline).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub rect: Rect,
    pub kind: ContainerKind,
    pub reserved: bool,
}

impl Container {
    pub fn new(left: u64, bottom: u64, width: u64, height: u64, kind: ContainerKind) -> Self {
        Self {
            rect: Rect::new(left, bottom, left + width, bottom + height),
            kind,
            reserved: false,
        }
    }

    pub fn reserved(left: u64, bottom: u64, width: u64, height: u64) -> Self {
        let mut c = Self::new(
            left,
            bottom,
            width,
            height,
            ContainerKind::VerticalSideBySide,
        );
        c.reserved = true;
        c
    }

    pub fn width(&self) -> u64 {
        self.rect.width()
    }

    pub fn height(&self) -> u64 {
        self.rect.height()
    }
}

/// A set of placed containers inside the strip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainerLayout {
    pub strip_width: u64,
    pub containers: Vec<Container>,
}

impl ContainerLayout {
    pub fn new(strip_width: u64, containers: Vec<Container>) -> Self {
        Self {
            strip_width,
            containers,
        }
    }

    pub fn height(&self) -> u64 {
        self.containers
            .iter()
            .map(|c| c.rect.top)
            .max()
            .unwrap_or(0)
    }

    /// One `box <left> <bottom> <w> <h> <kind>` line per container.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.containers {
            let kind = if c.reserved {
                "reserved".to_string()
            } else {
                c.kind.to_string()
            };
            out.push_str(&format!(
                "box {} {} {} {} {}\n",
                c.rect.left,
                c.rect.bottom,
                c.width(),
                c.height(),
                kind
            ));
        }
        out
    }

    pub fn from_text(src: &str, strip_width: u64) -> Result<Self, ContainersError> {
        let mut containers = Vec::new();
        for (ln, line) in src.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: String| ContainersError::Parse { line: ln + 1, msg };
            if fields.len() != 6 || fields[0] != "box" {
                return Err(bad(format!(
                    "expected `box <l> <b> <w> <h> <kind>`, got `{line}`"
                )));
            }
            let mut nums = [0u64; 4];
            for (slot, f) in nums.iter_mut().zip(&fields[1..5]) {
                *slot = f.parse().map_err(|_| bad(format!("bad number `{f}`")))?;
            }
            let [l, b, w, h] = nums;
            let container = match fields[5] {
                "single" => Container::new(l, b, w, h, ContainerKind::SingleLarge),
                "hstack" => Container::new(l, b, w, h, ContainerKind::HorizontalStack),
                "vside" => Container::new(l, b, w, h, ContainerKind::VerticalSideBySide),
                "medium" => Container::new(l, b, w, h, ContainerKind::MediumBlock),
                "reserved" => Container::reserved(l, b, w, h),
                small if small.starts_with("small:") => {
                    let eps_str = &small["small:".len()..];
                    let (p, q) = eps_str
                        .split_once('/')
                        .and_then(|(p, q)| Some((p.parse().ok()?, q.parse().ok()?)))
                        .ok_or_else(|| bad(format!("bad small epsilon `{eps_str}`")))?;
                    Container::new(l, b, w, h, ContainerKind::SmallNfdh(frac(p, q)))
                }
                other => return Err(bad(format!("unknown kind `{other}`"))),
            };
            containers.push(container);
        }
        Ok(Self {
            strip_width,
            containers,
        })
    }
}

#[derive(Debug, Error)]
pub enum ContainersError {
    #[error("item {item} does not match container kind {kind}: {why}")]
    KindMismatch {
        item: usize,
        kind: String,
        why: String,
    },
    #[error("container overflow at item {item}")]
    Overflow { item: usize },
    #[error("medium precondition violated: {0}")]
    MediumPrecondition(String),
    #[error("small-leftover precondition violated: {0}")]
    SmallPrecondition(String),
    #[error(transparent)]
    Gap(#[from] GapError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Param(String),
}

/// Result of filling one container. `rejected` is only ever non-empty for
/// `SmallNfdh`, where NFDH may legitimately leave a bounded area out.
#[derive(Debug, Clone)]
pub struct Fill {
    pub placements: Vec<Placement>,
    pub rejected: Vec<usize>,
}

/// Places `items` inside the container according to its kind. Placements
/// are absolute. Items are re-sorted by non-increasing height so output is
/// canonical regardless of assignment order.
pub fn fill_container(
    container: &Container,
    items: &[Item],
    classes: &[ItemClass],
) -> Result<Fill, ContainersError> {
    if container.reserved && !items.is_empty() {
        return Err(ContainersError::Param(
            "reserved container must stay empty".into(),
        ));
    }
    let rect = container.rect;
    let mismatch = |item: &Item, why: &str| ContainersError::KindMismatch {
        item: item.id,
        kind: container.kind.to_string(),
        why: why.into(),
    };
    match &container.kind {
        ContainerKind::SingleLarge => {
            if items.len() != 1 {
                return Err(ContainersError::Param(format!(
                    "single-item container got {} items",
                    items.len()
                )));
            }
            let item = &items[0];
            if item.width > rect.width() || item.height > rect.height() {
                return Err(ContainersError::Overflow { item: item.id });
            }
            Ok(Fill {
                placements: vec![Placement::new(item.id, rect.left, rect.bottom)],
                rejected: vec![],
            })
        }
        ContainerKind::HorizontalStack => {
            let mut sorted = items.to_vec();
            by_decreasing_height(&mut sorted);
            let mut y = rect.bottom;
            let mut placements = Vec::with_capacity(sorted.len());
            for item in &sorted {
                if classes[item.id] != ItemClass::Horizontal {
                    return Err(mismatch(item, "only horizontal items may be stacked"));
                }
                if item.width > rect.width() {
                    return Err(ContainersError::Overflow { item: item.id });
                }
                if y + item.height > rect.top {
                    return Err(ContainersError::Overflow { item: item.id });
                }
                placements.push(Placement::new(item.id, rect.left, y));
                y += item.height;
            }
            Ok(Fill {
                placements,
                rejected: vec![],
            })
        }
        ContainerKind::VerticalSideBySide => {
            let mut sorted = items.to_vec();
            by_decreasing_height(&mut sorted);
            let mut x = rect.left;
            let mut placements = Vec::with_capacity(sorted.len());
            for item in &sorted {
                if !matches!(classes[item.id], ItemClass::Tall | ItemClass::Vertical) {
                    return Err(mismatch(item, "only tall/vertical items sit side by side"));
                }
                if item.height > rect.height() {
                    return Err(ContainersError::Overflow { item: item.id });
                }
                if x + item.width > rect.right {
                    return Err(ContainersError::Overflow { item: item.id });
                }
                placements.push(Placement::new(item.id, x, rect.bottom));
                x += item.width;
            }
            Ok(Fill {
                placements,
                rejected: vec![],
            })
        }
        ContainerKind::MediumBlock => {
            for item in items {
                if classes[item.id] != ItemClass::Medium {
                    return Err(mismatch(item, "only medium items allowed"));
                }
            }
            let fill = nfdh_into_box(items, rect.width(), rect.height(), fint(1));
            if let Some((id, _)) = fill.rejected.first() {
                return Err(ContainersError::Overflow { item: *id });
            }
            Ok(Fill {
                placements: offset(fill.placements, rect.left, rect.bottom),
                rejected: vec![],
            })
        }
        ContainerKind::SmallNfdh(eps) => {
            for item in items {
                if classes[item.id] != ItemClass::Small {
                    return Err(mismatch(item, "only small items allowed"));
                }
                if fint(item.width) > *eps * fint(rect.width())
                    || fint(item.height) > *eps * fint(rect.height())
                {
                    return Err(mismatch(
                        item,
                        "item too large for the epsilon-fit condition",
                    ));
                }
            }
            let fill = nfdh_into_box(items, rect.width(), rect.height(), *eps);
            Ok(Fill {
                placements: offset(fill.placements, rect.left, rect.bottom),
                rejected: fill.rejected.into_iter().map(|(id, _)| id).collect(),
            })
        }
    }
}

fn offset(placements: Vec<Placement>, dx: u64, dy: u64) -> Vec<Placement> {
    placements
        .into_iter()
        .map(|p| Placement::new(p.item_id, p.left + dx, p.bottom + dy))
        .collect()
}

/// Which capacity/size pair the GAP reduction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignMode {
    /// Horizontal containers: capacity `h(B)`, size `h_i`, feasible when
    /// the item is no wider than the box.
    Height,
    /// Vertical/tall containers: capacity `w(B)`, size `w_i`, feasible when
    /// the item is no taller than the box.
    Width,
    /// Small containers: capacity `w(B)*h(B)`, size `w_i*h_i`, feasible
    /// under the epsilon-fit condition of the box.
    Area,
}

/// Reduces "pack these items into these containers" to GAP and solves it.
/// Profits equal sizes, so maximum profit means maximum packed
/// height/width/area. Capacities are scaled into the table budget when
/// necessary; the assignment is always feasible unscaled.
pub fn assign_to_containers(
    items: &[Item],
    containers: &[Container],
    mode: AssignMode,
) -> Result<Assignment, ContainersError> {
    let mut capacities = Vec::with_capacity(containers.len());
    for c in containers {
        let cap = match mode {
            AssignMode::Height => c.height(),
            AssignMode::Width => c.width(),
            AssignMode::Area => c
                .width()
                .checked_mul(c.height())
                .ok_or_else(|| ContainersError::Param("container area overflows u64".into()))?,
        };
        capacities.push(cap);
    }
    let mut gap_instance = GapInstance::new(capacities);
    for item in items {
        let per_bin = containers
            .iter()
            .map(|c| match mode {
                AssignMode::Height => (item.width <= c.width() && item.height <= c.height())
                    .then_some((item.height, item.height)),
                AssignMode::Width => (item.height <= c.height() && item.width <= c.width())
                    .then_some((item.width, item.width)),
                AssignMode::Area => {
                    let eps = match &c.kind {
                        ContainerKind::SmallNfdh(eps) => *eps,
                        _ => return None,
                    };
                    let fits = fint(item.width) <= eps * fint(c.width())
                        && fint(item.height) <= eps * fint(c.height());
                    let area = item.width * item.height;
                    fits.then_some((area, area))
                }
            })
            .collect();
        gap_instance.push_item(per_bin);
    }
    Ok(gap::solve_scaled(&gap_instance)?)
}

/// Packs every medium item into one full-width container by NFDH. Requires
/// the guarantees `choose_constants` provides: total medium area at most
/// `eps*OPT*W` and each height at most `eps*OPT`; the resulting box is then
/// at most `3*eps*OPT` tall.
pub fn pack_medium(
    medium: &[Item],
    opt_estimate: u64,
    strip_width: u64,
    eps: Frac,
) -> Result<(Container, Vec<Placement>), ContainersError> {
    let area: u128 = medium.iter().map(Item::area).sum();
    let budget = eps * fint(opt_estimate) * fint(strip_width);
    if Frac::from_integer(area) > budget {
        return Err(ContainersError::MediumPrecondition(format!(
            "medium area {area} exceeds eps*OPT*W = {budget}"
        )));
    }
    for item in medium {
        if fint(item.height) > eps * fint(opt_estimate) {
            return Err(ContainersError::MediumPrecondition(format!(
                "item {} height {} exceeds eps*OPT",
                item.id, item.height
            )));
        }
    }
    let (container, placements) = nfdh_block(medium, strip_width, ContainerKind::MediumBlock);
    debug_assert!(
        fint(container.height()) <= fint(3) * eps * fint(opt_estimate),
        "NFDH exceeded the 3*eps*OPT budget"
    );
    Ok((container, placements))
}

/// Packs leftover small items (GAP-unassigned plus NFDH rejections) into
/// one full-width box. Requires leftover area at most `3*eps*OPT*W` and
/// item heights at most `eps*OPT`; the box is then at most `9*eps*OPT`
/// tall.
pub fn pack_small_leftovers(
    leftovers: &[Item],
    opt_estimate: u64,
    strip_width: u64,
    eps: Frac,
) -> Result<(Container, Vec<Placement>), ContainersError> {
    let area: u128 = leftovers.iter().map(Item::area).sum();
    let budget = fint(3) * eps * fint(opt_estimate) * fint(strip_width);
    if Frac::from_integer(area) > budget {
        return Err(ContainersError::SmallPrecondition(format!(
            "leftover area {area} exceeds 3*eps*OPT*W = {budget}"
        )));
    }
    for item in leftovers {
        if fint(item.height) > eps * fint(opt_estimate) {
            return Err(ContainersError::SmallPrecondition(format!(
                "item {} height {} exceeds eps*OPT",
                item.id, item.height
            )));
        }
    }
    let (container, placements) = nfdh_block(leftovers, strip_width, ContainerKind::MediumBlock);
    debug_assert!(
        fint(container.height()) <= fint(9) * eps * fint(opt_estimate),
        "NFDH exceeded the 9*eps*OPT budget"
    );
    Ok((container, placements))
}

/// NFDH strip packing of `items` into a width-`w` box at the origin; the
/// box height is whatever NFDH achieves.
fn nfdh_block(items: &[Item], w: u64, kind: ContainerKind) -> (Container, Vec<Placement>) {
    let mut sorted = items.to_vec();
    by_decreasing_height(&mut sorted);
    let mut placements = Vec::with_capacity(sorted.len());
    let mut shelf_bottom = 0u64;
    let mut shelf_height = 0u64;
    let mut x = 0u64;
    for item in &sorted {
        if placements.is_empty() || x + item.width > w {
            shelf_bottom += shelf_height;
            shelf_height = item.height;
            x = 0;
        }
        placements.push(Placement::new(item.id, x, shelf_bottom));
        x += item.width;
    }
    let height = if placements.is_empty() {
        0
    } else {
        shelf_bottom + shelf_height
    };
    (Container::new(0, 0, w, height, kind), placements)
}

/// One container together with the absolute placements of its items.
#[derive(Debug, Clone)]
pub struct FilledContainer {
    pub container: Container,
    pub placements: Vec<Placement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayoutViolation {
    ContainerOverlap {
        a: usize,
        b: usize,
    },
    ContainerOutOfStrip {
        index: usize,
    },
    BoxesNotSeparable {
        region: Rect,
    },
    ItemOutsideContainer {
        container: usize,
        item: usize,
    },
    NotAdmissible {
        container: usize,
        item: usize,
        class: ItemClass,
    },
    NotNice {
        container: usize,
        detail: String,
    },
    ReservedNotEmpty {
        container: usize,
    },
    ItemsNotSeparable {
        detail: String,
    },
}

impl fmt::Display for LayoutViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayoutViolation::ContainerOverlap { a, b } => {
                write!(f, "containers {a} and {b} overlap")
            }
            LayoutViolation::ContainerOutOfStrip { index } => {
                write!(f, "container {index} extends past the strip edge")
            }
            LayoutViolation::BoxesNotSeparable { region } => write!(
                f,
                "containers not guillotine separable; witness [{},{}]x[{},{}]",
                region.left, region.right, region.bottom, region.top
            ),
            LayoutViolation::ItemOutsideContainer { container, item } => {
                write!(f, "item {item} leaves container {container}")
            }
            LayoutViolation::NotAdmissible {
                container,
                item,
                class,
            } => {
                write!(
                    f,
                    "{class} item {item} not admissible in container {container}"
                )
            }
            LayoutViolation::NotNice { container, detail } => {
                write!(f, "container {container} packing not nice: {detail}")
            }
            LayoutViolation::ReservedNotEmpty { container } => {
                write!(f, "reserved container {container} holds items")
            }
            LayoutViolation::ItemsNotSeparable { detail } => {
                write!(
                    f,
                    "composed item packing not guillotine separable: {detail}"
                )
            }
        }
    }
}

/// Checks container disjointness, per-kind niceness, admissibility, and the
/// global guillotine separability of the composed item packing. All
/// violations are reported; an empty report means the layout is clean.
pub fn verify_layout(
    instance: &Instance,
    classes: &[ItemClass],
    filled: &[FilledContainer],
) -> Vec<LayoutViolation> {
    let mut out = Vec::new();
    for (i, fc) in filled.iter().enumerate() {
        if fc.container.rect.right > instance.strip_width {
            out.push(LayoutViolation::ContainerOutOfStrip { index: i });
        }
        for (j, other) in filled.iter().enumerate().skip(i + 1) {
            if fc.container.rect.overlaps_open(&other.container.rect) {
                out.push(LayoutViolation::ContainerOverlap { a: i, b: j });
            }
        }
    }
    for (i, fc) in filled.iter().enumerate() {
        if fc.container.reserved && !fc.placements.is_empty() {
            out.push(LayoutViolation::ReservedNotEmpty { container: i });
        }
        check_niceness(instance, classes, i, fc, &mut out);
    }
    let boxes: Vec<Rect> = filled.iter().map(|fc| fc.container.rect).collect();
    match cuts_separating_boxes(&boxes, instance.strip_width) {
        Ok(layout_tree) => {
            if let Err(detail) = compose_and_validate(instance, filled, &layout_tree) {
                out.push(LayoutViolation::ItemsNotSeparable { detail });
            }
        }
        Err(ns) => out.push(LayoutViolation::BoxesNotSeparable { region: ns.region }),
    }
    out
}

fn check_niceness(
    instance: &Instance,
    classes: &[ItemClass],
    index: usize,
    fc: &FilledContainer,
    out: &mut Vec<LayoutViolation>,
) {
    let rect = fc.container.rect;
    let items: Vec<(usize, Rect)> = fc
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
    for (id, r) in &items {
        if !rect.contains(r) {
            out.push(LayoutViolation::ItemOutsideContainer {
                container: index,
                item: *id,
            });
        }
        let class = classes[*id];
        let admissible = match &fc.container.kind {
            ContainerKind::SingleLarge => true,
            ContainerKind::HorizontalStack => class == ItemClass::Horizontal,
            ContainerKind::VerticalSideBySide => {
                matches!(class, ItemClass::Tall | ItemClass::Vertical)
            }
            ContainerKind::MediumBlock => class == ItemClass::Medium,
            ContainerKind::SmallNfdh(eps) => {
                class == ItemClass::Small
                    && fint(r.width()) <= *eps * fint(rect.width())
                    && fint(r.height()) <= *eps * fint(rect.height())
            }
        };
        if !admissible {
            out.push(LayoutViolation::NotAdmissible {
                container: index,
                item: *id,
                class,
            });
        }
    }
    match &fc.container.kind {
        ContainerKind::SingleLarge => {
            if items.len() > 1 {
                out.push(LayoutViolation::NotNice {
                    container: index,
                    detail: format!("{} items in a single-item container", items.len()),
                });
            }
        }
        ContainerKind::HorizontalStack => {
            let mut sorted = items.clone();
            sorted.sort_by_key(|(_, r)| r.bottom);
            for pair in sorted.windows(2) {
                if pair[1].1.bottom < pair[0].1.top {
                    out.push(LayoutViolation::NotNice {
                        container: index,
                        detail: format!("items {} and {} not stacked", pair[0].0, pair[1].0),
                    });
                }
            }
        }
        ContainerKind::VerticalSideBySide => {
            let mut sorted = items.clone();
            sorted.sort_by_key(|(_, r)| r.left);
            for pair in sorted.windows(2) {
                if pair[1].1.left < pair[0].1.right {
                    out.push(LayoutViolation::NotNice {
                        container: index,
                        detail: format!("items {} and {} not side by side", pair[0].0, pair[1].0),
                    });
                }
            }
        }
        ContainerKind::MediumBlock | ContainerKind::SmallNfdh(_) => {
            if separate_rects(&items, rect).is_err() {
                out.push(LayoutViolation::NotNice {
                    container: index,
                    detail: "block not guillotine separable".into(),
                });
            }
        }
    }
}

/// Substitutes each container leaf of the layout tree with the container's
/// internal cut tree and validates the composition against all items.
fn compose_and_validate(
    instance: &Instance,
    filled: &[FilledContainer],
    layout_tree: &CutTree,
) -> Result<(), String> {
    let mut inner = Vec::with_capacity(filled.len());
    for fc in filled {
        let rects: Vec<(usize, Rect)> = fc
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
        let tree = separate_rects(&rects, fc.container.rect).map_err(|ns| {
            format!(
                "container at ({}, {}) not separable internally",
                ns.region.left, ns.region.bottom
            )
        })?;
        inner.push(tree);
    }
    let composed = substitute(layout_tree, filled, &inner);
    let all_rects: Vec<(usize, Rect)> = filled
        .iter()
        .flat_map(|fc| {
            fc.placements.iter().map(|p| {
                let item = &instance.items[p.item_id];
                (
                    p.item_id,
                    Rect::new(p.left, p.bottom, p.right(item), p.top(item)),
                )
            })
        })
        .collect();
    validate_cut_tree(&composed, &all_rects)
}

fn substitute(tree: &CutTree, filled: &[FilledContainer], inner: &[CutTree]) -> CutTree {
    match &tree.node {
        CutNode::Item(box_id) => {
            embed(tree.region, filled[*box_id].container.rect, &inner[*box_id])
        }
        CutNode::Waste => tree.clone(),
        CutNode::Vertical { x, left, right } => CutTree {
            region: tree.region,
            node: CutNode::Vertical {
                x: *x,
                left: Box::new(substitute(left, filled, inner)),
                right: Box::new(substitute(right, filled, inner)),
            },
        },
        CutNode::Horizontal { y, bottom, top } => CutTree {
            region: tree.region,
            node: CutNode::Horizontal {
                y: *y,
                bottom: Box::new(substitute(bottom, filled, inner)),
                top: Box::new(substitute(top, filled, inner)),
            },
        },
    }
}

/// Carves `region` down to `target` with trim cuts and plants `tree` there.
fn embed(region: Rect, target: Rect, tree: &CutTree) -> CutTree {
    if region == target {
        return tree.clone();
    }
    if region.left < target.left {
        let (a, b) = vsplit(region, target.left);
        return CutTree {
            region,
            node: CutNode::Vertical {
                x: target.left,
                left: Box::new(CutTree {
                    region: a,
                    node: CutNode::Waste,
                }),
                right: Box::new(embed(b, target, tree)),
            },
        };
    }
    if region.right > target.right {
        let (a, b) = vsplit(region, target.right);
        return CutTree {
            region,
            node: CutNode::Vertical {
                x: target.right,
                left: Box::new(embed(a, target, tree)),
                right: Box::new(CutTree {
                    region: b,
                    node: CutNode::Waste,
                }),
            },
        };
    }
    if region.bottom < target.bottom {
        let (a, b) = hsplit(region, target.bottom);
        return CutTree {
            region,
            node: CutNode::Horizontal {
                y: target.bottom,
                bottom: Box::new(CutTree {
                    region: a,
                    node: CutNode::Waste,
                }),
                top: Box::new(embed(b, target, tree)),
            },
        };
    }
    let (a, b) = hsplit(region, target.top);
    CutTree {
        region,
        node: CutNode::Horizontal {
            y: target.top,
            bottom: Box::new(embed(a, target, tree)),
            top: Box::new(CutTree {
                region: b,
                node: CutNode::Waste,
            }),
        },
    }
}

fn vsplit(r: Rect, x: u64) -> (Rect, Rect) {
    (
        Rect::new(r.left, r.bottom, x, r.top),
        Rect::new(x, r.bottom, r.right, r.top),
    )
}

fn hsplit(r: Rect, y: u64) -> (Rect, Rect) {
    (
        Rect::new(r.left, r.bottom, r.right, y),
        Rect::new(r.left, y, r.right, r.top),
    )
}
