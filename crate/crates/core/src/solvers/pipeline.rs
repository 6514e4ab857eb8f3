//! The two container pipelines.
//!
//! Both share the same skeleton: iterate candidate OPT values over a
//! geometric grid, classify items, pick the `(delta, mu)` window, enumerate
//! candidate container layouts (a supplied template first, then synthesized
//! ones), assign items to containers through the GAP solver, and stack the
//! medium box and the small-leftover box on top. Any candidate that fails
//! to place and verify everything is discarded; if nothing survives, the
//! output falls back to NFDH, so both solvers always return a verified
//! packing.

use crate::containers::{
    assign_to_containers, fill_container, pack_medium, pack_small_leftovers, AssignMode, Container,
    ContainerKind, ContainerLayout,
};
use crate::guillotine::{check_separable, separate_rects, Rect};
use crate::heuristics::{bottom_left_flush, by_decreasing_height, nfdh_strip};
use crate::model::{
    choose_constants_with_budget, classify, fint, floor_scaled, lower_bound, verify_packing,
    Classification, ConstantProfile, Frac, Instance, Item, ItemClass, Packing, Placement,
};

use super::{finish, packing_top, PipelineTrace, SolveBudgets, SolveError, SolveResult};

/// Pseudo-polynomial pipeline: nice-container layouts over the full item
/// set, a medium box and a small-leftover box on top.
pub fn solve_pptas(
    instance: &Instance,
    eps: Frac,
    budgets: &SolveBudgets,
) -> Result<SolveResult, SolveError> {
    solve_with(instance, eps, budgets, Mode::Pptas)
}

/// Polynomial pipeline: tall items bottom-left-flushed, containers beside
/// them, a reserved box absorbing vertical-assignment errors, and top boxes
/// for medium, leftover horizontal, and leftover small items.
pub fn solve_three_halves(
    instance: &Instance,
    eps: Frac,
    budgets: &SolveBudgets,
) -> Result<SolveResult, SolveError> {
    solve_with(instance, eps, budgets, Mode::ThreeHalves)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Pptas,
    ThreeHalves,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Pptas => "pptas",
            Mode::ThreeHalves => "three-halves",
        }
    }
}

struct Candidate {
    packing: Packing,
    opt: u64,
    layout: ContainerLayout,
    top_boxes: Vec<(String, u64)>,
    notes: Vec<String>,
}

fn solve_with(
    instance: &Instance,
    eps: Frac,
    budgets: &SolveBudgets,
    mode: Mode,
) -> Result<SolveResult, SolveError> {
    if instance.is_empty() {
        let trace = PipelineTrace {
            algorithm: mode.name().into(),
            ..Default::default()
        };
        return finish(instance, Packing::new(vec![], 0), None, trace);
    }

    let mut notes = Vec::new();
    let candidate = if mode == Mode::Pptas {
        let height_cap = ceil_frac(fint(instance.len() as u64) / eps);
        if instance.max_height() > height_cap {
            run_normalized(instance, eps, budgets, &mut notes)
        } else {
            search(instance, eps, budgets, mode)
        }
    } else {
        search(instance, eps, budgets, mode)
    };

    match candidate {
        Some(c) => {
            let mut trace = PipelineTrace {
                algorithm: mode.name().into(),
                chosen_opt: Some(c.opt),
                layout: Some(c.layout),
                top_boxes: c.top_boxes,
                fallback: false,
                budget_exhausted: false,
                notes: c.notes,
            };
            trace.notes.extend(notes);
            finish(instance, c.packing, None, trace)
        }
        None => {
            let (packing, tree) = nfdh_strip(instance);
            let mut trace = PipelineTrace {
                algorithm: mode.name().into(),
                fallback: true,
                budget_exhausted: true,
                ..Default::default()
            };
            trace
                .notes
                .push("no layout candidate packed everything; NFDH fallback".into());
            trace.notes.extend(notes);
            finish(instance, packing, Some(tree), trace)
        }
    }
}

/// Caps heights at `ceil(n/eps)` before searching, then replays the found
/// layout on the original instance with an integer vertical stretch.
fn run_normalized(
    instance: &Instance,
    eps: Frac,
    budgets: &SolveBudgets,
    notes: &mut Vec<String>,
) -> Option<Candidate> {
    let n = instance.len() as u64;
    let h_max = instance.max_height();
    // lambda = eps * h_max / n; normalized heights round up, the stretch
    // factor rounds lambda up to an integer so capacities stay sufficient.
    let lambda = eps * fint(h_max) / fint(n);
    let stretch = ceil_frac(lambda).max(1);
    let dims: Vec<(u64, u64)> = instance
        .items
        .iter()
        .map(|i| (i.width, ceil_frac(fint(i.height) / lambda).max(1)))
        .collect();
    let normalized = Instance::new(instance.strip_width, &dims);
    notes.push(format!(
        "normalized heights to <= ceil(n/eps), stretch {stretch}"
    ));

    let scaled_budgets = SolveBudgets {
        template: None,
        ..budgets.clone()
    };
    if budgets.template.is_some() {
        notes.push("template dropped during height normalization".into());
    }
    let found = search(&normalized, eps, &scaled_budgets, Mode::Pptas)?;

    // Replay on the original instance with the layout stretched vertically.
    let layout = ContainerLayout::new(
        instance.strip_width,
        found
            .layout
            .containers
            .iter()
            .map(|c| {
                let mut scaled = c.clone();
                scaled.rect = Rect::new(
                    c.rect.left,
                    c.rect.bottom * stretch,
                    c.rect.right,
                    c.rect.top * stretch,
                );
                scaled
            })
            .collect(),
    );
    let opt = found.opt.saturating_mul(stretch);
    let (classes, profile) = classify_at(instance, opt, eps, budgets.container_budget)?;
    match try_layout(instance, &classes, &profile, opt, &layout, eps, Mode::Pptas) {
        Ok(mut c) => {
            c.notes
                .push("replayed normalized layout at original heights".into());
            Some(c)
        }
        Err(why) => {
            notes.push(format!("normalized replay failed: {why}"));
            None
        }
    }
}

fn classify_at(
    instance: &Instance,
    opt: u64,
    eps: Frac,
    container_budget: u64,
) -> Option<(Classification, ConstantProfile)> {
    let profile = choose_constants_with_budget(eps, instance, opt, container_budget).ok()?;
    let classes = classify(instance, opt, profile.delta, profile.mu).ok()?;
    Some((classes, profile))
}

fn search(instance: &Instance, eps: Frac, budgets: &SolveBudgets, mode: Mode) -> Option<Candidate> {
    let lb = lower_bound(instance);
    let (nfdh, _) = nfdh_strip(instance);
    let lo = match mode {
        Mode::Pptas => lb,
        // The NFDH height is a 3-approximation, so OPT lies in
        // [nfdh/3, nfdh]; the lower bound can only sharpen that.
        Mode::ThreeHalves => lb.max(nfdh.height.div_ceil(3)),
    };
    let grid = opt_grid(lo, nfdh.height, eps, budgets.max_opt_candidates);
    let mut best: Option<Candidate> = None;
    for opt in grid {
        let Some((classes, profile)) = classify_at(instance, opt, eps, budgets.container_budget)
        else {
            continue;
        };
        let layouts = candidate_layouts(instance, &classes, &profile, opt, budgets, mode);
        for layout in layouts.into_iter().take(budgets.max_layouts) {
            match try_layout(instance, &classes, &profile, opt, &layout, eps, mode) {
                Ok(c) => {
                    if best
                        .as_ref()
                        .is_none_or(|b| c.packing.height < b.packing.height)
                    {
                        best = Some(c);
                    }
                }
                Err(_) => continue,
            }
        }
    }
    best
}

/// Geometric `(1+eps)` grid from `lo` to `hi`, both included.
fn opt_grid(lo: u64, hi: u64, eps: Frac, max: usize) -> Vec<u64> {
    let mut grid = Vec::new();
    if hi == 0 {
        return grid;
    }
    let lo = lo.max(1);
    let mut value = fint(lo);
    while grid.len() + 1 < max {
        let rounded = ceil_frac(value);
        if rounded >= hi {
            break;
        }
        if grid.last() != Some(&rounded) {
            grid.push(rounded);
        }
        value *= fint(1) + eps;
    }
    if grid.last() != Some(&hi) {
        grid.push(hi);
    }
    grid
}

fn ceil_frac(f: Frac) -> u64 {
    f.ceil().to_integer() as u64
}

fn candidate_layouts(
    instance: &Instance,
    classes: &Classification,
    profile: &ConstantProfile,
    opt: u64,
    budgets: &SolveBudgets,
    mode: Mode,
) -> Vec<ContainerLayout> {
    let mut out = Vec::new();
    if let Some(template) = &budgets.template {
        let template = ContainerLayout::new(instance.strip_width, template.containers.clone());
        out.push(match mode {
            Mode::Pptas => template,
            Mode::ThreeHalves => shrink_layout(&template, profile, opt, instance.strip_width),
        });
    }
    match mode {
        Mode::Pptas => {
            // Two members of the column-layout family: tall and vertical
            // items merged into one row, or kept in separate rows.
            let merged: Vec<usize> = {
                let mut ids = classes.ids_in(ItemClass::Tall);
                ids.extend(classes.ids_in(ItemClass::Vertical));
                ids
            };
            out.extend(synth_columns(
                instance,
                classes,
                opt,
                profile,
                0,
                &[merged],
                false,
            ));
            let split = [
                classes.ids_in(ItemClass::Tall),
                classes.ids_in(ItemClass::Vertical),
            ];
            out.extend(synth_columns(
                instance, classes, opt, profile, 0, &split, false,
            ));
        }
        Mode::ThreeHalves => {
            let tall_width: u64 = classes
                .ids_in(ItemClass::Tall)
                .iter()
                .map(|&id| instance.items[id].width)
                .sum();
            if tall_width <= instance.strip_width {
                let vers = [classes.ids_in(ItemClass::Vertical)];
                out.extend(synth_columns(
                    instance, classes, opt, profile, tall_width, &vers, true,
                ));
            }
        }
    }
    out.dedup();
    out
}

/// One container column per populated class, laid out left to right from
/// `x0`; tall/vertical items come pre-grouped into side-by-side rows.
/// Returns nothing when the columns cannot fit the strip.
fn synth_columns(
    instance: &Instance,
    classes: &Classification,
    opt: u64,
    profile: &ConstantProfile,
    x0: u64,
    row_groups: &[Vec<usize>],
    three_halves: bool,
) -> Option<ContainerLayout> {
    let w = instance.strip_width;
    let mut x = x0;
    let mut containers = Vec::new();
    for column_ids in row_groups {
        if column_ids.is_empty() {
            continue;
        }
        let width: u64 = column_ids.iter().map(|&id| instance.items[id].width).sum();
        let height = column_ids
            .iter()
            .map(|&id| instance.items[id].height)
            .max()
            .unwrap();
        containers.push(Container::new(
            x,
            0,
            width,
            height,
            ContainerKind::VerticalSideBySide,
        ));
        x = x.checked_add(width)?;
    }
    for id in classes.ids_in(ItemClass::Large) {
        let item = &instance.items[id];
        containers.push(Container::new(
            x,
            0,
            item.width,
            item.height,
            ContainerKind::SingleLarge,
        ));
        x = x.checked_add(item.width)?;
    }
    let hor = classes.ids_in(ItemClass::Horizontal);
    if !hor.is_empty() {
        let width = hor
            .iter()
            .map(|&id| instance.items[id].width)
            .max()
            .unwrap();
        let height: u64 = hor.iter().map(|&id| instance.items[id].height).sum();
        containers.push(Container::new(
            x,
            0,
            width,
            height,
            ContainerKind::HorizontalStack,
        ));
        x = x.checked_add(width)?;
    }
    // The reserved box only matters when vertical items might get routed.
    let mut reserve = 0;
    if three_halves && !classes.ids_in(ItemClass::Vertical).is_empty() {
        reserve = ceil_frac(profile.eps1 * fint(w)).max(1);
    }
    let small = classes.ids_in(ItemClass::Small);
    if !small.is_empty() {
        if x + reserve >= w {
            return None;
        }
        let width = w - x - reserve;
        containers.push(Container::new(
            x,
            0,
            width,
            opt,
            ContainerKind::SmallNfdh(profile.epsilon),
        ));
        x += width;
    }
    if reserve > 0 {
        if x + reserve > w {
            return None;
        }
        containers.push(Container::reserved(x, 0, reserve, opt / 2));
        x += reserve;
    }
    if x > w {
        return None;
    }
    Some(ContainerLayout::new(w, containers))
}

/// Applies the polynomial pipeline's size rounding to a guessed layout:
/// stack heights shrink to multiples of `eps2*OPT`, row widths to multiples
/// of `eps3*W`, and small boxes to the `eps4` grid in both axes. The
/// quantum never drops below one unit so coordinates stay integral.
fn shrink_layout(
    layout: &ContainerLayout,
    profile: &ConstantProfile,
    opt: u64,
    strip_width: u64,
) -> ContainerLayout {
    let q2 = floor_scaled(profile.eps2, opt).max(1);
    let q3 = floor_scaled(profile.eps3, strip_width).max(1);
    let q4w = floor_scaled(profile.eps4, strip_width).max(1);
    let q4h = floor_scaled(profile.eps4, opt).max(1);
    let containers = layout
        .containers
        .iter()
        .map(|c| {
            let mut shrunk = c.clone();
            if c.reserved {
                return shrunk;
            }
            let r = c.rect;
            match c.kind {
                ContainerKind::HorizontalStack => {
                    let h = (r.height() / q2) * q2;
                    shrunk.rect = Rect::new(r.left, r.bottom, r.right, r.bottom + h);
                }
                ContainerKind::VerticalSideBySide => {
                    let w = (r.width() / q3) * q3;
                    shrunk.rect = Rect::new(r.left, r.bottom, r.left + w, r.top);
                }
                ContainerKind::SmallNfdh(_) => {
                    let w = (r.width() / q4w) * q4w;
                    let h = (r.height() / q4h) * q4h;
                    shrunk.rect = Rect::new(r.left, r.bottom, r.left + w, r.bottom + h);
                }
                ContainerKind::SingleLarge | ContainerKind::MediumBlock => {}
            }
            shrunk
        })
        .collect();
    ContainerLayout::new(layout.strip_width, containers)
}

struct Kept {
    container: Container,
    placements: Vec<Placement>,
}

fn try_layout(
    instance: &Instance,
    classes: &Classification,
    profile: &ConstantProfile,
    opt: u64,
    layout: &ContainerLayout,
    eps: Frac,
    mode: Mode,
) -> Result<Candidate, String> {
    let w = instance.strip_width;
    let class_slice = &classes.classes;
    let mut notes = Vec::new();

    for c in &layout.containers {
        if c.rect.right > w {
            return Err("container exceeds strip width".into());
        }
    }

    // Tall items: flushed on the floor (3/2) or assigned like verticals.
    let tall_ids = classes.ids_in(ItemClass::Tall);
    let mut flushed: Vec<Placement> = Vec::new();
    let mut tall_rects: Vec<Rect> = Vec::new();
    if mode == Mode::ThreeHalves {
        let tall_items = items_from(instance, &tall_ids);
        flushed =
            bottom_left_flush(&tall_items, w).map_err(|e| format!("tall flush failed: {e}"))?;
        for p in &flushed {
            let item = &instance.items[p.item_id];
            tall_rects.push(Rect::new(p.left, p.bottom, p.right(item), p.top(item)));
        }
        for c in &layout.containers {
            if tall_rects.iter().any(|t| t.overlaps_open(&c.rect)) {
                return Err("container overlaps the flushed tall block".into());
            }
        }
    }

    // Partition the layout by kind.
    let mut hstacks = Vec::new();
    let mut vsides = Vec::new();
    let mut singles = Vec::new();
    let mut smalls = Vec::new();
    let mut reserved: Option<Container> = None;
    for c in &layout.containers {
        if c.rect.width() == 0 || c.rect.height() == 0 {
            continue;
        }
        if c.reserved {
            if reserved.is_none() {
                reserved = Some(c.clone());
            }
            continue;
        }
        match c.kind {
            ContainerKind::HorizontalStack => hstacks.push(c.clone()),
            ContainerKind::VerticalSideBySide => vsides.push(c.clone()),
            ContainerKind::SingleLarge => singles.push(c.clone()),
            ContainerKind::SmallNfdh(_) => smalls.push(c.clone()),
            ContainerKind::MediumBlock => {}
        }
    }

    let mut kept: Vec<Kept> = Vec::new();

    // Large items: one exact or best-fitting container each.
    let mut unmatched_large = classes.ids_in(ItemClass::Large);
    for c in &singles {
        let pick = unmatched_large
            .iter()
            .copied()
            .filter(|&id| {
                let it = &instance.items[id];
                it.width <= c.width() && it.height <= c.height()
            })
            .min_by_key(|&id| {
                let it = &instance.items[id];
                let exact = it.width == c.width() && it.height == c.height();
                (!exact, u128::MAX - it.area(), id)
            });
        if let Some(id) = pick {
            unmatched_large.retain(|&x| x != id);
            let fill = fill_container(c, &items_from(instance, &[id]), class_slice)
                .map_err(|e| format!("large fill failed: {e}"))?;
            kept.push(Kept {
                container: c.clone(),
                placements: fill.placements,
            });
        }
    }
    if !unmatched_large.is_empty() {
        return Err(format!(
            "{} large items without a container",
            unmatched_large.len()
        ));
    }

    // Horizontal items into stacks via GAP on heights.
    let hor_ids = classes.ids_in(ItemClass::Horizontal);
    let mut routed_hor: Vec<usize> = Vec::new();
    if !hor_ids.is_empty() {
        if hstacks.is_empty() {
            routed_hor = hor_ids.clone();
        } else {
            let items = items_from(instance, &hor_ids);
            let assignment = assign_to_containers(&items, &hstacks, AssignMode::Height)
                .map_err(|e| format!("horizontal assignment failed: {e}"))?;
            for (j, c) in hstacks.iter().enumerate() {
                let members: Vec<Item> = assignment
                    .assigned_to(j)
                    .into_iter()
                    .map(|pos| items[pos])
                    .collect();
                if members.is_empty() {
                    continue;
                }
                let fill = fill_container(c, &members, class_slice)
                    .map_err(|e| format!("horizontal fill failed: {e}"))?;
                kept.push(Kept {
                    container: c.clone(),
                    placements: fill.placements,
                });
            }
            routed_hor = assignment
                .unassigned()
                .into_iter()
                .map(|pos| items[pos].id)
                .collect();
        }
    }
    if mode == Mode::Pptas && !routed_hor.is_empty() {
        return Err(format!("{} horizontal items unassigned", routed_hor.len()));
    }

    // Tall (pptas only) and vertical items into rows via GAP on widths.
    let mut row_ids = if mode == Mode::Pptas {
        tall_ids.clone()
    } else {
        Vec::new()
    };
    row_ids.extend(classes.ids_in(ItemClass::Vertical));
    let mut routed_ver: Vec<usize> = Vec::new();
    if !row_ids.is_empty() {
        if vsides.is_empty() {
            routed_ver = row_ids.clone();
        } else {
            let items = items_from(instance, &row_ids);
            let assignment = assign_to_containers(&items, &vsides, AssignMode::Width)
                .map_err(|e| format!("vertical assignment failed: {e}"))?;
            for (j, c) in vsides.iter().enumerate() {
                let members: Vec<Item> = assignment
                    .assigned_to(j)
                    .into_iter()
                    .map(|pos| items[pos])
                    .collect();
                if members.is_empty() {
                    continue;
                }
                let fill = fill_container(c, &members, class_slice)
                    .map_err(|e| format!("vertical fill failed: {e}"))?;
                kept.push(Kept {
                    container: c.clone(),
                    placements: fill.placements,
                });
            }
            routed_ver = assignment
                .unassigned()
                .into_iter()
                .map(|pos| items[pos].id)
                .collect();
        }
    }
    if mode == Mode::Pptas && !routed_ver.is_empty() {
        return Err(format!(
            "{} tall/vertical items unassigned",
            routed_ver.len()
        ));
    }

    // Route leftover verticals into the reserved box (3/2 only).
    if !routed_ver.is_empty() {
        let routed_items = items_from(instance, &routed_ver);
        let routed_width: u64 = routed_items.iter().map(|i| i.width).sum();
        if fint(routed_width) > profile.eps1 * fint(w) {
            return Err(format!(
                "reserved-box width budget exceeded: routed {routed_width} > eps1*W"
            ));
        }
        let Some(bstar) = &reserved else {
            return Err("leftover verticals but no reserved box".into());
        };
        if routed_width > bstar.width() {
            return Err("leftover verticals exceed the reserved box width".into());
        }
        let mut sorted = routed_items.clone();
        by_decreasing_height(&mut sorted);
        let mut x = bstar.rect.left;
        let mut placements = Vec::new();
        for item in &sorted {
            if item.height > bstar.height() {
                return Err(format!(
                    "routed item {} taller than the reserved box",
                    item.id
                ));
            }
            placements.push(Placement::new(item.id, x, bstar.rect.bottom));
            x += item.width;
        }
        notes.push(format!(
            "routed {} verticals of width {routed_width} into the reserved box",
            routed_ver.len()
        ));
        kept.push(Kept {
            container: bstar.clone(),
            placements,
        });
    } else if let Some(bstar) = &reserved {
        kept.push(Kept {
            container: bstar.clone(),
            placements: Vec::new(),
        });
    }

    // Small items into small boxes via GAP on areas; NFDH rejections join
    // the GAP leftovers in the top box.
    let small_ids = classes.ids_in(ItemClass::Small);
    let mut leftover_small: Vec<usize> = Vec::new();
    if !small_ids.is_empty() {
        if smalls.is_empty() {
            leftover_small = small_ids.clone();
        } else {
            let items = items_from(instance, &small_ids);
            let assignment = assign_to_containers(&items, &smalls, AssignMode::Area)
                .map_err(|e| format!("small assignment failed: {e}"))?;
            for (j, c) in smalls.iter().enumerate() {
                let members: Vec<Item> = assignment
                    .assigned_to(j)
                    .into_iter()
                    .map(|pos| items[pos])
                    .collect();
                if members.is_empty() {
                    continue;
                }
                let fill = fill_container(c, &members, class_slice)
                    .map_err(|e| format!("small fill failed: {e}"))?;
                leftover_small.extend(fill.rejected.iter().copied());
                kept.push(Kept {
                    container: c.clone(),
                    placements: fill.placements,
                });
            }
            leftover_small.extend(assignment.unassigned().into_iter().map(|pos| items[pos].id));
        }
    }

    // The used boxes plus the flushed talls must be guillotine separable.
    let mut gate: Vec<Rect> = tall_rects.clone();
    gate.extend(kept.iter().map(|k| k.container.rect));
    if separate_rects(
        &gate.iter().copied().enumerate().collect::<Vec<_>>(),
        Rect::new(0, 0, w, gate.iter().map(|r| r.top).max().unwrap_or(0)),
    )
    .is_err()
    {
        return Err("boxes plus tall items are not guillotine separable".into());
    }

    // Assemble: container fills, flushed talls, then the top boxes.
    let mut placements: Vec<Placement> = flushed;
    for k in &kept {
        placements.extend(k.placements.iter().copied());
    }
    let mut top_boxes = Vec::new();
    let mut y = packing_top(instance, &placements)
        .max(kept.iter().map(|k| k.container.rect.top).max().unwrap_or(0));

    let medium_ids = classes.ids_in(ItemClass::Medium);
    if !medium_ids.is_empty() {
        let items = items_from(instance, &medium_ids);
        let (bmed, med_placements) =
            pack_medium(&items, opt, w, eps).map_err(|e| format!("medium box failed: {e}"))?;
        placements.extend(
            med_placements
                .into_iter()
                .map(|p| Placement::new(p.item_id, p.left, p.bottom + y)),
        );
        top_boxes.push(("medium".to_string(), bmed.height()));
        y += bmed.height();
    }

    if !routed_hor.is_empty() {
        let mut items = items_from(instance, &routed_hor);
        by_decreasing_height(&mut items);
        let total: u64 = items.iter().map(|i| i.height).sum();
        if fint(total) > fint(4) * eps * fint(opt) {
            return Err(format!(
                "leftover-horizontal box budget exceeded: {total} > 4*eps*OPT"
            ));
        }
        let mut yy = y;
        for item in &items {
            placements.push(Placement::new(item.id, 0, yy));
            yy += item.height;
        }
        notes.push(format!(
            "routed {} horizontals of height {total} into the top box",
            items.len()
        ));
        top_boxes.push(("horizontal".to_string(), total));
        y = yy;
    }

    if !leftover_small.is_empty() {
        let items = items_from(instance, &leftover_small);
        let (bsmall, small_placements) = pack_small_leftovers(&items, opt, w, eps)
            .map_err(|e| format!("small-leftover box failed: {e}"))?;
        placements.extend(
            small_placements
                .into_iter()
                .map(|p| Placement::new(p.item_id, p.left, p.bottom + y)),
        );
        top_boxes.push(("small-leftover".to_string(), bsmall.height()));
    }

    let height = packing_top(instance, &placements);
    let packing = Packing::new(placements, height);
    if !verify_packing(instance, &packing).is_empty() {
        return Err("assembled packing failed verification".into());
    }
    if check_separable(instance, &packing).is_err() {
        return Err("assembled packing is not guillotine separable".into());
    }
    let kept_layout = ContainerLayout::new(w, kept.into_iter().map(|k| k.container).collect());
    Ok(Candidate {
        packing,
        opt,
        layout: kept_layout,
        top_boxes,
        notes,
    })
}

fn items_from(instance: &Instance, ids: &[usize]) -> Vec<Item> {
    ids.iter().map(|&id| instance.items[id]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::frac;

    #[test]
    fn grid_is_geometric_and_covers_both_ends() {
        let g = opt_grid(8, 30, frac(1, 4), 24);
        assert_eq!(g.first(), Some(&8));
        assert_eq!(g.last(), Some(&30));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_item_is_solved_exactly() {
        let i = Instance::new(10, &[(4, 9)]);
        let r = solve_pptas(&i, frac(1, 4), &SolveBudgets::default()).unwrap();
        assert_eq!(r.height, 9);
        let r = solve_three_halves(&i, frac(1, 4), &SolveBudgets::default()).unwrap();
        assert_eq!(r.height, 9);
    }

    #[test]
    fn all_tall_instance_flushes_to_max_height() {
        // Every item taller than half the lower bound: flush is optimal.
        let i = Instance::new(12, &[(3, 10), (4, 9), (2, 8), (3, 7)]);
        let r = solve_three_halves(&i, frac(1, 4), &SolveBudgets::default()).unwrap();
        assert_eq!(r.height, 10);
        assert!(!r.trace.fallback);
    }

    #[test]
    fn adversarial_instance_falls_back_to_nfdh() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let dims: Vec<(u64, u64)> = (0..25)
            .map(|_| (rng.gen_range(1..=9), rng.gen_range(1..=9)))
            .collect();
        let i = Instance::new(9, &dims);
        let r = solve_pptas(&i, frac(1, 4), &SolveBudgets::default()).unwrap();
        // Whether via a layout or the fallback, the result verifies.
        assert!(r.height >= r.lower_bound);
        assert!(crate::model::verify_packing(&i, &r.packing).is_empty());
    }

    #[test]
    fn shrink_rounds_sizes_down_to_the_quantum_grid() {
        // eps=1/4, g=2, OPT=64, W=128: eps2*OPT = 2, eps3*W = 2, and the
        // eps4 grid is 2 wide and 1 tall.
        let instance = Instance::new(128, &[(4, 64)]);
        let profile =
            crate::model::choose_constants_with_budget(frac(1, 4), &instance, 64, 2).unwrap();
        let layout = ContainerLayout::new(
            128,
            vec![
                Container::new(0, 0, 10, 7, ContainerKind::HorizontalStack),
                Container::new(10, 0, 9, 30, ContainerKind::VerticalSideBySide),
                Container::new(20, 0, 5, 5, ContainerKind::SmallNfdh(frac(1, 4))),
                Container::reserved(30, 0, 22, 32),
            ],
        );
        let shrunk = shrink_layout(&layout, &profile, 64, 128);
        assert_eq!(shrunk.containers[0].height(), 6); // 7 -> multiple of 2
        assert_eq!(shrunk.containers[0].width(), 10); // width untouched
        assert_eq!(shrunk.containers[1].width(), 8); // 9 -> multiple of 2
        assert_eq!(shrunk.containers[1].height(), 30);
        assert_eq!(shrunk.containers[2].width(), 4); // eps4 grid
        assert_eq!(shrunk.containers[2].height(), 5); // q4h = 1
        assert_eq!(shrunk.containers[3], layout.containers[3]); // reserved
    }

    #[test]
    fn normalization_kicks_in_for_huge_heights() {
        let i = Instance::new(10, &[(4, 1_000_000), (5, 600_000), (6, 250_000)]);
        let r = solve_pptas(&i, frac(1, 4), &SolveBudgets::default()).unwrap();
        assert!(r.height >= 1_000_000);
        assert!(crate::model::verify_packing(&i, &r.packing).is_empty());
        assert!(r.trace.notes.iter().any(|n| n.contains("normalized")));
    }
}
