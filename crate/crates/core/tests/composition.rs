//! End-to-end composition invariant: when a container layout passes the
//! box-level separability check and every container's fill passes its local
//! check, the composed item packing passes the item-level checker.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gspkit::containers::{
    fill_container, verify_layout, Container, ContainerKind, FilledContainer,
};
use gspkit::guillotine::{check_separable, cuts_separating_boxes};
use gspkit::model::{frac, verify_packing, Instance, ItemClass, Packing};

/// Builds a three-container layout (row, stack, small box) with randomly
/// drawn contents that are guaranteed to fit.
fn build_layout(seed: u64) -> (Instance, Vec<ItemClass>, Vec<FilledContainer>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dims: Vec<(u64, u64)> = Vec::new();
    let mut classes: Vec<ItemClass> = Vec::new();

    // Row of tall/vertical items.
    let ver_count = rng.gen_range(1..=4);
    let mut ver_ids = Vec::new();
    let mut row_width = 0;
    for _ in 0..ver_count {
        let w = rng.gen_range(1..=4);
        let h = rng.gen_range(5..=12);
        ver_ids.push(dims.len());
        dims.push((w, h));
        classes.push(ItemClass::Vertical);
        row_width += w;
    }
    let row = Container::new(0, 0, row_width, 12, ContainerKind::VerticalSideBySide);

    // Stack of horizontal items.
    let hor_count = rng.gen_range(1..=4);
    let mut hor_ids = Vec::new();
    let mut stack_height = 0;
    for _ in 0..hor_count {
        let w = rng.gen_range(6..=10);
        let h = rng.gen_range(1..=3);
        hor_ids.push(dims.len());
        dims.push((w, h));
        classes.push(ItemClass::Horizontal);
        stack_height += h;
    }
    let stack = Container::new(
        row_width,
        0,
        10,
        stack_height,
        ContainerKind::HorizontalStack,
    );

    // Small box, filled to at most half its area.
    let small_box = Container::new(
        row_width + 10,
        0,
        12,
        12,
        ContainerKind::SmallNfdh(frac(1, 4)),
    );
    let mut small_ids = Vec::new();
    let mut area = 0;
    while area + 4 <= 12 * 12 / 2 && rng.gen_bool(0.8) {
        let w = rng.gen_range(1..=3);
        let h = rng.gen_range(1..=3);
        area += w * h;
        small_ids.push(dims.len());
        dims.push((w, h));
        classes.push(ItemClass::Small);
    }

    let strip = row_width + 10 + 12 + rng.gen_range(0..=6);
    let instance = Instance::new(strip, &dims);
    let fill = |container: &Container, ids: &[usize]| {
        let items: Vec<_> = ids.iter().map(|&id| instance.items[id]).collect();
        FilledContainer {
            container: container.clone(),
            placements: fill_container(container, &items, &classes)
                .unwrap()
                .placements,
        }
    };
    let filled = vec![
        fill(&row, &ver_ids),
        fill(&stack, &hor_ids),
        fill(&small_box, &small_ids),
    ];
    (instance, classes, filled)
}

#[test]
fn separable_boxes_with_nice_fills_compose() {
    for seed in 0..60 {
        let (instance, classes, filled) = build_layout(seed);
        let boxes: Vec<_> = filled.iter().map(|fc| fc.container.rect).collect();
        cuts_separating_boxes(&boxes, instance.strip_width)
            .unwrap_or_else(|ns| panic!("seed {seed}: boxes not separable at {:?}", ns.region));
        let report = verify_layout(&instance, &classes, &filled);
        assert!(report.is_empty(), "seed {seed}: {report:?}");

        // The composed item packing passes the item-level checker.
        let placements: Vec<_> = filled
            .iter()
            .flat_map(|fc| fc.placements.iter().copied())
            .collect();
        let height = placements
            .iter()
            .map(|p| p.top(&instance.items[p.item_id]))
            .max()
            .unwrap_or(0);
        let packing = Packing::new(placements, height);
        assert!(
            verify_packing(&instance, &packing).is_empty(),
            "seed {seed}"
        );
        check_separable(&instance, &packing).expect("composed packing must separate");
    }
}

#[test]
fn small_rejections_keep_the_prefix_feasible() {
    // Overfilled small box: rejected items are reported, the placed prefix
    // stays inside the box and separable.
    let dims: Vec<(u64, u64)> = (0..60).map(|_| (2, 2)).collect();
    let instance = Instance::new(40, &dims);
    let classes = vec![ItemClass::Small; 60];
    let small_box = Container::new(0, 0, 10, 10, ContainerKind::SmallNfdh(frac(1, 4)));
    let fill = fill_container(&small_box, &instance.items, &classes).unwrap();
    assert!(!fill.rejected.is_empty());
    assert!(!fill.placements.is_empty());
    for p in &fill.placements {
        let item = &instance.items[p.item_id];
        assert!(p.right(item) <= 10 && p.top(item) <= 10);
    }
}
