//! Seeded instance generators: uniform random instances, partition-reduction
//! instances with an independently computed answer, and planted instances
//! drawn from a known container layout (so their optimum is pinned by
//! construction).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::containers::{Container, ContainerKind, ContainerLayout};
use crate::model::{frac, Frac, Instance, ModelError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Skew {
    Uniform,
    Tall,
    Wide,
    Small,
}

#[derive(Debug, Clone)]
pub struct RandomParams {
    pub n: usize,
    pub strip_width: u64,
    pub max_height: u64,
    pub skew: Skew,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self {
            n: 20,
            strip_width: 100,
            max_height: 100,
            skew: Skew::Uniform,
        }
    }
}

/// Uniform widths in `[1,W]` and heights in `[1,H_max]`, optionally skewed
/// toward tall, wide, or small shapes. Pure in `(params, seed)`.
pub fn random_instance(params: &RandomParams, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = params.strip_width;
    let h = params.max_height;
    let dims: Vec<(u64, u64)> = (0..params.n)
        .map(|_| match params.skew {
            Skew::Uniform => (rng.gen_range(1..=w), rng.gen_range(1..=h)),
            Skew::Tall => (
                rng.gen_range(1..=w.div_ceil(4)),
                rng.gen_range(h.div_ceil(2)..=h),
            ),
            Skew::Wide => (
                rng.gen_range(w.div_ceil(2)..=w),
                rng.gen_range(1..=h.div_ceil(4)),
            ),
            Skew::Small => (
                rng.gen_range(1..=w.div_ceil(8).max(1)),
                rng.gen_range(1..=h.div_ceil(8).max(1)),
            ),
        })
        .collect();
    Instance::new(w, &dims)
}

#[derive(Debug, Clone)]
pub struct PartitionCertificate {
    pub values: Vec<u64>,
    /// Whether the values split into two halves of equal sum, decided by
    /// subset-sum enumeration independent of any packing code.
    pub answer: bool,
}

/// The partition reduction: one unit-height rectangle of width `i_k` per
/// value, strip width `T/2`. A YES instance packs at height exactly 2; a NO
/// instance needs at least 3.
pub fn partition_instance(values: &[u64]) -> Result<(Instance, PartitionCertificate), ModelError> {
    let total: u64 = values.iter().sum();
    if !total.is_multiple_of(2) {
        return Err(ModelError::Param(format!(
            "partition needs an even total, got {total}"
        )));
    }
    if values.contains(&0) {
        return Err(ModelError::Param(
            "partition values must be positive".into(),
        ));
    }
    if values.iter().any(|&v| v > total / 2) {
        return Err(ModelError::Param("a value exceeds half the total".into()));
    }
    let dims: Vec<(u64, u64)> = values.iter().map(|&v| (v, 1)).collect();
    let instance = Instance::new(total / 2, &dims);
    let certificate = PartitionCertificate {
        values: values.to_vec(),
        answer: has_equal_partition(values),
    };
    Ok((instance, certificate))
}

/// Subset-sum check for an equal split; exponential, intended for the small
/// reduction instances only.
pub fn has_equal_partition(values: &[u64]) -> bool {
    let total: u64 = values.iter().sum();
    if !total.is_multiple_of(2) {
        return false;
    }
    let target = total / 2;
    let mut reachable = vec![false; target as usize + 1];
    reachable[0] = true;
    for &v in values {
        for s in (v as usize..reachable.len()).rev() {
            if reachable[s - v as usize] {
                reachable[s] = true;
            }
        }
    }
    reachable[target as usize]
}

/// Draws positive values with an even total (the reduction needs an
/// integral strip width).
pub fn random_partition_values(n: usize, max_value: u64, seed: u64) -> Vec<u64> {
    assert!(n >= 2 && max_value >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut values: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max_value)).collect();
        let total: u64 = values.iter().sum();
        if !total.is_multiple_of(2) {
            values[0] += 1;
        }
        let total: u64 = values.iter().sum();
        if values.iter().all(|&v| v <= total / 2) {
            return values;
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedParams {
    pub strip_width: u64,
    pub opt: u64,
    /// Container budget the solving pipeline will be given; the generator
    /// aligns container sizes to the matching rounding quanta.
    pub container_budget: u64,
    pub epsilon: Frac,
}

impl Default for PlantedParams {
    fn default() -> Self {
        Self {
            strip_width: 128,
            opt: 64,
            container_budget: 2,
            epsilon: frac(1, 4),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Planted {
    pub instance: Instance,
    pub layout: ContainerLayout,
    /// Height of the planted packing; the instance's optimum is at most
    /// this, and a full-height anchor item makes it exactly this.
    pub opt: u64,
}

/// A planted nice layout for the pseudo-polynomial pipeline: side-by-side
/// tall/vertical columns, single-item boxes, a horizontal stack, and a
/// small box, all exactly filled. The anchor item of height `opt` pins the
/// lower bound to the layout height.
pub fn planted_nice(params: &PlantedParams, seed: u64) -> Planted {
    build_planted(params, seed, false)
}

/// A planted flushed layout for the polynomial pipeline: tall items on the
/// floor, containers beside them, and a reserved box. Container sizes are
/// aligned to the pipeline's rounding quanta so the plant survives size
/// rounding.
pub fn planted_flushed(params: &PlantedParams, seed: u64) -> Planted {
    build_planted(params, seed, true)
}

fn build_planted(params: &PlantedParams, seed: u64, flushed: bool) -> Planted {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = params.strip_width;
    let opt = params.opt;
    let g = params.container_budget;
    assert!(
        w >= 128 && opt >= 64,
        "planted columns need room on the strip"
    );

    // Window (delta, mu) = (eps, eps^2/g^2) with eps = 1/4, g = 2 gives
    // delta = 1/4 and mu = 1/64; the thresholds below hard-code that shape.
    assert_eq!(
        params.epsilon,
        frac(1, 4),
        "planted generator is tuned for eps = 1/4"
    );
    assert_eq!(g, 2, "planted generator is tuned for container budget 2");
    let delta_w = w / 4;
    let delta_h = opt / 4;
    let mu_w = w / 64;
    let mu_h = opt / 64;
    // Rounding quanta of the 3/2 pipeline (eps2 = 1/32, eps3 = eps1/8).
    let q2 = (opt / 32).max(1);
    let q3 = (w / 48).max(1);
    let reserve = if flushed { (w / 6) + 1 } else { 0 };

    let mut dims: Vec<(u64, u64)> = Vec::new();
    let mut containers: Vec<Container> = Vec::new();
    let mut x = 0u64;

    // Tall block: anchor of height exactly `opt` plus a few more talls;
    // width capped at 12 units.
    let tall_count = rng.gen_range(2..=3);
    let mut tall_dims = vec![(rng.gen_range(2..=4), opt)];
    for _ in 1..tall_count {
        tall_dims.push((rng.gen_range(2..=4), rng.gen_range(opt / 2 + 1..=opt)));
    }
    let tall_width: u64 = tall_dims.iter().map(|d| d.0).sum();
    dims.extend(&tall_dims);
    if !flushed {
        containers.push(Container::new(
            0,
            0,
            tall_width,
            opt,
            ContainerKind::VerticalSideBySide,
        ));
    }
    x += tall_width;

    // Vertical column (width capped at 12): widths aligned to q3 in the
    // flushed variant so the column survives container-width rounding.
    let ver_count = rng.gen_range(2..=3);
    let mut ver_width = 0;
    let mut ver_height = 0;
    for _ in 0..ver_count {
        let width = if flushed {
            q3 * rng.gen_range(1..=2)
        } else {
            rng.gen_range(2..=4)
        };
        let height = rng.gen_range(delta_h + 1..=opt / 2);
        dims.push((width, height));
        ver_width += width;
        ver_height = ver_height.max(height);
    }
    containers.push(Container::new(
        x,
        0,
        ver_width,
        ver_height,
        ContainerKind::VerticalSideBySide,
    ));
    x += ver_width;

    // One single large item in an exact-fit box.
    {
        let width = rng.gen_range(delta_w + 1..=delta_w + 2);
        let height = rng.gen_range(delta_h + 1..=opt / 2);
        dims.push((width, height));
        containers.push(Container::new(
            x,
            0,
            width,
            height,
            ContainerKind::SingleLarge,
        ));
        x += width;
    }

    // Horizontal stack: unit-height items wider than delta*W; the stack
    // height is a multiple of q2 so it survives height rounding.
    let hor_width = delta_w + rng.gen_range(1..=2);
    let hor_count = q2 * rng.gen_range(2..=3);
    for _ in 0..hor_count {
        dims.push((rng.gen_range(delta_w + 1..=hor_width), 1));
    }
    containers.push(Container::new(
        x,
        0,
        hor_width,
        hor_count,
        ContainerKind::HorizontalStack,
    ));
    x += hor_width;

    // Small box in the remaining width, filled to at most half its area so
    // NFDH provably packs everything.
    let remaining = w.saturating_sub(x + reserve);
    assert!(
        remaining >= 8,
        "width budget miscalculated: x={x} reserve={reserve}"
    );
    {
        let box_w = remaining;
        let box_h = (opt / 2).max(8);
        let small_w = mu_w.clamp(1, box_w / 4);
        let small_h = mu_h.clamp(1, box_h / 4);
        let capacity = (box_w * box_h) / (2 * small_w * small_h);
        let count = rng.gen_range(8..=capacity.clamp(8, 24));
        for _ in 0..count {
            dims.push((small_w, small_h));
        }
        containers.push(Container::new(
            x,
            0,
            box_w,
            box_h,
            ContainerKind::SmallNfdh(params.epsilon),
        ));
        x += box_w;
    }

    if flushed {
        containers.push(Container::reserved(x, 0, reserve, opt / 2));
        x += reserve;
    }
    assert!(x <= w);

    // Shuffle ids so the instance does not leak the construction order.
    let mut order: Vec<usize> = (0..dims.len()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let shuffled: Vec<(u64, u64)> = order.iter().map(|&i| dims[i]).collect();

    Planted {
        instance: Instance::new(w, &shuffled),
        layout: ContainerLayout::new(w, containers),
        opt,
    }
}
