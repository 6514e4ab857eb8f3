//! Core data model: instances, placements, item classification, lower
//! bounds, and the constant calculus shared by both pipelines.
//!
//! All coordinates and dimensions are integers. Fractional thresholds
//! (`delta`, `mu`, the epsilon family) are exact rationals so that class
//! boundaries never suffer floating-point misclassification.

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

/// Exact rational used for thresholds and constant bookkeeping.
pub type Frac = Ratio<u128>;

/// Shorthand for a rational `p/q`.
pub fn frac(num: u64, den: u64) -> Frac {
    assert!(den != 0, "zero denominator");
    Frac::new(num as u128, den as u128)
}

/// Lifts an integer quantity into the rational domain.
pub fn fint(value: u64) -> Frac {
    Frac::from_integer(value as u128)
}

/// `floor(f * base)` as an integer.
pub fn floor_scaled(f: Frac, base: u64) -> u64 {
    ((f * fint(base)).floor().to_integer()) as u64
}

/// An input rectangle. Width and height are positive integers; width never
/// exceeds the strip width of the owning instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Item {
    pub id: usize,
    pub width: u64,
    pub height: u64,
}

impl Item {
    pub fn new(id: usize, width: u64, height: u64) -> Self {
        Self { id, width, height }
    }

    pub fn area(&self) -> u128 {
        self.width as u128 * self.height as u128
    }
}

/// A strip-packing instance: the strip width plus the items to pack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub strip_width: u64,
    pub items: Vec<Item>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("item {id}: {msg}")]
    BadItem { id: usize, msg: String },
    #[error("{0}")]
    Param(String),
}

impl Instance {
    pub fn new(strip_width: u64, dims: &[(u64, u64)]) -> Self {
        let items = dims
            .iter()
            .enumerate()
            .map(|(id, &(w, h))| Item::new(id, w, h))
            .collect();
        Self { strip_width, items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_area(&self) -> u128 {
        self.items.iter().map(Item::area).sum()
    }

    pub fn max_height(&self) -> u64 {
        self.items.iter().map(|i| i.height).max().unwrap_or(0)
    }

    /// Checks the structural invariants: ids contiguous from 0, positive
    /// dimensions, and every item no wider than the strip.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.strip_width == 0 {
            return Err(ModelError::Param("strip width must be positive".into()));
        }
        for (pos, item) in self.items.iter().enumerate() {
            if item.id != pos {
                return Err(ModelError::BadItem {
                    id: item.id,
                    msg: format!("id out of order at position {pos}"),
                });
            }
            if item.width == 0 || item.height == 0 {
                return Err(ModelError::BadItem {
                    id: item.id,
                    msg: "zero dimension".into(),
                });
            }
            if item.width > self.strip_width {
                return Err(ModelError::BadItem {
                    id: item.id,
                    msg: format!(
                        "width {} exceeds strip width {}",
                        item.width, self.strip_width
                    ),
                });
            }
        }
        Ok(())
    }

    /// Parses the instance text format:
    ///
    /// ```text
    /// strip <W>
    /// <n>
    /// <w> <h>      (n lines)
    /// ```
    pub fn from_text(src: &str) -> Result<Self, ModelError> {
        let mut lines = src.lines().enumerate();
        let (ln, first) = lines.next().ok_or_else(|| ModelError::Parse {
            line: 1,
            msg: "empty file".into(),
        })?;
        let strip_width =
            parse_header(first, "strip").map_err(|msg| ModelError::Parse { line: ln + 1, msg })?;
        let (ln, second) = lines.next().ok_or_else(|| ModelError::Parse {
            line: 2,
            msg: "missing item count".into(),
        })?;
        let n: usize = second.trim().parse().map_err(|_| ModelError::Parse {
            line: ln + 1,
            msg: format!("bad item count `{}`", second.trim()),
        })?;
        let mut dims = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, line) = lines.next().ok_or_else(|| ModelError::Parse {
                line: n + 2,
                msg: format!("expected {n} item lines"),
            })?;
            let mut fields = line.split_whitespace();
            let parse = |f: Option<&str>| -> Result<u64, ModelError> {
                f.and_then(|s| s.parse().ok())
                    .ok_or_else(|| ModelError::Parse {
                        line: ln + 1,
                        msg: format!("expected `<w> <h>`, got `{}`", line.trim()),
                    })
            };
            let w = parse(fields.next())?;
            let h = parse(fields.next())?;
            if fields.next().is_some() {
                return Err(ModelError::Parse {
                    line: ln + 1,
                    msg: "trailing fields on item line".into(),
                });
            }
            dims.push((w, h));
        }
        let instance = Instance::new(strip_width, &dims);
        instance.validate()?;
        Ok(instance)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("strip {}\n{}\n", self.strip_width, self.items.len());
        for item in &self.items {
            out.push_str(&format!("{} {}\n", item.width, item.height));
        }
        out
    }
}

fn parse_header(line: &str, key: &str) -> Result<u64, String> {
    let mut fields = line.split_whitespace();
    match (fields.next(), fields.next(), fields.next()) {
        (Some(k), Some(v), None) if k == key => {
            v.parse().map_err(|_| format!("bad {key} value `{v}`"))
        }
        _ => Err(format!("expected `{key} <value>`, got `{}`", line.trim())),
    }
}

/// The position of one item inside the strip; `right` and `top` are derived
/// from the item dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Placement {
    pub item_id: usize,
    pub left: u64,
    pub bottom: u64,
}

impl Placement {
    pub fn new(item_id: usize, left: u64, bottom: u64) -> Self {
        Self {
            item_id,
            left,
            bottom,
        }
    }

    pub fn right(&self, item: &Item) -> u64 {
        self.left + item.width
    }

    pub fn top(&self, item: &Item) -> u64 {
        self.bottom + item.height
    }
}

/// A complete packing: one placement per item plus the achieved height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    pub placements: Vec<Placement>,
    pub height: u64,
}

impl Packing {
    pub fn new(mut placements: Vec<Placement>, height: u64) -> Self {
        placements.sort_by_key(|p| p.item_id);
        Self { placements, height }
    }
}

/// One verification failure; `verify_packing` reports all of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingItem(usize),
    DuplicateItem(usize),
    UnknownItem(usize),
    OutOfStrip { item: usize },
    AboveHeight { item: usize, top: u64 },
    Overlap { a: usize, b: usize },
    HeightNotTight { declared: u64, actual: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingItem(id) => write!(f, "item {id} has no placement"),
            Violation::DuplicateItem(id) => write!(f, "item {id} placed more than once"),
            Violation::UnknownItem(id) => write!(f, "placement references unknown item {id}"),
            Violation::OutOfStrip { item } => write!(f, "item {item} extends past the strip edge"),
            Violation::AboveHeight { item, top } => {
                write!(
                    f,
                    "item {item} tops out at {top}, above the declared height"
                )
            }
            Violation::Overlap { a, b } => write!(f, "items {a} and {b} overlap"),
            Violation::HeightNotTight { declared, actual } => {
                write!(f, "declared height {declared} but max item top is {actual}")
            }
        }
    }
}

/// Verifies a packing against its instance. Items are open sets, so touching
/// edges never count as overlap. Returns every violation found.
pub fn verify_packing(instance: &Instance, packing: &Packing) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = instance.items.len();
    let mut seen = vec![false; n];
    for p in &packing.placements {
        if p.item_id >= n {
            out.push(Violation::UnknownItem(p.item_id));
            continue;
        }
        if seen[p.item_id] {
            out.push(Violation::DuplicateItem(p.item_id));
        }
        seen[p.item_id] = true;
    }
    for (id, seen) in seen.iter().enumerate() {
        if !seen {
            out.push(Violation::MissingItem(id));
        }
    }
    if !out.is_empty() {
        return out;
    }

    let mut max_top = 0;
    for p in &packing.placements {
        let item = &instance.items[p.item_id];
        if p.right(item) > instance.strip_width {
            out.push(Violation::OutOfStrip { item: p.item_id });
        }
        let top = p.top(item);
        if top > packing.height {
            out.push(Violation::AboveHeight {
                item: p.item_id,
                top,
            });
        }
        max_top = max_top.max(top);
    }
    if max_top != packing.height {
        out.push(Violation::HeightNotTight {
            declared: packing.height,
            actual: max_top,
        });
    }
    for (i, a) in packing.placements.iter().enumerate() {
        let ia = &instance.items[a.item_id];
        for b in &packing.placements[i + 1..] {
            let ib = &instance.items[b.item_id];
            let x_open = a.left < b.right(ib) && b.left < a.right(ia);
            let y_open = a.bottom < b.top(ib) && b.bottom < a.top(ia);
            if x_open && y_open {
                out.push(Violation::Overlap {
                    a: a.item_id,
                    b: b.item_id,
                });
            }
        }
    }
    out
}

/// Greatest lower bound we can state without solving: the area bound
/// `ceil(sum(w*h) / W)` and the tallest single item.
pub fn lower_bound(instance: &Instance) -> u64 {
    if instance.items.is_empty() {
        return 0;
    }
    let area = instance.total_area();
    let w = instance.strip_width as u128;
    let area_bound = area.div_ceil(w);
    (area_bound as u64).max(instance.max_height())
}

/// Item classes relative to an `OPT` estimate and the `(delta, mu)` window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ItemClass {
    Tall,
    Large,
    Horizontal,
    Vertical,
    Medium,
    Small,
}

impl fmt::Display for ItemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ItemClass::Tall => "tall",
            ItemClass::Large => "large",
            ItemClass::Horizontal => "horizontal",
            ItemClass::Vertical => "vertical",
            ItemClass::Medium => "medium",
            ItemClass::Small => "small",
        };
        f.write_str(name)
    }
}

/// A full classification of an instance: the thresholds used and the class
/// of every item, indexed by item id.
#[derive(Debug, Clone)]
pub struct Classification {
    pub opt_estimate: u64,
    pub delta: Frac,
    pub mu: Frac,
    pub classes: Vec<ItemClass>,
}

impl Classification {
    pub fn class(&self, id: usize) -> ItemClass {
        self.classes[id]
    }

    pub fn ids_in(&self, class: ItemClass) -> Vec<usize> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == class)
            .map(|(id, _)| id)
            .collect()
    }
}

/// Classifies one item. Tall wins over everything; ties at `OPT/2` fall
/// through to large/vertical since the tall comparison is strict.
fn classify_item(item: &Item, w: u64, opt: u64, delta: Frac, mu: Frac) -> ItemClass {
    let h = fint(item.height);
    let wd = fint(item.width);
    if fint(2) * h > fint(opt) {
        return ItemClass::Tall;
    }
    if h > delta * fint(opt) {
        return if wd > delta * fint(w) {
            ItemClass::Large
        } else {
            ItemClass::Vertical
        };
    }
    if h > mu * fint(opt) {
        return ItemClass::Medium;
    }
    // h <= mu * OPT from here on.
    if wd > delta * fint(w) {
        ItemClass::Horizontal
    } else if wd > mu * fint(w) {
        ItemClass::Medium
    } else {
        ItemClass::Small
    }
}

/// Partitions the items into the six classes for the given thresholds.
pub fn classify(
    instance: &Instance,
    opt_estimate: u64,
    delta: Frac,
    mu: Frac,
) -> Result<Classification, ModelError> {
    if delta <= mu || mu <= Frac::from_integer(0) || delta > Frac::from_integer(1) {
        return Err(ModelError::Param(format!(
            "need 1 >= delta > mu > 0, got delta={delta}, mu={mu}"
        )));
    }
    let classes = instance
        .items
        .iter()
        .map(|i| classify_item(i, instance.strip_width, opt_estimate, delta, mu))
        .collect();
    Ok(Classification {
        opt_estimate,
        delta,
        mu,
        classes,
    })
}

/// Default cap on how many containers a layout may use.
pub const DEFAULT_CONTAINER_BUDGET: u64 = 64;

/// The chosen `(delta, mu)` window together with the derived epsilon family.
#[derive(Debug, Clone)]
pub struct ConstantProfile {
    pub epsilon: Frac,
    pub delta: Frac,
    pub mu: Frac,
    /// Container budget `g`; caps layout sizes and drives the epsilon
    /// family below.
    pub container_budget: u64,
    pub eps1: Frac,
    pub eps2: Frac,
    pub eps3: Frac,
    pub eps4: Frac,
    pub eps5: Frac,
    pub eps6: Frac,
}

impl ConstantProfile {
    fn from_window(epsilon: Frac, delta: Frac, mu: Frac, g: u64) -> Self {
        let gf = fint(g);
        let eps1 = Frac::new(1, 3) / gf;
        let eps2 = epsilon / (fint(4) * gf);
        let eps3 = eps1 / (fint(4) * gf);
        let eps4 = mu;
        let eps5 = eps1 * delta / fint(6);
        let eps6 = epsilon * delta / fint(6);
        Self {
            epsilon,
            delta,
            mu,
            container_budget: g,
            eps1,
            eps2,
            eps3,
            eps4,
            eps5,
            eps6,
        }
    }
}

/// `f(x) = x * epsilon / g^2`, the window-shrinking map.
fn shrink(x: Frac, epsilon: Frac, g: u64) -> Frac {
    x * epsilon / (fint(g) * fint(g))
}

fn medium_area(instance: &Instance, opt: u64, delta: Frac, mu: Frac) -> u128 {
    instance
        .items
        .iter()
        .filter(|i| classify_item(i, instance.strip_width, opt, delta, mu) == ItemClass::Medium)
        .map(Item::area)
        .sum()
}

/// Chooses `(delta, mu)` by scanning windows `(c, f(c))` down the chain
/// `c = epsilon, f(epsilon), f(f(epsilon)), ...` until the items falling in
/// the medium band have total area at most `epsilon * OPT * W`. A window
/// with that property exists because an item can be medium in at most two
/// windows, so the scan always terminates.
pub fn choose_constants(
    epsilon: Frac,
    instance: &Instance,
    opt_estimate: u64,
) -> Result<ConstantProfile, ModelError> {
    choose_constants_with_budget(epsilon, instance, opt_estimate, DEFAULT_CONTAINER_BUDGET)
}

pub fn choose_constants_with_budget(
    epsilon: Frac,
    instance: &Instance,
    opt_estimate: u64,
    container_budget: u64,
) -> Result<ConstantProfile, ModelError> {
    if epsilon <= Frac::from_integer(0) || epsilon >= Frac::from_integer(1) {
        return Err(ModelError::Param(format!(
            "epsilon must be in (0,1), got {epsilon}"
        )));
    }
    if container_budget < 2 {
        return Err(ModelError::Param(
            "container budget must be at least 2".into(),
        ));
    }
    let budget_area = epsilon * fint(opt_estimate) * fint(instance.strip_width);
    let mut delta = epsilon;
    loop {
        let mu = shrink(delta, epsilon, container_budget);
        let area = medium_area(instance, opt_estimate, delta, mu);
        if Frac::from_integer(area) <= budget_area {
            return Ok(ConstantProfile::from_window(
                epsilon,
                delta,
                mu,
                container_budget,
            ));
        }
        delta = mu;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(w: u64, dims: &[(u64, u64)]) -> Instance {
        Instance::new(w, dims)
    }

    #[test]
    fn lower_bound_single_item() {
        assert_eq!(lower_bound(&inst(10, &[(10, 2)])), 2);
    }

    #[test]
    fn lower_bound_area_dominates() {
        // widths 1,2,3 of height 1 in a strip of width 3: area 6/3 = 2.
        assert_eq!(lower_bound(&inst(3, &[(1, 1), (2, 1), (3, 1)])), 2);
    }

    #[test]
    fn lower_bound_max_height_dominates() {
        assert_eq!(lower_bound(&inst(5, &[(5, 4), (2, 7)])), 7);
    }

    #[test]
    fn lower_bound_empty() {
        assert_eq!(lower_bound(&inst(5, &[])), 0);
    }

    #[test]
    fn classify_examples() {
        // W=10, OPT=10, delta=2/5, mu=1/10.
        let i = inst(10, &[(5, 6), (1, 1), (3, 1)]);
        let c = classify(&i, 10, frac(2, 5), frac(1, 10)).unwrap();
        assert_eq!(c.class(0), ItemClass::Tall);
        assert_eq!(c.class(1), ItemClass::Small);
        assert_eq!(c.class(2), ItemClass::Medium);
    }

    #[test]
    fn classify_boundaries() {
        // delta=1/4, mu=1/8, OPT=8, W=8: h=4 is exactly OPT/2, not tall.
        let i = inst(8, &[(5, 4), (2, 4), (5, 1), (8, 2), (1, 1)]);
        let c = classify(&i, 8, frac(1, 4), frac(1, 8)).unwrap();
        assert_eq!(c.class(0), ItemClass::Large);
        assert_eq!(c.class(1), ItemClass::Vertical);
        assert_eq!(c.class(2), ItemClass::Horizontal);
        assert_eq!(c.class(3), ItemClass::Medium); // h in (mu*OPT, delta*OPT]
        assert_eq!(c.class(4), ItemClass::Small);
    }

    #[test]
    fn classify_rejects_bad_window() {
        let i = inst(10, &[(1, 1)]);
        assert!(classify(&i, 10, frac(1, 10), frac(1, 10)).is_err());
        assert!(classify(&i, 10, frac(1, 10), frac(1, 5)).is_err());
    }

    #[test]
    fn constants_first_window_when_no_medium() {
        // One tall item only: first window has no medium items.
        let i = inst(100, &[(10, 90)]);
        let p = choose_constants_with_budget(frac(1, 4), &i, 100, 2).unwrap();
        assert_eq!(p.delta, frac(1, 4));
        assert_eq!(p.mu, shrink(frac(1, 4), frac(1, 4), 2));
    }

    #[test]
    fn constants_second_window_when_first_fails() {
        // Concentrate all area in the first window's medium height band
        // (mu1*OPT, delta1*OPT]: eps=1/4, g=2 gives delta1=1/4, mu1=1/64.
        // With OPT=64, W=64: heights in (1, 16] and wide items so that the
        // medium area exceeds eps*OPT*W = 1024.
        let dims: Vec<(u64, u64)> = (0..8).map(|_| (40, 10)).collect();
        let i = inst(64, &dims);
        let p = choose_constants_with_budget(frac(1, 4), &i, 64, 2).unwrap();
        // First window fails (area 8*400 = 3200 > 1024), second accepted.
        assert_eq!(p.delta, frac(1, 64));
        let med = medium_area(&i, 64, p.delta, p.mu);
        assert!(Frac::from_integer(med) <= frac(1, 4) * fint(64) * fint(64));
    }

    #[test]
    fn constants_formula_substitution() {
        let i = inst(100, &[(10, 90)]);
        let p = choose_constants_with_budget(frac(1, 2), &i, 100, 2).unwrap();
        assert_eq!(p.eps1, frac(1, 6));
        assert_eq!(p.eps5, p.eps1 * p.delta / fint(6));
        assert_eq!(p.eps2, p.epsilon / fint(8));
        assert_eq!(p.eps3, p.eps1 / fint(8));
        assert_eq!(p.eps4, p.mu);
        assert_eq!(p.eps6, p.epsilon * p.delta / fint(6));
        // mu <= delta * eps / g^2 holds with equality by construction.
        assert_eq!(p.mu, p.delta * p.epsilon / fint(4));
    }

    #[test]
    fn medium_area_inequality_holds() {
        let dims: Vec<(u64, u64)> = (1..40).map(|k| (1 + k % 7, 1 + k % 11)).collect();
        let i = inst(20, &dims);
        let opt = lower_bound(&i);
        let p = choose_constants_with_budget(frac(1, 4), &i, opt, 4).unwrap();
        let med = medium_area(&i, opt, p.delta, p.mu);
        assert!(Frac::from_integer(med) <= p.epsilon * fint(opt) * fint(i.strip_width));
    }

    #[test]
    fn instance_round_trip() {
        let i = inst(10, &[(5, 4), (5, 4), (6, 3)]);
        let text = i.to_text();
        assert_eq!(Instance::from_text(&text).unwrap(), i);
    }

    #[test]
    fn instance_parse_errors_carry_line_numbers() {
        let err = Instance::from_text("strip 10\n2\n3 4\n").unwrap_err();
        assert!(matches!(err, ModelError::Parse { line: 4, .. }), "{err:?}");
        let err = Instance::from_text("width 10\n0\n").unwrap_err();
        assert!(matches!(err, ModelError::Parse { line: 1, .. }));
        let err = Instance::from_text("strip 10\n1\n3 4 5\n").unwrap_err();
        assert!(matches!(err, ModelError::Parse { line: 3, .. }));
    }

    #[test]
    fn verify_catches_overlap_and_bounds() {
        let i = inst(4, &[(2, 3), (2, 3)]);
        let ok = Packing::new(vec![Placement::new(0, 0, 0), Placement::new(1, 2, 0)], 3);
        assert!(verify_packing(&i, &ok).is_empty());

        let overlap = Packing::new(vec![Placement::new(0, 0, 0), Placement::new(1, 1, 0)], 3);
        assert!(verify_packing(&i, &overlap)
            .iter()
            .any(|v| matches!(v, Violation::Overlap { .. })));

        let out = Packing::new(vec![Placement::new(0, 3, 0), Placement::new(1, 0, 3)], 6);
        assert!(verify_packing(&i, &out)
            .iter()
            .any(|v| matches!(v, Violation::OutOfStrip { .. })));
    }

    #[test]
    fn verify_requires_every_item_once() {
        let i = inst(4, &[(2, 3), (2, 3)]);
        let missing = Packing::new(vec![Placement::new(0, 0, 0)], 3);
        assert!(verify_packing(&i, &missing)
            .iter()
            .any(|v| matches!(v, Violation::MissingItem(1))));
    }

    #[test]
    fn touching_edges_are_not_overlap() {
        let i = inst(4, &[(2, 3), (2, 3)]);
        let stacked = Packing::new(vec![Placement::new(0, 0, 0), Placement::new(1, 0, 3)], 6);
        assert!(verify_packing(&i, &stacked).is_empty());
    }
}
