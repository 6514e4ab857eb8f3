//! SVG rendering of packings: the strip outline, items as labeled filled
//! rectangles, and cut lines colored by stage parity.

use gspkit::guillotine::{CutNode, CutTree};
use gspkit::model::{Instance, Packing};

const CANVAS: f64 = 760.0;
const MARGIN: f64 = 20.0;

struct Mapper {
    scale: f64,
    height: u64,
}

impl Mapper {
    fn x(&self, x: u64) -> f64 {
        MARGIN + x as f64 * self.scale
    }

    /// SVG y grows downward; the strip grows upward.
    fn y(&self, y: u64) -> f64 {
        MARGIN + (self.height - y) as f64 * self.scale
    }
}

pub fn render_svg(instance: &Instance, packing: &Packing, tree: Option<&CutTree>) -> String {
    let width = instance.strip_width.max(1);
    let height = packing.height.max(1);
    let scale = CANVAS / width.max(height) as f64;
    let map = Mapper { scale, height };

    let view_w = width as f64 * scale + 2.0 * MARGIN;
    let view_h = height as f64 * scale + 2.0 * MARGIN;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{view_w:.0}\" height=\"{view_h:.0}\" \
         viewBox=\"0 0 {view_w:.1} {view_h:.1}\">\n"
    );

    for p in &packing.placements {
        let item = &instance.items[p.item_id];
        let x = map.x(p.left);
        let y = map.y(p.top(item));
        let w = item.width as f64 * scale;
        let h = item.height as f64 * scale;
        let hue = (p.item_id * 47) % 360;
        out.push_str(&format!(
            "  <rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{w:.1}\" height=\"{h:.1}\" \
             fill=\"hsl({hue},60%,72%)\" stroke=\"#333\" stroke-width=\"1\"/>\n"
        ));
        let font = (w.min(h) * 0.5).clamp(6.0, 24.0);
        out.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"{font:.0}\" text-anchor=\"middle\" \
             dominant-baseline=\"middle\" font-family=\"monospace\">{}</text>\n",
            x + w / 2.0,
            y + h / 2.0,
            p.item_id
        ));
    }

    if let Some(tree) = tree {
        draw_cuts(tree, None, 0, &map, &mut out);
    }

    // Strip outline on top of everything.
    out.push_str(&format!(
        "  <rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" \
         fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n",
        map.x(0),
        map.y(packing.height),
        width as f64 * scale,
        packing.height as f64 * scale,
    ));
    out.push_str("</svg>\n");
    out
}

/// Cut segments alternate color per stage: a new stage starts whenever the
/// cut orientation changes along the path from the root.
fn draw_cuts(tree: &CutTree, last: Option<bool>, stage: usize, map: &Mapper, out: &mut String) {
    let (vertical, children) = match &tree.node {
        CutNode::Item(_) | CutNode::Waste => return,
        CutNode::Vertical { left, right, .. } => (true, (left, right)),
        CutNode::Horizontal { bottom, top, .. } => (false, (bottom, top)),
    };
    let stage = if last == Some(vertical) {
        stage
    } else {
        stage + 1
    };
    let color = if stage % 2 == 1 { "#1f4fd8" } else { "#d8321f" };
    let (x1, y1, x2, y2) = match &tree.node {
        CutNode::Vertical { x, .. } => (
            map.x(*x),
            map.y(tree.region.top),
            map.x(*x),
            map.y(tree.region.bottom),
        ),
        CutNode::Horizontal { y, .. } => (
            map.x(tree.region.left),
            map.y(*y),
            map.x(tree.region.right),
            map.y(*y),
        ),
        _ => unreachable!(),
    };
    out.push_str(&format!(
        "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" \
         stroke=\"{color}\" stroke-width=\"2\"/>\n"
    ));
    draw_cuts(children.0, Some(vertical), stage, map, out);
    draw_cuts(children.1, Some(vertical), stage, map, out);
}
