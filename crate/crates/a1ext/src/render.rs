//! Deterministic rendering of charts and module cell diagrams: ASCII grids,
//! SVG 1.1, and the shared JSON schemas. Identical inputs give identical
//! bytes.

use crate::chart::ExtChart;
use crate::margolis::{margolis_homology, MargolisOp};
use crate::module::{GradedModule, ModuleFile};
use std::collections::BTreeMap;
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
    Json,
}

/// Window and layout for chart rendering. Cohomology charts are usually
/// rendered right-to-left (`rtl`), matching the convention of displaying
/// cohomological degrees increasing leftward; data stays left-to-right.
#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub stem_lo: i64,
    pub stem_hi: i64,
    pub s_max: u32,
    pub rtl: bool,
    pub format: Format,
    pub cell: u32,
}

impl RenderSpec {
    pub fn new(stem_lo: i64, stem_hi: i64, s_max: u32, format: Format) -> RenderSpec {
        assert!(stem_lo <= stem_hi, "window must be nonempty");
        RenderSpec {
            stem_lo,
            stem_hi,
            s_max,
            rtl: false,
            format,
            cell: 16,
        }
    }

    pub fn rtl(mut self) -> RenderSpec {
        self.rtl = true;
        self
    }
}

pub fn render_chart(chart: &ExtChart, spec: &RenderSpec) -> String {
    match spec.format {
        Format::Json => {
            let mut s = serde_json::to_string(chart).expect("chart serializes");
            s.push('\n');
            s
        }
        Format::Ascii => render_chart_ascii(chart, spec),
        Format::Svg => render_chart_svg(chart, spec),
    }
}

fn in_window(spec: &RenderSpec, stem: i64, s: u32) -> bool {
    stem >= spec.stem_lo && stem <= spec.stem_hi && s <= spec.s_max
}

fn render_chart_ascii(chart: &ExtChart, spec: &RenderSpec) -> String {
    let labels: Vec<String> = (spec.stem_lo..=spec.stem_hi).map(|c| c.to_string()).collect();
    let cw = labels.iter().map(|l| l.len()).max().unwrap_or(1).max(3) + 1;
    let nstems = (spec.stem_hi - spec.stem_lo + 1) as usize;
    let width = nstems * cw;
    let height = 2 * spec.s_max as usize + 1;
    let mut grid = vec![vec![' '; width]; height];
    let x_of = |stem: i64| -> usize {
        let col = if spec.rtl {
            (spec.stem_hi - stem) as usize
        } else {
            (stem - spec.stem_lo) as usize
        };
        col * cw
    };
    let y_of = |s: u32| -> usize { 2 * (spec.s_max - s) as usize };

    let counts = chart.counts();
    let mut clipped = 0usize;
    for (&(stem, s), &n) in &counts {
        if !in_window(spec, stem, s) {
            clipped += n;
            continue;
        }
        let ch = match n {
            1 => '\u{2022}',
            2..=9 => char::from_digit(n as u32, 10).unwrap(),
            _ => '+',
        };
        grid[y_of(s)][x_of(stem)] = ch;
    }
    // Edge glyphs; positions derive from dot ids (stem:s:index).
    let pos: BTreeMap<&str, (i64, u32)> = chart
        .dots
        .iter()
        .map(|d| (d.id.as_str(), (d.stem, d.s)))
        .collect();
    for (a, b) in &chart.h0 {
        if let (Some(&(c, s)), Some(&(c2, s2))) = (pos.get(a.as_str()), pos.get(b.as_str())) {
            debug_assert!(c == c2 && s2 == s + 1);
            if in_window(spec, c, s) && in_window(spec, c2, s2) {
                grid[y_of(s) - 1][x_of(c)] = '|';
            }
        }
    }
    for (a, b) in &chart.h1 {
        if let (Some(&(c, s)), Some(&(c2, s2))) = (pos.get(a.as_str()), pos.get(b.as_str())) {
            if in_window(spec, c, s) && in_window(spec, c2, s2) {
                let (x1, x2) = (x_of(c), x_of(c2));
                let x = x1.min(x2) + cw / 2;
                grid[y_of(s) - 1][x] = if x2 > x1 { '/' } else { '\\' };
            }
        }
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        "stems {}..{}  filtration 0..{}{}",
        spec.stem_lo,
        spec.stem_hi,
        spec.s_max,
        if spec.rtl { "  (right-to-left)" } else { "" }
    );
    if clipped > 0 {
        let _ = writeln!(out, "(clipped: {clipped} dots outside window)");
    }
    for row in &grid {
        let line: String = row.iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out.push_str(&"-".repeat(width));
    out.push('\n');
    let mut axis = vec![' '; width];
    for stem in spec.stem_lo..=spec.stem_hi {
        let label = stem.to_string();
        let x = x_of(stem);
        for (i, ch) in label.chars().enumerate() {
            if x + i < width {
                axis[x + i] = ch;
            }
        }
    }
    let axis_line: String = axis.iter().collect();
    out.push_str(axis_line.trim_end());
    out.push('\n');
    out
}

fn render_chart_svg(chart: &ExtChart, spec: &RenderSpec) -> String {
    let cell = spec.cell as i64;
    let margin = cell;
    let nstems = spec.stem_hi - spec.stem_lo + 1;
    let w = margin * 2 + (nstems - 1) * cell;
    let h = margin * 2 + spec.s_max as i64 * cell + cell;
    let x_of = |stem: i64| -> i64 {
        let col = if spec.rtl {
            spec.stem_hi - stem
        } else {
            stem - spec.stem_lo
        };
        margin + col * cell
    };
    let y_of = |s: u32| -> i64 { margin + (spec.s_max - s) as i64 * cell };
    // Per-dot coordinates, with multiplicities fanned out horizontally.
    let mut seen: BTreeMap<(i64, u32), i64> = BTreeMap::new();
    let mut coords: BTreeMap<&str, (i64, i64)> = BTreeMap::new();
    let mut circles = String::new();
    for d in &chart.dots {
        if !in_window(spec, d.stem, d.s) {
            continue;
        }
        let n = seen.entry((d.stem, d.s)).or_insert(0);
        let (x, y) = (x_of(d.stem) + *n * 5, y_of(d.s));
        *n += 1;
        coords.insert(&d.id, (x, y));
        let _ = writeln!(circles, r#"<circle cx="{x}" cy="{y}" r="3" fill="black"/>"#);
    }
    let mut lines = String::new();
    for (edges, class) in [(&chart.h0, "h0"), (&chart.h1, "h1")] {
        for (a, b) in edges {
            if let (Some(&(x1, y1)), Some(&(x2, y2))) =
                (coords.get(a.as_str()), coords.get(b.as_str()))
            {
                let _ = writeln!(
                    lines,
                    r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" class="{class}"/>"#
                );
            }
        }
    }
    let mut labels = String::new();
    for stem in spec.stem_lo..=spec.stem_hi {
        let x = x_of(stem);
        let y = h - 4;
        let _ = writeln!(
            labels,
            r#"<text x="{x}" y="{y}" font-size="10" text-anchor="middle">{stem}</text>"#
        );
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n{lines}{circles}{labels}</svg>\n"
    )
}

/// Render a module cell diagram: dots per basis element arranged by degree,
/// Sq1 as straight segments, Sq2 as arcs, Q1-homology representatives
/// circled (every basis element in a representative's support is marked).
pub fn render_module(m: &GradedModule, format: Format, cell: u32) -> String {
    match format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(&ModuleFile::from_module(m)).expect("serializes");
            s.push('\n');
            s
        }
        Format::Ascii => render_module_ascii(m),
        Format::Svg => render_module_svg(m, cell as i64),
    }
}

fn q1_marked(m: &GradedModule) -> Vec<bool> {
    let mut marked = vec![false; m.dim()];
    for (_, v, _) in margolis_homology(m, MargolisOp::Q1).representatives {
        for i in v.support() {
            marked[i] = true;
        }
    }
    marked
}

fn slot_layout(m: &GradedModule) -> (Vec<(i64, usize)>, usize) {
    let mut slots: Vec<(i64, usize)> = Vec::with_capacity(m.dim());
    let mut max_slot = 0;
    let mut per_degree: BTreeMap<i64, usize> = BTreeMap::new();
    for i in 0..m.dim() {
        let d = m.degree(i);
        let slot = per_degree.entry(d).or_insert(0);
        slots.push((d, *slot));
        max_slot = max_slot.max(*slot);
        *slot += 1;
    }
    (slots, max_slot)
}

fn render_module_ascii(m: &GradedModule) -> String {
    let mut out = String::new();
    if m.dim() == 0 {
        out.push_str("empty module\n");
        return out;
    }
    let lo = m.min_degree().unwrap();
    let hi = m.max_degree().unwrap();
    let labels: Vec<String> = (lo..=hi).map(|d| d.to_string()).collect();
    let cw = labels.iter().map(|l| l.len()).max().unwrap().max(2) + 1;
    let width = ((hi - lo + 1) as usize) * cw;
    let (slots, max_slot) = slot_layout(m);
    let marked = q1_marked(m);
    let mut grid = vec![vec![' '; width]; max_slot + 1];
    for i in 0..m.dim() {
        let (d, slot) = slots[i];
        let x = ((d - lo) as usize) * cw;
        grid[slot][x] = if marked[i] { '\u{2299}' } else { '\u{2022}' };
    }
    let _ = writeln!(out, "degrees {lo}..{hi}  dim {}", m.dim());
    for row in &grid {
        let line: String = row.iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out.push_str(&"-".repeat(width));
    out.push('\n');
    let mut axis = vec![' '; width];
    for d in lo..=hi {
        let label = d.to_string();
        let x = ((d - lo) as usize) * cw;
        for (i, ch) in label.chars().enumerate() {
            if x + i < width {
                axis[x + i] = ch;
            }
        }
    }
    let axis_line: String = axis.iter().collect();
    out.push_str(axis_line.trim_end());
    out.push('\n');
    for (op, name) in [(m.sq1(), "Sq1"), (m.sq2(), "Sq2")] {
        for j in 0..m.dim() {
            for i in op.column(j).support() {
                let _ = writeln!(out, "{name}: {} -> {}", m.label(j), m.label(i));
            }
        }
    }
    let q1 = margolis_homology(m, MargolisOp::Q1);
    for (d, _, label) in &q1.representatives {
        let _ = writeln!(out, "Q1 class in degree {d}: {label}");
    }
    out
}

fn render_module_svg(m: &GradedModule, cell: i64) -> String {
    if m.dim() == 0 {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"32\" height=\"32\" viewBox=\"0 0 32 32\"></svg>\n".to_string();
    }
    let lo = m.min_degree().unwrap();
    let hi = m.max_degree().unwrap();
    let (slots, max_slot) = slot_layout(m);
    let marked = q1_marked(m);
    let margin = cell;
    let w = margin * 2 + (hi - lo) * cell;
    let h = margin * 2 + (max_slot as i64) * cell + cell;
    let pos = |i: usize| -> (i64, i64) {
        let (d, slot) = slots[i];
        (margin + (d - lo) * cell, margin + slot as i64 * cell)
    };
    let mut body = String::new();
    for (op, class) in [(m.sq1(), "sq1"), (m.sq2(), "sq2")] {
        for j in 0..m.dim() {
            for i in op.column(j).support() {
                let (x1, y1) = pos(j);
                let (x2, y2) = pos(i);
                if class == "sq1" {
                    let _ = writeln!(
                        body,
                        r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" class="sq1"/>"#
                    );
                } else {
                    let cx = (x1 + x2) / 2;
                    let cy = y1.min(y2) - cell / 2;
                    let _ = writeln!(
                        body,
                        r#"<path d="M {x1} {y1} Q {cx} {cy} {x2} {y2}" stroke="black" fill="none" class="sq2"/>"#
                    );
                }
            }
        }
    }
    for i in 0..m.dim() {
        let (x, y) = pos(i);
        let _ = writeln!(body, r#"<circle cx="{x}" cy="{y}" r="3" fill="black"/>"#);
        if marked[i] {
            let _ = writeln!(
                body,
                r#"<circle cx="{x}" cy="{y}" r="6" fill="none" stroke="black"/>"#
            );
        }
    }
    for d in lo..=hi {
        let x = margin + (d - lo) * cell;
        let y = h - 4;
        let _ = writeln!(
            body,
            r#"<text x="{x}" y="{y}" font-size="10" text-anchor="middle">{d}</text>"#
        );
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n{body}</svg>\n"
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::ext_chart;
    use crate::km2::build_joker;
    use crate::resolution::DEFAULT_GENERATOR_BUDGET;

    #[test]
    fn rendering_is_deterministic() {
        let m = GradedModule::trivial(0);
        let c = ext_chart(&m, 6, 18, DEFAULT_GENERATOR_BUDGET).unwrap();
        let spec = RenderSpec::new(0, 8, 6, Format::Ascii);
        let a = render_chart(&c.chart, &spec);
        let b = render_chart(&c.chart, &spec);
        assert_eq!(a, b);
        let svg1 = render_chart(&c.chart, &RenderSpec::new(0, 8, 6, Format::Svg));
        let svg2 = render_chart(&c.chart, &RenderSpec::new(0, 8, 6, Format::Svg));
        assert_eq!(svg1, svg2);
    }

    #[test]
    fn empty_chart_renders_header_and_grid() {
        let chart = ExtChart::default();
        let spec = RenderSpec::new(0, 4, 3, Format::Ascii);
        let text = render_chart(&chart, &spec);
        assert!(text.starts_with("stems 0..4"));
        assert!(text.lines().count() >= 5);
    }

    #[test]
    fn json_round_trips_through_render() {
        let m = GradedModule::trivial(0);
        let c = ext_chart(&m, 4, 12, DEFAULT_GENERATOR_BUDGET).unwrap();
        let text = render_chart(&c.chart, &RenderSpec::new(0, 8, 4, Format::Json));
        let back: ExtChart = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(back, c.chart);
    }

    #[test]
    fn joker_module_diagram_content() {
        let u = build_joker().module;
        let text = render_module(&u, Format::Ascii, 16);
        // Five dots in degrees 2..6, edges as in the figure conventions,
        // circle on the degree-4 class.
        assert_eq!(text.matches('\u{2022}').count(), 4);
        assert_eq!(text.matches('\u{2299}').count(), 1);
        assert!(text.contains("Sq1: u0 -> u1"));
        assert!(text.contains("Sq1: u2 -> u1^2"));
        assert!(text.contains("Sq2: u0 -> u0^2"));
        assert!(text.contains("Sq2: u1 -> u2"));
        assert!(text.contains("Sq2: u0^2 -> u1^2"));
        assert!(text.contains("Q1 class in degree 4: u0^2"));
        let svg = render_module(&u, Format::Svg, 16);
        assert_eq!(svg.matches("<circle").count(), 6); // 5 dots + 1 ring
    }

    #[test]
    fn rtl_flips_the_axis() {
        let m = GradedModule::trivial(0);
        let c = ext_chart(&m, 4, 12, DEFAULT_GENERATOR_BUDGET).unwrap();
        let ltr = render_chart(&c.chart, &RenderSpec::new(0, 4, 4, Format::Ascii));
        let rtl = render_chart(&c.chart, &RenderSpec::new(0, 4, 4, Format::Ascii).rtl());
        assert_ne!(ltr, rtl);
        assert!(rtl.contains("right-to-left"));
    }
}
