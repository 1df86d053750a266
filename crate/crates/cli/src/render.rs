//! ASCII and SVG drawings of principal polygons.

use std::fmt::Write;

use puremono::polygon::RenderModel;

/// Plot area in character cells; with the margin this stays under 100 columns.
const PLOT_WIDTH: usize = 72;
const PLOT_HEIGHT: usize = 18;
const MARGIN: usize = 6;

struct Scale {
    x_max: f64,
    y_max: f64,
    width: usize,
    height: usize,
}

impl Scale {
    fn new(model: &RenderModel) -> Self {
        let x_max = model.vertices.iter().map(|p| p.x).max().unwrap_or(1).max(1);
        let y_max = model.vertices.iter().map(|p| p.y).max().unwrap_or(1).max(1);
        // whole cells per unit when the polygon is small, so ticks line up
        let width = if x_max as usize <= PLOT_WIDTH {
            (PLOT_WIDTH / x_max as usize) * x_max as usize
        } else {
            PLOT_WIDTH
        };
        let height = if y_max as usize <= PLOT_HEIGHT {
            (PLOT_HEIGHT / y_max as usize).min(3) * y_max as usize
        } else {
            PLOT_HEIGHT
        };
        Scale {
            x_max: x_max as f64,
            y_max: y_max as f64,
            width,
            height,
        }
    }

    fn col(&self, x: f64) -> usize {
        (x * self.width as f64 / self.x_max).round() as usize
    }

    fn row(&self, y: f64) -> usize {
        self.height - (y * self.height as f64 / self.y_max).round() as usize
    }
}

pub fn ascii(model: &RenderModel, title: &str) -> String {
    let mut out = String::new();
    writeln!(out, "{title}").unwrap();
    if model.sides.is_empty() {
        out.push_str("no negative-slope sides\n");
        return out;
    }
    let sc = Scale::new(model);
    let mut grid = vec![vec![' '; sc.width + 1]; sc.height + 1];
    for side in &model.sides {
        let (x0, y0) = (side.start.x as f64, side.start.y as f64);
        let (x1, y1) = (side.end.x as f64, side.end.y as f64);
        let steps = 4 * (sc.col(x1) - sc.col(x0) + sc.row(y1) - sc.row(y0)).max(1);
        for k in 0..=steps {
            let t = k as f64 / steps as f64;
            let (c, r) = (sc.col(x0 + t * (x1 - x0)), sc.row(y0 + t * (y1 - y0)));
            grid[r][c] = '*';
        }
    }
    for p in &model.cloud {
        if (p.x as f64) <= sc.x_max && (p.y as f64) <= sc.y_max {
            let (r, c) = (sc.row(p.y as f64), sc.col(p.x as f64));
            if grid[r][c] == ' ' {
                grid[r][c] = '+';
            }
        }
    }
    for v in &model.vertices {
        grid[sc.row(v.y as f64)][sc.col(v.x as f64)] = 'o';
    }
    for side in &model.sides {
        let mx = (side.start.x + side.end.x) as f64 / 2.0;
        let my = (side.start.y + side.end.y) as f64 / 2.0;
        let (r, c) = (sc.row(my).saturating_sub(1), sc.col(mx) + 1);
        let label: Vec<char> = side.label.chars().collect();
        if c + label.len() <= sc.width && label.iter().enumerate().all(|(i, _)| grid[r][c + i] == ' ') {
            for (i, ch) in label.into_iter().enumerate() {
                grid[r][c + i] = ch;
            }
        }
    }
    let y_ticks: Vec<(usize, i64)> = (0..=sc.y_max as i64).map(|y| (sc.row(y as f64), y)).collect();
    for (r, line) in grid.iter().enumerate() {
        let label = y_ticks
            .iter()
            .find(|&&(row, _)| row == r)
            .map(|&(_, y)| y.to_string())
            .unwrap_or_default();
        let body: String = line.iter().collect();
        writeln!(out, "{label:>w$} |{}", body.trim_end(), w = MARGIN - 2).unwrap();
    }
    let mut axis = vec!['-'; sc.width + 1];
    let mut labels = vec![' '; sc.width + 12];
    let mut xs: Vec<i64> = model.vertices.iter().map(|v| v.x).collect();
    xs.sort_unstable();
    xs.dedup();
    for x in xs {
        let c = sc.col(x as f64);
        axis[c] = '+';
        let text: Vec<char> = x.to_string().chars().collect();
        if c + text.len() <= labels.len()
            && labels[c..c + text.len()].iter().all(|&ch| ch == ' ')
            && (c == 0 || labels[c - 1] == ' ')
        {
            labels[c..c + text.len()].copy_from_slice(&text);
        }
    }
    writeln!(out, "{:>w$} +{}", "", axis.iter().collect::<String>(), w = MARGIN - 2).unwrap();
    let labels: String = labels.iter().collect();
    writeln!(out, "{:>w$}  {}", "", labels.trim_end(), w = MARGIN - 2).unwrap();
    for side in &model.sides {
        writeln!(
            out,
            "  {}: ({}, {}) -- ({}, {})  slope {}",
            side.label, side.start.x, side.start.y, side.end.x, side.end.y, side.slope
        )
        .unwrap();
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Standalone SVG 1.1 document.
pub fn svg(model: &RenderModel, title: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 50.0;
    let x_max = model.vertices.iter().map(|p| p.x).max().unwrap_or(1).max(1) as f64;
    let y_max = model.vertices.iter().map(|p| p.y).max().unwrap_or(1).max(1) as f64;
    let px = |x: f64| PAD + x * (W - 2.0 * PAD) / x_max;
    let py = |y: f64| H - PAD - y * (H - 2.0 * PAD) / y_max;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    s.push_str("<!DOCTYPE svg PUBLIC \"-//W3C//DTD SVG 1.1//EN\" \"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd\">\n");
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    )
    .unwrap();
    writeln!(s, "  <title>{}</title>", escape(title)).unwrap();
    writeln!(s, "  <rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\"/>").unwrap();
    writeln!(
        s,
        "  <text x=\"{}\" y=\"24\" font-family=\"monospace\" font-size=\"14\">{}</text>",
        PAD,
        escape(title)
    )
    .unwrap();
    // axes
    writeln!(
        s,
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        px(0.0),
        py(0.0),
        px(x_max),
        py(0.0)
    )
    .unwrap();
    writeln!(
        s,
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        px(0.0),
        py(0.0),
        px(0.0),
        py(y_max)
    )
    .unwrap();
    for y in 0..=y_max as i64 {
        if y_max <= 20.0 || y == y_max as i64 {
            writeln!(
                s,
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">{y}</text>",
                px(0.0) - 6.0,
                py(y as f64) + 4.0
            )
            .unwrap();
        }
    }
    let mut xs: Vec<i64> = model.vertices.iter().map(|v| v.x).collect();
    xs.sort_unstable();
    xs.dedup();
    for x in xs {
        writeln!(
            s,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{x}</text>",
            px(x as f64),
            py(0.0) + 16.0
        )
        .unwrap();
    }
    for p in &model.cloud {
        if (p.x as f64) <= x_max && (p.y as f64) <= y_max {
            writeln!(
                s,
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"gray\"/>",
                px(p.x as f64),
                py(p.y as f64)
            )
            .unwrap();
        }
    }
    if !model.vertices.is_empty() {
        let pts: Vec<String> = model
            .vertices
            .iter()
            .map(|v| format!("{:.2},{:.2}", px(v.x as f64), py(v.y as f64)))
            .collect();
        writeln!(
            s,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"blue\" stroke-width=\"2\"/>",
            pts.join(" ")
        )
        .unwrap();
    }
    for v in &model.vertices {
        writeln!(
            s,
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"black\"/>",
            px(v.x as f64),
            py(v.y as f64)
        )
        .unwrap();
    }
    for side in &model.sides {
        let mx = (side.start.x + side.end.x) as f64 / 2.0;
        let my = (side.start.y + side.end.y) as f64 / 2.0;
        writeln!(
            s,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" fill=\"blue\">{}</text>",
            px(mx) + 6.0,
            py(my) - 6.0,
            escape(&side.label)
        )
        .unwrap();
    }
    if model.sides.is_empty() {
        writeln!(
            s,
            "  <text x=\"{PAD}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\">no negative-slope sides</text>",
            H / 2.0
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use puremono::polygon::{phi_expand, principal_polygon, Point, PrincipalPolygon};
    use puremono::IntPoly;

    fn x4_minus_17() -> RenderModel {
        let f: IntPoly = "x^4 - 17".parse().unwrap();
        let phi: IntPoly = "x - 1".parse().unwrap();
        principal_polygon(&phi_expand(&f, &phi).unwrap(), 2).unwrap().render_model()
    }

    #[test]
    fn ascii_marks_vertices_and_labels() {
        let s = ascii(&x4_minus_17(), "t");
        for label in ["S1", "S2", "S3"] {
            assert!(s.contains(label));
        }
        assert!(s.contains("slope -1/2"));
        assert!(s.lines().all(|l| l.chars().count() <= 100));
    }

    #[test]
    fn ascii_empty_principal_part() {
        let flat = PrincipalPolygon::from_points(&[Point::new(0, 0), Point::new(2, 1)]);
        assert!(ascii(&flat.render_model(), "t").contains("no negative-slope sides"));
        assert!(svg(&flat.render_model(), "t").contains("no negative-slope sides"));
    }

    #[test]
    fn ascii_fits_for_eight_sides() {
        // slopes -1/1, -1/2, ..., -1/8 with large abscissae
        let mut pts = vec![Point::new(0, 8)];
        let (mut x, mut y) = (0, 8);
        for k in 1..=8 {
            x += k * 1000;
            y -= 1;
            pts.push(Point::new(x, y));
        }
        let model = PrincipalPolygon::from_points(&pts).render_model();
        assert_eq!(model.sides.len(), 8);
        let s = ascii(&model, "eight");
        assert!(s.lines().all(|l| l.chars().count() <= 100), "{s}");
    }

    #[test]
    fn svg_is_xml() {
        let s = svg(&x4_minus_17(), "a < b & c");
        let opts = roxmltree::ParsingOptions { allow_dtd: true, ..Default::default() };
        let doc = roxmltree::Document::parse_with_options(&s, opts).unwrap();
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        let texts: Vec<_> = doc.descendants().filter_map(|n| n.text()).collect();
        assert!(texts.contains(&"S3"));
    }
}
