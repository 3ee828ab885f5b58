//! SVG 1.1 serialisation of scenes.

use std::fmt::Write;

use super::scene::{Anchor, Item, Primitive, Role, Scene, Shape};
use super::{Color, RenderError};

/// Font size in pixels at scale 1.
const BASE_FONT: f64 = 8.0;

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn paint(attr: &str, color: Option<Color>) -> String {
    match color {
        None => format!(" {attr}=\"none\""),
        Some(c) if c.opacity < 1.0 => {
            format!(
                " {attr}=\"{}\" {attr}-opacity=\"{}\"",
                c.hex(),
                num(c.opacity)
            )
        }
        Some(c) => format!(" {attr}=\"{}\"", c.hex()),
    }
}

fn anchor(a: Anchor) -> &'static str {
    match a {
        Anchor::Start => "start",
        Anchor::Middle => "middle",
        Anchor::End => "end",
    }
}

fn role_attrs(role: &Role) -> String {
    let mut s = format!(" class=\"{}\"", role.class());
    match role {
        Role::ConstraintBar {
            covariate,
            from,
            to,
        } => {
            let _ = write!(
                s,
                " data-covariate=\"{}\" data-from=\"{}\" data-to=\"{}\"",
                escape(covariate),
                num(*from),
                num(*to)
            );
        }
        Role::HistogramBin { index, count, .. } => {
            let _ = write!(s, " data-bin=\"{index}\" data-count=\"{count}\"");
        }
        _ => {}
    }
    s
}

fn text_element(
    out: &mut String,
    indent: &str,
    class: &str,
    x: f64,
    y: f64,
    t: &TextStyle,
    content: &str,
) {
    let _ = writeln!(
        out,
        "{indent}<text{class} x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"{}\"{}>{}</text>",
        num(x),
        num(y),
        num(BASE_FONT * t.scale),
        anchor(t.anchor),
        paint("fill", Some(t.color)),
        escape(content)
    );
}

struct TextStyle {
    scale: f64,
    anchor: Anchor,
    color: Color,
}

fn write_shape(out: &mut String, indent: &str, shape: &Shape) {
    let attrs = role_attrs(&shape.role);
    match &shape.primitive {
        Primitive::Rect {
            x,
            y,
            width,
            height,
            fill,
            stroke,
        } => {
            let _ = writeln!(
                out,
                "{indent}<rect{attrs} x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"{}{}/>",
                num(*x),
                num(*y),
                num(width.max(0.0)),
                num(height.max(0.0)),
                paint("fill", *fill),
                paint("stroke", *stroke)
            );
        }
        Primitive::Line {
            x1,
            y1,
            x2,
            y2,
            stroke,
            width,
        } => {
            let _ = writeln!(
                out,
                "{indent}<line{attrs} x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"{} stroke-width=\"{}\"/>",
                num(*x1),
                num(*y1),
                num(*x2),
                num(*y2),
                paint("stroke", Some(*stroke)),
                num(*width)
            );
        }
        Primitive::Polyline {
            points,
            stroke,
            width,
        } => {
            let pts: Vec<String> = points
                .iter()
                .map(|(x, y)| format!("{},{}", num(*x), num(*y)))
                .collect();
            let _ = writeln!(
                out,
                "{indent}<polyline{attrs} points=\"{}\" fill=\"none\"{} stroke-width=\"{}\"/>",
                pts.join(" "),
                paint("stroke", Some(*stroke)),
                num(*width)
            );
        }
        Primitive::Text {
            x,
            y,
            content,
            scale,
            anchor,
            color,
        } => {
            let style = TextStyle {
                scale: *scale,
                anchor: *anchor,
                color: *color,
            };
            text_element(out, indent, &attrs, *x, *y, &style, content);
        }
        Primitive::Axis {
            x1,
            x2,
            y,
            ticks,
            tick_length,
            scale,
            color,
        } => {
            let _ = writeln!(out, "{indent}<g{attrs}>");
            let inner = format!("{indent}  ");
            let stroke = paint("stroke", Some(*color));
            let _ = writeln!(
                out,
                "{inner}<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"{stroke}/>",
                num(*x1),
                num(*y),
                num(*x2),
                num(*y)
            );
            let style = TextStyle {
                scale: *scale,
                anchor: Anchor::Middle,
                color: *color,
            };
            let font = BASE_FONT * scale;
            let label_y = if *tick_length < 0.0 {
                y + tick_length - 2.0
            } else {
                y + tick_length + font
            };
            for tick in ticks {
                let _ = writeln!(
                    out,
                    "{inner}<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"{stroke}/>",
                    num(tick.at),
                    num(*y),
                    num(tick.at),
                    num(y + tick_length)
                );
                text_element(out, &inner, "", tick.at, label_y, &style, &tick.label);
            }
            let _ = writeln!(out, "{indent}</g>");
        }
    }
}

fn write_items(out: &mut String, depth: usize, scene: &Scene) {
    let indent = "  ".repeat(depth);
    for item in &scene.items {
        match item {
            Item::Shape(shape) => write_shape(out, &indent, shape),
            Item::Group(group) => {
                let _ = writeln!(
                    out,
                    "{indent}<g class=\"subplot\" id=\"{}\" transform=\"translate({},{})\">",
                    escape(&group.scene.name),
                    num(group.dx),
                    num(group.dy)
                );
                write_items(out, depth + 1, &group.scene);
                let _ = writeln!(out, "{indent}</g>");
            }
        }
    }
}

/// Serialise `scene` as a standalone SVG document of `width x height`
/// pixels; the scene's own extent becomes the view box.
pub fn render_svg(scene: &Scene, width: f64, height: f64) -> Result<String, RenderError> {
    if !(width.is_finite() && height.is_finite() && width > 0.0 && height > 0.0) {
        return Err(RenderError::BadDimensions(width, height));
    }
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" font-family=\"sans-serif\">",
        num(width),
        num(height),
        num(scene.width),
        num(scene.height)
    );
    let _ = writeln!(
        out,
        "  <rect class=\"background\" x=\"0.00\" y=\"0.00\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        num(scene.width),
        num(scene.height)
    );
    write_items(&mut out, 1, scene);
    out.push_str("</svg>\n");
    Ok(out)
}
