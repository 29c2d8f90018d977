//! Deterministic text renderings: pyramids as ascii boxes, TikZ source,
//! or DOT graphs, and the dominance Hasse diagram as a DOT digraph.
//!
//! French convention throughout: row 1 is drawn at the bottom. Boxes have
//! width 2 in column units; half-box shifts show up as odd offsets.

use crate::error::{CoreError, Result};
use crate::partitions::{all_partitions, covers_above, Partition};
use crate::pyramids::{Filling, Pyramid};
use std::fmt::Write as _;
use std::str::FromStr;

/// Output format for the renderers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Tex,
    Dot,
}

impl FromStr for RenderFormat {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascii" => Ok(RenderFormat::Ascii),
            "tex" => Ok(RenderFormat::Tex),
            "dot" => Ok(RenderFormat::Dot),
            other => Err(CoreError::Input(format!("unknown format {other:?} (ascii, tex, dot)"))),
        }
    }
}

/// Render a pyramid, optionally with box labels from a filling.
pub fn render_pyramid(p: &Pyramid, f: Option<&Filling>, format: RenderFormat) -> Result<String> {
    if let Some(f) = f {
        if f.pyramid() != p {
            return Err(CoreError::Input("filling belongs to a different pyramid".into()));
        }
    }
    Ok(match format {
        RenderFormat::Ascii => ascii_pyramid(p, f),
        RenderFormat::Tex => tex_pyramid(p, f),
        RenderFormat::Dot => dot_pyramid(p, f),
    })
}

fn ascii_pyramid(p: &Pyramid, f: Option<&Filling>) -> String {
    let rows = p.rows();
    let min_edge = (1..=rows).map(|r| p.col(r, 0) - 1).min().unwrap();
    let max_edge = (1..=rows)
        .map(|r| p.col(r, p.shape().part(r) - 1) + 1)
        .max()
        .unwrap();
    let width = ((max_edge - min_edge) * 2 + 1) as usize;
    let height = 2 * rows + 1;
    let mut canvas = vec![vec![' '; width]; height];
    let xpos = |edge: i64| ((edge - min_edge) * 2) as usize;
    for r in 1..=rows {
        let top = 2 * (rows - r);
        for t in 0..p.shape().part(r) {
            let c = p.col(r, t);
            let (x0, x1) = (xpos(c - 1), xpos(c + 1));
            for line in [top, top + 2] {
                canvas[line][x0] = '+';
                canvas[line][x1] = '+';
                for cell in &mut canvas[line][x0 + 1..x1] {
                    if *cell == ' ' {
                        *cell = '-';
                    }
                }
            }
            canvas[top + 1][x0] = '|';
            canvas[top + 1][x1] = '|';
            if let Some(f) = f {
                let label = format!("{:^3}", f.label_at(r, t));
                for (k, ch) in label.chars().enumerate() {
                    canvas[top + 1][x0 + 1 + k] = ch;
                }
            }
        }
    }
    let mut out = String::new();
    for line in canvas {
        let s: String = line.into_iter().collect();
        out.push_str(s.trim_end());
        out.push('\n');
    }
    out
}

fn tex_pyramid(p: &Pyramid, f: Option<&Filling>) -> String {
    let mut out = String::from("\\begin{tikzpicture}[x=2.5ex,y=5ex]\n");
    for r in 1..=p.rows() {
        for t in 0..p.shape().part(r) {
            let c = p.col(r, t);
            let _ = writeln!(
                out,
                "  \\draw ({}, {}) rectangle ({}, {});",
                c - 1,
                r - 1,
                c + 1,
                r
            );
            if let Some(f) = f {
                let _ = writeln!(
                    out,
                    "  \\node at ({}, {}.5) {{{}}};",
                    c,
                    r - 1,
                    f.label_at(r, t)
                );
            }
        }
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

fn dot_pyramid(p: &Pyramid, f: Option<&Filling>) -> String {
    let mut out = String::from("digraph pyramid {\n  node [shape=square];\n");
    let name = |r: usize, t: usize| -> String {
        match f {
            Some(f) => format!("b{}", f.label_at(r, t)),
            None => format!("r{}t{}", r, t),
        }
    };
    for r in 1..=p.rows() {
        for t in 0..p.shape().part(r) {
            let label = match f {
                Some(f) => f.label_at(r, t).to_string(),
                None => format!("{},{}", r, p.col(r, t)),
            };
            let _ = writeln!(out, "  {} [label=\"{}\"];", name(r, t), label);
        }
    }
    for r in 1..=p.rows() {
        for t in 1..p.shape().part(r) {
            let _ = writeln!(out, "  {} -> {};", name(r, t - 1), name(r, t));
        }
    }
    out.push_str("}\n");
    out
}

/// DOT digraph of the dominance covering relation on partitions of n,
/// edges pointing from covered to covering partition.
pub fn render_hasse(n: usize) -> Result<String> {
    let parts = all_partitions(n)?;
    let node = |p: &Partition| -> String {
        let tags: Vec<String> = p.parts().iter().map(ToString::to_string).collect();
        format!("p{}", tags.join("_"))
    };
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
    for p in &parts {
        let _ = writeln!(out, "  {} [label=\"{}\"];", node(p), p);
    }
    for p in &parts {
        for lam in covers_above(p) {
            let _ = writeln!(out, "  {} -> {};", node(p), node(&lam));
        }
    }
    out.push_str("}\n");
    Ok(out)
}
