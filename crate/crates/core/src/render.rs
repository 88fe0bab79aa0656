//! Pictures of planar tilings.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Tiling;

/// Largest side [`render_ascii`] draws.
pub const MAX_ASCII_SIDE: u64 = 200;

const LETTERS: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

const DEFAULT_PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Ascii,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub format: Format,
    /// Pixels per unit cell in SVG output.
    pub cell_size: u32,
    /// Fill colours indexed by brick, reused cyclically.
    pub palette: Vec<String>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            format: Format::Svg,
            cell_size: 20,
            palette: DEFAULT_PALETTE.iter().map(|c| c.to_string()).collect(),
        }
    }
}

fn planar(t: &Tiling) -> Result<(u64, u64)> {
    match t.box_shape.sides() {
        &[rows, cols] => Ok((rows, cols)),
        _ => Err(Error::DimensionUnsupported { dim: t.dim() }),
    }
}

/// One character per cell, one line per value of axis 0.
///
/// Placement `i` is drawn with letter `i` of `A..Z a..z`, cycling; cells
/// no placement covers print as `.`.
pub fn render_ascii(t: &Tiling) -> Result<String> {
    let (rows, cols) = planar(t)?;
    if rows > MAX_ASCII_SIDE || cols > MAX_ASCII_SIDE {
        return Err(Error::CapExceeded {
            volume: rows as u128 * cols as u128,
            cap: (MAX_ASCII_SIDE * MAX_ASCII_SIDE) as u128,
        });
    }
    let (rows, cols) = (rows as usize, cols as usize);
    let mut grid = vec![b'.'; rows * cols];
    for (i, p) in t.placements.iter().enumerate() {
        let sides = t
            .oriented_sides(p)
            .ok_or_else(|| Error::PreconditionViolated(format!("placement {i} is malformed")))?;
        let letter = LETTERS[i % LETTERS.len()];
        let (r0, c0) = (p.origin[0] as usize, p.origin[1] as usize);
        let r1 = (r0 + sides[0] as usize).min(rows);
        let c1 = (c0 + sides[1] as usize).min(cols);
        for r in r0..r1 {
            grid[r * cols + c0.min(c1)..r * cols + c1].fill(letter);
        }
    }
    let mut out = String::with_capacity(rows * (cols + 1));
    for row in grid.chunks(cols) {
        out.push_str(std::str::from_utf8(row).expect("ascii"));
        out.push('\n');
    }
    Ok(out)
}

/// An SVG 1.1 document with one outlined rectangle per placement.
///
/// Axis 0 runs down the page and axis 1 across it, matching
/// [`render_ascii`].
pub fn render_svg(t: &Tiling, opts: &RenderOptions) -> Result<String> {
    let (rows, cols) = planar(t)?;
    if opts.cell_size == 0 {
        return Err(Error::PreconditionViolated(
            "cell size must be positive".into(),
        ));
    }
    let cell = opts.cell_size as u64;
    let (width, height) = (cols * cell, rows * cell);
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    for (i, p) in t.placements.iter().enumerate() {
        let sides = t
            .oriented_sides(p)
            .ok_or_else(|| Error::PreconditionViolated(format!("placement {i} is malformed")))?;
        let fill = if opts.palette.is_empty() {
            "none"
        } else {
            opts.palette[p.brick % opts.palette.len()].as_str()
        };
        writeln!(
            out,
            r#"  <rect x="{}" y="{}" width="{}" height="{}" fill="{fill}" stroke="black" stroke-width="1"/>"#,
            p.origin[1] * cell,
            p.origin[0] * cell,
            sides[1] * cell,
            sides[0] * cell,
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Renders in the format `opts` asks for.
pub fn render(t: &Tiling, opts: &RenderOptions) -> Result<String> {
    match opts.format {
        Format::Ascii => render_ascii(t),
        Format::Svg => render_svg(t, opts),
    }
}
