//! Colored coverage export as ASCII PLY with one RGB color per face.
//!
//! Colors follow a linear ramp in `t = clamp(strength / (2 thold), 0, 1)`.
//! Unrecognized pieces run from [`UNRECOGNIZED_LIGHT`] to
//! [`UNRECOGNIZED_FULL`] (greens), recognized pieces from
//! [`RECOGNIZED_LIGHT`] to [`RECOGNIZED_FULL`] (yellows). Each face has its own
//! three vertices, so face colors never bleed.

use std::io::{self, Write};

use camcov_core::geometry::Mesh;
use camcov_core::math::Vec3;
use camcov_core::objective::PieceCoverage;

pub const UNRECOGNIZED_LIGHT: [u8; 3] = [224, 242, 224];
pub const UNRECOGNIZED_FULL: [u8; 3] = [0, 128, 0];
pub const RECOGNIZED_LIGHT: [u8; 3] = [255, 245, 200];
pub const RECOGNIZED_FULL: [u8; 3] = [230, 180, 0];

pub fn face_color(strength: f64, recognized: bool, thold: f64) -> [u8; 3] {
    let t = (strength / (2.0 * thold)).clamp(0.0, 1.0);
    let (a, b) = if recognized { (RECOGNIZED_LIGHT, RECOGNIZED_FULL) } else { (UNRECOGNIZED_LIGHT, UNRECOGNIZED_FULL) };
    let mut c = [0u8; 3];
    for i in 0..3 {
        c[i] = (a[i] as f64 + (b[i] as f64 - a[i] as f64) * t).round() as u8;
    }
    c
}

pub fn write_ply<W: Write>(out: &mut W, mesh: &Mesh, coverage: &[PieceCoverage], thold: f64) -> io::Result<()> {
    assert_eq!(mesh.len(), coverage.len(), "one coverage entry per piece");
    writeln!(out, "ply")?;
    writeln!(out, "format ascii 1.0")?;
    writeln!(out, "comment per-face fused coverage strength; thold {thold}")?;
    writeln!(out, "element vertex {}", 3 * mesh.len())?;
    for axis in ["x", "y", "z"] {
        writeln!(out, "property double {axis}")?;
    }
    writeln!(out, "element face {}", mesh.len())?;
    writeln!(out, "property list uchar int vertex_indices")?;
    for ch in ["red", "green", "blue"] {
        writeln!(out, "property uchar {ch}")?;
    }
    writeln!(out, "property double strength")?;
    writeln!(out, "end_header")?;
    for piece in mesh.iter() {
        for v in piece.vertices {
            writeln!(out, "{} {} {}", v.x, v.y, v.z)?;
        }
    }
    for (k, c) in coverage.iter().enumerate() {
        let [r, g, b] = face_color(c.strength, c.recognized, thold);
        writeln!(out, "3 {} {} {} {r} {g} {b} {}", 3 * k, 3 * k + 1, 3 * k + 2, c.strength)?;
    }
    Ok(())
}

/// Faces of a PLY file read back with their colors.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredMesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<Vec<usize>>,
    pub colors: Vec<[u8; 3]>,
}

#[derive(Debug, Clone)]
enum Property {
    Scalar(String),
    List(String),
}

impl Property {
    fn name(&self) -> &str {
        match self {
            Property::Scalar(n) | Property::List(n) => n,
        }
    }
}

/// Reads an ASCII PLY with `vertex` (x, y, z) and `face` (vertex_indices and
/// optional red/green/blue) elements. Other elements and properties are
/// skipped.
pub fn read_ply(text: &str) -> Result<ColoredMesh, String> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("ply") {
        return Err("missing `ply` magic".into());
    }
    let mut elements: Vec<(String, usize, Vec<Property>)> = Vec::new();
    loop {
        let line = lines.next().ok_or("missing end_header")?.trim();
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["format", "ascii", _] => {}
            ["format", other, _] => return Err(format!("unsupported PLY format `{other}`")),
            ["comment", ..] | ["obj_info", ..] => {}
            ["element", name, count] => {
                let n = count.parse().map_err(|_| format!("bad element count `{count}`"))?;
                elements.push((name.to_string(), n, Vec::new()));
            }
            ["property", "list", _, _, name] => elements.last_mut().ok_or("property before element")?.2.push(Property::List(name.to_string())),
            ["property", _, name] => elements.last_mut().ok_or("property before element")?.2.push(Property::Scalar(name.to_string())),
            ["end_header"] => break,
            _ => return Err(format!("unexpected header line `{line}`")),
        }
    }
    let mut mesh = ColoredMesh { vertices: Vec::new(), faces: Vec::new(), colors: Vec::new() };
    for (name, count, props) in &elements {
        for _ in 0..*count {
            let line = lines.next().ok_or_else(|| format!("file ends inside element `{name}`"))?;
            let mut toks = line.split_whitespace();
            let mut scalars: Vec<(&str, f64)> = Vec::new();
            let mut list: Vec<usize> = Vec::new();
            for p in props {
                match p {
                    Property::Scalar(n) => {
                        let t = toks.next().ok_or_else(|| format!("missing `{n}` in `{line}`"))?;
                        scalars.push((n, t.parse().map_err(|_| format!("bad value `{t}`"))?));
                    }
                    Property::List(_) => {
                        let len: usize = toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| format!("bad list in `{line}`"))?;
                        for _ in 0..len {
                            list.push(toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| format!("bad list in `{line}`"))?);
                        }
                    }
                }
            }
            let get = |key: &str| scalars.iter().find(|(n, _)| *n == key).map(|(_, v)| *v);
            match name.as_str() {
                "vertex" => {
                    let c = |k| get(k).ok_or_else(|| format!("vertex lacks `{k}`"));
                    mesh.vertices.push(Vec3::new(c("x")?, c("y")?, c("z")?));
                }
                "face" => {
                    if let Some(bad) = list.iter().find(|&&i| i >= mesh.vertices.len()) {
                        return Err(format!("face references missing vertex {bad}"));
                    }
                    mesh.faces.push(list);
                    if props.iter().any(|p| p.name() == "red") {
                        let ch = |k| get(k).map(|v| v as u8).ok_or_else(|| format!("face lacks `{k}`"));
                        mesh.colors.push([ch("red")?, ch("green")?, ch("blue")?]);
                    }
                }
                _ => {}
            }
        }
    }
    Ok(mesh)
}
