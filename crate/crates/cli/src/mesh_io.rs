//! STL (ASCII and binary) and OBJ triangle readers, and scene assembly.

use std::path::Path;

use camcov_core::geometry::{refine_mesh, triangle_area, Mesh, MIN_TRIANGLE_AREA};
use camcov_core::math::Vec3;
use camcov_core::scene::{ForbiddenRegion, Scene};

use crate::error::{CliError, Result};

pub type Triangle = [Vec3; 3];

/// Parse failure inside an in-memory buffer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    Syntax { offset: usize, message: String },
    NonTriangular(Vec<usize>),
}

impl FormatError {
    fn at(offset: usize, message: impl Into<String>) -> FormatError {
        FormatError::Syntax { offset, message: message.into() }
    }

    fn into_cli(self, path: &Path) -> CliError {
        match self {
            FormatError::Syntax { offset, message } => CliError::Parse { path: path.into(), offset, message },
            FormatError::NonTriangular(faces) => CliError::NonTriangularFaces { path: path.into(), faces },
        }
    }
}

/// Reads triangles from an `.stl` or `.obj` file, chosen by extension.
pub fn read_triangles(path: &Path) -> Result<Vec<Triangle>> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let parsed = match ext.as_deref() {
        Some("stl") => parse_stl(&bytes),
        Some("obj") => parse_obj(&bytes),
        _ => return Err(CliError::Invalid(format!("{}: unsupported mesh format (expected .stl or .obj)", path.display()))),
    };
    parsed.map_err(|e| e.into_cli(path))
}

/// Binary when the size matches the triangle count in the header, ASCII
/// when the file starts with `solid`.
pub fn parse_stl(bytes: &[u8]) -> std::result::Result<Vec<Triangle>, FormatError> {
    let binary_count = (bytes.len() >= 84).then(|| u32::from_le_bytes([bytes[80], bytes[81], bytes[82], bytes[83]]) as usize);
    if let Some(n) = binary_count {
        if bytes.len() == 84 + 50 * n {
            return Ok(parse_binary_stl(bytes, n));
        }
    }
    let text_start = bytes.iter().position(|b| !b.is_ascii_whitespace()).unwrap_or(bytes.len());
    if bytes[text_start..].starts_with(b"solid") {
        if let Ok(text) = std::str::from_utf8(bytes) {
            return parse_ascii_stl(text);
        }
    }
    match binary_count {
        None => Err(FormatError::at(bytes.len(), "file ends inside the 84-byte binary STL header")),
        Some(n) if bytes.len() < 84 + 50 * n => {
            let whole = (bytes.len() - 84) / 50;
            Err(FormatError::at(84 + 50 * whole, format!("binary STL truncated: header declares {n} triangles, data holds {whole}")))
        }
        Some(n) => {
            log::warn!("ignoring {} bytes after the {n} triangles of a binary STL", bytes.len() - 84 - 50 * n);
            Ok(parse_binary_stl(bytes, n))
        }
    }
}

fn parse_binary_stl(bytes: &[u8], n: usize) -> Vec<Triangle> {
    let f = |o: usize| f32::from_le_bytes([bytes[o], bytes[o + 1], bytes[o + 2], bytes[o + 3]]) as f64;
    (0..n)
        .map(|t| {
            // skip the 12-byte facet normal; it is recomputed from the winding
            let base = 84 + 50 * t + 12;
            let v = |k: usize| {
                let o = base + 12 * k;
                Vec3::new(f(o), f(o + 4), f(o + 8))
            };
            [v(0), v(1), v(2)]
        })
        .collect()
}

/// Whitespace-separated tokens with their byte offsets.
fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let base = text.as_ptr() as usize;
    text.split_ascii_whitespace().map(move |t| (t.as_ptr() as usize - base, t))
}

fn parse_ascii_stl(text: &str) -> std::result::Result<Vec<Triangle>, FormatError> {
    let mut tris = Vec::new();
    let lines = text.lines().map(|l| (l.as_ptr() as usize - text.as_ptr() as usize, l));
    // flattened token stream, except that `solid` / `endsolid` consume their line
    let mut toks: Vec<(usize, &str)> = Vec::new();
    for (off, line) in lines {
        let mut it = tokens(line).map(|(o, t)| (o + off, t));
        match it.next() {
            Some((o, kw)) if kw == "solid" || kw == "endsolid" => toks.push((o, kw)),
            Some(first) => {
                toks.push(first);
                toks.extend(it);
            }
            None => {}
        }
    }
    let end = text.len();
    let mut it = toks.into_iter().peekable();
    let expect = |it: &mut std::iter::Peekable<std::vec::IntoIter<(usize, &str)>>, kw: &str| match it.next() {
        Some((_, t)) if t == kw => Ok(()),
        Some((o, t)) => Err(FormatError::at(o, format!("expected `{kw}`, found `{t}`"))),
        None => Err(FormatError::at(end, format!("expected `{kw}`, found end of file"))),
    };
    let number = |it: &mut std::iter::Peekable<std::vec::IntoIter<(usize, &str)>>| match it.next() {
        Some((o, t)) => t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| FormatError::at(o, format!("invalid number `{t}`"))),
        None => Err(FormatError::at(end, "expected a number, found end of file")),
    };
    let mut solids = 0;
    while it.peek().is_some() {
        expect(&mut it, "solid")?;
        solids += 1;
        loop {
            match it.peek() {
                Some(&(_, "endsolid")) => {
                    it.next();
                    break;
                }
                Some(&(_, "facet")) => {
                    it.next();
                    expect(&mut it, "normal")?;
                    for _ in 0..3 {
                        number(&mut it)?;
                    }
                    expect(&mut it, "outer")?;
                    expect(&mut it, "loop")?;
                    let mut v = [Vec3::ZERO; 3];
                    for vk in &mut v {
                        expect(&mut it, "vertex")?;
                        *vk = Vec3::new(number(&mut it)?, number(&mut it)?, number(&mut it)?);
                    }
                    expect(&mut it, "endloop")?;
                    expect(&mut it, "endfacet")?;
                    tris.push(v);
                }
                Some(&(o, t)) => return Err(FormatError::at(o, format!("expected `facet` or `endsolid`, found `{t}`"))),
                None => return Err(FormatError::at(end, "missing `endsolid`")),
            }
        }
    }
    if solids == 0 {
        return Err(FormatError::at(0, "empty STL"));
    }
    Ok(tris)
}

/// Triangles of a Wavefront OBJ file. Only `v` and `f` records are used;
/// faces must have exactly three vertices.
pub fn parse_obj(bytes: &[u8]) -> std::result::Result<Vec<Triangle>, FormatError> {
    let text = std::str::from_utf8(bytes).map_err(|e| FormatError::at(e.valid_up_to(), "OBJ is not valid UTF-8"))?;
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut faces: Vec<Vec<(usize, i64)>> = Vec::new();
    for line in text.lines() {
        let off = line.as_ptr() as usize - text.as_ptr() as usize;
        let line = line.split('#').next().unwrap_or("");
        let mut it = tokens(line).map(|(o, t)| (o + off, t));
        match it.next() {
            Some((_, "v")) => {
                let mut c = [0.0; 3];
                for ck in &mut c {
                    let (o, t) = it.next().ok_or_else(|| FormatError::at(off + line.len(), "vertex needs three coordinates"))?;
                    *ck = t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| FormatError::at(o, format!("invalid number `{t}`")))?;
                }
                vertices.push(Vec3::from_array(c));
            }
            Some((_, "f")) => {
                let refs = it
                    .map(|(o, t)| {
                        let idx = t.split('/').next().unwrap_or("");
                        idx.parse::<i64>().ok().filter(|&i| i != 0).map(|i| (o, i)).ok_or_else(|| FormatError::at(o, format!("invalid vertex reference `{t}`")))
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                // resolve relative indices against the vertices seen so far
                let n = vertices.len() as i64;
                faces.push(refs.into_iter().map(|(o, i)| (o, if i < 0 { n + i + 1 } else { i })).collect());
            }
            _ => {}
        }
    }
    let bad: Vec<usize> = faces.iter().enumerate().filter(|(_, f)| f.len() != 3).map(|(i, _)| i + 1).collect();
    if !bad.is_empty() {
        return Err(FormatError::NonTriangular(bad));
    }
    faces
        .iter()
        .map(|f| {
            let mut t = [Vec3::ZERO; 3];
            for (tk, &(o, i)) in t.iter_mut().zip(f) {
                if i < 1 || i as usize > vertices.len() {
                    return Err(FormatError::at(o, format!("vertex index {i} out of range 1..={}", vertices.len())));
                }
                *tk = vertices[i as usize - 1];
            }
            Ok(t)
        })
        .collect()
}

/// Scales triangles and drops those with area at or below
/// [`MIN_TRIANGLE_AREA`], returning the survivors.
pub fn clean_triangles(tris: Vec<Triangle>, scale: f64, label: &str) -> Vec<Triangle> {
    let before = tris.len();
    let kept: Vec<Triangle> = tris.into_iter().map(|t| t.map(|v| v * scale)).filter(|t| triangle_area(t) > MIN_TRIANGLE_AREA).collect();
    if kept.len() < before {
        log::warn!("{label}: dropped {} degenerate triangles", before - kept.len());
    }
    kept
}

/// Object mesh refined to pieces of at most `sigma` m², obstacles kept as
/// read, and the forbidden regions.
pub fn load_scene(object: &Path, obstacles: &[impl AsRef<Path>], scale: f64, sigma: f64, forbidden: Vec<ForbiddenRegion>) -> Result<Scene> {
    let label = object.display().to_string();
    let tris = clean_triangles(read_triangles(object)?, scale, &label);
    if tris.is_empty() {
        return Err(CliError::Invalid(format!("{label}: object mesh has no usable triangles")));
    }
    let mesh = refine_mesh(&tris, sigma).map_err(|e| CliError::Invalid(format!("{label}: {e}")))?;
    log::info!("{label}: {} triangles refined to {} pieces", tris.len(), mesh.len());
    let obstacle_meshes = obstacles
        .iter()
        .map(|p| {
            let p = p.as_ref();
            let tris = clean_triangles(read_triangles(p)?, scale, &p.display().to_string());
            refine_mesh(&tris, f64::INFINITY).map_err(|e| CliError::Invalid(format!("{}: {e}", p.display())))
        })
        .collect::<Result<Vec<Mesh>>>()?;
    Ok(Scene::new(mesh, obstacle_meshes, forbidden))
}

/// Binary STL encoding of `tris`, for fixtures and conversions.
pub fn write_binary_stl(tris: &[Triangle]) -> Vec<u8> {
    let mut out = vec![0u8; 80];
    out.extend_from_slice(&(tris.len() as u32).to_le_bytes());
    for t in tris {
        let n = (t[1] - t[0]).cross(t[2] - t[0]).normalized().unwrap_or(Vec3::ZERO);
        for v in std::iter::once(n).chain(t.iter().copied()) {
            for c in v.to_array() {
                out.extend_from_slice(&(c as f32).to_le_bytes());
            }
        }
        out.extend_from_slice(&[0, 0]);
    }
    out
}
