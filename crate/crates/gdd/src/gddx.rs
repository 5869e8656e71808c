//! The `.gddx` expanded-design text format.
//!
//! Line-oriented UTF-8 with `#` comments: a `v=<int>` header, one `group:`
//! line per group, one `block:` line per block, and optional `hole:` /
//! `class:` lines for DGDDs and RGDDs (`class:` lists block indices).
//! Parsing is whitespace-tolerant; serialization is canonical: groups and
//! holes ascending by least point, points ascending within a line, blocks in
//! stored order.

use sha2::{Digest, Sha256};

use crate::design::Design;
use crate::error::{Error, Result};

pub fn serialize(design: &Design) -> String {
    let mut out = String::new();
    out.push_str(&format!("v={}\n", design.v()));
    for g in design.groups() {
        out.push_str("group:");
        for p in g {
            out.push_str(&format!(" {p}"));
        }
        out.push('\n');
    }
    for b in design.blocks() {
        out.push_str("block:");
        for p in b {
            out.push_str(&format!(" {p}"));
        }
        out.push('\n');
    }
    if let Some(holes) = design.holes() {
        for h in holes {
            out.push_str("hole:");
            for p in h {
                out.push_str(&format!(" {p}"));
            }
            out.push('\n');
        }
    }
    if let Some(res) = design.resolution() {
        for class in res {
            let mut idx: Vec<usize> = class.clone();
            idx.sort_unstable();
            out.push_str("class:");
            for i in idx {
                out.push_str(&format!(" {i}"));
            }
            out.push('\n');
        }
    }
    out
}

/// SHA-256 of the canonical serialization, hex-encoded.
pub fn digest(design: &Design) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serialize(design).as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn parse(text: &str) -> Result<Design> {
    parse_named(text, "<gddx>")
}

pub fn parse_named(text: &str, file: &str) -> Result<Design> {
    let syntax = |line: usize, msg: String| Error::Syntax {
        file: file.to_string(),
        line,
        msg,
    };
    let mut v: Option<usize> = None;
    let mut groups: Vec<Vec<u32>> = Vec::new();
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut holes: Vec<Vec<u32>> = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("v=") {
            v = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| syntax(lineno, format!("bad point count {rest:?}")))?,
            );
        } else if let Some(rest) = line.strip_prefix("group:") {
            groups.push(parse_points(rest).map_err(|m| syntax(lineno, m))?);
        } else if let Some(rest) = line.strip_prefix("block:") {
            blocks.push(parse_points(rest).map_err(|m| syntax(lineno, m))?);
        } else if let Some(rest) = line.strip_prefix("hole:") {
            holes.push(parse_points(rest).map_err(|m| syntax(lineno, m))?);
        } else if let Some(rest) = line.strip_prefix("class:") {
            let pts = parse_points(rest).map_err(|m| syntax(lineno, m))?;
            classes.push(pts.into_iter().map(|p| p as usize).collect());
        } else {
            return Err(syntax(lineno, format!("unrecognized line {line:?}")));
        }
    }
    let v = v.ok_or_else(|| syntax(0, "missing v= header".into()))?;
    Design::with_structure(
        v,
        groups,
        blocks,
        if holes.is_empty() { None } else { Some(holes) },
        if classes.is_empty() {
            None
        } else {
            Some(classes)
        },
    )
}

fn parse_points(rest: &str) -> std::result::Result<Vec<u32>, String> {
    rest.split_whitespace()
        .map(|t| t.parse().map_err(|_| format!("bad point {t:?}")))
        .collect()
}

pub fn read_file(path: &std::path::Path) -> Result<Design> {
    let text = std::fs::read_to_string(path)?;
    parse_named(&text, &path.display().to_string())
}

pub fn write_file(path: &std::path::Path, design: &Design) -> Result<()> {
    std::fs::write(path, serialize(design))?;
    Ok(())
}
