//! The shipped catalog of base-block specifications and batch verification.
//!
//! A catalog is a directory of `.gdd` files named `<type>.gdd` plus a
//! `MANIFEST` recording, per entry: name, group type, compact signature and
//! the SHA-256 digest of the canonically serialized expansion. The
//! `GDDTOOL_CATALOG` environment variable overrides the directory.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::blockgen::{self, BaseBlockSpec};
use crate::design::{expected_block_count, verify_gdd, Design, GroupType};
use crate::error::{Error, Result};
use crate::gddx;

/// One catalog entry as indexed from disk.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub path: PathBuf,
    pub group_type: GroupType,
    pub signature: Option<String>,
}

/// Name -> entry index over a catalog directory.
#[derive(Debug, Default)]
pub struct Catalog {
    pub dir: PathBuf,
    pub entries: Vec<CatalogEntry>,
    by_type: HashMap<GroupType, usize>,
}

/// Locate the catalog directory: `GDDTOOL_CATALOG`, else `./catalog`, else
/// the workspace copy next to this crate.
pub fn default_dir() -> Option<PathBuf> {
    if let Ok(dir) = std::env::var("GDDTOOL_CATALOG") {
        return Some(PathBuf::from(dir));
    }
    let cwd = PathBuf::from("catalog");
    if cwd.is_dir() {
        return Some(cwd);
    }
    let ws = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog");
    ws.is_dir().then_some(ws)
}

impl Catalog {
    /// Index a directory, parsing every `.gdd` header.
    pub fn open(dir: &Path) -> Result<Catalog> {
        let mut entries = Vec::new();
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "gdd"))
            .collect();
        paths.sort();
        for path in paths {
            let spec = blockgen::read_spec_file(&path)?;
            entries.push(CatalogEntry {
                name: spec.name.clone(),
                path,
                group_type: spec.group_type(),
                signature: spec.signature.clone(),
            });
        }
        let by_type = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.group_type.clone(), i))
            .collect();
        Ok(Catalog {
            dir: dir.to_path_buf(),
            entries,
            by_type,
        })
    }

    pub fn open_default() -> Result<Catalog> {
        let dir = default_dir().ok_or_else(|| {
            Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "no catalog directory found (set GDDTOOL_CATALOG)",
            ))
        })?;
        Catalog::open(&dir)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn find(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn find_type(&self, t: &GroupType) -> Option<&CatalogEntry> {
        self.by_type.get(t).map(|&i| &self.entries[i])
    }

    pub fn load_spec(&self, name: &str) -> Result<BaseBlockSpec> {
        let entry = self.find(name).ok_or_else(|| {
            Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("no catalog entry named {name}"),
            ))
        })?;
        blockgen::read_spec_file(&entry.path)
    }

    /// Expand a catalog entry into a verified design.
    pub fn expand(&self, name: &str) -> Result<Design> {
        let spec = self.load_spec(name)?;
        let design = blockgen::expand(&spec)?;
        let report = verify_gdd(&design);
        if !report.ok {
            return Err(Error::Verification(format!("{name}: {report}")));
        }
        Ok(design)
    }
}

/// Per-entry outcome of a catalog sweep.
#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub group_type: String,
    pub blocks: usize,
    pub digest: String,
    pub verified: bool,
    pub signature_ok: Option<bool>,
    pub manifest_ok: Option<bool>,
    pub problems: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct CatalogSummary {
    pub entries: Vec<EntryReport>,
    pub failures: usize,
    pub warnings: Vec<String>,
}

/// Expand, verify, signature-check and digest every entry. Entries run in
/// parallel; the report order follows the (sorted) entry order.
pub fn verify_all(catalog: &Catalog) -> CatalogSummary {
    let manifest = read_manifest(&catalog.dir.join("MANIFEST")).unwrap_or_default();
    let mut reports: Vec<EntryReport> = catalog
        .entries
        .par_iter()
        .map(|entry| verify_entry(catalog, entry, &manifest))
        .collect();
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    let failures = reports.iter().filter(|r| !r.problems.is_empty()).count();
    let mut warnings = Vec::new();
    for r in &reports {
        if r.signature_ok.is_none() {
            warnings.push(format!("{}: no signature", r.name));
        }
        if r.manifest_ok.is_none() && !manifest.is_empty() {
            warnings.push(format!("{}: not in MANIFEST", r.name));
        }
    }
    CatalogSummary {
        entries: reports,
        failures,
        warnings,
    }
}

fn verify_entry(
    catalog: &Catalog,
    entry: &CatalogEntry,
    manifest: &HashMap<String, ManifestLine>,
) -> EntryReport {
    let mut problems = Vec::new();
    let mut report = EntryReport {
        name: entry.name.clone(),
        group_type: entry.group_type.to_string(),
        blocks: 0,
        digest: String::new(),
        verified: false,
        signature_ok: None,
        manifest_ok: None,
        problems: Vec::new(),
    };
    let spec = match catalog.load_spec(&entry.name) {
        Ok(s) => s,
        Err(e) => {
            report.problems.push(format!("parse: {e}"));
            return report;
        }
    };
    // declared type must match the directive-derived type
    if let Ok(declared) = GroupType::parse(&spec.name) {
        if declared != spec.group_type() {
            problems.push(format!(
                "declared type {declared} != directive type {}",
                spec.group_type()
            ));
        }
    }
    match blockgen::expand(&spec) {
        Ok(design) => {
            report.blocks = design.blocks().len();
            let vr = verify_gdd(&design);
            report.verified = vr.ok;
            if !vr.ok {
                problems.push(format!("verify: {vr}"));
            }
            match expected_block_count(&spec.group_type()) {
                Ok(want) if want == design.blocks().len() => {}
                Ok(want) => problems.push(format!(
                    "block count {} != expected {want}",
                    design.blocks().len()
                )),
                Err(e) => problems.push(format!("expected count: {e}")),
            }
            report.digest = gddx::digest(&design);
            if let Some(line) = manifest.get(&entry.name) {
                let ok = line.digest == report.digest
                    && entry.signature.as_deref().unwrap_or("") == line.signature;
                report.manifest_ok = Some(ok);
                if !ok {
                    problems.push("manifest digest/signature mismatch".into());
                }
            }
        }
        Err(e) => problems.push(format!("expand: {e}")),
    }
    if let Some(check) = blockgen::check_signature(&spec) {
        report.signature_ok = Some(check.matches);
        if !check.matches {
            problems.push(format!("signature: {}", check.diffs.join("; ")));
        }
    }
    report.problems = problems;
    report
}

#[derive(Debug, Default, Clone)]
pub struct ManifestLine {
    pub group_type: String,
    pub signature: String,
    pub digest: String,
}

/// MANIFEST is tab-separated: name, type, signature, digest. `#` comments.
pub fn read_manifest(path: &Path) -> Result<HashMap<String, ManifestLine>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = HashMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() == 4 {
            out.insert(
                fields[0].to_string(),
                ManifestLine {
                    group_type: fields[1].to_string(),
                    signature: fields[2].to_string(),
                    digest: fields[3].to_string(),
                },
            );
        }
    }
    Ok(out)
}

/// Render a MANIFEST from a verification sweep.
pub fn render_manifest(catalog: &Catalog, summary: &CatalogSummary) -> String {
    let mut out = String::new();
    out.push_str("# catalog manifest: name, type, signature, digest (tab-separated)\n");
    out.push_str("# families shipped: general designs, 14^u m^1, 20^u m^1, and the two\n");
    out.push_str("# 38^9 m^1 entries that exercise the Z_c x Z_3 shift action.\n");
    out.push_str("# other base-block families fit the same format but are not bundled.\n");
    for r in &summary.entries {
        let sig = catalog
            .find(&r.name)
            .and_then(|e| e.signature.clone())
            .unwrap_or_default();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            r.name, r.group_type, sig, r.digest
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn workspace_catalog() -> Catalog {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog");
        Catalog::open(&dir).unwrap()
    }

    #[test]
    fn catalog_indexes_all_entries() {
        let cat = workspace_catalog();
        assert!(cat.len() >= 45, "only {} entries", cat.len());
        assert!(cat.find("4^5_10^2").is_some());
        assert!(cat.find("38^9_11^1").is_some());
        let t = GroupType::parse("14^6 8^1").unwrap();
        assert_eq!(cat.find_type(&t).unwrap().name, "14^6_8^1");
    }

    #[test]
    fn expand_one_mandatory_entry() {
        let cat = workspace_catalog();
        let d = cat.expand("4^5_10^2").unwrap();
        assert_eq!(d.blocks().len(), 110);
    }
}
