//! Recursive construction operators over verified ingredient designs.
//!
//! The operators realize the standard pipelines: weighted inflation of a
//! master design with 4-GDD overlays, inflation against a unit DGDD, hole
//! filling with adjoined points, replacing one group by a design on its
//! points, and turning a resolvable design into a DGDD by deleting a parallel
//! class. Every operator verifies its output before returning it, so a
//! miscomposed pipeline fails loudly rather than propagating a bad design.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra;
use crate::catalog::Catalog;
use crate::design::{verify_dgdd_limited, verify_gdd, verify_gdd_limited, Design, GroupType};
use crate::error::{Error, Result};
use crate::oracle::{self, Verdict};
use crate::search::{self, SearchLimits, SearchOutcome};

/// Where an ingredient came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Explicit,
    Catalog,
    Algebra,
    Search,
    File,
    Constructed,
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Source::Explicit => "explicit",
            Source::Catalog => "catalog",
            Source::Algebra => "algebra",
            Source::Search => "search",
            Source::File => "file",
            Source::Constructed => "constructed",
        };
        write!(f, "{s}")
    }
}

/// Ingredient store for 4-GDDs, keyed by group type.
///
/// Lookup consults, in order: designs already stored (explicit or cached),
/// the catalog, the transversal-design construction for types q^4 with q a
/// prime power, and finally - when enabled - a bounded exact-cover search.
/// Only verified designs are ever stored.
pub struct DesignLibrary {
    items: HashMap<GroupType, (Arc<Design>, Source)>,
    catalog: Option<Catalog>,
    /// Attempt ingredient search only for types with at most this many points.
    pub search_point_limit: usize,
    pub search_enabled: bool,
    pub search_limits: SearchLimits,
}

impl DesignLibrary {
    pub fn new() -> DesignLibrary {
        let mut lib = DesignLibrary {
            items: HashMap::new(),
            catalog: None,
            search_point_limit: 20,
            search_enabled: true,
            search_limits: SearchLimits::default(),
        };
        // the one-block design on four singleton groups; weight-1 inflation
        // and m = 1 fills bottom out here
        let unit = Design::new(
            4,
            vec![vec![0], vec![1], vec![2], vec![3]],
            vec![vec![0, 1, 2, 3]],
        )
        .expect("unit design");
        lib.items
            .insert(unit.group_type(), (Arc::new(unit), Source::Algebra));
        lib
    }

    pub fn with_catalog(catalog: Catalog) -> DesignLibrary {
        let mut lib = DesignLibrary::new();
        lib.catalog = Some(catalog);
        lib
    }

    /// Insert a design after verifying it as a 4-GDD.
    pub fn insert(&mut self, design: Design, source: Source) -> Result<Arc<Design>> {
        if design.block_size().is_some_and(|k| k != 4) {
            return Err(Error::BadIngredient(format!(
                "library stores 4-GDDs, got block size {:?}",
                design.block_size()
            )));
        }
        let report = verify_gdd(&design);
        if !report.ok {
            return Err(Error::Verification(format!(
                "refusing to store unverified design of type {}: {report}",
                design.group_type()
            )));
        }
        let t = design.group_type();
        let arc = Arc::new(design);
        self.items.insert(t, (arc.clone(), source));
        Ok(arc)
    }

    pub fn contains(&self, t: &GroupType) -> bool {
        self.items.contains_key(t)
    }

    pub fn source_of(&self, t: &GroupType) -> Option<Source> {
        self.items.get(t).map(|(_, s)| *s)
    }

    /// Fetch a 4-GDD of the given type, consulting the fallback tiers.
    pub fn get(&mut self, t: &GroupType) -> Result<Arc<Design>> {
        if let Some((d, _)) = self.items.get(t) {
            return Ok(d.clone());
        }
        if let Some(found) = self.try_catalog(t)? {
            return Ok(found);
        }
        if let Some(found) = self.try_algebra(t)? {
            return Ok(found);
        }
        if let Some(found) = self.try_search(t)? {
            return Ok(found);
        }
        Err(Error::MissingIngredient(
            t.to_string(),
            self.absence_note(t),
        ))
    }

    fn try_catalog(&mut self, t: &GroupType) -> Result<Option<Arc<Design>>> {
        let Some(cat) = &self.catalog else {
            return Ok(None);
        };
        let Some(entry) = cat.find_type(t) else {
            return Ok(None);
        };
        let name = entry.name.clone();
        let design = cat.expand(&name)?;
        Ok(Some(self.insert(design, Source::Catalog)?))
    }

    fn try_algebra(&mut self, t: &GroupType) -> Result<Option<Arc<Design>>> {
        // q^4 with q a prime power comes from the field construction
        if let [(q, 4)] = t.parts() {
            if *q >= 3 && algebra::prime_power(*q).is_some() {
                let td = algebra::transversal_design(4, *q)?;
                return Ok(Some(self.insert(td, Source::Algebra)?));
            }
        }
        Ok(None)
    }

    fn try_search(&mut self, t: &GroupType) -> Result<Option<Arc<Design>>> {
        if !self.search_enabled || t.points() > self.search_point_limit {
            return Ok(None);
        }
        match search::solve_existence(t, &self.search_limits) {
            Ok(SearchOutcome::Found(d)) => Ok(Some(self.insert(d, Source::Search)?)),
            _ => Ok(None),
        }
    }

    /// Explain why a type could not be served.
    fn absence_note(&self, t: &GroupType) -> String {
        if let Some((g, u, m)) = t.as_gum() {
            let status = if m == 0 {
                oracle::status_gu(g, u)
            } else {
                oracle::status_gum(g, u, m)
            };
            match status.verdict {
                Verdict::NecessaryFail => {
                    return format!(" (necessary conditions fail: {})", status.basis)
                }
                Verdict::NotExists => return format!(" ({})", status.basis),
                Verdict::Exists => {
                    return " (known to exist, but no constructive route is loaded)".into()
                }
                Verdict::OpenException => return format!(" ({})", status.basis),
            }
        }
        String::new()
    }
}

impl Default for DesignLibrary {
    fn default() -> Self {
        DesignLibrary::new()
    }
}

/// Existence of the unit 4-DGDDs of type (h v, h^v)^t used by the inflation
/// and filling pipelines: t, v >= 4 and (t-1)(v-1)h = 0 (mod 3), minus the
/// two refuted parameter triples.
pub fn unit_dgdd_exists(h: usize, v: usize, t: usize) -> bool {
    t >= 4
        && v >= 4
        && ((t - 1) * (v - 1) * h).is_multiple_of(3)
        && (h, v, t) != (1, 4, 6)
        && (h, v, t) != (1, 6, 4)
}

fn prefix_offsets(weights: &[usize]) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(weights.len());
    let mut total = 0usize;
    for &w in weights {
        offsets.push(total);
        total += w;
    }
    (offsets, total)
}

/// Weighted inflation: replace each master point by `weight(p)` copies and
/// overlay every inflated block with a 4-GDD whose type is the block's
/// multiset of nonzero weights, drawn from the library.
pub fn wfc_inflate(master: &Design, weights: &[usize], lib: &mut DesignLibrary) -> Result<Design> {
    if weights.len() != master.v() {
        return Err(Error::BadIngredient(format!(
            "{} weights for {} master points",
            weights.len(),
            master.v()
        )));
    }
    let (offsets, total) = prefix_offsets(weights);
    let groups: Vec<Vec<u32>> = master
        .groups()
        .iter()
        .filter_map(|g| {
            let grown: Vec<u32> = g
                .iter()
                .flat_map(|&p| {
                    let p = p as usize;
                    (offsets[p]..offsets[p] + weights[p]).map(|c| c as u32)
                })
                .collect();
            (!grown.is_empty()).then_some(grown)
        })
        .collect();

    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut expected_total = 0usize;
    for block in master.blocks() {
        let heavy: Vec<usize> = block
            .iter()
            .map(|&p| p as usize)
            .filter(|&p| weights[p] > 0)
            .collect();
        let pattern = GroupType::from_sizes(heavy.iter().map(|&p| weights[p]));
        if heavy.len() < 3 {
            // a block with pairs left to cover but no 4-GDD shape to cover them
            if heavy.len() == 2 {
                return Err(Error::MissingIngredient(
                    pattern.to_string(),
                    " (inflated block keeps only two weighted points; no 4-GDD covers it)".into(),
                ));
            }
            continue; // zero or one weighted point: nothing to cover
        }
        let filler = lib.get(&pattern)?;
        expected_total += filler.blocks().len();
        let map = overlay_map(&filler, &heavy, weights, &offsets)?;
        for fb in filler.blocks() {
            blocks.push(fb.iter().map(|&q| map[q as usize]).collect());
        }
    }
    if blocks.len() != expected_total {
        return Err(Error::Internal(format!(
            "inflation emitted {} blocks, expected {expected_total}",
            blocks.len()
        )));
    }
    let design = Design::new(total, groups, blocks)?;
    let report = verify_gdd_limited(&design, 3);
    if !report.ok {
        return Err(Error::Verification(format!(
            "inflated design invalid: {report}"
        )));
    }
    Ok(design)
}

/// Assign filler groups to the weighted master points of one block, in block
/// point order, matching sizes; returns filler point -> result point.
fn overlay_map(
    filler: &Design,
    heavy: &[usize],
    weights: &[usize],
    offsets: &[usize],
) -> Result<Vec<u32>> {
    let mut unused: Vec<usize> = (0..filler.groups().len()).collect();
    let mut map = vec![0u32; filler.v()];
    for &p in heavy {
        let want = weights[p];
        let pos = unused
            .iter()
            .position(|&gi| filler.groups()[gi].len() == want)
            .ok_or_else(|| Error::Alignment {
                filler: filler.groups().iter().map(|g| g.len()).collect(),
                cells: heavy.iter().map(|&p| weights[p]).collect(),
            })?;
        let gi = unused.remove(pos);
        for (slot, &q) in filler.groups()[gi].iter().enumerate() {
            map[q as usize] = (offsets[p] + slot) as u32;
        }
    }
    Ok(map)
}

/// Inflate every point of a 4-GDD master by `h * u` and overlay each block
/// with a 4-DGDD of type (hu, h^u)^4, producing a DGDD whose holes collect
/// the u copy slots (h wide) of every point.
pub fn wfc_inflate_dgdd(master: &Design, h: usize, u: usize, dgdd: &Design) -> Result<Design> {
    let factor = h * u;
    if master.block_size() != Some(4) {
        return Err(Error::BadIngredient(format!(
            "inflation master must be a 4-GDD, got block size {:?}",
            master.block_size()
        )));
    }
    check_unit_dgdd(dgdd, h, u)?;
    let holes_of_dgdd = dgdd.holes().unwrap();
    let hole_index = {
        let mut idx = vec![0usize; dgdd.v()];
        for (hi, hole) in holes_of_dgdd.iter().enumerate() {
            for &p in hole {
                idx[p as usize] = hi;
            }
        }
        idx
    };
    // within each dgdd group, order points by (hole, point) so that hole j
    // lands in copy slots j*h .. (j+1)*h
    let slot_of: Vec<usize> = {
        let mut slot = vec![0usize; dgdd.v()];
        for group in dgdd.groups() {
            let mut members: Vec<u32> = group.clone();
            members.sort_by_key(|&p| (hole_index[p as usize], p));
            for (i, &p) in members.iter().enumerate() {
                slot[p as usize] = i;
            }
        }
        slot
    };

    let v = master.v() * factor;
    let copy = |p: usize, slot: usize| (p * factor + slot) as u32;
    let groups: Vec<Vec<u32>> = master
        .groups()
        .iter()
        .map(|g| {
            g.iter()
                .flat_map(|&p| (0..factor).map(move |s| copy(p as usize, s)))
                .collect()
        })
        .collect();
    let holes: Vec<Vec<u32>> = (0..u)
        .map(|j| {
            (0..master.v())
                .flat_map(|p| (j * h..(j + 1) * h).map(move |s| copy(p, s)))
                .collect()
        })
        .collect();
    let mut blocks = Vec::with_capacity(master.blocks().len() * dgdd.blocks().len());
    for block in master.blocks() {
        // dgdd group i overlays block point i
        let mut point_of_group = [0usize; 4];
        for (gi, _) in dgdd.groups().iter().enumerate() {
            point_of_group[gi] = block[gi] as usize;
        }
        let group_index = dgdd.group_index();
        for db in dgdd.blocks() {
            blocks.push(
                db.iter()
                    .map(|&q| {
                        let gi = group_index[q as usize];
                        copy(point_of_group[gi], slot_of[q as usize])
                    })
                    .collect(),
            );
        }
    }
    let design = Design::with_structure(v, groups, blocks, Some(holes), None)?;
    let report = verify_dgdd_limited(&design, 3)?;
    if !report.ok {
        return Err(Error::Verification(format!(
            "inflated DGDD invalid: {report}"
        )));
    }
    Ok(design)
}

fn check_unit_dgdd(dgdd: &Design, h: usize, u: usize) -> Result<()> {
    let want = GroupType::new([(h * u, 4)]);
    if dgdd.group_type() != want {
        return Err(Error::BadIngredient(format!(
            "need a 4-DGDD of type ({}, {}^{u})^4, got groups of type {}",
            h * u,
            h,
            dgdd.group_type()
        )));
    }
    let holes = dgdd.holes().ok_or(Error::MissingHoles)?;
    if holes.len() != u {
        return Err(Error::BadIngredient(format!(
            "unit DGDD has {} holes, expected {u}",
            holes.len()
        )));
    }
    let report = verify_dgdd_limited(dgdd, 3)?;
    if !report.ok {
        return Err(Error::BadIngredient(format!(
            "unit DGDD fails verification: {report}"
        )));
    }
    Ok(())
}

/// Build the unit 4-DGDD of type (hu, h^u)^4 from first principles: for
/// h = 1 delete a parallel class from the resolvable u^4 design; for h > 1
/// inflate a 4-GDD of type h^4 against the h = 1 unit.
pub fn unit_dgdd(h: usize, u: usize, lib: &mut DesignLibrary) -> Result<Design> {
    if !unit_dgdd_exists(h, u, 4) {
        return Err(Error::ForbiddenCase { u, h });
    }
    let base = {
        let resolvable = algebra::rgdd(4, u).map_err(|e| match e {
            Error::TooManyGroups { .. } | Error::NotPrimePower(_) => Error::MissingIngredient(
                format!("({u}, 1^{u})^4 DGDD"),
                format!(" (no resolvable 4-GDD of type {u}^4 on hand)"),
            ),
            other => other,
        })?;
        remove_parallel_class(&resolvable, 0)?
    };
    if h == 1 {
        return Ok(base);
    }
    let master = lib.get(&GroupType::new([(h, 4)]))?;
    wfc_inflate_dgdd(&master, 1, u, &base)
}

/// Adjoin `m` new points as one group and fill every hole (plus the new
/// points) with a 4-GDD of the matching type from the library.
pub fn fill_holes(dgdd: &Design, m: usize, lib: &mut DesignLibrary) -> Result<Design> {
    let holes = dgdd.holes().ok_or(Error::MissingHoles)?;
    let group_index = dgdd.group_index();

    // cells of each hole: nonzero intersections with the groups
    let mut hole_cells: Vec<Vec<Vec<u32>>> = Vec::with_capacity(holes.len());
    for hole in holes {
        let mut per_group: HashMap<usize, Vec<u32>> = HashMap::new();
        for &p in hole {
            per_group
                .entry(group_index[p as usize])
                .or_default()
                .push(p);
        }
        let mut cells: Vec<Vec<u32>> = per_group.into_values().collect();
        for c in &mut cells {
            c.sort_unstable();
        }
        // size descending, then least point
        cells.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        hole_cells.push(cells);
    }
    let cell_sizes: Vec<usize> = hole_cells[0].iter().map(|c| c.len()).collect();
    for cells in &hole_cells {
        let sizes: Vec<usize> = cells.iter().map(|c| c.len()).collect();
        if sizes != cell_sizes {
            return Err(Error::Alignment {
                filler: cell_sizes,
                cells: sizes,
            });
        }
    }

    let filler_type = GroupType::new(
        cell_sizes
            .iter()
            .map(|&s| (s, 1))
            .chain((m > 0).then_some((m, 1))),
    );
    let filler = lib.get(&filler_type)?;

    // filler groups sorted size-descending then least point; the trailing
    // unmatched group (present only when m > 0) covers the new points
    let mut filler_groups: Vec<&Vec<u32>> = filler.groups().iter().collect();
    filler_groups.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));

    let v = dgdd.v();
    let new_points: Vec<u32> = (v..v + m).map(|p| p as u32).collect();
    let mut groups = dgdd.groups().to_vec();
    if m > 0 {
        groups.push(new_points.clone());
    }

    let mut blocks = dgdd.blocks().to_vec();
    for cells in &hole_cells {
        let misaligned = || Error::Alignment {
            filler: filler_groups.iter().map(|g| g.len()).collect(),
            cells: cell_sizes.clone(),
        };
        // walk both size-sorted lists; the one filler group left over when
        // m > 0 is the m-group and lands on the new points
        let mut map = vec![0u32; filler.v()];
        let mut ci = 0usize;
        let mut m_group_used = false;
        for fg in &filler_groups {
            if ci < cells.len() && cells[ci].len() == fg.len() {
                for (i, &q) in fg.iter().enumerate() {
                    map[q as usize] = cells[ci][i];
                }
                ci += 1;
            } else if m > 0 && !m_group_used && fg.len() == m {
                for (i, &q) in fg.iter().enumerate() {
                    map[q as usize] = new_points[i];
                }
                m_group_used = true;
            } else {
                return Err(misaligned());
            }
        }
        if ci != cells.len() || (m > 0 && !m_group_used) {
            return Err(misaligned());
        }
        for fb in filler.blocks() {
            blocks.push(fb.iter().map(|&q| map[q as usize]).collect());
        }
    }

    let design = Design::new(v + m, groups, blocks)?;
    let report = verify_gdd_limited(&design, 3);
    if !report.ok {
        return Err(Error::Verification(format!(
            "hole filling invalid: {report}"
        )));
    }
    Ok(design)
}

/// Replace one group by a design on exactly its points, keeping all blocks.
pub fn fill_group(design: &Design, group_index: usize, filler: &Design) -> Result<Design> {
    let group = design.groups().get(group_index).ok_or(Error::BadIndex {
        index: group_index,
        classes: design.groups().len(),
    })?;
    if filler.v() != group.len() {
        return Err(Error::SizeMismatch {
            got: filler.v(),
            want: group.len(),
        });
    }
    let mut groups: Vec<Vec<u32>> = design
        .groups()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != group_index)
        .map(|(_, g)| g.clone())
        .collect();
    for fg in filler.groups() {
        groups.push(fg.iter().map(|&q| group[q as usize]).collect());
    }
    let mut blocks = design.blocks().to_vec();
    for fb in filler.blocks() {
        blocks.push(fb.iter().map(|&q| group[q as usize]).collect());
    }
    let out = Design::new(design.v(), groups, blocks)?;
    let report = verify_gdd_limited(&out, 3);
    if !report.ok {
        return Err(Error::Verification(format!(
            "group filling invalid: {report}"
        )));
    }
    Ok(out)
}

/// Inflate every point by r and overlay blocks with a 4-GDD of type r^4.
pub fn inflate_uniform(design: &Design, r: usize, lib: &mut DesignLibrary) -> Result<Design> {
    wfc_inflate(design, &vec![r; design.v()], lib)
}

/// Delete one parallel class; its blocks become the holes of a DGDD.
pub fn remove_parallel_class(design: &Design, class_index: usize) -> Result<Design> {
    let resolution = design.resolution().ok_or(Error::MissingResolution)?;
    let class = resolution.get(class_index).ok_or(Error::BadIndex {
        index: class_index,
        classes: resolution.len(),
    })?;
    let removed: Vec<bool> = {
        let mut flags = vec![false; design.blocks().len()];
        for &bi in class {
            flags[bi] = true;
        }
        flags
    };
    let holes: Vec<Vec<u32>> = class
        .iter()
        .map(|&bi| design.blocks()[bi].clone())
        .collect();
    let blocks: Vec<Vec<u32>> = design
        .blocks()
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed[*i])
        .map(|(_, b)| b.clone())
        .collect();
    let out = Design::with_structure(
        design.v(),
        design.groups().to_vec(),
        blocks,
        Some(holes),
        None,
    )?;
    let report = verify_dgdd_limited(&out, 3)?;
    if !report.ok {
        return Err(Error::Verification(format!(
            "class removal left an invalid DGDD: {report}"
        )));
    }
    Ok(out)
}

/// Arithmetic progression of reachable adjoined-group sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumRange {
    pub first: usize,
    pub step: usize,
    pub last: usize,
}

impl SumRange {
    pub fn contains(&self, m: usize) -> bool {
        self.first <= m && m <= self.last && (m - self.first).is_multiple_of(self.step)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        (self.first..=self.last).step_by(self.step.max(1))
    }
}

/// Sums of q values drawn (with repetition) from {d_min, d_min + 3, ...,
/// d_max}: exactly the progression q*d_min, q*d_min + 3, ..., q*d_max.
pub fn reachable_adjoin_sums(q: usize, d_min: usize, d_max: usize) -> Result<SumRange> {
    if q == 0 || d_max < d_min || !(d_max - d_min).is_multiple_of(3) {
        return Err(Error::Internal(format!(
            "bad ingredient range: q={q}, d in [{d_min}, {d_max}] step 3"
        )));
    }
    Ok(SumRange {
        first: q * d_min,
        step: 3,
        last: q * d_max,
    })
}
