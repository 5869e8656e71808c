//! Core domain types: group types, designs and the pair-coverage verifiers.
//!
//! A design lives on the dense point set `0..v`. Groups always partition the
//! points; blocks are sets of distinct points with at most one point per
//! group. The verifiers check the defining axioms exactly, by counting every
//! pair, and report the first few offending witnesses.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A group type: multiset of (group size, multiplicity) in canonical form,
/// sizes strictly decreasing. `10^2 4^5` has parts `[(10, 2), (4, 5)]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupType {
    parts: Vec<(usize, usize)>,
}

impl GroupType {
    /// Canonicalize a list of (size, count) parts, merging equal sizes.
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(parts: I) -> GroupType {
        let mut map: HashMap<usize, usize> = HashMap::new();
        for (size, count) in parts {
            if size > 0 && count > 0 {
                *map.entry(size).or_insert(0) += count;
            }
        }
        let mut parts: Vec<_> = map.into_iter().collect();
        parts.sort_by_key(|&(size, _)| std::cmp::Reverse(size));
        GroupType { parts }
    }

    pub fn from_sizes<I: IntoIterator<Item = usize>>(sizes: I) -> GroupType {
        GroupType::new(sizes.into_iter().map(|s| (s, 1)))
    }

    /// `g^u m^1` shorthand. An `m` of zero or of size `g` folds into the
    /// uniform part.
    pub fn uniform_plus(g: usize, u: usize, m: usize) -> GroupType {
        GroupType::new([(g, u), (m, 1)])
    }

    pub fn parts(&self) -> &[(usize, usize)] {
        &self.parts
    }

    /// Total number of points.
    pub fn points(&self) -> usize {
        self.parts.iter().map(|(s, c)| s * c).sum()
    }

    /// Total number of groups.
    pub fn group_count(&self) -> usize {
        self.parts.iter().map(|(_, c)| c).sum()
    }

    /// Group sizes in descending order, one entry per group.
    pub fn sizes(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.group_count());
        for &(s, c) in &self.parts {
            out.extend(std::iter::repeat_n(s, c));
        }
        out
    }

    /// Interpret as `g^u m^1`, returning (g, u, m). A single-part type is
    /// (g, u, 0); two parts qualify only when one has multiplicity 1.
    pub fn as_gum(&self) -> Option<(usize, usize, usize)> {
        match self.parts.as_slice() {
            [(g, u)] => Some((*g, *u, 0)),
            [(a, ca), (b, 1)] => Some((*a, *ca, *b)),
            [(a, 1), (b, cb)] => Some((*b, *cb, *a)),
            _ => None,
        }
    }

    /// Parse "4^5 10^2" (spaces or underscores between parts). A bare size
    /// means multiplicity 1.
    pub fn parse(text: &str) -> Result<GroupType> {
        let mut parts = Vec::new();
        for token in text.split([' ', '_']).filter(|t| !t.is_empty()) {
            let (size, count) = match token.split_once('^') {
                Some((s, c)) => (parse_num(s, token)?, parse_num(c, token)?),
                None => (parse_num(token, token)?, 1),
            };
            if size == 0 || count == 0 {
                return Err(Error::MalformedDesign(format!(
                    "group type part {token:?} has a zero"
                )));
            }
            parts.push((size, count));
        }
        if parts.is_empty() {
            return Err(Error::MalformedDesign("empty group type".into()));
        }
        Ok(GroupType::new(parts))
    }
}

fn parse_num(s: &str, token: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::MalformedDesign(format!("bad group type part {token:?}")))
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, c)) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}^{c}")?;
        }
        Ok(())
    }
}

/// Number of blocks a 4-GDD of this type must have: cross pairs / 6.
pub fn expected_block_count(t: &GroupType) -> Result<usize> {
    let v = t.points();
    let pairs = choose2(v) - t.parts.iter().map(|&(s, c)| c * choose2(s)).sum::<usize>();
    if !pairs.is_multiple_of(6) {
        return Err(Error::NonIntegral {
            gtype: t.to_string(),
            pairs,
        });
    }
    Ok(pairs / 6)
}

pub(crate) fn choose2(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

/// A design: points `0..v`, a group partition, blocks, and optionally a hole
/// partition (DGDD) and/or a resolution into parallel classes (RGDD).
///
/// Construction validates structure (partitions, distinct in-range block
/// points, uniform block size); the coverage axioms are checked separately by
/// [`verify_gdd`], [`verify_dgdd`] and [`verify_resolution`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    v: usize,
    groups: Vec<Vec<u32>>,
    blocks: Vec<Vec<u32>>,
    holes: Option<Vec<Vec<u32>>>,
    resolution: Option<Vec<Vec<usize>>>,
}

impl Design {
    pub fn new(v: usize, groups: Vec<Vec<u32>>, blocks: Vec<Vec<u32>>) -> Result<Design> {
        Design::with_structure(v, groups, blocks, None, None)
    }

    pub fn with_structure(
        v: usize,
        mut groups: Vec<Vec<u32>>,
        mut blocks: Vec<Vec<u32>>,
        mut holes: Option<Vec<Vec<u32>>>,
        resolution: Option<Vec<Vec<usize>>>,
    ) -> Result<Design> {
        for g in &mut groups {
            g.sort_unstable();
        }
        groups.sort_by_key(|g| g.first().copied());
        check_partition(v, &groups, "groups")?;
        let mut size = None;
        for b in &mut blocks {
            b.sort_unstable();
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MalformedDesign(format!(
                    "block {b:?} repeats a point"
                )));
            }
            if b.iter().any(|&p| p as usize >= v) {
                return Err(Error::MalformedDesign(format!("block {b:?} exceeds v={v}")));
            }
            if b.len() < 2 {
                return Err(Error::MalformedDesign(format!("block {b:?} is too small")));
            }
            match size {
                None => size = Some(b.len()),
                Some(k) if k != b.len() => {
                    return Err(Error::MalformedDesign(format!(
                        "mixed block sizes {k} and {}",
                        b.len()
                    )))
                }
                _ => {}
            }
        }
        if let Some(hs) = &mut holes {
            for h in hs.iter_mut() {
                h.sort_unstable();
            }
            hs.sort_by_key(|h| h.first().copied());
            check_partition(v, hs, "holes")?;
        }
        if let Some(res) = &resolution {
            let mut seen = vec![false; blocks.len()];
            for class in res {
                for &i in class {
                    if i >= blocks.len() {
                        return Err(Error::MalformedDesign(format!(
                            "resolution references block {i} of {}",
                            blocks.len()
                        )));
                    }
                    if seen[i] {
                        return Err(Error::MalformedDesign(format!(
                            "block {i} appears in two classes"
                        )));
                    }
                    seen[i] = true;
                }
            }
            if !seen.iter().all(|&s| s) {
                return Err(Error::MalformedDesign(
                    "resolution does not cover all blocks".into(),
                ));
            }
        }
        Ok(Design {
            v,
            groups,
            blocks,
            holes,
            resolution,
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }
    pub fn groups(&self) -> &[Vec<u32>] {
        &self.groups
    }
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }
    pub fn holes(&self) -> Option<&[Vec<u32>]> {
        self.holes.as_deref()
    }
    pub fn resolution(&self) -> Option<&[Vec<usize>]> {
        self.resolution.as_deref()
    }

    /// Uniform block size, or None for an empty block list.
    pub fn block_size(&self) -> Option<usize> {
        self.blocks.first().map(|b| b.len())
    }

    pub fn group_type(&self) -> GroupType {
        GroupType::from_sizes(self.groups.iter().map(|g| g.len()))
    }

    /// Index of the group containing each point.
    pub fn group_index(&self) -> Vec<usize> {
        let mut idx = vec![0usize; self.v];
        for (i, g) in self.groups.iter().enumerate() {
            for &p in g {
                idx[p as usize] = i;
            }
        }
        idx
    }
}

/// The type of a design, read off its group partition.
pub fn group_type_of(design: &Design) -> GroupType {
    design.group_type()
}

fn check_partition(v: usize, sets: &[Vec<u32>], what: &str) -> Result<()> {
    let mut seen = vec![false; v];
    for set in sets {
        for &p in set {
            let p = p as usize;
            if p >= v {
                return Err(Error::MalformedDesign(format!(
                    "{what}: point {p} exceeds v={v}"
                )));
            }
            if seen[p] {
                return Err(Error::MalformedDesign(format!(
                    "{what}: point {p} appears twice"
                )));
            }
            seen[p] = true;
        }
    }
    if let Some(p) = seen.iter().position(|&s| !s) {
        return Err(Error::MalformedDesign(format!(
            "{what}: point {p} is not covered"
        )));
    }
    Ok(())
}

/// One verification defect, with its witness.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum Failure {
    /// Cross pair covered zero times.
    UncoveredPair(u32, u32),
    /// Cross pair covered more than once.
    RepeatedPair { a: u32, b: u32, count: u32 },
    /// Pair from one group occurs in a block.
    SameGroupPair(u32, u32),
    /// Pair from one hole occurs in a block.
    SameHolePair(u32, u32),
    /// |group ∩ hole| differs from the group's constant.
    HoleIntersection {
        group: usize,
        hole: usize,
        got: usize,
        want: usize,
    },
    /// A parallel class misses a point.
    ClassGap { class: usize, point: u32 },
    /// A parallel class covers a point twice.
    ClassOverlap { class: usize, point: u32 },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::UncoveredPair(a, b) => write!(f, "pair ({a}, {b}) uncovered"),
            Failure::RepeatedPair { a, b, count } => {
                write!(f, "pair ({a}, {b}) covered {count} times")
            }
            Failure::SameGroupPair(a, b) => write!(f, "same-group pair ({a}, {b}) in a block"),
            Failure::SameHolePair(a, b) => write!(f, "same-hole pair ({a}, {b}) in a block"),
            Failure::HoleIntersection {
                group,
                hole,
                got,
                want,
            } => write!(
                f,
                "group {group} meets hole {hole} in {got} points, expected {want}"
            ),
            Failure::ClassGap { class, point } => {
                write!(f, "class {class} misses point {point}")
            }
            Failure::ClassOverlap { class, point } => {
                write!(f, "class {class} covers point {point} twice")
            }
        }
    }
}

/// Outcome of a verification pass.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VerificationReport {
    pub ok: bool,
    /// First witnesses in ascending pair order, truncated to the limit.
    pub failures: Vec<Failure>,
    /// Total number of defects found (failures may be truncated).
    pub failure_count: usize,
    pub counted_blocks: usize,
    pub expected_blocks: usize,
}

impl VerificationReport {
    fn finish(mut self, limit: usize) -> VerificationReport {
        self.failure_count = self.failures.len();
        self.failures.truncate(limit);
        self.ok = self.failure_count == 0 && self.counted_blocks == self.expected_blocks;
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            write!(f, "ok: {} blocks", self.counted_blocks)
        } else {
            writeln!(
                f,
                "FAILED: {} defects, {} blocks (expected {})",
                self.failure_count, self.counted_blocks, self.expected_blocks
            )?;
            for fail in &self.failures {
                writeln!(f, "  {fail}")?;
            }
            if self.failure_count > self.failures.len() {
                writeln!(f, "  ... {} more", self.failure_count - self.failures.len())?;
            }
            Ok(())
        }
    }
}

/// Default number of witnesses kept in a report.
pub const DEFAULT_WITNESS_LIMIT: usize = 10;

/// Check the GDD axioms: every cross-group pair covered exactly once, no
/// same-group pair covered at all.
pub fn verify_gdd(design: &Design) -> VerificationReport {
    verify_gdd_limited(design, DEFAULT_WITNESS_LIMIT)
}

pub fn verify_gdd_limited(design: &Design, limit: usize) -> VerificationReport {
    verify_pairs(design, None, limit)
}

/// Check the DGDD axioms: holes must be present; pairs inside a group or a
/// hole are uncovered, everything else covered exactly once, and each group
/// meets every hole in the same number of points.
pub fn verify_dgdd(design: &Design) -> Result<VerificationReport> {
    verify_dgdd_limited(design, DEFAULT_WITNESS_LIMIT)
}

pub fn verify_dgdd_limited(design: &Design, limit: usize) -> Result<VerificationReport> {
    let holes = design.holes().ok_or(Error::MissingHoles)?;
    Ok(verify_pairs(design, Some(holes), limit))
}

/// Check that every resolution class partitions the point set.
pub fn verify_resolution(design: &Design) -> Result<VerificationReport> {
    verify_resolution_limited(design, DEFAULT_WITNESS_LIMIT)
}

pub fn verify_resolution_limited(design: &Design, limit: usize) -> Result<VerificationReport> {
    let resolution = design.resolution().ok_or(Error::MissingResolution)?;
    let mut failures = Vec::new();
    for (ci, class) in resolution.iter().enumerate() {
        let mut count = vec![0u8; design.v];
        for &bi in class {
            for &p in &design.blocks[bi] {
                count[p as usize] = count[p as usize].saturating_add(1);
            }
        }
        for (p, &c) in count.iter().enumerate() {
            if c == 0 {
                failures.push(Failure::ClassGap {
                    class: ci,
                    point: p as u32,
                });
            } else if c > 1 {
                failures.push(Failure::ClassOverlap {
                    class: ci,
                    point: p as u32,
                });
            }
        }
    }
    let counted: usize = resolution.iter().map(|c| c.len()).sum();
    Ok(VerificationReport {
        ok: false,
        failures,
        failure_count: 0,
        counted_blocks: counted,
        expected_blocks: design.blocks.len(),
    }
    .finish(limit))
}

/// Pair scan shared by the GDD and DGDD verifiers. Witnesses come out in
/// ascending pair order regardless of block order.
fn verify_pairs(design: &Design, holes: Option<&[Vec<u32>]>, limit: usize) -> VerificationReport {
    let v = design.v;
    let group_of = design.group_index();
    let hole_of = holes.map(|hs| {
        let mut idx = vec![0usize; v];
        for (i, h) in hs.iter().enumerate() {
            for &p in h {
                idx[p as usize] = i;
            }
        }
        idx
    });

    // triangular pair counters: pair (a < b) at b(b-1)/2 + a
    let mut counts = vec![0u8; choose2(v)];
    for block in &design.blocks {
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                let idx = choose2(b as usize) + a as usize;
                counts[idx] = counts[idx].saturating_add(1);
            }
        }
    }

    let mut failures = Vec::new();
    let mut cross_pairs = 0usize;
    for b in 1..v {
        for a in 0..b {
            let c = counts[choose2(b) + a];
            let same_group = group_of[a] == group_of[b];
            let same_hole = hole_of.as_ref().is_some_and(|h| h[a] == h[b]);
            let (a, b) = (a as u32, b as u32);
            if same_group {
                if c > 0 {
                    failures.push(Failure::SameGroupPair(a, b));
                }
            } else if same_hole {
                if c > 0 {
                    failures.push(Failure::SameHolePair(a, b));
                }
            } else {
                cross_pairs += 1;
                if c == 0 {
                    failures.push(Failure::UncoveredPair(a, b));
                } else if c > 1 {
                    failures.push(Failure::RepeatedPair {
                        a,
                        b,
                        count: c as u32,
                    });
                }
            }
        }
    }

    // constant group-hole intersection sizes
    if let Some(hs) = holes {
        for (gi, g) in design.groups.iter().enumerate() {
            let mut per_hole = vec![0usize; hs.len()];
            let hole_of = hole_of.as_ref().unwrap();
            for &p in g {
                per_hole[hole_of[p as usize]] += 1;
            }
            let want = per_hole[0];
            for (hi, &got) in per_hole.iter().enumerate() {
                if got != want {
                    failures.push(Failure::HoleIntersection {
                        group: gi,
                        hole: hi,
                        got,
                        want,
                    });
                }
            }
        }
    }

    let k = design.block_size().unwrap_or(4);
    let per_block = choose2(k);
    let expected = if per_block > 0 && cross_pairs.is_multiple_of(per_block) {
        cross_pairs / per_block
    } else {
        usize::MAX // forces a count mismatch
    };
    VerificationReport {
        ok: false,
        failures,
        failure_count: 0,
        counted_blocks: design.blocks.len(),
        expected_blocks: expected,
    }
    .finish(limit)
}
