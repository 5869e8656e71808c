//! Base-block specifications and their development into full designs.
//!
//! A specification partitions `0..v` into groups, then lists orbit classes:
//! base blocks together with a shift mapping indexed by `j`. Developing every
//! base block over its `j` range yields the design's block set.
//!
//! Mapping segments come in two flavours. A plain segment shifts within a
//! cyclic window: `x -> start + ((x - start + step*j) mod length)`; `step = 0`
//! leaves the points fixed. A `prod3` segment carries the group Z_c x Z_3 on
//! `3c` consecutive points, element `(a, b)` encoded as `3a + b`, and the step
//! selects which translate is added for shift `j`:
//!
//!   step 1:  x (+) e(j)          where e(t) = (floor(t/3) mod c, t mod 3)
//!   step 2:  x (+) e(j) (+) e(j)
//!   step 3:  x (+) (j mod c, 0)
//!
//! Steps 2 and 3 are genuinely different maps (adding e(j) twice is not the
//! same as adding element number 2j or 3j); conflating them breaks the large
//! mixed-class designs, which is exactly what the negative tests pin down.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::design::{Design, GroupType};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub length: usize,
    pub step: usize,
    /// `Some(c)` marks a Z_c x Z_3 segment; requires `length == 3c`.
    pub prod3: Option<usize>,
}

impl Segment {
    pub fn plain(start: usize, length: usize, step: usize) -> Segment {
        Segment {
            start,
            length,
            step,
            prod3: None,
        }
    }

    pub fn product(start: usize, c: usize, step: usize) -> Segment {
        Segment {
            start,
            length: 3 * c,
            step,
            prod3: Some(c),
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.start <= x && x < self.start + self.length
    }

    fn apply(&self, x: usize, j: usize) -> Result<usize> {
        let local = x - self.start;
        match self.prod3 {
            None => Ok(self.start + (local + self.step * j) % self.length),
            Some(c) => {
                let (a, b) = (local / 3, local % 3);
                let (da, db) = match self.step {
                    1 => ((j / 3) % c, j % 3),
                    2 => ((2 * (j / 3)) % c, (2 * j) % 3),
                    3 => (j % c, 0),
                    s => return Err(Error::UnsupportedStep(s)),
                };
                Ok(self.start + 3 * ((a + da) % c) + (b + db) % 3)
            }
        }
    }
}

/// Map point `x` under shift `j` through the segment that contains it.
pub fn apply_mapping(x: usize, j: usize, segments: &[Segment]) -> Result<usize> {
    let seg = segments
        .iter()
        .find(|s| s.contains(x))
        .ok_or(Error::UnmappedPoint(x))?;
    seg.apply(x, j)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitClass {
    pub base_blocks: Vec<[u32; 4]>,
    pub j_count: usize,
    pub segments: Vec<Segment>,
}

/// How a contiguous range of points splits into groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupDirective {
    /// The `modulus` residue classes of `[lo, hi)`.
    Residues {
        modulus: usize,
        lo: usize,
        hi: usize,
    },
    /// The single group `[lo, hi)`.
    Range { lo: usize, hi: usize },
}

impl GroupDirective {
    pub fn span(&self) -> (usize, usize) {
        match *self {
            GroupDirective::Residues { lo, hi, .. } | GroupDirective::Range { lo, hi } => (lo, hi),
        }
    }

    /// (group size, group count) contributed by this directive.
    pub fn part(&self) -> (usize, usize) {
        match *self {
            GroupDirective::Residues { modulus, lo, hi } => ((hi - lo) / modulus, modulus),
            GroupDirective::Range { lo, hi } => (hi - lo, 1),
        }
    }

    fn groups(&self) -> Vec<Vec<u32>> {
        match *self {
            GroupDirective::Residues { modulus, lo, hi } => (0..modulus)
                .map(|r| ((lo + r)..hi).step_by(modulus).map(|p| p as u32).collect())
                .collect(),
            GroupDirective::Range { lo, hi } => vec![(lo..hi).map(|p| p as u32).collect()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseBlockSpec {
    pub name: String,
    pub v: usize,
    pub directives: Vec<GroupDirective>,
    pub classes: Vec<OrbitClass>,
    pub signature: Option<String>,
}

impl BaseBlockSpec {
    /// Group type implied by the directives.
    pub fn group_type(&self) -> GroupType {
        GroupType::new(self.directives.iter().map(|d| d.part()))
    }

    pub fn groups(&self) -> Vec<Vec<u32>> {
        self.directives.iter().flat_map(|d| d.groups()).collect()
    }

    /// Total developed block count: sum over classes of bases x shifts.
    pub fn block_count(&self) -> usize {
        self.classes
            .iter()
            .map(|c| c.base_blocks.len() * c.j_count)
            .sum()
    }

    fn validate(&self) -> Result<()> {
        let mut covered = vec![false; self.v];
        for d in &self.directives {
            let (lo, hi) = d.span();
            if let GroupDirective::Residues { modulus, .. } = *d {
                if modulus == 0 || (hi - lo) % modulus != 0 {
                    return Err(Error::Partition(format!(
                        "{}: residue directive [{lo}, {hi}) not divisible by {modulus}",
                        self.name
                    )));
                }
            }
            if hi > self.v || lo >= hi {
                return Err(Error::Partition(format!(
                    "{}: directive [{lo}, {hi}) out of range for v={}",
                    self.name, self.v
                )));
            }
            for (x, seen) in covered.iter_mut().enumerate().take(hi).skip(lo) {
                if *seen {
                    return Err(Error::Partition(format!(
                        "{}: point {x} covered by two directives",
                        self.name
                    )));
                }
                *seen = true;
            }
        }
        if let Some(x) = covered.iter().position(|&c| !c) {
            return Err(Error::Partition(format!(
                "{}: point {x} not covered by any directive",
                self.name
            )));
        }
        for class in &self.classes {
            for seg in &class.segments {
                if let Some(c) = seg.prod3 {
                    if seg.length != 3 * c {
                        return Err(Error::Partition(format!(
                            "{}: prod3 segment length {} != 3*{c}",
                            self.name, seg.length
                        )));
                    }
                }
            }
            for b in &class.base_blocks {
                if b.iter().any(|&p| p as usize >= self.v) {
                    return Err(Error::Partition(format!(
                        "{}: base block {b:?} exceeds v={}",
                        self.name, self.v
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Develop a specification into a full design. Blocks come out in canonical
/// order: class, then base block, then shift index.
pub fn expand(spec: &BaseBlockSpec) -> Result<Design> {
    spec.validate()?;
    let mut blocks = Vec::with_capacity(spec.block_count());
    let mut seen: HashSet<[u32; 4]> = HashSet::with_capacity(spec.block_count());
    for class in &spec.classes {
        for base in &class.base_blocks {
            for j in 0..class.j_count {
                let mut img = [0u32; 4];
                for (slot, &p) in img.iter_mut().zip(base.iter()) {
                    *slot = apply_mapping(p as usize, j, &class.segments)? as u32;
                }
                img.sort_unstable();
                if img.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::CollapsedBlock(img.to_vec()));
                }
                if !seen.insert(img) {
                    return Err(Error::DuplicateBlock(img.to_vec()));
                }
                blocks.push(img.to_vec());
            }
        }
    }
    Design::new(spec.v, spec.groups(), blocks)
}

// ---------------------------------------------------------------------------
// .gdd text format

/// Parse the `.gdd` spec format. Lines: `gdd name=<s> v=<n>` header, group
/// directives, then per class an `orbit count=<n> reps=<J>` line followed by
/// its `map` and `block` lines, and an optional trailing `sig` line.
pub fn parse_spec(text: &str) -> Result<BaseBlockSpec> {
    parse_spec_named(text, "<gdd>")
}

pub fn parse_spec_named(text: &str, file: &str) -> Result<BaseBlockSpec> {
    let syntax = |line: usize, msg: String| Error::Syntax {
        file: file.to_string(),
        line,
        msg,
    };
    let mut name = None;
    let mut v = None;
    let mut directives = Vec::new();
    let mut classes: Vec<OrbitClass> = Vec::new();
    let mut pending: Option<(usize, OrbitClass)> = None; // declared block count
    let mut signature = None;

    let close = |pending: Option<(usize, OrbitClass)>,
                 classes: &mut Vec<OrbitClass>,
                 lineno: usize|
     -> Result<()> {
        if let Some((count, class)) = pending {
            if class.base_blocks.len() != count {
                return Err(syntax(
                    lineno,
                    format!(
                        "orbit declared {count} blocks but lists {}",
                        class.base_blocks.len()
                    ),
                ));
            }
            classes.push(class);
        }
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap();
        match head {
            "gdd" => {
                for tok in tokens {
                    if let Some(n) = tok.strip_prefix("name=") {
                        name = Some(n.to_string());
                    } else if let Some(val) = tok.strip_prefix("v=") {
                        v = Some(
                            val.parse()
                                .map_err(|_| syntax(lineno, format!("bad v {val:?}")))?,
                        );
                    } else {
                        return Err(syntax(lineno, format!("unexpected token {tok:?}")));
                    }
                }
            }
            "groups" => {
                let kind = tokens.next().unwrap_or("");
                let nums: Vec<usize> = tokens
                    .map(|t| {
                        t.parse()
                            .map_err(|_| syntax(lineno, format!("bad number {t:?}")))
                    })
                    .collect::<Result<_>>()?;
                match (kind, nums.as_slice()) {
                    ("residues", [k, lo, hi]) => directives.push(GroupDirective::Residues {
                        modulus: *k,
                        lo: *lo,
                        hi: *hi,
                    }),
                    ("range", [lo, hi]) => {
                        directives.push(GroupDirective::Range { lo: *lo, hi: *hi })
                    }
                    _ => return Err(syntax(lineno, format!("bad groups directive {line:?}"))),
                }
            }
            "orbit" => {
                close(pending.take(), &mut classes, lineno)?;
                let mut count = None;
                let mut reps = None;
                for tok in tokens {
                    if let Some(val) = tok.strip_prefix("count=") {
                        count = val.parse().ok();
                    } else if let Some(val) = tok.strip_prefix("reps=") {
                        reps = val.parse().ok();
                    }
                }
                let (count, reps) = match (count, reps) {
                    (Some(c), Some(r)) if r > 0 => (c, r),
                    _ => return Err(syntax(lineno, "orbit needs count= and reps=".into())),
                };
                pending = Some((
                    count,
                    OrbitClass {
                        base_blocks: Vec::new(),
                        j_count: reps,
                        segments: Vec::new(),
                    },
                ));
            }
            "map" => {
                let class = &mut pending
                    .as_mut()
                    .ok_or_else(|| syntax(lineno, "map outside an orbit".into()))?
                    .1;
                let nums: Vec<String> = tokens.map(|t| t.to_string()).collect();
                let seg = match nums.as_slice() {
                    [start, len, step] => Segment::plain(
                        parse_usize(start, lineno, file)?,
                        parse_usize(len, lineno, file)?,
                        parse_usize(step, lineno, file)?,
                    ),
                    [start, len, step, kw, c] if kw == "prod3" => {
                        let seg = Segment {
                            start: parse_usize(start, lineno, file)?,
                            length: parse_usize(len, lineno, file)?,
                            step: parse_usize(step, lineno, file)?,
                            prod3: Some(parse_usize(c, lineno, file)?),
                        };
                        if !matches!(seg.step, 1..=3) {
                            return Err(Error::UnsupportedStep(seg.step));
                        }
                        seg
                    }
                    _ => return Err(syntax(lineno, format!("bad map line {line:?}"))),
                };
                class.segments.push(seg);
            }
            "block" => {
                let class = &mut pending
                    .as_mut()
                    .ok_or_else(|| syntax(lineno, "block outside an orbit".into()))?
                    .1;
                let pts: Vec<u32> = tokens
                    .map(|t| {
                        t.parse()
                            .map_err(|_| syntax(lineno, format!("bad point {t:?}")))
                    })
                    .collect::<Result<_>>()?;
                let arr: [u32; 4] = pts
                    .try_into()
                    .map_err(|_| syntax(lineno, "block needs exactly 4 points".into()))?;
                class.base_blocks.push(arr);
            }
            "sig" => {
                let rest = line["sig".len()..].trim();
                signature = Some(rest.to_string());
            }
            _ => return Err(syntax(lineno, format!("unrecognized line {line:?}"))),
        }
    }
    close(pending.take(), &mut classes, text.lines().count())?;
    let spec = BaseBlockSpec {
        name: name.ok_or_else(|| syntax(0, "missing gdd header".into()))?,
        v: v.ok_or_else(|| syntax(0, "missing v=".into()))?,
        directives,
        classes,
        signature,
    };
    spec.validate()?;
    Ok(spec)
}

fn parse_usize(t: &str, line: usize, file: &str) -> Result<usize> {
    t.parse().map_err(|_| Error::Syntax {
        file: file.to_string(),
        line,
        msg: format!("bad number {t:?}"),
    })
}

pub fn serialize_spec(spec: &BaseBlockSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "gdd name={} v={}", spec.name, spec.v);
    for d in &spec.directives {
        match *d {
            GroupDirective::Residues { modulus, lo, hi } => {
                let _ = writeln!(out, "groups residues {modulus} {lo} {hi}");
            }
            GroupDirective::Range { lo, hi } => {
                let _ = writeln!(out, "groups range {lo} {hi}");
            }
        }
    }
    for class in &spec.classes {
        let _ = writeln!(
            out,
            "orbit count={} reps={}",
            class.base_blocks.len(),
            class.j_count
        );
        for seg in &class.segments {
            match seg.prod3 {
                Some(c) => {
                    let _ = writeln!(
                        out,
                        "map {} {} {} prod3 {c}",
                        seg.start, seg.length, seg.step
                    );
                }
                None => {
                    let _ = writeln!(out, "map {} {} {}", seg.start, seg.length, seg.step);
                }
            }
        }
        for b in &class.base_blocks {
            let _ = writeln!(out, "block {} {} {} {}", b[0], b[1], b[2], b[3]);
        }
    }
    if let Some(sig) = &spec.signature {
        let _ = writeln!(out, "sig {sig}");
    }
    out
}

pub fn read_spec_file(path: &std::path::Path) -> Result<BaseBlockSpec> {
    let text = std::fs::read_to_string(path)?;
    parse_spec_named(&text, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// compact (v, M, T) signatures

/// Node of a parsed signature: integer or parenthesized list.
#[derive(Debug, Clone, PartialEq, Eq)]
enum SigNode {
    Int(i64),
    List(Vec<SigNode>),
}

impl SigNode {
    fn as_int(&self) -> Option<i64> {
        match self {
            SigNode::Int(n) => Some(*n),
            _ => None,
        }
    }
    fn as_list(&self) -> Option<&[SigNode]> {
        match self {
            SigNode::List(items) => Some(items),
            _ => None,
        }
    }
}

fn parse_sig(text: &str) -> Option<SigNode> {
    let mut chars = text.chars().peekable();
    let node = parse_sig_node(&mut chars)?;
    for c in chars {
        if !c.is_whitespace() {
            return None;
        }
    }
    Some(node)
}

fn parse_sig_node(chars: &mut std::iter::Peekable<std::str::Chars>) -> Option<SigNode> {
    while chars.peek().is_some_and(|c| c.is_whitespace()) {
        chars.next();
    }
    match chars.peek()? {
        '(' => {
            chars.next();
            let mut items = Vec::new();
            loop {
                while chars.peek().is_some_and(|c| c.is_whitespace() || *c == ',') {
                    chars.next();
                }
                if chars.peek() == Some(&')') {
                    chars.next();
                    return Some(SigNode::List(items));
                }
                items.push(parse_sig_node(chars)?);
            }
        }
        c if c.is_ascii_digit() => {
            let mut n = 0i64;
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                n = n * 10 + (chars.next().unwrap() as u8 - b'0') as i64;
            }
            Some(SigNode::Int(n))
        }
        _ => None,
    }
}

/// Result of a signature comparison: verdict plus a human-readable diff.
#[derive(Debug, Clone)]
pub struct SignatureCheck {
    pub matches: bool,
    pub diffs: Vec<String>,
}

/// Compare a spec against its compact `(v, M, T)` signature. `M` is one
/// `(blockCount, jCount, segments)` triple per orbit class, each segment a
/// `(length, step)` pair or `(length, step, (c, 3))` triple; plain steps are
/// compared modulo the segment length (the identity map may be written with
/// `step = length`). `T` lists one `(size, count)` pair per group directive.
pub fn check_signature(spec: &BaseBlockSpec) -> Option<SignatureCheck> {
    let sig_text = spec.signature.as_deref()?;
    let mut diffs = Vec::new();
    let root = match parse_sig(sig_text) {
        Some(node) => node,
        None => {
            return Some(SignatureCheck {
                matches: false,
                diffs: vec![format!("unparseable signature {sig_text:?}")],
            })
        }
    };
    let items = root.as_list().unwrap_or(&[]);
    if items.len() != 3 {
        return Some(SignatureCheck {
            matches: false,
            diffs: vec![format!(
                "signature has {} components, expected 3",
                items.len()
            )],
        });
    }

    if items[0].as_int() != Some(spec.v as i64) {
        diffs.push(format!("v: signature {:?} vs spec {}", items[0], spec.v));
    }

    match items[1].as_list() {
        Some(m_classes) => {
            if m_classes.len() != spec.classes.len() {
                diffs.push(format!(
                    "M: {} classes in signature, {} in spec",
                    m_classes.len(),
                    spec.classes.len()
                ));
            }
            for (ci, (mnode, class)) in m_classes.iter().zip(&spec.classes).enumerate() {
                check_class(ci, mnode, class, &mut diffs);
            }
        }
        None => diffs.push("M is not a list".into()),
    }

    match items[2].as_list() {
        Some(t_parts) => {
            let derived: Vec<(i64, i64)> = spec
                .directives
                .iter()
                .map(|d| {
                    let (s, c) = d.part();
                    (s as i64, c as i64)
                })
                .collect();
            let listed: Vec<(i64, i64)> = t_parts
                .iter()
                .filter_map(|p| {
                    let items = p.as_list()?;
                    Some((items.first()?.as_int()?, items.get(1)?.as_int()?))
                })
                .collect();
            if listed.len() != t_parts.len() || listed != derived {
                diffs.push(format!("T: signature {listed:?} vs directives {derived:?}"));
            }
        }
        None => diffs.push("T is not a list".into()),
    }

    Some(SignatureCheck {
        matches: diffs.is_empty(),
        diffs,
    })
}

fn check_class(ci: usize, mnode: &SigNode, class: &OrbitClass, diffs: &mut Vec<String>) {
    let items = match mnode.as_list() {
        Some(items) if items.len() == 3 => items,
        _ => {
            diffs.push(format!("M[{ci}]: expected (blocks, reps, segments)"));
            return;
        }
    };
    if items[0].as_int() != Some(class.base_blocks.len() as i64) {
        diffs.push(format!(
            "M[{ci}]: block count {:?} vs spec {}",
            items[0],
            class.base_blocks.len()
        ));
    }
    if items[1].as_int() != Some(class.j_count as i64) {
        diffs.push(format!(
            "M[{ci}]: reps {:?} vs spec {}",
            items[1], class.j_count
        ));
    }
    let segs = match items[2].as_list() {
        Some(s) => s,
        None => {
            diffs.push(format!("M[{ci}]: segments not a list"));
            return;
        }
    };
    if segs.len() != class.segments.len() {
        diffs.push(format!(
            "M[{ci}]: {} segments in signature, {} in spec",
            segs.len(),
            class.segments.len()
        ));
        return;
    }
    for (si, (snode, seg)) in segs.iter().zip(&class.segments).enumerate() {
        let parts = match snode.as_list() {
            Some(p) => p,
            None => {
                diffs.push(format!("M[{ci}].seg[{si}]: not a list"));
                continue;
            }
        };
        let (len, step) = match (
            parts.first().and_then(SigNode::as_int),
            parts.get(1).and_then(SigNode::as_int),
        ) {
            (Some(l), Some(s)) => (l, s),
            _ => {
                diffs.push(format!("M[{ci}].seg[{si}]: bad shape"));
                continue;
            }
        };
        if len != seg.length as i64 {
            diffs.push(format!(
                "M[{ci}].seg[{si}]: length {len} vs spec {}",
                seg.length
            ));
        }
        match (parts.len(), seg.prod3) {
            (2, None) => {
                // identity may be written step = length
                if seg.length > 0
                    && step.rem_euclid(seg.length as i64) != (seg.step % seg.length) as i64
                {
                    diffs.push(format!(
                        "M[{ci}].seg[{si}]: step {step} vs spec {} (mod {})",
                        seg.step, seg.length
                    ));
                }
            }
            (3, Some(c)) => {
                if step != seg.step as i64 {
                    diffs.push(format!(
                        "M[{ci}].seg[{si}]: step {step} vs spec {}",
                        seg.step
                    ));
                }
                let sub = parts[2].as_list().unwrap_or(&[]);
                let want = [SigNode::Int(c as i64), SigNode::Int(3)];
                if sub != want {
                    diffs.push(format!(
                        "M[{ci}].seg[{si}]: modulus {:?} vs (c={c}, 3)",
                        parts[2]
                    ));
                }
            }
            (n, p) => diffs.push(format!(
                "M[{ci}].seg[{si}]: {n}-tuple vs prod3={}",
                p.is_some()
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{expected_block_count, verify_gdd};

    fn demo_spec() -> BaseBlockSpec {
        // 4^5 10^2 head: one class, 11 base blocks, j < 10, two step-2 windows
        BaseBlockSpec {
            name: "4^5_10^2".into(),
            v: 40,
            directives: vec![
                GroupDirective::Residues {
                    modulus: 5,
                    lo: 0,
                    hi: 20,
                },
                GroupDirective::Residues {
                    modulus: 2,
                    lo: 20,
                    hi: 40,
                },
            ],
            classes: vec![OrbitClass {
                base_blocks: vec![[0, 1, 20, 39]],
                j_count: 10,
                segments: vec![Segment::plain(0, 20, 2), Segment::plain(20, 20, 2)],
            }],
            signature: Some("(40, ((11, 10, ((20, 2), (20, 2)))), ((4, 5), (10, 2)))".into()),
        }
    }

    #[test]
    fn plain_mapping_matches_hand_computation() {
        // x=45, j=3 over [(0,40,10), (40,10,5), (50,8,2)]: 40 + (5 + 15) mod 10
        let segs = [
            Segment::plain(0, 40, 10),
            Segment::plain(40, 10, 5),
            Segment::plain(50, 8, 2),
        ];
        assert_eq!(apply_mapping(45, 3, &segs).unwrap(), 40);
        assert_eq!(apply_mapping(0, 1, &segs).unwrap(), 10);
        assert!(matches!(
            apply_mapping(58, 0, &segs),
            Err(Error::UnmappedPoint(58))
        ));
    }

    #[test]
    fn product_mapping_rules() {
        let step3 = [Segment::product(0, 114, 3)];
        // 0 (+) (1, 0) = (1, 0) = 3
        assert_eq!(apply_mapping(0, 1, &step3).unwrap(), 3);
        let step2 = [Segment::product(0, 114, 2)];
        // x=5=(1,2), e(2)=(0,2) twice = (0,1); (1,2)(+)(0,1) = (1,0) = 3
        assert_eq!(apply_mapping(5, 2, &step2).unwrap(), 3);
        let step1 = [Segment::product(0, 114, 1)];
        // x=4=(1,1), e(5)=(1,2); sum (2,0) = 6
        assert_eq!(apply_mapping(4, 5, &step1).unwrap(), 6);
        // j = 0 is the identity for every step rule
        for step in 1..=3 {
            let seg = [Segment::product(0, 9, step)];
            for x in 0..27 {
                assert_eq!(apply_mapping(x, 0, &seg).unwrap(), x);
            }
        }
        let bad = [Segment {
            start: 0,
            length: 12,
            step: 4,
            prod3: Some(4),
        }];
        assert!(matches!(
            apply_mapping(0, 1, &bad),
            Err(Error::UnsupportedStep(4))
        ));
    }

    #[test]
    fn step_zero_fixes_points() {
        let segs = [Segment::plain(84, 8, 0)];
        for x in 84..92 {
            for j in 0..14 {
                assert_eq!(apply_mapping(x, j, &segs).unwrap(), x);
            }
        }
    }

    #[test]
    fn expand_identity_class() {
        // jCount = 1 with a zero-shift mapping reproduces the base blocks
        let spec = BaseBlockSpec {
            name: "3^4".into(),
            v: 12,
            directives: vec![GroupDirective::Residues {
                modulus: 4,
                lo: 0,
                hi: 12,
            }],
            classes: vec![OrbitClass {
                base_blocks: vec![[0, 1, 2, 3], [4, 5, 6, 7]],
                j_count: 1,
                segments: vec![Segment::plain(0, 12, 0)],
            }],
            signature: None,
        };
        let d = expand(&spec).unwrap();
        assert_eq!(d.blocks(), &[vec![0, 1, 2, 3], vec![4, 5, 6, 7]]);
    }

    #[test]
    fn expand_rejects_duplicates_and_collapse() {
        let mut spec = demo_spec();
        spec.classes[0].base_blocks = vec![[0, 1, 20, 39], [2, 3, 22, 21]];
        // developing the second block reproduces shifts of the first after
        // wrapping; construct a genuine duplicate instead: same base twice
        spec.classes[0].base_blocks = vec![[0, 1, 20, 39], [0, 1, 20, 39]];
        assert!(matches!(expand(&spec), Err(Error::DuplicateBlock(_))));

        // segment maps are bijections, so a collapsed block can only come
        // from a repeated point in the base block itself
        let collapse = BaseBlockSpec {
            name: "x".into(),
            v: 8,
            directives: vec![GroupDirective::Residues {
                modulus: 8,
                lo: 0,
                hi: 8,
            }],
            classes: vec![OrbitClass {
                base_blocks: vec![[0, 0, 4, 6]],
                j_count: 2,
                segments: vec![Segment::plain(0, 8, 1)],
            }],
            signature: None,
        };
        assert!(matches!(expand(&collapse), Err(Error::CollapsedBlock(_))));
    }

    #[test]
    fn parse_round_trip_and_partition_errors() {
        let text = serialize_spec(&demo_spec());
        let spec = parse_spec(&text).unwrap();
        assert_eq!(spec, demo_spec());
        assert_eq!(serialize_spec(&spec), text);

        let gap = "gdd name=x v=58\ngroups range 0 40\norbit count=0 reps=1\nmap 0 58 0\n";
        assert!(matches!(parse_spec(gap), Err(Error::Partition(_))));
        let bad = "gdd name=x v=4\ngroups range 0 4\nnot a line\n";
        assert!(matches!(
            parse_spec(bad),
            Err(Error::Syntax { line: 3, .. })
        ));
    }

    #[test]
    fn signature_verdicts() {
        let spec = demo_spec();
        // block count 11 in the signature vs 1 in this trimmed spec
        let check = check_signature(&spec).unwrap();
        assert!(!check.matches);

        let mut full = spec.clone();
        full.signature = Some("(40, ((1, 10, ((20, 2), (20, 2)))), ((4, 5), (10, 2)))".into());
        assert!(check_signature(&full).unwrap().matches);

        full.signature = Some("(40, ((1, 10, ((20, 2), (20, 2)))), ((4, 4), (10, 2)))".into());
        let check = check_signature(&full).unwrap();
        assert!(!check.matches);
        assert!(check.diffs.iter().any(|d| d.starts_with("T:")));

        let mut none = spec;
        none.signature = None;
        assert!(check_signature(&none).is_none());
    }

    #[test]
    fn expand_demo_subset_counts() {
        // one base block over 10 shifts: 10 developed blocks
        let spec = demo_spec();
        let d = expand(&spec).unwrap();
        assert_eq!(d.blocks().len(), 10);
        assert_eq!(spec.group_type(), GroupType::parse("4^5 10^2").unwrap());
        assert_eq!(expected_block_count(&spec.group_type()).unwrap(), 110);
        assert!(!verify_gdd(&d).ok); // only a tenth of the blocks
    }
}
