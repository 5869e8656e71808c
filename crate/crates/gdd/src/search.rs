//! Exact-cover search for 4-GDDs of small types.
//!
//! The existence question is encoded as exact cover: columns are the
//! cross-group pairs, rows are the candidate blocks (4-subsets with at most
//! one point per group), and a 4-GDD is a set of rows covering every column
//! exactly once. The solver is a dancing-links implementation of Knuth's
//! Algorithm X with the minimum-remaining-rows column heuristic.
//!
//! A `Found` result is verified before being returned and an `Exhausted`
//! result means the full (optionally symmetry-reduced) tree was traversed;
//! resource limits produce `Timeout`, never a false `Exhausted`.

use std::time::{Duration, Instant};

use itertools::Itertools;

use crate::design::{expected_block_count, verify_gdd, Design, GroupType};
use crate::error::{Error, Result};

/// Columns are cross-group pairs; rows are candidate transversal 4-subsets.
#[derive(Debug, Clone)]
pub struct ExactCoverInstance {
    pub group_type: GroupType,
    pub v: usize,
    /// Sorted point sets, one per group, descending size.
    pub groups: Vec<Vec<u32>>,
    /// Candidate blocks in lexicographic order.
    pub rows: Vec<[u32; 4]>,
    /// Cross pairs (a < b) in ascending order; the column universe.
    pub columns: Vec<(u32, u32)>,
}

impl ExactCoverInstance {
    pub fn column_count(&self) -> usize {
        self.columns.len()
    }
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }
}

/// Enumerate columns and candidate rows for the given type.
pub fn build_instance(t: &GroupType) -> Result<ExactCoverInstance> {
    expected_block_count(t)?; // NonIntegral => no design can exist
    let v = t.points();
    let sizes = t.sizes();
    let mut groups: Vec<Vec<u32>> = Vec::new();
    let mut next = 0u32;
    for s in sizes {
        groups.push((next..next + s as u32).collect());
        next += s as u32;
    }
    let mut group_of = vec![0usize; v];
    for (gi, g) in groups.iter().enumerate() {
        for &p in g {
            group_of[p as usize] = gi;
        }
    }
    let mut columns = Vec::new();
    for b in 1..v as u32 {
        for a in 0..b {
            if group_of[a as usize] != group_of[b as usize] {
                columns.push((a, b));
            }
        }
    }
    let mut rows = Vec::new();
    for combo in (0..v as u32).combinations(4) {
        let distinct = combo.iter().map(|&p| group_of[p as usize]).all_unique();
        if distinct {
            rows.push([combo[0], combo[1], combo[2], combo[3]]);
        }
    }
    Ok(ExactCoverInstance {
        group_type: t.clone(),
        v,
        groups,
        rows,
        columns,
    })
}

/// Search limits and switches.
#[derive(Debug, Clone)]
pub struct SearchLimits {
    pub timeout: Duration,
    pub node_cap: u64,
    /// The sequential solver explores rows in lexicographic order and is
    /// deterministic regardless; the flag reserves the contract for any
    /// parallel exploration strategy.
    pub deterministic: bool,
    /// Restrict the block covering the least cross pair to its canonical
    /// form under group/point relabelling.
    pub symmetry_breaking: bool,
}

impl Default for SearchLimits {
    fn default() -> SearchLimits {
        SearchLimits {
            timeout: Duration::from_secs(60),
            node_cap: 100_000_000,
            deterministic: true,
            symmetry_breaking: true,
        }
    }
}

impl SearchLimits {
    /// Extended profile for long refutations.
    pub fn slow() -> SearchLimits {
        SearchLimits {
            timeout: Duration::from_secs(24 * 3600),
            node_cap: u64::MAX,
            ..SearchLimits::default()
        }
    }
}

/// Outcome of an existence search.
#[derive(Debug)]
pub enum SearchOutcome {
    Found(Design),
    /// The whole tree was traversed without a cover.
    Exhausted {
        nodes: u64,
    },
    /// A resource limit fired first.
    Timeout {
        nodes: u64,
    },
}

/// Decide existence of a 4-GDD of the given type within the limits.
pub fn solve_existence(t: &GroupType, limits: &SearchLimits) -> Result<SearchOutcome> {
    let instance = match build_instance(t) {
        Ok(i) => i,
        Err(Error::NonIntegral { .. }) => {
            // no candidate block set can cover a non-integral pair count
            return Ok(SearchOutcome::Exhausted { nodes: 0 });
        }
        Err(e) => return Err(e),
    };
    let keep = if limits.symmetry_breaking {
        canonical_first_rows(&instance)
    } else {
        None
    };
    let mut dlx = Dlx::build(&instance, keep.as_deref());
    let deadline = Instant::now() + limits.timeout;
    match dlx.search(limits.node_cap, deadline) {
        DlxOutcome::Solution(rows) => {
            let blocks = rows
                .iter()
                .map(|&r| instance.rows[r].to_vec())
                .collect::<Vec<_>>();
            let design = Design::new(instance.v, instance.groups.clone(), blocks)?;
            let report = verify_gdd(&design);
            if !report.ok {
                return Err(Error::Internal(format!(
                    "search produced an invalid design: {report}"
                )));
            }
            Ok(SearchOutcome::Found(design))
        }
        DlxOutcome::Exhausted => Ok(SearchOutcome::Exhausted { nodes: dlx.nodes }),
        DlxOutcome::ResourceExceeded => Ok(SearchOutcome::Timeout { nodes: dlx.nodes }),
    }
}

/// Rows allowed to cover the least cross pair (0, m1).
///
/// Every solution has a block covering the pair of point 0 with the least
/// point m1 outside its group. Relabelling points within groups and swapping
/// equal-size groups maps solutions to solutions, fixes 0 and m1, and can
/// move the block's remaining two points to the least points of the first
/// available groups of the same sizes; so only those canonical completions
/// need to be tried. Disable via `symmetry_breaking = false` to audit.
fn canonical_first_rows(instance: &ExactCoverInstance) -> Option<Vec<bool>> {
    let group_of: Vec<usize> = {
        let mut idx = vec![0usize; instance.v];
        for (gi, g) in instance.groups.iter().enumerate() {
            for &p in g {
                idx[p as usize] = gi;
            }
        }
        idx
    };
    let g0 = group_of[0];
    let m1 = (0..instance.v as u32).find(|&p| group_of[p as usize] != g0)?;
    let g1 = group_of[m1 as usize];

    // canonical completions: for each unordered size pattern of two further
    // groups, the least points of the first groups of those sizes
    let mut allowed: Vec<[u32; 4]> = Vec::new();
    let other: Vec<usize> = (0..instance.groups.len())
        .filter(|&gi| gi != g0 && gi != g1)
        .collect();
    let mut patterns: Vec<(usize, usize)> = Vec::new();
    for (i, &ga) in other.iter().enumerate() {
        for &gb in &other[i + 1..] {
            let (sa, sb) = (instance.groups[ga].len(), instance.groups[gb].len());
            let pat = if sa >= sb { (sa, sb) } else { (sb, sa) };
            if patterns.contains(&pat) {
                continue;
            }
            patterns.push(pat);
            // first group of size pat.0, then first *other* group of size pat.1
            let first_a = other
                .iter()
                .copied()
                .find(|&gi| instance.groups[gi].len() == pat.0)
                .unwrap();
            let first_b = other
                .iter()
                .copied()
                .find(|&gi| gi != first_a && instance.groups[gi].len() == pat.1)
                .unwrap();
            let mut block = [
                0u32,
                m1,
                instance.groups[first_a][0],
                instance.groups[first_b][0],
            ];
            block.sort_unstable();
            allowed.push(block);
        }
    }

    let mut keep = vec![true; instance.rows.len()];
    for (ri, row) in instance.rows.iter().enumerate() {
        if row.contains(&0) && row.contains(&m1) && !allowed.contains(row) {
            keep[ri] = false;
        }
    }
    Some(keep)
}

// ---------------------------------------------------------------------------
// dancing links

const NIL: u32 = u32::MAX;

enum DlxOutcome {
    Solution(Vec<usize>),
    Exhausted,
    ResourceExceeded,
}

/// Toroidal doubly linked sparse matrix. Node 0..columns are the column
/// heads; cells follow, one per (row, column) incidence.
struct Dlx {
    left: Vec<u32>,
    right: Vec<u32>,
    up: Vec<u32>,
    down: Vec<u32>,
    /// Column head of each cell; for heads, the remaining row count.
    col: Vec<u32>,
    /// Row id of each cell; unused for heads.
    row: Vec<u32>,
    head: u32,
    nodes: u64,
}

impl Dlx {
    fn build(instance: &ExactCoverInstance, keep: Option<&[bool]>) -> Dlx {
        let ncols = instance.columns.len();
        let mut col_of_pair = std::collections::HashMap::new();
        for (ci, &pair) in instance.columns.iter().enumerate() {
            col_of_pair.insert(pair, ci as u32);
        }
        let kept_rows: Vec<usize> = (0..instance.rows.len())
            .filter(|&ri| keep.is_none_or(|k| k[ri]))
            .collect();
        let capacity = 1 + ncols + kept_rows.len() * 6;
        let mut dlx = Dlx {
            left: Vec::with_capacity(capacity),
            right: Vec::with_capacity(capacity),
            up: Vec::with_capacity(capacity),
            down: Vec::with_capacity(capacity),
            col: Vec::with_capacity(capacity),
            row: Vec::with_capacity(capacity),
            head: 0,
            nodes: 0,
        };
        // head + column heads, linked in a ring
        let total_heads = ncols + 1;
        for i in 0..total_heads as u32 {
            dlx.left
                .push((i + total_heads as u32 - 1) % total_heads as u32);
            dlx.right.push((i + 1) % total_heads as u32);
            dlx.up.push(i);
            dlx.down.push(i);
            dlx.col.push(0);
            dlx.row.push(NIL);
        }
        for &ri in &kept_rows {
            let block = instance.rows[ri];
            let mut first_cell = NIL;
            let mut prev = NIL;
            for (i, &a) in block.iter().enumerate() {
                for &b in &block[i + 1..] {
                    let pair = if a < b { (a, b) } else { (b, a) };
                    let head = 1 + col_of_pair[&pair];
                    let cell = dlx.left.len() as u32;
                    // vertical insert above the column head
                    let above = dlx.up[head as usize];
                    dlx.up.push(above);
                    dlx.down.push(head);
                    dlx.up[head as usize] = cell;
                    dlx.down[above as usize] = cell;
                    dlx.col.push(head);
                    dlx.row.push(ri as u32);
                    dlx.col[head as usize] += 1;
                    // horizontal ring within the row
                    if first_cell == NIL {
                        dlx.left.push(cell);
                        dlx.right.push(cell);
                        first_cell = cell;
                    } else {
                        let last = prev;
                        let next = dlx.right[last as usize];
                        dlx.left.push(last);
                        dlx.right.push(next);
                        dlx.right[last as usize] = cell;
                        dlx.left[next as usize] = cell;
                    }
                    prev = cell;
                }
            }
        }
        dlx
    }

    fn cover(&mut self, head: u32) {
        let (l, r) = (self.left[head as usize], self.right[head as usize]);
        self.right[l as usize] = r;
        self.left[r as usize] = l;
        let mut i = self.down[head as usize];
        while i != head {
            let mut j = self.right[i as usize];
            while j != i {
                let (u, d) = (self.up[j as usize], self.down[j as usize]);
                self.down[u as usize] = d;
                self.up[d as usize] = u;
                let head_of_j = self.col[j as usize] as usize;
                self.col[head_of_j] -= 1;
                j = self.right[j as usize];
            }
            i = self.down[i as usize];
        }
    }

    fn uncover(&mut self, head: u32) {
        let mut i = self.up[head as usize];
        while i != head {
            let mut j = self.left[i as usize];
            while j != i {
                let (u, d) = (self.up[j as usize], self.down[j as usize]);
                self.down[u as usize] = j;
                self.up[d as usize] = j;
                let head_of_j = self.col[j as usize] as usize;
                self.col[head_of_j] += 1;
                j = self.left[j as usize];
            }
            i = self.up[i as usize];
        }
        let (l, r) = (self.left[head as usize], self.right[head as usize]);
        self.right[l as usize] = head;
        self.left[r as usize] = head;
    }

    /// Column with the fewest remaining rows, ties broken by column index.
    fn choose_column(&self) -> Option<u32> {
        let mut best = None;
        let mut best_count = u32::MAX;
        let mut c = self.right[self.head as usize];
        while c != self.head {
            let count = self.col[c as usize];
            if count < best_count {
                best = Some(c);
                best_count = count;
                if count == 0 {
                    break;
                }
            }
            c = self.right[c as usize];
        }
        best
    }

    fn search(&mut self, node_cap: u64, deadline: Instant) -> DlxOutcome {
        let mut solution = Vec::new();
        match self.recurse(&mut solution, node_cap, deadline) {
            Step::Found => DlxOutcome::Solution(solution),
            Step::Exhausted => DlxOutcome::Exhausted,
            Step::Limited => DlxOutcome::ResourceExceeded,
        }
    }

    /// Depth-first search; recursion depth is the solution size.
    fn recurse(&mut self, solution: &mut Vec<usize>, node_cap: u64, deadline: Instant) -> Step {
        let column = match self.choose_column() {
            None => return Step::Found,
            Some(c) => c,
        };
        self.cover(column);
        let mut limited = false;
        let mut cell = self.down[column as usize];
        while cell != column {
            self.nodes += 1;
            if self.nodes >= node_cap
                || (self.nodes.is_multiple_of(4096) && Instant::now() > deadline)
            {
                limited = true;
                break;
            }
            let mut j = self.right[cell as usize];
            while j != cell {
                self.cover(self.col[j as usize]);
                j = self.right[j as usize];
            }
            solution.push(self.row[cell as usize] as usize);
            match self.recurse(solution, node_cap, deadline) {
                Step::Found => return Step::Found,
                Step::Limited => limited = true,
                Step::Exhausted => {}
            }
            solution.pop();
            let mut j = self.left[cell as usize];
            while j != cell {
                self.uncover(self.col[j as usize]);
                j = self.left[j as usize];
            }
            if limited {
                break;
            }
            cell = self.down[cell as usize];
        }
        self.uncover(column);
        if limited {
            Step::Limited
        } else {
            Step::Exhausted
        }
    }
}

enum Step {
    Found,
    Exhausted,
    Limited,
}
