//! Positive roots for the families B_n, C_n, D_n, their matrix entry sets,
//! the mirror order on row/column indices, and enumeration of basic
//! subsets and basic pairs.
//!
//! Matrix rows and columns are indexed by `1, ..., n` (then `0` for the odd
//! orthogonal family) followed by `-n, ..., -1`, in the mirror order
//! `1 < 2 < ... < 0 < ... < -2 < -1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::{FieldCtx, Fq};
use crate::Error;

/// The three classical families: C = Sp_{2n}, D = O_{2n}, B = O_{2n+1}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Family {
    B,
    C,
    D,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            _ => Err(Error::InvalidParameter(format!(
                "unknown family {s:?}, expected B, C or D"
            ))),
        }
    }

    /// Matrix size: 2n for C and D, 2n+1 for B.
    pub fn matrix_size(self, n: u32) -> usize {
        match self {
            Family::B => 2 * n as usize + 1,
            Family::C | Family::D => 2 * n as usize,
        }
    }

    pub fn has_zero_index(self) -> bool {
        matches!(self, Family::B)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::B => write!(f, "B"),
            Family::C => write!(f, "C"),
            Family::D => write!(f, "D"),
        }
    }
}

/// A positive root.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Root {
    /// eps_i - eps_j for 1 <= i < j <= n
    EpsMinus(u32, u32),
    /// eps_i + eps_j for 1 <= i < j <= n
    EpsPlus(u32, u32),
    /// 2 eps_i (family C only)
    TwoEps(u32),
    /// eps_i (family B only)
    Eps(u32),
}

impl Root {
    /// The matrix entries E(alpha).
    pub fn entries(self) -> Vec<Entry> {
        match self {
            Root::EpsMinus(i, j) => vec![
                Entry::new(i as i32, j as i32),
                Entry::new(-(j as i32), -(i as i32)),
            ],
            Root::EpsPlus(i, j) => vec![
                Entry::new(i as i32, -(j as i32)),
                Entry::new(j as i32, -(i as i32)),
            ],
            Root::TwoEps(i) => vec![Entry::new(i as i32, -(i as i32))],
            Root::Eps(i) => vec![Entry::new(i as i32, 0), Entry::new(0, -(i as i32))],
        }
    }

    /// The unique entry of E(alpha) lying in E^+.
    pub fn rep(self) -> Entry {
        match self {
            Root::EpsMinus(i, j) => Entry::new(i as i32, j as i32),
            Root::EpsPlus(i, j) => Entry::new(i as i32, -(j as i32)),
            Root::TwoEps(i) => Entry::new(i as i32, -(i as i32)),
            Root::Eps(i) => Entry::new(i as i32, 0),
        }
    }

    pub fn is_long(self) -> bool {
        matches!(self, Root::TwoEps(_))
    }

    /// Sign relating the label on the mirrored entry to the label on the
    /// representative, per the basis element the root spans. `None` for the
    /// self-paired long root entry.
    pub fn mirror_sign(self, family: Family) -> Option<i8> {
        match self {
            Root::EpsMinus(_, _) => Some(-1),
            Root::EpsPlus(_, _) => Some(if family == Family::C { 1 } else { -1 }),
            Root::Eps(_) => Some(-1),
            Root::TwoEps(_) => None,
        }
    }

    /// Text encoding: "e1-e2", "e1+e2", "2e1", "e1".
    pub fn text(self) -> String {
        match self {
            Root::EpsMinus(i, j) => format!("e{i}-e{j}"),
            Root::EpsPlus(i, j) => format!("e{i}+e{j}"),
            Root::TwoEps(i) => format!("2e{i}"),
            Root::Eps(i) => format!("e{i}"),
        }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidParameter(format!("cannot parse root {s:?}"));
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("2e") {
            let i = rest.parse::<u32>().map_err(|_| bad())?;
            return Ok(Root::TwoEps(i));
        }
        if let Some(rest) = s.strip_prefix('e') {
            if let Some(k) = rest.find(['-', '+']) {
                let i = rest[..k].parse::<u32>().map_err(|_| bad())?;
                let j = rest[k + 1..]
                    .strip_prefix('e')
                    .ok_or_else(bad)?
                    .parse::<u32>()
                    .map_err(|_| bad())?;
                if i >= j {
                    return Err(bad());
                }
                return Ok(if rest.as_bytes()[k] == b'-' {
                    Root::EpsMinus(i, j)
                } else {
                    Root::EpsPlus(i, j)
                });
            }
            let i = rest.parse::<u32>().map_err(|_| bad())?;
            return Ok(Root::Eps(i));
        }
        Err(bad())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

/// A matrix entry (row, col) with indices from the mirror-ordered set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Entry {
    pub row: i32,
    pub col: i32,
}

impl Entry {
    pub fn new(row: i32, col: i32) -> Self {
        Entry { row, col }
    }

    /// The mirrored entry (-col, -row).
    pub fn mirror(self) -> Self {
        Entry::new(-self.col, -self.row)
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// The combinatorial data of one family at one rank: index set, orders,
/// positive roots and entry bookkeeping.
pub struct RootSystem {
    pub family: Family,
    pub n: u32,
    m: usize,
    roots: Vec<Root>,
    entries: Vec<Entry>,
}

impl RootSystem {
    pub fn new(family: Family, n: u32) -> Result<Self, Error> {
        if n < 1 {
            return Err(Error::InvalidParameter("rank n must be >= 1".into()));
        }
        let mut roots = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                roots.push(Root::EpsMinus(i, j));
                roots.push(Root::EpsPlus(i, j));
            }
        }
        match family {
            Family::C => roots.extend((1..=n).map(Root::TwoEps)),
            Family::B => roots.extend((1..=n).map(Root::Eps)),
            Family::D => {}
        }
        let mut rs = RootSystem {
            family,
            n,
            m: family.matrix_size(n),
            roots,
            entries: Vec::new(),
        };
        let mut sorted = std::mem::take(&mut rs.roots);
        sorted.sort_by_key(|r| rs.entry_rank(r.rep()));
        rs.roots = sorted;
        let mut entries: Vec<Entry> = rs.roots.iter().flat_map(|r| r.entries()).collect();
        entries.sort_by_key(|&e| rs.entry_rank(e));
        entries.dedup();
        rs.entries = entries;
        Ok(rs)
    }

    pub fn matrix_size(&self) -> usize {
        self.m
    }

    /// Positive roots in the deterministic order (by representative entry).
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    /// The entry set E = union of E(alpha), sorted by the entry order.
    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Row/column indices in mirror order.
    pub fn indices(&self) -> Vec<i32> {
        let mut v: Vec<i32> = (1..=self.n as i32).collect();
        if self.family.has_zero_index() {
            v.push(0);
        }
        v.extend((1..=self.n as i32).rev().map(|k| -k));
        v
    }

    /// Position of an index in the mirror order, as a matrix row/column.
    pub fn pos(&self, v: i32) -> usize {
        if v > 0 {
            (v - 1) as usize
        } else if v == 0 {
            debug_assert!(self.family.has_zero_index());
            self.n as usize
        } else {
            (self.m as i32 + v) as usize
        }
    }

    pub fn index_at(&self, pos: usize) -> i32 {
        let n = self.n as usize;
        if pos < n {
            pos as i32 + 1
        } else if self.family.has_zero_index() && pos == n {
            0
        } else {
            pos as i32 - self.m as i32
        }
    }

    pub fn valid_index(&self, v: i32) -> bool {
        let n = self.n as i32;
        (v != 0 || self.family.has_zero_index()) && -n <= v && v <= n
    }

    /// The strict mirror order on indices.
    pub fn mirror_less(&self, a: i32, b: i32) -> Result<bool, Error> {
        if !self.valid_index(a) || !self.valid_index(b) {
            return Err(Error::InvalidParameter(format!(
                "index outside the mirror-ordered set: ({a},{b})"
            )));
        }
        Ok(self.pos(a) < self.pos(b))
    }

    /// Rank of an entry in the total order on E: by column, then from the
    /// diagonal upward within a column.
    pub fn entry_rank(&self, e: Entry) -> (usize, usize) {
        (self.pos(e.col), self.m - self.pos(e.row))
    }

    /// The strict total order on entries.
    pub fn entry_less(&self, a: Entry, b: Entry) -> bool {
        self.entry_rank(a) < self.entry_rank(b)
    }

    /// All strictly-upper entries of the ambient m x m unitriangular group,
    /// in entry order.
    pub fn ambient_entries(&self) -> Vec<Entry> {
        let idx = self.indices();
        let mut out = Vec::new();
        for (pi, &r) in idx.iter().enumerate() {
            for &c in &idx[pi + 1..] {
                out.push(Entry::new(r, c));
            }
        }
        out.sort_by_key(|&e| self.entry_rank(e));
        out
    }

    pub fn contains_root(&self, r: Root) -> bool {
        self.roots.contains(&r)
    }

    /// The root whose representative is the given E^+ entry.
    pub fn root_of_rep(&self, e: Entry) -> Option<Root> {
        self.roots.iter().copied().find(|r| r.rep() == e)
    }

    /// Entry set and representative for a root of this system.
    pub fn entries_of_root(&self, r: Root) -> Result<(Vec<Entry>, Entry), Error> {
        if !self.contains_root(r) {
            return Err(Error::InvalidRoot(format!(
                "{} is not a positive root of {}{}",
                r.text(),
                self.family,
                self.n
            )));
        }
        Ok((r.entries(), r.rep()))
    }

    /// True when E(D) repeats no row and no column.
    pub fn is_basic(&self, subset: &[Root]) -> bool {
        let mut rows = vec![false; self.m];
        let mut cols = vec![false; self.m];
        for r in subset {
            for e in r.entries() {
                let (pr, pc) = (self.pos(e.row), self.pos(e.col));
                if rows[pr] || cols[pc] {
                    return false;
                }
                rows[pr] = true;
                cols[pc] = true;
            }
        }
        true
    }

    /// All basic subsets, as sorted index lists into `roots()`, ordered by
    /// size then lexicographically.
    pub fn basic_subsets(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut rows = vec![false; self.m];
        let mut cols = vec![false; self.m];
        let mut current = Vec::new();
        self.basic_dfs(0, &mut rows, &mut cols, &mut current, &mut out);
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    fn basic_dfs(
        &self,
        start: usize,
        rows: &mut [bool],
        cols: &mut [bool],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        out.push(current.clone());
        for k in start..self.roots.len() {
            let entries = self.roots[k].entries();
            if entries
                .iter()
                .any(|e| rows[self.pos(e.row)] || cols[self.pos(e.col)])
            {
                continue;
            }
            for e in &entries {
                rows[self.pos(e.row)] = true;
                cols[self.pos(e.col)] = true;
            }
            current.push(k);
            self.basic_dfs(k + 1, rows, cols, current, out);
            current.pop();
            for e in &entries {
                rows[self.pos(e.row)] = false;
                cols[self.pos(e.col)] = false;
            }
        }
    }

    /// Every basic pair (D, phi), ordered by |D|, then by the sorted
    /// representatives, then lexicographically on the label codes.
    pub fn basic_pairs(&self, fq: &FieldCtx) -> Vec<BasicPair> {
        let mut out = Vec::new();
        let units: Vec<Fq> = fq.units().collect();
        for subset in self.basic_subsets() {
            let roots: Vec<Root> = subset.iter().map(|&k| self.roots[k]).collect();
            let mut labels = vec![0usize; roots.len()];
            loop {
                let parts: Vec<(Root, Fq)> = roots
                    .iter()
                    .zip(&labels)
                    .map(|(&r, &k)| (r, units[k]))
                    .collect();
                out.push(BasicPair { parts });
                // odometer over label tuples, last position fastest
                let mut pos = labels.len();
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    labels[pos] += 1;
                    if labels[pos] < units.len() {
                        break;
                    }
                    labels[pos] = 0;
                }
                if labels.iter().all(|&k| k == 0) {
                    break;
                }
            }
        }
        out
    }
}

/// A basic subset of roots with a labeling by nonzero field values; the
/// common index of superclasses and supercharacters.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct BasicPair {
    /// (root, label) sorted by the root order; labels are nonzero.
    parts: Vec<(Root, Fq)>,
}

impl BasicPair {
    pub fn empty() -> Self {
        BasicPair { parts: Vec::new() }
    }

    pub fn new(rs: &RootSystem, mut parts: Vec<(Root, Fq)>) -> Result<Self, Error> {
        parts.sort_by_key(|(r, _)| rs.entry_rank(r.rep()));
        let roots: Vec<Root> = parts.iter().map(|&(r, _)| r).collect();
        for r in &roots {
            if !rs.contains_root(*r) {
                return Err(Error::InvalidRoot(r.text()));
            }
        }
        if roots.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("repeated root in basic pair".into()));
        }
        if !rs.is_basic(&roots) {
            return Err(Error::NotBasic);
        }
        if parts.iter().any(|&(_, v)| v.is_zero()) {
            return Err(Error::InvalidParameter(
                "basic pair labels must be nonzero".into(),
            ));
        }
        Ok(BasicPair { parts })
    }

    pub fn parts(&self) -> &[(Root, Fq)] {
        &self.parts
    }

    pub fn roots(&self) -> impl Iterator<Item = Root> + '_ {
        self.parts.iter().map(|&(r, _)| r)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, r: Root) -> bool {
        self.parts.iter().any(|&(s, _)| s == r)
    }

    pub fn phi(&self, r: Root) -> Option<Fq> {
        self.parts.iter().find(|&&(s, _)| s == r).map(|&(_, v)| v)
    }

    /// The labeled entry set E(D): each representative carries phi(alpha)
    /// and each mirrored entry the signed label.
    pub fn entry_labels(&self, rs: &RootSystem, fq: &FieldCtx) -> Vec<(Entry, Fq)> {
        let mut out = Vec::new();
        for &(r, v) in &self.parts {
            out.push((r.rep(), v));
            if let Some(sign) = r.mirror_sign(rs.family) {
                let mv = if sign < 0 { fq.neg(v) } else { v };
                out.push((r.rep().mirror(), mv));
            }
        }
        out
    }

    /// Compact text id, e.g. "{}" or "{e1-e2:1,2e2:2}".
    pub fn id(&self) -> String {
        let inner: Vec<String> = self
            .parts
            .iter()
            .map(|(r, v)| format!("{}:{}", r.text(), v.0))
            .collect();
        format!("{{{}}}", inner.join(","))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "roots": self
                .parts
                .iter()
                .map(|(r, v)| serde_json::json!({"root": r.text(), "phi": v.0}))
                .collect::<Vec<_>>()
        })
    }
}

impl fmt::Display for BasicPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}
