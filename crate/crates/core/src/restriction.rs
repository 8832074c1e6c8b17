//! Local-restriction digraphs.
//!
//! A digraph `D` has vertex set `{eps_s} ∪ R ∪ T` where `R` holds the
//! recurrent vertices (tuples of `span` parts) and `T` the terminal stubs of
//! length `0..span`. Walks from `eps_s` through `R` into `T` concatenate to
//! exactly the compositions of the class. Window rules never span more than
//! two consecutive recurrent blocks because `span >= max_window - 1`, so
//! checking each adjacent block pair is enough.
//!
//! The built-in classes:
//!
//! * `mullen(d)` — every window of `1..=d` consecutive parts has nonzero sum
//!   (so parts themselves are nonzero). The definition deliberately reads
//!   "at most d" as all window lengths `1..=d`; the prefix-sum bijection to
//!   Carlitz-type compositions forces that reading.
//! * `carlitz(d)` — no repeated part among any `d+1` consecutive parts,
//!   weak or nonzero, optionally with the first `d` parts nonzero.
//! * `window_sum(d)` — the sum of any `d` consecutive parts is nonzero.
//! * `product_ne_one(d)` — over a finite field, the product of any `d`
//!   consecutive parts differs from 1.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::group::{Group, GroupElement};

/// Whether the zero element is a legal part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartsMode {
    Weak,
    Nonzero,
}

/// One sliding-window restriction.
#[derive(Clone, Debug, PartialEq)]
pub enum WindowKind {
    /// Every window of exactly `len` parts sums to a nonzero element.
    SumNonzero,
    /// Any two parts at distance `< len` are distinct.
    AllDistinct,
    /// Every window of exactly `len` parts has field product different from 1.
    ProductNeOne(FieldSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct WindowRule {
    pub len: usize,
    pub kind: WindowKind,
}

/// Extra restriction applying only at the start of the composition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FirstBlock {
    /// The first `min(d, m)` parts must be nonzero.
    FirstPartsNonzero(usize),
}

/// A full class description: enough to build the digraph and to test
/// membership of an arbitrary sequence directly.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassSpec {
    pub parts_mode: PartsMode,
    pub rules: Vec<WindowRule>,
    pub first_block: Option<FirstBlock>,
}

impl ClassSpec {
    /// No window rules at all; with `Nonzero` parts this is the unrestricted
    /// composition class, with `Weak` the unrestricted weak class.
    pub fn unrestricted(weak: bool) -> Self {
        ClassSpec {
            parts_mode: if weak { PartsMode::Weak } else { PartsMode::Nonzero },
            rules: vec![],
            first_block: None,
        }
    }

    pub fn mullen(d: usize) -> Self {
        ClassSpec {
            parts_mode: PartsMode::Nonzero,
            rules: (1..=d)
                .map(|w| WindowRule {
                    len: w,
                    kind: WindowKind::SumNonzero,
                })
                .collect(),
            first_block: None,
        }
    }

    pub fn carlitz(d: usize, weak: bool, first_d_nonzero: bool) -> Self {
        ClassSpec {
            parts_mode: if weak { PartsMode::Weak } else { PartsMode::Nonzero },
            rules: vec![WindowRule {
                len: d + 1,
                kind: WindowKind::AllDistinct,
            }],
            first_block: first_d_nonzero.then_some(FirstBlock::FirstPartsNonzero(d)),
        }
    }

    pub fn window_sum(d: usize, weak: bool) -> Self {
        ClassSpec {
            parts_mode: if weak { PartsMode::Weak } else { PartsMode::Nonzero },
            rules: vec![WindowRule {
                len: d,
                kind: WindowKind::SumNonzero,
            }],
            first_block: None,
        }
    }

    pub fn product_ne_one(field: FieldSpec, d: usize) -> Self {
        ClassSpec {
            parts_mode: PartsMode::Nonzero,
            rules: vec![WindowRule {
                len: d,
                kind: WindowKind::ProductNeOne(field),
            }],
            first_block: None,
        }
    }

    pub fn max_window(&self) -> usize {
        self.rules.iter().map(|r| r.len).max().unwrap_or(0)
    }

    /// Span of the digraph representation: `max(1, max_window - 1)`.
    pub fn span(&self) -> usize {
        self.max_window().saturating_sub(1).max(1)
    }

    pub fn validate(&self, group: &Group) -> Result<()> {
        for rule in &self.rules {
            if rule.len == 0 {
                return Err(Error::Parse("window length must be >= 1".into()));
            }
            if let WindowKind::ProductNeOne(f) = &rule.kind {
                if f.additive_group() != group {
                    return Err(Error::Shape(
                        "field additive group differs from the composition group".into(),
                    ));
                }
            }
        }
        if let Some(FirstBlock::FirstPartsNonzero(d)) = self.first_block {
            if d == 0 {
                return Err(Error::Parse("first-block length must be >= 1".into()));
            }
            if d > self.span() {
                return Err(Error::Unsupported(
                    "first-block rule longer than the digraph span".into(),
                ));
            }
        }
        Ok(())
    }

    fn part_ok(&self, group: &Group, part: &GroupElement) -> bool {
        match self.parts_mode {
            PartsMode::Weak => true,
            PartsMode::Nonzero => !group.is_zero(part),
        }
    }

    /// Checks exactly the constraints that complete at the last position of
    /// `parts`, assuming every proper prefix already passed. This is the
    /// oracle's pruning step and the building block of [`ClassSpec::matches`].
    /// `first_block` participates only when `with_first_block` is set.
    fn last_position_ok(
        &self,
        group: &Group,
        parts: &[GroupElement],
        with_first_block: bool,
    ) -> bool {
        let len = parts.len();
        debug_assert!(len >= 1);
        let last = &parts[len - 1];
        if !self.part_ok(group, last) {
            return false;
        }
        if with_first_block {
            if let Some(FirstBlock::FirstPartsNonzero(d)) = self.first_block {
                if len <= d && group.is_zero(last) {
                    return false;
                }
            }
        }
        for rule in &self.rules {
            match &rule.kind {
                WindowKind::SumNonzero => {
                    if len >= rule.len {
                        let mut acc = group.zero();
                        for p in &parts[len - rule.len..] {
                            acc = group.add_unchecked(&acc, p);
                        }
                        if group.is_zero(&acc) {
                            return false;
                        }
                    }
                }
                WindowKind::AllDistinct => {
                    // parts at distance 1..rule.len-1 from the last one
                    let lo = len.saturating_sub(rule.len);
                    if parts[lo..len - 1].iter().any(|p| p == last) {
                        return false;
                    }
                }
                WindowKind::ProductNeOne(f) => {
                    if len >= rule.len {
                        let mut acc = f.one();
                        for p in &parts[len - rule.len..] {
                            acc = match f.mul(&acc, p) {
                                Ok(v) => v,
                                Err(_) => return false,
                            };
                        }
                        if acc == f.one() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub(crate) fn prefix_ok(&self, group: &Group, parts: &[GroupElement]) -> bool {
        self.last_position_ok(group, parts, true)
    }

    /// Full membership check of a complete sequence.
    pub fn matches(&self, group: &Group, parts: &[GroupElement]) -> bool {
        (1..=parts.len()).all(|i| self.last_position_ok(group, &parts[..i], true))
    }

    /// Membership ignoring the first-block rule; this is what recurrent
    /// vertices and arcs must satisfy.
    fn internal_ok(&self, group: &Group, parts: &[GroupElement]) -> bool {
        (1..=parts.len()).all(|i| self.last_position_ok(group, &parts[..i], false))
    }

    fn first_block_ok(&self, group: &Group, parts: &[GroupElement]) -> bool {
        match self.first_block {
            None => true,
            Some(FirstBlock::FirstPartsNonzero(d)) => parts
                .iter()
                .take(d)
                .all(|p| !group.is_zero(p)),
        }
    }

    /// True when componentwise multiplication by a unit maps the class to
    /// itself (sum and distinctness rules are preserved; field products are
    /// not).
    pub fn is_multiplication_closed(&self) -> bool {
        self.rules
            .iter()
            .all(|r| !matches!(r.kind, WindowKind::ProductNeOne(_)))
    }

    /// `Some(d)` when the rules are exactly the nonzero-window-sum family of
    /// lengths `1..=d`.
    pub fn mullen_degree(&self) -> Option<usize> {
        if self.first_block.is_some() || self.parts_mode != PartsMode::Nonzero {
            return None;
        }
        let mut lens: Vec<usize> = self
            .rules
            .iter()
            .map(|r| match r.kind {
                WindowKind::SumNonzero => Some(r.len),
                _ => None,
            })
            .collect::<Option<_>>()?;
        lens.sort_unstable();
        lens.dedup();
        let d = *lens.last()?;
        (lens == (1..=d).collect::<Vec<_>>()).then_some(d)
    }
}

/// A tuple of parts: a recurrent vertex or a terminal stub.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartSeq {
    parts: Vec<GroupElement>,
}

impl PartSeq {
    pub fn new(parts: Vec<GroupElement>) -> Self {
        PartSeq { parts }
    }

    pub fn parts(&self) -> &[GroupElement] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Size reduced into `G`: the weight carried by the transfer matrix.
    pub fn size_in(&self, group: &Group) -> GroupElement {
        let mut acc = group.zero();
        for p in &self.parts {
            acc = group.add_unchecked(&acc, p);
        }
        acc
    }

    /// Size with componentwise integer addition, no reduction. The
    /// aperiodicity witness search works with these unreduced sums.
    pub fn size_int(&self, group: &Group) -> Vec<u64> {
        let mut acc = vec![0u64; group.rank()];
        for p in &self.parts {
            for (a, &c) in acc.iter_mut().zip(p.coords()) {
                *a += c;
            }
        }
        acc
    }
}

/// Outcome of the bounded aperiodicity-condition search: an explicit witness
/// per coordinate, or `Unknown` (never a claimed "false").
#[derive(Clone, Debug)]
pub enum Condition2Outcome {
    Witness(Vec<CoordWitness>),
    Unknown,
}

/// Walk family witnessing the gcd condition for one coordinate: `walk_count`
/// walks of length `walk_len` from `from` to `to` whose intermediate
/// coordinate sums `sums` have gcd of pairwise differences 1, all other
/// coordinates fixed per position.
#[derive(Clone, Debug)]
pub struct CoordWitness {
    pub coord: usize,
    pub from: usize,
    pub to: usize,
    pub walk_len: usize,
    pub sums: Vec<u64>,
    pub walk_count: usize,
}

/// The local-restriction digraph over `R`, with start and terminal arcs.
#[derive(Clone, Debug)]
pub struct RestrictionDigraph {
    group: Group,
    span: usize,
    recurrent: Vec<PartSeq>,
    start: Vec<usize>,
    arcs: Vec<Vec<usize>>,
    terminal: Vec<Vec<(usize, PartSeq)>>,
    class: Option<ClassSpec>,
}

fn tuples(alphabet: &[GroupElement], len: usize) -> Vec<Vec<GroupElement>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * alphabet.len());
        for prefix in &out {
            for a in alphabet {
                let mut t = prefix.clone();
                t.push(a.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

impl RestrictionDigraph {
    /// Builds the digraph of a class: recurrent vertices are the internally
    /// valid `span`-tuples, arcs check the concatenation of the two blocks,
    /// start arcs carry the first-block rule, and terminal arcs check the
    /// boundary into the final partial block.
    pub fn build(group: &Group, spec: ClassSpec) -> Result<Self> {
        spec.validate(group)?;
        let alphabet: Vec<GroupElement> = match spec.parts_mode {
            PartsMode::Weak => group.elements().collect(),
            PartsMode::Nonzero => group.nonzero_elements().collect(),
        };
        for rule in &spec.rules {
            if matches!(rule.kind, WindowKind::AllDistinct) && rule.len > alphabet.len() {
                return Err(Error::DegenerateClass(format!(
                    "window of {} distinct parts over an alphabet of {}",
                    rule.len,
                    alphabet.len()
                )));
            }
        }
        let span = spec.span();
        let recurrent: Vec<PartSeq> = tuples(&alphabet, span)
            .into_iter()
            .filter(|t| spec.internal_ok(group, t))
            .map(PartSeq::new)
            .collect();
        if recurrent.is_empty() {
            return Err(Error::DegenerateClass("no recurrent vertices".into()));
        }
        let start: Vec<usize> = recurrent
            .iter()
            .enumerate()
            .filter(|(_, v)| spec.first_block_ok(group, v.parts()))
            .map(|(i, _)| i)
            .collect();
        if start.is_empty() {
            return Err(Error::DegenerateClass("no start arcs".into()));
        }

        let mut arcs = vec![Vec::new(); recurrent.len()];
        let mut concat = Vec::with_capacity(2 * span);
        for (ui, u) in recurrent.iter().enumerate() {
            for (vi, v) in recurrent.iter().enumerate() {
                concat.clear();
                concat.extend_from_slice(u.parts());
                concat.extend_from_slice(v.parts());
                if spec.internal_ok(group, &concat) {
                    arcs[ui].push(vi);
                }
            }
        }

        let mut terminal = vec![Vec::new(); span];
        for (b, slot) in terminal.iter_mut().enumerate() {
            let stubs = tuples(&alphabet, b);
            for (ui, u) in recurrent.iter().enumerate() {
                for stub in &stubs {
                    concat.clear();
                    concat.extend_from_slice(u.parts());
                    concat.extend_from_slice(stub);
                    if spec.internal_ok(group, &concat) {
                        slot.push((ui, PartSeq::new(stub.clone())));
                    }
                }
            }
        }

        Ok(RestrictionDigraph {
            group: group.clone(),
            span,
            recurrent,
            start,
            arcs,
            terminal,
            class: Some(spec),
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn span(&self) -> usize {
        self.span
    }

    pub fn recurrent(&self) -> &[PartSeq] {
        &self.recurrent
    }

    pub fn start_arcs(&self) -> &[usize] {
        &self.start
    }

    pub fn arcs(&self) -> &[Vec<usize>] {
        &self.arcs
    }

    /// Terminal arcs grouped by stub length `b` in `0..span`.
    pub fn terminal_arcs(&self, b: usize) -> Option<&[(usize, PartSeq)]> {
        self.terminal.get(b).map(|v| v.as_slice())
    }

    pub fn class(&self) -> Option<&ClassSpec> {
        self.class.as_ref()
    }

    /// Strong connectivity of the recurrent sub-digraph (Kosaraju).
    pub fn is_strongly_connected(&self) -> bool {
        self.sccs().len() == 1
    }

    fn sccs(&self) -> Vec<Vec<usize>> {
        let n = self.recurrent.len();
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            // iterative post-order
            let mut stack = vec![(root, 0usize)];
            seen[root] = true;
            while let Some((v, i)) = stack.pop() {
                if i < self.arcs[v].len() {
                    stack.push((v, i + 1));
                    let w = self.arcs[v][i];
                    if !seen[w] {
                        seen[w] = true;
                        stack.push((w, 0));
                    }
                } else {
                    order.push(v);
                }
            }
        }
        let mut rev = vec![Vec::new(); n];
        for (u, outs) in self.arcs.iter().enumerate() {
            for &v in outs {
                rev[v].push(u);
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for &root in order.iter().rev() {
            if comp[root] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![root];
            comp[root] = id;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &u in &rev[v] {
                    if comp[u] == usize::MAX {
                        comp[u] = id;
                        members.push(u);
                        stack.push(u);
                    }
                }
            }
            comps.push(members);
        }
        comps
    }

    /// gcd of the lengths of all directed cycles of the recurrent
    /// sub-digraph: per SCC, BFS levels are assigned and every internal arc
    /// `u -> v` contributes `|level(u) + 1 - level(v)|`. Returns 0 for an
    /// acyclic digraph.
    pub fn cycle_gcd(&self) -> u64 {
        if self.recurrent.is_empty() {
            return 0;
        }
        let mut g: u64 = 0;
        for members in self.sccs() {
            let mut level: BTreeMap<usize, i64> = BTreeMap::new();
            let inside: std::collections::BTreeSet<usize> = members.iter().copied().collect();
            let root = members[0];
            level.insert(root, 0);
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let lu = level[&u];
                for &v in &self.arcs[u] {
                    if !inside.contains(&v) {
                        continue;
                    }
                    if let Some(&lv) = level.get(&v) {
                        g = num_integer::gcd(g, (lu + 1 - lv).unsigned_abs());
                    } else {
                        level.insert(v, lu + 1);
                        queue.push_back(v);
                    }
                }
            }
        }
        g
    }

    /// Bounded search for walk families establishing the per-coordinate gcd
    /// condition used by the asymptotic theory. Walks up to length `l_max`
    /// are enumerated (capped); the result is an explicit witness for every
    /// coordinate or `Unknown` — the search never claims failure.
    pub fn check_condition2(&self, l_max: usize) -> Condition2Outcome {
        const WALK_CAP: usize = 2_000_000;
        let r = self.group.rank();
        let sizes: Vec<Vec<u64>> = self
            .recurrent
            .iter()
            .map(|v| v.size_int(&self.group))
            .collect();
        let mut witnesses = Vec::with_capacity(r);
        for t in 0..r {
            let mut found: Option<CoordWitness> = None;
            let mut enumerated = 0usize;
            'search: for len in 2..=l_max {
                for u in 0..self.recurrent.len() {
                    // walks u -> ... -> v of `len` arcs, keyed by (v, fixed
                    // non-t coordinate profile of the intermediate vertices)
                    let mut groups: BTreeMap<(usize, Vec<u64>), std::collections::BTreeSet<u64>> =
                        BTreeMap::new();
                    let mut stack: Vec<(usize, usize, u64, Vec<u64>)> =
                        vec![(u, 0, 0, Vec::new())];
                    while let Some((vertex, depth, sum, profile)) = stack.pop() {
                        if depth == len {
                            groups.entry((vertex, profile)).or_default().insert(sum);
                            continue;
                        }
                        for &next in &self.arcs[vertex] {
                            enumerated += 1;
                            if enumerated > WALK_CAP {
                                break 'search;
                            }
                            if depth + 1 == len {
                                // `next` is the endpoint, not an intermediate
                                stack.push((next, depth + 1, sum, profile.clone()));
                            } else {
                                let mut p = profile.clone();
                                for (i, &c) in sizes[next].iter().enumerate() {
                                    if i != t {
                                        p.push(c);
                                    }
                                }
                                stack.push((next, depth + 1, sum + sizes[next][t], p));
                            }
                        }
                    }
                    for ((v, _profile), sums) in &groups {
                        if sums.len() < 2 {
                            continue;
                        }
                        let sorted: Vec<u64> = sums.iter().copied().collect();
                        let mut g = 0u64;
                        for w in sorted.windows(2) {
                            g = num_integer::gcd(g, w[1] - w[0]);
                        }
                        if g == 1 {
                            found = Some(CoordWitness {
                                coord: t,
                                from: u,
                                to: *v,
                                walk_len: len,
                                sums: sorted,
                                walk_count: sums.len(),
                            });
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(w) => witnesses.push(w),
                None => return Condition2Outcome::Unknown,
            }
        }
        Condition2Outcome::Witness(witnesses)
    }

    /// Measures the regularity constants (H, J, K): start-arc count, uniform
    /// terminal degree toward stubs of length `b`, and uniform recurrent
    /// outdegree. Errors when the digraph is not regular in that sense.
    pub fn measured_constants(&self, b: usize) -> Result<(u64, u64, u64)> {
        let h = self.start.len() as u64;
        let k = self.arcs[0].len();
        if self.arcs.iter().any(|a| a.len() != k) {
            return Err(Error::HypothesisViolated(
                "recurrent outdegrees are not uniform".into(),
            ));
        }
        let slot = self
            .terminal
            .get(b)
            .ok_or(Error::NoTerminal { b })?;
        let mut per_vertex = vec![0u64; self.recurrent.len()];
        for (u, _) in slot {
            per_vertex[*u] += 1;
        }
        let j = per_vertex[0];
        if per_vertex.iter().any(|&c| c != j) {
            return Err(Error::HypothesisViolated(
                "terminal degrees are not uniform".into(),
            ));
        }
        if j == 0 {
            return Err(Error::NoTerminal { b });
        }
        Ok((h, j, k as u64))
    }

    /// Serializes to the digraph wire format.
    pub fn to_json(&self) -> Value {
        let recurrent: Vec<Value> = self
            .recurrent
            .iter()
            .map(|v| json!(v.parts().iter().map(|p| p.coords()).collect::<Vec<_>>()))
            .collect();
        let arcs: Vec<[usize; 2]> = self
            .arcs
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| [u, v]))
            .collect();
        let mut terminal = serde_json::Map::new();
        for (b, slot) in self.terminal.iter().enumerate() {
            let entries: Vec<Value> = slot
                .iter()
                .map(|(u, t)| {
                    json!([u, t.parts().iter().map(|p| p.coords()).collect::<Vec<_>>()])
                })
                .collect();
            terminal.insert(b.to_string(), Value::Array(entries));
        }
        json!({
            "moduli": self.group.moduli(),
            "span": self.span,
            "recurrent": recurrent,
            "start": self.start,
            "arcs": arcs,
            "terminal": terminal,
        })
    }

    /// Loads a custom digraph, checking the schema and the structural
    /// digraph conditions (arcs exist from the start and into the terminals;
    /// arcs among start/terminal vertices are unrepresentable by schema).
    /// Custom digraphs carry no membership predicate.
    pub fn from_json(value: &Value) -> Result<Self> {
        fn field<'v>(value: &'v Value, name: &str) -> Result<&'v Value> {
            value
                .get(name)
                .ok_or_else(|| Error::Parse(format!("missing \"{name}\"")))
        }
        let moduli: Vec<u64> = serde_json::from_value(field(value, "moduli")?.clone())
            .map_err(|e| Error::Parse(format!("bad \"moduli\": {e}")))?;
        let group = Group::new(&moduli)?;
        let span: usize = serde_json::from_value(field(value, "span")?.clone())
            .map_err(|e| Error::Parse(format!("bad \"span\": {e}")))?;
        if span == 0 {
            return Err(Error::Parse("span must be >= 1".into()));
        }

        let parse_seq = |v: &Value, expected_len: Option<usize>| -> Result<PartSeq> {
            let raw: Vec<Vec<u64>> = serde_json::from_value(v.clone())
                .map_err(|e| Error::Parse(format!("bad part sequence: {e}")))?;
            if let Some(n) = expected_len {
                if raw.len() != n {
                    return Err(Error::Parse(format!(
                        "expected {n} parts, found {}",
                        raw.len()
                    )));
                }
            }
            let parts = raw
                .iter()
                .map(|coords| {
                    group
                        .element_from(coords)
                        .map_err(|e| Error::Parse(format!("bad part: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(PartSeq::new(parts))
        };

        let recurrent: Vec<PartSeq> = field(value, "recurrent")?
            .as_array()
            .ok_or_else(|| Error::Parse("\"recurrent\" must be an array".into()))?
            .iter()
            .map(|v| parse_seq(v, Some(span)))
            .collect::<Result<_>>()?;
        if recurrent.is_empty() {
            return Err(Error::InvalidDigraph("no recurrent vertices".into()));
        }
        let n = recurrent.len();

        let start: Vec<usize> = serde_json::from_value(field(value, "start")?.clone())
            .map_err(|e| Error::Parse(format!("bad \"start\": {e}")))?;
        if start.iter().any(|&i| i >= n) {
            return Err(Error::Parse("start index out of range".into()));
        }
        if start.is_empty() {
            return Err(Error::InvalidDigraph("no start arcs".into()));
        }

        let raw_arcs: Vec<[usize; 2]> = serde_json::from_value(field(value, "arcs")?.clone())
            .map_err(|e| Error::Parse(format!("bad \"arcs\": {e}")))?;
        let mut arcs = vec![Vec::new(); n];
        for [u, v] in raw_arcs {
            if u >= n || v >= n {
                return Err(Error::Parse("arc endpoint out of range".into()));
            }
            arcs[u].push(v);
        }
        for outs in &mut arcs {
            outs.sort_unstable();
            outs.dedup();
        }

        let terminal_obj = field(value, "terminal")?
            .as_object()
            .ok_or_else(|| Error::Parse("\"terminal\" must be an object".into()))?;
        let mut terminal = vec![Vec::new(); span];
        for (key, entries) in terminal_obj {
            let b: usize = key
                .parse()
                .map_err(|_| Error::Parse(format!("bad terminal key {key:?}")))?;
            if b >= span {
                return Err(Error::Parse(format!("terminal key {b} >= span {span}")));
            }
            let entries = entries
                .as_array()
                .ok_or_else(|| Error::Parse("terminal entries must be arrays".into()))?;
            for entry in entries {
                let pair = entry
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Parse("terminal entry must be [vertex, parts]".into()))?;
                let u: usize = serde_json::from_value(pair[0].clone())
                    .map_err(|e| Error::Parse(format!("bad terminal vertex: {e}")))?;
                if u >= n {
                    return Err(Error::Parse("terminal vertex out of range".into()));
                }
                let stub = parse_seq(&pair[1], Some(b))?;
                terminal[b].push((u, stub));
            }
        }
        if terminal.iter().all(|slot| slot.is_empty()) {
            return Err(Error::InvalidDigraph("no terminal arcs".into()));
        }

        Ok(RestrictionDigraph {
            group,
            span,
            recurrent,
            start,
            arcs,
            terminal,
            class: None,
        })
    }
}

/// Every window of `1..=d` consecutive parts has nonzero sum.
pub fn build_mullen(group: &Group, d: usize) -> Result<RestrictionDigraph> {
    RestrictionDigraph::build(group, ClassSpec::mullen(d))
}

/// No repeated part among any `d+1` consecutive parts.
pub fn build_carlitz(
    group: &Group,
    d: usize,
    weak: bool,
    first_d_nonzero: bool,
) -> Result<RestrictionDigraph> {
    RestrictionDigraph::build(group, ClassSpec::carlitz(d, weak, first_d_nonzero))
}

/// The sum of any `d` consecutive parts is nonzero.
pub fn build_window_sum(group: &Group, d: usize, weak: bool) -> Result<RestrictionDigraph> {
    RestrictionDigraph::build(group, ClassSpec::window_sum(d, weak))
}

/// Over `F_q`: the product of any `d` consecutive parts is not 1.
pub fn build_window_product_ne_one(field: &FieldSpec, d: usize) -> Result<RestrictionDigraph> {
    RestrictionDigraph::build(
        field.additive_group(),
        ClassSpec::product_ne_one(field.clone(), d),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: u64) -> Group {
        Group::new(&[k]).unwrap()
    }

    #[test]
    fn mullen_z5_digraph() {
        let g = z(5);
        let d = build_mullen(&g, 2).unwrap();
        assert_eq!(d.span(), 1);
        assert_eq!(d.recurrent().len(), 4);
        for (ui, u) in d.recurrent().iter().enumerate() {
            assert_eq!(d.arcs()[ui].len(), 3, "outdegree at {u:?}");
            for &vi in &d.arcs()[ui] {
                let s = g
                    .add(&u.parts()[0], &d.recurrent()[vi].parts()[0])
                    .unwrap();
                assert!(!g.is_zero(&s));
            }
        }
        assert_eq!(d.start_arcs().len(), 4);
        assert!(d.is_strongly_connected());
        assert_eq!(d.cycle_gcd(), 1);
    }

    #[test]
    fn carlitz_weak_z6_has_30_vertices() {
        let d = build_carlitz(&z(6), 2, true, false).unwrap();
        assert_eq!(d.span(), 2);
        assert_eq!(d.recurrent().len(), 30);
        // measured regularity: H = 30, K = 16, J(b=0) = 1
        let (h, j, k) = d.measured_constants(0).unwrap();
        assert_eq!((h, j, k), (30, 1, 16));
    }

    #[test]
    fn window_sum_z4_matches_reference_matrix() {
        let g = z(4);
        let d = build_window_sum(&g, 3, false).unwrap();
        assert_eq!(d.span(), 2);
        let labels: Vec<Vec<u64>> = d
            .recurrent()
            .iter()
            .map(|v| v.parts().iter().map(|p| p.coords()[0]).collect())
            .collect();
        let expect: Vec<Vec<u64>> = [
            [1, 1], [1, 2], [1, 3], [2, 1], [2, 2], [2, 3], [3, 1], [3, 2], [3, 3],
        ]
        .iter()
        .map(|p| p.to_vec())
        .collect();
        assert_eq!(labels, expect);

        // adjacency transcribed from the reference transfer matrix
        let rows: [[u8; 9]; 9] = [
            [1, 0, 1, 0, 0, 0, 1, 1, 1],
            [0, 0, 0, 1, 1, 1, 1, 1, 0],
            [1, 1, 1, 1, 1, 0, 1, 0, 1],
            [0, 0, 0, 0, 1, 1, 1, 1, 1],
            [0, 1, 1, 1, 1, 1, 1, 1, 0],
            [1, 1, 1, 1, 1, 0, 0, 0, 0],
            [1, 0, 1, 0, 1, 1, 1, 1, 1],
            [0, 1, 1, 1, 1, 1, 0, 0, 0],
            [1, 1, 1, 0, 0, 0, 1, 0, 1],
        ];
        for (u, row) in rows.iter().enumerate() {
            let got: Vec<usize> = d.arcs()[u].clone();
            let expect: Vec<usize> = row
                .iter()
                .enumerate()
                .filter(|(_, &x)| x == 1)
                .map(|(v, _)| v)
                .collect();
            assert_eq!(got, expect, "row {u}");
        }

        // terminal stubs of length 1 per vertex
        let expect_t1: [&[u64]; 9] = [
            &[1, 3],
            &[2, 3],
            &[1, 2, 3],
            &[2, 3],
            &[1, 2, 3],
            &[1, 2],
            &[1, 2, 3],
            &[1, 2],
            &[1, 3],
        ];
        let slot = d.terminal_arcs(1).unwrap();
        for u in 0..9 {
            let got: Vec<u64> = slot
                .iter()
                .filter(|(ui, _)| *ui == u)
                .map(|(_, t)| t.parts()[0].coords()[0])
                .collect();
            assert_eq!(got, expect_t1[u], "terminal stubs of vertex {u}");
        }
        // every vertex reaches the empty stub
        assert_eq!(d.terminal_arcs(0).unwrap().len(), 9);

        assert!(d.is_strongly_connected());
        assert_eq!(d.cycle_gcd(), 1); // loop at (1,1)
    }

    #[test]
    fn degenerate_class_is_rejected() {
        // three pairwise-distinct nonzero parts over Z_3 cannot exist
        assert!(matches!(
            build_carlitz(&z(3), 3, false, false),
            Err(Error::DegenerateClass(_))
        ));
        // the weak variant over Z_3 also exceeds the alphabet: window 4 > 3
        assert!(matches!(
            build_carlitz(&z(3), 3, true, false),
            Err(Error::DegenerateClass(_))
        ));
    }

    #[test]
    fn condition2_witnesses() {
        let d = build_mullen(&z(5), 2).unwrap();
        match d.check_condition2(2) {
            Condition2Outcome::Witness(ws) => {
                assert_eq!(ws.len(), 1);
                let w = &ws[0];
                assert_eq!(w.walk_len, 2);
                let mut g = 0u64;
                for pair in w.sums.windows(2) {
                    g = num_integer::gcd(g, pair[1] - pair[0]);
                }
                assert_eq!(g, 1);
            }
            Condition2Outcome::Unknown => panic!("expected a witness"),
        }
        assert!(matches!(d.check_condition2(1), Condition2Outcome::Unknown));

        for k in [4u64, 5, 6] {
            let d = build_window_sum(&z(k), 3, false).unwrap();
            assert!(
                matches!(d.check_condition2(4), Condition2Outcome::Witness(_)),
                "k = {k}"
            );
        }
    }

    #[test]
    fn cycle_gcd_two_cycle() {
        let js = json!({
            "moduli": [5],
            "span": 1,
            "recurrent": [[[1]], [[2]]],
            "start": [0],
            "arcs": [[0, 1], [1, 0]],
            "terminal": {"0": [[0, []], [1, []]]},
        });
        let d = RestrictionDigraph::from_json(&js).unwrap();
        assert_eq!(d.cycle_gcd(), 2);
        assert!(d.is_strongly_connected());
    }

    #[test]
    fn digraph_json_round_trip() {
        let d = build_mullen(&z(5), 2).unwrap();
        let js = d.to_json();
        let back = RestrictionDigraph::from_json(&js).unwrap();
        assert_eq!(back.to_json(), js);
        assert_eq!(back.recurrent(), d.recurrent());
        assert_eq!(back.arcs(), d.arcs());
    }

    #[test]
    fn digraph_json_validation() {
        let no_terminal = json!({
            "moduli": [5],
            "span": 1,
            "recurrent": [[[1]], [[2]]],
            "start": [0],
            "arcs": [[0, 1], [1, 0]],
            "terminal": {},
        });
        assert!(matches!(
            RestrictionDigraph::from_json(&no_terminal),
            Err(Error::InvalidDigraph(_))
        ));

        let bad_part = json!({
            "moduli": [5],
            "span": 1,
            "recurrent": [[[7]]],
            "start": [0],
            "arcs": [],
            "terminal": {"0": [[0, []]]},
        });
        assert!(matches!(
            RestrictionDigraph::from_json(&bad_part),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn mullen_reading_on_short_windows() {
        // all subsums of length 1..=d are checked, not only length d
        let g = z(5);
        let spec = ClassSpec::mullen(3);
        let p = |vals: &[u64]| -> Vec<GroupElement> {
            vals.iter().map(|&v| g.element_from(&[v]).unwrap()).collect()
        };
        assert!(spec.matches(&g, &p(&[1, 1, 1])));
        assert!(!spec.matches(&g, &p(&[1, 4, 1]))); // middle pair sums to 0
        assert!(!spec.matches(&g, &p(&[1, 2, 2]))); // window of 3 sums to 0
        assert!(spec.matches(&g, &p(&[2]))); // single nonzero part
        assert!(!spec.matches(&g, &p(&[0])));
    }

    #[test]
    fn first_block_rule_is_start_only() {
        let g = z(5);
        let spec = ClassSpec::carlitz(2, true, true);
        let p = |vals: &[u64]| -> Vec<GroupElement> {
            vals.iter().map(|&v| g.element_from(&[v]).unwrap()).collect()
        };
        assert!(spec.matches(&g, &p(&[1, 2, 0, 3])));
        assert!(!spec.matches(&g, &p(&[0, 2, 1, 3])));
        assert!(!spec.matches(&g, &p(&[1, 0, 2, 3])));
        // zero allowed from position d+1 on
        assert!(spec.matches(&g, &p(&[1, 2, 0])));
    }
}
