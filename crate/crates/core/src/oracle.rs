//! Brute-force ground truth for the counting routes.
//!
//! Walks are written with vertex labels in discovery order: the walk starts at
//! `0` and vertex `j` first appears only after `0, …, j − 1`. Each k-tour on an
//! unlabeled rooted tree has exactly one such representative, which is also
//! the one that fixes the plane embedding (children ordered by discovery).
//!
//! Plane trees are encoded by their preorder outdegree sequence, and vertex ids
//! in [`PlaneTree`] and [`DepartureSequences`] are preorder indices. Discovery
//! order and preorder differ as soon as a walk discovers a grandchild after
//! returning to the root, so decomposition relabels between the two.

use std::fmt;

use crate::closed_form::departure_count;
use crate::combinatorics::Natural;
use crate::error::{Error, Result};

/// Default cap on `k·n` for exhaustive walk search.
pub const DEFAULT_MAX_KN: u32 = 8;

/// Rooted plane tree in preorder. Vertex `0` is the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneTree {
    outdegrees: Vec<u32>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl PlaneTree {
    /// Validates a preorder outdegree sequence (a Łukasiewicz word).
    pub fn from_outdegrees(outdegrees: Vec<u32>) -> Result<Self> {
        if outdegrees.is_empty() {
            return Err(Error::InvalidTree("empty outdegree sequence".into()));
        }
        let mut parent = vec![None; outdegrees.len()];
        let mut children = vec![Vec::new(); outdegrees.len()];
        // Stack of (vertex, children still to attach).
        let mut open: Vec<(usize, u32)> = Vec::new();
        for (v, &d) in outdegrees.iter().enumerate() {
            if v > 0 {
                let Some(top) = open.last_mut() else {
                    return Err(Error::InvalidTree(format!(
                        "vertex {v} has no free slot to attach to"
                    )));
                };
                let p = top.0;
                top.1 -= 1;
                if top.1 == 0 {
                    open.pop();
                }
                parent[v] = Some(p);
                children[p].push(v);
            }
            if d > 0 {
                open.push((v, d));
            }
        }
        if !open.is_empty() {
            return Err(Error::InvalidTree(format!(
                "{} child slots left unfilled",
                open.iter().map(|&(_, c)| c).sum::<u32>()
            )));
        }
        Ok(PlaneTree {
            outdegrees,
            parent,
            children,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.outdegrees.len()
    }

    pub fn outdegrees(&self) -> &[u32] {
        &self.outdegrees
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Graph degree: outdegree, plus one for the parent edge off the root.
    pub fn degree(&self, v: usize) -> u32 {
        self.outdegrees[v] + u32::from(v != 0)
    }

    fn is_neighbor(&self, v: usize, w: usize) -> bool {
        self.parent[v] == Some(w) || self.parent[w] == Some(v)
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.outdegrees.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// All rooted plane trees on a fixed number of vertices, as preorder
/// outdegree sequences in lexicographic order.
pub struct PlaneTrees {
    word: Vec<u32>,
    done: bool,
}

impl PlaneTrees {
    fn new(vertex_count: usize) -> Self {
        assert!(vertex_count >= 1, "a plane tree has at least one vertex");
        let mut trees = PlaneTrees {
            word: vec![0; vertex_count],
            done: false,
        };
        trees.fill_minimal(0, 1);
        trees
    }

    /// Open child slots before position `i`.
    fn open_before(&self, i: usize) -> u32 {
        1 + self.word[..i].iter().sum::<u32>() - i as u32
    }

    /// Smallest valid completion of positions `from..`, given `open` free slots.
    fn fill_minimal(&mut self, from: usize, mut open: u32) {
        let last = self.word.len() - 1;
        for i in from..=last {
            let d = if i == last { 0 } else { 2u32.saturating_sub(open) };
            self.word[i] = d;
            open = open + d - 1;
        }
    }

    fn advance(&mut self) {
        let len = self.word.len();
        for i in (0..len.saturating_sub(1)).rev() {
            let open = self.open_before(i);
            // After position i at most `len − 1 − i` slots can still be filled.
            let max_d = (len - 1 - i) as u32 + 1 - open;
            if self.word[i] < max_d {
                self.word[i] += 1;
                let next_open = open + self.word[i] - 1;
                self.fill_minimal(i + 1, next_open);
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for PlaneTrees {
    type Item = PlaneTree;

    fn next(&mut self) -> Option<PlaneTree> {
        if self.done {
            return None;
        }
        let tree = PlaneTree::from_outdegrees(self.word.clone())
            .expect("generator produced an invalid Łukasiewicz word");
        self.advance();
        Some(tree)
    }
}

/// Streams every rooted plane tree on `vertex_count` vertices exactly once.
pub fn enumerate_plane_trees(vertex_count: usize) -> PlaneTrees {
    PlaneTrees::new(vertex_count)
}

/// `∏_v departure_count(deg v, k)`: the number of k-tours on this plane tree.
pub fn tours_on_tree(tree: &PlaneTree, k: u32) -> Natural {
    (0..tree.vertex_count())
        .map(|v| departure_count(tree.degree(v), k))
        .product()
}

/// `c_n^(k)` as a sum over all plane trees with `n + 1` vertices.
pub fn oracle_by_trees(n: u32, k: u32) -> Natural {
    enumerate_plane_trees(n as usize + 1)
        .map(|t| tours_on_tree(&t, k))
        .sum()
}

/// A closed walk `v_1 … v_L` with the return `v_L → v_1` implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk(Vec<usize>);

impl Walk {
    /// Checks that labels start at `0` and appear in first-use order.
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        let mut next = 0;
        for (i, &v) in vertices.iter().enumerate() {
            if v > next {
                return Err(Error::NotATour(format!(
                    "label {v} at position {i} appears before label {next}"
                )));
            }
            if v == next {
                next += 1;
            }
        }
        if vertices.first().is_some_and(|&v| v != 0) {
            return Err(Error::NotATour("walk must start at vertex 0".into()));
        }
        Ok(Walk(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Consecutive steps including the closing one.
    fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let len = self.0.len();
        (0..len).map(move |i| (self.0[i], self.0[(i + 1) % len]))
    }
}

/// One walk per line, labels separated by commas.
impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Depth-first search over canonical k-tours on `n` edges.
struct WalkSearch<'a, F: FnMut(&[usize])> {
    n: usize,
    k: u32,
    path: Vec<usize>,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    /// Remaining parent → v traversals, indexed by v.
    down: Vec<u32>,
    /// Remaining v → parent traversals, indexed by v.
    up: Vec<u32>,
    discovered: usize,
    visit: &'a mut F,
}

impl<F: FnMut(&[usize])> WalkSearch<'_, F> {
    fn finished(&self) -> bool {
        self.discovered == self.n + 1
            && self.up[1..self.discovered].iter().all(|&u| u == 0)
            && self.down[1..self.discovered].iter().all(|&d| d == 0)
    }

    fn step(&mut self, at: usize) {
        if at == 0 && self.finished() {
            // The closing step back to the root is implicit.
            (self.visit)(&self.path[..self.path.len() - 1]);
            return;
        }

        // Existing children, in discovery order.
        for idx in 0..self.children[at].len() {
            let c = self.children[at][idx];
            if self.down[c] == 0 {
                continue;
            }
            self.down[c] -= 1;
            self.path.push(c);
            self.step(c);
            self.path.pop();
            self.down[c] += 1;
        }

        // A new vertex.
        if self.discovered <= self.n {
            let c = self.discovered;
            self.discovered += 1;
            self.parent[c] = at;
            self.children[at].push(c);
            self.down[c] = self.k - 1;
            self.up[c] = self.k;
            self.path.push(c);
            self.step(c);
            self.path.pop();
            self.children[at].pop();
            self.discovered -= 1;
        }

        // Back to the parent. The last departure must leave nothing below.
        if at != 0 && self.up[at] > 0 {
            let last = self.up[at] == 1;
            if last
                && self.children[at]
                    .iter()
                    .any(|&c| self.down[c] > 0 || self.up[c] > 0)
            {
                return;
            }
            let p = self.parent[at];
            self.up[at] -= 1;
            self.path.push(p);
            self.step(p);
            self.path.pop();
            self.up[at] += 1;
        }
    }
}

fn check_bound(n: u32, k: u32, max_kn: u32) -> Result<()> {
    let kn = k.saturating_mul(n);
    if kn > max_kn {
        return Err(Error::SearchTooLarge { kn, bound: max_kn });
    }
    Ok(())
}

/// Calls `visit` with every canonical k-tour on `n` edges (without the
/// closing return to `0`). Fails if `k·n > max_kn`.
pub fn for_each_walk(n: u32, k: u32, max_kn: u32, mut visit: impl FnMut(&[usize])) -> Result<()> {
    assert!(k >= 1, "k must be positive");
    check_bound(n, k, max_kn)?;
    let n = n as usize;
    if n == 0 {
        visit(&[]);
        return Ok(());
    }
    let mut search = WalkSearch {
        n,
        k,
        path: vec![0],
        parent: vec![0; n + 1],
        children: vec![Vec::new(); n + 1],
        down: vec![0; n + 1],
        up: vec![0; n + 1],
        discovered: 1,
        visit: &mut visit,
    };
    search.step(0);
    Ok(())
}

/// Every canonical k-tour on `n` edges.
pub fn enumerate_walks(n: u32, k: u32, max_kn: u32) -> Result<Vec<Walk>> {
    let mut walks = Vec::new();
    for_each_walk(n, k, max_kn, |w| walks.push(Walk(w.to_vec())))?;
    Ok(walks)
}

/// Counts canonical k-tours on `n` edges by exhaustive search, `k·n ≤ max_kn`.
pub fn brute_force_walks_bounded(n: u32, k: u32, max_kn: u32) -> Result<Natural> {
    let mut count = 0u64;
    for_each_walk(n, k, max_kn, |_| count += 1)?;
    Ok(Natural::from(count))
}

/// [`brute_force_walks_bounded`] with [`DEFAULT_MAX_KN`].
pub fn brute_force_walks(n: u32, k: u32) -> Result<Natural> {
    brute_force_walks_bounded(n, k, DEFAULT_MAX_KN)
}

/// For each vertex (preorder id), the neighbors it departs to, in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DepartureSequences(Vec<Vec<usize>>);

impl DepartureSequences {
    pub fn new(seqs: Vec<Vec<usize>>) -> Self {
        DepartureSequences(seqs)
    }

    pub fn sequence(&self, v: usize) -> &[usize] {
        &self.0[v]
    }

    pub fn as_slice(&self) -> &[Vec<usize>] {
        &self.0
    }

    /// Each `S_v` has length `k·deg v`, names every neighbor exactly `k`
    /// times, ends at the parent (non-root `v`), and first mentions children
    /// in plane order.
    pub fn validate(&self, tree: &PlaneTree, k: u32) -> Result<()> {
        if self.0.len() != tree.vertex_count() {
            return Err(Error::InvalidDepartures(format!(
                "{} sequences for {} vertices",
                self.0.len(),
                tree.vertex_count()
            )));
        }
        for (v, seq) in self.0.iter().enumerate() {
            let expected = (k * tree.degree(v)) as usize;
            if seq.len() != expected {
                return Err(Error::InvalidDepartures(format!(
                    "S_{v} has length {}, expected {expected}",
                    seq.len()
                )));
            }
            let neighbors = tree.parent(v).into_iter().chain(tree.children(v).iter().copied());
            for w in neighbors {
                let hits = seq.iter().filter(|&&x| x == w).count();
                if hits != k as usize {
                    return Err(Error::InvalidDepartures(format!(
                        "S_{v} visits {w} {hits} times, expected {k}"
                    )));
                }
            }
            if let Some(&w) = seq.iter().find(|&&w| !tree.is_neighbor(v, w)) {
                return Err(Error::InvalidDepartures(format!("S_{v} names non-neighbor {w}")));
            }
            if let Some(p) = tree.parent(v) {
                if seq.last() != Some(&p) {
                    return Err(Error::InvalidDepartures(format!(
                        "S_{v} does not end at its parent {p}"
                    )));
                }
            }
            let mut firsts = Vec::new();
            for &w in seq {
                if tree.parent(v) != Some(w) && !firsts.contains(&w) {
                    firsts.push(w);
                }
            }
            if firsts != tree.children(v) {
                return Err(Error::InvalidDepartures(format!(
                    "S_{v} first reaches children in order {firsts:?}, tree order is {:?}",
                    tree.children(v)
                )));
            }
        }
        Ok(())
    }
}

/// Splits a k-tour into its plane tree and per-vertex departure sequences.
pub fn decompose_walk(walk: &Walk, k: u32) -> Result<(PlaneTree, DepartureSequences)> {
    let labels = walk.vertices().iter().max().map_or(1, |&m| m + 1);
    let mut parent: Vec<Option<usize>> = vec![None; labels];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); labels];
    // traversals[v] = (parent → v, v → parent)
    let mut traversals = vec![(0u32, 0u32); labels];
    let mut seen = 1;
    for (u, v) in walk.steps() {
        if u == v {
            return Err(Error::NotATour(format!("walk stays at vertex {u}")));
        }
        if v == seen {
            parent[v] = Some(u);
            children[u].push(v);
            seen += 1;
        }
        if parent[v] == Some(u) {
            traversals[v].0 += 1;
        } else if parent[u] == Some(v) {
            traversals[u].1 += 1;
        } else {
            return Err(Error::NotATour(format!(
                "step {u} → {v} leaves the tree discovered so far (induced cycle)"
            )));
        }
    }
    for (v, &(down, up)) in traversals.iter().enumerate().skip(1) {
        let p = parent[v].expect("every non-root label is discovered");
        if down != k || up != k {
            return Err(Error::NotATour(format!(
                "edge {p}–{v} crossed {down} times down and {up} times up, expected {k} each way"
            )));
        }
    }

    let mut preorder = Vec::with_capacity(labels);
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        preorder.push(v);
        stack.extend(children[v].iter().rev());
    }
    let mut position = vec![0; labels];
    for (i, &v) in preorder.iter().enumerate() {
        position[v] = i;
    }
    let tree = PlaneTree::from_outdegrees(preorder.iter().map(|&v| children[v].len() as u32).collect())?;
    let mut seqs = vec![Vec::new(); labels];
    for (u, v) in walk.steps() {
        seqs[position[u]].push(position[v]);
    }
    let seqs = DepartureSequences(seqs);
    seqs.validate(&tree, k)?;
    Ok((tree, seqs))
}

/// Replays the departure sequences from the root until the root's sequence
/// runs out, then relabels vertices in discovery order.
pub fn reconstruct_walk(tree: &PlaneTree, seqs: &DepartureSequences) -> Result<Walk> {
    if seqs.0.len() != tree.vertex_count() {
        return Err(Error::InvalidDepartures(format!(
            "{} sequences for {} vertices",
            seqs.0.len(),
            tree.vertex_count()
        )));
    }
    let mut cursor = vec![0usize; tree.vertex_count()];
    let mut path = vec![0usize];
    let mut v = 0;
    loop {
        let seq = &seqs.0[v];
        let Some(&next) = seq.get(cursor[v]) else {
            if v != 0 {
                return Err(Error::InvalidDepartures(format!(
                    "S_{v} exhausted before the walk returned to the root"
                )));
            }
            break;
        };
        if next >= tree.vertex_count() || !tree.is_neighbor(v, next) {
            return Err(Error::InvalidDepartures(format!(
                "S_{v} names non-neighbor {next}"
            )));
        }
        cursor[v] += 1;
        v = next;
        path.push(v);
    }
    if let Some(w) = (0..tree.vertex_count()).find(|&w| cursor[w] < seqs.0[w].len()) {
        return Err(Error::InvalidDepartures(format!(
            "{} steps of S_{w} left after the walk ended",
            seqs.0[w].len() - cursor[w]
        )));
    }
    path.pop();

    let mut label = vec![usize::MAX; tree.vertex_count()];
    let mut next_label = 0;
    let vertices = path
        .into_iter()
        .map(|p| {
            if label[p] == usize::MAX {
                label[p] = next_label;
                next_label += 1;
            }
            label[p]
        })
        .collect();
    Walk::new(vertices)
}

/// Every valid departure order at one vertex: `k` visits to each neighbor,
/// children first reached in order, parent last.
fn vertex_departure_orders(children: &[usize], parent: Option<usize>, k: u32) -> Vec<Vec<usize>> {
    struct Orders<'a> {
        children: &'a [usize],
        parent: Option<usize>,
        len: usize,
        /// Remaining visits per child, then the parent.
        remaining: Vec<u32>,
        seq: Vec<usize>,
        out: Vec<Vec<usize>>,
    }

    impl Orders<'_> {
        fn go(&mut self, reached: usize) {
            if self.seq.len() == self.len {
                self.out.push(self.seq.clone());
                return;
            }
            let last_slot = self.seq.len() + 1 == self.len;
            if let Some(p) = self.parent {
                let slot = self.children.len();
                // The final visit to the parent must be the final departure.
                if self.remaining[slot] > 1 || (self.remaining[slot] == 1 && last_slot) {
                    self.remaining[slot] -= 1;
                    self.seq.push(p);
                    self.go(reached);
                    self.seq.pop();
                    self.remaining[slot] += 1;
                }
                if last_slot {
                    return;
                }
            }
            // Children already reached, or the next one in plane order.
            let upto = (reached + 1).min(self.children.len());
            for i in 0..upto {
                if self.remaining[i] == 0 {
                    continue;
                }
                self.remaining[i] -= 1;
                self.seq.push(self.children[i]);
                self.go(reached.max(i + 1));
                self.seq.pop();
                self.remaining[i] += 1;
            }
        }
    }

    let degree = children.len() + usize::from(parent.is_some());
    let mut orders = Orders {
        children,
        parent,
        len: k as usize * degree,
        remaining: vec![k; degree],
        seq: Vec::new(),
        out: Vec::new(),
    };
    orders.go(0);
    orders.out
}

/// All departure-sequence assignments on `tree` satisfying the invariants of
/// [`DepartureSequences::validate`], by exhaustive enumeration.
pub fn all_departure_sequences(tree: &PlaneTree, k: u32) -> Vec<DepartureSequences> {
    let per_vertex: Vec<Vec<Vec<usize>>> = (0..tree.vertex_count())
        .map(|v| vertex_departure_orders(tree.children(v), tree.parent(v), k))
        .collect();
    let mut out = vec![Vec::new()];
    for choices in &per_vertex {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for prefix in &out {
            for c in choices {
                let mut p = prefix.clone();
                p.push(c.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(DepartureSequences).collect()
}

/// Exhaustive count of [`all_departure_sequences`].
pub fn count_departure_sequences(tree: &PlaneTree, k: u32) -> Natural {
    (0..tree.vertex_count())
        .map(|v| Natural::from(vertex_departure_orders(tree.children(v), tree.parent(v), k).len()))
        .product()
}
