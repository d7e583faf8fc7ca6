//! Directed graphs over a fixed node set, and reachability over sequences
//! of them.
//!
//! Edge orientation: the pair `(i, j)` means *j sends to i*. Node `j` is an
//! in-neighbor of `i` and `i` is an out-neighbor of `j`. Every adjacency
//! structure in this crate follows this convention.
//!
//! Self-loops count as neighbors (a node always sees its own value) but are
//! never counted as a hop when measuring path lengths or diameters.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// A directed graph on nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    /// `in_adj[i]` holds every `j` with `(i, j)` an edge.
    in_adj: Vec<BTreeSet<usize>>,
    /// `out_adj[j]` holds every `i` with `(i, j)` an edge.
    out_adj: Vec<BTreeSet<usize>>,
}

impl Digraph {
    /// Builds a digraph from `(receiver, sender)` pairs and adds every
    /// self-loop.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::from_raw_edges(n, edges)?;
        for i in 0..n {
            g.insert(i, i);
        }
        Ok(g)
    }

    /// Builds a digraph from `(receiver, sender)` pairs exactly as given.
    /// Self-loops are *not* added; use [`Digraph::missing_self_loop`] to
    /// check.
    pub fn from_raw_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Digraph {
            n,
            in_adj: vec![BTreeSet::new(); n],
            out_adj: vec![BTreeSet::new(); n],
        };
        for (i, j) in edges {
            g.check_node(i)?;
            g.check_node(j)?;
            g.insert(i, j);
        }
        Ok(g)
    }

    /// Undirected graph: every pair `{a, b}` becomes both `(a, b)` and
    /// `(b, a)`. Self-loops are added.
    pub fn undirected(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n, pairs.into_iter().flat_map(|(a, b)| [(a, b), (b, a)]))
    }

    /// Every ordered pair, including self-loops.
    pub fn complete(n: usize) -> Self {
        Self::new(n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j))))
            .expect("indices are in range")
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0` plus self-loops.
    pub fn directed_cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|j| ((j + 1) % n, j))).expect("indices are in range")
    }

    fn insert(&mut self, i: usize, j: usize) {
        self.in_adj[i].insert(j);
        self.out_adj[j].insert(i);
    }

    fn check_node(&self, node: usize) -> Result<()> {
        if node < self.n {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node, n: self.n })
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Number of edges, self-loops included.
    pub fn edge_count(&self) -> usize {
        self.in_adj.iter().map(BTreeSet::len).sum()
    }

    /// All edges as `(receiver, sender)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.in_adj
            .iter()
            .enumerate()
            .flat_map(|(i, senders)| senders.iter().map(move |&j| (i, j)))
    }

    pub fn has_edge(&self, receiver: usize, sender: usize) -> bool {
        receiver < self.n && self.in_adj[receiver].contains(&sender)
    }

    /// First node lacking its self-loop, if any.
    pub fn missing_self_loop(&self) -> Option<usize> {
        (0..self.n).find(|&i| !self.in_adj[i].contains(&i))
    }

    pub fn require_self_loops(&self) -> Result<()> {
        match self.missing_self_loop() {
            Some(node) => Err(Error::MissingSelfLoop { node }),
            None => Ok(()),
        }
    }

    /// `{ j : (i, j) is an edge }`, the nodes `i` hears from.
    pub fn in_neighbors(&self, i: usize) -> Result<&BTreeSet<usize>> {
        self.check_node(i)?;
        Ok(&self.in_adj[i])
    }

    /// `{ j : (j, i) is an edge }`, the nodes `i` sends to.
    pub fn out_neighbors(&self, i: usize) -> Result<&BTreeSet<usize>> {
        self.check_node(i)?;
        Ok(&self.out_adj[i])
    }

    /// Hop distances from `source` following edge direction, self-loops
    /// ignored. `None` marks unreachable nodes.
    pub fn distances_from(&self, source: usize) -> Result<Vec<Option<usize>>> {
        self.check_node(source)?;
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or_default();
            for &v in &self.out_adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    /// Every ordered pair joined by a directed path. Checked by forward and
    /// backward reachability from node 0.
    pub fn is_strongly_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let reaches_all = |adj: &[BTreeSet<usize>]| {
            let mut seen = vec![false; self.n];
            seen[0] = true;
            let mut stack = vec![0];
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reaches_all(&self.out_adj) && reaches_all(&self.in_adj)
    }

    /// Longest shortest directed path over all ordered pairs.
    pub fn diameter(&self) -> Result<usize> {
        if !self.is_strongly_connected() {
            return Err(Error::NotStronglyConnected);
        }
        let mut diameter = 0;
        for s in 0..self.n {
            for d in self.distances_from(s)? {
                diameter = diameter.max(d.ok_or(Error::NotStronglyConnected)?);
            }
        }
        Ok(diameter)
    }
}

/// Node set unchanged, edge set is the union of all inputs.
pub fn union<'a>(graphs: impl IntoIterator<Item = &'a Digraph>) -> Result<Digraph> {
    let mut graphs = graphs.into_iter();
    let first = graphs
        .next()
        .ok_or_else(|| Error::Config("union of an empty graph sequence".into()))?;
    let mut acc = first.clone();
    for g in graphs {
        if g.n != acc.n {
            return Err(Error::DimensionMismatch {
                expected: acc.n,
                found: g.n,
            });
        }
        for (i, j) in g.edges() {
            acc.insert(i, j);
        }
    }
    Ok(acc)
}

/// A digraph per time instant.
pub trait GraphSequence {
    fn node_count(&self) -> usize;

    /// The digraph active at instant `k`.
    fn graph_at(&self, k: usize) -> Result<&Digraph>;
}

impl GraphSequence for [Digraph] {
    fn node_count(&self) -> usize {
        self.first().map_or(0, Digraph::node_count)
    }

    fn graph_at(&self, k: usize) -> Result<&Digraph> {
        self.get(k).ok_or(Error::HorizonExceeded {
            k,
            horizon: self.len(),
        })
    }
}

impl GraphSequence for Vec<Digraph> {
    fn node_count(&self) -> usize {
        self.as_slice().node_count()
    }

    fn graph_at(&self, k: usize) -> Result<&Digraph> {
        self.as_slice().graph_at(k)
    }
}

/// `R_i(k, 0..=t)`: for each step count, the nodes influenced by node `i`'s
/// state at instant `k`.
pub fn range_sets<S: GraphSequence + ?Sized>(
    schedule: &S,
    i: usize,
    k: usize,
    t: usize,
) -> Result<Vec<BTreeSet<usize>>> {
    let n = schedule.node_count();
    if i >= n {
        return Err(Error::NodeOutOfRange { node: i, n });
    }
    let mut sets = Vec::with_capacity(t + 1);
    sets.push(BTreeSet::from([i]));
    for step in 1..=t {
        let g = schedule.graph_at(k + step - 1)?;
        let next: BTreeSet<usize> = sets[step - 1]
            .iter()
            .flat_map(|&m| g.out_adj[m].iter().copied())
            .collect();
        sets.push(next);
    }
    Ok(sets)
}

/// `R_i(k, t)`, the union of out-neighborhoods of `R_i(k, t-1)` at instant
/// `k + t - 1`, with `R_i(k, 0) = {i}`.
pub fn range_set<S: GraphSequence + ?Sized>(
    schedule: &S,
    i: usize,
    k: usize,
    t: usize,
) -> Result<BTreeSet<usize>> {
    let mut sets = range_sets(schedule, i, k, t)?;
    Ok(sets.pop().expect("range_sets returns t + 1 sets"))
}

/// A route along which node `start`'s value at `start_time` reaches `end`
/// after `length` steps, one edge per instant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimePath {
    pub start: usize,
    pub end: usize,
    pub start_time: usize,
    /// Intermediate nodes; `length - 1` of them when `length > 0`.
    pub hops: Vec<usize>,
    pub length: usize,
}

impl TimePath {
    /// `start, hops..., end`; just `start` for a zero-length path.
    pub fn nodes(&self) -> Vec<usize> {
        let mut nodes = vec![self.start];
        if self.length > 0 {
            nodes.extend(&self.hops);
            nodes.push(self.end);
        }
        nodes
    }

    /// Checks every hop against the digraph of its instant.
    pub fn validate<S: GraphSequence + ?Sized>(&self, schedule: &S) -> Result<()> {
        if self.length == 0 {
            return if self.start == self.end && self.hops.is_empty() {
                Ok(())
            } else {
                Err(Error::Invariant("zero-length time-path must be trivial".into()))
            };
        }
        if self.hops.len() + 1 != self.length {
            return Err(Error::Invariant(format!(
                "time-path of length {} has {} hops",
                self.length,
                self.hops.len()
            )));
        }
        for (step, pair) in self.nodes().windows(2).enumerate() {
            let (from, to) = (pair[0], pair[1]);
            let g = schedule.graph_at(self.start_time + step)?;
            if !g.has_edge(to, from) {
                return Err(Error::Invariant(format!(
                    "edge {from}>{to} absent at instant {}",
                    self.start_time + step
                )));
            }
        }
        Ok(())
    }
}

/// Minimal-length time-path from `i` to `j` starting at instant `k`,
/// searching at most `max_len` steps. Among minimal paths the
/// lexicographically smallest hop sequence is returned.
pub fn find_time_path_within<S: GraphSequence + ?Sized>(
    schedule: &S,
    i: usize,
    j: usize,
    k: usize,
    max_len: usize,
) -> Result<TimePath> {
    let n = schedule.node_count();
    for node in [i, j] {
        if node >= n {
            return Err(Error::NodeOutOfRange { node, n });
        }
    }
    if i == j {
        return Ok(TimePath {
            start: i,
            end: j,
            start_time: k,
            hops: Vec::new(),
            length: 0,
        });
    }

    let mut reach = vec![BTreeSet::from([i])];
    let mut graphs = Vec::new();
    while !reach.last().expect("non-empty").contains(&j) {
        let step = reach.len();
        if step > max_len {
            return Err(Error::NoTimePath {
                from: i,
                to: j,
                start: k,
                searched: max_len,
            });
        }
        let g = match schedule.graph_at(k + step - 1) {
            Ok(g) => g,
            Err(Error::HorizonExceeded { .. }) => {
                return Err(Error::NoTimePath {
                    from: i,
                    to: j,
                    start: k,
                    searched: step - 1,
                })
            }
            Err(e) => return Err(e),
        };
        let next = reach[step - 1]
            .iter()
            .flat_map(|&m| g.out_adj[m].iter().copied())
            .collect();
        reach.push(next);
        graphs.push(g);
    }
    let length = reach.len() - 1;

    // back[t]: nodes in R_i(k, t) that can still deliver to j by step `length`.
    let mut back = vec![BTreeSet::new(); length + 1];
    back[length].insert(j);
    for t in (1..length).rev() {
        let g = graphs[t];
        back[t] = reach[t]
            .iter()
            .copied()
            .filter(|&m| g.out_adj[m].iter().any(|o| back[t + 1].contains(o)))
            .collect();
    }

    let mut hops = Vec::with_capacity(length - 1);
    let mut current = i;
    for t in 1..length {
        let next = graphs[t - 1].out_adj[current]
            .iter()
            .copied()
            .find(|o| back[t].contains(o))
            .ok_or_else(|| Error::Invariant("time-path back-chaining broke".into()))?;
        hops.push(next);
        current = next;
    }

    Ok(TimePath {
        start: i,
        end: j,
        start_time: k,
        hops,
        length,
    })
}

/// [`find_time_path_within`] bounded by `n - 1` steps, the longest a
/// minimal time-path can be when every instant is strongly connected.
pub fn find_time_path<S: GraphSequence + ?Sized>(
    schedule: &S,
    i: usize,
    j: usize,
    k: usize,
) -> Result<TimePath> {
    let bound = schedule.node_count().saturating_sub(1);
    find_time_path_within(schedule, i, j, k, bound)
}
