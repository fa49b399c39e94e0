//! Reaction-graph structure: linkage classes, strong linkage classes,
//! terminal classes and absorbing complex sets.
//!
//! All partitions are returned with each block sorted and blocks ordered by
//! their smallest complex index.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use crate::domination::DominationEdge;
use crate::model::ReactionNetwork;
use crate::scc;

/// What an edge of a (possibly domination-expanded) reaction graph stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum EdgeLabel {
    Reaction(usize),
    Domination(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphEdge {
    pub source: usize,
    pub target: usize,
    pub label: EdgeLabel,
}

#[derive(Debug, Clone)]
pub struct ReactionGraph {
    vertices: usize,
    edges: Vec<GraphEdge>,
}

impl ReactionGraph {
    pub fn new(vertices: usize, edges: Vec<GraphEdge>) -> Self {
        assert!(
            edges.iter().all(|e| e.source < vertices && e.target < vertices),
            "edge endpoint out of range"
        );
        ReactionGraph { vertices, edges }
    }

    pub fn of_network(net: &ReactionNetwork) -> Self {
        Self::with_domination(net, &[])
    }

    /// Reaction graph of `net` plus the given domination edges.
    pub fn with_domination(net: &ReactionNetwork, dom: &[DominationEdge]) -> Self {
        let mut edges: Vec<GraphEdge> = net
            .reactions()
            .iter()
            .map(|r| GraphEdge {
                source: r.source,
                target: r.target,
                label: EdgeLabel::Reaction(r.index),
            })
            .collect();
        edges.extend(dom.iter().enumerate().map(|(j, d)| GraphEdge {
            source: d.from,
            target: d.to,
            label: EdgeLabel::Domination(j),
        }));
        ReactionGraph::new(net.complex_count(), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for e in &self.edges {
            adj[e.source].push(e.target);
        }
        adj
    }

    /// Vertices reachable from `start` (including itself).
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    fn from_labels(labels: &[usize]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut remap = std::collections::HashMap::new();
        for (v, &l) in labels.iter().enumerate() {
            let b = *remap.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(v);
        }
        // vertices are visited in increasing order, so blocks are already
        // sorted internally and ordered by their minimum
        let mut block_of = vec![0; labels.len()];
        for (b, block) in blocks.iter().enumerate() {
            for &v in block {
                block_of[v] = b;
            }
        }
        Partition { blocks, block_of }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Weakly connected components.
pub fn linkage_classes(g: &ReactionGraph) -> Partition {
    let mut parent: Vec<usize> = (0..g.vertices).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in &g.edges {
        let (a, b) = (find(&mut parent, e.source), find(&mut parent, e.target));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let labels: Vec<usize> = (0..g.vertices).map(|v| find(&mut parent, v)).collect();
    Partition::from_labels(&labels)
}

/// Strongly connected components.
pub fn strong_linkage_classes(g: &ReactionGraph) -> Partition {
    let (comp, _) = scc::tarjan(&g.adjacency());
    Partition::from_labels(&comp)
}

/// Strong linkage classes with no edge leaving them.
pub fn terminal_slcs(g: &ReactionGraph) -> Vec<Vec<usize>> {
    let slcs = strong_linkage_classes(g);
    let mut terminal = vec![true; slcs.len()];
    for e in &g.edges {
        let (a, b) = (slcs.block_of(e.source), slcs.block_of(e.target));
        if a != b {
            terminal[a] = false;
        }
    }
    slcs.blocks
        .into_iter()
        .zip(terminal)
        .filter_map(|(b, t)| t.then_some(b))
        .collect()
}

/// Union of the terminal strong linkage classes.
pub fn terminal_complexes(g: &ReactionGraph) -> BTreeSet<usize> {
    terminal_slcs(g).into_iter().flatten().collect()
}

/// True iff `y` contains every terminal complex and no edge leaves `y`.
pub fn is_absorbing_set(g: &ReactionGraph, y: &BTreeSet<usize>) -> bool {
    let closed = g
        .edges
        .iter()
        .all(|e| !y.contains(&e.source) || y.contains(&e.target));
    closed && terminal_complexes(g).is_subset(y)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorbingSets {
    pub sets: Vec<BTreeSet<usize>>,
    pub truncated: bool,
}

/// Absorbing sets ordered by size (then lexicographically), truncated at
/// `cap`. The terminal set comes first; the full complex set is appended when
/// truncation would otherwise drop it.
pub fn enumerate_absorbing_sets(g: &ReactionGraph, cap: usize) -> AbsorbingSets {
    let cap = cap.max(1);
    let slcs = strong_linkage_classes(g);
    let nb = slcs.len();
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nb];
    for e in &g.edges {
        let (a, b) = (slcs.block_of(e.source), slcs.block_of(e.target));
        if a != b {
            succ[a].insert(b);
        }
    }
    let seed: BTreeSet<usize> = (0..nb).filter(|&b| succ[b].is_empty()).collect();
    let to_complexes = |blocks: &BTreeSet<usize>| -> Vec<usize> {
        let mut v: Vec<usize> = blocks.iter().flat_map(|&b| slcs.blocks[b].iter().copied()).collect();
        v.sort_unstable();
        v
    };

    // Every closed block set is reached from the sinks by adding, one at a
    // time, a block whose successors are all present.
    let mut heap = BinaryHeap::new();
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::new();
    heap.push(Reverse((to_complexes(&seed).len(), to_complexes(&seed), seed.clone())));
    seen.insert(seed);
    let mut sets = Vec::new();
    let mut truncated = false;
    while let Some(Reverse((_, complexes, blocks))) = heap.pop() {
        if sets.len() == cap {
            truncated = true;
            break;
        }
        sets.push(complexes.into_iter().collect::<BTreeSet<usize>>());
        for (b, out) in succ.iter().enumerate() {
            if blocks.contains(&b) || !out.is_subset(&blocks) {
                continue;
            }
            let mut next = blocks.clone();
            next.insert(b);
            if seen.insert(next.clone()) {
                let c = to_complexes(&next);
                heap.push(Reverse((c.len(), c, next)));
            }
        }
    }
    let all: BTreeSet<usize> = (0..g.vertices).collect();
    if truncated && !sets.contains(&all) {
        sets.push(all);
    }
    AbsorbingSets { sets, truncated }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ReactionNetwork;

    fn net(species: &[&str], reactions: &[(Vec<i64>, Vec<i64>)]) -> ReactionNetwork {
        ReactionNetwork::new(species, reactions).unwrap()
    }

    fn conserved_pair() -> ReactionNetwork {
        net(
            &["X1", "X2"],
            &[
                (vec![1, 1], vec![0, 2]),
                (vec![0, 2], vec![1, 1]),
                (vec![0, 1], vec![1, 0]),
            ],
        )
    }

    fn growth_loop() -> ReactionNetwork {
        net(
            &["X1", "X2"],
            &[(vec![1, 0], vec![0, 2]), (vec![0, 1], vec![2, 0])],
        )
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn example_2_1_classes() {
        let g = ReactionGraph::of_network(&conserved_pair());
        assert_eq!(linkage_classes(&g).blocks(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(strong_linkage_classes(&g).blocks(), &[vec![0, 1], vec![2], vec![3]]);
        assert_eq!(terminal_slcs(&g), vec![vec![0, 1], vec![3]]);
    }

    #[test]
    fn example_2_3_single_linkage_class() {
        let n = net(
            &["X1", "X2"],
            &[
                (vec![1, 1], vec![1, 0]),
                (vec![1, 0], vec![0, 1]),
                (vec![0, 1], vec![1, 0]),
            ],
        );
        let g = ReactionGraph::of_network(&n);
        assert_eq!(linkage_classes(&g).blocks(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn edgeless_graph_gives_singletons() {
        let g = ReactionGraph::new(3, vec![]);
        assert_eq!(linkage_classes(&g).len(), 3);
        assert_eq!(enumerate_absorbing_sets(&g, 10).sets, vec![set(&[0, 1, 2])]);
    }

    #[test]
    fn example_2_2_structure() {
        let n = growth_loop();
        let g = ReactionGraph::of_network(&n);
        assert_eq!(strong_linkage_classes(&g).len(), 4);
        assert_eq!(terminal_slcs(&g), vec![vec![1], vec![3]]);
        assert!(is_absorbing_set(&g, &set(&[0, 1, 3])));
        assert!(is_absorbing_set(&g, &set(&[0, 1, 2, 3])));
        assert!(!is_absorbing_set(&g, &set(&[1])));
        let all = enumerate_absorbing_sets(&g, 100);
        assert!(!all.truncated);
        assert_eq!(
            all.sets,
            vec![set(&[1, 3]), set(&[0, 1, 3]), set(&[1, 2, 3]), set(&[0, 1, 2, 3])]
        );
        let capped = enumerate_absorbing_sets(&g, 1);
        assert!(capped.truncated);
        assert_eq!(capped.sets, vec![set(&[1, 3]), set(&[0, 1, 2, 3])]);
    }

    #[test]
    fn absorbing_enumeration_matches_brute_force() {
        // 2X1 -> X2+X3 -> 2X3 <-> 2X2, plus a side chain X1 -> X2
        let n = net(
            &["X1", "X2", "X3"],
            &[
                (vec![2, 0, 0], vec![0, 1, 1]),
                (vec![0, 1, 1], vec![0, 0, 2]),
                (vec![0, 0, 2], vec![0, 2, 0]),
                (vec![0, 2, 0], vec![0, 0, 2]),
                (vec![1, 0, 0], vec![0, 1, 0]),
            ],
        );
        let g = ReactionGraph::of_network(&n);
        let nv = g.vertex_count();
        let mut brute: Vec<BTreeSet<usize>> = (0u32..1 << nv)
            .map(|mask| (0..nv).filter(|&i| mask >> i & 1 == 1).collect::<BTreeSet<_>>())
            .filter(|s| is_absorbing_set(&g, s))
            .collect();
        brute.sort_by(|a, b| (a.len(), a.iter().collect::<Vec<_>>()).cmp(&(b.len(), b.iter().collect())));
        assert_eq!(enumerate_absorbing_sets(&g, 1000).sets, brute);
        assert!(brute.contains(&set(&[1, 2, 3, 5])));
        assert!(!brute.contains(&set(&[1, 2, 3])));
    }
}
