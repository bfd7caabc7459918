use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;

use super::{DerivationTrace, StrategyError};
use crate::rewrite::{contract_at, find_redexes, RuleKind};
use crate::syntax::{Canonicalizer, Formula, Position};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub kind: RuleKind,
    pub pos: Position,
}

/// The full reduction graph of a formula. Nodes are canonical
/// representatives of α-classes; node 0 is the start. There is one edge per
/// redex occurrence.
#[derive(Debug, Clone)]
pub struct ReductionGraph {
    nodes: Vec<Formula>,
    edges: Vec<GraphEdge>,
    succ: Vec<Vec<usize>>,
    start: Formula,
}

/// Explores every reduction sequence from `f`. Fails once more than `bound`
/// distinct formulas are reachable.
pub fn all_derivations(f: &Formula, bound: usize) -> Result<ReductionGraph, StrategyError> {
    let mut canon = Canonicalizer::new();
    let mut ids: HashMap<Formula, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();

    let root = canon.formula(f);
    ids.insert(root.clone(), 0);
    nodes.push(root);
    succ.push(Vec::new());
    let mut next = 0;
    while next < nodes.len() {
        let cur = nodes[next].clone();
        // Contracting distinct redex occurrences always gives distinct
        // formulas, so this many successors are new or already known.
        if cur.quantifier_count() > bound as u128 {
            return Err(StrategyError::BoundExceeded(bound));
        }
        for r in find_redexes(&cur) {
            let (g, _) = contract_at(&cur, &r.pos).expect("redex taken from the node");
            let g = canon.formula(&g);
            let to = match ids.get(&g) {
                Some(&id) => id,
                None => {
                    let id = nodes.len();
                    if id >= bound {
                        return Err(StrategyError::BoundExceeded(bound));
                    }
                    ids.insert(g.clone(), id);
                    nodes.push(g);
                    succ.push(Vec::new());
                    id
                }
            };
            succ[next].push(edges.len());
            edges.push(GraphEdge {
                from: next,
                to,
                kind: r.rule(),
                pos: r.pos,
            });
        }
        next += 1;
    }
    Ok(ReductionGraph {
        nodes,
        edges,
        succ,
        start: f.clone(),
    })
}

impl ReductionGraph {
    pub fn nodes(&self) -> &[Formula] {
        &self.nodes
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn successors(&self, node: usize) -> impl Iterator<Item = &GraphEdge> {
        self.succ[node].iter().map(|&e| &self.edges[e])
    }

    /// Nodes without successors.
    pub fn normal_forms(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.succ[i].is_empty()).collect()
    }

    /// Kahn's algorithm; `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        for e in &self.edges {
            indeg[e.to] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for &e in &self.succ[i] {
                let t = self.edges[e].to;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Checks that no node reaches itself in one or more steps, by a search
    /// from every node.
    pub fn transitive_closure_irreflexive(&self) -> bool {
        (0..self.nodes.len()).all(|i| {
            let mut seen = HashSet::new();
            let mut stack: Vec<usize> = self.successors(i).map(|e| e.to).collect();
            while let Some(j) = stack.pop() {
                if j == i {
                    return false;
                }
                if seen.insert(j) {
                    stack.extend(self.successors(j).map(|e| e.to));
                }
            }
            true
        })
    }

    /// Length of the shortest path from the start to a normal form.
    pub fn shortest_maximal_path(&self) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.nodes.len()];
        dist[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            if self.succ[i].is_empty() {
                return Some(dist[i]);
            }
            for e in self.successors(i) {
                if dist[e.to] == usize::MAX {
                    dist[e.to] = dist[i] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        None
    }

    /// Length of the longest path from the start; `None` if cyclic.
    pub fn longest_maximal_path(&self) -> Option<usize> {
        let order = self.topological_order()?;
        let mut longest = vec![0usize; self.nodes.len()];
        for &i in order.iter().rev() {
            longest[i] = self.successors(i).map(|e| longest[e.to] + 1).max().unwrap_or(0);
        }
        Some(longest[0])
    }

    /// Number of maximal paths from the start; `None` if cyclic.
    pub fn maximal_path_count(&self) -> Option<BigUint> {
        let order = self.topological_order()?;
        let mut count = vec![BigUint::default(); self.nodes.len()];
        for &i in order.iter().rev() {
            count[i] = if self.succ[i].is_empty() {
                BigUint::from(1u8)
            } else {
                self.successors(i).map(|e| count[e.to].clone()).sum()
            };
        }
        Some(count.swap_remove(0))
    }

    /// The single normal form, if every maximal path ends in the same one.
    pub fn unique_normal_form(&self) -> Option<&Formula> {
        match self.normal_forms()[..] {
            [i] => Some(&self.nodes[i]),
            _ => None,
        }
    }

    /// Up to `limit` maximal derivations, replayed on the original start
    /// formula, in depth-first order.
    pub fn derivations(&self, limit: usize) -> Vec<DerivationTrace> {
        let mut out = Vec::new();
        let mut path: Vec<usize> = Vec::new();
        self.collect_paths(0, &mut path, limit, &mut out);
        out
    }

    fn collect_paths(&self, node: usize, path: &mut Vec<usize>, limit: usize, out: &mut Vec<DerivationTrace>) {
        if out.len() >= limit {
            return;
        }
        if self.succ[node].is_empty() {
            out.push(self.replay_path(path));
            return;
        }
        // Guard against cycles: a path never revisits a node.
        for &e in &self.succ[node] {
            let to = self.edges[e].to;
            if to == 0 || path.iter().any(|&p| self.edges[p].to == to) {
                continue;
            }
            path.push(e);
            self.collect_paths(self.edges[e].to, path, limit, out);
            path.pop();
        }
    }

    fn replay_path(&self, path: &[usize]) -> DerivationTrace {
        let mut trace = DerivationTrace::new(&self.start);
        let mut cur = self.start.clone();
        for &e in path {
            // α-renaming keeps the tree shape, so graph positions are valid in
            // the uncanonicalized formula.
            let (g, r) = contract_at(&cur, &self.edges[e].pos).expect("position valid up to renaming");
            trace.push(vec![r], g.clone());
            cur = g;
        }
        trace
    }
}

/// Searches for a common reduct of `a` and `b` among at most `bound`
/// formulas reachable from each.
pub fn joinable(a: &Formula, b: &Formula, bound: usize) -> Option<Formula> {
    let mut canon = Canonicalizer::new();
    let ra = reachable(&mut canon, a, bound);
    let rb = reachable(&mut canon, b, bound);
    let (small, large) = if ra.len() <= rb.len() { (&ra, &rb) } else { (&rb, &ra) };
    let set: HashSet<&Formula> = large.iter().collect();
    small.iter().find(|f| set.contains(f)).cloned()
}

fn reachable(canon: &mut Canonicalizer, f: &Formula, bound: usize) -> Vec<Formula> {
    let root = canon.formula(f);
    let mut seen: HashSet<Formula> = HashSet::from([root.clone()]);
    let mut order = vec![root];
    let mut next = 0;
    while next < order.len() && order.len() < bound {
        let cur = order[next].clone();
        for r in find_redexes(&cur) {
            let (g, _) = contract_at(&cur, &r.pos).expect("redex taken from the node");
            let g = canon.formula(&g);
            if seen.insert(g.clone()) {
                order.push(g);
            }
        }
        next += 1;
    }
    order
}
