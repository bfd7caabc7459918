//! Finite abstract reduction systems with two step relations →₀ and →₁, and
//! a brute-force check of the well-foundedness criterion for
//!
//! ```text
//! →₂ = →₀* ∘ →₁    →₃ = →₀ ∪ →₁    A = {b : a →₃* b}    →₄ = →₃ restricted to A
//! ```
//!
//! Conditions, for a source `a` and a →₃-normal form `a'` reachable from it:
//!
//! 1. ←₀ restricted to A is well-founded;
//! 2. →₂-derivations from `a` whose last element reaches `a'` by →₀* have
//!    bounded length;
//! 3. every peak `b₁ ←₄ c →₁ b₂` joins as `b₁ →₄* d ←₄* b₂`;
//! 4. every peak `b₁ ←₄ c →₀ b₂` joins as `b₁ →₄* d ←₄⁼ b₂`.
//!
//! Together they imply that ←₄ is well-founded.

mod dense;

pub use dense::{
    exhaustive_sweep, exhaustive_system_count, fuzz_sweep, search_hypothesis_necessity, DenseArs, DenseReport, NecessityWitness,
    SweepSummary,
};

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::rewrite::RuleKind;
use crate::strategy::ReductionGraph;

pub type Node = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rel {
    Zero,
    One,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArsError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("node {0} is not in the carrier")]
    UnknownNode(Node),
    #[error("node {0} has no successor, so it is not in the domain of →₃")]
    NotInDomain(Node),
    #[error("node {0} is not a →₃-normal form")]
    NotNormalForm(Node),
    #[error("node {to} is not reachable from {from}")]
    NotReachable { from: Node, to: Node },
    #[error("conditions 1-4 hold for ({a}, {a_prime}) but ←₄ is not well-founded:\n{system}")]
    TheoremFalsified { system: String, a: Node, a_prime: Node },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FiniteArs {
    size: u32,
    r0: BTreeSet<(Node, Node)>,
    r1: BTreeSet<(Node, Node)>,
}

impl FiniteArs {
    pub fn new(size: u32) -> Self {
        FiniteArs {
            size,
            ..Default::default()
        }
    }

    pub fn with_edges(size: u32, r0: &[(Node, Node)], r1: &[(Node, Node)]) -> Result<Self, ArsError> {
        let mut s = Self::new(size);
        for &(u, v) in r0 {
            s.add(Rel::Zero, u, v)?;
        }
        for &(u, v) in r1 {
            s.add(Rel::One, u, v)?;
        }
        Ok(s)
    }

    pub fn add(&mut self, rel: Rel, u: Node, v: Node) -> Result<(), ArsError> {
        for x in [u, v] {
            if x >= self.size {
                return Err(ArsError::UnknownNode(x));
            }
        }
        match rel {
            Rel::Zero => self.r0.insert((u, v)),
            Rel::One => self.r1.insert((u, v)),
        };
        Ok(())
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn r0(&self) -> &BTreeSet<(Node, Node)> {
        &self.r0
    }

    pub fn r1(&self) -> &BTreeSet<(Node, Node)> {
        &self.r1
    }

    pub fn edge_count(&self) -> usize {
        self.r0.len() + self.r1.len()
    }

    /// Parses the text format: the carrier size `N` on the first line, then
    /// one edge `0 u v` or `1 u v` per line. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ArsError> {
        let mut sys: Option<FiniteArs> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let num = |s: &str| {
                s.parse::<u32>().map_err(|_| ArsError::Parse {
                    line,
                    message: format!("expected a natural number, got `{s}`"),
                })
            };
            match (&mut sys, fields.as_slice()) {
                (None, [n]) => sys = Some(FiniteArs::new(num(n)?)),
                (None, _) => {
                    return Err(ArsError::Parse {
                        line,
                        message: "expected the carrier size".into(),
                    })
                }
                (Some(s), [r, u, v]) => {
                    let rel = match *r {
                        "0" => Rel::Zero,
                        "1" => Rel::One,
                        _ => {
                            return Err(ArsError::Parse {
                                line,
                                message: format!("relation must be 0 or 1, got `{r}`"),
                            })
                        }
                    };
                    s.add(rel, num(u)?, num(v)?).map_err(|e| ArsError::Parse {
                        line,
                        message: e.to_string(),
                    })?;
                }
                (Some(_), _) => {
                    return Err(ArsError::Parse {
                        line,
                        message: "expected `0 u v` or `1 u v`".into(),
                    })
                }
            }
        }
        sys.ok_or(ArsError::Parse {
            line: 0,
            message: "empty input".into(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.size);
        for (u, v) in &self.r0 {
            let _ = writeln!(out, "0 {u} {v}");
        }
        for (u, v) in &self.r1 {
            let _ = writeln!(out, "1 {u} {v}");
        }
        out
    }

    /// Exports a reduction graph: Step0 edges go to →₀, Step1 edges to →₁.
    /// Returns the system, the start node and the normal form reached from
    /// it, if there is exactly one.
    pub fn from_reduction_graph(g: &ReductionGraph) -> (FiniteArs, Node, Option<Node>) {
        let mut s = FiniteArs::new(g.node_count() as u32);
        for e in g.edges() {
            let rel = match e.kind {
                RuleKind::Step0 => Rel::Zero,
                RuleKind::Step1 => Rel::One,
            };
            s.add(rel, e.from as Node, e.to as Node).expect("graph nodes are in range");
        }
        let nf = match g.normal_forms()[..] {
            [i] => Some(i as Node),
            _ => None,
        };
        (s, 0, nf)
    }

    fn adjacency(&self) -> Adjacency {
        let n = self.size as usize;
        let mut adj = Adjacency {
            r0: vec![Vec::new(); n],
            r1: vec![Vec::new(); n],
            r3: vec![Vec::new(); n],
        };
        for &(u, v) in &self.r0 {
            adj.r0[u as usize].push(v);
            adj.r3[u as usize].push(v);
        }
        for &(u, v) in &self.r1 {
            adj.r1[u as usize].push(v);
            if !self.r0.contains(&(u, v)) {
                adj.r3[u as usize].push(v);
            }
        }
        adj
    }
}

impl fmt::Display for FiniteArs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

struct Adjacency {
    r0: Vec<Vec<Node>>,
    r1: Vec<Vec<Node>>,
    r3: Vec<Vec<Node>>,
}

fn closure_from(succ: &[Vec<Node>], start: Node) -> BTreeSet<Node> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in &succ[u as usize] {
            if seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    seen
}

/// The least set containing `a` and closed under →₀ ∪ →₁.
pub fn reachable_set(sys: &FiniteArs, a: Node) -> Result<BTreeSet<Node>, ArsError> {
    if a >= sys.size {
        return Err(ArsError::UnknownNode(a));
    }
    Ok(closure_from(&sys.adjacency().r3, a))
}

/// Finds a cycle of `rel` within `domain`, by depth-first search.
fn find_cycle(succ: &HashMap<Node, Vec<Node>>, domain: &BTreeSet<Node>) -> Option<Vec<Node>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut mark: HashMap<Node, Mark> = HashMap::new();
    for &root in domain {
        if mark.contains_key(&root) {
            continue;
        }
        // (node, next successor index)
        let mut stack: Vec<(Node, usize)> = vec![(root, 0)];
        mark.insert(root, Mark::Open);
        while let Some(&mut (u, ref mut i)) = stack.last_mut() {
            let next = succ
                .get(&u)
                .and_then(|s| s.get(*i))
                .copied();
            *i += 1;
            match next {
                None => {
                    mark.insert(u, Mark::Done);
                    stack.pop();
                }
                Some(v) if !domain.contains(&v) => {}
                Some(v) => match mark.get(&v) {
                    Some(Mark::Open) => {
                        let from = stack.iter().position(|&(w, _)| w == v).expect("open node is on the stack");
                        return Some(stack[from..].iter().map(|&(w, _)| w).collect());
                    }
                    Some(Mark::Done) => {}
                    None => {
                        mark.insert(v, Mark::Open);
                        stack.push((v, 0));
                    }
                },
            }
        }
    }
    None
}

/// Whether the converse of `rel` restricted to `domain` is well-founded,
/// that is, whether there is no infinite `rel`-chain inside `domain`. On a
/// finite domain this holds iff `rel` has no cycle there.
pub fn is_well_founded(rel: &BTreeSet<(Node, Node)>, domain: &BTreeSet<Node>) -> bool {
    let mut succ: HashMap<Node, Vec<Node>> = HashMap::new();
    for &(u, v) in rel {
        if domain.contains(&u) && domain.contains(&v) {
            succ.entry(u).or_default().push(v);
        }
    }
    find_cycle(&succ, domain).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Counterexample {
    /// An →₀-cycle inside A (condition 1).
    Cycle0(Vec<Node>),
    /// An →₂-cycle on a derivation from `a` towards `a'` (condition 2).
    Cycle2(Vec<Node>),
    /// A peak `b1 ←₄ c →₁ b2` without a join (condition 3).
    Peak1 { c: Node, b1: Node, b2: Node },
    /// A peak `b1 ←₄ c →₀ b2` without a join of the required shape (condition 4).
    Peak0 { c: Node, b1: Node, b2: Node },
    /// An →₄-cycle (the conclusion fails).
    Cycle4(Vec<Node>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub cond1: bool,
    pub cond2: bool,
    /// The exact bound `n` of condition 2, when it holds.
    pub bound: Option<usize>,
    pub cond3: bool,
    pub cond4: bool,
    pub conclusion_well_founded: bool,
    /// One witness per failing condition, and one for a failing conclusion.
    pub counterexamples: Vec<Counterexample>,
}

impl TheoremReport {
    pub fn conditions(&self) -> [bool; 4] {
        [self.cond1, self.cond2, self.cond3, self.cond4]
    }

    pub fn all_conditions(&self) -> bool {
        self.conditions().iter().all(|&c| c)
    }

    /// False exactly when the report contradicts the theorem.
    pub fn is_consistent(&self) -> bool {
        !self.all_conditions() || self.conclusion_well_founded
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "holds" } else { "fails" };
        writeln!(f, "condition 1 (←₀ on A well-founded): {}", yn(self.cond1))?;
        match self.bound {
            Some(n) => writeln!(f, "condition 2 (→₂ derivations bounded): holds, n = {n}")?,
            None => writeln!(f, "condition 2 (→₂ derivations bounded): fails")?,
        }
        writeln!(f, "condition 3 (→₁ peaks join): {}", yn(self.cond3))?;
        writeln!(f, "condition 4 (→₀ peaks join): {}", yn(self.cond4))?;
        writeln!(
            f,
            "conclusion (←₄ well-founded): {}",
            if self.conclusion_well_founded { "true" } else { "false" }
        )?;
        for c in &self.counterexamples {
            writeln!(f, "counterexample: {c:?}")?;
        }
        Ok(())
    }
}

/// Evaluates the four conditions and the conclusion for source `a` and
/// normal form `a_prime`.
pub fn check_klop_theorem(sys: &FiniteArs, a: Node, a_prime: Node) -> Result<TheoremReport, ArsError> {
    for x in [a, a_prime] {
        if x >= sys.size {
            return Err(ArsError::UnknownNode(x));
        }
    }
    let adj = sys.adjacency();
    if adj.r3[a as usize].is_empty() {
        return Err(ArsError::NotInDomain(a));
    }
    if !adj.r3[a_prime as usize].is_empty() {
        return Err(ArsError::NotNormalForm(a_prime));
    }
    let reach_a = closure_from(&adj.r3, a);
    if !reach_a.contains(&a_prime) {
        return Err(ArsError::NotReachable { from: a, to: a_prime });
    }
    let n = sys.size as usize;
    let in_a = |x: Node| reach_a.contains(&x);
    let mut counterexamples = Vec::new();

    // Condition 1.
    let succ0: HashMap<Node, Vec<Node>> = reach_a.iter().map(|&u| (u, adj.r0[u as usize].clone())).collect();
    let cycle0 = find_cycle(&succ0, &reach_a);
    if let Some(c) = &cycle0 {
        counterexamples.push(Counterexample::Cycle0(c.clone()));
    }

    // Condition 2. →₂ successors of u: →₁ successors of everything u reaches by →₀*.
    let star0: Vec<BTreeSet<Node>> = (0..n as Node).map(|u| closure_from(&adj.r0, u)).collect();
    let r2: Vec<Vec<Node>> = (0..n)
        .map(|u| {
            let set: BTreeSet<Node> = star0[u].iter().flat_map(|&w| adj.r1[w as usize].iter().copied()).collect();
            set.into_iter().collect()
        })
        .collect();
    let from_a = closure_from(&r2, a);
    let ends: BTreeSet<Node> = (0..n as Node).filter(|&b| star0[b as usize].contains(&a_prime)).collect();
    // Nodes on some →₂-path from a to an end.
    let mut rev2: Vec<Vec<Node>> = vec![Vec::new(); n];
    for (u, vs) in r2.iter().enumerate() {
        for &v in vs {
            rev2[v as usize].push(u as Node);
        }
    }
    let mut to_end: BTreeSet<Node> = BTreeSet::new();
    for &e in &ends {
        to_end.extend(closure_from(&rev2, e));
    }
    let relevant: BTreeSet<Node> = from_a.intersection(&to_end).copied().collect();
    let succ2: HashMap<Node, Vec<Node>> = relevant.iter().map(|&u| (u, r2[u as usize].clone())).collect();
    let bound = match find_cycle(&succ2, &relevant) {
        Some(c) => {
            counterexamples.push(Counterexample::Cycle2(c));
            None
        }
        None => Some(longest_to_end(&r2, &relevant, &ends, a)),
    };

    // Conditions 3 and 4.
    let star3: Vec<BTreeSet<Node>> = (0..n as Node)
        .map(|u| if in_a(u) { closure_from(&adj.r3, u) } else { BTreeSet::new() })
        .collect();
    let mut cond3 = true;
    let mut cond4 = true;
    for &c in &reach_a {
        for &b1 in &adj.r3[c as usize] {
            for &b2 in &adj.r1[c as usize] {
                if cond3 && star3[b1 as usize].is_disjoint(&star3[b2 as usize]) {
                    cond3 = false;
                    counterexamples.push(Counterexample::Peak1 { c, b1, b2 });
                }
            }
            for &b2 in &adj.r0[c as usize] {
                let mut once: BTreeSet<Node> = adj.r3[b2 as usize].iter().copied().collect();
                once.insert(b2);
                if cond4 && star3[b1 as usize].is_disjoint(&once) {
                    cond4 = false;
                    counterexamples.push(Counterexample::Peak0 { c, b1, b2 });
                }
            }
        }
    }

    // Conclusion.
    let succ3: HashMap<Node, Vec<Node>> = reach_a.iter().map(|&u| (u, adj.r3[u as usize].clone())).collect();
    let cycle4 = find_cycle(&succ3, &reach_a);
    if let Some(c) = &cycle4 {
        counterexamples.push(Counterexample::Cycle4(c.clone()));
    }

    Ok(TheoremReport {
        cond1: cycle0.is_none(),
        cond2: bound.is_some(),
        bound,
        cond3,
        cond4,
        conclusion_well_founded: cycle4.is_none(),
        counterexamples,
    })
}

/// Longest →₂-path from `a` to a node of `ends`, inside the acyclic
/// `relevant` set.
fn longest_to_end(r2: &[Vec<Node>], relevant: &BTreeSet<Node>, ends: &BTreeSet<Node>, a: Node) -> usize {
    fn go(
        u: Node,
        r2: &[Vec<Node>],
        relevant: &BTreeSet<Node>,
        ends: &BTreeSet<Node>,
        memo: &mut HashMap<Node, Option<usize>>,
    ) -> Option<usize> {
        if let Some(&m) = memo.get(&u) {
            return m;
        }
        let here = ends.contains(&u).then_some(0);
        let via = r2[u as usize]
            .iter()
            .filter(|v| relevant.contains(v))
            .filter_map(|&v| go(v, r2, relevant, ends, memo).map(|l| l + 1))
            .max();
        let best = here.max(via);
        memo.insert(u, best);
        best
    }
    if !relevant.contains(&a) {
        return 0;
    }
    go(a, r2, relevant, ends, &mut HashMap::new()).unwrap_or(0)
}
