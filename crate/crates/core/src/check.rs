//! Cross-strategy checks on single formulas and on corpora: every strategy
//! terminates, all finals are α-equivalent, innermost needs exactly one step
//! per quantifier, and the full reduction graph (when small enough) is
//! acyclic with a unique normal form reached in no fewer steps.

use serde::Serialize;

use crate::ars::{check_klop_theorem, FiniteArs, TheoremReport};
use crate::exec::Exec;
use crate::strategy::{all_derivations, normalize_with, Fuse, ReductionGraph, Strategy, StrategyError};
use crate::syntax::{alpha_eq, Formula, FormulaKind, Position, Subterm, TermKind};

/// Finals with larger trees are not printed into reports. Sharing keeps
/// them cheap in memory, but their text is exponentially long.
pub const PRINT_LIMIT: u128 = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckConfig {
    /// Seed for the random strategies; five are derived from it.
    pub seed: u64,
    pub fuse: Fuse,
    /// Reduction graphs with more nodes are skipped.
    pub graph_bound: usize,
    /// Also export each graph and run the theorem checker on it.
    pub bridge: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 42,
            fuse: Fuse::default(),
            graph_bound: 5000,
            bridge: false,
        }
    }
}

impl CheckConfig {
    pub fn strategies(&self) -> Vec<Strategy> {
        let mut s = vec![
            Strategy::LeftmostInnermost,
            Strategy::LeftmostOutermost,
            Strategy::ParallelOutermost,
        ];
        s.extend((1..=5u64).map(|i| Strategy::Random(self.seed ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15))));
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    pub strategy: String,
    /// `None` when the fuse blew.
    pub steps: Option<usize>,
    /// Omitted when the fuse blew or the final is too large to print.
    pub final_formula: Option<String>,
    pub eps_depth: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub acyclic: bool,
    pub normal_forms: usize,
    pub shortest: Option<usize>,
    pub longest: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    FuseExceeded { strategy: String },
    InnermostLength { steps: usize, quantifiers: u128 },
    FinalsDiffer { strategy: String },
    GraphCyclic,
    NormalForms { count: usize },
    GraphFinalDiffers,
    ShortestPath { shortest: Option<usize>, quantifiers: u128 },
    Bridge { report: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaReport {
    pub formula: String,
    pub quantifiers: u128,
    pub runs: Vec<RunSummary>,
    /// `None` if the graph exceeded the bound.
    pub graph: Option<GraphSummary>,
    pub bridge: Option<TheoremReport>,
    pub violations: Vec<Violation>,
}

impl FormulaReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_formula(f: &Formula, cfg: &CheckConfig) -> FormulaReport {
    let quantifiers = f.quantifier_count();
    let mut violations = Vec::new();
    let mut runs = Vec::new();
    let mut reference: Option<Formula> = None;
    for s in cfg.strategies() {
        match normalize_with(f, s, cfg.fuse) {
            Ok(t) => {
                if s == Strategy::LeftmostInnermost && t.step_count() as u128 != quantifiers {
                    violations.push(Violation::InnermostLength {
                        steps: t.step_count(),
                        quantifiers,
                    });
                }
                match &reference {
                    None => reference = Some(t.final_formula.clone()),
                    Some(r) if !alpha_eq(r, &t.final_formula) => {
                        violations.push(Violation::FinalsDiffer { strategy: s.to_string() })
                    }
                    Some(_) => {}
                }
                runs.push(RunSummary {
                    strategy: s.to_string(),
                    steps: Some(t.step_count()),
                    final_formula: (t.final_formula.size() <= PRINT_LIMIT).then(|| t.final_formula.to_string()),
                    eps_depth: Some(t.final_formula.eps_nesting_depth()),
                });
            }
            Err(_) => {
                violations.push(Violation::FuseExceeded { strategy: s.to_string() });
                runs.push(RunSummary {
                    strategy: s.to_string(),
                    steps: None,
                    final_formula: None,
                    eps_depth: None,
                });
            }
        }
    }

    let mut graph = None;
    let mut bridge = None;
    match all_derivations(f, cfg.graph_bound) {
        Ok(g) => {
            graph = Some(check_graph(&g, quantifiers, reference.as_ref(), &mut violations));
            if cfg.bridge {
                bridge = bridge_check(&g);
                if let Some(r) = &bridge {
                    if !(r.all_conditions() && r.conclusion_well_founded) {
                        violations.push(Violation::Bridge { report: r.to_string() });
                    }
                }
            }
        }
        Err(StrategyError::BoundExceeded(_)) => {}
        Err(e) => unreachable!("graph exploration has no fuse: {e}"),
    }

    FormulaReport {
        formula: f.to_string(),
        quantifiers,
        runs,
        graph,
        bridge,
        violations,
    }
}

fn check_graph(
    g: &ReductionGraph,
    quantifiers: u128,
    reference: Option<&Formula>,
    violations: &mut Vec<Violation>,
) -> GraphSummary {
    let acyclic = g.is_acyclic() && g.transitive_closure_irreflexive();
    if !acyclic {
        violations.push(Violation::GraphCyclic);
    }
    let nfs = g.normal_forms();
    if nfs.len() != 1 {
        violations.push(Violation::NormalForms { count: nfs.len() });
    }
    if let (Some(nf), Some(r)) = (g.unique_normal_form(), reference) {
        if !alpha_eq(nf, r) {
            violations.push(Violation::GraphFinalDiffers);
        }
    }
    let shortest = g.shortest_maximal_path();
    if shortest.map(|s| s as u128) != Some(quantifiers) {
        violations.push(Violation::ShortestPath { shortest, quantifiers });
    }
    GraphSummary {
        nodes: g.node_count(),
        edges: g.edges().len(),
        acyclic,
        normal_forms: nfs.len(),
        shortest,
        longest: g.longest_maximal_path(),
    }
}

/// Exports the graph and checks the theorem's conditions for the start and
/// its normal form. `None` when the start is already normal (it is then
/// outside the domain of the step relation) or there is no unique normal
/// form.
pub fn bridge_check(g: &ReductionGraph) -> Option<TheoremReport> {
    let (sys, start, nf) = FiniteArs::from_reduction_graph(g);
    if g.normal_forms().contains(&(start as usize)) {
        return None;
    }
    check_klop_theorem(&sys, start, nf?).ok()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub formulas: usize,
    /// Formulas per quantifier count; the last bucket collects the rest.
    pub quantifier_histogram: Vec<usize>,
    pub graphs_checked: usize,
    pub graphs_skipped: usize,
    pub max_graph_nodes: usize,
    /// Per strategy name: total steps over the formulas that finished.
    pub total_steps: Vec<(String, usize)>,
    pub violating_formulas: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub summary: CorpusSummary,
    pub reports: Vec<FormulaReport>,
}

/// Checks every formula. Reports come back in input order whatever `exec`.
pub fn check_corpus(formulas: &[Formula], cfg: &CheckConfig, exec: Exec) -> CorpusReport {
    let reports = exec.map(formulas, |f| check_formula(f, cfg));
    let mut summary = CorpusSummary {
        formulas: reports.len(),
        quantifier_histogram: vec![0; 10],
        total_steps: cfg.strategies().iter().map(|s| (s.to_string(), 0)).collect(),
        ..Default::default()
    };
    for r in &reports {
        let bucket = (r.quantifiers as usize).min(summary.quantifier_histogram.len() - 1);
        summary.quantifier_histogram[bucket] += 1;
        match &r.graph {
            Some(g) => {
                summary.graphs_checked += 1;
                summary.max_graph_nodes = summary.max_graph_nodes.max(g.nodes);
            }
            None => summary.graphs_skipped += 1,
        }
        for (total, run) in summary.total_steps.iter_mut().zip(&r.runs) {
            total.1 += run.steps.unwrap_or(0);
        }
        if !r.ok() {
            summary.violating_formulas += 1;
        }
    }
    CorpusReport { summary, reports }
}

/// Formula nodes of `f`, including those inside ε-terms, with positions.
fn formula_positions(f: &Formula) -> Vec<(Position, Formula)> {
    fn walk_f(f: &Formula, pos: Position, out: &mut Vec<(Position, Formula)>) {
        out.push((pos.clone(), f.clone()));
        match f.kind() {
            FormulaKind::FmlApp(_, args) | FormulaKind::Pred(_, args) => {
                for (i, t) in args.iter().enumerate() {
                    walk_t(t, pos.child(i), out);
                }
            }
            FormulaKind::Not(g) | FormulaKind::Quant(_, _, g) => walk_f(g, pos.child(0), out),
            FormulaKind::Bin(_, l, r) => {
                walk_f(l, pos.child(0), out);
                walk_f(r, pos.child(1), out);
            }
        }
    }
    fn walk_t(t: &crate::syntax::Term, pos: Position, out: &mut Vec<(Position, Formula)>) {
        match t.kind() {
            TermKind::Var(_) => {}
            TermKind::App(_, args) => {
                for (i, a) in args.iter().enumerate() {
                    walk_t(a, pos.child(i), out);
                }
            }
            TermKind::Eps(_, body) => walk_f(body, pos.child(0), out),
        }
    }
    let mut out = Vec::new();
    walk_f(f, Position::root(), &mut out);
    out
}

/// Greedy shrinking: repeatedly replaces some formula node by one of its
/// formula children while `fails` still holds, until no such replacement
/// keeps the failure.
pub fn shrink(f: &Formula, fails: impl Fn(&Formula) -> bool) -> Formula {
    let mut cur = f.clone();
    'outer: loop {
        for (pos, node) in formula_positions(&cur) {
            let children: Vec<Formula> = match node.kind() {
                FormulaKind::Not(g) | FormulaKind::Quant(_, _, g) => vec![g.clone()],
                FormulaKind::Bin(_, l, r) => vec![l.clone(), r.clone()],
                _ => continue,
            };
            for c in children {
                let candidate = crate::syntax::replace_at(&cur, &pos, Subterm::Formula(c)).expect("position taken from the formula");
                if fails(&candidate) {
                    cur = candidate;
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}
