//! Normalization strategies, derivation traces and reduction graphs.

mod count;
mod graph;
mod serialize;

pub use count::{derivation_length_stats, nested_existentials, outermost_length, LengthRow, OutermostCounter};
pub use graph::{all_derivations, joinable, GraphEdge, ReductionGraph};
pub use serialize::{trace_json, trace_text};

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rewrite::{
    contract, leftmost_innermost, leftmost_outermost, nth_redex, outermost_count, outermost_redexes,
    parallel_step, Redex, RuleKind,
};
use crate::syntax::{allocated_nodes, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    LeftmostInnermost,
    LeftmostOutermost,
    /// Picks a redex uniformly among all current ones. The generator is
    /// ChaCha8 seeded with the given value, so runs are reproducible across
    /// platforms.
    Random(u64),
    /// Contracts all outermost redexes in one step.
    ParallelOutermost,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::LeftmostInnermost => f.write_str("innermost"),
            Strategy::LeftmostOutermost => f.write_str("outermost"),
            Strategy::Random(seed) => write!(f, "random({seed})"),
            Strategy::ParallelOutermost => f.write_str("parallel"),
        }
    }
}

/// Limits on a single normalization. Nodes are counted as constructed, so
/// the limit bounds both time and memory regardless of sharing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fuse {
    pub max_steps: usize,
    pub max_nodes: u64,
}

impl Default for Fuse {
    fn default() -> Self {
        Fuse {
            max_steps: 10_000,
            max_nodes: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// One redex, or several disjoint ones for a parallel step.
    pub redexes: Vec<Redex>,
    pub after: Formula,
}

impl TraceStep {
    /// `Step1` if any contracted redex is non-vacuous.
    pub fn rule(&self) -> RuleKind {
        self.redexes.iter().map(Redex::rule).max().unwrap_or(RuleKind::Step0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTrace {
    pub start: Formula,
    pub steps: Vec<TraceStep>,
    pub final_formula: Formula,
    pub max_eps_depth: u32,
    pub max_eps_count: u128,
}

impl DerivationTrace {
    pub(crate) fn new(start: &Formula) -> Self {
        DerivationTrace {
            start: start.clone(),
            steps: Vec::new(),
            final_formula: start.clone(),
            max_eps_depth: start.eps_nesting_depth(),
            max_eps_count: start.epsilon_count(),
        }
    }

    pub(crate) fn push(&mut self, redexes: Vec<Redex>, after: Formula) {
        self.max_eps_depth = self.max_eps_depth.max(after.eps_nesting_depth());
        self.max_eps_count = self.max_eps_count.max(after.epsilon_count());
        self.final_formula = after.clone();
        self.steps.push(TraceStep { redexes, after });
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// Total number of contracted redexes, counting each redex of a
    /// parallel step separately.
    pub fn redex_count(&self) -> usize {
        self.steps.iter().map(|s| s.redexes.len()).sum()
    }

    /// Replays every step and checks that it produces the recorded formula.
    pub fn replay(&self) -> bool {
        let mut cur = self.start.clone();
        for s in &self.steps {
            let next = if s.redexes.len() == 1 {
                contract(&cur, &s.redexes[0])
            } else {
                parallel_step(&cur, &s.redexes)
            };
            match next {
                Ok(g) if g == s.after => cur = g,
                _ => return false,
            }
        }
        cur == self.final_formula
    }
}

#[derive(Debug, Clone, Error)]
pub enum StrategyError {
    #[error("fuse exceeded after {steps} steps and {nodes} constructed nodes ({strategy})")]
    FuseExceeded {
        strategy: Strategy,
        steps: usize,
        nodes: u64,
        partial: Box<DerivationTrace>,
    },
    #[error("reduction graph has more than {0} nodes")]
    BoundExceeded(usize),
}

pub fn normalize(f: &Formula, s: Strategy) -> Result<DerivationTrace, StrategyError> {
    normalize_with(f, s, Fuse::default())
}

pub fn normalize_with(f: &Formula, s: Strategy, fuse: Fuse) -> Result<DerivationTrace, StrategyError> {
    let mut trace = DerivationTrace::new(f);
    let mut rng = match s {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let base = allocated_nodes();
    let mut cur = f.clone();
    while !cur.is_quantifier_free() {
        let used = allocated_nodes().wrapping_sub(base);
        if trace.steps.len() >= fuse.max_steps || used > fuse.max_nodes {
            return Err(StrategyError::FuseExceeded {
                strategy: s,
                steps: trace.steps.len(),
                nodes: used,
                partial: Box::new(trace),
            });
        }
        let redexes = match s {
            Strategy::LeftmostInnermost => vec![leftmost_innermost(&cur).expect("formula has a quantifier")],
            Strategy::LeftmostOutermost => vec![leftmost_outermost(&cur).expect("formula has a quantifier")],
            Strategy::Random(_) => {
                let rng = rng.as_mut().expect("seeded");
                let k = rng.gen_range(0..cur.quantifier_count());
                vec![nth_redex(&cur, k).expect("index below quantifier count")]
            }
            Strategy::ParallelOutermost => {
                if outermost_count(&cur) > u128::from(fuse.max_nodes.saturating_sub(used)) {
                    return Err(StrategyError::FuseExceeded {
                        strategy: s,
                        steps: trace.steps.len(),
                        nodes: used,
                        partial: Box::new(trace),
                    });
                }
                outermost_redexes(&cur)
            }
        };
        let next = if redexes.len() == 1 {
            contract(&cur, &redexes[0])
        } else {
            parallel_step(&cur, &redexes)
        }
        .expect("redexes were taken from the current formula");
        trace.push(redexes, next.clone());
        cur = next;
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::alpha_eq;
    use crate::textio::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    const ALL: [Strategy; 6] = [
        Strategy::LeftmostInnermost,
        Strategy::LeftmostOutermost,
        Strategy::ParallelOutermost,
        Strategy::Random(1),
        Strategy::Random(2),
        Strategy::Random(3),
    ];

    #[test]
    fn nested_pair() {
        let f = p("exists x. exists y. R(x, y)");
        let inner = normalize(&f, Strategy::LeftmostInnermost).unwrap();
        assert_eq!(inner.step_count(), 2);
        let expected = p("R(eps x. R(x, eps y. R(x, y)), eps y. R(eps x. R(x, eps y. R(x, y)), y))");
        assert!(alpha_eq(&inner.final_formula, &expected));

        let outer = normalize(&f, Strategy::LeftmostOutermost).unwrap();
        assert_eq!(outer.step_count(), 4);
        assert!(alpha_eq(&outer.final_formula, &expected));
        assert!(inner.replay() && outer.replay());
    }

    #[test]
    fn already_normal() {
        let f = p("p(c())");
        for s in ALL {
            let t = normalize(&f, s).unwrap();
            assert_eq!(t.step_count(), 0);
            assert!(t.final_formula.ptr_eq(&f));
        }
    }

    #[test]
    fn all_strategies_agree() {
        let f = p("forall x. (exists y. R(x, y) -> exists z. (S(z) & ~R(z, x)))");
        let finals: Vec<_> = ALL.iter().map(|&s| normalize(&f, s).unwrap()).collect();
        for t in &finals {
            assert!(t.final_formula.is_quantifier_free());
            assert!(alpha_eq(&t.final_formula, &finals[0].final_formula));
            assert!(t.replay());
        }
        assert_eq!(finals[0].step_count(), 3);
    }

    #[test]
    fn random_is_reproducible() {
        let f = p("exists x. (forall y. R(x, y) | exists z. (P(z) & exists w. R(w, x)))");
        let a = normalize(&f, Strategy::Random(7)).unwrap();
        let b = normalize(&f, Strategy::Random(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fuse_reports_partial_trace() {
        let f = nested_existentials(4);
        let fuse = Fuse {
            max_steps: 10,
            max_nodes: 1_000_000,
        };
        match normalize_with(&f, Strategy::LeftmostOutermost, fuse) {
            Err(StrategyError::FuseExceeded { steps, partial, .. }) => {
                assert_eq!(steps, 10);
                assert!(partial.replay());
            }
            other => panic!("expected fuse, got {other:?}"),
        }
    }

    #[test]
    fn parallel_step_counts() {
        let f = p("exists x. P(x) & forall y. Q(y)");
        let t = normalize(&f, Strategy::ParallelOutermost).unwrap();
        assert_eq!(t.step_count(), 1);
        assert_eq!(t.redex_count(), 2);
    }
}
