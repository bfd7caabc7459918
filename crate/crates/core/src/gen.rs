//! Seeded random formulas for fuzzing.
//!
//! The vocabulary is fixed: formula variables `A/0`, `B/1`; predicates
//! `q/0`, `p/1`, `r/2`; functions `c/0`, `f/1`, `g/2`; bound variables drawn
//! from `x y z u v w` and free variables from `a b`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exec::Exec;
use crate::syntax::{Connective, FmlVar, Formula, IndVar, Quantifier, Term};

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    /// Upper bound on the tree size (formula and term nodes).
    pub max_size: usize,
    pub max_quantifiers: usize,
    pub max_depth: usize,
    pub quantifier_prob: f64,
    pub vacuous_prob: f64,
    pub not_prob: f64,
    pub eps_prob: f64,
    /// Relative weights of `& | -> <->`.
    pub connective_weights: [u32; 4],
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_size: 12,
            max_quantifiers: 8,
            max_depth: 8,
            quantifier_prob: 0.4,
            vacuous_prob: 0.2,
            not_prob: 0.15,
            eps_prob: 0.1,
            connective_weights: [3, 3, 2, 1],
        }
    }
}

const BOUND: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
const FREE: [&str; 2] = ["a", "b"];

struct Gen<'a, R: Rng> {
    cfg: &'a GenConfig,
    rng: &'a mut R,
    quantifiers_left: usize,
}

/// A random formula of size at most `cfg.max_size`.
pub fn generate_formula<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Formula {
    let budget = cfg.max_size.max(1);
    let mut g = Gen {
        cfg,
        rng,
        quantifiers_left: cfg.max_quantifiers,
    };
    g.formula(budget, cfg.max_depth, &mut Vec::new())
}

/// The `index`-th formula of the corpus for `seed`. Each index has its own
/// ChaCha8 stream, so corpora can be generated in any order.
pub fn corpus_formula(seed: u64, index: u64, cfg: &GenConfig) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    generate_formula(&mut rng, cfg)
}

pub fn corpus(seed: u64, count: usize, cfg: &GenConfig, exec: Exec) -> Vec<Formula> {
    exec.map_range(0..count as u64, |i| corpus_formula(seed, i, cfg))
}

impl<R: Rng> Gen<'_, R> {
    fn formula(&mut self, budget: usize, depth: usize, scope: &mut Vec<IndVar>) -> Formula {
        if budget <= 1 || depth == 0 {
            return self.atom(budget, scope);
        }
        let roll: f64 = self.rng.gen();
        if self.quantifiers_left > 0 && budget >= 3 && roll < self.cfg.quantifier_prob {
            self.quantifiers_left -= 1;
            let q = if self.rng.gen_bool(0.5) {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            let (x, body) = self.binder_and_body(budget - 1, depth - 1, scope);
            return Formula::quant(q, x, body);
        }
        if roll < self.cfg.quantifier_prob + self.cfg.not_prob {
            return Formula::not(self.formula(budget - 1, depth - 1, scope));
        }
        if budget >= 3 && self.rng.gen_bool(0.6) {
            let left = self.rng.gen_range(1..=budget - 2);
            let l = self.formula(left, depth - 1, scope);
            let r = self.formula(budget - 1 - left, depth - 1, scope);
            return Formula::bin(self.connective(), l, r);
        }
        self.atom(budget, scope)
    }

    fn binder_and_body(&mut self, budget: usize, depth: usize, scope: &mut Vec<IndVar>) -> (IndVar, Formula) {
        if self.rng.gen_bool(self.cfg.vacuous_prob) {
            let body = self.formula(budget, depth, scope);
            let unused: Vec<&str> = BOUND
                .iter()
                .copied()
                .filter(|n| !body.has_free(&IndVar::new(n)))
                .collect();
            if unused.is_empty() {
                return (IndVar::with_index("x", 1), body);
            }
            let name = unused[self.rng.gen_range(0..unused.len())];
            return (IndVar::new(name), body);
        }
        let fresh: Vec<&str> = BOUND
            .iter()
            .copied()
            .filter(|n| !scope.iter().any(|v| v.name() == *n))
            .collect();
        let name = if fresh.is_empty() {
            BOUND[self.rng.gen_range(0..BOUND.len())]
        } else {
            fresh[self.rng.gen_range(0..fresh.len())]
        };
        let x = IndVar::new(name);
        scope.push(x.clone());
        let left = self.quantifiers_left;
        let mut body = self.formula(budget, depth, scope);
        for _ in 0..8 {
            if body.has_free(&x) {
                break;
            }
            self.quantifiers_left = left;
            body = self.formula(budget, depth, scope);
        }
        scope.pop();
        (x, body)
    }

    fn connective(&mut self) -> Connective {
        let w = self.cfg.connective_weights;
        let total: u32 = w.iter().sum();
        let mut pick = self.rng.gen_range(0..total.max(1));
        for (c, wi) in Connective::ALL.into_iter().zip(w) {
            if pick < wi {
                return c;
            }
            pick -= wi;
        }
        Connective::And
    }

    fn atom(&mut self, budget: usize, scope: &mut Vec<IndVar>) -> Formula {
        // (name, arity, is formula variable)
        const SYMBOLS: [(&str, usize, bool); 5] =
            [("A", 0, true), ("B", 1, true), ("q", 0, false), ("p", 1, false), ("r", 2, false)];
        let mut fitting: Vec<_> = SYMBOLS.iter().filter(|s| s.1 < budget.max(1)).collect();
        // Prefer atoms that can mention the variables in scope.
        if !scope.is_empty() && fitting.iter().any(|s| s.1 > 0) && self.rng.gen_bool(0.8) {
            fitting.retain(|s| s.1 > 0);
        }
        let &&(name, arity, fml) = &fitting[self.rng.gen_range(0..fitting.len())];
        let args = self.split(budget - 1, arity)
            .into_iter()
            .map(|b| self.term(b, scope))
            .collect();
        if fml {
            Formula::fml_app(FmlVar::new(name, arity), args)
        } else {
            Formula::pred(name, args)
        }
    }

    /// Splits `budget` into `parts` shares of at least one.
    fn split(&mut self, budget: usize, parts: usize) -> Vec<usize> {
        if parts == 0 {
            return Vec::new();
        }
        let mut shares = vec![1; parts];
        for _ in 0..budget.saturating_sub(parts) {
            // Leave some budget unused so small arguments stay common.
            if self.rng.gen_bool(0.5) {
                let i = self.rng.gen_range(0..parts);
                shares[i] += 1;
            }
        }
        shares
    }

    fn term(&mut self, budget: usize, scope: &mut Vec<IndVar>) -> Term {
        if budget >= 3 && self.rng.gen_bool(self.cfg.eps_prob) {
            let (x, body) = self.binder_and_body(budget - 1, self.cfg.max_depth / 2, scope);
            return Term::eps(x, body);
        }
        if budget >= 2 && self.rng.gen_bool(0.3) {
            if budget >= 3 && self.rng.gen_bool(0.3) {
                let shares = self.split(budget - 1, 2);
                let args = shares.into_iter().map(|b| self.term(b, scope)).collect();
                return Term::app("g", args);
            }
            let arg = self.term(budget - 1, scope);
            return Term::app("f", vec![arg]);
        }
        let roll: f64 = self.rng.gen();
        if !scope.is_empty() && roll < 0.85 {
            // The innermost binder is the likeliest to be otherwise unused.
            let i = if self.rng.gen_bool(0.5) {
                scope.len() - 1
            } else {
                self.rng.gen_range(0..scope.len())
            };
            Term::var(scope[i].clone())
        } else if roll < 0.95 {
            Term::named(FREE[self.rng.gen_range(0..FREE.len())])
        } else {
            Term::app("c", Vec::new())
        }
    }
}
