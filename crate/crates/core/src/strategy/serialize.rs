use std::fmt::Write;

use serde_json::{json, Value};

use super::DerivationTrace;

/// One line per contracted redex:
/// `step k: <kind> at <position> quantifier <Q x> → <formula>`.
/// The redexes of a parallel step share `k`.
pub fn trace_text(trace: &DerivationTrace) -> String {
    let mut out = String::new();
    for (i, s) in trace.steps.iter().enumerate() {
        for r in &s.redexes {
            let _ = writeln!(
                out,
                "step {}: {} at {} quantifier {} {} → {}",
                i + 1,
                r.rule().label(),
                r.pos,
                r.q.keyword(),
                r.binder,
                s.after
            );
        }
    }
    out
}

fn count(v: u128) -> Value {
    match u64::try_from(v) {
        Ok(v) => json!(v),
        Err(_) => json!(v.to_string()),
    }
}

pub fn trace_json(trace: &DerivationTrace) -> Value {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .enumerate()
        .flat_map(|(i, s)| {
            s.redexes.iter().map(move |r| {
                json!({
                    "step": i + 1,
                    "pos": r.pos,
                    "kind": r.rule().label(),
                    "q": r.q.keyword(),
                    "binder": r.binder.to_string(),
                    "after": s.after.to_string(),
                })
            })
        })
        .collect();
    let f = &trace.final_formula;
    json!({
        "start": trace.start.to_string(),
        "steps": steps,
        "final": f.to_string(),
        "stats": {
            "steps": trace.step_count(),
            "quantifiers": count(trace.start.quantifier_count()),
            "epsCount": count(f.epsilon_count()),
            "epsDepth": f.eps_nesting_depth(),
        },
    })
}
