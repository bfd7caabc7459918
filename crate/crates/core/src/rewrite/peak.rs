//! The nested peak `F1 ← F0 → F2`: an outer redex at the root of `F0` and a
//! redex properly inside its body, closed by `F2 ⇉ F3 → F4 ← F1`.

use thiserror::Error;

use super::{contract, free_occurrences, parallel_step, redex_at, Redex, RedexKind, RewriteError};
use crate::syntax::{alpha_eq, Formula, Position, Quantifier};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeakError {
    #[error("the root of the formula is not a quantifier")]
    RootNotRedex,
    #[error("inner position must lie strictly below the root")]
    InnerAtRoot,
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("the peak does not close: {0}")]
    NotJoined(&'static str),
}

#[derive(Debug, Clone)]
pub struct NestedPeak {
    pub f0: Formula,
    pub outer: Redex,
    pub inner: Redex,
    /// `F0` with the inner redex contracted.
    pub f1: Formula,
    /// `F0` with the outer redex contracted.
    pub f2: Formula,
    /// The copies of the inner redex created in `F2` by the substitution.
    pub f2_to_f3: Vec<Redex>,
    pub f3: Formula,
    /// The residual of the inner redex in `F3`.
    pub f3_to_f4: Redex,
    /// The outer redex of `F1`.
    pub f1_to_f4: Redex,
    pub f4: Formula,
}

/// Builds the closing diagram for the peak at the root of `f0` and the
/// quantifier at `inner`. Every step is checked by actually contracting it.
pub fn nested_peak(f0: &Formula, inner: &Position) -> Result<NestedPeak, PeakError> {
    if inner.is_empty() {
        return Err(PeakError::InnerAtRoot);
    }
    let outer = redex_at(f0, &Position::root()).map_err(|_| PeakError::RootNotRedex)?;
    let inner_redex = redex_at(f0, inner)?;
    let f1 = contract(f0, &inner_redex)?;
    let f2 = contract(f0, &outer)?;

    // Position of the hole relative to the outer body.
    let hole = Position(inner.0[1..].to_vec());
    // Each free occurrence of the outer binder becomes εx. ¬^Q B; the copy of
    // the inner redex sits at the hole inside that ε-body.
    let prefix: &[usize] = match outer.q {
        Quantifier::Exists => &[0],
        Quantifier::Forall => &[0, 0],
    };
    let copies = free_occurrences(&outer.body, &outer.binder)
        .into_iter()
        .map(|p| {
            let mut v = p.0;
            v.extend_from_slice(prefix);
            v.extend_from_slice(&hole.0);
            redex_at(&f2, &Position(v))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let f3 = parallel_step(&f2, &copies)?;

    let f3_to_f4 = redex_at(&f3, &hole)?;
    let f4_from_f3 = contract(&f3, &f3_to_f4)?;
    let f1_to_f4 = redex_at(&f1, &Position::root())?;
    let f4 = contract(&f1, &f1_to_f4)?;
    if !alpha_eq(&f4, &f4_from_f3) {
        return Err(PeakError::NotJoined("F3 and F1 reach different formulas"));
    }
    if outer.kind == RedexKind::Vacuous && !alpha_eq(&f2, &f3) {
        return Err(PeakError::NotJoined("vacuous outer redex must leave F2 = F3"));
    }

    Ok(NestedPeak {
        f0: f0.clone(),
        outer,
        inner: inner_redex,
        f1,
        f2,
        f2_to_f3: copies,
        f3,
        f3_to_f4,
        f1_to_f4,
        f4,
    })
}
