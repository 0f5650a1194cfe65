//! Canonicalizing simplification.
//!
//! The canonical form folds constants, removes double negations, flattens
//! nested same-connective lists, sorts and deduplicates siblings, and applies
//! the `U` absorption rules guarded by [`value ranges`](super::ValueRange):
//! `U | p -> U` and `U & p -> p` when `p` ranges over `{F, U}`, and dually
//! `U & p -> U` and `U | p -> p` when `p` ranges over `{T, U}`. Negations are
//! not pushed through connectives and distribution is never applied here.

use crate::tri::{Expression, TriValue};

pub fn simplify(e: &Expression) -> Expression {
    match e {
        Expression::Constant(_) | Expression::Variable(_) => e.clone(),
        Expression::Negation(child) => match simplify(child) {
            Expression::Constant(v) => Expression::Constant(v.negate()),
            Expression::Negation(inner) => *inner,
            other => Expression::neg(other),
        },
        Expression::Conjunction(children) => simplify_nary(children, true),
        Expression::Disjunction(children) => simplify_nary(children, false),
    }
}

fn simplify_nary(children: &[Expression], is_conj: bool) -> Expression {
    let (neutral, absorbing) = if is_conj {
        (TriValue::True, TriValue::False)
    } else {
        (TriValue::False, TriValue::True)
    };

    let mut flat: Vec<Expression> = Vec::new();
    let mut has_undec = false;
    let mut stack: Vec<Expression> = children.iter().rev().map(simplify).collect();
    while let Some(child) = stack.pop() {
        match child {
            Expression::Constant(v) if v == neutral => {}
            Expression::Constant(v) if v == absorbing => {
                return Expression::Constant(absorbing)
            }
            Expression::Constant(_) => has_undec = true,
            Expression::Conjunction(inner) if is_conj => {
                stack.extend(inner.into_iter().rev());
            }
            Expression::Disjunction(inner) if !is_conj => {
                stack.extend(inner.into_iter().rev());
            }
            other => flat.push(other),
        }
    }

    flat.sort_by_cached_key(Expression::to_string);
    flat.dedup();
    absorb(&mut flat, is_conj);

    if has_undec {
        // With U among the siblings, any child U already dominates is
        // redundant: U | c == U for range(c) ⊆ {F, U} and U & c == U for
        // range(c) ⊆ {T, U}.
        flat.retain(|child| {
            let range = child.value_range();
            if is_conj {
                !range.at_most_true_undec()
            } else {
                !range.at_most_false_undec()
            }
        });
        let rest = if is_conj {
            Expression::conj(flat.clone())
        } else {
            Expression::disj(flat.clone())
        };
        let range = rest.value_range();
        // U is neutral when the rest stays on U's side of the order, and
        // absorbs when the rest never reaches the absorbing constant.
        let (u_neutral, u_absorbs) = if is_conj {
            (range.at_most_false_undec(), range.at_most_true_undec())
        } else {
            (range.at_most_true_undec(), range.at_most_false_undec())
        };
        if u_neutral {
            return rest;
        }
        if u_absorbs {
            return Expression::undec();
        }
        flat.push(Expression::undec());
        flat.sort_by_cached_key(Expression::to_string);
    }

    if is_conj {
        Expression::conj(flat)
    } else {
        Expression::disj(flat)
    }
}

/// Absorption: in a disjunction, a conjunction whose factor set includes
/// another sibling's factor set is redundant (`p | p & q == p`), and dually
/// in a conjunction. Siblings are canonical already, so factor sets are
/// compared on serialized form.
fn absorb(flat: &mut Vec<Expression>, is_conj: bool) {
    if flat.len() < 2 {
        return;
    }
    let factor_sets: Vec<std::collections::BTreeSet<String>> = flat
        .iter()
        .map(|child| match child {
            Expression::Disjunction(inner) if is_conj => {
                inner.iter().map(Expression::to_string).collect()
            }
            Expression::Conjunction(inner) if !is_conj => {
                inner.iter().map(Expression::to_string).collect()
            }
            other => std::collections::BTreeSet::from([other.to_string()]),
        })
        .collect();
    let keep: Vec<bool> = factor_sets
        .iter()
        .map(|own| {
            !factor_sets
                .iter()
                .any(|other| other.len() < own.len() && other.is_subset(own))
        })
        .collect();
    let mut index = 0;
    flat.retain(|_| {
        index += 1;
        keep[index - 1]
    });
}
