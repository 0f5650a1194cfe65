//! Stable-labeling extraction: translate allocator expressions into binary
//! constraints ("which variable assignments avoid U everywhere") and
//! enumerate the satisfying assignments.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::framework::{allocator_to_labeling, instantiate, Allocator, Labeling};
use crate::tri::{Expression, TriValue, Valuation};

/// Model enumeration is exhaustive; 2^20 assignments is the ceiling.
pub const SAT_VAR_BOUND: usize = 20;

/// Classical two-valued logic tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BinaryExpression {
    Constant(bool),
    Variable(String),
    Negation(Box<BinaryExpression>),
    Conjunction(Vec<BinaryExpression>),
    Disjunction(Vec<BinaryExpression>),
}

impl BinaryExpression {
    pub fn var(name: impl Into<String>) -> BinaryExpression {
        BinaryExpression::Variable(name.into())
    }

    pub fn neg(e: BinaryExpression) -> BinaryExpression {
        BinaryExpression::Negation(Box::new(e))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            BinaryExpression::Constant(_) => {}
            BinaryExpression::Variable(v) => {
                out.insert(v.clone());
            }
            BinaryExpression::Negation(child) => child.collect_vars(out),
            BinaryExpression::Conjunction(cs) | BinaryExpression::Disjunction(cs) => {
                for c in cs {
                    c.collect_vars(out);
                }
            }
        }
    }

    pub fn eval(&self, v: &BTreeMap<String, bool>) -> Result<bool> {
        Ok(match self {
            BinaryExpression::Constant(b) => *b,
            BinaryExpression::Variable(name) => *v
                .get(name)
                .ok_or_else(|| Error::Domain(format!("unbound variable `{name}`")))?,
            BinaryExpression::Negation(child) => !child.eval(v)?,
            BinaryExpression::Conjunction(cs) => {
                for c in cs {
                    if !c.eval(v)? {
                        return Ok(false);
                    }
                }
                true
            }
            BinaryExpression::Disjunction(cs) => {
                for c in cs {
                    if c.eval(v)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }
}

/// The condition under which `p` evaluates to `T`.
pub fn s_true(p: &Expression) -> BinaryExpression {
    match p {
        Expression::Constant(TriValue::True) => BinaryExpression::Constant(true),
        Expression::Constant(_) => BinaryExpression::Constant(false),
        Expression::Variable(x) => BinaryExpression::var(x),
        Expression::Negation(child) => s_false(child),
        Expression::Conjunction(cs) => BinaryExpression::Conjunction(cs.iter().map(s_true).collect()),
        Expression::Disjunction(cs) => BinaryExpression::Disjunction(cs.iter().map(s_true).collect()),
    }
}

/// The condition under which `p` evaluates to `F`.
pub fn s_false(p: &Expression) -> BinaryExpression {
    match p {
        Expression::Constant(TriValue::False) => BinaryExpression::Constant(true),
        Expression::Constant(_) => BinaryExpression::Constant(false),
        Expression::Variable(x) => BinaryExpression::neg(BinaryExpression::var(x)),
        Expression::Negation(child) => s_true(child),
        Expression::Conjunction(cs) => {
            BinaryExpression::Disjunction(cs.iter().map(s_false).collect())
        }
        Expression::Disjunction(cs) => {
            BinaryExpression::Conjunction(cs.iter().map(s_false).collect())
        }
    }
}

/// Every argument's expression must be decidable: `/\ (S_T(E(A)) | S_F(E(A)))`.
pub fn stable_condition(allocator: &Allocator) -> BinaryExpression {
    BinaryExpression::Conjunction(
        allocator
            .iter()
            .map(|(_, e)| BinaryExpression::Disjunction(vec![s_true(e), s_false(e)]))
            .collect(),
    )
}

/// All satisfying assignments over the formula's variables, in lexicographic
/// order with `false < true` per position.
pub fn enumerate_models(
    formula: &BinaryExpression,
    var_bound: usize,
) -> Result<Vec<BTreeMap<String, bool>>> {
    let vars: Vec<String> = formula.vars().into_iter().collect();
    if vars.len() > var_bound {
        return Err(Error::Capacity(format!(
            "model enumeration over {} variables exceeds the bound of {var_bound}",
            vars.len()
        )));
    }
    let mut models = Vec::new();
    for bits in 0u64..(1u64 << vars.len()) {
        let assignment: BTreeMap<String, bool> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), bits >> (vars.len() - 1 - i) & 1 == 1))
            .collect();
        if formula.eval(&assignment)? {
            models.push(assignment);
        }
    }
    Ok(models)
}

/// `true -> T`, `false -> F`; `U` is never assigned.
pub fn lift_binary(v: &BTreeMap<String, bool>) -> Valuation {
    Valuation::from_pairs(v.iter().map(|(name, b)| {
        (
            name.clone(),
            if *b { TriValue::True } else { TriValue::False },
        )
    }))
}

/// The stable labelings denoted by a general allocator: instantiate at every
/// model of the stable condition.
pub fn enumerate_stable(allocator: &Allocator, var_bound: usize) -> Result<BTreeSet<Labeling>> {
    let formula = stable_condition(allocator);
    let mut out = BTreeSet::new();
    for model in enumerate_models(&formula, var_bound)? {
        let constant = instantiate(allocator, &lift_binary(&model))?;
        out.insert(allocator_to_labeling(&constant)?);
    }
    Ok(out)
}

/// Structural (Tseitin-style) CNF export in DIMACS format. Each subformula
/// gets a defining variable; the root is asserted by a unit clause.
pub fn to_dimacs(formula: &BinaryExpression) -> String {
    let mut var_ids: BTreeMap<String, usize> = BTreeMap::new();
    for v in formula.vars() {
        let next = var_ids.len() + 1;
        var_ids.insert(v, next);
    }
    let mut next_id = var_ids.len();
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let root = tseitin(formula, &var_ids, &mut next_id, &mut clauses);
    clauses.push(vec![root]);

    let mut out = String::new();
    out.push_str("c stable-condition export\n");
    for (name, id) in &var_ids {
        out.push_str(&format!("c var {id} = {name}\n"));
    }
    out.push_str(&format!("p cnf {next_id} {}\n", clauses.len()));
    for clause in clauses {
        for lit in clause {
            out.push_str(&format!("{lit} "));
        }
        out.push_str("0\n");
    }
    out
}

fn tseitin(
    e: &BinaryExpression,
    var_ids: &BTreeMap<String, usize>,
    next_id: &mut usize,
    clauses: &mut Vec<Vec<i64>>,
) -> i64 {
    match e {
        BinaryExpression::Constant(b) => {
            // A fresh variable pinned to the constant.
            *next_id += 1;
            let id = *next_id as i64;
            clauses.push(vec![if *b { id } else { -id }]);
            id
        }
        BinaryExpression::Variable(name) => var_ids[name] as i64,
        BinaryExpression::Negation(child) => -tseitin(child, var_ids, next_id, clauses),
        BinaryExpression::Conjunction(cs) => {
            let lits: Vec<i64> = cs
                .iter()
                .map(|c| tseitin(c, var_ids, next_id, clauses))
                .collect();
            *next_id += 1;
            let id = *next_id as i64;
            let mut long = vec![id];
            for lit in &lits {
                clauses.push(vec![-id, *lit]);
                long.push(-lit);
            }
            clauses.push(long);
            id
        }
        BinaryExpression::Disjunction(cs) => {
            let lits: Vec<i64> = cs
                .iter()
                .map(|c| tseitin(c, var_ids, next_id, clauses))
                .collect();
            *next_id += 1;
            let id = *next_id as i64;
            let mut long = vec![-id];
            for lit in &lits {
                clauses.push(vec![id, -lit]);
                long.push(*lit);
            }
            clauses.push(long);
            id
        }
    }
}
