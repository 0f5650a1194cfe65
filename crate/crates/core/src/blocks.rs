//! Local allocation: solve fragments of a framework ("blocks") whose external
//! attackers are abstracted into variable arguments, validate splitters, and
//! compose solved blocks back into a global allocator.

use indexmap::IndexMap;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::framework::{Allocator, ArgumentationFramework, Network};
use crate::solver::{is_reserved_name, refine, EquationSet, FreshSupply};
use crate::tri::{simplify, Expression};

/// A framework fragment. Actual arguments carry conditions over
/// `actual ∪ variable`; variable arguments stand for external attackers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    actual: Vec<String>,
    variable: Vec<String>,
    /// Present when the block was given as an attack relation; conditions are
    /// derived from it. Generalized blocks carry conditions only.
    attacks: Option<Vec<(String, String)>>,
    conditions: IndexMap<String, Expression>,
}

impl Block {
    pub fn from_attacks(
        actual: Vec<String>,
        variable: Vec<String>,
        attacks: Vec<(String, String)>,
    ) -> Result<Block> {
        check_namespaces(&actual, &variable)?;
        let all: BTreeSet<&str> = actual
            .iter()
            .chain(variable.iter())
            .map(String::as_str)
            .collect();
        let actual_set: BTreeSet<&str> = actual.iter().map(String::as_str).collect();
        for (src, dst) in &attacks {
            if !all.contains(src.as_str()) {
                return Err(Error::Usage(format!(
                    "attack source `{src}` is not an argument of the block"
                )));
            }
            if !actual_set.contains(dst.as_str()) {
                return Err(Error::Usage(format!(
                    "attack target `{dst}` is not an actual argument"
                )));
            }
        }
        let conditions = actual
            .iter()
            .map(|a| {
                let cond = Expression::conj(
                    attacks
                        .iter()
                        .filter(|(_, dst)| dst == a)
                        .map(|(src, _)| Expression::neg(Expression::var(src))),
                );
                (a.clone(), cond)
            })
            .collect();
        Ok(Block {
            actual,
            variable,
            attacks: Some(attacks),
            conditions,
        })
    }

    pub fn from_conditions(
        actual: Vec<String>,
        variable: Vec<String>,
        conditions: IndexMap<String, Expression>,
    ) -> Result<Block> {
        check_namespaces(&actual, &variable)?;
        let all: BTreeSet<&str> = actual
            .iter()
            .chain(variable.iter())
            .map(String::as_str)
            .collect();
        for a in &actual {
            let cond = conditions
                .get(a)
                .ok_or_else(|| Error::Usage(format!("actual argument `{a}` has no condition")))?;
            if let Some(unknown) = cond.vars().iter().find(|v| !all.contains(v.as_str())) {
                return Err(Error::Usage(format!(
                    "condition of `{a}` references `{unknown}`, not an argument of the block"
                )));
            }
        }
        if conditions.len() != actual.len() {
            return Err(Error::Usage(
                "condition for an argument that is not actual".into(),
            ));
        }
        Ok(Block {
            actual,
            variable,
            attacks: None,
            conditions,
        })
    }

    pub fn actual(&self) -> &[String] {
        &self.actual
    }

    pub fn variable(&self) -> &[String] {
        &self.variable
    }

    pub fn attacks(&self) -> Option<&[(String, String)]> {
        self.attacks.as_deref()
    }

    pub fn condition(&self, arg: &str) -> Option<&Expression> {
        self.conditions.get(arg)
    }

    pub fn is_empty(&self) -> bool {
        self.actual.is_empty() && self.variable.is_empty()
    }
}

fn check_namespaces(actual: &[String], variable: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for name in actual.iter().chain(variable.iter()) {
        if is_reserved_name(name) {
            return Err(Error::Namespace(name.clone()));
        }
        if !seen.insert(name.as_str()) {
            return Err(Error::Usage(format!(
                "`{name}` appears twice among the block's arguments"
            )));
        }
    }
    Ok(())
}

/// Checks the splitter conditions against the framework; an empty report
/// means the splitter is valid.
pub fn validate_splitter(f: &ArgumentationFramework, blocks: &[Block]) -> Vec<String> {
    let mut violations = Vec::new();
    let args: BTreeSet<&str> = f.args().iter().map(String::as_str).collect();

    let mut actual_seen: BTreeSet<&str> = BTreeSet::new();
    for (i, block) in blocks.iter().enumerate() {
        for a in block.actual() {
            if !args.contains(a.as_str()) {
                violations.push(format!("block {i}: actual `{a}` is not a framework argument"));
            }
            if !actual_seen.insert(a) {
                violations.push(format!("block {i}: actual `{a}` appears in another block"));
            }
        }
        for v in block.variable() {
            if !args.contains(v.as_str()) {
                violations.push(format!(
                    "block {i}: variable `{v}` is not a framework argument"
                ));
            }
        }
        if block.attacks().is_none() {
            violations.push(format!(
                "block {i}: carries conditions, not attacks; cannot be checked against an attack relation"
            ));
        }
    }
    for a in &args {
        if !actual_seen.contains(a) {
            violations.push(format!("argument `{a}` is actual in no block"));
        }
    }

    let mut attack_seen: BTreeSet<(&str, &str)> = BTreeSet::new();
    for (i, block) in blocks.iter().enumerate() {
        for (src, dst) in block.attacks().unwrap_or(&[]) {
            if !attack_seen.insert((src, dst)) {
                violations.push(format!("block {i}: attack ({src}, {dst}) is shared"));
            }
        }
    }
    let framework_attacks: BTreeSet<(&str, &str)> = f
        .attacks()
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    for missing in framework_attacks.difference(&attack_seen) {
        violations.push(format!(
            "attack ({}, {}) is covered by no block",
            missing.0, missing.1
        ));
    }
    for extra in attack_seen.difference(&framework_attacks) {
        violations.push(format!(
            "attack ({}, {}) does not exist in the framework",
            extra.0, extra.1
        ));
    }
    violations
}

pub fn is_valid_splitter(f: &ArgumentationFramework, blocks: &[Block]) -> bool {
    validate_splitter(f, blocks).is_empty()
}

/// Solves the block's actual arguments, leaving variable arguments as free
/// variables with `E(V) = V`.
pub fn solve_block(block: &Block, supply: &mut FreshSupply) -> Result<Allocator> {
    let mut set = EquationSet::new();
    for a in block.actual() {
        let cond = block.condition(a).expect("conditions cover actual");
        set.insert(a, simplify(cond))?;
    }
    for a in block.actual() {
        set.eliminate(a, supply, true)?;
    }
    let mut pairs: Vec<(String, Expression)> = set
        .iter()
        .map(|(lhs, rhs)| (lhs.to_string(), rhs.clone()))
        .collect();
    for v in block.variable() {
        pairs.push((v.clone(), Expression::var(v)));
    }
    Ok(Allocator::from_pairs(pairs))
}

/// Union of two blocks with disjoint actual sets; variable arguments that
/// become actual disappear from the variable set.
pub fn compose_blocks(b1: &Block, b2: &Block) -> Result<Block> {
    let a1: BTreeSet<&str> = b1.actual().iter().map(String::as_str).collect();
    if let Some(shared) = b2.actual().iter().find(|a| a1.contains(a.as_str())) {
        return Err(Error::Usage(format!(
            "`{shared}` is actual in both blocks"
        )));
    }
    let actual: Vec<String> = b1.actual().iter().chain(b2.actual()).cloned().collect();
    let actual_set: BTreeSet<&str> = actual.iter().map(String::as_str).collect();
    let mut variable: Vec<String> = Vec::new();
    for v in b1.variable().iter().chain(b2.variable()) {
        if !actual_set.contains(v.as_str()) && !variable.contains(v) {
            variable.push(v.clone());
        }
    }
    let attacks = match (b1.attacks(), b2.attacks()) {
        (Some(x), Some(y)) => Some(x.iter().chain(y).cloned().collect()),
        _ => None,
    };
    let conditions: IndexMap<String, Expression> = b1
        .conditions
        .iter()
        .chain(b2.conditions.iter())
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    Ok(Block {
        actual,
        variable,
        attacks,
        conditions,
    })
}

/// Composes two solved blocks: solve the cross-instantiation equations
/// `{V == E_other(V)}` for variable arguments that are actual in the other
/// block, then substitute the solutions into both allocators.
pub fn compose_allocators(
    b1: &Block,
    e1: &Allocator,
    b2: &Block,
    e2: &Allocator,
    supply: &mut FreshSupply,
) -> Result<(Block, Allocator)> {
    let composed = compose_blocks(b1, b2)?;

    for v in b1.variable() {
        if b2.variable().contains(v) && e1.get(v) != e2.get(v) {
            return Err(Error::Usage(format!(
                "shared variable argument `{v}` is allocated differently in the two blocks"
            )));
        }
    }
    let shared_vars: BTreeSet<String> = b1
        .variable()
        .iter()
        .chain(b2.variable())
        .cloned()
        .collect();
    let extra1: BTreeSet<String> = e1
        .allocation_vars()
        .difference(&shared_vars)
        .cloned()
        .collect();
    let extra2: BTreeSet<String> = e2
        .allocation_vars()
        .difference(&shared_vars)
        .cloned()
        .collect();
    if let Some(clash) = extra1.intersection(&extra2).next() {
        return Err(Error::Usage(format!(
            "allocation variable `{clash}` is used by both blocks"
        )));
    }

    let mut cross = EquationSet::new();
    for v in b1.variable() {
        if b2.actual().contains(v) {
            cross.insert(v, e2.get(v).expect("allocator total").clone())?;
        }
    }
    for v in b2.variable() {
        if b1.actual().contains(v) && cross.get(v).is_none() {
            cross.insert(v, e1.get(v).expect("allocator total").clone())?;
        }
    }
    let lhs_order: Vec<String> = cross.iter().map(|(lhs, _)| lhs.to_string()).collect();
    for lhs in &lhs_order {
        cross.eliminate(lhs, supply, true)?;
    }

    let substitute_solved = |expr: &Expression| {
        let mut out = expr.clone();
        for (lhs, rhs) in cross.iter() {
            out = out.substitute(lhs, rhs);
        }
        simplify(&out)
    };
    let mut pairs: Vec<(String, Expression)> = Vec::new();
    for a in composed.actual() {
        let source = if b1.actual().contains(a) { e1 } else { e2 };
        pairs.push((a.clone(), substitute_solved(source.get(a).expect("total"))));
    }
    for v in composed.variable() {
        pairs.push((v.clone(), Expression::var(v)));
    }
    Ok((composed, Allocator::from_pairs(pairs)))
}

/// Solves every block of a validated splitter and folds the compositions in
/// ascending block order, yielding a global allocator.
pub fn compose_splitter(f: &ArgumentationFramework, blocks: &[Block]) -> Result<Allocator> {
    let violations = validate_splitter(f, blocks);
    if !violations.is_empty() {
        return Err(Error::Usage(format!(
            "invalid splitter: {}",
            violations.join("; ")
        )));
    }
    let mut solved: Vec<(Block, Allocator)> = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        let mut supply = FreshSupply::for_block(i);
        solved.push((block.clone(), solve_block(block, &mut supply)?));
    }
    let mut supply = FreshSupply::global();
    let mut iter = solved.into_iter();
    let (mut block, mut alloc) = iter
        .next()
        .ok_or_else(|| Error::Usage("splitter has no blocks".into()))?;
    for (next_block, next_alloc) in iter {
        (block, alloc) = compose_allocators(&block, &alloc, &next_block, &next_alloc, &mut supply)?;
    }
    if !block.variable().is_empty() {
        return Err(Error::Usage(format!(
            "composition left variable argument `{}` unresolved",
            block.variable()[0]
        )));
    }
    // Restore the framework's declaration order.
    Ok(Allocator::from_pairs(f.args().iter().map(|a| {
        (a.clone(), alloc.get(a).expect("covers all arguments").clone())
    })))
}

/// The mutual influence of two arguments: solve everything else with `a` and
/// `b` abstracted, then refine their two completeness equations. The first
/// component mentions `b` (never `a`); the second is symmetric.
pub fn pairwise_influence(
    network: &Network,
    a: &str,
    b: &str,
) -> Result<(Expression, Expression)> {
    if a == b {
        return Err(Error::Usage("influence needs two distinct arguments".into()));
    }
    for name in [a, b] {
        if !network.args().iter().any(|x| x == name) {
            return Err(Error::Usage(format!("`{name}` is not an argument")));
        }
    }
    let actual: Vec<String> = network
        .args()
        .iter()
        .filter(|x| *x != a && *x != b)
        .cloned()
        .collect();
    let conditions: IndexMap<String, Expression> = actual
        .iter()
        .map(|x| (x.clone(), network.condition(x).expect("total").clone()))
        .collect();
    let block = Block::from_conditions(actual, vec![a.to_string(), b.to_string()], conditions)?;
    let mut block_supply = FreshSupply::for_block(0);
    let local = solve_block(&block, &mut block_supply)?;

    let mut supply = FreshSupply::global();
    let completeness = |arg: &str| {
        let cond = network.condition(arg).expect("total");
        let mut rhs = cond.clone();
        for name in cond.vars() {
            if let Some(e) = local.get(&name) {
                rhs = rhs.substitute(&name, e);
            }
        }
        simplify(&rhs)
    };
    let first = refine(a, &completeness(a), &mut supply, true);
    let second = refine(b, &completeness(b), &mut supply, true);
    Ok((first, second))
}
