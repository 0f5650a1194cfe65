//! Frameworks, generalized acceptance-condition networks, labelings and
//! allocators, together with the brute-force labeling oracle, grounded
//! computation, and the labeling-composition baseline.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::solver::FreshSupply;
use crate::tri::{
    equivalent_bounded, simplify, valuations_over, Expression, TriValue, Valuation,
};

/// Default bound on the argument count accepted by the exhaustive labeling
/// oracle (3^12 candidates).
pub const DEFAULT_ORACLE_ARG_BOUND: usize = 12;

/// A plain Dung framework: arguments and a binary attack relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgumentationFramework {
    args: Vec<String>,
    attacks: Vec<(String, String)>,
}

impl ArgumentationFramework {
    pub fn new(args: Vec<String>, attacks: Vec<(String, String)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for a in &args {
            if !crate::tri::is_identifier(a) {
                return Err(Error::Usage(format!("invalid argument name `{a}`")));
            }
            if !seen.insert(a.clone()) {
                return Err(Error::Usage(format!("duplicate argument `{a}`")));
            }
        }
        for (src, dst) in &attacks {
            if !seen.contains(src) || !seen.contains(dst) {
                return Err(Error::Usage(format!(
                    "attack ({src}, {dst}) references an undeclared argument"
                )));
            }
        }
        Ok(Self { args, attacks })
    }

    pub fn args(&self) -> &[String] {
        &self.args
    }

    pub fn attacks(&self) -> &[(String, String)] {
        &self.attacks
    }

    pub fn attackers_of<'a>(&'a self, target: &'a str) -> impl Iterator<Item = &'a str> {
        self.attacks
            .iter()
            .filter(move |(_, dst)| dst == target)
            .map(|(src, _)| src.as_str())
    }
}

/// A generalized framework: one acceptance condition per argument, each an
/// expression over argument names (the constant `U` is permitted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    args: Vec<String>,
    conditions: IndexMap<String, Expression>,
}

impl Network {
    pub fn new(args: Vec<String>, conditions: IndexMap<String, Expression>) -> Result<Self> {
        let declared: BTreeSet<&str> = args.iter().map(String::as_str).collect();
        if declared.len() != args.len() {
            return Err(Error::Usage("duplicate argument".into()));
        }
        for arg in &args {
            let cond = conditions
                .get(arg)
                .ok_or_else(|| Error::Usage(format!("argument `{arg}` has no condition")))?;
            if let Some(unknown) = cond.vars().iter().find(|v| !declared.contains(v.as_str())) {
                return Err(Error::Usage(format!(
                    "condition of `{arg}` references undeclared argument `{unknown}`"
                )));
            }
        }
        if conditions.len() != args.len() {
            return Err(Error::Usage("condition for an undeclared argument".into()));
        }
        Ok(Self { args, conditions })
    }

    /// `condition(A) = /\ !A'` over the attackers of `A`; `T` when unattacked.
    pub fn from_af(f: &ArgumentationFramework) -> Network {
        let conditions = f
            .args()
            .iter()
            .map(|a| {
                let cond = Expression::conj(
                    f.attackers_of(a)
                        .map(|src| Expression::neg(Expression::var(src))),
                );
                (a.clone(), cond)
            })
            .collect();
        Network {
            args: f.args().to_vec(),
            conditions,
        }
    }

    pub fn args(&self) -> &[String] {
        &self.args
    }

    pub fn condition(&self, arg: &str) -> Option<&Expression> {
        self.conditions.get(arg)
    }

    pub fn conditions(&self) -> impl Iterator<Item = (&str, &Expression)> {
        self.conditions.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Recovers the attack relation when every condition is a conjunction of
    /// negated argument variables (or `T`). Generalized conditions give `None`.
    pub fn as_af(&self) -> Option<ArgumentationFramework> {
        let mut attacks = Vec::new();
        for (arg, cond) in &self.conditions {
            let children: Vec<&Expression> = match cond {
                Expression::Constant(TriValue::True) => Vec::new(),
                Expression::Conjunction(cs) => cs.iter().collect(),
                other => vec![other],
            };
            for child in children {
                match child {
                    Expression::Negation(inner) => match inner.as_ref() {
                        Expression::Variable(src) => attacks.push((src.clone(), arg.clone())),
                        _ => return None,
                    },
                    _ => return None,
                }
            }
        }
        ArgumentationFramework::new(self.args.clone(), attacks).ok()
    }

    /// The argument-dependency graph: `B -> A` iff `B` occurs in `condition(A)`.
    pub fn dependency_edges(&self) -> Vec<(String, String)> {
        let mut edges = Vec::new();
        for (arg, cond) in &self.conditions {
            for src in cond.vars() {
                edges.push((src, arg.clone()));
            }
        }
        edges
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    In,
    Out,
    Undec,
}

impl Label {
    pub fn to_tri(self) -> TriValue {
        match self {
            Label::In => TriValue::True,
            Label::Out => TriValue::False,
            Label::Undec => TriValue::Undec,
        }
    }

    pub fn from_tri(v: TriValue) -> Label {
        match v {
            TriValue::True => Label::In,
            TriValue::False => Label::Out,
            TriValue::Undec => Label::Undec,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::In => "in",
            Label::Out => "out",
            Label::Undec => "undec",
        }
    }
}

/// A total assignment of labels to arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Labeling {
    map: BTreeMap<String, Label>,
}

impl Labeling {
    pub fn from_pairs<I, S>(pairs: I) -> Labeling
    where
        I: IntoIterator<Item = (S, Label)>,
        S: Into<String>,
    {
        Labeling {
            map: pairs.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub fn get(&self, arg: &str) -> Option<Label> {
        self.map.get(arg).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Label)> {
        self.map.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn in_set(&self) -> BTreeSet<&str> {
        self.iter()
            .filter(|(_, l)| *l == Label::In)
            .map(|(a, _)| a)
            .collect()
    }

    pub fn has_undec(&self) -> bool {
        self.iter().any(|(_, l)| l == Label::Undec)
    }

    pub fn to_valuation(&self) -> Valuation {
        Valuation::from_pairs(self.iter().map(|(a, l)| (a, l.to_tri())))
    }

    pub fn from_valuation(v: &Valuation) -> Labeling {
        Labeling::from_pairs(v.iter().map(|(name, val)| (name, Label::from_tri(val))))
    }
}

/// A mapping from arguments to expressions over allocation variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocator {
    entries: IndexMap<String, Expression>,
}

impl Allocator {
    pub fn from_pairs<I, S>(pairs: I) -> Allocator
    where
        I: IntoIterator<Item = (S, Expression)>,
        S: Into<String>,
    {
        Allocator {
            entries: pairs.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub fn get(&self, arg: &str) -> Option<&Expression> {
        self.entries.get(arg)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Expression)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn args(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All variables occurring in the allocated expressions.
    pub fn allocation_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (_, e) in self.iter() {
            out.extend(e.vars());
        }
        out
    }

    /// Number of allocation variables after simplification.
    pub fn arity(&self) -> usize {
        let simplified = self.simplified();
        simplified.allocation_vars().len()
    }

    pub fn simplified(&self) -> Allocator {
        Allocator::from_pairs(self.iter().map(|(a, e)| (a, simplify(e))))
    }

    pub fn total_node_count(&self) -> usize {
        self.iter().map(|(_, e)| e.node_count()).sum()
    }
}

/// True iff mapping `in -> T`, `out -> F`, `undec -> U` solves every
/// equation `A == condition(A)`.
pub fn is_complete_labeling(network: &Network, labeling: &Labeling) -> Result<bool> {
    let v = labeling.to_valuation();
    for (arg, cond) in network.conditions() {
        let expected = labeling
            .get(arg)
            .ok_or_else(|| Error::Usage(format!("labeling missing argument `{arg}`")))?;
        if cond.eval(&v)? != expected.to_tri() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All complete labelings, by exhaustive enumeration in lexicographic order
/// over the declared argument order with `T < U < F` per position.
pub fn enumerate_complete_labelings(network: &Network, bound: usize) -> Result<Vec<Labeling>> {
    let args = network.args();
    if args.len() > bound {
        return Err(Error::Capacity(format!(
            "labeling oracle over {} arguments exceeds the bound of {bound}",
            args.len()
        )));
    }
    let mut out = Vec::new();
    for v in valuations_over(args) {
        let labeling = Labeling::from_valuation(&v);
        if is_complete_labeling(network, &labeling)? {
            out.push(labeling);
        }
    }
    Ok(out)
}

/// The complete labeling with subset-minimal in-set.
///
/// Attack-shaped networks use the standard least-fixpoint iteration. For
/// generalized conditions the grounded labeling is selected from the oracle
/// output; a missing unique minimum is an error.
pub fn grounded_labeling(network: &Network, oracle_bound: usize) -> Result<Labeling> {
    if let Some(af) = network.as_af() {
        return Ok(grounded_fixpoint(&af));
    }
    let all = enumerate_complete_labelings(network, oracle_bound)?;
    let minimum = all.iter().find(|cand| {
        let cand_in = cand.in_set();
        all.iter().all(|other| cand_in.is_subset(&other.in_set()))
    });
    minimum.cloned().ok_or_else(|| {
        Error::Usage("network has no unique subset-minimal complete labeling".into())
    })
}

fn grounded_fixpoint(f: &ArgumentationFramework) -> Labeling {
    let mut labels: BTreeMap<&str, Label> = BTreeMap::new();
    loop {
        let mut changed = false;
        for arg in f.args() {
            if labels.contains_key(arg.as_str()) {
                continue;
            }
            let mut all_out = true;
            let mut any_in = false;
            for attacker in f.attackers_of(arg) {
                match labels.get(attacker) {
                    Some(Label::Out) => {}
                    Some(Label::In) => {
                        any_in = true;
                        all_out = false;
                    }
                    _ => all_out = false,
                }
            }
            if all_out {
                labels.insert(arg, Label::In);
                changed = true;
            } else if any_in {
                labels.insert(arg, Label::Out);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Labeling::from_pairs(
        f.args()
            .iter()
            .map(|a| (a.clone(), labels.get(a.as_str()).copied().unwrap_or(Label::Undec))),
    )
}

/// `in -> T`, `out -> F`, `undec -> U`.
pub fn labeling_to_allocator(labeling: &Labeling) -> Allocator {
    Allocator::from_pairs(
        labeling
            .iter()
            .map(|(a, l)| (a, Expression::Constant(l.to_tri()))),
    )
}

/// Inverse of [`labeling_to_allocator`]; every entry must be a constant leaf.
pub fn allocator_to_labeling(allocator: &Allocator) -> Result<Labeling> {
    let mut pairs = Vec::new();
    for (arg, expr) in allocator.iter() {
        match expr {
            Expression::Constant(v) => pairs.push((arg, Label::from_tri(*v))),
            other => return Err(Error::Shape(other.to_string())),
        }
    }
    Ok(Labeling::from_pairs(pairs))
}

/// True iff `E(A)` is equivalent to `condition(A)` with every argument name
/// replaced by its allocated expression, for every argument.
pub fn is_complete_allocator(
    network: &Network,
    allocator: &Allocator,
    equiv_bound: usize,
) -> Result<bool> {
    for (arg, cond) in network.conditions() {
        let own = allocator
            .get(arg)
            .ok_or_else(|| Error::Usage(format!("allocator missing argument `{arg}`")))?;
        let mut target = cond.clone();
        for name in cond.vars() {
            let replacement = allocator
                .get(&name)
                .ok_or_else(|| Error::Usage(format!("allocator missing argument `{name}`")))?;
            target = target.substitute(&name, replacement);
        }
        if !equivalent_bounded(own, &target, equiv_bound)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluates every allocated expression to a constant under `v`.
pub fn instantiate(allocator: &Allocator, v: &Valuation) -> Result<Allocator> {
    let mut pairs = Vec::new();
    for (arg, expr) in allocator.iter() {
        pairs.push((arg, Expression::Constant(expr.eval(v)?)));
    }
    Ok(Allocator::from_pairs(pairs))
}

/// The labelings reachable by instantiating over all valuations of the
/// allocation variables.
pub fn instantiation_set(allocator: &Allocator, var_bound: usize) -> Result<BTreeSet<Labeling>> {
    let vars: Vec<String> = allocator.allocation_vars().into_iter().collect();
    if vars.len() > var_bound {
        return Err(Error::Capacity(format!(
            "instantiation over {} variables exceeds the bound of {var_bound}",
            vars.len()
        )));
    }
    let mut out = BTreeSet::new();
    for v in valuations_over(&vars) {
        let constant = instantiate(allocator, &v)?;
        out.insert(allocator_to_labeling(&constant)?);
    }
    Ok(out)
}

/// Complete, and instantiates exactly the complete labelings of the network.
pub fn is_general(
    network: &Network,
    allocator: &Allocator,
    equiv_bound: usize,
    oracle_bound: usize,
) -> Result<bool> {
    if !is_complete_allocator(network, allocator, equiv_bound)? {
        return Ok(false);
    }
    let reachable = instantiation_set(allocator, equiv_bound)?;
    let oracle: BTreeSet<Labeling> = enumerate_complete_labelings(network, oracle_bound)?
        .into_iter()
        .collect();
    Ok(reachable == oracle)
}

/// Composition of two complete allocators over a fresh variable (the
/// labeling-enumeration construction): on grounded-undec arguments
/// `E(A) = a & E1(A) | !a & E2(A) | a & !a`, elsewhere `E(A) = E1(A)`.
pub fn compose_pair_legacy(
    e1: &Allocator,
    e2: &Allocator,
    grounded: &Labeling,
    fresh: &str,
) -> Result<Allocator> {
    if e1.allocation_vars().contains(fresh)
        || e2.allocation_vars().contains(fresh)
        || e1.args().any(|a| a == fresh)
    {
        return Err(Error::Namespace(fresh.to_string()));
    }
    let a = Expression::var(fresh);
    let mut pairs = Vec::new();
    for (arg, lhs) in e1.iter() {
        let rhs = e2
            .get(arg)
            .ok_or_else(|| Error::Usage(format!("allocator missing argument `{arg}`")))?;
        let grounded_label = grounded
            .get(arg)
            .ok_or_else(|| Error::Usage(format!("grounded labeling missing `{arg}`")))?;
        let expr = if grounded_label == Label::Undec {
            let undec_branch = a.clone().and(Expression::neg(a.clone()));
            simplify(
                &a.clone()
                    .and(lhs.clone())
                    .or(Expression::neg(a.clone()).and(rhs.clone()))
                    .or(undec_branch),
            )
        } else {
            lhs.clone()
        };
        pairs.push((arg, expr));
    }
    Ok(Allocator::from_pairs(pairs))
}

/// Builds a general allocator by folding all non-grounded complete labelings
/// through [`compose_pair_legacy`]. Requires the labeling oracle.
pub fn build_general_legacy(
    network: &Network,
    oracle_bound: usize,
    supply: &mut FreshSupply,
) -> Result<Allocator> {
    let grounded = grounded_labeling(network, oracle_bound)?;
    let labelings = enumerate_complete_labelings(network, oracle_bound)?;
    let mut rest = labelings.iter().filter(|l| **l != grounded);
    let Some(first) = rest.next() else {
        return Ok(labeling_to_allocator(&grounded));
    };
    let mut acc = labeling_to_allocator(first);
    for labeling in rest {
        let fresh = supply.draw();
        acc = compose_pair_legacy(&acc, &labeling_to_allocator(labeling), &grounded, &fresh)?;
    }
    Ok(acc)
}
