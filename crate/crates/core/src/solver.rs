//! The compilation core: decompose an expression around a distinguished
//! variable, build refined (self-dependency-free) equations, substitute them
//! through an equation set, and emit a general allocator.

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::framework::{Allocator, Network};
use crate::tri::{simplify, valuations_over, Expression, TriValue, Valuation};

/// Reserved for generated variables; parsers refuse argument names using it.
pub fn is_reserved_name(name: &str) -> bool {
    name.starts_with("_v") || name.starts_with("_b")
}

/// Deterministic counter-based source of fresh identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreshSupply {
    prefix: String,
    next: usize,
}

impl FreshSupply {
    pub fn new(prefix: impl Into<String>) -> FreshSupply {
        FreshSupply {
            prefix: prefix.into(),
            next: 0,
        }
    }

    /// The global allocation-variable namespace (`_v0`, `_v1`, ...).
    pub fn global() -> FreshSupply {
        FreshSupply::new("_v")
    }

    /// A per-block namespace (`_b<id>_v0`, ...), disjoint from the global one
    /// and from every other block's.
    pub fn for_block(block_id: usize) -> FreshSupply {
        FreshSupply::new(format!("_b{block_id}_v"))
    }

    pub fn draw(&mut self) -> String {
        let name = format!("{}{}", self.prefix, self.next);
        self.next += 1;
        name
    }
}

/// The coefficients of `X`, `!X`, `X & !X` and the remainder: an expression
/// `G` decomposes as `G == P&X | N&!X | C&X&!X | M` with `X` absent from all
/// four components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadDecomposition {
    pub p: Expression,
    pub n: Expression,
    pub c: Expression,
    pub m: Expression,
}

impl QuadDecomposition {
    fn constant(m: Expression) -> QuadDecomposition {
        QuadDecomposition {
            p: Expression::fls(),
            n: Expression::fls(),
            c: Expression::fls(),
            m,
        }
    }

    /// `P&X | N&!X | C&X&!X | M`, for checking the decomposition identity.
    pub fn recombine(&self, x: &str) -> Expression {
        let xv = Expression::var(x);
        let nx = Expression::neg(xv.clone());
        self.p
            .clone()
            .and(xv.clone())
            .or(self.n.clone().and(nx.clone()))
            .or(self.c.clone().and(xv).and(nx))
            .or(self.m.clone())
    }
}

pub fn decompose(g: &Expression, x: &str) -> QuadDecomposition {
    let mut q = positive(g, x);
    q.p = simplify(&q.p);
    q.n = simplify(&q.n);
    q.c = simplify(&q.c);
    q.m = simplify(&q.m);
    q
}

fn positive(e: &Expression, x: &str) -> QuadDecomposition {
    match e {
        Expression::Constant(_) => QuadDecomposition::constant(e.clone()),
        Expression::Variable(v) if v == x => QuadDecomposition {
            p: Expression::tru(),
            n: Expression::fls(),
            c: Expression::fls(),
            m: Expression::fls(),
        },
        Expression::Variable(_) => QuadDecomposition::constant(e.clone()),
        Expression::Negation(inner) => negative(inner, x),
        Expression::Conjunction(children) => children
            .iter()
            .map(|c| positive(c, x))
            .reduce(combine_and)
            .unwrap_or_else(|| QuadDecomposition::constant(Expression::tru())),
        Expression::Disjunction(children) => children
            .iter()
            .map(|c| positive(c, x))
            .reduce(combine_or)
            .unwrap_or_else(|| QuadDecomposition::constant(Expression::fls())),
    }
}

// Decomposition of `!e`: negation swaps the roles of `X` and `!X` and, by
// De Morgan, turns conjunctions into the disjunction rule and vice versa.
fn negative(e: &Expression, x: &str) -> QuadDecomposition {
    match e {
        Expression::Constant(_) | Expression::Variable(_) => {
            if let Expression::Variable(v) = e {
                if v == x {
                    return QuadDecomposition {
                        p: Expression::fls(),
                        n: Expression::tru(),
                        c: Expression::fls(),
                        m: Expression::fls(),
                    };
                }
            }
            QuadDecomposition::constant(simplify(&Expression::neg(e.clone())))
        }
        Expression::Negation(inner) => positive(inner, x),
        Expression::Conjunction(children) => children
            .iter()
            .map(|c| negative(c, x))
            .reduce(combine_or)
            .unwrap_or_else(|| QuadDecomposition::constant(Expression::fls())),
        Expression::Disjunction(children) => children
            .iter()
            .map(|c| negative(c, x))
            .reduce(combine_and)
            .unwrap_or_else(|| QuadDecomposition::constant(Expression::tru())),
    }
}

fn combine_or(a: QuadDecomposition, b: QuadDecomposition) -> QuadDecomposition {
    QuadDecomposition {
        p: simplify(&a.p.or(b.p)),
        n: simplify(&a.n.or(b.n)),
        c: simplify(&a.c.or(b.c)),
        m: simplify(&a.m.or(b.m)),
    }
}

// The product rule. The C component collects every way a conjunction can be
// pinned to U through the distinguished variable, including the clash terms
// P1N2 and N1P2.
fn combine_and(a: QuadDecomposition, b: QuadDecomposition) -> QuadDecomposition {
    let p = a
        .p
        .clone()
        .and(b.p.clone())
        .or(a.p.clone().and(b.m.clone()))
        .or(b.p.clone().and(a.m.clone()));
    let n = a
        .n
        .clone()
        .and(b.n.clone())
        .or(a.n.clone().and(b.m.clone()))
        .or(b.n.clone().and(a.m.clone()));
    let c = a
        .p
        .clone()
        .or(a.n.clone())
        .or(a.m.clone())
        .and(b.c.clone())
        .or(b.p.clone().or(b.n.clone()).or(b.m.clone()).and(a.c.clone()))
        .or(a.c.and(b.c))
        .or(a.p.clone().and(b.n.clone()))
        .or(a.n.and(b.p));
    let m = a.m.and(b.m);
    QuadDecomposition {
        p: simplify(&p),
        n: simplify(&n),
        c: simplify(&c),
        m: simplify(&m),
    }
}

/// Rewrites `lhs == rhs` so the right side no longer mentions `lhs`,
/// preserving the solution set exactly (possibly via one fresh variable).
///
/// With `elide` set, equations whose positive and clash coefficients are both
/// false-equivalent skip the fresh draw and collapse to `U&N | M`.
pub fn refine(lhs: &str, rhs: &Expression, supply: &mut FreshSupply, elide: bool) -> Expression {
    if !rhs.vars().contains(lhs) {
        return rhs.clone();
    }
    let q = decompose(rhs, lhs);
    if elide && q.p.is_equiv_false() && q.c.is_equiv_false() {
        return simplify(&Expression::undec().and(q.n).or(q.m));
    }
    let x = Expression::var(supply.draw());
    simplify(
        &q.p.and(x.clone())
            .or(Expression::undec().and(q.n.or(q.c.and(x))))
            .or(q.m),
    )
}

/// Pruning beyond this variable count is skipped; the tables are 3^k.
const PRUNE_VAR_BOUND: usize = 9;
const PRUNE_MAX_PASSES: usize = 8;

/// Canonicalization alone does not bound growth: eliminating arguments of a
/// dense framework multiplies sums of products whose redundancy is semantic,
/// not syntactic. This pass replaces any subterm by a constant whenever doing
/// so provably preserves the whole expression — per valuation, the effect of
/// a subterm on the root is tracked as a value-to-value map (its observable
/// context), so the check is exact and local. Keeps solver equations
/// desk-sized.
fn prune(e: &Expression) -> Expression {
    let mut current = simplify(e);
    for _ in 0..PRUNE_MAX_PASSES {
        let vars: Vec<String> = current.vars().into_iter().collect();
        if vars.len() > PRUNE_VAR_BOUND {
            return current;
        }
        let valuations: Vec<Valuation> = valuations_over(&vars).collect();
        let identity: Vec<[TriValue; 3]> =
            vec![[TriValue::True, TriValue::Undec, TriValue::False]; valuations.len()];
        let next = simplify(&prune_rewrite(&current, &identity, &valuations));
        if next == current {
            return next;
        }
        current = next;
    }
    current
}

fn value_index(v: TriValue) -> usize {
    match v {
        TriValue::True => 0,
        TriValue::Undec => 1,
        TriValue::False => 2,
    }
}

fn table_of(e: &Expression, valuations: &[Valuation]) -> Vec<TriValue> {
    valuations
        .iter()
        .map(|v| e.eval(v).expect("closed over vars"))
        .collect()
}

/// `ctx[i]` maps the value of this node under `valuations[i]` to the value
/// of the root; a rewrite is sound iff it fixes that composite everywhere.
fn prune_rewrite(
    e: &Expression,
    ctx: &[[TriValue; 3]],
    valuations: &[Valuation],
) -> Expression {
    match e {
        Expression::Constant(_) | Expression::Variable(_) => e.clone(),
        Expression::Negation(child) => {
            let child_ctx: Vec<[TriValue; 3]> = ctx
                .iter()
                .map(|m| {
                    [TriValue::True, TriValue::Undec, TriValue::False]
                        .map(|a| m[value_index(a.negate())])
                })
                .collect();
            Expression::neg(prune_rewrite(child, &child_ctx, valuations))
        }
        Expression::Conjunction(children) | Expression::Disjunction(children) => {
            let is_conj = matches!(e, Expression::Conjunction(_));
            let (neutral, absorbing, combine): (_, _, fn(TriValue, TriValue) -> TriValue) =
                if is_conj {
                    (TriValue::True, TriValue::False, TriValue::and)
                } else {
                    (TriValue::False, TriValue::True, TriValue::or)
                };
            let mut kids = children.clone();
            let mut tables: Vec<Vec<TriValue>> =
                kids.iter().map(|k| table_of(k, valuations)).collect();
            for j in 0..kids.len() {
                let rest: Vec<TriValue> = (0..valuations.len())
                    .map(|i| {
                        tables
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .fold(neutral, |acc, (_, t)| combine(acc, t[i]))
                    })
                    .collect();
                let preserved = |candidate: &dyn Fn(usize) -> TriValue| {
                    (0..valuations.len()).all(|i| {
                        let original = combine(tables[j][i], rest[i]);
                        ctx[i][value_index(combine(candidate(i), rest[i]))]
                            == ctx[i][value_index(original)]
                    })
                };
                let mut replaced = false;
                for constant in [neutral, absorbing, TriValue::Undec] {
                    if preserved(&|_| constant) {
                        kids[j] = Expression::Constant(constant);
                        tables[j] = vec![constant; valuations.len()];
                        replaced = true;
                        break;
                    }
                }
                if !replaced {
                    let child_ctx: Vec<[TriValue; 3]> = (0..valuations.len())
                        .map(|i| {
                            [TriValue::True, TriValue::Undec, TriValue::False]
                                .map(|a| ctx[i][value_index(combine(a, rest[i]))])
                        })
                        .collect();
                    let rewritten = prune_rewrite(&kids[j], &child_ctx, valuations);
                    if rewritten != kids[j] {
                        tables[j] = table_of(&rewritten, valuations);
                        kids[j] = rewritten;
                    }
                }
            }
            if is_conj {
                Expression::conj(kids)
            } else {
                Expression::disj(kids)
            }
        }
    }
}

/// An ordered set of equations `lhs == rhs` with pairwise-distinct left sides.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EquationSet {
    eqs: IndexMap<String, Expression>,
}

impl EquationSet {
    pub fn new() -> EquationSet {
        EquationSet::default()
    }

    pub fn insert(&mut self, lhs: impl Into<String>, rhs: Expression) -> Result<()> {
        let lhs = lhs.into();
        if self.eqs.contains_key(&lhs) {
            return Err(Error::Usage(format!("duplicate equation for `{lhs}`")));
        }
        self.eqs.insert(lhs, rhs);
        Ok(())
    }

    pub fn get(&self, lhs: &str) -> Option<&Expression> {
        self.eqs.get(lhs)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Expression)> {
        self.eqs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.eqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty()
    }

    /// Replaces the equation for `lhs` by `lhs == rhs` and rewrites every
    /// other right side with the same substitution (then simplifies).
    pub fn substitute(&mut self, lhs: &str, rhs: Expression) -> Result<()> {
        if !self.eqs.contains_key(lhs) {
            return Err(Error::Usage(format!("no equation for `{lhs}`")));
        }
        if rhs.vars().contains(lhs) {
            return Err(Error::Usage(format!(
                "substituted right side still mentions `{lhs}`"
            )));
        }
        for (key, value) in self.eqs.iter_mut() {
            if key == lhs {
                *value = rhs.clone();
            } else {
                *value = prune(&value.substitute(lhs, &rhs));
            }
        }
        Ok(())
    }

    /// One solve step: refine the equation for `lhs`, then substitute it
    /// through the set.
    pub fn eliminate(&mut self, lhs: &str, supply: &mut FreshSupply, elide: bool) -> Result<()> {
        let rhs = self
            .eqs
            .get(lhs)
            .ok_or_else(|| Error::Usage(format!("no equation for `{lhs}`")))?
            .clone();
        let refined = refine(lhs, &rhs, supply, elide);
        self.substitute(lhs, refined)
    }

    pub fn into_allocator(self) -> Allocator {
        Allocator::from_pairs(self.eqs)
    }
}

/// Extends `v` by evaluating each solved right side; requires the left sides
/// to be eliminated from all right sides and `v` to cover the remaining
/// variables.
pub fn extend_solution(set: &EquationSet, v: &Valuation) -> Result<Valuation> {
    let mut extended = v.clone();
    for (lhs, rhs) in set.iter() {
        if set.iter().any(|(_, other)| other.vars().contains(lhs)) {
            return Err(Error::Usage(format!(
                "equation set is not solved: `{lhs}` occurs on a right side"
            )));
        }
        extended.set(lhs, rhs.eval(v)?);
    }
    Ok(extended)
}

/// Compiles the network into a general allocator, eliminating arguments in
/// the given order. The returned set maps every argument to an expression
/// over fresh variables only.
pub fn solve_set(
    network: &Network,
    order: &[String],
    supply: &mut FreshSupply,
    elide: bool,
) -> Result<EquationSet> {
    let mut remaining: Vec<&str> = network.args().iter().map(String::as_str).collect();
    for x in order {
        match remaining.iter().position(|a| a == x) {
            Some(i) => {
                remaining.swap_remove(i);
            }
            None => {
                return Err(Error::Usage(format!(
                    "order entry `{x}` is not a distinct argument of the network"
                )));
            }
        }
    }
    if !remaining.is_empty() {
        return Err(Error::Usage(format!(
            "order omits argument `{}`",
            remaining[0]
        )));
    }
    for arg in network.args() {
        if is_reserved_name(arg) {
            return Err(Error::Namespace(arg.clone()));
        }
    }

    let mut set = EquationSet::new();
    for (arg, cond) in network.conditions() {
        set.insert(arg, simplify(cond))?;
    }
    for x in order {
        set.eliminate(x, supply, elide)?;
    }
    Ok(set)
}

pub fn solve(
    network: &Network,
    order: &[String],
    supply: &mut FreshSupply,
    elide: bool,
) -> Result<Allocator> {
    solve_set(network, order, supply, elide).map(EquationSet::into_allocator)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderStrategy {
    /// Declaration order.
    Input,
    /// Try every permutation and keep one minimizing the arity (≤ 8 args).
    MinArityExhaustive,
    /// Greedy feedback-vertex-set approximation: arguments off the cycle
    /// cover go first, so only cover members can force a fresh variable.
    FvsHeuristic,
}

pub const EXHAUSTIVE_ORDER_ARG_BOUND: usize = 8;

pub fn order_strategy(network: &Network, kind: OrderStrategy) -> Result<Vec<String>> {
    let args = network.args().to_vec();
    match kind {
        OrderStrategy::Input => Ok(args),
        OrderStrategy::MinArityExhaustive => {
            if args.len() > EXHAUSTIVE_ORDER_ARG_BOUND {
                return Err(Error::Capacity(format!(
                    "exhaustive order search over {} arguments exceeds the bound of {}",
                    args.len(),
                    EXHAUSTIVE_ORDER_ARG_BOUND
                )));
            }
            let mut best: Option<(usize, Vec<String>)> = None;
            for order in permutations(&args) {
                let mut supply = FreshSupply::global();
                let arity = solve(network, &order, &mut supply, true)?.arity();
                if best.as_ref().is_none_or(|(a, _)| arity < *a) {
                    best = Some((arity, order));
                }
            }
            Ok(best.map(|(_, order)| order).unwrap_or_default())
        }
        OrderStrategy::FvsHeuristic => {
            let cover = feedback_vertex_cover(network);
            let mut order: Vec<String> = args
                .iter()
                .filter(|a| !cover.contains(a.as_str()))
                .cloned()
                .collect();
            order.extend(args.iter().filter(|a| cover.contains(a.as_str())).cloned());
            Ok(order)
        }
    }
}

fn permutations(items: &[String]) -> Vec<Vec<String>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first.clone());
            out.push(tail);
        }
    }
    out
}

// Greedy approximation: iteratively discard arguments that cannot lie on a
// dependency cycle (no in- or no out-edges); among the rest, move the one
// with the largest in*out degree product into the cover and repeat.
fn feedback_vertex_cover(network: &Network) -> std::collections::BTreeSet<String> {
    use std::collections::BTreeSet;

    let mut nodes: Vec<String> = network.args().to_vec();
    let mut edges: BTreeSet<(String, String)> = network.dependency_edges().into_iter().collect();
    let mut cover = BTreeSet::new();

    let remove_node = |node: &str, nodes: &mut Vec<String>, edges: &mut BTreeSet<(String, String)>| {
        nodes.retain(|n| n != node);
        edges.retain(|(a, b)| a != node && b != node);
    };

    while !nodes.is_empty() {
        let mut trimmed = true;
        while trimmed {
            trimmed = false;
            for node in nodes.clone() {
                if edges.contains(&(node.clone(), node.clone())) {
                    continue;
                }
                let has_in = edges.iter().any(|(_, b)| *b == node);
                let has_out = edges.iter().any(|(a, _)| *a == node);
                if !has_in || !has_out {
                    remove_node(&node, &mut nodes, &mut edges);
                    trimmed = true;
                }
            }
        }
        if nodes.is_empty() {
            break;
        }
        let pick = nodes
            .iter()
            .max_by_key(|node| {
                let ins = edges.iter().filter(|(_, b)| b == *node).count();
                let outs = edges.iter().filter(|(a, _)| a == *node).count();
                ins * outs
            })
            .cloned()
            .expect("nodes nonempty");
        cover.insert(pick.clone());
        remove_node(&pick, &mut nodes, &mut edges);
    }
    cover
}
