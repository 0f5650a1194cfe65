use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::tri::TriValue;

/// Default bound on the number of distinct variables accepted by the
/// exhaustive equivalence check (3^12 valuations).
pub const DEFAULT_EQUIV_VAR_BOUND: usize = 12;

/// A three-valued logical expression.
///
/// Conjunctions and disjunctions are n-ary with at least two children;
/// the smart constructors [`Expression::conj`] and [`Expression::disj`]
/// collapse shorter lists to the neutral constant or the single child.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expression {
    Constant(TriValue),
    Variable(String),
    Negation(Box<Expression>),
    Conjunction(Vec<Expression>),
    Disjunction(Vec<Expression>),
}

impl Expression {
    pub fn tru() -> Expression {
        Expression::Constant(TriValue::True)
    }

    pub fn fls() -> Expression {
        Expression::Constant(TriValue::False)
    }

    pub fn undec() -> Expression {
        Expression::Constant(TriValue::Undec)
    }

    pub fn var(name: impl Into<String>) -> Expression {
        let name = name.into();
        debug_assert!(is_identifier(&name), "invalid variable name: {name:?}");
        Expression::Variable(name)
    }

    pub fn neg(child: Expression) -> Expression {
        Expression::Negation(Box::new(child))
    }

    /// N-ary conjunction; the empty list is `T` and a singleton is its child.
    pub fn conj(children: impl IntoIterator<Item = Expression>) -> Expression {
        let children: Vec<_> = children.into_iter().collect();
        match children.len() {
            0 => Expression::tru(),
            1 => children.into_iter().next().unwrap(),
            _ => Expression::Conjunction(children),
        }
    }

    /// N-ary disjunction; the empty list is `F` and a singleton is its child.
    pub fn disj(children: impl IntoIterator<Item = Expression>) -> Expression {
        let children: Vec<_> = children.into_iter().collect();
        match children.len() {
            0 => Expression::fls(),
            1 => children.into_iter().next().unwrap(),
            _ => Expression::Disjunction(children),
        }
    }

    pub fn and(self, other: Expression) -> Expression {
        Expression::Conjunction(vec![self, other])
    }

    pub fn or(self, other: Expression) -> Expression {
        Expression::Disjunction(vec![self, other])
    }

    /// The set of variable names occurring in the expression.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expression::Constant(_) => {}
            Expression::Variable(name) => {
                out.insert(name.clone());
            }
            Expression::Negation(child) => child.collect_vars(out),
            Expression::Conjunction(children) | Expression::Disjunction(children) => {
                for child in children {
                    child.collect_vars(out);
                }
            }
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Expression::Constant(_) => false,
            Expression::Variable(v) => v == name,
            Expression::Negation(child) => child.mentions(name),
            Expression::Conjunction(children) | Expression::Disjunction(children) => {
                children.iter().any(|c| c.mentions(name))
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expression::Constant(_) | Expression::Variable(_) => 1,
            Expression::Negation(child) => 1 + child.node_count(),
            Expression::Conjunction(children) | Expression::Disjunction(children) => {
                1 + children.iter().map(Expression::node_count).sum::<usize>()
            }
        }
    }

    /// Evaluates the expression with a lookup function for variables.
    pub fn eval_with<F>(&self, lookup: &F) -> Result<TriValue>
    where
        F: Fn(&str) -> Option<TriValue>,
    {
        match self {
            Expression::Constant(v) => Ok(*v),
            Expression::Variable(name) => {
                lookup(name).ok_or_else(|| Error::Domain(name.clone()))
            }
            Expression::Negation(child) => Ok(child.eval_with(lookup)?.negate()),
            Expression::Conjunction(children) => {
                let mut acc = TriValue::True;
                for child in children {
                    acc = acc.and(child.eval_with(lookup)?);
                }
                Ok(acc)
            }
            Expression::Disjunction(children) => {
                let mut acc = TriValue::False;
                for child in children {
                    acc = acc.or(child.eval_with(lookup)?);
                }
                Ok(acc)
            }
        }
    }

    /// Evaluates under a valuation; every variable must be in its domain.
    pub fn eval(&self, valuation: &Valuation) -> Result<TriValue> {
        self.eval_with(&|name| valuation.get(name))
    }

    /// Evaluates under the all-`U` valuation `v_U`.
    pub fn eval_all_undec(&self) -> TriValue {
        self.eval_with(&|_| Some(TriValue::Undec))
            .expect("total lookup")
    }

    /// Replaces every occurrence of variable `x` by `replacement`.
    pub fn substitute(&self, x: &str, replacement: &Expression) -> Expression {
        match self {
            Expression::Constant(_) => self.clone(),
            Expression::Variable(name) => {
                if name == x {
                    replacement.clone()
                } else {
                    self.clone()
                }
            }
            Expression::Negation(child) => Expression::neg(child.substitute(x, replacement)),
            Expression::Conjunction(children) => Expression::Conjunction(
                children.iter().map(|c| c.substitute(x, replacement)).collect(),
            ),
            Expression::Disjunction(children) => Expression::Disjunction(
                children.iter().map(|c| c.substitute(x, replacement)).collect(),
            ),
        }
    }

    /// Sound over-approximation of the values the expression can reach.
    ///
    /// Bottom-up pointwise table application, sharpened by conditioning on
    /// each variable in turn: pinning `x` to a value and taking the union
    /// over its three values stays sound, and the intersection across
    /// variables sees correlations like `a & !a` never reaching `T`.
    pub fn value_range(&self) -> ValueRange {
        let mut range = self.range_given(None);
        for var in self.vars() {
            let mut union = ValueRange::empty();
            for v in TriValue::ALL {
                union = union.union(self.range_given(Some((&var, v))));
            }
            range = range.intersect(union);
        }
        range
    }

    fn range_given(&self, pivot: Option<(&str, TriValue)>) -> ValueRange {
        match self {
            Expression::Constant(v) => ValueRange::singleton(*v),
            Expression::Variable(name) => match pivot {
                Some((p, v)) if p == name => ValueRange::singleton(v),
                _ => ValueRange::full(),
            },
            Expression::Negation(child) => child.range_given(pivot).negate(),
            Expression::Conjunction(children) => children
                .iter()
                .map(|c| c.range_given(pivot))
                .fold(ValueRange::singleton(TriValue::True), ValueRange::and),
            Expression::Disjunction(children) => children
                .iter()
                .map(|c| c.range_given(pivot))
                .fold(ValueRange::singleton(TriValue::False), ValueRange::or),
        }
    }

    /// Classifies the expression by evaluating it under `v_U`.
    pub fn classify_constant(&self) -> ConstClass {
        match self.eval_all_undec() {
            TriValue::True => ConstClass::EquivT,
            TriValue::False => ConstClass::EquivF,
            TriValue::Undec => ConstClass::NonConstant,
        }
    }

    pub fn is_equiv_true(&self) -> bool {
        self.classify_constant() == ConstClass::EquivT
    }

    pub fn is_equiv_false(&self) -> bool {
        self.classify_constant() == ConstClass::EquivF
    }

    /// Distributes conjunction over disjunction once at the root, recursively
    /// in the children. Exponential in the worst case; not applied by
    /// `simplify`.
    pub fn distribute(&self) -> Expression {
        match self {
            Expression::Conjunction(children) => {
                let children: Vec<_> = children.iter().map(Expression::distribute).collect();
                let mut products: Vec<Vec<Expression>> = vec![Vec::new()];
                for child in children {
                    let alternatives: Vec<Expression> = match child {
                        Expression::Disjunction(alts) => alts,
                        other => vec![other],
                    };
                    let mut next = Vec::new();
                    for prefix in &products {
                        for alt in &alternatives {
                            let mut row = prefix.clone();
                            row.push(alt.clone());
                            next.push(row);
                        }
                    }
                    products = next;
                }
                Expression::disj(products.into_iter().map(Expression::conj))
            }
            Expression::Disjunction(children) => {
                Expression::disj(children.iter().map(Expression::distribute))
            }
            Expression::Negation(child) => Expression::neg(child.distribute()),
            leaf => leaf.clone(),
        }
    }
}

/// Result of [`Expression::classify_constant`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstClass {
    EquivT,
    EquivF,
    NonConstant,
}

/// Nonempty subset of `{T, U, F}` over-approximating reachable values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueRange(u8);

impl ValueRange {
    const T_BIT: u8 = 1;
    const U_BIT: u8 = 2;
    const F_BIT: u8 = 4;

    pub fn full() -> ValueRange {
        ValueRange(Self::T_BIT | Self::U_BIT | Self::F_BIT)
    }

    fn empty() -> ValueRange {
        ValueRange(0)
    }

    pub fn union(self, other: ValueRange) -> ValueRange {
        ValueRange(self.0 | other.0)
    }

    pub fn intersect(self, other: ValueRange) -> ValueRange {
        ValueRange(self.0 & other.0)
    }

    pub fn singleton(v: TriValue) -> ValueRange {
        ValueRange(Self::bit(v))
    }

    fn bit(v: TriValue) -> u8 {
        match v {
            TriValue::True => Self::T_BIT,
            TriValue::Undec => Self::U_BIT,
            TriValue::False => Self::F_BIT,
        }
    }

    pub fn contains(self, v: TriValue) -> bool {
        self.0 & Self::bit(v) != 0
    }

    pub fn is_subset(self, other: ValueRange) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn values(self) -> impl Iterator<Item = TriValue> {
        TriValue::ALL.into_iter().filter(move |v| self.contains(*v))
    }

    fn map_pairs(self, other: ValueRange, op: fn(TriValue, TriValue) -> TriValue) -> ValueRange {
        let mut bits = 0;
        for a in self.values() {
            for b in other.values() {
                bits |= Self::bit(op(a, b));
            }
        }
        ValueRange(bits)
    }

    pub fn negate(self) -> ValueRange {
        let mut bits = 0;
        for v in self.values() {
            bits |= Self::bit(v.negate());
        }
        ValueRange(bits)
    }

    pub fn and(self, other: ValueRange) -> ValueRange {
        self.map_pairs(other, TriValue::and)
    }

    pub fn or(self, other: ValueRange) -> ValueRange {
        self.map_pairs(other, TriValue::or)
    }

    /// `{T, U}` and `{F, U}` guards used by the `U` simplification rules.
    pub fn at_most_true_undec(self) -> bool {
        !self.contains(TriValue::False)
    }

    pub fn at_most_false_undec(self) -> bool {
        !self.contains(TriValue::True)
    }
}

/// A total mapping from a finite variable set to truth values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Valuation {
    map: BTreeMap<String, TriValue>,
}

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Valuation
    where
        I: IntoIterator<Item = (S, TriValue)>,
        S: Into<String>,
    {
        Valuation {
            map: pairs.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    /// The distinguished valuation `v_U` over the given domain.
    pub fn all_undec<I, S>(domain: I) -> Valuation
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Valuation::from_pairs(domain.into_iter().map(|name| (name, TriValue::Undec)))
    }

    pub fn get(&self, name: &str) -> Option<TriValue> {
        self.map.get(name).copied()
    }

    pub fn set(&mut self, name: impl Into<String>, value: TriValue) {
        self.map.insert(name.into(), value);
    }

    pub fn contains(&self, name: &str) -> bool {
        self.map.contains_key(name)
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, TriValue)> {
        self.map.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `v[p'/x]`: rebinds `x` to the evaluation of `expr` under `self`.
    pub fn updated_by(&self, x: &str, expr: &Expression) -> Result<Valuation> {
        let mut out = self.clone();
        out.set(x, expr.eval(self)?);
        Ok(out)
    }
}

/// Enumerates all `3^k` valuations over `names` in lexicographic order with
/// `T < U < F` in each position.
pub fn valuations_over(names: &[String]) -> impl Iterator<Item = Valuation> + '_ {
    let total = 3usize.checked_pow(names.len() as u32).expect("overflow");
    (0..total).map(move |mut index| {
        let mut pairs = Vec::with_capacity(names.len());
        for name in names.iter().rev() {
            pairs.push((name.clone(), TriValue::ALL[index % 3]));
            index /= 3;
        }
        Valuation::from_pairs(pairs)
    })
}

/// Exhaustive equivalence decision over the union variable set, with a
/// capacity bound on the variable count.
pub fn equivalent_bounded(p: &Expression, q: &Expression, bound: usize) -> Result<bool> {
    let names: Vec<String> = p.vars().union(&q.vars()).cloned().collect();
    if names.len() > bound {
        return Err(Error::Capacity(format!(
            "equivalence check over {} variables exceeds the bound of {bound}",
            names.len()
        )));
    }
    for v in valuations_over(&names) {
        if p.eval(&v)? != q.eval(&v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn equivalent(p: &Expression, q: &Expression) -> Result<bool> {
    equivalent_bounded(p, q, DEFAULT_EQUIV_VAR_BOUND)
}

/// Outcome of the randomized fallback used when the exhaustive check is out
/// of capacity. `NotDisproved` is never reported as equivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    Disproved(Valuation),
    NotDisproved,
}

/// Samples valuations from a simple deterministic stream and looks for a
/// countermodel.
pub fn refute_randomized(p: &Expression, q: &Expression, samples: usize, seed: u64) -> Refutation {
    let names: Vec<String> = p.vars().union(&q.vars()).cloned().collect();
    let mut state = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(1);
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..samples {
        let v = Valuation::from_pairs(
            names
                .iter()
                .map(|n| (n.clone(), TriValue::ALL[(next() % 3) as usize])),
        );
        let pv = p.eval(&v).expect("total valuation");
        let qv = q.eval(&v).expect("total valuation");
        if pv != qv {
            return Refutation::Disproved(v);
        }
    }
    Refutation::NotDisproved
}

// Digit-leading names are deliberately allowed: the interchange formats
// commonly number their arguments.
pub fn is_identifier(name: &str) -> bool {
    if name.is_empty() || matches!(name, "T" | "F" | "U") {
        return false;
    }
    name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, f, Precedence::Or)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Precedence {
    Or,
    And,
    Neg,
}

fn write_expr(e: &Expression, f: &mut fmt::Formatter<'_>, ctx: Precedence) -> fmt::Result {
    let own = match e {
        Expression::Disjunction(_) => Precedence::Or,
        Expression::Conjunction(_) => Precedence::And,
        _ => Precedence::Neg,
    };
    let parens = own < ctx;
    if parens {
        f.write_str("(")?;
    }
    match e {
        Expression::Constant(v) => write!(f, "{v}")?,
        Expression::Variable(name) => f.write_str(name)?,
        Expression::Negation(child) => {
            f.write_str("!")?;
            write_expr(child, f, Precedence::Neg)?;
        }
        Expression::Conjunction(children) => {
            for (i, child) in children.iter().enumerate() {
                if i > 0 {
                    f.write_str(" & ")?;
                }
                write_expr(child, f, Precedence::And)?;
            }
        }
        Expression::Disjunction(children) => {
            for (i, child) in children.iter().enumerate() {
                if i > 0 {
                    f.write_str(" | ")?;
                }
                write_expr(child, f, Precedence::Or)?;
            }
        }
    }
    if parens {
        f.write_str(")")?;
    }
    Ok(())
}
