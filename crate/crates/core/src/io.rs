//! File formats: TGF and APX for plain frameworks, `adfx` for generalized
//! condition networks, JSON for splitters and results, DOT for graph dumps.

use indexmap::IndexMap;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::blocks::Block;
use crate::error::{Error, Result};
use crate::framework::{Allocator, ArgumentationFramework, Labeling, Network};
use crate::solver::is_reserved_name;
use crate::tri::{is_identifier, parse_expression, Expression};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn check_name(name: &str, line: usize) -> Result<()> {
    if !is_identifier(name) {
        return Err(parse_err(line, format!("invalid argument name `{name}`")));
    }
    if is_reserved_name(name) {
        return Err(parse_err(
            line,
            format!("argument name `{name}` uses the reserved generated-variable prefix"),
        ));
    }
    Ok(())
}

/// Trivial graph format: one argument per line, a `#` separator, then
/// `attacker target` lines. Anything after an argument's first token is
/// treated as a label and ignored.
pub fn parse_tgf(text: &str) -> Result<ArgumentationFramework> {
    let mut args: Vec<String> = Vec::new();
    let mut attacks: Vec<(String, String)> = Vec::new();
    let mut past_separator = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "#" {
            if past_separator {
                return Err(parse_err(line_no, "second `#` separator"));
            }
            past_separator = true;
            continue;
        }
        if !past_separator {
            let name = line.split_whitespace().next().expect("nonempty").to_string();
            check_name(&name, line_no)?;
            if args.contains(&name) {
                return Err(parse_err(line_no, format!("duplicate argument `{name}`")));
            }
            args.push(name);
        } else {
            let mut it = line.split_whitespace();
            let (src, dst) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => (a.to_string(), b.to_string()),
                _ => return Err(parse_err(line_no, "expected `attacker target`")),
            };
            for name in [&src, &dst] {
                if !args.contains(name) {
                    return Err(parse_err(
                        line_no,
                        format!("attack references undeclared argument `{name}`"),
                    ));
                }
            }
            attacks.push((src, dst));
        }
    }
    ArgumentationFramework::new(args, attacks)
}

pub fn to_tgf(f: &ArgumentationFramework) -> String {
    let mut out = String::new();
    for a in f.args() {
        out.push_str(a);
        out.push('\n');
    }
    out.push_str("#\n");
    for (src, dst) in f.attacks() {
        out.push_str(&format!("{src} {dst}\n"));
    }
    out
}

// Splits `arg(a). att(a,b).`-style text into (line, statement) pairs.
fn statements(text: &str) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("%") || line.starts_with("//") {
            continue;
        }
        for stmt in line.split('.') {
            let stmt = stmt.trim();
            if !stmt.is_empty() {
                out.push((line_no, stmt.to_string()));
            }
        }
        if !line.ends_with('.') {
            return Err(parse_err(line_no, "statement does not end with `.`"));
        }
    }
    Ok(out)
}

// `directive(inner)` -> inner, or None when the head does not match.
fn directive_body<'a>(stmt: &'a str, head: &str) -> Option<&'a str> {
    let rest = stmt.strip_prefix(head)?.trim_start();
    rest.strip_prefix('(')?.trim().strip_suffix(')').map(str::trim)
}

/// ASPARTIX-style format: `arg(name).` and `att(attacker, target).`.
pub fn parse_apx(text: &str) -> Result<ArgumentationFramework> {
    let mut args: Vec<String> = Vec::new();
    let mut attacks: Vec<(usize, String, String)> = Vec::new();
    for (line_no, stmt) in statements(text)? {
        if let Some(name) = directive_body(&stmt, "arg") {
            check_name(name, line_no)?;
            if args.contains(&name.to_string()) {
                return Err(parse_err(line_no, format!("duplicate argument `{name}`")));
            }
            args.push(name.to_string());
        } else if let Some(body) = directive_body(&stmt, "att") {
            let parts: Vec<&str> = body.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(parse_err(line_no, "expected `att(attacker, target)`"));
            }
            attacks.push((line_no, parts[0].to_string(), parts[1].to_string()));
        } else {
            return Err(parse_err(line_no, format!("unknown directive `{stmt}`")));
        }
    }
    for (line_no, src, dst) in &attacks {
        for name in [src, dst] {
            if !args.contains(name) {
                return Err(parse_err(
                    *line_no,
                    format!("attack references undeclared argument `{name}`"),
                ));
            }
        }
    }
    ArgumentationFramework::new(
        args,
        attacks.into_iter().map(|(_, a, b)| (a, b)).collect(),
    )
}

pub fn to_apx(f: &ArgumentationFramework) -> String {
    let mut out = String::new();
    for a in f.args() {
        out.push_str(&format!("arg({a}).\n"));
    }
    for (src, dst) in f.attacks() {
        out.push_str(&format!("att({src},{dst}).\n"));
    }
    out
}

/// Generalized networks: `arg(name).` plus `cond(name, <expression>).` where
/// the expression uses `!`, `&`, `|` and the constants `T`, `F`, `U` over
/// argument names. A missing condition defaults to `T` (unattacked).
pub fn parse_adfx(text: &str) -> Result<Network> {
    let mut args: Vec<String> = Vec::new();
    let mut conditions: IndexMap<String, (usize, Expression)> = IndexMap::new();
    for (line_no, stmt) in statements(text)? {
        if let Some(name) = directive_body(&stmt, "arg") {
            check_name(name, line_no)?;
            if args.contains(&name.to_string()) {
                return Err(parse_err(line_no, format!("duplicate argument `{name}`")));
            }
            args.push(name.to_string());
        } else if let Some(body) = directive_body(&stmt, "cond") {
            let (name, expr_text) = body
                .split_once(',')
                .ok_or_else(|| parse_err(line_no, "expected `cond(name, expression)`"))?;
            let name = name.trim().to_string();
            let expr = parse_expression(expr_text.trim())
                .map_err(|e| parse_err(line_no, format!("in condition of `{name}`: {e}")))?;
            if conditions.insert(name.clone(), (line_no, expr)).is_some() {
                return Err(parse_err(
                    line_no,
                    format!("duplicate condition for `{name}`"),
                ));
            }
        } else {
            return Err(parse_err(line_no, format!("unknown directive `{stmt}`")));
        }
    }
    for (name, (line_no, expr)) in &conditions {
        if !args.contains(name) {
            return Err(parse_err(
                *line_no,
                format!("condition for undeclared argument `{name}`"),
            ));
        }
        if let Some(unknown) = expr.vars().iter().find(|v| !args.contains(v)) {
            return Err(parse_err(
                *line_no,
                format!("condition of `{name}` references undeclared argument `{unknown}`"),
            ));
        }
    }
    let full: IndexMap<String, Expression> = args
        .iter()
        .map(|a| {
            let cond = conditions
                .get(a)
                .map(|(_, e)| e.clone())
                .unwrap_or_else(Expression::tru);
            (a.clone(), cond)
        })
        .collect();
    Network::new(args, full)
}

pub fn to_adfx(n: &Network) -> String {
    let mut out = String::new();
    for a in n.args() {
        out.push_str(&format!("arg({a}).\n"));
    }
    for (a, cond) in n.conditions() {
        if cond != &Expression::tru() {
            out.push_str(&format!("cond({a}, {cond}).\n"));
        }
    }
    out
}

#[derive(Deserialize)]
struct SplitterDoc {
    blocks: Vec<BlockDoc>,
}

#[derive(Deserialize)]
struct BlockDoc {
    #[serde(default)]
    actual: Vec<String>,
    #[serde(default)]
    variable: Vec<String>,
    #[serde(default)]
    attacks: Option<Vec<(String, String)>>,
    #[serde(default)]
    conditions: Option<IndexMap<String, String>>,
}

/// Splitter files: `{"blocks": [{"actual": [...], "variable": [...],
/// "attacks": [[a, b], ...]}, ...]}`; a block may carry `conditions`
/// (argument to expression string) instead of `attacks`.
pub fn parse_splitter_json(text: &str) -> Result<Vec<Block>> {
    let doc: SplitterDoc = serde_json::from_str(text)
        .map_err(|e| parse_err(e.line(), format!("splitter JSON: {e}")))?;
    let mut blocks = Vec::new();
    for (i, b) in doc.blocks.into_iter().enumerate() {
        for name in b.actual.iter().chain(b.variable.iter()) {
            check_name(name, 1).map_err(|_| {
                Error::Parse {
                    line: 1,
                    message: format!("block {i}: invalid argument name `{name}`"),
                }
            })?;
        }
        let block = match (b.attacks, b.conditions) {
            (Some(attacks), None) => Block::from_attacks(b.actual, b.variable, attacks)?,
            (None, Some(conditions)) => {
                let mut parsed = IndexMap::new();
                for (arg, text) in conditions {
                    let expr = parse_expression(&text).map_err(|e| Error::Parse {
                        line: 1,
                        message: format!("block {i}, condition of `{arg}`: {e}"),
                    })?;
                    parsed.insert(arg, expr);
                }
                Block::from_conditions(b.actual, b.variable, parsed)?
            }
            (None, None) => Block::from_attacks(b.actual, b.variable, Vec::new())?,
            (Some(_), Some(_)) => {
                return Err(parse_err(
                    1,
                    format!("block {i} carries both attacks and conditions"),
                ))
            }
        };
        blocks.push(block);
    }
    Ok(blocks)
}

pub fn labeling_json(l: &Labeling) -> Value {
    Value::Object(
        l.iter()
            .map(|(arg, label)| (arg.to_string(), Value::String(label.name().to_string())))
            .collect(),
    )
}

pub fn labelings_json<'a, I: IntoIterator<Item = &'a Labeling>>(ls: I) -> Value {
    Value::Array(ls.into_iter().map(labeling_json).collect())
}

pub fn allocator_json(e: &Allocator) -> Value {
    json!({
        "arguments": Value::Object(
            e.iter()
                .map(|(arg, expr)| (arg.to_string(), Value::String(expr.to_string())))
                .collect(),
        ),
        "allocation_variables": e.allocation_vars().into_iter().collect::<Vec<_>>(),
        "arity": e.arity(),
    })
}

pub fn allocator_from_json(v: &Value) -> Result<Allocator> {
    let entries = v
        .get("arguments")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err(1, "allocator JSON lacks an `arguments` object"))?;
    let mut pairs = Vec::new();
    for (arg, expr) in entries {
        let text = expr
            .as_str()
            .ok_or_else(|| parse_err(1, format!("allocation of `{arg}` is not a string")))?;
        pairs.push((arg.clone(), parse_expression(text)?));
    }
    Ok(Allocator::from_pairs(pairs))
}

/// Plain structural dump of the attack graph.
pub fn to_dot(f: &ArgumentationFramework) -> String {
    let mut out = String::from("digraph framework {\n");
    for a in f.args() {
        out.push_str(&format!("  \"{a}\";\n"));
    }
    for (src, dst) in f.attacks() {
        out.push_str(&format!("  \"{src}\" -> \"{dst}\";\n"));
    }
    out.push_str("}\n");
    out
}
