//! Recipe files: parenthesized construction pipelines with ingredient leaves.
//!
//! Grammar (`.rcp`, `#` comments):
//!
//! ```text
//! expr   := '(' op arg* ')'
//! arg    := expr | key '=' value | integer | word
//! op     := wfc_inflate | wfc_inflate_dgdd | fill_holes | adjoin
//!         | fill_group | inflate_uniform | remove_parallel_class
//!         | td | rgdd | catalog | search | file
//! ```
//!
//! Leaves: `(td 4 3)`, `(rgdd 4 4)`, `(catalog 4^5_10^2)`, `(search 3^5)`,
//! `(file path.gddx)`. Operators take their main design as the first
//! expression argument; `fill=(...)` arguments feed extra ingredients into
//! the library for the enclosing operator; `weights=const 3` or
//! `weights=(w0 w1 ...)` select inflation weights. `adjoin` is hole filling
//! under the name the prose pipelines use.
//!
//! Example (the 12^4 3^1 pipeline):
//!
//! ```text
//! (fill_holes
//!   (wfc_inflate_dgdd (td 4 3) h=1 u=4 (remove_parallel_class (rgdd 4 4) 0))
//!   m=3 fill=(search 3^4_3^1))
//! ```

use std::fmt;
use std::sync::Arc;

use crate::constructions::{self, DesignLibrary, Source};
use crate::design::{Design, GroupType};
use crate::error::{Error, Result};
use crate::gddx;
use crate::search::{self, SearchOutcome};

/// Parsed recipe node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recipe {
    Apply { op: String, args: Vec<Arg> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Expr(Recipe),
    Named { key: String, value: Value },
    Int(usize),
    Word(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(usize),
    Word(String),
    Expr(Recipe),
    /// `weights=const N` (`const` then the factor) parses into this.
    ConstMarker,
    List(Vec<usize>),
}

/// Where a constructed design came from, as a printable tree.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub label: String,
    pub children: Vec<Provenance>,
}

impl Provenance {
    fn leaf(label: impl Into<String>) -> Provenance {
        Provenance {
            label: label.into(),
            children: Vec::new(),
        }
    }

    fn render(&self, indent: usize, out: &mut String) {
        out.push_str(&"  ".repeat(indent));
        out.push_str(&self.label);
        out.push('\n');
        for c in &self.children {
            c.render(indent + 1, out);
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(0, &mut s);
        write!(f, "{}", s.trim_end())
    }
}

// ---------------------------------------------------------------------------
// parsing

pub fn parse(text: &str) -> Result<Recipe> {
    let cleaned: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join(" ");
    let mut tokens = tokenize(&cleaned)?;
    tokens.reverse(); // pop from the back
    let recipe = parse_expr(&mut tokens)?;
    if let Some(t) = tokens.pop() {
        return Err(syntax(format!("trailing input {t:?}")));
    }
    Ok(recipe)
}

fn syntax(msg: String) -> Error {
    Error::Syntax {
        file: "<recipe>".into(),
        line: 0,
        msg,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Word(String),
    KeyEq(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut word = String::new();
    for c in text.chars() {
        match c {
            '(' | ')' => {
                if !word.is_empty() {
                    out.push(Token::Word(std::mem::take(&mut word)));
                }
                out.push(if c == '(' { Token::Open } else { Token::Close });
            }
            c if c.is_whitespace() => {
                if !word.is_empty() {
                    out.push(Token::Word(std::mem::take(&mut word)));
                }
            }
            '=' => {
                if word.is_empty() {
                    return Err(syntax("dangling '='".into()));
                }
                out.push(Token::KeyEq(std::mem::take(&mut word)));
            }
            _ => word.push(c),
        }
    }
    if !word.is_empty() {
        out.push(Token::Word(word));
    }
    Ok(out)
}

fn parse_expr(tokens: &mut Vec<Token>) -> Result<Recipe> {
    match tokens.pop() {
        Some(Token::Open) => {}
        other => return Err(syntax(format!("expected '(', got {other:?}"))),
    }
    let op = match tokens.pop() {
        Some(Token::Word(w)) => w,
        other => return Err(syntax(format!("expected operator, got {other:?}"))),
    };
    let mut args = Vec::new();
    loop {
        match tokens.last() {
            None => return Err(syntax("unexpected end of recipe".into())),
            Some(Token::Close) => {
                tokens.pop();
                return Ok(Recipe::Apply { op, args });
            }
            Some(Token::Open) => args.push(Arg::Expr(parse_expr(tokens)?)),
            Some(Token::Word(_)) => {
                if let Some(Token::Word(w)) = tokens.pop() {
                    match w.parse::<usize>() {
                        Ok(n) => args.push(Arg::Int(n)),
                        Err(_) => args.push(Arg::Word(w)),
                    }
                }
            }
            Some(Token::KeyEq(_)) => {
                let key = match tokens.pop() {
                    Some(Token::KeyEq(k)) => k,
                    _ => unreachable!(),
                };
                let value = parse_value(tokens, &key)?;
                args.push(Arg::Named { key, value });
            }
        }
    }
}

fn parse_value(tokens: &mut Vec<Token>, key: &str) -> Result<Value> {
    match tokens.pop() {
        Some(Token::Open) => {
            // either a sub-expression or, for weights, a numeric list
            if key == "weights" {
                let mut nums = Vec::new();
                loop {
                    match tokens.pop() {
                        Some(Token::Close) => return Ok(Value::List(nums)),
                        Some(Token::Word(w)) => {
                            nums.push(w.parse().map_err(|_| syntax(format!("bad weight {w:?}")))?)
                        }
                        other => return Err(syntax(format!("bad weight list item {other:?}"))),
                    }
                }
            }
            tokens.push(Token::Open);
            Ok(Value::Expr(parse_expr(tokens)?))
        }
        Some(Token::Word(w)) => {
            if w == "const" {
                return Ok(Value::ConstMarker);
            }
            match w.parse::<usize>() {
                Ok(n) => Ok(Value::Int(n)),
                Err(_) => Ok(Value::Word(w)),
            }
        }
        other => Err(syntax(format!("bad value for {key}: {other:?}"))),
    }
}

// ---------------------------------------------------------------------------
// evaluation

/// A constructed design with its provenance tree.
#[derive(Debug)]
pub struct Constructed {
    pub design: Design,
    pub provenance: Provenance,
}

/// Interpret a recipe against an ingredient library.
pub fn run(recipe: &Recipe, lib: &mut DesignLibrary) -> Result<Constructed> {
    let (design, provenance) = eval(recipe, lib)?;
    Ok(Constructed {
        design: design.as_ref().clone(),
        provenance,
    })
}

struct Ctx {
    exprs: Vec<(Arc<Design>, Provenance)>,
    ints: Vec<usize>,
    named: Vec<(String, Value)>,
}

fn eval(recipe: &Recipe, lib: &mut DesignLibrary) -> Result<(Arc<Design>, Provenance)> {
    let Recipe::Apply { op, args } = recipe;
    let wrap = |e: Error| e.in_op(op);

    // leaves take raw word arguments; evaluate subexpressions only for
    // operators
    match op.as_str() {
        "td" | "rgdd" | "catalog" | "search" | "file" => return eval_leaf(op, args, lib),
        _ => {}
    }

    let mut exprs: Vec<(Arc<Design>, Provenance)> = Vec::new();
    let mut ints: Vec<usize> = Vec::new();
    let mut named: Vec<(String, Value)> = Vec::new();
    for arg in args {
        match arg {
            Arg::Expr(e) => exprs.push(eval(e, lib)?),
            Arg::Int(n) => ints.push(*n),
            Arg::Word(w) => return Err(wrap(syntax(format!("unexpected word argument {w:?}")))),
            Arg::Named { key, value } => named.push((key.clone(), value.clone())),
        }
    }
    let mut ctx = Ctx { exprs, ints, named };

    // fill=(...) ingredients go into the library before the operator runs
    let mut fill_provs = Vec::new();
    let fills: Vec<Recipe> = ctx
        .named
        .iter()
        .filter(|(k, _)| k == "fill")
        .map(|(_, v)| match v {
            Value::Expr(e) => Ok(e.clone()),
            _ => Err(syntax("fill= expects a (...) expression".into())),
        })
        .collect::<Result<_>>()
        .map_err(&wrap)?;
    for expr in &fills {
        let (design, prov) = eval(expr, lib)?;
        lib.insert(design.as_ref().clone(), Source::Explicit)
            .map_err(&wrap)?;
        fill_provs.push(prov);
    }

    let params: Vec<(String, usize)> = ctx
        .named
        .iter()
        .filter_map(|(k, v)| match v {
            Value::Int(n) => Some((k.clone(), *n)),
            _ => None,
        })
        .collect();
    let int_param =
        |name: &str| -> Option<usize> { params.iter().find(|(k, _)| k == name).map(|(_, n)| *n) };

    let (design, label, mut children) = match op.as_str() {
        "wfc_inflate" => {
            let (master, mprov) = take_design(&mut ctx, op)?;
            let weights = weights_param(&ctx, master.v()).map_err(&wrap)?;
            let out = constructions::wfc_inflate(&master, &weights, lib).map_err(&wrap)?;
            (out, "wfc_inflate".to_string(), vec![mprov])
        }
        "wfc_inflate_dgdd" => {
            let (master, mprov) = take_design(&mut ctx, op)?;
            let (dgdd, dprov) = take_design(&mut ctx, op)?;
            let h = int_param("h").ok_or_else(|| wrap(syntax("needs h=".into())))?;
            let u = int_param("u").ok_or_else(|| wrap(syntax("needs u=".into())))?;
            let out = constructions::wfc_inflate_dgdd(&master, h, u, &dgdd).map_err(&wrap)?;
            (
                out,
                format!("wfc_inflate_dgdd h={h} u={u}"),
                vec![mprov, dprov],
            )
        }
        "fill_holes" | "adjoin" => {
            let (dgdd, dprov) = take_design(&mut ctx, op)?;
            let m = int_param("m").unwrap_or(0);
            let out = constructions::fill_holes(&dgdd, m, lib).map_err(&wrap)?;
            (out, format!("fill_holes m={m}"), vec![dprov])
        }
        "fill_group" => {
            let (design, dprov) = take_design(&mut ctx, op)?;
            let (filler, fprov) = take_design(&mut ctx, op)?;
            let index = int_param("index")
                .or_else(|| ctx.ints.first().copied())
                .ok_or_else(|| wrap(syntax("needs a group index".into())))?;
            let out = constructions::fill_group(&design, index, &filler).map_err(&wrap)?;
            (out, format!("fill_group index={index}"), vec![dprov, fprov])
        }
        "inflate_uniform" => {
            let (design, dprov) = take_design(&mut ctx, op)?;
            let r = int_param("r").ok_or_else(|| wrap(syntax("needs r=".into())))?;
            let out = constructions::inflate_uniform(&design, r, lib).map_err(&wrap)?;
            (out, format!("inflate_uniform r={r}"), vec![dprov])
        }
        "remove_parallel_class" => {
            let (design, dprov) = take_design(&mut ctx, op)?;
            let index = int_param("index")
                .or_else(|| ctx.ints.first().copied())
                .unwrap_or(0);
            let out = constructions::remove_parallel_class(&design, index).map_err(&wrap)?;
            (
                out,
                format!("remove_parallel_class index={index}"),
                vec![dprov],
            )
        }
        other => return Err(syntax(format!("unknown operator {other:?}"))),
    };
    children.extend(fill_provs);
    let label = format!("{label} -> {}", design.group_type());
    Ok((Arc::new(design), Provenance { label, children }))
}

fn take_design(ctx: &mut Ctx, op: &str) -> Result<(Arc<Design>, Provenance)> {
    if ctx.exprs.is_empty() {
        return Err(syntax(format!("{op} needs a design argument")).in_op(op));
    }
    Ok(ctx.exprs.remove(0))
}

fn weights_param(ctx: &Ctx, v: usize) -> Result<Vec<usize>> {
    let mut marker = false;
    let mut list: Option<Vec<usize>> = None;
    for (k, val) in &ctx.named {
        if k == "weights" {
            match val {
                Value::ConstMarker => marker = true,
                Value::List(ws) => list = Some(ws.clone()),
                Value::Int(n) => list = Some(vec![*n; v]),
                _ => return Err(syntax("weights= expects const N or a list".into())),
            }
        }
    }
    if marker {
        // the factor follows as a bare integer argument
        let n = ctx
            .ints
            .first()
            .copied()
            .ok_or_else(|| syntax("weights=const needs a factor".into()))?;
        return Ok(vec![n; v]);
    }
    list.ok_or_else(|| syntax("missing weights=".into()))
}

fn eval_leaf(op: &str, args: &[Arg], lib: &mut DesignLibrary) -> Result<(Arc<Design>, Provenance)> {
    let ints: Vec<usize> = args
        .iter()
        .filter_map(|a| match a {
            Arg::Int(n) => Some(*n),
            _ => None,
        })
        .collect();
    let words: Vec<&str> = args
        .iter()
        .filter_map(|a| match a {
            Arg::Word(w) => Some(w.as_str()),
            _ => None,
        })
        .collect();
    match op {
        "td" => {
            let [k, q] = ints.as_slice() else {
                return Err(syntax("td needs (td k q)".into()));
            };
            let d = crate::algebra::transversal_design(*k, *q).map_err(|e| e.in_op(op))?;
            let prov = Provenance::leaf(format!("td {k} {q} -> {}", d.group_type()));
            Ok((Arc::new(d), prov))
        }
        "rgdd" => {
            let [k, q] = ints.as_slice() else {
                return Err(syntax("rgdd needs (rgdd k q)".into()));
            };
            let d = crate::algebra::rgdd(*k, *q).map_err(|e| e.in_op(op))?;
            let prov = Provenance::leaf(format!("rgdd {k} {q} -> {}", d.group_type()));
            Ok((Arc::new(d), prov))
        }
        "catalog" => {
            let name = words
                .first()
                .ok_or_else(|| syntax("catalog needs a name".into()))?;
            let t = GroupType::parse(name).map_err(|e| e.in_op(op))?;
            // route through the library so the entry is cached and verified
            let d = lib.get(&t).map_err(|e| e.in_op(op))?;
            Ok((d, Provenance::leaf(format!("catalog {name}"))))
        }
        "search" => {
            let name = words
                .first()
                .ok_or_else(|| syntax("search needs a type".into()))?;
            let t = GroupType::parse(name).map_err(|e| e.in_op(op))?;
            let limits = lib.search_limits.clone();
            match search::solve_existence(&t, &limits).map_err(|e| e.in_op(op))? {
                SearchOutcome::Found(d) => {
                    let arc = lib.insert(d, Source::Search).map_err(|e| e.in_op(op))?;
                    Ok((arc, Provenance::leaf(format!("search {t}"))))
                }
                SearchOutcome::Exhausted { .. } => Err(Error::MissingIngredient(
                    t.to_string(),
                    " (proved nonexistent by exhaustive search)".into(),
                )
                .in_op(op)),
                SearchOutcome::Timeout { .. } => Err(Error::MissingIngredient(
                    t.to_string(),
                    " (search hit its resource limit)".into(),
                )
                .in_op(op)),
            }
        }
        "file" => {
            let path = words
                .first()
                .ok_or_else(|| syntax("file needs a path".into()))?;
            let d = gddx::read_file(std::path::Path::new(path)).map_err(|e| e.in_op(op))?;
            let prov = Provenance::leaf(format!("file {path} -> {}", d.group_type()));
            Ok((Arc::new(d), prov))
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lib() -> DesignLibrary {
        DesignLibrary::new()
    }

    #[test]
    fn parse_nested_recipe() {
        let text = "(fill_holes (wfc_inflate_dgdd (td 4 3) h=1 u=4 \
                    (remove_parallel_class (rgdd 4 4) 0)) m=3 fill=(search 3^4_3^1))";
        let r = parse(text).unwrap();
        let Recipe::Apply { op, args } = &r;
        assert_eq!(op, "fill_holes");
        assert_eq!(args.len(), 3);
    }

    #[test]
    fn pipeline_dgdd_hole_fill() {
        let text = "(fill_holes (wfc_inflate_dgdd (td 4 3) h=1 u=4 \
                    (remove_parallel_class (rgdd 4 4) 0)) m=3 fill=(search 3^4_3^1))";
        let out = run(&parse(text).unwrap(), &mut lib()).unwrap();
        assert_eq!(out.design.group_type().to_string(), "12^4 3^1");
        assert_eq!(out.design.blocks().len(), 168);
        let tree = out.provenance.to_string();
        assert!(tree.contains("fill_holes m=3"), "{tree}");
        assert!(tree.contains("search 3^5"), "{tree}");
    }

    #[test]
    fn pipeline_uniform_inflation() {
        let out = run(
            &parse("(inflate_uniform (search 3^5) r=3 fill=(td 4 3))").unwrap(),
            &mut lib(),
        )
        .unwrap();
        assert_eq!(out.design.group_type().to_string(), "9^5");
        assert_eq!(out.design.blocks().len(), 135);
    }

    #[test]
    fn pipeline_weighted_inflation() {
        let out = run(
            &parse("(wfc_inflate (td 5 5) weights=const 3 fill=(search 3^5))").unwrap(),
            &mut lib(),
        )
        .unwrap();
        assert_eq!(out.design.group_type().to_string(), "15^5");
        assert_eq!(out.design.blocks().len(), 375);
    }

    #[test]
    fn errors_carry_recipe_path() {
        let err = run(
            &parse("(inflate_uniform (td 4 3) r=6)").unwrap(),
            &mut lib(),
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("inflate_uniform"), "{msg}");
        assert!(msg.contains("6^4"), "{msg}");
    }

    #[test]
    fn rejects_unknown_ops_and_bad_weights() {
        assert!(parse("(frobnicate (td 4 3))")
            .map(|r| run(&r, &mut lib()))
            .unwrap()
            .is_err());
        let err = run(&parse("(wfc_inflate (td 4 3))").unwrap(), &mut lib()).unwrap_err();
        assert!(err.to_string().contains("weights"), "{err}");
    }
}
