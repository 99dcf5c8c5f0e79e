//! Problem and self-map files.
//!
//! One clause per line:
//!
//! ```text
//! var x1 in [-10, 10]
//! var x2 in [-10, 10]
//! minimize x1^2 + x1*x2 + x2^2 - 5*x2
//! eq x1 + x2 - 1
//! le -x1
//! le -x2
//! ```
//!
//! `le EXPR` means `EXPR <= 0`. `le A <= B`, `le A >= B` and `eq A = B` are
//! accepted and moved to one side. Map files replace the objective and
//! constraint clauses with one `map EXPR` line per variable.

use crate::applications::SelfMap;
use crate::error::{ParseError, Position, Result};
use crate::expr::{
    parse_expression, tokenize, variable_index, Expr, Keyword, Operator, Token, TokenKind,
};
use crate::problem::{BoxDomain, Problem};

/// Parsed but not yet validated contents of a problem or map file.
#[derive(Debug, Clone, Default)]
pub struct ProblemSource {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub objective: Option<Expr>,
    pub equalities: Vec<Expr>,
    pub inequalities: Vec<Expr>,
    pub maps: Vec<Expr>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum FileKind {
    Problem,
    Map,
}

pub fn parse_problem(source: &str) -> Result<Problem> {
    let parsed = parse_source(source, FileKind::Problem)?;
    let domain = BoxDomain::new(parsed.lower, parsed.upper)?;
    let objective = parsed
        .objective
        .ok_or_else(|| ParseError::syntax(end_of(source), "missing `minimize` clause"))?;
    Problem::new(domain, objective, parsed.equalities, parsed.inequalities)
}

pub fn parse_self_map(source: &str) -> Result<SelfMap> {
    let parsed = parse_source(source, FileKind::Map)?;
    let domain = BoxDomain::new(parsed.lower, parsed.upper)?;
    if parsed.maps.len() != domain.dim() {
        return Err(ParseError::syntax(
            end_of(source),
            format!(
                "expected {} `map` lines (one per variable), found {}",
                domain.dim(),
                parsed.maps.len()
            ),
        )
        .into());
    }
    SelfMap::new(parsed.maps, domain)
}

fn end_of(source: &str) -> Position {
    Position {
        line: source.lines().count().max(1),
        column: source.lines().last().map_or(0, |l| l.chars().count()) + 1,
    }
}

fn parse_source(source: &str, kind: FileKind) -> Result<ProblemSource, ParseError> {
    let tokens = tokenize(source)?;
    let mut out = ProblemSource::default();
    let mut seen_clause = false;

    for line in tokens.chunk_by(|a, b| a.position.line == b.position.line) {
        let head = &line[0];
        let rest = &line[1..];
        let TokenKind::Keyword(keyword) = head.kind else {
            return Err(ParseError::syntax(
                head.position,
                format!("expected a clause keyword, found {:?}", head.lexeme),
            ));
        };
        let arity = out.lower.len();
        match (keyword, kind) {
            (Keyword::Var, _) => {
                if seen_clause {
                    return Err(ParseError::syntax(
                        head.position,
                        "`var` declarations must precede all other clauses",
                    ));
                }
                let (lo, hi) = parse_var_line(head, rest, arity)?;
                out.lower.push(lo);
                out.upper.push(hi);
            }
            (Keyword::Minimize, FileKind::Problem) => {
                seen_clause = true;
                require_vars(head, arity)?;
                if out.objective.is_some() {
                    return Err(ParseError::syntax(
                        head.position,
                        "duplicate `minimize` clause",
                    ));
                }
                out.objective = Some(parse_expression(rest, arity)?);
            }
            (Keyword::Eq, FileKind::Problem) => {
                seen_clause = true;
                require_vars(head, arity)?;
                out.equalities
                    .push(parse_relation(head, rest, arity, Relation::Eq)?);
            }
            (Keyword::Le, FileKind::Problem) => {
                seen_clause = true;
                require_vars(head, arity)?;
                out.inequalities
                    .push(parse_relation(head, rest, arity, Relation::Le)?);
            }
            (Keyword::Map, FileKind::Map) => {
                seen_clause = true;
                require_vars(head, arity)?;
                out.maps.push(parse_expression(rest, arity)?);
            }
            _ => {
                let what = if kind == FileKind::Map {
                    "map"
                } else {
                    "problem"
                };
                return Err(ParseError::syntax(
                    head.position,
                    format!("`{}` is not a valid clause in a {what} file", head.lexeme),
                ));
            }
        }
    }
    if out.lower.is_empty() {
        return Err(ParseError::syntax(end_of(source), "no `var` declarations"));
    }
    Ok(out)
}

fn require_vars(head: &Token, arity: usize) -> Result<(), ParseError> {
    if arity == 0 {
        Err(ParseError::syntax(
            head.position,
            "clause appears before any `var` declaration",
        ))
    } else {
        Ok(())
    }
}

fn parse_var_line(head: &Token, rest: &[Token], declared: usize) -> Result<(f64, f64), ParseError> {
    let mut cursor = Cursor {
        tokens: rest,
        pos: 0,
        anchor: head.position,
    };
    let name = cursor.next("variable name")?;
    if name.kind != TokenKind::Identifier {
        return Err(ParseError::syntax(
            name.position,
            format!("expected variable name, found {:?}", name.lexeme),
        ));
    }
    match variable_index(&name.lexeme) {
        Some(k) if k <= declared => {
            return Err(ParseError::syntax(
                name.position,
                format!("duplicate variable {}", name.lexeme),
            ))
        }
        Some(k) if k == declared + 1 => {}
        _ => {
            return Err(ParseError::syntax(
                name.position,
                format!(
                    "expected x{}, found {:?} (variables are declared in order)",
                    declared + 1,
                    name.lexeme
                ),
            ))
        }
    }
    cursor.expect(TokenKind::Keyword(Keyword::In), "`in`")?;
    cursor.expect(TokenKind::LeftBracket, "`[`")?;
    let lo = cursor.signed_number()?;
    cursor.expect(TokenKind::Comma, "`,`")?;
    let hi = cursor.signed_number()?;
    cursor.expect(TokenKind::RightBracket, "`]`")?;
    if let Some(t) = cursor.tokens.get(cursor.pos) {
        return Err(ParseError::syntax(
            t.position,
            format!("unexpected {:?} after bounds", t.lexeme),
        ));
    }
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(ParseError::syntax(
            name.position,
            format!("empty interval [{lo}, {hi}]"),
        ));
    }
    Ok((lo, hi))
}

struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
    anchor: Position,
}

impl<'a> Cursor<'a> {
    fn next(&mut self, what: &str) -> Result<&'a Token, ParseError> {
        let t = self.tokens.get(self.pos).ok_or_else(|| {
            let at = self.tokens.last().map_or(self.anchor, |t| t.position);
            ParseError::syntax(at, format!("line ends before {what}"))
        })?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<(), ParseError> {
        let t = self.next(what)?;
        if t.kind == kind {
            Ok(())
        } else {
            Err(ParseError::syntax(
                t.position,
                format!("expected {what}, found {:?}", t.lexeme),
            ))
        }
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        let mut sign = 1.0;
        let mut t = self.next("a number")?;
        if let TokenKind::Operator(op @ (Operator::Minus | Operator::Plus)) = t.kind {
            if op == Operator::Minus {
                sign = -1.0;
            }
            t = self.next("a number")?;
        }
        match t.kind {
            TokenKind::Number(v) => Ok(sign * v),
            _ => Err(ParseError::syntax(
                t.position,
                format!("expected a number, found {:?}", t.lexeme),
            )),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Relation {
    Eq,
    Le,
}

fn parse_relation(
    head: &Token,
    rest: &[Token],
    arity: usize,
    relation: Relation,
) -> Result<Expr, ParseError> {
    let comparisons: Vec<usize> = rest
        .iter()
        .enumerate()
        .filter(|(_, t)| {
            matches!(
                t.kind,
                TokenKind::Operator(Operator::Equals | Operator::LessEq | Operator::GreaterEq)
            )
        })
        .map(|(i, _)| i)
        .collect();
    match comparisons.as_slice() {
        [] => parse_expression(rest, arity),
        [i] => {
            let op_token = &rest[*i];
            let TokenKind::Operator(op) = op_token.kind else {
                unreachable!()
            };
            let allowed = match relation {
                Relation::Eq => op == Operator::Equals,
                Relation::Le => op != Operator::Equals,
            };
            if !allowed {
                return Err(ParseError::syntax(
                    op_token.position,
                    format!("`{op}` is not allowed in a `{}` clause", head.lexeme),
                ));
            }
            let lhs = parse_expression(&rest[..*i], arity)?;
            let rhs = parse_expression(&rest[i + 1..], arity)?;
            Ok(if op == Operator::GreaterEq {
                rhs - lhs
            } else {
                lhs - rhs
            })
        }
        [_, second, ..] => Err(ParseError::syntax(
            rest[*second].position,
            "at most one comparison per clause",
        )),
    }
}
