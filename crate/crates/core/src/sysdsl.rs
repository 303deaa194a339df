//! The `.dop` text format: declarations plus named systems of linear
//! differential equations.
//!
//! ```text
//! vars t; params g l1 l2; unknowns x th1 th2;
//! system p {
//!   eq: d[t,t]x + l1*d[t,t]th1 + g*th1;
//!   eq: d[t,t]x + l2*d[t,t]th2 + g*th2;
//! }
//! ```
//!
//! Higher derivatives use repetition (`d[t,t]`), coefficients are rational
//! functions of the declared vars and params with `+ - * / ^` and
//! parentheses, and number literals are integers (rationals via `/`).
//! Every error carries the line/column of the offending token.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::catalog::SystemDef;
use crate::error::{EngineError, Result};
use crate::ops::{deriv_deg, DiffOp, OpMatrix};
use crate::report::{MatrixJson, SystemJson};
use crate::scalars::{RationalFunction, VarContext};

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut it = text.chars().peekable();
    while let Some(&c) = it.peek() {
        if c == '\n' {
            it.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            it.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&c2) = it.peek() {
                if c2 == '\n' {
                    break;
                }
                it.next();
                col += 1;
            }
            continue;
        }
        let start = col;
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c2) = it.peek() {
                if c2.is_ascii_alphanumeric() || c2 == '_' {
                    s.push(c2);
                    it.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Ident(s),
                line,
                col: start,
            });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c2) = it.peek() {
                if c2.is_ascii_digit() {
                    s.push(c2);
                    it.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digit string")),
                line,
                col: start,
            });
        } else if ";{}[](),+-*/^:".contains(c) {
            it.next();
            col += 1;
            out.push(Token {
                tok: Tok::Sym(c),
                line,
                col: start,
            });
        } else {
            return Err(EngineError::Parse {
                line,
                col,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

/// A parsed `.dop` file: shared declarations and the systems built on them.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub vars: Vec<String>,
    pub params: Vec<String>,
    pub unknowns: Vec<String>,
    pub systems: Vec<SystemDef>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

const MAX_EXPONENT: u32 = 64;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.tok)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or_else(|| self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(EngineError::Parse {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == c => {
                self.bump();
                Ok(())
            }
            Some(t) => self.err(format!("expected {c:?}, found {t:?}")),
            None => self.err(format!("expected {c:?}, found end of input")),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Some(Token {
                    tok: Tok::Ident(s), ..
                }) = self.bump()
                else {
                    unreachable!()
                };
                Ok(s)
            }
            Some(t) => self.err(format!("expected {what}, found {t:?}")),
            None => self.err(format!("expected {what}, found end of input")),
        }
    }

    fn at_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Tok::Sym(s)) if *s == c)
    }
}

struct Decls {
    vars: Vec<String>,
    params: Vec<String>,
    unknowns: Vec<String>,
    ctx: Arc<VarContext>,
}

impl Decls {
    fn unknown_index(&self, name: &str) -> Option<usize> {
        self.unknowns.iter().position(|u| u == name)
    }
}

/// Parse a `.dop` file and return its systems in declaration order.
pub fn parse(text: &str) -> Result<Vec<SystemDef>> {
    parse_file(text).map(|f| f.systems)
}

/// Parse a `.dop` file keeping the shared declarations.
pub fn parse_file(text: &str) -> Result<SourceFile> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };

    let mut vars: Vec<String> = Vec::new();
    let mut params: Vec<String> = Vec::new();
    let mut unknowns: Vec<String> = Vec::new();
    loop {
        let kw = match p.peek() {
            Some(Tok::Ident(s)) if s == "vars" || s == "params" || s == "unknowns" => s.clone(),
            _ => break,
        };
        p.bump();
        let bucket: &mut Vec<String> = match kw.as_str() {
            "vars" => &mut vars,
            "params" => &mut params,
            _ => &mut unknowns,
        };
        let mut any = false;
        while matches!(p.peek(), Some(Tok::Ident(_))) {
            let name = p.ident("identifier")?;
            if matches!(name.as_str(), "vars" | "params" | "unknowns" | "system" | "eq") {
                return p.err(format!("reserved word {name:?} used as a name"));
            }
            bucket.push(name);
            any = true;
        }
        if !any {
            return p.err(format!("empty {kw} declaration"));
        }
        p.expect_sym(';')?;
    }

    // cross-bucket uniqueness
    {
        let mut seen = std::collections::BTreeSet::new();
        for name in vars.iter().chain(params.iter()).chain(unknowns.iter()) {
            if !seen.insert(name.clone()) {
                return p.err(format!("duplicate declaration of {name:?}"));
            }
        }
    }
    if unknowns.is_empty() {
        return p.err("no unknowns declared");
    }
    let ctx = VarContext::new(vars.clone(), params.clone()).map_err(|e| EngineError::Parse {
        line: 1,
        col: 1,
        msg: e.to_string(),
    })?;
    let decls = Decls {
        vars,
        params,
        unknowns,
        ctx,
    };

    let mut systems: Vec<SystemDef> = Vec::new();
    while p.peek().is_some() {
        let sys = parse_system(&mut p, &decls)?;
        if systems.iter().any(|s| s.name == sys.name) {
            return p.err(format!("duplicate system name {:?}", sys.name));
        }
        systems.push(sys);
    }
    if systems.is_empty() {
        return p.err("expected at least one system");
    }
    Ok(SourceFile {
        vars: decls.vars,
        params: decls.params,
        unknowns: decls.unknowns,
        systems,
    })
}

fn parse_system(p: &mut Parser, decls: &Decls) -> Result<SystemDef> {
    match p.peek() {
        Some(Tok::Ident(s)) if s == "system" => {
            p.bump();
        }
        _ => return p.err("expected \"system\""),
    }
    let name = p.ident("system name")?;
    p.expect_sym('{')?;
    let mut rows: Vec<Vec<DiffOp>> = Vec::new();
    loop {
        match p.peek() {
            Some(Tok::Ident(s)) if s == "eq" => {
                p.bump();
                p.expect_sym(':')?;
                let row = parse_equation(p, decls)?;
                p.expect_sym(';')?;
                rows.push(row);
            }
            Some(Tok::Sym('}')) => {
                p.bump();
                break;
            }
            Some(t) => return p.err(format!("expected \"eq:\" or '}}', found {t:?}")),
            None => return p.err("unterminated system block"),
        }
    }
    if rows.is_empty() {
        return p.err("system has no equations");
    }
    let matrix = OpMatrix::from_rows(&decls.ctx, rows, decls.unknowns.len())
        .map_err(|e| {
            let (line, col) = p.here();
            EngineError::Parse {
                line,
                col,
                msg: e.to_string(),
            }
        })?;
    Ok(SystemDef {
        name,
        ctx: decls.ctx.clone(),
        unknowns: decls.unknowns.clone(),
        matrix,
        note: String::new(),
    })
}

fn parse_equation(p: &mut Parser, decls: &Decls) -> Result<Vec<DiffOp>> {
    let mut row = vec![DiffOp::zero(&decls.ctx); decls.unknowns.len()];
    let mut negate = false;
    if p.at_sym('-') {
        p.bump();
        negate = true;
    } else if p.at_sym('+') {
        p.bump();
    }
    loop {
        parse_term(p, decls, negate, &mut row)?;
        if p.at_sym('+') {
            p.bump();
            negate = false;
        } else if p.at_sym('-') {
            p.bump();
            negate = true;
        } else {
            break;
        }
    }
    Ok(row)
}

/// One additive term: optional scalar factors, optional derivative bracket,
/// then the unknown it acts on.
fn parse_term(p: &mut Parser, decls: &Decls, negate: bool, row: &mut [DiffOp]) -> Result<()> {
    let ctx = &decls.ctx;
    let mut coeff = if negate {
        RationalFunction::from_int(ctx, -1)
    } else {
        RationalFunction::one(ctx)
    };
    let mut divide_next = false;
    loop {
        match p.peek() {
            Some(Tok::Sym('*')) => {
                p.bump();
            }
            Some(Tok::Sym('/')) => {
                p.bump();
                if divide_next {
                    return p.err("repeated '/'");
                }
                divide_next = true;
            }
            Some(Tok::Int(_)) | Some(Tok::Sym('(')) => {
                let f = scalar_power(p, decls)?;
                coeff = apply_factor(p, &coeff, &f, &mut divide_next)?;
            }
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(name)) = p.peek().cloned() else {
                    unreachable!()
                };
                if name == "d" && matches!(p.peek2(), Some(Tok::Sym('['))) {
                    if divide_next {
                        return p.err("cannot divide by a derivative");
                    }
                    let mu = parse_dbracket(p, decls)?;
                    let uname = p.ident("unknown after derivative")?;
                    let Some(u) = decls.unknown_index(&uname) else {
                        return p.err(format!("{uname:?} is not a declared unknown"));
                    };
                    row[u] = row[u].add(&DiffOp::term(coeff, mu));
                    return Ok(());
                }
                if let Some(u) = decls.unknown_index(&name) {
                    if divide_next {
                        return p.err("cannot divide by an unknown");
                    }
                    p.bump();
                    row[u] = row[u].add(&DiffOp::term(coeff, DiffOp::zero_deriv(ctx)));
                    return Ok(());
                }
                if ctx.index_of(&name).is_some() {
                    let f = scalar_power(p, decls)?;
                    coeff = apply_factor(p, &coeff, &f, &mut divide_next)?;
                } else {
                    return p.err(format!("undeclared symbol {name:?}"));
                }
            }
            Some(t) => return p.err(format!("unexpected {t:?} in term")),
            None => return p.err("unexpected end of input in term"),
        }
    }
}

fn apply_factor(
    p: &Parser,
    coeff: &RationalFunction,
    f: &RationalFunction,
    divide_next: &mut bool,
) -> Result<RationalFunction> {
    if *divide_next {
        *divide_next = false;
        coeff
            .div(f)
            .map_err(|_| {
                let (line, col) = p.here();
                EngineError::Parse {
                    line,
                    col,
                    msg: "division by zero in coefficient".into(),
                }
            })
    } else {
        Ok(coeff.mul(f))
    }
}

/// `d[` ident ("," ident)* `]` with repetition counting multiplicity.
fn parse_dbracket(p: &mut Parser, decls: &Decls) -> Result<crate::ops::DerivExp> {
    p.bump(); // d
    p.expect_sym('[')?;
    let mut mu = DiffOp::zero_deriv(&decls.ctx);
    loop {
        let v = p.ident("differentiation variable")?;
        match decls.ctx.index_of(&v) {
            Some(i) if i < decls.ctx.n() => mu[i] += 1,
            _ => return p.err(format!("{v:?} is not a declared var")),
        }
        if p.at_sym(',') {
            p.bump();
        } else {
            break;
        }
    }
    p.expect_sym(']')?;
    Ok(mu)
}

// scalar expressions (inside parentheses, and single factors in terms)

fn scalar_expr(p: &mut Parser, decls: &Decls) -> Result<RationalFunction> {
    let mut acc = scalar_product(p, decls)?;
    loop {
        if p.at_sym('+') {
            p.bump();
            acc = acc.add(&scalar_product(p, decls)?);
        } else if p.at_sym('-') {
            p.bump();
            acc = acc.sub(&scalar_product(p, decls)?);
        } else {
            return Ok(acc);
        }
    }
}

fn scalar_product(p: &mut Parser, decls: &Decls) -> Result<RationalFunction> {
    let mut negate = false;
    while p.at_sym('-') {
        p.bump();
        negate = !negate;
    }
    let mut acc = scalar_power(p, decls)?;
    loop {
        if p.at_sym('*') {
            p.bump();
            acc = acc.mul(&scalar_power(p, decls)?);
        } else if p.at_sym('/') {
            p.bump();
            let f = scalar_power(p, decls)?;
            acc = apply_factor(p, &acc, &f, &mut true)?;
        } else {
            break;
        }
    }
    if negate {
        acc = acc.neg();
    }
    Ok(acc)
}

fn scalar_power(p: &mut Parser, decls: &Decls) -> Result<RationalFunction> {
    let base = scalar_primary(p, decls)?;
    if p.at_sym('^') {
        p.bump();
        let e = match p.peek() {
            Some(Tok::Int(k)) => k.clone(),
            _ => return p.err("expected integer exponent"),
        };
        p.bump();
        if e.is_negative() || e > BigInt::from(MAX_EXPONENT) {
            return p.err(format!("exponent out of range (0..={MAX_EXPONENT})"));
        }
        let k: u32 = e.try_into().expect("bounded above");
        let mut acc = RationalFunction::one(&decls.ctx);
        for _ in 0..k {
            acc = acc.mul(&base);
        }
        return Ok(acc);
    }
    Ok(base)
}

fn scalar_primary(p: &mut Parser, decls: &Decls) -> Result<RationalFunction> {
    match p.peek() {
        Some(Tok::Int(_)) => {
            let Some(Token { tok: Tok::Int(k), .. }) = p.bump() else {
                unreachable!()
            };
            Ok(RationalFunction::constant(
                &decls.ctx,
                BigRational::from_integer(k),
            ))
        }
        Some(Tok::Sym('(')) => {
            p.bump();
            let e = scalar_expr(p, decls)?;
            p.expect_sym(')')?;
            Ok(e)
        }
        Some(Tok::Ident(_)) => {
            let Some(Tok::Ident(name)) = p.peek().cloned() else {
                unreachable!()
            };
            if decls.unknown_index(&name).is_some() {
                return p.err(format!("unknown {name:?} not allowed inside a coefficient"));
            }
            match decls.ctx.index_of(&name) {
                Some(i) => {
                    p.bump();
                    Ok(RationalFunction::var(&decls.ctx, i))
                }
                None => p.err(format!("undeclared symbol {name:?}")),
            }
        }
        Some(t) => p.err(format!("unexpected {t:?} in coefficient")),
        None => p.err("unexpected end of input in coefficient"),
    }
}

// ---------------------------------------------------------------------------
// Printers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Dsl,
    Json,
    Text,
}

pub fn print(s: &SystemDef, format: Format) -> String {
    match format {
        Format::Dsl => print_dsl(s),
        Format::Json => {
            let j = SystemJson {
                name: s.name.clone(),
                vars: s.ctx.base_vars.clone(),
                params: s.ctx.params.clone(),
                unknowns: s.unknowns.clone(),
                matrix: MatrixJson::from_matrix(&s.matrix),
                note: s.note.clone(),
            };
            serde_json::to_string_pretty(&j).expect("serializable")
        }
        Format::Text => print_text(s),
    }
}

/// Render a system as a `.dop` file that parses back to the same matrix.
pub fn print_dsl(s: &SystemDef) -> String {
    let mut out = String::new();
    push_decl(&mut out, "vars", &s.ctx.base_vars);
    push_decl(&mut out, "params", &s.ctx.params);
    push_decl(&mut out, "unknowns", &s.unknowns);
    out.push_str(&format!("system {} {{\n", s.name));
    for i in 0..s.matrix.rows {
        out.push_str("  eq: ");
        out.push_str(&equation_string(s, i));
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}

fn print_text(s: &SystemDef) -> String {
    let mut out = format!("system {}", s.name);
    if !s.note.is_empty() {
        out.push_str(&format!("  ({})", s.note));
    }
    out.push('\n');
    out.push_str(&format!(
        "vars: {}   params: {}   unknowns: {}\n",
        s.ctx.base_vars.join(" "),
        s.ctx.params.join(" "),
        s.unknowns.join(" ")
    ));
    for i in 0..s.matrix.rows {
        out.push_str(&format!("  {} = 0\n", equation_string(s, i)));
    }
    out
}

fn push_decl(out: &mut String, kw: &str, names: &[String]) {
    if !names.is_empty() {
        out.push_str(&format!("{kw} {};\n", names.join(" ")));
    }
}

/// The left-hand side of equation `i`, in the syntax `parse` accepts.
pub fn equation_string(s: &SystemDef, i: usize) -> String {
    let mut parts: Vec<(bool, String)> = Vec::new(); // (negative, body)
    for j in 0..s.matrix.cols {
        let entry = s.matrix.at(i, j);
        let mut items: Vec<_> = entry.terms.iter().collect();
        items.sort_by(|(a, _), (b, _)| deriv_deg(b).cmp(&deriv_deg(a)).then_with(|| a.cmp(b)));
        for (mu, c) in items {
            let (neg, coeff_str) = match c.as_constant() {
                Some(q) => {
                    let mag = q.abs();
                    let cs = if mag == BigRational::from_integer(1.into()) {
                        String::new()
                    } else {
                        format!("{mag}*")
                    };
                    (q.is_negative(), cs)
                }
                None => (false, format!("({c})*")),
            };
            let mut body = coeff_str;
            let is_id = mu.iter().all(|&k| k == 0);
            if !is_id {
                body.push_str("d[");
                let mut first = true;
                for (vi, &k) in mu.iter().enumerate() {
                    for _ in 0..k {
                        if !first {
                            body.push(',');
                        }
                        first = false;
                        body.push_str(&s.ctx.base_vars[vi]);
                    }
                }
                body.push(']');
            } else if body.ends_with('*') {
                body.pop();
                if body.is_empty() {
                    body.push('1');
                }
                body.push('*');
            }
            body.push_str(&s.unknowns[j]);
            parts.push((neg, body));
        }
    }
    if parts.is_empty() {
        // a zero row still needs a parseable equation
        return format!("0*{}", s.unknowns[0]);
    }
    let mut out = String::new();
    for (k, (neg, body)) in parts.iter().enumerate() {
        if k == 0 {
            if *neg {
                out.push('-');
            }
        } else if *neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(body);
    }
    out
}

/// Feed `iterations` random mutations of a few well-formed seed inputs to the
/// parser and return how many parsed cleanly.  Any panic propagates — the
/// point is that malformed input must yield structured errors instead.
pub fn fuzz_parse(iterations: usize, seed: u64) -> usize {
    use rand::{Rng, SeedableRng};
    let seeds = [
        "vars t; params g l1 l2; unknowns x th1 th2; system p { eq: d[t,t]x + l1*d[t,t]th1 + g*th1; }",
        "vars x1 x2; unknowns u; system z { eq: d[x1]u; }",
        "vars x; params c; unknowns a b; system v { eq: (1 - c*x^2)*d[x]a - c*b; }",
    ];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut ok = 0usize;
    for _ in 0..iterations {
        let mut s: Vec<u8> = seeds[rng.gen_range(0..seeds.len())].bytes().collect();
        for _ in 0..rng.gen_range(1..8) {
            match rng.gen_range(0..3) {
                0 if !s.is_empty() => {
                    let i = rng.gen_range(0..s.len());
                    s.remove(i);
                }
                1 => {
                    let i = rng.gen_range(0..=s.len());
                    s.insert(i, rng.gen_range(b' '..b'~'));
                }
                _ if !s.is_empty() => {
                    let i = rng.gen_range(0..s.len());
                    s[i] = rng.gen_range(b' '..b'~');
                }
                _ => {}
            }
        }
        let text = String::from_utf8_lossy(&s);
        if parse(&text).is_ok() {
            ok += 1;
        }
    }
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, MetricSpec};
    use num_bigint::BigInt;

    fn parse_one(text: &str) -> SystemDef {
        let mut systems = parse(text).unwrap();
        assert_eq!(systems.len(), 1);
        systems.pop().unwrap()
    }

    #[test]
    fn pendulum_text_matches_catalog() {
        let s = parse_one(
            "vars t; params g l1 l2; unknowns x th1 th2; \
             system p { eq: d[t,t]x + l1*d[t,t]th1 + g*th1; \
                        eq: d[t,t]x + l2*d[t,t]th2 + g*th2; }",
        );
        let cat = catalog::double_pendulum(false);
        assert_eq!(s.matrix, cat.matrix);
    }

    #[test]
    fn single_derivative() {
        let s = parse_one("vars x1 x2; unknowns u; system z { eq: d[x1]u; }");
        assert_eq!(s.matrix.rows, 1);
        assert_eq!(s.matrix.at(0, 0), &DiffOp::d(&s.ctx, 0));
    }

    #[test]
    fn variable_coefficients() {
        let s = parse_one(
            "vars x1 x2; unknowns xi1 xi2 xi3; \
             system m { eq: x1^2*d[x1]xi1 + xi2; }",
        );
        let x1 = RationalFunction::var(&s.ctx, 0);
        let want = DiffOp::d(&s.ctx, 0).scale(&x1.mul(&x1));
        assert_eq!(s.matrix.at(0, 0), &want);
        assert_eq!(s.matrix.at(0, 1), &DiffOp::one(&s.ctx));
    }

    #[test]
    fn rational_and_parenthesized_coefficients() {
        let s = parse_one(
            "vars x; params a; unknowns u; \
             system r { eq: 1/2*d[x]u + (a^2 - 1)/(a + 2)*u - 3*u; }",
        );
        assert_eq!(s.matrix.rows, 1);
        // spot-check the order-0 coefficient at a = 3: (9-1)/5 - 3 = -7/5
        let at3 = s
            .matrix
            .at(0, 0)
            .specialize(1, &BigRational::new(BigInt::from(3), BigInt::from(1)))
            .unwrap();
        let zero_mu = DiffOp::zero_deriv(&at3.ctx);
        let c0 = at3.terms.get(&zero_mu).unwrap().as_constant().unwrap();
        assert_eq!(c0, BigRational::new(BigInt::from(-7), BigInt::from(5)));
    }

    #[test]
    fn errors_carry_spans() {
        let e = parse("vars x; unknowns u; system s { eq: d[y]u; }").unwrap_err();
        match e {
            EngineError::Parse { line, col, msg } => {
                assert_eq!(line, 1);
                assert!(col > 30, "col {col}");
                assert!(msg.contains("\"y\""), "{msg}");
            }
            other => panic!("wrong error {other:?}"),
        }
        assert!(parse("vars x; unknowns u; system s { eq: 3; }").is_err());
        assert!(parse("vars x; unknowns u; system s { eq: u + w; }").is_err());
        assert!(parse("unknowns u; system s { eq: u; } system s { eq: u; }").is_err());
    }

    #[test]
    fn round_trip_catalog() {
        let budget = crate::groebner::Budget::default();
        let mut systems = vec![
            catalog::killing(&MetricSpec::euclidean(3)),
            catalog::cauchy(&MetricSpec::euclidean(2)),
            catalog::airy(),
            catalog::beltrami(false),
            catalog::double_pendulum(false),
            catalog::double_pendulum(true),
            catalog::vessiot(None),
            catalog::vessiot(Some(BigRational::from_integer(BigInt::from(1)))),
            catalog::ricci(&MetricSpec::minkowski(4)),
            catalog::einstein(&MetricSpec::minkowski(4)),
        ];
        systems.push(catalog::riemann(&MetricSpec::euclidean(2), &budget).unwrap());
        for s in &systems {
            let text = print_dsl(s);
            let back = parse(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", s.name));
            assert_eq!(back.len(), 1, "{}", s.name);
            assert_eq!(back[0].matrix, s.matrix, "{}\n{text}", s.name);
            assert_eq!(back[0].unknowns, s.unknowns, "{}", s.name);
        }
    }

    #[test]
    fn json_and_text_render() {
        let s = catalog::airy();
        let j = print(&s, Format::Json);
        let v: serde_json::Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["matrix"]["rows"], 3);
        let t = print(&s, Format::Text);
        assert!(t.contains("d[x2,x2]"), "{t}");
    }

    #[test]
    fn fuzzed_inputs_never_panic() {
        fuzz_parse(1000, 17);
    }
}
