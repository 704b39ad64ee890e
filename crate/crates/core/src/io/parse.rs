//! Text syntax for rational functions, forms and form documents.
//!
//! Expressions use integer literals, identifiers, `+ - * / ^` and
//! parentheses; juxtaposition multiplies. In a form, `d<name>` is the
//! differential of a declared coordinate `<name>`, and `^` between two
//! forms is the wedge product.

use std::fmt;

use crate::algebra::{MPoly, RatFun, Rational};
use crate::error::{Error, Result};
use crate::forms::DForm;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(num_bigint::BigInt),
    Ident(String),
    Op(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column: col,
        message: message.into(),
    }
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Num(s.parse().expect("digits")),
                line,
                col,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line,
                col,
            });
        } else if "+-*/^()".contains(c) {
            out.push(Token {
                tok: Tok::Op(c),
                line,
                col,
            });
            i += 1;
        } else {
            return Err(syntax(line, col, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    /// `None`: every identifier is a variable and no differentials occur.
    vars: Option<&'a [String]>,
    allow_forms: bool,
    line: usize,
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or((self.line, self.end_col))
    }

    fn err(&self, message: impl Into<String>) -> Error {
        let (l, c) = self.here();
        syntax(l, c, message)
    }

    fn coords(&self) -> Vec<String> {
        self.vars.map(|v| v.to_vec()).unwrap_or_default()
    }

    fn scalar(&self, f: RatFun) -> DForm {
        DForm::function(&self.coords(), f)
    }

    fn expr(&mut self) -> Result<DForm> {
        let mut acc = match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            let neg = match self.peek() {
                Some(Tok::Op('+')) => false,
                Some(Tok::Op('-')) => true,
                _ => return Ok(acc),
            };
            let (l, c) = self.here();
            self.pos += 1;
            let t = self.term()?;
            let r = if neg { acc.sub(&t) } else { acc.add(&t) };
            acc = r.map_err(|_| syntax(l, c, "terms of different degree"))?;
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('('))
        )
    }

    fn term(&mut self) -> Result<DForm> {
        let mut acc = self.power()?;
        loop {
            let (l, c) = self.here();
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = acc.wedge(&f).map_err(|_| syntax(l, c, "degree too high"))?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let f = self.power()?;
                    if f.arity() != 0 {
                        return Err(syntax(l, c, "division by a differential"));
                    }
                    let v = f.value().even;
                    let inv = v.recip().map_err(|_| syntax(l, c, "division by zero"))?;
                    acc = acc.scale(&inv);
                }
                _ if self.starts_factor() => {
                    let f = self.power()?;
                    acc = acc.wedge(&f).map_err(|_| syntax(l, c, "degree too high"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<DForm> {
        let mut base = self.primary()?;
        while let Some(Tok::Op('^')) = self.peek() {
            let (l, c) = self.here();
            self.pos += 1;
            let neg = if let Some(Tok::Op('-')) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            if let Some(Tok::Num(n)) = self.peek().cloned() {
                self.pos += 1;
                if base.arity() != 0 {
                    return Err(syntax(l, c, "power of a differential"));
                }
                let k: i32 = i32::try_from(&n).map_err(|_| syntax(l, c, "exponent too large"))?;
                let k = if neg { -k } else { k };
                let v = base
                    .value()
                    .even
                    .pow(k)
                    .map_err(|_| syntax(l, c, "division by zero"))?;
                base = self.scalar(v);
            } else if neg {
                return Err(self.err("expected an integer exponent"));
            } else {
                let rhs = self.primary()?;
                if base.arity() == 0 || rhs.arity() == 0 {
                    return Err(syntax(l, c, "'^' needs an integer exponent or two forms"));
                }
                base = base.wedge(&rhs).map_err(|_| syntax(l, c, "degree too high"))?;
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<DForm> {
        let Some(t) = self.toks.get(self.pos).cloned() else {
            return Err(self.err("unexpected end of input"));
        };
        self.pos += 1;
        match t.tok {
            Tok::Num(n) => Ok(self.scalar(RatFun::constant(Rational::from_integer(n)))),
            Tok::Op('(') => {
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("expected ')'")),
                }
            }
            Tok::Op('-') => Ok(self.power()?.neg()),
            Tok::Op(c) => Err(syntax(t.line, t.col, format!("unexpected '{c}'"))),
            Tok::Ident(name) => self.identifier(&name, t.line, t.col),
        }
    }

    fn identifier(&self, name: &str, line: usize, col: usize) -> Result<DForm> {
        let declared = |v: &str| self.vars.is_some_and(|vs| vs.iter().any(|x| x == v));
        let is_var = match self.vars {
            None => !(self.allow_forms && name.len() > 1 && name.starts_with('d')),
            Some(_) => declared(name),
        };
        if is_var {
            return Ok(self.scalar(RatFun::var(name)));
        }
        if let Some(rest) = name.strip_prefix('d').filter(|r| !r.is_empty()) {
            if !self.allow_forms {
                return Err(syntax(line, col, format!("differential '{name}' in a function")));
            }
            if self.vars.is_some() && !declared(rest) {
                return Err(Error::UnknownVariable(rest.to_string()));
            }
            return Ok(DForm::differential(&self.coords(), rest));
        }
        Err(Error::UnknownVariable(name.to_string()))
    }
}

fn run_parser(text: &str, vars: Option<&[String]>, allow_forms: bool, line: usize, col0: usize) -> Result<DForm> {
    let toks = tokenize(text, line, col0)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vars,
        allow_forms,
        line,
        end_col: col0 + text.chars().count() + 1,
    };
    if p.toks.is_empty() {
        return Err(p.err("empty expression"));
    }
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err("unexpected token"));
    }
    Ok(e)
}

/// Parses a rational function. With `vars`, identifiers outside the list are
/// rejected.
pub fn parse_ratfun(text: &str, vars: Option<&[String]>) -> Result<RatFun> {
    let f = run_parser(text, vars, false, 1, 0)?;
    Ok(f.value().even)
}

pub fn parse_poly(text: &str, vars: Option<&[String]>) -> Result<MPoly> {
    let f = parse_ratfun(text, vars)?;
    f.as_polynomial()
        .cloned()
        .ok_or_else(|| syntax(1, 1, "expected a polynomial"))
}

/// Parses a form expression over the declared coordinates `vars`; without a
/// declaration every `d<name>` token is a differential.
pub fn parse_form_expr(text: &str, vars: Option<&[String]>) -> Result<DForm> {
    run_parser(text, vars, true, 1, 0)
}

/// Parses a rational point such as `0, 1/2, -3`.
pub fn parse_point(text: &str) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for (i, part) in text.split(',').enumerate() {
        let f = parse_ratfun(part.trim(), Some(&[]))
            .map_err(|_| syntax(1, i + 1, format!("bad coordinate '{}'", part.trim())))?;
        out.push(f.constant_value().expect("no variables"));
    }
    Ok(out)
}

/// A parsed form file.
#[derive(Clone, Debug, PartialEq)]
pub struct FormDocument {
    pub vars: Vec<String>,
    pub form: DForm,
    pub degree: Option<i64>,
    pub chart: Option<usize>,
    pub point: Option<Vec<Rational>>,
}

/// Parses a document of `key: value` lines (`vars`, `form`, and optionally
/// `degree`, `chart`, `point`). `#` starts a comment; indented lines
/// continue the previous entry.
pub fn parse_document(text: &str) -> Result<FormDocument> {
    let mut entries: Vec<(String, String, usize, usize)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let continued = line.starts_with(char::is_whitespace) && !entries.is_empty();
        if continued {
            let last = entries.last_mut().expect("nonempty");
            last.1.push(' ');
            last.1.push_str(line.trim());
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(syntax(n + 1, 1, "expected 'key: value'"));
        };
        let col = key.chars().count() + 1;
        entries.push((key.trim().to_string(), value.to_string(), n + 1, col));
    }
    let find = |k: &str| entries.iter().find(|e| e.0 == k);
    for e in &entries {
        if !["vars", "form", "degree", "chart", "point"].contains(&e.0.as_str()) {
            return Err(syntax(e.2, 1, format!("unknown key '{}'", e.0)));
        }
    }
    let Some(ve) = find("vars") else {
        return Err(syntax(1, 1, "missing 'vars:' line"));
    };
    let vars: Vec<String> = ve
        .1
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    for v in &vars {
        let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(syntax(ve.2, ve.3, format!("bad variable name '{v}'")));
        }
    }
    let Some(fe) = find("form") else {
        return Err(syntax(1, 1, "missing 'form:' line"));
    };
    let form = run_parser(&fe.1, Some(&vars), true, fe.2, fe.3)?;
    let degree = match find("degree") {
        Some(e) => Some(
            e.1.trim()
                .parse::<i64>()
                .map_err(|_| syntax(e.2, e.3, "degree must be an integer"))?,
        ),
        None => None,
    };
    let chart = match find("chart") {
        Some(e) => Some(
            e.1.trim()
                .parse::<usize>()
                .map_err(|_| syntax(e.2, e.3, "chart must be a nonnegative integer"))?,
        ),
        None => None,
    };
    let point = match find("point") {
        Some(e) => Some(parse_point(e.1.trim()).map_err(|_| syntax(e.2, e.3, "bad point"))?),
        None => None,
    };
    Ok(FormDocument {
        vars,
        form,
        degree,
        chart,
        point,
    })
}

/// `parse_document` restricted to the 1-form.
pub fn parse_form(text: &str) -> Result<DForm> {
    let doc = parse_document(text)?;
    if doc.form.arity() != 1 && !doc.form.is_zero() {
        return Err(syntax(1, 1, "expected a 1-form"));
    }
    Ok(doc.form)
}

impl fmt::Display for FormDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.vars.join(" "))?;
        writeln!(f, "form: {}", self.form.render())?;
        if let Some(d) = self.degree {
            writeln!(f, "degree: {d}")?;
        }
        if let Some(c) = self.chart {
            writeln!(f, "chart: {c}")?;
        }
        if let Some(p) = &self.point {
            let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            writeln!(f, "point: {}", s.join(", "))?;
        }
        Ok(())
    }
}
