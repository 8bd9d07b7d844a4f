//! A small text notation for the formula registry.
//!
//! ```text
//! linear     alpha + beta1 + 2i + j - 1
//! factors    (alpha)_{i+j} (gamma)_{2i+j}^2
//! sign       (-1)^{i+j}
//! monomial   x^{i+j} y^{j} z^{i}
//! calls      F(alpha+i, beta1; gamma1+i; x) * F1(beta2; beta1, alpha; gamma2; y, z)
//! chain      nabla_xz(alpha) nabla_xy(beta1) deltatilde_x(gamma)
//! ```
//!
//! In a call every `;`-separated group but the last holds parameters
//! (flattened in order) and the last group lists the variables.

use std::fmt;

use crate::catalog::{truncated_values, FunctionId, Param, ParamSet};
use crate::error::{Error, Result};
use crate::kernel::{pochhammer, Axis, Rational, TruncatedSeries};
use crate::operators::{DiagonalOp, OpKind, OperatorChain};

/// `constant + sum c_p * param + sum c_i * index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinExpr {
    pub constant: Rational,
    pub params: Vec<(Param, i64)>,
    pub indices: Vec<i64>,
}

impl LinExpr {
    fn zero(n_indices: usize) -> Self {
        Self { constant: Rational::zero(), params: Vec::new(), indices: vec![0; n_indices] }
    }

    pub fn is_index_only(&self) -> bool {
        self.params.is_empty()
    }

    pub fn eval_exact(&self, ps: &ParamSet<Rational>, idx: &[u32]) -> Result<Rational> {
        let mut v = self.constant.clone();
        for (p, c) in &self.params {
            v = v + ps.get(*p)? * Rational::from(*c);
        }
        for (c, i) in self.indices.iter().zip(idx) {
            v = v + Rational::from(*c * *i as i64);
        }
        Ok(v)
    }

    pub fn eval_f64(&self, ps: &ParamSet<f64>, idx: &[u32]) -> Result<f64> {
        let mut v = self.constant.to_f64();
        for (p, c) in &self.params {
            v += ps.get(*p)? * *c as f64;
        }
        for (c, i) in self.indices.iter().zip(idx) {
            v += (*c * *i as i64) as f64;
        }
        Ok(v)
    }

    /// Integer value of an index-only expression.
    pub fn eval_int(&self, idx: &[u32]) -> i64 {
        debug_assert!(self.is_index_only() && self.constant.is_integer());
        let base = self.constant.to_i64().unwrap_or(0);
        base + self.indices.iter().zip(idx).map(|(c, i)| c * *i as i64).sum::<i64>()
    }

    /// Nonnegative integer value, for Pochhammer lengths and exponents.
    pub fn eval_len(&self, idx: &[u32]) -> Result<u32> {
        u32::try_from(self.eval_int(idx))
            .map_err(|_| Error::BadParams(format!("negative length or exponent at indices {idx:?}")))
    }
}

/// `(base)_{len}^power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PochFactor {
    pub base: LinExpr,
    pub len: LinExpr,
    pub power: u32,
}

impl PochFactor {
    pub fn eval_exact(&self, ps: &ParamSet<Rational>, idx: &[u32]) -> Result<Rational> {
        Ok(pochhammer(&self.base.eval_exact(ps, idx)?, self.len.eval_len(idx)?).pow(self.power))
    }

    pub fn eval_f64(&self, ps: &ParamSet<f64>, idx: &[u32]) -> Result<f64> {
        let a = self.base.eval_f64(ps, idx)?;
        let len = self.len.eval_len(idx)?;
        let p: f64 = (0..len).map(|k| a + k as f64).product();
        Ok(p.powi(self.power as i32))
    }
}

/// A hypergeometric function applied to expressions and variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnCall {
    pub f: FunctionId,
    pub args: Vec<LinExpr>,
    pub vars: Vec<Axis>,
}

impl FnCall {
    pub fn values_exact(&self, ps: &ParamSet<Rational>, idx: &[u32]) -> Result<Vec<Rational>> {
        self.args.iter().map(|a| a.eval_exact(ps, idx)).collect()
    }

    pub fn values_f64(&self, ps: &ParamSet<f64>, idx: &[u32]) -> Result<Vec<f64>> {
        self.args.iter().map(|a| a.eval_f64(ps, idx)).collect()
    }

    /// The call as a series in `(x, y, z)` up to total degree `cap`.
    pub fn series(&self, ps: &ParamSet<Rational>, idx: &[u32], cap: u32) -> Result<TruncatedSeries> {
        let native = truncated_values(self.f, &self.values_exact(ps, idx)?, cap)?;
        let mut slots = [Axis::X; 3];
        for (k, a) in self.vars.iter().enumerate() {
            slots[k] = *a;
        }
        Ok(native.embed(slots))
    }

    /// The call's own variables read off a point in `(x, y, z)`.
    pub fn point(&self, xyz: [f64; 3]) -> Vec<f64> {
        self.vars.iter().map(|a| xyz[a.position()]).collect()
    }
}

impl fmt::Display for FnCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.vars.iter().map(ToString::to_string).collect();
        write!(f, "{}(..; {})", self.f, vars.join(", "))
    }
}

/// An operator whose parameter is still symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTemplate {
    pub kind: OpKind,
    pub h: LinExpr,
}

pub fn bind_chain(ops: &[OpTemplate], ps: &ParamSet<Rational>) -> Result<OperatorChain> {
    let ops = ops
        .iter()
        .map(|t| DiagonalOp::new(t.kind, t.h.eval_exact(ps, &[])?))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorChain::new(ops))
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    indices: &'a [String],
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, indices: &'a [String]) -> Self {
        Self { src, pos: 0, indices }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// Letters, digits and underscores, with no whitespace skipping inside.
    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.rest().chars().next() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn digits(&mut self) -> Option<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.src[start..self.pos].parse().ok()).flatten()
    }

    fn lin_term(&mut self, sign: i64, out: &mut LinExpr) -> Result<()> {
        let coeff = match self.digits() {
            Some(n) => {
                let mut c = Rational::from(n);
                if self.eat('/') {
                    let d = self.digits().ok_or_else(|| self.err("expected a denominator"))?;
                    c = Rational::new(n, d).map_err(|_| self.err("zero denominator"))?;
                }
                self.eat('*');
                Some(c)
            }
            None => None,
        };
        let starts_word = self.rest().starts_with(|c: char| c.is_ascii_alphabetic());
        if !starts_word {
            let c = coeff.ok_or_else(|| self.err("expected a term"))?;
            out.constant = &out.constant + &(c * Rational::from(sign));
            return Ok(());
        }
        let name = self.word();
        let k = match coeff {
            None => 1,
            Some(c) => c.to_i64().ok_or_else(|| self.err("symbol coefficients must be integers"))?,
        } * sign;
        if let Some(pos) = self.indices.iter().position(|i| i == name) {
            out.indices[pos] += k;
        } else if let Ok(p) = name.parse::<Param>() {
            match out.params.iter_mut().find(|(q, _)| *q == p) {
                Some((_, c)) => *c += k,
                None => out.params.push((p, k)),
            }
        } else {
            return Err(self.err(&format!("unknown symbol `{name}`")));
        }
        Ok(())
    }

    fn lin_expr(&mut self) -> Result<LinExpr> {
        let mut out = LinExpr::zero(self.indices.len());
        let mut sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        loop {
            self.lin_term(sign, &mut out)?;
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                break;
            }
        }
        out.params.retain(|(_, c)| *c != 0);
        Ok(out)
    }

    /// `{expr}` or a single bare term such as `k` or `2`.
    fn braced_or_atom(&mut self) -> Result<LinExpr> {
        if self.eat('{') {
            let e = self.lin_expr()?;
            self.expect('}')?;
            Ok(e)
        } else {
            let mut out = LinExpr::zero(self.indices.len());
            self.lin_term(1, &mut out)?;
            Ok(out)
        }
    }

    fn index_expr(&mut self) -> Result<LinExpr> {
        let e = self.braced_or_atom()?;
        if !e.is_index_only() || !e.constant.is_integer() {
            return Err(self.err("expected an integer expression in the summation indices"));
        }
        Ok(e)
    }

    fn poch_factor(&mut self) -> Result<PochFactor> {
        self.expect('(')?;
        let base = self.lin_expr()?;
        self.expect(')')?;
        self.expect('_')?;
        let len = self.index_expr()?;
        let power = if self.eat('^') {
            let p = self.index_expr()?;
            if p.indices.iter().any(|c| *c != 0) {
                return Err(self.err("powers must be constant"));
            }
            p.eval_len(&[])?
        } else {
            1
        };
        Ok(PochFactor { base, len, power })
    }

    fn axis_list(&mut self) -> Result<Vec<Axis>> {
        let mut out = Vec::new();
        loop {
            let w = self.word();
            let mut chars = w.chars();
            match (chars.next().and_then(Axis::from_char), chars.next()) {
                (Some(a), None) => out.push(a),
                _ => return Err(self.err(&format!("expected a variable, got `{w}`"))),
            }
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    fn call(&mut self) -> Result<FnCall> {
        let name = self.word();
        let f: FunctionId = name.parse().map_err(|_| self.err(&format!("unknown function `{name}`")))?;
        self.expect('(')?;
        let mut groups: Vec<String> = vec![String::new()];
        let start = self.pos;
        let mut depth = 0;
        let mut end = None;
        for (off, c) in self.rest().char_indices() {
            match c {
                '(' | '{' => depth += 1,
                ')' | '}' if depth > 0 => depth -= 1,
                ')' => {
                    end = Some(start + off);
                    break;
                }
                ';' if depth == 0 => groups.push(String::new()),
                _ => groups.last_mut().expect("nonempty").push(c),
            }
        }
        let end = end.ok_or_else(|| self.err("unclosed call"))?;
        self.pos = end + 1;

        let vars_src = groups.pop().expect("at least one group");
        let vars = Cursor::new(&vars_src, self.indices).axis_list_all()?;
        let mut args = Vec::new();
        for g in groups.iter().filter(|g| !g.trim().is_empty()) {
            for piece in g.split(',') {
                let mut c = Cursor::new(piece, self.indices);
                let e = c.lin_expr()?;
                if !c.at_end() {
                    return Err(c.err("trailing input"));
                }
                args.push(e);
            }
        }
        if args.len() != f.params().len() {
            return Err(self.err(&format!("{f} takes {} parameters, got {}", f.params().len(), args.len())));
        }
        if vars.len() != f.arity() {
            return Err(self.err(&format!("{f} takes {} variables, got {}", f.arity(), vars.len())));
        }
        Ok(FnCall { f, args, vars })
    }

    fn axis_list_all(&mut self) -> Result<Vec<Axis>> {
        let v = self.axis_list()?;
        if !self.at_end() {
            return Err(self.err("trailing input"));
        }
        Ok(v)
    }

    fn operator(&mut self) -> Result<OpTemplate> {
        let w = self.word();
        let (head, axes) = w.split_once('_').ok_or_else(|| self.err(&format!("bad operator `{w}`")))?;
        let axes: Vec<Axis> = axes.chars().map(Axis::from_char).collect::<Option<_>>().ok_or_else(|| {
            self.err(&format!("bad operator axes `{axes}`"))
        })?;
        let kind = match (head, axes.as_slice()) {
            ("nabla", [a, b]) if a != b => OpKind::Nabla(*a, *b),
            ("delta", [a, b]) if a != b => OpKind::Delta(*a, *b),
            ("nablatilde", [a]) => OpKind::NablaTilde(*a),
            ("deltatilde", [a]) => OpKind::DeltaTilde(*a),
            _ => return Err(self.err(&format!("bad operator `{w}`"))),
        };
        self.expect('(')?;
        let h = self.lin_expr()?;
        self.expect(')')?;
        Ok(OpTemplate { kind, h })
    }
}

fn finish<T>(mut c: Cursor<'_>, v: T) -> Result<T> {
    if c.at_end() {
        Ok(v)
    } else {
        Err(c.err("trailing input"))
    }
}

pub fn parse_lin_expr(src: &str, indices: &[String]) -> Result<LinExpr> {
    let mut c = Cursor::new(src, indices);
    let e = c.lin_expr()?;
    finish(c, e)
}

/// A product of Pochhammer factors; the empty string is the empty product.
pub fn parse_factors(src: &str, indices: &[String]) -> Result<Vec<PochFactor>> {
    let mut c = Cursor::new(src, indices);
    let mut out = Vec::new();
    while !c.at_end() {
        out.push(c.poch_factor()?);
        c.eat('*');
    }
    Ok(out)
}

/// `(-1)^{expr}`; returns the exponent.
pub fn parse_sign(src: &str, indices: &[String]) -> Result<LinExpr> {
    let mut c = Cursor::new(src, indices);
    c.expect('(')?;
    c.expect('-')?;
    if c.digits() != Some(1) {
        return Err(c.err("expected (-1)"));
    }
    c.expect(')')?;
    c.expect('^')?;
    let e = c.index_expr()?;
    finish(c, e)
}

/// `x^{..} y^{..} z^{..}`; missing variables get exponent zero.
pub fn parse_monomial(src: &str, indices: &[String]) -> Result<[LinExpr; 3]> {
    let mut c = Cursor::new(src, indices);
    let mut out = [LinExpr::zero(indices.len()), LinExpr::zero(indices.len()), LinExpr::zero(indices.len())];
    let mut seen = [false; 3];
    while !c.at_end() {
        let w = c.word();
        let axis = match (w.len(), w.chars().next().and_then(Axis::from_char)) {
            (1, Some(a)) => a,
            _ => return Err(c.err(&format!("expected x, y or z, got `{w}`"))),
        };
        if std::mem::replace(&mut seen[axis.position()], true) {
            return Err(c.err(&format!("variable {axis} repeated")));
        }
        out[axis.position()] = if c.eat('^') {
            c.index_expr()?
        } else {
            let mut one = LinExpr::zero(indices.len());
            one.constant = Rational::one();
            one
        };
        c.eat('*');
    }
    Ok(out)
}

/// One or more calls joined by `*` or whitespace.
pub fn parse_calls(src: &str, indices: &[String]) -> Result<Vec<FnCall>> {
    let mut c = Cursor::new(src, indices);
    let mut out = Vec::new();
    while !c.at_end() {
        out.push(c.call()?);
        c.eat('*');
    }
    if out.is_empty() {
        return Err(Error::Parse(format!("no function calls in `{src}`")));
    }
    Ok(out)
}

pub fn parse_call(src: &str, indices: &[String]) -> Result<FnCall> {
    let mut calls = parse_calls(src, indices)?;
    if calls.len() != 1 {
        return Err(Error::Parse(format!("expected exactly one call in `{src}`")));
    }
    Ok(calls.remove(0))
}

/// Whitespace-separated operators such as `nabla_xz(alpha)`.
pub fn parse_chain(src: &str) -> Result<Vec<OpTemplate>> {
    let mut c = Cursor::new(src, &[]);
    let mut out = Vec::new();
    while !c.at_end() {
        out.push(c.operator()?);
        c.eat('*');
    }
    Ok(out)
}
