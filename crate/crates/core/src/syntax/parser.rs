use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::lexer::{tokenize, Tok, Token};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::order::{MonomialOrder, OrderKind};
use crate::rewriting::RewritingSystem;
use crate::scalar::{Field, Scalar};
use crate::series::WeightData;
use crate::theory::{Monomial, PathMonomial, Theory};

/// Larger powers are refused rather than expanded.
const MAX_EXPONENT: u32 = 1000;

fn err_at(t: &Token, message: impl Into<String>) -> Error {
    Error::Parse { line: t.line, column: t.column, message: message.into() }
}

/// Re-anchors an engine error at a statement.
fn wrap(t: &Token, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => err_at(t, other.to_string()),
    }
}

/// A weight assignment with the token it was written at.
type Weight = (String, BigRational, Token);

#[derive(Default)]
struct Header {
    theory: Option<(String, Token)>,
    vars: Option<Vec<String>>,
    commvars: Option<Vec<String>>,
    vertices: Option<Vec<String>>,
    arrows: Vec<(String, String, String)>,
    order: Option<(OrderKind, Vec<String>, Token)>,
    weights: Option<(Vec<Weight>, Token)>,
    field: Option<Field>,
}

/// Parses and validates a system file. Every diagnostic carries the line
/// and column of the offending token or statement.
pub fn parse_system(text: &str) -> Result<RewritingSystem> {
    let tokens = tokenize(text)?;
    let mut header = Header::default();
    let mut sys: Option<RewritingSystem> = None;
    let end = Token { tok: Tok::Sep, line: text.lines().count().max(1), column: 1 };
    for stmt in tokens.split(|t| t.tok == Tok::Sep).filter(|s| !s.is_empty()) {
        let head = &stmt[0];
        let Tok::Ident(keyword) = &head.tok else {
            return Err(err_at(head, format!("expected a statement keyword, found {}", head.describe())));
        };
        let args = &stmt[1..];
        if keyword == "rule" {
            if sys.is_none() {
                sys = Some(build(&header, head)?);
            }
            let sys = sys.as_mut().expect("system was just built");
            add_rule(sys, head, args)?;
            continue;
        }
        if sys.is_some() {
            return Err(err_at(head, format!("`{keyword}` must come before the first rule")));
        }
        match keyword.as_str() {
            "theory" => {
                let [t] = args else { return Err(err_at(head, "expected one of assoc, commutative, mixed, magma, path")) };
                header.theory = Some((name(t)?, head.clone()));
            }
            "vars" => header.vars = Some(names(head, args)?),
            "commvars" => header.commvars = Some(names(head, args)?),
            "vertices" => header.vertices = Some(names(head, args)?),
            "arrows" => header.arrows = arrows(head, args)?,
            "order" => header.order = Some(order(head, args)?),
            "weights" => header.weights = Some((weights(args)?, head.clone())),
            "field" => {
                let [t] = args else { return Err(err_at(head, "expected `rational` or a prime")) };
                header.field = Some(match &t.tok {
                    Tok::Ident(s) if s == "rational" || s == "Q" => Field::Rational,
                    Tok::Number(n) => {
                        let p: u64 = n.parse().map_err(|_| err_at(t, "modulus does not fit in 64 bits"))?;
                        Field::prime(p).map_err(|e| wrap(t, e))?
                    }
                    _ => return Err(err_at(t, format!("expected `rational` or a prime, found {}", t.describe()))),
                });
            }
            other => return Err(err_at(head, format!("unknown statement `{other}`"))),
        }
    }
    match sys {
        Some(s) => Ok(s),
        None => build(&header, &end),
    }
}

fn name(t: &Token) -> Result<String> {
    match &t.tok {
        Tok::Ident(s) | Tok::Number(s) => Ok(s.clone()),
        _ => Err(err_at(t, format!("expected a name, found {}", t.describe()))),
    }
}

fn names(head: &Token, args: &[Token]) -> Result<Vec<String>> {
    if args.is_empty() {
        return Err(err_at(head, "expected at least one name"));
    }
    args.iter().map(name).collect()
}

fn arrows(head: &Token, args: &[Token]) -> Result<Vec<(String, String, String)>> {
    if args.is_empty() || !args.len().is_multiple_of(5) {
        return Err(err_at(head, "expected arrows written `name:source->target`"));
    }
    args.chunks(5)
        .map(|c| {
            if c[1].tok != Tok::Colon {
                return Err(err_at(&c[1], format!("expected `:`, found {}", c[1].describe())));
            }
            if c[3].tok != Tok::Arrow {
                return Err(err_at(&c[3], format!("expected `->`, found {}", c[3].describe())));
            }
            Ok((name(&c[0])?, name(&c[2])?, name(&c[4])?))
        })
        .collect()
}

fn order(head: &Token, args: &[Token]) -> Result<(OrderKind, Vec<String>, Token)> {
    let Some(first) = args.first() else { return Err(err_at(head, "expected an order kind")) };
    let mut rest = &args[1..];
    let word = name(first)?;
    // `weighted-deglex` and `series-deglex` lex as three tokens
    let suffixed = matches!(rest, [Token { tok: Tok::Minus, .. }, Token { tok: Tok::Ident(s), .. }, ..] if s == "deglex");
    if suffixed {
        rest = &rest[2..];
    }
    let kind = match (word.as_str(), suffixed) {
        ("deglex", false) => OrderKind::Deglex,
        ("weighted", _) => OrderKind::WeightedDeglex,
        ("lex", false) => OrderKind::Lex,
        ("series", _) => OrderKind::SeriesDeglex,
        ("graded", false) => OrderKind::Graded,
        _ => return Err(err_at(first, format!("unknown order `{word}`; expected deglex, weighted, lex, series or graded"))),
    };
    let mut chain = Vec::new();
    let mut dir: Option<Tok> = None;
    for (i, t) in rest.iter().enumerate() {
        if i % 2 == 0 {
            chain.push(name(t)?);
        } else if matches!(t.tok, Tok::Lt | Tok::Gt) {
            if dir.as_ref().is_some_and(|d| *d != t.tok) {
                return Err(err_at(t, "a precedence chain uses either `<` or `>` throughout"));
            }
            dir = Some(t.tok.clone());
        } else {
            return Err(err_at(t, format!("expected `<` or `>`, found {}", t.describe())));
        }
    }
    if rest.len().is_multiple_of(2) && !rest.is_empty() {
        return Err(err_at(&rest[rest.len() - 1], "precedence chain ends with a comparison"));
    }
    if dir == Some(Tok::Gt) {
        chain.reverse();
    }
    Ok((kind, chain, first.clone()))
}

fn signed_rational(args: &[Token]) -> Result<(BigRational, usize)> {
    let mut i = 0;
    let neg = matches!(args.first(), Some(Token { tok: Tok::Minus, .. }));
    if neg {
        i += 1;
    }
    let num = match args.get(i) {
        Some(Token { tok: Tok::Number(n), .. }) => n.parse::<BigInt>().expect("digits"),
        Some(t) => return Err(err_at(t, format!("expected a number, found {}", t.describe()))),
        None => return Err(Error::Parse { line: 0, column: 0, message: "expected a number".into() }),
    };
    i += 1;
    let mut q = BigRational::from_integer(num);
    if let Some(Token { tok: Tok::Slash, .. }) = args.get(i) {
        match args.get(i + 1) {
            Some(t @ Token { tok: Tok::Number(d), .. }) => {
                let d: BigInt = d.parse().expect("digits");
                if d.is_zero() {
                    return Err(err_at(t, "division by zero"));
                }
                q /= BigRational::from_integer(d);
                i += 2;
            }
            Some(t) => return Err(err_at(t, format!("expected a denominator, found {}", t.describe()))),
            None => return Err(err_at(&args[i], "expected a denominator")),
        }
    }
    Ok((if neg { -q } else { q }, i))
}

fn weights(args: &[Token]) -> Result<Vec<Weight>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let g = name(&args[i])?;
        match args.get(i + 1) {
            Some(Token { tok: Tok::Colon, .. }) => {}
            Some(t) => return Err(err_at(t, format!("expected `:`, found {}", t.describe()))),
            None => return Err(err_at(&args[i], "expected `name:weight`")),
        }
        let (w, used) = signed_rational(&args[i + 2..]).map_err(|e| match e {
            Error::Parse { line: 0, .. } => err_at(&args[i + 1], "expected a weight"),
            e => e,
        })?;
        out.push((g, w, args[i].clone()));
        i += 2 + used;
    }
    Ok(out)
}

fn build(h: &Header, at: &Token) -> Result<RewritingSystem> {
    let Some((kind, tt)) = &h.theory else { return Err(err_at(at, "missing `theory` statement")) };
    let need = |v: &Option<Vec<String>>, what: &str| -> Result<Vec<String>> {
        v.clone().ok_or_else(|| err_at(tt, format!("the {kind} theory needs a `{what}` statement")))
    };
    let theory = match kind.as_str() {
        "assoc" | "associative" | "free" => Theory::free_monoid(need(&h.vars, "vars")?),
        "commutative" | "comm" => Theory::commutative(need(&h.vars, "vars")?),
        "magma" => Theory::free_magma(need(&h.vars, "vars")?),
        "mixed" => Theory::mixed(h.commvars.clone().unwrap_or_default(), h.vars.clone().unwrap_or_default()),
        "path" => {
            let vertices = need(&h.vertices, "vertices")?;
            let arrows: Vec<(&str, &str, &str)> =
                h.arrows.iter().map(|(a, s, t)| (a.as_str(), s.as_str(), t.as_str())).collect();
            Theory::path_algebra(vertices, &arrows)
        }
        other => {
            return Err(err_at(tt, format!("unknown theory `{other}`; expected assoc, commutative, mixed, magma or path")))
        }
    }
    .map_err(|e| wrap(tt, e))?;
    let gens: Vec<String> = theory.generator_names().iter().map(|s| s.to_string()).collect();
    let index = |n: &str, t: &Token| -> Result<usize> {
        gens.iter().position(|g| g == n).ok_or_else(|| err_at(t, format!("unknown generator `{n}`")))
    };
    let weights = match &h.weights {
        Some((list, _)) => {
            let mut w = vec![BigRational::zero(); gens.len()];
            for (n, q, t) in list {
                w[index(n, t)?] = q.clone();
            }
            Some(w)
        }
        None => None,
    };
    let (kind, chain, ot) = match &h.order {
        Some((k, c, t)) => (*k, c.clone(), t.clone()),
        None => (OrderKind::Deglex, Vec::new(), at.clone()),
    };
    let ascending: Vec<usize> = if chain.is_empty() {
        (0..gens.len()).rev().collect()
    } else {
        chain.iter().map(|n| index(n, &ot)).collect::<Result<_>>()?
    };
    let order_weights = match kind {
        OrderKind::WeightedDeglex | OrderKind::SeriesDeglex | OrderKind::Graded => weights.clone(),
        _ => None,
    };
    let order = MonomialOrder::with_precedence(kind, &theory, &ascending, order_weights).map_err(|e| wrap(&ot, e))?;
    let mut sys = RewritingSystem::new(theory, order, h.field.unwrap_or(Field::Rational));
    let series_data = match kind {
        OrderKind::WeightedDeglex | OrderKind::Graded => None,
        _ => weights,
    };
    if let Some(w) = series_data {
        let wt = h.weights.as_ref().map(|(_, t)| t).unwrap_or(at);
        sys = sys.with_weights(WeightData::new(w)).map_err(|e| wrap(wt, e))?;
    }
    Ok(sys)
}

fn add_rule(sys: &mut RewritingSystem, head: &Token, args: &[Token]) -> Result<()> {
    let Some(arrow) = args.iter().position(|t| t.tok == Tok::Arrow) else {
        return Err(err_at(head, "expected `rule LEAD -> LOWER`"));
    };
    if arrow == 0 {
        return Err(err_at(&args[0], "missing rule lead before `->`"));
    }
    if arrow + 1 == args.len() {
        return Err(err_at(&args[arrow], "missing lower part after `->`; write 0 for none"));
    }
    let (theory, field) = (sys.theory().clone(), sys.field());
    let lead = ExprParser::new(&theory, field, &args[..arrow]).parse()?;
    let lower = ExprParser::new(&theory, field, &args[arrow + 1..]).parse()?;
    let mut terms = lead.terms();
    let (Some((mu, c)), None) = (terms.next(), terms.next()) else {
        return Err(err_at(&args[0], "the left side of a rule must be a single monomial"));
    };
    let inv = c.inverse().expect("stored coefficients are nonzero");
    sys.add_rule(mu.clone(), lower.scale(&inv)).map_err(|e| wrap(head, e))?;
    Ok(())
}

/// Parses an expression in the theory and field of `sys`.
pub fn parse_expression(sys: &RewritingSystem, text: &str) -> Result<Element> {
    parse_element(sys.theory(), sys.field(), text)
}

pub fn parse_element(theory: &Theory, field: Field, text: &str) -> Result<Element> {
    let tokens = tokenize(text)?;
    if let Some(t) = tokens.iter().find(|t| t.tok == Tok::Sep) {
        return Err(err_at(t, "an expression cannot contain `;` or line breaks"));
    }
    if tokens.is_empty() {
        return Err(Error::Parse { line: 1, column: 1, message: "empty expression".into() });
    }
    ExprParser::new(theory, field, &tokens).parse()
}

enum Factor {
    Scalar(Scalar),
    Elem(Element),
}

struct ExprParser<'a> {
    theory: &'a Theory,
    field: Field,
    toks: &'a [Token],
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn new(theory: &'a Theory, field: Field, toks: &'a [Token]) -> Self {
        ExprParser { theory, field, toks, pos: 0 }
    }

    fn parse(mut self) -> Result<Element> {
        let e = self.expr(false)?;
        match self.toks.get(self.pos) {
            None => Ok(e),
            Some(t) => Err(err_at(t, format!("unexpected {}", t.describe()))),
        }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn last(&self) -> &'a Token {
        &self.toks[self.pos.min(self.toks.len()) - 1]
    }

    fn magma(&self) -> bool {
        matches!(self.theory, Theory::FreeMagma { .. })
    }

    fn expr(&mut self, in_parens: bool) -> Result<Element> {
        let mut terms: Vec<(bool, Vec<Factor>, &'a Token)> = Vec::new();
        let mut negative = false;
        if let Some(t) = self.peek() {
            match t.tok {
                Tok::Minus => {
                    negative = true;
                    self.pos += 1;
                }
                Tok::Plus => self.pos += 1,
                _ => {}
            }
        }
        loop {
            let start = self.peek().ok_or_else(|| err_at(self.last(), "expected a term"))?;
            terms.push((negative, self.term()?, start));
            match self.peek().map(|t| &t.tok) {
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                _ => break,
            }
            self.pos += 1;
        }
        let single = terms.len() == 1;
        let mut out = Element::zero(self.field);
        for (neg, factors, start) in terms {
            let elems = factors.iter().filter(|f| matches!(f, Factor::Elem(_))).count();
            if self.magma() && elems >= 2 && !(in_parens && single && elems == 2) {
                return Err(err_at(start, "magma products need explicit parentheses, one product per pair: (a*b)"));
            }
            let t = self.build_term(factors, start)?;
            out = if neg { out.sub(&t) } else { out.add(&t) };
        }
        Ok(out)
    }

    fn build_term(&self, factors: Vec<Factor>, at: &Token) -> Result<Element> {
        let mut coeff = self.field.one();
        let mut prod: Option<Element> = None;
        for f in factors {
            match f {
                Factor::Scalar(s) => coeff = &coeff * &s,
                Factor::Elem(e) => {
                    prod = Some(match prod {
                        None => e,
                        Some(p) => p.multiply(self.theory, &e).map_err(|e| wrap(at, e))?,
                    })
                }
            }
        }
        match prod {
            Some(p) => Ok(p.scale(&coeff)),
            None if coeff.is_zero() => Ok(Element::zero(self.field)),
            None => Ok(self.unit(at)?.scale(&coeff)),
        }
    }

    fn unit(&self, at: &Token) -> Result<Element> {
        match self.theory {
            Theory::FreeMagma { .. } => Err(err_at(at, "the free magma has no unit; a number must multiply a monomial")),
            Theory::PathAlgebra(q) => Ok(Element::from_terms(
                self.field,
                (0..q.vertices.len() as u32).map(|v| (Monomial::Path(PathMonomial::vertex(v)), self.field.one())),
            )),
            t => Ok(Element::monomial(self.field, t.unit().expect("associative theories have a unit"))),
        }
    }

    fn term(&mut self) -> Result<Vec<Factor>> {
        let mut factors = vec![self.factor()?];
        while matches!(self.peek().map(|t| &t.tok), Some(Tok::Star)) {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(factors)
    }

    fn factor(&mut self) -> Result<Factor> {
        let base = self.atom()?;
        let Some(caret) = self.peek().filter(|t| t.tok == Tok::Caret) else { return Ok(base) };
        self.pos += 1;
        let k: u32 = match self.peek() {
            Some(Token { tok: Tok::Number(n), .. }) => {
                self.pos += 1;
                match n.parse::<u32>() {
                    Ok(k) if k <= MAX_EXPONENT => k,
                    _ => return Err(err_at(self.last(), format!("exponent above {MAX_EXPONENT}"))),
                }
            }
            Some(t) => return Err(err_at(t, format!("expected an exponent, found {}", t.describe()))),
            None => return Err(err_at(caret, "expected an exponent")),
        };
        Ok(match base {
            Factor::Scalar(s) => {
                let mut acc = self.field.one();
                for _ in 0..k {
                    acc = &acc * &s;
                }
                Factor::Scalar(acc)
            }
            Factor::Elem(_) if self.magma() => {
                return Err(err_at(caret, "powers are ambiguous in the free magma; write the product out"))
            }
            Factor::Elem(e) => {
                let mut acc = self.unit(caret)?;
                for _ in 0..k {
                    acc = acc.multiply(self.theory, &e).map_err(|e| wrap(caret, e))?;
                }
                Factor::Elem(acc)
            }
        })
    }

    fn atom(&mut self) -> Result<Factor> {
        let t = self.peek().ok_or_else(|| err_at(self.last(), "unexpected end of expression"))?;
        match &t.tok {
            Tok::Number(_) => {
                let (q, used) = signed_rational(&self.toks[self.pos..])?;
                self.pos += used;
                let s = self.field.from_rational(&q).map_err(|e| wrap(t, e))?;
                Ok(Factor::Scalar(s))
            }
            Tok::Ident(n) => {
                self.pos += 1;
                let mu = self.generator(n).ok_or_else(|| err_at(t, format!("unknown generator `{n}`")))?;
                Ok(Factor::Elem(Element::monomial(self.field, mu)))
            }
            Tok::LParen => {
                self.pos += 1;
                let e = self.expr(true)?;
                match self.peek() {
                    Some(Token { tok: Tok::RParen, .. }) => {
                        self.pos += 1;
                        Ok(Factor::Elem(e))
                    }
                    Some(other) => Err(err_at(other, format!("expected `)`, found {}", other.describe()))),
                    None => Err(err_at(t, "unclosed `(`")),
                }
            }
            _ => Err(err_at(t, format!("unexpected {}", t.describe()))),
        }
    }

    fn generator(&self, n: &str) -> Option<Monomial> {
        if let Some(g) = self.theory.generator_names().iter().position(|g| *g == n) {
            return Some(self.theory.generator(g));
        }
        match self.theory {
            Theory::PathAlgebra(q) => {
                let v = n.strip_prefix('e')?;
                q.vertices.iter().position(|x| x == v).map(|i| Monomial::Path(PathMonomial::vertex(i as u32)))
            }
            _ => None,
        }
    }
}
