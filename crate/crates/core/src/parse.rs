//! Text syntax for symbols, distributions and test functions.
//!
//! Symbols: `t1..t9`, rational literals (`3`, `3/4`), `+ - * ^`, parentheses.
//! `^` binds tighter than unary minus, which binds tighter than `*`.
//!
//! Distributions: a sum of products of coordinate factors
//!
//! ```text
//! x1^-2   log(x1)^3   H(x1)   H(-x1)   delta(x1,2)   mono(x1,3)
//! ```
//!
//! A coordinate without a Heaviside factor lives on the whole line, so
//! `x1^2` and `mono(x1,2)` both mean `x₁²` on ℝ. A coordinate missing from
//! a term is the constant `1`. Negative exponents are finite parts under
//! [`RegularizationR`](crate::oracle::RegularizationR).
//!
//! Test functions: `<polynomial in x1..xd>; center=c1,..,cd; width=w`,
//! where both options are optional (defaults `0` and `1`).

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dist::{accumulate, Atom1D, DistExpr, Sign, TermMap};
use crate::error::{Error, ParseError, Result};
use crate::oracle::GaussPoly;
use crate::poly::Polynomial;
use crate::Rat;

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Tok {
    kind: Kind,
    offset: usize,
}

fn describe(k: &Kind) -> String {
    match k {
        Kind::Num(n) => format!("number {n}"),
        Kind::Ident(s) => format!("'{s}'"),
        Kind::Sym(c) => format!("'{c}'"),
        Kind::End => "end of input".into(),
    }
}

fn lex(src: &str) -> std::result::Result<Vec<Tok>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            toks.push(Tok {
                kind: Kind::Num(n),
                offset: start,
            });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            toks.push(Tok {
                kind: Kind::Ident(src[start..i].to_string()),
                offset: start,
            });
        } else if "+-*^/(),;=".contains(c) {
            toks.push(Tok {
                kind: Kind::Sym(c),
                offset: i,
            });
            i += 1;
        } else {
            let ch = src[i..].chars().next().expect("in bounds");
            return Err(ParseError {
                offset: i,
                expected: vec![],
                message: format!("unexpected character '{ch}'"),
            });
        }
    }
    toks.push(Tok {
        kind: Kind::End,
        offset: src.len(),
    });
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].clone();
        if !matches!(t.kind, Kind::End) {
            self.pos += 1;
        }
        t
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().kind == Kind::Sym(c)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.at_sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = self.peek();
        Err(ParseError {
            offset: t.offset,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message: format!("unexpected {}", describe(&t.kind)),
        })
    }

    fn expect_sym(&mut self, c: char, also: &[&str]) -> PResult<()> {
        if self.eat_sym(c) {
            return Ok(());
        }
        let own = format!("'{c}'");
        let mut exp: Vec<&str> = vec![&own];
        exp.extend_from_slice(also);
        self.fail(&exp)
    }

    fn expect_end(&self, also: &[&str]) -> PResult<()> {
        if matches!(self.peek().kind, Kind::End) {
            Ok(())
        } else {
            let mut exp = vec!["end of input"];
            exp.extend_from_slice(also);
            self.fail(&exp)
        }
    }

    fn uint(&mut self) -> PResult<BigInt> {
        match self.peek().kind.clone() {
            Kind::Num(n) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail(&["integer"]),
        }
    }

    fn small_uint(&mut self) -> PResult<u32> {
        let off = self.peek().offset;
        let n = self.uint()?;
        n.to_u32().ok_or_else(|| ParseError {
            offset: off,
            expected: vec![],
            message: format!("integer {n} too large"),
        })
    }

    fn small_int(&mut self) -> PResult<i32> {
        let neg = self.eat_sym('-');
        let off = self.peek().offset;
        let n = self.uint()?;
        let v = n.to_i32().ok_or_else(|| ParseError {
            offset: off,
            expected: vec![],
            message: format!("integer {n} too large"),
        })?;
        Ok(if neg { -v } else { v })
    }

    /// `digits ('/' digits)?`
    fn rational(&mut self) -> PResult<Rat> {
        let num = self.uint()?;
        if self.eat_sym('/') {
            let off = self.peek().offset;
            let den = self.uint()?;
            if den.is_zero() {
                return Err(ParseError {
                    offset: off,
                    expected: vec![],
                    message: "zero denominator".into(),
                });
            }
            return Ok(Rat::new(num, den));
        }
        Ok(Rat::from_integer(num))
    }

    fn signed_rational(&mut self) -> PResult<Rat> {
        let neg = self.eat_sym('-');
        let r = self.rational()?;
        Ok(if neg { -r } else { r })
    }

    /// Variable `<prefix><j>` with `1 ≤ j ≤ dim`; returns the zero-based index.
    fn var_index(&self, name: &str, prefix: char, offset: usize, dim: usize) -> PResult<Option<usize>> {
        let mut chars = name.chars();
        if chars.next() != Some(prefix) {
            return Ok(None);
        }
        let rest = chars.as_str();
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Ok(None);
        }
        let j: usize = rest.parse().unwrap_or(usize::MAX);
        if j == 0 || j > dim {
            return Err(ParseError {
                offset,
                expected: vec![],
                message: format!("variable {name} out of range for dimension {dim}"),
            });
        }
        Ok(Some(j - 1))
    }
}

const POLY_CONT: &[&str] = &["'+'", "'-'", "'*'", "'^'"];

struct PolyParser {
    p: Parser,
    dim: usize,
    var: char,
}

impl PolyParser {
    fn expr(&mut self) -> PResult<Polynomial> {
        let mut acc = self.term()?;
        loop {
            if self.p.eat_sym('+') {
                acc = &acc + &self.term()?;
            } else if self.p.eat_sym('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<Polynomial> {
        let mut acc = self.unary()?;
        while self.p.eat_sym('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<Polynomial> {
        if self.p.eat_sym('-') {
            return Ok(-&self.unary()?);
        }
        if self.p.eat_sym('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Polynomial> {
        let base = self.atom()?;
        if self.p.eat_sym('^') {
            let e = self.p.small_uint()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Polynomial> {
        let t = self.p.peek().clone();
        match &t.kind {
            Kind::Num(_) => {
                let r = self.p.rational()?;
                Ok(Polynomial::constant(self.dim, r))
            }
            Kind::Ident(name) => match self.p.var_index(name, self.var, t.offset, self.dim)? {
                Some(j) => {
                    self.p.bump();
                    Ok(Polynomial::var(self.dim, j))
                }
                None => Err(ParseError {
                    offset: t.offset,
                    expected: vec![format!("variable {}1..{}9", self.var, self.var)],
                    message: format!("unknown identifier '{name}'"),
                }),
            },
            Kind::Sym('(') => {
                self.p.bump();
                let e = self.expr()?;
                self.p.expect_sym(')', POLY_CONT)?;
                Ok(e)
            }
            _ => {
                let v = format!("variable {}<j>", self.var);
                self.p.fail(&["number", &v, "'('", "'-'"])
            }
        }
    }
}

fn parse_poly_in(src: &str, dim: usize, var: char) -> PResult<Polynomial> {
    let mut pp = PolyParser {
        p: Parser::new(src)?,
        dim,
        var,
    };
    let e = pp.expr()?;
    pp.p.expect_end(POLY_CONT)?;
    Ok(e)
}

/// Parses an Euler symbol in `t1..td`.
pub fn parse_poly(src: &str, dim: usize) -> std::result::Result<Polynomial, ParseError> {
    parse_poly_in(src, dim, 't')
}

/// Largest `t<j>` index mentioned in `src` (at least 1).
pub fn infer_dim(src: &str) -> usize {
    let Ok(toks) = lex(src) else { return 1 };
    toks.iter()
        .filter_map(|t| match &t.kind {
            Kind::Ident(s) if s.len() > 1 && (s.starts_with('t') || s.starts_with('x')) => {
                s[1..].parse::<usize>().ok()
            }
            _ => None,
        })
        .max()
        .unwrap_or(1)
        .max(1)
}

#[derive(Default, Clone)]
struct Group {
    power: Option<i32>,
    log: Option<u32>,
    sign: Option<Sign>,
    delta: Option<u32>,
    mono: bool,
}

impl Group {
    fn atoms(&self) -> Vec<(Rat, Atom1D)> {
        if let Some(k) = self.delta {
            return vec![(Rat::one(), Atom1D::Delta(k))];
        }
        let n = self.power.unwrap_or(0);
        let p = self.log.unwrap_or(0);
        match self.sign {
            Some(s) => vec![(Rat::one(), Atom1D::monlog(n, p, s))],
            None => {
                let parity = if n.rem_euclid(2) == 1 { -Rat::one() } else { Rat::one() };
                vec![
                    (Rat::one(), Atom1D::monlog(n, p, Sign::Pos)),
                    (parity, Atom1D::monlog(n, p, Sign::Neg)),
                ]
            }
        }
    }
}

struct DistParser {
    p: Parser,
    dim: usize,
}

const DIST_FACTORS: &[&str] = &["x<j>", "log(", "H(", "delta(", "mono(", "number"];

impl DistParser {
    fn coord(&mut self) -> PResult<usize> {
        let t = self.p.peek().clone();
        if let Kind::Ident(name) = &t.kind {
            if let Some(j) = self.p.var_index(name, 'x', t.offset, self.dim)? {
                self.p.bump();
                return Ok(j);
            }
        }
        self.p.fail(&["coordinate x<j>"])
    }

    fn conflict(j: usize) -> Error {
        Error::CoordinateConflict(j + 1)
    }

    fn factor(&mut self, groups: &mut [Group], coeff: &mut Rat) -> Result<()> {
        let t = self.p.peek().clone();
        let name = match &t.kind {
            Kind::Num(_) => {
                *coeff *= self.p.rational()?;
                return Ok(());
            }
            Kind::Ident(s) => s.clone(),
            _ => return Ok(self.p.fail(DIST_FACTORS)?),
        };
        if let Some(j) = self.p.var_index(&name, 'x', t.offset, self.dim)? {
            self.p.bump();
            let n = if self.p.eat_sym('^') { self.p.small_int()? } else { 1 };
            let g = &mut groups[j];
            if g.power.is_some() || g.mono || g.delta.is_some() {
                return Err(Self::conflict(j));
            }
            g.power = Some(n);
            return Ok(());
        }
        self.p.bump();
        match name.as_str() {
            "log" => {
                self.p.expect_sym('(', &[])?;
                let j = self.coord()?;
                self.p.expect_sym(')', &[])?;
                let p = if self.p.eat_sym('^') { self.p.small_uint()? } else { 1 };
                let g = &mut groups[j];
                if g.log.is_some() || g.delta.is_some() {
                    return Err(Self::conflict(j));
                }
                g.log = Some(p);
            }
            "H" => {
                self.p.expect_sym('(', &[])?;
                let sign = if self.p.eat_sym('-') { Sign::Neg } else { Sign::Pos };
                let j = self.coord()?;
                self.p.expect_sym(')', &[])?;
                let g = &mut groups[j];
                if g.sign.is_some() || g.mono || g.delta.is_some() {
                    return Err(Self::conflict(j));
                }
                g.sign = Some(sign);
            }
            "delta" => {
                self.p.expect_sym('(', &[])?;
                let j = self.coord()?;
                self.p.expect_sym(',', &[])?;
                let k = self.p.small_uint()?;
                self.p.expect_sym(')', &[])?;
                let g = &mut groups[j];
                if g.delta.is_some() || g.power.is_some() || g.log.is_some() || g.sign.is_some() || g.mono {
                    return Err(Self::conflict(j));
                }
                g.delta = Some(k);
            }
            "mono" => {
                self.p.expect_sym('(', &[])?;
                let j = self.coord()?;
                self.p.expect_sym(',', &[])?;
                let n = self.p.small_int()?;
                self.p.expect_sym(')', &[])?;
                let g = &mut groups[j];
                if g.power.is_some() || g.sign.is_some() || g.delta.is_some() || g.mono {
                    return Err(Self::conflict(j));
                }
                g.mono = true;
                g.power = Some(n);
            }
            _ => {
                return Err(ParseError {
                    offset: t.offset,
                    expected: DIST_FACTORS.iter().map(|s| s.to_string()).collect(),
                    message: format!("unknown identifier '{name}'"),
                }
                .into())
            }
        }
        Ok(())
    }

    fn term(&mut self, sign: Rat, out: &mut TermMap) -> Result<()> {
        let mut groups = vec![Group::default(); self.dim];
        let mut coeff = sign;
        self.factor(&mut groups, &mut coeff)?;
        while self.p.eat_sym('*') {
            self.factor(&mut groups, &mut coeff)?;
        }
        let mut expanded: Vec<(Rat, Vec<Atom1D>)> = vec![(coeff, Vec::new())];
        for g in &groups {
            let atoms = g.atoms();
            let mut next = Vec::with_capacity(expanded.len() * atoms.len());
            for (c, f) in &expanded {
                for (ca, a) in &atoms {
                    let mut f = f.clone();
                    f.push(a.clone());
                    next.push((c * ca, f));
                }
            }
            expanded = next;
        }
        for (c, f) in expanded {
            accumulate(out, f, c);
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<DistExpr> {
        let mut map = TermMap::new();
        let first = if self.p.eat_sym('-') { -Rat::one() } else { Rat::one() };
        self.term(first, &mut map)?;
        loop {
            if self.p.eat_sym('+') {
                self.term(Rat::one(), &mut map)?;
            } else if self.p.eat_sym('-') {
                self.term(-Rat::one(), &mut map)?;
            } else {
                break;
            }
        }
        self.p.expect_end(&["'+'", "'-'", "'*'"])?;
        Ok(DistExpr::from_map(self.dim, map))
    }
}

/// Parses a distribution expression in `d` coordinates into canonical form.
pub fn parse_dist(src: &str, dim: usize) -> Result<DistExpr> {
    let mut dp = DistParser {
        p: Parser::new(src)?,
        dim,
    };
    dp.expr()
}

/// Parses `<poly in x1..xd>; center=..; width=..`.
pub fn parse_testfn(src: &str, dim: usize) -> Result<GaussPoly> {
    let (poly_src, opts) = match src.find(';') {
        Some(i) => (&src[..i], &src[i..]),
        None => (src, ""),
    };
    let poly = parse_poly_in(poly_src, dim, 'x')?;
    let mut center = vec![Rat::zero(); dim];
    let mut width = Rat::one();

    let mut p = Parser::new(opts)?;
    let shift = poly_src.len();
    let relocate = |mut e: ParseError| {
        e.offset += shift;
        e
    };
    while p.eat_sym(';') {
        let t = p.peek().clone();
        match &t.kind {
            Kind::Ident(k) if k == "center" => {
                p.bump();
                p.expect_sym('=', &[]).map_err(relocate)?;
                let mut vals = vec![p.signed_rational().map_err(relocate)?];
                while p.eat_sym(',') {
                    vals.push(p.signed_rational().map_err(relocate)?);
                }
                if vals.len() != dim {
                    return Err(Error::Dimension(format!(
                        "center has {} entries, expected {dim}",
                        vals.len()
                    )));
                }
                center = vals;
            }
            Kind::Ident(k) if k == "width" => {
                p.bump();
                p.expect_sym('=', &[]).map_err(relocate)?;
                width = p.rational().map_err(relocate)?;
            }
            _ => return Err(p.fail::<()>(&["center", "width"]).map_err(relocate).unwrap_err().into()),
        }
    }
    p.expect_end(&["';'"]).map_err(relocate)?;
    GaussPoly::new(poly, center, width)
}

/// Textual form of a rational accepted by the parsers (`-3/4`).
pub fn format_rational(r: &Rat) -> String {
    if r.is_negative() {
        format!("-{}", r.abs())
    } else {
        r.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn poly_examples() {
        let p = parse_poly("t1^2*t2 - 3*t1 + 2", 2).unwrap();
        let e = Polynomial::from_int_terms(2, &[(&[2, 1], 1), (&[1, 0], -3), (&[0, 0], 2)]);
        assert_eq!(p, e);
        let p = parse_poly("t1 + t2 + 2", 2).unwrap();
        assert_eq!(p, Polynomial::from_int_terms(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[0, 0], 2)]));
        let err = parse_poly("t1*(t1+1", 1).unwrap_err();
        assert_eq!(err.offset, 8);
        assert!(err.expected.contains(&"')'".to_string()));
    }

    #[test]
    fn poly_precedence_and_rationals() {
        let p = parse_poly("-t1^2", 1).unwrap();
        assert_eq!(p, Polynomial::from_int_terms(1, &[(&[2], -1)]));
        let p = parse_poly("3/4*(t1 - 1/2)^2", 1).unwrap();
        assert_eq!(p.coeff(&[0]), Rat::new(3.into(), 16.into()));
        assert!(parse_poly("t3", 2).is_err());
        assert!(parse_poly("t1 t2", 2).is_err());
        assert!(parse_poly("1/0", 1).is_err());
    }

    #[test]
    fn dist_examples() {
        let e = parse_dist("delta(x1,2) * x2^3*H(x2)", 2).unwrap();
        assert_eq!(
            e,
            DistExpr::single(rat(1), vec![Atom1D::Delta(2), Atom1D::monlog(3, 0, Sign::Pos)])
        );
        let e = parse_dist("x1^-1*H(x1)", 1).unwrap();
        assert_eq!(e, DistExpr::atom(Atom1D::monlog(-1, 0, Sign::Pos)));
        let e = parse_dist("1/2 * mono(x1,2) + delta(x1,0)", 1).unwrap();
        let expected = DistExpr::full_monomial(&[2])
            .scale(&Rat::new(1.into(), 2.into()))
            .add(&DistExpr::atom(Atom1D::Delta(0)))
            .unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn dist_defaults_and_conflicts() {
        // absent coordinate is the constant one
        let e = parse_dist("delta(x1,0)", 2).unwrap();
        assert_eq!(e.len(), 2);
        // odd power without H is odd on the line
        let e = parse_dist("x1", 1).unwrap();
        assert_eq!(e, DistExpr::full_monomial(&[1]));
        assert!(matches!(parse_dist("delta(x1,0)*H(x1)", 1), Err(Error::CoordinateConflict(1))));
        assert!(matches!(parse_dist("mono(x2,1)*x2", 2), Err(Error::CoordinateConflict(2))));
        assert!(matches!(parse_dist("x1*foo", 1), Err(Error::Parse(_))));
    }

    #[test]
    fn dist_round_trip() {
        for src in [
            "x1^-1*H(x1)",
            "3/4*delta(x1,2)*x2*log(x2)^2*H(-x2) - x1^3*H(x1)*H(x2)",
            "-2*x1^-3*log(x1)*H(-x1)",
        ] {
            let dim = infer_dim(src);
            let e = parse_dist(src, dim).unwrap();
            assert_eq!(parse_dist(&e.to_string(), dim).unwrap(), e);
        }
        assert_eq!(parse_dist("0", 1).unwrap(), DistExpr::zero(1));
    }

    #[test]
    fn testfn_examples() {
        let g = parse_testfn("1 + x1^2; center=1/2; width=2", 1).unwrap();
        assert_eq!(g.center(), &[Rat::new(1.into(), 2.into())]);
        assert_eq!(g.width(), &rat(2));
        let g = parse_testfn("x1*x2; center=-1,0", 2).unwrap();
        assert_eq!(g.center()[0], rat(-1));
        assert!(parse_testfn("1; width=0", 1).is_err());
        let err = parse_testfn("1; colour=2", 1).unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { offset: 3, .. })));
    }
}
