//! Free associative algebra over [`Scalar`]: generators, words, deg-lex
//! orders and noncommutative polynomials, plus the shared expression parser.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result, SourceSpan};
use crate::scalar::{Param, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(pub u16);

impl GenId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Names of the generators of one algebra. Position is the [`GenId`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenTable {
    names: Vec<String>,
    lookup: HashMap<String, GenId>,
}

impl GenTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut t = GenTable::default();
        for n in names {
            t.push(n.as_ref())?;
        }
        Ok(t)
    }

    pub fn push(&mut self, name: &str) -> Result<GenId> {
        if self.lookup.contains_key(name) {
            return Err(Error::Parse {
                span: SourceSpan::default(),
                message: format!("duplicate generator `{name}`"),
            });
        }
        let id = GenId(self.names.len() as u16);
        self.names.push(name.to_string());
        self.lookup.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.names[g.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, name: &str) -> Option<GenId> {
        self.lookup.get(name).copied()
    }

    /// Looks up a generator, panicking on a typo in built-in tables.
    pub fn id(&self, name: &str) -> GenId {
        self.get(name)
            .unwrap_or_else(|| panic!("generator `{name}` not in table"))
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        (0..self.names.len() as u16).map(GenId)
    }

    /// Splits a run of letters into generator names, longest match first.
    fn split_juxtaposed(&self, ident: &str) -> Option<Vec<GenId>> {
        if ident.is_empty() {
            return Some(Vec::new());
        }
        let mut best: Vec<(usize, GenId)> = self
            .names
            .iter()
            .enumerate()
            .filter(|(_, n)| ident.starts_with(n.as_str()))
            .map(|(i, n)| (n.len(), GenId(i as u16)))
            .collect();
        best.sort_by_key(|b| std::cmp::Reverse(b.0));
        for (len, g) in best {
            if let Some(mut rest) = self.split_juxtaposed(&ident[len..]) {
                rest.insert(0, g);
                return Some(rest);
            }
        }
        None
    }
}

/// A monomial: a finite sequence of generators. The empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<GenId>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: GenId) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[GenId] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    /// Position of the first occurrence of `pat`, if any.
    pub fn find(&self, pat: &Word) -> Option<usize> {
        if pat.len() > self.len() {
            return None;
        }
        (0..=self.len() - pat.len()).find(|&i| self.0[i..i + pat.len()] == pat.0[..])
    }

    pub fn contains(&self, pat: &Word) -> bool {
        self.find(pat).is_some()
    }

    pub fn render(&self, table: &GenTable) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&g| table.name(g))
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl From<Vec<GenId>> for Word {
    fn from(v: Vec<GenId>) -> Self {
        Word(v)
    }
}

/// Degree-lexicographic order driven by a generator precedence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    rank: Vec<u16>,
}

/// Sort key realizing a [`MonomialOrder`]: larger key, larger word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderKey(Vec<u16>);

impl MonomialOrder {
    /// Table order is precedence order: the first generator is the largest.
    pub fn table_order(n: usize) -> Self {
        MonomialOrder {
            rank: (0..n).map(|i| (n - i) as u16).collect(),
        }
    }

    /// `precedence[0]` is the largest generator. Every generator must appear.
    pub fn from_precedence(precedence: &[GenId]) -> Self {
        let n = precedence.len();
        let mut rank = vec![0u16; n];
        for (pos, g) in precedence.iter().enumerate() {
            rank[g.index()] = (n - pos) as u16;
        }
        MonomialOrder { rank }
    }

    pub fn precedence(&self) -> Vec<GenId> {
        let mut ids: Vec<GenId> = (0..self.rank.len() as u16).map(GenId).collect();
        ids.sort_by(|a, b| self.rank[b.index()].cmp(&self.rank[a.index()]));
        ids
    }

    pub fn num_generators(&self) -> usize {
        self.rank.len()
    }

    pub fn key(&self, w: &Word) -> OrderKey {
        let mut k = Vec::with_capacity(w.len() + 1);
        k.push(w.len() as u16);
        k.extend(w.0.iter().map(|g| self.rank[g.index()]));
        OrderKey(k)
    }

    pub fn cmp(&self, a: &Word, b: &Word) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            for (x, y) in a.0.iter().zip(&b.0) {
                let o = self.rank[x.index()].cmp(&self.rank[y.index()]);
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }

    pub fn gen_gt(&self, a: GenId, b: GenId) -> bool {
        self.rank[a.index()] > self.rank[b.index()]
    }
}

pub fn word_cmp(a: &Word, b: &Word, ord: &MonomialOrder) -> Ordering {
    ord.cmp(a, b)
}

/// Finite linear combination of words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NCPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, Word::unit())
    }

    pub fn term(c: Scalar, w: Word) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn word(w: Word) -> Self {
        Self::term(Scalar::one(), w)
    }

    pub fn gen(g: GenId) -> Self {
        Self::word(Word::letter(g))
    }

    /// Product of single generators.
    pub fn monomial(c: Scalar, letters: &[GenId]) -> Self {
        Self::term(c, Word(letters.to_vec()))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut p = NCPoly::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, Scalar)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Constant coefficient when the polynomial has no word of positive length.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Word::unit()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                let v = &*slot + &c;
                if v.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *slot = v;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &NCPoly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &other.terms {
            self.add_term(w.clone(), v * c);
        }
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut r = self.clone();
        r.add_scaled(other, &Scalar::one());
        r
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        let mut r = self.clone();
        r.add_scaled(other, &-Scalar::one());
        r
    }

    pub fn neg(&self) -> NCPoly {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        let mut r = NCPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                r.add_term(wa.concat(wb), ca * cb);
            }
        }
        r
    }

    /// `left * self * right` for words.
    pub fn sandwich(&self, left: &Word, right: &Word) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (left.concat(&w.concat(right)), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> NCPoly {
        let mut r = NCPoly::one();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<NCPoly> {
        let mut r = NCPoly::zero();
        for (w, c) in &self.terms {
            r.add_term(w.clone(), f(c)?);
        }
        Ok(r)
    }

    pub fn substitute(&self, bindings: &[(Param, Scalar)]) -> Result<NCPoly> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        self.map_coeffs(|c| c.substitute(bindings))
    }

    /// Algebra map defined on generators.
    pub fn map_gens(&self, f: impl Fn(GenId) -> NCPoly) -> NCPoly {
        let mut cache: HashMap<GenId, NCPoly> = HashMap::new();
        let mut r = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NCPoly::constant(c.clone());
            for &g in &w.0 {
                let img = cache.entry(g).or_insert_with(|| f(g)).clone();
                acc = acc.mul(&img);
                if acc.is_zero() {
                    break;
                }
            }
            r.add_scaled(&acc, &Scalar::one());
        }
        r
    }

    /// Anti-multiplicative map defined on generators.
    pub fn map_gens_reversed(&self, f: impl Fn(GenId) -> NCPoly) -> NCPoly {
        let mut r = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NCPoly::constant(c.clone());
            for &g in w.0.iter().rev() {
                acc = acc.mul(&f(g));
            }
            r.add_scaled(&acc, &Scalar::one());
        }
        r
    }

    /// Terms sorted largest first under `ord`.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(&Word, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    pub fn leading_term(&self, ord: &MonomialOrder) -> Result<(Word, Scalar)> {
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(a.0, b.0))
            .map(|(w, c)| (w.clone(), c.clone()))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn mentions(&self, g: GenId) -> bool {
        self.terms.keys().any(|w| w.0.contains(&g))
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn render(&self, table: &GenTable, ord: &MonomialOrder) -> String {
        render_terms(self.sorted_terms(ord), table)
    }
}

fn render_terms(terms: Vec<(&Word, &Scalar)>, table: &GenTable) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (w, c)) in terms.into_iter().enumerate() {
        let (neg, body) = render_coeff(c);
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match (body.as_str(), w.is_empty()) {
            ("1", true) => out.push('1'),
            ("1", false) => out.push_str(&w.render(table)),
            (b, true) => out.push_str(b),
            (b, false) => {
                out.push_str(b);
                out.push('*');
                out.push_str(&w.render(table));
            }
        }
    }
    out
}

/// Splits a coefficient into a sign and a body safe to juxtapose with `*`.
fn render_coeff(c: &Scalar) -> (bool, String) {
    let text = c.to_string();
    if c.is_single_term() {
        match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        }
    } else {
        (false, format!("({text})"))
    }
}

/// An [`NCPoly`] bound to its generator table; products check the tables.
#[derive(Clone, Debug)]
pub struct Element {
    pub table: Arc<GenTable>,
    pub poly: NCPoly,
}

impl Element {
    pub fn new(table: Arc<GenTable>, poly: NCPoly) -> Self {
        Element { table, poly }
    }

    fn same_table(&self, other: &Element) -> Result<()> {
        if Arc::ptr_eq(&self.table, &other.table) || self.table == other.table {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.same_table(other)?;
        Ok(Element::new(self.table.clone(), self.poly.mul(&other.poly)))
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_table(other)?;
        Ok(Element::new(self.table.clone(), self.poly.add(&other.poly)))
    }
}

pub fn poly_mul(a: &Element, b: &Element) -> Result<Element> {
    a.mul(b)
}

// ---------------------------------------------------------------------------
// Expression parser

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str, line0: usize, col0: usize) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (line0, col0);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (sl, sc) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let n = s.parse::<u64>().map_err(|_| Error::Parse {
                span: SourceSpan::new(sl, sc),
                message: format!("integer literal `{s}` too large"),
            })?;
            out.push(Spanned {
                tok: Tok::Num(n),
                line: sl,
                col: sc,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: sl,
                col: sc,
            });
            continue;
        }
        if "+-*/^()".contains(c) {
            out.push(Spanned {
                tok: Tok::Sym(c),
                line: sl,
                col: sc,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::Parse {
            span: SourceSpan::new(sl, sc),
            message: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    table: &'a GenTable,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn span(&self) -> SourceSpan {
        match self.toks.get(self.pos) {
            Some(s) => SourceSpan::new(s.line, s.col),
            None => SourceSpan::new(self.end.0, self.end.1),
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            span: self.span(),
            message: message.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<NCPoly> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('('))
        )
    }

    fn term(&mut self) -> Result<NCPoly> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let span = self.span();
                let d = self.power()?;
                let d = d.as_constant().ok_or_else(|| Error::Parse {
                    span: span.clone(),
                    message: "division by a non-scalar".into(),
                })?;
                let inv = d.inv().map_err(|_| Error::Parse {
                    span,
                    message: "division by zero".into(),
                })?;
                acc = acc.scale(&inv);
            } else if self.starts_factor() {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let n = match self.peek() {
            Some(Tok::Num(n)) => *n as i64,
            _ => return self.err("expected integer exponent"),
        };
        self.pos += 1;
        if paren && !self.eat(')') {
            return self.err("expected `)`");
        }
        Ok(if neg { -n } else { n })
    }

    fn power(&mut self) -> Result<NCPoly> {
        let span = self.span();
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        if let Some(c) = base.as_constant() {
            let v = c.powi(e as i32).map_err(|_| Error::Parse {
                span,
                message: "zero to a negative power".into(),
            })?;
            return Ok(NCPoly::constant(v));
        }
        if e < 0 {
            return Err(Error::Parse {
                span,
                message: "negative power of a non-scalar".into(),
            });
        }
        Ok(base.pow(e as u32))
    }

    fn atom(&mut self) -> Result<NCPoly> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(NCPoly::constant(Scalar::from_int(n as i64)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(g) = self.table.get(&name) {
                    return Ok(NCPoly::gen(g));
                }
                if let Some(p) = Param::from_name(&name) {
                    return Ok(NCPoly::constant(Scalar::param(p)));
                }
                if let Some(gs) = self.table.split_juxtaposed(&name) {
                    return Ok(NCPoly::monomial(Scalar::one(), &gs));
                }
                Err(Error::UnknownGenerator { span, name })
            }
            Some(t) => self.err(format!("unexpected token {:?}", t)),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses an expression whose first character sits at (`line`, `col`).
pub fn parse_expr_at(text: &str, table: &GenTable, line: usize, col: usize) -> Result<NCPoly> {
    let toks = lex(text, line, col)?;
    let end_col = col + text.chars().count();
    let mut p = Parser {
        toks,
        pos: 0,
        table,
        end: (line, end_col),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn parse_expr(text: &str, table: &GenTable) -> Result<NCPoly> {
    parse_expr_at(text, table, 1, 1)
}

pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let e = parse_expr(text, &GenTable::default())?;
    e.as_constant().ok_or_else(|| Error::Parse {
        span: SourceSpan::new(1, 1),
        message: "expected a scalar".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs() -> GenTable {
        GenTable::new(&["x1", "x2", "x3"]).unwrap()
    }

    #[test]
    fn products_and_distributivity() {
        let t = xs();
        let p = |s: &str| parse_expr(s, &t).unwrap();
        assert_eq!(p("x1").mul(&p("x2")), p("x1*x2"));
        assert_eq!(p("(x1 + x2)*x3"), p("x1*x3 + x2*x3"));
        assert_eq!(p("(u*x1)*(s*x3)"), p("u*s*x1*x3"));
    }

    #[test]
    fn deg_lex_examples() {
        let t = xs();
        let ord = MonomialOrder::table_order(3);
        let w = |s: &str| parse_expr(s, &t).unwrap().leading_term(&ord).unwrap().0;
        assert_eq!(ord.cmp(&w("x1*x2"), &w("x2*x1")), Ordering::Greater);
        assert_eq!(ord.cmp(&w("x3"), &w("x1*x2")), Ordering::Less);
        assert_eq!(ord.cmp(&Word::unit(), &w("x3")), Ordering::Less);
    }

    #[test]
    fn leading_term_of_constant_and_zero() {
        let ord = MonomialOrder::table_order(3);
        let (w, c) = NCPoly::constant(Scalar::from_int(5)).leading_term(&ord).unwrap();
        assert!(w.is_empty());
        assert_eq!(c, Scalar::from_int(5));
        assert!(matches!(NCPoly::zero().leading_term(&ord), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn juxtaposition_and_powers() {
        let t = xs();
        assert_eq!(parse_expr("x1x2", &t).unwrap(), parse_expr("x1*x2", &t).unwrap());
        assert_eq!(parse_expr("x3^2", &t).unwrap(), parse_expr("x3 x3", &t).unwrap());
        assert_eq!(parse_scalar("u^(-2)").unwrap(), Scalar::upow(-2));
    }

    #[test]
    fn unknown_generator_has_span() {
        let err = parse_expr("x1 + y", &xs()).unwrap_err();
        match err {
            Error::UnknownGenerator { span, name } => {
                assert_eq!(name, "y");
                assert_eq!(span.column, 6);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn rendering_is_leading_first() {
        let t = xs();
        let ord = MonomialOrder::table_order(3);
        let p = parse_expr("s*x3*x3 + u^2*x2*x1", &t).unwrap();
        assert_eq!(p.render(&t, &ord), "u^2*x2*x1 + s*x3*x3");
        let p = parse_expr("x1 - u^(-2)*s*x3", &t).unwrap();
        assert_eq!(p.render(&t, &ord), "x1 - u^(-2)*s*x3");
    }

    #[test]
    fn mismatched_tables_error() {
        let a = Element::new(Arc::new(xs()), NCPoly::gen(GenId(0)));
        let b = Element::new(
            Arc::new(GenTable::new(&["y1"]).unwrap()),
            NCPoly::gen(GenId(0)),
        );
        assert!(matches!(poly_mul(&a, &b), Err(Error::TableMismatch)));
    }
}
