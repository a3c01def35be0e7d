//! Integral cohomology of the configuration space of `n` labelled points in
//! `R^{r+1}` avoiding `m` fixed point obstacles.
//!
//! The ring is generated by degree-`r` classes `e(i,j)`, `1 <= i < j <= n+m`,
//! subject to
//!
//! - `e(i,j)^2 = 0`,
//! - `e(i,j) e(i,k) = (e(i,j) - e(i,k)) e(j,k)` for `i < j < k`,
//! - `e(i,j) = 0` when both indices are obstacles (`i > n`).
//!
//! Every element is stored in normal form: an integer combination of basis
//! monomials `e(i_1,j_1) ... e(i_s,j_s)` with `i_1 < ... < i_s <= n` and
//! `i_q < j_q`. Arbitrary words are brought to this form by [`straighten`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;

/// The triple `(r, n, m)` selecting one cohomology ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct AlgebraSpec {
    r: u32,
    n: u32,
    m: u32,
}

#[derive(Deserialize)]
struct RawSpec {
    r: u32,
    n: u32,
    m: u32,
}

impl TryFrom<RawSpec> for AlgebraSpec {
    type Error = AlgebraError;

    fn try_from(raw: RawSpec) -> Result<Self, Self::Error> {
        AlgebraSpec::new(raw.r, raw.n, raw.m)
    }
}

impl AlgebraSpec {
    pub fn new(r: u32, n: u32, m: u32) -> Result<Self, AlgebraError> {
        if r == 0 || n == 0 {
            return Err(AlgebraError::InvalidSpec { r, n, m });
        }
        Ok(AlgebraSpec { r, n, m })
    }

    /// Degree of every generator.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Number of controlled objects.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of obstacles.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Largest admissible generator index.
    pub fn points(&self) -> u32 {
        self.n + self.m
    }

    pub fn is_odd(&self) -> bool {
        self.r % 2 == 1
    }

    /// Maximum number of factors in a basis monomial.
    pub fn max_length(&self) -> u32 {
        if self.m == 0 {
            self.n - 1
        } else {
            self.n
        }
    }

    /// Highest degree carrying nonzero cohomology.
    pub fn top_degree(&self) -> u32 {
        self.r * self.max_length()
    }

    pub fn check(&self, g: Generator) -> Result<(), AlgebraError> {
        if g.i >= 1 && g.i < g.j && g.j <= self.points() {
            Ok(())
        } else {
            Err(AlgebraError::IndexOutOfRange {
                i: g.i,
                j: g.j,
                max: self.points(),
            })
        }
    }

    /// True when `g` lies in the ideal killed by the obstacle quotient.
    pub fn kills(&self, g: Generator) -> bool {
        g.i > self.n
    }

    /// All generators that survive the quotient, in lex order.
    pub fn live_generators(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in (i + 1)..=self.points() {
                out.push(Generator { i, j });
            }
        }
        out
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r={}, n={}, m={})", self.r, self.n, self.m)
    }
}

/// The class `e(i,j)`. Ordered lexicographically on `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub i: u32,
    pub j: u32,
}

impl Generator {
    pub const fn new(i: u32, j: u32) -> Self {
        Generator { i, j }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({},{})", self.i, self.j)
    }
}

/// A squarefree product of generators stored in strictly increasing lex order.
///
/// Monomials held by an [`Element`] additionally satisfy the basis conditions
/// (distinct first indices, all `<= n`); see [`Monomial::is_basis`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<Generator>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn factors(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, spec: &AlgebraSpec) -> u32 {
        spec.r * self.0.len() as u32
    }

    /// Checks every basis-monomial condition against `spec`.
    pub fn is_basis(&self, spec: &AlgebraSpec) -> bool {
        self.0
            .iter()
            .all(|g| spec.check(*g).is_ok() && g.i <= spec.n)
            && self.0.windows(2).all(|w| w[0].i < w[1].i)
            && self.0.len() as u32 <= spec.max_length()
    }

    /// Wraps factors already in strictly increasing order; `None` otherwise.
    pub fn from_factors(factors: Vec<Generator>) -> Option<Self> {
        factors
            .windows(2)
            .all(|w| w[0] < w[1])
            .then_some(Monomial(factors))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for g in &self.0 {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Sorts `word` into strictly increasing order and returns the Koszul sign
/// picked up on the way, or `None` when a factor repeats.
fn sort_word(word: &mut [Generator], odd: bool) -> Option<bool> {
    let mut negate = false;
    for a in 1..word.len() {
        let mut b = a;
        while b > 0 && word[b - 1] > word[b] {
            word.swap(b - 1, b);
            negate ^= odd;
            b -= 1;
        }
    }
    if word.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negate)
    }
}

fn accumulate(map: &mut BTreeMap<Monomial, BigInt>, key: Monomial, coeff: BigInt) {
    if coeff.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Pushes `coeff * word` (already validated) into the worklist after sorting.
fn enqueue(
    spec: &AlgebraSpec,
    mut word: Vec<Generator>,
    coeff: BigInt,
    work: &mut Vec<(Vec<Generator>, BigInt)>,
) {
    if word.iter().any(|g| spec.kills(*g)) {
        return;
    }
    match sort_word(&mut word, spec.is_odd()) {
        None => {}
        Some(true) => work.push((word, -coeff)),
        Some(false) => work.push((word, coeff)),
    }
}

fn straighten_into(
    spec: &AlgebraSpec,
    word: Vec<Generator>,
    coeff: BigInt,
    out: &mut BTreeMap<Monomial, BigInt>,
) {
    if coeff.is_zero() {
        return;
    }
    let mut work = Vec::new();
    enqueue(spec, word, coeff, &mut work);
    while let Some((word, coeff)) = work.pop() {
        // Sorted words put factors sharing a first index next to each other,
        // so the first adjacent clash is the lex-least one.
        let clash = word.windows(2).position(|w| w[0].i == w[1].i);
        let Some(p) = clash else {
            accumulate(out, Monomial(word), coeff);
            continue;
        };
        let (i, j, k) = (word[p].i, word[p].j, word[p + 1].j);
        let tail = Generator::new(j, k);
        if spec.kills(tail) {
            continue;
        }
        let mut first = word.clone();
        first[p + 1] = tail;
        let mut second = word;
        second[p] = Generator::new(i, k);
        second[p + 1] = tail;
        enqueue(spec, first, coeff.clone(), &mut work);
        enqueue(spec, second, -coeff, &mut work);
    }
}

/// Basis expansion of `coeff * word[0] * word[1] * ...` (product in the given order).
pub fn straighten(
    spec: &AlgebraSpec,
    word: &[Generator],
    coeff: &BigInt,
) -> Result<Element, AlgebraError> {
    for g in word {
        spec.check(*g)?;
    }
    let mut terms = BTreeMap::new();
    straighten_into(spec, word.to_vec(), coeff.clone(), &mut terms);
    Ok(Element { spec: *spec, terms })
}

/// An integer combination of basis monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    spec: AlgebraSpec,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Element {
    pub fn zero(spec: &AlgebraSpec) -> Self {
        Element {
            spec: *spec,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(spec: &AlgebraSpec) -> Self {
        Self::monomial(spec, Monomial::unit(), BigInt::one())
    }

    pub(crate) fn monomial(spec: &AlgebraSpec, mono: Monomial, coeff: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, mono, coeff);
        Element { spec: *spec, terms }
    }

    /// The class `e(i,j)`; zero when both indices are obstacles.
    pub fn generator(spec: &AlgebraSpec, i: u32, j: u32) -> Result<Self, AlgebraError> {
        straighten(spec, &[Generator::new(i, j)], &BigInt::one())
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, mono: &Monomial) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of the element when every term has the same degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|mono| mono.degree(&self.spec));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    fn same_spec(&self, other: &Element) -> Result<(), AlgebraError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(AlgebraError::SpecMismatch {
                left: self.spec,
                right: other.spec,
            })
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.same_spec(other)?;
        let mut terms = self.terms.clone();
        for (mono, c) in &other.terms {
            accumulate(&mut terms, mono.clone(), c.clone());
        }
        Ok(Element {
            spec: self.spec,
            terms,
        })
    }

    pub fn sub(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> Element {
        if c.is_zero() {
            return Element::zero(&self.spec);
        }
        Element {
            spec: self.spec,
            terms: self
                .terms
                .iter()
                .map(|(mono, k)| (mono.clone(), k * c))
                .collect(),
        }
    }

    pub fn multiply(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.same_spec(other)?;
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut word = Vec::with_capacity(a.len() + b.len());
                word.extend_from_slice(a.factors());
                word.extend_from_slice(b.factors());
                straighten_into(&self.spec, word, ca * cb, &mut terms);
            }
        }
        Ok(Element {
            spec: self.spec,
            terms,
        })
    }

    /// Structured form: one entry per term, coefficients as decimal strings.
    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(mono, c)| TermJson {
                coeff: c.to_string(),
                factors: mono.factors().iter().map(|g| [g.i, g.j]).collect(),
            })
            .collect()
    }

    /// Reads the structured form. Factor lists need not be in normal form.
    pub fn from_json_terms(spec: &AlgebraSpec, terms: &[TermJson]) -> Result<Self, AlgebraError> {
        let mut out = Element::zero(spec);
        for (idx, term) in terms.iter().enumerate() {
            let coeff: BigInt = term.coeff.trim().parse().map_err(|_| AlgebraError::Parse {
                pos: idx,
                msg: format!("bad coefficient {:?}", term.coeff),
            })?;
            let word: Vec<Generator> = term
                .factors
                .iter()
                .map(|[i, j]| Generator::new(*i, *j))
                .collect();
            let piece = straighten(spec, &word, &coeff)?;
            out = out.add(&piece)?;
        }
        Ok(out)
    }

    /// Parses the text form (`"-2*e(1,3)e(2,3) + e(1,2)"`) and straightens it.
    pub fn parse(spec: &AlgebraSpec, text: &str) -> Result<Self, AlgebraError> {
        let mut parser = Parser::new(text);
        let mut out = Element::zero(spec);
        for (coeff, word) in parser.expression()? {
            out = out.add(&straighten(spec, &word, &coeff)?)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (mono, c) in &self.terms {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let sign = if c.is_negative() { '-' } else { '+' };
            write!(f, "{sign}{}*{mono}", c.abs())?;
        }
        Ok(())
    }
}

/// One term of the JSON form of an [`Element`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub factors: Vec<[u32; 2]>,
}

/// Small recursive-descent reader for `c*e(i,j)e(k,l) + ...` expressions.
pub(crate) struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    pub(crate) fn err<T>(&self, msg: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    pub(crate) fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: u8) -> Result<(), AlgebraError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn index(&mut self) -> Result<u32, AlgebraError> {
        match self.digits() {
            Some(d) => d.parse().or_else(|_| self.err("index too large")),
            None => self.err("expected an index"),
        }
    }

    /// A product of generators, or the literal `1` for the empty product.
    pub(crate) fn word(&mut self) -> Result<Vec<Generator>, AlgebraError> {
        let mut word = Vec::new();
        loop {
            match self.peek() {
                Some(b'e') => {
                    self.pos += 1;
                    self.expect(b'(')?;
                    let i = self.index()?;
                    self.expect(b',')?;
                    let j = self.index()?;
                    self.expect(b')')?;
                    word.push(Generator::new(i, j));
                }
                Some(b'1') if word.is_empty() => {
                    self.pos += 1;
                    return Ok(word);
                }
                _ if word.is_empty() => return self.err("expected a monomial"),
                _ => return Ok(word),
            }
        }
    }

    /// Optional sign and optional `c*` prefix.
    pub(crate) fn coefficient(&mut self, leading: bool) -> Result<BigInt, AlgebraError> {
        let mut negative = false;
        if self.eat(b'-') {
            negative = true;
        } else if !self.eat(b'+') && !leading {
            return self.err("expected '+' or '-' between terms");
        }
        let save = self.pos;
        let mut coeff = BigInt::one();
        if let Some(d) = self.digits() {
            if self.eat(b'*') {
                coeff = d.parse().unwrap();
            } else {
                // A bare `1` is the unit monomial, handled by `word`.
                self.pos = save;
            }
        }
        Ok(if negative { -coeff } else { coeff })
    }

    fn expression(&mut self) -> Result<Vec<(BigInt, Vec<Generator>)>, AlgebraError> {
        if self.peek() == Some(b'0') {
            self.pos += 1;
            if self.at_end() {
                return Ok(Vec::new());
            }
            return self.err("trailing input after 0");
        }
        let mut out = Vec::new();
        let mut leading = true;
        while !self.at_end() {
            let coeff = self.coefficient(leading)?;
            let word = self.word()?;
            out.push((coeff, word));
            leading = false;
        }
        if out.is_empty() {
            return self.err("empty expression");
        }
        Ok(out)
    }
}

/// Basis monomials in lex order, optionally restricted to degree `degree`.
pub fn enumerate_basis(spec: &AlgebraSpec, degree: Option<u32>) -> Vec<Monomial> {
    fn walk(spec: &AlgebraSpec, i: u32, prefix: &mut Vec<Generator>, out: &mut Vec<Monomial>) {
        if i > spec.n {
            out.push(Monomial(prefix.clone()));
            return;
        }
        walk(spec, i + 1, prefix, out);
        for j in (i + 1)..=spec.points() {
            prefix.push(Generator::new(i, j));
            walk(spec, i + 1, prefix, out);
            prefix.pop();
        }
    }

    let mut out = Vec::new();
    walk(spec, 1, &mut Vec::new(), &mut out);
    if let Some(d) = degree {
        out.retain(|mono| mono.degree(spec) == d);
    }
    out.sort();
    out
}

/// Ranks of the cohomology groups, indexed by degree.
///
/// A basis monomial picks, for each object index `i`, either nothing or one
/// partner `j` among the `n + m - i` larger indices; the counts multiply.
pub fn poincare_polynomial(spec: &AlgebraSpec) -> Vec<BigUint> {
    let mut by_length = vec![BigUint::one()];
    for i in 1..=spec.n {
        let choices = BigUint::from(spec.points() - i);
        let mut next = vec![BigUint::zero(); by_length.len() + 1];
        for (len, count) in by_length.iter().enumerate() {
            next[len] += count;
            next[len + 1] += count * &choices;
        }
        by_length = next;
    }
    while by_length.len() > 1 && by_length.last().is_some_and(Zero::is_zero) {
        by_length.pop();
    }
    let r = spec.r as usize;
    let mut out = vec![BigUint::zero(); (by_length.len() - 1) * r + 1];
    for (len, count) in by_length.into_iter().enumerate() {
        out[len * r] = count;
    }
    out
}
