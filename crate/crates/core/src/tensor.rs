//! The tensor square `H ⊗ H` of a configuration-space cohomology ring.
//!
//! Multiplication follows the Koszul rule `(a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd`.
//! With this convention the zero-divisor `ē = 1⊗e - e⊗1` of an even-degree
//! generator squares to `-2 e⊗e`, and to zero in odd degree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, Element, Generator, Monomial, Parser};
use crate::error::AlgebraError;

pub type TensorKey = (Monomial, Monomial);

/// An integer combination of pure tensors of basis monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    spec: AlgebraSpec,
    terms: BTreeMap<TensorKey, BigInt>,
}

fn accumulate(map: &mut BTreeMap<TensorKey, BigInt>, key: TensorKey, coeff: BigInt) {
    if coeff.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(coeff);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// `a ⊗ b` with coefficients multiplied and no sign.
pub fn tensor(a: &Element, b: &Element) -> Result<TensorElement, AlgebraError> {
    if a.spec() != b.spec() {
        return Err(AlgebraError::SpecMismatch {
            left: *a.spec(),
            right: *b.spec(),
        });
    }
    let mut terms = BTreeMap::new();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            accumulate(&mut terms, (ma.clone(), mb.clone()), ca * cb);
        }
    }
    Ok(TensorElement {
        spec: *a.spec(),
        terms,
    })
}

/// The zero-divisor `1⊗e(i,j) - e(i,j)⊗1`. Zero when `i > n`.
pub fn zero_divisor(spec: &AlgebraSpec, i: u32, j: u32) -> Result<TensorElement, AlgebraError> {
    let e = Element::generator(spec, i, j)?;
    let one = Element::unit(spec);
    tensor(&one, &e)?.sub(&tensor(&e, &one)?)
}

impl TensorElement {
    pub fn zero(spec: &AlgebraSpec) -> Self {
        TensorElement {
            spec: *spec,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(spec: &AlgebraSpec) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((Monomial::unit(), Monomial::unit()), BigInt::one());
        TensorElement { spec: *spec, terms }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn terms(&self) -> &BTreeMap<TensorKey, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, left: &Monomial, right: &Monomial) -> BigInt {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree when homogeneous.
    pub fn total_degree(&self) -> Option<u32> {
        let mut degrees = self
            .terms
            .keys()
            .map(|(a, b)| a.degree(&self.spec) + b.degree(&self.spec));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    fn same_spec(&self, other: &TensorElement) -> Result<(), AlgebraError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(AlgebraError::SpecMismatch {
                left: self.spec,
                right: other.spec,
            })
        }
    }

    pub fn add(&self, other: &TensorElement) -> Result<TensorElement, AlgebraError> {
        self.same_spec(other)?;
        let mut terms = self.terms.clone();
        for (key, c) in &other.terms {
            accumulate(&mut terms, key.clone(), c.clone());
        }
        Ok(TensorElement {
            spec: self.spec,
            terms,
        })
    }

    pub fn sub(&self, other: &TensorElement) -> Result<TensorElement, AlgebraError> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> TensorElement {
        if c.is_zero() {
            return TensorElement::zero(&self.spec);
        }
        TensorElement {
            spec: self.spec,
            terms: self
                .terms
                .iter()
                .map(|(key, k)| (key.clone(), k * c))
                .collect(),
        }
    }

    /// Koszul-signed product; each side is straightened in the base ring.
    pub fn multiply(&self, other: &TensorElement) -> Result<TensorElement, AlgebraError> {
        self.same_spec(other)?;
        let spec = self.spec;
        let mut terms = BTreeMap::new();
        for ((a, b), cx) in &self.terms {
            for ((c, d), cy) in &other.terms {
                let odd_swap = spec.is_odd() && (b.len() * c.len()) % 2 == 1;
                let mut coeff = cx * cy;
                if odd_swap {
                    coeff = -coeff;
                }
                let left = Element::monomial(&spec, a.clone(), BigInt::one())
                    .multiply(&Element::monomial(&spec, c.clone(), BigInt::one()))?;
                if left.is_zero() {
                    continue;
                }
                let right = Element::monomial(&spec, b.clone(), BigInt::one())
                    .multiply(&Element::monomial(&spec, d.clone(), BigInt::one()))?;
                for (l, cl) in left.terms() {
                    for (r, cr) in right.terms() {
                        accumulate(&mut terms, (l.clone(), r.clone()), &coeff * cl * cr);
                    }
                }
            }
        }
        Ok(TensorElement { spec, terms })
    }

    /// Right multiplication by the zero-divisor of `g`, without building it.
    ///
    /// `(a⊗b)(1⊗e - e⊗1) = a⊗be - (-1)^{|b||e|} ae⊗b`.
    pub fn mul_zero_divisor(&self, g: Generator) -> Result<TensorElement, AlgebraError> {
        let spec = self.spec;
        spec.check(g)?;
        let mut terms = BTreeMap::new();
        if spec.kills(g) {
            return Ok(TensorElement { spec, terms });
        }
        let mut word = Vec::new();
        for ((a, b), c) in &self.terms {
            word.clear();
            word.extend_from_slice(b.factors());
            word.push(g);
            for (be, k) in crate::algebra::straighten(&spec, &word, c)?.terms() {
                accumulate(&mut terms, (a.clone(), be.clone()), k.clone());
            }
            let negate = !(spec.is_odd() && b.len() % 2 == 1);
            let coeff = if negate { -c.clone() } else { c.clone() };
            word.clear();
            word.extend_from_slice(a.factors());
            word.push(g);
            for (ae, k) in crate::algebra::straighten(&spec, &word, &coeff)?.terms() {
                accumulate(&mut terms, (ae.clone(), b.clone()), k.clone());
            }
        }
        Ok(TensorElement { spec, terms })
    }

    /// `self` raised to the power `k` (`k = 0` gives the unit).
    pub fn pow(&self, k: u32) -> Result<TensorElement, AlgebraError> {
        let mut acc = TensorElement::unit(&self.spec);
        for _ in 0..k {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Image under the ring multiplication `a⊗b ↦ ab`.
    pub fn contract(&self) -> Result<Element, AlgebraError> {
        let mut out = Element::zero(&self.spec);
        for ((a, b), c) in &self.terms {
            let left = Element::monomial(&self.spec, a.clone(), c.clone());
            let right = Element::monomial(&self.spec, b.clone(), BigInt::one());
            out = out.add(&left.multiply(&right)?)?;
        }
        Ok(out)
    }

    pub fn to_json_terms(&self) -> Vec<TensorTermJson> {
        let pairs = |mono: &Monomial| mono.factors().iter().map(|g| [g.i, g.j]).collect();
        self.terms
            .iter()
            .map(|((a, b), c)| TensorTermJson {
                coeff: c.to_string(),
                left: pairs(a),
                right: pairs(b),
            })
            .collect()
    }

    /// Reads the structured form, straightening both sides of every term.
    pub fn from_json_terms(
        spec: &AlgebraSpec,
        terms: &[TensorTermJson],
    ) -> Result<Self, AlgebraError> {
        let mut out = TensorElement::zero(spec);
        for (idx, term) in terms.iter().enumerate() {
            let coeff: BigInt = term.coeff.trim().parse().map_err(|_| AlgebraError::Parse {
                pos: idx,
                msg: format!("bad coefficient {:?}", term.coeff),
            })?;
            let word = |pairs: &[[u32; 2]]| -> Vec<Generator> {
                pairs.iter().map(|[i, j]| Generator::new(*i, *j)).collect()
            };
            let left = crate::algebra::straighten(spec, &word(&term.left), &coeff)?;
            let right = crate::algebra::straighten(spec, &word(&term.right), &BigInt::one())?;
            out = out.add(&tensor(&left, &right)?)?;
        }
        Ok(out)
    }

    /// Parses `c*(mono|mono)` terms, e.g. `"-2*(e(1,2)|e(1,2)) + (1|e(1,3))"`.
    pub fn parse(spec: &AlgebraSpec, text: &str) -> Result<Self, AlgebraError> {
        let mut parser = Parser::new(text);
        let mut out = TensorElement::zero(spec);
        if parser.eat(b'0') {
            return if parser.at_end() {
                Ok(out)
            } else {
                parser.err("trailing input after 0")
            };
        }
        let mut leading = true;
        loop {
            if parser.at_end() {
                if leading {
                    return parser.err("empty expression");
                }
                return Ok(out);
            }
            let coeff = parser.coefficient(leading)?;
            parser.expect(b'(')?;
            let left = parser.word()?;
            parser.expect(b'|')?;
            let right = parser.word()?;
            parser.expect(b')')?;
            let left = crate::algebra::straighten(spec, &left, &coeff)?;
            let right = crate::algebra::straighten(spec, &right, &BigInt::one())?;
            out = out.add(&tensor(&left, &right)?)?;
            leading = false;
        }
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, ((a, b), c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            write!(f, "{sign}{}*({a}|{b})", c.abs())?;
        }
        Ok(())
    }
}

/// One term of the JSON form of a [`TensorElement`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorTermJson {
    pub coeff: String,
    pub left: Vec<[u32; 2]>,
    pub right: Vec<[u32; 2]>,
}
