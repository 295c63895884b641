//! Exact coefficient field: rational functions in the deformation parameters.
//!
//! A [`Scalar`] is a reduced fraction of two [`ParamPoly`] values. The
//! parameters are `u`, `s`, `q` plus the six unknowns used by the ansatz
//! solver. Laurent monomials (`u^(-2)`) are accepted on input and folded into
//! the denominator, so every canonical scalar has polynomial numerator and
//! denominator, no common factor, and a denominator whose lex-leading
//! coefficient is 1.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ground field of every coefficient.
pub type Rational = BigRational;

pub const NPARAMS: usize = 9;

/// Formal parameters known to the kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Param {
    U,
    S,
    Q,
    K,
    C21,
    Lam,
    Lam12,
    Mu,
    Mu12,
}

impl Param {
    pub const ALL: [Param; NPARAMS] = [
        Param::U,
        Param::S,
        Param::Q,
        Param::K,
        Param::C21,
        Param::Lam,
        Param::Lam12,
        Param::Mu,
        Param::Mu12,
    ];

    /// Unknown coefficients of the quadratic one-form ansatz.
    pub const UNKNOWNS: [Param; 6] = [
        Param::K,
        Param::C21,
        Param::Lam,
        Param::Lam12,
        Param::Mu,
        Param::Mu12,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::U => "u",
            Param::S => "s",
            Param::Q => "q",
            Param::K => "k",
            Param::C21 => "c21",
            Param::Lam => "lam",
            Param::Lam12 => "lam12",
            Param::Mu => "mu",
            Param::Mu12 => "mu12",
        }
    }

    pub fn from_name(name: &str) -> Option<Param> {
        Param::ALL.iter().copied().find(|p| p.name() == name)
    }

    pub fn is_unknown(self) -> bool {
        Param::UNKNOWNS.contains(&self)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector indexed by [`Param::index`].
pub type Exps = [i16; NPARAMS];

const ZERO_EXPS: Exps = [0; NPARAMS];

fn exps_add(a: &Exps, b: &Exps) -> Exps {
    let mut r = *a;
    for (x, y) in r.iter_mut().zip(b) {
        *x += *y;
    }
    r
}

fn exps_sub(a: &Exps, b: &Exps) -> Exps {
    let mut r = *a;
    for (x, y) in r.iter_mut().zip(b) {
        *x -= *y;
    }
    r
}

fn exps_min(a: &Exps, b: &Exps) -> Exps {
    let mut r = *a;
    for (x, y) in r.iter_mut().zip(b) {
        *x = (*x).min(*y);
    }
    r
}

fn exps_max(a: &Exps, b: &Exps) -> Exps {
    let mut r = *a;
    for (x, y) in r.iter_mut().zip(b) {
        *x = (*x).max(*y);
    }
    r
}

fn exps_ge(a: &Exps, b: &Exps) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Sparse multivariate Laurent polynomial with rational coefficients.
///
/// Terms are kept sorted by exponent vector in descending lex order with no
/// zero coefficients, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    terms: Vec<(Exps, Rational)>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            ParamPoly {
                terms: vec![(ZERO_EXPS, c)],
            }
        }
    }

    pub fn monomial(c: Rational, exps: Exps) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            ParamPoly {
                terms: vec![(exps, c)],
            }
        }
    }

    pub fn param(p: Param) -> Self {
        let mut e = ZERO_EXPS;
        e[p.index()] = 1;
        Self::monomial(Rational::one(), e)
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exps, Rational)>) -> Self {
        let mut acc: BTreeMap<Exps, Rational> = BTreeMap::new();
        for (e, c) in terms {
            let slot = acc.entry(e).or_insert_with(Rational::zero);
            *slot += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.reverse();
        ParamPoly { terms }
    }

    pub fn terms(&self) -> &[(Exps, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == ZERO_EXPS)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Exps, Rational)> {
        self.terms.first()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Highest exponent of `p` (meaningful for nonnegative exponents).
    pub fn degree_in(&self, p: Param) -> i16 {
        self.terms.iter().map(|(e, _)| e[p.index()]).max().unwrap_or(0)
    }

    pub fn mentions(&self, p: Param) -> bool {
        self.terms.iter().any(|(e, _)| e[p.index()] != 0)
    }

    fn min_exps(&self) -> Exps {
        let mut it = self.terms.iter();
        let first = match it.next() {
            Some((e, _)) => *e,
            None => return ZERO_EXPS,
        };
        it.fold(first, |acc, (e, _)| exps_min(&acc, e))
    }

    /// Multiplies by the monomial with exponents `shift` (may be negative).
    pub fn shift(&self, shift: &Exps) -> Self {
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (exps_add(e, shift), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            match ea.cmp(eb) {
                std::cmp::Ordering::Greater => {
                    out.push((*ea, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((*eb, cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((*ea, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().cloned());
        ParamPoly { terms: out }
    }

    pub fn neg(&self) -> Self {
        ParamPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.shift(e).scale(c);
        }
        if self.terms.len() == 1 {
            return other.mul(self);
        }
        let mut acc: BTreeMap<Exps, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let slot = acc.entry(exps_add(ea, eb)).or_insert_with(Rational::zero);
                *slot += ca * cb;
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.reverse();
        ParamPoly { terms }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            let inv = c.recip();
            let neg = e.map(|x| -x);
            return Some(self.shift(&neg).scale(&inv));
        }
        let (lead_e, lead_c) = other.terms[0].clone();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((e, c)) = rem.terms.first().cloned() {
            if !exps_ge(&e, &lead_e) {
                return None;
            }
            let te = exps_sub(&e, &lead_e);
            let tc = c / &lead_c;
            rem = rem.sub(&other.shift(&te).scale(&tc));
            quot.push((te, tc));
        }
        Some(ParamPoly::from_terms(quot))
    }

    /// Scales to coprime integer coefficients with a positive leading one.
    fn integer_primitive(&self) -> Self {
        let Some((_, lead)) = self.terms.first() else {
            return Self::zero();
        };
        let den = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let num = self
            .terms
            .iter()
            .fold(BigInt::zero(), |acc, (_, c)| acc.gcd(&(c.numer() * &den / c.denom())));
        let mut f = Rational::new(den, num);
        if lead.is_negative() {
            f = -f;
        }
        self.scale(&f)
    }

    /// Scales so that the lex-leading coefficient is 1.
    fn monic(&self) -> Self {
        match self.terms.first() {
            Some((_, c)) => self.scale(&c.recip()),
            None => Self::zero(),
        }
    }

    /// Coefficients of `self` viewed as univariate in `p` (nonnegative
    /// exponents in `p` required); index = exponent.
    fn univariate(&self, p: Param) -> Vec<ParamPoly> {
        let idx = p.index();
        let deg = self.degree_in(p).max(0) as usize;
        let mut buckets: Vec<Vec<(Exps, Rational)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let mut rest = *e;
            let k = rest[idx] as usize;
            rest[idx] = 0;
            buckets[k].push((rest, c.clone()));
        }
        buckets.into_iter().map(ParamPoly::from_terms).collect()
    }

    /// Evaluates with `p` replaced by `value`, returning a [`Scalar`].
    pub fn substitute(&self, p: Param, value: &Scalar) -> Result<Scalar> {
        let idx = p.index();
        let mut powers: BTreeMap<i16, Scalar> = BTreeMap::new();
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let k = e[idx];
            let mut rest = *e;
            rest[idx] = 0;
            let pw = match powers.get(&k) {
                Some(v) => v.clone(),
                None => {
                    let v = value.powi(k as i32)?;
                    powers.insert(k, v.clone());
                    v
                }
            };
            let term = Scalar::from_poly(ParamPoly::monomial(c.clone(), rest));
            acc = &acc + &(&term * &pw);
        }
        Ok(acc)
    }
}

/// Multivariate gcd over Q of polynomials with nonnegative exponents,
/// normalized to lex-leading coefficient 1.
pub fn poly_gcd(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let ma = a.min_exps();
    let mb = b.min_exps();
    let common = exps_min(&ma, &mb).map(|x| x.max(0));
    let a1 = a.shift(&ma.map(|x| -x));
    let b1 = b.shift(&mb.map(|x| -x));
    gcd_nonneg(&a1, &b1).shift(&common)
}

/// Variable of least degree among those present.
fn main_var(a: &ParamPoly, b: &ParamPoly) -> Option<Param> {
    Param::ALL
        .iter()
        .copied()
        .filter(|&p| a.degree_in(p) > 0 || b.degree_in(p) > 0)
        .min_by_key(|&p| a.degree_in(p).max(b.degree_in(p)))
}

const MOD_P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_P as u128) as u64
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, MOD_P - 2)
}

fn rational_mod(c: &Rational) -> Option<u64> {
    let p = BigInt::from(MOD_P);
    let d = c.denom().mod_floor(&p);
    if d.is_zero() {
        return None;
    }
    let n = c.numer().mod_floor(&p);
    let to_u64 = |x: BigInt| x.to_u64_digits().1.first().copied().unwrap_or(0);
    Some(mulmod(to_u64(n), invmod(to_u64(d))))
}

/// Image of `a` in `F_p[v]` with every other parameter set to `point`.
/// `None` if a denominator vanishes or the degree in `v` drops.
fn univariate_image(a: &ParamPoly, v: Param, point: &[u64; NPARAMS]) -> Option<Vec<u64>> {
    let deg = a.degree_in(v) as usize;
    let mut out = vec![0u64; deg + 1];
    for (e, c) in &a.terms {
        let mut t = rational_mod(c)?;
        for p in Param::ALL {
            if p != v && e[p.index()] != 0 {
                t = mulmod(t, powmod(point[p.index()], e[p.index()] as u64));
            }
        }
        let k = e[v.index()] as usize;
        out[k] = (out[k] + t) % MOD_P;
    }
    (out[deg] != 0).then_some(out)
}

fn univariate_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    let trim = |x: &mut Vec<u64>| {
        while x.last() == Some(&0) {
            x.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = invmod(*b.last().expect("nonzero"));
        while a.len() >= b.len() {
            let f = mulmod(*a.last().expect("nonzero"), inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + MOD_P - mulmod(f, bc)) % MOD_P;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Sufficient test for `gcd(a, b) = 1`. A nonconstant gcd has positive
/// degree in some variable, and its modular image keeps that degree as long
/// as the leading coefficients survive, so a constant image gcd in every
/// variable proves coprimality. Inputs have nonnegative exponents.
fn provably_coprime(a: &ParamPoly, b: &ParamPoly) -> bool {
    'vars: for v in Param::ALL {
        if a.degree_in(v) == 0 || b.degree_in(v) == 0 {
            continue;
        }
        for attempt in 0..3u64 {
            let mut point = [0u64; NPARAMS];
            for (i, x) in point.iter_mut().enumerate() {
                *x = 1_000_003 + 7_919 * (i as u64 + 1) + 104_729 * attempt;
            }
            let (Some(ia), Some(ib)) = (univariate_image(a, v, &point), univariate_image(b, v, &point)) else {
                continue;
            };
            if univariate_gcd_degree(ia, ib) > 0 {
                return false;
            }
            continue 'vars;
        }
        return false;
    }
    true
}

fn content_in(a: &ParamPoly, p: Param) -> ParamPoly {
    let mut g = ParamPoly::zero();
    for c in a.univariate(p) {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.monic() } else { gcd_nonneg(&g, &c) };
        if g.is_constant() {
            return ParamPoly::one();
        }
    }
    g
}

fn pseudo_rem(a: &ParamPoly, b: &ParamPoly, p: Param) -> ParamPoly {
    let bc = b.univariate(p);
    let db = bc.len() - 1;
    let lb = bc[db].clone();
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let rc = r.univariate(p);
        let dr = rc.len() - 1;
        if dr < db {
            return r;
        }
        let lr = rc[dr].clone();
        let mut e = ZERO_EXPS;
        e[p.index()] = (dr - db) as i16;
        r = r.mul(&lb).sub(&b.mul(&lr).shift(&e)).integer_primitive();
    }
}

fn primitive_part(a: &ParamPoly, p: Param) -> ParamPoly {
    let c = content_in(a, p);
    a.div_exact(&c).expect("content divides polynomial")
}

fn gcd_nonneg(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return ParamPoly::one();
    }
    if a.is_monomial() || b.is_monomial() {
        let m = exps_min(&a.min_exps(), &b.min_exps());
        return ParamPoly::monomial(Rational::one(), m);
    }
    if provably_coprime(a, b) {
        return ParamPoly::one();
    }
    let p = match main_var(a, b) {
        Some(p) => p,
        None => return ParamPoly::one(),
    };
    if a.degree_in(p) == 0 {
        return gcd_nonneg(a, &content_in(b, p));
    }
    if b.degree_in(p) == 0 {
        return gcd_nonneg(&content_in(a, p), b);
    }
    let ca = content_in(a, p);
    let cb = content_in(b, p);
    let c = gcd_nonneg(&ca, &cb);
    let mut f = a.div_exact(&ca).expect("content divides").integer_primitive();
    let mut g = b.div_exact(&cb).expect("content divides").integer_primitive();
    if f.degree_in(p) < g.degree_in(p) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        let r = pseudo_rem(&f, &g, p);
        if r.is_zero() {
            break;
        }
        if r.degree_in(p) == 0 {
            g = ParamPoly::one();
            break;
        }
        f = g;
        g = primitive_part(&r, p).integer_primitive();
    }
    let g = if g.is_constant() {
        ParamPoly::one()
    } else {
        primitive_part(&g, p)
    };
    c.mul(&g).monic()
}

/// Canonical element of the rational function field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: ParamPoly,
    den: ParamPoly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: ParamPoly::zero(),
            den: ParamPoly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            num: ParamPoly::one(),
            den: ParamPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar {
            num: ParamPoly::constant(r),
            den: ParamPoly::one(),
        }
    }

    pub fn param(p: Param) -> Self {
        Scalar {
            num: ParamPoly::param(p),
            den: ParamPoly::one(),
        }
    }

    /// `p^e` for any integer exponent.
    pub fn param_pow(p: Param, e: i32) -> Self {
        let mut ex = ZERO_EXPS;
        ex[p.index()] = e as i16;
        Self::from_poly(ParamPoly::monomial(Rational::one(), ex))
    }

    pub fn u() -> Self {
        Self::param(Param::U)
    }

    pub fn s() -> Self {
        Self::param(Param::S)
    }

    pub fn q() -> Self {
        Self::param(Param::Q)
    }

    /// `u^e`; the most common coefficient shape in this crate.
    pub fn upow(e: i32) -> Self {
        Self::param_pow(Param::U, e)
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        Self::canonical(p, ParamPoly::one()).expect("unit denominator")
    }

    /// Builds `num / den` in canonical form.
    pub fn fraction(num: ParamPoly, den: ParamPoly) -> Result<Self> {
        Self::canonical(num, den)
    }

    fn canonical(num: ParamPoly, den: ParamPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar::zero());
        }
        let shift = exps_min(&num.min_exps(), &den.min_exps()).map(|x| -x);
        let mut num = num.shift(&shift);
        let mut den = den.shift(&shift);
        if !den.is_monomial() && !num.is_monomial() {
            let g = gcd_nonneg(&num, &den);
            if !g.is_constant() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let lc = den.terms[0].1.clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(Scalar { num, den })
    }

    pub fn numerator(&self) -> &ParamPoly {
        &self.num
    }

    pub fn denominator(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num == ParamPoly::one()
    }

    /// Rational value when the scalar mentions no parameter.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn mentions(&self, p: Param) -> bool {
        self.num.mentions(p) || self.den.mentions(p)
    }

    pub fn mentions_any(&self, ps: &[Param]) -> bool {
        ps.iter().any(|&p| self.mentions(p))
    }

    /// Number of terms in numerator and denominator; pivot heuristic.
    pub fn weight(&self) -> usize {
        self.num.len() + self.den.len()
    }

    /// Denominator is a monomial, so the value is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::canonical(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn powi(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.inv()?.powi(-e);
        }
        if self.num.is_monomial() && self.den.is_monomial() {
            let (en, cn) = &self.num.terms[0];
            let (ed, cd) = &self.den.terms[0];
            let c = num_traits::pow(cn / cd, e as usize);
            let ex = exps_sub(en, ed).map(|x| x * e as i16);
            return Ok(Self::from_poly(ParamPoly::monomial(c, ex)));
        }
        let mut r = Scalar::one();
        for _ in 0..e {
            r = &r * self;
        }
        Ok(r)
    }

    fn add_impl(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::canonical(self.num.add(&other.num), self.den.clone())
                .expect("nonzero denominator");
        }
        if self.den.is_monomial() && other.den.is_monomial() {
            let ea = self.den.terms[0].0;
            let eb = other.den.terms[0].0;
            let l = exps_max(&ea, &eb);
            let a = self.num.shift(&exps_sub(&l, &ea));
            let b = other.num.shift(&exps_sub(&l, &eb));
            let den = ParamPoly::monomial(Rational::one(), l);
            return Self::canonical(a.add(&b), den).expect("nonzero denominator");
        }
        let g = poly_gcd(&self.den, &other.den);
        let b = other.den.div_exact(&g).expect("gcd divides");
        let d = self.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&b).add(&other.num.mul(&d));
        if num.is_zero() {
            return Scalar::zero();
        }
        let h = poly_gcd(&num, &g);
        let num = num.div_exact(&h).expect("gcd divides");
        let den = self.den.mul(&b).div_exact(&h).expect("gcd divides");
        Self::canonical(num, den).expect("nonzero denominator")
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_monomial() && other.den.is_monomial() {
            return Self::canonical(self.num.mul(&other.num), self.den.mul(&other.den))
                .expect("nonzero denominator");
        }
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = other.den.div_exact(&g1).expect("gcd divides");
        let b = other.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        Self::canonical(a.mul(&b), d1.mul(&d2)).expect("nonzero denominator")
    }

    /// Applies bindings in sequence; each binding sees the result of the
    /// previous ones.
    pub fn substitute(&self, bindings: &[(Param, Scalar)]) -> Result<Scalar> {
        let mut cur = self.clone();
        for (p, v) in bindings {
            if !cur.mentions(*p) {
                continue;
            }
            let n = cur.num.substitute(*p, v)?;
            let d = cur.den.substitute(*p, v)?;
            if d.is_zero() {
                return Err(Error::VanishingDenominator {
                    binding: format!("{} = {}", p, v),
                });
            }
            cur = n.checked_div(&d)?;
        }
        Ok(cur)
    }

    /// Parses the scalar grammar (`u`, `s`, `q`, integers, `^`, `*`, `/`, `+`, `-`).
    pub fn parse(text: &str) -> Result<Scalar> {
        crate::freealg::parse_scalar(text)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_impl(rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_impl(&-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_impl(rhs)
    }
}

/// Panics on division by zero; use [`Scalar::checked_div`] for a `Result`.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

fn fmt_monomial(e: &Exps) -> Vec<String> {
    Param::ALL
        .iter()
        .filter_map(|p| {
            let k = e[p.index()];
            match k {
                0 => None,
                1 => Some(p.name().to_string()),
                k if k < 0 => Some(format!("{}^({})", p.name(), k)),
                k => Some(format!("{}^{}", p.name(), k)),
            }
        })
        .collect()
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Renders a sequence of (exponents, coefficient) terms as a signed sum.
fn fmt_terms(terms: &[(Exps, Rational)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let factors = fmt_monomial(e);
        if factors.is_empty() {
            out.push_str(&fmt_rational(&abs));
        } else {
            if !abs.is_one() {
                out.push_str(&fmt_rational(&abs));
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

impl Scalar {
    /// True when the rendering is a single signed term (no parentheses needed
    /// as a factor apart from a leading sign).
    pub fn is_single_term(&self) -> bool {
        self.den.is_monomial() && self.num.len() <= 1
    }
}

/// Unknowns first, then `q`, `s`, `u`; higher powers first within each.
fn display_order(terms: &[(Exps, Rational)]) -> Vec<(Exps, Rational)> {
    let mut v = terms.to_vec();
    v.sort_by(|a, b| {
        let ka: Vec<i16> = a.0.iter().rev().copied().collect();
        let kb: Vec<i16> = b.0.iter().rev().copied().collect();
        kb.cmp(&ka)
    });
    v
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_monomial() {
            let (ed, _) = &self.den.terms[0];
            let neg = ed.map(|x| -x);
            let shifted = self.num.shift(&neg);
            return f.write_str(&fmt_terms(&display_order(&shifted.terms)));
        }
        write!(
            f,
            "({})/({})",
            fmt_terms(&display_order(&self.num.terms)),
            fmt_terms(&display_order(&self.den.terms))
        )
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Scalar::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    #[test]
    fn inverse_pair_cancels() {
        assert!((&Scalar::u() * &Scalar::upow(-1)).is_one());
        assert!((&(&Scalar::u() * &Scalar::upow(-1)) - &Scalar::one()).is_zero());
    }

    #[test]
    fn factorization_is_forced() {
        assert_eq!(p("(u^2 - 1)/(u - 1)"), p("u + 1"));
    }

    #[test]
    fn q_minus_u2_stays_put() {
        let x = p("q - u^2");
        assert!(!x.is_zero());
        assert_eq!(x.to_string(), "q - u^2");
    }

    #[test]
    fn s_minus_s_is_zero() {
        assert!((&Scalar::s() - &Scalar::s()).is_zero());
    }

    #[test]
    fn division_by_zero_errors() {
        assert!(matches!(Scalar::one().checked_div(&Scalar::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn substitution_examples() {
        let r = p("q - u^2").substitute(&[(Param::Q, p("u^2"))]).unwrap();
        assert!(r.is_zero());
        let r = p("u^2").substitute(&[(Param::U, Scalar::one())]).unwrap();
        assert!(r.is_one());
        let r = p("s/u^2")
            .substitute(&[(Param::U, Scalar::from_int(2)), (Param::S, Scalar::from_int(3))])
            .unwrap();
        assert_eq!(r, Scalar::from_ratio(3, 4));
    }

    #[test]
    fn vanishing_denominator_names_binding() {
        let err = p("1/(u - 1)").substitute(&[(Param::U, Scalar::one())]).unwrap_err();
        match err {
            Error::VanishingDenominator { binding } => assert!(binding.contains("u = 1")),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn laurent_rendering() {
        assert_eq!(p("-s/u^2").to_string(), "-u^(-2)*s");
        assert_eq!(p("u^(-3) + 2*u").to_string(), "2*u + u^(-3)");
        assert_eq!(p("3/4").to_string(), "3/4");
    }

    #[test]
    fn non_monomial_denominator_is_reduced() {
        let x = p("(u^4 - 1)/(u^3 - u^2 + u - 1)");
        assert_eq!(x, p("u + 1"));
        let y = p("(u*s + s)/(u^2 - 1)");
        assert_eq!(y.to_string(), "(s)/(u - 1)");
    }

    #[test]
    fn gcd_multivariate() {
        let a = p("(u + s)*(u - q)").numerator().clone();
        let b = p("(u + s)*(s + 2)").numerator().clone();
        let g = poly_gcd(&a, &b);
        assert_eq!(Scalar::from_poly(g), p("u + s"));
    }
}
