//! Sparse multivariate polynomials with exact coefficients in `F_p` or `Z`.
//!
//! A [`Ring`] fixes the variable count, the coefficient domain, and the
//! variable-naming scheme used by the text grammar. Polynomials are stored
//! as sorted term tables keyed by a fixed internal graded-lex order, so
//! polynomial identity never depends on a user-chosen monomial order.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial-division primality test; moduli here stay tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    base %= p;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Inverse mod a prime, via Fermat.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// An element of `F_p` carrying its modulus, used at API surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    pub p: u64,
    pub value: u64,
}

impl FieldElem {
    pub fn new(p: u64, value: i64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldElem {
            p,
            value: value.rem_euclid(p as i64) as u64,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Option<FieldElem> {
        if self.value == 0 {
            None
        } else {
            Some(FieldElem {
                p: self.p,
                value: inv_mod(self.value, self.p),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Fp(u64),
    Int,
}

/// Variable naming scheme for the text grammar.
///
/// `X` is `x1..xn`; `HL` is `h1..h(n-1)` plus `l` for the last variable
/// (vertex-decomposition contexts); `C` is `c1..cN` (Bott-Samelson
/// contexts); `Matrix` flattens an `rows x cols` matrix of variables
/// row-major, printed `m<i>_<j>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarScheme {
    X,
    HL,
    C,
    Matrix { rows: usize, cols: usize },
}

#[derive(Debug)]
struct RingInner {
    arity: usize,
    domain: Domain,
    scheme: VarScheme,
}

/// Shared, immutable ring context: arity + coefficient domain + naming.
#[derive(Debug, Clone)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    // The naming scheme is presentation only; x1*x2 and h1*l in two
    // rings of the same arity and domain are the same polynomial.
    fn eq(&self, other: &Self) -> bool {
        self.0.arity == other.0.arity && self.0.domain == other.0.domain
    }
}
impl Eq for Ring {}

impl Ring {
    pub fn fp(p: u64, arity: usize) -> Result<Ring> {
        Ring::with_scheme(Domain::Fp(p), arity, VarScheme::X)
    }

    pub fn int(arity: usize) -> Ring {
        Ring::with_scheme(Domain::Int, arity, VarScheme::X).expect("Int ring")
    }

    pub fn with_scheme(domain: Domain, arity: usize, scheme: VarScheme) -> Result<Ring> {
        if let Domain::Fp(p) = domain {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        if let VarScheme::Matrix { rows, cols } = scheme {
            if rows * cols != arity {
                return Err(Error::Parse(format!(
                    "matrix scheme {rows}x{cols} does not match arity {arity}"
                )));
            }
        }
        Ok(Ring(Arc::new(RingInner {
            arity,
            domain,
            scheme,
        })))
    }

    pub fn arity(&self) -> usize {
        self.0.arity
    }

    pub fn domain(&self) -> Domain {
        self.0.domain
    }

    pub fn scheme(&self) -> VarScheme {
        self.0.scheme
    }

    pub fn char_p(&self) -> Option<u64> {
        match self.0.domain {
            Domain::Fp(p) => Some(p),
            Domain::Int => None,
        }
    }

    pub fn require_fp(&self) -> Result<u64> {
        self.char_p().ok_or(Error::ExpectedFp)
    }

    pub fn is_int(&self) -> bool {
        self.0.domain == Domain::Int
    }

    pub fn var_name(&self, i: usize) -> String {
        debug_assert!(i < self.0.arity);
        match self.0.scheme {
            VarScheme::X => format!("x{}", i + 1),
            VarScheme::C => format!("c{}", i + 1),
            VarScheme::HL => {
                if i + 1 == self.0.arity {
                    "l".to_string()
                } else {
                    format!("h{}", i + 1)
                }
            }
            VarScheme::Matrix { cols, .. } => {
                format!("m{}_{}", i / cols + 1, i % cols + 1)
            }
        }
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        let n = self.0.arity;
        match self.0.scheme {
            VarScheme::X => name.strip_prefix('x')?.parse::<usize>().ok().and_then(|k| {
                (1..=n).contains(&k).then_some(k - 1)
            }),
            VarScheme::C => name.strip_prefix('c')?.parse::<usize>().ok().and_then(|k| {
                (1..=n).contains(&k).then_some(k - 1)
            }),
            VarScheme::HL => {
                if name == "l" {
                    Some(n - 1)
                } else {
                    name.strip_prefix('h')?
                        .parse::<usize>()
                        .ok()
                        .and_then(|k| (1..n).contains(&k).then_some(k - 1))
                }
            }
            VarScheme::Matrix { rows, cols } => {
                let rest = name.strip_prefix('m')?;
                let (r, c) = rest.split_once('_')?;
                let (r, c) = (r.parse::<usize>().ok()?, c.parse::<usize>().ok()?);
                ((1..=rows).contains(&r) && (1..=cols).contains(&c))
                    .then(|| (r - 1) * cols + (c - 1))
            }
        }
    }

    /// Same domain and scheme with one variable removed (projection onto H
    /// in vertex-decomposition contexts).
    pub fn contract(&self, drop: usize) -> Ring {
        debug_assert!(drop < self.0.arity);
        let scheme = match self.0.scheme {
            VarScheme::HL if drop + 1 == self.0.arity => VarScheme::X,
            VarScheme::Matrix { .. } => VarScheme::X,
            s => s,
        };
        Ring::with_scheme(self.0.domain, self.0.arity - 1, scheme).expect("contract")
    }

    /// Same domain with `extra` auxiliary variables appended (used for
    /// intersection / saturation constructions).
    pub fn extend(&self, extra: usize) -> Ring {
        Ring::with_scheme(self.0.domain, self.0.arity + extra, VarScheme::X).expect("extend")
    }

    pub fn zero(&self) -> Poly {
        Poly {
            ring: self.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(&self) -> Poly {
        self.constant_i64(1)
    }

    pub fn var(&self, i: usize) -> Poly {
        assert!(i < self.0.arity, "variable index out of range");
        let mut exps = vec![0u16; self.0.arity];
        exps[i] = 1;
        Poly::from_terms(
            self.clone(),
            vec![(Monomial::new(exps), self.coeff_from_i64(1))],
        )
    }

    pub fn monomial(&self, exps: Vec<u16>) -> Poly {
        assert_eq!(exps.len(), self.0.arity);
        Poly::from_terms(
            self.clone(),
            vec![(Monomial::new(exps), self.coeff_from_i64(1))],
        )
    }

    pub fn constant_i64(&self, c: i64) -> Poly {
        let coeff = self.coeff_from_i64(c);
        if self.coeff_is_zero(&coeff) {
            return self.zero();
        }
        Poly::from_terms(self.clone(), vec![(Monomial::one(self.0.arity), coeff)])
    }

    pub(crate) fn coeff_from_i64(&self, c: i64) -> Coeff {
        match self.0.domain {
            Domain::Fp(p) => Coeff::Fp(c.rem_euclid(p as i64) as u64),
            Domain::Int => Coeff::Int(BigInt::from(c)),
        }
    }

    pub(crate) fn coeff_from_bigint(&self, c: BigInt) -> Coeff {
        match self.0.domain {
            Domain::Fp(p) => {
                let m = c.mod_floor(&BigInt::from(p));
                Coeff::Fp(m.to_u64().expect("reduced residue fits in u64"))
            }
            Domain::Int => Coeff::Int(c),
        }
    }

    pub(crate) fn coeff_is_zero(&self, c: &Coeff) -> bool {
        match c {
            Coeff::Fp(v) => *v == 0,
            Coeff::Int(v) => v.is_zero(),
        }
    }

    pub(crate) fn coeff_add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self.0.domain, a, b) {
            (Domain::Fp(p), Coeff::Fp(a), Coeff::Fp(b)) => Coeff::Fp((a + b) % p),
            (Domain::Int, Coeff::Int(a), Coeff::Int(b)) => Coeff::Int(a + b),
            _ => panic!("coefficient domain mismatch"),
        }
    }

    pub(crate) fn coeff_mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self.0.domain, a, b) {
            (Domain::Fp(p), Coeff::Fp(a), Coeff::Fp(b)) => Coeff::Fp(a * b % p),
            (Domain::Int, Coeff::Int(a), Coeff::Int(b)) => Coeff::Int(a * b),
            _ => panic!("coefficient domain mismatch"),
        }
    }

    pub(crate) fn coeff_neg(&self, a: &Coeff) -> Coeff {
        match (self.0.domain, a) {
            (Domain::Fp(p), Coeff::Fp(a)) => Coeff::Fp((p - a % p) % p),
            (Domain::Int, Coeff::Int(a)) => Coeff::Int(-a),
            _ => panic!("coefficient domain mismatch"),
        }
    }

    /// Multiplicative inverse; `F_p` only.
    pub(crate) fn coeff_inv(&self, a: &Coeff) -> Result<Coeff> {
        match (self.0.domain, a) {
            (Domain::Fp(p), Coeff::Fp(a)) => {
                if *a == 0 {
                    Err(Error::Invariant("inverse of zero".into()))
                } else {
                    Ok(Coeff::Fp(inv_mod(*a, p)))
                }
            }
            _ => Err(Error::ExpectedFp),
        }
    }
}

/// Exponent vector of fixed length; totally ordered by the internal
/// graded-lex order used for canonical term storage.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Monomial {
        Monomial { exps }
    }

    pub fn one(arity: usize) -> Monomial {
        Monomial {
            exps: vec![0; arity],
        }
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial {
                exps: self
                    .exps
                    .iter()
                    .zip(&other.exps)
                    .map(|(a, b)| a - b)
                    .collect(),
            })
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    // Internal graded lex: total degree first, then lex with earlier
    // variables dominating.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Fp(u64),
    Int(BigInt),
}

impl Coeff {
    pub fn to_bigint(&self) -> BigInt {
        match self {
            Coeff::Fp(v) => BigInt::from(*v),
            Coeff::Int(v) => v.clone(),
        }
    }

    pub fn as_fp(&self) -> Option<u64> {
        match self {
            Coeff::Fp(v) => Some(*v),
            Coeff::Int(_) => None,
        }
    }
}

/// Sparse polynomial: term table sorted descending by the internal
/// monomial order, never storing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    terms: Vec<(Monomial, Coeff)>,
}

pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring arithmetic; errors on arity or domain mismatch.
pub fn poly_arith(f: &Poly, g: &Poly, op: ArithOp) -> Result<Poly> {
    f.check_same_ring(g)?;
    Ok(match op {
        ArithOp::Add => f.add(g),
        ArithOp::Sub => f.sub(g),
        ArithOp::Mul => f.mul(g),
    })
}

impl Poly {
    pub(crate) fn from_terms(ring: Ring, mut terms: Vec<(Monomial, Coeff)>) -> Poly {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        // merge equal monomials, drop zeros
        let mut merged: Vec<(Monomial, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = merged.last_mut() {
                if last.0 == m {
                    last.1 = ring.coeff_add(&last.1, &c);
                    continue;
                }
            }
            merged.push((m, c));
        }
        merged.retain(|(_, c)| !ring.coeff_is_zero(c));
        Poly {
            ring,
            terms: merged,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial (degree minus infinity).
    pub fn degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn check_same_ring(&self, other: &Poly) -> Result<()> {
        if self.ring.arity() != other.ring.arity() {
            return Err(Error::ArityMismatch(self.ring.arity(), other.ring.arity()));
        }
        match (self.ring.domain(), other.ring.domain()) {
            (Domain::Fp(p), Domain::Fp(q)) if p != q => Err(Error::ModulusMismatch(p, q)),
            (Domain::Fp(_), Domain::Int) | (Domain::Int, Domain::Fp(_)) => {
                Err(Error::DomainMismatch)
            }
            _ => Ok(()),
        }
    }

    fn assert_same_ring(&self, other: &Poly) {
        self.check_same_ring(other)
            .expect("polynomials from different rings");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_same_ring(other);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Poly::from_terms(self.ring.clone(), terms)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.ring.coeff_neg(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_same_ring(other);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                terms.push((m1.mul(m2), self.ring.coeff_mul(c1, c2)));
            }
        }
        Poly::from_terms(self.ring.clone(), terms)
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m1, c1)| (m1.mul(m), self.ring.coeff_mul(c1, c)))
                .filter(|(_, c)| !self.ring.coeff_is_zero(c))
                .collect(),
        }
    }

    pub fn scale_i64(&self, c: i64) -> Poly {
        let c = self.ring.coeff_from_i64(c);
        if self.ring.coeff_is_zero(&c) {
            return self.ring.zero();
        }
        self.mul_term(&Monomial::one(self.ring.arity()), &c)
    }

    /// `f^k` by binary exponentiation; `f^0 = 1`.
    pub fn pow(&self, k: u64) -> Poly {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Stored coefficient of `m`, or zero.
    pub fn coeff_of(&self, m: &Monomial) -> Result<Coeff> {
        if m.arity() != self.ring.arity() {
            return Err(Error::ArityMismatch(m.arity(), self.ring.arity()));
        }
        Ok(self
            .terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| match self.ring.domain() {
                Domain::Fp(_) => Coeff::Fp(0),
                Domain::Int => Coeff::Int(BigInt::zero()),
            }))
    }

    /// Exact evaluation over `F_p`.
    pub fn eval(&self, point: &[u64]) -> Result<FieldElem> {
        let p = self.ring.require_fp()?;
        if point.len() != self.ring.arity() {
            return Err(Error::ArityMismatch(point.len(), self.ring.arity()));
        }
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = match c {
                Coeff::Fp(v) => *v,
                Coeff::Int(_) => unreachable!(),
            };
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t * pow_mod(point[i] % p, e as u64, p) % p;
                }
            }
            acc = (acc + t) % p;
        }
        Ok(FieldElem { p, value: acc })
    }

    /// Replace each variable by its image, fully expanded. All images must
    /// share one target ring.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.ring.arity() {
            return Err(Error::ArityMismatch(images.len(), self.ring.arity()));
        }
        let target = match images.first() {
            Some(f) => f.ring().clone(),
            None => self.ring.clone(), // arity 0: constants only
        };
        for img in images {
            if img.ring() != &target {
                return Err(Error::DomainMismatch);
            }
        }
        if target.domain() != self.ring.domain() {
            return Err(Error::DomainMismatch);
        }
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut t = Poly::from_terms(
                target.clone(),
                vec![(Monomial::one(target.arity()), c.clone())],
            );
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e as u64));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Coefficientwise reduction of an integer polynomial mod `p`;
    /// vanishing terms are dropped.
    pub fn reduce_mod_p(&self, p: u64) -> Result<Poly> {
        if !self.ring.is_int() {
            return Err(Error::ExpectedInt);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let ring = Ring::with_scheme(Domain::Fp(p), self.ring.arity(), self.ring.scheme())?;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), ring.coeff_from_bigint(c.to_bigint())))
            .collect();
        Ok(Poly::from_terms(ring, terms))
    }

    /// View an `F_p` polynomial in another ring of the same arity and
    /// modulus (renaming scheme change only).
    pub fn with_ring(&self, ring: &Ring) -> Result<Poly> {
        if ring.arity() != self.ring.arity() {
            return Err(Error::ArityMismatch(ring.arity(), self.ring.arity()));
        }
        if ring.domain() != self.ring.domain() {
            return Err(Error::DomainMismatch);
        }
        Ok(Poly {
            ring: ring.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Exact division; `None` when `g` does not divide every step of the
    /// reduction (single-divisor long division with zero remainder).
    pub fn div_exact(&self, g: &Poly) -> Option<Poly> {
        self.assert_same_ring(g);
        if g.is_zero() {
            return None;
        }
        // Divide under the internal order: the leading term of g under any
        // total order divides the leading term of every multiple of g.
        let (gm, gc) = g.terms.first()?;
        let gc_inv = self.ring.coeff_inv(gc).ok()?;
        let mut rem = self.clone();
        let mut quot_terms = Vec::new();
        while !rem.is_zero() {
            let (rm, rc) = rem.terms.first().unwrap().clone();
            let q = rm.checked_div(gm)?;
            let qc = self.ring.coeff_mul(&rc, &gc_inv);
            rem = rem.sub(&g.mul_term(&q, &qc));
            quot_terms.push((q, qc));
        }
        Some(Poly::from_terms(self.ring.clone(), quot_terms))
    }

    /// Embed in `ring.extend(extra)`: same exponents, zeros appended.
    pub fn lift_extend(&self, target: &Ring) -> Poly {
        assert!(target.arity() >= self.ring.arity());
        let extra = target.arity() - self.ring.arity();
        Poly {
            ring: target.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.exps().to_vec();
                    e.resize(self.ring.arity() + extra, 0);
                    (Monomial::new(e), c.clone())
                })
                .collect(),
        }
    }

    /// Project onto the ring without variable `drop`; errors if the
    /// variable actually occurs.
    pub fn project_drop(&self, target: &Ring, drop: usize) -> Result<Poly> {
        if target.arity() + 1 != self.ring.arity() {
            return Err(Error::ArityMismatch(target.arity() + 1, self.ring.arity()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.exp(drop) != 0 {
                    return Err(Error::Invariant(format!(
                        "variable {} occurs in polynomial being projected",
                        self.ring.var_name(drop)
                    )));
                }
                let mut e = m.exps().to_vec();
                e.remove(drop);
                Ok((Monomial::new(e), c.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_terms(target.clone(), terms))
    }

    /// Specialize variable `i` to the value `v` (over `F_p`), producing a
    /// polynomial in the contracted ring. Used by the point enumerator.
    pub fn specialize(&self, target: &Ring, i: usize, v: u64) -> Poly {
        let p = self.ring.char_p().expect("specialize needs F_p");
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let c = match c {
                    Coeff::Fp(x) => Coeff::Fp(x * pow_mod(v, m.exp(i) as u64, p) % p),
                    Coeff::Int(_) => unreachable!(),
                };
                let mut e = m.exps().to_vec();
                e.remove(i);
                (Monomial::new(e), c)
            })
            .collect();
        Poly::from_terms(target.clone(), terms)
    }
}

// ---------------------------------------------------------------------------
// Text grammar: terms joined by +/-, term = optional integer coefficient and
// *-separated powers `x<k>^<e>`. Example: `x1*x2*x3 + 2*x2^3 - x3^3`.
// ---------------------------------------------------------------------------

impl Ring {
    pub fn parse(&self, input: &str) -> Result<Poly> {
        let mut terms: Vec<(Monomial, Coeff)> = Vec::new();
        let s = input.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut sign = 1i64;
        let mut expect_term = true;
        let bytes = s.as_bytes();
        let mut pos = 0usize;
        let n = s.len();

        // small hand tokenizer
        let read_uint = |pos: &mut usize| -> Result<BigInt> {
            let start = *pos;
            while *pos < n && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if start == *pos {
                return Err(Error::Parse(format!("expected integer at byte {start}")));
            }
            s[start..*pos]
                .parse::<BigInt>()
                .map_err(|e| Error::Parse(e.to_string()))
        };
        let read_ident = |pos: &mut usize| -> Option<String> {
            let start = *pos;
            if *pos < n && bytes[*pos].is_ascii_alphabetic() {
                *pos += 1;
                while *pos < n && (bytes[*pos].is_ascii_alphanumeric() || bytes[*pos] == b'_') {
                    *pos += 1;
                }
                Some(s[start..*pos].to_string())
            } else {
                None
            }
        };
        let skip_ws = |pos: &mut usize| {
            while *pos < n && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };

        skip_ws(&mut pos);
        while pos < n {
            if expect_term {
                // optional sign(s)
                while pos < n && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                    if bytes[pos] == b'-' {
                        sign = -sign;
                    }
                    pos += 1;
                    skip_ws(&mut pos);
                }
                // one term: factors separated by '*'
                let mut coeff = BigInt::from(1);
                let mut exps = vec![0u16; self.arity()];
                let mut first_factor = true;
                loop {
                    skip_ws(&mut pos);
                    if pos < n && bytes[pos].is_ascii_digit() {
                        coeff *= read_uint(&mut pos)?;
                    } else if let Some(name) = read_ident(&mut pos) {
                        let idx = self.var_index(&name).ok_or_else(|| {
                            Error::Parse(format!("unknown variable `{name}`"))
                        })?;
                        let mut e = BigInt::from(1);
                        skip_ws(&mut pos);
                        if pos < n && bytes[pos] == b'^' {
                            pos += 1;
                            skip_ws(&mut pos);
                            e = read_uint(&mut pos)?;
                        }
                        let e = e
                            .to_u16()
                            .ok_or_else(|| Error::Parse("exponent too large".into()))?;
                        exps[idx] = exps[idx]
                            .checked_add(e)
                            .ok_or_else(|| Error::Parse("exponent overflow".into()))?;
                    } else if first_factor {
                        return Err(Error::Parse(format!(
                            "expected a term at byte {pos} of `{s}`"
                        )));
                    } else {
                        return Err(Error::Parse(format!(
                            "dangling `*` at byte {pos} of `{s}`"
                        )));
                    }
                    first_factor = false;
                    skip_ws(&mut pos);
                    if pos < n && bytes[pos] == b'*' {
                        pos += 1;
                    } else {
                        break;
                    }
                }
                if sign < 0 {
                    coeff = -coeff;
                }
                terms.push((Monomial::new(exps), self.coeff_from_bigint(coeff)));
                sign = 1;
                expect_term = false;
            } else {
                match bytes[pos] {
                    b'+' => {
                        pos += 1;
                        expect_term = true;
                    }
                    b'-' => {
                        sign = -1;
                        pos += 1;
                        expect_term = true;
                    }
                    _ => {
                        return Err(Error::Parse(format!(
                            "unexpected `{}` at byte {pos} of `{s}`",
                            &s[pos..pos + 1]
                        )))
                    }
                }
                skip_ws(&mut pos);
            }
        }
        if expect_term {
            return Err(Error::Parse(format!("trailing operator in `{s}`")));
        }
        Ok(Poly::from_terms(self.clone(), terms))
    }

    /// Parse a `;`- or `,`-separated generator list.
    pub fn parse_list(&self, input: &str) -> Result<Vec<Poly>> {
        input
            .split([';', ','])
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .map(|s| self.parse(s))
            .collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = match c {
                Coeff::Fp(v) => (false, BigInt::from(*v)),
                Coeff::Int(v) => (v.is_negative(), v.abs()),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let one = mag == BigInt::from(1);
            if !one || m.is_one() {
                write!(f, "{mag}")?;
            }
            let mut first = one;
            for (j, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                } else {
                    first = false;
                }
                write!(f, "{}", self.ring.var_name(j))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp_ring(p: u64, n: usize) -> Ring {
        Ring::fp(p, n).unwrap()
    }

    #[test]
    fn product_of_sum_and_difference() {
        let r = fp_ring(5, 2);
        let f = r.parse("x1 + x2").unwrap();
        let g = r.parse("x1 - x2").unwrap();
        assert_eq!(f.mul(&g), r.parse("x1^2 + 4*x2^2").unwrap());
    }

    #[test]
    fn additive_identity() {
        let r = fp_ring(7, 3);
        let f = r.parse("x1*x2*x3 + 2*x2^3 - x3^3").unwrap();
        assert_eq!(f.add(&r.zero()), f);
    }

    #[test]
    fn frobenius_square_in_char_two() {
        let r = fp_ring(2, 2);
        let f = r.parse("x1 + x2").unwrap();
        assert_eq!(f.mul(&f), r.parse("x1^2 + x2^2").unwrap());
        assert_eq!(f.pow(2), r.parse("x1^2 + x2^2").unwrap());
    }

    #[test]
    fn pow_basics() {
        let r = fp_ring(3, 2);
        let xy = r.parse("x1*x2").unwrap();
        assert_eq!(xy.pow(2), r.parse("x1^2*x2^2").unwrap());
        assert_eq!(xy.pow(0), r.one());
    }

    #[test]
    fn coeff_lookup() {
        let p = 3u64;
        let r = fp_ring(p, 2);
        let f = r.parse("x1*x2").unwrap().pow(p - 1);
        let m = Monomial::new(vec![(p - 1) as u16, (p - 1) as u16]);
        assert_eq!(f.coeff_of(&m).unwrap(), Coeff::Fp(1));

        let r2 = fp_ring(2, 2);
        let g = r2.parse("x1*x2 + x1^2").unwrap();
        assert_eq!(
            g.coeff_of(&Monomial::new(vec![1, 1])).unwrap(),
            Coeff::Fp(1)
        );
        assert_eq!(
            g.coeff_of(&Monomial::new(vec![0, 2])).unwrap(),
            Coeff::Fp(0)
        );
    }

    #[test]
    fn eval_cases() {
        let r = fp_ring(5, 2);
        let f = r.parse("x1*x2 - 1").unwrap();
        assert_eq!(f.eval(&[2, 3]).unwrap().value, 0);
        let c = r.parse("3").unwrap();
        assert_eq!(c.eval(&[4, 1]).unwrap().value, 3);
        let r7 = fp_ring(7, 1);
        let cube = r7.parse("x1^3").unwrap();
        assert_eq!(cube.eval(&[2]).unwrap().value, 1);
    }

    #[test]
    fn reduce_mod_p_cases() {
        let z = Ring::int(2);
        let f = z.parse("3*x1 + 5*x2").unwrap();
        let r5 = fp_ring(5, 2);
        assert_eq!(f.reduce_mod_p(5).unwrap(), r5.parse("3*x1").unwrap());
        let g = z.parse("6*x1*x2").unwrap();
        assert!(g.reduce_mod_p(2).unwrap().is_zero());
        assert!(matches!(f.reduce_mod_p(4), Err(Error::NotPrime(4))));
        // a unit leading coefficient survives reduction
        let h = z.parse("2*x1*x2 + 7*x2^2").unwrap();
        let hm = h.reduce_mod_p(7).unwrap();
        assert_eq!(hm, fp_ring(7, 2).parse("2*x1*x2").unwrap());
    }

    #[test]
    fn substitute_cases() {
        let r = fp_ring(5, 2);
        let f = r.parse("x1^2 + x2").unwrap();
        let ident = vec![r.var(0), r.var(1)];
        assert_eq!(f.substitute(&ident).unwrap(), f);
        let zeros = vec![r.zero(), r.zero()];
        let g = r.parse("x1*x2 + 3").unwrap();
        assert_eq!(g.substitute(&zeros).unwrap(), r.parse("3").unwrap());
    }

    #[test]
    fn substitute_minor_of_bott_samelson_matrix() {
        // upper-left 2x2 minor of the 4x4 word matrix for 1232
        let z4 = Ring::int(4);
        let m = Ring::with_scheme(
            Domain::Int,
            16,
            VarScheme::Matrix { rows: 4, cols: 4 },
        )
        .unwrap();
        let det2 = m.parse("m1_1*m2_2 - m1_2*m2_1").unwrap();
        let c = Ring::with_scheme(Domain::Int, 4, VarScheme::C).unwrap();
        let entries_text = [
            "c1", "c3 - c2*c4", "c2", "-1", //
            "1", "0", "0", "0", //
            "0", "c4", "-1", "0", //
            "0", "1", "0", "0",
        ];
        let images: Vec<Poly> = entries_text.iter().map(|s| c.parse(s).unwrap()).collect();
        let pulled = det2.substitute(&images).unwrap();
        assert_eq!(pulled, c.parse("c2*c4 - c3").unwrap());
        let _ = z4;
    }

    #[test]
    fn arity_and_modulus_mismatch_are_errors() {
        let r1 = fp_ring(5, 2);
        let r2 = fp_ring(5, 3);
        let r3 = fp_ring(7, 2);
        let f = r1.parse("x1").unwrap();
        assert!(matches!(
            poly_arith(&f, &r2.parse("x1").unwrap(), ArithOp::Add),
            Err(Error::ArityMismatch(_, _))
        ));
        assert!(matches!(
            poly_arith(&f, &r3.parse("x1").unwrap(), ArithOp::Mul),
            Err(Error::ModulusMismatch(5, 7))
        ));
        assert!(matches!(
            poly_arith(&f, &Ring::int(2).parse("x1").unwrap(), ArithOp::Sub),
            Err(Error::DomainMismatch)
        ));
    }

    #[test]
    fn zero_poly_degree_is_sentinel() {
        let r = fp_ring(3, 2);
        assert_eq!(r.zero().degree(), None);
        assert_eq!(r.one().degree(), Some(0));
        assert_eq!(r.parse("x1*x2^2").unwrap().degree(), Some(3));
    }

    #[test]
    fn grammar_round_trips() {
        let z = Ring::int(3);
        let s = "x1*x2*x3 + 2*x2^3 - x3^3";
        let f = z.parse(s).unwrap();
        assert_eq!(f.to_string(), s);
        let hl = Ring::with_scheme(Domain::Fp(5), 3, VarScheme::HL).unwrap();
        let g = hl.parse("h1*l - h2^2").unwrap();
        assert_eq!(g.to_string(), "h1*l + 4*h2^2");
        assert_eq!(hl.parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn div_exact_works() {
        let r = fp_ring(5, 2);
        let g = r.parse("x1 + x2").unwrap();
        let f = g.mul(&r.parse("x1^2 - 2*x2").unwrap());
        assert_eq!(f.div_exact(&g).unwrap(), r.parse("x1^2 - 2*x2").unwrap());
        assert!(r.parse("x1").unwrap().div_exact(&g).is_none());
    }

    #[test]
    fn composite_modulus_rejected() {
        assert!(matches!(Ring::fp(6, 2), Err(Error::NotPrime(6))));
    }
}
