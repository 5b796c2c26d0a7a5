//! Buchberger engine and ideal calculus over `F_p`.
//!
//! Intersection, colon, and saturation are all routed through a single
//! auxiliary-variable elimination engine. Reduced bases are cached per
//! order on the ideal, behind a mutex, so an [`Ideal`] behaves like an
//! immutable value.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::monorder::{initial_form_tiers, WeightOrder};
use crate::polyring::{Coeff, Monomial, Poly, Ring};

/// Fully reduce `f` against `basis` under the total global order `o`:
/// no term of the result is divisible by any basis leading monomial.
pub fn normal_form(f: &Poly, basis: &[Poly], o: &WeightOrder) -> Result<Poly> {
    let ring = f.ring().clone();
    let heads: Vec<(Monomial, Coeff)> = basis
        .iter()
        .map(|g| {
            let m = o.leading_monomial(g)?;
            let c = g.coeff_of(&m)?;
            Ok((m, c))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rem = ring.zero();
    let mut work = f.clone();
    while !work.is_zero() {
        let lm = o.leading_monomial(&work)?;
        let lc = work.coeff_of(&lm)?;
        match heads
            .iter()
            .enumerate()
            .find(|(_, (hm, _))| hm.divides(&lm))
        {
            Some((i, (hm, hc))) => {
                let q = lm.checked_div(hm).unwrap();
                let qc = ring.coeff_mul(&lc, &ring.coeff_inv(hc)?);
                work = work.sub(&basis[i].mul_term(&q, &qc));
            }
            None => {
                let t = Poly::from_terms(ring.clone(), vec![(lm, lc)]);
                rem = rem.add(&t);
                work = work.sub(&t);
            }
        }
    }
    Ok(rem)
}

fn s_poly(f: &Poly, g: &Poly, o: &WeightOrder) -> Result<Poly> {
    let ring = f.ring().clone();
    let fm = o.leading_monomial(f)?;
    let gm = o.leading_monomial(g)?;
    let fc = f.coeff_of(&fm)?;
    let gc = g.coeff_of(&gm)?;
    let lcm = fm.lcm(&gm);
    let a = f.mul_term(
        &lcm.checked_div(&fm).unwrap(),
        &ring.coeff_inv(&fc)?,
    );
    let b = g.mul_term(
        &lcm.checked_div(&gm).unwrap(),
        &ring.coeff_inv(&gc)?,
    );
    Ok(a.sub(&b))
}

fn make_monic(f: &Poly, o: &WeightOrder) -> Result<Poly> {
    let lc = o.leading_coeff(f)?;
    let inv = f.ring().coeff_inv(&lc)?;
    Ok(f.mul_term(&Monomial::one(f.ring().arity()), &inv))
}

/// The unique reduced Groebner basis of the ideal generated by `gens`
/// under the total global order `o`. Normal-strategy pair selection with
/// the coprime-head skip.
pub fn buchberger(gens: &[Poly], o: &WeightOrder) -> Result<Vec<Poly>> {
    let nonzero: Vec<&Poly> = gens.iter().filter(|g| !g.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return Ok(Vec::new());
    };
    let ring = first.ring().clone();
    ring.require_fp()?;
    if !o.is_total() {
        return Err(Error::OrderNotTotal);
    }
    if !o.is_global() {
        return Err(Error::OrderNotGlobal);
    }
    for g in &nonzero {
        first.check_same_ring(g)?;
    }

    let mut basis: Vec<Poly> = Vec::new();
    for g in nonzero {
        let r = normal_form(g, &basis, o)?;
        if !r.is_zero() {
            basis.push(make_monic(&r, o)?);
        }
    }
    let mut heads: Vec<Monomial> = basis
        .iter()
        .map(|g| o.leading_monomial(g))
        .collect::<Result<_>>()?;

    let mut pairs: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let key = |lcm: &Monomial| lcm.degree();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pairs.insert((key(&heads[i].lcm(&heads[j])), i, j));
        }
    }
    while let Some(&(_, i, j)) = pairs.iter().next() {
        pairs.remove(&(key(&heads[i].lcm(&heads[j])), i, j));
        if heads[i].coprime(&heads[j]) {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j], o)?;
        let r = normal_form(&s, &basis, o)?;
        if r.is_zero() {
            continue;
        }
        let r = make_monic(&r, o)?;
        let rm = o.leading_monomial(&r)?;
        let k = basis.len();
        for (idx, h) in heads.iter().enumerate() {
            pairs.insert((key(&h.lcm(&rm)), idx, k));
        }
        basis.push(r);
        heads.push(rm);
    }

    reduce_basis(basis, o)
}

/// Minimalize and tail-reduce a Groebner basis; output is the reduced
/// basis, sorted descending by leading monomial.
fn reduce_basis(mut basis: Vec<Poly>, o: &WeightOrder) -> Result<Vec<Poly>> {
    // minimalize: drop elements whose head is divisible by another head
    let heads: Vec<Monomial> = basis
        .iter()
        .map(|g| o.leading_monomial(g))
        .collect::<Result<_>>()?;
    let keep: Vec<bool> = (0..basis.len())
        .map(|i| {
            !heads
                .iter()
                .enumerate()
                .any(|(j, h)| j != i && h.divides(&heads[i]) && (h != &heads[i] || j < i))
        })
        .collect();
    let mut minimal: Vec<Poly> = basis
        .drain(..)
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(g, _)| g)
        .collect();
    // tail-reduce each against the others
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        minimal[i] = normal_form(&minimal[i], &others, o)?;
        minimal[i] = make_monic(&minimal[i], o)?;
    }
    minimal.sort_by(|a, b| {
        let ma = o.leading_monomial(a).unwrap();
        let mb = o.leading_monomial(b).unwrap();
        match o.compare(&mb, &ma) {
            Ordering::Equal => mb.cmp(&ma),
            ord => ord,
        }
    });
    Ok(minimal)
}

/// Generator list plus a cache of reduced bases per order.
#[derive(Debug, Clone)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Poly>,
    cache: Arc<Mutex<HashMap<WeightOrder, Arc<Vec<Poly>>>>>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        if self.ring != other.ring {
            return false;
        }
        let o = WeightOrder::graded_lex(self.ring.arity());
        match (self.groebner_basis(&o), other.groebner_basis(&o)) {
            (Ok(a), Ok(b)) => *a == *b,
            _ => false,
        }
    }
}
impl Eq for Ideal {}

impl Ideal {
    /// Zero generators are dropped; the zero ideal has none.
    pub fn new(ring: Ring, gens: Vec<Poly>) -> Result<Ideal> {
        for g in &gens {
            if g.ring() != &ring {
                return Err(Error::DomainMismatch);
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal {
            ring,
            gens,
            cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn zero(ring: Ring) -> Ideal {
        Ideal::new(ring, Vec::new()).unwrap()
    }

    pub fn parse(ring: &Ring, text: &str) -> Result<Ideal> {
        let gens = ring.parse_list(text)?;
        Ideal::new(ring.clone(), gens)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn groebner_basis(&self, o: &WeightOrder) -> Result<Arc<Vec<Poly>>> {
        {
            let cache = self.cache.lock().unwrap();
            if let Some(gb) = cache.get(o) {
                return Ok(gb.clone());
            }
        }
        let gb = Arc::new(buchberger(&self.gens, o)?);
        self.cache.lock().unwrap().insert(o.clone(), gb.clone());
        Ok(gb)
    }

    /// Reduced basis under the canonical internal order (graded lex);
    /// used for identity checks and dedup keys.
    pub fn canonical_basis(&self) -> Result<Arc<Vec<Poly>>> {
        self.groebner_basis(&WeightOrder::graded_lex(self.ring.arity()))
    }

    /// Deterministic text key for hashing ideals up to equality.
    pub fn canonical_key(&self) -> Result<String> {
        let gb = self.canonical_basis()?;
        Ok(gb
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join("; "))
    }

    /// True iff the normal form of `f` modulo a Groebner basis is zero.
    pub fn contains(&self, f: &Poly) -> Result<bool> {
        if f.ring() != &self.ring {
            return Err(Error::DomainMismatch);
        }
        if f.is_zero() {
            return Ok(true);
        }
        let o = WeightOrder::graded_lex(self.ring.arity());
        let gb = self.groebner_basis(&o)?;
        Ok(normal_form(f, &gb, &o)?.is_zero())
    }

    /// Ideal containment `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_one_ideal(&self) -> Result<bool> {
        self.contains(&self.ring.one())
    }

    /// `I + J`: concatenated generators.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.ring.clone(), gens)
    }

    fn check_ring(&self, other: &Ideal) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }

    /// `I ∩ J` via the auxiliary-variable construction
    /// `t*I + (1-t)*J` followed by elimination of `t`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        if self.is_zero_ideal() || other.is_zero_ideal() {
            return Ok(Ideal::zero(self.ring.clone()));
        }
        let ext = self.ring.extend(1);
        let t = ext.var(self.ring.arity());
        let one_minus_t = ext.one().sub(&t);
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(g.lift_extend(&ext).mul(&t));
        }
        for g in &other.gens {
            gens.push(g.lift_extend(&ext).mul(&one_minus_t));
        }
        let big = Ideal::new(ext.clone(), gens)?;
        let elim = big.eliminate_vars(&[self.ring.arity()])?;
        elim.project_onto(&self.ring, self.ring.arity())
    }

    /// `I : f` for a single polynomial, via `(1/f)(I ∩ <f>)`.
    pub fn colon_poly(&self, f: &Poly) -> Result<Ideal> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial("colon divisor"));
        }
        if f.ring() != &self.ring {
            return Err(Error::DomainMismatch);
        }
        let meet = self.intersect(&Ideal::new(self.ring.clone(), vec![f.clone()])?)?;
        let gens = meet
            .gens
            .iter()
            .map(|g| {
                g.div_exact(f).ok_or_else(|| {
                    Error::Invariant("intersection generator not divisible in colon".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(self.ring.clone(), gens)
    }

    /// `I : J`, intersected over `J`'s generators.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        if other.is_zero_ideal() {
            return Err(Error::ZeroPolynomial("colon by zero ideal"));
        }
        let mut acc: Option<Ideal> = None;
        for g in &other.gens {
            let q = self.colon_poly(g)?;
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q)?,
            });
        }
        Ok(acc.unwrap())
    }

    /// Generators of `I ∩ k[remaining vars]`, still in the ambient ring.
    /// Computed from a Groebner basis under an elimination order.
    pub fn elimination_basis(&self, vars: &[usize]) -> Result<Vec<Poly>> {
        let n = self.ring.arity();
        let mut indicator = vec![0i128; n];
        for &v in vars {
            if v >= n {
                return Err(Error::ArityMismatch(v, n));
            }
            indicator[v] = 1;
        }
        let mut tiers = vec![indicator];
        tiers.push(vec![1; n]);
        let o = WeightOrder::new(n, tiers, Some((0..n).collect()))?;
        let gb = self.groebner_basis(&o)?;
        Ok(gb
            .iter()
            .filter(|g| {
                g.terms()
                    .iter()
                    .all(|(m, _)| vars.iter().all(|&v| m.exp(v) == 0))
            })
            .cloned()
            .collect())
    }

    /// Elimination ideal, kept in the same ring.
    pub fn eliminate_vars(&self, vars: &[usize]) -> Result<Ideal> {
        Ideal::new(self.ring.clone(), self.elimination_basis(vars)?)
    }

    /// Eliminate one variable and contract to the smaller ring.
    pub fn eliminate_into(&self, drop: usize, target: &Ring) -> Result<Ideal> {
        let elim = self.eliminate_vars(&[drop])?;
        elim.project_onto(target, drop)
    }

    fn project_onto(&self, target: &Ring, drop: usize) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.project_drop(target, drop))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(target.clone(), gens)
    }

    /// Saturation `I : f^∞` via the Rabinowitsch variable.
    pub fn saturate(&self, f: &Poly) -> Result<Ideal> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial("saturation"));
        }
        if f.ring() != &self.ring {
            return Err(Error::DomainMismatch);
        }
        let n = self.ring.arity();
        let ext = self.ring.extend(1);
        let t = ext.var(n);
        let mut gens: Vec<Poly> = self.gens.iter().map(|g| g.lift_extend(&ext)).collect();
        gens.push(ext.one().sub(&t.mul(&f.lift_extend(&ext))));
        let big = Ideal::new(ext, gens)?;
        big.eliminate_vars(&[n])?.project_onto(&self.ring, n)
    }

    /// The ideal of leading forms of `I` under `lambda`. For a total
    /// order this is the monomial ideal of leading terms; for a partial
    /// weight it is generated by the leading forms of a Groebner basis
    /// under the graded-lex refinement.
    pub fn initial_ideal(&self, lambda: &WeightOrder) -> Result<Ideal> {
        if self.is_zero_ideal() {
            return Ok(Ideal::zero(self.ring.clone()));
        }
        if lambda.is_total() {
            let gb = self.groebner_basis(lambda)?;
            let gens = gb
                .iter()
                .map(|g| {
                    let m = lambda.leading_monomial(g)?;
                    Ok(Poly::from_terms(
                        self.ring.clone(),
                        vec![(m, self.ring.coeff_from_i64(1))],
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ideal::new(self.ring.clone(), gens);
        }
        let refined = lambda.refine_graded_lex();
        let gb = self.groebner_basis(&refined)?;
        let gens = gb
            .iter()
            .map(|g| initial_form_tiers(lambda, g))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(self.ring.clone(), gens)
    }
}

/// Minimal monomial generators, an antichain under divisibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    ring: Ring,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(ring: Ring, monomials: Vec<Monomial>) -> MonomialIdeal {
        let mut gens: Vec<Monomial> = Vec::new();
        let mut sorted = monomials;
        sorted.sort();
        for m in sorted {
            if !gens.iter().any(|g| g.divides(&m)) {
                gens.push(m);
            }
        }
        gens.sort();
        MonomialIdeal { ring, gens }
    }

    /// Convert an ideal whose canonical reduced basis consists of
    /// monomials. Errors otherwise.
    pub fn try_from_ideal(ideal: &Ideal) -> Result<MonomialIdeal> {
        let gb = ideal.canonical_basis()?;
        let mut monos = Vec::with_capacity(gb.len());
        for g in gb.iter() {
            if g.num_terms() != 1 {
                return Err(Error::Unsupported(format!(
                    "not a monomial ideal: basis element {g}"
                )));
            }
            monos.push(g.terms()[0].0.clone());
        }
        Ok(MonomialIdeal::new(ideal.ring().clone(), monos))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn to_ideal(&self) -> Ideal {
        let gens = self
            .gens
            .iter()
            .map(|m| {
                Poly::from_terms(
                    self.ring.clone(),
                    vec![(m.clone(), self.ring.coeff_from_i64(1))],
                )
            })
            .collect();
        Ideal::new(self.ring.clone(), gens).unwrap()
    }

    pub fn contains_monomial(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gens.iter().all(|m| m.is_squarefree())
    }

    /// Minimal primes as minimal vertex covers of the generator-support
    /// hypergraph; each prime is a coordinate-subspace ideal, returned as
    /// its sorted variable set.
    pub fn minimal_primes(&self) -> Vec<Vec<usize>> {
        let edges: Vec<BTreeSet<usize>> = self
            .gens
            .iter()
            .map(|m| m.support().collect::<BTreeSet<_>>())
            .collect();
        if edges.iter().any(|e| e.is_empty()) {
            return Vec::new(); // the unit ideal cuts out nothing
        }
        let mut covers: Vec<BTreeSet<usize>> = Vec::new();
        let mut current = BTreeSet::new();
        fn rec(
            edges: &[BTreeSet<usize>],
            current: &mut BTreeSet<usize>,
            covers: &mut Vec<BTreeSet<usize>>,
        ) {
            match edges.iter().find(|e| e.is_disjoint(current)) {
                None => covers.push(current.clone()),
                Some(e) => {
                    for &v in e {
                        current.insert(v);
                        rec(edges, current, covers);
                        current.remove(&v);
                    }
                }
            }
        }
        rec(&edges, &mut current, &mut covers);
        // keep inclusion-minimal covers only
        let mut minimal: Vec<BTreeSet<usize>> = Vec::new();
        covers.sort_by_key(|c| c.len());
        for c in covers {
            if !minimal.iter().any(|m| m.is_subset(&c)) {
                minimal.push(c);
            }
        }
        let mut out: Vec<Vec<usize>> = minimal
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Dimension of the Stanley-Reisner scheme and its degree, counted as
    /// the number of top-dimensional minimal primes. Squarefree input only.
    pub fn dim_degree(&self) -> Result<(usize, usize)> {
        if !self.is_squarefree() {
            return Err(Error::Hypothesis(
                "dimension/degree requires a squarefree monomial ideal".into(),
            ));
        }
        let n = self.ring.arity();
        let primes = self.minimal_primes();
        if primes.is_empty() {
            return Err(Error::Hypothesis("the unit ideal has empty variety".into()));
        }
        let dim = primes.iter().map(|p| n - p.len()).max().unwrap();
        let degree = primes.iter().filter(|p| n - p.len() == dim).count();
        Ok((dim, degree))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Ring;

    fn lex(n: usize) -> WeightOrder {
        WeightOrder::lex(n)
    }

    fn fp(p: u64, n: usize) -> Ring {
        Ring::fp(p, n).unwrap()
    }

    #[test]
    fn principal_ideal_basis() {
        let r = fp(5, 2);
        let f = r.parse("x1*x2 - 1").unwrap();
        let gb = buchberger(&[f.clone()], &lex(2)).unwrap();
        assert_eq!(gb, vec![f]);
    }

    #[test]
    fn single_generator_weight_order() {
        let r = fp(5, 3); // x, y, l
        let f = r.parse("x1 - x3*x2").unwrap();
        let o = WeightOrder::new(3, vec![vec![0, 0, 1]], Some(vec![0, 1, 2])).unwrap();
        let gb = buchberger(&[f], &o).unwrap();
        assert_eq!(gb, vec![r.parse("x2*x3 - x1").unwrap()]);
    }

    #[test]
    fn monomial_ideal_already_reduced() {
        let r = fp(5, 2);
        let gens = vec![r.parse("x1^2").unwrap(), r.parse("x1*x2").unwrap()];
        let gb = buchberger(&gens, &lex(2)).unwrap();
        assert_eq!(gb.len(), 2);
        assert!(gb.contains(&r.parse("x1^2").unwrap()));
        assert!(gb.contains(&r.parse("x1*x2").unwrap()));
    }

    #[test]
    fn membership_examples() {
        let r = fp(5, 2);
        let i = Ideal::parse(&r, "x1*x2").unwrap();
        assert!(i.contains(&r.parse("x1^2*x2").unwrap()).unwrap());
        assert!(!i.contains(&r.parse("x1").unwrap()).unwrap());

        let j = Ideal::parse(&r, "x1*x2 - 1; x1").unwrap();
        assert!(j.contains(&r.one()).unwrap());
    }

    #[test]
    fn buchberger_rejects_integer_domain() {
        let z = Ring::int(2);
        let f = z.parse("x1*x2").unwrap();
        assert!(matches!(
            buchberger(&[f], &lex(2)),
            Err(Error::ExpectedFp)
        ));
    }

    #[test]
    fn sum_intersect_colon() {
        let r = fp(5, 2);
        let ix = Ideal::parse(&r, "x1").unwrap();
        let iy = Ideal::parse(&r, "x2").unwrap();
        let meet = ix.intersect(&iy).unwrap();
        assert_eq!(meet, Ideal::parse(&r, "x1*x2").unwrap());

        let ixy = Ideal::parse(&r, "x1*x2").unwrap();
        assert_eq!(ixy.colon(&ix).unwrap(), iy);

        let i2 = Ideal::parse(&r, "x1*x2; x1^2").unwrap();
        assert_eq!(
            i2.colon(&ix).unwrap(),
            Ideal::parse(&r, "x1; x2").unwrap()
        );
    }

    #[test]
    fn elimination_examples() {
        // eliminate l from <x - l*y> -> <0>
        let r = fp(5, 3);
        let i = Ideal::new(r.clone(), vec![r.parse("x1 - x3*x2").unwrap()]).unwrap();
        let pi = i.eliminate_vars(&[2]).unwrap();
        assert!(pi.is_zero_ideal());

        // eliminate t from <t*x, (1-t)*y> -> <x*y>
        let r2 = fp(5, 3); // x, y, t
        let gens = vec![
            r2.parse("x3*x1").unwrap(),
            r2.parse("x2 - x3*x2").unwrap(),
        ];
        let i2 = Ideal::new(r2.clone(), gens).unwrap();
        let e = i2.eliminate_vars(&[2]).unwrap();
        let small = fp(5, 2);
        let down = e.project_onto(&small, 2).unwrap();
        assert_eq!(down, Ideal::parse(&small, "x1*x2").unwrap());

        // eliminate x from <x> -> <0>
        let r3 = fp(5, 1);
        let i3 = Ideal::parse(&r3, "x1").unwrap();
        assert!(i3.eliminate_vars(&[0]).unwrap().is_zero_ideal());
    }

    #[test]
    fn saturation_examples() {
        let r = fp(5, 2); // l = x1, y = x2
        let i = Ideal::parse(&r, "x1*x2").unwrap();
        assert_eq!(
            i.saturate(&r.parse("x1").unwrap()).unwrap(),
            Ideal::parse(&r, "x2").unwrap()
        );
        let i2 = Ideal::parse(&r, "x1^2").unwrap();
        assert!(i2
            .saturate(&r.parse("x1").unwrap())
            .unwrap()
            .is_one_ideal()
            .unwrap());
        let r3 = fp(5, 3); // l, y, x
        let i3 = Ideal::parse(&r3, "x1*x2; x3").unwrap();
        assert_eq!(
            i3.saturate(&r3.parse("x1").unwrap()).unwrap(),
            Ideal::parse(&r3, "x2; x3").unwrap()
        );
    }

    #[test]
    fn initial_ideal_examples() {
        // init_{(0,0,1)} <x - l*y> = <l*y>  (vars x, y, l)
        let r = fp(5, 3);
        let i = Ideal::parse(&r, "x1 - x3*x2").unwrap();
        let init = i
            .initial_ideal(&WeightOrder::weight(&[0, 0, 1]))
            .unwrap();
        assert_eq!(init, Ideal::parse(&r, "x2*x3").unwrap());

        // init of a monomial ideal is itself
        let m = Ideal::parse(&r, "x1*x2; x3^2").unwrap();
        assert_eq!(m.initial_ideal(&WeightOrder::weight(&[1, 1, 1])).unwrap(), m);

        // lex init of <c1*(c2c4 - c3)*c3> = <c1*c2*c3*c4>
        let cr = Ring::with_scheme(
            crate::polyring::Domain::Fp(7),
            4,
            crate::polyring::VarScheme::C,
        )
        .unwrap();
        let f = cr
            .parse("c1")
            .unwrap()
            .mul(&cr.parse("c2*c4 - c3").unwrap())
            .mul(&cr.parse("c3").unwrap());
        let i = Ideal::new(cr.clone(), vec![f]).unwrap();
        let init = i.initial_ideal(&WeightOrder::lex(4)).unwrap();
        assert_eq!(init, Ideal::parse(&cr, "c1*c2*c3*c4").unwrap());
    }

    #[test]
    fn reduced_basis_uniqueness() {
        let r = fp(7, 3);
        // two generating sets of the same ideal
        let a = Ideal::parse(&r, "x1 - x2; x2 - x3").unwrap();
        let b = Ideal::parse(&r, "x1 - x3; 2*x2 - 2*x3; x1 + x2 - 2*x3").unwrap();
        let o = WeightOrder::graded_lex(3);
        assert_eq!(a.groebner_basis(&o).unwrap(), b.groebner_basis(&o).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn monomial_minimal_primes() {
        let r = fp(5, 2);
        let m = MonomialIdeal::try_from_ideal(&Ideal::parse(&r, "x1*x2").unwrap()).unwrap();
        assert_eq!(m.minimal_primes(), vec![vec![0], vec![1]]);

        let r3 = fp(5, 3);
        let m2 =
            MonomialIdeal::try_from_ideal(&Ideal::parse(&r3, "x1*x2*x3").unwrap()).unwrap();
        assert_eq!(m2.minimal_primes(), vec![vec![0], vec![1], vec![2]]);

        let m3 = MonomialIdeal::try_from_ideal(&Ideal::parse(&r3, "x1*x2; x1*x3").unwrap())
            .unwrap();
        assert_eq!(m3.minimal_primes(), vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn squarefree_dim_degree() {
        let r = fp(5, 2);
        let sq = MonomialIdeal::try_from_ideal(&Ideal::parse(&r, "x1^2").unwrap()).unwrap();
        assert!(!sq.is_squarefree());
        assert!(sq.dim_degree().is_err());

        let m = MonomialIdeal::try_from_ideal(&Ideal::parse(&r, "x1*x2").unwrap()).unwrap();
        assert_eq!(m.dim_degree().unwrap(), (1, 2));

        let r3 = fp(5, 3);
        let m2 = MonomialIdeal::try_from_ideal(&Ideal::parse(&r3, "x1*x2; x1*x3").unwrap())
            .unwrap();
        assert_eq!(m2.dim_degree().unwrap(), (2, 1));
    }

    #[test]
    fn colon_by_zero_rejected() {
        let r = fp(5, 2);
        let i = Ideal::parse(&r, "x1").unwrap();
        assert!(i.colon(&Ideal::zero(r.clone())).is_err());
    }
}
