//! The trace near-splitting on `F_p[x_1..x_n]` and the compatibility tests
//! built on it.
//!
//! `tr` sends a monomial `m` to the p-th root of `m * prod(x_i)` divided by
//! `prod(x_i)` when that product is a p-th power, and to zero otherwise;
//! coefficients ride along unchanged because Frobenius fixes `F_p`. The
//! near-splitting attached to a polynomial `f` is `g -> tr(f^(p-1) * g)`,
//! and it is a splitting exactly when its value on 1 is a nonzero constant.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groebner::{normal_form, Ideal};
use crate::monorder::{initial_form, WeightOrder};
use crate::polyring::{Coeff, FieldElem, Monomial, Poly};

pub const DEFAULT_COMPAT_BUDGET: u64 = 100_000;

/// The termwise trace operator. Errors on integer coefficients.
pub fn tr(g: &Poly) -> Result<Poly> {
    let p = g.ring().require_fp()?;
    let terms = g
        .terms()
        .iter()
        .filter_map(|(m, c)| {
            let mut out = Vec::with_capacity(m.arity());
            for &e in m.exps() {
                let e1 = e as u64 + 1;
                if e1 % p != 0 {
                    return None;
                }
                out.push((e1 / p - 1) as u16);
            }
            Some((Monomial::new(out), c.clone()))
        })
        .collect();
    Ok(Poly::from_terms(g.ring().clone(), terms))
}

/// `tr(f^(p-1))` as a polynomial (constant iff the near-splitting scales
/// to a splitting).
pub fn tr_power(f: &Poly) -> Result<Poly> {
    let p = f.ring().require_fp()?;
    tr(&f.pow(p - 1))
}

/// The splitting constant of `f`: the coefficient of `prod x_i^(p-1)` in
/// `f^(p-1)` when `deg f <= n` (the degree-bound shortcut), otherwise the
/// full `tr(f^(p-1))`, which must then be constant.
pub fn splitting_constant(f: &Poly) -> Result<FieldElem> {
    let p = f.ring().require_fp()?;
    let n = f.ring().arity();
    if f.is_zero() {
        return Ok(FieldElem { p, value: 0 });
    }
    if f.degree().unwrap_or(0) <= n as u64 {
        let target = Monomial::new(vec![(p - 1) as u16; n]);
        let c = f.pow(p - 1).coeff_of(&target)?;
        let value = c.as_fp().expect("F_p coefficient");
        return Ok(FieldElem { p, value });
    }
    let t = tr_power(f)?;
    if t.is_zero() {
        return Ok(FieldElem { p, value: 0 });
    }
    if t.degree() != Some(0) {
        return Err(Error::Hypothesis(format!(
            "deg f > n and tr(f^(p-1)) = {t} is not constant"
        )));
    }
    let value = t.terms()[0].1.as_fp().expect("F_p coefficient");
    Ok(FieldElem { p, value })
}

/// Normalizer `c` with `c * tr(f^(p-1)) = 1`, when one exists.
pub fn is_splitting(f: &Poly) -> Result<Option<FieldElem>> {
    match splitting_constant(f) {
        Ok(c) => Ok(c.inv()),
        Err(Error::Hypothesis(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// A normalized splitting `c * tr(f^(p-1) . )` with its constant.
#[derive(Debug, Clone)]
pub struct SplittingSpec {
    pub f: Poly,
    pub p: u64,
    pub constant: FieldElem,
    pub normalizer: Option<FieldElem>,
}

impl SplittingSpec {
    pub fn new(f: Poly) -> Result<SplittingSpec> {
        let p = f.ring().require_fp()?;
        let constant = splitting_constant(&f)?;
        Ok(SplittingSpec {
            f,
            p,
            constant,
            normalizer: constant.inv(),
        })
    }

    pub fn is_splitting(&self) -> bool {
        self.normalizer.is_some()
    }
}

/// Exact finite compatibility criterion for `tr(f^(p-1) . )` on `I`:
/// every polynomial is an `F_p[x^p]`-combination of monomials with
/// exponents below p, and the operator pulls p-th powers out, so it is
/// enough that `tr(f^(p-1) * m * g)` lies in `I` for every generator `g`
/// and every such monomial `m`.
///
/// Cost is governed by `p^n * #generators` and guarded by `budget`; the
/// sweep itself only touches the nonzero buckets of `f^(p-1) * g`.
pub fn is_compatibly_split(ideal: &Ideal, f: &Poly, budget: u64) -> Result<bool> {
    let p = f.ring().require_fp()?;
    let n = f.ring().arity();
    if ideal.ring() != f.ring() {
        return Err(Error::DomainMismatch);
    }
    let gens = ideal.generators();
    if gens.is_empty() {
        return Ok(true);
    }
    let mut cost = gens.len() as u64;
    for _ in 0..n {
        cost = cost.saturating_mul(p);
        if cost > budget {
            return Err(Error::BudgetExceeded(format!(
                "compatibility criterion needs p^n * gens = {}^{} * {} > {} trace checks",
                p,
                n,
                gens.len(),
                budget
            )));
        }
    }

    let fp1 = f.pow(p - 1);
    for g in gens {
        let h = fp1.mul(g);
        // bucket the terms of h by the unique m (all exponents < p) with
        // e + m = -1 mod p; the bucket content is tr(h * m)
        let mut buckets: HashMap<Monomial, Vec<(Monomial, Coeff)>> = HashMap::new();
        for (e, c) in h.terms() {
            let mut target = Vec::with_capacity(n);
            for &ei in e.exps() {
                let ei = ei as u64;
                let mi = (p - 1 - ei % p) % p;
                target.push(((ei + mi + 1) / p - 1) as u16);
            }
            let m_key: Vec<u16> = e
                .exps()
                .iter()
                .map(|&ei| ((p - 1 - ei as u64 % p) % p) as u16)
                .collect();
            buckets
                .entry(Monomial::new(m_key))
                .or_default()
                .push((Monomial::new(target), c.clone()));
        }
        for (_, terms) in buckets {
            let image = Poly::from_terms(f.ring().clone(), terms);
            if !ideal.contains(&image)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Generator-level membership test for compatibility:
/// `f^(p-1) * g_i` lies in `<g_1^p, ..., g_m^p>` for every `i`, tested
/// against the canonical reduced basis of `I`. Cross-validated against
/// the finite criterion; used on its own where `p^n` is out of budget.
pub fn is_compatibly_split_membership(ideal: &Ideal, f: &Poly) -> Result<bool> {
    let p = f.ring().require_fp()?;
    if ideal.ring() != f.ring() {
        return Err(Error::DomainMismatch);
    }
    if ideal.is_zero_ideal() {
        return Ok(true);
    }
    let o = WeightOrder::graded_lex(f.ring().arity());
    let gb = ideal.groebner_basis(&o)?;
    // Frobenius twist of a Groebner basis is a Groebner basis in char p,
    // so no second Buchberger run is needed.
    let twisted: Vec<Poly> = gb.iter().map(|g| g.pow(p)).collect();
    let fp1 = f.pow(p - 1);
    for g in gb.iter() {
        let h = fp1.mul(g);
        if !normal_form(&h, &twisted, &o)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verification policy for compatibility checks in bulk constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompatMode {
    /// The finite criterion, failing when over budget.
    Oracle,
    /// The membership test only.
    Membership,
    /// The finite criterion when within budget, membership otherwise.
    Auto,
}

pub fn verify_compatibly_split(
    ideal: &Ideal,
    f: &Poly,
    mode: CompatMode,
    budget: u64,
) -> Result<bool> {
    match mode {
        CompatMode::Oracle => is_compatibly_split(ideal, f, budget),
        CompatMode::Membership => is_compatibly_split_membership(ideal, f),
        CompatMode::Auto => match is_compatibly_split(ideal, f, budget) {
            Ok(v) => Ok(v),
            Err(Error::BudgetExceeded(_)) => is_compatibly_split_membership(ideal, f),
            Err(e) => Err(e),
        },
    }
}

/// Check `tr(init(g))` is either zero or `init(tr(g))`.
pub fn trinit_check(g: &Poly, lambda: &[i128]) -> Result<bool> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial("trinit check"));
    }
    let a = tr(&initial_form(lambda, g)?)?;
    if a.is_zero() {
        return Ok(true);
    }
    let b = tr(g)?;
    if b.is_zero() {
        return Ok(false);
    }
    Ok(a == initial_form(lambda, &b)?)
}

/// Check `tr(f^(p-1)) = tr(init(f)^(p-1))` under the hypothesis that
/// `prod x_i` (up to scalar) is a term of the leading form of `f`.
pub fn frobdegen_constant_check(f: &Poly, lambda: &[i128]) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("frobdegen check"));
    }
    let init = initial_form(lambda, f)?;
    let all_ones = Monomial::new(vec![1; f.ring().arity()]);
    let c = init.coeff_of(&all_ones)?;
    if f.ring().coeff_is_zero(&c) {
        return Err(Error::Hypothesis(
            "prod x_i is not a term of the leading form".into(),
        ));
    }
    Ok(splitting_constant(f)? == splitting_constant(&init)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Ring;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn fp(p: u64, n: usize) -> Ring {
        Ring::fp(p, n).unwrap()
    }

    fn random_poly(ring: &Ring, max_deg: u16, max_terms: usize, rng: &mut StdRng) -> Poly {
        let p = ring.char_p().unwrap();
        let n = ring.arity();
        let nterms = rng.random_range(1..=max_terms);
        let mut acc = ring.zero();
        for _ in 0..nterms {
            let exps: Vec<u16> = (0..n).map(|_| rng.random_range(0..=max_deg)).collect();
            let c = rng.random_range(0..p) as i64;
            acc = acc.add(&ring.monomial(exps).scale_i64(c));
        }
        acc
    }

    #[test]
    fn tr_on_monomials() {
        let r = fp(2, 1);
        assert_eq!(tr(&r.parse("x1").unwrap()).unwrap(), r.one());
        assert!(tr(&r.one()).unwrap().is_zero());
        assert_eq!(
            tr(&r.parse("x1^3").unwrap()).unwrap(),
            r.parse("x1").unwrap()
        );

        let r32 = fp(3, 2);
        assert_eq!(tr(&r32.parse("x1^2*x2^2").unwrap()).unwrap(), r32.one());
    }

    #[test]
    fn tr_is_additive_and_p_linear() {
        let mut rng = StdRng::seed_from_u64(7);
        for &p in &[2u64, 3, 5] {
            let r = fp(p, 2);
            for _ in 0..40 {
                let a = random_poly(&r, 4, 4, &mut rng);
                let b = random_poly(&r, 4, 4, &mut rng);
                assert_eq!(
                    tr(&a.add(&b)).unwrap(),
                    tr(&a).unwrap().add(&tr(&b).unwrap())
                );
                // tr(a^p * b) = a * tr(b)
                assert_eq!(
                    tr(&a.pow(p).mul(&b)).unwrap(),
                    a.mul(&tr(&b).unwrap())
                );
            }
        }
    }

    #[test]
    fn tr_rejects_integer_domain() {
        let z = Ring::int(2);
        assert!(matches!(tr(&z.parse("x1").unwrap()), Err(Error::ExpectedFp)));
    }

    #[test]
    fn splitting_constant_examples() {
        for &p in &[2u64, 3, 5] {
            for n in 1..=3usize {
                let r = fp(p, n);
                let prod = (0..n).fold(r.one(), |acc, i| acc.mul(&r.var(i)));
                assert_eq!(splitting_constant(&prod).unwrap().value, 1);
            }
        }
        // deg f < n forces constant 0
        let r = fp(3, 2);
        assert_eq!(splitting_constant(&r.parse("x1").unwrap()).unwrap().value, 0);
        // f = xy + x^2 over F_2
        let r2 = fp(2, 2);
        assert_eq!(
            splitting_constant(&r2.parse("x1*x2 + x1^2").unwrap())
                .unwrap()
                .value,
            1
        );
    }

    #[test]
    fn shortcut_matches_full_trace() {
        let mut rng = StdRng::seed_from_u64(11);
        for &p in &[2u64, 3, 5] {
            let r = fp(p, 2);
            for _ in 0..30 {
                let f = random_poly(&r, 2, 4, &mut rng); // deg <= 4 but n = 2...
                let n = 2u64;
                if f.is_zero() || f.degree().unwrap() > n {
                    continue;
                }
                let t = tr_power(&f).unwrap();
                let c = splitting_constant(&f).unwrap();
                if t.is_zero() {
                    assert_eq!(c.value, 0);
                } else {
                    assert_eq!(t.degree(), Some(0));
                    assert_eq!(t.terms()[0].1.as_fp().unwrap(), c.value);
                }
            }
        }
    }

    #[test]
    fn is_splitting_examples() {
        let r = fp(3, 2);
        let prod = r.parse("x1*x2").unwrap();
        assert_eq!(is_splitting(&prod).unwrap().unwrap().value, 1);
        assert!(is_splitting(&r.parse("x1^2").unwrap()).unwrap().is_none());
        // x1*x2*x3 + x2^3 + x3^3 over F_2
        let r3 = fp(2, 3);
        let f = r3.parse("x1*x2*x3 + x2^3 + x3^3").unwrap();
        assert!(is_splitting(&f).unwrap().is_some());
    }

    #[test]
    fn compatibility_examples() {
        let r = fp(2, 3);
        let f = r.parse("x1*x2*x3 + x2^3 + x3^3").unwrap();
        // <f> under tr(f^(p-1) . )
        let i = Ideal::new(r.clone(), vec![f.clone()]).unwrap();
        assert!(is_compatibly_split(&i, &f, DEFAULT_COMPAT_BUDGET).unwrap());

        // the standard splitting compatibly splits <prod x_i>
        let prod = r.parse("x1*x2*x3").unwrap();
        let ip = Ideal::new(r.clone(), vec![prod.clone()]).unwrap();
        assert!(is_compatibly_split(&ip, &prod, DEFAULT_COMPAT_BUDGET).unwrap());

        // <x^2> is not compatibly split by the standard splitting
        let isq = Ideal::parse(&r, "x1^2").unwrap();
        assert!(!is_compatibly_split(&isq, &prod, DEFAULT_COMPAT_BUDGET).unwrap());

        // x-axis is compatibly split for the cubic, z-axis is not
        let xaxis = Ideal::parse(&r, "x2; x3").unwrap();
        let zaxis = Ideal::parse(&r, "x1; x2").unwrap();
        assert!(is_compatibly_split(&xaxis, &f, DEFAULT_COMPAT_BUDGET).unwrap());
        assert!(!is_compatibly_split(&zaxis, &f, DEFAULT_COMPAT_BUDGET).unwrap());
    }

    #[test]
    fn membership_test_agrees_with_oracle() {
        let mut rng = StdRng::seed_from_u64(23);
        for &p in &[2u64, 3] {
            let r = fp(p, 2);
            for _ in 0..25 {
                let f = random_poly(&r, 2, 3, &mut rng);
                if f.is_zero() {
                    continue;
                }
                let g = random_poly(&r, 2, 2, &mut rng);
                if g.is_zero() {
                    continue;
                }
                let i = Ideal::new(r.clone(), vec![g]).unwrap();
                let oracle = is_compatibly_split(&i, &f, DEFAULT_COMPAT_BUDGET).unwrap();
                let fast = is_compatibly_split_membership(&i, &f).unwrap();
                assert_eq!(oracle, fast, "f = {f}, I = {:?}", i.generators());
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let r = fp(5, 9);
        let f = r.parse("x1").unwrap();
        let i = Ideal::parse(&r, "x1").unwrap();
        assert!(matches!(
            is_compatibly_split(&i, &f, DEFAULT_COMPAT_BUDGET),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn trinit_examples() {
        let mut rng = StdRng::seed_from_u64(5);
        for &p in &[2u64, 3, 5] {
            let r = fp(p, 2);
            for _ in 0..60 {
                let g = random_poly(&r, 5, 5, &mut rng);
                if g.is_zero() {
                    continue;
                }
                let lam = [
                    rng.random_range(0..4) as i128,
                    rng.random_range(0..4) as i128,
                ];
                assert!(trinit_check(&g, &lam).unwrap(), "g = {g}, lam = {lam:?}");
            }
        }
        // single monomial
        let r = fp(3, 2);
        assert!(trinit_check(&r.parse("x1^2*x2^2").unwrap(), &[1, 0]).unwrap());
        // explicit derived case: g = x^(p-1) y^(p-1) + x^(2p-1) y^(p-1)
        let p = 3u64;
        let g = r
            .parse(&format!(
                "x1^{}*x2^{} + x1^{}*x2^{}",
                p - 1,
                p - 1,
                2 * p - 1,
                p - 1
            ))
            .unwrap();
        assert!(trinit_check(&g, &[1, 0]).unwrap());
    }

    #[test]
    fn frobdegen_part_one() {
        let r = fp(2, 2);
        // init excludes x1*x2: hypothesis violated
        let f = r.parse("x1*x2 + x1^2").unwrap();
        assert!(matches!(
            frobdegen_constant_check(&f, &[1, 0]),
            Err(Error::Hypothesis(_))
        ));
        // init = x1*x2: both constants 1
        let g = r.parse("x1*x2 + x2^2").unwrap();
        assert!(frobdegen_constant_check(&g, &[1, 0]).unwrap());
    }
}
