//! Brute-force `F_p`-point enumeration and the point-counting congruences.
//!
//! Enumeration specializes one variable at a time (nested Horner over the
//! last variable) and is deterministic row-major. With the `parallel`
//! feature the sweep is partitioned over the first coordinate and merged
//! in coordinate order, so results are identical either way.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyring::{Poly, Ring};
use crate::splitting::splitting_constant;

pub const DEFAULT_POINT_BUDGET: u64 = 10_000_000;

/// All common zeros of a system in `F_p^n`, in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    pub p: u64,
    pub n: usize,
    pub points: Vec<Vec<u64>>,
}

impl PointSet {
    /// Revalidate the defining system on every stored point.
    pub fn validate(&self, gens: &[Poly]) -> Result<()> {
        for pt in &self.points {
            for g in gens {
                if g.eval(pt)?.value != 0 {
                    return Err(Error::Invariant(format!(
                        "stored point {:?} does not satisfy {g}",
                        pt
                    )));
                }
            }
        }
        let mut sorted = self.points.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.points.len() {
            return Err(Error::Invariant("duplicate points".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, pt: &[u64]) -> bool {
        self.points.iter().any(|q| q == pt)
    }
}

fn check_budget(p: u64, n: usize, budget: u64) -> Result<()> {
    let mut cost = 1u64;
    for _ in 0..n {
        cost = cost.saturating_mul(p);
        if cost > budget {
            return Err(Error::BudgetExceeded(format!(
                "enumeration needs p^n = {p}^{n} > {budget} evaluations"
            )));
        }
    }
    Ok(())
}

/// Recursive specialization: peel variables off the front, finish with a
/// univariate sweep of the last variable.
fn sweep(ring: &Ring, gens: &[Poly], prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    let p = ring.char_p().unwrap();
    let n = ring.arity();
    if n == 0 {
        if gens.iter().all(|g| g.is_zero()) {
            out.push(prefix.clone());
        }
        return;
    }
    // constant polynomials decide the whole subtree
    if let Some(bad) = gens.iter().find(|g| !g.is_zero() && g.degree() == Some(0)) {
        debug_assert!(!bad.is_zero());
        return;
    }
    if n == 1 {
        // univariate sweep by Horner
        let coeffs: Vec<Vec<u64>> = gens
            .iter()
            .map(|g| {
                let deg = g.degree().unwrap_or(0) as usize;
                let mut c = vec![0u64; deg + 1];
                for (m, coeff) in g.terms() {
                    c[m.exp(0) as usize] = coeff.as_fp().unwrap();
                }
                c
            })
            .collect();
        for v in 0..p {
            let all_zero = coeffs.iter().all(|c| {
                let mut acc = 0u64;
                for &ci in c.iter().rev() {
                    acc = (acc * v + ci) % p;
                }
                acc == 0
            });
            if all_zero {
                prefix.push(v);
                out.push(prefix.clone());
                prefix.pop();
            }
        }
        return;
    }
    let smaller = ring.contract(0);
    for v in 0..p {
        let specialized: Vec<Poly> = gens.iter().map(|g| g.specialize(&smaller, 0, v)).collect();
        prefix.push(v);
        sweep(&smaller, &specialized, prefix, out);
        prefix.pop();
    }
}

fn enumerate_seq_from(ring: &Ring, gens: &[Poly]) -> PointSet {
    let p = ring.char_p().unwrap();
    let n = ring.arity();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    sweep(ring, gens, &mut prefix, &mut out);
    PointSet { p, n, points: out }
}

/// Sequential enumeration; always available, used by the benchmarks as
/// the baseline.
pub fn enumerate_points_seq(gens: &[Poly], budget: u64) -> Result<PointSet> {
    let ring = ring_of(gens)?;
    let p = ring.require_fp()?;
    check_budget(p, ring.arity(), budget)?;
    Ok(enumerate_seq_from(&ring, gens))
}

#[cfg(feature = "parallel")]
fn enumerate_par_from(ring: &Ring, gens: &[Poly]) -> PointSet {
    use rayon::prelude::*;
    let p = ring.char_p().unwrap();
    let n = ring.arity();
    if n <= 1 {
        return enumerate_seq_from(ring, gens);
    }
    let smaller = ring.contract(0);
    let chunks: Vec<Vec<Vec<u64>>> = (0..p)
        .into_par_iter()
        .map(|v| {
            let specialized: Vec<Poly> =
                gens.iter().map(|g| g.specialize(&smaller, 0, v)).collect();
            let mut out = Vec::new();
            let mut prefix = vec![v];
            sweep(&smaller, &specialized, &mut prefix, &mut out);
            out
        })
        .collect();
    PointSet {
        p,
        n,
        points: chunks.into_iter().flatten().collect(),
    }
}

fn ring_of(gens: &[Poly]) -> Result<Ring> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Unsupported("empty system; pass the zero polynomial".into()))?;
    for g in gens {
        first.check_same_ring(g)?;
    }
    Ok(first.ring().clone())
}

/// All common zeros in `F_p^n`. Deterministic row-major order.
pub fn enumerate_points(gens: &[Poly], budget: u64) -> Result<PointSet> {
    #[cfg(feature = "parallel")]
    {
        let ring = ring_of(gens)?;
        let p = ring.require_fp()?;
        check_budget(p, ring.arity(), budget)?;
        Ok(enumerate_par_from(&ring, gens))
    }
    #[cfg(not(feature = "parallel"))]
    {
        enumerate_points_seq(gens, budget)
    }
}

/// Zero set of an ideal (the whole space for the zero ideal).
pub fn enumerate_ideal(ideal: &crate::groebner::Ideal, budget: u64) -> Result<PointSet> {
    let ring = ideal.ring().clone();
    let p = ring.require_fp()?;
    check_budget(p, ring.arity(), budget)?;
    if ideal.is_zero_ideal() {
        let zero = vec![ring.zero()];
        return enumerate_points(&zero, budget);
    }
    enumerate_points(ideal.generators(), budget)
}

#[derive(Debug, Clone, Serialize)]
pub struct CongruenceReport {
    pub count: u64,
    pub count_mod_p: u64,
    pub predicted_mod_p: u64,
    pub ok: bool,
}

/// `#V(f) = (-1)^(n-1) tr(f^(p-1)) mod p`, for `deg f <= n`.
pub fn check_pointcount_congruence(f: &Poly, budget: u64) -> Result<CongruenceReport> {
    let p = f.ring().require_fp()?;
    let n = f.ring().arity();
    if n == 0 {
        return Err(Error::Hypothesis("need at least one variable".into()));
    }
    if f.degree().unwrap_or(0) > n as u64 {
        return Err(Error::Hypothesis(format!(
            "deg f = {} exceeds the variable count {n}",
            f.degree().unwrap()
        )));
    }
    let count = enumerate_points(std::slice::from_ref(f), budget)?.len() as u64;
    let constant = splitting_constant(f)?.value;
    let predicted = sign_times(n as u64 - 1, constant, p);
    Ok(CongruenceReport {
        count,
        count_mod_p: count % p,
        predicted_mod_p: predicted,
        ok: count % p == predicted,
    })
}

fn sign_times(exponent: u64, value: u64, p: u64) -> u64 {
    if exponent % 2 == 0 {
        value % p
    } else {
        (p - value % p) % p
    }
}

/// `#V(f_1,...,f_m) = (-1)^(n-m) tr(f^(p-1)) mod p` for `f = prod f_i`
/// with every factor nonconstant and `deg f <= n`.
pub fn check_factored_congruence(factors: &[Poly], budget: u64) -> Result<CongruenceReport> {
    let ring = ring_of(factors)?;
    let p = ring.require_fp()?;
    let n = ring.arity();
    let m = factors.len() as u64;
    let mut prod = ring.one();
    for f in factors {
        if f.degree().unwrap_or(0) == 0 {
            return Err(Error::Hypothesis("constant factor".into()));
        }
        prod = prod.mul(f);
    }
    if prod.degree().unwrap_or(0) > n as u64 {
        return Err(Error::Hypothesis(format!(
            "deg(prod f_i) = {} exceeds the variable count {n}",
            prod.degree().unwrap()
        )));
    }
    let count = enumerate_points(factors, budget)?.len() as u64;
    let constant = splitting_constant(&prod)?.value;
    let parity = (n as i64 - m as i64).rem_euclid(2) as u64;
    let predicted = sign_times(parity, constant, p);
    Ok(CongruenceReport {
        count,
        count_mod_p: count % p,
        predicted_mod_p: predicted,
        ok: count % p == predicted,
    })
}

/// Count of a system with `deg(prod f_i) < n` is a multiple of `p`.
pub fn chevalley_warning_check(factors: &[Poly], budget: u64) -> Result<CongruenceReport> {
    let ring = ring_of(factors)?;
    let p = ring.require_fp()?;
    let n = ring.arity();
    let total: u64 = factors.iter().map(|f| f.degree().unwrap_or(0)).sum();
    if total >= n as u64 {
        return Err(Error::Hypothesis(format!(
            "deg(prod f_i) = {total} is not below the variable count {n}"
        )));
    }
    let count = enumerate_points(factors, budget)?.len() as u64;
    Ok(CongruenceReport {
        count,
        count_mod_p: count % p,
        predicted_mod_p: 0,
        ok: count % p == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Ring;

    fn fp(p: u64, n: usize) -> Ring {
        Ring::fp(p, n).unwrap()
    }

    #[test]
    fn hyperbola_and_axes() {
        let r = fp(5, 2);
        let hy = r.parse("x1*x2 - 1").unwrap();
        let pts = enumerate_points(&[hy.clone()], DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(pts.len(), 4);
        pts.validate(&[hy]).unwrap();

        let axes = r.parse("x1*x2").unwrap();
        assert_eq!(
            enumerate_points(&[axes], DEFAULT_POINT_BUDGET).unwrap().len(),
            9
        );

        let unit = r.one();
        assert!(enumerate_points(&[unit], DEFAULT_POINT_BUDGET)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn row_major_and_seq_par_agree() {
        let r = fp(3, 3);
        let f = r.parse("x1*x2 + x3").unwrap();
        let a = enumerate_points(&[f.clone()], DEFAULT_POINT_BUDGET).unwrap();
        let b = enumerate_points_seq(&[f], DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(a, b);
        let mut sorted = a.points.clone();
        sorted.sort();
        assert_eq!(sorted, a.points, "row-major order");
    }

    #[test]
    fn congruence_examples() {
        let r = fp(5, 2);
        let rep = check_pointcount_congruence(
            &r.parse("x1*x2").unwrap(),
            DEFAULT_POINT_BUDGET,
        )
        .unwrap();
        assert_eq!(rep.count, 9);
        assert_eq!(rep.count_mod_p, 4);
        assert_eq!(rep.predicted_mod_p, 4);
        assert!(rep.ok);

        let rep2 = check_pointcount_congruence(
            &r.parse("x1*x2 - 1").unwrap(),
            DEFAULT_POINT_BUDGET,
        )
        .unwrap();
        assert_eq!(rep2.count, 4);
        assert!(rep2.ok);
    }

    #[test]
    fn factored_congruences() {
        let r = fp(3, 2);
        // factors (x, y): one common zero, (-1)^0 * tr((xy)^(p-1)) = 1
        let rep = check_factored_congruence(
            &[r.parse("x1").unwrap(), r.parse("x2").unwrap()],
            DEFAULT_POINT_BUDGET,
        )
        .unwrap();
        assert_eq!(rep.count, 1);
        assert!(rep.ok);

        let r5 = fp(5, 2);
        let rep2 = check_factored_congruence(
            &[r5.parse("x1").unwrap(), r5.parse("x2 - 1").unwrap()],
            DEFAULT_POINT_BUDGET,
        )
        .unwrap();
        assert_eq!(rep2.count, 1);
        assert!(rep2.ok);

        // the three determinantal factors of the 2x2 matrix family over F_3
        let m = crate::schubert::matrix_ring_fp(3, 2, 2).unwrap();
        let rep3 = check_factored_congruence(
            &[
                m.parse("m1_1").unwrap(),
                m.parse("m1_1*m2_2 - m1_2*m2_1").unwrap(),
                m.parse("m2_2").unwrap(),
            ],
            DEFAULT_POINT_BUDGET,
        )
        .unwrap();
        assert!(rep3.ok);
    }

    #[test]
    fn chevalley_warning_examples() {
        let r = fp(5, 2);
        let rep =
            chevalley_warning_check(&[r.parse("x1").unwrap()], DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(rep.count, 5);
        assert!(rep.ok);

        let r3 = fp(3, 3);
        let rep2 = chevalley_warning_check(
            &[r3.parse("x1 + x2 + x3").unwrap()],
            DEFAULT_POINT_BUDGET,
        )
        .unwrap();
        assert_eq!(rep2.count, 9);
        assert!(rep2.ok);

        let rep3 =
            chevalley_warning_check(&[r3.parse("x1*x2").unwrap()], DEFAULT_POINT_BUDGET)
                .unwrap();
        assert!(rep3.ok);

        // degree hypothesis enforced
        assert!(chevalley_warning_check(
            &[r.parse("x1*x2").unwrap()],
            DEFAULT_POINT_BUDGET
        )
        .is_err());
    }

    #[test]
    fn budget_enforced() {
        let r = fp(11, 8);
        let f = r.parse("x1").unwrap();
        assert!(matches!(
            enumerate_points(&[f], DEFAULT_POINT_BUDGET),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
