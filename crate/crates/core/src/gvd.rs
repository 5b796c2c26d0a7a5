//! Geometric vertex decomposition: degenerate one coordinate `l` to zero
//! and compare the limit `X'` with the original `X`.
//!
//! The limit ideal is the initial ideal for the weight putting 1 on `l`;
//! `Pi` is the closure of the projection to `H` (elimination), `Lambda`
//! comes from saturating the limit by `l` and eliminating, and `Lambda'`
//! is cut out by the `l`-coefficients of the given generators (correct as
//! a set: a polynomial in `l` vanishing on a whole vertical line has all
//! of its coefficients vanishing at that point of `H`).

use serde::Serialize;

use crate::counting::enumerate_ideal;
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::monorder::WeightOrder;
use crate::polyring::{Poly, Ring};
use crate::splitting::{is_compatibly_split, splitting_constant};

/// Split `f = l*g1 + g2` with `l` dividing neither part; requires
/// `l`-degree exactly 1.
pub fn split_poly(f: &Poly, ell: usize) -> Result<(Poly, Poly)> {
    let ring = f.ring().clone();
    if ell >= ring.arity() {
        return Err(Error::ArityMismatch(ell, ring.arity()));
    }
    let ell_deg = f
        .terms()
        .iter()
        .map(|(m, _)| m.exp(ell))
        .max()
        .unwrap_or(0);
    if ell_deg != 1 {
        return Err(Error::Hypothesis(format!(
            "{}-degree of f is {}, need exactly 1",
            ring.var_name(ell),
            ell_deg
        )));
    }
    let mut g1_terms = Vec::new();
    let mut g2_terms = Vec::new();
    for (m, c) in f.terms() {
        if m.exp(ell) == 1 {
            let mut e = m.exps().to_vec();
            e[ell] = 0;
            g1_terms.push((crate::polyring::Monomial::new(e), c.clone()));
        } else {
            g2_terms.push((m.clone(), c.clone()));
        }
    }
    Ok((
        Poly::from_terms(ring.clone(), g1_terms),
        Poly::from_terms(ring, g2_terms),
    ))
}

/// The decomposition record of one geometric vertex decomposition.
/// `x_ideal` and `limit_ideal` live in the ambient ring; `pi`, `lambda`,
/// and `lambda_prime` live in the contracted `H`-ring.
#[derive(Debug, Clone)]
pub struct GvdData {
    pub ell: usize,
    pub ambient: Ring,
    pub h_ring: Ring,
    pub x_ideal: Ideal,
    pub limit_ideal: Ideal,
    pub pi: Ideal,
    pub lambda: Ideal,
    pub lambda_prime: Ideal,
    pub g1: Option<Poly>,
    pub g2: Option<Poly>,
}

/// Compute the limit of `V(I)` under scaling of coordinate `ell`, with
/// the projection `Pi`, the divisorial part `Lambda`, and the vertical
/// locus `Lambda'`.
pub fn compute_gvd(ideal: &Ideal, ell: usize) -> Result<GvdData> {
    let ambient = ideal.ring().clone();
    ambient.require_fp()?;
    let n = ambient.arity();
    if ell >= n {
        return Err(Error::ArityMismatch(ell, n));
    }
    let h_ring = ambient.contract(ell);

    let mut weight = vec![0i128; n];
    weight[ell] = 1;
    let limit_ideal = ideal.initial_ideal(&WeightOrder::weight(&weight))?;

    let pi = ideal.eliminate_into(ell, &h_ring)?;
    let lambda = limit_ideal
        .saturate(&ambient.var(ell))?
        .eliminate_into(ell, &h_ring)?;

    // all l-coefficients of the given generators, pushed down to H
    let mut coeff_gens = Vec::new();
    for g in ideal.generators() {
        let ell_deg = g.terms().iter().map(|(m, _)| m.exp(ell)).max().unwrap_or(0);
        for k in 0..=ell_deg {
            let terms: Vec<_> = g
                .terms()
                .iter()
                .filter(|(m, _)| m.exp(ell) == k)
                .map(|(m, c)| {
                    let mut e = m.exps().to_vec();
                    e.remove(ell);
                    (crate::polyring::Monomial::new(e), c.clone())
                })
                .collect();
            let coeff = Poly::from_terms(h_ring.clone(), terms);
            if !coeff.is_zero() {
                coeff_gens.push(coeff);
            }
        }
    }
    let lambda_prime = Ideal::new(h_ring.clone(), coeff_gens)?;

    Ok(GvdData {
        ell,
        ambient,
        h_ring,
        x_ideal: ideal.clone(),
        limit_ideal,
        pi,
        lambda,
        lambda_prime,
        g1: None,
        g2: None,
    })
}

impl GvdData {
    /// Pointwise containments `Lambda' ⊆ Lambda ⊆ Pi` and the set identity
    /// `V(limit) = V(Pi + <l>) ∪ V(Lambda)` over one prime.
    pub fn verify_set_identities(&self, budget: u64) -> Result<()> {
        let lp = enumerate_ideal(&self.lambda_prime, budget)?;
        let la = enumerate_ideal(&self.lambda, budget)?;
        let pi = enumerate_ideal(&self.pi, budget)?;
        for pt in &lp.points {
            if !la.contains(pt) {
                return Err(Error::Invariant("Lambda' not inside Lambda".into()));
            }
        }
        for pt in &la.points {
            if !pi.contains(pt) {
                return Err(Error::Invariant("Lambda not inside Pi".into()));
            }
        }
        let limit = enumerate_ideal(&self.limit_ideal, budget)?;
        let p = limit.p;
        for pt in &limit.points {
            let (h, l) = self.split_point(pt);
            let in_union = (l == 0 && pi.contains(&h)) || la.contains(&h);
            if !in_union {
                return Err(Error::Invariant(format!(
                    "limit point {pt:?} outside (Pi x 0) ∪ (Lambda x L)"
                )));
            }
        }
        // reverse inclusion
        for h in &pi.points {
            let pt = self.join_point(h, 0);
            if !limit.contains(&pt) {
                return Err(Error::Invariant("Pi x 0 not inside the limit".into()));
            }
        }
        for h in &la.points {
            for l in 0..p {
                let pt = self.join_point(h, l);
                if !limit.contains(&pt) {
                    return Err(Error::Invariant("Lambda x L not inside the limit".into()));
                }
            }
        }
        Ok(())
    }

    pub fn split_point(&self, pt: &[u64]) -> (Vec<u64>, u64) {
        let mut h = pt.to_vec();
        let l = h.remove(self.ell);
        (h, l)
    }

    pub fn join_point(&self, h: &[u64], l: u64) -> Vec<u64> {
        let mut pt = h.to_vec();
        pt.insert(self.ell, l);
        pt
    }

    fn vanishes_on(&self, ideal: &Ideal, pt: &[u64]) -> Result<bool> {
        for g in ideal.generators() {
            if g.eval(pt)?.value != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The constructible injection `X -> X'`: identity over `Lambda'`,
    /// projection to `l = 0` elsewhere. Errors when the input is not on
    /// `X`; the output is checked to lie on the limit.
    pub fn iota(&self, pt: &[u64]) -> Result<Vec<u64>> {
        if !self.vanishes_on(&self.x_ideal, pt)? {
            return Err(Error::Hypothesis(format!("point {pt:?} is not on X")));
        }
        let (h, _l) = self.split_point(pt);
        let out = if self.vanishes_on(&self.lambda_prime, &h)? {
            pt.to_vec()
        } else {
            self.join_point(&h, 0)
        };
        if !self.vanishes_on(&self.limit_ideal, &out)? {
            return Err(Error::Invariant(format!(
                "iota image {out:?} is not on the limit"
            )));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassIdentityReport {
    pub x_count: u64,
    pub limit_count: u64,
    pub lambda_minus_prime_count: u64,
    pub p: u64,
    pub ok: bool,
}

/// Enumerate all four point sets and check `|X'| = |X| + p |Lambda \ Lambda'|`
/// exactly, plus the injectivity and image description of `iota`.
pub fn verify_class_identity(d: &GvdData, budget: u64) -> Result<ClassIdentityReport> {
    let p = d.ambient.require_fp()?;
    let x = enumerate_ideal(&d.x_ideal, budget)?;
    let limit = enumerate_ideal(&d.limit_ideal, budget)?;
    let la = enumerate_ideal(&d.lambda, budget)?;
    let mut diff = 0u64;
    let mut diff_points = Vec::new();
    for h in &la.points {
        if !d.vanishes_on(&d.lambda_prime, h)? {
            diff += 1;
            diff_points.push(h.clone());
        }
    }
    let ok = limit.len() as u64 == x.len() as u64 + p * diff;

    // iota: injective, image = complement of (Lambda \ Lambda') x L
    let mut images: Vec<Vec<u64>> = x
        .points
        .iter()
        .map(|pt| d.iota(pt))
        .collect::<Result<_>>()?;
    images.sort();
    let before = images.len();
    images.dedup();
    if images.len() != before {
        return Err(Error::Invariant("iota is not injective".into()));
    }
    let mut complement: Vec<Vec<u64>> = limit
        .points
        .iter()
        .filter(|pt| {
            let (h, _) = d.split_point(pt);
            !diff_points.contains(&h)
        })
        .cloned()
        .collect();
    complement.sort();
    if images != complement {
        return Err(Error::Invariant(
            "iota image is not the complement of (Lambda \\ Lambda') x L".into(),
        ));
    }

    Ok(ClassIdentityReport {
        x_count: x.len() as u64,
        limit_count: limit.len() as u64,
        lambda_minus_prime_count: diff,
        p,
        ok,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GvdSplitReport {
    pub splitting_constant_g1: u64,
    pub pi_split: bool,
    pub lambda_split: bool,
    pub lambda_prime_split: bool,
}

/// For `f = l*g1 + g2` with `tr_H(g1^(p-1) . )` a splitting on `H`:
/// `Pi` and `Lambda` must be compatibly split there; the verdict for
/// `Lambda'` is reported without being asserted.
pub fn gvd_split_consistency(
    f: &Poly,
    ell: usize,
    ideal: &Ideal,
    budget: u64,
) -> Result<(GvdData, GvdSplitReport)> {
    let (g1, g2) = split_poly(f, ell)?;
    let mut data = compute_gvd(ideal, ell)?;
    let g1_h = g1.project_drop(&data.h_ring, ell)?;
    let c = splitting_constant(&g1_h)?;
    if c.value == 0 {
        return Err(Error::Hypothesis(
            "tr(g1^(p-1) . ) is not a splitting on H".into(),
        ));
    }
    let pi_split = is_compatibly_split(&data.pi, &g1_h, budget)?;
    let lambda_split = is_compatibly_split(&data.lambda, &g1_h, budget)?;
    let lambda_prime_split = is_compatibly_split(&data.lambda_prime, &g1_h, budget)?;
    data.g1 = Some(g1);
    data.g2 = Some(g2);
    Ok((
        data,
        GvdSplitReport {
            splitting_constant_g1: c.value,
            pi_split,
            lambda_split,
            lambda_prime_split,
        },
    ))
}
