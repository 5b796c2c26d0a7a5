//! Structural invariants: closure of compatibility under the ideal
//! operations, stability of compatibly split ideals under the operator,
//! projection fibers in vertex decompositions, and dimension monotonicity
//! of the degeneration map.

use std::collections::BTreeSet;

use frobsplit::counting::{enumerate_ideal, DEFAULT_POINT_BUDGET};
use frobsplit::groebner::{Ideal, MonomialIdeal};
use frobsplit::gvd::compute_gvd;
use frobsplit::polyring::{Domain, Monomial, Poly, Ring, VarScheme};
use frobsplit::splitposet::{closure_algorithm, MonomialComponents};
use frobsplit::splitting::{
    is_compatibly_split, splitting_constant, tr, CompatMode, DEFAULT_COMPAT_BUDGET,
};

/// Squarefree monomial ideals are all compatibly split under the standard
/// splitting, which makes them a convenient pool of random compatibly
/// split pairs.
fn random_squarefree_ideal(ring: &Ring, rng: &mut impl rand::Rng) -> Ideal {
    let n = ring.arity();
    let ngens = rng.random_range(1..=2usize);
    let mut gens = Vec::new();
    for _ in 0..ngens {
        let exps: Vec<u16> = (0..n).map(|_| rng.random_range(0..=1u16)).collect();
        if exps.iter().all(|&e| e == 0) {
            continue;
        }
        gens.push(ring.monomial(exps));
    }
    Ideal::new(ring.clone(), gens).unwrap()
}

#[test]
fn compatibility_closed_under_sum_intersection_colon() {
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    let mut rng = StdRng::seed_from_u64(31);
    for &p in &[2u64, 3] {
        let ring = Ring::fp(p, 3).unwrap();
        let f = ring.parse("x1*x2*x3").unwrap();
        for _ in 0..15 {
            let i = random_squarefree_ideal(&ring, &mut rng);
            let j = random_squarefree_ideal(&ring, &mut rng);
            assert!(is_compatibly_split(&i, &f, DEFAULT_COMPAT_BUDGET).unwrap());
            assert!(is_compatibly_split(&j, &f, DEFAULT_COMPAT_BUDGET).unwrap());
            let sum = i.sum(&j).unwrap();
            assert!(is_compatibly_split(&sum, &f, DEFAULT_COMPAT_BUDGET).unwrap());
            let meet = i.intersect(&j).unwrap();
            assert!(is_compatibly_split(&meet, &f, DEFAULT_COMPAT_BUDGET).unwrap());
            if !j.is_zero_ideal() {
                let quot = i.colon(&j).unwrap();
                assert!(is_compatibly_split(&quot, &f, DEFAULT_COMPAT_BUDGET).unwrap());
            }
        }
    }
}

/// Under a true splitting, a compatibly split ideal satisfies
/// `phi(I) = I`, not just containment: each generator lies in the
/// `F_p`-span of operator images of bounded-degree multiples (the
/// operator is `F_p`-linear because p-th roots fix the prime field).
#[test]
fn split_ideals_are_fixed_by_the_operator() {
    let p = 2u64;
    let ring = Ring::fp(p, 3).unwrap();
    let f = ring.parse("x1*x2*x3 + x2^3 + x3^3").unwrap();
    let fp1 = f.pow(p - 1);
    for text in ["x1*x2*x3 + x2^3 + x3^3", "x2; x3"] {
        let ideal = Ideal::parse(&ring, text).unwrap();
        assert!(is_compatibly_split(&ideal, &f, DEFAULT_COMPAT_BUDGET).unwrap());
        // collect operator images of m*g up to a degree bound
        let max_deg = 6u16;
        let mut images: Vec<Poly> = Vec::new();
        for g in ideal.generators() {
            let mut stack: Vec<Vec<u16>> = vec![Vec::new()];
            for _ in 0..3 {
                let mut next = Vec::new();
                for prefix in stack {
                    for e in 0..=max_deg {
                        let mut q = prefix.clone();
                        q.push(e);
                        if q.iter().map(|&x| x as u64).sum::<u64>() <= max_deg as u64 {
                            next.push(q);
                        }
                    }
                }
                stack = next;
            }
            for exps in stack {
                let m = ring.monomial(exps);
                let img = tr(&fp1.mul(&m).mul(g)).unwrap();
                if !img.is_zero() {
                    images.push(img);
                }
            }
        }
        // row-reduce the image span and check each generator reduces to 0
        let mut monos: BTreeSet<Monomial> = BTreeSet::new();
        for h in &images {
            for (m, _) in h.terms() {
                monos.insert(m.clone());
            }
        }
        for g in ideal.generators() {
            for (m, _) in g.terms() {
                monos.insert(m.clone());
            }
        }
        let monos: Vec<Monomial> = monos.into_iter().collect();
        let to_vec = |h: &Poly| -> Vec<u64> {
            let mut v = vec![0u64; monos.len()];
            for (m, c) in h.terms() {
                let idx = monos.binary_search(m).unwrap();
                v[idx] = c.as_fp().unwrap();
            }
            v
        };
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let reduce = |mut v: Vec<u64>, basis: &Vec<Vec<u64>>| -> Vec<u64> {
            for b in basis {
                let lead = b.iter().position(|&x| x != 0).unwrap();
                if v[lead] != 0 {
                    let inv = frobsplit::polyring::pow_mod(b[lead], p - 2, p);
                    let factor = v[lead] * inv % p;
                    for i in 0..v.len() {
                        v[i] = (v[i] + p * p - factor * b[i] % p) % p;
                    }
                }
            }
            v
        };
        for h in &images {
            let r = reduce(to_vec(h), &basis);
            if r.iter().any(|&x| x != 0) {
                basis.push(r);
                basis.sort_by_key(|b| b.iter().position(|&x| x != 0).unwrap());
            }
        }
        for g in ideal.generators() {
            let r = reduce(to_vec(g), &basis);
            assert!(
                r.iter().all(|&x| x == 0),
                "generator {g} is not in the operator image span of {text}"
            );
        }
    }
}

#[test]
fn reduced_limit_forces_single_point_fibers() {
    // X = V(x - l*y): the limit is squarefree-initial, so the fiber of X
    // over each point of Pi \ Lambda is a single point
    let p = 5u64;
    let ring = Ring::with_scheme(Domain::Fp(p), 3, VarScheme::HL).unwrap();
    let ideal = Ideal::new(ring.clone(), vec![ring.parse("h1 - l*h2").unwrap()]).unwrap();
    let d = compute_gvd(&ideal, 2).unwrap();
    let init = MonomialIdeal::try_from_ideal(&d.limit_ideal).unwrap();
    assert!(init.is_squarefree());
    let x = enumerate_ideal(&d.x_ideal, DEFAULT_POINT_BUDGET).unwrap();
    let pi = enumerate_ideal(&d.pi, DEFAULT_POINT_BUDGET).unwrap();
    let lambda = enumerate_ideal(&d.lambda, DEFAULT_POINT_BUDGET).unwrap();
    for h in &pi.points {
        if lambda.contains(h) {
            continue;
        }
        let fiber = x
            .points
            .iter()
            .filter(|pt| {
                let (hh, _) = d.split_point(pt);
                &hh == h
            })
            .count();
        assert_eq!(fiber, 1, "fiber over {h:?}");
    }
}

#[test]
fn degeneration_map_does_not_drop_dimension() {
    let p = 2u64;
    let ring = Ring::fp(p, 3).unwrap();
    let f = ring.parse("x1*x2*x3").unwrap();
    let monomial = MonomialComponents;
    let poset = closure_algorithm(
        &f,
        vec![
            (Ideal::parse(&ring, "x1").unwrap(), None),
            (Ideal::parse(&ring, "x2").unwrap(), None),
            (Ideal::parse(&ring, "x3").unwrap(), None),
        ],
        &[&monomial],
        CompatMode::Oracle,
        DEFAULT_COMPAT_BUDGET,
    )
    .unwrap();
    let n = 3;
    for z in poset.coordinate_subspaces() {
        let member = poset.pi_f_init(&z).unwrap();
        let degen = MonomialIdeal::try_from_ideal(&poset.members()[member].degen).unwrap();
        let (dim, _) = degen.dim_degree().unwrap();
        assert!(dim >= n - z.len(), "dim drops at {z:?}");
    }
}

#[test]
fn schubert_splitting_constants_are_units() {
    for n in [2usize, 3] {
        let f = frobsplit::schubert::schubert_splitting_poly(n);
        for &p in &[2u64, 3, 5] {
            let fp = f.reduce_mod_p(p).unwrap();
            let c = splitting_constant(&fp).unwrap();
            assert!(
                c.value == 1 || c.value == p - 1,
                "constant {} for n={n}, p={p}",
                c.value
            );
        }
    }
}
