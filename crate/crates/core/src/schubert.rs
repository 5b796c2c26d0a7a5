//! Matrix Schubert varieties: Bruhat combinatorics, Fulton's
//! rank-condition generators, the product-of-minors splitting polynomial
//! with its antidiagonal degeneration, and the closure catalog producing
//! one member per permutation.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::monorder::{antidiagonal_weight, WeightOrder};
use crate::polyring::{Domain, Poly, Ring, VarScheme};
use crate::splitposet::{
    closure_algorithm_with_order, ComponentHook, Components, Provenance, SplitPoset,
};
use crate::splitting::CompatMode;

/// A permutation of `{1..n}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(one_line: Vec<usize>) -> Result<Permutation> {
        let n = one_line.len();
        let mut seen = vec![false; n + 1];
        for &v in &one_line {
            if v == 0 || v > n || seen[v] {
                return Err(Error::Parse(format!("not a permutation: {one_line:?}")));
            }
            seen[v] = true;
        }
        Ok(Permutation(one_line))
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation((1..=n).collect())
    }

    pub fn simple_reflection(i: usize, n: usize) -> Permutation {
        let mut v: Vec<usize> = (1..=n).collect();
        v.swap(i - 1, i);
        Permutation(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn one_line(&self) -> &[usize] {
        &self.0
    }

    pub fn to_string_compact(&self) -> String {
        self.0.iter().map(|v| v.to_string()).join("")
    }

    pub fn parse_compact(s: &str, n: usize) -> Result<Permutation> {
        let digits: Vec<usize> = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::Parse(format!("bad permutation digit in {s}")))
            })
            .collect::<Result<_>>()?;
        if digits.len() != n {
            return Err(Error::ArityMismatch(digits.len(), n));
        }
        Permutation::new(digits)
    }

    pub fn inverse(&self) -> Permutation {
        let n = self.n();
        let mut inv = vec![0; n];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// Coxeter length = inversion count.
    pub fn length(&self) -> usize {
        let n = self.n();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.0[i] > self.0[j])
            .count()
    }

    pub fn descents(&self) -> Vec<usize> {
        (1..self.n())
            .filter(|&i| self.0[i - 1] > self.0[i])
            .collect()
    }

    /// Right multiplication by the simple reflection `s_i` (swap the
    /// entries at positions i, i+1).
    pub fn right_mul_s(&self, i: usize) -> Permutation {
        let mut v = self.0.clone();
        v.swap(i - 1, i);
        Permutation(v)
    }

    /// `r(i, j) = #{k <= i : pi(k) <= j}`.
    pub fn rank_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut r = vec![vec![0; n]; n];
        for i in 1..=n {
            for j in 1..=n {
                r[i - 1][j - 1] = (1..=i).filter(|&k| self.apply(k) <= j).count();
            }
        }
        r
    }

    /// Rothe diagram: boxes `(i, j)` with `pi(i) > j` and `pi^{-1}(j) > i`.
    pub fn diagram(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let inv = self.inverse();
        let mut boxes = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if self.apply(i) > j && inv.apply(j) > i {
                    boxes.push((i, j));
                }
            }
        }
        boxes
    }

    /// Southeast corners of the diagram.
    pub fn essential_set(&self) -> Vec<(usize, usize)> {
        let d = self.diagram();
        d.iter()
            .copied()
            .filter(|&(i, j)| !d.contains(&(i + 1, j)) && !d.contains(&(i, j + 1)))
            .collect()
    }

    /// `pi` and `pi^{-1}` each have at most one descent.
    pub fn is_bigrassmannian(&self) -> bool {
        self.descents().len() <= 1 && self.inverse().descents().len() <= 1
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_string_compact())
    }
}

/// Bruhat comparison through rank matrices: `u <= v` iff `r_u >= r_v`
/// entrywise.
pub fn bruhat_leq(u: &Permutation, v: &Permutation) -> Result<bool> {
    if u.n() != v.n() {
        return Err(Error::ArityMismatch(u.n(), v.n()));
    }
    let ru = u.rank_matrix();
    let rv = v.rank_matrix();
    Ok(ru
        .iter()
        .flatten()
        .zip(rv.iter().flatten())
        .all(|(a, b)| a >= b))
}

pub fn all_permutations(n: usize) -> Vec<Permutation> {
    (1..=n)
        .permutations(n)
        .map(Permutation)
        .collect()
}

/// Elements covered by `pi`: length drops by one, below in Bruhat order.
pub fn covers_down(pi: &Permutation) -> Vec<Permutation> {
    let n = pi.n();
    let len = pi.length();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let mut v = pi.0.clone();
            v.swap(i - 1, j - 1);
            let q = Permutation(v);
            if q.length() + 1 == len {
                out.push(q);
            }
        }
    }
    out.sort();
    out
}

/// Elements covering `pi`.
pub fn covers_up(pi: &Permutation) -> Vec<Permutation> {
    let n = pi.n();
    let len = pi.length();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let mut v = pi.0.clone();
            v.swap(i - 1, j - 1);
            let q = Permutation(v);
            if q.length() == len + 1 {
                out.push(q);
            }
        }
    }
    out.sort();
    out
}

/// Bruhat-minimal common upper bounds of a pair.
pub fn minimal_upper_bounds(a: &Permutation, b: &Permutation) -> Result<Vec<Permutation>> {
    let n = a.n();
    let mut uppers: Vec<Permutation> = Vec::new();
    for s in all_permutations(n) {
        if bruhat_leq(a, &s)? && bruhat_leq(b, &s)? {
            uppers.push(s);
        }
    }
    let mut minimal = Vec::new();
    for s in &uppers {
        let mut is_min = true;
        for t in &uppers {
            if t != s && bruhat_leq(t, s)? {
                is_min = false;
                break;
            }
        }
        if is_min {
            minimal.push(s.clone());
        }
    }
    minimal.sort();
    Ok(minimal)
}

// ---------------------------------------------------------------------------
// Matrix rings and determinants
// ---------------------------------------------------------------------------

pub fn matrix_ring_fp(p: u64, rows: usize, cols: usize) -> Result<Ring> {
    Ring::with_scheme(Domain::Fp(p), rows * cols, VarScheme::Matrix { rows, cols })
}

pub fn matrix_ring_int(rows: usize, cols: usize) -> Ring {
    Ring::with_scheme(Domain::Int, rows * cols, VarScheme::Matrix { rows, cols }).unwrap()
}

fn matrix_cols(ring: &Ring) -> usize {
    match ring.scheme() {
        VarScheme::Matrix { cols, .. } => cols,
        _ => panic!("not a matrix ring"),
    }
}

pub fn matrix_entry(ring: &Ring, i: usize, j: usize) -> Poly {
    let cols = matrix_cols(ring);
    ring.var((i - 1) * cols + (j - 1))
}

/// Determinant of the generic submatrix on the given 1-based rows and
/// columns, by cofactor expansion.
pub fn generic_minor(ring: &Ring, rows: &[usize], cols: &[usize]) -> Poly {
    assert_eq!(rows.len(), cols.len());
    let entries: Vec<Vec<Poly>> = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| matrix_entry(ring, i, j)).collect())
        .collect();
    det_poly(ring, &entries)
}

/// Cofactor-expansion determinant of a square matrix of polynomials.
pub fn det_poly(ring: &Ring, m: &[Vec<Poly>]) -> Poly {
    let k = m.len();
    if k == 0 {
        return ring.one();
    }
    if k == 1 {
        return m[0][0].clone();
    }
    let mut acc = ring.zero();
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let cof = entry.mul(&det_poly(ring, &minor));
        acc = if j % 2 == 0 { acc.add(&cof) } else { acc.sub(&cof) };
    }
    acc
}

/// `d_{[i,j]}`: determinant of the square submatrix on rows and columns
/// `i..=j`.
pub fn d_interval(ring: &Ring, i: usize, j: usize) -> Poly {
    let idx: Vec<usize> = (i..=j).collect();
    generic_minor(ring, &idx, &idx)
}

/// Fulton's generators for the matrix Schubert variety of `pi`: for each
/// essential box `(b, c)`, all `(r(b,c)+1)`-minors of the upper-left
/// `b x c` submatrix.
pub fn fulton_generators(pi: &Permutation, ring: &Ring) -> Result<Ideal> {
    let n = pi.n();
    if ring.arity() != n * n {
        return Err(Error::ArityMismatch(ring.arity(), n * n));
    }
    let r = pi.rank_matrix();
    let mut gens = Vec::new();
    for (b, c) in pi.essential_set() {
        let size = r[b - 1][c - 1] + 1;
        for rows in (1..=b).combinations(size) {
            for cols in (1..=c).combinations(size) {
                gens.push(generic_minor(ring, &rows, &cols));
            }
        }
    }
    Ideal::new(ring.clone(), gens)
}

/// The splitting polynomial `f = prod d_{[1,i]} (i < n) * prod d_{[j,n]}`,
/// homogeneous of degree n^2, over the integers.
pub fn schubert_splitting_poly(n: usize) -> Poly {
    let ring = matrix_ring_int(n, n);
    let mut f = ring.one();
    for i in 1..n {
        f = f.mul(&d_interval(&ring, 1, i));
    }
    for j in 1..=n {
        f = f.mul(&d_interval(&ring, j, n));
    }
    f
}

/// Rectangular variant for a `k x n` matrix (`k <= n`): upper-left square
/// minors, the k x k windows along the top, and the lower-right square
/// minors; their antidiagonals tile the matrix, and the degree is `k*n`.
pub fn rect_splitting_poly(k: usize, n: usize) -> Result<Poly> {
    if k > n || k == 0 {
        return Err(Error::Hypothesis(format!("need 0 < k <= n, got {k} > {n}")));
    }
    let ring = matrix_ring_int(k, n);
    let mut f = ring.one();
    for i in 1..k {
        let idx: Vec<usize> = (1..=i).collect();
        f = f.mul(&generic_minor(&ring, &idx, &idx));
    }
    for i in 1..=(n - k) {
        let rows: Vec<usize> = (1..=k).collect();
        let cols: Vec<usize> = (i..=i + k - 1).collect();
        f = f.mul(&generic_minor(&ring, &rows, &cols));
    }
    for j in 1..=k {
        let rows: Vec<usize> = (k - j + 1..=k).collect();
        let cols: Vec<usize> = (n - j + 1..=n).collect();
        f = f.mul(&generic_minor(&ring, &rows, &cols));
    }
    Ok(f)
}

/// Check that the order gives every used minor its antidiagonal leading
/// term (times a sign) before computations rely on it.
pub fn validate_antidiagonal(ring: &Ring, n: usize, o: &WeightOrder) -> Result<()> {
    for size in 1..=n {
        for rows in (1..=n).combinations(size) {
            for cols in (1..=n).combinations(size) {
                let minor = generic_minor(ring, &rows, &cols);
                let lead = o.leading_monomial(&minor)?;
                let mut anti = vec![0u16; ring.arity()];
                let m = matrix_cols(ring);
                for (t, &r) in rows.iter().enumerate() {
                    let c = cols[size - 1 - t];
                    anti[(r - 1) * m + (c - 1)] = 1;
                }
                if lead.exps() != anti.as_slice() {
                    return Err(Error::Invariant(format!(
                        "antidiagonal order fails on rows {rows:?}, cols {cols:?}"
                    )));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Catalog hook and the full matrix Schubert poset
// ---------------------------------------------------------------------------

/// Decomposes intersections of matrix Schubert varieties through Bruhat
/// combinatorics: the components of `X_a ∩ X_b` are the `X_s` for the
/// Bruhat-minimal upper bounds `s` of `(a, b)`. Claims are re-verified
/// against the Groebner engine: the intersection of the claimed
/// components must equal the sum ideal.
pub struct SchubertCatalog {
    n: usize,
    fulton_cache: HashMap<Permutation, Ideal>,
}

impl SchubertCatalog {
    pub fn new(n: usize, ring: Ring) -> Result<SchubertCatalog> {
        let mut fulton_cache = HashMap::new();
        for pi in all_permutations(n) {
            fulton_cache.insert(pi.clone(), fulton_generators(&pi, &ring)?);
        }
        Ok(SchubertCatalog { n, fulton_cache })
    }

    pub fn fulton(&self, pi: &Permutation) -> &Ideal {
        &self.fulton_cache[pi]
    }
}

impl ComponentHook for SchubertCatalog {
    fn decompose(
        &self,
        ideal: &Ideal,
        prov: &Provenance<'_>,
    ) -> Result<Option<Components>> {
        match prov {
            Provenance::Seed { tag: Some(tag) } => {
                let pi = Permutation::parse_compact(tag, self.n)?;
                let fulton = self.fulton(&pi);
                if fulton != ideal {
                    return Err(Error::Invariant(format!(
                        "seed tagged {tag} does not match its rank conditions"
                    )));
                }
                Ok(Some(vec![(ideal.clone(), Some(tag.to_string()))]))
            }
            Provenance::Sum {
                a_tag: Some(a),
                b_tag: Some(b),
            } => {
                let pa = Permutation::parse_compact(a, self.n)?;
                let pb = Permutation::parse_compact(b, self.n)?;
                let sigmas = minimal_upper_bounds(&pa, &pb)?;
                let comps: Components = sigmas
                    .iter()
                    .map(|s| (self.fulton(s).clone(), Some(s.to_string_compact())))
                    .collect();
                // the claimed components must intersect back to the sum
                let mut meet: Option<Ideal> = None;
                for (c, _) in &comps {
                    meet = Some(match meet {
                        None => c.clone(),
                        Some(m) => m.intersect(c)?,
                    });
                }
                let meet = meet.ok_or_else(|| {
                    Error::Invariant("pair of permutations with no upper bound".into())
                })?;
                if &meet != ideal {
                    return Err(Error::Invariant(format!(
                        "catalog decomposition of X_{a} ∩ X_{b} disagrees with the ideal"
                    )));
                }
                Ok(Some(comps))
            }
            _ => Ok(None),
        }
    }
}

/// Run the closure algorithm from the divisor seeds `<d_{[1,i]}>` with the
/// Bruhat catalog; the result has one member per permutation of `S_n`,
/// degenerated under the (per-minor validated) antidiagonal order.
pub fn generate_matrix_schuberts(
    n: usize,
    p: u64,
    mode: CompatMode,
    budget: u64,
) -> Result<SplitPoset> {
    let ring = matrix_ring_fp(p, n, n)?;
    let f = schubert_splitting_poly(n).reduce_mod_p(p)?.with_ring(&ring)?;
    let order = antidiagonal_weight(n, n);
    validate_antidiagonal(&ring, n, &order)?;
    let catalog = SchubertCatalog::new(n, ring.clone())?;
    let mut seeds = Vec::new();
    for i in 1..n {
        let r_i = Permutation::simple_reflection(i, n);
        seeds.push((
            catalog.fulton(&r_i).clone(),
            Some(r_i.to_string_compact()),
        ));
    }
    let mut poset =
        closure_algorithm_with_order(&f, seeds, &[&catalog], mode, budget, &order)?;
    // tag the ambient member as the identity permutation
    let ident = Permutation::identity(n);
    if let Some(idx) = poset.find(&Ideal::zero(ring))? {
        poset.set_tag(idx, ident.to_string_compact());
    }
    Ok(poset)
}

/// The Bruhat poset of `S_n` as a finite poset (direct order: `u <= v`).
pub fn bruhat_poset(n: usize) -> Result<crate::splitposet::FinitePoset> {
    let perms = all_permutations(n);
    let labels = perms.iter().map(|p| p.to_string_compact()).collect();
    let mut leq = vec![vec![false; perms.len()]; perms.len()];
    for (i, u) in perms.iter().enumerate() {
        for (j, v) in perms.iter().enumerate() {
            leq[i][j] = bruhat_leq(u, v)?;
        }
    }
    crate::splitposet::FinitePoset::new(labels, leq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::MonomialIdeal;
    use crate::splitting::DEFAULT_COMPAT_BUDGET;

    #[test]
    fn permutation_basics() {
        let pi = Permutation::new(vec![2, 4, 3, 1]).unwrap();
        assert_eq!(pi.length(), 4);
        assert_eq!(pi.inverse().one_line(), &[4, 1, 3, 2]);
        assert!(Permutation::new(vec![1, 1]).is_err());
    }

    #[test]
    fn bruhat_and_covers() {
        let p213 = Permutation::parse_compact("213", 3).unwrap();
        let p321 = Permutation::parse_compact("321", 3).unwrap();
        assert!(bruhat_leq(&p213, &p321).unwrap());
        assert!(!bruhat_leq(&p321, &p213).unwrap());

        // elements covering the identity in S_3
        let id = Permutation::identity(3);
        let ups = covers_up(&id);
        assert_eq!(
            ups,
            vec![
                Permutation::parse_compact("132", 3).unwrap(),
                Permutation::parse_compact("213", 3).unwrap(),
            ]
        );

        // every pi of length >= 2 covers at least two elements
        for n in [3usize, 4] {
            for pi in all_permutations(n) {
                if pi.length() >= 2 {
                    assert!(covers_down(&pi).len() >= 2, "{pi}");
                }
            }
        }
    }

    #[test]
    fn bigrassmannian_examples() {
        assert!(Permutation::parse_compact("231", 3)
            .unwrap()
            .is_bigrassmannian());
        assert!(!Permutation::parse_compact("321", 3)
            .unwrap()
            .is_bigrassmannian());
        assert!(Permutation::identity(3).is_bigrassmannian());
    }

    #[test]
    fn rank_matrix_and_essential_set() {
        let pi = Permutation::parse_compact("213", 3).unwrap();
        assert_eq!(pi.essential_set(), vec![(1, 1)]);
        assert_eq!(pi.rank_matrix()[0][0], 0);

        let id = Permutation::identity(3);
        assert!(id.essential_set().is_empty());
    }

    #[test]
    fn fulton_ideals_small() {
        let ring = matrix_ring_fp(5, 3, 3).unwrap();
        let p213 = Permutation::parse_compact("213", 3).unwrap();
        let i = fulton_generators(&p213, &ring).unwrap();
        assert_eq!(i, Ideal::parse(&ring, "m1_1").unwrap());

        let p132 = Permutation::parse_compact("132", 3).unwrap();
        let i2 = fulton_generators(&p132, &ring).unwrap();
        assert_eq!(
            i2,
            Ideal::parse(&ring, "m1_1*m2_2 - m1_2*m2_1").unwrap()
        );

        let id = Permutation::identity(3);
        assert!(fulton_generators(&id, &ring).unwrap().is_zero_ideal());
    }

    #[test]
    fn splitting_poly_shape() {
        // n = 2: f = m11 * (m11 m22 - m12 m21) * m22, degree 4
        let f = schubert_splitting_poly(2);
        assert_eq!(f.degree(), Some(4));
        let ring = matrix_ring_int(2, 2);
        let expected = ring
            .parse("m1_1")
            .unwrap()
            .mul(&ring.parse("m1_1*m2_2 - m1_2*m2_1").unwrap())
            .mul(&ring.parse("m2_2").unwrap());
        assert_eq!(f, expected);

        let f3 = schubert_splitting_poly(3);
        assert_eq!(f3.degree(), Some(9));
        // antidiagonal leading term is the product of all entries
        let fp_ring = matrix_ring_fp(5, 3, 3).unwrap();
        let f3p = f3.reduce_mod_p(5).unwrap().with_ring(&fp_ring).unwrap();
        let o = antidiagonal_weight(3, 3);
        validate_antidiagonal(&fp_ring, 3, &o).unwrap();
        let lead = o.leading_monomial(&f3p).unwrap();
        assert!(lead.exps().iter().all(|&e| e == 1));
    }

    #[test]
    fn rect_splitting_poly_shape() {
        // k=1, n=2: f = m11 * m12
        let f = rect_splitting_poly(1, 2).unwrap();
        let ring = matrix_ring_int(1, 2);
        assert_eq!(f, ring.parse("m1_1*m1_2").unwrap());

        // k=2, n=3: degree 6, antidiagonal term = all entries
        let f23 = rect_splitting_poly(2, 3).unwrap();
        assert_eq!(f23.degree(), Some(6));
        let fp_ring = matrix_ring_fp(5, 2, 3).unwrap();
        let f23p = f23.reduce_mod_p(5).unwrap().with_ring(&fp_ring).unwrap();
        let o = antidiagonal_weight(2, 3);
        let lead = o.leading_monomial(&f23p).unwrap();
        assert!(lead.exps().iter().all(|&e| e == 1));
    }

    #[test]
    fn matrix_schubert_poset_n2() {
        let poset = generate_matrix_schuberts(2, 3, CompatMode::Oracle, DEFAULT_COMPAT_BUDGET)
            .unwrap();
        assert_eq!(poset.len(), 2);
        let ring = matrix_ring_fp(3, 2, 2).unwrap();
        assert!(poset.find(&Ideal::zero(ring.clone())).unwrap().is_some());
        assert!(poset
            .find(&Ideal::parse(&ring, "m1_1").unwrap())
            .unwrap()
            .is_some());
    }

    #[test]
    fn matrix_schubert_poset_n3() {
        let poset =
            generate_matrix_schuberts(3, 2, CompatMode::Auto, DEFAULT_COMPAT_BUDGET).unwrap();
        assert_eq!(poset.len(), 6);
        let ring = matrix_ring_fp(2, 3, 3).unwrap();
        let n = 3;
        for pi in all_permutations(n) {
            let fulton = fulton_generators(&pi, &ring).unwrap();
            let idx = poset
                .find(&fulton)
                .unwrap()
                .unwrap_or_else(|| panic!("missing member for {pi}"));
            // codim = length, through the squarefree degeneration
            let degen = MonomialIdeal::try_from_ideal(&poset.members()[idx].degen).unwrap();
            assert!(degen.is_squarefree());
            let (dim, _) = degen.dim_degree().unwrap();
            assert_eq!(n * n - dim, pi.length(), "codim of {pi}");
        }
    }
}
