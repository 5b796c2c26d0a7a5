//! Type-A Kazhdan-Lusztig varieties in Bott-Samelson coordinates.
//!
//! A reduced word `Q` for `v` in `S_n` gives the matrix
//! `B(c_1..c_N) = prod_i e_{a_i}(c_i) r_{a_i}` with the 2x2 blocks
//! `e_a(c) = [[1, c], [0, 1]]` and `r = [[0, -1], [1, 0]]` at rows and
//! columns `(a, a+1)`. The upper-left minors of `B` are the generalized
//! minors; their product is the splitting polynomial, whose lex-initial
//! term is the product of all the `c_i`. Ideals of the varieties are
//! pulled back from the rank conditions on `B`.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::groebner::{Ideal, MonomialIdeal};
use crate::monorder::WeightOrder;
use crate::polyring::{pow_mod, Domain, Monomial, Poly, Ring, VarScheme};
use crate::schubert::{all_permutations, bruhat_leq, minimal_upper_bounds, Permutation};
use crate::splitposet::{ComponentHook, Components, Provenance};

/// Left fold `w <- w*s` when that gets longer, else `w`.
pub fn demazure_product(word: &[usize], n: usize) -> Result<Permutation> {
    let mut w = Permutation::identity(n);
    for &i in word {
        if i == 0 || i >= n {
            return Err(Error::Parse(format!(
                "reflection index {i} out of range for S_{n}"
            )));
        }
        let ws = w.right_mul_s(i);
        if ws.length() > w.length() {
            w = ws;
        }
    }
    Ok(w)
}

/// A reduced word in `S_n`; validated by the Demazure length count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedWord {
    entries: Vec<usize>,
    n: usize,
    target: Permutation,
}

impl ReducedWord {
    pub fn new(entries: Vec<usize>, n: usize) -> Result<ReducedWord> {
        let target = demazure_product(&entries, n)?;
        if target.length() != entries.len() {
            return Err(Error::Hypothesis(format!(
                "word {entries:?} is not reduced (Demazure product has length {})",
                target.length()
            )));
        }
        Ok(ReducedWord { entries, n, target })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn target(&self) -> &Permutation {
        &self.target
    }

    /// The integer coefficient ring `Z[c_1..c_N]`.
    pub fn coord_ring_int(&self) -> Ring {
        Ring::with_scheme(Domain::Int, self.entries.len(), VarScheme::C).unwrap()
    }

    pub fn coord_ring_fp(&self, p: u64) -> Result<Ring> {
        Ring::with_scheme(Domain::Fp(p), self.entries.len(), VarScheme::C)
    }
}

/// All reduced words for `v`, by peeling descents.
pub fn reduced_words(v: &Permutation) -> Vec<Vec<usize>> {
    if v.length() == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in v.descents() {
        // v has a descent at i, so v*s_i is shorter; words of v end in i
        let shorter = v.right_mul_s(i);
        for mut w in reduced_words(&shorter) {
            w.push(i);
            out.push(w);
        }
    }
    out
}

/// The matrix of the word: product of the `e(c) * r` block factors, with
/// integer polynomial entries.
pub fn bott_samelson_matrix(q: &ReducedWord) -> Vec<Vec<Poly>> {
    let ring = q.coord_ring_int();
    let n = q.rank();
    let mut m = identity_matrix(&ring, n);
    for (pos, &alpha) in q.entries().iter().enumerate() {
        let mut factor = identity_matrix(&ring, n);
        // block [[c, -1], [1, 0]] at rows/cols (alpha, alpha+1), 1-based
        let a = alpha - 1;
        factor[a][a] = ring.var(pos);
        factor[a][a + 1] = ring.constant_i64(-1);
        factor[a + 1][a] = ring.one();
        factor[a + 1][a + 1] = ring.zero();
        m = mat_mul(&ring, &m, &factor);
    }
    m
}

fn identity_matrix(ring: &Ring, n: usize) -> Vec<Vec<Poly>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { ring.one() } else { ring.zero() })
                .collect()
        })
        .collect()
}

fn mat_mul(ring: &Ring, a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = ring.zero();
                    for k in 0..n {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&a[i][k].mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `m_{omega_i}`: the determinant of the upper-left `i x i` submatrix.
pub fn generalized_minor(i: usize, m: &[Vec<Poly>]) -> Result<Poly> {
    if i == 0 || i >= m.len() {
        return Err(Error::ArityMismatch(i, m.len()));
    }
    let ring = m[0][0].ring().clone();
    let sub: Vec<Vec<Poly>> = (0..i).map(|r| m[r][..i].to_vec()).collect();
    Ok(crate::schubert::det_poly(&ring, &sub))
}

/// The splitting polynomial `f = prod_omega m_omega(B)`, of degree
/// `len(Q)`; its lex-initial term must be `±prod c_i` (hard error
/// otherwise, the theorem guarantees it).
pub fn kl_splitting_poly(q: &ReducedWord) -> Result<Poly> {
    let m = bott_samelson_matrix(q);
    let ring = q.coord_ring_int();
    let mut f = ring.one();
    for i in 1..q.rank() {
        f = f.mul(&generalized_minor(i, &m)?);
    }
    if f.degree() != Some(q.len() as u64) {
        return Err(Error::Invariant(format!(
            "splitting polynomial has degree {:?}, expected {}",
            f.degree(),
            q.len()
        )));
    }
    let lex = WeightOrder::lex(q.len());
    let lead = lex.leading_monomial(&f)?;
    let coeff = f.coeff_of(&lead)?.to_bigint();
    let all_ones = Monomial::new(vec![1; q.len()]);
    if lead != all_ones || (coeff.magnitude() != &1u32.into()) {
        return Err(Error::Invariant(format!(
            "lex-initial term of the splitting polynomial is not ±prod c_i: {f}"
        )));
    }
    Ok(f)
}

/// Ideal of the variety attached to `w <= v` in the coordinates of `Q`:
/// Fulton's rank conditions on the word matrix, reduced mod `p`. The
/// matrix of the empty word is the permutation matrix with ones at
/// `(v(k), k)`, so the rank conditions are indexed by `w^{-1}` in the
/// row convention used by `fulton_generators` (containment order on
/// these varieties is opposite Bruhat order).
pub fn kl_ideal(q: &ReducedWord, w: &Permutation, p: u64) -> Result<Ideal> {
    let v = q.target();
    if w.n() != q.rank() {
        return Err(Error::ArityMismatch(w.n(), q.rank()));
    }
    if !bruhat_leq(w, v)? {
        return Err(Error::Hypothesis(format!(
            "{w} is not below {v} in Bruhat order"
        )));
    }
    let n = q.rank();
    let mring = crate::schubert::matrix_ring_int(n, n);
    let fulton = crate::schubert::fulton_generators(&w.inverse(), &mring)?;
    let m = bott_samelson_matrix(q);
    let images: Vec<Poly> = (0..n)
        .flat_map(|i| m[i].iter().cloned())
        .collect();
    let cring = q.coord_ring_fp(p)?;
    let gens = fulton
        .generators()
        .iter()
        .map(|g| {
            let pulled = g.substitute(&images)?;
            pulled.reduce_mod_p(p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(cring, gens)
}

/// Stanley-Reisner ideal of the subword complex: faces are the position
/// sets whose complements Demazure-multiply to something at least `w`.
pub fn subword_complex(q: &ReducedWord, w: &Permutation, ring: &Ring) -> Result<MonomialIdeal> {
    let n = q.rank();
    let len = q.len();
    if ring.arity() != len {
        return Err(Error::ArityMismatch(ring.arity(), len));
    }
    if !bruhat_leq(w, q.target())? {
        return Err(Error::Hypothesis(format!(
            "{w} is not below the Demazure product of the word"
        )));
    }
    let is_face = |mask: u32| -> Result<bool> {
        let sub: Vec<usize> = (0..len)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| q.entries()[i])
            .collect();
        let dem = demazure_product(&sub, n)?;
        bruhat_leq(w, &dem)
    };
    let mut nonfaces: Vec<u32> = Vec::new();
    for mask in 0u32..(1 << len) {
        if !is_face(mask)? {
            nonfaces.push(mask);
        }
    }
    // minimal non-faces
    let minimal: Vec<u32> = nonfaces
        .iter()
        .copied()
        .filter(|&m| !nonfaces.iter().any(|&o| o != m && o & m == o))
        .collect();
    let gens = minimal
        .into_iter()
        .map(|mask| {
            let exps: Vec<u16> = (0..len)
                .map(|i| if mask & (1 << i) != 0 { 1 } else { 0 })
                .collect();
            Monomial::new(exps)
        })
        .collect();
    Ok(MonomialIdeal::new(ring.clone(), gens))
}

/// The square word `(r_n .. r_1)(r_{n+1} .. r_2) ... (r_{2n-1} .. r_n)`
/// in `S_{2n}`, whose word matrix has the block form
/// `[[C*D, (-1)^n I], [I, 0]]`.
pub fn square_word(n: usize) -> Result<ReducedWord> {
    let mut entries = Vec::with_capacity(n * n);
    for b in 1..=n {
        for t in 0..n {
            entries.push(n + b - 1 - t);
        }
    }
    ReducedWord::new(entries, 2 * n)
}

/// The expected block matrix for the square word: variable `c_{i,j}` of
/// the display is flat variable `(j-1)*n + (n-i)`, `D` alternates signs
/// down the diagonal.
pub fn square_word_block_matrix(n: usize) -> Vec<Vec<Poly>> {
    let ring = Ring::with_scheme(Domain::Int, n * n, VarScheme::C).unwrap();
    let two_n = 2 * n;
    let mut m = vec![vec![ring.zero(); two_n]; two_n];
    for i in 1..=n {
        for j in 1..=n {
            // C[i][j] * D[j][j]
            let var = ring.var((j - 1) * n + (n - i));
            let signed = if (j - 1) % 2 == 0 { var } else { var.neg() };
            m[i - 1][j - 1] = signed;
        }
    }
    let corner = if n % 2 == 0 { 1 } else { -1 };
    for i in 1..=n {
        m[i - 1][n + i - 1] = ring.constant_i64(corner);
        m[n + i - 1][i - 1] = ring.one();
    }
    m
}

// ---------------------------------------------------------------------------
// Numeric checks of the minor identities
// ---------------------------------------------------------------------------

fn mat_mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(0u64, |acc, k| (acc + a[i][k] * b[k][j]) % p))
                .collect()
        })
        .collect()
}

fn upper_left_det_mod(m: &[Vec<u64>], size: usize, p: u64) -> u64 {
    // Gaussian elimination over F_p
    let mut a: Vec<Vec<u64>> = (0..size).map(|i| m[i][..size].to_vec()).collect();
    let mut det = 1u64;
    for col in 0..size {
        let Some(pivot) = (col..size).find(|&r| a[r][col] % p != 0) else {
            return 0;
        };
        if pivot != col {
            a.swap(pivot, col);
            det = (p - det) % p;
        }
        let inv = pow_mod(a[col][col], p - 2, p);
        det = det * a[col][col] % p;
        for r in (col + 1)..size {
            let factor = a[r][col] * inv % p;
            for c in col..size {
                a[r][c] = (a[r][c] + p * p - factor * a[col][c] % p) % p;
            }
        }
    }
    det
}

#[derive(Debug, Clone)]
pub struct MomegaReport {
    pub trials: u64,
    pub orthogonal_failures: u64,
    pub pairing_failures: u64,
}

/// Check, on random matrices over `F_p`, that left multiplication by
/// `e_{a_j}(c) r_{a_j}` fixes the minor `m_{omega_i}` when `i != j` and
/// acts affine-linearly (`c*m(g) + m(r g)`) when `i == j`.
pub fn momega_identity_check(n: usize, p: u64, trials: u64, seed: u64) -> Result<MomegaReport> {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(seed);
    let mut orthogonal_failures = 0;
    let mut pairing_failures = 0;
    for _ in 0..trials {
        let g: Vec<Vec<u64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(0..p)).collect())
            .collect();
        let c = rng.random_range(0..p);
        for j in 1..n {
            // e(c) * r at block (j, j+1)
            let mut factor = vec![vec![0u64; n]; n];
            for d in 0..n {
                factor[d][d] = 1;
            }
            factor[j - 1][j - 1] = c;
            factor[j - 1][j] = p - 1;
            factor[j][j - 1] = 1;
            factor[j][j] = 0;
            let mut reflect = vec![vec![0u64; n]; n];
            for d in 0..n {
                reflect[d][d] = 1;
            }
            reflect[j - 1][j - 1] = 0;
            reflect[j - 1][j] = p - 1;
            reflect[j][j - 1] = 1;
            reflect[j][j] = 0;
            let eg = mat_mul_mod(&factor, &g, p);
            let rg = mat_mul_mod(&reflect, &g, p);
            for i in 1..n {
                let lhs = upper_left_det_mod(&eg, i, p);
                if i != j {
                    if lhs != upper_left_det_mod(&g, i, p) {
                        orthogonal_failures += 1;
                    }
                } else {
                    let rhs =
                        (c * upper_left_det_mod(&g, i, p) + upper_left_det_mod(&rg, i, p)) % p;
                    if lhs != rhs {
                        pairing_failures += 1;
                    }
                }
            }
        }
    }
    Ok(MomegaReport {
        trials,
        orthogonal_failures,
        pairing_failures,
    })
}

// ---------------------------------------------------------------------------
// Catalog hook for closures among the varieties of one word
// ---------------------------------------------------------------------------

/// Decomposes sums of the word's variety ideals through Bruhat
/// combinatorics restricted below the target: the components of the
/// intersection for `(w1, w2)` are indexed by the minimal upper bounds
/// that stay below `v`. Verified against the Groebner engine.
pub struct KlCatalog {
    n: usize,
    ideals: HashMap<Permutation, Ideal>,
}

impl KlCatalog {
    pub fn new(q: &ReducedWord, p: u64) -> Result<KlCatalog> {
        let v = q.target();
        let mut ideals = HashMap::new();
        for w in all_permutations(q.rank()) {
            if bruhat_leq(&w, v)? {
                ideals.insert(w.clone(), kl_ideal(q, &w, p)?);
            }
        }
        Ok(KlCatalog {
            n: q.rank(),
            ideals,
        })
    }

    pub fn ideal(&self, w: &Permutation) -> Option<&Ideal> {
        self.ideals.get(w)
    }

    pub fn members(&self) -> impl Iterator<Item = (&Permutation, &Ideal)> {
        self.ideals.iter().sorted_by_key(|(w, _)| (*w).clone())
    }
}

impl ComponentHook for KlCatalog {
    fn decompose(
        &self,
        ideal: &Ideal,
        prov: &Provenance<'_>,
    ) -> Result<Option<Components>> {
        match prov {
            Provenance::Seed { tag: Some(tag) } => {
                let w = Permutation::parse_compact(tag, self.n)?;
                let known = self
                    .ideals
                    .get(&w)
                    .ok_or_else(|| Error::Invariant(format!("{w} outside the interval")))?;
                if known != ideal {
                    return Err(Error::Invariant(format!(
                        "seed tagged {w} does not match its rank conditions"
                    )));
                }
                Ok(Some(vec![(ideal.clone(), Some(tag.to_string()))]))
            }
            Provenance::Sum {
                a_tag: Some(a),
                b_tag: Some(b),
            } => {
                let wa = Permutation::parse_compact(a, self.n)?;
                let wb = Permutation::parse_compact(b, self.n)?;
                let sigmas: Vec<Permutation> = minimal_upper_bounds(&wa, &wb)?
                    .into_iter()
                    .filter(|s| self.ideals.contains_key(s))
                    .collect();
                if sigmas.is_empty() {
                    return Err(Error::Invariant(format!(
                        "no upper bound of {wa}, {wb} below the cell target"
                    )));
                }
                let comps: Components = sigmas
                    .iter()
                    .map(|s| (self.ideals[s].clone(), Some(s.to_string_compact())))
                    .collect();
                let mut meet: Option<Ideal> = None;
                for (c, _) in &comps {
                    meet = Some(match meet {
                        None => c.clone(),
                        Some(m) => m.intersect(c)?,
                    });
                }
                if meet.as_ref() != Some(ideal) {
                    return Err(Error::Invariant(format!(
                        "catalog decomposition for {wa}, {wb} disagrees with the ideal"
                    )));
                }
                Ok(Some(comps))
            }
            _ => Ok(None),
        }
    }
}
