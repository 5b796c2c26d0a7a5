//! Monomial orders built from weight vectors.
//!
//! A [`WeightOrder`] is an ordered list of integer weight tiers (earlier
//! tiers dominate, realizing epsilon-refinements exactly) plus an optional
//! final lex tiebreak given as a priority permutation of the variables.
//! Rational tiers are admitted at construction and cleared to integers,
//! which does not change the induced order.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyring::{Coeff, Monomial, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightOrder {
    arity: usize,
    tiers: Vec<Vec<i128>>,
    lex: Option<Vec<usize>>,
}

impl WeightOrder {
    pub fn new(arity: usize, tiers: Vec<Vec<i128>>, lex: Option<Vec<usize>>) -> Result<Self> {
        for t in &tiers {
            if t.len() != arity {
                return Err(Error::ArityMismatch(t.len(), arity));
            }
        }
        if let Some(perm) = &lex {
            let mut seen = vec![false; arity];
            if perm.len() != arity {
                return Err(Error::ArityMismatch(perm.len(), arity));
            }
            for &i in perm {
                if i >= arity || seen[i] {
                    return Err(Error::Parse("lex tiebreak is not a permutation".into()));
                }
                seen[i] = true;
            }
        }
        Ok(WeightOrder { arity, tiers, lex })
    }

    /// Clear denominators tier by tier; scaling a tier by a positive
    /// integer leaves the order unchanged.
    pub fn from_rational_tiers(
        arity: usize,
        tiers: Vec<Vec<BigRational>>,
        lex: Option<Vec<usize>>,
    ) -> Result<Self> {
        let mut int_tiers = Vec::with_capacity(tiers.len());
        for t in tiers {
            if t.len() != arity {
                return Err(Error::ArityMismatch(t.len(), arity));
            }
            let mut denom = BigInt::one();
            for w in &t {
                denom = denom.lcm(w.denom());
            }
            let row = t
                .iter()
                .map(|w| {
                    let v = w.numer() * (&denom / w.denom());
                    i128::try_from(&v).map_err(|_| Error::Parse("weight too large".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            int_tiers.push(row);
        }
        WeightOrder::new(arity, int_tiers, lex)
    }

    /// Single weight tier, no tiebreak.
    pub fn weight(lambda: &[i128]) -> Self {
        WeightOrder {
            arity: lambda.len(),
            tiers: vec![lambda.to_vec()],
            lex: None,
        }
    }

    /// Pure lex with priority x1 > x2 > ... (or a given priority list).
    pub fn lex(arity: usize) -> Self {
        WeightOrder {
            arity,
            tiers: Vec::new(),
            lex: Some((0..arity).collect()),
        }
    }

    pub fn lex_perm(perm: Vec<usize>) -> Self {
        WeightOrder {
            arity: perm.len(),
            tiers: Vec::new(),
            lex: Some(perm),
        }
    }

    /// Total degree, then lex.
    pub fn graded_lex(arity: usize) -> Self {
        WeightOrder {
            arity,
            tiers: vec![vec![1; arity]],
            lex: Some((0..arity).collect()),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tiers(&self) -> &[Vec<i128>] {
        &self.tiers
    }

    pub fn lex_tiebreak(&self) -> Option<&[usize]> {
        self.lex.as_deref()
    }

    pub fn first_tier(&self) -> Option<&[i128]> {
        self.tiers.first().map(|t| t.as_slice())
    }

    /// Append a graded-lex refinement, producing a total order with the
    /// same leading forms.
    pub fn refine_graded_lex(&self) -> WeightOrder {
        if self.lex.is_some() {
            return self.clone();
        }
        let mut tiers = self.tiers.clone();
        tiers.push(vec![1; self.arity]);
        WeightOrder {
            arity: self.arity,
            tiers,
            lex: Some((0..self.arity).collect()),
        }
    }

    /// Total iff a lex tiebreak is present or the tier matrix has full
    /// column rank (then weights already separate all monomials).
    pub fn is_total(&self) -> bool {
        if self.lex.is_some() {
            return true;
        }
        rational_rank(&self.tiers) == self.arity
    }

    /// Global iff 1 is the unique smallest monomial, which makes division
    /// terminate. Checked on the variables.
    pub fn is_global(&self) -> bool {
        let one = Monomial::one(self.arity);
        (0..self.arity).all(|i| {
            let mut e = vec![0u16; self.arity];
            e[i] = 1;
            self.compare(&Monomial::new(e), &one) == Ordering::Greater
        })
    }

    fn tier_weight(tier: &[i128], m: &Monomial) -> i128 {
        tier.iter()
            .zip(m.exps())
            .map(|(w, &e)| w * e as i128)
            .sum()
    }

    pub fn weight_of(&self, m: &Monomial) -> Vec<i128> {
        self.tiers.iter().map(|t| Self::tier_weight(t, m)).collect()
    }

    /// Tierwise weight comparison, then the lex tiebreak. `Equal` is
    /// possible only without a tiebreak (or for identical monomials).
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.arity(), self.arity);
        debug_assert_eq!(b.arity(), self.arity);
        for tier in &self.tiers {
            match Self::tier_weight(tier, a).cmp(&Self::tier_weight(tier, b)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        if let Some(perm) = &self.lex {
            for &i in perm {
                match a.exp(i).cmp(&b.exp(i)) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
            }
        }
        Ordering::Equal
    }

    /// Checked comparison for the public surface.
    pub fn compare_checked(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.arity() != self.arity {
            return Err(Error::ArityMismatch(a.arity(), self.arity));
        }
        if b.arity() != self.arity {
            return Err(Error::ArityMismatch(b.arity(), self.arity));
        }
        Ok(self.compare(a, b))
    }

    /// The order-maximal monomial of `f`; requires a total order.
    pub fn leading_monomial(&self, f: &Poly) -> Result<Monomial> {
        if !self.is_total() {
            return Err(Error::OrderNotTotal);
        }
        let mut best: Option<&Monomial> = None;
        for (m, _) in f.terms() {
            match best {
                None => best = Some(m),
                Some(b) => {
                    if self.compare(m, b) == Ordering::Greater {
                        best = Some(m);
                    }
                }
            }
        }
        best.cloned().ok_or(Error::ZeroPolynomial("leading term"))
    }

    pub fn leading_term(&self, f: &Poly) -> Result<Poly> {
        let m = self.leading_monomial(f)?;
        let c = f.coeff_of(&m)?;
        Ok(Poly::from_terms(f.ring().clone(), vec![(m, c)]))
    }

    pub fn leading_coeff(&self, f: &Poly) -> Result<Coeff> {
        let m = self.leading_monomial(f)?;
        f.coeff_of(&m)
    }
}

/// Sum of all maximum-weight terms of `f` under the single weight `lambda`.
pub fn initial_form(lambda: &[i128], f: &Poly) -> Result<Poly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("initial form"));
    }
    if lambda.len() != f.ring().arity() {
        return Err(Error::ArityMismatch(lambda.len(), f.ring().arity()));
    }
    let weights: Vec<i128> = f
        .terms()
        .iter()
        .map(|(m, _)| WeightOrder::tier_weight(lambda, m))
        .collect();
    let max = *weights.iter().max().unwrap();
    let terms = f
        .terms()
        .iter()
        .zip(&weights)
        .filter(|(_, w)| **w == max)
        .map(|((m, c), _)| (m.clone(), c.clone()))
        .collect();
    Ok(Poly::from_terms(f.ring().clone(), terms))
}

/// Leading form under a tiered order (all tiers, no tiebreak): the terms
/// surviving tier after tier.
pub fn initial_form_tiers(order: &WeightOrder, f: &Poly) -> Result<Poly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("initial form"));
    }
    let mut g = f.clone();
    for tier in order.tiers() {
        g = initial_form(tier, &g)?;
    }
    Ok(g)
}

/// A weight order on the `rows x cols` matrix variables `m_ij` (flattened
/// row-major) whose leading term on every submatrix determinant is the
/// antidiagonal product. The weight `(i+j)*M - i*j` works: on a fixed
/// submatrix the `(i+j)` part is constant across the determinant's terms,
/// and the rearrangement inequality makes the antidiagonal the unique
/// minimizer of `sum i*j`.
pub fn antidiagonal_weight(rows: usize, cols: usize) -> WeightOrder {
    let big = (rows as i128 + 1) * (cols as i128 + 1);
    let mut w = Vec::with_capacity(rows * cols);
    for i in 1..=rows as i128 {
        for j in 1..=cols as i128 {
            w.push((i + j) * big - i * j);
        }
    }
    WeightOrder {
        arity: rows * cols,
        tiers: vec![w],
        lex: Some((0..rows * cols).collect()),
    }
}

/// Exact rank of an integer matrix (fraction-free elimination).
fn rational_rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from(BigInt::from(x))).collect())
        .collect();
    if m.is_empty() {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let pv = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = &m[r][col] / &pv;
                for c in col..ncols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - delta;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// Newton-polytope membership of the all-ones point, by exact rational
// feasibility. Small inputs go through a barycentric subset search
// (Caratheodory); larger ones through Fourier-Motzkin elimination on the
// separating-hyperplane system.
// ---------------------------------------------------------------------------

const BARYCENTRIC_TERM_LIMIT: usize = 12;

/// True iff `(1,...,1)` lies in the convex hull of `f`'s exponent vectors.
pub fn newton_contains_all_ones(f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("Newton polytope"));
    }
    let n = f.ring().arity();
    let pts: Vec<Vec<BigRational>> = f
        .terms()
        .iter()
        .map(|(m, _)| {
            m.exps()
                .iter()
                .map(|&e| BigRational::from(BigInt::from(e)))
                .collect()
        })
        .collect();
    let target: Vec<BigRational> = vec![BigRational::one(); n];
    if pts.len() <= BARYCENTRIC_TERM_LIMIT {
        Ok(hull_contains_barycentric(&pts, &target))
    } else {
        Ok(hull_contains_fourier_motzkin(&pts, &target))
    }
}

/// Caratheodory: the target is in the hull iff it is a convex combination
/// of some affinely independent subset of at most n+1 points.
fn hull_contains_barycentric(pts: &[Vec<BigRational>], target: &[BigRational]) -> bool {
    let n = target.len();
    let k = pts.len();
    let max_size = (n + 1).min(k);
    let mut subset: Vec<usize> = Vec::new();
    fn rec(
        pts: &[Vec<BigRational>],
        target: &[BigRational],
        subset: &mut Vec<usize>,
        start: usize,
        max_size: usize,
    ) -> bool {
        if !subset.is_empty() && convex_combination_exists(pts, subset, target) {
            return true;
        }
        if subset.len() == max_size {
            return false;
        }
        for i in start..pts.len() {
            subset.push(i);
            if rec(pts, target, subset, i + 1, max_size) {
                return true;
            }
            subset.pop();
        }
        false
    }
    rec(pts, target, &mut subset, 0, max_size)
}

/// Solve `sum t_i p_i = target, sum t_i = 1` on the subset; accept only
/// a unique solution with all `t_i >= 0`. Underdetermined subsets are
/// skipped; smaller subsets cover them.
fn convex_combination_exists(
    pts: &[Vec<BigRational>],
    subset: &[usize],
    target: &[BigRational],
) -> bool {
    let n = target.len();
    let k = subset.len();
    // rows: n coordinate equations + 1 affine equation; columns: k + rhs
    let mut m: Vec<Vec<BigRational>> = Vec::with_capacity(n + 1);
    for row in 0..n {
        let mut r: Vec<BigRational> = subset.iter().map(|&j| pts[j][row].clone()).collect();
        r.push(target[row].clone());
        m.push(r);
    }
    m.push(vec![BigRational::one(); k + 1]);

    // Gaussian elimination with pivot tracking.
    let rows = m.len();
    let mut pivot_col_of_row = vec![usize::MAX; rows];
    let mut rank = 0;
    for col in 0..k {
        let Some(pr) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let pv = m[rank][col].clone();
        for c in col..=k {
            m[rank][c] = &m[rank][c] / &pv;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=k {
                    let delta = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - delta;
                }
            }
        }
        pivot_col_of_row[rank] = col;
        rank += 1;
    }
    // inconsistent?
    for r in rank..rows {
        if !m[r][k].is_zero() {
            return false;
        }
    }
    if rank < k {
        return false; // underdetermined; a smaller subset will witness it
    }
    // unique solution: read off and check nonnegativity
    let mut t = vec![BigRational::zero(); k];
    for r in 0..rank {
        let col = pivot_col_of_row[r];
        t[col] = m[r][k].clone();
    }
    t.iter().all(|v| !v.is_negative())
}

#[derive(Clone, Debug)]
struct Inequality {
    // coeffs . vars <= 0 (strict = false) or < 0 (strict = true)
    coeffs: Vec<BigRational>,
    strict: bool,
}

impl Inequality {
    fn normalize(&mut self) {
        if let Some(first) = self.coeffs.iter().find(|c| !c.is_zero()) {
            let scale = first.abs();
            for c in &mut self.coeffs {
                *c = &*c / &scale;
            }
        }
    }
}

/// Membership via the separating hyperplane dual: `target` is OUTSIDE the
/// hull iff there exist `(a, b)` with `a . p_i - b <= 0` for all points
/// and `a . target - b > 0`. Feasibility of that homogeneous system is
/// decided by eliminating all n+1 variables.
fn hull_contains_fourier_motzkin(pts: &[Vec<BigRational>], target: &[BigRational]) -> bool {
    let n = target.len();
    let nvars = n + 1; // a_1..a_n, b
    let mut system: Vec<Inequality> = Vec::new();
    for p in pts {
        let mut coeffs: Vec<BigRational> = p.clone();
        coeffs.push(-BigRational::one());
        system.push(Inequality {
            coeffs,
            strict: false,
        });
    }
    // -(a.target - b) < 0
    let mut coeffs: Vec<BigRational> = target.iter().map(|c| -c.clone()).collect();
    coeffs.push(BigRational::one());
    system.push(Inequality {
        coeffs,
        strict: true,
    });

    for var in 0..nvars {
        let mut lower = Vec::new(); // coefficient < 0
        let mut upper = Vec::new(); // coefficient > 0
        let mut rest = Vec::new();
        for ineq in system {
            match ineq.coeffs[var].cmp(&BigRational::zero()) {
                Ordering::Less => lower.push(ineq),
                Ordering::Greater => upper.push(ineq),
                Ordering::Equal => rest.push(ineq),
            }
        }
        for lo in &lower {
            for hi in &upper {
                // combine: hi - scaled lo eliminates var
                let scale = &hi.coeffs[var] / &lo.coeffs[var]; // negative
                let mut coeffs = Vec::with_capacity(nvars);
                for i in 0..nvars {
                    coeffs.push(&hi.coeffs[i] - &scale * &lo.coeffs[i]);
                }
                let mut ineq = Inequality {
                    coeffs,
                    strict: lo.strict || hi.strict,
                };
                ineq.normalize();
                rest.push(ineq);
            }
        }
        // dedupe identical rows, keeping the strict flag if any copy is strict
        rest.sort_by(|a, b| {
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x.cmp(y))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        });
        let mut deduped: Vec<Inequality> = Vec::with_capacity(rest.len());
        for ineq in rest {
            if let Some(last) = deduped.last_mut() {
                if last.coeffs == ineq.coeffs {
                    last.strict = last.strict || ineq.strict;
                    continue;
                }
            }
            deduped.push(ineq);
        }
        system = deduped;
    }
    // all variables eliminated: rows are constants (all zero coefficient
    // vectors); `0 < 0` marks infeasibility of the separating system
    let separating_feasible = system.iter().all(|ineq| !ineq.strict);
    !separating_feasible
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Ring;

    #[test]
    fn weight_comparison_examples() {
        let o = WeightOrder::weight(&[3, 1, 0]);
        let m1 = Monomial::new(vec![1, 1, 1]); // weight 4
        let m2 = Monomial::new(vec![0, 3, 0]); // weight 3
        assert_eq!(o.compare(&m1, &m2), Ordering::Greater);
        assert_eq!(o.compare(&m1, &m1), Ordering::Equal);

        let lex = WeightOrder::lex(2);
        let a = Monomial::new(vec![0, 5]);
        let b = Monomial::new(vec![1, 0]);
        assert_eq!(lex.compare(&a, &b), Ordering::Less);
    }

    #[test]
    fn initial_form_examples() {
        let r = Ring::fp(2, 3).unwrap();
        let f = r.parse("x1*x2*x3 + x2^3 + x3^3").unwrap();
        assert_eq!(
            initial_form(&[3, 1, 0], &f).unwrap(),
            r.parse("x1*x2*x3").unwrap()
        );

        let r2 = Ring::fp(5, 2).unwrap();
        let g = r2.parse("x1*x2 + x1^2").unwrap();
        assert_eq!(initial_form(&[1, 1], &g).unwrap(), g);

        // weight on the third variable only; sign carried
        let r3 = Ring::fp(5, 3).unwrap();
        let h = r3.parse("x1 - x3*x2").unwrap();
        assert_eq!(
            initial_form(&[0, 0, 1], &h).unwrap(),
            r3.parse("-x3*x2").unwrap()
        );
        assert!(initial_form(&[1, 1, 1], &r3.zero()).is_err());
    }

    #[test]
    fn leading_term_examples() {
        // lex c1>c2>c3>c4 on c1*(c2c4 - c3)*c3
        let c = Ring::with_scheme(
            crate::polyring::Domain::Fp(7),
            4,
            crate::polyring::VarScheme::C,
        )
        .unwrap();
        let f = c
            .parse("c1")
            .unwrap()
            .mul(&c.parse("c2*c4 - c3").unwrap())
            .mul(&c.parse("c3").unwrap());
        let lex = WeightOrder::lex(4);
        assert_eq!(
            lex.leading_term(&f).unwrap(),
            c.parse("c1*c2*c3*c4").unwrap()
        );

        let single = c.parse("3*c2^2").unwrap();
        assert_eq!(lex.leading_term(&single).unwrap(), single);
    }

    #[test]
    fn antidiagonal_orders() {
        let m2 = Ring::with_scheme(
            crate::polyring::Domain::Fp(7),
            4,
            crate::polyring::VarScheme::Matrix { rows: 2, cols: 2 },
        )
        .unwrap();
        let det = m2.parse("m1_1*m2_2 - m1_2*m2_1").unwrap();
        let o = antidiagonal_weight(2, 2);
        assert_eq!(
            o.leading_term(&det).unwrap(),
            m2.parse("-m1_2*m2_1").unwrap()
        );

        let m1 = m2.parse("m1_1").unwrap();
        assert_eq!(o.leading_term(&m1).unwrap(), m1);

        // full 3x3 determinant: the antidiagonal term leads
        let m3 = Ring::with_scheme(
            crate::polyring::Domain::Fp(7),
            9,
            crate::polyring::VarScheme::Matrix { rows: 3, cols: 3 },
        )
        .unwrap();
        let det3 = m3
            .parse(concat!(
                "m1_1*m2_2*m3_3 - m1_1*m2_3*m3_2 - m1_2*m2_1*m3_3",
                " + m1_2*m2_3*m3_1 + m1_3*m2_1*m3_2 - m1_3*m2_2*m3_1"
            ))
            .unwrap();
        let o3 = antidiagonal_weight(3, 3);
        let lt = o3.leading_term(&det3).unwrap();
        assert_eq!(lt, m3.parse("-m1_3*m2_2*m3_1").unwrap());
    }

    #[test]
    fn newton_membership_small() {
        let r = Ring::fp(2, 2).unwrap();
        assert!(newton_contains_all_ones(&r.parse("x1*x2 + x1^2").unwrap()).unwrap());
        assert!(!newton_contains_all_ones(&r.parse("x1^2").unwrap()).unwrap());
        // midpoint of (2,0) and (0,2)
        assert!(newton_contains_all_ones(&r.parse("x1^2 + x2^2").unwrap()).unwrap());
    }

    #[test]
    fn newton_membership_large_goes_through_fm() {
        // > 12 terms forces the Fourier-Motzkin path
        let r = Ring::fp(17, 3).unwrap();
        let mut s = String::from("x1^2 + x2^2 + x3^2");
        for a in 0..4 {
            for b in 0..3 {
                s.push_str(&format!(" + x1^{}*x2^{}*x3^3", a + 2, b + 2));
            }
        }
        let f = r.parse(&s).unwrap();
        assert!(f.num_terms() > BARYCENTRIC_TERM_LIMIT);
        // (1,1,1) is the centroid of (2,0,0),(0,2,0),(0,0,2) hull members? No:
        // it is ((2,0,0)+(0,2,0)+(0,0,2))/3 = (2/3,2/3,2/3). Check the honest way:
        // (1,1,1) = 1/2 (2,0,0) + 1/4 (0,2,0) + ... build an f where it IS inside.
        let g = r
            .parse(&format!("{s} + x2*x3^2 + x1^3*x2"))
            .unwrap();
        // cross-validate FM against barycentric on both
        assert_eq!(
            hull_contains_fourier_motzkin(&exps(&f), &ones(3)),
            hull_contains_barycentric(&exps(&f), &ones(3))
        );
        assert_eq!(
            hull_contains_fourier_motzkin(&exps(&g), &ones(3)),
            hull_contains_barycentric(&exps(&g), &ones(3))
        );
    }

    fn exps(f: &Poly) -> Vec<Vec<BigRational>> {
        f.terms()
            .iter()
            .map(|(m, _)| {
                m.exps()
                    .iter()
                    .map(|&e| BigRational::from(BigInt::from(e)))
                    .collect()
            })
            .collect()
    }

    fn ones(n: usize) -> Vec<BigRational> {
        vec![BigRational::one(); n]
    }

    #[test]
    fn totality_detection() {
        let o = WeightOrder::weight(&[1, 1]);
        assert!(!o.is_total());
        assert!(o.refine_graded_lex().is_total());
        let full_rank = WeightOrder::new(2, vec![vec![1, 0], vec![0, 1]], None).unwrap();
        assert!(full_rank.is_total());
        assert!(WeightOrder::lex(3).is_total());
        assert!(WeightOrder::lex(3).is_global());
        let neg = WeightOrder::new(1, vec![vec![-1]], Some(vec![0])).unwrap();
        assert!(!neg.is_global());
    }
}
