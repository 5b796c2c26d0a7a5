//! Posets of compatibly split ideals: the closure algorithm (components,
//! sums, intersections, iterated), the degeneration map to coordinate
//! subspaces, degree bookkeeping, basic poset elements, and the
//! Groebner-basis concatenation check.
//!
//! Component extraction is hook-based. Built-in hooks cover monomial
//! ideals (combinatorial minimal primes) and principal ideals with
//! caller-supplied factorizations; the Schubert/KL modules add catalog
//! hooks. Unresolved composites are registered but not decomposed, and
//! are excluded from the degeneration-map checks.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{Ideal, MonomialIdeal};
use crate::monorder::WeightOrder;
use crate::polyring::{pow_mod, Poly, Ring};
use crate::splitting::{verify_compatibly_split, CompatMode};

// ---------------------------------------------------------------------------
// Finite posets and basic elements
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    pub fn new(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<FinitePoset> {
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::Invariant("order matrix shape".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::Invariant("order not reflexive".into()));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Invariant("order not antisymmetric".into()));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::Invariant("order not transitive".into()));
                    }
                }
            }
        }
        Ok(FinitePoset { labels, leq })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq[i][j]
    }

    pub fn dual(&self) -> FinitePoset {
        let n = self.len();
        let leq = (0..n)
            .map(|i| (0..n).map(|j| self.leq[j][i]).collect())
            .collect();
        FinitePoset {
            labels: self.labels.clone(),
            leq,
        }
    }

    /// Cover relations `(i, j)` with `i < j` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.lt(i, j)
                    && !(0..n).any(|k| self.lt(i, k) && self.lt(k, j))
                {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Elements that are not the unique greatest lower bound of the set of
    /// elements strictly above them; maximal elements (empty up-set) are
    /// basic by convention.
    pub fn basic_elements(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&p| {
                let above: Vec<usize> = (0..n).filter(|&q| self.lt(p, q)).collect();
                if above.is_empty() {
                    return true;
                }
                let lower: Vec<usize> = (0..n)
                    .filter(|&l| above.iter().all(|&q| self.leq(l, q)))
                    .collect();
                let maximal: Vec<usize> = lower
                    .iter()
                    .copied()
                    .filter(|&l| !lower.iter().any(|&m| self.lt(l, m)))
                    .collect();
                !(maximal.len() == 1 && maximal[0] == p)
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Component hooks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub enum Provenance<'a> {
    Seed { tag: Option<&'a str> },
    Sum {
        a_tag: Option<&'a str>,
        b_tag: Option<&'a str>,
    },
}

/// Components returned by a hook: each ideal with an optional tag.
pub type Components = Vec<(Ideal, Option<String>)>;

/// Supplies irreducible components for ideals it recognizes. Returning
/// `Ok(None)` means "not mine"; the next hook is consulted.
pub trait ComponentHook {
    fn decompose(&self, ideal: &Ideal, prov: &Provenance<'_>) -> Result<Option<Components>>;
}

/// Monomial ideals decompose into coordinate-subspace ideals through
/// minimal vertex covers of the generator supports.
pub struct MonomialComponents;

impl ComponentHook for MonomialComponents {
    fn decompose(&self, ideal: &Ideal, _prov: &Provenance<'_>) -> Result<Option<Components>> {
        if ideal.is_zero_ideal() {
            return Ok(Some(vec![(ideal.clone(), None)]));
        }
        let Ok(monomial) = MonomialIdeal::try_from_ideal(ideal) else {
            return Ok(None);
        };
        let ring = ideal.ring().clone();
        let comps = monomial
            .minimal_primes()
            .into_iter()
            .map(|vars| {
                let gens = vars.iter().map(|&v| ring.var(v)).collect();
                Ok((Ideal::new(ring.clone(), gens)?, None))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(comps))
    }
}

/// Principal ideals with caller-supplied factorizations: maps the
/// canonical key of `<f>` to the list of (claimed irreducible) factors.
pub struct FactorTable {
    table: HashMap<String, Vec<Poly>>,
}

impl FactorTable {
    pub fn new() -> FactorTable {
        FactorTable {
            table: HashMap::new(),
        }
    }

    pub fn insert(&mut self, f: &Poly, factors: Vec<Poly>) -> Result<()> {
        let ideal = Ideal::new(f.ring().clone(), vec![f.clone()])?;
        self.table.insert(ideal.canonical_key()?, factors);
        Ok(())
    }
}

impl Default for FactorTable {
    fn default() -> Self {
        Self::new()
    }
}

impl ComponentHook for FactorTable {
    fn decompose(&self, ideal: &Ideal, _prov: &Provenance<'_>) -> Result<Option<Components>> {
        let key = ideal.canonical_key()?;
        let Some(factors) = self.table.get(&key) else {
            return Ok(None);
        };
        let comps = factors
            .iter()
            .map(|f| Ok((Ideal::new(f.ring().clone(), vec![f.clone()])?, None)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(comps))
    }
}

/// Certifies specific ideals as irreducible.
pub struct KnownIrreducible {
    keys: HashSet<String>,
}

impl KnownIrreducible {
    pub fn new(ideals: &[Ideal]) -> Result<KnownIrreducible> {
        let mut keys = HashSet::new();
        for i in ideals {
            keys.insert(i.canonical_key()?);
        }
        Ok(KnownIrreducible { keys })
    }
}

impl ComponentHook for KnownIrreducible {
    fn decompose(&self, ideal: &Ideal, _prov: &Provenance<'_>) -> Result<Option<Components>> {
        if self.keys.contains(&ideal.canonical_key()?) {
            Ok(Some(vec![(ideal.clone(), None)]))
        } else {
            Ok(None)
        }
    }
}

// ---------------------------------------------------------------------------
// The split poset
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct Member {
    pub ideal: Ideal,
    pub tag: Option<String>,
    pub irreducible: bool,
    /// Lex initial ideal (the degeneration image).
    pub degen: Ideal,
}

#[derive(Debug, Clone)]
pub struct SplitPoset {
    ring: Ring,
    f: Poly,
    members: Vec<Member>,
    /// Variety containment: `leq[i][j]` iff `V_i ⊆ V_j`.
    leq: Vec<Vec<bool>>,
    degen_order: WeightOrder,
}

/// Fixed point of {components, sums} starting from the seeds, every
/// produced ideal re-verified compatibly split under `tr(f^(p-1) . )`.
/// The ambient zero ideal is always registered. Intersections of members
/// decompose back into the members themselves and are closed for free.
/// Degeneration images are taken under pure lex.
pub fn closure_algorithm(
    f: &Poly,
    seeds: Vec<(Ideal, Option<String>)>,
    hooks: &[&dyn ComponentHook],
    mode: CompatMode,
    budget: u64,
) -> Result<SplitPoset> {
    let lex = WeightOrder::lex(f.ring().arity());
    closure_algorithm_with_order(f, seeds, hooks, mode, budget, &lex)
}

/// Closure with an explicit degeneration order (e.g. an antidiagonal
/// order on matrix variables, under which the splitting polynomial has
/// its product-of-all-variables leading term).
pub fn closure_algorithm_with_order(
    f: &Poly,
    seeds: Vec<(Ideal, Option<String>)>,
    hooks: &[&dyn ComponentHook],
    mode: CompatMode,
    budget: u64,
    degen_order: &WeightOrder,
) -> Result<SplitPoset> {
    let ring = f.ring().clone();
    ring.require_fp()?;
    if !degen_order.is_total() {
        return Err(Error::OrderNotTotal);
    }
    let lex = degen_order.clone();

    let mut members: Vec<Member> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();

    let register = |members: &mut Vec<Member>,
                        seen: &mut HashMap<String, usize>,
                        ideal: Ideal,
                        tag: Option<String>,
                        irreducible: bool|
     -> Result<Option<usize>> {
        let key = ideal.canonical_key()?;
        if seen.contains_key(&key) {
            return Ok(None);
        }
        if !verify_compatibly_split(&ideal, f, mode, budget)? {
            return Err(Error::Invariant(format!(
                "produced ideal is not compatibly split: {key}"
            )));
        }
        let degen = ideal.initial_ideal(&lex)?;
        let idx = members.len();
        members.push(Member {
            ideal,
            tag,
            irreducible,
            degen,
        });
        seen.insert(key, idx);
        Ok(Some(idx))
    };

    // ambient space
    register(
        &mut members,
        &mut seen,
        Ideal::zero(ring.clone()),
        None,
        true,
    )?;

    let decompose = |ideal: &Ideal, prov: &Provenance<'_>| -> Result<Option<Components>> {
        for hook in hooks {
            if let Some(comps) = hook.decompose(ideal, prov)? {
                return Ok(Some(comps));
            }
        }
        Ok(None)
    };

    for (seed, tag) in seeds {
        let prov = Provenance::Seed {
            tag: tag.as_deref(),
        };
        match decompose(&seed, &prov)? {
            Some(comps) => {
                for (c, ctag) in comps {
                    register(&mut members, &mut seen, c, ctag.or_else(|| tag.clone()), true)?;
                }
            }
            None => {
                register(&mut members, &mut seen, seed, tag, false)?;
            }
        }
    }

    // fixed point over pairwise sums of irreducible members
    let mut processed: HashSet<(String, String)> = HashSet::new();
    loop {
        let mut added = false;
        let snapshot: Vec<(usize, String)> = members
            .iter()
            .enumerate()
            .filter(|(_, m)| m.irreducible)
            .map(|(i, m)| (i, m.ideal.canonical_key().unwrap()))
            .collect();
        for a in 0..snapshot.len() {
            for b in (a + 1)..snapshot.len() {
                let (ia, ka) = &snapshot[a];
                let (ib, kb) = &snapshot[b];
                let pair_key = if ka < kb {
                    (ka.clone(), kb.clone())
                } else {
                    (kb.clone(), ka.clone())
                };
                if !processed.insert(pair_key) {
                    continue;
                }
                let sum = members[*ia].ideal.sum(&members[*ib].ideal)?;
                let key = sum.canonical_key()?;
                if seen.contains_key(&key) {
                    continue;
                }
                let prov = Provenance::Sum {
                    a_tag: members[*ia].tag.as_deref(),
                    b_tag: members[*ib].tag.as_deref(),
                };
                match decompose(&sum, &prov)? {
                    Some(comps) => {
                        for (c, ctag) in comps {
                            if register(&mut members, &mut seen, c, ctag, true)?.is_some() {
                                added = true;
                            }
                        }
                        // composite sums stay known so we skip re-deriving them
                        seen.entry(key).or_insert(usize::MAX);
                    }
                    None => {
                        if register(&mut members, &mut seen, sum, None, false)?.is_some() {
                            added = true;
                        }
                    }
                }
            }
        }
        if !added {
            break;
        }
    }

    SplitPoset::assemble(ring, f.clone(), members, lex)
}

impl SplitPoset {
    fn assemble(
        ring: Ring,
        f: Poly,
        members: Vec<Member>,
        degen_order: WeightOrder,
    ) -> Result<SplitPoset> {
        let n = members.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                // V_i ⊆ V_j iff I_j ⊆ I_i
                leq[i][j] = members[i].ideal.contains_ideal(&members[j].ideal)?;
            }
        }
        Ok(SplitPoset {
            ring,
            f,
            members,
            leq,
            degen_order,
        })
    }

    pub fn degen_order(&self) -> &WeightOrder {
        &self.degen_order
    }

    pub(crate) fn set_tag(&mut self, idx: usize, tag: String) {
        self.members[idx].tag = Some(tag);
    }

    /// Register an explicit member list (already-known split ideals, e.g.
    /// transcribed from a worked example) and close it under sums using
    /// the given hooks.
    pub fn from_members(
        f: &Poly,
        members: Vec<(Ideal, Option<String>)>,
        hooks: &[&dyn ComponentHook],
        mode: CompatMode,
        budget: u64,
    ) -> Result<SplitPoset> {
        closure_algorithm(f, members, hooks, mode, budget)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn splitting_poly(&self) -> &Poly {
        &self.f
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Variety containment `V_i ⊆ V_j`.
    pub fn contained(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn find(&self, ideal: &Ideal) -> Result<Option<usize>> {
        let key = ideal.canonical_key()?;
        for (i, m) in self.members.iter().enumerate() {
            if m.ideal.canonical_key()? == key {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// The member poset in variety-containment order.
    pub fn order_poset(&self) -> FinitePoset {
        let labels = self
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| {
                m.tag
                    .clone()
                    .unwrap_or_else(|| m.ideal.canonical_key().unwrap_or_else(|_| format!("#{i}")))
            })
            .collect();
        FinitePoset {
            labels,
            leq: self.leq.clone(),
        }
    }

    fn irreducible_indices(&self) -> Vec<usize> {
        (0..self.members.len())
            .filter(|&i| self.members[i].irreducible)
            .collect()
    }

    /// The degeneration image of `V(member)` contains the coordinate
    /// subspace cut out by `zero_vars` iff every basis element of the
    /// image lies in the coordinate ideal, i.e. every term meets the
    /// vanishing set.
    fn degen_contains_subspace(&self, member: usize, zero_vars: &BTreeSet<usize>) -> Result<bool> {
        let gb = self.members[member].degen.canonical_basis()?;
        Ok(gb.iter().all(|g| {
            g.terms()
                .iter()
                .all(|(m, _)| zero_vars.iter().any(|&v| m.exp(v) > 0))
        }))
    }

    /// The containment-minimal member whose degeneration image contains
    /// the given coordinate subspace. Non-existence or non-uniqueness is
    /// a hard error.
    pub fn pi_f_init(&self, zero_vars: &BTreeSet<usize>) -> Result<usize> {
        let mut candidates = Vec::new();
        for i in self.irreducible_indices() {
            if self.degen_contains_subspace(i, zero_vars)? {
                candidates.push(i);
            }
        }
        if candidates.is_empty() {
            return Err(Error::Invariant(format!(
                "no member degenerates over the subspace {zero_vars:?}"
            )));
        }
        let minimal: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&i| {
                !candidates
                    .iter()
                    .any(|&j| j != i && self.leq[j][i] && !self.leq[i][j])
            })
            .collect();
        if minimal.len() != 1 {
            return Err(Error::Invariant(format!(
                "minimal member over {zero_vars:?} is not unique: {minimal:?}"
            )));
        }
        Ok(minimal[0])
    }

    /// All coordinate subspaces, as sets of vanishing variables.
    pub fn coordinate_subspaces(&self) -> Vec<BTreeSet<usize>> {
        let n = self.ring.arity();
        (0..(1u32 << n))
            .map(|mask| {
                (0..n)
                    .filter(|&i| mask & (1 << i) != 0)
                    .collect::<BTreeSet<_>>()
            })
            .collect()
    }

    pub fn check_poset_map(&self) -> Result<PosetMapReport> {
        let subspaces = self.coordinate_subspaces();
        let mut pi = Vec::with_capacity(subspaces.len());
        for z in &subspaces {
            pi.push(self.pi_f_init(z)?);
        }
        // order preservation: V(z1) ⊆ V(z2) iff z1 ⊇ z2
        let mut order_preserving = true;
        for (i, zi) in subspaces.iter().enumerate() {
            for (j, zj) in subspaces.iter().enumerate() {
                if zi.is_superset(zj) && !self.leq[pi[i]][pi[j]] {
                    order_preserving = false;
                }
            }
        }
        let image: HashSet<usize> = pi.iter().copied().collect();
        let surjective = self
            .irreducible_indices()
            .into_iter()
            .all(|i| image.contains(&i));
        // two-sided criterion: Y2 ⊇ pi(Z1) iff some subspace Z2 ⊇ Z1
        // (as varieties) maps onto Y2
        let mut criterion = true;
        for (i, zi) in subspaces.iter().enumerate() {
            for y2 in self.irreducible_indices() {
                let lhs = self.leq[pi[i]][y2];
                let rhs = subspaces
                    .iter()
                    .enumerate()
                    .any(|(j, zj)| zi.is_superset(zj) && pi[j] == y2);
                if lhs != rhs {
                    criterion = false;
                }
            }
        }
        Ok(PosetMapReport {
            order_preserving,
            surjective,
            criterion,
            pi: subspaces
                .into_iter()
                .map(|z| z.into_iter().collect::<Vec<_>>())
                .zip(pi)
                .collect(),
        })
    }

    /// For homogeneous `f`: the degree of each member (through its
    /// squarefree degeneration) equals the number of equal-dimension
    /// coordinate subspaces mapping onto it.
    pub fn degree_identity_check(&self) -> Result<Vec<DegreeIdentity>> {
        let degs: BTreeSet<u64> = self
            .f
            .terms()
            .iter()
            .map(|(m, _)| m.degree())
            .collect();
        if degs.len() > 1 {
            return Err(Error::Hypothesis(
                "degree identity requires homogeneous f".into(),
            ));
        }
        let subspaces = self.coordinate_subspaces();
        let n = self.ring.arity();
        let mut pi = Vec::with_capacity(subspaces.len());
        for z in &subspaces {
            pi.push(self.pi_f_init(z)?);
        }
        let mut out = Vec::new();
        for i in self.irreducible_indices() {
            let monomial = MonomialIdeal::try_from_ideal(&self.members[i].degen)?;
            let (dim, degree) = monomial.dim_degree()?;
            let fiber_count = subspaces
                .iter()
                .enumerate()
                .filter(|(j, z)| pi[*j] == i && n - z.len() == dim)
                .count();
            out.push(DegreeIdentity {
                member: i,
                dim,
                degree,
                equal_dim_fiber_count: fiber_count,
                ok: degree == fiber_count,
            });
        }
        Ok(out)
    }

    /// DOT rendering of the Hasse diagram in variety-containment order.
    pub fn to_dot(&self) -> String {
        let poset = self.order_poset();
        let mut s = String::from("digraph split_poset {\n  rankdir=BT;\n");
        for (i, m) in self.members.iter().enumerate() {
            let label = m
                .tag
                .clone()
                .unwrap_or_else(|| m.ideal.canonical_key().unwrap_or_default());
            let shape = if m.irreducible { "ellipse" } else { "box" };
            s.push_str(&format!(
                "  n{i} [label=\"{}\", shape={shape}];\n",
                label.replace('"', "'")
            ));
        }
        for (i, j) in poset.covers() {
            s.push_str(&format!("  n{i} -> n{j};\n"));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PosetMapReport {
    pub order_preserving: bool,
    pub surjective: bool,
    pub criterion: bool,
    /// vanishing-variable sets paired with the member index they map to
    pub pi: Vec<(Vec<usize>, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeIdentity {
    pub member: usize,
    pub dim: usize,
    pub degree: usize,
    pub equal_dim_fiber_count: usize,
    pub ok: bool,
}

// ---------------------------------------------------------------------------
// Groebner concatenation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ConcatReport {
    /// every subset intersection has squarefree initial ideal
    pub certified: bool,
    /// `init(sum) = sum(init)`; only asserted when certified
    pub holds: Option<bool>,
}

/// Concatenating Groebner bases of the summands yields a Groebner basis
/// of the sum, provided every subset intersection has radical (here:
/// squarefree monomial) initial ideal. Without the certificate no
/// assertion is made.
pub fn concat_groebner_check(ideals: &[Ideal], o: &WeightOrder) -> Result<ConcatReport> {
    if ideals.is_empty() {
        return Ok(ConcatReport {
            certified: true,
            holds: Some(true),
        });
    }
    let ring = ideals[0].ring().clone();
    let k = ideals.len();
    let mut certified = true;
    for mask in 1u32..(1 << k) {
        let mut meet: Option<Ideal> = None;
        for (i, ideal) in ideals.iter().enumerate() {
            if mask & (1 << i) != 0 {
                meet = Some(match meet {
                    None => ideal.clone(),
                    Some(m) => m.intersect(ideal)?,
                });
            }
        }
        let init = meet.unwrap().initial_ideal(o)?;
        match MonomialIdeal::try_from_ideal(&init) {
            Ok(m) if m.is_squarefree() => {}
            _ => {
                certified = false;
                break;
            }
        }
    }
    if !certified {
        return Ok(ConcatReport {
            certified,
            holds: None,
        });
    }
    let mut sum = Ideal::zero(ring.clone());
    let mut init_sum = Ideal::zero(ring);
    for ideal in ideals {
        sum = sum.sum(ideal)?;
        init_sum = init_sum.sum(&ideal.initial_ideal(o)?)?;
    }
    let lhs = sum.initial_ideal(o)?;
    Ok(ConcatReport {
        certified,
        holds: Some(lhs == init_sum),
    })
}

// ---------------------------------------------------------------------------
// The shift bijection of the lex degeneration
// ---------------------------------------------------------------------------

/// The L-shift at `h`: the unique L-coordinate in which the members
/// meeting the line `{h} x L` in a finite nonempty scheme all meet it,
/// or 0 when no member does. Distinct coordinates across members violate
/// the degeneration theorem and raise an error.
pub fn ell_shift(members: &[Ideal], j: usize, h: &[u64]) -> Result<u64> {
    let ring = members
        .first()
        .ok_or_else(|| Error::Unsupported("no members".into()))?
        .ring()
        .clone();
    let p = ring.require_fp()?;
    let n = ring.arity();
    if h.len() + 1 != n {
        return Err(Error::ArityMismatch(h.len() + 1, n));
    }
    let mut roots: BTreeSet<u64> = BTreeSet::new();
    for ideal in members {
        if ideal.is_zero_ideal() {
            continue; // meets every line in the whole line
        }
        // specialize every variable except j
        let mut finite = false;
        let mut uni: Vec<Vec<u64>> = Vec::new();
        for g in ideal.generators() {
            let max_e = g.terms().iter().map(|(m, _)| m.exp(j)).max().unwrap_or(0);
            let mut coeffs = vec![0u64; max_e as usize + 1];
            for (m, c) in g.terms() {
                let mut v = c.as_fp().expect("F_p");
                for (i, &e) in m.exps().iter().enumerate() {
                    if i == j || e == 0 {
                        continue;
                    }
                    let hi = if i < j { h[i] } else { h[i - 1] };
                    v = v * pow_mod(hi, e as u64, p) % p;
                }
                let idx = m.exp(j) as usize;
                coeffs[idx] = (coeffs[idx] + v) % p;
            }
            if coeffs.iter().any(|&c| c != 0) {
                finite = true;
            }
            uni.push(coeffs);
        }
        if !finite {
            continue; // the member contains the whole line
        }
        let member_roots: Vec<u64> = (0..p)
            .filter(|&v| {
                uni.iter().all(|coeffs| {
                    let mut acc = 0u64;
                    for &c in coeffs.iter().rev() {
                        acc = (acc * v + c) % p;
                    }
                    acc == 0
                })
            })
            .collect();
        roots.extend(member_roots);
    }
    match roots.len() {
        0 => Ok(0),
        1 => Ok(*roots.iter().next().unwrap()),
        _ => Err(Error::Invariant(format!(
            "members meet the line over {h:?} in several points: {roots:?}"
        ))),
    }
}

/// One shift step `iota_j(h + l) = h + l - l_f(h)` against the given
/// member family.
pub fn iota_shift(members: &[Ideal], j: usize, point: &[u64]) -> Result<Vec<u64>> {
    let ring = members
        .first()
        .ok_or_else(|| Error::Unsupported("no members".into()))?
        .ring();
    let p = ring.require_fp()?;
    let mut h = point.to_vec();
    let lj = h.remove(j);
    let shift = ell_shift(members, j, &h)?;
    let mut out = point.to_vec();
    out[j] = (lj + p - shift) % p;
    Ok(out)
}

impl SplitPoset {
    /// One shift step against the current member family.
    pub fn iota_shift(&self, j: usize, point: &[u64]) -> Result<Vec<u64>> {
        let members: Vec<Ideal> = self
            .members
            .iter()
            .filter(|m| m.irreducible)
            .map(|m| m.ideal.clone())
            .collect();
        iota_shift(&members, j, point)
    }

    /// Member families of the staged lex degeneration: stage 0 is the
    /// member list, stage j+1 takes leading forms for weight on variable
    /// j. The last stage consists of the full lex initial ideals.
    pub fn degeneration_stages(&self) -> Result<Vec<Vec<Ideal>>> {
        let n = self.ring.arity();
        let mut stages = Vec::with_capacity(n + 1);
        let mut current: Vec<Ideal> = self
            .members
            .iter()
            .filter(|m| m.irreducible)
            .map(|m| m.ideal.clone())
            .collect();
        stages.push(current.clone());
        for j in 0..n {
            let mut weight = vec![0i128; n];
            weight[j] = 1;
            let o = WeightOrder::weight(&weight);
            current = current
                .iter()
                .map(|i| i.initial_ideal(&o))
                .collect::<Result<Vec<_>>>()?;
            stages.push(current.clone());
        }
        Ok(stages)
    }

    /// The composite shift `iota = iota_n ∘ ... ∘ iota_1`, taking each
    /// member's points into its lex-initial member's points.
    pub fn lex_iota(&self, point: &[u64]) -> Result<Vec<u64>> {
        let stages = self.degeneration_stages()?;
        let mut pt = point.to_vec();
        for j in 0..self.ring.arity() {
            pt = iota_shift(&stages[j], j, &pt)?;
        }
        Ok(pt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{enumerate_ideal, DEFAULT_POINT_BUDGET};
    use crate::splitting::DEFAULT_COMPAT_BUDGET;

    fn chain(n: usize) -> FinitePoset {
        let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        FinitePoset::new((0..n).map(|i| i.to_string()).collect(), leq).unwrap()
    }

    #[test]
    fn basic_elements_toy_posets() {
        // 3-chain: all three basic (top by the maximal-element convention)
        assert_eq!(chain(3).basic_elements(), vec![0, 1, 2]);

        // diamond 0 < a, b < 1: a, b, 1 basic; 0 not
        let labels = vec!["0".into(), "a".into(), "b".into(), "1".into()];
        let mut leq = vec![vec![false; 4]; 4];
        for i in 0..4 {
            leq[i][i] = true;
        }
        leq[0][1] = true;
        leq[0][2] = true;
        leq[0][3] = true;
        leq[1][3] = true;
        leq[2][3] = true;
        let diamond = FinitePoset::new(labels, leq).unwrap();
        assert_eq!(diamond.basic_elements(), vec![1, 2, 3]);
    }

    fn xyz_poset(p: u64) -> SplitPoset {
        let r = Ring::fp(p, 3).unwrap();
        let f = r.parse("x1*x2*x3").unwrap();
        let seeds = vec![
            (Ideal::parse(&r, "x1").unwrap(), None),
            (Ideal::parse(&r, "x2").unwrap(), None),
            (Ideal::parse(&r, "x3").unwrap(), None),
        ];
        let monomial = MonomialComponents;
        closure_algorithm(
            &f,
            seeds,
            &[&monomial],
            CompatMode::Oracle,
            DEFAULT_COMPAT_BUDGET,
        )
        .unwrap()
    }

    #[test]
    fn coordinate_poset_for_xyz() {
        let poset = xyz_poset(2);
        // all 8 coordinate subspace ideals
        assert_eq!(poset.len(), 8);
        assert!(poset.members().iter().all(|m| m.irreducible));
        // the order poset is the face lattice of the 2-simplex plus minimum
        let fp = poset.order_poset();
        let covers = fp.covers();
        assert_eq!(covers.len(), 12); // 1->3 + 3->2*3 + 3->1 edges of the cube order
        // pi is the identity on coordinate subspaces
        let report = poset.check_poset_map().unwrap();
        assert!(report.order_preserving && report.surjective && report.criterion);
        for (z, member) in &report.pi {
            let zset: BTreeSet<usize> = z.iter().copied().collect();
            let gens: Vec<Poly> = zset.iter().map(|&v| poset.ring().var(v)).collect();
            let ideal = Ideal::new(poset.ring().clone(), gens).unwrap();
            assert_eq!(poset.find(&ideal).unwrap().unwrap(), *member);
        }
        // degree identity: everything degree 1
        for row in poset.degree_identity_check().unwrap() {
            assert!(row.ok);
            assert_eq!(row.degree, 1);
        }
    }

    #[test]
    fn count_bound_for_xyz() {
        let poset = xyz_poset(3);
        let n = 3usize;
        let binom = [1usize, 3, 3, 1];
        for k in 0..=n {
            let count = poset
                .members()
                .iter()
                .filter(|m| {
                    let mono = MonomialIdeal::try_from_ideal(&m.degen).unwrap();
                    mono.dim_degree().unwrap().0 == k
                })
                .count();
            assert!(count <= binom[k]);
        }
    }

    #[test]
    fn two_lines_poset() {
        // f = x1*x2 + c*x2^2 = x2*(x1 + c*x2), c in F_p^*
        let p = 5u64;
        let r = Ring::fp(p, 2).unwrap();
        let c = 2i64;
        let f = r.parse(&format!("x1*x2 + {c}*x2^2")).unwrap();
        let line1 = r.parse("x2").unwrap();
        let line2 = r.parse(&format!("x1 + {c}*x2")).unwrap();
        let mut factors = FactorTable::new();
        factors
            .insert(&f, vec![line1.clone(), line2.clone()])
            .unwrap();
        let monomial = MonomialComponents;
        let known = KnownIrreducible::new(&[
            Ideal::new(r.clone(), vec![line2.clone()]).unwrap(),
        ])
        .unwrap();
        let poset = closure_algorithm(
            &f,
            vec![(Ideal::new(r.clone(), vec![f.clone()]).unwrap(), None)],
            &[&monomial, &factors, &known],
            CompatMode::Oracle,
            DEFAULT_COMPAT_BUDGET,
        )
        .unwrap();
        // ambient, two lines, origin
        assert_eq!(poset.len(), 4);
        let report = poset.check_poset_map().unwrap();
        assert!(report.order_preserving && report.surjective && report.criterion);

        // the shift bijection maps each member into its lex-initial member
        for m in poset.members() {
            let pts = enumerate_ideal(&m.ideal, DEFAULT_POINT_BUDGET).unwrap();
            let degen_pts = enumerate_ideal(&m.degen, DEFAULT_POINT_BUDGET).unwrap();
            for pt in &pts.points {
                let img = poset.lex_iota(pt).unwrap();
                assert!(degen_pts.contains(&img), "{pt:?} -> {img:?} for {}", m.ideal.canonical_key().unwrap());
            }
        }
        // and is a bijection of the plane
        let mut all_images = BTreeSet::new();
        for a in 0..p {
            for b in 0..p {
                all_images.insert(poset.lex_iota(&[a, b]).unwrap());
            }
        }
        assert_eq!(all_images.len(), (p * p) as usize);
    }

    #[test]
    fn concat_groebner_examples() {
        let r = Ring::fp(5, 2).unwrap();
        let o = WeightOrder::lex(2);
        let ix = Ideal::parse(&r, "x1").unwrap();
        let iy = Ideal::parse(&r, "x2").unwrap();
        let rep = concat_groebner_check(&[ix, iy], &o).unwrap();
        assert!(rep.certified);
        assert_eq!(rep.holds, Some(true));

        // counterexample without the hypothesis: <x>, <x + y^2> under lex y > x
        let o2 = WeightOrder::lex_perm(vec![1, 0]);
        let i1 = Ideal::parse(&r, "x1").unwrap();
        let i2 = Ideal::parse(&r, "x1 + x2^2").unwrap();
        let rep2 = concat_groebner_check(&[i1, i2], &o2).unwrap();
        assert!(!rep2.certified);
        assert_eq!(rep2.holds, None);
    }

    #[test]
    fn ell_shift_on_blowup_line() {
        // members: the two lines and origin in the (x1, x2) plane
        let r = Ring::fp(5, 2).unwrap();
        let line = Ideal::parse(&r, "x1 + 2*x2").unwrap();
        let origin = Ideal::parse(&r, "x1; x2").unwrap();
        // along variable 0 over h = (x2): the line meets {h} x L at x1 = -2 x2
        let l = ell_shift(&[line.clone(), origin.clone()], 0, &[1]).unwrap();
        assert_eq!(l, 3); // -2 mod 5
        let l0 = ell_shift(&[line, origin], 0, &[0]).unwrap();
        assert_eq!(l0, 0);
    }
}
