//! Formal DG manifolds `(M, Q)` and the dictionary between derivations of
//! the resolvent and coderivations of the symmetric coalgebra `S(M)`.
//!
//! A monomial `c * x_{j1} ... x_{jn}` of `s(x_i)` is the Taylor coefficient
//! `Q_n([e_{j1}, ..., e_{jn}]) = c * e_i`. Multisets are stored in canonical
//! (ascending id) order and no automorphism factor is divided out, so both
//! directions of the dictionary are exact inverses.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{apply_derivation, Monomial, Poly, Rational, Var};
use crate::linalg::{ColumnReduction, SparseVec};
use crate::resolvent::{build_resolvent, InputIdeal, Resolvent, ResolventError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgError {
    #[error("map is not compatible with the codifferentials at generator {generator}")]
    NotAMorphism { generator: String },
    #[error("multiset {0:?} repeats an odd basis vector")]
    OddRepeat(Vec<usize>),
    #[error(transparent)]
    Resolvent(#[from] ResolventError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVector {
    pub name: String,
    pub degree: u32,
    pub weight: i64,
}

/// `M = sum_i k e_i` with one basis vector per resolvent generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    basis: Vec<BasisVector>,
}

impl GradedSpace {
    pub fn new(basis: Vec<BasisVector>) -> Self {
        GradedSpace { basis }
    }

    pub fn from_resolvent(r: &Resolvent) -> Self {
        GradedSpace {
            basis: r
                .generators()
                .iter()
                .map(|g| BasisVector { name: format!("e_{}", g.name), degree: g.level, weight: g.weight() })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    /// The dual coordinate `x_i` as an algebra variable.
    pub fn var(&self, i: usize) -> Var {
        let b = &self.basis[i];
        Var::new(i as u32, -(b.degree as i32), b.weight)
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.basis[i].degree % 2 == 1
    }

    fn multiset_monomial(&self, ms: &[usize]) -> Option<Monomial> {
        let factors: Vec<(Var, u32)> = ms.iter().map(|&i| (self.var(i), 1)).collect();
        Monomial::from_product(&factors).map(|(_, m)| m)
    }
}

/// Canonical multiset of basis indices, sorted ascending.
pub type Multiset = Vec<usize>;

/// Structure constants of a coderivation: arity -> input multiset -> output.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Coderivation {
    pub degree: i32,
    taylor: BTreeMap<usize, BTreeMap<Multiset, SparseVec>>,
}

impl Coderivation {
    pub fn zero(degree: i32) -> Self {
        Coderivation { degree, taylor: BTreeMap::new() }
    }

    /// Adds `c * e_target` to `Q_n(inputs)`.
    pub fn add(&mut self, inputs: &[usize], target: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let mut ms = inputs.to_vec();
        ms.sort_unstable();
        let out = self.taylor.entry(ms.len()).or_default().entry(ms.clone()).or_default();
        let entry = out.entry(target).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            out.remove(&target);
            let arity = self.taylor.get_mut(&ms.len()).expect("just inserted");
            if arity[&ms].is_empty() {
                arity.remove(&ms);
            }
            if arity.is_empty() {
                self.taylor.remove(&ms.len());
            }
        }
    }

    pub fn component(&self, inputs: &[usize]) -> SparseVec {
        let mut ms = inputs.to_vec();
        ms.sort_unstable();
        self.taylor.get(&ms.len()).and_then(|a| a.get(&ms)).cloned().unwrap_or_default()
    }

    pub fn arity(&self, n: usize) -> Option<&BTreeMap<Multiset, SparseVec>> {
        self.taylor.get(&n)
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.taylor.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Multiset, usize, &Rational)> {
        self.taylor.values().flat_map(|a| a.iter().flat_map(|(ms, out)| out.iter().map(move |(i, c)| (ms, *i, c))))
    }

    pub fn is_zero(&self) -> bool {
        self.taylor.is_empty()
    }

    /// Every output satisfies the degree and weight balance.
    pub fn is_homogeneous(&self, space: &GradedSpace) -> bool {
        self.entries().all(|(ms, i, _)| {
            let b = space.basis();
            let deg: i64 = ms.iter().map(|&j| b[j].degree as i64).sum();
            let w: i64 = ms.iter().map(|&j| b[j].weight).sum();
            b[i].degree as i64 == deg + self.degree as i64 && b[i].weight == w
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgManifold {
    pub space: GradedSpace,
    pub q: Coderivation,
}

/// Taylor coefficients `f_n` of a pointed morphism of formal DG manifolds;
/// `f_0` is absent.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MorphismTaylor {
    taylor: BTreeMap<Multiset, SparseVec>,
}

impl MorphismTaylor {
    pub fn new() -> Self {
        MorphismTaylor::default()
    }

    pub fn identity(dim: usize) -> Self {
        let mut f = MorphismTaylor::new();
        for i in 0..dim {
            f.add(&[i], i, Rational::one());
        }
        f
    }

    pub fn add(&mut self, inputs: &[usize], target: usize, c: Rational) {
        assert!(!inputs.is_empty(), "pointed morphisms have no f_0");
        let mut ms = inputs.to_vec();
        ms.sort_unstable();
        let out = self.taylor.entry(ms).or_default();
        let e = out.entry(target).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            out.remove(&target);
        }
    }

    /// Pullback of the target coordinate `x'_target` along the morphism.
    fn pullback(&self, target: usize, source: &GradedSpace) -> Poly {
        let mut p = Poly::zero();
        for (ms, out) in &self.taylor {
            if let Some(c) = out.get(&target) {
                if let Some(m) = source.multiset_monomial(ms) {
                    p.add_term(m, c.clone());
                }
            }
        }
        p
    }
}

pub fn der_to_coder(r: &Resolvent) -> Coderivation {
    let mut q = Coderivation::zero(1);
    for g in r.generators() {
        for (m, c) in r.diff(g.id()).terms() {
            let ms: Multiset =
                m.factors().iter().flat_map(|(v, e)| std::iter::repeat_n(v.id as usize, *e as usize)).collect();
            q.add(&ms, g.id() as usize, c.clone());
        }
    }
    q
}

/// Derivation values `s^Q(x_i) = x_i o Q`, indexed by basis position.
pub fn coder_to_der(q: &Coderivation, space: &GradedSpace) -> Result<Vec<Poly>, DgError> {
    let mut out = vec![Poly::zero(); space.dim()];
    for (ms, i, c) in q.entries() {
        let m = space.multiset_monomial(ms).ok_or_else(|| DgError::OddRepeat(ms.clone()))?;
        out[i].add_term(m, c.clone());
    }
    Ok(out)
}

/// `(s^Q)^2 = 0` on every generator of weight at most `weight_bound`,
/// looking at terms of arity at most `arity_bound`.
pub fn check_codifferential(q: &Coderivation, space: &GradedSpace, arity_bound: u32, weight_bound: i64) -> bool {
    let Ok(values) = coder_to_der(q, space) else { return false };
    (0..space.dim()).filter(|&i| space.basis()[i].weight <= weight_bound).all(|i| {
        let sq = apply_derivation(|id| values.get(id as usize), &values[i]);
        let ok = sq.terms().all(|(m, _)| m.degree() > arity_bound);
        ok
    })
}

/// Resolvent followed by the dictionary: `X -> (M, Q^M)`.
pub fn functor_f(ideal: &InputIdeal, depth: u32, weight_bound: i64) -> Result<DgManifold, DgError> {
    let r = build_resolvent(ideal, depth, weight_bound)?;
    Ok(dg_manifold(&r))
}

pub fn dg_manifold(r: &Resolvent) -> DgManifold {
    DgManifold { space: GradedSpace::from_resolvent(r), q: der_to_coder(r) }
}

/// Component functions of `Q` restricted to `M^0 -> M^1`, one per degree-1
/// basis vector, as polynomials in the degree-0 coordinates.
pub fn zero_locus(m: &DgManifold) -> Result<Vec<Poly>, DgError> {
    let values = coder_to_der(&m.q, &m.space)?;
    Ok((0..m.space.dim())
        .filter(|&i| m.space.basis()[i].degree == 1)
        .map(|i| values[i].filter(|mono| mono.vars().all(|v| v.hdeg == 0)))
        .collect())
}

pub fn is_minimal(m: &DgManifold) -> bool {
    m.q.arity(1).is_none()
}

pub fn is_local(m: &DgManifold) -> bool {
    m.q.arity(0).is_none()
}

/// Linear part `Q_1` as a map between basis indices.
fn linear_part(m: &DgManifold) -> BTreeMap<usize, SparseVec> {
    let mut out: BTreeMap<usize, SparseVec> = BTreeMap::new();
    if let Some(a) = m.q.arity(1) {
        for (ms, img) in a {
            out.insert(ms[0], img.clone());
        }
    }
    out
}

struct LinearCohomology {
    cycles: Vec<SparseVec>,
    boundaries: Vec<SparseVec>,
}

fn linear_cohomology(m: &DgManifold, degree: u32, weight: i64) -> LinearCohomology {
    let q1 = linear_part(m);
    let idx = |d: u32| -> Vec<usize> {
        (0..m.space.dim()).filter(|&i| m.space.basis()[i].degree == d && m.space.basis()[i].weight == weight).collect()
    };
    let here = idx(degree);
    let above = idx(degree + 1);
    let below = if degree > 0 { idx(degree - 1) } else { Vec::new() };
    // coordinates are global basis indices; restrict to the piece
    let cols_here: Vec<SparseVec> = here
        .iter()
        .map(|i| q1.get(i).cloned().unwrap_or_default().into_iter().filter(|(k, _)| above.contains(k)).collect())
        .collect();
    let red = ColumnReduction::from_columns(m.space.dim(), cols_here);
    let cycles = red
        .kernel_basis()
        .vectors
        .into_iter()
        .map(|v| v.into_iter().map(|(k, c)| (here[k], c)).collect())
        .collect();
    let boundaries = below.iter().map(|i| q1.get(i).cloned().unwrap_or_default()).filter(|v| !v.is_empty()).collect();
    LinearCohomology { cycles, boundaries }
}

fn rank(vectors: &[SparseVec], dim: usize) -> usize {
    ColumnReduction::from_columns(dim, vectors.to_vec()).rank()
}

/// `f` is a weak equivalence when `f_1` is a quasi-isomorphism of the
/// linear complexes `(M, Q_1) -> (M', Q'_1)` in every weight up to the bound.
pub fn is_weak_equivalence(
    f: &MorphismTaylor,
    source: &DgManifold,
    target: &DgManifold,
    weight_bound: i64,
) -> Result<bool, DgError> {
    let s_src = coder_to_der(&source.q, &source.space)?;
    let s_tgt = coder_to_der(&target.q, &target.space)?;
    // dual algebra map phi: x'_i -> x'_i o f
    let phi: BTreeMap<Var, Poly> =
        (0..target.space.dim()).map(|i| (target.space.var(i), f.pullback(i, &source.space))).collect();
    for i in 0..target.space.dim() {
        if target.space.basis()[i].weight > weight_bound {
            continue;
        }
        let lhs = apply_derivation(|id| s_src.get(id as usize), &phi[&target.space.var(i)]);
        let rhs = s_tgt[i].substitute(&phi, true).map_err(|_| DgError::NotAMorphism {
            generator: target.space.basis()[i].name.clone(),
        })?;
        if lhs != rhs {
            return Err(DgError::NotAMorphism { generator: target.space.basis()[i].name.clone() });
        }
    }
    // f_1 as a sparse map on basis indices
    let f1 = |i: usize| -> SparseVec { f.taylor.get(&vec![i]).cloned().unwrap_or_default() };
    let max_deg =
        source.space.basis().iter().chain(target.space.basis()).map(|b| b.degree).max().unwrap_or(0);
    let weights: std::collections::BTreeSet<i64> = source
        .space
        .basis()
        .iter()
        .chain(target.space.basis())
        .map(|b| b.weight)
        .filter(|w| *w <= weight_bound)
        .collect();
    for &w in &weights {
        for d in 0..=max_deg {
            let hs = linear_cohomology(source, d, w);
            let ht = linear_cohomology(target, d, w);
            let dim_s = hs.cycles.len() - rank(&hs.boundaries, source.space.dim());
            let dim_t = ht.cycles.len() - rank(&ht.boundaries, target.space.dim());
            if dim_s != dim_t {
                return Ok(false);
            }
            let mut images: Vec<SparseVec> = ht.boundaries.clone();
            let b_rank = rank(&images, target.space.dim());
            for z in &hs.cycles {
                let mut img = SparseVec::new();
                for (i, c) in z {
                    crate::linalg::axpy(&mut img, c, &f1(*i));
                }
                images.push(img);
            }
            let induced = rank(&images, target.space.dim()) - b_rank;
            if induced != dim_s {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
