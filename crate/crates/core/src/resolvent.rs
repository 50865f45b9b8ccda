//! Free graded-commutative DG-algebra resolvents of quasi-homogeneous ideals.
//!
//! Generators are adjoined level by level: level 1 kills the ideal
//! generators, level `l + 1` kills the cohomology in degree `-l`, weight by
//! weight up to the weight bound.

use std::collections::HashMap;

use num_traits::One;
use thiserror::Error;

use crate::algebra::{apply_derivation, monomial_basis, Generator, Monomial, Poly, Rational, Var};
use crate::linalg::{quotient_basis, ColumnReduction, SparseVec, SubspaceBasis};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolventError {
    #[error("ideal generator {index} is not weight-homogeneous")]
    NonHomogeneousInput { index: usize },
    #[error("ideal generator {index} has a linear term (embedding is not minimal)")]
    LinearTermInGenerator { index: usize },
    #[error("ideal generator {index} has a nonzero constant term")]
    ConstantTermInGenerator { index: usize },
    #[error("ideal generator {index} is zero")]
    ZeroGenerator { index: usize },
    #[error("variable {name} has non-positive weight {weight}")]
    NonPositiveWeight { name: String, weight: i64 },
    #[error("variable {name} must have level 0 and homological degree 0")]
    NotAmbientVariable { name: String },
    #[error("ideal generator {index} uses a variable outside the ring")]
    UnknownVariable { index: usize },
    #[error("weight bound {given} is below the required {needed}")]
    WeightBoundTooSmall { needed: i64, given: i64 },
    #[error("depth must be at least 1, got {0}")]
    DepthTooSmall(u32),
    #[error("cycle representative for a new level-{level} generator contains a bare generator (non-minimal)")]
    NonMinimalCycle { level: u32 },
}

/// Ideal `I` in a weighted polynomial ring, presenting `A = k[x]/I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputIdeal {
    variables: Vec<Generator>,
    generators: Vec<Poly>,
    approximate: bool,
}

impl InputIdeal {
    pub fn new(variables: Vec<Generator>, generators: Vec<Poly>) -> Result<Self, ResolventError> {
        for (k, v) in variables.iter().enumerate() {
            if v.weight() <= 0 {
                return Err(ResolventError::NonPositiveWeight { name: v.name.clone(), weight: v.weight() });
            }
            if v.level != 0 || v.hdeg() != 0 || v.id() != k as u32 {
                return Err(ResolventError::NotAmbientVariable { name: v.name.clone() });
            }
        }
        let n = variables.len() as u32;
        for (index, f) in generators.iter().enumerate() {
            if f.is_zero() {
                return Err(ResolventError::ZeroGenerator { index });
            }
            if f.vars().iter().any(|v| v.id >= n || v.hdeg != 0) {
                return Err(ResolventError::UnknownVariable { index });
            }
            if f.terms().any(|(m, _)| m.is_one()) {
                return Err(ResolventError::ConstantTermInGenerator { index });
            }
            if f.terms().any(|(m, _)| m.degree() == 1) {
                return Err(ResolventError::LinearTermInGenerator { index });
            }
            if !f.is_weight_homogeneous() {
                return Err(ResolventError::NonHomogeneousInput { index });
            }
        }
        Ok(InputIdeal { variables, generators, approximate: false })
    }

    /// Approximate mode for non-homogeneous input: truncate each generator
    /// at total degree `order`, then keep its lowest-weight part.
    pub fn from_jet(variables: Vec<Generator>, generators: Vec<Poly>, order: u32) -> Result<Self, ResolventError> {
        let approx: Vec<Poly> = generators
            .iter()
            .map(|f| {
                let j = f.jet_truncate(order);
                match j.filter(|m| m.degree() >= 2).min_weight() {
                    Some(w) => j.weight_component(w),
                    None => j,
                }
            })
            .collect();
        let mut ideal = InputIdeal::new(variables, approx)?;
        ideal.approximate = true;
        Ok(ideal)
    }

    pub fn variables(&self) -> &[Generator] {
        &self.variables
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    pub fn vars(&self) -> Vec<Var> {
        self.variables.iter().map(|g| g.var).collect()
    }

    pub fn generator_weights(&self) -> Vec<i64> {
        self.generators.iter().map(|f| f.weight().unwrap_or(0)).collect()
    }

    /// Default weight bound. For a principal ideal this is the socle-weight
    /// bound `sum(d - 2 w_i) + max w_i`, raised to at least `d`; otherwise the
    /// top generator weight plus `depth - 1`.
    pub fn default_weight_bound(&self, depth: u32) -> i64 {
        let fmax = self.generator_weights().into_iter().max().unwrap_or(0);
        let wmax = self.variables.iter().map(Generator::weight).max().unwrap_or(1);
        if self.generators.len() == 1 {
            let d = fmax;
            let socle: i64 = self.variables.iter().map(|v| d - 2 * v.weight()).sum::<i64>() + wmax;
            socle.max(d).max(wmax)
        } else {
            (fmax + depth as i64 - 1).max(wmax)
        }
    }

    /// `dim (k[x]/I)_w`, computed as the cokernel of multiplication
    /// `sum_j k[x]_{w - deg f_j} * f_j -> k[x]_w`.
    pub fn quotient_dimension(&self, w: i64) -> usize {
        let vars = self.vars();
        let target = BigradedPiece::new(&vars, 0, w);
        let mut cols = Vec::new();
        for f in &self.generators {
            let fw = f.weight().unwrap_or(0);
            for m in monomial_basis(0, w - fw, &vars) {
                let p = f.mul_monomial_left(&Rational::one(), &m);
                cols.push(target.coords(&p).expect("product lies in the weight piece"));
            }
        }
        target.dim() - ColumnReduction::from_columns(target.dim(), cols).rank()
    }
}

/// A finite k-basis of the bigraded piece `R^hdeg_weight`.
#[derive(Clone, Debug)]
pub struct BigradedPiece {
    pub hdeg: i32,
    pub weight: i64,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl BigradedPiece {
    pub fn new(vars: &[Var], hdeg: i32, weight: i64) -> Self {
        let basis = if weight < 0 || hdeg > 0 { Vec::new() } else { monomial_basis(hdeg, weight, vars) };
        let index = basis.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect();
        BigradedPiece { hdeg, weight, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of `p`; `None` if some term lies outside the piece.
    pub fn coords(&self, p: &Poly) -> Option<SparseVec> {
        let mut v = SparseVec::new();
        for (m, c) in p.terms() {
            v.insert(*self.index.get(m)?, c.clone());
        }
        Some(v)
    }

    pub fn poly(&self, v: &SparseVec) -> Poly {
        Poly::from_terms(v.iter().map(|(k, c)| (self.basis[*k].clone(), c.clone())))
    }
}

/// Cohomology of `(R, s)` in one bigraded piece.
#[derive(Clone, Debug)]
pub struct CohomologyPiece {
    pub piece: BigradedPiece,
    pub basis: SubspaceBasis,
}

impl CohomologyPiece {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn representatives(&self) -> Vec<Poly> {
        self.basis.vectors.iter().map(|v| self.piece.poly(v)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolvent {
    generators: Vec<Generator>,
    diff: Vec<Poly>,
    depth: u32,
    weight_bound: i64,
}

impl Resolvent {
    /// Assembles a resolvent from explicit data; generator ids must equal
    /// their positions.
    pub fn from_parts(generators: Vec<Generator>, diff: Vec<Poly>, depth: u32, weight_bound: i64) -> Self {
        assert_eq!(generators.len(), diff.len());
        assert!(generators.iter().enumerate().all(|(k, g)| g.id() == k as u32), "ids must be positions");
        Resolvent { generators, diff, depth, weight_bound }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, id: u32) -> &Generator {
        &self.generators[id as usize]
    }

    pub fn diff(&self, id: u32) -> &Poly {
        &self.diff[id as usize]
    }

    pub fn differentials(&self) -> &[Poly] {
        &self.diff
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn weight_bound(&self) -> i64 {
        self.weight_bound
    }

    pub fn vars(&self) -> Vec<Var> {
        self.generators.iter().map(|g| g.var).collect()
    }

    pub fn level(&self, l: u32) -> impl Iterator<Item = &Generator> {
        self.generators.iter().filter(move |g| g.level == l)
    }

    pub fn max_level(&self) -> u32 {
        self.generators.iter().map(|g| g.level).max().unwrap_or(0)
    }

    pub fn max_weight(&self) -> i64 {
        self.generators.iter().map(Generator::weight).max().unwrap_or(0)
    }

    pub fn name(&self, id: u32) -> String {
        self.generators.get(id as usize).map_or_else(|| format!("v{id}"), |g| g.name.clone())
    }

    /// Extends `s` from generators to `p` by the Leibniz rule.
    pub fn apply(&self, p: &Poly) -> Poly {
        apply_derivation(|id| self.diff.get(id as usize), p)
    }

    /// Ideal generators read off the level-1 differentials.
    pub fn ideal(&self) -> InputIdeal {
        let vars: Vec<Generator> = self.level(0).cloned().collect();
        let gens: Vec<Poly> = self.level(1).map(|g| self.diff(g.id()).clone()).collect();
        InputIdeal { variables: vars, generators: gens, approximate: false }
    }

    /// Matrix of `s: R^hdeg_w -> R^{hdeg+1}_w` as columns.
    pub fn differential_columns(&self, from: &BigradedPiece, to: &BigradedPiece) -> Vec<SparseVec> {
        from.basis()
            .iter()
            .map(|m| {
                let img = self.apply(&Poly::term(Rational::one(), m.clone()));
                to.coords(&img).expect("s preserves weight and raises hdeg by one")
            })
            .collect()
    }

    pub fn cohomology_basis(&self, hdeg: i32, weight: i64) -> CohomologyPiece {
        let vars = self.vars();
        let below = BigradedPiece::new(&vars, hdeg - 1, weight);
        let here = BigradedPiece::new(&vars, hdeg, weight);
        let above = BigradedPiece::new(&vars, hdeg + 1, weight);
        let cycles = ColumnReduction::from_columns(above.dim(), self.differential_columns(&here, &above)).kernel_basis();
        let boundaries =
            ColumnReduction::from_columns(here.dim(), self.differential_columns(&below, &here)).image_basis();
        let basis = quotient_basis(&boundaries, &cycles).expect("boundaries are cycles when s^2 = 0");
        CohomologyPiece { piece: here, basis }
    }
}

fn generator_name(level: u32, k: usize) -> String {
    match level {
        1 => format!("e{k}"),
        2 => format!("r{k}"),
        _ => format!("g{level}_{k}"),
    }
}

/// Whether a name is reserved for generated resolvent generators or parameters.
pub fn is_reserved_name(name: &str) -> bool {
    let digits = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit());
    if let Some(rest) = name.strip_prefix('e').or_else(|| name.strip_prefix('r')).or_else(|| name.strip_prefix('t')) {
        if digits(rest) {
            return true;
        }
    }
    if let Some(rest) = name.strip_prefix('g') {
        if let Some((a, b)) = rest.split_once('_') {
            return digits(a) && digits(b);
        }
    }
    false
}

/// Builds a resolvent with generators up to level `depth`, certified for
/// weights up to `weight_bound`.
pub fn build_resolvent(ideal: &InputIdeal, depth: u32, weight_bound: i64) -> Result<Resolvent, ResolventError> {
    if depth < 1 {
        return Err(ResolventError::DepthTooSmall(depth));
    }
    let needed = ideal.generator_weights().into_iter().max().unwrap_or(0);
    if weight_bound < needed {
        return Err(ResolventError::WeightBoundTooSmall { needed, given: weight_bound });
    }
    let mut generators: Vec<Generator> = ideal.variables().to_vec();
    let mut diff: Vec<Poly> = vec![Poly::zero(); generators.len()];
    for (k, f) in ideal.generators().iter().enumerate() {
        let id = generators.len() as u32;
        generators.push(Generator::new(id, generator_name(1, k + 1), -1, f.weight().unwrap_or(0), 1));
        diff.push(f.clone());
    }
    let mut r = Resolvent { generators, diff, depth, weight_bound };
    for l in 1..depth {
        let mut count = 0;
        for w in 1..=weight_bound {
            let h = r.cohomology_basis(-(l as i32), w);
            for rep in h.representatives() {
                if rep.terms().any(|(m, _)| m.degree() == 1) {
                    return Err(ResolventError::NonMinimalCycle { level: l + 1 });
                }
                count += 1;
                let id = r.generators.len() as u32;
                r.generators.push(Generator::new(id, generator_name(l + 1, count), -(l as i32 + 1), w, l + 1));
                r.diff.push(rep);
            }
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolventReport {
    pub checks: Vec<Check>,
}

impl ResolventReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Checks `s^2 = 0`, homogeneity, minimality, acyclicity in degrees
/// `-1..-(D-1)` and `H^0 = A` for all weights up to the bound.
pub fn verify_resolvent(r: &Resolvent) -> ResolventReport {
    let mut checks = Vec::new();
    let mut bad_square = Vec::new();
    let mut bad_degree = Vec::new();
    let mut non_minimal = Vec::new();
    for g in r.generators() {
        let sg = r.diff(g.id());
        if !r.apply(sg).is_zero() {
            bad_square.push(g.name.clone());
        }
        if !sg.is_zero() && (sg.hdeg() != Some(g.hdeg() + 1) || sg.weight() != Some(g.weight())) {
            bad_degree.push(g.name.clone());
        }
        if sg.terms().any(|(m, _)| m.degree() <= 1) {
            non_minimal.push(g.name.clone());
        }
    }
    let summary = |v: &[String]| if v.is_empty() { "ok".to_string() } else { v.join(", ") };
    checks.push(Check { name: "s^2 = 0".into(), passed: bad_square.is_empty(), detail: summary(&bad_square) });
    checks.push(Check { name: "s homogeneous".into(), passed: bad_degree.is_empty(), detail: summary(&bad_degree) });
    checks.push(Check { name: "s minimal".into(), passed: non_minimal.is_empty(), detail: summary(&non_minimal) });

    if !bad_square.is_empty() {
        checks.push(Check {
            name: "cohomology".into(),
            passed: false,
            detail: "skipped: s^2 != 0".into(),
        });
        return ResolventReport { checks };
    }
    let ideal = r.ideal();
    for j in 1..r.depth() as i32 {
        let bad: Vec<String> = (1..=r.weight_bound())
            .filter_map(|w| {
                let d = r.cohomology_basis(-j, w).dim();
                (d != 0).then(|| format!("weight {w}: dim {d}"))
            })
            .collect();
        checks.push(Check { name: format!("H^-{j} = 0"), passed: bad.is_empty(), detail: summary(&bad) });
    }
    let bad: Vec<String> = (0..=r.weight_bound())
        .filter_map(|w| {
            let h = r.cohomology_basis(0, w).dim();
            let a = ideal.quotient_dimension(w);
            (h != a).then(|| format!("weight {w}: H^0 {h} vs A {a}"))
        })
        .collect();
    checks.push(Check { name: "H^0 = A".into(), passed: bad.is_empty(), detail: summary(&bad) });
    ResolventReport { checks }
}
