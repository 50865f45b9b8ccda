//! Order-by-order construction of the semi-universal deformation.
//!
//! The perturbation is `delta = sum_m t^m delta_m` over parameter monomials,
//! each `delta_m` a derivation of degree 1 and weight `-weight(t^m)`. At each
//! order the defect `[s, delta] + delta o delta` is reduced modulo the current
//! base ideal; the surviving leading coefficients are cocycles, split into an
//! obstruction part (new Kuranishi terms) and an exact part (killed by a
//! correction to `delta`).

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{Monomial, Poly, Rational, Var};
use crate::linalg::{ColumnReduction, SparseVec};
use crate::resolvent::{build_resolvent, InputIdeal, Resolvent, ResolventError};
use crate::tangent::{tangent_cohomology, weight_band, DerivationComplex, HomotopyData, TangentBasis, TangentElement, TangentError};

pub const DEFAULT_ORDER: u32 = 5;
pub const DEFAULT_DEPTH: u32 = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KuranishiError {
    #[error("defect at order {order}, monomial {monomial} is not a cocycle")]
    NotACocycle { order: u32, monomial: String },
    #[error("order {order} defect has weight {weight}, outside the certified band ending at {band_end}")]
    WeightBandExceeded { order: u32, weight: i64, band_end: i64 },
    #[error("defect below order {order} survived reduction")]
    LowerOrderDefect { order: u32 },
    #[error("order must be at least 1")]
    OrderTooSmall,
    #[error(transparent)]
    Resolvent(#[from] ResolventError),
    #[error(transparent)]
    Tangent(#[from] TangentError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parameter {
    pub name: String,
    /// Position in the T^1 basis.
    pub index: usize,
    pub weight: i64,
    pub var: Var,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perturbation {
    /// Keyed by monomials in the parameter variables, all of degree >= 1.
    pub delta: BTreeMap<Monomial, TangentElement>,
    pub order: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct KuranishiMap {
    /// One series in the parameters per T^2 basis vector.
    pub components: Vec<Poly>,
}

impl KuranishiMap {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    /// Nonzero components, which generate the base ideal.
    pub fn equations(&self) -> Vec<Poly> {
        self.components.iter().filter(|p| !p.is_zero()).cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Caveat {
    /// Derivation weights scanned for T^1 and T^2.
    WeightBand { low: i64, high: i64 },
    /// The last computed order still added terms.
    OrderTooSmall { order: u32 },
    /// Resolvent truncated at this depth and weight bound.
    Truncation { depth: u32, weight_bound: i64 },
    /// Input was replaced by the lowest-weight part of a jet.
    ApproximateInput,
}

impl std::fmt::Display for Caveat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Caveat::WeightBand { low, high } => write!(f, "tangent cohomology computed for derivation weights {low}..={high}"),
            Caveat::OrderTooSmall { order } => write!(f, "terms still changing at order {order}; raise the order"),
            Caveat::Truncation { depth, weight_bound } => {
                write!(f, "resolvent truncated at depth {depth} and weight {weight_bound}")
            }
            Caveat::ApproximateInput => write!(f, "input is the quasi-homogeneous part of a jet; results are approximate"),
        }
    }
}

/// One split defect, kept so the homotopy identity can be audited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftRecord {
    pub order: u32,
    pub monomial: Monomial,
    pub weight: i64,
    pub defect: TangentElement,
    pub proj: TangentElement,
    pub h: TangentElement,
    /// `defect == proj + [s, h]`, checked exactly.
    pub identity_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationResult {
    pub parameters: Vec<Parameter>,
    pub t1: TangentBasis,
    pub t2: TangentBasis,
    pub perturbation: Perturbation,
    /// `(s + delta)(e_j)` for each level-1 generator `e_j`.
    pub family: Vec<Poly>,
    pub kuranishi: KuranishiMap,
    pub order: u32,
    pub stabilized_at: Option<u32>,
    pub caveats: Vec<Caveat>,
    pub lift_log: Vec<LiftRecord>,
}

impl DeformationResult {
    pub fn parameter_vars(&self) -> Vec<Var> {
        self.parameters.iter().map(|p| p.var).collect()
    }
}

/// Parameter variables get ids after the resolvent generators, degree 0 and
/// the negated weight of their T^1 class.
pub fn parameters(r: &Resolvent, t1: &TangentBasis) -> Vec<Parameter> {
    let base = r.generators().len() as u32;
    t1.iter()
        .enumerate()
        .map(|(index, (w, _))| Parameter {
            name: format!("t{index}"),
            index,
            weight: -w,
            var: Var::new(base + index as u32, 0, -w),
        })
        .collect()
}

pub fn first_order(t1: &TangentBasis, params: &[Parameter]) -> Perturbation {
    let delta = t1
        .iter()
        .zip(params)
        .map(|((_, theta), p)| (Monomial::var(p.var), theta.clone()))
        .collect();
    Perturbation { delta, order: 1 }
}

/// Parameter monomials of a given total degree, ascending.
fn parameter_monomials(vars: &[Var], degree: u32) -> Vec<Monomial> {
    fn rec(vars: &[Var], degree: u32, acc: &mut Vec<(Var, u32)>, out: &mut Vec<Monomial>) {
        match vars.split_first() {
            None => {
                if degree == 0 {
                    out.push(Monomial::from_product(acc).expect("even variables").1);
                }
            }
            Some((v, rest)) => {
                for e in (0..=degree).rev() {
                    if e > 0 {
                        acc.push((*v, e));
                    }
                    rec(rest, degree - e, acc, out);
                    if e > 0 {
                        acc.pop();
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(vars, degree, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    a.mul(b).expect("parameters are even").1
}

/// Fully reduced echelon form of parameter series, pivoting on the lowest
/// monomial of each row.
#[derive(Default)]
struct SeriesEchelon {
    rows: Vec<(Monomial, Poly)>,
}

impl SeriesEchelon {
    fn reduce(&self, p: &Poly) -> Poly {
        let mut p = p.clone();
        for (pivot, row) in &self.rows {
            let c = p.coefficient(pivot);
            if !c.is_zero() {
                p.add_scaled(row, &-c);
            }
        }
        p
    }

    fn insert(&mut self, p: &Poly) {
        let p = self.reduce(p);
        let Some((pivot, c)) = p.terms().next().map(|(m, c)| (m.clone(), c.clone())) else {
            return;
        };
        let p = p.scale(&(Rational::one() / c));
        for (_, row) in &mut self.rows {
            let c = row.coefficient(&pivot);
            if !c.is_zero() {
                row.add_scaled(&p, &-c);
            }
        }
        self.rows.push((pivot, p));
    }
}

/// Span of `t^alpha * k_b` for `|alpha| >= min_shift`, truncated at `order`.
fn base_span(kuranishi: &KuranishiMap, vars: &[Var], min_shift: u32, order: u32) -> SeriesEchelon {
    let mut ech = SeriesEchelon::default();
    for k in &kuranishi.components {
        let Some(low) = k.terms().map(|(m, _)| m.degree()).min() else {
            continue;
        };
        for shift in min_shift..=order.saturating_sub(low) {
            if low + shift > order {
                break;
            }
            for alpha in parameter_monomials(vars, shift) {
                let shifted = k.mul_monomial_left(&Rational::one(), &alpha).filter(|m| m.degree() <= order);
                ech.insert(&shifted);
            }
        }
    }
    ech
}

/// `[s, delta] + delta o delta`, truncated at parameter order `order`.
fn maurer_cartan(cx: &DerivationComplex, delta: &BTreeMap<Monomial, TangentElement>, order: u32) -> BTreeMap<Monomial, TangentElement> {
    let mut out: BTreeMap<Monomial, TangentElement> = BTreeMap::new();
    let mut add = |m: Monomial, t: TangentElement| {
        if t.is_zero() {
            return;
        }
        match out.get_mut(&m) {
            Some(e) => e.add_scaled(&t, &Rational::one()),
            None => {
                out.insert(m, t);
            }
        }
    };
    for (m, d) in delta {
        if m.degree() <= order {
            add(m.clone(), cx.d(d));
        }
    }
    for (m1, d1) in delta {
        for (m2, d2) in delta {
            if m1.degree() + m2.degree() > order {
                continue;
            }
            let comp = TangentElement::from_values(
                d1.hdeg + d2.hdeg,
                d1.weight + d2.weight,
                d2.values().iter().map(|(k, v)| (*k, d1.apply(v))).collect::<Vec<_>>(),
            );
            add(mono_mul(m1, m2), comp);
        }
    }
    out.retain(|_, t| !t.is_zero());
    out
}

fn reduce_series(ech: &SeriesEchelon, r: &mut BTreeMap<Monomial, TangentElement>) {
    for (pivot, row) in &ech.rows {
        let Some(u) = r.get(pivot).cloned() else { continue };
        for (m, c) in row.terms() {
            let entry = r.entry(m.clone()).or_insert_with(|| TangentElement::zero(u.hdeg, u.weight));
            entry.add_scaled(&u, &-c);
        }
    }
    r.retain(|_, t| !t.is_zero());
}

/// State of the lifting: perturbation, Kuranishi map and the cached splittings.
pub struct Lifter<'a> {
    cx: DerivationComplex<'a>,
    params: Vec<Parameter>,
    band: (i64, i64),
    t2_offsets: BTreeMap<i64, usize>,
    t2_dim: usize,
    homotopy: HashMap<i64, HomotopyData>,
    pub perturbation: Perturbation,
    pub kuranishi: KuranishiMap,
    pub log: Vec<LiftRecord>,
}

/// What one order contributed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StepSummary {
    pub order: u32,
    pub corrections: usize,
    pub obstruction_terms: usize,
}

impl<'a> Lifter<'a> {
    pub fn new(r: &'a Resolvent, t1: &TangentBasis, t2: &TangentBasis) -> Result<Self, KuranishiError> {
        let band = weight_band(r, r.weight_bound())?;
        let params = parameters(r, t1);
        let mut t2_offsets = BTreeMap::new();
        let mut offset = 0;
        for (w, reps) in &t2.pieces {
            t2_offsets.insert(*w, offset);
            offset += reps.len();
        }
        Ok(Lifter {
            cx: DerivationComplex::new(r),
            perturbation: first_order(t1, &params),
            params,
            band,
            t2_offsets,
            t2_dim: offset,
            homotopy: HashMap::new(),
            kuranishi: KuranishiMap { components: vec![Poly::zero(); offset] },
            log: Vec::new(),
        })
    }

    pub fn parameters(&self) -> &[Parameter] {
        &self.params
    }

    fn param_vars(&self) -> Vec<Var> {
        self.params.iter().map(|p| p.var).collect()
    }

    /// Extends the perturbation and Kuranishi map by one parameter order.
    pub fn lift_step(&mut self) -> Result<StepSummary, KuranishiError> {
        let n = self.perturbation.order;
        let target = n + 1;
        let vars = self.param_vars();
        let mut r = maurer_cartan(&self.cx, &self.perturbation.delta, target);
        let omegas: Vec<TangentElement> = (0..self.t2_dim).map(|b| self.t2_element(b)).collect();
        for (k, omega) in self.kuranishi.components.iter().zip(&omegas) {
            for (m, c) in k.terms() {
                let entry = r.entry(m.clone()).or_insert_with(|| TangentElement::zero(omega.hdeg, omega.weight));
                entry.add_scaled(&omega, &-c);
            }
        }
        r.retain(|_, t| !t.is_zero());
        reduce_series(&base_span(&self.kuranishi, &vars, 1, target), &mut r);
        if r.keys().any(|m| m.degree() < target) {
            return Err(KuranishiError::LowerOrderDefect { order: target });
        }
        let mut summary = StepSummary { order: target, ..Default::default() };
        for (beta, v) in r {
            let w = v.weight;
            if w > self.band.1 {
                return Err(KuranishiError::WeightBandExceeded { order: target, weight: w, band_end: self.band.1 });
            }
            let cx = &self.cx;
            let hd = self.homotopy.entry(w).or_insert_with(|| cx.homotopy_data(2, w));
            let split = hd.split(&v).map_err(|e| match e {
                TangentError::NotACocycle { .. } => {
                    KuranishiError::NotACocycle { order: target, monomial: beta.format_with(&|id| format!("v{id}")) }
                }
                other => KuranishiError::Tangent(other),
            })?;
            let identity_holds = split.proj.sum(&self.cx.d(&split.h)) == v;
            let offset = self.t2_offsets.get(&w).copied();
            for (a, c) in split.coefficients.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let b = offset.expect("T^2 classes exist at this weight") + a;
                self.kuranishi.components[b].add_term(beta.clone(), c.clone());
                summary.obstruction_terms += 1;
            }
            let correction = split.h.scale(&-Rational::one());
            if !correction.is_zero() {
                self.perturbation.delta.insert(beta.clone(), correction);
                summary.corrections += 1;
            }
            self.log.push(LiftRecord {
                order: target,
                monomial: beta,
                weight: w,
                defect: v,
                proj: split.proj,
                h: split.h,
                identity_holds,
            });
        }
        self.perturbation.order = target;
        Ok(summary)
    }

    fn t2_element(&mut self, b: usize) -> TangentElement {
        let (w, start) = self
            .t2_offsets
            .iter()
            .filter(|(_, s)| **s <= b)
            .map(|(w, s)| (*w, *s))
            .last()
            .expect("index within T^2");
        let cx = &self.cx;
        let hd = self.homotopy.entry(w).or_insert_with(|| cx.homotopy_data(2, w));
        hd.representatives()[b - start].clone()
    }

    pub fn t2_dim(&self) -> usize {
        self.t2_dim
    }
}

/// `(s + delta)(e)` for each level-1 generator, as polynomials in the
/// ambient variables and the parameters.
pub fn family(r: &Resolvent, perturbation: &Perturbation) -> Vec<Poly> {
    r.level(1)
        .map(|g| {
            let mut f = r.diff(g.id()).clone();
            for (m, d) in &perturbation.delta {
                if let Some(v) = d.value(g.id()) {
                    f = &f + &v.mul_monomial_left(&Rational::one(), m);
                }
            }
            f
        })
        .collect()
}

pub fn semiuniversal(ideal: &InputIdeal, depth: u32, weight_bound: i64, order: u32) -> Result<(Resolvent, DeformationResult), KuranishiError> {
    if order < 1 {
        return Err(KuranishiError::OrderTooSmall);
    }
    let r = build_resolvent(ideal, depth, weight_bound)?;
    let t1 = tangent_cohomology(&r, 1, weight_bound)?;
    let t2 = tangent_cohomology(&r, 2, weight_bound)?;
    let mut lifter = Lifter::new(&r, &t1, &t2)?;
    let mut quiet = Vec::new();
    for _ in 1..order {
        let s = lifter.lift_step()?;
        quiet.push((s.order, s.corrections == 0 && s.obstruction_terms == 0));
    }
    let stabilized_at = quiet.windows(2).find(|w| w[0].1 && w[1].1).map(|w| w[1].0);
    let mut caveats = vec![
        Caveat::Truncation { depth, weight_bound },
        Caveat::WeightBand { low: t1.band.0, high: t1.band.1 },
    ];
    let last_changed = order == 1 && !t1.pieces.is_empty() || quiet.last().is_some_and(|(_, q)| !q);
    if stabilized_at.is_none() && last_changed {
        caveats.push(Caveat::OrderTooSmall { order });
    }
    if ideal.is_approximate() {
        caveats.push(Caveat::ApproximateInput);
    }
    let family = family(&r, &lifter.perturbation);
    let result = DeformationResult {
        parameters: lifter.params.clone(),
        t1,
        t2,
        family,
        kuranishi: lifter.kuranishi.clone(),
        perturbation: lifter.perturbation.clone(),
        order,
        stabilized_at,
        caveats,
        lift_log: std::mem::take(&mut lifter.log),
    };
    Ok((r, result))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessWitness {
    pub generator: String,
    pub monomial: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessReport {
    pub order: u32,
    pub generators_checked: usize,
    pub witness: Option<FlatnessWitness>,
}

impl FlatnessReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks `(s + delta)^2 = 0` on every generator modulo parameter order
/// `> order` and the ideal of the Kuranishi components.
pub fn verify_flatness(
    perturbation: &Perturbation,
    kuranishi: &KuranishiMap,
    params: &[Parameter],
    r: &Resolvent,
    order: u32,
) -> FlatnessReport {
    let vars: Vec<Var> = params.iter().map(|p| p.var).collect();
    let cx = DerivationComplex::new(r);
    let square = maurer_cartan(&cx, &perturbation.delta, order);
    let ech = base_span(kuranishi, &vars, 0, order);
    let mut generators_checked = 0;
    for g in r.generators() {
        generators_checked += 1;
        // coefficient series of each ambient monomial
        let mut series: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, t) in &square {
            if let Some(v) = t.value(g.id()) {
                for (x, c) in v.terms() {
                    series.entry(x.clone()).or_default().add_term(m.clone(), c.clone());
                }
            }
        }
        for p in series.values() {
            let rest = ech.reduce(p);
            let lowest = rest.terms().next().map(|(m, _)| m.clone());
            if let Some(m) = lowest {
                let name = |id: u32| {
                    params
                        .iter()
                        .find(|p| p.var.id == id)
                        .map(|p| p.name.clone())
                        .unwrap_or_else(|| r.name(id))
                };
                return FlatnessReport {
                    order,
                    generators_checked,
                    witness: Some(FlatnessWitness { generator: r.name(g.id()), monomial: m.format_with(&name) }),
                };
            }
        }
    }
    FlatnessReport { order, generators_checked, witness: None }
}

/// Irreducible linear components of the base, when every equation splits as
/// a common linear factor times a linear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseComponent {
    /// Linear equations cutting out the component.
    pub equations: Vec<Poly>,
    pub dim: usize,
}

fn linear_form(v: &SparseVec, vars: &[Var]) -> Poly {
    Poly::from_terms(v.iter().map(|(i, c)| (Monomial::var(vars[*i]), c.clone())))
}

/// Symmetric coefficient matrix of a quadratic form, as columns.
fn quadric_columns(q: &Poly, vars: &[Var]) -> Option<Vec<SparseVec>> {
    let n = vars.len();
    let mut cols = vec![SparseVec::new(); n];
    let half = Rational::new(1.into(), 2.into());
    for (m, c) in q.terms() {
        if m.degree() != 2 {
            return None;
        }
        let idx: Vec<usize> = m
            .factors()
            .iter()
            .flat_map(|(v, e)| std::iter::repeat_n(vars.iter().position(|x| x == v), *e as usize))
            .collect::<Option<Vec<_>>>()?;
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            cols[i].insert(i, c.clone());
        } else {
            cols[j].insert(i, c * &half);
            cols[i].insert(j, c * &half);
        }
    }
    Some(cols)
}

fn intersect(rows: usize, a: &[SparseVec], b: &[SparseVec]) -> Vec<SparseVec> {
    let mut cols: Vec<SparseVec> = a.to_vec();
    cols.extend(b.iter().map(|v| crate::linalg::scale(v, &-Rational::one())));
    let kernel = ColumnReduction::from_columns(rows, cols).kernel_basis();
    let basis = kernel
        .vectors
        .iter()
        .map(|k| {
            let mut v = SparseVec::new();
            for (i, c) in k.range(..a.len()) {
                crate::linalg::axpy(&mut v, c, &a[*i]);
            }
            v
        })
        .filter(|v| !v.is_empty())
        .collect::<Vec<_>>();
    let red = ColumnReduction::from_columns(rows, basis.clone());
    red.pivots().iter().map(|p| basis[*p].clone()).collect()
}

/// Decomposes the zero locus of purely quadratic equations of the form
/// `m * l_b` with a common linear `m` into `{m = 0}` and `{l = 0}`. Returns
/// `None` for any other shape.
pub fn base_components(kuranishi: &KuranishiMap, params: &[Parameter]) -> Option<Vec<BaseComponent>> {
    let vars: Vec<Var> = params.iter().map(|p| p.var).collect();
    let n = vars.len();
    let eqs = kuranishi.equations();
    if eqs.is_empty() {
        return Some(vec![BaseComponent { equations: Vec::new(), dim: n }]);
    }
    let mut common: Option<Vec<SparseVec>> = None;
    for q in &eqs {
        let cols = quadric_columns(q, &vars)?;
        let image = ColumnReduction::from_columns(n, cols).image_basis().vectors;
        common = Some(match common {
            None => image,
            Some(c) => intersect(n, &c, &image),
        });
    }
    let common = common?;
    if common.len() != 1 {
        return None;
    }
    let mut m = common[0].clone();
    let lead = m.values().next().cloned()?;
    m = crate::linalg::scale(&m, &(Rational::one() / lead));
    let m_poly = linear_form(&m, &vars);
    // solve m * l = q for the linear form l
    let products: Vec<Poly> = vars.iter().map(|v| crate::algebra::mul(&m_poly, &Poly::var(*v))).collect();
    let monos: Vec<Monomial> = {
        let mut all: Vec<Monomial> = products.iter().chain(eqs.iter()).flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
        all.sort();
        all.dedup();
        all
    };
    let to_vec = |p: &Poly| -> SparseVec {
        p.terms().map(|(mono, c)| (monos.binary_search(mono).expect("collected"), c.clone())).collect()
    };
    let red = ColumnReduction::from_columns(monos.len(), products.iter().map(to_vec).collect());
    let mut factors = Vec::new();
    for q in &eqs {
        factors.push(red.solve(&to_vec(q)).ok()?);
    }
    let rank = ColumnReduction::from_columns(n, factors.clone()).rank();
    let independent: Vec<SparseVec> = {
        let red = ColumnReduction::from_columns(n, factors.clone());
        red.pivots().iter().map(|p| factors[*p].clone()).collect()
    };
    let mut components = vec![BaseComponent { equations: vec![m_poly], dim: n - 1 }];
    let contained = ColumnReduction::from_columns(n, factors).in_image(&m);
    if !contained {
        components.push(BaseComponent {
            equations: independent.iter().map(|v| linear_form(v, &vars)).collect(),
            dim: n - rank,
        });
    }
    Some(components)
}
