//! The tangent complex `Der(R)` with differential `theta -> [s, theta]`.
//!
//! Derivations are stored by their values on generators. The bigraded piece
//! `Der^j_w` has basis `m * d/dx_i` over generators `x_i` and monomials `m` of
//! degree `hdeg(x_i) + j` and weight `weight(x_i) + w`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{apply_derivation, mul, Monomial, Poly, Rational};
use crate::linalg::{ColumnReduction, SparseVec};
use crate::resolvent::{BigradedPiece, Resolvent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TangentError {
    #[error("derivation of degree {hdeg} and weight {weight} is not a cocycle")]
    NotACocycle { hdeg: i32, weight: i64 },
    #[error("derivation does not lie in the piece of degree {hdeg} and weight {weight}")]
    NotInPiece { hdeg: i32, weight: i64 },
    #[error("weight bound {weight_bound} leaves an empty derivation weight band")]
    WeightBoundTooSmall { weight_bound: i64 },
    #[error("element is not a coboundary")]
    NotACoboundary,
}

/// A derivation of `R`, given by its values on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentElement {
    values: BTreeMap<u32, Poly>,
    pub hdeg: i32,
    pub weight: i64,
}

impl TangentElement {
    pub fn zero(hdeg: i32, weight: i64) -> Self {
        TangentElement { values: BTreeMap::new(), hdeg, weight }
    }

    pub fn from_values(hdeg: i32, weight: i64, values: impl IntoIterator<Item = (u32, Poly)>) -> Self {
        let mut t = TangentElement::zero(hdeg, weight);
        for (k, v) in values {
            t.add_value(k, &v);
        }
        t
    }

    /// `value * d/dx` for a single generator.
    pub fn partial(r: &Resolvent, id: u32, value: Poly) -> Self {
        let g = r.generator(id);
        let hdeg = value.hdeg().unwrap_or(0) - g.hdeg();
        let weight = value.weight().unwrap_or(0) - g.weight();
        TangentElement::from_values(hdeg, weight, [(id, value)])
    }

    /// The resolvent differential itself.
    pub fn differential_of(r: &Resolvent) -> Self {
        TangentElement::from_values(
            1,
            0,
            r.generators().iter().map(|g| (g.id(), r.diff(g.id()).clone())).collect::<Vec<_>>(),
        )
    }

    pub fn value(&self, id: u32) -> Option<&Poly> {
        self.values.get(&id)
    }

    pub fn values(&self) -> &BTreeMap<u32, Poly> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.hdeg.rem_euclid(2) == 1
    }

    pub fn add_value(&mut self, id: u32, v: &Poly) {
        if v.is_zero() {
            return;
        }
        let entry = self.values.entry(id).or_default();
        *entry = &*entry + v;
        if entry.is_zero() {
            self.values.remove(&id);
        }
    }

    pub fn add_scaled(&mut self, other: &TangentElement, c: &Rational) {
        for (k, v) in &other.values {
            self.add_value(*k, &v.scale(c));
        }
    }

    pub fn scale(&self, c: &Rational) -> TangentElement {
        let mut out = TangentElement::zero(self.hdeg, self.weight);
        out.add_scaled(self, c);
        out
    }

    pub fn sum(&self, other: &TangentElement) -> TangentElement {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn difference(&self, other: &TangentElement) -> TangentElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    /// Extension to `p` by the graded Leibniz rule.
    pub fn apply(&self, p: &Poly) -> Poly {
        apply_derivation(|id| self.values.get(&id), p)
    }

    pub fn format_with<F: Fn(u32) -> String>(&self, name: &F) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.values
            .iter()
            .map(|(k, v)| format!("({})*d/d{}", v.format_with(name), name(*k)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for TangentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&|id| format!("v{id}")))
    }
}

/// Graded commutator `[a, b] = a b - (-1)^{|a||b|} b a`, on generators.
pub fn bracket(a: &TangentElement, b: &TangentElement) -> TangentElement {
    let sign = if a.is_odd() && b.is_odd() { Rational::one() } else { -Rational::one() };
    let mut out = TangentElement::zero(a.hdeg + b.hdeg, a.weight + b.weight);
    let keys: std::collections::BTreeSet<u32> = a.values.keys().chain(b.values.keys()).copied().collect();
    for k in keys {
        let mut v = Poly::zero();
        if let Some(bx) = b.values.get(&k) {
            v = &v + &a.apply(bx);
        }
        if let Some(ax) = a.values.get(&k) {
            v.add_scaled(&b.apply(ax), &sign);
        }
        out.add_value(k, &v);
    }
    out
}

/// `theta -> [s, theta]`.
pub fn differential(r: &Resolvent, theta: &TangentElement) -> TangentElement {
    bracket(&TangentElement::differential_of(r), theta)
}

/// Ordered basis of `Der^hdeg_weight`.
#[derive(Clone, Debug)]
pub struct DerPiece {
    pub hdeg: i32,
    pub weight: i64,
    basis: Vec<(u32, Monomial)>,
    index: HashMap<(u32, Monomial), usize>,
}

impl DerPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(u32, Monomial)] {
        &self.basis
    }

    pub fn coords(&self, t: &TangentElement) -> Option<SparseVec> {
        let mut v = SparseVec::new();
        for (k, p) in &t.values {
            for (m, c) in p.terms() {
                v.insert(*self.index.get(&(*k, m.clone()))?, c.clone());
            }
        }
        Some(v)
    }

    pub fn element(&self, v: &SparseVec) -> TangentElement {
        let mut t = TangentElement::zero(self.hdeg, self.weight);
        for (k, c) in v {
            let (id, m) = &self.basis[*k];
            t.add_value(*id, &Poly::term(c.clone(), m.clone()));
        }
        t
    }
}

/// Precomputed data for evaluating `[s, -]` quickly on basis elements.
pub struct DerivationComplex<'a> {
    r: &'a Resolvent,
    /// For each generator `x_i`: the nonzero `(k, d s(x_k) / d x_i)`.
    partials: Vec<Vec<(u32, Poly)>>,
    pieces: std::cell::RefCell<HashMap<(i32, i64), std::rc::Rc<BigradedPiece>>>,
}

impl<'a> DerivationComplex<'a> {
    pub fn new(r: &'a Resolvent) -> Self {
        let n = r.generators().len();
        let mut partials = vec![Vec::new(); n];
        for g in r.generators() {
            let sk = r.diff(g.id());
            for v in sk.vars() {
                let d = sk.derive(v);
                if !d.is_zero() {
                    partials[v.id as usize].push((g.id(), d));
                }
            }
        }
        DerivationComplex { r, partials, pieces: Default::default() }
    }

    pub fn resolvent(&self) -> &Resolvent {
        self.r
    }

    fn algebra_piece(&self, hdeg: i32, weight: i64) -> std::rc::Rc<BigradedPiece> {
        self.pieces
            .borrow_mut()
            .entry((hdeg, weight))
            .or_insert_with(|| std::rc::Rc::new(BigradedPiece::new(&self.r.vars(), hdeg, weight)))
            .clone()
    }

    pub fn piece(&self, hdeg: i32, weight: i64) -> DerPiece {
        let mut basis = Vec::new();
        for g in self.r.generators() {
            let p = self.algebra_piece(g.hdeg() + hdeg, g.weight() + weight);
            basis.extend(p.basis().iter().map(|m| (g.id(), m.clone())));
        }
        let index = basis.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
        DerPiece { hdeg, weight, basis, index }
    }

    /// `[s, theta] = s o theta - (-1)^{|theta|} theta o s`.
    pub fn d(&self, theta: &TangentElement) -> TangentElement {
        let sign = if theta.is_odd() { Rational::one() } else { -Rational::one() };
        let mut out = TangentElement::zero(theta.hdeg + 1, theta.weight);
        for (k, v) in &theta.values {
            out.add_value(*k, &self.r.apply(v));
            for (target, partial) in &self.partials[*k as usize] {
                out.add_value(*target, &mul(v, partial).scale(&sign));
            }
        }
        out
    }

    /// Columns of `[s, -]: from -> to`.
    pub fn matrix(&self, from: &DerPiece, to: &DerPiece) -> Vec<SparseVec> {
        from.basis
            .iter()
            .map(|(id, m)| {
                let theta = TangentElement::from_values(
                    from.hdeg,
                    from.weight,
                    [(*id, Poly::term(Rational::one(), m.clone()))],
                );
                to.coords(&self.d(&theta)).expect("[s,-] maps Der^j_w into Der^{j+1}_w")
            })
            .collect()
    }

    pub fn homotopy_data(&self, hdeg: i32, weight: i64) -> HomotopyData {
        let below = self.piece(hdeg - 1, weight);
        let here = self.piece(hdeg, weight);
        let above = self.piece(hdeg + 1, weight);
        let d_here_columns = self.matrix(&here, &above);
        let d_here = ColumnReduction::from_columns(above.dim(), d_here_columns.clone());
        let d_below = ColumnReduction::from_columns(here.dim(), self.matrix(&below, &here));
        let boundaries = d_below.image_basis();
        let cycles = d_here.kernel_basis();
        let reps = crate::linalg::quotient_basis(&boundaries, &cycles)
            .expect("[s,-] squares to zero, so boundaries are cycles")
            .vectors;
        let mut split_columns = boundaries.vectors.clone();
        split_columns.extend(reps.iter().cloned());
        let split = ColumnReduction::from_columns(here.dim(), split_columns);
        HomotopyData {
            hdeg,
            weight,
            n_boundaries: boundaries.dim(),
            below,
            here,
            above,
            d_here,
            d_here_columns,
            d_below,
            reps,
            split,
        }
    }
}

/// Splitting of one piece `Der^j_w`: chosen cohomology representatives, the
/// projection of cocycles onto them and a partial inverse of `[s, -]`.
pub struct HomotopyData {
    pub hdeg: i32,
    pub weight: i64,
    n_boundaries: usize,
    below: DerPiece,
    here: DerPiece,
    above: DerPiece,
    d_here: ColumnReduction,
    d_here_columns: Vec<SparseVec>,
    d_below: ColumnReduction,
    reps: Vec<SparseVec>,
    split: ColumnReduction,
}

/// Decomposition `v = proj(v) + [s, h(v - proj(v))]` of a cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleSplit {
    /// Coefficients of `proj(v)` on the representatives.
    pub coefficients: Vec<Rational>,
    pub proj: TangentElement,
    pub h: TangentElement,
}

impl HomotopyData {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> Vec<TangentElement> {
        self.reps.iter().map(|v| self.here.element(v)).collect()
    }

    pub fn piece(&self) -> &DerPiece {
        &self.here
    }

    pub fn is_cocycle(&self, v: &TangentElement) -> Result<bool, TangentError> {
        let c = self.coords(v)?;
        let mut img = SparseVec::new();
        for (k, x) in &c {
            crate::linalg::axpy(&mut img, x, &self.d_here_columns[*k]);
        }
        Ok(img.is_empty())
    }

    /// Dimension of the cocycle space.
    pub fn cocycle_dim(&self) -> usize {
        self.here.dim() - self.d_here.rank()
    }

    fn coords(&self, v: &TangentElement) -> Result<SparseVec, TangentError> {
        if v.is_zero() {
            return Ok(SparseVec::new());
        }
        if v.hdeg != self.hdeg || v.weight != self.weight {
            return Err(TangentError::NotInPiece { hdeg: self.hdeg, weight: self.weight });
        }
        self.here.coords(v).ok_or(TangentError::NotInPiece { hdeg: self.hdeg, weight: self.weight })
    }

    /// Solves `[s, x] = b` with the deterministic pivot choice.
    pub fn h(&self, b: &TangentElement) -> Result<TangentElement, TangentError> {
        let c = self.coords(b)?;
        let x = self.d_below.solve(&c).map_err(|_| TangentError::NotACoboundary)?;
        Ok(self.below.element(&x))
    }

    pub fn split(&self, v: &TangentElement) -> Result<CocycleSplit, TangentError> {
        if !self.is_cocycle(v)? {
            return Err(TangentError::NotACocycle { hdeg: self.hdeg, weight: self.weight });
        }
        let c = self.coords(v)?;
        let sol = self.split.solve(&c).map_err(|_| TangentError::NotACocycle { hdeg: self.hdeg, weight: self.weight })?;
        let coefficients: Vec<Rational> = (0..self.reps.len())
            .map(|a| sol.get(&(self.n_boundaries + a)).cloned().unwrap_or_else(Rational::zero))
            .collect();
        let mut proj = SparseVec::new();
        for (a, x) in coefficients.iter().enumerate() {
            crate::linalg::axpy(&mut proj, x, &self.reps[a]);
        }
        let proj = self.here.element(&proj);
        let h = self.h(&v.difference(&proj))?;
        Ok(CocycleSplit { coefficients, proj, h })
    }

    pub fn above(&self) -> &DerPiece {
        &self.above
    }
}

/// Cohomology representatives of `Der^j` across the scanned weight band.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentBasis {
    pub hdeg: i32,
    /// Derivation weights scanned, inclusive.
    pub band: (i64, i64),
    pub pieces: Vec<(i64, Vec<TangentElement>)>,
}

impl TangentBasis {
    pub fn dim(&self) -> usize {
        self.pieces.iter().map(|(_, v)| v.len()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &TangentElement)> {
        self.pieces.iter().flat_map(|(w, v)| v.iter().map(move |t| (*w, t)))
    }

    pub fn dims_by_weight(&self) -> BTreeMap<i64, usize> {
        self.pieces.iter().map(|(w, v)| (*w, v.len())).collect()
    }
}

/// Derivation weights whose values all land in weights `<= weight_bound`:
/// from `-max generator weight` to `weight_bound - max generator weight`.
pub fn weight_band(r: &Resolvent, weight_bound: i64) -> Result<(i64, i64), TangentError> {
    let top = r.max_weight();
    let band = (-top, weight_bound - top);
    if band.1 < band.0 {
        return Err(TangentError::WeightBoundTooSmall { weight_bound });
    }
    Ok(band)
}

pub fn tangent_cohomology(r: &Resolvent, j: i32, weight_bound: i64) -> Result<TangentBasis, TangentError> {
    let band = weight_band(r, weight_bound)?;
    let cx = DerivationComplex::new(r);
    let pieces = (band.0..=band.1)
        .filter_map(|w| {
            let reps = cx.homotopy_data(j, w).representatives();
            (!reps.is_empty()).then_some((w, reps))
        })
        .collect();
    Ok(TangentBasis { hdeg: j, band, pieces })
}

pub fn homotopy_data(r: &Resolvent, j: i32, w: i64) -> HomotopyData {
    DerivationComplex::new(r).homotopy_data(j, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio, Generator, Var};
    use crate::resolvent::{build_resolvent, InputIdeal};

    fn pow(v: Var, e: u32) -> Poly {
        Poly::term(rat(1), Monomial::from_product(&[(v, e)]).unwrap().1)
    }

    fn x_squared() -> Resolvent {
        let x = Generator::new(0, "x", 0, 1, 0);
        let ideal = InputIdeal::new(vec![x.clone()], vec![pow(x.var, 2)]).unwrap();
        build_resolvent(&ideal, 2, 2).unwrap()
    }

    fn cusp() -> Resolvent {
        let x = Generator::new(0, "x", 0, 2, 0);
        let y = Generator::new(1, "y", 0, 3, 0);
        let f = &pow(x.var, 3) + &pow(y.var, 2);
        let ideal = InputIdeal::new(vec![x, y], vec![f]).unwrap();
        build_resolvent(&ideal, 2, 6).unwrap()
    }

    #[test]
    fn apply_examples() {
        let x = Var::new(0, 0, 1);
        let e = Var::new(1, -1, 2);
        let f = Var::new(2, -1, 2);
        let d_e = TangentElement::from_values(1, -2, [(1, Poly::one())]);
        assert_eq!(d_e.apply(&mul(&Poly::var(x), &Poly::var(e))), Poly::var(x));
        let x_dx = TangentElement::from_values(0, 0, [(0, Poly::var(x))]);
        assert_eq!(x_dx.apply(&pow(x, 2)), pow(x, 2).scale(&rat(2)));
        assert_eq!(d_e.apply(&mul(&Poly::var(e), &Poly::var(f))), Poly::var(f));
    }

    #[test]
    fn bracket_examples() {
        let x = Var::new(0, 0, 1);
        let dx = TangentElement::from_values(0, -1, [(0, Poly::one())]);
        let x_dx = TangentElement::from_values(0, 0, [(0, Poly::var(x))]);
        assert_eq!(bracket(&dx, &x_dx), dx);
        assert!(bracket(&x_dx, &x_dx).is_zero());
        let r = x_squared();
        let s = TangentElement::differential_of(&r);
        assert!(bracket(&s, &s).is_zero());
    }

    #[test]
    fn differential_examples() {
        let r = x_squared();
        let d_e = TangentElement::partial(&r, 1, Poly::one());
        assert!(differential(&r, &d_e).is_zero());
        let d_x = TangentElement::partial(&r, 0, Poly::one());
        let img = differential(&r, &d_x);
        assert_eq!(img.value(1), Some(&Poly::var(r.generator(0).var).scale(&rat(-2))));
        assert_eq!(img.values().len(), 1);
        let s = TangentElement::differential_of(&r);
        assert!(differential(&r, &s).is_zero());
        let cx = DerivationComplex::new(&r);
        assert_eq!(cx.d(&d_x), img);
    }

    #[test]
    fn x_squared_cohomology() {
        let r = x_squared();
        let t1 = tangent_cohomology(&r, 1, 2).unwrap();
        assert_eq!(t1.dim(), 1);
        assert_eq!(t1.pieces[0].1[0], TangentElement::partial(&r, 1, Poly::one()));
        assert_eq!(tangent_cohomology(&r, 2, 2).unwrap().dim(), 0);
    }

    #[test]
    fn cusp_cohomology() {
        let r = cusp();
        let t1 = tangent_cohomology(&r, 1, 6).unwrap();
        assert_eq!(t1.dim(), 2);
        let reps: Vec<_> = t1.iter().map(|(_, t)| t.clone()).collect();
        assert_eq!(reps[0], TangentElement::partial(&r, 2, Poly::one()));
        assert_eq!(reps[1], TangentElement::partial(&r, 2, Poly::var(r.generator(0).var)));
        assert_eq!(tangent_cohomology(&r, 2, 6).unwrap().dim(), 0);
    }

    #[test]
    fn a1_surface_has_one_parameter() {
        let x = Generator::new(0, "x", 0, 1, 0);
        let y = Generator::new(1, "y", 0, 1, 0);
        let ideal = InputIdeal::new(vec![x.clone(), y.clone()], vec![&pow(x.var, 2) + &pow(y.var, 2)]).unwrap();
        let r = build_resolvent(&ideal, 2, ideal.default_weight_bound(2)).unwrap();
        assert_eq!(tangent_cohomology(&r, 1, r.weight_bound()).unwrap().dim(), 1);
    }

    #[test]
    fn homotopy_examples() {
        let r = x_squared();
        let x = r.generator(0).var;
        // representative splits to itself
        let hd = homotopy_data(&r, 1, -2);
        let rep = hd.representatives()[0].clone();
        let split = hd.split(&rep).unwrap();
        assert_eq!(split.proj, rep);
        assert!(split.h.is_zero());

        // x d/de = [s, -1/2 d/dx]
        let hd = homotopy_data(&r, 1, -1);
        let v = TangentElement::partial(&r, 1, Poly::var(x));
        let split = hd.split(&v).unwrap();
        assert!(split.proj.is_zero());
        assert_eq!(split.h, TangentElement::partial(&r, 0, Poly::one()).scale(&ratio(-1, 2)));
        assert_eq!(differential(&r, &split.h), v);

        // coboundary of d/dx
        let b = differential(&r, &TangentElement::partial(&r, 0, Poly::one()));
        let split = hd.split(&b).unwrap();
        assert!(split.proj.is_zero());
        assert_eq!(differential(&r, &split.h), b);
    }

    #[test]
    fn non_cocycle_rejected() {
        let r = x_squared();
        let hd = homotopy_data(&r, 0, -1);
        let d_x = TangentElement::partial(&r, 0, Poly::one());
        assert_eq!(hd.split(&d_x), Err(TangentError::NotACocycle { hdeg: 0, weight: -1 }));
    }
}
