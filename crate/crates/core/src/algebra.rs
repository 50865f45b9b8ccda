//! Free graded-commutative polynomial algebras over the rationals.
//!
//! A variable carries a homological degree `hdeg <= 0` and a positive
//! weight. Variables of odd `hdeg` anticommute and square to zero; all
//! signs come from sorting factors into ascending id order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p/q` with `q > 0`, always including the denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("substitution for variable {var} changes parity; odd square would not vanish")]
    OddSquareViolation { var: u32 },
    #[error("substituted value for variable {var} has homological degree {found}, expected {expected}")]
    DegreeMismatch { var: u32, expected: i32, found: i32 },
}

/// A free algebra generator as seen by polynomial arithmetic.
///
/// Equality, ordering and hashing use only `id`; two `Var`s with the same id
/// must carry the same degree data.
#[derive(Clone, Copy, Debug)]
pub struct Var {
    pub id: u32,
    pub hdeg: i32,
    pub weight: i64,
}

impl Var {
    pub fn new(id: u32, hdeg: i32, weight: i64) -> Self {
        Var { id, hdeg, weight }
    }

    pub fn is_odd(&self) -> bool {
        self.hdeg.rem_euclid(2) == 1
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Var {}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.id.cmp(&other.id)
    }
}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

/// A named generator of a resolvent (or a deformation parameter).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub var: Var,
    pub name: String,
    /// Resolvent stage; 0 for ambient coordinates.
    pub level: u32,
}

impl Generator {
    pub fn new(id: u32, name: impl Into<String>, hdeg: i32, weight: i64, level: u32) -> Self {
        Generator { var: Var::new(id, hdeg, weight), name: name.into(), level }
    }

    pub fn id(&self) -> u32 {
        self.var.id
    }

    pub fn hdeg(&self) -> i32 {
        self.var.hdeg
    }

    pub fn weight(&self) -> i64 {
        self.var.weight
    }
}

/// A product of generators with exponents, kept sorted by generator id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Var, u32)>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| {
                for (a, b) in self.factors.iter().zip(&other.factors) {
                    let c = a.0.id.cmp(&b.0.id).then(b.1.cmp(&a.1));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                self.factors.len().cmp(&other.factors.len())
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    /// Builds a monomial from an ordered product of factors, returning the
    /// Koszul sign of reordering, or `None` if an odd variable repeats.
    pub fn from_product(factors: &[(Var, u32)]) -> Option<(i32, Monomial)> {
        let mut acc = (1, Monomial::one());
        for &(v, e) in factors {
            if e == 0 {
                continue;
            }
            if v.is_odd() && e > 1 {
                return None;
            }
            let (s, m) = acc.1.mul(&Monomial { factors: vec![(v, e)] })?;
            acc = (acc.0 * s, m);
        }
        Some(acc)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total number of factors counted with multiplicity.
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|f| f.1).sum()
    }

    pub fn hdeg(&self) -> i32 {
        self.factors.iter().map(|(v, e)| v.hdeg * *e as i32).sum()
    }

    pub fn weight(&self) -> i64 {
        self.factors.iter().map(|(v, e)| v.weight * *e as i64).sum()
    }

    pub fn is_odd(&self) -> bool {
        self.hdeg().rem_euclid(2) == 1
    }

    pub fn exponent(&self, id: u32) -> u32 {
        self.factors.iter().find(|f| f.0.id == id).map_or(0, |f| f.1)
    }

    pub fn contains(&self, id: u32) -> bool {
        self.exponent(id) > 0
    }

    /// Graded-commutative product with Koszul sign; `None` if it vanishes.
    pub fn mul(&self, other: &Monomial) -> Option<(i32, Monomial)> {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let mut sign = 1;
        let (a, b) = (&self.factors, &other.factors);
        // odd factors of `a` not yet emitted; each odd factor of `b` emitted
        // before them passes across all of them.
        let mut odd_remaining_a = a.iter().filter(|f| f.0.is_odd()).count();
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0.id < b[j].0.id);
            let take_b = i >= a.len() || (j < b.len() && b[j].0.id < a[i].0.id);
            if take_a {
                if a[i].0.is_odd() {
                    odd_remaining_a -= 1;
                }
                out.push(a[i]);
                i += 1;
            } else if take_b {
                if b[j].0.is_odd() && odd_remaining_a % 2 == 1 {
                    sign = -sign;
                }
                out.push(b[j]);
                j += 1;
            } else {
                if a[i].0.is_odd() {
                    return None;
                }
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
        Some((sign, Monomial { factors: out }))
    }

    /// Left partial derivative: returns (coefficient, quotient monomial).
    pub fn derive(&self, v: Var) -> Option<(i64, Monomial)> {
        let mut odd_before = 0u32;
        for (k, &(w, e)) in self.factors.iter().enumerate() {
            if w.id == v.id {
                let mut rest = self.factors.clone();
                if e == 1 {
                    rest.remove(k);
                } else {
                    rest[k].1 -= 1;
                }
                let sign = if v.is_odd() && odd_before % 2 == 1 { -1 } else { 1 };
                return Some((sign * e as i64, Monomial { factors: rest }));
            }
            if w.is_odd() {
                odd_before += e;
            }
        }
        None
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.factors.iter().map(|f| f.0)
    }

    pub fn format_with<F: Fn(u32) -> String>(&self, name: &F) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        self.factors
            .iter()
            .map(|(v, e)| if *e == 1 { name(v.id) } else { format!("{}^{}", name(v.id), e) })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// An element of the free graded-commutative algebra: a finite sum of
/// monomials with nonzero rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), d * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    /// Multiplies by a monomial on the left.
    pub fn mul_monomial_left(&self, c: &Rational, m: &Monomial) -> Poly {
        let mut out = Poly::zero();
        for (n, d) in &self.terms {
            if let Some((s, p)) = m.mul(n) {
                out.add_term(p, signed(d * c, s));
            }
        }
        out
    }

    /// Homological degree, if all terms share one.
    pub fn hdeg(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(Monomial::hdeg);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Weight, if all terms share one.
    pub fn weight(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(Monomial::weight);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_weight_homogeneous(&self) -> bool {
        self.is_zero() || self.weight().is_some()
    }

    /// Splits into bidegree components (hdeg, weight).
    pub fn homogeneous_components(&self) -> BTreeMap<(i32, i64), Poly> {
        let mut out: BTreeMap<(i32, i64), Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry((m.hdeg(), m.weight())).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    /// Graded partial derivative with respect to `v`, acting from the left.
    pub fn derive(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some((k, q)) = m.derive(v) {
                out.add_term(q, c * rat(k));
            }
        }
        out
    }

    /// Extends `assignment` to an algebra homomorphism; unassigned variables
    /// are fixed. With `allow_shift`, values may change the homological
    /// degree as long as they keep its parity.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<Var, Poly>,
        allow_shift: bool,
    ) -> Result<Poly, AlgebraError> {
        for (v, val) in assignment {
            if val.is_zero() {
                continue;
            }
            let found = match val.hdeg() {
                Some(d) => d,
                None => {
                    // mixed degrees: accept only if parity is uniform
                    let parities: Vec<bool> = val.terms.keys().map(Monomial::is_odd).collect();
                    if !allow_shift || parities.iter().any(|&p| p != v.is_odd()) {
                        return Err(AlgebraError::OddSquareViolation { var: v.id });
                    }
                    continue;
                }
            };
            if found != v.hdeg {
                if !allow_shift {
                    return Err(AlgebraError::DegreeMismatch { var: v.id, expected: v.hdeg, found });
                }
                if found.rem_euclid(2) != v.hdeg.rem_euclid(2) {
                    return Err(AlgebraError::OddSquareViolation { var: v.id });
                }
            }
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for &(v, e) in m.factors() {
                let image = match assignment.get(&v) {
                    Some(p) => p.clone(),
                    None => Poly::var(v),
                };
                for _ in 0..e {
                    acc = &acc * &image;
                }
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Terms of total weight exactly `w`.
    pub fn weight_component(&self, w: i64) -> Poly {
        self.filter(|m| m.weight() == w)
    }

    /// Drops terms of total degree greater than `n` in the even degree-0 variables.
    pub fn jet_truncate(&self, n: u32) -> Poly {
        self.filter(|m| m.factors().iter().filter(|f| f.0.hdeg == 0).map(|f| f.1).sum::<u32>() <= n)
    }

    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Poly {
        Poly {
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Lowest total weight among the terms.
    pub fn min_weight(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::weight).min()
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect()
    }

    pub fn format_with<F: Fn(u32) -> String>(&self, name: &F) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    s.push_str(&a.to_string());
                    s.push('*');
                }
                s.push_str(&m.format_with(name));
            }
        }
        s
    }
}

fn signed(c: Rational, sign: i32) -> Rational {
    if sign < 0 {
        -c
    } else {
        c
    }
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            if let Some((s, m)) = ma.mul(mb) {
                out.add_term(m, signed(ca * cb, s));
            }
        }
    }
    out
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        mul(self, rhs)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&|id| format!("v{id}")))
    }
}

/// Applies the derivation with generator values `values(id)`:
/// `theta(p) = sum_i theta(x_i) * d_i(p)` with left partial derivatives.
pub fn apply_derivation<'a, F>(values: F, p: &Poly) -> Poly
where
    F: Fn(u32) -> Option<&'a Poly>,
{
    let mut out = Poly::zero();
    for (m, c) in &p.terms {
        for v in m.vars() {
            let Some(val) = values(v.id) else { continue };
            if val.is_zero() {
                continue;
            }
            if let Some((k, q)) = m.derive(v) {
                let coeff = c * rat(k);
                for (n, d) in &val.terms {
                    if let Some((s, prod)) = n.mul(&q) {
                        out.add_term(prod, signed(d * &coeff, s));
                    }
                }
            }
        }
    }
    out
}

/// All monomials of homological degree `hdeg` and weight `weight` in the
/// given variables, in canonical order. Weights must be positive.
pub fn monomial_basis(hdeg: i32, weight: i64, vars: &[Var]) -> Vec<Monomial> {
    assert!(vars.iter().all(|v| v.weight > 0), "monomial_basis needs positive weights");
    let mut sorted: Vec<Var> = vars.to_vec();
    sorted.sort();
    sorted.dedup();
    // hdeg <= 0 for all generators; the remaining budget bounds the search.
    let mut out = Vec::new();
    let mut current = Vec::new();
    enumerate(&sorted, 0, hdeg, weight, &mut current, &mut out);
    out.sort();
    out
}

fn enumerate(
    vars: &[Var],
    k: usize,
    hdeg_left: i32,
    weight_left: i64,
    current: &mut Vec<(Var, u32)>,
    out: &mut Vec<Monomial>,
) {
    if weight_left == 0 {
        if hdeg_left == 0 {
            out.push(Monomial { factors: current.clone() });
        }
        return;
    }
    if k == vars.len() || weight_left < 0 {
        return;
    }
    let v = vars[k];
    let max_e = if v.is_odd() { 1 } else { (weight_left / v.weight) as u32 };
    for e in (0..=max_e).rev() {
        let h = hdeg_left - v.hdeg * e as i32;
        // generators have hdeg <= 0, so the remaining target must stay <= 0
        if h > 0 {
            continue;
        }
        if e > 0 {
            current.push((v, e));
        }
        enumerate(vars, k + 1, h, weight_left - v.weight * e as i64, current, out);
        if e > 0 {
            current.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Var {
        Var::new(0, 0, 1)
    }
    fn y() -> Var {
        Var::new(1, 0, 1)
    }
    fn e() -> Var {
        Var::new(2, -1, 2)
    }
    fn f() -> Var {
        Var::new(3, -1, 2)
    }

    #[test]
    fn even_variables_commute() {
        let xy = mul(&Poly::var(x()), &Poly::var(y()));
        let yx = mul(&Poly::var(y()), &Poly::var(x()));
        assert_eq!(xy, yx);
        assert_eq!(xy.len(), 1);
    }

    #[test]
    fn odd_variables_anticommute() {
        let ef = mul(&Poly::var(e()), &Poly::var(f()));
        let fe = mul(&Poly::var(f()), &Poly::var(e()));
        assert_eq!(fe, -&ef);
        assert_eq!(ef.coefficient(&Monomial::from_product(&[(e(), 1), (f(), 1)]).unwrap().1), rat(1));
    }

    #[test]
    fn odd_square_vanishes() {
        assert!(mul(&Poly::var(e()), &Poly::var(e())).is_zero());
        assert!(Monomial::from_product(&[(e(), 2)]).is_none());
    }

    #[test]
    fn derive_examples() {
        let x2y = Poly::term(rat(1), Monomial::from_product(&[(x(), 2), (y(), 1)]).unwrap().1);
        let expected = Poly::term(rat(2), Monomial::from_product(&[(x(), 1), (y(), 1)]).unwrap().1);
        assert_eq!(x2y.derive(x()), expected);

        // d(ef)/df: f passes e
        let ef = mul(&Poly::var(e()), &Poly::var(f()));
        assert_eq!(ef.derive(f()), -&Poly::var(e()));
        assert_eq!(ef.derive(e()), Poly::var(f()));

        assert!(Poly::constant(rat(5)).derive(x()).is_zero());
    }

    #[test]
    fn substitute_examples() {
        let t = Var::new(9, 0, 1);
        let x2 = mul(&Poly::var(x()), &Poly::var(x()));
        let mut a = BTreeMap::new();
        a.insert(x(), &Poly::var(x()) + &Poly::var(t));
        let got = x2.substitute(&a, false).unwrap();
        let xt = mul(&Poly::var(x()), &Poly::var(t));
        let expected = &(&x2 + &xt.scale(&rat(2))) + &mul(&Poly::var(t), &Poly::var(t));
        assert_eq!(got, expected);

        let xy = mul(&Poly::var(x()), &Poly::var(y()));
        assert_eq!(xy.substitute(&BTreeMap::new(), false).unwrap(), xy);

        let mut z = BTreeMap::new();
        z.insert(e(), Poly::zero());
        assert!(Poly::var(e()).substitute(&z, false).unwrap().is_zero());
    }

    #[test]
    fn substitute_rejects_parity_change() {
        let mut a = BTreeMap::new();
        a.insert(e(), Poly::var(x()));
        let ef = mul(&Poly::var(e()), &Poly::var(f()));
        assert_eq!(ef.substitute(&a, true), Err(AlgebraError::OddSquareViolation { var: 2 }));
        assert!(matches!(ef.substitute(&a, false), Err(AlgebraError::DegreeMismatch { .. })));
    }

    #[test]
    fn weight_and_jet() {
        let x2 = Poly::term(rat(1), Monomial::from_product(&[(x(), 2)]).unwrap().1);
        let x3 = Poly::term(rat(1), Monomial::from_product(&[(x(), 3)]).unwrap().1);
        let p = &x2 + &x3;
        assert_eq!(p.weight_component(2), x2);
        assert_eq!(p.jet_truncate(2), x2);
        assert!(Poly::zero().weight_component(4).is_zero());
    }

    #[test]
    fn monomial_basis_examples() {
        assert_eq!(monomial_basis(0, 2, &[x()]), vec![Monomial::from_product(&[(x(), 2)]).unwrap().1]);

        let xw2 = Var::new(0, 0, 2);
        let yw3 = Var::new(1, 0, 3);
        assert_eq!(monomial_basis(0, 2, &[xw2, yw3]), vec![Monomial::var(xw2)]);

        let e6 = Var::new(2, -1, 6);
        assert_eq!(monomial_basis(-1, 6, &[xw2, yw3, e6]), vec![Monomial::var(e6)]);
    }

    #[test]
    fn monomial_basis_matches_exhaustive_enumeration() {
        let vars = [Var::new(0, 0, 1), Var::new(1, 0, 2), Var::new(2, -1, 2), Var::new(3, -1, 3), Var::new(4, -2, 3)];
        for hdeg in -3..=0 {
            for w in 0..=7 {
                let mut brute = Vec::new();
                for a in 0..=7u32 {
                    for b in 0..=3u32 {
                        for c in 0..=1u32 {
                            for d in 0..=1u32 {
                                for g in 0..=2u32 {
                                    let exps = [a, b, c, d, g];
                                    let wt: i64 = exps.iter().zip(&vars).map(|(e, v)| *e as i64 * v.weight).sum();
                                    let hd: i32 = exps.iter().zip(&vars).map(|(e, v)| *e as i32 * v.hdeg).sum();
                                    if wt == w && hd == hdeg {
                                        let f: Vec<_> = vars.iter().zip(exps).map(|(v, e)| (*v, e)).collect();
                                        brute.push(Monomial::from_product(&f).unwrap().1);
                                    }
                                }
                            }
                        }
                    }
                }
                brute.sort();
                assert_eq!(monomial_basis(hdeg, w, &vars), brute, "hdeg {hdeg} weight {w}");
            }
        }
    }
}
