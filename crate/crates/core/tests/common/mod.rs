//! Reference computations for integration tests. They use their own
//! exponent-vector polynomials and dense elimination, sharing no code with
//! the library's linear algebra.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_rational::BigRational;
use num_traits::{One, Zero};

use versal::algebra::{Poly, Var};
use versal::cli::parse_input;
use versal::resolvent::{InputIdeal, Resolvent};

pub type Q = BigRational;
pub type Exps = Vec<u32>;
/// Commutative polynomial in even variables.
pub type CPoly = BTreeMap<Exps, Q>;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// `(name, input text)` for every corpus file, sorted by name.
pub fn corpus() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "ideal"))
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

pub fn corpus_ideal(name: &str) -> (InputIdeal, versal::cli::InputOptions) {
    let text = std::fs::read_to_string(corpus_dir().join(format!("{name}.ideal"))).unwrap();
    let p = parse_input(&text).unwrap();
    (p.ideal, p.options)
}

pub fn to_cpoly(p: &Poly, vars: &[Var]) -> CPoly {
    let mut out = CPoly::new();
    for (m, c) in p.terms() {
        assert!(m.vars().all(|v| vars.contains(&v)), "only ambient variables");
        let e: Exps = vars.iter().map(|v| m.exponent(v.id)).collect();
        out.insert(e, c.clone());
    }
    out
}

pub fn cmul(a: &CPoly, b: &CPoly) -> CPoly {
    let mut out = CPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let entry = out.entry(e.clone()).or_insert_with(Q::zero);
            *entry += ca * cb;
            if entry.is_zero() {
                out.remove(&e);
            }
        }
    }
    out
}

pub fn cderive(a: &CPoly, i: usize) -> CPoly {
    let mut out = CPoly::new();
    for (e, c) in a {
        if e[i] > 0 {
            let mut e = e.clone();
            let k = e[i];
            e[i] -= 1;
            out.insert(e, c * Q::from_integer(k.into()));
        }
    }
    out
}

pub fn cweight(e: &Exps, weights: &[i64]) -> i64 {
    e.iter().zip(weights).map(|(a, w)| *a as i64 * w).sum()
}

/// All exponent vectors of the given weight.
pub fn monomials_of_weight(weights: &[i64], w: i64) -> Vec<Exps> {
    if w < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; weights.len()];
    fn go(i: usize, rest: i64, weights: &[i64], cur: &mut Vec<u32>, out: &mut Vec<Exps>) {
        if i == weights.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut k = 0;
        while k as i64 * weights[i] <= rest {
            cur[i] = k;
            go(i + 1, rest - k as i64 * weights[i], weights, cur, out);
            k += 1;
        }
        cur[i] = 0;
    }
    go(0, w, weights, &mut cur, &mut out);
    out
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Q::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    rref(&mut rows).len()
}

/// `(k[x] / I)_w` with normal forms onto non-pivot monomials.
pub struct QuotientPiece {
    pub monomials: Vec<Exps>,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
    pub standard: Vec<usize>,
}

impl QuotientPiece {
    pub fn new(gens: &[CPoly], weights: &[i64], w: i64) -> Self {
        let monomials = monomials_of_weight(weights, w);
        let index: BTreeMap<&Exps, usize> = monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for f in gens {
            let Some(fw) = f.keys().next().map(|e| cweight(e, weights)) else { continue };
            for m in monomials_of_weight(weights, w - fw) {
                let mut row = vec![Q::zero(); monomials.len()];
                let single: CPoly = [(m, Q::one())].into_iter().collect();
                for (e, c) in cmul(&single, f) {
                    row[index[&e]] += c;
                }
                rows.push(row);
            }
        }
        let pivots = rref(&mut rows);
        let standard = (0..monomials.len()).filter(|i| !pivots.contains(i)).collect();
        QuotientPiece { monomials, rows, pivots, standard }
    }

    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    /// Coordinates of `p` (homogeneous of this weight) on the standard monomials.
    pub fn normal_form(&self, p: &CPoly) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.monomials.len()];
        for (e, c) in p {
            let i = self.monomials.iter().position(|m| m == e).expect("monomial of this weight");
            v[i] += c;
        }
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if !v[pc].is_zero() {
                let f = v[pc].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        self.standard.iter().map(|&i| v[i].clone()).collect()
    }
}

pub fn quotient_dim(gens: &[CPoly], weights: &[i64], w: i64) -> usize {
    QuotientPiece::new(gens, weights, w).dim()
}

pub fn ideal_cpolys(ideal: &InputIdeal) -> (Vec<CPoly>, Vec<i64>) {
    let vars = ideal.vars();
    let weights = vars.iter().map(|v| v.weight).collect();
    (ideal.generators().iter().map(|f| to_cpoly(f, &vars)).collect(), weights)
}

/// `dim k[x] / (f, df/dx_1, ..., df/dx_n)`, summed over all weights.
pub fn tjurina_number(ideal: &InputIdeal) -> usize {
    let (gens, weights) = ideal_cpolys(ideal);
    assert_eq!(gens.len(), 1, "hypersurface");
    let f = &gens[0];
    let mut all: Vec<CPoly> = vec![f.clone()];
    all.extend((0..weights.len()).map(|i| cderive(f, i)).filter(|p| !p.is_empty()));
    let d = cweight(f.keys().next().unwrap(), &weights);
    let top = d * weights.len() as i64;
    (0..=top).map(|w| quotient_dim(&all, &weights, w)).sum()
}

/// Coefficient of `x_i` in the part of `s(x_k)` linear in negative-degree
/// generators, or the partial derivative when `x_i` is an ambient variable.
fn linear_coefficient(r: &Resolvent, i: u32, k: u32, ambient: &[Var]) -> CPoly {
    let gi = r.generator(i);
    let mut out = CPoly::new();
    for (m, c) in r.diff(k).terms() {
        let negative: Vec<_> = m.factors().iter().filter(|(v, _)| v.hdeg != 0).collect();
        let e: Exps = ambient.iter().map(|v| m.exponent(v.id)).collect();
        if gi.hdeg() == 0 {
            if negative.is_empty() && e[i as usize] > 0 {
                let mut e = e.clone();
                let k = e[i as usize];
                e[i as usize] -= 1;
                *out.entry(e).or_insert_with(Q::zero) += c * Q::from_integer(k.into());
            }
        } else if negative.len() == 1 && negative[0].0.id == i && negative[0].1 == 1 {
            *out.entry(e).or_insert_with(Q::zero) += c.clone();
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `dim H^j` of `Der(R, A)` at derivation weight `w`, where `A = k[x]/I`.
pub fn tangent_dim_oracle(r: &Resolvent, j: u32, w: i64) -> usize {
    let ambient: Vec<Var> = r.generators().iter().filter(|g| g.level == 0).map(|g| g.var).collect();
    let weights: Vec<i64> = ambient.iter().map(|v| v.weight).collect();
    let ideal: Vec<CPoly> = r.level(1).map(|g| to_cpoly(r.diff(g.id()), &ambient)).collect();
    let level = |l: u32| -> Vec<u32> { r.generators().iter().filter(|g| g.level == l).map(|g| g.id()).collect() };
    let levels: Vec<u32> = if j == 0 { vec![j, j + 1] } else { vec![j - 1, j, j + 1] };
    let mut pieces: BTreeMap<i64, QuotientPiece> = BTreeMap::new();
    for l in &levels {
        for id in level(*l) {
            let weight = r.generator(id).weight() + w;
            pieces.entry(weight).or_insert_with(|| QuotientPiece::new(&ideal, &weights, weight));
        }
    }
    // blocks of Der^l(R, A)_w: one per level-l generator
    let layout = |l: u32| -> Vec<(u32, &QuotientPiece)> {
        level(l).into_iter().map(|id| (id, &pieces[&(r.generator(id).weight() + w)])).collect()
    };
    let below = if j == 0 { Vec::new() } else { layout(j - 1) };
    let here = layout(j);
    let above = layout(j + 1);
    let dim = |blocks: &[(u32, &QuotientPiece)]| -> usize { blocks.iter().map(|(_, p)| p.dim()).sum() };
    let matrix = |from: &[(u32, &QuotientPiece)], to: &[(u32, &QuotientPiece)]| -> Vec<Vec<Q>> {
        let mut rows = Vec::new();
        for (i, pi) in from {
            for &a in &pi.standard {
                let basis: CPoly = [(pi.monomials[a].clone(), Q::one())].into_iter().collect();
                let mut row = Vec::new();
                for (k, pk) in to {
                    if pk.monomials.is_empty() {
                        continue;
                    }
                    let c = linear_coefficient(r, *i, *k, &ambient);
                    row.extend(pk.normal_form(&cmul(&basis, &c)));
                }
                rows.push(row);
            }
        }
        rows
    };
    let cycles = dim(&here) - if dim(&above) == 0 { 0 } else { rank(matrix(&here, &above)) };
    let boundaries = if dim(&here) == 0 { 0 } else { rank(matrix(&below, &here)) };
    cycles - boundaries
}
