//! JSON report schema and its reconstruction for `verify`.
//!
//! Polynomials are sorted term lists `[[monomial, "p/q"], ...]` in the
//! canonical monomial order. Every rational keeps its denominator.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::{format_rational, parse_rational, Generator, Monomial, Poly, Var};
use crate::kuranishi::{
    BaseComponent, DeformationResult, FlatnessReport, KuranishiMap, Parameter, Perturbation,
};
use crate::resolvent::{InputIdeal, Resolvent, ResolventReport};
use crate::tangent::{TangentBasis, TangentElement};

pub type Terms = Vec<(String, String)>;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub input: InputEcho,
    pub resolvent: Option<ResolventEcho>,
    pub parameters: Vec<ParameterEcho>,
    pub t1: Vec<ClassEcho>,
    pub t2: Vec<ClassEcho>,
    pub family: Vec<Terms>,
    pub kuranishi: Vec<Terms>,
    pub perturbation: Vec<PerturbationEcho>,
    pub base_components: Option<Vec<ComponentEcho>>,
    pub stabilized_at: Option<u32>,
    pub lifting: Option<LiftingEcho>,
    pub flatness: Option<FlatnessEcho>,
    pub caveats: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct VariableEcho {
    pub name: String,
    pub weight: i64,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct InputEcho {
    pub variables: Vec<VariableEcho>,
    pub ideal: Vec<Terms>,
    pub depth: u32,
    pub order: Option<u32>,
    pub weight_bound: i64,
    pub approximate: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GeneratorEcho {
    pub name: String,
    pub level: u32,
    pub degree: i32,
    pub weight: i64,
    pub differential: Terms,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CheckEcho {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ResolventEcho {
    pub generators: Vec<GeneratorEcho>,
    pub checks: Vec<CheckEcho>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ParameterEcho {
    pub name: String,
    pub weight: i64,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ValueEcho {
    pub generator: String,
    pub value: Terms,
}

/// A cohomology class representative, by its values on generators.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ClassEcho {
    pub weight: i64,
    pub derivation: Vec<ValueEcho>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PerturbationEcho {
    pub monomial: String,
    pub derivation: Vec<ValueEcho>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ComponentEcho {
    pub equations: Vec<Terms>,
    pub dim: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct LiftingEcho {
    pub defects_split: usize,
    pub homotopy_identity: bool,
    pub family_at_zero_is_input: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct WitnessEcho {
    pub generator: String,
    pub monomial: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FlatnessEcho {
    pub passed: bool,
    pub order: u32,
    pub generators_checked: usize,
    pub witness: Option<WitnessEcho>,
}

/// Id-to-name table for ambient variables, resolvent generators and
/// parameters.
#[derive(Clone, Debug, Default)]
pub struct Names {
    by_id: BTreeMap<u32, String>,
    by_name: BTreeMap<String, Var>,
}

impl Names {
    pub fn new(generators: &[Generator], params: &[Parameter]) -> Self {
        let mut n = Names::default();
        for g in generators {
            n.insert(g.var, &g.name);
        }
        for p in params {
            n.insert(p.var, &p.name);
        }
        n
    }

    fn insert(&mut self, v: Var, name: &str) {
        self.by_id.insert(v.id, name.to_string());
        self.by_name.insert(name.to_string(), v);
    }

    pub fn name(&self, id: u32) -> String {
        self.by_id.get(&id).cloned().unwrap_or_else(|| format!("v{id}"))
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        self.by_name.get(name).copied()
    }

    pub fn monomial(&self, m: &Monomial) -> String {
        m.format_with(&|id| self.name(id))
    }

    pub fn terms(&self, p: &Poly) -> Terms {
        p.terms().map(|(m, c)| (self.monomial(m), format_rational(c))).collect()
    }

    pub fn display(&self, p: &Poly) -> String {
        p.format_with(&|id| self.name(id))
    }

    pub fn parse_monomial(&self, s: &str) -> Result<Monomial, String> {
        if s == "1" {
            return Ok(Monomial::one());
        }
        let mut factors = Vec::new();
        for f in s.split('*') {
            let (name, e) = match f.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().map_err(|_| format!("bad exponent in '{s}'"))?),
                None => (f, 1),
            };
            let v = self.var(name).ok_or_else(|| format!("unknown name '{name}' in '{s}'"))?;
            factors.push((v, e));
        }
        match Monomial::from_product(&factors) {
            Some((1, m)) => Ok(m),
            _ => Err(format!("'{s}' is not a canonical monomial")),
        }
    }

    pub fn parse_terms(&self, t: &Terms) -> Result<Poly, String> {
        let mut p = Poly::zero();
        for (m, c) in t {
            let c = parse_rational(c).ok_or_else(|| format!("bad coefficient '{c}'"))?;
            p.add_term(self.parse_monomial(m)?, c);
        }
        Ok(p)
    }

    fn derivation(&self, t: &TangentElement) -> Vec<ValueEcho> {
        t.values().iter().map(|(id, v)| ValueEcho { generator: self.name(*id), value: self.terms(v) }).collect()
    }

    fn parse_derivation(&self, values: &[ValueEcho], r: &Resolvent, weight: i64) -> Result<TangentElement, String> {
        let mut out = Vec::new();
        for v in values {
            let g = self.var(&v.generator).ok_or_else(|| format!("unknown generator '{}'", v.generator))?;
            if g.id as usize >= r.generators().len() {
                return Err(format!("'{}' is not a resolvent generator", v.generator));
            }
            out.push((g.id, self.parse_terms(&v.value)?));
        }
        Ok(TangentElement::from_values(1, weight, out))
    }
}

pub fn input_echo(ideal: &InputIdeal, depth: u32, order: Option<u32>, weight_bound: i64) -> InputEcho {
    let names = Names::new(ideal.variables(), &[]);
    InputEcho {
        variables: ideal.variables().iter().map(|v| VariableEcho { name: v.name.clone(), weight: v.weight() }).collect(),
        ideal: ideal.generators().iter().map(|f| names.terms(f)).collect(),
        depth,
        order,
        weight_bound,
        approximate: ideal.is_approximate(),
    }
}

pub fn resolvent_echo(r: &Resolvent, checks: &ResolventReport) -> ResolventEcho {
    let names = Names::new(r.generators(), &[]);
    ResolventEcho {
        generators: r
            .generators()
            .iter()
            .filter(|g| g.level > 0)
            .map(|g| GeneratorEcho {
                name: g.name.clone(),
                level: g.level,
                degree: g.hdeg(),
                weight: g.weight(),
                differential: names.terms(r.diff(g.id())),
            })
            .collect(),
        checks: checks
            .checks
            .iter()
            .map(|c| CheckEcho { name: c.name.clone(), passed: c.passed, detail: c.detail.clone() })
            .collect(),
    }
}

pub fn classes_echo(r: &Resolvent, basis: &TangentBasis) -> Vec<ClassEcho> {
    let names = Names::new(r.generators(), &[]);
    basis.iter().map(|(w, t)| ClassEcho { weight: w, derivation: names.derivation(t) }).collect()
}

pub fn deformation_echo(r: &Resolvent, res: &DeformationResult, report: &mut Report) {
    let names = Names::new(r.generators(), &res.parameters);
    report.parameters = res.parameters.iter().map(|p| ParameterEcho { name: p.name.clone(), weight: p.weight }).collect();
    report.family = res.family.iter().map(|f| names.terms(f)).collect();
    report.kuranishi = res.kuranishi.components.iter().map(|k| names.terms(k)).collect();
    report.perturbation = res
        .perturbation
        .delta
        .iter()
        .map(|(m, d)| PerturbationEcho { monomial: names.monomial(m), derivation: names.derivation(d) })
        .collect();
    report.stabilized_at = res.stabilized_at;
}

pub fn components_echo(r: &Resolvent, params: &[Parameter], comps: &[BaseComponent]) -> Vec<ComponentEcho> {
    let names = Names::new(r.generators(), params);
    comps
        .iter()
        .map(|c| ComponentEcho { equations: c.equations.iter().map(|e| names.terms(e)).collect(), dim: c.dim })
        .collect()
}

pub fn flatness_echo(f: &FlatnessReport) -> FlatnessEcho {
    FlatnessEcho {
        passed: f.passed(),
        order: f.order,
        generators_checked: f.generators_checked,
        witness: f.witness.as_ref().map(|w| WitnessEcho { generator: w.generator.clone(), monomial: w.monomial.clone() }),
    }
}

/// A saved deformation, rebuilt from its report.
pub struct SavedDeformation {
    pub ideal: InputIdeal,
    pub resolvent: Resolvent,
    pub parameters: Vec<Parameter>,
    pub perturbation: Perturbation,
    pub kuranishi: KuranishiMap,
    pub family: Vec<Poly>,
    pub order: u32,
}

pub fn load_deformation(report: &Report) -> Result<SavedDeformation, String> {
    let input = &report.input;
    let mut generators: Vec<Generator> = input
        .variables
        .iter()
        .enumerate()
        .map(|(i, v)| Generator::new(i as u32, v.name.clone(), 0, v.weight, 0))
        .collect();
    let echo = report.resolvent.as_ref().ok_or("report has no resolvent")?;
    for g in &echo.generators {
        let id = generators.len() as u32;
        generators.push(Generator::new(id, g.name.clone(), g.degree, g.weight, g.level));
    }
    let names = Names::new(&generators, &[]);
    let ideal_polys = input.ideal.iter().map(|t| names.parse_terms(t)).collect::<Result<Vec<_>, _>>()?;
    let ideal = InputIdeal::new(generators[..input.variables.len()].to_vec(), ideal_polys).map_err(|e| e.to_string())?;
    let mut diff = vec![Poly::zero(); input.variables.len()];
    for g in &echo.generators {
        diff.push(names.parse_terms(&g.differential)?);
    }
    let resolvent = Resolvent::from_parts(generators.clone(), diff, input.depth, input.weight_bound);
    let base = generators.len() as u32;
    let parameters: Vec<Parameter> = report
        .parameters
        .iter()
        .enumerate()
        .map(|(index, p)| Parameter {
            name: p.name.clone(),
            index,
            weight: p.weight,
            var: Var::new(base + index as u32, 0, p.weight),
        })
        .collect();
    let names = Names::new(&generators, &parameters);
    let mut delta = BTreeMap::new();
    for p in &report.perturbation {
        let m = names.parse_monomial(&p.monomial)?;
        delta.insert(m.clone(), names.parse_derivation(&p.derivation, &resolvent, -m.weight())?);
    }
    let order = input.order.ok_or("report has no truncation order")?;
    let kuranishi = KuranishiMap {
        components: report.kuranishi.iter().map(|k| names.parse_terms(k)).collect::<Result<_, _>>()?,
    };
    let family = report.family.iter().map(|f| names.parse_terms(f)).collect::<Result<_, _>>()?;
    Ok(SavedDeformation {
        ideal,
        resolvent,
        parameters,
        perturbation: Perturbation { delta, order },
        kuranishi,
        family,
        order,
    })
}

/// `1/1 -> 1`, `-3/1 -> -3`.
fn short_rational(c: &str) -> &str {
    c.strip_suffix("/1").unwrap_or(c)
}

pub fn display_terms(t: &Terms) -> String {
    if t.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (m, c)) in t.iter().enumerate() {
        let c = short_rational(c);
        let (neg, a) = match c.strip_prefix('-') {
            Some(a) => (true, a),
            None => (false, c),
        };
        match (k, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        match (m.as_str(), a) {
            ("1", a) => s.push_str(a),
            (m, "1") => s.push_str(m),
            (m, a) => {
                let _ = write!(s, "{a}*{m}");
            }
        }
    }
    s
}

fn display_derivation(d: &[ValueEcho]) -> String {
    d.iter()
        .map(|v| format!("({})*d/d{}", display_terms(&v.value), v.generator))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let vars: Vec<String> = r.input.variables.iter().map(|v| format!("{}:{}", v.name, v.weight)).collect();
    let _ = writeln!(s, "{}", r.command);
    let _ = writeln!(s, "ring {}", vars.join(" "));
    for f in &r.input.ideal {
        let _ = writeln!(s, "  {}", display_terms(f));
    }
    let _ = write!(s, "depth {}  weight bound {}", r.input.depth, r.input.weight_bound);
    if let Some(n) = r.input.order {
        let _ = write!(s, "  order {n}");
    }
    s.push('\n');
    if let Some(res) = &r.resolvent {
        let _ = writeln!(s, "\nresolvent ({} generators)", res.generators.len());
        for g in &res.generators {
            let _ = writeln!(s, "  s({}) = {}    [level {}, weight {}]", g.name, display_terms(&g.differential), g.level, g.weight);
        }
        for c in &res.checks {
            let detail = if c.detail == "ok" { String::new() } else { format!(": {}", c.detail) };
            let _ = writeln!(s, "  {} {}{detail}", if c.passed { "ok  " } else { "FAIL" }, c.name);
        }
    }
    if r.command != "resolve" {
        for (label, classes) in [("T1", &r.t1), ("T2", &r.t2)] {
            let _ = writeln!(s, "\n{label} (dim {})", classes.len());
            for c in classes {
                let _ = writeln!(s, "  [weight {}] {}", c.weight, display_derivation(&c.derivation));
            }
        }
    }
    if !r.parameters.is_empty() || r.command == "deform" || r.command == "verify" {
        let params: Vec<String> = r.parameters.iter().map(|p| format!("{}:{}", p.name, p.weight)).collect();
        let _ = writeln!(s, "\nparameters {}", params.join(" "));
        let _ = writeln!(s, "family");
        for f in &r.family {
            let _ = writeln!(s, "  {}", display_terms(f));
        }
        let _ = writeln!(s, "kuranishi");
        for k in &r.kuranishi {
            let _ = writeln!(s, "  {}", display_terms(k));
        }
        if let Some(comps) = &r.base_components {
            let _ = writeln!(s, "base components");
            for c in comps {
                let eqs: Vec<String> = c.equations.iter().map(display_terms).collect();
                let _ = writeln!(s, "  dim {}: {{{}}}", c.dim, eqs.join(", "));
            }
        }
        if let Some(n) = r.stabilized_at {
            let _ = writeln!(s, "stabilized at order {n}");
        }
    }
    if let Some(l) = &r.lifting {
        let _ = writeln!(
            s,
            "lifting: {} defects split, homotopy identity {}, family at t = 0 {}",
            l.defects_split,
            if l.homotopy_identity { "holds" } else { "FAILS" },
            if l.family_at_zero_is_input { "is the input" } else { "DIFFERS from the input" }
        );
    }
    if let Some(f) = &r.flatness {
        match &f.witness {
            None => {
                let _ = writeln!(s, "flatness: pass at order {} ({} generators)", f.order, f.generators_checked);
            }
            Some(w) => {
                let _ = writeln!(s, "flatness: FAIL at generator {}, monomial {}", w.generator, w.monomial);
            }
        }
    }
    if !r.caveats.is_empty() {
        let _ = writeln!(s, "\ncaveats");
        for c in &r.caveats {
            let _ = writeln!(s, "  - {c}");
        }
    }
    s
}
