//! Degeneration side of the symplectic sum formula: dimension counts,
//! hollowness and stability criteria, the applicability verdict, bipartite
//! graph enumeration with the vanishing filter, and assembly of the three
//! worked identities from the other modules.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chern_geometry::{
    genus1_split, gw_genus1_deg0_absolute, hypersurface, projective_space, ChernData, ChernError, DeltaPoly,
    GenusOneInsertion, DELTA_VAR,
};
use crate::data::{DataError, DataSource, CITATIONS};
use crate::exact_arith::{int, Rational};
use crate::hodge_oracle::{HodgeError, HodgeMonomial, HodgeOracle};
use crate::localization_engine::{builtin, problem_total, LocalizationError};
use crate::psi_recursion::psi_intersect;

pub const MAX_GRAPH_GENUS: u32 = 3;
pub const MAX_CONTACT: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumError {
    #[error("contact orders sum to {got}, expected A.V = {expected}")]
    ContactMismatch { got: u32, expected: u32 },
    #[error("enumeration bound exceeded: {0}")]
    ResourceBound(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown example {0} (expected 1, 2 or 3)")]
    UnknownExample(u8),
    #[error("invalid hypersurface degree {0}")]
    BadDelta(i64),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Localization(#[from] LocalizationError),
}

/// Numerical data of a Gromov-Witten problem `GW_{g,A}^X` relative to V.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GwSetting {
    /// complex dimension of X
    pub n: u32,
    pub g: u32,
    pub k: u32,
    pub a_dot_v: u32,
    /// `<c1(X), A>`
    pub c1_a: i64,
    pub a_is_zero: bool,
    /// no class pulled back from the Deligne-Mumford space (primary insertions only)
    pub kappa_trivial: bool,
}

/// Real virtual dimension of the absolute space, or of the relative space with contacts `s`.
pub fn vir_dim(s: &GwSetting, contact: Option<&[u32]>) -> Result<i64, SumError> {
    let base = s.c1_a + (s.n as i64 - 3) * (1 - s.g as i64) + s.k as i64;
    match contact {
        None => Ok(2 * base),
        Some(c) => {
            let total: u32 = c.iter().sum();
            if total != s.a_dot_v {
                return Err(SumError::ContactMismatch {
                    got: total,
                    expected: s.a_dot_v,
                });
            }
            Ok(2 * (base + c.len() as i64 - total as i64))
        }
    }
}

/// Lower-genus class that might have to be excluded from V.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub genus: u32,
    pub c1_a: i64,
    pub a_dot_v: i64,
}

/// V is hollow for all candidates: `A'.V > <c1, A'> + (n-4)(1-g')`.
pub fn hollow_sufficient(n: u32, candidates: &[Candidate]) -> bool {
    candidates
        .iter()
        .all(|c| c.a_dot_v > c.c1_a + (n as i64 - 4) * (1 - c.genus as i64))
}

/// Stability criterion: `A'.V >= <c1, A'> + n + 2g` for every candidate `(c1A', A'.V)`.
pub fn stability_sufficient(n: u32, g: u32, candidates: &[(i64, i64)]) -> bool {
    candidates
        .iter()
        .all(|&(c1, av)| av >= c1 + n as i64 + 2 * g as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Verdict {
    Guaranteed,
    GuaranteedPrimaryOnly,
    NotGuaranteed { counterexample: Option<u8> },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Guaranteed => write!(f, "guaranteed"),
            Verdict::GuaranteedPrimaryOnly => write!(f, "guaranteed (primary insertions only)"),
            Verdict::NotGuaranteed { counterexample: Some(e) } => {
                write!(f, "not guaranteed (see example {e})")
            }
            Verdict::NotGuaranteed { counterexample: None } => write!(f, "not guaranteed"),
        }
    }
}

/// Whether the absolute invariant equals the relative one with contacts 1 for hollow V.
pub fn thm1_verdict(s: &GwSetting) -> Verdict {
    let (n, g) = (s.n as i64, s.g as i64);
    let degree_zero_elliptic = s.g == 1 && s.a_is_zero;
    if !degree_zero_elliptic && (n - 5) * g * (g - 1) >= 0 {
        return Verdict::Guaranteed;
    }
    if s.kappa_trivial && !s.a_is_zero && (s.g == 2 || s.n != 4) {
        return Verdict::GuaranteedPrimaryOnly;
    }
    let counterexample = if s.a_is_zero {
        Some(1)
    } else if s.n == 4 && s.g >= 3 && s.kappa_trivial {
        Some(3)
    } else if (1..=4).contains(&s.n) && s.g >= 2 && !s.kappa_trivial {
        Some(2)
    } else {
        None
    };
    Verdict::NotGuaranteed { counterexample }
}

// ---- graphs ----

/// A vertex on the V side of the degeneration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VVertex {
    /// connected component of V the vertex maps to
    pub component: usize,
    pub genus: u32,
    pub marks: u32,
    /// labels of the edges to the X vertex, decreasing
    pub contacts: Vec<u32>,
}

impl VVertex {
    /// Fiber degree: the sum of incident edge labels.
    pub fn degree(&self) -> u32 {
        self.contacts.iter().sum()
    }
}

/// Bipartite graph with at most one X-side vertex; every V vertex is joined to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BipartiteGraph {
    /// `(genus, marks)` of the X-side vertex, absent for a lone V vertex
    pub x_vertex: Option<(u32, u32)>,
    pub v_vertices: Vec<VVertex>,
}

impl BipartiteGraph {
    pub fn edges(&self) -> usize {
        self.v_vertices.iter().map(|v| v.contacts.len()).sum()
    }

    pub fn vertices(&self) -> usize {
        self.v_vertices.len() + usize::from(self.x_vertex.is_some())
    }

    /// Loop genus: edges - vertices + 1.
    pub fn loop_genus(&self) -> u32 {
        (self.edges() + 1 - self.vertices()) as u32
    }

    pub fn total_genus(&self) -> u32 {
        self.loop_genus()
            + self.x_vertex.map_or(0, |x| x.0)
            + self.v_vertices.iter().map(|v| v.genus).sum::<u32>()
    }

    pub fn max_v_genus(&self) -> u32 {
        self.v_vertices.iter().map(|v| v.genus).max().unwrap_or(0)
    }
}

impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.x_vertex {
            Some((g, k)) => write!(f, "X(g={g},k={k})")?,
            None => write!(f, "no X vertex")?,
        }
        for v in &self.v_vertices {
            let s: Vec<String> = v.contacts.iter().map(|c| c.to_string()).collect();
            write!(f, " V{}(g={},k={},s=({}))", v.component + 1, v.genus, v.marks, s.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphConstraints {
    /// the X side is a single irreducible curve carrying all of A
    pub x_side_degree_one: bool,
    /// every marked point stays on the X side
    pub marked_points_on_x: bool,
    pub genus_cap_v: u32,
}

/// Partitions of `n` with parts at most `max`, decreasing.
fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Multisets of nonempty label lists whose labels sum to `n`, canonical order.
fn groupings(n: u32) -> Vec<Vec<Vec<u32>>> {
    fn go(n: u32, bound: Option<&Vec<u32>>, acc: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if n == 0 {
            out.push(acc.clone());
            return;
        }
        for size in 1..=n {
            for p in partitions(size, size) {
                if bound.is_some_and(|b| (p.iter().sum::<u32>(), &p) > (b.iter().sum::<u32>(), b)) {
                    continue;
                }
                acc.push(p.clone());
                go(n - size, Some(&p), acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, None, &mut Vec::new(), &mut out);
    out
}

/// All graphs of total genus `g` with `k` marks meeting the components of V
/// with the given contact numbers (their sum is A.V), up to isomorphism.
pub fn enumerate_graphs(
    g: u32,
    components: &[u32],
    k: u32,
    c: GraphConstraints,
) -> Result<Vec<BipartiteGraph>, SumError> {
    let a_dot_v: u32 = components.iter().sum();
    if g > MAX_GRAPH_GENUS || a_dot_v > MAX_CONTACT {
        return Err(SumError::ResourceBound(format!(
            "g = {g}, A.V = {a_dot_v} (limits {MAX_GRAPH_GENUS}, {MAX_CONTACT})"
        )));
    }
    if !c.x_side_degree_one && a_dot_v > 0 {
        return Err(SumError::Unsupported("graphs with several X-side vertices".into()));
    }
    let mut out = BTreeSet::new();
    if a_dot_v == 0 {
        out.insert(BipartiteGraph {
            x_vertex: Some((g, k)),
            v_vertices: vec![],
        });
        if !c.x_side_degree_one && !c.marked_points_on_x && g <= c.genus_cap_v {
            out.insert(BipartiteGraph {
                x_vertex: None,
                v_vertices: vec![VVertex {
                    component: 0,
                    genus: g,
                    marks: k,
                    contacts: vec![],
                }],
            });
        }
        return Ok(out.into_iter().collect());
    }
    let per_component: Vec<Vec<Vec<Vec<u32>>>> = components.iter().map(|&n| groupings(n)).collect();
    // choose a grouping per component
    let mut shapes: Vec<Vec<(usize, Vec<u32>)>> = vec![vec![]];
    for (ci, gs) in per_component.iter().enumerate() {
        let mut next = Vec::new();
        for s in &shapes {
            for grp in gs {
                let mut t = s.clone();
                t.extend(grp.iter().map(|labels| (ci, labels.clone())));
                next.push(t);
            }
        }
        if next.len() > 200_000 {
            return Err(SumError::ResourceBound("too many vertex groupings".into()));
        }
        shapes = next;
    }
    for shape in shapes {
        let edges: usize = shape.iter().map(|(_, l)| l.len()).sum();
        let loop_genus = (edges - shape.len()) as u32;
        if loop_genus > g {
            continue;
        }
        let budget = g - loop_genus;
        let mut genera = vec![0u32; shape.len()];
        distribute(&mut genera, 0, budget, c.genus_cap_v, &mut |gv| {
            let used: u32 = gv.iter().sum();
            let gx = budget - used;
            let mark_splits: Vec<(u32, Vec<u32>)> = if c.marked_points_on_x {
                vec![(k, vec![0; gv.len()])]
            } else {
                mark_distributions(k, gv.len())
            };
            for (kx, kv) in mark_splits {
                let mut vs: Vec<VVertex> = shape
                    .iter()
                    .zip(gv.iter().zip(&kv))
                    .map(|((ci, labels), (&genus, &marks))| VVertex {
                        component: *ci,
                        genus,
                        marks,
                        contacts: labels.clone(),
                    })
                    .collect();
                vs.sort();
                out.insert(BipartiteGraph {
                    x_vertex: Some((gx, kx)),
                    v_vertices: vs,
                });
            }
        });
        if out.len() > 200_000 {
            return Err(SumError::ResourceBound("too many graphs".into()));
        }
    }
    Ok(out.into_iter().collect())
}

fn distribute(slots: &mut Vec<u32>, at: usize, left: u32, cap: u32, f: &mut dyn FnMut(&[u32])) {
    if at == slots.len() {
        f(slots);
        return;
    }
    for v in 0..=left.min(cap) {
        slots[at] = v;
        distribute(slots, at + 1, left - v, cap, f);
    }
    slots[at] = 0;
}

/// Ways to place `k` unlabelled marks on the X vertex and `m` V vertices.
fn mark_distributions(k: u32, m: usize) -> Vec<(u32, Vec<u32>)> {
    let mut out = Vec::new();
    let mut slots = vec![0u32; m + 1];
    distribute(&mut slots, 0, k, k, &mut |s| {
        if s.iter().sum::<u32>() == k {
            out.push((s[0], s[1..].to_vec()));
        }
    });
    out
}

/// Regime in which the filter runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterRegime {
    pub n: u32,
    pub kappa_trivial: bool,
    /// genus of the whole problem; only a V vertex of this genus can be exceptional
    pub g_top: u32,
}

/// Whether the vanishing hypotheses `(g,d) != (1,0)` and `(n-5) g (g-1) >= 0` hold for a vertex.
pub fn vertex_vanishing_applies(n: u32, genus: u32, degree: u32) -> bool {
    !(genus == 1 && degree == 0) && (n as i64 - 5) * genus as i64 * (genus as i64 - 1) >= 0
}

/// True when the graph can contribute for primary or descendant insertions in the regime.
pub fn vanishing_filter(graph: &BipartiteGraph, regime: FilterRegime) -> bool {
    graph.v_vertices.iter().all(|v| {
        let basic = v.genus == 0 && v.contacts == [1] && v.marks == 0;
        if basic {
            return true;
        }
        let exceptional_shape = regime.g_top > 0
            && v.genus == regime.g_top
            && v.contacts == [1]
            && v.marks == 0;
        if !exceptional_shape {
            return false;
        }
        let rescued_by_primary = regime.kappa_trivial && (regime.g_top == 2 || regime.n != 4);
        !vertex_vanishing_applies(regime.n, v.genus, v.degree()) && !rescued_by_primary
    })
}

/// Graphs that pass the filter.
pub fn surviving_graphs(graphs: &[BipartiteGraph], regime: FilterRegime) -> Vec<BipartiteGraph> {
    graphs
        .iter()
        .filter(|g| vanishing_filter(g, regime))
        .cloned()
        .collect()
}

// ---- symmetric reduction ----

type Exps = Vec<u32>;

fn poly_mul(a: &HashMap<Exps, Rational>, b: &HashMap<Exps, Rational>) -> HashMap<Exps, Rational> {
    let mut out: HashMap<Exps, Rational> = HashMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Rewrites a symmetric polynomial in `k` variables through elementary symmetric functions.
/// The result maps exponent vectors of `(e_1, ..., e_k)` to coefficients.
fn to_elementary(p: &HashMap<Exps, Rational>, k: usize) -> BTreeMap<Exps, Rational> {
    let elem: Vec<HashMap<Exps, Rational>> = (1..=k)
        .map(|j| {
            let mut m = HashMap::new();
            for mask in 0u32..(1 << k) {
                if mask.count_ones() as usize == j {
                    let e: Exps = (0..k).map(|i| (mask >> i) & 1).collect();
                    m.insert(e, Rational::one());
                }
            }
            m
        })
        .collect();
    let mut rest = p.clone();
    let mut out = BTreeMap::new();
    while let Some(lead) = rest.keys().max().cloned() {
        let c = rest[&lead].clone();
        let b: Exps = (0..k)
            .map(|i| lead[i] - if i + 1 < k { lead[i + 1] } else { 0 })
            .collect();
        let mut prod: HashMap<Exps, Rational> = HashMap::from([(vec![0; k], Rational::one())]);
        for (j, &bj) in b.iter().enumerate() {
            for _ in 0..bj {
                prod = poly_mul(&prod, &elem[j]);
            }
        }
        for (e, v) in prod {
            let slot = rest.entry(e).or_insert_with(Rational::zero);
            *slot -= &c * v;
        }
        rest.retain(|_, v| !v.is_zero());
        out.insert(b, c);
    }
    out
}

/// `<e(E^* (x) TV), M(g) x V>` for a hypersurface V, as
/// a combination of lambda monomials on M(g) and Chern numbers of V.
pub fn hodge_tangent_euler_number(genus: u32, v: &ChernData, oracle: &HodgeOracle) -> Result<DeltaPoly, SumError> {
    let g = genus as usize;
    let m = v.dim();
    let top_e = (3 * genus).saturating_sub(3) as usize;
    // prod_{i,j} (t_j - e_i) in variables (e_1..e_g, t_1..t_m)
    let mut p: HashMap<Exps, Rational> = HashMap::from([(vec![0; g + m], Rational::one())]);
    for i in 0..g {
        for j in 0..m {
            let mut t = vec![0; g + m];
            t[g + j] = 1;
            let mut e = vec![0; g + m];
            e[i] = 1;
            let f = HashMap::from([(t, Rational::one()), (e, -Rational::one())]);
            p = poly_mul(&p, &f);
        }
    }
    p.retain(|e, _| e[..g].iter().sum::<u32>() as usize == top_e && e[g..].iter().sum::<u32>() as usize == m);

    // reduce in the genus roots, then in the tangent roots
    let mut by_t: BTreeMap<Exps, HashMap<Exps, Rational>> = BTreeMap::new();
    for (e, c) in &p {
        by_t.entry(e[g..].to_vec()).or_default().insert(e[..g].to_vec(), c.clone());
    }
    let mut by_lambda: BTreeMap<Exps, HashMap<Exps, Rational>> = BTreeMap::new();
    for (t, part) in &by_t {
        for (lam, c) in to_elementary(part, g) {
            *by_lambda.entry(lam).or_default().entry(t.clone()).or_insert_with(Rational::zero) += c;
        }
    }
    let mut total = DeltaPoly::zero();
    for (lam, part) in &by_lambda {
        let lambda_value = oracle.intersect(&HodgeMonomial::new(genus, &[], lam))?;
        if lambda_value.is_zero() {
            continue;
        }
        for (cexp, c) in to_elementary(part, m) {
            if c.is_zero() {
                continue;
            }
            let ks: Vec<usize> = cexp
                .iter()
                .enumerate()
                .flat_map(|(i, &r)| std::iter::repeat(i + 1).take(r as usize))
                .collect();
            total = &total + &v.chern_number(&ks).scale(&(&c * &lambda_value));
        }
    }
    Ok(total)
}

// ---- reports ----

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCitations {
    schema: String,
    entries: BTreeMap<String, String>,
}

/// Citation strings keyed by report entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Citations {
    origin: String,
    entries: BTreeMap<String, String>,
}

impl Citations {
    pub fn load(src: &DataSource) -> Result<Self, DataError> {
        let (origin, text) = src.read(CITATIONS)?;
        let raw: RawCitations = serde_json::from_str(&text).map_err(|e| DataError::Parse {
            origin: origin.clone(),
            message: e.to_string(),
        })?;
        if raw.schema != "gwverify.citations/1" {
            return Err(DataError::schema(&origin, "schema", format!("unexpected schema {:?}", raw.schema)));
        }
        Ok(Citations {
            origin,
            entries: raw.entries,
        })
    }

    pub fn get(&self, key: &str) -> Result<String, DataError> {
        self.entries
            .get(key)
            .cloned()
            .ok_or_else(|| DataError::schema(&self.origin, format!("entries.{key}"), "missing citation"))
    }
}

/// Hypersurface degree, numeric or symbolic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaSpec {
    Value(i64),
    Symbolic,
}

impl DeltaSpec {
    pub fn poly(&self) -> DeltaPoly {
        match self {
            DeltaSpec::Value(d) => DeltaPoly::constant(int(*d)),
            DeltaSpec::Symbolic => DeltaPoly::var(),
        }
    }
}

impl fmt::Display for DeltaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaSpec::Value(d) => write!(f, "{d}"),
            DeltaSpec::Symbolic => write!(f, "{DELTA_VAR} (symbolic)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportTerm {
    pub name: String,
    pub value: String,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub example: u8,
    pub title: String,
    pub delta: DeltaSpec,
    pub graphs: Vec<String>,
    pub graphs_citation: String,
    pub terms: Vec<ReportTerm>,
    pub checks: Vec<ReportCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn term(&self, name: &str) -> Option<&str> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value.as_str())
    }

    fn add_term(&mut self, name: &str, value: String, citation: String) {
        self.terms.push(ReportTerm {
            name: name.into(),
            value,
            citation,
        });
    }

    fn add_check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(ReportCheck {
            name: name.into(),
            passed,
            detail,
        });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "example {}: {}", self.example, self.title)?;
        writeln!(f, "delta: {}", self.delta)?;
        writeln!(f, "contributing graphs ({}): [{}]", self.graphs.len(), self.graphs_citation)?;
        for g in &self.graphs {
            writeln!(f, "  {g}")?;
        }
        writeln!(f, "terms:")?;
        for t in &self.terms {
            writeln!(f, "  {} = {}  [{}]", t.name, t.value, t.citation)?;
        }
        writeln!(f, "checks:")?;
        for c in &self.checks {
            writeln!(f, "  {} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        write!(f, "verdict: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

fn render(d: &DeltaPoly) -> String {
    d.render(DELTA_VAR)
}


/// Everything assembly needs: data, oracle and citations.
pub struct Context {
    pub source: DataSource,
    pub oracle: HodgeOracle,
    pub citations: Citations,
}

impl Context {
    pub fn load(source: DataSource) -> Result<Self, SumError> {
        let oracle = HodgeOracle::load(&source)?;
        let citations = Citations::load(&source)?;
        Ok(Context {
            source,
            oracle,
            citations,
        })
    }
}

/// Inputs of the genus 1 degree 0 example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleOneInput {
    /// ambient projective space dimension
    pub n: usize,
    pub insertion: GenusOneInsertion,
}

impl Default for ExampleOneInput {
    fn default() -> Self {
        ExampleOneInput {
            n: 4,
            insertion: GenusOneInsertion::DmPoint,
        }
    }
}

/// Builds the report for example 1, 2 or 3.
pub fn assemble_example(
    ctx: &Context,
    example: u8,
    delta: DeltaSpec,
    one: &ExampleOneInput,
) -> Result<VerificationReport, SumError> {
    if let DeltaSpec::Value(d) = delta {
        let min = if example == 1 { 0 } else { 1 };
        if d < min || d > MAX_CONTACT as i64 {
            return Err(SumError::BadDelta(d));
        }
    }
    match example {
        1 => example_one(ctx, delta, one),
        2 => example_two(ctx, delta),
        3 => example_three(ctx, delta),
        e => Err(SumError::UnknownExample(e)),
    }
}

fn new_report(example: u8, title: &str, delta: DeltaSpec, graphs_citation: String) -> VerificationReport {
    VerificationReport {
        example,
        title: title.into(),
        delta,
        graphs: vec![],
        graphs_citation,
        terms: vec![],
        checks: vec![],
    }
}

fn example_one(ctx: &Context, delta: DeltaSpec, input: &ExampleOneInput) -> Result<VerificationReport, SumError> {
    let cite = |k: &str| ctx.citations.get(k);
    let x = projective_space(input.n)?;
    let mut r = new_report(
        1,
        &format!("genus 1 degree 0 invariants of P{} relative to a hypersurface", input.n),
        delta,
        cite("ex1.graphs")?,
    );
    let graphs = enumerate_graphs(
        1,
        &[],
        0,
        GraphConstraints {
            x_side_degree_one: false,
            marked_points_on_x: false,
            genus_cap_v: 1,
        },
    )?;
    r.graphs = graphs.iter().map(|g| g.to_string()).collect();
    r.add_check("one-vertex graphs", graphs.len() == 2, format!("{} graphs", graphs.len()));

    let ins = &input.insertion;
    let (key, label) = match ins {
        GenusOneInsertion::DmPoint => ("j", "j".to_string()),
        GenusOneInsertion::Divisor(a) => ("alpha", format!("alpha = ({})x", render(a))),
    };
    r.title = format!("{}, insertion {label}", r.title);

    if delta == DeltaSpec::Value(0) {
        // V empty: the relative invariant is the absolute one
        let abs = gw_genus1_deg0_absolute(&x, ins);
        r.add_term("absolute", render(&abs), cite(&format!("ex1.absolute.{key}"))?);
        r.add_term("relative", render(&abs), cite(&format!("ex1.relative.{key}"))?);
        r.add_term("correction", "0".into(), cite(&format!("ex1.correction.{key}"))?);
        r.add_check("absolute = relative/0! + correction", true, "V empty".into());
        return Ok(r);
    }
    let v = hypersurface(input.n, &delta.poly())?;
    let split = genus1_split(&x, &v, ins)?;
    let n = input.n;
    let direct = match ins {
        GenusOneInsertion::DmPoint => v.euler_char().scale(&Rational::new(1.into(), 2.into())),
        GenusOneInsertion::Divisor(a) => {
            let lam = psi_intersect(1, &[1]).map_err(HodgeError::from)?;
            v.integrate(&(a * &v.c(n - 2)), n - 1).scale(&-lam)
        }
    };
    r.add_term("absolute", render(&split.absolute), cite(&format!("ex1.absolute.{key}"))?);
    r.add_term("relative", render(&split.relative), cite(&format!("ex1.relative.{key}"))?);
    r.add_term("correction", render(&direct), cite(&format!("ex1.correction.{key}"))?);
    r.add_term("bundle-side relative invariant", render(&split.bundle), cite("ex1.bundle")?);
    r.add_check(
        "bundle-side invariant equals the correction term",
        split.bundle == direct,
        format!("{} vs {}", render(&split.bundle), render(&direct)),
    );
    r.add_check(
        "absolute = relative/0! + correction",
        split.consistent(),
        format!(
            "{} = ({}) + ({})",
            render(&split.absolute),
            render(&split.relative),
            render(&split.bundle)
        ),
    );
    Ok(r)
}

fn check_graph_counts(
    r: &mut VerificationReport,
    delta: DeltaSpec,
    probe: impl Fn(u32) -> Result<(usize, usize), SumError>,
    expect: impl Fn(u32) -> (usize, usize),
) -> Result<(), SumError> {
    let range: Vec<u32> = match delta {
        DeltaSpec::Value(d) => vec![d as u32],
        DeltaSpec::Symbolic => (1..=7).collect(),
    };
    for d in range {
        let got = probe(d)?;
        let want = expect(d);
        r.add_check(
            &format!("surviving graphs at delta = {d}"),
            got == want,
            format!("{} total, {} with a top-genus V vertex (expected {}, {})", got.0, got.1, want.0, want.1),
        );
    }
    Ok(())
}

fn example_two(ctx: &Context, delta: DeltaSpec) -> Result<VerificationReport, SumError> {
    let cite = |k: &str| ctx.citations.get(k);
    let mut r = new_report(
        2,
        "genus 2 degree 1 invariant of P1 with kappa^4 and two point insertions, relative to delta points",
        delta,
        cite("ex2.graphs")?,
    );
    let constraints = GraphConstraints {
        x_side_degree_one: true,
        marked_points_on_x: true,
        genus_cap_v: 2,
    };
    let regime = FilterRegime {
        n: 1,
        kappa_trivial: false,
        g_top: 2,
    };
    let survivors = |d: u32| -> Result<Vec<BipartiteGraph>, SumError> {
        let all = enumerate_graphs(2, &vec![1; d as usize], 2, constraints)?;
        Ok(surviving_graphs(&all, regime))
    };
    if let DeltaSpec::Value(d) = delta {
        r.graphs = survivors(d as u32)?.iter().map(|g| g.to_string()).collect();
    } else {
        r.graphs = vec![
            "all V vertices of genus 0 (1 graph)".into(),
            "one genus 2 V vertex with contact 1, the rest genus 0 (delta graphs)".into(),
        ];
    }
    check_graph_counts(
        &mut r,
        delta,
        |d| {
            let s = survivors(d)?;
            let top = s.iter().filter(|g| g.max_v_genus() == 2).count();
            Ok((s.len(), top))
        },
        |d| (1 + d as usize, d as usize),
    )?;

    let absolute = problem_total(&builtin(&ctx.source, "p1-genus2-absolute")?, &ctx.oracle)?;
    let psi4 = ctx.oracle.intersect(&HodgeMonomial::new(2, &[4], &[0, 0]))?;
    let genus0 = int(1);
    // one type-2 graph per point of V
    let count = delta.poly();
    let correction = count.scale(&(&psi4 * &genus0));
    let relative = &DeltaPoly::constant(absolute.clone()) - &correction;

    r.add_term("absolute", absolute.to_string(), cite("ex2.absolute")?);
    r.add_term("<psi_1^4, M(2,1)>", psi4.to_string(), cite("ex2.psi4")?);
    r.add_term("genus 0 factor", genus0.to_string(), cite("ex2.genus0")?);
    r.add_term("correction", render(&correction), cite("ex2.correction")?);
    r.add_term("relative/delta!", render(&relative), cite("ex2.relative")?);

    let at1 = &absolute - &(&psi4 * &genus0);
    let loc = problem_total(&builtin(&ctx.source, "p1-genus2-relative")?, &ctx.oracle)?;
    r.add_term("relative at delta = 1 (localization)", loc.to_string(), cite("ex2.localization")?);
    r.add_check(
        "sum formula matches localization at delta = 1",
        at1 == loc,
        format!("{at1} vs {loc}"),
    );
    Ok(r)
}

fn example_three(ctx: &Context, delta: DeltaSpec) -> Result<VerificationReport, SumError> {
    let cite = |k: &str| ctx.citations.get(k);
    let mut r = new_report(
        3,
        "genus 3 degree 1 invariant of P4 through a point, relative to a degree delta hypersurface",
        delta,
        cite("ex3.graphs")?,
    );
    let constraints = GraphConstraints {
        x_side_degree_one: true,
        marked_points_on_x: true,
        genus_cap_v: 3,
    };
    let regime = FilterRegime {
        n: 4,
        kappa_trivial: true,
        g_top: 3,
    };
    let survivors = |d: u32| -> Result<Vec<BipartiteGraph>, SumError> {
        let all = enumerate_graphs(3, &[d], 1, constraints)?;
        Ok(surviving_graphs(&all, regime))
    };
    if let DeltaSpec::Value(d) = delta {
        r.graphs = survivors(d as u32)?.iter().map(|g| g.to_string()).collect();
    } else {
        r.graphs = vec![
            "all V vertices of genus 0".into(),
            "one genus 3 V vertex with contact 1, the rest genus 0".into(),
        ];
    }
    check_graph_counts(
        &mut r,
        delta,
        |d| {
            let s = survivors(d)?;
            let top = s.iter().filter(|g| g.max_v_genus() == 3).count();
            Ok((s.len(), top))
        },
        |_| (2, 1),
    )?;

    let absolute = problem_total(&builtin(&ctx.source, "p4-absolute")?, &ctx.oracle)?;
    let v = hypersurface(4, &delta.poly())?;
    let euler = hodge_tangent_euler_number(3, &v, &ctx.oracle)?;
    let pushforward = problem_total(&builtin(&ctx.source, "pushforward-degree-g3")?, &ctx.oracle)?;
    let genus0 = int(1);
    let correction = euler.scale(&(&pushforward * &genus0));
    let bracket = &v.chern_number(&[1, 2]) - &v.chern_number(&[3]);
    let via_chern = bracket.scale(&Rational::new(1.into(), 362880.into()));
    let relative = &DeltaPoly::constant(absolute.clone()) - &correction;

    r.add_term("absolute", absolute.to_string(), cite("ex3.absolute")?);
    r.add_term("genus 0 factor", genus0.to_string(), cite("ex3.genus0")?);
    r.add_term("<e(E^* x TV), M(3) x V>", render(&euler), cite("ex3.hodge_euler")?);
    r.add_term("pushforward degree", pushforward.to_string(), cite("ex3.pushforward")?);
    r.add_term(
        "correction as degree times Euler number",
        format!("{pushforward} * ({})", render(&euler)),
        cite("ex3.correction")?,
    );
    r.add_term("correction", render(&correction), cite("ex3.correction")?);
    r.add_term("relative", render(&relative), cite("ex3.relative")?);
    r.add_check(
        "correction equals <c1 c2 - c3, V>/362880",
        correction == via_chern,
        format!("{} vs {}", render(&correction), render(&via_chern)),
    );

    let d = DeltaPoly::var();
    let closed = (&(&(&d * &d) - &d.scale(&int(5))) + &DeltaPoly::constant(int(8)))
        .scale(&Rational::new(1.into(), 72576.into()));
    let closed = match delta {
        DeltaSpec::Value(x) => DeltaPoly::constant((&d * &closed).eval(&int(x))),
        DeltaSpec::Symbolic => &d * &closed,
    };
    r.add_term("closed form", render(&closed), cite("ex3.closed_form")?);
    r.add_check(
        "correction equals the closed form",
        correction == closed,
        format!("{} vs {}", render(&correction), render(&closed)),
    );

    let v1 = hypersurface(4, &DeltaPoly::one())?;
    let at1 = &absolute - &(&hodge_tangent_euler_number(3, &v1, &ctx.oracle)?.eval(&Rational::one()) * &pushforward);
    let loc = problem_total(&builtin(&ctx.source, "p4-relative-delta1")?, &ctx.oracle)?;
    r.add_term("relative at delta = 1 (localization)", loc.to_string(), cite("ex3.localization")?);
    r.add_check(
        "sum formula matches localization at delta = 1",
        at1 == loc,
        format!("{at1} vs {loc}"),
    );
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern_geometry::hypersurface_symbolic;
    use crate::exact_arith::rat;

    fn p1_genus2(k: u32) -> GwSetting {
        GwSetting {
            n: 1,
            g: 2,
            k,
            a_dot_v: 7,
            c1_a: 2,
            a_is_zero: false,
            kappa_trivial: false,
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(vir_dim(&p1_genus2(2), None).unwrap(), 12);
        assert_eq!(vir_dim(&p1_genus2(2), Some(&[1; 7])).unwrap(), 12);
        assert!(matches!(
            vir_dim(&p1_genus2(2), Some(&[1; 6])),
            Err(SumError::ContactMismatch { got: 6, expected: 7 })
        ));
        let e = GwSetting {
            n: 7,
            g: 1,
            k: 1,
            a_dot_v: 0,
            c1_a: 0,
            a_is_zero: true,
            kappa_trivial: true,
        };
        assert_eq!(vir_dim(&e, None).unwrap(), 2);
    }

    #[test]
    fn hollow_and_stability() {
        let lines = |delta: i64| -> Vec<Candidate> {
            (0..=3)
                .flat_map(|g| (1..=4).map(move |d| Candidate { genus: g, c1_a: 5 * d, a_dot_v: delta * d }))
                .collect()
        };
        assert!(hollow_sufficient(4, &lines(6)));
        assert!(!hollow_sufficient(4, &lines(5)));
        assert!(hollow_sufficient(4, &[]));
        assert!(stability_sufficient(4, 3, &[(5, 15)]));
        assert!(!stability_sufficient(4, 3, &[(5, 5), (10, 10)]));
        assert!(stability_sufficient(4, 3, &[]));
    }

    #[test]
    fn verdicts() {
        let s = |n, g, kappa_trivial, a_is_zero| GwSetting {
            n,
            g,
            k: 1,
            a_dot_v: 1,
            c1_a: 1,
            a_is_zero,
            kappa_trivial,
        };
        assert_eq!(thm1_verdict(&s(5, 3, false, false)), Verdict::Guaranteed);
        assert_eq!(
            thm1_verdict(&s(4, 3, true, false)),
            Verdict::NotGuaranteed { counterexample: Some(3) }
        );
        assert_eq!(
            thm1_verdict(&s(1, 2, false, false)),
            Verdict::NotGuaranteed { counterexample: Some(2) }
        );
        assert_eq!(
            thm1_verdict(&s(3, 1, true, true)),
            Verdict::NotGuaranteed { counterexample: Some(1) }
        );
        assert_eq!(thm1_verdict(&s(3, 3, true, false)), Verdict::GuaranteedPrimaryOnly);
    }

    #[test]
    fn example_two_graph_counts() {
        let c = GraphConstraints {
            x_side_degree_one: true,
            marked_points_on_x: true,
            genus_cap_v: 2,
        };
        let regime = FilterRegime { n: 1, kappa_trivial: false, g_top: 2 };
        for d in 1..=7u32 {
            let all = enumerate_graphs(2, &vec![1; d as usize], 2, c).unwrap();
            let dd = d as usize;
            assert_eq!(all.len(), 1 + 2 * dd + dd * (dd - 1) / 2);
            assert_eq!(surviving_graphs(&all, regime).len(), 1 + dd);
        }
    }

    #[test]
    fn example_three_graph_counts() {
        let c = GraphConstraints {
            x_side_degree_one: true,
            marked_points_on_x: true,
            genus_cap_v: 3,
        };
        let regime = FilterRegime { n: 4, kappa_trivial: true, g_top: 3 };
        for d in 1..=6 {
            let all = enumerate_graphs(3, &[d], 1, c).unwrap();
            assert_eq!(surviving_graphs(&all, regime).len(), 2, "delta = {d}");
        }
    }

    #[test]
    fn genus_zero_graphs_are_trees() {
        let c = GraphConstraints {
            x_side_degree_one: true,
            marked_points_on_x: true,
            genus_cap_v: 3,
        };
        for g in enumerate_graphs(0, &[4], 0, c).unwrap() {
            assert_eq!(g.loop_genus(), 0);
            assert!(g.v_vertices.iter().all(|v| v.genus == 0));
        }
    }

    #[test]
    fn degree_zero_genus_one() {
        let c = GraphConstraints {
            x_side_degree_one: false,
            marked_points_on_x: false,
            genus_cap_v: 1,
        };
        assert_eq!(enumerate_graphs(1, &[], 0, c).unwrap().len(), 2);
    }

    #[test]
    fn hodge_tangent_matches_three_term_formula() {
        let oracle = HodgeOracle::load(&DataSource::embedded()).unwrap();
        let v = hypersurface_symbolic(4).unwrap();
        let got = hodge_tangent_euler_number(3, &v, &oracle).unwrap();
        let (l123, l2, l3) = (rat(1, 1451520), rat(1, 725760), rat(0, 1));
        let c = |ks: &[usize]| v.chern_number(ks);
        let want = &(&(&c(&[1, 2]) - &c(&[3]).scale(&int(3))).scale(&l123) + &c(&[3]).scale(&l2))
            + &(&(&c(&[1, 1, 1]) - &c(&[1, 2]).scale(&int(3))) + &c(&[3]).scale(&int(3))).scale(&l3);
        assert_eq!(got, want);
    }

    fn ctx() -> Context {
        Context::load(DataSource::embedded()).unwrap()
    }

    #[test]
    fn reports_pass() {
        let c = ctx();
        for ex in 1..=3u8 {
            for d in [DeltaSpec::Value(1), DeltaSpec::Value(3), DeltaSpec::Symbolic] {
                let r = assemble_example(&c, ex, d, &ExampleOneInput::default()).unwrap();
                assert!(r.passed(), "{r}");
            }
        }
        let alpha = ExampleOneInput {
            n: 4,
            insertion: GenusOneInsertion::Divisor(DeltaPoly::one()),
        };
        assert!(assemble_example(&c, 1, DeltaSpec::Symbolic, &alpha).unwrap().passed());
    }

    #[test]
    fn report_values() {
        let c = ctx();
        let r = assemble_example(&c, 2, DeltaSpec::Value(1), &ExampleOneInput::default()).unwrap();
        assert_eq!(r.term("absolute"), Some("1/240"));
        assert_eq!(r.term("correction"), Some("1/1152"));
        assert_eq!(r.term("relative/delta!"), Some("19/5760"));
        let r = assemble_example(&c, 3, DeltaSpec::Value(1), &ExampleOneInput::default()).unwrap();
        assert_eq!(r.term("absolute"), Some("-37/82944"));
        assert_eq!(r.term("relative"), Some("-97/193536"));
        let r = assemble_example(&c, 3, DeltaSpec::Symbolic, &ExampleOneInput::default()).unwrap();
        println!("{r}");
        assert!(matches!(
            assemble_example(&c, 4, DeltaSpec::Symbolic, &ExampleOneInput::default()),
            Err(SumError::UnknownExample(4))
        ));
        assert!(matches!(
            assemble_example(&c, 2, DeltaSpec::Value(0), &ExampleOneInput::default()),
            Err(SumError::BadDelta(0))
        ));
    }
}
