//! Compiles a clause set into one weighted digraph `G` whose permanent is
//! `#0 − #1`.
//!
//! Every monomial becomes a gadget block on the diagonal. Every variable owns
//! one directed cycle of weight-1 "external" edges through one slot vertex in
//! each gadget of a clause that contains it. A cycle cover either runs the
//! whole external cycle (variable = 0) or none of it (variable = 1). A gadget
//! whose slots are all left to its internal edges contributes `−1`; any other
//! gadget contributes `+1`. Covers that leave a quadratic gadget through the
//! slot opposite to the one they entered come in pairs of opposite sign and
//! cancel.
//!
//! Two ways of fixing boundary variables are supported:
//!
//! * [`Mode::Substitution`] folds the boundary bits into the polynomial first
//!   and encodes the reduced clause set (unary clauses become single-vertex
//!   gadgets with a `−1` self-loop).
//! * [`Mode::GraphFix`] encodes the raw polynomial: a variable fixed to 1 gets
//!   no external edges, a variable fixed to 0 has its cycle routed through an
//!   extra forcing vertex that has no self-loop.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::gf2::{self, BoundaryAssignment, Gf2Poly, Labeling, PolyError, VarId};
use crate::matrix::IntMatrix;
use crate::statevec::DyadicAmplitude;

pub const DEFAULT_BETAS: [i64; 3] = [-2, 1, 1];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("cubic gadget weights {0:?} must multiply to -2")]
    BadBetaProduct([i64; 3]),
    #[error("boundary values contradict a line without hadamards; the amplitude is zero")]
    ConflictingBoundary,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[serde(rename = "subst")]
    Substitution,
    #[default]
    GraphFix,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Substitution => "subst",
            Mode::GraphFix => "graph-fix",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "subst" | "substitution" => Ok(Mode::Substitution),
            "graph-fix" | "graphfix" => Ok(Mode::GraphFix),
            other => Err(format!("unknown mode `{other}` (expected subst or graph-fix)")),
        }
    }
}

/// A gadget block and the local indices of its connection slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetTemplate {
    pub block: IntMatrix,
    pub slots: Vec<usize>,
}

/// Two-variable clause: slots 0 and 1, vertex 2 internal.
pub fn gadget_quadratic() -> GadgetTemplate {
    GadgetTemplate {
        block: IntMatrix::from_rows(&[[0, -1, 1], [-1, 0, 1], [1, 1, 1]]).unwrap(),
        slots: vec![0, 1],
    }
}

/// Three-variable clause: a weighted triangle with unit self-loops, all
/// three vertices are slots.
pub fn gadget_cubic(betas: [i64; 3]) -> Result<GadgetTemplate, EncodeError> {
    let [b1, b2, b3] = betas;
    if b1.checked_mul(b2).and_then(|p| p.checked_mul(b3)) != Some(-2) {
        return Err(EncodeError::BadBetaProduct(betas));
    }
    Ok(GadgetTemplate {
        block: IntMatrix::from_rows(&[[1, b1, 0], [0, 1, b2], [b3, 0, 1]]).unwrap(),
        slots: vec![0, 1, 2],
    })
}

/// Single-variable clause: one vertex with a `−1` self-loop.
pub fn gadget_unary() -> GadgetTemplate {
    GadgetTemplate {
        block: IntMatrix::from_rows(&[[-1]]).unwrap(),
        slots: vec![0],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "role", rename_all = "kebab-case")]
pub enum VertexRole {
    Slot {
        clause: usize,
        slot: usize,
        var: VarId,
    },
    Internal {
        clause: usize,
    },
    /// Forces the cycle of a variable fixed to 0.
    Forcing {
        var: VarId,
    },
    /// Weight-2 self-loop for a free variable that occurs in no clause.
    Multiplier {
        var: VarId,
    },
    /// Lone `−1` vertex carrying the constant term.
    Sign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExternalEdge {
    pub from: usize,
    pub to: usize,
    pub var: VarId,
}

/// Where the constant term of `f` went.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SignFold {
    None,
    /// Row of a quadratic gadget's internal vertex was negated.
    NegatedRow {
        row: usize,
    },
    /// A `[−1]` vertex was appended.
    SignVertex {
        vertex: usize,
    },
}

#[derive(Clone, Debug)]
pub struct Encoding {
    pub matrix: IntMatrix,
    pub h: u32,
    pub mode: Mode,
    pub vertex_labels: Vec<VertexRole>,
    pub external_edges: Vec<ExternalEdge>,
    pub sign_fold: SignFold,
    pub var_names: BTreeMap<VarId, String>,
    pub clause_count: usize,
    pub forcing_vertices: usize,
    pub multiplier_vertices: usize,
    pub warnings: Vec<String>,
}

impl Encoding {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `3·clauses + forcing + multiplier (+ sign)` vertices at most.
    pub fn size_bound(&self) -> usize {
        3 * self.clause_count
            + self.forcing_vertices
            + self.multiplier_vertices
            + usize::from(matches!(self.sign_fold, SignFold::SignVertex { .. }))
    }

    /// Graphviz digraph. Internal weights come from the matrix with external
    /// contributions subtracted; external edges are drawn blue with weight 1.
    pub fn to_dot(&self) -> String {
        let mut internal = self.matrix.clone();
        for e in &self.external_edges {
            internal[(e.from, e.to)] -= 1;
        }
        let name = |v: VarId| self.var_names.get(&v).cloned().unwrap_or_else(|| v.to_string());
        let mut out = String::from("digraph G {\n");
        for (i, role) in self.vertex_labels.iter().enumerate() {
            let label = match role {
                VertexRole::Slot { clause, slot, var } => format!("C{clause}.{slot} {}", name(*var)),
                VertexRole::Internal { clause } => format!("C{clause}.int"),
                VertexRole::Forcing { var } => format!("force {}", name(*var)),
                VertexRole::Multiplier { var } => format!("x2 {}", name(*var)),
                VertexRole::Sign => "sign".to_string(),
            };
            let _ = writeln!(out, "  v{i} [label=\"{label}\"];");
        }
        for (i, j, w) in internal.entries() {
            let _ = writeln!(out, "  v{i} -> v{j} [label=\"{w}\"];");
        }
        for e in &self.external_edges {
            let _ = writeln!(
                out,
                "  v{} -> v{} [label=\"1\", color=blue, var=\"{}\"];",
                e.from,
                e.to,
                name(e.var)
            );
        }
        out.push_str("}\n");
        out
    }
}

pub fn export_dot(e: &Encoding) -> String {
    e.to_dot()
}

pub fn export_matrix_market(m: &IntMatrix) -> String {
    m.to_matrix_market()
}

/// `⟨out|U|in⟩ = per(G) / √2^h`.
pub fn amplitude_from_permanent(p: BigInt, h: u32) -> DyadicAmplitude {
    DyadicAmplitude { k: p, h }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Fix {
    Free,
    Zero,
    One,
    /// Fixed to both values: an isolated forcing vertex, permanent 0.
    Contradiction,
}

struct Builder {
    betas: [i64; 3],
    clauses: Vec<Vec<VarId>>,
    fixes: BTreeMap<VarId, Fix>,
    /// Free variables with no clause; each doubles the permanent.
    unused: Vec<VarId>,
    negate: bool,
}

impl Builder {
    fn build(self, h: u32, mode: Mode, var_names: BTreeMap<VarId, String>) -> Result<Encoding, EncodeError> {
        let quad = gadget_quadratic();
        let cubic = gadget_cubic(self.betas)?;
        let unary = gadget_unary();

        let mut blocks = Vec::with_capacity(self.clauses.len());
        let mut labels = Vec::new();
        // slot vertices of each variable, in clause order
        let mut visits: BTreeMap<VarId, Vec<usize>> = BTreeMap::new();
        let mut first_internal = None;
        for (clause, vars) in self.clauses.iter().enumerate() {
            let template = match vars.len() {
                1 => &unary,
                2 => &quad,
                _ => &cubic,
            };
            let base = labels.len();
            for local in 0..template.block.dim() {
                match template.slots.iter().position(|&s| s == local) {
                    Some(slot) => {
                        let var = vars[slot];
                        visits.entry(var).or_default().push(base + local);
                        labels.push(VertexRole::Slot { clause, slot, var });
                    }
                    None => {
                        first_internal.get_or_insert(base + local);
                        labels.push(VertexRole::Internal { clause });
                    }
                }
            }
            blocks.push((base, &template.block));
        }

        let mut forcing = Vec::new();
        let mut cycles: Vec<(VarId, Vec<usize>)> = Vec::new();
        let mut vars: Vec<VarId> = visits.keys().copied().collect();
        vars.extend(self.fixes.keys().copied());
        vars.sort_unstable();
        vars.dedup();
        for var in vars {
            let fix = self.fixes.get(&var).copied().unwrap_or(Fix::Free);
            let slots = visits.get(&var).cloned().unwrap_or_default();
            match fix {
                Fix::One => {}
                Fix::Free if slots.is_empty() => {}
                Fix::Free => cycles.push((var, slots)),
                Fix::Zero | Fix::Contradiction => {
                    let f = labels.len();
                    labels.push(VertexRole::Forcing { var });
                    forcing.push(f);
                    if fix == Fix::Zero {
                        let mut cycle = slots;
                        cycle.push(f);
                        cycles.push((var, cycle));
                    }
                }
            }
        }
        let mut multipliers = Vec::new();
        for &var in &self.unused {
            multipliers.push(labels.len());
            labels.push(VertexRole::Multiplier { var });
        }
        let sign_fold = match (self.negate, first_internal) {
            (false, _) => SignFold::None,
            (true, Some(row)) => SignFold::NegatedRow { row },
            (true, None) => {
                labels.push(VertexRole::Sign);
                SignFold::SignVertex {
                    vertex: labels.len() - 1,
                }
            }
        };

        let mut matrix = IntMatrix::zeros(labels.len());
        for (base, block) in blocks {
            block.place_into(&mut matrix, base);
        }
        let mut external_edges = Vec::new();
        for (var, cycle) in cycles {
            for (k, &from) in cycle.iter().enumerate() {
                let to = cycle[(k + 1) % cycle.len()];
                matrix[(from, to)] += 1;
                external_edges.push(ExternalEdge { from, to, var });
            }
        }
        for &v in &multipliers {
            matrix[(v, v)] = 2;
        }
        match sign_fold {
            SignFold::NegatedRow { row } => matrix.scale_row(row, -1),
            SignFold::SignVertex { vertex } => matrix[(vertex, vertex)] = -1,
            SignFold::None => {}
        }

        let warnings = structural_warnings(&self.clauses);
        Ok(Encoding {
            matrix,
            h,
            mode,
            vertex_labels: labels,
            external_edges,
            sign_fold,
            var_names,
            clause_count: self.clauses.len(),
            forcing_vertices: forcing.len(),
            multiplier_vertices: multipliers.len(),
            warnings,
        })
    }
}

/// Flags clause sets outside the shape the cancellation argument covers.
fn structural_warnings(clauses: &[Vec<VarId>]) -> Vec<String> {
    let mut cubic: BTreeMap<VarId, usize> = BTreeMap::new();
    let mut quadratic: BTreeMap<VarId, usize> = BTreeMap::new();
    for c in clauses {
        let counts = match c.len() {
            3 => &mut cubic,
            2 => &mut quadratic,
            _ => continue,
        };
        for v in c {
            *counts.entry(*v).or_default() += 1;
        }
    }
    let mut out = Vec::new();
    for (v, &n) in &cubic {
        if n > 1 {
            out.push(format!(
                "{v} occurs in {n} cubic clauses; partial cycles may not cancel"
            ));
        } else if !quadratic.contains_key(v) {
            out.push(format!("{v} occurs in a cubic clause but in no quadratic clause"));
        }
    }
    out
}

/// Options for [`encode_with`].
#[derive(Clone, Copy, Debug)]
pub struct EncodeOptions {
    pub betas: [i64; 3],
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions { betas: DEFAULT_BETAS }
    }
}

/// Encodes an already reduced polynomial. `free_vars` lists every unbound
/// variable, including ones that no longer occur in `f`.
pub fn encode_polynomial(
    f: &Gf2Poly,
    free_vars: &[VarId],
    h: u32,
    names: impl Fn(VarId) -> String,
    opts: EncodeOptions,
) -> Result<Encoding, EncodeError> {
    let used = f.variables();
    let clauses: Vec<Vec<VarId>> = f.monomials().map(|m| m.vars().to_vec()).collect();
    let unused: Vec<VarId> = free_vars.iter().copied().filter(|v| !used.contains(v)).collect();
    let var_names = used.iter().chain(&unused).map(|&v| (v, names(v))).collect();
    Builder {
        betas: opts.betas,
        clauses,
        fixes: BTreeMap::new(),
        unused,
        negate: f.constant(),
    }
    .build(h, Mode::Substitution, var_names)
}

/// Encodes the raw polynomial with the boundary fixed inside the graph.
pub fn encode_graph_fix(l: &Labeling, b: &BoundaryAssignment, opts: EncodeOptions) -> Result<Encoding, EncodeError> {
    // substitute() validates lengths; the reduced polynomial itself is not needed here
    gf2::substitute(l, b)?;
    let mut fixes: BTreeMap<VarId, Fix> = BTreeMap::new();
    let pins = l
        .input_vars
        .iter()
        .zip(b.in_bits.bits())
        .chain(l.output_vars.iter().zip(b.out_bits.bits()));
    for (&v, &bit) in pins {
        let want = if bit { Fix::One } else { Fix::Zero };
        let entry = fixes.entry(v).or_insert(want);
        if *entry != want {
            *entry = Fix::Contradiction;
        }
    }
    let used = l.f_raw.variables();
    let unused: Vec<VarId> = (0..l.var_count() as u32)
        .map(VarId)
        .filter(|v| !used.contains(v) && !fixes.contains_key(v))
        .collect();
    let clauses = l.f_raw.monomials().map(|m| m.vars().to_vec()).collect();
    let var_names = (0..l.var_count() as u32)
        .map(|i| (VarId(i), l.label(VarId(i))))
        .collect();
    Builder {
        betas: opts.betas,
        clauses,
        fixes,
        unused,
        negate: l.f_raw.constant(),
    }
    .build(l.h, Mode::GraphFix, var_names)
}

pub fn encode(l: &Labeling, b: &BoundaryAssignment, mode: Mode) -> Result<Encoding, EncodeError> {
    encode_with(l, b, mode, EncodeOptions::default())
}

pub fn encode_with(
    l: &Labeling,
    b: &BoundaryAssignment,
    mode: Mode,
    opts: EncodeOptions,
) -> Result<Encoding, EncodeError> {
    match mode {
        Mode::GraphFix => encode_graph_fix(l, b, opts),
        Mode::Substitution => {
            let r = gf2::substitute(l, b)?;
            if r.conflict {
                return Err(EncodeError::ConflictingBoundary);
            }
            encode_polynomial(&r.poly, &r.free_vars, l.h, |v| l.label(v), opts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::gf2::{count_gap, label_circuit, GapLimits, Monomial};
    use crate::permanent::{per_naive, per_ryser};

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn boundary(i: &str, o: &str) -> BoundaryAssignment {
        BoundaryAssignment::new(i.parse().unwrap(), o.parse().unwrap())
    }

    fn mono(vs: &[u32]) -> Monomial {
        Monomial::new(&vs.iter().map(|&v| VarId(v)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn quadratic_gadget_cases() {
        let g = gadget_quadratic();
        assert_eq!(per_naive(&g.block).unwrap(), int(-1));
        assert_eq!(per_naive(&g.block.delete(&[0])).unwrap(), int(1));
        assert_eq!(per_naive(&g.block.delete(&[1])).unwrap(), int(1));
        assert_eq!(per_naive(&g.block.delete(&[0, 1])).unwrap(), int(1));
    }

    #[test]
    fn cubic_gadget_cases() {
        let g = gadget_cubic(DEFAULT_BETAS).unwrap();
        assert_eq!(per_naive(&g.block).unwrap(), int(-1));
        assert_eq!(g.block.delete(&[1]), IntMatrix::from_rows(&[[1, 0], [1, 1]]).unwrap());
        for remove in [&[0][..], &[1], &[2], &[0, 1], &[0, 2], &[1, 2], &[0, 1, 2]] {
            assert_eq!(per_naive(&g.block.delete(remove)).unwrap(), int(1), "{remove:?}");
        }
        let other = gadget_cubic([1, -1, 2]).unwrap();
        assert_eq!(per_naive(&other.block).unwrap(), int(-1));
        assert_eq!(gadget_cubic([1, 1, 1]), Err(EncodeError::BadBetaProduct([1, 1, 1])));
    }

    #[test]
    fn unary_gadget_cases() {
        let g = gadget_unary();
        assert_eq!(per_naive(&g.block).unwrap(), int(-1));
        // f = x with x in one clause: self-loop merges to 0, gap of x is 0
        let x = Gf2Poly::var(VarId(0));
        let e = encode_polynomial(&x, &[VarId(0)], 0, |v| v.to_string(), EncodeOptions::default()).unwrap();
        assert_eq!(e.matrix, IntMatrix::from_rows(&[[0]]).unwrap());
        assert_eq!(per_naive(&e.matrix).unwrap(), int(0));
        assert_eq!(count_gap(&x, &[VarId(0)], GapLimits::default()).unwrap(), 0);
    }

    #[test]
    fn transit_through_quadratic_gadget_cancels() {
        let mut m = IntMatrix::zeros(4);
        gadget_quadratic().block.place_into(&mut m, 0);
        m[(3, 0)] = 1;
        m[(1, 3)] = 1;
        assert_eq!(per_naive(&m).unwrap(), int(0));
        let mut back = IntMatrix::zeros(4);
        gadget_quadratic().block.place_into(&mut back, 0);
        back[(3, 1)] = 1;
        back[(0, 3)] = 1;
        assert_eq!(per_naive(&back).unwrap(), int(0));
    }

    #[test]
    fn single_quadratic_clause() {
        let f = Gf2Poly::from_monomials([mono(&[0, 1])], false);
        let vars = [VarId(0), VarId(1)];
        let e = encode_polynomial(&f, &vars, 0, |v| v.to_string(), EncodeOptions::default()).unwrap();
        assert_eq!(
            e.matrix,
            IntMatrix::from_rows(&[[1, -1, 1], [-1, 1, 1], [1, 1, 1]]).unwrap()
        );
        assert_eq!(per_naive(&e.matrix).unwrap(), int(2));
        let dot = e.to_dot();
        assert_eq!(dot.matches("color=blue").count(), 2);
        assert!(dot.contains("v0 -> v0 [label=\"1\", color=blue"));
        assert!(dot.contains("v1 -> v1 [label=\"1\", color=blue"));
    }

    #[test]
    fn constant_and_unused_variables() {
        // f = x0·x1 + 1 over {x0, x1, x2}: gap = -(2)·2 = -4
        let f = Gf2Poly::from_monomials([mono(&[0, 1])], true);
        let vars = [VarId(0), VarId(1), VarId(2)];
        let e = encode_polynomial(&f, &vars, 0, |v| v.to_string(), EncodeOptions::default()).unwrap();
        assert_eq!(e.sign_fold, SignFold::NegatedRow { row: 2 });
        assert_eq!(e.multiplier_vertices, 1);
        assert_eq!(per_naive(&e.matrix).unwrap(), int(-4));
        assert_eq!(count_gap(&f, &vars, GapLimits::default()).unwrap(), -4);

        // constant only: a lone sign vertex
        let e = encode_polynomial(&Gf2Poly::one(), &[], 0, |v| v.to_string(), EncodeOptions::default()).unwrap();
        assert_eq!(e.matrix, IntMatrix::from_rows(&[[-1]]).unwrap());
        assert!(matches!(e.sign_fold, SignFold::SignVertex { .. }));

        // nothing at all: empty matrix, permanent 1
        let e = encode_polynomial(&Gf2Poly::zero(), &[], 0, |v| v.to_string(), EncodeOptions::default()).unwrap();
        assert_eq!(e.dim(), 0);
        assert_eq!(per_ryser(&e.matrix).unwrap(), int(1));
    }

    #[test]
    fn graph_fix_single_hadamard() {
        let l = label_circuit(&parse_circuit("qubits 1\nh 0").unwrap()).unwrap();
        let e = encode(&l, &boundary("0", "0"), Mode::GraphFix).unwrap();
        assert_eq!(e.dim(), 5);
        assert_eq!(e.forcing_vertices, 2);
        assert_eq!(per_naive(&e.matrix).unwrap(), int(1));
        assert_eq!(e.to_dot().matches("color=blue").count(), 4);
        assert_eq!(e.external_edges.len(), 4);

        let e = encode(&l, &boundary("1", "1"), Mode::GraphFix).unwrap();
        assert_eq!(e.matrix, gadget_quadratic().block);
        assert_eq!(per_naive(&e.matrix).unwrap(), int(-1));
        let dot = e.to_dot();
        assert_eq!(dot.matches(" -> ").count(), 7);
        assert_eq!(dot.matches("color=blue").count(), 0);
        assert_eq!(
            amplitude_from_permanent(int(-1), l.h).to_f64(),
            -std::f64::consts::FRAC_1_SQRT_2
        );
    }

    #[test]
    fn graph_fix_idle_line_conflict() {
        let l = label_circuit(&parse_circuit("qubits 1").unwrap()).unwrap();
        let e = encode(&l, &boundary("0", "1"), Mode::GraphFix).unwrap();
        assert_eq!(e.matrix, IntMatrix::zeros(1));
        assert_eq!(per_naive(&e.matrix).unwrap(), int(0));
        assert_eq!(
            encode(&l, &boundary("0", "1"), Mode::Substitution).unwrap_err(),
            EncodeError::ConflictingBoundary
        );
        let e = encode(&l, &boundary("0", "0"), Mode::GraphFix).unwrap();
        assert_eq!(per_naive(&e.matrix).unwrap(), int(1));
        let e = encode(&l, &boundary("1", "1"), Mode::GraphFix).unwrap();
        assert_eq!(e.dim(), 0);
    }

    #[test]
    fn external_edges_have_unit_weight_and_form_cycles() {
        let l = label_circuit(&parse_circuit("qubits 2\nh 0\nh 0\nh 1\nh 0").unwrap()).unwrap();
        for mode in [Mode::GraphFix, Mode::Substitution] {
            let e = encode(&l, &boundary("01", "10"), mode).unwrap();
            let mut out_deg: BTreeMap<(VarId, usize), usize> = BTreeMap::new();
            let mut in_deg: BTreeMap<(VarId, usize), usize> = BTreeMap::new();
            for x in &e.external_edges {
                *out_deg.entry((x.var, x.from)).or_default() += 1;
                *in_deg.entry((x.var, x.to)).or_default() += 1;
            }
            assert_eq!(out_deg, in_deg);
            assert!(out_deg.values().all(|&d| d == 1));
            assert!(e.dim() <= e.size_bound());
        }
    }

    #[test]
    fn encodings_are_deterministic() {
        let l = label_circuit(&parse_circuit("qubits 2\nh 0\nh 1\nh 0\nh 1").unwrap()).unwrap();
        let a = encode(&l, &boundary("01", "11"), Mode::GraphFix).unwrap();
        let b = encode(&l, &boundary("01", "11"), Mode::GraphFix).unwrap();
        assert_eq!(a.matrix, b.matrix);
        assert_eq!(a.to_dot(), b.to_dot());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("subst".parse::<Mode>(), Ok(Mode::Substitution));
        assert_eq!("graph-fix".parse::<Mode>(), Ok(Mode::GraphFix));
        assert!("other".parse::<Mode>().is_err());
        assert_eq!(Mode::default(), Mode::GraphFix);
    }
}
