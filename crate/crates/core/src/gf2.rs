//! GF(2) polynomials over circuit path variables.
//!
//! Every qubit line carries a Boolean variable that is replaced by a fresh
//! one at each Hadamard. A Hadamard between `e` (the line expression before
//! it) and `y` (the new variable) contributes `e·y` to `f`; a Toffoli target
//! expression `e` becomes `e ⊕ x·y` for control expressions `x`, `y`. With
//! the boundary variables fixed, `#0 − #1` over the remaining variables is the
//! amplitude numerator.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{BasisState, Circuit, Gate};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("circuit is not in normal form at gate {gate}: {reason}")]
    NotNormalized { gate: usize, reason: &'static str },
    #[error("variable {0} has no value in the assignment")]
    UnboundVariable(VarId),
    #[error("{vars} free variables exceed the enumeration limit of {limit}")]
    TooManyVariables { vars: usize, limit: usize },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("boundary length {got} does not match {qubits} qubits")]
    BoundaryLength { got: usize, qubits: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VarId(pub u32);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Line and 1-based position of a path variable; `a1` is the input of line 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VarInfo {
    pub line: usize,
    pub index: usize,
}

impl VarInfo {
    pub fn label(&self) -> String {
        if self.line < 26 {
            format!("{}{}", (b'a' + self.line as u8) as char, self.index)
        } else {
            format!("l{}_{}", self.line, self.index)
        }
    }
}

/// A product of one to three distinct variables, kept sorted.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    vars: [VarId; 3],
    len: u8,
}

impl Monomial {
    /// Builds the product of `vars` (repeats collapse, `x·x = x`).
    /// Returns `None` for an empty product or degree above three.
    pub fn new(vars: &[VarId]) -> Option<Self> {
        let set: BTreeSet<VarId> = vars.iter().copied().collect();
        if set.is_empty() || set.len() > 3 {
            return None;
        }
        let mut m = Monomial {
            vars: [VarId(0); 3],
            len: set.len() as u8,
        };
        for (slot, v) in m.vars.iter_mut().zip(set) {
            *slot = v;
        }
        Some(m)
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars[..self.len as usize]
    }

    pub fn degree(&self) -> usize {
        self.len as usize
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.vars().contains(&v)
    }

    fn product(&self, other: &Monomial) -> Result<Monomial, ()> {
        let mut all = self.vars().to_vec();
        all.extend_from_slice(other.vars());
        Monomial::new(&all).ok_or(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len.cmp(&other.len).then_with(|| self.vars().cmp(other.vars()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.vars().iter().map(ToString::to_string).collect();
        write!(f, "{}", names.join("·"))
    }
}

/// XOR of monomials plus a constant bit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Gf2Poly {
    monomials: BTreeSet<Monomial>,
    constant: bool,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Gf2Poly {
            monomials: BTreeSet::new(),
            constant: true,
        }
    }

    pub fn var(v: VarId) -> Self {
        let mut p = Self::zero();
        p.toggle(Monomial::new(&[v]).unwrap());
        p
    }

    pub fn from_monomials(monomials: impl IntoIterator<Item = Monomial>, constant: bool) -> Self {
        let mut p = Gf2Poly {
            monomials: BTreeSet::new(),
            constant,
        };
        for m in monomials {
            p.toggle(m);
        }
        p
    }

    /// Adds `m` mod 2: inserts it, or cancels an existing copy.
    pub fn toggle(&mut self, m: Monomial) {
        if !self.monomials.remove(&m) {
            self.monomials.insert(m);
        }
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.monomials.iter()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    pub fn degree(&self) -> usize {
        self.monomials.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.monomials.contains(m)
    }

    /// The sole variable if the polynomial is exactly `x`.
    pub fn as_var(&self) -> Option<VarId> {
        match (self.constant, self.monomials.len()) {
            (false, 1) => {
                let m = self.monomials.first()?;
                (m.degree() == 1).then(|| m.vars()[0])
            }
            _ => None,
        }
    }

    /// Distinct variables occurring in some monomial.
    pub fn variables(&self) -> BTreeSet<VarId> {
        self.monomials.iter().flat_map(|m| m.vars().iter().copied()).collect()
    }

    pub fn add_assign(&mut self, other: &Gf2Poly) {
        self.constant ^= other.constant;
        for m in &other.monomials {
            self.toggle(*m);
        }
    }

    /// Product with idempotent variables; `None` if a term would exceed degree three.
    pub fn mul(&self, other: &Gf2Poly) -> Option<Gf2Poly> {
        let mut out = Gf2Poly {
            monomials: BTreeSet::new(),
            constant: self.constant && other.constant,
        };
        if self.constant {
            for m in &other.monomials {
                out.toggle(*m);
            }
        }
        if other.constant {
            for m in &self.monomials {
                out.toggle(*m);
            }
        }
        for a in &self.monomials {
            for b in &other.monomials {
                out.toggle(a.product(b).ok()?);
            }
        }
        Some(out)
    }

    /// Evaluates the polynomial; every variable it mentions must be assigned.
    pub fn eval(&self, assignment: &HashMap<VarId, bool>) -> Result<bool, PolyError> {
        let mut acc = self.constant;
        for m in &self.monomials {
            let mut term = true;
            for v in m.vars() {
                term &= *assignment.get(v).ok_or(PolyError::UnboundVariable(*v))?;
            }
            acc ^= term;
        }
        Ok(acc)
    }

    /// Text form: one monomial per line as space-separated labels, then
    /// `constant <0|1>`. Ordered by degree, then by variable ids.
    pub fn to_text(&self, label: impl Fn(VarId) -> String) -> String {
        let mut out = String::new();
        for m in &self.monomials {
            let names: Vec<String> = m.vars().iter().map(|&v| label(v)).collect();
            out.push_str(&names.join(" "));
            out.push('\n');
        }
        out.push_str(if self.constant { "constant 1\n" } else { "constant 0\n" });
        out
    }
}

/// A polynomial read from text, with its variable names (indexed by `VarId`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedPoly {
    pub poly: Gf2Poly,
    pub names: Vec<String>,
}

impl ParsedPoly {
    pub fn free_vars(&self) -> Vec<VarId> {
        (0..self.names.len() as u32).map(VarId).collect()
    }
}

/// Reads the text form written by [`Gf2Poly::to_text`]. Variable ids are
/// assigned in order of first appearance; `#` starts a comment.
pub fn parse_poly(text: &str) -> Result<ParsedPoly, PolyError> {
    let mut names: Vec<String> = Vec::new();
    let mut ids: HashMap<String, VarId> = HashMap::new();
    let mut poly = Gf2Poly::zero();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens[0] == "constant" {
            match tokens[1..] {
                ["0"] => {}
                ["1"] => poly.constant ^= true,
                _ => {
                    return Err(PolyError::Parse {
                        line,
                        reason: "expected `constant 0` or `constant 1`".into(),
                    })
                }
            }
            continue;
        }
        let vars: Vec<VarId> = tokens
            .iter()
            .map(|t| {
                *ids.entry((*t).to_string()).or_insert_with(|| {
                    names.push((*t).to_string());
                    VarId(names.len() as u32 - 1)
                })
            })
            .collect();
        let m = Monomial::new(&vars).ok_or_else(|| PolyError::Parse {
            line,
            reason: "monomials must have between one and three variables".into(),
        })?;
        poly.toggle(m);
    }
    Ok(ParsedPoly { poly, names })
}

/// Result of labeling a normalized circuit.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub qubits: usize,
    pub vars: Vec<VarInfo>,
    /// `f` before any boundary values are fixed.
    pub f_raw: Gf2Poly,
    pub input_vars: Vec<VarId>,
    /// Variable carried by each line at the output (a single variable in normal form).
    pub output_vars: Vec<VarId>,
    pub h: u32,
}

impl Labeling {
    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn label(&self, v: VarId) -> String {
        self.vars[v.0 as usize].label()
    }
}

/// Fixed input and output bits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryAssignment {
    pub in_bits: BasisState,
    pub out_bits: BasisState,
}

impl BoundaryAssignment {
    pub fn new(in_bits: BasisState, out_bits: BasisState) -> Self {
        BoundaryAssignment { in_bits, out_bits }
    }

    fn check(&self, qubits: usize) -> Result<(), PolyError> {
        for len in [self.in_bits.len(), self.out_bits.len()] {
            if len != qubits {
                return Err(PolyError::BoundaryLength { got: len, qubits });
            }
        }
        Ok(())
    }
}

/// Walks the circuit creating variables and the polynomial `f`.
pub fn label_circuit(c: &Circuit) -> Result<Labeling, PolyError> {
    let q = c.qubits();
    let mut vars: Vec<VarInfo> = (0..q).map(|line| VarInfo { line, index: 1 }).collect();
    let mut counts = vec![1usize; q];
    let mut exprs: Vec<Gf2Poly> = (0..q as u32).map(|i| Gf2Poly::var(VarId(i))).collect();
    let mut touched = vec![false; q];
    let mut f_raw = Gf2Poly::zero();
    let mut h = 0u32;

    for (i, gate) in c.gates().iter().enumerate() {
        match *gate {
            Gate::Hadamard(l) => {
                counts[l] += 1;
                let v = VarId(vars.len() as u32);
                vars.push(VarInfo {
                    line: l,
                    index: counts[l],
                });
                let term = exprs[l].mul(&Gf2Poly::var(v)).ok_or(PolyError::NotNormalized {
                    gate: i,
                    reason: "hadamard term exceeds degree three",
                })?;
                f_raw.add_assign(&term);
                exprs[l] = Gf2Poly::var(v);
                touched[l] = false;
                h += 1;
            }
            Gate::Toffoli {
                control1,
                control2,
                target,
            } => {
                for l in gate.lines() {
                    if touched[l] {
                        return Err(PolyError::NotNormalized {
                            gate: i,
                            reason: "segment touches more than one toffoli",
                        });
                    }
                    touched[l] = true;
                }
                let prod = exprs[control1]
                    .mul(&exprs[control2])
                    .filter(|p| p.degree() <= 2)
                    .ok_or(PolyError::NotNormalized {
                        gate: i,
                        reason: "control product exceeds degree two",
                    })?;
                exprs[target].add_assign(&prod);
            }
        }
    }

    let output_vars = exprs
        .iter()
        .map(|e| {
            e.as_var().ok_or(PolyError::NotNormalized {
                gate: c.gates().len(),
                reason: "final segment of a line is a toffoli target",
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(Labeling {
        qubits: q,
        vars,
        f_raw,
        input_vars: (0..q as u32).map(VarId).collect(),
        output_vars,
        h,
    })
}

/// `f` with boundary values substituted.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub poly: Gf2Poly,
    /// Unbound variables in id order, including ones that no longer occur in `poly`.
    pub free_vars: Vec<VarId>,
    /// A line whose input and output share a variable was asked to change value;
    /// the amplitude is exactly zero and `poly` is meaningless.
    pub conflict: bool,
}

/// Binds input and output variables and folds the polynomial.
pub fn substitute(l: &Labeling, b: &BoundaryAssignment) -> Result<Reduced, PolyError> {
    b.check(l.qubits)?;
    let mut bound: HashMap<VarId, bool> = HashMap::new();
    let mut conflict = false;
    for (line, &v) in l.input_vars.iter().enumerate() {
        bound.insert(v, b.in_bits.bit(line));
    }
    for (line, &v) in l.output_vars.iter().enumerate() {
        let want = b.out_bits.bit(line);
        if let Some(&have) = bound.get(&v) {
            conflict |= have != want;
        } else {
            bound.insert(v, want);
        }
    }

    Ok(Reduced {
        poly: fold(&l.f_raw, &bound),
        free_vars: (0..l.var_count() as u32)
            .map(VarId)
            .filter(|v| !bound.contains_key(v))
            .collect(),
        conflict,
    })
}

/// Partial evaluation: a bound 0 kills a monomial, a bound 1 drops the variable.
pub fn fold(f: &Gf2Poly, bound: &HashMap<VarId, bool>) -> Gf2Poly {
    let mut out = Gf2Poly {
        monomials: BTreeSet::new(),
        constant: f.constant,
    };
    for m in &f.monomials {
        if m.vars().iter().any(|v| bound.get(v) == Some(&false)) {
            continue;
        }
        let rest: Vec<VarId> = m.vars().iter().copied().filter(|v| !bound.contains_key(v)).collect();
        match Monomial::new(&rest) {
            Some(r) => out.toggle(r),
            None => out.constant ^= true,
        }
    }
    out
}

/// Limits for [`count_gap`].
#[derive(Clone, Copy, Debug)]
pub struct GapLimits {
    pub max_vars: usize,
    pub threads: usize,
}

impl Default for GapLimits {
    fn default() -> Self {
        GapLimits {
            max_vars: 26,
            threads: 1,
        }
    }
}

/// `#0 − #1`: the sum of `(−1)^f(x)` over all assignments of `free_vars`.
/// Assignment `x` gives `free_vars[i]` the value of bit `i` of `x`.
pub fn count_gap(f: &Gf2Poly, free_vars: &[VarId], limits: GapLimits) -> Result<i64, PolyError> {
    let v = free_vars.len();
    if v > limits.max_vars || v > 62 {
        return Err(PolyError::TooManyVariables {
            vars: v,
            limit: limits.max_vars.min(62),
        });
    }
    let position: HashMap<VarId, usize> = free_vars.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let masks = f
        .monomials
        .iter()
        .map(|m| {
            m.vars().iter().try_fold(0u64, |mask, x| {
                position
                    .get(x)
                    .map(|&i| mask | (1 << i))
                    .ok_or(PolyError::UnboundVariable(*x))
            })
        })
        .collect::<Result<Vec<u64>, _>>()?;
    let constant = f.constant;

    let chunk_gap = |lo: u64, hi: u64| -> i64 {
        let mut gap = 0i64;
        for x in lo..hi {
            let mut parity = constant;
            for &m in &masks {
                parity ^= x & m == m;
            }
            gap += if parity { -1 } else { 1 };
        }
        gap
    };

    let total = 1u64 << v;
    if limits.threads <= 1 || v < 12 {
        return Ok(chunk_gap(0, total));
    }
    let chunk = (total / 64).max(1);
    let ranges: Vec<(u64, u64)> = (0..total)
        .step_by(chunk as usize)
        .map(|lo| (lo, (lo + chunk).min(total)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(limits.threads)
        .build()
        .expect("thread pool");
    Ok(pool.install(|| ranges.par_iter().map(|&(lo, hi)| chunk_gap(lo, hi)).sum()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{normalize, parse_circuit};

    fn mono(vs: &[u32]) -> Monomial {
        Monomial::new(&vs.iter().map(|&v| VarId(v)).collect::<Vec<_>>()).unwrap()
    }

    fn assign(pairs: &[(u32, bool)]) -> HashMap<VarId, bool> {
        pairs.iter().map(|&(v, b)| (VarId(v), b)).collect()
    }

    #[test]
    fn monomial_is_sorted_set() {
        let m = mono(&[3, 1, 3]);
        assert_eq!(m.vars(), &[VarId(1), VarId(3)]);
        assert!(Monomial::new(&[]).is_none());
        assert!(Monomial::new(&[VarId(0), VarId(1), VarId(2), VarId(3)]).is_none());
        assert!(mono(&[9]) < mono(&[0, 1]));
    }

    #[test]
    fn toggling_cancels_pairs() {
        let mut p = Gf2Poly::zero();
        p.toggle(mono(&[0, 1]));
        p.toggle(mono(&[1, 0]));
        assert!(p.is_empty());
    }

    #[test]
    fn multiplication_distributes_mod_two() {
        // (x0 + x1·x2)·x3
        let mut e = Gf2Poly::var(VarId(0));
        e.toggle(mono(&[1, 2]));
        let p = e.mul(&Gf2Poly::var(VarId(3))).unwrap();
        assert_eq!(p, Gf2Poly::from_monomials([mono(&[0, 3]), mono(&[1, 2, 3])], false));
        // (1 + x0)(1 + x0) = 1 + x0
        let mut a = Gf2Poly::one();
        a.toggle(mono(&[0]));
        assert_eq!(a.mul(&a).unwrap(), a);
        let big = Gf2Poly::from_monomials([mono(&[0, 1, 2])], false);
        assert!(big.mul(&Gf2Poly::var(VarId(5))).is_none());
    }

    #[test]
    fn eval_examples() {
        let f = Gf2Poly::from_monomials([mono(&[1, 2])], false);
        assert!(f.eval(&assign(&[(1, true), (2, true)])).unwrap());
        assert!(!f.eval(&assign(&[(1, true), (2, false)])).unwrap());
        let g = Gf2Poly::from_monomials([mono(&[1, 2]), mono(&[1])], true);
        assert!(g.eval(&assign(&[(1, true), (2, true)])).unwrap());
        assert_eq!(f.eval(&assign(&[(1, true)])), Err(PolyError::UnboundVariable(VarId(2))));
    }

    #[test]
    fn count_gap_examples() {
        let vars = [VarId(1), VarId(2)];
        assert_eq!(count_gap(&Gf2Poly::zero(), &vars, GapLimits::default()), Ok(4));
        let f = Gf2Poly::from_monomials([mono(&[1, 2])], false);
        assert_eq!(count_gap(&f, &vars, GapLimits::default()), Ok(2));
        assert_eq!(count_gap(&Gf2Poly::one(), &[], GapLimits::default()), Ok(-1));
        let x = Gf2Poly::var(VarId(0));
        assert_eq!(count_gap(&x, &[VarId(0)], GapLimits::default()), Ok(0));
        assert_eq!(
            count_gap(&f, &vars[..1], GapLimits::default()),
            Err(PolyError::UnboundVariable(VarId(2)))
        );
        let many: Vec<VarId> = (0..5).map(VarId).collect();
        assert_eq!(
            count_gap(
                &Gf2Poly::zero(),
                &many,
                GapLimits {
                    max_vars: 4,
                    threads: 1
                }
            ),
            Err(PolyError::TooManyVariables { vars: 5, limit: 4 })
        );
    }

    #[test]
    fn count_gap_is_thread_count_independent() {
        let f = Gf2Poly::from_monomials(
            [
                mono(&[0, 1, 2]),
                mono(&[2, 3]),
                mono(&[4, 5]),
                mono(&[5]),
                mono(&[6, 7, 8]),
            ],
            true,
        );
        let vars: Vec<VarId> = (0..14).map(VarId).collect();
        let one = count_gap(&f, &vars, GapLimits::default()).unwrap();
        let four = count_gap(
            &f,
            &vars,
            GapLimits {
                max_vars: 26,
                threads: 4,
            },
        )
        .unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn labels_single_hadamard() {
        let l = label_circuit(&parse_circuit("qubits 1\nh 0").unwrap()).unwrap();
        assert_eq!(l.h, 1);
        assert_eq!(l.f_raw, Gf2Poly::from_monomials([mono(&[0, 1])], false));
        assert_eq!(l.label(VarId(0)), "a1");
        assert_eq!(l.label(VarId(1)), "a2");
    }

    #[test]
    fn labels_padded_toffoli() {
        let (c, _) = normalize(&parse_circuit("qubits 3\nccx 0 1 2").unwrap());
        let l = label_circuit(&c).unwrap();
        assert_eq!(l.h, 2);
        // a1=0 b1=1 c1=2 c2=3 c3=4
        let expected = Gf2Poly::from_monomials([mono(&[2, 3]), mono(&[0, 1, 3]), mono(&[3, 4])], false);
        assert_eq!(l.f_raw, expected);
        assert_eq!(l.output_vars, vec![VarId(0), VarId(1), VarId(4)]);
    }

    #[test]
    fn labeling_rejects_unnormalized_circuits() {
        let c = parse_circuit("qubits 3\nccx 0 1 2").unwrap();
        assert!(matches!(label_circuit(&c), Err(PolyError::NotNormalized { .. })));
        let c = parse_circuit("qubits 5\nh 2\nccx 0 1 2\nccx 2 3 4\nh 4").unwrap();
        assert!(matches!(
            label_circuit(&c),
            Err(PolyError::NotNormalized { gate: 2, .. })
        ));
    }

    #[test]
    fn substitute_examples() {
        let l = label_circuit(&parse_circuit("qubits 1\nh 0").unwrap()).unwrap();
        let b = BoundaryAssignment::new("1".parse().unwrap(), "1".parse().unwrap());
        let r = substitute(&l, &b).unwrap();
        assert!(r.poly.is_empty());
        assert!(r.poly.constant());
        assert!(r.free_vars.is_empty());
        assert!(!r.conflict);

        let l = label_circuit(&parse_circuit("qubits 1").unwrap()).unwrap();
        let b = BoundaryAssignment::new("0".parse().unwrap(), "1".parse().unwrap());
        assert!(substitute(&l, &b).unwrap().conflict);
        let b = BoundaryAssignment::new("1".parse().unwrap(), "1".parse().unwrap());
        assert!(!substitute(&l, &b).unwrap().conflict);

        let b = BoundaryAssignment::new("10".parse().unwrap(), "1".parse().unwrap());
        assert!(matches!(substitute(&l, &b), Err(PolyError::BoundaryLength { .. })));
    }

    #[test]
    fn poly_text_round_trip() {
        let text = "x y\nx y z\nz\nconstant 1\n";
        let parsed = parse_poly(text).unwrap();
        assert_eq!(parsed.names, vec!["x", "y", "z"]);
        assert_eq!(parsed.poly.len(), 3);
        let emitted = parsed.poly.to_text(|v| parsed.names[v.0 as usize].clone());
        assert_eq!(emitted, "z\nx y\nx y z\nconstant 1\n");
        assert_eq!(parse_poly(&emitted).unwrap().poly.len(), 3);
        assert!(parse_poly("a b c d\n").is_err());
        assert!(parse_poly("constant 2\n").is_err());
    }
}
