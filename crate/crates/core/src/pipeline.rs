//! End-to-end evaluation of one `⟨out|U|in⟩` instance by every route, and
//! the randomized cross-check sweep built on it.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::circuit::{normalize, random_circuit, BasisState, Circuit, CircuitError, NormalizationReport};
use crate::encoder::{encode, EncodeError, Encoding, Mode};
use crate::gf2::{count_gap, label_circuit, substitute, BoundaryAssignment, GapLimits, Labeling, PolyError, Reduced};
use crate::permanent::{per_glynn_exact_with, per_ryser_with, Limits, PermanentError};
use crate::statevec::{amplitude, DyadicAmplitude, SimError};

/// Version of every JSON document emitted by the tools.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Permanent(#[from] PermanentError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl Error {
    /// Whether the failure is a configured size cap rather than bad input.
    pub fn is_size_cap(&self) -> bool {
        matches!(
            self,
            Error::Permanent(PermanentError::TooLarge { .. })
                | Error::Poly(PolyError::TooManyVariables { .. })
                | Error::Sim(SimError::TooManyQubits(_))
        )
    }
}

/// Exact permanent routine used for `per(G)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactKernel {
    #[default]
    Ryser,
    Glynn,
}

impl ExactKernel {
    pub fn permanent(self, m: &crate::matrix::IntMatrix, limits: Limits) -> Result<BigInt, PermanentError> {
        match self {
            ExactKernel::Ryser => per_ryser_with(m, limits),
            ExactKernel::Glynn => per_glynn_exact_with(m, limits),
        }
    }
}

/// A circuit in normal form together with a boundary assignment.
#[derive(Clone, Debug)]
pub struct Instance {
    pub circuit: Circuit,
    pub normalization: NormalizationReport,
    pub labeling: Labeling,
    pub boundary: BoundaryAssignment,
}

impl Instance {
    /// Normalizes `c` and labels it.
    pub fn new(c: &Circuit, boundary: BoundaryAssignment) -> Result<Self, Error> {
        let (circuit, normalization) = normalize(c);
        let labeling = label_circuit(&circuit)?;
        // validates boundary lengths early
        substitute(&labeling, &boundary)?;
        Ok(Instance {
            circuit,
            normalization,
            labeling,
            boundary,
        })
    }

    pub fn h(&self) -> u32 {
        self.labeling.h
    }

    pub fn sv(&self) -> Result<DyadicAmplitude, Error> {
        Ok(amplitude(
            &self.circuit,
            &self.boundary.in_bits,
            &self.boundary.out_bits,
        )?)
    }

    pub fn reduced(&self) -> Reduced {
        substitute(&self.labeling, &self.boundary).expect("boundary checked at construction")
    }

    /// `#0 − #1`; zero when the boundary contradicts a Hadamard-free line.
    pub fn gap(&self, limits: GapLimits) -> Result<BigInt, Error> {
        let r = self.reduced();
        if r.conflict {
            return Ok(BigInt::from(0));
        }
        Ok(BigInt::from(count_gap(&r.poly, &r.free_vars, limits)?))
    }

    pub fn encode(&self, mode: Mode) -> Result<Encoding, Error> {
        Ok(encode(&self.labeling, &self.boundary, mode)?)
    }

    /// The encoding for `mode`, or `None` in substitution mode when the
    /// boundary is contradictory (no matrix exists and the amplitude is 0).
    pub fn encoding(&self, mode: Mode) -> Result<Option<Encoding>, Error> {
        match encode(&self.labeling, &self.boundary, mode) {
            Ok(e) => Ok(Some(e)),
            Err(EncodeError::ConflictingBoundary) => Ok(None),
            Err(e) => Err(e.into()),
        }
    }
}

/// Parameters of a verification sweep.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyConfig {
    pub qubits: usize,
    pub gates: usize,
    pub trials: usize,
    pub seed: u64,
    pub p_toffoli: f64,
    /// Check every (in, out) pair instead of one random pair per trial.
    pub exhaustive: bool,
    pub max_vars: usize,
    pub max_matrix: usize,
    /// Harness self-test: corrupt one gadget weight in every graph-fix matrix.
    pub inject_fault: bool,
    pub threads: usize,
    pub kernel: ExactKernel,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            qubits: 2,
            gates: 6,
            trials: 50,
            seed: 0,
            p_toffoli: 0.3,
            exhaustive: false,
            max_vars: 26,
            max_matrix: 30,
            inject_fault: false,
            threads: 1,
            kernel: ExactKernel::Ryser,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub circuit_hash: String,
    pub circuit: String,
    #[serde(rename = "in")]
    pub in_bits: String,
    #[serde(rename = "out")]
    pub out_bits: String,
    pub h: u32,
    pub k_sv: String,
    pub gap: Option<String>,
    pub per_subst: Option<String>,
    pub per_graphfix: Option<String>,
    pub dim_subst: Option<usize>,
    pub dim_graphfix: Option<usize>,
    pub agree: bool,
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub config: VerifyConfig,
    pub checked: usize,
    pub skipped: usize,
    pub records: Vec<TrialRecord>,
    pub failures: Vec<TrialRecord>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Short SHA-256 of the canonical circuit text.
pub fn circuit_hash(c: &Circuit) -> String {
    let digest = Sha256::digest(c.to_text().as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Every route for one instance, as exact integers.
#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub k_sv: BigInt,
    pub gap: BigInt,
    pub per_subst: BigInt,
    pub per_graphfix: BigInt,
    pub dim_subst: Option<usize>,
    pub dim_graphfix: usize,
}

impl CrossCheck {
    pub fn agree(&self) -> bool {
        self.k_sv == self.gap && self.gap == self.per_subst && self.per_subst == self.per_graphfix
    }
}

/// Computes `k_sv`, the gap and both permanents. Size caps from `cfg` apply.
pub fn cross_check(inst: &Instance, cfg: &VerifyConfig) -> Result<CrossCheck, Error> {
    let limits = Limits {
        max_dim: cfg.max_matrix,
        threads: cfg.threads,
    };
    let k_sv = inst.sv()?.k;
    let gap = inst.gap(GapLimits {
        max_vars: cfg.max_vars,
        threads: cfg.threads,
    })?;
    let subst = inst.encoding(Mode::Substitution)?;
    let per_subst = match &subst {
        Some(e) => cfg.kernel.permanent(&e.matrix, limits)?,
        None => BigInt::from(0),
    };
    let mut graph = inst.encode(Mode::GraphFix)?;
    if cfg.inject_fault {
        inject_fault(&mut graph);
    }
    let per_graphfix = cfg.kernel.permanent(&graph.matrix, limits)?;
    Ok(CrossCheck {
        k_sv,
        gap,
        per_subst,
        per_graphfix,
        dim_subst: subst.map(|e| e.dim()),
        dim_graphfix: graph.dim(),
    })
}

/// Negates the self-loop on the first quadratic gadget's internal vertex.
fn inject_fault(e: &mut Encoding) {
    use crate::encoder::VertexRole;
    if let Some(v) = e
        .vertex_labels
        .iter()
        .position(|r| matches!(r, VertexRole::Internal { .. }))
    {
        e.matrix[(v, v)] = -e.matrix[(v, v)];
    }
}

/// Random circuits and boundary pairs, every route compared exactly.
pub fn verify(cfg: &VerifyConfig) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let q = cfg.qubits;
    let mut records = Vec::new();
    for trial in 0..cfg.trials {
        let circuit = random_circuit(q, cfg.gates, cfg.p_toffoli, rng.random());
        let pairs: Vec<(usize, usize)> = if cfg.exhaustive {
            (0..1 << q).flat_map(|i| (0..1 << q).map(move |o| (i, o))).collect()
        } else {
            vec![(rng.random_range(0..1 << q), rng.random_range(0..1 << q))]
        };
        for (i, o) in pairs {
            let boundary = BoundaryAssignment::new(BasisState::from_index(i, q), BasisState::from_index(o, q));
            records.push(run_trial(trial, &circuit, boundary, cfg));
        }
    }
    let failures: Vec<TrialRecord> = records.iter().filter(|r| !r.agree).cloned().collect();
    let skipped = records.iter().filter(|r| r.skipped.is_some()).count();
    VerifyReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        checked: records.len() - skipped,
        skipped,
        records,
        failures,
    }
}

fn run_trial(trial: usize, circuit: &Circuit, boundary: BoundaryAssignment, cfg: &VerifyConfig) -> TrialRecord {
    let mut rec = TrialRecord {
        trial,
        circuit_hash: circuit_hash(circuit),
        circuit: circuit.to_text(),
        in_bits: boundary.in_bits.to_string(),
        out_bits: boundary.out_bits.to_string(),
        h: 0,
        k_sv: String::new(),
        gap: None,
        per_subst: None,
        per_graphfix: None,
        dim_subst: None,
        dim_graphfix: None,
        agree: false,
        skipped: None,
    };
    let inst = match Instance::new(circuit, boundary) {
        Ok(inst) => inst,
        Err(e) => {
            rec.skipped = Some(e.to_string());
            return rec;
        }
    };
    rec.h = inst.h();
    match cross_check(&inst, cfg) {
        Ok(x) => {
            rec.k_sv = x.k_sv.to_string();
            rec.gap = Some(x.gap.to_string());
            rec.per_subst = Some(x.per_subst.to_string());
            rec.per_graphfix = Some(x.per_graphfix.to_string());
            rec.dim_subst = x.dim_subst;
            rec.dim_graphfix = Some(x.dim_graphfix);
            rec.agree = x.agree();
        }
        Err(e) if e.is_size_cap() => {
            rec.agree = true;
            rec.skipped = Some(e.to_string());
        }
        Err(e) => rec.skipped = Some(e.to_string()),
    }
    rec
}

/// Shape of a random instance corpus.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusSpec {
    pub count: usize,
    pub qubits: Vec<usize>,
    /// Inclusive range of gate counts after normalization.
    pub gates: (usize, usize),
    /// Upper bound on `3·|f| + 2q`, which caps the graph-fix dimension.
    pub max_matrix: usize,
    pub pairs_per_circuit: usize,
    pub p_toffoli: f64,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            count: 200,
            qubits: vec![1, 2, 3],
            gates: (4, 8),
            max_matrix: 30,
            pairs_per_circuit: 4,
            p_toffoli: 0.35,
            seed: 2024,
        }
    }
}

/// Seeded circuits (already normalized) with random boundary pairs. Qubit
/// counts cycle through `spec.qubits`; candidates outside the gate or size
/// window are redrawn.
pub fn corpus(spec: &CorpusSpec) -> Vec<(Circuit, Vec<BoundaryAssignment>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    while out.len() < spec.count {
        let q = spec.qubits[out.len() % spec.qubits.len()];
        let n = rng.random_range(spec.gates.0.saturating_sub(2)..=spec.gates.1);
        let (c, _) = normalize(&random_circuit(q, n, spec.p_toffoli, rng.random()));
        if !(spec.gates.0..=spec.gates.1).contains(&c.gates().len()) {
            continue;
        }
        let Ok(l) = label_circuit(&c) else { continue };
        if 3 * l.f_raw.len() + 2 * q > spec.max_matrix {
            continue;
        }
        let pairs = (0..spec.pairs_per_circuit)
            .map(|_| {
                BoundaryAssignment::new(
                    BasisState::from_index(rng.random_range(0..1 << q), q),
                    BasisState::from_index(rng.random_range(0..1 << q), q),
                )
            })
            .collect();
        out.push((c, pairs));
    }
    out
}
