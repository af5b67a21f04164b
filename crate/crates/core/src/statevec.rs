//! Exact state-vector simulation with integer coefficients.
//!
//! Every Toffoli–Hadamard amplitude has the form `k / √2^h`, so the state is
//! stored as `2^q` integers and a shared Hadamard count.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::circuit::{BasisState, Circuit, Gate};

pub const MAX_QUBITS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("{0} qubits exceed the simulator cap of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("basis state has {got} bits, circuit has {qubits} qubits")]
    StateLength { got: usize, qubits: usize },
    #[error("coefficient overflow after {0} hadamards")]
    Overflow(u32),
}

/// The exact value `k / √2^h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicAmplitude {
    pub k: BigInt,
    pub h: u32,
}

impl DyadicAmplitude {
    pub fn new(k: impl Into<BigInt>, h: u32) -> Self {
        DyadicAmplitude { k: k.into(), h }
    }

    pub fn to_f64(&self) -> f64 {
        let k = self.k.to_f64().unwrap_or(f64::NAN);
        if k == 0.0 {
            return 0.0;
        }
        k * (-(self.h as f64) / 2.0).exp2()
    }

    /// Exact comparison of the represented real numbers.
    pub fn same_value(&self, other: &DyadicAmplitude) -> bool {
        let (lo, hi) = if self.h <= other.h {
            (self, other)
        } else {
            (other, self)
        };
        let diff = hi.h - lo.h;
        if diff % 2 == 1 {
            return lo.k.is_zero() && hi.k.is_zero();
        }
        &lo.k << (diff / 2) as usize == hi.k
    }
}

impl fmt::Display for DyadicAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/√2^{}", self.k, self.h)
    }
}

impl Serialize for DyadicAmplitude {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DyadicAmplitude", 3)?;
        st.serialize_field("k", &self.k.to_string())?;
        st.serialize_field("h", &self.h)?;
        st.serialize_field("value", &self.to_f64())?;
        st.end()
    }
}

/// Integer state vector; amplitude of basis index `b` is `coeffs[b] / √2^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicState {
    pub qubits: usize,
    pub coeffs: Vec<i128>,
    pub exponent: u32,
}

impl DyadicState {
    pub fn coefficient(&self, basis: &BasisState) -> i128 {
        self.coeffs[basis.index()]
    }

    /// `Σ k_b²`, which equals `2^exponent` for a unitary evolution.
    pub fn squared_norm(&self) -> BigInt {
        self.coeffs.iter().map(|&k| BigInt::from(k) * k).sum()
    }
}

pub fn simulate(c: &Circuit, input: &BasisState) -> Result<DyadicState, SimError> {
    let q = c.qubits();
    if q > MAX_QUBITS {
        return Err(SimError::TooManyQubits(q));
    }
    if input.len() != q {
        return Err(SimError::StateLength {
            got: input.len(),
            qubits: q,
        });
    }
    let mut coeffs = vec![0i128; 1 << q];
    coeffs[input.index()] = 1;
    let mut exponent = 0u32;

    for gate in c.gates() {
        match *gate {
            Gate::Hadamard(l) => {
                let bit = 1usize << l;
                for b in (0..coeffs.len()).filter(|b| b & bit == 0) {
                    let (k0, k1) = (coeffs[b], coeffs[b | bit]);
                    coeffs[b] = k0.checked_add(k1).ok_or(SimError::Overflow(exponent))?;
                    coeffs[b | bit] = k0.checked_sub(k1).ok_or(SimError::Overflow(exponent))?;
                }
                exponent += 1;
            }
            Gate::Toffoli {
                control1,
                control2,
                target,
            } => {
                let controls = (1usize << control1) | (1 << control2);
                let t = 1usize << target;
                for b in 0..coeffs.len() {
                    if b & controls == controls && b & t == 0 {
                        coeffs.swap(b, b | t);
                    }
                }
            }
        }
    }
    Ok(DyadicState {
        qubits: q,
        coeffs,
        exponent,
    })
}

/// `⟨out|U|in⟩` as `k / √2^h`.
pub fn amplitude(c: &Circuit, input: &BasisState, output: &BasisState) -> Result<DyadicAmplitude, SimError> {
    if output.len() != c.qubits() {
        return Err(SimError::StateLength {
            got: output.len(),
            qubits: c.qubits(),
        });
    }
    let state = simulate(c, input)?;
    Ok(DyadicAmplitude::new(state.coefficient(output), state.exponent))
}
