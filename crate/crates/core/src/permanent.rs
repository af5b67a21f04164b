//! Exact and sampled matrix permanents.
//!
//! `per_naive` sums over all permutations and is the reference for the
//! other routines. `per_ryser` and `per_glynn_exact` walk their subset or
//! sign-vector space in Gray-code order, updating row sums one column at a
//! time from a column-sparse view of the matrix; a term is only multiplied
//! out when no row sum is zero. When the row-sum bounds guarantee it, terms
//! are formed in `i64` and accumulated in `i128`; otherwise every term goes
//! through `BigInt`. Results are always exact.
//!
//! `per_gurvits` samples the ±1 estimator `Π_i (row_i · x) · Π_j x_j`. Sample
//! batch `b` (of [`MC_BATCH`] draws) uses `ChaCha8Rng::seed_from_u64(seed)`
//! on stream `b`, so the estimate depends only on `(matrix, samples, seed)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::matrix::IntMatrix;

/// Default dimension cap for the exponential kernels.
pub const DEFAULT_MAX_DIM: usize = 32;
/// Cap that applies even with an explicit override (Gray codes live in a `u64`).
pub const HARD_MAX_DIM: usize = 62;
/// Largest dimension accepted by [`per_naive`].
pub const NAIVE_MAX_DIM: usize = 10;
/// Samples per RNG stream in [`per_gurvits`].
pub const MC_BATCH: u64 = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PermanentError {
    #[error("matrix dimension {n} exceeds the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("sign-vector average is not an integer (internal consistency failure)")]
    NonIntegerResult,
    #[error("row {row} has entries too large for exact row-sum updates")]
    EntryOverflow { row: usize },
    #[error("at least two samples are required, got {0}")]
    TooFewSamples(u64),
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
}

/// Size cap and worker count for the exact kernels.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_dim: usize,
    pub threads: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dim: DEFAULT_MAX_DIM,
            threads: 1,
        }
    }
}

impl Limits {
    /// Raises the cap to [`HARD_MAX_DIM`].
    pub fn forced(self) -> Self {
        Limits {
            max_dim: HARD_MAX_DIM,
            ..self
        }
    }

    fn check(&self, n: usize) -> Result<(), PermanentError> {
        let cap = self.max_dim.min(HARD_MAX_DIM);
        if n > cap {
            return Err(PermanentError::TooLarge { n, cap });
        }
        Ok(())
    }
}

/// Permanent by summing over all `n!` permutations.
pub fn per_naive(m: &IntMatrix) -> Result<BigInt, PermanentError> {
    let n = m.dim();
    if n > NAIVE_MAX_DIM {
        return Err(PermanentError::TooLarge { n, cap: NAIVE_MAX_DIM });
    }

    fn small(m: &IntMatrix, row: usize, used: u32, prod: i128) -> Option<i128> {
        if row == m.dim() {
            return Some(prod);
        }
        let mut sum = 0i128;
        for (j, &a) in m.row(row).iter().enumerate() {
            if a == 0 || used & (1 << j) != 0 {
                continue;
            }
            let p = prod.checked_mul(a as i128)?;
            sum = sum.checked_add(small(m, row + 1, used | (1 << j), p)?)?;
        }
        Some(sum)
    }

    fn big(m: &IntMatrix, row: usize, used: u32, prod: &BigInt) -> BigInt {
        if row == m.dim() {
            return prod.clone();
        }
        let mut sum = BigInt::zero();
        for (j, &a) in m.row(row).iter().enumerate() {
            if a != 0 && used & (1 << j) == 0 {
                sum += big(m, row + 1, used | (1 << j), &(prod * a));
            }
        }
        sum
    }

    Ok(match small(m, 0, 0, 1) {
        Some(v) => BigInt::from(v),
        None => big(m, 0, 0, &BigInt::one()),
    })
}

/// Ryser's inclusion–exclusion formula over column subsets in Gray-code order.
pub fn per_ryser(m: &IntMatrix) -> Result<BigInt, PermanentError> {
    per_ryser_with(m, Limits::default())
}

pub fn per_ryser_with(m: &IntMatrix, limits: Limits) -> Result<BigInt, PermanentError> {
    limits.check(m.dim())?;
    if m.dim() == 0 {
        return Ok(BigInt::one());
    }
    let s = Sparse::new(m)?;
    let total = 1u64 << s.n;
    Ok(if s.fast {
        run_chunks::<Fast>(&s, total, limits.threads, Kernel::Ryser)
    } else {
        run_chunks::<Big>(&s, total, limits.threads, Kernel::Ryser)
    })
}

/// Glynn's formula: the average of the ±1 estimator over all sign vectors
/// with the first sign fixed, walked in Gray-code order.
pub fn per_glynn_exact(m: &IntMatrix) -> Result<BigInt, PermanentError> {
    per_glynn_exact_with(m, Limits::default())
}

pub fn per_glynn_exact_with(m: &IntMatrix, limits: Limits) -> Result<BigInt, PermanentError> {
    limits.check(m.dim())?;
    if m.dim() == 0 {
        return Ok(BigInt::one());
    }
    let s = Sparse::new(m)?;
    let total = 1u64 << (s.n - 1);
    let sum = if s.fast {
        run_chunks::<Fast>(&s, total, limits.threads, Kernel::Glynn)
    } else {
        run_chunks::<Big>(&s, total, limits.threads, Kernel::Glynn)
    };
    let denom = BigInt::from(total);
    if (&sum % &denom).is_zero() {
        Ok(sum / denom)
    } else {
        Err(PermanentError::NonIntegerResult)
    }
}

/// One draw of the ±1 estimator, exactly: `Π_i (Σ_j a_ij x_j) · Π_j x_j`
/// where `x_j = -1` if `negative[j]` and `+1` otherwise.
pub fn glynn_term(m: &IntMatrix, negative: &[bool]) -> BigInt {
    let sign = |j: usize| if negative[j] { -1i128 } else { 1 };
    let mut value = BigInt::one();
    for row in m.rows() {
        let dot: i128 = row.iter().enumerate().map(|(j, &a)| a as i128 * sign(j)).sum();
        value *= dot;
    }
    if negative.iter().filter(|&&b| b).count() % 2 == 1 {
        value = -value;
    }
    value
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

pub fn per_gurvits(m: &IntMatrix, samples: u64, seed: u64) -> Result<McEstimate, PermanentError> {
    per_gurvits_with(m, samples, seed, 1)
}

/// Sampled estimate; batches may run on `threads` workers and are combined
/// in batch order, so the result does not depend on the worker count.
pub fn per_gurvits_with(m: &IntMatrix, samples: u64, seed: u64, threads: usize) -> Result<McEstimate, PermanentError> {
    if samples < 2 {
        return Err(PermanentError::TooFewSamples(samples));
    }
    let batches = samples.div_ceil(MC_BATCH);
    let run = |b: u64| {
        let count = MC_BATCH.min(samples - b * MC_BATCH);
        sample_batch(m, seed, b, count)
    };
    let parts: Vec<Moments> = if threads <= 1 {
        (0..batches).map(run).collect()
    } else {
        pool(threads).install(|| (0..batches).into_par_iter().map(run).collect())
    };
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let var = total.m2 / (total.count - 1.0);
    Ok(McEstimate {
        mean: total.mean,
        stderr: (var / total.count).sqrt(),
        samples,
        seed,
    })
}

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0.0 {
            return other;
        }
        if other.count == 0.0 {
            return self;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + d * other.count / count,
            m2: self.m2 + other.m2 + d * d * self.count * other.count / count,
        }
    }
}

fn sample_batch(m: &IntMatrix, seed: u64, batch: u64, count: u64) -> Moments {
    let n = m.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    let words = n.div_ceil(64).max(1);
    let mut bits = vec![0u64; words];
    let mut moments = Moments::default();
    for _ in 0..count {
        for w in bits.iter_mut() {
            *w = rng.next_u64();
        }
        let negative = |j: usize| (bits[j / 64] >> (j % 64)) & 1 == 1;
        let mut value = 1.0f64;
        for row in m.rows() {
            let dot: i64 = row
                .iter()
                .enumerate()
                .map(|(j, &a)| if negative(j) { -a } else { a })
                .sum();
            value *= dot as f64;
        }
        if (0..n).filter(|&j| negative(j)).count() % 2 == 1 {
            value = -value;
        }
        moments.push(value);
    }
    moments
}

/// Largest singular value by power iteration on `AᵀA`.
pub fn spectral_norm(m: &IntMatrix, tol: f64) -> Result<f64, PermanentError> {
    const MAX_ITERS: usize = 10_000;
    let n = m.dim();
    if n == 0 {
        return Ok(0.0);
    }
    let a: Vec<f64> = m.rows().flatten().map(|&x| x as f64).collect();
    let mut v: Vec<f64> = (0..n).map(|j| 1.0 + (j as f64 * 0.618_033_988_75).fract()).collect();
    normalize(&mut v);
    let mut u = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut prev = 0.0f64;
    for _ in 0..MAX_ITERS {
        for i in 0..n {
            u[i] = (0..n).map(|j| a[i * n + j] * v[j]).sum();
        }
        for j in 0..n {
            w[j] = (0..n).map(|i| a[i * n + j] * u[i]).sum();
        }
        // ‖A v‖² for the current unit vector v.
        let lambda: f64 = u.iter().map(|x| x * x).sum();
        if lambda == 0.0 {
            return Ok(0.0);
        }
        if (lambda - prev).abs() <= tol * lambda {
            return Ok(lambda.sqrt());
        }
        prev = lambda;
        v.copy_from_slice(&w);
        normalize(&mut v);
    }
    Err(PermanentError::NoConvergence(MAX_ITERS))
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Spectral norm of `G / 2^{h/(2m)}` for an `m × m` matrix `G`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormReport {
    pub dimension: usize,
    pub h: u32,
    pub raw_norm: f64,
    pub scale: f64,
    pub norm: f64,
    pub subunit: bool,
}

pub fn norm_report(g: &IntMatrix, h: u32, tol: f64) -> Result<NormReport, PermanentError> {
    let m = g.dim();
    if m == 0 {
        return Ok(NormReport {
            dimension: 0,
            h,
            raw_norm: 0.0,
            scale: 1.0,
            norm: 0.0,
            subunit: true,
        });
    }
    let raw_norm = spectral_norm(g, tol)?;
    let scale = (h as f64 / (2.0 * m as f64)).exp2();
    let norm = raw_norm / scale;
    Ok(NormReport {
        dimension: m,
        h,
        raw_norm,
        scale,
        norm,
        subunit: norm < 1.0,
    })
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("failed to build thread pool")
}

/// Column-major non-zeros plus overflow analysis.
struct Sparse {
    n: usize,
    cols: Vec<Vec<(usize, i64)>>,
    /// Every term fits `i64` and the full sum fits `i128`.
    fast: bool,
}

impl Sparse {
    fn new(m: &IntMatrix) -> Result<Self, PermanentError> {
        let n = m.dim();
        let mut cols = vec![Vec::new(); n];
        let mut bounds = Vec::with_capacity(n);
        for (i, row) in m.rows().enumerate() {
            let bound = row
                .iter()
                .try_fold(0i64, |acc, &x| acc.checked_add(x.checked_abs()?))
                .filter(|&b| b <= i64::MAX / 4)
                .ok_or(PermanentError::EntryOverflow { row: i })?;
            bounds.push(bound);
            for (j, &x) in row.iter().enumerate() {
                if x != 0 {
                    cols[j].push((i, x));
                }
            }
        }
        let term_bound = bounds.iter().try_fold(1i64, |acc, &b| acc.checked_mul(b.max(1)));
        let fast = term_bound.and_then(|t| (t as i128).checked_mul(1i128 << n)).is_some();
        Ok(Sparse { n, cols, fast })
    }
}

trait Accumulator: Send + Sized {
    fn zero() -> Self;
    fn add(&mut self, negative: bool, rows: &[i64]);
    fn merge(self, other: Self) -> Self;
    fn into_big(self) -> BigInt;
}

struct Fast(i128);

impl Accumulator for Fast {
    fn zero() -> Self {
        Fast(0)
    }

    #[inline]
    fn add(&mut self, negative: bool, rows: &[i64]) {
        let p = rows.iter().product::<i64>() as i128;
        if negative {
            self.0 -= p;
        } else {
            self.0 += p;
        }
    }

    fn merge(self, other: Self) -> Self {
        Fast(self.0 + other.0)
    }

    fn into_big(self) -> BigInt {
        BigInt::from(self.0)
    }
}

struct Big(BigInt);

impl Accumulator for Big {
    fn zero() -> Self {
        Big(BigInt::zero())
    }

    fn add(&mut self, negative: bool, rows: &[i64]) {
        let p: BigInt = rows.iter().map(|&r| BigInt::from(r)).product();
        if negative {
            self.0 -= p;
        } else {
            self.0 += p;
        }
    }

    fn merge(self, other: Self) -> Self {
        Big(self.0 + other.0)
    }

    fn into_big(self) -> BigInt {
        self.0
    }
}

#[derive(Clone, Copy)]
enum Kernel {
    Ryser,
    Glynn,
}

fn run_chunks<A: Accumulator>(s: &Sparse, total: u64, threads: usize, kernel: Kernel) -> BigInt {
    let chunk_fn = |lo: u64, hi: u64| -> A {
        match kernel {
            Kernel::Ryser => ryser_chunk(s, lo, hi),
            Kernel::Glynn => glynn_chunk(s, lo, hi),
        }
    };
    if threads <= 1 {
        return chunk_fn(0, total).into_big();
    }
    let pieces = (threads as u64 * 8).min(total).max(1);
    let step = total.div_ceil(pieces);
    let ranges: Vec<(u64, u64)> = (0..pieces)
        .map(|p| (p * step, ((p + 1) * step).min(total)))
        .filter(|(lo, hi)| lo < hi)
        .collect();
    let parts: Vec<A> = pool(threads).install(|| ranges.par_iter().map(|&(lo, hi)| chunk_fn(lo, hi)).collect());
    parts.into_iter().fold(A::zero(), A::merge).into_big()
}

/// Ryser terms for Gray-code ranks `lo..hi`; row sums are rebuilt at `lo`.
fn ryser_chunk<A: Accumulator>(s: &Sparse, lo: u64, hi: u64) -> A {
    let n = s.n;
    let flip_n = n % 2 == 1;
    let mut acc = A::zero();
    let mut gray = lo ^ (lo >> 1);
    let mut rows = vec![0i64; n];
    for (j, col) in s.cols.iter().enumerate() {
        if (gray >> j) & 1 == 1 {
            for &(i, a) in col {
                rows[i] += a;
            }
        }
    }
    let mut zeros = rows.iter().filter(|&&r| r == 0).count();
    let mut odd = gray.count_ones() % 2 == 1;
    if zeros == 0 {
        acc.add(odd ^ flip_n, &rows);
    }
    for k in lo + 1..hi {
        let j = k.trailing_zeros() as usize;
        gray ^= 1 << j;
        odd = !odd;
        let adding = (gray >> j) & 1 == 1;
        for &(i, a) in &s.cols[j] {
            let before = rows[i];
            let after = if adding { before + a } else { before - a };
            rows[i] = after;
            zeros = zeros + usize::from(after == 0) - usize::from(before == 0);
        }
        if zeros == 0 {
            acc.add(odd ^ flip_n, &rows);
        }
    }
    acc
}

/// Glynn terms for Gray-code ranks `lo..hi` over the signs of columns `1..n`.
fn glynn_chunk<A: Accumulator>(s: &Sparse, lo: u64, hi: u64) -> A {
    let n = s.n;
    let mut acc = A::zero();
    let mut gray = lo ^ (lo >> 1);
    let mut rows = vec![0i64; n];
    for (j, col) in s.cols.iter().enumerate() {
        let negative = j > 0 && (gray >> (j - 1)) & 1 == 1;
        for &(i, a) in col {
            rows[i] += if negative { -a } else { a };
        }
    }
    let mut zeros = rows.iter().filter(|&&r| r == 0).count();
    let mut odd = gray.count_ones() % 2 == 1;
    if zeros == 0 {
        acc.add(odd, &rows);
    }
    for k in lo + 1..hi {
        let b = k.trailing_zeros() as usize;
        gray ^= 1 << b;
        odd = !odd;
        let negative = (gray >> b) & 1 == 1;
        for &(i, a) in &s.cols[b + 1] {
            let before = rows[i];
            let after = if negative { before - 2 * a } else { before + 2 * a };
            rows[i] = after;
            zeros = zeros + usize::from(after == 0) - usize::from(before == 0);
        }
        if zeros == 0 {
            acc.add(odd, &rows);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn mat<const N: usize>(rows: [[i64; N]; N]) -> IntMatrix {
        IntMatrix::from_rows(&rows).unwrap()
    }

    fn random_matrix(n: usize, lo: i64, hi: i64, seed: u64) -> IntMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(lo..=hi)).collect())
            .collect();
        IntMatrix::from_rows(&rows).unwrap()
    }

    fn all_exact(m: &IntMatrix) -> [BigInt; 3] {
        [
            per_naive(m).unwrap(),
            per_ryser(m).unwrap(),
            per_glynn_exact(m).unwrap(),
        ]
    }

    #[test]
    fn small_definitions() {
        for p in all_exact(&IntMatrix::identity(3)) {
            assert_eq!(p, BigInt::from(1));
        }
        for p in all_exact(&mat([[1, 2], [3, 4]])) {
            assert_eq!(p, BigInt::from(10));
        }
        // cycle-cover example: adf + beg + cdg with a..f = 1..6, g = 7
        let cover = mat([[1, 2, 3], [0, 4, 5], [7, 0, 6]]);
        for p in all_exact(&cover) {
            assert_eq!(p, BigInt::from(178));
        }
        for p in all_exact(&IntMatrix::zeros(0)) {
            assert_eq!(p, BigInt::from(1));
        }
        for p in all_exact(&mat([[-7]])) {
            assert_eq!(p, BigInt::from(-7));
        }
    }

    #[test]
    fn gadget_blocks() {
        let quad = mat([[0, -1, 1], [-1, 0, 1], [1, 1, 1]]);
        let cubic = mat([[1, -2, 0], [0, 1, 1], [1, 0, 1]]);
        for m in [quad, cubic] {
            for p in all_exact(&m) {
                assert_eq!(p, BigInt::from(-1));
            }
        }
    }

    #[test]
    fn kernels_agree_on_random_matrices() {
        for seed in 0..40 {
            let n = 1 + (seed as usize % 9);
            let m = random_matrix(n, -3, 3, seed);
            let [a, b, c] = all_exact(&m);
            assert_eq!(a, b, "ryser seed {seed}");
            assert_eq!(a, c, "glynn seed {seed}");
        }
    }

    #[test]
    fn big_path_is_exact() {
        // row bounds overflow the i64 term product, forcing BigInt terms
        let m = random_matrix(6, -4_000_000_000, 4_000_000_000, 11);
        assert!(!Sparse::new(&m).unwrap().fast);
        let [a, b, c] = all_exact(&m);
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let m = random_matrix(14, -2, 2, 5);
        let one = per_ryser(&m).unwrap();
        for threads in [2, 3, 8] {
            let l = Limits {
                threads,
                ..Limits::default()
            };
            assert_eq!(per_ryser_with(&m, l).unwrap(), one);
            assert_eq!(per_glynn_exact_with(&m, l).unwrap(), one);
        }
    }

    #[test]
    fn size_caps() {
        assert_eq!(
            per_naive(&IntMatrix::zeros(11)),
            Err(PermanentError::TooLarge { n: 11, cap: 10 })
        );
        assert_eq!(
            per_ryser(&IntMatrix::zeros(40)),
            Err(PermanentError::TooLarge { n: 40, cap: 32 })
        );
        let forced = Limits::default().forced();
        assert!(forced.check(40).is_ok());
        assert!(forced.check(63).is_err());
    }

    #[test]
    fn overflowing_entries_are_rejected() {
        let m = mat([[i64::MAX, 1], [1, 1]]);
        assert_eq!(per_ryser(&m), Err(PermanentError::EntryOverflow { row: 0 }));
    }

    #[test]
    fn estimator_average_over_all_signs_is_exact() {
        for seed in 0..6 {
            let n = 2 + seed as usize;
            let m = random_matrix(n, -3, 3, 100 + seed);
            let sum: BigInt = (0..1u64 << n)
                .map(|mask| {
                    let neg: Vec<bool> = (0..n).map(|j| (mask >> j) & 1 == 1).collect();
                    glynn_term(&m, &neg)
                })
                .sum();
            assert_eq!(sum, per_naive(&m).unwrap() << n);
        }
    }

    #[test]
    fn sampler_constant_and_reproducible() {
        let e = per_gurvits(&mat([[5]]), 1000, 3).unwrap();
        assert_eq!(e.mean, 5.0);
        assert_eq!(e.stderr, 0.0);
        let m = random_matrix(5, -1, 1, 9);
        let a = per_gurvits(&m, 20_000, 42).unwrap();
        let b = per_gurvits_with(&m, 20_000, 42, 4).unwrap();
        assert_eq!(a, b);
        assert!(per_gurvits(&m, 1, 0).is_err());
    }

    #[test]
    fn spectral_norm_simple_cases() {
        let n = spectral_norm(&IntMatrix::identity(3), 1e-10).unwrap();
        assert!((n - 1.0).abs() < 1e-12);
        let d = spectral_norm(&mat([[2, 0], [0, -3]]), 1e-10).unwrap();
        assert!((d - 3.0).abs() < 1e-9);
        assert_eq!(spectral_norm(&IntMatrix::zeros(4), 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn norm_report_empty_and_scaled() {
        let r = norm_report(&IntMatrix::zeros(0), 5, 1e-10).unwrap();
        assert_eq!(r.norm, 0.0);
        assert!(r.subunit);
        let quad = mat([[0, -1, 1], [-1, 0, 1], [1, 1, 1]]);
        let r = norm_report(&quad, 1, 1e-10).unwrap();
        let raw = spectral_norm(&quad, 1e-10).unwrap();
        assert!((r.norm - raw / (1.0f64 / 6.0).exp2()).abs() < 1e-12);
    }
}
