use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use permcirc_core::encoder::gadget_quadratic;
use permcirc_core::permanent::{norm_report, per_gurvits, per_ryser, spectral_norm};
use permcirc_core::IntMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.random_range(lo..=hi)).collect())
        .collect();
    IntMatrix::from_rows(&rows).unwrap()
}

fn svd_norm(m: &IntMatrix) -> f64 {
    let n = m.dim();
    let dense = DMatrix::from_row_iterator(n, n, m.rows().flatten().map(|&x| x as f64));
    dense.singular_values().max()
}

#[test]
fn spectral_norm_matches_svd_on_gadget() {
    let block = gadget_quadratic().block;
    let got = spectral_norm(&block, 1e-10).unwrap();
    let want = svd_norm(&block);
    assert!(got > 1.0 && got < 3.0, "{got}");
    assert!((got - want).abs() <= 1e-8 * want, "{got} vs {want}");

    let r = norm_report(&block, 1, 1e-10).unwrap();
    assert!((r.norm - want / 2f64.powf(1.0 / 6.0)).abs() < 1e-8);
}

#[test]
fn spectral_norm_matches_svd_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=12 {
        for _ in 0..5 {
            let m = random_matrix(&mut rng, n, -3, 3);
            let want = svd_norm(&m);
            let got = spectral_norm(&m, 1e-10).unwrap();
            assert!((got - want).abs() <= 1e-8 * want.max(1.0), "n={n}: {got} vs {want}");
        }
    }
}

#[test]
fn sampler_within_four_standard_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut outliers = 0;
    for i in 0..20 {
        let m = random_matrix(&mut rng, 5, -3, 3);
        let exact = per_ryser(&m).unwrap().to_f64().unwrap();
        let est = per_gurvits(&m, 100_000, 1000 + i).unwrap();
        if (est.mean - exact).abs() > 4.0 * est.stderr {
            outliers += 1;
        }
    }
    assert!(outliers <= 2, "{outliers} outliers");
}
