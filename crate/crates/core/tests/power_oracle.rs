use oamix::evaluate::{power_table, PowerSettings};
use oamix::linalg::Matrix;
use oamix::modelmat::ModelMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, StandardNormal};
use statrs::distribution::{ContinuousCDF, StudentsT};

#[test]
fn single_mean_power_matches_simulation() {
    let x = ModelMatrix::new(vec!["1".into()], Matrix::from_rows(&[[1.0]; 4])).unwrap();
    let row = &power_table(&x, PowerSettings::default()).unwrap()[0];
    assert!((row.se - 0.5).abs() < 1e-12);
    assert!((row.noncentrality - 4.0).abs() < 1e-12);
    assert_eq!(row.df, 3);

    // simulate the t-test: mean 2σ, n = 4
    let crit = StudentsT::new(0.0, 1.0, 3.0).unwrap().inverse_cdf(0.975);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let reps = 1_000_000;
    let mut rejections = 0u64;
    for _ in 0..reps {
        let y: [f64; 4] = std::array::from_fn(|_| 2.0 + rng.sample::<f64, _>(StandardNormal));
        let mean = y.iter().sum::<f64>() / 4.0;
        let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 3.0;
        let t = mean / (var / 4.0).sqrt();
        if t.abs() > crit {
            rejections += 1;
        }
    }
    let simulated = rejections as f64 / reps as f64;
    assert!(
        (row.power - simulated).abs() <= 0.005,
        "integrated {} vs simulated {simulated}",
        row.power
    );
}

#[test]
fn power_matches_simulated_noncentral_t_at_other_settings() {
    // T = (Z + δ) / sqrt(V / ν) drawn directly
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for (df, ncp) in [(1.0, 1.5), (7.0, 2.2), (19.0, 0.7)] {
        let crit = StudentsT::new(0.0, 1.0, df).unwrap().inverse_cdf(0.975);
        let chi = ChiSquared::new(df).unwrap();
        let reps = 400_000;
        let hits = (0..reps)
            .filter(|_| {
                let z: f64 = rng.sample(StandardNormal);
                let v: f64 = rng.sample(chi);
                ((z + ncp) / (v / df).sqrt()).abs() > crit
            })
            .count();
        let simulated = hits as f64 / reps as f64;
        let integrated = oamix::evaluate::noncentral_t_two_sided_power(df, ncp, crit);
        assert!((integrated - simulated).abs() <= 0.005, "df {df} ncp {ncp}: {integrated} vs {simulated}");
    }
}

#[test]
fn no_residual_df_is_an_error() {
    let x = ModelMatrix::new(vec!["a".into(), "b".into()], Matrix::identity(2)).unwrap();
    assert!(matches!(
        power_table(&x, PowerSettings::default()),
        Err(oamix::Error::InsufficientDf { n: 2, p: 2 })
    ));
}
