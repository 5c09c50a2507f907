//! Distribution-level agreement checks: the two CUE sampling backends, the
//! rotation invariance of every field, and the calibration of the KS
//! machinery itself.

use cuelab::chaos::{mass_from_field, normalizer_exact, TestFn};
use cuelab::cue::{
    field_on_grid, log_abs_char_dense, sample_haar_qr, traces_dense, CueSample, FieldMode,
};
use cuelab::gaussian::sample_gaussian_field;
use cuelab::par::mc_collect;
use cuelab::rng::Streams;
use cuelab_harness::stats::{ks_one_sample, ks_two_sample, EmpiricalLaw};
use rand::Rng;
use rand_distr::Exp1;
use std::f64::consts::TAU;

fn law(values: Vec<f64>, source: &str) -> EmpiricalLaw {
    EmpiricalLaw::new(values, source).expect("finite samples")
}

#[test]
fn verblunsky_and_dense_qr_backends_agree_in_law() {
    const N: usize = 8;
    const DRAWS: u64 = 10_000;
    let streams = Streams::new(21);
    let recursion: Vec<(f64, f64)> = mc_collect(DRAWS, |i| {
        let mut rng = streams.stream(i);
        let mut sample = CueSample::generate(N, &mut rng).expect("positive size");
        sample.ensure_traces(1);
        (sample.traces[0].re, sample.x_full_at(0.0))
    });
    let dense: Vec<(f64, f64)> = mc_collect(DRAWS, |i| {
        let mut rng = streams.stream((1 << 32) + i);
        let u = sample_haar_qr(N, &mut rng).expect("positive size");
        (traces_dense(&u, 1)[0].re, log_abs_char_dense(&u, 0.0))
    });
    let (rec_tr, rec_x): (Vec<f64>, Vec<f64>) = recursion.into_iter().unzip();
    let (den_tr, den_x): (Vec<f64>, Vec<f64>) = dense.into_iter().unzip();

    let trace_ks = ks_two_sample(&law(rec_tr, "recursion Re Tr U"), &law(den_tr, "dense Re Tr U"))
        .expect("nonempty samples");
    assert!(
        trace_ks.p_value > 0.01,
        "Re Tr U laws agree across backends, KS p = {}",
        trace_ks.p_value
    );
    let field_ks = ks_two_sample(&law(rec_x, "recursion X(0)"), &law(den_x, "dense X(0)"))
        .expect("nonempty samples");
    assert!(
        field_ks.p_value > 0.01,
        "X(0) laws agree across backends, KS p = {}",
        field_ks.p_value
    );
}

#[test]
fn cue_field_is_rotation_invariant_in_law() {
    const N: usize = 16;
    const DRAWS: u64 = 10_000;
    let streams = Streams::new(22);
    let at_first = mc_collect(DRAWS, |i| {
        let mut rng = streams.stream(i);
        CueSample::generate(N, &mut rng)
            .expect("positive size")
            .x_full_at(0.3)
    });
    let at_second = mc_collect(DRAWS, |i| {
        let mut rng = streams.stream((1 << 32) + i);
        CueSample::generate(N, &mut rng)
            .expect("positive size")
            .x_full_at(4.1)
    });
    let ks = ks_two_sample(&law(at_first, "X(0.3)"), &law(at_second, "X(4.1)"))
        .expect("nonempty samples");
    assert!(
        ks.p_value > 0.01,
        "X(θ) law does not depend on θ, KS p = {}",
        ks.p_value
    );
}

#[test]
fn gaussian_field_is_rotation_invariant_in_law() {
    const M: usize = 32;
    const GRID: usize = 256;
    const DRAWS: u64 = 20_000;
    let streams = Streams::new(23);
    let at_first = mc_collect(DRAWS, |i| {
        let mut rng = streams.stream(i);
        sample_gaussian_field(M, GRID, &mut rng).expect("grid fits").values[17]
    });
    let at_second = mc_collect(DRAWS, |i| {
        let mut rng = streams.stream((1 << 32) + i);
        sample_gaussian_field(M, GRID, &mut rng).expect("grid fits").values[170]
    });
    let ks = ks_two_sample(&law(at_first, "G at 17"), &law(at_second, "G at 170"))
        .expect("nonempty samples");
    assert!(
        ks.p_value > 0.01,
        "G(θ) law does not depend on θ, KS p = {}",
        ks.p_value
    );
}

#[test]
fn chaos_mass_law_is_unchanged_by_rotating_the_test_function() {
    const N: usize = 16;
    const GRID: usize = 128;
    const DRAWS: u64 = 4000;
    let beta = 1.0;
    let normalizer = normalizer_exact(N, beta).expect("β in range");
    let plain = TestFn::OnePlusCos;
    let rotated = TestFn::Grid(
        (0..GRID)
            .map(|g| 1.0 + (TAU * g as f64 / GRID as f64 - 2.0).cos())
            .collect(),
    );
    let streams = Streams::new(24);
    let mass_with = |phi: &TestFn, base: u64| {
        mc_collect(DRAWS, |i| {
            let mut rng = streams.stream(base + i);
            let sample = CueSample::generate(N, &mut rng).expect("positive size");
            let field = field_on_grid(&sample, GRID, FieldMode::Full).expect("grid fits");
            mass_from_field(&field, beta, &normalizer, phi)
                .expect("normalizer matches")
                .mass
        })
    };
    let ks = ks_two_sample(
        &law(mass_with(&plain, 0), "mass against 1+cos(θ)"),
        &law(mass_with(&rotated, 1 << 32), "mass against 1+cos(θ-2)"),
    )
    .expect("nonempty samples");
    assert!(
        ks.p_value > 0.01,
        "rotating the test function preserves the mass law, KS p = {}",
        ks.p_value
    );
}

#[test]
fn ks_p_values_are_calibrated_on_an_exponential_null() {
    const REPS: usize = 200;
    const SIZE: usize = 500;
    let streams = Streams::new(25);
    let mut clear = 0;
    for rep in 0..REPS {
        let mut rng = streams.stream(rep as u64);
        let draws: Vec<f64> = (0..SIZE).map(|_| rng.sample(Exp1)).collect();
        let ks = ks_one_sample(&law(draws, "exp(1) draws"), |x| 1.0 - (-x).exp())
            .expect("nonempty sample");
        if ks.p_value > 0.01 {
            clear += 1;
        }
    }
    assert!(
        clear * 100 >= REPS * 95,
        "Exp(1) null keeps p > 0.01 in at least 95% of repetitions, got {clear}/{REPS}"
    );
}
