use proptest::prelude::*;
use std::f64::consts::TAU;
use zonal_core::pipeline::{apply, precompute, FourierCodec, IdentityOracle, KernelSpec, SquareOracle, TranslateMultiplyOracle, TrigPoly};
use zonal_core::quadrature::{product_rule, QuadratureRule};

fn trig<'a>(cos: &'a [f64], sin: &'a [f64]) -> impl Fn(f64) -> f64 + 'a {
    move |t| {
        cos.iter().enumerate().map(|(k, a)| a * (k as f64 * t).cos()).sum::<f64>()
            + sin.iter().enumerate().map(|(k, b)| b * (k as f64 * t).sin()).sum::<f64>()
    }
}

proptest! {
    #[test]
    fn codec_round_trip_is_exact(coeffs in prop::collection::vec(-2.0f64..2.0, 10), scale in 0.1f64..10.0) {
        let codec = FourierCodec::new(5, scale).unwrap();
        let (cos, sin) = coeffs.split_at(5);
        let mut sin = sin.to_vec();
        sin[0] = 0.0;
        let f = trig(cos, &sin);
        let p = codec.decode(&codec.encode(&f)).unwrap();
        for j in 0..100 {
            let t = TAU * j as f64 / 100.0;
            prop_assert!((p.eval(t) - f(t)).abs() < 1e-10);
        }
    }
}

#[test]
fn identity_dataset_stores_unlifted_points() {
    let codec = FourierCodec::new(2, 2.0).unwrap();
    let rule = product_rule(3, 10).unwrap();
    let ds = precompute(&IdentityOracle, codec, codec, rule, KernelSpec { d: 3, n: 1, r: 1.0 }, 0.1).unwrap();
    for (k, (y, _)) in ds.rule.iter().enumerate() {
        if ds.clamp_report.contains(&k) {
            continue;
        }
        for (z, u) in ds.z(k).iter().zip(&y[..3]) {
            let expected = u / y[3];
            assert!((z - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
        }
    }
}

#[test]
fn cap_restricted_rule_has_no_clamps() {
    let full = product_rule(3, 10).unwrap();
    let (mut points, mut weights) = (Vec::new(), Vec::new());
    for (y, w) in full.iter() {
        if y[3] >= 0.1 {
            points.extend_from_slice(y);
            weights.push(w);
        }
    }
    let cap = QuadratureRule::new(3, points, weights, 0).unwrap();
    let codec = FourierCodec::new(2, 2.0).unwrap();
    let ds = precompute(&SquareOracle, codec, codec, cap, KernelSpec { d: 3, n: 1, r: 1.0 }, 0.1).unwrap();
    assert!(ds.clamp_report.is_empty());
}

#[test]
fn translation_oracle_on_bandlimited_inputs() {
    // F(t − c)·1 on a degree-1 input stays in the codec range: z_k is the rotated feature pair
    let oracle = TranslateMultiplyOracle {
        shift: 0.4,
        multiplier: TrigPoly::from_cos_sin(&[1.0], &[]),
    };
    let codec = FourierCodec::new(2, 2.0).unwrap();
    let ds = precompute(&oracle, codec, codec, product_rule(3, 20).unwrap(), KernelSpec { d: 3, n: 2, r: 1.0 }, 0.1).unwrap();
    let f = |t: f64| 0.3 * t.cos();
    let out = apply(&ds, &f).unwrap();
    let err = (0..100)
        .map(|j| TAU * j as f64 / 100.0)
        .map(|t| (out.output.eval(t) - f(t - 0.4)).abs())
        .fold(0.0, f64::max);
    assert!(err < 0.05, "{err}");
}

#[test]
fn squaring_is_lipschitz_on_the_input_class() {
    let cin = FourierCodec::new(2, 2.0).unwrap();
    let cout = FourierCodec::new(3, 2.0).unwrap();
    let ds = precompute(&SquareOracle, cin, cout, product_rule(3, 40).unwrap(), KernelSpec { d: 3, n: 4, r: 1.0 }, 0.1).unwrap();
    let base = |t: f64| 0.5 * t.cos();
    let a = apply(&ds, &base).unwrap();
    for eta in [1e-2, 1e-3, 1e-4] {
        let moved = move |t: f64| 0.5 * t.cos() + eta * (t.sin() + 0.5);
        let b = apply(&ds, &moved).unwrap();
        let change = (0..200)
            .map(|j| TAU * j as f64 / 200.0)
            .map(|t| (a.output.eval(t) - b.output.eval(t)).abs())
            .fold(0.0, f64::max);
        // sup |η g| = 1.5 η; the frozen constant 4 covers 2·sup|F| plus approximation slack
        assert!(change <= 4.0 * 1.5 * eta, "eta={eta}: {change}");
    }
}

#[test]
fn parameter_count_is_exact() {
    let cin = FourierCodec::new(3, 2.0).unwrap();
    let cout = FourierCodec::new(4, 2.0).unwrap();
    let rule = product_rule(5, 3).unwrap();
    let n = rule.len();
    let ds = precompute(&SquareOracle, cin, cout, rule, KernelSpec { d: 5, n: 1, r: 0.0 }, 0.1).unwrap();
    assert_eq!(ds.parameter_count(), (5 + 7) * n);
    assert_eq!(ds.z_table.len(), 7 * n);
}
