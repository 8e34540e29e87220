mod common;

use common::*;
use magstack::forward::FieldMap;
use magstack::geometry::{Layer, Plane};
use magstack::inverse::{
    continuation_matrix, invert_matrix, reconstruct_two_layer, DcPolicy, KCut, ReconstructionConfig, TwoLayerSolution,
};
use magstack::io::metrics::relative_rms;
use magstack::scenarios::add_field_noise;
use magstack::spectral::{forward_transform, ScalarField2D, WindowSpec};
use magstack::Component;
use proptest::prelude::*;
use rustfft::num_complex::Complex;

fn cabs2(a: Complex<f64>, b: Complex<f64>) -> f64 {
    (a.norm_sqr() + b.norm_sqr()).sqrt()
}

/// Unwindowed, unpadded settings under which synthesis and inversion share
/// one periodic lattice.
fn periodic(k_cut: f64, dc: DcPolicy) -> ReconstructionConfig {
    ReconstructionConfig {
        window: WindowSpec::None,
        pad_factor: 1,
        k_cut: KCut::Fixed(k_cut),
        dc_policy: dc,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn forward_then_inverse_recovers_every_bin(
        k in 1e-3f64..1000.0,
        a in -1e4f64..1e4, b in -1e4f64..1e4, c in -1e4f64..1e4, d in -1e4f64..1e4,
    ) {
        let g = reference_geometry();
        let (j1, j2) = (Complex::new(a, b), Complex::new(c, d));
        prop_assume!(cabs2(j1, j2) > 1e-3);
        let (f1, f2) = continuation_matrix(k, &g).apply(j1, j2);
        // the solution acts on the raw plane fields (Ĥx,M1, Ĥx,M2)
        let (r1, r2) = TwoLayerSolution::new(k, &g).apply(-f1, f2);
        let err = cabs2(r1 - j1, r2 - j2) / cabs2(j1, j2);
        prop_assert!(err <= 1e-10, "k={k} err={err}");
    }

    #[test]
    fn closed_form_matches_matrix_solve(k in 1e-3f64..1000.0, h1 in -1.0f64..1.0, h2 in -1.0f64..1.0) {
        let g = reference_geometry();
        let (h1, h2) = (Complex::new(h1, 0.3 * h2), Complex::new(h2, -0.7 * h1));
        prop_assume!(cabs2(h1, h2) > 1e-6);
        let inv = invert_matrix(&continuation_matrix(k, &g)).unwrap();
        let (m1, m2) = inv.apply(-h1, h2);
        let (c1, c2) = TwoLayerSolution::new(k, &g).apply(h1, h2);
        let err = cabs2(c1 - m1, c2 - m2) / cabs2(m1, m2);
        prop_assert!(err <= 1e-12, "k={k} err={err}");
    }

    #[test]
    fn downward_and_upward_continuation_cancel(delta in 1e-3f64..0.05, seed in 0u64..1000) {
        let n = 32;
        let f = ScalarField2D::from_fn(n, n, 1.5625e-3, 1.5625e-3, 0.0, Component::Bx, |x: f64, y: f64| {
            ((x * 917.0 + seed as f64).sin() * (y * 311.0).cos()) + 0.1
        }).unwrap();
        let s = forward_transform(&f).unwrap();
        let back = s.apply_transfer(|k| (-k * delta).exp()).apply_transfer(|k| (k * delta).exp());
        for (a, b) in back.values().iter().zip(s.values()) {
            prop_assert!((a - b).norm() <= 1e-12 * b.norm().max(1e-300) + 1e-300);
        }
    }
}

#[test]
fn zero_fields_give_zero_currents() {
    let g = reference_geometry();
    for dc in [DcPolicy::MinimumNorm, DcPolicy::Zero, DcPolicy::ZeroBorder] {
        let cfg = ReconstructionConfig { dc_policy: dc, ..Default::default() };
        let zero = |p: Plane| {
            let z = grid(32).zeros(g.plane_z(p), Component::Bx).unwrap();
            FieldMap::new(p, z.clone(), z).unwrap()
        };
        let r = reconstruct_two_layer(&zero(Plane::M1), &zero(Plane::M2), &g, &cfg).unwrap();
        for l in [&r.s1, &r.s2] {
            assert!(l.jx().values().iter().chain(l.jy().values()).all(|&v| v == 0.0));
        }
    }
}

#[test]
fn positive_current_is_recovered_as_positive() {
    let g = reference_geometry();
    for layer in Layer::BOTH {
        let l = layers(&[strip(layer, 0.5, 0.08, 0.0, 0.01)], 128, &g);
        let cfg = periodic(600.0, DcPolicy::MinimumNorm);
        let m = fields(&l, &g, &cfg);
        let r = reconstruct_two_layer(&m[0], &m[1], &g, &cfg).unwrap();
        assert!(r.layer(layer).jy().get(64, 64) > 0.0, "{layer:?}");
    }
}

#[test]
fn periodic_round_trip_is_nearly_exact() {
    let g = reference_geometry();
    let l = layers(&two_strips(5e-3), 256, &g);
    let cfg = periodic(2000.0, DcPolicy::ZeroBorder);
    let m = fields(&l, &g, &cfg);
    let r = reconstruct_two_layer(&m[0], &m[1], &g, &cfg).unwrap();
    for (rec, truth) in [(&r.s1, &l[0]), (&r.s2, &l[1])] {
        let e = relative_rms(rec.jy(), truth.jy(), 0.6).unwrap();
        assert!(e < 5e-3, "{e}");
    }
}

#[test]
fn single_layer_input_leaves_the_other_layer_empty() {
    let g = reference_geometry();
    let l = layers(&two_strips(5e-3)[..1], 256, &g);
    let (k_cut, rolloff) = (1000.0, 0.2);
    let cfg = ReconstructionConfig { rolloff, ..periodic(k_cut, DcPolicy::ZeroBorder) };
    let m = fields(&l, &g, &cfg);
    let r = reconstruct_two_layer(&m[0], &m[1], &g, &cfg).unwrap();
    let (rms1, rms2) = (rms(r.s1.jy().values()), rms(r.s2.jy().values()));
    assert!(rms2 <= 1e-3 * rms1, "{rms2} vs {rms1}");
    let single = single_layer_division(&m[0], &g, k_cut, rolloff);
    let e = rel_err(r.s1.jy().values(), single.values());
    assert!(e < 0.01, "{e}");
}

#[test]
fn noise_response_grows_with_the_cutoff() {
    let g = reference_geometry();
    let quiet = |p: Plane| {
        let z = grid(128).zeros(g.plane_z(p), Component::Bx).unwrap();
        FieldMap::new(p, z.clone(), z).unwrap()
    };
    let n1 = add_field_noise(&quiet(Plane::M1), 1e-9, 7).unwrap();
    let n2 = add_field_noise(&quiet(Plane::M2), 1e-9, 8).unwrap();
    let mut last = 0.0;
    for k_cut in [100.0, 200.0, 400.0, 800.0, 1600.0] {
        let r = reconstruct_two_layer(&n1, &n2, &g, &periodic(k_cut, DcPolicy::Zero)).unwrap();
        let e = rms(r.s1.jy().values()) + rms(r.s2.jy().values());
        assert!(e > last, "k_cut {k_cut}: {e} after {last}");
        last = e;
    }
}

#[test]
fn error_on_noisy_data_is_non_decreasing_beyond_the_signal_band() {
    let g = reference_geometry();
    let l = layers(&two_strips(5e-3), 128, &g);
    let base = periodic(1.0, DcPolicy::ZeroBorder);
    let m = fields(&l, &g, &base);
    let noisy = [add_field_noise(&m[0], 1e-12, 1).unwrap(), add_field_noise(&m[1], 1e-12, 2).unwrap()];
    let mut last = 0.0;
    for k_cut in [1500.0, 1800.0, 2100.0, 2400.0] {
        let cfg = periodic(k_cut, DcPolicy::ZeroBorder);
        let r = reconstruct_two_layer(&noisy[0], &noisy[1], &g, &cfg).unwrap();
        let e = relative_rms(r.s1.jy(), l[0].jy(), 0.6).unwrap() + relative_rms(r.s2.jy(), l[1].jy(), 0.6).unwrap();
        assert!(e >= last, "k_cut {k_cut}: {e} after {last}");
        last = e;
    }
}

#[test]
fn single_precision_pipeline_works() {
    use magstack::forward::{forward_spectral, CurrentLayer};
    use magstack::geometry::StackGeometry;
    let g = StackGeometry::<f32>::from_separations(11e-3, 14e-3, 13e-3, 1e-3, 1.2e-3).validate().unwrap();
    let jy = magstack::spectral::ScalarField2D::<f32>::from_fn(64, 64, 6.25e-3, 6.25e-3, g.layer_z(Layer::S1), Component::Jy, |x: f32, y: f32| {
        -1e4 * (-(x * x + y * y) / (2.0 * 0.03f32.powi(2))).exp()
    })
    .unwrap();
    let s1 = CurrentLayer::from_jy(Layer::S1, jy);
    let cfg = periodic(300.0, DcPolicy::ZeroBorder);
    let m1 = forward_spectral(&s1, &g, Plane::M1, &cfg).unwrap();
    let m2 = forward_spectral(&s1, &g, Plane::M2, &cfg).unwrap();
    let r = reconstruct_two_layer(&m1, &m2, &g, &cfg).unwrap();
    let (a, t) = (r.s1.jy().values(), s1.jy().values());
    let num: f32 = a.iter().zip(t).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f32 = t.iter().map(|y| y * y).sum();
    assert!((num / den).sqrt() < 1e-2);
}
