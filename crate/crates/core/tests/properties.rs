mod common;

use common::*;
use proptest::prelude::*;

use skinforge_core::colorspace::{rgb_to_gray, rgb_to_ycgcr, rgb_to_yiq, yiq_to_rgb};
use skinforge_core::skin_model::{classify_pixel, in_skin_cgcr, in_skin_iq};
use skinforge_core::{RgbPixel, SkinModelParams};

fn pixel() -> impl Strategy<Value = RgbPixel> {
    any::<[u8; 3]>().prop_map(RgbPixel::from)
}

#[test]
fn gray_axis() {
    for v in 0..=255u8 {
        let p = RgbPixel::gray(v);
        let yiq = rgb_to_yiq(p);
        assert!(yiq.i.abs() < 1e-9 && yiq.q.abs() < 1e-9, "{v}: {yiq:?}");
        let ycc = rgb_to_ycgcr(p);
        assert!((ycc.cg - 128.0).abs() < 1e-9 && (ycc.cr - 128.0).abs() < 1e-9);
    }
}

#[test]
fn classifier_matches_literal_equations_on_lattice() {
    let m = SkinModelParams::default();
    let mut skin = 0;
    for r in (0..=255u16).step_by(8) {
        for g in (0..=255u16).step_by(8) {
            for b in (0..=255u16).step_by(8) {
                let p = RgbPixel::new(r as u8, g as u8, b as u8);
                let got = classify_pixel(p, 0.0, &m);
                assert_eq!(got, ref_classify(p, 0.0, &m), "{p:?}");
                skin += got as usize;
            }
        }
    }
    // the lattice does cross the skin locus
    assert!(skin > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn yiq_round_trip_within_one(p in pixel()) {
        let back = yiq_to_rgb(rgb_to_yiq(p));
        prop_assert!(back.r.abs_diff(p.r) <= 1);
        prop_assert!(back.g.abs_diff(p.g) <= 1);
        prop_assert!(back.b.abs_diff(p.b) <= 1);
    }

    #[test]
    fn transforms_match_reference(p in pixel()) {
        let (y, cg, cr) = ref_ycgcr(p);
        let ycc = rgb_to_ycgcr(p);
        prop_assert!((ycc.y - y).abs() < 1e-9 && (ycc.cg - cg).abs() < 1e-9 && (ycc.cr - cr).abs() < 1e-9);
        let (y, i, q) = ref_yiq(p);
        let yiq = rgb_to_yiq(p);
        prop_assert!((yiq.y - y).abs() < 1e-9 && (yiq.i - i).abs() < 1e-9 && (yiq.q - q).abs() < 1e-9);
        prop_assert_eq!(rgb_to_gray(p), yiq.y);
    }

    #[test]
    fn yiq_linear_ycgcr_affine(a in any::<[u8; 3]>().prop_map(|c| c.map(|v| v / 2)),
                               b in any::<[u8; 3]>().prop_map(|c| c.map(|v| v / 2))) {
        let (pa, pb) = (RgbPixel::from(a), RgbPixel::from(b));
        let sum = RgbPixel::new(a[0] + b[0], a[1] + b[1], a[2] + b[2]);
        let (ys, ya, yb) = (rgb_to_yiq(sum), rgb_to_yiq(pa), rgb_to_yiq(pb));
        prop_assert!((ys.y - ya.y - yb.y).abs() < 1e-9);
        prop_assert!((ys.i - ya.i - yb.i).abs() < 1e-9);
        prop_assert!((ys.q - ya.q - yb.q).abs() < 1e-9);

        let off = rgb_to_ycgcr(RgbPixel::BLACK);
        let (cs, ca, cb) = (rgb_to_ycgcr(sum), rgb_to_ycgcr(pa), rgb_to_ycgcr(pb));
        prop_assert!(((cs.y - off.y) - (ca.y - off.y) - (cb.y - off.y)).abs() < 1e-9);
        prop_assert!(((cs.cg - off.cg) - (ca.cg - off.cg) - (cb.cg - off.cg)).abs() < 1e-9);
        prop_assert!(((cs.cr - off.cr) - (ca.cr - off.cr) - (cb.cr - off.cr)).abs() < 1e-9);
    }

    #[test]
    fn and_never_admits_a_color_reject(p in pixel(), g in 0.0f64..60.0) {
        let m = SkinModelParams::default();
        if classify_pixel(p, g, &m) {
            prop_assert!(in_skin_iq(&rgb_to_yiq(p), &m));
            prop_assert!(in_skin_cgcr(&rgb_to_ycgcr(p), &m));
        }
    }

    #[test]
    fn threshold_monotone(p in pixel(), g in 0.0f64..80.0, t1 in 0.0f64..60.0, dt in 0.0f64..60.0) {
        let lo = SkinModelParams { gradient_threshold: t1, ..Default::default() };
        let hi = SkinModelParams { gradient_threshold: t1 + dt, ..Default::default() };
        prop_assert!(!classify_pixel(p, g, &lo) || classify_pixel(p, g, &hi));
    }
}
