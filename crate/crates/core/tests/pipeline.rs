use colorfilt_core::color::{convert, hsb_to_rgb, rgb_to_hsb};
use colorfilt_core::filters::{apply_denoise, apply_edge};
use colorfilt_core::metrics::{psnr, rsc, sr};
use colorfilt_core::noise::apply_noise;
use colorfilt_core::synth::generate_document;
use colorfilt_core::{Approach, ColorSpace, Error, FilterKind, FilterSpec, NoiseSpec};

#[test]
fn median_removes_impulse_noise() {
    let page = generate_document(320, 320, 8).unwrap().image;
    let noisy = apply_noise(&page, &NoiseSpec::from_id(6, 1).unwrap()).unwrap();
    let before = psnr(&page, &noisy).unwrap();
    for approach in Approach::ALL {
        let spec = FilterSpec::new(FilterKind::Median, approach).unwrap();
        let filtered = apply_denoise(&noisy, spec).unwrap();
        let after = psnr(&page, &filtered).unwrap();
        assert!(after > before + 3.0, "{approach}: {before} -> {after}");
        assert!(sr(&page, &filtered).unwrap() < sr(&page, &noisy).unwrap());
    }
}

#[test]
fn filters_run_in_both_spaces() {
    let page = generate_document(96, 64, 2).unwrap().image;
    let hsb = rgb_to_hsb(&page).unwrap();
    assert_eq!(convert(&page, ColorSpace::Hsb).unwrap(), hsb);
    for kind in FilterKind::ALL {
        for approach in Approach::ALL {
            let spec = FilterSpec { kind, approach };
            if spec.validate().is_err() {
                continue;
            }
            if kind.is_edge() {
                let map = apply_edge(&hsb, spec).unwrap();
                assert!(rsc(&map, 3, None).unwrap() >= 0.0);
            } else {
                let out = apply_denoise(&hsb, spec).unwrap();
                assert_eq!(out.space(), ColorSpace::Hsb);
                hsb_to_rgb(&out).unwrap();
            }
        }
    }
}

#[test]
fn invalid_combinations_are_rejected() {
    assert!(matches!(FilterSpec::new(FilterKind::Sobel, Approach::VectorThenMarginal), Err(Error::InvalidApproach { .. })));
    let page = generate_document(64, 64, 0).unwrap().image;
    let hsb = rgb_to_hsb(&page).unwrap();
    assert!(matches!(apply_noise(&hsb, &NoiseSpec::from_id(1, 0).unwrap()), Err(Error::WrongSpace { .. })));
    assert!(matches!(psnr(&page, &page.crop(0, 0, 32, 32)), Err(Error::SizeMismatch { .. })));
}
