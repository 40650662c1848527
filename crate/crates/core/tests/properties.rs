use qsurf::analytic::verified_distances;
use qsurf::codes::{build, table_codes, Family};
use qsurf::decoder::MatchingDecoder;
use qsurf::enumerate::{enumerate_classes, enumerate_code, DEFAULT_DECODE_BUDGET};
use qsurf::pauli::ErrorClass;

#[test]
fn every_pattern_up_to_t_is_corrected() {
    for (f, dx, dz) in table_codes() {
        let code = build(f, dx, dz).unwrap();
        let d = verified_distances(&code).unwrap();
        let t = (d.d_x.min(d.d_z) - 1) / 2;
        let table = enumerate_code(&code, t).unwrap();
        for j in 1..=t {
            assert_eq!(table.failures_at(j), 0, "{} weight {j}", code.name);
        }
    }
}

#[test]
fn square_d3_codes_are_self_dual() {
    for f in Family::ALL {
        let table = enumerate_code(&build(f, 3, 3).unwrap(), 2).unwrap();
        for (c, v) in &table.counts {
            let dual = table.get(c.j, c.l, c.i).unwrap();
            assert_eq!(v.failures, dual.failures, "{} {c}", table.code);
        }
    }
}

#[test]
fn swapping_dimensions_swaps_letters() {
    for f in [Family::Surface, Family::RotatedSurface] {
        let a = enumerate_code(&build(f, 3, 5).unwrap(), 2).unwrap();
        let b = enumerate_code(&build(f, 5, 3).unwrap(), 2).unwrap();
        for (c, v) in &a.counts {
            assert_eq!(v.failures, b.get(c.j, c.l, c.i).unwrap().failures, "{f} {c}");
        }
    }
}

#[test]
fn xzzx_and_css_fail_equally_often_on_depolarizing_noise() {
    for (css, xzzx) in [
        (Family::Surface, Family::Xzzx),
        (Family::RotatedSurface, Family::RotatedXzzx),
    ] {
        for (dx, dz) in [(3, 3), (3, 5)] {
            let a = enumerate_code(&build(css, dx, dz).unwrap(), 3).unwrap();
            let b = enumerate_code(&build(xzzx, dx, dz).unwrap(), 3).unwrap();
            for j in 0..=3 {
                assert_eq!(a.failures_at(j), b.failures_at(j), "{} j={j}", a.code);
            }
        }
    }
}

#[test]
fn y_only_classes_agree_between_frames() {
    // Y is fixed by Hadamard, so pure-Y patterns see the same syndrome in both frames
    for (dx, dz) in [(3, 3), (3, 5)] {
        for (css, xzzx) in [
            (Family::Surface, Family::Xzzx),
            (Family::RotatedSurface, Family::RotatedXzzx),
        ] {
            let a = enumerate_code(&build(css, dx, dz).unwrap(), 3).unwrap();
            let b = enumerate_code(&build(xzzx, dx, dz).unwrap(), 3).unwrap();
            for j in 1..=3 {
                let c = ErrorClass::new(j, 0, 0);
                assert_eq!(a.counts[&c], b.counts[&c], "{} {c}", a.code);
            }
        }
    }
}

#[test]
fn enumeration_is_independent_of_worker_count() {
    let code = build(Family::Xzzx, 3, 5).unwrap();
    let dec = MatchingDecoder::new(&code).unwrap();
    let run = |w: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .unwrap()
            .install(|| enumerate_classes(&dec, 3, DEFAULT_DECODE_BUDGET).unwrap())
    };
    assert_eq!(run(1), run(8));
}

#[test]
fn css_codes_correct_separately_correctable_parts() {
    for f in [Family::Surface, Family::RotatedSurface] {
        for (dx, dz) in [(3, 3), (3, 5), (5, 5)] {
            let code = build(f, dx, dz).unwrap();
            let (tx, tz) = ((dx - 1) / 2, (dz - 1) / 2);
            let table = enumerate_code(&code, 3).unwrap();
            for (c, v) in &table.counts {
                let y = c.y_count();
                if c.l + y <= tx && c.i + y <= tz {
                    assert_eq!(v.failures, 0, "{} {c}", code.name);
                }
            }
        }
    }
}
