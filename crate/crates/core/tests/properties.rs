mod common;

use julia_shift::map_model::{DomainDisk, PolynomialMap};
use julia_shift::rigorous_geom::{connected_clusters, BoxCover, Frame, IntervalBox};
use julia_shift::{chi, coding::PointSpec, ExactComplex};
use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::OnceLock;

fn cubic_map() -> PolynomialMap {
    PolynomialMap::from_real_decimals(&["3.75", "-6.75", "0", "1"]).unwrap()
}

fn eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

proptest! {
    #[test]
    fn enclosure_contains_sampled_images(
        x in -6.0f64..6.0, y in -6.0f64..6.0,
        w in 0.0f64..0.5, h in 0.0f64..0.5,
        s in 0.0f64..=1.0, t in 0.0f64..=1.0,
    ) {
        let b = IntervalBox::new(x, x + w, y, y + h);
        let z = Complex64::new(x + s * w, y + t * h);
        for (map, coeffs) in [
            (cubic_map(), vec![3.75, -6.75, 0.0, 1.0]),
            (PolynomialMap::from_real_decimals(&["-6", "0", "1"]).unwrap(), vec![-6.0, 0.0, 1.0]),
        ] {
            let img = map.eval_box(&b);
            let v = eval(&coeffs, z);
            // the float sample carries its own rounding error
            let slack = 1e-9 * (1.0 + v.norm());
            prop_assert!(img.re_lo() <= v.re + slack && v.re - slack <= img.re_hi());
            prop_assert!(img.im_lo() <= v.im + slack && v.im - slack <= img.im_hi());
        }
    }

    #[test]
    fn cluster_order_ignores_input_order(mut cells in prop::collection::vec((0i64..24, 0i64..24), 1..120), seed in any::<u64>()) {
        let frame = Frame { x0: 0.0, y0: 0.0, side: 32.0 };
        let a = connected_clusters(&BoxCover::new(frame, 5, cells.clone()));
        // deterministic shuffle
        let n = cells.len();
        for i in 0..n {
            let j = ((seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64)) % n as u64) as usize;
            cells.swap(i, j);
        }
        let b = connected_clusters(&BoxCover::new(frame, 5, cells));
        prop_assert_eq!(a, b);
    }
}

fn cubic_tree() -> &'static julia_shift::PuzzleTree {
    static TREE: OnceLock<julia_shift::PuzzleTree> = OnceLock::new();
    TREE.get_or_init(|| common::cubic(2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// `χ(z) = deg(f, z) χ(f(z))` on iterated preimages of the critical
    /// point and of the fixed point.
    #[test]
    fn chi_is_multiplicative(branches in prop::collection::vec(0usize..3, 1..4), base in 0usize..2) {
        let tree = cubic_tree();
        let nears = [(-2.6, 0.0), (2.3, 0.0), (0.3, 0.0)];
        let start = ["1.5", "-3"][base];
        let mut spec = PointSpec::exact(ExactComplex::parse(start, "0").unwrap());
        let mut value = chi(tree, &spec, 20).unwrap().value;
        for b in branches {
            let next = PointSpec::preimage(spec.clone(), nears[b]);
            match chi(tree, &next, 20) {
                Ok(r) => {
                    prop_assert_eq!(r.value, value);
                    prop_assert!(r.value <= 2);
                    value = r.value;
                    spec = next;
                }
                // a preimage of -3 near 1.5 is the critical point, a double root
                Err(_) => break,
            }
        }
    }
}

#[test]
fn disk_shrinking_keeps_center() {
    let disk = DomainDisk::centered("6").unwrap();
    let half = num_rational::BigRational::new(1.into(), 2.into());
    assert_eq!(disk.shrunk(&half).radius.to_string(), "3");
}
