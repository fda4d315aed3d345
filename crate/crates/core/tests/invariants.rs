//! Property tests over random potentials, delays and data.

use std::f64::consts::PI;

use proptest::prelude::*;

use dirac_delay::cli::io::{read_potential, read_spectra, write_potential, write_spectra};
use dirac_delay::forward::{
    compute_u, compute_v, integer_points, CharacteristicFunction, CharacteristicTable,
};
use dirac_delay::inverse::{
    delta_from_spectrum, predict_tail, run_algorithm1, FourierSeries, InverseConfig,
    PotentialSegment, SegmentTag,
};
use dirac_delay::{
    lattice_point, Complex64, DelayParameter, PotentialPair, RegionLayout, SampledFunction,
    SpectralData, Spectrum, UniformGrid,
};

fn delay() -> impl Strategy<Value = DelayParameter> {
    (PI / 3.0..0.4 * PI - 1e-6).prop_map(|a| DelayParameter::new(a).unwrap())
}

fn trig_potential(a: DelayParameter, c: [f64; 4], m: usize) -> PotentialPair {
    PotentialPair::from_fns(
        a,
        m,
        |t| Complex64::new(c[0] * (2.0 * t).sin() + c[1], c[2] * t.cos()),
        |t| Complex64::new(c[3] * t.cos(), c[0] * t),
    )
    .unwrap()
}

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn potential_csv_round_trip(values in prop::collection::vec((finite(), finite(), finite(), finite()), 3..40)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let grid = UniformGrid::new(1.1, PI, values.len() - 1).unwrap();
        let q: Vec<Complex64> = values.iter().map(|v| Complex64::new(v.0, v.1)).collect();
        let p: Vec<Complex64> = values.iter().map(|v| Complex64::new(v.2, v.3)).collect();
        write_potential(&path, &grid, &q, &p).unwrap();
        let (rq, rp) = read_potential(&path).unwrap();
        prop_assert_eq!(rq.values(), &q[..]);
        prop_assert_eq!(rp.values(), &p[..]);
        prop_assert_eq!(*rq.grid(), grid);
    }

    #[test]
    fn spectra_csv_round_trip(n in 1usize..12, eps in prop::collection::vec((finite(), finite()), 50)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let make = |j: u8, off: usize| {
            let v = (0..2 * n + 1).map(|k| Complex64::new(eps[(k + off) % 50].0, eps[(k + off) % 50].1)).collect();
            Spectrum::new(j, v).unwrap()
        };
        let data = SpectralData::new(make(1, 0), make(2, 7)).unwrap();
        write_spectra(&path, &data).unwrap();
        prop_assert_eq!(read_spectra(&path).unwrap(), data);
    }

    #[test]
    fn u_v_inversion_is_exact(a in delay(), c in prop::array::uniform4(-2.0..2.0f64)) {
        let v = compute_v(&trig_potential(a, c, 300), 300).unwrap();
        let back = compute_u(&v).to_v();
        for (f, g) in [(&v.v1, &back.v1), (&v.v2, &back.v2)] {
            for ((_, _, x), (_, _, y)) in f.samples().zip(g.samples()) {
                prop_assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn real_potentials_give_conjugate_symmetric_delta(
        a in delay(),
        c in prop::array::uniform4(-2.0..2.0f64),
        re in -15.0..15.0f64,
        im in -1.0..1.0f64,
    ) {
        let pot = PotentialPair::from_fns(
            a,
            200,
            |t| Complex64::new(c[0] * t.sin() + c[1], 0.0),
            |t| Complex64::new(c[2] * (c[3] * t).cos(), 0.0),
        )
        .unwrap();
        let cf = CharacteristicFunction::from_potential(&pot, 200).unwrap();
        let l = Complex64::new(re, im);
        for j in [1u8, 2] {
            prop_assert!((cf.delta(j, l.conj()) - cf.delta(j, l).conj()).norm() < 1e-10 * (1.0 + cf.delta(j, l).norm()));
        }
    }

    #[test]
    fn product_vanishes_on_its_spectrum(
        j in 1u8..=2,
        kappas in prop::collection::vec((-0.3..0.3f64, -0.3..0.3f64), 9),
        re in -6.0..6.0f64,
    ) {
        let values: Vec<Complex64> = (-4i64..=4)
            .zip(&kappas)
            .map(|(n, k)| Complex64::new(lattice_point(j, n) + k.0, k.1))
            .collect();
        let s = Spectrum::new(j, values.clone()).unwrap();
        for z in values {
            prop_assert_eq!(delta_from_spectrum(&s, z), Complex64::new(0.0, 0.0));
        }
        let lattice = Spectrum::lattice(j, 4).unwrap();
        let l = Complex64::new(re, 0.3);
        let expected = if j == 1 { -(l * PI).sin() } else { (l * PI).cos() };
        prop_assert!((delta_from_spectrum(&lattice, l) - expected).norm() < 1e-12 * (1.0 + expected.norm()));
    }

    #[test]
    fn lattice_spectra_have_a_lattice_tail(j in 1u8..=2, n in 8usize..40, xi in -2.0..2.0f64) {
        let tail = predict_tail(&Spectrum::lattice(j, n).unwrap(), &[xi, xi / 2.0 + 0.3], 3 * n).unwrap();
        prop_assert_eq!(tail.len(), 4 * n);
        for (k, l) in tail {
            prop_assert!((l - lattice_point(j, k)).norm() < 1e-12);
        }
    }

    #[test]
    fn fitted_jumps_recover_an_indicator(lo in -2.5..-0.2f64, len in 0.4..2.5f64, x in -3.0..3.0f64) {
        // u₁ = 1 on [lo, hi], u₂ = 0: c_n = (e^{in·hi} − e^{in·lo}) / (in)
        let hi = lo + len;
        let n = 60usize;
        let pts = integer_points(n);
        let c1: Vec<Complex64> = pts
            .iter()
            .map(|p| {
                let k = p.re;
                if k == 0.0 {
                    Complex64::new(len, 0.0)
                } else {
                    let ik = Complex64::new(0.0, k);
                    ((ik * hi).exp() - (ik * lo).exp()) / ik
                }
            })
            .collect();
        let c2: Vec<Complex64> = pts.iter().map(|p| (p * PI).cos()).collect();
        let t1 = CharacteristicTable::new(1, pts.clone(), c1).unwrap();
        let t2 = CharacteristicTable::new(2, pts, c2).unwrap();
        let series = FourierSeries::with_jumps(&t1, &t2, &[(lo, true), (hi, false)]).unwrap();
        prop_assume!((x - lo).abs() > 1e-6 && (x - hi).abs() > 1e-6);
        let (u1, u2) = series.eval(x);
        let expected = if x > lo && x < hi { 1.0 } else { 0.0 };
        prop_assert!((u1 - expected).norm() < 1e-9, "u1({x}) = {u1}");
        prop_assert!(u2.norm() < 1e-12);
    }

    #[test]
    fn window_passes_through_and_nodes_are_covered_once(
        a in delay(),
        q0 in -1.0..1.0f64,
        p0 in -1.0..1.0f64,
        n in 3usize..10,
    ) {
        let layout = RegionLayout::new(a);
        let known = layout.known();
        let grid = UniformGrid::new(known.lo, known.hi, 30).unwrap();
        let window = PotentialSegment::new(
            SegmentTag::Known,
            known,
            SampledFunction::from_fn(grid, |x| Complex64::new(q0 * x, 0.0)),
            SampledFunction::from_fn(grid, |_| Complex64::new(0.0, p0)),
        )
        .unwrap();
        let cfg = InverseConfig { m_aux: 300, m_out: 300, ..InverseConfig::default() };
        let rep = run_algorithm1(&SpectralData::lattice(n).unwrap(), &window, a, cfg).unwrap();
        let out = rep.result.grid();
        prop_assert_eq!(rep.assignment.len(), out.len());
        for (k, x) in out.nodes().enumerate() {
            let owners: Vec<SegmentTag> = rep.segments.iter().filter(|s| s.interval.contains(x)).map(|s| s.tag).collect();
            prop_assert!(!owners.is_empty());
            prop_assert_eq!(owners[0], rep.assignment[k]);
            if x > known.lo && x < known.hi {
                prop_assert_eq!(rep.assignment[k], SegmentTag::Known);
                prop_assert_eq!(rep.result.q().values()[k], window.q.at(x));
                prop_assert_eq!(rep.result.p().values()[k], window.p.at(x));
            }
        }
    }
}
