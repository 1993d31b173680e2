use comblab::arrangement::Arrangement;
use comblab::bench::{clarkson_shor_trial, render_svg, run, run_suite, sampling_experiment, Suite};
use comblab::exec::Exec;
use comblab::generators::{generate, Scenario};

#[test]
fn full_sample_sees_every_intersection() {
    let inst = generate(&Scenario::Random { n: 20, t: 1, k: 10, size: 10, length: 8 }, 4).unwrap();
    let segs = inst.all_segments();
    let w = Arrangement::build(&segs).unwrap().intersecting_pairs();
    for seed in 0..3 {
        let rec = clarkson_shor_trial(&segs, &inst.points, segs.len(), seed).unwrap();
        assert_eq!(rec.sampled_intersections, w);
        assert_eq!(rec.sum_m, inst.points.len());
        assert!(rec.points_partitioned);
    }
}

#[test]
fn sampling_expectation_close() {
    let sc = Scenario::Random { n: 30, t: 1, k: 12, size: 15, length: 15 };
    let s = sampling_experiment(&sc, 100, 3, Exec::default()).unwrap();
    assert!(s.points_exact);
    assert!(s.r < s.n);
    assert!(s.within_tolerance, "mean {} vs {}", s.mean_sampled, s.expected);
}

#[test]
fn failing_scenario_is_isolated() {
    let scs = vec![Scenario::Grid { h: 3, v: 3, marks: 9 }, Scenario::Stabber { n: 5, size: 6 }];
    let recs = run(&scs, 1, 0, Exec::default());
    assert!(recs[0].error.is_some());
    assert!(recs[1].error.is_none());
}

#[test]
fn quick_suite_passes_and_repeats() {
    let a = run_suite(&Suite::quick(), 2, 9, Exec::default());
    assert!(a.passed(), "{:?}", a.violations);
    assert_eq!(a.to_json(), run_suite(&Suite::quick(), 2, 9, Exec::default()).to_json());
    assert!(Suite::by_name("nope").is_err());
}

#[test]
fn svg_shows_path() {
    let inst = generate(&Scenario::Stabber { n: 6, size: 8 }, 1).unwrap();
    let arr = Arrangement::build(&inst.all_segments()).unwrap();
    let path = vec![inst.points[0].clone(), comblab::exact::Point::int(-3, -3)];
    let svg = render_svg(&arr, &[0], &inst.points, Some(&path));
    assert_eq!(svg.matches("<line").count(), 6);
    assert_eq!(svg.matches("<polyline").count(), 1);
    assert_eq!(svg.matches("<circle").count(), 1);
}
