use comblab::exact::{ratio, Point, Segment};
use comblab::exec::Exec;
use comblab::generators::{generate, Scenario};
use comblab::overlay::{
    envelope_overlay, lower_envelope, marked_faces_complexity, refine, single_face_oracle, single_face_overlay,
    MarkedInstance,
};

#[test]
fn merge_matches_oracle_both_modes() {
    for seed in 0..40 {
        let inst = generate(&Scenario::Random { n: 24, t: 4, k: 2, size: 14, length: 7 }, seed).unwrap();
        for p in &inst.points {
            let oracle = single_face_oracle(&inst, p).unwrap();
            let seq = single_face_overlay(&inst, p, Exec::Sequential).unwrap();
            let par = single_face_overlay(&inst, p, Exec::Parallel).unwrap();
            assert_eq!(seq.face, oracle);
            assert_eq!(par.face, oracle);
            assert_eq!(seq.level_totals, par.level_totals);
            assert_eq!(*seq.level_totals.last().unwrap(), oracle.complexity.total());
        }
    }
}

#[test]
fn marked_faces_are_consistent() {
    for seed in 0..20 {
        let inst = generate(&Scenario::Random { n: 20, t: 3, k: 4, size: 12, length: 6 }, seed).unwrap();
        let mc = marked_faces_complexity(&inst, Exec::default()).unwrap();
        assert_eq!(mc.per_point.len(), 4);
        assert!(mc.union_total <= mc.per_point.iter().sum::<usize>());
        let r = refine(&inst, Exec::default()).unwrap();
        assert_eq!(r.c_total, mc.c_total);
        assert!(r.splitting_number <= r.splitting_bound());
        assert!(r.collections.iter().all(|c| c.tiled));
    }
}

#[test]
fn envelope_overlay_equals_union_envelope() {
    for seed in 0..20 {
        let inst = generate(&Scenario::Random { n: 18, t: 3, k: 0, size: 20, length: 9 }, seed).unwrap();
        let parts: Vec<Vec<Segment>> =
            inst.collections.iter().map(|c| c.iter().filter(|s| !s.is_vertical()).cloned().collect()).collect();
        let envs: Vec<_> = parts.iter().map(|c| lower_envelope(c).unwrap()).collect();
        let all: Vec<Segment> = parts.concat();
        let direct = lower_envelope(&all).unwrap();
        let merged = envelope_overlay(&envs);
        assert_eq!(merged.breakpoints, direct.breakpoints);
        assert_eq!(merged.pieces, direct.pieces);
        assert!(merged.is_normalized());
    }
}

#[test]
fn hole_in_marked_face() {
    // Outer square with a small inner square; the point sits in the annulus.
    let outer = vec![
        Segment::from_ints(0, 0, 0, 6, 0),
        Segment::from_ints(1, 6, 0, 6, 6),
        Segment::from_ints(2, 6, 6, 0, 6),
        Segment::from_ints(3, 0, 6, 0, 0),
    ];
    let inner = vec![
        Segment::from_ints(4, 2, 2, 4, 2),
        Segment::from_ints(5, 4, 2, 4, 4),
        Segment::from_ints(6, 4, 4, 2, 4),
        Segment::from_ints(7, 2, 4, 2, 2),
    ];
    let p = Point::new(ratio(1, 1), ratio(1, 2));
    let inst = MarkedInstance::new(vec![outer, inner], vec![p.clone()]).unwrap();
    let sf = single_face_overlay(&inst, &p, Exec::Sequential).unwrap();
    assert_eq!(sf.face.complexity.components, 2);
    assert_eq!(sf.face.complexity.total(), 16);
}
