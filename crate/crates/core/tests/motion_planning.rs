use comblab::arrangement::{Arrangement, Location};
use comblab::exact::{ratio, Point};
use comblab::generators::is_forbidden;
use comblab::motion::{path_is_clear, plan, PlanOutcome, PlanProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn square(side: i64) -> Vec<Point> {
    vec![Point::int(0, 0), Point::int(side, 0), Point::int(side, side), Point::int(0, side)]
}

/// Every sampled point of the polyline lies inside the face holding the start.
fn stays_in_face(prob: &PlanProblem, pts: &[Point]) -> bool {
    let arr = Arrangement::build(&prob.families().unwrap().concat()).unwrap();
    let face = arr.locate(&prob.start);
    pts.windows(2).all(|w| {
        (0..=16).all(|i| {
            let t = ratio(i, 16);
            let p = w[0].add(&w[1].sub(&w[0]).scale(&t));
            arr.locate(&p) == face
        })
    })
}

#[test]
fn fence_with_a_door() {
    // Pins around a box except a wide gap in the top side: the robot has to
    // leave through the door and walk around.
    let mut pins = Vec::new();
    for i in -5..=5 {
        pins.extend([Point::int(i, -5), Point::int(-5, i), Point::int(5, i)]);
        if !(-1..=2).contains(&i) {
            pins.push(Point::int(i, 5));
        }
    }
    let prob = PlanProblem { robot: square(1), obstacles: pins, start: Point::int(0, 0), goal: Point::int(0, -9), reference: None };
    let PlanOutcome::Path(path) = plan(&prob).unwrap() else { panic!("door should be passable") };
    assert!(path.points.len() > 3);
    assert!(path_is_clear(&path.points, &prob.families().unwrap().concat()));
    assert!(stays_in_face(&prob, &path.points));
}

#[test]
fn reference_point_shifts_regions() {
    let prob = PlanProblem {
        robot: square(2),
        obstacles: vec![Point::int(0, 0)],
        start: Point::int(3, 3),
        goal: Point::int(-3, -3),
        reference: Some(Point::int(1, 1)),
    };
    let regions = prob.regions().unwrap();
    assert!(is_forbidden(&regions, &Point::int(0, 0)));
    assert!(!is_forbidden(&regions, &Point::int(2, 2)));
    assert!(matches!(plan(&prob).unwrap(), PlanOutcome::Path(_)));
}

#[test]
fn random_problems_agree_with_full_overlay() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut paths = 0;
    let mut blocked = 0;
    for _ in 0..40 {
        // A ring of pins with random holes; start inside, goal outside or inside.
        let mut pins = Vec::new();
        for i in -4..=4 {
            for p in [Point::int(i, -4), Point::int(i, 4), Point::int(-4, i), Point::int(4, i)] {
                if rng.gen_bool(0.9) {
                    pins.push(p);
                }
            }
        }
        let robot = if rng.gen_bool(0.5) { square(2) } else { vec![Point::int(0, 0), Point::int(2, 0), Point::int(1, 2)] };
        let goal = if rng.gen_bool(0.8) { Point::int(12, rng.gen_range(-12..12)) } else { Point::new(ratio(-5, 3), ratio(1, 7)) };
        let prob = PlanProblem { robot, obstacles: pins, start: Point::new(ratio(1, 3), ratio(2, 7)), goal, reference: None };
        let regions = prob.regions().unwrap();
        if is_forbidden(&regions, &prob.start) || is_forbidden(&regions, &prob.goal) {
            assert!(plan(&prob).is_err());
            continue;
        }
        let arr = Arrangement::build(&prob.families().unwrap().concat()).unwrap();
        let (a, b) = (arr.locate(&prob.start), arr.locate(&prob.goal));
        assert!(matches!(a, Location::Face(_)) && matches!(b, Location::Face(_)));
        match plan(&prob).unwrap() {
            PlanOutcome::Path(p) => {
                assert_eq!(a, b);
                assert!(stays_in_face(&prob, &p.points));
                paths += 1;
            }
            PlanOutcome::Unreachable => {
                assert_ne!(a, b);
                blocked += 1;
            }
        }
    }
    assert!(paths > 0 && blocked > 0, "paths {paths}, blocked {blocked}");
}
