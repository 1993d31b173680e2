//! Translating a simple polygon among point obstacles. A placement is the
//! position of a reference point `c` of the robot; the placements hitting a
//! pin form the robot reflected through `c` and moved onto the pin.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::arrangement::{locate_trapezoid, Arrangement, Location, Trapezoid};
use crate::error::{Error, Result};
use crate::exact::{segments_meet, Point, Rat, Segment};
use crate::exec::Exec;
use crate::generators::{forbidden_regions, is_forbidden, reflect_translate};
use crate::overlay::{single_face_overlay, MarkedInstance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanProblem {
    pub robot: Vec<Point>,
    pub obstacles: Vec<Point>,
    pub start: Point,
    pub goal: Point,
    /// Reference point; the first robot vertex when absent.
    #[serde(default)]
    pub reference: Option<Point>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Path {
    pub points: Vec<Point>,
    /// Trapezoids visited between start and goal.
    pub trapezoids: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PlanOutcome {
    Path(Path),
    Unreachable,
}

impl PlanProblem {
    pub fn reference_point(&self) -> Result<Point> {
        match (&self.reference, self.robot.first()) {
            (Some(c), _) => Ok(c.clone()),
            (None, Some(v)) => Ok(v.clone()),
            (None, None) => Err(Error::Input("robot has no vertices".into())),
        }
    }

    /// Forbidden-region edges grouped into one family per robot edge.
    pub fn families(&self) -> Result<Vec<Vec<Segment>>> {
        reflect_translate(&self.robot, &self.reference_point()?, &self.obstacles)
    }

    pub fn regions(&self) -> Result<Vec<Vec<Point>>> {
        Ok(forbidden_regions(&self.robot, &self.reference_point()?, &self.obstacles))
    }

    fn check_free(&self, regions: &[Vec<Point>], p: &Point, what: &str) -> Result<()> {
        if is_forbidden(regions, p) {
            Err(Error::Input(format!("{what} {p} places the robot on an obstacle")))
        } else {
            Ok(())
        }
    }
}

pub fn plan(prob: &PlanProblem) -> Result<PlanOutcome> {
    plan_with(prob, Exec::default())
}

pub fn plan_with(prob: &PlanProblem, exec: Exec) -> Result<PlanOutcome> {
    let families = prob.families()?;
    let regions = prob.regions()?;
    prob.check_free(&regions, &prob.start, "start")?;
    prob.check_free(&regions, &prob.goal, "goal")?;
    if prob.start == prob.goal {
        return Ok(PlanOutcome::Path(Path { points: vec![prob.start.clone()], trapezoids: 1 }));
    }
    let inst = MarkedInstance::new(families, vec![prob.start.clone()])?;
    let sf = single_face_overlay(&inst, &prob.start, exec)?;
    if sf.arrangement.locate(&prob.goal) != Location::Face(sf.face_id) {
        return Ok(PlanOutcome::Unreachable);
    }
    let path = extract_path(&sf.arrangement, &prob.start, &prob.goal)?;
    let segments = inst.all_segments();
    if !path_is_clear(&path.points, &segments) {
        return Err(Error::Invariant("extracted path touches a forbidden segment".into()));
    }
    Ok(PlanOutcome::Path(path))
}

/// Whether no leg of the polyline meets any of the segments.
pub fn path_is_clear(points: &[Point], segments: &[Segment]) -> bool {
    if let [p] = points {
        return segments.iter().all(|s| !crate::exact::point_on_segment(p, s));
    }
    points.windows(2).all(|w| {
        let leg = Segment { id: 0, source: w[0].clone(), target: w[1].clone() };
        segments.iter().all(|s| !segments_meet(&leg, s))
    })
}

/// Breadth-first search over the trapezoids of the face holding `s` and `e`;
/// the path visits the interior point of every trapezoid on the way and
/// crosses walls at points avoiding vertices.
pub fn extract_path(arr: &Arrangement, s: &Point, e: &Point) -> Result<Path> {
    if s == e {
        return Ok(Path { points: vec![s.clone()], trapezoids: 1 });
    }
    let traps = arr.vertical_decomposition();
    let find = |p: &Point| {
        locate_trapezoid(arr, &traps, p).ok_or_else(|| Error::Invariant(format!("no trapezoid holds {p}")))
    };
    let (a, b) = (find(s)?, find(e)?);
    if traps[a].face != traps[b].face {
        return Err(Error::Input("start and goal lie in different faces".into()));
    }
    let face = traps[a].face;
    let mut by_left: BTreeMap<&Rat, Vec<usize>> = BTreeMap::new();
    for (i, t) in traps.iter().enumerate() {
        if t.face == face {
            if let Some(l) = &t.left {
                by_left.entry(l).or_default().push(i);
            }
        }
    }
    let neighbours = |i: usize| -> Vec<(usize, Point)> {
        let t: &Trapezoid = &traps[i];
        let mut out = Vec::new();
        let Some(r) = &t.right else { return out };
        for &j in by_left.get(r).map(Vec::as_slice).unwrap_or(&[]) {
            if let Some(w) = t.shared_wall_point(&traps[j], arr) {
                out.push((j, w));
            }
        }
        out
    };
    // Walls are found from the left trapezoid, so build both directions up front.
    let mut adj: Vec<Vec<(usize, Point)>> = vec![Vec::new(); traps.len()];
    for i in 0..traps.len() {
        if traps[i].face == face {
            for (j, w) in neighbours(i) {
                adj[j].push((i, w.clone()));
                adj[i].push((j, w));
            }
        }
    }
    let mut prev: Vec<Option<(usize, Point)>> = vec![None; traps.len()];
    let mut seen = vec![false; traps.len()];
    seen[a] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(i) = queue.pop_front() {
        if i == b {
            break;
        }
        for (j, w) in &adj[i] {
            if !seen[*j] {
                seen[*j] = true;
                prev[*j] = Some((i, w.clone()));
                queue.push_back(*j);
            }
        }
    }
    if !seen[b] {
        return Err(Error::Invariant("trapezoids of one face are not connected".into()));
    }
    let mut rev = vec![e.clone(), traps[b].interior_point(arr)];
    let mut cur = b;
    let mut count = 1;
    while let Some((p, w)) = &prev[cur] {
        rev.push(w.clone());
        rev.push(traps[*p].interior_point(arr));
        cur = *p;
        count += 1;
    }
    rev.push(s.clone());
    rev.reverse();
    rev.dedup();
    Ok(Path { points: rev, trapezoids: count })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_robot(side: i64) -> Vec<Point> {
        vec![Point::int(0, 0), Point::int(side, 0), Point::int(side, side), Point::int(0, side)]
    }

    #[test]
    fn single_pin_reachable() {
        let prob = PlanProblem {
            robot: square_robot(1),
            obstacles: vec![Point::int(0, 0)],
            start: Point::int(5, 5),
            goal: Point::int(-5, -5),
            reference: None,
        };
        let PlanOutcome::Path(path) = plan(&prob).unwrap() else { panic!("expected a path") };
        assert_eq!(path.points.first(), Some(&prob.start));
        assert_eq!(path.points.last(), Some(&prob.goal));
        assert!(path_is_clear(&path.points, &prob.families().unwrap().concat()));
    }

    #[test]
    fn same_start_and_goal() {
        let prob = PlanProblem {
            robot: square_robot(1),
            obstacles: vec![Point::int(0, 0)],
            start: Point::int(3, 3),
            goal: Point::int(3, 3),
            reference: None,
        };
        assert_eq!(plan(&prob).unwrap(), PlanOutcome::Path(Path { points: vec![Point::int(3, 3)], trapezoids: 1 }));
    }

    #[test]
    fn start_inside_region_rejected() {
        let prob = PlanProblem {
            robot: square_robot(2),
            obstacles: vec![Point::int(0, 0)],
            start: Point::int(-1, -1),
            goal: Point::int(5, 5),
            reference: None,
        };
        assert!(matches!(plan(&prob), Err(Error::Input(_))));
    }

    #[test]
    fn fence_blocks() {
        // Pins one unit apart around a 10 x 10 box; a 2 x 2 robot cannot pass.
        let mut pins = Vec::new();
        for i in -5..=5 {
            pins.extend([Point::int(i, -5), Point::int(i, 5), Point::int(-5, i), Point::int(5, i)]);
        }
        let prob = PlanProblem {
            robot: square_robot(2),
            obstacles: pins,
            start: Point::int(0, 0),
            goal: Point::int(20, 20),
            reference: None,
        };
        assert_eq!(plan(&prob).unwrap(), PlanOutcome::Unreachable);
    }
}
