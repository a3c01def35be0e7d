#![allow(dead_code)]

use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use conftc::planner::{Configuration, ObstacleTrajectory, Point, BUMP_LIPSCHITZ};
use conftc::tensor;
use conftc::{straighten, AlgebraSpec, Element, Generator, TensorElement};

/// Every generator of the free algebra, killed ones included.
pub fn all_generators(spec: &AlgebraSpec) -> Vec<Generator> {
    let p = spec.points();
    (1..=p)
        .flat_map(|i| (i + 1..=p).map(move |j| Generator::new(i, j)))
        .collect()
}

pub fn specs_up_to(total: u32, rs: &[u32]) -> Vec<AlgebraSpec> {
    let mut out = Vec::new();
    for &r in rs {
        for n in 1..=total {
            for m in 0..=total - n {
                out.push(AlgebraSpec::new(r, n, m).unwrap());
            }
        }
    }
    out
}

/// A random combination of straightened words of `len` distinct generators.
pub fn random_element(spec: &AlgebraSpec, len: usize, rng: &mut ChaCha8Rng) -> Element {
    let gens = all_generators(spec);
    let mut acc = Element::zero(spec);
    for _ in 0..rng.gen_range(1..=3) {
        let c = BigInt::from(rng.gen_range(-3i32..=3));
        let word: Vec<Generator> = if len <= gens.len() {
            sample(rng, gens.len(), len)
                .iter()
                .map(|k| gens[k])
                .collect()
        } else {
            return Element::zero(spec);
        };
        acc = acc.add(&straighten(spec, &word, &c).unwrap()).unwrap();
    }
    acc
}

/// Random homogeneous element of random length up to the top length.
pub fn random_homogeneous(spec: &AlgebraSpec, rng: &mut ChaCha8Rng) -> (Element, usize) {
    let len = rng.gen_range(0..=spec.max_length() as usize);
    (random_element(spec, len, rng), len)
}

/// Sum of a few `a ⊗ b` with `a`, `b` random homogeneous of the given lengths.
pub fn random_tensor(
    spec: &AlgebraSpec,
    left: usize,
    right: usize,
    rng: &mut ChaCha8Rng,
) -> TensorElement {
    let mut acc = TensorElement::zero(spec);
    for _ in 0..2 {
        let a = random_element(spec, left, rng);
        let b = random_element(spec, right, rng);
        acc = acc.add(&tensor(&a, &b).unwrap()).unwrap();
    }
    acc
}

pub fn sign(exponent: u32) -> BigInt {
    if exponent.is_multiple_of(2) {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

/// A random planning problem with piecewise-linear obstacle motion.
#[derive(Debug, Clone)]
pub struct Instance {
    pub obstacles: ObstacleTrajectory,
    pub start: Configuration,
    pub goal: Configuration,
    pub radius: f64,
}

pub const RADIUS: f64 = 0.2;
pub const MIN_SEP: f64 = 0.5;
pub const ENDPOINT_CLEARANCE: f64 = 0.3;
pub const MIN_FRAMES: usize = 100;

fn random_point(dim: usize, half: f64, rng: &mut ChaCha8Rng) -> Point {
    let mut p = [0.0; 3];
    for c in p.iter_mut().take(dim) {
        *c = rng.gen_range(-half..half);
    }
    p
}

fn lerp(a: &Point, b: &Point, t: f64) -> Point {
    [
        a[0] + t * (b[0] - a[0]),
        a[1] + t * (b[1] - a[1]),
        a[2] + t * (b[2] - a[2]),
    ]
}

fn dist(a: &Point, b: &Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn random_configuration(
    dim: usize,
    n: usize,
    avoid: &[Point],
    rng: &mut ChaCha8Rng,
) -> Configuration {
    loop {
        let points: Vec<Point> = (0..n).map(|_| random_point(dim, 3.0, rng)).collect();
        let ok = points.iter().enumerate().all(|(a, p)| {
            avoid.iter().all(|q| dist(p, q) >= ENDPOINT_CLEARANCE)
                && points[a + 1..]
                    .iter()
                    .all(|q| dist(p, q) >= ENDPOINT_CLEARANCE)
        });
        if ok {
            return Configuration::new(dim, points).unwrap();
        }
    }
}

/// Obstacles follow three random waypoints at `t = 0, 1/2, 1`, sampled finely
/// enough that every step stays below the isotopy's displacement limit, and
/// never on fewer than `MIN_FRAMES` steps.
pub fn random_instance(seed: u64, dim: usize, n: usize, m: usize) -> Instance {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limit = 0.9 * RADIUS / (2.0 * BUMP_LIPSCHITZ);
    let obstacles = loop {
        let waypoints: Vec<[Point; 3]> = (0..m)
            .map(|_| {
                [
                    random_point(dim, 2.0, &mut rng),
                    random_point(dim, 2.0, &mut rng),
                    random_point(dim, 2.0, &mut rng),
                ]
            })
            .collect();
        let longest = waypoints
            .iter()
            .flat_map(|w| [dist(&w[0], &w[1]), dist(&w[1], &w[2])])
            .fold(0.0, f64::max);
        let half = ((longest / limit).ceil() as usize).max(MIN_FRAMES / 2);
        let frames: Vec<Vec<Point>> = (0..=2 * half)
            .map(|k| {
                waypoints
                    .iter()
                    .map(|w| {
                        if k <= half {
                            lerp(&w[0], &w[1], k as f64 / half as f64)
                        } else {
                            lerp(&w[1], &w[2], (k - half) as f64 / half as f64)
                        }
                    })
                    .collect()
            })
            .collect();
        if let Ok(y) = ObstacleTrajectory::new(dim, frames) {
            if y.min_sep() >= MIN_SEP {
                break y;
            }
        }
    };
    let start = random_configuration(dim, n, obstacles.frame(0), &mut rng);
    let goal = random_configuration(dim, n, obstacles.frame(obstacles.steps()), &mut rng);
    Instance {
        obstacles,
        start,
        goal,
        radius: RADIUS,
    }
}

/// Deterministic probe points in a box around the obstacles.
pub fn probes(dim: usize, count: usize, seed: u64) -> Vec<Point> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_point(dim, 2.5, &mut rng))
        .collect()
}
