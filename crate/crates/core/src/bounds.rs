//! Bounds on the topological complexity of the configuration spaces.
//!
//! The lower bound is `zcl + 1`, where `zcl` is the length of the longest
//! nonzero product of basic zero-divisors `ē(i,j)` found by [`zcl_search`].
//! The upper bound comes from the homotopy dimension of the space. For the
//! planar and spatial cases with at least two objects the exact value is
//! known and reported by [`tc_exact`] together with where it comes from.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, Generator};
use crate::error::BoundsError;
use crate::tensor::TensorElement;

/// Default node budget for [`zcl_search`].
pub const DEFAULT_BUDGET: u64 = 5_000_000;

/// `ē(i,j)` raised to `multiplicity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WitnessFactor {
    pub i: u32,
    pub j: u32,
    pub multiplicity: u32,
}

impl WitnessFactor {
    pub const fn new(i: u32, j: u32, multiplicity: u32) -> Self {
        WitnessFactor { i, j, multiplicity }
    }
}

/// Total number of zero-divisors in a witness.
pub fn witness_length(witness: &[WitnessFactor]) -> u32 {
    witness.iter().map(|f| f.multiplicity).sum()
}

/// Product of the listed zero-divisors, each repeated `multiplicity` times, in order.
pub fn witness_product(
    spec: &AlgebraSpec,
    factors: &[WitnessFactor],
) -> Result<TensorElement, BoundsError> {
    let mut acc = TensorElement::unit(spec);
    for f in factors {
        if f.multiplicity == 0 {
            return Err(BoundsError::ZeroMultiplicity { i: f.i, j: f.j });
        }
        for _ in 0..f.multiplicity {
            acc = acc.mul_zero_divisor(Generator::new(f.i, f.j))?;
        }
    }
    Ok(acc)
}

/// Result of a zero-divisor cup-length search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZclSearch {
    pub length: u32,
    pub witness: Vec<WitnessFactor>,
    pub exhaustive: bool,
    pub nodes_visited: u64,
}

struct Branch {
    best: Vec<usize>,
    nodes: u64,
}

struct Dfs<'a> {
    gens: &'a [Generator],
    cap: u32,
    max_len: usize,
    budget: u64,
    counter: &'a AtomicU64,
    aborted: &'a AtomicBool,
}

#[derive(PartialEq)]
enum Flow {
    Continue,
    Stop,
}

impl Dfs<'_> {
    /// Explores every nondecreasing extension of `path` in lex order.
    fn walk(
        &self,
        product: &TensorElement,
        path: &mut Vec<usize>,
        run: u32,
        out: &mut Branch,
    ) -> Result<Flow, BoundsError> {
        let last = *path.last().expect("branch roots are non-empty");
        for idx in last..self.gens.len() {
            let next_run = if idx == last { run + 1 } else { 1 };
            if next_run > self.cap {
                continue;
            }
            if self.counter.fetch_add(1, Ordering::Relaxed) >= self.budget {
                self.aborted.store(true, Ordering::Relaxed);
                return Ok(Flow::Stop);
            }
            out.nodes += 1;
            let next = product.mul_zero_divisor(self.gens[idx])?;
            if next.is_zero() {
                continue;
            }
            path.push(idx);
            if path.len() > out.best.len() {
                out.best = path.clone();
            }
            // The first path to reach the length cap is the lex-least one.
            let flow = if path.len() >= self.max_len {
                Flow::Stop
            } else {
                self.walk(&next, path, next_run, out)?
            };
            path.pop();
            if flow == Flow::Stop {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }
}

/// Longest nonzero product of basic zero-divisors, by pruned depth-first search.
///
/// Candidates are multisets over `{ē(i,j) : i <= n}` with each factor used at
/// most once for odd `r` (its square vanishes) and at most twice for even `r`
/// (its cube contains a square on one side). Products that vanish are pruned,
/// since every extension vanishes too. Lengths are capped by the degree bound
/// `2 * top_degree / r` and by `max_length` when given.
///
/// Top-level branches run in parallel. Among witnesses of maximal length the
/// lexicographically least one (in generator order) is returned, so the
/// result does not depend on scheduling unless the node budget runs out.
pub fn zcl_search(
    spec: &AlgebraSpec,
    max_length: Option<u32>,
    budget: u64,
) -> Result<ZclSearch, BoundsError> {
    let gens = spec.live_generators();
    let cap = if spec.is_odd() { 1 } else { 2 };
    let mut max_len = 2 * spec.max_length() as usize;
    if let Some(limit) = max_length {
        max_len = max_len.min(limit as usize);
    }
    if gens.is_empty() || max_len == 0 || budget == 0 {
        return Ok(ZclSearch {
            length: 0,
            witness: Vec::new(),
            exhaustive: budget > 0 || gens.is_empty() || max_len == 0,
            nodes_visited: 0,
        });
    }

    let counter = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let dfs = Dfs {
        gens: &gens,
        cap,
        max_len,
        budget,
        counter: &counter,
        aborted: &aborted,
    };
    let branches: Vec<Result<Branch, BoundsError>> = (0..gens.len())
        .into_par_iter()
        .map(|root| {
            let mut out = Branch {
                best: Vec::new(),
                nodes: 0,
            };
            if counter.fetch_add(1, Ordering::Relaxed) >= budget {
                aborted.store(true, Ordering::Relaxed);
                return Ok(out);
            }
            out.nodes += 1;
            let product = TensorElement::unit(spec).mul_zero_divisor(gens[root])?;
            if product.is_zero() {
                return Ok(out);
            }
            let mut path = vec![root];
            out.best = path.clone();
            if max_len > 1 {
                dfs.walk(&product, &mut path, 1, &mut out)?;
            }
            Ok(out)
        })
        .collect();

    let mut best: Vec<usize> = Vec::new();
    let mut nodes = 0;
    for branch in branches {
        let branch = branch?;
        nodes += branch.nodes;
        // Branches arrive in root order, so strict comparison keeps the lex-least.
        if branch.best.len() > best.len() {
            best = branch.best;
        }
    }

    let mut witness: Vec<WitnessFactor> = Vec::new();
    for idx in &best {
        let g = gens[*idx];
        match witness.last_mut() {
            Some(f) if f.i == g.i && f.j == g.j => f.multiplicity += 1,
            _ => witness.push(WitnessFactor::new(g.i, g.j, 1)),
        }
    }
    Ok(ZclSearch {
        length: best.len() as u32,
        witness,
        exhaustive: !aborted.load(Ordering::Relaxed),
        nodes_visited: nodes,
    })
}

/// Upper bound on TC from the homotopy dimension.
///
/// For `r >= 2` the space is simply connected and `TC <= dim + 1`; for `r = 1`
/// it is only connected and `TC <= 2 dim + 1`. Here `dim` is the top degree
/// of the cohomology, `r(n-1)` without obstacles and `rn` with.
pub fn upper_bound(spec: &AlgebraSpec) -> u32 {
    let dim = spec.top_degree();
    if spec.r() >= 2 {
        dim + 1
    } else {
        2 * dim + 1
    }
}

/// Where an exact TC value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TcSource {
    /// Spatial case, `2n - 1` without obstacles and `2n + 1` with.
    SpatialTheorem,
    /// Planar case with at least two obstacles, `2n + 1`.
    PlanarTheorem,
    /// Planar case with one obstacle, `2n`, via `F(R^2 - pt, n) ≃ F(R^2, n + 1)`.
    PlanarOneObstacle,
    /// Planar case without obstacles, `2n - 2`, the known value for `F(R^2, n)`.
    PlanarNoObstacleImported,
}

impl TcSource {
    /// True when the value is the known result for obstacle-free planar
    /// configuration spaces rather than part of the obstacle tables.
    pub fn is_imported(self) -> bool {
        matches!(self, TcSource::PlanarNoObstacleImported)
    }

    pub fn citation(self) -> &'static str {
        match self {
            TcSource::SpatialTheorem => "spatial table: 2n-1 (m=0), 2n+1 (m>=1)",
            TcSource::PlanarTheorem => "planar table: 2n+1 (m>=2)",
            TcSource::PlanarOneObstacle => {
                "planar table: 2n (m=1), via F(R^2 - pt, n) ~ F(R^2, n+1)"
            }
            TcSource::PlanarNoObstacleImported => {
                "planar table: 2n-2 (m=0); imported value of TC(F(R^2, n))"
            }
        }
    }
}

/// An exact TC value with its source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactTc {
    pub value: u32,
    pub source: TcSource,
}

/// Exact TC for `n >= 2` objects in the plane (`r = 1`) or in space (`r = 2`).
pub fn tc_exact(spec: &AlgebraSpec) -> Result<ExactTc, BoundsError> {
    let (r, n, m) = (spec.r(), spec.n(), spec.m());
    if n < 2 {
        return Err(BoundsError::UnsupportedSpec {
            spec: *spec,
            reason: "exact values need at least two objects",
        });
    }
    let exact = match (r, m) {
        (2, 0) => ExactTc {
            value: 2 * n - 1,
            source: TcSource::SpatialTheorem,
        },
        (2, _) => ExactTc {
            value: 2 * n + 1,
            source: TcSource::SpatialTheorem,
        },
        (1, 0) => ExactTc {
            value: 2 * n - 2,
            source: TcSource::PlanarNoObstacleImported,
        },
        (1, 1) => ExactTc {
            value: 2 * n,
            source: TcSource::PlanarOneObstacle,
        },
        (1, _) => ExactTc {
            value: 2 * n + 1,
            source: TcSource::PlanarTheorem,
        },
        _ => {
            return Err(BoundsError::UnsupportedSpec {
                spec: *spec,
                reason: "exact values are known only for r = 1 and r = 2",
            })
        }
    };
    Ok(exact)
}

/// Lower and upper TC bounds with the exact value when known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub spec: AlgebraSpec,
    /// `zcl + 1` for the longest product found. Not claimed optimal.
    pub lower: u32,
    pub upper: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<TcSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_citation: Option<String>,
    pub witness: Vec<WitnessFactor>,
    pub exhaustive: bool,
    pub nodes_visited: u64,
}

impl BoundsReport {
    pub fn zcl_length(&self) -> u32 {
        self.lower - 1
    }

    pub fn is_tight(&self) -> bool {
        self.lower == self.upper
    }
}

pub fn bounds_report(spec: &AlgebraSpec, budget: u64) -> Result<BoundsReport, BoundsError> {
    let search = zcl_search(spec, None, budget)?;
    let lower = search.length + 1;
    let upper = upper_bound(spec);
    let exact = tc_exact(spec).ok();
    let consistent = lower <= upper && exact.is_none_or(|e| lower <= e.value && e.value <= upper);
    if !consistent {
        return Err(BoundsError::Inconsistent {
            spec: *spec,
            lower,
            upper,
            exact: exact.map(|e| e.value),
        });
    }
    Ok(BoundsReport {
        spec: *spec,
        lower,
        upper,
        exact: exact.map(|e| e.value),
        source: exact.map(|e| e.source),
        source_citation: exact.map(|e| e.source.citation().to_string()),
        witness: search.witness,
        exhaustive: search.exhaustive,
        nodes_visited: search.nodes_visited,
    })
}
