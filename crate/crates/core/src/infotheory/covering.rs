use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::Ellipsoid;
use crate::error::{invalid, Error, Result};

/// Largest point set the exact solvers accept.
pub const EXACT_BUDGET: usize = 30;
const DUPLICATE_TOL: f64 = 1e-12;

/// Distinct points of a common dimension under the Euclidean metric.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePointSet {
    points: Vec<Vec<f64>>,
}

impl FinitePointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dim || p.is_empty()) {
            return invalid("points must share a positive dimension");
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return invalid("coordinates must be finite");
        }
        for i in 0..points.len() {
            for j in 0..i {
                if distance(&points[i], &points[j]) <= DUPLICATE_TOL {
                    return invalid(format!("points {j} and {i} coincide"));
                }
            }
        }
        Ok(Self { points })
    }

    /// One point per non-empty line, coordinates separated by commas.
    pub fn from_csv(text: &str) -> Result<Self> {
        let points = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .enumerate()
            .map(|(row, line)| {
                line.split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::InvalidArgument(format!("row {}: '{c}' is not a number", row + 1)))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        distance(&self.points[i], &self.points[j])
    }

    fn check_budget(&self) -> Result<()> {
        if self.len() > EXACT_BUDGET {
            return Err(Error::BudgetExceeded {
                size: self.len(),
                limit: EXACT_BUDGET,
            });
        }
        Ok(())
    }

    /// `masks[i]` has bit `j` set when `pred(d(i, j))`.
    fn masks(&self, pred: impl Fn(f64) -> bool) -> Vec<u32> {
        (0..self.len())
            .map(|i| {
                (0..self.len())
                    .filter(|&j| pred(self.distance(i, j)))
                    .fold(0u32, |m, j| m | (1 << j))
            })
            .collect()
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask & (1 << i) != 0).collect()
}

/// A maximum ε-separated subset.
#[derive(Debug, Clone, PartialEq)]
pub struct Packing {
    pub size: usize,
    pub witness: Vec<usize>,
}

/// A minimum cover by closed ε-balls centred at set points.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    pub size: usize,
    pub centers: Vec<usize>,
}

/// The largest subset with all pairwise distances `> eps`, by
/// branch-and-bound maximum clique search.
pub fn packing_number_exact(ps: &FinitePointSet, eps: f64) -> Result<Packing> {
    ps.check_budget()?;
    if ps.is_empty() {
        return Ok(Packing {
            size: 0,
            witness: vec![],
        });
    }
    let adj: Vec<u32> = ps
        .masks(|d| d > eps)
        .into_iter()
        .enumerate()
        .map(|(i, m)| m & !(1 << i))
        .collect();
    let all = (1u32 << ps.len()) - 1;
    let mut best = 0u32;
    clique(&adj, 0, all, &mut best);
    let witness = indices(best);
    Ok(Packing {
        size: witness.len(),
        witness,
    })
}

fn clique(adj: &[u32], current: u32, mut candidates: u32, best: &mut u32) {
    if candidates == 0 {
        if current.count_ones() > best.count_ones() {
            *best = current;
        }
        return;
    }
    while candidates != 0 {
        if current.count_ones() + candidates.count_ones() <= best.count_ones() {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        clique(adj, current | (1 << v), candidates & adj[v], best);
        candidates &= !(1 << v);
    }
    if current.count_ones() > best.count_ones() {
        *best = current;
    }
}

/// The fewest closed balls `d ≤ eps` centred at points of `ps` that cover
/// `ps`, by exact set-cover search.
pub fn covering_number_exact(ps: &FinitePointSet, eps: f64) -> Result<Cover> {
    ps.check_budget()?;
    if ps.is_empty() {
        return Ok(Cover {
            size: 0,
            centers: vec![],
        });
    }
    let balls = ps.masks(|d| d <= eps);
    let all = (1u32 << ps.len()) - 1;
    // Greedy cover as the initial incumbent.
    let mut greedy = Vec::new();
    let mut covered = 0u32;
    while covered != all {
        let i = (0..balls.len())
            .max_by_key(|&i| (balls[i] & !covered).count_ones())
            .expect("non-empty");
        greedy.push(i);
        covered |= balls[i];
    }
    let mut best = greedy;
    let mut chosen = Vec::new();
    set_cover(&balls, all, 0, &mut chosen, &mut best);
    best.sort_unstable();
    Ok(Cover {
        size: best.len(),
        centers: best,
    })
}

fn set_cover(balls: &[u32], all: u32, covered: u32, chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
    let uncovered = all & !covered;
    if uncovered == 0 {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return;
    }
    let largest = balls.iter().map(|b| (b & uncovered).count_ones()).max().unwrap_or(0);
    if largest == 0 {
        return;
    }
    let needed = uncovered.count_ones().div_ceil(largest) as usize;
    if chosen.len() + needed >= best.len() {
        return;
    }
    // Branch on the uncovered point with the fewest balls containing it.
    let pivot = indices(uncovered)
        .into_iter()
        .min_by_key(|&u| balls.iter().filter(|b| *b & (1 << u) != 0).count())
        .expect("uncovered is non-empty");
    let mut options: Vec<usize> = (0..balls.len()).filter(|&i| balls[i] & (1 << pivot) != 0).collect();
    options.sort_by_key(|&i| std::cmp::Reverse((balls[i] & uncovered).count_ones()));
    for i in options {
        chosen.push(i);
        set_cover(balls, all, covered | balls[i], chosen, best);
        chosen.pop();
    }
}

/// A maximal ε-separated subset built greedily in index order. Every point
/// of `ps` lies within `eps` of some returned point.
pub fn greedy_separated_net(ps: &FinitePointSet, eps: f64) -> Vec<usize> {
    let mut net: Vec<usize> = Vec::new();
    for i in 0..ps.len() {
        if net.iter().all(|&j| ps.distance(i, j) > eps) {
            net.push(i);
        }
    }
    net
}

/// `count` seeded points on the boundary of the ellipsoid cut to its first
/// `dim_cut` axes.
pub fn sample_ellipsoid(ellipsoid: &Ellipsoid, dim_cut: usize, count: usize, seed: u64) -> Result<FinitePointSet> {
    if dim_cut == 0 || dim_cut > 4 || dim_cut > ellipsoid.dim() {
        return invalid(format!(
            "dim_cut must be in 1..=min(4, {}), got {dim_cut}",
            ellipsoid.dim()
        ));
    }
    if count > EXACT_BUDGET {
        return invalid(format!("count must be at most {EXACT_BUDGET}"));
    }
    let axes = &ellipsoid.semi_axes()[..dim_cut];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let u: Vec<f64> = (0..dim_cut).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        points.push(u.iter().zip(axes).map(|(x, a)| a * x / norm).collect());
    }
    FinitePointSet::new(points)
}
