//! Random circle samples, dissimilarity families on the circle, Kendall-tau
//! distances and the diameter-rate experiment.

use std::collections::HashSet;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::DissimilarityMatrix;
use crate::permutation::{Permutation, SolutionSet};
use crate::seriation::recursive_seriation;

/// Orderings enumerated per trial by [`rate_experiment`] before the trial
/// is dropped.
pub const RATE_ENUMERATION_CAP: usize = 256;

/// Shortest-arc length between two points of the unit circle `[0, 1)`.
pub fn arc_distance(s: f64, t: f64) -> Result<f64> {
    for v in [s, t] {
        if !(0.0..1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!("{v} is not in [0, 1)")));
        }
    }
    let diff = (s - t).abs();
    Ok(diff.min(1.0 - diff))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircleSample {
    pub points: Vec<f64>,
    pub seed: u64,
}

impl CircleSample {
    pub fn new(points: Vec<f64>, seed: u64) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !(0.0..1.0).contains(*p)) {
            return Err(Error::InvalidParameter(format!("{p} is not in [0, 1)")));
        }
        Ok(CircleSample { points, seed })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Indices of the points in ascending order of position.
    pub fn sorting_permutation(&self) -> Permutation {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.points[a].total_cmp(&self.points[b]));
        Permutation::from_vec_unchecked(idx)
    }
}

/// `n` independent uniform points on `[0, 1)`. A repeated value is redrawn,
/// so all points are distinct.
pub fn sample_uniform(n: usize, seed: u64) -> Result<CircleSample> {
    if n == 0 {
        return Err(Error::TooSmall(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let x: f64 = rng.gen();
        if seen.insert(x.to_bits()) {
            points.push(x);
        }
    }
    Ok(CircleSample { points, seed })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind {
    /// The arc length itself.
    Arc,
    /// Euclidean chord length `2 sin(π · arc)`.
    Chord,
    /// `u + c·u²` applied to the arc length `u`.
    Warped { c: f64 },
}

/// A dissimilarity on the circle bounded by `ell · arc ≤ d ≤ big_l · arc`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissimilarityFamily {
    pub kind: FamilyKind,
    pub ell: f64,
    pub big_l: f64,
}

impl DissimilarityFamily {
    pub fn arc() -> Self {
        DissimilarityFamily {
            kind: FamilyKind::Arc,
            ell: 1.0,
            big_l: 1.0,
        }
    }

    pub fn chord() -> Self {
        DissimilarityFamily {
            kind: FamilyKind::Chord,
            ell: 4.0,
            big_l: 2.0 * std::f64::consts::PI,
        }
    }

    /// Requires a finite `c ≥ 0` so that the warp stays strictly increasing.
    pub fn warped(c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::InvalidParameter(format!("warp coefficient {c}")));
        }
        Ok(DissimilarityFamily {
            kind: FamilyKind::Warped { c },
            ell: 1.0,
            big_l: 1.0 + c / 2.0,
        })
    }

    /// Dissimilarity as a function of the arc length `u ∈ [0, 1/2]`.
    pub fn of_arc(&self, u: f64) -> f64 {
        match self.kind {
            FamilyKind::Arc => u,
            FamilyKind::Chord => 2.0 * (std::f64::consts::PI * u).sin(),
            FamilyKind::Warped { c } => u + c * u * u,
        }
    }

    pub fn eval(&self, s: f64, t: f64) -> Result<f64> {
        Ok(self.of_arc(arc_distance(s, t)?))
    }
}

impl FromStr for DissimilarityFamily {
    type Err = Error;

    /// `arc`, `chord`, `warped` (c = 1) or `warped:<c>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arc" => Ok(Self::arc()),
            "chord" => Ok(Self::chord()),
            "warped" => Self::warped(1.0),
            _ => match s.strip_prefix("warped:").map(str::parse::<f64>) {
                Some(Ok(c)) => Self::warped(c),
                _ => Err(Error::InvalidParameter(format!("unknown family `{s}`"))),
            },
        }
    }
}

impl fmt::Display for DissimilarityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::Arc => f.write_str("arc"),
            FamilyKind::Chord => f.write_str("chord"),
            FamilyKind::Warped { c } => write!(f, "warped:{c}"),
        }
    }
}

/// The sample's dissimilarity matrix together with the permutation listing
/// the points in ascending order, which is a valid circular ordering.
pub fn build_matrix(
    sample: &CircleSample,
    family: &DissimilarityFamily,
) -> Result<(DissimilarityMatrix, Permutation)> {
    let truth = sample.sorting_permutation();
    let p = &sample.points;
    if let Some(w) = truth.as_slice().windows(2).find(|w| p[w[0]] == p[w[1]]) {
        return Err(Error::InvalidParameter(format!(
            "points {} and {} coincide",
            w[0], w[1]
        )));
    }
    let arcs = DissimilarityMatrix::from_fn(p.len(), |i, j| {
        let diff = (p[i] - p[j]).abs();
        family.of_arc(diff.min(1.0 - diff))
    })?;
    Ok((arcs, truth))
}

fn check_lengths(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(())
}

fn pairs(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Number of pairs `i < j` with `a[i] > a[j]`, by merge sort.
fn inversions(a: &[usize]) -> u64 {
    let mut v = a.to_vec();
    let mut buf = vec![0; v.len()];
    sort_count(&mut v, &mut buf)
}

fn sort_count(v: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count =
        sort_count(&mut v[..mid], &mut buf[..mid]) + sort_count(&mut v[mid..], &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[i] <= v[j] {
            buf[k] = v[i];
            i += 1;
        } else {
            buf[k] = v[j];
            count += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    count
}

/// Discordant pairs of `a` and `b`, i.e. inversions of `a` read in the
/// order that sorts `b`.
fn discordant(a: &Permutation, b: &Permutation) -> u64 {
    let binv = b.inverse();
    let seq: Vec<usize> = binv.as_slice().iter().map(|&i| a.apply(i)).collect();
    inversions(&seq)
}

/// Fraction of index pairs on which `a` and `b` disagree. Equals 0 for
/// permutations of length below 2.
pub fn kendall_tau(a: &Permutation, b: &Permutation) -> Result<f64> {
    check_lengths(a, b)?;
    let total = pairs(a.len());
    if total == 0 {
        return Ok(0.0);
    }
    Ok(discordant(a, b) as f64 / total as f64)
}

/// `min_g kendall_tau(a ∘ g, b)` over the dihedral group acting on
/// positions, which is symmetric in `a` and `b`.
pub fn kendall_tau_dihedral(a: &Permutation, b: &Permutation) -> Result<f64> {
    check_lengths(a, b)?;
    let n = a.len();
    let total = pairs(n);
    if total == 0 {
        return Ok(0.0);
    }
    let binv = b.inverse();
    let (a, b) = (a.as_slice(), binv.as_slice());
    let mut seq = vec![0; n];
    let mut best = total;
    for s in 0..n {
        for reflect in [false, true] {
            for (k, slot) in seq.iter_mut().enumerate() {
                let pos = if reflect {
                    (s + n - b[k]) % n
                } else {
                    (b[k] + s) % n
                };
                *slot = a[pos];
            }
            best = best.min(inversions(&seq));
        }
    }
    Ok(best as f64 / total as f64)
}

/// Largest quotient distance [`kendall_tau_dihedral`] between two orderings
/// of `s`.
pub fn solution_diameter(s: &SolutionSet) -> Result<f64> {
    let all: Vec<&Permutation> = s.iter().collect();
    let first = all.first().ok_or(Error::Empty("solution set"))?;
    let mut diam = 0.0f64;
    for (i, a) in all.iter().enumerate() {
        check_lengths(first, a)?;
        for b in &all[i + 1..] {
            diam = diam.max(kendall_tau_dihedral(a, b)?);
        }
    }
    Ok(diam)
}

/// Largest spacing between circularly consecutive points, the wrap-around
/// gap included.
pub fn max_gap(points: &[f64]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Empty("sample"));
    }
    let mut x = points.to_vec();
    x.sort_by(f64::total_cmp);
    let wrap = 1.0 - x[x.len() - 1] + x[0];
    Ok(x.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one trial, independent of scheduling.
pub fn trial_seed(seed: u64, n: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ n as u64) ^ trial as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub n: usize,
    /// Trials that entered the averages.
    pub trials: usize,
    pub mean_diam: f64,
    /// Sample standard deviation of the diameters.
    pub std_diam: f64,
    /// `mean_diam · n / ln n`.
    pub norm_stat: f64,
    pub mean_eps: f64,
    /// Trials dropped for exceeding the enumeration cap or failing to seriate.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RateTable {
    pub rows: Vec<RateRow>,
}

impl RateTable {
    pub const HEADER: &'static str = "n,trials,mean_diam,std_diam,norm_stat,mean_eps";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.n, r.trials, r.mean_diam, r.std_diam, r.norm_stat, r.mean_eps
            ));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv().as_bytes())
    }
}

struct Trial {
    diameter: Option<f64>,
    eps: f64,
}

fn run_trial(n: usize, family: &DissimilarityFamily, seed: u64) -> Result<Trial> {
    let sample = sample_uniform(n, seed)?;
    let eps = max_gap(&sample.points)?;
    let (d, truth) = build_matrix(&sample, family)?;
    let sorted = d.conjugate(&truth)?;
    let diameter = match recursive_seriation(&sorted) {
        Ok(r) => {
            let e = r.enumerate(RATE_ENUMERATION_CAP)?;
            if e.overflow {
                None
            } else {
                Some(solution_diameter(&e.orderings)?)
            }
        }
        Err(Error::NotStrictPreCircularRobinson(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(Trial { diameter, eps })
}

/// For each `n`, the diameter of the solution set of `trials` sampled
/// instances. Every trial draws from its own seed, see [`trial_seed`].
pub fn rate_experiment(
    ns: &[usize],
    trials: usize,
    family: &DissimilarityFamily,
    seed: u64,
) -> Result<RateTable> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(Error::TooSmall(n));
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let results: Vec<Trial> = (0..trials)
            .into_par_iter()
            .map(|t| run_trial(n, family, trial_seed(seed, n, t)))
            .collect::<Result<_>>()?;
        let diams: Vec<f64> = results.iter().filter_map(|t| t.diameter).collect();
        let kept = diams.len();
        let mean = if kept == 0 {
            f64::NAN
        } else {
            diams.iter().sum::<f64>() / kept as f64
        };
        let std = if kept < 2 {
            0.0
        } else {
            (diams.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (kept - 1) as f64).sqrt()
        };
        let mean_eps = results.iter().map(|t| t.eps).sum::<f64>() / trials as f64;
        rows.push(RateRow {
            n,
            trials: kept,
            mean_diam: mean,
            std_diam: std,
            norm_stat: mean * n as f64 / (n as f64).ln(),
            mean_eps,
            skipped: trials - kept,
        });
    }
    Ok(RateTable { rows })
}
