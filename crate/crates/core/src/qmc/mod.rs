//! Elementary quasi-Monte Carlo configurations and their separation tables.
//!
//! Two families fill voxels during layout: irrational lattices (equispaced
//! first coordinate, irrational multiples elsewhere) and periodic Riesz
//! minimizers on the flat torus. For each family the mean and minimal
//! nearest-neighbor distance of the periodization is tabulated per point
//! count `n`, and the interpolated inverse `λ` of the mean-separation curve
//! turns a target spacing into a per-voxel count.

mod minimizer;
mod pchip;

pub use minimizer::{
    fold_signed, periodic_riesz_minimizer, sphere_riesz_points, torus_energy, MinimizerResult,
    StepRule, TorusMinimizerParams,
};
pub use pchip::MonotoneCubic;

use crate::error::{Error, Result};
use crate::geom::{dist, Points};
use crate::parallel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Mutex;

/// Q-MC family an elementary configuration is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Family {
    IrrationalLattice,
    TorusMinimizer,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::IrrationalLattice => "il",
            Family::TorusMinimizer => "riesz",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "il" | "lattice" => Ok(Family::IrrationalLattice),
            "riesz" | "minimizer" => Ok(Family::TorusMinimizer),
            other => Err(Error::Config(format!("unknown family '{other}' (expected il|riesz)"))),
        }
    }
}

/// Parameters of the irrational lattice family.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeParams {
    /// The d-1 generators; pairwise distinct and nonzero.
    pub alphas: Vec<f64>,
    /// Offset of the equispaced first coordinate.
    pub c1_offset: f64,
    /// Whether layout applies a random coordinate permutation per voxel.
    pub permute_coordinates: bool,
}

impl LatticeParams {
    /// Golden-ratio derived generators: `α₁ = √2`, `α₂ = (√5−1)/√2` in 3-D,
    /// the golden section itself in 2-D.
    pub fn golden(d: usize) -> Self {
        let alphas = match d {
            2 => vec![(5.0f64.sqrt() - 1.0) / 2.0],
            3 => vec![2.0f64.sqrt(), (5.0f64.sqrt() - 1.0) / 2.0f64.sqrt()],
            _ => {
                // Square roots of successive primes stay linearly independent.
                let primes = [2.0f64, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0];
                primes.iter().take(d - 1).map(|p| p.sqrt().fract()).collect()
            }
        };
        Self { alphas, c1_offset: 0.5, permute_coordinates: true }
    }

    /// The `√3, √5` pair compared against in 3-D.
    pub fn sqrt_3_5() -> Self {
        Self {
            alphas: vec![3.0f64.sqrt(), 5.0f64.sqrt()],
            c1_offset: 0.5,
            permute_coordinates: true,
        }
    }

    /// The full-precision rational pair found by Monte Carlo parameter search.
    pub fn rational_pair() -> Self {
        Self {
            alphas: vec![0.179373654819913, 0.531793804909494],
            c1_offset: 0.5,
            permute_coordinates: true,
        }
    }

    /// A seeded uniform pair from `[0,1]^2`.
    pub fn random_pair(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            alphas: vec![rng.random::<f64>(), rng.random::<f64>()],
            c1_offset: 0.5,
            permute_coordinates: true,
        }
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        if d < 2 {
            return Err(Error::Config(format!("lattice dimension must be >= 2, got {d}")));
        }
        if self.alphas.len() != d - 1 {
            return Err(Error::Config(format!(
                "lattice needs {} generators for dimension {}, got {}",
                d - 1,
                d,
                self.alphas.len()
            )));
        }
        for (i, a) in self.alphas.iter().enumerate() {
            if *a == 0.0 || !a.is_finite() {
                return Err(Error::Config(format!("lattice generator {i} is zero or non-finite")));
            }
            for b in &self.alphas[i + 1..] {
                if a == b {
                    return Err(Error::Config("lattice generators must be pairwise distinct".into()));
                }
            }
        }
        Ok(())
    }
}

/// Fractional part mapped into `[0,1)`.
#[inline]
pub fn fold_unit(x: f64) -> f64 {
    let f = x.fract();
    if f < 0.0 {
        f + 1.0
    } else {
        f
    }
}

/// The n-point irrational lattice: first coordinate `frac(C₁ + i/n)`,
/// coordinate `j+1` equal to `frac(i·α_j)`, for `i = 1..n`.
pub fn irrational_lattice(n: usize, params: &LatticeParams, d: usize) -> Result<Points> {
    params.validate(d)?;
    let mut pts = Points::with_capacity(d, n);
    let mut row = vec![0.0; d];
    for i in 1..=n {
        row[0] = fold_unit(params.c1_offset + i as f64 / n as f64);
        for (j, alpha) in params.alphas.iter().enumerate() {
            row[j + 1] = fold_unit(i as f64 * alpha);
        }
        pts.push(&row);
    }
    Ok(pts)
}

const HALTON_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

/// First `n` points of the Halton sequence (indices 1..=n) with the first
/// `d` primes as bases.
pub fn halton(n: usize, d: usize) -> Result<Points> {
    if d == 0 || d > HALTON_PRIMES.len() {
        return Err(Error::Config(format!("halton dimension must be in 1..=10, got {d}")));
    }
    let mut pts = Points::with_capacity(d, n);
    let mut row = vec![0.0; d];
    for i in 1..=n {
        for (k, &base) in HALTON_PRIMES[..d].iter().enumerate() {
            row[k] = radical_inverse(i as u64, base);
        }
        pts.push(&row);
    }
    Ok(pts)
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let b = base as f64;
    while i > 0 {
        f /= b;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Distance on the unit torus: per coordinate `Π(x) = min(x², (1−x)²)` of
/// the difference reduced mod 1, summed and square-rooted.
pub fn periodic_distance(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut s = 0.0;
    for k in 0..x.len() {
        let d = fold_signed(x[k] - y[k]);
        s += d * d;
    }
    s.sqrt()
}

/// Tabulated `n ↦ (mean, min)` periodized separation for one family, plus
/// the interpolated inverse `λ`.
#[derive(Debug, Clone)]
pub struct SeparationTable {
    family: Family,
    mean: Vec<f64>,
    min: Vec<f64>,
    reg_mean: Vec<f64>,
    inverse: MonotoneCubic,
}

impl SeparationTable {
    /// Builds the table from raw `(mean, min)` entries for `n = 1..=n_max`.
    ///
    /// Mean separations are regularized to a strictly decreasing sequence
    /// (running minimum, then an epsilon nudge on plateaus) before the
    /// monotone cubic inverse is fitted.
    pub fn from_entries(family: Family, entries: Vec<(f64, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Config("separation table needs at least one entry".into()));
        }
        for (n0, (mean, min)) in entries.iter().enumerate() {
            if !(*min > 0.0 && *mean >= *min && *mean <= 1.0 + 1e-12) {
                return Err(Error::Config(format!(
                    "separation entry n={} out of range: mean={mean}, min={min}",
                    n0 + 1
                )));
            }
        }
        let mean: Vec<f64> = entries.iter().map(|e| e.0).collect();
        let min: Vec<f64> = entries.iter().map(|e| e.1).collect();

        let mut reg_mean = mean.clone();
        for i in 1..reg_mean.len() {
            if reg_mean[i] >= reg_mean[i - 1] {
                reg_mean[i] = reg_mean[i - 1] * (1.0 - 1e-12);
            }
        }

        // Inverse knots run from the smallest mean (largest n) upward.
        let inverse = if reg_mean.len() == 1 {
            MonotoneCubic::new(vec![reg_mean[0] * (1.0 - 1e-9), reg_mean[0]], vec![1.0, 1.0])?
        } else {
            let x: Vec<f64> = reg_mean.iter().rev().copied().collect();
            let y: Vec<f64> = (1..=reg_mean.len()).rev().map(|n| n as f64).collect();
            MonotoneCubic::new(x, y)?
        };

        Ok(Self { family, mean, min, reg_mean, inverse })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n_max(&self) -> usize {
        self.mean.len()
    }

    /// Raw tabulated mean separation for `n` in `1..=n_max`.
    pub fn mean_sep(&self, n: usize) -> f64 {
        self.mean[n - 1]
    }

    pub fn min_sep(&self, n: usize) -> f64 {
        self.min[n - 1]
    }

    /// Mean separation after monotone regularization; these are the knots
    /// `λ` inverts exactly.
    pub fn regularized_mean(&self, n: usize) -> f64 {
        self.reg_mean[n - 1]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        (1..=self.n_max()).map(|n| (n, self.mean[n - 1], self.min[n - 1]))
    }

    /// The interpolated inverse of the mean separation: how many nodes fit a
    /// unit cube so their periodized mean spacing is closest to `r`.
    ///
    /// Periodicity caps separations at 1, so `λ(r) = 0` for `r > 1`; values
    /// below the table range clamp to `n_max`.
    pub fn lambda(&self, r: f64) -> Result<usize> {
        if r.is_nan() {
            return Err(Error::Input("lambda argument is NaN".into()));
        }
        if r <= 0.0 {
            return Err(Error::Domain(format!("lambda argument must be positive, got {r}")));
        }
        if r > 1.0 {
            return Ok(0);
        }
        let v = self.inverse.eval(r).round();
        Ok((v.max(0.0) as usize).min(self.n_max()))
    }
}

/// Tabulation input: which generator the family uses.
#[derive(Debug, Clone)]
pub enum FamilyParams {
    IrrationalLattice(LatticeParams),
    TorusMinimizer(TorusMinimizerParams),
}

/// Tabulates the periodized mean/min nearest-neighbor distances for
/// `n = 1..=n_max`.
///
/// Irrational lattices are periodized explicitly: the sample configuration is
/// `𝓛ₙ` together with its `3^d − 1` integer translates, and nearest-neighbor
/// distances are measured for the central copy only. Torus minimizers use the
/// wraparound metric directly, which already encodes the periodicity.
pub fn tabulate_separation(
    family: Family,
    n_max: usize,
    params: &FamilyParams,
    d: usize,
    bank: Option<&MinimizerBank>,
) -> Result<SeparationTable> {
    if n_max == 0 {
        return Err(Error::Config("n_max must be at least 1".into()));
    }
    let entries: Vec<Result<(f64, f64)>> = match (family, params) {
        (Family::IrrationalLattice, FamilyParams::IrrationalLattice(lp)) => {
            lp.validate(d)?;
            parallel::map_indexed(n_max, |i| {
                let pts = irrational_lattice(i + 1, lp, d)?;
                Ok(periodized_separation(&pts, d))
            })
        }
        (Family::TorusMinimizer, FamilyParams::TorusMinimizer(mp)) => {
            let owned;
            let bank = match bank {
                Some(b) => b,
                None => {
                    owned = MinimizerBank::new(None, mp.clone(), d);
                    &owned
                }
            };
            parallel::map_indexed(n_max, |i| {
                let n = i + 1;
                if n == 1 {
                    // Only the periodic images remain, at integer offsets.
                    return Ok((1.0, 1.0));
                }
                let pts = bank.get(n)?;
                Ok(torus_separation(&pts))
            })
        }
        _ => {
            return Err(Error::Config("family and params disagree".into()));
        }
    };
    let entries: Result<Vec<(f64, f64)>> = entries.into_iter().collect();
    SeparationTable::from_entries(family, entries?)
}

/// Mean/min nearest-neighbor distance of `pts` within the union of itself and
/// its integer translates, measured for the central copy's points.
fn periodized_separation(pts: &Points, d: usize) -> (f64, f64) {
    let n = pts.len();
    let shifts = integer_shifts(d);
    let mut union = Points::with_capacity(d, n * shifts.len());
    let mut shifted = vec![0.0; d];
    for shift in &shifts {
        for p in pts.iter() {
            for k in 0..d {
                shifted[k] = p[k] + shift[k];
            }
            union.push(&shifted);
        }
    }
    // The central copy occupies the first n slots (the zero shift is first).
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    for i in 0..n {
        let mut best = f64::INFINITY;
        for j in 0..union.len() {
            if j == i {
                continue;
            }
            let dij = dist(union.get(i), union.get(j));
            if dij < best {
                best = dij;
            }
        }
        sum += best;
        min = min.min(best);
    }
    (sum / n as f64, min)
}

fn integer_shifts(d: usize) -> Vec<Vec<f64>> {
    let mut shifts = vec![vec![0.0; d]];
    for k in 0..d {
        let mut next = Vec::with_capacity(shifts.len() * 3);
        for s in &shifts {
            for off in [0.0, -1.0, 1.0] {
                let mut v = s.clone();
                v[k] = off;
                next.push(v);
            }
        }
        shifts = next;
    }
    // Keep the zero shift first so central-copy indices are stable.
    shifts.sort_by(|a, b| {
        let za = a.iter().all(|&v| v == 0.0);
        let zb = b.iter().all(|&v| v == 0.0);
        zb.cmp(&za)
    });
    shifts
}

fn torus_separation(pts: &Points) -> (f64, f64) {
    let n = pts.len();
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    for i in 0..n {
        let mut best = f64::INFINITY;
        for j in 0..n {
            if j == i {
                continue;
            }
            best = best.min(periodic_distance(pts.get(i), pts.get(j)));
        }
        sum += best;
        min = min.min(best);
    }
    (sum / n as f64, min)
}

/// Source of torus minimizer point sets: fixture files when a directory is
/// configured and holds the requested `n`, freshly generated otherwise.
/// Generated sets are cached per `n` for the lifetime of the bank.
pub struct MinimizerBank {
    dir: Option<PathBuf>,
    params: TorusMinimizerParams,
    dim: usize,
    cache: Mutex<HashMap<usize, Points>>,
}

impl MinimizerBank {
    pub fn new(dir: Option<PathBuf>, params: TorusMinimizerParams, dim: usize) -> Self {
        Self { dir, params, dim, cache: Mutex::new(HashMap::new()) }
    }

    /// Fixture layout: `<dir>/d{d}_s{s}/n{N}.nods`.
    pub fn fixture_path(&self, n: usize) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| {
            d.join(format!("d{}_s{}", self.dim, self.params.s_exponent as i64))
                .join(format!("n{n}.nods"))
        })
    }

    pub fn params(&self) -> &TorusMinimizerParams {
        &self.params
    }

    pub fn get(&self, n: usize) -> Result<Points> {
        if let Some(pts) = self.cache.lock().unwrap().get(&n) {
            return Ok(pts.clone());
        }
        let pts = match self.fixture_path(n) {
            Some(path) if path.is_file() => {
                let set = crate::io::read_nodes_binary(&path)?;
                if set.positions().dim() != self.dim || set.len() != n {
                    return Err(Error::Config(format!(
                        "fixture {} holds {} points in dim {}, expected {} in dim {}",
                        path.display(),
                        set.len(),
                        set.positions().dim(),
                        n,
                        self.dim
                    )));
                }
                set.into_positions()
            }
            _ => periodic_riesz_minimizer(n, &self.params, self.dim)?.points,
        };
        self.cache.lock().unwrap().insert(n, pts.clone());
        Ok(pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lattice_matches_direct_substitution() {
        // n=2 with the golden-ratio generators.
        let params = LatticeParams::golden(3);
        let pts = irrational_lattice(2, &params, 3).unwrap();
        assert_eq!(pts.len(), 2);
        assert_relative_eq!(pts.get(0)[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(pts.get(0)[1], 0.41421356237309515, epsilon = 1e-9);
        assert_relative_eq!(pts.get(0)[2], 0.8740320488976422, epsilon = 1e-7);
        assert_relative_eq!(pts.get(1)[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(pts.get(1)[1], 0.8284271247461903, epsilon = 1e-9);
        assert_relative_eq!(pts.get(1)[2], 0.7480640977952844, epsilon = 1e-7);
    }

    #[test]
    fn lattice_first_coordinates_are_equispaced() {
        let params = LatticeParams::golden(3);
        for n in [3usize, 17, 64] {
            let pts = irrational_lattice(n, &params, 3).unwrap();
            let mut firsts: Vec<f64> = pts.iter().map(|p| p[0]).collect();
            firsts.sort_by(f64::total_cmp);
            for w in firsts.windows(2) {
                assert_relative_eq!(w[1] - w[0], 1.0 / n as f64, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn lattice_points_pairwise_distinct() {
        let params = LatticeParams::golden(3);
        for n in [1usize, 2, 50, 200] {
            let pts = irrational_lattice(n, &params, 3).unwrap();
            for i in 0..n {
                for j in (i + 1)..n {
                    assert!(dist(pts.get(i), pts.get(j)) > 0.0, "duplicate at n={n}: {i},{j}");
                }
            }
        }
    }

    #[test]
    fn lattice_empty_and_bad_dim() {
        let params = LatticeParams::golden(3);
        assert_eq!(irrational_lattice(0, &params, 3).unwrap().len(), 0);
        assert!(irrational_lattice(3, &LatticeParams::golden(2), 1).is_err());
    }

    #[test]
    fn halton_first_points() {
        let pts = halton(3, 2).unwrap();
        let expected = [[0.5, 1.0 / 3.0], [0.25, 2.0 / 3.0], [0.75, 1.0 / 9.0]];
        for (p, e) in pts.iter().zip(expected.iter()) {
            assert_relative_eq!(p[0], e[0], epsilon = 1e-15);
            assert_relative_eq!(p[1], e[1], epsilon = 1e-15);
        }
        for p in halton(1000, 3).unwrap().iter() {
            assert!(p.iter().all(|&c| c > 0.0 && c < 1.0));
        }
        assert!(halton(5, 11).is_err());
    }

    #[test]
    fn periodic_distance_wraps() {
        assert_relative_eq!(periodic_distance(&[0.1, 0.0, 0.0], &[0.9, 0.0, 0.0]), 0.2, epsilon = 1e-15);
        assert_eq!(periodic_distance(&[0.3, 0.4, 0.5], &[0.3, 0.4, 0.5]), 0.0);
        // Maximum possible in d=3: all coordinates half a period apart.
        assert_relative_eq!(
            periodic_distance(&[0.0, 0.0, 0.0], &[0.5, 0.5, 0.5]),
            0.75f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn il_table_n1_is_unity_and_entries_bounded() {
        let params = FamilyParams::IrrationalLattice(LatticeParams::golden(3));
        let table = tabulate_separation(Family::IrrationalLattice, 30, &params, 3, None).unwrap();
        assert_relative_eq!(table.mean_sep(1), 1.0, epsilon = 1e-12);
        assert_relative_eq!(table.min_sep(1), 1.0, epsilon = 1e-12);
        for (_, mean, min) in table.entries() {
            assert!(min <= mean && mean <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn lambda_identity_on_knots_and_footnote_rule() {
        let params = FamilyParams::IrrationalLattice(LatticeParams::golden(3));
        let table = tabulate_separation(Family::IrrationalLattice, 60, &params, 3, None).unwrap();
        assert_eq!(table.lambda(1.5).unwrap(), 0);
        for n in 1..=60 {
            assert_eq!(table.lambda(table.regularized_mean(n)).unwrap(), n, "knot n={n}");
        }
        assert!(table.lambda(-0.1).is_err());
        assert!(table.lambda(0.0).is_err());
        // Tiny r clamps to n_max.
        assert_eq!(table.lambda(1e-9).unwrap(), 60);
    }

    #[test]
    fn lambda_monotone_and_bracketing() {
        let params = FamilyParams::IrrationalLattice(LatticeParams::golden(3));
        let table = tabulate_separation(Family::IrrationalLattice, 50, &params, 3, None).unwrap();
        let mut prev = usize::MAX;
        for i in 0..1000 {
            let r = 1e-3 + 1.2 * i as f64 / 999.0;
            let v = table.lambda(r).unwrap();
            assert!(v <= prev, "lambda not non-increasing at r={r}");
            prev = v;
        }
        // Strictly between consecutive knots the value brackets to {n, n+1}.
        for n in 5..45 {
            let a = table.regularized_mean(n + 1);
            let b = table.regularized_mean(n);
            let mid = 0.5 * (a + b);
            let v = table.lambda(mid).unwrap();
            assert!(v == n || v == n + 1, "between knots {n},{} got {v}", n + 1);
        }
    }

    #[test]
    fn periodic_distance_is_a_metric_sampled() {
        use proptest::prelude::*;
        let mut runner = proptest::test_runner::TestRunner::deterministic();
        let strat = proptest::collection::vec(0.0f64..1.0, 9);
        runner
            .run(&strat, |v| {
                let (x, y, z) = (&v[0..3], &v[3..6], &v[6..9]);
                let dxy = periodic_distance(x, y);
                let dyx = periodic_distance(y, x);
                prop_assert!((dxy - dyx).abs() < 1e-15);
                let dxz = periodic_distance(x, z);
                let dzy = periodic_distance(z, y);
                prop_assert!(dxy <= dxz + dzy + 1e-12);
                Ok(())
            })
            .unwrap();
    }
}
