//! Spectra as unions of intervals and points, and their pullback through a
//! rational spectral map.
//!
//! Between consecutive poles the map increases strictly from -∞ to +∞, so
//! each of the `poles + 1` branches inverts any real value. The pullback of a
//! base spectrum is the union of the per-branch inverses; every pole opens a
//! gap, which is how decoration creates spectral gaps in the first place.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::gamma::{DecorationGamma, HerglotzRational};
use crate::Result;

/// Absolute gap below which adjacent intervals (or coincident points) of a
/// pulled-back spectrum merge. Merging never crosses a pole: each branch is
/// handled separately.
pub const MERGE_TOL: f64 = 1e-10;

/// Relative residual target for branch inversion: iterate until
/// `|γ(E) - v| ≤ INVERT_TOL_REL * (1 + |v|)` or the bracket reaches rounding
/// width.
pub const INVERT_TOL_REL: f64 = 1e-12;

/// Relative gap below which nearby eigenvalues collapse into one spectral
/// point with summed multiplicity.
const CLUSTER_TOL_REL: f64 = 1e-9;

/// Multiplicity of a spectral point: a finite eigenvalue count, or one point
/// per decorated copy when the base is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MultiplicityRepr", into = "MultiplicityRepr")]
pub enum Multiplicity {
    Finite(usize),
    Extensive,
}

impl Multiplicity {
    /// Combined multiplicity of two coincident points.
    pub fn combine(self, other: Self) -> Self {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => Self::Finite(a + b),
            _ => Self::Extensive,
        }
    }
}

/// JSON form: a plain count, or the string `"extensive"`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MultiplicityRepr {
    Count(usize),
    Label(String),
}

impl From<Multiplicity> for MultiplicityRepr {
    fn from(m: Multiplicity) -> Self {
        match m {
            Multiplicity::Finite(k) => Self::Count(k),
            Multiplicity::Extensive => Self::Label("extensive".into()),
        }
    }
}

impl TryFrom<MultiplicityRepr> for Multiplicity {
    type Error = String;

    fn try_from(r: MultiplicityRepr) -> std::result::Result<Self, String> {
        match r {
            MultiplicityRepr::Count(k) => Ok(Self::Finite(k)),
            MultiplicityRepr::Label(s) if s == "extensive" => Ok(Self::Extensive),
            MultiplicityRepr::Label(s) => {
                Err(format!("multiplicity must be a count or \"extensive\", got {s:?}"))
            }
        }
    }
}

/// An eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub value: f64,
    pub multiplicity: Multiplicity,
}

/// Number of vertices of the base graph, or infinite for lattice presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseSize {
    Finite(usize),
    Infinite,
}

/// A closed spectrum: a union of closed intervals plus a list of points.
/// Points embedded in (or at the edge of) an interval are kept; they carry
/// multiplicity information the intervals cannot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSet {
    pub intervals: Vec<[f64; 2]>,
    pub points: Vec<SpectralPoint>,
}

impl SpectrumSet {
    /// Validates endpoints and sorts intervals and points in place.
    pub fn new(intervals: Vec<[f64; 2]>, points: Vec<SpectralPoint>) -> Result<Self> {
        for &[a, b] in &intervals {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidSpectrum(format!(
                    "interval [{a}, {b}] has a non-finite endpoint"
                )));
            }
            if a > b {
                return Err(Error::InvalidSpectrum(format!(
                    "interval [{a}, {b}] is reversed"
                )));
            }
        }
        for p in &points {
            if !p.value.is_finite() {
                return Err(Error::InvalidSpectrum(format!(
                    "point {} is not finite",
                    p.value
                )));
            }
            if p.multiplicity == Multiplicity::Finite(0) {
                return Err(Error::InvalidSpectrum(format!(
                    "point {} has multiplicity zero",
                    p.value
                )));
            }
        }
        let mut set = Self { intervals, points };
        set.intervals.sort_by(|x, y| x[0].total_cmp(&y[0]));
        set.points.sort_by(|x, y| x.value.total_cmp(&y.value));
        Ok(set)
    }

    /// Pure point spectrum of a finite operator: sorted eigenvalues clustered
    /// into points with summed multiplicities.
    pub fn from_eigenvalues(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let points = cluster_values(&sorted, CLUSTER_TOL_REL)
            .into_iter()
            .map(|(value, count)| SpectralPoint {
                value,
                multiplicity: Multiplicity::Finite(count),
            })
            .collect();
        Self { intervals: Vec::new(), points }
    }

    /// Whether `e` lies within `tol` of the set.
    pub fn contains(&self, e: f64, tol: f64) -> bool {
        self.intervals.iter().any(|&[a, b]| a - tol <= e && e <= b + tol)
            || self.points.iter().any(|p| (p.value - e).abs() <= tol)
    }
}

/// Groups a sorted slice into runs whose successive gaps stay below
/// `rel_tol * (1 + |value|)`; returns `(mean, count)` per run.
fn cluster_values(sorted: &[f64], rel_tol: f64) -> Vec<(f64, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] - sorted[j - 1] <= rel_tol * (1.0 + sorted[j].abs()) {
            j += 1;
        }
        let mean = sorted[i..j].iter().sum::<f64>() / (j - i) as f64;
        out.push((mean, j - i));
        i = j;
    }
    out
}

/// Interval of branch `k`: `(-∞, ε_0)` for `k = 0`, `(ε_{k-1}, ε_k)` in
/// between, `(ε_{n-1}, +∞)` for `k = n`.
fn branch_bounds(map: &HerglotzRational, branch: usize) -> Result<(Option<f64>, Option<f64>)> {
    let n = map.poles.len();
    if branch > n {
        return Err(Error::InvalidBranch { branch, poles: n });
    }
    let lo = branch.checked_sub(1).map(|i| map.poles[i]);
    let hi = map.poles.get(branch).copied();
    Ok((lo, hi))
}

/// Solves `γ(E) = v` on the given branch. The map increases from -∞ to +∞ on
/// every branch, so the solution exists and is unique; it is bracketed by
/// shrinking insets at pole ends (doubling offsets at unbounded ends) and
/// refined by bisection with Newton steps that stay inside the bracket.
pub fn branch_invert(map: &HerglotzRational, branch: usize, v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::InvalidSpectrum(format!("cannot invert the value {v}")));
    }
    let (lo, hi) = branch_bounds(map, branch)?;
    if map.poles.is_empty() {
        return Ok(v - map.c);
    }

    // lower bracket end: γ(a) < v
    let mut a = match lo {
        Some(p) => {
            let gap = hi.map_or(2.0, |q| q - p);
            let mut delta = gap / 4.0;
            while map.eval_raw(p + delta) >= v && delta > f64::EPSILON * (1.0 + p.abs()) {
                delta /= 2.0;
            }
            p + delta
        }
        None => {
            let p = map.poles[0];
            let mut offset = 1.0;
            while map.eval_raw(p - offset) >= v {
                offset *= 2.0;
            }
            p - offset
        }
    };
    // upper bracket end: γ(b) > v
    let mut b = match hi {
        Some(p) => {
            let gap = lo.map_or(2.0, |q| p - q);
            let mut delta = gap / 4.0;
            while map.eval_raw(p - delta) <= v && delta > f64::EPSILON * (1.0 + p.abs()) {
                delta /= 2.0;
            }
            p - delta
        }
        None => {
            let p = map.poles[map.poles.len() - 1];
            let mut offset = 1.0;
            while map.eval_raw(p + offset) <= v {
                offset *= 2.0;
            }
            p + offset
        }
    };

    let tol = INVERT_TOL_REL * (1.0 + v.abs());
    let mut x = 0.5 * (a + b);
    for _ in 0..300 {
        let f = map.eval_raw(x) - v;
        if f.abs() <= tol {
            break;
        }
        if f < 0.0 {
            a = x;
        } else {
            b = x;
        }
        if b - a <= f64::EPSILON * (1.0 + x.abs()) {
            break;
        }
        let newton = x - f / map.deriv_raw(x);
        x = if newton > a && newton < b { newton } else { 0.5 * (a + b) };
    }
    Ok(x)
}

/// Pullback of a union of intervals: each branch contributes the inverse
/// image of every interval; overlaps and sub-tolerance gaps merge within a
/// branch only, so intervals in different branches stay separated by the
/// pole between them.
pub fn preimage(map: &HerglotzRational, intervals: &[[f64; 2]]) -> Result<Vec<[f64; 2]>> {
    let mut out: Vec<[f64; 2]> = Vec::new();
    for branch in 0..=map.poles.len() {
        let mut pulled: Vec<[f64; 2]> = Vec::with_capacity(intervals.len());
        for &[a, b] in intervals {
            if a > b {
                return Err(Error::InvalidSpectrum(format!(
                    "interval [{a}, {b}] is reversed"
                )));
            }
            pulled.push([branch_invert(map, branch, a)?, branch_invert(map, branch, b)?]);
        }
        pulled.sort_by(|x, y| x[0].total_cmp(&y[0]));
        for iv in pulled {
            if let Some(last) = out.last_mut() {
                if branch_of(map, last[0]) == branch && iv[0] - last[1] <= MERGE_TOL {
                    last[1] = last[1].max(iv[1]);
                    continue;
                }
            }
            out.push(iv);
        }
    }
    out.sort_by(|x, y| x[0].total_cmp(&y[0]));
    Ok(out)
}

/// Branch index containing the energy `e` (counts the poles below it).
fn branch_of(map: &HerglotzRational, e: f64) -> usize {
    map.poles.iter().take_while(|&&p| p < e).count()
}

/// Parses a base-spectrum preset. `zd:<d>` is the hypercubic lattice
/// Laplacian in `d` dimensions: absolutely continuous spectrum `[0, 4d]`,
/// infinitely many decorated copies.
pub fn parse_preset(name: &str) -> Result<(SpectrumSet, BaseSize)> {
    if let Some(d) = name.strip_prefix("zd:") {
        let d: usize = d
            .parse()
            .map_err(|_| Error::UnknownPreset(name.to_string()))?;
        if d == 0 {
            return Err(Error::UnknownPreset(name.to_string()));
        }
        let set = SpectrumSet::new(vec![[0.0, 4.0 * d as f64]], Vec::new())?;
        return Ok((set, BaseSize::Infinite));
    }
    Err(Error::UnknownPreset(name.to_string()))
}

/// Spectrum of the decorated operator: the pullback of the base spectrum
/// through the map, plus the complement spectrum of the decoration operator
/// repeated in every copy. Base points pull back with their multiplicity on
/// every branch; complement eigenvalues of multiplicity `r` contribute
/// `r × |base|` (extensive when the base is infinite). Coincident points
/// merge; points falling inside pulled-back intervals are kept.
pub fn assemble_decorated_spectrum(
    dg: &DecorationGamma,
    base: &SpectrumSet,
    base_size: BaseSize,
) -> Result<SpectrumSet> {
    let intervals = preimage(&dg.map, &base.intervals)?;
    let mut points = Vec::new();
    for pt in &base.points {
        for branch in 0..=dg.map.poles.len() {
            points.push(SpectralPoint {
                value: branch_invert(&dg.map, branch, pt.value)?,
                multiplicity: pt.multiplicity,
            });
        }
    }
    let mut remainder = dg.remainder.clone();
    remainder.sort_by(f64::total_cmp);
    for (value, count) in cluster_values(&remainder, CLUSTER_TOL_REL) {
        let multiplicity = match base_size {
            BaseSize::Finite(n) => Multiplicity::Finite(count * n),
            BaseSize::Infinite => Multiplicity::Extensive,
        };
        points.push(SpectralPoint { value, multiplicity });
    }

    points.sort_by(|x, y| x.value.total_cmp(&y.value));
    let mut merged: Vec<SpectralPoint> = Vec::new();
    for p in points {
        match merged.last_mut() {
            Some(last) if p.value - last.value <= MERGE_TOL => {
                last.multiplicity = last.multiplicity.combine(p.multiplicity);
            }
            _ => merged.push(p),
        }
    }
    SpectrumSet::new(intervals, merged)
}
