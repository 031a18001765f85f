//! Dynamic time warping over complexity-vector time series.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::leading::ComplexityVector;

pub type Feature = [f64; 5];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DtwError {
    #[error("series `{0}` is empty")]
    EmptySeries(String),
    #[error("cost function violates `{axiom}` at {a:?} / {b:?}")]
    CostAxiom {
        axiom: &'static str,
        a: Feature,
        b: Feature,
    },
    #[error("need at least two series, got {0}")]
    TooFewSeries(usize),
}

/// A cost on features: non-negative, zero exactly on equal features, symmetric.
pub trait Cost {
    fn cost(&self, a: &Feature, b: &Feature) -> f64;
}

impl<F: Fn(&Feature, &Feature) -> f64> Cost for F {
    fn cost(&self, a: &Feature, b: &Feature) -> f64 {
        self(a, b)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Euclidean;

impl Cost for Euclidean {
    fn cost(&self, a: &Feature, b: &Feature) -> f64 {
        euclidean_cost(a, b)
    }
}

pub fn euclidean_cost(a: &Feature, b: &Feature) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Spot-checks the three cost axioms on every pair drawn from `samples`.
pub fn check_cost_axioms<C: Cost>(cost: &C, samples: &[Feature]) -> Result<(), DtwError> {
    for a in samples {
        for b in samples {
            let ab = cost.cost(a, b);
            let fail = |axiom| DtwError::CostAxiom { axiom, a: *a, b: *b };
            if ab.is_nan() || ab < 0.0 {
                return Err(fail("non-negativity"));
            }
            if (ab == 0.0) != (a == b) {
                return Err(fail("identity of indiscernibles"));
            }
            if ab != cost.cost(b, a) {
                return Err(fail("symmetry"));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSeries {
    pub title: String,
    pub features: Vec<Feature>,
}

impl FeatureSeries {
    pub fn new(title: impl Into<String>, features: Vec<Feature>) -> Result<Self, DtwError> {
        let title = title.into();
        if features.is_empty() {
            return Err(DtwError::EmptySeries(title));
        }
        Ok(FeatureSeries { title, features })
    }

    pub fn from_vectors(
        title: impl Into<String>,
        vectors: &[ComplexityVector],
    ) -> Result<Self, DtwError> {
        Self::new(title, vectors.iter().map(ComplexityVector::as_features).collect())
    }

    /// Embeds 4-component features by appending a zero component.
    pub fn from_four(title: impl Into<String>, features: &[[f64; 4]]) -> Result<Self, DtwError> {
        Self::new(
            title,
            features
                .iter()
                .map(|f| [f[0], f[1], f[2], f[3], 0.0])
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

/// Row-major `n x m` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Grid {
    fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Grid {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Zero-based access.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }
}

pub fn cost_matrix<C: Cost>(x: &FeatureSeries, y: &FeatureSeries, cost: &C) -> Grid {
    let mut c = Grid::filled(x.len(), y.len(), 0.0);
    for (i, a) in x.features.iter().enumerate() {
        for (j, b) in y.features.iter().enumerate() {
            c.set(i, j, cost.cost(a, b));
        }
    }
    c
}

/// `D(i, j) = C(i, j) + min(D(i-1, j), D(i, j-1), D(i-1, j-1))`, with the
/// first row and column accumulating along their only predecessor.
pub fn cumulative_matrix(costs: &Grid) -> Grid {
    let (n, m) = (costs.rows, costs.cols);
    let mut d = Grid::filled(n, m, 0.0);
    for i in 0..n {
        for j in 0..m {
            let best = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => d.at(0, j - 1),
                (_, 0) => d.at(i - 1, 0),
                _ => d.at(i - 1, j).min(d.at(i, j - 1)).min(d.at(i - 1, j - 1)),
            };
            d.set(i, j, costs.at(i, j) + best);
        }
    }
    d
}

/// One-based index pairs from `(1, 1)` to `(n, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarpingPath(pub Vec<(usize, usize)>);

impl WarpingPath {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks the boundary, monotonicity and step-size conditions for an
    /// `(n, m)` path.
    pub fn is_legal(&self, n: usize, m: usize) -> bool {
        let p = &self.0;
        let in_range = p
            .iter()
            .all(|&(i, j)| (1..=n).contains(&i) && (1..=m).contains(&j));
        let boundary = p.first() == Some(&(1, 1)) && p.last() == Some(&(n, m));
        let monotone = p.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1);
        let steps = p.windows(2).all(|w| {
            matches!(
                (w[1].0.checked_sub(w[0].0), w[1].1.checked_sub(w[0].1)),
                (Some(1), Some(0)) | (Some(0), Some(1)) | (Some(1), Some(1))
            )
        });
        in_range && boundary && monotone && steps
    }

    pub fn total_cost(&self, costs: &Grid) -> f64 {
        self.0.iter().map(|&(i, j)| costs.at(i - 1, j - 1)).sum()
    }
}

/// Walks back from `(n, m)`, preferring the diagonal, then the `(1, 0)`
/// step, then the `(0, 1)` step among equal predecessors.
pub fn backtrack_path(cumulative: &Grid) -> WarpingPath {
    let (mut i, mut j) = (cumulative.rows - 1, cumulative.cols - 1);
    let mut path = vec![(i + 1, j + 1)];
    while (i, j) != (0, 0) {
        (i, j) = match (i, j) {
            (0, _) => (0, j - 1),
            (_, 0) => (i - 1, 0),
            _ => {
                let diag = cumulative.at(i - 1, j - 1);
                let vert = cumulative.at(i - 1, j);
                let horiz = cumulative.at(i, j - 1);
                if diag <= vert && diag <= horiz {
                    (i - 1, j - 1)
                } else if vert <= horiz {
                    (i - 1, j)
                } else {
                    (i, j - 1)
                }
            }
        };
        path.push((i + 1, j + 1));
    }
    path.reverse();
    WarpingPath(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtwResult {
    pub distance: f64,
    /// `distance` divided by the length of the optimal path.
    pub normalised: f64,
    pub path: WarpingPath,
}

pub fn dtw<C: Cost>(x: &FeatureSeries, y: &FeatureSeries, cost: &C) -> Result<DtwResult, DtwError> {
    for s in [x, y] {
        if s.is_empty() {
            return Err(DtwError::EmptySeries(s.title.clone()));
        }
    }
    let costs = cost_matrix(x, y, cost);
    let cumulative = cumulative_matrix(&costs);
    let distance = cumulative.at(x.len() - 1, y.len() - 1);
    let path = backtrack_path(&cumulative);
    Ok(DtwResult {
        distance,
        normalised: distance / path.len() as f64,
        path,
    })
}

/// Pairwise DTW over a corpus; `results[i][j]` compares series `i` and `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub titles: Vec<String>,
    pub results: Vec<Vec<DtwResult>>,
}

impl DistanceMatrix {
    pub fn raw(&self) -> Vec<Vec<f64>> {
        self.map(|r| r.distance)
    }

    pub fn normalised(&self) -> Vec<Vec<f64>> {
        self.map(|r| r.normalised)
    }

    fn map(&self, f: impl Fn(&DtwResult) -> f64) -> Vec<Vec<f64>> {
        self.results
            .iter()
            .map(|row| row.iter().map(&f).collect())
            .collect()
    }

    /// Titles as header row and column, values with two decimals.
    pub fn write_csv<W: std::io::Write>(&self, out: W, normalised: bool) -> csv::Result<()> {
        let values = if normalised { self.normalised() } else { self.raw() };
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![String::new()];
        header.extend(self.titles.iter().cloned());
        w.write_record(&header)?;
        for (title, row) in self.titles.iter().zip(values) {
            let mut record = vec![title.clone()];
            record.extend(row.iter().map(|v| format!("{v:.2}")));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn distance_matrix<C: Cost>(
    corpus: &[FeatureSeries],
    cost: &C,
) -> Result<DistanceMatrix, DtwError> {
    if corpus.len() < 2 {
        return Err(DtwError::TooFewSeries(corpus.len()));
    }
    let n = corpus.len();
    let mut results: Vec<Vec<Option<DtwResult>>> = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i..n {
            let r = dtw(&corpus[i], &corpus[j], cost)?;
            if i != j {
                let mirrored = DtwResult {
                    path: WarpingPath(r.path.0.iter().map(|&(a, b)| (b, a)).collect()),
                    ..r.clone()
                };
                results[j][i] = Some(mirrored);
            }
            results[i][j] = Some(r);
        }
    }
    Ok(DistanceMatrix {
        titles: corpus.iter().map(|s| s.title.clone()).collect(),
        results: results
            .into_iter()
            .map(|row| row.into_iter().map(|r| r.expect("filled")).collect())
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(features: &[Feature]) -> FeatureSeries {
        FeatureSeries::new("s", features.to_vec()).unwrap()
    }

    const ZERO: Feature = [0.0; 5];
    const E1: Feature = [1.0, 0.0, 0.0, 0.0, 0.0];
    const E2: Feature = [0.0, 1.0, 0.0, 0.0, 0.0];

    // Every (n, m)-warping path, by depth-first enumeration.
    fn all_paths(n: usize, m: usize) -> Vec<Vec<(usize, usize)>> {
        fn go(n: usize, m: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
            let (i, j) = *cur.last().unwrap();
            if (i, j) == (n, m) {
                out.push(cur.clone());
                return;
            }
            for (di, dj) in [(1, 0), (0, 1), (1, 1)] {
                if i + di <= n && j + dj <= m {
                    cur.push((i + di, j + dj));
                    go(n, m, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(n, m, &mut vec![(1, 1)], &mut out);
        out
    }

    fn brute_force(x: &FeatureSeries, y: &FeatureSeries) -> f64 {
        all_paths(x.len(), y.len())
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&(i, j)| euclidean_cost(&x.features[i - 1], &y.features[j - 1]))
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn euclidean_examples() {
        assert_eq!(euclidean_cost(&E1, &E1), 0.0);
        assert_eq!(euclidean_cost(&E1, &E2), 2f64.sqrt());
        // (2-1)^2 + (0-1)^2 + (0-1)^2 = 3
        assert_eq!(euclidean_cost(&[2.0, 0.0, 0.0, 0.0, 0.0], &[1.0, 1.0, 0.0, 1.0, 0.0]), 3f64.sqrt());
        check_cost_axioms(&Euclidean, &[ZERO, E1, E2, [2.0, 0.0, 1.0, 1.0, 0.0]]).unwrap();
    }

    #[test]
    fn broken_costs_are_caught() {
        let asym = |a: &Feature, b: &Feature| (a[0] - b[0]).max(0.0) + euclidean_cost(a, b);
        assert!(matches!(
            check_cost_axioms(&asym, &[ZERO, E1]),
            Err(DtwError::CostAxiom { axiom: "symmetry", .. })
        ));
        let zero = |_: &Feature, _: &Feature| 0.0;
        assert!(check_cost_axioms(&zero, &[ZERO, E1]).is_err());
    }

    #[test]
    fn identical_series() {
        let x = series(&[ZERO, E1, E2]);
        let r = dtw(&x, &x, &Euclidean).unwrap();
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.path, WarpingPath(vec![(1, 1), (2, 2), (3, 3)]));
    }

    #[test]
    fn singletons() {
        let r = dtw(&series(&[E1]), &series(&[E2]), &Euclidean).unwrap();
        assert_eq!(r.distance, 2f64.sqrt());
        assert_eq!(r.path, WarpingPath(vec![(1, 1)]));
    }

    #[test]
    fn two_against_one() {
        let x = series(&[ZERO, E1]);
        let y = series(&[ZERO]);
        assert_eq!(all_paths(2, 1), vec![vec![(1, 1), (2, 1)]]);
        assert_eq!(brute_force(&x, &y), 1.0);
        let r = dtw(&x, &y, &Euclidean).unwrap();
        assert_eq!(r.distance, 1.0);
        assert_eq!(r.path, WarpingPath(vec![(1, 1), (2, 1)]));
        assert_eq!(r.normalised, 0.5);
    }

    #[test]
    fn empty_series_rejected() {
        assert!(FeatureSeries::new("e", vec![]).is_err());
        let empty = FeatureSeries {
            title: "e".into(),
            features: vec![],
        };
        assert!(matches!(dtw(&empty, &series(&[E1]), &Euclidean), Err(DtwError::EmptySeries(_))));
    }

    #[test]
    fn four_component_embedding() {
        let s = FeatureSeries::from_four("f", &[[1.0, 2.0, 3.0, 4.0]]).unwrap();
        assert_eq!(s.features[0], [1.0, 2.0, 3.0, 4.0, 0.0]);
    }

    #[test]
    fn path_legality_checks() {
        assert!(WarpingPath(vec![(1, 1), (2, 2)]).is_legal(2, 2));
        assert!(!WarpingPath(vec![(1, 1), (2, 2)]).is_legal(2, 3));
        assert!(!WarpingPath(vec![(1, 1), (3, 3)]).is_legal(3, 3));
        assert!(!WarpingPath(vec![(1, 2), (2, 2)]).is_legal(2, 2));
        assert!(!WarpingPath(vec![(1, 1), (1, 2), (1, 1), (2, 2)]).is_legal(2, 2));
    }

    #[test]
    fn matrix_shape_and_csv() {
        let corpus = vec![
            FeatureSeries::new("a", vec![ZERO, E1]).unwrap(),
            FeatureSeries::new("b", vec![E2]).unwrap(),
            FeatureSeries::new("c", vec![E1, E1, E2]).unwrap(),
        ];
        let dm = distance_matrix(&corpus, &Euclidean).unwrap();
        let raw = dm.raw();
        for i in 0..3 {
            assert_eq!(raw[i][i], 0.0);
            for j in 0..3 {
                assert_eq!(raw[i][j], raw[j][i]);
                assert_eq!(raw[i][j], dtw(&corpus[i], &corpus[j], &Euclidean).unwrap().distance);
                assert!(dm.results[i][j].path.is_legal(corpus[i].len(), corpus[j].len()));
            }
        }
        let mut buf = Vec::new();
        dm.write_csv(&mut buf, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(",a,b,c\na,0.00,"), "{text}");
        assert!(distance_matrix(&corpus[..1], &Euclidean).is_err());
    }

    fn arb_series() -> impl Strategy<Value = FeatureSeries> {
        let pool = vec![ZERO, E1, E2, [1.0, 1.0, 0.0, 1.0, 0.0], [0.0, 0.0, 2.0, 0.0, 0.0], [1.0, 0.0, 1.0, 0.0, 1.0]];
        prop::collection::vec(prop::sample::select(pool), 1..=6).prop_map(|f| series(&f))
    }

    proptest! {
        #[test]
        fn dp_equals_exhaustive_minimum(x in arb_series(), y in arb_series()) {
            let r = dtw(&x, &y, &Euclidean).unwrap();
            prop_assert!((r.distance - brute_force(&x, &y)).abs() < 1e-9);
            prop_assert!(r.path.is_legal(x.len(), y.len()));
            let costs = cost_matrix(&x, &y, &Euclidean);
            prop_assert!((r.path.total_cost(&costs) - r.distance).abs() < 1e-9);
            prop_assert!(r.distance >= 0.0);
            let back = dtw(&y, &x, &Euclidean).unwrap();
            prop_assert!((back.distance - r.distance).abs() < 1e-12);
            prop_assert_eq!(dtw(&x, &x, &Euclidean).unwrap().distance, 0.0);

            // staircase path: down the first column, then along the last row
            let mut stair: Vec<(usize, usize)> = (1..=x.len()).map(|i| (i, 1)).collect();
            stair.extend((2..=y.len()).map(|j| (x.len(), j)));
            let stair = WarpingPath(stair);
            prop_assert!(stair.is_legal(x.len(), y.len()));
            prop_assert!(r.distance <= stair.total_cost(&costs) + 1e-12);
        }
    }
}
