//! Heterogeneous inhabitants, the median voter, and a brute-force Condorcet
//! check of the median-voter shortcut.

use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::policy::{self, DeltaGrid, ModelError, ModelParams};

/// Maximum allowed |mean| of the deviations in a population.
pub const MEAN_TOLERANCE: f64 = 1e-9;

/// Deviations of one inhabitant from the average inhabitant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inhabitant {
    /// Risky earnings above average; positive means subsidized.
    pub theta_j: f64,
    /// Bond holdings above average; negative means monetization-prone.
    pub b_j: f64,
}

impl Inhabitant {
    pub const AVERAGE: Inhabitant = Inhabitant {
        theta_j: 0.0,
        b_j: 0.0,
    };

    pub fn new(theta_j: f64, b_j: f64) -> Self {
        Inhabitant { theta_j, b_j }
    }
}

#[derive(Debug, Error)]
pub enum PopulationError {
    #[error("population is empty")]
    Empty,
    #[error("deviations must average to zero (mean theta_j = {mean_theta:.3e}, mean b_j = {mean_b:.3e}); subtract these means from every row to normalize")]
    NotMeanZero { mean_theta: f64, mean_b: f64 },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("population CSV: {0}")]
    Parse(String),
    #[error("no Condorcet winner on the grid")]
    NoCondorcetWinner,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Population {
    members: Vec<Inhabitant>,
    description: String,
}

impl Population {
    pub fn new(
        members: Vec<Inhabitant>,
        description: impl Into<String>,
    ) -> Result<Self, PopulationError> {
        if members.is_empty() {
            return Err(PopulationError::Empty);
        }
        if members
            .iter()
            .any(|m| !m.theta_j.is_finite() || !m.b_j.is_finite())
        {
            return Err(PopulationError::Parse("non-finite deviation".into()));
        }
        let n = members.len() as f64;
        let mean_theta = members.iter().map(|m| m.theta_j).sum::<f64>() / n;
        let mean_b = members.iter().map(|m| m.b_j).sum::<f64>() / n;
        if mean_theta.abs() > MEAN_TOLERANCE || mean_b.abs() > MEAN_TOLERANCE {
            return Err(PopulationError::NotMeanZero { mean_theta, mean_b });
        }
        Ok(Population {
            members,
            description: description.into(),
        })
    }

    /// Draws `n` inhabitants with deviations uniform on `[-spread, spread]`,
    /// then centers them so both means are zero.
    pub fn random(n: usize, spread: f64, seed: u64) -> Result<Self, PopulationError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(n, spread, &mut rng)
    }

    pub fn random_with(
        n: usize,
        spread: f64,
        rng: &mut impl Rng,
    ) -> Result<Self, PopulationError> {
        if n == 0 {
            return Err(PopulationError::Empty);
        }
        let mut members: Vec<Inhabitant> = (0..n)
            .map(|_| {
                Inhabitant::new(
                    rng.random_range(-spread..=spread),
                    rng.random_range(-spread..=spread),
                )
            })
            .collect();
        let mean_theta = members.iter().map(|m| m.theta_j).sum::<f64>() / n as f64;
        let mean_b = members.iter().map(|m| m.b_j).sum::<f64>() / n as f64;
        for m in &mut members {
            m.theta_j -= mean_theta;
            m.b_j -= mean_b;
        }
        Population::new(
            members,
            format!("uniform deviations on [-{spread}, {spread}], n = {n}"),
        )
    }

    /// Reads a `theta_j,b_j` CSV.
    pub fn from_csv(reader: impl Read, description: &str) -> Result<Self, PopulationError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| PopulationError::Parse(e.to_string()))?
            .clone();
        if headers.iter().collect::<Vec<_>>() != ["theta_j", "b_j"] {
            return Err(PopulationError::Parse(format!(
                "expected header `theta_j,b_j`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut members = Vec::new();
        for row in rdr.deserialize::<Inhabitant>() {
            members.push(row.map_err(|e| PopulationError::Parse(e.to_string()))?);
        }
        Population::new(members, description)
    }

    pub fn load(path: &Path) -> Result<Self, PopulationError> {
        let file = std::fs::File::open(path).map_err(|source| PopulationError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_csv(file, &path.display().to_string())
    }

    pub fn members(&self) -> &[Inhabitant] {
        &self.members
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Lower median of `key` over the members, stable for equal keys.
fn lower_median_by(pop: &Population, key: impl Fn(&Inhabitant) -> f64) -> Inhabitant {
    let mut sorted: Vec<&Inhabitant> = pop.members.iter().collect();
    sorted.sort_by(|a, b| key(a).total_cmp(&key(b)));
    *sorted[(sorted.len() - 1) / 2]
}

/// Member with the median bond-holding deviation (lower median for even
/// sizes).
pub fn median_inhabitant(pop: &Population) -> Inhabitant {
    lower_median_by(pop, |m| m.b_j)
}

/// Member with the median risky-earnings deviation. A positive `theta_j`
/// here means the subsidized inhabitants form a majority.
pub fn median_subsidy_inhabitant(pop: &Population) -> Inhabitant {
    lower_median_by(pop, |m| m.theta_j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PreferenceClass {
    SubsidizedMonetizationProne,
    SubsidizedBondHolder,
    UnsubsidizedMonetizationProne,
    UnsubsidizedBondHolder,
    Average,
}

/// Net attitude toward money-financed transfers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stance {
    Favors,
    Opposes,
    Ambiguous,
    Neutral,
}

impl PreferenceClass {
    pub const ALL: [PreferenceClass; 5] = [
        PreferenceClass::SubsidizedMonetizationProne,
        PreferenceClass::SubsidizedBondHolder,
        PreferenceClass::UnsubsidizedMonetizationProne,
        PreferenceClass::UnsubsidizedBondHolder,
        PreferenceClass::Average,
    ];

    /// Subsidized and monetization-prone inhabitants gain on both counts;
    /// the mixed quadrants have no clear-cut net benefit.
    pub fn stance(self) -> Stance {
        match self {
            PreferenceClass::SubsidizedMonetizationProne => Stance::Favors,
            PreferenceClass::UnsubsidizedBondHolder => Stance::Opposes,
            PreferenceClass::SubsidizedBondHolder
            | PreferenceClass::UnsubsidizedMonetizationProne => Stance::Ambiguous,
            PreferenceClass::Average => Stance::Neutral,
        }
    }

    pub fn is_ambiguous(self) -> bool {
        self.stance() == Stance::Ambiguous
    }
}

impl fmt::Display for PreferenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&format!("{self:?}"))
    }
}

/// Quadrant of `j`: subsidized when `theta_j > 0`, monetization-prone when
/// `b_j < 0`.
pub fn classify(
    j: &Inhabitant,
    beta: f64,
    _params: &ModelParams,
) -> Result<PreferenceClass, ModelError> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(ModelError::Domain(format!(
            "classification needs a transfer share in (0, 1], got {beta}"
        )));
    }
    if j.theta_j == 0.0 && j.b_j == 0.0 {
        return Ok(PreferenceClass::Average);
    }
    let subsidized = j.theta_j > 0.0;
    let prone = j.b_j < 0.0;
    Ok(match (subsidized, prone) {
        (true, true) => PreferenceClass::SubsidizedMonetizationProne,
        (true, false) => PreferenceClass::SubsidizedBondHolder,
        (false, true) => PreferenceClass::UnsubsidizedMonetizationProne,
        (false, false) => PreferenceClass::UnsubsidizedBondHolder,
    })
}

/// Member count per class, in [`PreferenceClass::ALL`] order.
pub fn class_counts(
    pop: &Population,
    beta: f64,
    params: &ModelParams,
) -> Result<Vec<(PreferenceClass, usize)>, ModelError> {
    let mut counts = vec![0usize; PreferenceClass::ALL.len()];
    for m in pop.members() {
        let class = classify(m, beta, params)?;
        let idx = PreferenceClass::ALL.iter().position(|c| *c == class).unwrap();
        counts[idx] += 1;
    }
    Ok(PreferenceClass::ALL.into_iter().zip(counts).collect())
}

/// Finds the `delta` grid point that wins every pairwise majority vote.
///
/// Each inhabitant votes for whichever of two candidates gives them higher
/// welfare, with the tax rate rebalanced for each candidate. Indifferent
/// voters abstain; a tied contest goes to the lower `delta`. Candidates whose
/// budget is infeasible are not on the ballot.
pub fn condorcet_delta(
    pop: &Population,
    beta: f64,
    params: &ModelParams,
    grid_step: f64,
) -> Result<f64, PopulationError> {
    let grid = DeltaGrid::new(grid_step)?;
    let mut candidates = Vec::new();
    // welfare[k][j]: voter j's welfare at candidate k
    let mut welfare = Vec::new();
    for delta in grid.points() {
        let row: Result<Vec<f64>, ModelError> = pop
            .members()
            .iter()
            .map(|j| policy::inhabitant_welfare_budgeted(j, beta, delta, params))
            .collect();
        match row {
            Ok(row) => {
                candidates.push(delta);
                welfare.push(row);
            }
            Err(ModelError::Infeasible { .. }) => {}
            Err(other) => return Err(other.into()),
        }
    }
    if candidates.is_empty() {
        return Err(ModelError::NoFeasiblePolicy.into());
    }
    // candidates are in ascending delta order, so index order breaks ties
    let beats = |a: usize, b: usize| -> bool {
        let (mut for_a, mut for_b) = (0usize, 0usize);
        for (wa, wb) in welfare[a].iter().zip(&welfare[b]) {
            if wa > wb {
                for_a += 1;
            } else if wb > wa {
                for_b += 1;
            }
        }
        for_a > for_b || (for_a == for_b && a < b)
    };
    (0..candidates.len())
        .find(|&a| (0..candidates.len()).all(|b| a == b || beats(a, b)))
        .map(|a| candidates[a])
        .ok_or(PopulationError::NoCondorcetWinner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pop(bs: &[f64]) -> Population {
        let members = bs.iter().map(|&b| Inhabitant::new(0.0, b)).collect();
        Population::new(members, "test").unwrap()
    }

    #[test]
    fn median_of_odd_and_even_populations() {
        let odd = Population::new(
            vec![
                Inhabitant::new(0.1, -0.3),
                Inhabitant::new(-0.2, 0.0),
                Inhabitant::new(0.1, 0.3),
            ],
            "odd",
        )
        .unwrap();
        assert_eq!(median_inhabitant(&odd), Inhabitant::new(-0.2, 0.0));

        let even = pop(&[0.4, -0.3, 0.2, -0.3]);
        // sorted b: -0.3, -0.3, 0.2, 0.4 -> lower median -0.3
        assert_eq!(median_inhabitant(&even).b_j, -0.3);
        let even = Population::new(
            vec![
                Inhabitant::new(0.0, -0.3),
                Inhabitant::new(0.0, -0.1),
                Inhabitant::new(0.0, 0.2),
                Inhabitant::new(0.0, 0.2),
            ],
            "even",
        )
        .unwrap();
        assert_eq!(median_inhabitant(&even).b_j, -0.1);

        let single = pop(&[0.0]);
        assert_eq!(median_inhabitant(&single), Inhabitant::AVERAGE);
    }

    #[test]
    fn lower_median_example() {
        // b = [-0.3, -0.1, 0.2, 0.4] is not mean-zero; shift theta only to test ordering.
        let members = vec![
            Inhabitant::new(0.0, -0.3),
            Inhabitant::new(0.0, -0.1),
            Inhabitant::new(0.0, 0.2),
            Inhabitant::new(0.0, 0.4),
        ];
        let p = Population {
            members,
            description: String::new(),
        };
        assert_eq!(median_inhabitant(&p).b_j, -0.1);
    }

    #[test]
    fn rejects_empty_and_off_center_populations() {
        assert!(matches!(
            Population::new(vec![], "x"),
            Err(PopulationError::Empty)
        ));
        let err = Population::new(vec![Inhabitant::new(0.1, 0.0)], "x").unwrap_err();
        assert!(matches!(err, PopulationError::NotMeanZero { .. }));
        assert!(err.to_string().contains("subtract"));
    }

    #[test]
    fn csv_loading() {
        let ok = "theta_j,b_j\n0.2,-0.25\n0,0\n-0.2,0.25\n";
        let p = Population::from_csv(ok.as_bytes(), "inline").unwrap();
        assert_eq!(p.len(), 3);
        let bad_header = "theta,b\n0,0\n";
        assert!(matches!(
            Population::from_csv(bad_header.as_bytes(), "x"),
            Err(PopulationError::Parse(_))
        ));
        let bad_value = "theta_j,b_j\n0,zero\n";
        assert!(matches!(
            Population::from_csv(bad_value.as_bytes(), "x"),
            Err(PopulationError::Parse(_))
        ));
        let off = "theta_j,b_j\n0.2,0.1\n0,0\n";
        assert!(matches!(
            Population::from_csv(off.as_bytes(), "x"),
            Err(PopulationError::NotMeanZero { .. })
        ));
    }

    #[test]
    fn quadrants() {
        let p = ModelParams::default();
        let c = |t, b| classify(&Inhabitant::new(t, b), 0.5, &p).unwrap();
        assert_eq!(c(0.2, -0.1), PreferenceClass::SubsidizedMonetizationProne);
        assert_eq!(c(0.2, -0.1).stance(), Stance::Favors);
        assert_eq!(c(0.2, 0.3), PreferenceClass::SubsidizedBondHolder);
        assert!(c(0.2, 0.3).is_ambiguous());
        assert_eq!(c(-0.2, -0.3), PreferenceClass::UnsubsidizedMonetizationProne);
        assert_eq!(c(-0.2, 0.3), PreferenceClass::UnsubsidizedBondHolder);
        assert_eq!(c(-0.2, 0.3).stance(), Stance::Opposes);
        assert_eq!(c(0.0, 0.0), PreferenceClass::Average);
        assert_eq!(c(0.0, 0.0).stance(), Stance::Neutral);
        assert!(classify(&Inhabitant::new(0.2, 0.1), 0.0, &p).is_err());
    }

    #[test]
    fn single_voter_wins_with_their_own_peak() {
        let p = ModelParams::default();
        let one = pop(&[0.0]);
        let grid = DeltaGrid::new(0.01).unwrap();
        let peak = policy::preferred_delta_on_grid(&Inhabitant::AVERAGE, 0.2, &p, grid).unwrap();
        assert_eq!(condorcet_delta(&one, 0.2, &p, 0.01).unwrap(), peak);
    }

    #[test]
    fn homogeneous_population_is_unanimous() {
        let p = ModelParams::default();
        let same = pop(&[0.0, 0.0, 0.0, 0.0]);
        let grid = DeltaGrid::new(0.01).unwrap();
        let peak = policy::preferred_delta_on_grid(&Inhabitant::AVERAGE, 0.2, &p, grid).unwrap();
        assert_eq!(condorcet_delta(&same, 0.2, &p, 0.01).unwrap(), peak);
    }

    #[test]
    fn infeasible_transfer_has_no_ballot() {
        let p = ModelParams::default();
        let err = condorcet_delta(&pop(&[0.0]), 0.5, &p, 0.01).unwrap_err();
        assert!(matches!(
            err,
            PopulationError::Model(ModelError::NoFeasiblePolicy)
        ));
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = Population::random(7, 0.1, 42).unwrap();
        let b = Population::random(7, 0.1, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, Population::random(7, 0.1, 43).unwrap());
    }

    proptest! {
        #[test]
        fn classes_ignore_positive_rescaling(t in -1.0..1.0f64, b in -1.0..1.0f64, k in 0.01..100.0f64) {
            let p = ModelParams::default();
            prop_assert_eq!(
                classify(&Inhabitant::new(t, b), 0.3, &p).unwrap(),
                classify(&Inhabitant::new(k * t, k * b), 0.3, &p).unwrap()
            );
        }

        #[test]
        fn median_ignores_member_order(seed in any::<u64>(), n in 1usize..12, rot in 0usize..12) {
            let p = Population::random(n, 0.2, seed).unwrap();
            let mut members = p.members().to_vec();
            members.rotate_left(rot % n);
            members.reverse();
            let shuffled = Population::new(members, "shuffled").unwrap();
            let params = ModelParams::default();
            let a = policy::actual_delta(&median_inhabitant(&p), 0.2, &params).unwrap();
            let b = policy::actual_delta(&median_inhabitant(&shuffled), 0.2, &params).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
