//! Arbiter and pay-off operators of the two-player game in the round-number basis.
//!
//! The raising operator moves `|n>` to `sqrt(n+1) |n+1>`. At the last round
//! `|N>` the boundary mode decides what happens: in the finite game raising
//! annihilates the state, in the periodic game it wraps back to `|0>` with unit
//! coefficient. Pay-off operators are built from the ladder pair as
//! `pi1 = k1 (a+ + a-) / sqrt2` and `pi2 = -i k2 (a+ - a-) / sqrt2`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numerics::{expectation, ComplexScalar, DenseComplexMatrix, ONE, ZERO};

/// Tolerance used for construction-time Hermiticity checks.
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// What the raising operator does to the last round state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    /// `a+ |N> = 0`.
    Finite,
    /// `a+ |N> = |0>`.
    Periodic,
}

impl BoundaryMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryMode::Finite => "finite",
            BoundaryMode::Periodic => "periodic",
        }
    }
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "finite" => Ok(BoundaryMode::Finite),
            "periodic" => Ok(BoundaryMode::Periodic),
            other => Err(invalid(format!("unknown boundary mode `{other}`"))),
        }
    }
}

/// Currency paid to one player per round. Always finite and positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PayoffUnit(f64);

impl PayoffUnit {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(invalid(format!("pay-off unit must be positive and finite, got {value}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn from_index(j: u8) -> Result<Self> {
        match j {
            1 => Ok(Player::One),
            2 => Ok(Player::Two),
            other => Err(invalid(format!("player must be 1 or 2, got {other}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Player::One => 1,
            Player::Two => 2,
        }
    }
}

/// Truncated game space `span{|0>, ..., |N>}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameSpace {
    rounds_max: usize,
    mode: BoundaryMode,
    kappa1: PayoffUnit,
    kappa2: PayoffUnit,
}

impl GameSpace {
    pub fn new(rounds_max: usize, mode: BoundaryMode, kappa1: f64, kappa2: f64) -> Result<Self> {
        if mode == BoundaryMode::Periodic && rounds_max == 0 {
            return Err(invalid("a periodic game needs at least one round (N >= 1)"));
        }
        Ok(Self {
            rounds_max,
            mode,
            kappa1: PayoffUnit::new(kappa1)?,
            kappa2: PayoffUnit::new(kappa2)?,
        })
    }

    /// Unit pay-offs for both players.
    pub fn unit(rounds_max: usize, mode: BoundaryMode) -> Result<Self> {
        Self::new(rounds_max, mode, 1.0, 1.0)
    }

    pub fn rounds_max(&self) -> usize {
        self.rounds_max
    }

    pub fn dim(&self) -> usize {
        self.rounds_max + 1
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn kappa1(&self) -> f64 {
        self.kappa1.get()
    }

    pub fn kappa2(&self) -> f64 {
        self.kappa2.get()
    }

    pub fn kappa(&self, player: Player) -> f64 {
        match player {
            Player::One => self.kappa1(),
            Player::Two => self.kappa2(),
        }
    }

    /// Whether `|n>` sees the full ladder on both sides.
    pub fn is_interior(&self, n: usize) -> bool {
        match self.mode {
            BoundaryMode::Finite => n < self.rounds_max,
            BoundaryMode::Periodic => n >= 1 && n < self.rounds_max,
        }
    }

    fn check_round(&self, n: usize) -> Result<()> {
        if n > self.rounds_max {
            return Err(invalid(format!(
                "round index {n} out of range 0..={}",
                self.rounds_max
            )));
        }
        Ok(())
    }
}

/// Raising and lowering operators `(a+, a-)`.
pub fn build_ladder(gs: &GameSpace) -> (DenseComplexMatrix, DenseComplexMatrix) {
    let dim = gs.dim();
    let mut a_plus = DenseComplexMatrix::zeros(dim).expect("dim >= 1");
    for n in 0..gs.rounds_max() {
        a_plus[(n + 1, n)] = Complex64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    if gs.mode() == BoundaryMode::Periodic {
        a_plus[(0, gs.rounds_max())] = ONE;
    }
    let a_minus = a_plus.adjoint();
    (a_plus, a_minus)
}

/// `N = a+ a-`. Diagonal `(0, 1, .., N)` in the finite game and `(1, 1, 2, .., N)`
/// in the periodic game, where lowering `|0>` lands on `|N>`.
pub fn build_number(gs: &GameSpace) -> DenseComplexMatrix {
    let (ap, am) = build_ladder(gs);
    ap.multiply(&am).expect("equal dims")
}

fn payoffs_from_ladder(
    gs: &GameSpace,
    ap: &DenseComplexMatrix,
    am: &DenseComplexMatrix,
) -> (DenseComplexMatrix, DenseComplexMatrix) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let pi1 = (ap + am).scale(Complex64::new(gs.kappa1() * r, 0.0));
    let pi2 = (ap - am).scale(Complex64::new(0.0, -gs.kappa2() * r));
    (pi1, pi2)
}

/// Pay-off operators `(pi1, pi2)`.
pub fn build_payoffs(gs: &GameSpace) -> (DenseComplexMatrix, DenseComplexMatrix) {
    let (ap, am) = build_ladder(gs);
    payoffs_from_ladder(gs, &ap, &am)
}

/// Pre-correlation `(pi1 pi2 + pi2 pi1) / 2`.
pub fn build_precorrelation(gs: &GameSpace) -> DenseComplexMatrix {
    let (pi1, pi2) = build_payoffs(gs);
    pi1.symmetrized_product(&pi2).expect("equal dims")
}

/// Every operator of one game space.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub gamespace: GameSpace,
    pub a_plus: DenseComplexMatrix,
    pub a_minus: DenseComplexMatrix,
    pub number: DenseComplexMatrix,
    pub pi1: DenseComplexMatrix,
    pub pi2: DenseComplexMatrix,
    pub precorrelation: DenseComplexMatrix,
}

impl OperatorSet {
    pub fn build(gs: &GameSpace) -> Self {
        let (a_plus, a_minus) = build_ladder(gs);
        let number = a_plus.multiply(&a_minus).expect("equal dims");
        let (pi1, pi2) = payoffs_from_ladder(gs, &a_plus, &a_minus);
        let precorrelation = pi1.symmetrized_product(&pi2).expect("equal dims");
        debug_assert!(pi1.is_hermitian(CONSTRUCTION_TOL));
        debug_assert!(pi2.is_hermitian(CONSTRUCTION_TOL));
        debug_assert!(precorrelation.is_hermitian(CONSTRUCTION_TOL));
        Self {
            gamespace: *gs,
            a_plus,
            a_minus,
            number,
            pi1,
            pi2,
            precorrelation,
        }
    }

    pub fn payoff(&self, player: Player) -> &DenseComplexMatrix {
        match player {
            Player::One => &self.pi1,
            Player::Two => &self.pi2,
        }
    }

    /// Named matrices in a fixed order.
    pub fn named(&self) -> [(&'static str, &DenseComplexMatrix); 6] {
        [
            ("a_plus", &self.a_plus),
            ("a_minus", &self.a_minus),
            ("number", &self.number),
            ("pi1", &self.pi1),
            ("pi2", &self.pi2),
            ("precorrelation", &self.precorrelation),
        ]
    }
}

/// Standard basis vector `|n>`.
pub fn number_state(gs: &GameSpace, n: usize) -> Result<Vec<ComplexScalar>> {
    gs.check_round(n)?;
    let mut v = vec![ZERO; gs.dim()];
    v[n] = ONE;
    Ok(v)
}

/// Result of [`payoff_variance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceReport {
    pub n: usize,
    pub player: u8,
    /// `<n| pi_j^2 |n>`.
    pub value: f64,
    /// `(n + 1/2) kappa_j^2`, the untruncated value.
    pub expected: f64,
    pub interior: bool,
}

/// Mean-square pay-off of player `player` in round state `|n>`.
pub fn payoff_variance(gs: &GameSpace, n: usize, player: Player) -> Result<VarianceReport> {
    gs.check_round(n)?;
    let ops = OperatorSet::build(gs);
    let pi = ops.payoff(player);
    let square = pi.multiply(pi)?;
    let value = expectation(&number_state(gs, n)?, &square)?.re;
    let kappa = gs.kappa(player);
    Ok(VarianceReport {
        n,
        player: player.index(),
        value,
        expected: (n as f64 + 0.5) * kappa * kappa,
        interior: gs.is_interior(n),
    })
}

/// Per-entry comparison of `[a-, a+]` against a reference diagonal pattern.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternComparison {
    pub pattern: Vec<f64>,
    /// `|[a-, a+]_{mn} - pattern_{mn}|` on the diagonal.
    pub diagonal_deviation: Vec<f64>,
    /// Largest deviation over all entries, off-diagonal included.
    pub max_deviation: f64,
}

/// Algebraic audit of one game space.
#[derive(Debug, Clone)]
pub struct CommutatorAudit {
    pub gamespace: GameSpace,
    /// `[a-, a+]`.
    pub ladder_commutator: DenseComplexMatrix,
    /// `[pi1, pi2]`.
    pub payoff_commutator: DenseComplexMatrix,
    /// `trace([a-, a+])`, zero for any finite commutator.
    pub ladder_trace: ComplexScalar,
    /// Index range (inclusive) of the interior block, if non-empty.
    pub interior_block: Option<(usize, usize)>,
    /// Max `|[pi1, pi2] - (-i k1 k2 I)|` over the interior block.
    pub interior_deviation: f64,
    /// Phase of the interior canonical relation: `-1` for `-i k1 k2`, `+1` for `+i k1 k2`,
    /// `0` when there is no interior block.
    pub canonical_sign: i8,
    /// `diag(1, .., 1, 1 - N)`: the conventional finite-game pattern.
    pub finite_pattern: PatternComparison,
    /// `diag(0, 1, .., 1, 1 - N)`: the periodic-game pattern.
    pub periodic_pattern: PatternComparison,
    /// `<0| [pi1, pi2] |0>`.
    pub ground_payoff_commutator: ComplexScalar,
}

impl CommutatorAudit {
    /// The reference pattern matching this space's boundary mode.
    pub fn mode_pattern(&self) -> &PatternComparison {
        match self.gamespace.mode() {
            BoundaryMode::Finite => &self.finite_pattern,
            BoundaryMode::Periodic => &self.periodic_pattern,
        }
    }
}

fn compare_pattern(comm: &DenseComplexMatrix, pattern: Vec<f64>) -> PatternComparison {
    let dim = comm.dim();
    let mut diagonal_deviation = Vec::with_capacity(dim);
    let mut max_deviation = 0.0_f64;
    for m in 0..dim {
        for n in 0..dim {
            let target = if m == n { pattern[m] } else { 0.0 };
            let dev = (comm[(m, n)] - target).norm();
            if m == n {
                diagonal_deviation.push(dev);
            }
            max_deviation = max_deviation.max(dev);
        }
    }
    PatternComparison {
        pattern,
        diagonal_deviation,
        max_deviation,
    }
}

pub fn audit_commutators(gs: &GameSpace) -> CommutatorAudit {
    let ops = OperatorSet::build(gs);
    let ladder_commutator = ops.a_minus.commutator(&ops.a_plus).expect("equal dims");
    let payoff_commutator = ops.pi1.commutator(&ops.pi2).expect("equal dims");
    let big_n = gs.rounds_max();
    let dim = gs.dim();

    // finite: [a-, a+] = 1 on 0..N-1; periodic: additionally 0 at |0>
    let interior_block = match gs.mode() {
        BoundaryMode::Finite if big_n >= 2 => Some((0, big_n - 2)),
        BoundaryMode::Periodic if big_n >= 3 => Some((1, big_n - 2)),
        _ => None,
    };
    let k12 = gs.kappa1() * gs.kappa2();
    let canonical = Complex64::new(0.0, -k12);
    let mut interior_deviation = 0.0_f64;
    let mut canonical_sign = 0;
    if let Some((lo, hi)) = interior_block {
        for m in lo..=hi {
            for n in lo..=hi {
                let target = if m == n { canonical } else { ZERO };
                interior_deviation = interior_deviation.max((payoff_commutator[(m, n)] - target).norm());
            }
        }
        canonical_sign = if payoff_commutator[(lo, lo)].im < 0.0 { -1 } else { 1 };
    }

    let finite_pattern: Vec<f64> = (0..dim)
        .map(|k| if k == big_n { 1.0 - big_n as f64 } else { 1.0 })
        .collect();
    let periodic_pattern: Vec<f64> = (0..dim)
        .map(|k| {
            let mut v = 1.0;
            if k == big_n {
                v -= big_n as f64;
            }
            if k == 0 {
                v -= 1.0;
            }
            v
        })
        .collect();

    CommutatorAudit {
        gamespace: *gs,
        ladder_trace: ladder_commutator.trace(),
        finite_pattern: compare_pattern(&ladder_commutator, finite_pattern),
        periodic_pattern: compare_pattern(&ladder_commutator, periodic_pattern),
        ground_payoff_commutator: payoff_commutator[(0, 0)],
        ladder_commutator,
        payoff_commutator,
        interior_block,
        interior_deviation,
        canonical_sign,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        Complex64::new(re, im)
    }

    fn nonzeros(m: &DenseComplexMatrix) -> Vec<((usize, usize), ComplexScalar)> {
        let mut out = Vec::new();
        for r in 0..m.dim() {
            for col in 0..m.dim() {
                if m[(r, col)].norm() > 1e-15 {
                    out.push(((r, col), m[(r, col)]));
                }
            }
        }
        out
    }

    #[test]
    fn ladder_finite_three_states() {
        let gs = GameSpace::unit(2, BoundaryMode::Finite).unwrap();
        let (ap, am) = build_ladder(&gs);
        assert_eq!(
            nonzeros(&ap),
            vec![((1, 0), c(1.0, 0.0)), ((2, 1), c(2f64.sqrt(), 0.0))]
        );
        assert_eq!(am, ap.adjoint());
    }

    #[test]
    fn ladder_periodic_wraps() {
        let gs = GameSpace::unit(2, BoundaryMode::Periodic).unwrap();
        let (ap, _) = build_ladder(&gs);
        assert_eq!(
            nonzeros(&ap),
            vec![((0, 2), c(1.0, 0.0)), ((1, 0), c(1.0, 0.0)), ((2, 1), c(2f64.sqrt(), 0.0))]
        );
    }

    #[test]
    fn single_state_space() {
        let gs = GameSpace::unit(0, BoundaryMode::Finite).unwrap();
        let (ap, _) = build_ladder(&gs);
        assert_eq!(ap.entries(), &[ZERO]);
        assert_eq!(build_number(&gs).entries(), &[ZERO]);
        assert!(GameSpace::unit(0, BoundaryMode::Periodic).is_err());
    }

    #[test]
    fn number_operator_diagonals() {
        let finite = build_number(&GameSpace::unit(3, BoundaryMode::Finite).unwrap());
        let want = DenseComplexMatrix::from_real_rows(&[
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 2.0, 0.0],
            vec![0.0, 0.0, 0.0, 3.0],
        ])
        .unwrap();
        assert!((&finite - &want).max_abs() < 1e-14);
        let periodic = build_number(&GameSpace::unit(2, BoundaryMode::Periodic).unwrap());
        let want = DenseComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ])
        .unwrap();
        assert!((&periodic - &want).max_abs() < 1e-14);
    }

    #[test]
    fn payoffs_two_states() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let (pi1, pi2) = build_payoffs(&GameSpace::unit(1, BoundaryMode::Finite).unwrap());
        assert_eq!(pi1, DenseComplexMatrix::from_real_rows(&[vec![0.0, r], vec![r, 0.0]]).unwrap());
        assert_eq!(
            pi2,
            DenseComplexMatrix::from_rows(&[vec![ZERO, c(0.0, r)], vec![c(0.0, -r), ZERO]]).unwrap()
        );
        let (pi1, _) = build_payoffs(&GameSpace::new(1, BoundaryMode::Finite, 3.0, 1.0).unwrap());
        assert!((pi1[(0, 1)].re - 3.0 * r).abs() < 1e-15);
        assert!((pi1[(1, 0)].re - 3.0 * r).abs() < 1e-15);
    }

    #[test]
    fn payoff_matrix_elements_match_closed_form() {
        let gs = GameSpace::new(6, BoundaryMode::Finite, 1.7, 0.4).unwrap();
        let (pi1, pi2) = build_payoffs(&gs);
        for m in 0..gs.dim() {
            for n in 0..gs.dim() {
                let up = if m == n + 1 { ((n as f64 + 1.0) / 2.0).sqrt() } else { 0.0 };
                let down = if m + 1 == n { (n as f64 / 2.0).sqrt() } else { 0.0 };
                let want1 = c(1.7 * (up + down), 0.0);
                let want2 = c(0.0, -0.4 * (up - down));
                assert!((pi1[(m, n)] - want1).norm() < 1e-14);
                assert!((pi2[(m, n)] - want2).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn precorrelation_small_cases() {
        let pc2 = build_precorrelation(&GameSpace::unit(1, BoundaryMode::Finite).unwrap());
        assert_eq!(pc2.max_abs(), 0.0);

        let pc3 = build_precorrelation(&GameSpace::unit(2, BoundaryMode::Finite).unwrap());
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let nz = nonzeros(&pc3);
        assert_eq!(nz.len(), 2);
        assert_eq!(nz[0].0, (0, 2));
        assert!((nz[0].1 - c(0.0, r)).norm() < 1e-15);
        assert_eq!(nz[1].0, (2, 0));
        assert!((nz[1].1 - c(0.0, -r)).norm() < 1e-15);
        assert!(pc3.row(1).iter().all(|z| *z == ZERO));
        for col in 0..3 {
            assert_eq!(pc3[(col, 1)], ZERO);
        }
    }

    #[test]
    fn precorrelation_is_minus_half_i_ladder_squares() {
        let gs = GameSpace::new(7, BoundaryMode::Finite, 1.3, 2.1).unwrap();
        let (ap, am) = build_ladder(&gs);
        let diff = &ap.multiply(&ap).unwrap() - &am.multiply(&am).unwrap();
        let want = diff.scale(c(0.0, -0.5 * 1.3 * 2.1));
        assert!((&build_precorrelation(&gs) - &want).max_abs() < 1e-13);
    }

    #[test]
    fn audit_finite_interior_canonical() {
        let audit = audit_commutators(&GameSpace::unit(9, BoundaryMode::Finite).unwrap());
        assert_eq!(audit.interior_block, Some((0, 7)));
        assert!(audit.interior_deviation <= 1e-14);
        assert_eq!(audit.canonical_sign, -1);
        assert!(audit.ladder_trace.norm() < 1e-12);
        // the reference finite pattern is off by one in the last entry
        assert!((audit.finite_pattern.max_deviation - 1.0).abs() < 1e-14);
        assert_eq!(audit.finite_pattern.diagonal_deviation[9], 1.0);
    }

    #[test]
    fn audit_periodic_pattern_exact() {
        let audit = audit_commutators(&GameSpace::unit(2, BoundaryMode::Periodic).unwrap());
        let diag: Vec<f64> = audit.ladder_commutator.diagonal().iter().map(|z| z.re).collect();
        for (got, want) in diag.iter().zip([0.0, 1.0, -1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!(audit.periodic_pattern.max_deviation <= 1e-14);
    }

    #[test]
    fn audit_periodic_ground_sector_commutes() {
        let audit = audit_commutators(&GameSpace::unit(4, BoundaryMode::Periodic).unwrap());
        assert!(audit.ground_payoff_commutator.norm() <= 1e-14);
        let finite = audit_commutators(&GameSpace::unit(4, BoundaryMode::Finite).unwrap());
        assert!((finite.ground_payoff_commutator - c(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn variance_interior_and_boundary() {
        let gs = GameSpace::unit(5, BoundaryMode::Finite).unwrap();
        let v = payoff_variance(&gs, 0, Player::One).unwrap();
        assert!((v.value - 0.5).abs() < 1e-15 && v.interior);

        let gs = GameSpace::new(5, BoundaryMode::Finite, 1.0, 2.0).unwrap();
        let v = payoff_variance(&gs, 3, Player::Two).unwrap();
        assert!((v.value - 14.0).abs() < 1e-13);
        assert_eq!(v.expected, 14.0);

        let gs = GameSpace::unit(2, BoundaryMode::Finite).unwrap();
        let v = payoff_variance(&gs, 2, Player::One).unwrap();
        assert!((v.value - 1.0).abs() < 1e-15);
        assert!(!v.interior);

        assert!(payoff_variance(&gs, 3, Player::One).is_err());
    }

    #[test]
    fn number_states() {
        let gs = GameSpace::unit(3, BoundaryMode::Finite).unwrap();
        let e0 = number_state(&gs, 0).unwrap();
        assert_eq!(e0, vec![ONE, ZERO, ZERO, ZERO]);
        let (_, am) = build_ladder(&gs);
        assert!(am.apply(&e0).unwrap().iter().all(|z| *z == ZERO));
        for n in 0..=3 {
            assert_eq!(crate::numerics::vector_norm(&number_state(&gs, n).unwrap()), 1.0);
        }
        assert!(number_state(&gs, 4).is_err());
    }

    #[test]
    fn rejects_bad_units() {
        assert!(GameSpace::new(2, BoundaryMode::Finite, 0.0, 1.0).is_err());
        assert!(GameSpace::new(2, BoundaryMode::Finite, 1.0, f64::NAN).is_err());
        assert!(Player::from_index(3).is_err());
        assert!("loop".parse::<BoundaryMode>().is_err());
    }
}
