//! Arithmetic-level simulation of a faulty dot-product engine.
//!
//! The engine computes `c = u A` exactly; faults are then injected on the
//! outputs: small L1 drift, bounded-magnitude symbol errors (stuck cells),
//! shorted columns read as erasures, or explicit placements. Every injected
//! value is clamped into the output alphabet `[0, Q)`, and the pre-clamp
//! value is kept in the fault log.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{QMatrix, ReadVector};

/// `c = u A` over the integers, with `u` over the alphabet of `A`.
pub fn compute_clean(u: &[i64], a: &QMatrix) -> Result<Vec<i64>> {
    if let Some(bad) = u.iter().find(|v| !(0..a.q()).contains(*v)) {
        return Err(Error::Param(format!("input entry {bad} outside [0, {})", a.q())));
    }
    a.left_mul(u)
}

/// One fault process.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Fault {
    /// `budget` unit perturbations at random positions with random signs.
    L1Drift { budget: u64 },
    /// `count` distinct positions, each off by a nonzero value in `[-magnitude, magnitude]`.
    SymbolFlip { count: usize, magnitude: i64 },
    /// `count` distinct positions read as unavailable.
    ShortColumn { count: usize },
    /// An explicit change at one position: add `delta`, or erase.
    Manual {
        position: usize,
        #[serde(default)]
        delta: i64,
        #[serde(default)]
        erase: bool,
    },
}

/// A list of faults applied in order with a single seeded generator.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FaultModel {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub faults: Vec<Fault>,
}

impl FaultModel {
    pub fn new(seed: u64, faults: Vec<Fault>) -> Self {
        Self { seed, faults }
    }

    pub fn l1_drift(budget: u64, seed: u64) -> Self {
        Self::new(seed, vec![Fault::L1Drift { budget }])
    }

    pub fn symbol_flip(count: usize, magnitude: i64, seed: u64) -> Self {
        Self::new(seed, vec![Fault::SymbolFlip { count, magnitude }])
    }

    pub fn short_column(count: usize, seed: u64) -> Self {
        Self::new(seed, vec![Fault::ShortColumn { count }])
    }

    /// Explicit `(position, delta)` placements.
    pub fn manual(changes: &[(usize, i64)]) -> Self {
        let faults = changes
            .iter()
            .map(|&(position, delta)| Fault::Manual {
                position,
                delta,
                erase: false,
            })
            .collect();
        Self::new(0, faults)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Drift,
    Flip,
    Erase,
    Manual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultEvent {
    pub kind: EventKind,
    pub position: usize,
    /// Requested change (0 for erasures).
    pub delta: i64,
    /// Value before clamping into `[0, Q)`.
    pub unclamped: i64,
    /// Value after the fault (`None` when erased).
    pub value: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimReport {
    pub clean: Vec<i64>,
    /// `y - c` on available positions, `None` where erased.
    pub error: Vec<Option<i64>>,
    /// The read vector, `None` where erased.
    pub read: Vec<Option<i64>>,
    pub log: Vec<FaultEvent>,
}

impl SimReport {
    pub fn read_vector(&self) -> ReadVector {
        ReadVector::from_options(&self.read)
    }
}

/// Apply `model` to the clean output `c` of an engine with output alphabet `[0, big_q)`.
pub fn inject(c: &[i64], model: &FaultModel, big_q: i64) -> Result<SimReport> {
    let n = c.len();
    if let Some(bad) = c.iter().find(|v| !(0..big_q).contains(*v)) {
        return Err(Error::Param(format!("clean entry {bad} outside [0, {big_q})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let mut y = c.to_vec();
    let mut erased = vec![false; n];
    let mut log = Vec::new();
    let apply = |y: &mut [i64], kind, position: usize, delta: i64, log: &mut Vec<FaultEvent>| {
        let unclamped = y[position] + delta;
        y[position] = unclamped.clamp(0, big_q - 1);
        log.push(FaultEvent {
            kind,
            position,
            delta,
            unclamped,
            value: Some(y[position]),
        });
    };
    for fault in &model.faults {
        match *fault {
            Fault::L1Drift { budget } => {
                if n == 0 && budget > 0 {
                    return Err(Error::Param("cannot drift an empty vector".into()));
                }
                for _ in 0..budget {
                    let j = rng.gen_range(0..n);
                    let mut delta = if rng.gen_bool(0.5) { 1 } else { -1 };
                    // stay inside the alphabet rather than clamp a unit away
                    if !(0..big_q).contains(&(y[j] + delta)) {
                        delta = -delta;
                    }
                    apply(&mut y, EventKind::Drift, j, delta, &mut log);
                }
            }
            Fault::SymbolFlip { count, magnitude } => {
                if magnitude < 1 || magnitude > big_q - 1 {
                    return Err(Error::Param(format!(
                        "magnitude {magnitude} outside [1, {}]",
                        big_q - 1
                    )));
                }
                if count > n {
                    return Err(Error::Param(format!("{count} symbol errors exceed length {n}")));
                }
                for j in sample(&mut rng, n, count).into_vec() {
                    let mut delta = rng.gen_range(-magnitude..magnitude);
                    if delta >= 0 {
                        delta += 1;
                    }
                    apply(&mut y, EventKind::Flip, j, delta, &mut log);
                }
            }
            Fault::ShortColumn { count } => {
                if count > n {
                    return Err(Error::Param(format!("{count} erasures exceed length {n}")));
                }
                for j in sample(&mut rng, n, count).into_vec() {
                    erased[j] = true;
                    log.push(FaultEvent {
                        kind: EventKind::Erase,
                        position: j,
                        delta: 0,
                        unclamped: y[j],
                        value: None,
                    });
                }
            }
            Fault::Manual { position, delta, erase } => {
                if position >= n {
                    return Err(Error::Param(format!("fault position {position} outside length {n}")));
                }
                if erase {
                    erased[position] = true;
                    log.push(FaultEvent {
                        kind: EventKind::Erase,
                        position,
                        delta: 0,
                        unclamped: y[position],
                        value: None,
                    });
                } else {
                    apply(&mut y, EventKind::Manual, position, delta, &mut log);
                }
            }
        }
    }
    let read: Vec<Option<i64>> = y.iter().zip(&erased).map(|(&v, &e)| (!e).then_some(v)).collect();
    let error = read.iter().zip(c).map(|(r, &cv)| r.map(|v| v - cv)).collect();
    Ok(SimReport {
        clean: c.to_vec(),
        error,
        read,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::l1_norm;
    use crate::scheme::Scheme;

    fn example2() -> QMatrix {
        let aprime = QMatrix::from_rows(
            2,
            &[
                vec![1, 0, 1, 1, 0, 1, 0, 0, 1, 0],
                vec![0, 0, 0, 1, 0, 1, 1, 0, 0, 1],
                vec![0, 1, 0, 0, 0, 1, 0, 1, 1, 1],
            ],
        )
        .unwrap();
        crate::single::SingleScheme::sec(2, 3, 15)
            .unwrap()
            .encode(&aprime)
            .unwrap()
    }

    #[test]
    fn clean_product() {
        let a = example2();
        assert_eq!(
            compute_clean(&[1, 1, 1], &a).unwrap(),
            vec![1, 1, 1, 2, 0, 3, 1, 1, 2, 2, 1, 1, 2, 1, 2]
        );
        assert_eq!(compute_clean(&[0, 0, 0], &a).unwrap(), vec![0; 15]);
        assert!(compute_clean(&[2, 0, 0], &a).is_err());
    }

    #[test]
    fn zero_budget_is_identity() {
        let c = vec![1, 0, 3, 2];
        let r = inject(&c, &FaultModel::l1_drift(0, 9), 4).unwrap();
        assert_eq!(r.read, c.iter().map(|&v| Some(v)).collect::<Vec<_>>());
        assert!(r.log.is_empty());
        let r = inject(&c, &FaultModel::default(), 4).unwrap();
        assert!(r.log.is_empty());
    }

    #[test]
    fn manual_reproduces_example() {
        let c = compute_clean(&[1, 1, 1], &example2()).unwrap();
        let r = inject(&c, &FaultModel::manual(&[(5, -1)]), 4).unwrap();
        assert_eq!(r.read[5], Some(2));
        assert_eq!(r.error.iter().flatten().filter(|&&e| e != 0).count(), 1);
    }

    #[test]
    fn drift_respects_budget_and_alphabet() {
        let c = vec![0, 3, 1, 2, 0, 0, 3, 3];
        for seed in 0..200 {
            let r = inject(&c, &FaultModel::l1_drift(3, seed), 4).unwrap();
            let e: Vec<i64> = r.error.iter().map(|e| e.unwrap()).collect();
            assert!(l1_norm(&e) <= 3);
            assert!(r.read.iter().flatten().all(|v| (0..4).contains(v)));
            assert_eq!(r.log.len(), 3);
        }
    }

    #[test]
    fn drift_is_seed_deterministic() {
        let c = compute_clean(&[1, 1, 1], &example2()).unwrap();
        let a = inject(&c, &FaultModel::l1_drift(1, 42), 4).unwrap();
        let b = inject(&c, &FaultModel::l1_drift(1, 42), 4).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.error.iter().flatten().filter(|&&e| e != 0).count(), 1);
    }

    #[test]
    fn symbol_flips_are_bounded() {
        let c = vec![4; 20];
        for seed in 0..100 {
            let r = inject(&c, &FaultModel::symbol_flip(3, 2, seed), 9).unwrap();
            let e: Vec<i64> = r.error.iter().map(|e| e.unwrap()).collect();
            assert_eq!(e.iter().filter(|&&v| v != 0).count(), 3);
            assert!(e.iter().all(|v| v.abs() <= 2));
        }
        assert!(inject(&c, &FaultModel::symbol_flip(21, 2, 0), 9).is_err());
        assert!(inject(&c, &FaultModel::symbol_flip(1, 9, 0), 9).is_err());
    }

    #[test]
    fn flips_are_clamped_and_logged() {
        let r = inject(&[0], &FaultModel::manual(&[(0, -2)]), 3).unwrap();
        assert_eq!(r.read, vec![Some(0)]);
        assert_eq!(r.log[0].unclamped, -2);
    }

    #[test]
    fn short_columns_erase_exactly() {
        let r = inject(&[1; 10], &FaultModel::short_column(2, 5), 4).unwrap();
        assert_eq!(r.read.iter().filter(|v| v.is_none()).count(), 2);
        assert_eq!(r.read_vector().erasure_count(), 2);
        assert!(inject(&[1; 3], &FaultModel::short_column(4, 5), 4).is_err());
    }

    #[test]
    fn fault_model_json() {
        let json = r#"{"seed": 3, "faults": [{"kind": "l1_drift", "budget": 2},
            {"kind": "manual", "position": 5, "delta": -1}, {"kind": "manual", "position": 1, "erase": true}]}"#;
        let m: FaultModel = serde_json::from_str(json).unwrap();
        assert_eq!(m.faults.len(), 3);
        assert_eq!(
            m.faults[2],
            Fault::Manual {
                position: 1,
                delta: 0,
                erase: true
            }
        );
    }
}
