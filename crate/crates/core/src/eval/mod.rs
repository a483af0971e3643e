//! Recall/precision evaluation of predicted read pairs against a simulated
//! ground truth.

mod sim;

pub use sim::{mutate, simulate, ErrorMix, SimConfig, SimRead, Simulation};

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::{Error, Result};

/// Unordered read pair stored as `(min, max)`.
pub type Pair = (u32, u32);

#[inline]
pub fn normalize(a: u32, b: u32) -> Pair {
    (a.min(b), a.max(b))
}

/// Set of unordered, non-self read pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundTruth {
    pairs: BTreeSet<Pair>,
}

impl GroundTruth {
    /// Self pairs are ignored. Returns whether the pair was new.
    pub fn insert(&mut self, a: u32, b: u32) -> bool {
        a != b && self.pairs.insert(normalize(a, b))
    }

    pub fn contains(&self, a: u32, b: u32) -> bool {
        self.pairs.contains(&normalize(a, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &BTreeSet<Pair> {
        &self.pairs
    }

    pub fn write_to<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        for &(a, b) in &self.pairs {
            writeln!(w, "{a}\t{b}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(|e| Error::file(path, e))?;
        let mut w = BufWriter::new(f);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut truth = GroundTruth::default();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let parse = |f: Option<&str>| -> Result<u32> {
                f.and_then(|s| s.trim().parse().ok()).ok_or_else(|| Error::Parse {
                    line: i + 1,
                    message: format!("expected 'a<TAB>b', found {line:?}"),
                })
            };
            let (a, b) = (parse(fields.next())?, parse(fields.next())?);
            if a == b {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("self pair {a}"),
                });
            }
            truth.insert(a, b);
        }
        Ok(truth)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::file(path, e))?;
        Self::read_from(BufReader::new(f))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scores {
    pub recall: f64,
    pub precision: f64,
    pub f_measure: f64,
    pub true_positives: usize,
    pub predicted: usize,
    pub expected: usize,
}

/// Scores predicted pairs (already normalized) against `truth`.
///
/// An empty prediction has precision 1 and recall 0; an empty truth is an error.
pub fn score(predicted: &BTreeSet<Pair>, truth: &GroundTruth) -> Result<Scores> {
    if truth.is_empty() {
        return Err(Error::Config("ground truth holds no pairs".into()));
    }
    if let Some(&(a, _)) = predicted.iter().find(|(a, b)| a == b) {
        return Err(Error::param(format!("predicted self pair ({a}, {a})")));
    }
    let tp = predicted.iter().filter(|p| truth.pairs.contains(p)).count();
    let recall = tp as f64 / truth.len() as f64;
    let precision = if predicted.is_empty() {
        1.0
    } else {
        tp as f64 / predicted.len() as f64
    };
    let f_measure = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(Scores {
        recall,
        precision,
        f_measure,
        true_positives: tp,
        predicted: predicted.len(),
        expected: truth.len(),
    })
}

/// Reads linker output (`q:t-s[@w] ...`) into normalized, deduplicated pairs.
/// Scores and windows are dropped; self pairs are skipped.
pub fn parse_linker_output<R: BufRead>(r: R) -> Result<BTreeSet<Pair>> {
    let mut pairs = BTreeSet::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            line: i + 1,
            message: format!("{msg}: {line:?}"),
        };
        let (q, rest) = line.split_once(':').ok_or_else(|| err("missing ':'"))?;
        let q: u32 = q.trim().parse().map_err(|_| err("bad query id"))?;
        for item in rest.split_whitespace() {
            let (t, _) = item.split_once('-').ok_or_else(|| err("missing '-'"))?;
            let t: u32 = t.parse().map_err(|_| err("bad target id"))?;
            if t != q {
                pairs.insert(normalize(q, t));
            }
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn truth_of(pairs: &[(u32, u32)]) -> GroundTruth {
        let mut t = GroundTruth::default();
        for &(a, b) in pairs {
            t.insert(a, b);
        }
        t
    }

    #[test]
    fn perfect_prediction() {
        let truth = truth_of(&[(0, 1), (2, 3), (4, 5), (1, 6)]);
        let s = score(truth.pairs(), &truth).unwrap();
        assert_eq!((s.recall, s.precision, s.f_measure), (1.0, 1.0, 1.0));
    }

    #[test]
    fn half_prediction() {
        let truth = truth_of(&[(0, 1), (2, 3), (4, 5), (1, 6)]);
        let pred: BTreeSet<Pair> = [(0, 1), (2, 3)].into_iter().collect();
        let s = score(&pred, &truth).unwrap();
        assert_eq!(s.recall, 0.5);
        assert_eq!(s.precision, 1.0);
        assert!((s.f_measure - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cases() {
        let truth = truth_of(&[(0, 1)]);
        let s = score(&BTreeSet::new(), &truth).unwrap();
        assert_eq!((s.recall, s.precision, s.f_measure), (0.0, 1.0, 0.0));
        assert!(score(&BTreeSet::new(), &GroundTruth::default()).is_err());
        let wrong: BTreeSet<Pair> = [(5, 7)].into_iter().collect();
        let s = score(&wrong, &truth).unwrap();
        assert_eq!((s.recall, s.precision, s.f_measure), (0.0, 0.0, 0.0));
    }

    #[test]
    fn truth_ignores_orientation_and_self() {
        let mut t = GroundTruth::default();
        assert!(t.insert(3, 1));
        assert!(!t.insert(1, 3));
        assert!(!t.insert(2, 2));
        assert!(t.contains(1, 3) && t.contains(3, 1));
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(buf, b"1\t3\n");
        assert_eq!(GroundTruth::read_from(buf.as_slice()).unwrap(), t);
        assert!(GroundTruth::read_from("1\tx\n".as_bytes()).is_err());
    }

    #[test]
    fn linker_adapter() {
        let text = "0:1-40@3 2-12@0\n1:0-40\n2:\n3:3-9 0-11\n";
        let pairs = parse_linker_output(text.as_bytes()).unwrap();
        let want: BTreeSet<Pair> = [(0, 1), (0, 2), (0, 3)].into_iter().collect();
        assert_eq!(pairs, want);
        assert!(parse_linker_output("x:1-2\n".as_bytes()).is_err());
        assert!(parse_linker_output("0 1-2\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn harmonic_mean_and_orientation(
            truth_pairs in proptest::collection::vec((0u32..50, 0u32..50), 1..80),
            pred_pairs in proptest::collection::vec((0u32..50, 0u32..50), 0..80),
        ) {
            let truth = truth_of(&truth_pairs);
            prop_assume!(!truth.is_empty());
            let pred: BTreeSet<Pair> = pred_pairs.iter().filter(|(a, b)| a != b).map(|&(a, b)| normalize(a, b)).collect();
            let flipped: BTreeSet<Pair> = pred_pairs.iter().filter(|(a, b)| a != b).map(|&(a, b)| normalize(b, a)).collect();
            let s = score(&pred, &truth).unwrap();
            prop_assert_eq!(s, score(&flipped, &truth).unwrap());
            if s.precision + s.recall > 0.0 {
                let h = 2.0 / (1.0 / s.precision + 1.0 / s.recall);
                if s.precision > 0.0 && s.recall > 0.0 {
                    prop_assert!((s.f_measure - h).abs() < 1e-9);
                }
            }
        }
    }
}
