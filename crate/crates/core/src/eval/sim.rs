//! Spot-based long-read simulation.
//!
//! A random genome is drawn, `n_spots` disjoint loci of one read length are
//! placed on it with a minimum gap between them, and every spot yields
//! `reads_per_spot` noisy copies taken from a random strand. Two reads are
//! similar exactly when they come from the same spot.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::GroundTruth;
use crate::kmer::revcomp_seq;
use crate::{Error, Result};

const ACGT: [u8; 4] = *b"ACGT";

/// Relative weights of the three error kinds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorMix {
    pub substitution: f64,
    pub insertion: f64,
    pub deletion: f64,
}

impl ErrorMix {
    pub const UNIFORM: ErrorMix = ErrorMix {
        substitution: 1.0,
        insertion: 1.0,
        deletion: 1.0,
    };

    pub const SUBSTITUTIONS_ONLY: ErrorMix = ErrorMix {
        substitution: 1.0,
        insertion: 0.0,
        deletion: 0.0,
    };
}

impl Default for ErrorMix {
    fn default() -> Self {
        ErrorMix::UNIFORM
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub genome_length: usize,
    pub n_spots: usize,
    pub read_length: usize,
    pub reads_per_spot: usize,
    pub error_rate: f64,
    pub error_mix: ErrorMix,
    pub spot_min_gap: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            genome_length: 10_000_000,
            n_spots: 20,
            read_length: 2000,
            reads_per_spot: 50,
            error_rate: 0.12,
            error_mix: ErrorMix::UNIFORM,
            spot_min_gap: 500,
            seed: 1,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let need = self
            .n_spots
            .checked_mul(self.read_length + self.spot_min_gap)
            .ok_or_else(|| Error::Config("spot layout overflows".into()))?;
        if need > self.genome_length {
            return Err(Error::Config(format!(
                "{} spots of {} bases with gap {} need {need} bases, genome has {}",
                self.n_spots, self.read_length, self.spot_min_gap, self.genome_length
            )));
        }
        if self.read_length == 0 {
            return Err(Error::Config("read length must be positive".into()));
        }
        if !(0.0..0.5).contains(&self.error_rate) {
            return Err(Error::Config(format!(
                "error rate {} not in [0, 0.5)",
                self.error_rate
            )));
        }
        let m = self.error_mix;
        let weights = [m.substitution, m.insertion, m.deletion];
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) || weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::Config("error mix weights must be non-negative with a positive sum".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimRead {
    pub header: String,
    pub seq: Vec<u8>,
    pub spot: usize,
    /// Start of the spot on the genome.
    pub origin: usize,
    pub reverse: bool,
}

#[derive(Clone, Debug)]
pub struct Simulation {
    pub reads: Vec<SimRead>,
    pub truth: GroundTruth,
    /// Start of each spot on the genome, ascending.
    pub spots: Vec<usize>,
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Applies i.i.d. errors at `rate` to `source`.
pub fn mutate<R: Rng>(source: &[u8], rate: f64, mix: ErrorMix, rng: &mut R) -> Vec<u8> {
    let total = mix.substitution + mix.insertion + mix.deletion;
    let p_sub = mix.substitution / total;
    let p_ins = mix.insertion / total;
    let mut out = Vec::with_capacity(source.len() + source.len() / 8);
    for &b in source {
        if !rng.gen_bool(rate) {
            out.push(b);
            continue;
        }
        let kind: f64 = rng.gen();
        if kind < p_sub {
            let others: Vec<u8> = ACGT.iter().copied().filter(|&c| c != b).collect();
            out.push(*others.choose(rng).unwrap());
        } else if kind < p_sub + p_ins {
            out.push(ACGT[rng.gen_range(0..4)]);
            out.push(b);
        }
        // deletion: drop the base
    }
    out
}

pub fn simulate(cfg: &SimConfig) -> Result<Simulation> {
    cfg.validate()?;
    let mut genome_rng = stream_rng(cfg.seed, 0);
    let genome: Vec<u8> = (0..cfg.genome_length)
        .map(|_| ACGT[genome_rng.gen_range(0..4)])
        .collect();

    // Sorted offsets into the slack, shifted so consecutive spots keep the gap.
    let stride = cfg.read_length + cfg.spot_min_gap;
    let slack = cfg.genome_length - cfg.n_spots * stride;
    let mut place_rng = stream_rng(cfg.seed, 1);
    let mut offsets: Vec<usize> = (0..cfg.n_spots).map(|_| place_rng.gen_range(0..=slack)).collect();
    offsets.sort_unstable();
    let spots: Vec<usize> = offsets.iter().enumerate().map(|(i, &o)| o + i * stride).collect();

    let per_spot: Vec<Vec<SimRead>> = spots
        .par_iter()
        .enumerate()
        .map(|(s, &start)| {
            let mut rng = stream_rng(cfg.seed, 2 + s as u64);
            let forward = &genome[start..start + cfg.read_length];
            let reverse = revcomp_seq(forward);
            (0..cfg.reads_per_spot)
                .map(|j| {
                    let rev = rng.gen_bool(0.5);
                    let src = if rev { &reverse[..] } else { forward };
                    let seq = mutate(src, cfg.error_rate, cfg.error_mix, &mut rng);
                    let id = s * cfg.reads_per_spot + j;
                    SimRead {
                        header: format!("read{id}_spot{s}_{}", if rev { '-' } else { '+' }),
                        seq,
                        spot: s,
                        origin: start,
                        reverse: rev,
                    }
                })
                .collect()
        })
        .collect();
    let reads: Vec<SimRead> = per_spot.into_iter().flatten().collect();

    let mut truth = GroundTruth::default();
    for s in 0..cfg.n_spots {
        let base = (s * cfg.reads_per_spot) as u32;
        for a in 0..cfg.reads_per_spot as u32 {
            for b in a + 1..cfg.reads_per_spot as u32 {
                truth.insert(base + a, base + b);
            }
        }
    }
    Ok(Simulation {
        reads,
        truth,
        spots,
    })
}

impl Simulation {
    /// One record per read, sequence on a single line.
    pub fn write_fasta<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        for r in &self.reads {
            writeln!(w, ">{}", r.header)?;
            w.write_all(&r.seq)?;
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn save(&self, reads: &Path, truth: &Path) -> Result<()> {
        let f = File::create(reads).map_err(|e| Error::file(reads, e))?;
        let mut w = BufWriter::new(f);
        self.write_fasta(&mut w)?;
        w.flush()?;
        self.truth.save(truth)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SimConfig {
        SimConfig {
            genome_length: 200_000,
            n_spots: 10,
            read_length: 500,
            reads_per_spot: 4,
            error_rate: 0.12,
            spot_min_gap: 300,
            seed: 5,
            ..Default::default()
        }
    }

    #[test]
    fn error_free_reads_match_their_spot() {
        let cfg = SimConfig {
            error_rate: 0.0,
            reads_per_spot: 2,
            ..small()
        };
        let sim = simulate(&cfg).unwrap();
        for pair in sim.reads.chunks(2) {
            let (a, b) = (&pair[0].seq, &pair[1].seq);
            assert!(a == b || *a == revcomp_seq(b));
        }
    }

    #[test]
    fn truth_size_and_spacing() {
        let sim = simulate(&small()).unwrap();
        assert_eq!(sim.reads.len(), 40);
        assert_eq!(sim.truth.len(), 10 * 4 * 3 / 2);
        for w in sim.spots.windows(2) {
            assert!(w[1] - w[0] >= 500 + 300);
        }
        assert!(sim.spots.last().unwrap() + 500 <= 200_000);
    }

    #[test]
    fn deterministic_output() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        simulate(&small()).unwrap().write_fasta(&mut a).unwrap();
        simulate(&small()).unwrap().write_fasta(&mut b).unwrap();
        assert_eq!(a, b);
        let mut c = Vec::new();
        simulate(&SimConfig { seed: 6, ..small() }).unwrap().write_fasta(&mut c).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn substitution_rate_matches() {
        let cfg = SimConfig {
            genome_length: 3_000_000,
            n_spots: 100,
            read_length: 2000,
            reads_per_spot: 10,
            error_mix: ErrorMix::SUBSTITUTIONS_ONLY,
            ..Default::default()
        };
        let sim = simulate(&cfg).unwrap();
        assert_eq!(sim.reads.len(), 1000);
        let genome_rc = |r: &SimRead| -> Vec<u8> {
            if r.reverse {
                revcomp_seq(&r.seq)
            } else {
                r.seq.clone()
            }
        };
        // Re-derive each spot from an error-free simulation with the same seed.
        let clean = simulate(&SimConfig { error_rate: 0.0, ..cfg.clone() }).unwrap();
        let mut total = 0.0;
        for r in &sim.reads {
            let source = clean.reads[r.spot * 10].clone();
            let source_fwd = genome_rc(&source);
            let read_fwd = genome_rc(r);
            assert_eq!(read_fwd.len(), source_fwd.len());
            let mism = read_fwd.iter().zip(&source_fwd).filter(|(a, b)| a != b).count();
            total += mism as f64 / read_fwd.len() as f64;
        }
        let mean = total / sim.reads.len() as f64;
        assert!((mean - 0.12).abs() <= 0.01, "mean divergence {mean}");
    }

    #[test]
    fn infeasible_layouts_rejected() {
        let cfg = SimConfig {
            genome_length: 1000,
            ..small()
        };
        assert!(matches!(simulate(&cfg), Err(Error::Config(_))));
        assert!(simulate(&SimConfig { error_rate: 0.5, ..small() }).is_err());
    }

    #[test]
    fn mutate_lengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let src = vec![b'A'; 10_000];
        let ins = mutate(&src, 0.1, ErrorMix { substitution: 0.0, insertion: 1.0, deletion: 0.0 }, &mut rng);
        let del = mutate(&src, 0.1, ErrorMix { substitution: 0.0, insertion: 0.0, deletion: 1.0 }, &mut rng);
        assert!(ins.len() > 10_800 && ins.len() < 11_200);
        assert!(del.len() > 8_800 && del.len() < 9_200);
    }
}
