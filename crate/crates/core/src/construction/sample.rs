use std::sync::Arc;

use rand_chacha::rand_core::RngCore;

use super::{CantorParams, Slot};
use crate::symbolic::{rng_at, word_to_digit, DigitSource, DigitStream};
use crate::Result;

/// How positions marked `≠θ` are filled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ForbiddenChoice {
    /// Uniform over the `b − 1` admissible digits.
    #[default]
    Random,
    /// Always `(θ_j + 1) mod b`.
    Successor,
}

/// Digits of one point of the Cantor set: template constraints over seeded uniform digits.
pub struct CantorSource {
    params: Arc<CantorParams>,
    seed: u64,
    choice: ForbiddenChoice,
}

impl CantorSource {
    pub fn new(params: Arc<CantorParams>, seed: u64, choice: ForbiddenChoice) -> Self {
        CantorSource { params, seed, choice }
    }
}

const CHUNK: usize = 1 << 20;

impl DigitSource for CantorSource {
    fn fill(&self, start: u64, out: &mut [u8]) {
        let mut done = 0;
        while done < out.len() {
            let len = CHUNK.min(out.len() - done);
            self.fill_chunk(start + done as u64, &mut out[done..done + len]);
            done += len;
        }
    }

    fn label(&self) -> String {
        format!("cantor(seed={})", self.seed)
    }
}

impl CantorSource {
    fn fill_chunk(&self, start: u64, out: &mut [u8]) {
        let p = &self.params;
        let b = p.base as u8;
        let mut rng = rng_at(self.seed, start);
        let words: Vec<u32> = (0..out.len()).map(|_| rng.next_u32()).collect();
        for (d, &w) in out.iter_mut().zip(&words) {
            *d = word_to_digit(w, b);
        }
        let lo = start as u128;
        let hi = lo + out.len() as u128 - 1;
        let theta_end = hi.min(p.last_n()) as usize;
        p.theta.with_prefix(theta_end, |theta| self.apply(theta, &words, lo, hi, out));
    }

    fn apply(&self, theta: &[u8], words: &[u32], lo: u128, hi: u128, out: &mut [u8]) {
        let p = &self.params;
        let b = p.base as u8;
        for t in p.templates() {
            if t.start + t.len < lo || t.start >= hi {
                continue;
            }
            let (olo, ohi) = (lo.max(t.start + 1) - t.start, hi.min(t.start + t.len) - t.start);
            for g in &t.groups {
                for (j, slot) in g.pattern.iter().enumerate() {
                    for o in g.positions_in(j, olo, ohi) {
                        let pos = t.start + o;
                        let i = (pos - lo) as usize;
                        out[i] = match slot {
                            Slot::Zero => 0,
                            Slot::One => 1,
                            Slot::ThetaCopy => theta[pos as usize - 1],
                            Slot::NotTheta => {
                                let th = theta[pos as usize - 1];
                                match self.choice {
                                    ForbiddenChoice::Successor => (th + 1) % b,
                                    ForbiddenChoice::Random => {
                                        let r = word_to_digit(words[i], b - 1);
                                        if r >= th {
                                            r + 1
                                        } else {
                                            r
                                        }
                                    }
                                }
                            }
                        };
                    }
                }
            }
        }
    }
}

/// A point of `E`; deterministic in `(params, seed)`.
///
/// Off the diagonal, `(H₁, H₂)` must lie in the rectangle `[0, α₁/Δ]×[0, α₂/Δ]` for
/// `Δ = Δ^b(y)`; a run of θ long enough to contradict that is reported as an error.
pub fn sample_cantor_point(
    params: &Arc<CantorParams>,
    seed: u64,
    choice: ForbiddenChoice,
) -> Result<DigitStream> {
    region_check(params)?;
    DigitStream::custom(params.base, Arc::new(CantorSource::new(params.clone(), seed, choice)))
}

fn region_check(p: &CantorParams) -> Result<()> {
    if p.exps.on_diagonal() {
        return Ok(());
    }
    let depth = (p.last_n().min(1 << 20) as u64).max(16);
    let est = crate::diophantine::delta_estimate(&p.theta, depth)?;
    let bound = p.exps.ratio1().min(p.exps.ratio2()).clone();
    let bound = crate::exact::to_f64(&bound);
    if est.estimate > bound {
        let w = est.witnesses.last().copied();
        let detail = match w {
            Some(w) => format!("a run of length {} after position {}", w.m, w.n),
            None => "a terminating expansion".to_string(),
        };
        return Err(crate::Error::domain(format!(
            "(H1, H2) lies outside K(y): at depth {depth} theta shows {detail}, so Delta(y) >= {:.6} > {:.6}",
            est.estimate, bound
        )));
    }
    Ok(())
}
