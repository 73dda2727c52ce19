//! Seeded random initial conditions.
//!
//! Every trial gets its own ChaCha stream derived from `(seed, trial)`, so
//! results do not depend on how trials are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::halphen::WState;
use crate::system::Triple;
use crate::C64;

/// `Q` and `R` below this modulus are rejected (both appear in denominators).
pub const MIN_QR: f64 = 0.1;
/// Minimum pairwise distance between sampled `w` components.
pub const MIN_W_GAP: f64 = 0.05;

/// Independent generator for trial number `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform point in the disc `|z| < radius`.
pub fn uniform_disc<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    loop {
        let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if z.norm_sqr() < 1.0 {
            return z * radius;
        }
    }
}

/// Triple with components uniform in the unit disc, `|Q|, |R| >= 0.1`.
pub fn random_triple<R: Rng>(rng: &mut R) -> Triple {
    loop {
        let t = Triple::new(
            uniform_disc(rng, 1.0),
            uniform_disc(rng, 1.0),
            uniform_disc(rng, 1.0),
        );
        if t.q.norm() >= MIN_QR && t.r.norm() >= MIN_QR {
            return t;
        }
    }
}

/// `w` state uniform in the unit disc with no two components closer than
/// [`MIN_W_GAP`].
pub fn random_wstate<R: Rng>(rng: &mut R) -> WState {
    loop {
        let w = [
            uniform_disc(rng, 1.0),
            uniform_disc(rng, 1.0),
            uniform_disc(rng, 1.0),
        ];
        let ok = (w[0] - w[1]).norm() >= MIN_W_GAP
            && (w[1] - w[2]).norm() >= MIN_W_GAP
            && (w[2] - w[0]).norm() >= MIN_W_GAP;
        if ok {
            return WState::from_array(w);
        }
    }
}
