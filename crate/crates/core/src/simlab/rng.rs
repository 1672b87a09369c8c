use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a random stream is used for within one replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamRole {
    /// Karhunen-Loeve scores of the predictor curves.
    Curves = 0,
    /// Regression errors.
    ResponseNoise = 1,
    /// Measurement noise on discretely observed curves.
    ObservationNoise = 2,
    /// Scores for a noisy arm that does not share paths with the continuous arm.
    NoisyArmCurves = 3,
    NoisyArmResponseNoise = 4,
}

/// Independent stream for one `(seed, experiment, replicate, role)` key.
///
/// The key fills the 256-bit ChaCha seed directly, so distinct keys never
/// share a stream.
pub fn replicate_stream(seed: u64, experiment: u64, replicate: u64, role: StreamRole) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&experiment.to_le_bytes());
    key[16..24].copy_from_slice(&replicate.to_le_bytes());
    key[24..].copy_from_slice(&(role as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
