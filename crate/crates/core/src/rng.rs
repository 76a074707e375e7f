//! Seeded, splittable random streams.
//!
//! A stream is identified by a `(seed, stream_id)` pair. The underlying
//! generator is ChaCha8 keyed by the seed with `stream_id` selecting an
//! independent counter-based substream, so any number of paths can be
//! simulated in parallel and reproduced individually.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::Scalar;

/// Identity of a random stream. Cheap to copy and store alongside results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub stream_id: u64,
}

impl StreamKey {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Key of the `index`-th child stream. Children of distinct parents or with
    /// distinct indices land on distinct stream ids with overwhelming
    /// probability.
    pub fn child(&self, index: u64) -> StreamKey {
        let mixed = splitmix64(self.stream_id ^ splitmix64(index.wrapping_add(0x632B_E59B_D9B4_E019)));
        StreamKey {
            seed: self.seed,
            stream_id: mixed,
        }
    }

    pub fn open(&self) -> RngStream {
        RngStream::from_key(*self)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stateful handle on one substream. Not meant to be shared between threads;
/// give each worker its own [`StreamKey::child`].
#[derive(Debug, Clone)]
pub struct RngStream {
    key: StreamKey,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self::from_key(StreamKey::new(seed, stream_id))
    }

    pub fn from_key(key: StreamKey) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(key.seed);
        rng.set_stream(key.stream_id);
        Self { key, rng }
    }

    pub fn key(&self) -> StreamKey {
        self.key
    }

    pub fn substream(&self, index: u64) -> RngStream {
        self.key.child(index).open()
    }
}

/// Source of the primitive draws consumed by the samplers.
///
/// Implemented by [`RngStream`]; tests implement it with fixed sequences to
/// force particular branch inputs.
pub trait VariateSource<T> {
    /// Uniform on the open interval (0, 1).
    fn uniform(&mut self) -> T;
    fn normal(&mut self) -> T;
}

impl<T: Scalar> VariateSource<T> for RngStream {
    #[inline]
    fn uniform(&mut self) -> T {
        T::open01(&mut self.rng)
    }

    #[inline]
    fn normal(&mut self) -> T {
        T::standard_normal(&mut self.rng)
    }
}

impl<T, S: VariateSource<T> + ?Sized> VariateSource<T> for &mut S {
    #[inline]
    fn uniform(&mut self) -> T {
        (**self).uniform()
    }

    #[inline]
    fn normal(&mut self) -> T {
        (**self).normal()
    }
}
