//! Float math shims and the deterministic RNG used by the robust kernels.
//!
//! With `std` enabled the shims forward to the intrinsic methods; without it
//! they forward to `libm` so the crate stays usable on `no_std` targets.

#[cfg(feature = "std")]
macro_rules! shim {
    ($name:ident, $method:ident, 1) => {
        #[inline]
        pub fn $name(x: f64) -> f64 {
            x.$method()
        }
    };
    ($name:ident, $method:ident, 2) => {
        #[inline]
        pub fn $name(x: f64, y: f64) -> f64 {
            x.$method(y)
        }
    };
}

#[cfg(not(feature = "std"))]
macro_rules! shim {
    ($name:ident, $method:ident, 1) => {
        #[inline]
        pub fn $name(x: f64) -> f64 {
            libm::$name(x)
        }
    };
    ($name:ident, $method:ident, 2) => {
        #[inline]
        pub fn $name(x: f64, y: f64) -> f64 {
            libm::$name(x, y)
        }
    };
}

shim!(sqrt, sqrt, 1);
shim!(sin, sin, 1);
shim!(cos, cos, 1);
shim!(round, round, 1);
shim!(floor, floor, 1);
shim!(atan2, atan2, 2);

/// SplitMix64: a tiny, fast, well-distributed PRNG.
///
/// Used to draw retry ray directions. Seeding from the query point's bit
/// pattern keeps inside/outside classifications reproducible across runs.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform draw in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Unit vector drawn by rejection sampling in the cube.
    pub fn unit_vector(&mut self) -> crate::geom::Vec3 {
        loop {
            let v = crate::geom::Vec3::new(
                self.range(-1.0, 1.0),
                self.range(-1.0, 1.0),
                self.range(-1.0, 1.0),
            );
            let n2 = v.norm_squared();
            if n2 > 0.01 && n2 <= 1.0 {
                return v.scale(1.0 / sqrt(n2));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn unit_vectors_are_unit() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..100 {
            let v = rng.unit_vector();
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }
}
