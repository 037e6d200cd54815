//! 64-bit FNV-1a, used for every pseudo-identifier and feature index.
//!
//! Serialization fed to the hasher is fixed: integers are written as
//! little-endian bytes of their stated width, strings as their `u64` byte
//! length followed by their UTF-8 bytes, and composite codes as a one-byte
//! tag followed by their parts in order.

const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const PRIME: u64 = 0x0000_0100_0000_01b3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fnv(u64);

impl Default for Fnv {
    fn default() -> Self {
        Fnv(OFFSET)
    }
}

impl Fnv {
    pub fn new() -> Fnv {
        Fnv::default()
    }

    pub fn tagged(tag: u8) -> Fnv {
        let mut h = Fnv::new();
        h.write_u8(tag);
        h
    }

    pub fn write(&mut self, bytes: &[u8]) -> &mut Self {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(PRIME);
        }
        self
    }

    pub fn write_u8(&mut self, x: u8) -> &mut Self {
        self.write(&[x])
    }

    pub fn write_u32(&mut self, x: u32) -> &mut Self {
        self.write(&x.to_le_bytes())
    }

    pub fn write_u64(&mut self, x: u64) -> &mut Self {
        self.write(&x.to_le_bytes())
    }

    pub fn write_str(&mut self, s: &str) -> &mut Self {
        self.write_u64(s.len() as u64);
        self.write(s.as_bytes())
    }

    pub fn finish(&self) -> u64 {
        self.0
    }
}

pub fn hash_str(s: &str) -> u64 {
    Fnv::new().write_str(s).finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_vectors() {
        // published FNV-1a 64 test vectors
        assert_eq!(Fnv::new().finish(), 0xcbf29ce484222325);
        assert_eq!(Fnv::new().write(b"a").finish(), 0xaf63dc4c8601ec8c);
        assert_eq!(Fnv::new().write(b"foobar").finish(), 0x85944171f73967e8);
    }

    #[test]
    fn length_prefix_separates_strings() {
        let ab_c = Fnv::new().write_str("ab").write_str("c").finish();
        let a_bc = Fnv::new().write_str("a").write_str("bc").finish();
        assert_ne!(ab_c, a_bc);
    }
}
