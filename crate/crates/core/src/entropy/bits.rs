use alloc::vec::Vec;

/// Reading past the end of the buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncated;

/// MSB-first bit writer. The final byte is zero-padded.
#[derive(Debug, Clone, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    acc: u64,
    acc_bits: u32,
}

impl BitWriter {
    pub fn new() -> Self {
        BitWriter::default()
    }

    /// Writes the low `n` bits of `value`, most significant first.
    #[inline]
    pub fn write_bits(&mut self, value: u32, n: u32) {
        debug_assert!(n <= 32);
        debug_assert!(n == 32 || value >> n == 0);
        if n == 0 {
            return;
        }
        self.acc = (self.acc << n) | value as u64;
        self.acc_bits += n;
        while self.acc_bits >= 8 {
            self.acc_bits -= 8;
            self.bytes.push((self.acc >> self.acc_bits) as u8);
        }
        self.acc &= (1u64 << self.acc_bits) - 1;
    }

    #[inline]
    pub fn write_bit(&mut self, bit: bool) {
        self.write_bits(bit as u32, 1);
    }

    /// `count` one-bits.
    pub fn write_ones(&mut self, mut count: u32) {
        while count >= 32 {
            self.write_bits(u32::MAX, 32);
            count -= 32;
        }
        if count > 0 {
            self.write_bits((1u32 << count) - 1, count);
        }
    }

    pub fn write_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_bits(b as u32, 8);
        }
    }

    /// Bits written so far, excluding padding.
    #[inline]
    pub fn bit_len(&self) -> u64 {
        self.bytes.len() as u64 * 8 + self.acc_bits as u64
    }

    pub fn finish(mut self) -> Vec<u8> {
        if self.acc_bits > 0 {
            let pad = 8 - self.acc_bits;
            self.bytes.push((self.acc << pad) as u8);
        }
        self.bytes
    }
}

/// MSB-first reader over a byte slice.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        BitReader { bytes, pos: 0 }
    }

    #[inline]
    pub fn position(&self) -> u64 {
        self.pos
    }

    #[inline]
    pub fn remaining(&self) -> u64 {
        self.bytes.len() as u64 * 8 - self.pos
    }

    #[inline]
    pub fn read_bit(&mut self) -> Result<bool, Truncated> {
        let byte = *self.bytes.get((self.pos >> 3) as usize).ok_or(Truncated)?;
        let bit = (byte >> (7 - (self.pos & 7))) & 1;
        self.pos += 1;
        Ok(bit == 1)
    }

    pub fn read_bits(&mut self, n: u32) -> Result<u32, Truncated> {
        debug_assert!(n <= 32);
        if self.remaining() < n as u64 {
            return Err(Truncated);
        }
        let mut v = 0u32;
        for _ in 0..n {
            v = (v << 1) | self.read_bit()? as u32;
        }
        Ok(v)
    }

    /// Counts one-bits up to a terminating zero, stopping early at `limit`.
    pub fn read_unary(&mut self, limit: u32) -> Result<u32, Truncated> {
        let mut q = 0;
        while q < limit {
            if !self.read_bit()? {
                return Ok(q);
            }
            q += 1;
        }
        Ok(q)
    }

    pub fn read_u8(&mut self) -> Result<u8, Truncated> {
        Ok(self.read_bits(8)? as u8)
    }

    pub fn read_u16(&mut self) -> Result<u16, Truncated> {
        Ok(self.read_bits(16)? as u16)
    }

    pub fn read_u32(&mut self) -> Result<u32, Truncated> {
        self.read_bits(32)
    }
}
