use crate::error::{Error, Result};

/// Largest bucket width whose in-bucket excess values fit the 16-bit node fields.
pub const MAX_BUCKET: usize = 1 << 15;

/// Index construction parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    /// Bucket width in parentheses.
    pub bucket: usize,
    /// rmM-tree block size in parentheses.
    pub block: usize,
    /// Lookup-table chunk width (8 or 16).
    pub chunk: u32,
    /// Store the min-count fields needed by mincount/minselect (and degree,
    /// child, childrank).
    pub store_counts: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { bucket: MAX_BUCKET, block: 1024, chunk: 16, store_counts: true }
    }
}

impl Config {
    pub fn new(bucket: usize, block: usize, chunk: u32) -> Result<Self> {
        let c = Config { bucket, block, chunk, store_counts: true };
        c.validate()?;
        Ok(c)
    }

    /// The 512-bit block configuration pairs with 8-bit chunks.
    pub fn with_block(block: usize) -> Self {
        let chunk = if block <= 512 { 8 } else { 16 };
        Config { block, chunk, ..Config::default() }
    }

    pub fn without_counts(mut self) -> Self {
        self.store_counts = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.chunk != 8 && self.chunk != 16 {
            return Err(Error::ChunkWidth(self.chunk));
        }
        if self.bucket == 0 || self.bucket > MAX_BUCKET {
            return Err(Error::Config(format!("bucket width {} outside 1..={MAX_BUCKET}", self.bucket)));
        }
        // Two-parenthesis blocks keep every stored node extremum inside i16.
        if self.block < 2 {
            return Err(Error::Config(format!("block size {} must be at least 2", self.block)));
        }
        if !self.bucket.is_multiple_of(self.block) {
            return Err(Error::Config(format!(
                "block size {} does not divide bucket width {}",
                self.block, self.bucket
            )));
        }
        Ok(())
    }
}
