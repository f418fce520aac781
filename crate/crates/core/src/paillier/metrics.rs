//! Per-thread operation counters.
//!
//! Every encryption, decryption, ciphertext product and ciphertext
//! exponentiation bumps a thread-local counter, so protocol code can be
//! checked against its cost model without threading a meter through every
//! call. Counters are per thread; tests running in parallel do not interfere.

use std::cell::Cell;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub encryptions: u64,
    pub decryptions: u64,
    pub additions: u64,
    pub scalar_muls: u64,
}

impl std::ops::Sub for OpCounts {
    type Output = OpCounts;

    fn sub(self, rhs: Self) -> Self {
        OpCounts {
            encryptions: self.encryptions - rhs.encryptions,
            decryptions: self.decryptions - rhs.decryptions,
            additions: self.additions - rhs.additions,
            scalar_muls: self.scalar_muls - rhs.scalar_muls,
        }
    }
}

thread_local! {
    static COUNTS: Cell<OpCounts> = Cell::new(OpCounts::default());
}

pub fn op_counts() -> OpCounts {
    COUNTS.with(Cell::get)
}

pub fn reset_op_counts() {
    COUNTS.with(|c| c.set(OpCounts::default()));
}

/// Runs `f` and returns its result with the operations it performed.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, OpCounts) {
    let before = op_counts();
    let out = f();
    (out, op_counts() - before)
}

pub(crate) fn bump(update: impl FnOnce(&mut OpCounts)) {
    COUNTS.with(|c| {
        let mut counts = c.get();
        update(&mut counts);
        c.set(counts);
    });
}
