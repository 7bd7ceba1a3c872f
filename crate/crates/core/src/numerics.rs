//! Compensated floating-point accumulation.
//!
//! The interference series adds up to ~10⁷ nonnegative weights times unit
//! phases; naive summation would lose the certified truncation bound in
//! rounding noise. The accumulator below keeps a running compensation term
//! (Kahan–Babuška–Neumaier), which bounds the accumulated error by a few ulps
//! of the running total independent of the term count.

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    correction: f64,
}

impl Compensated {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.correction += (self.sum - t) + x;
        } else {
            self.correction += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.correction
    }
}

/// One ulp of `x` at its own magnitude; used for exactness assertions.
#[cfg(test)]
pub(crate) fn ulp(x: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        f64::MIN_POSITIVE
    } else {
        let next = f64::from_bits(a.to_bits() + 1);
        next - a
    }
}
