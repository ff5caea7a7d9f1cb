//! Certified real arithmetic.
//!
//! [`Dyadic`] numbers are exact binary fractions. An [`Interval`] encloses a
//! real number between two dyadics, rounding outward at a fixed working
//! precision. A [`CertifiedReal`] pairs an enclosure with a recipe that can
//! recompute it at any precision, so callers can escalate when a comparison
//! is undecided.

mod certified;
mod dyadic;
mod interval;

pub use certified::CertifiedReal;
pub use dyadic::{format_scientific, Dyadic, Round};
pub use interval::{parse_decimal, Interval};

/// Working precision in bits used unless a caller asks for more.
pub const DEFAULT_PRECISION: u32 = 128;

/// The golden ratio `(1 + sqrt 5) / 2`.
pub fn alpha() -> CertifiedReal {
    CertifiedReal::from_int(1)
        .add(&CertifiedReal::from_int(5).sqrt())
        .div(&CertifiedReal::from_int(2))
}

pub fn log_alpha() -> CertifiedReal {
    alpha().ln()
}

/// `ln n` for a positive integer.
pub fn ln_int(n: impl Into<num_bigint::BigInt>) -> CertifiedReal {
    CertifiedReal::from_int(n).ln()
}
