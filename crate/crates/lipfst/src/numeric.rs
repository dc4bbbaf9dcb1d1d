//! Scalar abstraction for all quantitative procedures.
//!
//! Every weight, distance, discount factor and threshold in this crate is a
//! value of some type implementing [`Scalar`]. The decision procedures rely
//! on exact comparison (shortest accepting sums, cycle means, discounted
//! fixpoints), so a scalar must be an *ordered field with decidable order*:
//! rationals qualify, floating point does not (`f64` is not `Ord`, and
//! rounding would corrupt strict-inequality verdicts). The crate root exports
//! [`crate::Q`] (arbitrary-precision rationals) as the default instantiation.

use num_traits::{FromPrimitive, Num, NumRef, Signed};
use std::fmt::{Debug, Display};
use std::ops::Neg;

/// An exactly ordered field scalar.
///
/// This is a trait alias: any type with the listed bounds implements it.
pub trait Scalar:
    Num + NumRef + Signed + Neg<Output = Self> + Ord + Clone + FromPrimitive + Debug + Display + 'static
{
}

impl<T> Scalar for T where
    T: Num
        + NumRef
        + Signed
        + Neg<Output = T>
        + Ord
        + Clone
        + FromPrimitive
        + Debug
        + Display
        + 'static
{
}

/// Convert a usize into a scalar. Panics only if the scalar type cannot
/// represent the value, which cannot happen for big rationals.
pub fn from_usize<W: Scalar>(n: usize) -> W {
    W::from_usize(n).expect("scalar cannot represent usize")
}

/// A scalar extended with the two infinities.
///
/// `PosInf` encodes "no accepting run" (the infimum over an empty set);
/// `NegInf` only ever shows up in emptiness results for `Sum` automata with
/// negative reachable cycles. Infinities are never stored as weights.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Ext<W> {
    NegInf,
    Fin(W),
    PosInf,
}

impl<W: Scalar> Ext<W> {
    pub fn zero() -> Self {
        Ext::Fin(W::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Fin(_))
    }

    pub fn as_finite(&self) -> Option<&W> {
        match self {
            Ext::Fin(w) => Some(w),
            _ => None,
        }
    }

    pub fn into_finite(self) -> Option<W> {
        match self {
            Ext::Fin(w) => Some(w),
            _ => None,
        }
    }

    /// Extended addition. `NegInf + PosInf` is undefined and panics; the
    /// construction sites guarantee it cannot occur.
    pub fn add(self, rhs: Ext<W>) -> Ext<W> {
        match (self, rhs) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            (Ext::PosInf, Ext::NegInf) | (Ext::NegInf, Ext::PosInf) => {
                panic!("NegInf + PosInf is undefined")
            }
            (Ext::PosInf, _) | (_, Ext::PosInf) => Ext::PosInf,
            (Ext::NegInf, _) | (_, Ext::NegInf) => Ext::NegInf,
        }
    }

    /// Multiply a finite value through; infinities absorb positive factors.
    pub fn scale(self, c: &W) -> Ext<W> {
        match self {
            Ext::Fin(w) => Ext::Fin(w * c),
            inf => {
                assert!(c > &W::zero(), "scaling an infinity by a non-positive factor");
                inf
            }
        }
    }
}

impl<W: Display> Display for Ext<W> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::Fin(w) => write!(f, "{w}"),
            Ext::PosInf => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;
    use num::FromPrimitive;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_i64(n).unwrap() / BigRational::from_i64(d).unwrap()
    }

    #[test]
    fn ext_order_puts_infinities_at_the_ends() {
        let lo: Ext<BigRational> = Ext::NegInf;
        let mid = Ext::Fin(q(-1000, 1));
        let hi: Ext<BigRational> = Ext::PosInf;
        assert!(lo < mid && mid < hi);
        assert!(Ext::Fin(q(1, 3)) < Ext::Fin(q(1, 2)));
    }

    #[test]
    fn ext_addition_absorbs() {
        assert_eq!(Ext::Fin(q(1, 2)).add(Ext::Fin(q(1, 3))), Ext::Fin(q(5, 6)));
        assert_eq!(Ext::PosInf.add(Ext::Fin(q(1, 2))), Ext::<BigRational>::PosInf);
        assert_eq!(Ext::NegInf.add(Ext::Fin(q(1, 2))), Ext::<BigRational>::NegInf);
    }
}
