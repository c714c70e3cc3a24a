use crate::scalar::Scalar;

/// Both sides of a regret inequality `lhs <= rhs`.
///
/// `vacuous` is set when the right-hand side is `+inf` (zero initial overlap or
/// a zero learning rate); such a report is trivially satisfied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport<T> {
    pub lhs: T,
    pub rhs: T,
    pub satisfied: bool,
    pub vacuous: bool,
}

impl<T: Scalar> BoundReport<T> {
    pub fn evaluate(lhs: T, rhs: T, tolerance: T) -> Self {
        let vacuous = rhs.is_infinite() && rhs > T::zero();
        Self {
            lhs,
            rhs,
            satisfied: vacuous || lhs <= rhs + tolerance,
            vacuous,
        }
    }

    /// `rhs - lhs`, negative when violated.
    pub fn slack(&self) -> T {
        self.rhs - self.lhs
    }
}
