//! Reconstructions of historical superluminal-signaling proposals, each
//! paired with the computation that shows why it fails.

pub mod angular;
pub mod cloning;
pub mod flash;
pub mod greenberger;
pub mod popper;
pub mod shiekh;
pub mod wigner;

/// Output of a device that no quantum evolution can realize.
///
/// The wrapped value is only reachable through
/// [`Nonphysical::into_nonphysical`], so such outputs cannot slip into a
/// pipeline of legal operations unnoticed.
#[derive(Debug, Clone, PartialEq)]
#[must_use]
pub struct Nonphysical<T>(T);

impl<T> Nonphysical<T> {
    pub(crate) fn new(value: T) -> Self {
        Self(value)
    }

    pub fn as_nonphysical(&self) -> &T {
        &self.0
    }

    pub fn into_nonphysical(self) -> T {
        self.0
    }
}
