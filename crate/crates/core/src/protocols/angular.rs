//! Total-spin bookkeeping for a measurement on one spin of the singlet,
//! and the conservation-law obstruction that the argument overlooks.
//! Units ħ = 1.

use crate::error::Result;
use crate::linalg::{embed, pauli, ComplexMatrix, DimList};
use crate::measurement::{measure_nonselective, way_obstruction, MeasurementFamily, WaySetup};
use crate::state::{expectation, named};

/// `S² ` for two spin-½ particles, `S = (σ⁽¹⁾ + σ⁽²⁾)/2`.
pub fn total_spin_squared() -> ComplexMatrix {
    let dims = DimList::uniform(2, 2);
    let mut acc = ComplexMatrix::zeros(4, 4);
    for s in [pauli::x(), pauli::y(), pauli::z()] {
        let total = (&embed(&s, &dims, 0).expect("qubit") + &embed(&s, &dims, 1).expect("qubit"))
            .scale_real(0.5);
        acc = &acc + &total.matmul(&total);
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMomentumReport {
    pub s2_singlet: f64,
    /// After a nonselective `σz` measurement on particle 1.
    pub s2_after_measurement: f64,
    /// Measuring `σz` while `Sz` is conserved.
    pub obstruction_sz_conserved: f64,
    /// Measuring `σz` while `Sx` is conserved.
    pub obstruction_sx_conserved: f64,
    /// Measuring `σx` while `σz` is conserved.
    pub obstruction_x_measured_z_conserved: f64,
}

fn obstruction(sigma: ComplexMatrix, gamma: ComplexMatrix) -> Result<f64> {
    way_obstruction(&WaySetup {
        system_observable: sigma,
        system_charge: gamma,
        apparatus_charge: ComplexMatrix::zeros(2, 2),
        apparatus_l2_mean: 1.0,
    })
}

pub fn run_angular_momentum() -> Result<AngularMomentumReport> {
    let s2 = total_spin_squared();
    let singlet = named::singlet().density();
    let measured = measure_nonselective(&singlet, &MeasurementFamily::computational(2), 0)?;
    Ok(AngularMomentumReport {
        s2_singlet: expectation(&s2, &singlet)?,
        s2_after_measurement: expectation(&s2, &measured)?,
        obstruction_sz_conserved: obstruction(pauli::z(), pauli::z().scale_real(0.5))?,
        obstruction_sx_conserved: obstruction(pauli::z(), pauli::x().scale_real(0.5))?,
        obstruction_x_measured_z_conserved: obstruction(pauli::x(), pauli::z())?,
    })
}
