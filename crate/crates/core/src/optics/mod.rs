//! Optical hardware model: wave plates, beam splitters and wedges acting on
//! the four modes `(tH, tV, rH, rV)`, the preparation stage, single-observable
//! measuring devices, and the seven-device cascades that measure a context.

mod cascade;
mod devices;
mod elements;
mod preparation;

pub use cascade::{build_cascade, run_cascade, Cascade, DETECTOR_COUNT, DEVICE_COUNT};
pub use devices::{
    compile_device, device_netlist, infer_outcome_map, DeviceBank, DeviceNetlist, MeasurementDevice, OutcomeMap,
    INSTRUMENT_TOL,
};
pub use elements::{compose, element_unitary, hwp_jones, qwp_jones, Element, ElementKind, Location};
pub use preparation::{prepare, solve_preparation, PreparationParams, PREPARATION_FIDELITY};
