//! Three-level measurement trees: one device for the first observable, two for
//! the second, four for the third, and a detector behind every leaf.

use alloc::sync::Arc;

use super::devices::{DeviceBank, MeasurementDevice};
use crate::experiment::{apply_device_noise, NoiseModel, OutcomeDistribution, OUTCOME_SIGNS};
use crate::pm_square::{Context, Label};
use crate::qcore::{ComplexMatrix, DensityMatrix};

pub const DEVICE_COUNT: usize = 7;
pub const DETECTOR_COUNT: usize = 8;

#[derive(Clone, Debug)]
pub struct Cascade {
    pub context: Context,
    /// Device slots in heap order: slot 0 is level 1, slots 1–2 level 2,
    /// slots 3–6 level 3. The children of slot `k` are `2k+1` (outcome +1)
    /// and `2k+2` (outcome −1).
    pub devices: [Arc<MeasurementDevice>; DEVICE_COUNT],
    /// Outcome triple seen by each detector, in `+++, ++−, …, −−−` order.
    pub detectors: [[i8; 3]; DETECTOR_COUNT],
}

impl Cascade {
    pub fn ordered_labels(&self) -> [Label; 3] {
        self.context.ordered_labels
    }

    /// Devices on a level (1-based).
    pub fn level(&self, level: usize) -> &[Arc<MeasurementDevice>] {
        match level {
            1 => &self.devices[0..1],
            2 => &self.devices[1..3],
            3 => &self.devices[3..7],
            _ => &[],
        }
    }
}

pub fn build_cascade(bank: &DeviceBank, ctx: Context) -> Cascade {
    let [first, second, third] = ctx.ordered_labels;
    let devices = core::array::from_fn(|slot| {
        let label = match slot {
            0 => first,
            1 | 2 => second,
            _ => third,
        };
        Arc::clone(bank.get(label))
    });
    Cascade { context: ctx, devices, detectors: OUTCOME_SIGNS }
}

fn propagate(cascade: &Cascade, noise: &NoiseModel, slot: usize, rho: &ComplexMatrix, out: &mut [f64; 8]) {
    let device = &cascade.devices[slot];
    let branches = apply_device_noise(device.branches(rho), device, noise);
    for (bit, branch) in branches.iter().enumerate() {
        let child = 2 * slot + 1 + bit;
        if child < DEVICE_COUNT {
            propagate(cascade, noise, child, branch, out);
        } else {
            out[child - DEVICE_COUNT] = branch.trace().re.max(0.0);
        }
    }
}

/// Pushes `ρ` through the tree and returns the detection probabilities.
pub fn run_cascade(rho: &DensityMatrix, cascade: &Cascade, noise: &NoiseModel) -> OutcomeDistribution {
    let mut probabilities = [0.0; DETECTOR_COUNT];
    propagate(cascade, noise, 0, rho.matrix(), &mut probabilities);
    OutcomeDistribution { probabilities }
}
