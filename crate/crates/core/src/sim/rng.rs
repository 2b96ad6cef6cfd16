use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Result};
use crate::exceedance::SamplePair;
use crate::lehmann::LehmannParam;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5EED_0F_2013;

/// Seed plus the rule that replicate `i` draws from stream `i`, so results
/// do not depend on how replicates are scheduled across threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub seed: u64,
}

impl Default for RngSpec {
    fn default() -> Self {
        RngSpec { seed: DEFAULT_SEED }
    }
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        RngSpec { seed }
    }

    /// Independent generator for replicate `index`.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

/// X uniform on (0, 1); Y from `1 - (1 - u)^eta`, whose distribution is
/// `G = 1 - (1 - F)^(1/eta)`.
pub fn sample_lehmann_pair<R: Rng + ?Sized>(m: usize, n: usize, eta: LehmannParam, rng: &mut R) -> SamplePair {
    let x: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
    let y: Vec<f64> = (0..n)
        .map(|_| 1.0 - (1.0 - rng.random::<f64>()).powf(eta.value()))
        .collect();
    SamplePair::new(x, y).expect("uniform draws are finite and sizes positive")
}

/// Normal component of a mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalComponent {
    pub location: f64,
    pub scale: f64,
}

impl NormalComponent {
    pub fn new(location: f64, scale: f64) -> Self {
        NormalComponent { location, scale }
    }
}

/// Each sample is `(1 - epsilon) core + epsilon contaminant`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContaminationSpec {
    pub epsilon: f64,
    pub x_core: NormalComponent,
    pub x_contaminant: NormalComponent,
    pub y_core: NormalComponent,
    pub y_contaminant: NormalComponent,
}

impl ContaminationSpec {
    /// X ~ 0.95 N(5,1) + 0.05 N(8,1), Y ~ 0.95 N(6,1) + 0.05 N(3,1): the Y
    /// core is shifted up while the outliers point the other way.
    pub fn opposing_outliers() -> Self {
        ContaminationSpec {
            epsilon: 0.05,
            x_core: NormalComponent::new(5.0, 1.0),
            x_contaminant: NormalComponent::new(8.0, 1.0),
            y_core: NormalComponent::new(6.0, 1.0),
            y_contaminant: NormalComponent::new(3.0, 1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.epsilon) {
            return invalid(format!("epsilon must lie in [0, 1), got {}", self.epsilon));
        }
        for c in [self.x_core, self.x_contaminant, self.y_core, self.y_contaminant] {
            if !c.location.is_finite() || !(c.scale > 0.0) || !c.scale.is_finite() {
                return invalid(format!("bad normal component {c:?}"));
            }
        }
        Ok(())
    }
}

fn mixture<R: Rng + ?Sized>(
    size: usize,
    epsilon: f64,
    core: NormalComponent,
    contaminant: NormalComponent,
    rng: &mut R,
) -> Vec<f64> {
    let core = Normal::new(core.location, core.scale).expect("validated");
    let contaminant = Normal::new(contaminant.location, contaminant.scale).expect("validated");
    (0..size)
        .map(|_| {
            if rng.random::<f64>() < epsilon {
                contaminant.sample(rng)
            } else {
                core.sample(rng)
            }
        })
        .collect()
}

pub fn sample_contaminated_pair<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    spec: &ContaminationSpec,
    rng: &mut R,
) -> Result<SamplePair> {
    spec.validate()?;
    let x = mixture(m, spec.epsilon, spec.x_core, spec.x_contaminant, rng);
    let y = mixture(n, spec.epsilon, spec.y_core, spec.y_contaminant, rng);
    SamplePair::new(x, y)
}
