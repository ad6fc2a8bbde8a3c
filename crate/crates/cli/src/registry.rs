use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamKind {
    Integer,
    Real,
    Bool,
    Choice,
    /// `AxB` for fixed factor dimensions or `lo-hi` for a range.
    Dims,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamSpec {
    pub key: &'static str,
    #[serde(skip)]
    pub flag: &'static str,
    pub kind: ParamKind,
    /// JSON literal.
    pub default: &'static str,
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    pub choices: &'static [&'static str],
    pub help: &'static str,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Entry {
    pub name: &'static str,
    pub anchor: &'static str,
    pub summary: &'static str,
    /// Sampled experiments refuse to run without an explicit seed.
    pub sampled: bool,
    pub default_trials: u64,
    pub params: &'static [ParamSpec],
}

impl Entry {
    pub fn param(&self, key: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.key == key)
    }
}

const fn int(
    key: &'static str,
    flag: &'static str,
    default: &'static str,
    help: &'static str,
) -> ParamSpec {
    ParamSpec {
        key,
        flag,
        kind: ParamKind::Integer,
        default,
        choices: &[],
        help,
    }
}

const fn real(
    key: &'static str,
    flag: &'static str,
    default: &'static str,
    help: &'static str,
) -> ParamSpec {
    ParamSpec {
        key,
        flag,
        kind: ParamKind::Real,
        default,
        choices: &[],
        help,
    }
}

const fn boolean(
    key: &'static str,
    flag: &'static str,
    default: &'static str,
    help: &'static str,
) -> ParamSpec {
    ParamSpec {
        key,
        flag,
        kind: ParamKind::Bool,
        default,
        choices: &[],
        help,
    }
}

const fn choice(
    key: &'static str,
    flag: &'static str,
    default: &'static str,
    choices: &'static [&'static str],
    help: &'static str,
) -> ParamSpec {
    ParamSpec {
        key,
        flag,
        kind: ParamKind::Choice,
        default,
        choices,
        help,
    }
}

pub static REGISTRY: &[Entry] = &[
    Entry {
        name: "nosignal-sweep",
        anchor: "#no-signaling-theorem",
        summary: "Random bipartite states and local operations on Bob's factor; max change of Alice's marginal",
        sampled: true,
        default_trials: 1000,
        params: &[ParamSpec {
            key: "dims",
            flag: "dims",
            kind: ParamKind::Dims,
            default: "\"2-4\"",
            choices: &[],
            help: "factor dimensions, AxB or a range lo-hi",
        }],
    },
    Entry {
        name: "flash",
        anchor: "#flash-amplifier",
        summary: "Entangled photon pair with a laser amplifier; per-branch detector tables and the choice-to-counts channel",
        sampled: true,
        default_trials: 10_000,
        params: &[
            int("n", "n", "50", "photons per analyzer beam"),
            choice("cloner", "cloner", "\"magic\"", &["magic", "linear"], "amplifier model"),
            choice("bob_choice", "bob-choice", "\"linear\"", &["linear", "circular"], "Bob's basis for the branch tables"),
        ],
    },
    Entry {
        name: "greenberger",
        anchor: "#macroscopic-phase-shifter",
        summary: "Photon pair coupled to a phase shifter; detector probabilities, marginal sweep and the toggle channel",
        sampled: true,
        default_trials: 10_000,
        params: &[
            real("alpha", "alpha", "0.7853981633974483", "arm phase fixed by the preparation"),
            real("beta", "beta", "0.0", "phase accumulated by the shifter"),
            real("gamma", "gamma", "-1.5707963267948966", "phase of the shifter transformation"),
            boolean("legal", "legal", "false", "use the unitary transformation instead of T"),
            int("sweep_points", "sweep-points", "10", "sender phase settings in the marginal sweep"),
        ],
    },
    Entry {
        name: "epr-rotation",
        anchor: "#epr-rotation",
        summary: "Nonunitary T on one spin of the singlet; Alice's probability with and without it",
        sampled: false,
        default_trials: 1,
        params: &[real("gamma", "gamma", "0.7", "rotation angle of T and of Alice's analyzer")],
    },
    Entry {
        name: "popper",
        anchor: "#popper-experiment",
        summary: "Correlated pair through two slits; Alice's counter distribution with Bob's slit open and narrowed",
        sampled: false,
        default_trials: 1,
        params: &[
            int("grid_points", "grid-points", "256", "points per particle grid"),
            real("correlation_width", "correlation-width", "4.0", "spread of the position difference"),
            real("envelope_width", "envelope-width", "null", "spread of the mean position (default G/10)"),
            real("slit_width_l", "slit-width-l", "null", "Alice's slit (default G/4)"),
            real("slit_width_r", "slit-width-r", "null", "Bob's open slit (default G/4)"),
            real("narrowed_width_r", "narrowed-width-r", "null", "Bob's narrowed slit (default G/32)"),
            real("evolution_time", "evolution-time", "null", "free flight after the slits (default G/2)"),
        ],
    },
    Entry {
        name: "angular-momentum",
        anchor: "#angular-momentum",
        summary: "Total spin of the singlet before and after a local measurement; conservation-law obstruction",
        sampled: false,
        default_trials: 1,
        params: &[],
    },
    Entry {
        name: "shiekh",
        anchor: "#interferometric-signal",
        summary: "Three-mode interferometer with an optional phase; left and right counter probabilities",
        sampled: false,
        default_trials: 1,
        params: &[],
    },
    Entry {
        name: "wigner-count",
        anchor: "#self-replication-count",
        summary: "Equations versus unknowns in the self-replication counting argument",
        sampled: false,
        default_trials: 1,
        params: &[
            int("n", "n", "10", "organism dimension"),
            int("r", "r", "10", "dimension of the rest"),
        ],
    },
    Entry {
        name: "grw-collapse",
        anchor: "#spontaneous-localization",
        summary: "First-collapse times of rigid N-particle superpositions; exponential rate fit per N",
        sampled: true,
        default_trials: 1000,
        params: &[
            int("max_particles", "max-particles", "8", "fit N = 1..max_particles"),
            real("alpha", "alpha", "1.0", "inverse squared localization width"),
            real("lambda", "lambda", "0.5", "hits per particle per unit time"),
            real("separation", "separation", "10.0", "distance between the two branches"),
            real("threshold", "threshold", "1e-6", "minor-branch weight that counts as collapsed"),
        ],
    },
    Entry {
        name: "grw-rate",
        anchor: "#trigger-mechanism",
        summary: "Center-of-mass localization rate for N particles, in simulation and physical units",
        sampled: false,
        default_trials: 1,
        params: &[
            real("n_particles", "n-particles", "1e24", "number of particles"),
            real("lambda", "lambda", "1e-16", "hits per particle per unit time"),
            real("alpha", "alpha", "1e10", "inverse squared localization width"),
        ],
    },
];

pub fn lookup(name: &str) -> Option<&'static Entry> {
    REGISTRY.iter().find(|e| e.name == name)
}
