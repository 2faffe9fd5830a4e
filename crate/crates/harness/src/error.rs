use std::fmt;

/// Process exit status classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitClass {
    Config,
    Numeric,
    Io,
}

impl ExitClass {
    pub fn code(self) -> i32 {
        match self {
            ExitClass::Config => 2,
            ExitClass::Numeric => 3,
            ExitClass::Io => 4,
        }
    }
}

/// A failure with a stable, machine-readable code such as `config.grid`.
#[derive(Debug)]
pub struct HarnessError {
    pub class: ExitClass,
    pub code: &'static str,
    pub message: String,
}

pub type HarnessResult<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    pub fn config(code: &'static str, message: impl Into<String>) -> Self {
        HarnessError {
            class: ExitClass::Config,
            code,
            message: message.into(),
        }
    }

    pub fn numeric(code: &'static str, message: impl Into<String>) -> Self {
        HarnessError {
            class: ExitClass::Numeric,
            code,
            message: message.into(),
        }
    }

    pub fn io(code: &'static str, message: impl Into<String>) -> Self {
        HarnessError {
            class: ExitClass::Io,
            code,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.class.code()
    }
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.code, self.message)
    }
}

impl std::error::Error for HarnessError {}

impl From<polar_dqw::Error> for HarnessError {
    fn from(e: polar_dqw::Error) -> Self {
        use polar_dqw::Error as E;
        let msg = e.to_string();
        match e {
            E::InvalidGrid(_) => HarnessError::config("config.grid", msg),
            E::GridMismatch => HarnessError::config("config.grid_mismatch", msg),
            E::BasisMismatch { .. } => HarnessError::config("config.basis", msg),
            E::Domain(_) => HarnessError::config("config.domain", msg),
            E::InvalidLandau(_) => HarnessError::config("config.landau", msg),
            E::InvalidPotential(_) => HarnessError::config("config.potential", msg),
            E::InvalidMetric(_) => HarnessError::config("config.metric", msg),
            E::ZeroField => HarnessError::config("config.zero_field", msg),
            E::NonFinite { .. } => HarnessError::numeric("numeric.non_finite", msg),
            E::TailBound { .. } => HarnessError::numeric("numeric.tail_bound", msg),
            E::Format(_) => HarnessError::io("io.format", msg),
            E::Io(_) => HarnessError::io("io.file", msg),
        }
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::io("io.file", e.to_string())
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::io("io.csv", e.to_string())
    }
}

impl From<serde_json::Error> for HarnessError {
    fn from(e: serde_json::Error) -> Self {
        HarnessError::io("io.json", e.to_string())
    }
}
