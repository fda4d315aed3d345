use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("Newton iteration did not converge for j={j}, n={n} after {iterations} iterations (last iterate {last_re}{last_im:+}i)")]
    NoConvergence {
        j: u8,
        n: i64,
        iterations: usize,
        last_re: f64,
        last_im: f64,
    },

    #[error("iterate for j={j}, n={n} left the disk of radius 1/2 around the seed (reached {re}{im:+}i)")]
    OutOfBox { j: u8, n: i64, re: f64, im: f64 },

    #[error("characteristic function vanishes near the contour {rect} after {retries} retries")]
    BoundaryZero { rect: String, retries: usize },

    #[error("root box for j={j}, n={n} holds {count} zeros instead of one")]
    Multiplicity { j: u8, n: i64, count: i64 },

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
