use thiserror::Error;

/// Errors raised when a law, process or query is constructed outside its domain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name} = {value}: requires {constraint}")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("invalid interval ({left}, {right}): {reason}")]
    Interval {
        left: f64,
        right: f64,
        reason: &'static str,
    },
    #[error("query ({left}, {right}) extends beyond the simulation window (0, {window}]")]
    OutsideWindow { left: f64, right: f64, window: f64 },
    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check(
    ok: bool,
    name: &'static str,
    value: f64,
    constraint: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            constraint,
        })
    }
}
