use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("unknown robot id {0}")]
    UnknownRobot(u8),
    #[error("robot id {0} already present")]
    DuplicateRobot(u8),
    #[error("robot {0} placed inside a wall or another robot")]
    InvalidPlacement(u8),
    #[error("robot {0} cannot observe itself")]
    SelfObservation(u8),
    #[error("invalid configuration: {0}")]
    Config(String),
}
