use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which physical channel of a port a mode lives in.
///
/// Rails are the two waveguides feeding a 2D grating on chip; `PolH`/`PolV`
/// are the fibre polarizations after the grating. `Single` is any other
/// waveguide (internal routing, dump outputs).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    RailUpper,
    RailLower,
    PolH,
    PolV,
    Single,
}

/// Coarse grouping used for basis checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChannelKind {
    Rail,
    Polarization,
    Single,
}

impl Channel {
    pub fn kind(self) -> ChannelKind {
        match self {
            Channel::RailUpper | Channel::RailLower => ChannelKind::Rail,
            Channel::PolH | Channel::PolV => ChannelKind::Polarization,
            Channel::Single => ChannelKind::Single,
        }
    }

    /// Rail carrying the given qubit label: 0 → upper, 1 → lower.
    pub fn rail(label: u8) -> Channel {
        if label == 0 {
            Channel::RailUpper
        } else {
            Channel::RailLower
        }
    }

    /// Polarization carrying the given qubit label: 0 → H, 1 → V.
    pub fn polarization(label: u8) -> Channel {
        if label == 0 {
            Channel::PolH
        } else {
            Channel::PolV
        }
    }

    fn prefix(self) -> Option<&'static str> {
        match self {
            Channel::RailUpper => Some("u"),
            Channel::RailLower => Some("l"),
            Channel::PolH => Some("H"),
            Channel::PolV => Some("V"),
            Channel::Single => None,
        }
    }
}

/// A single bosonic mode: a port label plus a channel.
///
/// Ordering is by port first, then channel, and is what canonical term
/// signatures are sorted by.
///
/// The compact text form is `H_a`, `V_a`, `u_a` (upper rail), `l_a` (lower
/// rail), or the bare port name for a [`Channel::Single`] mode. A single-mode
/// port therefore may not itself start with one of those prefixes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mode {
    pub port: String,
    pub channel: Channel,
}

impl Mode {
    pub fn new(port: impl Into<String>, channel: Channel) -> Self {
        Mode { port: port.into(), channel }
    }

    pub fn upper(port: impl Into<String>) -> Self {
        Mode::new(port, Channel::RailUpper)
    }

    pub fn lower(port: impl Into<String>) -> Self {
        Mode::new(port, Channel::RailLower)
    }

    pub fn h(port: impl Into<String>) -> Self {
        Mode::new(port, Channel::PolH)
    }

    pub fn v(port: impl Into<String>) -> Self {
        Mode::new(port, Channel::PolV)
    }

    pub fn single(port: impl Into<String>) -> Self {
        Mode::new(port, Channel::Single)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.channel.prefix() {
            Some(p) => write!(f, "{}_{}", p, self.port),
            None => f.write_str(&self.port),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidMode(s.to_string()));
        }
        if let Some((prefix, port)) = s.split_once('_') {
            let channel = match prefix {
                "u" => Some(Channel::RailUpper),
                "l" => Some(Channel::RailLower),
                "H" => Some(Channel::PolH),
                "V" => Some(Channel::PolV),
                _ => None,
            };
            if let Some(channel) = channel {
                if port.is_empty() {
                    return Err(Error::InvalidMode(s.to_string()));
                }
                return Ok(Mode::new(port, channel));
            }
        }
        if s.chars().any(char::is_whitespace) {
            return Err(Error::InvalidMode(s.to_string()));
        }
        Ok(Mode::single(s))
    }
}
