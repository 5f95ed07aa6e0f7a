//! Net export format: one JSON header line, then one point per line as
//! space-separated `num/2^level` coordinates in canonical form.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::dyadic::{Dyadic, DyadicPoint, SquaredDistance};
use super::{EpsNet, NetError, Puncture, SpaceTag};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetHeader {
    pub dimension: usize,
    pub level: u32,
    pub epsilon_bound: Dyadic,
    pub space_tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_squared: Option<SquaredDistance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<DyadicPoint>,
}

impl NetHeader {
    pub fn of(net: &EpsNet) -> Self {
        let (d_squared, center) = match net.space() {
            SpaceTag::Punctured(ball) => (Some(ball.d_squared), Some(ball.center)),
            _ => (None, None),
        };
        NetHeader {
            dimension: net.dim(),
            level: net.level(),
            epsilon_bound: net.epsilon_bound(),
            space_tag: net.space().name().to_string(),
            d_squared,
            center,
        }
    }
}

pub fn write_net(net: &EpsNet) -> String {
    let header = serde_json::to_string(&NetHeader::of(net)).expect("header serializes");
    let mut out = header;
    out.push('\n');
    for p in net.points() {
        writeln!(out, "{p}").expect("writing to a string");
    }
    out
}

pub fn read_net(text: &str) -> Result<EpsNet, NetError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or(NetError::Format {
        line: 1,
        message: "missing header".into(),
    })?;
    let header: NetHeader = serde_json::from_str(first).map_err(|e| NetError::Format {
        line: 1,
        message: e.to_string(),
    })?;
    let space = match header.space_tag.as_str() {
        "cube" => SpaceTag::Cube,
        "boundary" => SpaceTag::Boundary,
        "punctured" => {
            let d_squared = header.d_squared.ok_or(NetError::Format {
                line: 1,
                message: "punctured net without d_squared".into(),
            })?;
            let center = match header.center {
                Some(c) => c,
                None => DyadicPoint::center(header.dimension)?,
            };
            SpaceTag::Punctured(Puncture { center, d_squared })
        }
        other => {
            return Err(NetError::Format {
                line: 1,
                message: format!("unknown space tag `{other}`"),
            })
        }
    };
    let mut points = BTreeSet::new();
    for (i, line) in lines {
        let p: DyadicPoint = line.parse().map_err(|e: NetError| NetError::Format {
            line: i + 1,
            message: e.to_string(),
        })?;
        if p.dim() != header.dimension {
            return Err(NetError::Format {
                line: i + 1,
                message: format!(
                    "expected {} coordinates, found {}",
                    header.dimension,
                    p.dim()
                ),
            });
        }
        if p.level() > header.level {
            return Err(NetError::OffGrid {
                point: p.to_string(),
                level: header.level,
            });
        }
        points.insert(p);
    }
    EpsNet::from_parts(
        header.dimension,
        header.level,
        points,
        header.epsilon_bound,
        space,
    )
}
