use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::cover::{covering_radius_parts, epsilon_from_cover};
use super::dyadic::{check_dim, Dyadic, DyadicPoint, SquaredDistance};
use super::{
    grid_layer, puncture_radius_sq, punctured_layer, EpsNet, NetError, Puncture, SpaceTag,
};

/// How a layer was produced: the plain grid layer, or the grid layer with the
/// central ball removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    One,
    Two,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::One => f.write_str("One"),
            Method::Two => f.write_str("Two"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamLayer {
    pub level: u32,
    pub method: Method,
    /// Points introduced by this layer only.
    pub points: BTreeSet<DyadicPoint>,
    /// Certified bound for the union of layers `0..=level`.
    pub epsilon_bound: Dyadic,
}

/// A refinement sequence of net layers that may switch, once, from
/// [`Method::One`] to [`Method::Two`].
///
/// The puncture radius is fixed at the switch from every point emitted so far
/// and never recomputed. Earlier layers are kept as they were built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetStream {
    dim: usize,
    center: DyadicPoint,
    layers: Vec<StreamLayer>,
    puncture: Option<Puncture>,
    switch_level: Option<u32>,
    union: BTreeSet<DyadicPoint>,
}

impl NetStream {
    pub fn new(dim: usize) -> Result<Self, NetError> {
        check_dim(dim)?;
        Ok(NetStream {
            dim,
            center: DyadicPoint::center(dim)?,
            layers: Vec::new(),
            puncture: None,
            switch_level: None,
            union: BTreeSet::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn layers(&self) -> &[StreamLayer] {
        &self.layers
    }

    pub fn switch_level(&self) -> Option<u32> {
        self.switch_level
    }

    pub fn puncture(&self) -> Option<&Puncture> {
        self.puncture.as_ref()
    }

    /// Level of the next layer to be built.
    pub fn next_level(&self) -> u32 {
        self.layers.len() as u32
    }

    /// Builds the next layer with `method`. Once a `Two` layer exists, `One`
    /// is refused.
    pub fn push(&mut self, method: Method) -> Result<&StreamLayer, NetError> {
        let level = self.next_level();
        let points = match method {
            Method::One => {
                if self.puncture.is_some() {
                    return Err(NetError::MethodRegression);
                }
                grid_layer(level, self.dim)?
            }
            Method::Two => {
                let ball = match self.puncture {
                    Some(ball) => ball,
                    None => {
                        let ball = Puncture {
                            center: self.center,
                            d_squared: puncture_radius_sq(&self.union, &self.center),
                        };
                        self.puncture = Some(ball);
                        self.switch_level = Some(level);
                        ball
                    }
                };
                punctured_layer(level, ball.d_squared, &ball.center, self.dim)?
            }
        };
        self.union.extend(points.iter().copied());
        let reference = level + 2;
        let cover = covering_radius_parts(self.dim, level, &self.union, &self.space(), reference)?;
        self.layers.push(StreamLayer {
            level,
            method,
            points,
            epsilon_bound: epsilon_from_cover(cover, reference),
        });
        Ok(self.layers.last().expect("just pushed"))
    }

    pub fn space(&self) -> SpaceTag {
        self.puncture.map_or(SpaceTag::Cube, SpaceTag::Punctured)
    }

    pub fn d_squared(&self) -> Option<SquaredDistance> {
        self.puncture.map(|b| b.d_squared)
    }

    /// All points emitted so far.
    pub fn union(&self) -> &BTreeSet<DyadicPoint> {
        &self.union
    }

    /// The union of all layers as a net over the stream's current space.
    pub fn accumulated(&self) -> Result<EpsNet, NetError> {
        let last = self.layers.last().ok_or(NetError::EmptyNet)?;
        EpsNet::from_parts(
            self.dim,
            last.level,
            self.union.clone(),
            last.epsilon_bound,
            self.space(),
        )
    }

    /// True when the centre is part of the accumulated point set.
    pub fn retains_center(&self) -> bool {
        self.union.contains(&self.center)
    }
}
