#pragma once

#include <random>
#include <string>
#include <vector>

#include "functorad/smoothmap.hpp"

namespace functorad::sampling {

/// The primitive library, one entry per expression op a user can write.
enum class Primitive {
  Constant,
  Projection,
  Linear,
  Add,
  Scale,
  Multiply,
  Tuple,
  Sin,
  Cos,
  Exp,
  Reciprocal,
  Norm,
  Power,
  Guard,
};

const std::vector<Primitive>& all_primitives();
const char* primitive_name(Primitive p);

/// Uniform coordinates in [lo, hi].
Vector random_vector(Eigen::Index n, double lo, double hi, std::mt19937_64& rng);

/// A map with a point and direction where it is well conditioned.
struct MapSample {
  SmoothMap map;
  Vector point;
  Vector direction;
};

/// A map exercising one primitive on top of a random affine inner map,
/// with a point chosen away from any singularity of that primitive.
MapSample sample_primitive(Primitive p, std::mt19937_64& rng);

/// Random map R^n -> R^m of the given nesting depth. Every map produced is
/// defined on all of R^n: reciprocals, norms and guards only ever see
/// operands bounded away from zero.
SmoothMap random_map(Eigen::Index n, Eigen::Index m, int depth, std::mt19937_64& rng);

/// f: R^n -> R^k and g: R^k -> R^m with a point u in [-1, 1]^n and a
/// direction e.
struct ComposablePair {
  SmoothMap f;
  SmoothMap g;
  Vector point;
  Vector direction;
};
ComposablePair random_composable_pair(std::mt19937_64& rng);

}  // namespace functorad::sampling
