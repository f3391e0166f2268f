#include "functorad/random_maps.hpp"

#include <algorithm>
#include <numeric>

namespace functorad::sampling {

namespace {

int uniform_int(int lo, int hi, std::mt19937_64& rng) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform(double lo, double hi, std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, double scale, std::mt19937_64& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(-scale, scale, rng);
  return m;
}

// Offsets with |b_i| in [1, 2] and random sign.
Vector offset(Eigen::Index m, std::mt19937_64& rng) {
  Vector b(m);
  for (auto& x : b) x = uniform(1.0, 2.0, rng) * (uniform_int(0, 1, rng) ? 1.0 : -1.0);
  return b;
}

// A x + b with |A| small enough that A x + b stays away from 0 on [-1,1]^n.
SmoothMap shifted_affine(Eigen::Index n, Eigen::Index m, std::mt19937_64& rng) {
  return apply_linear(random_matrix(m, n, 0.25 / static_cast<double>(n), rng),
                      SmoothMap::identity(n)) +
         SmoothMap::constant(n, offset(m, rng));
}

SmoothMap affine(Eigen::Index n, Eigen::Index m, std::mt19937_64& rng) {
  return apply_linear(random_matrix(m, n, 1.0, rng), SmoothMap::identity(n)) +
         SmoothMap::constant(n, random_vector(m, -0.5, 0.5, rng));
}

std::vector<Eigen::Index> random_indices(Eigen::Index from, Eigen::Index count,
                                         std::mt19937_64& rng) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < count; ++i) idx.push_back(uniform_int(0, static_cast<int>(from) - 1, rng));
  return idx;
}

// Bounded squashing keeps nested random maps at moderate magnitude.
SmoothMap squash(const SmoothMap& a) { return sin(a); }

}  // namespace

const std::vector<Primitive>& all_primitives() {
  static const std::vector<Primitive> all{
      Primitive::Constant, Primitive::Projection, Primitive::Linear,     Primitive::Add,
      Primitive::Scale,    Primitive::Multiply,   Primitive::Tuple,      Primitive::Sin,
      Primitive::Cos,      Primitive::Exp,        Primitive::Reciprocal, Primitive::Norm,
      Primitive::Power,    Primitive::Guard};
  return all;
}

const char* primitive_name(Primitive p) {
  switch (p) {
    case Primitive::Constant: return "constant";
    case Primitive::Projection: return "projection";
    case Primitive::Linear: return "linear";
    case Primitive::Add: return "add";
    case Primitive::Scale: return "scale";
    case Primitive::Multiply: return "multiply";
    case Primitive::Tuple: return "tuple";
    case Primitive::Sin: return "sin";
    case Primitive::Cos: return "cos";
    case Primitive::Exp: return "exp";
    case Primitive::Reciprocal: return "reciprocal";
    case Primitive::Norm: return "norm";
    case Primitive::Power: return "power";
    case Primitive::Guard: return "guard";
  }
  return "?";
}

Vector random_vector(Eigen::Index n, double lo, double hi, std::mt19937_64& rng) {
  Vector v(n);
  for (auto& x : v) x = uniform(lo, hi, rng);
  return v;
}

MapSample sample_primitive(Primitive p, std::mt19937_64& rng) {
  const Eigen::Index n = uniform_int(1, 3, rng);
  const Eigen::Index m = uniform_int(1, 3, rng);
  const SmoothMap x = SmoothMap::identity(n);
  SmoothMap map = x;
  switch (p) {
    case Primitive::Constant:
      map = SmoothMap::constant(n, random_vector(m, -2.0, 2.0, rng));
      break;
    case Primitive::Projection:
      map = project(sin(affine(n, n + 1, rng)), random_indices(n + 1, m, rng));
      break;
    case Primitive::Linear:
      map = SmoothMap::linear(random_matrix(m, n, 2.0, rng));
      break;
    case Primitive::Add:
      map = sin(affine(n, m, rng)) + affine(n, m, rng);
      break;
    case Primitive::Scale:
      map = scale(uniform(-3.0, 3.0, rng), cos(affine(n, m, rng)));
      break;
    case Primitive::Multiply:
      map = uniform_int(0, 1, rng) ? affine(n, m, rng) * sin(affine(n, m, rng))
                                   : affine(n, 1, rng) * affine(n, m, rng);
      break;
    case Primitive::Tuple:
      map = tuple({sin(affine(n, 1, rng)), affine(n, m, rng)});
      break;
    case Primitive::Sin:
      map = sin(affine(n, m, rng));
      break;
    case Primitive::Cos:
      map = cos(affine(n, m, rng));
      break;
    case Primitive::Exp:
      map = exp(affine(n, m, rng));
      break;
    case Primitive::Reciprocal:
      map = reciprocal(shifted_affine(n, m, rng));
      break;
    case Primitive::Norm:
      map = euclidean_norm(shifted_affine(n, m, rng));
      break;
    case Primitive::Power:
      map = power(shifted_affine(n, m, rng), uniform_int(0, 4, rng));
      break;
    case Primitive::Guard:
      map = guard(shifted_affine(n, m, rng), 0.5);
      break;
  }
  return {map, random_vector(n, -1.0, 1.0, rng), random_vector(n, -1.0, 1.0, rng)};
}

SmoothMap random_map(Eigen::Index n, Eigen::Index m, int depth, std::mt19937_64& rng) {
  if (depth <= 0) return affine(n, m, rng);
  const int choice = uniform_int(0, 11, rng);
  switch (choice) {
    case 0: return sin(random_map(n, m, depth - 1, rng));
    case 1: return cos(random_map(n, m, depth - 1, rng));
    case 2: return exp(scale(0.5, squash(random_map(n, m, depth - 1, rng))));
    case 3: {
      const SmoothMap a = squash(random_map(n, m, depth - 1, rng));
      return reciprocal(power(a, 2) + SmoothMap::constant(n, Vector::Ones(m)));
    }
    case 4: {
      const SmoothMap a = squash(random_map(n, 2, depth - 1, rng));
      const SmoothMap r = euclidean_norm(tuple({a, SmoothMap::constant(n, Vector::Ones(1))}));
      return m == 1 ? r : r * affine(n, m, rng);
    }
    case 5: return power(squash(random_map(n, m, depth - 1, rng)), uniform_int(0, 3, rng));
    case 6: return random_map(n, m, depth - 1, rng) + random_map(n, m, depth - 1, rng);
    case 7: return scale(uniform(-2.0, 2.0, rng), random_map(n, m, depth - 1, rng));
    case 8: {
      const SmoothMap a = random_map(n, uniform_int(0, 1, rng) ? m : 1, depth - 1, rng);
      return a * squash(random_map(n, m, depth - 1, rng));
    }
    case 9: {
      if (m == 1) return project(random_map(n, 2, depth - 1, rng), {uniform_int(0, 1, rng)});
      const Eigen::Index head = uniform_int(1, static_cast<int>(m) - 1, rng);
      return tuple({random_map(n, head, depth - 1, rng), random_map(n, m - head, depth - 1, rng)});
    }
    case 10: {
      const Eigen::Index k = uniform_int(1, 3, rng);
      return apply_linear(random_matrix(m, k, 1.0, rng), random_map(n, k, depth - 1, rng));
    }
    default: {
      const SmoothMap a = squash(random_map(n, m, depth - 1, rng));
      const SmoothMap lifted = guard(tuple({a, SmoothMap::constant(n, Vector::Constant(1, 2.0))}), 1.0);
      std::vector<Eigen::Index> keep(static_cast<std::size_t>(m));
      std::iota(keep.begin(), keep.end(), 0);
      return project(lifted, keep);
    }
  }
}

ComposablePair random_composable_pair(std::mt19937_64& rng) {
  const Eigen::Index n = uniform_int(1, 3, rng);
  const Eigen::Index k = uniform_int(1, 3, rng);
  const Eigen::Index m = uniform_int(1, 3, rng);
  SmoothMap f = random_map(n, k, uniform_int(1, 2, rng), rng);
  SmoothMap g = random_map(k, m, uniform_int(1, 2, rng), rng);
  return {std::move(f), std::move(g), random_vector(n, -1.0, 1.0, rng),
          random_vector(n, -1.0, 1.0, rng)};
}

}  // namespace functorad::sampling
