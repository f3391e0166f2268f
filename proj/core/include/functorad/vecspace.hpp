#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace functorad {

/// Coordinates of a point or direction in R^n. Dimension is a runtime
/// property; operations check it at their boundaries.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// True when every coordinate is finite.
bool is_finite(const Vector& v);

/// Throws ContractError unless a and b have equal dimension.
void require_same_dim(const Vector& a, const Vector& b, const char* what);

/// Which norm to use on R^n.
class NormSpec {
 public:
  enum class Kind { Euclidean, P, Max };

  static NormSpec euclidean() { return NormSpec(Kind::Euclidean, 2.0); }
  static NormSpec max() { return NormSpec(Kind::Max, 0.0); }
  /// p-norm; throws ContractError for p < 1.
  static NormSpec p_norm(double p);
  /// Unchecked p-"norm" for p < 1. Not a norm; exists so the axiom
  /// checkers have something to catch.
  static NormSpec pseudo_p_norm(double p);

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  std::string describe() const;

 private:
  NormSpec(Kind k, double p) : kind_(k), p_(p) {}
  Kind kind_;
  double p_;
};

/// Symmetric positive-definite Gram matrix defining <x, y> = x^T G y.
class InnerProduct {
 public:
  /// Identity Gram on R^n.
  explicit InnerProduct(Eigen::Index n);
  /// Throws ContractError unless gram is exactly symmetric and positive
  /// definite.
  explicit InnerProduct(Matrix gram);

  const Matrix& gram() const { return gram_; }
  Eigen::Index dim() const { return gram_.rows(); }

 private:
  Matrix gram_;
};

/// ||v||; throws DomainError on non-finite input.
double norm(const Vector& v, const NormSpec& spec = NormSpec::euclidean());
/// d(x, y) = ||x - y||.
double metric(const Vector& x, const Vector& y,
              const NormSpec& spec = NormSpec::euclidean());
double inner(const Vector& x, const Vector& y, const InnerProduct& ip);
/// Norm induced by the inner product, sqrt(<v, v>).
double inner_norm(const Vector& v, const InnerProduct& ip);

struct AxiomViolation {
  std::string axiom;    // "N1", "N2", "N3", "d1" .. "d4"
  std::string witness;  // human-readable counterexample
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AxiomReport {
  std::size_t trials = 0;
  std::vector<AxiomViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Seeded battery for N1 (positive definiteness), N2 (homogeneity) and N3
/// (triangle inequality) on random vectors in R^3.
AxiomReport check_norm_axioms(const NormSpec& spec, std::size_t samples,
                              std::uint64_t seed);

/// Seeded battery for d1..d4 of the metric induced by spec, plus
/// translation invariance and homogeneity (reported as "d-trans", "d-hom").
AxiomReport check_metric_axioms(const NormSpec& spec, std::size_t samples,
                                std::uint64_t seed);

}  // namespace functorad
