#include "functorad/vecspace.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>

#include "functorad/errors.hpp"

namespace functorad {

bool is_finite(const Vector& v) { return v.allFinite(); }

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a.size() << " vs " << b.size() << ")";
    throw ContractError(os.str());
  }
}

NormSpec NormSpec::p_norm(double p) {
  if (!(p >= 1.0)) throw ContractError("p-norm requires p >= 1");
  return NormSpec(Kind::P, p);
}

NormSpec NormSpec::pseudo_p_norm(double p) {
  if (!(p > 0.0)) throw ContractError("pseudo p-norm requires p > 0");
  return NormSpec(Kind::P, p);
}

std::string NormSpec::describe() const {
  switch (kind_) {
    case Kind::Euclidean: return "euclidean";
    case Kind::Max: return "max";
    case Kind::P: break;
  }
  std::ostringstream os;
  os << "p=" << p_;
  return os.str();
}

InnerProduct::InnerProduct(Eigen::Index n) : gram_(Matrix::Identity(n, n)) {}

InnerProduct::InnerProduct(Matrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols() || gram_.rows() == 0)
    throw ContractError("gram matrix must be square and non-empty");
  if (!gram_.allFinite()) throw ContractError("gram matrix must be finite");
  for (Eigen::Index i = 0; i < gram_.rows(); ++i)
    for (Eigen::Index j = i + 1; j < gram_.cols(); ++j)
      if (gram_(i, j) != gram_(j, i))
        throw ContractError("gram matrix is not symmetric");
  Eigen::LLT<Matrix> llt(gram_);
  if (llt.info() != Eigen::Success)
    throw ContractError("gram matrix is not positive definite");
}

double norm(const Vector& v, const NormSpec& spec) {
  if (!is_finite(v)) throw DomainError("norm: non-finite input");
  switch (spec.kind()) {
    case NormSpec::Kind::Euclidean:
      return v.norm();
    case NormSpec::Kind::Max:
      return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
    case NormSpec::Kind::P: {
      double s = 0.0;
      for (double x : v) s += std::pow(std::abs(x), spec.p());
      return std::pow(s, 1.0 / spec.p());
    }
  }
  return 0.0;
}

double metric(const Vector& x, const Vector& y, const NormSpec& spec) {
  require_same_dim(x, y, "metric");
  return norm(x - y, spec);
}

double inner(const Vector& x, const Vector& y, const InnerProduct& ip) {
  require_same_dim(x, y, "inner");
  if (x.size() != ip.dim()) throw ContractError("inner: gram dimension mismatch");
  return x.dot(ip.gram() * y);
}

double inner_norm(const Vector& v, const InnerProduct& ip) {
  return std::sqrt(inner(v, v, ip));
}

namespace {

constexpr Eigen::Index kAxiomDim = 3;
constexpr double kRelTol = 1e-12;

std::string show(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

Vector random_vector(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  Vector v(kAxiomDim);
  for (auto& x : v) x = coord(rng);
  return v;
}

}  // namespace

AxiomReport check_norm_axioms(const NormSpec& spec, std::size_t samples,
                              std::uint64_t seed) {
  AxiomReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scalar(-5.0, 5.0);

  const double n0 = norm(Vector::Zero(kAxiomDim), spec);
  if (n0 != 0.0) report.violations.push_back({"N1", "||0|| != 0", n0, 0.0});

  for (std::size_t k = 0; k < samples; ++k) {
    ++report.trials;
    const Vector x = random_vector(rng);
    const Vector y = random_vector(rng);
    const double lambda = scalar(rng);

    const double nx = norm(x, spec);
    if (!(nx > 0.0))
      report.violations.push_back({"N1", "x=" + show(x) + " nonzero with ||x|| <= 0", nx, 0.0});

    const double lhs2 = norm(lambda * x, spec);
    const double rhs2 = std::abs(lambda) * nx;
    if (std::abs(lhs2 - rhs2) > kRelTol * std::max(1.0, rhs2)) {
      std::ostringstream os;
      os.precision(17);
      os << "lambda=" << lambda << " x=" << show(x);
      report.violations.push_back({"N2", os.str(), lhs2, rhs2});
    }

    const double lhs3 = norm(x + y, spec);
    const double rhs3 = nx + norm(y, spec);
    if (lhs3 > rhs3 * (1.0 + kRelTol))
      report.violations.push_back({"N3", "x=" + show(x) + " y=" + show(y), lhs3, rhs3});
  }
  return report;
}

AxiomReport check_metric_axioms(const NormSpec& spec, std::size_t samples,
                                std::uint64_t seed) {
  AxiomReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scalar(-5.0, 5.0);

  for (std::size_t k = 0; k < samples; ++k) {
    ++report.trials;
    const Vector x = random_vector(rng);
    const Vector y = random_vector(rng);
    const Vector z = random_vector(rng);
    const Vector a = random_vector(rng);
    const double r = scalar(rng);

    const double dxy = metric(x, y, spec);
    const double dyx = metric(y, x, spec);
    const std::string pair = "x=" + show(x) + " y=" + show(y);

    if (!(dxy >= 0.0)) report.violations.push_back({"d1", pair, dxy, 0.0});
    const double dxx = metric(x, x, spec);
    if (dxx != 0.0) report.violations.push_back({"d2", "x=" + show(x), dxx, 0.0});
    if (x != y && !(dxy > 0.0)) report.violations.push_back({"d2", pair, dxy, 0.0});
    if (dxy != dyx) report.violations.push_back({"d3", pair, dxy, dyx});

    const double dxz = metric(x, z, spec);
    const double via = dxy + metric(y, z, spec);
    if (dxz > via * (1.0 + kRelTol))
      report.violations.push_back({"d4", pair + " z=" + show(z), dxz, via});

    const double shifted = metric(x + a, y + a, spec);
    if (std::abs(shifted - dxy) > kRelTol * std::max(1.0, dxy) * 10.0)
      report.violations.push_back({"d-trans", pair + " a=" + show(a), shifted, dxy});

    const double scaled = metric(r * x, r * y, spec);
    if (std::abs(scaled - std::abs(r) * dxy) > kRelTol * std::max(1.0, std::abs(r) * dxy))
      report.violations.push_back({"d-hom", pair, scaled, std::abs(r) * dxy});
  }
  return report;
}

}  // namespace functorad
