#include "roundlab/lp.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "roundlab/error.hpp"

namespace rl {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

class NormalSolver {
 public:
  NormalSolver(const SpMat& a, const SpMat& at) : a_(a), at_(at) {}

  bool factor(const Vec& d) {
    SpMat ad = a_ * d.asDiagonal();
    m_ = ad * at_;
    const SpMat& m = m_;
    double scale = 1.0;
    for (int i = 0; i < m.rows(); ++i) scale = std::max(scale, m.coeff(i, i));
    double reg = 1e-13 * scale;
    for (int attempt = 0; attempt < 6; ++attempt, reg *= 100.0) {
      SpMat shifted = m;
      SpMat eye(m.rows(), m.cols());
      eye.setIdentity();
      shifted += reg * eye;
      ldlt_.compute(shifted);
      if (ldlt_.info() == Eigen::Success) return true;
    }
    return false;
  }

  // Solves with the regularized factor, then refines against the exact matrix.
  Vec solve(const Vec& rhs) const {
    Vec x = ldlt_.solve(rhs);
    for (int i = 0; i < 3; ++i) {
      const Vec r = rhs - m_ * x;
      x += ldlt_.solve(r);
    }
    return x;
  }

 private:
  SpMat m_;
  const SpMat& a_;
  const SpMat& at_;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
};

double max_step(const Vec& v, const Vec& dv) {
  double alpha = 1.0;
  for (int i = 0; i < v.size(); ++i)
    if (dv[i] < 0) alpha = std::min(alpha, -v[i] / dv[i]);
  return alpha;
}

double inf_norm(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  const int m = lp.rows;
  const int n = lp.cols;
  ensure(static_cast<int>(lp.rhs.size()) == m && static_cast<int>(lp.cost.size()) == n,
         "linear program dimensions are inconsistent");
  LpSolution out;
  if (n == 0) {
    out.converged = std::all_of(lp.rhs.begin(), lp.rhs.end(), [](double b) { return b == 0.0; });
    return out;
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(lp.entries.size());
  for (const auto& e : lp.entries) trips.emplace_back(e.row, e.col, e.value);
  SpMat a(m, n);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  SpMat at = a.transpose();
  const Vec b = Eigen::Map<const Vec>(lp.rhs.data(), m);
  const Vec c = Eigen::Map<const Vec>(lp.cost.data(), n);

  NormalSolver normal(a, at);

  // Mehrotra's starting point.
  ensure(normal.factor(Vec::Ones(n)), "LP normal equations are singular");
  Vec x = at * normal.solve(b);
  Vec y = normal.solve(a * c);
  Vec s = c - at * y;
  x.array() += std::max(-1.5 * x.minCoeff(), 0.0);
  s.array() += std::max(-1.5 * s.minCoeff(), 0.0);
  {
    const double xs = x.dot(s);
    const double dx = 0.5 * xs / std::max(s.sum(), 1e-300);
    const double ds = 0.5 * xs / std::max(x.sum(), 1e-300);
    x.array() += dx;
    s.array() += ds;
  }
  x = x.cwiseMax(1e-8);
  s = s.cwiseMax(1e-8);

  const double bnorm = 1.0 + inf_norm(b);
  const double cnorm = 1.0 + inf_norm(c);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const Vec rb = b - a * x;
    const Vec rc = c - at * y - s;
    const double primal_obj = c.dot(x);
    out.primal_residual = inf_norm(rb) / bnorm;
    out.dual_residual = inf_norm(rc) / cnorm;
    out.gap = x.dot(s) / (1.0 + std::abs(primal_obj));
    out.iterations = iter;
    if (out.primal_residual < options.tolerance && out.dual_residual < options.tolerance &&
        out.gap < options.tolerance) {
      out.converged = true;
      break;
    }
    const double mu = x.dot(s) / n;
    const Vec d = x.cwiseQuotient(s);
    if (!normal.factor(d)) break;

    auto direction = [&](const Vec& rxs, Vec& dx, Vec& dy, Vec& ds) {
      const Vec rhs = rb + a * (d.cwiseProduct(rc)) - a * rxs.cwiseQuotient(s);
      dy = normal.solve(rhs);
      ds = rc - at * dy;
      dx = (rxs - x.cwiseProduct(ds)).cwiseQuotient(s);
    };

    Vec dx, dy, ds;
    direction(-x.cwiseProduct(s), dx, dy, ds);
    const double ap_aff = max_step(x, dx);
    const double ad_aff = max_step(s, ds);
    const double mu_aff = (x + ap_aff * dx).dot(s + ad_aff * ds) / n;
    const double sigma = std::pow(mu_aff / mu, 3);

    Vec rxs = -x.cwiseProduct(s) - dx.cwiseProduct(ds);
    rxs.array() += sigma * mu;
    direction(rxs, dx, dy, ds);
    double ap = std::min(1.0, 0.995 * max_step(x, dx));
    double ad = std::min(1.0, 0.995 * max_step(s, ds));
    if (options.common_step) ap = ad = std::min(ap, ad);
    x += ap * dx;
    y += ad * dy;
    s += ad * ds;
    x = x.cwiseMax(1e-300);
    s = s.cwiseMax(1e-300);
  }
  out.x.assign(x.data(), x.data() + n);
  out.objective = c.dot(x);
  return out;
}

}  // namespace rl
