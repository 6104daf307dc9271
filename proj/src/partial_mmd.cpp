#include "driftbridge/partial_mmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "driftbridge/kernels.hpp"
#include "driftbridge/numerics.hpp"
#include "driftbridge/ot.hpp"

namespace driftbridge {

double BoxSimplexWeights::max_cap_violation() const {
  const double c = cap();
  double worst = 0.0;
  for (double x : w) worst = std::max(worst, x - c);
  return worst;
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw DomainError("partial mmd: alpha must lie in (0, 1]");
}

// Quadratic objective f(w) = w'Kx w - 2 q'w + c with q = Kyx' v, c = v'Ky v.
// Equals the weighted MMD^2 for uniform v.
struct Objective {
  const Matrix& Kx;
  std::vector<double> q;
  double constant;

  Objective(const MmdParts& parts) : Kx(parts.Kx) {
    const std::size_t n = parts.Kx.rows, m = parts.Ky.rows;
    if (parts.Kx.cols != n || parts.Ky.cols != m || parts.Kyx.rows != m ||
        parts.Kyx.cols != n)
      throw DimensionError("partial mmd: kernel matrices have inconsistent shapes");
    const std::vector<double> v(m, 1.0 / static_cast<double>(m));
    q.assign(n, 0.0);
    for (std::size_t j = 0; j < m; ++j)
      kernels::axpy(v[j], parts.Kyx.row(j), q.data(), n);
    constant = kernels::quadratic_form(parts.Ky.data.data(), m, v.data());
  }

  std::size_t n() const { return Kx.rows; }

  double value(const std::vector<double>& w) const {
    return kernels::quadratic_form(Kx.data.data(), n(), w.data()) -
           2.0 * kernels::dot(q.data(), w.data(), n()) + constant;
  }

  // gr = 2 Kx w - 2 q
  void gradient(const std::vector<double>& w, std::vector<double>& gr) const {
    gr.resize(n());
    kernels::matvec(Kx.data.data(), n(), n(), w.data(), gr.data());
    for (std::size_t i = 0; i < n(); ++i) gr[i] = 2.0 * gr[i] - 2.0 * q[i];
  }
};

PartialMmdResult uniform_result(const Objective& objective, double alpha,
                                PartialMmdMethod method) {
  PartialMmdResult result;
  result.method = method;
  result.weights.alpha = alpha;
  result.weights.w.assign(objective.n(), 1.0 / static_cast<double>(objective.n()));
  result.value = objective.value(result.weights.w);
  result.objective_trace.push_back(result.value);
  return result;
}

}  // namespace

std::vector<double> project_box_simplex(const std::vector<double>& y, double cap) {
  const std::size_t n = y.size();
  if (n == 0) throw DimensionError("projection of an empty vector");
  if (!(cap * static_cast<double>(n) >= 1.0))
    throw DomainError("projection: cap * n < 1 leaves the set empty");

  const auto mass = [&](double shift) {
    double total = 0.0;
    for (double v : y) total += std::clamp(v - shift, 0.0, cap);
    return total;
  };
  double lo = *std::min_element(y.begin(), y.end()) - cap - 1.0;
  double hi = *std::max_element(y.begin(), y.end());
  // mass(lo) = n*cap >= 1 and mass(hi) = 0; bisect the monotone map.
  for (int it = 0; it < 128; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mass(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  const double shift = 0.5 * (lo + hi);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::clamp(y[i] - shift, 0.0, cap);
  return w;
}

PartialMmdResult partial_mmd_qp(const MmdParts& parts, double alpha, double tol,
                                std::size_t max_iterations) {
  check_alpha(alpha);
  const Objective objective(parts);
  const std::size_t n = objective.n();

  // alpha = 1 pins every coordinate at the cap 1/n.
  if (alpha == 1.0) return uniform_result(objective, alpha, PartialMmdMethod::qp);

  const double cap = 1.0 / (alpha * static_cast<double>(n));
  // Gershgorin bound on the largest eigenvalue of the Hessian 2 Kx.
  double lipschitz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) row_sum += std::abs(parts.Kx.at(i, j));
    lipschitz = std::max(lipschitz, 2.0 * row_sum);
  }
  if (!(lipschitz > 0.0)) lipschitz = 1.0;

  PartialMmdResult result;
  result.method = PartialMmdMethod::qp;
  result.weights.alpha = alpha;
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  double current = objective.value(w);
  result.objective_trace.push_back(current);

  std::vector<double> gradient, trial(n);
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    objective.gradient(w, gradient);
    for (std::size_t i = 0; i < n; ++i) trial[i] = w[i] - gradient[i] / lipschitz;
    std::vector<double> next = project_box_simplex(trial, cap);
    const double next_value = objective.value(next);
    const bool converged = std::abs(next_value - current) < tol;
    w = std::move(next);
    if (next_value < current) result.objective_trace.push_back(next_value);
    current = next_value;
    result.iterations = it;
    if (converged) {
      result.weights.w = std::move(w);
      result.value = current;
      return result;
    }
  }
  throw ConvergenceError("partial mmd qp: iteration budget exhausted", current, w);
}

PartialMmdResult partial_mmd_adhoc(const MmdParts& parts, double alpha,
                                   std::size_t n_iter, RngSeed seed) {
  check_alpha(alpha);
  const Objective objective(parts);
  const std::size_t n = objective.n();

  // alpha = 1: the feasible set is the single uniform point, so the
  // optimization is vacuous; running the loop could only leave the set
  // through the renormalization step.
  if (alpha == 1.0) {
    PartialMmdResult result = uniform_result(objective, alpha, PartialMmdMethod::adhoc);
    return result;
  }

  const double cap = 1.0 / (alpha * static_cast<double>(n));
  RngStream rng(seed, 0x41444843ull);  // dedicated stream per call

  PartialMmdResult result;
  result.method = PartialMmdMethod::adhoc;
  result.weights.alpha = alpha;

  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  double current = objective.value(w);
  result.objective_trace.push_back(current);

  std::vector<double> gradient, candidate(n), update;
  std::vector<std::size_t> working;

  // Boundary admission thresholds act on reduced gradients, centered at the
  // mean gradient over the support. The raw rule gr_i < gr_min * r admits
  // nothing once every gradient is positive, which strands the iterate on a
  // suboptimal vertex; on the simplex only gradient differences matter.
  // Boundary classification carries a tolerance: the projection can leave a
  // coordinate one bisection-epsilon inside a bound, and treating it as
  // interior both pollutes the centered mean and un-pins it.
  const double boundary_tol = 1e-10 * cap;
  const auto at_zero = [&](std::size_t i) { return w[i] <= boundary_tol; };
  const auto at_cap = [&](std::size_t i) { return w[i] >= cap - boundary_tol; };

  // Admission thresholds act on reduced gradients, centered at the mean
  // gradient over the support. The raw rule gr_i < gr_min * r admits nothing
  // once every gradient is positive, which strands the iterate on a
  // suboptimal vertex; on the simplex only gradient differences matter.
  const auto compute_working = [&](double r) {
    working.clear();
    double level = 0.0;
    std::size_t support = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!at_zero(i)) {
        level += gradient[i];
        ++support;
      }
    }
    level /= static_cast<double>(support);
    double gr_min = std::numeric_limits<double>::infinity();
    double gr_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!at_cap(i)) gr_min = std::min(gr_min, gradient[i] - level);
      if (!at_zero(i)) gr_max = std::max(gr_max, gradient[i] - level);
    }
    // Empty candidate sets degenerate to -inf/+inf thresholds, which simply
    // exclude the corresponding boundary coordinates.
    const double low = std::isfinite(gr_min)
                           ? gr_min * r
                           : -std::numeric_limits<double>::infinity();
    const double high = std::isfinite(gr_max)
                            ? gr_max * r
                            : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double reduced = gradient[i] - level;
      const bool can_grow = !at_zero(i) || reduced < low;
      const bool can_shrink = !at_cap(i) || reduced > high;
      if (can_grow && can_shrink) working.push_back(i);
    }
  };

  // The published step restores the simplex sum by clamping to the box and
  // renormalizing, which can carry iterates far outside the cap and below
  // the constrained minimum. Candidates are instead projected exactly onto
  // the box-capped simplex; everything else follows the published scheme.
  const auto try_steps = [&](double first_step) {
    double step = first_step;
    for (int s = 0; s < 5; ++s, step /= 5.0) {
      candidate = w;
      for (std::size_t k = 0; k < working.size(); ++k)
        candidate[working[k]] -= step * update[k];
      candidate = project_box_simplex(candidate, cap);
      const double value = objective.value(candidate);
      if (value < current) {
        w = candidate;
        current = value;
        result.objective_trace.push_back(value);
        for (double x : w)
          result.max_cap_violation = std::max(result.max_cap_violation, x - cap);
      }
    }
  };

  for (std::size_t iter = 0; iter < n_iter; ++iter) {
    const double r = rng.next_open_double();

    // Newton phase on the working block.
    objective.gradient(w, gradient);
    compute_working(r);
    if (!working.empty()) {
      const std::size_t k = working.size();
      Matrix block(k, k);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
          block.at(a, b) = parts.Kx.at(working[a], working[b]);
      update.resize(k);
      for (std::size_t a = 0; a < k; ++a) update[a] = gradient[working[a]];
      try {
        const Matrix factor = cholesky_factor(block, default_jitter(block));
        cholesky_solve(factor, update);
      } catch (const DomainError&) {
        // Singular working block: fall back to the raw gradient direction.
        for (std::size_t a = 0; a < k; ++a) update[a] = gradient[working[a]];
        ++result.newton_fallbacks;
      }
      try_steps(1.0);
    }

    // Gradient phase on the recomputed working set, mean-centered update.
    objective.gradient(w, gradient);
    compute_working(r);
    if (!working.empty()) {
      const std::size_t k = working.size();
      update.resize(k);
      double mean = 0.0;
      for (std::size_t a = 0; a < k; ++a) mean += gradient[working[a]];
      mean /= static_cast<double>(k);
      for (std::size_t a = 0; a < k; ++a) update[a] = gradient[working[a]] - mean;
      try_steps(0.1);
    }
    result.iterations = iter + 1;
  }

  result.weights.w = w;
  result.value = current;
  return result;
}

PartialMmdResult partial_mmd_two_stage(const SampleSet& X, const SampleSet& Y,
                                       double alpha, double p, const KernelSpec& k,
                                       double dummy_multiplier) {
  check_alpha(alpha);
  const PartialOtResult ot = partial_wasserstein(X, Y, alpha, p, dummy_multiplier);

  const std::size_t n = X.size(), m = Y.size();
  PartialMmdResult result;
  result.method = PartialMmdMethod::two_stage;
  result.weights.alpha = alpha;
  result.weights.w.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    result.weights.w[i] = std::max(ot.coupling.row_marginal[i], 0.0) / alpha;

  // The coupling weights are sparse (at most N+M nonzeros), so the quadratic
  // form is evaluated over the support without building the full n x n
  // kernel matrix.
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i)
    if (result.weights.w[i] > 0.0) support.push_back(i);

  const auto kv = [&](const double* a, const double* b, std::size_t d) {
    return kernel_value(k, kernels::squared_distance(a, b, d));
  };

  const std::size_t d = X.dim();
  double xx = 0.0;
  for (std::size_t a : support)
    for (std::size_t b : support)
      xx += result.weights.w[a] * result.weights.w[b] * kv(X.point(a), X.point(b), d);

  const double vm = 1.0 / static_cast<double>(m);
  double yy = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) yy += kv(Y.point(i), Y.point(j), d);
  yy *= vm * vm;

  double yx = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t a : support)
      yx += result.weights.w[a] * kv(Y.point(j), X.point(a), d);
  yx *= vm;

  result.value = xx + yy - 2.0 * yx;
  result.objective_trace.push_back(result.value);
  return result;
}

}  // namespace driftbridge
