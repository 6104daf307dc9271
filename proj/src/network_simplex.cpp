#include "driftbridge/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "driftbridge/kernels.hpp"

namespace driftbridge {

TransportSimplex::TransportSimplex(const Matrix& cost, std::vector<double> supply,
                                   std::vector<double> demand)
    : n_(cost.rows),
      m_(cost.cols),
      nodes_(cost.rows + cost.cols),
      cost_(cost),
      supply_(std::move(supply)),
      demand_(std::move(demand)) {
  if (supply_.size() != n_ || demand_.size() != m_)
    throw DimensionError("transport: weight lengths do not match the cost matrix");
  if (n_ == 0 || m_ == 0) throw DimensionError("transport: empty problem");
  double s = 0.0, d = 0.0;
  for (double v : supply_) {
    if (!(v >= 0.0)) throw InfeasibleError("transport: negative supply");
    s += v;
  }
  for (double v : demand_) {
    if (!(v >= 0.0)) throw InfeasibleError("transport: negative demand");
    d += v;
  }
  if (std::abs(s - d) > 1e-6)
    throw InfeasibleError("transport: supply and demand totals differ by more than 1e-6");
  // Rebalance exactly so the initial solution closes without residue.
  if (d > 0.0) {
    const double ratio = s / d;
    for (double& v : demand_) v *= ratio;
  }
  mass_scale_ = std::max(s, 1e-300);
  double max_cost = 0.0;
  for (double v : cost_.data) {
    if (!std::isfinite(v) || v < 0.0)
      throw DomainError("transport: costs must be finite and nonnegative");
    max_cost = std::max(max_cost, v);
  }
  eps_opt_ = 1e-13 * (1.0 + max_cost);

  arc_flow_.assign(n_ * m_, 0.0);
  is_basic_.assign(n_ * m_, 0);
  basic_pos_.assign(n_ * m_, -1);
  basic_arcs_.reserve(nodes_ - 1);
  pi_.assign(nodes_, 0.0);
  parent_.assign(nodes_, -1);
  depth_.assign(nodes_, 0);
  parent_arc_.assign(nodes_, -1);
  head_.assign(nodes_, -1);
  next_.assign(2 * (nodes_ - 1), -1);
  to_.assign(2 * (nodes_ - 1), -1);
  via_.assign(2 * (nodes_ - 1), -1);
  queue_.reserve(nodes_);
}

void TransportSimplex::init_northwest() {
  std::size_t i = 0, j = 0;
  double rs = supply_[0], rd = demand_[0];
  for (;;) {
    const long arc = static_cast<long>(i * m_ + j);
    const double t = std::min(rs, rd);
    arc_flow_[arc] = t;
    is_basic_[arc] = 1;
    basic_pos_[arc] = static_cast<long>(basic_arcs_.size());
    basic_arcs_.push_back(arc);
    rs -= t;
    rd -= t;
    if (i == n_ - 1 && j == m_ - 1) break;
    if (i == n_ - 1) {
      rd = demand_[++j];
    } else if (j == m_ - 1) {
      rs = supply_[++i];
    } else if (rs <= rd) {
      rs = supply_[++i];
    } else {
      rd = demand_[++j];
    }
  }
}

void TransportSimplex::rebuild_tree() {
  std::fill(head_.begin(), head_.end(), -1);
  int edge = 0;
  for (long arc : basic_arcs_) {
    const int s = source_of(arc), t = sink_node_of(arc);
    to_[edge] = t;
    via_[edge] = arc;
    next_[edge] = head_[s];
    head_[s] = edge++;
    to_[edge] = s;
    via_[edge] = arc;
    next_[edge] = head_[t];
    head_[t] = edge++;
  }
  queue_.clear();
  queue_.push_back(0);
  parent_[0] = -1;
  parent_arc_[0] = -1;
  depth_[0] = 0;
  pi_[0] = 0.0;
  for (std::size_t q = 0; q < queue_.size(); ++q) {
    const int x = queue_[q];
    for (int e = head_[x]; e != -1; e = next_[e]) {
      const int y = to_[e];
      if (y == parent_[x]) continue;
      parent_[y] = x;
      parent_arc_[y] = via_[e];
      depth_[y] = depth_[x] + 1;
      // Basic arcs have zero reduced cost: C = pi[source] - pi[sink].
      const double c = cost_.data[static_cast<std::size_t>(via_[e])];
      pi_[y] = (y >= static_cast<int>(n_)) ? pi_[x] - c : pi_[x] + c;
      queue_.push_back(y);
      if (queue_.size() > nodes_)
        throw Error("transport: basis lost the spanning-tree property");
    }
  }
  if (queue_.size() != nodes_)
    throw Error("transport: basis lost the spanning-tree property");
}

long TransportSimplex::price_dantzig() const {
  double best = -eps_opt_;
  long best_arc = -1;
  const double* pi_sink = pi_.data() + n_;
  for (std::size_t i = 0; i < n_; ++i) {
    const auto r = kernels::min_plus(cost_.row(i), pi_sink, m_);
    const double rc = r.value - pi_[i];
    if (rc < best) {
      best = rc;
      best_arc = static_cast<long>(i * m_ + r.index);
    }
  }
  return best_arc;
}

long TransportSimplex::price_bland() const {
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = cost_.row(i);
    for (std::size_t j = 0; j < m_; ++j) {
      const double rc = row[j] - pi_[i] + pi_[n_ + j];
      if (rc < -eps_opt_) return static_cast<long>(i * m_ + j);
    }
  }
  return -1;
}

double TransportSimplex::pivot(long entering) {
  int x = source_of(entering);
  int y = sink_node_of(entering);
  u_path_.clear();
  v_path_.clear();
  while (x != y) {
    if (depth_[x] >= depth_[y]) {
      u_path_.push_back(x);
      x = parent_[x];
    } else {
      v_path_.push_back(y);
      y = parent_[y];
    }
  }

  // Pushing theta along the entering arc sends it back through the tree
  // path v -> join -> u. An arc loses flow when the push runs against its
  // source->sink direction.
  const auto gains_flow = [&](int z, bool on_u_side) {
    const bool z_is_source = z < static_cast<int>(n_);
    return on_u_side ? !z_is_source : z_is_source;
  };

  double delta = std::numeric_limits<double>::infinity();
  long leaving = -1;
  for (int z : u_path_) {
    if (!gains_flow(z, true)) {
      const double f = arc_flow_[static_cast<std::size_t>(parent_arc_[z])];
      if (f < delta) {
        delta = f;
        leaving = parent_arc_[z];
      }
    }
  }
  for (int z : v_path_) {
    if (!gains_flow(z, false)) {
      const double f = arc_flow_[static_cast<std::size_t>(parent_arc_[z])];
      if (f < delta) {
        delta = f;
        leaving = parent_arc_[z];
      }
    }
  }
  if (leaving < 0)
    throw Error("transport: cycle without a blocking arc");  // cannot happen

  arc_flow_[static_cast<std::size_t>(entering)] += delta;
  for (int z : u_path_) {
    const auto a = static_cast<std::size_t>(parent_arc_[z]);
    arc_flow_[a] += gains_flow(z, true) ? delta : -delta;
  }
  for (int z : v_path_) {
    const auto a = static_cast<std::size_t>(parent_arc_[z]);
    arc_flow_[a] += gains_flow(z, false) ? delta : -delta;
  }
  arc_flow_[static_cast<std::size_t>(leaving)] = 0.0;

  const long slot = basic_pos_[static_cast<std::size_t>(leaving)];
  basic_arcs_[static_cast<std::size_t>(slot)] = entering;
  basic_pos_[static_cast<std::size_t>(entering)] = slot;
  basic_pos_[static_cast<std::size_t>(leaving)] = -1;
  is_basic_[static_cast<std::size_t>(entering)] = 1;
  is_basic_[static_cast<std::size_t>(leaving)] = 0;
  return delta;
}

void TransportSimplex::solve() {
  init_northwest();
  rebuild_tree();

  const std::size_t max_pivots = 300 * nodes_ + 20000;
  const double degenerate_eps = 1e-13 * mass_scale_;
  std::size_t degenerate_run = 0;
  bool bland_mode = false;

  for (;;) {
    const long entering = bland_mode ? price_bland() : price_dantzig();
    if (entering < 0) break;
    const double delta = pivot(entering);
    rebuild_tree();
    if (++pivots_ > max_pivots)
      throw ConvergenceError("transport: pivot budget exceeded", objective(), {});
    if (delta <= degenerate_eps) {
      if (++degenerate_run > 4 * nodes_) bland_mode = true;
    } else {
      degenerate_run = 0;
      bland_mode = false;
    }
  }
}

double TransportSimplex::objective() const {
  double total = 0.0;
  for (long arc : basic_arcs_) {
    const auto a = static_cast<std::size_t>(arc);
    total += arc_flow_[a] * cost_.data[a];
  }
  return total;
}

Matrix TransportSimplex::extract_flow() const {
  Matrix flow(n_, m_, 0.0);
  for (long arc : basic_arcs_) {
    const auto a = static_cast<std::size_t>(arc);
    flow.data[a] = std::max(arc_flow_[a], 0.0);
  }
  return flow;
}

}  // namespace driftbridge
