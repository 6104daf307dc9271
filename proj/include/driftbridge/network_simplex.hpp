// Exact network simplex for the dense bipartite transportation problem
//
//   min sum_ij C[i][j] F[i][j]
//   s.t. sum_j F[i][j] = supply[i],  sum_i F[i][j] = demand[j],  F >= 0.
//
// The basis is a spanning tree over the n+m nodes, started from a
// north-west-corner solution (no artificial arcs). Entering arcs are priced
// with the most-negative reduced cost; exact ties resolve to the lowest arc
// index (Bland), and a sustained run of degenerate pivots switches pricing
// to pure Bland's rule until progress resumes, which prevents cycling.
#pragma once

#include <cstddef>
#include <vector>

#include "driftbridge/types.hpp"

namespace driftbridge {

class TransportSimplex {
 public:
  // cost is n x m; supply (size n) and demand (size m) must balance.
  TransportSimplex(const Matrix& cost, std::vector<double> supply,
                   std::vector<double> demand);

  void solve();

  double objective() const;
  Matrix extract_flow() const;
  std::size_t pivots() const { return pivots_; }

 private:
  void init_northwest();
  void rebuild_tree();
  // Returns the entering arc id, or -1 at optimality.
  long price_dantzig() const;
  long price_bland() const;
  // Returns the flow change of the pivot (0 for a degenerate pivot).
  double pivot(long entering);

  int source_of(long arc) const { return static_cast<int>(arc / m_); }
  int sink_node_of(long arc) const { return static_cast<int>(n_ + arc % m_); }

  std::size_t n_, m_, nodes_;
  const Matrix& cost_;
  std::vector<double> supply_, demand_;
  std::vector<double> arc_flow_;
  std::vector<char> is_basic_;
  std::vector<long> basic_arcs_;
  std::vector<long> basic_pos_;  // arc -> slot in basic_arcs_, -1 if nonbasic

  // Tree state, rebuilt after every pivot.
  std::vector<double> pi_;
  std::vector<int> parent_, depth_;
  std::vector<long> parent_arc_;

  // Scratch (adjacency as half-edge lists, BFS queue, cycle paths).
  std::vector<int> head_, next_, to_;
  std::vector<long> via_;
  std::vector<int> queue_;
  std::vector<int> u_path_, v_path_;

  double eps_opt_ = 0.0;
  double mass_scale_ = 0.0;
  std::size_t pivots_ = 0;
};

}  // namespace driftbridge
