#include "urllc/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <string>

#include "urllc/errors.hpp"

namespace urllc {
namespace {

using i64 = std::int64_t;

// Rectangular min-cost assignment: every row is assigned to a distinct
// column. Columns [0, n_right) are the real right vertices; columns
// [n_right, n_right + n_left) are dummies meaning "left vertex unmatched".
class AssignmentProblem {
 public:
  explicit AssignmentProblem(const BipartiteGraph& g)
      : n_(g.n_left), n_right_(g.n_right), m_(g.n_right + g.n_left),
        cost_(static_cast<std::size_t>(n_) * m_, 0), allowed_(static_cast<std::size_t>(n_) * m_, 0) {
    i64 total = 0;
    for (const auto& e : g.edges) total += e.weight;
    const i64 forbidden = total + 1;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_right_; ++j) at(cost_, i, j) = forbidden;
      for (int j = n_right_; j < m_; ++j) at(allowed_, i, j) = 1;
    }
    for (const auto& e : g.edges) {
      at(cost_, e.left, e.right) = -e.weight;
      at(allowed_, e.left, e.right) = 1;
    }
  }

  Matching solve_lexicographic() {
    solve_hungarian();
    std::vector<char> fixed(n_, 0);
    for (int i = 0; i < n_; ++i) {
      for (int r = 0; r < n_right_; ++r) {
        if (!usable(i, r)) continue;
        const int owner = col_row_[r];
        if (owner != -1 && owner != i && fixed[owner]) continue;
        if (try_force(i, r, fixed)) break;
      }
      // If no real column could be forced, the current column is a dummy:
      // any optimal assignment with i on a real column would have been found.
      fixed[i] = 1;
    }

    Matching out;
    for (int i = 0; i < n_; ++i) {
      if (row_col_[i] < n_right_) out.pairs.emplace_back(i, row_col_[i]);
    }
    return out;
  }

 private:
  template <typename T>
  T& at(std::vector<T>& v, int i, int j) {
    return v[static_cast<std::size_t>(i) * m_ + j];
  }
  template <typename T>
  const T& at(const std::vector<T>& v, int i, int j) const {
    return v[static_cast<std::size_t>(i) * m_ + j];
  }

  bool usable(int i, int j) const {
    return at(allowed_, i, j) && at(cost_, i, j) - u_[i] - v_[j] == 0;
  }

  // Kuhn-Munkres with potentials, O(n^2 m). Leaves an optimal dual (u, v)
  // with v <= 0 and v == 0 on every unassigned column.
  void solve_hungarian() {
    const i64 inf = std::numeric_limits<i64>::max() / 4;
    std::vector<i64> u(n_ + 1, 0), v(m_ + 1, 0);
    std::vector<int> p(m_ + 1, 0), way(m_ + 1, 0);
    for (int i = 1; i <= n_; ++i) {
      p[0] = i;
      int j0 = 0;
      std::vector<i64> minv(m_ + 1, inf);
      std::vector<char> used(m_ + 1, 0);
      do {
        used[j0] = 1;
        const int i0 = p[j0];
        i64 delta = inf;
        int j1 = 0;
        for (int j = 1; j <= m_; ++j) {
          if (used[j]) continue;
          const i64 cur = at(cost_, i0 - 1, j - 1) - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
        for (int j = 0; j <= m_; ++j) {
          if (used[j]) {
            u[p[j]] += delta;
            v[j] -= delta;
          } else {
            minv[j] -= delta;
          }
        }
        j0 = j1;
      } while (p[j0] != 0);
      do {
        const int j1 = way[j0];
        p[j0] = p[j1];
        j0 = j1;
      } while (j0 != 0);
    }

    u_.assign(u.begin() + 1, u.end());
    v_.assign(v.begin() + 1, v.end());
    row_col_.assign(n_, -1);
    col_row_.assign(m_, -1);
    for (int j = 1; j <= m_; ++j) {
      if (p[j] != 0) {
        row_col_[p[j] - 1] = j - 1;
        col_row_[j - 1] = p[j] - 1;
      }
    }
  }

  // Moves row i onto column c while staying on the optimal face: all
  // assignments use tight edges and every column with v < 0 stays covered.
  // Rows marked fixed (and i itself) are never moved.
  bool try_force(int i, int c, const std::vector<char>& fixed) {
    if (row_col_[i] == c) return true;
    const auto saved_rows = row_col_;
    const auto saved_cols = col_row_;

    const int c_old = row_col_[i];
    const int displaced = col_row_[c];
    col_row_[c_old] = -1;
    row_col_[i] = c;
    col_row_[c] = i;

    bool ok = true;
    if (displaced != -1) {
      row_col_[displaced] = -1;
      ok = augment_from_row(displaced, i, fixed);
    }
    if (ok && col_row_[c_old] == -1 && v_[c_old] < 0) {
      ok = refill_column(c_old, i, fixed);
    }
    if (!ok) {
      row_col_ = saved_rows;
      col_row_ = saved_cols;
    }
    return ok;
  }

  // Row `start` has no column; find an alternating path of tight edges to
  // any free column.
  bool augment_from_row(int start, int forced_row, const std::vector<char>& fixed) {
    std::vector<int> prev_row(m_, -1);
    std::vector<char> seen(m_, 0);
    std::deque<int> queue{start};
    int end = -1;
    while (!queue.empty() && end == -1) {
      const int r = queue.front();
      queue.pop_front();
      for (int x = 0; x < m_; ++x) {
        if (seen[x] || x == row_col_[r] || !usable(r, x)) continue;
        seen[x] = 1;
        prev_row[x] = r;
        const int owner = col_row_[x];
        if (owner == -1) {
          end = x;
          break;
        }
        if (owner != forced_row && !fixed[owner]) queue.push_back(owner);
      }
    }
    if (end == -1) return false;
    int x = end;
    while (true) {
      const int r = prev_row[x];
      const int prev_col = row_col_[r];
      row_col_[r] = x;
      col_row_[x] = r;
      if (r == start) break;
      x = prev_col;
    }
    return true;
  }

  // Column `start` (v < 0) is free; shift rows along tight edges until a
  // column with v == 0 is the one left free.
  bool refill_column(int start, int forced_row, const std::vector<char>& fixed) {
    std::vector<int> via_col(n_, -1);
    std::vector<int> vacated_by(m_, -1);
    std::vector<char> seen(n_, 0);
    std::deque<int> queue{start};
    int end_row = -1;
    while (!queue.empty() && end_row == -1) {
      const int x = queue.front();
      queue.pop_front();
      for (int k = 0; k < n_; ++k) {
        if (seen[k] || k == forced_row || fixed[k] || row_col_[k] == x || !usable(k, x)) continue;
        seen[k] = 1;
        via_col[k] = x;
        const int y = row_col_[k];
        if (v_[y] == 0) {
          end_row = k;
          break;
        }
        vacated_by[y] = k;
        queue.push_back(y);
      }
    }
    if (end_row == -1) return false;
    int k = end_row;
    col_row_[row_col_[k]] = -1;
    while (true) {
      const int x = via_col[k];
      row_col_[k] = x;
      col_row_[x] = k;
      if (x == start) break;
      k = vacated_by[x];
    }
    return true;
  }

  int n_;
  int n_right_;
  int m_;
  std::vector<i64> cost_;
  std::vector<char> allowed_;
  std::vector<i64> u_, v_;
  std::vector<int> row_col_, col_row_;
};

void validate_graph(const BipartiteGraph& g) {
  if (g.n_left < 0 || g.n_right < 0) throw ParameterError("negative vertex count");
  std::vector<char> present(static_cast<std::size_t>(g.n_left) * static_cast<std::size_t>(g.n_right), 0);
  for (const auto& e : g.edges) {
    if (e.left < 0 || e.left >= g.n_left || e.right < 0 || e.right >= g.n_right) {
      throw ParameterError("edge (" + std::to_string(e.left) + "," + std::to_string(e.right) +
                           ") outside graph bounds");
    }
    if (e.weight < 1) throw ParameterError("edge weights must be >= 1");
    char& flag = present[static_cast<std::size_t>(e.left) * g.n_right + e.right];
    if (flag) {
      throw ParameterError("duplicate edge (" + std::to_string(e.left) + "," + std::to_string(e.right) + ")");
    }
    flag = 1;
  }
}

}  // namespace

Matching max_weight_matching(const BipartiteGraph& g) {
  validate_graph(g);
  if (g.edges.empty()) return {};
  AssignmentProblem problem(g);
  return problem.solve_lexicographic();
}

std::int64_t matching_weight(const BipartiteGraph& g, const Matching& m) {
  std::int64_t total = 0;
  for (const auto& [l, r] : m.pairs) {
    const auto it = std::find_if(g.edges.begin(), g.edges.end(),
                                 [&](const WeightedEdge& e) { return e.left == l && e.right == r; });
    if (it == g.edges.end()) throw ParameterError("matching pair is not an edge of the graph");
    total += it->weight;
  }
  return total;
}

bool is_valid_matching(const BipartiteGraph& g, const Matching& m) {
  std::vector<char> left_used(g.n_left, 0), right_used(g.n_right, 0);
  for (const auto& [l, r] : m.pairs) {
    if (l < 0 || l >= g.n_left || r < 0 || r >= g.n_right) return false;
    if (left_used[l] || right_used[r]) return false;
    left_used[l] = right_used[r] = 1;
    const bool is_edge = std::any_of(g.edges.begin(), g.edges.end(),
                                     [&](const WeightedEdge& e) { return e.left == l && e.right == r; });
    if (!is_edge) return false;
  }
  return true;
}

}  // namespace urllc
