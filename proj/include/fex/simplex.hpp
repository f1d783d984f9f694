#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fex {

enum class SimplexStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* simplex_status_name(SimplexStatus s) {
  switch (s) {
    case SimplexStatus::Optimal: return "optimal";
    case SimplexStatus::Infeasible: return "infeasible";
    case SimplexStatus::Unbounded: return "unbounded";
    case SimplexStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

struct SimplexOptions {
  long max_iterations = 100'000;
  int refactor_every = 64;
  int stall_threshold = 50;  // iterations without progress before Bland
  double dual_tol = 1e-9;
  double primal_tol = 1e-9;
  double pivot_tol = 1e-10;
};

struct SimplexResult {
  SimplexStatus status = SimplexStatus::IterationLimit;
  double objective = 0.0;
  std::vector<double> x;              // primal values, one per column
  std::vector<double> y;              // row duals  y = c_B B^{-1}
  std::vector<double> reduced_costs;  // c_j - y' A_j
  long iterations = 0;
  double max_primal_residual = 0.0;   // ||Ax - b||_inf at exit
};

/// Dense bounded-variable revised simplex for
///     min c'x   s.t.   A x = b,   l <= x <= u,
/// with an explicitly maintained basis inverse, full refactorization every
/// `refactor_every` pivots, Dantzig pricing and a Bland fallback after a
/// stall. Deterministic: all ties break toward the smallest index.
class DenseSimplex {
 public:
  /// `cols` is column-major: cols[j] has m entries. `slack_of_row[i]` may
  /// name a column usable as the initial basic variable of row i (-1 = use
  /// an artificial).
  DenseSimplex(std::vector<std::vector<double>> cols, std::vector<double> b,
               std::vector<double> c, std::vector<double> lo, std::vector<double> up,
               std::vector<int> slack_of_row = {})
      : a_(std::move(cols)), b_(std::move(b)), c_(std::move(c)), lo_(std::move(lo)),
        up_(std::move(up)), slack_hint_(std::move(slack_of_row)) {
    m_ = b_.size();
    n_ = a_.size();
    if (c_.size() != n_ || lo_.size() != n_ || up_.size() != n_)
      throw std::invalid_argument("DenseSimplex: inconsistent sizes");
    for (const auto& col : a_)
      if (col.size() != m_) throw std::invalid_argument("DenseSimplex: bad column");
  }

  SimplexResult solve(const SimplexOptions& opt = {}) {
    opt_ = opt;
    add_artificials();
    init_basis();

    SimplexResult res;
    // phase 1: minimize the artificial infeasibility
    if (needs_phase1_) {
      std::vector<double> phase1_cost(ncols(), 0.0);
      for (std::size_t j = n_; j < ncols(); ++j) phase1_cost[j] = 1.0;
      SimplexStatus st = run(phase1_cost, res.iterations);
      if (st != SimplexStatus::Optimal) { res.status = st; return finalize(res, phase1_cost); }
      if (current_objective(phase1_cost) > 1e-7) {
        res.status = SimplexStatus::Infeasible;
        return finalize(res, phase1_cost);
      }
      fix_artificials();
    }
    std::vector<double> cost(c_);
    cost.resize(ncols(), 0.0);
    res.status = run(cost, res.iterations);
    return finalize(res, cost);
  }

 private:
  enum class VarState : char { Basic, AtLower, AtUpper };
  static constexpr double inf = std::numeric_limits<double>::infinity();

  std::size_t ncols() const { return a_.size(); }

  void add_artificials() {
    lo_.resize(n_, 0.0);
    up_.resize(n_, 0.0);
    art_row_.assign(m_, -1);
    if (slack_hint_.empty()) slack_hint_.assign(m_, -1);
    needs_phase1_ = false;
    for (std::size_t i = 0; i < m_; ++i) {
      int s = slack_hint_[i];
      bool slack_ok = s >= 0 && b_[i] >= lo_[s] - 1e-15 &&
                      (up_[s] == inf || b_[i] <= up_[s] + 1e-15);
      if (slack_ok) continue;
      std::vector<double> col(m_, 0.0);
      col[i] = (b_[i] >= 0.0) ? 1.0 : -1.0;
      a_.push_back(std::move(col));
      lo_.push_back(0.0);
      up_.push_back(inf);
      art_row_[i] = static_cast<int>(a_.size()) - 1;
      needs_phase1_ = true;
    }
  }

  void init_basis() {
    state_.assign(ncols(), VarState::AtLower);
    for (std::size_t j = 0; j < ncols(); ++j)
      if (lo_[j] == -inf && up_[j] == inf) state_[j] = VarState::AtLower;  // free at 0
    basis_.assign(m_, -1);
    for (std::size_t i = 0; i < m_; ++i) {
      int jb = (art_row_[i] >= 0) ? art_row_[i] : slack_hint_[i];
      basis_[i] = jb;
      state_[jb] = VarState::Basic;
    }
    refactorize();
    recompute_basics();
  }

  double bound_value(std::size_t j) const {
    if (state_[j] == VarState::AtUpper) return up_[j];
    return (lo_[j] == -inf) ? 0.0 : lo_[j];
  }

  void recompute_basics() {
    // x_B = B^{-1} (b - A_N x_N)
    std::vector<double> rhs(b_);
    for (std::size_t j = 0; j < ncols(); ++j) {
      if (state_[j] == VarState::Basic) continue;
      double v = bound_value(j);
      if (v == 0.0) continue;
      for (std::size_t i = 0; i < m_; ++i) rhs[i] -= a_[j][i] * v;
    }
    xb_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < m_; ++k) s += binv_[i][k] * rhs[k];
      xb_[i] = s;
    }
  }

  void refactorize() {
    // Gauss-Jordan inverse of the basis matrix with partial pivoting
    std::vector<std::vector<double>> w(m_, std::vector<double>(2 * m_, 0.0));
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t k = 0; k < m_; ++k) w[i][k] = a_[basis_[k]][i];
      w[i][m_ + i] = 1.0;
    }
    for (std::size_t col = 0; col < m_; ++col) {
      std::size_t piv = col;
      for (std::size_t i = col + 1; i < m_; ++i)
        if (std::fabs(w[i][col]) > std::fabs(w[piv][col])) piv = i;
      if (std::fabs(w[piv][col]) < 1e-12)
        throw std::runtime_error("DenseSimplex: singular basis at refactorization");
      std::swap(w[col], w[piv]);
      double inv = 1.0 / w[col][col];
      for (std::size_t k = col; k < 2 * m_; ++k) w[col][k] *= inv;
      for (std::size_t i = 0; i < m_; ++i) {
        if (i == col) continue;
        double f = w[i][col];
        if (f == 0.0) continue;
        for (std::size_t k = col; k < 2 * m_; ++k) w[i][k] -= f * w[col][k];
      }
    }
    binv_.assign(m_, std::vector<double>(m_, 0.0));
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t k = 0; k < m_; ++k) binv_[i][k] = w[i][m_ + k];
  }

  double current_objective(const std::vector<double>& cost) const {
    double obj = 0.0;
    for (std::size_t j = 0; j < ncols(); ++j)
      if (state_[j] != VarState::Basic) obj += cost[j] * bound_value(j);
    for (std::size_t i = 0; i < m_; ++i) obj += cost[basis_[i]] * xb_[i];
    return obj;
  }

  void compute_duals(const std::vector<double>& cost, std::vector<double>& y) const {
    y.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t k = 0; k < m_; ++k) y[k] += cb * binv_[i][k];
    }
  }

  SimplexStatus run(const std::vector<double>& cost, long& iter_counter) {
    bool bland = false;
    int since_refactor = 0, since_progress = 0;
    double best_obj = current_objective(cost);
    std::vector<double> y, d(m_);
    for (long iter = 0; iter < opt_.max_iterations; ++iter, ++iter_counter) {
      compute_duals(cost, y);

      // pricing
      std::size_t q = ncols();
      double best_viol = opt_.dual_tol;
      for (std::size_t j = 0; j < ncols(); ++j) {
        if (state_[j] == VarState::Basic || lo_[j] == up_[j]) continue;
        double z = cost[j];
        const auto& col = a_[j];
        for (std::size_t k = 0; k < m_; ++k) z -= y[k] * col[k];
        double viol = 0.0;
        if (state_[j] == VarState::AtLower && z < -opt_.dual_tol) viol = -z;
        if (state_[j] == VarState::AtUpper && z > opt_.dual_tol) viol = z;
        if (viol > 0.0) {
          if (bland) { q = j; break; }
          if (viol > best_viol) { best_viol = viol; q = j; }
        }
      }
      if (q == ncols()) return SimplexStatus::Optimal;

      double sigma = (state_[q] == VarState::AtLower) ? 1.0 : -1.0;
      for (std::size_t i = 0; i < m_; ++i) {
        double s = 0.0;
        const auto& col = a_[q];
        for (std::size_t k = 0; k < m_; ++k) s += binv_[i][k] * col[k];
        d[i] = s;
      }

      // bounded-variable ratio test
      double t_max = (up_[q] == inf || lo_[q] == -inf) ? inf : up_[q] - lo_[q];
      int leave = -1;
      double leave_t = inf, leave_d = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        double dd = sigma * d[i];
        int jb = basis_[i];
        double t;
        if (dd > opt_.pivot_tol) {
          if (lo_[jb] == -inf) continue;
          t = (xb_[i] - lo_[jb]) / dd;
        } else if (dd < -opt_.pivot_tol) {
          if (up_[jb] == inf) continue;
          t = (up_[jb] - xb_[i]) / (-dd);
        } else {
          continue;
        }
        if (t < -1e-12) t = 0.0;
        bool better = t < leave_t - 1e-12;
        bool tie = std::fabs(t - leave_t) <= 1e-12;
        bool take = better;
        if (!take && tie && leave >= 0) {
          if (bland)  // Bland: smallest variable index among the minima
            take = jb < basis_[leave];
          else  // stability: largest pivot magnitude, then smallest index
            take = std::fabs(d[i]) > std::fabs(leave_d) + 1e-15 ||
                   (std::fabs(std::fabs(d[i]) - std::fabs(leave_d)) <= 1e-15 &&
                    jb < basis_[leave]);
        }
        if (take) {
          leave = static_cast<int>(i);
          leave_t = std::max(t, 0.0);
          leave_d = d[i];
        }
      }

      double t = std::min(leave_t, t_max);
      if (t == inf) return SimplexStatus::Unbounded;

      // apply the step
      for (std::size_t i = 0; i < m_; ++i) xb_[i] -= sigma * t * d[i];
      if (t_max <= leave_t) {
        // bound flip, basis unchanged
        state_[q] = (state_[q] == VarState::AtLower) ? VarState::AtUpper : VarState::AtLower;
      } else {
        int jl = basis_[leave];
        double dl = sigma * d[leave];
        state_[jl] = (dl > 0.0) ? VarState::AtLower : VarState::AtUpper;
        basis_[leave] = static_cast<int>(q);
        state_[q] = VarState::Basic;
        xb_[leave] = bound_value(q) + sigma * t;

        // eta update of the explicit inverse
        double piv = d[leave];
        auto& br = binv_[leave];
        for (double& v : br) v /= piv;
        for (std::size_t i = 0; i < m_; ++i) {
          if (static_cast<int>(i) == leave) continue;
          double f = d[i];
          if (f == 0.0) continue;
          auto& bi = binv_[i];
          for (std::size_t k = 0; k < m_; ++k) bi[k] -= f * br[k];
        }
        if (++since_refactor >= opt_.refactor_every) {
          refactorize();
          recompute_basics();
          since_refactor = 0;
        }
      }

      double obj = current_objective(cost);
      if (obj < best_obj - 1e-13 * (1.0 + std::fabs(best_obj))) {
        best_obj = obj;
        since_progress = 0;
      } else if (++since_progress >= opt_.stall_threshold) {
        bland = true;
      }
    }
    return SimplexStatus::IterationLimit;
  }

  void fix_artificials() {
    for (std::size_t j = n_; j < ncols(); ++j) {
      if (state_[j] == VarState::Basic) continue;
      up_[j] = 0.0;  // nonbasic artificial can never re-enter
    }
    // basic artificials stay pinned at zero by their bounds
    for (std::size_t j = n_; j < ncols(); ++j)
      if (state_[j] == VarState::Basic) up_[j] = 0.0;
  }

  SimplexResult finalize(SimplexResult res, const std::vector<double>& cost) {
    refactorize();
    recompute_basics();
    res.x.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j)
      if (state_[j] != VarState::Basic) res.x[j] = bound_value(j);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < static_cast<int>(n_)) res.x[basis_[i]] = xb_[i];
    std::vector<double> cost2(c_);
    cost2.resize(ncols(), 0.0);
    compute_duals(cost2, res.y);
    res.reduced_costs.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      double z = c_[j];
      for (std::size_t k = 0; k < m_; ++k) z -= res.y[k] * a_[j][k];
      res.reduced_costs[j] = z;
    }
    res.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) res.objective += c_[j] * res.x[j];
    for (std::size_t i = 0; i < m_; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n_; ++j) row += a_[j][i] * res.x[j];
      for (std::size_t j = n_; j < ncols(); ++j)
        if (state_[j] == VarState::Basic)
          for (std::size_t k = 0; k < m_; ++k)
            if (basis_[k] == static_cast<int>(j)) row += a_[j][i] * xb_[k];
      res.max_primal_residual = std::max(res.max_primal_residual, std::fabs(row - b_[i]));
    }
    (void)cost;
    return res;
  }

  std::vector<std::vector<double>> a_;  // column-major
  std::vector<double> b_, c_, lo_, up_;
  std::vector<int> slack_hint_, art_row_, basis_;
  std::vector<double> xb_;
  std::vector<std::vector<double>> binv_;
  std::vector<VarState> state_;
  std::size_t m_ = 0, n_ = 0;
  bool needs_phase1_ = false;
  SimplexOptions opt_;
};

}  // namespace fex
