#include "mmwp/bilp.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <stdexcept>

namespace mmwp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr double kReducedCostTol = 1e-9;
constexpr int kRefactorEvery = 64;

void check_problem(const BilpProblem& p) {
  const Eigen::Index n = p.n();
  if (n == 0) throw std::invalid_argument("bilp: problem has no variables");
  if (!p.c.allFinite()) throw std::invalid_argument("bilp: objective has non-finite entries");
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const BilpRow& row = p.rows[r];
    if (row.a.size() != n)
      throw std::invalid_argument("bilp: row " + std::to_string(r) + " has " +
                                  std::to_string(row.a.size()) + " coefficients, expected " +
                                  std::to_string(n));
    if (!row.a.allFinite() || !std::isfinite(row.b))
      throw std::invalid_argument("bilp: row " + std::to_string(r) + " has non-finite entries");
  }
}

double objective_value(const BilpProblem& p, const std::vector<int>& x) {
  double v = 0.0;
  for (Eigen::Index j = 0; j < p.n(); ++j) v += p.c[j] * x[j];
  return v;
}

bool row_feasible(const BilpRow& row, const std::vector<int>& x, double tol) {
  double r = 0.0;
  for (Eigen::Index j = 0; j < row.a.size(); ++j) r += row.a[j] * x[j];
  switch (row.sense) {
    case Sense::Le: return r <= row.b + tol;
    case Sense::Eq: return std::abs(r - row.b) <= tol;
    case Sense::Ge: return r >= row.b - tol;
  }
  return false;
}

/// Bounded-variable two-phase primal simplex on the standardized system
/// [structural | slack/surplus | artificial]. The constraint matrix is built
/// once; repeated solves (one per search node) only change variable bounds.
class Simplex {
 public:
  explicit Simplex(const BilpProblem& p) : n_(p.n()), m_(static_cast<int>(p.rows.size())) {
    // Normalize every row to an equality with b >= 0. A row whose slack ends
    // up with coefficient +1 can start the basis; every other row needs an
    // artificial.
    slack_of_.assign(m_, -1);
    art_of_.assign(m_, -1);
    std::vector<double> sign(m_, 1.0), slack_coef(m_, 0.0);
    int extra = 0;
    for (int r = 0; r < m_; ++r) {
      const BilpRow& row = p.rows[r];
      sign[r] = row.b < 0.0 ? -1.0 : 1.0;
      if (row.sense != Sense::Eq) {
        slack_coef[r] = (row.sense == Sense::Le ? 1.0 : -1.0) * sign[r];
        ++extra;
      }
      if (slack_coef[r] <= 0.0) ++extra;  // artificial needed
    }
    nt_ = static_cast<int>(n_) + extra;
    b_.resize(m_);
    std::vector<Eigen::Triplet<double>> trips;
    int col = static_cast<int>(n_);
    for (int r = 0; r < m_; ++r) {
      const Eigen::VectorXd& a = p.rows[r].a;
      for (Eigen::Index j = 0; j < a.size(); ++j)
        if (a[j] != 0.0) trips.emplace_back(r, static_cast<int>(j), sign[r] * a[j]);
      b_[r] = sign[r] * p.rows[r].b;
      if (slack_coef[r] != 0.0) {
        slack_of_[r] = col;
        trips.emplace_back(r, col++, slack_coef[r]);
      }
      if (slack_coef[r] <= 0.0) {
        art_of_[r] = col;
        trips.emplace_back(r, col++, 1.0);
      }
    }
    A_.resize(m_, nt_);
    A_.setFromTriplets(trips.begin(), trips.end());
    c2_.setZero(nt_);
    c2_.head(n_) = p.c;
  }

  /// Solves max c'x with structural bounds [lo, hi]. Returns false when
  /// infeasible; otherwise fills value and x (structural part).
  bool solve(const Eigen::VectorXd& lo_struct, const Eigen::VectorXd& hi_struct, double& value,
             Eigen::VectorXd& x_struct) {
    lo_.setZero(nt_);
    up_.setConstant(nt_, std::numeric_limits<double>::infinity());
    lo_.head(n_) = lo_struct;
    up_.head(n_) = hi_struct;
    for (int r = 0; r < m_; ++r)
      if (art_of_[r] >= 0) up_[art_of_[r]] = std::numeric_limits<double>::infinity();

    // Start: slacks basic on Le rows, artificials basic elsewhere; every
    // other variable nonbasic at its lower bound.
    basis_.resize(m_);
    state_.assign(nt_, AtLower);
    for (int r = 0; r < m_; ++r) {
      int bv = art_of_[r] >= 0 ? art_of_[r] : slack_of_[r];
      basis_[r] = bv;
      state_[bv] = Basic;
    }

    bool any_art = false;
    for (int r = 0; r < m_; ++r) any_art |= art_of_[r] >= 0;
    if (any_art) {
      Eigen::VectorXd c1 = Eigen::VectorXd::Zero(nt_);
      for (int r = 0; r < m_; ++r)
        if (art_of_[r] >= 0) c1[art_of_[r]] = -1.0;
      run(c1);
      double infeas = 0.0;
      for (int r = 0; r < m_; ++r)
        if (art_of_[r] >= 0) infeas += current_value(art_of_[r]);
      if (infeas > kFeasTol) return false;
      for (int r = 0; r < m_; ++r)
        if (art_of_[r] >= 0) up_[art_of_[r]] = 0.0;  // pin artificials at zero
    }
    run(c2_);
    x_struct = full_x().head(n_);
    value = c2_.head(n_).dot(x_struct);
    return true;
  }

 private:
  enum State : std::int8_t { AtLower, AtUpper, Basic };

  double current_value(int j) const {
    if (state_[j] == Basic) {
      for (int r = 0; r < m_; ++r)
        if (basis_[r] == j) return xB_[r];
    }
    return state_[j] == AtUpper ? up_[j] : lo_[j];
  }

  Eigen::VectorXd full_x() const {
    Eigen::VectorXd x(nt_);
    for (int j = 0; j < nt_; ++j) x[j] = state_[j] == AtUpper ? up_[j] : lo_[j];
    for (int r = 0; r < m_; ++r) x[basis_[r]] = xB_[r];
    return x;
  }

  void refactor() {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m_, m_);
    for (int r = 0; r < m_; ++r)
      for (Eigen::SparseMatrix<double>::InnerIterator it(A_, basis_[r]); it; ++it)
        B(it.row(), r) = it.value();
    Binv_ = B.partialPivLu().inverse();
    recompute_xb();
  }

  void recompute_xb() {
    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < nt_; ++j) {
      if (state_[j] == Basic) continue;
      const double xj = state_[j] == AtUpper ? up_[j] : lo_[j];
      if (xj == 0.0) continue;
      for (Eigen::SparseMatrix<double>::InnerIterator it(A_, j); it; ++it)
        rhs[it.row()] -= it.value() * xj;
    }
    xB_ = Binv_ * rhs;
  }

  /// Primal iterations for one objective. Dantzig pricing with a permanent
  /// switch to Bland's rule once the objective stalls long enough.
  void run(const Eigen::VectorXd& c) {
    refactor();
    bool bland = false;
    int since_progress = 0;
    int since_refactor = 0;
    const int stall_limit = 2 * m_ + 200;
    const long max_iter = 2000L + 200L * (m_ + nt_);
    for (long iter = 0; iter < max_iter; ++iter) {
      Eigen::VectorXd cb(m_);
      for (int r = 0; r < m_; ++r) cb[r] = c[basis_[r]];
      Eigen::VectorXd y = Binv_.transpose() * cb;
      Eigen::VectorXd d = c;
      d.noalias() -= A_.transpose() * y;

      int q = -1;
      double best = kReducedCostTol;
      for (int j = 0; j < nt_; ++j) {
        if (state_[j] == Basic || lo_[j] == up_[j]) continue;
        const double dj = d[j];
        const bool eligible = (state_[j] == AtLower && dj > kReducedCostTol) ||
                              (state_[j] == AtUpper && dj < -kReducedCostTol);
        if (!eligible) continue;
        if (bland) { q = j; break; }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          q = j;
        }
      }
      if (q < 0) return;  // optimal for this objective

      const double sigma = state_[q] == AtLower ? 1.0 : -1.0;
      Eigen::VectorXd w = Eigen::VectorXd::Zero(m_);
      for (Eigen::SparseMatrix<double>::InnerIterator it(A_, q); it; ++it)
        w.noalias() += it.value() * Binv_.col(it.row());

      double t = up_[q] - lo_[q];  // bound-to-bound flip cap
      int leave = -1;
      bool leave_to_upper = false;
      for (int r = 0; r < m_; ++r) {
        const double wr = sigma * w[r];
        const int bv = basis_[r];
        double cand;
        bool to_upper;
        if (wr > kPivotTol) {
          cand = (xB_[r] - lo_[bv]) / wr;
          to_upper = false;
        } else if (wr < -kPivotTol && std::isfinite(up_[bv])) {
          cand = (up_[bv] - xB_[r]) / (-wr);
          to_upper = true;
        } else {
          continue;
        }
        if (cand < -kFeasTol) cand = 0.0;
        if (cand < t - 1e-12 || (cand < t + 1e-12 && (leave < 0 || bv < basis_[leave]))) {
          t = cand;
          leave = r;
          leave_to_upper = to_upper;
        }
      }
      if (!std::isfinite(t)) throw std::runtime_error("bilp: relaxation is unbounded");
      if (t < 0.0) t = 0.0;

      if (t > 1e-12) since_progress = 0;
      else if (++since_progress > stall_limit) bland = true;

      xB_ -= (sigma * t) * w;
      if (leave < 0) {
        state_[q] = state_[q] == AtLower ? AtUpper : AtLower;  // pure bound flip
        continue;
      }
      const int out = basis_[leave];
      state_[out] = leave_to_upper ? AtUpper : AtLower;
      state_[q] = Basic;
      basis_[leave] = q;
      xB_[leave] = (sigma > 0 ? lo_[q] : up_[q]) + sigma * t;

      const double piv = w[leave];
      Binv_.row(leave) /= piv;
      for (int r = 0; r < m_; ++r)
        if (r != leave && std::abs(w[r]) > 0.0) Binv_.row(r) -= w[r] * Binv_.row(leave);

      if (++since_refactor >= kRefactorEvery) {
        refactor();
        since_refactor = 0;
      }
    }
    throw std::runtime_error("bilp: simplex iteration limit exceeded");
  }

  Eigen::Index n_;
  int m_ = 0, nt_ = 0;
  Eigen::SparseMatrix<double> A_;
  Eigen::VectorXd b_, c2_, lo_, up_, xB_;
  Eigen::MatrixXd Binv_;
  std::vector<int> basis_, slack_of_, art_of_;
  std::vector<std::int8_t> state_;
};

}  // namespace

LpResult solve_lp_relaxation(const BilpProblem& p, const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi) {
  check_problem(p);
  Simplex s(p);
  LpResult res;
  res.feasible = s.solve(lo, hi, res.value, res.x);
  return res;
}

BilpSolution solve_exhaustive(const BilpProblem& p) {
  check_problem(p);
  const int n = static_cast<int>(p.n());
  if (n > 24) throw std::invalid_argument("solve_exhaustive: refusing n > 24 variables");
  const auto start = std::chrono::steady_clock::now();
  BilpSolution sol;
  sol.nodes = std::int64_t(1) << n;
  std::vector<int> x(n);
  bool found = false;
  // Ascending mask order with x1 as the leading bit scans assignments in
  // lexicographic order, so keeping only strict improvements lands on the
  // lexicographically smallest optimum.
  for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << n); ++mask) {
    for (int j = 0; j < n; ++j) x[j] = (mask >> (n - 1 - j)) & 1;
    bool ok = true;
    for (const BilpRow& row : p.rows)
      if (!row_feasible(row, x, 1e-9)) { ok = false; break; }
    if (!ok) continue;
    const double v = objective_value(p, x);
    if (!found || v > sol.objective) {
      found = true;
      sol.objective = v;
      sol.x = x;
    }
  }
  sol.status = found ? SolveStatus::Optimal : SolveStatus::Infeasible;
  sol.bound = sol.objective;
  sol.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

namespace {

struct Node {
  double bound = 0.0;
  std::int64_t id = 0;
  std::vector<std::pair<int, int>> fixed;  // (variable, value)
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
    return a.id > b.id;                                // then oldest first
  }
};

bool lex_smaller(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

BilpSolution solve_branch_and_bound(const BilpProblem& p, const SolveOptions& opts) {
  check_problem(p);
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const int n = static_cast<int>(p.n());
  Simplex simplex(p);

  BilpSolution sol;
  bool have_inc = false;
  std::vector<int> inc_x;
  double inc_val = 0.0;

  auto offer = [&](const std::vector<int>& x) {
    if (!verify_assignment(p, x)) return;
    const double v = objective_value(p, x);
    if (!have_inc || v > inc_val || (v == inc_val && lex_smaller(x, inc_x))) {
      have_inc = true;
      inc_val = v;
      inc_x = x;
    }
  };

  if (static_cast<int>(opts.warm_start.size()) == n) offer(opts.warm_start);

  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
  std::int64_t next_id = 0;
  queue.push({std::numeric_limits<double>::infinity(), next_id++, {}});

  Eigen::VectorXd lo(n), hi(n), x;
  double best_open = std::numeric_limits<double>::infinity();
  double gap_pruned = -std::numeric_limits<double>::infinity();
  bool interrupted = false;

  while (!queue.empty()) {
    Node node = queue.top();
    queue.pop();
    best_open = node.bound;
    if (have_inc && node.bound <= inc_val + 1e-9) {
      best_open = inc_val;
      break;  // best-first: every remaining node is no better
    }
    if (elapsed() > opts.time_limit_s ||
        (opts.node_limit > 0 && sol.nodes >= opts.node_limit)) {
      interrupted = true;
      break;
    }

    lo.setZero();
    hi.setOnes();
    for (auto [j, v] : node.fixed) lo[j] = hi[j] = v;

    ++sol.nodes;
    double bound;
    if (!simplex.solve(lo, hi, bound, x)) continue;
    if (have_inc && bound <= inc_val + 1e-9) continue;
    if (have_inc && bound - inc_val <= opts.gap_tol) {
      gap_pruned = std::max(gap_pruned, bound);  // keep the dual bound honest
      continue;
    }

    int frac = -1;
    double frac_score = 1e-6;
    for (int j = 0; j < n; ++j) {
      const double f = std::min(x[j], 1.0 - x[j]);
      if (f > frac_score) {
        frac_score = f;
        frac = j;
      }
    }

    std::vector<int> rounded(n);
    for (int j = 0; j < n; ++j) rounded[j] = x[j] >= 0.5 ? 1 : 0;
    offer(rounded);

    if (frac < 0) continue;  // integral relaxation: offer() above recorded it

    Node child0{bound, next_id++, node.fixed};
    child0.fixed.emplace_back(frac, 0);
    Node child1{bound, next_id++, node.fixed};
    child1.fixed.emplace_back(frac, 1);
    queue.push(std::move(child0));
    queue.push(std::move(child1));
  }

  if (queue.empty()) best_open = have_inc ? inc_val : -std::numeric_limits<double>::infinity();

  if (!have_inc) {
    sol.status = SolveStatus::Infeasible;
  } else {
    sol.x = inc_x;
    sol.objective = inc_val;
    sol.bound = std::max({best_open, gap_pruned, inc_val});
    sol.gap = sol.bound - inc_val;
    sol.status = (!interrupted && sol.gap <= opts.gap_tol + 1e-9) ? SolveStatus::Optimal
                                                                  : SolveStatus::Feasible;
  }
  sol.wall_time_s = elapsed();
  return sol;
}

std::vector<int> greedy_max_coverage(const std::vector<Bitset>& columns, const Eigen::VectorXd& w,
                                     int k) {
  const int ncols = static_cast<int>(columns.size());
  if (k > ncols) throw std::invalid_argument("greedy_max_coverage: k exceeds column count");
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  Bitset covered(rows);
  std::vector<char> used(ncols, 0);
  std::vector<int> chosen;
  chosen.reserve(k);
  for (int step = 0; step < k; ++step) {
    int best = -1;
    double best_gain = -1.0;
    for (int i = 0; i < ncols; ++i) {
      if (used[i]) continue;
      double gain = 0.0;
      for (std::size_t j = 0; j < rows; ++j)
        if (columns[i].test(j) && !covered.test(j)) gain += w[j];
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    used[best] = 1;
    chosen.push_back(best);
    covered |= columns[best];
  }
  return chosen;
}

bool verify_assignment(const BilpProblem& p, const std::vector<int>& x, double tol) {
  if (static_cast<Eigen::Index>(x.size()) != p.n()) return false;
  for (int v : x)
    if (v != 0 && v != 1) return false;
  for (const BilpRow& row : p.rows) {
    bool integral = std::abs(row.b - std::round(row.b)) < 1e-12;
    for (Eigen::Index j = 0; integral && j < row.a.size(); ++j)
      integral = std::abs(row.a[j] - std::round(row.a[j])) < 1e-12;
    if (integral) {
      std::int64_t r = 0;
      for (Eigen::Index j = 0; j < row.a.size(); ++j)
        r += static_cast<std::int64_t>(std::llround(row.a[j])) * x[j];
      const std::int64_t b = std::llround(row.b);
      const bool ok = row.sense == Sense::Le ? r <= b : row.sense == Sense::Ge ? r >= b : r == b;
      if (!ok) return false;
    } else if (!row_feasible(row, x, tol)) {
      return false;
    }
  }
  return true;
}

void write_lp_format(const BilpProblem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  const auto name = [&](Eigen::Index j) {
    return p.names.size() == static_cast<std::size_t>(p.n()) ? p.names[j]
                                                             : "x" + std::to_string(j + 1);
  };
  const auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  const auto terms = [&](const Eigen::VectorXd& a) {
    std::string s;
    for (Eigen::Index j = 0; j < a.size(); ++j) {
      if (a[j] == 0.0) continue;
      if (s.empty())
        s += (a[j] < 0 ? "- " : "");
      else
        s += (a[j] < 0 ? " - " : " + ");
      s += num(std::abs(a[j])) + " " + name(j);
    }
    if (s.empty()) s = "0 " + name(0);
    return s;
  };
  out << "Maximize\n obj: " << terms(p.c) << "\nSubject To\n";
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const BilpRow& row = p.rows[r];
    const char* op = row.sense == Sense::Le ? "<=" : row.sense == Sense::Ge ? ">=" : "=";
    out << " c" << (r + 1) << ": " << terms(row.a) << " " << op << " " << num(row.b) << "\n";
  }
  out << "Binary\n";
  for (Eigen::Index j = 0; j < p.n(); ++j) out << " " << name(j);
  out << "\nEnd\n";
}

}  // namespace mmwp
