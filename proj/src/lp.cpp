#include "permutope/lp.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

namespace permutope {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
// Consecutive degenerate pivots tolerated before DantzigBland switches to Bland.
constexpr std::size_t kDegenerateStreak = 32;

mpq_ptr raw(Rat& x) { return x.backend().data(); }
mpq_srcptr raw(const Rat& x) { return x.backend().data(); }

// A nonnegative-weight combination of rows (Eq rows may take any weight) with
// zero right-hand side whose live coefficients all share `sign`. Every
// variable with a nonzero coefficient in it must be zero.
struct FixRecord {
  std::vector<std::pair<std::size_t, Rat>> combo;
  int sign;
  std::vector<std::size_t> vars;
};

struct Presolved {
  std::vector<std::size_t> rows;       // surviving rows, original ids
  std::vector<std::size_t> vars;       // surviving variables, original ids
  std::vector<std::size_t> var_local;  // original id -> local id or kNone
  std::vector<FixRecord> fixes;        // in the order they were applied
  std::size_t conflict = kNone;        // row left empty with an unsatisfiable rhs
};

class Presolver {
 public:
  explicit Presolver(const ConstraintSystem& sys)
      : sys_(sys),
        var_alive_(sys.num_vars(), true),
        row_alive_(sys.size(), true),
        scratch_(sys.num_vars()) {}

  Presolved run() {
    bool changed = true;
    while (changed && out_.conflict == kNone) {
      changed = single_row_pass();
      if (out_.conflict == kNone && !changed) changed = cover_pass();
    }
    if (out_.conflict != kNone) return std::move(out_);
    out_.var_local.assign(sys_.num_vars(), kNone);
    for (std::size_t v = 0; v < sys_.num_vars(); ++v) {
      if (!var_alive_[v]) continue;
      out_.var_local[v] = out_.vars.size();
      out_.vars.push_back(v);
    }
    for (std::size_t r = 0; r < sys_.size(); ++r)
      if (row_alive_[r]) out_.rows.push_back(r);
    return std::move(out_);
  }

 private:
  bool single_row_pass() {
    bool changed = false;
    const auto& rows = sys_.rows();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!row_alive_[r]) continue;
      const Row& row = rows[r];
      bool pos = false;
      bool neg = false;
      for (const auto& t : row.terms) {
        if (!var_alive_[t.var]) continue;
        (t.coef > 0 ? pos : neg) = true;
      }
      if (!pos && !neg) {
        row_alive_[r] = false;
        const bool violated = row.relation == Relation::Eq ? row.rhs != 0 : row.rhs < 0;
        if (violated) {
          out_.conflict = r;
          return false;
        }
        continue;
      }
      if (row.relation == Relation::Le && !pos && row.rhs >= 0) {
        // sum of nonpositive terms <= nonnegative rhs holds for every x >= 0
        row_alive_[r] = false;
        continue;
      }
      if (row.rhs != 0) continue;
      if (pos != neg && (pos || row.relation == Relation::Eq)) {
        FixRecord fix{{{r, Rat(1)}}, pos ? 1 : -1, {}};
        for (const auto& t : row.terms) {
          if (!var_alive_[t.var]) continue;
          var_alive_[t.var] = false;
          fix.vars.push_back(t.var);
        }
        out_.fixes.push_back(std::move(fix));
        row_alive_[r] = false;
        changed = true;
      }
    }
    return changed;
  }

  // Rows r and s where s is an equality with positive live coefficients and
  // positive rhs covering the live support of r. r - (rhs_r/rhs_s) s has zero
  // rhs; when it is sign-definite its support is fixed at zero.
  bool cover_pass() {
    const auto& rows = sys_.rows();
    std::vector<std::vector<std::size_t>> covers_of(sys_.num_vars());
    for (std::size_t s = 0; s < rows.size(); ++s) {
      if (!row_alive_[s] || rows[s].relation != Relation::Eq || rows[s].rhs <= 0) continue;
      bool positive = true;
      for (const auto& t : rows[s].terms)
        if (var_alive_[t.var] && t.coef < 0) positive = false;
      if (!positive) continue;
      for (const auto& t : rows[s].terms)
        if (var_alive_[t.var]) covers_of[t.var].push_back(s);
    }

    bool changed = false;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!row_alive_[r]) continue;
      const Row& row = rows[r];
      std::size_t first = kNone;
      for (const auto& t : row.terms) {
        if (var_alive_[t.var]) {
          first = t.var;
          break;
        }
      }
      if (first == kNone) continue;
      for (std::size_t s : covers_of[first]) {
        if (s == r || !row_alive_[s] || !row_alive_[r]) continue;
        if (try_cover(r, s)) {
          changed = true;
          break;
        }
      }
    }
    return changed;
  }

  bool try_cover(std::size_t r, std::size_t s) {
    const Row& row = sys_.rows()[r];
    const Row& cover = sys_.rows()[s];
    for (const auto& t : cover.terms) scratch_[t.var] = 0;
    for (const auto& t : row.terms) {
      if (!var_alive_[t.var]) continue;
      scratch_[t.var] = t.coef;
    }
    // Support containment: every live term of r must appear in s.
    std::size_t inside = 0;
    for (const auto& t : cover.terms)
      if (var_alive_[t.var] && scratch_[t.var] != 0) ++inside;
    std::size_t live = 0;
    for (const auto& t : row.terms)
      if (var_alive_[t.var]) ++live;
    bool ok = inside == live;
    for (const auto& t : row.terms) scratch_[t.var] = 0;
    if (!ok) return false;

    const Rat lambda = row.rhs / cover.rhs;
    for (const auto& t : row.terms) scratch_[t.var] = t.coef;
    bool pos = false;
    bool neg = false;
    std::vector<std::size_t> hit;
    for (const auto& t : cover.terms) {
      if (!var_alive_[t.var]) continue;
      const Rat c = scratch_[t.var] - lambda * t.coef;
      if (c == 0) continue;
      (c > 0 ? pos : neg) = true;
      hit.push_back(t.var);
    }
    for (const auto& t : row.terms) scratch_[t.var] = 0;
    if (pos == neg) return false;  // mixed signs, or identically zero
    if (row.relation == Relation::Le && !pos) return false;

    FixRecord fix{{{r, Rat(1)}, {s, Rat(-lambda)}}, pos ? 1 : -1, std::move(hit)};
    for (std::size_t v : fix.vars) var_alive_[v] = false;
    out_.fixes.push_back(std::move(fix));
    return true;
  }

  const ConstraintSystem& sys_;
  std::vector<bool> var_alive_;
  std::vector<bool> row_alive_;
  Vec scratch_;
  Presolved out_;
};

Presolved presolve(const ConstraintSystem& sys, bool enabled) {
  if (!enabled) {
    Presolved out;
    out.var_local.resize(sys.num_vars());
    for (std::size_t v = 0; v < sys.num_vars(); ++v) {
      out.var_local[v] = v;
      out.vars.push_back(v);
    }
    for (std::size_t r = 0; r < sys.size(); ++r) out.rows.push_back(r);
    return out;
  }
  return Presolver(sys).run();
}

// y^T A_j for every column.
Vec column_products(const ConstraintSystem& sys, std::span<const Rat> y) {
  Vec col(sys.num_vars());
  for (const auto& row : sys.rows()) {
    const Rat& yr = y[row.id];
    if (yr == 0) continue;
    for (const auto& t : row.terms) col[t.var] += yr * t.coef;
  }
  return col;
}

// Extends a certificate that is valid on the surviving columns to the columns
// fixed by presolve. Fixing combinations have zero rhs, so y^T b is unchanged;
// later fixes are undone first because adding an earlier combination only
// raises the columns that were still alive when it fired.
void lift_certificate(const ConstraintSystem& sys, const Presolved& pre, Vec& y) {
  Vec col = column_products(sys, y);
  Vec combined(sys.num_vars());
  for (auto fix = pre.fixes.rbegin(); fix != pre.fixes.rend(); ++fix) {
    for (const auto& [r, w] : fix->combo)
      for (const auto& t : sys.rows()[r].terms) combined[t.var] += w * t.coef;
    Rat mu = 0;
    for (std::size_t v : fix->vars) {
      if (col[v] < 0) mu = std::max(mu, Rat(-col[v] / abs(combined[v])));
    }
    if (mu != 0) {
      const Rat step = fix->sign > 0 ? mu : Rat(-mu);
      for (const auto& [r, w] : fix->combo) {
        y[r] += step * w;
        for (const auto& t : sys.rows()[r].terms) col[t.var] += step * w * t.coef;
      }
    }
    for (const auto& [r, w] : fix->combo)
      for (const auto& t : sys.rows()[r].terms) combined[t.var] = 0;
  }
}

class Tableau {
 public:
  Tableau(const ConstraintSystem& sys, const Presolved& pre, const LpOptions& options)
      : options_(options), rows_(pre.rows.size()), structural_(pre.vars.size()) {
    const auto& all = sys.rows();
    std::size_t slacks = 0;
    for (std::size_t r : pre.rows)
      if (all[r].relation == Relation::Le) ++slacks;
    slack_begin_ = structural_;
    art_begin_ = structural_ + slacks;
    std::size_t artificials = 0;
    for (std::size_t r : pre.rows) {
      const Row& row = all[r];
      if (!(row.relation == Relation::Le && row.rhs >= 0)) ++artificials;
    }
    cols_ = art_begin_ + artificials;

    t_.assign(rows_, std::vector<Rat>(cols_));
    rhs_.resize(rows_);
    sigma_.resize(rows_);
    basis_.resize(rows_);
    origin_.resize(rows_);
    dead_.assign(rows_, false);

    std::size_t next_slack = slack_begin_;
    std::size_t next_art = art_begin_;
    for (std::size_t i = 0; i < rows_; ++i) {
      const Row& row = all[pre.rows[i]];
      const int sigma = row.rhs < 0 ? -1 : 1;
      sigma_[i] = sigma;
      for (const auto& term : row.terms) {
        const std::size_t local = pre.var_local[term.var];
        if (local == kNone) continue;
        t_[i][local] = sigma > 0 ? term.coef : Rat(-term.coef);
      }
      rhs_[i] = sigma > 0 ? row.rhs : Rat(-row.rhs);
      std::size_t slack = kNone;
      if (row.relation == Relation::Le) {
        slack = next_slack++;
        t_[i][slack] = sigma;
      }
      if (slack != kNone && sigma > 0) {
        origin_[i] = slack;
      } else {
        origin_[i] = next_art++;
        t_[i][origin_[i]] = 1;
      }
      basis_[i] = origin_[i];
    }
  }

  // Minimizes the sum of artificials. Returns true when it reaches zero.
  bool phase_one() {
    cost_.assign(cols_, 0);
    for (std::size_t j = art_begin_; j < cols_; ++j) cost_[j] = 1;
    price();
    run();
    Rat w = 0;
    for (std::size_t i = 0; i < rows_; ++i)
      if (is_artificial(basis_[i])) w += rhs_[i];
    return w == 0;
  }

  // Row multipliers in the caller's orientation: y^T A >= 0, y^T b < 0.
  Vec certificate() const {
    Vec y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      // Phase-one dual: cost(origin) - reduced cost(origin).
      Rat dual = cost_[origin_[i]] - d_[origin_[i]];
      y[i] = sigma_[i] > 0 ? Rat(-dual) : dual;
    }
    return y;
  }

  Vec primal() const {
    Vec x(structural_);
    for (std::size_t i = 0; i < rows_; ++i)
      if (basis_[i] < structural_) x[basis_[i]] = rhs_[i];
    return x;
  }

  // After a successful phase one: pivot zero-level artificials out, or retire
  // their rows when they carry no structural or slack entries.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      std::size_t col = kNone;
      for (std::size_t j = 0; j < art_begin_; ++j) {
        if (t_[i][j] != 0) {
          col = j;
          break;
        }
      }
      if (col == kNone) {
        dead_[i] = true;
      } else {
        pivot(i, col);
      }
    }
  }

  // Minimizes `cost` over structural variables (slacks cost nothing).
  void phase_two(const Vec& structural_cost) {
    cost_.assign(cols_, 0);
    std::copy(structural_cost.begin(), structural_cost.end(), cost_.begin());
    price();
    run();
  }

  std::size_t pivots() const { return pivots_; }

 private:
  bool is_artificial(std::size_t col) const { return col >= art_begin_; }

  void price() {
    d_ = cost_;
    for (std::size_t i = 0; i < rows_; ++i) {
      const Rat& cb = cost_[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j)
        if (t_[i][j] != 0) d_[j] -= cb * t_[i][j];
    }
  }

  std::size_t choose_entering(bool bland) const {
    std::size_t best = kNone;
    for (std::size_t j = 0; j < art_begin_; ++j) {
      if (d_[j] >= 0) continue;
      if (bland) return j;
      if (best == kNone || d_[j] < d_[best]) best = j;
    }
    return best;
  }

  // Ratio test under the symbolic perturbation b + (eps, eps^2, ...): ties in
  // rhs/t are broken by the rows of B^-1 (the origin columns) scaled by 1/t.
  bool lex_less(std::size_t a, std::size_t b, std::size_t col) const {
    const Rat& ta = t_[a][col];
    const Rat& tb = t_[b][col];
    auto cmp = [&](const Rat& xa, const Rat& xb) {
      if (xa == 0 && xb == 0) return 0;
      mpq_mul(raw(lhs_), raw(xa), raw(tb));
      mpq_mul(raw(rhs_tmp_), raw(xb), raw(ta));
      return mpq_cmp(raw(lhs_), raw(rhs_tmp_));
    };
    if (const int c = cmp(rhs_[a], rhs_[b]); c != 0) return c < 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const std::size_t o = origin_[r];
      if (const int c = cmp(t_[a][o], t_[b][o]); c != 0) return c < 0;
    }
    return basis_[a] < basis_[b];
  }

  std::size_t choose_leaving_lex(std::size_t col) const {
    std::size_t best = kNone;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (dead_[i] || t_[i][col] <= 0) continue;
      if (best == kNone || lex_less(i, best, col)) best = i;
    }
    return best;
  }

  std::size_t choose_leaving(std::size_t col) const {
    if (options_.rule == PivotRule::Lexicographic) return choose_leaving_lex(col);
    std::size_t best = kNone;
    Rat best_ratio;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (dead_[i] || t_[i][col] <= 0) continue;
      Rat ratio = rhs_[i] / t_[i][col];
      if (best == kNone || ratio < best_ratio ||
          (ratio == best_ratio && basis_[i] < basis_[best])) {
        best = i;
        best_ratio = std::move(ratio);
      }
    }
    return best;
  }

  void run() {
    std::size_t streak = 0;
    while (true) {
      const bool bland = options_.rule == PivotRule::Bland ||
                         (options_.rule == PivotRule::DantzigBland && streak >= kDegenerateStreak);
      const std::size_t col = choose_entering(bland);
      if (col == kNone) return;
      const std::size_t row = choose_leaving(col);
      if (row == kNone) throw Unbounded("objective is unbounded on the feasible set");
      if (pivots_ >= options_.pivot_cap) {
        throw ResourceCapExceeded("simplex exceeded the pivot cap of " +
                                  std::to_string(options_.pivot_cap));
      }
      streak = rhs_[row] == 0 ? streak + 1 : 0;
      pivot(row, col);
    }
  }

  void pivot(std::size_t p, std::size_t c) {
    ++pivots_;
    std::vector<Rat>& prow = t_[p];
    const Rat inv = 1 / prow[c];
    nz_.clear();
    for (std::size_t j = 0; j < cols_; ++j) {
      if (prow[j] == 0) continue;
      nz_.push_back(j);
      mpq_mul(raw(prow[j]), raw(prow[j]), raw(inv));
    }
    rhs_[p] *= inv;

    Rat f;
    Rat tmp;
    auto eliminate = [&](std::vector<Rat>& target, Rat* target_rhs) {
      f = target[c];
      if (f == 0) return;
      for (std::size_t j : nz_) {
        mpq_mul(raw(tmp), raw(f), raw(prow[j]));
        mpq_sub(raw(target[j]), raw(target[j]), raw(tmp));
      }
      if (target_rhs != nullptr && rhs_[p] != 0) {
        mpq_mul(raw(tmp), raw(f), raw(rhs_[p]));
        mpq_sub(raw(*target_rhs), raw(*target_rhs), raw(tmp));
      }
    };
    for (std::size_t i = 0; i < rows_; ++i)
      if (i != p) eliminate(t_[i], &rhs_[i]);
    eliminate(d_, nullptr);
    basis_[p] = c;
  }

  const LpOptions& options_;
  std::size_t rows_;
  std::size_t structural_;
  std::size_t slack_begin_ = 0;
  std::size_t art_begin_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<Rat>> t_;
  std::vector<Rat> rhs_;
  std::vector<int> sigma_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> origin_;
  std::vector<bool> dead_;
  std::vector<Rat> cost_;
  std::vector<Rat> d_;
  std::vector<std::size_t> nz_;
  mutable Rat lhs_;
  mutable Rat rhs_tmp_;
  std::size_t pivots_ = 0;
};

Vec expand(const Presolved& pre, std::size_t num_vars, const Vec& local) {
  Vec x(num_vars);
  for (std::size_t i = 0; i < pre.vars.size(); ++i) x[pre.vars[i]] = local[i];
  return x;
}

LpOutcome infeasible_from_conflict(const ConstraintSystem& sys, const Presolved& pre) {
  Vec y(sys.size());
  const Row& row = sys.rows()[pre.conflict];
  // Eq with rhs != 0 or Le with rhs < 0; the row has no live terms left.
  y[row.id] = row.rhs > 0 ? Rat(-1) : Rat(1);
  lift_certificate(sys, pre, y);
  return {LpStatus::Infeasible, std::nullopt, std::move(y), 0};
}

}  // namespace

LpOptions LpOptions::from_env() {
  LpOptions options;
  if (const char* cap = std::getenv(kPivotCapEnv); cap != nullptr && *cap != '\0') {
    options.pivot_cap = std::stoull(cap);
  }
  return options;
}

LpOutcome solve_feasibility(const ConstraintSystem& sys, const LpOptions& options) {
  const Presolved pre = presolve(sys, options.presolve);
  if (pre.conflict != kNone) return infeasible_from_conflict(sys, pre);

  Tableau tableau(sys, pre, options);
  if (tableau.phase_one()) {
    return {LpStatus::Feasible, expand(pre, sys.num_vars(), tableau.primal()), std::nullopt,
            tableau.pivots()};
  }
  const Vec local = tableau.certificate();
  Vec y(sys.size());
  for (std::size_t i = 0; i < pre.rows.size(); ++i) y[pre.rows[i]] = local[i];
  lift_certificate(sys, pre, y);
  if (const auto check = verify_farkas(sys, y); !check.ok) {
    throw std::logic_error("simplex produced an invalid infeasibility certificate: " +
                           check.detail);
  }
  return {LpStatus::Infeasible, std::nullopt, std::move(y), tableau.pivots()};
}

LpOptimum maximize(const ConstraintSystem& sys, const SparseObjective& objective,
                   const LpOptions& options) {
  const Presolved pre = presolve(sys, options.presolve);
  if (pre.conflict != kNone) throw InfeasibleInput("maximize: constraint system is infeasible");

  Tableau tableau(sys, pre, options);
  if (!tableau.phase_one()) throw InfeasibleInput("maximize: constraint system is infeasible");
  tableau.drive_out_artificials();

  Vec cost(pre.vars.size());
  for (const auto& t : objective) {
    if (t.var >= sys.num_vars()) throw std::out_of_range("objective variable out of range");
    if (const std::size_t local = pre.var_local[t.var]; local != kNone) cost[local] -= t.coef;
  }
  tableau.phase_two(cost);
  LpOptimum opt;
  opt.argmax = expand(pre, sys.num_vars(), tableau.primal());
  opt.value = evaluate(objective, opt.argmax);
  opt.pivots = tableau.pivots();
  return opt;
}

CertificateCheck verify_farkas(const ConstraintSystem& sys, std::span<const Rat> y) {
  if (y.size() != sys.size()) {
    return {false, "certificate has " + std::to_string(y.size()) + " multipliers for " +
                       std::to_string(sys.size()) + " rows"};
  }
  for (const auto& row : sys.rows()) {
    if (row.relation == Relation::Le && y[row.id] < 0) {
      return {false, "negative multiplier on inequality row " + std::to_string(row.id)};
    }
  }
  const Vec col = column_products(sys, y);
  for (std::size_t v = 0; v < col.size(); ++v) {
    if (col[v] < 0) {
      return {false, "combined coefficient of " + format_var(sys, v) + " is " +
                         format_rat(col[v]) + " < 0"};
    }
  }
  Rat rhs = 0;
  for (const auto& row : sys.rows()) rhs += y[row.id] * row.rhs;
  if (rhs >= 0) return {false, "combined right-hand side " + format_rat(rhs) + " is not < 0"};
  return {true, "0 <= y^T A x <= " + format_rat(rhs) + " < 0"};
}

Rat evaluate(const SparseObjective& objective, std::span<const Rat> x) {
  Rat s = 0;
  for (const auto& t : objective) s += t.coef * x[t.var];
  return s;
}

}  // namespace permutope
