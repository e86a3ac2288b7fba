#include "permutope/polytope.hpp"

#include <algorithm>
#include <map>
#include <ostream>

namespace permutope {

VarIndex BlockShape::unflatten(std::size_t flat) const {
  const std::size_t row = flat / side();
  const std::size_t col = flat % side();
  return {row / n, row % n, col / n, col % n};
}

Rat Row::evaluate(std::span<const Rat> x) const {
  Rat s = 0;
  for (const auto& t : terms) s += t.coef * x[t.var];
  return s;
}

ConstraintSystem::ConstraintSystem(std::size_t num_vars, std::optional<BlockShape> shape)
    : num_vars_(num_vars), shape_(shape) {
  if (shape_ && shape_->num_vars() != num_vars_) {
    throw DimensionMismatch("block shape does not match variable count");
  }
}

std::size_t ConstraintSystem::add_row(std::string label, std::vector<Term> terms,
                                      Relation relation, Rat rhs) {
  std::map<std::size_t, Rat> merged;
  for (auto& t : terms) {
    if (t.var >= num_vars_) {
      throw std::out_of_range("variable " + std::to_string(t.var) + " out of range in row '" +
                              label + "'");
    }
    merged[t.var] += t.coef;
  }
  Row row{rows_.size(), std::move(label), {}, relation, std::move(rhs)};
  for (auto& [var, coef] : merged)
    if (coef != 0) row.terms.push_back({var, std::move(coef)});
  rows_.push_back(std::move(row));
  return rows_.back().id;
}

void ConstraintSystem::append(const ConstraintSystem& other) {
  if (other.num_vars_ != num_vars_) throw DimensionMismatch("appending rows over other variables");
  for (const auto& r : other.rows_) add_row(r.label, r.terms, r.relation, r.rhs);
}

std::size_t ConstraintSystem::count(std::string_view label) const {
  return static_cast<std::size_t>(
      std::count_if(rows_.begin(), rows_.end(), [&](const Row& r) { return r.label == label; }));
}

namespace {

// Rows sum to one and columns sum to one, in the (i,k) order.
void add_dscon(ConstraintSystem& sys, const BlockShape& s) {
  const std::size_t side = s.side();
  for (std::size_t r = 0; r < side; ++r) {
    std::vector<Term> terms;
    for (std::size_t c = 0; c < side; ++c) terms.push_back({r * side + c, 1});
    sys.add_row(std::string(kDscon), std::move(terms), Relation::Eq, 1);
  }
  for (std::size_t c = 0; c < side; ++c) {
    std::vector<Term> terms;
    for (std::size_t r = 0; r < side; ++r) terms.push_back({r * side + c, 1});
    sys.add_row(std::string(kDscon), std::move(terms), Relation::Eq, 1);
  }
}

void add_klcond(ConstraintSystem& sys, const BlockShape& s, KlcondVariant variant) {
  const std::size_t m = s.m;
  const std::size_t n = s.n;
  auto var = [&](std::size_t i, std::size_t k, std::size_t j, std::size_t l) {
    return s.flatten({i, k, j, l});
  };
  for (std::size_t i = 1; i < m; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = 0; l < n; ++l) {
        std::vector<Term> row_terms;
        std::vector<Term> col_terms;
        for (std::size_t j = 0; j < m; ++j) {
          row_terms.push_back({var(i, k, j, l), 1});
          row_terms.push_back({var(0, k, j, l), -1});
          col_terms.push_back({var(j, k, i, l), 1});
          if (variant == KlcondVariant::Printed) {
            col_terms.push_back({var(0, k, j, l), -1});
          } else {
            col_terms.push_back({var(j, k, 0, l), -1});
          }
        }
        sys.add_row(std::string(kKlcond), std::move(row_terms), Relation::Eq, 0);
        sys.add_row(std::string(kKlcond), std::move(col_terms), Relation::Eq, 0);
      }
    }
  }
}

void add_ijcond(ConstraintSystem& sys, const BlockShape& s) {
  const std::size_t m = s.m;
  const std::size_t n = s.n;
  auto var = [&](std::size_t i, std::size_t k, std::size_t j, std::size_t l) {
    return s.flatten({i, k, j, l});
  };
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        std::vector<Term> row_terms;
        std::vector<Term> col_terms;
        for (std::size_t l = 0; l < n; ++l) {
          row_terms.push_back({var(i, k, j, l), 1});
          row_terms.push_back({var(i, 0, j, l), -1});
          col_terms.push_back({var(i, l, j, k), 1});
          col_terms.push_back({var(i, 0, j, l), -1});
        }
        sys.add_row(std::string(kIjcond), std::move(row_terms), Relation::Eq, 0);
        sys.add_row(std::string(kIjcond), std::move(col_terms), Relation::Eq, 0);
      }
    }
  }
}

void require_positive(std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw std::invalid_argument("block dimensions must be at least 1");
}

}  // namespace

ConstraintSystem build_omega(std::size_t size) {
  if (size == 0) throw std::invalid_argument("Omega needs size >= 1");
  const BlockShape s{size, 1};
  ConstraintSystem sys(s.num_vars(), s);
  add_dscon(sys, s);
  return sys;
}

ConstraintSystem build_phi(std::size_t m, std::size_t n, KlcondVariant variant) {
  require_positive(m, n);
  const BlockShape s{m, n};
  ConstraintSystem sys(s.num_vars(), s);
  add_dscon(sys, s);
  add_klcond(sys, s, variant);
  add_ijcond(sys, s);
  return sys;
}

ConstraintSystem build_theta(std::size_t m, std::size_t n) {
  require_positive(m, n);
  const BlockShape s{m, n};
  ConstraintSystem sys(s.num_vars(), s);
  add_dscon(sys, s);
  add_ijcond(sys, s);
  return sys;
}

LambdaMembership lambda_member(const RatMatrix& a, bool require_nonneg) {
  if (!a.is_square()) throw DimensionMismatch("Lambda membership needs a square matrix");
  const std::size_t m = a.rows();
  if (require_nonneg) {
    for (const auto& e : a.entries())
      if (e < 0) return {};
  }
  auto row_sum = [&](std::size_t i) {
    Rat s = 0;
    for (std::size_t j = 0; j < m; ++j) s += a(i, j);
    return s;
  };
  auto col_sum = [&](std::size_t j) {
    Rat s = 0;
    for (std::size_t i = 0; i < m; ++i) s += a(i, j);
    return s;
  };
  const Rat scale = m == 0 ? Rat(0) : row_sum(0);
  for (std::size_t i = 1; i < m; ++i)
    if (row_sum(i) != scale || col_sum(i) != scale) return {};
  return {true, scale};
}

BlockMatrix::BlockMatrix(std::size_t m, std::size_t n)
    : m_(m), n_(n), blocks_(m * m, RatMatrix(n, n)) {}

BlockMatrix BlockMatrix::from_flat(const RatMatrix& c, std::size_t m, std::size_t n) {
  if (c.rows() != m * n || c.cols() != m * n) {
    throw DimensionMismatch("flat matrix is not " + std::to_string(m * n) + "x" +
                            std::to_string(m * n));
  }
  BlockMatrix b(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) b.block(i, j)(k, l) = c(i * n + k, j * n + l);
  return b;
}

RatMatrix BlockMatrix::to_flat() const {
  RatMatrix c(m_ * n_, m_ * n_);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < m_; ++j)
      for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t l = 0; l < n_; ++l) c(i * n_ + k, j * n_ + l) = block(i, j)(k, l);
  return c;
}

BlockMatrix ThetaDecomposition::recompose() const {
  const std::size_t m = weights.rows();
  const std::size_t n = blocks.empty() ? 0 : blocks.front().rows();
  BlockMatrix c(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) c.block(i, j) = weights(i, j) * block(i, j);
  return c;
}

ThetaDecomposition theta_decompose(const BlockMatrix& c) {
  const std::size_t m = c.m();
  const std::size_t n = c.n();
  ThetaDecomposition d{RatMatrix(m, m), {}};
  d.blocks.reserve(m * m);
  const RatMatrix uniform = RatMatrix::filled(n, n, Rat(1, static_cast<long>(n)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto lm = lambda_member(c.block(i, j));
      if (!lm.member) {
        throw NotAMember("block (" + std::to_string(i) + "," + std::to_string(j) +
                         ") has unequal row/column sums or a negative entry");
      }
      d.weights(i, j) = lm.scale;
      d.blocks.push_back(lm.scale == 0 ? uniform : Rat(1) / lm.scale * c.block(i, j));
    }
  }
  const auto outer = lambda_member(d.weights);
  if (!outer.member || outer.scale != 1) {
    throw NotAMember("block weights are not doubly stochastic");
  }
  return d;
}

BlockMatrix rosenberg(const Permutation& p, const Permutation& q, std::size_t n) {
  if (p.size() != n || q.size() != n) throw DimensionMismatch("rosenberg: permutation size != n");
  const RatMatrix ones = RatMatrix::filled(n, n, 1);
  for (const Permutation* perm : {&p, &q}) {
    const RatMatrix base = perm->matrix();
    RatMatrix power = base;
    RatMatrix sum = base;
    for (std::size_t e = 2; e <= n; ++e) {
      power = power * base;
      sum = sum + power;
    }
    if (sum != ones) throw NotCyclic("rosenberg: permutation is not a single n-cycle");
  }
  std::vector<RatMatrix> p_powers;
  std::vector<RatMatrix> q_powers;
  for (std::size_t e = 1; e <= n; ++e) {
    p_powers.push_back(p.power(e).matrix());
    q_powers.push_back(q.power(e).matrix());
  }
  const Rat scale(1, static_cast<long>(n));
  BlockMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d.block(i, j) = scale * (p_powers[i] * q_powers[j]);
  return d;
}

CheckReport check_point(const ConstraintSystem& sys, std::span<const Rat> x) {
  if (x.size() != sys.num_vars()) {
    throw DimensionMismatch("point has " + std::to_string(x.size()) + " entries, system has " +
                            std::to_string(sys.num_vars()) + " variables");
  }
  CheckReport report;
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (x[v] < 0) report.violations.push_back({Violation::kNonneg, "nonneg", v, x[v]});
  }
  for (const auto& row : sys.rows()) {
    Rat residual = row.evaluate(x) - row.rhs;
    const bool ok = row.relation == Relation::Eq ? residual == 0 : residual <= 0;
    if (!ok) report.violations.push_back({row.id, row.label, 0, std::move(residual)});
  }
  return report;
}

CheckReport check_point(const ConstraintSystem& sys, const RatMatrix& z) {
  return check_point(sys, z.entries());
}

std::string format_var(const ConstraintSystem& sys, std::size_t var) {
  if (!sys.shape()) return "x[" + std::to_string(var) + "]";
  const VarIndex v = sys.shape()->unflatten(var);
  return "z[" + std::to_string(v.i) + "," + std::to_string(v.k) + "," + std::to_string(v.j) +
         "," + std::to_string(v.l) + "]";
}

void write_system(std::ostream& os, const ConstraintSystem& sys) {
  for (const auto& row : sys.rows()) {
    os << row.id << ' ' << row.label << " :";
    for (const auto& t : row.terms) os << ' ' << format_rat(t.coef) << '*' << format_var(sys, t.var);
    os << (row.relation == Relation::Eq ? " = " : " <= ") << format_rat(row.rhs) << '\n';
  }
}

}  // namespace permutope
