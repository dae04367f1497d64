#pragma once

// Total-variation primitives on probability vectors and conditional
// probability tables. Everything here is header-only and templated on the
// scalar type; the rest of the library uses the double aliases at the bottom.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tvrobust/errors.hpp"

namespace tvrobust {

inline constexpr double kProbTolerance = 1e-9;
inline constexpr double kTieTolerance = 1e-12;

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using RowTable = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Pairwise row TV distances of one table; symmetric, zero diagonal.
template <typename Scalar>
using VariationMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

inline std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

template <typename Derived>
std::string mass_problem(const Eigen::MatrixBase<Derived>& mass, double tol) {
  using Scalar = typename Derived::Scalar;
  Scalar sum = Scalar(0);
  for (Index i = 0; i < mass.size(); ++i) {
    const Scalar v = mass(i);
    if (!std::isfinite(static_cast<double>(v))) return "entry " + std::to_string(i) + " is not finite";
    if (v < Scalar(0)) return "entry " + std::to_string(i) + " is negative";
    sum += v;
  }
  if (std::abs(static_cast<double>(sum) - 1.0) > tol) {
    return "entries sum to " + std::to_string(static_cast<double>(sum)) + ", not 1";
  }
  return {};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// ProbVector: a pmf over named, ordered levels. Construction is checked and
// never renormalizes.
template <typename Scalar>
class ProbVector {
 public:
  using Vector = VectorX<Scalar>;

  ProbVector() = default;

  ProbVector(std::vector<std::string> levels, Vector mass)
      : levels_(std::move(levels)), mass_(std::move(mass)) {
    if (mass_.size() == 0) throw DomainError("probability vector must have at least one entry");
    if (static_cast<Index>(levels_.size()) != mass_.size()) {
      throw DomainError("probability vector has " + std::to_string(levels_.size()) + " labels but " +
                        std::to_string(mass_.size()) + " entries");
    }
    if (auto why = detail::mass_problem(mass_, kProbTolerance); !why.empty()) {
      throw DomainError("invalid probability vector: " + why);
    }
  }

  ProbVector(std::vector<std::string> levels, std::initializer_list<Scalar> mass)
      : ProbVector(std::move(levels), from_list(mass)) {}

  // Levels default to "0", "1", ...
  static ProbVector unlabeled(Vector mass) {
    std::vector<std::string> labels(static_cast<std::size_t>(mass.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = std::to_string(i);
    return ProbVector(std::move(labels), std::move(mass));
  }
  static ProbVector unlabeled(std::initializer_list<Scalar> mass) { return unlabeled(from_list(mass)); }

  const std::vector<std::string>& levels() const noexcept { return levels_; }
  const Vector& mass() const noexcept { return mass_; }
  Index size() const noexcept { return mass_.size(); }
  Scalar operator[](Index i) const { return mass_(i); }

  friend bool operator==(const ProbVector& a, const ProbVector& b) {
    return a.levels_ == b.levels_ && a.mass_.size() == b.mass_.size() && a.mass_ == b.mass_;
  }

 private:
  static Vector from_list(std::initializer_list<Scalar> mass) {
    Vector v(static_cast<Index>(mass.size()));
    Index i = 0;
    for (Scalar x : mass) v(i++) = x;
    return v;
  }

  std::vector<std::string> levels_;
  Vector mass_;
};

// ---------------------------------------------------------------------------
// CondTable: P(child | parents). Row r corresponds to the parent configuration
// whose mixed-radix encoding is r, with the FIRST parent most significant.
template <typename Scalar>
class CondTable {
 public:
  using Table = RowTable<Scalar>;
  struct Unchecked {};

  CondTable() = default;

  CondTable(std::string child, std::vector<std::string> child_levels, std::vector<std::string> parents,
            std::vector<std::vector<std::string>> parent_levels, Table table)
      : CondTable(Unchecked{}, std::move(child), std::move(child_levels), std::move(parents),
                  std::move(parent_levels), std::move(table)) {
    if (auto issues = inspect(); !issues.empty()) {
      throw DomainError("invalid table for '" + child_ + "': " + issues.front().detail);
    }
  }

  // No invariant checks; used when a malformed model must be represented so
  // that validation can report on it.
  CondTable(Unchecked, std::string child, std::vector<std::string> child_levels, std::vector<std::string> parents,
            std::vector<std::vector<std::string>> parent_levels, Table table)
      : child_(std::move(child)),
        child_levels_(std::move(child_levels)),
        parents_(std::move(parents)),
        parent_levels_(std::move(parent_levels)),
        table_(std::move(table)) {}

  enum class IssueKind { Shape, Negative, RowSum };
  struct Issue {
    IssueKind kind;
    Index row;  // -1 for whole-table shape issues
    std::string detail;
  };

  std::vector<Issue> inspect(double tol = kProbTolerance) const {
    std::vector<Issue> out;
    if (parents_.size() != parent_levels_.size()) {
      out.push_back({IssueKind::Shape, -1,
                     std::to_string(parents_.size()) + " parents but " + std::to_string(parent_levels_.size()) +
                         " parent level lists"});
      return out;
    }
    if (child_levels_.empty()) out.push_back({IssueKind::Shape, -1, "child has no levels"});
    if (table_.cols() != static_cast<Index>(child_levels_.size())) {
      out.push_back({IssueKind::Shape, -1,
                     "table has " + std::to_string(table_.cols()) + " columns, expected " +
                         std::to_string(child_levels_.size())});
    }
    if (table_.rows() != expected_rows()) {
      out.push_back({IssueKind::Shape, -1,
                     "table has " + std::to_string(table_.rows()) + " rows, expected " +
                         std::to_string(expected_rows())});
    }
    if (!out.empty()) return out;
    for (Index r = 0; r < table_.rows(); ++r) {
      auto why = detail::mass_problem(table_.row(r), tol);
      if (why.empty()) continue;
      const bool negative = why.find("negative") != std::string::npos || why.find("finite") != std::string::npos;
      out.push_back({negative ? IssueKind::Negative : IssueKind::RowSum, r, "row " + std::to_string(r) + ": " + why});
    }
    return out;
  }

  const std::string& child() const noexcept { return child_; }
  const std::vector<std::string>& child_levels() const noexcept { return child_levels_; }
  const std::vector<std::string>& parents() const noexcept { return parents_; }
  const std::vector<std::vector<std::string>>& parent_levels() const noexcept { return parent_levels_; }
  const Table& table() const noexcept { return table_; }

  Index rows() const noexcept { return table_.rows(); }
  Index cols() const noexcept { return table_.cols(); }
  auto row(Index r) const { return table_.row(r); }

  ProbVector<Scalar> row_vector(Index r) const { return ProbVector<Scalar>(child_levels_, table_.row(r).transpose()); }

  Index expected_rows() const {
    Index n = 1;
    for (const auto& lv : parent_levels_) n *= static_cast<Index>(lv.size());
    return n;
  }

  std::vector<std::size_t> parent_cardinalities() const {
    std::vector<std::size_t> out;
    out.reserve(parent_levels_.size());
    for (const auto& lv : parent_levels_) out.push_back(lv.size());
    return out;
  }

  Index row_index(std::span<const std::size_t> config) const {
    if (config.size() != parent_levels_.size()) throw DomainError("configuration length does not match parent count");
    Index r = 0;
    for (std::size_t j = 0; j < config.size(); ++j) {
      if (config[j] >= parent_levels_[j].size()) throw DomainError("parent level index out of range");
      r = r * static_cast<Index>(parent_levels_[j].size()) + static_cast<Index>(config[j]);
    }
    return r;
  }

  std::vector<std::size_t> config_of(Index r) const {
    if (r < 0 || r >= expected_rows()) throw DomainError("row index out of range");
    std::vector<std::size_t> config(parent_levels_.size());
    for (std::size_t j = parent_levels_.size(); j-- > 0;) {
      const auto card = static_cast<Index>(parent_levels_[j].size());
      config[j] = static_cast<std::size_t>(r % card);
      r /= card;
    }
    return config;
  }

  // "yes,below" style label for a row; "(root)" when there are no parents.
  std::string row_label(Index r) const {
    if (parents_.empty()) return "(root)";
    const auto config = config_of(r);
    std::vector<std::string> parts;
    for (std::size_t j = 0; j < config.size(); ++j) parts.push_back(parent_levels_[j][config[j]]);
    return detail::join(parts, ",");
  }

  friend bool operator==(const CondTable& a, const CondTable& b) {
    return a.child_ == b.child_ && a.child_levels_ == b.child_levels_ && a.parents_ == b.parents_ &&
           a.parent_levels_ == b.parent_levels_ && a.table_.rows() == b.table_.rows() &&
           a.table_.cols() == b.table_.cols() && a.table_ == b.table_;
  }

 private:
  std::string child_;
  std::vector<std::string> child_levels_;
  std::vector<std::string> parents_;
  std::vector<std::vector<std::string>> parent_levels_;
  Table table_;
};

// Maximum over row pairs together with the lowest-index pair attaining it.
template <typename Scalar>
struct RowPairMax {
  Scalar value{0};
  Index first = 0;
  Index second = 0;
};

// ---------------------------------------------------------------------------
// Kernels.

// Half the L1 distance. Summation is left to right over entries.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar tv_distance(const Eigen::MatrixBase<DerivedA>& p, const Eigen::MatrixBase<DerivedB>& q) {
  using Scalar = typename DerivedA::Scalar;
  if (p.size() != q.size()) {
    throw DomainError("tv_distance: dimension mismatch (" + std::to_string(p.size()) + " vs " +
                      std::to_string(q.size()) + ")");
  }
  Scalar sum = Scalar(0);
  for (Index i = 0; i < p.size(); ++i) sum += std::abs(p(i) - q(i));
  return sum / Scalar(2);
}

template <typename Scalar>
Scalar tv_distance(const ProbVector<Scalar>& p, const ProbVector<Scalar>& q) {
  if (p.levels() != q.levels()) throw DomainError("tv_distance: level sets differ");
  return tv_distance(p.mass(), q.mass());
}

namespace detail {

template <typename Scalar>
void require_same_columns(const CondTable<Scalar>& P, const CondTable<Scalar>& Q, const char* op) {
  if (P.child_levels() != Q.child_levels()) {
    throw DomainError(std::string(op) + ": child levels differ");
  }
}

template <typename Scalar>
void require_same_shape(const CondTable<Scalar>& P, const CondTable<Scalar>& Q, const char* op) {
  require_same_columns(P, Q, op);
  if (P.parents() != Q.parents() || P.parent_levels() != Q.parent_levels() || P.rows() != Q.rows()) {
    throw DomainError(std::string(op) + ": tables differ in shape or parent order");
  }
}

// Max over all (i, j) in the candidate set, with the lowest pair (in
// iteration order) among values within kTieTolerance of the max.
template <typename Scalar, typename PairFn, typename Visit>
RowPairMax<Scalar> pair_max(Visit&& visit_pairs, PairFn&& tv) {
  RowPairMax<Scalar> best;
  bool any = false;
  visit_pairs([&](Index i, Index j) {
    const Scalar v = tv(i, j);
    if (!any || v > best.value) {
      best = {v, i, j};
      any = true;
    }
  });
  if (!any) return best;
  const Scalar top = best.value;
  bool found = false;
  visit_pairs([&](Index i, Index j) {
    if (found) return;
    if (tv(i, j) >= top - Scalar(kTieTolerance)) {
      best.first = i;
      best.second = j;
      found = true;
    }
  });
  return best;
}

}  // namespace detail

// d_V^+(P, Q): the largest TV between aligned rows.
template <typename Scalar>
Scalar cpt_tv_plus(const CondTable<Scalar>& P, const CondTable<Scalar>& Q) {
  detail::require_same_shape(P, Q, "cpt_tv_plus");
  Scalar best = Scalar(0);
  for (Index r = 0; r < P.rows(); ++r) best = std::max(best, tv_distance(P.row(r), Q.row(r)));
  return best;
}

// d_V^*(P, Q): the largest TV between any row of P and any row of Q.
template <typename Scalar>
RowPairMax<Scalar> cpt_superbound(const CondTable<Scalar>& P, const CondTable<Scalar>& Q) {
  detail::require_same_columns(P, Q, "cpt_superbound");
  if (P.rows() != Q.rows()) throw DomainError("cpt_superbound: row counts differ");
  auto visit = [&](auto&& f) {
    for (Index i = 0; i < P.rows(); ++i)
      for (Index j = 0; j < Q.rows(); ++j) f(i, j);
  };
  return detail::pair_max<Scalar>(visit, [&](Index i, Index j) { return tv_distance(P.row(i), Q.row(j)); });
}

template <typename Scalar>
RowPairMax<Scalar> diameter_witness(const CondTable<Scalar>& P) {
  auto visit = [&](auto&& f) {
    for (Index i = 0; i < P.rows(); ++i)
      for (Index j = i + 1; j < P.rows(); ++j) f(i, j);
  };
  return detail::pair_max<Scalar>(visit, [&](Index i, Index j) { return tv_distance(P.row(i), P.row(j)); });
}

// d^+(P). Zero iff all rows coincide, one iff some pair of rows has disjoint support.
template <typename Scalar>
Scalar diameter(const CondTable<Scalar>& P) {
  return diameter_witness(P).value;
}

// d^{I+}(P): the diameter restricted to the rows in `rows`.
template <typename Scalar>
Scalar local_diameter(const CondTable<Scalar>& P, std::span<const Index> rows) {
  if (rows.empty()) throw DomainError("local_diameter: empty row set");
  for (Index r : rows) {
    if (r < 0 || r >= P.rows()) throw DomainError("local_diameter: row index " + std::to_string(r) + " out of range");
  }
  Scalar best = Scalar(0);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b) best = std::max(best, tv_distance(P.row(rows[a]), P.row(rows[b])));
  return best;
}

template <typename Scalar>
Scalar local_diameter(const CondTable<Scalar>& P, std::initializer_list<Index> rows) {
  return local_diameter(P, std::span<const Index>(rows.begin(), rows.size()));
}

template <typename Scalar>
VariationMatrixT<Scalar> variation_matrix(const CondTable<Scalar>& P) {
  const Index n = P.rows();
  VariationMatrixT<Scalar> D = VariationMatrixT<Scalar>::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) D(i, j) = D(j, i) = tv_distance(P.row(i), P.row(j));
  return D;
}

// Per-parent diameter: the largest TV between rows that differ only in the
// level of parent `j`, maximised over configurations of the other parents.
template <typename Scalar>
Scalar parent_diameter(const CondTable<Scalar>& P, std::size_t j) {
  if (j >= P.parents().size()) {
    throw DomainError("parent_diameter: parent index " + std::to_string(j) + " out of range for '" + P.child() + "'");
  }
  const auto cards = P.parent_cardinalities();
  Index stride = 1;
  for (std::size_t k = j + 1; k < cards.size(); ++k) stride *= static_cast<Index>(cards[k]);
  const auto card_j = static_cast<Index>(cards[j]);
  Scalar best = Scalar(0);
  for (Index r = 0; r < P.rows(); ++r) {
    const Index level = (r / stride) % card_j;
    if (level != 0) continue;  // r is the base row of its group
    for (Index a = 0; a < card_j; ++a)
      for (Index b = a + 1; b < card_j; ++b)
        best = std::max(best, tv_distance(P.row(r + a * stride), P.row(r + b * stride)));
  }
  return best;
}

// Convex combination sum_i w_i * rows_i.
template <typename Scalar>
ProbVector<Scalar> mix(const ProbVector<Scalar>& weights, const std::vector<ProbVector<Scalar>>& rows) {
  if (static_cast<std::size_t>(weights.size()) != rows.size()) {
    throw DomainError("mix: " + std::to_string(weights.size()) + " weights for " + std::to_string(rows.size()) +
                      " rows");
  }
  if (rows.empty()) throw DomainError("mix: no rows");
  const auto& levels = rows.front().levels();
  VectorX<Scalar> out = VectorX<Scalar>::Zero(rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].levels() != levels) throw DomainError("mix: rows have different level sets");
    out += weights[static_cast<Index>(i)] * rows[i].mass();
  }
  return ProbVector<Scalar>(levels, std::move(out));
}

// Margin of the child when the parents have margin `pi`: rho = pi * P.
template <typename Scalar>
ProbVector<Scalar> push_forward(const ProbVector<Scalar>& pi, const CondTable<Scalar>& P) {
  if (pi.size() != P.rows()) {
    throw DomainError("push_forward: margin has " + std::to_string(pi.size()) + " entries, table has " +
                      std::to_string(P.rows()) + " rows");
  }
  VectorX<Scalar> rho = (pi.mass().transpose() * P.table()).transpose();
  return ProbVector<Scalar>(P.child_levels(), std::move(rho));
}

using ProbVec = ProbVector<double>;
using Cpt = CondTable<double>;
using VariationMatrix = VariationMatrixT<double>;

}  // namespace tvrobust
