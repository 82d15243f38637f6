#include "sosgap/sos_program.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sosgap/error.hpp"

namespace sosgap {

namespace {

void check_program_args(const NoisyMatrix& x, int s) {
  if (s < 2 || s > x.d()) fail(ErrorKind::InvalidParams, "need 2 <= s_star <= d");
}

std::size_t cell(int dim, int r, int c) {
  return static_cast<std::size_t>(r) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(c);
}

// Fills dim, var_count, entry_map and the pair objective of a set-indexed
// program.
SosProgram set_indexed_skeleton(const NoisyMatrix& x, int s, const SubsetIndexer& idx) {
  SosProgram p;
  p.dim = idx.row_count();
  p.var_count = idx.var_count();
  p.scale = static_cast<double>(s) * static_cast<double>(s - 1);
  p.entry_map.resize(static_cast<std::size_t>(p.dim) * static_cast<std::size_t>(p.dim));
  for (int r = 0; r < p.dim; ++r) {
    for (int c = r; c < p.dim; ++c) {
      const int v = idx.var_index(idx.row_set(r) | idx.row_set(c));
      p.entry_map[cell(p.dim, r, c)] = v;
      p.entry_map[cell(p.dim, c, r)] = v;
    }
  }
  for (int i = 0; i < x.d(); ++i) {
    for (int j = i + 1; j < x.d(); ++j) {
      const double xij = x(i, j);
      if (xij != 0.0) p.objective.push_back({idx.var_index(singleton(i) | singleton(j)), 2.0 * xij});
    }
  }
  p.constraints.push_back({{{idx.var_index(0), 1.0}}, 1.0});
  return p;
}

// sum_{i not in S} y_{S+i} - (s - |S|) y_S = 0
LinearConstraint row_sum_constraint(const SubsetIndexer& idx, SubsetKey set, int s) {
  LinearConstraint c;
  for (int i = 0; i < idx.d(); ++i) {
    if (set & singleton(i)) continue;
    c.terms.push_back({idx.var_index(set | singleton(i)), 1.0});
  }
  const int weight = s - subset_size(set);
  if (weight != 0) c.terms.push_back({idx.var_index(set), -static_cast<double>(weight)});
  c.rhs = 0.0;
  return c;
}

}  // namespace

SosProgram assemble_level(const NoisyMatrix& x, int s, int ell, const IndexerLimits& limits) {
  check_program_args(x, s);
  if (ell < 1) fail(ErrorKind::InvalidParams, "ell must be >= 1");
  const SubsetIndexer idx(x.d(), ell, limits);
  SosProgram p = set_indexed_skeleton(x, s, idx);
  for (int v = 0; v < idx.var_count(); ++v) {
    const SubsetKey set = idx.var_set(v);
    if (subset_size(set) <= 2 * ell - 1) p.constraints.push_back(row_sum_constraint(idx, set, s));
  }
  return p;
}

SosProgram assemble_reduced_basic(const NoisyMatrix& x, int s) {
  check_program_args(x, s);
  const SubsetIndexer idx(x.d(), 1);
  SosProgram p = set_indexed_skeleton(x, s, idx);
  p.constraints.push_back(row_sum_constraint(idx, 0, s));
  return p;
}

SosProgram assemble_basic(const NoisyMatrix& x, int s) {
  check_program_args(x, s);
  const int n = x.d() + 1;
  SosProgram p;
  p.dim = n;
  p.scale = static_cast<double>(s) * static_cast<double>(s - 1);
  // One variable per upper cell (r <= c), row-major.
  std::vector<int> var_of(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) {
      var_of[cell(n, r, c)] = next;
      var_of[cell(n, c, r)] = next;
      ++next;
    }
  }
  p.var_count = next;
  p.entry_map = var_of;
  const auto var = [&](int r, int c) { return var_of[cell(n, r, c)]; };

  p.constraints.push_back({{{var(0, 0), 1.0}}, 1.0});
  LinearConstraint total;
  for (int i = 1; i < n; ++i) total.terms.push_back({var(i, 0), 1.0});
  total.rhs = static_cast<double>(s);
  p.constraints.push_back(std::move(total));
  for (int i = 1; i < n; ++i) {
    p.constraints.push_back({{{var(i, i), 1.0}, {var(i, 0), -1.0}}, 0.0});
  }
  for (int i = 1; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double xij = x(i - 1, j - 1);
      if (xij != 0.0) p.objective.push_back({var(i, j), 2.0 * xij});
    }
  }
  return p;
}

Eigen::MatrixXd assemble_matrix(const SosProgram& p, std::span<const double> y) {
  if (static_cast<int>(y.size()) != p.var_count) {
    fail(ErrorKind::InvalidParams, "variable vector has the wrong length");
  }
  Eigen::MatrixXd m(p.dim, p.dim);
  for (int r = 0; r < p.dim; ++r) {
    for (int c = 0; c < p.dim; ++c) m(r, c) = y[static_cast<std::size_t>(p.entry(r, c))];
  }
  return m;
}

std::vector<double> read_variables(const SosProgram& p, const Eigen::MatrixXd& m) {
  std::vector<double> sum(static_cast<std::size_t>(p.var_count), 0.0);
  std::vector<int> count(static_cast<std::size_t>(p.var_count), 0);
  for (int r = 0; r < p.dim; ++r) {
    for (int c = 0; c < p.dim; ++c) {
      const auto v = static_cast<std::size_t>(p.entry(r, c));
      sum[v] += m(r, c);
      ++count[v];
    }
  }
  for (std::size_t v = 0; v < sum.size(); ++v) {
    if (count[v] > 0) sum[v] /= count[v];
  }
  return sum;
}

double program_value(const SosProgram& p, std::span<const double> y) {
  double total = 0.0;
  for (const auto& t : p.objective) total += t.coeff * y[static_cast<std::size_t>(t.var)];
  return total / p.scale;
}

double max_equality_violation(const SosProgram& p, std::span<const double> y) {
  double worst = 0.0;
  for (const auto& c : p.constraints) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coeff * y[static_cast<std::size_t>(t.var)];
    worst = std::max(worst, std::abs(lhs - c.rhs));
  }
  return worst;
}

std::vector<double> indicator_point(const SubsetIndexer& idx, SubsetKey support) {
  std::vector<double> y(static_cast<std::size_t>(idx.var_count()));
  for (int v = 0; v < idx.var_count(); ++v) {
    y[static_cast<std::size_t>(v)] = (idx.var_set(v) & ~support) == 0 ? 1.0 : 0.0;
  }
  return y;
}

nlohmann::json program_to_json(const SosProgram& p) {
  using nlohmann::json;
  json j;
  j["dim"] = p.dim;
  j["var_count"] = p.var_count;
  j["scale"] = p.scale;
  json objective = json::array();
  for (const auto& t : p.objective) objective.push_back({t.var, t.coeff});
  j["objective"] = std::move(objective);
  json constraints = json::array();
  for (const auto& c : p.constraints) {
    json terms = json::array();
    for (const auto& t : c.terms) terms.push_back({t.var, t.coeff});
    constraints.push_back({{"terms", std::move(terms)}, {"rhs", c.rhs}});
  }
  j["constraints"] = std::move(constraints);
  json entries = json::array();
  for (int r = 0; r < p.dim; ++r) {
    for (int c = r; c < p.dim; ++c) entries.push_back({r, c, p.entry(r, c)});
  }
  j["entry_map"] = std::move(entries);
  return j;
}

const Rational& PseudoExpectation::at(SubsetKey s) const {
  const auto it = values.find(s);
  if (it == values.end()) {
    fail(ErrorKind::MissingValue, "pseudo-expectation has no value at " + subset_to_string(s));
  }
  return it->second;
}

Eigen::MatrixXd moment_matrix(const PseudoExpectation& pe, const SubsetIndexer& idx) {
  if (pe.d != idx.d() || pe.ell != idx.ell()) {
    fail(ErrorKind::InvalidParams, "pseudo-expectation and indexer disagree on (d, ell)");
  }
  const int n = idx.row_count();
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) {
      const double v = to_double(pe.at(idx.row_set(r) | idx.row_set(c)));
      m(r, c) = v;
      m(c, r) = v;
    }
  }
  return m;
}

double objective_value(const NoisyMatrix& x, const PseudoExpectation& pe, int s) {
  if (s < 2) fail(ErrorKind::InvalidParams, "s_star must be >= 2");
  double sum = 0.0;
  for (int i = 0; i < x.d(); ++i) {
    for (int j = i + 1; j < x.d(); ++j) sum += x(i, j) * to_double(pe.at(singleton(i) | singleton(j)));
  }
  return 2.0 * sum / (static_cast<double>(s) * static_cast<double>(s - 1));
}

}  // namespace sosgap
