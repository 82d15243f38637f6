#include "sosgap/certificate.hpp"

#include <atomic>
#include <string>

#include <omp.h>

#include "sosgap/error.hpp"
#include "sosgap/sdp.hpp"

namespace sosgap {

PositivityGraph::PositivityGraph(int d) : d_(d), adjacency_(static_cast<std::size_t>(d), 0) {
  if (d < 1) fail(ErrorKind::InvalidParams, "graph needs at least one vertex");
  if (d > kMaxVertices) fail(ErrorKind::TooLarge, "positivity graphs support d <= 64");
}

void PositivityGraph::add_edge(int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= d_ || j >= d_) {
    fail(ErrorKind::InvalidParams, "edge endpoints out of range");
  }
  adjacency_[static_cast<std::size_t>(i)] |= singleton(j);
  adjacency_[static_cast<std::size_t>(j)] |= singleton(i);
}

std::vector<std::pair<int, int>> PositivityGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < d_; ++i) {
    for (int j = i + 1; j < d_; ++j) {
      if (has_edge(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::size_t PositivityGraph::edge_count() const {
  std::size_t twice = 0;
  for (auto a : adjacency_) twice += static_cast<std::size_t>(std::popcount(a));
  return twice / 2;
}

PositivityGraph positivity_graph(const NoisyMatrix& x, PositivityMode mode) {
  PositivityGraph g(x.d());
  for (int i = 0; i < x.d(); ++i) {
    for (int j = i + 1; j < x.d(); ++j) {
      const double v = x(i, j);
      if (mode == PositivityMode::BinaryOne) {
        if (v != 0.0 && v != 1.0) {
          fail(ErrorKind::NotBinary, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                         ") is not 0 or 1");
        }
        if (v == 1.0) g.add_edge(i, j);
      } else if (v > 0.0) {
        g.add_edge(i, j);
      }
    }
  }
  return g;
}

std::uint64_t ExpansivityTable::eta(SubsetKey s) const {
  const auto it = counts.find(s);
  return it == counts.end() ? 0 : it->second;
}

namespace {

using Counts = std::unordered_map<SubsetKey, std::uint64_t>;

void check_clique_args(const PositivityGraph& g, int ell, const CliqueBudget& budget) {
  (void)g;
  if (ell < 1) fail(ErrorKind::InvalidParams, "ell must be >= 1");
  if (2 * ell > budget.max_clique_size) {
    fail(ErrorKind::TooLarge, "2 ell = " + std::to_string(2 * ell) + " exceeds the clique size budget");
  }
}

/// Enumerates the cliques of size `size` whose smallest vertex is `first`,
/// adding every subset of each clique to `counts`.
class CliqueCounter {
 public:
  CliqueCounter(const PositivityGraph& g, int size, Counts& counts, std::atomic<std::uint64_t>& total,
                std::uint64_t limit)
      : g_(g), size_(size), counts_(counts), total_(total), limit_(limit) {}

  void from(int first) {
    const SubsetKey above = first + 1 >= 64 ? 0 : ~((singleton(first + 1)) - 1);
    extend(singleton(first), 1, g_.neighbours(first) & above);
  }

 private:
  void extend(SubsetKey clique, int k, SubsetKey candidates) {
    if (k == size_) {
      if (total_.fetch_add(1, std::memory_order_relaxed) + 1 > limit_) {
        fail(ErrorKind::TooLarge, "clique enumeration exceeded its budget");
      }
      for (SubsetKey sub = clique;; sub = (sub - 1) & clique) {
        ++counts_[sub];
        if (sub == 0) break;
      }
      return;
    }
    if (std::popcount(candidates) < size_ - k) return;
    while (candidates != 0) {
      const int v = std::countr_zero(candidates);
      candidates &= candidates - 1;
      extend(clique | singleton(v), k + 1, candidates & g_.neighbours(v));
    }
  }

  const PositivityGraph& g_;
  int size_;
  Counts& counts_;
  std::atomic<std::uint64_t>& total_;
  std::uint64_t limit_;
};

ExpansivityTable make_table(const PositivityGraph& g, int ell, Counts counts) {
  ExpansivityTable t;
  t.d = g.d();
  t.ell = ell;
  t.counts = std::move(counts);
  t.clique_count = t.eta(0);
  return t;
}

}  // namespace

namespace kernels {

ExpansivityTable expansivity_reference(const PositivityGraph& g, int ell, const CliqueBudget& budget) {
  check_clique_args(g, ell, budget);
  Counts counts;
  std::atomic<std::uint64_t> total{0};
  if (2 * ell <= g.d()) {
    CliqueCounter counter(g, 2 * ell, counts, total, budget.max_cliques);
    for (int first = 0; first < g.d(); ++first) counter.from(first);
  }
  return make_table(g, ell, std::move(counts));
}

ExpansivityTable expansivity_parallel(const PositivityGraph& g, int ell, const CliqueBudget& budget) {
  check_clique_args(g, ell, budget);
  Counts merged;
  std::atomic<std::uint64_t> total{0};
  bool over_budget = false;
  if (2 * ell <= g.d()) {
#pragma omp parallel
    {
      Counts local;
      CliqueCounter counter(g, 2 * ell, local, total, budget.max_cliques);
#pragma omp for schedule(dynamic, 1)
      for (int first = 0; first < g.d(); ++first) {
        try {
          counter.from(first);
        } catch (const Error&) {
#pragma omp atomic write
          over_budget = true;
        }
      }
#pragma omp critical(sosgap_eta_merge)
      for (const auto& [key, n] : local) merged[key] += n;
    }
  }
  if (over_budget) fail(ErrorKind::TooLarge, "clique enumeration exceeded its budget");
  return make_table(g, ell, std::move(merged));
}

}  // namespace kernels

ExpansivityTable expansivity_table(const PositivityGraph& g, int ell, const CliqueBudget& budget,
                                   bool parallel) {
  return parallel ? kernels::expansivity_parallel(g, ell, budget)
                  : kernels::expansivity_reference(g, ell, budget);
}

std::uint64_t expansivity_identity_failures(const ExpansivityTable& t) {
  std::uint64_t failures = 0;
  for (SubsetKey s : subsets_up_to(t.d, 2 * t.ell - 1)) {
    std::uint64_t sum = 0;
    for (int i = 0; i < t.d; ++i) {
      if (!(s & singleton(i))) sum += t.eta(s | singleton(i));
    }
    const auto expected = static_cast<std::uint64_t>(2 * t.ell - subset_size(s)) * t.eta(s);
    if (sum != expected) ++failures;
  }
  return failures;
}

PseudoExpectation build_certificate(const ExpansivityTable& t, int s, int ell) {
  if (s < 2) fail(ErrorKind::InvalidParams, "s_star must be >= 2");
  if (ell != t.ell) fail(ErrorKind::InvalidParams, "table was built for a different ell");
  if (t.clique_count == 0) {
    fail(ErrorKind::CertificateUndefined, "no 2 ell-clique in the positivity graph (eta({}) = 0)");
  }
  // weight[k] = (s)_k / ((2 ell)_k eta({}))
  std::vector<Rational> weight;
  for (int k = 0; k <= 2 * ell; ++k) {
    weight.emplace_back(falling_factorial(s, k), falling_factorial(2 * ell, k) * BigInt(t.clique_count));
  }
  PseudoExpectation pe;
  pe.d = t.d;
  pe.ell = ell;
  pe.s_star = s;
  const auto all = subsets_up_to(t.d, 2 * ell);
  pe.values.reserve(all.size());
  for (SubsetKey set : all) {
    const auto eta = t.eta(set);
    pe.values.emplace(set, eta == 0 ? Rational(0)
                                    : Rational(eta) * weight[static_cast<std::size_t>(subset_size(set))]);
  }
  return pe;
}

FeasibilityReport verify_certificate(const PseudoExpectation& pe, int d, int s, int ell) {
  if (pe.d != d || pe.ell != ell) fail(ErrorKind::InvalidParams, "pseudo-expectation built for other (d, ell)");
  FeasibilityReport r;
  r.normalization_ok = pe.at(0) == 1;
  Rational worst(0);
  for (SubsetKey set : subsets_up_to(d, 2 * ell - 1)) {
    Rational lhs(0);
    for (int i = 0; i < d; ++i) {
      if (set & singleton(i)) continue;
      const Rational& v = pe.at(set | singleton(i));
      if (!v.is_zero()) lhs += v;
    }
    const Rational& here = pe.at(set);
    Rational diff = here.is_zero() ? lhs : lhs - Rational(s - subset_size(set)) * here;
    if (diff < 0) diff = -diff;
    if (diff > worst) worst = diff;
  }
  r.rowsum_max_violation = worst;
  const SubsetIndexer idx(d, ell);
  const auto range = eigen_range(moment_matrix(pe, idx));
  r.min_eigenvalue = range.min;
  r.max_eigenvalue = range.max;
  r.psd = range.min >= -kPsdTolerance * std::max(1.0, range.max);
  return r;
}

Rational certificate_objective(const NoisyMatrix& x, const PseudoExpectation& pe, int s) {
  if (s < 2) fail(ErrorKind::InvalidParams, "s_star must be >= 2");
  Rational sum(0);
  for (int i = 0; i < x.d(); ++i) {
    for (int j = i + 1; j < x.d(); ++j) {
      const Rational& v = pe.at(singleton(i) | singleton(j));
      if (v.is_zero() || x(i, j) == 0.0) continue;
      sum += exact_rational(x(i, j)) * v;
    }
  }
  return sum * Rational(2, s * (s - 1));
}

nlohmann::json report_to_json(const FeasibilityReport& r) {
  nlohmann::json j;
  j["eta_empty"] = r.eta_empty;
  j["normalization_ok"] = r.normalization_ok;
  j["rowsum_max_violation"] = to_fraction_string(r.rowsum_max_violation);
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["max_eigenvalue"] = r.max_eigenvalue;
  j["psd"] = r.psd;
  if (r.objective) {
    j["objective"] = to_fraction_string(*r.objective);
    j["objective_float"] = to_double(*r.objective);
  }
  return j;
}

Certification certify(const NoisyMatrix& x, PositivityMode mode, int s, int ell,
                      const CliqueBudget& budget) {
  if (s < 2 || s > x.d()) fail(ErrorKind::InvalidParams, "need 2 <= s_star <= d");
  const auto graph = positivity_graph(x, mode);
  auto table = expansivity_table(graph, ell, budget);
  auto pe = build_certificate(table, s, ell);
  auto report = verify_certificate(pe, x.d(), s, ell);
  report.eta_empty = table.clique_count;
  report.objective = certificate_objective(x, pe, s);
  return {std::move(table), std::move(pe), std::move(report)};
}

}  // namespace sosgap
