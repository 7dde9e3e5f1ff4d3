#include "alignkit/filters.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace alignkit {

Alignment trim(const Alignment& a, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("trim threshold must be in [0, 1]");
  }
  std::vector<Correspondence> kept;
  for (const auto& c : a.cells()) {
    if (c.confidence >= alpha) kept.push_back(c);
  }
  return a.with_cells(std::move(kept));
}

namespace {

std::vector<Correspondence> keep_group_maxima(const std::vector<Correspondence>& cells, bool by_entity1) {
  std::map<Iri, double> best;
  for (const auto& c : cells) {
    const Iri& key = by_entity1 ? c.entity1 : c.entity2;
    auto [it, inserted] = best.emplace(key, c.confidence);
    if (!inserted) it->second = std::max(it->second, c.confidence);
  }
  std::vector<Correspondence> out;
  for (const auto& c : cells) {
    if (c.confidence == best.at(by_entity1 ? c.entity1 : c.entity2)) out.push_back(c);
  }
  return out;
}

// Hungarian algorithm (potentials form) minimizing cost over an n x m matrix,
// n <= m. Returns the column assigned to each row.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const std::size_t m = n ? cost[0].size() : 0;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = p[j0];
      std::size_t j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
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
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<std::size_t> assignment(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j]) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

}  // namespace

Alignment disambiguate_two_pass(const Alignment& a, PassOrder order) {
  bool first_by_entity1 = order == PassOrder::Entity1First;
  auto pass1 = keep_group_maxima(a.cells(), first_by_entity1);
  return a.with_cells(keep_group_maxima(pass1, !first_by_entity1));
}

Alignment disambiguate_max_weight(const Alignment& a, MaxWeightMode mode) {
  auto sorted = a.sorted_cells();
  std::set<CellKey> chosen;
  std::set<Iri> used1;
  std::set<Iri> used2;
  auto take = [&](const Correspondence& c) {
    chosen.insert(c.key());
    used1.insert(c.entity1);
    used2.insert(c.entity2);
  };

  if (mode == MaxWeightMode::Greedy) {
    auto order = sorted;
    std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
      return x.confidence > y.confidence;
    });
    for (const auto& c : order) {
      if (c.confidence > 0.0 && !used1.count(c.entity1) && !used2.count(c.entity2)) take(c);
    }
  } else {
    std::map<Iri, std::size_t> rows;
    std::map<Iri, std::size_t> cols;
    for (const auto& c : sorted) {
      if (c.confidence <= 0.0) continue;
      rows.emplace(c.entity1, 0);
      cols.emplace(c.entity2, 0);
    }
    std::size_t index = 0;
    for (auto& [iri, i] : rows) i = index++;
    index = 0;
    for (auto& [iri, j] : cols) j = index++;

    // Best cell per entity pair; the first in identity order wins ties.
    bool transpose = rows.size() > cols.size();
    std::size_t n = transpose ? cols.size() : rows.size();
    std::size_t m = transpose ? rows.size() : cols.size();
    std::vector<std::vector<double>> cost(n, std::vector<double>(m, 0.0));
    std::vector<std::vector<const Correspondence*>> best(n, std::vector<const Correspondence*>(m));
    for (const auto& c : sorted) {
      if (c.confidence <= 0.0) continue;
      std::size_t i = rows.at(c.entity1);
      std::size_t j = cols.at(c.entity2);
      if (transpose) std::swap(i, j);
      if (!best[i][j] || c.confidence > best[i][j]->confidence) {
        best[i][j] = &c;
        cost[i][j] = -c.confidence;
      }
    }
    auto assignment = hungarian(cost);
    for (std::size_t i = 0; i < n; ++i) {
      if (const Correspondence* c = best[i][assignment[i]]) take(*c);
    }
  }

  for (const auto& c : sorted) {
    if (c.confidence == 0.0 && !used1.count(c.entity1) && !used2.count(c.entity2)) take(c);
  }

  std::vector<Correspondence> kept;
  for (const auto& c : a.cells()) {
    if (chosen.count(c.key())) kept.push_back(c);
  }
  return a.with_cells(std::move(kept));
}

Alignment rewrite_ambiguous_to_subsumption(const Alignment& a, SubsumptionDirection direction) {
  std::map<Iri, std::size_t> left;
  std::map<Iri, std::size_t> right;
  for (const auto& c : a.cells()) {
    ++left[c.entity1];
    ++right[c.entity2];
  }
  const bool super = direction == SubsumptionDirection::SharedIsSuper;

  std::vector<Correspondence> out;
  std::map<CellKey, std::size_t> position;
  for (auto c : a.cells()) {
    if (c.relation == Relation::Equivalence) {
      if (left[c.entity1] >= 2) {
        c.relation = super ? Relation::Subsumes : Relation::SubsumedBy;
      } else if (right[c.entity2] >= 2) {
        c.relation = super ? Relation::SubsumedBy : Relation::Subsumes;
      }
    }
    auto [it, inserted] = position.emplace(c.key(), out.size());
    if (inserted) {
      out.push_back(c);
    } else if (c.confidence > out[it->second].confidence) {
      out[it->second].confidence = c.confidence;
    }
  }
  return a.with_cells(std::move(out));
}

double total_confidence(const Alignment& a) {
  double sum = 0.0;
  for (const auto& c : a.cells()) sum += c.confidence;
  return sum;
}

}  // namespace alignkit
