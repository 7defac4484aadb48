#include "mmwfp/clustering.hpp"

#include "mmwfp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mmwfp {

namespace {

constexpr double kTieBreak = 1e-9;

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double diff = a[n] - b[n];
    d += diff * diff;
  }
  return d;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::vector<std::size_t> exemplars_of(const std::vector<double>& r, const std::vector<double>& a, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < n; ++k) {
    if (r[k * n + k] + a[k * n + k] > 0.0) out.push_back(k);
  }
  return out;
}

std::vector<std::size_t> assign(const SimilarityMatrix& sim, const std::vector<std::size_t>& exemplars) {
  const std::size_t n = sim.size;
  std::vector<std::size_t> assignment(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto self = std::find(exemplars.begin(), exemplars.end(), i);
    if (self != exemplars.end()) {
      assignment[i] = static_cast<std::size_t>(self - exemplars.begin());
      continue;
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < exemplars.size(); ++j) {
      if (sim.at(i, exemplars[j]) > sim.at(i, exemplars[best])) best = j;
    }
    assignment[i] = best;
  }
  return assignment;
}

} // namespace

SimilarityMatrix similarity_matrix(std::span<const std::vector<double>> vectors, double chi) {
  if (vectors.empty()) throw InvalidInput("similarity matrix needs at least one vector");
  if (!(chi > 0.0)) throw InvalidInput("preference scale chi must be > 0");
  const std::size_t k = vectors.size();
  SimilarityMatrix sim;
  sim.size = k;
  sim.chi = chi;
  sim.values.assign(k * k, 0.0);

  std::vector<double> off_diagonal;
  off_diagonal.reserve(k * (k - 1));
  for (std::size_t i = 0; i < k; ++i) {
    if (vectors[i].size() != vectors[0].size()) throw InvalidInput("RSS vectors differ in length");
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double s = -squared_distance(vectors[i], vectors[j]);
      sim.values[i * k + j] = s;
      off_diagonal.push_back(s);
    }
  }
  sim.preference = k == 1 ? 0.0 : chi * median(std::move(off_diagonal));
  for (std::size_t i = 0; i < k; ++i) sim.values[i * k + i] = sim.preference;
  return sim;
}

SimilarityMatrix similarity_matrix(const SectorGroup& group, double chi) {
  return similarity_matrix(std::span<const std::vector<double>>(group.rss), chi);
}

ApResult affinity_propagate(const SimilarityMatrix& sim, const ApParams& params) {
  if (!(params.damping > 0.0 && params.damping < 1.0)) throw InvalidInput("damping must lie in (0, 1)");
  if (params.max_iterations < 1) throw InvalidInput("max_iterations must be >= 1");
  if (params.stable_window < 1) throw InvalidInput("stable_window must be >= 1");
  const std::size_t n = sim.size;
  if (n == 0 || sim.values.size() != n * n) throw InvalidInput("similarity matrix is malformed");
  for (double v : sim.values) {
    if (!std::isfinite(v)) throw InvalidInput("similarity matrix contains a non-finite value");
  }

  // Symmetric pairs can stall the message exchange with neither side winning.
  // Scale each row by a tiny factor keyed on its own off-diagonal sum, which
  // does not depend on point order.
  SimilarityMatrix work = sim;
  if (n > 1) {
    std::vector<double> key(n, 0.0);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i) key[i] += sim.at(i, k);
      }
      scale = std::max(scale, std::abs(key[i]));
    }
    if (scale > 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          if (k != i) work.values[i * n + k] *= 1.0 + kTieBreak * key[i] / scale;
        }
      }
    }
  }

  const double lambda = params.damping;
  std::vector<double> r(n * n, 0.0);
  std::vector<double> a(n * n, 0.0);
  std::vector<double> column_pos(n, 0.0);

  ApResult result;
  std::vector<std::size_t> current;
  int unchanged = 0;
  for (int it = 1; it <= params.max_iterations; ++it) {
    result.iterations = it;

    // Responsibilities: s(i,k) minus the best competing a + s in row i.
    for (std::size_t i = 0; i < n; ++i) {
      double first = -std::numeric_limits<double>::infinity();
      double second = first;
      std::size_t first_k = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const double v = a[i * n + k] + work.at(i, k);
        if (v > first) {
          second = first;
          first = v;
          first_k = k;
        } else if (v > second) {
          second = v;
        }
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double competitor = k == first_k ? second : first;
        const double fresh = n == 1 ? work.at(i, k) : work.at(i, k) - competitor;
        r[i * n + k] = lambda * r[i * n + k] + (1.0 - lambda) * fresh;
      }
    }

    // Availabilities from the positive responsibilities each candidate receives.
    for (std::size_t k = 0; k < n; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != k) sum += std::max(0.0, r[i * n + k]);
      }
      column_pos[k] = sum;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        double fresh;
        if (i == k) {
          fresh = column_pos[k];
        } else {
          fresh = std::min(0.0, r[k * n + k] + column_pos[k] - std::max(0.0, r[i * n + k]));
        }
        a[i * n + k] = lambda * a[i * n + k] + (1.0 - lambda) * fresh;
      }
    }

    auto found = exemplars_of(r, a, n);
    if (found == current) {
      ++unchanged;
    } else {
      current = std::move(found);
      unchanged = 1;
    }
    if (!current.empty() && unchanged >= params.stable_window) {
      result.converged = true;
      break;
    }
  }

  if (current.empty()) {
    std::size_t best = 0;
    double best_net = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      double net = 0.0;
      for (std::size_t i = 0; i < n; ++i) net += sim.at(i, k);
      if (net > best_net) {
        best_net = net;
        best = k;
      }
    }
    current = {best};
    result.used_fallback = true;
  }

  result.exemplars = current;
  result.assignment = assign(sim, current);
  return result;
}

double net_similarity(const SimilarityMatrix& sim, std::span<const std::size_t> exemplars) {
  if (exemplars.empty()) throw InvalidInput("net similarity needs at least one exemplar");
  std::vector<std::size_t> ex(exemplars.begin(), exemplars.end());
  const auto assignment = assign(sim, ex);
  double total = 0.0;
  for (std::size_t i = 0; i < sim.size; ++i) total += sim.at(i, ex[assignment[i]]);
  return total;
}

std::size_t ExemplarSet::sector_count(std::size_t ap) const {
  std::size_t count = 0;
  for (const auto& [key, entry] : entries) {
    if (key.first == ap && entry.cluster_count() > 0) ++count;
  }
  return count;
}

ExemplarSet build_exemplar_set(std::span<const SectorGroup> groups, double chi, const ApParams& params) {
  ExemplarSet set;
  for (const auto& group : groups) {
    const ExemplarKey key{group.ap, group.sector};
    if (set.entries.contains(key)) {
      throw InvalidInput("duplicate group for AP " + std::to_string(group.ap) + " sector " +
                         std::to_string(group.sector));
    }
    ApResult fit;
    try {
      fit = affinity_propagate(similarity_matrix(group, chi), params);
    } catch (const Error& e) {
      throw InvalidInput("clustering AP " + std::to_string(group.ap) + " sector " + std::to_string(group.sector) +
                         ": " + e.what());
    }
    SectorExemplars entry;
    entry.member_lps = group.lps;
    entry.exemplar_members = fit.exemplars;
    entry.assignment = fit.assignment;
    for (std::size_t member : fit.exemplars) entry.vectors.push_back(group.rss[member]);
    set.entries.emplace(key, std::move(entry));
  }
  return set;
}

} // namespace mmwfp
