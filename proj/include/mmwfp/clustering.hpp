#pragma once

#include "mmwfp/antenna.hpp"
#include "mmwfp/fingerprint.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace mmwfp {

/// Pairwise similarities of one sector group, row-major K x K. The diagonal
/// holds the shared preference.
struct SimilarityMatrix {
  std::size_t size = 0;
  std::vector<double> values;
  double preference = 0.0;
  double chi = 0.3;

  double at(std::size_t i, std::size_t k) const { return values[i * size + k]; }
};

/// s(i,k) = -||x_i - x_k||^2 off the diagonal and chi * median of those on it.
/// The median runs over every ordered pair i != k; a single point gets
/// preference 0.
SimilarityMatrix similarity_matrix(std::span<const std::vector<double>> vectors, double chi);
SimilarityMatrix similarity_matrix(const SectorGroup& group, double chi);

struct ApParams {
  double damping = 0.5;
  int max_iterations = 200;
  int stable_window = 15;

  bool operator==(const ApParams&) const = default;
};

struct ApResult {
  std::vector<std::size_t> exemplars;  ///< point indices, ascending
  std::vector<std::size_t> assignment; ///< per point: position in `exemplars`
  int iterations = 0;
  bool converged = false;
  bool used_fallback = false;
};

/// Affinity propagation by damped responsibility/availability exchange.
///
/// Stops once the exemplar set {k : r(k,k) + a(k,k) > 0} is nonempty and has
/// not changed for `stable_window` iterations, or after `max_iterations`.
/// When no exemplar emerges the single point with the best net similarity is
/// used instead, so at least one exemplar is always returned. Throws
/// InvalidInput on non-finite similarities or bad parameters.
ApResult affinity_propagate(const SimilarityMatrix& sim, const ApParams& params = {});

/// Sum of s(i, exemplar(i)) over non-exemplars plus one preference per exemplar.
double net_similarity(const SimilarityMatrix& sim, std::span<const std::size_t> exemplars);

/// Exemplars chosen for one (mm-w AP, sector) group.
struct SectorExemplars {
  std::vector<std::size_t> member_lps;            ///< LP index of every group member
  std::vector<std::size_t> exemplar_members;      ///< indices into member_lps
  std::vector<std::vector<double>> vectors;       ///< copies of the exemplar RSS vectors
  std::vector<std::size_t> assignment;            ///< per member: exemplar position

  std::size_t cluster_count() const { return vectors.size(); }
  std::size_t exemplar_lp(std::size_t j) const { return member_lps[exemplar_members[j]]; }

  bool operator==(const SectorExemplars&) const = default;
};

/// Key: (mm-w AP index, sector id).
using ExemplarKey = std::pair<std::size_t, SectorId>;

struct ExemplarSet {
  std::map<ExemplarKey, SectorExemplars> entries;

  bool empty() const { return entries.empty(); }
  /// Number of sectors of `ap` holding at least one exemplar.
  std::size_t sector_count(std::size_t ap) const;

  bool operator==(const ExemplarSet&) const = default;
};

/// Clusters every group independently. Errors name the failing group.
ExemplarSet build_exemplar_set(std::span<const SectorGroup> groups, double chi, const ApParams& params = {});

} // namespace mmwfp
