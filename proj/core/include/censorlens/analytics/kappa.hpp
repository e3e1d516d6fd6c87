#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>

#include "censorlens/error.hpp"

namespace censorlens::analytics {

struct KappaResult {
  std::size_t n = 0;
  double observed = 0.0;
  double expected = 0.0;
  /// Absent when expected agreement is 1.
  std::optional<double> kappa;
};

/// Cohen's kappa with expected agreement from the marginal label
/// frequencies. Counts are kept as integers and kappa is formed with a
/// single division, so it is exactly invariant under relabeling.
template <class Label>
KappaResult cohens_kappa(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) throw InvalidArgument("kappa needs label lists of equal length");
  if (a.empty()) throw InvalidArgument("kappa needs at least one labeled item");
  std::map<Label, std::uint64_t> count_a;
  std::map<Label, std::uint64_t> count_b;
  std::uint64_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++count_a[a[i]];
    ++count_b[b[i]];
    if (a[i] == b[i]) ++agree;
  }
  std::uint64_t chance = 0;
  for (const auto& [label, n] : count_a) {
    const auto it = count_b.find(label);
    if (it != count_b.end()) chance += n * it->second;
  }
  const auto n = static_cast<std::uint64_t>(a.size());
  KappaResult r;
  r.n = a.size();
  r.observed = static_cast<double>(agree) / static_cast<double>(n);
  r.expected = static_cast<double>(chance) / static_cast<double>(n * n);
  if (chance != n * n) {
    const auto num = static_cast<double>(static_cast<std::int64_t>(n * agree) - static_cast<std::int64_t>(chance));
    r.kappa = num / static_cast<double>(n * n - chance);
  }
  return r;
}

}  // namespace censorlens::analytics
