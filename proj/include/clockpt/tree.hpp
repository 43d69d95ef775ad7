#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "clockpt/error.hpp"

namespace clockpt {

/// Rooted tree in which every vertex has exactly `children` children.
struct Cayley {
  int children = 2;
};

/// Spherically symmetric tree: every vertex at generation n has
/// children_per_generation[n] children. With `periodic` set the sequence
/// repeats forever; otherwise it is the full list of known generations.
struct SphericallySymmetric {
  std::vector<int> children_per_generation;
  bool periodic = true;
};

using TreeFamily = std::variant<Cayley, SphericallySymmetric>;

inline constexpr int kMinGenerations = 20;

struct BranchingNumber {
  double value = 0.0;
  bool estimate = false;
  int generations = 0;
};

inline void validate(const TreeFamily& tree) {
  if (const auto* c = std::get_if<Cayley>(&tree)) {
    if (c->children < 2) throw Error(ErrorKind::InvalidArgument, "Cayley tree needs at least 2 children");
    return;
  }
  const auto& s = std::get<SphericallySymmetric>(tree);
  if (s.children_per_generation.empty()) {
    throw Error(ErrorKind::InvalidArgument, "empty generation sequence");
  }
  for (int k : s.children_per_generation) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "every generation needs at least one child");
  }
  if (!s.periodic && static_cast<int>(s.children_per_generation.size()) < kMinGenerations) {
    throw Error(ErrorKind::InvalidArgument,
                "growth estimate needs at least " + std::to_string(kMinGenerations) + " generations");
  }
}

/// Exact k for Cayley(k). For spherically symmetric trees the level sizes
/// |L_n| are expanded over at least 20 generations (a whole number of periods
/// for periodic rules) and |L_N|^(1/N) at the last generation is reported.
inline BranchingNumber branching_number(const TreeFamily& tree) {
  validate(tree);
  if (const auto* c = std::get_if<Cayley>(&tree)) {
    return {static_cast<double>(c->children), false, 0};
  }
  const auto& s = std::get<SphericallySymmetric>(tree);
  const int len = static_cast<int>(s.children_per_generation.size());
  int generations = len;
  if (s.periodic) {
    generations = len * ((kMinGenerations + len - 1) / len);
  }
  // log |L_N| accumulated in log space; level sizes overflow quickly.
  double log_size = 0.0;
  for (int n = 0; n < generations; ++n) {
    log_size += std::log(static_cast<double>(s.children_per_generation[static_cast<std::size_t>(n % len)]));
  }
  return {std::exp(log_size / generations), true, generations};
}

inline int cayley_children(const TreeFamily& tree) {
  const auto* c = std::get_if<Cayley>(&tree);
  if (c == nullptr) {
    throw Error(ErrorKind::UnsupportedTree, "probes and regime maps are restricted to Cayley trees");
  }
  validate(tree);
  return c->children;
}

}  // namespace clockpt
