#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spinekit/error.hpp"

namespace spinekit {

inline constexpr int kMaxDim = 64;

// Bit i of the key is set iff basis vector e_i is a factor.
using BladeKey = std::uint64_t;

inline constexpr BladeKey full_key(int dim) {
  return dim >= 64 ? ~BladeKey{0} : ((BladeKey{1} << dim) - 1);
}

// Parity of the permutation sorting the concatenation (a..., b...) for
// disjoint a, b: the number of pairs (i in a, j in b) with i > j, mod 2.
inline int merge_parity(BladeKey a, BladeKey b) {
  int count = 0;
  if (std::popcount(a) <= std::popcount(b)) {
    for (BladeKey rest = a; rest; rest &= rest - 1) {
      const int i = std::countr_zero(rest);
      count += std::popcount(b & ((BladeKey{1} << i) - 1));
    }
  } else {
    for (BladeKey rest = b; rest; rest &= rest - 1) {
      const int j = std::countr_zero(rest);
      const BladeKey above = j == 63 ? 0 : ~((BladeKey{2} << j) - 1);
      count += std::popcount(a & above);
    }
  }
  return count & 1;
}

inline int merge_sign(BladeKey a, BladeKey b) { return merge_parity(a, b) ? -1 : 1; }

// A basis element e_{u_1} ^ ... ^ e_{u_k} of the exterior algebra of a
// dim-dimensional space, u strictly increasing.
class Blade {
 public:
  constexpr Blade() = default;

  static Blade from_key(BladeKey key, int dim) {
    check_dim(dim);
    if ((key & ~full_key(dim)) != 0) throw ContractError("blade index out of range for dimV=" + std::to_string(dim));
    return Blade(key, dim);
  }

  static Blade from_indices(std::span<const int> indices, int dim) {
    check_dim(dim);
    BladeKey key = 0;
    int prev = -1;
    for (int u : indices) {
      if (u <= prev) throw ContractError("blade indices must be strictly increasing");
      if (u >= dim) throw ContractError("blade index " + std::to_string(u) + " >= dimV=" + std::to_string(dim));
      key |= BladeKey{1} << u;
      prev = u;
    }
    return Blade(key, dim);
  }

  static Blade from_indices(std::initializer_list<int> indices, int dim) {
    return from_indices(std::span<const int>(indices.begin(), indices.size()), dim);
  }

  static Blade top(int dim) { return from_key(full_key(dim), dim); }

  BladeKey key() const { return key_; }
  int dim() const { return dim_; }
  int degree() const { return std::popcount(key_); }
  bool disjoint(Blade o) const { return (key_ & o.key_) == 0; }
  bool contains(Blade o) const { return (key_ & o.key_) == o.key_; }

  std::vector<int> indices() const { return key_indices(key_); }

  static std::vector<int> key_indices(BladeKey key) {
    std::vector<int> out;
    out.reserve(std::popcount(key));
    for (BladeKey rest = key; rest; rest &= rest - 1) out.push_back(std::countr_zero(rest));
    return out;
  }

  long index_sum() const {
    long s = 0;
    for (BladeKey rest = key_; rest; rest &= rest - 1) s += std::countr_zero(rest);
    return s;
  }

  std::string to_string() const {
    std::string s = "e{";
    bool first = true;
    for (int u : indices()) {
      if (!first) s += ',';
      s += std::to_string(u);
      first = false;
    }
    return s + "}";
  }

  friend bool operator==(Blade, Blade) = default;

 private:
  constexpr Blade(BladeKey key, int dim) : key_(key), dim_(dim) {}

  static void check_dim(int dim) {
    if (dim < 0 || dim > kMaxDim) throw ContractError("dimV must lie in [0, 64], got " + std::to_string(dim));
  }

  BladeKey key_ = 0;
  int dim_ = 0;
};

// A basis element of the exterior algebra of the dual space.
struct DualBlade {
  Blade blade;

  static DualBlade from_indices(std::initializer_list<int> indices, int dim) {
    return DualBlade{Blade::from_indices(indices, dim)};
  }
  int degree() const { return blade.degree(); }
  int dim() const { return blade.dim(); }
};

struct BladeProduct {
  int sign = 0;  // 0 when the factors share an index
  Blade blade;
};

inline BladeProduct wedge_blades(Blade a, Blade b) {
  if (a.dim() != b.dim()) {
    throw ContractError("wedge of blades from different spaces (dimV " + std::to_string(a.dim()) + " vs " +
                        std::to_string(b.dim()) + ")");
  }
  if (!a.disjoint(b)) return {0, Blade{}};
  return {merge_sign(a.key(), b.key()), Blade::from_key(a.key() | b.key(), a.dim())};
}

}  // namespace spinekit
