#pragma once

#include <algorithm>
#include <array>
#include <iterator>
#include <string>
#include <vector>

#include "rop/core.hpp"

namespace rop {

/// Sorted, duplicate-free list of 0-based subsystem indices.
using IndexSet = std::vector<Index>;

inline IndexSet normalized(IndexSet s) {
  std::sort(s.begin(), s.end());
  return s;
}

inline void validate_index_set(const IndexSet& s, Index k, const char* what) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= k)
      throw Error(ErrorKind::invalid_argument, std::string(what) + ": index out of range");
    if (i > 0 && s[i] <= s[i - 1])
      throw Error(ErrorKind::invalid_argument, std::string(what) + ": indices must be sorted and distinct");
  }
}

inline Index set_product(const DimsProfile& dims, const IndexSet& s) {
  Index p = 1;
  for (Index i : s) p *= dims.n(i);
  return p;
}

inline bool contains(const IndexSet& s, Index i) { return std::binary_search(s.begin(), s.end(), i); }

/// One side of a rank-one factor A_i = x_i y_i^T.
struct FactorToken {
  Index subsystem = 0;
  bool is_y = false;

  friend bool operator==(const FactorToken&, const FactorToken&) = default;
};

using TokenList = std::vector<FactorToken>;

inline std::vector<Index> token_dims(const DimsProfile& dims, const TokenList& tokens) {
  std::vector<Index> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(dims.n(t.subsystem));
  return out;
}

/// Two subsets K1, K2 of {0, ..., k-1}; overlap allowed.
struct KSetPair {
  Index k = 0;
  IndexSet k1;
  IndexSet k2;

  KSetPair() = default;
  KSetPair(Index k_, IndexSet a, IndexSet b) : k(k_), k1(normalized(std::move(a))), k2(normalized(std::move(b))) {
    validate_index_set(k1, k, "KSetPair K1");
    validate_index_set(k2, k, "KSetPair K2");
  }

  Index m1(const DimsProfile& dims) const { return set_product(dims, k1); }
  Index m2(const DimsProfile& dims) const { return set_product(dims, k2); }

  friend bool operator==(const KSetPair&, const KSetPair&) = default;
};

/// The partition {P1, P2, P3, P4} of {0, ..., k-1} selecting, per subsystem,
/// A_i, A_i^T, vec(A_i) or vec^T(A_i) in the canonical form.
class Partition {
 public:
  enum class Block : int { p1 = 0, p2 = 1, p3 = 2, p4 = 3 };

  Partition() = default;

  Partition(Index k, std::array<IndexSet, 4> blocks) : k_(k) {
    std::vector<int> owner(static_cast<std::size_t>(std::max<Index>(k, 0)), -1);
    for (int b = 0; b < 4; ++b) {
      blocks_[b] = normalized(std::move(blocks[b]));
      validate_index_set(blocks_[b], k, "Partition block");
      for (Index i : blocks_[b]) {
        if (owner[static_cast<std::size_t>(i)] != -1)
          throw Error(ErrorKind::invalid_argument, "Partition: blocks are not disjoint");
        owner[static_cast<std::size_t>(i)] = b;
      }
    }
    for (int o : owner)
      if (o == -1) throw Error(ErrorKind::invalid_argument, "Partition: blocks do not cover {1..k}");
  }

  Partition(Index k, IndexSet p1, IndexSet p2, IndexSet p3, IndexSet p4)
      : Partition(k, std::array<IndexSet, 4>{std::move(p1), std::move(p2), std::move(p3), std::move(p4)}) {}

  /// From a per-subsystem label list (label[i] in {0,1,2,3}).
  static Partition from_labels(const std::vector<Block>& labels) {
    std::array<IndexSet, 4> blocks;
    for (std::size_t i = 0; i < labels.size(); ++i) blocks[static_cast<int>(labels[i])].push_back(static_cast<Index>(i));
    return Partition(static_cast<Index>(labels.size()), std::move(blocks));
  }

  Index k() const { return k_; }
  const IndexSet& block(Block b) const { return blocks_[static_cast<int>(b)]; }
  const IndexSet& p1() const { return blocks_[0]; }
  const IndexSet& p2() const { return blocks_[1]; }
  const IndexSet& p3() const { return blocks_[2]; }
  const IndexSet& p4() const { return blocks_[3]; }

  Block label(Index i) const {
    for (int b = 0; b < 4; ++b)
      if (contains(blocks_[b], i)) return static_cast<Block>(b);
    throw Error(ErrorKind::invalid_argument, "Partition: index out of range");
  }

  /// p_l = prod_{i in P_l} n_i (1 when empty).
  Index p(Block b, const DimsProfile& dims) const { return set_product(dims, block(b)); }

  /// Column side of the canonical form: x_i (P1), y_i (P2), x_i (x) y_i (P3).
  TokenList column_tokens() const {
    TokenList t;
    for (Index i : p1()) t.push_back({i, false});
    for (Index i : p2()) t.push_back({i, true});
    for (Index i : p3()) {
      t.push_back({i, false});
      t.push_back({i, true});
    }
    return t;
  }

  /// Row side: y_i (P1), x_i (P2), x_i (x) y_i (P4).
  TokenList row_tokens() const {
    TokenList t;
    for (Index i : p1()) t.push_back({i, true});
    for (Index i : p2()) t.push_back({i, false});
    for (Index i : p4()) {
      t.push_back({i, false});
      t.push_back({i, true});
    }
    return t;
  }

  /// Columns of M: p1 p2 p3^2.
  Index m_cols(const DimsProfile& dims) const { return product(token_dims(dims, column_tokens())); }
  /// Columns of N: p1 p2 p4^2.
  Index n_cols(const DimsProfile& dims) const { return product(token_dims(dims, row_tokens())); }

  /// "1,2|3||" with 1-based indices.
  std::string to_string() const {
    std::string out;
    for (int b = 0; b < 4; ++b) {
      if (b > 0) out += '|';
      for (std::size_t j = 0; j < blocks_[b].size(); ++j) {
        if (j > 0) out += ',';
        out += std::to_string(blocks_[b][j] + 1);
      }
    }
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  Index k_ = 0;
  std::array<IndexSet, 4> blocks_;
};

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexSet full_set(Index k) {
  IndexSet out(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

/// K1 = P1 u P3, K2 = P2 u P3.
inline KSetPair partition_to_ksets(const Partition& p) {
  return {p.k(), set_union(p.p1(), p.p3()), set_union(p.p2(), p.p3())};
}

/// P1 = K1 \ K2, P2 = K2 \ K1, P3 = K1 n K2, P4 = K \ (K1 u K2).
inline Partition ksets_to_partition(const KSetPair& ks) {
  const IndexSet all = full_set(ks.k);
  return Partition(ks.k, {set_difference(ks.k1, ks.k2), set_difference(ks.k2, ks.k1), set_intersection(ks.k1, ks.k2),
                          set_difference(all, set_union(ks.k1, ks.k2))});
}

/// The (K1, K2) pair governing N: (K \ K1, K \ K2).
inline KSetPair complement(const KSetPair& ks) {
  const IndexSet all = full_set(ks.k);
  return {ks.k, set_difference(all, ks.k1), set_difference(all, ks.k2)};
}

/// Every partition of {0..k-1} into four labeled blocks (4^k of them).
inline std::vector<Partition> all_partitions(Index k) {
  std::vector<Partition> out;
  Index total = 1;
  for (Index i = 0; i < k; ++i) total *= 4;
  for (Index code = 0; code < total; ++code) {
    std::vector<Partition::Block> labels(static_cast<std::size_t>(k));
    Index c = code;
    for (Index i = 0; i < k; ++i) {
      labels[static_cast<std::size_t>(i)] = static_cast<Partition::Block>(c % 4);
      c /= 4;
    }
    out.push_back(Partition::from_labels(labels));
  }
  return out;
}

}  // namespace rop
