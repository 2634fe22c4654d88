#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "cmvc/pair_selection.hpp"

namespace cmvc {

// Fixed-weight sparse symmetric store of filtered pairwise structure.
// Each unordered pair holds w_p (positive) or -w_n (negative); pairs with
// conflicting evidence are tombstoned for the rest of the run so later views
// cannot resurrect them.
class StructuralBuffer {
 public:
  using PairKey = std::pair<int, int>;  // i < j

  StructuralBuffer() = default;
  StructuralBuffer(int n, double w_p, double w_n);

  int sample_count() const { return n_; }
  int views_merged() const { return views_; }
  double positive_weight() const { return w_p_; }
  double negative_weight() const { return w_n_; }

  // +w_p, -w_n or 0; symmetric in (i, j).
  double entry(int i, int j) const;

  std::size_t pair_count() const { return entries_.size(); }  // unordered pairs
  std::size_t tombstone_count() const { return tombstones_.size(); }
  bool empty() const { return entries_.empty(); }

  // Frobenius norm of the full symmetric matrix: sqrt(2 sum_{i<j} w_ij^2).
  double frobenius_norm() const;

  // sign per unordered pair: +1 -> w_p, -1 -> -w_n
  const std::map<PairKey, int>& entries() const { return entries_; }
  const std::set<PairKey>& tombstones() const { return tombstones_; }

  void check_invariants() const;  // throws InvariantError

  friend StructuralBuffer build_indicator(const PairSelection& pairs, double w_p, double w_n,
                                          int n);
  friend StructuralBuffer merge_buffer(const StructuralBuffer& prev,
                                       const StructuralBuffer& incoming);
  friend StructuralBuffer restrict_to_batches(const StructuralBuffer& buffer, int b);
  friend StructuralBuffer load_buffer(const std::string& path);

 private:
  int n_ = 0;
  int views_ = 0;
  double w_p_ = 1.0;
  double w_n_ = 0.2;
  std::map<PairKey, int> entries_;
  std::set<PairKey> tombstones_;
};

// Indicator of one view's selection (views_merged = 1). A pair nominated both
// positive and negative within the view resolves to a tombstone.
StructuralBuffer build_indicator(const PairSelection& pairs, double w_p, double w_n, int n);

// Union of supports with the conflict rule: agreeing signs keep the fixed
// magnitude, disagreeing signs tombstone the pair, tombstones persist.
StructuralBuffer merge_buffer(const StructuralBuffer& prev, const StructuralBuffer& incoming);

// Intra-batch restriction: drops every pair that crosses a contiguous batch
// edge of size b. With b = n this is the identity.
StructuralBuffer restrict_to_batches(const StructuralBuffer& buffer, int b);

// Text triplet format, header "n v w_p w_n", lines "i j value" sorted by
// (i, j) with i < j; tombstones serialize as value 0. Round-trips bit-exact.
void save_buffer(const std::string& path, const StructuralBuffer& buffer);
StructuralBuffer load_buffer(const std::string& path);

}  // namespace cmvc
