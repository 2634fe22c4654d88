#include "cmvc/structural_buffer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cmvc/error.hpp"

namespace cmvc {

StructuralBuffer::StructuralBuffer(int n, double w_p, double w_n)
    : n_(n), views_(0), w_p_(w_p), w_n_(w_n) {
  if (n < 1) throw ConfigError("buffer: n must be >= 1");
  if (!(w_p > 0) || !(w_n > 0)) throw ConfigError("buffer: w_p and w_n must be positive");
}

double StructuralBuffer::entry(int i, int j) const {
  if (i == j) return 0.0;
  auto it = entries_.find(i < j ? PairKey{i, j} : PairKey{j, i});
  if (it == entries_.end()) return 0.0;
  return it->second > 0 ? w_p_ : -w_n_;
}

double StructuralBuffer::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& [key, sign] : entries_) {
    double w = sign > 0 ? w_p_ : w_n_;
    sum += w * w;
  }
  return std::sqrt(2.0 * sum);
}

void StructuralBuffer::check_invariants() const {
  for (const auto& [key, sign] : entries_) {
    if (key.first >= key.second || key.first < 0 || key.second >= n_)
      throw InvariantError("buffer: malformed pair key");
    if (sign != 1 && sign != -1) throw InvariantError("buffer: entry sign outside {+1,-1}");
    if (tombstones_.count(key)) throw InvariantError("buffer: tombstoned pair holds a value");
  }
  for (const auto& key : tombstones_)
    if (key.first >= key.second || key.first < 0 || key.second >= n_)
      throw InvariantError("buffer: malformed tombstone key");
}

StructuralBuffer build_indicator(const PairSelection& pairs, double w_p, double w_n, int n) {
  if (pairs.samples() != n) throw DataError("build_indicator: selection size != n");
  StructuralBuffer buf(n, w_p, w_n);
  buf.views_ = 1;
  auto key_of = [](int i, int j) {
    return i < j ? StructuralBuffer::PairKey{i, j} : StructuralBuffer::PairKey{j, i};
  };
  auto nominate = [&](int i, int j, int sign) {
    auto key = key_of(i, j);
    if (buf.tombstones_.count(key)) return;
    auto [it, inserted] = buf.entries_.emplace(key, sign);
    if (!inserted && it->second != sign) {
      // e.g. positive via one endpoint and negative via the other
      buf.entries_.erase(it);
      buf.tombstones_.insert(key);
    }
  };
  for (int i = 0; i < n; ++i) {
    for (int j : pairs.positives[i]) nominate(i, j, +1);
  }
  for (int i = 0; i < n; ++i) {
    for (int j : pairs.negatives[i]) nominate(i, j, -1);
  }
  return buf;
}

StructuralBuffer merge_buffer(const StructuralBuffer& prev, const StructuralBuffer& incoming) {
  if (prev.n_ != incoming.n_)
    throw DataError("merge_buffer: sample count mismatch");
  if (prev.w_p_ != incoming.w_p_ || prev.w_n_ != incoming.w_n_)
    throw DataError("merge_buffer: weight mismatch");

  StructuralBuffer out(prev.n_, prev.w_p_, prev.w_n_);
  out.views_ = prev.views_ + incoming.views_;
  out.tombstones_ = prev.tombstones_;
  out.tombstones_.insert(incoming.tombstones_.begin(), incoming.tombstones_.end());

  for (const auto& [key, sign] : prev.entries_) {
    if (out.tombstones_.count(key)) continue;
    auto it = incoming.entries_.find(key);
    if (it != incoming.entries_.end() && it->second != sign) {
      out.tombstones_.insert(key);  // conflicting evidence -> unrelated, for good
    } else {
      out.entries_.emplace(key, sign);
    }
  }
  for (const auto& [key, sign] : incoming.entries_) {
    if (out.tombstones_.count(key)) continue;
    out.entries_.emplace(key, sign);
  }
  return out;
}

StructuralBuffer restrict_to_batches(const StructuralBuffer& buffer, int b) {
  if (b < 1 || b > buffer.sample_count())
    throw ConfigError("restrict_to_batches: batch size must be in [1, n]");
  StructuralBuffer out(buffer.sample_count(), buffer.positive_weight(),
                       buffer.negative_weight());
  out.views_ = buffer.views_;
  for (const auto& [key, sign] : buffer.entries_)
    if (key.first / b == key.second / b) out.entries_.emplace(key, sign);
  for (const auto& key : buffer.tombstones_)
    if (key.first / b == key.second / b) out.tombstones_.insert(key);
  return out;
}

void save_buffer(const std::string& path, const StructuralBuffer& buffer) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write buffer file: " + path);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d %d %.17g %.17g\n", buffer.sample_count(),
                buffer.views_merged(), buffer.positive_weight(), buffer.negative_weight());
  out << buf;

  // entries and tombstones interleaved in (i, j) order
  auto eit = buffer.entries().begin();
  auto tit = buffer.tombstones().begin();
  auto emit = [&](const StructuralBuffer::PairKey& key, double value) {
    std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", key.first, key.second, value);
    out << buf;
  };
  while (eit != buffer.entries().end() || tit != buffer.tombstones().end()) {
    bool take_entry = tit == buffer.tombstones().end() ||
                      (eit != buffer.entries().end() && eit->first < *tit);
    if (take_entry) {
      emit(eit->first, eit->second > 0 ? buffer.positive_weight() : -buffer.negative_weight());
      ++eit;
    } else {
      emit(*tit, 0.0);
      ++tit;
    }
  }
}

StructuralBuffer load_buffer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open buffer file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("buffer file missing header: " + path);
  int n = 0, v = 0;
  double w_p = 0, w_n = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> v >> w_p >> w_n))
      throw DataError("buffer file malformed header: '" + line + "'");
  }
  StructuralBuffer buf(n, w_p, w_n);
  buf.views_ = v;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ls(line);
    int i = 0, j = 0;
    double value = 0;
    if (!(ls >> i >> j >> value))
      throw DataError("buffer file malformed line " + std::to_string(row) + ": '" + line + "'");
    if (i >= j || i < 0 || j >= n)
      throw DataError("buffer file bad pair at line " + std::to_string(row));
    if (value == 0.0)
      buf.tombstones_.insert({i, j});
    else if (value == w_p)
      buf.entries_.emplace(StructuralBuffer::PairKey{i, j}, +1);
    else if (value == -w_n)
      buf.entries_.emplace(StructuralBuffer::PairKey{i, j}, -1);
    else
      throw DataError("buffer file value outside {w_p, -w_n, 0} at line " + std::to_string(row));
  }
  return buf;
}

}  // namespace cmvc
