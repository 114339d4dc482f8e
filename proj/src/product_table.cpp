#include "superad/product_table.hpp"

#include <mutex>
#include <string>

#include "superad/errors.hpp"

namespace superad {

namespace {

ProductTable::Row make_row(std::vector<std::pair<int, Rational>> entries) {
  ProductTable::Row r;
  for (auto& [j, d] : entries) {
    if (sgn(d) == 0) continue;
    r.index.push_back(j);
    r.approx.push_back(d.get_d());
    r.exact.push_back(std::move(d));
  }
  return r;
}

}  // namespace

ProductTable::ProductTable(int max_index) : max_index_(max_index) {
  if (max_index < 2) throw InvalidInput("product table cap must be >= 2");
}

ProductTable& ProductTable::shared() {
  static ProductTable table;
  return table;
}

void ProductTable::set_max_index(int max_index) {
  std::unique_lock lock(mutex_);
  if (max_index < 2) throw InvalidInput("product table cap must be >= 2");
  max_index_ = max_index;
}

std::size_t ProductTable::cached_rows() const {
  std::shared_lock lock(mutex_);
  return same_.size() + mixed_.size();
}

const ProductTable::Row& ProductTable::row(int k, int m) const {
  if (k < 1 || m < 1) throw InvalidInput("pole basis index must be >= 1");
  {
    std::shared_lock lock(mutex_);
    if (k > max_index_ || m > max_index_) {
      throw CapacityError("product e_" + std::to_string(k) + " e_" + std::to_string(m) +
                          " exceeds table cap " + std::to_string(max_index_));
    }
    if ((k % 2) == (m % 2)) {
      auto it = same_.find({std::min(k, m), std::max(k, m)});
      if (it != same_.end()) return it->second;
    } else {
      const int odd = (k % 2) ? k : m;
      const int even = (k % 2) ? m : k;
      auto it = mixed_.find({(odd + 1) / 2, even / 2});
      if (it != mixed_.end()) return it->second;
    }
  }
  std::unique_lock lock(mutex_);
  if ((k % 2) == (m % 2)) {
    const Key key{std::min(k, m), std::max(k, m)};
    auto it = same_.find(key);
    if (it != same_.end()) return it->second;
    // (1+it)^{-a}(1+it)^{-b}: exponents add
    const int a = (k + 1) / 2, b = (m + 1) / 2;
    const int j = (k % 2) ? 2 * (a + b) - 1 : k + m;
    return same_.emplace(key, make_row({{j, Rational(1)}})).first->second;
  }
  const int odd = (k % 2) ? k : m;
  const int even = (k % 2) ? m : k;
  return mixed_locked((odd + 1) / 2, even / 2);
}

const ProductTable::Row& ProductTable::mixed_locked(int big_k, int big_m) const {
  auto it = mixed_.find({big_k, big_m});
  if (it != mixed_.end()) return it->second;

  const Rational half(1, 2);
  std::vector<std::pair<int, Rational>> entries;
  if (big_m == 1) {
    if (big_k == 1) {
      entries = {{1, half}, {2, half}};
    } else {
      // e_{k+2} e_2 = (e_{k+2} + e_k e_2)/2
      const Row& prev = mixed_locked(big_k - 1, 1);
      for (std::size_t q = 0; q < prev.index.size(); ++q) {
        entries.emplace_back(prev.index[q], prev.exact[q] * half);
      }
      entries.emplace_back(2 * big_k - 1, half);
    }
  } else {
    // e_k e_{m+2} = (e_k e_m) e_2, distributing e_2 over the row
    const Row& prev = mixed_locked(big_k, big_m - 1);
    std::map<int, Rational> acc;
    for (std::size_t q = 0; q < prev.index.size(); ++q) {
      const int j = prev.index[q];
      if (j % 2 == 0) {
        acc[j + 2] += prev.exact[q];
      } else {
        const Row& r = mixed_locked((j + 1) / 2, 1);
        for (std::size_t p = 0; p < r.index.size(); ++p) acc[r.index[p]] += prev.exact[q] * r.exact[p];
      }
    }
    for (auto& [j, d] : acc) entries.emplace_back(j, d);
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return mixed_.emplace(Key{big_k, big_m}, make_row(std::move(entries))).first->second;
}

}  // namespace superad
