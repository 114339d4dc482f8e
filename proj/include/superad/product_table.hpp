#pragma once

#include <map>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "superad/complex_rational.hpp"

namespace superad {

/// Memoized coefficients d_{k,m,j} of e_k e_m = sum_j d_{k,m,j} e_j.
///
/// Same-parity products are single terms. Mixed products follow the
/// recursion
///   e_1 e_2 = (e_1 + e_2)/2,
///   e_{k+2} e_2 = (e_{k+2} + e_k e_2)/2,
///   e_k e_{m+2} = (e_k e_m) e_2,
/// evaluated lazily. Reads take a shared lock; a miss upgrades to an
/// exclusive lock and fills every row it needs.
class ProductTable {
 public:
  struct Row {
    std::vector<int> index;
    std::vector<Rational> exact;
    std::vector<double> approx;  // exact[] rounded, for the double kernels
  };

  static constexpr int kDefaultMaxIndex = 256;

  explicit ProductTable(int max_index = kDefaultMaxIndex);
  ProductTable(const ProductTable&) = delete;
  ProductTable& operator=(const ProductTable&) = delete;

  /// Process-wide table used by `multiply`.
  static ProductTable& shared();

  int max_index() const { return max_index_; }
  /// Raises the cap; existing rows stay valid.
  void set_max_index(int max_index);

  /// Row for e_k e_m. Throws InvalidInput for k or m < 1 and CapacityError
  /// above the cap. The reference stays valid for the table's lifetime.
  const Row& row(int k, int m) const;

  std::size_t cached_rows() const;

 private:
  using Key = std::pair<int, int>;
  const Row& mixed_locked(int big_k, int big_m) const;  // u^{-K} v^{-M}

  int max_index_;
  mutable std::shared_mutex mutex_;
  mutable std::map<Key, Row> same_;   // key (k, m) with k <= m, same parity
  mutable std::map<Key, Row> mixed_;  // key (K, M) exponents
};

}  // namespace superad
