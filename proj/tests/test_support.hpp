#pragma once

// Random fixtures shared by the unit suites.

#include <random>
#include <vector>

#include "spinekit/sparse_form.hpp"

namespace spinekit::testing {

inline Rational random_rational(std::mt19937_64& rng, int num_span = 9, int den_max = 5) {
  std::uniform_int_distribution<int> num(-num_span, num_span);
  std::uniform_int_distribution<int> den(1, den_max);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Rational random_nonzero_rational(std::mt19937_64& rng) {
  Rational q;
  do q = random_rational(rng);
  while (q == 0);
  return q;
}

// Random form with up to `terms` blades of the given degree.
inline SparseForm<Rational> random_form(std::mt19937_64& rng, int degree, int dim, int terms) {
  std::vector<SparseForm<Rational>::Term> t;
  std::vector<int> idx(dim);
  for (int i = 0; i < dim; ++i) idx[i] = i;
  for (int n = 0; n < terms; ++n) {
    std::shuffle(idx.begin(), idx.end(), rng);
    BladeKey key = 0;
    for (int i = 0; i < degree; ++i) key |= BladeKey{1} << idx[i];
    t.emplace_back(key, random_rational(rng));
  }
  return SparseForm<Rational>::from_terms(degree, dim, std::move(t));
}

}  // namespace spinekit::testing
