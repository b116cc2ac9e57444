// Partition functions, a tau polynomial and a pair correlation curve for small
// circular ensembles.

#include <iostream>

#include "spinekit/correlation.hpp"
#include "spinekit/tau.hpp"

using namespace spinekit;

int main() {
  // Z for the circular ensemble with beta = L^2: the momentum-zero moment is
  // the only nonzero one, so tau collapses to star(eps_0^M) / M!.
  for (auto [L, M] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{4, 2}}) {
    const SpineContext ctx(L, M);
    const auto spine = build_spine(ctx);
    const Rational z = hyperpfaffian(spine, moment_fn<Rational>(MomentSequence::circular(ctx)));
    std::cout << "Z(L=" << L << ", M=" << M << ") = " << z << "\n";
  }

  // tau_2 for L = 2 as a polynomial in the moments m_j, j in [-P, P].
  const auto tau = tau_polynomial(build_spine(SpineContext(2, 2)));
  std::cout << "tau(L=2, M=2) =";
  for (const auto& [js, c] : tau.terms()) std::cout << " + (" << c << ")*m[" << multiset_key(js) << "]";
  std::cout << "\n";

  // Any moment sequence works; here m_n = 1 / (n + 1) on [0, 8] (uniform on [0, 1]).
  std::map<long, Rational> uniform;
  for (long n = 0; n <= 8; ++n) uniform[n] = Rational(1, n + 1);
  const auto z = hyperpfaffian(build_spine(SpineContext(2, 2)), moment_fn<Rational>(MomentSequence::table(uniform)));
  std::cout << "Z for beta=4, M=2 on [0,1] = " << z << "\n";

  // Pair correlation on the circle for three particles at beta = 4.
  const auto curve = circular_pair_curve<Rational>(build_spine(SpineContext(2, 3)));
  std::cout << "R2 scale = " << curve.scale() << ", integral over [0, pi] = " << curve.normalization_integral() << "\n";
  for (const auto& [theta, v] : curve.grid(7)) std::cout << "  theta=" << theta << "  R2=" << v << "\n";
}
