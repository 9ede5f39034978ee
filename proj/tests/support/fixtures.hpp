#pragma once

#include "linking/linking_engine.hpp"
#include "linking/manifold_catalog.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

using linking::GridSpec;
using linking::Submanifold;

struct Fixture {
  std::string name;
  Submanifold K;
  Submanifold L;
  long expected;     // linking number Lk(K, L)
  GridSpec grid;     // main theorem / corollary base grid
  GridSpec join_grid;
};

/// Unit basis vector e_i of R^{n+1}.
linking::Vector axis(int n, int i);

/// Great S^k on axes 0..k and great S^l on axes k+1..n.
Fixture great_pair(int k, int l);
Fixture hopf_pair();
/// (p, q) torus curve against its copy shifted by pi/p in the second angle.
Fixture clifford_parallel(int p, int q);
/// (p, q) torus curve against the core circle in axes (2, 3); Lk = p.
Fixture clifford_core(int p, int q);
/// Perturbed great circles on axes (0, 1) and (2, 3).
Fixture fourier_pair(std::uint64_t seed, double amplitude = 0.2);
/// Small k-sphere around e_n and a small l-sphere around one of its points,
/// oriented so that Lk = +1.
Fixture meridian_pair(int k, int l, double r = 0.8, double rho = 0.5);

/// Pairs in S^3 used against the Gauss-integral oracle.
std::vector<Fixture> s3_curve_fixtures();
/// Broad set across dimensions, sized for quick runs.
std::vector<Fixture> catalog_fixtures();

/// Seeded source for the property-test generators.
struct Gen {
  explicit Gen(std::uint64_t seed);
  double uniform(double lo, double hi);
  int integer(int lo, int hi);  // inclusive
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace fixtures
