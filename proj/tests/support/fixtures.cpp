#include "fixtures.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace fixtures {

using namespace linking;

Vector axis(int n, int i) {
  Vector v = Vector::Zero(n + 1);
  v[i] = 1.0;
  return v;
}

Fixture great_pair(int k, int l) {
  const int n = k + l + 1;
  std::vector<int> ka(k + 1);
  std::vector<int> la(l + 1);
  std::iota(ka.begin(), ka.end(), 0);
  std::iota(la.begin(), la.end(), k + 1);
  Fixture f;
  f.name = "great_" + std::to_string(k) + "_" + std::to_string(l) + "_" + std::to_string(n);
  f.K = great_subsphere(k, ka, n);
  f.L = great_subsphere(l, la, n);
  f.expected = 1;
  // exact on small grids; the doubled level is the check
  const int nodes = k + l >= 3 ? 8 : 16;
  f.grid = GridSpec{nodes, nodes, 0};
  f.join_grid = GridSpec{8, 8, 8};
  return f;
}

Fixture hopf_pair() {
  Fixture f;
  f.name = "hopf_fibers";
  const double c = std::cos(0.7);
  const double s = std::sin(0.7);
  f.K = hopf_fiber({1.0, 0.0, 0.0, 0.0});
  f.L = hopf_fiber({c, 0.0, s * std::cos(0.3), s * std::sin(0.3)});
  f.expected = 1;
  f.grid = GridSpec{32, 32, 0};
  f.join_grid = GridSpec{16, 16, 16};
  return f;
}

Fixture clifford_parallel(int p, int q) {
  Fixture f;
  f.name = "clifford_" + std::to_string(p) + "_" + std::to_string(q) + "_parallel";
  const double shift = std::numbers::pi / std::max(1, std::abs(p));
  f.K = clifford_torus_curve(p, q, 0.0);
  f.L = clifford_torus_curve(p, q, shift);
  f.expected = static_cast<long>(p) * q;
  f.grid = GridSpec{64, 64, 0};
  f.join_grid = GridSpec{64, 64, 16};
  return f;
}

Fixture clifford_core(int p, int q) {
  Fixture f;
  f.name = "clifford_" + std::to_string(p) + "_" + std::to_string(q) + "_core";
  f.K = clifford_torus_curve(p, q, 0.0);
  f.L = great_subsphere(1, {2, 3}, 3);
  f.expected = p;
  f.grid = GridSpec{64, 64, 0};
  f.join_grid = GridSpec{64, 64, 16};
  return f;
}

Fixture fourier_pair(std::uint64_t seed, double amplitude) {
  Fixture f;
  f.name = "fourier_seed_" + std::to_string(seed);
  f.K = fourier_curve(random_fourier_harmonics(3, 0, 1, 3, amplitude, seed));
  f.L = fourier_curve(random_fourier_harmonics(3, 2, 3, 3, amplitude, seed + 1000));
  f.expected = 1;
  f.grid = GridSpec{64, 64, 0};
  f.join_grid = GridSpec{64, 64, 16};
  return f;
}

Fixture meridian_pair(int k, int l, double r, double rho) {
  const int n = k + l + 1;
  std::vector<Vector> kframe;
  for (int i = 0; i <= k; ++i) kframe.push_back(axis(n, i));
  const Vector center = axis(n, n);
  const Vector m = std::cos(r) * center + std::sin(r) * axis(n, 0);
  const Vector w = std::cos(r) * axis(n, 0) - std::sin(r) * center;
  // at r = rho = pi/2 this deforms to the great pair with L's first axis moved
  // to the front and negated, which flips the sign by (-1)^(l+1)
  const double sign = l % 2 == 0 ? -1.0 : 1.0;
  std::vector<Vector> lframe{sign * w};
  for (int i = k + 1; i <= n - 1; ++i) lframe.push_back(axis(n, i));
  Fixture f;
  f.name = "meridian_" + std::to_string(k) + "_" + std::to_string(l) + "_" + std::to_string(n);
  f.K = small_round_sphere(k, SpherePoint(center), r, kframe);
  f.L = small_round_sphere(l, SpherePoint(m), rho, lframe);
  f.expected = 1;
  const int nodes = k + l >= 3 ? 16 : 32;
  f.grid = GridSpec{nodes, nodes, 0};
  // the u direction is resolved early; K and L need the nodes
  f.join_grid = k + l >= 3 ? GridSpec{32, 32, 8} : GridSpec{16, 16, 16};
  return f;
}

std::vector<Fixture> s3_curve_fixtures() {
  std::vector<Fixture> out;
  out.push_back(great_pair(1, 1));
  out.push_back(hopf_pair());
  for (auto [p, q] : {std::pair{1, 0}, {1, 1}, {1, -1}, {1, 2}, {2, -1}, {2, 3}, {2, -3}}) {
    out.push_back(clifford_parallel(p, q));
  }
  out.push_back(clifford_core(3, 2));
  for (std::uint64_t seed : {11u, 12u, 13u}) out.push_back(fourier_pair(seed));
  out.push_back(meridian_pair(1, 1));
  return out;
}

std::vector<Fixture> catalog_fixtures() {
  std::vector<Fixture> out;
  for (auto [k, l] : {std::pair{1, 1}, {0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}}) {
    out.push_back(great_pair(k, l));
  }
  out.push_back(hopf_pair());
  out.push_back(clifford_parallel(2, 3));
  out.push_back(clifford_core(3, 2));
  out.push_back(fourier_pair(11));
  for (auto [k, l] : {std::pair{1, 1}, {1, 2}, {2, 1}, {0, 2}}) out.push_back(meridian_pair(k, l));

  Fixture rot = great_pair(1, 1);
  const Rotation r = Rotation::random(3, 2024);
  rot.name = "rotated_great_1_1_3";
  rot.K = rotated(rot.K, r);
  rot.L = rotated(rot.L, r);
  out.push_back(rot);

  Fixture rev = hopf_pair();
  rev.name = "hopf_fibers_reversed_L";
  rev.L = reversed(rev.L);
  rev.expected = -1;
  out.push_back(rev);
  return out;
}

Gen::Gen(std::uint64_t seed) : rng_(seed) {}

double Gen::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

int Gen::integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

}  // namespace fixtures
