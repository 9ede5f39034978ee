#include "linking/signs.hpp"

namespace linking::signs {

int minus_one_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

int block_swap(int k, int l) { return minus_one_pow((k + 1) * (l + 1)); }

int u_column_move(int n) { return minus_one_pow(n - 1); }

int y_column_move(int k) { return minus_one_pow(k); }

int reduced_determinant(int k, int l) { return -1 * minus_one_pow(l) * y_column_move(k); }

int join_reduced_prefactor(int k, int l) {
  return u_column_move(k + l + 1) * reduced_determinant(k, l);
}

int degree_to_linking() { return -1; }

int antipodal_bracket(int l) { return minus_one_pow(l + 1); }

int corollary_prefactor(int k) { return minus_one_pow(k); }

int corollary_antipodal_weight(int n) { return minus_one_pow(n); }

}  // namespace linking::signs
