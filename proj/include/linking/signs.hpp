#pragma once

// Every orientation sign used by the evaluators, in one place.
//
// Derivation of the reduced join-degree integrand:
//   det(f, f_s, f_t, f_u) = u_column_move(n) * det(f, f_u, f_s, f_t)
//   det(f, f_u, f_s, f_t) = reduced_determinant(k, l)
//                           * (pi - a) / sin^n a * A^k B^l * [x, dx, y, dy]
// so the integrand of deg f carries join_reduced_prefactor(n) = -1.

namespace linking::signs {

/// (-1)^e for any integer e.
int minus_one_pow(int e);

/// [y, dy, x, dx] = block_swap(k, l) * [x, dx, y, dy].
int block_swap(int k, int l);

/// Moving the u-derivative column from last place to second: (-1)^{n-1}.
int u_column_move(int n);

/// Moving the y column past the k columns of dx: (-1)^k.
int y_column_move(int k);

/// Sign of det(f, f_u, f_s, f_t) against (pi - a)/sin^n a A^k B^l [x, dx, y, dy]:
/// -1 from f ^ f_u, (-1)^l from the -B factors, y_column_move(k). Equals (-1)^n.
int reduced_determinant(int k, int l);

/// Overall sign of the reduced join-degree integrand, u_column_move * reduced_determinant.
int join_reduced_prefactor(int k, int l);

/// Lk(K, L) = degree_to_linking() * deg f.
int degree_to_linking();

/// [x, dx, -y, -dy] = antipodal_bracket(l) * [x, dx, y, dy]: (-1)^{l+1}.
int antipodal_bracket(int l);

/// Leading sign of the convolution integral: (-1)^k.
int corollary_prefactor(int k);

/// Weight of Lk(K, -L) on the left side of the convolution identity: (-1)^n.
int corollary_antipodal_weight(int n);

}  // namespace linking::signs
