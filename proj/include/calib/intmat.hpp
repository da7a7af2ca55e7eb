#pragma once

// Exact integer and rational linear algebra for small lattices.

#include <vector>

#include <Eigen/Core>
#include <boost/rational.hpp>

namespace calib {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;
using Rational = boost::rational<long long>;
using RatVector = std::vector<Rational>;

/// U * A * V = S with U, V unimodular and S diagonal, s_1 | s_2 | ... | s_rank.
struct SmithForm {
    IntMatrix U;
    IntMatrix S;
    IntMatrix V;
    int rank = 0;
};

SmithForm smith_normal_form(const IntMatrix& a);

/// Row-style Hermite normal form H = W * A (W unimodular), echelon with positive pivots.
struct HermiteForm {
    IntMatrix H;
    IntMatrix W;
    std::vector<int> pivot_columns;
};

HermiteForm hermite_normal_form(const IntMatrix& a);

long long determinant(const IntMatrix& a);

/// Exact inverse of a matrix with determinant +-1.  Throws std::invalid_argument otherwise.
IntMatrix unimodular_inverse(const IntMatrix& a);

/// Columns form a Z-basis of {x in Z^n : A x = 0}.
IntMatrix integer_kernel(const IntMatrix& a);

/// Reduced row echelon form over Q; returns pivot columns.
std::vector<int> rref(std::vector<RatVector>& rows);

Rational frac_part(const Rational& q);
bool is_integer(const Rational& q);
RatVector mul(const IntMatrix& a, const RatVector& x);
RatVector reduce_mod1(RatVector x);

}  // namespace calib
