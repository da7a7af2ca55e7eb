#pragma once

// Finite affine group actions on flat tori T^n = R^n / Z^n, in exact arithmetic.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "calib/intmat.hpp"

namespace calib {

/// x -> D x + b (mod Z^n), det D = +-1, b reduced to [0,1).
class AffineTorusMap {
public:
    AffineTorusMap(IntMatrix linear, RatVector translation, std::string name = {});
    /// Linear part only.
    explicit AffineTorusMap(IntMatrix linear, std::string name = {});

    static AffineTorusMap identity(int n);
    static AffineTorusMap translation(RatVector b, std::string name = {});
    /// Signed coordinate permutation: image coordinate i is sign[i] * x[source[i]] + b[i].
    static AffineTorusMap signed_permutation(const std::vector<int>& source, const std::vector<int>& sign,
                                             RatVector b = {}, std::string name = {});

    int dim() const { return static_cast<int>(linear_.rows()); }
    const IntMatrix& linear() const { return linear_; }
    const RatVector& translation() const { return translation_; }
    const std::string& name() const { return name_; }
    AffineTorusMap renamed(std::string name) const;

    RatVector apply(const RatVector& x) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

    bool is_identity() const;
    friend bool operator==(const AffineTorusMap& f, const AffineTorusMap& g) {
        return f.linear_ == g.linear_ && f.translation_ == g.translation_;
    }

private:
    IntMatrix linear_;
    RatVector translation_;
    std::string name_;
};

/// f o g.
AffineTorusMap compose(const AffineTorusMap& f, const AffineTorusMap& g);
AffineTorusMap inverse(const AffineTorusMap& f);

/// p + span_R(directions) mod Z^n.  Directions are the columns of an n x d integer matrix.
struct AffineSubtorus {
    RatVector base_point;
    IntMatrix directions;

    int dim() const { return static_cast<int>(directions.cols()); }
    int ambient_dim() const { return static_cast<int>(base_point.size()); }

    bool contains(const RatVector& x) const;
    /// Rows W and right-hand side c with  x in component  <=>  W x = c (mod Z).
    std::pair<IntMatrix, RatVector> congruences() const;

    friend bool operator==(const AffineSubtorus& a, const AffineSubtorus& b) {
        return a.base_point == b.base_point && a.directions == b.directions;
    }
};

/// All x in T^n with A x = b (mod Z^m), as sorted, pairwise disjoint components.
std::vector<AffineSubtorus> solve_congruence(const IntMatrix& a, const RatVector& b);

std::vector<AffineSubtorus> fixed_locus(const AffineTorusMap& f);
bool is_free(const AffineTorusMap& f);

/// Components of A intersected with B.
std::vector<AffineSubtorus> intersect(const AffineSubtorus& a, const AffineSubtorus& b);

struct IntersectionWitness {
    std::size_t map_a = 0;
    std::size_t component_a = 0;
    std::size_t map_b = 0;
    std::size_t component_b = 0;
    RatVector point;
};

struct DisjointnessReport {
    bool disjoint = true;
    std::size_t pairs_checked = 0;
    std::vector<IntersectionWitness> witnesses;
};

DisjointnessReport loci_pairwise_disjoint(const std::vector<AffineTorusMap>& maps);

class NonFiniteGroup : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FiniteGroupAction {
    std::vector<AffineTorusMap> generators;
    std::vector<AffineTorusMap> elements;

    std::size_t order() const { return elements.size(); }
    bool is_abelian() const;
    bool generators_are_involutions() const;
    bool contains(const AffineTorusMap& f) const;
};

/// Throws NonFiniteGroup once the closure exceeds `cap` elements.
FiniteGroupAction group_closure(const std::vector<AffineTorusMap>& generators, std::size_t cap = 4096);

/// Distance on R^n / Z^n in the sup norm.
double torus_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

std::vector<Eigen::VectorXd> orbit(const Eigen::VectorXd& p, const FiniteGroupAction& group, double tol = 1e-9);
std::vector<RatVector> orbit(const RatVector& p, const FiniteGroupAction& group);

/// Orbit of p under G, counted up to the action of a subgroup H (points of G.p modulo H).
std::vector<RatVector> orbit_modulo(const RatVector& p, const FiniteGroupAction& group,
                                    const FiniteGroupAction& subgroup);

std::string to_string(const RatVector& x);
RatVector rat_vector(const std::vector<std::pair<long long, long long>>& fractions);
Eigen::VectorXd to_real(const RatVector& x);

}  // namespace calib
