#pragma once

// Monodromy representations on fiber lattices, intertwiners with the dual
// representation, the mirror gluing maps and the period-map identities.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "calib/fibration.hpp"
#include "calib/forms.hpp"
#include "calib/intmat.hpp"
#include "calib/orbifold.hpp"

namespace calib {

/// Monodromy generators acting on a rank-n lattice.  Each has determinant +-1.
class IntegerRep {
public:
    explicit IntegerRep(std::vector<IntMatrix> generators);
    /// Linear parts of torus maps, e.g. read with parse_maps.
    static IntegerRep from_maps(const std::vector<AffineTorusMap>& maps);

    int rank() const { return rank_; }
    const std::vector<IntMatrix>& generators() const { return generators_; }
    /// Every element of the generated group.  Throws NonFiniteGroup past cap elements.
    std::vector<IntMatrix> closure(std::size_t cap = 4096) const;

private:
    int rank_ = 0;
    std::vector<IntMatrix> generators_;
};

/// (A^T)^{-1} in exact arithmetic.  Throws std::invalid_argument unless det A = +-1.
IntMatrix dual_rep(const IntMatrix& a);

/// True when K = A^T K A holds exactly for every generator.
bool is_intertwiner(const IntMatrix& k, const IntegerRep& rep);

/// Integer matrices with entries in [-entry_bound, entry_bound] and det != 0 solving
/// K = A^T K A for every generator, in lexicographic order of their entries.
std::vector<IntMatrix> solve_intertwiner(const IntegerRep& rep, int entry_bound);

/// The integer lattice of all solutions of K = A^T K A, as a basis of n x n matrices.
std::vector<IntMatrix> intertwiner_lattice(const IntegerRep& rep);

/// Rank 3 with the pattern [[*,*,0],[*,*,0],[0,0,1]].
bool block_structure_check(const IntMatrix& a);

/// The rank-3 block-form family diag(B, 1) for the given 2 x 2 blocks.
IntegerRep block_form_rep(const std::vector<IntMatrix>& blocks);

/// S = [[0,-1],[1,0]] and T = [[1,1],[0,1]], which generate SL(2,Z).
std::vector<IntMatrix> sl2z_generators();

enum class MirrorContext { CY3, G2Alpha };

/// mu on T^6 or eta on T^7.
AffineTorusMap mirror_glue_map(MirrorContext context);

/// The group of torus maps the glue map is meant to commute with.
std::vector<AffineTorusMap> mirror_context_group(MirrorContext context);

/// f o g == g o f, translations compared modulo 1.
bool commutes(const AffineTorusMap& f, const AffineTorusMap& g);

/// Expected pullback m^* source = sign * target.
struct PullbackRelation {
    std::string source_name;
    DifferentialForm source;
    int sign = 1;
    std::string target_name;
    DifferentialForm target;
};

/// How m^* acts on forms: by the linear part D of m, or by D^{-1}
/// (pulling back along the gluing map in the opposite direction).
enum class PullbackConvention { Forward, Inverse };

std::string to_string(PullbackConvention c);

struct RelationResult {
    std::string label;     // "m^*(a) = -b"
    double residual = 0.0;  // largest coefficient of m^* a - sign * b
    bool pass = false;
    std::string computed;  // m^* a written out
};

struct ConventionResult {
    PullbackConvention convention;
    std::vector<RelationResult> relations;
    bool all_pass = false;
};

struct PullbackReport {
    std::vector<ConventionResult> conventions;
    /// First convention under which every relation holds, if any.
    std::optional<PullbackConvention> adopted;
    bool pass() const { return adopted.has_value(); }
};

/// Each relation is checked under both conventions; one convention must satisfy them all.
PullbackReport pullback_relations_check(const AffineTorusMap& m, const std::vector<PullbackRelation>& relations,
                                        double tol = 1e-12);

/// Relations quoted for the gluing maps: mu^* w' = Im eta, mu^* Im eta = -w', mu^* Re eta = Re eta
/// on T^6, and eta^* w1 = w3, eta^* w3 = -w1, eta^* w2 = w2 for the G2 triple on T^7.
std::vector<PullbackRelation> mirror_relations(MirrorContext context);

/// Named forms usable in relation files: omega', Re_eta, Im_eta (CY3) or omega1..3 (G2).
std::map<std::string, DifferentialForm> relation_forms(MirrorContext context);

/// One relation per line, "source -> [+|-]target", '#' comments; names from the registry.
std::vector<PullbackRelation> parse_relations(const std::string& text,
                                              const std::map<std::string, DifferentialForm>& registry);

/// Integral over the fiber of (i_v Im phi) ^ u.  u must be a 1-form and the fiber 3-dimensional.
double period_map_alpha(const DifferentialForm& u, const Vector& v, const CalibrationPackage& pkg,
                        const ImmersedGrid& fiber);

/// Signed permutation from a cohomology basis to a homology basis; column i is the image of
/// source i.
struct BasisMap {
    std::vector<std::string> source_labels;
    std::vector<std::string> target_labels;
    IntMatrix matrix;

    /// Throws std::invalid_argument unless matrix is a square signed permutation matching the labels.
    void validate() const;
};

/// rho : dy1 -> -d/dy2, dy2 -> d/dy1, dy3 -> d/dy3, written on the product basis
/// (beta^1, beta^2, [dy3]) -> (beta_1, beta_2, [S^1]).
BasisMap reference_rho();

/// A fiber L = T x S^1 in a bad neighbourhood with the data needed to compare periods.
struct ProductFrame {
    ImmersedGrid fiber;
    /// beta^1, beta^2, [dy3] as constant 1-forms.
    std::vector<DifferentialForm> cobasis;
    /// beta_1, beta_2, [S^1] as unit-period straight cycles (direction vectors).
    std::vector<Vector> cycles;
    /// v_1, v_2, d/dx3, normal to the fiber.
    std::vector<Vector> normals;
    /// Im eta + dx3 ^ dy3.
    DifferentialForm omega_star{6, 2};
};

/// T is the (y1, y2) torus oriented so that Re eta restricts positively, with beta^1 ^ beta^2 > 0
/// on T; the normals solve omega*(v_j, cycle_k) = delta_jk within span(dx1, dx2, dx3).
ProductFrame bad_neighborhood_frame(double a = 0.25, double b = 0.25, double c = 0.0, int resolution = 4);

struct SymplecticMirrorReport {
    /// alpha(cobasis_i)(normal_j).
    Matrix alpha;
    /// sum_k rho_ki xi'(cycle_k)(normal_j) with xi'(h)(v) = omega*(v, h).
    Matrix xi_rho;
    double max_difference = 0.0;
    bool pass = false;
};

/// Compares alpha with xi' o rho on the product basis.  Throws std::invalid_argument when the
/// fiber has zero volume.
SymplecticMirrorReport symplectic_mirror_check(const BasisMap& rho, const CalibrationPackage& pkg,
                                               const ProductFrame& frame, double tol = 1e-12);

}  // namespace calib
