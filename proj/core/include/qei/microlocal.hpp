#pragma once

#include "qei/qwei.hpp"
#include "qei/states.hpp"
#include "qei/window.hpp"

#include <array>
#include <optional>
#include <vector>

namespace qei {

enum class ProbeClass { Regular, Singular, Inconclusive };
std::string to_string(ProbeClass c);

/// Covector direction (zeta, xi; zeta', xi') on M x M, normalized to unit
/// Euclidean length.
struct CovectorPair {
    double zeta = 0.0, xi = 0.0, zetap = 0.0, xip = 0.0;
    CovectorPair normalized() const;
    double norm() const;
};

/// One windowed-Fourier decay probe: base pair, direction, window widths and
/// the geometric lambda grid. The probe measures
///   I(lambda) = u( chi e^{i lambda <l, . - base>} )
/// and fits the decay order nu on the upper half of the grid; condition (B)'s
/// sup over a direction neighborhood is realized by a small jitter set.
struct DirectionProbe {
    SpacetimePoint p0, q0;
    CovectorPair ell;
    double window_t = 1.0;
    double window_x = 1.0;
    std::vector<double> lambdas;     ///< geometric, e.g. 2 .. 64
    double jitter = 0.02;
    double nu_regular = 3.0;         ///< classify regular if nu >= this
    double nu_singular = 1.0;        ///< classify singular if nu <= this

    static std::vector<double> default_lambda_grid(double lo = 2.0, double hi = 64.0);
};

struct DecayResult {
    std::vector<double> lambdas;
    std::vector<double> magnitudes; ///< sup over the jitter set per lambda
    double nu_fit = 0.0;
    double fit_residual = 0.0;
    ProbeClass classification = ProbeClass::Inconclusive;
    bool lambda_range_truncated = false; ///< cutoff rule clipped the grid
    bool below_floor = false;            ///< decayed under the numeric floor
};

/// Decay probe of a stationary diagonal state's two-point function on the
/// analytic cylinder (occupations n_j; empty vector = ground). The mode sum
/// factorizes through the windows' Fourier transforms, so each magnitude is
/// a certified closed-form evaluation.
DecayResult windowed_decay(const ModeCatalog& cat, const Eigen::VectorXd& occupations,
                           const DirectionProbe& probe);

/// Control probe on a smooth Gaussian blob of width sigma at the base pair:
/// every direction must come out regular with large nu.
DecayResult windowed_decay_blob(const DirectionProbe& probe, double sigma);

/// Exact geometric classification from the Hadamard wave-front pattern
/// (x,k; x',-k'), k future null, (x,k) ~ (x',k'): on the flat cylinder the
/// null relation includes windings x' - x = -s xi + n L along t' - t = s zeta.
ProbeClass cone_classify(const ModeCatalog& cat, SpacetimePoint p0, SpacetimePoint q0,
                         const CovectorPair& ell, double tol = 1e-12);

/// Embedding maps whose pull-backs the QWEI construction uses.
enum class PullbackMap { WorldlinePair, TwoTime, EqualTimeDiagonal };

/// Candidate singular cones to intersect with a conormal bundle.
struct ConeSpec {
    enum class Kind {
        HadamardState, ///< (k; -k'), k in N^+ nonzero, null-related
        ProductCone,   ///< (N^+ u Z) x (N^- u Z) minus Z x Z
        VCone,         ///< (N^+ x Z) u (Z x N^-)
        Custom         ///< explicit covector samples
    };
    Kind kind = Kind::HadamardState;
    std::vector<std::array<double, 4>> samples; ///< Custom only
};

struct TransversalityResult {
    bool disjoint = false;
    std::optional<std::array<double, 4>> witness; ///< an overlapping covector
};

/// Closed-form intersection of the map's conormal bundle with the cone.
TransversalityResult conormal_transversality(PullbackMap map, const ConeSpec& cone);

/// Smallest atom location of the pulled-back energy spectrum: equals
/// omega_1 = m for the gapped cylinder ground reference, and is negative for
/// KMS references.
double spectrum_support_probe(const ModeCatalog& cat, double x,
                              const ReferenceSpec& ref = ReferenceSpec::ground());

} // namespace qei
