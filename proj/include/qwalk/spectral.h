#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/grid.h"
#include "qwalk/walk.h"

namespace qwalk {

/// Raised when an explicit construction would exceed its size guard.
class ResourceLimitError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Raised for momentum pairs with sin(theta) = 0, where the coin-vector
/// formulas divide by zero.
class DegeneratePairError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Eigenphase in [0, pi] of the unmarked walk for momentum (k, l) != (0, 0):
/// cos(theta) = (cos(2 pi k / n) + cos(2 pi l / n)) / 2.
double theta(const GridGeometry &geom, long long k, long long l);

/// True when sin(theta_{k,l}) = 0, i.e. k = l = n/2 (mod n).
bool is_degenerate(const GridGeometry &geom, long long k, long long l);

enum class Branch { Plus, Minus };

/// Momentum pair with its eigenphase and coin vectors in (down, up, right, left)
/// order:
///   v+ = i / (2 sqrt2 sin th) [e^{-i th} - w^k, e^{-i th} - w^{-k}, e^{-i th} - w^l, e^{-i th} - w^{-l}]
///   v- = i / (2 sqrt2 sin th) [w^k - e^{i th}, w^{-k} - e^{i th}, w^l - e^{i th}, w^{-l} - e^{i th}]
/// The coin vectors stay zero for degenerate pairs.
struct SpectralPair {
    int k = 0;
    int l = 0;
    double theta = 0;
    CoinVector v_plus{};
    CoinVector v_minus{};
    bool degenerate = false;
};

SpectralPair spectral_pair(const GridGeometry &geom, long long k, long long l);

/// Phi = xi_k (rows) (x) xi_l (columns) (x) v: amplitude w^{k y + l x} / n * v_d at
/// column x, row y. Under Walker::step, Phi+ picks up e^{+i theta} and Phi-
/// picks up e^{-i theta}.
WalkState eigenvector(const GridGeometry &geom, long long k, long long l, Branch branch);

/// Sign convention for the cot-weighted sum in the predicted final state.
enum class CotSign {
    /// psi_good + sum 1/sqrt(2N) i cot(th/2) (Phi- - Phi+): the term attaches
    /// to the eigenvector with eigenvalue e^{-i theta} under Walker::step. This
    /// is the orientation the simulated search state follows.
    MatchesWalk,
    /// psi_good + sum 1/sqrt(2N) i cot(th/2) (Phi+ - Phi-), eigenvalue labels
    /// taken literally from the coin-vector formulas.
    Literal,
};

struct FinalStatePrediction {
    GridGeometry geometry;
    Site marked;
    WalkState state;  ///< unnormalized
    double norm = 0;

    WalkState normalized() const;
};

/// Assembles psi_good + sum over non-degenerate (k, l) of the cot-weighted
/// eigenvector differences. Built at the origin with an O(n^3) row/column
/// transform per coin plane, then translated so psi_good sits on `marked`.
FinalStatePrediction predict_final_state(const GridGeometry &geom, Site marked,
                                         CotSign sign = CotSign::MatchesWalk);

/// a = 1 + i/2 cot((alpha + th)/2) + i/2 cot((-alpha + th)/2)
/// b = 1 + i/2 cot((alpha - th)/2) + i/2 cot((-alpha - th)/2)
/// Throws std::domain_error within 1e-12 of a cot pole.
std::pair<Complex, Complex> ab_coefficients(double theta, double alpha);

/// Dense matrix of one unmarked step, row/column index = storage index.
/// Guarded to n <= 16.
Eigen::MatrixXcd dense_step_operator(const GridGeometry &geom);

/// Storage-order vector view of a state, for the dense oracle.
Eigen::VectorXcd to_vector(const WalkState &state);
WalkState from_vector(const GridGeometry &geom, const Eigen::VectorXcd &v);

struct EigenResidual {
    int k = 0;
    int l = 0;
    Branch branch = Branch::Plus;
    double theta = 0;
    double residual = 0;  ///< || step(Phi) - e^{+-i theta} Phi ||
};

/// Residual of the eigen-relation for every non-degenerate (k, l) and branch,
/// with Walker::step as the operator.
std::vector<EigenResidual> eigen_residuals(const GridGeometry &geom);

struct SpectrumComparison {
    std::size_t dimension = 0;
    std::size_t nondegenerate_pairs = 0;
    std::size_t plus_one = 0;   ///< dense eigenvalues within tolerance of +1
    std::size_t minus_one = 0;  ///< dense eigenvalues within tolerance of -1
    double max_phase_error = 0;  ///< sorted-multiset distance of the remaining phases to {+-theta}
    bool complete = false;       ///< 2 * pairs + plus_one + minus_one == 4N and all phases matched
    double unitarity_error = 0;  ///< max |U U^H - I|
};

/// Dense eigensolve of the unmarked step compared with the closed-form phases.
SpectrumComparison compare_spectrum(const GridGeometry &geom, double tolerance = 1e-9);

}  // namespace qwalk
