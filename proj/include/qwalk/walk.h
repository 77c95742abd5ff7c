#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qwalk/grid.h"

namespace qwalk {

using CoinVector = std::array<Complex, 4>;

/// Grover diffusion D = J/2 - I: component d becomes sum/2 - v[d].
constexpr CoinVector grover_coin(const CoinVector &v) {
    const Complex half = (v[0] + v[1] + v[2] + v[3]) * 0.5;
    return {half - v[0], half - v[1], half - v[2], half - v[3]};
}

/// Read-only callback run after each step with the step index t (1-based).
using StepObserver = std::function<void(std::size_t t, const WalkState &)>;

/// Applies the perturbed walk in place: Grover coin at unmarked sites, -I at
/// marked sites, then the direction-flipping shift
///   up    at (x, y) -> down  at (x, y-1)
///   down  at (x, y) -> up    at (x, y+1)
///   left  at (x, y) -> right at (x-1, y)
///   right at (x, y) -> left  at (x+1, y)
/// with torus wraparound. The shift writes into an owned scratch buffer which
/// is swapped with the state's storage, so stepping allocates nothing.
class Walker {
   public:
    Walker(GridGeometry geom, const MarkedSet &marked, int workers = 1);

    const GridGeometry &geometry() const { return geom_; }
    int workers() const { return workers_; }

    void step(WalkState &state);

    /// Shift without any coin. Test hook: shift composed with itself is the identity.
    void shift_only(WalkState &state);

    /// Applies `steps` steps, invoking every observer after each one in order.
    void run(WalkState &state, std::size_t steps, std::span<const StepObserver> observers = {});

   private:
    template <bool ApplyCoin>
    void apply(WalkState &state);

    GridGeometry geom_;
    std::vector<std::uint8_t> marked_mask_;
    std::vector<Complex> scratch_;
    int workers_;
};

/// One step of the walk, returning the new state.
WalkState step(const WalkState &state, const MarkedSet &marked);

/// `steps` steps from `initial`; observers run after each step.
WalkState run(const WalkState &initial, const MarkedSet &marked, std::size_t steps,
              std::span<const StepObserver> observers = {}, int workers = 1);

/// |<psi(t)|psi(0)>| per step, where psi(0) is the uniform state.
class OverlapTrace {
   public:
    StepObserver observer();
    const std::vector<double> &values() const { return values_; }

   private:
    std::vector<double> values_;
};

/// Total probability on the marked sites per step.
class MarkedProbabilityTrace {
   public:
    explicit MarkedProbabilityTrace(const MarkedSet &marked) : marked_(marked) {}
    StepObserver observer();
    const std::vector<double> &values() const { return values_; }

   private:
    MarkedSet marked_;
    std::vector<double> values_;
};

/// |<uniform|state>| computed with a fixed, row-ordered summation.
double uniform_overlap_magnitude(const WalkState &state);

double marked_probability(const WalkState &state, const MarkedSet &marked);

}  // namespace qwalk
