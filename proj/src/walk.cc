#include "qwalk/walk.h"

#include <cmath>
#include <numeric>

namespace qwalk {

Walker::Walker(GridGeometry geom, const MarkedSet &marked, int workers)
    : geom_(geom), marked_mask_(geom.sites(), 0), scratch_(geom.amplitudes()), workers_(workers) {
    if (workers_ < 1) {
        throw std::invalid_argument("worker count must be positive");
    }
    for (const Site &s : marked.sites()) {
        if (!geom_.contains(s)) {
            throw std::invalid_argument("marked site outside grid");
        }
        marked_mask_[geom_.site_index(s)] = 1;
    }
}

template <bool ApplyCoin>
void Walker::apply(WalkState &state) {
    if (!(state.geometry() == geom_)) {
        throw std::invalid_argument("state geometry does not match walker");
    }
    const int n = geom_.n();
    const std::size_t plane = geom_.sites();
    const Complex *src = state.amplitudes().data();
    Complex *dst = scratch_.data();
    const Complex *down = src + index_of(Direction::Down) * plane;
    const Complex *up = src + index_of(Direction::Up) * plane;
    const Complex *right = src + index_of(Direction::Right) * plane;
    const Complex *left = src + index_of(Direction::Left) * plane;
    Complex *out_down = dst + index_of(Direction::Down) * plane;
    Complex *out_up = dst + index_of(Direction::Up) * plane;
    Complex *out_right = dst + index_of(Direction::Right) * plane;
    Complex *out_left = dst + index_of(Direction::Left) * plane;
    const std::uint8_t *mask = marked_mask_.data();

    // Each destination amplitude is written exactly once, so rows can be
    // split across workers without changing a single bit of the result.
#pragma omp parallel for schedule(static) num_threads(workers_)
    for (int y = 0; y < n; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * n;
        const std::size_t row_above = static_cast<std::size_t>(y == 0 ? n - 1 : y - 1) * n;
        const std::size_t row_below = static_cast<std::size_t>(y == n - 1 ? 0 : y + 1) * n;
        for (int x = 0; x < n; ++x) {
            const std::size_t i = row + x;
            Complex cd = down[i], cu = up[i], cr = right[i], cl = left[i];
            if constexpr (ApplyCoin) {
                if (mask[i]) {
                    cd = -cd;
                    cu = -cu;
                    cr = -cr;
                    cl = -cl;
                } else {
                    const Complex half = (cd + cu + cr + cl) * 0.5;
                    cd = half - cd;
                    cu = half - cu;
                    cr = half - cr;
                    cl = half - cl;
                }
            }
            const int x_left = x == 0 ? n - 1 : x - 1;
            const int x_right = x == n - 1 ? 0 : x + 1;
            out_down[row_above + x] = cu;
            out_up[row_below + x] = cd;
            out_right[row + x_left] = cl;
            out_left[row + x_right] = cr;
        }
    }
    state.swap_buffer(scratch_);
}

void Walker::step(WalkState &state) { apply<true>(state); }

void Walker::shift_only(WalkState &state) { apply<false>(state); }

void Walker::run(WalkState &state, std::size_t steps, std::span<const StepObserver> observers) {
    for (std::size_t t = 1; t <= steps; ++t) {
        step(state);
        for (const auto &obs : observers) {
            obs(t, state);
        }
    }
}

WalkState step(const WalkState &state, const MarkedSet &marked) {
    Walker walker(state.geometry(), marked);
    WalkState out = state;
    walker.step(out);
    return out;
}

WalkState run(const WalkState &initial, const MarkedSet &marked, std::size_t steps,
              std::span<const StepObserver> observers, int workers) {
    Walker walker(initial.geometry(), marked, workers);
    WalkState state = initial;
    walker.run(state, steps, observers);
    return state;
}

double uniform_overlap_magnitude(const WalkState &state) {
    const std::size_t n = state.geometry().n();
    const std::size_t rows = 4 * n;
    auto amps = state.amplitudes();
    std::vector<Complex> partial(rows);
#pragma omp parallel for schedule(static)
    for (std::size_t r = 0; r < rows; ++r) {
        Complex acc = 0;
        for (std::size_t i = r * n; i < (r + 1) * n; ++i) {
            acc += amps[i];
        }
        partial[r] = acc;
    }
    const Complex total = std::accumulate(partial.begin(), partial.end(), Complex(0.0));
    return std::abs(total) / (2.0 * static_cast<double>(n));
}

double marked_probability(const WalkState &state, const MarkedSet &marked) {
    double p = 0;
    for (const Site &s : marked.sites()) {
        p += site_probability(state, s);
    }
    return p;
}

StepObserver OverlapTrace::observer() {
    return [this](std::size_t, const WalkState &s) { values_.push_back(uniform_overlap_magnitude(s)); };
}

StepObserver MarkedProbabilityTrace::observer() {
    return [this](std::size_t, const WalkState &s) { values_.push_back(marked_probability(s, marked_)); };
}

}  // namespace qwalk
