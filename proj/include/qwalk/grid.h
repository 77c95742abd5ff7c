#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwalk {

using Complex = std::complex<double>;

/// Coin register values. The enumerator order is the storage order of the
/// four amplitude planes and the coin-vector order used by the spectral
/// formulas: (down, up, right, left).
enum class Direction : std::uint8_t { Down = 0, Up = 1, Right = 2, Left = 3 };

inline constexpr std::array<Direction, 4> kDirections = {Direction::Down, Direction::Up,
                                                         Direction::Right, Direction::Left};

constexpr Direction opposite(Direction d) {
    switch (d) {
        case Direction::Down: return Direction::Up;
        case Direction::Up: return Direction::Down;
        case Direction::Right: return Direction::Left;
        case Direction::Left: return Direction::Right;
    }
    return d;
}

constexpr std::size_t index_of(Direction d) { return static_cast<std::size_t>(d); }

const char *direction_name(Direction d);
Direction parse_direction(const std::string &name);

/// A lattice site. `x` is the column, `y` the row.
struct Site {
    int x = 0;
    int y = 0;
    friend bool operator==(const Site &, const Site &) = default;
    friend auto operator<=>(const Site &, const Site &) = default;
};

enum class Metric : std::uint8_t { L1, Linf };

/// c mod n mapped into [0, n), also for negative c.
constexpr int wrap(long long c, int n) {
    long long r = c % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

/// Side length n of an n x n torus. Only even n >= 2 are accepted.
class GridGeometry {
   public:
    explicit GridGeometry(int n);

    int n() const { return n_; }
    std::size_t sites() const { return static_cast<std::size_t>(n_) * n_; }
    std::size_t amplitudes() const { return 4 * sites(); }

    bool contains(Site s) const { return s.x >= 0 && s.x < n_ && s.y >= 0 && s.y < n_; }
    Site wrapped(long long x, long long y) const { return {wrap(x, n_), wrap(y, n_)}; }

    std::size_t site_index(Site s) const { return static_cast<std::size_t>(s.y) * n_ + s.x; }
    Site site_at(std::size_t index) const {
        return {static_cast<int>(index % n_), static_cast<int>(index / n_)};
    }

    /// Per-axis torus distance min(|dc|, n - |dc|).
    int axis_distance(int a, int b) const;

    friend bool operator==(const GridGeometry &, const GridGeometry &) = default;

   private:
    int n_;
};

int torus_l1_distance(Site a, Site b, const GridGeometry &geom);
int torus_linf_distance(Site a, Site b, const GridGeometry &geom);
int torus_distance(Site a, Site b, const GridGeometry &geom, Metric metric);

/// Sites where the coin is -I. Sorted, duplicate free, all inside the grid.
class MarkedSet {
   public:
    MarkedSet() = default;
    MarkedSet(const GridGeometry &geom, std::vector<Site> sites);

    std::span<const Site> sites() const { return sites_; }
    bool empty() const { return sites_.empty(); }
    std::size_t size() const { return sites_.size(); }
    bool contains(Site s) const;

    /// Smallest torus distance from `s` to any marked site; -1 when empty.
    int distance_to(Site s, const GridGeometry &geom, Metric metric = Metric::L1) const;

   private:
    std::vector<Site> sites_;
};

/// Dense amplitude tensor of the walk: four contiguous n x n planes in
/// direction storage order, row-major within a plane.
class WalkState {
   public:
    explicit WalkState(GridGeometry geom);
    WalkState(GridGeometry geom, std::vector<Complex> amplitudes);

    static WalkState basis(GridGeometry geom, Site site, Direction d);

    const GridGeometry &geometry() const { return geom_; }
    std::span<Complex> amplitudes() { return amps_; }
    std::span<const Complex> amplitudes() const { return amps_; }

    std::span<Complex> plane(Direction d) {
        return std::span<Complex>(amps_).subspan(index_of(d) * geom_.sites(), geom_.sites());
    }
    std::span<const Complex> plane(Direction d) const {
        return std::span<const Complex>(amps_).subspan(index_of(d) * geom_.sites(), geom_.sites());
    }

    Complex &at(Site s, Direction d) { return amps_[index_of(d) * geom_.sites() + geom_.site_index(s)]; }
    const Complex &at(Site s, Direction d) const {
        return amps_[index_of(d) * geom_.sites() + geom_.site_index(s)];
    }

    /// Squared norm, accumulated row by row in a fixed order.
    double norm_squared() const;

    /// Cyclic translation by (dx, dy): the amplitude at s moves to s + (dx, dy).
    WalkState translated(int dx, int dy) const;

    void swap_buffer(std::vector<Complex> &other) { amps_.swap(other); }

   private:
    GridGeometry geom_;
    std::vector<Complex> amps_;
};

/// The uniform superposition over all sites and directions, 1/(2 sqrt N) each.
WalkState uniform_state(const GridGeometry &geom);

/// sum conj(a) * b
Complex overlap(const WalkState &a, const WalkState &b);

double site_probability(const WalkState &state, Site site);

/// Probability of every site (marginal over the coin register), indexed by
/// GridGeometry::site_index.
std::vector<double> site_probabilities(const WalkState &state);

/// Largest |a_i - b_i| over all amplitudes.
double max_abs_difference(const WalkState &a, const WalkState &b);

}  // namespace qwalk
