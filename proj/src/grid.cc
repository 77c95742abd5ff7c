#include "qwalk/grid.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace qwalk {

const char *direction_name(Direction d) {
    switch (d) {
        case Direction::Down: return "down";
        case Direction::Up: return "up";
        case Direction::Right: return "right";
        case Direction::Left: return "left";
    }
    return "?";
}

Direction parse_direction(const std::string &name) {
    for (Direction d : kDirections) {
        if (name == direction_name(d)) {
            return d;
        }
    }
    throw std::invalid_argument("unknown direction '" + name + "'");
}

GridGeometry::GridGeometry(int n) : n_(n) {
    if (n < 2) {
        throw std::invalid_argument("grid side must be at least 2, got " + std::to_string(n));
    }
    if (n % 2 != 0) {
        throw std::invalid_argument("grid side must be even, got " + std::to_string(n));
    }
}

int GridGeometry::axis_distance(int a, int b) const {
    int d = std::abs(a - b) % n_;
    return std::min(d, n_ - d);
}

int torus_l1_distance(Site a, Site b, const GridGeometry &geom) {
    return geom.axis_distance(a.x, b.x) + geom.axis_distance(a.y, b.y);
}

int torus_linf_distance(Site a, Site b, const GridGeometry &geom) {
    return std::max(geom.axis_distance(a.x, b.x), geom.axis_distance(a.y, b.y));
}

int torus_distance(Site a, Site b, const GridGeometry &geom, Metric metric) {
    return metric == Metric::L1 ? torus_l1_distance(a, b, geom) : torus_linf_distance(a, b, geom);
}

MarkedSet::MarkedSet(const GridGeometry &geom, std::vector<Site> sites) : sites_(std::move(sites)) {
    for (const Site &s : sites_) {
        if (!geom.contains(s)) {
            throw std::invalid_argument("marked site (" + std::to_string(s.x) + "," + std::to_string(s.y) +
                                        ") outside the " + std::to_string(geom.n()) + "x" +
                                        std::to_string(geom.n()) + " grid");
        }
    }
    std::sort(sites_.begin(), sites_.end());
    if (std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end()) {
        throw std::invalid_argument("duplicate marked site");
    }
}

bool MarkedSet::contains(Site s) const { return std::binary_search(sites_.begin(), sites_.end(), s); }

int MarkedSet::distance_to(Site s, const GridGeometry &geom, Metric metric) const {
    int best = -1;
    for (const Site &m : sites_) {
        int d = torus_distance(s, m, geom, metric);
        if (best < 0 || d < best) {
            best = d;
        }
    }
    return best;
}

WalkState::WalkState(GridGeometry geom) : geom_(geom), amps_(geom.amplitudes()) {}

WalkState::WalkState(GridGeometry geom, std::vector<Complex> amplitudes)
    : geom_(geom), amps_(std::move(amplitudes)) {
    if (amps_.size() != geom_.amplitudes()) {
        throw std::invalid_argument("amplitude count does not match 4 n^2");
    }
}

WalkState WalkState::basis(GridGeometry geom, Site site, Direction d) {
    if (!geom.contains(site)) {
        throw std::invalid_argument("basis site outside grid");
    }
    WalkState s(geom);
    s.at(site, d) = 1.0;
    return s;
}

double WalkState::norm_squared() const {
    const std::size_t rows = 4 * static_cast<std::size_t>(geom_.n());
    const std::size_t n = geom_.n();
    std::vector<double> partial(rows);
#pragma omp parallel for schedule(static)
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = 0;
        for (std::size_t i = r * n; i < (r + 1) * n; ++i) {
            acc += std::norm(amps_[i]);
        }
        partial[r] = acc;
    }
    return std::accumulate(partial.begin(), partial.end(), 0.0);
}

WalkState WalkState::translated(int dx, int dy) const {
    WalkState out(geom_);
    const int n = geom_.n();
    for (Direction d : kDirections) {
        auto src = plane(d);
        auto dst = out.plane(d);
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                dst[static_cast<std::size_t>(wrap(y + dy, n)) * n + wrap(x + dx, n)] =
                    src[static_cast<std::size_t>(y) * n + x];
            }
        }
    }
    return out;
}

WalkState uniform_state(const GridGeometry &geom) {
    WalkState s(geom);
    const double amp = 1.0 / (2.0 * std::sqrt(static_cast<double>(geom.sites())));
    std::fill(s.amplitudes().begin(), s.amplitudes().end(), Complex(amp, 0.0));
    return s;
}

Complex overlap(const WalkState &a, const WalkState &b) {
    if (!(a.geometry() == b.geometry())) {
        throw std::invalid_argument("overlap of states on different grids");
    }
    const std::size_t n = a.geometry().n();
    const std::size_t rows = 4 * n;
    auto pa = a.amplitudes();
    auto pb = b.amplitudes();
    std::vector<Complex> partial(rows);
#pragma omp parallel for schedule(static)
    for (std::size_t r = 0; r < rows; ++r) {
        Complex acc = 0;
        for (std::size_t i = r * n; i < (r + 1) * n; ++i) {
            acc += std::conj(pa[i]) * pb[i];
        }
        partial[r] = acc;
    }
    return std::accumulate(partial.begin(), partial.end(), Complex(0.0));
}

double site_probability(const WalkState &state, Site site) {
    if (!state.geometry().contains(site)) {
        throw std::invalid_argument("site outside grid");
    }
    double p = 0;
    for (Direction d : kDirections) {
        p += std::norm(state.at(site, d));
    }
    return p;
}

std::vector<double> site_probabilities(const WalkState &state) {
    const std::size_t sites = state.geometry().sites();
    std::vector<double> p(sites, 0.0);
    for (Direction d : kDirections) {
        auto pl = state.plane(d);
        for (std::size_t i = 0; i < sites; ++i) {
            p[i] += std::norm(pl[i]);
        }
    }
    return p;
}

double max_abs_difference(const WalkState &a, const WalkState &b) {
    if (!(a.geometry() == b.geometry())) {
        throw std::invalid_argument("comparing states on different grids");
    }
    double m = 0;
    auto pa = a.amplitudes();
    auto pb = b.amplitudes();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        m = std::max(m, std::abs(pa[i] - pb[i]));
    }
    return m;
}

}  // namespace qwalk
