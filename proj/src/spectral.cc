#include "qwalk/spectral.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace qwalk {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex root_of_unity(long long m, int n) { return std::polar(1.0, 2.0 * std::numbers::pi * wrap(m, n) / n); }

void require_nonzero(const GridGeometry &geom, long long k, long long l) {
    if (wrap(k, geom.n()) == 0 && wrap(l, geom.n()) == 0) {
        throw std::invalid_argument("momentum (0,0) has eigenvalue 1 and no eigenphase pair");
    }
}

}  // namespace

double theta(const GridGeometry &geom, long long k, long long l) {
    require_nonzero(geom, k, l);
    const int n = geom.n();
    const double c = 0.5 * (std::cos(2.0 * std::numbers::pi * wrap(k, n) / n) +
                            std::cos(2.0 * std::numbers::pi * wrap(l, n) / n));
    return std::acos(std::clamp(c, -1.0, 1.0));
}

bool is_degenerate(const GridGeometry &geom, long long k, long long l) {
    const int n = geom.n();
    return 2 * wrap(k, n) == n && 2 * wrap(l, n) == n;
}

SpectralPair spectral_pair(const GridGeometry &geom, long long k, long long l) {
    const int n = geom.n();
    SpectralPair p;
    p.k = wrap(k, n);
    p.l = wrap(l, n);
    p.theta = theta(geom, k, l);
    p.degenerate = is_degenerate(geom, k, l);
    if (p.degenerate) {
        return p;
    }
    const Complex wk = root_of_unity(p.k, n);
    const Complex wl = root_of_unity(p.l, n);
    const Complex lower = std::polar(1.0, -p.theta);
    const Complex upper = std::polar(1.0, p.theta);
    const Complex scale = kI / (2.0 * std::numbers::sqrt2 * std::sin(p.theta));
    p.v_plus = {scale * (lower - wk), scale * (lower - std::conj(wk)), scale * (lower - wl),
                scale * (lower - std::conj(wl))};
    p.v_minus = {scale * (wk - upper), scale * (std::conj(wk) - upper), scale * (wl - upper),
                 scale * (std::conj(wl) - upper)};
    return p;
}

WalkState eigenvector(const GridGeometry &geom, long long k, long long l, Branch branch) {
    const SpectralPair p = spectral_pair(geom, k, l);
    if (p.degenerate) {
        throw DegeneratePairError("eigenvector undefined for degenerate pair (" + std::to_string(p.k) + "," +
                                  std::to_string(p.l) + ")");
    }
    const int n = geom.n();
    const CoinVector &v = branch == Branch::Plus ? p.v_plus : p.v_minus;
    WalkState s(geom);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const Complex phase =
                root_of_unity(static_cast<long long>(p.k) * y + static_cast<long long>(p.l) * x, n) / double(n);
            for (Direction d : kDirections) {
                s.at({x, y}, d) = phase * v[index_of(d)];
            }
        }
    }
    return s;
}

WalkState FinalStatePrediction::normalized() const {
    WalkState out = state;
    for (Complex &a : out.amplitudes()) {
        a /= norm;
    }
    return out;
}

FinalStatePrediction predict_final_state(const GridGeometry &geom, Site marked, CotSign sign) {
    if (!geom.contains(marked)) {
        throw std::invalid_argument("marked site outside grid");
    }
    const int n = geom.n();
    const auto nn = static_cast<std::size_t>(n);
    const double big_n = static_cast<double>(geom.sites());
    const double orientation = sign == CotSign::MatchesWalk ? -1.0 : 1.0;

    // coeff[d][k * n + l] multiplies w^{k y + l x} / n in coin plane d.
    std::array<std::vector<Complex>, 4> coeff;
    for (auto &c : coeff) {
        c.assign(nn * nn, Complex(0.0));
    }
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            if ((k == 0 && l == 0) || is_degenerate(geom, k, l)) {
                continue;
            }
            const SpectralPair p = spectral_pair(geom, k, l);
            const Complex weight = orientation * kI / std::tan(p.theta / 2.0) / std::sqrt(2.0 * big_n);
            for (std::size_t d = 0; d < 4; ++d) {
                coeff[d][static_cast<std::size_t>(k) * nn + l] = weight * (p.v_plus[d] - p.v_minus[d]);
            }
        }
    }

    std::vector<Complex> powers(nn);
    for (int m = 0; m < n; ++m) {
        powers[static_cast<std::size_t>(m)] = root_of_unity(m, n);
    }

    WalkState origin(geom);
    for (Direction dir : kDirections) {
        const std::vector<Complex> &c = coeff[index_of(dir)];
        // half[k * n + x] = sum_l c(k, l) w^{l x}
        std::vector<Complex> half(nn * nn);
#pragma omp parallel for schedule(static)
        for (int k = 0; k < n; ++k) {
            for (int x = 0; x < n; ++x) {
                Complex acc = 0;
                for (int l = 0; l < n; ++l) {
                    acc += c[static_cast<std::size_t>(k) * nn + l] *
                           powers[static_cast<std::size_t>((static_cast<long long>(l) * x) % n)];
                }
                half[static_cast<std::size_t>(k) * nn + x] = acc;
            }
        }
        auto plane = origin.plane(dir);
#pragma omp parallel for schedule(static)
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                Complex acc = 0;
                for (int k = 0; k < n; ++k) {
                    acc += powers[static_cast<std::size_t>((static_cast<long long>(k) * y) % n)] *
                           half[static_cast<std::size_t>(k) * nn + x];
                }
                plane[static_cast<std::size_t>(y) * nn + x] = acc / double(n);
            }
        }
        origin.at({0, 0}, dir) += 0.5;
    }

    WalkState placed = origin.translated(marked.x, marked.y);
    const double norm = std::sqrt(placed.norm_squared());
    return FinalStatePrediction{geom, marked, std::move(placed), norm};
}

std::pair<Complex, Complex> ab_coefficients(double theta_kl, double alpha) {
    auto cot = [](double arg) {
        const double dist = std::abs(arg - std::numbers::pi * std::round(arg / std::numbers::pi));
        if (dist < 1e-12) {
            throw std::domain_error("cot argument within 1e-12 of a pole");
        }
        return 1.0 / std::tan(arg);
    };
    const Complex a = 1.0 + 0.5 * kI * cot((alpha + theta_kl) / 2.0) + 0.5 * kI * cot((-alpha + theta_kl) / 2.0);
    const Complex b = 1.0 + 0.5 * kI * cot((alpha - theta_kl) / 2.0) + 0.5 * kI * cot((-alpha - theta_kl) / 2.0);
    return {a, b};
}

Eigen::MatrixXcd dense_step_operator(const GridGeometry &geom) {
    const int n = geom.n();
    if (n > 16) {
        throw ResourceLimitError("dense step operator limited to n <= 16, got n = " + std::to_string(n));
    }
    const auto dim = static_cast<Eigen::Index>(geom.amplitudes());
    const auto plane = static_cast<Eigen::Index>(geom.sites());
    auto index = [&](int x, int y, Direction d) {
        return static_cast<Eigen::Index>(index_of(d)) * plane + static_cast<Eigen::Index>(wrap(y, n)) * n + wrap(x, n);
    };
    // Destination of the shift for an amplitude at (x, y) whose coin reads d.
    auto shifted = [&](int x, int y, Direction d) {
        switch (d) {
            case Direction::Up: return index(x, y - 1, Direction::Down);
            case Direction::Down: return index(x, y + 1, Direction::Up);
            case Direction::Left: return index(x - 1, y, Direction::Right);
            case Direction::Right: return index(x + 1, y, Direction::Left);
        }
        return Eigen::Index{0};
    };
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            for (Direction in : kDirections) {
                for (Direction mid : kDirections) {
                    const double coin = (in == mid ? -1.0 : 0.0) + 0.5;
                    u(shifted(x, y, mid), index(x, y, in)) += coin;
                }
            }
        }
    }
    return u;
}

Eigen::VectorXcd to_vector(const WalkState &state) {
    auto amps = state.amplitudes();
    Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = amps[i];
    }
    return v;
}

WalkState from_vector(const GridGeometry &geom, const Eigen::VectorXcd &v) {
    std::vector<Complex> amps(v.data(), v.data() + v.size());
    return WalkState(geom, std::move(amps));
}

std::vector<EigenResidual> eigen_residuals(const GridGeometry &geom) {
    const int n = geom.n();
    Walker walker(geom, MarkedSet{});
    std::vector<EigenResidual> out;
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            if ((k == 0 && l == 0) || is_degenerate(geom, k, l)) {
                continue;
            }
            for (Branch b : {Branch::Plus, Branch::Minus}) {
                const WalkState phi = eigenvector(geom, k, l, b);
                WalkState image = phi;
                walker.step(image);
                const double th = theta(geom, k, l);
                const Complex lambda = std::polar(1.0, b == Branch::Plus ? th : -th);
                double r2 = 0;
                for (std::size_t i = 0; i < phi.amplitudes().size(); ++i) {
                    r2 += std::norm(image.amplitudes()[i] - lambda * phi.amplitudes()[i]);
                }
                out.push_back({k, l, b, th, std::sqrt(r2)});
            }
        }
    }
    return out;
}

SpectrumComparison compare_spectrum(const GridGeometry &geom, double tolerance) {
    const Eigen::MatrixXcd u = dense_step_operator(geom);
    SpectrumComparison cmp;
    cmp.dimension = static_cast<std::size_t>(u.rows());
    const Eigen::MatrixXcd gram = u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    cmp.unitarity_error = gram.cwiseAbs().maxCoeff();

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("dense eigensolve did not converge");
    }
    std::vector<double> phases;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const Complex lambda = solver.eigenvalues()(i);
        if (std::abs(lambda - 1.0) < tolerance) {
            ++cmp.plus_one;
        } else if (std::abs(lambda + 1.0) < tolerance) {
            ++cmp.minus_one;
        } else {
            phases.push_back(std::arg(lambda));
        }
    }

    const int n = geom.n();
    std::vector<double> expected;
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            if ((k == 0 && l == 0) || is_degenerate(geom, k, l)) {
                continue;
            }
            const double th = theta(geom, k, l);
            expected.push_back(th);
            expected.push_back(-th);
            ++cmp.nondegenerate_pairs;
        }
    }
    std::sort(phases.begin(), phases.end());
    std::sort(expected.begin(), expected.end());
    if (phases.size() != expected.size()) {
        cmp.max_phase_error = std::numeric_limits<double>::infinity();
    } else {
        for (std::size_t i = 0; i < phases.size(); ++i) {
            cmp.max_phase_error = std::max(cmp.max_phase_error, std::abs(phases[i] - expected[i]));
        }
    }
    cmp.complete = 2 * cmp.nondegenerate_pairs + cmp.plus_one + cmp.minus_one == cmp.dimension &&
                   cmp.max_phase_error <= tolerance;
    return cmp;
}

}  // namespace qwalk
