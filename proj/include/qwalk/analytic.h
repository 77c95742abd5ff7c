#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qwalk/grid.h"
#include "qwalk/search.h"

namespace qwalk {

// Momentum sums over the symmetric index set S' = {-n/2, ..., n/2 - 1}^2
// without (0, 0):
//
//   f(j, j')  = sum cos(2 pi (k j + l j') / n) / (2 - cos(2 pi k / n) - cos(2 pi l / n))
//   f'(j, j') = sum cos(2 pi (k j + l j') / n) / (k^2 + l^2)
//   g(j, j')  = f(j, j') - f(j - 1, j')
//
// The first argument pairs with the momentum index k. In walk coordinates that
// is the row offset (see amplitude_fit).

/// Which denominator a table is built with.
enum class Kernel : std::uint32_t {
    Lattice = 1,    ///< 2 - cos(2 pi k / n) - cos(2 pi l / n), defines f
    Continuum = 2,  ///< k^2 + l^2, defines f'
};

/// Direct O(N) evaluation of f in real cosine form over S'.
double eval_f(const GridGeometry &geom, long long j, long long jp);

/// Direct O(N) evaluation of f in complex form over S = {0..n-1}^2 \ {(0,0)},
/// with w = exp(2 pi i / n). The imaginary part cancels analytically.
Complex eval_f_complex(const GridGeometry &geom, long long j, long long jp);

double eval_f_prime(const GridGeometry &geom, long long j, long long jp);

double eval_g(const GridGeometry &geom, long long j, long long jp);

/// Every value of f (or f') on an n x n grid, values[j * n + j'].
///
/// Built in O(n^3) by summing over l first:
///   H(k, j') = sum_l K(k, l) cos(2 pi l j' / n),   f(j, j') = sum_k cos(2 pi k j / n) H(k, j').
/// The sine cross terms vanish because K is even in l and the unpaired
/// l = -n/2 column has sin(pi j') = 0.
class FTable {
   public:
    static FTable build(const GridGeometry &geom, Kernel kernel = Kernel::Lattice);

    /// Reads `dir/<kernel>_<n>.qwft` when present and valid, otherwise builds
    /// the table and writes it there.
    static FTable load_or_build(const GridGeometry &geom, const std::filesystem::path &dir,
                                Kernel kernel = Kernel::Lattice);

    /// Binary cache file:
    ///   8 bytes  magic "QWFTBL1\n"
    ///   u32 LE   kernel id (1 lattice, 2 continuum)
    ///   u32 LE   n
    ///   n*n f64 LE values, row-major [j][j']
    ///   u32 LE   CRC-32 (zlib polynomial) of all preceding bytes
    void save(const std::filesystem::path &path) const;
    static FTable load(const std::filesystem::path &path);
    static std::string cache_name(int n, Kernel kernel);

    const GridGeometry &geometry() const { return geom_; }
    Kernel kernel() const { return kernel_; }
    const std::vector<double> &values() const { return values_; }

    double at(long long j, long long jp) const {
        const int n = geom_.n();
        return values_[static_cast<std::size_t>(wrap(j, n)) * n + wrap(jp, n)];
    }
    double g(long long j, long long jp) const { return at(j, jp) - at(j - 1, jp); }

   private:
    FTable(GridGeometry geom, Kernel kernel, std::vector<double> values)
        : geom_(geom), kernel_(kernel), values_(std::move(values)) {}

    GridGeometry geom_;
    Kernel kernel_;
    std::vector<double> values_;
};

/// max over (j, j') of |f - n^2/(2 pi^2) f'| / n^2.
double continuum_gap_constant(const FTable &f, const FTable &f_prime);

struct LogAsymptotePoint {
    int n = 0;
    long long j = 0;
    long long jp = 0;
    double f_prime = 0;
    double error = 0;  ///< f'(j, j') - (pi/2) ln(n/j)
};

/// j = round(n^eps), j' = round(j * beta).
LogAsymptotePoint log_asymptote_point(int n, double eps, double beta);
double log_asymptote_error(int n, double eps, double beta);

/// sum_{k=1}^{n} cos(2 pi k / n) / k
double harmonic_cosine_sum(int n);

/// sum_{k=1}^{n} cos(2 pi n^(eps - 1) k) / k, real exponent.
double scaled_harmonic_cosine_sum(int n, double eps);

/// sum_{0<j,j'<M} g(j, j')^2 / (n^2 ln M)
double ampsum_ratio(const FTable &f, int m);

struct RegionCheck {
    std::string name;
    std::size_t sites = 0;
    double simulated = 0;  ///< sum |alpha_up|^2
    double predicted = 0;  ///< C^2 sum g^2
    double ratio() const { return predicted > 0 ? simulated / predicted : 0.0; }
};

struct AmplitudeFitReport {
    int n = 0;
    int min_distance = 0;
    int max_distance = 0;
    std::size_t band_sites = 0;
    double correlation = 0;  ///< Pearson(|alpha_up|, |g|) over the band
    double c_hat = 0;        ///< least-squares scale of |alpha_up| ~ C |g| over the band
    double c_scaled = 0;     ///< c_hat * N * sqrt(ln N)
    std::vector<RegionCheck> regions;
};

/// Compares the simulated up-plane with g. The search must have exactly one
/// marked site at the origin; the amplitude at column x, row y is compared
/// with g(y, x). Distances are torus L1 from the origin; max_distance <= 0
/// selects n/4.
AmplitudeFitReport amplitude_fit(const SearchResult &search, const FTable &f, int min_distance = 1, int max_distance = 0);

}  // namespace qwalk
