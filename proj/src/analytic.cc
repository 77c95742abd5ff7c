#include "qwalk/analytic.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>

#include <zlib.h>

namespace qwalk {

static_assert(std::endian::native == std::endian::little, "FTable cache IO assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'Q', 'W', 'F', 'T', 'B', 'L', '1', '\n'};

std::vector<double> cos_table(int n) {
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        c[static_cast<std::size_t>(m)] = std::cos(2.0 * std::numbers::pi * m / n);
    }
    return c;
}

/// Momentum in S' for residue r in [0, n): r < n/2 maps to r, otherwise r - n.
int symmetric_index(int r, int n) { return r < n / 2 ? r : r - n; }

/// Kernel weights over S', indexed [kr * n + lr] by residues, (0,0) weight 0.
std::vector<double> kernel_weights(int n, Kernel kernel, const std::vector<double> &c) {
    std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
    for (int kr = 0; kr < n; ++kr) {
        for (int lr = 0; lr < n; ++lr) {
            if (kr == 0 && lr == 0) {
                continue;
            }
            double denom = 0;
            if (kernel == Kernel::Lattice) {
                denom = 2.0 - c[static_cast<std::size_t>(kr)] - c[static_cast<std::size_t>(lr)];
            } else {
                const double k = symmetric_index(kr, n);
                const double l = symmetric_index(lr, n);
                denom = k * k + l * l;
            }
            w[static_cast<std::size_t>(kr) * n + lr] = 1.0 / denom;
        }
    }
    return w;
}

double direct_real_sum(const GridGeometry &geom, long long j, long long jp, Kernel kernel) {
    const int n = geom.n();
    const auto c = cos_table(n);
    const auto w = kernel_weights(n, kernel, c);
    double acc = 0;
    for (int ki = 0; ki < n; ++ki) {
        const long long k = symmetric_index(ki, n);
        double row = 0;
        for (int li = 0; li < n; ++li) {
            const long long l = symmetric_index(li, n);
            row += c[static_cast<std::size_t>(wrap(k * j + l * jp, n))] * w[static_cast<std::size_t>(ki) * n + li];
        }
        acc += row;
    }
    return acc;
}

void put_u32(std::string &out, std::uint32_t v) { out.append(reinterpret_cast<const char *>(&v), 4); }

std::uint32_t get_u32(const std::string &in, std::size_t offset) {
    std::uint32_t v = 0;
    std::memcpy(&v, in.data() + offset, 4);
    return v;
}

std::uint32_t crc_of(const std::string &bytes, std::size_t len) {
    return static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef *>(bytes.data()), static_cast<uInt>(len)));
}

}  // namespace

double eval_f(const GridGeometry &geom, long long j, long long jp) {
    return direct_real_sum(geom, j, jp, Kernel::Lattice);
}

double eval_f_prime(const GridGeometry &geom, long long j, long long jp) {
    return direct_real_sum(geom, j, jp, Kernel::Continuum);
}

Complex eval_f_complex(const GridGeometry &geom, long long j, long long jp) {
    const int n = geom.n();
    const auto c = cos_table(n);
    std::vector<Complex> powers(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        powers[static_cast<std::size_t>(m)] = std::polar(1.0, 2.0 * std::numbers::pi * m / n);
    }
    Complex acc = 0;
    for (long long k = 0; k < n; ++k) {
        Complex row = 0;
        for (long long l = 0; l < n; ++l) {
            if (k == 0 && l == 0) {
                continue;
            }
            const double denom = 2.0 - c[static_cast<std::size_t>(k)] - c[static_cast<std::size_t>(l)];
            row += powers[static_cast<std::size_t>(wrap(k * j + l * jp, n))] / denom;
        }
        acc += row;
    }
    return acc;
}

double eval_g(const GridGeometry &geom, long long j, long long jp) {
    return eval_f(geom, j, jp) - eval_f(geom, j - 1, jp);
}

FTable FTable::build(const GridGeometry &geom, Kernel kernel) {
    const int n = geom.n();
    const auto nn = static_cast<std::size_t>(n);
    const auto c = cos_table(n);
    const auto w = kernel_weights(n, kernel, c);

    // half[kr * n + jp] = sum_l w(k, l) cos(2 pi l jp / n)
    std::vector<double> half(nn * nn);
#pragma omp parallel for schedule(static)
    for (int kr = 0; kr < n; ++kr) {
        for (int jp = 0; jp < n; ++jp) {
            double acc = 0;
            for (int lr = 0; lr < n; ++lr) {
                acc += w[static_cast<std::size_t>(kr) * nn + lr] *
                       c[static_cast<std::size_t>((static_cast<long long>(lr) * jp) % n)];
            }
            half[static_cast<std::size_t>(kr) * nn + jp] = acc;
        }
    }

    std::vector<double> values(nn * nn);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        double *out = values.data() + static_cast<std::size_t>(j) * nn;
        std::fill(out, out + nn, 0.0);
        for (int kr = 0; kr < n; ++kr) {
            const double ck = c[static_cast<std::size_t>((static_cast<long long>(kr) * j) % n)];
            const double *h = half.data() + static_cast<std::size_t>(kr) * nn;
            for (std::size_t jp = 0; jp < nn; ++jp) {
                out[jp] += ck * h[jp];
            }
        }
    }
    return FTable(geom, kernel, std::move(values));
}

std::string FTable::cache_name(int n, Kernel kernel) {
    return std::string(kernel == Kernel::Lattice ? "f" : "fprime") + "_" + std::to_string(n) + ".qwft";
}

void FTable::save(const std::filesystem::path &path) const {
    std::string bytes(kMagic, sizeof kMagic);
    put_u32(bytes, static_cast<std::uint32_t>(kernel_));
    put_u32(bytes, static_cast<std::uint32_t>(geom_.n()));
    bytes.append(reinterpret_cast<const char *>(values_.data()), values_.size() * sizeof(double));
    put_u32(bytes, crc_of(bytes, bytes.size()));

    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write table cache " + tmp);
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw std::runtime_error("short write on table cache " + tmp);
        }
    }
    std::filesystem::rename(tmp, path);
}

FTable FTable::load(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open table cache " + path.string());
    }
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    constexpr std::size_t header = sizeof kMagic + 8;
    if (bytes.size() < header + 4 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw std::runtime_error("not a table cache file: " + path.string());
    }
    const std::uint32_t kernel = get_u32(bytes, sizeof kMagic);
    const std::uint32_t n = get_u32(bytes, sizeof kMagic + 4);
    if (kernel != static_cast<std::uint32_t>(Kernel::Lattice) &&
        kernel != static_cast<std::uint32_t>(Kernel::Continuum)) {
        throw std::runtime_error("unknown kernel id in " + path.string());
    }
    const std::size_t payload = static_cast<std::size_t>(n) * n * sizeof(double);
    if (bytes.size() != header + payload + 4) {
        throw std::runtime_error("table cache has wrong length: " + path.string());
    }
    if (crc_of(bytes, header + payload) != get_u32(bytes, header + payload)) {
        throw std::runtime_error("table cache checksum mismatch: " + path.string());
    }
    std::vector<double> values(static_cast<std::size_t>(n) * n);
    std::memcpy(values.data(), bytes.data() + header, payload);
    return FTable(GridGeometry(static_cast<int>(n)), static_cast<Kernel>(kernel), std::move(values));
}

FTable FTable::load_or_build(const GridGeometry &geom, const std::filesystem::path &dir, Kernel kernel) {
    const auto path = dir / cache_name(geom.n(), kernel);
    if (std::filesystem::exists(path)) {
        try {
            FTable t = load(path);
            if (t.geometry() == geom && t.kernel() == kernel) {
                return t;
            }
        } catch (const std::runtime_error &) {
            // stale or corrupt cache: rebuild below
        }
    }
    FTable t = build(geom, kernel);
    std::filesystem::create_directories(dir);
    t.save(path);
    return t;
}

double continuum_gap_constant(const FTable &f, const FTable &f_prime) {
    if (!(f.geometry() == f_prime.geometry()) || f.kernel() != Kernel::Lattice ||
        f_prime.kernel() != Kernel::Continuum) {
        throw std::invalid_argument("continuum_gap_constant needs a lattice and a continuum table of the same size");
    }
    const double n = f.geometry().n();
    const double scale = n * n / (2.0 * std::numbers::pi * std::numbers::pi);
    double worst = 0;
    for (std::size_t i = 0; i < f.values().size(); ++i) {
        worst = std::max(worst, std::abs(f.values()[i] - scale * f_prime.values()[i]));
    }
    return worst / (n * n);
}

LogAsymptotePoint log_asymptote_point(int n, double eps, double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw std::invalid_argument("log_asymptote_point needs 0 < beta <= 1");
    }
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("log_asymptote_point needs 0 < eps < 1");
    }
    const GridGeometry geom(n);
    LogAsymptotePoint p;
    p.n = n;
    p.j = std::llround(std::pow(static_cast<double>(n), eps));
    p.jp = std::llround(static_cast<double>(p.j) * beta);
    p.f_prime = eval_f_prime(geom, p.j, p.jp);
    p.error = p.f_prime - std::numbers::pi / 2.0 * std::log(static_cast<double>(n) / static_cast<double>(p.j));
    return p;
}

double log_asymptote_error(int n, double eps, double beta) { return log_asymptote_point(n, eps, beta).error; }

double harmonic_cosine_sum(int n) {
    if (n < 2) {
        throw std::invalid_argument("harmonic_cosine_sum needs n >= 2");
    }
    double acc = 0;
    for (int k = 1; k <= n; ++k) {
        acc += std::cos(2.0 * std::numbers::pi * k / n) / k;
    }
    return acc;
}

double scaled_harmonic_cosine_sum(int n, double eps) {
    if (n < 2) {
        throw std::invalid_argument("scaled_harmonic_cosine_sum needs n >= 2");
    }
    if (!(eps >= 0.0 && eps < 1.0)) {
        throw std::invalid_argument("scaled_harmonic_cosine_sum needs 0 <= eps < 1");
    }
    const double freq = 2.0 * std::numbers::pi * std::pow(static_cast<double>(n), eps - 1.0);
    double acc = 0;
    for (int k = 1; k <= n; ++k) {
        acc += std::cos(freq * k) / k;
    }
    return acc;
}

double ampsum_ratio(const FTable &f, int m) {
    if (m < 2) {
        throw std::invalid_argument("AmpSum needs M >= 2");
    }
    const double n = f.geometry().n();
    double acc = 0;
    for (int j = 1; j < m; ++j) {
        for (int jp = 1; jp < m; ++jp) {
            const double g = f.g(j, jp);
            acc += g * g;
        }
    }
    return acc / (n * n * std::log(static_cast<double>(m)));
}

AmplitudeFitReport amplitude_fit(const SearchResult &search, const FTable &f, int min_distance, int max_distance) {
    const GridGeometry &geom = search.geometry;
    if (search.marked.size() != 1 || search.marked.sites()[0] != Site{0, 0}) {
        throw std::invalid_argument("amplitude_fit needs a search with the single marked site at the origin");
    }
    if (!(f.geometry() == geom) || f.kernel() != Kernel::Lattice) {
        throw std::invalid_argument("amplitude_fit needs the lattice f table of the search grid");
    }
    const int n = geom.n();
    if (max_distance <= 0) {
        max_distance = n / 4;
    }
    if (min_distance < 1 || max_distance < min_distance) {
        throw std::invalid_argument("amplitude_fit distance band must satisfy 1 <= min <= max");
    }

    const auto up = search.final_state.plane(Direction::Up);
    std::vector<double> amp, gs;
    for (std::size_t i = 0; i < geom.sites(); ++i) {
        const Site s = geom.site_at(i);
        const int d = torus_l1_distance(s, {0, 0}, geom);
        if (d >= min_distance && d <= max_distance) {
            amp.push_back(std::abs(up[i]));
            gs.push_back(std::abs(f.g(s.y, s.x)));
        }
    }

    AmplitudeFitReport rep;
    rep.n = n;
    rep.min_distance = min_distance;
    rep.max_distance = max_distance;
    rep.band_sites = amp.size();

    const double count = static_cast<double>(amp.size());
    double ma = 0, mg = 0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        ma += amp[i];
        mg += gs[i];
    }
    ma /= count;
    mg /= count;
    double saa = 0, sgg = 0, sag = 0, cross = 0, gg = 0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        saa += (amp[i] - ma) * (amp[i] - ma);
        sgg += (gs[i] - mg) * (gs[i] - mg);
        sag += (amp[i] - ma) * (gs[i] - mg);
        cross += amp[i] * gs[i];
        gg += gs[i] * gs[i];
    }
    rep.correlation = sag / std::sqrt(saa * sgg);
    rep.c_hat = cross / gg;
    const double big_n = static_cast<double>(geom.sites());
    rep.c_scaled = rep.c_hat * big_n * std::sqrt(std::log(big_n));

    const int ball = static_cast<int>(ceil_power(big_n, 0.25));
    auto region = [&](std::string name, auto include) {
        RegionCheck r;
        r.name = std::move(name);
        double g2 = 0;
        for (std::size_t i = 0; i < geom.sites(); ++i) {
            const Site s = geom.site_at(i);
            if (!include(s)) {
                continue;
            }
            ++r.sites;
            r.simulated += std::norm(up[i]);
            const double g = f.g(s.y, s.x);
            g2 += g * g;
        }
        r.predicted = rep.c_hat * rep.c_hat * g2;
        rep.regions.push_back(r);
    };
    region("all", [](Site) { return true; });
    region("all-but-marked", [](Site s) { return s != Site{0, 0}; });
    region("fit-band", [&](Site s) {
        const int d = torus_l1_distance(s, {0, 0}, geom);
        return d >= min_distance && d <= max_distance;
    });
    region("fourth-root-ball", [&](Site s) { return torus_l1_distance(s, {0, 0}, geom) <= ball; });
    return rep;
}

}  // namespace qwalk
