#pragma once

// Values measured from this implementation and frozen as regression
// fixtures. Regenerate with
//   qwalk simulate --n <n> --marked 0,0
//   qwalk spectrum --n 8 --predict-n 64
//   qwalk analytic --sizes 64,256
// and compare against the printed summaries / output files.

namespace fixtures {

struct SearchFixture {
    int n;
    unsigned t_star;
    double pr0;
    double nbhd;  // L1 radius ceil(N^(1/4))
};

inline constexpr SearchFixture kSearch64{64, 126, 0.17703904375574836, 0.77435497143385379};
inline constexpr SearchFixture kSearch128{128, 254, 0.15414983144553851, 0.75472691417299076};
inline constexpr SearchFixture kSearch256{256, 1662, 0.13959021742995115, 0.7388243003215158};

inline constexpr double kOverlap64 = 0.99286706799396951;
inline constexpr double kCorrelation64 = 0.99836492304184343;
inline constexpr double kCScaled64 = 1.1959912788571905;

inline constexpr double kF64Origin = 5821.7701530542972;
inline constexpr double kG64At10 = -2047.4999999999982;
inline constexpr double kLogAsymptoteError256 = 2.730414046;
inline constexpr double kAmpsum64M8 = 237.2257355;

inline constexpr double kRel = 1e-9;

}  // namespace fixtures
