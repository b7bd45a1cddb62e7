#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "nlperim/asymptotics.h"

namespace nlperim {

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// Shortest round-trip decimal form ("nan", "inf" for non-finite values).
std::string format_number(double v);

// param,C_eps,per_nu,normalized,target,residual,err_est,runtime_ms,regime
extern const char* const kSeriesHeader;
void write_series_csv(std::ostream& os, const SweepResult& r, bool header = true);

}  // namespace nlperim

namespace nlperim {
// "boost X.Y.Z, fftw-3.x.y"
std::string library_versions();
}  // namespace nlperim
