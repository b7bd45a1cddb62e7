#include "nlperim/report.h"

#include <charconv>
#include <cmath>
#include <ostream>

namespace nlperim {

const char* const kSeriesHeader = "param,C_eps,per_nu,normalized,target,residual,err_est,runtime_ms,regime";

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
  return s;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_series_csv(std::ostream& os, const SweepResult& r, bool header) {
  if (header) os << kSeriesHeader << '\n';
  for (const auto& row : r.rows) {
    if (!row.error.empty()) {
      // Failed points keep their parameter; numeric columns are empty.
      os << format_number(row.param) << ",,,," << format_number(row.target) << ",,,"
         << format_number(std::round(row.runtime_ms * 1000.0) / 1000.0) << ',' << r.regime << '\n';
      continue;
    }
    os << format_number(row.param) << ',' << format_number(row.C) << ',' << format_number(row.per_nu) << ','
       << format_number(row.normalized) << ',' << format_number(row.target) << ','
       << format_number(row.residual) << ',' << format_number(row.err_est) << ','
       << format_number(std::round(row.runtime_ms * 1000.0) / 1000.0) << ',' << r.regime << '\n';
  }
}

}  // namespace nlperim

#include <fftw3.h>

#include <boost/version.hpp>

namespace nlperim {

std::string library_versions() {
  return "boost " + std::to_string(BOOST_VERSION / 100000) + "." +
         std::to_string(BOOST_VERSION / 100 % 1000) + "." + std::to_string(BOOST_VERSION % 100) + ", " +
         fftw_version;
}

}  // namespace nlperim
