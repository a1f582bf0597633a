#ifndef QVEPAIR_IO_HPP
#define QVEPAIR_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "qvepair/observables.hpp"
#include "qvepair/solver.hpp"
#include "qvepair/spectrum.hpp"
#include "qvepair/sweeps.hpp"

namespace qvepair::io {

/// 17 significant digits, enough to round-trip any double.
std::string format_number(double value);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Header `P3,p_par_final,f`.
std::string spectrum_csv(const Spectrum& spectrum);

/// Parses spectrum_csv output (transverse momentum and fingerprint are not stored).
Spectrum parse_spectrum_csv(const std::string& text);

/// Header `t,f,g,w,A`.
std::string series_csv(const std::vector<SeriesSample>& series);

/// Header `variant,axis_value,density,mode,n_grid`; failed rows carry density `nan`.
std::string sweep_csv(const SweepResult& result, DensityMode mode);

/// {value, mode, grid: {n_par, n_perp, range}, refinement_change}
nlohmann::json density_json(const DensityResult& density);

}  // namespace qvepair::io

#endif  // QVEPAIR_IO_HPP
