#pragma once

// CSV/JSON serialization. Numbers are written with 17 significant digits and
// a '.' decimal separator regardless of the process locale; masked values are
// empty cells.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mqslink/circuit.hpp"
#include "mqslink/field_coupling.hpp"
#include "mqslink/link_analysis.hpp"

namespace mqslink {

/// 17 significant digits, shortest exponent form for very large/small values.
/// Non-finite values come back empty.
std::string format_double(double v);

inline std::string format_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

inline constexpr const char* kSpectrumHeader = "frequency_hz,h_real,h_imag,h_mag_db,z11_real_ohm,z11_imag_ohm";
inline constexpr const char* kSweepHeader = "param,param_unit,peak_db,peak_freq_hz,bw3db_hz,capacity_bps,p_rx_w";
inline constexpr const char* kFieldMapHeader = "x,y,z,Bx,By,Bz";
inline constexpr const char* kCapacityHeader =
    "threshold_db,f_low_hz,f_high_hz,bandwidth_hz,signal_dbv,snr_db,capacity_bps";

std::string spectrum_csv(const Spectrum& spectrum);
std::string sweep_csv(const SweepResult& sweep);
std::string field_map_csv(const std::vector<FieldSample>& samples);
std::string capacity_csv(const CapacityTable& table);

/// Writes to a sibling temporary file and renames it over `path`, so an
/// existing file is either fully replaced or left untouched. Throws Error
/// naming the path on I/O failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

void emit_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path);
void emit_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path);

}  // namespace mqslink
