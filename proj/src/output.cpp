#include "mqslink/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "mqslink/errors.hpp"

namespace mqslink {

std::string format_double(double v) {
  if (!std::isfinite(v)) return {};
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string spectrum_csv(const Spectrum& s) {
  std::string out = kSpectrumHeader;
  out += '\n';
  for (std::size_t i = 0; i < s.frequency.size(); ++i) {
    const Complex h = s.transfer[i];
    const Complex z = s.z11[i];
    out += format_double(s.frequency[i]) + ',' + format_double(h.real()) + ',' + format_double(h.imag()) + ',' +
           format_double(path_loss_db(h)) + ',' + format_double(z.real()) + ',' + format_double(z.imag()) + '\n';
  }
  return out;
}

std::string sweep_csv(const SweepResult& sw) {
  std::string out = kSweepHeader;
  out += '\n';
  for (const auto& r : sw.rows) {
    out += format_double(r.param) + ',' + sw.param_unit + ',' + format_cell(r.peak_db) + ',' +
           format_cell(r.peak_frequency) + ',' + format_cell(r.bandwidth_3db) + ',' + format_cell(r.capacity) + ',' +
           format_cell(r.received_power) + '\n';
  }
  return out;
}

std::string field_map_csv(const std::vector<FieldSample>& samples) {
  std::string out = kFieldMapHeader;
  out += '\n';
  for (const auto& s : samples) {
    out += format_double(s.position.x()) + ',' + format_double(s.position.y()) + ',' +
           format_double(s.position.z());
    if (s.b) {
      out += ',' + format_double(s.b->x()) + ',' + format_double(s.b->y()) + ',' + format_double(s.b->z());
    } else {
      out += ",,,";
    }
    out += '\n';
  }
  return out;
}

std::string capacity_csv(const CapacityTable& table) {
  std::string out = kCapacityHeader;
  out += '\n';
  for (const auto& r : table.rows) {
    std::optional<double> lo, hi, bw;
    if (r.band) {
      lo = r.band->f_low;
      hi = r.band->f_high;
      bw = r.band->bandwidth;
    }
    out += format_double(r.threshold_db) + ',' + format_cell(lo) + ',' + format_cell(hi) + ',' + format_cell(bw) +
           ',' + format_double(r.signal_dbv) + ',' + format_double(r.snr_db) + ',' + format_cell(r.capacity) + '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignore;
      std::filesystem::remove(tmp, ignore);
      throw Error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    std::filesystem::remove(tmp, ignore);
    throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

void emit_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path) {
  write_file_atomic(path, spectrum_csv(spectrum));
}

void emit_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path) {
  write_file_atomic(path, sweep_csv(sweep));
}

}  // namespace mqslink
