#include "staforge/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "staforge/error.hpp"

namespace staforge::io {

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::InvalidArgument, "write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string CsvTable::str() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
    out << '\n';
  }
  return out.str();
}

CsvTable trace_csv(const Trace& trace) {
  CsvTable t;
  const int n = trace.alphas.empty() ? 0 : static_cast<int>(trace.alphas.front().size());
  t.header.push_back("time_ns");
  for (int k = 0; k < n; ++k) {
    t.header.push_back("re_alpha_" + std::to_string(k));
    t.header.push_back("im_alpha_" + std::to_string(k));
  }
  const bool has_output = trace.output.size() == trace.times.size() && !trace.output.empty();
  if (has_output) {
    t.header.push_back("re_ro");
    t.header.push_back("im_ro");
  }
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    std::vector<double> row{trace.times[i]};
    for (int k = 0; k < n; ++k) {
      row.push_back(trace.alphas[i](k).real());
      row.push_back(trace.alphas[i](k).imag());
    }
    if (has_output) {
      row.push_back(trace.output[i].real());
      row.push_back(trace.output[i].imag());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable pulse_csv(const Pulse& pulse, const std::vector<double>& times) {
  CsvTable t;
  t.header = {"time_ns", "re_eps", "im_eps"};
  for (double time : times) {
    const cplx v = pulse.value(time);
    t.rows.push_back({time, v.real(), v.imag()});
  }
  return t;
}

}  // namespace staforge::io
